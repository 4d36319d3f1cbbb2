mod common;

use common::*;
use facering::envelope::{EnvMonomial, Envelope, EnvelopeElement, MonomialBox};
use facering::ring::{self, RingMonomial};
use facering::{bundled, ElementId, Field, Polynomial, SimplicialPoset};
use rand::Rng;

/// `Delta(t_{z_1} ... t_{z_m}) = sum_T pi_x(prod_{i in T} t_{z_i}) (x) prod_{i not in T} t_{z_i}`
/// applied to a monomial, written out subset by subset.
fn subset_expansion(p: &SimplicialPoset, env: &Envelope, vars: &[ElementId], m: &EnvMonomial, field: Field) -> EnvelopeElement {
    let x = env.ambient();
    let mut out = env.zero();
    let (left_only, mixed): (Vec<ElementId>, Vec<ElementId>) = vars
        .iter()
        .partition(|&&z| p.is_atom(z) && p.le(z, x));
    for mask in 0u32..(1 << mixed.len()) {
        let mut lau = m.laurent.clone();
        let mut inv: Vec<i64> = m.inverse.iter().map(|&v| v as i64).collect();
        let mut zero = false;
        for &z in &left_only {
            lau[z.index()] += 1;
        }
        for (k, &z) in mixed.iter().enumerate() {
            if mask >> k & 1 == 1 {
                if !p.le(z, x) {
                    zero = true;
                    break;
                }
                for a in p.elements().filter(|&a| p.is_atom(a) && p.le(a, z)) {
                    lau[a.index()] += 1;
                }
            } else {
                inv[z.index()] -= 1;
            }
        }
        if zero || inv.iter().any(|&v| v < 0) {
            continue;
        }
        let mono = EnvMonomial {
            laurent: lau,
            inverse: inv.into_iter().map(|v| v as u32).collect(),
        };
        out.add_term(mono, field.one());
    }
    out
}

#[test]
fn action_matches_subset_expansion() {
    for name in bundled::NAMES {
        let p = load(name);
        let q = Field::Rational;
        let vars: Vec<ElementId> = p.proper_elements().collect();
        let mut r = rng(3);
        for x in p.elements() {
            let env = Envelope::new(p.clone(), x);
            let pool = depth_pool(&env, 2, 3);
            for _ in 0..100 {
                let m = pool[r.gen_range(0..pool.len())].clone();
                let chosen: Vec<ElementId> = (0..r.gen_range(0..=3)).map(|_| vars[r.gen_range(0..vars.len())]).collect();
                let mut rm = RingMonomial::one(p.len());
                for z in &chosen {
                    rm.0[z.index()] += 1;
                }
                let f = Polynomial::from_term(rm, q.one());
                let e = EnvelopeElement::from_monomial(x, m.clone(), q.one());
                assert_eq!(env.act_polynomial(&f, &e).unwrap(), subset_expansion(&p, &env, &chosen, &m, q), "{name}");
            }
        }
    }
}

#[test]
fn tilde_action_is_inverse_shift() {
    for name in bundled::NAMES {
        let p = load(name);
        let q = Field::Rational;
        let mut r = rng(4);
        for x in p.elements() {
            let env = Envelope::new(p.clone(), x);
            let pool = depth_pool(&env, 2, 3);
            if env.inverse_vars().is_empty() {
                continue;
            }
            for _ in 0..1000 / p.len() + 1 {
                let m = pool[r.gen_range(0..pool.len())].clone();
                let z = env.inverse_vars()[r.gen_range(0..env.inverse_vars().len())];
                let e = EnvelopeElement::from_monomial(x, m.clone(), q.one());
                let via = env.act_polynomial(&ring::tilde_of(&p, x, z, q), &e).unwrap();
                let direct = env.act_tilde(z, &e).unwrap();
                assert_eq!(via, direct, "{name}");
                let mut shifted = m.clone();
                if shifted.inverse[z.index()] > 0 {
                    shifted.inverse[z.index()] -= 1;
                    assert_eq!(direct, EnvelopeElement::from_monomial(x, shifted, q.one()));
                } else {
                    assert!(direct.is_zero());
                }
            }
        }
    }
}

#[test]
fn additivity_grading_and_depth() {
    for (k, name) in bundled::NAMES.iter().enumerate() {
        let p = load(name);
        for field in [Field::Rational, Field::Prime(2)] {
            let mut r = rng(50 + k as u64);
            for x in p.elements() {
                let env = Envelope::new(p.clone(), x);
                let pool = depth_pool(&env, 2, 3);
                for _ in 0..40 {
                    let f = random_polynomial(&mut r, &p, field, 3, 3);
                    let g = random_polynomial(&mut r, &p, field, 3, 3);
                    let e = random_element(&mut r, &env, &pool, field, 3);
                    let lhs = env.act_polynomial(&(&f + &g), &e).unwrap();
                    let mut rhs = env.act_polynomial(&f, &e).unwrap();
                    rhs.add_assign(&env.act_polynomial(&g, &e).unwrap());
                    assert_eq!(lhs, rhs);
                    assert_eq!(env.act_polynomial(&Polynomial::one(p.len(), field), &e).unwrap(), e);

                    let h = random_monomial_poly(&mut r, &p, field, 2);
                    let m = pool[r.gen_range(0..pool.len())].clone();
                    let em = EnvelopeElement::from_monomial(x, m.clone(), field.one());
                    let want = &h.homogeneous_degree(&p).unwrap() + &env.degree(&m);
                    for (t, _) in env.act_polynomial(&h, &em).unwrap().terms() {
                        assert_eq!(env.degree(t), want);
                        assert!(env.depth(t) <= env.depth(&m));
                    }
                }
            }
        }
    }
}

#[test]
fn ideal_kills_the_copy_of_sx() {
    for name in bundled::NAMES {
        let p = load(name);
        let q = Field::Rational;
        let gens = ring::face_ring_generators(&p, q);
        for x in p.elements() {
            let env = Envelope::new(p.clone(), x);
            for m in env.monomials_in_box(&MonomialBox::by_depth(2, 0)) {
                if m.laurent.iter().any(|&a| a < 0) {
                    continue;
                }
                let e = EnvelopeElement::from_monomial(x, m, q.one());
                for g in &gens {
                    assert!(env.act_polynomial(g, &e).unwrap().is_zero(), "{name}");
                }
            }
        }
    }
}

#[test]
fn nonzero_degrees_of_envelopes() {
    // [*E_x]_a != 0 exactly when a_i <= 0 for every atom i outside x; a
    // nonzero piece already has a monomial of depth sum_i max(0, -a_i)
    for name in bundled::NAMES {
        let p = load(name);
        for x in p.elements() {
            let env = Envelope::new(p.clone(), x);
            for a in grid(p.n_atoms(), -2, 1) {
                let depth: i64 = a.iter().map(|&v| (-v).max(0)).sum();
                let found = !env.monomials_of_degree(&facering::Multidegree(a.clone()), depth as u32).is_empty();
                let allowed = a
                    .iter()
                    .enumerate()
                    .all(|(i, &v)| v <= 0 || p.le(p.atoms()[i], x));
                assert_eq!(found, allowed, "{name} x={} a={a:?}", p.name(x));
            }
        }
    }
}

#[test]
fn annihilator_matches_definition_over_f3() {
    let p = load("double_triangle");
    let f3 = Field::Prime(3);
    for x in p.elements() {
        let env = Envelope::new(p.clone(), x);
        for a in grid(p.n_atoms(), 0, 2) {
            let basis = env.annihilator_basis(&facering::Multidegree(a.clone()), 3, f3).unwrap();
            assert_eq!(basis.len(), sx_dim_oracle(&p, x, &a));
            for e in &basis {
                assert!(env.lies_in_sx(e));
            }
        }
    }
}

#[test]
fn witnesses_over_f2() {
    let f2 = Field::Prime(2);
    for name in bundled::NAMES {
        let p = load(name);
        let mut r = rng(77);
        for x in p.elements() {
            let env = Envelope::new(p.clone(), x);
            let pool = depth_pool(&env, 3, 3);
            for _ in 0..30 {
                let e = random_element(&mut r, &env, &pool, f2, 4);
                let f = env.essential_witness(&e, f2).unwrap();
                assert!(env.lies_in_sx(&env.act_polynomial(&f, &e).unwrap()));
            }
        }
    }
}
