mod common;

use std::sync::Arc;

use common::*;
use facering::cleanmap::{self, Composite, EnvelopeMap};
use facering::envelope::{Envelope, EnvelopeElement, MonomialBox};
use facering::{bundled, Field, Multidegree};

fn every_cover(name: &str) -> Vec<(facering::ElementId, facering::ElementId)> {
    let p = load(name);
    p.elements()
        .flat_map(|x| p.covered_by(x).iter().map(move |&y| (x, y)).collect::<Vec<_>>())
        .collect()
}

#[test]
fn cover_maps_are_linear_in_every_characteristic() {
    for name in bundled::NAMES {
        let p = load(name);
        for field in [Field::Rational, Field::Prime(2), Field::Prime(3), Field::Prime(5)] {
            for (x, y) in every_cover(name) {
                let f = cleanmap::cover_clean_map(&p, field, x, y).unwrap();
                let rep = cleanmap::check_linearity(&f, &MonomialBox::by_depth(2, 2)).unwrap();
                assert!(rep.passed(), "{name} over {field}: {rep}");
            }
        }
    }
}

#[test]
fn unit_pairing_detects_the_unit() {
    // [psi(alpha) : 1_z] != 0 exactly for alpha = 1_x
    let q = Field::Rational;
    for name in bundled::NAMES {
        let p = load(name);
        for x in p.elements() {
            let env = Envelope::new(p.clone(), x);
            let zero = Multidegree::zero(p.n_atoms());
            let monos = env.monomials_of_degree(&zero, 4);
            for z in p.elements().filter(|&z| p.le(z, x)) {
                let chain = &p.saturated_chains(x, z)[0];
                let psi = cleanmap::compose_chain(&p, q, chain).unwrap();
                let unit_z = Envelope::new(p.clone(), z).unit(q);
                let (u, _) = unit_z.terms().next().unwrap();
                for m in &monos {
                    let hit = psi.apply_monomial(m).unwrap().coefficient(u).is_some();
                    assert_eq!(hit, !m.has_inverse_part(), "{name}");
                }
            }
        }
    }
}

#[test]
fn scaled_maps_keep_the_unit_direction() {
    let q = Field::Rational;
    let p = load("double_triangle");
    for x in p.elements() {
        for z in p.elements().filter(|&z| p.le(z, x)) {
            for chain in p.saturated_chains(x, z) {
                let k = q.from_i64(-3);
                let psi = cleanmap::compose_chain(&p, q, &chain).unwrap().scaled(&k);
                let img = psi.apply(&Envelope::new(p.clone(), x).unit(q)).unwrap();
                assert_eq!(img, Envelope::new(p.clone(), z).unit(q).scale(&k));
            }
        }
    }
}

#[test]
fn laurent_linearity_on_atoms_of_the_target() {
    let q = Field::Rational;
    for name in bundled::NAMES {
        let p = load(name);
        for (x, y) in every_cover(name) {
            let psi = cleanmap::cover_clean_map(&p, q, x, y).unwrap();
            let src = Envelope::new(p.clone(), x);
            let tgt = Envelope::new(p.clone(), y);
            for &a in tgt.laurent_vars() {
                for s in [-1, 1] {
                    let mut shift = vec![0; p.len()];
                    shift[a.index()] = s;
                    for m in src.monomials_in_box(&MonomialBox::by_depth(2, 2)) {
                        let e = EnvelopeElement::from_monomial(x, m, q.one());
                        let lhs = psi.apply(&src.laurent_shift(&shift, &e).unwrap()).unwrap();
                        let rhs = tgt.laurent_shift(&shift, &psi.apply(&e).unwrap()).unwrap();
                        assert_eq!(lhs, rhs, "{name}");
                    }
                }
            }
        }
    }
}

#[test]
fn composable_triples_stay_clean() {
    for name in bundled::NAMES {
        let p = load(name);
        for field in [Field::Rational, Field::Prime(2)] {
            for (x, y) in every_cover(name) {
                for &w in p.covered_by(y) {
                    let phi = cleanmap::cover_clean_map(&p, field, x, y).unwrap();
                    let psi = cleanmap::cover_clean_map(&p, field, y, w).unwrap();
                    assert!(cleanmap::check_clean(&phi, 3).unwrap().passed());
                    assert!(cleanmap::check_clean(&psi, 3).unwrap().passed());
                    let both = Composite::new(Arc::new(phi), Arc::new(psi));
                    assert!(cleanmap::check_clean(&both, 3).unwrap().passed(), "{name}");
                }
            }
        }
    }
}

#[test]
fn sigma_is_linear_and_fixes_the_unit() {
    let q = Field::Rational;
    for name in bundled::NAMES {
        let p = load(name);
        for x in p.elements().filter(|&x| p.rank(x) >= 2) {
            let env = Envelope::new(p.clone(), x);
            for lambda in [q.one(), q.from_i64(-2)] {
                let sigma = cleanmap::nonclean_automorphism(&env, q, &lambda).unwrap();
                assert_eq!(sigma.apply(&env.unit(q)).unwrap(), env.unit(q));
                let rep = cleanmap::check_linearity(&sigma, &MonomialBox::by_depth(1, 3)).unwrap();
                assert!(rep.passed(), "{name}: {rep}");
                let inv = sigma.neumann_inverse(64);
                let round = Composite::new(Arc::new(sigma), Arc::new(inv));
                let ident = cleanmap::GradedEndomap::identity(env.clone(), q);
                assert!(cleanmap::check_agree(&round, &ident, &MonomialBox::by_depth(2, 3)).unwrap().passed());
            }
        }
    }
}

#[test]
fn tau_coefficients_vanish_across_degrees() {
    let p = load("p1");
    let q = Field::Rational;
    let x = id(&p, "x");
    let env = Envelope::new(p.clone(), x);
    let psi: Arc<dyn EnvelopeMap> = Arc::new(cleanmap::cover_clean_map(&p, q, x, id(&p, "y2")).unwrap());
    let monos = env.monomials_in_box(&MonomialBox::by_depth(1, 2));
    for a in &monos {
        for b in &monos {
            let c = cleanmap::tau_reconstruct(&env, psi.clone(), a, b).unwrap();
            if env.degree(a) != env.degree(b) {
                assert!(c.is_zero());
            } else {
                assert_eq!(c.is_one(), a == b);
            }
        }
    }
}

#[test]
fn reports_serialize() {
    let p = load("p1");
    let q = Field::Rational;
    let psi = cleanmap::cover_clean_map(&p, q, id(&p, "x"), id(&p, "y1")).unwrap();
    let rep = cleanmap::check_clean(&psi, 2).unwrap();
    let js = serde_json::to_value(&rep).unwrap();
    assert_eq!(js["status"], "pass");
    assert_eq!(js["property"], "clean");
    assert!(js["box"].as_str().unwrap().contains("depth <= 2"));
    assert!(js["witness"].is_null());
}
