mod common;

use std::collections::BTreeMap;

use common::*;
use facering::linalg::Matrix;
use facering::ring::{self, Multidegree, RewriteStrategy, RingMonomial};
use facering::{bundled, ElementId, Field, Polynomial, SimplicialPoset};
use proptest::prelude::*;

fn poly_strategy(p: &SimplicialPoset, field: Field) -> impl Strategy<Value = Polynomial> {
    let vars: Vec<ElementId> = p.proper_elements().collect();
    let n = p.len();
    let term = (proptest::collection::vec(proptest::sample::select(vars), 0..=3), -5i64..=5);
    proptest::collection::vec(term, 0..=4).prop_map(move |terms| {
        let mut f = Polynomial::zero(n);
        for (vs, c) in terms {
            let mut m = RingMonomial::one(n);
            for v in vs {
                m.0[v.index()] += 1;
            }
            f.add_term(m, field.from_i64(c));
        }
        f
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn ring_axioms_on_p1(
        (f, g, h) in {
            let p = load("p1");
            (poly_strategy(&p, Field::Rational), poly_strategy(&p, Field::Rational), poly_strategy(&p, Field::Rational))
        }
    ) {
        prop_assert_eq!(f.mul(&g).mul(&h), f.mul(&g.mul(&h)));
        prop_assert_eq!(f.mul(&(&g + &h)), &f.mul(&g) + &f.mul(&h));
        prop_assert_eq!(f.mul(&g), g.mul(&f));
        prop_assert!((&f - &f).is_zero());
    }

    #[test]
    fn straighten_is_linear_and_idempotent(
        (f, g) in {
            let p = load("double_triangle");
            (poly_strategy(&p, Field::Prime(3)), poly_strategy(&p, Field::Prime(3)))
        }
    ) {
        let p = load("double_triangle");
        let s = ring::straighten(&p, &(&f + &g));
        prop_assert_eq!(&s, &(&ring::straighten(&p, &f) + &ring::straighten(&p, &g)));
        prop_assert_eq!(ring::straighten(&p, &s), s.clone());
        for (m, _) in s.terms() {
            prop_assert!(m.is_chain(&p));
        }
    }
}

#[test]
fn degrees_add_under_multiplication() {
    for name in bundled::NAMES {
        let p = load(name);
        let mut r = rng(11);
        for _ in 0..200 {
            let f = random_monomial_poly(&mut r, &p, Field::Rational, 2);
            let g = random_monomial_poly(&mut r, &p, Field::Rational, 3);
            let (df, dg) = (f.homogeneous_degree(&p).unwrap(), g.homogeneous_degree(&p).unwrap());
            assert_eq!(f.mul(&g).homogeneous_degree(&p).unwrap(), &df + &dg);
        }
    }
}

#[test]
fn omega_shift_of_running_example() {
    let p = load("p1");
    assert_eq!(ring::omega_shift(&p), Multidegree(vec![3, 3]));
}

#[test]
fn strategies_agree_and_potential_rises() {
    for (k, name) in bundled::NAMES.iter().enumerate() {
        let p = load(name);
        let mut r = rng(700 + k as u64);
        for field in [Field::Rational, Field::Prime(2)] {
            for _ in 0..1000 {
                let f = random_polynomial(&mut r, &p, field, 4, 4);
                let (a, sa) = ring::straighten_with(&p, &f, RewriteStrategy::Canonical);
                let (b, sb) = ring::straighten_with(&p, &f, RewriteStrategy::Reversed);
                assert_eq!(a, b, "{name}: {}", f.display(&p));
                assert_eq!(sa.potential_failures + sb.potential_failures, 0, "{name}");
            }
        }
    }
}

#[test]
fn generators_and_chains() {
    for name in bundled::NAMES {
        let p = load(name);
        for g in ring::face_ring_generators(&p, Field::Rational) {
            assert!(ring::ideal_member(&p, &g), "{name}");
        }
        let n = p.len();
        for x in p.proper_elements() {
            for y in p.proper_elements() {
                if p.le(x, y) {
                    let m = RingMonomial::var(n, x).mul(&RingMonomial::var(n, y));
                    assert!(!ring::ideal_member(&p, &Polynomial::from_term(m, Field::Rational.one())));
                }
            }
        }
    }
}

/// Monomials of total degree `deg` over all variables.
fn monomials_of_total_degree(p: &SimplicialPoset, deg: u32) -> Vec<RingMonomial> {
    let vars: Vec<ElementId> = p.proper_elements().collect();
    let mut out = vec![(RingMonomial::one(p.len()), 0usize)];
    for _ in 0..deg {
        out = out
            .into_iter()
            .flat_map(|(m, start)| {
                vars[start..].iter().enumerate().map(move |(k, v)| {
                    let mut m2 = m.clone();
                    m2.0[v.index()] += 1;
                    (m2, start + k)
                })
            })
            .collect();
    }
    out.into_iter().map(|(m, _)| m).collect()
}

/// Membership in `I_P` by linear algebra: `f` homogeneous lies in the span
/// of `m * g` over generators `g` and monomials `m` of the right degree.
fn in_ideal_by_linear_algebra(p: &SimplicialPoset, f: &Polynomial, field: Field) -> bool {
    if f.is_zero() {
        return true;
    }
    let deg = f.homogeneous_degree(p).expect("homogeneous");
    let mut spanning = Vec::new();
    for g in ring::face_ring_generators(p, field) {
        let dg = g.homogeneous_degree(p).unwrap();
        let budget = (deg.total() - dg.total()).max(0) as u32;
        for k in 0..=budget {
            for m in monomials_of_total_degree(p, k) {
                if &m.degree(p) + &dg == deg {
                    spanning.push(Polynomial::from_term(m, field.one()).mul(&g));
                }
            }
        }
    }
    let mut index: BTreeMap<RingMonomial, usize> = BTreeMap::new();
    for h in spanning.iter().chain(std::iter::once(f)) {
        for (m, _) in h.terms() {
            let k = index.len();
            index.entry(m.clone()).or_insert(k);
        }
    }
    let build = |cols: &[&Polynomial]| {
        let mut a = Matrix::zeros(field, index.len(), cols.len());
        for (j, h) in cols.iter().enumerate() {
            for (m, c) in h.terms() {
                a.set(index[m], j, c.clone());
            }
        }
        a
    };
    let cols: Vec<&Polynomial> = spanning.iter().collect();
    let mut with_f = cols.clone();
    with_f.push(f);
    build(&cols).rank() == build(&with_f).rank()
}

#[test]
fn straightening_difference_lies_in_ideal() {
    for name in ["p1", "hollow_triangle", "double_triangle"] {
        let p = load(name);
        let field = Field::Rational;
        let mut r = rng(31);
        for _ in 0..60 {
            let f = random_monomial_poly(&mut r, &p, field, 3);
            let s = ring::straighten(&p, &f);
            assert!(in_ideal_by_linear_algebra(&p, &(&f - &s), field), "{name}: {}", f.display(&p));
        }
    }
}

#[test]
fn specific_elements_lie_in_ideal_by_linear_algebra() {
    let p = load("p1");
    let q = Field::Rational;
    let x = id(&p, "x");
    let u = [id(&p, "y1"), id(&p, "y2")];
    let fu = ring::f_u(&p, x, &u, q).unwrap();
    assert!(in_ideal_by_linear_algebra(&p, &fu, q));
    let g = ring::g_pair(&p, x, &u, x, id(&p, "z"), q).unwrap();
    assert!(in_ideal_by_linear_algebra(&p, &g, q));
    assert!(!in_ideal_by_linear_algebra(&p, &Polynomial::var(p.len(), x, q), q));
}
