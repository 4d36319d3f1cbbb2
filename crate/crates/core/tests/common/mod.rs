#![allow(dead_code)]

use std::sync::Arc;

use facering::envelope::{EnvMonomial, Envelope, EnvelopeElement, MonomialBox};
use facering::ring::RingMonomial;
use facering::{bundled, ElementId, Field, Polynomial, Scalar, SimplicialPoset};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn load(name: &str) -> Arc<SimplicialPoset> {
    Arc::new(bundled::poset(name).unwrap())
}

pub fn id(p: &SimplicialPoset, name: &str) -> ElementId {
    p.id(name).unwrap_or_else(|| panic!("no element {name}"))
}

pub fn small_scalar<R: Rng>(rng: &mut R, field: Field) -> Scalar {
    loop {
        let c = field.from_i64(rng.gen_range(-4..=4));
        if !c.is_zero() {
            return c;
        }
    }
}

/// Random polynomial with up to `terms` monomials of total degree <= `deg`.
pub fn random_polynomial<R: Rng>(rng: &mut R, p: &SimplicialPoset, field: Field, deg: u32, terms: usize) -> Polynomial {
    let vars: Vec<ElementId> = p.proper_elements().collect();
    let mut f = Polynomial::zero(p.len());
    if vars.is_empty() {
        return Polynomial::constant(p.len(), small_scalar(rng, field));
    }
    for _ in 0..rng.gen_range(1..=terms) {
        let mut m = RingMonomial::one(p.len());
        for _ in 0..rng.gen_range(0..=deg) {
            m.0[vars.choose(rng).unwrap().index()] += 1;
        }
        f.add_term(m, small_scalar(rng, field));
    }
    f
}

/// Random homogeneous polynomial: products of `deg` random variables with
/// the same multidegree as a fixed first product.
pub fn random_monomial_poly<R: Rng>(rng: &mut R, p: &SimplicialPoset, field: Field, deg: u32) -> Polynomial {
    let vars: Vec<ElementId> = p.proper_elements().collect();
    let mut m = RingMonomial::one(p.len());
    for _ in 0..deg {
        m.0[vars.choose(rng).unwrap().index()] += 1;
    }
    Polynomial::from_term(m, small_scalar(rng, field))
}

/// Random nonzero element with at most `terms` monomials from the box.
pub fn random_element<R: Rng>(rng: &mut R, env: &Envelope, pool: &[EnvMonomial], field: Field, terms: usize) -> EnvelopeElement {
    let mut e = env.zero();
    while e.is_zero() {
        for _ in 0..rng.gen_range(1..=terms) {
            e.add_term(pool.choose(rng).unwrap().clone(), small_scalar(rng, field));
        }
    }
    e
}

pub fn depth_pool(env: &Envelope, laurent: i32, depth: u32) -> Vec<EnvMonomial> {
    env.monomials_in_box(&MonomialBox::by_depth(laurent, depth))
}

/// `binom(n, k)` as an integer, by the multiplicative formula.
pub fn binom(n: u64, k: u64) -> i64 {
    let mut r: i128 = 1;
    for i in 0..k as i128 {
        r = r * (n as i128 - i) / (i + 1);
    }
    r as i64
}

/// `dim_K [S_x]_a` from the definition: `S_x` is the polynomial ring on
/// the atoms below `x`, so each degree `a >= 0` supported there has one
/// monomial.
pub fn sx_dim_oracle(p: &SimplicialPoset, x: ElementId, a: &[i64]) -> usize {
    let ok = a.iter().enumerate().all(|(i, &v)| {
        v >= 0 && (v == 0 || p.le(p.atoms()[i], x))
    });
    usize::from(ok)
}

/// All integer vectors in `[lo, hi]^n`.
pub fn grid(n: usize, lo: i64, hi: i64) -> Vec<Vec<i64>> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|v| {
                (lo..=hi).map(move |k| {
                    let mut w = v.clone();
                    w.push(k);
                    w
                })
            })
            .collect();
    }
    out
}
