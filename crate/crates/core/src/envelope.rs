//! The multigraded injective envelope `*E_x` of `S/p_x`.
//!
//! `*E_x` is the tensor product of the Laurent ring on the atoms below `x`
//! with the inverse polynomials on the remaining variables `P*_{-x}`. `S`
//! acts through the comultiplication `t_z -> t_z (x) 1 + 1 (x) t_z`: the left
//! factor acts on the Laurent part through `S -> S_x`, the right factor
//! lowers an inverse exponent.
//!
//! Only finitely supported elements are ever built; graded pieces of `*E_x`
//! are infinite dimensional once `rank x >= 2`.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::Matrix;
use crate::poset::{ElementId, SimplicialPoset};
use crate::ring::{self, Multidegree, Polynomial, RingMonomial};
use crate::scalar::{Field, FieldError, Scalar};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum EnvelopeError {
    #[error("the bottom element has no variable")]
    BottomVariable,
    #[error("`{0}` is not an inverse variable of this envelope")]
    NotInverse(String),
    #[error("element lives in *E_{found}, expected *E_{expected}")]
    AmbientMismatch { expected: String, found: String },
    #[error("degree {0} is not componentwise non-negative")]
    NegativeDegree(Multidegree),
    #[error("the zero element has no essential witness")]
    ZeroElement,
    #[error("unknown element `{0}`")]
    UnknownElement(String),
    #[error("`{0}` cannot carry a Laurent exponent here")]
    NotLaurent(String),
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// `prod t_i^{a_i} (x) prod t_z^{-a_z}`, stored densely by element id:
/// `laurent` is nonzero only on atoms below the ambient, `inverse` only on
/// `P*_{-x}`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EnvMonomial {
    pub laurent: Vec<i32>,
    pub inverse: Vec<u32>,
}

impl EnvMonomial {
    pub fn one(n: usize) -> Self {
        EnvMonomial {
            laurent: vec![0; n],
            inverse: vec![0; n],
        }
    }

    pub fn has_inverse_part(&self) -> bool {
        self.inverse.iter().any(|&e| e > 0)
    }
}

/// A finite `K`-combination of monomials of one envelope.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EnvelopeElement {
    ambient: ElementId,
    terms: BTreeMap<EnvMonomial, Scalar>,
}

impl EnvelopeElement {
    pub fn zero(ambient: ElementId) -> Self {
        EnvelopeElement {
            ambient,
            terms: BTreeMap::new(),
        }
    }

    pub fn from_monomial(ambient: ElementId, m: EnvMonomial, c: Scalar) -> Self {
        let mut e = Self::zero(ambient);
        e.add_term(m, c);
        e
    }

    pub fn ambient(&self) -> ElementId {
        self.ambient
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&EnvMonomial, &Scalar)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &EnvMonomial) -> Option<&Scalar> {
        self.terms.get(m)
    }

    pub fn add_term(&mut self, m: EnvMonomial, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += &c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add_assign(&mut self, other: &EnvelopeElement) {
        debug_assert_eq!(self.ambient, other.ambient);
        for (m, c) in &other.terms {
            self.add_term(m.clone(), c.clone());
        }
    }

    pub fn add_scaled(&mut self, other: &EnvelopeElement, k: &Scalar) {
        debug_assert_eq!(self.ambient, other.ambient);
        for (m, c) in &other.terms {
            self.add_term(m.clone(), c * k);
        }
    }

    pub fn scale(&self, k: &Scalar) -> EnvelopeElement {
        let mut out = EnvelopeElement::zero(self.ambient);
        out.add_scaled(self, k);
        out
    }

    pub fn sub(&self, other: &EnvelopeElement) -> EnvelopeElement {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }
}

/// Bounds for enumerating monomials of an envelope.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonomialBox {
    /// Bound on `|a_i|` for every Laurent exponent.
    pub laurent: i32,
    /// Bound on every single inverse exponent.
    pub max_exponent: Option<u32>,
    /// Bound on the depth.
    pub depth: Option<u32>,
}

impl MonomialBox {
    pub fn by_depth(laurent: i32, depth: u32) -> Self {
        MonomialBox {
            laurent,
            max_exponent: None,
            depth: Some(depth),
        }
    }

    pub fn by_exponent(laurent: i32, max_exponent: u32) -> Self {
        MonomialBox {
            laurent,
            max_exponent: Some(max_exponent),
            depth: None,
        }
    }
}

impl fmt::Display for MonomialBox {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "|laurent| <= {}", self.laurent)?;
        if let Some(e) = self.max_exponent {
            write!(f, ", inverse exponents <= {e}")?;
        }
        if let Some(d) = self.depth {
            write!(f, ", depth <= {d}")?;
        }
        Ok(())
    }
}

/// The envelope `*E_x` for a fixed `x`, with its variable partition cached.
#[derive(Debug, Clone)]
pub struct Envelope {
    poset: Arc<SimplicialPoset>,
    x: ElementId,
    laurent_vars: Vec<ElementId>,
    inverse_vars: Vec<ElementId>,
    is_laurent: Vec<bool>,
}

impl Envelope {
    pub fn new(poset: Arc<SimplicialPoset>, x: ElementId) -> Self {
        let n = poset.len();
        let mut is_laurent = vec![false; n];
        let mut laurent_vars = Vec::new();
        let mut inverse_vars = Vec::new();
        for z in poset.proper_elements() {
            if poset.is_atom(z) && poset.le(z, x) {
                is_laurent[z.index()] = true;
                laurent_vars.push(z);
            } else {
                inverse_vars.push(z);
            }
        }
        Envelope {
            poset,
            x,
            laurent_vars,
            inverse_vars,
            is_laurent,
        }
    }

    pub fn poset(&self) -> &Arc<SimplicialPoset> {
        &self.poset
    }

    pub fn ambient(&self) -> ElementId {
        self.x
    }

    /// Atoms below `x`, in global order.
    pub fn laurent_vars(&self) -> &[ElementId] {
        &self.laurent_vars
    }

    /// `P*_{-x}`.
    pub fn inverse_vars(&self) -> &[ElementId] {
        &self.inverse_vars
    }

    pub fn is_inverse_var(&self, z: ElementId) -> bool {
        z != self.poset.bottom() && !self.is_laurent[z.index()]
    }

    fn check(&self, e: &EnvelopeElement) -> Result<(), EnvelopeError> {
        if e.ambient != self.x {
            return Err(EnvelopeError::AmbientMismatch {
                expected: self.poset.name(self.x).into(),
                found: self.poset.name(e.ambient).into(),
            });
        }
        Ok(())
    }

    pub fn zero(&self) -> EnvelopeElement {
        EnvelopeElement::zero(self.x)
    }

    /// `1_x = 1 (x) 1`.
    pub fn unit(&self, field: Field) -> EnvelopeElement {
        EnvelopeElement::from_monomial(self.x, EnvMonomial::one(self.poset.len()), field.one())
    }

    /// Builds a monomial from named exponents; inverse exponents are given as
    /// the non-negative `a_z` of `t_z^{-a_z}`.
    pub fn monomial(&self, laurent: &[(&str, i32)], inverse: &[(&str, u32)]) -> Result<EnvMonomial, EnvelopeError> {
        let mut m = EnvMonomial::one(self.poset.len());
        for &(name, a) in laurent {
            let z = self.lookup(name)?;
            if !self.is_laurent[z.index()] {
                return Err(EnvelopeError::NotLaurent(name.into()));
            }
            m.laurent[z.index()] += a;
        }
        for &(name, a) in inverse {
            let z = self.lookup(name)?;
            if !self.is_inverse_var(z) {
                return Err(EnvelopeError::NotInverse(name.into()));
            }
            m.inverse[z.index()] += a;
        }
        Ok(m)
    }

    fn lookup(&self, name: &str) -> Result<ElementId, EnvelopeError> {
        self.poset
            .id(name)
            .ok_or_else(|| EnvelopeError::UnknownElement(name.into()))
    }

    pub fn degree(&self, m: &EnvMonomial) -> Multidegree {
        let p = &*self.poset;
        let mut d = Multidegree::zero(p.n_atoms());
        for &z in &self.laurent_vars {
            d.0[p.atom_position(z).unwrap()] += m.laurent[z.index()] as i64;
        }
        for &z in &self.inverse_vars {
            let a = m.inverse[z.index()] as i64;
            if a > 0 {
                for &i in p.atoms_below(z) {
                    d.0[i] -= a;
                }
            }
        }
        d
    }

    /// Minus the Z-degree of the inverse factor.
    pub fn depth(&self, m: &EnvMonomial) -> u32 {
        self.inverse_vars
            .iter()
            .map(|&z| m.inverse[z.index()] * self.poset.rank(z))
            .sum()
    }

    /// Largest depth among the terms (0 for the zero element).
    pub fn element_depth(&self, e: &EnvelopeElement) -> u32 {
        e.terms.keys().map(|m| self.depth(m)).max().unwrap_or(0)
    }

    /// Action of one variable `t_z` on a monomial.
    fn act_variable_monomial(&self, z: ElementId, m: &EnvMonomial, c: &Scalar, out: &mut EnvelopeElement) {
        let p = &*self.poset;
        if self.is_laurent[z.index()] {
            let mut m2 = m.clone();
            m2.laurent[z.index()] += 1;
            out.add_term(m2, c.clone());
            return;
        }
        if p.le(z, self.x) {
            let mut m1 = m.clone();
            for &i in p.atoms_below(z) {
                m1.laurent[p.atoms()[i].index()] += 1;
            }
            out.add_term(m1, c.clone());
        }
        if m.inverse[z.index()] > 0 {
            let mut m2 = m.clone();
            m2.inverse[z.index()] -= 1;
            out.add_term(m2, c.clone());
        }
    }

    pub fn act_variable(&self, z: ElementId, e: &EnvelopeElement) -> Result<EnvelopeElement, EnvelopeError> {
        self.check(e)?;
        if z == self.poset.bottom() {
            return Err(EnvelopeError::BottomVariable);
        }
        let mut out = self.zero();
        for (m, c) in &e.terms {
            self.act_variable_monomial(z, m, c, &mut out);
        }
        Ok(out)
    }

    /// `f . e` by iterating single-variable actions.
    pub fn act_polynomial(&self, f: &Polynomial, e: &EnvelopeElement) -> Result<EnvelopeElement, EnvelopeError> {
        self.check(e)?;
        let mut out = self.zero();
        for (rm, c) in f.terms() {
            let mut cur = e.scale(c);
            for z in rm.support() {
                for _ in 0..rm.0[z.index()] {
                    if cur.is_zero() {
                        break;
                    }
                    cur = self.act_variable(z, &cur)?;
                }
            }
            out.add_assign(&cur);
        }
        Ok(out)
    }

    /// `t~_z . e` for `z in P*_{-x}`: lowers the `t_z` inverse exponent.
    pub fn act_tilde(&self, z: ElementId, e: &EnvelopeElement) -> Result<EnvelopeElement, EnvelopeError> {
        self.check(e)?;
        if !self.is_inverse_var(z) {
            return Err(EnvelopeError::NotInverse(self.poset.name(z).into()));
        }
        let mut out = self.zero();
        for (m, c) in &e.terms {
            if m.inverse[z.index()] > 0 {
                let mut m2 = m.clone();
                m2.inverse[z.index()] -= 1;
                out.add_term(m2, c.clone());
            }
        }
        Ok(out)
    }

    /// Multiplication by the Laurent monomial `prod t_i^{shift_i}` (indexed by
    /// element id, atoms below `x` only).
    pub fn laurent_shift(&self, shift: &[i32], e: &EnvelopeElement) -> Result<EnvelopeElement, EnvelopeError> {
        self.check(e)?;
        let mut out = self.zero();
        for (m, c) in &e.terms {
            let mut m2 = m.clone();
            for &z in &self.laurent_vars {
                m2.laurent[z.index()] += shift[z.index()];
            }
            out.add_term(m2, c.clone());
        }
        Ok(out)
    }

    /// Nonzero, depth zero, non-negative Laurent part: an element of `S_x`.
    pub fn lies_in_sx(&self, e: &EnvelopeElement) -> bool {
        !e.is_zero()
            && e.terms
                .keys()
                .all(|m| !m.has_inverse_part() && m.laurent.iter().all(|&a| a >= 0))
    }

    /// Inverse exponent vectors (dense by element id) over `vars` with the
    /// given bounds.
    fn inverse_vectors(&self, vars: &[ElementId], max_exponent: Option<u32>, depth: Option<u32>) -> Vec<Vec<u32>> {
        let n = self.poset.len();
        let mut out = Vec::new();
        let mut cur = vec![0u32; n];
        self.inverse_rec(vars, 0, max_exponent, depth, &mut cur, &mut out);
        out
    }

    fn inverse_rec(
        &self,
        vars: &[ElementId],
        k: usize,
        max_exponent: Option<u32>,
        depth_left: Option<u32>,
        cur: &mut Vec<u32>,
        out: &mut Vec<Vec<u32>>,
    ) {
        if k == vars.len() {
            out.push(cur.clone());
            return;
        }
        let z = vars[k];
        let r = self.poset.rank(z);
        let mut e = 0u32;
        loop {
            if max_exponent.is_some_and(|mx| e > mx) {
                break;
            }
            let used = e * r;
            if depth_left.is_some_and(|d| used > d) {
                break;
            }
            assert!(
                max_exponent.is_some() || depth_left.is_some(),
                "unbounded monomial enumeration"
            );
            cur[z.index()] = e;
            self.inverse_rec(vars, k + 1, max_exponent, depth_left.map(|d| d - used), cur, out);
            e += 1;
        }
        cur[z.index()] = 0;
    }

    /// All monomials inside the box.
    pub fn monomials_in_box(&self, bx: &MonomialBox) -> Vec<EnvMonomial> {
        let inv = self.inverse_vectors(&self.inverse_vars, bx.max_exponent, bx.depth);
        let mut lau = vec![vec![0i32; self.poset.len()]];
        for &z in &self.laurent_vars {
            lau = lau
                .into_iter()
                .flat_map(|v| {
                    (-bx.laurent..=bx.laurent).map(move |a| {
                        let mut w = v.clone();
                        w[z.index()] = a;
                        w
                    })
                })
                .collect();
        }
        let mut out = Vec::with_capacity(inv.len() * lau.len());
        for l in &lau {
            for v in &inv {
                out.push(EnvMonomial {
                    laurent: l.clone(),
                    inverse: v.clone(),
                });
            }
        }
        out
    }

    /// Monomials of multidegree `a` and depth at most `depth`: a basis of
    /// `[(*E_x)^{>= -depth}]_a`.
    pub fn monomials_of_degree(&self, a: &Multidegree, depth: u32) -> Vec<EnvMonomial> {
        let p = &*self.poset;
        let mut out = Vec::new();
        for v in self.inverse_vectors(&self.inverse_vars, None, Some(depth)) {
            let mut m = EnvMonomial {
                laurent: vec![0; p.len()],
                inverse: v,
            };
            let d = self.degree(&m);
            // the Laurent part must make up the difference on atoms below x
            let mut ok = true;
            for (i, &atom) in p.atoms().iter().enumerate() {
                if self.is_laurent[atom.index()] {
                    m.laurent[atom.index()] = (a.0[i] - d.0[i]) as i32;
                } else if d.0[i] != a.0[i] {
                    ok = false;
                    break;
                }
            }
            if ok {
                out.push(m);
            }
        }
        out
    }

    /// Degree-zero monomials of depth `1..=depth`: a basis of the degree-zero
    /// part of `L(*E_x)` up to that depth.
    pub fn degree_zero_nonunit_monomials(&self, depth: u32) -> Vec<EnvMonomial> {
        let zero = Multidegree::zero(self.poset.n_atoms());
        self.monomials_of_degree(&zero, depth)
            .into_iter()
            .filter(EnvMonomial::has_inverse_part)
            .collect()
    }

    /// A basis of the elements of `[(*E_x)^{>= -depth}]_a` killed by every
    /// generator of `I_P`.
    pub fn annihilator_basis(&self, a: &Multidegree, depth: u32, field: Field) -> Result<Vec<EnvelopeElement>, EnvelopeError> {
        if !a.is_nonnegative() {
            return Err(EnvelopeError::NegativeDegree(a.clone()));
        }
        let basis = self.monomials_of_degree(a, depth);
        let gens = ring::face_ring_generators(&self.poset, field);
        let mut rows: BTreeMap<(usize, EnvMonomial), usize> = BTreeMap::new();
        let mut entries = Vec::new();
        for (col, m) in basis.iter().enumerate() {
            let e = EnvelopeElement::from_monomial(self.x, m.clone(), field.one());
            for (gi, g) in gens.iter().enumerate() {
                for (img, c) in self.act_polynomial(g, &e)?.terms {
                    let next = rows.len();
                    let row = *rows.entry((gi, img)).or_insert(next);
                    entries.push((row, col, c));
                }
            }
        }
        let mut mat = Matrix::zeros(field, rows.len(), basis.len());
        for (r, c, v) in entries {
            mat.set(r, c, v);
        }
        Ok(mat
            .kernel_basis()
            .into_iter()
            .map(|v| {
                let mut e = self.zero();
                for (m, c) in basis.iter().zip(v) {
                    e.add_term(m.clone(), c);
                }
                e
            })
            .collect())
    }

    /// `dim_K [S_x]_a`: one if the support of `a >= 0` lies in the atoms of
    /// `x`, zero otherwise.
    pub fn sx_dimension(&self, a: &Multidegree) -> usize {
        let below = self.poset.atoms_below(self.x);
        usize::from(a.is_nonnegative() && a.support().iter().all(|i| below.contains(i)))
    }

    /// Some `f` in `S` with `0 != f . e` in `S_x`: multiply by `t~_z` until the
    /// depth reaches zero, then clear negative Laurent exponents.
    pub fn essential_witness(&self, e: &EnvelopeElement, field: Field) -> Result<Polynomial, EnvelopeError> {
        self.check(e)?;
        if e.is_zero() {
            return Err(EnvelopeError::ZeroElement);
        }
        let p = &*self.poset;
        let mut f = Polynomial::one(p.len(), field);
        let mut cur = e.clone();
        while self.element_depth(&cur) > 0 {
            let z = *self
                .inverse_vars
                .iter()
                .max_by_key(|&&z| {
                    let best = cur.terms.keys().map(|m| m.inverse[z.index()]).max().unwrap_or(0);
                    (best, std::cmp::Reverse(z))
                })
                .expect("positive depth needs an inverse variable");
            f = f.mul(&ring::tilde_of(p, self.x, z, field));
            cur = self.act_tilde(z, &cur)?;
        }
        let mut clear = RingMonomial::one(p.len());
        for &z in &self.laurent_vars {
            let low = cur.terms.keys().map(|m| m.laurent[z.index()]).min().unwrap_or(0);
            clear.0[z.index()] = (-low).max(0) as u32;
        }
        Ok(Polynomial::from_term(clear, field.one()).mul(&f))
    }

    pub fn to_json(&self, e: &EnvelopeElement) -> ElementJson {
        let p = &*self.poset;
        ElementJson {
            ambient: p.name(e.ambient).into(),
            terms: e
                .terms
                .iter()
                .map(|(m, c)| EnvTermJson {
                    laurent: self
                        .laurent_vars
                        .iter()
                        .filter(|z| m.laurent[z.index()] != 0)
                        .map(|&z| (p.name(z).into(), m.laurent[z.index()]))
                        .collect(),
                    inverse: self
                        .inverse_vars
                        .iter()
                        .filter(|z| m.inverse[z.index()] != 0)
                        .map(|&z| (p.name(z).into(), m.inverse[z.index()]))
                        .collect(),
                    coeff: c.to_string(),
                })
                .collect(),
        }
    }

    pub fn from_json(&self, js: &ElementJson, field: Field) -> Result<EnvelopeElement, EnvelopeError> {
        let amb = self.lookup(&js.ambient)?;
        if amb != self.x {
            return Err(EnvelopeError::AmbientMismatch {
                expected: self.poset.name(self.x).into(),
                found: js.ambient.clone(),
            });
        }
        let mut e = self.zero();
        for t in &js.terms {
            let lau: Vec<(&str, i32)> = t.laurent.iter().map(|(k, &v)| (k.as_str(), v)).collect();
            let inv: Vec<(&str, u32)> = t.inverse.iter().map(|(k, &v)| (k.as_str(), v)).collect();
            let m = self.monomial(&lau, &inv)?;
            e.add_term(m, field.parse_scalar(&t.coeff)?);
        }
        Ok(e)
    }

    pub fn display<'a>(&'a self, e: &'a EnvelopeElement) -> ElementDisplay<'a> {
        ElementDisplay { env: self, elem: e }
    }
}

/// JSON form: `{ "ambient": name, "terms": [ {"laurent": {...}, "inverse": {...}, "coeff": "p/q"} ] }`.
/// Inverse exponents are the non-negative `a_z` of `t_z^{-a_z}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ElementJson {
    pub ambient: String,
    pub terms: Vec<EnvTermJson>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnvTermJson {
    pub laurent: BTreeMap<String, i32>,
    pub inverse: BTreeMap<String, u32>,
    pub coeff: String,
}

pub struct ElementDisplay<'a> {
    env: &'a Envelope,
    elem: &'a EnvelopeElement,
}

impl fmt::Display for ElementDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.elem.is_zero() {
            return write!(f, "0");
        }
        let p = &*self.env.poset;
        for (k, (m, c)) in self.elem.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            let left: Vec<String> = self
                .env
                .laurent_vars
                .iter()
                .filter(|z| m.laurent[z.index()] != 0)
                .map(|&z| format!("t[{}]^{}", p.name(z), m.laurent[z.index()]))
                .collect();
            let right: Vec<String> = self
                .env
                .inverse_vars
                .iter()
                .filter(|z| m.inverse[z.index()] != 0)
                .map(|&z| format!("t[{}]^-{}", p.name(z), m.inverse[z.index()]))
                .collect();
            let left = if left.is_empty() { "1".into() } else { left.join("*") };
            let right = if right.is_empty() { "1".into() } else { right.join("*") };
            if c.is_one() {
                write!(f, "{left} (x) {right}")?;
            } else {
                write!(f, "({c}) {left} (x) {right}")?;
            }
        }
        Ok(())
    }
}
