//! Sparse polynomials in `S = K[t_z : z in P*]`, the atom-support grading,
//! the face-ring relations and a straightening normal form modulo `I_P`.

use std::cmp::Reverse;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::poset::{ElementId, SimplicialPoset};
use crate::scalar::{Field, FieldError, Scalar};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RingError {
    #[error("the bottom element has no variable")]
    BottomVariable,
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("cannot parse polynomial: {0}")]
    Parse(String),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("precondition violated: {0}")]
    Precondition(String),
}

/// A vector in `Z^n`, `n` the number of atoms.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Multidegree(pub Vec<i64>);

impl Multidegree {
    pub fn zero(n: usize) -> Self {
        Multidegree(vec![0; n])
    }

    pub fn unit(n: usize, i: usize) -> Self {
        let mut v = vec![0; n];
        v[i] = 1;
        Multidegree(v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Componentwise `self <= other`.
    pub fn le(&self, other: &Multidegree) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn is_nonnegative(&self) -> bool {
        self.0.iter().all(|&a| a >= 0)
    }

    pub fn total(&self) -> i64 {
        self.0.iter().sum()
    }

    /// Atom positions with nonzero entries.
    pub fn support(&self) -> Vec<usize> {
        (0..self.0.len()).filter(|&i| self.0[i] != 0).collect()
    }

    pub fn add_scaled(&mut self, other: &Multidegree, k: i64) {
        for (a, b) in self.0.iter_mut().zip(&other.0) {
            *a += k * b;
        }
    }
}

impl Add for &Multidegree {
    type Output = Multidegree;
    fn add(self, rhs: &Multidegree) -> Multidegree {
        Multidegree(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl fmt::Display for Multidegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, a) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, ")")
    }
}

/// Indicator vector of the atoms below `z`.
pub fn degree_of_variable(p: &SimplicialPoset, z: ElementId) -> Result<Multidegree, RingError> {
    if z == p.bottom() {
        return Err(RingError::BottomVariable);
    }
    Ok(atom_indicator(p, z))
}

pub(crate) fn atom_indicator(p: &SimplicialPoset, z: ElementId) -> Multidegree {
    let mut d = Multidegree::zero(p.n_atoms());
    for &i in p.atoms_below(z) {
        d.0[i] = 1;
    }
    d
}

/// `w = sum_{x in P*} deg t_x`.
pub fn omega_shift(p: &SimplicialPoset) -> Multidegree {
    let mut w = Multidegree::zero(p.n_atoms());
    for z in p.proper_elements() {
        w.add_scaled(&atom_indicator(p, z), 1);
    }
    w
}

/// Exponent vector indexed by element id; the bottom entry stays zero.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RingMonomial(pub Vec<u32>);

impl RingMonomial {
    pub fn one(nvars: usize) -> Self {
        RingMonomial(vec![0; nvars])
    }

    pub fn var(nvars: usize, z: ElementId) -> Self {
        let mut m = Self::one(nvars);
        m.0[z.index()] = 1;
        m
    }

    pub fn mul(&self, other: &RingMonomial) -> RingMonomial {
        RingMonomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn support(&self) -> impl Iterator<Item = ElementId> + '_ {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, _)| ElementId::from(i))
    }

    pub fn degree(&self, p: &SimplicialPoset) -> Multidegree {
        let mut d = Multidegree::zero(p.n_atoms());
        for z in self.support() {
            d.add_scaled(&atom_indicator(p, z), self.0[z.index()] as i64);
        }
        d
    }

    /// True when the support is a chain in `P`.
    pub fn is_chain(&self, p: &SimplicialPoset) -> bool {
        self.incomparable_pair(p, false).is_none()
    }

    /// Lexicographically smallest (or largest) incomparable pair in the support.
    fn incomparable_pair(&self, p: &SimplicialPoset, last: bool) -> Option<(ElementId, ElementId)> {
        let supp: Vec<ElementId> = self.support().collect();
        let mut pairs = supp
            .iter()
            .enumerate()
            .flat_map(|(i, &a)| supp[i + 1..].iter().map(move |&b| (a, b)))
            .filter(|&(a, b)| !p.comparable(a, b));
        if last {
            pairs.next_back()
        } else {
            pairs.next()
        }
    }
}

/// A polynomial in the variables `t_z`, `z` ranging over element ids.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Polynomial {
    nvars: usize,
    terms: BTreeMap<RingMonomial, Scalar>,
}

impl Polynomial {
    pub fn zero(nvars: usize) -> Self {
        Polynomial {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: Scalar) -> Self {
        Self::from_term(RingMonomial::one(nvars), c)
    }

    pub fn one(nvars: usize, field: Field) -> Self {
        Self::constant(nvars, field.one())
    }

    pub fn from_term(m: RingMonomial, c: Scalar) -> Self {
        let mut p = Self::zero(m.0.len());
        p.add_term(m, c);
        p
    }

    pub fn var(nvars: usize, z: ElementId, field: Field) -> Self {
        Self::from_term(RingMonomial::var(nvars, z), field.one())
    }

    /// `prod_{atoms i in atoms} t_i`, the image of `t_z` in `S_x` when the
    /// list is the atom set of `z`.
    pub fn atom_product(p: &SimplicialPoset, atom_positions: &[usize], field: Field) -> Self {
        let mut m = RingMonomial::one(p.len());
        for &i in atom_positions {
            m.0[p.atoms()[i].index()] += 1;
        }
        Self::from_term(m, field.one())
    }

    pub fn nvars(&self) -> usize {
        self.nvars
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

    pub fn terms(&self) -> impl Iterator<Item = (&RingMonomial, &Scalar)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &RingMonomial) -> Option<&Scalar> {
        self.terms.get(m)
    }

    pub fn add_term(&mut self, m: RingMonomial, c: Scalar) {
        debug_assert_eq!(m.0.len(), self.nvars);
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

    pub fn scale(&self, c: &Scalar) -> Polynomial {
        let mut out = Polynomial::zero(self.nvars);
        for (m, a) in &self.terms {
            out.add_term(m.clone(), a * c);
        }
        out
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        let mut out = Polynomial::zero(self.nvars);
        for (m, a) in &self.terms {
            for (n, b) in &other.terms {
                out.add_term(m.mul(n), a * b);
            }
        }
        out
    }

    pub fn pow(&self, k: u32, field: Field) -> Polynomial {
        (0..k).fold(Polynomial::one(self.nvars, field), |acc, _| acc.mul(self))
    }

    /// The common multidegree of all terms, or `None` if inhomogeneous
    /// (the zero polynomial is homogeneous of every degree; returns `None`).
    pub fn homogeneous_degree(&self, p: &SimplicialPoset) -> Option<Multidegree> {
        let mut degs = self.terms.keys().map(|m| m.degree(p));
        let first = degs.next()?;
        degs.all(|d| d == first).then_some(first)
    }

    pub fn display<'a>(&'a self, p: &'a SimplicialPoset) -> PolynomialDisplay<'a> {
        PolynomialDisplay { poly: self, poset: p }
    }

    pub fn to_json(&self, p: &SimplicialPoset) -> PolynomialJson {
        PolynomialJson {
            terms: display_order(self)
                .into_iter()
                .map(|(m, c)| TermJson {
                    monomial: m
                        .support()
                        .map(|z| (p.name(z).to_string(), m.0[z.index()]))
                        .collect(),
                    coeff: c.to_string(),
                })
                .collect(),
        }
    }

    pub fn from_json(p: &SimplicialPoset, json: &PolynomialJson, field: Field) -> Result<Self, RingError> {
        let mut out = Polynomial::zero(p.len());
        for t in &json.terms {
            let mut m = RingMonomial::one(p.len());
            for (name, e) in &t.monomial {
                let z = lookup_variable(p, name)?;
                m.0[z.index()] += e;
            }
            out.add_term(m, field.parse_scalar(&t.coeff)?);
        }
        Ok(out)
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self + &(-rhs)
    }
}

/// Sparse JSON form: `{ "terms": [ { "monomial": {"x": 1}, "coeff": "p/q" } ] }`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolynomialJson {
    pub terms: Vec<TermJson>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub monomial: BTreeMap<String, u32>,
    pub coeff: String,
}

/// Terms by descending total degree, then descending exponent vector.
fn display_order(f: &Polynomial) -> Vec<(&RingMonomial, &Scalar)> {
    let mut terms: Vec<_> = f.terms.iter().collect();
    terms.sort_by_key(|(m, _)| (Reverse(m.total_degree()), Reverse(*m)));
    terms
}

pub struct PolynomialDisplay<'a> {
    poly: &'a Polynomial,
    poset: &'a SimplicialPoset,
}

impl fmt::Display for PolynomialDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.poly.is_zero() {
            return write!(f, "0");
        }
        for (k, (m, c)) in display_order(self.poly).into_iter().enumerate() {
            let neg = c.is_negative_display();
            let abs = if neg { -c } else { c.clone() };
            match (k, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let factors: Vec<String> = m
                .support()
                .map(|z| {
                    let e = m.0[z.index()];
                    if e == 1 {
                        format!("t[{}]", self.poset.name(z))
                    } else {
                        format!("t[{}]^{}", self.poset.name(z), e)
                    }
                })
                .collect();
            if factors.is_empty() {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write!(f, "{}", factors.join("*"))?;
            } else {
                write!(f, "{}*{}", abs, factors.join("*"))?;
            }
        }
        Ok(())
    }
}

fn lookup_variable(p: &SimplicialPoset, name: &str) -> Result<ElementId, RingError> {
    let z = p
        .id(name)
        .ok_or_else(|| RingError::UnknownVariable(name.to_string()))?;
    if z == p.bottom() {
        return Err(RingError::BottomVariable);
    }
    Ok(z)
}

/// Parses `c * t[name]^e * ...` terms joined by `+` / `-`.
pub fn parse_polynomial(p: &SimplicialPoset, text: &str, field: Field) -> Result<Polynomial, RingError> {
    let text = text.replace('\u{2212}', "-");
    let chars: Vec<char> = text.chars().collect();
    let mut pos = 0usize;
    let skip_ws = |pos: &mut usize| {
        while *pos < chars.len() && chars[*pos].is_whitespace() {
            *pos += 1;
        }
    };
    let err = |msg: &str, pos: usize| RingError::Parse(format!("{msg} at offset {pos} in `{text}`"));

    let mut out = Polynomial::zero(p.len());
    let mut first = true;
    loop {
        skip_ws(&mut pos);
        if pos >= chars.len() {
            if first {
                return Err(err("empty input", pos));
            }
            break;
        }
        let mut sign = field.one();
        if chars[pos] == '+' || chars[pos] == '-' {
            if chars[pos] == '-' {
                sign = -&sign;
            }
            pos += 1;
        } else if !first {
            return Err(err("expected `+` or `-`", pos));
        }
        first = false;

        let mut coeff = sign;
        let mut mono = RingMonomial::one(p.len());
        loop {
            skip_ws(&mut pos);
            if pos >= chars.len() {
                return Err(err("expected a factor", pos));
            }
            if chars[pos] == 't' {
                pos += 1;
                if chars.get(pos) != Some(&'[') {
                    return Err(err("expected `[` after `t`", pos));
                }
                let start = pos + 1;
                let end = (start..chars.len())
                    .find(|&i| chars[i] == ']')
                    .ok_or_else(|| err("unterminated `t[`", pos))?;
                let name: String = chars[start..end].iter().collect();
                let z = lookup_variable(p, name.trim())?;
                pos = end + 1;
                skip_ws(&mut pos);
                let mut e = 1u32;
                if chars.get(pos) == Some(&'^') {
                    pos += 1;
                    skip_ws(&mut pos);
                    let s = pos;
                    while pos < chars.len() && chars[pos].is_ascii_digit() {
                        pos += 1;
                    }
                    let digits: String = chars[s..pos].iter().collect();
                    e = digits.parse().map_err(|_| err("bad exponent", s))?;
                }
                mono.0[z.index()] += e;
            } else if chars[pos].is_ascii_digit() {
                let s = pos;
                while pos < chars.len() && (chars[pos].is_ascii_digit() || chars[pos] == '/') {
                    pos += 1;
                }
                let lit: String = chars[s..pos].iter().collect();
                coeff = &coeff * &field.parse_scalar(&lit)?;
            } else {
                return Err(err("unexpected character", pos));
            }
            skip_ws(&mut pos);
            if chars.get(pos) == Some(&'*') {
                pos += 1;
            } else {
                break;
            }
        }
        out.add_term(mono, coeff);
    }
    Ok(out)
}

/// One relation `f_{x,y}` together with its indexing pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Relation {
    pub pair: (ElementId, ElementId),
    pub poly: Polynomial,
}

/// `f_{x,y} = t_x t_y - t_{x meet y} sum_{z in [x v y]} t_z` (with `t_0 = 1`)
/// for every unordered incomparable pair of `P*`.
pub fn face_ring_relations(p: &SimplicialPoset, field: Field) -> Vec<Relation> {
    let n = p.len();
    let mut out = Vec::new();
    let elems: Vec<ElementId> = p.proper_elements().collect();
    for (i, &x) in elems.iter().enumerate() {
        for &y in &elems[i + 1..] {
            if p.comparable(x, y) {
                continue;
            }
            let mut f = Polynomial::from_term(RingMonomial::var(n, x).mul(&RingMonomial::var(n, y)), field.one());
            let joins = p.join_pair(x, y);
            if !joins.is_empty() {
                let meet = p.meet(x, y).expect("meet exists when the join is nonempty");
                for &z in joins {
                    let mut m = RingMonomial::var(n, z);
                    if meet != p.bottom() {
                        m.0[meet.index()] += 1;
                    }
                    f.add_term(m, -field.one());
                }
            }
            out.push(Relation { pair: (x, y), poly: f });
        }
    }
    out
}

pub fn face_ring_generators(p: &SimplicialPoset, field: Field) -> Vec<Polynomial> {
    face_ring_relations(p, field).into_iter().map(|r| r.poly).collect()
}

/// `t~_z` relative to the ambient element `x`.
pub fn tilde_of(p: &SimplicialPoset, x: ElementId, z: ElementId, field: Field) -> Polynomial {
    let mut f = Polynomial::var(p.len(), z, field);
    if p.le(z, x) && p.rank(z) >= 2 {
        f = &f - &Polynomial::atom_product(p, p.atoms_below(z), field);
    }
    f
}

fn check_atom_subset(p: &SimplicialPoset, x: ElementId, u: &[ElementId]) -> Result<(), RingError> {
    if u.len() < 2 {
        return Err(RingError::Precondition("U needs at least two atoms".into()));
    }
    for &a in u {
        if !p.is_atom(a) || !p.le(a, x) {
            return Err(RingError::Precondition(format!(
                "{} is not an atom below {}",
                p.name(a),
                p.name(x)
            )));
        }
    }
    Ok(())
}

/// `f_U = sum_{z in [U]} t~_z`.
pub fn f_u(p: &SimplicialPoset, x: ElementId, u: &[ElementId], field: Field) -> Result<Polynomial, RingError> {
    check_atom_subset(p, x, u)?;
    let mut f = Polynomial::zero(p.len());
    for z in p.join_set(u) {
        f = &f + &tilde_of(p, x, z, field);
    }
    Ok(f)
}

/// `g_{z1,z2} = t~_{z1} t~_{z2} + t~_{z2} prod_{i in U} t~_i`.
pub fn g_pair(
    p: &SimplicialPoset,
    x: ElementId,
    u: &[ElementId],
    z1: ElementId,
    z2: ElementId,
    field: Field,
) -> Result<Polynomial, RingError> {
    check_atom_subset(p, x, u)?;
    let joins = p.join_set(u);
    if z1 == z2 || !joins.contains(&z1) || !joins.contains(&z2) || !p.le(z1, x) {
        return Err(RingError::Precondition(
            "need distinct z1, z2 in [U] with z1 <= x".into(),
        ));
    }
    let t1 = tilde_of(p, x, z1, field);
    let t2 = tilde_of(p, x, z2, field);
    let positions: Vec<usize> = u.iter().map(|&a| p.atom_position(a).unwrap()).collect();
    let prod = Polynomial::atom_product(p, &positions, field);
    Ok(&t1.mul(&t2) + &t2.mul(&prod))
}

/// Ring surjection `S -> S_x`: kills `t_z` for `z` not below `x` and sends
/// `t_z` to the product of its atoms otherwise.
pub fn project_to(p: &SimplicialPoset, x: ElementId, f: &Polynomial) -> Polynomial {
    let n = p.len();
    let mut out = Polynomial::zero(n);
    'terms: for (m, c) in f.terms() {
        let mut img = RingMonomial::one(n);
        for z in m.support() {
            if !p.le(z, x) {
                continue 'terms;
            }
            for &i in p.atoms_below(z) {
                img.0[p.atoms()[i].index()] += m.0[z.index()];
            }
        }
        out.add_term(img, c.clone());
    }
    out
}

/// Generators `t~_z` (`z in P*` not an atom of `x`) of the graded prime `p_x`.
pub fn prime_generators(p: &SimplicialPoset, x: ElementId, field: Field) -> Vec<Polynomial> {
    p.proper_elements()
        .filter(|&z| !(p.is_atom(z) && p.le(z, x)))
        .map(|z| tilde_of(p, x, z, field))
        .collect()
}

/// Which rewrite to perform next during straightening.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RewriteStrategy {
    /// Smallest incomparable pair inside the largest pending monomial.
    #[default]
    Canonical,
    /// Largest incomparable pair inside the smallest pending monomial.
    Reversed,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct StraightenStats {
    pub steps: usize,
    /// Rewrites whose outputs failed to raise the termination potential.
    pub potential_failures: usize,
}

/// `sum_v e_v rank(v)^2`: each rewrite `t_x t_y -> t_{x meet y} t_z` keeps
/// the rank sum and spreads the ranks apart, so this strictly increases and is
/// bounded by the square of the Z-degree.
fn potential(p: &SimplicialPoset, m: &RingMonomial) -> u64 {
    m.support()
        .map(|z| m.0[z.index()] as u64 * (p.rank(z) as u64).pow(2))
        .sum()
}

pub fn straighten(p: &SimplicialPoset, f: &Polynomial) -> Polynomial {
    straighten_with(p, f, RewriteStrategy::Canonical).0
}

/// Normal form modulo `I_P` on chain monomials.
pub fn straighten_with(
    p: &SimplicialPoset,
    f: &Polynomial,
    strategy: RewriteStrategy,
) -> (Polynomial, StraightenStats) {
    let n = f.nvars;
    let mut stats = StraightenStats::default();
    let mut pending = f.clone();
    let mut done = Polynomial::zero(n);
    loop {
        let next = match strategy {
            RewriteStrategy::Canonical => pending.terms.pop_last(),
            RewriteStrategy::Reversed => pending.terms.pop_first(),
        };
        let Some((m, c)) = next else { break };
        let pair = m.incomparable_pair(p, strategy == RewriteStrategy::Reversed);
        let Some((x, y)) = pair else {
            done.add_term(m, c);
            continue;
        };
        stats.steps += 1;
        let before = potential(p, &m);
        let mut rest = m;
        rest.0[x.index()] -= 1;
        rest.0[y.index()] -= 1;
        let joins = p.join_pair(x, y);
        if joins.is_empty() {
            continue;
        }
        let meet = p.meet(x, y).expect("meet exists when the join is nonempty");
        for &z in joins {
            let mut out = rest.clone();
            out.0[z.index()] += 1;
            if meet != p.bottom() {
                out.0[meet.index()] += 1;
            }
            if potential(p, &out) <= before {
                stats.potential_failures += 1;
            }
            pending.add_term(out, c.clone());
        }
    }
    (done, stats)
}

pub fn ideal_member(p: &SimplicialPoset, f: &Polynomial) -> bool {
    straighten(p, f).is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bundled;

    fn p1() -> SimplicialPoset {
        bundled::poset("p1").unwrap()
    }

    fn parse(p: &SimplicialPoset, s: &str) -> Polynomial {
        parse_polynomial(p, s, Field::Rational).unwrap()
    }

    #[test]
    fn variable_degrees_of_running_example() {
        let p = p1();
        let deg = |n: &str| degree_of_variable(&p, p.id(n).unwrap()).unwrap().0;
        assert_eq!(deg("y1"), vec![1, 0]);
        assert_eq!(deg("y2"), vec![0, 1]);
        assert_eq!(deg("x"), vec![1, 1]);
        assert_eq!(deg("z"), vec![1, 1]);
        assert_eq!(degree_of_variable(&p, p.bottom()), Err(RingError::BottomVariable));
        assert_eq!(omega_shift(&p).0, vec![3, 3]);
    }

    #[test]
    fn generators_of_running_example() {
        let p = p1();
        let gens = face_ring_generators(&p, Field::Rational);
        assert_eq!(gens.len(), 2);
        assert!(gens.contains(&parse(&p, "t[y1]*t[y2] - t[x] - t[z]")));
        assert!(gens.contains(&parse(&p, "t[x]*t[z]")));
        let shown: Vec<String> = gens.iter().map(|g| g.display(&p).to_string()).collect();
        assert_eq!(shown, vec!["t[y1]*t[y2] - t[x] - t[z]", "t[x]*t[z]"]);
    }

    #[test]
    fn generators_edge_cases() {
        let chain = SimplicialPoset::from_json(r#"{"elements":["0","a"],"covers":[["a","0"]]}"#).unwrap();
        assert!(face_ring_generators(&chain, Field::Rational).is_empty());
        let two = SimplicialPoset::from_json(
            r#"{"elements":["0","a","b"],"covers":[["a","0"],["b","0"]]}"#,
        )
        .unwrap();
        let gens = face_ring_generators(&two, Field::Rational);
        assert_eq!(gens, vec![parse(&two, "t[a]*t[b]")]);
    }

    #[test]
    fn generators_are_homogeneous() {
        for name in bundled::NAMES {
            let p = bundled::poset(name).unwrap();
            for r in face_ring_relations(&p, Field::Rational) {
                let d = r.poly.homogeneous_degree(&p).expect("homogeneous");
                let expect = &atom_indicator(&p, r.pair.0) + &atom_indicator(&p, r.pair.1);
                assert_eq!(d, expect);
                assert!(ideal_member(&p, &r.poly), "{name}");
            }
        }
    }

    #[test]
    fn tilde_variables() {
        let p = p1();
        let [y1, x, z] = [p.id("y1"), p.id("x"), p.id("z")].map(Option::unwrap);
        let q = Field::Rational;
        assert_eq!(tilde_of(&p, x, x, q), parse(&p, "t[x] - t[y1]*t[y2]"));
        assert_eq!(tilde_of(&p, x, y1, q), parse(&p, "t[y1]"));
        assert_eq!(tilde_of(&p, x, z, q), parse(&p, "t[z]"));
        assert_eq!(
            tilde_of(&p, x, x, q).homogeneous_degree(&p),
            Some(Multidegree(vec![1, 1]))
        );
    }

    #[test]
    fn specific_elements_of_running_example() {
        let p = p1();
        let [y1, y2, x, z] = [p.id("y1"), p.id("y2"), p.id("x"), p.id("z")].map(Option::unwrap);
        let q = Field::Rational;
        let fu = f_u(&p, x, &[y1, y2], q).unwrap();
        assert_eq!(fu, parse(&p, "t[x] - t[y1]*t[y2] + t[z]"));
        assert!(ideal_member(&p, &fu));
        assert_eq!(fu.homogeneous_degree(&p), Some(Multidegree(vec![1, 1])));
        let g = g_pair(&p, x, &[y1, y2], x, z, q).unwrap();
        assert_eq!(g, parse(&p, "t[x]*t[z]"));
        assert!(ideal_member(&p, &g));
        assert!(f_u(&p, x, &[y1], q).is_err());
        assert!(g_pair(&p, x, &[y1, y2], z, x, q).is_err());
    }

    #[test]
    fn specific_elements_everywhere() {
        for name in bundled::NAMES {
            let p = bundled::poset(name).unwrap();
            for q in [Field::Rational, Field::Prime(2)] {
                for x in p.proper_elements() {
                    let atoms: Vec<ElementId> =
                        p.atoms_below(x).iter().map(|&i| p.atoms()[i]).collect();
                    for mask in 0u32..(1 << atoms.len()) {
                        let u: Vec<ElementId> = (0..atoms.len())
                            .filter(|i| mask >> i & 1 == 1)
                            .map(|i| atoms[i])
                            .collect();
                        if u.len() < 2 {
                            continue;
                        }
                        let fu = f_u(&p, x, &u, q).unwrap();
                        assert!(ideal_member(&p, &fu), "{name}: f_U");
                        let joins = p.join_set(&u);
                        let z1 = *joins.iter().find(|&&w| p.le(w, x)).unwrap();
                        for &z2 in &joins {
                            if z2 != z1 {
                                let g = g_pair(&p, x, &u, z1, z2, q).unwrap();
                                assert!(ideal_member(&p, &g), "{name}: g");
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn straightening_examples() {
        let p = p1();
        let s = straighten(&p, &parse(&p, "t[y1]*t[y2]"));
        assert_eq!(s.display(&p).to_string(), "t[x] + t[z]");
        assert!(straighten(&p, &parse(&p, "t[x]*t[z]")).is_zero());
        let chain = parse(&p, "t[y1]^2*t[x]^3");
        assert_eq!(straighten(&p, &chain), chain);
        assert!(!ideal_member(&p, &parse(&p, "t[x]")));
    }

    #[test]
    fn prime_ideals_of_running_example() {
        let p = p1();
        let q = Field::Rational;
        let shown = |x: &str| -> Vec<String> {
            prime_generators(&p, p.id(x).unwrap(), q)
                .iter()
                .map(|g| g.display(&p).to_string())
                .collect()
        };
        assert_eq!(shown("x"), vec!["-t[y1]*t[y2] + t[x]", "t[z]"]);
        assert_eq!(shown("z"), vec!["t[x]", "-t[y1]*t[y2] + t[z]"]);
        assert_eq!(shown("y1"), vec!["t[y2]", "t[x]", "t[z]"]);
        assert_eq!(shown("y2"), vec!["t[y1]", "t[x]", "t[z]"]);
        assert_eq!(shown("0"), vec!["t[y1]", "t[y2]", "t[x]", "t[z]"]);
    }

    #[test]
    fn projection_kills_prime_and_ideal() {
        for name in bundled::NAMES {
            let p = bundled::poset(name).unwrap();
            let gens = face_ring_generators(&p, Field::Rational);
            for x in p.elements() {
                for g in prime_generators(&p, x, Field::Rational) {
                    assert!(project_to(&p, x, &g).is_zero());
                }
                for g in &gens {
                    assert!(project_to(&p, x, g).is_zero(), "{name}");
                }
            }
        }
    }

    #[test]
    fn parser_errors() {
        let p = p1();
        let q = Field::Rational;
        assert!(matches!(parse_polynomial(&p, "t[w]", q), Err(RingError::UnknownVariable(_))));
        assert_eq!(parse_polynomial(&p, "t[0]", q), Err(RingError::BottomVariable));
        assert!(parse_polynomial(&p, "t[x] t[z]", q).is_err());
        assert!(parse_polynomial(&p, "", q).is_err());
        assert!(parse_polynomial(&p, "t[x", q).is_err());
        let f = parse_polynomial(&p, "3/2*t[x]^2 \u{2212} 2 + t[y1]*t[y1]", q).unwrap();
        assert_eq!(f.display(&p).to_string(), "t[y1]^2 + 3/2*t[x]^2 - 2");
    }

    #[test]
    fn json_roundtrip() {
        let p = p1();
        let f = parse(&p, "t[y1]*t[y2] - 1/3*t[x]");
        let js = serde_json::to_string(&f.to_json(&p)).unwrap();
        let back: PolynomialJson = serde_json::from_str(&js).unwrap();
        assert_eq!(Polynomial::from_json(&p, &back, Field::Rational).unwrap(), f);
    }
}
