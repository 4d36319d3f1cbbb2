//! The complexes built from envelopes and incidence signs.
//!
//! `Gamma^{-i}` is the sum of `*E_x` over `rank x = i`, with differential
//! components `sign(x, x') * psi_{x,x'}` on covers. Its graded pieces are
//! infinite dimensional, so only `d . d = 0` is checked on bounded boxes. The
//! scalar complex with terms `S_x` has finite slices in each degree `a >= 0`;
//! those are solved exactly and compared against reduced simplicial homology.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cleanmap::{self, CleanMap, EnvelopeMap, MapError, Status};
use crate::envelope::{ElementJson, Envelope, EnvelopeElement, MonomialBox};
use crate::linalg::Matrix;
use crate::poset::{ElementId, SimplicialPoset};
use crate::ring::Multidegree;
use crate::scalar::Field;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ComplexError {
    #[error(transparent)]
    Map(#[from] MapError),
    #[error("not the face poset of a simplicial complex: {0}")]
    NotAComplex(String),
    #[error("degree has {found} entries, expected {expected}")]
    DegreeLength { expected: usize, found: usize },
}

/// One differential component `*E_x -> *E_{x'}`.
#[derive(Debug, Clone)]
pub struct Component {
    pub upper: ElementId,
    pub lower: ElementId,
    pub sign: i8,
    pub map: CleanMap,
}

#[derive(Debug, Clone)]
pub struct EnvelopeComplex {
    poset: Arc<SimplicialPoset>,
    field: Field,
    terms: BTreeMap<u32, Vec<ElementId>>,
    components: BTreeMap<(ElementId, ElementId), Component>,
}

/// `Gamma` with unshifted envelope terms and normalized clean components.
pub fn build_gamma(poset: &Arc<SimplicialPoset>, field: Field) -> Result<EnvelopeComplex, ComplexError> {
    let mut terms: BTreeMap<u32, Vec<ElementId>> = BTreeMap::new();
    let mut components = BTreeMap::new();
    for x in poset.elements() {
        terms.entry(poset.rank(x)).or_default().push(x);
        for &y in poset.covered_by(x) {
            let sign = poset.incidence_sign(x, y).map_err(MapError::from)?;
            let map = cleanmap::cover_clean_map(poset, field, x, y)?;
            components.insert((x, y), Component { upper: x, lower: y, sign, map });
        }
    }
    Ok(EnvelopeComplex {
        poset: poset.clone(),
        field,
        terms,
        components,
    })
}

impl EnvelopeComplex {
    pub fn poset(&self) -> &Arc<SimplicialPoset> {
        &self.poset
    }

    pub fn field(&self) -> Field {
        self.field
    }

    /// Summands of `Gamma^{-i}`, keyed by `i`.
    pub fn terms(&self) -> &BTreeMap<u32, Vec<ElementId>> {
        &self.terms
    }

    pub fn components(&self) -> impl Iterator<Item = &Component> {
        self.components.values()
    }

    pub fn sign(&self, upper: ElementId, lower: ElementId) -> Option<i8> {
        self.components.get(&(upper, lower)).map(|c| c.sign)
    }

    /// Negates one sign; used as a negative control.
    pub fn flip_sign(&mut self, upper: ElementId, lower: ElementId) -> bool {
        match self.components.get_mut(&(upper, lower)) {
            Some(c) => {
                c.sign = -c.sign;
                true
            }
            None => false,
        }
    }

    /// `d(e)` for `e` in the summand `*E_x`, split by target summand.
    pub fn differential(&self, e: &EnvelopeElement) -> Result<BTreeMap<ElementId, EnvelopeElement>, ComplexError> {
        let x = e.ambient();
        let sign_scalar = |s: i8| self.field.from_i64(s as i64);
        let mut out = BTreeMap::new();
        for &y in self.poset.covered_by(x) {
            let c = &self.components[&(x, y)];
            let img = c.map.apply(e)?.scale(&sign_scalar(c.sign));
            out.insert(y, img);
        }
        Ok(out)
    }

    /// Checks `d . d = 0` on every monomial of the box, one length-two
    /// interval at a time.
    pub fn verify_dd_zero(&self, bx: &MonomialBox) -> Result<DdReport, ComplexError> {
        let p = &self.poset;
        let mut report = DdReport {
            bound: bx.to_string(),
            checked: 0,
            status: Status::Pass,
            diamonds: Vec::new(),
            witness: None,
        };
        let mut boxes: BTreeMap<ElementId, (Envelope, Vec<_>)> = BTreeMap::new();
        for d in p.diamonds() {
            let (env, monos) = boxes.entry(d.top).or_insert_with(|| {
                let env = Envelope::new(p.clone(), d.top);
                let monos = env.monomials_in_box(bx);
                (env, monos)
            });
            let paths: Vec<(i64, &CleanMap, &CleanMap)> = d
                .middles
                .iter()
                .map(|&m| {
                    let a = &self.components[&(d.top, m)];
                    let b = &self.components[&(m, d.bottom)];
                    ((a.sign * b.sign) as i64, &a.map, &b.map)
                })
                .collect();
            let mut check = DiamondCheck {
                top: p.name(d.top).into(),
                bottom: p.name(d.bottom).into(),
                middles: d.middles.iter().map(|&m| p.name(m).to_string()).collect(),
                sign_sum: paths.iter().map(|t| t.0).sum(),
                checked: 0,
                status: Status::Pass,
            };
            for m in monos.iter() {
                check.checked += 1;
                let mut residue = EnvelopeElement::zero(d.bottom);
                for (s, f, g) in &paths {
                    let img = g.apply(&f.apply_monomial(m)?)?;
                    residue.add_scaled(&img, &self.field.from_i64(*s));
                }
                if !residue.is_zero() {
                    check.status = Status::Fail;
                    if report.witness.is_none() {
                        let tgt = Envelope::new(p.clone(), d.bottom);
                        let input = EnvelopeElement::from_monomial(d.top, m.clone(), self.field.one());
                        report.witness = Some(DdWitness {
                            top: check.top.clone(),
                            bottom: check.bottom.clone(),
                            input: env.to_json(&input),
                            residue: tgt.to_json(&residue),
                        });
                    }
                    break;
                }
            }
            report.checked += check.checked;
            if check.status == Status::Fail {
                report.status = Status::Fail;
            }
            report.diamonds.push(check);
        }
        Ok(report)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiamondCheck {
    pub top: String,
    pub bottom: String,
    pub middles: Vec<String>,
    /// Sum over both paths of the product of the two signs.
    pub sign_sum: i64,
    pub checked: usize,
    pub status: Status,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DdWitness {
    pub top: String,
    pub bottom: String,
    pub input: ElementJson,
    pub residue: ElementJson,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DdReport {
    #[serde(rename = "box")]
    pub bound: String,
    pub checked: usize,
    pub status: Status,
    pub diamonds: Vec<DiamondCheck>,
    pub witness: Option<DdWitness>,
}

/// The complex with terms `S_x` and signed projections `S_x -> S_{x'}`.
#[derive(Debug, Clone)]
pub struct ScalarComplex {
    poset: Arc<SimplicialPoset>,
    signs: BTreeMap<(ElementId, ElementId), i8>,
}

pub fn build_i_complex(poset: &Arc<SimplicialPoset>) -> ScalarComplex {
    let mut signs = BTreeMap::new();
    for x in poset.elements() {
        for &y in poset.covered_by(x) {
            signs.insert((x, y), poset.incidence_sign(x, y).expect("cover"));
        }
    }
    ScalarComplex {
        poset: poset.clone(),
        signs,
    }
}

impl ScalarComplex {
    pub fn sign(&self, upper: ElementId, lower: ElementId) -> Option<i8> {
        self.signs.get(&(upper, lower)).copied()
    }

    /// The degree-`a` slice: basis `{x : supp a in atoms(x)}` by rank.
    pub fn slice(&self, a: &Multidegree, field: Field) -> Result<DegreeSlice, ComplexError> {
        let p = &*self.poset;
        if a.len() != p.n_atoms() {
            return Err(ComplexError::DegreeLength {
                expected: p.n_atoms(),
                found: a.len(),
            });
        }
        let top = p.max_rank();
        let mut basis: BTreeMap<u32, Vec<ElementId>> = (0..=top).map(|r| (r, Vec::new())).collect();
        if a.is_nonnegative() {
            let supp = a.support();
            for x in p.elements() {
                if supp.iter().all(|i| p.atoms_below(x).contains(i)) {
                    basis.get_mut(&p.rank(x)).unwrap().push(x);
                }
            }
        }
        let mut differentials = BTreeMap::new();
        for r in 1..=top {
            let (cols, rows) = (&basis[&r], &basis[&(r - 1)]);
            let mut m = Matrix::zeros(field, rows.len(), cols.len());
            for (j, &x) in cols.iter().enumerate() {
                for (i, &y) in rows.iter().enumerate() {
                    if let Some(s) = self.sign(x, y) {
                        m.set(i, j, field.from_i64(s as i64));
                    }
                }
            }
            differentials.insert(r, m);
        }
        Ok(DegreeSlice {
            a: a.clone(),
            basis,
            differentials,
        })
    }
}

/// The finite-dimensional slice of the scalar complex in one degree.
#[derive(Debug, Clone)]
pub struct DegreeSlice {
    pub a: Multidegree,
    /// Basis of the term at cohomological index `-rank`.
    pub basis: BTreeMap<u32, Vec<ElementId>>,
    /// Matrix of the differential from rank `r` to rank `r - 1`.
    pub differentials: BTreeMap<u32, Matrix>,
}

impl DegreeSlice {
    pub fn squares_to_zero(&self) -> bool {
        self.differentials
            .iter()
            .filter_map(|(r, m)| self.differentials.get(&(r + 1)).map(|n| m.mul(n)))
            .all(|prod| prod.is_zero())
    }

    /// Cohomology dimensions keyed by index `-rank`.
    pub fn dims(&self) -> BTreeMap<i64, usize> {
        let ranks: BTreeMap<u32, usize> = self.differentials.iter().map(|(r, m)| (*r, m.rank())).collect();
        self.basis
            .iter()
            .map(|(r, b)| {
                let out = ranks.get(r).copied().unwrap_or(0);
                let inc = ranks.get(&(r + 1)).copied().unwrap_or(0);
                (-(*r as i64), b.len() - out - inc)
            })
            .collect()
    }

    /// `sum (-1)^i dim I^i`.
    pub fn euler_terms(&self) -> i64 {
        self.basis
            .iter()
            .map(|(r, b)| if r % 2 == 0 { b.len() as i64 } else { -(b.len() as i64) })
            .sum()
    }
}

pub fn cohomology_dims_at(poset: &Arc<SimplicialPoset>, a: &Multidegree, field: Field) -> Result<BTreeMap<i64, usize>, ComplexError> {
    Ok(build_i_complex(poset).slice(a, field)?.dims())
}

/// Reduced homology of the link of `supp a` in the underlying simplicial
/// complex, placed at index `-(|supp a| + k + 1)` for `H~_k`. Uses its own
/// face enumeration, boundary signs and elimination.
pub fn simplicial_oracle(poset: &SimplicialPoset, a: &Multidegree, field: Field) -> Result<BTreeMap<i64, usize>, ComplexError> {
    let n = poset.n_atoms();
    if a.len() != n {
        return Err(ComplexError::DegreeLength {
            expected: n,
            found: a.len(),
        });
    }
    let elems: Vec<ElementId> = poset.elements().collect();
    for (k, &x) in elems.iter().enumerate() {
        for &y in &elems[k + 1..] {
            let j = poset.join_set(&[x, y]);
            if j.len() > 1 {
                return Err(ComplexError::NotAComplex(format!(
                    "`{}` and `{}` have {} minimal upper bounds",
                    poset.name(x),
                    poset.name(y),
                    j.len()
                )));
            }
        }
    }
    let faces: BTreeSet<Vec<usize>> = elems.iter().map(|&x| poset.atoms_below(x).to_vec()).collect();
    let top = poset.max_rank() as i64;
    let mut out: BTreeMap<i64, usize> = (-top..=0).map(|i| (i, 0)).collect();
    if a.0.iter().any(|&v| v < 0) {
        return Ok(out);
    }
    let sigma: Vec<usize> = (0..n).filter(|&i| a.0[i] > 0).collect();
    if !faces.contains(&sigma) {
        return Ok(out);
    }
    // faces of the link, grouped by size
    let mut link: BTreeMap<usize, Vec<Vec<usize>>> = BTreeMap::new();
    for f in &faces {
        if sigma.iter().all(|v| f.contains(v)) {
            let t: Vec<usize> = f.iter().copied().filter(|v| !sigma.contains(v)).collect();
            link.entry(t.len()).or_default().push(t);
        }
    }
    let max_size = *link.keys().max().unwrap();
    // rank of the boundary from size s to size s - 1
    let mut brank = BTreeMap::new();
    for s in 1..=max_size {
        let (Some(hi), Some(lo)) = (link.get(&s), link.get(&(s - 1))) else {
            continue;
        };
        let pos: BTreeMap<&Vec<usize>, usize> = lo.iter().enumerate().map(|(i, f)| (f, i)).collect();
        let mut rows = vec![vec![0i64; hi.len()]; lo.len()];
        for (c, f) in hi.iter().enumerate() {
            for j in 0..f.len() {
                let mut g = f.clone();
                g.remove(j);
                rows[pos[&g]][c] = if j % 2 == 0 { 1 } else { -1 };
            }
        }
        brank.insert(s, oracle_rank(rows, field));
    }
    for (&s, fs) in &link {
        let h = fs.len() - brank.get(&s).copied().unwrap_or(0) - brank.get(&(s + 1)).copied().unwrap_or(0);
        // H~_k with k = s - 1
        *out.get_mut(&(-((sigma.len() + s) as i64))).unwrap() = h;
    }
    Ok(out)
}

fn oracle_rank(rows: Vec<Vec<i64>>, field: Field) -> usize {
    match field {
        Field::Rational => {
            let mut m: Vec<Vec<BigRational>> = rows
                .into_iter()
                .map(|r| r.into_iter().map(|v| BigRational::from_integer(BigInt::from(v))).collect())
                .collect();
            let cols = m.first().map_or(0, Vec::len);
            let mut rank = 0;
            for c in 0..cols {
                let Some(piv) = (rank..m.len()).find(|&i| !m[i][c].is_zero()) else {
                    continue;
                };
                m.swap(rank, piv);
                let inv = BigRational::one() / &m[rank][c];
                for i in rank + 1..m.len() {
                    if m[i][c].is_zero() {
                        continue;
                    }
                    let f = &m[i][c] * &inv;
                    for j in c..cols {
                        let t = &f * &m[rank][j];
                        m[i][j] -= t;
                    }
                }
                rank += 1;
            }
            rank
        }
        Field::Prime(p) => {
            let mut m: Vec<Vec<u64>> = rows
                .into_iter()
                .map(|r| r.into_iter().map(|v| v.rem_euclid(p as i64) as u64).collect())
                .collect();
            let cols = m.first().map_or(0, Vec::len);
            let pow = |mut b: u64, mut e: u64| {
                let mut r = 1u64;
                while e > 0 {
                    if e & 1 == 1 {
                        r = r * b % p;
                    }
                    b = b * b % p;
                    e >>= 1;
                }
                r
            };
            let mut rank = 0;
            for c in 0..cols {
                let Some(piv) = (rank..m.len()).find(|&i| m[i][c] != 0) else {
                    continue;
                };
                m.swap(rank, piv);
                let inv = pow(m[rank][c], p - 2);
                for i in rank + 1..m.len() {
                    if m[i][c] == 0 {
                        continue;
                    }
                    let f = m[i][c] * inv % p;
                    for j in c..cols {
                        m[i][j] = (m[i][j] + p - f * m[rank][j] % p) % p;
                    }
                }
                rank += 1;
            }
            rank
        }
    }
}

/// `{ "poset", "a", "dims", "oracle", "match" }`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CohomologyReport {
    pub poset: String,
    pub a: Vec<i64>,
    pub dims: BTreeMap<i64, usize>,
    pub oracle: Option<BTreeMap<i64, usize>>,
    #[serde(rename = "match")]
    pub matches: Option<bool>,
}

pub fn cohomology_report(
    name: &str,
    poset: &Arc<SimplicialPoset>,
    a: &Multidegree,
    field: Field,
    with_oracle: bool,
) -> Result<CohomologyReport, ComplexError> {
    let dims = cohomology_dims_at(poset, a, field)?;
    let oracle = if with_oracle {
        Some(simplicial_oracle(poset, a, field)?)
    } else {
        None
    };
    let matches = oracle.as_ref().map(|o| *o == dims);
    Ok(CohomologyReport {
        poset: name.into(),
        a: a.0.clone(),
        dims,
        oracle,
        matches,
    })
}
