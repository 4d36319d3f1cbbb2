//! Clean homomorphisms between envelopes.
//!
//! A cover `x > x'` has a canonical clean map `*E_x -> *E_{x'}` given by an
//! explicit binomial formula; longer intervals use composites along saturated
//! chains. Graded endomorphisms of a single envelope (used to perturb clean
//! maps into non-clean ones and to reconstruct the correcting automorphism
//! `tau`) are represented as sums of compositions of primitive operators.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::envelope::{ElementJson, EnvMonomial, Envelope, EnvelopeElement, EnvelopeError, MonomialBox};
use crate::poset::{ElementId, PosetError, SimplicialPoset};
use crate::scalar::{Field, Scalar};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MapError {
    #[error(transparent)]
    Envelope(#[from] EnvelopeError),
    #[error(transparent)]
    Poset(#[from] PosetError),
    #[error("chain is not saturated at `{upper}` > `{lower}`")]
    NotSaturated { upper: String, lower: String },
    #[error("`{0}` must have rank at least 2")]
    RankTooSmall(String),
    #[error("phi(1_x) = 0, so no clean reconstruction exists")]
    KillsUnit,
    #[error("Neumann series did not stabilize within {0} terms")]
    NoStabilization(usize),
    #[error("map from *E_{found} cannot be applied to *E_{expected}")]
    Mismatch { expected: String, found: String },
}

/// A degree-preserving `K`-linear map `*E_x -> *E_z` evaluable on monomials.
pub trait EnvelopeMap: Send + Sync {
    fn poset(&self) -> &Arc<SimplicialPoset>;
    fn field(&self) -> Field;
    fn source(&self) -> ElementId;
    fn target(&self) -> ElementId;
    fn apply_monomial(&self, m: &EnvMonomial) -> Result<EnvelopeElement, MapError>;

    fn apply(&self, e: &EnvelopeElement) -> Result<EnvelopeElement, MapError> {
        if e.ambient() != self.source() {
            let p = self.poset();
            return Err(MapError::Mismatch {
                expected: p.name(self.source()).into(),
                found: p.name(e.ambient()).into(),
            });
        }
        let mut out = EnvelopeElement::zero(self.target());
        for (m, c) in e.terms() {
            out.add_scaled(&self.apply_monomial(m)?, c);
        }
        Ok(out)
    }

    fn describe(&self) -> String {
        let p = self.poset();
        format!("*E_{} -> *E_{}", p.name(self.source()), p.name(self.target()))
    }
}

/// The partition `P* = atoms(x) + Z + W` attached to a cover `x > x'`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverData {
    pub x: ElementId,
    pub x_prime: ElementId,
    /// The atom below `x` but not below `x'`.
    pub removed: ElementId,
    /// `z <= x` with `z > removed`.
    pub z_set: Vec<ElementId>,
    pub w_set: Vec<ElementId>,
}

impl CoverData {
    pub fn new(p: &SimplicialPoset, x: ElementId, x_prime: ElementId) -> Result<Self, MapError> {
        let r = p.atoms()[p.removed_atom(x, x_prime)?];
        let mut z_set = Vec::new();
        let mut w_set = Vec::new();
        for z in p.proper_elements() {
            if p.is_atom(z) && p.le(z, x) {
                continue;
            }
            if p.le(z, x) && p.lt(r, z) {
                z_set.push(z);
            } else {
                w_set.push(z);
            }
        }
        Ok(CoverData {
            x,
            x_prime,
            removed: r,
            z_set,
            w_set,
        })
    }
}

/// The explicit clean map of a cover (rank-1 covers included: there `Z` is
/// empty and the formula reduces to moving `t_y^a` into the inverse factor).
#[derive(Debug, Clone)]
pub struct CoverMap {
    poset: Arc<SimplicialPoset>,
    field: Field,
    data: CoverData,
}

impl CoverMap {
    pub fn new(poset: Arc<SimplicialPoset>, field: Field, x: ElementId, x_prime: ElementId) -> Result<Self, MapError> {
        let data = CoverData::new(&poset, x, x_prime)?;
        Ok(CoverMap { poset, field, data })
    }

    pub fn data(&self) -> &CoverData {
        &self.data
    }

    fn emit(&self, m: &EnvMonomial, d: &[u32], out: &mut EnvelopeElement) {
        let p = &*self.poset;
        let r = self.data.removed.index();
        let mut laurent = m.laurent.clone();
        let mut inverse = m.inverse.clone();
        let mut coeff = self.field.one();
        for (&z, &dz) in self.data.z_set.iter().zip(d) {
            if dz == 0 {
                continue;
            }
            for &i in p.atoms_below(z) {
                laurent[p.atoms()[i].index()] += dz as i32;
            }
            let b = inverse[z.index()];
            coeff = &coeff * &self.field.binomial((b + dz) as u64, b as u64);
            inverse[z.index()] = b + dz;
        }
        let e_r = laurent[r];
        debug_assert!(e_r <= 0);
        laurent[r] = 0;
        inverse[r] = (-e_r) as u32;
        out.add_term(EnvMonomial { laurent, inverse }, coeff);
    }

    fn enumerate(&self, m: &EnvMonomial, k: usize, left: u32, d: &mut Vec<u32>, out: &mut EnvelopeElement) {
        if k == self.data.z_set.len() {
            self.emit(m, d, out);
            return;
        }
        for v in 0..=left {
            d[k] = v;
            self.enumerate(m, k + 1, left - v, d, out);
        }
        d[k] = 0;
    }
}

impl EnvelopeMap for CoverMap {
    fn poset(&self) -> &Arc<SimplicialPoset> {
        &self.poset
    }

    fn field(&self) -> Field {
        self.field
    }

    fn source(&self) -> ElementId {
        self.data.x
    }

    fn target(&self) -> ElementId {
        self.data.x_prime
    }

    fn apply_monomial(&self, m: &EnvMonomial) -> Result<EnvelopeElement, MapError> {
        let mut out = EnvelopeElement::zero(self.data.x_prime);
        let a_r = m.laurent[self.data.removed.index()];
        if a_r > 0 {
            return Ok(out);
        }
        let mut d = vec![0; self.data.z_set.len()];
        self.enumerate(m, 0, (-a_r) as u32, &mut d, &mut out);
        Ok(out)
    }
}

/// A clean map `*E_x -> *E_z` realized along a saturated chain, times a
/// scalar. With scalar one it sends `1_x` to `1_z`.
#[derive(Debug, Clone)]
pub struct CleanMap {
    poset: Arc<SimplicialPoset>,
    field: Field,
    chain: Vec<ElementId>,
    steps: Vec<CoverMap>,
    scalar: Scalar,
}

impl CleanMap {
    pub fn chain(&self) -> &[ElementId] {
        &self.chain
    }

    pub fn scalar(&self) -> &Scalar {
        &self.scalar
    }

    pub fn scaled(mut self, k: &Scalar) -> Self {
        self.scalar = &self.scalar * k;
        self
    }
}

impl EnvelopeMap for CleanMap {
    fn poset(&self) -> &Arc<SimplicialPoset> {
        &self.poset
    }

    fn field(&self) -> Field {
        self.field
    }

    fn source(&self) -> ElementId {
        self.chain[0]
    }

    fn target(&self) -> ElementId {
        *self.chain.last().unwrap()
    }

    fn apply_monomial(&self, m: &EnvMonomial) -> Result<EnvelopeElement, MapError> {
        let mut cur = EnvelopeElement::from_monomial(self.source(), m.clone(), self.scalar.clone());
        for step in &self.steps {
            if cur.is_zero() {
                return Ok(EnvelopeElement::zero(self.target()));
            }
            cur = step.apply(&cur)?;
        }
        Ok(cur)
    }
}

/// The normalized clean map of a single cover.
pub fn cover_clean_map(poset: &Arc<SimplicialPoset>, field: Field, x: ElementId, x_prime: ElementId) -> Result<CleanMap, MapError> {
    compose_chain(poset, field, &[x, x_prime])
}

/// `*E_y -> *E_0` for an atom `y`.
pub fn rank1_map(poset: &Arc<SimplicialPoset>, field: Field, y: ElementId) -> Result<CleanMap, MapError> {
    if poset.rank(y) != 1 {
        return Err(PosetError::NotACover {
            upper: poset.name(y).into(),
            lower: poset.name(poset.bottom()).into(),
        }
        .into());
    }
    cover_clean_map(poset, field, y, poset.bottom())
}

/// Composite of the cover maps along `chain = [x_0 > x_1 > ... > x_l]`; a
/// one-element chain gives the identity.
pub fn compose_chain(poset: &Arc<SimplicialPoset>, field: Field, chain: &[ElementId]) -> Result<CleanMap, MapError> {
    assert!(!chain.is_empty(), "empty chain");
    let mut steps = Vec::new();
    for w in chain.windows(2) {
        if !poset.covers(w[0], w[1]) {
            return Err(MapError::NotSaturated {
                upper: poset.name(w[0]).into(),
                lower: poset.name(w[1]).into(),
            });
        }
        steps.push(CoverMap::new(poset.clone(), field, w[0], w[1])?);
    }
    Ok(CleanMap {
        poset: poset.clone(),
        field,
        chain: chain.to_vec(),
        steps,
        scalar: field.one(),
    })
}

/// `g . f`: first `first`, then `second`.
pub struct Composite {
    pub first: Arc<dyn EnvelopeMap>,
    pub second: Arc<dyn EnvelopeMap>,
}

impl Composite {
    pub fn new(first: Arc<dyn EnvelopeMap>, second: Arc<dyn EnvelopeMap>) -> Self {
        assert_eq!(first.target(), second.source(), "maps are not composable");
        Composite { first, second }
    }
}

impl EnvelopeMap for Composite {
    fn poset(&self) -> &Arc<SimplicialPoset> {
        self.first.poset()
    }

    fn field(&self) -> Field {
        self.first.field()
    }

    fn source(&self) -> ElementId {
        self.first.source()
    }

    fn target(&self) -> ElementId {
        self.second.target()
    }

    fn apply_monomial(&self, m: &EnvMonomial) -> Result<EnvelopeElement, MapError> {
        self.second.apply(&self.first.apply_monomial(m)?)
    }
}

/// Primitive operators of a [`GradedEndomap`].
#[derive(Clone)]
pub enum EndoOp {
    Identity,
    /// Multiplication by a Laurent monomial in the atoms below `x`, indexed
    /// by element id.
    LaurentShift(Vec<i32>),
    TildeMul(ElementId),
    Tau(Arc<Tau>),
    /// `(id + N)^{-1}` as `sum (-N)^k`, stopping at the first zero term.
    NeumannInverse { nilpotent: Arc<GradedEndomap>, cap: usize },
}

/// A degree-zero endomorphism of `*E_x`: a sum of scaled compositions of
/// primitive operators, applied left to right.
#[derive(Clone)]
pub struct GradedEndomap {
    env: Envelope,
    field: Field,
    terms: Vec<(Scalar, Vec<EndoOp>)>,
}

impl GradedEndomap {
    pub fn new(env: Envelope, field: Field, terms: Vec<(Scalar, Vec<EndoOp>)>) -> Self {
        GradedEndomap { env, field, terms }
    }

    pub fn identity(env: Envelope, field: Field) -> Self {
        Self::new(env, field, vec![(field.one(), vec![EndoOp::Identity])])
    }

    pub fn envelope(&self) -> &Envelope {
        &self.env
    }

    /// `self - id`.
    pub fn minus_identity(&self) -> GradedEndomap {
        let mut terms = self.terms.clone();
        terms.push((-&self.field.one(), vec![EndoOp::Identity]));
        GradedEndomap::new(self.env.clone(), self.field, terms)
    }

    /// `self^{-1}`, assuming `self - id` is locally nilpotent.
    pub fn neumann_inverse(&self, cap: usize) -> GradedEndomap {
        let n = Arc::new(self.minus_identity());
        GradedEndomap::new(
            self.env.clone(),
            self.field,
            vec![(self.field.one(), vec![EndoOp::NeumannInverse { nilpotent: n, cap }])],
        )
    }

    fn apply_op(&self, op: &EndoOp, e: &EnvelopeElement) -> Result<EnvelopeElement, MapError> {
        Ok(match op {
            EndoOp::Identity => e.clone(),
            EndoOp::LaurentShift(s) => self.env.laurent_shift(s, e)?,
            EndoOp::TildeMul(z) => self.env.act_tilde(*z, e)?,
            EndoOp::Tau(t) => t.apply(e)?,
            EndoOp::NeumannInverse { nilpotent, cap } => {
                let mut sum = e.clone();
                let mut cur = e.clone();
                let minus_one = -&self.field.one();
                let mut k = 0;
                loop {
                    cur = nilpotent.apply(&cur)?.scale(&minus_one);
                    if cur.is_zero() {
                        break sum;
                    }
                    k += 1;
                    if k > *cap {
                        return Err(MapError::NoStabilization(*cap));
                    }
                    sum.add_assign(&cur);
                }
            }
        })
    }
}

impl EnvelopeMap for GradedEndomap {
    fn poset(&self) -> &Arc<SimplicialPoset> {
        self.env.poset()
    }

    fn field(&self) -> Field {
        self.field
    }

    fn source(&self) -> ElementId {
        self.env.ambient()
    }

    fn target(&self) -> ElementId {
        self.env.ambient()
    }

    fn apply_monomial(&self, m: &EnvMonomial) -> Result<EnvelopeElement, MapError> {
        let start = EnvelopeElement::from_monomial(self.env.ambient(), m.clone(), self.field.one());
        let mut out = self.env.zero();
        for (c, ops) in &self.terms {
            let mut cur = start.clone();
            for op in ops {
                if cur.is_zero() {
                    break;
                }
                cur = self.apply_op(op, &cur)?;
            }
            out.add_scaled(&cur, c);
        }
        Ok(out)
    }
}

/// `sigma = id + lambda * theta` with
/// `theta(e) = (prod_{i <= x} t_i^{-1}) . (t~_x . e)`: a degree-zero
/// automorphism of `*E_x` fixing `1_x` that is not clean after composing
/// with a clean map.
pub fn nonclean_automorphism(env: &Envelope, field: Field, lambda: &Scalar) -> Result<GradedEndomap, MapError> {
    let p = env.poset();
    let x = env.ambient();
    if p.rank(x) < 2 {
        return Err(MapError::RankTooSmall(p.name(x).into()));
    }
    let mut shift = vec![0; p.len()];
    for &a in env.laurent_vars() {
        shift[a.index()] = -1;
    }
    Ok(GradedEndomap::new(
        env.clone(),
        field,
        vec![
            (field.one(), vec![EndoOp::Identity]),
            (lambda.clone(), vec![EndoOp::TildeMul(x), EndoOp::LaurentShift(shift)]),
        ],
    ))
}

/// The automorphism `tau` of `*E_x` with `psi . tau = phi`, evaluated lazily
/// through `[tau(a) : b] = [phi(f_b . a) : 1_z]`. Values are memoized.
pub struct Tau {
    env: Envelope,
    phi: Arc<dyn EnvelopeMap>,
    unit_target: EnvMonomial,
    cache: Mutex<BTreeMap<EnvMonomial, EnvelopeElement>>,
}

impl Tau {
    pub fn new(env: Envelope, phi: Arc<dyn EnvelopeMap>) -> Result<Self, MapError> {
        let n = env.poset().len();
        let unit_target = EnvMonomial::one(n);
        let u = phi.apply(&env.unit(phi.field()))?;
        if u.coefficient(&unit_target).is_none() {
            return Err(MapError::KillsUnit);
        }
        Ok(Tau {
            env,
            phi,
            unit_target,
            cache: Mutex::new(BTreeMap::new()),
        })
    }

    /// `f_b . a` for monomials of equal degree; `None` when it vanishes.
    fn pairing_monomial(&self, alpha: &EnvMonomial, beta: &EnvMonomial) -> Option<EnvMonomial> {
        if self.env.degree(alpha) != self.env.degree(beta) {
            return None;
        }
        let mut g = alpha.clone();
        for &z in self.env.inverse_vars() {
            let (va, vb) = (alpha.inverse[z.index()], beta.inverse[z.index()]);
            if vb > va {
                return None;
            }
            g.inverse[z.index()] = va - vb;
        }
        for &i in self.env.laurent_vars() {
            g.laurent[i.index()] -= beta.laurent[i.index()];
        }
        Some(g)
    }

    /// `[tau(alpha) : beta]`.
    pub fn coefficient(&self, alpha: &EnvMonomial, beta: &EnvMonomial) -> Result<Scalar, MapError> {
        let field = self.phi.field();
        let Some(g) = self.pairing_monomial(alpha, beta) else {
            return Ok(field.zero());
        };
        let img = self.phi.apply_monomial(&g)?;
        Ok(img.coefficient(&self.unit_target).cloned().unwrap_or_else(|| field.zero()))
    }

    fn compute(&self, alpha: &EnvMonomial) -> Result<EnvelopeElement, MapError> {
        let p = &**self.env.poset();
        let field = self.phi.field();
        let mut out = self.env.zero();
        // candidate inverse parts of beta: componentwise below alpha's
        let vars: Vec<ElementId> = self
            .env
            .inverse_vars()
            .iter()
            .copied()
            .filter(|z| alpha.inverse[z.index()] > 0)
            .collect();
        let mut choices = vec![vec![0u32; p.len()]];
        for &z in &vars {
            choices = choices
                .into_iter()
                .flat_map(|v| {
                    (0..=alpha.inverse[z.index()]).map(move |k| {
                        let mut w = v.clone();
                        w[z.index()] = k;
                        w
                    })
                })
                .collect();
        }
        for vb in choices {
            let mut gamma = EnvMonomial::one(p.len());
            let mut outside = false;
            for &z in &vars {
                let k = alpha.inverse[z.index()] - vb[z.index()];
                if k == 0 {
                    continue;
                }
                for &i in p.atoms_below(z) {
                    let a = p.atoms()[i];
                    if !p.le(a, self.env.ambient()) {
                        outside = true;
                    }
                    gamma.laurent[a.index()] += k as i32;
                }
                gamma.inverse[z.index()] = k;
            }
            if outside {
                continue;
            }
            let c = self
                .phi
                .apply_monomial(&gamma)?
                .coefficient(&self.unit_target)
                .cloned()
                .unwrap_or_else(|| field.zero());
            let mut beta = EnvMonomial {
                laurent: alpha.laurent.clone(),
                inverse: vb,
            };
            for &i in self.env.laurent_vars() {
                beta.laurent[i.index()] -= gamma.laurent[i.index()];
            }
            out.add_term(beta, c);
        }
        Ok(out)
    }

    pub fn apply_monomial(&self, alpha: &EnvMonomial) -> Result<EnvelopeElement, MapError> {
        if let Some(v) = self.cache.lock().unwrap().get(alpha) {
            return Ok(v.clone());
        }
        let v = self.compute(alpha)?;
        self.cache.lock().unwrap().insert(alpha.clone(), v.clone());
        Ok(v)
    }

    pub fn apply(&self, e: &EnvelopeElement) -> Result<EnvelopeElement, MapError> {
        let mut out = self.env.zero();
        for (m, c) in e.terms() {
            out.add_scaled(&self.apply_monomial(m)?, c);
        }
        Ok(out)
    }
}

/// `[tau(alpha) : beta]` for the map `phi` out of `*E_x`.
pub fn tau_reconstruct(env: &Envelope, phi: Arc<dyn EnvelopeMap>, alpha: &EnvMonomial, beta: &EnvMonomial) -> Result<Scalar, MapError> {
    Tau::new(env.clone(), phi)?.coefficient(alpha, beta)
}

/// `tau` as an endomap, with its values on the box computed up front.
pub fn materialize_tau(env: &Envelope, phi: Arc<dyn EnvelopeMap>, bx: &MonomialBox) -> Result<GradedEndomap, MapError> {
    let field = phi.field();
    let tau = Tau::new(env.clone(), phi)?;
    for m in env.monomials_in_box(bx) {
        tau.apply_monomial(&m)?;
    }
    Ok(GradedEndomap::new(
        env.clone(),
        field,
        vec![(field.one(), vec![EndoOp::Tau(Arc::new(tau))])],
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub input: ElementJson,
    pub output: ElementJson,
    pub detail: String,
}

/// Outcome of a bounded property sweep.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PropertyReport {
    pub property: String,
    pub map: String,
    #[serde(rename = "box")]
    pub bound: String,
    pub checked: usize,
    pub status: Status,
    pub witness: Option<Witness>,
}

impl PropertyReport {
    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

impl fmt::Display for PropertyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} [{}] on {} ({} checked): {}",
            self.property, self.map, self.bound, self.checked, self.status
        )?;
        if let Some(w) = &self.witness {
            write!(f, " -- {}", w.detail)?;
        }
        Ok(())
    }
}

fn witness(src: &Envelope, tgt: &Envelope, input: &EnvelopeElement, output: &EnvelopeElement, detail: String) -> Witness {
    Witness {
        input: src.to_json(input),
        output: tgt.to_json(output),
        detail,
    }
}

/// Checks `map(alpha)` lies in `L(*E_z)` for every degree-zero monomial
/// `alpha` of `L(*E_x)` with depth at most `depth`.
pub fn check_clean(map: &dyn EnvelopeMap, depth: u32) -> Result<PropertyReport, MapError> {
    let p = map.poset();
    let src = Envelope::new(p.clone(), map.source());
    let tgt = Envelope::new(p.clone(), map.target());
    let field = map.field();
    let mut report = PropertyReport {
        property: "clean".into(),
        map: map.describe(),
        bound: format!("degree 0, depth <= {depth}"),
        checked: 0,
        status: Status::Pass,
        witness: None,
    };
    for m in src.degree_zero_nonunit_monomials(depth) {
        report.checked += 1;
        let img = map.apply_monomial(&m)?;
        if img.terms().any(|(t, _)| !t.has_inverse_part()) {
            let input = EnvelopeElement::from_monomial(src.ambient(), m, field.one());
            let detail = format!("{} maps onto 1_{}", src.display(&input), p.name(map.target()));
            report.status = Status::Fail;
            report.witness = Some(witness(&src, &tgt, &input, &img, detail));
            break;
        }
    }
    Ok(report)
}

/// Checks `map(t_w . alpha) = t_w . map(alpha)` for every variable `t_w` and
/// that `map` preserves degrees, for every monomial `alpha` in the box.
pub fn check_linearity(map: &dyn EnvelopeMap, bx: &MonomialBox) -> Result<PropertyReport, MapError> {
    let p = map.poset();
    let src = Envelope::new(p.clone(), map.source());
    let tgt = Envelope::new(p.clone(), map.target());
    let field = map.field();
    let mut report = PropertyReport {
        property: "linearity".into(),
        map: map.describe(),
        bound: bx.to_string(),
        checked: 0,
        status: Status::Pass,
        witness: None,
    };
    let vars: Vec<ElementId> = p.proper_elements().collect();
    for m in src.monomials_in_box(bx) {
        let alpha = EnvelopeElement::from_monomial(src.ambient(), m.clone(), field.one());
        let img = map.apply_monomial(&m)?;
        let deg = src.degree(&m);
        if let Some((t, _)) = img.terms().find(|(t, _)| tgt.degree(t) != deg) {
            let detail = format!("image term of degree {} from degree {}", tgt.degree(t), deg);
            report.status = Status::Fail;
            report.witness = Some(witness(&src, &tgt, &alpha, &img, detail));
            return Ok(report);
        }
        for &w in &vars {
            report.checked += 1;
            let lhs = map.apply(&src.act_variable(w, &alpha)?)?;
            let rhs = tgt.act_variable(w, &img)?;
            if lhs != rhs {
                let detail = format!("fails to commute with t[{}]", p.name(w));
                report.status = Status::Fail;
                report.witness = Some(witness(&src, &tgt, &alpha, &lhs.sub(&rhs), detail));
                return Ok(report);
            }
        }
    }
    Ok(report)
}

/// Checks two maps with the same source and target agree on the box.
pub fn check_agree(f: &dyn EnvelopeMap, g: &dyn EnvelopeMap, bx: &MonomialBox) -> Result<PropertyReport, MapError> {
    let p = f.poset();
    let src = Envelope::new(p.clone(), f.source());
    let tgt = Envelope::new(p.clone(), f.target());
    let mut report = PropertyReport {
        property: "agreement".into(),
        map: format!("{} vs {}", f.describe(), g.describe()),
        bound: bx.to_string(),
        checked: 0,
        status: Status::Pass,
        witness: None,
    };
    for m in src.monomials_in_box(bx) {
        report.checked += 1;
        let (a, b) = (f.apply_monomial(&m)?, g.apply_monomial(&m)?);
        if a != b {
            let input = EnvelopeElement::from_monomial(src.ambient(), m, f.field().one());
            report.status = Status::Fail;
            report.witness = Some(witness(&src, &tgt, &input, &a.sub(&b), "maps differ".into()));
            break;
        }
    }
    Ok(report)
}
