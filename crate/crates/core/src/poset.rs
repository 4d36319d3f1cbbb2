//! Finite simplicial posets.
//!
//! A poset is read from a small JSON description (element names plus cover
//! pairs), closed transitively, and then checked against the simplicial
//! axioms: a unique minimum and boolean lower intervals. Atoms are numbered
//! in file order; every sign and basis convention in the crate derives from
//! that numbering.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Index of an element inside its [`SimplicialPoset`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ElementId(pub u32);

impl ElementId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl From<usize> for ElementId {
    fn from(i: usize) -> Self {
        ElementId(i as u32)
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PosetError {
    #[error("malformed poset file: {0}")]
    Malformed(String),
    #[error("duplicate element `{0}`")]
    DuplicateElement(String),
    #[error("unknown element `{0}` in cover list")]
    UnknownElement(String),
    #[error("cycle in covers through `{0}`")]
    Cycle(String),
    #[error("no unique bottom element")]
    MissingBottom,
    #[error("`{upper}` does not cover `{lower}`")]
    NotACover { upper: String, lower: String },
    #[error("poset is not simplicial: {0}")]
    NotSimplicial(String),
}

/// On-disk description: `{ "elements": [...], "covers": [[upper, lower], ...] }`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PosetFile {
    pub elements: Vec<String>,
    pub covers: Vec<(String, String)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub axiom: String,
    pub witness: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub ok: bool,
    pub violations: Vec<Violation>,
}

#[derive(Debug, Clone)]
pub struct SimplicialPoset {
    names: Vec<String>,
    index: HashMap<String, ElementId>,
    bottom: ElementId,
    /// `leq[a][b]` iff `a <= b`.
    leq: Vec<Vec<bool>>,
    /// `down[x]`: elements covered by `x`, sorted.
    down: Vec<Vec<ElementId>>,
    up: Vec<Vec<ElementId>>,
    rank: Vec<u32>,
    atoms: Vec<ElementId>,
    /// Position of each element in `atoms`, if it is an atom.
    atom_pos: Vec<Option<usize>>,
    /// Sorted atom positions below each element.
    atoms_below: Vec<Vec<usize>>,
    /// `joins[x][y] = [x v y]`.
    joins: Vec<Vec<Vec<ElementId>>>,
}

impl SimplicialPoset {
    pub fn from_json(text: &str) -> Result<Self, PosetError> {
        let file: PosetFile =
            serde_json::from_str(text).map_err(|e| PosetError::Malformed(e.to_string()))?;
        Self::from_file(&file)
    }

    /// Parses and additionally rejects posets failing [`Self::validate`].
    pub fn from_json_validated(text: &str) -> Result<Self, PosetError> {
        let p = Self::from_json(text)?;
        let report = p.validate();
        if let Some(v) = report.violations.first() {
            return Err(PosetError::NotSimplicial(format!(
                "{} at {}",
                v.axiom,
                v.witness.join(",")
            )));
        }
        Ok(p)
    }

    pub fn from_file(file: &PosetFile) -> Result<Self, PosetError> {
        let n = file.elements.len();
        if n == 0 {
            return Err(PosetError::Malformed("no elements".into()));
        }
        let mut index = HashMap::new();
        for (i, name) in file.elements.iter().enumerate() {
            if index.insert(name.clone(), ElementId::from(i)).is_some() {
                return Err(PosetError::DuplicateElement(name.clone()));
            }
        }
        let lookup = |s: &String| {
            index
                .get(s)
                .copied()
                .ok_or_else(|| PosetError::UnknownElement(s.clone()))
        };
        // edges upper -> lower
        let mut edges = vec![Vec::new(); n];
        for (u, l) in &file.covers {
            let (u, l) = (lookup(u)?, lookup(l)?);
            if u == l {
                return Err(PosetError::Cycle(file.elements[u.index()].clone()));
            }
            edges[u.index()].push(l.index());
        }

        // Kahn's algorithm from the top; leftover vertices lie on a cycle.
        let mut indeg = vec![0usize; n];
        for es in &edges {
            for &l in es {
                indeg[l] += 1;
            }
        }
        let mut stack: Vec<usize> = (0..n).filter(|&i| indeg[i] == 0).collect();
        let mut topo = Vec::with_capacity(n);
        while let Some(u) = stack.pop() {
            topo.push(u);
            for &l in &edges[u] {
                indeg[l] -= 1;
                if indeg[l] == 0 {
                    stack.push(l);
                }
            }
        }
        if topo.len() < n {
            let bad = (0..n).find(|&i| indeg[i] > 0).unwrap();
            return Err(PosetError::Cycle(file.elements[bad].clone()));
        }

        // Reflexive-transitive closure, processed bottom-up.
        let mut leq = vec![vec![false; n]; n];
        for &u in topo.iter().rev() {
            leq[u][u] = true;
            for &l in &edges[u] {
                for w in 0..n {
                    if leq[w][l] {
                        leq[w][u] = true;
                    }
                }
            }
        }

        let bottom = (0..n)
            .find(|&b| (0..n).all(|x| leq[b][x]))
            .ok_or(PosetError::MissingBottom)?;

        let mut down = vec![Vec::new(); n];
        let mut up = vec![Vec::new(); n];
        for u in 0..n {
            for l in 0..n {
                if u != l && leq[l][u] && !(0..n).any(|m| m != u && m != l && leq[l][m] && leq[m][u])
                {
                    down[u].push(ElementId::from(l));
                    up[l].push(ElementId::from(u));
                }
            }
        }

        let mut rank = vec![0u32; n];
        for &u in topo.iter().rev() {
            rank[u] = down[u].iter().map(|l| rank[l.index()] + 1).max().unwrap_or(0);
        }

        let atoms: Vec<ElementId> = (0..n)
            .filter(|&i| i != bottom && rank[i] == 1)
            .map(ElementId::from)
            .collect();
        let mut atom_pos = vec![None; n];
        for (k, a) in atoms.iter().enumerate() {
            atom_pos[a.index()] = Some(k);
        }
        let atoms_below = (0..n)
            .map(|x| {
                atoms
                    .iter()
                    .enumerate()
                    .filter(|(_, a)| leq[a.index()][x])
                    .map(|(k, _)| k)
                    .collect()
            })
            .collect();

        let mut poset = SimplicialPoset {
            names: file.elements.clone(),
            index,
            bottom: ElementId::from(bottom),
            leq,
            down,
            up,
            rank,
            atoms,
            atom_pos,
            atoms_below,
            joins: Vec::new(),
        };
        poset.joins = (0..n)
            .map(|x| {
                (0..n)
                    .map(|y| poset.join_set(&[ElementId::from(x), ElementId::from(y)]))
                    .collect()
            })
            .collect();
        Ok(poset)
    }

    pub fn to_file(&self) -> PosetFile {
        let mut covers = Vec::new();
        for x in self.elements() {
            for &l in self.covered_by(x) {
                covers.push((self.name(x).to_string(), self.name(l).to_string()));
            }
        }
        PosetFile {
            elements: self.names.clone(),
            covers,
        }
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn elements(&self) -> impl Iterator<Item = ElementId> + '_ {
        (0..self.len()).map(ElementId::from)
    }

    /// `P* = P \ {0}`.
    pub fn proper_elements(&self) -> impl Iterator<Item = ElementId> + '_ {
        let b = self.bottom;
        self.elements().filter(move |&x| x != b)
    }

    pub fn bottom(&self) -> ElementId {
        self.bottom
    }

    pub fn name(&self, x: ElementId) -> &str {
        &self.names[x.index()]
    }

    pub fn id(&self, name: &str) -> Option<ElementId> {
        self.index.get(name).copied()
    }

    pub fn le(&self, a: ElementId, b: ElementId) -> bool {
        self.leq[a.index()][b.index()]
    }

    pub fn lt(&self, a: ElementId, b: ElementId) -> bool {
        a != b && self.le(a, b)
    }

    pub fn comparable(&self, a: ElementId, b: ElementId) -> bool {
        self.le(a, b) || self.le(b, a)
    }

    pub fn rank(&self, x: ElementId) -> u32 {
        self.rank[x.index()]
    }

    pub fn max_rank(&self) -> u32 {
        self.rank.iter().copied().max().unwrap_or(0)
    }

    /// Elements covered by `x`.
    pub fn covered_by(&self, x: ElementId) -> &[ElementId] {
        &self.down[x.index()]
    }

    /// Elements covering `x`.
    pub fn covering(&self, x: ElementId) -> &[ElementId] {
        &self.up[x.index()]
    }

    pub fn covers(&self, upper: ElementId, lower: ElementId) -> bool {
        self.down[upper.index()].contains(&lower)
    }

    pub fn atoms(&self) -> &[ElementId] {
        &self.atoms
    }

    pub fn n_atoms(&self) -> usize {
        self.atoms.len()
    }

    pub fn atom_position(&self, x: ElementId) -> Option<usize> {
        self.atom_pos[x.index()]
    }

    pub fn is_atom(&self, x: ElementId) -> bool {
        self.atom_pos[x.index()].is_some()
    }

    /// Sorted positions (in the global atom order) of the atoms below `x`.
    pub fn atoms_below(&self, x: ElementId) -> &[usize] {
        &self.atoms_below[x.index()]
    }

    pub fn elements_of_rank(&self, r: u32) -> Vec<ElementId> {
        self.elements().filter(|&x| self.rank(x) == r).collect()
    }

    pub fn validate(&self) -> ValidationReport {
        let mut violations = Vec::new();
        let witness = |xs: &[ElementId]| xs.iter().map(|&x| self.name(x).to_string()).collect();

        for x in self.elements() {
            for &l in self.covered_by(x) {
                if self.rank(l) + 1 != self.rank(x) {
                    violations.push(Violation {
                        axiom: "graded".into(),
                        witness: witness(&[x, l]),
                    });
                }
            }
        }

        for x in self.elements() {
            if !self.lower_interval_is_boolean(x) {
                violations.push(Violation {
                    axiom: "boolean lower interval".into(),
                    witness: witness(&[x]),
                });
            }
        }

        for x in self.elements() {
            for w in self.elements() {
                if self.lt(w, x) && self.rank(x) == self.rank(w) + 2 {
                    let middles: Vec<ElementId> = self
                        .elements()
                        .filter(|&m| self.lt(w, m) && self.lt(m, x))
                        .collect();
                    if middles.len() != 2 {
                        violations.push(Violation {
                            axiom: "diamond".into(),
                            witness: witness(&[w, x]),
                        });
                    }
                }
            }
        }

        ValidationReport {
            ok: violations.is_empty(),
            violations,
        }
    }

    /// `[0, x]` is isomorphic to the boolean lattice on the atoms below `x`,
    /// via `y -> atoms(y)`.
    fn lower_interval_is_boolean(&self, x: ElementId) -> bool {
        let k = self.atoms_below(x).len();
        if self.rank(x) as usize != k || k >= 31 {
            return false;
        }
        let lower: Vec<ElementId> = self.elements().filter(|&y| self.le(y, x)).collect();
        if lower.len() != 1 << k {
            return false;
        }
        let sets: Vec<BTreeSet<usize>> = lower
            .iter()
            .map(|&y| self.atoms_below(y).iter().copied().collect())
            .collect();
        let distinct: BTreeSet<&BTreeSet<usize>> = sets.iter().collect();
        if distinct.len() != lower.len() {
            return false;
        }
        for (i, &a) in lower.iter().enumerate() {
            for (j, &b) in lower.iter().enumerate() {
                if self.le(a, b) != sets[i].is_subset(&sets[j]) {
                    return false;
                }
            }
        }
        true
    }

    /// Minimal common upper bounds of `xs`.
    pub fn join_set(&self, xs: &[ElementId]) -> Vec<ElementId> {
        let uppers: Vec<ElementId> = self
            .elements()
            .filter(|&u| xs.iter().all(|&x| self.le(x, u)))
            .collect();
        uppers
            .iter()
            .copied()
            .filter(|&u| !uppers.iter().any(|&v| self.lt(v, u)))
            .collect()
    }

    /// `[x v y]`, precomputed.
    pub fn join_pair(&self, x: ElementId, y: ElementId) -> &[ElementId] {
        &self.joins[x.index()][y.index()]
    }

    /// Largest common lower bound, reported only when `[x v y]` is nonempty.
    pub fn meet(&self, x: ElementId, y: ElementId) -> Option<ElementId> {
        if self.join_pair(x, y).is_empty() {
            return None;
        }
        let lowers: Vec<ElementId> = self
            .elements()
            .filter(|&l| self.le(l, x) && self.le(l, y))
            .collect();
        lowers
            .iter()
            .copied()
            .find(|&m| lowers.iter().all(|&l| self.le(l, m)))
    }

    /// The unique atom below `upper` and not below `lower`, as a position in
    /// the global atom order.
    pub fn removed_atom(&self, upper: ElementId, lower: ElementId) -> Result<usize, PosetError> {
        if !self.covers(upper, lower) {
            return Err(PosetError::NotACover {
                upper: self.name(upper).into(),
                lower: self.name(lower).into(),
            });
        }
        let below = self.atoms_below(lower);
        let removed: Vec<usize> = self
            .atoms_below(upper)
            .iter()
            .copied()
            .filter(|a| !below.contains(a))
            .collect();
        match removed.as_slice() {
            [r] => Ok(*r),
            _ => Err(PosetError::NotSimplicial(format!(
                "cover {} > {} does not remove exactly one atom",
                self.name(upper),
                self.name(lower)
            ))),
        }
    }

    /// Incidence sign of the cover `upper > lower`: `(-1)^j` where `j` counts
    /// the atoms of `upper` that come after the removed one in the global atom
    /// order.
    pub fn incidence_sign(&self, upper: ElementId, lower: ElementId) -> Result<i8, PosetError> {
        let r = self.removed_atom(upper, lower)?;
        let j = self.atoms_below(upper).iter().filter(|&&a| a > r).count();
        Ok(if j % 2 == 0 { 1 } else { -1 })
    }

    /// All saturated chains `x = c_0 > c_1 > ... > c_l = z`.
    pub fn saturated_chains(&self, x: ElementId, z: ElementId) -> Vec<Vec<ElementId>> {
        if !self.le(z, x) {
            return Vec::new();
        }
        if x == z {
            return vec![vec![x]];
        }
        let mut out = Vec::new();
        for &l in self.covered_by(x) {
            if self.le(z, l) {
                for mut tail in self.saturated_chains(l, z) {
                    tail.insert(0, x);
                    out.push(tail);
                }
            }
        }
        out
    }

    /// Intervals `[w, x]` of length two, with their two middle elements.
    pub fn diamonds(&self) -> Vec<Diamond> {
        let mut out = Vec::new();
        for x in self.elements() {
            for w in self.elements() {
                if self.lt(w, x) && self.rank(x) == self.rank(w) + 2 {
                    let middles: Vec<ElementId> = self
                        .covered_by(x)
                        .iter()
                        .copied()
                        .filter(|&m| self.covers(m, w))
                        .collect();
                    out.push(Diamond { top: x, bottom: w, middles });
                }
            }
        }
        out
    }
}

/// A length-two interval `[bottom, top]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diamond {
    pub top: ElementId,
    pub bottom: ElementId,
    pub middles: Vec<ElementId>,
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.ok {
            return write!(f, "ok");
        }
        for v in &self.violations {
            writeln!(f, "violation: {} at [{}]", v.axiom, v.witness.join(", "))?;
        }
        Ok(())
    }
}
