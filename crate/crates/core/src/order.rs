//! Finite posets and the lattice and Heyting structure read off the order.
//!
//! Elements are indexed densely in declaration order. Labels only matter at
//! the input/output boundary; every table in the crate is indexed by [`Elem`].

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use crate::report::{Binding, CheckReport, ElemRef, Witness};

/// Index of an element in a carrier.
pub type Elem = usize;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Bound {
    Meet,
    Join,
}

impl fmt::Display for Bound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Bound::Meet => write!(f, "greatest lower bound"),
            Bound::Join => write!(f, "least upper bound"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OrderError {
    #[error("duplicate element label `{0}`")]
    DuplicateLabel(String),
    #[error("unknown element label `{0}`")]
    UnknownLabel(String),
    #[error("cycle detected: `{0}` and `{1}` lie below each other")]
    Cycle(String, String),
    #[error("order relation is not {0}")]
    NotAnOrder(&'static str),
    #[error("order matrix has wrong shape: expected {expected}x{expected}")]
    Shape { expected: usize },
    #[error("empty carrier")]
    Empty,
    #[error("not a lattice: `{a}` and `{b}` have no {bound} (maximal candidates: {candidates:?})")]
    NotALattice {
        a: String,
        b: String,
        bound: Bound,
        candidates: Vec<String>,
    },
    #[error("no relative pseudocomplement of `{0}` with respect to `{1}`")]
    NoRelativePseudocomplement(String, String),
}

pub type Result<T, E = OrderError> = std::result::Result<T, E>;

/// A finite partial order over labelled elements.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poset {
    names: Vec<String>,
    leq: Vec<bool>,
}

impl Poset {
    /// Builds a poset from Hasse covers `(lower, upper)`; the order is the
    /// reflexive-transitive closure. Redundant covers are accepted.
    pub fn from_covers<S: AsRef<str>>(names: &[S], covers: &[(S, S)]) -> Result<Self> {
        let names: Vec<String> = names.iter().map(|s| s.as_ref().to_string()).collect();
        let mut index = HashMap::with_capacity(names.len());
        for (i, name) in names.iter().enumerate() {
            if index.insert(name.as_str(), i).is_some() {
                return Err(OrderError::DuplicateLabel(name.clone()));
            }
        }
        let n = names.len();
        let mut leq = vec![false; n * n];
        for i in 0..n {
            leq[i * n + i] = true;
        }
        for (lo, hi) in covers {
            let lo = lo.as_ref();
            let hi = hi.as_ref();
            let a = *index
                .get(lo)
                .ok_or_else(|| OrderError::UnknownLabel(lo.to_string()))?;
            let b = *index
                .get(hi)
                .ok_or_else(|| OrderError::UnknownLabel(hi.to_string()))?;
            if a == b {
                return Err(OrderError::Cycle(lo.to_string(), hi.to_string()));
            }
            leq[a * n + b] = true;
        }
        // Warshall
        for k in 0..n {
            for i in 0..n {
                if leq[i * n + k] {
                    for j in 0..n {
                        if leq[k * n + j] {
                            leq[i * n + j] = true;
                        }
                    }
                }
            }
        }
        for i in 0..n {
            for j in (i + 1)..n {
                if leq[i * n + j] && leq[j * n + i] {
                    return Err(OrderError::Cycle(names[i].clone(), names[j].clone()));
                }
            }
        }
        Ok(Poset { names, leq })
    }

    /// Builds a poset from a full order matrix, validating the order axioms.
    pub fn from_leq(names: Vec<String>, leq: &[Vec<bool>]) -> Result<Self> {
        let n = names.len();
        if leq.len() != n || leq.iter().any(|row| row.len() != n) {
            return Err(OrderError::Shape { expected: n });
        }
        let mut seen = HashMap::new();
        for name in &names {
            if seen.insert(name.as_str(), ()).is_some() {
                return Err(OrderError::DuplicateLabel(name.clone()));
            }
        }
        let flat: Vec<bool> = leq.iter().flatten().copied().collect();
        let p = Poset { names, leq: flat };
        for a in 0..n {
            if !p.leq(a, a) {
                return Err(OrderError::NotAnOrder("reflexive"));
            }
            for b in 0..n {
                if a != b && p.leq(a, b) && p.leq(b, a) {
                    return Err(OrderError::Cycle(p.names[a].clone(), p.names[b].clone()));
                }
                for c in 0..n {
                    if p.leq(a, b) && p.leq(b, c) && !p.leq(a, c) {
                        return Err(OrderError::NotAnOrder("transitive"));
                    }
                }
            }
        }
        Ok(p)
    }

    pub fn size(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, e: Elem) -> &str {
        &self.names[e]
    }

    pub fn index_of(&self, label: &str) -> Option<Elem> {
        self.names.iter().position(|n| n == label)
    }

    #[inline]
    pub fn leq(&self, a: Elem, b: Elem) -> bool {
        self.leq[a * self.size() + b]
    }

    pub fn lt(&self, a: Elem, b: Elem) -> bool {
        a != b && self.leq(a, b)
    }

    pub fn leq_matrix(&self) -> Vec<Vec<bool>> {
        let n = self.size();
        (0..n).map(|a| (0..n).map(|b| self.leq(a, b)).collect()).collect()
    }

    /// Hasse covers: `a < b` with nothing strictly between.
    pub fn covers(&self) -> Vec<(Elem, Elem)> {
        let n = self.size();
        let mut out = Vec::new();
        for a in 0..n {
            for b in 0..n {
                if self.lt(a, b) && !(0..n).any(|m| self.lt(a, m) && self.lt(m, b)) {
                    out.push((a, b));
                }
            }
        }
        out
    }

    /// The induced suborder on `keep`, in the given order.
    pub fn restrict(&self, keep: &[Elem]) -> Poset {
        let names = keep.iter().map(|&e| self.names[e].clone()).collect();
        let mut leq = Vec::with_capacity(keep.len() * keep.len());
        for &a in keep {
            for &b in keep {
                leq.push(self.leq(a, b));
            }
        }
        Poset { names, leq }
    }

    /// Same order, new labels.
    pub fn relabel(&self, names: Vec<String>) -> Result<Poset> {
        Poset::from_leq(names, &self.leq_matrix())
    }

    /// Searches for an order isomorphism `self → other`, returned as the image
    /// of each element. Candidates are pruned by (down-set, up-set) sizes.
    pub fn isomorphism_to(&self, other: &Poset) -> Option<Vec<Elem>> {
        order_isomorphism(&self.leq_matrix(), &other.leq_matrix())
    }
}

/// Order isomorphism between two order matrices, if one exists.
pub fn order_isomorphism(a: &[Vec<bool>], b: &[Vec<bool>]) -> Option<Vec<Elem>> {
    let n = a.len();
    if b.len() != n {
        return None;
    }
    let degree = |m: &[Vec<bool>], x: usize| -> (usize, usize) {
        let down = (0..n).filter(|&y| m[y][x]).count();
        let up = (0..n).filter(|&y| m[x][y]).count();
        (down, up)
    };
    let da: Vec<_> = (0..n).map(|x| degree(a, x)).collect();
    let db: Vec<_> = (0..n).map(|x| degree(b, x)).collect();
    let mut sa = da.clone();
    let mut sb = db.clone();
    sa.sort_unstable();
    sb.sort_unstable();
    if sa != sb {
        return None;
    }

    fn extend(
        i: usize,
        a: &[Vec<bool>],
        b: &[Vec<bool>],
        da: &[(usize, usize)],
        db: &[(usize, usize)],
        map: &mut Vec<usize>,
        used: &mut Vec<bool>,
    ) -> bool {
        let n = a.len();
        if i == n {
            return true;
        }
        for cand in 0..n {
            if used[cand] || da[i] != db[cand] {
                continue;
            }
            let consistent = (0..i)
                .all(|j| a[i][j] == b[cand][map[j]] && a[j][i] == b[map[j]][cand]);
            if !consistent {
                continue;
            }
            map.push(cand);
            used[cand] = true;
            if extend(i + 1, a, b, da, db, map, used) {
                return true;
            }
            map.pop();
            used[cand] = false;
        }
        false
    }

    let mut map = Vec::with_capacity(n);
    let mut used = vec![false; n];
    extend(0, a, b, &da, &db, &mut map, &mut used).then_some(map)
}

/// A finite lattice with materialized meet and join tables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lattice {
    poset: Poset,
    meet: Vec<Elem>,
    join: Vec<Elem>,
    bot: Elem,
    top: Elem,
}

impl Lattice {
    /// Derives meet and join tables from the order. Fails with one witness
    /// pair and its maximal (or minimal) common bounds if some pair has no
    /// unique glb or lub.
    pub fn from_poset(poset: Poset) -> Result<Self> {
        let n = poset.size();
        if n == 0 {
            return Err(OrderError::Empty);
        }
        let mut meet = vec![0; n * n];
        let mut join = vec![0; n * n];
        for a in 0..n {
            for b in 0..n {
                let lower: Vec<Elem> = (0..n)
                    .filter(|&c| poset.leq(c, a) && poset.leq(c, b))
                    .collect();
                let maximal: Vec<Elem> = lower
                    .iter()
                    .copied()
                    .filter(|&c| !lower.iter().any(|&d| poset.lt(c, d)))
                    .collect();
                if maximal.len() != 1 {
                    return Err(not_a_lattice(&poset, a, b, Bound::Meet, &maximal));
                }
                meet[a * n + b] = maximal[0];

                let upper: Vec<Elem> = (0..n)
                    .filter(|&c| poset.leq(a, c) && poset.leq(b, c))
                    .collect();
                let minimal: Vec<Elem> = upper
                    .iter()
                    .copied()
                    .filter(|&c| !upper.iter().any(|&d| poset.lt(d, c)))
                    .collect();
                if minimal.len() != 1 {
                    return Err(not_a_lattice(&poset, a, b, Bound::Join, &minimal));
                }
                join[a * n + b] = minimal[0];
            }
        }
        let bot = (0..n).fold(0, |acc, e| meet[acc * n + e]);
        let top = (0..n).fold(0, |acc, e| join[acc * n + e]);
        Ok(Lattice {
            poset,
            meet,
            join,
            bot,
            top,
        })
    }

    pub fn poset(&self) -> &Poset {
        &self.poset
    }

    pub fn size(&self) -> usize {
        self.poset.size()
    }

    pub fn names(&self) -> &[String] {
        self.poset.names()
    }

    pub fn name(&self, e: Elem) -> &str {
        self.poset.name(e)
    }

    #[inline]
    pub fn leq(&self, a: Elem, b: Elem) -> bool {
        self.poset.leq(a, b)
    }

    #[inline]
    pub fn meet(&self, a: Elem, b: Elem) -> Elem {
        self.meet[a * self.size() + b]
    }

    #[inline]
    pub fn join(&self, a: Elem, b: Elem) -> Elem {
        self.join[a * self.size() + b]
    }

    pub fn meet_table(&self) -> &[Elem] {
        &self.meet
    }

    pub fn join_table(&self) -> &[Elem] {
        &self.join
    }

    pub fn bot(&self) -> Elem {
        self.bot
    }

    pub fn top(&self) -> Elem {
        self.top
    }

    /// Exhaustive check of `a ∧ (b ∨ c) = (a ∧ b) ∨ (a ∧ c)` over all triples.
    pub fn check_distributive(&self) -> CheckReport {
        let n = self.size();
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let left = self.meet(a, self.join(b, c));
                    let right = self.join(self.meet(a, b), self.meet(a, c));
                    if left != right {
                        let bind = |var: &str, e: Elem| Binding {
                            var: var.to_string(),
                            elem: e,
                            label: self.name(e).to_string(),
                        };
                        let mut w = Witness::new(vec![bind("a", a), bind("b", b), bind("c", c)])
                            .with_clause("distributivity");
                        w.left = Some(ElemRef::new(left, self.name(left)));
                        w.right = Some(ElemRef::new(right, self.name(right)));
                        return CheckReport::fail(w).with_subject("distributive");
                    }
                }
            }
        }
        CheckReport::pass().with_subject("distributive")
    }

    /// `a ⇒ b`: the largest `c` with `a ∧ c ≤ b`.
    pub fn relative_pseudocomplement(&self, a: Elem, b: Elem) -> Result<Elem> {
        let n = self.size();
        let candidates: Vec<Elem> = (0..n).filter(|&c| self.leq(self.meet(a, c), b)).collect();
        candidates
            .iter()
            .copied()
            .find(|&m| candidates.iter().all(|&c| self.leq(c, m)))
            .ok_or_else(|| {
                OrderError::NoRelativePseudocomplement(
                    self.name(a).to_string(),
                    self.name(b).to_string(),
                )
            })
    }

    /// The full Heyting implication table, row-major, or the first pair
    /// lacking a relative pseudocomplement.
    pub fn heyting_implication(&self) -> Result<Vec<Elem>> {
        let n = self.size();
        let mut table = Vec::with_capacity(n * n);
        for a in 0..n {
            for b in 0..n {
                table.push(self.relative_pseudocomplement(a, b)?);
            }
        }
        Ok(table)
    }

    /// Whether the order is total.
    pub fn is_chain(&self) -> bool {
        let n = self.size();
        (0..n).all(|a| (0..n).all(|b| self.leq(a, b) || self.leq(b, a)))
    }
}

fn not_a_lattice(poset: &Poset, a: Elem, b: Elem, bound: Bound, found: &[Elem]) -> OrderError {
    OrderError::NotALattice {
        a: poset.name(a).to_string(),
        b: poset.name(b).to_string(),
        bound,
        candidates: found.iter().map(|&e| poset.name(e).to_string()).collect(),
    }
}
