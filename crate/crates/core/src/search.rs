//! Enumeration of quantifier pairs over a fixed algebra and counterexample
//! search for formulas.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::algebra::{Algebra, AlgebraError, Op};
use crate::formula::{check_formula, Formula};
use crate::order::Elem;
use crate::report::{CheckReport, Witness};
use crate::varieties::{check_suite, CheckOptions, SuiteError, SuiteId};

/// Default carrier cap for raw enumeration.
pub const DEFAULT_RAW_MAX_SIZE: usize = 6;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SearchError {
    #[error("carrier of size {size} exceeds the raw-mode cap {cap}")]
    TooLarge { size: usize, cap: usize },
    #[error("precondition failed\n{0}")]
    Precondition(Box<CheckReport>),
    #[error(transparent)]
    Suite(#[from] SuiteError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    /// From candidate ranges `B`: `∃a = min{b ∈ B : b ≥ a}`,
    /// `∀a = max{b ∈ B : b ≤ a}`.
    Subalgebra,
    /// Direct table enumeration.
    Raw,
}

impl FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "subalgebra" => Ok(Mode::Subalgebra),
            "raw" => Ok(Mode::Raw),
            other => Err(format!("unknown mode `{other}` (expected subalgebra or raw)")),
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Subalgebra => "subalgebra",
            Mode::Raw => "raw",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct QuantifierAssignment {
    pub exists: Vec<Elem>,
    pub forall: Vec<Elem>,
    pub provenance: Mode,
}

impl QuantifierAssignment {
    pub fn apply(&self, g: &Algebra) -> Result<Algebra, AlgebraError> {
        g.with_quantifiers(self.exists.clone(), Some(self.forall.clone()))
    }

    /// The common image of the two operators.
    pub fn range(&self) -> Vec<Elem> {
        let mut r = self.exists.clone();
        r.sort_unstable();
        r.dedup();
        r
    }
}

fn require(a: &Algebra, id: SuiteId) -> Result<(), SearchError> {
    let r = check_suite(a, id, CheckOptions::default())?;
    if r.failed() {
        return Err(SearchError::Precondition(Box::new(r)));
    }
    Ok(())
}

/// Every quantifier pair on `g` passing `filter`, sorted by the `∃` table
/// and then the `∀` table. Raw mode refuses carriers above `max_size`.
pub fn enumerate_quantifier_pairs(
    g: &Algebra,
    mode: Mode,
    filter: SuiteId,
    max_size: usize,
) -> Result<Vec<QuantifierAssignment>, SearchError> {
    let base = g.without_quantifiers();
    let candidates = match mode {
        Mode::Subalgebra => {
            require(&base, SuiteId::Godel)?;
            subalgebra_candidates(&base)
        }
        Mode::Raw => {
            require(&base, SuiteId::Heyting)?;
            if g.size() > max_size {
                return Err(SearchError::TooLarge {
                    size: g.size(),
                    cap: max_size,
                });
            }
            raw_candidates(&base)
        }
    };
    let mut out = Vec::new();
    for (exists, forall) in candidates {
        let a = base.with_quantifiers(exists.clone(), Some(forall.clone()))?;
        if check_suite(&a, filter, CheckOptions::default())?.passed() {
            out.push(QuantifierAssignment {
                exists,
                forall,
                provenance: mode,
            });
        }
    }
    out.sort_by(|p, q| (&p.exists, &p.forall).cmp(&(&q.exists, &q.forall)));
    out.dedup();
    Ok(out)
}

/// The ranges `B ∋ 0, 1` closed under `∨`, `∧`, `⇒`, with the induced
/// operators.
fn subalgebra_candidates(g: &Algebra) -> Vec<(Vec<Elem>, Vec<Elem>)> {
    let n = g.size();
    let (bot, top) = (g.bot(), g.top());
    let inner: Vec<Elem> = (0..n).filter(|&e| e != bot && e != top).collect();
    let mut out = Vec::new();
    for mask in 0u64..(1u64 << inner.len()) {
        let mut member = vec![false; n];
        member[bot] = true;
        member[top] = true;
        for (i, &e) in inner.iter().enumerate() {
            if mask >> i & 1 == 1 {
                member[e] = true;
            }
        }
        let b: Vec<Elem> = (0..n).filter(|&e| member[e]).collect();
        let closed = [Op::Join, Op::Meet, Op::Himp].iter().all(|&op| {
            b.iter()
                .all(|&x| b.iter().all(|&y| member[g.apply2(op, x, y)]))
        });
        if !closed {
            continue;
        }
        let least_above = |a: Elem| {
            b.iter()
                .copied()
                .filter(|&x| g.leq(a, x))
                .fold(top, |m, x| g.apply2(Op::Meet, m, x))
        };
        let greatest_below = |a: Elem| {
            b.iter()
                .copied()
                .filter(|&x| g.leq(x, a))
                .fold(bot, |m, x| g.apply2(Op::Join, m, x))
        };
        out.push((
            (0..n).map(least_above).collect(),
            (0..n).map(greatest_below).collect(),
        ));
    }
    out
}

/// Raw tables with the pruning the monadic axioms force: `∃` is a closure
/// operator fixing `0`; `∀x ≤ x`, `∀x` is a fixpoint of `∃`, and `∀` fixes
/// every fixpoint of `∃`. Both are monotone.
fn raw_candidates(g: &Algebra) -> Vec<(Vec<Elem>, Vec<Elem>)> {
    let n = g.size();
    let mut exists_tables = Vec::new();
    let mut row = vec![0; n];
    extend(g, &mut row, 0, &|g: &Algebra, row: &[Elem], i: Elem, v: Elem| {
        g.leq(i, v) && (0..i).all(|j| monotone_pair(g, row, i, v, j))
    }, &mut |row: &[Elem]| {
        let idempotent = (0..n).all(|x| row[row[x]] == row[x]);
        if idempotent && row[g.bot()] == g.bot() {
            exists_tables.push(row.to_vec());
        }
    });
    let mut out = Vec::new();
    for ex in exists_tables {
        let fixed: Vec<bool> = (0..n).map(|x| ex[x] == x).collect();
        let mut row = vec![0; n];
        extend(g, &mut row, 0, &|g: &Algebra, row: &[Elem], i: Elem, v: Elem| {
            g.leq(v, i)
                && fixed[v]
                && (!fixed[i] || v == i)
                && (0..i).all(|j| monotone_pair(g, row, i, v, j))
        }, &mut |row: &[Elem]| out.push((ex.clone(), row.to_vec())));
    }
    out
}

fn monotone_pair(g: &Algebra, row: &[Elem], i: Elem, v: Elem, j: Elem) -> bool {
    (!g.leq(i, j) || g.leq(v, row[j])) && (!g.leq(j, i) || g.leq(row[j], v))
}

type Allowed<'a> = dyn Fn(&Algebra, &[Elem], Elem, Elem) -> bool + 'a;

/// Fills `row[i..]` with every value the predicate admits, calling `emit`
/// on each complete row.
fn extend(
    g: &Algebra,
    row: &mut Vec<Elem>,
    i: usize,
    allowed: &Allowed<'_>,
    emit: &mut dyn FnMut(&[Elem]),
) {
    if i == row.len() {
        emit(row);
        return;
    }
    for v in 0..row.len() {
        if allowed(g, &row[..i], i, v) {
            row[i] = v;
            extend(g, row, i + 1, allowed, emit);
        }
    }
}

/// The least witness of `f` in lexicographic assignment order, if any.
pub fn find_counterexample(a: &Algebra, f: &Formula) -> Result<Option<Witness>, SearchError> {
    let r = check_formula(a, f, false)?;
    Ok(r.witness)
}

/// Every falsifying assignment of the universal prefix of `f`.
pub fn all_counterexamples(a: &Algebra, f: &Formula) -> Result<Vec<Witness>, SearchError> {
    let r = check_formula(a, f, true)?;
    Ok(r.all_witnesses)
}
