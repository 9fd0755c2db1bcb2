//! Named axiom systems and lemma batteries, checked exhaustively.
//!
//! Each suite is an ordered list of labelled closed formulas. A suite passes
//! iff every clause passes; a failure names the first failing clause (in
//! catalog order) and its least witness.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use serde::Serialize;
use thiserror::Error;

use crate::algebra::{Algebra, AlgebraError, Const, Op};
use crate::formula::{check_formula, evaluate_at, Formula};
use crate::io::parse_formula;
use crate::order::Elem;
use crate::report::{Binding, CheckReport, ElemRef, Probe, Witness};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SuiteId {
    Heyting,
    Godel,
    MonadicHeyting,
    MonadicGodel,
    KleeneCentered,
    Nelson,
    RnResiduation,
    NelsonPrelinear,
    MonadicNelson,
    Lemma23Basic,
    Lemma24,
    Lemma33,
    Ck,
}

impl SuiteId {
    pub const ALL: [SuiteId; 13] = [
        SuiteId::Heyting,
        SuiteId::Godel,
        SuiteId::MonadicHeyting,
        SuiteId::MonadicGodel,
        SuiteId::KleeneCentered,
        SuiteId::Nelson,
        SuiteId::RnResiduation,
        SuiteId::NelsonPrelinear,
        SuiteId::MonadicNelson,
        SuiteId::Lemma23Basic,
        SuiteId::Lemma24,
        SuiteId::Lemma33,
        SuiteId::Ck,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            SuiteId::Heyting => "heyting",
            SuiteId::Godel => "godel",
            SuiteId::MonadicHeyting => "monadic-heyting",
            SuiteId::MonadicGodel => "monadic-godel",
            SuiteId::KleeneCentered => "kleene-centered",
            SuiteId::Nelson => "nelson",
            SuiteId::RnResiduation => "rn-residuation",
            SuiteId::NelsonPrelinear => "nelson-prelinear",
            SuiteId::MonadicNelson => "monadic-nelson",
            SuiteId::Lemma23Basic => "lemma23-basic",
            SuiteId::Lemma24 => "lemma24",
            SuiteId::Lemma33 => "lemma33",
            SuiteId::Ck => "ck",
        }
    }
}

impl fmt::Display for SuiteId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SuiteId {
    type Err = SuiteError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        SuiteId::ALL
            .into_iter()
            .find(|id| id.as_str() == s)
            .ok_or_else(|| SuiteError::UnknownSuite(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SuiteError {
    #[error("unknown suite `{0}`")]
    UnknownSuite(String),
    #[error("suite `{suite}` needs operation `{op}`, which this algebra lacks")]
    MissingOperation { suite: SuiteId, op: Op },
    #[error("suite `{suite}` needs constant `{constant}`, which this algebra lacks")]
    MissingConstant { suite: SuiteId, constant: Const },
    #[error("unknown clause `{0}`")]
    UnknownClause(String),
    #[error("precondition failed: {0}")]
    Precondition(Box<CheckReport>),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

#[derive(Debug, Clone)]
pub struct Clause {
    pub label: &'static str,
    pub formula: Formula,
    /// Only checked when explicitly requested.
    pub opt_in: bool,
}

#[derive(Debug, Clone)]
pub struct Suite {
    pub id: SuiteId,
    pub clauses: Vec<Clause>,
}

impl Suite {
    /// Operations needed by the default (non-opt-in) clauses.
    pub fn required_ops(&self) -> BTreeSet<Op> {
        self.signature().0
    }

    pub fn required_consts(&self) -> BTreeSet<Const> {
        self.signature().1
    }

    fn signature(&self) -> (BTreeSet<Op>, BTreeSet<Const>) {
        let mut ops = BTreeSet::new();
        let mut consts = BTreeSet::new();
        for c in self.clauses.iter().filter(|c| !c.opt_in) {
            let (o, k) = c.formula.signature();
            ops.extend(o);
            consts.extend(k);
        }
        (ops, consts)
    }

    pub fn clause(&self, label: &str) -> Option<&Clause> {
        self.clauses.iter().find(|c| c.label == label)
    }
}

type Src = (&'static str, &'static str);

const LATTICE: &[Src] = &[
    ("h1.join-comm", "forall x y. x \\/ y = y \\/ x"),
    ("h1.meet-comm", "forall x y. x /\\ y = y /\\ x"),
    ("h1.join-assoc", "forall x y z. (x \\/ y) \\/ z = x \\/ (y \\/ z)"),
    ("h1.meet-assoc", "forall x y z. (x /\\ y) /\\ z = x /\\ (y /\\ z)"),
    ("h1.absorb-join", "forall x y. x \\/ (x /\\ y) = x"),
    ("h1.absorb-meet", "forall x y. x /\\ (x \\/ y) = x"),
    ("h1.bounds", "forall x. x \\/ 0 = x and x /\\ 1 = x"),
];

const HEYTING: &[Src] = &[
    ("h2", "forall x y. x /\\ (x => y) = x /\\ y"),
    ("h3", "forall x y z. x /\\ (y => z) = x /\\ ((x /\\ y) => (x /\\ z))"),
    ("h4", "forall x y. (x /\\ y) => x = 1"),
];

const PRELINEAR: &[Src] = &[("prelinear", "forall x y. (x => y) \\/ (y => x) = 1")];

const MONADIC: &[Src] = &[
    ("m1", "forall x. A x <= x"),
    ("m1.dual", "forall x. x <= E x"),
    ("m2", "forall x y. A (x /\\ y) = A x /\\ A y"),
    ("m2.dual", "forall x y. E (x \\/ y) = E x \\/ E y"),
    ("m3", "A 1 = 1"),
    ("m3.dual", "E 0 = 0"),
    ("m4", "forall x. A E x = E x"),
    ("m4.dual", "forall x. E A x = A x"),
    ("m5", "forall x y. A (x => y) <= E x => E y"),
];

const GODEL_EQUATION: &[Src] = &[("G", "forall x y. A (E x \\/ y) = E x \\/ A y")];

const DE_MORGAN: &[Src] = &[
    ("dm.involution", "forall x. ~~x = x"),
    ("dm.join", "forall x y. ~(x \\/ y) = ~x /\\ ~y"),
    ("dm.meet", "forall x y. ~(x /\\ y) = ~x \\/ ~y"),
    ("dm.bounds", "~0 = 1"),
    ("kleene", "forall x y. x /\\ ~x <= y \\/ ~y"),
];

const CENTER: &[Src] = &[("center", "~c = c")];

const NELSON_N1: &[Src] = &[
    ("N1.involution", "forall x. ~~x = x"),
    ("N1.demorgan", "forall x y. ~(x \\/ y) = ~x /\\ ~y"),
    ("N1.kleene", "forall x y. x /\\ ~x <= y \\/ ~y"),
];

const NELSON_REST: &[Src] = &[
    ("N2", "forall x. x -> x = 1"),
    ("N3", "forall x y z. x -> (y -> z) = (x /\\ y) -> z"),
    ("N4", "forall x y. x /\\ (x -> y) = x /\\ (~x \\/ y)"),
];

const N3_AS_PRINTED: Src = ("n3-as-printed", "forall x y z. x -> (x -> z) = (x /\\ y) -> z");

const RESIDUATION: &[Src] = &[(
    "rn",
    "forall x y z. (x /\\ z <= ~x \\/ y) iff (z <= x -> y)",
)];

const NELSON_PRELINEAR: &[Src] = &[("nelson-prelinear", "forall x y. (x -> y) \\/ (y -> x) = 1")];

const MONADIC_NELSON: &[Src] = &[
    ("n1", "E 0 = 0"),
    ("n2", "forall x. x <= E x"),
    ("n3", "forall x y. E (x /\\ E y) = E x /\\ E y"),
    ("n4", "forall x y. E (x \\/ y) = E x \\/ E y"),
    ("n5", "forall x. A E x = E x"),
    ("n6", "forall x y. A (x -> y) <= E x -> E y"),
    ("n7", "forall x y. A (x -> y) <= A x -> A y"),
    ("center-fixed", "E c = c"),
];

const LEMMA23_BASIC: &[Src] = &[
    ("item1.exists-in-forall-image", "forall x. exists y. E x = A y"),
    ("item1.forall-in-exists-image", "forall x. exists y. A x = E y"),
    ("item2.bot", "exists w. E w = 0"),
    ("item2.top", "exists w. E w = 1"),
    ("item2.join", "forall u [exists w. E w = u]. forall v [exists w. E w = v]. exists w. E w = u \\/ v"),
    ("item2.meet", "forall u [exists w. E w = u]. forall v [exists w. E w = v]. exists w. E w = u /\\ v"),
    ("item2.himp", "forall u [exists w. E w = u]. forall v [exists w. E w = v]. exists w. E w = u => v"),
    ("item3.exists-above", "forall a. a <= E a and E E a = E a"),
    ("item3.exists-least", "forall a. forall b [(exists w. E w = b) and a <= b]. E a <= b"),
    ("item3.forall-below", "forall a. A a <= a and E A a = A a"),
    ("item3.forall-greatest", "forall a. forall b [(exists w. E w = b) and b <= a]. b <= A a"),
];

const LEMMA24: &[Src] = &[
    ("item1", "E 1 = 1 and A 0 = 0"),
    ("item2", "forall u [exists w. E w = u]. A u = u and E u = u"),
    ("item3", "forall a. A a <= a and a <= E a"),
    ("item4", "forall a. forall b [a <= b]. A a <= A b and E a <= E b"),
    ("item5", "forall a. forall u [exists w. E w = u]. A (a \\/ u) = A a \\/ u"),
    ("item6", "forall a. forall u [exists w. E w = u]. E (a /\\ u) = E a /\\ u"),
    ("item7", "forall a. forall u [exists w. E w = u]. A (a => u) = E a => u"),
    ("item8", "forall a. forall u [exists w. E w = u]. E (a => u) <= A a => u"),
    ("item9", "forall a. forall u [exists w. E w = u]. A (u => a) = u => A a"),
    ("item10", "forall a. forall u [exists w. E w = u]. E (u => a) <= u => E a"),
    ("item11", "forall a b. E a /\\ A b <= E (a /\\ b)"),
    ("item12", "forall a b. A (a => b) <= A a => A b"),
    ("item13", "forall a. A !a = !E a"),
    ("item14", "forall a. E !a <= !A a"),
];

const LEMMA33: &[Src] = &[
    ("item1", "A 1 = 1"),
    ("item2", "forall x. A x <= x"),
    ("item3", "forall x y. A (x \\/ A y) = A x \\/ A y"),
    ("item4", "forall x y. A (x /\\ y) = A x /\\ A y"),
    ("item5", "forall x. E A x = A x"),
    ("item6", "forall x. A E x = E x"),
];

const CK: &[Src] = &[(
    "ck",
    "forall x [c <= x]. forall y [c <= y]. (x /\\ y = c) implies (exists z. z \\/ c = x and ~z \\/ c = y)",
)];

fn clauses(groups: &[&[Src]]) -> Vec<Clause> {
    groups
        .iter()
        .flat_map(|g| g.iter())
        .map(|&(label, src)| Clause {
            label,
            formula: parse_formula(src)
                .unwrap_or_else(|e| panic!("catalog clause `{label}` does not parse: {e}")),
            opt_in: false,
        })
        .collect()
}

fn build(id: SuiteId) -> Suite {
    let mut clauses = match id {
        SuiteId::Heyting => clauses(&[LATTICE, HEYTING]),
        SuiteId::Godel => clauses(&[LATTICE, HEYTING, PRELINEAR]),
        SuiteId::MonadicHeyting => clauses(&[LATTICE, HEYTING, MONADIC]),
        SuiteId::MonadicGodel => clauses(&[LATTICE, HEYTING, PRELINEAR, MONADIC, GODEL_EQUATION]),
        SuiteId::KleeneCentered => clauses(&[DE_MORGAN, CENTER]),
        SuiteId::Nelson => clauses(&[NELSON_N1, NELSON_REST]),
        SuiteId::RnResiduation => clauses(&[RESIDUATION]),
        SuiteId::NelsonPrelinear => clauses(&[NELSON_PRELINEAR]),
        SuiteId::MonadicNelson => clauses(&[
            DE_MORGAN,
            CENTER,
            NELSON_REST,
            RESIDUATION,
            NELSON_PRELINEAR,
            MONADIC_NELSON,
        ]),
        SuiteId::Lemma23Basic => clauses(&[LEMMA23_BASIC]),
        SuiteId::Lemma24 => clauses(&[LEMMA24]),
        SuiteId::Lemma33 => clauses(&[LEMMA33]),
        SuiteId::Ck => clauses(&[CK]),
    };
    if matches!(id, SuiteId::Nelson | SuiteId::MonadicNelson) {
        let mut printed = self::clauses(&[&[N3_AS_PRINTED]]);
        printed[0].opt_in = true;
        clauses.extend(printed);
    }
    Suite { id, clauses }
}

/// The catalog entry for `id`.
pub fn suite(id: SuiteId) -> &'static Suite {
    static CATALOG: OnceLock<BTreeMap<SuiteId, Suite>> = OnceLock::new();
    &CATALOG.get_or_init(|| SuiteId::ALL.into_iter().map(|id| (id, build(id))).collect())[&id]
}

#[derive(Debug, Clone, Copy, Default)]
pub struct CheckOptions {
    /// Collect every falsifying assignment of every failing clause.
    pub report_all: bool,
    /// Also check clauses marked opt-in.
    pub include_opt_in: bool,
}

impl CheckOptions {
    pub fn all_witnesses() -> Self {
        CheckOptions {
            report_all: true,
            include_opt_in: false,
        }
    }
}

/// Checks every clause of `id` against `a`.
pub fn check_suite(a: &Algebra, id: SuiteId, opts: CheckOptions) -> Result<CheckReport, SuiteError> {
    let s = suite(id);
    for op in s.required_ops() {
        if !a.has_op(op) {
            return Err(SuiteError::MissingOperation { suite: id, op });
        }
    }
    for c in s.required_consts() {
        if !a.has_const(c) {
            return Err(SuiteError::MissingConstant { suite: id, constant: c });
        }
    }
    let mut first: Option<CheckReport> = None;
    let mut all = Vec::new();
    for clause in s.clauses.iter().filter(|c| !c.opt_in || opts.include_opt_in) {
        let r = check_formula(a, &clause.formula, opts.report_all)?;
        if r.passed() {
            continue;
        }
        all.extend(
            r.all_witnesses
                .into_iter()
                .map(|w| w.with_clause(clause.label)),
        );
        if first.is_none() {
            let w = r.witness.expect("failing report has a witness").with_clause(clause.label);
            first = Some(CheckReport::fail(w));
        }
        if !opts.report_all {
            break;
        }
    }
    Ok(match first {
        None => CheckReport::pass().with_subject(id.as_str()),
        Some(mut r) => {
            r.all_witnesses = all;
            r.with_subject(id.as_str())
        }
    })
}

/// Evaluates a suite clause at a chosen assignment of its universal prefix
/// and records whether that assignment is among `report`'s witnesses.
pub fn probe_clause(
    a: &Algebra,
    id: SuiteId,
    clause: &str,
    assignment: &[(String, Elem)],
    report: Option<&CheckReport>,
) -> Result<Probe, SuiteError> {
    let c = suite(id)
        .clause(clause)
        .ok_or_else(|| SuiteError::UnknownClause(clause.to_string()))?;
    let (holds, sides) = evaluate_at(a, &c.formula, assignment)?;
    let bindings: Vec<Binding> = assignment
        .iter()
        .map(|(v, e)| Binding {
            var: v.clone(),
            elem: *e,
            label: a.label(*e).to_string(),
        })
        .collect();
    let is_witness = report.is_some_and(|r| {
        r.all_witnesses
            .iter()
            .chain(r.witness.iter())
            .any(|w| w.clause.as_deref() == Some(clause) && w.assignment == bindings)
    });
    Ok(Probe {
        clause: clause.to_string(),
        assignment: bindings,
        left: sides.map(|(l, _)| ElemRef::new(l, a.label(l))),
        right: sides.map(|(_, r)| ElemRef::new(r, a.label(r))),
        holds,
        is_witness,
    })
}

/// Images of the quantifiers and the analysis of the range `∃(A)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct QuantifierRange {
    pub exists_image: Vec<Elem>,
    pub forall_image: Vec<Elem>,
    pub report: CheckReport,
}

/// Computes `∃(A)` and `∀(A)` directly from the tables and checks that they
/// coincide, that the range is closed under every operation of `a`, and
/// that `∃a` / `∀a` are the least / greatest range elements above / below
/// `a`.
pub fn quantifier_range(a: &Algebra) -> Result<QuantifierRange, SuiteError> {
    for op in [Op::Exists, Op::Forall] {
        if !a.has_op(op) {
            return Err(SuiteError::MissingOperation {
                suite: SuiteId::Lemma23Basic,
                op,
            });
        }
    }
    let n = a.size();
    let image = |op: Op| -> Vec<Elem> {
        let set: BTreeSet<Elem> = (0..n).map(|x| a.apply1(op, x)).collect();
        set.into_iter().collect()
    };
    let ex = image(Op::Exists);
    let fa = image(Op::Forall);
    let label = |e: Elem| a.label(e).to_string();
    let bind = |var: &str, e: Elem| Binding {
        var: var.to_string(),
        elem: e,
        label: label(e),
    };
    let fail = |clause: &str, w: Witness| Ok(QuantifierRange {
        exists_image: ex.clone(),
        forall_image: fa.clone(),
        report: CheckReport::fail(w.with_clause(clause)).with_subject("quantifier-range"),
    });

    if ex != fa {
        let e = ex
            .iter()
            .chain(fa.iter())
            .copied()
            .find(|e| !(ex.contains(e) && fa.contains(e)))
            .expect("images differ");
        return fail("ranges-equal", Witness::new(vec![bind("u", e)]));
    }
    for (op, table) in a.tables() {
        if op.arity() == 1 {
            for &u in &ex {
                if !ex.contains(&table[u]) {
                    return fail(
                        &format!("closed.{op}"),
                        Witness::new(vec![bind("u", u)]),
                    );
                }
            }
        } else {
            for &u in &ex {
                for &v in &ex {
                    if !ex.contains(&table[u * n + v]) {
                        return fail(
                            &format!("closed.{op}"),
                            Witness::new(vec![bind("u", u), bind("v", v)]),
                        );
                    }
                }
            }
        }
    }
    for (c, e) in a.constants() {
        if !ex.contains(&e) {
            return fail(&format!("closed.{c}"), Witness::new(vec![]));
        }
    }
    for x in 0..n {
        let above: Vec<Elem> = ex.iter().copied().filter(|&b| a.leq(x, b)).collect();
        let least = above.iter().copied().find(|&m| above.iter().all(|&b| a.leq(m, b)));
        if least != Some(a.apply1(Op::Exists, x)) {
            return fail("exists-is-least-above", Witness::new(vec![bind("a", x)]));
        }
        let below: Vec<Elem> = ex.iter().copied().filter(|&b| a.leq(b, x)).collect();
        let greatest = below.iter().copied().find(|&m| below.iter().all(|&b| a.leq(b, m)));
        if greatest != Some(a.apply1(Op::Forall, x)) {
            return fail("forall-is-greatest-below", Witness::new(vec![bind("a", x)]));
        }
    }
    Ok(QuantifierRange {
        exists_image: ex,
        forall_image: fa,
        report: CheckReport::pass().with_subject("quantifier-range"),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SiStatus {
    NotFsi,
    FsiNotSi,
    Si,
}

impl fmt::Display for SiStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SiStatus::NotFsi => "not-fsi",
            SiStatus::FsiNotSi => "fsi-not-si",
            SiStatus::Si => "si",
        })
    }
}

/// Subdirect irreducibility of a monadic Gödel algebra read off `∃(A)`:
/// finitely s.i. iff the range is a chain, s.i. iff moreover the range
/// minus the top has a greatest element.
pub fn check_si_status(a: &Algebra) -> Result<SiStatus, SuiteError> {
    let pre = check_suite(a, SuiteId::MonadicGodel, CheckOptions::default())?;
    if pre.failed() {
        return Err(SuiteError::Precondition(Box::new(pre)));
    }
    let range = quantifier_range(a)?.exists_image;
    let chain = range
        .iter()
        .all(|&u| range.iter().all(|&v| a.leq(u, v) || a.leq(v, u)));
    if !chain {
        return Ok(SiStatus::NotFsi);
    }
    let below_top: Vec<Elem> = range.iter().copied().filter(|&u| u != a.top()).collect();
    let has_greatest = below_top
        .iter()
        .any(|&u| below_top.iter().all(|&v| a.leq(v, u)));
    Ok(if has_greatest {
        SiStatus::Si
    } else {
        SiStatus::FsiNotSi
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_parses_and_is_closed() {
        for id in SuiteId::ALL {
            let s = suite(id);
            assert!(!s.clauses.is_empty());
            for c in &s.clauses {
                assert!(c.formula.is_closed(), "{id}/{}", c.label);
            }
            let labels: BTreeSet<_> = s.clauses.iter().map(|c| c.label).collect();
            assert_eq!(labels.len(), s.clauses.len(), "duplicate labels in {id}");
        }
    }

    #[test]
    fn ids_round_trip() {
        for id in SuiteId::ALL {
            assert_eq!(id.as_str().parse::<SuiteId>().unwrap(), id);
        }
        assert!("monadic-boolean".parse::<SuiteId>().is_err());
    }

    #[test]
    fn required_signatures() {
        let s = suite(SuiteId::MonadicGodel);
        assert_eq!(
            s.required_ops(),
            [Op::Join, Op::Meet, Op::Himp, Op::Exists, Op::Forall]
                .into_iter()
                .collect()
        );
        assert!(suite(SuiteId::Ck).required_consts().contains(&Const::Center));
        assert!(suite(SuiteId::Lemma24).required_ops().contains(&Op::Hneg));
        // opt-in clause does not leak into the required set
        assert!(suite(SuiteId::Nelson).clause("n3-as-printed").unwrap().opt_in);
    }
}
