//! Terms, guarded first-order formulas, and their evaluation by exhaustive
//! enumeration over a finite carrier.
//!
//! Quantified variables range over the whole carrier in index order; a guard
//! is evaluated with the variable bound and removes the value from the range
//! when false. Witnesses are the first falsifying assignment in
//! lexicographic order (outer variables vary slowest).

use std::collections::BTreeSet;
use std::fmt;

use crate::algebra::{Algebra, AlgebraError, Const, Op};
use crate::order::Elem;
use crate::report::{Binding, CheckReport, ElemRef, Witness};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Term {
    Var(String),
    Const(Const),
    Op(Op, Vec<Term>),
}

impl Term {
    pub fn var(name: &str) -> Term {
        Term::Var(name.to_string())
    }

    pub fn unary(op: Op, t: Term) -> Term {
        Term::Op(op, vec![t])
    }

    pub fn binary(op: Op, l: Term, r: Term) -> Term {
        Term::Op(op, vec![l, r])
    }

    fn collect_signature(&self, ops: &mut BTreeSet<Op>, consts: &mut BTreeSet<Const>) {
        match self {
            Term::Var(_) => {}
            Term::Const(c) => {
                consts.insert(*c);
            }
            Term::Op(op, args) => {
                ops.insert(*op);
                for a in args {
                    a.collect_signature(ops, consts);
                }
            }
        }
    }

    fn collect_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            Term::Var(v) => {
                out.insert(v.clone());
            }
            Term::Const(_) => {}
            Term::Op(_, args) => args.iter().for_each(|a| a.collect_vars(out)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    Eq(Term, Term),
    Le(Term, Term),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    ForAll {
        var: String,
        guard: Option<Box<Formula>>,
        body: Box<Formula>,
    },
    Exists {
        var: String,
        guard: Option<Box<Formula>>,
        body: Box<Formula>,
    },
}

impl Formula {
    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn iff(a: Formula, b: Formula) -> Formula {
        Formula::and(Formula::implies(a.clone(), b.clone()), Formula::implies(b, a))
    }

    pub fn forall(var: &str, guard: Option<Formula>, body: Formula) -> Formula {
        Formula::ForAll {
            var: var.to_string(),
            guard: guard.map(Box::new),
            body: Box::new(body),
        }
    }

    pub fn exists(var: &str, guard: Option<Formula>, body: Formula) -> Formula {
        Formula::Exists {
            var: var.to_string(),
            guard: guard.map(Box::new),
            body: Box::new(body),
        }
    }

    /// Universally closes the formula over `vars`, outermost first.
    pub fn forall_all(vars: &[&str], body: Formula) -> Formula {
        vars.iter()
            .rev()
            .fold(body, |acc, v| Formula::forall(v, None, acc))
    }

    /// Operations and constants mentioned anywhere in the formula.
    pub fn signature(&self) -> (BTreeSet<Op>, BTreeSet<Const>) {
        let mut ops = BTreeSet::new();
        let mut consts = BTreeSet::new();
        self.walk_terms(&mut |t| t.collect_signature(&mut ops, &mut consts));
        (ops, consts)
    }

    fn walk_terms(&self, f: &mut impl FnMut(&Term)) {
        match self {
            Formula::Eq(a, b) | Formula::Le(a, b) => {
                f(a);
                f(b);
            }
            Formula::Not(p) => p.walk_terms(f),
            Formula::And(p, q) | Formula::Or(p, q) | Formula::Implies(p, q) => {
                p.walk_terms(f);
                q.walk_terms(f);
            }
            Formula::ForAll { guard, body, .. } | Formula::Exists { guard, body, .. } => {
                if let Some(g) = guard {
                    g.walk_terms(f);
                }
                body.walk_terms(f);
            }
        }
    }

    /// Free variables.
    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        match self {
            Formula::Eq(a, b) | Formula::Le(a, b) => {
                a.collect_vars(&mut out);
                b.collect_vars(&mut out);
            }
            Formula::Not(p) => out = p.free_vars(),
            Formula::And(p, q) | Formula::Or(p, q) | Formula::Implies(p, q) => {
                out = p.free_vars();
                out.extend(q.free_vars());
            }
            Formula::ForAll { var, guard, body } | Formula::Exists { var, guard, body } => {
                out = body.free_vars();
                if let Some(g) = guard {
                    out.extend(g.free_vars());
                }
                out.remove(var);
            }
        }
        out
    }

    pub fn is_closed(&self) -> bool {
        self.free_vars().is_empty()
    }

    /// Variables of the leading universal prefix, outermost first.
    pub fn universal_prefix(&self) -> Vec<&str> {
        let mut out = Vec::new();
        let mut f = self;
        while let Formula::ForAll { var, body, .. } = f {
            out.push(var.as_str());
            f = body;
        }
        out
    }
}

/// Variable assignment, innermost binding last.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Env {
    bindings: Vec<(String, Elem)>,
}

impl Env {
    pub fn new() -> Self {
        Env::default()
    }

    pub fn from_pairs<S: AsRef<str>>(pairs: &[(S, Elem)]) -> Self {
        Env {
            bindings: pairs
                .iter()
                .map(|(v, e)| (v.as_ref().to_string(), *e))
                .collect(),
        }
    }

    pub fn get(&self, var: &str) -> Option<Elem> {
        self.bindings
            .iter()
            .rev()
            .find(|(v, _)| v == var)
            .map(|&(_, e)| e)
    }

    pub fn push(&mut self, var: &str, e: Elem) {
        self.bindings.push((var.to_string(), e));
    }

    pub fn pop(&mut self) {
        self.bindings.pop();
    }

    fn set_last(&mut self, e: Elem) {
        if let Some(last) = self.bindings.last_mut() {
            last.1 = e;
        }
    }

    fn to_bindings(&self, a: &Algebra) -> Vec<Binding> {
        self.bindings
            .iter()
            .map(|(v, e)| Binding {
                var: v.clone(),
                elem: *e,
                label: a.label(*e).to_string(),
            })
            .collect()
    }
}

/// Value of `t` under `env`.
pub fn eval_term(a: &Algebra, t: &Term, env: &Env) -> Result<Elem, AlgebraError> {
    match t {
        Term::Var(v) => env
            .get(v)
            .ok_or_else(|| AlgebraError::UnboundVariable(v.clone())),
        Term::Const(c) => a.constant(*c).ok_or(AlgebraError::MissingConstant(*c)),
        Term::Op(op, args) => {
            if args.len() != op.arity() {
                return Err(AlgebraError::Arity {
                    op: *op,
                    expected: op.arity(),
                    found: args.len(),
                });
            }
            match args.as_slice() {
                [x] => {
                    let x = eval_term(a, x, env)?;
                    a.try_apply(*op, &[x])
                }
                [x, y] => {
                    let x = eval_term(a, x, env)?;
                    let y = eval_term(a, y, env)?;
                    a.try_apply(*op, &[x, y])
                }
                _ => unreachable!("catalog operations are unary or binary"),
            }
        }
    }
}

/// Truth value of `f` under `env`, enumerating quantified variables.
pub fn holds(a: &Algebra, f: &Formula, env: &mut Env) -> Result<bool, AlgebraError> {
    Ok(match f {
        Formula::Eq(l, r) => eval_term(a, l, env)? == eval_term(a, r, env)?,
        Formula::Le(l, r) => a.leq(eval_term(a, l, env)?, eval_term(a, r, env)?),
        Formula::Not(p) => !holds(a, p, env)?,
        Formula::And(p, q) => holds(a, p, env)? && holds(a, q, env)?,
        Formula::Or(p, q) => holds(a, p, env)? || holds(a, q, env)?,
        Formula::Implies(p, q) => !holds(a, p, env)? || holds(a, q, env)?,
        Formula::ForAll { var, guard, body } => {
            let mut result = true;
            env.push(var, 0);
            for e in 0..a.size() {
                env.set_last(e);
                if in_range(a, guard, env)? && !holds(a, body, env)? {
                    result = false;
                    break;
                }
            }
            env.pop();
            result
        }
        Formula::Exists { var, guard, body } => {
            let mut result = false;
            env.push(var, 0);
            for e in 0..a.size() {
                env.set_last(e);
                if in_range(a, guard, env)? && holds(a, body, env)? {
                    result = true;
                    break;
                }
            }
            env.pop();
            result
        }
    })
}

fn in_range(a: &Algebra, guard: &Option<Box<Formula>>, env: &mut Env) -> Result<bool, AlgebraError> {
    match guard {
        Some(g) => holds(a, g, env),
        None => Ok(true),
    }
}

/// Checks a closed formula. A failure carries the least witness; with
/// `report_all` every falsifying assignment of the universal prefix is
/// listed as well.
pub fn check_formula(a: &Algebra, f: &Formula, report_all: bool) -> Result<CheckReport, AlgebraError> {
    check_in_env(a, f, &mut Env::new(), report_all)
}

/// Like [`check_formula`] but with some free variables pre-assigned.
pub fn check_in_env(
    a: &Algebra,
    f: &Formula,
    env: &mut Env,
    report_all: bool,
) -> Result<CheckReport, AlgebraError> {
    if let Some(v) = f.free_vars().into_iter().find(|v| env.get(v).is_none()) {
        return Err(AlgebraError::UnboundVariable(v));
    }
    if holds(a, f, env)? {
        return Ok(CheckReport::pass());
    }
    let witness = refute(a, f, env)?;
    let mut report = CheckReport::fail(witness);
    if report_all {
        let mut all = Vec::new();
        refute_all(a, f, env, &mut all)?;
        report.all_witnesses = all;
    }
    Ok(report)
}

/// Explains why `f` is false under `env`: extends the assignment through
/// falsified universals and records the sides of the responsible atom.
/// Precondition: `f` is false under `env`.
fn refute(a: &Algebra, f: &Formula, env: &mut Env) -> Result<Witness, AlgebraError> {
    match f {
        Formula::Eq(l, r) | Formula::Le(l, r) => {
            let lv = eval_term(a, l, env)?;
            let rv = eval_term(a, r, env)?;
            let mut w = Witness::new(env.to_bindings(a));
            w.left = Some(ElemRef::new(lv, a.label(lv)));
            w.right = Some(ElemRef::new(rv, a.label(rv)));
            Ok(w)
        }
        Formula::And(p, q) => {
            if !holds(a, p, env)? {
                refute(a, p, env)
            } else {
                refute(a, q, env)
            }
        }
        Formula::Implies(_, q) => refute(a, q, env),
        Formula::ForAll { var, guard, body } => {
            env.push(var, 0);
            for e in 0..a.size() {
                env.set_last(e);
                if in_range(a, guard, env)? && !holds(a, body, env)? {
                    let w = refute(a, body, env);
                    env.pop();
                    return w;
                }
            }
            env.pop();
            unreachable!("refute called on a true universal")
        }
        Formula::Not(_) | Formula::Or(_, _) | Formula::Exists { .. } => {
            Ok(Witness::new(env.to_bindings(a)))
        }
    }
}

fn refute_all(
    a: &Algebra,
    f: &Formula,
    env: &mut Env,
    out: &mut Vec<Witness>,
) -> Result<(), AlgebraError> {
    match f {
        Formula::ForAll { var, guard, body } => {
            env.push(var, 0);
            for e in 0..a.size() {
                env.set_last(e);
                if in_range(a, guard, env)? && !holds(a, body, env)? {
                    refute_all(a, body, env, out)?;
                }
            }
            env.pop();
            Ok(())
        }
        _ => {
            out.push(refute(a, f, env)?);
            Ok(())
        }
    }
}

/// Evaluates the body of a universally-prefixed formula at a fixed
/// assignment of its prefix variables, returning `(holds, left, right)`
/// where the sides are reported for an atomic body.
pub fn evaluate_at(
    a: &Algebra,
    f: &Formula,
    assignment: &[(String, Elem)],
) -> Result<(bool, Option<(Elem, Elem)>), AlgebraError> {
    let mut env = Env::from_pairs(assignment);
    let mut body = f;
    while let Formula::ForAll { var, guard, body: inner } = body {
        if env.get(var).is_none() {
            break;
        }
        if let Some(g) = guard {
            if !holds(a, g, &mut env)? {
                return Ok((true, None));
            }
        }
        body = inner;
    }
    let value = holds(a, body, &mut env)?;
    let sides = match body {
        Formula::Eq(l, r) | Formula::Le(l, r) => {
            Some((eval_term(a, l, &env)?, eval_term(a, r, &env)?))
        }
        _ => None,
    };
    Ok((value, sides))
}

fn fmt_term(t: &Term, f: &mut fmt::Formatter<'_>, nested: bool) -> fmt::Result {
    match t {
        Term::Var(v) => f.write_str(v),
        Term::Const(c) => f.write_str(c.symbol()),
        Term::Op(op, args) => match args.as_slice() {
            [x] => {
                write!(f, "{}", op.symbol())?;
                if matches!(op, Op::Exists | Op::Forall) {
                    f.write_str(" ")?;
                }
                fmt_term(x, f, true)
            }
            [x, y] => {
                if nested {
                    f.write_str("(")?;
                }
                fmt_term(x, f, true)?;
                write!(f, " {} ", op.symbol())?;
                fmt_term(y, f, true)?;
                if nested {
                    f.write_str(")")?;
                }
                Ok(())
            }
            _ => write!(f, "<bad arity>"),
        },
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_term(self, f, false)
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let paren = |g: &Formula| -> String {
            match g {
                Formula::Eq(..) | Formula::Le(..) | Formula::Not(_) => g.to_string(),
                _ => format!("({g})"),
            }
        };
        match self {
            Formula::Eq(l, r) => write!(f, "{l} = {r}"),
            Formula::Le(l, r) => write!(f, "{l} <= {r}"),
            Formula::Not(p) => write!(f, "not {}", paren(p)),
            Formula::And(p, q) => write!(f, "{} and {}", paren(p), paren(q)),
            Formula::Or(p, q) => write!(f, "{} or {}", paren(p), paren(q)),
            Formula::Implies(p, q) => write!(f, "{} implies {}", paren(p), paren(q)),
            Formula::ForAll { var, guard, body } | Formula::Exists { var, guard, body } => {
                let q = if matches!(self, Formula::ForAll { .. }) {
                    "forall"
                } else {
                    "exists"
                };
                write!(f, "{q} {var}")?;
                if let Some(g) = guard {
                    write!(f, " [{g}]")?;
                }
                write!(f, ". {body}")
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::order::{Lattice, Poset};

    fn chain3() -> Algebra {
        let p = Poset::from_covers(&["0", "m", "1"], &[("0", "m"), ("m", "1")]).unwrap();
        Algebra::heyting(Lattice::from_poset(p).unwrap()).unwrap()
    }

    fn v(s: &str) -> Term {
        Term::var(s)
    }

    #[test]
    fn meet_with_top_is_identity() {
        let a = chain3();
        let t = Term::binary(Op::Meet, v("v"), Term::Const(Const::Top));
        for e in 0..3 {
            assert_eq!(eval_term(&a, &t, &Env::from_pairs(&[("v", e)])).unwrap(), e);
        }
    }

    #[test]
    fn unbound_and_missing() {
        let a = chain3();
        assert_eq!(
            eval_term(&a, &v("q"), &Env::new()),
            Err(AlgebraError::UnboundVariable("q".into()))
        );
        let t = Term::unary(Op::Exists, Term::Const(Const::Bot));
        assert_eq!(
            eval_term(&a, &t, &Env::new()),
            Err(AlgebraError::MissingOperation(Op::Exists))
        );
        let f = Formula::Eq(v("x"), v("x"));
        assert!(check_formula(&a, &f, false).is_err());
    }

    #[test]
    fn witness_is_lexicographically_least() {
        let a = chain3();
        // x <= y fails first at x=m, y=0
        let f = Formula::forall_all(&["x", "y"], Formula::Le(v("x"), v("y")));
        let r = check_formula(&a, &f, true).unwrap();
        let w = r.witness.unwrap();
        assert_eq!(w.labels(), vec![("x", "m"), ("y", "0")]);
        assert_eq!(w.left.unwrap().label, "m");
        assert_eq!(r.all_witnesses.len(), 3);
    }

    #[test]
    fn guards_filter_range() {
        let a = chain3();
        let g = Formula::Le(Term::Const(Const::Top), v("x"));
        let f = Formula::forall("x", Some(g), Formula::Eq(v("x"), Term::Const(Const::Top)));
        assert!(check_formula(&a, &f, false).unwrap().passed());
        let ex = Formula::exists(
            "x",
            Some(Formula::Le(v("x"), Term::Const(Const::Bot))),
            Formula::Eq(v("x"), Term::Const(Const::Top)),
        );
        assert!(check_formula(&a, &ex, false).unwrap().failed());
    }

    #[test]
    fn display_round_trips_shape() {
        let f = Formula::forall_all(
            &["x", "y"],
            Formula::Eq(
                Term::unary(Op::Forall, Term::binary(Op::Join, Term::unary(Op::Exists, v("x")), v("y"))),
                Term::binary(Op::Join, Term::unary(Op::Exists, v("x")), Term::unary(Op::Forall, v("y"))),
            ),
        );
        assert_eq!(
            f.to_string(),
            "forall x. forall y. A (E x \\/ y) = E x \\/ A y"
        );
        assert_eq!(f.universal_prefix(), vec!["x", "y"]);
        assert!(f.is_closed());
    }
}
