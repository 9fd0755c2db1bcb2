//! Finite algebras over a fixed signature catalog.
//!
//! An [`Algebra`] is a lattice plus whichever catalog operations its kind
//! needs. Join, meet, bot and top always come from the lattice. Two
//! operations are materialized when derivable: `hneg a := himp(a, bot)` for
//! Heyting-family algebras and `forall a := neg(exists(neg a))` for
//! Nelson-family algebras.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::order::{Elem, Lattice};

/// Operation symbols of the catalog.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Op {
    Join,
    Meet,
    /// Heyting implication `⇒`.
    Himp,
    /// Nelson weak implication `→`.
    Nimp,
    /// De Morgan negation `∼`.
    Neg,
    /// Heyting negation `¬`.
    Hneg,
    Exists,
    Forall,
}

impl Op {
    pub const ALL: [Op; 8] = [
        Op::Join,
        Op::Meet,
        Op::Himp,
        Op::Nimp,
        Op::Neg,
        Op::Hneg,
        Op::Exists,
        Op::Forall,
    ];

    pub fn arity(self) -> usize {
        match self {
            Op::Join | Op::Meet | Op::Himp | Op::Nimp => 2,
            Op::Neg | Op::Hneg | Op::Exists | Op::Forall => 1,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Op::Join => "join",
            Op::Meet => "meet",
            Op::Himp => "himp",
            Op::Nimp => "nimp",
            Op::Neg => "neg",
            Op::Hneg => "hneg",
            Op::Exists => "exists",
            Op::Forall => "forall",
        }
    }

    /// Surface symbol in the formula syntax.
    pub fn symbol(self) -> &'static str {
        match self {
            Op::Join => "\\/",
            Op::Meet => "/\\",
            Op::Himp => "=>",
            Op::Nimp => "->",
            Op::Neg => "~",
            Op::Hneg => "!",
            Op::Exists => "E",
            Op::Forall => "A",
        }
    }
}

impl fmt::Display for Op {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Op {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Op::ALL
            .into_iter()
            .find(|op| op.name() == s)
            .ok_or_else(|| format!("unknown operation `{s}`"))
    }
}

/// Distinguished constants.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Const {
    Bot,
    Top,
    Center,
}

impl Const {
    pub const ALL: [Const; 3] = [Const::Bot, Const::Top, Const::Center];

    pub fn name(self) -> &'static str {
        match self {
            Const::Bot => "bot",
            Const::Top => "top",
            Const::Center => "center",
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Const::Bot => "0",
            Const::Top => "1",
            Const::Center => "c",
        }
    }
}

impl fmt::Display for Const {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Const {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Const::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| format!("unknown constant `{s}`"))
    }
}

/// Which implication (if any) the algebra carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    Lattice,
    Heyting,
    Nelson,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("table for `{op}` has {found} entries, expected {expected}")]
    SizeMismatch {
        op: Op,
        expected: usize,
        found: usize,
    },
    #[error("table for `{op}` has out-of-range entry {value} at position {position}")]
    OutOfRange {
        op: Op,
        position: usize,
        value: Elem,
    },
    #[error("constant `{0}` is not in the carrier")]
    ConstOutOfRange(Const),
    #[error("constant `{0}` disagrees with the lattice bound")]
    BoundMismatch(Const),
    #[error("supplied `{0}` table disagrees with its derived value")]
    DerivedMismatch(Op),
    #[error("`{0}` table does not match the lattice order")]
    LatticeMismatch(Op),
    #[error("operation `{0}` is not part of this algebra")]
    MissingOperation(Op),
    #[error("constant `{0}` is not part of this algebra")]
    MissingConstant(Const),
    #[error("unbound variable `{0}`")]
    UnboundVariable(String),
    #[error("`{op}` expects {expected} arguments, got {found}")]
    Arity {
        op: Op,
        expected: usize,
        found: usize,
    },
    #[error("subset is not closed under `{op}`: result `{result}` escapes")]
    NotClosed { op: String, result: String },
}

pub type Result<T, E = AlgebraError> = std::result::Result<T, E>;

/// A finite algebra: a lattice plus operation tables and constants.
///
/// Binary tables are row-major `n × n`; unary tables have length `n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Algebra {
    lattice: Lattice,
    tables: BTreeMap<Op, Vec<Elem>>,
    consts: BTreeMap<Const, Elem>,
}

impl Algebra {
    /// Assembles an algebra, validating every table and materializing the
    /// derived operations. Supplied join/meet/bot/top must agree with the
    /// lattice; a supplied derivable table must agree with its derivation.
    pub fn new(
        lattice: Lattice,
        ops: BTreeMap<Op, Vec<Elem>>,
        consts: BTreeMap<Const, Elem>,
    ) -> Result<Self> {
        let n = lattice.size();
        for (&op, table) in &ops {
            let expected = n.pow(op.arity() as u32);
            if table.len() != expected {
                return Err(AlgebraError::SizeMismatch {
                    op,
                    expected,
                    found: table.len(),
                });
            }
            if let Some((position, &value)) = table.iter().enumerate().find(|(_, &v)| v >= n) {
                return Err(AlgebraError::OutOfRange {
                    op,
                    position,
                    value,
                });
            }
        }
        for (&c, &e) in &consts {
            if e >= n {
                return Err(AlgebraError::ConstOutOfRange(c));
            }
        }
        if ops.get(&Op::Join).is_some_and(|t| t != lattice.join_table()) {
            return Err(AlgebraError::LatticeMismatch(Op::Join));
        }
        if ops.get(&Op::Meet).is_some_and(|t| t != lattice.meet_table()) {
            return Err(AlgebraError::LatticeMismatch(Op::Meet));
        }
        if consts.get(&Const::Bot).is_some_and(|&e| e != lattice.bot()) {
            return Err(AlgebraError::BoundMismatch(Const::Bot));
        }
        if consts.get(&Const::Top).is_some_and(|&e| e != lattice.top()) {
            return Err(AlgebraError::BoundMismatch(Const::Top));
        }

        let mut tables = ops;
        tables.insert(Op::Join, lattice.join_table().to_vec());
        tables.insert(Op::Meet, lattice.meet_table().to_vec());
        let mut consts = consts;
        consts.insert(Const::Bot, lattice.bot());
        consts.insert(Const::Top, lattice.top());

        if let Some(himp) = tables.get(&Op::Himp) {
            let bot = lattice.bot();
            let derived: Vec<Elem> = (0..n).map(|a| himp[a * n + bot]).collect();
            match tables.get(&Op::Hneg) {
                Some(given) if *given != derived => {
                    return Err(AlgebraError::DerivedMismatch(Op::Hneg))
                }
                _ => {
                    tables.insert(Op::Hneg, derived);
                }
            }
        }
        if let (Some(neg), Some(exists)) = (tables.get(&Op::Neg), tables.get(&Op::Exists)) {
            if tables.contains_key(&Op::Nimp) {
                let derived: Vec<Elem> = (0..n).map(|a| neg[exists[neg[a]]]).collect();
                match tables.get(&Op::Forall) {
                    Some(given) if *given != derived => {
                        return Err(AlgebraError::DerivedMismatch(Op::Forall))
                    }
                    _ => {
                        tables.insert(Op::Forall, derived);
                    }
                }
            }
        }
        Ok(Algebra {
            lattice,
            tables,
            consts,
        })
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn size(&self) -> usize {
        self.lattice.size()
    }

    pub fn names(&self) -> &[String] {
        self.lattice.names()
    }

    pub fn label(&self, e: Elem) -> &str {
        self.lattice.name(e)
    }

    pub fn index_of(&self, label: &str) -> Option<Elem> {
        self.lattice.poset().index_of(label)
    }

    pub fn leq(&self, a: Elem, b: Elem) -> bool {
        self.lattice.leq(a, b)
    }

    pub fn has_op(&self, op: Op) -> bool {
        self.tables.contains_key(&op)
    }

    pub fn has_const(&self, c: Const) -> bool {
        self.consts.contains_key(&c)
    }

    pub fn table(&self, op: Op) -> Option<&[Elem]> {
        self.tables.get(&op).map(Vec::as_slice)
    }

    /// All operation tables, in catalog order.
    pub fn tables(&self) -> impl Iterator<Item = (Op, &[Elem])> {
        self.tables.iter().map(|(&op, t)| (op, t.as_slice()))
    }

    pub fn constant(&self, c: Const) -> Option<Elem> {
        self.consts.get(&c).copied()
    }

    pub fn constants(&self) -> impl Iterator<Item = (Const, Elem)> + '_ {
        self.consts.iter().map(|(&c, &e)| (c, e))
    }

    pub fn bot(&self) -> Elem {
        self.lattice.bot()
    }

    pub fn top(&self) -> Elem {
        self.lattice.top()
    }

    pub fn center(&self) -> Option<Elem> {
        self.constant(Const::Center)
    }

    /// Applies a unary operation. Panics if the operation is absent; use
    /// [`Algebra::has_op`] or [`Algebra::try_apply`] first.
    #[inline]
    pub fn apply1(&self, op: Op, a: Elem) -> Elem {
        self.tables[&op][a]
    }

    /// Applies a binary operation. Panics if the operation is absent.
    #[inline]
    pub fn apply2(&self, op: Op, a: Elem, b: Elem) -> Elem {
        self.tables[&op][a * self.size() + b]
    }

    pub fn try_apply(&self, op: Op, args: &[Elem]) -> Result<Elem> {
        let table = self
            .tables
            .get(&op)
            .ok_or(AlgebraError::MissingOperation(op))?;
        match (op.arity(), args) {
            (1, [a]) => Ok(table[*a]),
            (2, [a, b]) => Ok(table[a * self.size() + b]),
            (expected, _) => Err(AlgebraError::Arity {
                op,
                expected,
                found: args.len(),
            }),
        }
    }

    pub fn family(&self) -> Family {
        if self.has_op(Op::Nimp) || self.has_op(Op::Neg) {
            Family::Nelson
        } else if self.has_op(Op::Himp) {
            Family::Heyting
        } else {
            Family::Lattice
        }
    }

    pub fn is_monadic(&self) -> bool {
        self.has_op(Op::Exists) && self.has_op(Op::Forall)
    }

    /// Copy of this algebra with the quantifier tables replaced. For
    /// Nelson-family algebras `forall` is re-derived and must be `None`.
    pub fn with_quantifiers(&self, exists: Vec<Elem>, forall: Option<Vec<Elem>>) -> Result<Self> {
        let mut ops = self.user_tables();
        ops.remove(&Op::Forall);
        ops.insert(Op::Exists, exists);
        if let Some(forall) = forall {
            ops.insert(Op::Forall, forall);
        }
        Algebra::new(self.lattice.clone(), ops, self.user_consts())
    }

    /// Copy of this algebra without `exists`/`forall`.
    pub fn without_quantifiers(&self) -> Self {
        let mut ops = self.user_tables();
        ops.remove(&Op::Exists);
        ops.remove(&Op::Forall);
        Algebra::new(self.lattice.clone(), ops, self.user_consts())
            .expect("dropping quantifiers keeps an algebra valid")
    }

    /// Tables other than the lattice-derived and materialized ones.
    pub fn user_tables(&self) -> BTreeMap<Op, Vec<Elem>> {
        let nelson = self.has_op(Op::Nimp) && self.has_op(Op::Neg) && self.has_op(Op::Exists);
        self.tables
            .iter()
            .filter(|(&op, _)| match op {
                Op::Join | Op::Meet => false,
                Op::Hneg => !self.has_op(Op::Himp),
                Op::Forall => !nelson,
                _ => true,
            })
            .map(|(&op, t)| (op, t.clone()))
            .collect()
    }

    /// Constants other than the lattice bounds.
    pub fn user_consts(&self) -> BTreeMap<Const, Elem> {
        self.consts
            .iter()
            .filter(|(&c, _)| c == Const::Center)
            .map(|(&c, &e)| (c, e))
            .collect()
    }

    /// The subalgebra on `carrier` (listed in increasing index order is
    /// customary but not required), restricting every table. Fails if the
    /// subset is not closed under some operation or constant.
    pub fn subalgebra(&self, carrier: &[Elem]) -> Result<Algebra> {
        let pos = |e: Elem| carrier.iter().position(|&x| x == e);
        let escape = |op: &str, e: Elem| AlgebraError::NotClosed {
            op: op.to_string(),
            result: self.label(e).to_string(),
        };
        let poset = self.lattice.poset().restrict(carrier);
        let lattice = Lattice::from_poset(poset).map_err(|_| AlgebraError::NotClosed {
            op: "lattice".into(),
            result: "order".into(),
        })?;
        let m = carrier.len();
        let mut ops = BTreeMap::new();
        for (op, _) in self.tables() {
            let mut sub = Vec::with_capacity(m.pow(op.arity() as u32));
            if op.arity() == 1 {
                for &a in carrier {
                    let r = self.apply1(op, a);
                    sub.push(pos(r).ok_or_else(|| escape(op.name(), r))?);
                }
            } else {
                for &a in carrier {
                    for &b in carrier {
                        let r = self.apply2(op, a, b);
                        sub.push(pos(r).ok_or_else(|| escape(op.name(), r))?);
                    }
                }
            }
            ops.insert(op, sub);
        }
        let mut consts = BTreeMap::new();
        for (c, e) in self.constants() {
            consts.insert(c, pos(e).ok_or_else(|| escape(c.name(), e))?);
        }
        // join/meet of the sublattice must be the restricted ones
        if ops[&Op::Join] != lattice.join_table() || ops[&Op::Meet] != lattice.meet_table() {
            return Err(AlgebraError::NotClosed {
                op: "lattice".into(),
                result: "order".into(),
            });
        }
        if self.has_op(Op::Hneg) && self.has_op(Op::Himp) {
            ops.remove(&Op::Hneg);
        }
        if self.has_op(Op::Nimp) && self.has_op(Op::Neg) && self.has_op(Op::Exists) {
            ops.remove(&Op::Forall);
        }
        Algebra::new(lattice, ops, consts)
    }

    /// Heyting algebra on `lattice` with `himp` derived from the order.
    pub fn heyting(lattice: Lattice) -> std::result::Result<Self, crate::order::OrderError> {
        let himp = lattice.heyting_implication()?;
        let mut ops = BTreeMap::new();
        ops.insert(Op::Himp, himp);
        Ok(Algebra::new(lattice, ops, BTreeMap::new()).expect("derived tables are well-formed"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::order::Poset;

    fn chain(n: usize) -> Lattice {
        let names: Vec<String> = (0..n).map(|i| i.to_string()).collect();
        let covers: Vec<(String, String)> = (1..n)
            .map(|i| ((i - 1).to_string(), i.to_string()))
            .collect();
        Lattice::from_poset(Poset::from_covers(&names, &covers).unwrap()).unwrap()
    }

    #[test]
    fn hneg_is_materialized() {
        let a = Algebra::heyting(chain(3)).unwrap();
        assert_eq!(a.table(Op::Hneg).unwrap(), &[2, 0, 0]);
        assert_eq!(a.family(), Family::Heyting);
    }

    #[test]
    fn size_mismatch() {
        let mut ops = BTreeMap::new();
        ops.insert(Op::Himp, vec![1, 1, 0, 1]);
        assert_eq!(
            Algebra::new(chain(3), ops, BTreeMap::new()),
            Err(AlgebraError::SizeMismatch {
                op: Op::Himp,
                expected: 9,
                found: 4
            })
        );
    }

    #[test]
    fn out_of_range_and_constants() {
        let mut ops = BTreeMap::new();
        ops.insert(Op::Exists, vec![0, 7]);
        assert!(matches!(
            Algebra::new(chain(2), ops, BTreeMap::new()),
            Err(AlgebraError::OutOfRange { value: 7, .. })
        ));
        let mut consts = BTreeMap::new();
        consts.insert(Const::Center, 5);
        assert_eq!(
            Algebra::new(chain(2), BTreeMap::new(), consts),
            Err(AlgebraError::ConstOutOfRange(Const::Center))
        );
        let mut consts = BTreeMap::new();
        consts.insert(Const::Bot, 1);
        assert_eq!(
            Algebra::new(chain(2), BTreeMap::new(), consts),
            Err(AlgebraError::BoundMismatch(Const::Bot))
        );
    }

    #[test]
    fn forall_derived_for_nelson_family() {
        // 3-chain Kleene algebra 0 < c < 1 with identity exists
        let mut ops = BTreeMap::new();
        ops.insert(Op::Neg, vec![2, 1, 0]);
        ops.insert(Op::Nimp, vec![2, 2, 2, 1, 2, 2, 0, 1, 2]);
        ops.insert(Op::Exists, vec![0, 1, 2]);
        let mut consts = BTreeMap::new();
        consts.insert(Const::Center, 1);
        let a = Algebra::new(chain(3), ops.clone(), consts.clone()).unwrap();
        assert_eq!(a.table(Op::Forall).unwrap(), &[0, 1, 2]);
        assert!(!a.user_tables().contains_key(&Op::Forall));

        ops.insert(Op::Forall, vec![0, 0, 2]);
        assert_eq!(
            Algebra::new(chain(3), ops, consts),
            Err(AlgebraError::DerivedMismatch(Op::Forall))
        );
    }

    #[test]
    fn subalgebra_closure() {
        let a = Algebra::heyting(chain(3)).unwrap();
        let sub = a.subalgebra(&[0, 2]).unwrap();
        assert_eq!(sub.size(), 2);
        assert_eq!(sub.table(Op::Himp).unwrap(), &[1, 1, 0, 1]);
        // {1, 2} misses bot
        assert!(matches!(
            a.subalgebra(&[1, 2]),
            Err(AlgebraError::NotClosed { .. })
        ));
    }

    #[test]
    fn op_names_round_trip() {
        for op in Op::ALL {
            assert_eq!(op.name().parse::<Op>().unwrap(), op);
        }
        for c in Const::ALL {
            assert_eq!(c.name().parse::<Const>().unwrap(), c);
        }
    }
}
