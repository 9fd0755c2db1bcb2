//! The `.alg` specification language.
//!
//! ```text
//! # the five-element example
//! algebra remark {
//!   elements: 0 x y z 1
//!   covers: 0 < x < y < 1, x < z < 1
//!   op exists: 0->0, x->z, y->1, z->z, 1->1
//!   op forall: 0->0, x->0, y->0, z->z, 1->1
//!   kind: monadic-heyting
//! }
//! ```
//!
//! Sections may be separated by `;` and appear in any order. Binary tables
//! are written `(a,b)->c`. Labels that are not plain words go in double
//! quotes.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::{self, Write as _};
use std::str::FromStr;

use thiserror::Error;

use crate::algebra::{Algebra, AlgebraError, Const, Op};
use crate::order::{Elem, Lattice, OrderError, Poset};
use crate::report::CheckReport;
use crate::varieties::{check_suite, CheckOptions, SuiteError, SuiteId};

use super::lexer::{is_word_char, tokenize, Loc, Tok, Token};
use super::ParseError;

/// A value tagged with where it was written. Equality ignores the location.
#[derive(Debug, Clone)]
pub struct Spanned<T> {
    pub value: T,
    pub loc: Loc,
}

impl<T> Spanned<T> {
    pub fn new(value: T, loc: Loc) -> Self {
        Spanned { value, loc }
    }

    /// A value with no meaningful source position.
    pub fn synthetic(value: T) -> Self {
        Spanned {
            value,
            loc: Loc::default(),
        }
    }
}

impl<T: PartialEq> PartialEq for Spanned<T> {
    fn eq(&self, other: &Self) -> bool {
        self.value == other.value
    }
}

impl<T: Eq> Eq for Spanned<T> {}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Kind {
    Raw,
    Heyting,
    Godel,
    MonadicHeyting,
    MonadicGodel,
    Nelson,
    MonadicNelson,
}

impl Kind {
    pub const ALL: [Kind; 7] = [
        Kind::Raw,
        Kind::Heyting,
        Kind::Godel,
        Kind::MonadicHeyting,
        Kind::MonadicGodel,
        Kind::Nelson,
        Kind::MonadicNelson,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Kind::Raw => "raw",
            Kind::Heyting => "heyting",
            Kind::Godel => "godel",
            Kind::MonadicHeyting => "monadic-heyting",
            Kind::MonadicGodel => "monadic-godel",
            Kind::Nelson => "nelson",
            Kind::MonadicNelson => "monadic-nelson",
        }
    }

    /// The suite run by [`elaborate`], if any.
    pub fn suite(self) -> Option<SuiteId> {
        match self {
            Kind::Raw => None,
            Kind::Heyting => Some(SuiteId::Heyting),
            Kind::Godel => Some(SuiteId::Godel),
            Kind::MonadicHeyting => Some(SuiteId::MonadicHeyting),
            Kind::MonadicGodel => Some(SuiteId::MonadicGodel),
            Kind::Nelson => Some(SuiteId::Nelson),
            Kind::MonadicNelson => Some(SuiteId::MonadicNelson),
        }
    }

    fn is_nelson(self) -> bool {
        matches!(self, Kind::Nelson | Kind::MonadicNelson)
    }

    fn is_heyting(self) -> bool {
        matches!(
            self,
            Kind::Heyting | Kind::Godel | Kind::MonadicHeyting | Kind::MonadicGodel
        )
    }

    fn is_monadic(self) -> bool {
        matches!(self, Kind::MonadicHeyting | Kind::MonadicGodel | Kind::MonadicNelson)
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Kind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Kind::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| format!("unknown kind `{s}`"))
    }
}

/// One row of an operation table: the argument labels and the result.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableEntry {
    pub args: Vec<Spanned<String>>,
    pub value: Spanned<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OpSpec {
    pub op: Spanned<Op>,
    pub entries: Vec<TableEntry>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlgebraSpec {
    pub name: Spanned<String>,
    pub elements: Vec<Spanned<String>>,
    pub covers: Vec<(Spanned<String>, Spanned<String>)>,
    pub ops: Vec<OpSpec>,
    pub consts: Vec<(Spanned<Const>, Spanned<String>)>,
    pub kind: Spanned<Kind>,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpecError {
    #[error("{0}")]
    Syntax(#[from] ParseError),
    #[error("{loc}: {message}")]
    Invalid { loc: Loc, message: String },
    #[error("{loc}: {source}")]
    Order { loc: Loc, source: OrderError },
    #[error("{loc}: {source}")]
    Algebra { loc: Loc, source: AlgebraError },
    #[error("{loc}: {source}")]
    Suite { loc: Loc, source: SuiteError },
    #[error("{loc}: declared kind `{kind}` fails its suite\n{report}")]
    KindFailure {
        loc: Loc,
        kind: Kind,
        report: Box<CheckReport>,
    },
}

impl SpecError {
    pub fn loc(&self) -> Loc {
        match self {
            SpecError::Syntax(e) => e.loc,
            SpecError::Invalid { loc, .. }
            | SpecError::Order { loc, .. }
            | SpecError::Algebra { loc, .. }
            | SpecError::Suite { loc, .. }
            | SpecError::KindFailure { loc, .. } => *loc,
        }
    }

    fn at(loc: Loc, message: impl Into<String>) -> Self {
        SpecError::Invalid {
            loc,
            message: message.into(),
        }
    }
}

const SECTIONS: &[&str] = &["elements", "covers", "op", "const", "kind"];

/// Parses one `algebra NAME { ... }` block and checks that every label
/// resolves, every table is complete, and the covers form a partial order.
pub fn parse_spec(src: &str) -> Result<AlgebraSpec, SpecError> {
    let tokens = tokenize(src).map_err(|(loc, message)| ParseError { loc, message })?;
    let mut p = Parser { tokens, pos: 0 };
    let spec = p.spec()?;
    validate(&spec)?;
    Ok(spec)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.tokens[self.pos].tok
    }

    fn loc(&self) -> Loc {
        self.tokens[self.pos].loc
    }

    fn next(&mut self) -> Token {
        let t = self.tokens[self.pos].clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, message: impl Into<String>) -> ParseError {
        ParseError {
            loc: self.loc(),
            message: message.into(),
        }
    }

    fn expect(&mut self, tok: Tok) -> Result<(), ParseError> {
        if *self.peek() == tok {
            self.next();
            Ok(())
        } else {
            Err(self.error(format!("expected {tok}, found {}", self.peek())))
        }
    }

    fn keyword(&mut self, w: &str) -> Result<Loc, ParseError> {
        match self.peek() {
            Tok::Word(x) if x == w => Ok(self.next().loc),
            other => Err(self.error(format!("expected `{w}`, found {other}"))),
        }
    }

    fn word(&mut self, what: &str) -> Result<Spanned<String>, ParseError> {
        match self.peek().clone() {
            Tok::Word(w) => Ok(Spanned::new(w, self.next().loc)),
            other => Err(self.error(format!("expected {what}, found {other}"))),
        }
    }

    fn at_section(&self) -> bool {
        matches!(self.peek(), Tok::Word(w) if SECTIONS.contains(&w.as_str()))
    }

    fn at_section_end(&self) -> bool {
        matches!(self.peek(), Tok::Semi | Tok::RBrace | Tok::Eof) || self.at_section()
    }

    fn label(&mut self) -> Result<Spanned<String>, ParseError> {
        match self.peek().clone() {
            Tok::Word(w) if SECTIONS.contains(&w.as_str()) => Err(self.error(format!(
                "`{w}` is a section keyword; quote it to use it as a label"
            ))),
            Tok::Word(w) | Tok::Quoted(w) => Ok(Spanned::new(w, self.next().loc)),
            other => Err(self.error(format!("expected an element label, found {other}"))),
        }
    }

    fn spec(&mut self) -> Result<AlgebraSpec, ParseError> {
        self.keyword("algebra")?;
        let name = match self.peek().clone() {
            Tok::Word(w) | Tok::Quoted(w) => Spanned::new(w, self.next().loc),
            other => return Err(self.error(format!("expected an algebra name, found {other}"))),
        };
        self.expect(Tok::LBrace)?;
        let mut elements = None;
        let mut covers = None;
        let mut ops: Vec<OpSpec> = Vec::new();
        let mut consts: Vec<(Spanned<Const>, Spanned<String>)> = Vec::new();
        let mut kind = None;
        loop {
            while *self.peek() == Tok::Semi {
                self.next();
            }
            if *self.peek() == Tok::RBrace {
                self.next();
                break;
            }
            let section = self.word("a section keyword")?;
            match section.value.as_str() {
                "elements" => {
                    self.expect(Tok::Colon)?;
                    if elements.is_some() {
                        return Err(dup(&section, "elements"));
                    }
                    let mut list = Vec::new();
                    while !self.at_section_end() {
                        list.push(self.label()?);
                    }
                    elements = Some(list);
                }
                "covers" => {
                    self.expect(Tok::Colon)?;
                    if covers.is_some() {
                        return Err(dup(&section, "covers"));
                    }
                    let mut list = Vec::new();
                    while !self.at_section_end() {
                        let mut lo = self.label()?;
                        if *self.peek() != Tok::Lt {
                            return Err(self.error(format!("expected `<` after `{}`", lo.value)));
                        }
                        while *self.peek() == Tok::Lt {
                            self.next();
                            let hi = self.label()?;
                            list.push((lo, hi.clone()));
                            lo = hi;
                        }
                        if *self.peek() == Tok::Comma {
                            self.next();
                        }
                    }
                    covers = Some(list);
                }
                "op" => {
                    let name = self.word("an operation name")?;
                    let op = Op::from_str(&name.value)
                        .map_err(|_| ParseError {
                            loc: name.loc,
                            message: format!("unknown operation `{}`", name.value),
                        })?;
                    if matches!(op, Op::Join | Op::Meet) {
                        return Err(ParseError {
                            loc: name.loc,
                            message: format!("`{op}` is derived from the order and cannot be given"),
                        });
                    }
                    if ops.iter().any(|o| o.op.value == op) {
                        return Err(ParseError {
                            loc: name.loc,
                            message: format!("duplicate operation `{op}`"),
                        });
                    }
                    self.expect(Tok::Colon)?;
                    let mut entries = Vec::new();
                    while !self.at_section_end() {
                        entries.push(self.entry(op)?);
                        if *self.peek() == Tok::Comma {
                            self.next();
                        }
                    }
                    ops.push(OpSpec {
                        op: Spanned::new(op, name.loc),
                        entries,
                    });
                }
                "const" => {
                    let name = self.word("a constant name")?;
                    let c = Const::from_str(&name.value).map_err(|_| ParseError {
                        loc: name.loc,
                        message: format!("unknown constant `{}`", name.value),
                    })?;
                    if consts.iter().any(|(k, _)| k.value == c) {
                        return Err(ParseError {
                            loc: name.loc,
                            message: format!("duplicate constant `{c}`"),
                        });
                    }
                    self.expect(Tok::Colon)?;
                    let value = self.label()?;
                    consts.push((Spanned::new(c, name.loc), value));
                }
                "kind" => {
                    self.expect(Tok::Colon)?;
                    if kind.is_some() {
                        return Err(dup(&section, "kind"));
                    }
                    let k = self.word("a kind")?;
                    let value = Kind::from_str(&k.value).map_err(|message| ParseError {
                        loc: k.loc,
                        message,
                    })?;
                    kind = Some(Spanned::new(value, k.loc));
                }
                other => {
                    return Err(ParseError {
                        loc: section.loc,
                        message: format!("unknown section `{other}`"),
                    })
                }
            }
        }
        self.expect(Tok::Eof)?;
        let elements = elements.ok_or_else(|| ParseError {
            loc: name.loc,
            message: "missing `elements` section".into(),
        })?;
        Ok(AlgebraSpec {
            name,
            elements,
            covers: covers.unwrap_or_default(),
            ops,
            consts,
            kind: kind.unwrap_or_else(|| Spanned::synthetic(Kind::Raw)),
        })
    }

    fn entry(&mut self, op: Op) -> Result<TableEntry, ParseError> {
        let start = self.loc();
        let args = if *self.peek() == Tok::LParen {
            self.next();
            let mut args = vec![self.label()?];
            while *self.peek() == Tok::Comma {
                self.next();
                args.push(self.label()?);
            }
            self.expect(Tok::RParen)?;
            args
        } else {
            vec![self.label()?]
        };
        if args.len() != op.arity() {
            return Err(ParseError {
                loc: start,
                message: format!(
                    "`{op}` takes {} argument(s), entry has {}",
                    op.arity(),
                    args.len()
                ),
            });
        }
        self.expect(Tok::Arrow)?;
        let value = self.label()?;
        Ok(TableEntry { args, value })
    }
}

fn dup(at: &Spanned<String>, what: &str) -> ParseError {
    ParseError {
        loc: at.loc,
        message: format!("duplicate `{what}` section"),
    }
}

fn label_index(spec: &AlgebraSpec) -> BTreeMap<&str, Elem> {
    spec.elements
        .iter()
        .enumerate()
        .map(|(i, e)| (e.value.as_str(), i))
        .collect()
}

fn resolve(index: &BTreeMap<&str, Elem>, l: &Spanned<String>) -> Result<Elem, SpecError> {
    index
        .get(l.value.as_str())
        .copied()
        .ok_or_else(|| SpecError::at(l.loc, format!("unknown element label `{}`", l.value)))
}

fn validate(spec: &AlgebraSpec) -> Result<(), SpecError> {
    if spec.elements.is_empty() {
        return Err(SpecError::at(spec.name.loc, "empty carrier"));
    }
    let mut seen = BTreeSet::new();
    for e in &spec.elements {
        if !seen.insert(e.value.as_str()) {
            return Err(SpecError::at(e.loc, format!("duplicate element label `{}`", e.value)));
        }
    }
    let index = label_index(spec);
    for (lo, hi) in &spec.covers {
        resolve(&index, lo)?;
        resolve(&index, hi)?;
        if lo.value == hi.value {
            return Err(SpecError::Order {
                loc: lo.loc,
                source: OrderError::Cycle(lo.value.clone(), hi.value.clone()),
            });
        }
    }
    poset(spec)?;
    let n = spec.elements.len();
    for o in &spec.ops {
        let mut filled = vec![false; n.pow(o.op.value.arity() as u32)];
        for entry in &o.entries {
            let mut pos = 0;
            for a in &entry.args {
                pos = pos * n + resolve(&index, a)?;
            }
            resolve(&index, &entry.value)?;
            if std::mem::replace(&mut filled[pos], true) {
                return Err(SpecError::at(
                    entry.args[0].loc,
                    format!("duplicate entry in table `{}`", o.op.value),
                ));
            }
        }
        if let Some(missing) = filled.iter().position(|f| !f) {
            let args: Vec<&str> = if o.op.value.arity() == 1 {
                vec![spec.elements[missing].value.as_str()]
            } else {
                vec![
                    spec.elements[missing / n].value.as_str(),
                    spec.elements[missing % n].value.as_str(),
                ]
            };
            return Err(SpecError::at(
                o.op.loc,
                format!("table `{}` has no entry for ({})", o.op.value, args.join(",")),
            ));
        }
    }
    for (_, v) in &spec.consts {
        resolve(&index, v)?;
    }
    Ok(())
}

fn poset(spec: &AlgebraSpec) -> Result<Poset, SpecError> {
    let names: Vec<&str> = spec.elements.iter().map(|e| e.value.as_str()).collect();
    let covers: Vec<(&str, &str)> = spec
        .covers
        .iter()
        .map(|(a, b)| (a.value.as_str(), b.value.as_str()))
        .collect();
    Poset::from_covers(&names, &covers).map_err(|source| {
        // point at the first cover involved in the offending pair
        let loc = match &source {
            OrderError::Cycle(a, b) => spec
                .covers
                .iter()
                .find(|(lo, hi)| {
                    [&lo.value, &hi.value].contains(&a) || [&lo.value, &hi.value].contains(&b)
                })
                .map(|(lo, _)| lo.loc),
            _ => None,
        }
        .unwrap_or(spec.name.loc);
        SpecError::Order { loc, source }
    })
}

/// A spec turned into an algebra, with the declared kind's suite report.
#[derive(Debug, Clone)]
pub struct Elaborated {
    pub name: String,
    pub kind: Kind,
    pub algebra: Algebra,
    /// `None` for kind `raw`, which runs no suite.
    pub report: Option<CheckReport>,
}

/// Builds the algebra: derives the lattice, fills in derivable operations,
/// and runs the declared kind's suite. A suite failure is an error unless
/// `lenient`, in which case the failing report is returned.
pub fn elaborate(spec: &AlgebraSpec, lenient: bool) -> Result<Elaborated, SpecError> {
    validate(spec)?;
    let kind = spec.kind.value;
    let kloc = spec.kind.loc;
    let lattice = Lattice::from_poset(poset(spec)?).map_err(|source| SpecError::Order {
        loc: spec.name.loc,
        source,
    })?;
    let n = lattice.size();
    let index = label_index(spec);
    let mut ops = BTreeMap::new();
    for o in &spec.ops {
        let mut table = vec![0; n.pow(o.op.value.arity() as u32)];
        for entry in &o.entries {
            let mut pos = 0;
            for a in &entry.args {
                pos = pos * n + index[a.value.as_str()];
            }
            table[pos] = index[entry.value.value.as_str()];
        }
        ops.insert(o.op.value, table);
    }
    let mut consts = BTreeMap::new();
    for (c, v) in &spec.consts {
        consts.insert(c.value, index[v.value.as_str()]);
    }
    let op_loc = |op: Op| {
        spec.ops
            .iter()
            .find(|o| o.op.value == op)
            .map_or(kloc, |o| o.op.loc)
    };

    if !ops.contains_key(&Op::Himp) {
        if kind.is_heyting() {
            if lattice.check_distributive().failed() {
                return Err(SpecError::at(
                    spec.name.loc,
                    format!("kind `{kind}` needs a distributive lattice"),
                ));
            }
            let himp = lattice.heyting_implication().map_err(|source| SpecError::Order {
                loc: spec.name.loc,
                source,
            })?;
            ops.insert(Op::Himp, himp);
        } else if kind == Kind::Raw && lattice.check_distributive().passed() {
            if let Ok(himp) = lattice.heyting_implication() {
                ops.insert(Op::Himp, himp);
            }
        }
    }
    if kind.is_monadic() && !ops.contains_key(&Op::Exists) {
        return Err(SpecError::at(kloc, format!("kind `{kind}` needs `op exists`")));
    }
    if kind.is_heyting() && kind.is_monadic() && !ops.contains_key(&Op::Forall) {
        return Err(SpecError::at(kloc, format!("kind `{kind}` needs `op forall`")));
    }
    if kind.is_nelson() {
        for op in [Op::Neg, Op::Nimp] {
            if !ops.contains_key(&op) {
                return Err(SpecError::at(kloc, format!("kind `{kind}` needs `op {op}`")));
            }
        }
        if ops.contains_key(&Op::Forall) {
            return Err(SpecError::at(
                op_loc(Op::Forall),
                "`forall` is derived from `exists` and `neg` in Nelson kinds and cannot be given",
            ));
        }
        if !consts.contains_key(&Const::Center) {
            let neg = &ops[&Op::Neg];
            let fixed: Vec<Elem> = (0..n).filter(|&x| neg[x] == x).collect();
            match fixed.as_slice() {
                [c] => {
                    consts.insert(Const::Center, *c);
                }
                [] if kind == Kind::Nelson => {}
                _ => {
                    return Err(SpecError::at(
                        kloc,
                        format!(
                            "kind `{kind}` needs a center: `neg` has {} fixpoints; give `const center`",
                            fixed.len()
                        ),
                    ))
                }
            }
        }
    }

    let algebra = Algebra::new(lattice, ops, consts).map_err(|source| {
        let loc = match &source {
            AlgebraError::DerivedMismatch(op) | AlgebraError::LatticeMismatch(op) => op_loc(*op),
            AlgebraError::BoundMismatch(c) | AlgebraError::ConstOutOfRange(c) => spec
                .consts
                .iter()
                .find(|(k, _)| k.value == *c)
                .map_or(kloc, |(k, _)| k.loc),
            _ => kloc,
        };
        SpecError::Algebra { loc, source }
    })?;

    let report = match kind.suite() {
        None => None,
        Some(id) => {
            let r = check_suite(&algebra, id, CheckOptions::default())
                .map_err(|source| SpecError::Suite { loc: kloc, source })?;
            if r.failed() && !lenient {
                return Err(SpecError::KindFailure {
                    loc: kloc,
                    kind,
                    report: Box::new(r),
                });
            }
            Some(r)
        }
    };
    Ok(Elaborated {
        name: spec.name.value.clone(),
        kind,
        algebra,
        report,
    })
}

/// Describes `a` as a spec, leaving out every table that elaboration
/// re-derives for `kind`.
pub fn spec_from_algebra(name: &str, kind: Kind, a: &Algebra) -> AlgebraSpec {
    let label = |e: Elem| Spanned::synthetic(a.label(e).to_string());
    let elements = (0..a.size()).map(label).collect();
    let covers = a
        .lattice()
        .poset()
        .covers()
        .into_iter()
        .map(|(lo, hi)| (label(lo), label(hi)))
        .collect();
    let derived_himp = a.lattice().heyting_implication().ok();
    let derives_himp = kind.is_heyting()
        || (kind == Kind::Raw && a.lattice().check_distributive().passed());
    let n = a.size();
    let ops = a
        .user_tables()
        .into_iter()
        .filter(|(op, t)| {
            !(*op == Op::Himp && derives_himp && derived_himp.as_ref() == Some(t))
        })
        .map(|(op, t)| {
            let entries = if op.arity() == 1 {
                (0..n)
                    .map(|x| TableEntry {
                        args: vec![label(x)],
                        value: label(t[x]),
                    })
                    .collect()
            } else {
                (0..n * n)
                    .map(|p| TableEntry {
                        args: vec![label(p / n), label(p % n)],
                        value: label(t[p]),
                    })
                    .collect()
            };
            OpSpec {
                op: Spanned::synthetic(op),
                entries,
            }
        })
        .collect();
    let consts = a
        .user_consts()
        .into_iter()
        .map(|(c, e)| (Spanned::synthetic(c), label(e)))
        .collect();
    AlgebraSpec {
        name: Spanned::synthetic(name.to_string()),
        elements,
        covers,
        ops,
        consts,
        kind: Spanned::synthetic(kind),
    }
}

fn quote(l: &str) -> String {
    let plain = !l.is_empty()
        && l.chars().all(is_word_char)
        && !SECTIONS.contains(&l);
    if plain {
        l.to_string()
    } else {
        format!("\"{l}\"")
    }
}

/// Canonical text for `spec`: one section per line, tables one row per
/// entry group.
pub fn render_spec(spec: &AlgebraSpec) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "algebra {} {{", quote(&spec.name.value));
    let labels: Vec<String> = spec.elements.iter().map(|e| quote(&e.value)).collect();
    let _ = writeln!(out, "  elements: {}", labels.join(" "));
    if !spec.covers.is_empty() {
        let covers: Vec<String> = spec
            .covers
            .iter()
            .map(|(a, b)| format!("{} < {}", quote(&a.value), quote(&b.value)))
            .collect();
        let _ = writeln!(out, "  covers: {}", covers.join(", "));
    }
    for o in &spec.ops {
        let entries: Vec<String> = o
            .entries
            .iter()
            .map(|e| {
                let args: Vec<String> = e.args.iter().map(|a| quote(&a.value)).collect();
                let args = if args.len() == 1 {
                    args[0].clone()
                } else {
                    format!("({})", args.join(","))
                };
                format!("{args}->{}", quote(&e.value.value))
            })
            .collect();
        let _ = writeln!(out, "  op {}: {}", o.op.value, entries.join(", "));
    }
    for (c, v) in &spec.consts {
        let _ = writeln!(out, "  const {}: {}", c.value, quote(&v.value));
    }
    let _ = writeln!(out, "  kind: {}", spec.kind.value);
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const REMARK: &str = "# five elements\n\
        algebra remark {\n\
          elements: 0 x y z 1\n\
          covers: 0 < x < y < 1, x < z < 1\n\
          op exists: 0->0, x->z, y->1, z->z, 1->1\n\
          op forall: 0->0, x->0, y->0, z->z, 1->1\n\
          kind: monadic-heyting\n\
        }\n";

    #[test]
    fn parses_the_remark_algebra() {
        let spec = parse_spec(REMARK).unwrap();
        assert_eq!(spec.elements.len(), 5);
        assert_eq!(spec.ops.len(), 2);
        assert_eq!(spec.covers.len(), 5);
        assert_eq!(spec.kind.value, Kind::MonadicHeyting);
        let e = elaborate(&spec, false).unwrap();
        assert!(e.report.unwrap().passed());
        let a = &e.algebra;
        let (y, z) = (a.index_of("y").unwrap(), a.index_of("z").unwrap());
        assert_eq!(a.apply2(Op::Himp, y, z), z);
    }

    #[test]
    fn two_chain_one_line() {
        let spec = parse_spec("algebra two { elements: 0 1  covers: 0<1  kind: godel }").unwrap();
        let e = elaborate(&spec, false).unwrap();
        assert_eq!(e.algebra.size(), 2);
        assert!(e.algebra.has_op(Op::Himp));
    }

    #[test]
    fn errors_carry_locations() {
        let e = parse_spec("algebra t {\n elements: a\n covers: a<a\n}").unwrap_err();
        assert!(matches!(e, SpecError::Order { source: OrderError::Cycle(..), .. }));
        assert_eq!(e.loc(), Loc { line: 3, col: 10 });

        let e = parse_spec("algebra t { elements: a b covers: a<q }").unwrap_err();
        assert!(e.to_string().contains("unknown element label `q`"));
        assert_eq!(e.loc().col, 37);

        let e = parse_spec("algebra t { elements: a b covers: a<b op exists: a->a, a->b, b->b }")
            .unwrap_err();
        assert!(e.to_string().contains("duplicate entry"));

        let e = parse_spec("algebra t { elements: a b covers: a<b op exists: a->a }").unwrap_err();
        assert!(e.to_string().contains("no entry for (b)"));

        let e = parse_spec("algebra t { elements: a b covers: a<b op himp: a->a }").unwrap_err();
        assert!(e.to_string().contains("takes 2 argument"));

        let e = parse_spec("algebra t { elements: a b op neg: a->b, b->a op neg: a->b, b->a }")
            .unwrap_err();
        assert!(e.to_string().contains("duplicate operation"));
    }

    #[test]
    fn declared_kind_failure_and_leniency() {
        let src = REMARK.replace("monadic-heyting", "monadic-godel");
        let spec = parse_spec(&src).unwrap();
        let err = elaborate(&spec, false).unwrap_err();
        match err {
            SpecError::KindFailure { report, .. } => assert_eq!(report.clause.as_deref(), Some("G")),
            other => panic!("unexpected {other:?}"),
        }
        let e = elaborate(&spec, true).unwrap();
        assert!(e.report.unwrap().failed());

        let raw = parse_spec(&REMARK.replace("monadic-heyting", "raw")).unwrap();
        assert!(elaborate(&raw, false).unwrap().report.is_none());
    }

    #[test]
    fn not_a_lattice_and_non_heyting() {
        let spec = parse_spec("algebra v { elements: a b }").unwrap();
        let e = elaborate(&spec, false).unwrap_err();
        assert!(matches!(e, SpecError::Order { source: OrderError::NotALattice { .. }, .. }));

        let m3 = "algebra m3 { elements: 0 a b c 1 covers: 0<a<1, 0<b<1, 0<c<1 kind: heyting }";
        let e = elaborate(&parse_spec(m3).unwrap(), false).unwrap_err();
        assert!(e.to_string().contains("distributive"));
    }

    #[test]
    fn nelson_kind_detects_center() {
        let src = "algebra k3 { elements: 0 c 1 covers: 0<c<1\n\
            op neg: 0->1, c->c, 1->0\n\
            op nimp: (0,0)->1, (0,c)->1, (0,1)->1, (c,0)->1, (c,c)->1, (c,1)->1, (1,0)->0, (1,c)->c, (1,1)->1\n\
            kind: nelson }";
        let e = elaborate(&parse_spec(src).unwrap(), false).unwrap();
        assert_eq!(e.algebra.center(), Some(1));
    }

    #[test]
    fn render_then_parse_is_identity() {
        let spec = parse_spec(REMARK).unwrap();
        let a = elaborate(&spec, false).unwrap().algebra;
        let again = spec_from_algebra("remark", Kind::MonadicHeyting, &a);
        let text = render_spec(&again);
        let reparsed = parse_spec(&text).unwrap();
        assert_eq!(reparsed, again);
        assert_eq!(elaborate(&reparsed, false).unwrap().algebra, a);
        // himp is derived, so it is not written out
        assert!(!text.contains("himp"));
    }

    #[test]
    fn quoted_labels_survive() {
        let spec = parse_spec(
            "algebra q { elements: \"(0,1)\" \"op\" covers: \"(0,1)\" < \"op\" ; kind: raw }",
        )
        .unwrap();
        let text = render_spec(&spec);
        assert!(text.contains("\"(0,1)\" < \"op\""));
        assert_eq!(parse_spec(&text).unwrap(), spec);
    }
}
