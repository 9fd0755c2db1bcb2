//! Congruence lattices of finite algebras and the transfer maps between
//! `Con(A)` and `Con(K(A))`.

use std::collections::{BTreeSet, VecDeque};

use thiserror::Error;

use crate::algebra::{Algebra, AlgebraError};
use crate::order::{order_isomorphism, Elem};
use crate::report::{Binding, CheckReport, Witness};
use crate::twist::{build_twist, TwistAlgebra, TwistError};
use crate::varieties::{check_suite, quantifier_range, CheckOptions, SuiteError, SuiteId};

/// Largest carrier the partition oracle accepts (Bell(10) = 115975).
pub const BRUTE_FORCE_LIMIT: usize = 10;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CongruenceError {
    #[error("not a congruence\n{0}")]
    NotCompatible(Box<CheckReport>),
    #[error("precondition failed\n{0}")]
    Precondition(Box<CheckReport>),
    #[error("carrier of size {size} is beyond the partition oracle limit {limit}")]
    TooLarge { size: usize, limit: usize },
    #[error("congruence is over {found} elements, algebra has {expected}")]
    SizeMismatch { expected: usize, found: usize },
    #[error(transparent)]
    Twist(#[from] TwistError),
    #[error(transparent)]
    Suite(#[from] SuiteError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// A partition in canonical form: element 0 is in block 0 and each new
/// block takes the next id in element order.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Congruence {
    pub blocks: Vec<usize>,
}

impl Congruence {
    /// Canonicalizes any block assignment.
    pub fn from_blocks<K: Ord + Clone>(keys: &[K]) -> Self {
        let mut seen: Vec<K> = Vec::new();
        let blocks = keys
            .iter()
            .map(|k| match seen.iter().position(|s| s == k) {
                Some(i) => i,
                None => {
                    seen.push(k.clone());
                    seen.len() - 1
                }
            })
            .collect();
        Congruence { blocks }
    }

    /// Δ.
    pub fn identity(n: usize) -> Self {
        Congruence {
            blocks: (0..n).collect(),
        }
    }

    /// ∇.
    pub fn total(n: usize) -> Self {
        Congruence { blocks: vec![0; n] }
    }

    pub fn size(&self) -> usize {
        self.blocks.len()
    }

    pub fn related(&self, a: Elem, b: Elem) -> bool {
        self.blocks[a] == self.blocks[b]
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks.iter().max().map_or(0, |m| m + 1)
    }

    pub fn partition(&self) -> Vec<Vec<Elem>> {
        let mut out = vec![Vec::new(); self.num_blocks()];
        for (e, &b) in self.blocks.iter().enumerate() {
            out[b].push(e);
        }
        out
    }

    /// Refinement: every block of `self` lies inside a block of `other`.
    pub fn leq(&self, other: &Congruence) -> bool {
        let mut image = vec![None; self.num_blocks()];
        self.blocks.iter().zip(&other.blocks).all(|(&b, &o)| {
            *image[b].get_or_insert(o) == o
        })
    }

    pub fn meet(&self, other: &Congruence) -> Congruence {
        let keys: Vec<(usize, usize)> = self.blocks.iter().copied().zip(other.blocks.iter().copied()).collect();
        Congruence::from_blocks(&keys)
    }

    pub fn join(&self, other: &Congruence) -> Congruence {
        let mut uf = UnionFind::new(self.size());
        for p in [self, other] {
            let mut first = vec![None; p.num_blocks()];
            for (e, &b) in p.blocks.iter().enumerate() {
                match first[b] {
                    None => first[b] = Some(e),
                    Some(r) => {
                        uf.union(r, e);
                    }
                }
            }
        }
        uf.congruence()
    }

    /// The restriction to `carrier`, indexed by position in `carrier`.
    pub fn restrict(&self, carrier: &[Elem]) -> Congruence {
        let keys: Vec<usize> = carrier.iter().map(|&e| self.blocks[e]).collect();
        Congruence::from_blocks(&keys)
    }

    /// Blocks written with element labels, e.g. `{0}{x,y}`.
    pub fn describe(&self, a: &Algebra) -> String {
        self.partition()
            .iter()
            .map(|b| {
                let ls: Vec<&str> = b.iter().map(|&e| a.label(e)).collect();
                format!("{{{}}}", ls.join(","))
            })
            .collect()
    }
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Whether the two were in different classes.
    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (lo, hi) = (ra.min(rb), ra.max(rb));
        self.parent[hi] = lo;
        true
    }

    fn congruence(&mut self) -> Congruence {
        let roots: Vec<usize> = (0..self.parent.len()).map(|x| self.find(x)).collect();
        Congruence::from_blocks(&roots)
    }
}

/// Checks compatibility of `theta` with every table and reports the first
/// violation: operation, the related pair, and the fixed other argument.
pub fn check_compatible(a: &Algebra, theta: &Congruence) -> CheckReport {
    let n = a.size();
    let b = |var: &str, e: Elem| Binding {
        var: var.to_string(),
        elem: e,
        label: a.label(e).to_string(),
    };
    let fail = |op: &str, bindings: Vec<Binding>| {
        CheckReport::fail(
            Witness::new(bindings)
                .with_clause(op)
                .with_note(format!("partition {}", theta.describe(a))),
        )
        .with_subject("congruence")
    };
    for (op, t) in a.tables() {
        for x in 0..n {
            for y in (x + 1)..n {
                if !theta.related(x, y) {
                    continue;
                }
                if op.arity() == 1 {
                    if !theta.related(t[x], t[y]) {
                        return fail(op.name(), vec![b("x", x), b("y", y)]);
                    }
                    continue;
                }
                for z in 0..n {
                    if !theta.related(t[x * n + z], t[y * n + z])
                        || !theta.related(t[z * n + x], t[z * n + y])
                    {
                        return fail(op.name(), vec![b("x", x), b("y", y), b("z", z)]);
                    }
                }
            }
        }
    }
    CheckReport::pass().with_subject("congruence")
}

pub fn is_congruence(a: &Algebra, theta: &Congruence) -> bool {
    theta.size() == a.size() && check_compatible(a, theta).passed()
}

/// The least congruence identifying `x` and `y`: collapse the pair, then
/// push every merged pair through all basic translations until nothing
/// new merges.
pub fn principal_congruence(a: &Algebra, x: Elem, y: Elem) -> Congruence {
    let n = a.size();
    let mut uf = UnionFind::new(n);
    let mut work = VecDeque::new();
    if uf.union(x, y) {
        work.push_back((x, y));
    }
    let tables: Vec<(usize, &[Elem])> = a.tables().map(|(op, t)| (op.arity(), t)).collect();
    while let Some((u, v)) = work.pop_front() {
        for &(arity, t) in &tables {
            let mut push = |p: Elem, q: Elem, uf: &mut UnionFind| {
                if uf.union(p, q) {
                    work.push_back((p, q));
                }
            };
            if arity == 1 {
                push(t[u], t[v], &mut uf);
            } else {
                for z in 0..n {
                    push(t[u * n + z], t[v * n + z], &mut uf);
                    push(t[z * n + u], t[z * n + v], &mut uf);
                }
            }
        }
    }
    uf.congruence()
}

/// `Con(A)` with its refinement order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConLattice {
    /// Sorted by number of blocks (Δ first), then by block vector.
    pub congruences: Vec<Congruence>,
    /// `leq[i][j]` iff congruence `i` refines congruence `j`.
    pub leq: Vec<Vec<bool>>,
}

impl ConLattice {
    fn from_set(set: BTreeSet<Congruence>) -> Self {
        let mut congruences: Vec<Congruence> = set.into_iter().collect();
        congruences.sort_by(|p, q| {
            q.num_blocks()
                .cmp(&p.num_blocks())
                .then_with(|| p.blocks.cmp(&q.blocks))
        });
        let leq = congruences
            .iter()
            .map(|p| congruences.iter().map(|q| p.leq(q)).collect())
            .collect();
        ConLattice { congruences, leq }
    }

    pub fn len(&self) -> usize {
        self.congruences.len()
    }

    pub fn is_empty(&self) -> bool {
        self.congruences.is_empty()
    }

    pub fn position(&self, c: &Congruence) -> Option<usize> {
        self.congruences.iter().position(|d| d == c)
    }
}

/// All congruences, as joins of principal congruences.
pub fn enumerate_congruences(a: &Algebra) -> ConLattice {
    let n = a.size();
    let mut principals = BTreeSet::new();
    for x in 0..n {
        for y in (x + 1)..n {
            principals.insert(principal_congruence(a, x, y));
        }
    }
    let mut all: BTreeSet<Congruence> = principals.clone();
    all.insert(Congruence::identity(n));
    // closing under joins with principals reaches every finite join
    let mut frontier: Vec<Congruence> = all.iter().cloned().collect();
    while let Some(c) = frontier.pop() {
        for p in &principals {
            let j = c.join(p);
            if all.insert(j.clone()) {
                frontier.push(j);
            }
        }
    }
    ConLattice::from_set(all)
}

/// All congruences by filtering every partition; the oracle for
/// [`enumerate_congruences`].
pub fn enumerate_congruences_brute(a: &Algebra) -> Result<ConLattice, CongruenceError> {
    let n = a.size();
    if n > BRUTE_FORCE_LIMIT {
        return Err(CongruenceError::TooLarge {
            size: n,
            limit: BRUTE_FORCE_LIMIT,
        });
    }
    let mut out = BTreeSet::new();
    // restricted growth strings are exactly the canonical block vectors
    let mut rgs = vec![0usize; n];
    loop {
        let c = Congruence { blocks: rgs.clone() };
        if check_compatible(a, &c).passed() {
            out.insert(c);
        }
        let mut i = n;
        loop {
            if i <= 1 {
                return Ok(ConLattice::from_set(out));
            }
            i -= 1;
            let max_prefix = rgs[..i].iter().copied().max().unwrap_or(0);
            if rgs[i] <= max_prefix {
                rgs[i] += 1;
                for r in rgs.iter_mut().skip(i + 1) {
                    *r = 0;
                }
                break;
            }
        }
    }
}

/// `(a,b) γ_θ (x,y)` iff `a θ x` and `b θ y`.
pub fn gamma_theta(theta: &Congruence, tw: &TwistAlgebra) -> Result<Congruence, CongruenceError> {
    if theta.size() != tw.base.size() {
        return Err(CongruenceError::SizeMismatch {
            expected: tw.base.size(),
            found: theta.size(),
        });
    }
    let keys: Vec<(usize, usize)> = tw
        .pairs
        .iter()
        .map(|&(a, b)| (theta.blocks[a], theta.blocks[b]))
        .collect();
    let gamma = Congruence::from_blocks(&keys);
    let r = check_compatible(&tw.result, &gamma);
    if r.failed() {
        return Err(CongruenceError::NotCompatible(Box::new(r)));
    }
    Ok(gamma)
}

/// `a θ^γ b` iff `(a,0) γ (b,0)`.
pub fn theta_gamma(gamma: &Congruence, tw: &TwistAlgebra) -> Result<Congruence, CongruenceError> {
    if gamma.size() != tw.size() {
        return Err(CongruenceError::SizeMismatch {
            expected: tw.size(),
            found: gamma.size(),
        });
    }
    let g = &tw.base;
    let keys: Vec<usize> = (0..g.size())
        .map(|a| gamma.blocks[tw.pair_index(a, g.bot()).expect("(a,0) is a pair")])
        .collect();
    let theta = Congruence::from_blocks(&keys);
    let r = check_compatible(g, &theta);
    if r.failed() {
        return Err(CongruenceError::NotCompatible(Box::new(r)));
    }
    Ok(theta)
}

fn require_godel(g: &Algebra) -> Result<(), CongruenceError> {
    let id = if g.is_monadic() {
        SuiteId::MonadicGodel
    } else {
        SuiteId::Heyting
    };
    let r = check_suite(g, id, CheckOptions::default())?;
    if r.failed() {
        return Err(CongruenceError::Precondition(Box::new(r)));
    }
    Ok(())
}

fn con_witness(clause: &str, vars: &[(&str, usize, String)], note: String) -> CheckReport {
    let assignment = vars
        .iter()
        .map(|(v, i, l)| Binding {
            var: v.to_string(),
            elem: *i,
            label: l.clone(),
        })
        .collect();
    CheckReport::fail(Witness::new(assignment).with_clause(clause).with_note(note))
}

/// Verifies that `θ ↦ γ_θ` is an order isomorphism `Con(g) → Con(K(g))`
/// with inverse `γ ↦ θ^γ`.
pub fn check_con_iso(g: &Algebra) -> Result<CheckReport, CongruenceError> {
    require_godel(g)?;
    let tw = build_twist(g)?;
    let con_g = enumerate_congruences(g);
    let con_k = enumerate_congruences(&tw.result);
    Ok(con_iso_report(g, &tw, &con_g, &con_k)?.with_subject("con-iso"))
}

/// The checks behind [`check_con_iso`] over precomputed lattices.
pub fn con_iso_report(
    g: &Algebra,
    tw: &TwistAlgebra,
    con_g: &ConLattice,
    con_k: &ConLattice,
) -> Result<CheckReport, CongruenceError> {
    let k = &tw.result;
    let th = |i: usize| ("theta", i, con_g.congruences[i].describe(g));
    let ga = |i: usize| ("gamma", i, con_k.congruences[i].describe(k));
    let mut image = Vec::with_capacity(con_g.len());
    for (i, theta) in con_g.congruences.iter().enumerate() {
        let gamma = gamma_theta(theta, tw)?;
        let j = con_k
            .position(&gamma)
            .expect("a verified congruence is enumerated");
        if &theta_gamma(&gamma, tw)? != theta {
            return Ok(con_witness("theta-of-gamma", &[th(i)], "θ^{γ_θ} differs from θ".into()));
        }
        image.push(j);
    }
    for (j, gamma) in con_k.congruences.iter().enumerate() {
        let theta = theta_gamma(gamma, tw)?;
        if &gamma_theta(&theta, tw)? != gamma {
            return Ok(con_witness("gamma-of-theta", &[ga(j)], "γ_{θ^γ} differs from γ".into()));
        }
    }
    let distinct: BTreeSet<usize> = image.iter().copied().collect();
    if distinct.len() != con_g.len() || con_g.len() != con_k.len() {
        return Ok(con_witness(
            "bijective",
            &[],
            format!("|Con(A)| = {}, |Con(K(A))| = {}", con_g.len(), con_k.len()),
        ));
    }
    for i in 0..con_g.len() {
        for j in 0..con_g.len() {
            if con_g.leq[i][j] != con_k.leq[image[i]][image[j]] {
                return Ok(con_witness(
                    "order",
                    &[th(i), th(j)],
                    "refinement is not preserved and reflected".into(),
                ));
            }
        }
    }
    Ok(CheckReport::pass().with_note(format!(
        "{} congruences on each side",
        con_g.len()
    )))
}

/// Compares `Con(g)` with `Con(∃(A))`: the restriction map is tried first,
/// then a general order-isomorphism search.
pub fn check_lemma23_con(g: &Algebra) -> Result<CheckReport, CongruenceError> {
    let r = check_suite(g, SuiteId::MonadicGodel, CheckOptions::default())?;
    if r.failed() {
        return Err(CongruenceError::Precondition(Box::new(r)));
    }
    let range = quantifier_range(g)?.exists_image;
    let sub = g.subalgebra(&range)?.without_quantifiers();
    let con_g = enumerate_congruences(g);
    let con_e = enumerate_congruences(&sub);
    let subject = "lemma23-con";
    if con_g.len() != con_e.len() {
        return Ok(con_witness(
            "isomorphic",
            &[],
            format!("|Con(A)| = {}, |Con(∃(A))| = {}", con_g.len(), con_e.len()),
        )
        .with_subject(subject));
    }
    let restricted: Option<Vec<usize>> = con_g
        .congruences
        .iter()
        .map(|c| con_e.position(&c.restrict(&range)))
        .collect();
    if let Some(map) = restricted {
        let bijective = map.iter().collect::<BTreeSet<_>>().len() == map.len();
        let order = (0..map.len())
            .all(|i| (0..map.len()).all(|j| con_g.leq[i][j] == con_e.leq[map[i]][map[j]]));
        if bijective && order {
            return Ok(CheckReport::pass()
                .with_subject(subject)
                .with_note("the restriction map is an order isomorphism"));
        }
    }
    Ok(match order_isomorphism(&con_g.leq, &con_e.leq) {
        Some(_) => CheckReport::pass()
            .with_subject(subject)
            .with_note("order isomorphic; the restriction map is not an isomorphism"),
        None => con_witness("isomorphic", &[], "no order isomorphism exists".into()).with_subject(subject),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::order::{Lattice, Poset};

    fn chain(n: usize) -> Algebra {
        let names: Vec<String> = match n {
            3 => vec!["0".into(), "m".into(), "1".into()],
            _ => (0..n).map(|i| i.to_string()).collect(),
        };
        let covers: Vec<(String, String)> = (1..n)
            .map(|i| (names[i - 1].clone(), names[i].clone()))
            .collect();
        let a = Algebra::heyting(
            Lattice::from_poset(Poset::from_covers(&names, &covers).unwrap()).unwrap(),
        )
        .unwrap();
        let id: Vec<Elem> = (0..n).collect();
        a.with_quantifiers(id.clone(), Some(id)).unwrap()
    }

    #[test]
    fn canonical_form() {
        let c = Congruence::from_blocks(&[7, 3, 7, 1]);
        assert_eq!(c.blocks, vec![0, 1, 0, 2]);
        assert_eq!(c.partition(), vec![vec![0, 2], vec![1], vec![3]]);
        assert!(Congruence::identity(4).leq(&c));
        assert!(c.leq(&Congruence::total(4)));
        assert!(!c.leq(&Congruence::identity(4)));
        let d = Congruence::from_blocks(&[0, 0, 1, 1]);
        assert_eq!(c.join(&d), Congruence::total(4));
        assert_eq!(c.meet(&d), Congruence::identity(4));
    }

    #[test]
    fn chains() {
        assert_eq!(enumerate_congruences(&chain(2)).len(), 2);
        let con = enumerate_congruences(&chain(3));
        assert_eq!(con.len(), 3);
        assert!(con.congruences.contains(&Congruence::from_blocks(&[0, 1, 1])));
        assert_eq!(con, enumerate_congruences_brute(&chain(3)).unwrap());
    }

    #[test]
    fn twist_of_three_chain() {
        let tw = build_twist(&chain(3)).unwrap();
        let con = enumerate_congruences(&tw.result);
        assert_eq!(con.len(), 3);
        assert_eq!(con, enumerate_congruences_brute(&tw.result).unwrap());

        let theta = Congruence::from_blocks(&[0, 1, 1]);
        let gamma = gamma_theta(&theta, &tw).unwrap();
        // (0,0) | (0,m),(0,1) | (m,0),(1,0)
        assert_eq!(gamma.describe(&tw.result), "{(0,0)}{(0,m),(0,1)}{(m,0),(1,0)}");
        assert_eq!(theta_gamma(&gamma, &tw).unwrap(), theta);
        for c in [Congruence::identity(3), Congruence::total(3)] {
            let g = gamma_theta(&c, &tw).unwrap();
            assert_eq!(g.num_blocks(), if c.num_blocks() == 1 { 1 } else { 5 });
            assert_eq!(theta_gamma(&g, &tw).unwrap(), c);
        }
        assert!(check_con_iso(&chain(3)).unwrap().passed());
        assert!(check_con_iso(&chain(2)).unwrap().passed());
    }

    #[test]
    fn lemma23_con_with_coarse_range() {
        let g = chain(3);
        let (bot, top) = (g.bot(), g.top());
        let ex: Vec<Elem> = (0..3).map(|x| if x == bot { bot } else { top }).collect();
        let fa: Vec<Elem> = (0..3).map(|x| if x == top { top } else { bot }).collect();
        let g = g.with_quantifiers(ex, Some(fa)).unwrap();
        assert_eq!(enumerate_congruences(&g).len(), 2);
        let r = check_lemma23_con(&g).unwrap();
        assert!(r.passed(), "{r}");
        assert!(check_lemma23_con(&chain(3)).unwrap().passed());
    }

    #[test]
    fn incompatible_partition_is_reported() {
        let g = chain(3);
        // m ⇒ 0 = 0 but 0 ⇒ 0 = 1
        let bad = Congruence::from_blocks(&[0, 0, 1]);
        assert!(!is_congruence(&g, &bad));
        assert!(is_congruence(&g, &Congruence::from_blocks(&[0, 1, 1])));
        let tw = build_twist(&g).unwrap();
        // identifying (0,0) with (0,1) alone is not compatible with ∼
        let mut keys: Vec<usize> = (0..5).collect();
        keys[2] = 0;
        let r = check_compatible(&tw.result, &Congruence::from_blocks(&keys));
        assert!(r.failed());
    }
}
