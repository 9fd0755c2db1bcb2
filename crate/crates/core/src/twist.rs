//! The twist functor `K`, the center functor `C`, and the natural maps
//! `α: A → C(K(A))` and `β: T → K(C(T))`.
//!
//! `K(A)` is carried by the pairs `(a,b)` with `a ∧ b = 0`, listed in
//! lexicographic order of base indices; every witness into a twist refers
//! to that order.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::algebra::{Algebra, AlgebraError, Const, Op};
use crate::hom::{HomError, Homomorphism};
use crate::order::{Elem, Lattice, OrderError, Poset};
use crate::report::{Binding, CheckReport, ElemRef, Witness};
use crate::varieties::{check_suite, CheckOptions, SuiteError, SuiteId};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TwistError {
    #[error("precondition failed\n{0}")]
    Precondition(Box<CheckReport>),
    #[error(transparent)]
    Suite(#[from] SuiteError),
    #[error("algebra has no center constant")]
    NoCenter,
    #[error("operation `{0}` is missing")]
    MissingOperation(Op),
    #[error("construction check failed\n{0}")]
    Verification(Box<CheckReport>),
    #[error(transparent)]
    Hom(#[from] HomError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Order(#[from] OrderError),
}

fn require(a: &Algebra, id: SuiteId) -> Result<(), TwistError> {
    let r = check_suite(a, id, CheckOptions::default())?;
    if r.failed() {
        return Err(TwistError::Precondition(Box::new(r)));
    }
    Ok(())
}

fn verification(clause: &str, assignment: Vec<Binding>, note: String) -> TwistError {
    TwistError::Verification(Box::new(CheckReport::fail(
        Witness::new(assignment).with_clause(clause).with_note(note),
    )))
}

fn bind(a: &Algebra, var: &str, e: Elem) -> Binding {
    Binding {
        var: var.to_string(),
        elem: e,
        label: a.label(e).to_string(),
    }
}

/// `K(A)` together with the pair bookkeeping.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwistAlgebra {
    pub base: Algebra,
    pub pairs: Vec<(Elem, Elem)>,
    pub result: Algebra,
    index: BTreeMap<(Elem, Elem), Elem>,
}

impl TwistAlgebra {
    pub fn pair_index(&self, a: Elem, b: Elem) -> Option<Elem> {
        self.index.get(&(a, b)).copied()
    }

    pub fn pair(&self, x: Elem) -> (Elem, Elem) {
        self.pairs[x]
    }

    pub fn size(&self) -> usize {
        self.pairs.len()
    }
}

/// Label of the pair `(a,b)` over `base`.
pub fn pair_label(base: &Algebra, a: Elem, b: Elem) -> String {
    format!("({},{})", base.label(a), base.label(b))
}

/// Builds `K(g)`. With quantifiers present the result carries
/// `∃(a,b) = (∃a, ∀b)` and the derived `∀`, which is checked against
/// `(∀a, ∃b)`.
pub fn build_twist(g: &Algebra) -> Result<TwistAlgebra, TwistError> {
    if !g.has_op(Op::Himp) {
        return Err(TwistError::MissingOperation(Op::Himp));
    }
    require(g, SuiteId::Heyting)?;
    let monadic = g.has_op(Op::Exists) || g.has_op(Op::Forall);
    if monadic {
        require(g, SuiteId::MonadicHeyting)?;
    }
    let n = g.size();
    let (bot, top) = (g.bot(), g.top());
    let pairs: Vec<(Elem, Elem)> = (0..n)
        .flat_map(|a| (0..n).map(move |b| (a, b)))
        .filter(|&(a, b)| g.apply2(Op::Meet, a, b) == bot)
        .collect();
    let index: BTreeMap<(Elem, Elem), Elem> =
        pairs.iter().enumerate().map(|(i, &p)| (p, i)).collect();
    let m = pairs.len();
    let names: Vec<String> = pairs.iter().map(|&(a, b)| pair_label(g, a, b)).collect();
    let leq: Vec<Vec<bool>> = pairs
        .iter()
        .map(|&(a, b)| {
            pairs
                .iter()
                .map(|&(d, e)| g.leq(a, d) && g.leq(e, b))
                .collect()
        })
        .collect();
    let lattice = Lattice::from_poset(Poset::from_leq(names, &leq)?)?;
    let at = |p: (Elem, Elem)| index[&p];

    let himp = |a, d| g.apply2(Op::Himp, a, d);
    let meet = |a, d| g.apply2(Op::Meet, a, d);
    let join = |a, d| g.apply2(Op::Join, a, d);
    for (x, &(a, b)) in pairs.iter().enumerate() {
        for (y, &(d, e)) in pairs.iter().enumerate() {
            let expect_join = at((join(a, d), meet(b, e)));
            let expect_meet = at((meet(a, d), join(b, e)));
            if lattice.join(x, y) != expect_join || lattice.meet(x, y) != expect_meet {
                let r = &lattice;
                return Err(verification(
                    "pair-lattice",
                    vec![],
                    format!(
                        "order-derived bounds of {} and {} disagree with the pair operations",
                        r.name(x),
                        r.name(y)
                    ),
                ));
            }
        }
    }
    let mut ops = BTreeMap::new();
    ops.insert(Op::Neg, pairs.iter().map(|&(a, b)| at((b, a))).collect());
    let mut nimp = Vec::with_capacity(m * m);
    for &(a, _) in &pairs {
        for &(d, e) in &pairs {
            nimp.push(at((himp(a, d), meet(a, e))));
        }
    }
    ops.insert(Op::Nimp, nimp);
    if monadic {
        let mut exists = Vec::with_capacity(m);
        for &(a, b) in &pairs {
            let p = (g.apply1(Op::Exists, a), g.apply1(Op::Forall, b));
            match index.get(&p) {
                Some(&i) => exists.push(i),
                None => {
                    return Err(verification(
                        "exists-closed",
                        vec![],
                        format!(
                            "∃({}) = {} leaves the carrier",
                            pair_label(g, a, b),
                            pair_label(g, p.0, p.1)
                        ),
                    ))
                }
            }
        }
        ops.insert(Op::Exists, exists);
    }
    let mut consts = BTreeMap::new();
    consts.insert(Const::Center, at((bot, bot)));
    consts.insert(Const::Bot, at((bot, top)));
    consts.insert(Const::Top, at((top, bot)));
    let result = Algebra::new(lattice, ops, consts)?;

    if monadic {
        // the derived ∀ = ∼∃∼ must be the componentwise (∀a, ∃b)
        let forall = result.table(Op::Forall).expect("derived");
        for (x, &(a, b)) in pairs.iter().enumerate() {
            let p = (g.apply1(Op::Forall, a), g.apply1(Op::Exists, b));
            if index.get(&p) != Some(&forall[x]) {
                return Err(verification(
                    "forall-componentwise",
                    vec![bind(&result, "x", x)],
                    format!(
                        "∼∃∼ gives {}, componentwise gives {}",
                        result.label(forall[x]),
                        pair_label(g, p.0, p.1)
                    ),
                ));
            }
        }
    }
    Ok(TwistAlgebra {
        base: g.clone(),
        pairs,
        result,
        index,
    })
}

/// `C(T)` and where its elements sit in `T`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CenterAlgebra {
    pub algebra: Algebra,
    /// `inclusion[i]` is the element of `T` carried by element `i`.
    pub inclusion: Vec<Elem>,
}

impl CenterAlgebra {
    pub fn position(&self, x: Elem) -> Option<Elem> {
        self.inclusion.iter().position(|&y| y == x)
    }
}

fn require_nelson(t: &Algebra) -> Result<Elem, TwistError> {
    let c = t.center().ok_or(TwistError::NoCenter)?;
    for op in [Op::Neg, Op::Nimp] {
        if !t.has_op(op) {
            return Err(TwistError::MissingOperation(op));
        }
    }
    if t.has_op(Op::Exists) {
        require(t, SuiteId::MonadicNelson)?;
    } else {
        require(t, SuiteId::Nelson)?;
        require(t, SuiteId::KleeneCentered)?;
    }
    Ok(c)
}

/// Builds `C(t)` on `{x : x ≥ c}` with `⇒` the restricted `→`, bottom `c`,
/// and the restricted quantifiers.
pub fn center_algebra(t: &Algebra) -> Result<CenterAlgebra, TwistError> {
    let c = require_nelson(t)?;
    let carrier: Vec<Elem> = (0..t.size()).filter(|&x| t.leq(c, x)).collect();
    let lattice = Lattice::from_poset(t.lattice().poset().restrict(&carrier))?;
    let pos = |x: Elem| carrier.iter().position(|&y| y == x);
    let mut ops = BTreeMap::new();
    let mut restricted = |op: Op, tops: Op| -> Result<(), TwistError> {
        let mut table = Vec::new();
        if op.arity() == 1 {
            for &x in &carrier {
                let r = t.apply1(op, x);
                table.push(pos(r).ok_or_else(|| {
                    verification(
                        &format!("closed.{op}"),
                        vec![bind(t, "x", x)],
                        format!("{} is not above the center", t.label(r)),
                    )
                })?);
            }
        } else {
            for &x in &carrier {
                for &y in &carrier {
                    let r = t.apply2(op, x, y);
                    table.push(pos(r).ok_or_else(|| {
                        verification(
                            &format!("closed.{op}"),
                            vec![bind(t, "x", x), bind(t, "y", y)],
                            format!("{} is not above the center", t.label(r)),
                        )
                    })?);
                }
            }
        }
        ops.insert(tops, table);
        Ok(())
    };
    restricted(Op::Nimp, Op::Himp)?;
    if t.has_op(Op::Exists) {
        restricted(Op::Exists, Op::Exists)?;
        restricted(Op::Forall, Op::Forall)?;
    }
    let algebra = Algebra::new(lattice, ops, BTreeMap::new())?;
    Ok(CenterAlgebra {
        algebra,
        inclusion: carrier,
    })
}

/// `α(a) = (a,0)`, verified to be an isomorphism `g ≅ C(K(g))`.
pub fn alpha(g: &Algebra) -> Result<Homomorphism, TwistError> {
    if g.is_monadic() {
        require(g, SuiteId::MonadicGodel)?;
    }
    let tw = build_twist(g)?;
    alpha_into(&tw)
}

/// `α` for an already built twist.
pub fn alpha_into(tw: &TwistAlgebra) -> Result<Homomorphism, TwistError> {
    let g = &tw.base;
    let ck = center_algebra(&tw.result)?;
    let map = (0..g.size())
        .map(|a| {
            let x = tw.pair_index(a, g.bot()).expect("(a,0) is always a pair");
            ck.position(x).expect("(a,0) lies above (0,0)")
        })
        .collect();
    let h = Homomorphism::new(g.clone(), ck.algebra, map)?;
    let r = h.check_isomorphism().with_subject("alpha");
    if r.failed() {
        return Err(TwistError::Verification(Box::new(r)));
    }
    Ok(h)
}

/// `β(x) = (x∨c, ∼x∨c)`, verified to be an isomorphism `t ≅ K(C(t))`.
pub fn beta(t: &Algebra) -> Result<Homomorphism, TwistError> {
    let ct = center_algebra(t)?;
    let kc = build_twist(&ct.algebra)?;
    beta_into(t, &ct, &kc)
}

fn beta_map(t: &Algebra, ct: &CenterAlgebra, kc: &TwistAlgebra) -> Result<Vec<Elem>, TwistError> {
    let c = t.center().ok_or(TwistError::NoCenter)?;
    (0..t.size())
        .map(|x| {
            let a = t.apply2(Op::Join, x, c);
            let b = t.apply2(Op::Join, t.apply1(Op::Neg, x), c);
            let (pa, pb) = (ct.position(a).expect("x∨c ≥ c"), ct.position(b).expect("∼x∨c ≥ c"));
            kc.pair_index(pa, pb).ok_or_else(|| {
                verification(
                    "beta-pair",
                    vec![bind(t, "x", x)],
                    format!("({}) ∧ ({}) is not the center", t.label(a), t.label(b)),
                )
            })
        })
        .collect()
}

fn beta_into(t: &Algebra, ct: &CenterAlgebra, kc: &TwistAlgebra) -> Result<Homomorphism, TwistError> {
    let map = beta_map(t, ct, kc)?;
    let h = Homomorphism::new(t.clone(), kc.result.clone(), map)?;
    let r = h.check_isomorphism().with_subject("beta");
    if r.failed() {
        return Err(TwistError::Verification(Box::new(r)));
    }
    Ok(h)
}

/// Condition (CK): for `x, y ≥ c` with `x ∧ y = c` some `z` has
/// `z ∨ c = x` and `∼z ∨ c = y`.
pub fn check_ck(t: &Algebra) -> Result<CheckReport, TwistError> {
    t.center().ok_or(TwistError::NoCenter)?;
    require(t, SuiteId::KleeneCentered)?;
    Ok(check_suite(t, SuiteId::Ck, CheckOptions::default())?)
}

/// `K(f)(a,b) = (f a, f b)`, verified.
pub fn lift_hom(f: &Homomorphism) -> Result<Homomorphism, TwistError> {
    f.clone().verified()?;
    let ks = build_twist(&f.source)?;
    let kt = build_twist(&f.target)?;
    lift_between(f, &ks, &kt)
}

fn lift_between(f: &Homomorphism, ks: &TwistAlgebra, kt: &TwistAlgebra) -> Result<Homomorphism, TwistError> {
    let map = ks
        .pairs
        .iter()
        .map(|&(a, b)| {
            kt.pair_index(f.apply(a), f.apply(b))
                .expect("a homomorphism keeps a ∧ b = 0")
        })
        .collect();
    Ok(Homomorphism::new(ks.result.clone(), kt.result.clone(), map)?.verified()?)
}

/// `C(f)`: the restriction of `f` to the elements above the center,
/// verified.
pub fn drop_hom(f: &Homomorphism) -> Result<Homomorphism, TwistError> {
    f.clone().verified()?;
    let cs = center_algebra(&f.source)?;
    let ct = center_algebra(&f.target)?;
    drop_between(f, &cs, &ct)
}

fn drop_between(f: &Homomorphism, cs: &CenterAlgebra, ct: &CenterAlgebra) -> Result<Homomorphism, TwistError> {
    let map = cs
        .inclusion
        .iter()
        .map(|&x| {
            let y = f.apply(x);
            ct.position(y).ok_or_else(|| {
                verification(
                    "center-preserved",
                    vec![bind(&f.source, "x", x)],
                    format!("f({}) = {} is not above the center", f.source.label(x), f.target.label(y)),
                )
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Homomorphism::new(cs.algebra.clone(), ct.algebra.clone(), map)?.verified()?)
}

fn square(name: &str, top: &Homomorphism, left: &[Elem], right: &[Elem], bottom: &[Elem]) -> CheckReport {
    // compares right ∘ top with bottom ∘ left pointwise
    let src = &top.source;
    for x in 0..src.size() {
        let (l, r) = (right[top.map[x]], bottom[left[x]]);
        if l != r {
            let mut w = Witness::new(vec![bind(src, "x", x)]).with_clause(name);
            w.left = Some(ElemRef::new(l, ""));
            w.right = Some(ElemRef::new(r, ""));
            return CheckReport::fail(w).with_subject("naturality");
        }
    }
    CheckReport::pass().with_subject("naturality")
}

/// The naturality square `α_B ∘ f = C(K(f)) ∘ α_A` for a homomorphism of
/// Heyting-family algebras.
pub fn check_alpha_naturality(f: &Homomorphism) -> Result<CheckReport, TwistError> {
    let (ka, kb) = (build_twist(&f.source)?, build_twist(&f.target)?);
    let (aa, ab) = (alpha_into(&ka)?, alpha_into(&kb)?);
    let kf = lift_between(f, &ka, &kb)?;
    let (ca, cb) = (center_algebra(&ka.result)?, center_algebra(&kb.result)?);
    let ckf = drop_between(&kf, &ca, &cb)?;
    let mut r = square("alpha", f, &aa.map, &ab.map, &ckf.map);
    if let Some(w) = r.witness.as_mut() {
        label_sides(w, &ab.target);
    }
    Ok(r)
}

/// The naturality square `β_U ∘ f = K(C(f)) ∘ β_T` for a homomorphism of
/// centered Nelson-family algebras.
pub fn check_beta_naturality(f: &Homomorphism) -> Result<CheckReport, TwistError> {
    let (cs, ct) = (center_algebra(&f.source)?, center_algebra(&f.target)?);
    let (ks, kt) = (build_twist(&cs.algebra)?, build_twist(&ct.algebra)?);
    let bs = beta_into(&f.source, &cs, &ks)?;
    let bt = beta_into(&f.target, &ct, &kt)?;
    let cf = drop_between(f, &cs, &ct)?;
    let kcf = lift_between(&cf, &ks, &kt)?;
    let mut r = square("beta", f, &bs.map, &bt.map, &kcf.map);
    if let Some(w) = r.witness.as_mut() {
        label_sides(w, &bt.target);
    }
    Ok(r)
}

fn label_sides(w: &mut Witness, target: &Algebra) {
    for side in [&mut w.left, &mut w.right].into_iter().flatten() {
        side.label = target.label(side.index).to_string();
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chain(n: usize) -> Algebra {
        let names: Vec<String> = match n {
            2 => vec!["0".into(), "1".into()],
            3 => vec!["0".into(), "m".into(), "1".into()],
            _ => (0..n).map(|i| format!("e{i}")).collect(),
        };
        let covers: Vec<(String, String)> = (1..n)
            .map(|i| (names[i - 1].clone(), names[i].clone()))
            .collect();
        Algebra::heyting(Lattice::from_poset(Poset::from_covers(&names, &covers).unwrap()).unwrap())
            .unwrap()
    }

    fn identity_quantifiers(a: &Algebra) -> Algebra {
        let id: Vec<Elem> = (0..a.size()).collect();
        a.with_quantifiers(id.clone(), Some(id)).unwrap()
    }

    #[test]
    fn twist_of_two_chain_is_a_centered_three_chain() {
        let tw = build_twist(&chain(2)).unwrap();
        assert_eq!(tw.result.names(), ["(0,0)", "(0,1)", "(1,0)"]);
        assert!(tw.result.lattice().is_chain());
        let c = tw.result.center().unwrap();
        assert_eq!(tw.result.label(c), "(0,0)");
        assert_eq!(tw.result.label(tw.result.bot()), "(0,1)");
        assert_eq!(tw.result.label(tw.result.top()), "(1,0)");
    }

    #[test]
    fn twist_of_three_chain() {
        let tw = build_twist(&chain(3)).unwrap();
        assert_eq!(tw.result.names(), ["(0,0)", "(0,m)", "(0,1)", "(m,0)", "(1,0)"]);
        let ca = center_algebra(&tw.result).unwrap();
        let labels: Vec<&str> = ca.inclusion.iter().map(|&x| tw.result.label(x)).collect();
        assert_eq!(labels, ["(0,0)", "(m,0)", "(1,0)"]);
        assert!(ca.algebra.lattice().is_chain());
    }

    #[test]
    fn alpha_and_beta_on_chains() {
        let g = identity_quantifiers(&chain(3));
        let a = alpha(&g).unwrap();
        assert!(a.is_bijective());
        assert_eq!(a.target.label(a.apply(0)), "(0,0)");
        assert_eq!(a.target.label(a.apply(1)), "(m,0)");
        assert_eq!(a.target.label(a.apply(2)), "(1,0)");
        assert_eq!(a.apply(0), a.target.bot());

        let t = build_twist(&chain(2)).unwrap().result;
        let b = beta(&t).unwrap();
        let c = t.center().unwrap();
        let k = &b.target;
        assert_eq!(b.apply(c), k.center().unwrap());
        assert_eq!(b.apply(t.top()), k.top());
        assert_eq!(b.apply(t.bot()), k.bot());
        assert_eq!(k.label(b.apply(t.bot())), "((0,0),(1,0))");
    }

    #[test]
    fn center_needs_a_center() {
        assert!(matches!(center_algebra(&chain(3)), Err(TwistError::NoCenter)));
    }

    #[test]
    fn ck_on_kleene_chain() {
        let t = build_twist(&chain(2)).unwrap().result;
        assert!(check_ck(&t).unwrap().passed());
    }

    #[test]
    fn lift_collapse() {
        let f = Homomorphism::new(
            identity_quantifiers(&chain(3)),
            identity_quantifiers(&chain(2)),
            vec![0, 1, 1],
        )
        .unwrap();
        let kf = lift_hom(&f).unwrap();
        let (s, t) = (&kf.source, &kf.target);
        let at = |l: &str| s.index_of(l).unwrap();
        assert_eq!(t.label(kf.apply(at("(0,m)"))), "(0,1)");
        assert_eq!(t.label(kf.apply(at("(m,0)"))), "(1,0)");
        assert!(check_alpha_naturality(&f).unwrap().passed());

        let cf = drop_hom(&kf).unwrap();
        assert_eq!(cf.map, vec![0, 1, 1]);
        assert!(check_beta_naturality(&kf).unwrap().passed());
    }

    #[test]
    fn identity_lifts_to_identity() {
        let g = identity_quantifiers(&chain(3));
        let id = Homomorphism::identity(&g);
        let k = lift_hom(&id).unwrap();
        assert_eq!(k.map, (0..5).collect::<Vec<_>>());
        let d = drop_hom(&k).unwrap();
        assert_eq!(d.map, vec![0, 1, 2]);
    }

    #[test]
    fn drop_rejects_non_homomorphisms() {
        let t = build_twist(&chain(2)).unwrap().result;
        let top = t.top();
        let f = Homomorphism::new(t.clone(), t, vec![top; 3]).unwrap();
        assert!(matches!(drop_hom(&f), Err(TwistError::Hom(_))));
    }
}
