use std::sync::OnceLock;

use proptest::prelude::*;
use twistbench_core::congruence::is_congruence;
use twistbench_core::corpus::{canonical_key, distributive_lattices};
use twistbench_core::io::{export_algebra, import_algebra, parse_formula, to_canonical_string};
use twistbench_core::{
    build_twist, eval_term, Lattice, monadic_godel_corpus, Congruence, CorpusEntry, Elem, Env, Formula,
    Op, Term, TwistAlgebra,
};

fn corpus() -> &'static [(CorpusEntry, TwistAlgebra)] {
    static C: OnceLock<Vec<(CorpusEntry, TwistAlgebra)>> = OnceLock::new();
    C.get_or_init(|| {
        monadic_godel_corpus(5)
            .unwrap()
            .into_iter()
            .map(|e| {
                let k = build_twist(&e.algebra).unwrap();
                (e, k)
            })
            .collect()
    })
}

fn lattices() -> &'static [Lattice] {
    static L: OnceLock<Vec<Lattice>> = OnceLock::new();
    L.get_or_init(|| distributive_lattices(6))
}

/// A lattice index with a permutation of its carrier.
fn labelled_lattice() -> impl Strategy<Value = (usize, Vec<usize>)> {
    (0..lattices().len()).prop_flat_map(|i| {
        let n = lattices()[i].size();
        (Just(i), Just((0..n).collect::<Vec<_>>()).prop_shuffle())
    })
}

const NELSON_UNARY: [Op; 3] = [Op::Neg, Op::Exists, Op::Forall];
const NELSON_BINARY: [Op; 3] = [Op::Join, Op::Meet, Op::Nimp];

fn nelson_term() -> impl Strategy<Value = Term> {
    let leaf = prop_oneof![Just(Term::var("x")), Just(Term::var("y")), Just(Term::var("z"))];
    leaf.prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            (0..3usize, inner.clone()).prop_map(|(i, t)| Term::unary(NELSON_UNARY[i], t)),
            (0..3usize, inner.clone(), inner).prop_map(|(i, l, r)| Term::binary(NELSON_BINARY[i], l, r)),
        ]
    })
}

/// The pair a term denotes in `K(A)`, computed in `A` alone.
fn pair_eval(k: &TwistAlgebra, t: &Term, env: &[(Elem, Elem); 3]) -> (Elem, Elem) {
    let g = &k.base;
    let ex = g.table(Op::Exists).unwrap();
    let fa = g.table(Op::Forall).unwrap();
    match t {
        Term::Var(v) => env[["x", "y", "z"].iter().position(|w| w == v).unwrap()],
        Term::Op(op, args) => {
            let p = pair_eval(k, &args[0], env);
            if args.len() == 1 {
                return match op {
                    Op::Neg => (p.1, p.0),
                    Op::Exists => (ex[p.0], fa[p.1]),
                    Op::Forall => (fa[p.0], ex[p.1]),
                    _ => unreachable!(),
                };
            }
            let q = pair_eval(k, &args[1], env);
            match op {
                Op::Join => (g.apply2(Op::Join, p.0, q.0), g.apply2(Op::Meet, p.1, q.1)),
                Op::Meet => (g.apply2(Op::Meet, p.0, q.0), g.apply2(Op::Join, p.1, q.1)),
                Op::Nimp => (g.apply2(Op::Himp, p.0, q.0), g.apply2(Op::Meet, p.0, q.1)),
                _ => unreachable!(),
            }
        }
        Term::Const(_) => unreachable!(),
    }
}

proptest! {
    #[test]
    fn twist_terms_evaluate_componentwise(
        entry in 0..21usize,
        t in nelson_term(),
        picks in prop::array::uniform3(0..64usize),
    ) {
        let (_, k) = &corpus()[entry % corpus().len()];
        let xs = picks.map(|p| p % k.size());
        let env = Env::from_pairs(&[("x", xs[0]), ("y", xs[1]), ("z", xs[2])]);
        let got = eval_term(&k.result, &t, &env).unwrap();
        let want = pair_eval(k, &t, &xs.map(|x| k.pair(x)));
        prop_assert_eq!(k.pair(got), want);
    }

    #[test]
    fn formulas_print_and_parse_back(l in nelson_term(), r in nelson_term()) {
        let f = Formula::forall_all(&["x", "y", "z"], Formula::Eq(l, r));
        prop_assert_eq!(parse_formula(&f.to_string()).unwrap(), f);
    }

    #[test]
    fn partition_meet_and_join_bound(a in prop::collection::vec(0..4u8, 1..8), b in prop::collection::vec(0..4u8, 1..8)) {
        let n = a.len().min(b.len());
        let (p, q) = (Congruence::from_blocks(&a[..n]), Congruence::from_blocks(&b[..n]));
        let (m, j) = (p.meet(&q), p.join(&q));
        prop_assert!(m.leq(&p) && m.leq(&q));
        prop_assert!(p.leq(&j) && q.leq(&j));
        prop_assert_eq!(Congruence::from_blocks(&p.blocks), p.clone());
        prop_assert_eq!(p.join(&p), p);
    }

    #[test]
    fn join_of_congruences_is_a_congruence(entry in 0..21usize, x in 0..64usize, y in 0..64usize, u in 0..64usize, v in 0..64usize) {
        let (e, _) = &corpus()[entry % corpus().len()];
        let a = &e.algebra;
        let n = a.size();
        let p = twistbench_core::principal_congruence(a, x % n, y % n);
        let q = twistbench_core::principal_congruence(a, u % n, v % n);
        prop_assert!(is_congruence(a, &p.join(&q)));
        prop_assert!(is_congruence(a, &p.meet(&q)));
    }

    #[test]
    fn json_round_trip(entry in 0..21usize, twisted in any::<bool>()) {
        let (e, k) = &corpus()[entry % corpus().len()];
        let a = if twisted { &k.result } else { &e.algebra };
        let v = export_algebra(a);
        prop_assert_eq!(&import_algebra(&v).unwrap(), a);
        let text = to_canonical_string(&v);
        let again: serde_json::Value = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(to_canonical_string(&again), text);
    }

    #[test]
    fn canonical_key_ignores_labelling((which, order) in labelled_lattice()) {
        let leq = lattices()[which].poset().leq_matrix();
        let n = leq.len();
        let permuted: Vec<Vec<bool>> = (0..n).map(|i| (0..n).map(|j| leq[order[i]][order[j]]).collect()).collect();
        prop_assert_eq!(canonical_key(&permuted), canonical_key(&leq));
    }
}
