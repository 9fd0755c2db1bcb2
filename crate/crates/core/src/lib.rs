//! Finite ordered algebras and the twist construction between monadic
//! Gödel algebras and monadic centered prelinear Nelson algebras.
//!
//! Everything is decided by exhaustive enumeration over small carriers:
//! axiom suites, the functors `K` and `C` with the natural maps `α` and
//! `β`, congruence lattices and their transfer maps, and quantifier and
//! counterexample search.
//!
//! ```
//! use twistbench_core::{build_twist, check_suite, CheckOptions, SuiteId};
//! use twistbench_core::io::{elaborate, parse_spec};
//!
//! let spec = parse_spec("algebra two { elements: 0 1  covers: 0<1  kind: godel }").unwrap();
//! let g = elaborate(&spec, false).unwrap().algebra;
//! let k = build_twist(&g).unwrap();
//! assert_eq!(k.result.names(), ["(0,0)", "(0,1)", "(1,0)"]);
//! let r = check_suite(&k.result, SuiteId::Nelson, CheckOptions::default()).unwrap();
//! assert!(r.passed());
//! ```

pub mod algebra;
pub mod congruence;
pub mod corpus;
pub mod formula;
pub mod hom;
pub mod io;
pub mod order;
pub mod report;
pub mod search;
pub mod twist;
pub mod varieties;

pub use algebra::{Algebra, AlgebraError, Const, Family, Op};
pub use congruence::{
    check_con_iso, check_lemma23_con, enumerate_congruences, enumerate_congruences_brute,
    gamma_theta, principal_congruence, theta_gamma, ConLattice, Congruence, CongruenceError,
};
pub use corpus::{godel_lattices, monadic_godel_corpus, CorpusEntry, GodelLattice};
pub use formula::{check_formula, eval_term, Env, Formula, Term};
pub use hom::{HomError, Homomorphism};
pub use order::{order_isomorphism, Bound, Elem, Lattice, OrderError, Poset};
pub use report::{Binding, CheckReport, ElemRef, Probe, Verdict, Witness};
pub use search::{
    enumerate_quantifier_pairs, find_counterexample, Mode, QuantifierAssignment, SearchError,
    DEFAULT_RAW_MAX_SIZE,
};
pub use twist::{
    alpha, beta, build_twist, center_algebra, check_alpha_naturality, check_beta_naturality,
    check_ck, drop_hom, lift_hom, CenterAlgebra, TwistAlgebra, TwistError,
};
pub use varieties::{
    check_si_status, check_suite, probe_clause, quantifier_range, suite, CheckOptions,
    QuantifierRange, SiStatus, SuiteError, SuiteId,
};
