//! Fixtures shared by the benchmarks.

use twistbench_core::io::{elaborate, parse_spec};
use twistbench_core::{build_twist, monadic_godel_corpus, Algebra, TwistAlgebra};

pub const REMARK: &str = include_str!("../../../algebras/remark.alg");

pub fn remark() -> Algebra {
    let spec = parse_spec(REMARK).expect("bundled sample parses");
    elaborate(&spec, false).expect("bundled sample elaborates").algebra
}

pub fn remark_twist() -> TwistAlgebra {
    build_twist(&remark()).expect("the Remark algebra is Heyting")
}

/// The twist of a corpus algebra with the largest twist.
pub fn largest_corpus_twist() -> TwistAlgebra {
    let corpus = monadic_godel_corpus(5).expect("corpus generation succeeds");
    let g = corpus
        .iter()
        .max_by_key(|e| build_twist(&e.algebra).map(|k| k.size()).unwrap_or(0))
        .expect("corpus is non-empty");
    build_twist(&g.algebra).expect("corpus algebras are Gödel")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures_build() {
        assert_eq!(remark().size(), 5);
        assert_eq!(remark_twist().size(), 9);
        assert_eq!(largest_corpus_twist().size(), 9);
    }
}
