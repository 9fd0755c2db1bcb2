//! Brute-force generation of small distributive lattices and of every
//! monadic Gödel algebra on them.
//!
//! Lattices are enumerated as order relations whose linear extension is
//! the index order, with `0` first and `1` last, and deduplicated by the
//! lexicographically least order matrix over all element permutations.

use std::collections::BTreeSet;

use itertools::Itertools;

use crate::algebra::{Algebra, Op};
use crate::hom::Homomorphism;
use crate::order::{Elem, Lattice, Poset};
use crate::search::{enumerate_quantifier_pairs, Mode, QuantifierAssignment, SearchError};
use crate::varieties::SuiteId;

/// A named Gödel lattice of the corpus.
#[derive(Debug, Clone)]
pub struct GodelLattice {
    pub name: String,
    pub algebra: Algebra,
}

/// One monadic Gödel algebra of the corpus.
#[derive(Debug, Clone)]
pub struct CorpusEntry {
    /// `<lattice>/q<k>`, with `k` counting from 1 in search order.
    pub name: String,
    pub lattice: String,
    pub quantifiers: QuantifierAssignment,
    pub algebra: Algebra,
}

fn element_names(n: usize) -> Vec<String> {
    (0..n)
        .map(|i| match i {
            0 => "0".to_string(),
            i if i == n - 1 => "1".to_string(),
            i => ((b'a' + (i - 1) as u8) as char).to_string(),
        })
        .collect()
}

/// The permutation-invariant key of an order matrix.
pub fn canonical_key(leq: &[Vec<bool>]) -> Vec<bool> {
    let n = leq.len();
    (0..n)
        .permutations(n)
        .map(|p| {
            (0..n)
                .flat_map(|i| (0..n).map(move |j| (i, j)))
                .map(|(i, j)| leq[p[i]][p[j]])
                .collect::<Vec<bool>>()
        })
        .min()
        .unwrap_or_default()
}

/// Distributive lattices with `1..=max_size` elements up to isomorphism,
/// by size and then generation order.
pub fn distributive_lattices(max_size: usize) -> Vec<Lattice> {
    let mut out = Vec::new();
    for n in 1..=max_size {
        let names = element_names(n);
        let free: Vec<(usize, usize)> = (1..n.saturating_sub(1))
            .tuple_combinations()
            .collect();
        let mut seen = BTreeSet::new();
        for mask in 0u64..(1u64 << free.len()) {
            let mut leq = vec![vec![false; n]; n];
            for (i, row) in leq.iter_mut().enumerate() {
                row[i] = true;
                row[n - 1] = true;
            }
            leq[0].fill(true);
            for (k, &(i, j)) in free.iter().enumerate() {
                leq[i][j] = mask >> k & 1 == 1;
            }
            let Ok(poset) = Poset::from_leq(names.clone(), &leq) else {
                continue;
            };
            let Ok(lattice) = Lattice::from_poset(poset) else {
                continue;
            };
            if lattice.check_distributive().failed() {
                continue;
            }
            if seen.insert(canonical_key(&leq)) {
                out.push(lattice);
            }
        }
    }
    out
}

fn is_prelinear(a: &Algebra) -> bool {
    let n = a.size();
    (0..n).all(|x| {
        (0..n).all(|y| a.apply2(Op::Join, a.apply2(Op::Himp, x, y), a.apply2(Op::Himp, y, x)) == a.top())
    })
}

/// The distributive lattices up to `max_size` whose Heyting algebra is
/// prelinear. Chains are named `C<n>`, the rest `L<n>.<k>`.
pub fn godel_lattices(max_size: usize) -> Vec<GodelLattice> {
    let mut out: Vec<GodelLattice> = Vec::new();
    for lattice in distributive_lattices(max_size) {
        let n = lattice.size();
        let chain = lattice.is_chain();
        let algebra = Algebra::heyting(lattice).expect("finite distributive lattices are Heyting");
        if !is_prelinear(&algebra) {
            continue;
        }
        let name = if chain {
            format!("C{n}")
        } else {
            let k = out
                .iter()
                .filter(|g| g.algebra.size() == n && !g.name.starts_with('C'))
                .count()
                + 1;
            format!("L{n}.{k}")
        };
        out.push(GodelLattice { name, algebra });
    }
    out
}

/// Every monadic Gödel algebra on the Gödel lattices up to `max_size`,
/// with quantifiers from subalgebra-mode search.
pub fn monadic_godel_corpus(max_size: usize) -> Result<Vec<CorpusEntry>, SearchError> {
    let mut out = Vec::new();
    for g in godel_lattices(max_size) {
        let pairs = enumerate_quantifier_pairs(&g.algebra, Mode::Subalgebra, SuiteId::MonadicGodel, max_size)?;
        for (k, q) in pairs.into_iter().enumerate() {
            let algebra = q.apply(&g.algebra)?;
            out.push(CorpusEntry {
                name: format!("{}/q{}", g.name, k + 1),
                lattice: g.name.clone(),
                quantifiers: q,
                algebra,
            });
        }
    }
    Ok(out)
}

/// Every homomorphism `a → b` (all shared operations and constants
/// preserved), by brute force over maps fixing the bounds.
pub fn homomorphisms(a: &Algebra, b: &Algebra) -> Vec<Homomorphism> {
    let (n, m) = (a.size(), b.size());
    let mut out = Vec::new();
    let mut map = vec![0; n];
    let mut rec = |map: &mut Vec<Elem>| {
        let h = Homomorphism::new(a.clone(), b.clone(), map.clone()).expect("in range");
        if h.verify().passed() {
            out.push(h);
        }
    };
    fn go(i: usize, m: usize, fixed: &[(Elem, Elem)], map: &mut Vec<Elem>, rec: &mut dyn FnMut(&mut Vec<Elem>)) {
        if i == map.len() {
            rec(map);
            return;
        }
        if let Some(&(_, v)) = fixed.iter().find(|&&(x, _)| x == i) {
            map[i] = v;
            go(i + 1, m, fixed, map, rec);
            return;
        }
        for v in 0..m {
            map[i] = v;
            go(i + 1, m, fixed, map, rec);
        }
    }
    let fixed = [(a.bot(), b.bot()), (a.top(), b.top())];
    // a one-element source has bot = top, which must then agree in b
    if a.bot() == a.top() && b.bot() != b.top() {
        return out;
    }
    go(0, m, &fixed, &mut map, &mut rec);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lattice_counts() {
        let counts: Vec<usize> = (1..=5)
            .map(|n| distributive_lattices(n).iter().filter(|l| l.size() == n).count())
            .collect();
        // 1, 1, 1, 2 (chain, square), 3 (chain, square with new bottom or top)
        assert_eq!(counts, vec![1, 1, 1, 2, 3]);
    }

    #[test]
    fn godel_lattices_up_to_five() {
        let names: Vec<String> = godel_lattices(5).into_iter().map(|g| g.name).collect();
        assert_eq!(names, ["C1", "C2", "C3", "L4.1", "C4", "L5.1", "C5"]);
        let l51 = godel_lattices(5).into_iter().find(|g| g.name == "L5.1").unwrap();
        // the square sits on top of a new bottom
        let a = &l51.algebra;
        assert!(a.lattice().poset().covers().len() == 5);
        let atoms = (0..5).filter(|&x| x != a.bot() && a.lattice().poset().covers().contains(&(a.bot(), x))).count();
        assert_eq!(atoms, 1);
    }

    #[test]
    fn canonical_key_is_invariant() {
        let chain = vec![
            vec![true, true, true],
            vec![false, true, true],
            vec![false, false, true],
        ];
        // the same chain listed as middle, bottom, top
        let relabelled = vec![
            vec![true, false, true],
            vec![true, true, true],
            vec![false, false, true],
        ];
        assert_eq!(canonical_key(&chain), canonical_key(&relabelled));
    }

    #[test]
    fn homomorphisms_between_chains() {
        let c = godel_lattices(3);
        let (c2, c3) = (&c[1].algebra, &c[2].algebra);
        // onto 2-chain: collapse {m,1} only (collapsing {0,m} breaks ⇒)
        assert_eq!(homomorphisms(c3, c2).len(), 1);
        // into 3-chain: 0↦0, 1↦1 only
        assert_eq!(homomorphisms(c2, c3).len(), 1);
    }
}
