//! Maps between finite algebras and their preservation checks.

use thiserror::Error;

use crate::algebra::Algebra;
use crate::order::Elem;
use crate::report::{Binding, CheckReport, ElemRef, Witness};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum HomError {
    #[error("map has {found} entries for a source of size {expected}")]
    Length { expected: usize, found: usize },
    #[error("map sends `{0}` outside the target")]
    OutOfRange(String),
    #[error("cannot compose: target of the first map is not the source of the second")]
    NotComposable,
    #[error("not a homomorphism\n{0}")]
    NotAHomomorphism(Box<CheckReport>),
}

/// An element map `source -> target`. Nothing about it is trusted until
/// [`Homomorphism::verify`] says so.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Homomorphism {
    pub source: Algebra,
    pub target: Algebra,
    pub map: Vec<Elem>,
}

impl Homomorphism {
    pub fn new(source: Algebra, target: Algebra, map: Vec<Elem>) -> Result<Self, HomError> {
        if map.len() != source.size() {
            return Err(HomError::Length {
                expected: source.size(),
                found: map.len(),
            });
        }
        if let Some(x) = (0..map.len()).find(|&x| map[x] >= target.size()) {
            return Err(HomError::OutOfRange(source.label(x).to_string()));
        }
        Ok(Homomorphism {
            source,
            target,
            map,
        })
    }

    pub fn identity(a: &Algebra) -> Self {
        Homomorphism {
            source: a.clone(),
            target: a.clone(),
            map: (0..a.size()).collect(),
        }
    }

    pub fn apply(&self, x: Elem) -> Elem {
        self.map[x]
    }

    /// Checks every operation and constant the two algebras share; the
    /// first violation (operations in catalog order, arguments in index
    /// order) is the witness, with the two sides `f(op(..))` and
    /// `op(f(..))`.
    pub fn verify(&self) -> CheckReport {
        let (s, t, f) = (&self.source, &self.target, &self.map);
        let n = s.size();
        let bind = |var: &str, x: Elem| Binding {
            var: var.to_string(),
            elem: x,
            label: s.label(x).to_string(),
        };
        let fail = |op: &str, args: Vec<Binding>, l: Elem, r: Elem| {
            let mut w = Witness::new(args).with_clause(op);
            w.left = Some(ElemRef::new(l, t.label(l)));
            w.right = Some(ElemRef::new(r, t.label(r)));
            CheckReport::fail(w).with_subject("homomorphism")
        };
        for (c, e) in s.constants() {
            if let Some(te) = t.constant(c) {
                if f[e] != te {
                    return fail(c.name(), vec![], f[e], te);
                }
            }
        }
        for (op, table) in s.tables() {
            let Some(tt) = t.table(op) else { continue };
            let m = t.size();
            if op.arity() == 1 {
                for x in 0..n {
                    let (l, r) = (f[table[x]], tt[f[x]]);
                    if l != r {
                        return fail(op.name(), vec![bind("x", x)], l, r);
                    }
                }
            } else {
                for x in 0..n {
                    for y in 0..n {
                        let (l, r) = (f[table[x * n + y]], tt[f[x] * m + f[y]]);
                        if l != r {
                            return fail(op.name(), vec![bind("x", x), bind("y", y)], l, r);
                        }
                    }
                }
            }
        }
        CheckReport::pass().with_subject("homomorphism")
    }

    /// `self` if it verifies, otherwise the failing report.
    pub fn verified(self) -> Result<Self, HomError> {
        let r = self.verify();
        if r.passed() {
            Ok(self)
        } else {
            Err(HomError::NotAHomomorphism(Box::new(r)))
        }
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = vec![false; self.target.size()];
        self.map.iter().all(|&y| !std::mem::replace(&mut seen[y], true))
    }

    pub fn is_surjective(&self) -> bool {
        let mut hit = vec![false; self.target.size()];
        for &y in &self.map {
            hit[y] = true;
        }
        hit.into_iter().all(|h| h)
    }

    pub fn is_bijective(&self) -> bool {
        self.is_injective() && self.is_surjective()
    }

    /// Verifies preservation and bijectivity; a bijective homomorphism of
    /// finite algebras has a homomorphic inverse.
    pub fn check_isomorphism(&self) -> CheckReport {
        let r = self.verify();
        if r.failed() {
            return r;
        }
        if !self.is_bijective() {
            let note = if self.is_injective() {
                "map is not surjective"
            } else {
                "map is not injective"
            };
            return CheckReport::fail(Witness::new(vec![]).with_clause("bijective").with_note(note))
                .with_subject("isomorphism");
        }
        CheckReport::pass().with_subject("isomorphism")
    }

    /// `next ∘ self`.
    pub fn then(&self, next: &Homomorphism) -> Result<Homomorphism, HomError> {
        if self.target != next.source {
            return Err(HomError::NotComposable);
        }
        Ok(Homomorphism {
            source: self.source.clone(),
            target: next.target.clone(),
            map: self.map.iter().map(|&x| next.map[x]).collect(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::order::{Lattice, Poset};

    fn chain(n: usize) -> Algebra {
        let names: Vec<String> = (0..n).map(|i| i.to_string()).collect();
        let covers: Vec<(String, String)> = (1..n)
            .map(|i| (names[i - 1].clone(), names[i].clone()))
            .collect();
        let p = Poset::from_covers(&names, &covers).unwrap();
        Algebra::heyting(Lattice::from_poset(p).unwrap()).unwrap()
    }

    #[test]
    fn identity_is_an_isomorphism() {
        let a = chain(3);
        assert!(Homomorphism::identity(&a).check_isomorphism().passed());
    }

    #[test]
    fn collapse_is_a_homomorphism() {
        let f = Homomorphism::new(chain(3), chain(2), vec![0, 1, 1]).unwrap();
        assert!(f.verify().passed());
        assert!(f.is_surjective() && !f.is_injective());
        assert!(f.check_isomorphism().failed());
    }

    #[test]
    fn constant_map_fails_on_bot() {
        let f = Homomorphism::new(chain(2), chain(2), vec![1, 1]).unwrap();
        let r = f.verify();
        assert_eq!(r.clause.as_deref(), Some("bot"));
    }

    #[test]
    fn composition() {
        let f = Homomorphism::new(chain(3), chain(2), vec![0, 1, 1]).unwrap();
        let id = Homomorphism::identity(&chain(2));
        assert_eq!(f.then(&id).unwrap().map, f.map);
        assert!(id.then(&f).is_err());
        assert!(Homomorphism::new(chain(2), chain(2), vec![0]).is_err());
        assert!(Homomorphism::new(chain(2), chain(2), vec![0, 2]).is_err());
    }
}
