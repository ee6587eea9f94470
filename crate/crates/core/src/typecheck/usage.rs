//! Usage contexts: the algorithmic form of the graded linear context.
//!
//! A usage maps term variables to sensitivity grades; an absent entry is
//! grade 0. Grades are kept in polynomial canonical form so `1 + 1`
//! immediately reads back as `2`.

use crate::index::normalize;
use crate::syntax::ast::Index;
use std::collections::BTreeMap;

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Usage(BTreeMap<String, Index>);

impl Usage {
    pub fn empty() -> Usage {
        Usage::default()
    }

    pub fn single(var: &str, grade: Index) -> Usage {
        let mut u = Usage::empty();
        u.set(var, grade);
        u
    }

    fn set(&mut self, var: &str, grade: Index) {
        let nf = normalize(&grade);
        if nf.is_zero() {
            self.0.remove(var);
        } else {
            self.0.insert(var.to_string(), nf.to_index());
        }
    }

    /// The grade of `var`; 0 if absent.
    pub fn grade(&self, var: &str) -> Index {
        self.0.get(var).cloned().unwrap_or(Index::Nat(0))
    }

    /// Remove a variable, returning its grade (0 if absent).
    pub fn remove(&mut self, var: &str) -> Index {
        self.0.remove(var).unwrap_or(Index::Nat(0))
    }

    pub fn vars(&self) -> impl Iterator<Item = &String> {
        self.0.keys()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&String, &Index)> {
        self.0.iter()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Pointwise sum of two usage contexts; missing entries are 0.
pub fn ctx_add(left: &Usage, right: &Usage) -> Usage {
    let mut out = left.clone();
    for (var, grade) in right.iter() {
        let combined = Index::sum(out.grade(var), grade.clone());
        out.set(var, combined);
    }
    out
}

/// Scale every grade by a sensitivity index. Scaling by 0 empties the
/// context (0·∞ = 0), so an unused hypothesis is never poisoned.
pub fn ctx_scale(factor: &Index, usage: &Usage) -> Usage {
    let mut out = Usage::empty();
    for (var, grade) in usage.iter() {
        out.set(var, Index::prod(factor.clone(), grade.clone()));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::ast::Sort;

    #[test]
    fn add_merges_pointwise() {
        let one = Usage::single("x", Index::Nat(1));
        let sum = ctx_add(&one, &one);
        assert_eq!(sum.grade("x"), Index::Nat(2));

        let r = Usage::single("y", Index::var("r", Sort::Sens));
        let sum = ctx_add(&Usage::empty(), &r);
        assert_eq!(sum.grade("y"), Index::var("r", Sort::Sens));
    }

    #[test]
    fn infinity_absorbs_in_sums() {
        let inf = Usage::single("x", Index::Inf);
        let three = Usage::single("x", Index::Nat(3));
        assert_eq!(ctx_add(&inf, &three).grade("x"), Index::Inf);
    }

    #[test]
    fn scale_examples() {
        let u = Usage::single("x", Index::Nat(3));
        assert_eq!(ctx_scale(&Index::Nat(2), &u).grade("x"), Index::Nat(6));

        // 0 · {x ↦ ∞} drops the entry entirely.
        let inf = Usage::single("x", Index::Inf);
        let scaled = ctx_scale(&Index::Nat(0), &inf);
        assert!(scaled.is_empty());

        // r · {k ↦ i} has the iter grade shape.
        let u = Usage::single("k", Index::var("i", Sort::Size));
        let scaled = ctx_scale(&Index::var("r", Sort::Sens), &u);
        let nf = crate::index::normalize(&scaled.grade("k"));
        assert_eq!(
            nf,
            crate::index::normalize(&Index::prod(
                Index::var("r", Sort::Sens),
                Index::var("i", Sort::Size),
            ))
        );
    }
}
