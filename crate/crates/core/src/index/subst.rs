//! Sorting and substitution for index terms.

use crate::syntax::ast::{Index, Sort};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum SortError {
    #[error("unbound index variable `{0}`")]
    Unbound(String),
    #[error("index variable `{name}` used at sort {used} but bound at sort {bound}")]
    Conflict {
        name: String,
        used: Sort,
        bound: Sort,
    },
    #[error("size position contains a sensitivity expression `{0}`")]
    NotASize(String),
    #[error("power exponent must be size-sorted")]
    PowExponent,
    #[error("cannot substitute a sensitivity term for size variable `{0}`")]
    SubstMismatch(String),
}

fn join(a: Sort, b: Sort) -> Sort {
    if a == Sort::Size && b == Sort::Size {
        Sort::Size
    } else {
        Sort::Sens
    }
}

/// Sort of an index term, from the sorts its variables carry.
pub fn sort_of(index: &Index) -> Result<Sort, SortError> {
    match index {
        Index::Var(_, sort) => Ok(*sort),
        Index::Nat(_) => Ok(Sort::Size),
        Index::Rat(_) | Index::Inf => Ok(Sort::Sens),
        Index::Sum(a, b) | Index::Prod(a, b) => Ok(join(sort_of(a)?, sort_of(b)?)),
        Index::Pow(base, exp) => {
            sort_of(base)?;
            if sort_of(exp)? != Sort::Size {
                return Err(SortError::PowExponent);
            }
            Ok(Sort::Sens)
        }
    }
}

/// Sort of an index term, validating every variable against `env`.
/// `Size` embeds into `Sens`: a pure size expression may stand anywhere a
/// sensitivity is expected, not vice versa.
pub fn sort_check(index: &Index, env: &BTreeMap<String, Sort>) -> Result<Sort, SortError> {
    match index {
        Index::Var(name, used) => {
            let bound = env
                .get(name)
                .copied()
                .ok_or_else(|| SortError::Unbound(name.clone()))?;
            if bound != *used {
                return Err(SortError::Conflict {
                    name: name.clone(),
                    used: *used,
                    bound,
                });
            }
            Ok(bound)
        }
        Index::Nat(_) => Ok(Sort::Size),
        Index::Rat(_) | Index::Inf => Ok(Sort::Sens),
        Index::Sum(a, b) | Index::Prod(a, b) => {
            Ok(join(sort_check(a, env)?, sort_check(b, env)?))
        }
        Index::Pow(base, exp) => {
            sort_check(base, env)?;
            if sort_check(exp, env)? != Sort::Size {
                return Err(SortError::PowExponent);
            }
            Ok(Sort::Sens)
        }
    }
}

/// Require a size-sorted index (list lengths, `Nat` indices, bounds).
pub fn expect_size(index: &Index, env: &BTreeMap<String, Sort>) -> Result<(), SortError> {
    match sort_check(index, env)? {
        Sort::Size => Ok(()),
        Sort::Sens => Err(SortError::NotASize(crate::syntax::pretty_index(index))),
    }
}

/// Capture-free substitution of `replacement` for `var`. Index terms bind
/// nothing, so this is structural replacement plus a sort check: a size
/// variable only accepts size terms, a sensitivity variable accepts both.
pub fn subst_index(index: &Index, var: &str, replacement: &Index) -> Result<Index, SortError> {
    let target_sort = find_var_sort(index, var);
    if let Some(Sort::Size) = target_sort {
        if sort_of(replacement)? != Sort::Size {
            return Err(SortError::SubstMismatch(var.to_string()));
        }
    }
    Ok(subst_unchecked(index, var, replacement))
}

fn find_var_sort(index: &Index, var: &str) -> Option<Sort> {
    match index {
        Index::Var(name, sort) if name == var => Some(*sort),
        Index::Var(..) | Index::Nat(_) | Index::Rat(_) | Index::Inf => None,
        Index::Sum(a, b) | Index::Prod(a, b) | Index::Pow(a, b) => {
            find_var_sort(a, var).or_else(|| find_var_sort(b, var))
        }
    }
}

pub(crate) fn subst_unchecked(index: &Index, var: &str, replacement: &Index) -> Index {
    match index {
        Index::Var(name, _) if name == var => replacement.clone(),
        Index::Var(..) | Index::Nat(_) | Index::Rat(_) | Index::Inf => index.clone(),
        Index::Sum(a, b) => Index::sum(
            subst_unchecked(a, var, replacement),
            subst_unchecked(b, var, replacement),
        ),
        Index::Prod(a, b) => Index::prod(
            subst_unchecked(a, var, replacement),
            subst_unchecked(b, var, replacement),
        ),
        Index::Pow(a, b) => Index::pow(
            subst_unchecked(a, var, replacement),
            subst_unchecked(b, var, replacement),
        ),
    }
}
