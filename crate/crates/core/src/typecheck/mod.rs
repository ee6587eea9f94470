//! The graded linear type checker.
//!
//! Checking is two-phase: the syntax-directed rules in [`infer`] generate
//! index constraints, and the solver in [`crate::index`] discharges them.
//! A declaration is accepted exactly when every generated constraint gets a
//! `Yes`.

mod env;
mod infer;
mod prims;
mod program;
mod subtype;
mod usage;

pub use env::{FreshGen, TypeEnv};
pub use infer::{infer_term, Checker};
pub use prims::{prim_type, IterScheme};
pub use program::{check_program, CheckOptions, CheckResult, Verdict};
pub use subtype::{
    expand_bounded, instantiate_forall, split_bang, subst_index_in_type, subtype, subtype_holds,
    well_formed_type,
};
pub use usage::{ctx_add, ctx_scale, Usage};

use crate::index::SortError;
use crate::syntax::ast::{Sort, Span};
use thiserror::Error;

#[derive(Debug, Clone, Error)]
pub enum TypeError {
    #[error("{span}: unbound variable `{name}`")]
    UnboundVar { name: String, span: Span },
    #[error("{span}: cannot apply a value of type `{ty}`")]
    NotAFunction { ty: String, span: Span },
    #[error("{span}: type `{ty}` needs an index application `@[...]` before use")]
    NeedsIndexApp { ty: String, span: Span },
    #[error("{span}: index application to a non-quantifier of type `{ty}`")]
    NotAQuantifier { ty: String, span: Span },
    #[error("{span}: type mismatch (rule {rule}): expected `{expected}`, found `{found}`")]
    Mismatch {
        expected: String,
        found: String,
        rule: &'static str,
        span: Span,
    },
    #[error("{span}: {err}")]
    Sort { err: SortError, span: Span },
    #[error("{span}: scrutinee must have type {want}, found `{ty}`")]
    Scrutinee {
        want: &'static str,
        ty: String,
        span: Span,
    },
    #[error("{span}: `let (x, y) = ...` needs a tensor, found `{ty}`")]
    LetPairRhs { ty: String, span: Span },
    #[error("{span}: bounded modality with open bound `{bound}` is unsupported")]
    OpenBound { bound: String, span: Span },
    #[error("{span}: expected a bounded modality, found `{ty}`")]
    NotBounded { ty: String, span: Span },
    #[error("{span}: index `{index}` has sort {got} where {want} is required")]
    IndexSort {
        want: Sort,
        got: Sort,
        index: String,
        span: Span,
    },
    #[error("{span}: branches have incompatible types `{first}` and `{second}`; annotate the enclosing declaration")]
    BranchJoin {
        first: String,
        second: String,
        span: Span,
    },
    #[error("{span}: no live branch in case expression")]
    EmptyCase { span: Span },
}

impl TypeError {
    pub fn span(&self) -> Span {
        match self {
            TypeError::UnboundVar { span, .. }
            | TypeError::NotAFunction { span, .. }
            | TypeError::NeedsIndexApp { span, .. }
            | TypeError::NotAQuantifier { span, .. }
            | TypeError::Mismatch { span, .. }
            | TypeError::Sort { span, .. }
            | TypeError::Scrutinee { span, .. }
            | TypeError::LetPairRhs { span, .. }
            | TypeError::OpenBound { span, .. }
            | TypeError::NotBounded { span, .. }
            | TypeError::IndexSort { span, .. }
            | TypeError::BranchJoin { span, .. }
            | TypeError::EmptyCase { span } => *span,
        }
    }

    /// Fill in the span on errors constructed away from a source position.
    pub fn at(mut self, at: Span) -> TypeError {
        let span = match &mut self {
            TypeError::UnboundVar { span, .. }
            | TypeError::NotAFunction { span, .. }
            | TypeError::NeedsIndexApp { span, .. }
            | TypeError::NotAQuantifier { span, .. }
            | TypeError::Mismatch { span, .. }
            | TypeError::Sort { span, .. }
            | TypeError::Scrutinee { span, .. }
            | TypeError::LetPairRhs { span, .. }
            | TypeError::OpenBound { span, .. }
            | TypeError::NotBounded { span, .. }
            | TypeError::IndexSort { span, .. }
            | TypeError::BranchJoin { span, .. }
            | TypeError::EmptyCase { span } => span,
        };
        if *span == Span::DUMMY {
            *span = at;
        }
        self
    }
}
