//! Subtyping, quantifier instantiation, and the bounded modality.

use super::env::{FreshGen, TypeEnv};
use super::TypeError;
use crate::index::{
    entails, eval_closed, expect_size, sort_check, sort_of, Constraint, Entailment, Origin, Rel,
    Valuation,
};
use crate::syntax::ast::{Index, Sort, Span, Type};
use crate::syntax::{pretty_index, pretty_type};

/// Capture-avoiding substitution of an index for a variable throughout a
/// type. Binders shadow; a binder whose name occurs free in the replacement
/// is renamed first.
pub fn subst_index_in_type(ty: &Type, var: &str, replacement: &Index) -> Type {
    let subst_ix = |ix: &Index| crate::index::subst_unchecked(ix, var, replacement);
    match ty {
        Type::Real => Type::Real,
        Type::Unit => Type::Unit,
        Type::Nat(ix) => Type::Nat(subst_ix(ix)),
        Type::List(ix, elem) => Type::List(
            subst_ix(ix),
            Box::new(subst_index_in_type(elem, var, replacement)),
        ),
        Type::Tensor(a, b) => Type::tensor(
            subst_index_in_type(a, var, replacement),
            subst_index_in_type(b, var, replacement),
        ),
        Type::Bang(ix, body) => Type::Bang(
            subst_ix(ix),
            Box::new(subst_index_in_type(body, var, replacement)),
        ),
        Type::Arrow(a, b) => Type::arrow(
            subst_index_in_type(a, var, replacement),
            subst_index_in_type(b, var, replacement),
        ),
        Type::Forall(v, sort, body) => {
            if v == var {
                return ty.clone();
            }
            let (v, body) = avoid_capture(v, body, replacement);
            Type::Forall(v, *sort, Box::new(subst_index_in_type(&body, var, replacement)))
        }
        Type::BoundedBang(v, bound, body) => {
            let bound = subst_ix(bound);
            if v == var {
                return Type::BoundedBang(v.clone(), bound, body.clone());
            }
            let (v, body) = avoid_capture(v, body, replacement);
            Type::BoundedBang(v, bound, Box::new(subst_index_in_type(&body, var, replacement)))
        }
    }
}

fn avoid_capture(binder: &str, body: &Type, replacement: &Index) -> (String, Type) {
    let replacement_vars = replacement.free_vars();
    if !replacement_vars.iter().any(|(n, _)| n == binder) {
        return (binder.to_string(), body.clone());
    }
    let body_vars = body.free_index_vars();
    let sort = body_vars
        .iter()
        .find(|(n, _)| n == binder)
        .map(|(_, s)| *s)
        .unwrap_or(Sort::Size);
    let mut candidate = format!("{binder}'");
    while replacement_vars.iter().any(|(n, _)| *n == candidate)
        || body_vars.iter().any(|(n, _)| *n == candidate)
    {
        candidate.push('\'');
    }
    let renamed = subst_index_in_type(body, binder, &Index::Var(candidate.clone(), sort));
    (candidate, renamed)
}

/// Instantiate a quantified type at an index. `Size` embeds into `Sens`.
pub fn instantiate_forall(ty: &Type, arg: &Index) -> Result<Type, TypeError> {
    let Type::Forall(var, sort, body) = ty else {
        return Err(TypeError::NotAQuantifier {
            ty: pretty_type(ty),
            span: Span::DUMMY,
        });
    };
    let arg_sort = sort_of(arg).map_err(|err| TypeError::Sort {
        err,
        span: Span::DUMMY,
    })?;
    if *sort == Sort::Size && arg_sort == Sort::Sens {
        return Err(TypeError::IndexSort {
            want: *sort,
            got: arg_sort,
            index: pretty_index(arg),
            span: Span::DUMMY,
        });
    }
    Ok(subst_index_in_type(body, var, arg))
}

/// Expand a closed-bound bounded modality into the right-nested tensor of
/// its instances: one copy of the body for each value of the bound variable.
/// A bound of 0 yields `Unit`, a bound of 1 just the instance at 0.
pub fn expand_bounded(ty: &Type) -> Result<Type, TypeError> {
    let Type::BoundedBang(var, bound, body) = ty else {
        return Err(TypeError::NotBounded {
            ty: pretty_type(ty),
            span: Span::DUMMY,
        });
    };
    if !bound.is_closed() {
        return Err(TypeError::OpenBound {
            bound: pretty_index(bound),
            span: Span::DUMMY,
        });
    }
    let count = eval_closed(bound, &Valuation::default())
        .and_then(|v| v.as_nat())
        .ok_or_else(|| TypeError::OpenBound {
            bound: pretty_index(bound),
            span: Span::DUMMY,
        })?;
    if count == 0 {
        return Ok(Type::Unit);
    }
    let instance = |k: u64| subst_index_in_type(body, var, &Index::Nat(k));
    let mut out = instance(count - 1);
    for k in (0..count - 1).rev() {
        out = Type::tensor(instance(k), out);
    }
    Ok(out)
}

/// Grade view of a type: `![I] A` is `(I, A)`, anything else is itself at
/// grade 1 (the metric of `A` and `![1] A` agree).
pub fn split_bang(ty: &Type) -> (Index, &Type) {
    match ty {
        Type::Bang(grade, body) => (grade.clone(), body),
        other => (Index::Nat(1), other),
    }
}

/// Replace closed-bound bounded modalities by their tensor expansion until
/// another constructor surfaces. Open bounds are left to the congruence
/// rule in `subtype`.
fn resolve_bounded(ty: &Type) -> Type {
    let mut current = ty.clone();
    while let Type::BoundedBang(_, bound, _) = &current {
        if !bound.is_closed() {
            break;
        }
        match expand_bounded(&current) {
            Ok(expanded) => current = expanded,
            Err(_) => break,
        }
    }
    current
}

/// Compute the constraints under which `sub <: sup`.
///
/// `Nat` and `List` indices are invariant (equalities); `![I] A <: ![J] B`
/// asks `J ≤ I` (a grade budget may be forgotten); arrows are contravariant
/// in the domain.
pub fn subtype(
    env: &TypeEnv,
    fresh: &mut FreshGen,
    sub: &Type,
    sup: &Type,
    origin: Origin,
) -> Result<Vec<Constraint>, TypeError> {
    let sub = resolve_bounded(sub);
    let sup = resolve_bounded(sup);
    let mismatch = || TypeError::Mismatch {
        expected: pretty_type(&sup),
        found: pretty_type(&sub),
        rule: origin.rule,
        span: origin.span,
    };
    let con = |rel: Rel, lhs: &Index, rhs: &Index| {
        Constraint::new(
            env.assumptions.clone(),
            rel,
            lhs.clone(),
            rhs.clone(),
            origin,
        )
    };
    match (&sub, &sup) {
        (Type::Real, Type::Real) | (Type::Unit, Type::Unit) => Ok(Vec::new()),
        (Type::Nat(i), Type::Nat(j)) => Ok(vec![con(Rel::Eq, i, j)]),
        (Type::List(i, a), Type::List(j, b)) => {
            let mut out = vec![con(Rel::Eq, i, j)];
            out.extend(subtype(env, fresh, a, b, origin)?);
            Ok(out)
        }
        (Type::Tensor(a1, a2), Type::Tensor(b1, b2)) => {
            let mut out = subtype(env, fresh, a1, b1, origin)?;
            out.extend(subtype(env, fresh, a2, b2, origin)?);
            Ok(out)
        }
        (Type::Bang(..), _) | (_, Type::Bang(..)) => {
            let (grade_sub, body_sub) = split_bang(&sub);
            let (grade_sup, body_sup) = split_bang(&sup);
            let mut out = vec![con(Rel::Le, &grade_sup, &grade_sub)];
            out.extend(subtype(env, fresh, body_sub, body_sup, origin)?);
            Ok(out)
        }
        (Type::Arrow(d1, c1), Type::Arrow(d2, c2)) => {
            let mut out = subtype(env, fresh, d2, d1, origin)?;
            out.extend(subtype(env, fresh, c1, c2, origin)?);
            Ok(out)
        }
        (Type::Forall(v1, s1, b1), Type::Forall(v2, s2, b2)) => {
            if s1 != s2 {
                return Err(mismatch());
            }
            let w = fresh.fresh(v1);
            let fresh_var = Index::Var(w, *s1);
            let b1 = subst_index_in_type(b1, v1, &fresh_var);
            let b2 = subst_index_in_type(b2, v2, &fresh_var);
            subtype(env, fresh, &b1, &b2, origin)
        }
        (Type::BoundedBang(v1, i1, b1), Type::BoundedBang(v2, i2, b2)) => {
            // Open bounds: syntactic congruence.
            let mut out = vec![con(Rel::Eq, i1, i2)];
            let w = fresh.fresh(v1);
            let fresh_var = Index::Var(w, Sort::Size);
            let b1 = subst_index_in_type(b1, v1, &fresh_var);
            let b2 = subst_index_in_type(b2, v2, &fresh_var);
            out.extend(subtype(env, fresh, &b1, &b2, origin)?);
            Ok(out)
        }
        _ => Err(mismatch()),
    }
}

/// Decide a subtyping judgment outright by running the solver on the
/// generated constraints.
pub fn subtype_holds(env: &TypeEnv, sub: &Type, sup: &Type) -> bool {
    let origin = Origin {
        span: Span::DUMMY,
        rule: "subtype",
    };
    let mut fresh = FreshGen::default();
    match subtype(env, &mut fresh, sub, sup, origin) {
        Ok(constraints) => constraints
            .iter()
            .all(|c| entails(c) == Entailment::Yes),
        Err(_) => false,
    }
}

/// Well-formedness of a type in an environment: every index variable bound
/// with a consistent sort, `Nat`/`List` indices and bounds size-sorted.
pub fn well_formed_type(ty: &Type, env: &TypeEnv, span: Span) -> Result<(), TypeError> {
    let sort_err = |err| TypeError::Sort { err, span };
    match ty {
        Type::Real | Type::Unit => Ok(()),
        Type::Nat(ix) => expect_size(ix, &env.index_vars).map_err(sort_err),
        Type::List(ix, elem) => {
            expect_size(ix, &env.index_vars).map_err(sort_err)?;
            well_formed_type(elem, env, span)
        }
        Type::Tensor(a, b) | Type::Arrow(a, b) => {
            well_formed_type(a, env, span)?;
            well_formed_type(b, env, span)
        }
        Type::Bang(ix, body) => {
            sort_check(ix, &env.index_vars).map_err(sort_err)?;
            well_formed_type(body, env, span)
        }
        Type::Forall(v, sort, body) => {
            let inner = env.bind_index(v, *sort);
            well_formed_type(body, &inner, span)
        }
        Type::BoundedBang(v, bound, body) => {
            expect_size(bound, &env.index_vars).map_err(sort_err)?;
            let inner = env.bind_index(v, Sort::Size);
            well_formed_type(body, &inner, span)
        }
    }
}
