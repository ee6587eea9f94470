//! Deterministic random generators for programs, types, values,
//! constraints and valuations.
//!
//! Generated programs are exactly parser-shaped: index variables are only
//! used under binders that declare their sort, so a pretty-printed
//! generated program always re-parses.

use crate::index::{eval_closed, Constraint, Extended, Origin, Rel, Valuation};
use crate::semantics::Value;
use crate::syntax::ast::{Decl, Index, Prim, Program, Sort, Span, Term, TermKind, Type};
use num::BigRational;
use rand::Rng;
use std::collections::BTreeSet;

fn gen_rational(rng: &mut impl Rng) -> BigRational {
    // Denominators of the form 10^k keep literals printable in decimal.
    let numer = rng.gen_range(0..200u32);
    let scale = 10u32.pow(rng.gen_range(0..=2));
    BigRational::new(numer.into(), scale.into())
}

/// A sort-correct random index over the given scope.
pub fn gen_index(rng: &mut impl Rng, depth: u32, scope: &[(String, Sort)], want: Sort) -> Index {
    if depth > 0 {
        match rng.gen_range(0..8) {
            0 | 1 => {
                return Index::sum(
                    gen_index(rng, depth - 1, scope, want),
                    gen_index(rng, depth - 1, scope, want),
                )
            }
            2 | 3 => {
                return Index::prod(
                    gen_index(rng, depth - 1, scope, want),
                    gen_index(rng, depth - 1, scope, want),
                )
            }
            4 if want == Sort::Sens => {
                return Index::pow(
                    gen_index(rng, 0, scope, Sort::Sens),
                    gen_index(rng, 0, scope, Sort::Size),
                )
            }
            _ => {}
        }
    }
    let vars: Vec<&(String, Sort)> = scope
        .iter()
        .filter(|(_, s)| want == Sort::Sens || *s == Sort::Size)
        .collect();
    let choices = if want == Sort::Size { 2 } else { 4 };
    match rng.gen_range(0..choices) {
        1 if !vars.is_empty() => {
            let (name, sort) = vars[rng.gen_range(0..vars.len())];
            Index::Var(name.clone(), *sort)
        }
        0 | 1 => Index::Nat(rng.gen_range(0..10)),
        2 => Index::Rat(gen_rational(rng)),
        _ => Index::Inf,
    }
}

/// A well-scoped random type; binders introduce fresh index variables.
pub fn gen_type(
    rng: &mut impl Rng,
    depth: u32,
    scope: &mut Vec<(String, Sort)>,
    counter: &mut u32,
) -> Type {
    if depth == 0 {
        return match rng.gen_range(0..3) {
            0 => Type::Real,
            1 => Type::Unit,
            _ => Type::Nat(gen_index(rng, 1, scope, Sort::Size)),
        };
    }
    match rng.gen_range(0..10) {
        0 => Type::Real,
        1 => Type::Unit,
        2 => Type::Nat(gen_index(rng, 1, scope, Sort::Size)),
        3 => Type::list(
            gen_index(rng, 1, scope, Sort::Size),
            gen_type(rng, depth - 1, scope, counter),
        ),
        4 => Type::tensor(
            gen_type(rng, depth - 1, scope, counter),
            gen_type(rng, depth - 1, scope, counter),
        ),
        5 => Type::bang(
            gen_index(rng, 1, scope, Sort::Sens),
            gen_type(rng, depth - 1, scope, counter),
        ),
        6 | 7 => Type::arrow(
            gen_type(rng, depth - 1, scope, counter),
            gen_type(rng, depth - 1, scope, counter),
        ),
        8 => {
            let name = format!("v{}", *counter);
            *counter += 1;
            let sort = if rng.gen_bool(0.5) {
                Sort::Size
            } else {
                Sort::Sens
            };
            scope.push((name.clone(), sort));
            let body = gen_type(rng, depth - 1, scope, counter);
            scope.pop();
            Type::Forall(name, sort, Box::new(body))
        }
        _ => {
            let name = format!("b{}", *counter);
            *counter += 1;
            let bound = gen_index(rng, 1, scope, Sort::Size);
            scope.push((name.clone(), Sort::Size));
            let body = gen_type(rng, depth - 1, scope, counter);
            scope.pop();
            Type::BoundedBang(name, bound, Box::new(body))
        }
    }
}

/// A well-formed (parseable, not necessarily well-typed) random term.
pub fn gen_term(
    rng: &mut impl Rng,
    depth: u32,
    term_scope: &mut Vec<String>,
    index_scope: &mut Vec<(String, Sort)>,
    counter: &mut u32,
) -> Term {
    if depth > 0 {
        match rng.gen_range(0..12) {
            0 | 1 => {
                let name = format!("x{}", *counter);
                *counter += 1;
                let grade = gen_index(rng, 1, index_scope, Sort::Sens);
                let ty = gen_type(rng, depth.min(2), index_scope, counter);
                term_scope.push(name.clone());
                let body = gen_term(rng, depth - 1, term_scope, index_scope, counter);
                term_scope.pop();
                return Term::mk(TermKind::Lambda {
                    param: name,
                    grade,
                    param_ty: ty,
                    body: Box::new(body),
                });
            }
            2 | 3 => {
                return Term::mk(TermKind::App(
                    Box::new(gen_term(rng, depth - 1, term_scope, index_scope, counter)),
                    Box::new(gen_term(rng, depth - 1, term_scope, index_scope, counter)),
                ))
            }
            4 => {
                return Term::mk(TermKind::IdxApp(
                    Box::new(gen_term(rng, depth - 1, term_scope, index_scope, counter)),
                    gen_index(rng, 1, index_scope, Sort::Sens),
                ))
            }
            5 => {
                return Term::mk(TermKind::Pair(
                    Box::new(gen_term(rng, depth - 1, term_scope, index_scope, counter)),
                    Box::new(gen_term(rng, depth - 1, term_scope, index_scope, counter)),
                ))
            }
            6 => {
                let fst = format!("p{}", *counter);
                let snd = format!("q{}", *counter);
                *counter += 1;
                let rhs = gen_term(rng, depth - 1, term_scope, index_scope, counter);
                term_scope.push(fst.clone());
                term_scope.push(snd.clone());
                let body = gen_term(rng, depth - 1, term_scope, index_scope, counter);
                term_scope.pop();
                term_scope.pop();
                return Term::mk(TermKind::LetPair {
                    fst,
                    snd,
                    rhs: Box::new(rhs),
                    body: Box::new(body),
                });
            }
            7 => {
                let succ_var = format!("m{}", *counter);
                *counter += 1;
                let scrut = gen_term(rng, depth - 1, term_scope, index_scope, counter);
                let zero = gen_term(rng, depth - 1, term_scope, index_scope, counter);
                term_scope.push(succ_var.clone());
                index_scope.push((succ_var.clone(), Sort::Size));
                let succ = gen_term(rng, depth - 1, term_scope, index_scope, counter);
                index_scope.pop();
                term_scope.pop();
                return Term::mk(TermKind::NatCase {
                    scrut: Box::new(scrut),
                    zero: Box::new(zero),
                    succ_var,
                    succ: Box::new(succ),
                });
            }
            8 => {
                let head_var = format!("h{}", *counter);
                let tail_var = format!("t{}", *counter);
                *counter += 1;
                let scrut = gen_term(rng, depth - 1, term_scope, index_scope, counter);
                let nil = gen_term(rng, depth - 1, term_scope, index_scope, counter);
                term_scope.push(head_var.clone());
                term_scope.push(tail_var.clone());
                index_scope.push((tail_var.clone(), Sort::Size));
                let cons = gen_term(rng, depth - 1, term_scope, index_scope, counter);
                index_scope.pop();
                term_scope.pop();
                term_scope.pop();
                return Term::mk(TermKind::ListCase {
                    scrut: Box::new(scrut),
                    nil: Box::new(nil),
                    head_var,
                    tail_var,
                    cons: Box::new(cons),
                });
            }
            _ => {}
        }
    }
    Term::mk(match rng.gen_range(0..8) {
        0 if !term_scope.is_empty() => {
            TermKind::Var(term_scope[rng.gen_range(0..term_scope.len())].clone())
        }
        0 | 1 => TermKind::Var(format!("free{}", rng.gen_range(0..3))),
        2 => TermKind::RealLit(gen_rational(rng)),
        3 => TermKind::NatLit(rng.gen_range(0..10)),
        4 => TermKind::UnitLit,
        5 => TermKind::Prim(Prim::Add),
        6 => TermKind::Prim(Prim::CMul(gen_rational(rng))),
        _ => match rng.gen_range(0..3) {
            0 => TermKind::Prim(Prim::Iter),
            1 => TermKind::Prim(Prim::Nil),
            _ => TermKind::Prim(Prim::Cons),
        },
    })
}

/// A random program of defs and checks with unique names.
pub fn gen_program(rng: &mut impl Rng, max_decls: usize) -> Program {
    let mut decls = Vec::new();
    let mut counter = 0u32;
    let n = rng.gen_range(0..=max_decls);
    for k in 0..n {
        let mut index_scope = Vec::new();
        let ty_depth = rng.gen_range(0..=3);
        let ty = gen_type(rng, ty_depth, &mut index_scope, &mut counter);
        if rng.gen_bool(0.8) {
            // Mirror the parser: the type's quantifier prefix scopes over
            // the body of a def.
            let mut term_index_scope = Vec::new();
            let mut prefix = &ty;
            while let Type::Forall(v, s, body) = prefix {
                term_index_scope.push((v.clone(), *s));
                prefix = body;
            }
            let term_depth = rng.gen_range(0..=3);
            let term = gen_term(
                rng,
                term_depth,
                &mut Vec::new(),
                &mut term_index_scope,
                &mut counter,
            );
            decls.push(Decl::Def {
                name: format!("d{k}"),
                ty,
                term,
                span: Span::DUMMY,
            });
        } else {
            let term_depth = rng.gen_range(0..=3);
            let term = gen_term(
                rng,
                term_depth,
                &mut Vec::new(),
                &mut Vec::new(),
                &mut counter,
            );
            decls.push(Decl::Check {
                term,
                ty,
                span: Span::DUMMY,
            });
        }
    }
    Program { decls }
}

/// A closed arrow-free type with closed indices, for metric tests.
pub fn gen_metric_type(rng: &mut impl Rng, depth: u32) -> Type {
    if depth == 0 {
        return match rng.gen_range(0..3) {
            0 => Type::Real,
            1 => Type::Unit,
            _ => Type::Nat(Index::Nat(rng.gen_range(0..5))),
        };
    }
    match rng.gen_range(0..6) {
        0 => Type::Real,
        1 => Type::Nat(Index::Nat(rng.gen_range(0..5))),
        2 => Type::list(
            Index::Nat(rng.gen_range(0..4)),
            gen_metric_type(rng, depth - 1),
        ),
        3 => Type::tensor(
            gen_metric_type(rng, depth - 1),
            gen_metric_type(rng, depth - 1),
        ),
        4 => {
            let grade = match rng.gen_range(0..4) {
                0 => Index::Nat(rng.gen_range(0..5)),
                1 => Index::Rat(gen_rational(rng)),
                2 => Index::Inf,
                _ => Index::sum(Index::Nat(1), Index::Rat(gen_rational(rng))),
            };
            Type::bang(grade, gen_metric_type(rng, depth - 1))
        }
        _ => Type::Unit,
    }
}

/// A random inhabitant of a closed arrow-free type.
pub fn gen_value_at(rng: &mut impl Rng, ty: &Type) -> Value {
    match ty {
        Type::Real => Value::Real(rng.gen_range(-100.0..100.0)),
        Type::Unit => Value::Unit,
        Type::Nat(ix) => {
            let n = eval_closed(ix, &Valuation::default())
                .and_then(|v| v.as_nat())
                .expect("metric types carry closed natural indices");
            Value::Nat(n)
        }
        Type::List(ix, elem) => {
            let n = eval_closed(ix, &Valuation::default())
                .and_then(|v| v.as_nat())
                .expect("metric types carry closed natural indices");
            Value::List((0..n).map(|_| gen_value_at(rng, elem)).collect())
        }
        Type::Tensor(a, b) => Value::Pair(
            Box::new(gen_value_at(rng, a)),
            Box::new(gen_value_at(rng, b)),
        ),
        Type::Bang(_, body) => gen_value_at(rng, body),
        other => panic!("no value generator at type {other:?}"),
    }
}

/// A sort-respecting random valuation: naturals in 0..20 for sizes,
/// sensitivities from {0, 0.5, 1, 2, 7, ∞}.
pub fn gen_valuation(rng: &mut impl Rng, vars: &BTreeSet<(String, Sort)>) -> Valuation {
    let mut out = Valuation::default();
    for (name, sort) in vars {
        let value = match sort {
            Sort::Size => Extended::from_nat(rng.gen_range(0..=20)),
            Sort::Sens => match rng.gen_range(0..6) {
                0 => Extended::zero(),
                1 => Extended::from_rational(BigRational::new(1.into(), 2.into())),
                2 => Extended::one(),
                3 => Extended::from_nat(2),
                4 => Extended::from_nat(7),
                _ => Extended::Infinity,
            },
        };
        out.insert(name, value);
    }
    out
}

/// A random constraint, biased so a healthy fraction is provable: valid
/// shapes (reflexive equalities, padded or scaled inequalities,
/// substitution instances) mixed with unconstrained noise.
pub fn gen_constraint(rng: &mut impl Rng) -> Constraint {
    let scope: Vec<(String, Sort)> = [
        ("i", Sort::Size),
        ("j", Sort::Size),
        ("r", Sort::Sens),
        ("s", Sort::Sens),
    ]
    .iter()
    .map(|(n, s)| (n.to_string(), *s))
    .collect();
    let origin = Origin {
        span: Span::DUMMY,
        rule: "generated",
    };
    let mut assumptions = Vec::new();
    if rng.gen_bool(0.3) {
        // i = <size term in j> + c, the shape case refinement produces.
        let rhs = Index::sum(
            gen_index(rng, 1, &scope[1..2], Sort::Size),
            Index::Nat(rng.gen_range(0..3)),
        );
        assumptions.push(("i".to_string(), rhs));
    }
    let sort = if rng.gen_bool(0.5) {
        Sort::Size
    } else {
        Sort::Sens
    };
    let (rel, lhs, rhs) = match rng.gen_range(0..6) {
        0 => {
            let base = gen_index(rng, 2, &scope, sort);
            (Rel::Eq, base.clone(), base)
        }
        1 => {
            let base = gen_index(rng, 2, &scope, sort);
            let pad = gen_index(rng, 1, &scope, Sort::Sens);
            (Rel::Le, base.clone(), Index::sum(base, pad))
        }
        2 => {
            let base = gen_index(rng, 1, &scope, Sort::Sens);
            let scale = Index::Nat(rng.gen_range(1..4));
            (Rel::Le, base.clone(), Index::prod(scale, base))
        }
        3 => {
            let lhs = Index::sum(Index::var("i", Sort::Size), Index::Nat(0));
            let rhs = Index::var("i", Sort::Size);
            (Rel::Eq, lhs, rhs)
        }
        _ => (
            if rng.gen_bool(0.7) { Rel::Le } else { Rel::Eq },
            gen_index(rng, 2, &scope, sort),
            gen_index(rng, 2, &scope, sort),
        ),
    };
    Constraint::new(assumptions, rel, lhs, rhs, origin)
}
