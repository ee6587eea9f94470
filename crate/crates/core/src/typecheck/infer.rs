//! Syntax-directed constraint generation.
//!
//! Checking is bidirectional: annotated lambdas and applications synthesize,
//! while `case`/`lcase` branches are checked against an expected type under
//! the refinement assumption their pattern introduces (`i = 0`, resp.
//! `i = m + 1`). Grades joined across branches are instantiated eagerly: the
//! exact maximum when the candidates are closed, their sum (an upper bound
//! for nonnegative grades) otherwise.

use super::env::{FreshGen, TypeEnv};
use super::prims::{prim_type, IterScheme};
use super::subtype::{
    instantiate_forall, split_bang, subtype, well_formed_type,
};
use super::usage::{ctx_add, ctx_scale, Usage};
use super::TypeError;
use crate::index::{
    eval_closed, normalize, sort_check, Constraint, Extended, Origin, Rel, Valuation,
};
use crate::syntax::ast::{Index, Sort, Span, Term, TermKind, Type};
use crate::syntax::pretty_type;

pub struct Checker {
    pub iter_scheme: IterScheme,
    pub fresh: FreshGen,
    pub constraints: Vec<Constraint>,
}

impl Checker {
    pub fn new(iter_scheme: IterScheme, fresh: FreshGen) -> Checker {
        Checker {
            iter_scheme,
            fresh,
            constraints: Vec::new(),
        }
    }

    fn emit(&mut self, env: &TypeEnv, rel: Rel, lhs: Index, rhs: Index, origin: Origin) {
        self.constraints.push(Constraint::new(
            env.assumptions.clone(),
            rel,
            lhs,
            rhs,
            origin,
        ));
    }

    fn emit_subtype(
        &mut self,
        env: &TypeEnv,
        sub: &Type,
        sup: &Type,
        origin: Origin,
    ) -> Result<(), TypeError> {
        let constraints = subtype(env, &mut self.fresh, sub, sup, origin)?;
        self.constraints.extend(constraints);
        Ok(())
    }

    /// Synthesize a type and usage for a term.
    pub fn infer(&mut self, env: &TypeEnv, term: &Term) -> Result<(Type, Usage), TypeError> {
        let span = term.span;
        match &term.kind {
            TermKind::Var(name) => {
                if let Some(ty) = env.term_vars.get(name) {
                    Ok((ty.clone(), Usage::single(name, Index::Nat(1))))
                } else if let Some(ty) = env.defs.get(name) {
                    // Top-level definitions are ambient (grade ∞, untracked).
                    Ok((ty.clone(), Usage::empty()))
                } else {
                    Err(TypeError::UnboundVar {
                        name: name.clone(),
                        span,
                    })
                }
            }
            TermKind::RealLit(_) => Ok((Type::Real, Usage::empty())),
            TermKind::NatLit(n) => Ok((Type::Nat(Index::Nat(*n)), Usage::empty())),
            TermKind::UnitLit => Ok((Type::Unit, Usage::empty())),
            TermKind::Prim(p) => Ok((prim_type(p, self.iter_scheme), Usage::empty())),
            TermKind::Lambda {
                param,
                grade,
                param_ty,
                body,
            } => {
                self.check_annotation(env, grade, param_ty, span)?;
                let inner = env.bind_term(param, param_ty.clone());
                let (body_ty, mut usage) = self.infer(&inner, body)?;
                let used = usage.remove(param);
                self.emit(
                    env,
                    Rel::Le,
                    used,
                    grade.clone(),
                    Origin { span, rule: "lambda" },
                );
                Ok((
                    Type::arrow(Type::bang(grade.clone(), param_ty.clone()), body_ty),
                    usage,
                ))
            }
            TermKind::App(fun, arg) => {
                let (fun_ty, fun_usage) = self.infer(env, fun)?;
                let Type::Arrow(dom, cod) = fun_ty else {
                    return Err(match fun_ty {
                        Type::Forall(..) => TypeError::NeedsIndexApp {
                            ty: pretty_type(&fun_ty),
                            span,
                        },
                        other => TypeError::NotAFunction {
                            ty: pretty_type(&other),
                            span,
                        },
                    });
                };
                let (grade, want) = split_bang(&dom);
                let arg_usage = self.check(env, arg, want, "app")?;
                let usage = ctx_add(&fun_usage, &ctx_scale(&grade, &arg_usage));
                Ok(((*cod).clone(), usage))
            }
            TermKind::IdxApp(fun, ix) => {
                let (fun_ty, usage) = self.infer(env, fun)?;
                sort_check(ix, &env.index_vars)
                    .map_err(|err| TypeError::Sort { err, span })?;
                let instantiated =
                    instantiate_forall(&fun_ty, ix).map_err(|e| e.at(span))?;
                Ok((instantiated, usage))
            }
            TermKind::Pair(a, b) => {
                let (ta, ua) = self.infer(env, a)?;
                let (tb, ub) = self.infer(env, b)?;
                Ok((Type::tensor(ta, tb), ctx_add(&ua, &ub)))
            }
            TermKind::LetPair { .. } => self.let_pair(env, term, None),
            TermKind::NatCase { .. } => self.nat_case(env, term, None),
            TermKind::ListCase { .. } => self.list_case(env, term, None),
        }
    }

    /// Check a term against an expected type.
    pub fn check(
        &mut self,
        env: &TypeEnv,
        term: &Term,
        expected: &Type,
        rule: &'static str,
    ) -> Result<Usage, TypeError> {
        let span = term.span;
        match (&term.kind, expected) {
            (
                TermKind::Lambda {
                    param,
                    grade,
                    param_ty,
                    body,
                },
                Type::Arrow(want_dom, want_cod),
            ) => {
                self.check_annotation(env, grade, param_ty, span)?;
                let (want_grade, want_ty) = split_bang(want_dom);
                // ![I] A ⊸ B <: ![J] C ⊸ B' needs I ≤ J and C <: A.
                let origin = Origin { span, rule: "lambda" };
                self.emit(env, Rel::Le, grade.clone(), want_grade, origin);
                self.emit_subtype(env, want_ty, param_ty, origin)?;
                let inner = env.bind_term(param, param_ty.clone());
                let mut usage = self.check(&inner, body, want_cod, rule)?;
                let used = usage.remove(param);
                self.emit(env, Rel::Le, used, grade.clone(), origin);
                Ok(usage)
            }
            (TermKind::Pair(a, b), Type::Tensor(ta, tb)) => {
                let ua = self.check(env, a, ta, rule)?;
                let ub = self.check(env, b, tb, rule)?;
                Ok(ctx_add(&ua, &ub))
            }
            (TermKind::LetPair { .. }, _) => {
                Ok(self.let_pair(env, term, Some(expected))?.1)
            }
            (TermKind::NatCase { .. }, _) => Ok(self.nat_case(env, term, Some(expected))?.1),
            (TermKind::ListCase { .. }, _) => {
                Ok(self.list_case(env, term, Some(expected))?.1)
            }
            _ => {
                let (got, usage) = self.infer(env, term)?;
                self.emit_subtype(env, &got, expected, Origin { span, rule })?;
                Ok(usage)
            }
        }
    }

    fn check_annotation(
        &mut self,
        env: &TypeEnv,
        grade: &Index,
        ty: &Type,
        span: Span,
    ) -> Result<(), TypeError> {
        sort_check(grade, &env.index_vars).map_err(|err| TypeError::Sort { err, span })?;
        well_formed_type(ty, env, span)
    }

    fn let_pair(
        &mut self,
        env: &TypeEnv,
        term: &Term,
        expected: Option<&Type>,
    ) -> Result<(Type, Usage), TypeError> {
        let TermKind::LetPair {
            fst,
            snd,
            rhs,
            body,
        } = &term.kind
        else {
            unreachable!()
        };
        let span = term.span;
        let (rhs_ty, rhs_usage) = self.infer(env, rhs)?;
        let rhs_ty = self.force_tensor(rhs_ty, span)?;
        let Type::Tensor(ta, tb) = rhs_ty else {
            unreachable!()
        };
        let inner = env.bind_term(fst, (*ta).clone()).bind_term(snd, (*tb).clone());
        let (body_ty, mut usage) = match expected {
            Some(want) => (want.clone(), self.check(&inner, body, want, "let-pair")?),
            None => self.infer(&inner, body)?,
        };
        let g_fst = usage.remove(fst);
        let g_snd = usage.remove(snd);
        let origin = Origin {
            span,
            rule: "let-pair",
        };
        let shared = self.join_grades(env, &[g_fst, g_snd], &[], origin);
        Ok((body_ty, ctx_add(&usage, &ctx_scale(&shared, &rhs_usage))))
    }

    fn force_tensor(&mut self, ty: Type, span: Span) -> Result<Type, TypeError> {
        match ty {
            Type::Tensor(..) => Ok(ty),
            Type::BoundedBang(_, ref bound, _) if bound.is_closed() => {
                let expanded = super::subtype::expand_bounded(&ty).map_err(|e| e.at(span))?;
                self.force_tensor(expanded, span)
            }
            other => Err(TypeError::LetPairRhs {
                ty: pretty_type(&other),
                span,
            }),
        }
    }

    fn nat_case(
        &mut self,
        env: &TypeEnv,
        term: &Term,
        expected: Option<&Type>,
    ) -> Result<(Type, Usage), TypeError> {
        let TermKind::NatCase {
            scrut,
            zero,
            succ_var,
            succ,
        } = &term.kind
        else {
            unreachable!()
        };
        let span = term.span;
        let (scrut_ty, scrut_usage) = self.infer(env, scrut)?;
        let Type::Nat(scrut_ix) = scrut_ty else {
            return Err(TypeError::Scrutinee {
                want: "Nat[...]",
                ty: pretty_type(&scrut_ty),
                span,
            });
        };
        let liveness = branch_liveness(&scrut_ix);

        // Zero branch, under the refinement i = 0 when expressible.
        let zero_outcome = {
            let env_z = match (&liveness, &scrut_ix) {
                (_, Index::Var(v, _)) => env.assume(v, Index::Nat(0)),
                _ => env.clone(),
            };
            self.branch(&env_z, zero, expected, liveness.zero_live, "case")?
        };

        // Successor branch: binds the predecessor, both as a term of type
        // Nat[m] and as the size variable m itself.
        let succ_outcome = {
            let mut env_s = env.bind_index(succ_var, Sort::Size).bind_term(
                succ_var,
                Type::Nat(Index::Var(succ_var.clone(), Sort::Size)),
            );
            match predecessor(&scrut_ix) {
                Pred::Value(p) => env_s = env_s.assume(succ_var, p),
                Pred::ScrutIsSucc(v) => {
                    env_s = env_s.assume(
                        &v,
                        Index::sum(Index::Var(succ_var.clone(), Sort::Size), Index::Nat(1)),
                    )
                }
                Pred::Unknown => {}
            }
            self.branch(&env_s, succ, expected, liveness.succ_live, "case")?
        };

        let (ty, mut branch_usages): (Type, Vec<Usage>) =
            self.join_branches(zero_outcome, succ_outcome.clone(), expected, span)?;

        // The scrutinee is consumed at the successor branch's use of the
        // predecessor, plus one for the inspection itself.
        let g_pred = succ_outcome
            .map(|(_, mut usage)| usage.remove(succ_var))
            .unwrap_or(Index::Nat(0));
        for usage in &mut branch_usages {
            usage.remove(succ_var);
        }
        let origin = Origin { span, rule: "case" };
        let scale = self.sanitize_grade(
            Index::sum(g_pred, Index::Nat(1)),
            &[succ_var.clone()],
        );
        let joined = self.join_usages(env, &branch_usages, &[succ_var.clone()], origin);
        Ok((ty, ctx_add(&ctx_scale(&scale, &scrut_usage), &joined)))
    }

    fn list_case(
        &mut self,
        env: &TypeEnv,
        term: &Term,
        expected: Option<&Type>,
    ) -> Result<(Type, Usage), TypeError> {
        let TermKind::ListCase {
            scrut,
            nil,
            head_var,
            tail_var,
            cons,
        } = &term.kind
        else {
            unreachable!()
        };
        let span = term.span;
        let (scrut_ty, scrut_usage) = self.infer(env, scrut)?;
        let Type::List(scrut_ix, elem_ty) = scrut_ty else {
            return Err(TypeError::Scrutinee {
                want: "List[...]",
                ty: pretty_type(&scrut_ty),
                span,
            });
        };
        let liveness = branch_liveness(&scrut_ix);

        let nil_outcome = {
            let env_n = match &scrut_ix {
                Index::Var(v, _) => env.assume(v, Index::Nat(0)),
                _ => env.clone(),
            };
            self.branch(&env_n, nil, expected, liveness.zero_live, "lcase")?
        };

        let cons_outcome = {
            let tail_ix = Index::Var(tail_var.clone(), Sort::Size);
            let mut env_c = env
                .bind_index(tail_var, Sort::Size)
                .bind_term(head_var, (*elem_ty).clone())
                .bind_term(tail_var, Type::List(tail_ix.clone(), elem_ty.clone()));
            match predecessor(&scrut_ix) {
                Pred::Value(p) => env_c = env_c.assume(tail_var, p),
                Pred::ScrutIsSucc(v) => {
                    env_c = env_c.assume(&v, Index::sum(tail_ix, Index::Nat(1)))
                }
                Pred::Unknown => {}
            }
            self.branch(&env_c, cons, expected, liveness.succ_live, "lcase")?
        };

        let (ty, mut branch_usages) =
            self.join_branches(nil_outcome, cons_outcome.clone(), expected, span)?;

        // Scrutinee grade: a fresh bound s with grade(h) ≤ s, grade(t) ≤ s,
        // instantiated eagerly (max when closed, sum otherwise).
        let origin = Origin { span, rule: "lcase" };
        let (g_head, g_tail) = cons_outcome
            .map(|(_, mut usage)| (usage.remove(head_var), usage.remove(tail_var)))
            .unwrap_or((Index::Nat(0), Index::Nat(0)));
        for usage in &mut branch_usages {
            usage.remove(head_var);
            usage.remove(tail_var);
        }
        let locals = vec![tail_var.clone()];
        let scale = self.join_grades(env, &[g_head, g_tail], &locals, origin);
        let joined = self.join_usages(env, &branch_usages, &locals, origin);
        Ok((ty, ctx_add(&ctx_scale(&scale, &scrut_usage), &joined)))
    }

    /// Check or synthesize one branch; dead branches are still checked for
    /// scope and shape errors but contribute neither constraints nor usage.
    fn branch(
        &mut self,
        env: &TypeEnv,
        body: &Term,
        expected: Option<&Type>,
        live: bool,
        rule: &'static str,
    ) -> Result<Option<(Type, Usage)>, TypeError> {
        let mark = self.constraints.len();
        let outcome = match expected {
            Some(want) => {
                let usage = self.check(env, body, want, rule)?;
                (want.clone(), usage)
            }
            None => self.infer(env, body)?,
        };
        if live {
            Ok(Some(outcome))
        } else {
            self.constraints.truncate(mark);
            Ok(None)
        }
    }

    fn join_branches(
        &mut self,
        first: Option<(Type, Usage)>,
        second: Option<(Type, Usage)>,
        expected: Option<&Type>,
        span: Span,
    ) -> Result<(Type, Vec<Usage>), TypeError> {
        let mut usages = Vec::new();
        let mut types = Vec::new();
        for outcome in [first, second].into_iter().flatten() {
            types.push(outcome.0);
            usages.push(outcome.1);
        }
        let ty = match expected {
            Some(want) => want.clone(),
            None => match types.as_slice() {
                [] => {
                    return Err(TypeError::EmptyCase { span });
                }
                [only] => only.clone(),
                [a, b] => {
                    if crate::syntax::alpha_equiv_type(a, b) {
                        a.clone()
                    } else {
                        return Err(TypeError::BranchJoin {
                            first: pretty_type(a),
                            second: pretty_type(b),
                            span,
                        });
                    }
                }
                _ => unreachable!(),
            },
        };
        Ok((ty, usages))
    }

    /// Join candidate grades into a single upper bound, emitting the
    /// bounding constraints. Closed candidates join at their exact maximum;
    /// open ones at their sum. A grade mentioning a branch-local index
    /// variable cannot float out and is widened to ∞.
    fn join_grades(
        &mut self,
        env: &TypeEnv,
        grades: &[Index],
        locals: &[String],
        origin: Origin,
    ) -> Index {
        let closed_values: Option<Vec<Extended>> = grades
            .iter()
            .map(|g| eval_closed(g, &Valuation::default()))
            .collect();
        let joined = match closed_values {
            Some(values) => {
                let max = values.into_iter().max().unwrap_or_else(Extended::zero);
                extended_to_index(&max)
            }
            None => {
                let sum = grades
                    .iter()
                    .cloned()
                    .reduce(Index::sum)
                    .unwrap_or(Index::Nat(0));
                normalize(&sum).to_index()
            }
        };
        let joined = self.sanitize_grade(joined, locals);
        for grade in grades {
            let grade = self.sanitize_grade(grade.clone(), locals);
            self.emit(env, Rel::Le, grade, joined.clone(), origin);
        }
        joined
    }

    /// Widen a grade to ∞ if it mentions any of the given local variables.
    fn sanitize_grade(&self, grade: Index, locals: &[String]) -> Index {
        if grade
            .free_vars()
            .iter()
            .any(|(name, _)| locals.contains(name))
        {
            Index::Inf
        } else {
            grade
        }
    }

    fn join_usages(
        &mut self,
        env: &TypeEnv,
        usages: &[Usage],
        locals: &[String],
        origin: Origin,
    ) -> Usage {
        let mut vars: Vec<String> = Vec::new();
        for usage in usages {
            for var in usage.vars() {
                if !vars.contains(var) {
                    vars.push(var.clone());
                }
            }
        }
        let mut out = Usage::empty();
        for var in vars {
            let grades: Vec<Index> = usages.iter().map(|u| u.grade(&var)).collect();
            let joined = self.join_grades(env, &grades, locals, origin);
            out = ctx_add(&out, &Usage::single(&var, joined));
        }
        out
    }
}

struct Liveness {
    zero_live: bool,
    succ_live: bool,
}

/// Which branches are reachable, judged by the scrutinee's index: a closed
/// index pins the branch; an open index with a positive constant part rules
/// out zero.
fn branch_liveness(scrut_ix: &Index) -> Liveness {
    let nf = normalize(scrut_ix);
    if let Some(value) = nf.closed_value() {
        let is_zero = value.is_zero();
        return Liveness {
            zero_live: is_zero,
            succ_live: !is_zero,
        };
    }
    let zero_live = nf.constant_part() < num::BigRational::from_integer(1.into());
    Liveness {
        zero_live,
        succ_live: true,
    }
}

enum Pred {
    /// The scrutinee index minus one is expressible: assume `m = I - 1`.
    Value(Index),
    /// The scrutinee index is a bare variable: assume `v = m + 1`.
    ScrutIsSucc(String),
    Unknown,
}

fn predecessor(scrut_ix: &Index) -> Pred {
    if let Index::Var(v, _) = scrut_ix {
        return Pred::ScrutIsSucc(v.clone());
    }
    let nf = normalize(scrut_ix);
    match nf.sub_constant(1) {
        Some(pred) => Pred::Value(pred.to_index()),
        None => Pred::Unknown,
    }
}

fn extended_to_index(value: &Extended) -> Index {
    match value {
        Extended::Infinity => Index::Inf,
        Extended::Finite(q) => {
            normalize(&Index::Rat(q.clone())).to_index()
        }
    }
}

/// Spec-shaped entry point: synthesize type, usage and constraints in one
/// call.
pub fn infer_term(
    env: &TypeEnv,
    term: &Term,
    iter_scheme: IterScheme,
) -> Result<(Type, Usage, Vec<Constraint>), TypeError> {
    let mut checker = Checker::new(iter_scheme, FreshGen::default());
    let (ty, usage) = checker.infer(env, term)?;
    Ok((ty, usage, checker.constraints))
}
