//! Call-by-value big-step interpreter.
//!
//! Indices are erased before evaluation: `e @[I]` runs as `e`, annotations
//! are ignored. Evaluation is deterministic; a configurable fuel bounds the
//! number of `eval` steps so runaway recursion errors out instead of
//! spinning.

use super::value::{prim_arity, rational_to_f64, Env, Value};
use crate::syntax::ast::{Prim, Term, TermKind};
use std::collections::BTreeMap;
use std::rc::Rc;
use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum EvalError {
    #[error("evaluation ran out of fuel")]
    OutOfFuel,
    #[error("recursion too deep")]
    DepthExceeded,
    #[error("unbound variable `{0}` at runtime")]
    Unbound(String),
    #[error("runtime type error: {0}")]
    RuntimeType(String),
}

pub struct Evaluator {
    defs: BTreeMap<String, Rc<Term>>,
    fuel: u64,
    depth: u32,
    max_depth: u32,
}

impl Evaluator {
    pub fn new(defs: &BTreeMap<String, Term>, fuel: u64) -> Evaluator {
        Evaluator {
            defs: defs
                .iter()
                .map(|(name, term)| (name.clone(), Rc::new(term.clone())))
                .collect(),
            fuel,
            depth: 0,
            // Evaluation recurses on the host stack; RUST_MIN_STACK in
            // .cargo/config.toml sizes test threads accordingly.
            max_depth: 2048,
        }
    }

    /// Remaining fuel; decremented once per `eval` call.
    pub fn fuel_left(&self) -> u64 {
        self.fuel
    }

    fn charge(&mut self) -> Result<(), EvalError> {
        if self.fuel == 0 {
            return Err(EvalError::OutOfFuel);
        }
        self.fuel -= 1;
        if self.depth >= self.max_depth {
            return Err(EvalError::DepthExceeded);
        }
        self.depth += 1;
        Ok(())
    }

    pub fn eval(&mut self, term: &Term, env: &Env) -> Result<Value, EvalError> {
        self.charge()?;
        let out = self.eval_inner(term, env);
        self.depth -= 1;
        out
    }

    fn eval_inner(&mut self, term: &Term, env: &Env) -> Result<Value, EvalError> {
        match &term.kind {
            TermKind::Var(name) => {
                if let Some(value) = env.lookup(name) {
                    Ok(value.clone())
                } else if let Some(def) = self.defs.get(name).cloned() {
                    self.eval(&def, &Env::empty())
                } else {
                    Err(EvalError::Unbound(name.clone()))
                }
            }
            TermKind::RealLit(q) => Ok(Value::Real(rational_to_f64(q))),
            TermKind::NatLit(n) => Ok(Value::Nat(*n)),
            TermKind::UnitLit => Ok(Value::Unit),
            TermKind::Prim(Prim::Nil) => Ok(Value::List(Vec::new())),
            TermKind::Prim(p) => Ok(Value::PrimApp {
                prim: p.clone(),
                args: Vec::new(),
            }),
            TermKind::Lambda { param, body, .. } => Ok(Value::Closure {
                param: param.clone(),
                body: Rc::new((**body).clone()),
                env: env.clone(),
            }),
            TermKind::App(fun, arg) => {
                let fun = self.eval(fun, env)?;
                let arg = self.eval(arg, env)?;
                self.apply(fun, arg)
            }
            TermKind::IdxApp(fun, _) => self.eval(fun, env),
            TermKind::Pair(a, b) => Ok(Value::Pair(
                Box::new(self.eval(a, env)?),
                Box::new(self.eval(b, env)?),
            )),
            TermKind::LetPair {
                fst,
                snd,
                rhs,
                body,
            } => {
                let Value::Pair(a, b) = self.eval(rhs, env)? else {
                    return Err(EvalError::RuntimeType(
                        "let (x, y) expects a pair".to_string(),
                    ));
                };
                let env = env.bind(fst, *a).bind(snd, *b);
                self.eval(body, &env)
            }
            TermKind::NatCase {
                scrut,
                zero,
                succ_var,
                succ,
            } => {
                let Value::Nat(n) = self.eval(scrut, env)? else {
                    return Err(EvalError::RuntimeType(
                        "case expects a natural".to_string(),
                    ));
                };
                if n == 0 {
                    self.eval(zero, env)
                } else {
                    let env = env.bind(succ_var, Value::Nat(n - 1));
                    self.eval(succ, &env)
                }
            }
            TermKind::ListCase {
                scrut,
                nil,
                head_var,
                tail_var,
                cons,
            } => {
                let Value::List(items) = self.eval(scrut, env)? else {
                    return Err(EvalError::RuntimeType(
                        "lcase expects a list".to_string(),
                    ));
                };
                match items.split_first() {
                    None => self.eval(nil, env),
                    Some((head, tail)) => {
                        let env = env
                            .bind(head_var, head.clone())
                            .bind(tail_var, Value::List(tail.to_vec()));
                        self.eval(cons, &env)
                    }
                }
            }
        }
    }

    pub fn apply(&mut self, fun: Value, arg: Value) -> Result<Value, EvalError> {
        self.charge()?;
        let out = self.apply_inner(fun, arg);
        self.depth -= 1;
        out
    }

    fn apply_inner(&mut self, fun: Value, arg: Value) -> Result<Value, EvalError> {
        match fun {
            Value::Closure { param, body, env } => {
                let env = env.bind(&param, arg);
                self.eval(&body, &env)
            }
            Value::PrimApp { prim, mut args } => {
                args.push(arg);
                if args.len() == prim_arity(&prim) {
                    self.delta(&prim, args)
                } else {
                    Ok(Value::PrimApp { prim, args })
                }
            }
            other => Err(EvalError::RuntimeType(format!(
                "cannot apply non-function value {other}"
            ))),
        }
    }

    fn delta(&mut self, prim: &Prim, mut args: Vec<Value>) -> Result<Value, EvalError> {
        match prim {
            Prim::Add => {
                let (a, b) = (real_arg(&args[0])?, real_arg(&args[1])?);
                Ok(Value::Real(a + b))
            }
            Prim::CMul(q) => {
                let a = real_arg(&args[0])?;
                Ok(Value::Real(rational_to_f64(q) * a))
            }
            Prim::Iter => {
                let start = args.pop().unwrap();
                let fun = args.pop().unwrap();
                let Value::Nat(n) = args.pop().unwrap() else {
                    return Err(EvalError::RuntimeType(
                        "iter expects a natural count".to_string(),
                    ));
                };
                let mut acc = start;
                for _ in 0..n {
                    acc = self.apply(fun.clone(), acc)?;
                }
                Ok(acc)
            }
            Prim::Cons => {
                let tail = args.pop().unwrap();
                let head = args.pop().unwrap();
                let Value::List(items) = tail else {
                    return Err(EvalError::RuntimeType(
                        "cons expects a list tail".to_string(),
                    ));
                };
                let mut out = Vec::with_capacity(items.len() + 1);
                out.push(head);
                out.extend(items);
                Ok(Value::List(out))
            }
            Prim::Nil => Ok(Value::List(Vec::new())),
        }
    }
}

fn real_arg(value: &Value) -> Result<f64, EvalError> {
    value
        .as_real()
        .ok_or_else(|| EvalError::RuntimeType("expected a real number".to_string()))
}

/// Strip index applications; runtime behavior never depends on indices.
pub fn erase_indices(term: &Term) -> Term {
    let kind = match &term.kind {
        TermKind::IdxApp(fun, _) => return erase_indices(fun),
        TermKind::Var(_)
        | TermKind::RealLit(_)
        | TermKind::NatLit(_)
        | TermKind::UnitLit
        | TermKind::Prim(_) => term.kind.clone(),
        TermKind::Lambda {
            param,
            grade,
            param_ty,
            body,
        } => TermKind::Lambda {
            param: param.clone(),
            grade: grade.clone(),
            param_ty: param_ty.clone(),
            body: Box::new(erase_indices(body)),
        },
        TermKind::App(f, a) => {
            TermKind::App(Box::new(erase_indices(f)), Box::new(erase_indices(a)))
        }
        TermKind::Pair(a, b) => {
            TermKind::Pair(Box::new(erase_indices(a)), Box::new(erase_indices(b)))
        }
        TermKind::LetPair {
            fst,
            snd,
            rhs,
            body,
        } => TermKind::LetPair {
            fst: fst.clone(),
            snd: snd.clone(),
            rhs: Box::new(erase_indices(rhs)),
            body: Box::new(erase_indices(body)),
        },
        TermKind::NatCase {
            scrut,
            zero,
            succ_var,
            succ,
        } => TermKind::NatCase {
            scrut: Box::new(erase_indices(scrut)),
            zero: Box::new(erase_indices(zero)),
            succ_var: succ_var.clone(),
            succ: Box::new(erase_indices(succ)),
        },
        TermKind::ListCase {
            scrut,
            nil,
            head_var,
            tail_var,
            cons,
        } => TermKind::ListCase {
            scrut: Box::new(erase_indices(scrut)),
            nil: Box::new(erase_indices(nil)),
            head_var: head_var.clone(),
            tail_var: tail_var.clone(),
            cons: Box::new(erase_indices(cons)),
        },
    };
    Term::new(kind, term.span)
}

/// Evaluate a term under a program's definitions.
pub fn eval_term(
    term: &Term,
    defs: &BTreeMap<String, Term>,
    fuel: u64,
) -> Result<Value, EvalError> {
    Evaluator::new(defs, fuel).eval(term, &Env::empty())
}
