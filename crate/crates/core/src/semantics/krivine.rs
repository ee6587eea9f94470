//! A call-by-name Krivine-style abstract machine with exact step counts.
//!
//! Configurations are ⟨control, environment, stack⟩; each transition costs
//! exactly one step:
//!
//! - application pushes the argument closure;
//! - a lambda pops and binds the top of the stack;
//! - a variable fetches its closure;
//! - primitives apply by δ-rules, one step per full application, with
//!   operand forcing billed to auxiliary machine runs whose steps are
//!   included;
//! - pairs, `let`, `case` and `lcase` force what they inspect via auxiliary
//!   runs, then take one step.
//!
//! Literal loads are free: a bare literal runs in 0 steps. The machine is
//! deterministic; on checked inputs a stuck state signals a checker bug.

use super::interp::erase_indices;
use super::value::{prim_arity, rational_to_f64, Value};
use crate::syntax::ast::{Prim, Term, TermKind};
use std::collections::BTreeMap;
use std::rc::Rc;

/// Machine values: ground data plus weak-head function forms closed over
/// machine environments.
#[derive(Debug, Clone, PartialEq)]
pub enum MValue {
    Real(f64),
    Nat(u64),
    Unit,
    Pair(Box<MValue>, Box<MValue>),
    List(Vec<MValue>),
    Closure(String, Rc<Term>, MEnv),
    /// A primitive with fewer arguments than its arity.
    Prim(Prim, Vec<MValue>),
}

impl MValue {
    /// Convert a ground machine value to an interpreter value for
    /// machine/interpreter agreement checks.
    pub fn to_value(&self) -> Option<Value> {
        match self {
            MValue::Real(x) => Some(Value::Real(*x)),
            MValue::Nat(n) => Some(Value::Nat(*n)),
            MValue::Unit => Some(Value::Unit),
            MValue::Pair(a, b) => Some(Value::Pair(
                Box::new(a.to_value()?),
                Box::new(b.to_value()?),
            )),
            MValue::List(items) => Some(Value::List(
                items.iter().map(|v| v.to_value()).collect::<Option<_>>()?,
            )),
            MValue::Closure(..) | MValue::Prim(..) => None,
        }
    }
}

/// A closure: an unevaluated term paired with its environment, or an
/// already-computed value.
#[derive(Debug, Clone, PartialEq)]
pub enum Clo {
    Thunk(Rc<Term>, MEnv),
    Val(MValue),
}

/// Persistent machine environment.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct MEnv(Option<Rc<MEnvNode>>);

#[derive(Debug, PartialEq)]
struct MEnvNode {
    name: String,
    clo: Clo,
    rest: MEnv,
}

impl MEnv {
    fn bind(&self, name: &str, clo: Clo) -> MEnv {
        MEnv(Some(Rc::new(MEnvNode {
            name: name.to_string(),
            clo,
            rest: self.clone(),
        })))
    }

    fn lookup(&self, name: &str) -> Option<Clo> {
        let mut node = self.0.as_deref();
        while let Some(n) = node {
            if n.name == name {
                return Some(n.clo.clone());
            }
            node = n.rest.0.as_deref();
        }
        None
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum MachineResult {
    Done(MValue),
    OutOfFuel,
    DepthExceeded,
    Stuck(String),
}

/// Final machine state: what it halted with and the exact transition count.
#[derive(Debug, Clone, PartialEq)]
pub struct MachineOutcome {
    pub result: MachineResult,
    pub steps: u64,
}

enum Halt {
    OutOfFuel,
    DepthExceeded,
    Stuck(String),
}

struct Machine {
    defs: BTreeMap<String, Rc<Term>>,
    fuel: u64,
    steps: u64,
    depth: u32,
}

impl Machine {
    const MAX_DEPTH: u32 = 2048;

    fn step(&mut self) -> Result<(), Halt> {
        if self.fuel == 0 {
            return Err(Halt::OutOfFuel);
        }
        self.fuel -= 1;
        self.steps += 1;
        Ok(())
    }

    fn force(&mut self, clo: Clo) -> Result<MValue, Halt> {
        match clo {
            Clo::Val(v) => Ok(v),
            thunk => {
                if self.depth >= Self::MAX_DEPTH {
                    return Err(Halt::DepthExceeded);
                }
                self.depth += 1;
                let out = self.run(thunk, Vec::new());
                self.depth -= 1;
                out
            }
        }
    }

    /// Value-form terms load as values at no cost; index applications are
    /// transparent.
    fn load(&self, clo: Clo) -> Clo {
        let Clo::Thunk(term, env) = &clo else {
            return clo;
        };
        match &term.kind {
            TermKind::RealLit(q) => Clo::Val(MValue::Real(rational_to_f64(q))),
            TermKind::NatLit(n) => Clo::Val(MValue::Nat(*n)),
            TermKind::UnitLit => Clo::Val(MValue::Unit),
            TermKind::Prim(Prim::Nil) => Clo::Val(MValue::List(Vec::new())),
            TermKind::Prim(p) => Clo::Val(MValue::Prim(p.clone(), Vec::new())),
            TermKind::IdxApp(f, _) => {
                self.load(Clo::Thunk(Rc::new((**f).clone()), env.clone()))
            }
            _ => clo,
        }
    }

    fn run(&mut self, control: Clo, mut stack: Vec<Clo>) -> Result<MValue, Halt> {
        let mut control = self.load(control);
        loop {
            match control {
                Clo::Val(value) => {
                    if stack.is_empty() {
                        return Ok(value);
                    }
                    match value {
                        MValue::Closure(param, body, env) => {
                            self.step()?;
                            let arg = stack.pop().unwrap();
                            control = self.load(Clo::Thunk(body, env.bind(&param, arg)));
                        }
                        MValue::Prim(prim, args) => {
                            control = self.apply_prim(prim, args, &mut stack)?;
                        }
                        other => {
                            return Err(Halt::Stuck(format!(
                                "applied non-function value {other:?}"
                            )));
                        }
                    }
                }
                Clo::Thunk(term, env) => match &term.kind {
                    TermKind::Var(name) => {
                        self.step()?;
                        if let Some(clo) = env.lookup(name) {
                            control = self.load(clo);
                        } else if let Some(def) = self.defs.get(name).cloned() {
                            control = self.load(Clo::Thunk(def, MEnv::default()));
                        } else {
                            return Err(Halt::Stuck(format!("unbound variable `{name}`")));
                        }
                    }
                    TermKind::App(fun, arg) => {
                        self.step()?;
                        stack.push(Clo::Thunk(Rc::new((**arg).clone()), env.clone()));
                        control = self.load(Clo::Thunk(Rc::new((**fun).clone()), env.clone()));
                    }
                    TermKind::Lambda { param, body, .. } => {
                        let body = Rc::new((**body).clone());
                        if stack.is_empty() {
                            return Ok(MValue::Closure(param.clone(), body, env.clone()));
                        }
                        self.step()?;
                        let arg = stack.pop().unwrap();
                        control = self.load(Clo::Thunk(body, env.bind(param, arg)));
                    }
                    TermKind::Pair(a, b) => {
                        self.step()?;
                        let va = self.force(Clo::Thunk(Rc::new((**a).clone()), env.clone()))?;
                        let vb = self.force(Clo::Thunk(Rc::new((**b).clone()), env.clone()))?;
                        control = Clo::Val(MValue::Pair(Box::new(va), Box::new(vb)));
                    }
                    TermKind::LetPair {
                        fst,
                        snd,
                        rhs,
                        body,
                    } => {
                        self.step()?;
                        let rhs = self.force(Clo::Thunk(Rc::new((**rhs).clone()), env.clone()))?;
                        let MValue::Pair(a, b) = rhs else {
                            return Err(Halt::Stuck("let (x, y) on a non-pair".to_string()));
                        };
                        let env = env
                            .bind(fst, Clo::Val(*a))
                            .bind(snd, Clo::Val(*b));
                        control = self.load(Clo::Thunk(Rc::new((**body).clone()), env));
                    }
                    TermKind::NatCase {
                        scrut,
                        zero,
                        succ_var,
                        succ,
                    } => {
                        self.step()?;
                        let scrut =
                            self.force(Clo::Thunk(Rc::new((**scrut).clone()), env.clone()))?;
                        let MValue::Nat(n) = scrut else {
                            return Err(Halt::Stuck("case on a non-natural".to_string()));
                        };
                        control = if n == 0 {
                            self.load(Clo::Thunk(Rc::new((**zero).clone()), env.clone()))
                        } else {
                            let env = env.bind(succ_var, Clo::Val(MValue::Nat(n - 1)));
                            self.load(Clo::Thunk(Rc::new((**succ).clone()), env))
                        };
                    }
                    TermKind::ListCase {
                        scrut,
                        nil,
                        head_var,
                        tail_var,
                        cons,
                    } => {
                        self.step()?;
                        let scrut =
                            self.force(Clo::Thunk(Rc::new((**scrut).clone()), env.clone()))?;
                        let MValue::List(items) = scrut else {
                            return Err(Halt::Stuck("lcase on a non-list".to_string()));
                        };
                        control = match items.split_first() {
                            None => self.load(Clo::Thunk(Rc::new((**nil).clone()), env.clone())),
                            Some((head, tail)) => {
                                let env = env
                                    .bind(head_var, Clo::Val(head.clone()))
                                    .bind(tail_var, Clo::Val(MValue::List(tail.to_vec())));
                                self.load(Clo::Thunk(Rc::new((**cons).clone()), env))
                            }
                        };
                    }
                    // Value forms were converted by `load`.
                    TermKind::RealLit(_)
                    | TermKind::NatLit(_)
                    | TermKind::UnitLit
                    | TermKind::Prim(_)
                    | TermKind::IdxApp(..) => unreachable!("value forms are loaded as values"),
                },
            }
        }
    }

    /// δ-rules: one step per full primitive application, operands forced
    /// via auxiliary runs. Partial applications absorb one argument per
    /// step.
    fn apply_prim(
        &mut self,
        prim: Prim,
        mut args: Vec<MValue>,
        stack: &mut Vec<Clo>,
    ) -> Result<Clo, Halt> {
        let arity = prim_arity(&prim);
        let needed = arity - args.len();
        if stack.len() >= needed {
            self.step()?;
            for _ in 0..needed {
                let arg = stack.pop().unwrap();
                args.push(self.force(arg)?);
            }
            Ok(Clo::Val(self.delta(&prim, args)?))
        } else {
            self.step()?;
            let arg = stack.pop().unwrap();
            args.push(self.force(arg)?);
            Ok(Clo::Val(MValue::Prim(prim, args)))
        }
    }

    fn delta(&mut self, prim: &Prim, mut args: Vec<MValue>) -> Result<MValue, Halt> {
        match prim {
            Prim::Add => match (&args[0], &args[1]) {
                (MValue::Real(a), MValue::Real(b)) => Ok(MValue::Real(a + b)),
                _ => Err(Halt::Stuck("add on non-reals".to_string())),
            },
            Prim::CMul(q) => match &args[0] {
                MValue::Real(a) => Ok(MValue::Real(rational_to_f64(q) * a)),
                _ => Err(Halt::Stuck("cmul on a non-real".to_string())),
            },
            Prim::Iter => {
                let start = args.pop().unwrap();
                let fun = args.pop().unwrap();
                let MValue::Nat(n) = args.pop().unwrap() else {
                    return Err(Halt::Stuck("iter on a non-natural".to_string()));
                };
                let mut acc = start;
                for _ in 0..n {
                    if self.depth >= Self::MAX_DEPTH {
                        return Err(Halt::DepthExceeded);
                    }
                    self.depth += 1;
                    let out = self.run(Clo::Val(fun.clone()), vec![Clo::Val(acc)]);
                    self.depth -= 1;
                    acc = out?;
                }
                Ok(acc)
            }
            Prim::Cons => {
                let tail = args.pop().unwrap();
                let head = args.pop().unwrap();
                let MValue::List(items) = tail else {
                    return Err(Halt::Stuck("cons onto a non-list".to_string()));
                };
                let mut out = Vec::with_capacity(items.len() + 1);
                out.push(head);
                out.extend(items);
                Ok(MValue::List(out))
            }
            Prim::Nil => Ok(MValue::List(Vec::new())),
        }
    }
}

/// Run a closed term to a weak-head value, counting transitions exactly.
/// Indices are erased up front.
pub fn krivine_run(term: &Term, defs: &BTreeMap<String, Term>, fuel: u64) -> MachineOutcome {
    let mut machine = Machine {
        defs: defs
            .iter()
            .map(|(name, t)| (name.clone(), Rc::new(erase_indices(t))))
            .collect(),
        fuel,
        steps: 0,
        depth: 0,
    };
    let erased = Rc::new(erase_indices(term));
    let result = match machine.run(Clo::Thunk(erased, MEnv::default()), Vec::new()) {
        Ok(value) => MachineResult::Done(value),
        Err(Halt::OutOfFuel) => MachineResult::OutOfFuel,
        Err(Halt::DepthExceeded) => MachineResult::DepthExceeded,
        Err(Halt::Stuck(why)) => MachineResult::Stuck(why),
    };
    MachineOutcome {
        result,
        steps: machine.steps,
    }
}
