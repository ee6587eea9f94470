//! Runtime values and environments.

use crate::syntax::ast::{Prim, Term};
use crate::syntax::rational::format_integer_or_decimal;
use num::BigRational;
use std::fmt;
use std::rc::Rc;

#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Real(f64),
    Nat(u64),
    Unit,
    Pair(Box<Value>, Box<Value>),
    List(Vec<Value>),
    Closure {
        param: String,
        body: Rc<Term>,
        env: Env,
    },
    /// A primitive applied to fewer arguments than its arity.
    PrimApp { prim: Prim, args: Vec<Value> },
}

impl Value {
    pub fn as_real(&self) -> Option<f64> {
        match self {
            Value::Real(x) => Some(*x),
            _ => None,
        }
    }

    /// Ground values have no function components.
    pub fn is_ground(&self) -> bool {
        match self {
            Value::Real(_) | Value::Nat(_) | Value::Unit => true,
            Value::Pair(a, b) => a.is_ground() && b.is_ground(),
            Value::List(items) => items.iter().all(|v| v.is_ground()),
            Value::Closure { .. } | Value::PrimApp { .. } => false,
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Real(x) => write!(f, "{x:?}"),
            Value::Nat(n) => write!(f, "{n}"),
            Value::Unit => write!(f, "()"),
            Value::Pair(a, b) => write!(f, "({a}, {b})"),
            Value::List(items) => {
                write!(f, "[")?;
                for (k, item) in items.iter().enumerate() {
                    if k > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{item}")?;
                }
                write!(f, "]")
            }
            Value::Closure { .. } => write!(f, "<fun>"),
            Value::PrimApp { prim, .. } => match prim {
                Prim::CMul(q) => write!(f, "<cmul({})>", format_integer_or_decimal(q)),
                other => write!(f, "<{}>", other.name()),
            },
        }
    }
}

/// Persistent environment: a shared linked list of bindings.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Env(Option<Rc<EnvNode>>);

#[derive(Debug, PartialEq)]
struct EnvNode {
    name: String,
    value: Value,
    rest: Env,
}

impl Env {
    pub fn empty() -> Env {
        Env(None)
    }

    pub fn bind(&self, name: &str, value: Value) -> Env {
        Env(Some(Rc::new(EnvNode {
            name: name.to_string(),
            value,
            rest: self.clone(),
        })))
    }

    pub fn lookup(&self, name: &str) -> Option<&Value> {
        let mut node = self.0.as_deref();
        while let Some(n) = node {
            if n.name == name {
                return Some(&n.value);
            }
            node = n.rest.0.as_deref();
        }
        None
    }
}

pub fn prim_arity(prim: &Prim) -> usize {
    match prim {
        Prim::Add => 2,
        Prim::CMul(_) => 1,
        Prim::Iter => 3,
        Prim::Nil => 0,
        Prim::Cons => 2,
    }
}

pub fn rational_to_f64(q: &BigRational) -> f64 {
    num::ToPrimitive::to_f64(q).unwrap_or(f64::MAX)
}
