//! Constraints and the entailment solver.
//!
//! The solver answers `Yes` only when the relation holds under every
//! sort-respecting valuation. It substitutes the case-refinement
//! assumptions into both sides, normalizes, and then decides by exact
//! evaluation (closed sides) or coefficient-wise dominance. `Unknown` on a
//! true constraint is permitted; `Yes` on a false one is a bug.

use super::number::Extended;
use super::poly::{normalize, PolyNF};
use super::subst::subst_unchecked;
use crate::syntax::ast::{Index, Span};
use crate::syntax::pretty_index;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rel {
    Le,
    Eq,
}

impl fmt::Display for Rel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rel::Le => write!(f, "<="),
            Rel::Eq => write!(f, "="),
        }
    }
}

/// Where a constraint came from: source position plus the typing rule that
/// emitted it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Origin {
    pub span: Span,
    pub rule: &'static str,
}

/// An index inequality or equality under equality assumptions.
///
/// Assumption left-hand sides are distinct variables and never occur in
/// their own right-hand side, so they act as oriented substitutions.
#[derive(Debug, Clone)]
pub struct Constraint {
    pub assumptions: Vec<(String, Index)>,
    pub rel: Rel,
    pub lhs: Index,
    pub rhs: Index,
    pub origin: Origin,
}

impl Constraint {
    pub fn new(
        assumptions: Vec<(String, Index)>,
        rel: Rel,
        lhs: Index,
        rhs: Index,
        origin: Origin,
    ) -> Constraint {
        Constraint {
            assumptions,
            rel,
            lhs,
            rhs,
            origin,
        }
    }

    /// JSON shape used by the `constraints` command.
    pub fn to_json(&self, file: &str) -> serde_json::Value {
        serde_json::json!({
            "assume": self
                .assumptions
                .iter()
                .map(|(v, t)| serde_json::json!([v, pretty_index(t)]))
                .collect::<Vec<_>>(),
            "rel": match self.rel { Rel::Le => "LE", Rel::Eq => "EQ" },
            "lhs": pretty_index(&self.lhs),
            "rhs": pretty_index(&self.rhs),
            "at": format!("{}:{}", file, self.origin.span),
            "rule": self.origin.rule,
        })
    }
}

impl fmt::Display for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.assumptions.is_empty() {
            let assumptions: Vec<String> = self
                .assumptions
                .iter()
                .map(|(v, t)| format!("{v} = {}", pretty_index(t)))
                .collect();
            write!(f, "{} |- ", assumptions.join(", "))?;
        }
        write!(
            f,
            "{} {} {}",
            pretty_index(&self.lhs),
            self.rel,
            pretty_index(&self.rhs)
        )
    }
}

/// A finite map from index variables to values: naturals for size
/// variables, nonnegative rationals or ∞ for sensitivity variables.
#[derive(Debug, Clone, Default)]
pub struct Valuation(pub BTreeMap<String, Extended>);

impl Valuation {
    pub fn insert(&mut self, name: &str, value: Extended) {
        self.0.insert(name.to_string(), value);
    }

    pub fn get(&self, name: &str) -> Option<&Extended> {
        self.0.get(name)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Entailment {
    Yes,
    Unknown,
}

/// Evaluate a (closed-under-`v`) index term exactly.
pub fn eval_closed(index: &Index, v: &Valuation) -> Option<Extended> {
    match index {
        Index::Var(name, _) => v.get(name).cloned(),
        Index::Nat(n) => Some(Extended::from_nat(*n)),
        Index::Rat(q) => Some(Extended::from_rational(q.clone())),
        Index::Inf => Some(Extended::Infinity),
        Index::Sum(a, b) => Some(eval_closed(a, v)?.add(&eval_closed(b, v)?)),
        Index::Prod(a, b) => Some(eval_closed(a, v)?.mul(&eval_closed(b, v)?)),
        Index::Pow(base, exp) => {
            let b = eval_closed(base, v)?;
            let e = eval_closed(exp, v)?.as_nat()?;
            Some(b.pow(e))
        }
    }
}

/// Apply the assumption substitutions until a fixed point (the assumption
/// set is acyclic, so at most `len` passes are needed).
fn apply_assumptions(index: &Index, assumptions: &[(String, Index)]) -> Index {
    let mut current = index.clone();
    for _ in 0..=assumptions.len() {
        let mut next = current.clone();
        for (var, replacement) in assumptions {
            next = subst_unchecked(&next, var, replacement);
        }
        if next == current {
            break;
        }
        current = next;
    }
    current
}

/// Decide a constraint. Sound: `Yes` implies the relation holds for every
/// sort-respecting valuation. Never errors; `Unknown` is the fallback.
pub fn entails(constraint: &Constraint) -> Entailment {
    let lhs = apply_assumptions(&constraint.lhs, &constraint.assumptions);
    let rhs = apply_assumptions(&constraint.rhs, &constraint.assumptions);
    let ln = normalize(&lhs);
    let rn = normalize(&rhs);
    match constraint.rel {
        Rel::Eq => {
            if ln == rn {
                Entailment::Yes
            } else {
                match (ln.closed_value(), rn.closed_value()) {
                    (Some(a), Some(b)) if a == b => Entailment::Yes,
                    _ => Entailment::Unknown,
                }
            }
        }
        Rel::Le => le_dominates(&ln, &rn),
    }
}

fn le_dominates(lhs: &PolyNF, rhs: &PolyNF) -> Entailment {
    if rhs.is_infinite() {
        return Entailment::Yes;
    }
    if lhs.is_infinite() {
        return Entailment::Unknown;
    }
    if let (Some(a), Some(b)) = (lhs.closed_value(), rhs.closed_value()) {
        return if a <= b {
            Entailment::Yes
        } else {
            Entailment::Unknown
        };
    }
    // Atom sets of the rhs's ∞-monomials: ∞·a₁⋯aₖ dominates any monomial
    // whose atoms include {a₁..aₖ} (it is 0 exactly where they all vanish,
    // ∞ elsewhere).
    let inf_covers: Vec<BTreeSet<_>> = rhs
        .terms
        .keys()
        .filter(|m| m.has_inf())
        .map(|m| {
            m.0.keys()
                .filter(|a| !matches!(a, super::poly::Atom::Inf))
                .cloned()
                .collect()
        })
        .collect();
    for (mono, coeff) in &lhs.terms {
        let dominated_by_coeff = rhs
            .terms
            .get(mono)
            .map(|rc| coeff <= rc)
            .unwrap_or(false);
        if dominated_by_coeff {
            continue;
        }
        let atoms: BTreeSet<_> = mono
            .0
            .keys()
            .filter(|a| !matches!(a, super::poly::Atom::Inf))
            .cloned()
            .collect();
        let covered_by_inf = inf_covers.iter().any(|cover| cover.is_subset(&atoms));
        if !covered_by_inf {
            return Entailment::Unknown;
        }
    }
    Entailment::Yes
}

/// Evaluate both sides of a constraint under a valuation and check the
/// relation holds — the independent oracle for solver soundness.
pub fn holds_under(constraint: &Constraint, v: &Valuation) -> Option<bool> {
    let lhs = apply_assumptions(&constraint.lhs, &constraint.assumptions);
    let rhs = apply_assumptions(&constraint.rhs, &constraint.assumptions);
    let a = eval_closed(&lhs, v)?;
    let b = eval_closed(&rhs, v)?;
    Some(match constraint.rel {
        Rel::Le => a <= b,
        Rel::Eq => a == b,
    })
}

/// Free variables of a constraint after assumption substitution, with
/// sorts — what a valuation must cover.
pub fn constraint_vars(constraint: &Constraint) -> BTreeSet<(String, crate::syntax::Sort)> {
    let lhs = apply_assumptions(&constraint.lhs, &constraint.assumptions);
    let rhs = apply_assumptions(&constraint.rhs, &constraint.assumptions);
    let mut vars = BTreeSet::new();
    for (name, sort) in lhs.free_vars().into_iter().chain(rhs.free_vars()) {
        vars.insert((name, sort));
    }
    vars
}
