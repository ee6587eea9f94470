//! Declaration-by-declaration checking: the constraint-generation phase
//! followed by the solver phase.

use super::env::{FreshGen, TypeEnv};
use super::infer::Checker;
use super::prims::IterScheme;
use super::subtype::well_formed_type;
use super::usage::Usage;
use super::TypeError;
use crate::index::{entails, Constraint, Entailment};
use crate::syntax::ast::{Decl, Program, Span, Type};

#[derive(Debug, Clone, Copy, Default)]
pub struct CheckOptions {
    pub iter_scheme: IterScheme,
}

#[derive(Debug, Clone)]
pub enum Verdict {
    Accepted,
    /// Some constraint could not be discharged; the first one is carried
    /// with its provenance.
    Rejected { unsolved: Constraint },
    /// The declaration never produced a full constraint set.
    Error { message: String, span: Span },
}

impl Verdict {
    pub fn is_accepted(&self) -> bool {
        matches!(self, Verdict::Accepted)
    }
}

#[derive(Debug, Clone)]
pub struct CheckResult {
    pub name: String,
    pub declared: Type,
    pub usage: Usage,
    pub constraints: Vec<Constraint>,
    pub verdict: Verdict,
}

/// Check every declaration in order. Definitions become visible to later
/// declarations (and to their own bodies, allowing structural recursion) at
/// their declared type, regardless of verdict; a broken declaration is
/// reported, never fatal.
pub fn check_program(program: &Program, options: &CheckOptions) -> Vec<CheckResult> {
    let mut env = TypeEnv::new();
    program
        .decls
        .iter()
        .map(|decl| check_decl(&mut env, decl, options))
        .collect()
}

fn check_decl(env: &mut TypeEnv, decl: &Decl, options: &CheckOptions) -> CheckResult {
    let span = decl.span();
    let ty = decl.ty().clone();
    let term = decl.term();
    let name = match decl {
        Decl::Def { name, .. } => {
            env.defs.insert(name.clone(), ty.clone());
            name.clone()
        }
        Decl::Check { .. } => format!("check@{span}"),
    };

    let mut checker = Checker::new(options.iter_scheme, FreshGen::for_decl(&ty, term));
    let outcome: Result<Usage, TypeError> = (|| {
        well_formed_type(&ty, env, span)?;
        // The quantifier prefix of the declared type scopes over the body.
        let mut inner = env.clone();
        let mut expected = ty.clone();
        while let Type::Forall(var, sort, body) = expected {
            inner.index_vars.insert(var, sort);
            expected = *body;
        }
        checker.check(&inner, term, &expected, "decl")
    })();

    let verdict = match outcome {
        Err(error) => Verdict::Error {
            message: error.to_string(),
            span: error.span(),
        },
        Ok(_) => {
            let unsolved = checker
                .constraints
                .iter()
                .find(|c| entails(c) == Entailment::Unknown);
            match unsolved {
                Some(c) => Verdict::Rejected {
                    unsolved: c.clone(),
                },
                None => Verdict::Accepted,
            }
        }
    };

    CheckResult {
        name,
        declared: ty,
        usage: Usage::empty(),
        constraints: checker.constraints,
        verdict,
    }
}
