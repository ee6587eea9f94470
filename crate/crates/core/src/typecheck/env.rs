//! Typing environments and fresh-name generation.

use crate::syntax::ast::{Index, Sort, Term, TermKind, Type};
use std::collections::{BTreeMap, BTreeSet};

/// Everything a judgment is checked under: term-variable bindings, index
/// variable sorts, the equality assumptions introduced by case refinement,
/// and the types of earlier top-level definitions.
#[derive(Debug, Clone, Default)]
pub struct TypeEnv {
    pub term_vars: BTreeMap<String, Type>,
    pub index_vars: BTreeMap<String, Sort>,
    pub assumptions: Vec<(String, Index)>,
    pub defs: BTreeMap<String, Type>,
}

impl TypeEnv {
    pub fn new() -> TypeEnv {
        TypeEnv::default()
    }

    pub fn bind_term(&self, name: &str, ty: Type) -> TypeEnv {
        let mut env = self.clone();
        env.term_vars.insert(name.to_string(), ty);
        env
    }

    pub fn bind_index(&self, name: &str, sort: Sort) -> TypeEnv {
        let mut env = self.clone();
        env.index_vars.insert(name.to_string(), sort);
        env
    }

    pub fn assume(&self, var: &str, value: Index) -> TypeEnv {
        let mut env = self.clone();
        env.assumptions.push((var.to_string(), value));
        env
    }
}

/// Fresh-name source, seeded with every identifier visible in the
/// declaration being checked so generated names never collide.
#[derive(Debug, Clone, Default)]
pub struct FreshGen {
    taken: BTreeSet<String>,
    counter: u64,
}

impl FreshGen {
    pub fn for_decl(ty: &Type, term: &Term) -> FreshGen {
        let mut taken = BTreeSet::new();
        collect_type_names(ty, &mut taken);
        collect_term_names(term, &mut taken);
        FreshGen { taken, counter: 0 }
    }

    pub fn reserve(&mut self, name: &str) {
        self.taken.insert(name.to_string());
    }

    pub fn fresh(&mut self, hint: &str) -> String {
        loop {
            self.counter += 1;
            let candidate = format!("_{hint}{}", self.counter);
            if self.taken.insert(candidate.clone()) {
                return candidate;
            }
        }
    }
}

fn collect_index_names(index: &Index, out: &mut BTreeSet<String>) {
    match index {
        Index::Var(name, _) => {
            out.insert(name.clone());
        }
        Index::Nat(_) | Index::Rat(_) | Index::Inf => {}
        Index::Sum(a, b) | Index::Prod(a, b) | Index::Pow(a, b) => {
            collect_index_names(a, out);
            collect_index_names(b, out);
        }
    }
}

pub(crate) fn collect_type_names(ty: &Type, out: &mut BTreeSet<String>) {
    match ty {
        Type::Real | Type::Unit => {}
        Type::Nat(ix) => collect_index_names(ix, out),
        Type::List(ix, elem) => {
            collect_index_names(ix, out);
            collect_type_names(elem, out);
        }
        Type::Tensor(a, b) | Type::Arrow(a, b) => {
            collect_type_names(a, out);
            collect_type_names(b, out);
        }
        Type::Bang(ix, body) => {
            collect_index_names(ix, out);
            collect_type_names(body, out);
        }
        Type::Forall(v, _, body) => {
            out.insert(v.clone());
            collect_type_names(body, out);
        }
        Type::BoundedBang(v, ix, body) => {
            out.insert(v.clone());
            collect_index_names(ix, out);
            collect_type_names(body, out);
        }
    }
}

fn collect_term_names(term: &Term, out: &mut BTreeSet<String>) {
    match &term.kind {
        TermKind::Var(name) => {
            out.insert(name.clone());
        }
        TermKind::RealLit(_) | TermKind::NatLit(_) | TermKind::UnitLit | TermKind::Prim(_) => {}
        TermKind::Lambda {
            param,
            grade,
            param_ty,
            body,
        } => {
            out.insert(param.clone());
            collect_index_names(grade, out);
            collect_type_names(param_ty, out);
            collect_term_names(body, out);
        }
        TermKind::App(f, a) => {
            collect_term_names(f, out);
            collect_term_names(a, out);
        }
        TermKind::IdxApp(f, ix) => {
            collect_term_names(f, out);
            collect_index_names(ix, out);
        }
        TermKind::Pair(a, b) => {
            collect_term_names(a, out);
            collect_term_names(b, out);
        }
        TermKind::LetPair {
            fst,
            snd,
            rhs,
            body,
        } => {
            out.insert(fst.clone());
            out.insert(snd.clone());
            collect_term_names(rhs, out);
            collect_term_names(body, out);
        }
        TermKind::NatCase {
            scrut,
            zero,
            succ_var,
            succ,
        } => {
            out.insert(succ_var.clone());
            collect_term_names(scrut, out);
            collect_term_names(zero, out);
            collect_term_names(succ, out);
        }
        TermKind::ListCase {
            scrut,
            nil,
            head_var,
            tail_var,
            cons,
        } => {
            out.insert(head_var.clone());
            out.insert(tail_var.clone());
            collect_term_names(scrut, out);
            collect_term_names(nil, out);
            collect_term_names(cons, out);
        }
    }
}
