//! Alpha equivalence for indices, types and terms.
//!
//! Bound variables are compared by binding position, free variables by name
//! (and sort, for index variables). Term and index variables live in
//! separate namespaces; `case`/`lcase` branches bind in both at once.

use super::ast::*;
use std::collections::HashMap;

#[derive(Default)]
struct AlphaCtx {
    term_left: HashMap<String, u32>,
    term_right: HashMap<String, u32>,
    idx_left: HashMap<String, u32>,
    idx_right: HashMap<String, u32>,
    next: u32,
}

impl AlphaCtx {
    fn bind_term<R>(&mut self, a: &str, b: &str, body: impl FnOnce(&mut Self) -> R) -> R {
        let level = self.next;
        self.next += 1;
        let old_a = self.term_left.insert(a.to_string(), level);
        let old_b = self.term_right.insert(b.to_string(), level);
        let result = body(self);
        restore(&mut self.term_left, a, old_a);
        restore(&mut self.term_right, b, old_b);
        result
    }

    fn bind_index<R>(&mut self, a: &str, b: &str, body: impl FnOnce(&mut Self) -> R) -> R {
        let level = self.next;
        self.next += 1;
        let old_a = self.idx_left.insert(a.to_string(), level);
        let old_b = self.idx_right.insert(b.to_string(), level);
        let result = body(self);
        restore(&mut self.idx_left, a, old_a);
        restore(&mut self.idx_right, b, old_b);
        result
    }
}

fn restore(map: &mut HashMap<String, u32>, key: &str, old: Option<u32>) {
    match old {
        Some(v) => {
            map.insert(key.to_string(), v);
        }
        None => {
            map.remove(key);
        }
    }
}

pub fn alpha_equiv_index(a: &Index, b: &Index) -> bool {
    index_eq(a, b, &mut AlphaCtx::default())
}

pub fn alpha_equiv_type(a: &Type, b: &Type) -> bool {
    type_eq(a, b, &mut AlphaCtx::default())
}

pub fn alpha_equiv_term(a: &Term, b: &Term) -> bool {
    term_eq(a, b, &mut AlphaCtx::default())
}

pub fn alpha_equiv_program(a: &Program, b: &Program) -> bool {
    a.decls.len() == b.decls.len()
        && a.decls.iter().zip(&b.decls).all(|(da, db)| match (da, db) {
            (
                Decl::Def {
                    name: na,
                    ty: ta,
                    term: ea,
                    ..
                },
                Decl::Def {
                    name: nb,
                    ty: tb,
                    term: eb,
                    ..
                },
            ) => na == nb && alpha_equiv_type(ta, tb) && alpha_equiv_term(ea, eb),
            (
                Decl::Check {
                    term: ea, ty: ta, ..
                },
                Decl::Check {
                    term: eb, ty: tb, ..
                },
            ) => alpha_equiv_type(ta, tb) && alpha_equiv_term(ea, eb),
            _ => false,
        })
}

fn index_eq(a: &Index, b: &Index, ctx: &mut AlphaCtx) -> bool {
    match (a, b) {
        (Index::Var(na, sa), Index::Var(nb, sb)) => {
            match (ctx.idx_left.get(na), ctx.idx_right.get(nb)) {
                (Some(la), Some(lb)) => la == lb,
                (None, None) => na == nb && sa == sb,
                _ => false,
            }
        }
        (Index::Nat(x), Index::Nat(y)) => x == y,
        (Index::Rat(x), Index::Rat(y)) => x == y,
        (Index::Inf, Index::Inf) => true,
        (Index::Sum(a1, a2), Index::Sum(b1, b2))
        | (Index::Prod(a1, a2), Index::Prod(b1, b2))
        | (Index::Pow(a1, a2), Index::Pow(b1, b2)) => {
            index_eq(a1, b1, ctx) && index_eq(a2, b2, ctx)
        }
        _ => false,
    }
}

fn type_eq(a: &Type, b: &Type, ctx: &mut AlphaCtx) -> bool {
    match (a, b) {
        (Type::Real, Type::Real) | (Type::Unit, Type::Unit) => true,
        (Type::Nat(ia), Type::Nat(ib)) => index_eq(ia, ib, ctx),
        (Type::List(ia, ea), Type::List(ib, eb)) => {
            index_eq(ia, ib, ctx) && type_eq(ea, eb, ctx)
        }
        (Type::Tensor(a1, a2), Type::Tensor(b1, b2))
        | (Type::Arrow(a1, a2), Type::Arrow(b1, b2)) => {
            type_eq(a1, b1, ctx) && type_eq(a2, b2, ctx)
        }
        (Type::Bang(ia, ta), Type::Bang(ib, tb)) => {
            index_eq(ia, ib, ctx) && type_eq(ta, tb, ctx)
        }
        (Type::Forall(va, sa, ta), Type::Forall(vb, sb, tb)) => {
            sa == sb && ctx.bind_index(va, vb, |ctx| type_eq(ta, tb, ctx))
        }
        (Type::BoundedBang(va, ia, ta), Type::BoundedBang(vb, ib, tb)) => {
            index_eq(ia, ib, ctx) && ctx.bind_index(va, vb, |ctx| type_eq(ta, tb, ctx))
        }
        _ => false,
    }
}

fn term_eq(a: &Term, b: &Term, ctx: &mut AlphaCtx) -> bool {
    match (&a.kind, &b.kind) {
        (TermKind::Var(na), TermKind::Var(nb)) => {
            match (ctx.term_left.get(na), ctx.term_right.get(nb)) {
                (Some(la), Some(lb)) => la == lb,
                (None, None) => na == nb,
                _ => false,
            }
        }
        (TermKind::RealLit(x), TermKind::RealLit(y)) => x == y,
        (TermKind::NatLit(x), TermKind::NatLit(y)) => x == y,
        (TermKind::UnitLit, TermKind::UnitLit) => true,
        (TermKind::Prim(pa), TermKind::Prim(pb)) => pa == pb,
        (
            TermKind::Lambda {
                param: pa,
                grade: ga,
                param_ty: ta,
                body: ba,
            },
            TermKind::Lambda {
                param: pb,
                grade: gb,
                param_ty: tb,
                body: bb,
            },
        ) => {
            index_eq(ga, gb, ctx)
                && type_eq(ta, tb, ctx)
                && ctx.bind_term(pa, pb, |ctx| term_eq(ba, bb, ctx))
        }
        (TermKind::App(fa, aa), TermKind::App(fb, ab)) => {
            term_eq(fa, fb, ctx) && term_eq(aa, ab, ctx)
        }
        (TermKind::IdxApp(fa, ia), TermKind::IdxApp(fb, ib)) => {
            term_eq(fa, fb, ctx) && index_eq(ia, ib, ctx)
        }
        (TermKind::Pair(a1, a2), TermKind::Pair(b1, b2)) => {
            term_eq(a1, b1, ctx) && term_eq(a2, b2, ctx)
        }
        (
            TermKind::LetPair {
                fst: fa,
                snd: sa,
                rhs: ra,
                body: ba,
            },
            TermKind::LetPair {
                fst: fb,
                snd: sb,
                rhs: rb,
                body: bb,
            },
        ) => {
            term_eq(ra, rb, ctx)
                && ctx.bind_term(fa, fb, |ctx| {
                    ctx.bind_term(sa, sb, |ctx| term_eq(ba, bb, ctx))
                })
        }
        (
            TermKind::NatCase {
                scrut: na,
                zero: za,
                succ_var: va,
                succ: sa,
            },
            TermKind::NatCase {
                scrut: nb,
                zero: zb,
                succ_var: vb,
                succ: sb,
            },
        ) => {
            term_eq(na, nb, ctx)
                && term_eq(za, zb, ctx)
                && ctx.bind_term(va, vb, |ctx| {
                    ctx.bind_index(va, vb, |ctx| term_eq(sa, sb, ctx))
                })
        }
        (
            TermKind::ListCase {
                scrut: na,
                nil: xa,
                head_var: ha,
                tail_var: ta,
                cons: ca,
            },
            TermKind::ListCase {
                scrut: nb,
                nil: xb,
                head_var: hb,
                tail_var: tb,
                cons: cb,
            },
        ) => {
            term_eq(na, nb, ctx)
                && term_eq(xa, xb, ctx)
                && ctx.bind_term(ha, hb, |ctx| {
                    ctx.bind_term(ta, tb, |ctx| {
                        ctx.bind_index(ta, tb, |ctx| term_eq(ca, cb, ctx))
                    })
                })
        }
        _ => false,
    }
}
