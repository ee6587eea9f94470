//! Printers for indices, types, terms and programs.
//!
//! Output re-parses to an alpha-equivalent AST. Right-nested operands of the
//! left-associative operators are parenthesized so the tree shape survives
//! the round trip exactly.

use super::ast::*;
use super::rational::format_decimal;
use std::fmt::Write;

pub fn pretty_index(ix: &Index) -> String {
    let mut out = String::new();
    index_prec(&mut out, ix, 0);
    out
}

pub fn pretty_type(ty: &Type) -> String {
    let mut out = String::new();
    type_prec(&mut out, ty, 0);
    out
}

pub fn pretty_term(term: &Term) -> String {
    let mut out = String::new();
    term_prec(&mut out, term, 0);
    out
}

pub fn pretty_program(program: &Program) -> String {
    let mut out = String::new();
    for decl in &program.decls {
        match decl {
            Decl::Def { name, ty, term, .. } => {
                let _ = writeln!(
                    out,
                    "def {name} : {} = {} ;",
                    pretty_type(ty),
                    pretty_term(term)
                );
            }
            Decl::Check { term, ty, .. } => {
                let _ = writeln!(out, "check {} : {} ;", pretty_term(term), pretty_type(ty));
            }
        }
    }
    out
}

// Index precedence: 0 sum, 1 product, 2 power, 3 atom.
fn index_prec(out: &mut String, ix: &Index, prec: u8) {
    match ix {
        Index::Var(name, _) => out.push_str(name),
        Index::Nat(n) => {
            let _ = write!(out, "{n}");
        }
        Index::Rat(q) => out.push_str(&format_decimal(q)),
        Index::Inf => out.push_str("inf"),
        Index::Sum(a, b) => {
            paren(out, prec > 0, |out| {
                index_prec(out, a, 0);
                out.push_str(" + ");
                index_prec(out, b, 1);
            });
        }
        Index::Prod(a, b) => {
            paren(out, prec > 1, |out| {
                index_prec(out, a, 1);
                out.push_str(" * ");
                index_prec(out, b, 2);
            });
        }
        Index::Pow(base, exp) => {
            paren(out, prec > 2, |out| {
                index_prec(out, base, 3);
                out.push_str(" ^ ");
                index_prec(out, exp, 3);
            });
        }
    }
}

// Type precedence: 0 quantifiers, 1 arrow, 2 tensor, 3 atom.
fn type_prec(out: &mut String, ty: &Type, prec: u8) {
    match ty {
        Type::Real => out.push_str("R"),
        Type::Unit => out.push_str("Unit"),
        Type::Nat(ix) => {
            let _ = write!(out, "Nat[{}]", pretty_index(ix));
        }
        Type::List(ix, elem) => {
            let _ = write!(out, "List[{}] ", pretty_index(ix));
            type_prec(out, elem, 3);
        }
        Type::Bang(ix, body) => {
            let _ = write!(out, "![{}] ", pretty_index(ix));
            type_prec(out, body, 3);
        }
        Type::Tensor(a, b) => {
            paren(out, prec > 2, |out| {
                type_prec(out, a, 3);
                out.push_str(" * ");
                type_prec(out, b, 3);
            });
        }
        Type::Arrow(dom, cod) => {
            paren(out, prec > 1, |out| {
                // `![inf] A -o B` is written with the `->` sugar.
                if let Type::Bang(Index::Inf, inner) = dom.as_ref() {
                    type_prec(out, inner, 2);
                    out.push_str(" -> ");
                } else {
                    type_prec(out, dom, 2);
                    out.push_str(" -o ");
                }
                type_prec(out, cod, 1);
            });
        }
        Type::Forall(var, sort, body) => {
            paren(out, prec > 0, |out| {
                let _ = write!(out, "forall {var} : {sort} . ");
                type_prec(out, body, 0);
            });
        }
        Type::BoundedBang(var, bound, body) => {
            paren(out, prec > 0, |out| {
                let _ = write!(out, "bang {var} < {} . ", pretty_index(bound));
                type_prec(out, body, 0);
            });
        }
    }
}

// Term precedence: 0 full term, 1 application, 2 atom.
fn term_prec(out: &mut String, term: &Term, prec: u8) {
    match &term.kind {
        TermKind::Var(name) => out.push_str(name),
        TermKind::NatLit(n) => {
            let _ = write!(out, "{n}");
        }
        TermKind::RealLit(q) => out.push_str(&format_decimal(q)),
        TermKind::UnitLit => out.push_str("()"),
        TermKind::Prim(p) => match p {
            Prim::CMul(q) => {
                let _ = write!(out, "cmul({})", format_decimal(q));
            }
            other => out.push_str(other.name()),
        },
        TermKind::Pair(a, b) => {
            out.push('(');
            term_prec(out, a, 0);
            out.push_str(", ");
            term_prec(out, b, 0);
            out.push(')');
        }
        TermKind::Lambda {
            param,
            grade,
            param_ty,
            body,
        } => {
            paren(out, prec > 0, |out| {
                let _ = write!(
                    out,
                    "fun ({param} :[{}] {}) => ",
                    pretty_index(grade),
                    pretty_type(param_ty)
                );
                term_prec(out, body, 0);
            });
        }
        TermKind::App(f, a) => {
            paren(out, prec > 1, |out| {
                term_prec(out, f, 1);
                out.push(' ');
                term_prec(out, a, 2);
            });
        }
        TermKind::IdxApp(f, ix) => {
            paren(out, prec > 1, |out| {
                term_prec(out, f, 1);
                let _ = write!(out, " @[{}]", pretty_index(ix));
            });
        }
        TermKind::LetPair {
            fst,
            snd,
            rhs,
            body,
        } => {
            paren(out, prec > 0, |out| {
                let _ = write!(out, "let ({fst}, {snd}) = ");
                term_prec(out, rhs, 0);
                out.push_str(" in ");
                term_prec(out, body, 0);
            });
        }
        TermKind::NatCase {
            scrut,
            zero,
            succ_var,
            succ,
        } => {
            paren(out, prec > 0, |out| {
                out.push_str("case ");
                term_prec(out, scrut, 0);
                out.push_str(" { Z => ");
                term_prec(out, zero, 0);
                let _ = write!(out, " | S {succ_var} => ");
                term_prec(out, succ, 0);
                out.push_str(" }");
            });
        }
        TermKind::ListCase {
            scrut,
            nil,
            head_var,
            tail_var,
            cons,
        } => {
            paren(out, prec > 0, |out| {
                out.push_str("lcase ");
                term_prec(out, scrut, 0);
                out.push_str(" { nil => ");
                term_prec(out, nil, 0);
                let _ = write!(out, " | cons {head_var} {tail_var} => ");
                term_prec(out, cons, 0);
                out.push_str(" }");
            });
        }
    }
}

fn paren(out: &mut String, needed: bool, body: impl FnOnce(&mut String)) {
    if needed {
        out.push('(');
        body(out);
        out.push(')');
    } else {
        body(out);
    }
}
