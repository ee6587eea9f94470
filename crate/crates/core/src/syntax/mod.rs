//! Concrete grammar, abstract syntax, parsing and printing.
//!
//! The surface language, `#` starting a line comment:
//!
//! ```text
//! program := decl* ;
//! decl    := "def" IDENT ":" type "=" term ";"  |  "check" term ":" type ";"
//! type    := "forall" IDENT ":" ("size"|"sens") "." type
//!          | "bang" IDENT "<" index "." type
//!          | arrow
//! arrow   := tensor ( ("-o" | "->") arrow )?
//! tensor  := atomT ( "*" atomT )?
//! atomT   := "R" | "Unit" | "Nat" "[" index "]" | "List" "[" index "]" atomT
//!          | "!" "[" index "]" atomT | "(" type ")"
//! index   := iterm ( "+" iterm )*
//! iterm   := ifact ( "*" ifact )*
//! ifact   := iatom ( "^" iatom )?
//! iatom   := NATLIT | RATLIT | "inf" | IDENT | "(" index ")"
//! term    := "fun" "(" IDENT ":" "[" index "]" type ")" "=>" term
//!          | "let" "(" IDENT "," IDENT ")" "=" term "in" term
//!          | "case" term "{" "Z" "=>" term "|" "S" IDENT "=>" term "}"
//!          | "lcase" term "{" "nil" "=>" term "|" "cons" IDENT IDENT "=>" term "}"
//!          | app
//! app     := atom ( atom | "@" "[" index "]" )*
//! atom    := IDENT | NATLIT | RATLIT | "()" | "(" term "," term ")" | "(" term ")"
//!          | "add" | "cmul" "(" RATLIT ")" | "iter" | "nil" | "cons"
//! ```
//!
//! `A -> B` is sugar for `![inf] A -o B`. In `case`/`lcase` branches the
//! bound variable (`m`, resp. the tail) is also usable as a size index.

mod alpha;
pub mod ast;
mod lexer;
mod parser;
mod pretty;
pub mod rational;

pub use alpha::{alpha_equiv_index, alpha_equiv_program, alpha_equiv_term, alpha_equiv_type};
pub use ast::{Decl, Index, Prim, Program, Sort, Span, Term, TermKind, Type};
pub use parser::{parse_index, parse_program, parse_term, parse_type};
pub use pretty::{pretty_index, pretty_program, pretty_term, pretty_type};

use thiserror::Error;

#[derive(Debug, Clone, Error)]
pub enum ParseError {
    #[error("{span}: {message}")]
    Lex { message: String, span: ast::Span },
    #[error("{span}: expected {expected}, found {found}")]
    Unexpected {
        expected: String,
        found: String,
        span: ast::Span,
    },
    #[error("{span}: unbound index variable `{name}`")]
    UnboundIndexVar { name: String, span: ast::Span },
    #[error("{span}: duplicate definition `{name}`")]
    DuplicateDef { name: String, span: ast::Span },
}

impl ParseError {
    pub fn span(&self) -> ast::Span {
        match self {
            ParseError::Lex { span, .. }
            | ParseError::Unexpected { span, .. }
            | ParseError::UnboundIndexVar { span, .. }
            | ParseError::DuplicateDef { span, .. } => *span,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::ast::*;
    use super::*;

    #[test]
    fn parses_the_two_sensitive_doubling_check() {
        let program = parse_program("check fun (x :[2] R) => add x x : ![2] R -o R ;").unwrap();
        assert_eq!(program.decls.len(), 1);
        let Decl::Check { ty, .. } = &program.decls[0] else {
            panic!("expected a check declaration");
        };
        let expected = Type::arrow(Type::bang(Index::Nat(2), Type::Real), Type::Real);
        assert!(alpha_equiv_type(ty, &expected));
    }

    #[test]
    fn empty_source_is_the_empty_program() {
        assert!(parse_program("").unwrap().decls.is_empty());
        assert!(parse_program("  # just a comment\n").unwrap().decls.is_empty());
    }

    #[test]
    fn parsing_is_type_agnostic() {
        // Arity and type errors are the checker's business.
        let program = parse_program("def d : R = add 1.0 ;").unwrap();
        assert_eq!(program.decls.len(), 1);
    }

    #[test]
    fn duplicate_names_are_rejected() {
        let err = parse_program("def a : R = 1.0 ; def a : R = 2.0 ;").unwrap_err();
        assert!(matches!(err, ParseError::DuplicateDef { .. }));
    }

    #[test]
    fn reports_position_of_syntax_errors() {
        let err = parse_program("def x : R =\n  fun ;").unwrap_err();
        assert_eq!(err.span().line, 2);
    }

    #[test]
    fn fn_arrow_desugars_to_inf_bang() {
        let ty = parse_type("R -> R").unwrap();
        let expected = Type::arrow(Type::bang(Index::Inf, Type::Real), Type::Real);
        assert!(alpha_equiv_type(&ty, &expected));
        // And it prints back with the sugar.
        assert_eq!(pretty_type(&ty), "R -> R");
    }

    #[test]
    fn grade_product_prints_as_displayed() {
        let ty = Type::arrow(
            Type::bang(
                Index::prod(Index::var("r", Sort::Sens), Index::var("i", Sort::Size)),
                Type::Real,
            ),
            Type::Real,
        );
        assert_eq!(pretty_type(&ty), "![r * i] R -o R");
        assert_eq!(pretty_type(&Type::Real), "R");
    }

    #[test]
    fn index_vars_resolve_sorts_from_binders() {
        let ty = parse_type("forall i : size . forall r : sens . ![r * i] R -o R").unwrap();
        let Type::Forall(_, _, body) = ty else { panic!() };
        let Type::Forall(_, _, body) = *body else { panic!() };
        let Type::Arrow(dom, _) = *body else { panic!() };
        let Type::Bang(grade, _) = *dom else { panic!() };
        assert_eq!(
            grade,
            Index::prod(Index::var("r", Sort::Sens), Index::var("i", Sort::Size))
        );
    }

    #[test]
    fn unbound_index_vars_fail_at_parse_time() {
        let err = parse_type("Nat[i]").unwrap_err();
        assert!(matches!(err, ParseError::UnboundIndexVar { .. }));
    }

    #[test]
    fn alpha_equivalence_examples() {
        let a = parse_type("forall i : size . Nat[i]").unwrap();
        let b = parse_type("forall j : size . Nat[j]").unwrap();
        assert!(alpha_equiv_type(&a, &b));

        // Free index variables differ by name.
        let scope = vec![
            ("i".to_string(), Sort::Size),
            ("j".to_string(), Sort::Size),
        ];
        let ia = parse_index("i", &scope).unwrap();
        let ib = parse_index("j", &scope).unwrap();
        assert!(!alpha_equiv_index(&ia, &ib));

        let ta = parse_term("fun (x :[1] R) => x").unwrap();
        let tb = parse_term("fun (y :[1] R) => y").unwrap();
        assert!(alpha_equiv_term(&ta, &tb));
        let tc = parse_term("fun (x :[1] R) => add x x").unwrap();
        assert!(!alpha_equiv_term(&ta, &tc));
    }

    #[test]
    fn case_branches_bind_the_size_index() {
        let term = parse_term("fun (n :[1] Nat[3]) => case n { Z => 0 | S m => m @[m] }");
        // `m @[m]` is nonsense to the checker but must parse: the branch
        // binds `m` as a size index.
        assert!(term.is_ok());
        let bad = parse_term("case n { Z => 0 | S m => x @[q] }");
        assert!(matches!(bad, Err(ParseError::UnboundIndexVar { .. })));
    }

    #[test]
    fn application_chains_are_left_associative() {
        let t = parse_term("f a b").unwrap();
        let TermKind::App(head, _) = &t.kind else { panic!() };
        assert!(matches!(&head.kind, TermKind::App(..)));
    }

    #[test]
    fn pretty_then_parse_is_identity_on_a_nested_term() {
        let src = "def d : forall i : size . List[i] R -o List[i + 1] R = \
                   fun (xs :[1] List[i] R) => cons @[i] 1.0 xs ;";
        let program = parse_program(src).unwrap();
        let printed = pretty_program(&program);
        let reparsed = parse_program(&printed).unwrap();
        assert!(alpha_equiv_program(&program, &reparsed));
    }
}
