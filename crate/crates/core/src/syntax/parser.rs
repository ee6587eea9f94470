//! Recursive descent parser.
//!
//! Index variables are resolved against their binders (`forall`, `bang`, and
//! the size variables bound by `case`/`lcase` branches) while parsing, so
//! every `Index::Var` carries the sort its binder declared.

use super::ast::*;
use super::lexer::{tokenize, Token, TokenKind};
use super::ParseError;
use std::collections::HashSet;

pub fn parse_program(source: &str) -> Result<Program, ParseError> {
    let tokens = tokenize(source)?;
    let mut parser = Parser::new(tokens);
    parser.program()
}

/// Parse a single index expression; free variables are given the sorts
/// listed in `scope`.
pub fn parse_index(source: &str, scope: &[(String, Sort)]) -> Result<Index, ParseError> {
    let tokens = tokenize(source)?;
    let mut parser = Parser::new(tokens);
    parser.index_scope = scope.to_vec();
    let ix = parser.index()?;
    parser.expect(TokenKind::Eof)?;
    Ok(ix)
}

/// Parse a single type with no free index variables.
pub fn parse_type(source: &str) -> Result<Type, ParseError> {
    let tokens = tokenize(source)?;
    let mut parser = Parser::new(tokens);
    let ty = parser.ty()?;
    parser.expect(TokenKind::Eof)?;
    Ok(ty)
}

/// Parse a single closed term (no trailing input).
pub fn parse_term(source: &str) -> Result<Term, ParseError> {
    let tokens = tokenize(source)?;
    let mut parser = Parser::new(tokens);
    let term = parser.term()?;
    parser.expect(TokenKind::Eof)?;
    Ok(term)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    index_scope: Vec<(String, Sort)>,
}

impl Parser {
    fn new(tokens: Vec<Token>) -> Self {
        Parser {
            tokens,
            pos: 0,
            index_scope: Vec::new(),
        }
    }

    fn peek(&self) -> &TokenKind {
        &self.tokens[self.pos].kind
    }

    fn peek2(&self) -> Option<&TokenKind> {
        self.tokens.get(self.pos + 1).map(|t| &t.kind)
    }

    fn span(&self) -> Span {
        self.tokens[self.pos].span
    }

    fn advance(&mut self) -> Token {
        let tok = self.tokens[self.pos].clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        tok
    }

    fn eat(&mut self, kind: &TokenKind) -> bool {
        if self.peek() == kind {
            self.advance();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, kind: TokenKind) -> Result<Token, ParseError> {
        if *self.peek() == kind {
            Ok(self.advance())
        } else {
            Err(self.unexpected(&kind.describe()))
        }
    }

    fn unexpected(&self, expected: &str) -> ParseError {
        ParseError::Unexpected {
            expected: expected.to_string(),
            found: self.peek().describe(),
            span: self.span(),
        }
    }

    fn ident(&mut self) -> Result<(String, Span), ParseError> {
        let span = self.span();
        match self.peek().clone() {
            TokenKind::Ident(name) => {
                self.advance();
                Ok((name, span))
            }
            _ => Err(self.unexpected("identifier")),
        }
    }

    fn lookup_index_var(&self, name: &str, span: Span) -> Result<Sort, ParseError> {
        self.index_scope
            .iter()
            .rev()
            .find(|(n, _)| n == name)
            .map(|(_, s)| *s)
            .ok_or_else(|| ParseError::UnboundIndexVar {
                name: name.to_string(),
                span,
            })
    }

    // ---- program ------------------------------------------------------

    fn program(&mut self) -> Result<Program, ParseError> {
        let mut decls = Vec::new();
        let mut names: HashSet<String> = HashSet::new();
        while *self.peek() != TokenKind::Eof {
            match self.peek() {
                TokenKind::Def => {
                    let span = self.span();
                    self.advance();
                    let (name, name_span) = self.ident()?;
                    if !names.insert(name.clone()) {
                        return Err(ParseError::DuplicateDef {
                            name,
                            span: name_span,
                        });
                    }
                    self.expect(TokenKind::Colon)?;
                    let ty = self.ty()?;
                    self.expect(TokenKind::Eq)?;
                    // The type's outer quantifier prefix scopes over the body.
                    let mut pushed = 0;
                    let mut prefix = &ty;
                    while let Type::Forall(v, s, body) = prefix {
                        self.index_scope.push((v.clone(), *s));
                        pushed += 1;
                        prefix = body;
                    }
                    let term = self.term()?;
                    self.index_scope.truncate(self.index_scope.len() - pushed);
                    self.expect(TokenKind::Semi)?;
                    decls.push(Decl::Def {
                        name,
                        ty,
                        term,
                        span,
                    });
                }
                TokenKind::Check => {
                    let span = self.span();
                    self.advance();
                    let term = self.term()?;
                    self.expect(TokenKind::Colon)?;
                    let ty = self.ty()?;
                    self.expect(TokenKind::Semi)?;
                    decls.push(Decl::Check { term, ty, span });
                }
                _ => return Err(self.unexpected("`def` or `check`")),
            }
        }
        Ok(Program { decls })
    }

    // ---- types ----------------------------------------------------------

    fn ty(&mut self) -> Result<Type, ParseError> {
        match self.peek() {
            TokenKind::Forall => {
                self.advance();
                let (var, _) = self.ident()?;
                self.expect(TokenKind::Colon)?;
                let sort = match self.peek() {
                    TokenKind::SizeKw => Sort::Size,
                    TokenKind::SensKw => Sort::Sens,
                    _ => return Err(self.unexpected("`size` or `sens`")),
                };
                self.advance();
                self.expect(TokenKind::Dot)?;
                self.index_scope.push((var.clone(), sort));
                let body = self.ty()?;
                self.index_scope.pop();
                Ok(Type::Forall(var, sort, Box::new(body)))
            }
            TokenKind::BangKw => {
                self.advance();
                let (var, _) = self.ident()?;
                self.expect(TokenKind::Less)?;
                let bound = self.index()?;
                self.expect(TokenKind::Dot)?;
                self.index_scope.push((var.clone(), Sort::Size));
                let body = self.ty()?;
                self.index_scope.pop();
                Ok(Type::BoundedBang(var, bound, Box::new(body)))
            }
            _ => self.arrow_ty(),
        }
    }

    fn arrow_ty(&mut self) -> Result<Type, ParseError> {
        let lhs = self.tensor_ty()?;
        match self.peek() {
            TokenKind::LinArrow => {
                self.advance();
                let rhs = self.arrow_ty()?;
                Ok(Type::arrow(lhs, rhs))
            }
            TokenKind::FnArrow => {
                self.advance();
                let rhs = self.arrow_ty()?;
                Ok(Type::fn_arrow(lhs, rhs))
            }
            _ => Ok(lhs),
        }
    }

    fn tensor_ty(&mut self) -> Result<Type, ParseError> {
        let lhs = self.atom_ty()?;
        if self.eat(&TokenKind::Star) {
            let rhs = self.atom_ty()?;
            Ok(Type::tensor(lhs, rhs))
        } else {
            Ok(lhs)
        }
    }

    fn atom_ty(&mut self) -> Result<Type, ParseError> {
        match self.peek().clone() {
            TokenKind::RealTy => {
                self.advance();
                Ok(Type::Real)
            }
            TokenKind::UnitTy => {
                self.advance();
                Ok(Type::Unit)
            }
            TokenKind::NatTy => {
                self.advance();
                self.expect(TokenKind::LBracket)?;
                let ix = self.index()?;
                self.expect(TokenKind::RBracket)?;
                Ok(Type::Nat(ix))
            }
            TokenKind::ListTy => {
                self.advance();
                self.expect(TokenKind::LBracket)?;
                let ix = self.index()?;
                self.expect(TokenKind::RBracket)?;
                let elem = self.atom_ty()?;
                Ok(Type::list(ix, elem))
            }
            TokenKind::BangSym => {
                self.advance();
                self.expect(TokenKind::LBracket)?;
                let ix = self.index()?;
                self.expect(TokenKind::RBracket)?;
                let body = self.atom_ty()?;
                Ok(Type::bang(ix, body))
            }
            TokenKind::LParen => {
                self.advance();
                let ty = self.ty()?;
                self.expect(TokenKind::RParen)?;
                Ok(ty)
            }
            _ => Err(self.unexpected("a type")),
        }
    }

    // ---- indices --------------------------------------------------------

    fn index(&mut self) -> Result<Index, ParseError> {
        let mut lhs = self.index_term()?;
        while self.eat(&TokenKind::Plus) {
            let rhs = self.index_term()?;
            lhs = Index::sum(lhs, rhs);
        }
        Ok(lhs)
    }

    fn index_term(&mut self) -> Result<Index, ParseError> {
        let mut lhs = self.index_factor()?;
        while self.eat(&TokenKind::Star) {
            let rhs = self.index_factor()?;
            lhs = Index::prod(lhs, rhs);
        }
        Ok(lhs)
    }

    fn index_factor(&mut self) -> Result<Index, ParseError> {
        let base = self.index_atom()?;
        if self.eat(&TokenKind::Caret) {
            let exp = self.index_atom()?;
            Ok(Index::pow(base, exp))
        } else {
            Ok(base)
        }
    }

    fn index_atom(&mut self) -> Result<Index, ParseError> {
        let span = self.span();
        match self.peek().clone() {
            TokenKind::NatLit(n) => {
                self.advance();
                Ok(Index::Nat(n))
            }
            TokenKind::RatLit(q) => {
                self.advance();
                Ok(Index::Rat(q))
            }
            TokenKind::Inf => {
                self.advance();
                Ok(Index::Inf)
            }
            TokenKind::Ident(name) => {
                self.advance();
                let sort = self.lookup_index_var(&name, span)?;
                Ok(Index::Var(name, sort))
            }
            TokenKind::LParen => {
                self.advance();
                let ix = self.index()?;
                self.expect(TokenKind::RParen)?;
                Ok(ix)
            }
            _ => Err(self.unexpected("an index expression")),
        }
    }

    // ---- terms ----------------------------------------------------------

    fn term(&mut self) -> Result<Term, ParseError> {
        let span = self.span();
        match self.peek() {
            TokenKind::Fun => {
                self.advance();
                self.expect(TokenKind::LParen)?;
                let (param, _) = self.ident()?;
                self.expect(TokenKind::Colon)?;
                self.expect(TokenKind::LBracket)?;
                let grade = self.index()?;
                self.expect(TokenKind::RBracket)?;
                let param_ty = self.ty()?;
                self.expect(TokenKind::RParen)?;
                self.expect(TokenKind::FatArrow)?;
                let body = self.term()?;
                Ok(Term::new(
                    TermKind::Lambda {
                        param,
                        grade,
                        param_ty,
                        body: Box::new(body),
                    },
                    span,
                ))
            }
            TokenKind::Let => {
                self.advance();
                self.expect(TokenKind::LParen)?;
                let (fst, _) = self.ident()?;
                self.expect(TokenKind::Comma)?;
                let (snd, _) = self.ident()?;
                self.expect(TokenKind::RParen)?;
                self.expect(TokenKind::Eq)?;
                let rhs = self.term()?;
                self.expect(TokenKind::In)?;
                let body = self.term()?;
                Ok(Term::new(
                    TermKind::LetPair {
                        fst,
                        snd,
                        rhs: Box::new(rhs),
                        body: Box::new(body),
                    },
                    span,
                ))
            }
            TokenKind::Case => {
                self.advance();
                let scrut = self.term()?;
                self.expect(TokenKind::LBrace)?;
                self.expect(TokenKind::ZPat)?;
                self.expect(TokenKind::FatArrow)?;
                let zero = self.term()?;
                self.expect(TokenKind::Pipe)?;
                self.expect(TokenKind::SPat)?;
                let (succ_var, _) = self.ident()?;
                self.expect(TokenKind::FatArrow)?;
                // The predecessor's size is referable under the same name.
                self.index_scope.push((succ_var.clone(), Sort::Size));
                let succ = self.term()?;
                self.index_scope.pop();
                self.expect(TokenKind::RBrace)?;
                Ok(Term::new(
                    TermKind::NatCase {
                        scrut: Box::new(scrut),
                        zero: Box::new(zero),
                        succ_var,
                        succ: Box::new(succ),
                    },
                    span,
                ))
            }
            TokenKind::LCase => {
                self.advance();
                let scrut = self.term()?;
                self.expect(TokenKind::LBrace)?;
                self.expect(TokenKind::Nil)?;
                self.expect(TokenKind::FatArrow)?;
                let nil = self.term()?;
                self.expect(TokenKind::Pipe)?;
                self.expect(TokenKind::Cons)?;
                let (head_var, _) = self.ident()?;
                let (tail_var, _) = self.ident()?;
                self.expect(TokenKind::FatArrow)?;
                // The tail length is referable under the tail's name.
                self.index_scope.push((tail_var.clone(), Sort::Size));
                let cons = self.term()?;
                self.index_scope.pop();
                self.expect(TokenKind::RBrace)?;
                Ok(Term::new(
                    TermKind::ListCase {
                        scrut: Box::new(scrut),
                        nil: Box::new(nil),
                        head_var,
                        tail_var,
                        cons: Box::new(cons),
                    },
                    span,
                ))
            }
            _ => self.app(),
        }
    }

    fn app(&mut self) -> Result<Term, ParseError> {
        let mut head = self.atom()?;
        loop {
            if self.starts_atom() {
                let span = head.span;
                let arg = self.atom()?;
                head = Term::new(TermKind::App(Box::new(head), Box::new(arg)), span);
            } else if *self.peek() == TokenKind::At {
                let span = head.span;
                self.advance();
                self.expect(TokenKind::LBracket)?;
                let ix = self.index()?;
                self.expect(TokenKind::RBracket)?;
                head = Term::new(TermKind::IdxApp(Box::new(head), ix), span);
            } else {
                return Ok(head);
            }
        }
    }

    fn starts_atom(&self) -> bool {
        matches!(
            self.peek(),
            TokenKind::Ident(_)
                | TokenKind::NatLit(_)
                | TokenKind::RatLit(_)
                | TokenKind::LParen
                | TokenKind::Add
                | TokenKind::CMul
                | TokenKind::Iter
                | TokenKind::Nil
                | TokenKind::Cons
        )
    }

    fn atom(&mut self) -> Result<Term, ParseError> {
        let span = self.span();
        match self.peek().clone() {
            TokenKind::Ident(name) => {
                self.advance();
                Ok(Term::new(TermKind::Var(name), span))
            }
            TokenKind::NatLit(n) => {
                self.advance();
                Ok(Term::new(TermKind::NatLit(n), span))
            }
            TokenKind::RatLit(q) => {
                self.advance();
                Ok(Term::new(TermKind::RealLit(q), span))
            }
            TokenKind::Add => {
                self.advance();
                Ok(Term::new(TermKind::Prim(Prim::Add), span))
            }
            TokenKind::Iter => {
                self.advance();
                Ok(Term::new(TermKind::Prim(Prim::Iter), span))
            }
            TokenKind::Nil => {
                self.advance();
                Ok(Term::new(TermKind::Prim(Prim::Nil), span))
            }
            TokenKind::Cons => {
                self.advance();
                Ok(Term::new(TermKind::Prim(Prim::Cons), span))
            }
            TokenKind::CMul => {
                self.advance();
                self.expect(TokenKind::LParen)?;
                let factor = match self.peek().clone() {
                    TokenKind::RatLit(q) => {
                        self.advance();
                        q
                    }
                    TokenKind::NatLit(n) => {
                        self.advance();
                        num::BigRational::from_integer(n.into())
                    }
                    _ => return Err(self.unexpected("a numeric literal")),
                };
                self.expect(TokenKind::RParen)?;
                Ok(Term::new(TermKind::Prim(Prim::CMul(factor)), span))
            }
            TokenKind::LParen => {
                self.advance();
                if self.eat(&TokenKind::RParen) {
                    return Ok(Term::new(TermKind::UnitLit, span));
                }
                let first = self.term()?;
                if self.eat(&TokenKind::Comma) {
                    let second = self.term()?;
                    self.expect(TokenKind::RParen)?;
                    Ok(Term::new(
                        TermKind::Pair(Box::new(first), Box::new(second)),
                        span,
                    ))
                } else {
                    self.expect(TokenKind::RParen)?;
                    Ok(first)
                }
            }
            _ => Err(self.unexpected("a term")),
        }
    }

    #[allow(dead_code)]
    fn peek_is_ident(&self) -> bool {
        matches!(self.peek(), TokenKind::Ident(_)) || self.peek2().is_none()
    }
}
