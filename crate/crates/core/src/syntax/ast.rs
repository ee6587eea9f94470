//! Abstract syntax for index terms, types, terms and programs.

use num::BigRational;
use std::fmt;

/// Source position (1-based line and column).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Span {
    pub line: u32,
    pub col: u32,
}

impl Span {
    pub const DUMMY: Span = Span { line: 0, col: 0 };

    pub fn new(line: u32, col: u32) -> Self {
        Span { line, col }
    }
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

/// The two sorts of the index language: natural-number sizes and
/// nonnegative extended-real sensitivities. `Size` embeds into `Sens`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sort {
    Size,
    Sens,
}

impl fmt::Display for Sort {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sort::Size => write!(f, "size"),
            Sort::Sens => write!(f, "sens"),
        }
    }
}

/// Arithmetic expressions over size and sensitivity variables.
///
/// Literals are nonnegative. `Pow` pairs a sensitivity-sorted base with a
/// size-sorted exponent. `Inf` is the grade of the plain exponential.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Index {
    /// An index variable together with the sort its binder declared.
    Var(String, Sort),
    /// Natural number literal.
    Nat(u64),
    /// Nonnegative rational literal (written in decimal).
    Rat(BigRational),
    /// Infinity.
    Inf,
    Sum(Box<Index>, Box<Index>),
    Prod(Box<Index>, Box<Index>),
    Pow(Box<Index>, Box<Index>),
}

impl Index {
    pub fn var(name: &str, sort: Sort) -> Index {
        Index::Var(name.to_string(), sort)
    }

    pub fn sum(a: Index, b: Index) -> Index {
        Index::Sum(Box::new(a), Box::new(b))
    }

    pub fn prod(a: Index, b: Index) -> Index {
        Index::Prod(Box::new(a), Box::new(b))
    }

    pub fn pow(base: Index, exp: Index) -> Index {
        Index::Pow(Box::new(base), Box::new(exp))
    }

    /// Free index variables, with their sorts, in first-occurrence order.
    pub fn free_vars(&self) -> Vec<(String, Sort)> {
        let mut out = Vec::new();
        self.collect_free_vars(&mut out);
        out
    }

    fn collect_free_vars(&self, out: &mut Vec<(String, Sort)>) {
        match self {
            Index::Var(name, sort) => {
                if !out.iter().any(|(n, _)| n == name) {
                    out.push((name.clone(), *sort));
                }
            }
            Index::Nat(_) | Index::Rat(_) | Index::Inf => {}
            Index::Sum(a, b) | Index::Prod(a, b) | Index::Pow(a, b) => {
                a.collect_free_vars(out);
                b.collect_free_vars(out);
            }
        }
    }

    pub fn is_closed(&self) -> bool {
        match self {
            Index::Var(..) => false,
            Index::Nat(_) | Index::Rat(_) | Index::Inf => true,
            Index::Sum(a, b) | Index::Prod(a, b) | Index::Pow(a, b) => {
                a.is_closed() && b.is_closed()
            }
        }
    }
}

/// Linear types with size indices and sensitivity grades.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Type {
    Real,
    Unit,
    /// Singleton natural: the index pins the value.
    Nat(Index),
    /// Length-indexed list.
    List(Index, Box<Type>),
    Tensor(Box<Type>, Box<Type>),
    /// Graded modality: the body with its metric scaled by the grade.
    Bang(Index, Box<Type>),
    /// Linear arrow. `A -> B` is sugar for `![inf] A -o B`.
    Arrow(Box<Type>, Box<Type>),
    /// Index quantifier.
    Forall(String, Sort, Box<Type>),
    /// Bounded modality `bang a < I . A`: one copy of `A` for each value of
    /// `a` below the bound.
    BoundedBang(String, Index, Box<Type>),
}

impl Type {
    pub fn list(len: Index, elem: Type) -> Type {
        Type::List(len, Box::new(elem))
    }

    pub fn tensor(a: Type, b: Type) -> Type {
        Type::Tensor(Box::new(a), Box::new(b))
    }

    pub fn bang(grade: Index, body: Type) -> Type {
        Type::Bang(grade, Box::new(body))
    }

    pub fn arrow(dom: Type, cod: Type) -> Type {
        Type::Arrow(Box::new(dom), Box::new(cod))
    }

    /// The `->` sugar: an `inf`-graded linear arrow.
    pub fn fn_arrow(dom: Type, cod: Type) -> Type {
        Type::arrow(Type::bang(Index::Inf, dom), cod)
    }

    pub fn forall(var: &str, sort: Sort, body: Type) -> Type {
        Type::Forall(var.to_string(), sort, Box::new(body))
    }

    pub fn bounded(var: &str, bound: Index, body: Type) -> Type {
        Type::BoundedBang(var.to_string(), bound, Box::new(body))
    }

    /// Free index variables with sorts, in first-occurrence order.
    pub fn free_index_vars(&self) -> Vec<(String, Sort)> {
        fn go(ty: &Type, bound: &mut Vec<String>, out: &mut Vec<(String, Sort)>) {
            let collect = |ix: &Index, bound: &Vec<String>, out: &mut Vec<(String, Sort)>| {
                for (name, sort) in ix.free_vars() {
                    if !bound.contains(&name) && !out.iter().any(|(n, _)| *n == name) {
                        out.push((name, sort));
                    }
                }
            };
            match ty {
                Type::Real | Type::Unit => {}
                Type::Nat(ix) => collect(ix, bound, out),
                Type::List(ix, elem) => {
                    collect(ix, bound, out);
                    go(elem, bound, out);
                }
                Type::Tensor(a, b) | Type::Arrow(a, b) => {
                    go(a, bound, out);
                    go(b, bound, out);
                }
                Type::Bang(ix, body) => {
                    collect(ix, bound, out);
                    go(body, bound, out);
                }
                Type::Forall(v, _, body) => {
                    bound.push(v.clone());
                    go(body, bound, out);
                    bound.pop();
                }
                Type::BoundedBang(v, ix, body) => {
                    collect(ix, bound, out);
                    bound.push(v.clone());
                    go(body, bound, out);
                    bound.pop();
                }
            }
        }
        let mut out = Vec::new();
        go(self, &mut Vec::new(), &mut out);
        out
    }
}

/// Primitive constants.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Prim {
    /// 1-sensitive addition of two reals.
    Add,
    /// Multiplication by a fixed rational constant.
    CMul(BigRational),
    /// `iter n f k = f^n(k)` over the reals.
    Iter,
    /// The empty list of reals.
    Nil,
    /// List prepend.
    Cons,
}

impl Prim {
    pub fn name(&self) -> &'static str {
        match self {
            Prim::Add => "add",
            Prim::CMul(_) => "cmul",
            Prim::Iter => "iter",
            Prim::Nil => "nil",
            Prim::Cons => "cons",
        }
    }
}

/// A term together with its source position.
#[derive(Debug, Clone, PartialEq)]
pub struct Term {
    pub kind: TermKind,
    pub span: Span,
}

impl Term {
    pub fn new(kind: TermKind, span: Span) -> Term {
        Term { kind, span }
    }

    /// Span-free construction, for programmatically built terms.
    pub fn mk(kind: TermKind) -> Term {
        Term::new(kind, Span::DUMMY)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum TermKind {
    Var(String),
    /// Real literal, kept exact until evaluation.
    RealLit(BigRational),
    /// Natural literal; its type is the singleton `Nat[n]`.
    NatLit(u64),
    UnitLit,
    /// `fun (x :[I] T) => e` — grade- and type-annotated lambda.
    Lambda {
        param: String,
        grade: Index,
        param_ty: Type,
        body: Box<Term>,
    },
    App(Box<Term>, Box<Term>),
    /// Explicit index application `e @[I]`.
    IdxApp(Box<Term>, Index),
    Pair(Box<Term>, Box<Term>),
    /// `let (x, y) = rhs in body`.
    LetPair {
        fst: String,
        snd: String,
        rhs: Box<Term>,
        body: Box<Term>,
    },
    /// `case scrut { Z => zero | S m => succ }`. The successor branch also
    /// brings the size variable `m` into index scope (the predecessor).
    NatCase {
        scrut: Box<Term>,
        zero: Box<Term>,
        succ_var: String,
        succ: Box<Term>,
    },
    /// `lcase scrut { nil => nil_branch | cons h t => cons_branch }`. The cons
    /// branch also brings the size variable `t` into index scope (the tail
    /// length).
    ListCase {
        scrut: Box<Term>,
        nil: Box<Term>,
        head_var: String,
        tail_var: String,
        cons: Box<Term>,
    },
    Prim(Prim),
}

/// A top-level declaration.
#[derive(Debug, Clone)]
pub enum Decl {
    /// `def name : type = term ;`
    Def {
        name: String,
        ty: Type,
        term: Term,
        span: Span,
    },
    /// `check term : type ;`
    Check { term: Term, ty: Type, span: Span },
}

impl Decl {
    pub fn span(&self) -> Span {
        match self {
            Decl::Def { span, .. } | Decl::Check { span, .. } => *span,
        }
    }

    pub fn ty(&self) -> &Type {
        match self {
            Decl::Def { ty, .. } | Decl::Check { ty, .. } => ty,
        }
    }

    pub fn term(&self) -> &Term {
        match self {
            Decl::Def { term, .. } | Decl::Check { term, .. } => term,
        }
    }
}

/// An ordered list of declarations; names are unique and later declarations
/// may reference earlier ones.
#[derive(Debug, Clone, Default)]
pub struct Program {
    pub decls: Vec<Decl>,
}
