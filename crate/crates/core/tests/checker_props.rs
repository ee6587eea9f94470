//! Checker-level properties: weakening, grade monotonicity, subtype
//! verdicts, and usage correctness against an affine-coefficient oracle.

use lindt_core::gen::gen_type;
use lindt_core::index::normalize;
use lindt_core::syntax::ast::{Index, Prim, Sort, Term, TermKind, Type};
use lindt_core::syntax::{parse_program, parse_term};
use lindt_core::typecheck::{
    check_program, infer_term, subtype_holds, CheckOptions, IterScheme, TypeEnv,
};
use num::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;

fn accepts(src: &str) -> bool {
    let program = parse_program(src).unwrap();
    check_program(&program, &CheckOptions::default())
        .iter()
        .all(|r| r.verdict.is_accepted())
}

/// Bodies that are accepted at their tightest grade; used to exercise
/// grade monotonicity.
const BODIES: [(&str, u64); 6] = [
    ("x", 1),
    ("add x x", 2),
    ("add x (add x x)", 3),
    ("cmul(2) (add x x)", 4),
    ("cmul(0.5) x", 1),
    ("1.0", 0),
];

#[test]
fn grade_monotonicity_forgets_budget() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for (body, tight) in BODIES {
        for _ in 0..10 {
            let slack: u64 = rng.gen_range(0..5);
            let grade = tight + slack;
            let src =
                format!("check fun (x :[{grade}] R) => {body} : ![{grade}] R -o R ;");
            assert!(accepts(&src), "should accept {src}");
        }
        if tight > 0 {
            let starved = tight - 1;
            let src =
                format!("check fun (x :[{starved}] R) => {body} : ![{starved}] R -o R ;");
            assert!(!accepts(&src), "should reject {src}");
        }
    }
}

#[test]
fn weakening_is_invisible() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for (body, _) in BODIES {
        let term = parse_term(&format!("fun (x :[9] R) => {body}")).unwrap();
        let bare = TypeEnv::new();
        let (ty_a, usage_a, _) = infer_term(&bare, &term, IterScheme::Power).unwrap();
        let mut padded = bare.clone();
        for k in 0..rng.gen_range(1..4) {
            padded = padded.bind_term(&format!("pad{k}"), Type::Real);
        }
        let (ty_b, usage_b, _) = infer_term(&padded, &term, IterScheme::Power).unwrap();
        assert!(lindt_core::syntax::alpha_equiv_type(&ty_a, &ty_b));
        assert_eq!(usage_a, usage_b);
    }
}

#[test]
fn subtype_is_reflexive_on_random_types() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let env = TypeEnv::new();
    for _ in 0..300 {
        let mut scope = Vec::new();
        let mut counter = 0;
        let depth = rng.gen_range(0..4);
        let ty = gen_type(&mut rng, depth, &mut scope, &mut counter);
        assert!(subtype_holds(&env, &ty, &ty), "not reflexive at {ty:?}");
    }
}

#[test]
fn subtype_is_transitive_on_graded_arrows() {
    // ![g] R -o R <: ![h] R -o R exactly when g ≤ h, so random grade
    // triples exercise real (non-vacuous) transitivity.
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    let env = TypeEnv::new();
    let arrow = |g: u64| Type::arrow(Type::bang(Index::Nat(g), Type::Real), Type::Real);
    let mut seen_chain = false;
    for _ in 0..500 {
        let (a, b, c) = (
            rng.gen_range(0..6u64),
            rng.gen_range(0..6u64),
            rng.gen_range(0..6u64),
        );
        let ab = subtype_holds(&env, &arrow(a), &arrow(b));
        let bc = subtype_holds(&env, &arrow(b), &arrow(c));
        assert_eq!(ab, a <= b);
        if ab && bc {
            seen_chain = true;
            assert!(subtype_holds(&env, &arrow(a), &arrow(c)));
        }
    }
    assert!(seen_chain);
}

// ---- usage correctness against an affine oracle -------------------------

/// Straight-line terms over variables, `add`, and `cmul`: generate a term
/// and, independently, the affine function it denotes.
enum Line {
    Var(usize),
    Lit(BigRational),
    Add(Box<Line>, Box<Line>),
    CMul(BigRational, Box<Line>),
}

fn gen_line(rng: &mut impl Rng, depth: u32) -> Line {
    if depth == 0 {
        if rng.gen_bool(0.7) {
            Line::Var(rng.gen_range(0..3))
        } else {
            Line::Lit(BigRational::new(rng.gen_range(0..50).into(), 10.into()))
        }
    } else {
        match rng.gen_range(0..3) {
            0 => Line::Add(
                Box::new(gen_line(rng, depth - 1)),
                Box::new(gen_line(rng, depth - 1)),
            ),
            1 => Line::CMul(
                BigRational::new(rng.gen_range(0..40).into(), 10.into()),
                Box::new(gen_line(rng, depth - 1)),
            ),
            _ => gen_line(rng, 0),
        }
    }
}

fn line_term(line: &Line) -> Term {
    match line {
        Line::Var(k) => Term::mk(TermKind::Var(format!("x{k}"))),
        Line::Lit(q) => Term::mk(TermKind::RealLit(q.clone())),
        Line::Add(a, b) => Term::mk(TermKind::App(
            Box::new(Term::mk(TermKind::App(
                Box::new(Term::mk(TermKind::Prim(Prim::Add))),
                Box::new(line_term(a)),
            ))),
            Box::new(line_term(b)),
        )),
        Line::CMul(q, a) => Term::mk(TermKind::App(
            Box::new(Term::mk(TermKind::Prim(Prim::CMul(q.clone())))),
            Box::new(line_term(a)),
        )),
    }
}

/// The oracle: coefficients of the denoted affine function, computed by
/// symbolic interpretation (nothing shared with the checker).
fn line_coeffs(line: &Line, out: &mut BTreeMap<usize, BigRational>, scale: &BigRational) {
    match line {
        Line::Var(k) => {
            let entry = out.entry(*k).or_insert_with(|| BigRational::new(0.into(), 1.into()));
            *entry += scale;
        }
        Line::Lit(_) => {}
        Line::Add(a, b) => {
            line_coeffs(a, out, scale);
            line_coeffs(b, out, scale);
        }
        Line::CMul(q, a) => line_coeffs(a, out, &(scale * q)),
    }
}

#[test]
fn straight_line_usage_matches_affine_coefficients() {
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    let mut env = TypeEnv::new();
    for k in 0..3 {
        env = env.bind_term(&format!("x{k}"), Type::Real);
    }
    for case in 0..300 {
        let depth = rng.gen_range(1..5);
        let line = gen_line(&mut rng, depth);
        let term = line_term(&line);
        let (ty, usage, _) = infer_term(&env, &term, IterScheme::Power).unwrap();
        assert_eq!(ty, Type::Real);
        let mut coeffs = BTreeMap::new();
        line_coeffs(&line, &mut coeffs, &BigRational::new(1.into(), 1.into()));
        for k in 0..3 {
            let oracle = coeffs
                .get(&k)
                .cloned()
                .unwrap_or_else(|| BigRational::new(0.into(), 1.into()));
            let inferred = usage.grade(&format!("x{k}"));
            assert_eq!(
                normalize(&inferred),
                normalize(&Index::Rat(oracle.clone())),
                "case {case}: x{k} inferred {inferred:?}, oracle {oracle}"
            );
        }
    }
}
