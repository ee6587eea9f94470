//! Grammar round-trip and alpha-equivalence properties.

use lindt_core::gen::gen_program;
use lindt_core::syntax::{
    alpha_equiv_program, alpha_equiv_term, parse_program, pretty_program,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn parse_pretty_roundtrip_on_random_programs() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for case in 0..500 {
        let program = gen_program(&mut rng, 4);
        let printed = pretty_program(&program);
        let reparsed = parse_program(&printed)
            .unwrap_or_else(|e| panic!("case {case}: generated program failed to parse: {e}\n{printed}"));
        assert!(
            alpha_equiv_program(&program, &reparsed),
            "case {case}: round trip lost structure:\n{printed}"
        );
    }
}

#[test]
fn printing_is_total_and_reparses_after_two_rounds() {
    // pretty ∘ parse ∘ pretty is stable: the second print equals the first.
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..200 {
        let program = gen_program(&mut rng, 3);
        let once = pretty_program(&program);
        let twice = pretty_program(&parse_program(&once).unwrap());
        assert_eq!(once, twice);
    }
}

#[test]
fn alpha_equivalence_is_an_equivalence_relation() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut programs = Vec::new();
    for _ in 0..120 {
        programs.push(gen_program(&mut rng, 2));
    }
    // Reflexivity, and transitivity along reparse chains.
    for program in &programs {
        assert!(alpha_equiv_program(program, program));
        let b = parse_program(&pretty_program(program)).unwrap();
        let c = parse_program(&pretty_program(&b)).unwrap();
        assert!(alpha_equiv_program(program, &b));
        assert!(alpha_equiv_program(&b, &c));
        assert!(alpha_equiv_program(program, &c));
    }
    // Symmetry on arbitrary pairs (mostly inequivalent).
    for pair in programs.chunks(2) {
        if let [a, b] = pair {
            assert_eq!(alpha_equiv_program(a, b), alpha_equiv_program(b, a));
        }
    }
}

#[test]
fn alpha_equivalence_respects_binding_structure() {
    use lindt_core::syntax::parse_term;
    // Renaming a bound variable is invisible.
    let a = parse_term("fun (x :[1] R) => add x x").unwrap();
    let b = parse_term("fun (y :[1] R) => add y y").unwrap();
    assert!(alpha_equiv_term(&a, &b));
    // Swapping distinct binders is not.
    let c = parse_term("fun (x :[1] R) => fun (y :[1] R) => add x y").unwrap();
    let d = parse_term("fun (x :[1] R) => fun (y :[1] R) => add y x").unwrap();
    assert!(!alpha_equiv_term(&c, &d));
}
