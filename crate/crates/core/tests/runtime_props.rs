//! Runtime properties: metric axioms, probe convergence on functions with
//! known Lipschitz constants, and machine/interpreter agreement.

use lindt_core::gen::{gen_metric_type, gen_value_at};
use lindt_core::semantics::{
    eval_term, krivine_run, probe_sensitivity, value_distance, MachineResult, ProbeOptions,
    ProbeVerdict,
};
use lindt_core::syntax::{parse_index, parse_term};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;

#[test]
fn metric_axioms_hold_on_random_triples() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for _ in 0..2000 {
        let ty = gen_metric_type(&mut rng, 3);
        let u = gen_value_at(&mut rng, &ty);
        let v = gen_value_at(&mut rng, &ty);
        let w = gen_value_at(&mut rng, &ty);
        let duv = value_distance(&u, &v, &ty).unwrap();
        let dvu = value_distance(&v, &u, &ty).unwrap();
        let duw = value_distance(&u, &w, &ty).unwrap();
        let dvw = value_distance(&v, &w, &ty).unwrap();
        let duu = value_distance(&u, &u, &ty).unwrap();
        assert_eq!(duu, 0.0, "identity failed at {ty:?}");
        assert_eq!(duv, dvu, "symmetry failed at {ty:?}");
        assert!(
            duw <= duv + dvw + 1e-12,
            "triangle failed at {ty:?}: {duw} > {duv} + {dvw}"
        );
        assert!(duv >= 0.0);
    }
}

#[test]
fn probe_converges_to_known_lipschitz_constants() {
    // Convergence within 1e-6 at 10k samples. Non-dyadic scale factors
    // (2.5) pick up f64 rounding noise of order 1e-8 against the 1e-6
    // perturbations, so the pass tolerance here is 1e-6, not the 1e-9 used
    // for exactly-representable factors.
    let cases = [
        ("fun (x :[1] R) => x", "1", 1.0),
        ("fun (x :[2] R) => add x x", "2", 2.0),
        ("fun (x :[2.5] R) => cmul(2.5) x", "2.5", 2.5),
        ("fun (x :[0] R) => 7.0", "0", 0.0),
    ];
    let defs = BTreeMap::new();
    let options = ProbeOptions {
        tolerance: 1e-6,
        ..ProbeOptions::default()
    };
    for (src, claimed, constant) in cases {
        let term = parse_term(src).unwrap();
        let claimed = parse_index(claimed, &[]).unwrap();
        let report = probe_sensitivity(&term, &claimed, &defs, &options).unwrap();
        assert_eq!(report.verdict, ProbeVerdict::Pass, "{src}");
        assert!(
            (report.max_ratio - constant).abs() <= 1e-6,
            "{src}: observed {} expected {constant}",
            report.max_ratio
        );
    }
}

#[test]
fn probe_failure_carries_a_witness() {
    let term = parse_term("fun (x :[2] R) => add x x").unwrap();
    let claimed = parse_index("1.5", &[]).unwrap();
    let report =
        probe_sensitivity(&term, &claimed, &BTreeMap::new(), &ProbeOptions::default()).unwrap();
    assert_eq!(report.verdict, ProbeVerdict::Fail);
    let worst = report.worst.expect("failing probe must carry a pair");
    let observed = (worst.fx - worst.fx2).abs() / (worst.x - worst.x2).abs();
    assert!(observed > 1.5);
}

#[test]
fn machine_and_interpreter_agree_on_random_arithmetic() {
    // Random straight-line arithmetic over literals: ground results, exact
    // f64 agreement expected.
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    for _ in 0..300 {
        let src = random_arith(&mut rng, 3);
        let term = parse_term(&src).unwrap();
        let defs = BTreeMap::new();
        let direct = eval_term(&term, &defs, 1_000_000).unwrap();
        let outcome = krivine_run(&term, &defs, 1_000_000);
        let MachineResult::Done(mv) = outcome.result else {
            panic!("machine halted abnormally on {src}");
        };
        assert_eq!(mv.to_value(), Some(direct), "disagreement on {src}");
    }
}

fn random_arith(rng: &mut ChaCha8Rng, depth: u32) -> String {
    use rand::Rng;
    if depth == 0 {
        return format!("{}.{}", rng.gen_range(0..50), rng.gen_range(0..10));
    }
    match rng.gen_range(0..4) {
        0 => format!(
            "add ({}) ({})",
            random_arith(rng, depth - 1),
            random_arith(rng, depth - 1)
        ),
        1 => format!("cmul({}.5) ({})", rng.gen_range(0..4), random_arith(rng, depth - 1)),
        2 => format!(
            "iter {} (cmul(2)) ({})",
            rng.gen_range(0..6),
            random_arith(rng, depth - 1)
        ),
        _ => random_arith(rng, 0),
    }
}

#[test]
fn machine_step_counts_are_reproducible() {
    let term = parse_term("iter 5 (cmul(2)) 1.0").unwrap();
    let defs = BTreeMap::new();
    let a = krivine_run(&term, &defs, 1_000_000);
    let b = krivine_run(&term, &defs, 1_000_000);
    assert_eq!(a, b);
    assert!(a.steps > 0);
}
