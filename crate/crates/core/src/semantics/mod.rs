//! Runtime ground truth: interpreter, value metric, sensitivity probe and
//! the step-counting Krivine machine.

mod interp;
mod krivine;
mod metric;
mod probe;
mod value;

pub use interp::{erase_indices, eval_term, EvalError, Evaluator};
pub use krivine::{krivine_run, MValue, MachineOutcome, MachineResult};
pub use metric::{value_distance, MetricError};
pub use probe::{probe_sensitivity, ProbeError, ProbeOptions, ProbeReport, ProbeVerdict};
pub use value::{prim_arity, Env, Value};

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_program;
    use crate::syntax::parse_term;
    use std::collections::BTreeMap;

    fn eval_src(src: &str) -> Value {
        let term = parse_term(src).unwrap();
        eval_term(&term, &BTreeMap::new(), 1_000_000).unwrap()
    }

    fn defs_of(src: &str) -> BTreeMap<String, crate::syntax::Term> {
        let program = parse_program(src).unwrap();
        program
            .decls
            .iter()
            .filter_map(|d| match d {
                crate::syntax::Decl::Def { name, term, .. } => {
                    Some((name.clone(), term.clone()))
                }
                _ => None,
            })
            .collect()
    }

    #[test]
    fn eval_examples() {
        assert_eq!(eval_src("cmul(2) 3.0"), Value::Real(6.0));
        // iter 3 (cmul 2) 1.0 = 2^3 · 1 = 8.
        assert_eq!(eval_src("iter 3 (cmul(2)) 1.0"), Value::Real(8.0));
        assert_eq!(eval_src("add 1.5 2.25"), Value::Real(3.75));
        assert_eq!(
            eval_src("cons 1.0 (cons 2.0 nil)"),
            Value::List(vec![Value::Real(1.0), Value::Real(2.0)])
        );
    }

    #[test]
    fn append_runs_and_respects_lengths() {
        let src = "def append : forall i : size . forall j : size . \
                       List[i] R -o List[j] R -o List[i + j] R = \
                     fun (xs :[1] List[i] R) => fun (ys :[1] List[j] R) => \
                       lcase xs { nil => ys \
                                | cons h t => cons @[t + j] h (append @[t] @[j] t ys) } ;";
        let defs = defs_of(src);
        let call = parse_term(
            "append (cons 1.0 (cons 2.0 nil)) (cons 3.0 (cons 4.0 (cons 5.0 nil)))",
        )
        .unwrap();
        let out = eval_term(&call, &defs, 1_000_000).unwrap();
        let Value::List(items) = out else { panic!() };
        assert_eq!(items.len(), 5);
        assert_eq!(items[0], Value::Real(1.0));
        assert_eq!(items[4], Value::Real(5.0));
    }

    #[test]
    fn index_erasure_is_runtime_invisible() {
        // Same body, different (checker-visible) annotations: same value.
        let a = eval_src("(fun (x :[2] R) => add x x) 3.0");
        let b = eval_src("(fun (x :[5] R) => add x x) 3.0");
        assert_eq!(a, b);
    }

    #[test]
    fn fuel_exhaustion_is_an_error() {
        let defs = defs_of("def spin : R = spin ;");
        let call = parse_term("spin").unwrap();
        // With fuel below the depth bound, fuel runs out first; with ample
        // fuel, the depth bound stops the loop.
        assert_eq!(eval_term(&call, &defs, 100), Err(EvalError::OutOfFuel));
        assert_eq!(
            eval_term(&call, &defs, 1_000_000),
            Err(EvalError::DepthExceeded)
        );
        // The machine unrolls this spin iteratively, so it burns fuel.
        let outcome = krivine_run(&call, &defs, 1000);
        assert_eq!(outcome.result, MachineResult::OutOfFuel);
    }

    #[test]
    fn machine_counts_the_three_step_identity() {
        let term = parse_term("(fun (x :[1] R) => x) 1.0").unwrap();
        let outcome = krivine_run(&term, &BTreeMap::new(), 1_000_000);
        assert_eq!(outcome.steps, 3);
        assert_eq!(
            outcome.result,
            MachineResult::Done(MValue::Real(1.0))
        );
    }

    #[test]
    fn machine_runs_a_bare_literal_in_zero_steps() {
        let term = parse_term("42.0").unwrap();
        let outcome = krivine_run(&term, &BTreeMap::new(), 1_000_000);
        assert_eq!(outcome.steps, 0);
    }

    #[test]
    fn machine_iter_steps_are_affine() {
        let mut counts = Vec::new();
        for n in 1..=10u64 {
            let term = parse_term(&format!("iter {n} (cmul(2)) 1.0")).unwrap();
            let outcome = krivine_run(&term, &BTreeMap::new(), 1_000_000);
            let MachineResult::Done(v) = &outcome.result else {
                panic!()
            };
            assert_eq!(v.to_value(), Some(Value::Real((1u64 << n) as f64)));
            counts.push(outcome.steps);
        }
        let delta = counts[1] - counts[0];
        for pair in counts.windows(2) {
            assert_eq!(pair[1] - pair[0], delta, "step counts: {counts:?}");
        }
        assert!(delta > 0);
    }

    #[test]
    fn machine_agrees_with_interpreter_on_ground_terms() {
        for src in [
            "add 1.0 2.0",
            "iter 4 (cmul(3)) 2.0",
            "cons 1.0 (cons 2.0 nil)",
            "(fun (p :[1] R * R) => let (a, b) = p in add a b) (1.5, 2.5)",
            "case 2 { Z => 0.0 | S m => 1.0 }",
            "lcase (cons 7.0 nil) { nil => 0.0 | cons h t => h }",
            "()",
        ] {
            let term = parse_term(src).unwrap();
            let machine = krivine_run(&term, &BTreeMap::new(), 1_000_000);
            let MachineResult::Done(mv) = machine.result else {
                panic!("machine halted abnormally on {src}")
            };
            let direct = eval_term(&term, &BTreeMap::new(), 1_000_000).unwrap();
            assert_eq!(mv.to_value(), Some(direct), "disagreement on {src}");
        }
    }

    #[test]
    fn machine_reports_stuck_states() {
        let term = parse_term("1.0 2.0").unwrap();
        let outcome = krivine_run(&term, &BTreeMap::new(), 1_000_000);
        assert!(matches!(outcome.result, MachineResult::Stuck(_)));
    }

    #[test]
    fn probe_validates_doubling_and_rejects_underclaims() {
        let term = parse_term("fun (x :[2] R) => add x x").unwrap();
        let defs = BTreeMap::new();
        let options = ProbeOptions {
            samples: 2000,
            ..ProbeOptions::default()
        };
        let report =
            probe_sensitivity(&term, &crate::syntax::Index::Nat(2), &defs, &options).unwrap();
        assert_eq!(report.verdict, ProbeVerdict::Pass);
        assert!((report.max_ratio - 2.0).abs() < 1e-9);

        let claimed = crate::syntax::parse_index("1.9", &[]).unwrap();
        let report = probe_sensitivity(&term, &claimed, &defs, &options).unwrap();
        assert_eq!(report.verdict, ProbeVerdict::Fail);
        assert!(report.worst.is_some());
    }

    #[test]
    fn probe_is_deterministic_given_seed() {
        let term = parse_term("fun (x :[1] R) => x").unwrap();
        let defs = BTreeMap::new();
        let options = ProbeOptions {
            samples: 500,
            ..ProbeOptions::default()
        };
        let a = probe_sensitivity(&term, &crate::syntax::Index::Nat(1), &defs, &options).unwrap();
        let b = probe_sensitivity(&term, &crate::syntax::Index::Nat(1), &defs, &options).unwrap();
        assert_eq!(
            serde_json::to_string(&a).unwrap(),
            serde_json::to_string(&b).unwrap()
        );
    }

    #[test]
    fn probe_rejects_infinite_claims() {
        let term = parse_term("fun (x :[1] R) => x").unwrap();
        let err = probe_sensitivity(
            &term,
            &crate::syntax::Index::Inf,
            &BTreeMap::new(),
            &ProbeOptions::default(),
        );
        assert!(err.is_err());
    }
}
