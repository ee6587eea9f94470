//! The sensitivity probe: an empirical oracle for Lipschitz claims.
//!
//! A function claimed r-sensitive must satisfy |f(x) − f(x′)| ≤ r·|x − x′|
//! for all x, x′. The probe samples base points uniformly in [−100, 100]
//! and perturbs them along a two-sided grid of magnitudes 10⁻⁶..10², plus
//! independent uniform pairs, and reports the worst observed ratio.
//! Per-sample RNG streams are derived from (seed, sample index), so reports
//! are reproducible regardless of evaluation order.

use super::interp::{EvalError, Evaluator};
use super::value::Value;
use crate::index::{eval_closed, Extended, Valuation};
use crate::syntax::ast::{Index, Term};
use crate::syntax::pretty_index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Clone, Copy)]
pub struct ProbeOptions {
    pub samples: u64,
    pub tolerance: f64,
    pub seed: u64,
    pub fuel: u64,
}

impl Default for ProbeOptions {
    fn default() -> Self {
        ProbeOptions {
            samples: 10_000,
            tolerance: 1e-9,
            seed: 42,
            fuel: 10_000_000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ProbeVerdict {
    Pass,
    Fail,
}

#[derive(Debug, Clone, Serialize)]
pub struct WorstPair {
    pub x: f64,
    pub x2: f64,
    pub fx: f64,
    pub fx2: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ProbeReport {
    pub claimed: String,
    pub samples: u64,
    pub max_ratio: f64,
    pub worst: Option<WorstPair>,
    pub verdict: ProbeVerdict,
    pub tolerance: f64,
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failure: Option<String>,
}

#[derive(Debug, Clone, Error)]
pub enum ProbeError {
    #[error("claimed grade `{0}` is not a finite closed sensitivity")]
    NonFiniteGrade(String),
    #[error("probed function failed to evaluate: {0}")]
    Setup(EvalError),
}

/// Probe a closed term of type `![r] R -o R` against the claimed grade.
///
/// Pass iff the worst ratio is at most `r·(1 + tolerance) + tolerance`.
/// An evaluation failure on a sample counts as a failure, carried in the
/// report rather than an error.
pub fn probe_sensitivity(
    fun: &Term,
    claimed: &Index,
    defs: &BTreeMap<String, Term>,
    options: &ProbeOptions,
) -> Result<ProbeReport, ProbeError> {
    let grade = eval_closed(claimed, &Valuation::default())
        .ok_or_else(|| ProbeError::NonFiniteGrade(pretty_index(claimed)))?;
    let Extended::Finite(_) = &grade else {
        return Err(ProbeError::NonFiniteGrade(pretty_index(claimed)));
    };
    let grade = grade.to_f64();

    let fun_value = Evaluator::new(defs, options.fuel)
        .eval(fun, &super::value::Env::empty())
        .map_err(ProbeError::Setup)?;

    let mut max_ratio: f64 = 0.0;
    let mut worst: Option<WorstPair> = None;
    let mut failure: Option<String> = None;

    for k in 0..options.samples {
        let (x, x2) = sample_pair(options.seed, k);
        if x == x2 {
            continue;
        }
        let fx = match apply_real(&fun_value, x, defs, options.fuel) {
            Ok(v) => v,
            Err(e) => {
                failure = Some(format!("sample {k}: {e}"));
                break;
            }
        };
        let fx2 = match apply_real(&fun_value, x2, defs, options.fuel) {
            Ok(v) => v,
            Err(e) => {
                failure = Some(format!("sample {k}: {e}"));
                break;
            }
        };
        let ratio = (fx - fx2).abs() / (x - x2).abs();
        if ratio > max_ratio {
            max_ratio = ratio;
            worst = Some(WorstPair { x, x2, fx, fx2 });
        }
    }

    let bound = grade * (1.0 + options.tolerance) + options.tolerance;
    let verdict = if failure.is_none() && max_ratio <= bound {
        ProbeVerdict::Pass
    } else {
        ProbeVerdict::Fail
    };
    Ok(ProbeReport {
        claimed: pretty_index(claimed),
        samples: options.samples,
        max_ratio,
        worst,
        verdict,
        tolerance: options.tolerance,
        seed: options.seed,
        failure,
    })
}

/// Base point plus perturbation for sample `k`, from its own RNG stream.
fn sample_pair(seed: u64, k: u64) -> (f64, f64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(k);
    let x: f64 = rng.gen_range(-100.0..100.0);
    if k % 2 == 0 {
        // Two-sided magnitude grid 10^-6 .. 10^2.
        let slot = (k / 2) % 18;
        let exponent = -6 + (slot % 9) as i32;
        let sign = if slot < 9 { 1.0 } else { -1.0 };
        (x, x + sign * 10f64.powi(exponent))
    } else {
        let x2: f64 = rng.gen_range(-100.0..100.0);
        (x, x2)
    }
}

fn apply_real(
    fun: &Value,
    x: f64,
    defs: &BTreeMap<String, Term>,
    fuel: u64,
) -> Result<f64, EvalError> {
    let mut evaluator = Evaluator::new(defs, fuel);
    let out = evaluator.apply(fun.clone(), Value::Real(x))?;
    out.as_real()
        .ok_or_else(|| EvalError::RuntimeType("probe expects a real-valued function".to_string()))
}
