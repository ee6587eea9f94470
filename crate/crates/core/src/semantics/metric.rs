//! The metric on values at arrow-free closed types.
//!
//! Reals measure by absolute difference; `Unit` and the singletons
//! `Nat[I]` are at distance 0; tensors and lists add component distances;
//! `![I] A` scales the distance at `A` by `I` (with 0 staying 0, so an ∞
//! grade never manufactures a distance between equal values).

use super::value::Value;
use crate::index::{eval_closed, Valuation};
use crate::syntax::ast::Type;
use crate::syntax::pretty_type;
use crate::typecheck::expand_bounded;
use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum MetricError {
    #[error("no metric at function type `{0}`")]
    FunctionType(String),
    #[error("no metric at open type `{0}`")]
    OpenType(String),
    #[error("value does not inhabit `{0}`")]
    IllTyped(String),
}

/// Distance between two values of the same closed, arrow-free type.
pub fn value_distance(left: &Value, right: &Value, ty: &Type) -> Result<f64, MetricError> {
    match ty {
        Type::Real => match (left, right) {
            (Value::Real(a), Value::Real(b)) => Ok((a - b).abs()),
            _ => Err(MetricError::IllTyped(pretty_type(ty))),
        },
        Type::Unit | Type::Nat(_) => Ok(0.0),
        Type::Tensor(ta, tb) => match (left, right) {
            (Value::Pair(a1, a2), Value::Pair(b1, b2)) => {
                Ok(value_distance(a1, b1, ta)? + value_distance(a2, b2, tb)?)
            }
            _ => Err(MetricError::IllTyped(pretty_type(ty))),
        },
        Type::List(_, elem) => match (left, right) {
            (Value::List(xs), Value::List(ys)) => {
                // Lengths agree by typing: both inhabit List[I] at the same
                // closed I.
                if xs.len() != ys.len() {
                    return Err(MetricError::IllTyped(pretty_type(ty)));
                }
                let mut total = 0.0;
                for (x, y) in xs.iter().zip(ys) {
                    total += value_distance(x, y, elem)?;
                }
                Ok(total)
            }
            _ => Err(MetricError::IllTyped(pretty_type(ty))),
        },
        Type::Bang(grade, body) => {
            let scale = eval_closed(grade, &Valuation::default())
                .ok_or_else(|| MetricError::OpenType(pretty_type(ty)))?;
            let inner = value_distance(left, right, body)?;
            // 0 · ∞ = 0: an untouched value is at distance 0 at any grade.
            if inner == 0.0 {
                Ok(0.0)
            } else {
                Ok(scale.to_f64() * inner)
            }
        }
        Type::BoundedBang(..) => {
            let expanded =
                expand_bounded(ty).map_err(|_| MetricError::OpenType(pretty_type(ty)))?;
            value_distance(left, right, &expanded)
        }
        Type::Arrow(..) | Type::Forall(..) => Err(MetricError::FunctionType(pretty_type(ty))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_type;

    #[test]
    fn distance_examples() {
        let d = value_distance(&Value::Real(1.0), &Value::Real(3.5), &Type::Real).unwrap();
        assert_eq!(d, 2.5);

        let pair = |a: f64, b: f64| Value::Pair(Box::new(Value::Real(a)), Box::new(Value::Real(b)));
        let ty = parse_type("R * R").unwrap();
        let d = value_distance(&pair(1.0, 2.0), &pair(2.0, 4.0), &ty).unwrap();
        assert_eq!(d, 3.0);

        // ![2] R scales by 2.
        let ty = parse_type("![2] R").unwrap();
        let d = value_distance(&Value::Real(1.0), &Value::Real(1.5), &ty).unwrap();
        assert_eq!(d, 1.0);

        // ![inf] R keeps equal values at distance 0.
        let ty = parse_type("![inf] R").unwrap();
        let d = value_distance(&Value::Real(2.0), &Value::Real(2.0), &ty).unwrap();
        assert_eq!(d, 0.0);
        let d = value_distance(&Value::Real(2.0), &Value::Real(3.0), &ty).unwrap();
        assert_eq!(d, f64::INFINITY);

        // Singletons.
        let ty = parse_type("Nat[3]").unwrap();
        let d = value_distance(&Value::Nat(3), &Value::Nat(3), &ty).unwrap();
        assert_eq!(d, 0.0);

        // No metric at arrows.
        let ty = parse_type("R -o R").unwrap();
        assert!(value_distance(&Value::Unit, &Value::Unit, &ty).is_err());
    }
}
