//! The index language: sorting, substitution, polynomial normal forms,
//! closed evaluation, and the entailment solver that discharges checker
//! constraints.
//!
//! All solver arithmetic is exact (rationals extended with ∞); floating
//! point appears only in the runtime probe.

mod number;
mod poly;
mod solve;
mod subst;

pub use number::Extended;
pub use poly::{normalize, Atom, Monomial, PolyNF};
pub use solve::{
    constraint_vars, entails, eval_closed, holds_under, Constraint, Entailment, Origin, Rel,
    Valuation,
};
pub use subst::{expect_size, sort_check, sort_of, subst_index, SortError};
pub(crate) use subst::subst_unchecked;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::ast::{Index, Sort, Span};
    use crate::syntax::parse_index;
    use num::BigRational;
    use std::collections::BTreeMap;

    fn scope() -> Vec<(String, Sort)> {
        vec![
            ("i".to_string(), Sort::Size),
            ("j".to_string(), Sort::Size),
            ("r".to_string(), Sort::Sens),
            ("s".to_string(), Sort::Sens),
        ]
    }

    fn ix(src: &str) -> Index {
        parse_index(src, &scope()).unwrap()
    }

    fn env() -> BTreeMap<String, Sort> {
        scope().into_iter().collect()
    }

    fn con(rel: Rel, lhs: &str, rhs: &str) -> Constraint {
        Constraint::new(
            Vec::new(),
            rel,
            ix(lhs),
            ix(rhs),
            Origin {
                span: Span::DUMMY,
                rule: "test",
            },
        )
    }

    #[test]
    fn sort_check_examples() {
        assert_eq!(sort_check(&ix("r * i"), &env()).unwrap(), Sort::Sens);
        assert_eq!(sort_check(&ix("3"), &env()).unwrap(), Sort::Size);
        assert_eq!(sort_check(&ix("i + 1"), &env()).unwrap(), Sort::Size);
        assert!(expect_size(&ix("i + 1"), &env()).is_ok());
        assert!(expect_size(&ix("1.5"), &env()).is_err());
        assert!(expect_size(&ix("inf"), &env()).is_err());
        assert!(expect_size(&ix("r ^ i"), &env()).is_err());
        assert!(matches!(
            sort_check(&Index::var("zz", Sort::Size), &env()),
            Err(SortError::Unbound(_))
        ));
    }

    #[test]
    fn subst_examples() {
        // subst (a + 1) a 2 = 2 + 1
        let a_plus_1 = Index::sum(Index::var("a", Sort::Size), Index::Nat(1));
        let result = subst_index(&a_plus_1, "a", &Index::Nat(2)).unwrap();
        assert_eq!(result, Index::sum(Index::Nat(2), Index::Nat(1)));

        // a not free: no-op
        let ri = ix("r * i");
        assert_eq!(subst_index(&ri, "a", &Index::Nat(5)).unwrap(), ri);

        // subst (r ^ i) i (j + 1) = r ^ (j + 1)
        let result = subst_index(&ix("r ^ i"), "i", &ix("j + 1")).unwrap();
        assert_eq!(result, ix("r ^ (j + 1)"));

        // sens term into a size variable is a sort error
        assert!(subst_index(&ix("i + 1"), "i", &ix("r")).is_err());
        // size term into a sens variable is fine
        assert!(subst_index(&ix("r * i"), "r", &ix("j")).is_ok());
    }

    #[test]
    fn normalize_hand_expansions() {
        // (i + 1) * (i + 1) = i^2 + 2i + 1
        let nf = normalize(&ix("(i + 1) * (i + 1)"));
        let expected = normalize(&ix("i * i + 2 * i + 1"));
        assert_eq!(nf, expected);
        assert_eq!(nf.terms.len(), 3);

        // 0 * inf = 0
        assert!(normalize(&ix("0 * inf")).is_zero());

        // i stays atomic
        let nf = normalize(&ix("i"));
        assert_eq!(nf.terms.len(), 1);
        assert_eq!(nf.to_index(), ix("i"));
    }

    #[test]
    fn normalize_handles_mixed_infinity() {
        // inf * i is 0 at i = 0 and ∞ elsewhere; neither plain ∞ nor finite.
        let nf = normalize(&ix("inf * i"));
        assert!(!nf.is_infinite());
        assert!(!nf.is_zero());
        let mut v = Valuation::default();
        v.insert("i", Extended::from_nat(0));
        assert_eq!(nf.eval(&v.0).unwrap(), Extended::zero());
        v.insert("i", Extended::from_nat(3));
        assert_eq!(nf.eval(&v.0).unwrap(), Extended::Infinity);

        // A positive constant part forces plain ∞.
        assert!(normalize(&ix("inf * (i + 2)")).is_infinite());
        // ∞ absorbs sums.
        assert!(normalize(&ix("inf + i")).is_infinite());
    }

    #[test]
    fn normalize_powers() {
        // Closed natural exponents expand.
        let nf = normalize(&ix("2 ^ 3"));
        assert_eq!(nf.closed_value().unwrap(), Extended::from_nat(8));
        let nf = normalize(&ix("(i + 1) ^ 2"));
        assert_eq!(nf, normalize(&ix("i * i + 2 * i + 1")));
        // Open exponents stay opaque but evaluate correctly.
        let nf = normalize(&ix("r ^ i"));
        let mut v = Valuation::default();
        v.insert("r", Extended::from_nat(2));
        v.insert("i", Extended::from_nat(3));
        assert_eq!(nf.eval(&v.0).unwrap(), Extended::from_nat(8));
        // 1^e collapses to 1.
        assert!(normalize(&ix("1 ^ i")).closed_value() == Some(Extended::one()));
    }

    #[test]
    fn eval_closed_examples() {
        let v = Valuation::default();
        assert_eq!(
            eval_closed(&ix("2 + 3 * 4"), &v).unwrap(),
            Extended::from_nat(14)
        );
        assert_eq!(eval_closed(&ix("2 ^ 3"), &v).unwrap(), Extended::from_nat(8));
        let mut v = Valuation::default();
        v.insert("r", Extended::from_nat(2));
        v.insert("i", Extended::from_nat(3));
        assert_eq!(eval_closed(&ix("r * i"), &v).unwrap(), Extended::from_nat(6));
        // Unbound variable is a None, not a crash.
        assert!(eval_closed(&ix("j"), &Valuation::default()).is_none());
    }

    #[test]
    fn entails_examples() {
        assert_eq!(entails(&con(Rel::Le, "2", "3")), Entailment::Yes);
        assert_eq!(entails(&con(Rel::Le, "r * i", "r * i + 1")), Entailment::Yes);
        assert_eq!(entails(&con(Rel::Le, "i * i", "i")), Entailment::Unknown);
        assert_eq!(entails(&con(Rel::Eq, "r * i", "i * r")), Entailment::Yes);
        assert_eq!(entails(&con(Rel::Le, "2", "1.9")), Entailment::Unknown);
        assert_eq!(entails(&con(Rel::Le, "1.9", "2")), Entailment::Yes);
        // i*i <= i is falsified at i = 2.
        let mut v = Valuation::default();
        v.insert("i", Extended::from_nat(2));
        assert_eq!(holds_under(&con(Rel::Le, "i * i", "i"), &v), Some(false));
    }

    #[test]
    fn entails_uses_assumptions() {
        let c = Constraint::new(
            vec![("i".to_string(), ix("j + 1"))],
            Rel::Le,
            ix("j + 1"),
            ix("i"),
            Origin {
                span: Span::DUMMY,
                rule: "test",
            },
        );
        assert_eq!(entails(&c), Entailment::Yes);
        // Chained assumptions reach a fixed point.
        let c = Constraint::new(
            vec![
                ("i".to_string(), ix("j + 1")),
                ("j".to_string(), Index::Nat(0)),
            ],
            Rel::Eq,
            ix("i"),
            ix("1"),
            Origin {
                span: Span::DUMMY,
                rule: "test",
            },
        );
        assert_eq!(entails(&c), Entailment::Yes);
    }

    #[test]
    fn entails_infinity_cover() {
        assert_eq!(entails(&con(Rel::Le, "i", "inf")), Entailment::Yes);
        assert_eq!(entails(&con(Rel::Le, "inf", "inf")), Entailment::Yes);
        assert_eq!(entails(&con(Rel::Le, "inf", "i")), Entailment::Unknown);
        // 2i ≤ ∞·i: the ∞-monomial vanishes exactly where i does.
        assert_eq!(entails(&con(Rel::Le, "2 * i", "inf * i")), Entailment::Yes);
        // 2 ≤ ∞·i fails at i = 0.
        assert_eq!(entails(&con(Rel::Le, "2", "inf * i")), Entailment::Unknown);
        // ∞·i ≤ ∞·i.
        assert_eq!(
            entails(&con(Rel::Le, "inf * i", "inf * i")),
            Entailment::Yes
        );
    }

    #[test]
    fn poly_roundtrip_is_idempotent() {
        for src in [
            "(i + 1) * (i + 1)",
            "r * i + 2 * j",
            "inf * i",
            "r ^ i * 3 + 0.5",
            "i ^ 2 * j ^ 3",
            "inf",
            "0",
        ] {
            let nf = normalize(&ix(src));
            assert_eq!(normalize(&nf.to_index()), nf, "roundtrip of {src}");
        }
    }

    #[test]
    fn coefficients_stay_exact() {
        let nf = normalize(&ix("0.1 + 0.2"));
        assert_eq!(
            nf.closed_value().unwrap(),
            Extended::from_rational(BigRational::new(3.into(), 10.into()))
        );
    }
}
