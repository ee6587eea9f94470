//! Solver soundness and normal-form properties.

use lindt_core::gen::{gen_constraint, gen_valuation};
use lindt_core::index::{
    constraint_vars, entails, eval_closed, holds_under, normalize, Constraint, Entailment,
    Origin, Rel, Valuation,
};
use lindt_core::syntax::ast::{Index, Sort, Span};
use num::BigRational;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeSet;

fn origin() -> Origin {
    Origin {
        span: Span::DUMMY,
        rule: "prop",
    }
}

/// Power exponents: small, so closed-exponent expansion stays small.
fn arb_exponent() -> BoxedStrategy<Index> {
    prop_oneof![
        (0u64..4).prop_map(Index::Nat),
        Just(Index::var("i", Sort::Size)),
        Just(Index::var("j", Sort::Size)),
        Just(Index::sum(Index::var("i", Sort::Size), Index::Nat(1))),
    ]
    .boxed()
}

fn arb_index() -> BoxedStrategy<Index> {
    let leaf = prop_oneof![
        (0u64..8).prop_map(Index::Nat),
        (0u32..40u32, 0u32..=2u32)
            .prop_map(|(n, k)| Index::Rat(BigRational::new(n.into(), 10u32.pow(k).into()))),
        Just(Index::Inf),
        Just(Index::var("i", Sort::Size)),
        Just(Index::var("j", Sort::Size)),
        Just(Index::var("r", Sort::Sens)),
        Just(Index::var("s", Sort::Sens)),
    ];
    let exponent = arb_exponent();
    leaf.prop_recursive(3, 16, 2, move |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Index::sum(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Index::prod(a, b)),
            (inner, exponent.clone()).prop_map(|(b, e)| Index::pow(b, e)),
        ]
    })
    .boxed()
}

fn all_vars() -> BTreeSet<(String, Sort)> {
    [
        ("i", Sort::Size),
        ("j", Sort::Size),
        ("r", Sort::Sens),
        ("s", Sort::Sens),
    ]
    .iter()
    .map(|(n, s)| (n.to_string(), *s))
    .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    /// Normalization preserves meaning under every valuation.
    #[test]
    fn normalize_preserves_semantics(ix in arb_index(), seed in 0u64..1u64 << 32) {
        let nf = normalize(&ix);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..20 {
            let v = gen_valuation(&mut rng, &all_vars());
            let direct = eval_closed(&ix, &v);
            let via_nf = nf.eval(&v.0);
            prop_assert!(direct.is_some());
            prop_assert_eq!(direct, via_nf);
        }
    }

    /// normalize ∘ to_index is the identity on normal forms.
    #[test]
    fn normalize_is_idempotent(ix in arb_index()) {
        let nf = normalize(&ix);
        prop_assert_eq!(normalize(&nf.to_index()), nf);
    }

    /// I = I always solves.
    #[test]
    fn entails_eq_is_reflexive(ix in arb_index()) {
        let c = Constraint::new(Vec::new(), Rel::Eq, ix.clone(), ix, origin());
        prop_assert_eq!(entails(&c), Entailment::Yes);
    }

    /// A provable LE stays provable after adding the same term to both
    /// sides.
    #[test]
    fn entails_le_is_monotone(a in arb_index(), b in arb_index(), c in arb_index()) {
        let plain = Constraint::new(Vec::new(), Rel::Le, a.clone(), b.clone(), origin());
        if entails(&plain) == Entailment::Yes {
            let padded = Constraint::new(
                Vec::new(),
                Rel::Le,
                Index::sum(a, c.clone()),
                Index::sum(b, c),
                origin(),
            );
            prop_assert_eq!(entails(&padded), Entailment::Yes);
        }
    }
}

/// The central solver property: `Yes` is never falsified by any
/// sort-respecting valuation. Exact rational arithmetic, no tolerance.
#[test]
fn solver_soundness_on_random_constraints() {
    let mut rng = ChaCha8Rng::seed_from_u64(1009);
    let mut provable = 0u32;
    for case in 0..1000 {
        let c = gen_constraint(&mut rng);
        if entails(&c) != Entailment::Yes {
            continue;
        }
        provable += 1;
        let vars = constraint_vars(&c);
        for trial in 0..300 {
            let v = gen_valuation(&mut rng, &vars);
            assert_eq!(
                holds_under(&c, &v),
                Some(true),
                "case {case} trial {trial}: solver said Yes but `{c}` fails under {:?}",
                v.0
            );
        }
    }
    // The generator is biased toward provable shapes; make sure the
    // property is not vacuous.
    assert!(provable >= 100, "only {provable} provable constraints");
}

#[test]
fn documented_incompleteness_examples() {
    // True but out of the dominance fragment: Unknown is the sound answer.
    let scope = vec![("i".to_string(), Sort::Size)];
    let i = || Index::Var("i".to_string(), Sort::Size);
    // i ≤ i·i + 1 holds over naturals but not coefficient-wise.
    let c = Constraint::new(
        Vec::new(),
        Rel::Le,
        i(),
        Index::sum(Index::prod(i(), i()), Index::Nat(1)),
        origin(),
    );
    assert_eq!(entails(&c), Entailment::Unknown);
    // And the valuation oracle confirms it actually holds.
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let vars: BTreeSet<_> = scope.into_iter().collect();
    for _ in 0..200 {
        let v = gen_valuation(&mut rng, &vars);
        assert_eq!(holds_under(&c, &v), Some(true));
    }
}

#[test]
fn closed_sides_compare_exactly() {
    let c = Constraint::new(
        Vec::new(),
        Rel::Le,
        Index::Rat(BigRational::new(19.into(), 10.into())),
        Index::Nat(2),
        origin(),
    );
    assert_eq!(entails(&c), Entailment::Yes);
    let c = Constraint::new(
        Vec::new(),
        Rel::Eq,
        Index::sum(Index::Rat(BigRational::new(1.into(), 10.into())), Index::Rat(BigRational::new(2.into(), 10.into()))),
        Index::Rat(BigRational::new(3.into(), 10.into())),
        origin(),
    );
    // 0.1 + 0.2 = 0.3 exactly, in rationals.
    assert_eq!(entails(&c), Entailment::Yes);
    let v = Valuation::default();
    assert_eq!(
        eval_closed(&Index::pow(Index::Nat(2), Index::Nat(10)), &v),
        eval_closed(&Index::Nat(1024), &v)
    );
}
