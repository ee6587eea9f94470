//! The primitive signature table.

use crate::index::normalize;
use crate::syntax::ast::{Index, Prim, Sort, Type};

/// Which grade `iter` promises for its iterated argument.
///
/// Composing an r-sensitive function i times amplifies distances by r^i,
/// so `Power` is the sound default. `Linear` installs the r·i grade instead,
/// which overclaims for r > 1 (e.g. r = 2, i = 3 amplifies by 8, not 6);
/// it is kept behind a flag so the runtime probe can demonstrate the gap.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum IterScheme {
    #[default]
    Power,
    Linear,
}

/// Closed type scheme of a primitive constant.
pub fn prim_type(prim: &Prim, iter_scheme: IterScheme) -> Type {
    match prim {
        // add : ![1] R -o ![1] R -o R
        Prim::Add => Type::arrow(
            Type::bang(Index::Nat(1), Type::Real),
            Type::arrow(Type::bang(Index::Nat(1), Type::Real), Type::Real),
        ),
        // cmul(q) : ![q] R -o R
        Prim::CMul(q) => {
            let grade = normalize(&Index::Rat(q.clone())).to_index();
            Type::arrow(Type::bang(grade, Type::Real), Type::Real)
        }
        // iter : forall i : size . forall r : sens .
        //          Nat[i] -> (![r] R -o R) -> ![r^i] R -o R
        Prim::Iter => {
            let i = || Index::var("i", Sort::Size);
            let r = || Index::var("r", Sort::Sens);
            let grade = match iter_scheme {
                IterScheme::Power => Index::pow(r(), i()),
                IterScheme::Linear => Index::prod(r(), i()),
            };
            Type::forall(
                "i",
                Sort::Size,
                Type::forall(
                    "r",
                    Sort::Sens,
                    Type::fn_arrow(
                        Type::Nat(i()),
                        Type::fn_arrow(
                            Type::arrow(Type::bang(r(), Type::Real), Type::Real),
                            Type::arrow(Type::bang(grade, Type::Real), Type::Real),
                        ),
                    ),
                ),
            )
        }
        // nil : List[0] R
        Prim::Nil => Type::list(Index::Nat(0), Type::Real),
        // cons : forall j : size . ![1] R -o ![1] List[j] R -o List[j + 1] R
        Prim::Cons => {
            let j = || Index::var("j", Sort::Size);
            Type::forall(
                "j",
                Sort::Size,
                Type::arrow(
                    Type::bang(Index::Nat(1), Type::Real),
                    Type::arrow(
                        Type::bang(Index::Nat(1), Type::list(j(), Type::Real)),
                        Type::list(Index::sum(j(), Index::Nat(1)), Type::Real),
                    ),
                ),
            )
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::pretty_type;

    #[test]
    fn signatures_print_as_expected() {
        assert_eq!(
            pretty_type(&prim_type(&Prim::Add, IterScheme::Power)),
            "![1] R -o ![1] R -o R"
        );
        assert_eq!(
            pretty_type(&prim_type(&Prim::Iter, IterScheme::Power)),
            "forall i : size . forall r : sens . Nat[i] -> (![r] R -o R) -> ![r ^ i] R -o R"
        );
        assert_eq!(
            pretty_type(&prim_type(&Prim::Iter, IterScheme::Linear)),
            "forall i : size . forall r : sens . Nat[i] -> (![r] R -o R) -> ![r * i] R -o R"
        );
        assert_eq!(
            pretty_type(&prim_type(&Prim::Cons, IterScheme::Power)),
            "forall j : size . ![1] R -o ![1] List[j] R -o List[j + 1] R"
        );
    }
}
