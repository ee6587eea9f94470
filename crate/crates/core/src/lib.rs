//! lindt: a checker and empirical analyzer for a small functional language
//! with linear indexed (graded modal) types.
//!
//! The library is organized in four layers:
//!
//! - [`syntax`] — concrete grammar, abstract syntax, parsing and printing;
//! - [`index`] — the index language (sizes and sensitivities): sorting,
//!   substitution, polynomial normal forms and the constraint solver;
//! - [`typecheck`] — the graded linear checker: usage contexts, subtyping,
//!   constraint generation and the primitive signature table;
//! - [`semantics`] — runtime ground truth: interpreter, value metric,
//!   sensitivity probe and the step-counting Krivine machine.
//!
//! [`gen`] provides deterministic random generators for programs, values and
//! constraints, used by the property and acceptance suites.

pub mod gen;
pub mod index;
pub mod semantics;
pub mod syntax;
pub mod typecheck;
