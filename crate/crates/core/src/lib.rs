//! Finite, decidable machinery for varieties generated by projection algebras.
//!
//! The crate is `no_std` (it needs `alloc`) and performs no IO. It covers:
//!
//! * [`term`]: vocabularies, terms over variables and the constants
//!   `c(m,n)`/`d(n)`, equations and substitution;
//! * [`model`]: finite projection algebras, term reduction and law checking;
//! * [`engine`]: free algebras as tuple closures in finite products, the word
//!   problem, two independent subalgebra membership procedures and free-factor
//!   search;
//! * [`construction`]: stage plans, the collapse-model builder and the finite
//!   witness reports for the one-block construction principle;
//! * [`transversal`]: free and almost free set families via Hopcroft-Karp
//!   matching with Hall violator certificates, plus finite tree systems.
//!
//! The `varietas` crate wraps all of this with JSON documents and a CLI.

#![no_std]

extern crate alloc;

mod bigint_serde;

pub mod construction;
pub mod engine;
pub mod model;
pub mod term;
pub mod transversal;
pub mod union_find;

pub use construction::{
    build_collapse_model, build_generic_model, build_stage_plan, cp1_finite_witness, default_enumeration,
    verify_k0_truncation, CpReport, Dovetail, StagePlan,
};
pub use engine::{FactorVerdict, Family, Tuple};
pub use model::{Leaf, ProjectionAlgebra};
pub use term::{ConstantName, Equation, FunctionSymbol, Term, Vocabulary};
pub use transversal::{find_transversal, is_almost_free, is_free, SetFamily, TransversalOutcome};
