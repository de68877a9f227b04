//! Resolution proving over clausal forms, with answer extraction.

mod prover;
mod unify;

pub use prover::{
    answer_who, instantiate_goal, prove, prove_with, resolve_step, Limits, ProofResult, ProofStatus, ProofStep, Search,
};
pub use unify::{unify, unify_terms, Substitution};
