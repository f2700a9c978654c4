//! Confining subsets `Q` of the base, the checks of the confining
//! conditions on finite windows, and recovery of the subgroup `H` with
//! `[X] = [S_H]`.

mod check;
mod gf2;
mod membership;
pub mod qspec;
mod recover;
mod saturate;
mod zmodule;

pub use check::{
    check_confining, CheckParams, CondA, CondB, CondC, ConfiningReport, Direction, Mode, Verdict,
};
pub use membership::{q_membership, QOracle};
pub use qspec::{ClosureFlags, QKind, QSpec};
pub use recover::{
    recover_subgroup, validate_equivalence, FamilyGrowth, Outcome, RecoverParams, RecoveryReport,
    ValidationReport,
};
pub use saturate::{
    saturate, window_members_basis, Rule, SaturationParams, SaturationState, Step, TraceEntry,
};
