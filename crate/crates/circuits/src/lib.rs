//! Constraint-system construction for verifiable presentations: the
//! builder, the gadget library with its pinned per-component costs, the
//! scenario assembler and the accounting report.

pub mod accounting;
pub mod builder;
pub mod gadgets;
pub mod scenario;
pub mod witness;

mod error;

pub use accounting::{AccountingReport, ReportRow};
pub use builder::{Constraint, ConstraintSystem, Hint, Lc, Wire, WitnessAssignment};
pub use error::CircuitError;
pub use scenario::{
    assemble_vp_circuit, CredentialSlot, PredicateSpec, ScenarioSpec, VpCircuit, VpLayout,
};
pub use witness::{CredentialEvidence, VpInputs, VpPublicInputs};
