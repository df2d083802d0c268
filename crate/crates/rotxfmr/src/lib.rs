//! Analytical modeling of axial-flux rotary transformers.
//!
//! A rotary transformer couples power across an airgap between a stationary
//! and a rotating core, replacing slip rings and brushes. This crate computes
//! its magnetizing and leakage inductances from geometry with a lumped
//! reluctance network, converts between the three standard two-winding
//! circuit models, evaluates voltage-transfer frequency responses, and
//! applies a transformer-ratio adjustment that matters when leakage and
//! magnetizing inductances are of comparable size (small transformers).
//!
//! Module map:
//!
//! - [`geometry`]: dimension set, validation, derived stack heights and
//!   fringe radii
//! - [`mec`]: magnetic equivalent circuit — core, airgap, and fringing
//!   reluctances, magnetizing inductance, energy-method leakage inductance
//! - [`circuits`]: coupled-inductor, split-leakage, and integrated-leakage
//!   circuit models, ratio computations, transfer functions, Bode sampling
//! - [`analysis`]: airgap sweeps, reference-data comparison, turn-count
//!   back-solving, voltage-gain prediction
//! - [`cli`]: config parsing and the `rotxfmr` command-line front end
//!
//! The `examples/` directory holds one runnable example per capability; see
//! the README for a tour.

pub mod analysis;
pub mod circuits;
pub mod cli;
pub mod geometry;
pub mod mec;

pub use analysis::{
    airgap_sweep, backsolve_turns, compare_reference, voltage_gain, ComparisonReport, GainStudy,
    PredictedVoltages, ReferenceDataset, SweepResult, SweepScale, SweepSpec,
};
pub use circuits::{
    adjusted_ratio, bode_sample, coupling_coefficient, exact_ratio, from_mec, to_model_ii,
    to_model_iii, transfer_model_i, transfer_model_ii, transfer_model_iii, CircuitModel,
    CouplingParams, FrequencyResponse, IntegratedLeakageParams, LoadImpedance, SplitLeakageParams,
};
pub use geometry::{
    DerivedDimensions, GeometryError, MaterialSpec, TransformerGeometry, WindingSpec, MU_0,
};
pub use mec::{
    core_reluctances, gap_reluctances, leakage_field, leakage_inductance,
    leakage_inductance_numeric, magnetizing_inductance, total_reluctance, CoreReluctances,
    GapReluctances, LeakageField, ReluctanceBreakdown,
};
