//! Measurement-modified quantum refrigerators.
//!
//! Six refrigeration cycles acting on qubit cooling media are modelled here:
//! the four-stroke Otto refrigerator, the two-stroke swap refrigerator, and
//! the variants of both in which a non-selective generalized measurement is
//! inserted as an extra stroke, either before (first type) or after (second
//! type) the cold-side thermal contact.
//!
//! Every cycle is available through two independent routes:
//!
//! * [`analytic`] evaluates the closed-form stroke energies, COP, the
//!   critical measurement strength and the measurement-induced engine.
//! * [`simulate`] executes the cycle literally on density operators
//!   ([`qstate`], [`channel`]) and reads the energy ledger off the states.
//!
//! [`analysis`] builds sweeps and figure datasets on top, and [`cli`] wires
//! everything into the `qfridge` binary.

pub mod analysis;
pub mod analytic;
pub mod channel;
pub mod cli;
pub mod error;
pub mod ledger;
pub mod params;
pub mod qstate;
pub mod simulate;

pub use analytic::CycleReport;
pub use channel::MeasurementChannel;
pub use error::{Error, Result};
pub use ledger::{Counterpart, EntryKind, LedgerEntry, StrokeLedger};
pub use params::{CycleKind, CycleParams, Regime, RegimeReport};
pub use qstate::{ComplexMatrix, DensityOperator, QubitHamiltonian, Subsystem};
pub use simulate::SimulationTrace;
