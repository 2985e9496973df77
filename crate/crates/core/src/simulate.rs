//! Literal stroke-by-stroke execution of the cycles on density operators.
//!
//! Ramps swap the Hamiltonian and leave the state alone, thermal contacts
//! replace the (sub)system state by the Gibbs state of its current
//! Hamiltonian, measurements apply the Kraus sum, and the swap stroke applies
//! the exchange unitary. Each stroke's energy change is booked as work
//! (ramp, swap), heat (thermal contact) or quantum heat (measurement).

use serde::Serialize;

use crate::analytic::labels::*;
use crate::analytic::CycleReport;
use crate::channel::MeasurementChannel;
use crate::error::{Error, Result};
use crate::ledger::{Counterpart, EntryKind, LedgerEntry, StrokeLedger};
use crate::params::{CycleKind, CycleParams};
use crate::qstate::{
    apply_unitary, gibbs_state, mean_energy, partial_trace, swap_unitary, tensor, DensityOperator,
    Hamiltonian, PairHamiltonian, QubitHamiltonian, Subsystem,
};

/// Default tolerance for simulated-versus-closed-form comparisons.
pub const ORACLE_TOL: f64 = 1e-10;
/// Default tolerance for structural identities (first law, closure).
pub const STRUCTURAL_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Reservoir {
    Hot,
    Cold,
}

/// What a stroke acts on: the single working qubit, or one factor of a pair.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Target {
    System,
    Hot,
    Cold,
}

impl Target {
    fn subsystem(self) -> Option<Subsystem> {
        match self {
            Target::System => None,
            Target::Hot => Some(Subsystem::Hot),
            Target::Cold => Some(Subsystem::Cold),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum StrokeKind {
    Thermalize { beta: f64, reservoir: Reservoir },
    AdiabaticRamp { omega_from: f64, omega_to: f64 },
    Measure { xi: f64 },
    SwapInteraction,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Stroke {
    /// Stroke number within the cycle; thermal recoupling of both swap
    /// qubits shares one number.
    pub index: u8,
    pub label: &'static str,
    pub kind: StrokeKind,
    pub target: Target,
}

impl Stroke {
    fn entry_kind(&self) -> (EntryKind, Counterpart) {
        match self.kind {
            StrokeKind::Thermalize {
                reservoir: Reservoir::Hot,
                ..
            } => (EntryKind::Heat, Counterpart::HotReservoir),
            StrokeKind::Thermalize {
                reservoir: Reservoir::Cold,
                ..
            } => (EntryKind::Heat, Counterpart::ColdReservoir),
            StrokeKind::Measure { .. } => {
                (EntryKind::QuantumHeat, Counterpart::MeasurementApparatus)
            }
            StrokeKind::AdiabaticRamp { .. } | StrokeKind::SwapInteraction => {
                (EntryKind::Work, Counterpart::ExternalAgent)
            }
        }
    }
}

/// Hamiltonian of the working medium at some point of the cycle.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SystemHamiltonian {
    Qubit(QubitHamiltonian),
    Pair(PairHamiltonian),
}

impl Hamiltonian for SystemHamiltonian {
    fn matrix(&self) -> crate::qstate::ComplexMatrix {
        match self {
            SystemHamiltonian::Qubit(h) => h.matrix(),
            SystemHamiltonian::Pair(h) => h.matrix(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Snapshot {
    pub hamiltonian: SystemHamiltonian,
    pub rho: DensityOperator,
}

impl Snapshot {
    pub fn energy(&self) -> Result<f64> {
        mean_energy(&self.hamiltonian, &self.rho)
    }
}

/// Stroke sequence of each cycle.
pub fn stroke_program(kind: CycleKind, p: &CycleParams) -> Vec<Stroke> {
    use StrokeKind::*;
    let up = AdiabaticRamp {
        omega_from: p.omega_c,
        omega_to: p.omega_h,
    };
    let down = AdiabaticRamp {
        omega_from: p.omega_h,
        omega_to: p.omega_c,
    };
    let hot = Thermalize {
        beta: p.beta_h,
        reservoir: Reservoir::Hot,
    };
    let cold = Thermalize {
        beta: p.beta_c,
        reservoir: Reservoir::Cold,
    };
    let measure = Measure { xi: p.xi };
    let s = |index, label, kind, target| Stroke {
        index,
        label,
        kind,
        target,
    };
    let sys = Target::System;
    match kind {
        CycleKind::Otto => vec![
            s(1, W1, up, sys),
            s(2, Q_H, hot, sys),
            s(3, W2, down, sys),
            s(4, Q_C, cold, sys),
        ],
        CycleKind::Mo1 => vec![
            s(1, W1, up, sys),
            s(2, Q_H, hot, sys),
            s(3, W2, down, sys),
            s(4, Q_XI, measure, sys),
            s(5, Q_C_XI, cold, sys),
        ],
        CycleKind::Mo2 => vec![
            s(1, Q_XI, measure, sys),
            s(2, W1_PLUS_W_XI, up, sys),
            s(3, Q_H_XI, hot, sys),
            s(4, W2, down, sys),
            s(5, Q_C, cold, sys),
        ],
        CycleKind::Swap => vec![
            s(1, W_IN, SwapInteraction, sys),
            s(2, Q_H, hot, Target::Hot),
            s(2, Q_C, cold, Target::Cold),
        ],
        CycleKind::Ms1 => vec![
            s(1, W_IN, SwapInteraction, sys),
            s(2, Q_XI, measure, Target::Cold),
            s(3, Q_H, hot, Target::Hot),
            s(3, Q_C_XI, cold, Target::Cold),
        ],
        CycleKind::Ms2 => vec![
            s(1, Q_XI, measure, Target::Cold),
            s(2, W_EX_XI, SwapInteraction, sys),
            s(3, Q_H_XI, hot, Target::Hot),
            s(3, Q_C, cold, Target::Cold),
        ],
    }
}

/// Starting point of every cycle: the medium in equilibrium with its reservoir(s).
pub fn initial_snapshot(kind: CycleKind, p: &CycleParams) -> Result<Snapshot> {
    let h_c = QubitHamiltonian::new(p.omega_c)?;
    let rho_c = gibbs_state(&h_c, p.beta_c)?;
    if kind.is_swap() {
        let h_h = QubitHamiltonian::new(p.omega_h)?;
        let rho_h = gibbs_state(&h_h, p.beta_h)?;
        Ok(Snapshot {
            hamiltonian: SystemHamiltonian::Pair(PairHamiltonian {
                hot: h_h,
                cold: h_c,
            }),
            rho: tensor(&rho_h, &rho_c)?,
        })
    } else {
        Ok(Snapshot {
            hamiltonian: SystemHamiltonian::Qubit(h_c),
            rho: rho_c,
        })
    }
}

fn sub_hamiltonian(h: &PairHamiltonian, which: Subsystem) -> QubitHamiltonian {
    match which {
        Subsystem::Hot => h.hot,
        Subsystem::Cold => h.cold,
    }
}

fn other(which: Subsystem) -> Subsystem {
    match which {
        Subsystem::Hot => Subsystem::Cold,
        Subsystem::Cold => Subsystem::Hot,
    }
}

/// Applies one stroke; returns the new snapshot and the booked energy change.
fn step(state: &Snapshot, stroke: &Stroke) -> Result<(Snapshot, f64)> {
    let mismatch = || {
        Error::Structural(format!(
            "stroke '{}' ({:?}) cannot act on {:?}",
            stroke.label, stroke.kind, stroke.target
        ))
    };
    let next = match (stroke.kind, state.hamiltonian, stroke.target.subsystem()) {
        (
            StrokeKind::AdiabaticRamp {
                omega_from,
                omega_to,
            },
            SystemHamiltonian::Qubit(h),
            None,
        ) => {
            if h.omega() != omega_from {
                return Err(Error::Structural(format!(
                    "ramp from {omega_from} but medium is at {}",
                    h.omega()
                )));
            }
            Snapshot {
                hamiltonian: SystemHamiltonian::Qubit(QubitHamiltonian::new(omega_to)?),
                rho: state.rho.clone(),
            }
        }
        (StrokeKind::Thermalize { beta, .. }, SystemHamiltonian::Qubit(h), None) => Snapshot {
            hamiltonian: state.hamiltonian,
            rho: gibbs_state(&h, beta)?,
        },
        (StrokeKind::Thermalize { beta, .. }, SystemHamiltonian::Pair(h), Some(which)) => {
            let h_sub = sub_hamiltonian(&h, which);
            let before = partial_trace(&state.rho, which)?;
            let after = gibbs_state(&h_sub, beta)?;
            let rest = partial_trace(&state.rho, other(which))?;
            let rho = match which {
                Subsystem::Hot => tensor(&after, &rest)?,
                Subsystem::Cold => tensor(&rest, &after)?,
            };
            // Heat from the reduced states of the recoupled qubit.
            let heat = mean_energy(&h_sub, &after)? - mean_energy(&h_sub, &before)?;
            return Ok((
                Snapshot {
                    hamiltonian: state.hamiltonian,
                    rho,
                },
                heat,
            ));
        }
        (StrokeKind::Measure { xi }, SystemHamiltonian::Qubit(_), None) => Snapshot {
            hamiltonian: state.hamiltonian,
            rho: MeasurementChannel::new(xi)?.apply(&state.rho)?,
        },
        (StrokeKind::Measure { xi }, SystemHamiltonian::Pair(_), Some(which)) => Snapshot {
            hamiltonian: state.hamiltonian,
            rho: MeasurementChannel::new(xi)?.apply_on_subsystem(&state.rho, which)?,
        },
        (StrokeKind::SwapInteraction, SystemHamiltonian::Pair(_), None) => Snapshot {
            hamiltonian: state.hamiltonian,
            rho: apply_unitary(&swap_unitary(), &state.rho)?,
        },
        _ => return Err(mismatch()),
    };
    let delta = next.energy()? - state.energy()?;
    Ok((next, delta))
}

/// Everything recorded while running one cycle.
#[derive(Clone, Debug, PartialEq)]
pub struct SimulationTrace {
    pub kind: CycleKind,
    pub params: CycleParams,
    pub program: Vec<Stroke>,
    /// `program.len() + 1` snapshots, the initial one first.
    pub states: Vec<Snapshot>,
    /// Mean energy of each snapshot.
    pub energies: Vec<f64>,
    pub ledger: StrokeLedger,
}

impl SimulationTrace {
    /// Largest entrywise gap between the final and initial density operators.
    pub fn closure_residual(&self) -> f64 {
        let first = self.states.first().expect("initial snapshot");
        let last = self.states.last().expect("final snapshot");
        if first.hamiltonian != last.hamiltonian {
            return f64::INFINITY;
        }
        last.rho
            .matrix()
            .max_abs_diff(first.rho.matrix())
            .unwrap_or(f64::INFINITY)
    }

    /// One stroke per line: `stroke,label,kind,counterpart,value`.
    pub fn to_record(&self) -> String {
        self.ledger.to_csv()
    }
}

/// Runs the full stroke program of `kind` starting from equilibrium.
pub fn run_cycle(kind: CycleKind, p: &CycleParams) -> Result<SimulationTrace> {
    p.require_ledger_regime()?;
    let program = stroke_program(kind, p);
    let mut state = initial_snapshot(kind, p)?;
    let mut states = Vec::with_capacity(program.len() + 1);
    let mut energies = Vec::with_capacity(program.len() + 1);
    let mut entries = Vec::with_capacity(program.len());
    energies.push(state.energy()?);
    for stroke in &program {
        let (next, value) = step(&state, stroke)?;
        let (kind, counterpart) = stroke.entry_kind();
        entries.push(LedgerEntry::new(
            stroke.index,
            stroke.label,
            kind,
            counterpart,
            value,
        ));
        states.push(std::mem::replace(&mut state, next));
        energies.push(state.energy()?);
    }
    states.push(state);
    Ok(SimulationTrace {
        kind,
        params: *p,
        program,
        states,
        energies,
        ledger: StrokeLedger::new(entries),
    })
}

/// Per-entry gaps between a simulated and a closed-form ledger.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Discrepancy {
    pub per_entry: Vec<(String, f64)>,
    pub max_abs: f64,
    pub worst_label: String,
    pub tol: f64,
    pub passed: bool,
}

/// Compares two ledgers entry by entry; labels and order must agree.
pub fn compare_ledgers(
    numeric: &StrokeLedger,
    closed_form: &StrokeLedger,
    tol: f64,
) -> Result<Discrepancy> {
    if numeric.len() != closed_form.len() {
        return Err(Error::Structural(format!(
            "{} simulated entries vs {} closed-form entries",
            numeric.len(),
            closed_form.len()
        )));
    }
    let mut per_entry = Vec::with_capacity(numeric.len());
    let mut worst = (String::new(), -1.0);
    for (a, b) in numeric.iter().zip(closed_form.iter()) {
        if a.label != b.label || a.stroke != b.stroke {
            return Err(Error::Structural(format!(
                "entry {}:{} does not line up with {}:{}",
                a.stroke, a.label, b.stroke, b.label
            )));
        }
        let d = (a.value - b.value).abs();
        // NaN counts as the worst possible gap
        let d = if d.is_nan() { f64::INFINITY } else { d };
        if d > worst.1 {
            worst = (a.label.clone(), d);
        }
        per_entry.push((a.label.clone(), d));
    }
    let max_abs = worst.1.max(0.0);
    Ok(Discrepancy {
        per_entry,
        max_abs,
        worst_label: worst.0,
        tol,
        passed: max_abs <= tol,
    })
}

pub fn compare_to_analytic(
    trace: &SimulationTrace,
    report: &CycleReport,
    tol: f64,
) -> Result<Discrepancy> {
    if trace.kind != report.kind {
        return Err(Error::Structural(format!(
            "trace of {} compared with report of {}",
            trace.kind, report.kind
        )));
    }
    compare_ledgers(&trace.ledger, &report.ledger, tol)
}
