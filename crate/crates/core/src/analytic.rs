//! Closed-form stroke energies for the six cycles.
//!
//! Everything here is written in terms of `tanh(beta omega / 2)` and the
//! excited-state weight `exp(-beta omega / 2) / Z`; no density matrices are
//! involved. The simulator in [`crate::simulate`] provides the independent
//! route these values are checked against.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::ledger::{Counterpart, EntryKind, LedgerEntry, StrokeLedger};
use crate::params::{CycleKind, CycleParams};

pub mod labels {
    pub const W1: &str = "W1";
    pub const W2: &str = "W2";
    pub const Q_H: &str = "Q_h";
    pub const Q_C: &str = "Q_c";
    pub const Q_XI: &str = "Q(xi)";
    pub const Q_C_XI: &str = "Q_c(xi)";
    pub const Q_H_XI: &str = "Q_h(xi)";
    pub const W1_PLUS_W_XI: &str = "W1+W(xi)";
    pub const W_IN: &str = "W_in";
    pub const W_EX_XI: &str = "W_ex(xi)";
}

use labels::*;

fn tanh_cold(p: &CycleParams) -> f64 {
    p.half_cold_gap().tanh()
}

fn tanh_hot(p: &CycleParams) -> f64 {
    p.half_hot_gap().tanh()
}

/// `exp(-beta_c omega_c / 2) / Z_c`.
pub fn excited_weight_cold(p: &CycleParams) -> f64 {
    (-p.half_cold_gap()).exp() / p.z_cold()
}

/// `exp(-beta_h omega_h / 2) / Z_h`.
pub fn excited_weight_hot(p: &CycleParams) -> f64 {
    (-p.half_hot_gap()).exp() / p.z_hot()
}

/// Work on the compression ramp `omega_c -> omega_h` from the cold Gibbs state.
pub fn w1(p: &CycleParams) -> f64 {
    0.5 * (p.omega_c - p.omega_h) * tanh_cold(p)
}

/// Work on the expansion ramp `omega_h -> omega_c` from the hot Gibbs state.
pub fn w2(p: &CycleParams) -> f64 {
    0.5 * (p.omega_h - p.omega_c) * tanh_hot(p)
}

/// Heat exchanged with the hot reservoir in the unmodified cycle.
pub fn q_h(p: &CycleParams) -> f64 {
    0.5 * p.omega_h * (tanh_cold(p) - tanh_hot(p))
}

/// Heat drawn from the cold reservoir in the unmodified cycle.
pub fn q_c(p: &CycleParams) -> f64 {
    0.5 * p.omega_c * (tanh_hot(p) - tanh_cold(p))
}

/// Invested work `W1 + W2`; independent of `xi`.
pub fn w_in(p: &CycleParams) -> f64 {
    0.5 * (p.omega_h - p.omega_c) * (tanh_hot(p) - tanh_cold(p))
}

/// Quantum heat when measuring the hot-thermal state at frequency `omega_c`
/// (first-type cycles).
pub fn q_meas_first(p: &CycleParams) -> f64 {
    -p.xi * p.omega_c * excited_weight_hot(p)
}

/// Quantum heat when measuring the cold Gibbs state (second-type cycles).
pub fn q_meas_second(p: &CycleParams) -> f64 {
    -p.xi * p.omega_c * excited_weight_cold(p)
}

/// Measurement-induced engine work `W(xi)`.
pub fn w_meas(p: &CycleParams) -> f64 {
    p.xi * (p.omega_c - p.omega_h) * excited_weight_cold(p)
}

/// Quantum heat `Q'(xi)` absorbed from the hot reservoir by the induced engine.
pub fn q_prime(p: &CycleParams) -> f64 {
    p.xi * p.omega_h * excited_weight_cold(p)
}

/// External work `W_ex(xi) = W_in + W(xi)` of the second-type cycles.
pub fn w_ex(p: &CycleParams) -> f64 {
    w_in(p) + w_meas(p)
}

fn work(stroke: u8, label: &str, value: f64) -> LedgerEntry {
    LedgerEntry::new(
        stroke,
        label,
        EntryKind::Work,
        Counterpart::ExternalAgent,
        value,
    )
}

fn heat_hot(stroke: u8, label: &str, value: f64) -> LedgerEntry {
    LedgerEntry::new(
        stroke,
        label,
        EntryKind::Heat,
        Counterpart::HotReservoir,
        value,
    )
}

fn heat_cold(stroke: u8, label: &str, value: f64) -> LedgerEntry {
    LedgerEntry::new(
        stroke,
        label,
        EntryKind::Heat,
        Counterpart::ColdReservoir,
        value,
    )
}

fn quantum_heat(stroke: u8, label: &str, value: f64) -> LedgerEntry {
    LedgerEntry::new(
        stroke,
        label,
        EntryKind::QuantumHeat,
        Counterpart::MeasurementApparatus,
        value,
    )
}

pub fn otto_ledger(p: &CycleParams) -> Result<StrokeLedger> {
    p.require_ledger_regime()?;
    Ok(StrokeLedger::new(vec![
        work(1, W1, w1(p)),
        heat_hot(2, Q_H, q_h(p)),
        work(3, W2, w2(p)),
        heat_cold(4, Q_C, q_c(p)),
    ]))
}

pub fn mo1_ledger(p: &CycleParams) -> Result<StrokeLedger> {
    p.require_ledger_regime()?;
    let q = q_meas_first(p);
    Ok(StrokeLedger::new(vec![
        work(1, W1, w1(p)),
        heat_hot(2, Q_H, q_h(p)),
        work(3, W2, w2(p)),
        quantum_heat(4, Q_XI, q),
        heat_cold(5, Q_C_XI, q_c(p) - q),
    ]))
}

pub fn mo2_ledger(p: &CycleParams) -> Result<StrokeLedger> {
    p.require_ledger_regime()?;
    Ok(StrokeLedger::new(vec![
        quantum_heat(1, Q_XI, q_meas_second(p)),
        work(2, W1_PLUS_W_XI, w1(p) + w_meas(p)),
        heat_hot(3, Q_H_XI, q_h(p) + q_prime(p)),
        work(4, W2, w2(p)),
        heat_cold(5, Q_C, q_c(p)),
    ]))
}

pub fn swap_ledger(p: &CycleParams) -> Result<StrokeLedger> {
    p.require_ledger_regime()?;
    Ok(StrokeLedger::new(vec![
        work(1, W_IN, w_in(p)),
        heat_hot(2, Q_H, q_h(p)),
        heat_cold(2, Q_C, q_c(p)),
    ]))
}

pub fn ms1_ledger(p: &CycleParams) -> Result<StrokeLedger> {
    p.require_ledger_regime()?;
    let q = q_meas_first(p);
    Ok(StrokeLedger::new(vec![
        work(1, W_IN, w_in(p)),
        quantum_heat(2, Q_XI, q),
        heat_hot(3, Q_H, q_h(p)),
        heat_cold(3, Q_C_XI, q_c(p) - q),
    ]))
}

pub fn ms2_ledger(p: &CycleParams) -> Result<StrokeLedger> {
    p.require_ledger_regime()?;
    Ok(StrokeLedger::new(vec![
        quantum_heat(1, Q_XI, q_meas_second(p)),
        work(2, W_EX_XI, w_ex(p)),
        heat_hot(3, Q_H_XI, q_h(p) + q_prime(p)),
        heat_cold(3, Q_C, q_c(p)),
    ]))
}

pub fn ledger(kind: CycleKind, p: &CycleParams) -> Result<StrokeLedger> {
    match kind {
        CycleKind::Otto => otto_ledger(p),
        CycleKind::Swap => swap_ledger(p),
        CycleKind::Mo1 => mo1_ledger(p),
        CycleKind::Mo2 => mo2_ledger(p),
        CycleKind::Ms1 => ms1_ledger(p),
        CycleKind::Ms2 => ms2_ledger(p),
    }
}

/// COP of the first-type modified Otto refrigerator in closed form:
/// `(omega_h/omega_c - 1)^-1 (1 + (2 xi / Z_h) e^{-beta_h omega_h/2} / Δtanh)`.
pub fn mo1_cop(p: &CycleParams) -> Result<f64> {
    p.require_strict_regime("COP")?;
    Ok(first_type_cop(p))
}

fn first_type_cop(p: &CycleParams) -> f64 {
    let dtanh = tanh_hot(p) - tanh_cold(p);
    let boost = 2.0 * p.xi / p.z_hot() * (-p.half_hot_gap()).exp() / dtanh;
    (1.0 + boost) / (p.omega_h / p.omega_c - 1.0)
}

/// COP of the first-type modified swap refrigerator. Its closed form
/// coincides with [`mo1_cop`]; [`ledger_cop`] gives the ratio read off the
/// swap ledger.
pub fn ms1_cop(p: &CycleParams) -> Result<f64> {
    p.require_strict_regime("COP")?;
    Ok(first_type_cop(p))
}

/// Cold-reservoir heat over invested work, both taken from `ledger(kind, p)`.
pub fn ledger_cop(kind: CycleKind, p: &CycleParams) -> Result<f64> {
    p.require_strict_regime("COP")?;
    let l = ledger(kind, p)?;
    let q_c = l.sum_where(|e| e.counterpart == Counterpart::ColdReservoir);
    let invested = match kind {
        CycleKind::Otto | CycleKind::Mo1 => l.get(W1).expect("entry") + l.get(W2).expect("entry"),
        CycleKind::Swap | CycleKind::Ms1 => l.get(W_IN).expect("entry"),
        CycleKind::Mo2 => l.get(W1_PLUS_W_XI).expect("entry") + l.get(W2).expect("entry"),
        CycleKind::Ms2 => l.get(W_EX_XI).expect("entry"),
    };
    let invested = if kind.is_second_type() {
        invested - w_meas(p)
    } else {
        invested
    };
    Ok(q_c / invested)
}

/// COP of the second-type cycles, `Q_c / (W_ex(xi) - W(xi))`; independent of `xi`.
/// The denominator is the invested work `W_in`, evaluated directly because the
/// difference cancels badly when `|W(xi)| >> W_in`.
pub fn mo2_cop(p: &CycleParams) -> Result<f64> {
    p.require_strict_regime("COP")?;
    Ok(q_c(p) / mo2_work_split(p)?.w_in)
}

/// How the invested work of a second-type cycle is supplied.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct WorkSplit {
    /// Work from the external agent, `W_ex(xi)`.
    pub w_ex: f64,
    /// Work extracted by the measurement-induced engine, `W(xi) <= 0`.
    pub w_meas: f64,
    /// Total invested work `W_ex(xi) - W(xi)`.
    pub w_in: f64,
    /// `W_ex(xi) < 0`: the engine delivers more than the refrigerator needs.
    pub surplus: bool,
}

pub fn mo2_work_split(p: &CycleParams) -> Result<WorkSplit> {
    p.require_ledger_regime()?;
    let w_ex = w_ex(p);
    let w_meas = w_meas(p);
    Ok(WorkSplit {
        w_ex,
        w_meas,
        w_in: w_in(p),
        surplus: w_ex < 0.0,
    })
}

/// Measurement strength at which the external work vanishes:
/// `xi_c = Z_c (e^{beta_c omega_c / 2} / 2) Δtanh`. Ignores `p.xi`.
pub fn xi_critical(p: &CycleParams) -> Result<f64> {
    p.require_strict_regime("xi_c (it collapses to 0)")?;
    let a = p.half_cold_gap();
    Ok(p.z_cold() * 0.5 * a.exp() * (tanh_hot(p) - tanh_cold(p)))
}

/// Efficiency of the measurement-induced engine.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct EngineEfficiency {
    /// `1 - omega_c / omega_h`.
    pub symbolic: f64,
    /// `-W(xi) / Q'(xi)` evaluated from the ledger terms.
    pub ledger_ratio: f64,
}

pub fn mo2_engine_efficiency(p: &CycleParams) -> Result<EngineEfficiency> {
    if p.xi == 0.0 {
        return Err(Error::UndefinedEngine);
    }
    Ok(EngineEfficiency {
        symbolic: 1.0 - p.omega_c / p.omega_h,
        ledger_ratio: -w_meas(p) / q_prime(p),
    })
}

/// Derived scalars of one cycle instance.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CycleReport {
    pub kind: CycleKind,
    pub params: CycleParams,
    pub ledger: StrokeLedger,
    pub w_in: f64,
    pub w_ex: f64,
    pub w_meas: f64,
    pub surplus: bool,
    pub q_c_total: f64,
    pub q_h_total: f64,
    pub cop: f64,
    pub xi_critical: Option<f64>,
    pub engine_efficiency: Option<f64>,
}

/// Full closed-form report; fails outside the strict refrigeration regime
/// because the COP is undefined there.
pub fn report(kind: CycleKind, p: &CycleParams) -> Result<CycleReport> {
    let ledger = ledger(kind, p)?;
    p.require_strict_regime("COP")?;
    let q_c_total = ledger.sum_where(|e| e.counterpart == Counterpart::ColdReservoir);
    let q_h_total = ledger.sum_where(|e| e.counterpart == Counterpart::HotReservoir);
    let mut r = CycleReport {
        kind,
        params: *p,
        ledger,
        w_in: w_in(p),
        w_ex: w_in(p),
        w_meas: 0.0,
        surplus: false,
        q_c_total,
        q_h_total,
        cop: 0.0,
        xi_critical: None,
        engine_efficiency: None,
    };
    match kind {
        CycleKind::Otto | CycleKind::Swap => {
            r.cop = q_c(p) / w_in(p);
        }
        CycleKind::Mo1 => r.cop = mo1_cop(p)?,
        CycleKind::Ms1 => r.cop = ms1_cop(p)?,
        CycleKind::Mo2 | CycleKind::Ms2 => {
            let split = mo2_work_split(p)?;
            r.w_in = split.w_in;
            r.w_ex = split.w_ex;
            r.w_meas = split.w_meas;
            r.surplus = split.surplus;
            r.cop = mo2_cop(p)?;
            r.xi_critical = Some(xi_critical(p)?);
            r.engine_efficiency = mo2_engine_efficiency(p).ok().map(|e| e.ledger_ratio);
        }
    }
    Ok(r)
}
