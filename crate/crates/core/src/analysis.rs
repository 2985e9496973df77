//! Parameter sweeps, bisection for the critical strength, regime checks and
//! the COP / removed-heat figure datasets.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::Serialize;

use crate::analytic;
use crate::error::{Error, Result};
use crate::params::{CycleKind, CycleParams, Regime, RegimeReport};

/// Which [`CycleParams`] field a sweep varies.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SweptParam {
    Xi,
    OmegaC,
    OmegaH,
    BetaC,
    BetaH,
}

impl SweptParam {
    pub fn name(self) -> &'static str {
        match self {
            SweptParam::Xi => "xi",
            SweptParam::OmegaC => "omega_c",
            SweptParam::OmegaH => "omega_h",
            SweptParam::BetaC => "beta_c",
            SweptParam::BetaH => "beta_h",
        }
    }

    fn apply(self, base: &CycleParams, value: f64) -> Result<CycleParams> {
        let mut p = *base;
        match self {
            SweptParam::Xi => p.xi = value,
            SweptParam::OmegaC => p.omega_c = value,
            SweptParam::OmegaH => p.omega_h = value,
            SweptParam::BetaC => p.beta_c = value,
            SweptParam::BetaH => p.beta_h = value,
        }
        CycleParams::new(p.omega_c, p.omega_h, p.beta_c, p.beta_h, p.xi)
    }
}

impl FromStr for SweptParam {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let norm = s.replace('-', "_").to_ascii_lowercase();
        [
            SweptParam::Xi,
            SweptParam::OmegaC,
            SweptParam::OmegaH,
            SweptParam::BetaC,
            SweptParam::BetaH,
        ]
        .into_iter()
        .find(|p| p.name() == norm)
        .ok_or_else(|| Error::InvalidParameter(format!("unknown sweep parameter '{s}'")))
    }
}

impl fmt::Display for SweptParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepSpec {
    pub kind: CycleKind,
    pub param: SweptParam,
    pub from: f64,
    pub to: f64,
    pub steps: usize,
    /// Values of the parameters that are not swept.
    pub fixed: CycleParams,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.from.is_finite() && self.to.is_finite()) || self.from >= self.to {
            return Err(Error::InvalidParameter(format!(
                "sweep range must satisfy from < to, got [{}, {}]",
                self.from, self.to
            )));
        }
        if self.steps < 2 {
            return Err(Error::InvalidParameter(format!(
                "sweep needs at least 2 steps, got {}",
                self.steps
            )));
        }
        Ok(())
    }

    /// Inclusive grid; the last point is exactly `to`.
    pub fn grid(&self) -> Vec<f64> {
        let n = self.steps - 1;
        (0..=n)
            .map(|i| {
                if i == n {
                    self.to
                } else {
                    self.from + (self.to - self.from) * i as f64 / n as f64
                }
            })
            .collect()
    }
}

/// Status of one grid point.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RowStatus {
    Regime(Regime),
    /// The grid point is not a valid parameter set at all.
    Invalid(String),
}

impl RowStatus {
    pub fn label(&self) -> &str {
        match self {
            RowStatus::Regime(r) => r.name(),
            RowStatus::Invalid(_) => "invalid",
        }
    }

    pub fn is_refrigerator(&self) -> bool {
        *self == RowStatus::Regime(Regime::Refrigerator)
    }
}

/// Quantities at one grid point; `NaN` where undefined for the regime.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepRow {
    pub value: f64,
    pub cop: f64,
    pub q_c_total: f64,
    pub w_in: f64,
    pub w_ex: f64,
    pub status: RowStatus,
}

impl SweepRow {
    fn skipped(value: f64, status: RowStatus) -> Self {
        Self {
            value,
            cop: f64::NAN,
            q_c_total: f64::NAN,
            w_in: f64::NAN,
            w_ex: f64::NAN,
            status,
        }
    }
}

fn evaluate(kind: CycleKind, p: &CycleParams, value: f64) -> Result<SweepRow> {
    let regime = p.regime().regime;
    match regime {
        Regime::NonRefrigerator => Ok(SweepRow::skipped(value, RowStatus::Regime(regime))),
        Regime::Boundary => {
            let ledger = analytic::ledger(kind, p)?;
            let w_ex = if kind.is_second_type() {
                analytic::w_ex(p)
            } else {
                analytic::w_in(p)
            };
            Ok(SweepRow {
                value,
                cop: f64::NAN,
                q_c_total: ledger
                    .sum_where(|e| e.counterpart == crate::ledger::Counterpart::ColdReservoir),
                w_in: analytic::w_in(p),
                w_ex,
                status: RowStatus::Regime(regime),
            })
        }
        Regime::Refrigerator => {
            let r = analytic::report(kind, p)?;
            Ok(SweepRow {
                value,
                cop: r.cop,
                q_c_total: r.q_c_total,
                w_in: r.w_in,
                w_ex: r.w_ex,
                status: RowStatus::Regime(regime),
            })
        }
    }
}

/// Evaluates the closed-form report on every grid point, in grid order.
///
/// For `xi` sweeps the monotonicity guarantees are checked: COP never
/// decreases for first-type cycles and `W_ex` never increases for second-type
/// cycles.
pub fn sweep(spec: &SweepSpec) -> Result<Vec<SweepRow>> {
    spec.validate()?;
    let mut rows = Vec::with_capacity(spec.steps);
    for v in spec.grid() {
        let row = match spec.param.apply(&spec.fixed, v) {
            Ok(p) => evaluate(spec.kind, &p, v)?,
            Err(e) => SweepRow::skipped(v, RowStatus::Invalid(e.to_string())),
        };
        rows.push(row);
    }
    if rows.iter().all(|r| {
        !matches!(
            r.status,
            RowStatus::Regime(Regime::Refrigerator | Regime::Boundary)
        )
    }) {
        return Err(Error::EmptySweep);
    }
    if spec.param == SweptParam::Xi {
        check_monotone(spec.kind, &rows)?;
    }
    Ok(rows)
}

fn check_monotone(kind: CycleKind, rows: &[SweepRow]) -> Result<()> {
    let valid: Vec<&SweepRow> = rows.iter().filter(|r| r.status.is_refrigerator()).collect();
    for w in valid.windows(2) {
        let (a, b) = (w[0], w[1]);
        let slack = 1e-12 * a.cop.abs().max(a.w_ex.abs()).max(1.0);
        match kind {
            CycleKind::Mo1 | CycleKind::Ms1 if b.cop < a.cop - slack => {
                return Err(Error::Consistency(format!(
                    "COP decreases between xi={} and xi={}",
                    a.value, b.value
                )));
            }
            CycleKind::Mo2 | CycleKind::Ms2 if b.w_ex > a.w_ex + slack => {
                return Err(Error::Consistency(format!(
                    "W_ex increases between xi={} and xi={}",
                    a.value, b.value
                )));
            }
            _ => {}
        }
    }
    Ok(())
}

/// Interval width at which the bisection stops.
pub const BISECTION_XTOL: f64 = 1e-12;

/// Root of `W_ex(xi)` on `[0, 1]` by bisection, independent of the closed form
/// for `xi_c`. Ignores `p.xi`.
pub fn find_xi_critical_numeric(p: &CycleParams) -> Result<f64> {
    p.require_strict_regime("xi_c (it collapses to 0)")?;
    let f = |xi: f64| p.with_xi(xi).map(|q| analytic::w_ex(&q));
    let (mut lo, mut hi) = (0.0, 1.0);
    let (f_lo, f_hi) = (f(lo)?, f(hi)?);
    if f_lo == 0.0 {
        return Ok(lo);
    }
    if f_lo.signum() == f_hi.signum() {
        return Err(Error::Consistency(format!(
            "W_ex has no sign change on [0, 1] (W_ex(0)={f_lo}, W_ex(1)={f_hi}) for {p}"
        )));
    }
    for _ in 0..200 {
        if hi - lo <= BISECTION_XTOL {
            break;
        }
        let mid = 0.5 * (lo + hi);
        let f_mid = f(mid)?;
        if f_mid == 0.0 {
            return Ok(mid);
        }
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Classifies raw scalars into refrigerator / boundary / non-refrigerator.
pub fn regime_validate(
    omega_c: f64,
    omega_h: f64,
    beta_c: f64,
    beta_h: f64,
) -> Result<RegimeReport> {
    Ok(CycleParams::new(omega_c, omega_h, beta_c, beta_h, 0.0)?.regime())
}

/// Fixed parameters of the figure presets.
pub const FIG_OMEGA_C: f64 = 2.0;
pub const FIG_OMEGA_H: f64 = 10.0;
pub const FIG_BETA_C: f64 = 0.4;
pub const FIG_BETA_H: [f64; 4] = [0.25, 0.19, 0.16, 0.14];
pub const FIG_STYLES: [&str; 4] = [
    "dotted-dashed black",
    "dashed blue",
    "dotted red",
    "solid green",
];
/// Invested work quoted for each preset series, to two decimals.
pub const FIG_NOMINAL_W_IN: [f64; 4] = [1.87, 1.43, 1.13, 0.89];
pub const FIG_STEPS: usize = 101;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FigureQuantity {
    Cop,
    QcTotal,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FigureSeries {
    pub style: &'static str,
    pub beta_h: f64,
    pub nominal_w_in: f64,
    pub w_in: f64,
    pub rows: Vec<SweepRow>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FigureDataset {
    pub name: &'static str,
    pub quantity: FigureQuantity,
    pub series: Vec<FigureSeries>,
}

impl FigureDataset {
    pub fn values(&self, series: usize) -> Vec<f64> {
        self.series[series]
            .rows
            .iter()
            .map(|r| match self.quantity {
                FigureQuantity::Cop => r.cop,
                FigureQuantity::QcTotal => r.q_c_total,
            })
            .collect()
    }
}

fn figure(name: &'static str, quantity: FigureQuantity) -> FigureDataset {
    let series = FIG_BETA_H
        .iter()
        .zip(FIG_STYLES)
        .zip(FIG_NOMINAL_W_IN)
        .map(|((&beta_h, style), nominal_w_in)| {
            let fixed = CycleParams::new(FIG_OMEGA_C, FIG_OMEGA_H, FIG_BETA_C, beta_h, 0.0)
                .expect("preset parameters are valid");
            let spec = SweepSpec {
                kind: CycleKind::Mo1,
                param: SweptParam::Xi,
                from: 0.0,
                to: 1.0,
                steps: FIG_STEPS,
                fixed,
            };
            FigureSeries {
                style,
                beta_h,
                nominal_w_in,
                w_in: analytic::w_in(&fixed),
                rows: sweep(&spec).expect("preset parameters are in the refrigerator regime"),
            }
        })
        .collect();
    FigureDataset {
        name,
        quantity,
        series,
    }
}

/// COP of the first-type modified Otto refrigerator against `xi`.
pub fn fig2_dataset() -> FigureDataset {
    figure("fig2", FigureQuantity::Cop)
}

/// Heat removed from the cold reservoir against `xi`.
pub fn fig3_dataset() -> FigureDataset {
    figure("fig3", FigureQuantity::QcTotal)
}

/// Upper bound on `beta_h omega_h / 2` for sampled parameters. Beyond it
/// `1 - xi_c` drops below double precision and `xi_c` rounds to 1.
pub const RANDOM_HOT_EXPONENT_MAX: f64 = 12.0;

/// A random parameter set in the strict refrigerator regime, with
/// `omega_c in [0.5, 5]`, `omega_h / omega_c in [1.2, 5]`, `beta_c in [0.1, 2]`
/// and `beta_h` strictly inside `(beta_c omega_c / omega_h, beta_max)` where
/// `beta_max = min(beta_c, 2 RANDOM_HOT_EXPONENT_MAX / omega_h)`.
pub fn random_params<R: Rng + ?Sized>(rng: &mut R) -> CycleParams {
    let omega_c = rng.random_range(0.5..5.0);
    let omega_h = omega_c * rng.random_range(1.2..5.0);
    let beta_c: f64 = rng.random_range(0.1..2.0);
    let beta_h_min = beta_c * omega_c / omega_h;
    let beta_h_max = beta_c.min(2.0 * RANDOM_HOT_EXPONENT_MAX / omega_h);
    let beta_h = beta_h_min + rng.random_range(0.05..0.95) * (beta_h_max - beta_h_min);
    let xi = rng.random_range(0.0..=1.0);
    CycleParams::new(omega_c, omega_h, beta_c, beta_h, xi).expect("sampled inside the valid box")
}
