use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The six refrigeration cycles.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CycleKind {
    /// Four-stroke Otto refrigerator.
    Otto,
    /// Two-stroke swap refrigerator.
    Swap,
    /// Otto with the measurement stroke before cold thermalization.
    Mo1,
    /// Otto with the measurement stroke after cold thermalization.
    Mo2,
    /// Swap followed by measurement of the cold qubit.
    Ms1,
    /// Measurement of the cold qubit followed by swap.
    Ms2,
}

impl CycleKind {
    pub const ALL: [CycleKind; 6] = [
        CycleKind::Otto,
        CycleKind::Swap,
        CycleKind::Mo1,
        CycleKind::Mo2,
        CycleKind::Ms1,
        CycleKind::Ms2,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CycleKind::Otto => "otto",
            CycleKind::Swap => "swap",
            CycleKind::Mo1 => "mo1",
            CycleKind::Mo2 => "mo2",
            CycleKind::Ms1 => "ms1",
            CycleKind::Ms2 => "ms2",
        }
    }

    /// Two-qubit working medium.
    pub fn is_swap(self) -> bool {
        matches!(self, CycleKind::Swap | CycleKind::Ms1 | CycleKind::Ms2)
    }

    /// Measurement inserted after the cold-side contact (engine-supplied work).
    pub fn is_second_type(self) -> bool {
        matches!(self, CycleKind::Mo2 | CycleKind::Ms2)
    }
}

impl FromStr for CycleKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        CycleKind::ALL
            .into_iter()
            .find(|k| k.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::UnknownCycleKind(s.to_string()))
    }
}

impl fmt::Display for CycleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// The five scalars defining a cycle instance.
///
/// Construction only checks that the values are finite, positive and that
/// `xi` lies in `[0, 1]`; the refrigeration regime is classified separately
/// by [`CycleParams::regime`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CycleParams {
    pub omega_c: f64,
    pub omega_h: f64,
    pub beta_c: f64,
    pub beta_h: f64,
    pub xi: f64,
}

impl CycleParams {
    pub fn new(omega_c: f64, omega_h: f64, beta_c: f64, beta_h: f64, xi: f64) -> Result<Self> {
        for (name, v) in [
            ("omega_c", omega_c),
            ("omega_h", omega_h),
            ("beta_c", beta_c),
            ("beta_h", beta_h),
        ] {
            if !v.is_finite() || v <= 0.0 {
                return Err(Error::InvalidParameter(format!(
                    "{name} must be finite and > 0, got {v}"
                )));
            }
        }
        if !(0.0..=1.0).contains(&xi) {
            return Err(Error::InvalidStrength(xi));
        }
        Ok(Self {
            omega_c,
            omega_h,
            beta_c,
            beta_h,
            xi,
        })
    }

    /// Same parameters with a different measurement strength.
    pub fn with_xi(&self, xi: f64) -> Result<Self> {
        Self::new(self.omega_c, self.omega_h, self.beta_c, self.beta_h, xi)
    }

    /// `beta_c * omega_c / 2`.
    pub fn half_cold_gap(&self) -> f64 {
        0.5 * self.beta_c * self.omega_c
    }

    /// `beta_h * omega_h / 2`.
    pub fn half_hot_gap(&self) -> f64 {
        0.5 * self.beta_h * self.omega_h
    }

    /// `Z_c = 2 cosh(beta_c omega_c / 2)`.
    pub fn z_cold(&self) -> f64 {
        2.0 * self.half_cold_gap().cosh()
    }

    /// `Z_h = 2 cosh(beta_h omega_h / 2)`.
    pub fn z_hot(&self) -> f64 {
        2.0 * self.half_hot_gap().cosh()
    }

    pub fn regime(&self) -> RegimeReport {
        RegimeReport::classify(self)
    }

    /// Ok for refrigerator and boundary regimes, otherwise the first violated
    /// inequality.
    pub fn require_ledger_regime(&self) -> Result<Regime> {
        let report = self.regime();
        match report.regime {
            Regime::NonRefrigerator => Err(Error::Regime(report.violated().join(", "))),
            r => Ok(r),
        }
    }

    /// Ok only for the strict refrigerator regime.
    pub fn require_strict_regime(&self, what: &str) -> Result<()> {
        match self.require_ledger_regime()? {
            Regime::Refrigerator => Ok(()),
            _ => Err(Error::DegenerateBoundary(format!("{what} is undefined"))),
        }
    }
}

impl fmt::Display for CycleParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "omega_c={} omega_h={} beta_c={} beta_h={} xi={}",
            self.omega_c, self.omega_h, self.beta_c, self.beta_h, self.xi
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Regime {
    Refrigerator,
    Boundary,
    NonRefrigerator,
}

impl Regime {
    pub fn name(self) -> &'static str {
        match self {
            Regime::Refrigerator => "refrigerator",
            Regime::Boundary => "boundary",
            Regime::NonRefrigerator => "non-refrigerator",
        }
    }
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One named inequality of the refrigeration regime and whether it holds.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RegimeCheck {
    pub inequality: &'static str,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RegimeReport {
    pub regime: Regime,
    pub checks: Vec<RegimeCheck>,
}

/// Relative tolerance for treating `beta_c omega_c` and `beta_h omega_h` as equal.
pub const BOUNDARY_RTOL: f64 = 1e-12;

pub const FREQUENCY_ORDER: &str = "omega_c < omega_h";
pub const TEMPERATURE_ORDER: &str = "beta_h < beta_c";
pub const REFRIGERATION_CONDITION: &str = "beta_c*omega_c < beta_h*omega_h";

impl RegimeReport {
    pub fn classify(p: &CycleParams) -> Self {
        let cold = p.beta_c * p.omega_c;
        let hot = p.beta_h * p.omega_h;
        let on_boundary = (hot - cold).abs() <= BOUNDARY_RTOL * hot.max(cold);
        let checks = vec![
            RegimeCheck {
                inequality: FREQUENCY_ORDER,
                holds: p.omega_c < p.omega_h,
            },
            RegimeCheck {
                inequality: TEMPERATURE_ORDER,
                holds: p.beta_h < p.beta_c,
            },
            RegimeCheck {
                inequality: REFRIGERATION_CONDITION,
                holds: cold < hot && !on_boundary,
            },
        ];
        let ordered = checks[0].holds && checks[1].holds;
        let regime = if ordered && checks[2].holds {
            Regime::Refrigerator
        } else if ordered && on_boundary {
            Regime::Boundary
        } else {
            Regime::NonRefrigerator
        };
        Self { regime, checks }
    }

    pub fn violated(&self) -> Vec<&'static str> {
        self.checks
            .iter()
            .filter(|c| !c.holds)
            .map(|c| c.inequality)
            .collect()
    }
}
