//! Randomized cross-check of the simulator against the closed forms.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::analysis::{find_xi_critical_numeric, random_params};
use crate::analytic::{self, labels};
use crate::channel::{ergotropy, MeasurementChannel};
use crate::error::Result;
use crate::ledger::{sig17, StrokeLedger};
use crate::params::{CycleKind, CycleParams};
use crate::qstate::{gibbs_state, QubitHamiltonian};
use crate::simulate::{compare_ledgers, run_cycle, STRUCTURAL_TOL};

/// Tolerance for scalar-by-scalar swap/Otto equivalence.
pub const EQUIVALENCE_TOL: f64 = 1e-13;
/// Tolerance for the induced-engine efficiency.
pub const EFFICIENCY_TOL: f64 = 1e-13;
/// Tolerance for POVM completeness.
pub const COMPLETENESS_TOL: f64 = 1e-14;

/// Deliberate corruption of one closed-form entry, to prove the harness bites.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Fault {
    None,
    /// Shifts the first-type measurement heat `Q(xi)` of `mo1` by `1e-8`.
    Mo1MeasurementHeat,
}

/// Worst case of one tracked quantity across the sweep.
#[derive(Clone, Debug, PartialEq)]
pub struct Tracked {
    pub max: f64,
    pub tol: f64,
    /// Label of the entry that produced `max`, where meaningful.
    pub worst: String,
    /// First parameter set that exceeded `tol`, with its sample index.
    pub first_failure: Option<(usize, CycleParams)>,
}

impl Tracked {
    fn new(tol: f64) -> Self {
        Self {
            max: 0.0,
            tol,
            worst: String::new(),
            first_failure: None,
        }
    }

    fn record(&mut self, value: f64, label: &str, index: usize, p: &CycleParams) {
        let value = if value.is_nan() { f64::INFINITY } else { value };
        if value > self.max {
            self.max = value;
            self.worst = label.to_string();
        }
        if value > self.tol && self.first_failure.is_none() {
            self.first_failure = Some((index, *p));
        }
    }

    pub fn passed(&self) -> bool {
        self.first_failure.is_none()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CycleStats {
    pub kind: CycleKind,
    pub oracle: Tracked,
    pub first_law_analytic: Tracked,
    pub first_law_simulated: Tracked,
    pub closure: Tracked,
}

impl CycleStats {
    fn passed(&self) -> bool {
        self.oracle.passed()
            && self.first_law_analytic.passed()
            && self.first_law_simulated.passed()
            && self.closure.passed()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct VerifyReport {
    pub seed: u64,
    pub count: usize,
    pub tol: f64,
    pub cycles: Vec<CycleStats>,
    /// Named invariant checks in a fixed order.
    pub checks: Vec<(&'static str, Tracked)>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.cycles.iter().all(CycleStats::passed) && self.checks.iter().all(|(_, t)| t.passed())
    }

    /// Deterministic plain-text summary.
    pub fn render(&self) -> String {
        let mut out = format!(
            "# qfridge {} verify seed={} count={} tol={}\n",
            env!("CARGO_PKG_VERSION"),
            self.seed,
            self.count,
            sig17(self.tol)
        );
        out.push_str(
            "cycle,max_oracle_discrepancy,worst_entry,max_first_law_analytic,max_first_law_simulated,max_closure,status\n",
        );
        for c in &self.cycles {
            out.push_str(&format!(
                "{},{},{},{},{},{},{}\n",
                c.kind,
                sig17(c.oracle.max),
                if c.oracle.worst.is_empty() {
                    "-"
                } else {
                    &c.oracle.worst
                },
                sig17(c.first_law_analytic.max),
                sig17(c.first_law_simulated.max),
                sig17(c.closure.max),
                status(c.passed())
            ));
        }
        out.push_str("check,max_residual,tolerance,status\n");
        for (name, t) in &self.checks {
            out.push_str(&format!(
                "{},{},{},{}\n",
                name,
                sig17(t.max),
                sig17(t.tol),
                status(t.passed())
            ));
        }
        for (name, t) in self.all_tracked() {
            if let Some((i, p)) = t.first_failure {
                out.push_str(&format!(
                    "# failure {name}: sample={i} params: {}\n",
                    reproduce(&p)
                ));
            }
        }
        out.push_str(&format!(
            "result,{}\n",
            if self.passed() { "PASS" } else { "FAIL" }
        ));
        out
    }

    fn all_tracked(&self) -> Vec<(String, &Tracked)> {
        let mut v = Vec::new();
        for c in &self.cycles {
            v.push((format!("{}.oracle", c.kind), &c.oracle));
            v.push((
                format!("{}.first_law_analytic", c.kind),
                &c.first_law_analytic,
            ));
            v.push((
                format!("{}.first_law_simulated", c.kind),
                &c.first_law_simulated,
            ));
            v.push((format!("{}.closure", c.kind), &c.closure));
        }
        for (name, t) in &self.checks {
            v.push((name.to_string(), t));
        }
        v
    }
}

fn status(ok: bool) -> &'static str {
    if ok {
        "pass"
    } else {
        "FAIL"
    }
}

/// Flags reproducing a parameter set with the `cycle` subcommand.
pub fn reproduce(p: &CycleParams) -> String {
    format!(
        "--omega-c {} --omega-h {} --beta-c {} --beta-h {} --xi {}",
        p.omega_c, p.omega_h, p.beta_c, p.beta_h, p.xi
    )
}

fn with_fault(kind: CycleKind, mut ledger: StrokeLedger, fault: Fault) -> StrokeLedger {
    if fault == Fault::Mo1MeasurementHeat && kind == CycleKind::Mo1 {
        for e in &mut ledger.entries {
            if e.label == labels::Q_XI {
                e.value += 1e-8;
            }
        }
    }
    ledger
}

fn entry(ledger: &StrokeLedger, label: &str) -> f64 {
    ledger.get(label).unwrap_or(f64::NAN)
}

/// Runs `count` seeded parameter sets through all six cycles and the
/// invariant suite.
pub fn run_verification(seed: u64, count: usize, tol: f64, fault: Fault) -> Result<VerifyReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cycles: Vec<CycleStats> = CycleKind::ALL
        .iter()
        .map(|&kind| CycleStats {
            kind,
            oracle: Tracked::new(tol),
            first_law_analytic: Tracked::new(STRUCTURAL_TOL),
            first_law_simulated: Tracked::new(STRUCTURAL_TOL),
            closure: Tracked::new(STRUCTURAL_TOL),
        })
        .collect();
    let mut ms1_vs_mo1 = Tracked::new(EQUIVALENCE_TOL);
    let mut ms2_vs_mo2 = Tracked::new(EQUIVALENCE_TOL);
    let mut mo2_cop_otto = Tracked::new(EQUIVALENCE_TOL);
    let mut xi_c_agreement = Tracked::new(tol);
    let mut xi_c_interval = Tracked::new(0.0);
    let mut w_ex_at_xi_c = Tracked::new(STRUCTURAL_TOL);
    let mut engine_identity = Tracked::new(STRUCTURAL_TOL);
    let mut engine_efficiency = Tracked::new(EFFICIENCY_TOL);
    let mut ergotropy_check = Tracked::new(STRUCTURAL_TOL);
    let mut completeness = Tracked::new(COMPLETENESS_TOL);

    for i in 0..count {
        let p = random_params(&mut rng);

        let mut closed = Vec::with_capacity(CycleKind::ALL.len());
        for stats in cycles.iter_mut() {
            let kind = stats.kind;
            let report = analytic::report(kind, &p)?;
            let trace = run_cycle(kind, &p)?;
            let reference = with_fault(kind, report.ledger.clone(), fault);
            let d = compare_ledgers(&trace.ledger, &reference, tol)?;
            stats.oracle.record(d.max_abs, &d.worst_label, i, &p);
            stats
                .first_law_analytic
                .record(report.ledger.total().abs(), "", i, &p);
            stats
                .first_law_simulated
                .record(trace.ledger.total().abs(), "", i, &p);
            stats.closure.record(trace.closure_residual(), "", i, &p);
            closed.push(report);
        }
        let by_kind = |k: CycleKind| &closed[CycleKind::ALL.iter().position(|&x| x == k).unwrap()];
        let (mo1, ms1) = (by_kind(CycleKind::Mo1), by_kind(CycleKind::Ms1));
        let (mo2, ms2) = (by_kind(CycleKind::Mo2), by_kind(CycleKind::Ms2));

        use labels::*;
        let pairs_1 = [
            ("W_in", mo1.w_in, entry(&ms1.ledger, W_IN)),
            (
                "W_in(strokes)",
                entry(&mo1.ledger, W1) + entry(&mo1.ledger, W2),
                entry(&ms1.ledger, W_IN),
            ),
            (Q_XI, entry(&mo1.ledger, Q_XI), entry(&ms1.ledger, Q_XI)),
            (Q_H, entry(&mo1.ledger, Q_H), entry(&ms1.ledger, Q_H)),
            (
                Q_C_XI,
                entry(&mo1.ledger, Q_C_XI),
                entry(&ms1.ledger, Q_C_XI),
            ),
            ("COP", mo1.cop, ms1.cop),
        ];
        for (label, a, b) in pairs_1 {
            ms1_vs_mo1.record((a - b).abs(), label, i, &p);
        }
        let pairs_2 = [
            (Q_XI, entry(&mo2.ledger, Q_XI), entry(&ms2.ledger, Q_XI)),
            (W_EX_XI, mo2.w_ex, entry(&ms2.ledger, W_EX_XI)),
            (
                Q_H_XI,
                entry(&mo2.ledger, Q_H_XI),
                entry(&ms2.ledger, Q_H_XI),
            ),
            (Q_C, entry(&mo2.ledger, Q_C), entry(&ms2.ledger, Q_C)),
            ("COP", mo2.cop, ms2.cop),
        ];
        for (label, a, b) in pairs_2 {
            ms2_vs_mo2.record((a - b).abs(), label, i, &p);
        }
        let otto = by_kind(CycleKind::Otto);
        mo2_cop_otto.record((mo2.cop - otto.cop).abs(), "COP", i, &p);

        let xc = analytic::xi_critical(&p)?;
        let xn = find_xi_critical_numeric(&p)?;
        xi_c_agreement.record((xc - xn).abs(), "xi_c", i, &p);
        let outside = if xc > 0.0 && xc < 1.0 { 0.0 } else { 1.0 };
        xi_c_interval.record(outside, "xi_c", i, &p);
        w_ex_at_xi_c.record(analytic::w_ex(&p.with_xi(xc)?).abs(), "W_ex(xi_c)", i, &p);

        if p.xi > 0.0 {
            let w = analytic::w_meas(&p);
            let q = analytic::q_meas_second(&p);
            let qp = analytic::q_prime(&p);
            engine_identity.record((w + qp + q).abs(), "W+Q'+Q", i, &p);
            let eff = analytic::mo2_engine_efficiency(&p)?;
            engine_efficiency.record((eff.ledger_ratio - eff.symbolic).abs(), "-W/Q'", i, &p);
        }

        let h_c = QubitHamiltonian::new(p.omega_c)?;
        let h_h = QubitHamiltonian::new(p.omega_h)?;
        let ch = MeasurementChannel::new(p.xi)?;
        let measured_hot = ch.apply(&gibbs_state(&h_h, p.beta_h)?)?;
        let measured_cold = ch.apply(&gibbs_state(&h_c, p.beta_c)?)?;
        ergotropy_check.record(ergotropy(&measured_hot, &h_c)?, "E(rho_h)", i, &p);
        ergotropy_check.record(ergotropy(&measured_cold, &h_c)?, "E(rho_c)", i, &p);
    }

    let grid_params = CycleParams::new(1.0, 2.0, 1.0, 0.75, 0.0)?;
    for k in 0..=100 {
        let xi = k as f64 / 100.0;
        let r = MeasurementChannel::new(xi)?.completeness_residual();
        completeness.record(r, "sum M'M - I", k, &grid_params.with_xi(xi)?);
    }

    Ok(VerifyReport {
        seed,
        count,
        tol,
        cycles,
        checks: vec![
            ("ms1_equals_mo1", ms1_vs_mo1),
            ("ms2_equals_mo2", ms2_vs_mo2),
            ("second_type_cop_equals_otto", mo2_cop_otto),
            ("xi_critical_bisection", xi_c_agreement),
            ("xi_critical_outside_unit_interval", xi_c_interval),
            ("w_ex_at_xi_critical", w_ex_at_xi_c),
            ("engine_work_identity", engine_identity),
            ("engine_efficiency", engine_efficiency),
            ("post_measurement_ergotropy", ergotropy_check),
            ("povm_completeness", completeness),
        ],
    })
}
