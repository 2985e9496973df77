//! Ledgers rebuilt from excited-state populations alone, with no matrices and
//! no library formulas, compared entry by entry against both the closed-form
//! ledgers and the density-matrix simulator.

use qfridge::analytic;
use qfridge::simulate::run_cycle;
use qfridge::{CycleKind, CycleParams};

/// Excited population of a thermal qubit.
fn excited(omega: f64, beta: f64) -> f64 {
    1.0 / (1.0 + (beta * omega).exp())
}

/// Expected `(label, value)` sequence for `kind`.
fn population_ledger(kind: CycleKind, p: &CycleParams) -> Vec<(&'static str, f64)> {
    let (wc, wh, xi) = (p.omega_c, p.omega_h, p.xi);
    let ec = excited(wc, p.beta_c);
    let eh = excited(wh, p.beta_h);
    // Energy change of a ramp with frozen excited population `e`.
    let ramp = |from: f64, to: f64, e: f64| (to - from) * (e - 0.5);
    match kind {
        CycleKind::Otto => vec![
            ("W1", ramp(wc, wh, ec)),
            ("Q_h", wh * (eh - ec)),
            ("W2", ramp(wh, wc, eh)),
            ("Q_c", wc * (ec - eh)),
        ],
        CycleKind::Mo1 => {
            let after = (1.0 - xi) * eh;
            vec![
                ("W1", ramp(wc, wh, ec)),
                ("Q_h", wh * (eh - ec)),
                ("W2", ramp(wh, wc, eh)),
                ("Q(xi)", wc * (after - eh)),
                ("Q_c(xi)", wc * (ec - after)),
            ]
        }
        CycleKind::Mo2 => {
            let after = (1.0 - xi) * ec;
            vec![
                ("Q(xi)", wc * (after - ec)),
                ("W1+W(xi)", ramp(wc, wh, after)),
                ("Q_h(xi)", wh * (eh - after)),
                ("W2", ramp(wh, wc, eh)),
                ("Q_c", wc * (ec - eh)),
            ]
        }
        CycleKind::Swap => vec![
            ("W_in", (wh - wc) * (ec - eh)),
            ("Q_h", wh * (eh - ec)),
            ("Q_c", wc * (ec - eh)),
        ],
        CycleKind::Ms1 => {
            let after = (1.0 - xi) * eh;
            vec![
                ("W_in", (wh - wc) * (ec - eh)),
                ("Q(xi)", wc * (after - eh)),
                ("Q_h", wh * (eh - ec)),
                ("Q_c(xi)", wc * (ec - after)),
            ]
        }
        CycleKind::Ms2 => {
            let after = (1.0 - xi) * ec;
            vec![
                ("Q(xi)", wc * (after - ec)),
                ("W_ex(xi)", (wh - wc) * (after - eh)),
                ("Q_h(xi)", wh * (eh - after)),
                ("Q_c", wc * (ec - eh)),
            ]
        }
    }
}

fn grid() -> Vec<CycleParams> {
    let mut out = Vec::new();
    for &(wc, wh, bc, bh) in &[
        (2.0, 10.0, 0.4, 0.25),
        (2.0, 10.0, 0.4, 0.14),
        (1.0, 1.5, 1.0, 0.9),
        (0.5, 2.5, 2.0, 0.5),
        (3.0, 4.0, 0.2, 0.16),
        (4.5, 20.0, 1.5, 0.4),
    ] {
        for xi in [0.0, 0.1, 0.5, 0.9, 1.0] {
            out.push(CycleParams::new(wc, wh, bc, bh, xi).unwrap());
        }
    }
    out
}

#[test]
fn closed_form_and_simulator_match_population_model() {
    for p in grid() {
        for kind in CycleKind::ALL {
            let expected = population_ledger(kind, &p);
            let closed: Vec<_> = analytic::ledger(kind, &p)
                .unwrap()
                .iter()
                .cloned()
                .collect();
            let simulated: Vec<_> = run_cycle(kind, &p)
                .unwrap()
                .ledger
                .iter()
                .cloned()
                .collect();
            assert_eq!(closed.len(), expected.len(), "{kind}");
            assert_eq!(simulated.len(), expected.len(), "{kind}");
            for ((e, c), s) in expected.iter().zip(&closed).zip(&simulated) {
                assert_eq!(c.label, e.0, "{kind}");
                assert_eq!(s.label, e.0, "{kind}");
                assert!(
                    (c.value - e.1).abs() <= 1e-12,
                    "{kind} {} closed {} vs {}",
                    e.0,
                    c.value,
                    e.1
                );
                assert!(
                    (s.value - e.1).abs() <= 1e-12,
                    "{kind} {} simulated {} vs {}",
                    e.0,
                    s.value,
                    e.1
                );
            }
        }
    }
}

#[test]
fn population_model_cops() {
    for p in grid() {
        let l = population_ledger(CycleKind::Mo1, &p);
        let cop = l[4].1 / (l[0].1 + l[2].1);
        let closed = analytic::mo1_cop(&p).unwrap();
        assert!(
            (cop - closed).abs() <= 1e-12 * closed,
            "{p}: {cop} vs {closed}"
        );

        let l = population_ledger(CycleKind::Otto, &p);
        let otto = l[3].1 / (l[0].1 + l[2].1);
        let second = analytic::mo2_cop(&p).unwrap();
        assert!((otto - second).abs() <= 1e-12 * otto);
        assert!((otto - p.omega_c / (p.omega_h - p.omega_c)).abs() <= 1e-12 * otto);
    }
}

#[test]
fn xi_critical_zeroes_population_external_work() {
    for p in grid() {
        let xc = analytic::xi_critical(&p).unwrap();
        let at = p.with_xi(xc).unwrap();
        let w_ex = population_ledger(CycleKind::Ms2, &at)[1].1;
        assert!(w_ex.abs() <= 1e-12, "{p}: W_ex(xi_c) = {w_ex}");
    }
}

// Frozen values from an independent arbitrary-precision evaluation at
// omega_c=2, omega_h=10, beta_c=0.4, beta_h=0.25.
#[test]
fn frozen_reference_values() {
    let p = CycleParams::new(2.0, 10.0, 0.4, 0.25, 0.5).unwrap();
    let close = |a: f64, b: f64| (a - b).abs() <= 1e-10;
    assert!(close(analytic::w_in(&p), 1.873_338_710_809_152_2));
    assert!(close(
        analytic::mo1_cop(&p).unwrap(),
        0.290_493_574_164_427_56
    ));
    assert!(close(
        analytic::mo1_cop(&p.with_xi(1.0).unwrap()).unwrap(),
        0.330_987_148_328_855_2
    ));
    assert!(close(
        analytic::xi_critical(&p).unwrap(),
        0.755_316_335_580_529_4
    ));
    assert!(close(
        analytic::q_meas_second(&p),
        -0.310_025_518_872_387_55
    ));
    assert!(close(analytic::w_meas(&p), -1.240_102_075_489_550_2));
    assert!(close(analytic::q_prime(&p), 1.550_127_594_361_937_7));
    let fig3_limit = analytic::ledger(CycleKind::Mo1, &p.with_xi(1.0).unwrap())
        .unwrap()
        .get("Q_c(xi)")
        .unwrap();
    assert!(close(fig3_limit, 0.620_051_037_744_775_1));
}
