"""Smoke test for the pyqfridge extension module.

Build and install first:
    pip install --no-build-isolation -e crates/python
then run:
    python crates/python/python/smoke_test.py
"""

import pyqfridge as qf


def close(a, b, tol):
    return abs(a - b) <= tol


def main():
    p = qf.CycleParams(2.0, 10.0, 0.4, 0.25, xi=0.5)
    assert repr(p).startswith("CycleParams(omega_c=2")
    assert p.regime()["regime"] == "refrigerator"

    rep = qf.report("mo1", p)
    assert close(rep["cop"], 0.29049357416442756, 1e-12), rep["cop"]
    assert close(rep["w_in"], 1.873338710809152, 1e-12)
    assert [e["label"] for e in rep["ledger"]["entries"]] == ["W1", "Q_h", "W2", "Q(xi)", "Q_c(xi)"]

    for kind in qf.CYCLE_KINDS:
        sim = qf.simulate(kind, p)
        assert sim["discrepancy"]["passed"], (kind, sim["discrepancy"])
        assert abs(sum(e["value"] for e in sim["ledger"])) < 1e-12
        assert sim["closure_residual"] < 1e-12

    xc = qf.xi_critical(p)
    assert close(xc, qf.xi_critical_numeric(p), 1e-10)
    assert close(xc, 0.7553163355805294, 1e-12)

    fig = qf.fig2()
    assert len(fig["series"]) == 4
    assert all(len(s["rows"]) == 101 for s in fig["series"])
    assert close(fig["series"][0]["rows"][0]["cop"], 0.25, 1e-12)
    limits = [s["rows"][-1]["q_c_total"] for s in qf.fig3()["series"]]
    assert max(limits) - min(limits) < 1e-12

    m1, m2 = qf.kraus_operators(0.3)
    assert close(abs(m1[1][1]) ** 2 + abs(m2[0][1]) ** 2, 1.0, 1e-15)
    assert qf.completeness_residual(0.3) < 1e-14
    g, e = qf.measure_thermal(2.0, 0.4, 1.0)
    assert close(g, 1.0, 1e-15) and close(e, 0.0, 1e-15)
    assert qf.post_measurement_ergotropy(10.0, 0.25, 0.7) <= 1e-12

    try:
        qf.report("mo1", qf.CycleParams(2.0, 10.0, 0.4, 0.05))
    except qf.RegimeError as err:
        assert "beta_c*omega_c < beta_h*omega_h" in str(err)
    else:
        raise AssertionError("regime violation not raised")
    try:
        qf.CycleParams(2.0, 10.0, 0.4, 0.25, xi=1.5)
    except ValueError:
        pass
    else:
        raise AssertionError("invalid strength accepted")

    passed, text = qf.verify(seed=7, count=50)
    assert passed and text.endswith("result,PASS\n")
    assert all(c["holds"] for c in qf.regime(2.0, 10.0, 0.4, 0.25)["checks"])
    print("pyqfridge smoke test: ok")


if __name__ == "__main__":
    main()
