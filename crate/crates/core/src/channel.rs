//! Non-selective generalized measurement with adjustable strength.
//!
//! `M1 = |0><0| + sqrt(1 - xi) |1><1|`, `M2 = sqrt(xi) |0><1|`. At `xi = 0`
//! the channel is the identity; at `xi = 1` it resets the qubit to `|0>`.

use crate::error::{Error, Result};
use crate::qstate::{mean_energy, ComplexMatrix, DensityOperator, QubitHamiltonian, Subsystem};

/// Ergotropy at or below this counts as passive.
pub const PASSIVITY_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MeasurementChannel {
    xi: f64,
}

impl MeasurementChannel {
    /// Strict: anything outside `[0, 1]`, NaN included, is rejected.
    pub fn new(xi: f64) -> Result<Self> {
        if (0.0..=1.0).contains(&xi) {
            Ok(Self { xi })
        } else {
            Err(Error::InvalidStrength(xi))
        }
    }

    pub fn xi(&self) -> f64 {
        self.xi
    }

    pub fn kraus_operators(&self) -> [ComplexMatrix; 2] {
        let m1 = ComplexMatrix::from_real_rows([[1.0, 0.0], [0.0, (1.0 - self.xi).sqrt()]]);
        let m2 = ComplexMatrix::from_real_rows([[0.0, self.xi.sqrt()], [0.0, 0.0]]);
        [m1.expect("2x2"), m2.expect("2x2")]
    }

    /// `E_i = M_i† M_i`.
    pub fn povm_elements(&self) -> [ComplexMatrix; 2] {
        self.kraus_operators()
            .map(|m| m.adjoint().matmul(&m).expect("matching dims"))
    }

    /// `max |Σ M_i† M_i - I|`.
    pub fn completeness_residual(&self) -> f64 {
        let [e1, e2] = self.povm_elements();
        e1.add(&e2)
            .and_then(|s| s.max_abs_diff(&ComplexMatrix::identity(2)?))
            .expect("2x2")
    }

    /// `Σ M_i rho M_i†` on a single qubit.
    pub fn apply(&self, rho: &DensityOperator) -> Result<DensityOperator> {
        if rho.dim() != 2 {
            return Err(Error::DimensionMismatch {
                expected: 2,
                found: rho.dim(),
            });
        }
        let mut acc = ComplexMatrix::zeros(2)?;
        for m in self.kraus_operators() {
            acc = acc.add(&m.matmul(rho.matrix())?.matmul(&m.adjoint())?)?;
        }
        Ok(DensityOperator::from_matrix_unchecked(acc))
    }

    /// The channel on one factor of a two-qubit state: `E ⊗ I` for the hot
    /// qubit, `I ⊗ E` for the cold one.
    pub fn apply_on_subsystem(
        &self,
        rho: &DensityOperator,
        target: Subsystem,
    ) -> Result<DensityOperator> {
        if rho.dim() != 4 {
            return Err(Error::DimensionMismatch {
                expected: 4,
                found: rho.dim(),
            });
        }
        let id = ComplexMatrix::identity(2)?;
        let mut acc = ComplexMatrix::zeros(4)?;
        for m in self.kraus_operators() {
            let lifted = match target {
                Subsystem::Hot => m.kron(&id)?,
                Subsystem::Cold => id.kron(&m)?,
            };
            acc = acc.add(&lifted.matmul(rho.matrix())?.matmul(&lifted.adjoint())?)?;
        }
        Ok(DensityOperator::from_matrix_unchecked(acc))
    }
}

/// Maximum work extractable from a qubit by a unitary.
///
/// The passive counterpart puts the larger eigenvalue on the ground level, so
/// `W = Tr[H rho] - (λ_max E_0 + λ_min E_1)`.
pub fn ergotropy(rho: &DensityOperator, h: &QubitHamiltonian) -> Result<f64> {
    if rho.dim() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            found: rho.dim(),
        });
    }
    let energy = mean_energy(h, rho)?;
    let ev = rho.eigenvalues();
    let [e0, e1] = h.energies();
    let passive = ev[1] * e0 + ev[0] * e1;
    Ok((energy - passive).max(0.0))
}

pub fn is_passive(rho: &DensityOperator, h: &QubitHamiltonian) -> Result<bool> {
    Ok(ergotropy(rho, h)? <= PASSIVITY_TOL)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qstate::{gibbs_state, tensor};

    fn ch(xi: f64) -> MeasurementChannel {
        MeasurementChannel::new(xi).unwrap()
    }

    fn diag(p: &[f64]) -> DensityOperator {
        DensityOperator::from_populations(p).unwrap()
    }

    #[test]
    fn kraus_at_limits() {
        let [m1, m2] = ch(0.0).kraus_operators();
        assert_eq!(m1, ComplexMatrix::identity(2).unwrap());
        assert_eq!(m2, ComplexMatrix::zeros(2).unwrap());

        let [m1, m2] = ch(1.0).kraus_operators();
        assert_eq!(m1.real_diagonal(), vec![1.0, 0.0]);
        assert_eq!(m2.get(0, 1).re, 1.0);
        assert_eq!(m2.real_diagonal(), vec![0.0, 0.0]);
    }

    #[test]
    fn kraus_half_strength() {
        let [m1, m2] = ch(0.5).kraus_operators();
        assert!((m1.get(1, 1).re - 0.5f64.sqrt()).abs() < 1e-15);
        assert!((m2.get(0, 1).re - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15);
        assert_eq!(m2.get(1, 0).norm(), 0.0);
    }

    #[test]
    fn povm_elements_match_closed_form() {
        let [e1, e2] = ch(0.3).povm_elements();
        let d = e1.real_diagonal();
        assert_eq!(d[0], 1.0);
        assert!((d[1] - 0.7).abs() < 1e-15);
        assert!((e2.get(1, 1).re - 0.3).abs() < 1e-15);
        assert!(ch(0.3).completeness_residual() < 1e-14);
    }

    #[test]
    fn strength_validation_is_strict() {
        assert!(matches!(
            MeasurementChannel::new(1.0 + 1e-9),
            Err(Error::InvalidStrength(_))
        ));
        assert!(MeasurementChannel::new(-1e-300).is_err());
        assert!(MeasurementChannel::new(f64::NAN).is_err());
    }

    #[test]
    fn apply_identity_and_projective() {
        let rho = diag(&[0.8, 0.2]);
        assert_eq!(ch(0.0).apply(&rho).unwrap(), rho);
        assert_eq!(ch(1.0).apply(&rho).unwrap().populations(), vec![1.0, 0.0]);
    }

    #[test]
    fn apply_half_strength_on_hot_gibbs() {
        let h = QubitHamiltonian::new(10.0).unwrap();
        let rho = gibbs_state(&h, 0.25).unwrap();
        let out = ch(0.5).apply(&rho).unwrap();
        // p1 = e^{-1.25} / (2 cosh 1.25)
        let p1 = (-1.25f64).exp() / (2.0 * 1.25f64.cosh());
        assert!((p1 - 0.075_858_180_021_243_56).abs() < 1e-12);
        let p = out.populations();
        assert!((p[0] - (1.0 - p1 + 0.5 * p1)).abs() < 1e-15);
        assert!((p[1] - 0.5 * p1).abs() < 1e-15);
        assert!(out.matrix().max_off_diagonal() == 0.0);
    }

    #[test]
    fn apply_rejects_pair_state() {
        let pair = tensor(&diag(&[1.0, 0.0]), &diag(&[1.0, 0.0])).unwrap();
        assert!(ch(0.5).apply(&pair).is_err());
        assert!(ch(0.5)
            .apply_on_subsystem(&diag(&[1.0, 0.0]), Subsystem::Hot)
            .is_err());
    }

    #[test]
    fn subsystem_application_factorizes() {
        let a = diag(&[0.9, 0.1]);
        let b = diag(&[0.6, 0.4]);
        let ab = tensor(&a, &b).unwrap();
        let c = ch(0.37);
        let got = c.apply_on_subsystem(&ab, Subsystem::Cold).unwrap();
        let want = tensor(&a, &c.apply(&b).unwrap()).unwrap();
        assert!(got.matrix().max_abs_diff(want.matrix()).unwrap() < 1e-15);
        let got = c.apply_on_subsystem(&ab, Subsystem::Hot).unwrap();
        let want = tensor(&c.apply(&a).unwrap(), &b).unwrap();
        assert!(got.matrix().max_abs_diff(want.matrix()).unwrap() < 1e-15);

        assert_eq!(ch(0.0).apply_on_subsystem(&ab, Subsystem::Hot).unwrap(), ab);

        let got = ch(1.0).apply_on_subsystem(&ab, Subsystem::Cold).unwrap();
        let want = tensor(&a, &diag(&[1.0, 0.0])).unwrap();
        assert!(got.matrix().max_abs_diff(want.matrix()).unwrap() < 1e-15);
    }

    #[test]
    fn ergotropy_examples() {
        let h = QubitHamiltonian::new(2.0).unwrap();
        let thermal = gibbs_state(&h, 0.7).unwrap();
        assert_eq!(ergotropy(&thermal, &h).unwrap(), 0.0);
        assert!(is_passive(&thermal, &h).unwrap());

        let inverted = diag(&[0.3, 0.7]);
        assert!((ergotropy(&inverted, &h).unwrap() - 0.8).abs() < 1e-15);
        assert!(!is_passive(&inverted, &h).unwrap());
    }

    #[test]
    fn measured_hot_state_is_passive_at_cold_frequency() {
        let hot = gibbs_state(&QubitHamiltonian::new(10.0).unwrap(), 0.25).unwrap();
        let cold_h = QubitHamiltonian::new(2.0).unwrap();
        for xi in [0.0, 0.25, 0.5, 0.75, 1.0] {
            let out = ch(xi).apply(&hot).unwrap();
            assert!(is_passive(&out, &cold_h).unwrap(), "xi = {xi}");
        }
    }
}
