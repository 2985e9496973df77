//! Small dense complex matrices for one and two qubits.
//!
//! Basis conventions used everywhere in the crate:
//!
//! * qubit basis `(|0>, |1>)`, with `|0>` the ground state at energy `-omega/2`;
//! * two-qubit basis `(|00>, |01>, |10>, |11>)`, left digit = hot qubit.

use std::fmt;
use std::str::FromStr;

use nalgebra::{Matrix4, SymmetricEigen};
pub use num_complex::Complex64;

use crate::error::{Error, Result};

/// Tolerance for the Hermiticity, trace and positivity checks on states.
pub const STATE_TOL: f64 = 1e-12;

/// Eigenvalues below this are treated as exact zeros in the entropy.
pub const ENTROPY_CLAMP: f64 = 1e-14;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Square complex matrix of dimension 2 or 4, stored row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    entries: Vec<Complex64>,
}

fn check_dim(dim: usize) -> Result<()> {
    if dim == 2 || dim == 4 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "matrix dimension {dim} not supported (2 or 4)"
        )))
    }
}

impl ComplexMatrix {
    pub fn new(dim: usize, entries: Vec<Complex64>) -> Result<Self> {
        check_dim(dim)?;
        if entries.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim,
                found: entries.len(),
            });
        }
        Ok(Self { dim, entries })
    }

    pub fn zeros(dim: usize) -> Result<Self> {
        check_dim(dim)?;
        Ok(Self {
            dim,
            entries: vec![ZERO; dim * dim],
        })
    }

    pub fn identity(dim: usize) -> Result<Self> {
        let mut m = Self::zeros(dim)?;
        for i in 0..dim {
            m.entries[i * dim + i] = ONE;
        }
        Ok(m)
    }

    /// Real diagonal matrix; the dimension is the slice length.
    pub fn from_real_diagonal(diag: &[f64]) -> Result<Self> {
        let mut m = Self::zeros(diag.len())?;
        for (i, &d) in diag.iter().enumerate() {
            m.entries[i * m.dim + i] = Complex64::new(d, 0.0);
        }
        Ok(m)
    }

    pub fn from_real_rows<const N: usize>(rows: [[f64; N]; N]) -> Result<Self> {
        let entries = rows
            .iter()
            .flat_map(|r| r.iter().map(|&x| Complex64::new(x, 0.0)))
            .collect();
        Self::new(N, entries)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.entries[row * self.dim + col]
    }

    pub fn set(&mut self, row: usize, col: usize, value: Complex64) {
        self.entries[row * self.dim + col] = value;
    }

    pub fn adjoint(&self) -> Self {
        let n = self.dim;
        let mut out = self.clone();
        for r in 0..n {
            for c in 0..n {
                out.entries[c * n + r] = self.entries[r * n + c].conj();
            }
        }
        out
    }

    fn same_dim(&self, other: &Self) -> Result<()> {
        if self.dim == other.dim {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected: self.dim,
                found: other.dim,
            })
        }
    }

    pub fn matmul(&self, rhs: &Self) -> Result<Self> {
        self.same_dim(rhs)?;
        let n = self.dim;
        let mut out = vec![ZERO; n * n];
        for r in 0..n {
            for k in 0..n {
                let a = self.entries[r * n + k];
                if a == ZERO {
                    continue;
                }
                for c in 0..n {
                    out[r * n + c] += a * rhs.entries[k * n + c];
                }
            }
        }
        Ok(Self {
            dim: n,
            entries: out,
        })
    }

    pub fn add(&self, rhs: &Self) -> Result<Self> {
        self.same_dim(rhs)?;
        let entries = self
            .entries
            .iter()
            .zip(&rhs.entries)
            .map(|(a, b)| a + b)
            .collect();
        Ok(Self {
            dim: self.dim,
            entries,
        })
    }

    pub fn scale(&self, factor: f64) -> Self {
        Self {
            dim: self.dim,
            entries: self.entries.iter().map(|a| a * factor).collect(),
        }
    }

    /// Kronecker product `self ⊗ rhs`; only 2 ⊗ 2 is representable.
    pub fn kron(&self, rhs: &Self) -> Result<Self> {
        if self.dim != 2 {
            return Err(Error::DimensionMismatch {
                expected: 2,
                found: self.dim,
            });
        }
        if rhs.dim != 2 {
            return Err(Error::DimensionMismatch {
                expected: 2,
                found: rhs.dim,
            });
        }
        let mut out = Self::zeros(4)?;
        for (i, j, k, l) in iproduct4() {
            out.entries[(2 * i + k) * 4 + (2 * j + l)] = self.get(i, j) * rhs.get(k, l);
        }
        Ok(out)
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        self.same_dim(other)?;
        Ok(self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    pub fn hermiticity_residual(&self) -> f64 {
        self.max_abs_diff(&self.adjoint()).unwrap_or(f64::INFINITY)
    }

    /// `max |U†U - I|`.
    pub fn unitarity_residual(&self) -> f64 {
        let id = Self::identity(self.dim).expect("dim already validated");
        self.adjoint()
            .matmul(self)
            .and_then(|p| p.max_abs_diff(&id))
            .unwrap_or(f64::INFINITY)
    }

    /// Real parts of the diagonal.
    pub fn real_diagonal(&self) -> Vec<f64> {
        (0..self.dim).map(|i| self.get(i, i).re).collect()
    }

    /// Largest off-diagonal modulus.
    pub fn max_off_diagonal(&self) -> f64 {
        let n = self.dim;
        (0..n)
            .flat_map(|r| (0..n).filter(move |&c| c != r).map(move |c| (r, c)))
            .map(|(r, c)| self.get(r, c).norm())
            .fold(0.0, f64::max)
    }
}

fn iproduct4() -> impl Iterator<Item = (usize, usize, usize, usize)> {
    (0..16).map(|n| (n >> 3 & 1, n >> 2 & 1, n >> 1 & 1, n & 1))
}

/// Eigenvalues of a Hermitian matrix in ascending order.
///
/// The 2×2 case is closed form; 4×4 goes through an iterative Hermitian solver.
pub fn hermitian_eigenvalues(m: &ComplexMatrix) -> Vec<f64> {
    let mut vals = match m.dim() {
        2 => {
            let a = m.get(0, 0).re;
            let d = m.get(1, 1).re;
            let b = m.get(0, 1);
            let mean = 0.5 * (a + d);
            let half_gap = (0.25 * (a - d) * (a - d) + b.norm_sqr()).sqrt();
            vec![mean - half_gap, mean + half_gap]
        }
        _ => {
            let dense = Matrix4::from_fn(|r, c| m.get(r, c));
            SymmetricEigen::new(dense)
                .eigenvalues
                .iter()
                .copied()
                .collect()
        }
    };
    vals.sort_by(f64::total_cmp);
    vals
}

/// Which factor of a two-qubit product a partial operation refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Subsystem {
    Hot,
    Cold,
}

impl FromStr for Subsystem {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "hot" | "h" => Ok(Subsystem::Hot),
            "cold" | "c" => Ok(Subsystem::Cold),
            _ => Err(Error::UnknownSubsystem(s.to_string())),
        }
    }
}

impl fmt::Display for Subsystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Subsystem::Hot => "hot",
            Subsystem::Cold => "cold",
        })
    }
}

/// A trace-one positive semidefinite Hermitian matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityOperator {
    matrix: ComplexMatrix,
}

impl DensityOperator {
    /// Validates Hermiticity, unit trace and positivity within [`STATE_TOL`].
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        let herm = matrix.hermiticity_residual();
        if herm > STATE_TOL {
            return Err(Error::NotDensityOperator(format!(
                "not Hermitian (residual {herm:e})"
            )));
        }
        let tr = matrix.trace();
        if (tr - ONE).norm() > STATE_TOL {
            return Err(Error::NotDensityOperator(format!("trace {tr} != 1")));
        }
        let lowest = hermitian_eigenvalues(&matrix)[0];
        if lowest < -STATE_TOL {
            return Err(Error::NotDensityOperator(format!(
                "negative eigenvalue {lowest:e}"
            )));
        }
        Ok(Self { matrix })
    }

    /// Diagonal state in the computational basis.
    pub fn from_populations(populations: &[f64]) -> Result<Self> {
        if populations.iter().any(|p| !p.is_finite()) {
            return Err(Error::InvalidParameter("non-finite population".into()));
        }
        Self::new(ComplexMatrix::from_real_diagonal(populations)?)
    }

    /// For results of operations that preserve the state invariants exactly.
    pub(crate) fn from_matrix_unchecked(matrix: ComplexMatrix) -> Self {
        Self { matrix }
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    /// Diagonal in the computational (energy) basis.
    pub fn populations(&self) -> Vec<f64> {
        self.matrix.real_diagonal()
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        hermitian_eigenvalues(&self.matrix)
    }

    /// Re-runs the invariant checks; used by tests on derived states.
    pub fn validate(&self) -> Result<()> {
        Self::new(self.matrix.clone()).map(|_| ())
    }
}

/// Anything with a matrix representation that can be traced against a state.
pub trait Hamiltonian {
    fn matrix(&self) -> ComplexMatrix;
}

/// `H = (omega / 2) sigma_z`, realised as `diag(-omega/2, +omega/2)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QubitHamiltonian {
    omega: f64,
}

impl QubitHamiltonian {
    pub fn new(omega: f64) -> Result<Self> {
        if !omega.is_finite() || omega <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "transition frequency must be finite and > 0, got {omega}"
            )));
        }
        Ok(Self { omega })
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    /// `[E_ground, E_excited]`.
    pub fn energies(&self) -> [f64; 2] {
        [-0.5 * self.omega, 0.5 * self.omega]
    }
}

impl Hamiltonian for QubitHamiltonian {
    fn matrix(&self) -> ComplexMatrix {
        ComplexMatrix::from_real_diagonal(&self.energies()).expect("dim 2")
    }
}

/// Non-interacting `H_hot ⊗ I + I ⊗ H_cold`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PairHamiltonian {
    pub hot: QubitHamiltonian,
    pub cold: QubitHamiltonian,
}

impl Hamiltonian for PairHamiltonian {
    fn matrix(&self) -> ComplexMatrix {
        let [h0, h1] = self.hot.energies();
        let [c0, c1] = self.cold.energies();
        ComplexMatrix::from_real_diagonal(&[h0 + c0, h0 + c1, h1 + c0, h1 + c1]).expect("dim 4")
    }
}

/// Thermal state `exp(-beta H) / Z` of a qubit.
pub fn gibbs_state(h: &QubitHamiltonian, beta: f64) -> Result<DensityOperator> {
    if !beta.is_finite() || beta < 0.0 {
        return Err(Error::InvalidParameter(format!(
            "inverse temperature must be finite and >= 0, got {beta}"
        )));
    }
    let [p0, p1] = gibbs_populations(h.omega(), beta);
    Ok(DensityOperator::from_matrix_unchecked(
        ComplexMatrix::from_real_diagonal(&[p0, p1])?,
    ))
}

/// `[p_ground, p_excited]`, written to stay finite for large `beta * omega`.
pub(crate) fn gibbs_populations(omega: f64, beta: f64) -> [f64; 2] {
    let x = beta * omega;
    [1.0 / (1.0 + (-x).exp()), 1.0 / (1.0 + x.exp())]
}

/// `Tr[H rho]`; the imaginary residue must vanish within [`STATE_TOL`].
pub fn mean_energy<H: Hamiltonian + ?Sized>(h: &H, rho: &DensityOperator) -> Result<f64> {
    let hm = h.matrix();
    if hm.dim() != rho.dim() {
        return Err(Error::DimensionMismatch {
            expected: hm.dim(),
            found: rho.dim(),
        });
    }
    let e = hm.matmul(rho.matrix())?.trace();
    if e.im.abs() > STATE_TOL {
        return Err(Error::Consistency(format!(
            "mean energy has imaginary part {:e}",
            e.im
        )));
    }
    Ok(e.re)
}

/// `hot ⊗ cold`.
pub fn tensor(hot: &DensityOperator, cold: &DensityOperator) -> Result<DensityOperator> {
    Ok(DensityOperator::from_matrix_unchecked(
        hot.matrix().kron(cold.matrix())?,
    ))
}

/// Reduced state of the `keep` factor of a two-qubit state.
pub fn partial_trace(rho: &DensityOperator, keep: Subsystem) -> Result<DensityOperator> {
    if rho.dim() != 4 {
        return Err(Error::DimensionMismatch {
            expected: 4,
            found: rho.dim(),
        });
    }
    let m = rho.matrix();
    let mut out = ComplexMatrix::zeros(2)?;
    for a in 0..2 {
        for b in 0..2 {
            let v: Complex64 = (0..2)
                .map(|t| match keep {
                    Subsystem::Hot => m.get(2 * a + t, 2 * b + t),
                    Subsystem::Cold => m.get(2 * t + a, 2 * t + b),
                })
                .sum();
            out.set(a, b, v);
        }
    }
    Ok(DensityOperator::from_matrix_unchecked(out))
}

/// `U rho U†`, rejecting `u` whose unitarity residual exceeds [`STATE_TOL`].
pub fn apply_unitary(u: &ComplexMatrix, rho: &DensityOperator) -> Result<DensityOperator> {
    if u.dim() != rho.dim() {
        return Err(Error::DimensionMismatch {
            expected: rho.dim(),
            found: u.dim(),
        });
    }
    let residual = u.unitarity_residual();
    if residual > STATE_TOL {
        return Err(Error::NotUnitary(residual));
    }
    let out = u.matmul(rho.matrix())?.matmul(&u.adjoint())?;
    Ok(DensityOperator::from_matrix_unchecked(out))
}

/// `|11><11| + |10><01| + |01><10| + |00><00|`.
pub fn swap_unitary() -> ComplexMatrix {
    ComplexMatrix::from_real_rows([
        [1.0, 0.0, 0.0, 0.0],
        [0.0, 0.0, 1.0, 0.0],
        [0.0, 1.0, 0.0, 0.0],
        [0.0, 0.0, 0.0, 1.0],
    ])
    .expect("4x4")
}

/// `-Σ λ ln λ` in nats.
pub fn von_neumann_entropy(rho: &DensityOperator) -> f64 {
    rho.eigenvalues()
        .into_iter()
        .filter(|&l| l > ENTROPY_CLAMP)
        .map(|l| -l * l.ln())
        .sum()
}
