//! Parity-resolved plane-wave basis on the ring, closed-form and quadrature
//! matrix elements of `Δ_a` and `E_a`, and dense truncated Hamiltonians.

mod eigen;
mod elements;

pub use eigen::{jacobi_eigenvalues, symmetric_eigenvalues, JacobiOptions, SymMatrix};
pub use elements::{
    me_delta, me_delta_zero_range, me_epsilon_sep, me_epsilon_zero_range, quadrature_me, MatrixElementSpec,
    OperatorKind,
};

use crate::error::{Error, Result};
use crate::exact_spectrum::{label_sector, Method, Sector, SpectrumResult};
use crate::ring_model::{
    kappa, renormalized_to_bare, BareCoupling, DeltaCoupling, EpsilonCoupling, Parity, Regularization, RingConfig,
};
use crate::scalar::Real;

/// Interaction added to the free ring in a truncated Hamiltonian.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BasisModel<T> {
    /// `v Δ_a`
    Delta(DeltaCoupling<T>),
    /// `c_a E_a` with the bare coupling.
    EpsilonSep(BareCoupling<T>),
}

/// `H[m][n] = κ_n² δ_mn + coupling · ⟨m|V|n⟩` over one parity sector.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedHamiltonian<T> {
    pub sector: Parity,
    pub n_max: usize,
    /// Mode number of each row: `0..=n_max` (even) or `1..=n_max` (odd).
    pub modes: Vec<usize>,
    pub matrix: SymMatrix<T>,
}

/// Assembles the truncated Hamiltonian from the closed-form matrix elements.
pub fn build_hamiltonian<T: Real>(
    model: BasisModel<T>,
    a: Regularization<T>,
    ring: &RingConfig<T>,
    sector: Parity,
    n_max: usize,
) -> Result<TruncatedHamiltonian<T>> {
    if n_max < 2 {
        return Err(Error::invalid("n_max", format!("need at least 2 modes, got {n_max}")));
    }
    let modes: Vec<usize> = (sector.first_mode()..=n_max).collect();
    let mut failure = None;
    let matrix = SymMatrix::from_fn(modes.len(), |i, j| {
        let (m, n) = (modes[i], modes[j]);
        let spec = match MatrixElementSpec::new(m, n, sector, a, *ring) {
            Ok(s) => s,
            Err(e) => {
                failure.get_or_insert(e);
                return T::zero();
            }
        };
        let coupling = match model {
            BasisModel::Delta(v) => v.get() * spec.delta(),
            BasisModel::EpsilonSep(ca) => ca.get() * spec.epsilon(),
        };
        let free = if i == j { kappa(n, ring).powi(2) } else { T::zero() };
        free + coupling
    });
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(TruncatedHamiltonian { sector, n_max, modes, matrix })
}

/// Ascending eigenvalues of a truncated Hamiltonian.
pub fn diagonalize<T: Real>(h: &TruncatedHamiltonian<T>) -> Result<Vec<T>> {
    symmetric_eigenvalues(&h.matrix)
}

/// Smallest basis cutoff that resolves the `sinc(aκ)` form factor through its
/// first decade of decay, `10 L/(2πa)`.
pub fn resolved_cutoff<T: Real>(a: Regularization<T>, ring: &RingConfig<T>) -> usize {
    let x = T::lit(10.0) * ring.circumference() / (T::TAU() * a.get());
    x.ceil().to_usize().unwrap_or(usize::MAX)
}

/// Lowest `count` odd-sector levels of `c_a E_a` with `c_a` the bare coupling
/// belonging to `(c, a)`. The cutoff guidance of [`resolved_cutoff`] is not
/// enforced.
pub fn separable_spectrum<T: Real>(
    c: EpsilonCoupling<T>,
    a: Regularization<T>,
    ring: &RingConfig<T>,
    n_max: usize,
    count: usize,
) -> Result<SpectrumResult<T>> {
    if count == 0 || count > n_max {
        return Err(Error::invalid("count", format!("need 1 ≤ count ≤ n_max, got {count}")));
    }
    let ca = renormalized_to_bare(c, a)?;
    let h = build_hamiltonian(BasisModel::EpsilonSep(ca), a, ring, Parity::Odd, n_max)?;
    let eig = diagonalize(&h)?;
    let accuracy = T::epsilon() * h.matrix.frobenius_norm();
    let states = eig
        .iter()
        .take(count)
        .map(|&e| (e, e.abs().sqrt(), accuracy))
        .collect();
    Ok(SpectrumResult::from_roots(label_sector(Sector::Odd, states, count), Method::Diagonalization))
}
