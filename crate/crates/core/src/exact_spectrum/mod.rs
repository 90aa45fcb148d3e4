//! Exact ring spectra: zero-range limit conditions, transfer matrices for the
//! finite-width local realizations, and closed-form weak-coupling expansions.

mod eigenfunction;
mod limit;
mod piecewise;

pub use eigenfunction::{duality_check, limit_eigenfunction, DualityReport, LimitEigenfunction};
pub use limit::{
    delta_expansion, delta_limit_condition, epsilon_expansion, epsilon_limit_condition,
    solve_limit_spectrum,
};
pub use piecewise::{
    build_delta_finite, build_epsilon_finite, ring_spectrum, transfer_matrix, Element,
    PiecewiseSystem, TransferMatrix,
};

use std::fmt;

use crate::ring_model::{DeltaCoupling, EpsilonCoupling, Parity};
use crate::roots::RootOptions;
use crate::scalar::Real;

/// A zero-range interaction at the origin, defined by its connection condition.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ContactModel<T> {
    /// Continuous `ψ`, derivative jump `ψ'(0+) - ψ'(0-) = v ψ(0)`.
    Delta(DeltaCoupling<T>),
    /// Continuous `ψ'`, value jump `ψ(0+) - ψ(0-) = c ψ'(0)`.
    Epsilon(EpsilonCoupling<T>),
}

impl<T: Real> ContactModel<T> {
    /// Sector the interaction acts on; the opposite sector stays free.
    pub fn active_parity(&self) -> Parity {
        match self {
            ContactModel::Delta(_) => Parity::Even,
            ContactModel::Epsilon(_) => Parity::Odd,
        }
    }

    pub fn is_free(&self) -> bool {
        match *self {
            ContactModel::Delta(v) => v.get() == T::zero(),
            ContactModel::Epsilon(c) => c.get() == T::zero(),
        }
    }
}

/// Symmetry label of a computed eigenstate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sector {
    Even,
    Odd,
    /// Non-symmetric system solved on the whole ring.
    Full,
}

impl From<Parity> for Sector {
    fn from(p: Parity) -> Self {
        match p {
            Parity::Even => Sector::Even,
            Parity::Odd => Sector::Odd,
        }
    }
}

impl Sector {
    fn first_index(self) -> usize {
        match self {
            Sector::Odd => 1,
            Sector::Even | Sector::Full => 0,
        }
    }
}

impl fmt::Display for Sector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sector::Even => "even",
            Sector::Odd => "odd",
            Sector::Full => "full",
        })
    }
}

/// How a spectrum was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    LimitCondition,
    TransferMatrix,
    Diagonalization,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::LimitCondition => "limit",
            Method::TransferMatrix => "transfer",
            Method::Diagonalization => "diagonalization",
        })
    }
}

/// One eigenvalue of a ring spectrum.
///
/// For `energy ≥ 0`, `k = √energy`; for a bound state `k` holds the decay
/// constant `γ = √(-energy)`. `index` counts states within the sector from
/// its lowest member, starting at 0 in the even and full sectors and at 1 in
/// the odd sector, so it coincides with the free mode number for weak coupling.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectrumRoot<T> {
    pub index: usize,
    pub sector: Sector,
    pub k: T,
    pub energy: T,
    /// `|f|` of the sector condition at the accepted root.
    pub residual: T,
}

impl<T: Real> SpectrumRoot<T> {
    pub fn is_bound(&self) -> bool {
        self.energy < T::zero()
    }
}

/// Eigenvalues sorted ascending in energy.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumResult<T> {
    pub roots: Vec<SpectrumRoot<T>>,
    pub method: Method,
}

impl<T: Real> SpectrumResult<T> {
    pub(crate) fn from_roots(mut roots: Vec<SpectrumRoot<T>>, method: Method) -> Self {
        roots.sort_by(|a, b| {
            a.energy
                .partial_cmp(&b.energy)
                .unwrap_or(std::cmp::Ordering::Equal)
                .then((a.sector as u8).cmp(&(b.sector as u8)))
        });
        Self { roots, method }
    }

    pub fn sector(&self, sector: Sector) -> impl Iterator<Item = &SpectrumRoot<T>> {
        self.roots.iter().filter(move |r| r.sector == sector)
    }

    /// State number `index` of `sector` (see [`SpectrumRoot::index`]).
    pub fn state(&self, sector: Sector, index: usize) -> Option<&SpectrumRoot<T>> {
        self.sector(sector).find(|r| r.index == index)
    }

    pub fn energies(&self) -> Vec<T> {
        self.roots.iter().map(|r| r.energy).collect()
    }
}

/// Root-search settings shared by the limit and transfer-matrix solvers.
#[derive(Debug, Clone, Copy)]
pub struct SpectrumOptions<T> {
    pub roots: RootOptions<T>,
    /// Also search negative energies through `k = iγ`.
    pub include_bound: bool,
}

impl<T: Real> Default for SpectrumOptions<T> {
    fn default() -> Self {
        Self { roots: RootOptions::default(), include_bound: true }
    }
}

/// Grid spacing for root scans on a ring: a quarter of the free half-spacing.
pub(crate) fn scan_step<T: Real>(circumference: T) -> T {
    T::PI() / (T::lit(4.0) * circumference)
}

pub(crate) fn label_sector<T: Real>(
    sector: Sector,
    mut states: Vec<(T, T, T)>,
    count: usize,
) -> Vec<SpectrumRoot<T>> {
    // (energy, k, residual)
    states.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap_or(std::cmp::Ordering::Equal));
    states
        .into_iter()
        .take(count)
        .enumerate()
        .map(|(i, (energy, k, residual))| SpectrumRoot {
            index: sector.first_index() + i,
            sector,
            k,
            energy,
            residual,
        })
        .collect()
}
