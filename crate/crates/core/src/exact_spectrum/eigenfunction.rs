use crate::error::{Error, Result};
use crate::ring_model::{duality_coupling, EpsilonCoupling, Parity, RingConfig};
use crate::scalar::Real;

use super::limit::{delta_limit_condition, epsilon_limit_condition};
use super::ContactModel;

const ROOT_TOL: f64 = 1e-8;

/// Zero-range eigenfunction `ψ(x) = A sin k(x - η)` for `0 < x < L/2` and
/// `A sin k(x - η + L)` for `-L/2 < x < 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LimitEigenfunction<T> {
    pub amplitude: T,
    pub eta: T,
    pub k: T,
    pub parity: Parity,
    model: ContactModel<T>,
    circumference: T,
}

impl<T: Real> LimitEigenfunction<T> {
    pub fn value(&self, x: T) -> T {
        self.amplitude * (self.k * self.shift(x)).sin()
    }

    pub fn derivative(&self, x: T) -> T {
        self.amplitude * self.k * (self.k * self.shift(x)).cos()
    }

    /// One-sided limits `(ψ(0⁻), ψ(0⁺), ψ'(0⁻), ψ'(0⁺))`.
    pub fn at_origin(&self) -> (T, T, T, T) {
        let a = self.amplitude;
        let k = self.k;
        let left = k * (self.circumference - self.eta);
        let right = -k * self.eta;
        (a * left.sin(), a * right.sin(), a * k * left.cos(), a * k * right.cos())
    }

    /// Largest violation of the model's connection condition at the origin.
    pub fn connection_residual(&self) -> T {
        let (l, r, dl, dr) = self.at_origin();
        match self.model {
            ContactModel::Delta(v) => (l - r).abs().max((dr - dl - v.get() * (l + r) / T::lit(2.0)).abs()),
            ContactModel::Epsilon(c) => (dr - dl).abs().max((r - l - c.get() * (dl + dr) / T::lit(2.0)).abs()),
        }
    }

    /// `∫|ψ|²` over the ring from the closed form.
    pub fn norm_squared(&self) -> T {
        self.amplitude.powi(2) * unit_norm(self.k, self.eta, self.circumference)
    }

    fn shift(&self, x: T) -> T {
        if x < T::zero() {
            x - self.eta + self.circumference
        } else {
            x - self.eta
        }
    }
}

// ∫₀^L sin² k(y - η) dy
fn unit_norm<T: Real>(k: T, eta: T, l: T) -> T {
    let two = T::lit(2.0);
    l / two - ((two * k * (l - eta)).sin() + (two * k * eta).sin()) / (T::lit(4.0) * k)
}

/// Normalized eigenfunction for a positive root `k` of either sector.
///
/// The interacting sector is tried first (even for δ, odd for ε); otherwise `k`
/// must be a free ring wavenumber `κ_n` of the opposite sector.
pub fn limit_eigenfunction<T: Real>(
    model: ContactModel<T>,
    ring: &RingConfig<T>,
    k: T,
) -> Result<LimitEigenfunction<T>> {
    if !(k > T::zero()) || !k.is_finite() {
        return Err(Error::invalid("k", "eigenfunctions are built for positive real roots"));
    }
    let l = ring.circumference();
    let half = ring.half();
    let tol = T::lit(ROOT_TOL);
    let quarter_wave = T::FRAC_PI_2() / k;
    let active = match model {
        ContactModel::Delta(v) => delta_limit_condition(k, v, ring),
        ContactModel::Epsilon(c) => epsilon_limit_condition(k, c, ring),
    };
    let (eta, parity) = if active.abs() <= tol {
        match model {
            // cos k(x - L/2) on the right half, even about both 0 and L/2
            ContactModel::Delta(_) => (half - quarter_wave, Parity::Even),
            ContactModel::Epsilon(_) => (half, Parity::Odd),
        }
    } else if (k * half).sin().abs() <= tol {
        match model {
            ContactModel::Delta(_) => (T::zero(), Parity::Odd),
            ContactModel::Epsilon(_) => (-quarter_wave, Parity::Even),
        }
    } else {
        return Err(Error::InvalidRoot(format!(
            "k = {k} is not a root: condition residual {}",
            active.abs()
        )));
    };
    let amplitude = T::one() / unit_norm(k, eta, l).sqrt();
    let psi = LimitEigenfunction { amplitude, eta, k, parity, model, circumference: l };
    Ok(psi)
}

/// Outcome of [`duality_check`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DualityReport<T> {
    pub k: T,
    pub c: T,
    /// Dual δ strength `v = -c k²`.
    pub v: T,
    pub epsilon_residual: T,
    pub delta_residual: T,
    /// `max|φ' - sψ| / max|φ'|` on a grid, with `φ` the δ eigenfunction,
    /// `φ'` by central differences, `ψ` the ε eigenfunction and `s` the
    /// least-squares scale.
    pub derivative_mismatch: T,
}

impl<T: Real> DualityReport<T> {
    pub fn passed(&self, residual_tol: T, shape_tol: T) -> bool {
        self.delta_residual <= residual_tol && self.derivative_mismatch <= shape_tol
    }
}

const DUALITY_ROOT_TOL: f64 = 1e-10;
const FD_STEP: f64 = 1e-6;
const SAMPLES: usize = 400;

/// Maps a root of the ε condition to the δ condition at `v = -c k²` and checks
/// that the derivative of the δ eigenfunction is proportional to the ε one.
pub fn duality_check<T: Real>(c: EpsilonCoupling<T>, ring: &RingConfig<T>, k: T) -> Result<DualityReport<T>> {
    let eps_res = epsilon_limit_condition(k, c, ring).abs();
    if eps_res > T::lit(DUALITY_ROOT_TOL) || !(k > T::zero()) {
        return Err(Error::InvalidRoot(format!(
            "k = {k} is not a positive root of the ε condition (residual {eps_res})"
        )));
    }
    let v = duality_coupling(c, k);
    let delta_res = delta_limit_condition(k, v, ring).abs();

    let phi = limit_eigenfunction(ContactModel::Delta(v), ring, k)?;
    let psi = limit_eigenfunction(ContactModel::Epsilon(c), ring, k)?;
    let h = T::lit(FD_STEP);
    let half = ring.half();
    let margin = T::lit(1e-3) * ring.circumference();
    let mut pairs = Vec::with_capacity(SAMPLES);
    for j in 0..SAMPLES {
        let t = (T::from_index(j) + T::lit(0.5)) / T::from_index(SAMPLES);
        let x = -half + t * ring.circumference();
        if x.abs() < margin {
            continue;
        }
        let d = (phi.value(x + h) - phi.value(x - h)) / (T::lit(2.0) * h);
        pairs.push((d, psi.value(x)));
    }
    let (num, den) = pairs
        .iter()
        .fold((T::zero(), T::zero()), |(n, d), &(a, b)| (n + a * b, d + b * b));
    let scale = num / den;
    let peak = pairs.iter().fold(T::zero(), |m, &(a, _)| m.max(a.abs()));
    let worst = pairs.iter().fold(T::zero(), |m, &(a, b)| m.max((a - scale * b).abs()));
    Ok(DualityReport {
        k,
        c: c.get(),
        v: v.get(),
        epsilon_residual: eps_res,
        delta_residual: delta_res,
        derivative_mismatch: worst / peak,
    })
}
