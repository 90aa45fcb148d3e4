use crate::error::{Error, Result};
use crate::ring_model::{DeltaCoupling, EpsilonCoupling, RingConfig};
use crate::roots::{scan_all_roots, scan_roots, Root};
use crate::scalar::Real;

use super::{
    label_sector, scan_step, ContactModel, Method, Sector, SpectrumOptions, SpectrumResult, SpectrumRoot,
};

/// Even-sector condition of the zero-range δ interaction,
/// `g(k) = 2k sin(kL/2) - v cos(kL/2)`.
///
/// This is `tan(kL/2) = v/(2k)` multiplied through by `2k cos(kL/2)`, so it
/// has no poles.
pub fn delta_limit_condition<T: Real>(k: T, v: DeltaCoupling<T>, ring: &RingConfig<T>) -> T {
    let (s, c) = (k * ring.half()).sin_cos();
    T::lit(2.0) * k * s - v.get() * c
}

/// Odd-sector condition of the ε interaction, `g(k) = 2 sin(kL/2) + k c cos(kL/2)`,
/// the pole-free form of `tan(kL/2) = -kc/2`.
pub fn epsilon_limit_condition<T: Real>(k: T, c: EpsilonCoupling<T>, ring: &RingConfig<T>) -> T {
    let (s, co) = (k * ring.half()).sin_cos();
    T::lit(2.0) * s + k * c.get() * co
}

// Negative-energy continuations k = iγ, divided by cosh(γL/2) to stay finite.
fn delta_bound_condition<T: Real>(gamma: T, v: T, ring: &RingConfig<T>) -> T {
    T::lit(2.0) * gamma * (gamma * ring.half()).tanh() + v
}

fn epsilon_bound_condition<T: Real>(gamma: T, c: T, ring: &RingConfig<T>) -> T {
    T::lit(2.0) * (gamma * ring.half()).tanh() + gamma * c
}

/// Second-order weak-coupling energy of branch `n` for the δ interaction:
/// `κ² + (2/L) v - v²/(L² κ²)`.
pub fn delta_expansion<T: Real>(v: DeltaCoupling<T>, ring: &RingConfig<T>, n: usize) -> Result<T> {
    if n == 0 {
        return Err(Error::invalid("n", "expansion needs a positive free energy, n >= 1"));
    }
    let kap2 = ring.kappa(n).powi(2);
    let l = ring.circumference();
    let v = v.get();
    Ok(kap2 + T::lit(2.0) * v / l - v * v / (l * l * kap2))
}

/// Second-order weak-coupling energy for the ε interaction:
/// `κ² (1 - 2c/L + 3c²/L²)`.
pub fn epsilon_expansion<T: Real>(c: EpsilonCoupling<T>, ring: &RingConfig<T>, n: usize) -> Result<T> {
    if n == 0 {
        return Err(Error::invalid("n", "expansion needs a positive free energy, n >= 1"));
    }
    let kap2 = ring.kappa(n).powi(2);
    let x = c.get() / ring.circumference();
    Ok(kap2 * (T::one() - T::lit(2.0) * x + T::lit(3.0) * x * x))
}

/// Lowest `count` states of the interacting sector from the zero-range
/// condition, merged with the `count` lowest free states of the other sector
/// (which the contact interaction does not see).
///
/// Roots are bracketed on a grid of spacing `π/(4L)` and bisected. With
/// `include_bound`, an attractive coupling (`v < 0` or `c < 0`) also yields the
/// bound state of the hyperbolic continuation. For δ it is state 0 of the
/// even sector; for ε it is an extra odd state labelled 0, so that odd state
/// `n` is always the branch that starts at `κ_n`.
pub fn solve_limit_spectrum<T: Real>(
    model: ContactModel<T>,
    ring: &RingConfig<T>,
    count: usize,
    opts: &SpectrumOptions<T>,
) -> Result<SpectrumResult<T>> {
    if count == 0 {
        return Err(Error::invalid("count", "need at least one root"));
    }
    let step = scan_step(ring.circumference());
    let k_limit = ring.kappa(count + 4);
    let zero = T::zero();

    let mut bound: Vec<Root<T>> = Vec::new();
    let positive = match model {
        ContactModel::Delta(v) => {
            if opts.include_bound && v.get() < zero {
                let w = v.get().abs();
                let g_max = w / T::lit(2.0) + (T::lit(2.0) * w / ring.circumference()).sqrt() + T::one();
                let f = |g: T| delta_bound_condition(g, v.get(), ring);
                bound = scan_all_roots(f, zero, step, T::lit(2.0) * g_max, true, &opts.roots)?;
            }
            let wanted = count.saturating_sub(bound.len());
            let f = |k: T| delta_limit_condition(k, v, ring);
            scan_roots(f, zero, step, k_limit, wanted, false, &opts.roots)?
        }
        ContactModel::Epsilon(c) => {
            if opts.include_bound && c.get() < zero {
                let g_max = T::lit(2.0) / c.get().abs() + T::one();
                let f = |g: T| epsilon_bound_condition(g, c.get(), ring);
                bound = scan_all_roots(f, zero, step, g_max, true, &opts.roots)?;
            }
            // g(0) = 0 identically but ψ ≡ 0 there, so the origin is not a state
            let f = |k: T| epsilon_limit_condition(k, c, ring);
            scan_roots(f, zero, step, k_limit, count, true, &opts.roots)?
        }
    };

    let active = Sector::from(model.active_parity());
    let mut roots = match model {
        ContactModel::Delta(_) => {
            // the bound state continues the n = 0 branch through E = 0
            let states: Vec<(T, T, T)> = bound
                .iter()
                .map(|r| (-r.x * r.x, r.x, r.residual))
                .chain(positive.iter().map(|r| (r.x * r.x, r.x, r.residual)))
                .collect();
            label_sector(active, states, count)
        }
        ContactModel::Epsilon(_) => {
            // the ε bound state descends from E = -∞ as c → 0⁻ and has no free
            // partner, so it takes index 0 below the odd branches n ≥ 1
            let mut out: Vec<SpectrumRoot<T>> = bound
                .iter()
                .map(|r| SpectrumRoot { index: 0, sector: active, k: r.x, energy: -r.x * r.x, residual: r.residual })
                .collect();
            let states = positive.iter().map(|r| (r.x * r.x, r.x, r.residual)).collect();
            out.extend(label_sector(active, states, count));
            out
        }
    };

    let spectator = model.active_parity() == crate::ring_model::Parity::Even;
    let (free_sector, first) = if spectator { (Sector::Odd, 1) } else { (Sector::Even, 0) };
    let free: Vec<(T, T, T)> = (first..first + count)
        .map(|n| {
            let k = ring.kappa(n);
            (k * k, k, (k * ring.half()).sin().abs())
        })
        .collect();
    roots.extend(label_sector(free_sector, free, count));

    Ok(SpectrumResult::from_roots(roots, Method::LimitCondition))
}
