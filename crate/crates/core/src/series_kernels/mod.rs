//! Slowly convergent sums behind the second-order results: `Σ sin²(βm)/m²`,
//! the squared pair kernel `Σ′ K_nm²` and its `2π/β - 6` asymptote, and the
//! reciprocal sums `Σ′ 1/(n² - m²)`.
//!
//! Every sum is a compensated partial sum in ascending `m` followed by an
//! analytic remainder. The remainder splits each summand into a rational
//! envelope, summed through Euler–Maclaurin zeta tails, and oscillating parts
//! `e^{2iβm} g(m)`, summed by parts. Results are accepted only when the cutoffs
//! `M` and `2M` agree within the requested tolerance.

pub(crate) mod tails;

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::ring_model::{Regularization, RingConfig};
use crate::scalar::{sinc, CompensatedSum, Real};

use tails::{oscillatory_tail, InverseSeries};

/// Parameters of a pair-kernel sum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SumSpec<T> {
    pub n: usize,
    /// `β = 2πa/L`
    pub beta: T,
    pub m_max: usize,
    /// Largest accepted change between the cutoffs `m_max` and `2 m_max`.
    pub tol: T,
}

/// `m_max · β` below which asymptotic statements are refused.
pub const MIN_CUTOFF_BETA: f64 = 100.0;

impl<T: Real> SumSpec<T> {
    pub fn new(n: usize, beta: T, m_max: usize, tol: T) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("n", "pair-kernel sums start at n = 1"));
        }
        if !(beta > T::zero() && beta < T::FRAC_PI_2()) {
            return Err(Error::invalid("beta", format!("need 0 < β < π/2, got {beta}")));
        }
        if !(tol > T::zero()) {
            return Err(Error::invalid("tol", format!("tolerance must be positive, got {tol}")));
        }
        let required = (T::lit(MIN_CUTOFF_BETA) / beta).ceil().to_usize().unwrap_or(usize::MAX).max(10 * n);
        if m_max < required {
            return Err(Error::CutoffTooSmall { m_max, required });
        }
        Ok(Self { n, beta, m_max, tol })
    }

    /// `β = 2πa/L` for a regularization width on a ring.
    pub fn from_width(n: usize, a: Regularization<T>, ring: &RingConfig<T>, m_max: usize, tol: T) -> Result<Self> {
        Self::new(n, beta_of(a, ring), m_max, tol)
    }
}

/// `β = 2πa/L`
pub fn beta_of<T: Real>(a: Regularization<T>, ring: &RingConfig<T>) -> T {
    T::TAU() * a.get() / ring.circumference()
}

/// `K_nm = sin β(n-m)/(β(n-m)) + sin β(n+m)/(β(n+m))`, with each ratio equal
/// to 1 at vanishing argument. Symmetric in `n, m`; `K_nn → 2` as `β → 0`.
pub fn pair_kernel<T: Real>(n: usize, m: usize, beta: T) -> T {
    let (n, m) = (T::from_index(n), T::from_index(m));
    sinc(beta * (n - m)) + sinc(beta * (n + m))
}

/// `β(π - β)/2`
pub fn sine_square_closed<T: Real>(beta: T) -> T {
    beta * (T::PI() - beta) / T::lit(2.0)
}

/// `Σ_{m≥1} sin²(βm)/m²` for `0 < β < π`.
pub fn sine_square_sum<T: Real>(beta: T, tol: T) -> Result<T> {
    if !(beta > T::zero() && beta < T::PI()) {
        return Err(Error::invalid("beta", format!("need 0 < β < π, got {beta}")));
    }
    let gap = beta.min(T::PI() - beta);
    let m_max = (T::lit(MIN_CUTOFF_BETA) / gap).ceil().to_usize().unwrap_or(usize::MAX).max(1000);
    let coarse = sine_square_at(beta, m_max);
    let fine = sine_square_at(beta, 2 * m_max);
    accept(coarse, fine, tol, "Σ sin²(βm)/m²")?;
    Ok(fine)
}

fn sine_square_at<T: Real>(beta: T, m_max: usize) -> T {
    let mut acc: CompensatedSum<T> = (1..=m_max)
        .map(|m| {
            let mf = T::from_index(m);
            (beta * mf).sin().powi(2) / (mf * mf)
        })
        .collect();
    // sin²x = (1 - cos 2x)/2
    let half = T::lit(0.5);
    let smooth = InverseSeries::shifted_power(T::zero(), 2).scale(half).tail(m_max);
    let wave = oscillatory_tail(T::lit(2.0) * beta, m_max + 1, |m| {
        Complex::new(half / T::from_index(m).powi(2), T::zero())
    });
    acc.add(smooth);
    acc.add(-wave.re);
    acc.value()
}

/// `2π/β - 6`, the small-β asymptote of [`pair_kernel_square_sum`].
pub fn pair_kernel_asymptote<T: Real>(beta: T) -> T {
    T::TAU() / beta - T::lit(6.0)
}

/// `Σ′_{m≥1, m≠n} K_nm²`, i.e. `(1/β²) Σ′ (sin β(n-m)/(n-m) + sin β(n+m)/(n+m))²`.
pub fn pair_kernel_square_sum<T: Real>(spec: &SumSpec<T>) -> Result<T> {
    let coarse = weighted_kernel_sum(spec.n, spec.beta, spec.m_max, KernelWeight::Unit);
    let fine = weighted_kernel_sum(spec.n, spec.beta, 2 * spec.m_max, KernelWeight::Unit);
    accept(coarse, fine, spec.tol, "Σ′ K²")?;
    Ok(fine)
}

/// `Σ′ K² + 4 - (4/β²) Σ sin²(βm)/m²`, which is `O(β)`; it equals the
/// deviation of [`pair_kernel_square_sum`] from [`pair_kernel_asymptote`].
pub fn pair_kernel_residual<T: Real>(spec: &SumSpec<T>) -> Result<T> {
    let kernel = pair_kernel_square_sum(spec)?;
    let b2 = spec.beta * spec.beta;
    let floor = T::epsilon() * T::lit(1024.0) * sine_square_closed(spec.beta).max(T::one());
    let sines = sine_square_sum(spec.beta, (spec.tol * b2 / T::lit(4.0)).max(floor))?;
    Ok(kernel + T::lit(4.0) - T::lit(4.0) * sines / b2)
}

/// `Σ′_{m≥1, m≠n} 1/(n² - m²) = -3/(4n²)`. With `include_zero_mode` the
/// `m = 0` mode is added with its half weight `1/(2n²)`, giving `-1/(4n²)`.
pub fn reciprocal_sum<T: Real>(n: usize, include_zero_mode: bool) -> Result<T> {
    if n == 0 {
        return Err(Error::invalid("n", "reciprocal sums start at n = 1"));
    }
    let m_max = (8 * n).max(64);
    let coarse = reciprocal_at::<T>(n, m_max);
    let fine = reciprocal_at::<T>(n, 2 * m_max);
    accept(coarse, fine, T::epsilon() * T::lit(64.0) * fine.abs(), "Σ′ 1/(n² - m²)")?;
    let zero_mode = if include_zero_mode {
        T::one() / (T::lit(2.0) * T::from_index(n * n))
    } else {
        T::zero()
    };
    Ok(fine + zero_mode)
}

fn reciprocal_at<T: Real>(n: usize, m_max: usize) -> T {
    let nf = T::from_index(n);
    let mut acc: CompensatedSum<T> = (1..=m_max)
        .filter(|&m| m != n)
        .map(|m| {
            let mf = T::from_index(m);
            T::one() / ((nf - mf) * (nf + mf))
        })
        .collect();
    // 1/(n² - m²) = -(1/2n)(1/(m - n) - 1/(m + n)) telescopes beyond m_max
    let window: CompensatedSum<T> = ((m_max + 1 - n)..=(m_max + n)).map(|j| T::from_index(j).recip()).collect();
    acc.add(-window.value() / (T::lit(2.0) * nf));
    acc.value()
}

/// Least-squares slope of `ln|y|` against `ln x`.
pub fn log_log_slope<T: Real>(points: &[(T, T)]) -> Result<T> {
    if points.len() < 2 {
        return Err(Error::invalid("points", "a slope needs at least two points"));
    }
    let logs: Vec<(T, T)> = points.iter().map(|&(x, y)| (x.ln(), y.abs().ln())).collect();
    if logs.iter().any(|(x, y)| !x.is_finite() || !y.is_finite()) {
        return Err(Error::invalid("points", "log-log slope needs positive x and non-zero y"));
    }
    let count = T::from_index(logs.len());
    let (mx, my) = logs.iter().fold((T::zero(), T::zero()), |(a, b), &(x, y)| (a + x, b + y));
    let (mx, my) = (mx / count, my / count);
    let (sxy, sxx) = logs
        .iter()
        .fold((T::zero(), T::zero()), |(a, b), &(x, y)| (a + (x - mx) * (y - my), b + (x - mx) * (x - mx)));
    Ok(sxy / sxx)
}

/// Extra factor multiplying `K_nm²` in a kernel sum.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum KernelWeight {
    Unit,
    /// `m²/(n² - m²)`, the energy denominator of the second-order ε sum.
    Resolvent,
}

impl KernelWeight {
    fn at<T: Real>(self, n: T, m: T) -> T {
        match self {
            KernelWeight::Unit => T::one(),
            KernelWeight::Resolvent => m * m / ((n - m) * (n + m)),
        }
    }
}

/// `Σ′_{m=1}^{M} w_m K_nm²` plus the analytic remainder `Σ_{m>M}`.
pub(crate) fn weighted_kernel_sum<T: Real>(n: usize, beta: T, m_max: usize, weight: KernelWeight) -> T {
    let nf = T::from_index(n);
    let mut acc: CompensatedSum<T> = (1..=m_max)
        .filter(|&m| m != n)
        .map(|m| weight.at(nf, T::from_index(m)) * pair_kernel(n, m, beta).powi(2))
        .collect();
    acc.add(kernel_tail(n, beta, m_max, weight));
    acc.value()
}

/// `Σ_{m>M} w_m K_nm²` for `M ≥ 10 n`.
///
/// With `p = m - n`, `q = m + n`, `θ = 2β`:
/// `β² K² = 1/(2p²) + 1/(2q²) + cos(θn)/(pq)
///        - Re e^{iθm} [e^{-iθn}/(2p²) + e^{iθn}/(2q²) + 1/(pq)]`.
pub(crate) fn kernel_tail<T: Real>(n: usize, beta: T, m_max: usize, weight: KernelWeight) -> T {
    debug_assert!(m_max >= 10 * n);
    let nf = T::from_index(n);
    let half = T::lit(0.5);
    let theta = T::lit(2.0) * beta;
    let p1 = InverseSeries::shifted_power(-nf, 1);
    let q1 = InverseSeries::shifted_power(nf, 1);
    let pq = p1.mul(&q1);
    let envelope = InverseSeries::shifted_power(-nf, 2)
        .scale(half)
        .add(&InverseSeries::shifted_power(nf, 2).scale(half))
        .add(&pq.scale((theta * nf).cos()));
    let weight_series = match weight {
        KernelWeight::Unit => InverseSeries::constant(T::one()),
        // m²/(n² - m²) = -1 - n²/(pq)
        KernelWeight::Resolvent => InverseSeries::constant(-T::one()).add(&pq.scale(-nf * nf)),
    };
    let smooth = weight_series.mul(&envelope).tail(m_max);

    let down = Complex::from_polar(half, -theta * nf);
    let up = Complex::from_polar(half, theta * nf);
    let wave = oscillatory_tail(theta, m_max + 1, |m| {
        let mf = T::from_index(m);
        let (p, q) = (mf - nf, mf + nf);
        let g = down / (p * p) + up / (q * q) + Complex::new(T::one() / (p * q), T::zero());
        g * weight.at(nf, mf)
    });
    (smooth - wave.re) / (beta * beta)
}

fn accept<T: Real>(coarse: T, fine: T, tol: T, what: &str) -> Result<()> {
    let change = (fine - coarse).abs();
    if change <= tol {
        Ok(())
    } else {
        Err(Error::NoConvergence(format!(
            "{what}: doubling the cutoff changed the value by {change}, above tolerance {tol}"
        )))
    }
}
