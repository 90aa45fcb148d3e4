//! Analytic remainders `Σ_{m>M}` for summands that are rational in `m`,
//! optionally times a phase `e^{iθm}`.

use num_complex::Complex;

use crate::scalar::{CompensatedSum, Real};

/// Number of inverse powers kept in an [`InverseSeries`].
const ORDER: usize = 18;
/// Abel summation-by-parts terms.
const ABEL_TERMS: usize = 6;
/// Below this cutoff the zeta tail is first advanced by direct summation.
const EM_START: usize = 16;

/// `Σ_{m>M} m^{-k}` for `k ≥ 2`, by Euler–Maclaurin from `max(M, 16)`.
pub(crate) fn zeta_tail<T: Real>(k: u32, m_max: usize) -> T {
    debug_assert!(k >= 2);
    let mut head = CompensatedSum::new();
    let mut start = m_max;
    while start < EM_START {
        start += 1;
        head.add(T::from_index(start).powi(-(k as i32)));
    }
    let x = T::from_index(start);
    let kf = T::from_index(k as usize);
    let f = x.powi(-(k as i32));
    // B_2j/(2j)! for j = 1..4
    let bernoulli = [1.0 / 12.0, -1.0 / 720.0, 1.0 / 30240.0, -1.0 / 1209600.0];
    let mut acc = f * x / (kf - T::one()) - f / T::lit(2.0);
    // f^{(2j-1)}(x) = -k(k+1)…(k+2j-2) x^{-k-2j+1}
    let mut rising = kf;
    let mut power = f / x;
    for (j, b) in bernoulli.iter().enumerate() {
        let r = 2 * j + 1;
        if j > 0 {
            rising = rising * (kf + T::from_index(r - 2)) * (kf + T::from_index(r - 1));
            power = power / (x * x);
        }
        acc = acc + T::lit(*b) * rising * power;
    }
    head.add(acc);
    head.value()
}

/// Coefficients `c_j` of `Σ_j c_j m^{-j}`, valid for `m` well above the
/// largest shift used to build the series.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct InverseSeries<T>(Vec<T>);

impl<T: Real> InverseSeries<T> {
    pub(crate) fn constant(c: T) -> Self {
        let mut v = vec![T::zero(); ORDER + 1];
        v[0] = c;
        Self(v)
    }

    /// `(m + s)^{-j} = m^{-j} Σ_i binom(j+i-1, i) (-s/m)^i`
    pub(crate) fn shifted_power(s: T, j: usize) -> Self {
        let mut v = vec![T::zero(); ORDER + 1];
        let mut coef = T::one();
        for i in 0..=ORDER.saturating_sub(j) {
            v[j + i] = coef;
            coef = coef * (-s) * T::from_index(j + i) / T::from_index(i + 1);
        }
        Self(v)
    }

    pub(crate) fn scale(&self, f: T) -> Self {
        Self(self.0.iter().map(|&c| c * f).collect())
    }

    pub(crate) fn add(&self, rhs: &Self) -> Self {
        Self(self.0.iter().zip(&rhs.0).map(|(&a, &b)| a + b).collect())
    }

    pub(crate) fn mul(&self, rhs: &Self) -> Self {
        let mut v = vec![T::zero(); ORDER + 1];
        for (i, &a) in self.0.iter().enumerate() {
            if a == T::zero() {
                continue;
            }
            for (j, &b) in rhs.0.iter().enumerate().take(ORDER + 1 - i) {
                v[i + j] = v[i + j] + a * b;
            }
        }
        Self(v)
    }

    /// `Σ_{m>M}` of the series. The `m⁰` and `m⁻¹` coefficients must vanish.
    pub(crate) fn tail(&self, m_max: usize) -> T {
        debug_assert!(self.0[0].abs() <= T::epsilon() && self.0[1].abs() <= T::epsilon() * T::lit(64.0));
        let mut acc = CompensatedSum::new();
        for (k, &c) in self.0.iter().enumerate().skip(2) {
            if c != T::zero() {
                acc.add(c * zeta_tail(k as u32, m_max));
            }
        }
        acc.value()
    }
}

/// `Σ_{m≥N} e^{iθm} g(m)` for slowly varying `g`, by repeated summation by
/// parts: `Σ_j z^{N+j} ∇^j g(N+j) / (1 - z)^{j+1}` with `z = e^{iθ}`.
///
/// Accurate when `N·|1 - z| ≫ 1`; the neglected term is of order
/// `∇^6 g / |1 - z|^6`.
pub(crate) fn oscillatory_tail<T: Real, G>(theta: T, first: usize, g: G) -> Complex<T>
where
    G: Fn(usize) -> Complex<T>,
{
    let z = Complex::from_polar(T::one(), theta);
    let one_minus_z = Complex::new(T::one(), T::zero()) - z;
    let mut diffs: Vec<Complex<T>> = (0..ABEL_TERMS).map(|i| g(first + i)).collect();
    let mut phase = Complex::from_polar(T::one(), theta * T::from_index(first));
    let mut denom = one_minus_z;
    let mut total = Complex::new(T::zero(), T::zero());
    for _ in 0..ABEL_TERMS {
        total = total + phase * diffs[0] / denom;
        for i in 0..diffs.len() - 1 {
            diffs[i] = diffs[i + 1] - diffs[i];
        }
        diffs.pop();
        phase = phase * z;
        denom = denom * one_minus_z;
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;

    fn direct(k: i32, from: usize, to: usize) -> f64 {
        (from..=to).rev().map(|m| (m as f64).powi(-k)).sum()
    }

    #[test]
    fn zeta_tail_matches_known_values() {
        let pi2 = std::f64::consts::PI.powi(2);
        assert!((zeta_tail::<f64>(2, 0) - pi2 / 6.0).abs() < 1e-14);
        assert!((zeta_tail::<f64>(2, 1) - (pi2 / 6.0 - 1.0)).abs() < 1e-14);
        assert!((zeta_tail::<f64>(4, 0) - pi2 * pi2 / 90.0).abs() < 1e-14);
        let t = zeta_tail::<f64>(3, 100);
        let d = direct(3, 101, 2_000_000) + 0.5 / 2_000_000f64.powi(2);
        assert!((t - d).abs() < 1e-16, "{t} {d}");
    }

    #[test]
    fn shifted_series_reproduces_rational_tail() {
        // Σ_{m>M} 1/((m-3)(m+3)) telescopes to (1/6) Σ_{j=M-2}^{M+3} 1/j
        let m = 500usize;
        let s = InverseSeries::<f64>::shifted_power(-3.0, 1).mul(&InverseSeries::shifted_power(3.0, 1));
        let exact: f64 = ((m - 2)..=(m + 3)).map(|j| 1.0 / j as f64).sum::<f64>() / 6.0;
        assert!((s.tail(m) - exact).abs() < 1e-18);
        let sq = InverseSeries::<f64>::shifted_power(2.0, 2).add(&InverseSeries::constant(0.0));
        assert!((sq.tail(m) - zeta_tail::<f64>(2, m + 2)).abs() < 1e-18);
    }

    #[test]
    fn oscillatory_tail_matches_clausen_sum() {
        // Σ_{m≥1} cos(mθ)/m² = π²/6 - πθ/2 + θ²/4 on [0, 2π]
        let theta = 0.3f64;
        let pi = std::f64::consts::PI;
        let exact = pi * pi / 6.0 - pi * theta / 2.0 + theta * theta / 4.0;
        let n = 2000;
        let head: f64 = (1..n).map(|m| (theta * m as f64).cos() / (m as f64).powi(2)).sum();
        let tail = oscillatory_tail(theta, n, |m| Complex::new(1.0 / (m as f64).powi(2), 0.0));
        assert!((head + tail.re - exact).abs() < 1e-14, "{}", head + tail.re - exact);
    }
}
