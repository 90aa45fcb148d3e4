use crate::error::{Error, Result};
use crate::ring_model::{kappa, ModeIndex, Parity, Regularization, RingConfig};
use crate::scalar::{sinc, Real};

/// A parity-resolved pair of plane-wave modes with the wavenumber combinations
/// `κ⁻ = κ_n - κ_m` and `κ⁺ = κ_n + κ_m` that enter the matrix elements.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MatrixElementSpec<T> {
    pub m: usize,
    pub n: usize,
    pub sector: Parity,
    pub a: Regularization<T>,
    pub ring: RingConfig<T>,
    pub kappa_minus: T,
    pub kappa_plus: T,
}

impl<T: Real> MatrixElementSpec<T> {
    pub fn new(m: usize, n: usize, sector: Parity, a: Regularization<T>, ring: RingConfig<T>) -> Result<Self> {
        ModeIndex::new(m, sector)?;
        ModeIndex::new(n, sector)?;
        let (km, kn) = (kappa(m, &ring), kappa(n, &ring));
        Ok(Self { m, n, sector, a, ring, kappa_minus: kn - km, kappa_plus: kn + km })
    }

    // 1/√((1 + δ_n0)(1 + δ_m0))
    fn zero_mode_factor(&self) -> T {
        let f = |i: usize| if i == 0 { T::SQRT_2().recip() } else { T::one() };
        f(self.m) * f(self.n)
    }

    /// `⟨m|Δ_a|n⟩ = (1/L)(sinc aκ⁻ ± sinc aκ⁺)`, `+` for the even sector.
    pub fn delta(&self) -> T {
        let a = self.a.get();
        let (s_minus, s_plus) = (sinc(a * self.kappa_minus), sinc(a * self.kappa_plus));
        let bracket = match self.sector {
            Parity::Even => s_minus + s_plus,
            Parity::Odd => s_minus - s_plus,
        };
        self.zero_mode_factor() * bracket / self.ring.circumference()
    }

    /// `⟨m|E_a|n⟩ = -(κ_m κ_n/L)(sinc aκ⁻ ∓ sinc aκ⁺)`, `-` for the even sector.
    pub fn epsilon(&self) -> T {
        let a = self.a.get();
        let (s_minus, s_plus) = (sinc(a * self.kappa_minus), sinc(a * self.kappa_plus));
        let bracket = match self.sector {
            Parity::Even => s_minus - s_plus,
            Parity::Odd => s_minus + s_plus,
        };
        let (km, kn) = (kappa(self.m, &self.ring), kappa(self.n, &self.ring));
        -self.zero_mode_factor() * km * kn * bracket / self.ring.circumference()
    }
}

/// Closed-form matrix element of the square regularization `Δ_a`.
pub fn me_delta<T: Real>(m: usize, n: usize, sector: Parity, a: Regularization<T>, ring: &RingConfig<T>) -> Result<T> {
    Ok(MatrixElementSpec::new(m, n, sector, a, *ring)?.delta())
}

/// Closed-form matrix element of the separable operator `E_a = ∂ Δ_a ∂`.
pub fn me_epsilon_sep<T: Real>(
    m: usize,
    n: usize,
    sector: Parity,
    a: Regularization<T>,
    ring: &RingConfig<T>,
) -> Result<T> {
    Ok(MatrixElementSpec::new(m, n, sector, a, *ring)?.epsilon())
}

/// `a → 0` limit of [`me_delta`]: `2/L` (with the zero-mode factor) in the
/// even sector, zero in the odd one.
pub fn me_delta_zero_range<T: Real>(m: usize, n: usize, sector: Parity, ring: &RingConfig<T>) -> Result<T> {
    ModeIndex::new(m, sector)?;
    ModeIndex::new(n, sector)?;
    Ok(match sector {
        Parity::Even => {
            let f = |i: usize| if i == 0 { T::SQRT_2().recip() } else { T::one() };
            f(m) * f(n) * T::lit(2.0) / ring.circumference()
        }
        Parity::Odd => T::zero(),
    })
}

/// `a → 0` limit of [`me_epsilon_sep`]: `-2κ_mκ_n/L` in the odd sector, zero
/// in the even one.
pub fn me_epsilon_zero_range<T: Real>(m: usize, n: usize, sector: Parity, ring: &RingConfig<T>) -> Result<T> {
    ModeIndex::new(m, sector)?;
    ModeIndex::new(n, sector)?;
    Ok(match sector {
        Parity::Even => T::zero(),
        Parity::Odd => -T::lit(2.0) * kappa(m, ring) * kappa(n, ring) / ring.circumference(),
    })
}

/// Which operator a quadrature evaluates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OperatorKind {
    /// `∫ φ_m Δ_a φ_n`
    Delta,
    /// `-∫ φ_m' Δ_a φ_n'`, the derivative form of `⟨m|E_a|n⟩`.
    EpsilonSep,
}

/// Real ring basis: `1/√L`, `√(2/L) cos κx`, `√(2/L) sin κx`.
fn basis<T: Real>(mode: ModeIndex, x: T, ring: &RingConfig<T>) -> (T, T) {
    let l = ring.circumference();
    let k = mode.kappa(ring);
    if mode.n() == 0 {
        return (l.sqrt().recip(), T::zero());
    }
    let norm = (T::lit(2.0) / l).sqrt();
    let (s, c) = (k * x).sin_cos();
    match mode.parity() {
        Parity::Even => (norm * c, -norm * k * s),
        Parity::Odd => (norm * s, norm * k * c),
    }
}

const ROMBERG_LEVELS: usize = 20;
const ROMBERG_TOL: f64 = 1e-12;

/// Independent oracle for the matrix elements: Romberg integration over
/// `[-a, a]` of the explicit basis functions, refined until successive
/// diagonal estimates agree to `1e-12` (relative to the value once it
/// exceeds one). Modes of opposite parity are allowed and integrate to zero.
pub fn quadrature_me<T: Real>(
    kind: OperatorKind,
    m: ModeIndex,
    n: ModeIndex,
    a: Regularization<T>,
    ring: &RingConfig<T>,
) -> Result<T> {
    let a = a.get();
    let height = (T::lit(2.0) * a).recip();
    let f = |x: T| {
        let (pm, dm) = basis(m, x, ring);
        let (pn, dn) = basis(n, x, ring);
        match kind {
            OperatorKind::Delta => height * pm * pn,
            OperatorKind::EpsilonSep => -height * dm * dn,
        }
    };
    romberg(&f, -a, a, T::lit(ROMBERG_TOL), ROMBERG_LEVELS)
}

fn romberg<T: Real, F: Fn(T) -> T>(f: &F, lo: T, hi: T, tol: T, levels: usize) -> Result<T> {
    let two = T::lit(2.0);
    let mut h = hi - lo;
    let mut prev = vec![h * (f(lo) + f(hi)) / two];
    for level in 1..=levels {
        h = h / two;
        let points = 1usize << (level - 1);
        let mut mid = T::zero();
        for i in 0..points {
            mid = mid + f(lo + h * T::from_index(2 * i + 1));
        }
        let mut row = Vec::with_capacity(level + 1);
        row.push(prev[0] / two + h * mid);
        let mut factor = T::one();
        for j in 1..=level {
            factor = factor * T::lit(4.0);
            let r = row[j - 1] + (row[j - 1] - prev[j - 1]) / (factor - T::one());
            row.push(r);
        }
        let best = row[level];
        if level >= 3 && (best - prev[level - 1]).abs() <= tol * best.abs().max(T::one()) {
            return Ok(best);
        }
        prev = row;
    }
    Err(Error::NoConvergence(format!(
        "Romberg quadrature did not reach {} within {levels} refinements",
        tol
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    fn ring() -> RingConfig<f64> {
        RingConfig::two_pi()
    }

    fn reg(a: f64) -> Regularization<f64> {
        Regularization::new(a).unwrap()
    }

    #[test]
    fn delta_examples() {
        let r = ring();
        let zero_range = me_delta(1, 1, Parity::Even, reg(1e-12), &r).unwrap();
        assert!((zero_range - 1.0 / PI).abs() < 1e-15);
        let finite = me_delta(1, 1, Parity::Even, reg(0.1), &r).unwrap();
        assert!((finite - (1.0 + 0.2f64.sin() / 0.2) / (2.0 * PI)).abs() < 1e-15);
        assert!((finite - 0.317_251).abs() < 1e-6);
        assert!(me_delta(1, 1, Parity::Odd, reg(1e-6), &r).unwrap().abs() < 1e-12);
        assert!(me_delta(0, 1, Parity::Odd, reg(0.1), &r).is_err());
    }

    #[test]
    fn epsilon_examples() {
        let r = ring();
        let d = me_epsilon_sep(2, 2, Parity::Odd, reg(1e-12), &r).unwrap();
        assert!((d + 8.0 / (2.0 * PI)).abs() < 1e-12);
        assert!(me_epsilon_sep(1, 1, Parity::Even, reg(1e-6), &r).unwrap().abs() < 1e-11);
        let off = me_epsilon_sep(1, 2, Parity::Odd, reg(0.1), &r).unwrap();
        let oracle = quadrature_me(
            OperatorKind::EpsilonSep,
            ModeIndex::new(1, Parity::Odd).unwrap(),
            ModeIndex::new(2, Parity::Odd).unwrap(),
            reg(0.1),
            &r,
        )
        .unwrap();
        assert!((off - oracle).abs() < 1e-10);
        assert!((off + (0.1f64.sin() / 0.1 + 0.3f64.sin() / 0.3) / PI).abs() < 1e-15);
    }

    #[test]
    fn zero_mode_carries_inverse_root_two() {
        let r = ring();
        let q = quadrature_me(
            OperatorKind::Delta,
            ModeIndex::new(0, Parity::Even).unwrap(),
            ModeIndex::new(0, Parity::Even).unwrap(),
            reg(0.2),
            &r,
        )
        .unwrap();
        assert!((q - 1.0 / r.circumference()).abs() < 1e-14);
        let closed = me_delta(0, 0, Parity::Even, reg(0.2), &r).unwrap();
        assert!((closed - q).abs() < 1e-15);
        assert_eq!(me_epsilon_sep(0, 3, Parity::Even, reg(0.2), &r).unwrap(), 0.0);
    }

    #[test]
    fn zero_range_limits_match_small_width() {
        let r = ring();
        for (m, n) in [(1, 1), (2, 5), (0, 3)] {
            let d0 = me_delta_zero_range(m, n, Parity::Even, &r).unwrap();
            let d = me_delta(m, n, Parity::Even, reg(1e-9), &r).unwrap();
            assert!((d - d0).abs() < 1e-12);
            if m > 0 {
                let e0 = me_epsilon_zero_range(m, n, Parity::Odd, &r).unwrap();
                let e = me_epsilon_sep(m, n, Parity::Odd, reg(1e-9), &r).unwrap();
                assert!((e - e0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn closed_forms_match_quadrature_on_random_sample() {
        let r = ring();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..100 {
            let sector = if rng.gen_bool(0.5) { Parity::Even } else { Parity::Odd };
            let lo = sector.first_mode();
            let (m, n) = (rng.gen_range(lo..=30), rng.gen_range(lo..=30));
            let a = reg(rng.gen_range(1e-3..0.3));
            let (mi, ni) = (ModeIndex::new(m, sector).unwrap(), ModeIndex::new(n, sector).unwrap());
            let qd = quadrature_me(OperatorKind::Delta, mi, ni, a, &r).unwrap();
            let qe = quadrature_me(OperatorKind::EpsilonSep, mi, ni, a, &r).unwrap();
            assert!((qd - me_delta(m, n, sector, a, &r).unwrap()).abs() <= 1e-10);
            assert!((qe - me_epsilon_sep(m, n, sector, a, &r).unwrap()).abs() <= 1e-10);
        }
    }

    #[test]
    fn opposite_parities_do_not_couple() {
        let r = ring();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..50 {
            let m = ModeIndex::new(rng.gen_range(0..=20), Parity::Even).unwrap();
            let n = ModeIndex::new(rng.gen_range(1..=20), Parity::Odd).unwrap();
            let a = reg(rng.gen_range(1e-3..0.3));
            for kind in [OperatorKind::Delta, OperatorKind::EpsilonSep] {
                assert!(quadrature_me(kind, m, n, a, &r).unwrap().abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn suppressed_sectors_vanish_linearly() {
        let r = ring();
        let worst = |a: f64| {
            let mut w = 0.0f64;
            for m in 1..=20 {
                for n in 1..=20 {
                    w = w.max(me_delta(m, n, Parity::Odd, reg(a), &r).unwrap().abs());
                    w = w.max(me_epsilon_sep(m, n, Parity::Even, reg(a), &r).unwrap().abs());
                }
            }
            w
        };
        let (w1, w2) = (worst(1e-3), worst(5e-4));
        assert!(w1 < 1e-1);
        // sinc aκ⁻ - sinc aκ⁺ ≈ 2a²κ_mκ_n/3, faster than linear
        assert!(w1 / w2 >= 1.9, "{w1} {w2}");
    }

    #[test]
    fn romberg_reports_failure() {
        let f = |x: f64| (1.0 / x).sin();
        assert!(romberg(&f, 1e-6, 1.0, 1e-15, 4).is_err());
    }
}
