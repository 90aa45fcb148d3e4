//! Rayleigh–Schrödinger perturbation theory to second order on the ring.
//!
//! For `v Δ_a` the `a → 0` limit can be taken term by term. For `c_a E_a` the
//! second-order sum grows like `-κ²/(La)`; it is evaluated at finite `a`
//! with an analytic remainder, and the divergence is cancelled by expressing
//! the bare coupling through the renormalized one, `c_a ≈ c - c²/(2a)`.

use crate::basis_matrix::{me_delta_zero_range, me_epsilon_sep, me_epsilon_zero_range, BasisModel};
use crate::error::{Error, Result};
use crate::exact_spectrum::{solve_limit_spectrum, ContactModel, Sector, SpectrumOptions};
use crate::ring_model::{
    kappa, renormalized_to_bare, BareCoupling, EpsilonCoupling, Parity, Regularization, RingConfig,
};
use crate::scalar::{CompensatedSum, Real};
use crate::series_kernels::{beta_of, kernel_tail, reciprocal_sum, KernelWeight};

/// Relative change allowed between the cutoffs `m_max` and `2 m_max`.
const CUTOFF_TOL: f64 = 1e-6;

/// First-order shift `coupling · ⟨n|V|n⟩` with the zero-range diagonal element.
///
/// δ only shifts even states and ε only odd ones; asking for the other sector
/// is an error rather than a silent zero.
pub fn first_order<T: Real>(model: BasisModel<T>, n: usize, sector: Parity, ring: &RingConfig<T>) -> Result<T> {
    match (model, sector) {
        (BasisModel::Delta(v), Parity::Even) => Ok(v.get() * me_delta_zero_range(n, n, sector, ring)?),
        (BasisModel::EpsilonSep(ca), Parity::Odd) => Ok(ca.get() * me_epsilon_zero_range(n, n, sector, ring)?),
        (BasisModel::Delta(_), Parity::Odd) => {
            Err(Error::SectorMismatch("the δ interaction acts on the even (+) sector".into()))
        }
        (BasisModel::EpsilonSep(_), Parity::Even) => {
            Err(Error::SectorMismatch("the ε interaction acts on the odd (-) sector".into()))
        }
    }
}

/// Coefficient of `v²` in the even-sector energy of mode `n ≥ 1`:
/// `(1/L²)[Σ′_{m≥1} 4/(κ_n² - κ_m²) + 2/κ_n²] = -1/(L²κ_n²)`.
pub fn second_order_delta<T: Real>(n: usize, ring: &RingConfig<T>) -> Result<T> {
    let l = ring.circumference();
    let kap2 = kappa(n, ring).powi(2);
    let unit = l / T::TAU();
    let sum = T::lit(4.0) * unit * unit * reciprocal_sum::<T>(n, false)?;
    Ok((sum + T::lit(2.0) / kap2) / (l * l))
}

/// Second-order ε sum `Σ′ |⟨n|E_a|m⟩|²/(κ_n² - κ_m²)`, the coefficient of `c_a²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SecondOrderEpsilon<T> {
    /// Asymptotic finite part `3κ²/L²`.
    pub finite_part: T,
    /// Asymptotic divergent part `-κ²/(La)`.
    pub divergent_part: T,
    /// Partial sum over `1 ≤ m ≤ m_max`, `m ≠ n`.
    pub truncated_value: T,
    /// Analytic remainder `Σ_{m>m_max}`.
    pub tail_estimate: T,
    pub m_max: usize,
}

impl<T: Real> SecondOrderEpsilon<T> {
    pub fn value(&self) -> T {
        self.truncated_value + self.tail_estimate
    }

    pub fn asymptote(&self) -> T {
        self.finite_part + self.divergent_part
    }
}

/// Smallest cutoff accepted by [`second_order_epsilon`], `4L/(2πa)`.
pub fn minimum_cutoff<T: Real>(a: Regularization<T>, ring: &RingConfig<T>) -> usize {
    let x = T::lit(4.0) / beta_of(a, ring);
    x.ceil().to_usize().unwrap_or(usize::MAX)
}

/// Evaluates the second-order ε sum with the separable matrix elements and
/// checks it against the doubled cutoff.
pub fn second_order_epsilon<T: Real>(
    n: usize,
    ring: &RingConfig<T>,
    a: Regularization<T>,
    m_max: usize,
) -> Result<SecondOrderEpsilon<T>> {
    if n == 0 {
        return Err(Error::invalid("n", "the odd sector starts at n = 1"));
    }
    let required = minimum_cutoff(a, ring).max(10 * n);
    if m_max < required {
        return Err(Error::CutoffTooSmall { m_max, required });
    }
    let l = ring.circumference();
    let kap2 = kappa(n, ring).powi(2);
    let beta = beta_of(a, ring);
    let prefactor = kap2 / (l * l);

    let mut acc = CompensatedSum::new();
    let mut coarse = None;
    for m in 1..=2 * m_max {
        if m != n {
            let me = me_epsilon_sep(m, n, Parity::Odd, a, ring)?;
            acc.add(me * me / (kap2 - kappa(m, ring).powi(2)));
        }
        if m == m_max {
            coarse = Some(acc.value());
        }
    }
    let truncated_value = coarse.expect("loop passes m_max");
    let tail_estimate = prefactor * kernel_tail(n, beta, m_max, KernelWeight::Resolvent);
    let fine = acc.value() + prefactor * kernel_tail(n, beta, 2 * m_max, KernelWeight::Resolvent);
    let value = truncated_value + tail_estimate;
    if (fine - value).abs() >= T::lit(CUTOFF_TOL) * value.abs() {
        return Err(Error::NoConvergence(format!(
            "second-order ε sum moved from {value} to {fine} when m_max was doubled from {m_max}"
        )));
    }
    Ok(SecondOrderEpsilon {
        finite_part: T::lit(3.0) * prefactor,
        divergent_part: -kap2 / (l * a.get()),
        truncated_value,
        tail_estimate,
        m_max,
    })
}

/// Second-order energies of odd mode `n` for `c_a E_a`.
///
/// `first_order`, `second_order_truncated`, `tail_estimate` and
/// `divergent_piece` belong to the bare series, so that
/// `bare_total = κ² + first_order + second_order_truncated + tail_estimate`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PerturbationReport<T> {
    pub n: usize,
    pub sector: Parity,
    pub c: T,
    pub a: T,
    pub c_a: T,
    pub first_order: T,
    pub second_order_truncated: T,
    pub m_max: usize,
    pub tail_estimate: T,
    /// `-c_a² κ²/(La)`
    pub divergent_piece: T,
    pub bare_total: T,
    /// Series in `c` after substituting `c_a = c - c²/(2a)` and keeping `O(c²)`.
    pub renormalized_total: T,
    /// Squared ε root of the zero-range condition.
    pub reference_exact: T,
}

/// Term-by-term view of the renormalized series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CancellationReport<T> {
    pub report: PerturbationReport<T>,
    /// `+κ²c²/(La)` produced by the first-order term through `c_a ≈ c - c²/(2a)`.
    pub counterterm: T,
    /// `-κ²c²/(La)` from the second-order sum.
    pub divergence: T,
    /// `counterterm + divergence`
    pub residual: T,
    /// `κ²(1 - 2c/L + 3c²/L²)`
    pub limit: T,
}

/// Refuses couplings outside `|c/(2a)| < 1/2`, where `c_a = 2ac/(2a + c)`
/// is not controlled by its expansion in `c/(2a)`.
pub fn check_regime<T: Real>(c: EpsilonCoupling<T>, a: Regularization<T>) -> Result<()> {
    let x = (c.get() / (T::lit(2.0) * a.get())).abs();
    if x < T::lit(0.5) {
        Ok(())
    } else {
        Err(Error::Regime(format!(
            "|c/(2a)| = {x} at c = {}, a = {}; the expansion of c_a needs |c/(2a)| < 1/2",
            c.get(),
            a.get()
        )))
    }
}

/// Second-order series in the bare coupling `c_a = 2ac/(2a + c)`, with the
/// numerically evaluated second-order sum.
pub fn bare_series<T: Real>(
    c: EpsilonCoupling<T>,
    a: Regularization<T>,
    ring: &RingConfig<T>,
    n: usize,
    m_max: usize,
) -> Result<PerturbationReport<T>> {
    Ok(assemble(c, a, ring, n, m_max)?.0)
}

/// Renormalized series, with the divergent pieces it cancels.
pub fn renormalized_series<T: Real>(
    c: EpsilonCoupling<T>,
    a: Regularization<T>,
    ring: &RingConfig<T>,
    n: usize,
    m_max: usize,
) -> Result<CancellationReport<T>> {
    let (report, second) = assemble(c, a, ring, n, m_max)?;
    let cv = c.get();
    let expanded = BareCoupling::new(cv - cv * cv / (T::lit(2.0) * a.get()))?;
    let counterterm = first_order(BasisModel::EpsilonSep(expanded), n, Parity::Odd, ring)?
        - first_order(BasisModel::EpsilonSep(BareCoupling::new(cv)?), n, Parity::Odd, ring)?;
    let divergence = cv * cv * second.divergent_part;
    let x = cv / ring.circumference();
    let kap2 = kappa(n, ring).powi(2);
    Ok(CancellationReport {
        report,
        counterterm,
        divergence,
        residual: counterterm + divergence,
        limit: kap2 * (T::one() - T::lit(2.0) * x + T::lit(3.0) * x * x),
    })
}

fn assemble<T: Real>(
    c: EpsilonCoupling<T>,
    a: Regularization<T>,
    ring: &RingConfig<T>,
    n: usize,
    m_max: usize,
) -> Result<(PerturbationReport<T>, SecondOrderEpsilon<T>)> {
    check_regime(c, a)?;
    let ca = renormalized_to_bare(c, a)?;
    let second = second_order_epsilon(n, ring, a, m_max)?;
    let kap2 = kappa(n, ring).powi(2);
    let (cv, cav) = (c.get(), ca.get());
    let first = first_order(BasisModel::EpsilonSep(ca), n, Parity::Odd, ring)?;
    let second_order_truncated = cav * cav * second.truncated_value;
    let tail_estimate = cav * cav * second.tail_estimate;
    let expanded = BareCoupling::new(cv - cv * cv / (T::lit(2.0) * a.get()))?;
    let renormalized_total =
        kap2 + first_order(BasisModel::EpsilonSep(expanded), n, Parity::Odd, ring)? + cv * cv * second.value();
    let reference_exact = solve_limit_spectrum(ContactModel::Epsilon(c), ring, n, &SpectrumOptions::default())?
        .state(Sector::Odd, n)
        .ok_or_else(|| Error::NoConvergence(format!("no odd ε root with index {n}")))?
        .energy;
    let report = PerturbationReport {
        n,
        sector: Parity::Odd,
        c: cv,
        a: a.get(),
        c_a: cav,
        first_order: first,
        second_order_truncated,
        m_max,
        tail_estimate,
        divergent_piece: cav * cav * second.divergent_part,
        bare_total: kap2 + first + second_order_truncated + tail_estimate,
        renormalized_total,
        reference_exact,
    };
    Ok((report, second))
}

/// Coefficients of `y ≈ constant + inverse/a (+ linear·a)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DivergenceFit<T> {
    pub constant: T,
    pub inverse: T,
    pub linear: Option<T>,
}

/// Least-squares fit of `(a, y)` pairs to `α + β/a`, or `α + β/a + γa` with
/// `linear`. Needs at least as many points as coefficients.
pub fn fit_divergence<T: Real>(points: &[(T, T)], linear: bool) -> Result<DivergenceFit<T>> {
    let dim = if linear { 3 } else { 2 };
    if points.len() < dim {
        return Err(Error::invalid("points", format!("need at least {dim} points, got {}", points.len())));
    }
    let basis = |a: T| [T::one(), a.recip(), a];
    let mut normal = [[T::zero(); 4]; 3];
    for &(a, y) in points {
        if !(a > T::zero()) {
            return Err(Error::invalid("points", format!("widths must be positive, got {a}")));
        }
        let f = basis(a);
        for i in 0..dim {
            for j in 0..dim {
                normal[i][j] = normal[i][j] + f[i] * f[j];
            }
            normal[i][3] = normal[i][3] + f[i] * y;
        }
    }
    let coef = solve_small(&mut normal, dim)?;
    Ok(DivergenceFit { constant: coef[0], inverse: coef[1], linear: linear.then_some(coef[2]) })
}

// Gaussian elimination with partial pivoting on an augmented system.
fn solve_small<T: Real>(m: &mut [[T; 4]; 3], dim: usize) -> Result<[T; 3]> {
    for col in 0..dim {
        let pivot = (col..dim)
            .max_by(|&i, &j| m[i][col].abs().partial_cmp(&m[j][col].abs()).unwrap_or(std::cmp::Ordering::Equal))
            .unwrap_or(col);
        m.swap(col, pivot);
        if m[col][col].abs() <= T::epsilon() {
            return Err(Error::invalid("points", "fit is degenerate; use distinct widths"));
        }
        for row in col + 1..dim {
            let f = m[row][col] / m[col][col];
            for k in col..4 {
                m[row][k] = m[row][k] - f * m[col][k];
            }
        }
    }
    let mut x = [T::zero(); 3];
    for row in (0..dim).rev() {
        let mut s = m[row][3];
        for k in row + 1..dim {
            s = s - m[row][k] * x[k];
        }
        x[row] = s / m[row][row];
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis_matrix::me_epsilon_zero_range;
    use crate::exact_spectrum::{delta_expansion, epsilon_expansion};
    use crate::ring_model::DeltaCoupling;

    fn ring() -> RingConfig<f64> {
        RingConfig::two_pi()
    }

    fn reg(a: f64) -> Regularization<f64> {
        Regularization::new(a).unwrap()
    }

    fn eps(c: f64) -> EpsilonCoupling<f64> {
        EpsilonCoupling::new(c).unwrap()
    }

    #[test]
    fn first_order_examples() {
        let r = ring();
        let pi = std::f64::consts::PI;
        let d = first_order(BasisModel::Delta(DeltaCoupling::new(0.1).unwrap()), 1, Parity::Even, &r).unwrap();
        assert!((d - 0.1 / pi).abs() < 1e-15);
        let e = first_order(BasisModel::EpsilonSep(BareCoupling::new(0.1).unwrap()), 1, Parity::Odd, &r).unwrap();
        assert!((e + 0.1 / pi).abs() < 1e-15);
        assert_eq!(e, 0.1 * me_epsilon_zero_range(1, 1, Parity::Odd, &r).unwrap());
        let zero = first_order(BasisModel::EpsilonSep(BareCoupling::new(0.0).unwrap()), 3, Parity::Odd, &r).unwrap();
        assert_eq!(zero, 0.0);
        assert!(matches!(
            first_order(BasisModel::Delta(DeltaCoupling::new(0.1).unwrap()), 1, Parity::Odd, &r),
            Err(Error::SectorMismatch(_))
        ));
        assert!(matches!(
            first_order(BasisModel::EpsilonSep(BareCoupling::new(0.1).unwrap()), 1, Parity::Even, &r),
            Err(Error::SectorMismatch(_))
        ));
    }

    #[test]
    fn delta_chain_reproduces_expansion() {
        let r = RingConfig::new(3.7f64).unwrap();
        for n in 1..=5 {
            let coeff = second_order_delta(n, &r).unwrap();
            let k2 = r.kappa(n).powi(2);
            let want = -1.0 / (3.7f64.powi(2) * k2);
            assert!((coeff - want).abs() < 1e-10 * want.abs().max(1.0));
            let v = DeltaCoupling::new(0.3).unwrap();
            let chain = k2 + first_order(BasisModel::Delta(v), n, Parity::Even, &r).unwrap() + 0.09 * coeff;
            assert!((chain - delta_expansion(v, &r, n).unwrap()).abs() < 1e-12);
        }
        let c1 = second_order_delta(1, &ring()).unwrap();
        assert!((c1 + 0.025_330_3).abs() < 1e-7);
        assert!(second_order_delta::<f64>(0, &ring()).is_err());
    }

    #[test]
    fn second_order_epsilon_matches_direct_sums() {
        // direct sums to 2·10⁷ terms with an averaged envelope remainder
        let r = ring();
        for (a, want) in [(0.1, -1.500_557_143_897_6), (0.05, -3.099_370_322_317_8), (0.025, -6.286_281_879_730_3)] {
            let s = second_order_epsilon(1, &r, reg(a), 4000).unwrap();
            assert!((s.value() - want).abs() < 1e-8, "a = {a}: {}", s.value());
        }
        let s = second_order_epsilon(1, &r, reg(0.05), 4000).unwrap();
        assert!(((s.value() + 3.107_11) / 3.107_11).abs() < 0.02);
        assert!((s.asymptote() + 3.107_108).abs() < 1e-5);
        let s2 = second_order_epsilon(2, &r, reg(0.05), 4000).unwrap();
        assert!((s2.finite_part - 0.303_964).abs() < 1e-6);
    }

    #[test]
    fn divergent_part_scales_inversely_with_width() {
        let r = ring();
        let a = second_order_epsilon(1, &r, reg(0.05), 4000).unwrap();
        let b = second_order_epsilon(1, &r, reg(0.025), 4000).unwrap();
        assert!((b.divergent_part / a.divergent_part - 2.0).abs() < 1e-14);
        assert!(matches!(
            second_order_epsilon(1, &r, reg(0.01), 100),
            Err(Error::CutoffTooSmall { required: 400, .. })
        ));
    }

    #[test]
    fn bare_series_example() {
        let r = ring();
        let rep = bare_series(eps(0.001), reg(0.05), &r, 1, 4000).unwrap();
        assert!((rep.c_a - 0.000_990_099).abs() < 1e-9);
        assert!((rep.bare_total - 0.999_681_8).abs() < 1e-7);
        let sum = 1.0 + rep.first_order + rep.second_order_truncated + rep.tail_estimate;
        assert!((rep.bare_total - sum).abs() < 1e-15);
        assert!((rep.bare_total - rep.renormalized_total).abs() <= 5e-8);
        let free = bare_series(eps(0.0), reg(0.05), &r, 1, 4000).unwrap();
        assert!((free.bare_total - 1.0).abs() < 1e-15);
        assert!((free.renormalized_total - 1.0).abs() < 1e-15);
    }

    #[test]
    fn divergent_piece_doubles_at_fixed_bare_coupling() {
        // c chosen per width so that c_a stays at 1e-3
        let r = ring();
        let ca = 1e-3;
        let piece = |a: f64| {
            let c = 2.0 * a * ca / (2.0 * a - ca);
            bare_series(eps(c), reg(a), &r, 1, 4000).unwrap().divergent_piece
        };
        let ratio = piece(0.025) / piece(0.05);
        assert!((ratio - 2.0).abs() < 0.02, "{ratio}");
    }

    #[test]
    fn renormalized_series_is_width_independent() {
        let r = ring();
        let c = 0.001;
        let widths = [0.1, 0.05, 0.025];
        let totals: Vec<f64> = widths
            .iter()
            .map(|&a| renormalized_series(eps(c), reg(a), &r, 1, 4000).unwrap().report.renormalized_total)
            .collect();
        for t in &totals {
            assert!((t - 0.999_681_77).abs() < 1e-7, "{t}");
        }
        for (i, w) in widths.windows(2).enumerate() {
            let bound = 10.0 * w[0] * c * c / std::f64::consts::TAU;
            assert!((totals[i] - totals[i + 1]).abs() <= bound);
        }
        let rep = renormalized_series(eps(c), reg(0.05), &r, 1, 4000).unwrap();
        assert!(rep.residual.abs() < 1e-18, "{rep:?}");
        assert!((rep.counterterm - c * c / (std::f64::consts::TAU * 0.05)).abs() < 1e-16);
        assert_eq!(rep.limit, epsilon_expansion(eps(c), &r, 1).unwrap());
    }

    #[test]
    fn renormalized_series_tracks_exact_level() {
        let r = ring();
        for c in [0.001, -0.002, 0.01] {
            for a in [0.1, 0.05] {
                let rep = renormalized_series(eps(c), reg(a), &r, 1, 4000).unwrap().report;
                let x = c / std::f64::consts::TAU;
                let bound = 10.0 * x.abs().powi(3) + 10.0 * a * c * c / std::f64::consts::TAU;
                assert!((rep.renormalized_total - rep.reference_exact).abs() <= bound, "{rep:?}");
            }
        }
    }

    #[test]
    fn regime_gate() {
        let r = ring();
        assert!(matches!(bare_series(eps(0.06), reg(0.05), &r, 1, 4000), Err(Error::Regime(_))));
        assert!(matches!(renormalized_series(eps(-0.05), reg(0.05), &r, 1, 4000), Err(Error::Regime(_))));
    }

    #[test]
    fn divergence_fit_recovers_coefficients() {
        let r = ring();
        let points: Vec<(f64, f64)> = [0.1, 0.05, 0.025]
            .iter()
            .map(|&a| (a, second_order_epsilon(1, &r, reg(a), 4000).unwrap().value()))
            .collect();
        let l = std::f64::consts::TAU;
        let finite = 3.0 / (l * l);
        for linear in [false, true] {
            let fit = fit_divergence(&points, linear).unwrap();
            assert!(((fit.inverse + 1.0 / l) * l).abs() < 0.02, "{fit:?}");
        }
        // the O(a) remainder biases the constant of the two-term fit
        let full = fit_divergence(&points, true).unwrap();
        assert!(((full.constant - finite) / finite).abs() < 0.05, "{full:?}");
        let exact = fit_divergence(&[(1.0f64, 6.0), (2.0, 5.0), (4.0, 6.0)], true).unwrap();
        assert!((exact.constant - 1.0).abs() < 1e-12);
        assert!((exact.inverse - 4.0).abs() < 1e-12);
        assert!((exact.linear.unwrap() - 1.0).abs() < 1e-12);
        assert!(fit_divergence(&points[..1], false).is_err());
    }
}
