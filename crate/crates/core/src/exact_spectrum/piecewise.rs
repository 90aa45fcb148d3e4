use crate::error::{Error, Result};
use crate::ring_model::{DeltaCoupling, EpsilonCoupling, Regularization, RingConfig};
use crate::roots::{scan_all_roots, scan_roots, scan_roots_with_touching, Root};
use crate::scalar::{sinc, Real};

use super::{label_sector, scan_step, Method, Sector, SpectrumOptions, SpectrumResult};

/// One piece of a ring potential, listed from `x = -L/2` to `x = L/2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Element<T> {
    Free { width: T },
    /// Flat potential of the given height (energy units).
    Constant { width: T, height: T },
    /// `g δ(x - x₀)`: `ψ` continuous, `ψ'` jumps by `g ψ(x₀)`.
    Spike { strength: T },
}

impl<T: Real> Element<T> {
    pub fn width(&self) -> T {
        match *self {
            Element::Free { width } | Element::Constant { width, .. } => width,
            Element::Spike { .. } => T::zero(),
        }
    }

    fn with_width(self, width: T) -> Self {
        match self {
            Element::Free { .. } => Element::Free { width },
            Element::Constant { height, .. } => Element::Constant { width, height },
            spike => spike,
        }
    }

    fn mirrors(&self, other: &Self, tol: T) -> bool {
        let close = |a: T, b: T| (a - b).abs() <= tol * (T::one() + a.abs().max(b.abs()));
        match (*self, *other) {
            (Element::Free { width: a }, Element::Free { width: b }) => close(a, b),
            (Element::Constant { width: a, height: h }, Element::Constant { width: b, height: g }) => {
                close(a, b) && close(h, g)
            }
            (Element::Spike { strength: a }, Element::Spike { strength: b }) => close(a, b),
            _ => false,
        }
    }

    fn is_finite(&self) -> bool {
        match *self {
            Element::Free { width } => width.is_finite(),
            Element::Constant { width, height } => width.is_finite() && height.is_finite(),
            Element::Spike { strength } => strength.is_finite(),
        }
    }
}

/// A potential on the ring as an ordered list of elements tiling `[-L/2, L/2]`.
#[derive(Debug, Clone, PartialEq)]
pub struct PiecewiseSystem<T> {
    elements: Vec<Element<T>>,
    symmetric: bool,
    circumference: T,
}

impl<T: Real> PiecewiseSystem<T> {
    /// Validates the tiling and, when `symmetric` is requested, that the list
    /// reads the same backwards.
    pub fn new(elements: Vec<Element<T>>, symmetric: bool, ring: &RingConfig<T>) -> Result<Self> {
        if let Some(bad) = elements.iter().find(|e| !e.is_finite()) {
            return Err(Error::invalid("elements", format!("non-finite element {bad:?}")));
        }
        if elements.iter().any(|e| e.width() < T::zero()) {
            return Err(Error::invalid("elements", "segment widths must be non-negative"));
        }
        let total: T = elements.iter().map(|e| e.width()).fold(T::zero(), |a, w| a + w);
        let l = ring.circumference();
        if (total - l).abs() > T::tol_floor(1e-12) * l {
            return Err(Error::WidthMismatch {
                total: total.as_f64(),
                circumference: l.as_f64(),
            });
        }
        let tol = T::tol_floor(1e-12);
        let n = elements.len();
        if symmetric && !(0..n / 2).all(|i| elements[i].mirrors(&elements[n - 1 - i], tol)) {
            return Err(Error::invalid("symmetric", "element list is not mirror-symmetric about x = 0"));
        }
        Ok(Self { elements, symmetric, circumference: l })
    }

    pub fn elements(&self) -> &[Element<T>] {
        &self.elements
    }

    pub fn is_symmetric(&self) -> bool {
        self.symmetric
    }

    pub fn circumference(&self) -> T {
        self.circumference
    }

    /// Elements covering `(0, L/2]` plus the strength of a spike sitting at
    /// `x = 0`, if any.
    fn right_half(&self) -> Result<(Vec<Element<T>>, T)> {
        let half = self.circumference / T::lit(2.0);
        let eps = T::tol_floor(1e-12) * self.circumference;
        let mut x = -half;
        let mut out = Vec::new();
        let mut central = T::zero();
        for e in &self.elements {
            match *e {
                Element::Spike { strength } => {
                    if x.abs() <= eps {
                        central = central + strength;
                    } else if (x - half).abs() <= eps || (x + half).abs() <= eps {
                        return Err(Error::invalid("elements", "half-ring shooting needs no spike at x = ±L/2"));
                    } else if x > T::zero() {
                        out.push(*e);
                    }
                }
                seg => {
                    let w = seg.width();
                    let lo = x.max(T::zero());
                    let hi = (x + w).min(half);
                    if hi - lo > T::zero() {
                        out.push(seg.with_width(hi - lo));
                    }
                    x = x + w;
                }
            }
        }
        Ok((out, central))
    }

    fn potential_bounds(&self) -> (T, T) {
        // (most negative flat height, summed attractive spike strength)
        let mut v_min = T::zero();
        let mut attract = T::zero();
        for e in &self.elements {
            match *e {
                Element::Constant { height, .. } => v_min = v_min.min(height),
                Element::Spike { strength } if strength < T::zero() => attract = attract - strength,
                _ => {}
            }
        }
        (v_min, attract)
    }

    fn max_height(&self) -> T {
        self.elements
            .iter()
            .map(|e| match *e {
                Element::Constant { height, .. } => height,
                _ => T::zero(),
            })
            .fold(T::zero(), |a, h| a.max(h))
    }
}

/// Square barrier `v Δ_a`: height `v/(2a)` over `[-a, a]`.
pub fn build_delta_finite<T: Real>(
    v: DeltaCoupling<T>,
    a: Regularization<T>,
    ring: &RingConfig<T>,
) -> Result<PiecewiseSystem<T>> {
    let a = a.within(ring)?.get();
    let two = T::lit(2.0);
    let outer = ring.half() - a;
    let elements = vec![
        Element::Free { width: outer },
        Element::Constant { width: two * a, height: v.get() / (two * a) },
        Element::Free { width: outer },
    ];
    PiecewiseSystem::new(elements, true, ring)
}

/// Three-spike local realization of the ε interaction: strength `2/c - 1/a`
/// at `x = ±a` and `c/a²` at the origin.
pub fn build_epsilon_finite<T: Real>(
    c: EpsilonCoupling<T>,
    a: Regularization<T>,
    ring: &RingConfig<T>,
) -> Result<PiecewiseSystem<T>> {
    let a = a.within(ring)?.get();
    let c = c.get();
    if c == T::zero() {
        return Err(Error::invalid("c", "the three-spike realization needs c != 0"));
    }
    let outer = T::lit(2.0) / c - T::one() / a;
    let centre = c / (a * a);
    let edge = ring.half() - a;
    let elements = vec![
        Element::Free { width: edge },
        Element::Spike { strength: outer },
        Element::Free { width: a },
        Element::Spike { strength: centre },
        Element::Free { width: a },
        Element::Spike { strength: outer },
        Element::Free { width: edge },
    ];
    PiecewiseSystem::new(elements, true, ring)
}

/// 2×2 map of `(ψ, ψ')` across an element.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransferMatrix<T> {
    pub m11: T,
    pub m12: T,
    pub m21: T,
    pub m22: T,
}

impl<T: Real> TransferMatrix<T> {
    pub fn identity() -> Self {
        Self { m11: T::one(), m12: T::zero(), m21: T::zero(), m22: T::one() }
    }

    pub fn det(&self) -> T {
        self.m11 * self.m22 - self.m12 * self.m21
    }

    pub fn trace(&self) -> T {
        self.m11 + self.m22
    }

    /// `self · rhs`: apply `rhs` first.
    pub fn mul(&self, rhs: &Self) -> Self {
        Self {
            m11: self.m11 * rhs.m11 + self.m12 * rhs.m21,
            m12: self.m11 * rhs.m12 + self.m12 * rhs.m22,
            m21: self.m21 * rhs.m11 + self.m22 * rhs.m21,
            m22: self.m21 * rhs.m12 + self.m22 * rhs.m22,
        }
    }

    pub fn apply(&self, (psi, dpsi): (T, T)) -> (T, T) {
        (self.m11 * psi + self.m12 * dpsi, self.m21 * psi + self.m22 * dpsi)
    }

    fn max_abs(&self) -> T {
        self.m11.abs().max(self.m12.abs()).max(self.m21.abs()).max(self.m22.abs())
    }

    fn scale(&self, s: T) -> Self {
        Self { m11: self.m11 * s, m12: self.m12 * s, m21: self.m21 * s, m22: self.m22 * s }
    }
}

/// Transfer matrix at energy `k²`.
pub fn transfer_matrix<T: Real>(element: &Element<T>, k: T) -> TransferMatrix<T> {
    transfer_matrix_at_energy(element, k * k)
}

/// Transfer matrix at any real energy; below the local potential the
/// hyperbolic branch is used, and at `E = V` the linear limit.
pub fn transfer_matrix_at_energy<T: Real>(element: &Element<T>, energy: T) -> TransferMatrix<T> {
    segment_matrix(element, energy, false)
}

// With `scaled`, hyperbolic segments are multiplied by e^{-γw} so that long
// evanescent stretches cannot overflow; the factor is positive and continuous
// in the energy, so signs of shooting mismatches are unchanged.
fn segment_matrix<T: Real>(element: &Element<T>, energy: T, scaled: bool) -> TransferMatrix<T> {
    let (width, height) = match *element {
        Element::Spike { strength } => {
            return TransferMatrix { m11: T::one(), m12: T::zero(), m21: strength, m22: T::one() }
        }
        Element::Free { width } => (width, T::zero()),
        Element::Constant { width, height } => (width, height),
    };
    let s = energy - height;
    let x = s.abs().sqrt() * width;
    let (c, sh) = if s >= T::zero() {
        (x.cos(), sinc(x))
    } else if scaled {
        let e2 = (-(T::lit(2.0) * x)).exp();
        let shc = if x < T::lit(1e-4) {
            T::one() - x + T::lit(2.0 / 3.0) * x * x
        } else {
            -(-(T::lit(2.0) * x)).exp_m1() / (T::lit(2.0) * x)
        };
        ((T::one() + e2) / T::lit(2.0), shc)
    } else {
        let shc = if x < T::lit(1e-4) { T::one() + x * x / T::lit(6.0) } else { x.sinh() / x };
        (x.cosh(), shc)
    };
    TransferMatrix { m11: c, m12: width * sh, m21: -s * width * sh, m22: c }
}

fn propagate<T: Real>(elements: &[Element<T>], energy: T, mut v: (T, T)) -> (T, T) {
    for e in elements {
        v = segment_matrix(e, energy, true).apply(v);
        let norm = v.0.abs().max(v.1.abs());
        if norm > T::zero() && norm.is_finite() {
            v = (v.0 / norm, v.1 / norm);
        }
    }
    v
}

/// Full-ring monodromy as `(M̃, σ)` with `M = e^σ M̃`.
fn scaled_monodromy<T: Real>(elements: &[Element<T>], energy: T) -> (TransferMatrix<T>, T) {
    let mut m = TransferMatrix::identity();
    let mut log_scale = T::zero();
    for e in elements {
        m = segment_matrix(e, energy, true).mul(&m);
        log_scale = log_scale + hyperbolic_exponent(e, energy);
        let norm = m.max_abs();
        if norm > T::lit(1e8) || (norm < T::lit(1e-8) && norm > T::zero()) {
            log_scale = log_scale + norm.ln();
            m = m.scale(T::one() / norm);
        }
    }
    (m, log_scale)
}

// γw, the exponent removed from a scaled hyperbolic segment.
fn hyperbolic_exponent<T: Real>(e: &Element<T>, energy: T) -> T {
    let (width, height) = match *e {
        Element::Free { width } => (width, T::zero()),
        Element::Constant { width, height } => (width, height),
        Element::Spike { .. } => return T::zero(),
    };
    let s = energy - height;
    if s < T::zero() {
        (-s).sqrt() * width
    } else {
        T::zero()
    }
}

/// Lowest `count` states of each parity sector (or `count` states of the whole
/// ring for a non-symmetric system).
///
/// Symmetric systems are solved by shooting across half the ring. Even states
/// start at `0⁺` with `(ψ, ψ') = (1, g₀/2)`, `g₀` being the strength of a spike
/// at the origin, and must satisfy `ψ'(L/2) = 0`; odd states start from `(0, 1)`
/// and must satisfy `ψ(L/2) = 0`. Other systems use the periodicity condition
/// `Tr M(E) = 2` of the full-ring monodromy, where a touching minimum of
/// `|Tr M - 2|` with `M ≈ I` counts as a degenerate pair.
pub fn ring_spectrum<T: Real>(
    system: &PiecewiseSystem<T>,
    ring: &RingConfig<T>,
    count: usize,
    opts: &SpectrumOptions<T>,
) -> Result<SpectrumResult<T>> {
    if count == 0 {
        return Err(Error::invalid("count", "need at least one root"));
    }
    let l = ring.circumference();
    if (system.circumference() - l).abs() > T::tol_floor(1e-12) * l {
        return Err(Error::WidthMismatch {
            total: system.circumference().as_f64(),
            circumference: l.as_f64(),
        });
    }
    let step = scan_step(l);
    let k_limit = (ring.kappa(count + 3).powi(2) + system.max_height()).sqrt() + ring.kappa(2);
    let (v_min, attract) = system.potential_bounds();
    let gamma_limit = (-v_min).sqrt().max(attract) + ring.kappa(1);
    let attractive = v_min < T::zero() || attract > T::zero();
    let search_bound = opts.include_bound && attractive;

    if !system.is_symmetric() {
        // no parity splitting, so doublets may be arbitrarily close
        let fine = step / T::lit(4.0);
        return full_ring_spectrum(system, ring, count, opts, fine, k_limit, search_bound, gamma_limit);
    }

    let (half, g0) = system.right_half()?;
    let sectors: [(Sector, (T, T)); 2] = [
        (Sector::Even, (T::one(), g0 / T::lit(2.0))),
        (Sector::Odd, (T::zero(), T::one())),
    ];
    let mut roots = Vec::new();
    for (sector, start) in sectors {
        let mismatch = |energy: T| {
            let (psi, dpsi) = propagate(&half, energy, start);
            if sector == Sector::Even {
                dpsi
            } else {
                psi
            }
        };
        let mut states: Vec<(T, T, T)> = Vec::new();
        if search_bound {
            let f = |g: T| mismatch(-g * g);
            for r in scan_all_roots(f, T::zero(), step, gamma_limit, true, &opts.roots)? {
                states.push((-r.x * r.x, r.x, r.residual));
            }
        }
        let wanted = count.saturating_sub(states.len());
        let f = |k: T| mismatch(k * k);
        let skip_zero = sector == Sector::Odd;
        for r in scan_roots(f, T::zero(), step, k_limit, wanted, skip_zero, &opts.roots)? {
            states.push((r.x * r.x, r.x, r.residual));
        }
        roots.extend(label_sector(sector, states, count));
    }
    Ok(SpectrumResult::from_roots(roots, Method::TransferMatrix))
}

#[allow(clippy::too_many_arguments)]
fn full_ring_spectrum<T: Real>(
    system: &PiecewiseSystem<T>,
    ring: &RingConfig<T>,
    count: usize,
    opts: &SpectrumOptions<T>,
    step: T,
    k_limit: T,
    search_bound: bool,
    gamma_limit: T,
) -> Result<SpectrumResult<T>> {
    let elements = system.elements();
    let f_energy = |energy: T| {
        let (m, log_scale) = scaled_monodromy(elements, energy);
        m.trace() - T::lit(2.0) * (-log_scale).exp()
    };
    let touch_tol = T::tol_floor(1e-8);
    let near_identity = |energy: T| {
        let (m, log_scale) = scaled_monodromy(elements, energy);
        log_scale < T::lit(30.0) && {
            let m = m.scale(log_scale.exp());
            let d = TransferMatrix {
                m11: m.m11 - T::one(),
                m12: m.m12 / ring.circumference(),
                m21: m.m21 * ring.circumference(),
                m22: m.m22 - T::one(),
            };
            d.max_abs() <= T::tol_floor(1e-6)
        }
    };
    let mut states: Vec<(T, T, T)> = Vec::new();
    let push = |r: &Root<T>, energy: T, states: &mut Vec<(T, T, T)>| {
        let k = energy.abs().sqrt();
        states.push((energy, k, r.residual));
        if near_identity(energy) && energy != T::zero() {
            states.push((energy, k, r.residual));
        }
    };
    if search_bound {
        let f = |g: T| f_energy(-g * g);
        for r in scan_roots_with_touching(f, step, step, gamma_limit, touch_tol, &opts.roots)? {
            push(&r, -r.x * r.x, &mut states);
        }
    }
    let f = |k: T| f_energy(k * k);
    let mut limit = k_limit;
    loop {
        let found = scan_roots_with_touching(f, T::zero(), step, limit, touch_tol, &opts.roots)?;
        let mut trial = states.clone();
        for r in &found {
            push(r, r.x * r.x, &mut trial);
        }
        if trial.len() >= count || limit > k_limit * T::lit(8.0) {
            if trial.len() < count {
                return Err(Error::NoConvergence(format!(
                    "found only {} of {} ring states below k = {}",
                    trial.len(),
                    count,
                    limit
                )));
            }
            states = trial;
            break;
        }
        limit = limit * T::lit(2.0);
    }
    let roots = label_sector(Sector::Full, states, count);
    Ok(SpectrumResult::from_roots(roots, Method::TransferMatrix))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_spectrum::{solve_limit_spectrum, ContactModel};

    fn ring() -> RingConfig<f64> {
        RingConfig::two_pi()
    }

    fn reg(a: f64) -> Regularization<f64> {
        Regularization::new(a).unwrap()
    }

    #[test]
    fn free_segment_zero_energy_is_linear() {
        let m = transfer_matrix(&Element::Free { width: 0.7 }, 0.0);
        assert_eq!(m, TransferMatrix { m11: 1.0, m12: 0.7, m21: 0.0, m22: 1.0 });
    }

    #[test]
    fn spike_matrix() {
        let m = transfer_matrix(&Element::Spike { strength: 2.0 }, 3.0);
        assert_eq!(m, TransferMatrix { m11: 1.0, m12: 0.0, m21: 2.0, m22: 1.0 });
        assert_eq!(m.det(), 1.0);
    }

    #[test]
    fn barrier_below_top_is_hyperbolic() {
        let m = transfer_matrix(&Element::Constant { width: 0.2, height: 5.0 }, 1.0);
        // γ = 2, γw = 0.4
        assert!((m.m11 - 0.4f64.cosh()).abs() < 1e-14);
        assert!((m.m12 - 0.4f64.sinh() / 2.0).abs() < 1e-14);
        assert!((m.m21 - 2.0 * 0.4f64.sinh()).abs() < 1e-14);
        assert!((m.det() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn scaled_hyperbolic_is_positive_multiple() {
        let e = Element::Constant { width: 0.3, height: 40.0 };
        let plain = segment_matrix(&e, 4.0, false);
        let scaled = segment_matrix(&e, 4.0, true);
        let factor = (-(36.0f64.sqrt() * 0.3)).exp();
        for (p, s) in [(plain.m11, scaled.m11), (plain.m12, scaled.m12), (plain.m21, scaled.m21)] {
            assert!((p * factor - s).abs() < 1e-14 * p.abs().max(1.0));
        }
    }

    #[test]
    fn builders_follow_the_layouts() {
        let r = ring();
        let d = build_delta_finite(DeltaCoupling::new(1.0).unwrap(), reg(0.1), &r).unwrap();
        assert_eq!(d.elements()[1], Element::Constant { width: 0.2, height: 5.0 });
        let total: f64 = d.elements().iter().map(|e| e.width()).sum();
        assert!((total - r.circumference()).abs() < 1e-14);

        let e = build_epsilon_finite(EpsilonCoupling::new(0.1).unwrap(), reg(0.01), &r).unwrap();
        let strengths: Vec<f64> = e
            .elements()
            .iter()
            .filter_map(|x| match x {
                Element::Spike { strength } => Some(*strength),
                _ => None,
            })
            .collect();
        assert!((strengths[0] + 80.0).abs() < 1e-10 && (strengths[1] - 1000.0).abs() < 1e-9);
        assert_eq!(strengths[0], strengths[2]);

        let neg = build_epsilon_finite(EpsilonCoupling::new(-0.1).unwrap(), reg(0.01), &r).unwrap();
        match (neg.elements()[1], neg.elements()[3]) {
            (Element::Spike { strength: o }, Element::Spike { strength: c }) => {
                assert!((o + 120.0).abs() < 1e-10 && (c + 1000.0).abs() < 1e-9);
            }
            _ => unreachable!(),
        }
        let vanishing = build_epsilon_finite(EpsilonCoupling::new(0.02).unwrap(), reg(0.01), &r).unwrap();
        assert!(matches!(vanishing.elements()[1], Element::Spike { strength } if strength.abs() < 1e-12));
        assert!(build_epsilon_finite(EpsilonCoupling::new(0.0).unwrap(), reg(0.01), &r).is_err());
        assert!(build_delta_finite(DeltaCoupling::new(0.1).unwrap(), reg(2.0), &r).is_err());
    }

    #[test]
    fn tiling_and_symmetry_are_checked() {
        let r = ring();
        let short = vec![Element::Free { width: 1.0 }];
        assert!(matches!(PiecewiseSystem::new(short, false, &r), Err(Error::WidthMismatch { .. })));
        let l = r.circumference();
        let lopsided = vec![
            Element::Free { width: 1.0 },
            Element::Spike { strength: 1.0 },
            Element::Free { width: l - 1.0 },
        ];
        assert!(PiecewiseSystem::new(lopsided.clone(), true, &r).is_err());
        assert!(PiecewiseSystem::new(lopsided, false, &r).is_ok());
    }

    #[test]
    fn free_ring_gives_doublets_in_both_solvers() {
        let r = ring();
        let l = r.circumference();
        let opts = SpectrumOptions::default();
        let sym = PiecewiseSystem::new(vec![Element::Free { width: l }], true, &r).unwrap();
        let s = ring_spectrum(&sym, &r, 3, &opts).unwrap();
        for n in 1..3 {
            assert!((s.state(Sector::Even, n).unwrap().k - n as f64).abs() < 1e-11);
            assert!((s.state(Sector::Odd, n).unwrap().k - n as f64).abs() < 1e-11);
        }
        assert_eq!(s.state(Sector::Even, 0).unwrap().k, 0.0);

        let full = PiecewiseSystem::new(vec![Element::Free { width: l }], false, &r).unwrap();
        let f = ring_spectrum(&full, &r, 5, &opts).unwrap();
        let ks: Vec<f64> = f.roots.iter().map(|x| x.k).collect();
        for (k, e) in ks.iter().zip([0.0, 1.0, 1.0, 2.0, 2.0]) {
            assert!((k - e).abs() < 1e-6, "{ks:?}");
        }
    }

    #[test]
    fn off_centre_spike_matches_shifted_symmetric_spectrum() {
        // translation invariance on the ring
        let r = ring();
        let l = r.circumference();
        let opts = SpectrumOptions::default();
        let sym = PiecewiseSystem::new(
            vec![Element::Free { width: l / 2.0 }, Element::Spike { strength: 0.7 }, Element::Free { width: l / 2.0 }],
            true,
            &r,
        )
        .unwrap();
        let shifted = PiecewiseSystem::new(
            vec![Element::Free { width: 1.0 }, Element::Spike { strength: 0.7 }, Element::Free { width: l - 1.0 }],
            false,
            &r,
        )
        .unwrap();
        let a = ring_spectrum(&sym, &r, 3, &opts).unwrap().energies();
        let b = ring_spectrum(&shifted, &r, 5, &opts).unwrap().energies();
        for (x, y) in a.iter().zip(&b) {
            assert!((x - y).abs() < 1e-6, "{a:?} {b:?}");
        }
    }

    #[test]
    fn narrow_barrier_approaches_delta_limit() {
        let r = ring();
        let opts = SpectrumOptions::default();
        let v = DeltaCoupling::new(0.1).unwrap();
        let sys = build_delta_finite(v, reg(1e-4), &r).unwrap();
        let s = ring_spectrum(&sys, &r, 2, &opts).unwrap();
        assert!((s.state(Sector::Even, 1).unwrap().energy - 1.031559).abs() < 1e-4);
        // odd states see the barrier only through the node region
        assert!((s.state(Sector::Odd, 1).unwrap().k - 1.0).abs() < 1e-6);
    }

    #[test]
    fn three_spike_odd_root_converges_linearly() {
        let r = ring();
        let opts = SpectrumOptions::default();
        let c = EpsilonCoupling::new(0.1).unwrap();
        let exact = solve_limit_spectrum(ContactModel::Epsilon(c), &r, 1, &opts)
            .unwrap()
            .state(Sector::Odd, 1)
            .unwrap()
            .energy;
        let errs: Vec<f64> = [1e-2, 5e-3, 2.5e-3]
            .iter()
            .map(|&a| {
                let sys = build_epsilon_finite(c, reg(a), &r).unwrap();
                ring_spectrum(&sys, &r, 1, &opts).unwrap().state(Sector::Odd, 1).unwrap().energy - exact
            })
            .collect();
        let sys = build_epsilon_finite(c, reg(1e-3), &r).unwrap();
        let near = ring_spectrum(&sys, &r, 1, &opts).unwrap().state(Sector::Odd, 1).unwrap().energy;
        assert!((near - exact).abs() < 5e-3);
        for w in errs.windows(2) {
            let ratio = w[0] / w[1];
            assert!((1.6..=2.4).contains(&ratio), "{errs:?}");
        }
    }

    #[test]
    fn attractive_barrier_binds_one_even_state() {
        let r = ring();
        let sys = build_delta_finite(DeltaCoupling::new(-1.0).unwrap(), reg(1e-3), &r).unwrap();
        let s = ring_spectrum(&sys, &r, 2, &SpectrumOptions::default()).unwrap();
        let ground = s.roots[0];
        assert!(ground.is_bound() && ground.sector == Sector::Even);
        let g = ground.k;
        assert!((2.0 * g * (g * std::f64::consts::PI).tanh() - 1.0).abs() < 5e-3);
    }

    #[test]
    fn zero_count_rejected() {
        let r = ring();
        let sys = build_delta_finite(DeltaCoupling::new(0.1).unwrap(), reg(0.01), &r).unwrap();
        assert!(ring_spectrum(&sys, &r, 0, &SpectrumOptions::default()).is_err());
    }
}
