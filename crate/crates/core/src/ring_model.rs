//! Domain types for a particle on a ring with a contact defect at `x = 0`.
//!
//! Units are fixed by `ħ = 2m = 1`, so the Schrödinger operator is
//! `-d²/dx² + V` and an eigenvalue is the energy `k²`. A δ coupling `v`
//! carries units of inverse length, an ε coupling `c` units of length.

use std::fmt;

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Ring of circumference `L`, i.e. the interval `[-L/2, L/2]` with
/// periodic boundary conditions on `ψ` and `ψ'`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RingConfig<T> {
    circumference: T,
}

impl<T: Real> RingConfig<T> {
    pub fn new(circumference: T) -> Result<Self> {
        if !(circumference.is_finite() && circumference > T::zero()) {
            return Err(Error::invalid(
                "L",
                format!("circumference must be positive and finite, got {circumference}"),
            ));
        }
        Ok(Self { circumference })
    }

    /// Ring of circumference `2π`, where free wavenumbers are the integers.
    pub fn two_pi() -> Self {
        Self { circumference: T::TAU() }
    }

    #[inline]
    pub fn circumference(&self) -> T {
        self.circumference
    }

    #[inline]
    pub fn half(&self) -> T {
        self.circumference / T::lit(2.0)
    }

    /// Free wavenumber `κ_n = 2πn/L`.
    #[inline]
    pub fn kappa(&self, n: usize) -> T {
        T::TAU() * T::from_index(n) / self.circumference
    }
}

/// Free wavenumber `κ_n = 2πn/L` of mode `n`.
#[inline]
pub fn kappa<T: Real>(n: usize, ring: &RingConfig<T>) -> T {
    ring.kappa(n)
}

macro_rules! finite_coupling {
    ($(#[$doc:meta])* $name:ident, $label:literal) => {
        $(#[$doc])*
        #[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
        pub struct $name<T>(T);

        impl<T: Real> $name<T> {
            pub fn new(value: T) -> Result<Self> {
                if !value.is_finite() {
                    return Err(Error::invalid($label, format!("must be finite, got {value}")));
                }
                Ok(Self(value))
            }

            #[inline]
            pub fn get(self) -> T {
                self.0
            }
        }

        impl<T: fmt::Display> fmt::Display for $name<T> {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, "{}={}", $label, self.0)
            }
        }
    };
}

finite_coupling!(
    /// Strength `v` of a δ interaction (inverse length, either sign).
    DeltaCoupling, "v"
);
finite_coupling!(
    /// Renormalized strength `c` of the ε interaction (length, either sign).
    EpsilonCoupling, "c"
);
finite_coupling!(
    /// Scale-dependent bare coupling `c_a` of the separable operator.
    BareCoupling, "c_a"
);

/// Half-width `a` of a regularized contact interaction supported on `[-a, a]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Regularization<T>(T);

impl<T: Real> Regularization<T> {
    /// Any positive finite `a`. Use [`Regularization::within`] to also check it
    /// fits on a particular ring.
    pub fn new(a: T) -> Result<Self> {
        if !(a.is_finite() && a > T::zero()) {
            return Err(Error::invalid("a", format!("half-width must be positive and finite, got {a}")));
        }
        Ok(Self(a))
    }

    /// Checks `a < L/4`, so the interaction region sits well inside the ring.
    pub fn within(self, ring: &RingConfig<T>) -> Result<Self> {
        let limit = ring.circumference() / T::lit(4.0);
        if self.0 >= limit {
            return Err(Error::invalid(
                "a",
                format!("half-width {} must be below L/4 = {}", self.0, limit),
            ));
        }
        Ok(self)
    }

    #[inline]
    pub fn get(self) -> T {
        self.0
    }
}

/// Mirror parity of the symmetrized plane waves `φ_{n±}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    /// Lowest admissible mode number in this sector.
    #[inline]
    pub fn first_mode(self) -> usize {
        match self {
            Parity::Even => 0,
            Parity::Odd => 1,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Parity::Even => "+",
            Parity::Odd => "-",
        }
    }
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
        })
    }
}

/// A symmetrized free mode: `n ≥ 0` in the even sector, `n ≥ 1` in the odd one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ModeIndex {
    n: usize,
    parity: Parity,
}

impl ModeIndex {
    pub fn new(n: usize, parity: Parity) -> Result<Self> {
        if n < parity.first_mode() {
            return Err(Error::invalid("n", "odd-sector modes start at n = 1"));
        }
        Ok(Self { n, parity })
    }

    #[inline]
    pub fn n(self) -> usize {
        self.n
    }

    #[inline]
    pub fn parity(self) -> Parity {
        self.parity
    }

    #[inline]
    pub fn kappa<T: Real>(self, ring: &RingConfig<T>) -> T {
        ring.kappa(self.n)
    }
}

/// Bare coupling from the renormalized one: `c_a = 2ac/(2a + c)`,
/// equivalently `1/c_a = 1/c + 1/(2a)`.
pub fn renormalized_to_bare<T: Real>(
    c: EpsilonCoupling<T>,
    a: Regularization<T>,
) -> Result<BareCoupling<T>> {
    let (c, a) = (c.get(), a.get());
    let two_a = T::lit(2.0) * a;
    let denom = two_a + c;
    if denom.abs() <= T::epsilon() * (two_a + c.abs()) {
        return Err(Error::SingularCoupling(format!(
            "2a + c = 0 at a = {a}, c = {c}: the bare coupling diverges"
        )));
    }
    BareCoupling::new(two_a * c / denom)
}

/// Inverse map `1/c = 1/c_a - 1/(2a)`, i.e. `c = 2a c_a/(2a - c_a)`.
pub fn bare_to_renormalized<T: Real>(
    c_a: BareCoupling<T>,
    a: Regularization<T>,
) -> Result<EpsilonCoupling<T>> {
    let (c_a, a) = (c_a.get(), a.get());
    let two_a = T::lit(2.0) * a;
    let denom = two_a - c_a;
    if denom.abs() <= T::epsilon() * (two_a + c_a.abs()) {
        return Err(Error::SingularCoupling(format!(
            "c_a = 2a = {two_a}: the renormalized coupling is infinite (Neumann limit)"
        )));
    }
    EpsilonCoupling::new(two_a * c_a / denom)
}

/// Truncated expansion `c_a ≈ c - c²/(2a)` of the bare coupling in `c/(2a)`.
/// `order` 1 keeps only `c`, order 2 adds the quadratic correction.
pub fn bare_coupling_series<T: Real>(
    c: EpsilonCoupling<T>,
    a: Regularization<T>,
    order: u8,
) -> Result<T> {
    let (c, a) = (c.get(), a.get());
    match order {
        1 => Ok(c),
        2 => Ok(c - c * c / (T::lit(2.0) * a)),
        _ => Err(Error::invalid("order", format!("expansion order must be 1 or 2, got {order}"))),
    }
}

/// δ coupling `v = -c k²` whose eigenfunction derivative reproduces the
/// ε eigenfunction at wavenumber `k`. The map is energy dependent, so it is
/// only meaningful root by root.
pub fn duality_coupling<T: Real>(c: EpsilonCoupling<T>, k: T) -> DeltaCoupling<T> {
    DeltaCoupling(-c.get() * k * k)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn reg(a: f64) -> Regularization<f64> {
        Regularization::new(a).unwrap()
    }

    fn eps(c: f64) -> EpsilonCoupling<f64> {
        EpsilonCoupling::new(c).unwrap()
    }

    #[test]
    fn kappa_examples() {
        let two_pi = RingConfig::<f64>::two_pi();
        assert_eq!(kappa(0, &two_pi), 0.0);
        assert!((kappa(1, &two_pi) - 1.0).abs() < 1e-15);
        let ring = RingConfig::new(4.0_f64).unwrap();
        assert!((kappa(3, &ring) - 4.712_388_980_384_69).abs() < 1e-12);
    }

    #[test]
    fn ring_rejects_bad_circumference() {
        assert!(RingConfig::new(0.0_f64).is_err());
        assert!(RingConfig::new(-1.0_f64).is_err());
        assert!(RingConfig::new(f64::INFINITY).is_err());
    }

    #[test]
    fn bare_coupling_examples() {
        let ca = renormalized_to_bare(eps(0.1), reg(0.01)).unwrap().get();
        assert!((ca - 1.0 / 60.0).abs() < 1e-15);
        assert!((1.0 / ca - 60.0).abs() < 1e-11);
        assert_eq!(renormalized_to_bare(eps(0.0), reg(0.37)).unwrap().get(), 0.0);
        let ca = renormalized_to_bare(eps(0.001), reg(0.05)).unwrap().get();
        assert!((ca - 0.0001 / 0.101).abs() < 1e-17);
        assert!((ca - 0.000_990_10).abs() < 1e-8);
    }

    #[test]
    fn renormalized_coupling_examples() {
        let c = bare_to_renormalized(BareCoupling::new(1.0 / 60.0).unwrap(), reg(0.01)).unwrap();
        assert!((c.get() - 0.1).abs() < 1e-14);
        assert_eq!(bare_to_renormalized(BareCoupling::new(0.0).unwrap(), reg(2.0)).unwrap().get(), 0.0);
        let c = bare_to_renormalized(BareCoupling::new(0.000_990_10).unwrap(), reg(0.05)).unwrap();
        assert!((c.get() - 0.001).abs() < 1e-8);
    }

    #[test]
    fn poles_are_typed_errors() {
        assert!(matches!(
            renormalized_to_bare(eps(-0.2), reg(0.1)),
            Err(Error::SingularCoupling(_))
        ));
        assert!(matches!(
            bare_to_renormalized(BareCoupling::new(0.2).unwrap(), reg(0.1)),
            Err(Error::SingularCoupling(_))
        ));
    }

    #[test]
    fn series_examples() {
        let v = bare_coupling_series(eps(0.001), reg(0.05), 2).unwrap();
        assert!((v - 0.00099).abs() < 1e-17);
        assert_eq!(bare_coupling_series(eps(0.0), reg(0.05), 2).unwrap(), 0.0);
        assert_eq!(bare_coupling_series(eps(0.001), reg(0.05), 1).unwrap(), 0.001);
        assert!(bare_coupling_series(eps(0.001), reg(0.05), 3).is_err());
    }

    #[test]
    fn series_error_shrinks_fourfold_when_c_halves() {
        let a = reg(0.05);
        let err = |c: f64| {
            let exact = renormalized_to_bare(eps(c), a).unwrap().get();
            (bare_coupling_series(eps(c), a, 2).unwrap() - exact).abs()
        };
        // |c_a - (c - c²/2a)| ≈ c³/(4a²): cubic in c, so halving c at fixed
        // a reduces it by 8; relative to c it shrinks by 4.
        let ratio = (err(0.004) / 0.004) / (err(0.002) / 0.002);
        assert!((ratio - 4.0).abs() < 0.1, "ratio {ratio}");
    }

    #[test]
    fn duality_examples() {
        assert!((duality_coupling(eps(0.1), 1.0).get() + 0.1).abs() < 1e-16);
        assert_eq!(duality_coupling(eps(3.0), 0.0).get(), 0.0);
        assert!((duality_coupling(eps(-0.2), 2.0).get() - 0.8).abs() < 1e-15);
    }

    #[test]
    fn bare_coupling_vanishes_as_a_shrinks_and_saturates_as_a_grows() {
        let c = eps(0.1);
        let mut prev = f64::INFINITY;
        for k in 0..30 {
            let a = 10.0 * 0.5_f64.powi(k);
            let ca = renormalized_to_bare(c, reg(a)).unwrap().get();
            assert!(ca < prev);
            prev = ca;
        }
        assert!(prev < 1e-7);
        let far = renormalized_to_bare(c, reg(1e9)).unwrap().get();
        assert!((far - 0.1).abs() < 1e-10);
    }

    #[test]
    fn mode_index_rejects_odd_zero() {
        assert!(ModeIndex::new(0, Parity::Odd).is_err());
        assert!(ModeIndex::new(0, Parity::Even).is_ok());
        let m = ModeIndex::new(2, Parity::Odd).unwrap();
        assert!((m.kappa(&RingConfig::<f64>::two_pi()) - 2.0).abs() < 1e-15);
    }

    #[test]
    fn regularization_must_fit_on_ring() {
        let ring = RingConfig::<f64>::two_pi();
        assert!(reg(1.0).within(&ring).is_ok());
        assert!(reg(1.6).within(&ring).is_err());
        assert!(Regularization::new(0.0_f64).is_err());
    }

    #[test]
    fn single_precision_coupling_map() {
        let c = EpsilonCoupling::new(0.1_f32).unwrap();
        let a = Regularization::new(0.01_f32).unwrap();
        let ca = renormalized_to_bare(c, a).unwrap().get();
        assert!((ca - 1.0 / 60.0).abs() < 1e-7);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn coupling_round_trip(c in -10.0_f64..10.0, a in 1e-4_f64..10.0) {
                prop_assume!((2.0 * a + c).abs() > 0.5 * (2.0 * a + c.abs()));
                let ca = renormalized_to_bare(eps(c), reg(a)).unwrap();
                prop_assume!((2.0 * a - ca.get()).abs() > 0.5 * (2.0 * a + ca.get().abs()));
                let back = bare_to_renormalized(ca, reg(a)).unwrap().get();
                prop_assert!((back - c).abs() <= 1e-14 * c.abs().max(1e-300),
                    "c = {c}, back = {back}");
            }

            #[test]
            fn series_truncation_bound(x in -0.5_f64..0.5, a in 1e-3_f64..1.0) {
                // x = c/(2a)
                let c = 2.0 * a * x;
                let exact = renormalized_to_bare(eps(c), reg(a)).unwrap().get();
                let approx = bare_coupling_series(eps(c), reg(a), 2).unwrap();
                // exact remainder is |c| x²/(1 + x): within |c| x²(1 + |x|) for
                // x ≥ 0, and within |c| x²/(1 - |x|) ≤ 2|c| x² for x < 0
                let bound = if x >= 0.0 {
                    c.abs() * x * x * (1.0 + x)
                } else {
                    c.abs() * x * x / (1.0 - x.abs())
                };
                prop_assert!((approx - exact).abs() <= bound * (1.0 + 1e-12) + 4.0 * f64::EPSILON * c.abs());
            }
        }
    }
}
