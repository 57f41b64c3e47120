//! Jacobi elliptic functions sn, cn, dn and the complete elliptic integral K.
//!
//! Convention: the second argument is the MODULUS m (not the parameter m²),
//! so sn(x, 0) = sin x and sn(x, 1) = tanh x. Internally the AGM scale runs
//! on a₀ = 1, b₀ = √(1 − m²), c₀ = m (descending Landen), with the amplitude
//! recovered by the backward arcsine recursion. Arguments are reduced modulo
//! the fundamental period 4K(m) first, so periodicity holds to rounding.

use crate::error::{Error, Result};

const AGM_TOL: f64 = 1e-15;
const AGM_MAX_ITER: usize = 12;
/// Above this modulus the hyperbolic closed forms are used directly.
const HYPERBOLIC_SWITCH: f64 = 1.0 - 1e-8;

/// Elliptic modulus m with 0 ≤ m ≤ 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EllipticModulus(f64);

impl EllipticModulus {
    pub fn new(m: f64) -> Result<Self> {
        if !m.is_finite() || !(0.0..=1.0).contains(&m) {
            return Err(Error::InvalidParameter(format!(
                "elliptic modulus must satisfy 0 <= m <= 1, got {m}"
            )));
        }
        Ok(Self(m))
    }

    pub fn get(self) -> f64 {
        self.0
    }
}

/// Arithmetic-geometric mean of (a, b), both positive.
fn agm(mut a: f64, mut b: f64) -> f64 {
    for _ in 0..AGM_MAX_ITER {
        if (a - b).abs() <= AGM_TOL * a {
            break;
        }
        let an = 0.5 * (a + b);
        b = (a * b).sqrt();
        a = an;
    }
    0.5 * (a + b)
}

fn complete_k_unchecked(m: f64) -> f64 {
    let kp = ((1.0 - m) * (1.0 + m)).sqrt();
    std::f64::consts::FRAC_PI_2 / agm(1.0, kp)
}

/// Complete elliptic integral of the first kind, modulus convention:
/// K(m) = ∫₀^{π/2} dθ/√(1 − m² sin²θ), computed as π / (2·agm(1, √(1−m²))).
///
/// The fundamental period of sn and cn is 4K(m); dn has period 2K(m).
pub fn complete_k(m: EllipticModulus) -> Result<f64> {
    if m.get() >= 1.0 {
        return Err(Error::EllipticDivergence);
    }
    Ok(complete_k_unchecked(m.get()))
}

/// sn, cn, dn at once. Input is validated by the public wrappers.
pub(crate) fn jacobi_sncndn(x: f64, m: f64) -> (f64, f64, f64) {
    debug_assert!((0.0..=1.0).contains(&m));
    if m == 0.0 {
        return (x.sin(), x.cos(), 1.0);
    }
    if m > HYPERBOLIC_SWITCH {
        let s = x.tanh();
        let c = 1.0 / x.cosh();
        return (s, c, c);
    }

    // Reduce modulo the fundamental period; keeps the backward recursion
    // angles small and makes periodicity exact in floating point.
    let period = 4.0 * complete_k_unchecked(m);
    let x = x - period * (x / period).round();

    let mut a = [0.0f64; AGM_MAX_ITER + 1];
    let mut c = [0.0f64; AGM_MAX_ITER + 1];
    a[0] = 1.0;
    c[0] = m;
    let mut b = ((1.0 - m) * (1.0 + m)).sqrt();
    let mut n = 0;
    while c[n].abs() > AGM_TOL && n < AGM_MAX_ITER {
        a[n + 1] = 0.5 * (a[n] + b);
        c[n + 1] = 0.5 * (a[n] - b);
        b = (a[n] * b).sqrt();
        n += 1;
    }

    let mut phi = (1u64 << n) as f64 * a[n] * x;
    for i in (1..=n).rev() {
        let s = (c[i] * phi.sin() / a[i]).clamp(-1.0, 1.0);
        phi = 0.5 * (phi + s.asin());
    }

    let sn = phi.sin();
    let cn = phi.cos();
    let dn = (1.0 - (m * sn) * (m * sn)).sqrt();
    (sn, cn, dn)
}

fn check_finite(x: f64) -> Result<()> {
    if !x.is_finite() {
        return Err(Error::Domain(format!("argument must be finite, got {x}")));
    }
    Ok(())
}

/// Jacobi sn(x, m). Odd, |sn| ≤ 1, period 4K(m) for m < 1.
pub fn sn(x: f64, m: EllipticModulus) -> Result<f64> {
    check_finite(x)?;
    Ok(jacobi_sncndn(x, m.get()).0)
}

/// Jacobi cn(x, m). Even, cn(0) = 1; cn(x, 0) = cos x, cn(x, 1) = sech x.
pub fn cn(x: f64, m: EllipticModulus) -> Result<f64> {
    check_finite(x)?;
    Ok(jacobi_sncndn(x, m.get()).1)
}

/// Jacobi dn(x, m), satisfying dn² + m² sn² = 1; dn(x, 0) = 1.
pub fn dn(x: f64, m: EllipticModulus) -> Result<f64> {
    check_finite(x)?;
    Ok(jacobi_sncndn(x, m.get()).2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_2;

    fn modulus(m: f64) -> EllipticModulus {
        EllipticModulus::new(m).unwrap()
    }

    /// Adaptive Simpson quadrature, used as the independent oracle for the
    /// defining integrals. Lives only in test code.
    fn simpson<F: Fn(f64) -> f64 + Copy>(f: F, a: f64, b: f64, tol: f64) -> f64 {
        fn simpson_rule<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> f64 {
            (b - a) / 6.0 * (f(a) + 4.0 * f(0.5 * (a + b)) + f(b))
        }
        fn recurse<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, whole: f64, tol: f64, depth: u32) -> f64 {
            let m = 0.5 * (a + b);
            let left = simpson_rule(f, a, m);
            let right = simpson_rule(f, m, b);
            if depth > 40 || (left + right - whole).abs() < 15.0 * tol {
                left + right + (left + right - whole) / 15.0
            } else {
                recurse(f, a, m, left, tol / 2.0, depth + 1)
                    + recurse(f, m, b, right, tol / 2.0, depth + 1)
            }
        }
        recurse(&f, a, b, simpson_rule(&f, a, b), tol, 0)
    }

    /// Incomplete elliptic integral F(phi, m) by quadrature: the inverse of
    /// the amplitude function, so sn(F(phi, m), m) must equal sin(phi).
    fn incomplete_f_oracle(phi: f64, m: f64) -> f64 {
        simpson(|t| 1.0 / (1.0 - (m * t.sin()).powi(2)).sqrt(), 0.0, phi, 1e-14)
    }

    #[test]
    fn modulus_rejects_out_of_range() {
        assert!(EllipticModulus::new(-0.1).is_err());
        assert!(EllipticModulus::new(1.1).is_err());
        assert!(EllipticModulus::new(f64::NAN).is_err());
        assert!(EllipticModulus::new(0.0).is_ok());
        assert!(EllipticModulus::new(1.0).is_ok());
    }

    #[test]
    fn non_finite_argument_is_domain_error() {
        assert!(sn(f64::INFINITY, modulus(0.5)).is_err());
        assert!(cn(f64::NAN, modulus(0.5)).is_err());
        assert!(dn(f64::NEG_INFINITY, modulus(0.5)).is_err());
    }

    #[test]
    fn circular_limit_m0() {
        let m = modulus(0.0);
        assert!((sn(0.7, m).unwrap() - 0.7f64.sin()).abs() < 1e-15, "sn(x,0)=sin x");
        assert!((cn(0.7, m).unwrap() - 0.7f64.cos()).abs() < 1e-15, "cn(x,0)=cos x");
        assert!((dn(1.3, m).unwrap() - 1.0).abs() < 1e-15, "dn(x,0)=1");
    }

    #[test]
    fn hyperbolic_limit_m1() {
        let m = modulus(1.0);
        let sech = |x: f64| 1.0 / x.cosh();
        assert!((sn(0.7, m).unwrap() - 0.7f64.tanh()).abs() < 1e-15, "sn(x,1)=tanh x");
        assert!((cn(0.7, m).unwrap() - sech(0.7)).abs() < 1e-15, "cn(x,1)=sech x");
        assert!((dn(0.7, m).unwrap() - sech(0.7)).abs() < 1e-15, "dn(x,1)=sech x");
    }

    #[test]
    fn cn_at_zero_is_one_for_all_m() {
        for &m in &[0.0, 0.3, 0.8, 0.99, 1.0] {
            assert_eq!(cn(0.0, modulus(m)).unwrap(), 1.0, "cn(0, {m}) = 1");
        }
    }

    // Frozen from the quadrature oracle (also cross-checked against mpmath
    // ellipfun with parameter m^2).
    #[test]
    fn reference_values_m_half() {
        let m = modulus(0.5);
        let s = sn(0.5, m).unwrap();
        let c = cn(0.5, m).unwrap();
        let d = dn(0.5, m).unwrap();
        assert!((s - 0.4750829360285365).abs() < 1e-12, "sn(0.5, 0.5) = {s}");
        assert!((c - 0.8799410229637583).abs() < 1e-12, "cn(0.5, 0.5) = {c}");
        assert!((d - 0.9713773988381789).abs() < 1e-12, "dn(0.5, 0.5) = {d}");
    }

    #[test]
    fn sn_inverts_the_elliptic_integral() {
        // Independent quadrature route: u = F(phi, m) then sn(u, m) = sin(phi).
        for &m in &[0.1, 0.3, 0.5, 0.7, 0.9] {
            for &phi in &[0.2, 0.7, 1.2, 1.5] {
                let u = incomplete_f_oracle(phi, m);
                let s = sn(u, modulus(m)).unwrap();
                assert!(
                    (s - phi.sin()).abs() < 1e-12,
                    "sn(F({phi}, {m})) = {s} vs sin = {}",
                    phi.sin()
                );
            }
        }
    }

    #[test]
    fn complete_k_values() {
        assert_eq!(complete_k(modulus(0.0)).unwrap(), FRAC_PI_2, "K(0) = pi/2 exactly");
        let k5 = complete_k(modulus(0.5)).unwrap();
        assert!((k5 - 1.685750354812596).abs() < 1e-13, "K(0.5) = {k5}");
        let k8 = complete_k(modulus(0.8)).unwrap();
        assert!((k8 - 1.9953027776647296).abs() < 1e-13, "K(0.8) = {k8}");
        let k9 = complete_k(modulus(0.9)).unwrap();
        assert!((k9 - 2.2805491384227703).abs() < 1e-13, "K(0.9) = {k9}");
        assert!(complete_k(modulus(1.0)).is_err(), "K diverges at m = 1");
    }

    #[test]
    fn complete_k_matches_quadrature_oracle() {
        for &m in &[0.1, 0.3, 0.5, 0.7, 0.9, 0.99] {
            let k = complete_k(modulus(m)).unwrap();
            let oracle = incomplete_f_oracle(FRAC_PI_2, m);
            assert!((k - oracle).abs() < 1e-12, "K({m}) = {k} vs quadrature {oracle}");
        }
    }

    #[test]
    fn pythagorean_identities_grid() {
        for i in 0..=10 {
            let m = if i == 10 { 0.99 } else { 0.1 * i as f64 };
            let mm = modulus(m);
            let mut x = -20.0;
            while x <= 20.0 {
                let s = sn(x, mm).unwrap();
                let c = cn(x, mm).unwrap();
                let d = dn(x, mm).unwrap();
                assert!((s * s + c * c - 1.0).abs() < 1e-12, "sn^2+cn^2 at x={x}, m={m}");
                assert!(
                    (d * d + m * m * s * s - 1.0).abs() < 1e-12,
                    "dn^2+m^2 sn^2 at x={x}, m={m}"
                );
                assert!(s.abs() <= 1.0 + 1e-15, "|sn| <= 1 at x={x}, m={m}");
                x += 0.79;
            }
        }
    }

    #[test]
    fn periodicity_4k() {
        for &m in &[0.1, 0.5, 0.9, 0.99] {
            let mm = modulus(m);
            let period = 4.0 * complete_k(mm).unwrap();
            let mut x = -20.0;
            while x <= 20.0 {
                let ds = (sn(x + period, mm).unwrap() - sn(x, mm).unwrap()).abs();
                let dc = (cn(x + period, mm).unwrap() - cn(x, mm).unwrap()).abs();
                assert!(ds < 1e-10, "sn period at x={x}, m={m}: {ds:.3e}");
                assert!(dc < 1e-10, "cn period at x={x}, m={m}: {dc:.3e}");
                x += 1.37;
            }
        }
    }

    #[test]
    fn parity() {
        for &m in &[0.0, 0.2, 0.5, 0.8, 0.99] {
            let mm = modulus(m);
            let mut x = 0.1;
            while x <= 15.0 {
                assert!((sn(-x, mm).unwrap() + sn(x, mm).unwrap()).abs() < 1e-12, "sn odd");
                assert!((cn(-x, mm).unwrap() - cn(x, mm).unwrap()).abs() < 1e-12, "cn even");
                assert!((dn(-x, mm).unwrap() - dn(x, mm).unwrap()).abs() < 1e-12, "dn even");
                x += 0.93;
            }
        }
    }
}
