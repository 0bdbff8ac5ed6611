//! Independent evaluation routes for normalizations, moments,
//! density-matrix entries, and Wigner values.
//!
//! Every quantity of the state family can be written as a mixed partial
//! derivative, at the origin, of `exp(Q)` for a small quadratic form `Q`
//! whose coefficients depend on `alpha`, `g`, and the evaluation point. The
//! functions here build those exponents for both operator orderings
//! (addition first / amplification first) and hand them to
//! [`extract_derivative`]. They deliberately share no code with the
//! closed-form paths in [`crate::state`], [`crate::metrics`], and
//! [`crate::wigner`]; the verification suite plays the two against each
//! other.
//!
//! Where a route's textbook prefactor contains `exp((g^2 - 1) |alpha|^2)`
//! both in the numerator and inside the normalization constant, the two are
//! cancelled analytically so the evaluation stays finite at large `|alpha|`.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::Error;
use crate::special::{extract_derivative, factorial, laguerre, DerivativeOrder, QuadraticExponent};
use crate::state::MpaacsParams;

fn re(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// `1 / (m! L_m(-g^2 |alpha|^2))`, the reciprocal of the state
/// normalization.
fn inverse_total_norm(params: &MpaacsParams) -> f64 {
    let m = params.added_photons();
    1.0 / (factorial(u64::from(m)) * laguerre(m, -params.amplified_intensity()))
}

fn order_mm(m: u32) -> DerivativeOrder {
    DerivativeOrder::new().var("s", m).var("t", m)
}

/// Squared norm of `g^n a†^m |alpha>` via its generating representation
/// `e^{(g^2-1)|alpha|^2} d_s^m d_t^m exp(g^2 (t alpha + s conj(alpha) + s t))`.
pub fn norm_addition_first(params: &MpaacsParams) -> Result<f64, Error> {
    let g2 = params.gain() * params.gain();
    let alpha = params.alpha();
    let exponent = QuadraticExponent::new(["s", "t"])
        .linear("t", re(g2) * alpha)
        .linear("s", re(g2) * alpha.conj())
        .quadratic("s", "t", re(g2));
    let derivative = extract_derivative(&exponent, &order_mm(params.added_photons()))?;
    Ok(((g2 - 1.0) * alpha.norm_sqr()).exp() * derivative.re)
}

/// Squared norm of `a†^m g^n |alpha>` via
/// `e^{(g^2-1)|alpha|^2} d_s^m d_t^m exp(g t alpha + g s conj(alpha) + s t)`.
pub fn norm_amplification_first(params: &MpaacsParams) -> Result<f64, Error> {
    let g = params.gain();
    let alpha = params.alpha();
    let exponent = QuadraticExponent::new(["s", "t"])
        .linear("t", re(g) * alpha)
        .linear("s", re(g) * alpha.conj())
        .quadratic("s", "t", re(1.0));
    let derivative = extract_derivative(&exponent, &order_mm(params.added_photons()))?;
    Ok(((g.powi(2) - 1.0) * alpha.norm_sqr()).exp() * derivative.re)
}

fn order_mmkl(m: u32, k: u32, l: u32) -> DerivativeOrder {
    DerivativeOrder::new().var("s", m).var("t", m).var("f", k).var("h", l)
}

/// Normally ordered moment `<a†^k a^l>` through the addition-first route:
/// four formal variables, with the route normalization folded into the
/// prefactor `1 / (g^{2m} m! L_m(-g^2 |alpha|^2))`.
pub fn moment_addition_first(params: &MpaacsParams, k: u32, l: u32) -> Result<Complex64, Error> {
    let g = params.gain();
    let g2 = g * g;
    let alpha = params.alpha();
    let exponent = QuadraticExponent::new(["s", "t", "f", "h"])
        .linear("s", re(g2) * alpha.conj())
        .linear("t", re(g2) * alpha)
        .linear("f", re(g) * alpha.conj())
        .linear("h", re(g) * alpha)
        .quadratic("s", "t", re(g2))
        .quadratic("h", "s", re(g))
        .quadratic("f", "t", re(g));
    let derivative = extract_derivative(&exponent, &order_mmkl(params.added_photons(), k, l))?;
    let prefactor = inverse_total_norm(params) / g2.powi(params.added_photons() as i32);
    Ok(prefactor * derivative)
}

/// Normally ordered moment `<a†^k a^l>` through the amplification-first
/// route, prefactor `1 / (m! L_m(-g^2 |alpha|^2))`.
pub fn moment_amplification_first(
    params: &MpaacsParams,
    k: u32,
    l: u32,
) -> Result<Complex64, Error> {
    let g = params.gain();
    let alpha = params.alpha();
    let exponent = QuadraticExponent::new(["s", "t", "f", "h"])
        .linear("s", re(g) * alpha.conj())
        .linear("t", re(g) * alpha)
        .linear("f", re(g) * alpha.conj())
        .linear("h", re(g) * alpha)
        .quadratic("h", "s", re(1.0))
        .quadratic("f", "t", re(1.0))
        .quadratic("s", "t", re(1.0));
    let derivative = extract_derivative(&exponent, &order_mmkl(params.added_photons(), k, l))?;
    Ok(inverse_total_norm(params) * derivative)
}

/// Density-matrix entry `rho_kl` through the addition-first route,
/// `exp(g f (alpha + s) + g h (conj(alpha) + t))` with prefactor
/// `e^{-g^2 |alpha|^2} / (g^{2m} m! L_m sqrt(k! l!))`.
pub fn dme_addition_first(params: &MpaacsParams, k: u32, l: u32) -> Result<Complex64, Error> {
    let g = params.gain();
    let alpha = params.alpha();
    let exponent = QuadraticExponent::new(["s", "t", "f", "h"])
        .linear("f", re(g) * alpha)
        .linear("h", re(g) * alpha.conj())
        .quadratic("f", "s", re(g))
        .quadratic("h", "t", re(g));
    let derivative = extract_derivative(&exponent, &order_mmkl(params.added_photons(), k, l))?;
    let m = params.added_photons();
    let prefactor = (-params.amplified_intensity()).exp() * inverse_total_norm(params)
        / (g.powi(2 * m as i32) * (factorial(u64::from(k)) * factorial(u64::from(l))).sqrt());
    Ok(prefactor * derivative)
}

/// Density-matrix entry `rho_kl` through the amplification-first route,
/// `exp(f s + h t + g (f alpha + h conj(alpha)))` with prefactor
/// `e^{-g^2 |alpha|^2} / (m! L_m sqrt(k! l!))`.
pub fn dme_amplification_first(params: &MpaacsParams, k: u32, l: u32) -> Result<Complex64, Error> {
    let g = params.gain();
    let alpha = params.alpha();
    let exponent = QuadraticExponent::new(["s", "t", "f", "h"])
        .linear("f", re(g) * alpha)
        .linear("h", re(g) * alpha.conj())
        .quadratic("f", "s", re(1.0))
        .quadratic("h", "t", re(1.0));
    let derivative = extract_derivative(&exponent, &order_mmkl(params.added_photons(), k, l))?;
    let prefactor = (-params.amplified_intensity()).exp() * inverse_total_norm(params)
        / (factorial(u64::from(k)) * factorial(u64::from(l))).sqrt();
    Ok(prefactor * derivative)
}

fn wigner_envelope(params: &MpaacsParams, beta: Complex64) -> f64 {
    (-2.0 * (beta - params.amplified_alpha()).norm_sqr()).exp()
}

/// Wigner value through the addition-first route:
/// `d_s^m d_t^m exp(-g^2 (t alpha + s conj(alpha) + s t) + 2 g (t beta + s conj(beta)))`
/// times `2 e^{-2 |beta - g alpha|^2} / (pi g^{2m} m! L_m)`.
pub fn wigner_addition_first(params: &MpaacsParams, beta: Complex64) -> Result<f64, Error> {
    let g = params.gain();
    let g2 = g * g;
    let alpha = params.alpha();
    let exponent = QuadraticExponent::new(["s", "t"])
        .linear("t", re(2.0 * g) * beta - re(g2) * alpha)
        .linear("s", re(2.0 * g) * beta.conj() - re(g2) * alpha.conj())
        .quadratic("s", "t", re(-g2));
    let derivative = extract_derivative(&exponent, &order_mm(params.added_photons()))?;
    let m = params.added_photons();
    let prefactor = 2.0 * wigner_envelope(params, beta) * inverse_total_norm(params)
        / (PI * g.powi(2 * m as i32));
    Ok(prefactor * derivative.re)
}

/// Wigner value through the amplification-first route:
/// `d_s^m d_t^m exp(-g (t alpha + s conj(alpha)) - s t + 2 (t beta + s conj(beta)))`
/// times `2 e^{-2 |beta - g alpha|^2} / (pi m! L_m)`.
pub fn wigner_amplification_first(
    params: &MpaacsParams,
    beta: Complex64,
) -> Result<f64, Error> {
    let g = params.gain();
    let alpha = params.alpha();
    let exponent = QuadraticExponent::new(["s", "t"])
        .linear("t", re(2.0) * beta - re(g) * alpha)
        .linear("s", re(2.0) * beta.conj() - re(g) * alpha.conj())
        .quadratic("s", "t", re(-1.0));
    let derivative = extract_derivative(&exponent, &order_mm(params.added_photons()))?;
    let prefactor = 2.0 * wigner_envelope(params, beta) * inverse_total_norm(params) / PI;
    Ok(prefactor * derivative.re)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::normalization;

    fn params(alpha: f64, gain: f64, m: u32) -> MpaacsParams {
        MpaacsParams::new(Complex64::new(alpha, 0.0), gain, m).unwrap()
    }

    #[test]
    fn norms_match_the_closed_forms() {
        for p in [
            params(0.0, 1.0, 0),
            params(1.0, 2.0, 2),
            params(0.6, 1.3, 3),
            params(2.0, 1.0, 5),
        ] {
            let closed = normalization(&p);
            let via_add = norm_addition_first(&p).unwrap();
            let via_amp = norm_amplification_first(&p).unwrap();
            assert!(
                (via_add - closed.addition_first).abs() <= 1e-10 * closed.addition_first,
                "addition-first norm {via_add} vs {}",
                closed.addition_first
            );
            assert!(
                (via_amp - closed.amplification_first).abs() <= 1e-10 * closed.amplification_first,
                "amplification-first norm {via_amp} vs {}",
                closed.amplification_first
            );
        }
    }

    #[test]
    fn zeroth_moment_is_unity() {
        for p in [params(1.0, 2.0, 2), params(0.5, 1.5, 1), params(1.5, 1.0, 3)] {
            for route in [moment_addition_first, moment_amplification_first] {
                let value = route(&p, 0, 0).unwrap();
                assert!((value - Complex64::new(1.0, 0.0)).norm() < 1e-12, "{value}");
            }
        }
    }

    #[test]
    fn mean_photon_number_of_a_fock_state() {
        // alpha = 0, g arbitrary, m = 3: <a† a> = 3.
        let p = params(0.0, 1.7, 3);
        let value = moment_amplification_first(&p, 1, 1).unwrap();
        assert!((value.re - 3.0).abs() < 1e-12);
        assert!(value.im.abs() < 1e-14);
    }

    #[test]
    fn coherent_moments_factorize() {
        // m = 0: <a†^k a^l> = conj(g alpha)^k (g alpha)^l.
        let p = params(0.9, 2.0, 0);
        let w = p.amplified_alpha();
        for (k, l) in [(1u32, 0u32), (0, 1), (1, 1), (2, 1), (2, 2), (3, 2)] {
            for route in [moment_addition_first, moment_amplification_first] {
                let value = route(&p, k, l).unwrap();
                let expected = w.conj().powu(k) * w.powu(l);
                assert!(
                    (value - expected).norm() <= 1e-11 * expected.norm().max(1.0),
                    "k = {k}, l = {l}: {value} vs {expected}"
                );
            }
        }
    }

    #[test]
    fn single_addition_mean_photon_number() {
        // g = 1, m = 1: <n> = (u^4 + 3u^2 + 1)/(1 + u^2) at u = alpha.
        let u: f64 = 1.3;
        let p = params(u, 1.0, 1);
        let expected = (u.powi(4) + 3.0 * u.powi(2) + 1.0) / (1.0 + u.powi(2));
        for route in [moment_addition_first, moment_amplification_first] {
            let value = route(&p, 1, 1).unwrap();
            assert!((value.re - expected).abs() < 1e-12 * expected);
        }
    }

    #[test]
    fn dme_entries_reproduce_hand_values() {
        // alpha = 1, g = 1, m = 1: rho_11 = e^{-1} / 2.
        let p = params(1.0, 1.0, 1);
        let expected = (-1.0f64).exp() / 2.0;
        for route in [dme_addition_first, dme_amplification_first] {
            let value = route(&p, 1, 1).unwrap();
            assert!((value.re - expected).abs() < 1e-13, "{} vs {expected}", value.re);
            assert!(value.im.abs() < 1e-15);
        }
        // Entries with k < m vanish identically.
        for route in [dme_addition_first, dme_amplification_first] {
            let value = route(&p, 0, 1).unwrap();
            assert_eq!(value, Complex64::new(0.0, 0.0));
        }
    }

    #[test]
    fn wigner_routes_match_on_gaussian_cases() {
        // m = 0 reduces to the displaced Gaussian 2/pi e^{-2 |beta - g alpha|^2}.
        let p = params(0.8, 2.0, 0);
        for &(x, y) in &[(0.0, 0.0), (1.6, 0.0), (0.5, -1.0)] {
            let beta = Complex64::new(x, y);
            let expected = 2.0 / PI * (-2.0 * (beta - p.amplified_alpha()).norm_sqr()).exp();
            for route in [wigner_addition_first, wigner_amplification_first] {
                let value = route(&p, beta).unwrap();
                assert!((value - expected).abs() < 1e-13, "{value} vs {expected}");
            }
        }
    }

    #[test]
    fn wigner_spot_value_single_addition() {
        // alpha = 2, g = 1, m = 1 at beta = 1: |2 beta - g alpha|^2 = 0 and
        // L_1(0) = 1, so W = -2 e^{-2 |beta - g alpha|^2} / (pi L_1(-4))
        //                  = -2 e^{-2} / (5 pi).
        let p = params(2.0, 1.0, 1);
        let beta = Complex64::new(1.0, 0.0);
        let expected = -2.0 * (-2.0f64).exp() / (5.0 * PI);
        for route in [wigner_addition_first, wigner_amplification_first] {
            let value = route(&p, beta).unwrap();
            assert!((value - expected).abs() < 1e-14, "{value} vs {expected}");
        }
    }
}
