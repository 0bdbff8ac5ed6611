//! Construction of photon-added amplified coherent states.
//!
//! The state family is `a†^m |g·alpha>` up to normalization: a coherent state
//! whose amplitude has been scaled by a noiseless gain `g >= 1` and which has
//! had `m` photons added. The same ray arises from two operator orderings,
//! addition before amplification (`g^n a†^m |alpha>`) and amplification
//! before addition (`a†^m g^n |alpha>`); both are built here independently so
//! they can be checked against the closed-form Fock expansion.

use num_complex::Complex64;

use crate::error::Error;
use crate::special::{factorial, laguerre, log_factorial};

/// Input parameters: seed coherent amplitude `alpha`, gain `g >= 1`, and the
/// number of added photons `m`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MpaacsParams {
    alpha: Complex64,
    gain: f64,
    added_photons: u32,
}

impl MpaacsParams {
    pub fn new(alpha: Complex64, gain: f64, added_photons: u32) -> Result<Self, Error> {
        if !alpha.re.is_finite() || !alpha.im.is_finite() {
            return Err(Error::NonFiniteAlpha);
        }
        if !gain.is_finite() || gain < 1.0 {
            return Err(Error::GainBelowUnity(gain));
        }
        Ok(MpaacsParams {
            alpha,
            gain,
            added_photons,
        })
    }

    /// Convenience constructor from polar `alpha = mag * exp(i*phase)`.
    pub fn from_polar(alpha_mag: f64, alpha_phase: f64, gain: f64, added_photons: u32) -> Result<Self, Error> {
        if !alpha_mag.is_finite() || !alpha_phase.is_finite() || alpha_mag < 0.0 {
            return Err(Error::NonFiniteAlpha);
        }
        let alpha = Complex64::from_polar(alpha_mag, alpha_phase);
        MpaacsParams::new(alpha, gain, added_photons)
    }

    pub fn alpha(&self) -> Complex64 {
        self.alpha
    }

    pub fn gain(&self) -> f64 {
        self.gain
    }

    pub fn added_photons(&self) -> u32 {
        self.added_photons
    }

    /// The amplified amplitude `g * alpha`.
    pub fn amplified_alpha(&self) -> Complex64 {
        self.gain * self.alpha
    }

    /// `|g * alpha|^2`, the argument (negated) of the normalization
    /// Laguerre polynomial.
    pub fn amplified_intensity(&self) -> f64 {
        self.amplified_alpha().norm_sqr()
    }

    pub(crate) fn is_vacuum_seed(&self) -> bool {
        self.alpha == Complex64::new(0.0, 0.0)
    }
}

/// The three normalization constants of the family: `total` for the
/// normalized state `a†^m |g·alpha>`, and the squared norms of the two
/// unnormalized ordering routes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormalizationTriple {
    /// `<g·alpha| a^m a†^m |g·alpha> = m! L_m(-g^2 |alpha|^2)`.
    pub total: f64,
    /// Squared norm of `g^n a†^m |alpha>` (photon addition applied first).
    pub addition_first: f64,
    /// Squared norm of `a†^m g^n |alpha>` (amplification applied first).
    pub amplification_first: f64,
}

/// Closed-form normalization constants.
pub fn normalization(params: &MpaacsParams) -> NormalizationTriple {
    let m = params.added_photons;
    let u2 = params.amplified_intensity();
    let lag = laguerre(m, -u2);
    let m_factorial = factorial(u64::from(m));
    let total = m_factorial * lag;
    let exponent = (params.gain * params.gain - 1.0) * params.alpha.norm_sqr();
    let amplification_first = m_factorial * exponent.exp() * lag;
    let addition_first = params.gain.powi(2 * m as i32) * amplification_first;
    NormalizationTriple {
        total,
        addition_first,
        amplification_first,
    }
}

/// Normalized Fock-basis expansion of the state, truncated with a certified
/// tail bound.
///
/// Coefficients are stored for photon numbers `offset ..= truncation_cutoff`;
/// every component below `offset = m` is exactly zero. `tail_bound` is an
/// upper bound on the probability weight beyond the cutoff, taken as the
/// larger of a geometric-ratio tail estimate and the measured deficit
/// `1 - sum`.
#[derive(Debug, Clone)]
pub struct FockVector {
    params: MpaacsParams,
    offset: usize,
    coefficients: Vec<Complex64>,
    tail_bound: f64,
}

impl FockVector {
    pub fn params(&self) -> &MpaacsParams {
        &self.params
    }

    /// Photon number of the first stored coefficient (equal to `m`).
    pub fn offset(&self) -> usize {
        self.offset
    }

    /// Largest photon number with a stored coefficient.
    pub fn truncation_cutoff(&self) -> usize {
        self.offset + self.coefficients.len() - 1
    }

    pub fn tail_bound(&self) -> f64 {
        self.tail_bound
    }

    /// Coefficient `<k|psi>`; zero outside the stored window.
    pub fn coeff(&self, k: usize) -> Complex64 {
        if k < self.offset || k > self.truncation_cutoff() {
            Complex64::new(0.0, 0.0)
        } else {
            self.coefficients[k - self.offset]
        }
    }

    pub fn coefficients(&self) -> &[Complex64] {
        &self.coefficients
    }

    /// Sum of stored probabilities, accumulated with Kahan compensation.
    pub fn probability_sum(&self) -> f64 {
        let mut sum = 0.0;
        let mut compensation = 0.0;
        for c in &self.coefficients {
            let value = c.norm_sqr() - compensation;
            let next = sum + value;
            compensation = (next - sum) - value;
            sum = next;
        }
        sum
    }
}

/// Chooses a truncation cutoff `K` such that the probability weight beyond
/// `K` is provably at most `tolerance`, and returns it with the certified
/// geometric tail bound.
///
/// The probability ratio between consecutive Fock components is
/// `r_k = (k+1) u^2 / (k+1-m)^2` with `u = g |alpha|`, and it decreases
/// strictly in `k` (the derivative of `(k+1)/(k+1-m)^2` is negative for
/// `k + 1 > m`). Past the point where `r_K < 1`, every later ratio is at
/// most `r_K`, so the tail is dominated by the geometric series
/// `|c_K|^2 r/(1-r)`.
fn certified_cutoff(params: &MpaacsParams, tolerance: f64) -> (usize, f64) {
    let m = params.added_photons as usize;
    let u2 = params.amplified_intensity();
    if params.is_vacuum_seed() {
        return (m, 0.0);
    }
    let u = u2.sqrt();
    let mut cutoff = m + (u2 + 8.0 * u + 20.0).ceil() as usize;
    let extension = (2.0 * u).ceil() as usize + 8;
    loop {
        let kf = (cutoff + 1) as f64;
        let ratio = kf * u2 / ((kf - m as f64) * (kf - m as f64));
        if ratio <= 0.95 {
            let log_prob = 2.0 * log_coefficient_magnitude(params, cutoff);
            let bound = log_prob.exp() * ratio / (1.0 - ratio);
            if bound <= tolerance {
                return (cutoff, bound);
            }
        }
        cutoff += extension;
    }
}

/// `ln |c_k|` of the normalized closed-form coefficient, valid for `k >= m`
/// and a non-vacuum seed.
fn log_coefficient_magnitude(params: &MpaacsParams, k: usize) -> f64 {
    let m = params.added_photons as usize;
    let u2 = params.amplified_intensity();
    let log_norm = log_factorial(params.added_photons as u64) + laguerre(params.added_photons, -u2).ln();
    0.5 * log_factorial(k as u64) + (k - m) as f64 * 0.5 * u2.ln() - 0.5 * u2
        - log_factorial((k - m) as u64)
        - 0.5 * log_norm
}

fn validated_tolerance(tolerance: f64) -> Result<f64, Error> {
    if tolerance > 0.0 && tolerance < 1.0 {
        Ok(tolerance)
    } else {
        Err(Error::ToleranceOutOfRange(tolerance))
    }
}

/// Builds the normalized Fock expansion from the closed-form coefficients
/// `c_k = sqrt(k!) (g·alpha)^{k-m} e^{-g^2|alpha|^2/2}
///        / ((k-m)! sqrt(m! L_m(-g^2|alpha|^2)))`.
///
/// Magnitudes are assembled in log space so that large `g |alpha|` (photon
/// numbers in the thousands) stay finite.
pub fn fock_coefficients(params: &MpaacsParams, tolerance: f64) -> Result<FockVector, Error> {
    let tolerance = validated_tolerance(tolerance)?;
    let m = params.added_photons as usize;

    if params.is_vacuum_seed() {
        return Ok(FockVector {
            params: *params,
            offset: m,
            coefficients: vec![Complex64::new(1.0, 0.0)],
            tail_bound: 0.0,
        });
    }

    let (cutoff, geometric_bound) = certified_cutoff(params, tolerance);
    let phase = params.amplified_alpha().arg();
    let mut coefficients = Vec::with_capacity(cutoff - m + 1);
    for k in m..=cutoff {
        let magnitude = log_coefficient_magnitude(params, k).exp();
        coefficients.push(Complex64::from_polar(magnitude, (k - m) as f64 * phase));
    }
    let mut vector = FockVector {
        params: *params,
        offset: m,
        coefficients,
        tail_bound: geometric_bound,
    };
    let deficit = (1.0 - vector.probability_sum()).max(0.0);
    vector.tail_bound = geometric_bound.max(deficit);
    Ok(vector)
}

/// Builds the state by adding `m` photons to the seed coherent state first
/// and amplifying afterwards: normalize `g^n a†^m |alpha>`.
pub fn build_addition_first(params: &MpaacsParams, tolerance: f64) -> Result<FockVector, Error> {
    let log_unnormalized = |params: &MpaacsParams, k: usize| {
        let m = params.added_photons as usize;
        let a2 = params.alpha.norm_sqr();
        // coherent coefficient at k-m, raised m times, then scaled by g^k
        -0.5 * a2 + (k - m) as f64 * 0.5 * a2.ln() - 0.5 * log_factorial((k - m) as u64)
            + 0.5 * (log_factorial(k as u64) - log_factorial((k - m) as u64))
            + k as f64 * params.gain.ln()
    };
    build_route(params, tolerance, log_unnormalized)
}

/// Builds the state by amplifying the seed coherent state first and adding
/// `m` photons afterwards: normalize `a†^m g^n |alpha>`.
pub fn build_amplification_first(
    params: &MpaacsParams,
    tolerance: f64,
) -> Result<FockVector, Error> {
    let log_unnormalized = |params: &MpaacsParams, k: usize| {
        let m = params.added_photons as usize;
        let a2 = params.alpha.norm_sqr();
        // coherent coefficient at k-m, scaled by g^{k-m}, then raised m times
        -0.5 * a2 + (k - m) as f64 * 0.5 * a2.ln() - 0.5 * log_factorial((k - m) as u64)
            + (k - m) as f64 * params.gain.ln()
            + 0.5 * (log_factorial(k as u64) - log_factorial((k - m) as u64))
    };
    build_route(params, tolerance, log_unnormalized)
}

fn build_route<F>(params: &MpaacsParams, tolerance: f64, log_unnormalized: F) -> Result<FockVector, Error>
where
    F: Fn(&MpaacsParams, usize) -> f64,
{
    let tolerance = validated_tolerance(tolerance)?;
    let m = params.added_photons as usize;

    if params.is_vacuum_seed() {
        // Both orderings send |0> to a pure Fock state |m>.
        return Ok(FockVector {
            params: *params,
            offset: m,
            coefficients: vec![Complex64::new(1.0, 0.0)],
            tail_bound: 0.0,
        });
    }

    let (cutoff, geometric_bound) = certified_cutoff(params, tolerance);
    let phase = params.alpha.arg();

    let log_magnitudes: Vec<f64> = (m..=cutoff).map(|k| log_unnormalized(params, k)).collect();
    let peak = log_magnitudes.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let mut norm_sqr = 0.0;
    let mut shifted = Vec::with_capacity(log_magnitudes.len());
    for &lm in &log_magnitudes {
        let value = (lm - peak).exp();
        norm_sqr += value * value;
        shifted.push(value);
    }
    let norm = norm_sqr.sqrt();

    let coefficients = shifted
        .iter()
        .enumerate()
        .map(|(j, &magnitude)| Complex64::from_polar(magnitude / norm, j as f64 * phase))
        .collect();

    Ok(FockVector {
        params: *params,
        offset: m,
        coefficients,
        tail_bound: geometric_bound,
    })
}

/// Hermitian density matrix `rho_kl = c_k conj(c_l)` of a pure state on the
/// truncated Fock window `0 ..= truncation_cutoff`.
#[derive(Debug, Clone)]
pub struct DensityMatrix {
    dim: usize,
    entries: Vec<Complex64>,
    trace_defect: f64,
}

impl DensityMatrix {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, k: usize, l: usize) -> Complex64 {
        self.entries[k * self.dim + l]
    }

    /// `|1 - trace|`, inherited from the state truncation.
    pub fn trace_defect(&self) -> f64 {
        self.trace_defect
    }

    /// `tr(rho^2)`, equal to 1 for an exactly represented pure state.
    pub fn purity(&self) -> f64 {
        let mut sum = 0.0;
        for entry in &self.entries {
            sum += entry.norm_sqr();
        }
        sum
    }
}

/// Outer product of a Fock vector with itself, embedded at the correct
/// photon-number offsets (rows below `offset` are zero).
pub fn density_matrix(state: &FockVector) -> DensityMatrix {
    let dim = state.truncation_cutoff() + 1;
    let mut entries = vec![Complex64::new(0.0, 0.0); dim * dim];
    let offset = state.offset();
    for k in offset..dim {
        let ck = state.coeff(k);
        for l in offset..dim {
            entries[k * dim + l] = ck * state.coeff(l).conj();
        }
    }
    let mut trace = 0.0;
    let mut compensation = 0.0;
    for k in 0..dim {
        let value = entries[k * dim + k].re - compensation;
        let next = trace + value;
        compensation = (next - trace) - value;
        trace = next;
    }
    DensityMatrix {
        dim,
        entries,
        trace_defect: (1.0 - trace).abs(),
    }
}

/// Photon-number distribution `(k, |c_k|^2)` for `k` from the state offset
/// to its truncation cutoff.
pub fn pnd(state: &FockVector) -> Vec<(usize, f64)> {
    (state.offset()..=state.truncation_cutoff())
        .map(|k| (k, state.coeff(k).norm_sqr()))
        .collect()
}

/// The recognized exact parameter degeneracies of the family.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StateClass {
    /// `alpha = 0`, `m = 0`: the vacuum.
    Vacuum,
    /// `alpha = 0`, `m > 0`: the Fock state `|m>`.
    Fock,
    /// `g = 1`, `m = 0`: the seed coherent state.
    Coherent,
    /// `m = 0`, `g > 1`: a coherent state of amplitude `g * alpha`.
    AmplifiedCoherent,
    /// `g = 1`, `m > 0`: a photon-added coherent state.
    PhotonAddedCoherent,
    /// No degeneracy applies.
    General,
}

impl StateClass {
    pub fn label(&self) -> &'static str {
        match self {
            StateClass::Vacuum => "vacuum",
            StateClass::Fock => "fock",
            StateClass::Coherent => "coherent",
            StateClass::AmplifiedCoherent => "amplified-coherent",
            StateClass::PhotonAddedCoherent => "photon-added-coherent",
            StateClass::General => "general",
        }
    }
}

/// Classifies the exact special cases, by exact parameter equality (no
/// tolerance): vacuum and Fock first (`alpha == 0`), then the `m == 0` and
/// `g == 1` degeneracies.
pub fn classify_special_case(params: &MpaacsParams) -> StateClass {
    let m = params.added_photons;
    if params.is_vacuum_seed() {
        return if m == 0 { StateClass::Vacuum } else { StateClass::Fock };
    }
    match (params.gain == 1.0, m == 0) {
        (true, true) => StateClass::Coherent,
        (false, true) => StateClass::AmplifiedCoherent,
        (true, false) => StateClass::PhotonAddedCoherent,
        (false, false) => StateClass::General,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(alpha: f64, gain: f64, m: u32) -> MpaacsParams {
        MpaacsParams::new(Complex64::new(alpha, 0.0), gain, m).unwrap()
    }

    #[test]
    fn constructor_rejects_bad_inputs() {
        assert!(MpaacsParams::new(Complex64::new(0.0, 0.0), 0.5, 0).is_err());
        assert!(MpaacsParams::new(Complex64::new(f64::NAN, 0.0), 2.0, 0).is_err());
        assert!(MpaacsParams::new(Complex64::new(0.0, 0.0), f64::INFINITY, 0).is_err());
        assert!(MpaacsParams::from_polar(-1.0, 0.0, 2.0, 0).is_err());
    }

    #[test]
    fn normalization_closed_forms() {
        // m = 0 always normalizes to 1.
        let n = normalization(&params(1.7, 2.5, 0));
        assert_eq!(n.total, 1.0);

        // alpha = 1, g = 2, m = 2: 2! L_2(-4) = 2 * 17 = 34.
        let n = normalization(&params(1.0, 2.0, 2));
        assert!((n.total - 34.0).abs() < 1e-12);

        // Route norms differ by g^{2m}.
        assert!((n.addition_first - 16.0 * n.amplification_first).abs() < 1e-9);

        // g = 1 collapses route norms onto the total.
        let n = normalization(&params(0.8, 1.0, 3));
        assert!((n.addition_first - n.total).abs() < 1e-12);
        assert!((n.amplification_first - n.total).abs() < 1e-12);
    }

    #[test]
    fn vacuum_seed_is_a_single_fock_component() {
        let state = fock_coefficients(&params(0.0, 2.0, 2), 1e-12).unwrap();
        assert_eq!(state.offset(), 2);
        assert_eq!(state.truncation_cutoff(), 2);
        assert_eq!(state.coeff(2), Complex64::new(1.0, 0.0));
        assert_eq!(state.tail_bound(), 0.0);
    }

    #[test]
    fn zero_additions_reproduces_the_amplified_coherent_expansion() {
        // g*alpha = 2: Poisson amplitudes e^{-2} 2^k / sqrt(k!).
        let state = fock_coefficients(&params(1.0, 2.0, 0), 1e-14).unwrap();
        for k in 0..=8usize {
            let expected = (-2.0f64).exp() * 2.0f64.powi(k as i32) / factorial(k as u64).sqrt();
            assert!(
                (state.coeff(k).re - expected).abs() < 1e-14,
                "k = {k}: {} vs {expected}",
                state.coeff(k).re
            );
            assert_eq!(state.coeff(k).im, 0.0);
        }
    }

    #[test]
    fn single_addition_spot_value() {
        // alpha = 1, g = 1, m = 1: c_1 = e^{-1/2} / sqrt(2).
        let state = fock_coefficients(&params(1.0, 1.0, 1), 1e-14).unwrap();
        let expected = (-0.5f64).exp() / 2.0f64.sqrt();
        assert!((state.coeff(1).re - expected).abs() < 1e-15);
    }

    #[test]
    fn components_below_the_addition_count_vanish() {
        let state = fock_coefficients(&params(1.3, 1.4, 4), 1e-13).unwrap();
        for k in 0..4 {
            assert_eq!(state.coeff(k), Complex64::new(0.0, 0.0));
        }
        assert!(state.coeff(4).norm() > 0.0);
    }

    #[test]
    fn truncation_is_certified() {
        for (alpha, gain, m) in [(0.5, 1.0, 0), (1.0, 2.0, 2), (2.0, 3.0, 5), (5.0, 3.0, 1)] {
            let tol = 1e-12;
            let state = fock_coefficients(&params(alpha, gain, m), tol).unwrap();
            assert!(state.tail_bound() <= tol, "tail {} at ({alpha}, {gain}, {m})", state.tail_bound());
            let sum = state.probability_sum();
            assert!(sum <= 1.0 + 1e-12);
            assert!(sum + state.tail_bound() >= 1.0 - 1e-15);
        }
    }

    #[test]
    fn both_routes_match_the_closed_form() {
        for (alpha_mag, alpha_phase, gain, m) in [
            (1.0, 0.0, 2.0, 2u32),
            (0.7, 1.1, 1.5, 1),
            (2.0, -0.4, 3.0, 4),
            (0.0, 0.0, 3.0, 1),
        ] {
            let p = MpaacsParams::from_polar(alpha_mag, alpha_phase, gain, m).unwrap();
            let direct = fock_coefficients(&p, 1e-13).unwrap();
            let added = build_addition_first(&p, 1e-13).unwrap();
            let amplified = build_amplification_first(&p, 1e-13).unwrap();
            assert_eq!(direct.truncation_cutoff(), added.truncation_cutoff());
            assert_eq!(direct.truncation_cutoff(), amplified.truncation_cutoff());
            let mut worst = 0.0f64;
            for k in 0..=direct.truncation_cutoff() {
                worst = worst.max((direct.coeff(k) - added.coeff(k)).norm());
                worst = worst.max((direct.coeff(k) - amplified.coeff(k)).norm());
            }
            assert!(worst <= 1e-12, "routes diverge by {worst} at ({alpha_mag}, {gain}, {m})");
        }
    }

    #[test]
    fn tolerance_validation() {
        let p = params(1.0, 2.0, 1);
        assert!(matches!(fock_coefficients(&p, 0.0), Err(Error::ToleranceOutOfRange(_))));
        assert!(matches!(fock_coefficients(&p, 1.0), Err(Error::ToleranceOutOfRange(_))));
        assert!(matches!(build_addition_first(&p, -1.0), Err(Error::ToleranceOutOfRange(_))));
    }

    #[test]
    fn density_matrix_of_a_fock_state_is_a_single_one() {
        let state = fock_coefficients(&params(0.0, 1.0, 2), 1e-12).unwrap();
        let rho = density_matrix(&state);
        assert_eq!(rho.dim(), 3);
        assert_eq!(rho.get(2, 2), Complex64::new(1.0, 0.0));
        assert_eq!(rho.get(0, 0), Complex64::new(0.0, 0.0));
        assert_eq!(rho.get(1, 2), Complex64::new(0.0, 0.0));
        assert_eq!(rho.trace_defect(), 0.0);
        assert!((rho.purity() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn density_matrix_is_hermitian_with_unit_trace() {
        let p = MpaacsParams::from_polar(1.2, 0.9, 2.0, 2).unwrap();
        let state = fock_coefficients(&p, 1e-13).unwrap();
        let rho = density_matrix(&state);
        for k in 0..rho.dim() {
            assert_eq!(rho.get(k, k).im, 0.0);
            for l in 0..rho.dim() {
                let delta = rho.get(k, l) - rho.get(l, k).conj();
                assert_eq!(delta, Complex64::new(0.0, 0.0));
            }
        }
        assert!(rho.trace_defect() < 1e-12);
        assert!(rho.purity() > 1.0 - 1e-11);
    }

    #[test]
    fn pnd_matches_an_independent_poisson_style_sum() {
        // alpha = 1, g = 2, m = 2: rho_kk = k! 2^{2(k-2)} e^{-4} / ((k-2)!^2 * 34).
        let state = fock_coefficients(&params(1.0, 2.0, 2), 1e-13).unwrap();
        let rows = pnd(&state);
        assert_eq!(rows[0].0, 2);
        for &(k, p) in rows.iter().take(12) {
            let j = (k - 2) as u64;
            let expected = factorial(k as u64) * 4.0f64.powi(j as i32) * (-4.0f64).exp()
                / (factorial(j) * factorial(j) * 34.0);
            assert!((p - expected).abs() < 1e-14, "k = {k}: {p} vs {expected}");
        }
        let total: f64 = rows.iter().map(|&(_, p)| p).sum();
        assert!((total - 1.0).abs() < 1e-12);
    }

    #[test]
    fn classification_covers_all_degeneracies() {
        assert_eq!(classify_special_case(&params(0.0, 1.0, 0)), StateClass::Vacuum);
        assert_eq!(classify_special_case(&params(0.0, 2.0, 0)), StateClass::Vacuum);
        assert_eq!(classify_special_case(&params(0.0, 1.5, 3)), StateClass::Fock);
        assert_eq!(classify_special_case(&params(1.0, 1.0, 0)), StateClass::Coherent);
        assert_eq!(classify_special_case(&params(1.0, 2.0, 0)), StateClass::AmplifiedCoherent);
        assert_eq!(classify_special_case(&params(1.0, 1.0, 2)), StateClass::PhotonAddedCoherent);
        assert_eq!(classify_special_case(&params(1.0, 2.0, 2)), StateClass::General);
    }
}
