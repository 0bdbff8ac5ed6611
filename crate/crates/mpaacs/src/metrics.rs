//! Moments, quadrature statistics, effective gain, equivalent input noise,
//! squeezing thresholds, and parameter sweeps.
//!
//! Every normally ordered moment is computed by two unrelated engines: a
//! generating-representation derivative (see [`crate::generating`]) and a
//! brute-force sum over the truncated Fock expansion. The two must agree or
//! the evaluation fails loudly; an engine mismatch signals an implementation
//! bug, not bad user input.

use num_complex::Complex64;

use crate::error::Error;
use crate::exec::{map_indexed, Execution};
use crate::generating;
use crate::state::{fock_coefficients, FockVector, MpaacsParams};

/// Per-index cap on normally ordered moment orders.
pub const MAX_MOMENT_ORDER: u32 = 12;

/// Truncation tolerance used for the Fock-sum moment engine.
const MOMENT_STATE_TOLERANCE: f64 = 1e-14;

/// Largest tolerated disagreement between the two moment engines, relative
/// to `max(1, |value|)`.
const ENGINE_AGREEMENT_LIMIT: f64 = 1e-6;

/// Dual-engine evaluator of normally ordered moments `<a†^k a^l>` for one
/// parameter set; builds its truncated Fock expansion once.
#[derive(Debug, Clone)]
pub struct MomentEngine {
    params: MpaacsParams,
    state: FockVector,
}

impl MomentEngine {
    pub fn new(params: &MpaacsParams) -> Result<Self, Error> {
        Ok(MomentEngine {
            params: *params,
            state: fock_coefficients(params, MOMENT_STATE_TOLERANCE)?,
        })
    }

    /// `<a†^k a^l>` with the cross-engine check; returns the
    /// generating-route value.
    pub fn moment(&self, k: u32, l: u32) -> Result<Complex64, Error> {
        let (value, _) = self.moment_with_gap(k, l)?;
        Ok(value)
    }

    /// Moment plus the measured relative gap between the two engines.
    pub fn moment_with_gap(&self, k: u32, l: u32) -> Result<(Complex64, f64), Error> {
        if k > MAX_MOMENT_ORDER || l > MAX_MOMENT_ORDER {
            return Err(Error::MomentOrderTooLarge {
                k,
                l,
                max: MAX_MOMENT_ORDER,
            });
        }
        let via_generating = generating::moment_amplification_first(&self.params, k, l)?;
        let via_series = self.fock_moment(k, l);
        let gap = (via_generating - via_series).norm()
            / via_generating.norm().max(via_series.norm()).max(1.0);
        if gap > ENGINE_AGREEMENT_LIMIT {
            return Err(Error::MomentEngineMismatch { k, l, gap });
        }
        Ok((via_generating, gap))
    }

    /// Brute-force sum over the truncated Fock expansion:
    /// `<a†^k a^l> = sum_n conj(c_{n-l+k}) c_n sqrt(n!/(n-l)!) sqrt((n-l+k)!/(n-l)!)`.
    fn fock_moment(&self, k: u32, l: u32) -> Complex64 {
        let k = k as usize;
        let l = l as usize;
        let mut sum = Complex64::new(0.0, 0.0);
        let start = self.state.offset().max(l);
        for n in start..=self.state.truncation_cutoff() {
            let partner = n - l + k;
            let other = self.state.coeff(partner);
            if other == Complex64::new(0.0, 0.0) {
                continue;
            }
            // Falling factorials n!/(n-l)! and (n-l+k)!/(n-l)!.
            let mut factor = 1.0f64;
            for i in 0..l {
                factor *= (n - i) as f64;
            }
            let mut raise = 1.0f64;
            for i in 1..=k {
                raise *= (n - l + i) as f64;
            }
            sum += other.conj() * self.state.coeff(n) * (factor * raise).sqrt();
        }
        sum
    }
}

/// One-shot dual-engine moment `<a†^k a^l>`.
pub fn moment(params: &MpaacsParams, k: u32, l: u32) -> Result<Complex64, Error> {
    MomentEngine::new(params)?.moment(k, l)
}

/// All moments with `k + l <= max_total`, plus the worst engine
/// disagreement observed while filling the table.
#[derive(Debug, Clone)]
pub struct MomentTable {
    params: MpaacsParams,
    entries: Vec<(u32, u32, Complex64)>,
    engine_disagreement: f64,
}

impl MomentTable {
    pub fn build(params: &MpaacsParams, max_total: u32) -> Result<Self, Error> {
        if max_total > MAX_MOMENT_ORDER {
            return Err(Error::MomentOrderTooLarge {
                k: max_total,
                l: 0,
                max: MAX_MOMENT_ORDER,
            });
        }
        let engine = MomentEngine::new(params)?;
        let mut entries = Vec::new();
        let mut worst = 0.0f64;
        for k in 0..=max_total {
            for l in 0..=(max_total - k) {
                let (value, gap) = engine.moment_with_gap(k, l)?;
                worst = worst.max(gap);
                entries.push((k, l, value));
            }
        }
        Ok(MomentTable {
            params: *params,
            entries,
            engine_disagreement: worst,
        })
    }

    pub fn params(&self) -> &MpaacsParams {
        &self.params
    }

    pub fn get(&self, k: u32, l: u32) -> Option<Complex64> {
        self.entries
            .iter()
            .find(|&&(ek, el, _)| ek == k && el == l)
            .map(|&(_, _, v)| v)
    }

    pub fn entries(&self) -> &[(u32, u32, Complex64)] {
        &self.entries
    }

    pub fn engine_disagreement(&self) -> f64 {
        self.engine_disagreement
    }
}

/// First and second quadrature statistics of the state, for
/// `x = (a + a†)/sqrt(2)` and `p = (a - a†)/(i sqrt(2))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureStats {
    pub mean_x: f64,
    pub mean_p: f64,
    pub var_x: f64,
    pub var_p: f64,
}

/// Quadrature means and variances from the moments `(0,1)`, `(1,1)`,
/// `(0,2)`:
/// `var_x = (1 + 2<a†a> + 2 Re<a^2>)/2 - mean_x^2` and the `p` analogue
/// with the sign of `Re<a^2>` flipped.
pub fn quadrature_stats(params: &MpaacsParams) -> Result<QuadratureStats, Error> {
    let engine = MomentEngine::new(params)?;
    let a = engine.moment(0, 1)?;
    let a_squared = engine.moment(0, 2)?;
    let occupation = engine.moment(1, 1)?.re;
    let mean_x = 2.0f64.sqrt() * a.re;
    let mean_p = 2.0f64.sqrt() * a.im;
    let var_x = 0.5 * (1.0 + 2.0 * occupation + 2.0 * a_squared.re) - mean_x * mean_x;
    let var_p = 0.5 * (1.0 + 2.0 * occupation - 2.0 * a_squared.re) - mean_p * mean_p;
    Ok(QuadratureStats {
        mean_x,
        mean_p,
        var_x,
        var_p,
    })
}

/// Amplification factor `g_eff = |<a>_psi / alpha|`.
///
/// For real positive `alpha` this is the quadrature-mean ratio
/// `<x>_out / <x>_in`; for complex `alpha` the modulus of the complex ratio
/// is reported (the state family is phase covariant, so the modulus does not
/// depend on the seed phase).
pub fn effective_gain(params: &MpaacsParams) -> Result<f64, Error> {
    if params.is_vacuum_seed() {
        return Err(Error::GainUndefinedForVacuumInput);
    }
    let engine = MomentEngine::new(params)?;
    let a = engine.moment(0, 1)?;
    Ok((a / params.alpha()).norm())
}

/// Output noise referred to the input: `n_eq = var_x / g_eff^2 - 0.5`.
pub fn equivalent_input_noise(params: &MpaacsParams) -> Result<f64, Error> {
    if params.is_vacuum_seed() {
        return Err(Error::GainUndefinedForVacuumInput);
    }
    let stats = quadrature_stats(params)?;
    let gain = effective_gain(params)?;
    Ok(stats.var_x / (gain * gain) - 0.5)
}

/// Gain, equivalent input noise, and the squeezing flag in one bundle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AmplifierReport {
    pub params: MpaacsParams,
    pub g_eff: f64,
    pub n_eq: f64,
    pub squeezed_x: bool,
}

pub fn amplifier_report(params: &MpaacsParams) -> Result<AmplifierReport, Error> {
    let stats = quadrature_stats(params)?;
    let g_eff = effective_gain(params)?;
    let n_eq = stats.var_x / (g_eff * g_eff) - 0.5;
    Ok(AmplifierReport {
        params: *params,
        g_eff,
        n_eq,
        squeezed_x: stats.var_x < 0.5,
    })
}

/// Squeezing onset in the product variable `u = g |alpha|`: the root of
/// `var_x(u) = 1/2` on `[0.4, 1.6]`, located by bisection to an absolute
/// tolerance of 1e-8 (evaluated at `g = 1`, which loses no generality since
/// the state depends on `g` and `alpha` only through `g alpha`).
///
/// As a guard the variance is re-checked just past the root; squeezing must
/// actually hold at `u* + 0.01`.
pub fn squeezing_threshold(m: u32) -> Result<f64, Error> {
    if !(1..=8).contains(&m) {
        return Err(Error::ThresholdOrderOutOfRange(m));
    }
    let excess = |u: f64| -> Result<f64, Error> {
        let params = MpaacsParams::new(Complex64::new(u, 0.0), 1.0, m)?;
        Ok(quadrature_stats(&params)?.var_x - 0.5)
    };

    let mut lo = 0.4;
    let mut hi = 1.6;
    let mut f_lo = excess(lo)?;
    let f_hi = excess(hi)?;
    if f_lo.signum() == f_hi.signum() {
        return Err(Error::ThresholdBracketFailed { m, lo, hi });
    }
    while hi - lo > 1e-8 {
        let mid = 0.5 * (lo + hi);
        let f_mid = excess(mid)?;
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    let root = 0.5 * (lo + hi);
    if excess(root + 0.01)? >= 0.0 {
        return Err(Error::ThresholdNotSqueezedBeyond { m });
    }
    Ok(root)
}

/// Which scalar a [`sweep`] tabulates against `|alpha|`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepQuantity {
    EffectiveGain,
    VarX,
    EquivalentInputNoise,
}

impl SweepQuantity {
    pub fn label(&self) -> &'static str {
        match self {
            SweepQuantity::EffectiveGain => "g_eff",
            SweepQuantity::VarX => "var_x",
            SweepQuantity::EquivalentInputNoise => "n_eq",
        }
    }

    fn needs_nonzero_alpha(&self) -> bool {
        !matches!(self, SweepQuantity::VarX)
    }
}

/// Tabulates a quantity over a uniform `|alpha|` grid at fixed `g` and `m`
/// (seed phase 0), in ascending `|alpha|` order.
pub fn sweep(
    quantity: SweepQuantity,
    alpha_range: (f64, f64, usize),
    gain: f64,
    m: u32,
) -> Result<Vec<(f64, f64)>, Error> {
    sweep_with(quantity, alpha_range, gain, m, Execution::default())
}

/// [`sweep`] with an explicit execution strategy; output is identical for
/// both strategies.
pub fn sweep_with(
    quantity: SweepQuantity,
    alpha_range: (f64, f64, usize),
    gain: f64,
    m: u32,
    exec: Execution,
) -> Result<Vec<(f64, f64)>, Error> {
    let (lo, hi, count) = alpha_range;
    if count == 0 {
        return Err(Error::EmptySweep);
    }
    if lo > hi {
        return Err(Error::InvertedSweepRange { lo, hi });
    }
    if quantity.needs_nonzero_alpha() && lo <= 0.0 {
        return Err(Error::NonPositiveSweepStart {
            quantity: quantity.label(),
            lo,
        });
    }
    if lo < 0.0 {
        return Err(Error::NonPositiveSweepStart {
            quantity: quantity.label(),
            lo,
        });
    }

    let abscissas: Vec<f64> = if count == 1 {
        vec![lo]
    } else {
        let step = (hi - lo) / (count - 1) as f64;
        (0..count).map(|i| lo + i as f64 * step).collect()
    };

    let rows: Vec<Result<(f64, f64), Error>> = map_indexed(exec, abscissas.len(), |i| {
        let alpha_mag = abscissas[i];
        let params = MpaacsParams::new(Complex64::new(alpha_mag, 0.0), gain, m)?;
        let value = match quantity {
            SweepQuantity::EffectiveGain => effective_gain(&params)?,
            SweepQuantity::VarX => quadrature_stats(&params)?.var_x,
            SweepQuantity::EquivalentInputNoise => equivalent_input_noise(&params)?,
        };
        Ok((alpha_mag, value))
    });
    rows.into_iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(alpha: f64, gain: f64, m: u32) -> MpaacsParams {
        MpaacsParams::new(Complex64::new(alpha, 0.0), gain, m).unwrap()
    }

    #[test]
    fn coherent_and_fock_mean_photon_numbers() {
        let value = moment(&params(1.0, 2.0, 0), 1, 1).unwrap();
        assert!((value.re - 4.0).abs() < 1e-12);
        let value = moment(&params(0.0, 1.0, 3), 1, 1).unwrap();
        assert!((value.re - 3.0).abs() < 1e-12);
    }

    #[test]
    fn single_addition_field_amplitude() {
        // alpha = 1, g = 1, m = 1: <a> = 1.5.
        let value = moment(&params(1.0, 1.0, 1), 0, 1).unwrap();
        assert!((value.re - 1.5).abs() < 1e-12);
        assert!(value.im.abs() < 1e-14);
    }

    #[test]
    fn moment_order_cap_is_enforced() {
        let err = moment(&params(1.0, 1.0, 0), 13, 0).unwrap_err();
        assert!(matches!(err, Error::MomentOrderTooLarge { .. }));
    }

    #[test]
    fn conjugation_symmetry_of_the_table() {
        let p = MpaacsParams::from_polar(1.1, 0.7, 1.5, 2).unwrap();
        let table = MomentTable::build(&p, 5).unwrap();
        for &(k, l, value) in table.entries() {
            let partner = table.get(l, k).unwrap();
            assert!((value - partner.conj()).norm() < 1e-12);
        }
        assert!((table.get(0, 0).unwrap() - Complex64::new(1.0, 0.0)).norm() < 1e-12);
        assert!(table.engine_disagreement() <= 1e-9);
    }

    #[test]
    fn quadrature_stats_on_reference_states() {
        // Any m = 0 state is a coherent state: both variances 0.5.
        let stats = quadrature_stats(&params(1.3, 2.0, 0)).unwrap();
        assert!((stats.var_x - 0.5).abs() < 1e-12);
        assert!((stats.var_p - 0.5).abs() < 1e-12);
        assert!((stats.mean_x - 2.0f64.sqrt() * 2.6).abs() < 1e-10);

        // Fock |1>: var_x = var_p = 1.5.
        let stats = quadrature_stats(&params(0.0, 1.0, 1)).unwrap();
        assert!((stats.var_x - 1.5).abs() < 1e-12);
        assert!((stats.var_p - 1.5).abs() < 1e-12);
        assert_eq!(stats.mean_x, 0.0);
    }

    #[test]
    fn single_addition_variance_crosses_one_half_at_unit_product() {
        // m = 1: var_x(u) - 1/2 changes sign exactly at u = 1.
        let at_root = quadrature_stats(&params(1.0, 1.0, 1)).unwrap();
        assert!((at_root.var_x - 0.5).abs() < 1e-12);
        let below = quadrature_stats(&params(0.9, 1.0, 1)).unwrap();
        assert!(below.var_x > 0.5);
        let above = quadrature_stats(&params(1.1, 1.0, 1)).unwrap();
        assert!(above.var_x < 0.5);
    }

    #[test]
    fn effective_gain_closed_forms() {
        // m = 0: exactly g.
        let gain = effective_gain(&params(0.7, 2.5, 0)).unwrap();
        assert!((gain - 2.5).abs() < 1e-11);

        // m = 1, g = 2, |alpha| = 1: 2 (2 + 4)/(1 + 4) = 2.4.
        let gain = effective_gain(&params(1.0, 2.0, 1)).unwrap();
        assert!((gain - 2.4).abs() < 1e-11);

        // m = 2, g = 3, |alpha| = 1e-5: approaches (m+1) g = 9.
        let gain = effective_gain(&params(1e-5, 3.0, 2)).unwrap();
        assert!((gain - 9.0).abs() < 1e-3);
    }

    #[test]
    fn gain_rejects_a_vacuum_seed() {
        let err = effective_gain(&params(0.0, 2.0, 1)).unwrap_err();
        assert!(matches!(err, Error::GainUndefinedForVacuumInput));
    }

    #[test]
    fn equivalent_input_noise_reference_values() {
        // m = 0, g = 2: 0.5/4 - 0.5 = -0.375 for any alpha.
        for alpha in [0.3, 1.0, 2.5] {
            let noise = equivalent_input_noise(&params(alpha, 2.0, 0)).unwrap();
            assert!((noise + 0.375).abs() < 1e-10, "alpha = {alpha}: {noise}");
        }
        // Identity channel: zero added noise.
        let noise = equivalent_input_noise(&params(1.0, 1.0, 0)).unwrap();
        assert!(noise.abs() < 1e-12);
        // m = 1, g = 2, small alpha: 0.375/4 - 0.5.
        let noise = equivalent_input_noise(&params(1e-3, 2.0, 1)).unwrap();
        assert!((noise + 0.40625).abs() < 1e-3);
    }

    #[test]
    fn amplifier_report_flags_squeezing() {
        let report = amplifier_report(&params(2.0, 1.0, 1)).unwrap();
        assert!(report.squeezed_x);
        assert!(report.n_eq < 0.0);
        let report = amplifier_report(&params(0.5, 1.0, 1)).unwrap();
        assert!(!report.squeezed_x);
    }

    #[test]
    fn single_addition_threshold_is_at_unit_product() {
        let root = squeezing_threshold(1).unwrap();
        assert!((root - 1.0).abs() < 1e-6, "{root}");
    }

    #[test]
    fn threshold_rejects_unsupported_orders() {
        assert!(matches!(squeezing_threshold(0), Err(Error::ThresholdOrderOutOfRange(0))));
        assert!(matches!(squeezing_threshold(9), Err(Error::ThresholdOrderOutOfRange(9))));
    }

    #[test]
    fn sweeps_validate_ranges_and_preserve_order() {
        let err = sweep(SweepQuantity::EffectiveGain, (0.0, 2.0, 5), 2.0, 1).unwrap_err();
        assert!(matches!(err, Error::NonPositiveSweepStart { .. }));

        let rows = sweep(SweepQuantity::VarX, (0.0, 2.0, 5), 2.0, 0).unwrap();
        assert_eq!(rows.len(), 5);
        assert_eq!(rows[0].0, 0.0);
        assert_eq!(rows[4].0, 2.0);
        for &(_, value) in &rows {
            assert!((value - 0.5).abs() < 1e-12);
        }

        let seq = sweep_with(
            SweepQuantity::EquivalentInputNoise,
            (0.1, 3.0, 16),
            2.0,
            1,
            Execution::Sequential,
        )
        .unwrap();
        let par = sweep_with(
            SweepQuantity::EquivalentInputNoise,
            (0.1, 3.0, 16),
            2.0,
            1,
            Execution::Parallel,
        )
        .unwrap();
        assert_eq!(seq, par);
    }
}
