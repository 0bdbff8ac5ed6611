//! Laguerre polynomials, logarithmic factorials, and exact derivative
//! extraction from exponentials of quadratic forms.
//!
//! The derivative extractor is the workhorse behind the independent
//! evaluation routes: normalizations, moments, density-matrix entries, and
//! Wigner values all arise as mixed partial derivatives, at the origin, of
//! `exp(Q)` where `Q` is a polynomial of degree at most two in a handful of
//! formal variables. The constant term of `Q` factors out exactly, and every
//! remaining monomial has degree at least one, so Taylor terms beyond the
//! total derivative order cannot touch the target monomial: the extraction
//! is a finite sparse-polynomial computation, exact up to f64 rounding.

use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::error::Error;

/// Largest factorial that fits in a `u64`.
const FACTORIAL_TABLE_MAX: u64 = 20;

const FACTORIALS: [u64; 21] = [
    1,
    1,
    2,
    6,
    24,
    120,
    720,
    5_040,
    40_320,
    362_880,
    3_628_800,
    39_916_800,
    479_001_600,
    6_227_020_800,
    87_178_291_200,
    1_307_674_368_000,
    20_922_789_888_000,
    355_687_428_096_000,
    6_402_373_705_728_000,
    121_645_100_408_832_000,
    2_432_902_008_176_640_000,
];

/// Evaluates the Laguerre polynomial `L_m(x)` by the three-term recurrence
/// `(k+1) L_{k+1}(x) = (2k+1-x) L_k(x) - k L_{k-1}(x)`.
///
/// For `x <= 0` (the regime the state normalizations live in, with argument
/// `-g^2 |alpha|^2`) every term in the recurrence is non-negative, so the
/// evaluation is cancellation-free.
pub fn laguerre(m: u32, x: f64) -> f64 {
    if m == 0 {
        return 1.0;
    }
    let mut previous = 1.0;
    let mut current = 1.0 - x;
    for k in 1..m {
        let kf = f64::from(k);
        let next = ((2.0 * kf + 1.0 - x) * current - kf * previous) / (kf + 1.0);
        previous = current;
        current = next;
    }
    current
}

/// Natural logarithm of `n!`.
///
/// Exact (one rounding) from a `u64` table for `n <= 20`; a Stirling series
/// with terms through `n^-7` beyond, which is accurate to well under 1 ulp
/// relative error for n >= 21.
pub fn log_factorial(n: u64) -> f64 {
    if n <= FACTORIAL_TABLE_MAX {
        return (FACTORIALS[n as usize] as f64).ln();
    }
    let x = n as f64;
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    let series = inv * (1.0 / 12.0 + inv2 * (-1.0 / 360.0 + inv2 * (1.0 / 1260.0 - inv2 / 1680.0)));
    (x + 0.5) * x.ln() - x + 0.5 * (2.0 * std::f64::consts::PI).ln() + series
}

/// `n!` as an `f64`, exact for `n <= 20` and via `exp(log_factorial)` beyond.
pub fn factorial(n: u64) -> f64 {
    if n <= FACTORIAL_TABLE_MAX {
        FACTORIALS[n as usize] as f64
    } else {
        log_factorial(n).exp()
    }
}

/// A formal exponent `c + sum_i b_i v_i + sum_{i<=j} q_ij v_i v_j` over named
/// variables, standing for the function `exp(Q)` evaluated near `v = 0`.
///
/// Coefficient maps drop zero entries, and repeated `linear`/`quadratic`
/// calls for the same variable (pair) accumulate, so the representation of a
/// given exponent is canonical.
#[derive(Debug, Clone)]
pub struct QuadraticExponent {
    names: Vec<String>,
    constant: Complex64,
    linear: BTreeMap<usize, Complex64>,
    quadratic: BTreeMap<(usize, usize), Complex64>,
}

/// Variable count cap; monomial degrees are packed one byte per variable.
const MAX_VARIABLES: usize = 8;

impl QuadraticExponent {
    /// Creates an exponent that is identically zero over the named variables.
    pub fn new<I, S>(variables: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let names: Vec<String> = variables.into_iter().map(Into::into).collect();
        QuadraticExponent {
            names,
            constant: Complex64::new(0.0, 0.0),
            linear: BTreeMap::new(),
            quadratic: BTreeMap::new(),
        }
    }

    /// Adds a constant term.
    pub fn constant(mut self, value: Complex64) -> Self {
        self.constant += value;
        self
    }

    /// Adds `coefficient * var`.
    ///
    /// # Panics
    /// Panics if `var` was not declared in [`QuadraticExponent::new`]; the
    /// builder is only ever driven with statically known variable sets.
    pub fn linear(mut self, var: &str, coefficient: Complex64) -> Self {
        let index = self.index_of(var);
        accumulate(&mut self.linear, index, coefficient);
        self
    }

    /// Adds `coefficient * a * b` (an unordered pair; `a == b` adds a square).
    ///
    /// # Panics
    /// Panics if either variable was not declared.
    pub fn quadratic(mut self, a: &str, b: &str, coefficient: Complex64) -> Self {
        let mut ia = self.index_of(a);
        let mut ib = self.index_of(b);
        if ia > ib {
            std::mem::swap(&mut ia, &mut ib);
        }
        accumulate(&mut self.quadratic, (ia, ib), coefficient);
        self
    }

    pub fn variables(&self) -> &[String] {
        &self.names
    }

    fn index_of(&self, var: &str) -> usize {
        self.names
            .iter()
            .position(|n| n == var)
            .unwrap_or_else(|| panic!("variable `{var}` not declared in this exponent"))
    }

    fn lookup(&self, var: &str) -> Option<usize> {
        self.names.iter().position(|n| n == var)
    }
}

fn accumulate<K: Ord>(map: &mut BTreeMap<K, Complex64>, key: K, value: Complex64) {
    use std::collections::btree_map::Entry;
    match map.entry(key) {
        Entry::Vacant(slot) => {
            if value != Complex64::new(0.0, 0.0) {
                slot.insert(value);
            }
        }
        Entry::Occupied(mut slot) => {
            let sum = *slot.get() + value;
            if sum == Complex64::new(0.0, 0.0) {
                slot.remove();
            } else {
                slot.insert(sum);
            }
        }
    }
}

/// Partial-derivative orders per named variable; unnamed variables get
/// order zero.
#[derive(Debug, Clone, Default)]
pub struct DerivativeOrder {
    orders: BTreeMap<String, u32>,
}

impl DerivativeOrder {
    pub fn new() -> Self {
        DerivativeOrder::default()
    }

    /// Sets the derivative order for one variable (replacing any earlier
    /// order given for it).
    pub fn var(mut self, name: &str, order: u32) -> Self {
        self.orders.insert(name.to_string(), order);
        self
    }

    /// Sum of all requested orders.
    pub fn total(&self) -> u32 {
        self.orders.values().sum()
    }
}

/// Monomial degrees packed one byte per variable.
type MonomialKey = u64;

fn bump_degree(key: MonomialKey, var: usize, by: u8, caps: &[u8]) -> Option<MonomialKey> {
    let shift = 8 * var;
    let degree = ((key >> shift) & 0xff) as u8;
    let new = degree + by;
    if new > caps[var] {
        None
    } else {
        Some((key & !(0xffu64 << shift)) | ((new as u64) << shift))
    }
}

/// Computes the mixed partial derivative of `exp(Q)` at the origin,
/// `d^{k_1}/dv_1 ... d^{k_n}/dv_n exp(Q) |_{v=0}`.
///
/// The polynomial part of `Q` is expanded as a truncated Taylor series of
/// `exp`, pruning every monomial whose degree in any variable exceeds the
/// requested order; the target coefficient times the product of order
/// factorials (times `exp` of the constant term) is the derivative. All
/// arithmetic is plain complex f64 on exactly representable combinatorial
/// structure, so no series truncation error is incurred.
pub fn extract_derivative(
    exponent: &QuadraticExponent,
    order: &DerivativeOrder,
) -> Result<Complex64, Error> {
    let nvars = exponent.names.len();
    if nvars > MAX_VARIABLES {
        return Err(Error::TooManyVariables {
            max: MAX_VARIABLES,
            got: nvars,
        });
    }

    let mut caps = vec![0u8; nvars];
    for (name, &d) in &order.orders {
        let index = exponent
            .lookup(name)
            .ok_or_else(|| Error::UnknownVariable(name.clone()))?;
        if d > u8::MAX as u32 {
            return Err(Error::MomentOrderTooLarge {
                k: d,
                l: 0,
                max: u8::MAX as u32,
            });
        }
        caps[index] = d as u8;
    }
    let total: u32 = caps.iter().map(|&c| c as u32).sum();

    // Terms of the polynomial part of Q as (degree-increment, coefficient).
    let mut steps: Vec<(usize, u8, Option<usize>, Complex64)> = Vec::new();
    for (&i, &c) in &exponent.linear {
        steps.push((i, 1, None, c));
    }
    for (&(i, j), &c) in &exponent.quadratic {
        if i == j {
            steps.push((i, 2, None, c));
        } else {
            steps.push((i, 1, Some(j), c));
        }
    }

    let zero = Complex64::new(0.0, 0.0);
    let one = Complex64::new(1.0, 0.0);

    let mut accumulated: BTreeMap<MonomialKey, Complex64> = BTreeMap::new();
    accumulated.insert(0, one);
    let mut term = accumulated.clone();

    for j in 1..=u64::from(total) {
        let mut next: BTreeMap<MonomialKey, Complex64> = BTreeMap::new();
        let inv_j = 1.0 / j as f64;
        for (&key, &coefficient) in &term {
            for &(i, by, other, qc) in &steps {
                let Some(mut new_key) = bump_degree(key, i, by, &caps) else {
                    continue;
                };
                if let Some(o) = other {
                    let Some(k2) = bump_degree(new_key, o, 1, &caps) else {
                        continue;
                    };
                    new_key = k2;
                }
                let contribution = coefficient * qc * inv_j;
                accumulate(&mut next, new_key, contribution);
            }
        }
        if next.is_empty() {
            break;
        }
        for (&key, &value) in &next {
            accumulate(&mut accumulated, key, value);
        }
        term = next;
    }

    let target: MonomialKey = caps
        .iter()
        .enumerate()
        .fold(0u64, |key, (i, &c)| key | ((c as u64) << (8 * i)));
    let coefficient = accumulated.get(&target).copied().unwrap_or(zero);

    let mut order_factorials = 1.0;
    for &c in &caps {
        order_factorials *= factorial(u64::from(c));
    }

    Ok(exponent.constant.exp() * coefficient * order_factorials)
}
