//! Exact expectation formulas for skyline statistics of random point sets:
//! harmonic recurrences, dominance-layer sums, categorical closed forms,
//! cycle expectations, and a uniform lower bound built from an error
//! integral.
//!
//! Everything in this module is a finite formula, not an asymptotic: where
//! the value is a rational number it is computed in exact big-rational
//! arithmetic, and where a float is returned the only rounding is float
//! rounding, with no hidden truncation of the underlying sum.

use crate::bignum::{self, Hp};
use crate::special;
use crate::{Error, Result};
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Pow, Zero};
use std::collections::HashMap;
use std::fmt;

/// An exact rational value with on-demand decimal rendering.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct ExactValue(BigRational);

impl ExactValue {
    pub fn rational(&self) -> &BigRational {
        &self.0
    }

    pub fn into_rational(self) -> BigRational {
        self.0
    }

    /// Nearest double; goes through a 17-significant-digit decimal so that
    /// values far outside the 64-bit integer range still convert.
    pub fn to_f64(&self) -> f64 {
        self.decimal(17).parse().unwrap_or(f64::NAN)
    }

    /// Decimal string with `sig` significant digits, exact if the value
    /// terminates within them.
    pub fn decimal(&self, sig: usize) -> String {
        bignum::decimal_string(&self.0, sig)
    }
}

impl From<BigRational> for ExactValue {
    fn from(r: BigRational) -> Self {
        ExactValue(r)
    }
}

impl fmt::Display for ExactValue {
    /// Default rendering: 15 significant digits.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.decimal(15))
    }
}

/// Largest `n` accepted by the exact rational paths whose cost is driven by
/// the least common multiple of 1..n (harmonic sums, layer tables).
const EXACT_N_CAP: u64 = 2_000;

/// Generalized harmonic number `H_n^(a)` as an exact rational.
pub fn harmonic(n: u64, a: u32) -> Result<ExactValue> {
    if n < 1 {
        return Err(Error::InvalidParameter("harmonic numbers need n >= 1".into()));
    }
    if a < 1 {
        return Err(Error::InvalidParameter("harmonic order must be at least 1".into()));
    }
    if n > EXACT_N_CAP {
        return Err(Error::Unsupported(format!(
            "exact harmonic sums are limited to n <= {EXACT_N_CAP}; \
             the high-precision skyline-mean path covers larger n"
        )));
    }
    let mut sum = BigRational::zero();
    for j in 1..=n {
        sum += BigRational::new(BigInt::one(), BigInt::from(j).pow(a));
    }
    Ok(sum.into())
}

/// Internal: mean skyline sizes mu(n, j) for j = 1..=d_max under the uniform
/// hypercube model, at `digits` decimal digits of working precision.
///
/// mu(n, 1) = 1 and (d-1) mu(n, d) = sum_{j<d} H_n^{(d-j)} mu(n, j). All
/// quantities are positive, so precision loss is bounded by the operation
/// count, about (d + n d) truncations of one ulp each.
fn mu_table_hp(n: u64, d_max: usize, digits: usize) -> Vec<Hp> {
    let h: Vec<Hp> =
        (1..d_max).map(|a| bignum::harmonic_hp(n, a as u32, digits)).collect();
    let mut mu: Vec<Hp> = Vec::with_capacity(d_max);
    mu.push(Hp::ONE.with_precision(digits).value());
    for m in 2..=d_max {
        let mut acc = Hp::ZERO.with_precision(digits).value();
        for j in 1..m {
            acc += h[m - j - 1].clone() * mu[j - 1].clone();
        }
        mu.push(acc / bignum::hp_from_u64((m - 1) as u64, digits));
    }
    mu
}

/// Expected classical skyline size of n uniform points in the d-cube,
/// by the harmonic-number recurrence, evaluated at 60 working digits.
pub fn skyline_mean(n: u64, d: usize) -> Result<f64> {
    Ok(*skyline_mean_table(n, d)?.last().expect("table is nonempty"))
}

/// Expected skyline sizes for every dimension 1..=d_max at once; one
/// harmonic-sum pass per dimension rather than per (call, dimension) pair.
pub fn skyline_mean_table(n: u64, d_max: usize) -> Result<Vec<f64>> {
    if n < 1 || d_max < 1 {
        return Err(Error::InvalidParameter("skyline mean needs n >= 1, d >= 1".into()));
    }
    Ok(mu_table_hp(n, d_max, 60)
        .into_iter()
        .map(|v| v.to_f64().value())
        .collect())
}

/// Decimal rendering of the expected skyline size with `sig` significant
/// digits of output; the working precision carries ten guard digits.
pub fn skyline_mean_decimal(n: u64, d: usize, sig: usize) -> Result<String> {
    if n < 1 || d < 1 {
        return Err(Error::InvalidParameter("skyline mean needs n >= 1, d >= 1".into()));
    }
    let digits = (sig + 10).max(60);
    let mu = mu_table_hp(n, d, digits);
    Ok(bignum::hp_decimal_string(&mu[d - 1], sig))
}

/// Exact rational value of the skyline-mean recurrence, for small n.
pub fn skyline_mean_exact(n: u64, d: usize) -> Result<ExactValue> {
    if n < 1 || d < 1 {
        return Err(Error::InvalidParameter("skyline mean needs n >= 1, d >= 1".into()));
    }
    if n > EXACT_N_CAP {
        return Err(Error::Unsupported(format!(
            "exact skyline means are limited to n <= {EXACT_N_CAP}; use skyline_mean"
        )));
    }
    let h: Vec<BigRational> =
        (1..d).map(|a| harmonic(n, a as u32).map(ExactValue::into_rational)).collect::<Result<_>>()?;
    let mut mu: Vec<BigRational> = Vec::with_capacity(d);
    mu.push(BigRational::one());
    for m in 2..=d {
        let mut acc = BigRational::zero();
        for j in 1..m {
            acc += &h[m - j - 1] * &mu[j - 1];
        }
        mu.push(acc / BigRational::from_integer(BigInt::from(m as u64 - 1)));
    }
    Ok(mu.pop().expect("table is nonempty").into())
}

fn check_layer_params(n: u64, d: usize, j: u64) -> Result<()> {
    if n < 1 || d < 1 {
        return Err(Error::InvalidParameter("layer means need n >= 1, d >= 1".into()));
    }
    if j >= n {
        return Err(Error::InvalidParameter(format!(
            "layer index j must be in 0..n, got j = {j} with n = {n}"
        )));
    }
    Ok(())
}

/// Expected number of points dominated (in all d coordinates) by exactly j
/// other points, for n uniform points in the d-cube.
///
/// Evaluates the nested sum over j < i_1 <= ... <= i_{d-1} <= n of
/// 1/(i_1 ... i_{d-1}) by a running-prefix recurrence. Every term is
/// positive, so the float path has no cancellation; its relative error is
/// bounded by the operation count, around n * d1e-16.
pub fn layer_mean_full(n: u64, d: usize, j: u64) -> Result<f64> {
    check_layer_params(n, d, j)?;
    let len = (n - j) as usize;
    if (d as u64 - 1).saturating_mul(n - j) > 200_000_000 {
        return Err(Error::Unsupported(
            "layer-mean table larger than 2e8 cells; use layer_mean_asymptotic".into(),
        ));
    }
    let mut a = vec![1.0f64; len];
    for _ in 1..d {
        let mut acc = 0.0;
        for (idx, slot) in a.iter_mut().enumerate() {
            let i = j + 1 + idx as u64;
            acc += *slot / i as f64;
            *slot = acc;
        }
    }
    Ok(a[len - 1])
}

/// Exact rational version of [`layer_mean_full`], for n <= 200.
pub fn layer_mean_full_exact(n: u64, d: usize, j: u64) -> Result<ExactValue> {
    check_layer_params(n, d, j)?;
    if n > 200 {
        return Err(Error::Unsupported(
            "exact layer means are limited to n <= 200; use layer_mean_full".into(),
        ));
    }
    let len = (n - j) as usize;
    let mut a = vec![BigRational::one(); len];
    for _ in 1..d {
        let mut acc = BigRational::zero();
        for (idx, slot) in a.iter_mut().enumerate() {
            let i = j + 1 + idx as u64;
            acc += &*slot / BigRational::from_integer(BigInt::from(i));
            *slot = acc.clone();
        }
    }
    Ok(a.pop().expect("len >= 1").into())
}

/// Large-n approximation of [`layer_mean_full`]:
/// log(n/(j+1))^{d-1} / (d-1)!. Marked approximate: it carries no error
/// bound at finite n and is exposed for the regime where the table-based
/// evaluation is refused.
pub fn layer_mean_asymptotic(n: u64, d: usize, j: u64) -> Result<f64> {
    check_layer_params(n, d, j)?;
    let l = (n as f64 / (j as f64 + 1.0)).ln();
    if d == 1 {
        return Ok(1.0);
    }
    if l <= 0.0 {
        return Ok(0.0);
    }
    Ok((((d - 1) as f64) * l.ln() - special::ln_gamma(d as f64)).exp())
}

/// Expected number of points 1-dominated by exactly j others. Dual to the
/// full-dominance layers: equals `layer_mean_full(n, d, n-1-j)`.
pub fn layer_mean_one(n: u64, d: usize, j: u64) -> Result<f64> {
    check_layer_params(n, d, j)?;
    layer_mean_full(n, d, n - 1 - j)
}

/// Exact rational version of [`layer_mean_one`], for n <= 200.
pub fn layer_mean_one_exact(n: u64, d: usize, j: u64) -> Result<ExactValue> {
    check_layer_params(n, d, j)?;
    layer_mean_full_exact(n, d, n - 1 - j)
}

/// Large-n approximation of the 1-dominance layer for j = o(sqrt n):
/// binom(j+d-1, j) * n^{1-d}.
pub fn layer_mean_one_asymptotic(n: u64, d: usize, j: u64) -> Result<f64> {
    check_layer_params(n, d, j)?;
    Ok(special::binomial(j + d as u64 - 1, j) * (n as f64).powi(1 - d as i32))
}

fn check_levels(levels: &[u32]) -> Result<()> {
    if levels.is_empty() {
        return Err(Error::InvalidParameter("need at least one level count".into()));
    }
    if levels.iter().any(|&u| u < 2) {
        return Err(Error::InvalidParameter("every level count must be at least 2".into()));
    }
    Ok(())
}

/// Sum over coordinate subsets S with |S| <= cmax of
/// prod_{j in S} gain_j * prod_{j not in S} base_j, by a coefficient
/// recurrence over dimensions. Errors if the (exact) value overflows u128.
fn truncated_subset_sum(factors: &[(u128, u128)], cmax: usize) -> Result<u128> {
    let overflow =
        || Error::Unsupported("categorical grid exceeds 128-bit volume arithmetic".into());
    let mut f = vec![0u128; cmax + 1];
    f[0] = 1;
    for &(base, gain) in factors {
        for c in (0..=cmax).rev() {
            let keep = f[c].checked_mul(base).ok_or_else(overflow)?;
            let take = if c > 0 {
                f[c - 1].checked_mul(gain).ok_or_else(overflow)?
            } else {
                0
            };
            f[c] = keep.checked_add(take).ok_or_else(overflow)?;
        }
    }
    let mut total = 0u128;
    for &v in &f {
        total = total.checked_add(v).ok_or_else(overflow)?;
    }
    Ok(total)
}

/// Number of grid points that k-dominate `x` on the grid with the given
/// per-dimension level counts.
///
/// A dominator exceeds `x` on some coordinate set S with |S| <= d-k, sits at
/// or below `x` elsewhere, and differs from `x` somewhere outside S. Summing
/// over S gives sum_S prod_{S}(u_j - x_j) * (prod_{!S} x_j - 1), evaluated
/// here as two truncated subset sums.
pub fn categorical_volume(x: &[u32], k: usize, levels: &[u32]) -> Result<u128> {
    check_levels(levels)?;
    let d = levels.len();
    if x.len() != d {
        return Err(Error::DimensionMismatch { expected: d, got: x.len() });
    }
    if k < 1 || k > d {
        return Err(Error::KOutOfRange { k, d });
    }
    for (j, (&xj, &uj)) in x.iter().zip(levels).enumerate() {
        if xj < 1 || xj > uj {
            return Err(Error::InvalidParameter(format!(
                "coordinate {} of the grid point is {}, outside 1..={}",
                j + 1,
                xj,
                uj
            )));
        }
    }
    let with_base: Vec<(u128, u128)> = x
        .iter()
        .zip(levels)
        .map(|(&xj, &uj)| (u128::from(xj), u128::from(uj - xj)))
        .collect();
    let unit_base: Vec<(u128, u128)> =
        with_base.iter().map(|&(_, g)| (1u128, g)).collect();
    let p1 = truncated_subset_sum(&with_base, d - k)?;
    let p2 = truncated_subset_sum(&unit_base, d - k)?;
    Ok(p1 - p2)
}

/// Default ceiling on the grid size enumerated by [`categorical_mean`].
pub const CATEGORICAL_GRID_CAP: u128 = 1 << 20;

/// Expected k-dominant skyline size of n uniform draws from the grid, as an
/// exact rational: n * sum_x (u - |B_k(x)|)^{n-1} / u^n over grid points x,
/// where u is the grid size and |B_k(x)| counts the dominators of x.
///
/// When every level count is 2 the grid sum collapses to a binomial sum over
/// the number of 2-coordinates, so that path has no grid-size cap.
pub fn categorical_mean(n: u64, k: usize, levels: &[u32]) -> Result<ExactValue> {
    categorical_mean_capped(n, k, levels, CATEGORICAL_GRID_CAP)
}

/// [`categorical_mean`] with an explicit grid-size ceiling.
pub fn categorical_mean_capped(
    n: u64,
    k: usize,
    levels: &[u32],
    grid_cap: u128,
) -> Result<ExactValue> {
    check_levels(levels)?;
    let d = levels.len();
    if k < 1 || k > d {
        return Err(Error::KOutOfRange { k, d });
    }
    if n < 1 {
        return Err(Error::InvalidParameter("need n >= 1".into()));
    }
    let exp = u32::try_from(n - 1)
        .map_err(|_| Error::Unsupported("categorical means need n - 1 to fit in 32 bits".into()))?;

    if levels.iter().all(|&u| u == 2) {
        // Two-level closed form: a point with l coordinates equal to 2 has
        // (2^l - 1) * sum_{j<=d-k} binom(d-l, j) dominators, and binom(d, l)
        // grid points share each l.
        let u = BigUint::from(2u32).pow(d as u32);
        let mut s = BigUint::ZERO;
        for l in 0..=d {
            let mut span = BigUint::ZERO;
            for j in 0..=(d - k) {
                span += bignum::binomial_big((d - l) as u64, j as u64);
            }
            let b = (BigUint::from(2u32).pow(l as u32) - BigUint::one()) * span;
            s += bignum::binomial_big(d as u64, l as u64) * (&u - b).pow(exp);
        }
        let numer = BigInt::from(s * n);
        let denom = BigInt::from(u.pow(n as u32));
        return Ok(BigRational::new(numer, denom).into());
    }

    let mut u: u128 = 1;
    for &uj in levels {
        u = u
            .checked_mul(u128::from(uj))
            .filter(|&v| v <= grid_cap)
            .ok_or_else(|| {
                Error::Unsupported(format!("grid size exceeds the cap of {grid_cap} points"))
            })?;
    }

    // Enumerate the grid, bucketing by dominator count: distinct counts are
    // usually far fewer than grid points, and each bucket costs one big pow.
    let mut buckets: HashMap<u128, u64> = HashMap::new();
    let mut x: Vec<u32> = vec![1; d];
    loop {
        let b = categorical_volume(&x, k, levels)?;
        *buckets.entry(b).or_insert(0) += 1;
        // odometer increment
        let mut pos = 0;
        loop {
            if pos == d {
                break;
            }
            if x[pos] < levels[pos] {
                x[pos] += 1;
                break;
            }
            x[pos] = 1;
            pos += 1;
        }
        if pos == d {
            break;
        }
    }
    let ub = BigUint::from(u);
    let mut s = BigUint::ZERO;
    for (b, count) in buckets {
        s += (&ub - BigUint::from(b)).pow(exp) * BigUint::from(count);
    }
    let numer = BigInt::from(s * n);
    let denom = BigInt::from(ub.pow(n as u32));
    Ok(BigRational::new(numer, denom).into())
}

/// Limit of E[skyline size] / n for the uniform grid: 1/u, the weight of
/// the unique undominated point.
pub fn categorical_limit(levels: &[u32]) -> Result<ExactValue> {
    check_levels(levels)?;
    let mut u = BigUint::one();
    for &uj in levels {
        u *= uj;
    }
    Ok(BigRational::new(BigInt::one(), BigInt::from(u)).into())
}

/// Limit of E[k-dominant skyline size] / n for i.i.d. draws from a weighted
/// finite support: the total weight of support points that no
/// positive-weight support point k-dominates.
pub fn categorical_limit_weighted(
    support: &[Vec<f64>],
    weights: &[f64],
    k: usize,
) -> Result<f64> {
    let model = crate::sampler::Model::CategoricalWeighted {
        support: support.to_vec(),
        weights: weights.to_vec(),
    };
    model.validate()?;
    let d = model.dim();
    if k < 1 || k > d {
        return Err(Error::KOutOfRange { k, d });
    }
    let mut q = 0.0;
    for (i, p) in support.iter().enumerate() {
        if weights[i] <= 0.0 {
            continue;
        }
        let dominated = support.iter().enumerate().any(|(j, other)| {
            j != i && weights[j] > 0.0 && crate::dominance::k_dominates(other, p, k).unwrap()
        });
        if !dominated {
            q += weights[i];
        }
    }
    Ok(q)
}

/// Expected number of (d-1)-dominant cycles of length d among n uniform
/// points in the d-cube: binom(n, d) * d!^{2-d} / d, exactly.
pub fn cycle_mean(n: u64, d: u64) -> Result<ExactValue> {
    if d < 2 || n < d {
        return Err(Error::InvalidParameter(format!(
            "cycle mean needs n >= d >= 2, got n = {n}, d = {d}"
        )));
    }
    let numer = BigInt::from(bignum::binomial_big(n, d));
    let denom = BigInt::from(bignum::factorial_big(d).pow((d - 2) as u32) * d);
    Ok(BigRational::new(numer, denom).into())
}

/// Probability that one uniform point k-dominates another:
/// beta(d, k) = 2^{-d} * sum_{j<=d-k} binom(d, j), exactly.
pub fn beta(d: usize, k: usize) -> Result<ExactValue> {
    if k < 1 || k > d {
        return Err(Error::KOutOfRange { k, d });
    }
    let mut numer = BigUint::ZERO;
    for j in 0..=(d - k) {
        numer += bignum::binomial_big(d as u64, j as u64);
    }
    let denom = BigUint::from(2u32).pow(d as u32);
    Ok(BigRational::new(BigInt::from(numer), BigInt::from(denom)).into())
}

/// Where the evaluation of [`i_n`] switches from quadrature to the
/// alternating series, as a value of n*x. The series is asymptotic with
/// error comparable to e^{-nx} at optimal truncation, so n*x >= 30 keeps the
/// two paths within 1e-8 of each other; the quadrature handles everything
/// below that.
pub const I_N_SERIES_THRESHOLD: f64 = 30.0;

fn check_i_n(n: u64, x: f64) -> Result<()> {
    if n < 1 {
        return Err(Error::InvalidParameter("the error integral needs n >= 1".into()));
    }
    if !(x > 0.0 && x <= 1.0) {
        return Err(Error::InvalidParameter(format!(
            "the error integral needs 0 < x <= 1, got {x}"
        )));
    }
    Ok(())
}

/// The tail integral I_n(x) = x * int_x^1 t^{-2} (1-t)^{n-1} dt, which
/// bounds skyline expectations from below via n * I_n(beta). Dispatches
/// between [`i_n_quadrature`] and [`i_n_series`] at n*x = 30.
pub fn i_n(n: u64, x: f64) -> Result<f64> {
    check_i_n(n, x)?;
    if x >= 1.0 {
        return Ok(0.0);
    }
    if n as f64 * x >= I_N_SERIES_THRESHOLD {
        i_n_series(n, x)
    } else {
        i_n_quadrature(n, x)
    }
}

/// Quadrature path for I_n(x). The substitution t = x e^s turns the
/// integral into int_0^{log(1/x)} e^{-s} (1 - x e^s)^{n-1} ds with a
/// bounded, peak-at-zero integrand; the tolerance scales with the peak so
/// that astronomically small values keep relative accuracy.
pub fn i_n_quadrature(n: u64, x: f64) -> Result<f64> {
    check_i_n(n, x)?;
    if x >= 1.0 {
        return Ok(0.0);
    }
    let span = -x.ln();
    let nm1 = (n - 1) as f64;
    let f = move |s: f64| {
        let y = x * s.exp();
        if y >= 1.0 {
            0.0
        } else {
            (nm1 * (-y).ln_1p() - s).exp()
        }
    };
    let peak = (nm1 * (-x).ln_1p()).exp();
    if peak == 0.0 {
        // The true value underflows doubles; report zero rather than noise.
        return Ok(0.0);
    }
    let tol = (peak * span.min(1.0) * 1e-13).max(1e-300);
    Ok(special::integrate(f, 0.0, span, tol).max(0.0))
}

/// Series path for I_n(x), from successive integration by parts:
/// sum_m (-1)^m (m+1)! (1-x)^{n+m} / (x^{m+1} n (n+1) ... (n+m)).
///
/// For x < 1/2 the series is asymptotic (eventually divergent); summation
/// stops at the smallest term, which bounds the truncation error. Accuracy
/// is therefore limited to roughly e^{-n x}, which is why [`i_n`] only
/// routes here for n*x >= 30.
pub fn i_n_series(n: u64, x: f64) -> Result<f64> {
    check_i_n(n, x)?;
    if x >= 1.0 {
        return Ok(0.0);
    }
    let nf = n as f64;
    let mut term = (nf * (-x).ln_1p()).exp() / (nf * x);
    if term == 0.0 || !term.is_finite() {
        // (1-x)^n underflows: the value is below double range.
        return Ok(0.0);
    }
    let mut sum = term;
    let mut m = 0u64;
    loop {
        let next = -term * ((m + 2) as f64) * (1.0 - x) / (x * ((n + m + 1) as f64));
        if next.abs() >= term.abs() {
            break; // smallest term reached; stop before divergence
        }
        sum += next;
        term = next;
        m += 1;
        if term.abs() < sum.abs() * 1e-17 || m > 100_000 {
            break;
        }
    }
    Ok(sum.max(0.0))
}

/// Lower bound n * I_n(beta(d, k)) on the expected k-dominant skyline size
/// of n uniform points in the d-cube, valid for every 1 <= k <= d-1.
pub fn lower_bound(n: u64, d: usize, k: usize) -> Result<f64> {
    if k < 1 || k + 1 > d {
        return Err(Error::InvalidParameter(format!(
            "the lower bound needs 1 <= k <= d-1, got k = {k}, d = {d}"
        )));
    }
    let b = beta(d, k)?.to_f64();
    Ok(n as f64 * i_n(n, b)?)
}
