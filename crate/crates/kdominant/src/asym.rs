//! Closed-form growth predictions for skyline sizes, dominance thresholds,
//! and related quantities.
//!
//! Everything here evaluates an asymptotic or semi-exact formula in floating
//! point; nothing samples data. The functions fall into four groups:
//!
//! * skyline-size predictors for the hypercube model ([`phi_d`], [`g_d`],
//!   [`phi_minus_g`], [`critical_estimate`], [`f_d_numeric`], [`f_d_leading`])
//!   and the simplex model ([`simplex_skyline_mean`], [`simplex_skyline_leading`]),
//! * single-point and upper-bound predictors for k-dominant counts
//!   ([`m_d1_mean`], [`m_dk_upper`], [`cycle_mean_leading`], [`cloud_coefficient`]),
//! * integer thresholds where the skyline regime changes, with exact big-integer
//!   boundary lists ([`threshold_d0`], [`threshold_d1`], [`upsilon`], [`phi0`], [`phi1`]),
//! * a uniform dispatch layer ([`predict`]) that pairs each value with a
//!   validity note so callers see when a formula is used outside its
//!   intended range.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use serde::Serialize;

use crate::bignum::{self, Hp};
use crate::exact::ExactValue;
use crate::special;
use crate::{Error, Result};

/// Principal branch of the Lambert W function, the inverse of `w * exp(w)`
/// on `w >= 0`. Defined here for `x >= 0`.
///
/// Uses Halley iteration from a logarithmic seed; the result satisfies
/// `|W exp(W) - x| <= 1e-12 * x` over the whole domain.
pub fn lambert_w(x: f64) -> Result<f64> {
    if !x.is_finite() || x < 0.0 {
        return Err(Error::InvalidParameter(format!(
            "lambert_w requires a finite x >= 0, got {x}"
        )));
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    let mut w = if x > std::f64::consts::E {
        let l = x.ln();
        let ll = l.ln();
        l - ll + ll / l
    } else {
        x.ln_1p()
    };
    let tol = 1e-15 * x.max(f64::MIN_POSITIVE);
    for _ in 0..64 {
        let ew = w.exp();
        let f = w * ew - x;
        if f.abs() <= tol {
            break;
        }
        // Halley step for f(w) = w e^w - x.
        let denom = ew * (w + 1.0) - (w + 2.0) * f / (2.0 * (w + 1.0));
        let step = f / denom;
        w -= step;
        if step == 0.0 {
            break;
        }
    }
    Ok(w)
}

/// Magnitude of the j-th term shared by the hypercube skyline predictors:
/// `binom(d, j) * (d-1-j)^(j-1) * Gamma(1/(d-1-j))^(d-j) * n^(-1/(d-1-j))`,
/// evaluated in log space. Requires `0 <= j <= d - 2`.
fn predictor_magnitude(ln_n: f64, d: usize, j: usize) -> f64 {
    debug_assert!(d >= 2 && j <= d - 2);
    let dj = (d - 1 - j) as f64;
    let ln_binom = special::ln_gamma((d + 1) as f64)
        - special::ln_gamma((j + 1) as f64)
        - special::ln_gamma((d - j + 1) as f64);
    let ln_mag = ln_binom
        + (j as f64 - 1.0) * dj.ln()
        + (d - j) as f64 * special::ln_gamma(1.0 / dj)
        - ln_n / dj;
    ln_mag.exp()
}

fn check_predictor_args(n: f64, d: usize, what: &str) -> Result<()> {
    if !(n.is_finite() && n >= 1.0) {
        return Err(Error::InvalidParameter(format!(
            "{what} requires a finite n >= 1, got {n}"
        )));
    }
    if d < 2 {
        return Err(Error::InvalidParameter(format!(
            "{what} requires d >= 2, got {d}"
        )));
    }
    Ok(())
}

/// Leading-order prediction for the mean size of the (d-1)-dominant skyline
/// of `n` uniform points in the d-dimensional hypercube:
/// `Gamma(1/(d-1))^d / (d-1) * n^(-1/(d-1))`.
///
/// The predicted count decays to zero as n grows (relaxed dominance
/// eventually eliminates every point), but the gamma factor grows so fast in
/// d that moderate inputs sit far from that limit.
pub fn phi_d(n: f64, d: usize) -> Result<f64> {
    check_predictor_args(n, d, "phi_d")?;
    let v = predictor_magnitude(n.ln(), d, 0);
    if !v.is_finite() {
        return Err(Error::Unsupported(format!(
            "phi_d overflows f64 at n = {n}, d = {d}"
        )));
    }
    Ok(v)
}

/// Correction sum subtracted from [`phi_d`] at the next asymptotic order,
/// in its `n^(1/(d-1))`-scaled form:
/// `sum over 1 <= j <= d-2 of binom(d, j) (-1)^(j-1) (d-1-j)^(j-1)
///  Gamma(1/(d-1-j))^(d-j) n^(1/(d-1) - 1/(d-1-j))`.
///
/// Empty (zero) for `d = 2`.
pub fn g_d(n: f64, d: usize) -> Result<f64> {
    check_predictor_args(n, d, "g_d")?;
    let ln_n = n.ln();
    let scale = (ln_n / (d as f64 - 1.0)).exp();
    let mut sum = 0.0;
    for j in 1..=d.saturating_sub(2) {
        let term = scale * predictor_magnitude(ln_n, d, j);
        sum += if j % 2 == 1 { term } else { -term };
    }
    if !sum.is_finite() {
        return Err(Error::Unsupported(format!(
            "g_d overflows f64 at n = {n}, d = {d}"
        )));
    }
    Ok(sum)
}

/// Two-term prediction `phi_d(n) - n^(-1/(d-1)) * g_d(n)` for the mean
/// (d-1)-dominant skyline size, combined into one alternating sum so the
/// two terms cannot cancel inconsistently.
pub fn phi_minus_g(n: f64, d: usize) -> Result<f64> {
    check_predictor_args(n, d, "phi_minus_g")?;
    let ln_n = n.ln();
    let mut sum = 0.0;
    for j in 0..=d - 2 {
        let term = predictor_magnitude(ln_n, d, j);
        sum += if j % 2 == 0 { term } else { -term };
    }
    if !sum.is_finite() {
        return Err(Error::Unsupported(format!(
            "phi_minus_g overflows f64 at n = {n}, d = {d}"
        )));
    }
    Ok(sum)
}

/// Prediction for the mean (d-1)-dominant skyline size in the critical
/// window where d grows like a power of log n, together with the damping
/// exponent it uses.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CriticalEstimate {
    /// Predicted mean size, `phi_d(n) / (2 - exp(-rho))`.
    pub value: f64,
    /// Damping exponent `rho = d / (e * n^(1/d^2))`.
    pub rho: f64,
}

/// Critical-window refinement of [`phi_d`]: divides by `2 - exp(-rho)` with
/// `rho = d / (e * n^(1/d^2))`, which interpolates between the full value
/// (`rho` large) and half of it (`rho` near zero).
pub fn critical_estimate(n: f64, d: usize) -> Result<CriticalEstimate> {
    check_predictor_args(n, d, "critical_estimate")?;
    let rho = d as f64 / (std::f64::consts::E * (n.ln() / (d * d) as f64).exp());
    let value = phi_d(n, d)? / (2.0 - (-rho).exp());
    Ok(CriticalEstimate { value, rho })
}

/// Exact mean number of 1-dominant points among `n` independent continuous
/// points in dimension `d`: `n^(1 - d)`.
pub fn m_d1_mean(n: f64, d: usize) -> Result<f64> {
    check_predictor_args(n, d, "m_d1_mean")?;
    Ok(((1.0 - d as f64) * n.ln()).exp())
}

/// Order-of-magnitude upper bound `n^(1 - d/k)` for the mean number of
/// k-dominant points, `1 <= k <= d`. At `k = d` the bound degenerates to 1
/// and carries no information.
pub fn m_dk_upper(n: f64, d: usize, k: usize) -> Result<f64> {
    check_predictor_args(n, d, "m_dk_upper")?;
    if k < 1 || k > d {
        return Err(Error::KOutOfRange { k, d });
    }
    Ok(((1.0 - d as f64 / k as f64) * n.ln()).exp())
}

/// Exact mean size of the classical (d-dominant) skyline of `n` uniform
/// points on the standard d-simplex:
/// `n * sum over 0 <= j < d of binom(d-1, j) (-1)^j Gamma(n) Gamma((j+1)/d) / Gamma(n + (j+1)/d)`.
///
/// The alternating sum loses roughly `(d-1) log10(2) - log10(n)/2` digits; when
/// more than 3 would go, the ratios `Gamma(n)Gamma(a)/Gamma(n+a)` are expanded
/// as the positive products `prod over 0 <= i < n of (i+1)/(i+a)` and summed in
/// high precision instead. That path costs `O(n d)` work, so very large
/// cancellation-heavy inputs are rejected.
pub fn simplex_skyline_mean(n: u64, d: usize) -> Result<f64> {
    if n == 0 || d == 0 {
        return Err(Error::InvalidParameter(format!(
            "simplex_skyline_mean requires n >= 1 and d >= 1, got n = {n}, d = {d}"
        )));
    }
    if d == 1 || n == 1 {
        return Ok(1.0);
    }
    let lost_digits =
        (((d - 1) as f64 * std::f64::consts::LN_2 - 0.5 * (n as f64).ln()) / std::f64::consts::LN_10)
            .max(0.0);
    if lost_digits <= 3.0 {
        let ln_gamma_n = special::ln_gamma(n as f64);
        let mut sum = 0.0;
        for j in 0..d {
            let a = (j + 1) as f64 / d as f64;
            let ratio = (ln_gamma_n + special::ln_gamma(a) - special::ln_gamma(n as f64 + a)).exp();
            let term = special::binomial((d - 1) as u64, j as u64) * ratio;
            sum += if j % 2 == 0 { term } else { -term };
        }
        return Ok(n as f64 * sum);
    }
    let work = n as u128 * d as u128;
    if work > 4_000_000 {
        return Err(Error::Unsupported(format!(
            "simplex_skyline_mean at n = {n}, d = {d} needs {work} high-precision factors; \
             use the leading form instead"
        )));
    }
    let digits = 25 + lost_digits.ceil() as usize;
    let one = bignum::hp_from_u64(1, digits);
    let mut sum = Hp::ZERO.with_precision(digits).value();
    for j in 0..d {
        // n Gamma(n) Gamma(a) / Gamma(n + a) = prod_{i=0}^{n-1} (i+1) / (i+a)
        // for a = (j+1)/d: every factor is positive, so only the outer
        // alternating sum cancels. The product absorbs the leading factor n.
        let a = bignum::hp_from_u64((j + 1) as u64, digits) / bignum::hp_from_u64(d as u64, digits);
        let mut ratio = one.clone();
        for i in 0..n {
            let fi = bignum::hp_from_u64(i, digits);
            ratio *= (&fi + &one) / (fi + &a);
        }
        let coeff = bignum::binomial_big((d - 1) as u64, j as u64);
        let mut term = bignum::biguint_to_hp(&coeff, digits) * ratio;
        if j % 2 == 1 {
            term = -term;
        }
        sum += term;
    }
    Ok(sum.to_f64().value())
}

/// Leading form `Gamma(1/d) * n^(1 - 1/d)` of [`simplex_skyline_mean`].
pub fn simplex_skyline_leading(n: f64, d: usize) -> Result<f64> {
    if !(n.is_finite() && n >= 1.0) || d == 0 {
        return Err(Error::InvalidParameter(format!(
            "simplex_skyline_leading requires finite n >= 1 and d >= 1, got n = {n}, d = {d}"
        )));
    }
    if d == 1 {
        return Ok(1.0);
    }
    Ok((special::ln_gamma(1.0 / d as f64) + (1.0 - 1.0 / d as f64) * n.ln()).exp())
}

/// Coefficient `c_{d,j} = Gamma(1/(d-1))^d / (d-1) * binom(j + 1/(d-1), j)`
/// in the per-cell prediction `E[points with exactly j dominators] ~ c_{d,j}
/// n^(-1/(d-1))`. Requires `d >= 3`.
pub fn cloud_coefficient(d: usize, j: u64) -> Result<f64> {
    if d < 3 {
        return Err(Error::InvalidParameter(format!(
            "cloud_coefficient requires d >= 3, got {d}"
        )));
    }
    let s = 1.0 / (d as f64 - 1.0);
    let base = (d as f64 * special::ln_gamma(s) - (d as f64 - 1.0).ln()).exp();
    // binom(j + s, j) = prod_{i=1}^{j} (i + s) / i, a positive product.
    let mut binom = 1.0;
    for i in 1..=j {
        binom *= (i as f64 + s) / i as f64;
    }
    let v = base * binom;
    if !v.is_finite() {
        return Err(Error::Unsupported(format!(
            "cloud_coefficient overflows f64 at d = {d}, j = {j}"
        )));
    }
    Ok(v)
}

/// Bounded oscillator `exp(-frac(x)) * x^(-2 frac(x))`, which takes values in
/// `(0, 1]` for `x > 1` and equals 1 exactly at integers. Appears as the
/// subpolynomial factor in skyline means at the first dimension threshold.
pub fn phi0(x: f64) -> f64 {
    let f = x.fract();
    (-f - 2.0 * f * x.ln()).exp()
}

/// Unbounded-below-by-one oscillator `exp(1 - frac(x)) * x^(2 - 2 frac(x))`,
/// taking values in `[1, infinity)` for `x > 1`. Companion of [`phi0`] one
/// dimension higher.
pub fn phi1(x: f64) -> f64 {
    let f = x.fract();
    (1.0 - f + (2.0 - 2.0 * f) * x.ln()).exp()
}

/// Which dimension threshold a [`ThresholdResult`] describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ThresholdKind {
    /// Smallest d at which the mean (d-1)-dominant skyline size starts
    /// climbing back toward n: `d0 = floor(sqrt(2 ln n / W(2 ln n))) + 1`.
    D0,
    /// Smallest d at which all n points are (d-1)-dominant with probability
    /// close to one: `d1 = floor(ln n / W(ln n / e) + 1/2)`.
    D1,
}

/// A dimension threshold evaluated at one n, with the exact integer
/// boundaries of the preceding threshold cells.
///
/// `boundaries[i]` is the smallest n (as a decimal string, since the values
/// overflow u64 quickly) whose threshold equals `i + 2`; the listed prefix
/// covers every cell up to and including the one containing this n.
#[derive(Debug, Clone, Serialize)]
pub struct ThresholdResult {
    pub kind: ThresholdKind,
    pub n: u64,
    /// The threshold dimension at this n.
    pub value: u32,
    /// Exact cell boundaries, smallest first, as decimal strings.
    pub boundaries: Vec<String>,
    /// The continuous argument `x` at which the oscillators are evaluated.
    pub tau: f64,
    /// [`phi0`] at tau (only for [`ThresholdKind::D0`]).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub phi0: Option<f64>,
    /// [`phi1`] at tau (only for [`ThresholdKind::D0`]).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub phi1: Option<f64>,
}

/// Exact lower boundary of the i-th cell of the first threshold: the
/// smallest n with `threshold_d0(n) = i + 1`. Equals `i^(i^2)`, except that
/// the first cell starts at 2 because the threshold is undefined at n = 1.
pub fn threshold_d0_boundary(i: u32) -> Result<BigUint> {
    if i == 0 {
        return Err(Error::InvalidParameter(
            "threshold_d0_boundary requires i >= 1".into(),
        ));
    }
    if i == 1 {
        return Ok(BigUint::from(2u32));
    }
    Ok(BigUint::from(i).pow(i * i))
}

/// First dimension threshold `d0(n) = floor(sqrt(2 ln n / W(2 ln n))) + 1`
/// for `n >= 2`, computed by exact big-integer comparison against the cell
/// boundaries `i^(i^2)` rather than by rounding the float expression.
///
/// The float fields (`tau` and the oscillators) are informational; `value`
/// and `boundaries` are exact.
pub fn threshold_d0(n: u64) -> Result<ThresholdResult> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!(
            "threshold_d0 requires n >= 2, got {n}"
        )));
    }
    let big_n = BigUint::from(n);
    let mut boundaries = vec![threshold_d0_boundary(1)?];
    // d0(n) = i + 1 exactly on i^(i^2) <= n < (i+1)^((i+1)^2): the float
    // formula only decides which cell n falls in, and the cells are the
    // integer ranges between consecutive boundaries.
    let mut i = 1u32;
    loop {
        let next = threshold_d0_boundary(i + 1)?;
        if big_n < next {
            break;
        }
        boundaries.push(next);
        i += 1;
    }
    let two_ln_n = 2.0 * (n as f64).ln();
    let tau = (two_ln_n / lambert_w(two_ln_n)?).sqrt();
    Ok(ThresholdResult {
        kind: ThresholdKind::D0,
        n,
        value: i + 1,
        boundaries: boundaries.iter().map(|b| b.to_string()).collect(),
        tau,
        phi0: Some(phi0(tau)),
        phi1: Some(phi1(tau)),
    })
}

/// Exact lower boundary of the i-th cell of the second threshold: the
/// smallest n with `threshold_d1(n) = i + 1`, namely
/// `floor(((i - 1/2) / e)^(i - 1/2)) + 1`.
///
/// Evaluated in high-precision arithmetic at doubling precision until two
/// consecutive floors agree, so the returned integer is exact.
pub fn threshold_d1_boundary(i: u32) -> Result<BigUint> {
    if i == 0 {
        return Err(Error::InvalidParameter(
            "threshold_d1_boundary requires i >= 1".into(),
        ));
    }
    let mut digits = 40usize;
    let mut prev: Option<BigUint> = None;
    while digits <= 1280 {
        let b = bignum::hp_from_u64(2 * i as u64 - 1, digits) / bignum::hp_from_u64(2, digits);
        let v = (&b * (b.ln() - bignum::hp_from_u64(1, digits))).exp();
        let floor: BigUint = v.floor().to_int().value().to_string().parse().map_err(|_| {
            Error::Unsupported("threshold_d1_boundary floor conversion failed".into())
        })?;
        if prev.as_ref() == Some(&floor) {
            return Ok(floor + BigUint::from(1u32));
        }
        prev = Some(floor);
        digits *= 2;
    }
    Err(Error::Unsupported(format!(
        "threshold_d1_boundary did not stabilize for i = {i}"
    )))
}

/// Second dimension threshold `d1(n) = floor(ln n / W(ln n / e) + 1/2)` for
/// `n >= 1`, by exact comparison against the boundaries of
/// [`threshold_d1_boundary`] (several leading cells are empty; the reported
/// value is the largest i + 1 whose boundary is at most n).
pub fn threshold_d1(n: u64) -> Result<ThresholdResult> {
    if n == 0 {
        return Err(Error::InvalidParameter(
            "threshold_d1 requires n >= 1".into(),
        ));
    }
    let big_n = BigUint::from(n);
    let mut boundaries = vec![threshold_d1_boundary(1)?];
    let mut i = 1u32;
    loop {
        let next = threshold_d1_boundary(i + 1)?;
        if big_n < next {
            break;
        }
        boundaries.push(next);
        i += 1;
    }
    let ln_n = (n as f64).ln();
    let tau = if n == 1 {
        0.0
    } else {
        ln_n / lambert_w(ln_n / std::f64::consts::E)? + 0.5
    };
    Ok(ThresholdResult {
        kind: ThresholdKind::D1,
        n,
        value: i + 1,
        boundaries: boundaries.iter().map(|b| b.to_string()).collect(),
        tau,
        phi0: None,
        phi1: None,
    })
}

/// Slope-corrected profile of the all-points-dominant probability near the
/// second threshold: with `W = W(ln n / e)`, maps the centered offset t to
///
/// `(1 + ln(2 pi)/2) / (W + 1) + W / (ln n (W + 1)) * (t - q(W))`
///
/// where `q(W) = (12 W^3 + (35 - 12 ln 2pi) W^2 + (34 - 24 ln 2pi) W + 23 +
/// (ln 2pi)^2) / (24 (W + 1)^3)`. Linear in t; requires `n > 1`.
pub fn upsilon(t: f64, n: f64) -> Result<f64> {
    if !(n.is_finite() && n > 1.0) {
        return Err(Error::InvalidParameter(format!(
            "upsilon requires a finite n > 1, got {n}"
        )));
    }
    let ln_n = n.ln();
    let w = lambert_w(ln_n / std::f64::consts::E)?;
    let l2p = (2.0 * std::f64::consts::PI).ln();
    let q = (12.0 * w.powi(3) + (35.0 - 12.0 * l2p) * w * w + (34.0 - 24.0 * l2p) * w
        + 23.0
        + l2p * l2p)
        / (24.0 * (w + 1.0).powi(3));
    Ok((1.0 + 0.5 * l2p) / (w + 1.0) + w / (ln_n * (w + 1.0)) * (t - q))
}

/// Number of ways to split `l` labeled items into `m + 1` nonempty ordered
/// blocks (equivalently, surjections from an l-set onto an (m+1)-set), via
/// the composition recurrence over block sizes. Zero when `l <= m`.
pub fn sigma_m(m: usize, l: usize) -> ExactValue {
    // cur[r] after the p-th pass = number of ordered splits of r items into
    // p nonempty blocks; each pass peels off the size of the last block.
    let mut cur = vec![BigUint::ZERO; l + 1];
    for r in 1..=l {
        cur[r] = BigUint::from(1u32);
    }
    for _ in 2..=m + 1 {
        let mut next = vec![BigUint::ZERO; l + 1];
        for r in 2..=l {
            let mut acc = BigUint::ZERO;
            for j in 1..r {
                acc += bignum::binomial_big(r as u64, j as u64) * &cur[r - j];
            }
            next[r] = acc;
        }
        cur = next;
    }
    if l == 0 {
        // No items: zero splits into one or more nonempty blocks.
        return ExactValue::from(BigRational::from_integer(BigInt::from(0)));
    }
    ExactValue::from(BigRational::from_integer(BigInt::from(cur[l].clone())))
}

/// Same count as [`sigma_m`] by inclusion-exclusion:
/// `sum over 0 <= r <= m+1 of binom(m+1, r) (-1)^(m+1-r) r^l` with `0^0 = 1`.
pub fn sigma_m_alternating(m: usize, l: usize) -> ExactValue {
    let mut sum = BigInt::from(0);
    for r in 0..=m + 1 {
        let pw = BigUint::from(r).pow(l as u32);
        let term = BigInt::from(bignum::binomial_big((m + 1) as u64, r as u64) * pw);
        if (m + 1 - r) % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
    }
    ExactValue::from(BigRational::from_integer(sum))
}

/// m-th iterate of the correction operator applied to [`g_d`]:
/// the tail of the alternating predictor sum reweighted by surjection counts,
/// `sum over m < l <= d-2 of binom(d, l) (-1)^(l-1) (d-1-l)^(l-1)
///  Gamma(1/(d-1-l))^(d-l) n^(1/(d-1) - 1/(d-1-l)) sigma_m(l)`.
///
/// `m = 0` reproduces [`g_d`] exactly; the sum is empty (zero) once
/// `m >= d - 2`. Alternates in sign and shrinks geometrically in m, which is
/// what makes the full predictor recurrence contract.
pub fn phi_operator_power_gd(m: usize, n: f64, d: usize) -> Result<f64> {
    check_predictor_args(n, d, "phi_operator_power_gd")?;
    let ln_n = n.ln();
    let scale = (ln_n / (d as f64 - 1.0)).exp();
    let mut sum = 0.0;
    if d >= 2 {
        for l in (m + 1)..=d.saturating_sub(2) {
            let weight = sigma_m(m, l).to_f64();
            let term = scale * predictor_magnitude(ln_n, d, l) * weight;
            sum += if l % 2 == 1 { term } else { -term };
        }
    }
    if !sum.is_finite() {
        return Err(Error::Unsupported(format!(
            "phi_operator_power_gd overflows f64 at m = {m}, n = {n}, d = {d}"
        )));
    }
    Ok(sum)
}

/// Exact base case `2 exp(-n) - exp(-2n)` of the correction recurrence.
fn f2(x: f64) -> f64 {
    2.0 * (-x).exp() - (-2.0 * x).exp()
}

/// Piecewise-cubic table of ln f on a uniform ln x grid, used to memoize the
/// inner recurrence levels of [`f_d_numeric`] so the nested integrals stay
/// one-dimensional.
struct LogTable {
    ln_x0: f64,
    step: f64,
    ln_f: Vec<f64>,
}

impl LogTable {
    /// Tabulates `f` on `[x_start, x_start * exp(span)]` with one guard knot
    /// on each side, at grid step 1/8 in ln x.
    fn build(f: impl Fn(f64) -> f64, ln_x_start: f64, span: f64) -> Self {
        let step = 0.125;
        let ln_x0 = ln_x_start - step;
        let count = (span / step).ceil() as usize + 4;
        let ln_f = (0..count)
            .map(|i| f((ln_x0 + i as f64 * step).exp()).ln())
            .collect();
        LogTable { ln_x0, step, ln_f }
    }

    /// Catmull-Rom interpolation of ln f, clamped to the table range.
    fn eval(&self, x: f64) -> f64 {
        let pos = (x.ln() - self.ln_x0) / self.step;
        let i = (pos.floor() as isize).clamp(1, self.ln_f.len() as isize - 3) as usize;
        let t = (pos - i as f64).clamp(-1.0, 2.0);
        let (p0, p1, p2, p3) = (
            self.ln_f[i - 1],
            self.ln_f[i],
            self.ln_f[i + 1],
            self.ln_f[i + 2],
        );
        let v = p1
            + t * ((p2 - p0) / 2.0
                + t * ((p0 - 2.5 * p1 + 2.0 * p2 - p3 / 2.0)
                    + t * ((p3 - p0) / 2.0 + 1.5 * (p1 - p2))));
        v.exp()
    }
}

/// Integration tolerance for the recurrence integrals: relative to the
/// integrand's peak, floored away from zero.
fn corr_tol(scale: f64) -> f64 {
    (scale.abs() * 1e-12).max(1e-300)
}

/// Exponential-decay cutoff: beyond s with `e^(-s/c) * poly < 1e-16 * peak`
/// the tail contributes nothing at f64 precision; 45c is a safe span.
const F2_SPAN: f64 = 45.0;
const F3_SPAN: f64 = 90.0;
const F4_SPAN: f64 = 135.0;

fn f3_direct(x: f64) -> f64 {
    // f3(x) = 3 x^(-1/2) (1 - integral of e^(-s) f2(x e^s) ds).
    let corr = special::integrate(
        &|s: f64| (-s).exp() * f2(x * s.exp()),
        0.0,
        F2_SPAN,
        corr_tol(f2(x).max(1e-16)),
    );
    3.0 / x.sqrt() * (1.0 - corr)
}

/// Numeric evaluation of the full skyline-fraction recurrence
///
/// `f_d(n) = g_d(n) + sum over 1 <= j <= d-2 of binom(d, j) (-1)^j
///  n^(1/(d-1) - 1/(d-1-j)) / (j-1)! * integral of s^(j-1) e^(-s/(d-1-j))
///  f_{d-j}(n e^s) ds`
///
/// for `2 <= d <= 5`, with `f_2(n) = 2 exp(-n) - exp(-2n)`. Inner levels are
/// tabulated on a logarithmic grid and interpolated, so each level costs one
/// one-dimensional quadrature per knot. Accurate to a few parts in 1e6,
/// dominated by the interpolation error.
///
/// The function refines the closed first correction [`g_d`]: substituting it
/// for g_d sharpens the two-term skyline prediction. Its leading term is
/// [`f_d_leading`].
pub fn f_d_numeric(n: f64, d: usize) -> Result<f64> {
    if !(n.is_finite() && n > 0.0) || d < 2 {
        return Err(Error::InvalidParameter(format!(
            "f_d_numeric requires a finite n > 0 and d >= 2, got n = {n}, d = {d}"
        )));
    }
    match d {
        2 => Ok(f2(n)),
        3 => Ok(f3_direct(n)),
        4 | 5 => {
            if n < 1.0 {
                return Err(Error::InvalidParameter(format!(
                    "f_d_numeric requires n >= 1 for d = {d}, got {n}"
                )));
            }
            // The innermost table must reach n * exp(total span); keep the
            // exponent comfortably inside f64 range.
            if n.ln() + 230.0 > 700.0 {
                return Err(Error::Unsupported(format!(
                    "f_d_numeric argument {n} too large for the d = {d} recurrence tables"
                )));
            }
            let ln_n = n.ln();
            if d == 4 {
                let t3 = LogTable::build(f3_direct, ln_n, F3_SPAN + 0.5);
                Ok(f4_at(n, &t3)?)
            } else {
                let t3 = LogTable::build(f3_direct, ln_n, F3_SPAN + F4_SPAN + 1.0);
                let t4 = LogTable::build(
                    |x| f4_at(x, &t3).unwrap_or(f64::NAN),
                    ln_n,
                    F4_SPAN + 0.5,
                );
                let i4 = special::integrate(
                    &|s: f64| (-s / 3.0).exp() * t4.eval(n * s.exp()),
                    0.0,
                    F4_SPAN,
                    corr_tol(t4.eval(n)),
                );
                let i3 = special::integrate(
                    &|s: f64| s * (-s / 2.0).exp() * t3.eval(n * s.exp()),
                    0.0,
                    F3_SPAN,
                    corr_tol(t3.eval(n)),
                );
                let i2 = special::integrate(
                    &|s: f64| s * s * (-s).exp() * f2(n * s.exp()),
                    0.0,
                    F2_SPAN,
                    corr_tol(f2(n).max(1e-16)),
                );
                let v = g_d(n, 5)? - 5.0 * (ln_n * (1.0 / 4.0 - 1.0 / 3.0)).exp() * i4
                    + 10.0 * (ln_n * (1.0 / 4.0 - 1.0 / 2.0)).exp() * i3
                    - 5.0 * (ln_n * (1.0 / 4.0 - 1.0)).exp() * i2 / 2.0;
                Ok(v)
            }
        }
        _ => Err(Error::Unsupported(format!(
            "f_d_numeric implements the recurrence for 2 <= d <= 5, got d = {d}"
        ))),
    }
}

fn f4_at(x: f64, t3: &LogTable) -> Result<f64> {
    let ln_x = x.ln();
    let i3 = special::integrate(
        &|s: f64| (-s / 2.0).exp() * t3.eval(x * s.exp()),
        0.0,
        F3_SPAN,
        corr_tol(t3.eval(x)),
    );
    let i2 = special::integrate(
        &|s: f64| s * (-s).exp() * f2(x * s.exp()),
        0.0,
        F2_SPAN,
        corr_tol(f2(x).max(1e-16)),
    );
    Ok(g_d(x, 4)? - 4.0 * (ln_x * (1.0 / 3.0 - 1.0 / 2.0)).exp() * i3
        + 6.0 * (ln_x * (1.0 / 3.0 - 1.0)).exp() * i2)
}

/// Leading asymptotic term of [`f_d_numeric`] for `2 <= d <= 5`:
/// `2 exp(-n)`, `3 n^(-1/2)`, `4 pi^(3/2) n^(-1/6)`, and
/// `80 pi^4 / (9 Gamma(2/3)^4) n^(-1/12)` respectively.
pub fn f_d_leading(n: f64, d: usize) -> Result<f64> {
    check_predictor_args(n, d, "f_d_leading")?;
    let pi = std::f64::consts::PI;
    match d {
        2 => Ok(2.0 * (-n).exp()),
        3 => Ok(3.0 * (-0.5 * n.ln()).exp()),
        4 => Ok(4.0 * pi.powf(1.5) * (-n.ln() / 6.0).exp()),
        5 => {
            let c = 80.0 * pi.powi(4) / (9.0 * special::gamma(2.0 / 3.0).powi(4));
            Ok(c * (-n.ln() / 12.0).exp())
        }
        _ => Err(Error::Unsupported(format!(
            "f_d_leading covers 2 <= d <= 5, got d = {d}"
        ))),
    }
}

/// Leading form `n^d / (d * d!^(d-1))` of the exact mean dominance-cycle
/// count `binom(n, d) d!^(2-d) / d`, evaluated in log space. Requires
/// `n >= d >= 2`.
pub fn cycle_mean_leading(n: f64, d: usize) -> Result<f64> {
    if d < 2 || !(n.is_finite() && n >= d as f64) {
        return Err(Error::InvalidParameter(format!(
            "cycle_mean_leading requires n >= d >= 2, got n = {n}, d = {d}"
        )));
    }
    let v = (d as f64 * n.ln()
        - (d as f64).ln()
        - (d as f64 - 1.0) * special::ln_gamma(d as f64 + 1.0))
    .exp();
    if !v.is_finite() {
        return Err(Error::Unsupported(format!(
            "cycle_mean_leading overflows f64 at n = {n}, d = {d}"
        )));
    }
    Ok(v)
}

/// Whether (n, d) sits in the moderate-dimension regime where the two-term
/// predictor is derived: `d >= 3` and `2 ln n / d^2 > W(2 ln n)`.
pub fn moderate_dimension_condition(n: f64, d: usize) -> bool {
    if d < 3 || !(n.is_finite() && n > 1.0) {
        return false;
    }
    let two_ln_n = 2.0 * n.ln();
    match lambert_w(two_ln_n) {
        Ok(w) => two_ln_n / (d * d) as f64 > w,
        Err(_) => false,
    }
}

/// Whether (n, d) sits in the critical window around the first threshold:
/// `(ln n)^(1/3) < d <= 2 sqrt(ln n / W(4 ln n / (e ln 2)^2))`.
pub fn critical_window_condition(n: f64, d: usize) -> bool {
    if !(n.is_finite() && n > 1.0) {
        return false;
    }
    let ln_n = n.ln();
    if (d as f64) <= ln_n.cbrt() {
        return false;
    }
    let arg = 4.0 * ln_n / (std::f64::consts::E * std::f64::consts::LN_2).powi(2);
    match lambert_w(arg) {
        Ok(w) => (d as f64) <= 2.0 * (ln_n / w).sqrt(),
        Err(_) => false,
    }
}

/// Identifier of one closed-form prediction exposed through [`predict`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum FormulaId {
    #[serde(rename = "phi_d")]
    PhiD,
    #[serde(rename = "g_d")]
    GD,
    #[serde(rename = "phi_minus_g")]
    PhiMinusG,
    #[serde(rename = "critical_estimate")]
    CriticalEstimate,
    #[serde(rename = "m_d1")]
    MD1,
    #[serde(rename = "m_dk_upper")]
    MDkUpper,
    #[serde(rename = "simplex_skyline")]
    SimplexSkyline,
    #[serde(rename = "cloud_coeff")]
    CloudCoeff,
    #[serde(rename = "cycle_mean_asym")]
    CycleMeanAsym,
    #[serde(rename = "f_d_leading")]
    FDLeading,
}

impl FormulaId {
    pub const ALL: [FormulaId; 10] = [
        FormulaId::PhiD,
        FormulaId::GD,
        FormulaId::PhiMinusG,
        FormulaId::CriticalEstimate,
        FormulaId::MD1,
        FormulaId::MDkUpper,
        FormulaId::SimplexSkyline,
        FormulaId::CloudCoeff,
        FormulaId::CycleMeanAsym,
        FormulaId::FDLeading,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            FormulaId::PhiD => "phi_d",
            FormulaId::GD => "g_d",
            FormulaId::PhiMinusG => "phi_minus_g",
            FormulaId::CriticalEstimate => "critical_estimate",
            FormulaId::MD1 => "m_d1",
            FormulaId::MDkUpper => "m_dk_upper",
            FormulaId::SimplexSkyline => "simplex_skyline",
            FormulaId::CloudCoeff => "cloud_coeff",
            FormulaId::CycleMeanAsym => "cycle_mean_asym",
            FormulaId::FDLeading => "f_d_leading",
        }
    }
}

impl std::str::FromStr for FormulaId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        FormulaId::ALL
            .iter()
            .copied()
            .find(|f| f.as_str() == s)
            .ok_or_else(|| {
                Error::InvalidParameter(format!(
                    "unknown formula '{s}'; expected one of: {}",
                    FormulaId::ALL.map(|f| f.as_str()).join(", ")
                ))
            })
    }
}

impl std::fmt::Display for FormulaId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Parameters accepted by [`predict`]; each formula requires a subset.
#[derive(Debug, Clone, Copy, Default)]
pub struct PredictParams {
    pub n: Option<u64>,
    pub d: Option<usize>,
    pub k: Option<usize>,
    pub j: Option<u64>,
}

/// One evaluated prediction: the inputs it used, the value, and a note
/// saying what the number means and whether the inputs sit in the range the
/// formula is intended for.
#[derive(Debug, Clone, Serialize)]
pub struct PredictionReport {
    pub formula_id: FormulaId,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub j: Option<u64>,
    pub value: f64,
    pub validity_note: String,
}

fn need<T: Copy>(v: Option<T>, flag: &str) -> Result<T> {
    v.ok_or_else(|| Error::InvalidParameter(format!("this formula requires --{flag}")))
}

fn regime_text(inside: bool) -> &'static str {
    if inside {
        "inputs satisfy it"
    } else {
        "inputs fall outside it"
    }
}

/// Evaluates one formula at the given parameters. Missing required
/// parameters are rejected by name; the report always carries a finite value
/// together with a validity note.
pub fn predict(formula: FormulaId, params: PredictParams) -> Result<PredictionReport> {
    let mut report = PredictionReport {
        formula_id: formula,
        n: None,
        d: None,
        k: None,
        j: None,
        value: f64::NAN,
        validity_note: String::new(),
    };
    match formula {
        FormulaId::PhiD | FormulaId::GD | FormulaId::PhiMinusG => {
            let n = need(params.n, "n")?;
            let d = need(params.d, "d")?;
            report.n = Some(n);
            report.d = Some(d);
            report.value = match formula {
                FormulaId::PhiD => phi_d(n as f64, d)?,
                FormulaId::GD => g_d(n as f64, d)?,
                _ => phi_minus_g(n as f64, d)?,
            };
            let what = match formula {
                FormulaId::PhiD => "leading-order mean count of (d-1)-dominant points",
                FormulaId::GD => "second-order correction sum, scaled by n^(1/(d-1))",
                _ => "two-term mean count of (d-1)-dominant points",
            };
            report.validity_note = format!(
                "{what}; intended for d >= 3 with 2 ln n / d^2 > W(2 ln n), and {}",
                regime_text(moderate_dimension_condition(n as f64, d))
            );
        }
        FormulaId::CriticalEstimate => {
            let n = need(params.n, "n")?;
            let d = need(params.d, "d")?;
            report.n = Some(n);
            report.d = Some(d);
            let est = critical_estimate(n as f64, d)?;
            report.value = est.value;
            report.validity_note = format!(
                "critical-window mean count with damping exponent rho = {:.6}; \
                 intended for (ln n)^(1/3) < d <= 2 sqrt(ln n / W(4 ln n / (e ln 2)^2)), and {}; \
                 the remainder term is not evaluated",
                est.rho,
                regime_text(critical_window_condition(n as f64, d))
            );
        }
        FormulaId::MD1 => {
            let n = need(params.n, "n")?;
            let d = need(params.d, "d")?;
            report.n = Some(n);
            report.d = Some(d);
            report.value = m_d1_mean(n as f64, d)?;
            report.validity_note =
                "mean count of 1-dominant points, exact at every n for continuous data".into();
        }
        FormulaId::MDkUpper => {
            let n = need(params.n, "n")?;
            let d = need(params.d, "d")?;
            let k = need(params.k, "k")?;
            report.n = Some(n);
            report.d = Some(d);
            report.k = Some(k);
            report.value = m_dk_upper(n as f64, d, k)?;
            report.validity_note =
                "order-of-magnitude upper bound on the mean k-dominant count, stated for 1 <= k <= d-1"
                    .into();
        }
        FormulaId::SimplexSkyline => {
            let n = need(params.n, "n")?;
            let d = need(params.d, "d")?;
            report.n = Some(n);
            report.d = Some(d);
            report.value = simplex_skyline_mean(n, d)?;
            report.validity_note = format!(
                "exact finite-sum mean skyline size on the simplex; leading form \
                 Gamma(1/d) n^(1-1/d) = {:.6}",
                simplex_skyline_leading(n as f64, d)?
            );
        }
        FormulaId::CloudCoeff => {
            let n = need(params.n, "n")?;
            let d = need(params.d, "d")?;
            let j = need(params.j, "j")?;
            report.n = Some(n);
            report.d = Some(d);
            report.j = Some(j);
            report.value = cloud_coefficient(d, j)? * (-(n as f64).ln() / (d as f64 - 1.0)).exp();
            report.validity_note = format!(
                "leading mean count of points with exactly j dominators, \
                 c * n^(-1/(d-1)) with c = {:.6}; fixed j, n large, d >= 3",
                cloud_coefficient(d, j)?
            );
        }
        FormulaId::CycleMeanAsym => {
            let n = need(params.n, "n")?;
            let d = need(params.d, "d")?;
            report.n = Some(n);
            report.d = Some(d);
            report.value = cycle_mean_leading(n as f64, d)?;
            report.validity_note =
                "leading form of the exact mean dominance-cycle count binom(n, d) d!^(2-d) / d"
                    .into();
        }
        FormulaId::FDLeading => {
            let n = need(params.n, "n")?;
            let d = need(params.d, "d")?;
            report.n = Some(n);
            report.d = Some(d);
            report.value = f_d_leading(n as f64, d)?;
            report.validity_note =
                "leading term of the skyline-fraction recurrence, available for 2 <= d <= 5".into();
        }
    }
    if !report.value.is_finite() {
        return Err(Error::Unsupported(format!(
            "formula {} produced a non-finite value",
            formula.as_str()
        )));
    }
    Ok(report)
}
