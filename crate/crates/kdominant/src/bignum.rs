//! Internal big-number helpers: a high-precision decimal float alias,
//! harmonic sums, big binomials, and decimal rendering of rationals.

use dashu_float::round::mode::Zero;
use dashu_float::FBig;
use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero as NumZero};

/// High-precision decimal float. `Zero` rounding (truncation) keeps every
/// operation deterministic; callers size the precision with enough guard
/// digits that the direction of the last-digit error never matters.
pub type Hp = FBig<Zero, 10>;

pub fn hp_from_u64(v: u64, digits: usize) -> Hp {
    Hp::from(v).with_precision(digits).value()
}

/// Generalized harmonic number `sum_{j=1..n} j^{-a}` at `digits` precision.
///
/// Terms are positive, so truncation error accumulates one-sidedly and is
/// below `n * a * 10^{1-digits}` in ulps of the leading digit.
pub fn harmonic_hp(n: u64, a: u32, digits: usize) -> Hp {
    let one = Hp::ONE.with_precision(digits).value();
    let mut sum = Hp::ZERO.with_precision(digits).value();
    for j in 1..=n {
        let term = match (j as u128).checked_pow(a) {
            Some(p) => one.clone() / Hp::from(p).with_precision(digits).value(),
            None => {
                // j^a overflows 128 bits; divide a times instead.
                let jf = hp_from_u64(j, digits);
                let mut t = one.clone() / jf.clone();
                for _ in 1..a {
                    t = t / jf.clone();
                }
                t
            }
        };
        sum += term;
    }
    sum
}

pub fn factorial_big(n: u64) -> BigUint {
    let mut acc = BigUint::one();
    for i in 2..=n {
        acc *= i;
    }
    acc
}

pub fn binomial_big(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::ZERO;
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// Render a rational as a decimal string with `sig` significant digits
/// (round half away from zero). Exact when the rational terminates within
/// `sig` digits; plain notation for moderate magnitudes, otherwise `e`
/// notation.
pub fn decimal_string(r: &BigRational, sig: usize) -> String {
    let sig = sig.max(1);
    if r.is_zero() {
        return "0".to_string();
    }
    let neg = r.is_negative();
    let num = r.numer().magnitude().clone();
    let den = r.denom().magnitude().clone();

    // exponent e: largest power with 10^e <= num/den < 10^(e+1)
    let mut e = num.to_string().len() as i64 - den.to_string().len() as i64;
    let ten = BigUint::from(10u32);
    let scaled_cmp = |e: i64| -> std::cmp::Ordering {
        // compare num/den with 10^e
        if e >= 0 {
            num.cmp(&(&den * ten.pow(e as u32)))
        } else {
            (&num * ten.pow((-e) as u32)).cmp(&den)
        }
    };
    while scaled_cmp(e) == std::cmp::Ordering::Less {
        e -= 1;
    }
    while scaled_cmp(e + 1) != std::cmp::Ordering::Less {
        e += 1;
    }

    // digits = round(num/den * 10^(sig-1-e)), an integer with `sig` digits
    let shift = sig as i64 - 1 - e;
    let (mut scaled_num, scaled_den) = if shift >= 0 {
        (&num * ten.pow(shift as u32), den.clone())
    } else {
        (num.clone(), &den * ten.pow((-shift) as u32))
    };
    // round half away from zero
    scaled_num = (&scaled_num + (&scaled_den >> 1)) / &scaled_den;
    let mut digits = scaled_num.to_string();
    if digits.len() > sig {
        // rounding carried into a new leading digit (e.g. 999.9 -> 1000)
        e += 1;
        digits.truncate(sig);
    }
    // strip trailing zeros after the would-be decimal point
    let int_len = (e + 1).max(0) as usize;
    let mut mantissa = digits;
    while mantissa.len() > int_len.max(1) && mantissa.ends_with('0') {
        mantissa.pop();
    }

    let body = if e >= -4 && (e as i128) < sig as i128 + 6 {
        if e >= 0 {
            let int_len = e as usize + 1;
            if mantissa.len() <= int_len {
                format!("{}{}", mantissa, "0".repeat(int_len - mantissa.len()))
            } else {
                format!("{}.{}", &mantissa[..int_len], &mantissa[int_len..])
            }
        } else {
            format!("0.{}{}", "0".repeat((-e - 1) as usize), mantissa)
        }
    } else {
        let rest = &mantissa[1..];
        if rest.is_empty() {
            format!("{}e{}", &mantissa[..1], e)
        } else {
            format!("{}.{}e{}", &mantissa[..1], rest, e)
        }
    };
    if neg {
        format!("-{body}")
    } else {
        body
    }
}

/// Render a high-precision float with `sig` significant digits.
pub fn hp_decimal_string(v: &Hp, sig: usize) -> String {
    v.clone().with_precision(sig.max(1)).value().to_string()
}

/// Convert an arbitrary-size integer to a high-precision float with the
/// given number of significant decimal digits.
pub fn biguint_to_hp(n: &BigUint, digits: usize) -> Hp {
    let v: Hp = n.to_string().parse().expect("decimal integer parses");
    v.with_precision(digits).value()
}
