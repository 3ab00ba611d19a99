//! Conversions between decimal strings and dyadic fixed-point fractions.
//!
//! Every dyadic fraction `k / 2^b` has a finite decimal expansion, so
//! formatting here is exact and parsing a formatted value gives back the same
//! integer.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Exact decimal expansion of `num / 2^frac_bits`.
pub fn dyadic_to_decimal(num: u128, frac_bits: u32) -> String {
    big_dyadic_to_decimal(&BigUint::from(num), frac_bits)
}

pub fn big_dyadic_to_decimal(num: &BigUint, frac_bits: u32) -> String {
    // num / 2^b == num * 5^b / 10^b
    let scaled = num * BigUint::from(5u32).pow(frac_bits);
    let digits = scaled.to_str_radix(10);
    let b = frac_bits as usize;
    let (int_part, frac_part) = if digits.len() > b {
        let (i, f) = digits.split_at(digits.len() - b);
        (i.to_owned(), f.to_owned())
    } else {
        ("0".to_owned(), format!("{digits:0>b$}"))
    };
    let frac_part = frac_part.trim_end_matches('0');
    if frac_part.is_empty() {
        int_part
    } else {
        format!("{int_part}.{frac_part}")
    }
}

/// `num / 2^frac_bits` rounded half-up to `places` decimals, trailing zeros
/// trimmed but always keeping one digit after the point.
pub fn dyadic_to_rounded_decimal(num: &BigUint, frac_bits: u32, places: u32) -> String {
    let ten_p = BigUint::from(10u32).pow(places);
    let half = BigUint::one() << frac_bits >> 1u32;
    let rounded: BigUint = (num * &ten_p + half) >> frac_bits;
    let int_part = &rounded / &ten_p;
    let frac = (&rounded % &ten_p).to_str_radix(10);
    let frac = format!("{frac:0>width$}", width = places as usize);
    let frac = frac.trim_end_matches('0');
    format!("{int_part}.{}", if frac.is_empty() { "0" } else { frac })
}

/// First `places` binary digits of a fraction of the cycle, as `0.bbbb`.
pub fn binary_expansion(frac: u128, places: u32) -> String {
    let mut s = String::from("0.");
    for i in 0..places.min(128) {
        s.push(if (frac >> (127 - i)) & 1 == 1 { '1' } else { '0' });
    }
    s
}

/// `floor(value * 2^frac_bits)` for a non-negative decimal such as `0.15`,
/// `1`, `2.5e-3`.
pub fn parse_decimal_floor(s: &str, frac_bits: u32) -> Result<BigUint> {
    let bad = || Error::InvalidDecimal(s.to_owned());
    let t = s.trim();
    let t = t.strip_prefix('+').unwrap_or(t);
    let (mantissa, exponent) = match t.find(['e', 'E']) {
        Some(pos) => {
            let e: i64 = t[pos + 1..].parse().map_err(|_| bad())?;
            (&t[..pos], e)
        }
        None => (t, 0),
    };
    let (int_digits, frac_digits) = match mantissa.split_once('.') {
        Some((i, f)) => (i, f),
        None => (mantissa, ""),
    };
    if int_digits.is_empty() && frac_digits.is_empty() {
        return Err(bad());
    }
    if !int_digits.bytes().chain(frac_digits.bytes()).all(|b| b.is_ascii_digit()) {
        return Err(bad());
    }
    let all_digits = format!("{int_digits}{frac_digits}");
    let digits = if all_digits.is_empty() {
        BigUint::zero()
    } else {
        BigUint::parse_bytes(all_digits.as_bytes(), 10).ok_or_else(bad)?
    };
    // value = digits * 10^(exponent - frac_len)
    let scale = exponent - frac_digits.len() as i64;
    if scale.abs() > 10_000 {
        return Err(bad());
    }
    let numerator = digits << frac_bits;
    Ok(if scale >= 0 {
        numerator * BigUint::from(10u32).pow(scale as u32)
    } else {
        numerator / BigUint::from(10u32).pow((-scale) as u32)
    })
}

/// Lossy conversion of `num / 2^frac_bits` to f64.
pub fn big_dyadic_to_f64(num: &BigUint, frac_bits: u32) -> f64 {
    let bits = num.bits();
    if bits <= 64 {
        return num.to_u64().unwrap() as f64 * 2f64.powi(-(frac_bits as i32));
    }
    let drop = bits - 64;
    let top = (num >> drop).to_u64().unwrap() as f64;
    top * 2f64.powi(drop as i32 - frac_bits as i32)
}
