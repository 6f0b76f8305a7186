//! Three-decimal rendering used by every table and report.
//!
//! Rounding operates on the shortest decimal representation of the value,
//! half away from zero, so `0.0625` renders as `0.063` and `0.0105` as
//! `0.011` even though neither is exactly representable in binary.

use serde::Serializer;

pub const DECIMALS: usize = 3;

/// Rounds `x` half-up at `decimals` places and returns the fixed-point text.
pub fn round_half_up(x: f64, decimals: usize) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    let text = format!("{}", x.abs());
    let (int_part, frac_part) = match text.split_once('.') {
        Some((i, f)) => (i.to_string(), f.to_string()),
        None => (text.clone(), String::new()),
    };
    let mut digits: Vec<u8> = int_part.bytes().map(|b| b - b'0').collect();
    let frac: Vec<u8> = frac_part.bytes().map(|b| b - b'0').collect();
    digits.extend((0..decimals).map(|i| frac.get(i).copied().unwrap_or(0)));
    if frac.get(decimals).is_some_and(|&d| d >= 5) {
        let mut carry = true;
        for d in digits.iter_mut().rev() {
            if !carry {
                break;
            }
            if *d == 9 {
                *d = 0;
            } else {
                *d += 1;
                carry = false;
            }
        }
        if carry {
            digits.insert(0, 1);
        }
    }
    let split = digits.len() - decimals;
    let mut out = String::with_capacity(digits.len() + 2);
    let all_zero = digits.iter().all(|&d| d == 0);
    if x.is_sign_negative() && !all_zero {
        out.push('-');
    }
    out.extend(digits[..split].iter().map(|d| (b'0' + d) as char));
    if decimals > 0 {
        out.push('.');
        out.extend(digits[split..].iter().map(|d| (b'0' + d) as char));
    }
    out
}

pub fn fmt3(x: f64) -> String {
    round_half_up(x, DECIMALS)
}

/// `x` rounded to three decimals, as a float.
pub fn round3(x: f64) -> f64 {
    fmt3(x).parse().unwrap_or(x)
}

/// `x` rounded to three decimals, expressed in integer thousandths.
pub fn thousandths(x: f64) -> i64 {
    let text = fmt3(x);
    let negative = text.starts_with('-');
    let digits: String = text.chars().filter(|c| c.is_ascii_digit()).collect();
    let v: i64 = digits.parse().unwrap_or(0);
    if negative { -v } else { v }
}

/// `serialize_with` helper writing the three-decimal rounded value.
pub fn ser3<S: Serializer>(x: &f64, serializer: S) -> Result<S::Ok, S::Error> {
    serializer.serialize_f64(round3(*x))
}

pub fn ser3_opt<S: Serializer>(x: &Option<f64>, serializer: S) -> Result<S::Ok, S::Error> {
    match x {
        Some(v) => serializer.serialize_some(&round3(*v)),
        None => serializer.serialize_none(),
    }
}
