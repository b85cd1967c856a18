//! Exact rational helpers: construction, parsing and decimal rendering.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Rational = BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

pub fn ints(values: &[i64]) -> Vec<Rational> {
    values.iter().map(|&v| int(v)).collect()
}

/// Sign as -1, 0 or +1.
pub fn sign(x: &Rational) -> i8 {
    match x.cmp(&Rational::zero()) {
        Ordering::Less => -1,
        Ordering::Equal => 0,
        Ordering::Greater => 1,
    }
}

pub fn to_f64(x: &Rational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// Parses an integer (`-12`), a decimal (`1.25`, `-.5`) or a fraction (`3/4`, `-7/-2`).
///
/// Decimals are read exactly as a scaled integer; no floating point is involved.
pub fn parse_rational(text: &str) -> Result<Rational, String> {
    let s = text.trim();
    if s.is_empty() {
        return Err("empty number".into());
    }
    if let Some((p, q)) = s.split_once('/') {
        let num = parse_integer(p.trim())?;
        let den = parse_integer(q.trim())?;
        if den.is_zero() {
            return Err(format!("zero denominator in `{s}`"));
        }
        return Ok(Rational::new(num, den));
    }
    if let Some((whole, frac)) = s.split_once('.') {
        let (negative, whole) = match whole.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, whole.strip_prefix('+').unwrap_or(whole)),
        };
        if whole.is_empty() && frac.is_empty() {
            return Err(format!("malformed decimal `{s}`"));
        }
        if !whole.bytes().all(|b| b.is_ascii_digit()) || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(format!("malformed decimal `{s}`"));
        }
        let digits = format!("{whole}{frac}");
        let digits = if digits.is_empty() { "0".to_string() } else { digits };
        let mut num: BigInt = digits.parse().map_err(|_| format!("malformed decimal `{s}`"))?;
        if negative {
            num = -num;
        }
        let den = BigInt::from(10u32).pow(frac.len() as u32);
        return Ok(Rational::new(num, den));
    }
    Ok(Rational::from_integer(parse_integer(s)?))
}

fn parse_integer(s: &str) -> Result<BigInt, String> {
    let body = s.strip_prefix(['-', '+']).unwrap_or(s);
    if body.is_empty() || !body.bytes().all(|b| b.is_ascii_digit()) {
        return Err(format!("malformed number `{s}`"));
    }
    s.strip_prefix('+')
        .unwrap_or(s)
        .parse()
        .map_err(|_| format!("malformed number `{s}`"))
}

/// Canonical text form: `p` for integers, `p/q` otherwise.
pub fn format_exact(x: &Rational) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Rounds to `dp` decimal places with ties to even and renders with exactly `dp` digits.
pub fn render_fixed(x: &Rational, dp: usize) -> String {
    let scale = BigInt::from(10u32).pow(dp as u32);
    let scaled = x.abs() * Rational::from_integer(scale.clone());
    let (mut q, r) = scaled.numer().div_rem(scaled.denom());
    let twice = &r * BigInt::from(2);
    match twice.cmp(scaled.denom()) {
        Ordering::Greater => q += BigInt::one(),
        Ordering::Equal if q.is_odd() => q += BigInt::one(),
        _ => {}
    }
    let negative = x.is_negative() && !q.is_zero();
    let (int_part, frac_part) = q.div_rem(&scale);
    let mut out = String::new();
    if negative {
        out.push('-');
    }
    out.push_str(&int_part.to_string());
    if dp > 0 {
        out.push('.');
        out.push_str(&format!("{:0>width$}", frac_part.to_string(), width = dp));
    }
    out
}

/// Like [`render_fixed`] but drops trailing zeros (and a bare trailing dot).
pub fn render_shortest(x: &Rational, dp: usize) -> String {
    let fixed = render_fixed(x, dp);
    if !fixed.contains('.') {
        return fixed;
    }
    fixed.trim_end_matches('0').trim_end_matches('.').to_string()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_all_forms() {
        assert_eq!(parse_rational("12").unwrap(), int(12));
        assert_eq!(parse_rational("-3").unwrap(), int(-3));
        assert_eq!(parse_rational("1.25").unwrap(), ratio(5, 4));
        assert_eq!(parse_rational("-0.5").unwrap(), ratio(-1, 2));
        assert_eq!(parse_rational(".5").unwrap(), ratio(1, 2));
        assert_eq!(parse_rational(" 3/4 ").unwrap(), ratio(3, 4));
        assert_eq!(parse_rational("-6/4").unwrap(), ratio(-3, 2));
        assert_eq!(parse_rational("+7").unwrap(), int(7));
    }

    #[test]
    fn rejects_garbage() {
        for bad in ["", "abc", "1/0", "1.2.3", "--1", "1e3", ".", "1/x"] {
            assert!(parse_rational(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn rounding_is_half_even() {
        assert_eq!(render_fixed(&ratio(5, 100000), 4), "0.0000");
        assert_eq!(render_fixed(&ratio(15, 100000), 4), "0.0002");
        assert_eq!(render_fixed(&ratio(25, 100000), 4), "0.0002");
        assert_eq!(render_fixed(&ratio(-25, 100000), 4), "-0.0002");
        assert_eq!(render_fixed(&ratio(-1, 100000), 4), "0.0000");
        assert_eq!(render_fixed(&ratio(19, 10), 4), "1.9000");
        assert_eq!(render_shortest(&ratio(19, 10), 4), "1.9");
        assert_eq!(render_shortest(&int(3), 4), "3");
        assert_eq!(render_fixed(&ratio(47, 26), 4), "1.8077");
    }

    #[test]
    fn exact_format() {
        assert_eq!(format_exact(&ratio(6, 4)), "3/2");
        assert_eq!(format_exact(&int(-2)), "-2");
    }
}
