//! Number formatting shared by CSV, JSON and the human-readable tables.

use serde_json::{Number, Value};

/// Formats `x` like C's `%.17g`: 17 significant digits, trailing zeros
/// stripped, exponent form when the decimal exponent is below -4 or at
/// least 17. Seventeen digits always round-trip an `f64` exactly.
pub fn g17(x: f64) -> String {
    if x.is_nan() {
        return "nan".to_string();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf" } else { "-inf" }.to_string();
    }
    if x == 0.0 {
        return if x.is_sign_negative() { "-0" } else { "0" }.to_string();
    }

    let sci = format!("{:.16e}", x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    let sign = if mantissa.starts_with('-') { "-" } else { "" };
    let digits: String = mantissa.chars().filter(char::is_ascii_digit).collect();

    if !(-4..17).contains(&exp) {
        let mut m = format!("{}.{}", &digits[..1], &digits[1..]);
        trim_fraction(&mut m);
        let esign = if exp < 0 { '-' } else { '+' };
        format!("{sign}{m}e{esign}{:02}", exp.abs())
    } else if exp >= 0 {
        let split = exp as usize + 1;
        let mut m = format!("{}.{}", &digits[..split], &digits[split..]);
        trim_fraction(&mut m);
        format!("{sign}{m}")
    } else {
        let zeros = "0".repeat((-exp - 1) as usize);
        let mut m = format!("0.{zeros}{digits}");
        trim_fraction(&mut m);
        format!("{sign}{m}")
    }
}

fn trim_fraction(s: &mut String) {
    if s.contains('.') {
        while s.ends_with('0') {
            s.pop();
        }
        if s.ends_with('.') {
            s.pop();
        }
    }
}

/// JSON number carrying the [`g17`] text verbatim. Non-finite values have no
/// JSON representation and become `null`.
pub fn json_number(x: f64) -> Value {
    if !x.is_finite() {
        return Value::Null;
    }
    g17(x)
        .parse::<Number>()
        .map(Value::Number)
        .unwrap_or(Value::Null)
}

/// Three-decimal display used in report tables; `-0.000` is printed as
/// `0.000` and infinities as `inf`/`-inf`.
pub fn fixed3(x: f64) -> String {
    if x.is_nan() {
        return String::new();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf" } else { "-inf" }.to_string();
    }
    let s = format!("{:.3}", x);
    if s == "-0.000" {
        "0.000".to_string()
    } else {
        s
    }
}
