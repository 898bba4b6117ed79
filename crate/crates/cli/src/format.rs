//! Fixed-precision number rendering for tabular output.

/// Nine significant digits in the shortest of fixed or exponent notation,
/// trailing zeros removed. Non-finite values render as the empty string.
pub fn sig9(v: f64) -> String {
    if !v.is_finite() {
        return String::new();
    }
    if v == 0.0 {
        return "0".into();
    }
    let sci = format!("{v:.8e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent notation");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..9).contains(&exp) {
        let decimals = (8 - exp).max(0) as usize;
        trim(&format!("{v:.decimals$}")).to_string()
    } else {
        format!("{}e{exp}", trim(mantissa))
    }
}

fn trim(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

#[cfg(test)]
mod tests {
    use super::sig9;

    #[test]
    fn nine_digits() {
        assert_eq!(sig9(5.739060360995208), "5.73906036");
        assert_eq!(sig9(1.0), "1");
        assert_eq!(sig9(-0.0438855), "-0.0438855");
        assert_eq!(sig9(1.23456789012e-7), "1.23456789e-7");
        assert_eq!(sig9(123456789012.0), "1.23456789e11");
        assert_eq!(sig9(0.0), "0");
        assert_eq!(sig9(f64::NAN), "");
        // rounding carries into the next decade
        assert_eq!(sig9(9.9999999999), "10");
    }
}
