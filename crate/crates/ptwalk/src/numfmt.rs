//! Number formatting for text outputs.
//!
//! Every number written to CSV or JSON by this crate uses 15 significant
//! digits, which is enough to round-trip the decimal value of a double that
//! was itself produced from a 15-digit string.

/// Format `x` with 15 significant digits in the style of C's `%.15g`:
/// plain decimal notation for moderate magnitudes, scientific otherwise,
/// trailing zeros removed.
pub fn sig15(x: f64) -> String {
    const DIGITS: i32 = 15;
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let sci = format!("{:.*e}", (DIGITS - 1) as usize, x);
    let (mantissa, exponent) = sci
        .split_once('e')
        .expect("scientific format has an exponent");
    let exp: i32 = exponent.parse().expect("exponent is an integer");
    if !(-5..DIGITS).contains(&exp) {
        let mantissa = trim_fraction(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{mantissa}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (DIGITS - 1 - exp).max(0) as usize;
        trim_fraction(&format!("{x:.decimals$}")).to_string()
    }
}

fn trim_fraction(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plain_values() {
        assert_eq!(sig15(0.0), "0");
        assert_eq!(sig15(1.0), "1");
        assert_eq!(sig15(-2.5), "-2.5");
        assert_eq!(sig15(0.1), "0.1");
        assert_eq!(sig15(101.0 / 243.0), "0.415637860082305");
        assert_eq!(sig15(123456.0), "123456");
    }

    #[test]
    fn scientific_values() {
        assert_eq!(sig15(1.5e-7), "1.5e-07");
        assert_eq!(sig15(2.0e20), "2e+20");
    }

    #[test]
    fn round_trips_through_parse() {
        for &x in &[1.0 / 3.0, 2.0_f64.sqrt(), 1e-300, 6.02214076e23, -0.000123] {
            let s = sig15(x);
            let back: f64 = s.parse().unwrap();
            assert_eq!(sig15(back), s);
            assert!(((back - x) / x).abs() < 1e-14);
        }
    }
}
