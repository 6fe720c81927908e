//! Number formatting shared by the CSV writers.

/// Formats `x` with 12 significant digits, `%g` style.
pub fn sig12(x: f64) -> String {
    sig(x, 12)
}

/// Formats `x` with `digits` significant digits, switching to exponent
/// notation for very large or very small magnitudes.
pub fn sig(x: f64, digits: usize) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let digits = digits.max(1);
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -5 || exp >= digits as i32 {
        let mantissa = trim_zeros(mantissa);
        return format!("{mantissa}e{exp}");
    }
    let decimals = (digits as i32 - 1 - exp).max(0) as usize;
    trim_zeros(&format!("{:.*}", decimals, x)).to_string()
}

fn trim_zeros(s: &str) -> &str {
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
    fn formats_like_printf_g() {
        assert_eq!(sig12(0.0), "0");
        assert_eq!(sig12(1.0), "1");
        assert_eq!(sig12(-2.5), "-2.5");
        assert_eq!(sig12(std::f64::consts::PI), "3.14159265359");
        assert_eq!(sig12(1.0e-7), "1e-7");
        assert_eq!(sig12(123456.0), "123456");
        assert_eq!(sig12(1.0e15), "1e15");
    }

    #[test]
    fn round_trips_to_twelve_digits() {
        for &x in &[1.234567890123456, -9.87654321e-4, 6.02214076e23, 0.1] {
            let back: f64 = sig12(x).parse().unwrap();
            assert!(((back - x) / x).abs() < 1e-11);
        }
    }
}
