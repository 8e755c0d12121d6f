//! Byte-stable number formatting for game files and reports.

/// Magnitudes below this print as `0`; they are floating-point residue.
pub const ZERO_SNAP: f64 = 5e-13;

/// Formats `x` with up to 9 significant digits, trailing zeros trimmed and
/// negative zero printed as `0`.
pub fn format_sig9(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    if x.abs() < ZERO_SNAP {
        return "0".to_string();
    }
    let magnitude = x.abs().log10().floor() as i32;
    let decimals = (8 - magnitude).max(0) as usize;
    trim(format!("{:.*}", decimals, x))
}

/// Fixed `decimals` places, trailing zeros trimmed.
pub fn format_fixed_trimmed(x: f64, decimals: usize) -> String {
    trim(format!("{:.*}", decimals, x))
}

fn trim(mut s: String) -> String {
    if s.contains('.') {
        while s.ends_with('0') {
            s.pop();
        }
        if s.ends_with('.') {
            s.pop();
        }
    }
    if s == "-0" {
        s = "0".to_string();
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nine_significant_digits() {
        assert_eq!(format_sig9(3.0), "3");
        assert_eq!(format_sig9(-0.0), "0");
        assert_eq!(format_sig9(2.5), "2.5");
        assert_eq!(format_sig9(std::f64::consts::FRAC_PI_2), "1.57079633");
        assert_eq!(format_sig9(0.000123456789123), "0.000123456789");
        assert_eq!(format_sig9(4.999999999999), "5");
        assert_eq!(format_sig9(-1e-17), "0");
        assert_eq!(format_sig9(3.7e-33), "0");
        assert_eq!(format_sig9(2.5e-9), "0.0000000025");
        assert_eq!(format_sig9(123456.7891), "123456.789");
    }

    #[test]
    fn fixed_trimmed() {
        assert_eq!(format_fixed_trimmed(0.0, 9), "0");
        assert_eq!(format_fixed_trimmed(std::f64::consts::FRAC_PI_2, 9), "1.570796327");
        assert_eq!(format_fixed_trimmed(-1e-12, 9), "0");
    }
}
