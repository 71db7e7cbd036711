//! Locale-free numeric formatting for CSV output.

/// Positional notation with 17 significant digits, trailing zeros removed.
/// Zero prints as `0`.
pub fn format_real(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{:.16e}", x.abs());
    let (mantissa, exp) = sci.split_once('e').expect("scientific format has an exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    let digits: String = mantissa.chars().filter(char::is_ascii_digit).collect();

    let mut out = String::new();
    if x < 0.0 {
        out.push('-');
    }
    if exp < 0 {
        out.push_str("0.");
        out.extend(std::iter::repeat('0').take((-exp - 1) as usize));
        out.push_str(&digits);
    } else {
        let int_len = exp as usize + 1;
        if int_len >= digits.len() {
            out.push_str(&digits);
            out.extend(std::iter::repeat('0').take(int_len - digits.len()));
        } else {
            out.push_str(&digits[..int_len]);
            out.push('.');
            out.push_str(&digits[int_len..]);
        }
    }
    if out.contains('.') {
        while out.ends_with('0') {
            out.pop();
        }
        if out.ends_with('.') {
            out.pop();
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn known_values() {
        assert_eq!(format_real(0.0), "0");
        assert_eq!(format_real(-0.0), "0");
        assert_eq!(format_real(4.0 * PI * PI), "39.478417604357432");
        assert_eq!(format_real(3.0), "3");
        assert_eq!(format_real(-2.5), "-2.5");
        assert_eq!(format_real(1e-5), "0.000010000000000000001");
        assert_eq!(format_real(1e-3), "0.001");
        assert_eq!(format_real(1.5e20), "150000000000000000000");
        assert_eq!(format_real(0.1), "0.10000000000000001");
    }

    #[test]
    fn round_trips() {
        for x in [PI, 1.0 / 3.0, 12345.678901234567, 7.1e-9, 98765432.1] {
            let s = format_real(x);
            assert_eq!(s.parse::<f64>().unwrap(), x, "{s}");
        }
    }
}
