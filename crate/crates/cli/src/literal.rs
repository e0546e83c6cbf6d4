//! Complex literals of the form `a`, `bi`, `a+bi`, `a-bi`, `i`, `-i`.

use std::fmt;

use fibzeta::Complex;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LiteralError(pub String);

impl fmt::Display for LiteralError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "invalid complex literal '{}'", self.0)
    }
}

impl std::error::Error for LiteralError {}

fn real_part(text: &str, whole: &str) -> Result<f64, LiteralError> {
    // f64::from_str also takes "inf" and "nan"; only plain decimals are allowed here
    let plain = !text.is_empty()
        && text
            .chars()
            .all(|c| c.is_ascii_digit() || matches!(c, '.' | 'e' | 'E' | '+' | '-'));
    match text.parse::<f64>() {
        Ok(v) if plain && v.is_finite() => Ok(v),
        _ => Err(LiteralError(whole.to_string())),
    }
}

/// Coefficient of `i`: empty or a bare sign means one.
fn imag_part(text: &str, whole: &str) -> Result<f64, LiteralError> {
    match text {
        "" | "+" => Ok(1.0),
        "-" => Ok(-1.0),
        t => real_part(t, whole),
    }
}

pub fn parse_complex(input: &str) -> Result<Complex, LiteralError> {
    let s = input.trim();
    if s.is_empty() {
        return Err(LiteralError(input.to_string()));
    }
    let Some(body) = s.strip_suffix('i') else {
        return Ok(Complex::new(real_part(s, input)?, 0.0));
    };
    // the split is the last sign that is not an exponent sign
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&j| matches!(bytes[j], b'+' | b'-') && !matches!(bytes[j - 1], b'e' | b'E'));
    match split {
        Some(j) => Ok(Complex::new(
            real_part(&body[..j], input)?,
            imag_part(&body[j..], input)?,
        )),
        None => Ok(Complex::new(0.0, imag_part(body, input)?)),
    }
}

/// 17 significant digits, readable back by [`parse_complex`].
pub fn format_complex(z: Complex) -> String {
    format!("{:.16e}{:+.16e}i", z.re, z.im)
}
