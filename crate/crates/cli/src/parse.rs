//! Parsers for command-line scalars.

use num_complex::Complex64;

/// Parses `re`, `imi`, `re+imi`, `re-imi`, `i`, `-i` or the token `i/2`.
pub fn complex(s: &str) -> Result<Complex64, String> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if t == "i/2" {
        return Ok(Complex64::new(0.0, 0.5));
    }
    let Some(body) = t.strip_suffix('i') else {
        return real(&t).map(|re| Complex64::new(re, 0.0));
    };
    // The split point is the last sign that is not part of an exponent.
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| matches!(bytes[k], b'+' | b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(k) => (real(&body[..k])?, imag_coefficient(&body[k..])?),
        None => (0.0, imag_coefficient(body)?),
    };
    Ok(Complex64::new(re, im))
}

fn imag_coefficient(s: &str) -> Result<f64, String> {
    match s {
        "" | "+" => Ok(1.0),
        "-" => Ok(-1.0),
        _ => real(s),
    }
}

/// A finite `f64`.
pub fn real(s: &str) -> Result<f64, String> {
    let v: f64 = s.trim().parse().map_err(|_| format!("`{s}` is not a number"))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(format!("`{s}` is not finite"))
    }
}
