//! Text formats accepted on the command line.

use crate::linalg::{c, Point2, C64};

/// A complex literal: `0.5`, `-2i`, `1.5+0.25i`, `1e-3-2e-2i`.
pub fn parse_complex_str(s: &str) -> Result<C64, String> {
    let t: String = s.chars().filter(|ch| !ch.is_whitespace()).collect();
    let bad = || format!("bad complex number {s:?}");
    if t.is_empty() {
        return Err(bad());
    }
    let Some(body) = t.strip_suffix('i') else {
        return t.parse::<f64>().map(|x| c(x, 0.0)).map_err(|_| bad());
    };
    // split at the last sign that is not a leading sign or an exponent sign
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let imag = |txt: &str| -> Result<f64, String> {
        match txt {
            "" | "+" => Ok(1.0),
            "-" => Ok(-1.0),
            _ => txt.parse::<f64>().map_err(|_| bad()),
        }
    };
    match split {
        Some(k) => Ok(c(body[..k].parse::<f64>().map_err(|_| bad())?, imag(&body[k..])?)),
        None => Ok(c(0.0, imag(body)?)),
    }
}

/// Comma-separated reals.
pub fn parse_reals(s: &str) -> Result<Vec<f64>, String> {
    s.split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|_| format!("bad number {t:?} in {s:?}")))
        .collect()
}

/// A point of C^2: `x,y` (complex literals) or four reals `re x, im x, re y, im y`
/// when prefixed with `r4:`.
pub fn parse_point(s: &str) -> Result<Point2, String> {
    if let Some(rest) = s.strip_prefix("r4:") {
        let v = parse_reals(rest)?;
        return <[f64; 4]>::try_from(v)
            .map(Point2::from_reals)
            .map_err(|_| format!("expected four reals in {s:?}"));
    }
    let parts: Vec<&str> = s.split(',').collect();
    match parts.as_slice() {
        [x, y] => Ok(Point2::new(parse_complex_str(x)?, parse_complex_str(y)?)),
        _ => Err(format!("expected a point x,y in {s:?}")),
    }
}

/// Semicolon-separated points.
pub fn parse_points(s: &str) -> Result<Vec<Point2>, String> {
    s.split(';').filter(|t| !t.trim().is_empty()).map(parse_point).collect()
}

/// Comma-separated complex literals.
pub fn parse_complex_list(s: &str) -> Result<Vec<C64>, String> {
    s.split(',').map(parse_complex_str).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_literals() {
        assert_eq!(parse_complex_str("0.5").unwrap(), c(0.5, 0.0));
        assert_eq!(parse_complex_str("-2i").unwrap(), c(0.0, -2.0));
        assert_eq!(parse_complex_str("i").unwrap(), c(0.0, 1.0));
        assert_eq!(parse_complex_str("1.5+0.25i").unwrap(), c(1.5, 0.25));
        assert_eq!(parse_complex_str("1e-3-2e-2i").unwrap(), c(1e-3, -2e-2));
        assert_eq!(parse_complex_str("-1e+2-i").unwrap(), c(-100.0, -1.0));
        assert!(parse_complex_str("1+2").is_err());
        assert!(parse_complex_str("").is_err());
    }

    #[test]
    fn points() {
        assert_eq!(parse_point("1.4,1.4").unwrap(), Point2::real(1.4, 1.4));
        assert_eq!(parse_point("r4:1,2,3,4").unwrap(), Point2::new(c(1.0, 2.0), c(3.0, 4.0)));
        assert_eq!(parse_points("0,0; 1,i").unwrap().len(), 2);
        assert!(parse_point("1,2,3").is_err());
    }
}
