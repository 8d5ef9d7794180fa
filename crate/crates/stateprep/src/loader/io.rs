//! Text formats for loader inputs. Dense (.dsv): one amplitude per
//! line, "re" or "re im". Sparse (.ssv): one point per line,
//! "<bitstring> re [im]"; the bitstring length fixes the register
//! width. Both allow '#' comments and blank lines.

use super::{BitPattern, LoaderError};
use num_complex::Complex64;

fn parse_float(token: &str, line: usize) -> Result<f64, LoaderError> {
    let value: f64 = token.parse().map_err(|_| LoaderError::Parse {
        line,
        message: format!("bad number `{token}`"),
    })?;
    if !value.is_finite() {
        return Err(LoaderError::Parse {
            line,
            message: format!("non-finite number `{token}`"),
        });
    }
    Ok(value)
}

fn significant_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(index, raw)| {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            None
        } else {
            Some((index + 1, line))
        }
    })
}

/// Amplitude list from .dsv text. Shape and norm are checked by
/// `DenseState`, not here.
pub fn parse_dense_text(text: &str) -> Result<Vec<Complex64>, LoaderError> {
    let mut amplitudes = Vec::new();
    for (line, content) in significant_lines(text) {
        let mut parts = content.split_whitespace();
        let real = parse_float(parts.next().expect("nonempty line"), line)?;
        let imag = match parts.next() {
            Some(token) => parse_float(token, line)?,
            None => 0.0,
        };
        if let Some(extra) = parts.next() {
            return Err(LoaderError::Parse {
                line,
                message: format!("unexpected token `{extra}`"),
            });
        }
        amplitudes.push(Complex64::new(real, imag));
    }
    if amplitudes.is_empty() {
        return Err(LoaderError::Parse { line: 1, message: "no amplitudes".to_string() });
    }
    Ok(amplitudes)
}

/// Point list from .ssv text. Width consistency is checked here (with
/// line numbers); duplicates and norms are checked by `SparsePointSet`.
pub fn parse_sparse_text(text: &str) -> Result<Vec<(BitPattern, Complex64)>, LoaderError> {
    let mut points: Vec<(BitPattern, Complex64)> = Vec::new();
    for (line, content) in significant_lines(text) {
        let mut parts = content.split_whitespace();
        let pattern_token = parts.next().expect("nonempty line");
        let pattern: BitPattern = pattern_token.parse().map_err(|_| LoaderError::Parse {
            line,
            message: format!("bad pattern `{pattern_token}`"),
        })?;
        if let Some((first, _)) = points.first() {
            if pattern.width() != first.width() {
                return Err(LoaderError::Parse {
                    line,
                    message: format!(
                        "pattern width {} does not match earlier width {}",
                        pattern.width(),
                        first.width()
                    ),
                });
            }
        }
        let real_token = parts.next().ok_or_else(|| LoaderError::Parse {
            line,
            message: "missing amplitude".to_string(),
        })?;
        let real = parse_float(real_token, line)?;
        let imag = match parts.next() {
            Some(token) => parse_float(token, line)?,
            None => 0.0,
        };
        if let Some(extra) = parts.next() {
            return Err(LoaderError::Parse {
                line,
                message: format!("unexpected token `{extra}`"),
            });
        }
        points.push((pattern, Complex64::new(real, imag)));
    }
    if points.is_empty() {
        return Err(LoaderError::Parse { line: 1, message: "no points".to_string() });
    }
    Ok(points)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_1_SQRT_2;

    #[test]
    fn dense_text_with_comments_and_implicit_imag() {
        let text = "# half-half\n0.7071067811865476\n0.0 0.7071067811865476 # i/√2\n";
        let amps = parse_dense_text(text).unwrap();
        assert_eq!(amps.len(), 2);
        assert_eq!(amps[0], Complex64::new(FRAC_1_SQRT_2, 0.0));
        assert_eq!(amps[1], Complex64::new(0.0, FRAC_1_SQRT_2));
    }

    #[test]
    fn dense_text_errors_carry_line_numbers() {
        let err = parse_dense_text("0.5\nxyz\n").unwrap_err();
        assert_eq!(
            err,
            LoaderError::Parse { line: 2, message: "bad number `xyz`".to_string() }
        );
        let err = parse_dense_text("0.5 0.5 0.5\n").unwrap_err();
        assert!(matches!(err, LoaderError::Parse { line: 1, .. }));
        let err = parse_dense_text("inf\n").unwrap_err();
        assert!(matches!(err, LoaderError::Parse { line: 1, .. }));
        assert!(parse_dense_text("# only comments\n").is_err());
    }

    #[test]
    fn sparse_text_round_trip() {
        let text = "# two points\n00 0.7071067811865476\n11 0.0 0.7071067811865476\n";
        let points = parse_sparse_text(text).unwrap();
        assert_eq!(points.len(), 2);
        assert_eq!(points[0].0.to_string(), "00");
        assert_eq!(points[1].1, Complex64::new(0.0, FRAC_1_SQRT_2));
    }

    #[test]
    fn sparse_text_errors() {
        let err = parse_sparse_text("00 0.5\n111 0.5\n").unwrap_err();
        assert!(matches!(&err, LoaderError::Parse { line: 2, message } if message.contains("width")));
        let err = parse_sparse_text("0x 0.5\n").unwrap_err();
        assert!(matches!(&err, LoaderError::Parse { line: 1, message } if message.contains("pattern")));
        let err = parse_sparse_text("00\n").unwrap_err();
        assert!(matches!(&err, LoaderError::Parse { line: 1, message } if message.contains("amplitude")));
    }
}
