//! The `.cplx` text format: one maximal face per line, vertex labels
//! separated by whitespace. Lines whose first byte is `#` are comments and
//! whitespace-only lines are skipped.

use crate::complex::SimplicialComplex;
use crate::error::{HdxError, Result};

fn is_ws(b: u8) -> bool {
    matches!(b, b' ' | b'\t' | b'\r' | b'\n' | 0x0b | 0x0c)
}

/// Splits the input into maximal faces without building the complex.
/// Returns `(line_number, labels)` pairs, 1-based line numbers.
pub fn parse_faces(input: &[u8]) -> Result<Vec<(usize, Vec<String>)>> {
    let mut out = Vec::new();
    for (n, line) in input.split(|&b| b == b'\n').enumerate() {
        let lineno = n + 1;
        if line.first() == Some(&b'#') {
            continue;
        }
        let mut labels = Vec::new();
        for tok in line.split(|&b| is_ws(b)).filter(|t| !t.is_empty()) {
            let s = std::str::from_utf8(tok).map_err(|_| HdxError::Parse {
                line: lineno,
                message: "vertex label is not valid UTF-8".into(),
            })?;
            labels.push(s.to_string());
        }
        if !labels.is_empty() {
            out.push((lineno, labels));
        }
    }
    Ok(out)
}

/// Parses `.cplx` bytes into a complex. Structural problems (mixed sizes,
/// repeated labels) carry the offending line number.
pub fn parse_cplx(input: &[u8]) -> Result<SimplicialComplex> {
    let faces = parse_faces(input)?;
    if faces.is_empty() {
        return Err(HdxError::EmptyInput);
    }
    let size = faces[0].1.len();
    for (line, f) in &faces {
        let mut sorted: Vec<&String> = f.iter().collect();
        sorted.sort();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(HdxError::Parse {
                line: *line,
                message: format!("face {} repeats a vertex label", f.join(",")),
            });
        }
        if f.len() != size {
            return Err(HdxError::Parse {
                line: *line,
                message: format!("face has {} vertices, expected {size}", f.len()),
            });
        }
    }
    SimplicialComplex::build(faces.into_iter().map(|(_, f)| f))
}

pub fn read_cplx(path: &std::path::Path) -> Result<SimplicialComplex> {
    let bytes = std::fs::read(path).map_err(|e| HdxError::Parse {
        line: 0,
        message: format!("cannot read {}: {e}", path.display()),
    })?;
    parse_cplx(&bytes)
}

/// Serializes the maximal faces, one per line, in face order. A line whose
/// first label starts with `#` is indented so it is not read as a comment.
pub fn write_cplx(x: &SimplicialComplex) -> String {
    let mut s = String::new();
    for f in x.facets() {
        if x.face_labels(f).first().is_some_and(|l| l.starts_with('#')) {
            s.push(' ');
        }
        s.push_str(&x.face_labels(f).join(" "));
        s.push('\n');
    }
    s
}
