//! Text dump of a simulated walk: a `# level=<i> seed=<s> steps=<t>` header
//! followed by one face per line, its sorted vertex labels joined by commas.

use crate::complex::{Face, SimplicialComplex};
use crate::error::{HdxError, Result};
use crate::walk::simulate_walk_stream;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Trajectory {
    pub level: isize,
    pub seed: u64,
    pub steps: usize,
    /// `steps + 1` faces as label lists.
    pub faces: Vec<Vec<String>>,
}

impl Trajectory {
    /// Simulates `steps` moves from `start` on stream `stream` of `seed`.
    pub fn simulate(x: &SimplicialComplex, level: isize, start: &Face, steps: usize, seed: u64, stream: u64) -> Result<Self> {
        let walk = simulate_walk_stream(x, level, start, steps, seed, stream)?;
        Ok(Trajectory {
            level,
            seed,
            steps,
            faces: walk
                .iter()
                .map(|f| {
                    let mut l: Vec<String> = x.face_labels(f).into_iter().map(str::to_string).collect();
                    l.sort();
                    l
                })
                .collect(),
        })
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("# level={} seed={} steps={}\n", self.level, self.seed, self.steps);
        for f in &self.faces {
            s.push_str(&f.join(","));
            s.push('\n');
        }
        s
    }

    /// Faces resolved against `x`.
    pub fn resolve(&self, x: &SimplicialComplex) -> Result<Vec<Face>> {
        self.faces
            .iter()
            .map(|f| {
                let face = x.face_from_labels(f)?;
                if !x.contains(&face) {
                    return Err(HdxError::FaceNotInComplex(f.join(",")));
                }
                Ok(face)
            })
            .collect()
    }
}

fn perr(line: usize, message: impl Into<String>) -> HdxError {
    HdxError::Parse {
        line,
        message: message.into(),
    }
}

fn header_field<T: std::str::FromStr>(tok: Option<&str>, key: &str) -> Result<T> {
    tok.and_then(|t| t.strip_prefix(key))
        .and_then(|t| t.strip_prefix('='))
        .and_then(|v| v.parse().ok())
        .ok_or_else(|| perr(1, format!("header needs `{key}=<value>`")))
}

/// Parses a dump. Checks the face count against `steps`, that every face
/// has `level + 1` distinct labels in sorted order, and nothing else; use
/// [`Trajectory::resolve`] to check faces against a complex.
pub fn parse_trajectory(input: &[u8]) -> Result<Trajectory> {
    let text = std::str::from_utf8(input).map_err(|e| {
        let line = input[..e.valid_up_to()].iter().filter(|&&b| b == b'\n').count() + 1;
        perr(line, "input is not valid UTF-8")
    })?;
    let mut lines = text.lines();
    let header = lines.next().ok_or_else(|| perr(1, "missing header"))?;
    let rest = header.strip_prefix('#').ok_or_else(|| perr(1, "header must start with `#`"))?;
    let mut toks = rest.split_whitespace();
    let level: isize = header_field(toks.next(), "level")?;
    let seed: u64 = header_field(toks.next(), "seed")?;
    let steps: usize = header_field(toks.next(), "steps")?;
    if toks.next().is_some() {
        return Err(perr(1, "trailing text in header"));
    }
    if level < 0 {
        return Err(perr(1, "level must be nonnegative"));
    }
    let mut faces = Vec::new();
    for (n, line) in lines.enumerate() {
        let lineno = n + 2;
        let labels: Vec<String> = line.split(',').map(str::to_string).collect();
        if labels.iter().any(|l| l.is_empty() || l.contains(char::is_whitespace)) {
            return Err(perr(lineno, "empty label or whitespace in label"));
        }
        if labels.len() as isize != level + 1 {
            return Err(perr(lineno, format!("face has {} labels, expected {}", labels.len(), level + 1)));
        }
        if labels.windows(2).any(|w| w[0] >= w[1]) {
            return Err(perr(lineno, "labels must be distinct and sorted"));
        }
        faces.push(labels);
    }
    if faces.len() != steps.saturating_add(1) {
        return Err(perr(faces.len() + 1, format!("expected {} faces, found {}", steps.saturating_add(1), faces.len())));
    }
    Ok(Trajectory { level, seed, steps, faces })
}
