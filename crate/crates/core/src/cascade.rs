//! Fat faces, the container, full faces and expanding faces of a cochain.

use num_traits::{One, Zero};

use crate::cochain::{localized_norm, Cochain};
use crate::complex::SimplicialComplex;
use crate::error::{HdxError, Result};
use crate::rational::{format_pq, pow, Rational};

/// `S^j(W)` for `j = i, i−1, …, −1` with fatness `η`.
#[derive(Clone, Debug)]
pub struct FatCascade {
    base_dim: isize,
    eta: Rational,
    /// `levels[j + 1] = S^j(W)`.
    levels: Vec<Cochain>,
}

impl FatCascade {
    pub fn base_dim(&self) -> isize {
        self.base_dim
    }

    pub fn eta(&self) -> &Rational {
        &self.eta
    }

    /// `S^j(W)` for `−1 ≤ j ≤ i`.
    pub fn level(&self, j: isize) -> &Cochain {
        &self.levels[(j + 1) as usize]
    }

    pub fn base(&self) -> &Cochain {
        self.level(self.base_dim)
    }

    /// Whether the empty face is fat.
    pub fn empty_face_fat(&self) -> bool {
        !self.level(-1).is_empty()
    }
}

/// `η^{2^{i−j−1}}`, the fatness threshold for `j`-faces of an `i`-cochain.
pub fn fat_threshold(eta: &Rational, i: isize, j: isize) -> Rational {
    pow(eta, 1u64 << (i - j - 1))
}

fn check_eta(eta: &Rational) -> Result<()> {
    if eta <= &Rational::zero() || eta >= &Rational::one() {
        return Err(HdxError::BadFatness(format_pq(eta)));
    }
    Ok(())
}

/// Descending recursion: `σ ∈ S^j ⇔ ‖S^{j+1}_σ‖_σ ≥ η^{2^{i−j−1}}`.
pub fn fat_cascade(x: &SimplicialComplex, w: &Cochain, eta: &Rational) -> Result<FatCascade> {
    check_eta(eta)?;
    w.check_in(x)?;
    let i = w.dim();
    if i < 0 {
        return Err(HdxError::DimensionMismatch("fat faces need a cochain of dimension ≥ 0".into()));
    }
    let mut levels = vec![Cochain::empty(-1); (i + 2) as usize];
    levels[(i + 1) as usize] = w.clone();
    for j in (-1..i).rev() {
        let upper = &levels[(j + 2) as usize];
        let threshold = fat_threshold(eta, i, j);
        let mut fat = Cochain::empty(j);
        if !upper.is_empty() {
            for (idx, sigma) in x.faces(j).iter().enumerate() {
                if localized_norm(x, upper, sigma)? >= threshold {
                    fat.insert(idx);
                }
            }
        }
        levels[(j + 1) as usize] = fat;
    }
    Ok(FatCascade {
        base_dim: i,
        eta: eta.clone(),
        levels,
    })
}

/// `Γ(W) = {τ ∈ X(i+1) | ∃σ ⊂ τ, σ ∈ W}`.
pub fn container(x: &SimplicialComplex, w: &Cochain) -> Result<Cochain> {
    w.check_in(x)?;
    let i = w.dim();
    if i >= x.dim() {
        return Err(HdxError::TopDimension(i));
    }
    let mut out = Cochain::empty(i + 1);
    for s in w.iter() {
        for &t in x.cofaces(i, s) {
            out.insert(t);
        }
    }
    Ok(out)
}

/// `ψ(W)`: the (i+1)-faces with at least one i-face in `W` and one outside.
pub fn expanding_faces(x: &SimplicialComplex, w: &Cochain) -> Result<Cochain> {
    w.check_in(x)?;
    let i = w.dim();
    if i >= x.dim() {
        return Err(HdxError::TopDimension(i));
    }
    let mut out = Cochain::empty(i + 1);
    for t in 0..x.num_faces(i + 1) {
        let b = x.boundary(i + 1, t);
        let inside = b.iter().filter(|&&s| w.contains(s)).count();
        if inside > 0 && inside < b.len() {
            out.insert(t);
        }
    }
    Ok(out)
}

/// `F^j(W)` for `0 ≤ j ≤ i+1`.
#[derive(Clone, Debug)]
pub struct FullLevels {
    cascade: FatCascade,
    /// `levels[j] = F^j(W)`.
    levels: Vec<Cochain>,
}

impl FullLevels {
    pub fn level(&self, j: isize) -> &Cochain {
        &self.levels[j as usize]
    }

    pub fn cascade(&self) -> &FatCascade {
        &self.cascade
    }
}

/// Full faces from the fat cascade. `F^0` is all of `X(0)` when the empty
/// face is fat and empty otherwise.
pub fn full_levels(x: &SimplicialComplex, w: &Cochain, eta: &Rational) -> Result<FullLevels> {
    if w.dim() >= x.dim() {
        check_eta(eta)?;
        return Err(HdxError::TopDimension(w.dim()));
    }
    let cascade = fat_cascade(x, w, eta)?;
    Ok(full_from_cascade(x, cascade))
}

pub(crate) fn full_from_cascade(x: &SimplicialComplex, cascade: FatCascade) -> FullLevels {
    let i = cascade.base_dim();
    let mut levels = Vec::with_capacity((i + 2) as usize);
    for j in 0..=i + 1 {
        let below = cascade.level(j - 1);
        let full = Cochain::from_indices(
            j,
            (0..x.num_faces(j)).filter(|&t| {
                if j == 0 {
                    cascade.empty_face_fat()
                } else {
                    x.boundary(j, t).iter().all(|&s| below.contains(s))
                }
            }),
        );
        levels.push(full);
    }
    FullLevels { cascade, levels }
}
