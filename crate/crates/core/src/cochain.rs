//! Cochains (sets of same-dimension faces), their degree-weighted norm,
//! localization to links, and exact probabilities over the descending face
//! chain `P_d, P_{d−1}, …, P_{−1}`: `P_d` is a uniform maximal face and each
//! `P_{k−1}` drops a uniform vertex of `P_k`.

use std::collections::BTreeSet;

use itertools::Itertools;
use num_bigint::BigInt;
use num_traits::Zero;

use crate::complex::{binomial, Face, SimplicialComplex};
use crate::error::{HdxError, Result};
use crate::rational::Rational;

/// A set of `dim`-faces of a host complex, stored as face indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Cochain {
    dim: isize,
    members: BTreeSet<usize>,
}

impl Cochain {
    pub fn empty(dim: isize) -> Self {
        Cochain {
            dim,
            members: BTreeSet::new(),
        }
    }

    pub fn full(x: &SimplicialComplex, dim: isize) -> Self {
        Cochain {
            dim,
            members: (0..x.num_faces(dim)).collect(),
        }
    }

    pub fn from_indices(dim: isize, members: impl IntoIterator<Item = usize>) -> Self {
        Cochain {
            dim,
            members: members.into_iter().collect(),
        }
    }

    /// Members selected by the low bits of `mask` (bit `k` ↔ face index `k`).
    pub fn from_mask(dim: isize, mask: u64) -> Self {
        Self::from_indices(dim, (0..64).filter(|b| mask >> b & 1 == 1))
    }

    /// Builds a cochain from faces given as label lists. All faces must
    /// have the same dimension and belong to `x`.
    pub fn from_labels<S: AsRef<str>>(x: &SimplicialComplex, dim: isize, faces: &[&[S]]) -> Result<Self> {
        x.check_level(dim)?;
        let mut members = BTreeSet::new();
        for f in faces {
            let face = x.face_from_labels(f)?;
            if face.dim() != dim {
                return Err(HdxError::DimensionMismatch(format!(
                    "face of dimension {} in a {dim}-cochain",
                    face.dim()
                )));
            }
            members.insert(x.index_of(&face).expect("looked up"));
        }
        Ok(Cochain { dim, members })
    }

    pub fn dim(&self) -> isize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, idx: usize) -> bool {
        self.members.contains(&idx)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.members.iter().copied()
    }

    pub fn insert(&mut self, idx: usize) -> bool {
        self.members.insert(idx)
    }

    pub fn complement(&self, x: &SimplicialComplex) -> Self {
        Cochain {
            dim: self.dim,
            members: (0..x.num_faces(self.dim)).filter(|i| !self.contains(*i)).collect(),
        }
    }

    pub fn is_subset(&self, other: &Cochain) -> bool {
        self.dim == other.dim && self.members.is_subset(&other.members)
    }

    /// Checks that every member indexes a face of `x` at the declared level.
    pub fn check_in(&self, x: &SimplicialComplex) -> Result<()> {
        x.check_level(self.dim)?;
        let n = x.num_faces(self.dim);
        if let Some(bad) = self.members.iter().find(|&&m| m >= n) {
            return Err(HdxError::FaceNotInComplex(format!("index {bad} at level {}", self.dim)));
        }
        Ok(())
    }

    pub fn faces<'a>(&'a self, x: &'a SimplicialComplex) -> impl Iterator<Item = &'a Face> + 'a {
        self.iter().map(move |i| x.face(self.dim, i))
    }

    /// Member faces as comma-joined labels.
    pub fn display(&self, x: &SimplicialComplex) -> Vec<String> {
        self.faces(x).map(|f| x.display_face(f)).collect()
    }
}

/// `‖W‖ = Σ_{σ∈W} deg(σ) / Σ_{τ∈X(i)} deg(τ)`.
pub fn norm(x: &SimplicialComplex, w: &Cochain) -> Rational {
    let total = x.total_degree(w.dim());
    if total == 0 {
        return Rational::zero();
    }
    let num: u64 = w.iter().map(|i| x.degree(w.dim(), i)).sum();
    Rational::new(BigInt::from(num), BigInt::from(total))
}

/// The localization `W_σ = {τ ∈ X_σ | τ ⊍ σ ∈ W}` together with the link it
/// lives in.
#[derive(Clone, Debug)]
pub struct Localized {
    pub link: SimplicialComplex,
    pub cochain: Cochain,
}

pub fn localize(x: &SimplicialComplex, w: &Cochain, sigma: &Face) -> Result<Localized> {
    if sigma.dim() >= w.dim() {
        return Err(HdxError::DimensionMismatch(format!(
            "cannot localize a {}-cochain to a {}-face",
            w.dim(),
            sigma.dim()
        )));
    }
    let link = x.link(sigma)?;
    let dim = w.dim() - sigma.len() as isize;
    let mut members = BTreeSet::new();
    for tau in w.faces(x).filter(|t| sigma.is_subset_of(t)) {
        let rest = tau.difference(sigma);
        let local: Vec<u32> = rest
            .vertices()
            .iter()
            .map(|&v| link.vertex_index(x.label(v)).expect("vertex of link"))
            .collect();
        let face = Face::new(local).expect("distinct");
        members.insert(link.index_of(&face).expect("face of link"));
    }
    Ok(Localized {
        link,
        cochain: Cochain { dim, members },
    })
}

/// `‖W_σ‖_σ` computed in the host complex without materializing the link:
/// degrees in `X_σ` equal degrees of the corresponding faces in `X`, and the
/// link's total degree at this level is `C(d−j, i−j)·deg(σ)`.
pub fn localized_norm(x: &SimplicialComplex, w: &Cochain, sigma: &Face) -> Result<Rational> {
    let j = sigma.dim();
    let i = w.dim();
    if j >= i {
        return Err(HdxError::DimensionMismatch(format!(
            "cannot localize a {i}-cochain to a {j}-face"
        )));
    }
    let dsig = x
        .degree_of(sigma)
        .ok_or_else(|| HdxError::FaceNotInComplex(x.display_face(sigma)))?;
    let total = binomial((x.dim() - j) as u64, (i - j) as u64) * dsig;
    let num: u64 = if i == j + 1 {
        let sidx = x.index_of(sigma).expect("checked");
        x.cofaces(j, sidx)
            .iter()
            .filter(|&&t| w.contains(t))
            .map(|&t| x.degree(i, t))
            .sum()
    } else {
        w.iter()
            .filter(|&t| sigma.is_subset_of(x.face(i, t)))
            .map(|t| x.degree(i, t))
            .sum()
    };
    Ok(Rational::new(BigInt::from(num), BigInt::from(total)))
}

/// Exact `Pr[upper(P_k) ∧ lower(P_m)]` for `−1 ≤ m < k ≤ d`. Predicates
/// receive face indices at their level.
///
/// `Pr[P_k = σ] = deg(σ)/(C(d+1,k+1)·|X(d)|)` and, given `P_k = σ`, `P_m` is
/// uniform over the `C(k+1, m+1)` m-faces of σ.
pub fn chain_joint_prob<U, L>(x: &SimplicialComplex, k: isize, upper: U, m: isize, lower: L) -> Result<Rational>
where
    U: Fn(usize) -> bool,
    L: Fn(usize) -> bool,
{
    let d = x.dim();
    if !(-1 <= m && m < k && k <= d) {
        return Err(HdxError::LevelOutOfRange {
            level: if k > d { k } else { m },
            min: -1,
            max: d,
        });
    }
    let ksize = (k + 1) as usize;
    let msize = (m + 1) as usize;
    let mut num: u128 = 0;
    for (idx, sigma) in x.faces(k).iter().enumerate() {
        if !upper(idx) {
            continue;
        }
        let hits: u64 = if m == k - 1 {
            x.boundary(k, idx).iter().filter(|&&b| lower(b)).count() as u64
        } else {
            sigma
                .vertices()
                .iter()
                .copied()
                .combinations(msize)
                .filter(|sub| lower(x.index_of(&Face::from_sorted(sub.clone())).expect("subface")))
                .count() as u64
        };
        num += x.degree(k, idx) as u128 * hits as u128;
    }
    let den = binomial((d + 1) as u64, ksize as u64) as u128
        * x.facets().len() as u128
        * binomial(ksize as u64, msize as u64) as u128;
    Ok(Rational::new(BigInt::from(num), BigInt::from(den)))
}

/// `Pr[P_k ∈ A ∧ P_m ∈ B]` for cochains, with optional complementation.
pub fn chain_prob_sets(x: &SimplicialComplex, upper: &Cochain, upper_in: bool, lower: &Cochain, lower_in: bool) -> Result<Rational> {
    chain_joint_prob(
        x,
        upper.dim(),
        |i| upper.contains(i) == upper_in,
        lower.dim(),
        |i| lower.contains(i) == lower_in,
    )
}
