//! Pure simplicial complexes: faces by dimension, degrees and links.
//!
//! Faces are strictly increasing vertex-index sequences. Vertex labels are
//! sorted bytewise at build time and mapped to dense indices in that order,
//! so every per-level face list is lexicographic in both indices and labels.
//! The empty face is materialized as the single (−1)-face.

use std::collections::HashMap;
use std::fmt;

use crate::error::{HdxError, Result};

/// Largest facet size accepted; every facet enumerates its 2^(d+1) subfaces.
pub const MAX_FACET_SIZE: usize = 20;

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Face(Vec<u32>);

impl Face {
    pub fn empty() -> Self {
        Face(Vec::new())
    }

    /// Sorts and checks for duplicates.
    pub fn new(mut vertices: Vec<u32>) -> Option<Self> {
        vertices.sort_unstable();
        if vertices.windows(2).any(|w| w[0] == w[1]) {
            return None;
        }
        Some(Face(vertices))
    }

    pub(crate) fn from_sorted(vertices: Vec<u32>) -> Self {
        debug_assert!(vertices.windows(2).all(|w| w[0] < w[1]));
        Face(vertices)
    }

    pub fn vertices(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn dim(&self) -> isize {
        self.0.len() as isize - 1
    }

    pub fn is_subset_of(&self, other: &Face) -> bool {
        let mut it = other.0.iter();
        self.0.iter().all(|v| it.any(|w| w == v))
    }

    pub fn contains_vertex(&self, v: u32) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    pub fn union(&self, other: &Face) -> Face {
        let mut v: Vec<u32> = self.0.iter().chain(other.0.iter()).copied().collect();
        v.sort_unstable();
        v.dedup();
        Face(v)
    }

    pub fn difference(&self, other: &Face) -> Face {
        Face(
            self.0
                .iter()
                .copied()
                .filter(|v| !other.contains_vertex(*v))
                .collect(),
        )
    }

    /// The face with the vertex at `pos` removed.
    pub fn without_position(&self, pos: usize) -> Face {
        let mut v = self.0.clone();
        v.remove(pos);
        Face(v)
    }
}

#[derive(Clone, Debug, Default)]
struct Level {
    faces: Vec<Face>,
    degree: Vec<u64>,
    index: HashMap<Face, usize>,
    /// For a face of dimension k ≥ 0: indices of its k-vertex subfaces, in
    /// order of the removed vertex position.
    boundary: Vec<Vec<usize>>,
    /// Indices of the containing faces one level up, ascending.
    cofaces: Vec<Vec<usize>>,
}

/// An immutable pure simplicial complex of dimension `d ≥ −1`.
#[derive(Clone, Debug)]
pub struct SimplicialComplex {
    dim: isize,
    labels: Vec<String>,
    /// `levels[k]` holds the faces of dimension `k − 1`.
    levels: Vec<Level>,
}

impl PartialEq for SimplicialComplex {
    fn eq(&self, other: &Self) -> bool {
        self.canonical_facets() == other.canonical_facets()
    }
}

impl SimplicialComplex {
    /// Downward closure of the given maximal faces. Every maximal face must
    /// have the same number of vertices (at least one).
    pub fn build<I, F, S>(maximal_faces: I) -> Result<Self>
    where
        I: IntoIterator<Item = F>,
        F: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let raw: Vec<Vec<String>> = maximal_faces
            .into_iter()
            .map(|f| f.into_iter().map(|s| s.as_ref().to_string()).collect())
            .collect();
        let Some(first) = raw.first() else {
            return Err(HdxError::EmptyInput);
        };
        let size = first.len();
        if size == 0 {
            return Err(HdxError::EmptyInput);
        }
        for f in &raw {
            let mut sorted: Vec<&String> = f.iter().collect();
            sorted.sort();
            if sorted.windows(2).any(|w| w[0] == w[1]) {
                return Err(HdxError::DuplicateVertexInFace(f.join(",")));
            }
            if f.len() != size {
                return Err(HdxError::MixedDimension {
                    expected: size,
                    found: f.len(),
                    face: f.join(","),
                });
            }
        }
        if size > MAX_FACET_SIZE {
            return Err(HdxError::DimensionTooLarge(size - 1));
        }
        let mut labels: Vec<String> = raw.iter().flatten().cloned().collect();
        labels.sort();
        labels.dedup();
        let lookup: HashMap<&str, u32> = labels
            .iter()
            .enumerate()
            .map(|(i, l)| (l.as_str(), i as u32))
            .collect();
        let facets: Vec<Vec<u32>> = raw
            .iter()
            .map(|f| f.iter().map(|l| lookup[l.as_str()]).collect())
            .collect();
        Ok(Self::from_index_facets(labels, facets, size as isize - 1))
    }

    /// Closure of facets given as vertex indices into `labels`. All facets
    /// must have `dim + 1` distinct vertices; duplicate facets collapse.
    pub(crate) fn from_index_facets(labels: Vec<String>, facets: Vec<Vec<u32>>, dim: isize) -> Self {
        let mut facets: Vec<Face> = facets
            .into_iter()
            .map(|f| Face::new(f).expect("facet vertices distinct"))
            .collect();
        facets.sort();
        facets.dedup();

        let nlev = (dim + 2) as usize;
        let mut counts: Vec<HashMap<Face, u64>> = vec![HashMap::new(); nlev];
        for facet in &facets {
            let v = facet.vertices();
            let k = v.len();
            for mask in 0u32..(1u32 << k) {
                let sub: Vec<u32> = (0..k).filter(|b| mask >> b & 1 == 1).map(|b| v[b]).collect();
                *counts[sub.len()].entry(Face::from_sorted(sub)).or_insert(0) += 1;
            }
        }
        if facets.is_empty() {
            // Only reachable for internal callers; keep the empty face.
            counts[0].insert(Face::empty(), 0);
        }

        let mut levels: Vec<Level> = counts
            .into_iter()
            .map(|m| {
                let mut pairs: Vec<(Face, u64)> = m.into_iter().collect();
                pairs.sort();
                let index = pairs
                    .iter()
                    .enumerate()
                    .map(|(i, (f, _))| (f.clone(), i))
                    .collect();
                let (faces, degree) = pairs.into_iter().unzip();
                Level {
                    faces,
                    degree,
                    index,
                    boundary: Vec::new(),
                    cofaces: Vec::new(),
                }
            })
            .collect();

        for k in 0..nlev {
            levels[k].cofaces = vec![Vec::new(); levels[k].faces.len()];
        }
        for k in 1..nlev {
            let (lower, upper) = levels.split_at_mut(k);
            let below = &mut lower[k - 1];
            let here = &mut upper[0];
            here.boundary = here
                .faces
                .iter()
                .map(|f| {
                    (0..f.len())
                        .map(|p| below.index[&f.without_position(p)])
                        .collect()
                })
                .collect();
            for (fi, b) in here.boundary.iter().enumerate() {
                for &bi in b {
                    below.cofaces[bi].push(fi);
                }
            }
        }
        for level in &mut levels {
            for c in &mut level.cofaces {
                c.sort_unstable();
            }
        }
        SimplicialComplex { dim, labels, levels }
    }

    /// Dimension `d` (−1 only for the link of a maximal face).
    pub fn dim(&self) -> isize {
        self.dim
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, v: u32) -> &str {
        &self.labels[v as usize]
    }

    fn level(&self, i: isize) -> Option<&Level> {
        if i < -1 || i > self.dim {
            None
        } else {
            self.levels.get((i + 1) as usize)
        }
    }

    pub fn check_level(&self, i: isize) -> Result<()> {
        if self.level(i).is_none() {
            return Err(HdxError::LevelOutOfRange {
                level: i,
                min: -1,
                max: self.dim,
            });
        }
        Ok(())
    }

    /// Faces of dimension `i`, lexicographically ordered; empty outside [−1, d].
    pub fn faces(&self, i: isize) -> &[Face] {
        self.level(i).map(|l| l.faces.as_slice()).unwrap_or(&[])
    }

    pub fn num_faces(&self, i: isize) -> usize {
        self.faces(i).len()
    }

    pub fn facets(&self) -> &[Face] {
        self.faces(self.dim)
    }

    pub fn num_vertices(&self) -> usize {
        self.num_faces(0)
    }

    pub fn face(&self, i: isize, idx: usize) -> &Face {
        &self.faces(i)[idx]
    }

    pub fn degree(&self, i: isize, idx: usize) -> u64 {
        self.level(i).expect("level in range").degree[idx]
    }

    pub fn degrees(&self, i: isize) -> &[u64] {
        self.level(i).map(|l| l.degree.as_slice()).unwrap_or(&[])
    }

    pub fn index_of(&self, face: &Face) -> Option<usize> {
        self.level(face.dim())?.index.get(face).copied()
    }

    pub fn contains(&self, face: &Face) -> bool {
        self.index_of(face).is_some()
    }

    pub fn degree_of(&self, face: &Face) -> Option<u64> {
        let idx = self.index_of(face)?;
        Some(self.degree(face.dim(), idx))
    }

    /// Indices (at level `i − 1`) of the boundary faces of face `idx` at level `i`.
    pub fn boundary(&self, i: isize, idx: usize) -> &[usize] {
        match self.level(i) {
            Some(l) if i >= 0 => &l.boundary[idx],
            _ => &[],
        }
    }

    /// Indices (at level `i + 1`) of the faces that contain face `idx` at level `i`.
    pub fn cofaces(&self, i: isize, idx: usize) -> &[usize] {
        self.level(i).map(|l| l.cofaces[idx].as_slice()).unwrap_or(&[])
    }

    /// Σ_{σ ∈ X(i)} deg(σ).
    pub fn total_degree(&self, i: isize) -> u64 {
        self.degrees(i).iter().sum()
    }

    pub fn face_labels(&self, face: &Face) -> Vec<&str> {
        face.vertices().iter().map(|&v| self.label(v)).collect()
    }

    /// Labels joined by commas; the empty face prints as the empty string.
    pub fn display_face(&self, face: &Face) -> String {
        self.face_labels(face).join(",")
    }

    pub fn vertex_index(&self, label: &str) -> Option<u32> {
        self.labels
            .binary_search_by(|l| l.as_str().cmp(label))
            .ok()
            .map(|i| i as u32)
    }

    /// Looks up a face of the complex by its vertex labels (any order).
    pub fn face_from_labels<S: AsRef<str>>(&self, labels: &[S]) -> Result<Face> {
        let mut v = Vec::with_capacity(labels.len());
        for l in labels {
            let l = l.as_ref();
            v.push(
                self.vertex_index(l)
                    .ok_or_else(|| HdxError::UnknownLabel(l.to_string()))?,
            );
        }
        let joined = || labels.iter().map(|s| s.as_ref()).collect::<Vec<_>>().join(",");
        let face = Face::new(v).ok_or_else(|| HdxError::DuplicateVertexInFace(joined()))?;
        if !self.contains(&face) {
            return Err(HdxError::FaceNotInComplex(joined()));
        }
        Ok(face)
    }

    /// Facets as label lists, sorted; two complexes are equal iff these agree.
    pub fn canonical_facets(&self) -> Vec<Vec<String>> {
        let mut out: Vec<Vec<String>> = self
            .facets()
            .iter()
            .map(|f| {
                let mut l: Vec<String> = self.face_labels(f).into_iter().map(String::from).collect();
                l.sort();
                l
            })
            .collect();
        out.sort();
        out
    }

    /// The link `X_σ = {τ ∖ σ | τ ∈ X, τ ⊇ σ}`, a pure complex of dimension
    /// `d − |σ|`. Vertex labels are inherited from `X`.
    pub fn link(&self, sigma: &Face) -> Result<SimplicialComplex> {
        if !self.contains(sigma) {
            return Err(HdxError::FaceNotInComplex(self.try_display(sigma)));
        }
        let remaining: Vec<Face> = self
            .facets()
            .iter()
            .filter(|f| sigma.is_subset_of(f))
            .map(|f| f.difference(sigma))
            .collect();
        let mut used: Vec<u32> = remaining.iter().flat_map(|f| f.vertices().iter().copied()).collect();
        used.sort_unstable();
        used.dedup();
        let remap: HashMap<u32, u32> = used.iter().enumerate().map(|(i, &v)| (v, i as u32)).collect();
        let labels = used.iter().map(|&v| self.labels[v as usize].clone()).collect();
        let facets = remaining
            .iter()
            .map(|f| f.vertices().iter().map(|v| remap[v]).collect())
            .collect();
        Ok(Self::from_index_facets(labels, facets, self.dim - sigma.len() as isize))
    }

    fn try_display(&self, face: &Face) -> String {
        face.vertices()
            .iter()
            .map(|&v| self.labels.get(v as usize).cloned().unwrap_or_else(|| format!("#{v}")))
            .collect::<Vec<_>>()
            .join(",")
    }

    /// Re-checks the stored degree map against the facets and the
    /// degree-sum identity Σ_{X(i)} deg = C(d+1, i+1)·|X(d)|.
    pub fn validate(&self) -> Result<()> {
        let nfacets = self.facets().len() as u64;
        for i in -1..=self.dim {
            let level = self.level(i).expect("in range");
            let want = binomial((self.dim + 1) as u64, (i + 1) as u64) * nfacets;
            let got = self.total_degree(i);
            if got != want {
                return Err(HdxError::InvariantViolated(format!(
                    "degree sum at level {i} is {got}, expected C({}, {})·{nfacets} = {want}",
                    self.dim + 1,
                    i + 1
                )));
            }
            for (idx, face) in level.faces.iter().enumerate() {
                let count = self.facets().iter().filter(|f| face.is_subset_of(f)).count() as u64;
                if count == 0 || count != level.degree[idx] {
                    return Err(HdxError::InvariantViolated(format!(
                        "face {{{}}} stores degree {} but lies in {count} maximal faces",
                        self.display_face(face),
                        level.degree[idx]
                    )));
                }
            }
        }
        Ok(())
    }

    /// Test hook: perturbs a stored degree so validators can be exercised.
    #[doc(hidden)]
    pub fn corrupt_degree_for_testing(&mut self, i: isize, idx: usize, delta: i64) {
        let d = &mut self.levels[(i + 1) as usize].degree[idx];
        *d = (*d as i64 + delta).max(0) as u64;
    }

    /// Face counts per dimension −1..=d.
    pub fn f_vector(&self) -> Vec<usize> {
        (-1..=self.dim).map(|i| self.num_faces(i)).collect()
    }
}

impl fmt::Display for SimplicialComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-complex with f-vector {:?}", self.dim, self.f_vector())
    }
}

pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u64 = 1;
    for j in 0..k {
        acc = acc * (n - j) / (j + 1);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn cx(facets: &[&str]) -> SimplicialComplex {
        SimplicialComplex::build(facets.iter().map(|f| f.chars().map(|c| c.to_string()))).unwrap()
    }

    fn deg(x: &SimplicialComplex, labels: &str) -> u64 {
        let ls: Vec<String> = labels.chars().map(|c| c.to_string()).collect();
        x.degree_of(&x.face_from_labels(&ls).unwrap()).unwrap()
    }

    #[test]
    fn single_simplex_closure() {
        let x = cx(&["abc"]);
        assert_eq!(x.dim(), 2);
        assert_eq!(x.f_vector(), vec![1, 3, 3, 1]);
        for i in -1..=2 {
            assert!(x.degrees(i).iter().all(|&d| d == 1));
        }
        let edges: Vec<String> = x.faces(1).iter().map(|f| x.display_face(f)).collect();
        assert_eq!(edges, ["a,b", "a,c", "b,c"]);
    }

    #[test]
    fn two_triangles_degrees() {
        let x = cx(&["abc", "acd"]);
        assert_eq!((deg(&x, "a"), deg(&x, "b"), deg(&x, "c"), deg(&x, "d")), (2, 1, 2, 1));
        assert_eq!(deg(&x, "ac"), 2);
        for e in ["ab", "bc", "ad", "cd"] {
            assert_eq!(deg(&x, e), 1);
        }
        assert_eq!(x.degree(-1, 0), 2);
        x.validate().unwrap();
    }

    #[test]
    fn build_errors() {
        let mixed = SimplicialComplex::build(vec![vec!["a", "b"], vec!["a", "b", "c"]]);
        assert!(matches!(mixed, Err(HdxError::MixedDimension { .. })));
        let empty = SimplicialComplex::build(Vec::<Vec<&str>>::new());
        assert_eq!(empty.unwrap_err(), HdxError::EmptyInput);
        let dup = SimplicialComplex::build(vec![vec!["a", "a", "b"]]);
        assert!(matches!(dup, Err(HdxError::DuplicateVertexInFace(_))));
    }

    #[test]
    fn duplicate_facets_collapse() {
        let x = SimplicialComplex::build(vec![vec!["a", "b"], vec!["b", "a"]]).unwrap();
        assert_eq!(x.facets().len(), 1);
        assert_eq!(x.degree(0, 0), 1);
    }

    #[test]
    fn link_of_vertex() {
        let x = cx(&["abc", "acd"]);
        let a = x.face_from_labels(&["a"]).unwrap();
        let l = x.link(&a).unwrap();
        assert_eq!(l.dim(), 1);
        assert_eq!(l.labels(), ["b", "c", "d"]);
        let edges: Vec<String> = l.faces(1).iter().map(|f| l.display_face(f)).collect();
        assert_eq!(edges, ["b,c", "c,d"]);
        assert_eq!(l.degrees(0), &[1, 2, 1]);
    }

    #[test]
    fn link_of_empty_and_top_faces() {
        let x = cx(&["abc", "acd"]);
        assert_eq!(x.link(&Face::empty()).unwrap(), x);
        let top = x.face_from_labels(&["a", "b", "c"]).unwrap();
        let l = x.link(&top).unwrap();
        assert_eq!(l.dim(), -1);
        assert_eq!(l.f_vector(), vec![1]);
        assert_eq!(l.degree(-1, 0), 1);
        let missing = Face::new(vec![1, 3]).unwrap();
        assert!(matches!(x.link(&missing), Err(HdxError::FaceNotInComplex(_))));
    }

    #[test]
    fn corrupted_degree_is_caught() {
        let mut x = cx(&["abc", "acd"]);
        x.validate().unwrap();
        x.corrupt_degree_for_testing(0, 1, 1);
        assert!(matches!(x.validate(), Err(HdxError::InvariantViolated(_))));
    }

    fn arb_complex() -> impl Strategy<Value = SimplicialComplex> {
        (1usize..=3, 3usize..=7).prop_flat_map(|(d, n)| {
            let n = n.max(d + 1);
            proptest::collection::vec(proptest::sample::subsequence((0..n).collect::<Vec<_>>(), d + 1), 1..8)
                .prop_map(|fs| {
                    SimplicialComplex::build(fs.into_iter().map(|f| f.into_iter().map(|v| format!("v{v}"))))
                        .unwrap()
                })
        })
    }

    proptest! {
        #[test]
        fn degree_sum_identity(x in arb_complex()) {
            x.validate().unwrap();
            let nf = x.facets().len() as u64;
            for i in -1..=x.dim() {
                prop_assert_eq!(x.total_degree(i), binomial((x.dim() + 1) as u64, (i + 1) as u64) * nf);
            }
        }

        #[test]
        fn closure_and_purity(x in arb_complex()) {
            for i in 0..=x.dim() {
                for f in x.faces(i) {
                    for p in 0..f.len() {
                        prop_assert!(x.contains(&f.without_position(p)));
                    }
                    prop_assert!(x.facets().iter().any(|t| f.is_subset_of(t)));
                }
            }
        }

        #[test]
        fn link_of_link(x in arb_complex(), a in 0usize..64, b in 0usize..64) {
            let v = x.faces(0);
            let s = &v[a % v.len()];
            let ls = x.link(s).unwrap();
            if ls.dim() >= 0 {
                let w = ls.faces(0);
                let t_local = &w[b % w.len()];
                let label = ls.label(t_local.vertices()[0]);
                let t = x.face_from_labels(&[label]).unwrap();
                let direct = x.link(&s.union(&t)).unwrap();
                let nested = ls.link(t_local).unwrap();
                prop_assert_eq!(nested.canonical_facets(), direct.canonical_facets());
                prop_assert_eq!(nested.dim(), direct.dim());
            }
        }

        #[test]
        fn link_degrees_match(x in arb_complex(), a in 0usize..64) {
            let e = x.faces(0);
            let s = &e[a % e.len()];
            let l = x.link(s).unwrap();
            for i in -1..=l.dim() {
                for (idx, t) in l.faces(i).iter().enumerate() {
                    let labels = l.face_labels(t);
                    let mut all: Vec<&str> = labels.clone();
                    all.extend(x.face_labels(s));
                    let up = x.face_from_labels(&all).unwrap();
                    prop_assert_eq!(l.degree(i, idx), x.degree_of(&up).unwrap());
                }
            }
        }
    }
}
