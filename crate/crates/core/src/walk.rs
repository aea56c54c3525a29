//! The weighted i-graphs `G_i`, exact transition structure and the
//! two-step high-order walk sampler.
//!
//! Vertices of `G_i` are the i-faces of the complex. Two i-faces that share
//! an (i+1)-face `τ` are joined by `deg(τ)` parallel edges. A walk step from
//! σ picks an (i+1)-face `τ ⊃ σ` with probability proportional to `deg(τ)`
//! and then one of the `i+1` other i-faces of `τ` uniformly, which is
//! exactly a step of the simple random walk on `G_i`.

use std::collections::VecDeque;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::complex::{Face, SimplicialComplex};
use crate::error::{HdxError, Result};
use crate::rational::{to_f64, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IGraph {
    level: isize,
    names: Vec<String>,
    /// Off-diagonal neighbours with multi-edge weights, sorted by neighbour.
    adj: Vec<Vec<(usize, u64)>>,
    weighted_degree: Vec<u64>,
    self_loop: Vec<u64>,
}

impl IGraph {
    /// A graph from explicit undirected weighted edges. Parallel entries
    /// accumulate; `u == v` entries become self-loops.
    pub fn from_edges(level: isize, names: Vec<String>, edges: &[(usize, usize, u64)]) -> Self {
        let n = names.len();
        let mut dense = vec![vec![0u64; n]; n];
        let mut self_loop = vec![0u64; n];
        for &(u, v, w) in edges {
            if u == v {
                self_loop[u] += w;
            } else {
                dense[u][v] += w;
                dense[v][u] += w;
            }
        }
        let adj: Vec<Vec<(usize, u64)>> = dense
            .iter()
            .map(|row| row.iter().enumerate().filter(|(_, &w)| w > 0).map(|(v, &w)| (v, w)).collect())
            .collect();
        let weighted_degree = adj.iter().map(|r| r.iter().map(|(_, w)| w).sum()).collect();
        IGraph {
            level,
            names,
            adj,
            weighted_degree,
            self_loop,
        }
    }

    pub fn level(&self) -> isize {
        self.level
    }

    pub fn len(&self) -> usize {
        self.adj.len()
    }

    pub fn is_empty(&self) -> bool {
        self.adj.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn neighbors(&self, v: usize) -> &[(usize, u64)] {
        &self.adj[v]
    }

    pub fn edge_weight(&self, u: usize, v: usize) -> u64 {
        if u == v {
            return 0;
        }
        self.adj[u]
            .binary_search_by_key(&v, |&(n, _)| n)
            .map(|p| self.adj[u][p].1)
            .unwrap_or(0)
    }

    /// Σ of off-diagonal edge weights at `v`.
    pub fn weighted_degree(&self, v: usize) -> u64 {
        self.weighted_degree[v]
    }

    pub fn self_loop_weight(&self, v: usize) -> u64 {
        self.self_loop[v]
    }

    /// Degree used by the walk: off-diagonal weight plus self-loops (each
    /// loop counts once).
    pub fn degree(&self, v: usize) -> u64 {
        self.weighted_degree[v] + self.self_loop[v]
    }

    pub fn volume(&self) -> u64 {
        (0..self.len()).map(|v| self.degree(v)).sum()
    }

    /// Connected components, each sorted, ordered by smallest member.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.len();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for s in 0..n {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut comp = vec![s];
            let mut q = VecDeque::from([s]);
            while let Some(u) = q.pop_front() {
                for &(v, _) in &self.adj[u] {
                    if !seen[v] {
                        seen[v] = true;
                        comp.push(v);
                        q.push_back(v);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() <= 1
    }

    pub fn max_degree(&self) -> u64 {
        (0..self.len()).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    pub fn min_degree(&self) -> u64 {
        (0..self.len()).map(|v| self.degree(v)).min().unwrap_or(0)
    }

    /// Exact transition probability `P(u, v)`, self-loops included.
    pub fn transition(&self, u: usize, v: usize) -> Rational {
        let w = if u == v { self.self_loop[u] } else { self.edge_weight(u, v) };
        Rational::new(BigInt::from(w), BigInt::from(self.degree(u)))
    }
}

/// `G_i` of the complex for `0 ≤ i < d`.
pub fn build_igraph(x: &SimplicialComplex, i: isize) -> Result<IGraph> {
    if i < 0 || i >= x.dim() {
        return Err(HdxError::LevelOutOfRange {
            level: i,
            min: 0,
            max: x.dim() - 1,
        });
    }
    let names = x.faces(i).iter().map(|f| x.display_face(f)).collect();
    let mut edges = Vec::new();
    for t in 0..x.num_faces(i + 1) {
        let w = x.degree(i + 1, t);
        let b = x.boundary(i + 1, t);
        for (p, &s) in b.iter().enumerate() {
            for &s2 in &b[p + 1..] {
                edges.push((s, s2, w));
            }
        }
    }
    Ok(IGraph::from_edges(i, names, &edges))
}

/// `G` with `degree(v)` self-loops added at every vertex: the walk stays put
/// with probability 1/2.
pub fn lazy_igraph(g: &IGraph) -> IGraph {
    let mut lazy = g.clone();
    for v in 0..g.len() {
        lazy.self_loop[v] = g.weighted_degree[v];
    }
    lazy
}

/// A probability vector over the vertices of a graph, exact.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Distribution(Vec<Rational>);

impl Distribution {
    pub fn new(values: Vec<Rational>) -> Result<Self> {
        if values.iter().any(|v| v < &Rational::zero()) {
            return Err(HdxError::SupportMismatch("negative probability".into()));
        }
        let total: Rational = values.iter().sum();
        if !total.is_one() {
            return Err(HdxError::SupportMismatch(format!("values sum to {total}, not 1")));
        }
        Ok(Distribution(values))
    }

    /// `𝟙_v` on `n` vertices.
    pub fn point(n: usize, v: usize) -> Self {
        let mut values = vec![Rational::zero(); n];
        values[v] = Rational::one();
        Distribution(values)
    }

    pub fn uniform(n: usize) -> Self {
        Distribution(vec![Rational::new(BigInt::one(), BigInt::from(n)); n])
    }

    pub fn values(&self) -> &[Rational] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Exact squared Euclidean distance.
    pub fn l2_squared(&self, other: &Distribution) -> Rational {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| {
                let d = a - b;
                &d * &d
            })
            .sum()
    }

    pub fn l2_distance(&self, other: &Distribution) -> f64 {
        to_f64(&self.l2_squared(other)).sqrt()
    }
}

/// `π_{t+1} = π_t (D A)`, exact.
pub fn transition_step(g: &IGraph, pi: &Distribution) -> Result<Distribution> {
    if pi.len() != g.len() {
        return Err(HdxError::SupportMismatch(format!(
            "distribution has {} entries, graph has {} vertices",
            pi.len(),
            g.len()
        )));
    }
    let mut out = vec![Rational::zero(); g.len()];
    for (u, p) in pi.values().iter().enumerate() {
        if p.is_zero() {
            continue;
        }
        let deg = g.degree(u);
        if deg == 0 {
            return Err(HdxError::IsolatedVertex(u));
        }
        let share = p / BigInt::from(deg);
        if g.self_loop[u] > 0 {
            out[u] += &share * BigInt::from(g.self_loop[u]);
        }
        for &(v, w) in &g.adj[u] {
            out[v] += &share * BigInt::from(w);
        }
    }
    Ok(Distribution(out))
}

/// `π(v) = deg(v) / vol(V)`.
pub fn stationary(g: &IGraph) -> Distribution {
    let vol = BigInt::from(g.volume());
    Distribution(
        (0..g.len())
            .map(|v| Rational::new(BigInt::from(g.degree(v)), vol.clone()))
            .collect(),
    )
}

/// ChaCha8 stream `stream` of `seed`; every stochastic routine draws from one.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Exact branch probabilities of the two-step sampler from face `sigma`
/// (index at level `i`): for each reachable i-face, the summed probability
/// over all (τ, σ') branches.
pub fn sampler_branches(x: &SimplicialComplex, i: isize, sigma: usize) -> Vec<(usize, Rational)> {
    let cof = x.cofaces(i, sigma);
    let total: u64 = cof.iter().map(|&t| x.degree(i + 1, t)).sum();
    let others = BigInt::from(i + 1);
    let mut acc: Vec<(usize, Rational)> = Vec::new();
    for &t in cof {
        let pick_tau = Rational::new(BigInt::from(x.degree(i + 1, t)), BigInt::from(total));
        for &s in x.boundary(i + 1, t).iter().filter(|&&s| s != sigma) {
            let p = &pick_tau / &others;
            match acc.iter_mut().find(|(v, _)| *v == s) {
                Some(e) => e.1 += p,
                None => acc.push((s, p)),
            }
        }
    }
    acc.sort_by_key(|(v, _)| *v);
    acc
}

/// One step of the two-step sampler using only integer draws.
pub(crate) fn sample_step<R: Rng>(x: &SimplicialComplex, i: isize, sigma: usize, rng: &mut R) -> usize {
    let cof = x.cofaces(i, sigma);
    let total: u64 = cof.iter().map(|&t| x.degree(i + 1, t)).sum();
    let mut r = rng.random_range(0..total);
    let mut tau = cof[cof.len() - 1];
    for &t in cof {
        let w = x.degree(i + 1, t);
        if r < w {
            tau = t;
            break;
        }
        r -= w;
    }
    let b = x.boundary(i + 1, tau);
    let k = rng.random_range(0..b.len() - 1);
    let pos_sigma = b.iter().position(|&s| s == sigma).expect("σ ⊂ τ");
    b[if k >= pos_sigma { k + 1 } else { k }]
}

fn check_walk_args(x: &SimplicialComplex, i: isize, start: &Face) -> Result<usize> {
    if i < 0 || i >= x.dim() {
        return Err(HdxError::LevelOutOfRange {
            level: i,
            min: 0,
            max: x.dim() - 1,
        });
    }
    let idx = x
        .index_of(start)
        .ok_or_else(|| HdxError::FaceNotInComplex(format!("{:?}", start.vertices())))?;
    if start.dim() != i {
        return Err(HdxError::DimensionMismatch(format!(
            "start face has dimension {}, walk level is {i}",
            start.dim()
        )));
    }
    Ok(idx)
}

/// Trajectory of `steps + 1` faces from `start`; stream 0 of `seed`.
pub fn simulate_walk(x: &SimplicialComplex, i: isize, start: &Face, steps: usize, seed: u64) -> Result<Vec<Face>> {
    simulate_walk_stream(x, i, start, steps, seed, 0)
}

pub fn simulate_walk_stream(
    x: &SimplicialComplex,
    i: isize,
    start: &Face,
    steps: usize,
    seed: u64,
    stream: u64,
) -> Result<Vec<Face>> {
    let mut cur = check_walk_args(x, i, start)?;
    let mut rng = stream_rng(seed, stream);
    let mut out = Vec::with_capacity(steps + 1);
    out.push(start.clone());
    for _ in 0..steps {
        cur = sample_step(x, i, cur, &mut rng);
        out.push(x.face(i, cur).clone());
    }
    Ok(out)
}

/// Counts of one-step destinations from `start` over `trials` samples.
pub fn one_step_counts(x: &SimplicialComplex, i: isize, start: &Face, trials: u64, seed: u64) -> Result<Vec<u64>> {
    let s = check_walk_args(x, i, start)?;
    let mut rng = stream_rng(seed, 0);
    let mut counts = vec![0u64; x.num_faces(i)];
    for _ in 0..trials {
        counts[sample_step(x, i, s, &mut rng)] += 1;
    }
    Ok(counts)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MixingRow {
    pub t: usize,
    pub distance: f64,
    pub bound: f64,
    pub margin: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MixingReport {
    pub lambda: f64,
    pub degree_ratio_sqrt: f64,
    pub allowance: f64,
    pub rows: Vec<MixingRow>,
}

/// Checks `‖π_t − π‖₂ ≤ √(d_max/d_min)·λ^t + allowance` for `t = 0..=max_t`
/// with `π_t` computed exactly. `lambda` is `max{|λ₂|, |λ_n|}` of the
/// normalized adjacency matrix.
pub fn verify_mixing_bound(g: &IGraph, pi0: &Distribution, max_t: usize, lambda: f64, allowance: f64) -> Result<MixingReport> {
    let comps = g.components().len();
    if comps > 1 {
        return Err(HdxError::DisconnectedGraph { components: comps });
    }
    let pi = stationary(g);
    let ratio = (g.max_degree() as f64 / g.min_degree() as f64).sqrt();
    let mut cur = pi0.clone();
    let mut rows = Vec::with_capacity(max_t + 1);
    for t in 0..=max_t {
        if t > 0 {
            cur = transition_step(g, &cur)?;
        }
        let distance = cur.l2_distance(&pi);
        let bound = ratio * lambda.powi(t as i32) + allowance;
        if distance > bound {
            return Err(HdxError::violated(
                "appendix mixing bound",
                format!("t={t}: ‖π_t − π‖₂ = {distance:e} > {bound:e}"),
            ));
        }
        rows.push(MixingRow {
            t,
            distance,
            bound,
            margin: bound - distance,
        });
    }
    Ok(MixingReport {
        lambda,
        degree_ratio_sqrt: ratio,
        allowance,
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cochain::{norm, Cochain};
    use crate::rational::rat;
    use proptest::prelude::*;

    fn cx(facets: &[&str]) -> SimplicialComplex {
        SimplicialComplex::build(facets.iter().map(|f| f.chars().map(|c| c.to_string()))).unwrap()
    }

    fn idx(g: &IGraph, name: &str) -> usize {
        g.names().iter().position(|n| n == name).unwrap()
    }

    #[test]
    fn triangle_graph() {
        let g = build_igraph(&cx(&["abc"]), 1).unwrap();
        assert_eq!(g.names(), ["a,b", "a,c", "b,c"]);
        for u in 0..3 {
            assert_eq!(g.weighted_degree(u), 2);
            for v in 0..3 {
                assert_eq!(g.edge_weight(u, v), if u == v { 0 } else { 1 });
            }
        }
    }

    #[test]
    fn two_triangle_graph() {
        let x = cx(&["abc", "acd"]);
        let g = build_igraph(&x, 1).unwrap();
        assert_eq!(g.len(), 5);
        for (v, name) in g.names().iter().enumerate() {
            assert_eq!(g.weighted_degree(v), if name == "a,c" { 4 } else { 2 });
        }
        assert_eq!(
            build_igraph(&x, 2).unwrap_err(),
            HdxError::LevelOutOfRange { level: 2, min: 0, max: 1 }
        );
    }

    #[test]
    fn transition_examples() {
        let t = build_igraph(&cx(&["abc"]), 1).unwrap();
        let next = transition_step(&t, &Distribution::point(3, 0)).unwrap();
        assert_eq!(next.values(), &[rat(0, 1), rat(1, 2), rat(1, 2)]);

        let g = build_igraph(&cx(&["abc", "acd"]), 1).unwrap();
        let ac = idx(&g, "a,c");
        let next = transition_step(&g, &Distribution::point(5, ac)).unwrap();
        for (v, p) in next.values().iter().enumerate() {
            assert_eq!(p, &if v == ac { rat(0, 1) } else { rat(1, 4) });
        }
        let pi = stationary(&g);
        assert_eq!(transition_step(&g, &pi).unwrap(), pi);
        assert!(matches!(
            transition_step(&g, &Distribution::point(3, 0)),
            Err(HdxError::SupportMismatch(_))
        ));
    }

    #[test]
    fn stationary_examples() {
        let x = cx(&["abc", "acd"]);
        let g = build_igraph(&x, 1).unwrap();
        let pi = stationary(&g);
        for (v, p) in pi.values().iter().enumerate() {
            assert_eq!(p, &if g.names()[v] == "a,c" { rat(1, 3) } else { rat(1, 6) });
            assert_eq!(p, &norm(&x, &Cochain::from_indices(1, [v])));
        }
        let t = build_igraph(&cx(&["abc"]), 1).unwrap();
        assert_eq!(stationary(&t), Distribution::uniform(3));
    }

    #[test]
    fn distribution_validation() {
        assert!(Distribution::new(vec![rat(1, 2), rat(1, 3)]).is_err());
        assert!(Distribution::new(vec![rat(3, 2), rat(-1, 2)]).is_err());
        assert!(Distribution::new(vec![rat(1, 2), rat(1, 2)]).is_ok());
    }

    #[test]
    fn simulation_basics() {
        let x = cx(&["abc"]);
        let ab = x.face_from_labels(&["a", "b"]).unwrap();
        assert_eq!(simulate_walk(&x, 1, &ab, 0, 9).unwrap(), vec![ab.clone()]);
        let mut hits = 0;
        for seed in 0..2000 {
            let tr = simulate_walk(&x, 1, &ab, 1, seed).unwrap();
            assert_ne!(tr[1], ab);
            if x.display_face(&tr[1]) == "a,c" {
                hits += 1;
            }
        }
        // 1/2 within 4σ (σ ≈ 11.2).
        assert!((hits as i64 - 1000).abs() < 45, "{hits}");
        assert_eq!(simulate_walk(&x, 1, &ab, 25, 3).unwrap(), simulate_walk(&x, 1, &ab, 25, 3).unwrap());
        assert!(matches!(simulate_walk(&x, 2, &ab, 1, 0), Err(HdxError::LevelOutOfRange { .. })));
        let a = x.face_from_labels(&["a"]).unwrap();
        assert!(matches!(simulate_walk(&x, 1, &a, 1, 0), Err(HdxError::DimensionMismatch(_))));
        let bogus = Face::new(vec![0, 7]).unwrap();
        assert!(matches!(simulate_walk(&x, 1, &bogus, 1, 0), Err(HdxError::FaceNotInComplex(_))));
    }

    #[test]
    fn one_step_frequencies_from_ac() {
        let x = cx(&["abc", "acd"]);
        let ac = x.face_from_labels(&["a", "c"]).unwrap();
        let n = 100_000u64;
        let counts = one_step_counts(&x, 1, &ac, n, 42).unwrap();
        let sd = (n as f64 * 0.25 * 0.75).sqrt();
        for (v, &c) in counts.iter().enumerate() {
            if x.display_face(x.face(1, v)) == "a,c" {
                assert_eq!(c, 0);
            } else {
                assert!((c as f64 - n as f64 / 4.0).abs() < 3.0 * sd, "{c}");
            }
        }
    }

    #[test]
    fn lazy_triangle() {
        let g = build_igraph(&cx(&["abc"]), 0).unwrap();
        let l = lazy_igraph(&g);
        for v in 0..3 {
            assert_eq!(l.self_loop_weight(v), 2);
            assert_eq!(l.transition(v, v), rat(1, 2));
        }
    }

    #[test]
    fn mixing_bound_examples() {
        let g = build_igraph(&cx(&["abc"]), 1).unwrap();
        let rep = verify_mixing_bound(&g, &Distribution::point(3, 0), 1, 0.5, 1e-9).unwrap();
        assert!((rep.rows[1].distance - (1.0f64 / 6.0).sqrt()).abs() < 1e-12);
        assert!((rep.rows[1].bound - 0.5).abs() < 1e-8);
        let pi = stationary(&g);
        let rep = verify_mixing_bound(&g, &pi, 10, 0.5, 0.0).unwrap();
        assert!(rep.rows.iter().all(|r| r.distance == 0.0));
        // A too-small λ is caught.
        assert!(matches!(
            verify_mixing_bound(&g, &Distribution::point(3, 0), 3, 0.1, 0.0),
            Err(HdxError::BoundViolated { .. })
        ));
        let split = IGraph::from_edges(0, vec!["p".into(), "q".into(), "r".into(), "s".into()], &[(0, 1, 1), (2, 3, 1)]);
        assert_eq!(
            verify_mixing_bound(&split, &Distribution::uniform(4), 2, 0.5, 0.0).unwrap_err(),
            HdxError::DisconnectedGraph { components: 2 }
        );
    }

    fn arb_complex() -> impl Strategy<Value = SimplicialComplex> {
        (1usize..=3, 4usize..=7).prop_flat_map(|(d, n)| {
            proptest::collection::vec(proptest::sample::subsequence((0..n).collect::<Vec<_>>(), d + 1), 1..7)
                .prop_map(|fs| {
                    SimplicialComplex::build(fs.into_iter().map(|f| f.into_iter().map(|v| format!("{v}"))))
                        .unwrap()
                })
        })
    }

    proptest! {
        #[test]
        fn walk_structure(x in arb_complex()) {
            let d = x.dim();
            for i in 0..d {
                let g = build_igraph(&x, i).unwrap();
                let pi = stationary(&g);
                for u in 0..g.len() {
                    // deg-vol identity
                    prop_assert_eq!(g.weighted_degree(u), ((d - i) * (i + 1)) as u64 * x.degree(i, u));
                    let row: Rational = (0..g.len()).map(|v| g.transition(u, v)).sum();
                    prop_assert!(row.is_one());
                    for v in 0..g.len() {
                        prop_assert_eq!(&pi.values()[u] * g.transition(u, v), &pi.values()[v] * g.transition(v, u));
                        let shares = x.face(i, u).union(x.face(i, v));
                        let expect = if u != v && x.contains(&shares) && shares.len() == (i + 2) as usize {
                            x.degree_of(&shares).unwrap()
                        } else {
                            0
                        };
                        prop_assert_eq!(g.edge_weight(u, v), expect);
                    }
                    let branches = sampler_branches(&x, i, u);
                    let mut row = vec![Rational::zero(); g.len()];
                    for (v, p) in branches {
                        row[v] = p;
                    }
                    let matrix_row = transition_step(&g, &Distribution::point(g.len(), u)).unwrap();
                    prop_assert_eq!(row.as_slice(), matrix_row.values());
                }
            }
        }
    }
}
