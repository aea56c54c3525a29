//! Complex families for fixtures and experiments, and the partite-regular
//! machinery: coloring detection, the containment constants `k_I^J` and the
//! skeleton mixing check.

use std::collections::{BTreeMap, HashMap};

use itertools::Itertools;
use num_traits::Zero;
use rand::Rng;
use serde::Serialize;

use crate::complex::{Face, SimplicialComplex, MAX_FACET_SIZE};
use crate::error::{HdxError, Result};
use crate::rational::{ratio_u, Rational};
use crate::search::{check_cap, mask_members};
use crate::spectral::graph_spectrum;
use crate::walk::{stream_rng, IGraph};

/// `a`, `b`, … for up to 26 vertices, otherwise `v000`, `v001`, ….
pub fn vertex_names(n: usize) -> Vec<String> {
    if n <= 26 {
        (0..n).map(|k| ((b'a' + k as u8) as char).to_string()).collect()
    } else {
        let width = (n - 1).to_string().len().max(3);
        (0..n).map(|k| format!("v{k:0width$}")).collect()
    }
}

fn check_top_size(d: usize) -> Result<()> {
    if d + 1 > MAX_FACET_SIZE {
        return Err(HdxError::DimensionTooLarge(d));
    }
    Ok(())
}

/// All `(d+1)`-subsets of `n` vertices.
pub fn complete_complex(n: usize, d: usize) -> Result<SimplicialComplex> {
    check_top_size(d)?;
    if n < d + 1 {
        return Err(HdxError::TooFewVertices { needed: d + 1, got: n });
    }
    let names = vertex_names(n);
    SimplicialComplex::build((0..n).combinations(d + 1).map(|f| f.into_iter().map(|v| names[v].clone())))
}

/// Label of vertex `k` (0-based) of part `p`: part letter plus 1-based index.
fn part_label(p: usize, k: usize) -> String {
    let letter = if p < 26 { ((b'a' + p as u8) as char).to_string() } else { format!("p{p}_") };
    format!("{letter}{}", k + 1)
}

/// Maximal faces are all transversals of the given parts.
pub fn complete_multipartite_complex(part_sizes: &[usize]) -> Result<SimplicialComplex> {
    if part_sizes.is_empty() {
        return Err(HdxError::BadParameter("at least one part is needed".into()));
    }
    if let Some(p) = part_sizes.iter().position(|&s| s == 0) {
        return Err(HdxError::BadParameter(format!("part {p} is empty")));
    }
    check_top_size(part_sizes.len() - 1)?;
    let facets = part_sizes
        .iter()
        .enumerate()
        .map(|(p, &s)| (0..s).map(move |k| part_label(p, k)))
        .multi_cartesian_product();
    SimplicialComplex::build(facets)
}

/// Each `d`-subset of `n` vertices kept independently with probability `p`
/// (ChaCha8, stream 0), then the closure of the kept faces. Vertices and
/// lower faces not under a kept face are dropped, so the result is pure.
pub fn random_lm_complex(n: usize, d: usize, p: f64, seed: u64) -> Result<SimplicialComplex> {
    if !(p > 0.0 && p <= 1.0) {
        return Err(HdxError::BadParameter(format!("probability {p} is not in (0, 1]")));
    }
    check_top_size(d)?;
    if n < d + 1 {
        return Err(HdxError::TooFewVertices { needed: d + 1, got: n });
    }
    let names = vertex_names(n);
    let mut rng = stream_rng(seed, 0);
    let kept: Vec<Vec<usize>> = (0..n).combinations(d + 1).filter(|_| rng.random_bool(p)).collect();
    if kept.is_empty() {
        return Err(HdxError::EmptyAfterPruning);
    }
    SimplicialComplex::build(kept.into_iter().map(|f| f.into_iter().map(|v| names[v].clone())))
}

/// `q₀ = (√2·C/(2^{1/2^d} − 1))²`.
pub fn ramanujan_q0(d: u32, c: f64) -> Result<f64> {
    if c.is_nan() || c <= 0.0 {
        return Err(HdxError::NonPositiveC(c));
    }
    let root = 2f64.powf(0.5f64.powi(d as i32)) - 1.0;
    Ok((2f64.sqrt() * c / root).powi(2))
}

/// A partition of the vertices into `d+1` parts with every top face a
/// transversal, and the verified constants `k_I^J`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PartiteStructure {
    /// Vertex indices per part; parts ordered by their smallest vertex.
    pub parts: Vec<Vec<u32>>,
    /// `(I, J) → k_I^J` for all `I ⊊ J ⊆ {0..d}`, part indices sorted.
    pub constants: BTreeMap<(Vec<usize>, Vec<usize>), u64>,
}

impl PartiteStructure {
    pub fn constant(&self, i: &[usize], j: &[usize]) -> Option<u64> {
        self.constants.get(&(i.to_vec(), j.to_vec())).copied()
    }

    pub fn part_sizes(&self) -> Vec<usize> {
        self.parts.iter().map(Vec::len).collect()
    }

    pub fn part_of(&self, v: u32) -> usize {
        self.parts.iter().position(|p| p.contains(&v)).expect("vertex in some part")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum PartiteFailure {
    /// No split into `d+1` parts makes every top face a transversal.
    NotColorable { witness: String },
    /// Two faces of the same part type see different numbers of `J`-faces.
    NotRegular {
        i_parts: Vec<usize>,
        j_parts: Vec<usize>,
        face: String,
        count: u64,
        other_face: String,
        other_count: u64,
    },
}

impl std::fmt::Display for PartiteFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            PartiteFailure::NotColorable { witness } => write!(f, "not colorable: {witness}"),
            PartiteFailure::NotRegular {
                i_parts,
                j_parts,
                face,
                count,
                other_face,
                other_count,
            } => write!(
                f,
                "not regular for I={i_parts:?} J={j_parts:?}: {{{face}}} lies in {count} faces, {{{other_face}}} in {other_count}"
            ),
        }
    }
}

impl From<PartiteFailure> for HdxError {
    fn from(f: PartiteFailure) -> Self {
        HdxError::NotPartiteRegular(f.to_string())
    }
}

/// Backtracking `(d+1)`-coloring in which every top face is rainbow. The
/// first top face fixes the colour names.
fn rainbow_coloring(x: &SimplicialComplex) -> std::result::Result<Vec<u8>, String> {
    let n = x.num_vertices();
    let k = (x.dim() + 1) as usize;
    let facets = x.facets();
    let mut incident: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (t, f) in facets.iter().enumerate() {
        for &v in f.vertices() {
            incident[v as usize].push(t);
        }
    }
    const NONE: u8 = u8::MAX;
    let mut color = vec![NONE; n];
    for (c, &v) in facets[0].vertices().iter().enumerate() {
        color[v as usize] = c as u8;
    }
    let consistent = |color: &[u8], v: usize| {
        incident[v].iter().all(|&t| {
            let mut seen = 0u64;
            facets[t].vertices().iter().all(|&u| {
                let c = color[u as usize];
                c == NONE || {
                    let fresh = seen >> c & 1 == 0;
                    seen |= 1 << c;
                    fresh
                }
            })
        })
    };
    fn solve(color: &mut Vec<u8>, order: &[usize], pos: usize, k: usize, ok: &dyn Fn(&[u8], usize) -> bool) -> bool {
        if pos == order.len() {
            return true;
        }
        let v = order[pos];
        if color[v] != u8::MAX {
            return solve(color, order, pos + 1, k, ok);
        }
        for c in 0..k as u8 {
            color[v] = c;
            if ok(color, v) && solve(color, order, pos + 1, k, ok) {
                return true;
            }
        }
        color[v] = u8::MAX;
        false
    }
    // breadth-first from the first facet so neighbours are coloured early
    let mut order = Vec::with_capacity(n);
    let mut seen = vec![false; n];
    for &v in facets[0].vertices() {
        seen[v as usize] = true;
        order.push(v as usize);
    }
    let mut head = 0;
    while order.len() < n {
        if head == order.len() {
            let v = (0..n).find(|&v| !seen[v]).expect("unvisited vertex");
            seen[v] = true;
            order.push(v);
        }
        let v = order[head];
        head += 1;
        for &t in &incident[v] {
            for &u in facets[t].vertices() {
                if !seen[u as usize] {
                    seen[u as usize] = true;
                    order.push(u as usize);
                }
            }
        }
    }
    if solve(&mut color, &order, 0, k, &consistent) {
        Ok(color)
    } else {
        Err(format!(
            "no split of the {n} vertices into {k} parts makes every top face a transversal"
        ))
    }
}

/// Finds the part structure induced by the top faces and verifies every
/// constant `k_I^J` by counting.
pub fn check_partite_regular(x: &SimplicialComplex) -> std::result::Result<PartiteStructure, PartiteFailure> {
    let d = x.dim();
    if d < 0 {
        return Err(PartiteFailure::NotColorable {
            witness: "complex has no vertices".into(),
        });
    }
    let color = rainbow_coloring(x).map_err(|witness| PartiteFailure::NotColorable { witness })?;
    let k = (d + 1) as usize;
    let mut parts: Vec<Vec<u32>> = vec![Vec::new(); k];
    for (v, &c) in color.iter().enumerate() {
        parts[c as usize].push(v as u32);
    }
    parts.sort_by_key(|p| p[0]);
    let mut part_of = vec![0usize; x.num_vertices()];
    for (p, vs) in parts.iter().enumerate() {
        for &v in vs {
            part_of[v as usize] = p;
        }
    }
    let type_of = |f: &Face| f.vertices().iter().fold(0u32, |m, &v| m | 1 << part_of[v as usize]);
    // counts[(σ, J)] = number of J-type faces containing σ
    let mut counts: HashMap<(Face, u32), u64> = HashMap::new();
    for dim in -1..=d {
        for tau in x.faces(dim) {
            let jt = type_of(tau);
            let vs = tau.vertices();
            for sub in 0..1u64 << vs.len() {
                let sigma = Face::new(mask_members(sub).into_iter().map(|p| vs[p]).collect()).expect("subface");
                *counts.entry((sigma, jt)).or_default() += 1;
            }
        }
    }
    let mut constants = BTreeMap::new();
    let mut first: BTreeMap<(u32, u32), (Face, u64)> = BTreeMap::new();
    for dim in -1..d {
        for sigma in x.faces(dim) {
            let it = type_of(sigma);
            for jt in 0..1u32 << k {
                if jt & it != it || jt == it {
                    continue;
                }
                let c = counts.get(&(sigma.clone(), jt)).copied().unwrap_or(0);
                match first.get(&(it, jt)) {
                    None => {
                        first.insert((it, jt), (sigma.clone(), c));
                    }
                    Some((other, oc)) if *oc != c => {
                        return Err(PartiteFailure::NotRegular {
                            i_parts: mask_members(it as u64),
                            j_parts: mask_members(jt as u64),
                            face: x.display_face(sigma),
                            count: c,
                            other_face: x.display_face(other),
                            other_count: *oc,
                        });
                    }
                    _ => {}
                }
            }
        }
    }
    for ((it, jt), (_, c)) in first {
        constants.insert((mask_members(it as u64), mask_members(jt as u64)), c);
    }
    Ok(PartiteStructure { parts, constants })
}

/// `X_(i,j)`: the unit-weight bipartite graph of edges between parts `i`, `j`.
pub fn part_pair_graph(x: &SimplicialComplex, ps: &PartiteStructure, i: usize, j: usize) -> IGraph {
    let verts: Vec<u32> = ps.parts[i].iter().chain(&ps.parts[j]).copied().collect();
    let pos: HashMap<u32, usize> = verts.iter().enumerate().map(|(k, &v)| (v, k)).collect();
    let edges: Vec<(usize, usize, u64)> = x
        .faces(1)
        .iter()
        .filter_map(|e| {
            let (a, b) = (e.vertices()[0], e.vertices()[1]);
            match (pos.get(&a), pos.get(&b)) {
                (Some(&u), Some(&v)) if ps.part_of(a) != ps.part_of(b) => Some((u, v, 1)),
                _ => None,
            }
        })
        .collect();
    IGraph::from_edges(1, verts.iter().map(|&v| x.label(v).to_string()).collect(), &edges)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PairLambda {
    pub i: usize,
    pub j: usize,
    pub lambda_tilde: f64,
    pub residual: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SkeletonMixingReport {
    pub part_sizes: Vec<usize>,
    pub pairs: Vec<PairLambda>,
    /// `max λ̃₂` over part pairs.
    pub lambda_tilde: f64,
    /// Added to `λ̃₂` on the permissive side of every check.
    pub residual: f64,
    pub bipartite_checks: u64,
    pub skeleton_checks: u64,
    /// Smallest `rhs − lhs` over the skeleton inequality, as a float.
    pub min_skeleton_slack: f64,
}

fn exact(x: f64) -> Rational {
    Rational::from_float(x).expect("finite")
}

/// `lhs ≤ r·(r + l)` with `r = √r2`, exactly; `l ≥ 0`.
fn below_sqrt_bound(lhs: &Rational, r2: &Rational, l: &Rational) -> bool {
    let excess = lhs - r2;
    excess <= Rational::zero() || &excess * &excess <= r2 * l * l
}

/// Checks the bipartite mixing bound on every `X_(i,j)` for all `S ⊆ V_i`,
/// `T ⊆ V_j`, and `‖E(S)‖ ≤ ‖S‖(‖S‖ + λ̃₂)` for all `S ⊆ X(0)`.
pub fn skeleton_mixing_check(x: &SimplicialComplex, cap: usize) -> Result<SkeletonMixingReport> {
    let ps = check_partite_regular(x)?;
    let k = ps.parts.len();
    let n = x.num_vertices();
    check_cap("skeleton mixing", n, cap)?;
    let mut pairs = Vec::new();
    for i in 0..k {
        for j in i + 1..k {
            let g = part_pair_graph(x, &ps, i, j);
            let spec = graph_spectrum(&g)?;
            pairs.push(PairLambda {
                i,
                j,
                lambda_tilde: spec.lambda_2().unwrap_or(0.0),
                residual: spec.residual,
            });
        }
    }
    let lambda_tilde = pairs.iter().map(|p| p.lambda_tilde).fold(0.0, f64::max);
    let residual = pairs.iter().map(|p| p.residual).fold(0.0, f64::max);
    let mut bipartite_checks = 0;
    for p in &pairs {
        let g = part_pair_graph(x, &ps, p.i, p.j);
        let (ni, nj) = (ps.parts[p.i].len(), ps.parts[p.j].len());
        let total_edges = g.volume() / 2;
        let l = exact((p.lambda_tilde + p.residual).max(0.0));
        for sm in 0..1u64 << ni {
            for tm in 0..1u64 << nj {
                let (s, t) = (mask_members(sm), mask_members(tm));
                let e: u64 = s
                    .iter()
                    .map(|&u| g.neighbors(u).iter().filter(|(v, _)| t.contains(&(v - ni))).map(|(_, w)| w).sum::<u64>())
                    .sum();
                let lhs = ratio_u(e as u128, total_edges as u128);
                let r2 = ratio_u((s.len() * t.len()) as u128, (ni * nj) as u128);
                bipartite_checks += 1;
                if !below_sqrt_bound(&lhs, &r2, &l) {
                    return Err(HdxError::violated(
                        "bipartite mixing",
                        format!("parts ({}, {}), S={s:?}, T={t:?}: |E(S,T)|/|E| = {lhs}", p.i, p.j),
                    ));
                }
            }
        }
    }
    let vdeg = x.degrees(0);
    let vtotal = x.total_degree(0) as u128;
    let etotal = x.total_degree(1) as u128;
    let l = exact((lambda_tilde + residual).max(0.0));
    let mut min_slack = f64::INFINITY;
    let mut skeleton_checks = 0;
    for m in 0..1u64 << n {
        let b: u64 = mask_members(m).iter().map(|&v| vdeg[v]).sum();
        let a: u64 = (0..x.num_faces(1))
            .filter(|&e| x.face(1, e).vertices().iter().all(|&v| m >> v & 1 == 1))
            .map(|e| x.degree(1, e))
            .sum();
        let s = ratio_u(b as u128, vtotal);
        let lhs = ratio_u(a as u128, etotal);
        let rhs = &s * (&s + &l);
        skeleton_checks += 1;
        if lhs > rhs {
            return Err(HdxError::violated(
                "skeleton mixing",
                format!("S={:?}: ‖E(S)‖ = {lhs} > {rhs}", mask_members(m)),
            ));
        }
        min_slack = min_slack.min(crate::rational::to_f64(&(rhs - lhs)));
    }
    Ok(SkeletonMixingReport {
        part_sizes: ps.part_sizes(),
        pairs,
        lambda_tilde,
        residual,
        bipartite_checks,
        skeleton_checks,
        min_skeleton_slack: min_slack,
    })
}
