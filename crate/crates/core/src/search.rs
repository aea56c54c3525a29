//! Exhaustive subset searches on small weighted graphs: conductance,
//! bipartiteness ratio and the per-link skeleton expansion value.
//!
//! Every search walks all `2^n` vertex subsets in Gray-code order, split into
//! independent chunks over the high bits that run on the rayon pool. Each
//! chunk keeps an incrementally updated state, so a step costs one vertex's
//! neighbourhood. Ties are broken by the lexicographically first vertex set,
//! which makes the reduction independent of scheduling.

use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;

use crate::error::{HdxError, Result};
use crate::rational::{ratio_u, Rational};
use crate::walk::{stream_rng, IGraph};

/// Default cap on vertices for `2^n` searches.
pub const DEFAULT_SUBSET_CAP: usize = 22;

/// Hard limit imposed by the `u64` masks.
const MASK_BITS: usize = 63;

/// `true` if the sorted index list of `a` precedes that of `b`.
pub(crate) fn lex_less(mut a: u64, mut b: u64) -> bool {
    loop {
        if a == b {
            return false;
        }
        if a == 0 {
            return true;
        }
        if b == 0 {
            return false;
        }
        let (la, lb) = (a.trailing_zeros(), b.trailing_zeros());
        if la != lb {
            return la < lb;
        }
        a &= a - 1;
        b &= b - 1;
    }
}

pub(crate) fn mask_members(mask: u64) -> Vec<usize> {
    (0..64).filter(|&v| mask >> v & 1 == 1).collect()
}

pub(crate) fn check_cap(what: &str, size: usize, cap: usize) -> Result<()> {
    if size > cap.min(MASK_BITS) {
        return Err(HdxError::TooLargeForExact {
            what: what.to_string(),
            size,
            cap: cap.min(MASK_BITS),
        });
    }
    Ok(())
}

/// Visits every subset of `0..n`. `init(mask)` builds a state from scratch,
/// `toggle(state, v, added, new_mask)` updates it when `v` flips, `visit`
/// proposes a candidate and `better(a, b)` must be a strict total order.
pub(crate) fn gray_search<S, B, I, T, V, C>(n: usize, init: I, toggle: T, visit: V, better: C) -> Option<B>
where
    B: Send,
    I: Fn(u64) -> S + Sync,
    T: Fn(&mut S, usize, bool, u64) + Sync,
    V: Fn(&S, u64) -> Option<B> + Sync,
    C: Fn(&B, &B) -> bool + Sync,
{
    let low = n.min(12);
    let high = n - low;
    let pick = |a: Option<B>, b: Option<B>| match (a, b) {
        (Some(a), Some(b)) => Some(if better(&b, &a) { b } else { a }),
        (a, None) => a,
        (None, b) => b,
    };
    (0..1u64 << high)
        .into_par_iter()
        .map(|hi| {
            let mut mask = hi << low;
            let mut state = init(mask);
            let mut best = visit(&state, mask);
            for step in 1..1u64 << low {
                let v = step.trailing_zeros() as usize;
                mask ^= 1 << v;
                toggle(&mut state, v, mask >> v & 1 == 1, mask);
                best = pick(best, visit(&state, mask));
            }
            best
        })
        .reduce(|| None, pick)
}

fn weight_into(g: &IGraph, v: usize, mask: u64) -> u64 {
    g.neighbors(v)
        .iter()
        .filter(|(u, _)| mask >> u & 1 == 1)
        .map(|(_, w)| w)
        .sum()
}

/// A vertex set with its cut weight and volume.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CutWitness {
    pub cut: u64,
    pub volume: u64,
    pub set: Vec<usize>,
}

impl CutWitness {
    pub fn ratio(&self) -> Rational {
        ratio_u(self.cut as u128, self.volume as u128)
    }
}

/// Cut weight `|E(S, S̄)|` (self-loops never cross).
pub fn cut_weight(g: &IGraph, set: &[usize]) -> u64 {
    let mut inside = vec![false; g.len()];
    set.iter().for_each(|&v| inside[v] = true);
    set.iter()
        .flat_map(|&v| g.neighbors(v).iter().filter(|(u, _)| !inside[*u]).map(|(_, w)| *w))
        .sum()
}

pub fn volume(g: &IGraph, set: &[usize]) -> u64 {
    set.iter().map(|&v| g.degree(v)).sum()
}

/// Exact conductance `min |E(S,S̄)|/vol(S)` over nonempty `S` with
/// `vol(S) ≤ vol(V)/2`.
pub fn min_conductance(g: &IGraph, cap: usize) -> Result<CutWitness> {
    let n = g.len();
    check_cap("conductance", n, cap)?;
    let total = g.volume();
    let init = |mask: u64| {
        let set = mask_members(mask);
        (cut_weight(g, &set), volume(g, &set))
    };
    let toggle = |s: &mut (u64, u64), v: usize, added: bool, mask: u64| {
        let into = weight_into(g, v, mask & !(1 << v));
        if added {
            s.0 = s.0 + g.weighted_degree(v) - 2 * into;
            s.1 += g.degree(v);
        } else {
            s.0 = s.0 + 2 * into - g.weighted_degree(v);
            s.1 -= g.degree(v);
        }
    };
    let visit = |s: &(u64, u64), mask: u64| (mask != 0 && 2 * s.1 <= total).then_some((s.0, s.1, mask));
    let better = |a: &(u64, u64, u64), b: &(u64, u64, u64)| {
        let (l, r) = (a.0 as u128 * b.1 as u128, b.0 as u128 * a.1 as u128);
        l < r || (l == r && lex_less(a.2, b.2))
    };
    let (cut, volume, mask) = gray_search(n, init, toggle, visit, better)
        .ok_or_else(|| HdxError::BadParameter("no vertex set within half the volume".into()))?;
    Ok(CutWitness {
        cut,
        volume,
        set: mask_members(mask),
    })
}

/// A three-way split `(S₁, S₂, rest)` with the bipartiteness numerator
/// `|E(S,S̄)| + 2(|E(S₁)| + |E(S₂)|)` and `vol(S)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BipartiteWitness {
    pub numerator: u64,
    pub volume: u64,
    pub s1: Vec<usize>,
    pub s2: Vec<usize>,
}

impl BipartiteWitness {
    pub fn ratio(&self) -> Rational {
        ratio_u(self.numerator as u128, self.volume as u128)
    }
}

/// The numerator straight from the definition; a self-loop at a vertex of
/// `S₁` or `S₂` is an edge inside that side.
pub fn bipartiteness_numerator(g: &IGraph, s1: &[usize], s2: &[usize]) -> u64 {
    let mut side = vec![0u8; g.len()];
    s1.iter().for_each(|&v| side[v] = 1);
    s2.iter().for_each(|&v| side[v] = 2);
    let mut cut = 0;
    let mut inner = 0;
    for u in 0..g.len() {
        if side[u] == 0 {
            continue;
        }
        inner += 2 * g.self_loop_weight(u);
        for &(v, w) in g.neighbors(u) {
            match side[v] {
                0 => cut += w,
                s if s == side[u] => inner += w,
                _ => {}
            }
        }
    }
    cut + inner
}

/// Exact bipartiteness ratio by Dinkelbach iteration. Writing the ratio as
/// `1 − R(S₁,S₂)` with `R = (2w(S₁,S₂) − loops(S))/vol(S)`, each round
/// maximizes `2w(S₁,S₂) − loops(S) − λ·vol(S)` over all `S₁`, choosing `S₂`
/// vertex by vertex, and moves `λ` to the ratio of the maximizer.
pub fn min_bipartiteness(g: &IGraph, cap: usize) -> Result<BipartiteWitness> {
    let n = g.len();
    check_cap("bipartiteness ratio", n, cap)?;
    if n == 0 {
        return Err(HdxError::BadParameter("empty graph".into()));
    }
    let deg: Vec<i128> = (0..n).map(|v| g.degree(v) as i128).collect();
    let lp: Vec<i128> = (0..n).map(|v| g.self_loop_weight(v) as i128).collect();
    let eval = |s1: u64, s2: u64| -> (i128, i128) {
        let mut num = 0i128;
        let mut vol = 0i128;
        for v in 0..n {
            if s1 >> v & 1 == 1 {
                num -= lp[v];
                vol += deg[v];
            } else if s2 >> v & 1 == 1 {
                num += 2 * weight_into(g, v, s1) as i128 - lp[v];
                vol += deg[v];
            }
        }
        (num, vol)
    };
    // start from the best singleton on side one
    let mut best = (1u64, 0u64);
    let (mut p, mut q) = eval(1, 0);
    for v in 1..n {
        let (a, b) = eval(1 << v, 0);
        if a * q > p * b {
            (p, q) = (a, b);
            best = (1 << v, 0);
        }
    }
    loop {
        let g_num = |s1: u64, into: &[i128]| -> (i128, u64) {
            let mut val = 0i128;
            let mut s2 = 0u64;
            for v in 0..n {
                if s1 >> v & 1 == 1 {
                    val -= q * lp[v] + p * deg[v];
                } else {
                    let gain = q * (2 * into[v] - lp[v]) - p * deg[v];
                    if gain > 0 {
                        val += gain;
                        s2 |= 1 << v;
                    }
                }
            }
            (val, s2)
        };
        let init = |mask: u64| -> Vec<i128> { (0..n).map(|v| weight_into(g, v, mask) as i128).collect() };
        let toggle = |into: &mut Vec<i128>, v: usize, added: bool, _| {
            for &(u, w) in g.neighbors(v) {
                if added {
                    into[u] += w as i128;
                } else {
                    into[u] -= w as i128;
                }
            }
        };
        let visit = |into: &Vec<i128>, mask: u64| {
            let (val, s2) = g_num(mask, into);
            (val > 0).then_some((val, mask, s2))
        };
        let better = |a: &(i128, u64, u64), b: &(i128, u64, u64)| a.0 > b.0 || (a.0 == b.0 && lex_less(a.1, b.1));
        match gray_search(n, init, toggle, visit, better) {
            None => break,
            Some((_, s1, s2)) => {
                let (a, b) = eval(s1, s2);
                debug_assert!(a * q > p * b);
                let gcd = num_integer::Integer::gcd(&a, &b).max(1);
                (p, q) = (a / gcd, b / gcd);
                best = (s1, s2);
            }
        }
    }
    let (s1, s2) = (mask_members(best.0), mask_members(best.1));
    Ok(BipartiteWitness {
        numerator: bipartiteness_numerator(g, &s1, &s2),
        volume: volume(g, &s1) + volume(g, &s2),
        s1,
        s2,
    })
}

/// The vertex set maximizing `‖E(S)‖/‖S‖ − ‖S‖` in a level-0 graph, where
/// norms are edge-weight and volume fractions. `inside` is `2·w(E(S))`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SkeletonWitness {
    pub inside: u64,
    pub volume: u64,
    pub total: u64,
    pub set: Vec<usize>,
}

impl SkeletonWitness {
    /// `inside/volume − volume/total`.
    pub fn value(&self) -> Rational {
        ratio_u(self.inside as u128, self.volume as u128) - ratio_u(self.volume as u128, self.total as u128)
    }
}

/// Maximizes `‖E(S)‖/‖S‖ − ‖S‖` over nonempty `S`. With total edge weight
/// `vol(V)/2`, `‖E(S)‖/‖S‖ = 2w(E(S))/vol(S)`.
pub fn max_skeleton_value(g: &IGraph, cap: usize) -> Result<SkeletonWitness> {
    let n = g.len();
    check_cap("link skeleton search", n, cap)?;
    if (0..n).any(|v| g.self_loop_weight(v) > 0) {
        return Err(HdxError::BadParameter("skeleton search needs a graph without self-loops".into()));
    }
    if let Some(v) = (0..n).find(|&v| g.degree(v) == 0) {
        return Err(HdxError::IsolatedVertex(v));
    }
    let total = g.volume();
    let init = |mask: u64| {
        let set = mask_members(mask);
        let vol = volume(g, &set);
        (vol - cut_weight(g, &set), vol)
    };
    let toggle = |s: &mut (u64, u64), v: usize, added: bool, mask: u64| {
        let into = 2 * weight_into(g, v, mask & !(1 << v));
        if added {
            s.0 += into;
            s.1 += g.degree(v);
        } else {
            s.0 -= into;
            s.1 -= g.degree(v);
        }
    };
    // value = (inside·B − b²)/(b·B); compare with b·B denominators.
    let visit = |s: &(u64, u64), mask: u64| {
        (mask != 0).then(|| {
            let num = s.0 as i128 * total as i128 - (s.1 as i128).pow(2);
            (num, s.1 as i128, mask, s.0)
        })
    };
    let better = |a: &(i128, i128, u64, u64), b: &(i128, i128, u64, u64)| {
        let (l, r) = (a.0 * b.1, b.0 * a.1);
        l > r || (l == r && lex_less(a.2, b.2))
    };
    let (_, vol, mask, inside) = gray_search(n, init, toggle, visit, better).expect("nonempty graph");
    Ok(SkeletonWitness {
        inside,
        volume: vol as u64,
        total,
        set: mask_members(mask),
    })
}

/// Single-vertex moves from random starts; returns the best conductance
/// found. An upper bound on the true value, not a certificate.
pub fn local_search_conductance(g: &IGraph, restarts: usize, seed: u64) -> Result<CutWitness> {
    let n = g.len();
    let total = g.volume();
    let score = |inside: &[bool]| -> Option<(u64, u64)> {
        let set: Vec<usize> = (0..n).filter(|&v| inside[v]).collect();
        let vol = volume(g, &set);
        (!set.is_empty() && 2 * vol <= total).then(|| (cut_weight(g, &set), vol))
    };
    let less = |a: (u64, u64), b: (u64, u64)| (a.0 as u128 * b.1 as u128) < (b.0 as u128 * a.1 as u128);
    let mut best: Option<((u64, u64), Vec<bool>)> = None;
    for r in 0..restarts.max(1) {
        let mut rng = stream_rng(seed, r as u64);
        let mut inside = vec![false; n];
        inside[rng.random_range(0..n)] = true;
        let mut cur = score(&inside);
        let mut order: Vec<usize> = (0..n).collect();
        loop {
            order.shuffle(&mut rng);
            let mut improved = false;
            for &v in &order {
                inside[v] = !inside[v];
                match (score(&inside), cur) {
                    (Some(s), Some(c)) if less(s, c) => {
                        cur = Some(s);
                        improved = true;
                    }
                    (Some(s), None) => {
                        cur = Some(s);
                        improved = true;
                    }
                    _ => inside[v] = !inside[v],
                }
            }
            if !improved {
                break;
            }
        }
        if let Some(c) = cur {
            if best.as_ref().is_none_or(|(b, _)| less(c, *b)) {
                best = Some((c, inside));
            }
        }
    }
    let ((cut, volume), inside) = best.ok_or_else(|| HdxError::BadParameter("no vertex set within half the volume".into()))?;
    Ok(CutWitness {
        cut,
        volume,
        set: (0..n).filter(|&v| inside[v]).collect(),
    })
}

/// Local search over three-way splits; an upper bound on the bipartiteness
/// ratio.
pub fn local_search_bipartiteness(g: &IGraph, restarts: usize, seed: u64) -> Result<BipartiteWitness> {
    let n = g.len();
    if n == 0 {
        return Err(HdxError::BadParameter("empty graph".into()));
    }
    let score = |side: &[u8]| -> Option<(u64, u64)> {
        let s1: Vec<usize> = (0..n).filter(|&v| side[v] == 1).collect();
        let s2: Vec<usize> = (0..n).filter(|&v| side[v] == 2).collect();
        let vol = volume(g, &s1) + volume(g, &s2);
        (vol > 0).then(|| (bipartiteness_numerator(g, &s1, &s2), vol))
    };
    let less = |a: (u64, u64), b: (u64, u64)| (a.0 as u128 * b.1 as u128) < (b.0 as u128 * a.1 as u128);
    let mut best: Option<((u64, u64), Vec<u8>)> = None;
    for r in 0..restarts.max(1) {
        let mut rng = stream_rng(seed, r as u64);
        let mut side: Vec<u8> = (0..n).map(|_| rng.random_range(0..3u8)).collect();
        side[rng.random_range(0..n)] = 1;
        let mut cur = score(&side).expect("nonempty side");
        loop {
            let mut improved = false;
            for v in 0..n {
                for s in 0..3u8 {
                    if s == side[v] {
                        continue;
                    }
                    let prev = side[v];
                    side[v] = s;
                    match score(&side) {
                        Some(c) if less(c, cur) => {
                            cur = c;
                            improved = true;
                        }
                        _ => side[v] = prev,
                    }
                }
            }
            if !improved {
                break;
            }
        }
        if best.as_ref().is_none_or(|(b, _)| less(cur, *b)) {
            best = Some((cur, side));
        }
    }
    let ((numerator, volume), side) = best.expect("at least one restart");
    Ok(BipartiteWitness {
        numerator,
        volume,
        s1: (0..n).filter(|&v| side[v] == 1).collect(),
        s2: (0..n).filter(|&v| side[v] == 2).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::SimplicialComplex;
    use crate::rational::rat;
    use crate::walk::{build_igraph, lazy_igraph};
    use proptest::prelude::*;

    fn cx(facets: &[&str]) -> SimplicialComplex {
        SimplicialComplex::build(facets.iter().map(|f| f.chars().map(|c| c.to_string()))).unwrap()
    }

    /// All `3^n` side assignments.
    fn brute_bipartiteness(g: &IGraph) -> Rational {
        let n = g.len();
        let mut best: Option<Rational> = None;
        for code in 0..3usize.pow(n as u32) {
            let mut c = code;
            let (mut s1, mut s2) = (vec![], vec![]);
            for v in 0..n {
                match c % 3 {
                    1 => s1.push(v),
                    2 => s2.push(v),
                    _ => {}
                }
                c /= 3;
            }
            let vol = volume(g, &s1) + volume(g, &s2);
            if vol == 0 {
                continue;
            }
            let r = ratio_u(bipartiteness_numerator(g, &s1, &s2) as u128, vol as u128);
            if best.as_ref().is_none_or(|b| r < *b) {
                best = Some(r);
            }
        }
        best.unwrap()
    }

    fn brute_conductance(g: &IGraph) -> Rational {
        let n = g.len();
        let total = g.volume();
        (1..1u64 << n)
            .filter_map(|m| {
                let s = mask_members(m);
                let vol = volume(g, &s);
                (2 * vol <= total).then(|| ratio_u(cut_weight(g, &s) as u128, vol as u128))
            })
            .min()
            .unwrap()
    }

    fn brute_skeleton(g: &IGraph) -> Rational {
        let n = g.len();
        let total = g.volume();
        (1..1u64 << n)
            .map(|m| {
                let s = mask_members(m);
                let vol = volume(g, &s);
                let inside = vol - cut_weight(g, &s);
                ratio_u(inside as u128, vol as u128) - ratio_u(vol as u128, total as u128)
            })
            .max()
            .unwrap()
    }

    #[test]
    fn lex_order() {
        assert!(lex_less(0b011, 0b101)); // [0,1] < [0,2]
        assert!(lex_less(0b001, 0b011)); // prefix
        assert!(!lex_less(0b110, 0b011));
        assert!(lex_less(0, 1));
        assert!(!lex_less(5, 5));
    }

    #[test]
    fn triangle_values() {
        let g = build_igraph(&cx(&["abc"]), 1).unwrap();
        let c = min_conductance(&g, 22).unwrap();
        assert_eq!(c.ratio(), rat(1, 1));
        assert_eq!(c.set, vec![0]);
        let b = min_bipartiteness(&g, 22).unwrap();
        assert_eq!(b.ratio(), rat(1, 3));
        assert_eq!(b.s1.len() + b.s2.len(), 3);
        let s = max_skeleton_value(&build_igraph(&cx(&["abc"]), 0).unwrap(), 22).unwrap();
        assert_eq!(s.value(), rat(0, 1));
        assert_eq!(s.set, vec![0, 1, 2]);
    }

    #[test]
    fn bipartite_and_disconnected() {
        let path = IGraph::from_edges(0, vec!["a".into(), "b".into()], &[(0, 1, 3)]);
        let b = min_bipartiteness(&path, 22).unwrap();
        assert_eq!(b.ratio(), rat(0, 1));
        let split = IGraph::from_edges(0, (0..4).map(|v| v.to_string()).collect(), &[(0, 1, 1), (2, 3, 1)]);
        let c = min_conductance(&split, 22).unwrap();
        assert_eq!(c.ratio(), rat(0, 1));
        assert_eq!(c.set, vec![0, 1]);
    }

    #[test]
    fn lazy_triangle_bipartiteness() {
        // loops make every vertex "inside" its side: ratio bounded away from 0
        let g = lazy_igraph(&build_igraph(&cx(&["abc"]), 0).unwrap());
        assert_eq!(min_bipartiteness(&g, 22).unwrap().ratio(), brute_bipartiteness(&g));
    }

    #[test]
    fn two_triangles_conductance() {
        let g = build_igraph(&cx(&["abc", "acd"]), 1).unwrap();
        assert_eq!(min_conductance(&g, 22).unwrap().ratio(), brute_conductance(&g));
        assert_eq!(min_conductance(&g, 22).unwrap().ratio(), rat(1, 2));
    }

    #[test]
    fn caps() {
        let g = build_igraph(&cx(&["abc", "acd"]), 1).unwrap();
        assert_eq!(
            min_conductance(&g, 4).unwrap_err(),
            HdxError::TooLargeForExact {
                what: "conductance".into(),
                size: 5,
                cap: 4
            }
        );
        assert!(min_bipartiteness(&g, 4).is_err());
        assert!(max_skeleton_value(&g, 4).is_err());
    }

    #[test]
    fn local_search_is_an_upper_bound() {
        let g = build_igraph(&cx(&["abc", "acd", "ade", "aef"]), 1).unwrap();
        let exact_c = min_conductance(&g, 22).unwrap().ratio();
        let exact_b = min_bipartiteness(&g, 22).unwrap().ratio();
        let lc = local_search_conductance(&g, 8, 3).unwrap();
        let lb = local_search_bipartiteness(&g, 8, 3).unwrap();
        assert!(lc.ratio() >= exact_c);
        assert!(lb.ratio() >= exact_b);
        assert_eq!(lc.cut, cut_weight(&g, &lc.set));
        assert_eq!(lb.numerator, bipartiteness_numerator(&g, &lb.s1, &lb.s2));
    }

    #[test]
    fn chunked_enumeration_matches_brute_force() {
        // 15 vertices: more than one Gray-code chunk
        let n = 15;
        let edges: Vec<_> = (0..n).flat_map(|v| [(v, (v + 1) % n, 1 + v as u64 % 3), (v, (v + 4) % n, 1)]).collect();
        let g = IGraph::from_edges(0, (0..n).map(|v| v.to_string()).collect(), &edges);
        assert_eq!(min_conductance(&g, 22).unwrap().ratio(), brute_conductance(&g));
        assert_eq!(max_skeleton_value(&g, 22).unwrap().value(), brute_skeleton(&g));
    }

    fn arb_graph() -> impl Strategy<Value = IGraph> {
        (2usize..=7).prop_flat_map(|n| {
            (
                proptest::collection::vec(0u64..4, n * (n - 1) / 2),
                proptest::collection::vec(0u64..3, n),
            )
                .prop_map(move |(ws, loops)| {
                    let mut edges = vec![];
                    let mut k = 0;
                    for u in 0..n {
                        for v in u + 1..n {
                            if ws[k] > 0 {
                                edges.push((u, v, ws[k]));
                            }
                            k += 1;
                        }
                    }
                    for (v, &l) in loops.iter().enumerate() {
                        edges.push((v, v, l + 1)); // keep every degree positive
                    }
                    IGraph::from_edges(0, (0..n).map(|v| v.to_string()).collect(), &edges)
                })
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn searches_match_brute_force(g in arb_graph()) {
            let b = min_bipartiteness(&g, 22).unwrap();
            prop_assert_eq!(b.ratio(), brute_bipartiteness(&g));
            prop_assert_eq!(b.numerator, bipartiteness_numerator(&g, &b.s1, &b.s2));
            let c = min_conductance(&g, 22).unwrap();
            prop_assert_eq!(c.ratio(), brute_conductance(&g));
            prop_assert_eq!(c.cut, cut_weight(&g, &c.set));
            let loop_free: Vec<_> = (0..g.len())
                .flat_map(|u| g.neighbors(u).iter().filter(move |(v, _)| *v > u).map(move |&(v, w)| (u, v, w)))
                .collect();
            let h = IGraph::from_edges(0, g.names().to_vec(), &loop_free);
            if (0..h.len()).all(|v| h.degree(v) > 0) {
                let s = max_skeleton_value(&h, 22).unwrap();
                prop_assert_eq!(s.value(), brute_skeleton(&h));
            }
        }

        #[test]
        fn gray_search_is_schedule_independent(g in arb_graph()) {
            let a = min_conductance(&g, 22).unwrap();
            let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
            let b = pool.install(|| min_conductance(&g, 22)).unwrap();
            prop_assert_eq!(a, b);
        }
    }
}
