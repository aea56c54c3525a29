//! Exact expansion constants of a complex, the closed-form theorem bounds,
//! and checks that replay the lemmas and the proof inequalities on concrete
//! instances.

use std::f64::consts::SQRT_2;

use num_traits::Zero;
use rand::seq::index::sample;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::cascade::{container, fat_cascade, full_from_cascade};
use crate::cochain::{chain_prob_sets, norm, Cochain};
use crate::complex::{Face, SimplicialComplex};
use crate::error::{HdxError, Result};
use crate::generators::skeleton_mixing_check;
use crate::rational::{format_pq, from_int, pow, rat, ratio_u, round_sig12, to_f64, Pq, Rational};
use crate::search::{
    check_cap, gray_search, lex_less, local_search_bipartiteness, local_search_conductance, mask_members,
    max_skeleton_value, min_bipartiteness, min_conductance, DEFAULT_SUBSET_CAP,
};
use crate::spectral::{cheeger_check, graph_spectrum, trevisan_check};
use crate::walk::{build_igraph, lazy_igraph, stream_rng, IGraph};

/// Default cap on `|X(i)|` for exact colorful expansion.
pub const DEFAULT_COCHAIN_CAP: usize = 20;

/// Exact-mode size limits.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExactCaps {
    /// Vertices for `2^n` graph and link searches.
    pub subset: usize,
    /// Faces per level for the colorful expansion search.
    pub cochain: usize,
}

impl Default for ExactCaps {
    fn default() -> Self {
        ExactCaps {
            subset: DEFAULT_SUBSET_CAP,
            cochain: DEFAULT_COCHAIN_CAP,
        }
    }
}

/// How a value was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Flag {
    /// Exhaustive search; the value is certified.
    Exact,
    /// Random trials; an estimate from one side only.
    Sampled,
    /// Local search; an upper estimate of a minimum.
    Heuristic,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", tag = "kind")]
pub enum Mode {
    Exact,
    /// Fall back to sampling or local search where exact search is over cap.
    Sampled { trials: u64, seed: u64 },
}

fn names_of(x: &SimplicialComplex, vs: impl IntoIterator<Item = u32>) -> Vec<String> {
    vs.into_iter().map(|v| x.label(v).to_string()).collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct AlphaValue {
    /// Floored at 0.
    pub value: Rational,
    pub flag: Flag,
    /// The link face and vertex set attaining the maximum, if any link has
    /// edges.
    pub witness: Option<(Face, Vec<u32>)>,
}

/// Smallest `α ≥ 0` such that every link `X_σ` of dimension ≥ 1 (σ = ∅
/// included) satisfies `‖E(S)‖ ≤ ‖S‖(‖S‖ + α)` for all vertex sets `S`.
pub fn skeleton_alpha(x: &SimplicialComplex, mode: Mode, caps: ExactCaps) -> Result<AlphaValue> {
    let mut best: Option<(Rational, Face, Vec<u32>)> = None;
    let mut flag = Flag::Exact;
    for j in -1..=x.dim() - 2 {
        for sigma in x.faces(j) {
            let link = x.link(sigma)?;
            let g = build_igraph(&link, 0)?;
            let (value, set) = match max_skeleton_value(&g, caps.subset) {
                Ok(w) => (w.value(), w.set),
                Err(HdxError::TooLargeForExact { .. }) if matches!(mode, Mode::Sampled { .. }) => {
                    flag = Flag::Sampled;
                    let Mode::Sampled { trials, seed } = mode else { unreachable!() };
                    sampled_skeleton_value(&g, trials, seed)
                }
                Err(e) => return Err(e),
            };
            let in_x: Vec<u32> = set
                .iter()
                .map(|&v| x.vertex_index(link.label(v as u32)).expect("link vertex in X"))
                .collect();
            if best.as_ref().is_none_or(|(b, _, _)| value > *b) {
                best = Some((value, sigma.clone(), in_x));
            }
        }
    }
    Ok(match best {
        None => AlphaValue {
            value: Rational::zero(),
            flag,
            witness: None,
        },
        Some((v, sigma, set)) => AlphaValue {
            value: v.max(Rational::zero()),
            flag,
            witness: Some((sigma, set)),
        },
    })
}

fn sampled_skeleton_value(g: &IGraph, trials: u64, seed: u64) -> (Rational, Vec<usize>) {
    let n = g.len();
    let mut rng = stream_rng(seed, n as u64);
    let total = g.volume() as u128;
    let mut best: Option<(Rational, Vec<usize>)> = None;
    for _ in 0..trials.max(1) {
        let k = rng.random_range(1..=n);
        let mut set = sample(&mut rng, n, k).into_vec();
        set.sort_unstable();
        let vol = crate::search::volume(g, &set) as u128;
        let inside = vol - crate::search::cut_weight(g, &set) as u128;
        let v = ratio_u(inside, vol) - ratio_u(vol, total);
        if best.as_ref().is_none_or(|(b, _)| v > *b) {
            best = Some((v, set));
        }
    }
    best.expect("at least one trial")
}

#[derive(Clone, Debug, PartialEq)]
pub struct EpsilonValue {
    pub value: Rational,
    pub flag: Flag,
    /// Level and face indices of the minimizing cochain.
    pub level: isize,
    pub witness: Vec<usize>,
}

/// `min ‖ψ(W)‖/‖W‖` over levels `i < d` and nonempty `W ⊆ X(i)` with
/// `‖W‖ ≤ 1/2`. Sampled mode minimizes over random cochains instead and so
/// can only overestimate.
pub fn colorful_epsilon(x: &SimplicialComplex, mode: Mode, caps: ExactCaps) -> Result<EpsilonValue> {
    let d = x.dim();
    if d < 1 {
        return Err(HdxError::DimensionTooSmall(d));
    }
    // (num, den, level, mask or set)
    let mut best: Option<(u128, u128, isize, Vec<usize>)> = None;
    let mut flag = Flag::Exact;
    for i in 0..d {
        let n = x.num_faces(i);
        let found = match check_cap(&format!("colorful expansion at level {i}"), n, caps.cochain) {
            Ok(()) => exact_level_epsilon(x, i).map(|(a, b, m)| (a, b, mask_members(m))),
            Err(e) => match mode {
                Mode::Exact => return Err(e),
                Mode::Sampled { trials, seed } => {
                    flag = Flag::Sampled;
                    sampled_level_epsilon(x, i, trials, seed)
                }
            },
        };
        if let Some((a, b, set)) = found {
            let replace = match &best {
                None => true,
                Some((ba, bb, _, _)) => a * bb < *ba * b,
            };
            if replace {
                best = Some((a, b, i, set));
            }
        }
    }
    let (a, b, level, witness) = best.ok_or_else(|| HdxError::InvariantViolated("no cochain of norm at most 1/2".into()))?;
    Ok(EpsilonValue {
        value: ratio_u(a, b),
        flag,
        level,
        witness,
    })
}

/// `‖ψ(W)‖/‖W‖ = ψdeg·T_i / (T_{i+1}·Wdeg)` as a numerator/denominator pair.
fn expansion_ratio(x: &SimplicialComplex, i: isize, psi: u64, wdeg: u64) -> (u128, u128) {
    (
        psi as u128 * x.total_degree(i) as u128,
        x.total_degree(i + 1) as u128 * wdeg as u128,
    )
}

fn exact_level_epsilon(x: &SimplicialComplex, i: isize) -> Option<(u128, u128, u64)> {
    let n = x.num_faces(i);
    let full = (i + 2) as u8;
    let total = x.total_degree(i);
    let upper = x.num_faces(i + 1);
    struct St {
        wdeg: u64,
        psi: u64,
        cnt: Vec<u8>,
    }
    let init = |mask: u64| {
        let mut cnt = vec![0u8; upper];
        for t in 0..upper {
            cnt[t] = x.boundary(i + 1, t).iter().filter(|&&s| mask >> s & 1 == 1).count() as u8;
        }
        let psi = (0..upper).filter(|&t| cnt[t] > 0 && cnt[t] < full).map(|t| x.degree(i + 1, t)).sum();
        let wdeg = mask_members(mask).iter().map(|&s| x.degree(i, s)).sum();
        St { wdeg, psi, cnt }
    };
    let toggle = |st: &mut St, f: usize, added: bool, _| {
        if added {
            st.wdeg += x.degree(i, f);
        } else {
            st.wdeg -= x.degree(i, f);
        }
        for &t in x.cofaces(i, f) {
            let before = st.cnt[t] > 0 && st.cnt[t] < full;
            if added {
                st.cnt[t] += 1;
            } else {
                st.cnt[t] -= 1;
            }
            let after = st.cnt[t] > 0 && st.cnt[t] < full;
            match (before, after) {
                (false, true) => st.psi += x.degree(i + 1, t),
                (true, false) => st.psi -= x.degree(i + 1, t),
                _ => {}
            }
        }
    };
    let visit = |st: &St, mask: u64| {
        (mask != 0 && 2 * st.wdeg <= total).then(|| {
            let (a, b) = expansion_ratio(x, i, st.psi, st.wdeg);
            (a, b, mask)
        })
    };
    let better = |p: &(u128, u128, u64), q: &(u128, u128, u64)| {
        let (l, r) = (p.0 * q.1, q.0 * p.1);
        l < r || (l == r && lex_less(p.2, q.2))
    };
    gray_search(n, init, toggle, visit, better)
}

fn sampled_level_epsilon(x: &SimplicialComplex, i: isize, trials: u64, seed: u64) -> Option<(u128, u128, Vec<usize>)> {
    let n = x.num_faces(i);
    let total = x.total_degree(i);
    let mut rng = stream_rng(seed, (i + 1) as u64);
    let mut best: Option<(u128, u128, Vec<usize>)> = None;
    for _ in 0..trials.max(1) {
        let k = rng.random_range(1..=n);
        let mut set = sample(&mut rng, n, k).into_vec();
        set.sort_unstable();
        let w = Cochain::from_indices(i, set.iter().copied());
        let wdeg: u64 = set.iter().map(|&s| x.degree(i, s)).sum();
        if 2 * wdeg > total {
            continue;
        }
        let psi: u64 = crate::cascade::expanding_faces(x, &w)
            .expect("i < d")
            .iter()
            .map(|t| x.degree(i + 1, t))
            .sum();
        let (a, b) = expansion_ratio(x, i, psi, wdeg);
        if best.as_ref().is_none_or(|(ba, bb, _)| a * bb < ba * b) {
            best = Some((a, b, set));
        }
    }
    best
}

#[derive(Clone, Debug, PartialEq)]
pub struct GraphValue {
    pub value: Rational,
    pub flag: Flag,
    /// Conductance: the minimizing set. Bipartiteness: `S₁` then `S₂`.
    pub sets: Vec<Vec<usize>>,
}

/// `Φ(G)` exactly, or by local search in sampled mode over the cap.
pub fn conductance(g: &IGraph, mode: Mode, caps: ExactCaps) -> Result<GraphValue> {
    match (min_conductance(g, caps.subset), mode) {
        (Ok(w), _) => Ok(GraphValue {
            value: w.ratio(),
            flag: Flag::Exact,
            sets: vec![w.set],
        }),
        (Err(HdxError::TooLargeForExact { .. }), Mode::Sampled { trials, seed }) => {
            let w = local_search_conductance(g, trials.clamp(1, 64) as usize, seed)?;
            Ok(GraphValue {
                value: w.ratio(),
                flag: Flag::Heuristic,
                sets: vec![w.set],
            })
        }
        (Err(e), _) => Err(e),
    }
}

/// `β(G)` exactly, or by local search in sampled mode over the cap.
pub fn bipartiteness_ratio(g: &IGraph, mode: Mode, caps: ExactCaps) -> Result<GraphValue> {
    match (min_bipartiteness(g, caps.subset), mode) {
        (Ok(w), _) => Ok(GraphValue {
            value: w.ratio(),
            flag: Flag::Exact,
            sets: vec![w.s1, w.s2],
        }),
        (Err(HdxError::TooLargeForExact { .. }), Mode::Sampled { trials, seed }) => {
            let w = local_search_bipartiteness(g, trials.clamp(1, 64) as usize, seed)?;
            Ok(GraphValue {
                value: w.ratio(),
                flag: Flag::Heuristic,
                sets: vec![w.s1, w.s2],
            })
        }
        (Err(e), _) => Err(e),
    }
}

/// `(2^{1/2^k} − 1)/√2`.
pub fn alpha_threshold(k: u32) -> f64 {
    (2f64.powf(0.5f64.powi(k as i32)) - 1.0) / SQRT_2
}

fn check_alpha(alpha: f64, threshold: f64) -> Result<()> {
    if alpha.is_nan() || alpha < 0.0 {
        return Err(HdxError::BadParameter(format!("alpha {alpha} must be nonnegative")));
    }
    if alpha >= threshold {
        return Err(HdxError::AlphaTooLarge { alpha, threshold });
    }
    Ok(())
}

/// `ε(d, α) = ((2^{1/2^d} − 1 − √2α)/(2√2·d))^d` for `α` below
/// [`alpha_threshold`]`(d)`.
pub fn theorem_epsilon(d: isize, alpha: f64) -> Result<f64> {
    if d < 1 {
        return Err(HdxError::DimensionTooSmall(d));
    }
    check_alpha(alpha, alpha_threshold(d as u32))?;
    let base = (2f64.powf(0.5f64.powi(d as i32)) - 1.0 - SQRT_2 * alpha) / (2.0 * SQRT_2 * d as f64);
    Ok(base.powi(d as i32))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MuValue {
    pub mu: f64,
    /// `min(ε, 1)`.
    pub epsilon_used: f64,
    pub clamped: bool,
}

/// `μ = 1 − min(ε,1)²/(2(d+1)²)` for `d > 1`.
pub fn theorem_mu(d: isize, epsilon: f64) -> Result<MuValue> {
    if d <= 1 {
        return Err(HdxError::DimensionTooSmall(d));
    }
    if epsilon.is_nan() || epsilon < 0.0 {
        return Err(HdxError::BadParameter(format!("epsilon {epsilon} must be nonnegative")));
    }
    let e = epsilon.min(1.0);
    Ok(MuValue {
        mu: 1.0 - e * e / (2.0 * ((d + 1) as f64).powi(2)),
        epsilon_used: e,
        clamped: epsilon > 1.0,
    })
}

/// [`theorem_mu`] composed with [`theorem_epsilon`].
pub fn theorem_mu_from_alpha(d: isize, alpha: f64) -> Result<MuValue> {
    if d <= 1 {
        return Err(HdxError::DimensionTooSmall(d));
    }
    theorem_mu(d, theorem_epsilon(d, alpha)?)
}

/// Level-`i` rate `1 − (1/(2(i+2)²))·((2^{1/2^{i+1}} − 1 − √2α)/(2√2(i+1)))^{2(i+1)}`.
pub fn stronger_mu(i: isize, alpha: f64) -> Result<f64> {
    if i < 0 {
        return Err(HdxError::LevelOutOfRange { level: i, min: 0, max: isize::MAX });
    }
    let k = (i + 1) as u32;
    check_alpha(alpha, alpha_threshold(k))?;
    let base = (2f64.powf(0.5f64.powi(k as i32)) - 1.0 - SQRT_2 * alpha) / (2.0 * SQRT_2 * k as f64);
    Ok(1.0 - base.powi(2 * k as i32) / (2.0 * ((i + 2) as f64).powi(2)))
}

/// One exact inequality `lhs ≤ rhs` or `lhs ≥ rhs`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExactCheck {
    pub name: String,
    /// Level `i`, `j` or `k` the check is indexed by.
    pub index: isize,
    pub lhs: Pq,
    pub relation: &'static str,
    pub rhs: Pq,
    pub holds: bool,
}

impl ExactCheck {
    fn le(name: &str, index: isize, lhs: Rational, rhs: Rational) -> Self {
        let holds = lhs <= rhs;
        ExactCheck {
            name: name.to_string(),
            index,
            lhs: Pq(lhs),
            relation: "<=",
            rhs: Pq(rhs),
            holds,
        }
    }

    fn ge(name: &str, index: isize, lhs: Rational, rhs: Rational) -> Self {
        let holds = lhs >= rhs;
        ExactCheck {
            name: name.to_string(),
            index,
            lhs: Pq(lhs),
            relation: ">=",
            rhs: Pq(rhs),
            holds,
        }
    }

    fn to_error(&self, level: Option<isize>) -> HdxError {
        let at = match level {
            Some(i) => format!("{} (i={}, index {})", self.name, i, self.index),
            None => format!("{} (index {})", self.name, self.index),
        };
        HdxError::violated(at, format!("{} {} {} fails", self.lhs, self.relation, self.rhs))
    }
}

fn first_failure(checks: &[ExactCheck], level: Option<isize>) -> Result<()> {
    match checks.iter().find(|c| !c.holds) {
        Some(c) => Err(c.to_error(level)),
        None => Ok(()),
    }
}

/// `Φ(G_i) ≥ ε/(i+2)` for every `0 ≤ i < d`, with exact conductances.
pub fn verify_conductance_lemma(x: &SimplicialComplex, epsilon: &Rational, caps: ExactCaps) -> Result<Vec<ExactCheck>> {
    let mut out = Vec::new();
    for i in 0..x.dim() {
        let phi = min_conductance(&build_igraph(x, i)?, caps.subset)?.ratio();
        out.push(ExactCheck::ge("conductance lemma", i, phi, epsilon / from_int(i as i64 + 2)));
    }
    first_failure(&out, None)?;
    Ok(out)
}

/// `β(G_i) ≥ 1/(i+2)` for every `1 ≤ i < d`, with exact ratios.
pub fn verify_bipartiteness_lemma(x: &SimplicialComplex, caps: ExactCaps) -> Result<Vec<ExactCheck>> {
    let mut out = Vec::new();
    for i in 1..x.dim() {
        let beta = min_bipartiteness(&build_igraph(x, i)?, caps.subset)?.ratio();
        out.push(ExactCheck::ge("bipartiteness lemma", i, beta, rat(1, i as i64 + 2)));
    }
    first_failure(&out, None)?;
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GoodDimension {
    /// `‖W‖ < η^{2^{i+1}−1}`.
    pub hypothesis: bool,
    /// All `j` with `Pr[S^j ∧ ¬S^{j−1}] ≥ c^j/(i+1)·‖W‖`.
    pub satisfying: Vec<isize>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TraceReport {
    pub level: isize,
    pub eta: Pq,
    pub c: Pq,
    pub alpha: Pq,
    pub norm: Pq,
    pub empty_face_fat: bool,
    pub good_dimension: GoodDimension,
    pub checks: Vec<ExactCheck>,
}

impl TraceReport {
    /// Smallest `rhs − lhs` (or `lhs − rhs`) over all checks.
    pub fn min_margin(&self) -> Option<Rational> {
        self.checks
            .iter()
            .map(|c| if c.relation == "<=" { &c.rhs.0 - &c.lhs.0 } else { &c.lhs.0 - &c.rhs.0 })
            .min()
    }
}

/// Replays the eight proof inequalities for `W ∈ C^i(X)` with the exact
/// skeleton constant of `X`.
pub fn verify_proof_trace(x: &SimplicialComplex, w: &Cochain, eta: &Rational, c: &Rational) -> Result<TraceReport> {
    let alpha = skeleton_alpha(x, Mode::Exact, ExactCaps::default())?.value;
    verify_proof_trace_with_alpha(x, w, eta, c, &alpha)
}

/// [`verify_proof_trace`] with a precomputed `α`. `α` must be a valid skeleton
/// constant for `X`, otherwise the `k`-full check may legitimately fail.
pub fn verify_proof_trace_with_alpha(
    x: &SimplicialComplex,
    w: &Cochain,
    eta: &Rational,
    c: &Rational,
    alpha: &Rational,
) -> Result<TraceReport> {
    let i = w.dim();
    let d = x.dim();
    if !(0..d).contains(&i) {
        w.check_in(x)?;
        return Err(HdxError::TopDimension(i));
    }
    if c < &Rational::zero() || c > &rat(1, 2) {
        return Err(HdxError::BadParameter(format!("c = {} is outside [0, 1/2]", format_pq(c))));
    }
    let cascade = fat_cascade(x, w, eta)?;
    let gamma = container(x, w)?;
    let full = full_from_cascade(x, cascade);
    let s = |j: isize| full.cascade().level(j);
    let f = |j: isize| full.level(j);
    let pr = |up: &Cochain, up_in: bool, lo: &Cochain, lo_in: bool| chain_prob_sets(x, up, up_in, lo, lo_in).expect("levels ordered");
    let ep = |e: u64| pow(eta, e);
    let two = |e: isize| 1u64 << e;
    let nw = norm(x, w);
    // q[k] = Pr[S^k ∧ ¬S^{k−1}]
    let q: Vec<Rational> = (0..=i).map(|k| pr(s(k), true, s(k - 1), false)).collect();
    let mut checks = Vec::new();

    for j in -1..=i {
        let sj = norm(x, s(j));
        checks.push(ExactCheck::ge("fat-faces", j, nw.clone(), ep(two(i - j) - 1) * &sj));
        let tail: Rational = (j + 1..=i).map(|k| q[k as usize].clone()).sum();
        checks.push(ExactCheck::le("cochain-upper-bound", j, nw.clone(), sj + tail));
    }

    let hypothesis = nw < ep(two(i + 1) - 1);
    let satisfying: Vec<isize> = (0..=i)
        .filter(|&j| q[j as usize] >= pow(c, j as u64) / from_int(i as i64 + 1) * &nw)
        .collect();
    if hypothesis && satisfying.is_empty() {
        return Err(HdxError::violated(
            format!("good-dimension (i={i})"),
            format!("no j in [0, {i}] satisfies the bound with ‖W‖ = {}", format_pq(&nw)),
        ));
    }

    let alpha_term = |e: u64| ep(e) + alpha;
    for j in 0..=i {
        let not_below = s(j - 1);
        checks.push(ExactCheck::ge(
            "container-bound",
            j,
            pr(&gamma, true, not_below, false),
            ep(two(i - j) - 1) * &q[j as usize],
        ));
        let top = pr(f(i + 1), true, not_below, false);
        let mut rhs = alpha_term(two(i - j)) * &q[j as usize];
        for k in j + 1..=i {
            rhs += from_int(k as i64 + 1) * alpha_term(two(i - k)) * &q[k as usize];
        }
        checks.push(ExactCheck::le("full-faces-upper-bound", j, top.clone(), rhs));
        let mut rhs = pr(f(j + 1), true, not_below, false);
        for k in j + 2..=i + 1 {
            rhs += pr(f(k), true, f(k - 1), false);
        }
        checks.push(ExactCheck::le("full-on-non-fat", j, top, rhs));
    }
    for k in 1..=i + 1 {
        let fk_not_fat = pr(f(k), true, s(k - 2), false);
        checks.push(ExactCheck::le(
            "full-contain-not-full",
            k,
            pr(f(k), true, f(k - 1), false),
            from_int(k as i64) * &fk_not_fat,
        ));
        checks.push(ExactCheck::le(
            "k-full-and-k-2-not-fat",
            k,
            fk_not_fat,
            alpha_term(two(i - k + 1)) * pr(s(k - 1), true, s(k - 2), false),
        ));
    }
    first_failure(&checks, Some(i))?;
    Ok(TraceReport {
        level: i,
        eta: Pq(eta.clone()),
        c: Pq(c.clone()),
        alpha: Pq(alpha.clone()),
        norm: Pq(nw),
        empty_face_fat: full.cascade().empty_face_fat(),
        good_dimension: GoodDimension { hypothesis, satisfying },
        checks,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MuLevel {
    pub level: isize,
    pub lazy: bool,
    pub lambda_2: f64,
    pub lambda_min: f64,
    pub max_abs: f64,
    pub mu: f64,
    pub residual: f64,
    pub slack: f64,
}

/// `max{|λ₂|, |λ_min|}` of `Ã_i` (lazy at `i = 0`) against `μ` from
/// [`theorem_mu`] with the given ε, residual on the permissive side.
pub fn mu_vs_spectrum(x: &SimplicialComplex, epsilon: &Rational) -> Result<Vec<MuLevel>> {
    let mu = theorem_mu(x.dim(), to_f64(epsilon))?.mu;
    let mut out = Vec::new();
    for i in 0..x.dim() {
        let g = build_igraph(x, i)?;
        let g = if i == 0 { lazy_igraph(&g) } else { g };
        let spec = graph_spectrum(&g)?;
        let max_abs = spec.mixing_lambda();
        let row = MuLevel {
            level: i,
            lazy: i == 0,
            lambda_2: spec.lambda_2().unwrap_or(f64::NAN),
            lambda_min: spec.lambda_min(),
            max_abs,
            mu,
            residual: spec.residual,
            slack: mu + spec.residual - max_abs,
        };
        if row.slack < 0.0 {
            return Err(HdxError::violated(
                format!("spectral mixing rate (i={i})"),
                format!("max(|λ₂|, |λ_min|) = {max_abs} > μ = {mu}"),
            ));
        }
        out.push(row);
    }
    Ok(out)
}

/// Version string embedded in every report.
pub fn version() -> String {
    format!("hdx-walks {}", env!("CARGO_PKG_VERSION"))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MuBounds {
    /// From ε (clamped to 1).
    pub from_epsilon: Option<f64>,
    /// From α via the closed-form ε.
    pub from_alpha: Option<f64>,
    /// Per level `i < d`, `null` where α is over that level's threshold.
    pub per_level: Vec<Option<f64>>,
    pub epsilon_clamped: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Flags {
    pub alpha: Flag,
    pub epsilon: Flag,
    pub conductance: Vec<Flag>,
    pub bipartiteness: Vec<Option<Flag>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlphaWitness {
    pub link_of: Vec<String>,
    pub set: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EpsilonWitness {
    pub level: isize,
    pub cochain: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitWitness {
    pub s1: Vec<String>,
    pub s2: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Witnesses {
    pub alpha: Option<AlphaWitness>,
    pub epsilon: EpsilonWitness,
    pub conductance: Vec<Vec<String>>,
    pub bipartiteness: Vec<Option<SplitWitness>>,
}

/// Outcome of one requested check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckLine {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExpansionCertificate {
    pub version: String,
    /// Caller's run configuration, echoed verbatim.
    pub config: serde_json::Value,
    pub dimension: isize,
    pub f_vector: Vec<usize>,
    pub alpha: Pq,
    pub epsilon: Pq,
    pub conductance: Vec<Pq>,
    /// `null` at level 0.
    pub bipartiteness: Vec<Option<Pq>>,
    pub mu: MuBounds,
    pub flags: Flags,
    pub witnesses: Witnesses,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub checks: Vec<CheckLine>,
}

impl ExpansionCertificate {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable") + "\n"
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| HdxError::Parse {
            line: e.line(),
            message: e.to_string(),
        })
    }

    pub fn all_checks_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    /// Human-readable summary.
    pub fn to_text(&self) -> String {
        let mut s = format!(
            "# {}\n# config {}\ndimension {}  f-vector {:?}\n",
            self.version, self.config, self.dimension, self.f_vector
        );
        let flag = |f: Flag| serde_json::to_value(f).expect("serializable").as_str().unwrap_or_default().to_string();
        s.push_str(&format!("alpha = {} ({})\n", self.alpha, flag(self.flags.alpha)));
        s.push_str(&format!("epsilon = {} ({})\n", self.epsilon, flag(self.flags.epsilon)));
        for (i, c) in self.conductance.iter().enumerate() {
            s.push_str(&format!("conductance[{i}] = {c}\n"));
        }
        for (i, b) in self.bipartiteness.iter().enumerate() {
            if let Some(b) = b {
                s.push_str(&format!("bipartiteness[{i}] = {b}\n"));
            }
        }
        let opt = |v: Option<f64>| v.map_or("n/a".to_string(), |m| m.to_string());
        s.push_str(&format!("mu from epsilon = {}  from alpha = {}\n", opt(self.mu.from_epsilon), opt(self.mu.from_alpha)));
        for (i, m) in self.mu.per_level.iter().enumerate() {
            s.push_str(&format!("mu level[{i}] = {}\n", opt(*m)));
        }
        for c in &self.checks {
            s.push_str(&format!("[{}] {}: {}\n", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail));
        }
        s
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CertifyOptions {
    pub mode: Mode,
    pub caps: ExactCaps,
    /// Lemma, Cheeger/Trevisan, spectral-rate and end-to-end checks.
    pub checks: bool,
    pub skeleton_mixing: bool,
}

impl Default for CertifyOptions {
    fn default() -> Self {
        CertifyOptions {
            mode: Mode::Exact,
            caps: ExactCaps::default(),
            checks: false,
            skeleton_mixing: false,
        }
    }
}

fn record<T>(checks: &mut Vec<CheckLine>, name: &str, r: Result<T>, ok: impl FnOnce(&T) -> String) -> Result<()> {
    match r {
        Ok(v) => {
            checks.push(CheckLine {
                name: name.to_string(),
                passed: true,
                detail: ok(&v),
            });
            Ok(())
        }
        Err(HdxError::BoundViolated { check, detail }) => {
            checks.push(CheckLine {
                name: name.to_string(),
                passed: false,
                detail: format!("{check}: {detail}"),
            });
            Ok(())
        }
        Err(e) => Err(e),
    }
}

/// Computes α, ε, `Φ(G_i)`, `β(G_i)` and the μ bounds; with
/// `opts.checks`, also runs every lemma and spectral inequality and records
/// pass/fail lines instead of stopping at the first violation.
pub fn certify(x: &SimplicialComplex, opts: &CertifyOptions, config: serde_json::Value) -> Result<ExpansionCertificate> {
    let d = x.dim();
    if d < 1 {
        return Err(HdxError::DimensionTooSmall(d));
    }
    let alpha = skeleton_alpha(x, opts.mode, opts.caps)?;
    let eps = colorful_epsilon(x, opts.mode, opts.caps)?;
    let graphs: Vec<IGraph> = (0..d).map(|i| build_igraph(x, i)).collect::<Result<_>>()?;
    let cond: Vec<GraphValue> = graphs.iter().map(|g| conductance(g, opts.mode, opts.caps)).collect::<Result<_>>()?;
    let bip: Vec<Option<GraphValue>> = graphs
        .iter()
        .enumerate()
        .map(|(i, g)| if i == 0 { Ok(None) } else { bipartiteness_ratio(g, opts.mode, opts.caps).map(Some) })
        .collect::<Result<_>>()?;
    let a = to_f64(&alpha.value);
    let e = to_f64(&eps.value);
    let mu = MuBounds {
        from_epsilon: theorem_mu(d, e).ok().map(|m| round_sig12(m.mu)),
        from_alpha: theorem_mu_from_alpha(d, a).ok().map(|m| round_sig12(m.mu)),
        per_level: (0..d)
            .map(|i| if d > 1 { stronger_mu(i, a).ok().map(round_sig12) } else { None })
            .collect(),
        epsilon_clamped: e > 1.0,
    };
    let names = |level: isize, set: &[usize]| -> Vec<String> { set.iter().map(|&t| x.display_face(x.face(level, t))).collect() };
    let witnesses = Witnesses {
        alpha: alpha.witness.as_ref().map(|(sigma, set)| AlphaWitness {
            link_of: names_of(x, sigma.vertices().iter().copied()),
            set: names_of(x, set.iter().copied()),
        }),
        epsilon: EpsilonWitness {
            level: eps.level,
            cochain: names(eps.level, &eps.witness),
        },
        conductance: cond.iter().enumerate().map(|(i, c)| names(i as isize, &c.sets[0])).collect(),
        bipartiteness: bip
            .iter()
            .enumerate()
            .map(|(i, b)| {
                b.as_ref().map(|b| SplitWitness {
                    s1: names(i as isize, &b.sets[0]),
                    s2: names(i as isize, &b.sets[1]),
                })
            })
            .collect(),
    };
    let mut checks = Vec::new();
    if opts.checks {
        let all_exact = alpha.flag == Flag::Exact
            && eps.flag == Flag::Exact
            && cond.iter().all(|c| c.flag == Flag::Exact)
            && bip.iter().flatten().all(|b| b.flag == Flag::Exact);
        if all_exact {
            let th = alpha_threshold(d as u32);
            if a < th {
                let te = theorem_epsilon(d, a)?;
                let bound = Rational::from_float(te).expect("finite");
                let ok = eps.value >= bound;
                checks.push(CheckLine {
                    name: "colorful expansion vs closed form".into(),
                    passed: ok,
                    detail: format!("epsilon = {} vs eps(d, alpha) = {te:e}", format_pq(&eps.value)),
                });
            } else {
                checks.push(CheckLine {
                    name: "colorful expansion vs closed form".into(),
                    passed: true,
                    detail: format!("not applicable: alpha = {a} is not below {th}"),
                });
            }
            for (i, c) in cond.iter().enumerate() {
                let rhs = &eps.value / from_int(i as i64 + 2);
                checks.push(CheckLine {
                    name: format!("conductance lemma (i={i})"),
                    passed: c.value >= rhs,
                    detail: format!("{} >= {}", format_pq(&c.value), format_pq(&rhs)),
                });
            }
            for (i, b) in bip.iter().enumerate() {
                if let Some(b) = b {
                    let rhs = rat(1, i as i64 + 2);
                    checks.push(CheckLine {
                        name: format!("bipartiteness lemma (i={i})"),
                        passed: b.value >= rhs,
                        detail: format!("{} >= {}", format_pq(&b.value), format_pq(&rhs)),
                    });
                }
            }
        }
        for (i, g) in graphs.iter().enumerate() {
            let spec = graph_spectrum(g)?;
            record(&mut checks, &format!("cheeger (i={i})"), cheeger_check(&cond[i].value, &spec), |r| {
                format!("λ₂ = {:.12} <= {:.12}", r.lhs, r.rhs)
            })?;
            if let Some(b) = &bip[i] {
                record(&mut checks, &format!("trevisan (i={i})"), trevisan_check(&b.value, &spec), |r| {
                    format!("λ_n = {:.12} >= {:.12}", r.lhs, r.rhs)
                })?;
            }
        }
        if d > 1 {
            record(&mut checks, "spectral mixing rate", mu_vs_spectrum(x, &eps.value), |rows| {
                rows.iter()
                    .map(|r| format!("i={}: {:.12} <= {:.12}", r.level, r.max_abs, r.mu))
                    .collect::<Vec<_>>()
                    .join("; ")
            })?;
        }
    }
    if opts.skeleton_mixing {
        record(&mut checks, "skeleton mixing", skeleton_mixing_check(x, opts.caps.subset), |r| {
            // below the residual the sign and digits are noise
            let lt = if r.lambda_tilde.abs() <= r.residual { 0.0 } else { round_sig12(r.lambda_tilde) };
            format!("λ̃₂ = {lt} (residual {:e}), {} vertex subsets", r.residual, r.skeleton_checks)
        })
        .or_else(|e| match e {
            HdxError::NotPartiteRegular(msg) => {
                checks.push(CheckLine {
                    name: "skeleton mixing".into(),
                    passed: false,
                    detail: msg,
                });
                Ok(())
            }
            e => Err(e),
        })?;
    }
    Ok(ExpansionCertificate {
        version: version(),
        config,
        dimension: d,
        f_vector: x.f_vector(),
        alpha: Pq(alpha.value),
        epsilon: Pq(eps.value),
        conductance: cond.iter().map(|c| Pq(c.value.clone())).collect(),
        bipartiteness: bip.iter().map(|b| b.as_ref().map(|b| Pq(b.value.clone()))).collect(),
        mu,
        flags: Flags {
            alpha: alpha.flag,
            epsilon: eps.flag,
            conductance: cond.iter().map(|c| c.flag).collect(),
            bipartiteness: bip.iter().map(|b| b.as_ref().map(|b| b.flag)).collect(),
        },
        witnesses,
        checks,
    })
}
