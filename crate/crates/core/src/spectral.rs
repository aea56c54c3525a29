//! Dense symmetric eigensolver (cyclic Jacobi) and the spectral side of the
//! expansion argument: normalized adjacency matrices and the Cheeger-type
//! inequalities for `λ₂` and `λ_n`.

use serde::Serialize;

use crate::error::{HdxError, Result};
use crate::rational::{round_sig12, to_f64, Rational};
use crate::walk::IGraph;

/// Sweep cap for the Jacobi iteration.
pub const MAX_SWEEPS: usize = 100;

/// Square symmetric matrix, row-major; writes mirror across the diagonal.
#[derive(Clone, Debug, PartialEq)]
pub struct SymMatrix {
    n: usize,
    data: Vec<f64>,
}

impl SymMatrix {
    pub fn zeros(n: usize) -> Self {
        SymMatrix { n, data: vec![0.0; n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.set(i, i, 1.0);
        }
        m
    }

    /// Builds from the upper triangle of `f(i, j)`, `i ≤ j`.
    pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> f64) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in i..n {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.n + j] = v;
        self.data[j * self.n + i] = v;
    }

    pub fn trace(&self) -> f64 {
        (0..self.n).map(|i| self.get(i, i)).sum()
    }

    pub fn frobenius(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    fn off_diagonal_norm(&self) -> f64 {
        let mut s = 0.0;
        for i in 0..self.n {
            for j in 0..self.n {
                if i != j {
                    s += self.get(i, j).powi(2);
                }
            }
        }
        s.sqrt()
    }
}

#[derive(Clone, Debug)]
pub struct EigenDecomposition {
    /// Descending.
    pub values: Vec<f64>,
    /// `vectors[k]` is the unit eigenvector of `values[k]`.
    pub vectors: Vec<Vec<f64>>,
    /// Weyl bound on the eigenvalue error (off-diagonal Frobenius mass at
    /// convergence plus a rounding allowance).
    pub residual: f64,
    pub sweeps: usize,
}

/// Cyclic Jacobi rotations until the off-diagonal Frobenius mass drops
/// below `1e−12·n`.
pub fn jacobi_eigen(m: &SymMatrix) -> Result<EigenDecomposition> {
    let n = m.order();
    if m.data.iter().any(|v| !v.is_finite()) {
        return Err(HdxError::BadParameter("matrix has non-finite entries".into()));
    }
    let mut a = m.clone();
    let mut v = SymMatrix::identity(n).data;
    let tol = 1e-12 * n.max(1) as f64;
    let mut sweeps = 0;
    let mut off = a.off_diagonal_norm();
    while off >= tol {
        if sweeps == MAX_SWEEPS {
            return Err(HdxError::NoConvergence { sweeps, off_norm: off });
        }
        sweeps += 1;
        for p in 0..n {
            for q in p + 1..n {
                let apq = a.get(p, q);
                if apq == 0.0 {
                    continue;
                }
                let theta = (a.get(q, q) - a.get(p, p)) / (2.0 * apq);
                let t = if theta.abs() > 1e150 {
                    0.5 / theta
                } else {
                    theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
                };
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    if k != p && k != q {
                        let akp = a.get(k, p);
                        let akq = a.get(k, q);
                        a.set(k, p, c * akp - s * akq);
                        a.set(k, q, s * akp + c * akq);
                    }
                }
                let app = a.get(p, p);
                let aqq = a.get(q, q);
                a.data[p * n + p] = app - t * apq;
                a.data[q * n + q] = aqq + t * apq;
                a.set(p, q, 0.0);
                for k in 0..n {
                    let vkp = v[k * n + p];
                    let vkq = v[k * n + q];
                    v[k * n + p] = c * vkp - s * vkq;
                    v[k * n + q] = s * vkp + c * vkq;
                }
            }
        }
        off = a.off_diagonal_norm();
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a.get(j, j).total_cmp(&a.get(i, i)));
    let values = order.iter().map(|&k| a.get(k, k)).collect();
    let vectors = order
        .iter()
        .map(|&k| (0..n).map(|r| v[r * n + k]).collect())
        .collect();
    let residual = off + 4.0 * n as f64 * f64::EPSILON * m.frobenius();
    Ok(EigenDecomposition {
        values,
        vectors,
        residual,
        sweeps,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Spectrum {
    /// `λ₁ ≥ … ≥ λ_n`.
    pub eigenvalues: Vec<f64>,
    pub residual: f64,
    /// Unit eigenvector of `λ₁`, sign chosen so its entries sum to ≥ 0.
    #[serde(skip)]
    pub top_eigenvector: Vec<f64>,
}

impl Spectrum {
    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    pub fn lambda_1(&self) -> f64 {
        self.eigenvalues[0]
    }

    /// `λ₂`, or `None` for a 1×1 matrix.
    pub fn lambda_2(&self) -> Option<f64> {
        self.eigenvalues.get(1).copied()
    }

    pub fn lambda_min(&self) -> f64 {
        *self.eigenvalues.last().expect("nonempty spectrum")
    }

    /// `max{|λ₂|, |λ_n|}`; 0 for a single vertex.
    pub fn mixing_lambda(&self) -> f64 {
        match self.lambda_2() {
            Some(l2) => l2.abs().max(self.lambda_min().abs()),
            None => 0.0,
        }
    }

    /// `λ[k] = value` lines (1-based) followed by the residual.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for (k, l) in self.eigenvalues.iter().enumerate() {
            s.push_str(&format!("λ[{}] = {}\n", k + 1, round_sig12(*l)));
        }
        s.push_str(&format!("residual = {:e}\n", self.residual));
        s
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "eigenvalues": self.eigenvalues.iter().map(|v| round_sig12(*v)).collect::<Vec<_>>(),
            "residual": self.residual,
        })
    }
}

pub fn spectrum(m: &SymMatrix) -> Result<Spectrum> {
    let mut e = jacobi_eigen(m)?;
    let mut top = if e.vectors.is_empty() { Vec::new() } else { e.vectors.swap_remove(0) };
    if top.iter().sum::<f64>() < 0.0 {
        top.iter_mut().for_each(|v| *v = -*v);
    }
    Ok(Spectrum {
        eigenvalues: e.values,
        residual: e.residual,
        top_eigenvector: top,
    })
}

/// `Ã = D^{-1/2} A D^{-1/2}` with self-loops on the diagonal; entry
/// `(u, v) = (A(u,v) + δ_{uv}·loop(u)) / √(deg(u)·deg(v))`.
pub fn normalized_adjacency(g: &IGraph) -> Result<SymMatrix> {
    let n = g.len();
    if let Some(v) = (0..n).find(|&v| g.degree(v) == 0) {
        return Err(HdxError::IsolatedVertex(v));
    }
    let mut m = SymMatrix::zeros(n);
    for u in 0..n {
        if g.self_loop_weight(u) > 0 {
            m.set(u, u, g.self_loop_weight(u) as f64 / g.degree(u) as f64);
        }
        for &(v, w) in g.neighbors(u) {
            if v > u {
                m.set(u, v, w as f64 / ((g.degree(u) * g.degree(v)) as f64).sqrt());
            }
        }
    }
    Ok(m)
}

/// Spectrum of the normalized adjacency matrix of `g`.
pub fn graph_spectrum(g: &IGraph) -> Result<Spectrum> {
    spectrum(&normalized_adjacency(g)?)
}

/// Outcome of one inequality check: `lhs ≤ rhs` (or `≥` for lower bounds),
/// with the residual added on the permissive side.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundCheck {
    pub name: String,
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
    pub passed: bool,
}

impl BoundCheck {
    pub(crate) fn upper(name: &str, lhs: f64, rhs: f64) -> Self {
        BoundCheck {
            name: name.to_string(),
            lhs,
            rhs,
            slack: rhs - lhs,
            passed: lhs <= rhs,
        }
    }

    pub(crate) fn lower(name: &str, lhs: f64, rhs: f64) -> Self {
        BoundCheck {
            name: name.to_string(),
            lhs,
            rhs,
            slack: lhs - rhs,
            passed: lhs >= rhs,
        }
    }

    pub(crate) fn into_result(self) -> Result<Self> {
        if self.passed {
            Ok(self)
        } else {
            let op = if self.name.contains('≥') { "<" } else { ">" };
            Err(HdxError::violated(
                self.name.clone(),
                format!("{} {op} {} (slack {:e})", self.lhs, self.rhs, self.slack),
            ))
        }
    }
}

/// `λ₂ ≤ 1 − Φ²/2 + residual`.
pub fn cheeger_check(phi: &Rational, spec: &Spectrum) -> Result<BoundCheck> {
    let p = to_f64(phi);
    let Some(l2) = spec.lambda_2() else {
        return Ok(BoundCheck::upper("cheeger λ₂ ≤ 1 − Φ²/2", f64::NEG_INFINITY, 1.0 - p * p / 2.0));
    };
    BoundCheck::upper("cheeger λ₂ ≤ 1 − Φ²/2", l2, 1.0 - p * p / 2.0 + spec.residual).into_result()
}

/// `λ_n ≥ −1 + β²/2 − residual`.
pub fn trevisan_check(beta: &Rational, spec: &Spectrum) -> Result<BoundCheck> {
    let b = to_f64(beta);
    BoundCheck::lower("trevisan λ_n ≥ −1 + β²/2", spec.lambda_min(), -1.0 + b * b / 2.0 - spec.residual).into_result()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::SimplicialComplex;
    use crate::rational::{from_int, rat};
    use crate::walk::{build_igraph, lazy_igraph};
    use num_complex::Complex64;
    use num_traits::{One, Zero};
    use proptest::prelude::*;

    fn cx(facets: &[&str]) -> SimplicialComplex {
        SimplicialComplex::build(facets.iter().map(|f| f.chars().map(|c| c.to_string()))).unwrap()
    }

    type Poly = Vec<Rational>;

    fn trim(mut p: Poly) -> Poly {
        while p.len() > 1 && p.last().unwrap().is_zero() {
            p.pop();
        }
        p
    }

    /// Quotient and remainder; coefficients lowest degree first.
    fn divmod(a: &Poly, b: &Poly) -> (Poly, Poly) {
        let mut r = a.clone();
        let db = b.len() - 1;
        if a.len() < b.len() {
            return (vec![Rational::zero()], trim(r));
        }
        let mut q = vec![Rational::zero(); a.len() - db];
        for k in (0..q.len()).rev() {
            let c = &r[k + db] / b.last().unwrap();
            for (j, bj) in b.iter().enumerate() {
                r[k + j] -= &c * bj;
            }
            q[k] = c;
        }
        r.truncate(db.max(1));
        (trim(q), trim(r))
    }

    fn gcd(a: &Poly, b: &Poly) -> Poly {
        let (mut a, mut b) = (a.clone(), b.clone());
        while !(b.len() == 1 && b[0].is_zero()) {
            let r = divmod(&a, &b).1;
            a = b;
            b = r;
        }
        let lead = a.last().unwrap().clone();
        a.into_iter().map(|c| c / &lead).collect()
    }

    fn derivative(p: &Poly) -> Poly {
        trim((1..p.len()).map(|k| &p[k] * from_int(k as i64)).collect::<Vec<_>>().into_iter().chain(std::iter::once(Rational::zero())).collect())
    }

    /// Exact characteristic polynomial of the rational walk matrix
    /// `P = D⁻¹A` (similar to `Ã`) by Faddeev–LeVerrier, split into
    /// square-free factors by Yun's algorithm; each factor's simple roots are
    /// found with Durand–Kerner and repeated by multiplicity. Shares nothing
    /// with the Jacobi path.
    fn charpoly_eigenvalues(g: &IGraph) -> Vec<f64> {
        let n = g.len();
        let p: Vec<Vec<Rational>> = (0..n).map(|u| (0..n).map(|v| g.transition(u, v)).collect()).collect();
        let mul = |a: &Vec<Vec<Rational>>, b: &Vec<Vec<Rational>>| -> Vec<Vec<Rational>> {
            (0..n).map(|i| (0..n).map(|j| (0..n).fold(Rational::zero(), |acc, l| acc + &a[i][l] * &b[l][j])).collect()).collect()
        };
        // highest first: c_0 = 1, M_k = P·M_{k−1} + c_{k−1} I, c_k = −tr(P M_k)/k
        let mut coeffs = vec![Rational::one()];
        let mut mk = vec![vec![Rational::zero(); n]; n];
        for k in 1..=n {
            let mut next = mul(&p, &mk);
            for (i, row) in next.iter_mut().enumerate() {
                row[i] += coeffs.last().unwrap();
            }
            mk = next;
            let pm = mul(&p, &mk);
            let tr = (0..n).fold(Rational::zero(), |acc, i| acc + &pm[i][i]);
            coeffs.push(-tr / from_int(k as i64));
        }
        let poly: Poly = coeffs.into_iter().rev().collect();
        // Yun
        let mut factors = Vec::new();
        let dp = derivative(&poly);
        let a0 = gcd(&poly, &dp);
        let mut b = divmod(&poly, &a0).0;
        let mut c = divmod(&dp, &a0).0;
        let mut d = trim((0..c.len().max(b.len())).map(|k| c.get(k).cloned().unwrap_or_default() - derivative(&b).get(k).cloned().unwrap_or_default()).collect());
        let mut mult = 1;
        while b.len() > 1 {
            let a = gcd(&b, &d);
            factors.push((a.clone(), mult));
            b = divmod(&b, &a).0;
            c = divmod(&d, &a).0;
            d = trim((0..c.len().max(b.len())).map(|k| c.get(k).cloned().unwrap_or_default() - derivative(&b).get(k).cloned().unwrap_or_default()).collect());
            mult += 1;
        }
        let mut out = Vec::new();
        for (f, m) in factors {
            let deg = f.len() - 1;
            if deg == 0 {
                continue;
            }
            let cf: Vec<f64> = f.iter().map(to_f64).collect();
            let lead = cf[deg];
            let eval = |z: Complex64| cf.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c / lead);
            let mut roots: Vec<Complex64> = (0..deg).map(|k| Complex64::new(0.4, 0.9).powu(k as u32)).collect();
            for _ in 0..2000 {
                for i in 0..deg {
                    let denom = (0..deg).filter(|&j| j != i).fold(Complex64::new(1.0, 0.0), |acc, j| acc * (roots[i] - roots[j]));
                    let step = eval(roots[i]) / denom;
                    roots[i] -= step;
                }
            }
            for z in roots {
                assert!(z.im.abs() < 1e-9, "non-real root {z}");
                out.extend(std::iter::repeat_n(z.re, m));
            }
        }
        out.sort_by(|a, b| b.total_cmp(a));
        out
    }

    #[test]
    fn triangle_spectrum() {
        let g = build_igraph(&cx(&["abc"]), 1).unwrap();
        let m = normalized_adjacency(&g).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(m.get(i, j), if i == j { 0.0 } else { 0.5 });
            }
        }
        let s = spectrum(&m).unwrap();
        for (got, want) in s.eigenvalues.iter().zip([1.0, -0.5, -0.5]) {
            assert!((got - want).abs() < 1e-10);
        }
    }

    #[test]
    fn identity_spectrum() {
        let s = spectrum(&SymMatrix::identity(6)).unwrap();
        assert!(s.eigenvalues.iter().all(|&l| l == 1.0));
        assert_eq!(s.residual, 4.0 * 6.0 * f64::EPSILON * 6f64.sqrt());
    }

    #[test]
    fn two_triangles_against_charpoly() {
        let g = build_igraph(&cx(&["abc", "acd"]), 1).unwrap();
        let m = normalized_adjacency(&g).unwrap();
        let s = spectrum(&m).unwrap();
        assert!((s.lambda_1() - 1.0).abs() < 1e-12);
        let oracle = charpoly_eigenvalues(&g);
        assert_eq!(oracle.len(), 5);
        for (a, b) in s.eigenvalues.iter().zip(&oracle) {
            assert!((a - b).abs() < 1e-9, "{:?} vs {:?}", s.eigenvalues, oracle);
        }
        // top eigenvector ∝ √deg
        let vol: f64 = (0..5).map(|v| g.degree(v) as f64).sum();
        for v in 0..5 {
            assert!((s.top_eigenvector[v] - (g.degree(v) as f64 / vol).sqrt()).abs() < 1e-9);
        }
    }

    #[test]
    fn lazy_transform_entries() {
        let g = build_igraph(&cx(&["abc", "acd", "ade"]), 0).unwrap();
        let a = normalized_adjacency(&g).unwrap();
        let l = normalized_adjacency(&lazy_igraph(&g)).unwrap();
        for i in 0..g.len() {
            for j in 0..g.len() {
                let want = (if i == j { 1.0 } else { 0.0 } + a.get(i, j)) / 2.0;
                assert!((l.get(i, j) - want).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn isolated_vertex_rejected() {
        let g = IGraph::from_edges(0, vec!["a".into(), "b".into(), "c".into()], &[(0, 1, 1)]);
        assert_eq!(normalized_adjacency(&g).unwrap_err(), HdxError::IsolatedVertex(2));
    }

    #[test]
    fn inequality_checks() {
        let g = build_igraph(&cx(&["abc"]), 1).unwrap();
        let s = graph_spectrum(&g).unwrap();
        let c = cheeger_check(&rat(1, 1), &s).unwrap();
        assert!((c.lhs + 0.5).abs() < 1e-12 && (c.rhs - 0.5).abs() < 1e-9);
        let t = trevisan_check(&rat(1, 3), &s).unwrap();
        assert!((t.rhs + 17.0 / 18.0).abs() < 1e-9);
        // Bipartite: β = 0 and λ_n = −1, tight.
        let path = IGraph::from_edges(0, vec!["a".into(), "b".into()], &[(0, 1, 1)]);
        let sp = graph_spectrum(&path).unwrap();
        assert!((sp.lambda_min() + 1.0).abs() < 1e-12);
        trevisan_check(&rat(0, 1), &sp).unwrap();
        // Disconnected: Φ = 0, λ₂ = 1, tight.
        let split = IGraph::from_edges(0, (0..4).map(|v| v.to_string()).collect(), &[(0, 1, 1), (2, 3, 1)]);
        let sp = graph_spectrum(&split).unwrap();
        assert!((sp.lambda_2().unwrap() - 1.0).abs() < 1e-12);
        cheeger_check(&rat(0, 1), &sp).unwrap();
        assert!(matches!(cheeger_check(&rat(3, 2), &sp), Err(HdxError::BoundViolated { .. })));
    }

    #[test]
    fn report_formats() {
        let s = spectrum(&SymMatrix::from_fn(2, |i, j| if i == j { 0.0 } else { 1.0 })).unwrap();
        let text = s.to_text();
        assert!(text.starts_with("λ[1] = 1\nλ[2] = -1\nresidual = "));
        let js = s.to_json();
        assert_eq!(js["eigenvalues"], serde_json::json!([1.0, -1.0]));
    }

    proptest! {
        #[test]
        fn jacobi_invariants(entries in proptest::collection::vec(-1.0f64..1.0, 1..=64)) {
            let n = ((entries.len() as f64).sqrt() as usize).max(1);
            let m = SymMatrix::from_fn(n, |i, j| entries[(i * n + j) % entries.len()]);
            let e = jacobi_eigen(&m).unwrap();
            prop_assert!(e.values.windows(2).all(|w| w[0] >= w[1]));
            let tr: f64 = e.values.iter().sum();
            prop_assert!((tr - m.trace()).abs() <= n as f64 * e.residual + 1e-12);
            for a in 0..n {
                for b in 0..n {
                    let dot: f64 = (0..n).map(|k| e.vectors[a][k] * e.vectors[b][k]).sum();
                    let want = if a == b { 1.0 } else { 0.0 };
                    prop_assert!((dot - want).abs() < 1e-8);
                }
                // A v = λ v
                for r in 0..n {
                    let av: f64 = (0..n).map(|k| m.get(r, k) * e.vectors[a][k]).sum();
                    prop_assert!((av - e.values[a] * e.vectors[a][r]).abs() < 1e-8);
                }
            }
        }
    }
}
