use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use hdx_walks::certify::{self, CertifyOptions, ExactCaps, Mode};
use hdx_walks::cochain::Cochain;
use hdx_walks::cplx::{read_cplx, write_cplx};
use hdx_walks::generators::{complete_complex, complete_multipartite_complex, random_lm_complex};
use hdx_walks::rational::{format_pq, rat, round_sig12, to_f64};
use hdx_walks::spectral::graph_spectrum;
use hdx_walks::trajectory::Trajectory;
use hdx_walks::walk::{build_igraph, lazy_igraph, stationary, stream_rng, transition_step, verify_mixing_bound, Distribution, IGraph};
use hdx_walks::{Face, HdxError, SimplicialComplex};
use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution as _;
use rand::seq::index::sample;
use rand::Rng;
use rayon::prelude::*;
use serde_json::json;

use crate::config::RunConfig;
use crate::{CapArgs, Failure, GenerateKind};

fn path_string(p: &Path) -> String {
    p.display().to_string()
}

fn load(input: &Path) -> Result<SimplicialComplex, Failure> {
    let x = read_cplx(input)?;
    x.validate()?;
    Ok(x)
}

fn emit(text: &str) {
    print!("{text}");
}

fn fail(code: u8, message: impl Into<String>) -> Failure {
    Failure {
        code,
        message: message.into(),
    }
}

fn caps_of(c: &CapArgs) -> ExactCaps {
    ExactCaps {
        subset: c.subset_cap,
        cochain: c.cochain_cap,
    }
}

fn pretty(v: &serde_json::Value) -> String {
    serde_json::to_string_pretty(v).expect("serializable") + "\n"
}

pub fn build(input: &Path, output: Option<&Path>, json: bool) -> Result<(), Failure> {
    let x = load(input)?;
    let mut cfg = RunConfig::new("build");
    cfg.input = Some(path_string(input));
    cfg.output = output.map(path_string);
    if let Some(o) = output {
        std::fs::write(o, write_cplx(&x))?;
    }
    let mut levels = Vec::new();
    for i in 0..=x.dim() {
        let deg = x.degrees(i);
        let components = if i < x.dim() { Some(build_igraph(&x, i)?.components().len()) } else { None };
        levels.push(json!({
            "level": i,
            "faces": x.num_faces(i),
            "min_degree": deg.iter().min(),
            "max_degree": deg.iter().max(),
            "components": components,
        }));
    }
    if json {
        emit(&pretty(&json!({
            "version": certify::version(),
            "config": cfg.to_value(),
            "dimension": x.dim(),
            "f_vector": x.f_vector(),
            "levels": levels,
        })));
    } else {
        let mut s = cfg.text_header();
        writeln!(s, "dimension {}  f-vector {:?}", x.dim(), x.f_vector()).unwrap();
        for l in &levels {
            write!(s, "X({}): {} faces, degrees {}..{}", l["level"], l["faces"], l["min_degree"], l["max_degree"]).unwrap();
            if !l["components"].is_null() {
                write!(s, ", G_{} has {} component(s)", l["level"], l["components"]).unwrap();
            }
            s.push('\n');
        }
        emit(&s);
    }
    Ok(())
}

pub struct CertifyArgs {
    pub input: PathBuf,
    pub output: Option<PathBuf>,
    pub all: bool,
    pub skeleton_mixing: bool,
    pub sampled: bool,
    pub trials: u64,
    pub seed: u64,
    pub caps: CapArgs,
    pub json: bool,
}

pub fn certify(a: CertifyArgs) -> Result<(), Failure> {
    let x = load(&a.input)?;
    let caps = caps_of(&a.caps);
    let mut cfg = RunConfig::new("certify");
    cfg.input = Some(path_string(&a.input));
    cfg.output = a.output.as_deref().map(path_string);
    cfg.seed = a.seed;
    cfg.caps = caps;
    if a.sampled {
        cfg.trials = Some(a.trials);
        cfg.flags.push("sampled");
    }
    if a.all {
        cfg.flags.push("all");
    }
    if a.skeleton_mixing {
        cfg.flags.push("skeleton-mixing");
    }
    let opts = CertifyOptions {
        mode: if a.sampled {
            Mode::Sampled {
                trials: a.trials,
                seed: a.seed,
            }
        } else {
            Mode::Exact
        },
        caps,
        checks: a.all,
        skeleton_mixing: a.skeleton_mixing,
    };
    let cert = certify::certify(&x, &opts, cfg.to_value())?;
    if let Some(o) = &a.output {
        std::fs::write(o, cert.to_json())?;
    }
    emit(&if a.json { cert.to_json() } else { cert.to_text() });
    match cert.checks.iter().find(|c| !c.passed) {
        Some(c) => Err(fail(4, format!("{} failed: {}", c.name, c.detail))),
        None => Ok(()),
    }
}

pub struct WalkArgs {
    pub input: PathBuf,
    pub dim: isize,
    pub steps: usize,
    pub seed: u64,
    pub start: Option<String>,
    pub lazy: bool,
    pub simulate: u64,
    pub trajectory: Option<PathBuf>,
    pub mixing: bool,
    pub tolerance: f64,
    pub json: bool,
}

/// `a,c`, or `ac` when every label is one character.
fn parse_face(x: &SimplicialComplex, s: &str) -> Result<Face, Failure> {
    let labels: Vec<String> = if s.contains(',') {
        s.split(',').map(|t| t.trim().to_string()).collect()
    } else if x.vertex_index(s).is_none() && x.labels().iter().all(|l| l.chars().count() == 1) {
        s.chars().map(String::from).collect()
    } else {
        vec![s.to_string()]
    };
    let face = x.face_from_labels(&labels)?;
    if !x.contains(&face) {
        return Err(HdxError::FaceNotInComplex(labels.join(",")).into());
    }
    Ok(face)
}

fn dist_strings(d: &Distribution) -> Vec<String> {
    d.values().iter().map(format_pq).collect()
}

pub fn walk(a: WalkArgs) -> Result<(), Failure> {
    let x = load(&a.input)?;
    let i = a.dim;
    if !(0..x.dim()).contains(&i) {
        return Err(HdxError::LevelOutOfRange {
            level: i,
            min: 0,
            max: x.dim() - 1,
        }
        .into());
    }
    if a.lazy && (a.simulate > 0 || a.trajectory.is_some()) {
        return Err(fail(1, "simulation follows the non-lazy walk; drop --lazy"));
    }
    let mut cfg = RunConfig::new("walk");
    cfg.input = Some(path_string(&a.input));
    cfg.output = a.trajectory.as_deref().map(path_string);
    cfg.level = Some(i);
    cfg.steps = Some(a.steps);
    cfg.seed = a.seed;
    cfg.tolerance = Some(a.tolerance);
    cfg.trials = Some(a.simulate);
    if a.lazy {
        cfg.flags.push("lazy");
    }
    if a.mixing {
        cfg.flags.push("mixing");
    }
    let g0 = build_igraph(&x, i)?;
    let g = if a.lazy { lazy_igraph(&g0) } else { g0 };
    let names: Vec<String> = g.names().to_vec();
    let start = a.start.as_deref().map(|s| parse_face(&x, s)).transpose()?;
    let start_idx = start.as_ref().map(|f| x.index_of(f).expect("checked"));
    if let Some(f) = &start {
        if f.dim() != i {
            return Err(HdxError::DimensionMismatch(format!("start face has dimension {}, walk level is {i}", f.dim())).into());
        }
    }

    // exact t-step rows
    let starts: Vec<usize> = match start_idx {
        Some(s) => vec![s],
        None => (0..g.len()).collect(),
    };
    let rows: Vec<(usize, Distribution)> = starts
        .par_iter()
        .map(|&s| {
            let mut d = Distribution::point(g.len(), s);
            for _ in 0..a.steps {
                d = transition_step(&g, &d)?;
            }
            Ok((s, d))
        })
        .collect::<Result<_, HdxError>>()?;

    // mixing bound table
    let spec = graph_spectrum(&g).ok();
    let connected = g.is_connected();
    let bound = if connected || a.mixing {
        let spec = spec.as_ref().ok_or_else(|| fail(1, "graph has an isolated face"))?;
        let pi0 = Distribution::point(g.len(), start_idx.unwrap_or(0));
        Some(verify_mixing_bound(&g, &pi0, a.steps, spec.mixing_lambda(), a.tolerance)?)
    } else {
        None
    };

    // simulation
    let sim = if a.simulate > 0 || a.trajectory.is_some() {
        let n = a.simulate.max(1);
        let pi = stationary(&g);
        let weights: Vec<u64> = (0..g.len()).map(|v| g.degree(v)).collect();
        let pick = WeightedIndex::new(&weights).map_err(|e| fail(1, e.to_string()))?;
        let trajs: Vec<Trajectory> = (0..n)
            .into_par_iter()
            .map(|k| {
                let s = match start_idx {
                    Some(s) => s,
                    // start draws use streams disjoint from the walk streams
                    None => pick.sample(&mut stream_rng(a.seed, u64::MAX - k)),
                };
                Trajectory::simulate(&x, i, x.face(i, s), a.steps, a.seed, k)
            })
            .collect::<Result<_, HdxError>>()?;
        if let Some(p) = &a.trajectory {
            std::fs::write(p, trajs[0].to_text())?;
        }
        let mut counts = vec![0u64; g.len()];
        for t in &trajs {
            let last = x.face_from_labels(t.faces.last().expect("nonempty"))?;
            counts[x.index_of(&last).expect("walk stays in X")] += 1;
        }
        let mut exact = match start_idx {
            Some(s) => Distribution::point(g.len(), s),
            None => pi,
        };
        for _ in 0..a.steps {
            exact = transition_step(&g, &exact)?;
        }
        Some((n, counts, exact))
    } else {
        None
    };

    if a.json {
        let mut out = json!({
            "version": certify::version(),
            "config": cfg.to_value(),
            "level": i,
            "lazy": a.lazy,
            "faces": names,
            "rows": rows.iter().map(|(s, d)| json!({"from": names[*s], "distribution": dist_strings(d)})).collect::<Vec<_>>(),
        });
        if let (Some(b), Some(spec)) = (&bound, &spec) {
            out["mixing"] = json!({
                "lambda_2": spec.lambda_2().map(round_sig12),
                "lambda_min": round_sig12(spec.lambda_min()),
                "lambda": round_sig12(b.lambda),
                "degree_ratio_sqrt": round_sig12(b.degree_ratio_sqrt),
                "allowance": b.allowance,
                "rows": b.rows.iter().map(|r| json!({
                    "t": r.t,
                    "distance": round_sig12(r.distance),
                    "bound": round_sig12(r.bound),
                    "margin": round_sig12(r.margin),
                })).collect::<Vec<_>>(),
            });
        }
        if let Some((n, counts, exact)) = &sim {
            out["simulation"] = json!({
                "trajectories": n,
                "counts": counts,
                "exact": dist_strings(exact),
            });
        }
        emit(&pretty(&out));
        return Ok(());
    }
    let mut s = cfg.text_header();
    writeln!(s, "level {i}{}, {} faces, t = {}", if a.lazy { " (lazy)" } else { "" }, g.len(), a.steps).unwrap();
    writeln!(s, "from\\to\t{}", names.join("\t")).unwrap();
    for (from, d) in &rows {
        writeln!(s, "{}\t{}", names[*from], dist_strings(d).join("\t")).unwrap();
    }
    match (&bound, &spec) {
        (Some(b), Some(spec)) => {
            writeln!(s, "\nmixing bound from {}", names[start_idx.unwrap_or(0)]).unwrap();
            if let Some(l2) = spec.lambda_2() {
                writeln!(s, "lambda_2 = {}", round_sig12(l2)).unwrap();
            }
            writeln!(s, "lambda_min = {}", round_sig12(spec.lambda_min())).unwrap();
            writeln!(s, "lambda = {}  sqrt(dmax/dmin) = {}", round_sig12(b.lambda), round_sig12(b.degree_ratio_sqrt)).unwrap();
            writeln!(s, "t\tdistance\tbound\tmargin").unwrap();
            for r in &b.rows {
                writeln!(s, "{}\t{:.12}\t{:.12}\t{:.12}", r.t, r.distance, r.bound, r.margin).unwrap();
            }
        }
        _ => writeln!(s, "\nmixing bound skipped: G_{i} is disconnected").unwrap(),
    }
    if let Some((n, counts, exact)) = &sim {
        writeln!(s, "\n{n} simulated trajectories, final face").unwrap();
        writeln!(s, "face\texact\tempirical\tz").unwrap();
        for v in 0..g.len() {
            let p = to_f64(&exact.values()[v]);
            let emp = counts[v] as f64 / *n as f64;
            let sd = (p * (1.0 - p) / *n as f64).sqrt();
            let z = if sd > 0.0 { (emp - p) / sd } else { 0.0 };
            writeln!(s, "{}\t{}\t{:.6}\t{:.3}", names[v], format_pq(&exact.values()[v]), emp, z).unwrap();
        }
    }
    emit(&s);
    Ok(())
}

fn parse_corruption(spec: &str) -> Result<(isize, usize, i64), Failure> {
    let parts: Vec<&str> = spec.split(':').collect();
    let bad = || fail(1, format!("expected LEVEL:INDEX:DELTA, got `{spec}`"));
    if parts.len() != 3 {
        return Err(bad());
    }
    Ok((
        parts[0].parse().map_err(|_| bad())?,
        parts[1].parse().map_err(|_| bad())?,
        parts[2].parse().map_err(|_| bad())?,
    ))
}

pub fn verify(input: &Path, trials: u64, seed: u64, caps: &CapArgs, json: bool, corrupt: Option<&str>) -> Result<(), Failure> {
    let mut x = read_cplx(input)?;
    if let Some(c) = corrupt {
        let (i, idx, delta) = parse_corruption(c)?;
        x.check_level(i)?;
        if idx >= x.num_faces(i) {
            return Err(fail(1, format!("face index {idx} out of range at level {i}")));
        }
        x.corrupt_degree_for_testing(i, idx, delta);
    }
    x.validate()?;
    let caps = caps_of(caps);
    let mut cfg = RunConfig::new("verify");
    cfg.input = Some(path_string(input));
    cfg.seed = seed;
    cfg.caps = caps;
    cfg.trials = Some(trials);
    let opts = CertifyOptions {
        mode: Mode::Exact,
        caps,
        checks: true,
        skeleton_mixing: false,
    };
    let cert = certify::certify(&x, &opts, cfg.to_value())?;

    let mut rng = stream_rng(seed, 0);
    let d = x.dim();
    let mut passed = 0u64;
    let mut hypothesis = 0u64;
    let mut violation = None;
    for k in 0..trials {
        let i = rng.random_range(0..d as i64) as isize;
        let n = x.num_faces(i);
        let size = rng.random_range(0..=n);
        let w = Cochain::from_indices(i, sample(&mut rng, n, size));
        let eta = rat(rng.random_range(1..64), 64);
        let c = rat(rng.random_range(0..=64), 128);
        match certify::verify_proof_trace_with_alpha(&x, &w, &eta, &c, &cert.alpha.0) {
            Ok(r) => {
                passed += 1;
                hypothesis += r.good_dimension.hypothesis as u64;
            }
            Err(HdxError::BoundViolated { check, detail }) => {
                violation = Some(format!(
                    "proof trace instance {k} (W = {{{}}}, eta = {}, c = {}): {check}: {detail}",
                    w.display(&x).join(" "),
                    format_pq(&eta),
                    format_pq(&c)
                ));
                break;
            }
            Err(e) => return Err(e.into()),
        }
    }

    if json {
        emit(&pretty(&json!({
            "version": certify::version(),
            "config": cfg.to_value(),
            "alpha": cert.alpha,
            "epsilon": cert.epsilon,
            "checks": cert.checks,
            "proof_trace": {
                "instances": trials,
                "passed": passed,
                "small_norm_instances": hypothesis,
                "violation": violation,
            },
        })));
    } else {
        let mut s = cfg.text_header();
        writeln!(s, "alpha = {}  epsilon = {}", cert.alpha, cert.epsilon).unwrap();
        for c in &cert.checks {
            writeln!(s, "[{}] {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail).unwrap();
        }
        writeln!(
            s,
            "[{}] proof trace: {passed}/{trials} instances ({hypothesis} below the norm threshold)",
            if violation.is_none() { "PASS" } else { "FAIL" }
        )
        .unwrap();
        if let Some(v) = &violation {
            writeln!(s, "{v}").unwrap();
        }
        emit(&s);
    }
    if let Some(c) = cert.checks.iter().find(|c| !c.passed) {
        return Err(fail(4, format!("{} failed: {}", c.name, c.detail)));
    }
    match violation {
        Some(v) => Err(fail(4, v)),
        None => Ok(()),
    }
}

pub fn generate(kind: &GenerateKind, output: Option<&Path>) -> Result<(), Failure> {
    let (x, what) = match kind {
        GenerateKind::Complete { n, dim } => (complete_complex(*n, *dim)?, format!("complete n={n} dim={dim}")),
        GenerateKind::Multipartite { parts } => (
            complete_multipartite_complex(parts)?,
            format!("multipartite parts={}", parts.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(",")),
        ),
        GenerateKind::Random { n, dim, p, seed } => (random_lm_complex(*n, *dim, *p, *seed)?, format!("random n={n} dim={dim} p={p} seed={seed}")),
    };
    let text = format!("# {} generate {what}\n{}", certify::version(), write_cplx(&x));
    match output {
        Some(o) => std::fs::write(o, text)?,
        None => emit(&text),
    }
    Ok(())
}

fn level_graph(x: &SimplicialComplex, i: isize, lazy: bool) -> Result<IGraph, HdxError> {
    let g = build_igraph(x, i)?;
    Ok(if lazy { lazy_igraph(&g) } else { g })
}

pub fn report(input: &Path, dim: Option<isize>, lazy: bool, json: bool) -> Result<(), Failure> {
    let x = load(input)?;
    let mut cfg = RunConfig::new("report");
    cfg.input = Some(path_string(input));
    cfg.level = dim;
    if lazy {
        cfg.flags.push("lazy");
    }
    let levels: Vec<isize> = match dim {
        Some(i) => vec![i],
        None => (0..x.dim()).collect(),
    };
    let spectra = levels
        .iter()
        .map(|&i| graph_spectrum(&level_graph(&x, i, lazy)?))
        .collect::<Result<Vec<_>, HdxError>>()?;
    if json {
        emit(&pretty(&json!({
            "version": certify::version(),
            "config": cfg.to_value(),
            "lazy": lazy,
            "levels": levels.iter().zip(&spectra).map(|(i, s)| {
                let mut v = s.to_json();
                v["level"] = json!(i);
                v
            }).collect::<Vec<_>>(),
        })));
    } else {
        let mut s = cfg.text_header();
        for (i, spec) in levels.iter().zip(&spectra) {
            writeln!(s, "# level {i}{}", if lazy { " (lazy)" } else { "" }).unwrap();
            s.push_str(&spec.to_text());
        }
        emit(&s);
    }
    Ok(())
}
