use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "fixtures", name].iter().collect();
    p.to_str().unwrap().to_string()
}

fn hdx(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hdx"))
        .args(args)
        .env_remove("HDX_THREADS")
        .output()
        .expect("run hdx")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", stdout(o)))
}

#[test]
fn certify_triangle() {
    let o = hdx(&["certify", &fixture("triangle.cplx"), "--all", "--json"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v = json(&o);
    assert_eq!(v["alpha"], "0/1");
    assert_eq!(v["epsilon"], "2/1");
    assert_eq!(v["conductance"], serde_json::json!(["1/1", "1/1"]));
    assert_eq!(v["bipartiteness"][1], "1/3");
    assert_eq!(v["config"]["command"], "certify");
    assert!(v["version"].as_str().unwrap().starts_with("hdx-walks "));
    assert!(v["checks"].as_array().unwrap().iter().all(|c| c["passed"] == true));
}

#[test]
fn certificate_file_matches_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("cert.json");
    let o = hdx(&["certify", &fixture("twotri.cplx"), "-o", out.to_str().unwrap(), "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let file = std::fs::read(&out).unwrap();
    assert_eq!(file, o.stdout);
    hdx_walks::certify::ExpansionCertificate::from_json(std::str::from_utf8(&file).unwrap()).unwrap();
}

#[test]
fn exact_cap_exceeded() {
    let dir = tempfile::tempdir().unwrap();
    let big = dir.path().join("big.cplx");
    // K_{3,3,3}-style complex with 27 edges
    let o = hdx(&["generate", "multipartite", "--parts", "3,3,3", "-o", big.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let o = hdx(&["certify", big.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("cap is 20"), "{}", stderr(&o));
    let o = hdx(&["certify", big.to_str().unwrap(), "--sampled", "--trials", "20", "--json"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(json(&o)["flags"]["epsilon"], "sampled");
}

#[test]
fn skeleton_mixing_on_octahedron() {
    let o = hdx(&["certify", &fixture("octahedron.cplx"), "--skeleton-mixing"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("[PASS] skeleton mixing: λ̃₂ = 0 "), "{}", stdout(&o));
    let o = hdx(&["certify", &fixture("fan.cplx"), "--skeleton-mixing"]);
    assert_eq!(o.status.code(), Some(4));
}

#[test]
fn walk_rows() {
    let o = hdx(&["walk", &fixture("twotri.cplx"), "--dim", "1", "--steps", "1", "--start", "ac", "--json"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v = json(&o);
    assert_eq!(v["faces"], serde_json::json!(["a,b", "a,c", "a,d", "b,c", "c,d"]));
    assert_eq!(v["rows"][0]["distribution"], serde_json::json!(["1/4", "0/1", "1/4", "1/4", "1/4"]));

    let o = hdx(&["walk", &fixture("triangle.cplx"), "--dim", "1", "--steps", "3", "--json"]);
    let v = json(&o);
    for row in v["rows"].as_array().unwrap() {
        let sum: hdx_walks::Rational = row["distribution"]
            .as_array()
            .unwrap()
            .iter()
            .map(|p| hdx_walks::rational::parse_pq(p.as_str().unwrap()).unwrap())
            .sum();
        assert_eq!(sum, hdx_walks::rational::rat(1, 1));
    }
}

#[test]
fn lazy_bound_table() {
    let o = hdx(&["walk", &fixture("triangle.cplx"), "--dim", "0", "--lazy", "--steps", "10"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("lambda_2 = 0.25\n"), "{text}");
    let table: Vec<&str> = text.lines().skip_while(|l| !l.starts_with("t\tdistance")).skip(1).collect();
    assert_eq!(table.len(), 11);
}

#[test]
fn walk_errors() {
    let o = hdx(&["walk", &fixture("bowtie.cplx"), "--dim", "1", "--mixing"]);
    assert_eq!(o.status.code(), Some(5));
    let o = hdx(&["walk", &fixture("bowtie.cplx"), "--dim", "1", "--steps", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("mixing bound skipped"));
    let o = hdx(&["walk", &fixture("triangle.cplx"), "--dim", "2"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn verify_fixtures() {
    for f in ["triangle.cplx", "octahedron.cplx", "twotri.cplx", "tetra.cplx"] {
        let o = hdx(&["verify", &fixture(f), "--trials", "100", "--seed", "1"]);
        assert_eq!(o.status.code(), Some(0), "{f}: {}{}", stdout(&o), stderr(&o));
        assert!(stdout(&o).contains("proof trace: 100/100"));
    }
}

#[test]
fn verify_catches_corrupted_degrees() {
    let o = hdx(&["verify", &fixture("triangle.cplx"), "--corrupt-degree", "1:0:1"]);
    assert_eq!(o.status.code(), Some(4));
    assert!(stderr(&o).contains("degree"));
}

#[test]
fn parse_errors() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.cplx");
    std::fs::write(&bad, "a b c\na b\n").unwrap();
    for cmd in ["build", "certify", "verify", "report"] {
        let o = hdx(&[cmd, bad.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(2), "{cmd}");
        assert!(stderr(&o).contains("line 2"));
    }
    let o = hdx(&["build", dir.path().join("missing.cplx").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn report_spectrum() {
    let o = hdx(&["report", &fixture("triangle.cplx"), "--dim", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("λ[1] = 1\nλ[2] = -0.5\nλ[3] = -0.5\nresidual = "), "{text}");
    let o = hdx(&["report", &fixture("triangle.cplx"), "--json"]);
    assert_eq!(json(&o)["levels"].as_array().unwrap().len(), 2);
}

#[test]
fn build_and_generate() {
    let o = hdx(&["build", &fixture("twotri.cplx"), "--json"]);
    assert_eq!(json(&o)["f_vector"], serde_json::json!([1, 4, 5, 2]));
    let dir = tempfile::tempdir().unwrap();
    let gen = dir.path().join("oct.cplx");
    hdx(&["generate", "multipartite", "--parts", "2,2,2", "-o", gen.to_str().unwrap()]);
    let a = hdx_walks::cplx::read_cplx(&gen).unwrap();
    let b = hdx_walks::cplx::read_cplx(std::path::Path::new(&fixture("octahedron.cplx"))).unwrap();
    assert_eq!(a, b);
    let o = hdx(&["generate", "random", "--n", "6", "--dim", "2", "--p", "0.5", "--seed", "4"]);
    assert_eq!(o.status.code(), Some(0));
    hdx_walks::cplx::parse_cplx(&o.stdout).unwrap();
}

#[test]
fn byte_identical_reruns() {
    let dir = tempfile::tempdir().unwrap();
    let runs: Vec<Vec<&str>> = vec![
        vec!["certify", "--all", "--json"],
        vec!["verify", "--trials", "50", "--seed", "7", "--json"],
        vec!["walk", "--dim", "1", "--steps", "8", "--seed", "5", "--simulate", "300"],
    ];
    for f in ["twotri.cplx", "octahedron.cplx"] {
        for args in &runs {
            let mut full: Vec<String> = vec![args[0].to_string(), fixture(f)];
            full.extend(args[1..].iter().map(|s| s.to_string()));
            let refs: Vec<&str> = full.iter().map(String::as_str).collect();
            let a = hdx(&refs);
            let mut threaded = vec!["--threads", "1"];
            threaded.extend(&refs);
            let b = hdx(&threaded);
            assert_eq!(a.status.code(), Some(0), "{refs:?}");
            assert_eq!(a.stdout, b.stdout, "{refs:?}");
        }
        let t1 = dir.path().join("t1.txt");
        let t2 = dir.path().join("t2.txt");
        for t in [&t1, &t2] {
            hdx(&["walk", &fixture(f), "--dim", "0", "--steps", "40", "--seed", "11", "--trajectory", t.to_str().unwrap()]);
        }
        let (a, b) = (std::fs::read(&t1).unwrap(), std::fs::read(&t2).unwrap());
        assert_eq!(a, b);
        let parsed = hdx_walks::trajectory::parse_trajectory(&a).unwrap();
        assert_eq!((parsed.level, parsed.seed, parsed.steps), (0, 11, 40));
    }
}
