use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use igci::io::write_pair;
use igci::simulation::{apply_mechanism, sample_input, InputDist, InputKind, Mechanism};
use igci::SamplePair;

fn igci(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_igci"))
        .args(args)
        .env_remove("IGCI_SEED")
        .output()
        .expect("running igci")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn cube_pair(dir: &Path, name: &str, seed: u64) -> String {
    let x = sample_input(&InputDist::standard(InputKind::Uniform), 500, seed).unwrap();
    let y = apply_mechanism(&Mechanism::Cube, &x);
    let path = dir.join(name);
    write_pair(
        fs::File::create(&path).unwrap(),
        &SamplePair::new(x, y).unwrap(),
    )
    .unwrap();
    path.to_string_lossy().into_owned()
}

#[test]
fn infer_emits_one_record() {
    let dir = tempfile::tempdir().unwrap();
    let path = cube_pair(dir.path(), "cube.txt", 1);
    let o = igci(&["infer", &path]);
    assert!(o.status.success(), "{o:?}");
    let rec: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!(rec["id"], "cube.txt");
    assert_eq!(rec["direction"], "x->y");
    assert_eq!(rec["estimator"], "entropy");
    assert_eq!(rec["reference"], "uniform");
    assert_eq!(
        rec["c_xy"].as_f64().unwrap(),
        -rec["c_yx"].as_f64().unwrap()
    );

    let o = igci(&[
        "infer", &path, "--x-col", "1", "--y-col", "0", "--format", "tsv", "--id", "rev",
    ]);
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(
        lines[0],
        "id\tc_xy\tc_yx\tdirection\testimator\treference\tm_used"
    );
    assert!(lines[1].starts_with("rev\t"));
    assert!(lines[1].contains("\ty->x\t"));
}

#[test]
fn exit_codes() {
    assert_eq!(igci(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(igci(&["infer"]).status.code(), Some(1));
    assert_eq!(
        igci(&["infer", "x.txt", "--reference", "isotropic"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(igci(&["--help"]).status.code(), Some(0));

    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("missing.txt");
    assert_eq!(
        igci(&["infer", missing.to_str().unwrap()]).status.code(),
        Some(2)
    );
    let flat = dir.path().join("flat.txt");
    fs::write(&flat, "1 1\n1 2\n1 3\n").unwrap();
    let o = igci(&["infer", flat.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(!o.stderr.is_empty());

    let collinear = dir.path().join("collinear.txt");
    let rows: String = (0..50)
        .map(|i| format!("{i} {} {} {}\n", 2 * i, i * i, 3 * i))
        .collect();
    fs::write(&collinear, rows).unwrap();
    let o = igci(&[
        "tracedir",
        collinear.to_str().unwrap(),
        "--x-cols",
        "0,1",
        "--y-cols",
        "2,3",
    ]);
    assert_eq!(o.status.code(), Some(3), "{o:?}");

    assert_eq!(
        igci(&["simulate", "--noise", "normal", "--lambda", "0"])
            .status
            .code(),
        Some(1)
    );
}

#[test]
fn pairs_reports_entries_in_manifest_order() {
    let dir = tempfile::tempdir().unwrap();
    cube_pair(dir.path(), "a.txt", 2);
    cube_pair(dir.path(), "b.txt", 3);
    let manifest = dir.path().join("pairs.csv");
    fs::write(
        &manifest,
        "id,path,x_col,y_col,truth,weight\nb,b.txt,1,0,y->x,2\na,a.txt,0,1,x->y\n",
    )
    .unwrap();
    let o = igci(&["pairs", manifest.to_str().unwrap()]);
    assert!(o.status.success(), "{o:?}");
    let recs: Vec<serde_json::Value> = stdout(&o)
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert_eq!(recs.len(), 2);
    assert_eq!(recs[0]["id"], "b");
    assert_eq!(recs[0]["correct"], true);
    assert_eq!(recs[0]["weight"], 2.0);
    assert_eq!(recs[1]["id"], "a");

    let o = igci(&["pairs", manifest.to_str().unwrap(), "--summary"]);
    let s: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!(s["entries"], 2);
    assert_eq!(s["decisions_pct"], 100.0);
    assert_eq!(s["accuracy_pct"], 100.0);

    let empty = dir.path().join("empty.csv");
    fs::write(&empty, "# nothing here\n").unwrap();
    assert_eq!(
        igci(&["pairs", empty.to_str().unwrap()]).status.code(),
        Some(2)
    );
}

#[test]
fn simulate_is_seeded() {
    let args = [
        "simulate", "-m", "200", "--reps", "3", "--noise", "laplace", "--lambda", "0.05",
    ];
    let a = igci(&[&args[..], &["--seed", "5"]].concat());
    let b = igci(&[&args[..], &["--seed", "5"]].concat());
    let c = igci(&[&args[..], &["--seed", "6"]].concat());
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert_ne!(a.stdout, c.stdout);
    assert_eq!(stdout(&a).lines().count(), 25);

    let env = Command::new(env!("CARGO_BIN_EXE_igci"))
        .args(args)
        .env("IGCI_SEED", "5")
        .output()
        .unwrap();
    assert_eq!(env.stdout, a.stdout);
}

#[test]
fn simulate_sine_rows() {
    let o = igci(&[
        "simulate", "--sine", "-m", "300", "--reps", "4", "--format", "tsv",
    ]);
    assert!(o.status.success());
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "dist\tcorrect\twrong\tundecided\taccuracy_pct");
    assert_eq!(lines.len(), 6);
    assert!(lines[1].starts_with("N(0,1^2)\t"));
}

#[test]
fn tracedir_finds_direction() {
    use rand::{Rng, SeedableRng};
    use rand_distr::StandardNormal;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
    let d = 6;
    let a: Vec<f64> = (0..d * d).map(|_| rng.sample(StandardNormal)).collect();
    let scales: Vec<f64> = (0..d).map(|_| 0.2 + rng.random::<f64>()).collect();
    let mut rows = String::new();
    for _ in 0..4000 {
        let x: Vec<f64> = scales
            .iter()
            .map(|s| s * rng.sample::<f64, _>(StandardNormal))
            .collect();
        let y: Vec<f64> = (0..d)
            .map(|i| (0..d).map(|j| a[i * d + j] * x[j]).sum())
            .collect();
        let fields: Vec<String> = x.iter().chain(&y).map(|v| format!("{v:e}")).collect();
        rows.push_str(&fields.join(","));
        rows.push('\n');
    }
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("lin.csv");
    fs::write(&path, rows).unwrap();
    let o = igci(&[
        "tracedir",
        path.to_str().unwrap(),
        "--x-cols",
        "0,1,2,3,4,5",
        "--y-cols",
        "6,7,8,9,10,11",
    ]);
    assert!(o.status.success(), "{o:?}");
    let r: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!(r["dim"], 6);
    assert_eq!(r["rows"], 4000);
    assert_eq!(r["poor_fit"], false);
    assert!(
        r["delta_xy"].as_f64().unwrap().abs() < r["delta_yx"].as_f64().unwrap().abs(),
        "{r}"
    );
    assert_eq!(r["direction"], "x->y");
}

#[test]
fn align_recovers_shift() {
    let mut walk = 0.0f64;
    let a: Vec<f64> = (0..400)
        .map(|i| {
            walk += ((i * 7919) % 13) as f64 - 6.0;
            walk
        })
        .collect();
    let b: Vec<f64> = (0..400)
        .map(|t| if t >= 7 { 0.5 * a[t - 7] + 1.0 } else { 0.0 })
        .collect();
    let rows: String = a
        .iter()
        .zip(&b)
        .map(|(x, y)| format!("{x} {y}\n"))
        .collect();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("ts.txt");
    fs::write(&path, rows).unwrap();
    let o = igci(&["align", path.to_str().unwrap(), "--infer"]);
    assert!(o.status.success(), "{o:?}");
    let r: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!(r["lag"], 7);
    assert!(r["correlation"].as_f64().unwrap() > 0.999);
    assert_eq!(r["overlap_length"], 393);
    assert_eq!(r["low_correlation"], false);
    assert!(r["decision"]["c_xy"].is_number());
}

#[test]
fn verify_subcommands() {
    let o = igci(&["verify", "divergence", "--trials", "200", "--support", "7"]);
    let r: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!(r["passed"], true);
    assert_eq!(r["trials"], 200);

    let o = igci(&[
        "verify",
        "noise-bound",
        "--input",
        "gaussian",
        "-m",
        "20000",
        "--sigmas",
        "0.1,1",
    ]);
    assert!(o.status.success(), "{o:?}");
    let recs: Vec<serde_json::Value> = stdout(&o)
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert_eq!(recs.len(), 2);
    assert!(recs.iter().all(|r| r["holds"] == true));
    assert_eq!(
        igci(&["verify", "noise-bound", "-m", "10"]).status.code(),
        Some(2)
    );
}
