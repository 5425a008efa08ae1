use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

fn run(out: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kgfint"))
        .args(args)
        .env("KGFINT_OUT_DIR", out)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

#[test]
fn validate_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let ok = run(dir.path(), &["validate", fixture("e2r.json").to_str().unwrap()]);
    assert_eq!(code(&ok), 0);
    let bad = run(dir.path(), &["validate", fixture("malformed.json").to_str().unwrap()]);
    assert_eq!(code(&bad), 2);
    assert!(String::from_utf8_lossy(&bad.stderr).contains("malformed"));
    let jac = run(dir.path(), &["validate", fixture("jacobi_bad.json").to_str().unwrap()]);
    assert_eq!(code(&jac), 1);
    assert!(stdout(&jac).contains("jacobi violated at (1, 2, 3,"));
    let missing = run(dir.path(), &["validate", "no/such/file.json"]);
    assert_eq!(code(&missing), 2);
}

#[test]
fn index_verdicts() {
    let dir = tempfile::tempdir().unwrap();
    let e2r = fixture("e2r.json");
    let a = run(dir.path(), &["index", e2r.to_str().unwrap(), "--mu", "1,0,0,0"]);
    assert_eq!(code(&a), 0);
    assert!(stdout(&a).contains("index=2 qdim=1 integrable=true"));
    let b = run(dir.path(), &["index", e2r.to_str().unwrap(), "--mu", "1,1,0,0"]);
    assert_eq!(code(&b), 0);
    assert!(stdout(&b).contains("index=0 qdim=2 integrable=false"));
    let c = run(
        dir.path(),
        &["index", e2r.to_str().unwrap(), "--cocycle", fixture("e12_e34.json").to_str().unwrap()],
    );
    assert!(stdout(&c).contains("index=0 qdim=2"));
    let d = run(dir.path(), &["index", fixture("so3.json").to_str().unwrap(), "--mu", "1,0,0,0"]);
    assert_eq!(code(&d), 2);
    let e = run(dir.path(), &["index", e2r.to_str().unwrap(), "--mu", "1,0,0"]);
    assert_eq!(code(&e), 2);
}

#[test]
fn cohomology_reports() {
    let dir = tempfile::tempdir().unwrap();
    let so3 = run(dir.path(), &["cohomology", fixture("so3.json").to_str().unwrap()]);
    assert!(stdout(&so3).contains("h_dim=0"));
    let sl2 = run(dir.path(), &["cohomology", fixture("sl2r.json").to_str().unwrap()]);
    assert!(stdout(&sl2).contains("h_dim=0"));
    let e2r = run(dir.path(), &["cohomology", fixture("e2r.json").to_str().unwrap()]);
    assert!(stdout(&e2r).contains("z_dim=4 b_dim=2 h_dim=2"));
    let heis = run(dir.path(), &["cohomology", fixture("heisenberg.json").to_str().unwrap()]);
    assert!(stdout(&heis).contains("h_dim=2"));
    let ab = run(dir.path(), &["cohomology", fixture("abelian3.json").to_str().unwrap()]);
    assert!(stdout(&ab).contains("z_dim=3 b_dim=0 h_dim=3"));
    let report = fs::read_to_string(dir.path().join("cohomology.json")).unwrap();
    assert!(report.contains("\"seed\""));
}

#[test]
fn extend_checks_cocycle() {
    let dir = tempfile::tempdir().unwrap();
    let e2r = fixture("e2r.json");
    let ok = run(
        dir.path(),
        &["extend", e2r.to_str().unwrap(), "--cocycle", fixture("e12.json").to_str().unwrap()],
    );
    assert_eq!(code(&ok), 0);
    assert!(stdout(&ok).contains("[e1, e2] = e0"));
    let bad = run(
        dir.path(),
        &["extend", e2r.to_str().unwrap(), "--cocycle", fixture("e14.json").to_str().unwrap()],
    );
    assert_eq!(code(&bad), 1);
}

#[test]
fn verify_example_passes() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(
        dir.path(),
        &["verify-example", "--eps", "1", "--vareps", "2", "--model", fixture("e2r_model.json").to_str().unwrap()],
    );
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert!(stdout(&o).contains("all checks passed"));
    let generic = run(dir.path(), &["verify-example", "--mu", "1,1,1,1"]);
    assert_eq!(code(&generic), 0, "{}", stdout(&generic));
    let half = run(dir.path(), &["verify-example", "--J1", "1/2"]);
    assert_eq!(code(&half), 2);
}

#[test]
fn reduce_free_case() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["reduce", "--eps", "0"]);
    assert_eq!(code(&o), 0);
    let s = stdout(&o);
    assert!(s.contains("free case"));
    assert!(s.contains("resolved_match=true"));
    let report = fs::read_to_string(dir.path().join("reduce.json")).unwrap();
    assert!(report.contains("\"free_case\": true"));
    let o = run(dir.path(), &["reduce", "--mu", "1,1,0,0"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn solve_writes_csv_with_small_residuals() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(
        dir.path(),
        &["solve", "--J1", "1", "--J2", "0.5", "--m", "1", "--z0", "0.1", "--z1", "0.9"],
    );
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let csv = fs::read_to_string(dir.path().join("solve.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next().unwrap(), "z,re_theta,im_theta,re_dtheta,im_dtheta,residual");
    let mut n = 0;
    for l in lines {
        let r: f64 = l.rsplit(',').next().unwrap().parse().unwrap();
        assert!(r < 1e-8);
        n += 1;
    }
    assert_eq!(n, 81);
    let singular = run(dir.path(), &["solve", "--z1", "0.99"]);
    assert_eq!(code(&singular), 2);
}

#[test]
fn sweep_writes_one_file_per_task() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["sweep", "--eps-values", "1,2", "--vareps-values", "2,3,5/2"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    let files = fs::read_dir(dir.path().join("sweep")).unwrap().count();
    assert_eq!(files, 6);
}

#[test]
fn reports_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let e2r = fixture("e2r.json");
    let cmds: [&[&str]; 4] = [
        &["index", e2r.to_str().unwrap(), "--mu", "1,0,0,0"],
        &["verify-example"],
        &["solve"],
        &["reduce"],
    ];
    for args in cmds {
        run(dir.path(), args);
        let name = format!("{}.json", args[0]);
        let first = fs::read(dir.path().join(&name)).unwrap();
        run(dir.path(), args);
        let second = fs::read(dir.path().join(&name)).unwrap();
        assert_eq!(first, second, "{name}");
    }
    let seq = tempfile::tempdir().unwrap();
    let par = run(dir.path(), &["solve"]);
    assert_eq!(code(&par), 0);
    run(seq.path(), &["solve", "--sequential"]);
    assert_eq!(
        fs::read(dir.path().join("solve.csv")).unwrap(),
        fs::read(seq.path().join("solve.csv")).unwrap()
    );
}

#[test]
fn out_dir_flag_overrides_env() {
    let env_dir = tempfile::tempdir().unwrap();
    let flag_dir = tempfile::tempdir().unwrap();
    let o = run(
        env_dir.path(),
        &["validate", fixture("so3.json").to_str().unwrap(), "--out-dir", flag_dir.path().to_str().unwrap()],
    );
    assert_eq!(code(&o), 0);
    assert!(flag_dir.path().join("validate.json").exists());
    assert!(!env_dir.path().join("validate.json").exists());
}
