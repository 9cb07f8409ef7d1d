use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use triscale::experiments::{
    format_matrix, gen_paper_matrix, read_matrix, read_records, write_matrix,
};
use triscale::UpperTriangular;

fn triscale(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_triscale"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn write(dir: &Path, name: &str, t: &UpperTriangular) -> String {
    let p = dir.join(name);
    write_matrix(t, &p).unwrap();
    p.to_string_lossy().into_owned()
}

#[test]
fn scale_and_inverse_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let t =
        UpperTriangular::from_real_rows(&[&[1.0, 1.0, 1.0], &[0.0, 3.0, 2.5], &[0.0, 0.0, 6.0]])
            .unwrap();
    let input = write(dir.path(), "t.txt", &t);
    let scaled = dir.path().join("s.txt").to_string_lossy().into_owned();
    let back = dir.path().join("b.txt").to_string_lossy().into_owned();

    let o = triscale(&[
        "scale", "--input", &input, "--alpha", "2", "--output", &scaled,
    ]);
    assert!(o.status.success());
    let s = read_matrix(&scaled).unwrap();
    assert_eq!(s.get(0, 2).re, 0.25);
    assert_eq!(s.get(1, 2).re, 1.25);

    let o = triscale(&[
        "scale",
        "--input",
        &scaled,
        "--alpha",
        "2",
        "--inverse",
        "--output",
        &back,
    ]);
    assert!(o.status.success());
    assert_eq!(read_matrix(&back).unwrap(), t);

    let o = triscale(&[
        "scale", "--input", &input, "--alpha", "4", "--m", "2", "--output", &scaled,
    ]);
    assert!(o.status.success());
}

#[test]
fn plan_for_eq4() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "eq4.txt", &gen_paper_matrix("eq4").unwrap());
    let o = triscale(&["plan", "--input", &input]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.contains("alpha=3e4"), "{out}");
    assert!(out.contains("m=4"));
    assert!(out.contains("block_sizes=1,1,1,1"));
}

#[test]
fn fn_exp_both_modes_and_output() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "eq3.txt", &gen_paper_matrix("eq3").unwrap());
    let output = dir.path().join("f.txt").to_string_lossy().into_owned();
    let o = triscale(&["fn", "exp", "--input", &input, "--output", &output]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let out = stdout(&o);
    assert!(out.contains("direct  count_s=20"), "{out}");
    assert!(out.contains("scaled  count_s=1"), "{out}");
    let f = read_matrix(&output).unwrap();
    assert!((f.get(0, 0).re - 1f64.exp()).abs() < 1e-14);

    let o = triscale(&["fn", "log", "--input", &input, "--mode", "direct"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn cond_and_verify() {
    let dir = tempfile::tempdir().unwrap();
    let t =
        UpperTriangular::from_real_rows(&[&[1.2, 3.0, -1.0], &[0.0, 0.8, 2.0], &[0.0, 0.0, 1.5]])
            .unwrap();
    let input = write(dir.path(), "t.txt", &t);
    let o = triscale(&["cond", "--fn", "log", "--input", &input]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("cond_rel="));
    let o = triscale(&["verify", "--fn", "exp", "--input", &input, "--alpha", "10"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("violations          0"));
}

#[test]
fn cond_cap() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "i.txt", &UpperTriangular::identity(21));
    let o = triscale(&["cond", "--fn", "exp", "--input", &input]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn input_errors_exit_1() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.txt");
    fs::write(&bad, "2\n(1,0) (1,0)\n(1,0) (1,0)\n").unwrap();
    let o = triscale(&["plan", "--input", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 3"));

    let o = triscale(&["plan", "--input", "/nonexistent/x.txt"]);
    assert_eq!(o.status.code(), Some(1));
    let o = triscale(&["frobnicate"]);
    assert_eq!(o.status.code(), Some(1));
    let o = triscale(&["--help"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn bench_writes_csv_and_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let extra = dir.path().join("t3.txt");
    fs::write(&extra, format_matrix(&gen_paper_matrix("eq4").unwrap())).unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for out in [&a, &b] {
        let o = triscale(&[
            "bench",
            "--experiment",
            "exp1-log",
            "--sizes",
            "4:2:8",
            "--seed",
            "7",
            "--input",
            extra.to_str().unwrap(),
            "--out",
            out.to_str().unwrap(),
        ]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    }
    let ra = read_records(fs::File::open(&a).unwrap()).unwrap();
    let rb = read_records(fs::File::open(&b).unwrap()).unwrap();
    assert_eq!(ra.len(), 2 + 3 + 1);
    assert_eq!(ra.last().unwrap().matrix_id, "file:t3");
    for (x, y) in ra.iter().zip(&rb) {
        let mut x = x.clone();
        x.runtime_direct_ms = y.runtime_direct_ms;
        x.runtime_scaled_ms = y.runtime_scaled_ms;
        assert_eq!(&x, y);
    }
    let text = fs::read_to_string(&a).unwrap();
    assert!(text.starts_with(
        "matrix_id,n,ratio,alpha,m,s_direct,s_scaled,err_direct,err_scaled,oracle,runtime_direct_ms,runtime_scaled_ms"
    ));

    let o = triscale(&[
        "bench",
        "--experiment",
        "exp2-toeplitz",
        "--sizes",
        "0:1:2",
        "--out",
        a.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(1));
}
