use std::process::{Command, Output};

fn sphcl(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sphcl")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn data_rows(text: &str) -> Vec<Vec<String>> {
    let body: String = text.lines().filter(|l| !l.starts_with('#')).map(|l| format!("{l}\n")).collect();
    let mut rdr = csv::ReaderBuilder::new().has_headers(false).from_reader(body.as_bytes());
    rdr.records().map(|r| r.unwrap().iter().map(String::from).collect()).collect()
}

#[test]
fn kernel_sweep_is_csv_with_metadata() {
    let o = sphcl(&["kernel", "--points", "5", "--alpha", "0.3+0.2i", "--deterministic"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let meta: Vec<&str> = text.lines().take_while(|l| l.starts_with('#')).collect();
    assert!(meta.iter().any(|l| l.starts_with("# config: --alpha 0.3+0.2i")));
    assert!(!text.contains("elapsed"));
    let rows = data_rows(&text);
    assert_eq!(rows[0][0], "z");
    assert_eq!(rows.len(), 6);
    for row in &rows[1..] {
        assert_eq!(row.len(), rows[0].len());
        let mantissa = row[0].split('e').next().unwrap().trim_start_matches('-');
        assert_eq!(mantissa.replace('.', "").len(), 17, "{}", row[0]);
    }
    let terms: Vec<usize> = rows[1..].iter().map(|r| r[9].parse().unwrap()).collect();
    assert!(terms.windows(2).all(|w| w[1] >= w[0]));
}

#[test]
fn empty_kernel_sweep_has_only_the_header() {
    let o = sphcl(&["kernel", "--points", "0"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(data_rows(&stdout(&o)).len(), 1);
}

#[test]
fn integer_order_is_a_failure() {
    let o = sphcl(&["kernel", "--alpha", "2", "--points", "3"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("integer"));
}

#[test]
fn usage_errors_exit_with_two() {
    for args in [
        &["verify", "--res", "8"][..],
        &["beltrami", "--q", "1.2"],
        &["kernel", "--alpha", "1+"],
        &["kernel", "--cap-angle", "200"],
        &["frobnicate"],
        &["verify", "--unknown"],
    ] {
        assert_eq!(sphcl(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn info_lists_every_flag_and_identity() {
    let o = sphcl(&["info"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    for flag in [
        "--alpha",
        "--cap-angle",
        "--res",
        "--max-terms",
        "--series-tol",
        "--fp-tol",
        "--max-iter",
        "--seed",
        "--kernel-form",
        "--points",
        "--q",
        "--samples",
    ] {
        assert!(text.contains(&format!("{flag} ")), "{flag}");
    }
    let o = sphcl(&["info", "--eps", "0.1", "--pv-eps", "0.05", "--deterministic"]);
    let text = stdout(&o);
    for flag in ["--eps 0.1", "--pv-eps 0.05", "--deterministic"] {
        assert!(text.contains(flag), "{flag}");
    }
    for (name, _, _) in spherical_clifford::identities::identity_names() {
        assert!(text.contains(name), "{name}");
    }
}

#[test]
fn out_flag_writes_the_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("k.csv");
    let o = sphcl(&["kernel", "--points", "2", "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    assert!(std::fs::read_to_string(&path).unwrap().starts_with("# sphcl"));
}

#[test]
fn beltrami_zero_dilatation_is_immediate() {
    let o = sphcl(&["beltrami", "--res", "6:12", "--q", "0,0.2", "--deterministic"]);
    assert_eq!(o.status.code(), Some(0));
    let rows = data_rows(&stdout(&o));
    assert_eq!(rows[0], ["n_theta", "n_phi", "q_norm", "iterations", "mean_ratio", "be1_residual", "converged"]);
    assert_eq!(rows.len(), 3);
    let zero = &rows[1];
    assert!(zero[3].parse::<usize>().unwrap() <= 2);
    assert!(zero[5].parse::<f64>().unwrap() <= 1e-8);
    assert_eq!(rows[2][6], "true");
}

#[test]
fn bvp_reports_every_case() {
    let o = sphcl(&["bvp", "--res", "6:12,8:16", "--deterministic"]);
    let rows = data_rows(&stdout(&o));
    assert_eq!(rows.len(), 7);
    let cases: Vec<&str> = rows[1..].iter().map(|r| r[0].as_str()).collect();
    assert_eq!(cases[..3], ["monogenic_trace", "bump_source", "combined"]);
    assert!(matches!(o.status.code(), Some(0) | Some(1)));
}

#[test]
fn config_echo_reproduces_the_run() {
    let first = stdout(&sphcl(&["kernel", "--points", "4", "--alpha", "0.25-0.5i", "--kernel-form", "antipodal", "--deterministic"]));
    let echo = first.lines().find_map(|l| l.strip_prefix("# config: ")).unwrap().to_string();
    let mut args = vec!["kernel"];
    args.extend(echo.split(' '));
    let second = stdout(&sphcl(&args));
    assert_eq!(first, second);
}
