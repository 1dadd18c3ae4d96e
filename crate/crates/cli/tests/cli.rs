use std::process::{Command, Output};

fn hkorlicz(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hkorlicz")).args(args).output().expect("run hkorlicz")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

/// Column `name` of the single data row.
fn field(o: &Output, name: &str) -> String {
    let text = stdout(o);
    let mut lines = text.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    row[header.iter().position(|h| *h == name).unwrap()].to_string()
}

fn number(o: &Output, name: &str) -> f64 {
    field(o, name).parse().unwrap()
}

#[test]
fn integrate_examples() {
    let o = hkorlicz(&["integrate", "--fn", "x", "--a", "0", "--b", "1"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).starts_with("value,error_estimate,evaluations,converged,diverged\n"));
    assert!((number(&o, "value") - 0.5).abs() < 1e-12);
    assert_eq!(field(&o, "converged"), "true");

    let o = hkorlicz(&["integrate", "--fn", "corpus:c4", "--a", "0", "--b", "1", "--tol", "1e-6"]);
    assert_eq!(code(&o), 0);
    assert!((number(&o, "value") - 1f64.sin()).abs() < 1e-6);

    let o = hkorlicz(&["integrate", "--fn", "1/x", "--a", "0", "--b", "1", "--singularities", "0"]);
    assert_eq!(code(&o), 2);
    assert_eq!(field(&o, "diverged"), "true");
}

#[test]
fn oscillatory_entry_at_default_tolerance_hits_the_cell_cap() {
    let o = hkorlicz(&["integrate", "--fn", "corpus:c4", "--a", "0", "--b", "1"]);
    assert_eq!(code(&o), 2);
    assert_eq!(field(&o, "converged"), "false");
    assert_eq!(field(&o, "diverged"), "true");
    assert!((number(&o, "value") - 1f64.sin()).abs() < 1e-6);
}

#[test]
fn norm_examples() {
    let o = hkorlicz(&["norm", "--type", "luxemburg", "--young", "power:2", "--fn", "ind(0,1)", "--a", "-1", "--b", "2"]);
    assert_eq!(code(&o), 0);
    assert!((number(&o, "norm") - 1.0).abs() < 1e-7);
    assert!(number(&o, "modular_at_norm") <= 1.0 + 1e-8);

    let o = hkorlicz(&["norm", "--type", "luxemburg", "--young", "exp2m1", "--fn", "ind(0,1)", "--a", "-1", "--b", "2"]);
    assert!((number(&o, "norm") - 1.201_122_408_786_449_8).abs() < 1e-7);

    let o = hkorlicz(&["norm", "--type", "alexiewicz", "--fn", "corpus:c5", "--a", "0", "--b", "20"]);
    assert_eq!(code(&o), 0);
    assert!((number(&o, "norm") - 1.851_937_051_982_466).abs() < 1e-6);

    let o = hkorlicz(&["norm", "--type", "luxemburg", "--young", "nonesuch", "--fn", "x", "--a", "0", "--b", "1"]);
    assert_eq!(code(&o), 1);
    assert!(!o.stderr.is_empty());
    let o = hkorlicz(&["norm", "--type", "sup", "--fn", "x", "--a", "0", "--b", "1"]);
    assert_eq!(code(&o), 1);
}

#[test]
fn conjugate_and_distribution() {
    let o = hkorlicz(&["conjugate", "--young", "quad_half", "--t", "3"]);
    assert_eq!(code(&o), 0);
    assert!((number(&o, "phi") - 4.5).abs() < 1e-10);

    let o = hkorlicz(&["conjugate", "--young", "expm1ms", "--t", "0,1,2"]);
    let rows: Vec<String> = stdout(&o).lines().map(String::from).collect();
    assert_eq!(rows.len(), 4);
    let phi1: f64 = rows[2].split(',').nth(1).unwrap().parse().unwrap();
    assert!((phi1 - (2.0 * 2f64.ln() - 1.0)).abs() < 1e-8);

    let o = hkorlicz(&["distribution", "--fn", "sin(pi*x)", "--a", "0", "--b", "1", "--ts", "0.5"]);
    assert_eq!(code(&o), 0);
    assert!((number(&o, "measure") - 2.0 / 3.0).abs() < 1e-6);
}

#[test]
fn mollify_example() {
    let args = ["mollify", "--fn", "ind(0,1)", "--young", "power:2", "--ks", "2,4,8,16,32"];
    let o = hkorlicz(&args);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("k,norm,evaluations,wall_ms"));
    let norms: Vec<f64> = lines.map(|l| l.split(',').nth(1).unwrap().parse().unwrap()).collect();
    assert_eq!(norms.len(), 5);
    assert!(norms.windows(2).all(|w| w[1] < w[0]));

    // Everything but the timing column repeats exactly.
    let strip = |s: String| s.lines().map(|l| l.rsplit_once(',').unwrap().0.to_string()).collect::<Vec<_>>();
    assert_eq!(strip(text), strip(stdout(&hkorlicz(&args))));
}

#[test]
fn usage_errors_exit_one() {
    for args in [
        &["frobnicate"][..],
        &["integrate", "--fn", "x"],
        &["integrate", "--fn", "x ++ 2", "--a", "0", "--b", "1"],
        &["integrate", "--fn", "x", "--a", "1", "--b", "0"],
        &["integrate", "--fn", "corpus:nope", "--a", "0", "--b", "1"],
        &["conjugate", "--young", "quad_half"],
        &["integrate", "--fn", "x", "--a", "0", "--b", "1", "--tol", "-1"],
    ] {
        let o = hkorlicz(args);
        assert_eq!(code(&o), 1, "{args:?}");
        assert!(!o.stderr.is_empty(), "{args:?}");
    }
    assert_eq!(code(&hkorlicz(&["--help"])), 0);
}

#[test]
fn config_file_and_flag_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    let out = dir.path().join("out.csv");
    std::fs::write(&cfg, format!("# loose\ntol = 1e-3\noutput_path = {}\n", out.display())).unwrap();
    let c = cfg.to_str().unwrap();

    // The file supplies the output path and the loose tolerance.
    let o = hkorlicz(&["--config", c, "integrate", "--fn", "corpus:c4", "--a", "0", "--b", "1"]);
    assert_eq!(code(&o), 0);
    assert!(o.stdout.is_empty());
    let loose = std::fs::read_to_string(&out).unwrap();
    assert!(loose.starts_with("value,"));

    // A flag beats the file.
    let o = hkorlicz(&["--config", c, "--tol", "1e-6", "integrate", "--fn", "corpus:c4", "--a", "0", "--b", "1"]);
    assert_eq!(code(&o), 0);
    let tight = std::fs::read_to_string(&out).unwrap();
    assert_ne!(loose, tight);
    let value: f64 = tight.lines().nth(1).unwrap().split(',').next().unwrap().parse().unwrap();
    assert!((value - 1f64.sin()).abs() < 1e-6);

    std::fs::write(&cfg, "colour = blue\n").unwrap();
    assert_eq!(code(&hkorlicz(&["--config", c, "integrate", "--fn", "x", "--a", "0", "--b", "1"])), 1);
    let missing = dir.path().join("missing.cfg");
    assert_eq!(code(&hkorlicz(&["--config", missing.to_str().unwrap(), "verify"])), 1);
}

#[test]
fn repeated_invocations_are_identical() {
    for args in [
        &["integrate", "--fn", "corpus:c3", "--a", "0", "--b", "1"][..],
        &["norm", "--type", "luxemburg", "--young", "exp2m1", "--fn", "corpus:c6a", "--a", "-1", "--b", "2"],
        &["distribution", "--fn", "corpus:c2", "--a", "0", "--b", "1", "--ts", "0.1,0.5,0.9"],
    ] {
        assert_eq!(hkorlicz(args).stdout, hkorlicz(args).stdout, "{args:?}");
    }
}
