use std::path::PathBuf;
use std::process::{Command, Output};

use envelope_cli::tables::{reproduce_table, table_spec, Benchmark, OracleOptions};
use envelope_core::et::calibrate_phi;
use envelope_core::model::StateSpec;
use envelope_core::oracle::{solve_oracle, OracleConfig};

const LINEAR_GS: &str = "\
[system]
potential = linear
a = 0.5

[state]
quanta = 0 0; 0 0
l = 0
sigma = 1

[method]
phi = 2

[oracle]
enabled = false

[output]
format = table
precision = 6
";

fn write_config(name: &str, text: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("envelope-cli-tests-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn run(config: Option<&PathBuf>, args: &[&str]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_envelope"));
    if let Some(c) = config {
        cmd.arg("--config").arg(c);
    }
    cmd.args(args).output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn solve_prints_the_ground_state() {
    let c = write_config("gs.toml", LINEAR_GS);
    let o = run(Some(&c), &["solve"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let text = stdout(&o);
    assert!(text.lines().any(|l| l.split_whitespace().collect::<Vec<_>>() == ["e", "2.83482"]), "{text}");
}

#[test]
fn csv_and_text_agree() {
    let c = write_config("agree.toml", LINEAR_GS);
    let text = stdout(&run(Some(&c), &["solve"]));
    let csv = stdout(&run(Some(&c), &["--format", "csv", "solve"]));
    let mut rows = csv.lines().skip(1);
    for line in text.lines().skip(1) {
        let t: Vec<&str> = line.split_whitespace().collect();
        let c: Vec<&str> = rows.next().unwrap().split(',').collect();
        assert_eq!(t[0], c[0]);
        match (t[1].parse::<f64>(), c[1].parse::<f64>()) {
            (Ok(a), Ok(b)) => assert!(((a - b) / b).abs() < 5e-6, "{}: {a} vs {b}", t[0]),
            _ => assert_eq!(t[1], c[1]),
        }
    }
    assert!(rows.next().is_none());
}

#[test]
fn reruns_are_identical() {
    let c = write_config("rerun.toml", &LINEAR_GS.replace("enabled = false", "enabled = true\nqstar_max = 6"));
    let a = run(Some(&c), &["--format", "csv", "solve"]);
    let b = run(Some(&c), &["--format", "csv", "solve"]);
    assert_eq!(code(&a), 0, "{}", stderr(&a));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn parse_errors_exit_with_two_and_name_the_line() {
    let c = write_config("bad.toml", "[system]\npotential = linear\nbogus = 1\n");
    let o = run(Some(&c), &["solve"]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("line 3"), "{}", stderr(&o));

    let c = write_config("inapplicable.toml", &LINEAR_GS.replace("a = 0.5", "a = 0.5\ngamma = 2"));
    assert_eq!(code(&run(Some(&c), &["solve"])), 2);

    assert_eq!(code(&run(None, &["solve"])), 2);
    assert_eq!(code(&run(None, &["table", "nope"])), 2);
}

#[test]
fn unbound_state_exits_with_three() {
    let text = LINEAR_GS
        .replace("potential = linear\na = 0.5", "potential = expwell\na = 1\nb = 1\ngamma = 1")
        .replace("quanta = 0 0; 0 0", "quanta = 40 0; 0 0");
    let c = write_config("unbound.toml", &text);
    let o = run(Some(&c), &["solve"]);
    assert_eq!(code(&o), 3, "{}", stderr(&o));
}

#[test]
fn mixed_band_observable_exits_with_five() {
    let text = LINEAR_GS
        .replace("quanta = 0 0; 0 0\nl = 0", "quanta = 0 0; 1 1\nl = 1")
        .replace("phi = 2", "phi = dos");
    let c = write_config("mixed.toml", &text);
    let o = run(Some(&c), &["solve"]);
    assert_eq!(code(&o), 5, "{}", stderr(&o));
    assert!(stderr(&o).contains("Q0"));
}

#[test]
fn phi_dos_and_calibration_commands() {
    let c = write_config("dos.toml", LINEAR_GS);
    let o = run(Some(&c), &["--format", "csv", "phi-dos"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let v: f64 = stdout(&o).lines().nth(1).unwrap().split(',').nth(1).unwrap().parse().unwrap();
    assert!((v - 3f64.sqrt()).abs() < 1e-9);

    let c = write_config("cal.toml", &LINEAR_GS.replace("phi = 2", "phi = calibrate:2.5"));
    let o = run(Some(&c), &["--format", "csv", "calibrate-phi"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let out = stdout(&o);
    let phi: f64 = out.lines().find(|l| l.starts_with("phi,")).unwrap()[4..].parse().unwrap();
    let c = write_config("back.toml", &LINEAR_GS.replace("phi = 2", &format!("phi = fixed:{phi}")));
    let o = run(Some(&c), &["--format", "csv", "solve"]);
    let e: f64 = stdout(&o).lines().find(|l| l.starts_with("e,")).unwrap()[2..].parse().unwrap();
    assert!((e - 2.5).abs() < 1e-9, "{e}");
}

#[test]
fn table_csv_has_one_header() {
    let o = run(None, &["--format", "csv", "--qstar-max", "6", "table", "lin1"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let out = stdout(&o);
    assert_eq!(out.lines().filter(|l| l.starts_with("table,")).count(), 1);
    assert_eq!(out.lines().filter(|l| l.starts_with("lin1,")).count(), 3);
}

#[test]
fn ground_state_phi_constants_reproduce_the_oracle() {
    for b in [Benchmark::Linear, Benchmark::Coulomb, Benchmark::Gaussian] {
        let sys = b.system();
        let e = solve_oracle(&sys, &OracleConfig::new(0, 1, 1).with_qstar_max(18)).unwrap().e;
        let phi = calibrate_phi(&sys, &StateSpec::ground(3), e).unwrap();
        assert!((phi - b.phi_gs()).abs() < 1e-8, "{}: {phi} vs {}", b.name(), b.phi_gs());
    }
}

#[test]
fn mixed_q0_cells_only_in_the_negative_parity_table() {
    let opts = OracleOptions { qstar_max: Some(5), quad_order: 80 };
    let rep = reproduce_table("lin4", &opts).unwrap();
    assert_eq!(rep.rows.iter().filter(|r| r.r.is_none()).count(), 2);
    let rep = reproduce_table("lin5", &opts).unwrap();
    assert!(rep.rows.iter().all(|r| r.r.is_some()));
    assert!(table_spec("lin4").unwrap().parity() < 0);
}
