use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use credal_im::io::{parse_im_table, parse_model, read_curve, read_gamble_log, read_trajectory};
use credal_im::{IMTable, Rational};
use credal_im_cli::curve_file_name;
use serde_json::Value;

fn credal_im(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_credal-im")).args(args).output().expect("binary runs")
}

fn code(output: &Output) -> i32 {
    output.status.code().expect("exit code")
}

fn stdout(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).unwrap()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn exit_codes_separate_pass_violation_and_input_error() {
    assert_eq!(code(&credal_im(&["audit", "bundled:demo3"])), 0);
    assert_eq!(code(&credal_im(&["audit", "bundled:demo3", "--im", "bayes:uniform"])), 1);
    assert_eq!(code(&credal_im(&["audit", "bundled:nope"])), 2);
    assert_eq!(code(&credal_im(&["audit", "bundled:demo3", "--im", "bayes:0.5,0.5"])), 2);
    assert_eq!(code(&credal_im(&["audit", "bundled:demo3", "--properties", "bogus"])), 2);
    assert_eq!(code(&credal_im(&["im-curve", "--points", "0"])), 2);
    assert_eq!(code(&credal_im(&["no-such-command"])), 2);
    assert_eq!(code(&credal_im(&["--help"])), 0);

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.model");
    fs::write(&bad, "[frames]\nparam = a b\n\n[prior]\n{a} = 0.7\n").unwrap();
    let out = credal_im(&["combine", path(&bad), path(&bad)]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("error"));
}

#[test]
fn im_curve_defaults_write_four_monotone_curves() {
    let dir = tempfile::tempdir().unwrap();
    let out = credal_im(&["im-curve", "--out-dir", path(dir.path())]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out).lines().count(), 4);
    for y in [5.0, 6.5, 7.5, 9.0] {
        let rows = read_curve(fs::File::open(dir.path().join(curve_file_name(y))).unwrap()).unwrap();
        assert_eq!(rows.len(), 41);
        assert!((rows[0].theta - (y - 4.0)).abs() < 1e-12 && (rows[40].theta - (y + 4.0)).abs() < 1e-12);
        for pair in rows.windows(2) {
            let (a, b) = (&pair[0], &pair[1]);
            assert!(a.theta < b.theta);
            assert!(a.lower_vacuous <= b.lower_vacuous && a.upper_vacuous <= b.upper_vacuous);
            assert!(a.lower_combined <= b.lower_combined && a.upper_combined <= b.upper_combined);
        }
        for row in &rows {
            assert!(row.lower_vacuous <= row.upper_vacuous && row.lower_combined <= row.upper_combined);
        }
    }
}

#[test]
fn vacuous_interval_prior_reproduces_vacuous_columns() {
    let dir = tempfile::tempdir().unwrap();
    let prior = dir.path().join("vacuous.model");
    fs::write(&prior, "[interval-prior]\n-inf inf = 1\n").unwrap();
    let out = credal_im(&["im-curve", "--prior", path(&prior), "--y", "0,2.5", "--out-dir", path(dir.path())]);
    assert_eq!(code(&out), 0);
    for y in [0.0, 2.5] {
        for row in read_curve(fs::File::open(dir.path().join(curve_file_name(y))).unwrap()).unwrap() {
            assert!((row.lower_combined - row.lower_vacuous).abs() < 1e-12);
            assert!((row.upper_combined - row.upper_vacuous).abs() < 1e-12);
        }
    }
}

#[test]
fn single_point_grid_gives_one_row() {
    let dir = tempfile::tempdir().unwrap();
    let out = credal_im(&["im-curve", "--y", "7", "--points", "1", "--theta-min", "6.5", "--out-dir", path(dir.path())]);
    assert_eq!(code(&out), 0);
    let rows = read_curve(fs::File::open(dir.path().join(curve_file_name(7.0))).unwrap()).unwrap();
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0].theta, 6.5);
}

#[test]
fn reruns_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    for d in [&a, &b] {
        assert_eq!(code(&credal_im(&["im-curve", "--mc", "5000", "--seed", "9", "--out-dir", path(d)])), 0);
    }
    for y in [5.0, 6.5, 7.5, 9.0] {
        let name = curve_file_name(y);
        assert_eq!(fs::read(a.join(&name)).unwrap(), fs::read(b.join(&name)).unwrap());
    }
    let run = |d: &Path| {
        let (traj, log) = (d.join("traj.csv"), d.join("log.csv"));
        let out = credal_im(&[
            "simulate", "sidebet", "bundled:demo3", "--im", "bayes:uniform", "--strategy", "random",
            "--rounds", "2000", "--trajectory", path(&traj), "--log", path(&log),
        ]);
        (stdout(&out), fs::read(traj).unwrap(), fs::read(log).unwrap())
    };
    assert_eq!(run(&a), run(&b));
}

#[test]
fn simulation_csvs_reparse() {
    let dir = tempfile::tempdir().unwrap();
    let traj = dir.path().join("agent1.csv");
    let out = credal_im(&["simulate", "agent1", "--rounds", "500", "--trajectory", path(&traj)]);
    assert_eq!(code(&out), 0);
    let rows = read_trajectory(fs::File::open(&traj).unwrap()).unwrap();
    assert_eq!(rows.len(), 500);
    assert_eq!(rows[0].0, 1);

    let (traj, log) = (dir.path().join("side.csv"), dir.path().join("log.csv"));
    let out = credal_im(&[
        "simulate", "sidebet", "bundled:demo3", "--im", "bayes:uniform", "--strategy", "witness",
        "--rounds", "3000", "--trajectory", path(&traj), "--log", path(&log),
    ]);
    assert_eq!(code(&out), 1, "{}", stdout(&out));
    assert_eq!(read_trajectory(fs::File::open(&traj).unwrap()).unwrap().len(), 3000);
    let log = read_gamble_log(fs::File::open(&log).unwrap()).unwrap();
    assert!(!log.is_empty());
    assert!(log.windows(2).all(|w| w[0].round < w[1].round));

    let out = credal_im(&["simulate", "wager", "--dice", "1/6:0.9,1/5:0.1", "--replications", "200"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("P(ruin by round 100)"));
}

#[test]
fn combine_output_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b, c) = (dir.path().join("a.model"), dir.path().join("b.model"), dir.path().join("c.model"));
    fs::write(&a, "[frames]\nparam = x y z\n\n[prior]\n{x y} = 1/2\n{y z} = 1/4\n{x y z} = 1/4\n").unwrap();
    fs::write(&b, "[frames]\nparam = x y z\n\n[prior]\n{x} = 1/3\n{y z} = 2/3\n").unwrap();
    let out = credal_im(&["combine", path(&a), path(&b), "--exact", "--output", path(&c)]);
    assert_eq!(code(&out), 0);
    let text = fs::read_to_string(&c).unwrap();
    assert!(text.starts_with("# conflict = "));
    let combined = parse_model::<Rational>(&text).unwrap().mass_function().unwrap();
    let left = parse_model::<Rational>(&fs::read_to_string(&a).unwrap()).unwrap().mass_function().unwrap();
    let right = parse_model::<Rational>(&fs::read_to_string(&b).unwrap()).unwrap().mass_function().unwrap();
    assert_eq!(combined, credal_im::dempster_combine(&left, &right).unwrap().mass);
    // Combining the combination with the vacuous mass leaves it unchanged.
    let vacuous = dir.path().join("v.model");
    fs::write(&vacuous, "[frames]\nparam = x y z\n\n[prior]\n{x y z} = 1\n").unwrap();
    let again = dir.path().join("again.model");
    assert_eq!(code(&credal_im(&["combine", path(&c), path(&vacuous), "--exact", "-o", path(&again)])), 0);
    let again = parse_model::<Rational>(&fs::read_to_string(&again).unwrap()).unwrap().mass_function().unwrap();
    assert_eq!(again, combined);
}

#[test]
fn gb_table_round_trips_through_audit() {
    let dir = tempfile::tempdir().unwrap();
    let table_path = dir.path().join("gb.im");
    assert_eq!(code(&credal_im(&["gb", "bundled:demo3-partial", "--exact", "-o", path(&table_path)])), 0);
    let text = fs::read_to_string(&table_path).unwrap();
    let table: IMTable<Rational> = parse_im_table(&text).unwrap();
    let model = parse_model::<Rational>(credal_im::io::DEMO_PARTIAL).unwrap().credal().unwrap();
    assert_eq!(table, credal_im::credal::generalized_bayes_im(&model).unwrap());

    let source = format!("file:{}", path(&table_path));
    let out = credal_im(&["audit", "bundled:demo3-partial", "--im", &source, "--exact", "--properties", "invulnerability,validity"]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));

    let out = credal_im(&["gb", "bundled:demo3-partial", "--y", "y2", "--gamble", "1,0,0"]);
    assert_eq!(code(&out), 0);
    let values: Vec<f64> = stdout(&out).lines().map(|l| l.split(" = ").nth(1).unwrap().parse().unwrap()).collect();
    assert!(values[0] <= values[1] && values[0] >= 0.0 && values[1] <= 1.0);
    let y2 = model.data_frame().index_of("y2").unwrap();
    let h = model.param_frame().singleton(0);
    let upper: f64 = num_traits::ToPrimitive::to_f64(&table.upper(y2, &h).unwrap()).unwrap();
    assert!((values[1] - upper).abs() < 1e-9);
}

#[test]
fn audit_json_reports_witnesses() {
    let dir = tempfile::tempdir().unwrap();
    let json_path = dir.path().join("report.json");
    let out = credal_im(&["audit", "bundled:demo3", "--im", "bayes:uniform", "--json", path(&json_path)]);
    assert_eq!(code(&out), 1);
    assert!(stdout(&out).contains("overall: FAIL"));
    let report: Value = serde_json::from_str(&fs::read_to_string(&json_path).unwrap()).unwrap();
    assert_eq!(report["passed"], Value::Bool(false));
    let properties = report["properties"].as_array().unwrap();
    assert_eq!(properties.len(), 5);
    let validity = properties.iter().find(|p| p["property"] == "validity").unwrap();
    assert_eq!(validity["passed"], Value::Bool(false));
    let witness = &validity["witnesses"][0];
    for key in ["hypothesis", "threshold", "realized", "achieved", "bound", "margin"] {
        assert!(!witness[key].is_null(), "{key} missing");
    }
    let margin: f64 = witness["margin"].as_str().unwrap().parse().unwrap();
    assert!(margin > 0.0);

    let clean = dir.path().join("clean.json");
    assert_eq!(code(&credal_im(&["audit", "bundled:demo3", "--json", path(&clean)])), 0);
    let report: Value = serde_json::from_str(&fs::read_to_string(&clean).unwrap()).unwrap();
    assert_eq!(report["passed"], Value::Bool(true));
}
