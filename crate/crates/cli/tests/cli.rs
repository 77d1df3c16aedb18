use std::fs;
use std::process::{Command, Output};

fn corrdyn(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_corrdyn"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

/// Data rows of a trajectory CSV as (header, rows).
fn parse_csv(text: &str) -> (Vec<String>, Vec<Vec<String>>) {
    let mut lines = text.lines().filter(|l| !l.starts_with('#'));
    let header = lines.next().unwrap().split(',').map(String::from).collect();
    let rows = lines
        .map(|l| l.split(',').map(String::from).collect())
        .collect();
    (header, rows)
}

#[test]
fn evolve_writes_the_documented_columns() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("fig.csv");
    let o = corrdyn(&[
        "evolve",
        "--c1",
        "1",
        "--c2",
        "-0.6",
        "--c3",
        "0.6",
        "--channel",
        "phase",
        "--tmax",
        "1",
        "--samples",
        "5",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let text = fs::read_to_string(&out).unwrap();
    assert!(text.starts_with("# corrdyn "));
    assert!(text.contains("# class=phase:+:0.6\n"));
    assert!(!text.contains('\r'));
    let (header, rows) = parse_csv(&text);
    assert_eq!(
        header.join(","),
        "gamma_t,c1,c2,c3,lam1,lam2,lam3,lam4,I,C,D,E,Q,q_cl,pair_high"
    );
    assert_eq!(rows.len(), 5);
    let f = |r: &Vec<String>, i: usize| r[i].parse::<f64>().unwrap();
    assert_eq!(rows[0][0], "0");
    assert!((f(&rows[0], 8) - 1.278072).abs() < 1e-6);
    assert_eq!(f(&rows[0], 9), 1.0);
    assert!((f(&rows[0], 10) - 0.278072).abs() < 1e-6);
    // Row at gamma_t = 0.75: C frozen, D below the plateau.
    assert_eq!(rows[3][0], "0.75");
    assert!((f(&rows[3], 9) - 0.278072).abs() < 1e-6);
    assert!(f(&rows[3], 10) < 0.278071);
}

#[test]
fn csv_rows_satisfy_the_split_after_round_trip() {
    let o = corrdyn(&[
        "evolve",
        "--class",
        "phase:+:0.3",
        "--tmax",
        "2",
        "--samples",
        "300",
    ]);
    assert_eq!(code(&o), 0);
    let (header, rows) = parse_csv(&stdout(&o));
    let col = |name: &str| header.iter().position(|h| h == name).unwrap();
    let (i, c, d) = (col("I"), col("C"), col("D"));
    let mut prev = -1.0;
    for r in &rows {
        let v = |k: usize| r[k].parse::<f64>().unwrap();
        assert!((v(i) - v(c) - v(d)).abs() <= 1e-9);
        assert!(v(0) > prev);
        prev = v(0);
        assert!(r[14].contains('|'));
    }
}

#[test]
fn evolve_is_deterministic_and_reports_oracles() {
    let args = [
        "evolve",
        "--class",
        "bit:-:0.5",
        "--samples",
        "20",
        "--lindblad",
        "--grid-n",
        "16",
    ];
    let a = corrdyn(&args);
    let b = corrdyn(&args);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    let text = stdout(&a);
    let dev = |key: &str| -> f64 {
        let line = text.lines().find(|l| l.contains(key)).unwrap();
        line.split('=').nth(1).unwrap().parse().unwrap()
    };
    assert!(dev("lindblad_max_dev") < 1e-8);
    assert!(dev("optimizer_max_dev") < 1e-7);
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    fs::write(
        &cfg,
        "# phase-flip run\nc1 = 1\nc2 = -0.6\nc3 = 0.6\nchannel = phase\nsamples = 7\ntmax = 1\n",
    )
    .unwrap();
    let o = corrdyn(&[
        "evolve",
        "--config",
        cfg.to_str().unwrap(),
        "--samples",
        "3",
    ]);
    assert_eq!(code(&o), 0);
    assert_eq!(parse_csv(&stdout(&o)).1.len(), 3);

    fs::write(&cfg, "c1 = 1\nsamples: 4\n").unwrap();
    let o = corrdyn(&["evolve", "--config", cfg.to_str().unwrap()]);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stderr).contains("run.cfg:2:"));
}

#[test]
fn exit_codes() {
    assert_eq!(
        code(&corrdyn(&[
            "evolve",
            "--class",
            "phase:+:0.6",
            "--samples",
            "1"
        ])),
        1
    );
    assert_eq!(code(&corrdyn(&["validate", "--n", "0"])), 1);
    assert_eq!(code(&corrdyn(&["fig", "--id", "4"])), 1);
    assert_eq!(code(&corrdyn(&["bogus"])), 1);
    let o = corrdyn(&["report", "--c1", "0.9", "--c2", "0.9", "--c3", "0.9"]);
    assert_eq!(code(&o), 3);
    assert!(String::from_utf8_lossy(&o.stderr).contains("non-physical"));
    let o = corrdyn(&[
        "evolve",
        "--c1",
        "0.5",
        "--c2",
        "0.2",
        "--c3",
        "0.9",
        "--channel",
        "phase",
    ]);
    assert_eq!(code(&o), 3);
    assert_eq!(code(&corrdyn(&["--help"])), 0);
}

#[test]
fn transition_reports_times_and_kink() {
    let o = corrdyn(&["transition", "--class", "phase:+:0.6"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    assert!(
        text.contains("sudden transition gamma_t=0.255412812\n"),
        "{text}"
    );
    assert!(text.contains("sudden death gamma_t=0.693147181\n"));
    let kink = text
        .lines()
        .find(|l| l.starts_with("detected kink"))
        .unwrap();
    let gt: f64 = kink
        .split('=')
        .nth(1)
        .unwrap()
        .split_whitespace()
        .next()
        .unwrap()
        .parse()
        .unwrap();
    assert!((gt - 0.2554).abs() < 0.004);

    let o = corrdyn(&[
        "transition",
        "--c1",
        "0.3",
        "--c2",
        "-0.2",
        "--c3",
        "0.1",
        "--channel",
        "phase",
    ]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("χ-crossing time gamma_t="));

    let o = corrdyn(&[
        "transition",
        "--c1",
        "0.5",
        "--c2",
        "0",
        "--c3",
        "0",
        "--channel",
        "phase",
    ]);
    assert!(stdout(&o).contains("detected kink none"));
}

#[test]
fn report_prints_every_measure() {
    let o = corrdyn(&["report", "--c1", "-1", "--c2", "-1", "--c3", "-1"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    assert!(text.contains("\nI 2\n") && text.contains("\nD 1\n") && text.contains("\nE 1\n"));
    assert!(text.contains("Q undefined"));

    let o = corrdyn(&["report", "--class", "phase:+:0.6"]);
    let text = stdout(&o);
    assert!(text.contains("\nD 0.278071905\n"));
    assert!(text.contains("\nQ 0\n"));
}

#[test]
fn fig_writes_each_table() {
    let dir = tempfile::tempdir().unwrap();
    for (id, header) in [
        (
            "1",
            "gamma_t,I,C,D,lam_psi_plus,lam_psi_minus,lam_phi_plus,lam_phi_minus",
        ),
        ("2", "gamma_t,E,D"),
        ("3", "gamma_t,E,D,Q"),
    ] {
        let o = corrdyn(&["fig", "--id", id, "--outdir", dir.path().to_str().unwrap()]);
        assert_eq!(code(&o), 0);
        let text = fs::read_to_string(dir.path().join(format!("fig{id}.csv"))).unwrap();
        let (h, rows) = parse_csv(&text);
        assert_eq!(h.join(","), header);
        assert_eq!(rows.len(), 512);
    }
}

#[test]
fn validate_small_run_is_reproducible() {
    let a = corrdyn(&["validate", "--seed", "3", "--n", "4"]);
    let b = corrdyn(&["validate", "--seed", "3", "--n", "4"]);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    assert!(stdout(&a).trim_end().ends_with("overall PASS"));
}
