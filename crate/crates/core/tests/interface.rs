use std::collections::BTreeMap;
use std::path::Path;
use std::process::Command;

use phasebench::hamiltonian::{build_hamiltonian, ground_states};
use phasebench::qaoa::OptimizerBudget;
use phasebench::sat::dimacs::{read_dimacs, write_dimacs};
use phasebench::sat::generate_random_ksat;
use phasebench::solvers::brute_force_maxsat;
use phasebench::sweep::{
    instance_seed, load_results, run_decision_sweep, run_gibbs_sweep, run_qaoa_sweep, write_results, Aggregates,
    Experiment, GibbsMethod, OutputFormat, SweepConfig,
};

fn phasebench(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_phasebench"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn read_csv(path: &Path) -> Vec<BTreeMap<String, String>> {
    let mut reader = csv::Reader::from_path(path).unwrap();
    let headers = reader.headers().unwrap().clone();
    reader
        .records()
        .map(|r| {
            let r = r.unwrap();
            headers.iter().map(String::from).zip(r.iter().map(String::from)).collect()
        })
        .collect()
}

#[test]
fn generate_then_solve_round_trips_through_files() {
    let dir = tempfile::tempdir().unwrap();
    let cnf = dir.path().join("f.cnf");
    let out = phasebench(&["generate", "--n", "12", "--alpha", "4", "--seed", "7", "--out", cnf.to_str().unwrap()]);
    assert!(out.status.success());
    let text = std::fs::read_to_string(&cnf).unwrap();
    let f = read_dimacs(&text).unwrap();
    assert_eq!(f, generate_random_ksat(12, 48, 3, 7).unwrap());
    assert_eq!(write_dimacs(&f), text);

    let out = phasebench(&["solve", cnf.to_str().unwrap(), "--maxsat"]);
    assert!(out.status.success());
    let summary: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let min_unsat = brute_force_maxsat(&f).unwrap().min_unsat;
    assert_eq!(summary["min_unsat"], min_unsat);
    assert_eq!(summary["status"], if min_unsat == 0 { "sat" } else { "unsat" });
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let big = dir.path().join("big.cnf");
    let out = phasebench(&["generate", "--n", "30", "--m", "10", "--out", big.to_str().unwrap()]);
    assert!(out.status.success());
    assert_eq!(phasebench(&["solve", big.to_str().unwrap(), "--maxsat"]).status.code(), Some(2));
    assert_eq!(phasebench(&["solve", big.to_str().unwrap()]).status.code(), Some(0));

    let bad = dir.path().join("bad.cnf");
    std::fs::write(&bad, "p cnf 3 1\n1 2 9 0\n").unwrap();
    let out = phasebench(&["solve", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));

    let missing = phasebench(&["solve", "/no/such/file.cnf"]);
    assert_eq!(missing.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&missing.stderr).contains("/no/such/file.cnf"));

    let qaoa_too_big = phasebench(&[
        "sweep", "--experiment", "qaoa", "--n", "25", "--instances", "1", "--alpha-min", "1", "--alpha-max", "1",
        "--alpha-step", "1",
    ]);
    assert_eq!(qaoa_too_big.status.code(), Some(2));
    let descending = phasebench(&[
        "sweep", "--experiment", "decision", "--n", "10", "--instances", "1", "--alpha-min", "2", "--alpha-max", "1",
        "--alpha-step", "1",
    ]);
    assert_eq!(descending.status.code(), Some(1));
    assert_eq!(phasebench(&["no-such-verb"]).status.code(), Some(1));
}

#[test]
fn verify_verb_passes() {
    let out = phasebench(&["verify", "--formulas", "60", "--max-n", "10"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stdout));
    assert!(String::from_utf8_lossy(&out.stdout).contains("60/60"));
}

#[test]
fn sweep_from_config_file_with_flag_overrides() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("sweep.toml");
    std::fs::write(
        &config,
        "experiment = \"decision\"\nn = 40\nk = 3\ndensities = [2.0, 3.0]\ninstances = 4\nseed = 3\n",
    )
    .unwrap();
    let out_path = dir.path().join("fig1.csv");
    let out = phasebench(&[
        "sweep", "--config", config.to_str().unwrap(), "--alpha-min", "3", "--alpha-max", "6", "--alpha-step", "1",
        "--instances", "6", "--out", out_path.to_str().unwrap(), "--threads", "2",
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));

    // Two plottable series keyed by density: satisfiable fraction and effort.
    let rows = read_csv(&out_path);
    let series = |metric: &str| -> Vec<(f64, f64)> {
        rows.iter()
            .filter(|r| r["metric"] == metric)
            .map(|r| (r["density"].parse().unwrap(), r["value"].parse().unwrap()))
            .collect()
    };
    let fraction = series("sat_fraction");
    let effort = series("mean_decisions");
    assert_eq!(fraction.iter().map(|p| p.0).collect::<Vec<_>>(), vec![3.0, 4.0, 5.0, 6.0]);
    assert_eq!(effort.len(), 4);
    assert!(fraction.iter().all(|p| (0.0..=1.0).contains(&p.1)));
    assert!(rows.iter().all(|r| r["n"] == "40" && r["instances"] == "6" && r["seed"] == "3"));

    let json_path = dir.path().join("fig1.json");
    let out = phasebench(&[
        "sweep", "--config", config.to_str().unwrap(), "--out", json_path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let loaded = load_results(&json_path).unwrap();
    assert_eq!(loaded.metadata.config.densities, vec![2.0, 3.0]);
    assert_eq!(loaded.points[1].records[3].seed, instance_seed(3, 1, 3));
}

#[test]
fn json_round_trip_for_every_experiment() {
    let dir = tempfile::tempdir().unwrap();
    let mut gibbs = SweepConfig::new(Experiment::Gibbs, 8, 3, vec![1.0, 4.0], 3, 2);
    gibbs.gibbs.method = GibbsMethod::Both;
    gibbs.gibbs.mcmc.sweeps = 100;
    gibbs.gibbs.mcmc.chains = 4;
    let mut qaoa = SweepConfig::new(Experiment::Qaoa, 4, 2, vec![0.5, 2.0], 2, 2);
    qaoa.qaoa.budget = OptimizerBudget {
        restarts: 2,
        iterations: 50,
    };
    let results = [
        run_decision_sweep(&SweepConfig::new(Experiment::Decision, 20, 3, vec![4.0], 5, 2)).unwrap(),
        run_gibbs_sweep(&gibbs).unwrap(),
        run_qaoa_sweep(&qaoa).unwrap(),
    ];
    for r in &results {
        let path = dir.path().join("r.json");
        write_results(r, &path, OutputFormat::Json).unwrap();
        assert_eq!(&load_results(&path).unwrap(), r);
    }
}

#[test]
fn sparse_grid_point_is_satisfiable() {
    let cfg = SweepConfig::new(Experiment::Decision, 50, 3, vec![0.1], 100, 0);
    let r = run_decision_sweep(&cfg).unwrap();
    let Aggregates::Decision(a) = &r.points[0].aggregates else {
        panic!()
    };
    assert!(a.sat_fraction.unwrap() >= 0.99);
    // n = 20 keeps brute force cheap.
    let cfg = SweepConfig::new(Experiment::Decision, 20, 3, vec![0.1], 50, 0);
    let r = run_decision_sweep(&cfg).unwrap();
    for rec in &r.points[0].records {
        let f = generate_random_ksat(20, 2, 3, rec.seed).unwrap();
        assert_eq!(brute_force_maxsat(&f).unwrap().min_unsat, 0);
    }
}

#[test]
fn infinite_temperature_sweep_counts_ground_states() {
    let mut cfg = SweepConfig::new(Experiment::Gibbs, 10, 3, vec![2.0, 4.5, 6.0], 20, 4);
    cfg.gibbs.betas = vec![0.0];
    cfg.gibbs.method = GibbsMethod::Exact;
    let r = run_gibbs_sweep(&cfg).unwrap();
    for (p, point) in r.points.iter().enumerate() {
        let mut counts = 0.0;
        for i in 0..cfg.instances {
            let f = generate_random_ksat(10, point.m, 3, instance_seed(4, p, i)).unwrap();
            counts += ground_states(&build_hamiltonian(&f).unwrap()).unwrap().1.len() as f64 / 1024.0;
        }
        let Aggregates::Gibbs(g) = &point.aggregates else {
            panic!()
        };
        assert!((g.per_beta[0].exact.unwrap().mean - counts / 20.0).abs() < 1e-15);
    }
}

#[test]
fn deep_qaoa_on_satisfiable_instances_nearly_solves_them() {
    let mut cfg = SweepConfig::new(Experiment::Qaoa, 4, 3, vec![0.25], 10, 6);
    cfg.qaoa.depths = vec![6];
    cfg.qaoa.budget = OptimizerBudget {
        restarts: 10,
        iterations: 500,
    };
    let r = run_qaoa_sweep(&cfg).unwrap();
    let Aggregates::Qaoa(q) = &r.points[0].aggregates else {
        panic!()
    };
    assert_eq!(q.satisfiable_fraction, Some(1.0));
    assert!(q.per_depth[0].error.unwrap().mean < 0.05, "{q:?}");
}
