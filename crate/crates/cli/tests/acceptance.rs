//! Acceptance criteria that live on the command-line surface: the dyadic
//! density sweep (CSV emission + strict density growth) and byte-identical
//! reproduction of outputs from identical manifests.

use std::fs;
use std::path::Path;
use std::process::Command;

use boxdim_cli::experiment::run_sweep;

fn boxdim() -> Command {
    Command::new(env!("CARGO_BIN_EXE_boxdim"))
}

#[test]
fn acceptance_09_dyadic_density_sweep() {
    let dir = tempfile::tempdir().unwrap();
    // The generator re-verifies K_{2,2}-freeness on every call, so a
    // completed sweep certifies all ten scales.
    let out = run_sweep("dyadic-density", 0, Some(10), dir.path()).unwrap();
    assert_eq!(out.rows.len(), 10);
    let densities: Vec<f64> = out.rows.iter().map(|r| r.e as f64 / r.n as f64).collect();
    for m in 4..10 {
        assert!(
            densities[m - 1] < densities[m],
            "density must strictly increase from m={} to m={}",
            m,
            m + 1
        );
    }
    let csv = fs::read_to_string(&out.csv_path).unwrap();
    assert!(csv.starts_with("n,e,bound,ratio,seed,wall_ms\n"));
    assert_eq!(csv.lines().count(), 11);
    assert!(out.dat_path.exists() && out.manifest_path.exists());
    println!(
        "ACCEPTANCE 9 PASS: dyadic sweep m=1..10 K_2,2-free, densities {:?}",
        densities
            .iter()
            .map(|d| (d * 100.0).round() / 100.0)
            .collect::<Vec<_>>()
    );
}

#[test]
fn other_sweep_suites_produce_sound_rows() {
    let dir = tempfile::tempdir().unwrap();
    let lines = run_sweep(
        "lines-density",
        0,
        Some(5),
        dir.path().join("lines").as_path(),
    )
    .unwrap();
    assert_eq!(lines.rows.len(), 4); // k = 2..=5
    for w in lines.rows.windows(2) {
        let d0 = w[0].e as f64 / w[0].n as f64;
        let d1 = w[1].e as f64 / w[1].n as f64;
        assert!(d0 < d1, "lines density e/n = k/3 must strictly increase");
    }

    let sound = run_sweep(
        "numedges-soundness",
        3,
        Some(64),
        dir.path().join("sound").as_path(),
    )
    .unwrap();
    assert!(!sound.rows.is_empty());
    for r in &sound.rows {
        assert!(r.ratio <= 1.0, "measured edges must stay under the bound");
    }

    assert!(run_sweep("no-such-suite", 0, None, dir.path()).is_err());
}

fn strip_wall_ms(csv: &str) -> String {
    csv.lines()
        .map(|line| {
            let cut = line.rfind(',').unwrap();
            &line[..cut]
        })
        .collect::<Vec<_>>()
        .join("\n")
}

#[test]
fn acceptance_12_manifest_reruns_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();

    // Sweep twice with the same manifest parameters.
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    for target in [&a, &b] {
        let status = boxdim()
            .args([
                "experiment",
                "sweep",
                "--suite",
                "dyadic-density",
                "--seed",
                "7",
            ])
            .args(["--max-scale", "6", "--out", target.to_str().unwrap()])
            .status()
            .unwrap();
        assert!(status.success());
    }
    let dat_a = fs::read(a.join("results.dat")).unwrap();
    let dat_b = fs::read(b.join("results.dat")).unwrap();
    assert_eq!(dat_a, dat_b, "gnuplot data must be byte-identical");
    let man_a = fs::read_to_string(a.join("manifest.json")).unwrap();
    let man_b = fs::read_to_string(b.join("manifest.json")).unwrap();
    let canon = |s: &str, from: &Path| s.replace(from.to_str().unwrap(), "OUT");
    assert_eq!(canon(&man_a, &a), canon(&man_b, &b));
    let csv_a = fs::read_to_string(a.join("results.csv")).unwrap();
    let csv_b = fs::read_to_string(b.join("results.csv")).unwrap();
    // Every column except the measured wall-clock one.
    assert_eq!(strip_wall_ms(&csv_a), strip_wall_ms(&csv_b));

    // Generator and graph outputs, twice each.
    let config = dir.path().join("config.json");
    let config2 = dir.path().join("config2.json");
    for target in [&config, &config2] {
        let status = boxdim()
            .args([
                "gen",
                "dyadic",
                "--m",
                "4",
                "--out",
                target.to_str().unwrap(),
            ])
            .status()
            .unwrap();
        assert!(status.success());
    }
    assert_eq!(fs::read(&config).unwrap(), fs::read(&config2).unwrap());

    let (g1, g2) = (dir.path().join("g1.json"), dir.path().join("g2.json"));
    for target in [&g1, &g2] {
        let status = boxdim()
            .args(["graph", "incidence", "--config", config.to_str().unwrap()])
            .args(["--out", target.to_str().unwrap()])
            .status()
            .unwrap();
        assert!(status.success());
    }
    assert_eq!(fs::read(&g1).unwrap(), fs::read(&g2).unwrap());
    println!("ACCEPTANCE 12 PASS: sweep data, generator and graph outputs byte-identical");
}
