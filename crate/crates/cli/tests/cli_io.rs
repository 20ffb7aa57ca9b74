//! End-to-end CLI tests against committed golden outputs.
//!
//! Metadata and headers must match byte for byte; numeric cells are compared
//! at 1e-12 relative so the goldens survive libm differences across
//! platforms. Byte-for-byte rerun stability is covered by the acceptance
//! suite.

use std::path::Path;
use std::process::Command;

fn run_to_temp(args: &[&str]) -> (tempfile::TempDir, String) {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out.csv");
    let output = Command::new(env!("CARGO_BIN_EXE_dirtymac"))
        .args(args)
        .arg("--out")
        .arg(&out)
        .output()
        .expect("binary runs");
    assert!(
        output.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&output.stderr)
    );
    let text = std::fs::read_to_string(&out).unwrap();
    (dir, text)
}

fn assert_matches_golden(golden_name: &str, produced: &str) {
    let golden_path = Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/golden")
        .join(golden_name);
    let golden = std::fs::read_to_string(&golden_path).unwrap();
    let (g_lines, p_lines): (Vec<&str>, Vec<&str>) =
        (golden.lines().collect(), produced.lines().collect());
    assert_eq!(g_lines.len(), p_lines.len(), "{golden_name}: line count");
    let mut seen_header = false;
    for (k, (g, p)) in g_lines.iter().zip(&p_lines).enumerate() {
        if g.starts_with('#') || !seen_header {
            seen_header = seen_header || !g.starts_with('#');
            assert_eq!(g, p, "{golden_name}:{}", k + 1);
            continue;
        }
        let (gc, pc): (Vec<&str>, Vec<&str>) = (g.split(',').collect(), p.split(',').collect());
        assert_eq!(gc.len(), pc.len(), "{golden_name}:{}: cell count", k + 1);
        for (gv, pv) in gc.iter().zip(&pc) {
            match (gv.parse::<f64>(), pv.parse::<f64>()) {
                (Ok(a), Ok(b)) => {
                    let tol = 1e-12 * a.abs().max(1.0);
                    assert!(
                        (a - b).abs() <= tol,
                        "{golden_name}:{}: {gv} vs {pv}",
                        k + 1
                    );
                }
                _ => assert_eq!(gv, pv, "{golden_name}:{}", k + 1),
            }
        }
    }
}

#[test]
fn sweep_output_matches_golden() {
    let (_dir, text) = run_to_temp(&["outage-sweep", "--stop", "2", "--step", "1"]);
    assert_matches_golden("sweep_small.csv", &text);
}

#[test]
fn grid_output_matches_golden() {
    let (_dir, text) = run_to_temp(&[
        "coverage-grid",
        "--grid",
        "4x3",
        "--theta-fgm",
        "0.5",
        "--target-rate",
        "0.4",
    ]);
    assert_matches_golden("grid_small.csv", &text);
}

#[test]
fn config_file_feeds_the_sweep() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("sweep.conf");
    std::fs::write(&cfg, "stop = 2\nstep = 1\nfamilies = fgm\ntheta-fgm = -1,1\n").unwrap();
    let out = dir.path().join("out.csv");
    let output = Command::new(env!("CARGO_BIN_EXE_dirtymac"))
        .args(["outage-sweep", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(&out)
        .output()
        .unwrap();
    assert!(output.status.success());
    let text = std::fs::read_to_string(&out).unwrap();
    assert!(text.contains("gbar1_db,op_fgm_t-1_mu1,op_fgm_t1_mu1"));
    assert_eq!(text.lines().filter(|l| !l.starts_with('#')).count(), 4);
}

#[test]
fn bad_inputs_exit_nonzero() {
    let cases: &[&[&str]] = &[
        &["outage-sweep", "--preset", "fig9", "--out", "x.csv"],
        &["outage-sweep", "--families", "gauss", "--out", "x.csv"],
        &["outage-sweep", "--theta-fgm", "3", "--out", "x.csv"],
        &["coverage-grid", "--grid", "50", "--out", "x.csv"],
        &["coverage-grid", "--method", "magic", "--out", "x.csv"],
        &["validate", "everything"],
    ];
    for args in cases {
        let output = Command::new(env!("CARGO_BIN_EXE_dirtymac"))
            .args(*args)
            .current_dir(std::env::temp_dir())
            .output()
            .unwrap();
        assert!(!output.status.success(), "{args:?} unexpectedly succeeded");
        assert!(!output.stderr.is_empty(), "{args:?} gave no error message");
    }
}

#[test]
fn validate_writes_csv_report() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.csv");
    let output = Command::new(env!("CARGO_BIN_EXE_dirtymac"))
        .args(["validate", "outage", "--seed", "7", "--out"])
        .arg(&out)
        .output()
        .unwrap();
    assert!(output.status.success());
    let text = std::fs::read_to_string(&out).unwrap();
    assert!(text.starts_with("# dirtymac validate\n# suite = outage\n# seed = 7\n"));
    assert!(text.contains("suite,check,tolerance,measured,pass"));
    assert!(text.contains("outage,closed_vs_generic,"));
    let stdout = String::from_utf8(output.stdout).unwrap();
    assert!(stdout.contains("checks passed"));
}
