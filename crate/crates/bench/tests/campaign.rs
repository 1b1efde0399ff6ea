use std::process::Command;

use decode_bench::{
    compare_schedules_on, run_campaign, run_campaign_on, write_csv, CampaignConfig, CampaignReport,
    ScheduleKind, Workload,
};
use qc_layered_bp::demo;
use qc_layered_bp::BaseMatrix;

fn quick(snr: Vec<f64>) -> CampaignConfig {
    CampaignConfig {
        snr_list: snr,
        max_iterations: 20,
        early_termination: true,
        batch_size: 8,
        min_trials: 64,
        seed: 5,
        workers: 1,
        ..CampaignConfig::default()
    }
}

/// Cells minus the timing fields, which vary from run to run.
fn deterministic_part(report: &CampaignReport) -> Vec<(u64, usize, usize, u64)> {
    report
        .cells
        .iter()
        .map(|c| (c.snr.to_bits(), c.frame_errors, c.total_iterations, c.beta.to_bits()))
        .collect()
}

#[test]
fn single_check_code_at_high_snr() {
    let base = BaseMatrix::from_rows(&[&[0, 0]], 1).unwrap();
    let report = run_campaign_on(&base, &quick(vec![1000.0])).unwrap();
    let cell = &report.cells[0];
    assert_eq!(cell.fer, 0.0);
    assert_eq!(cell.avg_iterations, 1.0);
    assert_eq!(cell.frames, 64);
    assert_eq!(cell.total_expanded_edges, 2);
}

#[test]
fn reports_do_not_depend_on_workers_or_batching() {
    let base = demo::desk_4x8_z32();
    let reference = run_campaign_on(&base, &quick(vec![1.5, 2.0])).unwrap();
    for (workers, batch) in [(1, 8), (3, 8), (2, 64), (1, 1)] {
        let cfg = CampaignConfig {
            workers,
            batch_size: batch,
            ..quick(vec![1.5, 2.0])
        };
        let report = run_campaign_on(&base, &cfg).unwrap();
        assert_eq!(deterministic_part(&report), deterministic_part(&reference));
    }
    let other_seed = run_campaign_on(&base, &CampaignConfig { seed: 6, ..quick(vec![1.5, 2.0]) }).unwrap();
    assert_ne!(deterministic_part(&other_seed), deterministic_part(&reference));
}

#[test]
fn random_syndrome_workload_matches_all_zero_statistics() {
    // Decoding toward a coset is statistically equivalent to decoding the
    // all-zero word, so the frame error rates agree within sampling noise.
    let base = demo::desk_4x8_z32();
    let cfg = CampaignConfig { min_trials: 512, ..quick(vec![1.6]) };
    let zero = run_campaign_on(&base, &cfg).unwrap();
    let coset = run_campaign_on(
        &base,
        &CampaignConfig {
            workload: Workload::RandomSyndrome,
            ..cfg.clone()
        },
    )
    .unwrap();
    let (a, b) = (zero.cells[0].fer, coset.cells[0].fer);
    let p = (a + b) / 2.0;
    let sd = (2.0 * p * (1.0 - p) / 512.0).sqrt();
    assert!(p > 0.05 && p < 0.95, "operating point {p} is uninformative");
    assert!((a - b).abs() <= 4.0 * sd, "all-zero {a} vs coset {b}");
}

#[test]
fn unmergeable_matrix_gives_identical_schedules() {
    let base = demo::desk_4x8_z32();
    let cmp = compare_schedules_on(&base, &quick(vec![2.0])).unwrap();
    assert_eq!(cmp.single_layers(), 4);
    assert_eq!(cmp.merged_layers(), 4);
    assert_eq!(deterministic_part(&cmp.single), deterministic_part(&cmp.merged));
}

#[test]
fn mergeable_matrix_uses_fewer_layers() {
    let base = BaseMatrix::from_rows(&[&[0, 1, -1, -1], &[1, 0, 2, 3], &[-1, -1, 0, 1]], 4).unwrap();
    let cmp = compare_schedules_on(&base, &quick(vec![4.0])).unwrap();
    assert_eq!(cmp.single_layers(), 3);
    assert_eq!(cmp.merged_layers(), 2);
    assert_eq!(cmp.merged.code.as_ref().unwrap().schedule, ScheduleKind::Merged);
}

#[test]
fn config_validation() {
    let base = demo::desk_4x8_z32();
    for bad in [
        quick(vec![]),
        quick(vec![-1.0]),
        CampaignConfig { batch_size: 0, ..quick(vec![1.0]) },
        CampaignConfig { min_trials: 4, ..quick(vec![1.0]) },
        CampaignConfig { max_iterations: 0, ..quick(vec![1.0]) },
        CampaignConfig { workers: 0, ..quick(vec![1.0]) },
    ] {
        let err = run_campaign_on(&base, &bad).unwrap_err();
        assert_eq!(err.exit_code(), 2, "{err}");
    }
    let missing = CampaignConfig {
        matrix_path: "/nonexistent/matrix.txt".into(),
        ..quick(vec![1.0])
    };
    assert_eq!(run_campaign(&missing).unwrap_err().exit_code(), 3);
}

#[test]
fn csv_has_one_row_per_snr() {
    let base = demo::desk_4x8_z32();
    let report = run_campaign_on(&base, &quick(vec![1.0, 2.0, 3.0])).unwrap();
    let mut buf = Vec::new();
    write_csv(&report, &mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 4);
    assert!(lines[1..].iter().all(|l| l.split(',').count() == 8));
}

fn bench_bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_decode-bench"))
}

#[test]
fn cli_run_writes_csv_and_json() {
    let dir = tempfile::tempdir().unwrap();
    let matrix = dir.path().join("h.txt");
    std::fs::write(&matrix, demo::DESK_4X8_Z32).unwrap();

    let csv_out = dir.path().join("out.csv");
    let status = bench_bin()
        .args(["run", "--snr", "1.5,2.5", "--iters", "10", "--batch", "4", "--trials", "8", "--early-term"])
        .arg("--matrix")
        .arg(&matrix)
        .arg("--out")
        .arg(&csv_out)
        .status()
        .unwrap();
    assert!(status.success());
    let text = std::fs::read_to_string(&csv_out).unwrap();
    assert_eq!(text.lines().count(), 3);
    assert!(text.starts_with("snr,fer,avg_iterations,"));

    let json_out = dir.path().join("out.json");
    let status = bench_bin()
        .args(["run", "--snr", "2", "--trials", "8", "--batch", "8", "--format", "json", "--encode"])
        .arg("--matrix")
        .arg(&matrix)
        .arg("--out")
        .arg(&json_out)
        .status()
        .unwrap();
    assert!(status.success());
    let report: CampaignReport = serde_json::from_str(&std::fs::read_to_string(&json_out).unwrap()).unwrap();
    assert_eq!(report.cells.len(), 1);
    assert_eq!(report.settings.unwrap().workload, Workload::RandomSyndrome);
}

#[test]
fn cli_schedule_dump() {
    let dir = tempfile::tempdir().unwrap();
    let matrix = dir.path().join("h.txt");
    std::fs::write(&matrix, "3 4 4\n0 1 -1 -1\n1 0 2 3\n-1 -1 0 1\n").unwrap();
    let out = bench_bin()
        .args(["schedule", "--dump-schedule", "--matrix"])
        .arg(&matrix)
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("layers 2\n"));
    assert!(text.ends_with("0 2\n1\n"));
}

#[test]
fn cli_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.txt");
    std::fs::write(&bad, "2 2 4\n0 1\n").unwrap();
    let status = bench_bin().args(["schedule", "--matrix"]).arg(&bad).status().unwrap();
    assert_eq!(status.code(), Some(2));

    let status = bench_bin()
        .args(["schedule", "--matrix", "/nonexistent/h.txt"])
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(3));

    let good = dir.path().join("h.txt");
    std::fs::write(&good, demo::DESK_4X8_Z32).unwrap();
    let status = bench_bin()
        .args(["run", "--snr", "2", "--trials", "4", "--batch", "8", "--matrix"])
        .arg(&good)
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(2));

    let status = bench_bin()
        .args(["run", "--snr", "2", "--trials", "8", "--batch", "8", "--out", "/nonexistent/dir/o.csv", "--matrix"])
        .arg(&good)
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(3));
}
