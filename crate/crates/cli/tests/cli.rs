use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use drp_cli::commands::DRP_HEADER;
use drp_cli::verify::{EQUIVALENCE, M0_CARRIER};
use drp_cli::{compare_report, parse_config, verify, CompareFlag, VerifyOptions};
use tempfile::TempDir;

const FIGURE_GRID: &str = "h=0.03125\ntau=0.028125\nn_x=64\nn_t=36\n";

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_drp-lab"))
}

fn write_cfg(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p
}

fn run_ok(cmd: &mut Command) -> Output {
    let out = cmd.output().unwrap();
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    out
}

fn data_rows(csv: &str) -> Vec<Vec<String>> {
    csv.lines()
        .skip(1)
        .filter(|l| !l.starts_with('#'))
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

#[test]
fn drp_report_rows() {
    let out = run_ok(bin().args(["drp", "--h", "1"]));
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().next(), Some(DRP_HEADER));
    let rows = data_rows(&text);
    assert_eq!(rows.len(), 2);
    assert_eq!(rows[0][0], "paper");
    assert_eq!(rows[1][0], "oracle");
    let v: Vec<f64> = rows[1][1..].iter().map(|c| c.parse().unwrap()).collect();
    assert!(v[0].abs() < 1e-8);
    assert!((v[1] - std::f64::consts::FRAC_2_PI).abs() < 1e-7);
    assert!((v[2] + std::f64::consts::FRAC_2_PI).abs() < 1e-7);
    assert!((v[3] - 0.0373773).abs() < 1e-6);
    let closed: Vec<f64> = rows[0][1..].iter().map(|c| c.parse().unwrap()).collect();
    assert!((closed[1] + 0.5697450).abs() < 1e-6);
    assert!((closed[3] - 3.0496061).abs() < 1e-6);
}

#[test]
fn drp_oracle_scales_with_h() {
    let one =
        data_rows(&String::from_utf8(run_ok(bin().args(["drp", "--h", "1"])).stdout).unwrap());
    let two =
        data_rows(&String::from_utf8(run_ok(bin().args(["drp", "--h", "2"])).stdout).unwrap());
    for c in 1..4 {
        let a: f64 = one[1][c].parse().unwrap();
        let b: f64 = two[1][c].parse().unwrap();
        assert!((b - 0.5 * a).abs() < 1e-10, "column {c}");
    }
    let e1: f64 = one[1][4].parse().unwrap();
    let e2: f64 = two[1][4].parse().unwrap();
    assert!((e1 - e2).abs() < 1e-9);
}

#[test]
fn drp_rejects_bad_spacing() {
    let out = bin().args(["drp", "--h", "0"]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    let out = bin().args(["drp"]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn usage_and_parse_errors_exit_one() {
    let dir = TempDir::new().unwrap();
    let bad = write_cfg(dir.path(), "bad.cfg", "scheme=Lax\nh=abc\n");
    for sub in ["analyze", "simulate", "verify"] {
        let out = bin().args([sub, "--config"]).arg(&bad).output().unwrap();
        assert_eq!(out.status.code(), Some(1), "{sub}");
        assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));
    }
    assert_eq!(
        bin().arg("nonsense").output().unwrap().status.code(),
        Some(1)
    );
    let missing = dir.path().join("absent.cfg");
    assert_eq!(
        bin()
            .args(["verify", "--config"])
            .arg(&missing)
            .output()
            .unwrap()
            .status
            .code(),
        Some(1)
    );
    assert!(bin().arg("--help").output().unwrap().status.success());
}

#[test]
fn simulate_writes_csv_and_svg() {
    let dir = TempDir::new().unwrap();
    let out_path = dir.path().join("lw.csv");
    let cfg = write_cfg(
        dir.path(),
        "lw.cfg",
        &format!(
            "scheme=LaxWendroff\n{FIGURE_GRID}output_path={}\n",
            out_path.display()
        ),
    );
    run_ok(bin().args(["simulate", "--svg", "--config"]).arg(&cfg));
    let csv = fs::read_to_string(&out_path).unwrap();
    assert_eq!(csv.lines().next(), Some("step,time,l2"));
    assert_eq!(data_rows(&csv).len(), 36);
    assert!(csv.contains("# scheme=LaxWendroff startup=none"));
    let svg = fs::read_to_string(out_path.with_extension("svg")).unwrap();
    let doc = roxmltree::Document::parse(&svg).unwrap();
    assert_eq!(doc.root_element().tag_name().name(), "svg");
    assert!(!svg.contains("href"));
}

#[test]
fn simulate_reports_three_level_startup() {
    let dir = TempDir::new().unwrap();
    let cfg = write_cfg(
        dir.path(),
        "lf.cfg",
        &format!("scheme=Leapfrog\nstartup=single-step-lax\n{FIGURE_GRID}"),
    );
    let csv =
        String::from_utf8(run_ok(bin().args(["simulate", "--config"]).arg(&cfg)).stdout).unwrap();
    assert!(csv.contains("startup=single-step-lax"));
}

#[test]
fn simulate_blowup_exits_three() {
    let dir = TempDir::new().unwrap();
    let cfg = write_cfg(
        dir.path(),
        "t.cfg",
        "scheme=tuned\nh=0.03125\ntau=0.028125\nn_x=64\nn_t=600\n",
    );
    let out = bin()
        .args(["simulate", "--config"])
        .arg(&cfg)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn svg_without_destination_is_usage_error() {
    let dir = TempDir::new().unwrap();
    let cfg = write_cfg(dir.path(), "lax.cfg", &format!("scheme=Lax\n{FIGURE_GRID}"));
    let out = bin()
        .args(["simulate", "--svg", "--config"])
        .arg(&cfg)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn compare_against_itself_ties() {
    let cfg = parse_config(&format!("scheme=Lax\n{FIGURE_GRID}")).unwrap();
    let r = compare_report(&[cfg.clone(), cfg], false).unwrap();
    assert_eq!(r.flag, CompareFlag::PassTie);
    assert_eq!(r.csv.lines().next(), Some("step,time,Lax_l2,Lax-2_l2"));
    for row in data_rows(&r.csv) {
        assert_eq!(row[2], row[3]);
    }
    assert!(r.csv.ends_with("first_minimal=PASS-tie\n"));
}

#[test]
fn compare_three_schemes() {
    let cfgs: Vec<_> = ["LaxWendroff", "Lax", "Leapfrog"]
        .iter()
        .map(|s| parse_config(&format!("scheme={s}\n{FIGURE_GRID}")).unwrap())
        .collect();
    let r = compare_report(&cfgs, true).unwrap();
    assert_eq!(
        r.csv.lines().next(),
        Some("step,time,LaxWendroff_l2,Lax_l2,Leapfrog_l2")
    );
    let rows = data_rows(&r.csv);
    assert_eq!(rows.len(), 36);
    assert!(rows.iter().all(|row| row.len() == 5));
    assert!(r.csv.contains("first_minimal="));
    roxmltree::Document::parse(r.svg.as_deref().unwrap()).unwrap();
}

#[test]
fn compare_records_blowup_in_band() {
    let grid = "h=0.03125\ntau=0.028125\nn_x=64\nn_t=600\n";
    let cfgs = vec![
        parse_config(&format!("scheme=tuned\n{grid}")).unwrap(),
        parse_config(&format!("scheme=Lax\n{grid}")).unwrap(),
    ];
    let r = compare_report(&cfgs, false).unwrap();
    assert_eq!(
        r.csv.lines().next(),
        Some("step,time,tuned_l2_blowup,Lax_l2")
    );
    assert!(data_rows(&r.csv).last().unwrap()[2] == "nan");
    assert_eq!(r.flag, CompareFlag::Deviation);
    assert_eq!(r.minimal, "Lax_l2");
}

#[test]
fn compare_needs_matching_grids() {
    let a = parse_config(&format!("scheme=Lax\n{FIGURE_GRID}")).unwrap();
    let b = parse_config("scheme=Lax\nh=0.03125\ntau=0.028125\nn_x=64\nn_t=30\n").unwrap();
    assert!(compare_report(&[a.clone(), b], false).is_err());
    assert!(compare_report(&[a], false).is_err());
}

#[test]
fn compare_binary_is_byte_stable() {
    let dir = TempDir::new().unwrap();
    let tuned = write_cfg(
        dir.path(),
        "tuned.cfg",
        &format!("scheme=tuned\n{FIGURE_GRID}"),
    );
    let lax = write_cfg(dir.path(), "lax.cfg", &format!("scheme=Lax\n{FIGURE_GRID}"));
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for p in [&a, &b] {
        run_ok(
            bin()
                .args(["compare", "--svg", "--config"])
                .arg(&tuned)
                .arg("--config")
                .arg(&lax)
                .arg("--out")
                .arg(p),
        );
    }
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
    assert_eq!(
        fs::read(a.with_extension("svg")).unwrap(),
        fs::read(b.with_extension("svg")).unwrap()
    );
    assert!(!fs::read_to_string(&a).unwrap().contains('\r'));
}

#[test]
fn verify_lax_small_grid() {
    let cfg = parse_config("scheme=Lax\nh=0.25\ntau=0.225\nn_x=8\nn_t=6\n").unwrap();
    let r = verify(&cfg, VerifyOptions::default()).unwrap();
    assert!(r.passed(), "{}", r.text());
    let detail = &r.get(EQUIVALENCE).unwrap().detail;
    let dev: f64 = detail.split_whitespace().nth(2).unwrap().parse().unwrap();
    assert!(dev < 1e-12);
}

#[test]
fn verify_crank_nicolson_uses_corner_path() {
    let cfg = parse_config("scheme=CrankNicolson\nh=0.25\ntau=0.2\nn_x=8\nn_t=6\n").unwrap();
    let r = verify(&cfg, VerifyOptions::default()).unwrap();
    assert!(r.passed(), "{}", r.text());
    assert!(r.text().contains("SKIP min-norm solve"));
}

#[test]
fn corrupted_m0_is_named() {
    let cfg = parse_config("scheme=Lax\nh=0.25\ntau=0.225\nn_x=8\nn_t=6\n").unwrap();
    let r = verify(&cfg, VerifyOptions { corrupt_m0: true }).unwrap();
    assert!(!r.passed());
    assert_eq!(r.failing(), vec![M0_CARRIER]);
    assert!(r.text().contains("FAIL M0 carrier property"));
}

#[test]
fn verify_binary_exit_status() {
    let dir = TempDir::new().unwrap();
    for scheme in [
        "Lax",
        "Leapfrog",
        "LaxWendroff",
        "CrankNicolson",
        "tuned",
        "tuned-oracle",
    ] {
        let cfg = write_cfg(
            dir.path(),
            "v.cfg",
            &format!("scheme={scheme}\nh=0.25\ntau=0.2\nn_x=8\nn_t=6\n"),
        );
        let out = run_ok(bin().args(["verify", "--config"]).arg(&cfg));
        assert!(
            String::from_utf8(out.stdout)
                .unwrap()
                .ends_with("verify: PASS\n"),
            "{scheme}"
        );
    }
}

#[test]
fn analyze_dumps_matrices() {
    let dir = TempDir::new().unwrap();
    let cfg = write_cfg(
        dir.path(),
        "a.cfg",
        "scheme=tuned\nh=0.25\ntau=0.2\nn_x=8\nn_t=6\n",
    );
    let dump = dir.path().join("mats");
    let out = run_ok(
        bin()
            .args(["analyze", "--config"])
            .arg(&cfg)
            .arg("--dump-dir")
            .arg(&dump),
    );
    let csv = String::from_utf8(out.stdout).unwrap();
    assert_eq!(csv.lines().next(), Some("quantity,index,value"));
    for q in [
        "m1_singular_value,6,",
        "m2_singular_value,5,",
        "norm_bound,0,",
        "f3,0,",
    ] {
        assert!(csv.contains(q), "{q}");
    }
    let m1 = fs::read_to_string(dump.join("m1.csv")).unwrap();
    assert_eq!(m1.lines().count(), 7);
    let m0 = fs::read_to_string(dump.join("m0.csv")).unwrap();
    assert!(m0.lines().all(|l| l.split(',').count() == 6));
    assert!(dump.join("f.csv").exists() && dump.join("m2.csv").exists());
}
