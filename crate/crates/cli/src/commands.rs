//! Report builders behind the subcommands. Each returns the report text so
//! the binary only decides where it goes.

use std::fmt::Write;
use std::thread;

use drp_core::drp::{integrated_error, optimize_drp, paper_drp_closed_form, SpatialCoefficients};
use drp_core::matrix_form::{build_system, exact_field, residual_f};
use drp_core::sylvester::{
    exact_singular_values, min_norm_solve, norm_bound, objectives, paper_m1_block_values,
};
use drp_core::{run, Error, ErrorSeries, SimulationConfig, SimulationRun};

use crate::config::RunConfig;
use crate::error::{CliError, CliResult};
use crate::format::{matrix_csv, num, QuantityTable};
use crate::svg::line_chart;

/// Amplification samples used by `analyze`.
const AMPLIFICATION_SAMPLES: usize = 721;

pub const DRP_HEADER: &str = "source,beta_x,delta_x,epsilon_x,E";

/// Printed closed-form and optimal spatial weights at spacing `h`.
pub fn drp_report(h: f64) -> CliResult<String> {
    let rows: [(&str, SpatialCoefficients); 2] = [
        ("paper", paper_drp_closed_form(h)?),
        ("oracle", optimize_drp(h)?),
    ];
    let mut out = format!("{DRP_HEADER}\n");
    for (source, sc) in rows {
        let e = integrated_error(&sc).value;
        let _ = writeln!(
            out,
            "{source},{},{},{},{}",
            num(sc.beta_x),
            num(sc.delta_x),
            num(sc.epsilon_x),
            num(e)
        );
    }
    Ok(out)
}

#[derive(Debug, Clone)]
pub struct AnalyzeReport {
    pub csv: String,
    /// `(file stem, headerless CSV)` for `m1`, `m2`, `m0` and `f`.
    pub matrices: Vec<(&'static str, String)>,
}

/// Spectra, objectives and the norm bound for the configured instance, with
/// the exact travelling wave as `U_exact`.
pub fn analyze_report(cfg: &RunConfig) -> CliResult<AnalyzeReport> {
    let d = cfg.discretization()?;
    let s = cfg.coefficients()?;
    let exact = exact_field(cfg.k, &d);
    let sys = build_system(&s, &d, &exact)?;
    let f = residual_f(&sys, &exact)?;
    let (sv1, sv2) = exact_singular_values(&sys);
    let obj = objectives(&s, &sys.m0);

    let mut t = QuantityTable::default();
    t.push("sigma", 0, cfg.sigma());
    t.push(
        "max_amplification",
        0,
        s.max_amplification(AMPLIFICATION_SAMPLES)?,
    );
    t.push_all("m1_singular_value", &sv1);
    t.push_all("m2_singular_value", &sv2);
    t.push_all("m1_block_value", &paper_m1_block_values(&s));
    t.push_all("m2_block_value", &[s.alpha * s.alpha, s.gamma * s.gamma]);
    t.push("f1", 0, obj.f1);
    t.push("f2", 0, obj.f2);
    t.push("f3", 0, obj.f3);
    let norm_u = exact.interior.norm();
    t.push("norm_u_exact", 0, norm_u);
    t.push("norm_f", 0, f.norm());
    if s.shift_operator_vanishes() {
        let sol = min_norm_solve(&sys.m1, &sys.m2, &f)?;
        t.push("rank_m1", 0, sol.rank1 as f64);
        t.push("rank_m2", 0, sol.rank2 as f64);
        t.push("norm_f11", 0, sol.rhs.f11.norm());
        t.push("norm_bound", 0, norm_bound(&s, &d, norm_u, obj.f3));
        t.push("min_norm_squared", 0, sol.squared_norm());
        t.push("unresolved_norm", 0, sol.unresolved_norm());
    }
    Ok(AnalyzeReport {
        csv: t.finish(),
        matrices: vec![
            ("m1", matrix_csv(&sys.m1)),
            ("m2", matrix_csv(&sys.m2)),
            ("m0", matrix_csv(&sys.m0)),
            ("f", matrix_csv(&f)),
        ],
    })
}

#[derive(Debug, Clone)]
pub struct SeriesReport {
    pub csv: String,
    pub svg: Option<String>,
}

fn simulation_config(cfg: &RunConfig) -> CliResult<SimulationConfig> {
    let mut sc = SimulationConfig::new(cfg.coefficients()?, cfg.discretization()?, cfg.k);
    sc.startup = cfg.startup;
    Ok(sc)
}

/// `step,time,l2` for one run; a blow-up is an error (exit status 3).
pub fn simulate_report(cfg: &RunConfig, svg: bool) -> CliResult<SeriesReport> {
    let sc = simulation_config(cfg)?;
    let r = match run(&sc) {
        Ok(r) => r,
        Err(Error::BlowUp { step, .. }) => return Err(CliError::BlowUp { step }),
        Err(e) => return Err(e.into()),
    };
    let mut csv = String::from("step,time,l2\n");
    let times: Vec<f64> = (1..=sc.disc.n_t).map(|n| sc.disc.t(n)).collect();
    for (n, (t, e)) in times.iter().zip(&r.errors.per_step).enumerate() {
        let _ = writeln!(csv, "{},{},{}", n + 1, num(*t), num(*e));
    }
    let startup = r.startup.map_or("none", |s| s.label());
    let _ = writeln!(csv, "# scheme={} startup={startup}", cfg.scheme.label());
    let svg = svg.then(|| {
        line_chart(
            &format!("L2 error, {}", cfg.scheme.label()),
            &times,
            &[(cfg.scheme.label().to_string(), r.errors.per_step.clone())],
        )
    });
    Ok(SeriesReport { csv, svg })
}

/// Whether the first configured scheme ends with the smallest error.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CompareFlag {
    Pass,
    PassTie,
    Deviation,
}

impl CompareFlag {
    pub fn label(self) -> &'static str {
        match self {
            CompareFlag::Pass => "PASS",
            CompareFlag::PassTie => "PASS-tie",
            CompareFlag::Deviation => "DEVIATION",
        }
    }
}

#[derive(Debug, Clone)]
pub struct CompareReport {
    pub csv: String,
    pub flag: CompareFlag,
    /// Column name of the smallest final error.
    pub minimal: String,
    pub svg: Option<String>,
}

#[derive(Debug)]
enum Outcome {
    Done(Box<SimulationRun>),
    BlowUp(ErrorSeries),
}

impl Outcome {
    fn series(&self) -> &[f64] {
        match self {
            Outcome::Done(r) => &r.errors.per_step,
            Outcome::BlowUp(p) => &p.per_step,
        }
    }

    fn final_error(&self) -> f64 {
        match self {
            Outcome::Done(r) => r.errors.final_error,
            Outcome::BlowUp(_) => f64::INFINITY,
        }
    }
}

/// Runs every config (concurrently) and tabulates `step,time,<name>_l2,...`.
///
/// All configs must share `n_t` and `tau`. A run that blows up keeps its
/// column, renamed `<name>_l2_blowup`, with `nan` from the blow-up step on.
pub fn compare_report(cfgs: &[RunConfig], svg: bool) -> CliResult<CompareReport> {
    if cfgs.len() < 2 {
        return Err(CliError::Usage("compare needs at least two configs".into()));
    }
    let sims = cfgs
        .iter()
        .map(simulation_config)
        .collect::<CliResult<Vec<_>>>()?;
    let (n_t, tau) = (sims[0].disc.n_t, sims[0].disc.tau);
    if sims.iter().any(|s| s.disc.n_t != n_t || s.disc.tau != tau) {
        return Err(CliError::Usage(
            "compare needs equal n_t and tau in every config".into(),
        ));
    }

    let results: Vec<drp_core::Result<SimulationRun>> = thread::scope(|scope| {
        let handles: Vec<_> = sims.iter().map(|sc| scope.spawn(move || run(sc))).collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("simulation thread panicked"))
            .collect()
    });
    let outcomes = results
        .into_iter()
        .map(|r| match r {
            Ok(run) => Ok(Outcome::Done(Box::new(run))),
            Err(Error::BlowUp { partial, .. }) => Ok(Outcome::BlowUp(*partial)),
            Err(e) => Err(CliError::Core(e)),
        })
        .collect::<CliResult<Vec<_>>>()?;

    let names = column_names(cfgs);
    let headers: Vec<String> = names
        .iter()
        .zip(&outcomes)
        .map(|(n, o)| match o {
            Outcome::Done(_) => format!("{n}_l2"),
            Outcome::BlowUp(_) => format!("{n}_l2_blowup"),
        })
        .collect();

    let times: Vec<f64> = (1..=n_t).map(|n| sims[0].disc.t(n)).collect();
    let mut csv = format!("step,time,{}\n", headers.join(","));
    for (row, t) in times.iter().enumerate() {
        let _ = write!(csv, "{},{}", row + 1, num(*t));
        for o in &outcomes {
            let v = o.series().get(row).copied().unwrap_or(f64::NAN);
            let _ = write!(csv, ",{}", num(v));
        }
        csv.push('\n');
    }

    let finals: Vec<f64> = outcomes.iter().map(Outcome::final_error).collect();
    let best = finals.iter().copied().fold(f64::INFINITY, f64::min);
    let min_idx = finals.iter().position(|f| *f == best).unwrap_or(0);
    let flag = if finals[0] == best && best.is_finite() {
        if finals[1..].contains(&best) {
            CompareFlag::PassTie
        } else {
            CompareFlag::Pass
        }
    } else {
        CompareFlag::Deviation
    };
    let minimal = if best.is_finite() {
        headers[min_idx].clone()
    } else {
        "none".to_string()
    };
    let _ = writeln!(csv, "# min_final={minimal} first_minimal={}", flag.label());

    let svg = svg.then(|| {
        let series: Vec<(String, Vec<f64>)> = headers
            .iter()
            .zip(&outcomes)
            .map(|(h, o)| (h.clone(), o.series().to_vec()))
            .collect();
        line_chart("L2 error", &times, &series)
    });
    Ok(CompareReport {
        csv,
        flag,
        minimal,
        svg,
    })
}

/// Scheme labels, with `-2`, `-3`, ... appended to repeats.
fn column_names(cfgs: &[RunConfig]) -> Vec<String> {
    cfgs.iter()
        .enumerate()
        .map(|(i, cfg)| {
            let base = cfg.scheme.label();
            let seen = cfgs[..i]
                .iter()
                .filter(|c| c.scheme.label() == base)
                .count();
            if seen == 0 {
                base.to_string()
            } else {
                format!("{base}-{}", seen + 1)
            }
        })
        .collect()
}
