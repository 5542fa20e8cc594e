//! The four scenario commands.

use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use dicke_core::analysis::{first_revival, rms_diff};
use dicke_core::asymptotics::{
    bell_photon_asym, bright_roots, photon_survival_asym, spin_photon_asym, survival_asym,
};
use dicke_core::{
    diagonalize, make_initial, observe, propagate, Asymptotics, BrightRoots, Complex64, Decomposition,
    HamiltonianBlock, InitialCondition, Observable, Params, Solution, SolverOptions, SpectralSolution,
};
use rayon::prelude::*;

use crate::config::{time_grid, BrightSource, Overrides, Run, Scenario, ScenarioConfig};
use crate::error::{CliError, Result};
use crate::gnuplot::{Plot, Series};
use crate::output::{file_stem, num, write_atomic, Table};

/// Where and how results are written.
#[derive(Debug, Clone)]
pub struct Context {
    pub out: PathBuf,
    pub gnuplot: bool,
    pub overrides: Overrides,
    /// Sweep worker cap.
    pub threads: Option<usize>,
}

/// Files written and summary lines for stdout.
#[derive(Debug, Default)]
pub struct Report {
    pub files: Vec<PathBuf>,
    pub lines: Vec<String>,
}

impl Report {
    fn write(&mut self, dir: &Path, name: &str, contents: &str) -> Result<()> {
        self.files.push(write_atomic(dir, name, contents)?);
        Ok(())
    }

    fn finish(mut self, ctx: &Context, name: &str, plots: Vec<Plot>) -> Result<Self> {
        if ctx.gnuplot && !plots.is_empty() {
            let script = crate::gnuplot::script(&plots);
            self.write(&ctx.out, &format!("{name}.gp"), &script)?;
        }
        Ok(self)
    }
}

const ORACLE_TOL: f64 = 1e-15;
const CONTINUUM_TOL: f64 = 1e-14;

fn solve(params: &Params) -> Result<Solution> {
    Ok(SpectralSolution::solve(params, &SolverOptions::default())?)
}

fn oracle(params: &Params) -> Result<Decomposition> {
    Ok(diagonalize(&HamiltonianBlock::build(params), ORACLE_TOL)?)
}

fn params_comment(p: &Params) -> String {
    format!("omega={} g={} L={}", p.omega, p.g, p.spins())
}

pub fn spectrum(scenario: &Scenario, ctx: &Context) -> Result<Report> {
    let p = &scenario.params;
    let solution = solve(p)?;
    let s = &solution.spectrum;
    let mut columns = vec!["alpha", "lambda", "class", "norm_sq", "darkness"];
    let eig = if scenario.oracle {
        columns.extend(["oracle_lambda", "lambda_diff", "oracle_darkness", "darkness_diff"]);
        Some(oracle(p)?)
    } else {
        None
    };
    let mut table = Table::new(columns);
    table.comment(params_comment(p));
    let mut worst = 0.0f64;
    for alpha in 0..s.len() {
        let lambda = s.roots()[alpha];
        let dark = solution.basis.darkness(alpha);
        let mut row = vec![
            alpha.to_string(),
            num(lambda),
            s.classes()[alpha].as_str().to_string(),
            num(s.norm_sq()[alpha]),
            num(dark),
        ];
        if let Some(eig) = &eig {
            let value = eig.values()[alpha];
            worst = worst.max((lambda - value).abs());
            row.extend([
                num(value),
                num(lambda - value),
                num(eig.darkness(alpha)),
                num(dark - eig.darkness(alpha)),
            ]);
        }
        table.push(row);
    }
    let mut report = Report::default();
    report.lines.push(format!(
        "{} roots, {} confined",
        s.len(),
        s.len().saturating_sub(2)
    ));
    if eig.is_some() {
        let line = format!("max |lambda - oracle| = {}", num(worst));
        table.summary(line.clone());
        report.lines.push(line);
    }
    report.write(&ctx.out, "spectrum.csv", &table.render())?;
    let plot = Plot::new("spectrum", "spectrum.csv", 2, "lambda")
        .logscale_y()
        .series(Series::new(5, "darkness").points());
    report.finish(ctx, "spectrum", vec![plot])
}

/// Leading-order prediction for an observable, when one exists.
fn asymptotic_value(
    observable: Observable,
    cond: &InitialCondition,
    asym: &Asymptotics,
    bright: &BrightRoots<f64>,
    t: f64,
) -> Result<Option<Complex64>> {
    let value = match (observable, *cond) {
        (Observable::Survival | Observable::Fidelity, InitialCondition::SinglePhoton)
        | (Observable::Photon, InitialCondition::SinglePhoton) => Some(photon_survival_asym(t, asym, bright)),
        (Observable::Survival | Observable::Fidelity, _) => Some(survival_asym(cond, t, asym, Some(bright))?),
        (Observable::Photon, InitialCondition::SingleSpin(a)) => Some(spin_photon_asym(t, asym, asym.epsilon(a)?)),
        (Observable::Photon, InitialCondition::Bell { a, b, sign }) => Some(bell_photon_asym(
            t,
            asym,
            asym.epsilon(a)?,
            asym.epsilon(b)?,
            sign,
        )),
        (Observable::Spin(m), InitialCondition::SingleSpin(a)) if m == a => {
            Some(survival_asym(cond, t, asym, Some(bright))?)
        }
        (Observable::Spin(_), _) => None,
    };
    Ok(value)
}

fn asymptotic_setup(scenario: &Scenario, solution: &Solution) -> Result<(Asymptotics, BrightRoots<f64>)> {
    let asym = Asymptotics::from_params(&scenario.params)
        .map_err(|_| CliError::config("asymptotic comparison needs at least two spins"))?;
    let bright = match scenario.bright {
        BrightSource::Exact => BrightRoots::from_spectrum(&solution.spectrum),
        BrightSource::Continuum => bright_roots(&asym, CONTINUUM_TOL)?,
    };
    Ok((asym, bright))
}

/// Oracle amplitude matching `observable` at each time.
fn oracle_trace(
    observable: Observable,
    cond: &InitialCondition,
    eig: &Decomposition,
    params: &Params,
    times: &[f64],
) -> Result<Vec<Complex64>> {
    let psi = make_initial(cond, params)?;
    let slot = observable.slot(params.spins())?;
    times
        .iter()
        .map(|&t| {
            let evolved = propagate(eig, &psi, t)?;
            Ok(match slot {
                Some(k) => evolved.component(k),
                None => psi.inner(&evolved),
            })
        })
        .collect()
}

fn trace_name(observable: Observable, run: &Run) -> String {
    let stem = file_stem(&observable.name());
    match run.suffix {
        Some(s) => format!("{stem}_{s}"),
        None => stem,
    }
}

pub fn evolve(scenario: &Scenario, ctx: &Context) -> Result<Report> {
    let p = &scenario.params;
    let times = scenario.time_grid()?;
    let solution = solve(p)?;
    let asym = if scenario.asymptotic {
        Some(asymptotic_setup(scenario, &solution)?)
    } else {
        None
    };
    let eig = if scenario.oracle { Some(oracle(p)?) } else { None };
    let mut report = Report::default();
    let mut plots = Vec::new();
    for run in &scenario.runs {
        for &observable in &scenario.outputs {
            let trace = observe(observable, &run.condition, &solution, &times)?;
            let predicted = match &asym {
                Some((ctx_asym, bright)) => {
                    let first = asymptotic_value(observable, &run.condition, ctx_asym, bright, 0.0)?;
                    match first {
                        Some(_) => Some(
                            times
                                .iter()
                                .map(|&t| {
                                    asymptotic_value(observable, &run.condition, ctx_asym, bright, t)
                                        .map(|v| v.expect("supported"))
                                })
                                .collect::<Result<Vec<_>>>()?,
                        ),
                        None => {
                            log::warn!(
                                "no asymptotic form for {} from {}",
                                observable.name(),
                                run.condition
                            );
                            None
                        }
                    }
                }
                None => None,
            };
            let reference = match &eig {
                Some(eig) => Some(oracle_trace(observable, &run.condition, eig, p, &times)?),
                None => None,
            };

            let mut columns = vec!["t", "re", "im", "abs"];
            if predicted.is_some() {
                columns.extend(["asym_re", "asym_im", "asym_abs"]);
            }
            if reference.is_some() {
                columns.extend(["oracle_re", "oracle_im", "oracle_abs"]);
            }
            let mut table = Table::new(columns);
            table.comment(params_comment(p));
            table.comment(format!("observable={} initial={}", observable.name(), run.condition));
            let mut worst = 0.0f64;
            for (k, (&t, &v)) in times.iter().zip(&trace.values).enumerate() {
                let mut row = vec![num(t), num(v.re), num(v.im), num(v.norm())];
                if let Some(a) = &predicted {
                    row.extend([num(a[k].re), num(a[k].im), num(a[k].norm())]);
                }
                if let Some(o) = &reference {
                    worst = worst.max((v - o[k]).norm());
                    row.extend([num(o[k].re), num(o[k].im), num(o[k].norm())]);
                }
                table.push(row);
            }
            let name = trace_name(observable, run);
            if reference.is_some() {
                let line = format!("max |bethe - oracle| = {}", num(worst));
                report.lines.push(format!("{name}: {line}"));
                table.summary(line);
            }
            let file = format!("{name}.csv");
            report.write(&ctx.out, &file, &table.render())?;
            let mut plot = Plot::new(&name, &file, 1, "t").series(Series::new(4, "exact"));
            if predicted.is_some() {
                plot = plot.series(Series::new(7, "asymptotic").dashed());
            }
            plots.push(plot);
        }
    }
    report.lines.push(format!(
        "{} traces, {} time points",
        report.files.len(),
        times.len()
    ));
    report.finish(ctx, "evolve", plots)
}

pub fn compare(scenario: &Scenario, ctx: &Context) -> Result<Report> {
    let p = &scenario.params;
    let times = scenario.time_grid()?;
    let solution = solve(p)?;
    let (asym, bright) = asymptotic_setup(scenario, &solution)?;
    let mut report = Report::default();
    let mut plots = Vec::new();
    for run in &scenario.runs {
        for &observable in &scenario.outputs {
            if asymptotic_value(observable, &run.condition, &asym, &bright, 0.0)?.is_none() {
                continue;
            }
            let exact = observe(observable, &run.condition, &solution, &times)?.magnitudes();
            let predicted = times
                .iter()
                .map(|&t| {
                    asymptotic_value(observable, &run.condition, &asym, &bright, t)
                        .map(|v| v.expect("supported").norm())
                })
                .collect::<Result<Vec<_>>>()?;
            let mut table = Table::new(["t", "exact_abs", "asym_abs", "diff"]);
            table.comment(params_comment(p));
            table.comment(format!("observable={} initial={}", observable.name(), run.condition));
            let mut worst = 0.0f64;
            for ((&t, &e), &a) in times.iter().zip(&exact).zip(&predicted) {
                worst = worst.max((e - a).abs());
                table.push(vec![num(t), num(e), num(a), num(e - a)]);
            }
            let line = format!("rms = {} max |diff| = {}", num(rms_diff(&exact, &predicted)), num(worst));
            table.summary(line.clone());
            let name = format!("compare_{}", trace_name(observable, run));
            report.lines.push(format!("{name}: {line}"));
            let file = format!("{name}.csv");
            report.write(&ctx.out, &file, &table.render())?;
            plots.push(
                Plot::new(&name, &file, 1, "t")
                    .series(Series::new(2, "exact"))
                    .series(Series::new(3, "asymptotic").dashed()),
            );
        }
    }
    if report.files.is_empty() {
        return Err(CliError::config(
            "none of the requested outputs has an asymptotic form for this initial state",
        ));
    }
    report.finish(ctx, "compare", plots)
}

/// Per-realization survival statistics.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub spins: usize,
    pub seed: u64,
    pub min_abs: f64,
    pub max_abs: f64,
    pub revival_time: Option<f64>,
    pub revival_height: Option<f64>,
}

pub const DEFAULT_SWEEP_THRESHOLD: f64 = 0.2;

fn sweep_point(cfg: &ScenarioConfig, spins: usize, seed: u64) -> Result<SweepRow> {
    let params = cfg.model(Some(spins), seed)?;
    let runs = cfg.initial_runs(&params)?;
    let [run] = runs.as_slice() else {
        return Err(CliError::config("a sweep needs a single initial state (not sign = \"both\")"));
    };
    let times = time_grid(&cfg.times, &params)?;
    let solution = solve(&params)?;
    let magnitudes = observe(Observable::Survival, &run.condition, &solution, &times)?.magnitudes();
    let peak = params
        .mean_spacing()
        .and_then(|d| first_revival(&times, &magnitudes, 2.0 * PI / d));
    Ok(SweepRow {
        spins,
        seed,
        min_abs: magnitudes.iter().copied().fold(f64::INFINITY, f64::min),
        max_abs: magnitudes.iter().copied().fold(0.0, f64::max),
        revival_time: peak.map(|p| p.time),
        revival_height: peak.map(|p| p.height),
    })
}

/// `(L, seed)` pairs of a sweep, in output order.
pub fn sweep_grid(cfg: &ScenarioConfig, overrides: &Overrides) -> Result<Vec<(usize, u64)>> {
    let sweep = cfg.sweep.clone().unwrap_or_default();
    let spins = match (&sweep.spins, cfg.spins, &cfg.params) {
        (Some(list), _, _) => list.clone(),
        (None, Some(l), _) => vec![l],
        (None, None, Some(p)) => vec![p.epsilons.len()],
        (None, None, None) => return Err(CliError::config("missing `L`")),
    };
    let seeds = match (&sweep.seeds, sweep.runs) {
        (Some(_), Some(_)) => return Err(CliError::config("give either sweep.seeds or sweep.runs")),
        (Some(list), None) => list.clone(),
        (None, Some(runs)) => {
            let start = overrides.seed.or(sweep.seed_start).unwrap_or(cfg.effective_seed(overrides));
            (0..runs as u64).map(|k| start + k).collect()
        }
        (None, None) => vec![cfg.effective_seed(overrides)],
    };
    let grid: Vec<(usize, u64)> = spins
        .iter()
        .flat_map(|&l| seeds.iter().map(move |&s| (l, s)))
        .collect();
    if grid.is_empty() {
        return Err(CliError::config("sweep grid is empty"));
    }
    Ok(grid)
}

pub fn sweep(cfg: &ScenarioConfig, ctx: &Context) -> Result<Report> {
    let grid = sweep_grid(cfg, &ctx.overrides)?;
    let threshold = cfg
        .sweep
        .as_ref()
        .and_then(|s| s.threshold)
        .unwrap_or(DEFAULT_SWEEP_THRESHOLD);
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = ctx.threads {
        builder = builder.num_threads(n);
    }
    let pool = builder
        .build()
        .map_err(|e| CliError::config(format!("cannot start sweep workers: {e}")))?;
    let rows: Vec<SweepRow> = pool.install(|| {
        grid.par_iter()
            .map(|&(l, seed)| sweep_point(cfg, l, seed))
            .collect::<Result<Vec<_>>>()
    })?;

    let opt = |x: Option<f64>| x.map_or_else(|| "NaN".to_string(), num);
    let mut table = Table::new([
        "run",
        "L",
        "seed",
        "min_abs",
        "max_abs",
        "revival_time",
        "revival_height",
    ]);
    table.comment("observable=survival");
    for (k, r) in rows.iter().enumerate() {
        table.push(vec![
            k.to_string(),
            r.spins.to_string(),
            r.seed.to_string(),
            num(r.min_abs),
            num(r.max_abs),
            opt(r.revival_time),
            opt(r.revival_height),
        ]);
    }
    let mut report = Report::default();
    let above = rows.iter().filter(|r| r.min_abs > threshold).count();
    let line = format!(
        "runs={} min_abs>{threshold}: {above} fraction={}",
        rows.len(),
        num(above as f64 / rows.len() as f64)
    );
    table.summary(line.clone());
    report.lines.push(line);
    let mut sizes: Vec<usize> = rows.iter().map(|r| r.spins).collect();
    sizes.dedup();
    for l in sizes {
        let times: Vec<f64> = rows
            .iter()
            .filter(|r| r.spins == l)
            .filter_map(|r| r.revival_time)
            .collect();
        if times.is_empty() {
            continue;
        }
        let line = format!(
            "L={l} mean_revival_time={} found={}",
            num(times.iter().sum::<f64>() / times.len() as f64),
            times.len()
        );
        table.summary(line.clone());
        report.lines.push(line);
    }
    report.write(&ctx.out, "sweep.csv", &table.render())?;
    let plot = Plot::new("sweep", "sweep.csv", 2, "L")
        .series(Series::new(6, "revival time").points());
    report.finish(ctx, "sweep", vec![plot])
}
