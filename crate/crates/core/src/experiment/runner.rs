use std::fs::{self, File};
use std::io::BufWriter;
use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::Instant;

use num_complex::Complex64;

use crate::calculus::{
    bip_sweep, hinfty_bound_estimates, riesz_transform_norm, standard_family, ContourSpec,
    FAMILY_OMEGA,
};
use crate::error::{Error, Result};
use crate::evolution::{forcing_catalog, heat_solve, max_reg_ratio, write_ratio_csv, MaxRegRow, TimeGrid};
use crate::geometry::{
    distance_ratios, sample_domain_points, verify_blowup_bounds, CatalogGraph,
    PullbackMap, PullbackOptions, DEFAULT_LATTICE,
};
use crate::operators::{
    assemble_laplacian, assemble_perturbation, assemble_pullback_laplacian, log_spaced,
    perturbation_coefficients, perturbation_ratio, probe_set, sectoriality_scan, smooth_trials,
    BoundaryCondition, DiscreteOperator, NormOptions, OperatorLabel,
};
use crate::spaces::{hardy_check, GridFunction, HalfSpaceGrid, NormSpec};

use super::config::{ExperimentConfig, ExperimentKind};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

/// Command-line overrides of a config file.
#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    pub output_dir: Option<PathBuf>,
    pub threads: Option<usize>,
    pub seed: Option<u64>,
}

#[derive(Debug, Clone)]
pub struct RunReport {
    pub output_dir: PathBuf,
    /// Files written, relative to `output_dir`, in creation order.
    pub files: Vec<String>,
    /// One line per headline number.
    pub summary: Vec<String>,
}

#[derive(Debug, Clone)]
pub struct RunFailure {
    pub code: i32,
    pub message: String,
}

impl RunFailure {
    fn validation(e: impl std::fmt::Display) -> Self {
        RunFailure { code: EXIT_VALIDATION, message: e.to_string() }
    }
}

/// Loads, validates and runs a config file.
pub fn run_file(path: &Path, opts: &RunOptions) -> Result<RunReport, RunFailure> {
    let cfg = ExperimentConfig::load(path).map_err(RunFailure::validation)?;
    run_config(cfg, opts)
}

/// Validates `cfg` completely, then runs it; see the exit code constants.
pub fn run_config(mut cfg: ExperimentConfig, opts: &RunOptions) -> Result<RunReport, RunFailure> {
    if let Some(s) = opts.seed {
        cfg.seed = s;
    }
    let out = opts
        .output_dir
        .clone()
        .or_else(|| cfg.output_dir.clone())
        .unwrap_or_else(|| PathBuf::from("output").join(cfg.experiment.name()));
    cfg.output_dir = Some(out.clone());
    let plan = Plan::new(cfg).map_err(RunFailure::validation)?;
    let threads = match opts.threads {
        Some(0) => return Err(RunFailure::validation("invalid parameter `threads`: must be positive")),
        Some(n) => n,
        None => rayon::current_num_threads(),
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(RunFailure::validation)?;
    let numerical = |e: Error| RunFailure {
        code: EXIT_NUMERICAL,
        message: format!("{}: {e}", plan.cfg.experiment),
    };
    fs::create_dir_all(&out).map_err(|e| numerical(e.into()))?;
    let start = Instant::now();
    let mut sink = Sink { dir: out.clone(), files: Vec::new(), summary: Vec::new() };
    pool.install(|| plan.execute(&mut sink)).map_err(numerical)?;
    let wall = start.elapsed().as_secs_f64();
    write_manifest(&plan.cfg, threads, wall, &mut sink).map_err(numerical)?;
    Ok(RunReport { output_dir: out, files: sink.files, summary: sink.summary })
}

/// Static listing of experiments, their required fields and what they probe.
pub fn list_experiments() -> String {
    let mut s = String::from("experiments:\n");
    for k in ExperimentKind::ALL {
        s.push_str(&format!(
            "  {:<20} requires: {:<22} probes: {}\n",
            k.name(),
            k.required_fields().join(", "),
            k.anchor()
        ));
    }
    s
}

struct Sink {
    dir: PathBuf,
    files: Vec<String>,
    summary: Vec<String>,
}

impl Sink {
    fn create(&mut self, name: &str) -> Result<BufWriter<File>> {
        self.files.push(name.to_string());
        Ok(BufWriter::new(File::create(self.dir.join(name))?))
    }

    fn say(&mut self, line: String) {
        self.summary.push(line);
    }
}

fn write_manifest(cfg: &ExperimentConfig, threads: usize, wall: f64, sink: &mut Sink) -> Result<()> {
    let config = toml::Value::try_from(cfg).map_err(|e| Error::Parse(e.to_string()))?;
    let mut t = toml::Table::new();
    t.insert("toolkit".into(), env!("CARGO_PKG_NAME").into());
    t.insert("version".into(), env!("CARGO_PKG_VERSION").into());
    t.insert("experiment".into(), cfg.experiment.name().into());
    t.insert("seed".into(), toml::Value::Integer(cfg.seed as i64));
    t.insert("threads".into(), toml::Value::Integer(threads as i64));
    t.insert("wall_time_seconds".into(), wall.into());
    let files: Vec<toml::Value> = sink.files.iter().map(|f| f.as_str().into()).collect();
    t.insert("files".into(), files.into());
    t.insert("config".into(), config);
    let text = toml::to_string(&t).map_err(|e| Error::Parse(e.to_string()))?;
    fs::write(sink.dir.join("manifest.toml"), text)?;
    fs::write(sink.dir.join("config.toml"), cfg.to_toml())?;
    sink.files.push("manifest.toml".into());
    sink.files.push("config.toml".into());
    Ok(())
}

/// A config with every derived object built and checked.
struct Plan {
    cfg: ExperimentConfig,
    grid: Arc<HalfSpaceGrid>,
    bc: BoundaryCondition,
    specs: Vec<NormSpec>,
    /// `(ε, flattening map)`; `None` for the flat boundary
    boundaries: Vec<(f64, Option<PullbackMap>)>,
    contour: ContourSpec,
    times: Vec<TimeGrid>,
    s_values: Vec<f64>,
    radii: Vec<f64>,
    norm_opts: NormOptions,
}

fn fmt_num(x: f64) -> String {
    format!("{x:.12e}")
}

fn graph(name: &str, eps: f64, radius: f64, lambda: f64) -> Result<Option<CatalogGraph>> {
    match name {
        "zero" => Ok(None),
        "bump" => CatalogGraph::bump(2, eps, radius).map(Some),
        "cone" => CatalogGraph::cone_smoothed(2, eps, lambda, radius).map(Some),
        other => Err(Error::invalid("boundary.name", format!("unknown catalog graph `{other}`; use zero, bump or cone"))),
    }
}

impl Plan {
    fn new(cfg: ExperimentConfig) -> Result<Self> {
        let kind = cfg.experiment;
        let grid = Arc::new(HalfSpaceGrid::new(cfg.grid.spec())?);
        let bc: BoundaryCondition = cfg.bc.parse()?;
        let specs = if kind == ExperimentKind::GeometryCheck {
            Vec::new()
        } else {
            let norm = cfg.norm.ok_or_else(|| Error::invalid("norm.gamma", "missing field `gamma` in [norm]"))?;
            let gammas = if cfg.sweep.gamma.is_empty() { vec![norm.gamma] } else { cfg.sweep.gamma.clone() };
            let ks = if cfg.sweep.k.is_empty() { vec![norm.k] } else { cfg.sweep.k.clone() };
            let mut v = Vec::new();
            for &k in &ks {
                for &g in &gammas {
                    v.push(NormSpec::new(k, norm.p, g)?);
                }
            }
            v
        };
        let b = &cfg.boundary;
        let eps_values = if cfg.sweep.eps.is_empty() { vec![b.eps] } else { cfg.sweep.eps.clone() };
        let needs_boundary = !matches!(kind, ExperimentKind::Hardy | ExperimentKind::Riesz);
        let mut boundaries = Vec::new();
        if needs_boundary {
            for &eps in &eps_values {
                let g = graph(&b.name, eps, b.radius, b.lambda)?;
                let map = match g {
                    Some(g) => {
                        if grid.dim() != 2 && kind != ExperimentKind::GeometryCheck {
                            return Err(Error::invalid("grid.dim", "curved boundaries need grid.dim = 2"));
                        }
                        let opts = PullbackOptions { lipschitz_scale: b.lipschitz_scale, ..PullbackOptions::default() };
                        Some(PullbackMap::with_options(Arc::new(g), opts)?)
                    }
                    None if kind == ExperimentKind::GeometryCheck || kind == ExperimentKind::PerturbationCurve => {
                        Some(PullbackMap::new(Arc::new(CatalogGraph::zero(2)?))?)
                    }
                    None => None,
                };
                boundaries.push((eps, map));
            }
        }
        match kind {
            ExperimentKind::Hardy if grid.dim() != 1 => {
                return Err(Error::invalid("grid.dim", "the Hardy experiment is one-dimensional"));
            }
            ExperimentKind::GeometryCheck | ExperimentKind::PerturbationCurve if grid.dim() != 2 => {
                return Err(Error::invalid("grid.dim", format!("{kind} needs grid.dim = 2")));
            }
            _ => {}
        }
        let needs_positive_shift = matches!(
            kind,
            ExperimentKind::ResolventScan | ExperimentKind::CalculusBound | ExperimentKind::BipSweep | ExperimentKind::PerturbationCurve
        );
        if !(cfg.shift >= 0.0) || (needs_positive_shift && cfg.shift == 0.0) {
            return Err(Error::invalid("shift", format!("μ = {} must be positive", cfg.shift)));
        }
        let contour = cfg.contour.spec();
        contour.validate()?;
        let t = cfg.time;
        let a_values = if cfg.sweep.a.is_empty() { vec![t.a] } else { cfg.sweep.a.clone() };
        let times = a_values
            .iter()
            .map(|&a| TimeGrid::graded(t.t_final, t.steps, t.grading, t.q, a))
            .collect::<Result<Vec<_>>>()?;
        let s_values = if cfg.sweep.s.is_empty() {
            (-5..=5).map(f64::from).collect()
        } else {
            cfg.sweep.s.clone()
        };
        if let Some(s) = s_values.iter().find(|s| !(s.abs() <= crate::calculus::BIP_MAX_S)) {
            return Err(Error::invalid("sweep.s", format!("|s| = {} exceeds {}", s.abs(), crate::calculus::BIP_MAX_S)));
        }
        let sc = &cfg.scan;
        if sc.radii == 0 || !(sc.r_min > 0.0 && sc.r_max >= sc.r_min) {
            return Err(Error::invalid("scan", "need radii ≥ 1 and 0 < r_min ≤ r_max"));
        }
        if let Some(th) = sc.angles.iter().find(|&&th| !(th > 0.0 && th <= std::f64::consts::PI)) {
            return Err(Error::invalid("scan.angles", format!("{th} is outside (0, π]")));
        }
        let radii = log_spaced(sc.r_min, sc.r_max, sc.radii);
        let p = cfg.probes;
        if p.count == 0 || p.trials == 0 || p.samples == 0 || p.norm_probes == 0 || p.power_iterations == 0 {
            return Err(Error::invalid("probes", "counts must be positive"));
        }
        let norm_opts = NormOptions {
            power_iterations: p.power_iterations,
            probes: p.norm_probes,
            seed: cfg.seed.wrapping_add(3),
            ..NormOptions::default()
        };
        Ok(Plan { cfg, grid, bc, specs, boundaries, contour, times, s_values, radii, norm_opts })
    }

    fn operator(&self, map: &Option<PullbackMap>) -> Result<DiscreteOperator> {
        match map {
            Some(p) if !self.flat() => {
                Ok(assemble_pullback_laplacian(Arc::clone(&self.grid), p, self.bc)?.0)
            }
            _ => Ok(assemble_laplacian(Arc::clone(&self.grid), self.bc)),
        }
    }

    fn flat(&self) -> bool {
        self.cfg.boundary.name == "zero"
    }

    fn execute(&self, sink: &mut Sink) -> Result<()> {
        match self.cfg.experiment {
            ExperimentKind::GeometryCheck => self.geometry_check(sink),
            ExperimentKind::Hardy => self.hardy(sink),
            ExperimentKind::ResolventScan => self.resolvent_scan(sink),
            ExperimentKind::CalculusBound => self.calculus_bound(sink),
            ExperimentKind::BipSweep => self.bip(sink),
            ExperimentKind::Riesz => self.riesz(sink),
            ExperimentKind::HeatMr => self.heat(sink),
            ExperimentKind::PerturbationCurve => self.perturbation(sink),
        }
    }

    fn geometry_check(&self, sink: &mut Sink) -> Result<()> {
        let mut w = csv::Writer::from_writer(sink.create("geometry.csv")?);
        w.write_record(["eps", "check", "value", "threshold", "status"])?;
        let mut failures = Vec::new();
        for (eps, map) in &self.boundaries {
            let p = map.as_ref().expect("geometry plans carry a map");
            let flat = self.flat();
            let mut row = |check: &str, value: f64, threshold: Option<f64>, status: &str| -> Result<()> {
                w.write_record([
                    format!("{eps}"),
                    check.to_string(),
                    fmt_num(value),
                    threshold.map(fmt_num).unwrap_or_default(),
                    status.to_string(),
                ])?;
                Ok(())
            };
            let samples = sample_domain_points(p, self.cfg.probes.samples, 1e-3, self.cfg.seed.wrapping_add(2))?;
            if flat {
                let mut rho_err = 0.0f64;
                let mut psi_err = 0.0f64;
                for x in &samples {
                    rho_err = rho_err.max((p.regularized_distance(x)? - x[0]).abs());
                    let y = p.psi(x)?;
                    psi_err = y.iter().zip(x).map(|(a, b)| (a - b).abs()).fold(psi_err, f64::max);
                }
                let (op, _) = assemble_pullback_laplacian(Arc::clone(&self.grid), p, self.bc)?;
                let lap = assemble_laplacian(Arc::clone(&self.grid), self.bc);
                let diff = op.matrix().combine(Complex64::new(1.0, 0.0), lap.matrix(), Complex64::new(-1.0, 0.0));
                let mat_err = diff.max_abs();
                for (name, v) in [("identity_rho", rho_err), ("identity_psi", psi_err), ("identity_matrix", mat_err)] {
                    let ok = v <= 1e-12;
                    row(name, v, Some(1e-12), if ok { "pass" } else { "fail" })?;
                    if !ok {
                        failures.push(format!("{name} = {v:e} exceeds 1e-12"));
                    }
                }
            }
            let mut contraction = 0.0f64;
            let mut residual = 0.0f64;
            for x in &samples {
                let r = p.regularized_distance_report(x)?;
                contraction = contraction.max(r.max_contraction);
                residual = residual.max(r.residual);
            }
            let hyp = p.seminorm() <= 1.0;
            let status = match (hyp, contraction <= 0.6) {
                (false, _) => "hypothesis-fails",
                (true, true) => "pass",
                (true, false) => "fail",
            };
            row("seminorm", p.seminorm(), Some(1.0), if hyp { "pass" } else { "fail" })?;
            row("picard_contraction", contraction, Some(0.6), status)?;
            row("picard_residual", residual, None, "info")?;
            let coarse = distance_ratios(p, &samples, DEFAULT_LATTICE)?;
            let fine = distance_ratios(p, &samples, DEFAULT_LATTICE / 2.0)?;
            let band = |r: &[f64]| {
                (r.iter().cloned().fold(f64::INFINITY, f64::min), r.iter().cloned().fold(0.0, f64::max))
            };
            let (lo, hi) = band(&coarse);
            let (flo, fhi) = band(&fine);
            let change = ((flo - lo).abs() / lo).max((fhi - hi).abs() / hi);
            row("distance_ratio_min", lo, None, "info")?;
            row("distance_ratio_max", hi, None, "info")?;
            row("distance_refinement_change", change, Some(0.05), if change <= 0.05 { "pass" } else { "fail" })?;
            let g = p.graph();
            let rep = verify_blowup_bounds(p, &[2, 0], g.smoothness(), g.holder(), 8)?;
            row(
                "blowup_slope",
                rep.worst_slope.unwrap_or(0.0),
                Some(rep.required_slope),
                rep.status(),
            )?;
            sink.say(format!(
                "eps={eps}: seminorm {:.4}, contraction {contraction:.4}, distance band [{lo:.4}, {hi:.4}], blow-up {}",
                p.seminorm(),
                rep.status()
            ));
        }
        w.flush()?;
        if failures.is_empty() {
            Ok(())
        } else {
            Err(Error::CheckFailed(failures.join("; ")))
        }
    }

    fn hardy(&self, sink: &mut Sink) -> Result<()> {
        type Profile = (&'static str, bool, fn(f64) -> f64);
        let catalog: [Profile; 6] = [
            ("t*exp(-t)", true, |t| t * (-t).exp()),
            ("t^2*exp(-t)", true, |t| t * t * (-t).exp()),
            ("sin(t)*exp(-t)", true, |t| t.sin() * (-t).exp()),
            ("t/(1+t)^3", true, |t| t / (1.0 + t).powi(3)),
            ("exp(-t)", false, |t| (-t).exp()),
            ("(1+t)*exp(-t)", false, |t| (1.0 + t) * (-t).exp()),
        ];
        let mut w = csv::Writer::from_writer(sink.create("hardy.csv")?);
        w.write_record(["function", "p", "gamma", "case", "lhs", "rhs", "ratio"])?;
        for spec in &self.specs {
            let trace_zero = spec.gamma < spec.p - 1.0;
            let mut worst = 0.0f64;
            for (label, vanishes, f) in catalog {
                if trace_zero && !vanishes {
                    continue;
                }
                let u = GridFunction::from_real_fn(Arc::clone(&self.grid), |x| f(x[0]));
                let r = hardy_check(&u, spec.p, spec.gamma, trace_zero)?;
                worst = worst.max(r.ratio);
                w.write_record([
                    label.to_string(),
                    format!("{}", spec.p),
                    format!("{}", spec.gamma),
                    r.case.label().to_string(),
                    fmt_num(r.lhs),
                    fmt_num(r.rhs),
                    fmt_num(r.ratio),
                ])?;
            }
            sink.say(format!(
                "p={} gamma={}: max ratio {worst:.4} (sharp constant {:.4})",
                spec.p,
                spec.gamma,
                crate::spaces::hardy_constant(spec.p, spec.gamma)
            ));
        }
        w.flush()?;
        Ok(())
    }

    fn resolvent_scan(&self, sink: &mut Sink) -> Result<()> {
        let mut summary = Vec::new();
        for (eps, map) in &self.boundaries {
            let op = self.operator(map)?;
            for spec in &self.specs {
                let table = sectoriality_scan(&op, self.cfg.shift, &self.cfg.scan.angles, &self.radii, *spec, &self.norm_opts)?;
                table.write_csv(sink.create(&format!("scan_eps{eps}_k{}_gamma{}.csv", spec.k, spec.gamma))?)?;
                for &(theta, sup) in &table.suprema {
                    summary.push([format!("{eps}"), spec.k.to_string(), format!("{}", spec.p), format!("{}", spec.gamma), fmt_num(theta), fmt_num(sup)]);
                }
                sink.say(format!("eps={eps} k={} gamma={}: sup |λR(λ)| = {:.4}", spec.k, spec.gamma, table.overall_supremum()));
            }
        }
        let mut w = csv::Writer::from_writer(sink.create("suprema.csv")?);
        w.write_record(["eps", "k", "p", "gamma", "theta", "supremum"])?;
        for r in summary {
            w.write_record(r)?;
        }
        w.flush()?;
        Ok(())
    }

    fn calculus_bound(&self, sink: &mut Sink) -> Result<()> {
        let family = standard_family(FAMILY_OMEGA)?;
        let probes = probe_set(&self.grid, self.cfg.probes.count, self.cfg.seed);
        let mut summary = Vec::new();
        for (eps, map) in &self.boundaries {
            let a = self.operator(map)?.shifted(self.cfg.shift)?;
            let reports = hinfty_bound_estimates(&a, &family, &self.contour, &probes, &self.specs)?;
            let mut w = csv::Writer::from_writer(sink.create(&format!("hinfty_eps{eps}.csv"))?);
            w.write_record(["k", "p", "gamma", "function_label", "probe_id", "ratio"])?;
            for r in &reports {
                for row in &r.rows {
                    w.write_record([
                        r.spec.k.to_string(),
                        format!("{}", r.spec.p),
                        format!("{}", r.spec.gamma),
                        row.function_label.clone(),
                        row.probe_id.to_string(),
                        fmt_num(row.ratio),
                    ])?;
                }
                summary.push([format!("{eps}"), r.spec.k.to_string(), format!("{}", r.spec.p), format!("{}", r.spec.gamma), fmt_num(r.constant)]);
                sink.say(format!("eps={eps} k={} gamma={}: calculus constant {:.4}", r.spec.k, r.spec.gamma, r.constant));
            }
            w.flush()?;
        }
        let mut w = csv::Writer::from_writer(sink.create("constants.csv")?);
        w.write_record(["eps", "k", "p", "gamma", "constant"])?;
        for r in summary {
            w.write_record(r)?;
        }
        w.flush()?;
        Ok(())
    }

    fn bip(&self, sink: &mut Sink) -> Result<()> {
        let probes = probe_set(&self.grid, self.cfg.probes.count, self.cfg.seed);
        let mut summary = Vec::new();
        for (eps, map) in &self.boundaries {
            let a = self.operator(map)?.shifted(self.cfg.shift)?;
            for spec in &self.specs {
                let sweep = bip_sweep(&a, &self.s_values, &self.contour, &probes, *spec)?;
                sweep.write_csv(sink.create(&format!("bip_eps{eps}_k{}_gamma{}.csv", spec.k, spec.gamma))?)?;
                let slope = sweep.log_slope();
                summary.push([format!("{eps}"), spec.k.to_string(), format!("{}", spec.p), format!("{}", spec.gamma), fmt_num(slope)]);
                sink.say(format!("eps={eps} k={} gamma={}: log-slope {slope:.4}", spec.k, spec.gamma));
            }
        }
        let mut w = csv::Writer::from_writer(sink.create("slopes.csv")?);
        w.write_record(["eps", "k", "p", "gamma", "slope"])?;
        for r in summary {
            w.write_record(r)?;
        }
        w.flush()?;
        Ok(())
    }

    fn riesz(&self, sink: &mut Sink) -> Result<()> {
        let lap = assemble_laplacian(Arc::clone(&self.grid), BoundaryCondition::Dirichlet);
        let mut w = csv::Writer::from_writer(sink.create("riesz.csv")?);
        w.write_record(["k", "p", "gamma", "estimate", "iterations", "converged", "method"])?;
        for spec in &self.specs {
            let e = riesz_transform_norm(&lap, *spec, &self.norm_opts)?;
            w.write_record([
                spec.k.to_string(),
                format!("{}", spec.p),
                format!("{}", spec.gamma),
                fmt_num(e.value),
                e.iterations.to_string(),
                e.converged.to_string(),
                format!("{:?}", e.method),
            ])?;
            sink.say(format!("k={} gamma={}: Riesz transform norm {:.4}", spec.k, spec.gamma, e.value));
        }
        w.flush()?;
        Ok(())
    }

    fn heat(&self, sink: &mut Sink) -> Result<()> {
        let mut rows = Vec::new();
        let mut detail = csv::Writer::from_writer(sink.create("maxreg_detail.csv")?);
        detail.write_record(["forcing", "q", "a", "gamma", "k", "eps", "ratio"])?;
        let mut wrote_trajectory = false;
        for (eps, map) in &self.boundaries {
            let a = self.operator(map)?.shifted(self.cfg.shift)?;
            for tg in &self.times {
                let catalog = forcing_catalog(tg, &self.grid);
                if !wrote_trajectory {
                    heat_solve(&a, &catalog[0].samples, tg)?.write_csv(sink.create("trajectory.csv")?)?;
                    wrote_trajectory = true;
                }
                for spec in &self.specs {
                    let mut worst = 0.0f64;
                    for f in &catalog {
                        let r = max_reg_ratio(&a, &f.samples, tg, *spec)?;
                        worst = worst.max(r);
                        detail.write_record([
                            f.label.clone(),
                            format!("{}", tg.q()),
                            format!("{}", tg.a()),
                            format!("{}", spec.gamma),
                            spec.k.to_string(),
                            format!("{eps}"),
                            fmt_num(r),
                        ])?;
                    }
                    rows.push(MaxRegRow { q: tg.q(), a: tg.a(), gamma: spec.gamma, k: spec.k, eps: *eps, ratio: worst });
                    sink.say(format!("eps={eps} a={} k={} gamma={}: max ratio {worst:.4}", tg.a(), spec.k, spec.gamma));
                }
            }
        }
        detail.flush()?;
        write_ratio_csv(&rows, sink.create("maxreg.csv")?)
    }

    fn perturbation(&self, sink: &mut Sink) -> Result<()> {
        let a = assemble_laplacian(Arc::clone(&self.grid), self.bc).shifted(self.cfg.shift)?;
        let trials = smooth_trials(Arc::clone(&self.grid), self.bc, self.cfg.probes.trials, self.cfg.seed.wrapping_add(1));
        let mut etas: Vec<Vec<f64>> = Vec::new();
        for (_, map) in &self.boundaries {
            let p = map.as_ref().expect("perturbation plans carry a map");
            let c = perturbation_coefficients(&self.grid, p)?;
            let b = assemble_perturbation(Arc::clone(&self.grid), &c, self.bc, OperatorLabel::PullbackLaplacian)?;
            etas.push(
                self.specs
                    .iter()
                    .map(|s| perturbation_ratio(&b, &a, &trials, *s))
                    .collect::<Result<Vec<_>>>()?,
            );
        }
        let mut w = csv::Writer::from_writer(sink.create("perturbation.csv")?);
        w.write_record(["eps", "k", "p", "gamma", "eta", "ratio_to_previous"])?;
        for (si, spec) in self.specs.iter().enumerate() {
            for (bi, (eps, _)) in self.boundaries.iter().enumerate() {
                let eta = etas[bi][si];
                let ratio = if bi > 0 && etas[bi - 1][si] > 0.0 { fmt_num(eta / etas[bi - 1][si]) } else { String::new() };
                w.write_record([format!("{eps}"), spec.k.to_string(), format!("{}", spec.p), format!("{}", spec.gamma), fmt_num(eta), ratio])?;
                sink.say(format!("eps={eps} k={} gamma={}: eta {eta:.4e}", spec.k, spec.gamma));
            }
        }
        w.flush()?;
        Ok(())
    }
}
