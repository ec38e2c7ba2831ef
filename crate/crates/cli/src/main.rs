mod manifest;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use log::info;
use serde::Serialize;

use manifest::RunManifest;
use tsyb_core::dist::{d_fq, hypercube_pair, Dataset, LowerConstants, QuadSpec, TsybakovDistribution};
use tsyb_core::erm::{erm_exact, erm_heuristic, erm_structured, GridClass, SearchConfig};
use tsyb_core::harness::{
    class_growth_audit, condition_audit, lower_bound_experiment, run_rate_experiment, BudgetRule, ConditionAuditConfig,
    LowerBoundConfig, RateExperimentConfig, TauForm,
};
use tsyb_core::nn::{compose_check, count_bound, enumerated_count, ClassBudget, DEFAULT_ENUMERATION_LIMIT};
use tsyb_core::sets::{approx_dfq_bound, bayes_approx_net, ApproxOptions, BoundaryFn};
use tsyb_core::{par, Error, Result};

/// Quantized ReLU classes, Bayes-set constructions and rate experiments.
#[derive(Parser, Debug)]
#[command(name = "tsyb", version)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Debug)]
struct Global {
    /// JSON config (distribution spec or experiment config).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output directory; without it the main result goes to stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// Quadrature resolution per axis.
    #[arg(long = "quad-res", global = true)]
    quad_res: Option<usize>,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Counting bound for a class budget.
    Count {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        s0: usize,
        #[arg(long = "L0")]
        l0: usize,
        #[arg(long)]
        c: u32,
        /// Also enumerate the class and print its size.
        #[arg(long)]
        enumerate: bool,
    },
    /// Concatenation and parallelization against direct evaluation.
    ComposeCheck {
        #[arg(long, default_value_t = 200)]
        pairs: usize,
        #[arg(long, default_value_t = 1000)]
        probes: usize,
        #[arg(long, default_value_t = 4)]
        max_dim: usize,
        #[arg(long, default_value_t = 3)]
        max_depth: usize,
    },
    /// Build the Bayes-set network at each ε and report its budget.
    Approx {
        /// Comma-separated ε values.
        #[arg(long, value_delimiter = ',', default_values_t = [0.125, 0.0625, 0.03125, 0.015625, 0.0078125])]
        eps: Vec<f64>,
        /// Also write the network built at the smallest ε.
        #[arg(long)]
        save_net: bool,
    },
    /// Write a distribution spec from a preset.
    GenDist {
        #[arg(long, value_enum, default_value_t = Preset::Sine)]
        kind: Preset,
        #[arg(long, default_value_t = 2)]
        d: usize,
        #[arg(long, default_value_t = 1.0)]
        kappa: f64,
        /// Noise amplitude `k₂ = k₃`.
        #[arg(long, default_value_t = 0.5)]
        k: f64,
        /// Bump resolution for the hypercube preset.
        #[arg(long = "K", default_value_t = 4)]
        bumps: usize,
        #[arg(long, default_value_t = 1.0)]
        beta2: f64,
    },
    /// Draw a labelled sample as CSV.
    Sample {
        #[arg(long)]
        n: usize,
    },
    /// Empirical risk minimization on a CSV dataset.
    Erm {
        #[arg(long)]
        data: PathBuf,
        #[arg(long, value_enum, default_value_t = ModeArg::Exact)]
        mode: ModeArg,
        #[arg(long = "L0", default_value_t = 1)]
        l0: usize,
        #[arg(long, default_value_t = 2)]
        s0: usize,
        #[arg(long, default_value_t = 2)]
        c: u32,
        /// Cells per axis for the structured mode.
        #[arg(long, default_value_t = 4)]
        cells: usize,
        #[arg(long, default_value_t = 2000)]
        iters: usize,
        #[arg(long, default_value_t = DEFAULT_ENUMERATION_LIMIT)]
        limit: u64,
    },
    /// Replicated convergence-rate experiment.
    Rates,
    /// Lower-bound curve from the bump hypercube.
    LowerBound {
        #[arg(long, default_value_t = 1.0)]
        kappa: f64,
        #[arg(long, default_value_t = 1.0)]
        beta2: f64,
        #[arg(long, default_value_t = 2)]
        d: usize,
    },
    /// Noise, margin and approximation audit of a distribution, plus the
    /// class-growth audit of the budget rule.
    Audit {
        /// Declared noise exponent; defaults to the spec's own.
        #[arg(long)]
        kappa: Option<f64>,
        #[arg(long, default_value_t = 1.0)]
        rho: f64,
        #[arg(long, value_enum, default_value_t = TauArg::Log)]
        tau: TauArg,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Preset {
    Sine,
    Linear,
    Constant,
    Hypercube,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ModeArg {
    Exact,
    Heuristic,
    ExactStructured,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum TauArg {
    Polynomial,
    Log,
}

/// Routes results to the output directory or stdout and keeps the manifest.
struct Sink {
    dir: Option<PathBuf>,
    manifest: RunManifest,
}

impl Sink {
    /// Files go to `dir/name`. Without a directory only `primary` output is
    /// printed.
    fn emit(&mut self, name: &str, body: &str, primary: bool) -> Result<()> {
        match &self.dir {
            Some(dir) => {
                fs::create_dir_all(dir)?;
                let path = dir.join(name);
                fs::write(&path, body)?;
                info!("wrote {}", path.display());
                self.manifest.outputs.push(path);
            }
            None if primary => print!("{body}"),
            None => {}
        }
        Ok(())
    }

    fn finish(self) -> Result<()> {
        let json = serde_json::to_string_pretty(&self.manifest)?;
        match &self.dir {
            Some(dir) => fs::write(dir.join(format!("{}.manifest.json", self.manifest.subcommand)), json + "\n")?,
            None => eprintln!("{}", serde_json::to_string(&self.manifest)?),
        }
        Ok(())
    }
}

fn json<T: Serialize>(v: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(v)? + "\n")
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Validation(format!("cannot read config {}: {e}", path.display())))
}

fn need_config(g: &Global, what: &str) -> Result<(PathBuf, String)> {
    let path = g.config.clone().ok_or_else(|| Error::Validation(format!("{what} needs --config <path>")))?;
    let text = read(&path)?;
    Ok((path, text))
}

fn quad(g: &Global, base: QuadSpec) -> QuadSpec {
    match g.quad_res {
        Some(res) => QuadSpec { res, ..base },
        None => base,
    }
}

fn name(cmd: &Cmd) -> &'static str {
    match cmd {
        Cmd::Count { .. } => "count",
        Cmd::ComposeCheck { .. } => "compose-check",
        Cmd::Approx { .. } => "approx",
        Cmd::GenDist { .. } => "gen-dist",
        Cmd::Sample { .. } => "sample",
        Cmd::Erm { .. } => "erm",
        Cmd::Rates => "rates",
        Cmd::LowerBound { .. } => "lower-bound",
        Cmd::Audit { .. } => "audit",
    }
}

fn run(cli: Cli, argv: &[String]) -> Result<()> {
    let g = &cli.global;
    // Digest the config bytes when there are any; otherwise the argv.
    let digest_input = match &g.config {
        Some(p) => fs::read(p).unwrap_or_default(),
        None => argv.join("\u{1f}").into_bytes(),
    };
    let mut sink =
        Sink { dir: g.out.clone(), manifest: RunManifest::new(name(&cli.cmd), &digest_input, g.seed, g.workers) };
    let result = par::with_workers(g.workers, || dispatch(&cli, &mut sink));
    sink.finish()?;
    result
}

fn dispatch(cli: &Cli, sink: &mut Sink) -> Result<()> {
    let g = &cli.global;
    match &cli.cmd {
        Cmd::Count { d, s0, l0, c, enumerate } => {
            let budget = ClassBudget::new(*d, *l0, *s0, *c);
            budget.validate()?;
            let mut body = format!("{}\n", count_bound(&budget));
            if *enumerate {
                body.push_str(&format!("{}\n", enumerated_count(&budget)));
            }
            sink.emit("count.txt", &body, true)
        }
        Cmd::ComposeCheck { pairs, probes, max_dim, max_depth } => {
            let report = compose_check(*pairs, *probes, *max_dim, *max_depth, g.seed.unwrap_or(0))?;
            sink.emit("compose_check.json", &json(&report)?, true)?;
            if report.pass {
                Ok(())
            } else {
                Err(Error::Validation("composition check failed".into()))
            }
        }
        Cmd::Approx { eps, save_net } => {
            let (_, text) = need_config(g, "approx")?;
            let dist = TsybakovDistribution::from_json(&text)?;
            let tsyb_core::dist::Model::Fragments { set } = &dist.model else {
                return Err(Error::Validation("approx needs a fragment model".into()));
            };
            let spec = quad(g, QuadSpec::default());
            let bayes = dist.bayes_set();
            let mut csv = String::from("epsilon,L,s,c,d_fq_bound,d_fq_measured\n");
            let mut smallest = None;
            for &e in eps {
                let built = bayes_approx_net(set, e, &ApproxOptions::new(dist.kappa()))?;
                let measured = d_fq(&dist, &built.certified, &bayes, &spec).value;
                let bound = approx_dfq_bound(
                    dist.marginal.bound(),
                    set.fragments.len(),
                    dist.d,
                    dist.beta1,
                    dist.envelope_b(),
                    e,
                );
                let r = &built.report;
                csv.push_str(&format!("{e},{},{},{},{bound},{measured}\n", r.depth, r.s, r.c));
                if smallest.as_ref().is_none_or(|(s, _)| e < *s) {
                    smallest = Some((e, built));
                }
            }
            sink.emit("approx.csv", &csv, true)?;
            if let (true, Some((_, built))) = (*save_net, smallest) {
                sink.emit("approx_net.json", &json(&built.net)?, false)?;
                sink.emit("approx_report.json", &json(&built.report)?, false)?;
            }
            Ok(())
        }
        Cmd::GenDist { kind, d, kappa, k, bumps, beta2 } => {
            if kappa.is_nan() || *kappa < 1.0 {
                return Err(Error::Validation(format!("κ must be at least 1, got {kappa}")));
            }
            let beta1 = kappa - 1.0;
            let dist = match kind {
                Preset::Sine => TsybakovDistribution::single_boundary(
                    *d,
                    BoundaryFn::Sine { offset: 0.5, amplitude: 0.2, frequency: 1.0 },
                    beta1,
                    *k,
                )?,
                Preset::Linear => TsybakovDistribution::single_boundary(
                    *d,
                    BoundaryFn::PiecewiseLinear { knots: vec![0.0, 0.5, 1.0], values: vec![0.3, 0.7, 0.4] },
                    beta1,
                    *k,
                )?,
                Preset::Constant => {
                    TsybakovDistribution::single_boundary(*d, BoundaryFn::Constant { value: 0.5 }, beta1, *k)?
                }
                Preset::Hypercube => {
                    let c = LowerConstants { k2: k.min(0.5), k3: k.min(0.5), ..Default::default() };
                    hypercube_pair(*bumps, beta1, *beta2, *d, &c)?.1
                }
            };
            sink.emit("dist.json", &(dist.to_json() + "\n"), true)
        }
        Cmd::Sample { n } => {
            let (_, text) = need_config(g, "sample")?;
            let dist = TsybakovDistribution::from_json(&text)?;
            let data = dist.sample(*n, g.seed.unwrap_or(0));
            let mut buf = Vec::new();
            data.write_csv(&mut buf)?;
            sink.emit("sample.csv", &String::from_utf8(buf).expect("utf-8"), true)
        }
        Cmd::Erm { data, mode, l0, s0, c, cells, iters, limit } => {
            let file = fs::File::open(data)
                .map_err(|e| Error::Validation(format!("cannot read data {}: {e}", data.display())))?;
            let ds = Dataset::read_csv(file, g.seed.unwrap_or(0))?;
            let budget = ClassBudget::new(ds.d, *l0, *s0, *c);
            let report = match mode {
                ModeArg::Exact => erm_exact(&budget, &ds, *limit)?,
                ModeArg::Heuristic => {
                    let cfg = SearchConfig { iters: *iters, seed: g.seed.unwrap_or(0), ..Default::default() };
                    erm_heuristic(&budget, &ds, &cfg)?
                }
                ModeArg::ExactStructured => erm_structured(&GridClass::new(ds.d, *cells, *c)?, &ds)?,
            };
            info!("{} ERM: risk {} over {} candidates", report.mode.label(), report.risk, report.candidates);
            sink.emit("erm.json", &json(&report)?, true)
        }
        Cmd::Rates => {
            let (_, text) = need_config(g, "rates")?;
            let mut cfg = RateExperimentConfig::from_json(&text)?;
            if let Some(s) = g.seed {
                cfg.seed = s;
            }
            cfg.quad = quad(g, cfg.quad);
            sink.manifest.seed = Some(cfg.seed);
            info!("rates: {} sizes × {} replications", cfg.n_grid.len(), cfg.replications);
            let result = run_rate_experiment(&cfg)?;
            sink.emit("rates.csv", &result.to_csv()?, true)?;
            sink.emit("rates.json", &json(&result)?, false)
        }
        Cmd::LowerBound { kappa, beta2, d } => {
            let mut cfg = match &g.config {
                Some(p) => serde_json::from_str::<LowerBoundConfig>(&read(p)?)?,
                None => LowerBoundConfig {
                    kappa: *kappa,
                    beta2: *beta2,
                    d: *d,
                    n_grid: (7..=13).map(|k| 1u64 << k).collect(),
                    constants: LowerConstants::default(),
                    quad: QuadSpec::default(),
                    check_ks: vec![2, 4, 8],
                },
            };
            cfg.quad = quad(g, cfg.quad);
            let report = lower_bound_experiment(&cfg)?;
            sink.emit("lower_bound.csv", &report.to_csv()?, true)?;
            sink.emit("lower_bound.json", &json(&report)?, false)
        }
        Cmd::Audit { kappa, rho, tau } => {
            let (_, text) = need_config(g, "audit")?;
            let dist = TsybakovDistribution::from_json(&text)?;
            let k = kappa.unwrap_or_else(|| dist.kappa());
            let mut cfg = ConditionAuditConfig::for_kappa(k);
            cfg.quad = quad(g, cfg.quad);
            if let Some(res) = g.quad_res {
                cfg.noise_res = res;
            }
            let cond = condition_audit(&dist, &cfg)?;
            let form = match tau {
                TauArg::Polynomial => TauForm::Polynomial,
                TauArg::Log => TauForm::Log,
            };
            let grid: Vec<u64> = (7..=13).map(|e| 1u64 << e).collect();
            let growth = class_growth_audit(&BudgetRule::default(), dist.d, &grid, k, *rho, form);
            #[derive(Serialize)]
            struct Audit<'a> {
                condition: &'a tsyb_core::harness::ConditionAudit,
                growth: &'a tsyb_core::harness::GrowthAudit,
            }
            sink.emit("audit.json", &json(&Audit { condition: &cond, growth: &growth })?, true)
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::BudgetTooLarge { .. } => 2,
        _ => 1,
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("TSYB_LOG", "warn")).init();
    let argv: Vec<String> = std::env::args().collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(64) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli, &argv) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
