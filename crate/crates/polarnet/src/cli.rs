//! Command-line front end.
//!
//! Exit codes: 0 on success, 1 for usage and configuration errors, 2 for bad
//! input data or failed validation.

use std::ffi::OsString;
use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use polarnet_core::experiment::{EnsembleSummary, ExperimentError, Subpopulation};
use polarnet_core::metrics::metrics_report;
use polarnet_core::AnnotatedGraph;

use crate::config::{parse_pairs, ConfigError, GraphSource, RunConfig};
use crate::io::{load_edge_list, save_graph, IoError};
use crate::output::{write_curves_csv, write_metrics_csv, write_ratios_csv, write_summary_csv};
use crate::parallel::{compare_scenarios_par, run_ensemble_par};
use crate::svg::{emit_svg_plot, CurveSet, Palette, SvgError};

#[derive(Debug, Parser)]
#[command(name = "polarnet", version, about = "Opinion-polarized contact networks and vaccination epidemics")]
struct Cli {
    /// Run configuration (flat key = value file).
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Master seed; overrides `master_seed`.
    #[arg(long, global = true, value_name = "INT")]
    seed: Option<u64>,
    /// Output directory; overrides `out_dir`.
    #[arg(long, global = true, value_name = "DIR")]
    out: Option<PathBuf>,
    /// Worker threads, 0 for one per core.
    #[arg(long, global = true, value_name = "INT", default_value_t = 0)]
    threads: usize,
    /// Edge list; overrides `edges`.
    #[arg(long, global = true, value_name = "PATH")]
    edges: Option<PathBuf>,
    /// Node opinions; overrides `attrs`.
    #[arg(long, global = true, value_name = "PATH")]
    attrs: Option<PathBuf>,
    /// Extra config assignment, applied after the config file. Repeatable.
    #[arg(long = "set", global = true, value_name = "KEY=VALUE")]
    set: Vec<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Structural and opinion-mixing metrics of a network.
    Metrics,
    /// Write a synthetic network as edge and opinion files.
    Generate,
    /// Epidemic ensemble under the configured allocation strategy.
    Simulate,
    /// Polarized and homogeneous allocation on the same network.
    Compare,
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Input(#[from] IoError),
    #[error(transparent)]
    Experiment(#[from] ExperimentError),
    #[error("{0}")]
    Data(String),
    #[error("{}: {source}", .path.display())]
    Write { path: PathBuf, source: io::Error },
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Config(_) => 1,
            _ => 2,
        }
    }
}

impl From<SvgError> for CliError {
    fn from(e: SvgError) -> Self {
        match e {
            SvgError::Io { path, source } => CliError::Write { path, source },
            e => CliError::Data(e.to_string()),
        }
    }
}

const DEFAULT_OUT_DIR: &str = "polarnet_out";

pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    match execute(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn load_config(cli: &Cli) -> Result<RunConfig, CliError> {
    let text = match &cli.config {
        Some(path) => {
            fs::read_to_string(path).map_err(|source| ConfigError::Io { path: path.clone(), source })?
        }
        None => String::new(),
    };
    let mut pairs: Vec<(String, String)> =
        parse_pairs(&text)?.into_iter().map(|(k, v)| (k.to_owned(), v)).collect();
    for s in &cli.set {
        let (k, v) = s.split_once('=').ok_or_else(|| CliError::Usage(format!("--set expects KEY=VALUE, got `{s}`")))?;
        pairs.push((k.to_owned(), v.to_owned()));
    }
    let path_str = |p: &Path| p.to_string_lossy().into_owned();
    if let Some(p) = &cli.edges {
        pairs.push(("edges".into(), path_str(p)));
    }
    if let Some(p) = &cli.attrs {
        pairs.push(("attrs".into(), path_str(p)));
    }
    if let Some(seed) = cli.seed {
        pairs.push(("master_seed".into(), seed.to_string()));
    }
    if let Some(p) = &cli.out {
        pairs.push(("out_dir".into(), path_str(p)));
    }
    Ok(RunConfig::from_pairs(&pairs)?)
}

fn load_graph(cfg: &RunConfig) -> Result<AnnotatedGraph, CliError> {
    match cfg.graph_source()? {
        GraphSource::Files { edges, attrs } => {
            let (g, stats) = load_edge_list(edges, attrs)?;
            eprintln!(
                "loaded {} nodes, {} edges ({} self-loops dropped, {} duplicate edges collapsed)",
                g.n(),
                g.edge_count(),
                stats.build.self_loops_dropped,
                stats.build.duplicate_edges_collapsed
            );
            Ok(g)
        }
        GraphSource::Generator(spec) => spec.generate().map_err(|e| CliError::Data(e.to_string())),
    }
}

fn out_dir(cfg: &RunConfig) -> Result<PathBuf, CliError> {
    let dir = cfg.out_dir.clone().unwrap_or_else(|| PathBuf::from(DEFAULT_OUT_DIR));
    fs::create_dir_all(&dir).map_err(|source| CliError::Write { path: dir.clone(), source })?;
    Ok(dir)
}

fn write_file(path: &Path, f: impl FnOnce(&mut BufWriter<File>) -> io::Result<()>) -> Result<(), CliError> {
    let wrap = |source| CliError::Write { path: path.to_owned(), source };
    let mut w = BufWriter::new(File::create(path).map_err(wrap)?);
    f(&mut w).and_then(|()| w.flush()).map_err(wrap)
}

fn execute(cli: &Cli) -> Result<(), CliError> {
    let cfg = load_config(cli)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.threads)
        .build()
        .map_err(|e| CliError::Usage(format!("cannot start {} threads: {e}", cli.threads)))?;
    pool.install(|| match cli.command {
        Command::Metrics => metrics(&cfg, cli.out.is_some() || cfg.out_dir.is_some()),
        Command::Generate => generate(&cfg),
        Command::Simulate => simulate(&cfg),
        Command::Compare => compare(&cfg),
    })
}

fn metrics(cfg: &RunConfig, to_file: bool) -> Result<(), CliError> {
    let g = load_graph(cfg)?;
    let report = metrics_report(&g, cfg.k_min).map_err(|e| CliError::Data(e.to_string()))?;
    let mut buf = Vec::new();
    write_metrics_csv(&report, &mut buf).expect("writing to memory");
    io::stdout().write_all(&buf).map_err(|source| CliError::Write { path: "<stdout>".into(), source })?;
    if to_file {
        let path = out_dir(cfg)?.join("metrics.csv");
        write_file(&path, |w| w.write_all(&buf))?;
    }
    Ok(())
}

fn generate(cfg: &RunConfig) -> Result<(), CliError> {
    let GraphSource::Generator(spec) = cfg.graph_source()? else {
        return Err(ConfigError::Constraint { key: "generator", reason: "`generate` needs a generator".into() }.into());
    };
    let g = spec.generate().map_err(|e| CliError::Data(e.to_string()))?;
    let dir = out_dir(cfg)?;
    save_graph(&g, &dir.join("edges.csv"), &dir.join("attrs.csv"))?;
    eprintln!("wrote {} nodes, {} edges to {}", g.n(), g.edge_count(), dir.display());
    Ok(())
}

fn daily_curves(ens: &EnsembleSummary, subpop: Subpopulation) -> Vec<Vec<f64>> {
    ens.runs.iter().filter_map(|r| r.daily_fraction(subpop).ok()).collect()
}

fn write_plots(dir: &Path, ensembles: &[&EnsembleSummary]) -> Result<(), CliError> {
    for subpop in Subpopulation::ALL {
        let sets: Vec<CurveSet> = ensembles
            .iter()
            .map(|e| CurveSet {
                label: e.strategy.as_str().to_owned(),
                palette: match e.strategy {
                    polarnet_core::AllocationStrategy::Polarized => Palette::Red,
                    polarnet_core::AllocationStrategy::Homogeneous => Palette::Grey,
                },
                series: daily_curves(e, subpop),
            })
            .collect();
        if sets.iter().all(|s| s.series.is_empty()) {
            continue;
        }
        let title = format!("Daily new infections among {} individuals", subpop.as_str());
        let path = dir.join(format!("daily_{}.svg", subpop.as_str()));
        emit_svg_plot(&sets, &title, "fraction of subpopulation", &path)?;
    }
    Ok(())
}

fn report_summary(ensembles: &[&EnsembleSummary]) {
    for e in ensembles {
        for s in Subpopulation::ALL {
            if let Some(ar) = e.mean_attack_rate(s) {
                eprintln!("{:>11} {:>12}: attack rate {ar:.4}", e.strategy.as_str(), s.as_str());
            }
        }
    }
}

fn simulate(cfg: &RunConfig) -> Result<(), CliError> {
    let g = load_graph(cfg)?;
    let ens = run_ensemble_par(&g, &cfg.params, cfg.strategy, &cfg.ensemble(), cfg.master_seed)?;
    let dir = out_dir(cfg)?;
    let name = cfg.strategy.as_str();
    write_file(&dir.join(format!("curves_{name}.csv")), |w| write_curves_csv(&ens, w))?;
    write_file(&dir.join("summary.csv"), |w| write_summary_csv(&[&ens], w))?;
    write_plots(&dir, &[&ens])?;
    report_summary(&[&ens]);
    Ok(())
}

fn compare(cfg: &RunConfig) -> Result<(), CliError> {
    let g = load_graph(cfg)?;
    let cmp = compare_scenarios_par(&g, &cfg.params, &cfg.ensemble(), cfg.master_seed)?;
    let dir = out_dir(cfg)?;
    let both = [&cmp.polarized, &cmp.homogeneous];
    for e in both {
        write_file(&dir.join(format!("curves_{}.csv", e.strategy.as_str())), |w| write_curves_csv(e, w))?;
    }
    write_file(&dir.join("summary.csv"), |w| write_summary_csv(&both, w))?;
    write_file(&dir.join("ratios.csv"), |w| write_ratios_csv(&cmp, w))?;
    write_plots(&dir, &both)?;
    report_summary(&both);
    Ok(())
}
