//! Flat `key = value` run configuration.
//!
//! One assignment per line; lines whose first non-blank character is `#` are
//! comments. Keys are case-insensitive. Unset epidemic keys keep the model
//! defaults of [`EpidemicParams::default`].

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use polarnet_core::epidemic::{EpidemicError, EpidemicParams, SeedPool, Seeding, VetMode};
use polarnet_core::experiment::{AllocationStrategy, EnsembleConfig};
use polarnet_core::generators::{GeneratorError, GeneratorKind, GeneratorSpec};

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read config {}: {source}", .path.display())]
    Io { path: PathBuf, source: std::io::Error },
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("unknown key `{key}`")]
    UnknownKey { key: String },
    #[error("key `{key}` is set twice")]
    DuplicateKey { key: &'static str },
    #[error("key `{key}`: `{value}` is not {expected}")]
    Type { key: &'static str, value: String, expected: &'static str },
    #[error("key `{key}`: {reason}")]
    Constraint { key: &'static str, reason: String },
    #[error("no graph given: set `edges` and `attrs`, or `generator`")]
    NoGraph,
}

fn constraint(key: &'static str, reason: impl Into<String>) -> ConfigError {
    ConfigError::Constraint { key, reason: reason.into() }
}

/// Where the contact network comes from.
#[derive(Debug, Clone, PartialEq)]
pub enum GraphSource {
    Files { edges: PathBuf, attrs: PathBuf },
    Generator(GeneratorSpec),
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub graph: Option<GraphSource>,
    pub params: EpidemicParams,
    pub seeding: Seeding,
    /// Scenario of the `simulate` subcommand.
    pub strategy: AllocationStrategy,
    pub n_runs: usize,
    pub master_seed: u64,
    pub redraw_allocation: bool,
    /// Smallest degree used by the power-law fit of the `metrics` report.
    pub k_min: usize,
    pub out_dir: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        let ens = EnsembleConfig::default();
        RunConfig {
            graph: None,
            params: EpidemicParams::default(),
            seeding: ens.seeding,
            strategy: AllocationStrategy::Polarized,
            n_runs: ens.n_runs,
            master_seed: 0,
            redraw_allocation: ens.redraw_allocation,
            k_min: 1,
            out_dir: None,
        }
    }
}

impl RunConfig {
    pub fn ensemble(&self) -> EnsembleConfig {
        EnsembleConfig { n_runs: self.n_runs, seeding: self.seeding, redraw_allocation: self.redraw_allocation }
    }

    pub fn graph_source(&self) -> Result<&GraphSource, ConfigError> {
        self.graph.as_ref().ok_or(ConfigError::NoGraph)
    }

    /// Builds a config from assignments applied in order; a later assignment
    /// of the same key wins.
    pub fn from_pairs<K: AsRef<str>, V: AsRef<str>>(pairs: &[(K, V)]) -> Result<Self, ConfigError> {
        let mut raw = Raw::default();
        for (k, v) in pairs {
            let key = canonical(k.as_ref())?;
            raw.values[key_index(key)] = Some(v.as_ref().trim().to_owned());
        }
        raw.build()
    }
}

const KEYS: &[&str] = &[
    "R",
    "S_as",
    "A_si",
    "B_n",
    "I_bar",
    "mu",
    "sigma",
    "VET",
    "VEI",
    "t_max_infectious",
    "horizon",
    "vet_mode",
    "index_cases",
    "seed_pool",
    "strategy",
    "n_runs",
    "master_seed",
    "redraw_allocation",
    "k_min",
    "out_dir",
    "edges",
    "attrs",
    "generator",
    "graph_seed",
    "n",
    "p",
    "k_ring",
    "p_rewire",
    "m",
    "n_pro",
    "n_anti",
    "p_in",
    "p_out",
];

/// Keys each generator reads besides `graph_seed`.
fn generator_keys(name: &str) -> Option<&'static [&'static str]> {
    Some(match name {
        "erdos_renyi" => &["n", "p"],
        "watts_strogatz" => &["n", "k_ring", "p_rewire"],
        "barabasi_albert" => &["n", "m"],
        "two_community" => &["n_pro", "n_anti", "p_in", "p_out"],
        _ => return None,
    })
}

const GENERATOR_PARAM_KEYS: &[&str] = &["n", "p", "k_ring", "p_rewire", "m", "n_pro", "n_anti", "p_in", "p_out"];

fn canonical(key: &str) -> Result<&'static str, ConfigError> {
    let key = key.trim();
    KEYS.iter()
        .find(|k| k.eq_ignore_ascii_case(key))
        .copied()
        .ok_or_else(|| ConfigError::UnknownKey { key: key.to_owned() })
}

fn key_index(key: &str) -> usize {
    KEYS.iter().position(|&k| k == key).expect("canonical key")
}

struct Raw {
    values: Vec<Option<String>>,
}

impl Default for Raw {
    fn default() -> Self {
        Raw { values: vec![None; KEYS.len()] }
    }
}

fn parse_value<T: FromStr>(key: &'static str, value: &str, expected: &'static str) -> Result<T, ConfigError> {
    value.parse().map_err(|_| ConfigError::Type { key, value: value.to_owned(), expected })
}

fn parse_bool(key: &'static str, value: &str) -> Result<bool, ConfigError> {
    match value.to_ascii_lowercase().as_str() {
        "true" | "yes" | "1" => Ok(true),
        "false" | "no" | "0" => Ok(false),
        _ => Err(ConfigError::Type { key, value: value.to_owned(), expected: "a boolean" }),
    }
}

fn parse_choice<T: Copy>(key: &'static str, value: &str, choices: &[(&str, T)], expected: &'static str) -> Result<T, ConfigError> {
    choices
        .iter()
        .find(|(name, _)| name.eq_ignore_ascii_case(value))
        .map(|&(_, v)| v)
        .ok_or_else(|| ConfigError::Type { key, value: value.to_owned(), expected })
}

const VET_MODES: &[(&str, VetMode)] = &[("per_infection", VetMode::PerInfection), ("per_day", VetMode::PerDay)];
const SEED_POOLS: &[(&str, SeedPool)] = &[("all", SeedPool::All), ("unvaccinated", SeedPool::UnvaccinatedOnly)];
const STRATEGIES: &[(&str, AllocationStrategy)] =
    &[("polarized", AllocationStrategy::Polarized), ("homogeneous", AllocationStrategy::Homogeneous)];

fn choice_name<T: PartialEq>(choices: &[(&'static str, T)], v: &T) -> &'static str {
    choices.iter().find(|(_, c)| c == v).map(|&(n, _)| n).expect("listed choice")
}

impl Raw {
    fn get(&self, key: &'static str) -> Option<&str> {
        self.values[key_index(key)].as_deref()
    }

    fn float(&self, key: &'static str, default: f64) -> Result<f64, ConfigError> {
        self.get(key).map_or(Ok(default), |v| parse_value(key, v, "a number"))
    }

    fn int<T: FromStr>(&self, key: &'static str, default: T) -> Result<T, ConfigError> {
        self.get(key).map_or(Ok(default), |v| parse_value(key, v, "a non-negative integer"))
    }

    fn required<T: FromStr>(&self, key: &'static str, expected: &'static str) -> Result<T, ConfigError> {
        let v = self.get(key).ok_or_else(|| constraint(key, "required by the selected generator"))?;
        parse_value(key, v, expected)
    }

    fn build(&self) -> Result<RunConfig, ConfigError> {
        let d = RunConfig::default();
        let dp = d.params;
        let params = EpidemicParams {
            r: self.float("R", dp.r)?,
            s_as: self.float("S_as", dp.s_as)?,
            a_si: self.float("A_si", dp.a_si)?,
            b_n: self.float("B_n", dp.b_n)?,
            i_bar: self.float("I_bar", dp.i_bar)?,
            mu: self.float("mu", dp.mu)?,
            sigma: self.float("sigma", dp.sigma)?,
            vet: self.float("VET", dp.vet)?,
            vei: self.float("VEI", dp.vei)?,
            t_max_infectious: self.int("t_max_infectious", dp.t_max_infectious)?,
            horizon: self.int("horizon", dp.horizon)?,
            vet_mode: match self.get("vet_mode") {
                Some(v) => parse_choice("vet_mode", v, VET_MODES, "per_infection or per_day")?,
                None => dp.vet_mode,
            },
        };
        params.validate().map_err(|e| match e {
            EpidemicError::InvalidParam { param, reason } => constraint(canonical(param).unwrap_or("R"), reason),
            other => constraint("R", other.to_string()),
        })?;

        let seeding = Seeding {
            count: self.int("index_cases", d.seeding.count)?,
            pool: match self.get("seed_pool") {
                Some(v) => parse_choice("seed_pool", v, SEED_POOLS, "all or unvaccinated")?,
                None => d.seeding.pool,
            },
        };
        let strategy = match self.get("strategy") {
            Some(v) => parse_choice("strategy", v, STRATEGIES, "polarized or homogeneous")?,
            None => d.strategy,
        };
        let n_runs = self.int("n_runs", d.n_runs)?;
        if n_runs == 0 {
            return Err(constraint("n_runs", "must be at least 1"));
        }
        let k_min = self.int("k_min", d.k_min)?;
        if k_min == 0 {
            return Err(constraint("k_min", "must be at least 1"));
        }
        let redraw_allocation = match self.get("redraw_allocation") {
            Some(v) => parse_bool("redraw_allocation", v)?,
            None => d.redraw_allocation,
        };

        Ok(RunConfig {
            graph: self.graph()?,
            params,
            seeding,
            strategy,
            n_runs,
            master_seed: self.int("master_seed", d.master_seed)?,
            redraw_allocation,
            k_min,
            out_dir: self.get("out_dir").map(PathBuf::from),
        })
    }

    fn graph(&self) -> Result<Option<GraphSource>, ConfigError> {
        let files = (self.get("edges"), self.get("attrs"));
        let Some(name) = self.get("generator") else {
            for &key in GENERATOR_PARAM_KEYS.iter().chain(&["graph_seed"]) {
                if self.get(key).is_some() {
                    return Err(constraint(key, "only valid together with `generator`"));
                }
            }
            return match files {
                (Some(e), Some(a)) => Ok(Some(GraphSource::Files { edges: e.into(), attrs: a.into() })),
                (Some(_), None) => Err(constraint("attrs", "required together with `edges`")),
                (None, Some(_)) => Err(constraint("edges", "required together with `attrs`")),
                (None, None) => Ok(None),
            };
        };
        if files.0.is_some() || files.1.is_some() {
            let key = if files.0.is_some() { "edges" } else { "attrs" };
            return Err(constraint(key, "a graph file and a generator are mutually exclusive"));
        }
        let name = name.to_ascii_lowercase();
        let used = generator_keys(&name).ok_or_else(|| ConfigError::Type {
            key: "generator",
            value: name.clone(),
            expected: "one of erdos_renyi, watts_strogatz, barabasi_albert, two_community",
        })?;
        for &key in GENERATOR_PARAM_KEYS {
            if self.get(key).is_some() && !used.contains(&key) {
                return Err(constraint(key, format!("not a parameter of generator {name}")));
            }
        }
        let count = "a non-negative integer";
        let prob = "a number";
        let kind = match name.as_str() {
            "erdos_renyi" => GeneratorKind::ErdosRenyi { n: self.required("n", count)?, p: self.required("p", prob)? },
            "watts_strogatz" => GeneratorKind::WattsStrogatz {
                n: self.required("n", count)?,
                k_ring: self.required("k_ring", count)?,
                p_rewire: self.required("p_rewire", prob)?,
            },
            "barabasi_albert" => GeneratorKind::BarabasiAlbert { n: self.required("n", count)?, m: self.required("m", count)? },
            _ => GeneratorKind::TwoCommunity {
                n_pro: self.required("n_pro", count)?,
                n_anti: self.required("n_anti", count)?,
                p_in: self.required("p_in", prob)?,
                p_out: self.required("p_out", prob)?,
            },
        };
        kind.validate().map_err(|GeneratorError::InvalidParam { param, reason }| {
            constraint(canonical(param).unwrap_or("generator"), reason)
        })?;
        Ok(Some(GraphSource::Generator(GeneratorSpec { kind, seed: self.int("graph_seed", 0)? })))
    }
}

/// Splits config text into `(key, value)` assignments. Keys set twice are
/// rejected.
pub fn parse_pairs(text: &str) -> Result<Vec<(&'static str, String)>, ConfigError> {
    let mut pairs: Vec<(&'static str, String)> = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| ConfigError::Syntax {
            line: i + 1,
            msg: format!("expected `key = value`, got `{line}`"),
        })?;
        let key = canonical(k)?;
        if pairs.iter().any(|(p, _)| *p == key) {
            return Err(ConfigError::DuplicateKey { key });
        }
        pairs.push((key, v.trim().to_owned()));
    }
    Ok(pairs)
}

pub fn parse_config_str(text: &str) -> Result<RunConfig, ConfigError> {
    RunConfig::from_pairs(&parse_pairs(text)?)
}

pub fn parse_config(path: &Path) -> Result<RunConfig, ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io { path: path.to_owned(), source })?;
    parse_config_str(&text)
}

/// Writes every setting, so the text reparses to an equal config.
impl fmt::Display for RunConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = &self.params;
        match &self.graph {
            Some(GraphSource::Files { edges, attrs }) => {
                writeln!(f, "edges = {}", edges.display())?;
                writeln!(f, "attrs = {}", attrs.display())?;
            }
            Some(GraphSource::Generator(spec)) => {
                match spec.kind {
                    GeneratorKind::ErdosRenyi { n, p } => {
                        writeln!(f, "generator = erdos_renyi\nn = {n}\np = {p}")?;
                    }
                    GeneratorKind::WattsStrogatz { n, k_ring, p_rewire } => {
                        writeln!(f, "generator = watts_strogatz\nn = {n}\nk_ring = {k_ring}\np_rewire = {p_rewire}")?;
                    }
                    GeneratorKind::BarabasiAlbert { n, m } => {
                        writeln!(f, "generator = barabasi_albert\nn = {n}\nm = {m}")?;
                    }
                    GeneratorKind::TwoCommunity { n_pro, n_anti, p_in, p_out } => {
                        writeln!(
                            f,
                            "generator = two_community\nn_pro = {n_pro}\nn_anti = {n_anti}\np_in = {p_in}\np_out = {p_out}"
                        )?;
                    }
                }
                writeln!(f, "graph_seed = {}", spec.seed)?;
            }
            None => {}
        }
        writeln!(f, "R = {}", p.r)?;
        writeln!(f, "S_as = {}", p.s_as)?;
        writeln!(f, "A_si = {}", p.a_si)?;
        writeln!(f, "B_n = {}", p.b_n)?;
        writeln!(f, "I_bar = {}", p.i_bar)?;
        writeln!(f, "mu = {}", p.mu)?;
        writeln!(f, "sigma = {}", p.sigma)?;
        writeln!(f, "VET = {}", p.vet)?;
        writeln!(f, "VEI = {}", p.vei)?;
        writeln!(f, "t_max_infectious = {}", p.t_max_infectious)?;
        writeln!(f, "horizon = {}", p.horizon)?;
        writeln!(f, "vet_mode = {}", choice_name(VET_MODES, &p.vet_mode))?;
        writeln!(f, "index_cases = {}", self.seeding.count)?;
        writeln!(f, "seed_pool = {}", choice_name(SEED_POOLS, &self.seeding.pool))?;
        writeln!(f, "strategy = {}", self.strategy.as_str())?;
        writeln!(f, "n_runs = {}", self.n_runs)?;
        writeln!(f, "master_seed = {}", self.master_seed)?;
        writeln!(f, "redraw_allocation = {}", self.redraw_allocation)?;
        writeln!(f, "k_min = {}", self.k_min)?;
        if let Some(dir) = &self.out_dir {
            writeln!(f, "out_dir = {}", dir.display())?;
        }
        Ok(())
    }
}
