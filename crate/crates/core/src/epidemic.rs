//! Daily agent-based transmission over a contact graph.
//!
//! An infected agent exposes each susceptible neighbor every day with
//! probability `1 - exp(-λ(t))`, where `t` is the number of days since its
//! own infection and
//!
//! ```text
//! λ(t) = R · S_as · A_si · B_n / Ī · ∫_{t-1}^{t} Gamma(u; μ, σ) du
//! ```
//!
//! Vaccinated agents are protected twice: as infectors they transmit only
//! when a uniform draw exceeds `vet`, and as contacts each exposure is voided
//! unless a uniform draw exceeds `vei`.

use alloc::vec::Vec;
use libm::expm1;
use rand::seq::index;
use rand::{Rng, RngCore};

use crate::graph::{AnnotatedGraph, NodeId};
use crate::special::gamma_p;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum EpidemicError {
    #[error("invalid epidemic parameter `{param}`: {reason}")]
    InvalidParam { param: &'static str, reason: &'static str },
    #[error("cannot seed {requested} index cases from a pool of {available}")]
    PoolTooSmall { requested: usize, available: usize },
    #[error("vaccination vector has {got} entries, graph has {expected} nodes")]
    VaccinationMismatch { expected: usize, got: usize },
}

fn invalid(param: &'static str, reason: &'static str) -> EpidemicError {
    EpidemicError::InvalidParam { param, reason }
}

/// When the "vaccinated infector transmits" draw happens.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum VetMode {
    /// One draw at infection time fixes the agent as transmitter or not.
    #[default]
    PerInfection,
    /// A fresh draw every infectious day.
    PerDay,
}

/// Transmission constants. Defaults are the COVID-like values used
/// throughout the crate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EpidemicParams {
    /// Overall infection-rate scale.
    pub r: f64,
    /// Susceptible-age scale factor.
    pub s_as: f64,
    /// Asymptomatic-infector scale factor.
    pub a_si: f64,
    /// Network-type scale factor.
    pub b_n: f64,
    /// Mean number of daily interactions.
    pub i_bar: f64,
    /// Mean of the gamma infectiousness curve (days).
    pub mu: f64,
    /// Standard deviation of the gamma infectiousness curve (days).
    pub sigma: f64,
    /// Vaccine effectiveness against transmission.
    pub vet: f64,
    /// Vaccine effectiveness against infection.
    pub vei: f64,
    /// Last infectious day; agents recover afterwards.
    pub t_max_infectious: u32,
    /// Simulation length in days.
    pub horizon: u32,
    pub vet_mode: VetMode,
}

impl Default for EpidemicParams {
    fn default() -> Self {
        EpidemicParams {
            r: 4.0,
            s_as: 1.14,
            a_si: 0.88,
            b_n: 1.0,
            i_bar: 2.0,
            mu: 5.5,
            sigma: 2.14,
            vet: 0.9,
            vei: 0.6,
            t_max_infectious: 21,
            horizon: 100,
            vet_mode: VetMode::PerInfection,
        }
    }
}

impl EpidemicParams {
    pub fn validate(&self) -> Result<(), EpidemicError> {
        let non_negative = [("R", self.r), ("S_as", self.s_as), ("A_si", self.a_si), ("B_n", self.b_n)];
        for (name, v) in non_negative {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(invalid(name, "must be finite and non-negative"));
            }
        }
        for (name, v) in [("I_bar", self.i_bar), ("mu", self.mu), ("sigma", self.sigma)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(invalid(name, "must be finite and positive"));
            }
        }
        for (name, v) in [("VET", self.vet), ("VEI", self.vei)] {
            if !(0.0..=1.0).contains(&v) {
                return Err(invalid(name, "must lie in [0, 1]"));
            }
        }
        if self.t_max_infectious == 0 {
            return Err(invalid("t_max_infectious", "must be at least 1"));
        }
        if self.horizon == 0 {
            return Err(invalid("horizon", "must be at least 1"));
        }
        Ok(())
    }

    /// `R · S_as · A_si · B_n / Ī`.
    pub fn rate_scale(&self) -> f64 {
        self.r * self.s_as * self.a_si * self.b_n / self.i_bar
    }
}

/// Mass of the gamma density with mean `mu` and standard deviation `sigma`
/// on `[t - 1, t]`; zero for `t <= 0`.
pub fn infectiousness_integral(t: i64, mu: f64, sigma: f64) -> Result<f64, EpidemicError> {
    if !(mu > 0.0 && mu.is_finite()) {
        return Err(invalid("mu", "must be finite and positive"));
    }
    if !(sigma > 0.0 && sigma.is_finite()) {
        return Err(invalid("sigma", "must be finite and positive"));
    }
    if t <= 0 {
        return Ok(0.0);
    }
    let shape = mu * mu / (sigma * sigma);
    let scale = sigma * sigma / mu;
    let hi = gamma_p(shape, t as f64 / scale);
    let lo = gamma_p(shape, (t - 1) as f64 / scale);
    Ok((hi - lo).max(0.0))
}

/// Largest value below one; keeps the probability in `[0, 1)` even when the
/// rate is huge.
const BELOW_ONE: f64 = 1.0 - f64::EPSILON / 2.0;

fn probability_from_rate(lambda: f64) -> f64 {
    (-expm1(-lambda)).min(BELOW_ONE)
}

/// Per-contact infection probability on day `t` of the infector's illness.
pub fn transmission_probability(t: i64, params: &EpidemicParams) -> Result<f64, EpidemicError> {
    params.validate()?;
    let integral = infectiousness_integral(t, params.mu, params.sigma)?;
    Ok(probability_from_rate(params.rate_scale() * integral))
}

/// Transmission probabilities for days `0..=t_max_infectious`, precomputed
/// once per run.
#[derive(Debug, Clone, PartialEq)]
pub struct TransmissionTable {
    by_day: Vec<f64>,
}

impl TransmissionTable {
    pub fn new(params: &EpidemicParams) -> Result<Self, EpidemicError> {
        params.validate()?;
        let scale = params.rate_scale();
        let mut by_day = Vec::with_capacity(params.t_max_infectious as usize + 1);
        for t in 0..=params.t_max_infectious as i64 {
            let integral = infectiousness_integral(t, params.mu, params.sigma)?;
            by_day.push(probability_from_rate(scale * integral));
        }
        Ok(TransmissionTable { by_day })
    }

    /// Zero outside the infectious window.
    pub fn get(&self, t: u32) -> f64 {
        self.by_day.get(t as usize).copied().unwrap_or(0.0)
    }
}

/// Outcome of one exposure of a susceptible agent.
///
/// `v` and `w` are the two uniform draws (vaccine check, infection check).
/// Both are always consumed for vaccinated contacts so that runs with
/// different `vei` share random numbers.
#[inline]
pub fn exposure_infects(vaccinated: bool, v: f64, w: f64, p: f64, vei: f64) -> bool {
    if vaccinated {
        v > vei && w < p
    } else {
        w < p
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Susceptible,
    Infected { day_infected: u32, transmitter: bool },
    Recovered,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AgentState {
    pub status: Status,
    pub vaccinated: bool,
}

/// New infections of one day, split by vaccination status.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct DailyCount {
    pub unvaccinated: u32,
    pub vaccinated: u32,
}

impl DailyCount {
    pub fn total(&self) -> u32 {
        self.unvaccinated + self.vaccinated
    }
}

/// Where index cases are drawn from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SeedPool {
    #[default]
    All,
    UnvaccinatedOnly,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Seeding {
    pub count: usize,
    pub pool: SeedPool,
}

impl Default for Seeding {
    fn default() -> Self {
        Seeding { count: 10, pool: SeedPool::All }
    }
}

/// Population state of one run.
#[derive(Debug, Clone)]
pub struct SimulationState<R> {
    day: u32,
    agents: Vec<AgentState>,
    /// Currently infected agents, in infection order.
    active: Vec<NodeId>,
    daily_new: Vec<DailyCount>,
    rng: R,
}

impl<R: RngCore> SimulationState<R> {
    /// Everyone susceptible on day 0.
    pub fn new(vaccinated: &[bool], rng: R) -> Self {
        let agents = vaccinated
            .iter()
            .map(|&vaccinated| AgentState { status: Status::Susceptible, vaccinated })
            .collect();
        SimulationState { day: 0, agents, active: Vec::new(), daily_new: alloc::vec![DailyCount::default()], rng }
    }

    pub fn day(&self) -> u32 {
        self.day
    }

    pub fn agents(&self) -> &[AgentState] {
        &self.agents
    }

    /// New infections per day, index `d` for day `d`.
    pub fn daily_new_infections(&self) -> &[DailyCount] {
        &self.daily_new
    }

    pub fn infected_count(&self) -> usize {
        self.active.len()
    }

    pub fn rng_mut(&mut self) -> &mut R {
        &mut self.rng
    }

    /// `(susceptible, infected, recovered)`.
    pub fn compartments(&self) -> (usize, usize, usize) {
        let mut c = (0, 0, 0);
        for a in &self.agents {
            match a.status {
                Status::Susceptible => c.0 += 1,
                Status::Infected { .. } => c.1 += 1,
                Status::Recovered => c.2 += 1,
            }
        }
        c
    }

    fn infect(&mut self, i: NodeId, params: &EpidemicParams) {
        let vaccinated = self.agents[i].vaccinated;
        let transmitter = match params.vet_mode {
            VetMode::PerInfection if vaccinated => self.rng.gen::<f64>() > params.vet,
            _ => true,
        };
        self.agents[i].status = Status::Infected { day_infected: self.day, transmitter };
        let today = self.daily_new.last_mut().expect("current day slot");
        if vaccinated {
            today.vaccinated += 1;
        } else {
            today.unvaccinated += 1;
        }
    }

    /// Infects `count` distinct susceptible agents drawn uniformly from the
    /// pool, on the current day.
    pub fn seed_infections(
        &mut self,
        count: usize,
        pool: SeedPool,
        params: &EpidemicParams,
    ) -> Result<(), EpidemicError> {
        let candidates: Vec<NodeId> = (0..self.agents.len())
            .filter(|&i| {
                let a = &self.agents[i];
                a.status == Status::Susceptible && (pool == SeedPool::All || !a.vaccinated)
            })
            .collect();
        if count > candidates.len() {
            return Err(EpidemicError::PoolTooSmall { requested: count, available: candidates.len() });
        }
        let mut chosen: Vec<NodeId> =
            index::sample(&mut self.rng, candidates.len(), count).into_iter().map(|k| candidates[k]).collect();
        chosen.sort_unstable();
        for &i in &chosen {
            self.infect(i, params);
        }
        self.active.extend(chosen);
        Ok(())
    }

    /// Infects the given susceptible agents on the current day. Agents that
    /// are not susceptible are skipped.
    pub fn seed_nodes(&mut self, nodes: &[NodeId], params: &EpidemicParams) {
        for &i in nodes {
            if self.agents[i].status == Status::Susceptible {
                self.infect(i, params);
                self.active.push(i);
            }
        }
    }

    /// Advances one day.
    ///
    /// Infectious agents (days since infection in `1..=t_max_infectious`)
    /// expose every susceptible neighbor once. Agents infected today do not
    /// transmit until tomorrow. Agents reaching `t_max_infectious` recover at
    /// the end of the day.
    pub fn step_day(&mut self, g: &AnnotatedGraph, params: &EpidemicParams, table: &TransmissionTable) {
        self.day += 1;
        self.daily_new.push(DailyCount::default());
        let today = self.day;
        let mut newly = Vec::new();

        for k in 0..self.active.len() {
            let i = self.active[k];
            let Status::Infected { day_infected, transmitter } = self.agents[i].status else {
                unreachable!("active list holds infected agents only");
            };
            let t = today - day_infected;
            if t == 0 || t > params.t_max_infectious {
                continue;
            }
            let transmits = match params.vet_mode {
                VetMode::PerInfection => transmitter,
                VetMode::PerDay => !self.agents[i].vaccinated || self.rng.gen::<f64>() > params.vet,
            };
            if !transmits {
                continue;
            }
            let p = table.get(t);
            for &j in g.neighbors(i) {
                if self.agents[j].status != Status::Susceptible {
                    continue;
                }
                let vaccinated = self.agents[j].vaccinated;
                let v = if vaccinated { self.rng.gen::<f64>() } else { 1.0 };
                let w = self.rng.gen::<f64>();
                if exposure_infects(vaccinated, v, w, p, params.vei) {
                    self.infect(j, params);
                    newly.push(j);
                }
            }
        }

        let t_max = params.t_max_infectious;
        let agents = &mut self.agents;
        self.active.retain(|&i| match agents[i].status {
            Status::Infected { day_infected, .. } if today - day_infected >= t_max => {
                agents[i].status = Status::Recovered;
                false
            }
            _ => true,
        });
        self.active.extend(newly);
    }
}

/// Per-day record of one simulation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EpidemicRecord {
    /// `horizon + 1` entries (day 0 holds the index cases); zero after the
    /// epidemic dies out.
    pub daily: Vec<DailyCount>,
    pub final_status: Vec<Status>,
    pub vaccinated: Vec<bool>,
    /// Days actually stepped before extinction or the horizon.
    pub days_simulated: u32,
}

/// Seeds index cases and steps until the horizon or until nobody is
/// infected.
pub fn run_epidemic<R: RngCore>(
    g: &AnnotatedGraph,
    params: &EpidemicParams,
    vaccinated: &[bool],
    seeding: Seeding,
    rng: R,
) -> Result<EpidemicRecord, EpidemicError> {
    if vaccinated.len() != g.n() {
        return Err(EpidemicError::VaccinationMismatch { expected: g.n(), got: vaccinated.len() });
    }
    let table = TransmissionTable::new(params)?;
    let mut state = SimulationState::new(vaccinated, rng);
    state.seed_infections(seeding.count, seeding.pool, params)?;
    while state.day < params.horizon && !state.active.is_empty() {
        state.step_day(g, params, &table);
    }
    let days_simulated = state.day;
    let mut daily = state.daily_new;
    daily.resize(params.horizon as usize + 1, DailyCount::default());
    Ok(EpidemicRecord {
        daily,
        final_status: state.agents.iter().map(|a| a.status).collect(),
        vaccinated: vaccinated.to_vec(),
        days_simulated,
    })
}
