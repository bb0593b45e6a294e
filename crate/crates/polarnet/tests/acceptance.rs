//! Acceptance suite. Prints one PASS/FAIL/SKIP line per criterion and exits
//! non-zero if any criterion fails.
//!
//! The dataset criterion reads the anonymized networks from
//! `$POLARNET_DATA_DIR/<year>/{edges,attrs}.csv` and is skipped when the
//! variable is unset.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::sync::OnceLock;
use std::time::{Duration, Instant};

use polarnet::io::load_edge_list;
use polarnet::parallel::compare_scenarios_par;
use polarnet_core::epidemic::{
    infectiousness_integral, EpidemicParams, SeedPool, Seeding, SimulationState, Status, TransmissionTable, VetMode,
};
use polarnet_core::experiment::{Comparison, EnsembleConfig, Subpopulation};
use polarnet_core::generators::{barabasi_albert, erdos_renyi, two_community, watts_strogatz};
use polarnet_core::metrics::*;
use polarnet_core::{stream_rng, AnnotatedGraph, Opinion, SimRng};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

enum Verdict {
    Pass(String),
    Fail(String),
    Skip(String),
}

fn check(ok: bool, detail: String) -> Verdict {
    if ok {
        Verdict::Pass(detail)
    } else {
        Verdict::Fail(detail)
    }
}

fn within(elapsed: Duration, limit_secs: u64) -> bool {
    elapsed < Duration::from_secs(limit_secs)
}

// ---------------------------------------------------------------- oracles

fn adaptive_simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, eps: f64) -> f64 {
    fn simpson<F: Fn(f64) -> f64>(f: &F, a: f64, fa: f64, b: f64, fb: f64) -> (f64, f64, f64) {
        let m = 0.5 * (a + b);
        let fm = f(m);
        (m, fm, (b - a) / 6.0 * (fa + 4.0 * fm + fb))
    }
    #[allow(clippy::too_many_arguments)]
    fn recurse<F: Fn(f64) -> f64>(
        f: &F,
        a: f64,
        fa: f64,
        b: f64,
        fb: f64,
        eps: f64,
        whole: f64,
        m: f64,
        fm: f64,
        depth: u32,
    ) -> f64 {
        let (lm, flm, left) = simpson(f, a, fa, m, fm);
        let (rm, frm, right) = simpson(f, m, fm, b, fb);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * eps {
            return left + right + delta / 15.0;
        }
        recurse(f, a, fa, m, fm, eps / 2.0, left, lm, flm, depth - 1)
            + recurse(f, m, fm, b, fb, eps / 2.0, right, rm, frm, depth - 1)
    }
    let (fa, fb) = (f(a), f(b));
    let (m, fm, whole) = simpson(f, a, fa, b, fb);
    recurse(f, a, fa, b, fb, eps, whole, m, fm, 50)
}

struct Dense {
    adj: Vec<Vec<bool>>,
    labels: Vec<bool>,
}

fn random_dense(seed: u64) -> (AnnotatedGraph, Dense) {
    let mut rng = stream_rng(seed, 11);
    let n = rng.gen_range(2..=50);
    let p: f64 = rng.gen_range(0.0..0.6);
    let labels: Vec<bool> = (0..n).map(|_| rng.gen_bool(0.5)).collect();
    let mut adj = vec![vec![false; n]; n];
    let mut edges = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            if rng.gen_bool(p) {
                adj[a][b] = true;
                adj[b][a] = true;
                edges.push((a, b));
            }
        }
    }
    let opinions = labels.iter().map(|&l| if l { Opinion::Pro } else { Opinion::Anti }).collect();
    (AnnotatedGraph::from_edges(opinions, edges).unwrap().0, Dense { adj, labels })
}

fn brute_local_cc(adj: &[Vec<bool>], i: usize) -> f64 {
    let nb: Vec<usize> = (0..adj.len()).filter(|&j| adj[i][j]).collect();
    let k = nb.len();
    if k < 2 {
        return 0.0;
    }
    let mut links = 0usize;
    for x in 0..k {
        for y in x + 1..k {
            links += adj[nb[x]][nb[y]] as usize;
        }
    }
    (2 * links) as f64 / (k * (k - 1)) as f64
}

fn brute_mixing(d: &Dense) -> Option<[[f64; 2]; 2]> {
    let n = d.adj.len();
    let mut c = [[0usize; 2]; 2];
    for i in 0..n {
        for j in 0..n {
            if d.adj[i][j] {
                c[d.labels[i] as usize][d.labels[j] as usize] += 1;
            }
        }
    }
    let total: usize = c.iter().flatten().sum();
    (total > 0).then(|| c.map(|row| row.map(|x| x as f64 / total as f64)))
}

fn brute_r(e: &[[f64; 2]; 2]) -> f64 {
    let a = [e[0][0] + e[0][1], e[1][0] + e[1][1]];
    let b = [e[0][0] + e[1][0], e[0][1] + e[1][1]];
    let ab = a[0] * b[0] + a[1] * b[1];
    (e[0][0] + e[1][1] - ab) / (1.0 - ab)
}

// ---------------------------------------------------------------- criteria

fn metric_oracles() -> Verdict {
    const TOL: f64 = 1e-12;
    let start = Instant::now();
    let mut worst = 0.0f64;
    let mut track = |a: f64, b: f64| worst = worst.max((a - b).abs());
    for seed in 0..200 {
        let (g, d) = random_dense(seed);
        let n = d.adj.len();
        let edges = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).filter(|&(a, b)| d.adj[a][b]).count();
        track(density(&g).unwrap(), edges as f64 / (n * (n - 1) / 2) as f64);
        let mut sum = 0.0;
        for i in 0..n {
            let c = brute_local_cc(&d.adj, i);
            sum += c;
            track(local_clustering(&g, i).unwrap(), c);
        }
        track(average_clustering(&g).unwrap(), sum / n as f64);
        let Some(e) = brute_mixing(&d) else {
            if mixing_matrix(&g, &d.labels).is_ok() {
                return Verdict::Fail(format!("seed {seed}: mixing matrix of an edgeless graph"));
            }
            continue;
        };
        let m = mixing_matrix(&g, &d.labels).unwrap();
        for a in 0..2 {
            for b in 0..2 {
                track(m.e[a][b], e[a][b]);
            }
        }
        let single_group = e[0][0] + e[0][1] == 0.0 || e[1][0] + e[1][1] == 0.0;
        match assortativity(&m) {
            Ok(r) => track(r, brute_r(&e)),
            Err(_) if single_group => {}
            Err(err) => return Verdict::Fail(format!("seed {seed}: {err}")),
        }
        if e[0][0] + e[1][1] > 0.0 {
            track(cross_connection_ratio(&m).unwrap(), 2.0 * e[1][0] / (e[0][0] + e[1][1]));
        }
    }
    let t = start.elapsed();
    check(worst <= TOL && within(t, 10), format!("max deviation {worst:.1e} over 200 graphs, {:.2} s", t.as_secs_f64()))
}

fn assortativity_extremes() -> Verdict {
    let clique = |offset: usize, k: usize| (0..k).flat_map(move |a| (a + 1..k).map(move |b| (offset + a, offset + b)));
    let mut ops = vec![Opinion::Pro; 10];
    ops.extend(vec![Opinion::Anti; 14]);
    let g = AnnotatedGraph::from_edges(ops, clique(0, 10).chain(clique(10, 14))).unwrap().0;
    let r_plus = assortativity(&opinion_mixing_matrix(&g).unwrap()).unwrap();

    let (p, q) = (7, 9);
    let mut ops = vec![Opinion::Pro; p];
    ops.extend(vec![Opinion::Anti; q]);
    let bip = (0..p).flat_map(|a| (p..p + q).map(move |b| (a, b)));
    let g = AnnotatedGraph::from_edges(ops, bip).unwrap().0;
    let r_minus = assortativity(&opinion_mixing_matrix(&g).unwrap()).unwrap();

    let g = erdos_renyi(2000, 0.005, 17).unwrap();
    let mut rng = stream_rng(17, 1);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let labels: Vec<bool> = (0..g.n()).map(|_| rng.gen_bool(0.5)).collect();
        worst = worst.max(assortativity(&mixing_matrix(&g, &labels).unwrap()).unwrap().abs());
    }
    check(
        r_plus == 1.0 && r_minus == -1.0 && worst < 0.05,
        format!("cliques r={r_plus}, bipartite r={r_minus}, max |r| over 100 relabelings {worst:.4}"),
    )
}

struct YearTargets {
    year: &'static str,
    users: usize,
    edges: usize,
    anti_pct: f64,
    density: f64,
    cc: f64,
    assortativity: f64,
    density_pro: f64,
    density_anti: f64,
    gamma: [f64; 3],
}

const YEARS: [YearTargets; 3] = [
    YearTargets {
        year: "2020",
        users: 113038,
        edges: 223099,
        anti_pct: 29.0,
        density: 0.00003,
        cc: 0.05,
        assortativity: 0.92,
        density_pro: 0.00004,
        density_anti: 0.00016,
        gamma: [2.47, 2.64, 2.22],
    },
    YearTargets {
        year: "2021",
        users: 18826,
        edges: 75750,
        anti_pct: 47.0,
        density: 0.00043,
        cc: 0.17,
        assortativity: 0.99,
        density_pro: 0.00067,
        density_anti: 0.00109,
        gamma: [2.1, 2.14, 2.06],
    },
    YearTargets {
        year: "2022",
        users: 3617,
        edges: 14604,
        anti_pct: 69.0,
        density: 0.00223,
        cc: 0.18,
        assortativity: 0.99,
        density_pro: 0.00529,
        density_anti: 0.00360,
        gamma: [2.07, 2.18, 1.97],
    },
];

fn dataset_reproduction() -> Verdict {
    let Some(root) = std::env::var_os("POLARNET_DATA_DIR").map(PathBuf::from) else {
        return Verdict::Skip("POLARNET_DATA_DIR not set".into());
    };
    let mut problems = Vec::new();
    let mut notes = Vec::new();
    for y in &YEARS {
        let dir = root.join(y.year);
        let start = Instant::now();
        let g = match load_edge_list(&dir.join("edges.csv"), &dir.join("attrs.csv")) {
            Ok((g, _)) => g,
            Err(e) => {
                problems.push(format!("{}: {e}", y.year));
                continue;
            }
        };
        let report = metrics_report(&g, 1).unwrap();
        let mut cmp = |name: &str, got: f64, want: f64, tol: f64| {
            if (got - want).abs() > tol {
                problems.push(format!("{} {name} {got:.5} vs {want}", y.year));
            }
        };
        cmp("users", g.n() as f64, y.users as f64, 0.0);
        cmp("edges", g.edge_count() as f64, y.edges as f64, 0.0);
        cmp("% anti", 100.0 * report.anti_fraction, y.anti_pct, 1.0);
        cmp("density", report.density, y.density, 1e-5);
        cmp("CC", report.avg_clustering, y.cc, 0.01);
        cmp("A", report.assortativity.unwrap_or(f64::NAN), y.assortativity, 0.005);
        let pro = g.subgraph_by_opinion(Opinion::Pro);
        let anti = g.subgraph_by_opinion(Opinion::Anti);
        cmp("density pro", density(&pro).unwrap_or(f64::NAN), y.density_pro, 1e-5);
        cmp("density anti", density(&anti).unwrap_or(f64::NAN), y.density_anti, 1e-5);
        for (name, graph, want) in [("gamma", &g, y.gamma[0]), ("gamma pro", &pro, y.gamma[1]), ("gamma anti", &anti, y.gamma[2])] {
            let got = fit_power_law(&degree_distribution(graph), 1).map(|f| f.gamma).unwrap_or(f64::NAN);
            cmp(name, got, want, 0.15);
        }
        let t = start.elapsed();
        if y.year == "2020" && !within(t, 120) {
            problems.push(format!("2020 took {:.1} s", t.as_secs_f64()));
        }
        notes.push(format!("{} in {:.1} s", y.year, t.as_secs_f64()));
    }
    if problems.is_empty() {
        Verdict::Pass(notes.join(", "))
    } else {
        Verdict::Fail(problems.join("; "))
    }
}

fn infectiousness_integral_accuracy() -> Verdict {
    let (mu, sigma) = (5.5, 2.14);
    let shape = mu * mu / (sigma * sigma);
    let scale = sigma * sigma / mu;
    let kernel = move |u: f64| if u <= 0.0 { 0.0 } else { u.powf(shape - 1.0) * (-u / scale).exp() };
    let z: f64 = (0..200).map(|i| adaptive_simpson(&kernel, i as f64, i as f64 + 1.0, 1e-15)).sum();
    let pdf = |u: f64| kernel(u) / z;
    let mut worst = 0.0f64;
    for t in 1..=30 {
        let oracle = adaptive_simpson(&pdf, (t - 1) as f64, t as f64, 1e-14);
        worst = worst.max((infectiousness_integral(t, mu, sigma).unwrap() - oracle).abs());
    }
    let mass: f64 = (1..=60).map(|t| infectiousness_integral(t, mu, sigma).unwrap()).sum();
    let oracle_mass: f64 = (0..60).map(|i| adaptive_simpson(&pdf, i as f64, i as f64 + 1.0, 1e-14)).sum();
    let mass_err = (mass - 1.0).abs().max((oracle_mass - 1.0).abs());
    check(
        worst < 1e-8 && mass_err < 1e-6,
        format!("max |integral - quadrature| {worst:.1e}, |mass on [0,60] - 1| {mass_err:.1e}"),
    )
}

fn power_law_recovery() -> Verdict {
    let start = Instant::now();
    let synthetic = DegreeDistribution::from_counts((1..=1000usize).map(|k| (k, (1e9 / (k * k) as f64).round() as usize)));
    let g_syn = fit_power_law(&synthetic, 1).map(|f| f.gamma).unwrap_or(f64::NAN);
    let gammas: Vec<f64> = (0..10)
        .map(|seed| {
            let g = barabasi_albert(20000, 3, seed).unwrap();
            fit_power_law(&degree_distribution(&g), 3).map(|f| f.gamma).unwrap_or(f64::NAN)
        })
        .collect();
    let mean = gammas.iter().sum::<f64>() / gammas.len() as f64;
    let t = start.elapsed();
    check(
        (g_syn - 2.0).abs() <= 0.02 && (2.6..=3.4).contains(&mean) && within(t, 30),
        format!("synthetic gamma {g_syn:.4}, BA mean gamma {mean:.3} over 10 seeds, {:.2} s", t.as_secs_f64()),
    )
}

fn desk_graph() -> AnnotatedGraph {
    two_community(2000, 2000, 0.004, 0.00004, 42).unwrap()
}

fn desk_config() -> EnsembleConfig {
    EnsembleConfig { n_runs: 100, seeding: Seeding { count: 10, pool: SeedPool::All }, redraw_allocation: true }
}

const DESK_SEED: u64 = 42;

static DESK: OnceLock<(Comparison, Duration)> = OnceLock::new();

fn desk_comparison() -> &'static (Comparison, Duration) {
    DESK.get_or_init(|| {
        let start = Instant::now();
        let g = desk_graph();
        let params = EpidemicParams { i_bar: 2.0, ..Default::default() };
        let cmp = compare_scenarios_par(&g, &params, &desk_config(), DESK_SEED).unwrap();
        (cmp, start.elapsed())
    })
}

fn polarization_effect() -> Verdict {
    let (cmp, t) = desk_comparison();
    let ar = |e: &polarnet_core::EnsembleSummary, s| e.mean_attack_rate(s).unwrap_or(f64::NAN);
    let (pu, hu) = (ar(&cmp.polarized, Subpopulation::Unvaccinated), ar(&cmp.homogeneous, Subpopulation::Unvaccinated));
    let (pv, hv) = (ar(&cmp.polarized, Subpopulation::Vaccinated), ar(&cmp.homogeneous, Subpopulation::Vaccinated));
    let ratio = pu / hu;
    check(
        ratio >= 1.5 && pv <= hv && within(*t, 300),
        format!(
            "unvaccinated AR polarized {pu:.4} / homogeneous {hu:.4} = {ratio:.3} (need >= 1.5); \
             vaccinated AR {pv:.4} vs {hv:.4}; {:.1} s",
            t.as_secs_f64()
        ),
    )
}

fn peak_ordering() -> Verdict {
    let (cmp, _) = desk_comparison();
    let p = cmp.polarized.mean_t_peak(Subpopulation::Unvaccinated).unwrap_or(f64::NAN);
    let h = cmp.homogeneous.mean_t_peak(Subpopulation::Unvaccinated).unwrap_or(f64::NAN);
    check(p <= h, format!("mean unvaccinated peak day polarized {p:.2} vs homogeneous {h:.2}"))
}

fn null_effect() -> Verdict {
    let g = desk_graph();
    let params = EpidemicParams { i_bar: 2.0, vet: 0.0, vei: 0.0, ..Default::default() };
    let cmp = compare_scenarios_par(&g, &params, &desk_config(), DESK_SEED).unwrap();
    let ratios: Vec<f64> =
        Subpopulation::ALL.iter().map(|&s| cmp.ratio(s).attack_rate_ratio.unwrap_or(f64::NAN)).collect();
    check(
        ratios.iter().all(|r| (0.9..=1.1).contains(r)),
        format!("AR ratios unvaccinated/vaccinated/all {:.3} / {:.3} / {:.3}", ratios[0], ratios[1], ratios[2]),
    )
}

fn read_dir_sorted(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut files: Vec<(String, Vec<u8>)> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            (e.file_name().to_string_lossy().into_owned(), std::fs::read(e.path()).unwrap())
        })
        .collect();
    files.sort();
    files
}

fn determinism() -> Verdict {
    let dir = tempfile::tempdir().unwrap();
    let cfg = "generator = two_community\nn_pro = 2000\nn_anti = 2000\np_in = 0.004\np_out = 0.00004\n\
               graph_seed = 42\nI_bar = 2\nindex_cases = 10\nn_runs = 100\n";
    std::fs::write(dir.path().join("desk.cfg"), cfg).unwrap();
    let mut outputs = Vec::new();
    for (out, threads) in [("a", "1"), ("b", "4"), ("c", "4"), ("d", "0")] {
        let status = Command::new(env!("CARGO_BIN_EXE_polarnet"))
            .args(["compare", "--config", "desk.cfg", "--seed", "7", "--threads", threads, "--out", out])
            .current_dir(dir.path())
            .output()
            .unwrap();
        if !status.status.success() {
            return Verdict::Fail(format!("compare exited with {}", status.status));
        }
        outputs.push(read_dir_sorted(&dir.path().join(out)));
    }
    let names: Vec<&str> = outputs[0].iter().map(|(n, _)| n.as_str()).collect();
    let csv = names.iter().filter(|n| n.ends_with(".csv")).count();
    let svg = names.iter().filter(|n| n.ends_with(".svg")).count();
    let identical = outputs.iter().all(|o| *o == outputs[0]);
    check(
        identical && csv >= 3 && svg >= 1,
        format!("{csv} CSV and {svg} SVG files identical across runs with 1, 4, 4 and auto threads: {identical}"),
    )
}

fn random_small_graph(rng: &mut SimRng) -> AnnotatedGraph {
    let seed = rng.gen();
    let g = match rng.gen_range(0..4) {
        0 => erdos_renyi(rng.gen_range(2..60), rng.gen_range(0.0..0.5), seed),
        1 => {
            let half = rng.gen_range(1..4);
            watts_strogatz(rng.gen_range(2 * half + 1..60), 2 * half, rng.gen_range(0.0..1.0), seed)
        }
        2 => {
            let m = rng.gen_range(1..4);
            barabasi_albert(rng.gen_range(m + 1..60), m, seed)
        }
        _ => {
            let p_out = rng.gen_range(0.0..0.1);
            two_community(rng.gen_range(1..30), rng.gen_range(1..30), rng.gen_range(p_out..0.6), p_out, seed)
        }
    };
    let g = g.unwrap();
    // shuffle opinions so that they are not tied to the generator's layout
    let mut ops: Vec<Opinion> = g.opinions().to_vec();
    for o in ops.iter_mut() {
        if rng.gen_bool(0.5) {
            *o = if *o == Opinion::Pro { Opinion::Anti } else { Opinion::Pro };
        }
    }
    ops.shuffle(rng);
    g.with_opinions(ops).unwrap()
}

fn invariants() -> Verdict {
    let mut rng = SimRng::seed_from_u64(2024);
    let mut steps = 0usize;
    for sim in 0..1000 {
        let g = random_small_graph(&mut rng);
        let n = g.n();
        let coverage = rng.gen_range(0.0..1.0);
        let vacc: Vec<bool> = (0..n).map(|_| rng.gen_bool(coverage)).collect();
        let params = EpidemicParams {
            r: rng.gen_range(0.0..30.0),
            i_bar: rng.gen_range(0.5..5.0),
            vet: rng.gen_range(0.0..=1.0),
            vei: rng.gen_range(0.0..=1.0),
            t_max_infectious: rng.gen_range(1..25),
            horizon: rng.gen_range(10..80),
            vet_mode: if rng.gen_bool(0.5) { VetMode::PerDay } else { VetMode::PerInfection },
            ..Default::default()
        };
        let table = TransmissionTable::new(&params).unwrap();
        let pool = if rng.gen_bool(0.5) { SeedPool::All } else { SeedPool::UnvaccinatedOnly };
        let available = match pool {
            SeedPool::All => n,
            SeedPool::UnvaccinatedOnly => vacc.iter().filter(|&&v| !v).count(),
        };
        let count = rng.gen_range(0..=available.min(5));
        let mut state = SimulationState::new(&vacc, SimRng::seed_from_u64(rng.gen()));
        state.seed_infections(count, pool, &params).unwrap();

        let mut prev: Vec<Status> = state.agents().iter().map(|a| a.status).collect();
        let mut prev_cum = 0u64;
        let mut prev_s = n;
        for day in 0..=params.horizon {
            if day > 0 {
                state.step_day(&g, &params, &table);
                steps += 1;
            }
            let (s, i, r) = state.compartments();
            let cum: u64 = state.daily_new_infections().iter().map(|d| d.total() as u64).sum();
            let fail = |what: &str| Verdict::Fail(format!("simulation {sim} day {day}: {what}"));
            if s + i + r != n {
                return fail(&format!("S+I+R = {} != {n}", s + i + r));
            }
            if cum < prev_cum || cum != (i + r) as u64 || s > prev_s {
                return fail("cumulative infections decreased or disagree with I+R");
            }
            for (a, agent) in state.agents().iter().enumerate() {
                let ok = match (prev[a], agent.status) {
                    (Status::Susceptible, _) => true,
                    (Status::Infected { day_infected: d0, .. }, Status::Infected { day_infected: d1, .. }) => d0 == d1,
                    (Status::Infected { .. }, Status::Recovered) => true,
                    (Status::Recovered, Status::Recovered) => true,
                    _ => false,
                };
                if !ok {
                    return fail(&format!("agent {a} went {:?} -> {:?}", prev[a], agent.status));
                }
                prev[a] = agent.status;
            }
            prev_cum = cum;
            prev_s = s;
        }
    }
    Verdict::Pass(format!("1000 simulations, {steps} steps"))
}

fn main() {
    let criteria: [(&str, fn() -> Verdict); 10] = [
        ("1 metric oracles", metric_oracles),
        ("2 assortativity extremes", assortativity_extremes),
        ("3 dataset reproduction", dataset_reproduction),
        ("4 infectiousness integral", infectiousness_integral_accuracy),
        ("5 power-law fit recovery", power_law_recovery),
        ("6 polarization screening effect", polarization_effect),
        ("7 peak-day ordering", peak_ordering),
        ("8 null-effect control", null_effect),
        ("9 determinism", determinism),
        ("10 conservation and monotonicity", invariants),
    ];
    let mut failed = 0;
    for (name, f) in criteria {
        let verdict = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Verdict::Fail(format!("panicked: {msg}"))
        });
        match verdict {
            Verdict::Pass(d) => println!("PASS criterion {name}: {d}"),
            Verdict::Skip(d) => println!("SKIP criterion {name}: {d}"),
            Verdict::Fail(d) => {
                failed += 1;
                println!("FAIL criterion {name}: {d}");
            }
        }
    }
    if failed > 0 {
        println!("{failed} criterion(s) failed");
        std::process::exit(1);
    }
}
