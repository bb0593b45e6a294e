//! CSV reports. Numbers never depend on locale; undefined values are `NA`.

use std::io::{self, Write};

use polarnet_core::experiment::{Comparison, EnsembleSummary, Subpopulation};
use polarnet_core::MetricsReport;

pub const CURVES_HEADER: &str = "day,new_unvacc,new_vacc,new_all,cum_unvacc,cum_vacc,cum_all";
pub const SUMMARY_HEADER: &str = "scenario,subpop,attack_rate,t_peak";
pub const RATIOS_HEADER: &str = "subpop,attack_rate_ratio,t_peak_difference";

fn fixed6(v: Option<f64>) -> String {
    v.map_or_else(|| "NA".to_owned(), |v| format!("{v:.6}"))
}

/// `metric,value` rows. Values keep full precision.
pub fn write_metrics_csv<W: Write>(r: &MetricsReport, mut w: W) -> io::Result<()> {
    let full = |v: Option<f64>| v.map_or_else(|| "NA".to_owned(), |v| v.to_string());
    writeln!(w, "metric,value")?;
    writeln!(w, "nodes,{}", r.nodes)?;
    writeln!(w, "edges,{}", r.edges)?;
    writeln!(w, "anti_fraction,{}", r.anti_fraction)?;
    writeln!(w, "density,{}", r.density)?;
    writeln!(w, "mean_degree,{}", r.mean_degree)?;
    writeln!(w, "avg_clustering,{}", r.avg_clustering)?;
    writeln!(w, "assortativity,{}", full(r.assortativity))?;
    writeln!(w, "cross_connection,{}", full(r.cross_connection))?;
    writeln!(w, "power_law_gamma,{}", full(r.power_law.map(|f| f.gamma)))?;
    writeln!(w, "power_law_k_min,{}", r.power_law.map_or_else(|| "NA".to_owned(), |f| f.k_min.to_string()))?;
    writeln!(w, "power_law_r2,{}", full(r.power_law.map(|f| f.r2)))?;
    Ok(())
}

/// Ensemble-mean daily and cumulative fractions, one row per day. Columns of
/// an empty subpopulation are `NA`.
pub fn write_curves_csv<W: Write>(ens: &EnsembleSummary, mut w: W) -> io::Result<()> {
    let aggs = Subpopulation::ALL.map(|s| ens.aggregate(s));
    writeln!(w, "{CURVES_HEADER}")?;
    for day in 0..aggs[0].mean_daily.len() {
        write!(w, "{day}")?;
        for a in &aggs {
            write!(w, ",{}", fixed6((a.size > 0).then(|| a.mean_daily[day])))?;
        }
        for a in &aggs {
            write!(w, ",{}", fixed6((a.size > 0).then(|| a.mean_cumulative[day])))?;
        }
        writeln!(w)?;
    }
    Ok(())
}

/// Mean attack rate and mean peak day per scenario and subpopulation.
pub fn write_summary_csv<W: Write>(ensembles: &[&EnsembleSummary], mut w: W) -> io::Result<()> {
    writeln!(w, "{SUMMARY_HEADER}")?;
    for ens in ensembles {
        for s in Subpopulation::ALL {
            let a = ens.aggregate(s);
            writeln!(w, "{},{},{},{}", ens.strategy.as_str(), s.as_str(), fixed6(a.mean_attack_rate), fixed6(a.mean_t_peak))?;
        }
    }
    Ok(())
}

/// Polarized over homogeneous attack rate, and polarized minus homogeneous
/// peak day.
pub fn write_ratios_csv<W: Write>(cmp: &Comparison, mut w: W) -> io::Result<()> {
    writeln!(w, "{RATIOS_HEADER}")?;
    for s in Subpopulation::ALL {
        let r = cmp.ratio(s);
        writeln!(w, "{},{},{}", s.as_str(), fixed6(r.attack_rate_ratio), fixed6(r.t_peak_difference))?;
    }
    Ok(())
}
