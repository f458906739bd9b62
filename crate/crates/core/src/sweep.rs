//! Error-probability curves over `(Ns, N)` grids.

use std::io::Write;

use rayon::prelude::*;
use serde::Serialize;

use crate::baseline::homodyne_pe;
use crate::constellation::Modulation;
use crate::glauber::ThermalNoise;
use crate::hermitian::RankMetric;
use crate::system::{binary_helstrom, default_epsilon, evaluate, PointConfig, DEFAULT_NU};
use crate::{Error, Result};

/// CSV header of [`write_csv`].
pub const CSV_HEADER: [&str; 7] = [
    "modulation",
    "ns",
    "noise",
    "n_dim",
    "pe_srm",
    "pe_homodyne",
    "pe_helstrom",
];

/// Environment variable capping the number of worker threads.
pub const THREADS_ENV: &str = "QSRM_THREADS";

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub modulation: Modulation,
    pub ns_grid: Vec<f64>,
    pub noise_list: Vec<f64>,
    pub epsilon: f64,
    pub nu: f64,
    pub metric: RankMetric,
    pub homodyne: bool,
    /// Only used for two-symbol constellations.
    pub helstrom: bool,
}

impl SweepSpec {
    pub fn new(modulation: Modulation, ns_grid: Vec<f64>, noise_list: Vec<f64>) -> Self {
        SweepSpec {
            modulation,
            ns_grid,
            noise_list,
            epsilon: default_epsilon(modulation),
            nu: DEFAULT_NU,
            metric: RankMetric::default(),
            homodyne: true,
            helstrom: true,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.modulation.validate()?;
        if self.ns_grid.is_empty() {
            return Err(Error::param("ns", "grid is empty"));
        }
        if self.ns_grid.iter().any(|&x| !(x > 0.0 && x.is_finite())) {
            return Err(Error::param("ns", "all values must be > 0"));
        }
        if self.ns_grid.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::param("ns", "grid must be strictly increasing"));
        }
        if self.noise_list.is_empty() {
            return Err(Error::param("noise", "list is empty"));
        }
        for &n in &self.noise_list {
            ThermalNoise::new(n).map_err(|_| Error::param("noise", format!("must be >= 0, got {n}")))?;
        }
        if !(self.epsilon > 0.0 && self.epsilon < 0.1) {
            return Err(Error::param(
                "eps",
                format!("must lie in (0, 0.1), got {}", self.epsilon),
            ));
        }
        if !(self.nu > 0.0 && self.nu < 0.1) {
            return Err(Error::param("nu", format!("must lie in (0, 0.1), got {}", self.nu)));
        }
        Ok(())
    }

    /// Operating points in output order: noise outer, `Ns` inner.
    pub fn points(&self) -> Vec<PointConfig> {
        self.noise_list
            .iter()
            .flat_map(|&noise| {
                self.ns_grid.iter().map(move |&ns| PointConfig {
                    epsilon: self.epsilon,
                    nu: self.nu,
                    metric: self.metric,
                    ..PointConfig::new(self.modulation, ns, noise)
                })
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub modulation: String,
    pub ns: f64,
    pub noise: f64,
    pub n_dim: usize,
    pub pe_srm: f64,
    pub pe_homodyne: Option<f64>,
    pub pe_helstrom: Option<f64>,
}

fn run_point(spec: &SweepSpec, cfg: &PointConfig) -> Result<SweepRow> {
    let srm = evaluate(cfg)?;
    let n = srm.meta.n;
    let pe_homodyne = match spec.homodyne {
        true => Some(homodyne_pe(cfg.modulation, cfg.ns, cfg.noise)?),
        false => None,
    };
    let pe_helstrom = match spec.helstrom && cfg.modulation.order() == 2 {
        true => {
            let c = cfg.modulation.constellation(cfg.ns)?;
            Some(binary_helstrom(&c, ThermalNoise::new(cfg.noise)?, n)?)
        }
        false => None,
    };
    Ok(SweepRow {
        modulation: cfg.modulation.label(),
        ns: cfg.ns,
        noise: cfg.noise,
        n_dim: n,
        pe_srm: srm.pe,
        pe_homodyne,
        pe_helstrom,
    })
}

/// Worker count from [`THREADS_ENV`], if set to a positive integer.
pub fn thread_cap() -> Option<usize> {
    std::env::var(THREADS_ENV).ok()?.trim().parse().ok().filter(|&n| n > 0)
}

/// Evaluates every point of `spec`. Rows come back in [`SweepSpec::points`]
/// order regardless of scheduling.
pub fn run(spec: &SweepSpec) -> Result<Vec<SweepRow>> {
    spec.validate()?;
    let points = spec.points();
    let work = || points.par_iter().map(|cfg| run_point(spec, cfg)).collect();
    match thread_cap() {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::param("QSRM_THREADS", e.to_string()))?
            .install(work),
        None => work(),
    }
}

/// `x` with 10 significant digits, fixed notation for moderate exponents.
pub fn format_sig10(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return if x == 0.0 { "0".into() } else { x.to_string() };
    }
    let sci = format!("{x:.9e}");
    let exp: i32 = sci[sci.find('e').unwrap() + 1..].parse().unwrap();
    if (-5..10).contains(&exp) {
        let fixed = format!("{:.*}", (9 - exp).max(0) as usize, x);
        trim_zeros(&fixed).to_string()
    } else {
        let (mant, e) = sci.split_at(sci.find('e').unwrap());
        format!("{}{}", trim_zeros(mant), e)
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

fn opt(x: Option<f64>) -> String {
    x.map(format_sig10).unwrap_or_default()
}

pub fn write_csv<W: Write>(rows: &[SweepRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for r in rows {
        w.write_record([
            r.modulation.clone(),
            format_sig10(r.ns),
            format_sig10(r.noise),
            r.n_dim.to_string(),
            format_sig10(r.pe_srm),
            opt(r.pe_homodyne),
            opt(r.pe_helstrom),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn to_json(rows: &[SweepRow]) -> String {
    serde_json::to_string_pretty(rows).expect("sweep rows are always serializable")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gus::pure_psk_pe;

    #[test]
    fn sig10_formatting() {
        assert_eq!(format_sig10(1.0), "1");
        assert_eq!(format_sig10(0.1), "0.1");
        assert_eq!(format_sig10(0.08587123456789), "0.08587123457");
        assert_eq!(format_sig10(1.23456789012e-7), "1.23456789e-7");
        assert_eq!(format_sig10(9.99999999999), "10");
        assert_eq!(format_sig10(0.0), "0");
        assert_eq!(format_sig10(12345678901.0), "1.23456789e10");
    }

    #[test]
    fn validation() {
        let m = Modulation::Psk { order: 4 };
        assert!(SweepSpec::new(m, vec![1.0, 2.0], vec![0.0]).validate().is_ok());
        assert!(SweepSpec::new(m, vec![2.0, 1.0], vec![0.0]).validate().is_err());
        assert!(SweepSpec::new(m, vec![1.0], vec![]).validate().is_err());
        assert!(SweepSpec::new(m, vec![0.0, 1.0], vec![0.1]).validate().is_err());
        assert!(SweepSpec::new(m, vec![], vec![0.1]).validate().is_err());
    }

    #[test]
    fn noiseless_psk_row() {
        let mut spec = SweepSpec::new(Modulation::Psk { order: 4 }, vec![1.0], vec![0.0]);
        spec.epsilon = 1e-12;
        let rows = run(&spec).unwrap();
        assert_eq!(rows.len(), 1);
        assert!((rows[0].pe_srm - pure_psk_pe(4, 1.0)).abs() < 1e-9);
        assert!(rows[0].pe_helstrom.is_none());
    }

    #[test]
    fn csv_layout_and_order() {
        let spec = SweepSpec::new(Modulation::Psk { order: 2 }, vec![0.5, 1.0], vec![0.0, 0.1]);
        let rows = run(&spec).unwrap();
        let mut buf = Vec::new();
        write_csv(&rows, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<_> = text.lines().collect();
        assert_eq!(lines[0], "modulation,ns,noise,n_dim,pe_srm,pe_homodyne,pe_helstrom");
        assert_eq!(lines.len(), 5);
        assert!(lines[1].starts_with("psk-2,0.5,0,"));
        assert!(lines[4].starts_with("psk-2,1,0.1,"));
        for r in &rows {
            assert!(r.pe_helstrom.unwrap() <= r.pe_srm + 1e-12);
        }
        let again = run(&spec).unwrap();
        assert_eq!(rows, again);
    }
}
