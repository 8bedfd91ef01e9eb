//! `mincut bench`: round counts per stage over a size sweep.

use std::fmt::Write as _;

use anyhow::{Context, Result};
use mincut::{generate, measure_diameter, run_all_stages, Family, GenParams, PipelineConfig, RoundStats};

use crate::BenchArgs;

pub const HEADER: &str =
    "family,n,trial,seed,D,rounds_bfs,rounds_size1,rounds_size2,rounds_size3,rounds_total,bits_peak,small_per_D,size3_per_D2";

/// Stage a phase label belongs to.
pub fn phase_group(label: &str) -> usize {
    match label {
        "bfs" | "broadcast1:ancestors" => 0,
        "exchange:ancestors" | "trsf:eta" | "broadcast1:eta" | "exchange:eta" => 1,
        "trsf:zeta" => 2,
        _ => 3,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub family: Family,
    pub n: usize,
    pub trial: u64,
    pub seed: u64,
    pub diameter: usize,
    /// BFS, size 1, size 2, size 3.
    pub rounds: [u64; 4],
    pub bits_peak: usize,
}

impl Row {
    fn new(family: Family, n: usize, trial: u64, seed: u64, diameter: usize, stats: &RoundStats) -> Self {
        let mut rounds = [0; 4];
        for p in &stats.per_phase {
            rounds[phase_group(&p.label)] += p.rounds;
        }
        Row { family, n, trial, seed, diameter, rounds, bits_peak: stats.max_bits_per_edge_per_round }
    }

    pub fn small_per_d(&self) -> f64 {
        (self.rounds[0] + self.rounds[1] + self.rounds[2]) as f64 / self.diameter.max(1) as f64
    }

    pub fn size3_per_d2(&self) -> f64 {
        self.rounds[3] as f64 / self.diameter.max(1).pow(2) as f64
    }

    pub fn csv(&self) -> String {
        let r = &self.rounds;
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{:.4},{:.4}",
            self.family,
            self.n,
            self.trial,
            self.seed,
            self.diameter,
            r[0],
            r[1],
            r[2],
            r[3],
            r.iter().sum::<u64>(),
            self.bits_peak,
            self.small_per_d(),
            self.size3_per_d2()
        )
    }
}

/// Every stage runs on every instance, so size-3 rounds are measured even
/// where a smaller cut exists. Trial `t` uses seed `seed + t`; only
/// `random_connected` depends on it.
pub fn sweep(family: Family, sizes: &[usize], trials: u64, seed: u64, p: f64) -> Result<Vec<Row>> {
    let config = PipelineConfig::default();
    let mut rows = Vec::new();
    for &n in sizes {
        let runs: Vec<Result<Row>> = std::thread::scope(|s| {
            let handles: Vec<_> = (0..trials)
                .map(|t| {
                    let config = &config;
                    s.spawn(move || -> Result<Row> {
                        let g = generate(family, &GenParams::new(n).seed(seed + t).p(p))?;
                        let out = run_all_stages(&g, config)?;
                        Ok(Row::new(family, n, t, seed + t, measure_diameter(&g)?, &out.stats))
                    })
                })
                .collect();
            handles.into_iter().map(|h| h.join().expect("bench worker panicked")).collect()
        });
        for r in runs {
            rows.push(r.with_context(|| format!("{family} n={n}"))?);
        }
    }
    Ok(rows)
}

pub fn table(rows: &[Row]) -> String {
    let mut out = String::from(HEADER);
    out.push('\n');
    for r in rows {
        let _ = writeln!(out, "{}", r.csv());
    }
    out
}

pub fn cmd_bench(a: &BenchArgs) -> Result<u8> {
    let rows = sweep(a.family, &a.sizes, a.trials.max(1), a.seed, a.p)?;
    let text = table(&rows);
    print!("{text}");
    if let Some(path) = &a.out {
        std::fs::write(path, &text).with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(0)
}
