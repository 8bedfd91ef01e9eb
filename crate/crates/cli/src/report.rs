//! The JSON report written by `run` and `verify`.

use mincut::oracle::OracleResult;
use mincut::{CutReport, EdgeSet, LambdaDetected, PipelineOutput, RoundStats};
use serde::{Deserialize, Serialize};

/// Everything a run produced. Field order is the serialized key order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub n: usize,
    pub m: usize,
    #[serde(rename = "D")]
    pub diameter: usize,
    pub config: ConfigEcho,
    pub lambda: LambdaDetected,
    pub stages_run: usize,
    pub cuts: Vec<CutReport>,
    pub stats: RoundStats,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub verdict: Option<Verdict>,
}

/// The effective configuration of a run.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfigEcho {
    /// `file:<path>` or `<family> n=<n> seed=<seed>`.
    pub source: String,
    /// `auto` or the requested vertex id.
    pub root: String,
    pub resolved_root: usize,
    pub max_size: usize,
    pub strict_bandwidth: bool,
    pub words_per_round: usize,
    pub budget_bits: usize,
    pub round_limit: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Status {
    Pass,
    Fail,
}

/// Comparison of the reported cuts against the brute-force oracle.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub status: Status,
    pub oracle_lambda: usize,
    /// Oracle min-cuts the pipeline did not report.
    pub missing: Vec<Vec<(usize, usize)>>,
    /// Reported cuts that are not oracle min-cuts.
    pub unexpected: Vec<Vec<(usize, usize)>>,
}

impl RunReport {
    pub fn new(g: &mincut::Graph, diameter: usize, config: ConfigEcho, out: &PipelineOutput) -> Self {
        let mut cuts = out.cuts.clone();
        canonicalize(&mut cuts);
        RunReport {
            n: g.n(),
            m: g.m(),
            diameter,
            config,
            lambda: out.lambda,
            stages_run: out.stages_run,
            cuts,
            stats: out.stats.clone(),
            verdict: None,
        }
    }

    pub fn cut_sets(&self) -> Vec<EdgeSet> {
        self.cuts.iter().map(|c| EdgeSet::from_pairs(c.cut_edges.iter().copied())).collect()
    }
}

/// Sorts each cut's edges and the cut list itself by edge set.
pub fn canonicalize(cuts: &mut [CutReport]) {
    for c in cuts.iter_mut() {
        c.cut_edges = EdgeSet::from_pairs(c.cut_edges.iter().copied()).pairs();
    }
    cuts.sort_by(|a, b| a.cut_edges.cmp(&b.cut_edges));
}

/// PASS iff the reported λ matches the oracle and, when λ is exact, the cut
/// sets are equal. An `>k` answer is correct when the oracle λ exceeds `k`.
pub fn judge(lambda: LambdaDetected, reported: &[EdgeSet], oracle: &OracleResult) -> Verdict {
    let expected: Vec<EdgeSet> = match lambda {
        LambdaDetected::Exact(_) => oracle.min_cuts.clone(),
        LambdaDetected::Above(k) if oracle.lambda > k => Vec::new(),
        LambdaDetected::Above(_) => oracle.min_cuts.clone(),
    };
    let missing: Vec<_> = expected.iter().filter(|c| !reported.contains(c)).map(EdgeSet::pairs).collect();
    let unexpected: Vec<_> = reported.iter().filter(|c| !expected.contains(c)).map(EdgeSet::pairs).collect();
    let lambda_ok = match lambda {
        LambdaDetected::Exact(k) => k == oracle.lambda,
        LambdaDetected::Above(k) => oracle.lambda > k,
    };
    let status = if lambda_ok && missing.is_empty() && unexpected.is_empty() { Status::Pass } else { Status::Fail };
    Verdict { status, oracle_lambda: oracle.lambda, missing, unexpected }
}

#[cfg(test)]
mod tests {
    use super::*;
    use mincut::{generate, run_full_pipeline, Family, GenParams, PipelineConfig};

    fn report(f: Family, n: usize) -> RunReport {
        let g = generate(f, &GenParams::new(n)).unwrap();
        let cfg = PipelineConfig::default();
        let out = run_full_pipeline(&g, &cfg).unwrap();
        let echo = ConfigEcho {
            source: format!("{f} n={n} seed=0"),
            root: "auto".into(),
            resolved_root: 0,
            max_size: 3,
            strict_bandwidth: true,
            words_per_round: 2,
            budget_bits: cfg.sim.budget(n),
            round_limit: cfg.sim.round_limit,
        };
        let mut r = RunReport::new(&g, mincut::measure_diameter(&g).unwrap(), echo, &out);
        let oracle = mincut::min_cut_oracle(&g).unwrap();
        r.verdict = Some(judge(r.lambda, &r.cut_sets(), &oracle));
        r
    }

    #[test]
    fn json_round_trip_is_lossless() {
        for (f, n) in [(Family::Cycle, 5), (Family::Prism, 6), (Family::Complete, 5)] {
            let r = report(f, n);
            let text = serde_json::to_string_pretty(&r).unwrap();
            let back: RunReport = serde_json::from_str(&text).unwrap();
            assert_eq!(back, r);
            assert_eq!(serde_json::to_string_pretty(&back).unwrap(), text);
        }
    }

    #[test]
    fn cuts_are_canonical() {
        let r = report(Family::Cycle, 6);
        assert_eq!(r.cuts.len(), 15);
        assert!(r.cuts.windows(2).all(|w| w[0].cut_edges < w[1].cut_edges));
        assert!(r.cuts.iter().all(|c| c.cut_edges.windows(2).all(|w| w[0] < w[1])));
    }

    #[test]
    fn judge_flags_missing_and_extra() {
        let r = report(Family::Prism, 6);
        assert_eq!(r.verdict.as_ref().unwrap().status, Status::Pass);
        let oracle = mincut::min_cut_oracle(&generate(Family::Prism, &GenParams::new(6)).unwrap()).unwrap();
        let mut sets = r.cut_sets();
        let dropped = sets.remove(0);
        sets.push(EdgeSet::from_pairs([(0, 1)]));
        let v = judge(r.lambda, &sets, &oracle);
        assert_eq!(v.status, Status::Fail);
        assert_eq!(v.missing, vec![dropped.pairs()]);
        assert_eq!(v.unexpected, vec![vec![(0, 1)]]);
    }

    #[test]
    fn above_verdicts() {
        let g = generate(Family::Complete, &GenParams::new(5)).unwrap();
        let oracle = mincut::min_cut_oracle(&g).unwrap();
        assert_eq!(judge(LambdaDetected::Above(3), &[], &oracle).status, Status::Pass);
        let c = mincut::min_cut_oracle(&generate(Family::Cycle, &GenParams::new(5)).unwrap()).unwrap();
        assert_eq!(judge(LambdaDetected::Above(1), &[], &c).status, Status::Pass);
        assert_eq!(judge(LambdaDetected::Above(2), &[], &c).status, Status::Fail);
    }
}
