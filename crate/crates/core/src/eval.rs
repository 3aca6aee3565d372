//! Scoring timelines against ground truth and comparing strategies.
//!
//! Frame-recall metrics: TP_e counts attended test-window frames showing
//! class e; NP_e counts all (stream, frame) pairs showing class e in the same
//! window. Standard accuracy pools counts across classes; macro average
//! accuracy averages per-class recalls so minority activities weigh equally.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::engine::{run, ForagerConfig, Timeline};
use crate::error::{Error, Result};
use crate::scenario::{joint_counts, JointDistribution, Landscape};
use crate::strategy::StrategyConfig;

/// Per-class frame recall.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ActivityScore {
    pub label: u32,
    pub tp: u64,
    pub np: u64,
    pub accuracy: f64,
}

/// Evaluation of one timeline against its landscape.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub accuracy: f64,
    pub avg_accuracy: f64,
    pub per_activity: Vec<ActivityScore>,
    /// Classes with NP_e = 0, excluded from the macro average.
    pub excluded_classes: Vec<u32>,
    /// Joint distribution of the collated output; `None` when no activity
    /// frame was captured.
    pub joint_out: Option<JointDistribution>,
    pub switch_count: u64,
    /// KL(P(e) || P~(e)) between ground-truth and output activity marginals,
    /// additive smoothing 1e-9.
    pub kl_activity: f64,
}

impl EvalReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization")
    }
}

fn smoothed(counts: &[f64]) -> Vec<f64> {
    const EPS: f64 = 1e-9;
    let total: f64 = counts.iter().sum::<f64>() + EPS * counts.len() as f64;
    counts.iter().map(|&c| (c + EPS) / total).collect()
}

fn kl_divergence(p: &[f64], q: &[f64]) -> f64 {
    p.iter()
        .zip(q)
        .filter(|(&pi, _)| pi > 0.0)
        .map(|(&pi, &qi)| pi * (pi / qi).ln())
        .sum()
}

/// Score a timeline over its test window.
pub fn evaluate(timeline: &Timeline, landscape: &Landscape) -> Result<EvalReport> {
    landscape.validate()?;
    let from = timeline.test_start;
    let to = landscape.t_total;
    if from > to {
        return Err(Error::Validation(format!(
            "timeline test window starts at {from}, after the landscape end {to}"
        )));
    }
    let covered = timeline
        .entries
        .iter()
        .filter(|e| e.tick >= from && e.tick < to)
        .count() as u64;
    if covered < (to - from) as u64 {
        return Err(Error::Validation(format!(
            "timeline covers {covered} of {} test ticks",
            to - from
        )));
    }

    let n_classes = landscape.class_count();
    let k_total = landscape.stream_count();
    let gt = joint_counts(landscape, from, to);
    let np: Vec<u64> = (0..n_classes).map(|e| gt.iter().map(|row| row[e]).sum()).collect();
    let np_total: u64 = np.iter().sum();
    if np_total == 0 {
        return Err(Error::UndefinedDistribution);
    }

    // Attended frames only; travel ticks are spent between streams and
    // collate nothing.
    let mut tp = vec![0u64; n_classes];
    let mut out_counts = vec![vec![0u64; n_classes]; k_total];
    for e in &timeline.entries {
        if e.tick < from || e.tick >= to || e.regime.is_none() {
            continue;
        }
        for label in 0..n_classes {
            if landscape.class_active(e.stream, label as u32, e.tick) {
                tp[label] += 1;
                out_counts[e.stream][label] += 1;
            }
        }
    }

    let tp_total: u64 = tp.iter().sum();
    let accuracy = tp_total as f64 / np_total as f64;
    let mut per_activity = Vec::with_capacity(n_classes);
    let mut excluded_classes = Vec::new();
    let mut included_sum = 0.0;
    let mut included = 0usize;
    for e in 0..n_classes {
        let a_e = if np[e] > 0 { tp[e] as f64 / np[e] as f64 } else { 0.0 };
        if np[e] > 0 {
            included_sum += a_e;
            included += 1;
        } else {
            excluded_classes.push(e as u32);
        }
        per_activity.push(ActivityScore { label: e as u32, tp: tp[e], np: np[e], accuracy: a_e });
    }
    let avg_accuracy = if included > 0 { included_sum / included as f64 } else { 0.0 };

    let p_gt: Vec<f64> = np.iter().map(|&c| c as f64).collect();
    let out_marginal: Vec<f64> = (0..n_classes)
        .map(|e| out_counts.iter().map(|row| row[e] as f64).sum())
        .collect();
    let kl_activity = kl_divergence(&smoothed(&p_gt), &smoothed(&out_marginal));

    Ok(EvalReport {
        accuracy,
        avg_accuracy,
        per_activity,
        excluded_classes,
        joint_out: JointDistribution::from_count_matrix(&out_counts).ok(),
        switch_count: timeline.switch_count_in(from, to),
        kl_activity,
    })
}

/// One (config, seed) comparison cell.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunScore {
    pub seed: u64,
    pub accuracy: f64,
    pub avg_accuracy: f64,
    pub switches: u64,
    pub kl_activity: f64,
    /// Switch count reached the bound; the run is dropped from the ranking.
    pub violates_bound: bool,
}

/// Aggregate row for one strategy configuration.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StrategyRow {
    pub name: String,
    pub runs: Vec<RunScore>,
    pub mean_accuracy: f64,
    pub sd_accuracy: f64,
    pub mean_avg_accuracy: f64,
    pub sd_avg_accuracy: f64,
    pub mean_switches: f64,
    pub excluded_runs: usize,
    /// True when every run violated the bound.
    pub excluded: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Comparison {
    pub switch_bound: u64,
    pub rows: Vec<StrategyRow>,
}

fn mean_sd(values: &[f64]) -> (f64, f64) {
    if values.is_empty() {
        return (0.0, 0.0);
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

fn aggregate(name: &str, runs: Vec<RunScore>) -> StrategyRow {
    let kept: Vec<&RunScore> = runs.iter().filter(|r| !r.violates_bound).collect();
    let (mean_accuracy, sd_accuracy) =
        mean_sd(&kept.iter().map(|r| r.accuracy).collect::<Vec<_>>());
    let (mean_avg_accuracy, sd_avg_accuracy) =
        mean_sd(&kept.iter().map(|r| r.avg_accuracy).collect::<Vec<_>>());
    let (mean_switches, _) =
        mean_sd(&kept.iter().map(|r| r.switches as f64).collect::<Vec<_>>());
    StrategyRow {
        name: name.to_string(),
        excluded: kept.is_empty(),
        excluded_runs: runs.len() - kept.len(),
        mean_accuracy,
        sd_accuracy,
        mean_avg_accuracy,
        sd_avg_accuracy,
        mean_switches,
        runs,
    }
}

/// Run every (config, seed) cell, score it, and aggregate per config.
///
/// Cells run in parallel over `jobs` workers; aggregation is deterministic
/// (cells are ordered by config then seed).
pub fn compare_strategies(
    landscape: &Landscape,
    configs: &[(String, ForagerConfig)],
    seeds: &[u64],
    switch_bound: u64,
    jobs: usize,
) -> Result<Comparison> {
    if configs.is_empty() || seeds.is_empty() {
        return Err(Error::Config("compare needs at least one config and one seed".into()));
    }
    let cells: Vec<(usize, u64)> = configs
        .iter()
        .enumerate()
        .flat_map(|(i, _)| seeds.iter().map(move |&s| (i, s)))
        .collect();

    let score_cell = |&(i, seed): &(usize, u64)| -> Result<(usize, RunScore)> {
        let mut cfg = configs[i].1.clone();
        cfg.seed = seed;
        let timeline = run(landscape, &cfg)?;
        let report = evaluate(&timeline, landscape)?;
        Ok((
            i,
            RunScore {
                seed,
                accuracy: report.accuracy,
                avg_accuracy: report.avg_accuracy,
                switches: report.switch_count,
                kl_activity: report.kl_activity,
                violates_bound: report.switch_count >= switch_bound,
            },
        ))
    };

    let mut scored: Vec<(usize, RunScore)> = if jobs > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build()
            .map_err(|e| Error::Config(format!("worker pool: {e}")))?;
        pool.install(|| cells.par_iter().map(score_cell).collect::<Result<Vec<_>>>())?
    } else {
        cells.iter().map(score_cell).collect::<Result<Vec<_>>>()?
    };
    scored.sort_by_key(|(i, r)| (*i, r.seed));

    let rows = configs
        .iter()
        .enumerate()
        .map(|(i, (name, _))| {
            aggregate(
                name,
                scored.iter().filter(|(j, _)| *j == i).map(|(_, r)| r.clone()).collect(),
            )
        })
        .collect();
    Ok(Comparison { switch_bound, rows })
}

impl Comparison {
    /// CSV in the strategy-by-measure table layout, accuracies in percent.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("measure");
        for row in &self.rows {
            out.push(',');
            out.push_str(&row.name);
        }
        out.push('\n');
        let fields: [(&str, fn(&StrategyRow) -> String); 4] = [
            ("accuracy", |r| format!("{:.2}", r.mean_accuracy * 100.0)),
            ("avg_accuracy", |r| format!("{:.2}", r.mean_avg_accuracy * 100.0)),
            ("mean_switches", |r| format!("{:.2}", r.mean_switches)),
            ("excluded", |r| if r.excluded { "yes".into() } else { "no".into() }),
        ];
        for (name, fmt) in fields {
            out.push_str(name);
            for row in &self.rows {
                out.push(',');
                out.push_str(&fmt(row));
            }
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("comparison serialization")
    }

    pub fn row(&self, name: &str) -> Option<&StrategyRow> {
        self.rows.iter().find(|r| r.name == name)
    }
}

// ---------------------------------------------------------------------------
// Strategy parameter calibration
// ---------------------------------------------------------------------------

/// Complexity statistics measured on the setup window.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CalibrationStats {
    /// Selection-weighted complexity of the entered stream.
    pub c_in: f64,
    /// Mean complexity across all streams.
    pub c_all: f64,
    /// Mean complexity of the non-entered streams.
    pub c_others: f64,
}

/// Measure complexity statistics with a pre-attentive-only pass over the
/// setup window.
pub fn calibrate(landscape: &Landscape, config: &ForagerConfig) -> Result<CalibrationStats> {
    let to = config.setup_ticks.clamp(1, landscape.t_total).min(1000);
    let rows = crate::engine::preattentive_complexities(landscape, config, 0, to)?;
    let k = landscape.stream_count();
    let mut c_in_sum = 0.0;
    let mut c_in_n = 0usize;
    let mut c_all_sum = 0.0;
    let mut c_others_sum = 0.0;
    for row in &rows {
        let total: f64 = row.iter().sum();
        c_all_sum += total / k as f64;
        if total > 0.0 {
            // E[C of the categorically selected stream] = sum c^2 / sum c.
            let sel = row.iter().map(|c| c * c).sum::<f64>() / total;
            c_in_sum += sel;
            if k > 1 {
                c_others_sum += (total - sel) / (k - 1) as f64;
            }
            c_in_n += 1;
        }
    }
    let n = rows.len().max(1) as f64;
    let c_in = if c_in_n > 0 { c_in_sum / c_in_n as f64 } else { 0.0 };
    let c_others = if c_in_n > 0 { c_others_sum / c_in_n as f64 } else { 0.0 };
    Ok(CalibrationStats { c_in, c_all: c_all_sum / n, c_others })
}

/// Candidate strategy parameters for one target dwell.
fn candidate_for_dwell(
    kind: &str,
    dwell: f64,
    stats: &CalibrationStats,
    base: &ForagerConfig,
    landscape: &Landscape,
) -> Result<StrategyConfig> {
    Ok(match kind {
        "bayes" | "bayesian" => {
            // Delta0 so the posterior-mean rate crosses the leave condition
            // near the target dwell, accounting for reward feedback (hits
            // raise nu, detection times raise Delta).
            // Ratio of entered-stream to others-mean complexity; clamped
            // because mostly-idle windows drive the raw estimate to extremes
            // (a near-zero others-mean makes the log blow up and Delta0
            // collapse into a thrashing regime).
            let ln_ratio = if stats.c_in > 0.0 && stats.c_others > 0.0 {
                (stats.c_in / stats.c_others).ln().clamp(std::f64::consts::LN_2, 1.4)
            } else {
                std::f64::consts::LN_2
            };
            let hit_rate = 0.5 * base.detector_accuracy;
            let td = base.delta_d
                * std::f64::consts::PI
                * crate::perception::foa_radius(landscape.width, landscape.height).powi(2);
            let delta0 = ((1.0 + hit_rate * dwell) * dwell / ln_ratio - td * dwell).max(10.0);
            StrategyConfig::Bayesian { nu0: 1.0, delta0 }
        }
        "charnov" => {
            let (c_in, c_all) = if stats.c_in > 0.0 && stats.c_all > 0.0 {
                (stats.c_in, stats.c_all)
            } else {
                (1.0, 1.0)
            };
            let delta_slope = (c_in * c_in / (c_all * dwell * dwell)).max(1e-12);
            StrategyConfig::Charnov { delta_slope, t_b: 1.0 }
        }
        "det" | "deterministic" => StrategyConfig::Deterministic { delta_w: dwell.ceil() as u32 },
        "random" => StrategyConfig::Random { b_w: 2.0 * dwell },
        other => {
            return Err(Error::Config(format!(
                "unknown strategy '{other}' (expected bayes, charnov, det or random)"
            )))
        }
    })
}

const FIT_SEEDS: [u64; 2] = [9001, 9002];
const FIT_DWELL_GRID: [f64; 6] = [1.0, 1.6, 2.6, 4.2, 6.8, 11.0];
const FIT_HEADROOM: f64 = 0.9;

/// Fit per-strategy parameters on the setup split, maximizing setup-window
/// accuracy subject to the switch bound extrapolated to the test length.
pub fn fit_strategy_configs(
    landscape: &Landscape,
    base: &ForagerConfig,
    kinds: &[&str],
    switch_bound: u64,
) -> Result<Vec<(String, ForagerConfig)>> {
    let setup = base.setup_ticks.clamp(1, landscape.t_total);
    let fit_land = landscape.truncated(setup);
    let stats = calibrate(landscape, base)?;
    let test_len = (landscape.t_total - setup.min(landscape.t_total)).max(1) as f64;
    let min_dwell = (test_len / (FIT_HEADROOM * switch_bound as f64) - 2.0).max(1.0);
    let budget = FIT_HEADROOM * switch_bound as f64;

    let mut out = Vec::with_capacity(kinds.len());
    for &kind in kinds {
        let name = match kind {
            "bayesian" => "bayes",
            "deterministic" => "det",
            k => k,
        };
        // Validate the kind before running the grid.
        candidate_for_dwell(kind, min_dwell, &stats, base, landscape)?;

        let mut best: Option<(f64, f64, StrategyConfig)> = None; // (accuracy, switches, cfg)
        let mut fallback: Option<(f64, StrategyConfig)> = None; // fewest switches
        for mult in FIT_DWELL_GRID {
            let dwell = (min_dwell * mult).min(test_len);
            let strategy = candidate_for_dwell(kind, dwell, &stats, base, landscape)?;
            let mut acc_sum = 0.0;
            let mut sw_sum = 0.0;
            for &fit_seed in &FIT_SEEDS {
                let cfg = ForagerConfig {
                    strategy,
                    setup_ticks: 0,
                    seed: fit_seed,
                    ..base.clone()
                };
                let timeline = run(&fit_land, &cfg)?;
                match evaluate(&timeline, &fit_land) {
                    Ok(report) => {
                        acc_sum += report.accuracy;
                        sw_sum += report.switch_count as f64;
                    }
                    // A setup window without activity frames scores zero.
                    Err(Error::UndefinedDistribution) => {
                        sw_sum += timeline.leave_count() as f64;
                    }
                    Err(e) => return Err(e),
                }
            }
            let accuracy = acc_sum / FIT_SEEDS.len() as f64;
            let switches =
                sw_sum / FIT_SEEDS.len() as f64 * (test_len / fit_land.t_total.max(1) as f64);
            if switches < budget && best.as_ref().is_none_or(|(a, _, _)| accuracy > *a) {
                best = Some((accuracy, switches, strategy));
            }
            if fallback.as_ref().is_none_or(|(s, _)| switches < *s) {
                fallback = Some((switches, strategy));
            }
        }
        let strategy = match (best, fallback) {
            (Some((_, _, cfg)), _) => cfg,
            (None, Some((_, cfg))) => cfg,
            (None, None) => unreachable!("grid is nonempty"),
        };
        out.push((name.to_string(), ForagerConfig { strategy, ..base.clone() }));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::{Switch, TimelineEntry};
    use crate::gaze::Regime;
    use crate::grid::Vec2;
    use crate::scenario::{Activity, Span, Stream};

    fn entry(tick: u32, stream: usize, attended: bool) -> TimelineEntry {
        TimelineEntry {
            tick,
            stream,
            foa: Vec2::new(8.0, 6.0),
            regime: attended.then_some(Regime::Pursuit),
            hit: false,
            switch_flag: !attended,
            leave_reason: None,
        }
    }

    fn landscape_two_classes() -> Landscape {
        // Class 0 on stream 0 over [0, 150); class 1 on stream 1 over
        // [150, 200).
        let mut streams = vec![Stream::default(); 2];
        streams[0].activities.push(Activity { label: 0, span: Span::new(0, 150), objects: vec![] });
        streams[1]
            .activities
            .push(Activity { label: 1, span: Span::new(150, 200), objects: vec![] });
        Landscape { width: 16, height: 12, t_total: 200, streams }
    }

    fn timeline_attending(plan: &[(u32, u32, usize)], test_start: u32) -> Timeline {
        let mut entries = Vec::new();
        for &(from, to, k) in plan {
            for t in from..to {
                entries.push(entry(t, k, true));
            }
        }
        entries.sort_by_key(|e| e.tick);
        Timeline { entries, switches: vec![], test_start }
    }

    #[test]
    fn oracle_timeline_scores_perfectly() {
        let mut streams = vec![Stream::default(); 2];
        streams[0].activities.push(Activity { label: 0, span: Span::new(0, 100), objects: vec![] });
        let l = Landscape { width: 16, height: 12, t_total: 100, streams };
        let t = timeline_attending(&[(0, 100, 0)], 0);
        let r = evaluate(&t, &l).unwrap();
        assert_eq!(r.accuracy, 1.0);
        assert_eq!(r.avg_accuracy, 1.0);
    }

    #[test]
    fn worked_tp_np_example_matches_both_formulas() {
        // TP = [120, 10], NP = [150, 50]: A = 130/200, avgA = (0.8 + 0.2)/2.
        let l = landscape_two_classes();
        let t = timeline_attending(&[(0, 120, 0), (120, 160, 1), (160, 200, 0)], 0);
        let r = evaluate(&t, &l).unwrap();
        assert_eq!(r.per_activity[0].tp, 120);
        assert_eq!(r.per_activity[0].np, 150);
        assert_eq!(r.per_activity[1].tp, 10);
        assert_eq!(r.per_activity[1].np, 50);
        assert!((r.accuracy - 0.65).abs() < 1e-15);
        assert!((r.avg_accuracy - 0.5).abs() < 1e-15);
        // avgA equals the unweighted mean of included per-class accuracies.
        let mean = (r.per_activity[0].accuracy + r.per_activity[1].accuracy) / 2.0;
        assert!((r.avg_accuracy - mean).abs() < 1e-12);
    }

    #[test]
    fn attending_a_dead_stream_scores_zero() {
        let mut streams = vec![Stream::default(); 2];
        streams[1].activities.push(Activity { label: 0, span: Span::new(0, 90), objects: vec![] });
        streams[1].activities.push(Activity { label: 1, span: Span::new(0, 10), objects: vec![] });
        let l = Landscape { width: 16, height: 12, t_total: 100, streams };
        let t = timeline_attending(&[(0, 100, 0)], 0);
        let r = evaluate(&t, &l).unwrap();
        assert_eq!(r.accuracy, 0.0);
        assert_eq!(r.avg_accuracy, 0.0);
        assert!(r.joint_out.is_none());
        // Empty output smooths to the uniform marginal, which sits away from
        // the imbalanced ground truth.
        assert!(r.kl_activity > 0.2, "kl {}", r.kl_activity);
    }

    #[test]
    fn evaluation_is_pure() {
        let l = landscape_two_classes();
        let t = timeline_attending(&[(0, 120, 0), (120, 160, 1), (160, 200, 0)], 0);
        assert_eq!(evaluate(&t, &l).unwrap(), evaluate(&t, &l).unwrap());
    }

    #[test]
    fn accuracy_is_invariant_under_class_relabeling() {
        let l = landscape_two_classes();
        let mut relabeled = l.clone();
        for s in &mut relabeled.streams {
            for a in &mut s.activities {
                a.label = 1 - a.label;
            }
        }
        let t = timeline_attending(&[(0, 120, 0), (120, 160, 1), (160, 200, 0)], 0);
        let a = evaluate(&t, &l).unwrap();
        let b = evaluate(&t, &relabeled).unwrap();
        assert!((a.accuracy - b.accuracy).abs() < 1e-15);
        assert!((a.avg_accuracy - b.avg_accuracy).abs() < 1e-15);
    }

    #[test]
    fn balanced_classes_make_both_accuracies_agree() {
        let mut streams = vec![Stream::default(); 2];
        streams[0].activities.push(Activity { label: 0, span: Span::new(0, 100), objects: vec![] });
        streams[1].activities.push(Activity { label: 1, span: Span::new(0, 100), objects: vec![] });
        let l = Landscape { width: 16, height: 12, t_total: 100, streams };
        let t = timeline_attending(&[(0, 60, 0), (60, 100, 1)], 0);
        let r = evaluate(&t, &l).unwrap();
        assert!((r.accuracy - r.avg_accuracy).abs() < 1e-12);
    }

    #[test]
    fn missing_window_coverage_is_rejected() {
        let l = landscape_two_classes();
        let t = timeline_attending(&[(0, 50, 0)], 0);
        assert!(matches!(evaluate(&t, &l), Err(Error::Validation(_))));
    }

    #[test]
    fn classes_without_positives_are_excluded_with_warning() {
        let mut streams = vec![Stream::default(); 1];
        streams[0].activities.push(Activity { label: 2, span: Span::new(0, 50), objects: vec![] });
        let l = Landscape { width: 16, height: 12, t_total: 50, streams };
        let t = timeline_attending(&[(0, 50, 0)], 0);
        let r = evaluate(&t, &l).unwrap();
        assert_eq!(r.excluded_classes, vec![0, 1]);
        assert_eq!(r.avg_accuracy, 1.0);
    }

    #[test]
    fn travel_ticks_do_not_collate_frames() {
        let mut streams = vec![Stream::default(); 1];
        streams[0].activities.push(Activity { label: 0, span: Span::new(0, 10), objects: vec![] });
        let l = Landscape { width: 16, height: 12, t_total: 10, streams };
        let mut entries: Vec<TimelineEntry> = (0..10).map(|t| entry(t, 0, true)).collect();
        entries[0] = entry(0, 0, false); // travel tick
        let t = Timeline {
            entries,
            switches: vec![Switch { tick: 0, from: None, to: 0 }],
            test_start: 0,
        };
        let r = evaluate(&t, &l).unwrap();
        assert_eq!(r.per_activity[0].tp, 9);
    }

    #[test]
    fn switch_count_respects_the_window() {
        let l = landscape_two_classes();
        let mut t = timeline_attending(&[(0, 120, 0), (120, 160, 1), (160, 200, 0)], 100);
        t.switches = vec![
            Switch { tick: 10, from: None, to: 0 },
            Switch { tick: 120, from: Some(0), to: 1 },
            Switch { tick: 160, from: Some(1), to: 0 },
        ];
        let r = evaluate(&t, &l).unwrap();
        assert_eq!(r.switch_count, 2);
    }

    #[test]
    fn comparison_single_cell_equals_single_report() {
        let scenario_cfg = crate::scenario::ScenarioConfig {
            streams: 2,
            width: 16,
            height: 12,
            t_total: 200,
            class_rates: vec![1.0],
            n_activities: 4,
            mean_activity_len: 60,
            min_activity_len: 10,
            ..Default::default()
        };
        let l = crate::scenario::generate_scenario(&scenario_cfg, 3).unwrap();
        let cfg = ForagerConfig { setup_ticks: 0, ..ForagerConfig::default() };
        let comparison =
            compare_strategies(&l, &[("bayes".into(), cfg.clone())], &[7], 10_000, 1).unwrap();
        let row = comparison.row("bayes").unwrap();
        assert_eq!(row.runs.len(), 1);
        let mut direct_cfg = cfg;
        direct_cfg.seed = 7;
        let report = evaluate(&run(&l, &direct_cfg).unwrap(), &l).unwrap();
        assert_eq!(row.mean_accuracy, report.accuracy);
        assert_eq!(row.mean_avg_accuracy, report.avg_accuracy);
        assert_eq!(row.sd_accuracy, 0.0);
    }

    #[test]
    fn bound_violations_flag_and_exclude_rows() {
        let l = Landscape {
            width: 16,
            height: 12,
            t_total: 400,
            streams: {
                let mut s = vec![Stream::default(); 2];
                s[0].activities.push(Activity {
                    label: 0,
                    span: Span::new(0, 400),
                    objects: vec![],
                });
                s
            },
        };
        // Dwell 5 forces ~60+ switches over 400 ticks; bound 14 excludes it.
        let cfg = ForagerConfig {
            setup_ticks: 0,
            strategy: StrategyConfig::Deterministic { delta_w: 5 },
            ..ForagerConfig::default()
        };
        let comparison =
            compare_strategies(&l, &[("det".into(), cfg)], &[1, 2], 14, 1).unwrap();
        let row = comparison.row("det").unwrap();
        assert!(row.excluded);
        assert_eq!(row.excluded_runs, 2);
        assert!(row.runs.iter().all(|r| r.violates_bound));
    }

    #[test]
    fn comparison_csv_is_table_shaped() {
        let comparison = Comparison {
            switch_bound: 280,
            rows: vec![
                aggregate(
                    "bayes",
                    vec![RunScore {
                        seed: 1,
                        accuracy: 0.8253,
                        avg_accuracy: 0.7112,
                        switches: 12,
                        kl_activity: 0.1,
                        violates_bound: false,
                    }],
                ),
                aggregate(
                    "random",
                    vec![RunScore {
                        seed: 1,
                        accuracy: 0.6011,
                        avg_accuracy: 0.4577,
                        switches: 200,
                        kl_activity: 0.5,
                        violates_bound: false,
                    }],
                ),
            ],
        };
        let csv = comparison.to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "measure,bayes,random");
        assert_eq!(lines[1], "accuracy,82.53,60.11");
        assert_eq!(lines[2], "avg_accuracy,71.12,45.77");
    }

    #[test]
    fn fit_rejects_unknown_strategy_names() {
        let l = landscape_two_classes();
        let base = ForagerConfig { setup_ticks: 10, ..ForagerConfig::default() };
        assert!(fit_strategy_configs(&l, &base, &["nonsense"], 280).is_err());
        let fitted = fit_strategy_configs(&l, &base, &["bayes", "det", "random"], 280).unwrap();
        assert_eq!(fitted.len(), 3);
        for (_, cfg) in &fitted {
            cfg.validate().unwrap();
        }
    }
}
