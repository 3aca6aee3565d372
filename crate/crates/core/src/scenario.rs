//! Synthetic multi-stream landscapes with ground-truth activities.
//!
//! A landscape is a set of K streams over a shared tick clock. Activities are
//! rectangular time spans on one stream; each activity carries object tracks
//! (faces/bodies) that move along piecewise-linear paths with bounded jitter.
//! The generator is a pure function of `(config, seed)`.

use std::collections::BTreeMap;
use std::path::Path;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::Vec2;

pub const SCENARIO_VERSION: u32 = 1;

/// Object classes known to the observer.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ObjectKind {
    Face,
    Body,
}

/// Half-open tick interval `[start, end)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Span {
    pub start: u32,
    pub end: u32,
}

impl Span {
    pub fn new(start: u32, end: u32) -> Self {
        Span { start, end }
    }

    pub fn contains(&self, tick: u32) -> bool {
        tick >= self.start && tick < self.end
    }

    pub fn len(&self) -> u32 {
        self.end.saturating_sub(self.start)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// One tracked object inside an activity: a kind, a footprint radius and one
/// position per tick of the parent span.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ObjectTrack {
    pub kind: ObjectKind,
    /// Footprint radius in grid cells.
    pub extent: f64,
    pub positions: Vec<(f64, f64)>,
}

impl ObjectTrack {
    /// Position at an absolute tick, given the parent span.
    pub fn position_at(&self, span: Span, tick: u32) -> Option<Vec2> {
        if !span.contains(tick) {
            return None;
        }
        let i = (tick - span.start) as usize;
        self.positions.get(i).map(|&(x, y)| Vec2::new(x, y))
    }
}

/// A timed ground-truth activity on one stream.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Activity {
    /// Activity-class id.
    pub label: u32,
    pub span: Span,
    pub objects: Vec<ObjectTrack>,
}

impl Activity {
    pub fn active_at(&self, tick: u32) -> bool {
        self.span.contains(tick)
    }
}

/// All activities of one stream.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Stream {
    pub activities: Vec<Activity>,
}

/// K streams of timed ground-truth activities on a shared 2-D grid.
#[derive(Clone, Debug, PartialEq)]
pub struct Landscape {
    pub width: u32,
    pub height: u32,
    pub t_total: u32,
    pub streams: Vec<Stream>,
}

impl Landscape {
    pub fn stream_count(&self) -> usize {
        self.streams.len()
    }

    /// Number of distinct activity classes, `max(label) + 1`.
    pub fn class_count(&self) -> usize {
        self.streams
            .iter()
            .flat_map(|s| s.activities.iter())
            .map(|a| a.label as usize + 1)
            .max()
            .unwrap_or(0)
    }

    pub fn activities(&self) -> impl Iterator<Item = (usize, &Activity)> {
        self.streams
            .iter()
            .enumerate()
            .flat_map(|(k, s)| s.activities.iter().map(move |a| (k, a)))
    }

    /// True when class `label` is active on stream `k` at `tick`.
    pub fn class_active(&self, k: usize, label: u32, tick: u32) -> bool {
        self.streams[k]
            .activities
            .iter()
            .any(|a| a.label == label && a.active_at(tick))
    }

    /// True when any activity is active on stream `k` at `tick`.
    pub fn any_active(&self, k: usize, tick: u32) -> bool {
        self.streams[k].activities.iter().any(|a| a.active_at(tick))
    }

    /// Clip the landscape to its first `t_max` ticks (activity spans and
    /// object tracks truncated, empty activities dropped).
    pub fn truncated(&self, t_max: u32) -> Landscape {
        let t_max = t_max.min(self.t_total);
        let streams = self
            .streams
            .iter()
            .map(|s| Stream {
                activities: s
                    .activities
                    .iter()
                    .filter(|a| a.span.start < t_max)
                    .map(|a| {
                        let span = Span::new(a.span.start, a.span.end.min(t_max));
                        Activity {
                            label: a.label,
                            span,
                            objects: a
                                .objects
                                .iter()
                                .map(|o| ObjectTrack {
                                    kind: o.kind,
                                    extent: o.extent,
                                    positions: o.positions[..span.len() as usize].to_vec(),
                                })
                                .collect(),
                        }
                    })
                    .collect(),
            })
            .collect();
        Landscape { width: self.width, height: self.height, t_total: t_max, streams }
    }

    pub fn validate(&self) -> Result<()> {
        if self.streams.is_empty() {
            return Err(Error::Validation("K >= 1: landscape has no streams".into()));
        }
        if self.width < 8 || self.height < 8 {
            return Err(Error::Validation(format!(
                "width, height >= 8: got {}x{}",
                self.width, self.height
            )));
        }
        for (k, stream) in self.streams.iter().enumerate() {
            for a in &stream.activities {
                if a.span.start >= a.span.end {
                    return Err(Error::Validation(format!(
                        "t_start < t_end: activity label {} on stream {} has span [{}, {})",
                        a.label, k, a.span.start, a.span.end
                    )));
                }
                if a.span.end > self.t_total {
                    return Err(Error::Validation(format!(
                        "activity span inside [0, T_total): [{}, {}) exceeds {}",
                        a.span.start, a.span.end, self.t_total
                    )));
                }
                for o in &a.objects {
                    if o.extent <= 0.0 || !o.extent.is_finite() {
                        return Err(Error::Validation("object extent > 0".into()));
                    }
                    if o.positions.len() != a.span.len() as usize {
                        return Err(Error::Validation(format!(
                            "one object position per tick of the span: expected {}, got {}",
                            a.span.len(),
                            o.positions.len()
                        )));
                    }
                    for &(x, y) in &o.positions {
                        if !(0.0..self.width as f64).contains(&x)
                            || !(0.0..self.height as f64).contains(&y)
                        {
                            return Err(Error::Validation(format!(
                                "object position ({x}, {y}) outside the {}x{} grid",
                                self.width, self.height
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Generation
// ---------------------------------------------------------------------------

/// Controls for the synthetic landscape generator.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ScenarioConfig {
    /// Stream count K.
    pub streams: u32,
    pub width: u32,
    pub height: u32,
    pub t_total: u32,
    /// Unnormalized activity-class rates; index = class label.
    pub class_rates: Vec<f64>,
    /// Unnormalized per-stream placement rates; empty means uniform.
    pub stream_rates: Vec<f64>,
    /// Activities to place before optional coverage patching.
    pub n_activities: u32,
    /// Mean activity length in ticks; lengths are uniform in [mean/2, 3*mean/2].
    pub mean_activity_len: u32,
    pub min_activity_len: u32,
    /// Inclusive range for objects per activity.
    pub objects_per_activity: (u32, u32),
    /// Probability that an object is a face rather than a body.
    pub face_rate: f64,
    /// Inclusive range of object footprint radii in cells.
    pub extent_range: (f64, f64),
    /// Maximum object speed in cells/tick along track legs.
    pub max_speed: f64,
    /// Uniform per-tick position jitter amplitude in cells.
    pub jitter: f64,
    /// When true, patch uncovered gaps so that at least one stream is active
    /// at every tick (continuous-storyline landscapes).
    pub ensure_coverage: bool,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        ScenarioConfig {
            streams: 8,
            width: 64,
            height: 48,
            t_total: 8000,
            class_rates: vec![1.0; 11],
            stream_rates: Vec::new(),
            n_activities: 20,
            mean_activity_len: 500,
            min_activity_len: 30,
            objects_per_activity: (1, 3),
            face_rate: 0.4,
            extent_range: (1.5, 3.0),
            max_speed: 0.4,
            jitter: 0.15,
            ensure_coverage: false,
        }
    }
}

impl ScenarioConfig {
    pub fn validate(&self) -> Result<()> {
        if self.streams == 0 {
            return Err(Error::Config("stream count must be >= 1".into()));
        }
        if self.t_total == 0 {
            return Err(Error::Config("t_total must be nonzero".into()));
        }
        if self.width < 8 || self.height < 8 {
            return Err(Error::Config("grid must be at least 8x8 cells".into()));
        }
        if self.class_rates.is_empty() || !self.class_rates.iter().any(|&r| r > 0.0) {
            return Err(Error::Config(
                "at least one activity class must have a nonzero rate".into(),
            ));
        }
        if self.class_rates.iter().any(|&r| r < 0.0 || !r.is_finite()) {
            return Err(Error::Config("class rates must be finite and nonnegative".into()));
        }
        if !self.stream_rates.is_empty() {
            if self.stream_rates.len() != self.streams as usize {
                return Err(Error::Config(format!(
                    "stream_rates must have one entry per stream ({}), got {}",
                    self.streams,
                    self.stream_rates.len()
                )));
            }
            if !self.stream_rates.iter().any(|&r| r > 0.0)
                || self.stream_rates.iter().any(|&r| r < 0.0 || !r.is_finite())
            {
                return Err(Error::Config(
                    "stream rates must be finite, nonnegative and not all zero".into(),
                ));
            }
        }
        if self.min_activity_len == 0 || self.mean_activity_len < self.min_activity_len {
            return Err(Error::Config("activity lengths must satisfy 0 < min <= mean".into()));
        }
        if self.objects_per_activity.0 > self.objects_per_activity.1 {
            return Err(Error::Config("objects_per_activity range is inverted".into()));
        }
        if self.extent_range.0 <= 0.0 || self.extent_range.0 > self.extent_range.1 {
            return Err(Error::Config("extent range must be positive and ordered".into()));
        }
        Ok(())
    }

    /// Named presets shipped with the tool.
    pub fn preset(name: &str) -> Result<Self> {
        match name {
            // Mirrors the shape of the reference eight-camera recording:
            // K=8, 8000 ticks (1000 setup + 7000 test), ~500-tick activities,
            // 11 imbalanced classes, a few dominant streams, continuous
            // storyline.
            "ucr-like" => Ok(ScenarioConfig {
                streams: 8,
                t_total: 8000,
                class_rates: vec![
                    0.18, 0.15, 0.12, 0.11, 0.10, 0.08, 0.07, 0.06, 0.05, 0.04, 0.04,
                ],
                stream_rates: vec![0.28, 0.22, 0.14, 0.10, 0.09, 0.08, 0.05, 0.04],
                n_activities: 11,
                mean_activity_len: 880,
                ensure_coverage: true,
                ..ScenarioConfig::default()
            }),
            "sparse" => Ok(ScenarioConfig {
                streams: 8,
                t_total: 8000,
                class_rates: vec![0.4, 0.3, 0.2, 0.1],
                n_activities: 8,
                mean_activity_len: 400,
                ensure_coverage: false,
                ..ScenarioConfig::default()
            }),
            "crowded" => Ok(ScenarioConfig {
                streams: 8,
                t_total: 8000,
                class_rates: vec![
                    0.20, 0.16, 0.13, 0.11, 0.09, 0.08, 0.07, 0.06, 0.05, 0.03, 0.02,
                ],
                n_activities: 64,
                mean_activity_len: 450,
                objects_per_activity: (2, 5),
                ensure_coverage: true,
                ..ScenarioConfig::default()
            }),
            other => Err(Error::Config(format!(
                "unknown scenario preset '{other}' (expected ucr-like, sparse or crowded)"
            ))),
        }
    }
}

fn sample_categorical(rates: &[f64], rng: &mut ChaCha8Rng) -> usize {
    let total: f64 = rates.iter().sum();
    let mut u = rng.random::<f64>() * total;
    for (i, &r) in rates.iter().enumerate() {
        u -= r;
        if u < 0.0 {
            return i;
        }
    }
    rates.len() - 1
}

fn sample_stream(cfg: &ScenarioConfig, rng: &mut ChaCha8Rng) -> usize {
    if cfg.stream_rates.is_empty() {
        rng.random_range(0..cfg.streams) as usize
    } else {
        sample_categorical(&cfg.stream_rates, rng)
    }
}

fn gen_track(cfg: &ScenarioConfig, len: u32, rng: &mut ChaCha8Rng) -> ObjectTrack {
    let kind = if rng.random::<f64>() < cfg.face_rate { ObjectKind::Face } else { ObjectKind::Body };
    let extent = rng.random_range(cfg.extent_range.0..=cfg.extent_range.1);
    let margin = extent.ceil().max(1.0);
    let w = cfg.width as f64;
    let h = cfg.height as f64;
    let uniform_pos = |rng: &mut ChaCha8Rng| {
        Vec2::new(rng.random_range(margin..w - margin), rng.random_range(margin..h - margin))
    };

    // Piecewise-linear waypoints, then per-tick interpolation plus jitter.
    let n_legs = rng.random_range(1..=3usize);
    let mut waypoints = vec![uniform_pos(rng)];
    for _ in 0..n_legs {
        let prev = *waypoints.last().unwrap();
        let leg_ticks = (len as f64 / n_legs as f64).max(1.0);
        let reach = cfg.max_speed * leg_ticks;
        let target = uniform_pos(rng);
        let d = target.sub(prev);
        let dist = d.norm();
        let next = if dist > reach { prev.add(d.scale(reach / dist)) } else { target };
        waypoints.push(next);
    }

    let mut positions = Vec::with_capacity(len as usize);
    let per_leg = len as f64 / n_legs as f64;
    for i in 0..len {
        let s = i as f64 / per_leg;
        let leg = (s.floor() as usize).min(n_legs - 1);
        let frac = (s - leg as f64).min(1.0);
        let a = waypoints[leg];
        let b = waypoints[leg + 1];
        let mut p = a.add(b.sub(a).scale(frac));
        if cfg.jitter > 0.0 {
            p.x += rng.random_range(-cfg.jitter..=cfg.jitter);
            p.y += rng.random_range(-cfg.jitter..=cfg.jitter);
        }
        p.x = p.x.clamp(0.0, w - 1e-6);
        p.y = p.y.clamp(0.0, h - 1e-6);
        positions.push((p.x, p.y));
    }
    ObjectTrack { kind, extent, positions }
}

fn gen_activity(cfg: &ScenarioConfig, span: Span, rng: &mut ChaCha8Rng) -> Activity {
    let label = sample_categorical(&cfg.class_rates, rng) as u32;
    let n_objects = rng.random_range(cfg.objects_per_activity.0..=cfg.objects_per_activity.1).max(1);
    let objects = (0..n_objects).map(|_| gen_track(cfg, span.len(), rng)).collect();
    Activity { label, span, objects }
}

fn random_span(cfg: &ScenarioConfig, rng: &mut ChaCha8Rng) -> Span {
    let lo = cfg.mean_activity_len / 2;
    let hi = cfg.mean_activity_len + cfg.mean_activity_len / 2;
    let len = rng.random_range(lo..=hi).max(cfg.min_activity_len).min(cfg.t_total);
    let start = if cfg.t_total > len { rng.random_range(0..=cfg.t_total - len) } else { 0 };
    Span::new(start, start + len)
}

/// Generate a landscape. Deterministic in `(config, seed)`.
pub fn generate_scenario(config: &ScenarioConfig, seed: u64) -> Result<Landscape> {
    config.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut streams = vec![Stream::default(); config.streams as usize];

    for _ in 0..config.n_activities {
        let k = sample_stream(config, &mut rng);
        let span = random_span(config, &mut rng);
        streams[k].activities.push(gen_activity(config, span, &mut rng));
    }

    if config.ensure_coverage {
        patch_coverage(config, &mut streams, &mut rng);
    }

    for s in &mut streams {
        s.activities.sort_by_key(|a| (a.span.start, a.span.end, a.label));
    }

    let landscape = Landscape {
        width: config.width,
        height: config.height,
        t_total: config.t_total,
        streams,
    };
    landscape.validate()?;
    Ok(landscape)
}

/// Insert activities over every maximal uncovered gap so the landscape has at
/// least one active stream per tick.
fn patch_coverage(cfg: &ScenarioConfig, streams: &mut [Stream], rng: &mut ChaCha8Rng) {
    let mut covered = vec![false; cfg.t_total as usize];
    for s in streams.iter() {
        for a in &s.activities {
            for t in a.span.start..a.span.end {
                covered[t as usize] = true;
            }
        }
    }
    let mut t = 0u32;
    while t < cfg.t_total {
        if covered[t as usize] {
            t += 1;
            continue;
        }
        let gap_start = t;
        while t < cfg.t_total && !covered[t as usize] {
            t += 1;
        }
        // Fill the gap with spans of roughly mean activity length.
        let mut s = gap_start;
        while s < t {
            let len = (cfg.mean_activity_len.max(cfg.min_activity_len)).min(t - s).max(
                cfg.min_activity_len.min(t - s).max(1),
            );
            let span = Span::new(s, s + len);
            let k = sample_stream(cfg, rng);
            streams[k].activities.push(gen_activity(cfg, span, rng));
            s += len;
        }
    }
}

// ---------------------------------------------------------------------------
// Wire format
// ---------------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScenarioFile {
    version: u32,
    #[serde(rename = "K")]
    k: u32,
    width: u32,
    height: u32,
    #[serde(rename = "T_total")]
    t_total: u32,
    activities: Vec<ActivityRecord>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ActivityRecord {
    label: u32,
    stream: u32,
    t_start: u32,
    t_end: u32,
    objects: Vec<ObjectRecord>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ObjectRecord {
    kind: ObjectKind,
    extent: f64,
    positions: Vec<(f64, f64)>,
}

fn to_file(landscape: &Landscape) -> ScenarioFile {
    let mut activities = Vec::new();
    for (k, a) in landscape.activities() {
        activities.push(ActivityRecord {
            label: a.label,
            stream: k as u32,
            t_start: a.span.start,
            t_end: a.span.end,
            objects: a
                .objects
                .iter()
                .map(|o| ObjectRecord {
                    kind: o.kind,
                    extent: o.extent,
                    positions: o.positions.clone(),
                })
                .collect(),
        });
    }
    ScenarioFile {
        version: SCENARIO_VERSION,
        k: landscape.stream_count() as u32,
        width: landscape.width,
        height: landscape.height,
        t_total: landscape.t_total,
        activities,
    }
}

fn from_file(file: ScenarioFile) -> Result<Landscape> {
    if file.version != SCENARIO_VERSION {
        return Err(Error::Validation(format!(
            "unsupported scenario version {} (expected {SCENARIO_VERSION})",
            file.version
        )));
    }
    if file.k == 0 {
        return Err(Error::Validation("K >= 1: scenario declares zero streams".into()));
    }
    let mut streams = vec![Stream::default(); file.k as usize];
    for rec in file.activities {
        if rec.stream >= file.k {
            return Err(Error::Validation(format!(
                "activity stream index {} out of range for K={}",
                rec.stream, file.k
            )));
        }
        streams[rec.stream as usize].activities.push(Activity {
            label: rec.label,
            span: Span::new(rec.t_start, rec.t_end),
            objects: rec
                .objects
                .into_iter()
                .map(|o| ObjectTrack { kind: o.kind, extent: o.extent, positions: o.positions })
                .collect(),
        });
    }
    let landscape = Landscape {
        width: file.width,
        height: file.height,
        t_total: file.t_total,
        streams,
    };
    landscape.validate()?;
    Ok(landscape)
}

pub fn scenario_to_json(landscape: &Landscape) -> String {
    serde_json::to_string_pretty(&to_file(landscape)).expect("scenario serialization")
}

pub fn scenario_from_json(json: &str, origin: &str) -> Result<Landscape> {
    let file: ScenarioFile = serde_json::from_str(json).map_err(|e| Error::Format {
        path: origin.to_string(),
        detail: e.to_string(),
    })?;
    from_file(file)
}

pub fn save_scenario(landscape: &Landscape, path: &Path) -> Result<()> {
    std::fs::write(path, scenario_to_json(landscape)).map_err(|e| Error::io(path, e))
}

pub fn load_scenario(path: &Path) -> Result<Landscape> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    scenario_from_json(&text, &path.display().to_string())
}

// ---------------------------------------------------------------------------
// Joint activity distribution
// ---------------------------------------------------------------------------

/// Empirical joint distribution P(k, e) over (stream, activity-class) frames,
/// with its marginals.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct JointDistribution {
    /// P(k, e), indexed `[stream][class]`.
    pub p: Vec<Vec<f64>>,
    /// P(k) = sum_e P(k, e).
    pub p_stream: Vec<f64>,
    /// P(e) = sum_k P(k, e).
    pub p_activity: Vec<f64>,
}

impl JointDistribution {
    /// Normalize a count matrix N(k, e) into a joint distribution.
    pub fn from_count_matrix(counts: &[Vec<u64>]) -> Result<Self> {
        let total: u64 = counts.iter().flatten().sum();
        if total == 0 {
            return Err(Error::UndefinedDistribution);
        }
        let inv = 1.0 / total as f64;
        let p: Vec<Vec<f64>> =
            counts.iter().map(|row| row.iter().map(|&c| c as f64 * inv).collect()).collect();
        let n_classes = p.first().map_or(0, |r| r.len());
        let p_stream: Vec<f64> = p.iter().map(|row| row.iter().sum()).collect();
        let p_activity: Vec<f64> =
            (0..n_classes).map(|e| p.iter().map(|row| row[e]).sum()).collect();
        Ok(JointDistribution { p, p_stream, p_activity })
    }

    fn from_counts(counts: Vec<Vec<u64>>) -> Result<Self> {
        Self::from_count_matrix(&counts)
    }
}

/// Count N(k, e): ticks in `[from, to)` during which stream k shows at least
/// one activity of class e.
pub(crate) fn joint_counts(landscape: &Landscape, from: u32, to: u32) -> Vec<Vec<u64>> {
    let n_classes = landscape.class_count();
    let k = landscape.stream_count();
    let mut counts = vec![vec![0u64; n_classes]; k];
    for (ki, stream) in landscape.streams.iter().enumerate() {
        // Presence per (class, tick): overlapping same-class activities count once.
        let mut spans: BTreeMap<u32, Vec<Span>> = BTreeMap::new();
        for a in &stream.activities {
            spans.entry(a.label).or_default().push(a.span);
        }
        for (label, list) in spans {
            let mut active = vec![false; (to - from) as usize];
            for s in list {
                let lo = s.start.max(from);
                let hi = s.end.min(to);
                for t in lo..hi {
                    active[(t - from) as usize] = true;
                }
            }
            counts[ki][label as usize] = active.iter().filter(|&&b| b).count() as u64;
        }
    }
    counts
}

/// Joint distribution over the whole landscape.
pub fn activity_joint(landscape: &Landscape) -> Result<JointDistribution> {
    landscape.validate()?;
    JointDistribution::from_counts(joint_counts(landscape, 0, landscape.t_total))
}

/// Joint distribution restricted to a tick window.
pub fn activity_joint_window(landscape: &Landscape, from: u32, to: u32) -> Result<JointDistribution> {
    JointDistribution::from_counts(joint_counts(landscape, from, to))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_cfg() -> ScenarioConfig {
        ScenarioConfig {
            streams: 3,
            width: 32,
            height: 24,
            t_total: 400,
            class_rates: vec![0.5, 0.5],
            n_activities: 6,
            mean_activity_len: 80,
            min_activity_len: 10,
            ..ScenarioConfig::default()
        }
    }

    #[test]
    fn degenerate_rate_vector_forces_single_label() {
        let cfg = ScenarioConfig {
            class_rates: vec![0.0, 0.0, 1.0, 0.0],
            ..small_cfg()
        };
        let l = generate_scenario(&cfg, 99).unwrap();
        assert!(l.activities().count() > 0);
        for (_, a) in l.activities() {
            assert_eq!(a.label, 2);
        }
    }

    #[test]
    fn generation_is_deterministic_in_seed() {
        let cfg = ScenarioConfig { streams: 8, t_total: 8000, ..ScenarioConfig::default() };
        let a = generate_scenario(&cfg, 7).unwrap();
        let b = generate_scenario(&cfg, 7).unwrap();
        assert_eq!(scenario_to_json(&a).into_bytes(), scenario_to_json(&b).into_bytes());
        let c = generate_scenario(&cfg, 8).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn class_frequencies_follow_imbalanced_rates() {
        // Oracle: direct frequency count over the generated activity list.
        let rates = vec![0.4, 0.3, 0.1, 0.1, 0.05, 0.05];
        let cfg = ScenarioConfig {
            streams: 8,
            t_total: 20000,
            class_rates: rates.clone(),
            n_activities: 500,
            mean_activity_len: 100,
            min_activity_len: 10,
            ensure_coverage: false,
            ..ScenarioConfig::default()
        };
        let l = generate_scenario(&cfg, 42).unwrap();
        let mut counts = vec![0usize; rates.len()];
        let mut total = 0usize;
        for (_, a) in l.activities() {
            counts[a.label as usize] += 1;
            total += 1;
        }
        assert_eq!(total, 500);
        for (i, &r) in rates.iter().enumerate() {
            let freq = counts[i] as f64 / total as f64;
            assert!(
                (freq - r).abs() <= 0.05,
                "class {i}: frequency {freq} vs rate {r}"
            );
        }
    }

    #[test]
    fn save_load_round_trip_is_identity() {
        let cfg = small_cfg();
        let l = generate_scenario(&cfg, 5).unwrap();
        let json = scenario_to_json(&l);
        let back = scenario_from_json(&json, "mem").unwrap();
        assert_eq!(l, back);
    }

    #[test]
    fn inverted_span_is_a_validation_error() {
        let json = r#"{"version":1,"K":1,"width":16,"height":16,"T_total":100,
            "activities":[{"label":0,"stream":0,"t_start":50,"t_end":50,"objects":[]}]}"#;
        match scenario_from_json(json, "mem") {
            Err(Error::Validation(msg)) => assert!(msg.contains("t_start < t_end")),
            other => panic!("expected validation error, got {other:?}"),
        }
    }

    #[test]
    fn empty_activity_list_is_valid() {
        let json = r#"{"version":1,"K":2,"width":16,"height":16,"T_total":100,"activities":[]}"#;
        let l = scenario_from_json(json, "mem").unwrap();
        assert_eq!(l.stream_count(), 2);
        assert_eq!(l.activities().count(), 0);
    }

    #[test]
    fn unknown_fields_are_rejected() {
        let json = r#"{"version":1,"K":1,"width":16,"height":16,"T_total":100,
            "activities":[],"extra":true}"#;
        assert!(matches!(scenario_from_json(json, "mem"), Err(Error::Format { .. })));
    }

    #[test]
    fn missing_version_is_rejected() {
        let json = r#"{"K":1,"width":16,"height":16,"T_total":100,"activities":[]}"#;
        assert!(matches!(scenario_from_json(json, "mem"), Err(Error::Format { .. })));
    }

    #[test]
    fn joint_single_activity_is_a_point_mass() {
        let mut streams = vec![Stream::default(); 3];
        streams[0].activities.push(Activity {
            label: 1,
            span: Span::new(10, 60),
            objects: vec![],
        });
        let l = Landscape { width: 16, height: 16, t_total: 100, streams };
        let j = activity_joint(&l).unwrap();
        assert_eq!(j.p[0][1], 1.0);
        assert_eq!(j.p_stream, vec![1.0, 0.0, 0.0]);
        assert_eq!(j.p_activity, vec![0.0, 1.0]);
    }

    #[test]
    fn joint_equal_frame_counts_give_equal_stream_marginals() {
        let mut streams = vec![Stream::default(); 4];
        streams[0].activities.push(Activity { label: 0, span: Span::new(0, 50), objects: vec![] });
        streams[1].activities.push(Activity { label: 1, span: Span::new(20, 70), objects: vec![] });
        let l = Landscape { width: 16, height: 16, t_total: 100, streams };
        let j = activity_joint(&l).unwrap();
        assert_eq!(j.p_stream, vec![0.5, 0.5, 0.0, 0.0]);
    }

    #[test]
    fn joint_matches_brute_force_frame_count() {
        // Oracle: frame-by-frame counting loop, fully independent of
        // joint_counts' span bookkeeping.
        let cfg = ScenarioConfig { ensure_coverage: true, ..small_cfg() };
        let l = generate_scenario(&cfg, 11).unwrap();
        let j = activity_joint(&l).unwrap();
        let n_classes = l.class_count();
        let mut counts = vec![vec![0u64; n_classes]; l.stream_count()];
        for t in 0..l.t_total {
            for (k, _) in l.streams.iter().enumerate() {
                for e in 0..n_classes {
                    if l.class_active(k, e as u32, t) {
                        counts[k][e] += 1;
                    }
                }
            }
        }
        let total: u64 = counts.iter().flatten().sum();
        for k in 0..l.stream_count() {
            for e in 0..n_classes {
                let expected = counts[k][e] as f64 / total as f64;
                assert!((j.p[k][e] - expected).abs() < 1e-15);
            }
        }
        let sum: f64 = j.p.iter().flatten().sum();
        assert!((sum - 1.0).abs() < 1e-12);
    }

    #[test]
    fn joint_undefined_without_activity_frames() {
        let l = Landscape {
            width: 16,
            height: 16,
            t_total: 100,
            streams: vec![Stream::default(); 2],
        };
        assert!(matches!(activity_joint(&l), Err(Error::UndefinedDistribution)));
    }

    #[test]
    fn coverage_patch_leaves_no_gaps() {
        let cfg = ScenarioConfig { ensure_coverage: true, n_activities: 2, ..small_cfg() };
        let l = generate_scenario(&cfg, 3).unwrap();
        for t in 0..l.t_total {
            assert!(
                (0..l.stream_count()).any(|k| l.any_active(k, t)),
                "tick {t} uncovered"
            );
        }
    }

    #[test]
    fn presets_resolve_and_validate() {
        for name in ["ucr-like", "sparse", "crowded"] {
            let cfg = ScenarioConfig::preset(name).unwrap();
            cfg.validate().unwrap();
        }
        assert!(ScenarioConfig::preset("bogus").is_err());
        let ucr = ScenarioConfig::preset("ucr-like").unwrap();
        assert_eq!(ucr.streams, 8);
        assert_eq!(ucr.t_total, 8000);
    }
}
