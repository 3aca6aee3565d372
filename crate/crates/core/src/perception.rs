//! Priority maps, proto-objects and interest points.
//!
//! Perception runs on synthetic feature fields derived from scenario ground
//! truth: object occupancy smoothed by an isotropic Gaussian (sigma = object
//! extent) over a constant base level, with optional white noise, stands in
//! for feed-forward saliency; per-class occupancy with miss/false-alarm
//! corruption stands in for object detectors. The pre-attentive posterior
//! uses feed-forward evidence only; the attentive posterior multiplies in the
//! task-weighted object likelihood and a foveal attenuation factor.

use rand::Rng;
use rand_distr::{Distribution, Poisson, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{Grid2, Vec2};
use crate::scenario::{Landscape, ObjectKind};

/// Task prior over object classes, P(O|T).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TaskPrior {
    pub face: f64,
    pub body: f64,
}

impl Default for TaskPrior {
    fn default() -> Self {
        TaskPrior { face: 0.5, body: 0.5 }
    }
}

impl TaskPrior {
    pub fn weight(&self, kind: ObjectKind) -> f64 {
        match kind {
            ObjectKind::Face => self.face,
            ObjectKind::Body => self.body,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.face < 0.0 || self.body < 0.0 || (self.face + self.body - 1.0).abs() > 1e-9 {
            return Err(Error::Config("task prior must be nonnegative and sum to 1".into()));
        }
        Ok(())
    }
}

/// Tunables for the synthetic perception provider.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PerceptionConfig {
    /// Constant base level of the feed-forward field.
    pub noise_floor: f64,
    /// Amplitude of per-cell uniform white noise added to the base level.
    pub noise_amplitude: f64,
    /// Constant added to the task-weighted object-likelihood mixture so the
    /// attentive posterior degrades to the feed-forward map when no object
    /// evidence is present.
    pub likelihood_floor: f64,
    /// Probability that an active object leaves no trace in its class map.
    pub miss_rate: f64,
    /// Expected spurious object responses per frame (Poisson).
    pub false_alarm_rate: f64,
    /// Footprint radius of spurious responses, in cells.
    pub false_alarm_extent: f64,
}

impl Default for PerceptionConfig {
    fn default() -> Self {
        // Zero base level: empty frames degenerate to the uniform fallback
        // and score zero complexity, and the adaptive proto threshold stays
        // scale-free under foveal attenuation at any eccentricity.
        PerceptionConfig {
            noise_floor: 0.0,
            noise_amplitude: 0.0,
            likelihood_floor: 0.01,
            miss_rate: 0.05,
            false_alarm_rate: 0.02,
            false_alarm_extent: 2.0,
        }
    }
}

impl PerceptionConfig {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("noise_floor", self.noise_floor),
            ("noise_amplitude", self.noise_amplitude),
            ("likelihood_floor", self.likelihood_floor),
            ("false_alarm_rate", self.false_alarm_rate),
        ] {
            if v < 0.0 || !v.is_finite() {
                return Err(Error::Config(format!("{name} must be finite and >= 0")));
            }
        }
        if !(0.0..=1.0).contains(&self.miss_rate) {
            return Err(Error::Config("miss_rate must lie in [0, 1]".into()));
        }
        if self.false_alarm_extent <= 0.0 {
            return Err(Error::Config("false_alarm_extent must be > 0".into()));
        }
        Ok(())
    }
}

/// Feed-forward evidence plus per-class object likelihood fields.
#[derive(Clone, Debug, PartialEq)]
pub struct FeatureField {
    pub bottom_up: Grid2,
    /// Indexed by [`ObjectKind`]: face = 0, body = 1.
    pub object_likelihood: [Grid2; 2],
}

fn kind_index(kind: ObjectKind) -> usize {
    match kind {
        ObjectKind::Face => 0,
        ObjectKind::Body => 1,
    }
}

impl FeatureField {
    pub fn new(width: usize, height: usize) -> Self {
        FeatureField {
            bottom_up: Grid2::new(width, height),
            object_likelihood: [Grid2::new(width, height), Grid2::new(width, height)],
        }
    }

    pub fn likelihood(&self, kind: ObjectKind) -> &Grid2 {
        &self.object_likelihood[kind_index(kind)]
    }
}

/// Add a unit-height isotropic Gaussian bump, truncated at 3 sigma.
fn add_bump(grid: &mut Grid2, center: Vec2, sigma: f64) {
    let r = (3.0 * sigma).ceil() as i64;
    let cx = center.x;
    let cy = center.y;
    let x0 = ((cx - r as f64).floor() as i64).max(0);
    let x1 = ((cx + r as f64).ceil() as i64).min(grid.width() as i64 - 1);
    let y0 = ((cy - r as f64).floor() as i64).max(0);
    let y1 = ((cy + r as f64).ceil() as i64).min(grid.height() as i64 - 1);
    let inv = 1.0 / (2.0 * sigma * sigma);
    for y in y0..=y1 {
        for x in x0..=x1 {
            let dx = (x as f64 + 0.5) - cx;
            let dy = (y as f64 + 0.5) - cy;
            let d2 = dx * dx + dy * dy;
            if d2 <= (3.0 * sigma) * (3.0 * sigma) {
                grid.add(x as usize, y as usize, (-d2 * inv).exp());
            }
        }
    }
}

/// Build the synthetic feature field for one stream frame.
pub fn synthesize_features<R: Rng + ?Sized>(
    landscape: &Landscape,
    stream: usize,
    tick: u32,
    cfg: &PerceptionConfig,
    rng: &mut R,
) -> FeatureField {
    let w = landscape.width as usize;
    let h = landscape.height as usize;
    let mut field = FeatureField::new(w, h);

    field.bottom_up.fill(cfg.noise_floor);
    if cfg.noise_amplitude > 0.0 {
        for v in field.bottom_up.data_mut() {
            *v += cfg.noise_amplitude * rng.random::<f64>();
        }
    }

    for a in &landscape.streams[stream].activities {
        if !a.active_at(tick) {
            continue;
        }
        for o in &a.objects {
            let Some(pos) = o.position_at(a.span, tick) else { continue };
            add_bump(&mut field.bottom_up, pos, o.extent);
            if rng.random::<f64>() >= cfg.miss_rate {
                add_bump(&mut field.object_likelihood[kind_index(o.kind)], pos, o.extent);
            }
        }
    }

    if cfg.false_alarm_rate > 0.0 {
        let n = Poisson::new(cfg.false_alarm_rate).map(|p| p.sample(rng) as u64).unwrap_or(0);
        for _ in 0..n {
            let pos = Vec2::new(
                rng.random_range(0.0..w as f64),
                rng.random_range(0.0..h as f64),
            );
            let kind = if rng.random::<f64>() < 0.5 { ObjectKind::Face } else { ObjectKind::Body };
            add_bump(&mut field.object_likelihood[kind_index(kind)], pos, cfg.false_alarm_extent);
        }
    }

    field
}

/// Which posterior the map represents.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PriorityMode {
    Preattentive,
    Attentive,
}

/// Focus-of-attention geometry for foveated sensing.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Foveation {
    pub center: Vec2,
    pub radius: f64,
}

impl Foveation {
    /// Attenuation at a point: 1 inside the FoA disk, Gaussian fall-off
    /// outside.
    pub fn attenuation(&self, p: Vec2) -> f64 {
        let d = self.center.dist(p);
        if d <= self.radius {
            1.0
        } else {
            (-(d * d) / (2.0 * self.radius * self.radius)).exp()
        }
    }
}

/// FoA radius for a frame: floor(min(width, height) / 8).
pub fn foa_radius(width: u32, height: u32) -> f64 {
    (width.min(height) / 8) as f64
}

/// Normalized posterior over frame locations being task-relevant.
#[derive(Clone, Debug, PartialEq)]
pub struct PriorityMap {
    pub grid: Grid2,
    pub tick: u32,
    pub stream: usize,
    pub mode: PriorityMode,
}

impl PriorityMap {
    /// Uniform map; the documented fallback when a posterior degenerates.
    pub fn uniform(width: usize, height: usize, mode: PriorityMode, stream: usize, tick: u32) -> Self {
        let n = (width * height) as f64;
        PriorityMap { grid: Grid2::filled(width, height, 1.0 / n), tick, stream, mode }
    }
}

/// Posterior over location relevance from a feature field.
///
/// Pre-attentive mode normalizes the feed-forward evidence alone. Attentive
/// mode multiplies in the task-weighted object-likelihood mixture (plus the
/// configured floor) and the foveal attenuation around the supplied FoA.
pub fn priority_posterior(
    features: &FeatureField,
    mode: PriorityMode,
    foveation: Option<&Foveation>,
    task_prior: &TaskPrior,
    likelihood_floor: f64,
    stream: usize,
    tick: u32,
) -> Result<PriorityMap> {
    let w = features.bottom_up.width();
    let h = features.bottom_up.height();
    let mut grid = features.bottom_up.clone();
    match mode {
        PriorityMode::Preattentive => {}
        PriorityMode::Attentive => {
            let fov = foveation
                .ok_or_else(|| Error::Parameter("attentive posterior requires a FoA".into()))?;
            let face = features.likelihood(ObjectKind::Face);
            let body = features.likelihood(ObjectKind::Body);
            for y in 0..h {
                for x in 0..w {
                    let mix = task_prior.face * face.get(x, y)
                        + task_prior.body * body.get(x, y)
                        + likelihood_floor;
                    let att = fov.attenuation(Vec2::new(x as f64 + 0.5, y as f64 + 0.5));
                    let v = grid.get(x, y) * mix * att;
                    grid.set(x, y, v);
                }
            }
        }
    }
    if !grid.normalize() {
        return Err(Error::DegenerateMap);
    }
    Ok(PriorityMap { grid, tick, stream, mode })
}

/// Candidate prey: an ellipse-parameterized connected region of the priority
/// map, optionally carrying its sampled interest-point cluster.
#[derive(Clone, Debug, PartialEq)]
pub struct ProtoObject {
    pub id: usize,
    /// Cells of the connected component.
    pub mask: Vec<(u32, u32)>,
    /// Priority-weighted centroid.
    pub mu: Vec2,
    /// Priority-weighted covariance, regularized with the unit-cell variance.
    pub sigma: [[f64; 2]; 2],
    /// Ellipse area pi * sqrt(det sigma).
    pub area: f64,
    /// Summed priority over the mask; ranking weight.
    pub weight: f64,
    pub ips: Vec<InterestPoint>,
}

/// A potential bite: one point sampled from a proto-object, valued at the
/// priority of its cell.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct InterestPoint {
    pub pos: Vec2,
    pub value: f64,
    /// Parent proto-object id.
    pub proto: usize,
}

// Variance of a uniform unit cell; keeps single-cell components positive
// definite.
const CELL_VAR: f64 = 1.0 / 12.0;

fn component_to_proto(cells: &[(u32, u32)], grid: &Grid2, id: usize) -> ProtoObject {
    let mut wsum = 0.0;
    let mut mx = 0.0;
    let mut my = 0.0;
    for &(x, y) in cells {
        let w = grid.get(x as usize, y as usize);
        wsum += w;
        mx += w * (x as f64 + 0.5);
        my += w * (y as f64 + 0.5);
    }
    let mu = Vec2::new(mx / wsum, my / wsum);
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    let mut syy = 0.0;
    for &(x, y) in cells {
        let w = grid.get(x as usize, y as usize);
        let dx = (x as f64 + 0.5) - mu.x;
        let dy = (y as f64 + 0.5) - mu.y;
        sxx += w * dx * dx;
        sxy += w * dx * dy;
        syy += w * dy * dy;
    }
    let sigma = [
        [sxx / wsum + CELL_VAR, sxy / wsum],
        [sxy / wsum, syy / wsum + CELL_VAR],
    ];
    let det = sigma[0][0] * sigma[1][1] - sigma[0][1] * sigma[1][0];
    ProtoObject {
        id,
        mask: cells.to_vec(),
        mu,
        sigma,
        area: std::f64::consts::PI * det.max(0.0).sqrt(),
        weight: wsum,
        ips: Vec::new(),
    }
}

/// Strict 95th-percentile exceedance threshold (nearest-rank).
fn threshold_95(values: &[f64]) -> f64 {
    let mut buf = values.to_vec();
    let idx = ((buf.len() as f64 * 0.95).ceil() as usize).clamp(1, buf.len()) - 1;
    let (_, t, _) = buf.select_nth_unstable_by(idx, f64::total_cmp);
    *t
}

fn extract_from_grid(grid: &Grid2, n_p_max: usize) -> Vec<ProtoObject> {
    let t_m = threshold_95(grid.data());
    let w = grid.width();
    let h = grid.height();
    let mut above = vec![false; w * h];
    let mut any = false;
    for (i, &v) in grid.data().iter().enumerate() {
        if v > t_m {
            above[i] = true;
            any = true;
        }
    }
    if !any {
        return Vec::new();
    }

    // 8-connected component labeling over exceedance cells.
    let mut visited = vec![false; w * h];
    let mut components: Vec<Vec<(u32, u32)>> = Vec::new();
    let mut stack = Vec::new();
    for start in 0..w * h {
        if !above[start] || visited[start] {
            continue;
        }
        let mut cells = Vec::new();
        visited[start] = true;
        stack.push(start);
        while let Some(i) = stack.pop() {
            let x = i % w;
            let y = i / w;
            cells.push((x as u32, y as u32));
            for dy in -1i64..=1 {
                for dx in -1i64..=1 {
                    if dx == 0 && dy == 0 {
                        continue;
                    }
                    let nx = x as i64 + dx;
                    let ny = y as i64 + dy;
                    if nx < 0 || ny < 0 || nx >= w as i64 || ny >= h as i64 {
                        continue;
                    }
                    let j = ny as usize * w + nx as usize;
                    if above[j] && !visited[j] {
                        visited[j] = true;
                        stack.push(j);
                    }
                }
            }
        }
        components.push(cells);
    }

    let mut protos: Vec<ProtoObject> = components
        .iter()
        .map(|cells| component_to_proto(cells, grid, 0))
        .collect();
    // Most important first: summed priority, first cell as a deterministic
    // tie-break.
    protos.sort_by(|a, b| {
        b.weight
            .partial_cmp(&a.weight)
            .unwrap_or(std::cmp::Ordering::Equal)
            .then_with(|| a.mask[0].cmp(&b.mask[0]))
    });
    protos.truncate(n_p_max);
    for (i, p) in protos.iter_mut().enumerate() {
        p.id = i;
    }
    protos
}

/// Label cells exceeding the adaptive threshold into proto-objects, ranked by
/// summed priority, at most `n_p_max` of them. Constant maps yield none.
pub fn extract_proto_objects(map: &PriorityMap, n_p_max: usize) -> Vec<ProtoObject> {
    extract_from_grid(&map.grid, n_p_max)
}

/// Draw interest-point clusters for each proto-object from its Gaussian.
///
/// The per-proto budget is `ceil(n_s * area_p / total_area)`; each point is
/// clamped to the frame and valued at the priority of its cell.
pub fn sample_interest_points<R: Rng + ?Sized>(
    map: &PriorityMap,
    protos: &[ProtoObject],
    n_s: usize,
    rng: &mut R,
) -> Result<Vec<ProtoObject>> {
    if protos.is_empty() {
        return Ok(Vec::new());
    }
    let total_area: f64 = protos.iter().map(|p| p.area).sum();
    if total_area <= 0.0 {
        return Err(Error::DegenerateProto);
    }
    let w = map.grid.width() as f64;
    let h = map.grid.height() as f64;
    let mut out = Vec::with_capacity(protos.len());
    for p in protos {
        let n_ip = ((n_s as f64 * p.area / total_area).ceil() as usize).max(1);
        // Cholesky factor of sigma; sigma is positive definite by
        // construction (unit-cell regularization).
        let a = p.sigma[0][0];
        let b = p.sigma[0][1];
        let c = p.sigma[1][1];
        let l11 = a.sqrt();
        let l21 = b / l11;
        let l22 = (c - l21 * l21).max(1e-12).sqrt();
        let mut proto = p.clone();
        proto.ips = (0..n_ip)
            .map(|_| {
                let z1: f64 = StandardNormal.sample(rng);
                let z2: f64 = StandardNormal.sample(rng);
                let pos = Vec2::new(
                    (p.mu.x + l11 * z1).clamp(0.0, w - 1e-9),
                    (p.mu.y + l21 * z1 + l22 * z2).clamp(0.0, h - 1e-9),
                );
                InterestPoint { pos, value: map.grid.at_pos(pos), proto: p.id }
            })
            .collect();
        out.push(proto);
    }
    Ok(out)
}

/// Flatten the interest points of a proto-object list.
pub fn all_interest_points(protos: &[ProtoObject]) -> Vec<InterestPoint> {
    protos.iter().flat_map(|p| p.ips.iter().copied()).collect()
}
