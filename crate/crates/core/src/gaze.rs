//! Within-stream attentive dynamics: gaze-shift proposals driven by Levy
//! alpha-stable steps, expected-reward scoring over interest points, and
//! detection attempts at the focus of attention.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::complexity::ComplexityIndex;
use crate::error::{Error, Result};
use crate::grid::Vec2;
use crate::perception::InterestPoint;
use crate::scenario::{Landscape, ObjectKind};

/// Eye-movement regime for within-stream shifts.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Regime {
    Fixational,
    Pursuit,
    Saccade,
}

/// Regime from the complexity terciles of the theoretical range [0, 1/4].
pub fn regime_for_complexity(c: &ComplexityIndex) -> Regime {
    if c.c < 1.0 / 12.0 {
        Regime::Fixational
    } else if c.c < 1.0 / 6.0 {
        Regime::Pursuit
    } else {
        Regime::Saccade
    }
}

/// Levy alpha-stable parameters (stability, skewness, scale, location).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StableParams {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub delta_loc: f64,
}

impl StableParams {
    /// Scale zero is admitted as the degenerate point mass at `delta_loc`.
    pub fn new(alpha: f64, beta: f64, gamma: f64, delta_loc: f64) -> Result<Self> {
        let p = StableParams { alpha, beta, gamma, delta_loc };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > 0.0 && self.alpha <= 2.0) {
            return Err(Error::Parameter(format!(
                "stable alpha must lie in (0, 2], got {}",
                self.alpha
            )));
        }
        if !(-1.0..=1.0).contains(&self.beta) {
            return Err(Error::Parameter(format!(
                "stable beta must lie in [-1, 1], got {}",
                self.beta
            )));
        }
        if self.gamma < 0.0 || !self.gamma.is_finite() {
            return Err(Error::Parameter(format!(
                "stable gamma must be finite and >= 0, got {}",
                self.gamma
            )));
        }
        Ok(())
    }
}

/// Stable parameter sets per eye-movement regime.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RegimeParams {
    pub fixational: StableParams,
    pub pursuit: StableParams,
    pub saccade: StableParams,
}

impl Default for RegimeParams {
    fn default() -> Self {
        RegimeParams {
            fixational: StableParams { alpha: 2.0, beta: 0.0, gamma: 0.5, delta_loc: 0.0 },
            pursuit: StableParams { alpha: 1.6, beta: 0.0, gamma: 2.0, delta_loc: 0.0 },
            saccade: StableParams { alpha: 1.2, beta: 0.0, gamma: 6.0, delta_loc: 0.0 },
        }
    }
}

impl RegimeParams {
    pub fn for_regime(&self, regime: Regime) -> &StableParams {
        match regime {
            Regime::Fixational => &self.fixational,
            Regime::Pursuit => &self.pursuit,
            Regime::Saccade => &self.saccade,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.fixational.validate()?;
        self.pursuit.validate()?;
        self.saccade.validate()
    }
}

fn uniform_open<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    // Open (0, 1): keeps logs and tangents finite.
    loop {
        let u: f64 = rng.random();
        if u > 0.0 && u < 1.0 {
            return u;
        }
    }
}

/// One alpha-stable variate by the Chambers-Mallows-Stuck construction.
pub fn sample_alpha_stable<R: Rng + ?Sized>(p: &StableParams, rng: &mut R) -> Result<f64> {
    p.validate()?;
    let alpha = p.alpha;
    let beta = p.beta;
    // V uniform on (-pi/2, pi/2), W standard exponential.
    let v = std::f64::consts::PI * (uniform_open(rng) - 0.5);
    let w = -uniform_open(rng).ln();

    let z = if (alpha - 1.0).abs() > 1e-12 {
        let tan_term = (std::f64::consts::FRAC_PI_2 * alpha).tan();
        let b = (beta * tan_term).atan() / alpha;
        let s = (1.0 + beta * beta * tan_term * tan_term).powf(1.0 / (2.0 * alpha));
        let num = (alpha * (v + b)).sin();
        let den = v.cos().powf(1.0 / alpha);
        let tail = (((v - alpha * (v + b)).cos()) / w).max(f64::MIN_POSITIVE);
        s * (num / den) * tail.powf((1.0 - alpha) / alpha)
    } else {
        let half_pi = std::f64::consts::FRAC_PI_2;
        let a = half_pi + beta * v;
        let ratio = ((half_pi * w * v.cos()) / a).max(f64::MIN_POSITIVE);
        (a * v.tan() - beta * ratio.ln()) / half_pi
    };

    let shift = if (alpha - 1.0).abs() > 1e-12 || p.gamma == 0.0 {
        p.delta_loc
    } else {
        // S1 parameterization correction at alpha = 1.
        p.delta_loc + beta * 2.0 / std::f64::consts::PI * p.gamma * p.gamma.ln()
    };
    Ok(p.gamma * z + shift)
}

/// Gaze state of the forager on the attended stream.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GazeState {
    pub foa: Vec2,
    pub foa_radius: f64,
    pub stream: usize,
    pub regime: Regime,
    /// Frame bounds used to clamp candidate shifts.
    pub frame_w: f64,
    pub frame_h: f64,
}

impl GazeState {
    pub fn centered(stream: usize, width: u32, height: u32) -> Self {
        GazeState {
            foa: Vec2::new(width as f64 / 2.0, height as f64 / 2.0),
            foa_radius: crate::perception::foa_radius(width, height),
            stream,
            regime: Regime::Fixational,
            frame_w: width as f64,
            frame_h: height as f64,
        }
    }

    fn clamp(&self, p: Vec2) -> Vec2 {
        Vec2::new(
            p.x.clamp(0.0, self.frame_w - 1e-9),
            p.y.clamp(0.0, self.frame_h - 1e-9),
        )
    }
}

/// Priority-weighted centroid of interest points, if any.
fn ip_centroid(ips: &[InterestPoint]) -> Option<Vec2> {
    let wsum: f64 = ips.iter().map(|ip| ip.value).sum();
    if ips.is_empty() {
        return None;
    }
    if wsum > 0.0 {
        let x = ips.iter().map(|ip| ip.value * ip.pos.x).sum::<f64>() / wsum;
        let y = ips.iter().map(|ip| ip.value * ip.pos.y).sum::<f64>() / wsum;
        Some(Vec2::new(x, y))
    } else {
        let n = ips.len() as f64;
        let x = ips.iter().map(|ip| ip.pos.x).sum::<f64>() / n;
        let y = ips.iter().map(|ip| ip.pos.y).sum::<f64>() / n;
        Some(Vec2::new(x, y))
    }
}

/// Propose candidate gaze shifts from the current FoA.
///
/// The regime comes from the complexity terciles; each candidate adds a drift
/// toward the interest-point centroid (unit direction scaled by the regime's
/// gamma) and an alpha-stable step, then clamps to the frame.
pub fn propose_gaze_shifts<R: Rng + ?Sized>(
    state: &GazeState,
    ips: &[InterestPoint],
    complexity: &ComplexityIndex,
    params: &RegimeParams,
    n_new: usize,
    rng: &mut R,
) -> Result<(Regime, Vec<Vec2>)> {
    if n_new == 0 {
        return Err(Error::Parameter("n_new must be >= 1".into()));
    }
    let regime = regime_for_complexity(complexity);
    let p = params.for_regime(regime);
    let drift = match ip_centroid(ips) {
        Some(c) => c.sub(state.foa).unit().scale(p.gamma),
        None => Vec2::ZERO,
    };
    let mut candidates = Vec::with_capacity(n_new);
    for _ in 0..n_new {
        let step = Vec2::new(sample_alpha_stable(p, rng)?, sample_alpha_stable(p, rng)?);
        candidates.push(state.clamp(state.foa.add(drift).add(step)));
    }
    Ok((regime, candidates))
}

fn invert_2x2(m: &[[f64; 2]; 2]) -> Result<([[f64; 2]; 2], f64)> {
    let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    if det <= 0.0 || m[0][0] <= 0.0 || !det.is_finite() {
        return Err(Error::Parameter(
            "sigma_s must be symmetric positive definite".into(),
        ));
    }
    let inv = [
        [m[1][1] / det, -m[0][1] / det],
        [-m[1][0] / det, m[0][0] / det],
    ];
    Ok((inv, det))
}

/// Expected reward of a candidate shift: sum over interest points of value
/// times the bivariate normal density centered at the candidate.
pub fn expected_reward(
    candidate: Vec2,
    ips: &[InterestPoint],
    sigma_s: &[[f64; 2]; 2],
) -> Result<f64> {
    let (inv, det) = invert_2x2(sigma_s)?;
    let norm = 1.0 / (2.0 * std::f64::consts::PI * det.sqrt());
    let mut total = 0.0;
    for ip in ips {
        let dx = ip.pos.x - candidate.x;
        let dy = ip.pos.y - candidate.y;
        let q = dx * (inv[0][0] * dx + inv[0][1] * dy) + dy * (inv[1][0] * dx + inv[1][1] * dy);
        total += ip.value * norm * (-0.5 * q).exp();
    }
    Ok(total)
}

/// Candidate maximizing expected reward; ties break toward the lowest index.
pub fn choose_foa(
    candidates: &[Vec2],
    ips: &[InterestPoint],
    sigma_s: &[[f64; 2]; 2],
) -> Result<Vec2> {
    if candidates.is_empty() {
        return Err(Error::Parameter("choose_foa requires at least one candidate".into()));
    }
    let mut best = candidates[0];
    let mut best_r = expected_reward(candidates[0], ips, sigma_s)?;
    for &c in &candidates[1..] {
        let r = expected_reward(c, ips, sigma_s)?;
        if r > best_r {
            best_r = r;
            best = c;
        }
    }
    Ok(best)
}

/// Times charged for spotting and handling prey.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct HandlingTime {
    /// Detection time per unit FoA area, ticks/cell^2.
    pub delta_d: f64,
    /// Handling time per unit object area, ticks/cell^2.
    pub delta_h: f64,
}

impl Default for HandlingTime {
    fn default() -> Self {
        HandlingTime { delta_d: 0.01, delta_h: 0.01 }
    }
}

/// Outcome of one detection attempt at the current FoA.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RewardEvent {
    pub tick: u32,
    pub stream: usize,
    pub foa: Vec2,
    pub hit: bool,
    pub object_kind: Option<ObjectKind>,
    /// Time spent spotting, charged on every attempt.
    pub td: f64,
    /// Time spent handling, charged on hits only.
    pub th: f64,
}

/// Attempt a detection at the FoA.
///
/// A ground-truth object whose footprint overlaps the FoA disk is detected
/// with probability `detector_accuracy`; the nearest overlapping object wins.
pub fn attempt_detection<R: Rng + ?Sized>(
    state: &GazeState,
    landscape: &Landscape,
    tick: u32,
    detector_accuracy: f64,
    timing: &HandlingTime,
    rng: &mut R,
) -> Result<RewardEvent> {
    if !(0.0..=1.0).contains(&detector_accuracy) {
        return Err(Error::Parameter("detector_accuracy must lie in [0, 1]".into()));
    }
    let td = timing.delta_d * std::f64::consts::PI * state.foa_radius * state.foa_radius;
    let mut nearest: Option<(f64, ObjectKind, f64)> = None;
    for a in &landscape.streams[state.stream].activities {
        if !a.active_at(tick) {
            continue;
        }
        for o in &a.objects {
            let Some(pos) = o.position_at(a.span, tick) else { continue };
            let d = state.foa.dist(pos);
            if d <= state.foa_radius + o.extent {
                match nearest {
                    Some((best, _, _)) if best <= d => {}
                    _ => nearest = Some((d, o.kind, o.extent)),
                }
            }
        }
    }
    let mut event = RewardEvent {
        tick,
        stream: state.stream,
        foa: state.foa,
        hit: false,
        object_kind: None,
        td,
        th: 0.0,
    };
    if let Some((_, kind, extent)) = nearest {
        if detector_accuracy > 0.0 && rng.random::<f64>() < detector_accuracy {
            event.hit = true;
            event.object_kind = Some(kind);
            event.th = timing.delta_h * std::f64::consts::PI * extent * extent;
        }
    }
    Ok(event)
}
