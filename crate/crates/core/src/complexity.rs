//! Configurational complexity of a stream from its interest-point layout.
//!
//! The frame is partitioned into N_w rectangular cells; the occupancy
//! distribution of interest points over cells gives a Boltzmann-Gibbs-Shannon
//! entropy H (k_B = 1). Disorder is H normalized by its supremum log N_w,
//! order is its complement, and complexity is their product, which peaks at
//! intermediate structure and vanishes for empty or fully uniform scenes.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::perception::InterestPoint;

/// Partition of the frame into `n_rows x n_cols` rectangular cells.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CellGrid {
    pub n_rows: u32,
    pub n_cols: u32,
}

impl Default for CellGrid {
    fn default() -> Self {
        CellGrid { n_rows: 8, n_cols: 8 }
    }
}

impl CellGrid {
    pub fn new(n_rows: u32, n_cols: u32) -> Result<Self> {
        let grid = CellGrid { n_rows, n_cols };
        if grid.n_cells() < 2 {
            return Err(Error::Parameter("cell grid must have N_w >= 2 cells".into()));
        }
        Ok(grid)
    }

    pub fn n_cells(&self) -> usize {
        self.n_rows as usize * self.n_cols as usize
    }

    /// Cell index of a frame position; cells tile the frame exactly.
    pub fn cell_index(&self, x: f64, y: f64, frame_w: f64, frame_h: f64) -> usize {
        let col = ((x / frame_w * self.n_cols as f64).floor() as i64)
            .clamp(0, self.n_cols as i64 - 1) as usize;
        let row = ((y / frame_h * self.n_rows as f64).floor() as i64)
            .clamp(0, self.n_rows as i64 - 1) as usize;
        row * self.n_cols as usize + col
    }
}

/// Per-stream complexity summary at one tick.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComplexityIndex {
    /// Spatial entropy in nats.
    pub h: f64,
    /// Entropy supremum log N_w.
    pub h_sup: f64,
    /// Disorder H / H_sup.
    pub delta: f64,
    /// Order 1 - delta.
    pub omega: f64,
    /// Complexity delta * omega, in [0, 1/4].
    pub c: f64,
    pub stream: usize,
    pub tick: u32,
}

impl ComplexityIndex {
    /// Convention for streams with no interest points: fully ordered, C = 0.
    pub fn empty(grid: &CellGrid, stream: usize, tick: u32) -> Self {
        ComplexityIndex {
            h: 0.0,
            h_sup: (grid.n_cells() as f64).ln(),
            delta: 0.0,
            omega: 1.0,
            c: 0.0,
            stream,
            tick,
        }
    }
}

fn occupancy_counts(
    ips: &[InterestPoint],
    grid: &CellGrid,
    frame_w: f64,
    frame_h: f64,
) -> Vec<u32> {
    let mut counts = vec![0u32; grid.n_cells()];
    for ip in ips {
        counts[grid.cell_index(ip.pos.x, ip.pos.y, frame_w, frame_h)] += 1;
    }
    counts
}

/// Boltzmann-Gibbs-Shannon entropy of the interest-point occupancy over grid
/// cells, in nats, with the 0 ln 0 := 0 convention.
pub fn spatial_entropy(
    ips: &[InterestPoint],
    grid: &CellGrid,
    frame_w: f64,
    frame_h: f64,
) -> Result<f64> {
    if ips.is_empty() {
        return Err(Error::UndefinedEntropy);
    }
    let counts = occupancy_counts(ips, grid, frame_w, frame_h);
    let n = ips.len() as f64;
    let mut h = 0.0;
    for &c in &counts {
        if c > 0 {
            let p = c as f64 / n;
            h -= p * p.ln();
        }
    }
    Ok(h)
}

/// Full complexity index; empty interest-point sets use the C = 0 convention.
pub fn complexity(
    ips: &[InterestPoint],
    grid: &CellGrid,
    frame_w: f64,
    frame_h: f64,
    stream: usize,
    tick: u32,
) -> ComplexityIndex {
    let h_sup = (grid.n_cells() as f64).ln();
    match spatial_entropy(ips, grid, frame_w, frame_h) {
        Ok(h) => {
            let delta = (h / h_sup).clamp(0.0, 1.0);
            let omega = 1.0 - delta;
            ComplexityIndex { h, h_sup, delta, omega, c: delta * omega, stream, tick }
        }
        Err(_) => ComplexityIndex::empty(grid, stream, tick),
    }
}

/// Categorical stream-choice distribution proportional to complexities.
#[derive(Clone, Debug, PartialEq)]
pub struct StreamChoice {
    pub probs: Vec<f64>,
    /// True when all complexities were zero and the distribution fell back to
    /// uniform.
    pub uniform_fallback: bool,
}

pub fn stream_choice_distribution(c_values: &[f64]) -> StreamChoice {
    let total: f64 = c_values.iter().sum();
    if total > 0.0 {
        StreamChoice {
            probs: c_values.iter().map(|&c| c / total).collect(),
            uniform_fallback: false,
        }
    } else {
        let k = c_values.len().max(1);
        StreamChoice { probs: vec![1.0 / k as f64; c_values.len()], uniform_fallback: true }
    }
}

/// Sample a stream index from the categorical distribution.
pub fn select_stream<R: Rng + ?Sized>(choice: &StreamChoice, rng: &mut R) -> Result<usize> {
    if choice.probs.is_empty() {
        return Err(Error::Parameter("stream choice over zero streams".into()));
    }
    let sum: f64 = choice.probs.iter().sum();
    if choice.probs.iter().any(|&p| p < 0.0 || !p.is_finite()) || (sum - 1.0).abs() > 1e-6 {
        return Err(Error::Parameter(format!(
            "invalid categorical distribution (sum {sum})"
        )));
    }
    let u: f64 = rng.random::<f64>() * sum;
    let mut acc = 0.0;
    for (i, &p) in choice.probs.iter().enumerate() {
        acc += p;
        if u < acc {
            return Ok(i);
        }
    }
    Ok(choice.probs.len() - 1)
}
