//! Sliding-window trajectories through the six coefficient spaces.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::midi::TempoMap;
use crate::pcdft::PitchClassVector;
use crate::segmentation::SegmentGrid;
use crate::wavescape::{PrefixTable, WavescapeError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum TrajectoryError {
    #[error("window of {window_len} segments is longer than the {n_segments} available")]
    WindowTooLong {
        window_len: usize,
        n_segments: usize,
    },
    #[error("window length and hop must be at least 1")]
    InvalidWindow,
    #[error("segment vectors and grid disagree: {vectors} vectors, {segments} segments")]
    GridMismatch { vectors: usize, segments: usize },
    #[error("trajectory has no points")]
    EmptyTrajectory,
    #[error(transparent)]
    Wavescape(#[from] WavescapeError),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryPoint {
    pub window_start: usize,
    pub time_center_seconds: f64,
    /// Normalized coefficients 1..=6; all zero for silent windows.
    pub coeffs: [Complex64; 6],
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub zero_weight: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub window_len: usize,
    pub hop: usize,
    pub points: Vec<TrajectoryPoint>,
    /// Mean seconds per segment inside each point's window.
    pub segment_duration: Vec<f64>,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Coefficient `k` (1..=6) of every point.
    pub fn path(&self, k: usize) -> impl Iterator<Item = Complex64> + '_ {
        self.points.iter().map(move |p| p.coeffs[k - 1])
    }
}

/// One point per window of `window_len` consecutive segments, hop 1.
pub fn sliding_trajectory(
    vectors: &[PitchClassVector],
    grid: &SegmentGrid,
    map: &TempoMap,
    ppq: u16,
    window_len: usize,
) -> Result<Trajectory, TrajectoryError> {
    let table = PrefixTable::new(vectors)?;
    trajectory_from_table(&table, grid, map, ppq, window_len, 1)
}

/// Trajectory over a prebuilt prefix table with an arbitrary hop.
pub fn trajectory_from_table(
    table: &PrefixTable,
    grid: &SegmentGrid,
    map: &TempoMap,
    ppq: u16,
    window_len: usize,
    hop: usize,
) -> Result<Trajectory, TrajectoryError> {
    let n = table.len();
    if n != grid.n_segments() {
        return Err(TrajectoryError::GridMismatch {
            vectors: n,
            segments: grid.n_segments(),
        });
    }
    if window_len == 0 || hop == 0 {
        return Err(TrajectoryError::InvalidWindow);
    }
    if window_len > n {
        return Err(TrajectoryError::WindowTooLong {
            window_len,
            n_segments: n,
        });
    }

    let b = &grid.boundaries_ticks;
    let mut points = Vec::new();
    let mut segment_duration = Vec::new();
    for start in (0..=n - window_len).step_by(hop) {
        let (lo, hi) = (b[start], b[start + window_len]);
        let mid = (lo as f64 + hi as f64) / 2.0;
        let (coeffs, zero_weight) = match table.window_coefficients(start, window_len) {
            Ok(c) => (c, false),
            Err(WavescapeError::ZeroWeightWindow) => ([Complex64::new(0.0, 0.0); 6], true),
            Err(e) => return Err(e.into()),
        };
        points.push(TrajectoryPoint {
            window_start: start,
            time_center_seconds: map.seconds_at(ppq, mid),
            coeffs,
            zero_weight,
        });
        let secs = map.tick_to_seconds(ppq, hi) - map.tick_to_seconds(ppq, lo);
        segment_duration.push(secs / window_len as f64);
    }
    Ok(Trajectory {
        window_len,
        hop,
        points,
        segment_duration,
    })
}

/// Index of the point whose window center is nearest to `t_seconds`.
///
/// Ties go to the earlier point; times outside the trajectory clamp to its ends.
pub fn window_at_time(traj: &Trajectory, t_seconds: f64) -> Result<usize, TrajectoryError> {
    let pts = &traj.points;
    if pts.is_empty() {
        return Err(TrajectoryError::EmptyTrajectory);
    }
    // First center at or after t.
    let after = pts.partition_point(|p| p.time_center_seconds < t_seconds);
    if after == 0 {
        return Ok(0);
    }
    if after == pts.len() {
        return Ok(pts.len() - 1);
    }
    let before = after - 1;
    let d_before = t_seconds - pts[before].time_center_seconds;
    let d_after = pts[after].time_center_seconds - t_seconds;
    Ok(if d_after < d_before { after } else { before })
}
