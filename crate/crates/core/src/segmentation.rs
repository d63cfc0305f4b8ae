//! Equal-duration segmentation of the tick timeline and per-segment
//! pitch-class weights.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::midi::{NoteEvent, TempoMap};
use crate::pcdft::PitchClassVector;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SegmentationError {
    #[error("segment length rounds to zero ticks")]
    ZeroLengthSegment,
    #[error("nothing to segment: the piece has zero length")]
    EmptySpan,
    #[error("invalid resolution '{0}': expected a note value like 1/8 or seconds like 0.5s")]
    InvalidResolution(String),
}

/// Duration of one base segment.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum ResolutionSpec {
    /// A fraction of a whole note, e.g. 1/8 for an eighth note.
    NoteValue {
        numerator: u32,
        denominator: u32,
    },
    Seconds(f64),
}

impl ResolutionSpec {
    pub fn note_value(numerator: u32, denominator: u32) -> Result<Self, SegmentationError> {
        if numerator == 0 || denominator == 0 {
            return Err(SegmentationError::InvalidResolution(format!(
                "{numerator}/{denominator}"
            )));
        }
        Ok(Self::NoteValue {
            numerator,
            denominator,
        })
    }

    pub fn seconds(s: f64) -> Result<Self, SegmentationError> {
        if !(s > 0.0 && s.is_finite()) {
            return Err(SegmentationError::InvalidResolution(format!("{s}s")));
        }
        Ok(Self::Seconds(s))
    }

    /// Length in whole notes, for note-value resolutions.
    pub fn whole_notes(&self) -> Option<f64> {
        match *self {
            Self::NoteValue {
                numerator,
                denominator,
            } => Some(f64::from(numerator) / f64::from(denominator)),
            Self::Seconds(_) => None,
        }
    }
}

impl fmt::Display for ResolutionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::NoteValue {
                numerator,
                denominator,
            } => write!(f, "{numerator}/{denominator}"),
            Self::Seconds(s) => write!(f, "{s}s"),
        }
    }
}

impl FromStr for ResolutionSpec {
    type Err = SegmentationError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || SegmentationError::InvalidResolution(s.to_string());
        let t = s.trim();
        if let Some(secs) = t.strip_suffix('s') {
            let v: f64 = secs.trim().parse().map_err(|_| bad())?;
            return Self::seconds(v).map_err(|_| bad());
        }
        let (num, den) = match t.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (t, "1"),
        };
        let num: u32 = num.parse().map_err(|_| bad())?;
        let den: u32 = den.parse().map_err(|_| bad())?;
        Self::note_value(num, den).map_err(|_| bad())
    }
}

impl TryFrom<String> for ResolutionSpec {
    type Error = SegmentationError;

    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

impl From<ResolutionSpec> for String {
    fn from(r: ResolutionSpec) -> String {
        r.to_string()
    }
}

/// How a note contributes to the segments it touches.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Weighting {
    /// Ticks of overlap between note and segment.
    #[default]
    Duration,
    /// One count per note, in the segment holding its onset.
    Onset,
    /// Ticks of overlap scaled by velocity / 127.
    VelocityScaled,
}

impl FromStr for Weighting {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "duration" => Ok(Self::Duration),
            "onset" => Ok(Self::Onset),
            "velocity-scaled" | "velocity" => Ok(Self::VelocityScaled),
            other => Err(format!(
                "unknown weighting '{other}' (expected duration, onset or velocity-scaled)"
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SegmentGrid {
    /// Strictly increasing, starting at 0; one more entry than segments.
    pub boundaries_ticks: Vec<u64>,
    pub resolution: ResolutionSpec,
}

impl SegmentGrid {
    pub fn n_segments(&self) -> usize {
        self.boundaries_ticks.len() - 1
    }

    pub fn span_end(&self) -> u64 {
        *self.boundaries_ticks.last().expect("grid has boundaries")
    }

    /// `(start, end)` ticks of segment `i`.
    pub fn segment(&self, i: usize) -> (u64, u64) {
        (self.boundaries_ticks[i], self.boundaries_ticks[i + 1])
    }
}

/// Cuts `[0, span_end_tick)` into segments of the given resolution.
///
/// The last segment is shorter when the span does not divide evenly.
pub fn make_grid(
    span_end_tick: u64,
    spec: ResolutionSpec,
    map: &TempoMap,
    ppq: u16,
) -> Result<SegmentGrid, SegmentationError> {
    if span_end_tick == 0 {
        return Err(SegmentationError::EmptySpan);
    }
    let mut boundaries = vec![0u64];
    match spec {
        ResolutionSpec::NoteValue {
            numerator,
            denominator,
        } => {
            let ticks = f64::from(numerator) * 4.0 * f64::from(ppq) / f64::from(denominator);
            let len = ticks.round() as u64;
            if len == 0 {
                return Err(SegmentationError::ZeroLengthSegment);
            }
            boundaries.extend((1..).map(|m| m * len).take_while(|&b| b < span_end_tick));
        }
        ResolutionSpec::Seconds(step) => {
            for m in 1u64.. {
                let tick = map.seconds_to_tick(ppq, m as f64 * step).round() as u64;
                if tick >= span_end_tick {
                    break;
                }
                if tick <= *boundaries.last().unwrap() {
                    return Err(SegmentationError::ZeroLengthSegment);
                }
                boundaries.push(tick);
            }
        }
    }
    boundaries.push(span_end_tick);
    Ok(SegmentGrid {
        boundaries_ticks: boundaries,
        resolution: spec,
    })
}

/// Duration-weighted pitch-class vector of every segment.
pub fn segment_weights(notes: &[NoteEvent], grid: &SegmentGrid) -> Vec<PitchClassVector> {
    segment_weights_with(notes, grid, Weighting::Duration)
}

pub fn segment_weights_with(
    notes: &[NoteEvent],
    grid: &SegmentGrid,
    weighting: Weighting,
) -> Vec<PitchClassVector> {
    let b = &grid.boundaries_ticks;
    let mut out = vec![PitchClassVector::zeros(); grid.n_segments()];
    let span_end = grid.span_end();

    for note in notes {
        let (on, off) = (note.onset_tick, note.end_tick().min(span_end));
        if on >= off {
            continue;
        }
        let pc = note.pitch_class();
        // First segment whose end lies after the onset.
        let first = b[1..].partition_point(|&end| end <= on);
        if weighting == Weighting::Onset {
            out[first].0[pc] += 1.0;
            continue;
        }
        let scale = match weighting {
            Weighting::VelocityScaled => f64::from(note.velocity) / 127.0,
            _ => 1.0,
        };
        for (seg, w) in out.iter_mut().enumerate().skip(first) {
            let (start, end) = (b[seg], b[seg + 1]);
            if start >= off {
                break;
            }
            let overlap = off.min(end) - on.max(start);
            w.0[pc] += overlap as f64 * scale;
        }
    }
    out
}

/// Sizes of the groups [`coarsen`] merges `len` vectors into.
pub fn coarsen_groups(len: usize, max_columns: usize) -> Vec<usize> {
    let max_columns = max_columns.max(1);
    if len <= max_columns {
        return vec![1; len];
    }
    let per_group = len.div_ceil(max_columns);
    let n_groups = len.div_ceil(per_group);
    let (base, extra) = (len / n_groups, len % n_groups);
    (0..n_groups)
        .map(|g| base + usize::from(g < extra))
        .collect()
}

/// Merges runs of adjacent vectors so at most `max_columns` remain.
pub fn coarsen(vectors: &[PitchClassVector], max_columns: usize) -> Vec<PitchClassVector> {
    let mut rest = vectors;
    coarsen_groups(vectors.len(), max_columns)
        .into_iter()
        .map(|size| {
            let (group, tail) = rest.split_at(size);
            rest = tail;
            group.iter().copied().sum()
        })
        .collect()
}
