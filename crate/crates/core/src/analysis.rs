//! End-to-end analysis of a MIDI file into one serializable bundle.
//!
//! The bundle carries everything both visualizations need: per-segment
//! weights and coefficients, six wavescapes over a capped (coarsened)
//! segmentation, and the sliding-window trajectory over the full one. A new
//! window length can be applied to an existing bundle with
//! [`AnalysisBundle::with_window`] without touching the MIDI bytes again.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::midi::{build_tempo_map, extract_notes, parse_smf, MidiError, TempoMap};
use crate::pcdft::PitchClassVector;
use crate::segmentation::{
    coarsen, coarsen_groups, make_grid, segment_weights_with, ResolutionSpec, SegmentGrid,
    SegmentationError, Weighting,
};
use crate::trajectory::{trajectory_from_table, Trajectory, TrajectoryError};
use crate::wavescape::{build_all_wavescapes, PrefixTable, WavescapeError, WavescapeMatrix};

pub const SCHEMA_VERSION: &str = "1";

/// Default cap on base segments feeding the wavescapes.
pub const DEFAULT_MAX_COLUMNS: usize = 250;

#[derive(Debug, Error)]
pub enum AnalysisError {
    #[error(transparent)]
    Midi(#[from] MidiError),
    #[error("the file contains no notes")]
    NoNotes,
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Segmentation(#[from] SegmentationError),
    #[error(transparent)]
    Wavescape(#[from] WavescapeError),
    #[error(transparent)]
    Trajectory(#[from] TrajectoryError),
    #[error("unsupported bundle schema version '{0}'")]
    SchemaVersion(String),
    #[error("malformed bundle: {0}")]
    Json(#[from] serde_json::Error),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisConfig {
    pub resolution: ResolutionSpec,
    /// Sliding-window length in segments.
    pub window_len: usize,
    pub wavescape_max_columns: usize,
    pub include_percussion: bool,
    pub weighting: Weighting,
    /// Segments between consecutive trajectory windows.
    pub hop: usize,
}

impl Default for AnalysisConfig {
    fn default() -> Self {
        Self {
            resolution: ResolutionSpec::NoteValue {
                numerator: 1,
                denominator: 4,
            },
            window_len: 1,
            wavescape_max_columns: DEFAULT_MAX_COLUMNS,
            include_percussion: true,
            weighting: Weighting::Duration,
            hop: 1,
        }
    }
}

impl AnalysisConfig {
    pub fn validate(&self) -> Result<(), AnalysisError> {
        let bad = |msg: &str| Err(AnalysisError::InvalidConfig(msg.to_string()));
        if self.window_len == 0 {
            return bad("window length must be at least 1");
        }
        if self.hop == 0 {
            return bad("hop must be at least 1");
        }
        if self.wavescape_max_columns == 0 {
            return bad("wavescape column cap must be at least 1");
        }
        Ok(())
    }

    /// Time covered by one sliding window.
    pub fn window_span(&self) -> WindowSpan {
        let n = self.window_len as f64;
        match self.resolution {
            ResolutionSpec::Seconds(s) => WindowSpan {
                amount: n * s,
                unit: SpanUnit::Seconds,
            },
            r @ ResolutionSpec::NoteValue { .. } => WindowSpan {
                amount: n * r.whole_notes().unwrap_or_default(),
                unit: SpanUnit::WholeNotes,
            },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpanUnit {
    WholeNotes,
    Seconds,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WindowSpan {
    pub amount: f64,
    pub unit: SpanUnit,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Metadata {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub file_name: Option<String>,
    pub format: u16,
    pub ppq: u16,
    pub duration_seconds: f64,
    pub n_notes: usize,
    pub dangling_note_offs: usize,
    pub n_segments: usize,
    /// Tick boundaries of the (possibly coarsened) wavescape columns.
    pub wavescape_boundaries_ticks: Vec<u64>,
    pub window_span: WindowSpan,
    /// Normalized coefficients 1..=6 of the whole piece.
    pub whole_piece: [Complex64; 6],
    pub tempo_map: TempoMap,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SegmentRecord {
    pub start_tick: u64,
    pub end_tick: u64,
    pub start_seconds: f64,
    pub end_seconds: f64,
    pub weights: PitchClassVector,
    /// Normalized coefficients 1..=6; zero for silent segments.
    pub coeffs: [Complex64; 6],
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub zero_weight: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisBundle {
    pub schema_version: String,
    pub metadata: Metadata,
    pub config: AnalysisConfig,
    pub segments: Vec<SegmentRecord>,
    /// Coefficients 1..=6 in order.
    pub wavescapes: Vec<WavescapeMatrix>,
    pub trajectory: Trajectory,
}

impl AnalysisBundle {
    pub fn wavescape(&self, k: usize) -> Option<&WavescapeMatrix> {
        self.wavescapes.iter().find(|m| m.k == k)
    }

    pub fn grid(&self) -> SegmentGrid {
        let mut boundaries_ticks: Vec<u64> = self.segments.iter().map(|s| s.start_tick).collect();
        boundaries_ticks.extend(self.segments.last().map(|s| s.end_tick));
        SegmentGrid {
            boundaries_ticks,
            resolution: self.config.resolution,
        }
    }

    pub fn segment_vectors(&self) -> Vec<PitchClassVector> {
        self.segments.iter().map(|s| s.weights).collect()
    }

    /// Same analysis with a different sliding-window length.
    pub fn with_window(&self, window_len: usize) -> Result<Self, AnalysisError> {
        let mut config = self.config.clone();
        config.window_len = window_len;
        config.validate()?;
        let table = PrefixTable::new(&self.segment_vectors())?;
        let trajectory = trajectory_from_table(
            &table,
            &self.grid(),
            &self.metadata.tempo_map,
            self.metadata.ppq,
            window_len,
            config.hop,
        )?;
        let mut out = self.clone();
        out.metadata.window_span = config.window_span();
        out.config = config;
        out.trajectory = trajectory;
        Ok(out)
    }
}

/// Parses `midi_bytes` and runs the whole pipeline.
pub fn analyze(midi_bytes: &[u8], cfg: &AnalysisConfig) -> Result<AnalysisBundle, AnalysisError> {
    cfg.validate()?;
    let doc = parse_smf(midi_bytes)?;
    let mut list = extract_notes(&doc);
    if !cfg.include_percussion {
        list.notes.retain(|n| !n.is_percussion());
    }
    if list.notes.is_empty() {
        return Err(AnalysisError::NoNotes);
    }

    let tempo = build_tempo_map(&doc);
    let span_end = list.notes.iter().map(|n| n.end_tick()).max().unwrap_or(0);
    let grid = make_grid(span_end, cfg.resolution, &tempo, doc.ppq)?;
    let vectors = segment_weights_with(&list.notes, &grid, cfg.weighting);
    let table = PrefixTable::new(&vectors)?;
    let n = vectors.len();

    let whole_piece = table
        .window_coefficients(0, n)
        .map_err(|_| AnalysisError::NoNotes)?;

    let seconds: Vec<f64> = grid
        .boundaries_ticks
        .iter()
        .map(|&t| tempo.tick_to_seconds(doc.ppq, t))
        .collect();
    let segments = vectors
        .iter()
        .enumerate()
        .map(|(i, v)| {
            let (start_tick, end_tick) = grid.segment(i);
            let coeffs = table.window_coefficients(i, 1).ok();
            SegmentRecord {
                start_tick,
                end_tick,
                start_seconds: seconds[i],
                end_seconds: seconds[i + 1],
                weights: *v,
                coeffs: coeffs.unwrap_or([Complex64::new(0.0, 0.0); 6]),
                zero_weight: coeffs.is_none(),
            }
        })
        .collect();

    let groups = coarsen_groups(n, cfg.wavescape_max_columns);
    let mut wavescape_boundaries_ticks = vec![0u64];
    let mut idx = 0;
    for g in &groups {
        idx += g;
        wavescape_boundaries_ticks.push(grid.boundaries_ticks[idx]);
    }
    let (wavescapes, trajectory) = rayon::join(
        || build_all_wavescapes(&coarsen(&vectors, cfg.wavescape_max_columns)),
        || trajectory_from_table(&table, &grid, &tempo, doc.ppq, cfg.window_len, cfg.hop),
    );

    Ok(AnalysisBundle {
        schema_version: SCHEMA_VERSION.to_string(),
        metadata: Metadata {
            file_name: None,
            format: doc.format,
            ppq: doc.ppq,
            duration_seconds: seconds[n],
            n_notes: list.notes.len(),
            dangling_note_offs: list.dangling_offs,
            n_segments: n,
            wavescape_boundaries_ticks,
            window_span: cfg.window_span(),
            whole_piece,
            tempo_map: tempo,
        },
        config: cfg.clone(),
        segments,
        wavescapes: wavescapes?,
        trajectory: trajectory?,
    })
}

/// Pretty-printed JSON; complex numbers are `[re, im]` pairs.
pub fn serialize_bundle(b: &AnalysisBundle) -> String {
    serde_json::to_string_pretty(b).expect("bundle is always representable as JSON")
}

pub fn deserialize_bundle(json: &str) -> Result<AnalysisBundle, AnalysisError> {
    #[derive(Deserialize)]
    struct Version {
        schema_version: String,
    }
    let v: Version = serde_json::from_str(json)?;
    if v.schema_version != SCHEMA_VERSION {
        return Err(AnalysisError::SchemaVersion(v.schema_version));
    }
    Ok(serde_json::from_str(json)?)
}
