//! Tonality analysis of symbolic music with the discrete Fourier transform
//! on pitch classes.
//!
//! A MIDI file is cut into equal-duration segments, each segment becomes a
//! 12-dimensional pitch-class weight vector, and the normalized Fourier
//! coefficients 1..=6 of those vectors (and of every run of consecutive
//! segments) are what gets visualized:
//!
//! * [`wavescape`]: every contiguous window at every time scale, as a triangle.
//! * [`trajectory`]: one sliding window length, as a path through each
//!   coefficient's unit disk.
//!
//! [`analysis::analyze`] runs the whole pipeline and returns an
//! [`analysis::AnalysisBundle`] that serializes to a versioned JSON document.

pub mod analysis;
pub mod color;
pub mod midi;
pub mod pcdft;
pub mod render;
pub mod segmentation;
pub mod trajectory;
pub mod wavescape;

pub use analysis::{
    analyze, deserialize_bundle, serialize_bundle, AnalysisBundle, AnalysisConfig, AnalysisError,
};
pub use color::{phase_color, ColorWheel, Rgba};
pub use num_complex::Complex64;
pub use pcdft::{parse_pc_text, PitchClassDistribution, PitchClassVector};
pub use segmentation::{ResolutionSpec, Weighting};
