//! Standard MIDI File ingestion: raw decoding, note pairing and tempo.

mod notes;
mod smf;
mod tempo;

use thiserror::Error;

pub use notes::{extract_notes, NoteEvent, NoteList, PERCUSSION_CHANNEL};
pub use smf::{parse_smf, EventKind, MidiDocument, TrackEvent};
pub use tempo::{build_tempo_map, TempoEntry, TempoMap, DEFAULT_US_PER_QUARTER};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MidiError {
    #[error("not a Standard MIDI File: no MThd header at offset 0")]
    MissingHeader,
    #[error("unsupported MIDI file: {0}")]
    UnsupportedFormat(String),
    #[error("truncated chunk or event at byte {offset}")]
    TruncatedChunk { offset: usize },
    #[error("variable-length quantity longer than 4 bytes at byte {offset}")]
    BadVarLen { offset: usize },
    #[error("malformed event at byte {offset}")]
    MalformedEvent { offset: usize },
}
