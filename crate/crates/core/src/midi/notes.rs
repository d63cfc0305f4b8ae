use std::collections::{HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use super::smf::{EventKind, MidiDocument};

/// MIDI channel carrying General MIDI percussion (channel 10, zero-based 9).
pub const PERCUSSION_CHANNEL: u8 = 9;

/// A sounding note with onset and duration in ticks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct NoteEvent {
    pub pitch: u8,
    pub onset_tick: u64,
    /// Always at least 1.
    pub duration_ticks: u64,
    pub velocity: u8,
    pub channel: u8,
    pub track_index: usize,
}

impl NoteEvent {
    pub fn end_tick(&self) -> u64 {
        self.onset_tick + self.duration_ticks
    }

    pub fn pitch_class(&self) -> usize {
        usize::from(self.pitch % 12)
    }

    pub fn is_percussion(&self) -> bool {
        self.channel == PERCUSSION_CHANNEL
    }
}

/// Notes of a document plus counters for events that could not be paired.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct NoteList {
    /// Sorted by onset tick.
    pub notes: Vec<NoteEvent>,
    /// Note-offs without a sounding note to close.
    pub dangling_offs: usize,
    /// Notes whose off arrived at the same tick as their on; these are dropped.
    pub zero_length: usize,
}

struct Pending {
    onset: u64,
    velocity: u8,
}

/// Pairs note-ons with note-offs.
///
/// Pairing is FIFO per (track, channel, pitch). A note-on with velocity 0
/// closes a note. Notes still sounding at the end of a track are closed at
/// that track's last event tick.
pub fn extract_notes(doc: &MidiDocument) -> NoteList {
    let mut out = NoteList::default();

    for (track_index, events) in doc.tracks.iter().enumerate() {
        let mut open: HashMap<(u8, u8), VecDeque<Pending>> = HashMap::new();
        let push = |out: &mut NoteList, key: (u8, u8), p: Pending, end: u64| {
            if end > p.onset {
                out.notes.push(NoteEvent {
                    pitch: key.1,
                    onset_tick: p.onset,
                    duration_ticks: end - p.onset,
                    velocity: p.velocity,
                    channel: key.0,
                    track_index,
                });
            } else {
                out.zero_length += 1;
            }
        };

        for ev in events {
            match ev.kind {
                EventKind::NoteOn {
                    channel,
                    key,
                    velocity,
                } if velocity > 0 => {
                    open.entry((channel, key)).or_default().push_back(Pending {
                        onset: ev.tick,
                        velocity,
                    });
                }
                EventKind::NoteOn { channel, key, .. }
                | EventKind::NoteOff { channel, key, .. } => {
                    match open.get_mut(&(channel, key)).and_then(VecDeque::pop_front) {
                        Some(p) => push(&mut out, (channel, key), p, ev.tick),
                        None => out.dangling_offs += 1,
                    }
                }
                _ => {}
            }
        }

        let last = events.last().map_or(0, |e| e.tick);
        let mut leftovers: Vec<_> = open
            .into_iter()
            .flat_map(|(key, q)| q.into_iter().map(move |p| (key, p)))
            .collect();
        leftovers.sort_by_key(|(key, p)| (p.onset, *key));
        for (key, p) in leftovers {
            push(&mut out, key, p, last);
        }
    }

    out.notes.sort_by_key(|n| {
        (
            n.onset_tick,
            n.track_index,
            n.channel,
            n.pitch,
            n.duration_ticks,
        )
    });
    out
}
