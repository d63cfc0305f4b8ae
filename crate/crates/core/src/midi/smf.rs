//! Standard MIDI File chunk and event decoding.
//!
//! Only formats 0 and 1 with a metrical (ticks per quarter note) division are
//! accepted. Delta times are accumulated into absolute ticks while decoding;
//! running status, meta events and sysex blocks are handled here so the rest
//! of the crate only ever sees [`TrackEvent`]s.

use super::MidiError;

/// Meta event type for a tempo change (`FF 51 03 tt tt tt`).
const META_TEMPO: u8 = 0x51;
/// Meta event type for end of track (`FF 2F 00`).
const META_END_OF_TRACK: u8 = 0x2F;

/// A decoded Standard MIDI File.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MidiDocument {
    /// 0 (single track) or 1 (simultaneous tracks).
    pub format: u16,
    /// Ticks per quarter note, always positive.
    pub ppq: u16,
    pub tracks: Vec<Vec<TrackEvent>>,
}

/// One event of a track, stamped with its absolute tick.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrackEvent {
    pub tick: u64,
    pub kind: EventKind,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EventKind {
    NoteOn {
        channel: u8,
        key: u8,
        velocity: u8,
    },
    NoteOff {
        channel: u8,
        key: u8,
        velocity: u8,
    },
    /// Any other channel voice message (controller, program change, bend...).
    Channel {
        status: u8,
        data: [u8; 2],
    },
    /// Set Tempo meta event, in microseconds per quarter note.
    Tempo(u32),
    EndOfTrack,
    /// Any meta event other than tempo and end of track.
    Meta {
        kind: u8,
        data: Vec<u8>,
    },
    /// A skipped system exclusive block.
    SysEx {
        len: usize,
    },
}

impl MidiDocument {
    /// Tick of the last event over all tracks.
    pub fn last_tick(&self) -> u64 {
        self.tracks
            .iter()
            .filter_map(|t| t.last().map(|e| e.tick))
            .max()
            .unwrap_or(0)
    }
}

/// Decodes a Standard MIDI File held in memory.
pub fn parse_smf(bytes: &[u8]) -> Result<MidiDocument, MidiError> {
    if bytes.len() < 4 || &bytes[..4] != b"MThd" {
        return Err(MidiError::MissingHeader);
    }
    let mut reader = Reader::new(bytes);
    let (_, header) = reader.chunk()?;
    if header.len() < 6 {
        return Err(MidiError::TruncatedChunk { offset: 8 });
    }
    let format = u16::from_be_bytes([header[0], header[1]]);
    let n_tracks = u16::from_be_bytes([header[2], header[3]]);
    let division = u16::from_be_bytes([header[4], header[5]]);

    if format > 1 {
        return Err(MidiError::UnsupportedFormat(format!("format {format}")));
    }
    if division & 0x8000 != 0 {
        return Err(MidiError::UnsupportedFormat("SMPTE time division".into()));
    }
    if division == 0 {
        return Err(MidiError::UnsupportedFormat(
            "zero ticks per quarter note".into(),
        ));
    }

    let mut tracks = Vec::with_capacity(n_tracks as usize);
    while tracks.len() < n_tracks as usize {
        if reader.remaining() == 0 {
            return Err(MidiError::TruncatedChunk { offset: reader.pos });
        }
        let (id, body_start, body) = {
            let start = reader.pos + 8;
            let (id, body) = reader.chunk()?;
            (id, start, body)
        };
        // Unknown chunk types must be skipped.
        if id == *b"MTrk" {
            tracks.push(parse_track(body, body_start)?);
        }
    }

    Ok(MidiDocument {
        format,
        ppq: division,
        tracks,
    })
}

fn parse_track(body: &[u8], base: usize) -> Result<Vec<TrackEvent>, MidiError> {
    let mut r = Reader::new(body);
    r.base = base;
    let mut events = Vec::new();
    let mut tick = 0u64;
    let mut running: Option<u8> = None;

    while r.remaining() > 0 {
        tick += u64::from(r.var_len()?);
        let first = r.byte()?;
        let kind = match first {
            0xFF => {
                let kind = r.byte()?;
                let len = r.var_len()? as usize;
                let data = r.take(len)?;
                match kind {
                    META_TEMPO if len == 3 => {
                        EventKind::Tempo(u32::from_be_bytes([0, data[0], data[1], data[2]]))
                    }
                    META_END_OF_TRACK => EventKind::EndOfTrack,
                    _ => EventKind::Meta {
                        kind,
                        data: data.to_vec(),
                    },
                }
            }
            0xF0 | 0xF7 => {
                let len = r.var_len()? as usize;
                r.take(len)?;
                running = None;
                EventKind::SysEx { len }
            }
            0x80..=0xEF => {
                running = Some(first);
                channel_event(&mut r, first, None)?
            }
            0x00..=0x7F => match running {
                Some(status) => channel_event(&mut r, status, Some(first))?,
                None => {
                    return Err(MidiError::MalformedEvent {
                        offset: r.abs() - 1,
                    })
                }
            },
            // System common / realtime bytes have no place inside a track chunk.
            _ => {
                return Err(MidiError::MalformedEvent {
                    offset: r.abs() - 1,
                })
            }
        };
        let end = kind == EventKind::EndOfTrack;
        events.push(TrackEvent { tick, kind });
        if end {
            break;
        }
    }
    Ok(events)
}

fn channel_event(
    r: &mut Reader<'_>,
    status: u8,
    first_data: Option<u8>,
) -> Result<EventKind, MidiError> {
    let next = |r: &mut Reader<'_>| -> Result<u8, MidiError> { r.byte().map(|b| b & 0x7F) };
    let d0 = match first_data {
        Some(b) => b,
        None => next(r)?,
    };
    let channel = status & 0x0F;
    Ok(match status & 0xF0 {
        0x80 => EventKind::NoteOff {
            channel,
            key: d0,
            velocity: next(r)?,
        },
        0x90 => EventKind::NoteOn {
            channel,
            key: d0,
            velocity: next(r)?,
        },
        0xC0 | 0xD0 => EventKind::Channel {
            status,
            data: [d0, 0],
        },
        _ => EventKind::Channel {
            status,
            data: [d0, next(r)?],
        },
    })
}

struct Reader<'a> {
    bytes: &'a [u8],
    pos: usize,
    /// Offset of `bytes` within the whole file, for error reporting.
    base: usize,
}

impl<'a> Reader<'a> {
    fn new(bytes: &'a [u8]) -> Self {
        Self {
            bytes,
            pos: 0,
            base: 0,
        }
    }

    fn abs(&self) -> usize {
        self.base + self.pos
    }

    fn remaining(&self) -> usize {
        self.bytes.len() - self.pos
    }

    fn byte(&mut self) -> Result<u8, MidiError> {
        let b = *self
            .bytes
            .get(self.pos)
            .ok_or(MidiError::TruncatedChunk { offset: self.abs() })?;
        self.pos += 1;
        Ok(b)
    }

    fn take(&mut self, len: usize) -> Result<&'a [u8], MidiError> {
        if self.remaining() < len {
            return Err(MidiError::TruncatedChunk { offset: self.abs() });
        }
        let out = &self.bytes[self.pos..self.pos + len];
        self.pos += len;
        Ok(out)
    }

    /// Variable-length quantity: 7 bits per byte, at most 4 bytes.
    fn var_len(&mut self) -> Result<u32, MidiError> {
        let start = self.abs();
        let mut value = 0u32;
        for _ in 0..4 {
            let b = self.byte()?;
            value = (value << 7) | u32::from(b & 0x7F);
            if b & 0x80 == 0 {
                return Ok(value);
            }
        }
        Err(MidiError::BadVarLen { offset: start })
    }

    fn chunk(&mut self) -> Result<([u8; 4], &'a [u8]), MidiError> {
        let start = self.abs();
        let head = self
            .take(8)
            .map_err(|_| MidiError::TruncatedChunk { offset: start })?;
        let id = [head[0], head[1], head[2], head[3]];
        let len = u32::from_be_bytes([head[4], head[5], head[6], head[7]]) as usize;
        let body = self
            .take(len)
            .map_err(|_| MidiError::TruncatedChunk { offset: start })?;
        Ok((id, body))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn header(format: u16, ntracks: u16, division: u16) -> Vec<u8> {
        let mut v = b"MThd".to_vec();
        v.extend_from_slice(&6u32.to_be_bytes());
        v.extend_from_slice(&format.to_be_bytes());
        v.extend_from_slice(&ntracks.to_be_bytes());
        v.extend_from_slice(&division.to_be_bytes());
        v
    }

    fn track(body: &[u8]) -> Vec<u8> {
        let mut v = b"MTrk".to_vec();
        v.extend_from_slice(&(body.len() as u32).to_be_bytes());
        v.extend_from_slice(body);
        v
    }

    #[test]
    fn header_fields() {
        let mut bytes = vec![
            0x4D, 0x54, 0x68, 0x64, 0x00, 0x00, 0x00, 0x06, 0x00, 0x00, 0x00, 0x01, 0x01, 0xE0,
        ];
        bytes.extend(track(&[0x00, 0xFF, 0x2F, 0x00]));
        let doc = parse_smf(&bytes).unwrap();
        assert_eq!(doc.format, 0);
        assert_eq!(doc.ppq, 480);
        assert_eq!(doc.tracks.len(), 1);
        assert_eq!(
            doc.tracks[0],
            vec![TrackEvent {
                tick: 0,
                kind: EventKind::EndOfTrack
            }]
        );
    }

    #[test]
    fn rejects_missing_header() {
        assert_eq!(parse_smf(b"RIFF0000"), Err(MidiError::MissingHeader));
        assert_eq!(parse_smf(b"MT"), Err(MidiError::MissingHeader));
    }

    #[test]
    fn rejects_format_2_and_smpte() {
        let bytes = header(2, 0, 480);
        assert!(matches!(
            parse_smf(&bytes),
            Err(MidiError::UnsupportedFormat(_))
        ));
        let bytes = header(1, 0, 0xE728);
        assert!(matches!(
            parse_smf(&bytes),
            Err(MidiError::UnsupportedFormat(_))
        ));
    }

    #[test]
    fn truncated_track_chunk() {
        let mut bytes = header(0, 1, 96);
        bytes.extend_from_slice(b"MTrk\x00\x00\x00\x10\x00\x90");
        assert!(matches!(
            parse_smf(&bytes),
            Err(MidiError::TruncatedChunk { .. })
        ));
        // Fewer tracks than declared.
        let bytes = header(1, 2, 96);
        assert!(matches!(
            parse_smf(&bytes),
            Err(MidiError::TruncatedChunk { .. })
        ));
    }

    #[test]
    fn truncated_event_inside_track() {
        let mut bytes = header(0, 1, 96);
        bytes.extend(track(&[0x00, 0x90, 0x3C]));
        assert!(matches!(
            parse_smf(&bytes),
            Err(MidiError::TruncatedChunk { .. })
        ));
    }

    #[test]
    fn var_len_over_four_bytes() {
        let mut bytes = header(0, 1, 96);
        bytes.extend(track(&[0x81, 0x80, 0x80, 0x80, 0x00, 0xFF, 0x2F, 0x00]));
        assert_eq!(parse_smf(&bytes), Err(MidiError::BadVarLen { offset: 22 }));
    }

    #[test]
    fn var_len_decoding() {
        let mut bytes = header(0, 1, 96);
        // delta 0x81 0x00 = 128, delta 0xFF 0x7F = 16383
        bytes.extend(track(&[
            0x81, 0x00, 0x90, 0x3C, 0x40, 0xFF, 0x7F, 0x80, 0x3C, 0x00, 0x00, 0xFF, 0x2F, 0x00,
        ]));
        let doc = parse_smf(&bytes).unwrap();
        let ticks: Vec<u64> = doc.tracks[0].iter().map(|e| e.tick).collect();
        assert_eq!(ticks, vec![128, 128 + 16383, 128 + 16383]);
    }

    #[test]
    fn running_status_and_sysex() {
        let mut bytes = header(0, 1, 96);
        bytes.extend(track(&[
            0x00, 0xF0, 0x03, 0x7E, 0x7F, 0xF7, // sysex, skipped
            0x00, 0x91, 0x3C, 0x40, // note on ch 1
            0x10, 0x40, 0x40, // running status: another note on
            0x00, 0xC1, 0x05, // program change, 1 data byte
            0x08, 0x3C, // data byte after 0xC1 -> running program change
            0x00, 0xFF, 0x2F, 0x00,
        ]));
        let doc = parse_smf(&bytes).unwrap();
        let kinds: Vec<&EventKind> = doc.tracks[0].iter().map(|e| &e.kind).collect();
        assert_eq!(kinds[0], &EventKind::SysEx { len: 3 });
        assert_eq!(
            kinds[1],
            &EventKind::NoteOn {
                channel: 1,
                key: 0x3C,
                velocity: 0x40
            }
        );
        assert_eq!(
            kinds[2],
            &EventKind::NoteOn {
                channel: 1,
                key: 0x40,
                velocity: 0x40
            }
        );
        assert_eq!(
            kinds[3],
            &EventKind::Channel {
                status: 0xC1,
                data: [5, 0]
            }
        );
        assert_eq!(
            kinds[4],
            &EventKind::Channel {
                status: 0xC1,
                data: [0x3C, 0]
            }
        );
        assert_eq!(doc.tracks[0][5].kind, EventKind::EndOfTrack);
    }

    #[test]
    fn data_byte_without_status_is_malformed() {
        let mut bytes = header(0, 1, 96);
        bytes.extend(track(&[0x00, 0x3C, 0x40]));
        assert!(matches!(
            parse_smf(&bytes),
            Err(MidiError::MalformedEvent { .. })
        ));
    }

    #[test]
    fn unknown_chunks_are_skipped() {
        let mut bytes = header(0, 1, 96);
        bytes.extend_from_slice(b"XFIH\x00\x00\x00\x02ab");
        bytes.extend(track(&[
            0x00, 0xFF, 0x51, 0x03, 0x07, 0xA1, 0x20, 0x00, 0xFF, 0x2F, 0x00,
        ]));
        let doc = parse_smf(&bytes).unwrap();
        assert_eq!(doc.tracks.len(), 1);
        assert_eq!(doc.tracks[0][0].kind, EventKind::Tempo(500_000));
    }
}
