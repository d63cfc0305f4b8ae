use serde::{Deserialize, Serialize};

use super::smf::{EventKind, MidiDocument};

/// Tempo assumed by SMF when a file has no Set Tempo event (120 BPM).
pub const DEFAULT_US_PER_QUARTER: u32 = 500_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TempoEntry {
    pub tick: u64,
    pub us_per_quarter: u32,
}

/// Piecewise-constant tempo over the tick timeline.
///
/// Entries are strictly increasing in tick and the first one is at tick 0.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(from = "RawTempoMap")]
pub struct TempoMap {
    entries: Vec<TempoEntry>,
}

// Deserialized maps go through `from_changes` so the invariants hold.
#[derive(Deserialize)]
struct RawTempoMap {
    entries: Vec<TempoEntry>,
}

impl From<RawTempoMap> for TempoMap {
    fn from(raw: RawTempoMap) -> Self {
        Self::from_changes(raw.entries.into_iter().map(|e| (e.tick, e.us_per_quarter)))
    }
}

impl Default for TempoMap {
    fn default() -> Self {
        Self::constant(DEFAULT_US_PER_QUARTER)
    }
}

impl TempoMap {
    pub fn constant(us_per_quarter: u32) -> Self {
        Self {
            entries: vec![TempoEntry {
                tick: 0,
                us_per_quarter,
            }],
        }
    }

    /// Builds a map from `(tick, µs per quarter)` pairs in file order.
    ///
    /// Pairs are sorted by tick; at equal ticks the later pair wins. A default
    /// entry is inserted at tick 0 when none is given there. Zero tempos are
    /// ignored.
    pub fn from_changes<I>(changes: I) -> Self
    where
        I: IntoIterator<Item = (u64, u32)>,
    {
        let mut changes: Vec<(u64, u32)> = changes.into_iter().filter(|&(_, us)| us > 0).collect();
        changes.sort_by_key(|&(tick, _)| tick);

        let mut entries: Vec<TempoEntry> = Vec::with_capacity(changes.len() + 1);
        for (tick, us_per_quarter) in changes {
            match entries.last_mut() {
                Some(last) if last.tick == tick => last.us_per_quarter = us_per_quarter,
                _ => entries.push(TempoEntry {
                    tick,
                    us_per_quarter,
                }),
            }
        }
        if entries.first().is_none_or(|e| e.tick != 0) {
            entries.insert(
                0,
                TempoEntry {
                    tick: 0,
                    us_per_quarter: DEFAULT_US_PER_QUARTER,
                },
            );
        }
        Self { entries }
    }

    pub fn entries(&self) -> &[TempoEntry] {
        &self.entries
    }

    /// Seconds elapsed at `tick`.
    pub fn tick_to_seconds(&self, ppq: u16, tick: u64) -> f64 {
        self.seconds_at(ppq, tick as f64)
    }

    /// Seconds elapsed at a fractional tick position.
    pub fn seconds_at(&self, ppq: u16, tick: f64) -> f64 {
        let ppq = f64::from(ppq);
        let mut micros = 0.0;
        for (i, e) in self.entries.iter().enumerate() {
            let start = e.tick as f64;
            if tick <= start {
                break;
            }
            let end = self
                .entries
                .get(i + 1)
                .map_or(tick, |next| (next.tick as f64).min(tick));
            micros += (end - start) * f64::from(e.us_per_quarter) / ppq;
        }
        micros / 1e6
    }

    /// Inverse of [`TempoMap::seconds_at`]: the fractional tick reached after `seconds`.
    pub fn seconds_to_tick(&self, ppq: u16, seconds: f64) -> f64 {
        let ppq = f64::from(ppq);
        let mut remaining_us = seconds.max(0.0) * 1e6;
        for (i, e) in self.entries.iter().enumerate() {
            let us_per_tick = f64::from(e.us_per_quarter) / ppq;
            match self.entries.get(i + 1) {
                Some(next) => {
                    let span_us = (next.tick - e.tick) as f64 * us_per_tick;
                    if remaining_us <= span_us {
                        return e.tick as f64 + remaining_us / us_per_tick;
                    }
                    remaining_us -= span_us;
                }
                None => return e.tick as f64 + remaining_us / us_per_tick,
            }
        }
        unreachable!("tempo map is never empty")
    }
}

/// Collects Set Tempo events of every track into a [`TempoMap`].
///
/// File order (track by track, event by event) decides which of several
/// simultaneous tempo events wins: the last one.
pub fn build_tempo_map(doc: &MidiDocument) -> TempoMap {
    TempoMap::from_changes(doc.tracks.iter().flat_map(|track| {
        track.iter().filter_map(|ev| match ev.kind {
            EventKind::Tempo(us) => Some((ev.tick, us)),
            _ => None,
        })
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::midi::smf::TrackEvent;

    fn tempo(tick: u64, us: u32) -> TrackEvent {
        TrackEvent {
            tick,
            kind: EventKind::Tempo(us),
        }
    }

    fn entries(map: &TempoMap) -> Vec<(u64, u32)> {
        map.entries()
            .iter()
            .map(|e| (e.tick, e.us_per_quarter))
            .collect()
    }

    #[test]
    fn default_when_no_tempo() {
        let doc = MidiDocument {
            format: 0,
            ppq: 480,
            tracks: vec![vec![]],
        };
        assert_eq!(entries(&build_tempo_map(&doc)), vec![(0, 500_000)]);
    }

    #[test]
    fn merged_across_tracks() {
        let doc = MidiDocument {
            format: 1,
            ppq: 480,
            tracks: vec![vec![tempo(0, 500_000)], vec![tempo(960, 1_000_000)]],
        };
        assert_eq!(
            entries(&build_tempo_map(&doc)),
            vec![(0, 500_000), (960, 1_000_000)]
        );
    }

    #[test]
    fn later_simultaneous_tempo_wins() {
        let doc = MidiDocument {
            format: 1,
            ppq: 480,
            tracks: vec![
                vec![tempo(0, 400_000), tempo(480, 600_000)],
                vec![tempo(480, 700_000)],
            ],
        };
        assert_eq!(
            entries(&build_tempo_map(&doc)),
            vec![(0, 400_000), (480, 700_000)]
        );
    }

    #[test]
    fn default_prepended_before_late_tempo() {
        let map = TempoMap::from_changes([(240, 250_000)]);
        assert_eq!(entries(&map), vec![(0, 500_000), (240, 250_000)]);
    }

    #[test]
    fn seconds_single_tempo() {
        let map = TempoMap::default();
        assert_eq!(map.tick_to_seconds(480, 0), 0.0);
        assert_eq!(map.tick_to_seconds(480, 480), 0.5);
    }

    #[test]
    fn seconds_two_segments() {
        // 480 ticks at 0.5 s/quarter, then 480 ticks at 1 s/quarter.
        let map = TempoMap::from_changes([(0, 500_000), (480, 1_000_000)]);
        assert_eq!(map.tick_to_seconds(480, 960), 1.5);
        assert_eq!(map.tick_to_seconds(480, 720), 1.0);
    }

    #[test]
    fn inverse_round_trips() {
        let map = TempoMap::from_changes([(0, 500_000), (480, 1_000_000), (1000, 250_000)]);
        for tick in [0u64, 1, 240, 480, 481, 999, 1000, 5000] {
            let s = map.tick_to_seconds(96, tick);
            assert!((map.seconds_to_tick(96, s) - tick as f64).abs() < 1e-9);
        }
    }
}
