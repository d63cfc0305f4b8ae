#![allow(dead_code)]

//! Shared helpers for integration tests: a minimal SMF writer for
//! hand-assembled fixtures and brute-force oracles that avoid the library's
//! code paths.

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::path::PathBuf;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use tonalscape::midi::NoteList;
use tonalscape::pcdft::prototype_positions;
use tonalscape::render::{
    disk_file_name, render_disk_svg, render_wavescape_svg, wavescape_file_name, RenderOptions,
};
use tonalscape::{analyze, AnalysisBundle, AnalysisConfig};
use tonalscape::{Complex64, PitchClassVector};

pub fn fixtures_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures")
}

pub fn golden_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

/// Compares `actual` with a golden file, rewriting it when `UPDATE_GOLDEN` is set.
pub fn check_golden(name: &str, actual: &[u8]) {
    let path = golden_dir().join(name);
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::create_dir_all(golden_dir()).unwrap();
        std::fs::write(&path, actual).unwrap();
        return;
    }
    let expected = std::fs::read(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    assert!(
        expected == actual,
        "{} differs from golden output",
        path.display()
    );
}

/// One line per note, the format of the `*.notes.txt` golden files.
pub fn note_listing(list: &NoteList) -> String {
    let mut out = String::from("# track channel pitch onset duration velocity\n");
    for n in &list.notes {
        let _ = writeln!(
            out,
            "{} {} {} {} {} {}",
            n.track_index, n.channel, n.pitch, n.onset_tick, n.duration_ticks, n.velocity
        );
    }
    let _ = writeln!(out, "# dangling_offs {}", list.dangling_offs);
    out
}

/// Half-note analysis used for the SVG golden files.
pub fn golden_bundle(midi: &[u8]) -> AnalysisBundle {
    let cfg = AnalysisConfig {
        resolution: "1/2".parse().unwrap(),
        ..AnalysisConfig::default()
    };
    analyze(midi, &cfg).unwrap()
}

pub fn golden_options() -> RenderOptions {
    RenderOptions {
        width_px: 256,
        marker_index: Some(1),
        ..RenderOptions::default()
    }
}

/// `(file name, svg)` for the wavescape and disk of every coefficient.
pub fn golden_svgs(b: &AnalysisBundle) -> Vec<(String, String)> {
    let opts = golden_options();
    let mut out = Vec::new();
    for k in 1..=6 {
        let m = b.wavescape(k).unwrap();
        out.push((
            wavescape_file_name("three_segments", k),
            render_wavescape_svg(m, &opts),
        ));
        let protos = prototype_positions(k).unwrap();
        let disk = render_disk_svg(k, &b.trajectory, &protos, &opts).unwrap();
        out.push((disk_file_name("three_segments", k), disk));
    }
    out
}

// ---------------------------------------------------------------------------
// SMF writing

pub fn vlq(mut v: u32) -> Vec<u8> {
    let mut out = vec![(v & 0x7F) as u8];
    v >>= 7;
    while v > 0 {
        out.push(((v & 0x7F) as u8) | 0x80);
        v >>= 7;
    }
    out.reverse();
    out
}

#[derive(Debug, Clone, Default)]
pub struct TrackBuilder {
    /// (absolute tick, insertion order, raw message bytes)
    events: Vec<(u64, usize, Vec<u8>)>,
    running_status: bool,
    zero_velocity_offs: bool,
}

impl TrackBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    /// Omit repeated channel status bytes.
    pub fn running_status(mut self) -> Self {
        self.running_status = true;
        self
    }

    /// Write note-offs as note-on with velocity 0.
    pub fn zero_velocity_offs(mut self) -> Self {
        self.zero_velocity_offs = true;
        self
    }

    pub fn raw(&mut self, tick: u64, bytes: Vec<u8>) -> &mut Self {
        let order = self.events.len();
        self.events.push((tick, order, bytes));
        self
    }

    pub fn note(&mut self, tick: u64, dur: u64, channel: u8, pitch: u8, velocity: u8) -> &mut Self {
        self.raw(tick, vec![0x90 | channel, pitch, velocity]);
        let off = if self.zero_velocity_offs {
            vec![0x90 | channel, pitch, 0]
        } else {
            vec![0x80 | channel, pitch, 0x40]
        };
        self.raw(tick + dur, off)
    }

    pub fn chord(&mut self, tick: u64, dur: u64, pitches: &[u8]) -> &mut Self {
        for &p in pitches {
            self.note(tick, dur, 0, p, 80);
        }
        self
    }

    pub fn tempo(&mut self, tick: u64, us_per_quarter: u32) -> &mut Self {
        let b = us_per_quarter.to_be_bytes();
        self.raw(tick, vec![0xFF, 0x51, 0x03, b[1], b[2], b[3]])
    }

    pub fn text(&mut self, tick: u64, text: &str) -> &mut Self {
        let mut bytes = vec![0xFF, 0x01];
        bytes.extend(vlq(text.len() as u32));
        bytes.extend(text.as_bytes());
        self.raw(tick, bytes)
    }

    /// Encoded `MTrk` chunk. Events at the same tick keep insertion order,
    /// except that note-offs go before note-ons.
    pub fn encode(&self) -> Vec<u8> {
        let mut events = self.events.clone();
        let is_on = |b: &[u8]| b[0] & 0xF0 == 0x90 && b.len() == 3 && b[2] > 0;
        events.sort_by_key(|(tick, order, bytes)| (*tick, is_on(bytes), *order));
        let end = events.last().map_or(0, |e| e.0);

        let mut body = Vec::new();
        let mut last_tick = 0;
        let mut status: Option<u8> = None;
        for (tick, _, bytes) in &events {
            body.extend(vlq((tick - last_tick) as u32));
            last_tick = *tick;
            let s = bytes[0];
            if self.running_status && s < 0xF0 && status == Some(s) {
                body.extend(&bytes[1..]);
            } else {
                body.extend(bytes);
            }
            status = if s < 0xF0 { Some(s) } else { status };
        }
        body.extend(vlq((end - last_tick) as u32));
        body.extend([0xFF, 0x2F, 0x00]);

        let mut chunk = b"MTrk".to_vec();
        chunk.extend((body.len() as u32).to_be_bytes());
        chunk.extend(body);
        chunk
    }
}

pub fn smf(format: u16, ppq: u16, tracks: &[TrackBuilder]) -> Vec<u8> {
    let mut out = b"MThd".to_vec();
    out.extend(6u32.to_be_bytes());
    out.extend(format.to_be_bytes());
    out.extend((tracks.len() as u16).to_be_bytes());
    out.extend(ppq.to_be_bytes());
    for t in tracks {
        out.extend(t.encode());
    }
    out
}

/// Format 0, 480 ppq: one chord held for `quarters` quarter notes.
pub fn one_chord_file(pitches: &[u8], quarters: u64) -> Vec<u8> {
    let mut t = TrackBuilder::new();
    t.chord(0, 480 * quarters, pitches);
    smf(0, 480, &[t])
}

/// A 128-bar progression cycling through the four hexatonic regions, in
/// quarter-note chords (ppq 480), 512 quarters long.
pub fn long_progression_file() -> Vec<u8> {
    let mut meta = TrackBuilder::new();
    meta.tempo(0, 500_000).text(0, "long progression");
    let mut t = TrackBuilder::new();
    // E major, C major, A♭ major, E minor... descending major thirds with
    // the relative minor thrown in.
    let cycle: [[u8; 3]; 8] = [
        [64, 68, 71],
        [61, 64, 68],
        [60, 64, 67],
        [57, 60, 64],
        [56, 60, 63],
        [53, 56, 60],
        [64, 67, 71],
        [59, 64, 67],
    ];
    for q in 0..512u64 {
        let chord = cycle[((q / 16) % 8) as usize];
        t.chord(q * 480, 480, &chord);
        if q % 4 == 0 {
            t.note(q * 480, 1920, 0, chord[0] - 24, 90);
        }
    }
    smf(1, 480, &[meta, t])
}

// ---------------------------------------------------------------------------
// Oracles

/// All twelve coefficients by direct summation with `cos`/`sin`.
pub fn oracle_dft_full(w: &[f64; 12]) -> [Complex64; 12] {
    std::array::from_fn(|k| {
        let mut re = 0.0;
        let mut im = 0.0;
        for (p, &x) in w.iter().enumerate() {
            let angle = 2.0 * PI * (k * p) as f64 / 12.0;
            re += x * angle.cos();
            im -= x * angle.sin();
        }
        Complex64::new(re, im)
    })
}

/// Normalized k-th coefficient of the sum of `vectors[start..start + len]`,
/// via plain 12-vector sums.
pub fn oracle_window(
    vectors: &[PitchClassVector],
    start: usize,
    len: usize,
    k: usize,
) -> Option<Complex64> {
    let mut sum = [0.0; 12];
    for v in &vectors[start..start + len] {
        for (s, x) in sum.iter_mut().zip(v.weights()) {
            *s += x;
        }
    }
    let total: f64 = sum.iter().sum();
    if total == 0.0 {
        return None;
    }
    let d = sum.map(|x| x / total);
    Some(oracle_dft_full(&d)[k])
}

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

/// Nonnegative vector with a few entries zeroed out at random.
pub fn random_vector(rng: &mut StdRng) -> PitchClassVector {
    PitchClassVector(std::array::from_fn(|_| {
        if rng.gen_bool(0.3) {
            0.0
        } else {
            rng.gen_range(0.0..10.0)
        }
    }))
}

pub fn random_positive_vector(rng: &mut StdRng) -> PitchClassVector {
    let mut v = random_vector(rng);
    v.0[rng.gen_range(0..12)] += 1.0;
    v
}

pub fn max_diff(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm()
}
