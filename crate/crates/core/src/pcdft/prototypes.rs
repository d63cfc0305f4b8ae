//! Landmark pitch-class sets drawn on each coefficient disk.
//!
//! The catalog is plain data: a list of labeled pitch-class multisets, each
//! assigned to a coefficient index. Positions are always computed from the
//! sets, never stored.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{check_index, DftError, PitchClassVector};

const NAMES: [&str; 12] = [
    "C", "C♯", "D", "E♭", "E", "F", "F♯", "G", "A♭", "A", "B♭", "B",
];

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrototypeSet {
    pub label: String,
    pub k: usize,
    /// Multiset of pitch classes 0..=11.
    pub pcs: Vec<usize>,
}

impl PrototypeSet {
    fn new(label: impl Into<String>, k: usize, pcs: Vec<usize>) -> Self {
        Self {
            label: label.into(),
            k,
            pcs,
        }
    }
}

/// A prototype set together with its position on disk `k`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PrototypePoint {
    pub label: String,
    pub pcs: Vec<usize>,
    pub k: usize,
    pub position: Complex64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrototypeCatalog {
    pub sets: Vec<PrototypeSet>,
}

impl Default for PrototypeCatalog {
    fn default() -> Self {
        let mut sets = Vec::new();
        let shifted = |base: &[usize], t: usize| -> Vec<usize> {
            let mut pcs: Vec<usize> = base.iter().map(|p| (p + t) % 12).collect();
            pcs.sort_unstable();
            pcs
        };
        // Members of a transposition-limited set that fall in 0..n, used as its name.
        let members_below = |pcs: &[usize], n: usize| -> String {
            pcs.iter()
                .filter(|&&p| p < n)
                .map(ToString::to_string)
                .collect::<Vec<_>>()
                .join(",")
        };

        for pc in 0..12 {
            sets.push(PrototypeSet::new(pc.to_string(), 1, vec![pc]));
        }
        for pc in 0..6 {
            sets.push(PrototypeSet::new(
                format!("{{{},{}}}", pc, pc + 6),
                2,
                vec![pc, pc + 6],
            ));
        }
        for (t, name) in NAMES.iter().enumerate().take(4) {
            sets.push(PrototypeSet::new(
                format!("+ on {name}"),
                3,
                shifted(&[0, 4, 8], t),
            ));
        }
        for t in 0..4 {
            let pcs = shifted(&[0, 1, 4, 5, 8, 9], t);
            sets.push(PrototypeSet::new(
                format!("H_{{{}}}", members_below(&pcs, 4)),
                3,
                pcs,
            ));
        }
        for (t, name) in NAMES.iter().enumerate().take(3) {
            sets.push(PrototypeSet::new(
                format!("°7 on {name}"),
                4,
                shifted(&[0, 3, 6, 9], t),
            ));
        }
        for t in 0..3 {
            let pcs = shifted(&[0, 1, 3, 4, 6, 7, 9, 10], t);
            sets.push(PrototypeSet::new(
                format!("O_{{{}}}", members_below(&pcs, 3)),
                4,
                pcs,
            ));
        }
        for i in 0..12 {
            let pc = (7 * i) % 12;
            sets.push(PrototypeSet::new(pc.to_string(), 5, vec![pc]));
        }
        for i in 0..12 {
            let tonic = (7 * i) % 12;
            sets.push(PrototypeSet::new(
                key_signature(tonic),
                5,
                shifted(&[0, 2, 4, 5, 7, 9, 11], tonic),
            ));
        }
        for t in 0..2 {
            sets.push(PrototypeSet::new(
                format!("WT_{t}"),
                6,
                shifted(&[0, 2, 4, 6, 8, 10], t),
            ));
        }
        Self { sets }
    }
}

/// Key signature of the major scale on `tonic`, e.g. "2♯" for D, "0♯/♭" for C.
fn key_signature(tonic: usize) -> String {
    match (7 * tonic) % 12 {
        0 => "0♯/♭".to_string(),
        6 => "6♯/♭".to_string(),
        s @ 1..=5 => format!("{s}♯"),
        s => format!("{}♭", 12 - s),
    }
}

impl PrototypeCatalog {
    pub fn empty() -> Self {
        Self { sets: Vec::new() }
    }

    pub fn push(&mut self, set: PrototypeSet) {
        self.sets.push(set);
    }

    /// Prototype points for coefficient `k`, in catalog order.
    ///
    /// Sets whose pitch classes are empty or out of range are skipped.
    pub fn positions(&self, k: usize) -> Result<Vec<PrototypePoint>, DftError> {
        check_index(k)?;
        Ok(self
            .sets
            .iter()
            .filter(|s| s.k == k && s.pcs.iter().all(|&p| p < 12))
            .filter_map(|s| {
                let d = PitchClassVector::from_pcs(s.pcs.iter().copied())
                    .normalize()
                    .ok()?;
                Some(PrototypePoint {
                    label: s.label.clone(),
                    pcs: s.pcs.clone(),
                    k,
                    position: d.coefficient(k).ok()?,
                })
            })
            .collect())
    }
}

/// Prototype points of the default catalog for coefficient `k`.
pub fn prototype_positions(k: usize) -> Result<Vec<PrototypePoint>, DftError> {
    PrototypeCatalog::default().positions(k)
}
