//! Wavescapes: the normalized k-th coefficient of every contiguous run of
//! segments, arranged as a triangle.
//!
//! Row `h` holds the windows of `h + 1` segments; column `i` is the first
//! segment of the window. Row 0 is the per-segment level and the single cell
//! of row `n - 1` is the whole piece.
//!
//! Window coefficients come from prefix sums taken directly in coefficient
//! space. The transform is linear, so the raw coefficients of a window are a
//! difference of two prefix entries and normalizing is one division by the
//! window's `c_0`.

use std::collections::BTreeSet;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::pcdft::{check_index, CoefficientSet, DftError, PitchClassVector};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum WavescapeError {
    #[error("no segments to analyze")]
    EmptyInput,
    #[error("window has zero total weight")]
    ZeroWeightWindow,
    #[error("window {start}+{len} exceeds {n} segments")]
    OutOfRange { start: usize, len: usize, n: usize },
    #[error(transparent)]
    Dft(#[from] DftError),
}

/// Running sums of raw segment coefficients: `prefix[i]` covers segments `0..i`.
#[derive(Debug, Clone, PartialEq)]
pub struct PrefixTable {
    prefix: Vec<CoefficientSet>,
}

impl PrefixTable {
    pub fn new(vectors: &[PitchClassVector]) -> Result<Self, WavescapeError> {
        if vectors.is_empty() {
            return Err(WavescapeError::EmptyInput);
        }
        let mut prefix = Vec::with_capacity(vectors.len() + 1);
        let mut acc = CoefficientSet::ZERO;
        prefix.push(acc);
        for v in vectors {
            acc = acc + v.dft();
            prefix.push(acc);
        }
        Ok(Self { prefix })
    }

    /// Number of segments.
    pub fn len(&self) -> usize {
        self.prefix.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn entries(&self) -> &[CoefficientSet] {
        &self.prefix
    }

    /// Raw coefficients of segments `start..start + len`.
    pub fn window_raw(&self, start: usize, len: usize) -> Result<CoefficientSet, WavescapeError> {
        let n = self.len();
        if len == 0 || start + len > n {
            return Err(WavescapeError::OutOfRange { start, len, n });
        }
        Ok(self.prefix[start + len] - self.prefix[start])
    }

    /// Normalized coefficients 1..=6 of a window.
    pub fn window_coefficients(
        &self,
        start: usize,
        len: usize,
    ) -> Result<[Complex64; 6], WavescapeError> {
        self.window_raw(start, len)?
            .normalized_nontrivial()
            .ok_or(WavescapeError::ZeroWeightWindow)
    }

    /// Normalized k-th coefficient of a window, k in 1..=6.
    pub fn window_coefficient(
        &self,
        start: usize,
        len: usize,
        k: usize,
    ) -> Result<Complex64, WavescapeError> {
        check_index(k)?;
        let raw = self.window_raw(start, len)?;
        let weight = raw.weight();
        if weight == 0.0 {
            return Err(WavescapeError::ZeroWeightWindow);
        }
        Ok(raw.c[k] / weight)
    }
}

/// Free-function form of [`PrefixTable::new`].
pub fn coefficient_prefix(vectors: &[PitchClassVector]) -> Result<PrefixTable, WavescapeError> {
    PrefixTable::new(vectors)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WavescapeMatrix {
    pub k: usize,
    /// Number of base segments (columns of row 0).
    pub n: usize,
    /// `rows[h][i]` is the window of `h + 1` segments starting at `i`.
    pub rows: Vec<Vec<Complex64>>,
    /// `(h, i)` of cells whose window is silent; their value is 0.
    #[serde(default, skip_serializing_if = "BTreeSet::is_empty")]
    pub zero_weight: BTreeSet<(usize, usize)>,
}

impl WavescapeMatrix {
    pub fn cell(&self, h: usize, i: usize) -> Complex64 {
        self.rows[h][i]
    }

    /// The whole-piece value.
    pub fn tip(&self) -> Complex64 {
        self.rows[self.n - 1][0]
    }

    pub fn is_zero_weight(&self, h: usize, i: usize) -> bool {
        self.zero_weight.contains(&(h, i))
    }

    pub fn cell_count(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    /// Iterates `(h, i, value)` row by row from the bottom.
    pub fn cells(&self) -> impl Iterator<Item = (usize, usize, Complex64)> + '_ {
        self.rows
            .iter()
            .enumerate()
            .flat_map(|(h, row)| row.iter().enumerate().map(move |(i, &z)| (h, i, z)))
    }
}

/// Builds the k-th wavescape of `vectors`.
pub fn build_wavescape(
    vectors: &[PitchClassVector],
    k: usize,
) -> Result<WavescapeMatrix, WavescapeError> {
    check_index(k)?;
    let table = PrefixTable::new(vectors)?;
    Ok(wavescape_from_table(&table, k))
}

/// All six wavescapes from one prefix table.
pub fn build_all_wavescapes(
    vectors: &[PitchClassVector],
) -> Result<Vec<WavescapeMatrix>, WavescapeError> {
    use rayon::prelude::*;

    let table = PrefixTable::new(vectors)?;
    Ok((1..=6)
        .into_par_iter()
        .map(|k| wavescape_from_table(&table, k))
        .collect())
}

/// Builds the k-th wavescape from an existing table; `k` must be in 1..=6.
pub fn wavescape_from_table(table: &PrefixTable, k: usize) -> WavescapeMatrix {
    let n = table.len();
    let prefix = table.entries();
    let mut zero_weight = BTreeSet::new();
    let rows = (0..n)
        .map(|h| {
            (0..n - h)
                .map(|i| {
                    let lo = &prefix[i];
                    let hi = &prefix[i + h + 1];
                    let weight = hi.c[0].re - lo.c[0].re;
                    if weight == 0.0 {
                        zero_weight.insert((h, i));
                        Complex64::new(0.0, 0.0)
                    } else {
                        (hi.c[k] - lo.c[k]) / weight
                    }
                })
                .collect()
        })
        .collect();
    WavescapeMatrix {
        k,
        n,
        rows,
        zero_weight,
    }
}
