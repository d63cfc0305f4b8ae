//! Pitch-class vectors and their 12-point discrete Fourier transform.
//!
//! Convention: pitch class 0 is C and
//! `c_k = sum_p v_p * exp(-2*pi*i*k*p/12)`.
//! Coefficients 7..11 are conjugates of 5..1 for real input, so only 0..6 are
//! kept. After L1 normalization `c_0 = 1` and every other coefficient lies in
//! the closed unit disk.

mod prototypes;
mod text;

use std::ops::{Add, AddAssign, Index};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use prototypes::{prototype_positions, PrototypeCatalog, PrototypePoint, PrototypeSet};
pub use text::{parse_pc_text, PcParseError};

/// Number of coefficients carried by a [`CoefficientSet`] (indices 0..=6).
pub const N_COEFFS: usize = 7;

/// Magnitudes below this are treated as zero when reporting a phase.
pub const ZERO_MAGNITUDE: f64 = 1e-12;

const H: f64 = 0.866_025_403_784_438_6; // sqrt(3)/2

/// `exp(-2*pi*i*m/12)` for m = 0..11, exact where the value is exactly representable.
const TWIDDLE: [Complex64; 12] = [
    Complex64::new(1.0, 0.0),
    Complex64::new(H, -0.5),
    Complex64::new(0.5, -H),
    Complex64::new(0.0, -1.0),
    Complex64::new(-0.5, -H),
    Complex64::new(-H, -0.5),
    Complex64::new(-1.0, 0.0),
    Complex64::new(-H, 0.5),
    Complex64::new(-0.5, H),
    Complex64::new(0.0, 1.0),
    Complex64::new(0.5, H),
    Complex64::new(H, 0.5),
];

/// `exp(-2*pi*i*m/12)` for any integer `m`.
pub fn root_of_unity(m: i64) -> Complex64 {
    TWIDDLE[m.rem_euclid(12) as usize]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum DftError {
    #[error("pitch-class vector has zero total weight")]
    ZeroVector,
    #[error("coefficient index {0} outside 1..=6")]
    BadIndex(usize),
}

/// Checks that `k` names one of the six nontrivial coefficients.
pub fn check_index(k: usize) -> Result<usize, DftError> {
    if (1..=6).contains(&k) {
        Ok(k)
    } else {
        Err(DftError::BadIndex(k))
    }
}

/// Twelve nonnegative weights, indexed by pitch class (C = 0).
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PitchClassVector(pub [f64; 12]);

impl PitchClassVector {
    pub const fn zeros() -> Self {
        Self([0.0; 12])
    }

    /// Unit vector on one pitch class.
    pub fn singleton(pc: usize) -> Self {
        let mut v = Self::zeros();
        v.0[pc % 12] = 1.0;
        v
    }

    /// Multiset of pitch classes; each occurrence adds 1 (taken mod 12).
    pub fn from_pcs<I: IntoIterator<Item = usize>>(pcs: I) -> Self {
        let mut v = Self::zeros();
        for pc in pcs {
            v.0[pc % 12] += 1.0;
        }
        v
    }

    pub fn weights(&self) -> &[f64; 12] {
        &self.0
    }

    pub fn total(&self) -> f64 {
        self.0.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&w| w == 0.0)
    }

    pub fn scale(&self, factor: f64) -> Self {
        Self(self.0.map(|w| w * factor))
    }

    /// Rotates by `t` semitones: `w'[p] = w[(p - t) mod 12]`.
    pub fn transpose(&self, t: i64) -> Self {
        Self(std::array::from_fn(|p| {
            self.0[(p as i64 - t).rem_euclid(12) as usize]
        }))
    }

    /// Reflects around C: `w'[p] = w[(-p) mod 12]`.
    pub fn invert(&self) -> Self {
        Self(std::array::from_fn(|p| self.0[(12 - p) % 12]))
    }

    /// L1 normalization into a distribution.
    pub fn normalize(&self) -> Result<PitchClassDistribution, DftError> {
        let total = self.total();
        if total <= 0.0 || !total.is_finite() {
            return Err(DftError::ZeroVector);
        }
        Ok(PitchClassDistribution(self.0.map(|w| w / total)))
    }

    /// Raw (unnormalized) transform.
    pub fn dft(&self) -> CoefficientSet {
        CoefficientSet {
            c: dft12(&self.0),
            normalized: false,
        }
    }
}

impl Index<usize> for PitchClassVector {
    type Output = f64;

    fn index(&self, pc: usize) -> &f64 {
        &self.0[pc]
    }
}

impl Add for PitchClassVector {
    type Output = Self;

    fn add(mut self, rhs: Self) -> Self {
        self += rhs;
        self
    }
}

impl AddAssign for PitchClassVector {
    fn add_assign(&mut self, rhs: Self) {
        for (a, b) in self.0.iter_mut().zip(rhs.0) {
            *a += b;
        }
    }
}

impl std::iter::Sum for PitchClassVector {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::zeros(), Add::add)
    }
}

/// Free-function form of [`PitchClassVector::normalize`].
pub fn normalize_l1(v: &PitchClassVector) -> Result<PitchClassDistribution, DftError> {
    v.normalize()
}

/// Free-function form of [`PitchClassVector::transpose`].
pub fn transpose(v: &PitchClassVector, t: i64) -> PitchClassVector {
    v.transpose(t)
}

/// Nonnegative weights summing to one.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PitchClassDistribution([f64; 12]);

impl PitchClassDistribution {
    pub fn weights(&self) -> &[f64; 12] {
        &self.0
    }

    /// Normalized transform: `c[0]` is exactly 1.
    pub fn dft(&self) -> CoefficientSet {
        let mut c = dft12(&self.0);
        c[0] = Complex64::new(1.0, 0.0);
        CoefficientSet {
            c,
            normalized: true,
        }
    }

    /// The k-th normalized coefficient, k in 1..=6.
    pub fn coefficient(&self, k: usize) -> Result<Complex64, DftError> {
        check_index(k)?;
        Ok(coefficient_k(&self.0, k))
    }
}

/// Free-function form of [`PitchClassDistribution::coefficient`].
pub fn coefficient(d: &PitchClassDistribution, k: usize) -> Result<Complex64, DftError> {
    d.coefficient(k)
}

/// Coefficients 0..=6 of a pitch-class vector or distribution.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoefficientSet {
    pub c: [Complex64; N_COEFFS],
    pub normalized: bool,
}

impl CoefficientSet {
    pub const ZERO: Self = Self {
        c: [Complex64::new(0.0, 0.0); N_COEFFS],
        normalized: false,
    };

    pub fn get(&self, k: usize) -> Result<Complex64, DftError> {
        if k < N_COEFFS {
            Ok(self.c[k])
        } else {
            Err(DftError::BadIndex(k))
        }
    }

    /// Total weight of the underlying vector (the real part of `c[0]`).
    pub fn weight(&self) -> f64 {
        self.c[0].re
    }

    /// Coefficients 1..=6 divided by `c[0]`; `None` when the weight is zero.
    pub fn normalized_nontrivial(&self) -> Option<[Complex64; 6]> {
        let w = self.c[0].re;
        if w == 0.0 {
            return None;
        }
        Some(std::array::from_fn(|i| self.c[i + 1] / w))
    }
}

impl std::ops::Sub for CoefficientSet {
    type Output = Self;

    fn sub(self, rhs: Self) -> Self {
        Self {
            c: std::array::from_fn(|k| self.c[k] - rhs.c[k]),
            normalized: false,
        }
    }
}

impl Add for CoefficientSet {
    type Output = Self;

    fn add(self, rhs: Self) -> Self {
        Self {
            c: std::array::from_fn(|k| self.c[k] + rhs.c[k]),
            normalized: false,
        }
    }
}

/// Coefficients 0..=6 of arbitrary real weights.
pub fn dft12(w: &[f64; 12]) -> [Complex64; N_COEFFS] {
    std::array::from_fn(|k| coefficient_k(w, k))
}

fn coefficient_k(w: &[f64; 12], k: usize) -> Complex64 {
    w.iter()
        .enumerate()
        .filter(|(_, &x)| x != 0.0)
        .map(|(p, &x)| TWIDDLE[(k * p) % 12] * x)
        .sum()
}

/// Argument of `z` in (-pi, pi]; 0 for (near) zero values.
pub fn phase(z: Complex64) -> f64 {
    if z.norm() < ZERO_MAGNITUDE {
        return 0.0;
    }
    let a = z.im.atan2(z.re);
    if a <= -std::f64::consts::PI {
        std::f64::consts::PI
    } else {
        a
    }
}

/// [`phase`] in degrees.
pub fn phase_degrees(z: Complex64) -> f64 {
    phase(z).to_degrees()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
        (a - b).norm() < tol
    }

    #[test]
    fn twiddles_match_exp() {
        for (m, &w) in TWIDDLE.iter().enumerate() {
            let exact = Complex64::from_polar(1.0, -2.0 * std::f64::consts::PI * m as f64 / 12.0);
            assert!(close(w, exact, 1e-15), "m = {m}");
        }
    }

    #[test]
    fn normalize_cases() {
        let mut v = PitchClassVector::zeros();
        v.0[0] = 480.0;
        assert_eq!(v.normalize().unwrap().weights()[0], 1.0);
        let u = PitchClassVector([1.0; 12]).normalize().unwrap();
        assert!(u.weights().iter().all(|&x| x == 1.0 / 12.0));
        assert_eq!(
            PitchClassVector::zeros().normalize(),
            Err(DftError::ZeroVector)
        );
    }

    #[test]
    fn singleton_coefficients_are_one() {
        let c = PitchClassVector::singleton(0).normalize().unwrap().dft();
        assert!(c.normalized);
        for k in 0..7 {
            assert_eq!(c.c[k], Complex64::new(1.0, 0.0));
        }
    }

    #[test]
    fn uniform_coefficients_vanish() {
        let c = PitchClassVector([1.0; 12]).normalize().unwrap().dft();
        assert_eq!(c.c[0], Complex64::new(1.0, 0.0));
        for k in 1..7 {
            assert!(c.c[k].norm() < 1e-15, "k = {k}");
        }
    }

    #[test]
    fn augmented_triad() {
        let d = PitchClassVector::from_pcs([0, 4, 8]).normalize().unwrap();
        assert!(close(
            d.coefficient(3).unwrap(),
            Complex64::new(1.0, 0.0),
            1e-15
        ));
        assert!(d.coefficient(1).unwrap().norm() < 1e-15);
        assert!(d.coefficient(2).unwrap().norm() < 1e-15);
    }

    #[test]
    fn hexatonic_third_coefficient() {
        let d = PitchClassVector::from_pcs([2, 3, 6, 7, 10, 11])
            .normalize()
            .unwrap();
        let c3 = d.coefficient(3).unwrap();
        assert!(close(c3, Complex64::new(-0.5, 0.5), 1e-15));
        assert!((phase_degrees(c3) - 135.0).abs() < 1e-12);
    }

    #[test]
    fn bad_index() {
        let d = PitchClassVector::singleton(0).normalize().unwrap();
        assert_eq!(d.coefficient(0), Err(DftError::BadIndex(0)));
        assert_eq!(d.coefficient(7), Err(DftError::BadIndex(7)));
    }

    #[test]
    fn transpose_and_invert() {
        let v = PitchClassVector::from_pcs([0, 4, 7]);
        assert_eq!(v.transpose(2), PitchClassVector::from_pcs([2, 6, 9]));
        assert_eq!(v.transpose(0), v);
        assert_eq!(v.transpose(5).transpose(7), v);
        assert_eq!(v.transpose(-1), PitchClassVector::from_pcs([11, 3, 6]));
        assert_eq!(v.invert(), PitchClassVector::from_pcs([0, 8, 5]));
    }

    #[test]
    fn phase_range() {
        assert_eq!(phase(Complex64::new(0.0, 0.0)), 0.0);
        assert_eq!(phase(Complex64::new(-1.0, -0.0)), std::f64::consts::PI);
        assert_eq!(phase(Complex64::new(-1.0, 0.0)), std::f64::consts::PI);
        assert!((phase_degrees(Complex64::new(0.0, -2.0)) + 90.0).abs() < 1e-12);
    }
}
