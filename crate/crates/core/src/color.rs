//! Phase-to-hue color wheel with magnitude as opacity.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::pcdft::ZERO_MAGNITUDE;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Rgba {
    pub r: u8,
    pub g: u8,
    pub b: u8,
    pub a: u8,
}

impl Rgba {
    pub const WHITE: Self = Self::opaque(255, 255, 255);
    pub const BLACK: Self = Self::opaque(0, 0, 0);
    pub const TRANSPARENT: Self = Self {
        r: 0,
        g: 0,
        b: 0,
        a: 0,
    };

    pub const fn opaque(r: u8, g: u8, b: u8) -> Self {
        Self { r, g, b, a: 255 }
    }

    /// `#rrggbb`, ignoring alpha.
    pub fn hex(&self) -> String {
        format!("#{:02x}{:02x}{:02x}", self.r, self.g, self.b)
    }

    /// Alpha as a fraction in [0, 1].
    pub fn opacity(&self) -> f64 {
        f64::from(self.a) / 255.0
    }
}

/// Maps complex values in the unit disk to colors: phase picks the hue,
/// magnitude the alpha.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ColorWheel {
    /// Hue (degrees) given to phase 0.
    pub anchor_degrees: f64,
    /// Whether hue increases clockwise with phase.
    pub clockwise: bool,
}

impl Default for ColorWheel {
    fn default() -> Self {
        Self {
            anchor_degrees: 0.0,
            clockwise: false,
        }
    }
}

impl ColorWheel {
    /// Hue in degrees, in [0, 360).
    pub fn hue(&self, z: Complex64) -> f64 {
        if z.norm() < ZERO_MAGNITUDE {
            return self.anchor_degrees.rem_euclid(360.0);
        }
        let phase = z.im.atan2(z.re).to_degrees();
        let turned = if self.clockwise { -phase } else { phase };
        let hue = (turned + self.anchor_degrees).rem_euclid(360.0);
        // rem_euclid can round up to exactly 360.0 for tiny negative inputs.
        if hue >= 360.0 {
            0.0
        } else {
            hue
        }
    }

    pub fn color(&self, z: Complex64) -> Rgba {
        let (r, g, b) = hsv_to_rgb(self.hue(z), 1.0, 1.0);
        Rgba {
            r: channel(r),
            g: channel(g),
            b: channel(b),
            a: channel(z.norm().clamp(0.0, 1.0)),
        }
    }
}

/// Default wheel: phase 0 is red, hue runs counterclockwise.
pub fn phase_color(z: Complex64) -> Rgba {
    ColorWheel::default().color(z)
}

/// Scales [0, 1] to 0..=255, rounding half up.
fn channel(x: f64) -> u8 {
    (x * 255.0 + 0.5).floor().clamp(0.0, 255.0) as u8
}

/// `h` in degrees, `s` and `v` in [0, 1].
fn hsv_to_rgb(h: f64, s: f64, v: f64) -> (f64, f64, f64) {
    let c = v * s;
    let hp = h / 60.0;
    let x = c * (1.0 - (hp % 2.0 - 1.0).abs());
    let (r, g, b) = match hp as u32 {
        0 => (c, x, 0.0),
        1 => (x, c, 0.0),
        2 => (0.0, c, x),
        3 => (0.0, x, c),
        4 => (x, 0.0, c),
        _ => (c, 0.0, x),
    };
    let m = v - c;
    (r + m, g + m, b + m)
}
