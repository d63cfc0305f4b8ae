//! Deterministic SVG output for wavescapes and coefficient disks.
//!
//! Every coordinate is written with four decimals so identical input always
//! produces byte-identical documents. The complex plane is drawn with the
//! real axis to the right and the imaginary axis up.

use std::fmt::Write as _;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::color::{phase_color, Rgba};
use crate::pcdft::{check_index, DftError, PrototypePoint};
use crate::trajectory::Trajectory;
use crate::wavescape::WavescapeMatrix;

/// Smallest accepted `width_px`; narrower requests are widened to this.
pub const MIN_WIDTH_PX: u32 = 64;

/// Number of chords approximating the colored rim of a disk.
const RIM_STEPS: usize = 180;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RenderError {
    #[error("prototype '{label}' belongs to coefficient {found}, expected {expected}")]
    MismatchedCoefficient {
        label: String,
        expected: usize,
        found: usize,
    },
    #[error(transparent)]
    Dft(#[from] DftError),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RenderOptions {
    pub width_px: u32,
    pub background: Rgba,
    pub show_prototypes: bool,
    /// Trajectory point to highlight with a white dot.
    pub marker_index: Option<usize>,
    pub label_font_size: f64,
}

impl Default for RenderOptions {
    fn default() -> Self {
        Self {
            width_px: 512,
            background: Rgba::WHITE,
            show_prototypes: true,
            marker_index: None,
            label_font_size: 10.0,
        }
    }
}

impl RenderOptions {
    fn width(&self) -> f64 {
        f64::from(self.width_px.max(MIN_WIDTH_PX))
    }
}

pub fn wavescape_file_name(stem: &str, k: usize) -> String {
    format!("{stem}.wavescape.k{k}.svg")
}

pub fn disk_file_name(stem: &str, k: usize) -> String {
    format!("{stem}.disk.k{k}.svg")
}

/// Fixed four-decimal formatting without negative zero.
fn num(x: f64) -> String {
    let s = format!("{x:.4}");
    if s == "-0.0000" {
        "0.0000".to_string()
    } else {
        s
    }
}

fn escape(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for c in text.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            _ => out.push(c),
        }
    }
    out
}

fn open_svg(out: &mut String, width: f64, height: f64, background: Rgba) {
    let (w, h) = (num(width), num(height));
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\">"
    );
    let _ = writeln!(
        out,
        "<rect class=\"background\" x=\"0\" y=\"0\" width=\"{w}\" height=\"{h}\" fill=\"{}\" fill-opacity=\"{}\"/>",
        background.hex(),
        num(background.opacity())
    );
}

fn fill_attrs(color: Option<Rgba>) -> String {
    match color {
        Some(c) => format!("fill=\"{}\" fill-opacity=\"{}\"", c.hex(), num(c.opacity())),
        None => "fill=\"none\"".to_string(),
    }
}

/// Cell outline in (segment, level) units: row `h` of column `i` spans the
/// windows starting in segment `i` and ending in segment `i + h`.
fn cell_outline(h: usize, i: usize) -> Vec<(f64, f64)> {
    let (h, i) = (h as f64, i as f64);
    if h == 0.0 {
        vec![(i, 0.0), (i + 0.5, 1.0), (i + 1.0, 0.0)]
    } else {
        vec![
            (i + h / 2.0, h),
            (i + (h + 1.0) / 2.0, h + 1.0),
            (i + 1.0 + h / 2.0, h),
            (i + (h + 1.0) / 2.0, h - 1.0),
        ]
    }
}

/// Triangular wavescape: bottom row per segment, apex for the whole piece.
///
/// Each cell is filled with [`phase_color`]; silent windows get `fill="none"`.
pub fn render_wavescape_svg(m: &WavescapeMatrix, opts: &RenderOptions) -> String {
    let width = opts.width();
    let height = width / 2.0;
    let n = m.n.max(1) as f64;
    let (sx, sy) = (width / n, height / n);

    let mut out = String::new();
    open_svg(&mut out, width, height, opts.background);
    let _ = writeln!(out, "<g class=\"wavescape\" id=\"wavescape-k{}\">", m.k);
    for (h, i, z) in m.cells() {
        let points: Vec<String> = cell_outline(h, i)
            .into_iter()
            .map(|(x, y)| format!("{},{}", num(x * sx), num(height - y * sy)))
            .collect();
        let color = (!m.is_zero_weight(h, i)).then(|| phase_color(z));
        let _ = writeln!(
            out,
            "<polygon class=\"cell\" points=\"{}\" {}/>",
            points.join(" "),
            fill_attrs(color)
        );
    }
    out.push_str("</g>\n</svg>\n");
    out
}

struct Disk {
    center: f64,
    radius: f64,
}

impl Disk {
    fn new(width: f64) -> Self {
        Self {
            center: width / 2.0,
            radius: width * 0.4,
        }
    }

    /// Device coordinates of `z`, pulled back onto the unit circle if outside.
    fn to_device(&self, z: Complex64) -> (f64, f64) {
        let r = z.norm();
        let z = if r > 1.0 { z / r } else { z };
        (
            self.center + self.radius * z.re,
            self.center - self.radius * z.im,
        )
    }
}

/// Unit disk for coefficient `k` with a hue rim, prototype labels, the
/// trajectory as polylines and an optional white marker.
pub fn render_disk_svg(
    k: usize,
    traj: &Trajectory,
    prototypes: &[PrototypePoint],
    opts: &RenderOptions,
) -> Result<String, RenderError> {
    check_index(k)?;
    if let Some(p) = prototypes.iter().find(|p| p.k != k) {
        return Err(RenderError::MismatchedCoefficient {
            label: p.label.clone(),
            expected: k,
            found: p.k,
        });
    }

    let width = opts.width();
    let disk = Disk::new(width);
    let (c, r) = (num(disk.center), num(disk.radius));
    let rim_width = num(width * 0.02);

    let mut out = String::new();
    open_svg(&mut out, width, width, opts.background);
    let _ = writeln!(out, "<g class=\"disk\" id=\"disk-k{k}\">");
    let _ = writeln!(
        out,
        "<circle class=\"unit-circle\" cx=\"{c}\" cy=\"{c}\" r=\"{r}\" fill=\"none\" stroke=\"#808080\" stroke-width=\"0.5000\"/>"
    );
    let _ = writeln!(
        out,
        "<line class=\"axis\" x1=\"{}\" y1=\"{c}\" x2=\"{}\" y2=\"{c}\" stroke=\"#c0c0c0\" stroke-width=\"0.5000\"/>",
        num(disk.center - disk.radius),
        num(disk.center + disk.radius)
    );
    let _ = writeln!(
        out,
        "<line class=\"axis\" x1=\"{c}\" y1=\"{}\" x2=\"{c}\" y2=\"{}\" stroke=\"#c0c0c0\" stroke-width=\"0.5000\"/>",
        num(disk.center - disk.radius),
        num(disk.center + disk.radius)
    );

    out.push_str("<g class=\"rim\">\n");
    let step = std::f64::consts::TAU / RIM_STEPS as f64;
    for s in 0..RIM_STEPS {
        let a0 = step * s as f64;
        let a1 = a0 + step;
        let (x1, y1) = disk.to_device(Complex64::from_polar(1.0, a0));
        let (x2, y2) = disk.to_device(Complex64::from_polar(1.0, a1));
        let color = phase_color(Complex64::from_polar(1.0, a0 + step / 2.0));
        let _ = writeln!(
            out,
            "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"{}\" stroke-width=\"{rim_width}\"/>",
            num(x1),
            num(y1),
            num(x2),
            num(y2),
            color.hex()
        );
    }
    out.push_str("</g>\n");

    if opts.show_prototypes {
        out.push_str("<g class=\"prototypes\">\n");
        let offset = opts.label_font_size * 0.4;
        for p in prototypes {
            let (x, y) = disk.to_device(p.position);
            let _ = writeln!(
                out,
                "<circle class=\"prototype\" cx=\"{}\" cy=\"{}\" r=\"2.0000\" fill=\"#000000\"/>",
                num(x),
                num(y)
            );
            let _ = writeln!(
                out,
                "<text class=\"label\" x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"{}\" fill=\"#000000\">{}</text>",
                num(x + offset),
                num(y - offset),
                num(opts.label_font_size),
                escape(&p.label)
            );
        }
        out.push_str("</g>\n");
    }

    // Silent windows break the path.
    let mut runs: Vec<Vec<(f64, f64)>> = vec![Vec::new()];
    for p in &traj.points {
        if p.zero_weight {
            runs.push(Vec::new());
        } else {
            runs.last_mut()
                .unwrap()
                .push(disk.to_device(p.coeffs[k - 1]));
        }
    }
    for run in runs.iter().filter(|r| r.len() >= 2) {
        let pts: Vec<String> = run
            .iter()
            .map(|&(x, y)| format!("{},{}", num(x), num(y)))
            .collect();
        let _ = writeln!(
            out,
            "<polyline class=\"trajectory\" points=\"{}\" fill=\"none\" stroke=\"#000000\" stroke-opacity=\"0.6000\" stroke-width=\"1.0000\"/>",
            pts.join(" ")
        );
    }

    if let Some(p) = opts
        .marker_index
        .and_then(|i| traj.points.get(i))
        .filter(|p| !p.zero_weight)
    {
        let (x, y) = disk.to_device(p.coeffs[k - 1]);
        let _ = writeln!(
            out,
            "<circle class=\"marker\" cx=\"{}\" cy=\"{}\" r=\"{}\" fill=\"#ffffff\" stroke=\"#000000\" stroke-width=\"1.0000\"/>",
            num(x),
            num(y),
            num(width * 0.012)
        );
    }

    out.push_str("</g>\n</svg>\n");
    Ok(out)
}
