//! `tonalscape` command-line front end.
//!
//! Exit status: 0 on success, 1 on usage errors, 2 on input errors (unreadable
//! or malformed files, analyses that cannot run on the given input).

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, CommandFactory, Parser, Subcommand};
use tonalscape::analysis::DEFAULT_MAX_COLUMNS;
use tonalscape::pcdft::{phase_degrees, prototype_positions};
use tonalscape::render::{
    disk_file_name, render_disk_svg, render_wavescape_svg, wavescape_file_name, RenderOptions,
};
use tonalscape::trajectory::window_at_time;
use tonalscape::{
    analyze, parse_pc_text, serialize_bundle, AnalysisBundle, AnalysisConfig, ResolutionSpec,
    Weighting,
};

#[derive(Debug, Parser)]
#[command(
    name = "tonalscape",
    version,
    about = "Fourier analysis of pitch-class content in MIDI files"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run the full analysis and write the JSON bundle.
    Analyze {
        #[command(flatten)]
        input: InputArgs,
        /// Sliding-window length in segments.
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
        window: u64,
        /// Output file; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write wavescape SVGs.
    Wavescape {
        #[command(flatten)]
        input: InputArgs,
        /// Coefficients to draw: `1..6`, `3` or `3,5`.
        #[arg(short = 'k', long = "coefficients", default_value = "1..6", value_parser = parse_coefficients)]
        k: Coefficients,
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
        #[command(flatten)]
        render: RenderArgs,
    },
    /// Write one coefficient-disk SVG per coefficient.
    Disks {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
        window: u64,
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
        /// Mark the window nearest to this time, in seconds.
        #[arg(long, value_name = "SECONDS")]
        at: Option<f64>,
        #[command(flatten)]
        render: RenderArgs,
    },
    /// Print the coefficients of a pitch-class set such as "{0,4,7}".
    Set {
        /// Multiset `{0,4,7}` or weighted `0:2, 7:1`.
        text: String,
    },
}

#[derive(Debug, Args)]
struct InputArgs {
    /// Standard MIDI file (format 0 or 1).
    file: PathBuf,
    /// Segment length: a note value such as `1/8` or seconds such as `0.5s`.
    #[arg(long, default_value = "1/4")]
    resolution: ResolutionSpec,
    /// Most wavescape columns before adjacent segments are merged.
    #[arg(long, env = "TONALSCAPE_MAX_COLUMNS", default_value_t = DEFAULT_MAX_COLUMNS,
          value_parser = parse_positive)]
    max_columns: usize,
    /// Drop notes on MIDI channel 10.
    #[arg(long)]
    exclude_percussion: bool,
    /// `duration`, `onset` or `velocity-scaled`.
    #[arg(long, default_value = "duration")]
    weighting: Weighting,
}

#[derive(Debug, Args)]
struct RenderArgs {
    /// Image width in pixels.
    #[arg(long, default_value_t = 512)]
    width: u32,
    /// Leave out prototype labels on disks.
    #[arg(long)]
    no_prototypes: bool,
}

#[derive(Debug, Clone)]
struct Coefficients(Vec<usize>);

fn parse_positive(s: &str) -> Result<usize, String> {
    match s.trim().parse::<usize>() {
        Ok(0) | Err(_) => Err(format!("expected a positive integer, got '{s}'")),
        Ok(n) => Ok(n),
    }
}

fn parse_coefficients(s: &str) -> Result<Coefficients, String> {
    let one = |t: &str| match t.trim().parse::<usize>() {
        Ok(k @ 1..=6) => Ok(k),
        _ => Err(format!("coefficient must be 1 to 6, got '{}'", t.trim())),
    };
    let mut ks = Vec::new();
    for part in s.split(',') {
        match part.split_once("..") {
            Some((a, b)) => {
                let (a, b) = (one(a)?, one(b)?);
                if a > b {
                    return Err(format!("empty range '{part}'"));
                }
                ks.extend(a..=b);
            }
            None => ks.push(one(part)?),
        }
    }
    ks.sort_unstable();
    ks.dedup();
    Ok(Coefficients(ks))
}

impl InputArgs {
    fn config(&self, window: u64) -> AnalysisConfig {
        AnalysisConfig {
            resolution: self.resolution,
            window_len: window as usize,
            wavescape_max_columns: self.max_columns,
            include_percussion: !self.exclude_percussion,
            weighting: self.weighting,
            ..AnalysisConfig::default()
        }
    }

    fn run(&self, window: u64) -> Result<AnalysisBundle> {
        let bytes =
            fs::read(&self.file).with_context(|| format!("cannot read {}", self.file.display()))?;
        let mut bundle = analyze(&bytes, &self.config(window))
            .with_context(|| format!("cannot analyze {}", self.file.display()))?;
        bundle.metadata.file_name = self
            .file
            .file_name()
            .map(|n| n.to_string_lossy().into_owned());
        Ok(bundle)
    }

    fn stem(&self) -> String {
        self.file
            .file_stem()
            .map_or_else(|| "out".to_string(), |s| s.to_string_lossy().into_owned())
    }
}

/// Four decimals, with rounding residue such as `-0.0000` printed as zero.
fn fixed4(x: f64) -> String {
    let s = format!("{x:.4}");
    if s == "-0.0000" {
        "0.0000".into()
    } else {
        s
    }
}

fn write_file(dir: &Path, name: &str, contents: &str) -> Result<()> {
    let path = dir.join(name);
    fs::write(&path, contents).with_context(|| format!("cannot write {}", path.display()))
}

fn run(cmd: Command) -> Result<()> {
    match cmd {
        Command::Analyze { input, window, out } => {
            let json = serialize_bundle(&input.run(window)?);
            match out {
                Some(path) => fs::write(&path, json + "\n")
                    .with_context(|| format!("cannot write {}", path.display())),
                None => writeln!(std::io::stdout(), "{json}").context("cannot write to stdout"),
            }
        }
        Command::Wavescape {
            input,
            k,
            out_dir,
            render,
        } => {
            let bundle = input.run(1)?;
            fs::create_dir_all(&out_dir)
                .with_context(|| format!("cannot create {}", out_dir.display()))?;
            let opts = RenderOptions {
                width_px: render.width,
                ..RenderOptions::default()
            };
            let stem = input.stem();
            for k in k.0 {
                let m = bundle
                    .wavescape(k)
                    .expect("bundle holds all six wavescapes");
                write_file(
                    &out_dir,
                    &wavescape_file_name(&stem, k),
                    &render_wavescape_svg(m, &opts),
                )?;
            }
            Ok(())
        }
        Command::Disks {
            input,
            window,
            out_dir,
            at,
            render,
        } => {
            let bundle = input.run(window)?;
            fs::create_dir_all(&out_dir)
                .with_context(|| format!("cannot create {}", out_dir.display()))?;
            let marker_index = at
                .map(|t| window_at_time(&bundle.trajectory, t))
                .transpose()?;
            let opts = RenderOptions {
                width_px: render.width,
                show_prototypes: !render.no_prototypes,
                marker_index,
                ..RenderOptions::default()
            };
            let stem = input.stem();
            for k in 1..=6 {
                let protos = prototype_positions(k)?;
                let svg = render_disk_svg(k, &bundle.trajectory, &protos, &opts)?;
                write_file(&out_dir, &disk_file_name(&stem, k), &svg)?;
            }
            Ok(())
        }
        Command::Set { text } => {
            let v = parse_pc_text(&text).with_context(|| format!("cannot parse '{text}'"))?;
            let d = v.normalize().context("the set has no weight")?;
            let mut out = std::io::stdout().lock();
            writeln!(out, "k  magnitude  phase(deg)       re       im")?;
            for k in 1..=6 {
                let c = d.coefficient(k)?;
                writeln!(
                    out,
                    "{k}  {:>9}  {:>10}  {:>7}  {:>7}",
                    fixed4(c.norm()),
                    fixed4(phase_degrees(c)),
                    fixed4(c.re),
                    fixed4(c.im)
                )?;
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            // --help and --version
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let _ = e.print();
            if e.kind() != clap::error::ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand {
                let _ = writeln!(std::io::stderr(), "\n{}", Cli::command().render_help());
            }
            return ExitCode::from(1);
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let _ = writeln!(std::io::stderr(), "error: {e:#}");
            ExitCode::from(2)
        }
    }
}
