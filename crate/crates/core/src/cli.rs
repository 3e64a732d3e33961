//! `subpel` command line tool.
//!
//! Every command that writes files also writes `<output>.manifest.json`
//! with the command, its parameters, the library version and the run time.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::complexity::{
    measure_block_warp, reconcile, reference_grid, ComplexityReport, Rational, GRID_TAPS,
    PUBLISHED_MC, PUBLISHED_MOTION_DECODING,
};
use crate::error::{Error, Result};
use crate::filter_bank::{build_filter_table, FilterKind, FilterSpec};
use crate::frame::Frame;
use crate::frameio::{
    self, psnr, read_yuv, write_atomic, write_yuv, BitDepth, Chroma, RawVideoSpec,
};
use crate::motion::{read_mvf, write_mvf, MotionField, MotionVector, QuantSpec};
use crate::warp::{predict_bidir, warp_block, BlendWeights, MacCounter, WarpConfig};

#[derive(Debug, Parser)]
#[command(
    name = "subpel",
    version,
    about = "Sub-pixel motion compensation toolkit"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Dump a precomputed filter table as CSV.
    Filters(FiltersArgs),
    /// Warp one frame of a raw YUV file with a motion field.
    Warp(WarpArgs),
    /// Bi-directional prediction from two warped references.
    Predict(PredictArgs),
    /// Print the motion compensation complexity grid.
    Complexity(ComplexityArgs),
    /// Warp with several fractional precisions and compare the results.
    Quantsweep(QuantsweepArgs),
    /// Write a synthetic band-limited frame pair and the motion relating them.
    Synth(SynthArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(into = "String")]
pub struct Size {
    pub width: usize,
    pub height: usize,
}

impl From<Size> for String {
    fn from(s: Size) -> String {
        format!("{}x{}", s.width, s.height)
    }
}

impl FromStr for Size {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::config(format!("invalid size `{s}` (expected WxH)"));
        let (w, h) = s.split_once(['x', 'X']).ok_or_else(bad)?;
        let width: usize = w.trim().parse().map_err(|_| bad())?;
        let height: usize = h.trim().parse().map_err(|_| bad())?;
        if width == 0 || height == 0 {
            return Err(bad());
        }
        Ok(Size { width, height })
    }
}

fn parse_pair(s: &str) -> Result<(f64, f64)> {
    let bad = || Error::config(format!("invalid pair `{s}` (expected X,Y)"));
    let (a, b) = s.split_once(',').ok_or_else(bad)?;
    let a: f64 = a.trim().parse().map_err(|_| bad())?;
    let b: f64 = b.trim().parse().map_err(|_| bad())?;
    if !(a.is_finite() && b.is_finite()) {
        return Err(bad());
    }
    Ok((a, b))
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct FilterArgs {
    /// Filter family; defaults to poly for 2 and 4 taps, sinc otherwise.
    #[arg(long = "filter")]
    pub kind: Option<FilterKind>,
    #[arg(long, default_value_t = 8)]
    pub taps: usize,
    /// Number of fractional positions, or `inf` for unquantized motion.
    #[arg(long, default_value = "64")]
    pub delta: QuantSpec,
    /// Use the windowed sinc taps without rescaling them to unit sum.
    #[arg(long)]
    pub raw_sinc: bool,
}

impl FilterArgs {
    pub fn spec(&self) -> Result<FilterSpec> {
        match self.kind {
            None if !self.raw_sinc => FilterSpec::for_taps(self.taps),
            None => FilterSpec::new(FilterKind::WindowedSinc, self.taps, false),
            Some(kind) => FilterSpec::new(kind, self.taps, !self.raw_sinc),
        }
    }

    pub fn config(&self) -> Result<WarpConfig> {
        Ok(WarpConfig::new(self.spec()?, self.delta))
    }
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct VideoArgs {
    /// Frame size of the raw input, e.g. 1920x1080.
    #[arg(long)]
    pub size: Size,
    #[arg(long, default_value_t = 8)]
    pub bitdepth: u8,
    #[arg(long, default_value = "444")]
    pub chroma: String,
    /// Index of the frame to read from each input file.
    #[arg(long, default_value_t = 0)]
    pub frame: usize,
}

impl VideoArgs {
    pub fn spec(&self) -> Result<RawVideoSpec> {
        RawVideoSpec::new(
            self.size.width,
            self.size.height,
            BitDepth::from_bits(self.bitdepth)?,
            self.chroma.parse::<Chroma>()?,
            0,
        )
    }

    fn output_spec(&self) -> Result<RawVideoSpec> {
        Ok(RawVideoSpec {
            chroma: Chroma::Yuv444,
            frame_count: 1,
            ..self.spec()?
        })
    }

    fn read(&self, path: &Path) -> Result<Frame> {
        read_yuv(path, &self.spec()?, self.frame)
    }
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct FiltersArgs {
    #[arg(long = "filter")]
    pub kind: Option<FilterKind>,
    #[arg(long, default_value_t = 8)]
    pub taps: usize,
    #[arg(long, default_value_t = 64)]
    pub delta: u32,
    #[arg(long)]
    pub raw_sinc: bool,
    /// CSV output path.
    #[arg(long, visible_alias = "csv")]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct WarpArgs {
    #[arg(long = "ref")]
    pub reference: PathBuf,
    #[arg(long)]
    pub mvf: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    /// Frame to compare the warped output against.
    #[arg(long)]
    pub target: Option<PathBuf>,
    /// Expected block size of the motion field.
    #[arg(long)]
    pub block: Option<usize>,
    #[command(flatten)]
    pub filter: FilterArgs,
    #[command(flatten)]
    pub video: VideoArgs,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct PredictArgs {
    #[arg(long)]
    pub ref0: PathBuf,
    #[arg(long)]
    pub mvf0: PathBuf,
    #[arg(long)]
    pub ref1: PathBuf,
    #[arg(long)]
    pub mvf1: PathBuf,
    /// Weight of the first reference.
    #[arg(long, default_value_t = 0.5)]
    pub alpha: f64,
    #[arg(long)]
    pub target: Option<PathBuf>,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long)]
    pub block: Option<usize>,
    #[command(flatten)]
    pub filter: FilterArgs,
    #[command(flatten)]
    pub video: VideoArgs,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ComplexityArgs {
    /// Run instrumented warps and reconcile them with the model.
    #[arg(long)]
    pub measure: bool,
    /// Also write the grid as CSV.
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct QuantsweepArgs {
    #[arg(long = "ref")]
    pub reference: PathBuf,
    #[arg(long)]
    pub mvf: PathBuf,
    #[arg(long)]
    pub target: PathBuf,
    #[arg(long, value_delimiter = ',', default_value = "8,16,32,64,128")]
    pub deltas: Vec<u32>,
    #[arg(long)]
    pub csv: PathBuf,
    #[arg(long)]
    pub block: Option<usize>,
    #[arg(long = "filter")]
    pub kind: Option<FilterKind>,
    #[arg(long, default_value_t = 8)]
    pub taps: usize,
    #[command(flatten)]
    pub video: VideoArgs,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SynthArgs {
    #[arg(long, default_value = "64x64")]
    pub size: Size,
    /// Highest frequency as a fraction of Nyquist, in (0, 1).
    #[arg(long, default_value_t = 0.5)]
    pub cutoff: f64,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Content displacement `columns,rows` of the shifted frame.
    #[arg(long, default_value = "0.5,0.25", value_parser = parse_pair, allow_hyphen_values = true)]
    pub shift: (f64, f64),
    #[arg(long, default_value_t = 10)]
    pub bitdepth: u8,
    /// Block size of the written motion field.
    #[arg(long, default_value_t = 4)]
    pub block: usize,
    #[arg(long, default_value = ".")]
    pub out_dir: PathBuf,
}

#[derive(Debug, Serialize)]
pub struct RunManifest<'a, P: Serialize> {
    pub command: &'a str,
    pub version: &'a str,
    pub params: &'a P,
    pub outputs: Vec<String>,
    pub elapsed_ms: f64,
}

fn manifest_path(output: &Path) -> PathBuf {
    let mut name = output
        .file_name()
        .map(|n| n.to_os_string())
        .unwrap_or_default();
    name.push(".manifest.json");
    output.with_file_name(name)
}

fn write_manifest<P: Serialize>(
    command: &str,
    params: &P,
    outputs: &[&Path],
    started: Instant,
) -> Result<()> {
    let manifest = RunManifest {
        command,
        version: crate::VERSION,
        params,
        outputs: outputs.iter().map(|p| p.display().to_string()).collect(),
        elapsed_ms: started.elapsed().as_secs_f64() * 1e3,
    };
    let json = serde_json::to_vec_pretty(&manifest).expect("manifest serializes");
    for out in outputs {
        write_atomic(&manifest_path(out), &json)?;
    }
    Ok(())
}

fn check_block(field: &MotionField, expected: Option<usize>, path: &Path) -> Result<()> {
    match expected {
        Some(b) if b != field.block_size() => Err(Error::contract(format!(
            "{} has block size {}, expected {b}",
            path.display(),
            field.block_size()
        ))),
        _ => Ok(()),
    }
}

fn fmt_ratio(r: Rational) -> String {
    if r.is_integer() {
        r.to_integer().to_string()
    } else {
        format!("{}", *r.numer() as f64 / *r.denom() as f64)
    }
}

fn fmt_db(v: f64) -> String {
    if v.is_infinite() {
        "inf".into()
    } else {
        format!("{v:.4}")
    }
}

pub fn cmd_filters(args: &FiltersArgs, out: &mut dyn Write) -> Result<()> {
    let started = Instant::now();
    let spec = match args.kind {
        Some(kind) => FilterSpec::new(kind, args.taps, !args.raw_sinc)?,
        None if args.raw_sinc => FilterSpec::new(FilterKind::WindowedSinc, args.taps, false)?,
        None => FilterSpec::for_taps(args.taps)?,
    };
    let table = build_filter_table(spec, args.delta)?;
    let mut csv = String::from("kind,N,delta,q,s,i,h_i\n");
    for (q, filter) in table.filters().iter().enumerate() {
        for (i, h) in filter.coefficients.iter().enumerate() {
            writeln!(
                csv,
                "{},{},{},{q},{:.16e},{},{h:.16e}",
                spec.kind(),
                spec.taps(),
                table.delta(),
                filter.fraction,
                i + 1
            )
            .unwrap();
        }
    }
    write_atomic(&args.out, csv.as_bytes())?;
    write_manifest("filters", args, &[&args.out], started)?;
    writeln!(out, "{} coefficients", table.coefficient_count()).map_err(stdout_err)?;
    Ok(())
}

pub fn cmd_warp(args: &WarpArgs, out: &mut dyn Write) -> Result<()> {
    let started = Instant::now();
    let frame = args.video.read(&args.reference)?;
    let field = read_mvf(&args.mvf)?;
    check_block(&field, args.block, &args.mvf)?;
    let config = args.filter.config()?;
    let (warped, counter) = warp_block(&frame, &field, &config)?;
    write_yuv(&warped, &args.video.output_spec()?, &args.out)?;
    write_manifest("warp", args, &[&args.out], started)?;

    let per_plane = counter.per_pixel() / Rational::from_integer(frame.channels() as u64);
    writeln!(
        out,
        "MAC/pixel: {} ({} per plane-warp)",
        fmt_ratio(counter.per_pixel()),
        fmt_ratio(per_plane)
    )
    .map_err(stdout_err)?;
    if let Some(target) = &args.target {
        let q = psnr(&warped, &args.video.read(target)?)?;
        writeln!(out, "PSNR vs target: {} dB", fmt_db(q.psnr_avg)).map_err(stdout_err)?;
    }
    Ok(())
}

pub fn cmd_predict(args: &PredictArgs, out: &mut dyn Write) -> Result<()> {
    let started = Instant::now();
    let ref0 = args.video.read(&args.ref0)?;
    let ref1 = args.video.read(&args.ref1)?;
    let field0 = read_mvf(&args.mvf0)?;
    let field1 = read_mvf(&args.mvf1)?;
    check_block(&field0, args.block, &args.mvf0)?;
    check_block(&field1, args.block, &args.mvf1)?;
    let config = args.filter.config()?;
    let (pred, counter) = predict_bidir(
        &ref0,
        &field0,
        &ref1,
        &field1,
        &BlendWeights::Scalar(args.alpha),
        &config,
    )?;
    write_yuv(&pred, &args.video.output_spec()?, &args.out)?;
    write_manifest("predict", args, &[&args.out], started)?;
    writeln!(
        out,
        "MC complexity: {} MAC/pixel",
        fmt_ratio(counter.per_pixel())
    )
    .map_err(stdout_err)?;
    if let Some(target) = &args.target {
        let q = psnr(&pred, &args.video.read(target)?)?;
        writeln!(out, "PSNR vs target: {} dB", fmt_db(q.psnr_avg)).map_err(stdout_err)?;
    }
    Ok(())
}

/// Grid with optional measured counts, rows by block size.
pub fn complexity_grid(measure: bool) -> Result<Vec<Vec<ComplexityReport>>> {
    let mut grid = reference_grid();
    if measure {
        for row in &mut grid {
            for cell in row.iter_mut() {
                let counter = measure_block_warp(cell.n_taps, cell.block_size, 64)?;
                *cell = cell.clone().with_measured(&counter);
            }
        }
    }
    Ok(grid)
}

pub fn complexity_csv(grid: &[Vec<ComplexityReport>]) -> String {
    let mut csv = String::from("B,N,c2d_block,mc_bframe,measured\n");
    for cell in grid.iter().flatten() {
        writeln!(
            csv,
            "{},{},{},{},{}",
            cell.block_size,
            cell.n_taps,
            fmt_ratio(cell.c2d_block),
            fmt_ratio(cell.mc_total_bframe),
            cell.measured.map(fmt_ratio).unwrap_or_default()
        )
        .unwrap();
    }
    csv
}

pub fn complexity_text(grid: &[Vec<ComplexityReport>]) -> String {
    let mut s = String::new();
    writeln!(
        s,
        "Motion compensation, MAC per decoded pixel (B-frame, 6 plane warps)"
    )
    .unwrap();
    write!(s, "{:>4}", "B").unwrap();
    for n in GRID_TAPS {
        write!(s, "{:>10}", format!("N={n}")).unwrap();
    }
    writeln!(s, "{:>14}", "motion dec.*").unwrap();
    for (row, dec) in grid.iter().zip(PUBLISHED_MOTION_DECODING) {
        write!(s, "{:>4}", row[0].block_size).unwrap();
        for cell in row {
            write!(s, "{:>10}", cell.mc_total_rounded()).unwrap();
        }
        writeln!(s, "{dec:>14}").unwrap();
    }
    writeln!(
        s,
        "* motion decoder cost is published reference data, not computed here"
    )
    .unwrap();

    let mut notes = Vec::new();
    for (row, published) in grid.iter().zip(PUBLISHED_MC) {
        for (cell, p) in row.iter().zip(published) {
            let exact = cell.mc_total_bframe;
            if !exact.is_integer() {
                notes.push(format!(
                    "B={} N={}: exact {} is printed as {} (round half up; published {p})",
                    cell.block_size,
                    cell.n_taps,
                    fmt_ratio(exact),
                    cell.mc_total_rounded()
                ));
            } else if exact.to_integer() != p {
                notes.push(format!(
                    "B={} N={}: model gives {} but published value is {p}",
                    cell.block_size, cell.n_taps, exact
                ));
            }
        }
    }
    for note in notes {
        writeln!(s, "note: {note}").unwrap();
    }

    if grid.iter().flatten().any(|c| c.measured.is_some()) {
        writeln!(s, "\nMeasured per plane-warp (64x64 instrumented warps):").unwrap();
        for cell in grid.iter().flatten() {
            if let Some(m) = cell.measured {
                let ok = m == cell.c2d_block;
                writeln!(
                    s,
                    "  B={:<2} N={:<3} model {:>6}  measured {:>6}  {}",
                    cell.block_size,
                    cell.n_taps,
                    fmt_ratio(cell.c2d_block),
                    fmt_ratio(m),
                    if ok { "ok" } else { "MISMATCH" }
                )
                .unwrap();
            }
        }
    }
    s
}

pub fn cmd_complexity(args: &ComplexityArgs, out: &mut dyn Write) -> Result<()> {
    let started = Instant::now();
    let grid = complexity_grid(args.measure)?;
    out.write_all(complexity_text(&grid).as_bytes())
        .map_err(stdout_err)?;
    if let Some(path) = &args.csv {
        write_atomic(path, complexity_csv(&grid).as_bytes())?;
        write_manifest("complexity", args, &[path], started)?;
    }
    if args.measure {
        let failures: Vec<_> = grid
            .iter()
            .flatten()
            .filter(|c| {
                let m = c.measured.expect("measured");
                !reconcile(
                    c,
                    &MacCounter {
                        total_macs: *m.numer(),
                        pixels: *m.denom(),
                    },
                )
            })
            .collect();
        if !failures.is_empty() {
            return Err(Error::contract(format!(
                "{} cells failed MAC reconciliation",
                failures.len()
            )));
        }
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub quant: QuantSpec,
    pub psnr_vs_target: f64,
    pub psnr_vs_unquantized: f64,
}

/// Warps `frame` at every precision in `deltas` and at infinite precision.
pub fn quant_sweep(
    frame: &Frame,
    field: &MotionField,
    target: &Frame,
    spec: FilterSpec,
    deltas: &[u32],
) -> Result<Vec<SweepRow>> {
    if deltas.is_empty() {
        return Err(Error::config("empty delta list"));
    }
    let (reference, _) = warp_block(frame, field, &WarpConfig::new(spec, QuantSpec::Infinite))?;
    let mut quants = deltas
        .iter()
        .map(|&d| QuantSpec::finite(d))
        .collect::<Result<Vec<_>>>()?;
    quants.push(QuantSpec::Infinite);
    quants
        .into_iter()
        .map(|quant| {
            let (warped, _) = warp_block(frame, field, &WarpConfig::new(spec, quant))?;
            Ok(SweepRow {
                quant,
                psnr_vs_target: psnr(&warped, target)?.psnr_avg,
                psnr_vs_unquantized: psnr(&warped, &reference)?.psnr_avg,
            })
        })
        .collect()
}

pub fn cmd_quantsweep(args: &QuantsweepArgs, out: &mut dyn Write) -> Result<()> {
    let started = Instant::now();
    let frame = args.video.read(&args.reference)?;
    let target = args.video.read(&args.target)?;
    let field = read_mvf(&args.mvf)?;
    check_block(&field, args.block, &args.mvf)?;
    let spec = match args.kind {
        Some(kind) => FilterSpec::new(kind, args.taps, true)?,
        None => FilterSpec::for_taps(args.taps)?,
    };
    let rows = quant_sweep(&frame, &field, &target, spec, &args.deltas)?;
    let mut csv = String::from("delta,psnr_vs_target,psnr_vs_unquantized\n");
    for row in &rows {
        writeln!(
            csv,
            "{},{},{}",
            row.quant,
            fmt_db(row.psnr_vs_target),
            fmt_db(row.psnr_vs_unquantized)
        )
        .unwrap();
    }
    write_atomic(&args.csv, csv.as_bytes())?;
    write_manifest("quantsweep", args, &[&args.csv], started)?;
    out.write_all(csv.as_bytes()).map_err(stdout_err)?;
    Ok(())
}

pub fn cmd_synth(args: &SynthArgs, out: &mut dyn Write) -> Result<()> {
    let started = Instant::now();
    let Size { width, height } = args.size;
    let depth = BitDepth::from_bits(args.bitdepth)?;
    let spec = RawVideoSpec::new(width, height, depth, Chroma::Yuv444, 1)?;
    let render = |shift| -> Result<Frame> {
        let planes = (0..3u64)
            .map(|c| {
                let f = frameio::synth_bandlimited(
                    width,
                    height,
                    args.cutoff,
                    args.seed.wrapping_add(c),
                    shift,
                )?;
                Ok(f.into_planes().remove(0))
            })
            .collect::<Result<Vec<_>>>()?;
        Frame::new(width, height, planes, depth.bits())
    };
    let base = render((0.0, 0.0))?;
    let shifted = render(args.shift)?;
    // Backward warp: pixel (c, r) of `shifted` is `base` at (c - sx, r - sy).
    let field = MotionField::uniform(
        width,
        height,
        args.block,
        MotionVector::new(-args.shift.0, -args.shift.1),
    )?;

    std::fs::create_dir_all(&args.out_dir).map_err(|e| Error::io(&args.out_dir, e))?;
    let base_path = args.out_dir.join("base.yuv");
    let shifted_path = args.out_dir.join("shifted.yuv");
    let mvf_path = args.out_dir.join("motion.mvf");
    write_yuv(&base, &spec, &base_path)?;
    write_yuv(&shifted, &spec, &shifted_path)?;
    write_mvf(&field, &mvf_path)?;
    write_manifest(
        "synth",
        args,
        &[&base_path, &shifted_path, &mvf_path],
        started,
    )?;
    for p in [&base_path, &shifted_path, &mvf_path] {
        writeln!(out, "wrote {}", p.display()).map_err(stdout_err)?;
    }
    Ok(())
}

fn stdout_err(e: std::io::Error) -> Error {
    Error::io("<stdout>", e)
}

pub fn run(cli: &Cli, out: &mut dyn Write) -> Result<()> {
    match &cli.command {
        Command::Filters(a) => cmd_filters(a, out),
        Command::Warp(a) => cmd_warp(a, out),
        Command::Predict(a) => cmd_predict(a, out),
        Command::Complexity(a) => cmd_complexity(a, out),
        Command::Quantsweep(a) => cmd_quantsweep(a, out),
        Command::Synth(a) => cmd_synth(a, out),
    }
}

pub fn main_with_args<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(2)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let stdout = std::io::stdout();
    match run(&cli, &mut stdout.lock()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn size_and_pair_parsing() {
        assert_eq!(
            "1920x1080".parse::<Size>().unwrap(),
            Size {
                width: 1920,
                height: 1080
            }
        );
        assert!("1920".parse::<Size>().is_err());
        assert!("0x4".parse::<Size>().is_err());
        assert_eq!(parse_pair("0.5,-0.25").unwrap(), (0.5, -0.25));
        assert!(parse_pair("0.5").is_err());
    }

    #[test]
    fn filter_args_routing() {
        let a = FilterArgs {
            kind: None,
            taps: 4,
            delta: QuantSpec::Finite(64),
            raw_sinc: false,
        };
        assert_eq!(a.spec().unwrap().kind(), FilterKind::Polynomial);
        let a = FilterArgs { taps: 12, ..a };
        assert_eq!(a.spec().unwrap(), FilterSpec::sinc(12).unwrap());
        let a = FilterArgs {
            kind: Some(FilterKind::Polynomial),
            taps: 8,
            ..a
        };
        assert!(a.spec().is_err());
    }

    #[test]
    fn manifest_name() {
        assert_eq!(
            manifest_path(Path::new("a/b/out.yuv")),
            Path::new("a/b/out.yuv.manifest.json")
        );
    }

    #[test]
    fn complexity_text_flags_rounded_cell() {
        let text = complexity_text(&complexity_grid(false).unwrap());
        assert!(text.contains("   8        26        57       138       243"));
        assert!(text.contains("B=8 N=2: exact 25.5 is printed as 26"));
        assert!(!text.contains("published value is"));
        let csv = complexity_csv(&reference_grid());
        assert!(csv.starts_with("B,N,c2d_block,mc_bframe,measured\n"));
        assert!(csv.contains("\n4,8,30,180,\n"));
        assert!(csv.contains("\n8,2,4.25,25.5,\n"));
    }

    #[test]
    fn sweep_needs_deltas() {
        let f = Frame::filled(4, 4, 1, 0.5).unwrap();
        let field = MotionField::zeros(4, 4, 4).unwrap();
        assert!(quant_sweep(&f, &field, &f, FilterSpec::sinc(8).unwrap(), &[]).is_err());
    }
}
