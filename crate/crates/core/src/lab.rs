//! Experiment harness and file I/O: scaling sweeps over random ensembles,
//! RFC-4180 CSV tables, standalone SVG scaling plots, and the JSON matrix
//! interchange format.
//!
//! Reproducibility contract: a row at position `i` in the (n, g, trial)
//! enumeration order draws from streams `i·64 … i·64+63` of the configured
//! seed, so identical `(config, seed)` pairs yield byte-identical CSV files
//! regardless of timing. Each row runs in its own thread with a 60 s budget;
//! a timed-out or over-budget row is recorded as `timeout` rather than
//! aborting the batch.

use std::fmt;
use std::fs;
use std::path::Path;
use std::sync::mpsc;
use std::thread;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::channels::full_kraus_rank_index;
use crate::ensembles::{ginibre, haar_isometry_kraus, random_peps_tensor, random_su, RngSpec};
use crate::liespan::{lie_length, witt_lower_bound, LieGeneratingSystem, LieLengthValue};
use crate::numkernel::{CMatrix, Tolerance};
use crate::tensornets::{generic_injectivity_bound, peps_injective};
use crate::wordspan::{ceil_log, wie_length, worst_case_pair, GeneratingSystem, LengthValue};
use crate::{Error, Result};

/// Wall-clock budget per experiment row.
const ROW_BUDGET: Duration = Duration::from_secs(60);
/// Stream slots reserved per row (distinct samplers within one row).
const STREAMS_PER_ROW: u64 = 64;

/// Which quantity a sweep measures.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExperimentKind {
    /// Wie-length of g Ginibre matrices.
    WieScaling,
    /// Lie-length of g random su(n) elements.
    LieScaling,
    /// Full-Kraus-rank index of Haar-isometry channels.
    ChannelScaling,
    /// Smallest injective region side of random PEPS tensors.
    PepsGeneric,
    /// Wie-length of the worst-case catalog pair (deterministic, g = 2).
    WorstCase,
}

impl ExperimentKind {
    pub fn name(self) -> &'static str {
        match self {
            ExperimentKind::WieScaling => "wie-scaling",
            ExperimentKind::LieScaling => "lie-scaling",
            ExperimentKind::ChannelScaling => "channel-scaling",
            ExperimentKind::PepsGeneric => "peps-generic",
            ExperimentKind::WorstCase => "worst-case",
        }
    }
}

#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub kind: ExperimentKind,
    pub n_range: Vec<usize>,
    pub g_range: Vec<usize>,
    pub trials: usize,
    pub seed: u64,
    pub tol: Option<Tolerance>,
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::InvalidArgument("trials must be >= 1".into()));
        }
        if self.n_range.is_empty() || self.g_range.is_empty() {
            return Err(Error::InvalidArgument("n_range and g_range must be non-empty".into()));
        }
        if self.n_range.iter().any(|&n| n < 2) {
            return Err(Error::InvalidArgument("every n must be >= 2".into()));
        }
        if self.g_range.iter().any(|&g| g < 1) {
            return Err(Error::InvalidArgument("every g must be >= 1".into()));
        }
        if let Some(t) = &self.tol {
            t.validate()?;
        }
        Ok(())
    }
}

/// Measured value of one row.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Observation {
    Value(usize),
    /// The sampled system does not (Wie-/Lie-)generate, or the PEPS tensor
    /// never becomes injective within its generic bound.
    NotGenerating,
    /// Row exceeded its wall-clock or memory budget.
    Timeout,
}

impl fmt::Display for Observation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Observation::Value(v) => write!(f, "{v}"),
            Observation::NotGenerating => write!(f, "inf"),
            Observation::Timeout => write!(f, "timeout"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExperimentRow {
    pub n: usize,
    pub g: usize,
    pub trial: usize,
    pub observed: Observation,
    pub lower_bound: usize,
    pub upper_bound_generic: usize,
    pub wall_ms: u64,
}

impl ExperimentRow {
    /// The bound sandwich that generic kinds must satisfy.
    pub fn within_bounds(&self) -> bool {
        match self.observed {
            Observation::Value(v) => self.lower_bound <= v && v <= self.upper_bound_generic,
            _ => false,
        }
    }
}

/// (counting lower bound, generic/reference upper bound) for one (kind, n, g).
fn bounds_for(kind: ExperimentKind, n: usize, g: usize) -> Result<(usize, usize)> {
    match kind {
        ExperimentKind::WieScaling | ExperimentKind::ChannelScaling => {
            Ok((ceil_log(g, n * n)?, 2 * ceil_log(g, n)?))
        }
        // The worst-case pair has g = 2; the generic bound is the reference
        // line it is expected to exceed, not an upper bound.
        ExperimentKind::WorstCase => Ok((ceil_log(2, n * n)?, 2 * ceil_log(2, n)?)),
        // No generic upper bound is proved for the Lie case; the ambient
        // dimension caps the depth trivially.
        ExperimentKind::LieScaling => {
            Ok((witt_lower_bound(g as u64, n as u64)? as usize, n * n - 1))
        }
        ExperimentKind::PepsGeneric => {
            // Counting: injectivity at side L needs g^{L²} ≥ n^{4L}.
            let mut lower = 1usize;
            while (g as u128).pow((lower * lower) as u32) < (n as u128).pow(4 * lower as u32) {
                lower += 1;
            }
            Ok((lower, generic_injectivity_bound(n, g, 2)?))
        }
    }
}

/// Runs the measurement for one row. Streams `base … base+63` of `seed` are
/// reserved for this row's samplers.
fn observe(
    kind: ExperimentKind,
    n: usize,
    g: usize,
    seed: u64,
    base: u64,
    tol: &Tolerance,
) -> Result<Observation> {
    let spec = |j: u64| RngSpec::new(seed, base + j);
    match kind {
        ExperimentKind::WieScaling => {
            let mats = (0..g).map(|j| ginibre(n, &spec(j as u64))).collect();
            let rep = wie_length(&GeneratingSystem::new(mats)?, None, tol)?;
            Ok(match rep.value {
                LengthValue::Finite(k) => Observation::Value(k),
                LengthValue::NotGenerating => Observation::NotGenerating,
            })
        }
        ExperimentKind::LieScaling => {
            let elems = (0..g).map(|j| random_su(n, &spec(j as u64))).collect();
            let rep = lie_length(&LieGeneratingSystem::new(elems)?, None, tol)?;
            Ok(match rep.value {
                LieLengthValue::Finite(k) => Observation::Value(k),
                LieLengthValue::NotGenerating => Observation::NotGenerating,
            })
        }
        ExperimentKind::ChannelScaling => {
            let e = haar_isometry_kraus(n, g, &spec(0))?;
            let rep = full_kraus_rank_index(&e, tol)?;
            Ok(match rep.value {
                LengthValue::Finite(k) => Observation::Value(k),
                LengthValue::NotGenerating => Observation::NotGenerating,
            })
        }
        ExperimentKind::PepsGeneric => {
            let t = random_peps_tensor(n, g, &spec(0));
            let cap = generic_injectivity_bound(n, g, 2)?;
            for l in 1..=cap {
                if peps_injective(&t, l, tol)?.injective {
                    return Ok(Observation::Value(l));
                }
            }
            Ok(Observation::NotGenerating)
        }
        ExperimentKind::WorstCase => {
            let sys = worst_case_pair(n)?;
            let rep = wie_length(&sys, None, tol)?;
            Ok(match rep.value {
                LengthValue::Finite(k) => Observation::Value(k),
                LengthValue::NotGenerating => Observation::NotGenerating,
            })
        }
    }
}

/// Runs the configured sweep. Rows are enumerated in (n, g, trial) order;
/// each runs on its own thread under the 60 s budget, and over-budget rows
/// are recorded as [`Observation::Timeout`].
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<Vec<ExperimentRow>> {
    cfg.validate()?;
    let tol = cfg.tol.unwrap_or_default();
    let mut rows = Vec::new();
    let mut row_idx: u64 = 0;
    for &n in &cfg.n_range {
        for &g in &cfg.g_range {
            for trial in 0..cfg.trials {
                let (lower_bound, upper_bound_generic) = bounds_for(cfg.kind, n, g)?;
                let base = row_idx * STREAMS_PER_ROW;
                let (kind, seed) = (cfg.kind, cfg.seed);
                let (tx, rx) = mpsc::channel();
                let start = Instant::now();
                thread::spawn(move || {
                    let result = observe(kind, n, g, seed, base, &tol);
                    let _ = tx.send(result);
                });
                let observed = match rx.recv_timeout(ROW_BUDGET) {
                    Ok(Ok(obs)) => obs,
                    // Budget problems are row data; anything else aborts.
                    Ok(Err(Error::BudgetExceeded(_))) | Ok(Err(Error::CapExceeded { .. })) => {
                        Observation::Timeout
                    }
                    Ok(Err(e)) => return Err(e),
                    Err(_) => Observation::Timeout,
                };
                let wall_ms = start.elapsed().as_millis().min(u128::from(u64::MAX)) as u64;
                rows.push(ExperimentRow {
                    n,
                    g,
                    trial,
                    observed,
                    lower_bound,
                    upper_bound_generic,
                    wall_ms,
                });
                row_idx += 1;
            }
        }
    }
    Ok(rows)
}

fn io_ctx(path: &Path) -> impl Fn(std::io::Error) -> Error + '_ {
    move |source| Error::Io {
        path: path.display().to_string(),
        source,
    }
}

pub const CSV_HEADER: &str = "n,g,trial,observed,lower_bound,upper_bound_generic,wall_ms";

/// Writes rows as RFC-4180 CSV (CRLF line endings); `NotGenerating` is
/// encoded as the literal `inf`, a budget overrun as `timeout`.
pub fn emit_csv(rows: &[ExperimentRow], path: &Path) -> Result<()> {
    let mut out = String::new();
    out.push_str(CSV_HEADER);
    out.push_str("\r\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\r\n",
            r.n, r.g, r.trial, r.observed, r.lower_bound, r.upper_bound_generic, r.wall_ms
        ));
    }
    fs::write(path, out).map_err(io_ctx(path))
}

/// Parses a file produced by [`emit_csv`]; the round trip is exact.
pub fn parse_csv(path: &Path) -> Result<Vec<ExperimentRow>> {
    let text = fs::read_to_string(path).map_err(io_ctx(path))?;
    let mut lines = text.split("\r\n");
    let header = lines.next().unwrap_or("");
    if header != CSV_HEADER {
        return Err(Error::Parse {
            path: path.display().to_string(),
            msg: format!("unexpected header {header:?}"),
        });
    }
    let mut rows = Vec::new();
    for (lineno, line) in lines.enumerate() {
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 7 {
            return Err(Error::Parse {
                path: path.display().to_string(),
                msg: format!("line {}: expected 7 fields, got {}", lineno + 2, fields.len()),
            });
        }
        let num = |i: usize| -> Result<usize> {
            fields[i].parse().map_err(|_| Error::Parse {
                path: path.display().to_string(),
                msg: format!("line {}: bad integer {:?}", lineno + 2, fields[i]),
            })
        };
        let observed = match fields[3] {
            "inf" => Observation::NotGenerating,
            "timeout" => Observation::Timeout,
            _ => Observation::Value(num(3)?),
        };
        rows.push(ExperimentRow {
            n: num(0)?,
            g: num(1)?,
            trial: num(2)?,
            observed,
            lower_bound: num(4)?,
            upper_bound_generic: num(5)?,
            wall_ms: num(6)? as u64,
        });
    }
    Ok(rows)
}

/// Per-n summary used by the plot.
struct PlotPoint {
    n: usize,
    min: usize,
    median: f64,
    max: usize,
    lower: usize,
    upper: usize,
}

fn summarize(rows: &[ExperimentRow]) -> Vec<PlotPoint> {
    let mut ns: Vec<usize> = rows.iter().map(|r| r.n).collect();
    ns.sort_unstable();
    ns.dedup();
    let mut out = Vec::new();
    for n in ns {
        let group: Vec<&ExperimentRow> = rows.iter().filter(|r| r.n == n).collect();
        let mut vals: Vec<usize> = group
            .iter()
            .filter_map(|r| match r.observed {
                Observation::Value(v) => Some(v),
                _ => None,
            })
            .collect();
        if vals.is_empty() {
            continue;
        }
        vals.sort_unstable();
        let median = if vals.len() % 2 == 1 {
            vals[vals.len() / 2] as f64
        } else {
            (vals[vals.len() / 2 - 1] + vals[vals.len() / 2]) as f64 / 2.0
        };
        out.push(PlotPoint {
            n,
            min: vals[0],
            median,
            max: *vals.last().unwrap(),
            lower: group.iter().map(|r| r.lower_bound).min().unwrap(),
            upper: group.iter().map(|r| r.upper_bound_generic).max().unwrap(),
        });
    }
    out
}

/// Emits a standalone SVG scaling plot: per-n min–max whiskers with median
/// markers, plus reference curves for the counting lower bound (dashed) and
/// the generic upper bound (dotted).
pub fn emit_plot(rows: &[ExperimentRow], path: &Path) -> Result<()> {
    let points = summarize(rows);
    let (w, h) = (640.0_f64, 480.0_f64);
    let (ml, mr, mt, mb) = (60.0, 20.0, 30.0, 50.0);
    let xmin = points.first().map_or(0.0, |p| p.n as f64);
    let xmax = points.last().map_or(1.0, |p| p.n as f64).max(xmin + 1.0);
    let ymax = points
        .iter()
        .map(|p| p.max.max(p.upper))
        .max()
        .unwrap_or(1)
        .max(1) as f64;
    let xpos = |n: f64| ml + (n - xmin) / (xmax - xmin) * (w - ml - mr);
    let ypos = |v: f64| h - mb - v / ymax * (h - mt - mb);

    let mut svg = String::new();
    svg.push_str(&format!(
        "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n\
         <svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\" \
         viewBox=\"0 0 {w} {h}\">\n"
    ));
    svg.push_str(&format!(
        "<rect x=\"0\" y=\"0\" width=\"{w}\" height=\"{h}\" fill=\"white\"/>\n"
    ));
    // Axes.
    svg.push_str(&format!(
        "<line x1=\"{ml}\" y1=\"{0}\" x2=\"{1}\" y2=\"{0}\" stroke=\"black\"/>\n",
        h - mb,
        w - mr
    ));
    svg.push_str(&format!(
        "<line x1=\"{ml}\" y1=\"{mt}\" x2=\"{ml}\" y2=\"{}\" stroke=\"black\"/>\n",
        h - mb
    ));
    svg.push_str(&format!(
        "<text x=\"{}\" y=\"{}\" font-size=\"12\" text-anchor=\"middle\">n</text>\n",
        (ml + w - mr) / 2.0,
        h - 12.0
    ));
    svg.push_str(&format!(
        "<text x=\"14\" y=\"{}\" font-size=\"12\" text-anchor=\"middle\" \
         transform=\"rotate(-90 14 {0})\">observed length</text>\n",
        (mt + h - mb) / 2.0
    ));
    // Ticks.
    for p in &points {
        let x = xpos(p.n as f64);
        svg.push_str(&format!(
            "<line x1=\"{x}\" y1=\"{0}\" x2=\"{x}\" y2=\"{1}\" stroke=\"black\"/>\n\
             <text x=\"{x}\" y=\"{2}\" font-size=\"10\" text-anchor=\"middle\">{3}</text>\n",
            h - mb,
            h - mb + 5.0,
            h - mb + 18.0,
            p.n
        ));
    }
    let ystep = (ymax / 8.0).ceil().max(1.0);
    let mut yv = 0.0;
    while yv <= ymax {
        let y = ypos(yv);
        svg.push_str(&format!(
            "<line x1=\"{0}\" y1=\"{y}\" x2=\"{ml}\" y2=\"{y}\" stroke=\"black\"/>\n\
             <text x=\"{1}\" y=\"{2}\" font-size=\"10\" text-anchor=\"end\">{yv}</text>\n",
            ml - 5.0,
            ml - 8.0,
            y + 3.0
        ));
        yv += ystep;
    }
    // Reference curves.
    let polyline = |vals: Vec<(f64, f64)>, style: &str| -> String {
        let pts: Vec<String> = vals
            .iter()
            .map(|&(x, y)| format!("{:.2},{:.2}", xpos(x), ypos(y)))
            .collect();
        format!("<polyline points=\"{}\" fill=\"none\" {style}/>\n", pts.join(" "))
    };
    if !points.is_empty() {
        svg.push_str(&polyline(
            points.iter().map(|p| (p.n as f64, p.lower as f64)).collect(),
            "stroke=\"blue\" stroke-dasharray=\"6 3\"",
        ));
        svg.push_str(&polyline(
            points.iter().map(|p| (p.n as f64, p.upper as f64)).collect(),
            "stroke=\"red\" stroke-dasharray=\"2 3\"",
        ));
        svg.push_str(&polyline(
            points.iter().map(|p| (p.n as f64, p.median)).collect(),
            "stroke=\"black\"",
        ));
    }
    // Whiskers and median markers.
    for p in &points {
        let x = xpos(p.n as f64);
        svg.push_str(&format!(
            "<line x1=\"{x}\" y1=\"{:.2}\" x2=\"{x}\" y2=\"{:.2}\" stroke=\"black\"/>\n",
            ypos(p.min as f64),
            ypos(p.max as f64)
        ));
        svg.push_str(&format!(
            "<circle cx=\"{x}\" cy=\"{:.2}\" r=\"3\" fill=\"black\"/>\n",
            ypos(p.median)
        ));
    }
    // Legend.
    svg.push_str(&format!(
        "<text x=\"{0}\" y=\"{mt}\" font-size=\"10\" fill=\"blue\">counting lower bound</text>\n\
         <text x=\"{0}\" y=\"{1}\" font-size=\"10\" fill=\"red\">generic upper bound</text>\n\
         <text x=\"{0}\" y=\"{2}\" font-size=\"10\">median (min\u{2013}max whiskers)</text>\n",
        w - mr - 160.0,
        mt + 14.0,
        mt + 28.0
    ));
    svg.push_str("</svg>\n");
    fs::write(path, svg).map_err(io_ctx(path))
}

/// On-disk JSON schema for a tuple of complex matrices: complex entries are
/// `[re, im]` pairs, matrices are row-major nested arrays.
#[derive(Debug, Serialize, Deserialize)]
struct MatrixFile {
    n: usize,
    matrices: Vec<Vec<Vec<[f64; 2]>>>,
}

/// Reads a generating system from the JSON matrix format.
pub fn parse_matrices(path: &Path) -> Result<GeneratingSystem> {
    let text = fs::read_to_string(path).map_err(io_ctx(path))?;
    let file: MatrixFile = serde_json::from_str(&text).map_err(|e| Error::Parse {
        path: path.display().to_string(),
        msg: e.to_string(),
    })?;
    let n = file.n;
    let mut mats = Vec::with_capacity(file.matrices.len());
    for (mi, m) in file.matrices.iter().enumerate() {
        if m.len() != n || m.iter().any(|row| row.len() != n) {
            return Err(Error::Parse {
                path: path.display().to_string(),
                msg: format!("matrix {mi} is not {n}x{n}"),
            });
        }
        let entries = m
            .iter()
            .flatten()
            .map(|&[re, im]| num_complex::Complex64::new(re, im))
            .collect();
        let mat = CMatrix::new(n, n, entries).map_err(|e| Error::Parse {
            path: path.display().to_string(),
            msg: format!("matrix {mi}: {e}"),
        })?;
        mats.push(mat);
    }
    GeneratingSystem::new(mats)
}

/// Writes a generating system in the JSON matrix format (bit-exact round
/// trip with [`parse_matrices`]).
pub fn write_matrices(sys: &GeneratingSystem, path: &Path) -> Result<()> {
    let n = sys.n();
    let matrices = sys
        .mats()
        .iter()
        .map(|m| {
            (0..n)
                .map(|i| (0..n).map(|j| [m.get(i, j).re, m.get(i, j).im]).collect())
                .collect()
        })
        .collect();
    let file = MatrixFile { n, matrices };
    let text = serde_json::to_string_pretty(&file).expect("serializable");
    fs::write(path, text).map_err(io_ctx(path))
}
