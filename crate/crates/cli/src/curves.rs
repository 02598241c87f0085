//! CSV curves. Columns are drawn from
//! `r,alpha2,entropy,negativity_AB2,negativity_AB1`; a curve prints only
//! the columns it defines.

use std::io::Write;
use std::path::PathBuf;
use std::str::FromStr;

use catport_core::analysis::{channel_negativity_report, plane_entropy, teleportable_entanglement_range};
use catport_core::locc::enumerate;
use catport_core::protocol_math::overlap_frame;
use catport_core::protocols::{bob_labels, script_for, ChannelSpec, MeasurementOrder};
use catport_core::qstate::{entanglement_entropy, schmidt};
use clap::{Args, ValueEnum};
use rayon::prelude::*;

use crate::scenario::{overlap_pair, unit_interval, Family, Scenario};
use crate::CliError;

const MAX_POINTS: usize = 1_000_000;

/// `start:stop:step`, inclusive of `stop`.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid(Vec<f64>);

impl FromStr for Grid {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        let [start, stop, step] = parts.as_slice() else {
            return Err(format!("grid '{s}' is not start:stop:step"));
        };
        let num = |t: &str| t.trim().parse::<f64>().map_err(|_| format!("'{t}' in grid '{s}' is not a number"));
        let (start, stop, step) = (num(start)?, num(stop)?, num(step)?);
        if !(start.is_finite() && stop.is_finite() && step.is_finite()) {
            return Err(format!("grid '{s}' has non-finite bounds"));
        }
        if step <= 0.0 {
            return Err(format!("grid step must be positive, got {step}"));
        }
        if stop < start {
            return Err(format!("grid stop {stop} is below start {start}"));
        }
        let span = (stop - start) / step;
        if span >= MAX_POINTS as f64 {
            return Err(format!("grid '{s}' has more than {MAX_POINTS} points"));
        }
        let count = (span + 1e-9).floor() as usize + 1;
        let values = (0..count)
            .map(|i| {
                let v = start + i as f64 * step;
                if (v - stop).abs() < 1e-9 * step {
                    stop
                } else {
                    v
                }
            })
            .collect();
        Ok(Grid(values))
    }
}

impl Grid {
    pub fn values(&self) -> &[f64] {
        &self.0
    }

    fn within_unit(&self, name: &str) -> Result<(), CliError> {
        self.0.iter().try_for_each(|&v| unit_interval(name, v).map(|_| ()))
    }
}

fn cell(x: f64) -> String {
    let s = format!("{x:.12}");
    if s.starts_with('-') && s[1..].chars().all(|c| c == '0' || c == '.') {
        s[1..].to_owned()
    } else {
        s
    }
}

fn write_csv(out: Option<&PathBuf>, header: &[&str], rows: &[Vec<f64>]) -> Result<(), CliError> {
    let io = |e: std::io::Error| CliError::Usage(format!("cannot write CSV: {e}"));
    let sink: Box<dyn Write> = match out {
        Some(path) => Box::new(std::fs::File::create(path).map_err(io)?),
        None => Box::new(std::io::stdout().lock()),
    };
    let mut w = csv::Writer::from_writer(sink);
    let csv_err = |e: csv::Error| CliError::Usage(format!("cannot write CSV: {e}"));
    w.write_record(header).map_err(csv_err)?;
    for row in rows {
        w.write_record(row.iter().map(|&x| cell(x))).map_err(csv_err)?;
    }
    w.flush().map_err(io)
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long, value_enum, default_value = "ghz-class")]
    protocol: Family,
    /// Number of Bobs.
    #[arg(long = "n", alias = "N")]
    n: Option<usize>,
    /// Overlap of every φ pair (ignored for ghz).
    #[arg(long, default_value_t = 0.5)]
    r: f64,
    /// Several overlaps as start:stop:step; overrides --r.
    #[arg(long)]
    r_grid: Option<Grid>,
    #[arg(long, default_value_t = 0.0)]
    epsilon: f64,
    /// |α|² values as start:stop:step.
    #[arg(long, default_value = "0:1:0.01")]
    alpha2_grid: Grid,
    #[arg(long, default_value_t = 1e-10)]
    fidelity_tol: f64,
    /// Write the CSV here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Teleports `α|x⟩ + β|y⟩` for each grid point, checks every branch and
/// reports the entanglement of the last Bob with the others.
pub fn cmd_sweep(args: SweepArgs) -> Result<(), CliError> {
    args.alpha2_grid.within_unit("alpha2")?;
    let rs = match &args.r_grid {
        Some(g) => {
            g.within_unit("r")?;
            g.values().to_vec()
        }
        None => vec![unit_interval("r", args.r)?],
    };
    let with_r = args.protocol != Family::Ghz;
    let rs = if with_r { rs } else { vec![0.0] };
    let points: Vec<(f64, f64)> =
        rs.iter().flat_map(|&r| args.alpha2_grid.values().iter().map(move |&p| (r, p))).collect();

    let rows: Vec<Result<Vec<f64>, CliError>> = points
        .par_iter()
        .map(|&(r, p)| {
            let scenario = Scenario {
                protocol: Some(args.protocol),
                n: args.n,
                r: Some(r),
                epsilon: Some(args.epsilon),
                alpha2: Some(p),
                ..Scenario::default()
            };
            let (input, channel) = scenario.build()?;
            let protocol = script_for(&input, &channel, MeasurementOrder::AliceFirst)?;
            let branches = enumerate(&protocol)?;
            let mut entropy = None;
            for b in branches.iter().filter(|b| b.reachable && b.success) {
                let f = b.fidelity.unwrap_or(0.0);
                if f < 1.0 - args.fidelity_tol {
                    return Err(CliError::Failed(format!(
                        "r = {r}, alpha2 = {p}: branch {} has fidelity {f:.12}",
                        b.outcome_tuple()
                    )));
                }
                if entropy.is_none() {
                    if let Some(state) = &b.bob_state {
                        let last = bob_labels(input.n()).pop().expect("at least two Bobs");
                        let coefficients = schmidt(state, &[last]).map_err(|e| CliError::Failed(e.to_string()))?;
                        entropy = Some(entanglement_entropy(&coefficients));
                    }
                }
            }
            let e = entropy.ok_or_else(|| CliError::Failed(format!("r = {r}, alpha2 = {p}: no usable branch")))?;
            Ok(if with_r { vec![r, p, e] } else { vec![p, e] })
        })
        .collect();
    let rows = rows.into_iter().collect::<Result<Vec<_>, _>>()?;
    let header: &[&str] = if with_r { &["r", "alpha2", "entropy"] } else { &["alpha2", "entropy"] };
    write_csv(args.out.as_ref(), header, &rows)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Curve {
    /// N(A:B2) and N(A:B1) of the GHZ-class channel against r.
    Negativity,
    /// Largest entanglement in the teleportable plane against r.
    EMax,
    /// Entanglement of √p|φ0⟩ + √(1−p)|φ'1⟩ against p = |α|².
    Entropy,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    #[arg(long, value_enum)]
    curve: Curve,
    /// A single overlap.
    #[arg(long, conflicts_with = "r_grid")]
    r: Option<f64>,
    /// Overlaps as start:stop:step (default 0:1:0.1).
    #[arg(long)]
    r_grid: Option<Grid>,
    #[arg(long, default_value_t = 0.0)]
    epsilon: f64,
    /// |α|² values for the entropy curve.
    #[arg(long, default_value = "0:1:0.01")]
    alpha2_grid: Grid,
    /// Grid points in |α|² for the e-max search.
    #[arg(long, default_value_t = 10001)]
    points: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

pub fn cmd_analyze(args: AnalyzeArgs) -> Result<(), CliError> {
    let rs: Vec<f64> = match (&args.r, &args.r_grid) {
        (Some(r), _) => vec![*r],
        (None, Some(g)) => g.values().to_vec(),
        (None, None) => "0:1:0.1".parse::<Grid>().map_err(CliError::Usage)?.values().to_vec(),
    };
    for &r in &rs {
        unit_interval("r", r)?;
    }
    args.alpha2_grid.within_unit("alpha2")?;
    let epsilon = args.epsilon;

    let (header, rows): (&[&str], Vec<Result<Vec<f64>, CliError>>) = match args.curve {
        Curve::Negativity => (
            &["r", "negativity_AB2", "negativity_AB1"],
            rs.par_iter()
                .map(|&r| {
                    let (phi, prime) = overlap_pair(r, epsilon)?;
                    let report = channel_negativity_report(&ChannelSpec::ghz_class(phi, prime))?;
                    Ok(vec![r, report.alice_bob2, report.alice_bob1])
                })
                .collect(),
        ),
        Curve::EMax => (
            &["r", "entropy"],
            rs.par_iter()
                .map(|&r| {
                    let (phi, prime) = overlap_pair(r, epsilon)?;
                    let range = teleportable_entanglement_range(&overlap_frame(&phi, &prime), args.points)?;
                    Ok(vec![r, range.e_max])
                })
                .collect(),
        ),
        Curve::Entropy => {
            let points: Vec<(f64, f64)> =
                rs.iter().flat_map(|&r| args.alpha2_grid.values().iter().map(move |&p| (r, p))).collect();
            (
                &["r", "alpha2", "entropy"],
                points
                    .par_iter()
                    .map(|&(r, p)| {
                        let (phi, prime) = overlap_pair(r, epsilon)?;
                        Ok(vec![r, p, plane_entropy(&overlap_frame(&phi, &prime), p)])
                    })
                    .collect(),
            )
        }
    };
    let rows = rows.into_iter().collect::<Result<Vec<_>, _>>()?;
    write_csv(args.out.as_ref(), header, &rows)
}
