//! `nula` — identifiability analysis and DOA estimation for non-uniform
//! linear arrays, as a scriptable command line.
//!
//! Every command writes exactly one machine-readable document to stdout (or
//! `--out`); diagnostics go to stderr. `check` encodes its verdict in the
//! exit code so it works as a feasibility predicate in pipelines:
//! 0 identifiable (incl. by incommensurability), 2 unidentifiable,
//! 3 boundary-identifiable, 1 any error.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand};
use serde::Serialize;
use sha2::{Digest, Sha256};

use nula::estimator::WpdpGrid;
use nula::geometry::{pair_distances, pair_distances_subset, PairDistances, SensorLayout};
use nula::identifiability::{check_distances, search_identifiable_layouts, Verdict};
use nula::io::{
    format_snr_db, layout_document, parse_layout_document, parse_snr_db, write_wpdp_table,
    ReportDocument, SearchDocument, SearchRow, SweepDocument,
};
use nula::rational::{format_rational, parse_rational, rational_to_f64, DEFAULT_DENOMINATOR_LIMIT};
use nula::simulator::monte_carlo_rmse;

#[derive(Parser)]
#[command(
    name = "nula",
    version,
    about = "Identifiability analysis and DOA estimation for non-uniform linear arrays"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether a layout admits unambiguous single-source DOA
    /// estimation; the verdict is also the exit code (0/2/3).
    Check {
        /// Layout document (JSON with rational position strings).
        #[arg(long)]
        layout: PathBuf,
        /// Denominator bound for float-to-rational approximation.
        #[arg(long, default_value_t = DEFAULT_DENOMINATOR_LIMIT)]
        denominator_limit: u64,
        /// Write the document here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Export the wrapped phase-difference pattern as a plot-ready table.
    Wpdp {
        #[arg(long)]
        layout: PathBuf,
        /// Number of sine-grid points.
        #[arg(long, default_value_t = 4001)]
        grid: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Monte Carlo RMSE sweep of the snapshot -> phase -> match pipeline.
    Simulate {
        #[arg(long)]
        layout: PathBuf,
        /// Source direction: radians ("0.3047") or an exact sine ("asin:3/10").
        #[arg(long)]
        theta0: String,
        /// Comma-separated SNR list in dB; "inf" for noise-free.
        #[arg(long, value_delimiter = ',', required = true)]
        snr: Vec<String>,
        #[arg(long, default_value_t = 500)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 4001)]
        grid: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Enumerate identifiable layouts on a lattice, widest aperture first.
    Search {
        /// Number of sensors.
        #[arg(long)]
        sensors: usize,
        /// Largest aperture, as a rational literal ("8.1" or "81/10").
        #[arg(long)]
        max_aperture: String,
        /// Lattice step, as a rational literal.
        #[arg(long)]
        step: String,
        /// Maximum number of layouts to report.
        #[arg(long, default_value_t = 16)]
        limit: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Reproducibility header carried by every document.
#[derive(Serialize)]
struct RunManifest {
    command: String,
    version: String,
    parameters: serde_json::Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    input_sha256: Option<String>,
}

impl RunManifest {
    fn new(command: &str, parameters: serde_json::Value, input: Option<&[u8]>) -> Self {
        Self {
            command: command.to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            parameters,
            input_sha256: input.map(|bytes| {
                Sha256::digest(bytes)
                    .iter()
                    .map(|b| format!("{b:02x}"))
                    .collect()
            }),
        }
    }
}

#[derive(Serialize)]
struct Document<T: Serialize> {
    manifest: RunManifest,
    #[serde(flatten)]
    body: T,
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> anyhow::Result<u8> {
    match cli.command {
        Command::Check {
            layout,
            denominator_limit,
            out,
        } => cmd_check(&layout, denominator_limit, out.as_deref()),
        Command::Wpdp { layout, grid, out } => cmd_wpdp(&layout, grid, out.as_deref()),
        Command::Simulate {
            layout,
            theta0,
            snr,
            trials,
            seed,
            grid,
            out,
        } => cmd_simulate(&layout, &theta0, &snr, trials, seed, grid, out.as_deref()),
        Command::Search {
            sensors,
            max_aperture,
            step,
            limit,
            out,
        } => cmd_search(sensors, &max_aperture, &step, limit, out.as_deref()),
    }
}

fn read_layout(path: &Path) -> anyhow::Result<(Vec<u8>, SensorLayout, PairDistances)> {
    let bytes = fs::read(path).with_context(|| format!("cannot read {}", path.display()))?;
    let text = std::str::from_utf8(&bytes).context("layout file is not UTF-8")?;
    let (layout, pairs) = parse_layout_document(text)?;
    let distances = match &pairs {
        Some(subset) => pair_distances_subset(&layout, subset)?,
        None => pair_distances(&layout),
    };
    Ok((bytes, layout, distances))
}

fn emit(text: &str, out: Option<&Path>) -> anyhow::Result<()> {
    match out {
        Some(path) => {
            fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))?
        }
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
        }
    }
    Ok(())
}

fn emit_json<T: Serialize>(document: &T, out: Option<&Path>) -> anyhow::Result<()> {
    let mut text = serde_json::to_string_pretty(document)?;
    text.push('\n');
    emit(&text, out)
}

fn cmd_check(path: &Path, denominator_limit: u64, out: Option<&Path>) -> anyhow::Result<u8> {
    let (bytes, layout, distances) = read_layout(path)?;
    let report = check_distances(&distances, denominator_limit);

    #[derive(Serialize)]
    struct Body {
        positions: Vec<String>,
        report: ReportDocument,
    }
    let document = Document {
        manifest: RunManifest::new(
            "check",
            serde_json::json!({
                "layout": path.display().to_string(),
                "denominator_limit": denominator_limit,
            }),
            Some(&bytes),
        ),
        body: Body {
            positions: layout.positions().iter().map(format_rational).collect(),
            report: ReportDocument::from_report(&report)?,
        },
    };
    emit_json(&document, out)?;
    Ok(match report.verdict {
        Verdict::Identifiable | Verdict::IdentifiableByIncommensurability => 0,
        Verdict::Unidentifiable => 2,
        Verdict::BoundaryIdentifiable => 3,
    })
}

fn cmd_wpdp(path: &Path, grid_size: usize, out: Option<&Path>) -> anyhow::Result<u8> {
    let (bytes, _layout, distances) = read_layout(path)?;
    let grid = WpdpGrid::build(&distances, grid_size)?;
    let manifest = RunManifest::new(
        "wpdp",
        serde_json::json!({
            "layout": path.display().to_string(),
            "grid": grid_size,
        }),
        Some(&bytes),
    );
    let mut buffer = Vec::new();
    write_wpdp_table(&grid, Some(&serde_json::to_string(&manifest)?), &mut buffer)?;
    emit(std::str::from_utf8(&buffer)?, out)?;
    Ok(0)
}

fn parse_theta0(text: &str) -> anyhow::Result<f64> {
    if let Some(sine_text) = text.strip_prefix("asin:") {
        let sine = rational_to_f64(&parse_rational(sine_text)?);
        if sine.abs() >= 1.0 {
            bail!("theta0 sine {sine} lies outside (-1, 1)");
        }
        Ok(sine.asin())
    } else {
        text.parse::<f64>()
            .ok()
            .filter(|t| t.is_finite())
            .with_context(|| format!("invalid theta0 {text:?}; use radians or \"asin:p/q\""))
    }
}

fn cmd_simulate(
    path: &Path,
    theta0_text: &str,
    snr_texts: &[String],
    trials: usize,
    seed: u64,
    grid_size: usize,
    out: Option<&Path>,
) -> anyhow::Result<u8> {
    let (bytes, layout, distances) = read_layout(path)?;
    if distances.pair_count() != layout.sensor_count() * (layout.sensor_count() - 1) / 2 {
        eprintln!("note: simulate always uses the full pair set; the layout file's pair subset is ignored");
    }
    let theta0 = parse_theta0(theta0_text)?;
    let snr_db: Vec<f64> = snr_texts
        .iter()
        .map(|t| parse_snr_db(t))
        .collect::<nula::Result<_>>()?;
    if snr_db.is_empty() {
        bail!("at least one SNR value is required");
    }
    let sweep = monte_carlo_rmse(&layout, theta0, &snr_db, trials, grid_size, seed)?;

    #[derive(Serialize)]
    struct Body {
        sweep: SweepDocument,
    }
    let document = Document {
        manifest: RunManifest::new(
            "simulate",
            serde_json::json!({
                "layout": path.display().to_string(),
                "theta0": theta0,
                "snr_db": snr_db.iter().map(|&s| format_snr_db(s)).collect::<Vec<_>>(),
                "trials": trials,
                "seed": seed,
                "grid": grid_size,
            }),
            Some(&bytes),
        ),
        body: Body {
            sweep: SweepDocument::new(&layout, theta0, grid_size, trials, seed, &sweep),
        },
    };
    emit_json(&document, out)?;
    Ok(0)
}

fn cmd_search(
    sensors: usize,
    max_aperture_text: &str,
    step_text: &str,
    limit: usize,
    out: Option<&Path>,
) -> anyhow::Result<u8> {
    let max_aperture = parse_rational(max_aperture_text)?;
    let step = parse_rational(step_text)?;
    let results = search_identifiable_layouts(sensors, &max_aperture, &step, limit)?;

    #[derive(Serialize)]
    struct Body {
        search: SearchDocument,
    }
    let document = Document {
        manifest: RunManifest::new(
            "search",
            serde_json::json!({
                "sensors": sensors,
                "max_aperture": format_rational(&max_aperture),
                "step": format_rational(&step),
                "limit": limit,
            }),
            None,
        ),
        body: Body {
            search: SearchDocument {
                n_sensors: sensors,
                max_aperture: format_rational(&max_aperture),
                step: format_rational(&step),
                results: results
                    .iter()
                    .map(|(layout, aperture)| SearchRow {
                        positions: layout_document(layout, None).positions,
                        aperture: format_rational(aperture),
                        verdict: check_distances(
                            &pair_distances(layout),
                            DEFAULT_DENOMINATOR_LIMIT,
                        )
                        .verdict
                        .to_string(),
                    })
                    .collect(),
            },
        },
    };
    emit_json(&document, out)?;
    Ok(0)
}
