//! Document formats: the layout file, machine-readable analysis documents,
//! and the plot-ready pattern table.
//!
//! Exact quantities (positions, scales, sine offsets) travel as rational
//! strings — decimals parse exactly and values are written back in lowest
//! terms — so a document round-trip never loses precision.

use std::io::Write;

use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estimator::WpdpGrid;
use crate::geometry::SensorLayout;
use crate::identifiability::IdentifiabilityReport;
use crate::rational::{format_rational, parse_rational};
use crate::simulator::SweepPoint;

/// On-disk layout description: rational position strings plus an optional
/// explicit pair subset (1-based indices).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LayoutFile {
    pub positions: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pairs: Option<Vec<[usize; 2]>>,
}

/// Parse a layout document. Returns the layout and, when present, the pair
/// subset converted to 0-based indices.
#[allow(clippy::type_complexity)]
pub fn parse_layout_document(text: &str) -> Result<(SensorLayout, Option<Vec<(usize, usize)>>)> {
    let file: LayoutFile =
        serde_json::from_str(text).map_err(|e| Error::LayoutFile(format!("not valid JSON: {e}")))?;
    let mut positions = Vec::with_capacity(file.positions.len());
    for (i, p) in file.positions.iter().enumerate() {
        positions.push(
            parse_rational(p)
                .map_err(|_| Error::LayoutFile(format!("positions[{i}]: invalid rational {p:?}")))?,
        );
    }
    let layout = SensorLayout::new(positions)?;
    let pairs = match file.pairs {
        None => None,
        Some(raw) => {
            let mut converted = Vec::with_capacity(raw.len());
            for (i, [u, v]) in raw.iter().enumerate() {
                if *u == 0 || *v == 0 {
                    return Err(Error::LayoutFile(format!(
                        "pairs[{i}]: indices are 1-based, got [{u}, {v}]"
                    )));
                }
                converted.push((u - 1, v - 1));
            }
            Some(converted)
        }
    };
    Ok((layout, pairs))
}

/// Canonical layout document for a layout (positions in lowest terms).
pub fn layout_document(layout: &SensorLayout, pairs: Option<&[(usize, usize)]>) -> LayoutFile {
    LayoutFile {
        positions: layout.positions().iter().map(format_rational).collect(),
        pairs: pairs.map(|ps| ps.iter().map(|&(u, v)| [u + 1, v + 1]).collect()),
    }
}

/// Identifiability report in document form. Scales and sine offsets are
/// exact rational strings; integer vectors are plain numbers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub verdict: String,
    #[serde(rename = "D", skip_serializing_if = "Option::is_none")]
    pub primitive: Option<Vec<u64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c: Option<String>,
    #[serde(rename = "I", skip_serializing_if = "Option::is_none")]
    pub multiplier: Option<String>,
    pub q_max: Vec<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness_q: Option<Vec<u64>>,
    pub ambiguous_sine_offsets: Vec<String>,
    pub exact: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub approx_denominator_limit: Option<u64>,
}

fn to_u64s(values: &[num_bigint::BigUint]) -> Result<Vec<u64>> {
    values
        .iter()
        .map(|v| v.to_u64().ok_or(Error::NumericOverflow))
        .collect()
}

impl ReportDocument {
    pub fn from_report(report: &IdentifiabilityReport) -> Result<Self> {
        let (primitive, c, multiplier, exact, limit) = match &report.reduction {
            Some(r) => (
                Some(to_u64s(&r.primitive)?),
                Some(format_rational(&r.scale)),
                Some(format_rational(&r.multiplier())),
                r.exact,
                r.approx_denominator_limit,
            ),
            None => (None, None, None, report.distances.is_exact(), None),
        };
        Ok(Self {
            verdict: report.verdict.to_string(),
            primitive,
            c,
            multiplier,
            q_max: to_u64s(report.q_max.bounds())?,
            witness_q: report.witness_q.as_deref().map(to_u64s).transpose()?,
            ambiguous_sine_offsets: report
                .ambiguous_sine_offsets
                .iter()
                .map(format_rational)
                .collect(),
            exact,
            approx_denominator_limit: limit,
        })
    }
}

/// One row of an SNR sweep document. `snr_db` is a string so that `"inf"`
/// survives JSON.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub snr_db: String,
    pub rmse_rad: f64,
    pub trials_failed: usize,
}

/// SNR sweep document body.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepDocument {
    pub layout: Vec<String>,
    pub theta0: f64,
    pub grid_size: usize,
    pub trials: usize,
    pub seed: u64,
    pub results: Vec<SweepRow>,
}

pub fn format_snr_db(snr_db: f64) -> String {
    if snr_db == f64::INFINITY {
        "inf".to_string()
    } else if snr_db == f64::NEG_INFINITY {
        "-inf".to_string()
    } else {
        format!("{snr_db}")
    }
}

pub fn parse_snr_db(text: &str) -> Result<f64> {
    match text.trim() {
        "inf" | "+inf" | "Inf" => Ok(f64::INFINITY),
        "-inf" | "-Inf" => Ok(f64::NEG_INFINITY),
        t => t
            .parse::<f64>()
            .ok()
            .filter(|v| !v.is_nan())
            .ok_or_else(|| Error::InvalidParameter(format!("invalid SNR value {text:?}"))),
    }
}

impl SweepDocument {
    pub fn new(
        layout: &SensorLayout,
        theta0: f64,
        grid_size: usize,
        trials: usize,
        seed: u64,
        sweep: &[SweepPoint],
    ) -> Self {
        Self {
            layout: layout.positions().iter().map(format_rational).collect(),
            theta0,
            grid_size,
            trials,
            seed,
            results: sweep
                .iter()
                .map(|p| SweepRow {
                    snr_db: format_snr_db(p.snr_db),
                    rmse_rad: p.rmse_rad,
                    trials_failed: p.trials_failed,
                })
                .collect(),
        }
    }
}

/// One search result row.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchRow {
    pub positions: Vec<String>,
    pub aperture: String,
    pub verdict: String,
}

/// Layout search document body.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchDocument {
    pub n_sensors: usize,
    pub max_aperture: String,
    pub step: String,
    pub results: Vec<SearchRow>,
}

/// Write the pattern as a delimited table: optional `# `-prefixed preamble
/// lines, a `sine,psi_1..psi_M` header, then one row per grid point with 12
/// significant digits.
pub fn write_wpdp_table<W: Write>(
    grid: &WpdpGrid,
    preamble: Option<&str>,
    out: &mut W,
) -> std::io::Result<()> {
    if let Some(text) = preamble {
        for line in text.lines() {
            writeln!(out, "# {line}")?;
        }
    }
    write!(out, "sine")?;
    for i in 1..=grid.pair_count() {
        write!(out, ",psi_{i}")?;
    }
    writeln!(out)?;
    for (g, &s) in grid.sine_grid().iter().enumerate() {
        write!(out, "{}", sig12(s))?;
        for p in grid.row(g) {
            write!(out, ",{}", sig12(p.radians()))?;
        }
        writeln!(out)?;
    }
    Ok(())
}

/// 12 significant digits, scientific notation.
fn sig12(x: f64) -> String {
    format!("{x:.11e}")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::pair_distances;
    use crate::identifiability::check_identifiability;

    #[test]
    fn layout_documents_round_trip_exactly() {
        let text = r#"{ "positions": ["0", "3.6", "81/10"], "pairs": [[1, 2], [1, 3]] }"#;
        let (layout, pairs) = parse_layout_document(text).unwrap();
        assert_eq!(pairs, Some(vec![(0, 1), (0, 2)]));
        let doc = layout_document(&layout, pairs.as_deref());
        assert_eq!(doc.positions, vec!["0", "18/5", "81/10"]);
        assert_eq!(doc.pairs, Some(vec![[1, 2], [1, 3]]));
        let json = serde_json::to_string(&doc).unwrap();
        let (reparsed, _) = parse_layout_document(&json).unwrap();
        assert_eq!(reparsed, layout);
    }

    #[test]
    fn layout_parse_errors_name_the_field() {
        let err = parse_layout_document(r#"{ "positions": ["0", "x"] }"#).unwrap_err();
        assert!(matches!(&err, Error::LayoutFile(m) if m.contains("positions[1]")));
        let err = parse_layout_document(r#"{ "positions": ["0", "1"], "pairs": [[0, 1]] }"#)
            .unwrap_err();
        assert!(matches!(&err, Error::LayoutFile(m) if m.contains("pairs[0]")));
        assert!(parse_layout_document("not json").is_err());
    }

    #[test]
    fn report_document_for_the_unidentifiable_example() {
        let layout = SensorLayout::from_strs(&["0", "1.2", "6"]).unwrap();
        let report = check_identifiability(&layout, 1_000_000);
        let doc = ReportDocument::from_report(&report).unwrap();
        assert_eq!(doc.verdict, "unidentifiable");
        assert_eq!(doc.primitive, Some(vec![1, 5, 4]));
        assert_eq!(doc.c.as_deref(), Some("6/5"));
        assert_eq!(doc.multiplier.as_deref(), Some("5/6"));
        assert_eq!(doc.q_max, vec![1, 5, 4]);
        assert_eq!(doc.witness_q, Some(vec![1, 5, 4]));
        assert_eq!(doc.ambiguous_sine_offsets, vec!["5/3"]);
        assert!(doc.exact);
        let json = serde_json::to_string(&doc).unwrap();
        assert!(json.contains("\"D\":[1,5,4]"));
        assert!(json.contains("\"I\":\"5/6\""));
    }

    #[test]
    fn snr_strings_round_trip() {
        for (text, value) in [("inf", f64::INFINITY), ("10", 10.0), ("-3.5", -3.5)] {
            assert_eq!(parse_snr_db(text).unwrap(), value);
            assert_eq!(parse_snr_db(&format_snr_db(value)).unwrap(), value);
        }
        assert!(parse_snr_db("nan").is_err());
        assert!(parse_snr_db("ten").is_err());
    }

    #[test]
    fn wpdp_table_has_header_and_all_rows() {
        let layout = SensorLayout::from_strs(&["0", "3.6", "8.1"]).unwrap();
        let d = pair_distances(&layout);
        let grid = WpdpGrid::build(&d, 101).unwrap();
        let mut buf = Vec::new();
        write_wpdp_table(&grid, Some("manifest"), &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "# manifest");
        assert_eq!(lines[1], "sine,psi_1,psi_2,psi_3");
        assert_eq!(lines.len(), 2 + 101);
        // 12 significant digits in scientific notation.
        assert!(lines[2].split(',').all(|f| f.contains('e')));
    }
}
