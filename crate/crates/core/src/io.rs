//! CSV ingestion, JSON result documents and DOT graphs.
//!
//! Datasets are CSV files with a header row of channel names and one row
//! per observation. Result documents store every matrix row-major as maps
//! keyed by channel name, with `null` for undefined entries.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::info::SymbolDataset;
use crate::netinfer::{AnalysisMode, BenchmarkReport, ConfigSnapshot, NetworkResult};
use crate::physio::{BeatColumn, BeatSeries};
use crate::significance::LinkResult;
use crate::simgen::SweepPoint;
use crate::var::SeriesDataset;

/// Version of the JSON result layout.
pub const SCHEMA_VERSION: u32 = 1;

/// Matrix stored as `row name -> column name -> value`.
pub type NamedMatrix<T> = IndexMap<String, IndexMap<String, T>>;

/// Input of either analysis mode.
#[derive(Debug, Clone, PartialEq)]
pub enum Dataset {
    Symbols(SymbolDataset),
    Series(SeriesDataset),
}

fn parse_table<R: Read, T>(
    reader: R,
    parse: impl Fn(&str) -> std::result::Result<T, String>,
) -> Result<(Vec<String>, Vec<Vec<T>>)> {
    let mut csv = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(reader);
    let names: Vec<String> = csv.headers()?.iter().map(str::to_string).collect();
    for (k, name) in names.iter().enumerate() {
        if names[..k].contains(name) {
            return Err(Error::InvalidInput(format!(
                "duplicate column name {name:?}"
            )));
        }
    }
    let mut columns: Vec<Vec<T>> = names.iter().map(|_| Vec::new()).collect();
    for (row, record) in csv.records().enumerate() {
        let record = record?;
        for ((cell, col), name) in record.iter().zip(&mut columns).zip(&names) {
            let value = parse(cell).map_err(|message| Error::Parse {
                row: row + 1,
                column: name.clone(),
                message,
            })?;
            col.push(value);
        }
    }
    if columns.first().is_none_or(Vec::is_empty) {
        return Err(Error::InvalidInput("dataset has no rows".into()));
    }
    Ok((names, columns))
}

fn parse_symbol(cell: &str) -> std::result::Result<u32, String> {
    cell.parse::<u32>()
        .map_err(|_| format!("{cell:?} is not a non-negative integer symbol"))
}

fn parse_real(cell: &str) -> std::result::Result<f64, String> {
    let v: f64 = cell
        .parse()
        .map_err(|_| format!("{cell:?} is not a number"))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(format!("non-finite value {cell:?}"))
    }
}

/// Reads integer symbols; each alphabet size is the column maximum plus one.
pub fn read_symbols<R: Read>(reader: R) -> Result<SymbolDataset> {
    let (names, columns) = parse_table(reader, parse_symbol)?;
    SymbolDataset::from_columns(columns, names)
}

/// Reads finite real values.
pub fn read_series<R: Read>(reader: R) -> Result<SeriesDataset> {
    let (names, columns) = parse_table(reader, parse_real)?;
    SeriesDataset::new(columns, names)
}

pub fn read_dataset(path: &Path, mode: AnalysisMode) -> Result<Dataset> {
    let file = BufReader::new(File::open(path)?);
    Ok(match mode {
        AnalysisMode::Static => Dataset::Symbols(read_symbols(file)?),
        AnalysisMode::Dynamic => Dataset::Series(read_series(file)?),
    })
}

/// Reads beat-to-beat parameters. Headers are matched case-insensitively
/// against `HP, SP, DP, RA, MAP, ZMAX, LVET`; other columns are ignored.
pub fn read_beats<R: Read>(reader: R) -> Result<BeatSeries> {
    let (names, columns) = parse_table(reader, parse_real)?;
    let mut map = BTreeMap::new();
    for (name, values) in names.iter().zip(columns) {
        match BeatColumn::parse(name) {
            Some(col) => {
                if map.insert(col, values).is_some() {
                    return Err(Error::InvalidInput(format!("column {name:?} given twice")));
                }
            }
            None => log::warn!("ignoring beat column {name:?}"),
        }
    }
    BeatSeries::new(map)
}

pub fn read_beat_series(path: &Path) -> Result<BeatSeries> {
    read_beats(BufReader::new(File::open(path)?))
}

fn write_table<W: Write, T: std::fmt::Display>(
    writer: W,
    names: &[String],
    columns: &[Vec<T>],
) -> Result<()> {
    let mut csv = csv::Writer::from_writer(writer);
    csv.write_record(names)?;
    let n = columns.first().map_or(0, Vec::len);
    let mut row = Vec::with_capacity(columns.len());
    for k in 0..n {
        row.clear();
        row.extend(columns.iter().map(|c| c[k].to_string()));
        csv.write_record(&row)?;
    }
    csv.flush()?;
    Ok(())
}

pub fn write_symbols<W: Write>(writer: W, dataset: &SymbolDataset) -> Result<()> {
    write_table(writer, dataset.channel_names(), dataset.columns())
}

/// Writes values in shortest round-trip form, so reading back is exact.
pub fn write_series<W: Write>(writer: W, series: &SeriesDataset) -> Result<()> {
    write_table(writer, series.channel_names(), series.columns())
}

pub fn write_dataset(path: &Path, dataset: &Dataset) -> Result<()> {
    let file = BufWriter::new(File::create(path)?);
    match dataset {
        Dataset::Symbols(d) => write_symbols(file, d),
        Dataset::Series(s) => write_series(file, s),
    }
}

/// JSON form of a [`NetworkResult`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultDocument {
    pub schema_version: u32,
    pub mode: AnalysisMode,
    /// Always `"nats"`.
    pub units: String,
    pub channels: Vec<String>,
    pub seed: u64,
    pub config: ConfigSnapshot,
    pub is: NamedMatrix<Option<f64>>,
    pub cis: NamedMatrix<Option<f64>>,
    pub nis: NamedMatrix<Option<f64>>,
    pub b: NamedMatrix<Option<f64>>,
    pub is_significant: NamedMatrix<Option<bool>>,
    pub cis_significant: NamedMatrix<Option<bool>>,
    pub adjacency: NamedMatrix<bool>,
    pub links: Vec<LinkResult>,
}

fn named<T: Clone>(names: &[String], m: &[Vec<T>]) -> NamedMatrix<T> {
    names
        .iter()
        .zip(m)
        .map(|(r, row)| {
            (
                r.clone(),
                names.iter().cloned().zip(row.iter().cloned()).collect(),
            )
        })
        .collect()
}

fn optional(m: Vec<Vec<f64>>) -> Vec<Vec<Option<f64>>> {
    m.into_iter()
        .map(|row| {
            row.into_iter()
                .map(|v| (!v.is_nan()).then_some(v))
                .collect()
        })
        .collect()
}

fn flags(result: &NetworkResult, f: impl Fn(&LinkResult) -> bool) -> Vec<Vec<Option<bool>>> {
    let m = result.m();
    let mut out = vec![vec![None; m]; m];
    for l in &result.links {
        out[l.i][l.j] = Some(f(l));
        out[l.j][l.i] = Some(f(l));
    }
    out
}

impl ResultDocument {
    pub fn from_result(result: &NetworkResult) -> Result<Self> {
        let names = &result.channel_names;
        for (k, name) in names.iter().enumerate() {
            if names[..k].contains(name) {
                return Err(Error::InvalidInput(format!(
                    "duplicate channel name {name:?}"
                )));
            }
        }
        Ok(Self {
            schema_version: SCHEMA_VERSION,
            mode: result.mode,
            units: "nats".into(),
            channels: names.clone(),
            seed: result.config.seed,
            config: result.config.clone(),
            is: named(names, &optional(result.is_matrix())),
            cis: named(names, &optional(result.cis_matrix())),
            nis: named(names, &optional(result.nis_matrix())),
            b: named(names, &optional(result.b_matrix())),
            is_significant: named(names, &flags(result, |l| l.is_significant)),
            cis_significant: named(names, &flags(result, |l| l.cis_significant)),
            adjacency: named(names, &result.adjacency),
            links: result.links.clone(),
        })
    }

    pub fn to_result(&self) -> Result<NetworkResult> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(Error::InvalidInput(format!(
                "unsupported schema version {}",
                self.schema_version
            )));
        }
        let adjacency = self
            .channels
            .iter()
            .map(|r| {
                self.channels
                    .iter()
                    .map(|c| self.adjacency.get(r).and_then(|row| row.get(c)).copied())
                    .collect::<Option<Vec<bool>>>()
            })
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| Error::InvalidInput("incomplete adjacency matrix".into()))?;
        Ok(NetworkResult {
            mode: self.mode,
            channel_names: self.channels.clone(),
            links: self.links.clone(),
            adjacency,
            config: self.config.clone(),
        })
    }

    /// Dense matrix with NaN for `null`.
    pub fn dense(matrix: &NamedMatrix<Option<f64>>) -> Vec<Vec<f64>> {
        matrix
            .values()
            .map(|row| row.values().map(|v| v.unwrap_or(f64::NAN)).collect())
            .collect()
    }
}

pub fn write_result_json<W: Write>(writer: W, result: &NetworkResult) -> Result<()> {
    let mut writer = writer;
    serde_json::to_writer_pretty(&mut writer, &ResultDocument::from_result(result)?)?;
    writeln!(writer)?;
    Ok(())
}

pub fn read_result_json<R: Read>(reader: R) -> Result<ResultDocument> {
    Ok(serde_json::from_reader(reader)?)
}

fn dot_id(name: &str) -> String {
    format!("\"{}\"", name.replace('\\', "\\\\").replace('"', "\\\""))
}

/// Undirected graph of the connected links. Edges are red for positive B,
/// blue for negative B and black for B = 0, with pen width `5 |B|` (at
/// least 0.5 so that balanced links stay visible).
pub fn result_dot(result: &NetworkResult) -> String {
    let mut out = String::from("graph network {\n  node [shape=circle];\n");
    for name in &result.channel_names {
        let _ = writeln!(out, "  {};", dot_id(name));
    }
    for l in result.links.iter().filter(|l| l.is_connected()) {
        let b = l.b();
        let color = if b > 0.0 {
            "red"
        } else if b < 0.0 {
            "blue"
        } else {
            "black"
        };
        let _ = writeln!(
            out,
            "  {} -- {} [color={color}, penwidth={:.3}, label=\"{b:.3}\"];",
            dot_id(&result.channel_names[l.i]),
            dot_id(&result.channel_names[l.j]),
            (5.0 * b.abs()).max(0.5),
        );
    }
    out.push_str("}\n");
    out
}

/// Writes the JSON document and, if requested, the DOT graph.
pub fn write_result(
    result: &NetworkResult,
    json_path: &Path,
    dot_path: Option<&Path>,
) -> Result<()> {
    write_result_json(BufWriter::new(File::create(json_path)?), result)?;
    if let Some(dot) = dot_path {
        std::fs::write(dot, result_dot(result))?;
    }
    Ok(())
}

/// Metadata written next to a simulated dataset.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationSidecar {
    pub schema_version: u32,
    pub system: String,
    pub params: serde_json::Value,
    pub seed: u64,
    pub n: usize,
    pub channels: Vec<String>,
    pub truth: NamedMatrix<bool>,
}

impl SimulationSidecar {
    pub fn new<P: Serialize>(
        system: &str,
        params: &P,
        seed: u64,
        channels: &[String],
        truth: &[Vec<bool>],
        n: usize,
    ) -> Result<Self> {
        Ok(Self {
            schema_version: SCHEMA_VERSION,
            system: system.into(),
            params: serde_json::to_value(params)?,
            seed,
            n,
            channels: channels.to_vec(),
            truth: named(channels, truth),
        })
    }
}

pub fn write_json<W: Write, T: Serialize>(writer: W, value: &T) -> Result<()> {
    let mut writer = writer;
    serde_json::to_writer_pretty(&mut writer, value)?;
    writeln!(writer)?;
    Ok(())
}

/// One row per `(n, parameter)` point.
pub fn write_benchmark_csv<W: Write>(writer: W, report: &BenchmarkReport) -> Result<()> {
    let mut csv = csv::Writer::from_writer(writer);
    csv.write_record([
        "scenario",
        "n",
        "parameter",
        "runs",
        "failed_runs",
        "tp",
        "fp",
        "tn",
        "fn",
        "sensitivity",
        "specificity",
    ])?;
    for r in &report.rows {
        csv.write_record([
            report.scenario.clone(),
            r.n.to_string(),
            r.parameter.map_or(String::new(), |p| p.to_string()),
            r.runs.to_string(),
            r.failed_runs.to_string(),
            r.counts.tp.to_string(),
            r.counts.fp.to_string(),
            r.counts.tn.to_string(),
            r.counts.fn_.to_string(),
            r.sensitivity.to_string(),
            r.specificity.to_string(),
        ])?;
    }
    csv.flush()?;
    Ok(())
}

/// Exact three-node curves: the swept parameter, then IS, cIS, nIS and B of
/// each link. Information values are multiplied by `scale` (B is not).
pub fn write_sweep_csv<W: Write>(
    writer: W,
    parameter: &str,
    points: &[SweepPoint],
    scale: f64,
) -> Result<()> {
    let mut csv = csv::Writer::from_writer(writer);
    let mut header = vec![parameter.to_string()];
    if let Some(first) = points.first() {
        for l in &first.measures.links {
            for measure in ["IS", "cIS", "nIS", "B"] {
                header.push(format!("{measure}_S{}_S{}", l.i + 1, l.j + 1));
            }
        }
    }
    csv.write_record(&header)?;
    for p in points {
        let mut row = vec![p.parameter.to_string()];
        for l in &p.measures.links {
            row.push((l.is_value * scale).to_string());
            row.push((l.cis_value * scale).to_string());
            row.push((l.nis_value * scale).to_string());
            row.push(if l.b_index.is_nan() {
                String::new()
            } else {
                l.b_index.to_string()
            });
        }
        csv.write_record(&row)?;
    }
    csv.flush()?;
    Ok(())
}
