//! Report schema and the three output formats.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use clap::ValueEnum;
use g2contact::chinea_gonzalez::{ClassId, ClassReport, NamedType, TheoremLedger};
use g2contact::three_structure::{KuoReport, ThreeCosymplecticReport};
use serde::{Deserialize, Serialize};

use crate::config::{Suite, Tolerances};
use crate::error::CliError;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub metadata: Metadata,
    pub assertions: Vec<Assertion>,
    /// `suite: name` of the first failing assertion.
    pub first_failure: Option<String>,
    pub algebra: Option<AlgebraSection>,
    /// One row per sample of `xi`, when a suite analyzed it.
    pub points: Vec<PointRow>,
    pub classify: Option<ClassifySection>,
    pub theorems: Option<TheoremLedger>,
    pub three_structure: Option<ThreeStructureSection>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.first_failure.is_none()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Metadata {
    pub tool: String,
    pub version: String,
    pub seed: u64,
    pub resolution: usize,
    pub subsamples: usize,
    pub suites: Vec<Suite>,
    pub tolerances: Tolerances,
    pub derivatives: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Bound {
    AtMost,
    AtLeast,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Assertion {
    pub suite: Suite,
    pub name: String,
    pub value: f64,
    pub bound: Bound,
    pub tolerance: f64,
    pub passed: bool,
}

impl Assertion {
    pub fn at_most(suite: Suite, name: &str, value: f64, tolerance: f64) -> Self {
        Self { suite, name: name.into(), value, bound: Bound::AtMost, tolerance, passed: value <= tolerance }
    }

    pub fn at_least(suite: Suite, name: &str, value: f64, tolerance: f64) -> Self {
        Self { suite, name: name.into(), value, bound: Bound::AtLeast, tolerance, passed: value >= tolerance }
    }

    pub fn label(&self) -> String {
        format!("{}: {}", self.suite, self.name)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AlgebraSection {
    pub cross_table: f64,
    pub metric_recovery: f64,
    pub random_samples: usize,
    pub double_cross: f64,
    pub four_term: f64,
    pub structure_axioms: f64,
    pub min_nondegeneracy: f64,
    /// Axiom residual of the structure induced by `xi` at the samples.
    pub field_axioms: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PointRow {
    pub index: usize,
    pub point: [f64; 7],
    pub alpha_norm: f64,
    pub invariants: [f64; 18],
    pub components: [f64; 12],
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassStat {
    pub class: ClassId,
    pub min: f64,
    pub max: f64,
    pub mean: f64,
}

/// Min, max and mean of each component norm over the rows.
pub fn class_stats<'a>(rows: impl IntoIterator<Item = &'a [f64; 12]>) -> Vec<ClassStat> {
    let mut min = [f64::MAX; 12];
    let mut max = [0.0f64; 12];
    let mut sum = [0.0f64; 12];
    let mut n = 0usize;
    for r in rows {
        for k in 0..12 {
            min[k] = min[k].min(r[k]);
            max[k] = max[k].max(r[k]);
            sum[k] += r[k];
        }
        n += 1;
    }
    ClassId::ALL
        .iter()
        .enumerate()
        .map(|(k, c)| ClassStat {
            class: *c,
            min: if n == 0 { 0.0 } else { min[k] },
            max: max[k],
            mean: if n == 0 { 0.0 } else { sum[k] / n as f64 },
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassifySection {
    pub components: Vec<ClassStat>,
    pub verdicts: ClassReport,
    pub most_specific: Vec<NamedType>,
    /// Largest decomposition residual relative to `max(1, |nabla omega|)`.
    pub max_residual: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StructureClasses {
    /// 1, 2 or 3.
    pub structure: usize,
    pub components: Vec<ClassStat>,
    pub verdicts: ClassReport,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThreeStructureSection {
    pub kuo: KuoReport,
    pub cosymplectic: ThreeCosymplecticReport,
    pub structures: Vec<StructureClasses>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

impl Format {
    pub fn file_name(self) -> &'static str {
        match self {
            Format::Json => "report.json",
            Format::Csv => "points.csv",
            Format::Text => "report.txt",
        }
    }
}

pub fn to_json(report: &Report) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("report is plain data");
    s.push('\n');
    s
}

pub fn from_json(text: &str) -> Result<Report, serde_json::Error> {
    serde_json::from_str(text)
}

/// `index, x1..x7, i1..i18, beta1..beta12`, 17 significant digits.
pub fn to_csv(report: &Report) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["index".to_string()];
    header.extend((1..=7).map(|k| format!("x{k}")));
    header.extend((1..=18).map(|k| format!("i{k}")));
    header.extend((1..=12).map(|k| format!("beta{k}")));
    w.write_record(&header).expect("in-memory write");
    for p in &report.points {
        let mut row = vec![p.index.to_string()];
        row.extend(p.point.iter().chain(&p.invariants).chain(&p.components).map(|v| format!("{v:.16e}")));
        w.write_record(&row).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("ascii")
}

fn stat_table(out: &mut String, stats: &[ClassStat]) {
    let _ = writeln!(out, "  {:<5} {:>12} {:>12} {:>12}", "class", "min", "max", "mean");
    for s in stats {
        let _ = writeln!(out, "  {:<5} {:>12.4e} {:>12.4e} {:>12.4e}", s.class.to_string(), s.min, s.max, s.mean);
    }
}

fn verdict_lines(out: &mut String, r: &ClassReport) {
    for v in &r.verdicts {
        let mark = if v.holds { "yes" } else { "no " };
        let _ = writeln!(out, "  {mark}  {:<24} worst {:.3e} (tol {:.0e})", v.name.name(), v.worst_ratio, v.tolerance);
    }
}

pub fn to_text(report: &Report) -> String {
    let m = &report.metadata;
    let mut out = String::new();
    let _ = writeln!(out, "{} {}", m.tool, m.version);
    let suites: Vec<&str> = m.suites.iter().map(|s| s.name()).collect();
    let _ = writeln!(
        out,
        "seed {}  resolution {}  subsamples {}  suites {}",
        m.seed,
        m.resolution,
        m.subsamples,
        suites.join(",")
    );
    let _ = writeln!(out, "\nassertions");
    for a in &report.assertions {
        let op = match a.bound {
            Bound::AtMost => "<=",
            Bound::AtLeast => ">=",
        };
        let status = if a.passed { "PASS" } else { "FAIL" };
        let _ = writeln!(out, "  {status}  {:<44} {:.3e} {op} {:.0e}", a.label(), a.value, a.tolerance);
    }
    if let Some(c) = &report.classify {
        let _ = writeln!(out, "\ncomponent norms |beta_i| over {} samples", report.points.len());
        stat_table(&mut out, &c.components);
        let _ = writeln!(out, "\nnamed types");
        verdict_lines(&mut out, &c.verdicts);
        let names: Vec<&str> = c.most_specific.iter().map(|t| t.name()).collect();
        let _ = writeln!(out, "  most specific: {}", if names.is_empty() { "none".into() } else { names.join(", ") });
    }
    if let Some(l) = &report.theorems {
        let f = &l.flags;
        let _ = writeln!(
            out,
            "\ntheorem ledger (divergence free {}, geodesic {}, normal {}, {} non-parallel samples)",
            f.divergence_free, f.geodesic, f.normal, f.non_parallel_points
        );
        for r in &l.rows {
            let _ = writeln!(out, "  {:<13} {:<28} {}", r.outcome.as_str(), r.name, r.detail);
        }
    }
    if let Some(t) = &report.three_structure {
        let k = &t.kuo;
        let _ = writeln!(out, "\n3-structure");
        let _ = writeln!(out, "  Kuo axioms max         {:.3e}", k.axioms_max());
        let _ = writeln!(out, "  xi3 printed identity   {:.3e}", k.xi3_printed);
        let _ = writeln!(out, "  xi3 normalized         {:.3e}", k.xi3_normalized);
        let _ = writeln!(out, "  phi3 vs xi3 x          {:.3e}", k.phi3_vs_cross);
        let _ = writeln!(out, "  min |u x v|            {:.3e}", k.min_cross_norm);
        let _ = writeln!(out, "  verdict                {}", t.cosymplectic.verdict());
        for s in &t.structures {
            let _ = writeln!(out, "\n  structure {} component norms", s.structure);
            stat_table(&mut out, &s.components);
        }
    }
    let _ = writeln!(
        out,
        "\n{}",
        match &report.first_failure {
            None => "all assertions pass".to_string(),
            Some(f) => format!("first failure: {f}"),
        }
    );
    out
}

pub fn render(report: &Report, format: Format) -> String {
    match format {
        Format::Json => to_json(report),
        Format::Csv => to_csv(report),
        Format::Text => to_text(report),
    }
}

/// Writes into `dir` (created if needed) or to stdout. Returns the path
/// written, if any.
pub fn emit(report: &Report, format: Format, dir: Option<&Path>) -> Result<Option<PathBuf>, CliError> {
    let body = render(report, format);
    match dir {
        Some(d) => {
            std::fs::create_dir_all(d).map_err(|e| CliError::Io(format!("{}: {e}", d.display())))?;
            let path = d.join(format.file_name());
            std::fs::write(&path, body).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
            Ok(Some(path))
        }
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(body.as_bytes()).map_err(|e| CliError::Io(e.to_string()))?;
            Ok(None)
        }
    }
}
