//! File formats: the irreducible table, report JSON, the summary and
//! histogram CSVs, and a plain-text rendering of a report.

use std::fmt::Write as _;
use std::fs;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::experiment::{ResonanceReport, SCHEMA_VERSION};
use crate::field::FieldSpec;
use crate::poly::Poly;

/// A cached list of monic irreducibles of one degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IrreducibleTable {
    pub field: FieldSpec,
    pub degree: usize,
    pub polys: Vec<Poly>,
}

impl IrreducibleTable {
    pub fn file_name(q: u32, n: usize) -> String {
        format!("irr_q{q}_n{n}.txt")
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        let file = fs::File::create(path).map_err(|e| Error::io(path, e))?;
        let mut w = BufWriter::new(file);
        let mut body = format!(
            "q={} n={} count={}\n",
            self.field.q(),
            self.degree,
            self.polys.len()
        );
        for p in &self.polys {
            body.push_str(&p.to_coeff_string());
            body.push('\n');
        }
        w.write_all(body.as_bytes()).map_err(|e| Error::io(path, e))?;
        w.flush().map_err(|e| Error::io(path, e))
    }

    /// Reads and validates the header, degrees and count. Irreducibility is
    /// not rechecked.
    pub fn read(path: &Path) -> Result<IrreducibleTable> {
        let file = fs::File::open(path).map_err(|e| Error::io(path, e))?;
        let mut lines = BufReader::new(file).lines();
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse(format!("{}: empty file", path.display())))?
            .map_err(|e| Error::io(path, e))?;
        let (q, n, count) = parse_header(&header)?;
        let field = FieldSpec::new(q)?;
        let mut polys = Vec::with_capacity(count);
        for line in lines {
            let line = line.map_err(|e| Error::io(path, e))?;
            if line.trim().is_empty() {
                continue;
            }
            let p = Poly::parse(field, line.trim())?;
            if p.degree() != Some(n) || !p.is_monic() {
                return Err(Error::Parse(format!("{line:?} is not monic of degree {n}")));
            }
            polys.push(p);
        }
        if polys.len() != count {
            return Err(Error::Parse(format!(
                "{}: header says {count} polynomials, found {}",
                path.display(),
                polys.len()
            )));
        }
        Ok(IrreducibleTable { field, degree: n, polys })
    }
}

fn parse_header(line: &str) -> Result<(u64, usize, usize)> {
    let mut q = None;
    let mut n = None;
    let mut count = None;
    for part in line.split_whitespace() {
        let (k, v) = part
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("bad header field {part:?}")))?;
        let v: u64 = v
            .parse()
            .map_err(|_| Error::Parse(format!("bad header value {part:?}")))?;
        match k {
            "q" => q = Some(v),
            "n" => n = Some(v as usize),
            "count" => count = Some(v as usize),
            _ => return Err(Error::Parse(format!("unknown header key {k:?}"))),
        }
    }
    match (q, n, count) {
        (Some(q), Some(n), Some(c)) => Ok((q, n, c)),
        _ => Err(Error::Parse(format!("incomplete header {line:?}"))),
    }
}

/// Paths produced by [`write_report`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReportPaths {
    pub json: PathBuf,
    pub summary_csv: PathBuf,
    pub histogram_csv: PathBuf,
}

impl ReportPaths {
    /// `out.json`, `out.csv`, `out.histogram.csv` next to `out`.
    pub fn for_output(out: &Path) -> ReportPaths {
        let stem = out.with_extension("");
        let with = |suffix: &str| {
            let mut s = stem.clone().into_os_string();
            s.push(suffix);
            PathBuf::from(s)
        };
        ReportPaths {
            json: with(".json"),
            summary_csv: with(".csv"),
            histogram_csv: with(".histogram.csv"),
        }
    }
}

/// Writes the JSON report with its two CSV companions.
pub fn write_report(report: &ResonanceReport, out: &Path) -> Result<ReportPaths> {
    let paths = ReportPaths::for_output(out);
    let json = serde_json::to_string_pretty(report).map_err(|source| Error::Json {
        path: paths.json.clone(),
        source,
    })?;
    fs::write(&paths.json, json + "\n").map_err(|e| Error::io(&paths.json, e))?;
    write_summary_csv(std::slice::from_ref(report), &paths.summary_csv)?;
    write_histogram_csv(report, &paths.histogram_csv)?;
    Ok(paths)
}

pub fn read_report(path: &Path) -> Result<ResonanceReport> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let report: ResonanceReport = serde_json::from_str(&text).map_err(|source| Error::Json {
        path: path.to_path_buf(),
        source,
    })?;
    if report.schema_version != SCHEMA_VERSION {
        return Err(Error::Parse(format!(
            "{}: schema version {} (expected {SCHEMA_VERSION})",
            path.display(),
            report.schema_version
        )));
    }
    Ok(report)
}

pub const SUMMARY_COLUMNS: [&str; 9] = [
    "schema_version",
    "q",
    "g",
    "ratio",
    "max_abs_L",
    "mean_L",
    "theorem_bound",
    "fgh_value",
    "argmax_P",
];

/// One header row, then one row per run.
pub fn write_summary_csv(reports: &[ResonanceReport], path: &Path) -> Result<()> {
    let csv_err = |source| Error::Csv {
        path: path.to_path_buf(),
        source,
    };
    let mut w = csv::Writer::from_path(path).map_err(csv_err)?;
    w.write_record(SUMMARY_COLUMNS).map_err(csv_err)?;
    for r in reports {
        w.write_record([
            r.schema_version.to_string(),
            r.q.to_string(),
            r.g.to_string(),
            r.ratio.to_string(),
            r.max_abs_l.to_string(),
            r.mean_l.to_string(),
            r.theorem_bound.map(|b| b.to_string()).unwrap_or_default(),
            r.fgh_value.to_string(),
            r.argmax_p.clone(),
        ])
        .map_err(csv_err)?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

/// Columns `schema_version, lower, upper, count`.
pub fn write_histogram_csv(report: &ResonanceReport, path: &Path) -> Result<()> {
    let csv_err = |source| Error::Csv {
        path: path.to_path_buf(),
        source,
    };
    let mut w = csv::Writer::from_path(path).map_err(csv_err)?;
    w.write_record(["schema_version", "lower", "upper", "count"])
        .map_err(csv_err)?;
    let h = &report.histogram;
    for (i, c) in h.counts.iter().enumerate() {
        w.write_record([
            report.schema_version.to_string(),
            h.edges[i].to_string(),
            h.edges[i + 1].to_string(),
            c.to_string(),
        ])
        .map_err(csv_err)?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

fn yes_no(v: Option<bool>) -> &'static str {
    match v {
        Some(true) => "pass",
        Some(false) => "FAIL",
        None => "n/a",
    }
}

/// Human-readable summary of a report.
pub fn render_report(r: &ResonanceReport) -> String {
    let mut s = String::new();
    let mut row = |k: &str, v: String| {
        let _ = writeln!(s, "{k:<28} {v}");
    };
    row("q", r.q.to_string());
    row("genus", r.g.to_string());
    row("family degree", r.family_degree.to_string());
    row("family size", r.family_size.to_string());
    row("eps'", format!("{}", r.epsilon_prime.0));
    row("resonator mode", if r.resonator.params.is_asymptotic() { "asymptotic" } else { "explicit" }.into());
    row(
        "window degrees",
        r.resonator.window_degrees.map_or("empty".into(), |(lo, hi)| format!("{lo}..={hi}")),
    );
    row("group sizes", format!("{:?}", r.resonator.group_sizes));
    row("caps", format!("{:?}", r.resonator.caps));
    row("resonator set size", r.resonator.set_size.to_string());
    row("S1", format!("{:.10}", r.s1.0));
    row("S2", format!("{:.10}", r.s2.0));
    row("S2 / S1", format!("{:.10}", r.ratio.0));
    row("max |L(1/2)|", format!("{:.10}", r.max_abs_l.0));
    row("argmax P", r.argmax_p.clone());
    row("mean L(1/2)", format!("{:.10}", r.mean_l.0));
    row("mean |L(1/2)|", format!("{:.10}", r.mean_abs_l.0));
    row(
        "theorem bound",
        r.theorem_bound.map(|b| format!("{:.10}", b.0)).unwrap_or_else(|| "n/a".into()),
    );
    row("conjectured size", format!("{:.10}", r.fgh_value.0));
    row("A_N", format!("{:.10}", r.a_n.0));
    if let Some(d) = &r.decomposition {
        row("S1 square / non-square", format!("{:.6} / {:.6}", d.s1_square_part.0, d.s1_nonsquare_part.0));
        row("S2 square / non-square", format!("{:.6} / {:.6}", d.s2_square_part.0, d.s2_nonsquare_part.0));
        row("picked S21 / S22", format!("{:.6} / {:.6}", d.picked_s21.0, d.picked_s22.0));
    }
    let c = &r.checks;
    row("ratio <= max", yes_no(Some(c.ratio_at_most_max)).into());
    row("ratio >= mean", yes_no(Some(c.ratio_at_least_mean)).into());
    row("paths agree", yes_no(c.paths_agree).into());
    row("exact paths equal", yes_no(c.exact_paths_equal).into());
    row("split consistent", yes_no(c.split_consistent).into());
    row("positivity pick", yes_no(c.positivity_pick).into());
    row("Weil budget", yes_no(c.weil_budget_respected).into());
    row("square counts exact", yes_no(c.square_counts_exact).into());
    row("|set| <= N", yes_no(c.set_size_at_most_n).into());
    for w in &r.warnings {
        row("warning", w.clone());
    }
    if let Some(t) = &r.timings {
        row("workers", t.workers.to_string());
        row("seconds", format!("{:.3}", t.total_seconds.0));
    }
    s
}
