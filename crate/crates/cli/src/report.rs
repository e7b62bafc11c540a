//! Result writers: machine CSV/JSON at full precision and fixed-width
//! stdout tables with two decimals.

use std::collections::BTreeSet;
use std::io::Write;
use std::path::Path;

use serde::Serialize;

use lpboot_core::{CellRecord, CoverageReport, IntervalMethod};

use crate::error::{CliError, Result};
use crate::infer::InferReport;

/// Exact header of the study CSV.
pub const STUDY_CSV_HEADER: &str =
    "design,rho,n,h,method,coverage_pct,mc_se_pct,median_length,failed,seconds";

/// 17 significant digits; round-trips f64 exactly.
pub fn format_full(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn study_csv(report: &CoverageReport) -> Result<String> {
    if report.cells.is_empty() {
        return Err(CliError::EmptyReport);
    }
    let mut out = String::from(STUDY_CSV_HEADER);
    out.push('\n');
    for c in &report.cells {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{}\n",
            c.design,
            format_full(c.rho),
            c.n,
            c.h,
            c.method,
            format_full(100.0 * c.coverage_rate),
            format_full(100.0 * c.mc_se),
            format_full(c.median_length),
            c.failed_replications,
            format_full(c.wall_time),
        ));
    }
    Ok(out)
}

#[derive(Serialize)]
struct StudyCellJson {
    design: u8,
    rho: f64,
    n: usize,
    h: usize,
    method: String,
    coverage_pct: f64,
    mc_se_pct: f64,
    median_length: f64,
    failed: usize,
    seconds: f64,
}

pub fn study_json(report: &CoverageReport) -> Result<String> {
    if report.cells.is_empty() {
        return Err(CliError::EmptyReport);
    }
    let rows: Vec<StudyCellJson> = report
        .cells
        .iter()
        .map(|c| StudyCellJson {
            design: c.design,
            rho: c.rho,
            n: c.n,
            h: c.h,
            method: c.method.to_string(),
            coverage_pct: 100.0 * c.coverage_rate,
            mc_se_pct: 100.0 * c.mc_se,
            median_length: c.median_length,
            failed: c.failed_replications,
            seconds: c.wall_time,
        })
        .collect();
    Ok(serde_json::to_string_pretty(&rows).expect("plain structs serialize"))
}

pub fn write_if_some(path: Option<&Path>, content: &str) -> Result<()> {
    if let Some(path) = path {
        let mut f = std::fs::File::create(path)?;
        f.write_all(content.as_bytes())?;
    }
    Ok(())
}

/// Fixed-width coverage and median-length tables grouped by design then rho,
/// horizons ascending, one column per method.
pub fn render_study_table(report: &CoverageReport, level: f64) -> Result<String> {
    if report.cells.is_empty() {
        return Err(CliError::EmptyReport);
    }
    let methods: Vec<IntervalMethod> = {
        let mut seen = Vec::new();
        for c in &report.cells {
            if !seen.contains(&c.method) {
                seen.push(c.method);
            }
        }
        seen
    };
    let designs: BTreeSet<u8> = report.cells.iter().map(|c| c.design).collect();
    let n = report.cells[0].n;

    let mut out = String::new();
    type CellValue = fn(&CellRecord) -> f64;
    let sections: [(&str, CellValue); 2] = [
        ("Coverage probability (%)", |c| 100.0 * c.coverage_rate),
        ("Median interval length", |c| c.median_length),
    ];
    for (title, value) in sections {
        out.push_str(&format!(
            "{title}, nominal level {:.0}%, n = {n}\n",
            100.0 * level
        ));
        for &design in &designs {
            out.push_str(&format!("Design {design}\n"));
            out.push_str(&format!("{:>6} {:>4}", "rho", "h"));
            for m in &methods {
                out.push_str(&format!(" {:>9}", m.to_string()));
            }
            out.push('\n');
            let mut keys: Vec<(u64, usize)> = report
                .cells
                .iter()
                .filter(|c| c.design == design)
                .map(|c| (c.rho.to_bits(), c.h))
                .collect::<BTreeSet<_>>()
                .into_iter()
                .collect();
            keys.sort_by(|a, b| {
                f64::from_bits(a.0)
                    .total_cmp(&f64::from_bits(b.0))
                    .then(a.1.cmp(&b.1))
            });
            for (rho_bits, h) in keys {
                let rho = f64::from_bits(rho_bits);
                out.push_str(&format!("{rho:>6.2} {h:>4}"));
                for m in &methods {
                    let cell = report
                        .cell(design, rho, h, *m)
                        .expect("grid cells are complete");
                    out.push_str(&format!(" {:>9.2}", value(cell)));
                }
                out.push('\n');
            }
        }
        out.push('\n');
    }
    let failed: usize = report.cells.iter().map(|c| c.failed_replications).sum();
    if failed > 0 {
        out.push_str(&format!("warning: {failed} failed replications excluded\n"));
    }
    Ok(out)
}

/// Exact header of the infer CSV.
pub const INFER_CSV_HEADER: &str = "h,method,level,beta_hat,se,lower,upper";

pub fn infer_csv(report: &InferReport) -> Result<String> {
    if report.rows.is_empty() {
        return Err(CliError::EmptyReport);
    }
    let mut out = String::from(INFER_CSV_HEADER);
    out.push('\n');
    for r in &report.rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            r.h,
            r.method,
            format_full(r.level),
            format_full(r.beta_hat),
            format_full(r.se),
            format_full(r.lower),
            format_full(r.upper),
        ));
    }
    Ok(out)
}

#[derive(Serialize)]
struct InferRowJson {
    h: usize,
    method: String,
    level: f64,
    beta_hat: f64,
    se: f64,
    lower: f64,
    upper: f64,
}

pub fn infer_json(report: &InferReport) -> Result<String> {
    if report.rows.is_empty() {
        return Err(CliError::EmptyReport);
    }
    let rows: Vec<InferRowJson> = report
        .rows
        .iter()
        .map(|r| InferRowJson {
            h: r.h,
            method: r.method.to_string(),
            level: r.level,
            beta_hat: r.beta_hat,
            se: r.se,
            lower: r.lower,
            upper: r.upper,
        })
        .collect();
    Ok(serde_json::to_string_pretty(&rows).expect("plain structs serialize"))
}

pub fn render_infer_table(report: &InferReport) -> Result<String> {
    if report.rows.is_empty() {
        return Err(CliError::EmptyReport);
    }
    let mut out = format!(
        "Impulse response intervals, n = {}, level {:.0}%, full-sample AR slope {:.6}\n",
        report.n,
        100.0 * report.level,
        report.rho_hat
    );
    out.push_str(&format!(
        "{:>4} {:>9} {:>12} {:>12} {:>12} {:>12}\n",
        "h", "method", "estimate", "se", "lower", "upper"
    ));
    for r in &report.rows {
        out.push_str(&format!(
            "{:>4} {:>9} {:>12.6} {:>12.6} {:>12.6} {:>12.6}\n",
            r.h,
            r.method.to_string(),
            r.beta_hat,
            r.se,
            r.lower,
            r.upper
        ));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use lpboot_core::CellRecord;

    fn one_cell_report() -> CoverageReport {
        CoverageReport {
            cells: vec![CellRecord {
                design: 1,
                rho: 0.95,
                n: 95,
                h: 1,
                method: IntervalMethod::Rb,
                coverage_rate: 0.9004,
                mc_se: 0.0094,
                median_length: 0.35,
                failed_replications: 0,
                wall_time: 1.25,
            }],
        }
    }

    #[test]
    fn csv_has_header_plus_one_row() {
        let csv = study_csv(&one_cell_report()).unwrap();
        let lines: Vec<&str> = csv.trim_end().lines().collect();
        assert_eq!(lines.len(), 2);
        assert_eq!(lines[0], STUDY_CSV_HEADER);
        assert!(lines[1].starts_with("1,"));
    }

    #[test]
    fn empty_report_errors() {
        let empty = CoverageReport::default();
        assert!(matches!(study_csv(&empty), Err(CliError::EmptyReport)));
        assert!(matches!(study_json(&empty), Err(CliError::EmptyReport)));
        assert!(matches!(
            render_study_table(&empty, 0.9),
            Err(CliError::EmptyReport)
        ));
    }

    #[test]
    fn table_renders_two_decimals() {
        let table = render_study_table(&one_cell_report(), 0.9).unwrap();
        assert!(table.contains("90.04"), "{table}");
        assert!(table.contains("Design 1"), "{table}");
    }

    #[test]
    fn full_precision_round_trips() {
        for x in [0.9004, 1.0 / 3.0, 123456.789, 1e-17] {
            let s = format_full(x);
            assert_eq!(s.parse::<f64>().unwrap(), x, "{s}");
        }
    }

    #[test]
    fn csv_round_trips_numerically() {
        let report = one_cell_report();
        let csv = study_csv(&report).unwrap();
        let mut rdr = csv::Reader::from_reader(csv.as_bytes());
        let rec = rdr.records().next().unwrap().unwrap();
        assert_eq!(rec[1].parse::<f64>().unwrap(), 0.95);
        assert_eq!(rec[5].parse::<f64>().unwrap(), 100.0 * 0.9004);
        assert_eq!(rec[7].parse::<f64>().unwrap(), 0.35);
    }
}
