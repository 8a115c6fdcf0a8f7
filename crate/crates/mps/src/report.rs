use std::fs;
use std::io;
use std::path::Path;

use micropolar::solver::{ContinuationCell, HomotopyPoint, SolveTrace};
use micropolar::verification::{DecayTable, LedgerReport, Shape};
use serde::Serialize;

pub const TRACE_HEADER: [&str; 9] =
    ["iter", "H1_u", "H1_w", "sqrtEps_H2_u", "sqrtEps_H2_w", "update_norm", "r_mom", "r_mic", "energy_gap"];
pub const LEDGER_HEADER: [&str; 4] = ["R", "term_name", "exact_value", "majorant_value"];

/// Shortest round-trip float text.
fn num(x: f64) -> String {
    format!("{x:e}")
}

fn opt(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

fn csv_error(e: csv::Error) -> io::Error {
    io::Error::new(io::ErrorKind::Other, e)
}

fn write_rows(path: &Path, header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> io::Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(csv_error)?;
    w.write_record(header).map_err(csv_error)?;
    for row in rows {
        w.write_record(&row).map_err(csv_error)?;
    }
    w.flush()
}

pub fn write_trace_csv(path: &Path, trace: &SolveTrace) -> io::Result<()> {
    let rows = trace.rows.iter().map(|r| {
        vec![
            r.iter.to_string(),
            num(r.h1_u),
            num(r.h1_w),
            num(r.sqrt_eps_h2_u),
            num(r.sqrt_eps_h2_w),
            num(r.update_norm),
            num(r.r_mom),
            num(r.r_mic),
            num(r.energy_gap),
        ]
    });
    write_rows(path, &TRACE_HEADER, rows)
}

/// One `left` row, then one row per term, for each report.
pub fn write_ledger_csv(path: &Path, reports: &[LedgerReport]) -> io::Result<()> {
    let rows = reports.iter().flat_map(|rep| {
        let r = opt(rep.radius);
        std::iter::once(vec![r.clone(), "left".into(), num(rep.left), String::new()])
            .chain(rep.terms.iter().map(move |t| vec![r.clone(), t.name.clone(), num(t.exact), opt(t.majorant)]))
    });
    write_rows(path, &LEDGER_HEADER, rows)
}

pub fn write_decay_csv(path: &Path, tables: &[(&str, &DecayTable)]) -> io::Result<()> {
    let mut rows = Vec::new();
    for (field, table) in tables {
        for col in &table.columns {
            let shape = match col.shape {
                Shape::Ball => "ball",
                Shape::Annulus => "annulus",
            };
            for (r, v) in table.radii.iter().zip(&col.values) {
                rows.push(vec![field.to_string(), num(col.p), shape.into(), num(*r), num(*v)]);
            }
        }
    }
    write_rows(path, &["field", "p", "region", "R", "norm"], rows)
}

pub fn write_continuation_csv(path: &Path, cells: &[ContinuationCell]) -> io::Result<()> {
    let rows = cells.iter().map(|c| {
        vec![
            num(c.epsilon),
            num(c.radius),
            num(c.h1_u),
            num(c.h1_w),
            c.iterations.to_string(),
            c.converged.to_string(),
            opt(c.h1_difference),
            opt(c.energy_gap),
            c.failure.clone().unwrap_or_default(),
        ]
    });
    let header = ["epsilon", "R", "H1_u", "H1_w", "iterations", "converged", "h1_difference", "energy_gap", "failure"];
    write_rows(path, &header, rows)
}

pub fn write_homotopy_csv(path: &Path, points: &[HomotopyPoint]) -> io::Result<()> {
    let rows = points.iter().map(|p| {
        vec![
            num(p.lambda),
            num(p.e_u),
            num(p.e_w),
            num(p.h1_u),
            num(p.h1_w),
            opt(p.ratio),
            p.iterations.to_string(),
            p.converged.to_string(),
            p.flagged.to_string(),
            p.failure.clone().unwrap_or_default(),
        ]
    });
    let header = ["lambda", "E_u", "E_w", "H1_u", "H1_w", "ratio", "iterations", "converged", "flagged", "failure"];
    write_rows(path, &header, rows)
}

pub fn write_json(path: &Path, value: &impl Serialize) -> io::Result<()> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| io::Error::new(io::ErrorKind::Other, e))?;
    text.push('\n');
    fs::write(path, text)
}

#[cfg(test)]
mod tests {
    use super::*;
    use micropolar::solver::TraceRow;
    use micropolar::verification::LedgerTerm;

    #[test]
    fn trace_csv_has_header_and_rows() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("trace.csv");
        let row = TraceRow {
            iter: 0,
            h1_u: 1.0,
            h1_w: 2.0,
            sqrt_eps_h2_u: 0.5,
            sqrt_eps_h2_w: 0.25,
            update_norm: 1e-3,
            r_mom: 0.0,
            r_mic: 0.0,
            energy_gap: 0.0,
            krylov_iters: 3,
        };
        write_trace_csv(&path, &SolveTrace { rows: vec![row, row] }).unwrap();
        let text = fs::read_to_string(&path).unwrap();
        let lines: Vec<_> = text.lines().collect();
        assert_eq!(lines[0], TRACE_HEADER.join(","));
        assert_eq!(lines.len(), 3);
        assert_eq!(lines[1], "0,1e0,2e0,5e-1,2.5e-1,1e-3,0e0,0e0,0e0");
    }

    #[test]
    fn ledger_csv_rows() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("ledger.csv");
        let term = LedgerTerm { name: "a".into(), exact: 1.0, majorant: Some(2.0) };
        let rep = LedgerReport::new(Some(2.0), 1.0, vec![term]);
        write_ledger_csv(&path, &[rep.clone(), rep]).unwrap();
        let text = fs::read_to_string(&path).unwrap();
        assert_eq!(text.lines().count(), 5);
        assert_eq!(text.lines().nth(1).unwrap(), "2e0,left,1e0,");
        assert_eq!(text.lines().nth(2).unwrap(), "2e0,a,1e0,2e0");
    }
}
