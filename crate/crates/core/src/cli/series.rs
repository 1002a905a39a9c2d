//! CSV form of a run's time series.

use std::io::Write;

use crate::dynamics::SeriesRow;
use crate::Result;

/// Momentum column names: `Px, Py, Pz` up to three dimensions, `P1 … Pd` above.
pub fn momentum_columns(d: usize) -> Vec<String> {
    if d <= 3 {
        ["Px", "Py", "Pz"][..d].iter().map(|s| s.to_string()).collect()
    } else {
        (1..=d).map(|k| format!("P{k}")).collect()
    }
}

pub fn header(d: usize) -> Vec<String> {
    let mut cols: Vec<String> = ["t", "M", "E", "H", "R", "K"].iter().map(|s| s.to_string()).collect();
    cols.extend(momentum_columns(d));
    cols.extend(
        ["I", "Idot", "Iddot_formula", "Iddot_fd", "S_accum", "lambda_scale", "dt"]
            .iter()
            .map(|s| s.to_string()),
    );
    cols
}

fn row_values(row: &SeriesRow) -> Vec<f64> {
    let mut vals = vec![row.t, row.m, row.e, row.h, row.r, row.k];
    vals.extend(&row.p);
    vals.extend([row.i, row.i_dot, row.i_ddot_formula, row.i_ddot_fd, row.s_accum, row.lambda_scale, row.dt]);
    vals
}

pub fn write_csv(rows: &[SeriesRow], d: usize, out: impl Write) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(header(d))?;
    for row in rows {
        w.write_record(row_values(row).iter().map(|x| x.to_string()))?;
    }
    w.flush()?;
    Ok(())
}

/// Parse a series CSV back into columns keyed by header name.
pub fn read_columns(input: impl std::io::Read) -> Result<Vec<(String, Vec<f64>)>> {
    let mut r = csv::Reader::from_reader(input);
    let names: Vec<String> = r.headers()?.iter().map(str::to_string).collect();
    let mut cols: Vec<(String, Vec<f64>)> = names.into_iter().map(|n| (n, Vec::new())).collect();
    for rec in r.records() {
        let rec = rec?;
        for (col, field) in cols.iter_mut().zip(rec.iter()) {
            col.1.push(field.parse().unwrap_or(f64::NAN));
        }
    }
    Ok(cols)
}
