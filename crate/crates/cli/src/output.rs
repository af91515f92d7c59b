//! JSON, CSV and plain-text renderings of a [`ResultRecord`].
//!
//! CSV columns are fixed per payload. Bounds rows are
//! `k, alpha, lambda1, lambda2, lambda3` followed by the bound columns in
//! alphabetical order. Floats use Rust's shortest round-trip formatting.

use std::fmt::Write as _;

use crate::commands::TABLE1_CELLS;
use crate::config::OutputFormat;
use crate::error::Result;
use crate::record::{Payload, ResultRecord};

pub const BOUNDS_COLUMNS: [&str; 14] = [
    "k",
    "alpha",
    "lambda1",
    "lambda2",
    "lambda3",
    "a1",
    "a2",
    "alpha_star",
    "alpha_star_star",
    "b",
    "lambda2_lower",
    "m_k",
    "rho_star",
    "upper_bound",
];

fn num(x: f64) -> String {
    format!("{x}")
}

fn opt(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

pub fn render(record: &ResultRecord, format: OutputFormat) -> Result<String> {
    match format {
        OutputFormat::Json => Ok(serde_json::to_string_pretty(record)? + "\n"),
        OutputFormat::Csv => csv_table(&record.payload),
        OutputFormat::Text => Ok(text(record)),
    }
}

fn table(payload: &Payload) -> (Vec<String>, Vec<Vec<String>>) {
    let head = |cols: &[&str]| cols.iter().map(|c| c.to_string()).collect::<Vec<_>>();
    match payload {
        Payload::Eig(entries) => {
            let rows = entries
                .iter()
                .flat_map(|e| {
                    e.spectrum.eigenvalues.iter().enumerate().map(move |(j, &l)| {
                        vec![e.k.to_string(), num(e.alpha), (j + 1).to_string(), num(l), num(e.spectrum.error_estimate)]
                    })
                })
                .collect();
            (head(&["k", "alpha", "j", "lambda", "error_estimate"]), rows)
        }
        Payload::Minimize(entries) => {
            let rows = entries
                .iter()
                .map(|e| match &e.report {
                    Some(r) => vec![
                        e.k.to_string(),
                        num(r.alpha_min),
                        num(r.lambda_star),
                        num(r.lambda2),
                        num(r.lambda3),
                        num(r.d_lambda1),
                        r.derivative_sign_changes.to_string(),
                        num(r.certificate.gap_value),
                        num(r.certificate.second_derivative_fd),
                        String::new(),
                    ],
                    None => {
                        let mut row = vec![e.k.to_string()];
                        row.extend(std::iter::repeat_n(String::new(), 8));
                        row.push(e.error.clone().unwrap_or_default());
                        row
                    }
                })
                .collect();
            let cols = [
                "k",
                "alpha_min",
                "lambda1",
                "lambda2",
                "lambda3",
                "d_lambda1",
                "sign_changes",
                "gap",
                "second_derivative_fd",
                "error",
            ];
            (head(&cols), rows)
        }
        Payload::Table1(t) => {
            let mut cols = vec!["k".to_string()];
            cols.extend(TABLE1_CELLS.iter().map(|c| c.to_string()));
            cols.extend(TABLE1_CELLS.iter().map(|c| format!("{c}_reference")));
            cols.extend(TABLE1_CELLS.iter().map(|c| format!("{c}_deviation")));
            cols.extend(["flagged".to_string(), "error".to_string()]);
            let rows = t
                .rows
                .iter()
                .map(|r| {
                    let mut row = vec![r.k.to_string()];
                    row.extend((0..4).map(|i| opt(r.computed.map(|c| c[i]))));
                    row.extend(r.reference.iter().map(|&x| num(x)));
                    row.extend((0..4).map(|i| opt(r.deviation.map(|d| d[i]))));
                    row.push(r.flagged.join(" "));
                    row.push(r.error.clone().unwrap_or_default());
                    row
                })
                .collect();
            (cols, rows)
        }
        Payload::Bounds(entries) => {
            let rows = entries
                .iter()
                .flat_map(|e| {
                    let r = &e.report;
                    e.samples.iter().map(move |s| {
                        vec![
                            e.k.to_string(),
                            num(s.alpha),
                            num(s.lambda[0]),
                            num(s.lambda[1]),
                            num(s.lambda[2]),
                            num(r.a1),
                            opt(r.a2),
                            num(r.alpha_star),
                            opt(r.alpha_star_star),
                            opt(r.b),
                            num(r.lambda2_lower),
                            opt(r.m_k),
                            num(r.rho_star),
                            num(s.upper_bound),
                        ]
                    })
                })
                .collect();
            (head(&BOUNDS_COLUMNS), rows)
        }
        Payload::Limit(entries) => {
            let rows = entries
                .iter()
                .map(|e| {
                    vec![
                        e.k.to_string(),
                        e.j.to_string(),
                        num(e.alpha),
                        num(e.eps),
                        num(e.limit),
                        opt(e.reduced_root),
                        opt(e.glue_root),
                        opt(e.eigenvalue),
                        num(e.correction_scale),
                        e.reduced_error.clone().unwrap_or_default(),
                    ]
                })
                .collect();
            let cols =
                ["k", "j", "alpha", "eps", "limit", "reduced_root", "glue_root", "eigenvalue", "correction_scale", "error"];
            (head(&cols), rows)
        }
        Payload::Verify(v) => {
            let rows = v
                .checks
                .iter()
                .map(|c| {
                    vec![
                        c.name.clone(),
                        c.passed.to_string(),
                        opt(c.measured),
                        c.rule.clone(),
                        c.detail.clone().unwrap_or_default(),
                    ]
                })
                .collect();
            (head(&["check", "passed", "measured", "rule", "detail"]), rows)
        }
    }
}

fn csv_table(payload: &Payload) -> Result<String> {
    let (header, rows) = table(payload);
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(&header)?;
    for row in rows {
        w.write_record(&row)?;
    }
    let bytes = w.into_inner().map_err(|e| e.into_error())?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

fn text(record: &ResultRecord) -> String {
    let mut out = String::new();
    let (header, rows) = table(&record.payload);
    let widths: Vec<usize> = (0..header.len())
        .map(|i| rows.iter().map(|r| r[i].len()).chain([header[i].len()]).max().unwrap_or(0))
        .collect();
    let line = |cells: &[String]| {
        cells.iter().zip(&widths).map(|(c, w)| format!("{c:<w$}")).collect::<Vec<_>>().join("  ").trim_end().to_string()
    };
    let _ = writeln!(out, "{}", line(&header));
    for r in &rows {
        let _ = writeln!(out, "{}", line(r));
    }
    if let Payload::Verify(v) = &record.payload {
        let failed = v.checks.iter().filter(|c| !c.passed).count();
        let _ = writeln!(out, "{} of {} checks passed", v.checks.len() - failed, v.checks.len());
    }
    out
}
