//! Tabular reports: one metric per row.

use std::fmt::Write;

/// One measured quantity, the bound it is checked against and the result.
#[derive(Clone, Debug, PartialEq)]
pub struct Row {
    pub name: String,
    /// Which guarantee the row checks.
    pub check: String,
    pub value: f64,
    pub ci: f64,
    pub bound: Option<f64>,
    pub trials: u64,
    pub seed: u64,
    pub pass: Option<bool>,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Report {
    pub rows: Vec<Row>,
}

/// Floats in reports carry 12 significant digits so that output is stable.
pub fn fmt12(x: f64) -> String {
    if x == 0.0 {
        "0".to_string()
    } else if x.is_finite() {
        let s = format!("{x:.11e}");
        match s.split_once('e') {
            Some((m, e)) => {
                let m = m.trim_end_matches('0').trim_end_matches('.');
                format!("{m}e{e}")
            }
            None => s,
        }
    } else {
        format!("{x}")
    }
}

impl Report {
    pub fn push(&mut self, row: Row) {
        self.rows.push(row);
    }

    pub fn all_pass(&self) -> bool {
        self.rows.iter().all(|r| r.pass != Some(false))
    }

    pub fn first_failure(&self) -> Option<&Row> {
        self.rows.iter().find(|r| r.pass == Some(false))
    }

    fn cells(r: &Row) -> [String; 8] {
        [
            r.name.clone(),
            fmt12(r.value),
            fmt12(r.ci),
            r.bound.map_or("-".to_string(), fmt12),
            r.trials.to_string(),
            r.seed.to_string(),
            match r.pass {
                Some(true) => "pass".to_string(),
                Some(false) => "FAIL".to_string(),
                None => "-".to_string(),
            },
            r.check.clone(),
        ]
    }

    const HEADER: [&'static str; 8] = ["name", "value", "ci", "bound", "trials", "seed", "status", "check"];

    pub fn to_csv(&self) -> String {
        let mut out = Self::HEADER.join(",");
        out.push('\n');
        for r in &self.rows {
            let cells = Self::cells(r).map(|c| {
                if c.contains([',', '"']) {
                    format!("\"{}\"", c.replace('"', "\"\""))
                } else {
                    c
                }
            });
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    pub fn to_text(&self) -> String {
        let rows: Vec<[String; 8]> = self.rows.iter().map(Self::cells).collect();
        let mut widths = Self::HEADER.map(str::len);
        for r in &rows {
            for (w, c) in widths.iter_mut().zip(r) {
                *w = (*w).max(c.len());
            }
        }
        let mut out = String::new();
        let line = |out: &mut String, cells: &[&str]| {
            let parts: Vec<String> = cells
                .iter()
                .zip(&widths)
                .enumerate()
                .map(|(i, (c, w))| {
                    if i + 1 == cells.len() {
                        c.to_string()
                    } else {
                        format!("{c:<w$}")
                    }
                })
                .collect();
            let _ = writeln!(out, "{}", parts.join("  ").trim_end());
        };
        line(&mut out, &Self::HEADER);
        for r in &rows {
            let cells: Vec<&str> = r.iter().map(String::as_str).collect();
            line(&mut out, &cells);
        }
        out
    }
}
