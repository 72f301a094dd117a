//! Result rows and their three renderings (table, CSV, JSON).
//!
//! Numeric fields are rounded to 12 significant digits when the record is
//! built, so every output format shows the same digits and repeated runs
//! are byte-identical.

use serde::Serialize;

pub const CSV_HEADER: &str =
    "mode,lambda,operator,beta_exact,beta_approx,H_exact,H_approx,E_f,Var_T,P0,w,residual,warnings";

#[derive(Debug, Clone, Serialize)]
pub struct RunRecord {
    pub mode: &'static str,
    pub lambda: f64,
    pub operator: String,
    pub beta_exact: Option<f64>,
    pub beta_approx: Option<f64>,
    pub h_exact: Option<f64>,
    pub h_approx: Option<f64>,
    pub e_f: Option<f64>,
    pub var_t: Option<f64>,
    pub p0: Option<f64>,
    pub w: Option<f64>,
    pub residual: Option<f64>,
    pub warnings: String,
}

impl RunRecord {
    /// A row for a point whose computation failed outright.
    pub fn failed(mode: &'static str, lambda: f64, operator: String, error: String) -> Self {
        Self {
            mode,
            lambda: sig12(lambda),
            operator,
            beta_exact: None,
            beta_approx: None,
            h_exact: None,
            h_approx: None,
            e_f: None,
            var_t: None,
            p0: None,
            w: None,
            residual: None,
            warnings: error,
        }
    }

    pub fn from_report(
        mode: &'static str,
        lambda: f64,
        operator: String,
        report: &possi_core::SolveReport,
        notes: &[String],
    ) -> Self {
        let warnings = report
            .diagnostics
            .domain_warnings
            .iter()
            .map(String::as_str)
            .chain(notes.iter().map(String::as_str))
            .collect::<Vec<_>>()
            .join("; ");
        Self {
            mode,
            lambda: sig12(lambda),
            operator,
            beta_exact: report.beta_exact.map(sig12),
            beta_approx: Some(sig12(report.beta_approx)),
            h_exact: report.h_at_beta_exact.map(sig12),
            h_approx: Some(sig12(report.h_approx_total)),
            e_f: Some(sig12(report.e_f)),
            var_t: Some(sig12(report.var_t)),
            p0: Some(sig12(report.premium_p0)),
            w: Some(sig12(report.w)),
            residual: report.diagnostics.residual.map(sig12),
            warnings,
        }
    }

    fn fields(&self) -> [String; 13] {
        [
            self.mode.to_string(),
            render(Some(self.lambda)),
            self.operator.clone(),
            render(self.beta_exact),
            render(self.beta_approx),
            render(self.h_exact),
            render(self.h_approx),
            render(self.e_f),
            render(self.var_t),
            render(self.p0),
            render(self.w),
            render(self.residual),
            self.warnings.clone(),
        ]
    }

    pub fn to_csv_row(&self) -> String {
        self.fields()
            .iter()
            .map(|f| csv_escape(f))
            .collect::<Vec<_>>()
            .join(",")
    }
}

/// Round to 12 significant digits; normalizes negative zero.
pub fn sig12(x: f64) -> f64 {
    if x == 0.0 {
        return 0.0;
    }
    format!("{x:.11e}").parse().expect("formatted float parses")
}

/// Shortest rendering of a 12-significant-digit value: plain decimal in a
/// readable magnitude band, scientific outside it, empty when absent.
pub fn render(x: Option<f64>) -> String {
    let Some(x) = x else {
        return String::new();
    };
    let x = sig12(x);
    if x == 0.0 {
        return "0".to_string();
    }
    let mag = x.abs();
    if (1e-4..1e15).contains(&mag) {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

fn csv_escape(field: &str) -> String {
    if field.contains(',') || field.contains('"') || field.contains('\n') {
        format!("\"{}\"", field.replace('"', "\"\""))
    } else {
        field.to_string()
    }
}

/// Fixed-width table for terminals; numbers shortened to 6 significant
/// digits, full precision stays in the CSV/JSON renderings.
pub fn render_table(records: &[RunRecord], footer: Option<&str>) -> String {
    let headers = CSV_HEADER.split(',').collect::<Vec<_>>();
    let short = |s: &str| -> String {
        match s.parse::<f64>() {
            Ok(v) if s.len() > 12 => format!("{v:.6}"),
            _ => s.to_string(),
        }
    };
    let rows: Vec<[String; 13]> = records
        .iter()
        .map(|r| {
            let mut f = r.fields();
            for item in f.iter_mut().take(12) {
                *item = short(item);
            }
            f
        })
        .collect();
    let mut widths: Vec<usize> = headers.iter().map(|h| h.len()).collect();
    for row in &rows {
        for (w, cell) in widths.iter_mut().zip(row.iter()) {
            *w = (*w).max(cell.len());
        }
    }
    let mut out = String::new();
    for (i, h) in headers.iter().enumerate() {
        out.push_str(&format!("{:<width$}  ", h, width = widths[i]));
    }
    out.push('\n');
    for row in &rows {
        for (i, cell) in row.iter().enumerate() {
            out.push_str(&format!("{:<width$}  ", cell, width = widths[i]));
        }
        out.push('\n');
    }
    if let Some(f) = footer {
        out.push_str(f);
        out.push('\n');
    }
    out
}

pub fn render_csv(records: &[RunRecord], footer_comment: Option<&str>) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in records {
        out.push_str(&r.to_csv_row());
        out.push('\n');
    }
    if let Some(f) = footer_comment {
        out.push_str(&format!("# {f}\n"));
    }
    out
}

#[derive(Serialize)]
struct JsonDocument<'a> {
    records: &'a [RunRecord],
    #[serde(skip_serializing_if = "Option::is_none")]
    predicted_gap_t1_t2: Option<f64>,
}

pub fn render_json(records: &[RunRecord], gap: Option<f64>) -> String {
    let doc = JsonDocument {
        records,
        predicted_gap_t1_t2: gap.map(sig12),
    };
    let mut s = serde_json::to_string_pretty(&doc).expect("records serialize");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sig12_rounds_to_twelve_significant_digits() {
        assert_eq!(render(Some(23.0 / 41.0)), "0.560975609756");
        assert_eq!(render(Some(37.0 / 6.0)), "6.16666666667");
        assert_eq!(render(Some(-12232.0 / 1421.0)), "-8.60802251935");
        assert_eq!(render(Some(1.0)), "1");
        assert_eq!(render(Some(0.0)), "0");
        assert_eq!(render(Some(-0.0)), "0");
        assert_eq!(render(None), "");
        // tiny magnitudes switch to scientific notation
        assert_eq!(render(Some(4.25e-17)), "4.25e-17");
    }

    #[test]
    fn csv_quoting_protects_commas_and_quotes() {
        assert_eq!(csv_escape("plain"), "plain");
        assert_eq!(csv_escape("rate outside (0,1]"), "\"rate outside (0,1]\"");
        assert_eq!(csv_escape("say \"hi\""), "\"say \"\"hi\"\"\"");
    }

    #[test]
    fn csv_row_has_thirteen_fields() {
        assert_eq!(CSV_HEADER.split(',').count(), 13);
        let rec = RunRecord::failed("solve", 0.5, "t1".into(), "boom".into());
        assert_eq!(rec.to_csv_row().split(',').count(), 13);
    }
}
