//! Plain-text and CSV rendering of result sheets.

use crate::config::Format;
use crate::error::CliResult;

#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Num(f64),
    Int(i64),
    Text(String),
    /// Cell deliberately left uncomputed, rendered as its tag.
    Marker(&'static str),
}

#[derive(Debug, Clone)]
pub struct Column {
    pub name: &'static str,
    /// Shown in the aligned text layout (CSV always carries every column).
    pub in_text: bool,
}

/// Rectangular result with a stable column set plus free-form caption lines.
#[derive(Debug, Clone)]
pub struct Sheet {
    pub columns: Vec<Column>,
    pub rows: Vec<Vec<Value>>,
    pub caption: Vec<String>,
}

pub const ERR_SUFFIX: &str = "_err_pct";

/// Rounds to `digits` significant figures and prints without exponent when reasonable.
pub fn fmt_sig(v: f64, digits: usize) -> String {
    if !v.is_finite() {
        return format!("{v}");
    }
    if v == 0.0 {
        return "0".to_string();
    }
    let mag = v.abs().log10().floor() as i32;
    if !(-5..=15).contains(&mag) {
        return format!("{:.*e}", digits - 1, v);
    }
    // rounding can bump the magnitude (9.9996 -> 10.00)
    let rounded: f64 = format!("{:.*e}", digits - 1, v).parse().unwrap_or(v);
    let mag = rounded.abs().log10().floor() as i32;
    let decimals = (digits as i32 - 1 - mag).max(0) as usize;
    format!("{rounded:.decimals$}")
}

fn fmt_err(v: f64) -> String {
    if v < 10.0 {
        format!("{v:.2}")
    } else {
        format!("{v:.1}")
    }
}

impl Sheet {
    pub fn new(columns: &[(&'static str, bool)]) -> Self {
        Sheet {
            columns: columns.iter().map(|&(name, in_text)| Column { name, in_text }).collect(),
            rows: Vec::new(),
            caption: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Value>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn header(&self) -> Vec<&'static str> {
        self.columns.iter().map(|c| c.name).collect()
    }

    pub fn render(&self, format: Format, precision: usize) -> CliResult<String> {
        match format {
            Format::Csv => self.to_csv(true),
            Format::Table => Ok(self.to_text(precision)),
        }
    }

    pub fn to_csv(&self, with_header: bool) -> CliResult<String> {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::CRLF).from_writer(Vec::new());
        if with_header {
            w.write_record(self.header())?;
        }
        for row in &self.rows {
            w.write_record(row.iter().map(|v| match v {
                Value::Num(x) => fmt_sig(*x, 12),
                Value::Int(i) => i.to_string(),
                Value::Text(s) => s.clone(),
                Value::Marker(m) => m.to_string(),
            }))?;
        }
        let bytes = w.into_inner().map_err(|e| e.into_error())?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }

    /// Aligned columns; each `x_err_pct` column is folded into `x` as `value[err]`.
    pub fn to_text(&self, precision: usize) -> String {
        let mut heads = Vec::new();
        let mut cells: Vec<Vec<String>> = vec![Vec::new(); self.rows.len()];
        for (j, col) in self.columns.iter().enumerate() {
            if !col.in_text || col.name.ends_with(ERR_SUFFIX) {
                continue;
            }
            let err_col = self
                .columns
                .get(j + 1)
                .filter(|c| c.name.strip_suffix(ERR_SUFFIX) == Some(col.name))
                .map(|_| j + 1);
            heads.push(col.name.to_string());
            for (i, row) in self.rows.iter().enumerate() {
                let mut s = match &row[j] {
                    Value::Num(x) => fmt_sig(*x, precision),
                    Value::Int(v) => v.to_string(),
                    Value::Text(t) => t.clone(),
                    Value::Marker(m) => m.to_string(),
                };
                if let Some(Value::Num(e)) = err_col.map(|k| &row[k]) {
                    s.push_str(&format!("[{}]", fmt_err(*e)));
                }
                cells[i].push(s);
            }
        }
        let widths: Vec<usize> = (0..heads.len())
            .map(|j| cells.iter().map(|r| r[j].len()).chain([heads[j].len()]).max().unwrap_or(0))
            .collect();
        let line = |items: &[String]| {
            items
                .iter()
                .zip(&widths)
                .map(|(s, w)| format!("{s:>w$}"))
                .collect::<Vec<_>>()
                .join("  ")
                .trim_end()
                .to_string()
        };
        let mut out = String::new();
        out.push_str(&line(&heads));
        out.push('\n');
        for r in &cells {
            out.push_str(&line(r));
            out.push('\n');
        }
        for c in &self.caption {
            out.push_str(c);
            out.push('\n');
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn significant_figures() {
        assert_eq!(fmt_sig(2.83456, 4), "2.835");
        assert_eq!(fmt_sig(-0.16666, 4), "-0.1667");
        assert_eq!(fmt_sig(208.333, 4), "208.3");
        assert_eq!(fmt_sig(9.99996, 4), "10.00");
        assert_eq!(fmt_sig(12.0, 4), "12.00");
        assert_eq!(fmt_sig(123456.0, 4), "123500");
        assert_eq!(fmt_sig(1e-9, 3), "1.00e-9");
    }

    #[test]
    fn text_folds_errors() {
        let mut s = Sheet::new(&[("phi", true), ("e", true), ("e_err_pct", true), ("tag", false)]);
        s.push(vec![Value::Num(2.0), Value::Num(2.83456), Value::Num(2.976), Value::Text("x".into())]);
        let t = s.to_text(4);
        assert!(t.contains("2.835[2.98]"), "{t}");
        assert!(!t.contains("tag"));
        let c = s.to_csv(true).unwrap();
        assert!(c.starts_with("phi,e,e_err_pct,tag\r\n"));
    }

    #[test]
    fn csv_quotes_when_needed() {
        let mut s = Sheet::new(&[("label", true)]);
        s.push(vec![Value::Text("|1; 0; 0+>".into())]);
        s.push(vec![Value::Text("a,b".into())]);
        let c = s.to_csv(false).unwrap();
        assert_eq!(c, "|1; 0; 0+>\r\n\"a,b\"\r\n");
    }
}
