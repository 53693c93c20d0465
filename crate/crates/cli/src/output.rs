//! Table rendering (markdown or CSV) and numeric formatting.

use std::fmt::Write as _;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Markdown,
    Csv,
}

impl std::str::FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "markdown" | "md" => Ok(Format::Markdown),
            "csv" => Ok(Format::Csv),
            other => Err(format!("unknown format {other:?} (expected markdown or csv)")),
        }
    }
}

/// Formats with six significant digits, the precision of the densest
/// reference table.
pub fn fmt_sig(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    if x.fract() == 0.0 && x.abs() < 1e9 {
        return format!("{x:.0}");
    }
    let magnitude = x.abs().log10().floor() as i32;
    if (-4..7).contains(&magnitude) {
        let decimals = (5 - magnitude).max(0) as usize;
        format!("{x:.decimals$}")
    } else {
        format!("{x:.5e}")
    }
}

/// One rendered cell: a value plus an optional reference annotation.
#[derive(Debug, Clone)]
pub struct Cell {
    pub text: String,
    pub annotation: Option<String>,
}

impl Cell {
    pub fn text(s: impl Into<String>) -> Self {
        Cell { text: s.into(), annotation: None }
    }

    pub fn value(x: f64) -> Self {
        Cell { text: fmt_sig(x), annotation: None }
    }

    pub fn annotated(x: f64, annotation: impl Into<String>) -> Self {
        Cell { text: fmt_sig(x), annotation: Some(annotation.into()) }
    }

    fn render(&self) -> String {
        match &self.annotation {
            Some(a) => format!("{} ({a})", self.text),
            None => self.text.clone(),
        }
    }
}

/// A titled table with a row-label column and convention footer lines.
#[derive(Debug, Clone)]
pub struct Table {
    pub title: String,
    pub row_label: String,
    pub columns: Vec<String>,
    pub rows: Vec<(String, Vec<Cell>)>,
    pub footer: Vec<String>,
}

impl Table {
    pub fn new(title: impl Into<String>, row_label: impl Into<String>, columns: Vec<String>) -> Self {
        Table {
            title: title.into(),
            row_label: row_label.into(),
            columns,
            rows: Vec::new(),
            footer: Vec::new(),
        }
    }

    pub fn push_row(&mut self, label: impl Into<String>, cells: Vec<Cell>) {
        debug_assert_eq!(cells.len(), self.columns.len());
        self.rows.push((label.into(), cells));
    }

    pub fn push_footer(&mut self, line: impl Into<String>) {
        self.footer.push(line.into());
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Markdown => self.render_markdown(),
            Format::Csv => self.render_csv(),
        }
    }

    fn render_markdown(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "## {}", self.title);
        let _ = writeln!(out);
        let header: Vec<&str> = std::iter::once(self.row_label.as_str())
            .chain(self.columns.iter().map(String::as_str))
            .collect();
        let _ = writeln!(out, "| {} |", header.join(" | "));
        let _ = writeln!(out, "|{}|", vec!["---"; header.len()].join("|"));
        for (label, cells) in &self.rows {
            let rendered: Vec<String> = cells.iter().map(Cell::render).collect();
            let _ = writeln!(out, "| {} | {} |", label, rendered.join(" | "));
        }
        if !self.footer.is_empty() {
            let _ = writeln!(out);
            for line in &self.footer {
                let _ = writeln!(out, "> {line}");
            }
        }
        out
    }

    fn render_csv(&self) -> String {
        let mut out = String::new();
        let header: Vec<String> = std::iter::once(self.row_label.clone())
            .chain(self.columns.iter().cloned())
            .collect();
        let _ = writeln!(out, "{}", header.join(","));
        for (label, cells) in &self.rows {
            let mut fields = vec![csv_escape(label)];
            fields.extend(cells.iter().map(|c| csv_escape(&c.render())));
            let _ = writeln!(out, "{}", fields.join(","));
        }
        for line in &self.footer {
            let _ = writeln!(out, "# {line}");
        }
        out
    }
}

fn csv_escape(field: &str) -> String {
    if field.contains(',') || field.contains('"') || field.contains('\n') {
        format!("\"{}\"", field.replace('"', "\"\""))
    } else {
        field.to_string()
    }
}
