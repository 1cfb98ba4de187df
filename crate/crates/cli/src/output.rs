use clap::ValueEnum;
use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Table,
    Markdown,
}

pub struct Table {
    pub title: String,
    pub headers: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(title: impl Into<String>, headers: Vec<String>) -> Self {
        Table { title: title.into(), headers, rows: Vec::new() }
    }

    fn text(&self) -> String {
        let cols = self.headers.len();
        let mut widths: Vec<usize> = self.headers.iter().map(|h| h.chars().count()).collect();
        for r in &self.rows {
            for (w, c) in widths.iter_mut().zip(r) {
                *w = (*w).max(c.chars().count());
            }
        }
        let line = |cells: &[String]| {
            let padded: Vec<String> = (0..cols)
                .map(|i| {
                    let c = cells.get(i).map_or("", String::as_str);
                    format!("{c}{}", " ".repeat(widths[i] - c.chars().count()))
                })
                .collect();
            padded.join("  ").trim_end().to_string()
        };
        let mut out = vec![self.title.clone(), line(&self.headers)];
        out.push(widths.iter().map(|&w| "-".repeat(w)).collect::<Vec<_>>().join("  "));
        out.extend(self.rows.iter().map(|r| line(r)));
        out.join("\n")
    }

    fn markdown(&self) -> String {
        let esc = |s: &str| s.replace('|', "\\|");
        let row = |cells: &[String]| format!("| {} |", cells.iter().map(|c| esc(c)).collect::<Vec<_>>().join(" | "));
        let mut out = vec![format!("### {}", self.title), String::new(), row(&self.headers)];
        out.push(format!("|{}", "---|".repeat(self.headers.len())));
        out.extend(self.rows.iter().map(|r| row(r)));
        out.join("\n")
    }
}

/// A command result: the JSON document plus optional tabular views.
pub struct Output {
    pub json: Value,
    pub tables: Vec<Table>,
}

impl Output {
    pub fn json(json: Value) -> Self {
        Output { json, tables: Vec::new() }
    }

    pub fn with(mut self, t: Table) -> Self {
        self.tables.push(t);
        self
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => serde_json::to_string_pretty(&self.json).expect("serializable"),
            Format::Table if !self.tables.is_empty() => self.tables.iter().map(Table::text).collect::<Vec<_>>().join("\n\n"),
            Format::Markdown if !self.tables.is_empty() => self.tables.iter().map(Table::markdown).collect::<Vec<_>>().join("\n\n"),
            Format::Table | Format::Markdown => fields(&self.json, format == Format::Markdown),
        }
    }
}

/// Top-level fields as `key: value` lines (bullets in markdown).
fn fields(v: &Value, markdown: bool) -> String {
    let Value::Object(map) = v else { return v.to_string() };
    map.iter()
        .map(|(k, v)| {
            let s = match v {
                Value::String(s) => s.clone(),
                other => other.to_string(),
            };
            if markdown {
                format!("- **{k}**: {s}")
            } else {
                format!("{k}: {s}")
            }
        })
        .collect::<Vec<_>>()
        .join("\n")
}
