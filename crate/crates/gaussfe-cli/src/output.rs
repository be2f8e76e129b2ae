use std::io::Write;

use clap::ValueEnum;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
    Plain,
}

/// Rows of pre-formatted cells under a header.
pub struct Table {
    pub headers: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
    /// Column shown alone in plain mode when there is a single row.
    pub primary: Option<usize>,
}

impl Table {
    pub fn new(headers: &[&'static str]) -> Self {
        Table { headers: headers.to_vec(), rows: Vec::new(), primary: None }
    }

    pub fn primary(mut self, col: usize) -> Self {
        self.primary = Some(col);
        self
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.headers.len());
        self.rows.push(row);
    }

    pub fn render(&self, fmt: Format) -> String {
        match fmt {
            Format::Csv => {
                let mut w = csv::Writer::from_writer(Vec::new());
                w.write_record(&self.headers).expect("in-memory write");
                for r in &self.rows {
                    w.write_record(r).expect("in-memory write");
                }
                String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf8 cells")
            }
            Format::Json => {
                let mut s = String::new();
                for r in &self.rows {
                    let obj: serde_json::Map<String, serde_json::Value> =
                        self.headers.iter().zip(r).map(|(h, c)| (h.to_string(), serde_json::Value::String(c.clone()))).collect();
                    s.push_str(&serde_json::Value::Object(obj).to_string());
                    s.push('\n');
                }
                s
            }
            Format::Plain => {
                if let (Some(c), [row]) = (self.primary, self.rows.as_slice()) {
                    return format!("{}\n", row[c]);
                }
                let mut s = self.headers.join("\t");
                s.push('\n');
                for r in &self.rows {
                    s.push_str(&r.join("\t"));
                    s.push('\n');
                }
                s
            }
        }
    }
}

pub fn emit(text: &str) {
    let mut out = std::io::stdout().lock();
    // a closed pipe is not an error worth reporting
    let _ = out.write_all(text.as_bytes());
    let _ = out.flush();
}

/// Re-encodes CSV produced by the library in the requested format.
pub fn from_csv(csv_text: &str, fmt: Format) -> String {
    if fmt == Format::Csv {
        return csv_text.to_string();
    }
    let mut rd = csv::Reader::from_reader(csv_text.as_bytes());
    let headers: Vec<String> = rd.headers().map(|h| h.iter().map(str::to_string).collect()).unwrap_or_default();
    let rows: Vec<Vec<String>> = rd.records().filter_map(|r| r.ok()).map(|r| r.iter().map(str::to_string).collect()).collect();
    match fmt {
        Format::Json => {
            let mut s = String::new();
            for r in rows {
                let obj: serde_json::Map<String, serde_json::Value> =
                    headers.iter().cloned().zip(r.into_iter().map(serde_json::Value::String)).collect();
                s.push_str(&serde_json::Value::Object(obj).to_string());
                s.push('\n');
            }
            s
        }
        _ => {
            let mut s = headers.join("\t");
            s.push('\n');
            for r in rows {
                s.push_str(&r.join("\t"));
                s.push('\n');
            }
            s
        }
    }
}
