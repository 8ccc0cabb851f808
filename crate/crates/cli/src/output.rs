use clap::ValueEnum;
use serde_json::Value;

#[derive(Clone, Copy, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

/// One command result in all three output formats.
pub struct Rendered {
    pub json: Value,
    pub csv_header: Vec<&'static str>,
    pub csv_rows: Vec<Vec<String>>,
    pub text: String,
    /// A checked property failed (exit status 1).
    pub violation: bool,
}

impl Rendered {
    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&self.json).expect("serializable JSON value");
                s.push('\n');
                s
            }
            Format::Csv => {
                let mut w = csv::Writer::from_writer(Vec::new());
                w.write_record(&self.csv_header).expect("in-memory write");
                for r in &self.csv_rows {
                    w.write_record(r).expect("in-memory write");
                }
                String::from_utf8(w.into_inner().expect("in-memory flush")).expect("UTF-8 fields")
            }
            Format::Text => self.text.clone(),
        }
    }
}
