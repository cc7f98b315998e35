//! Report model and serialization. Every run emits one report: provenance
//! (seed, sampling choices, branch indices), pinned tolerances, per-trial
//! values, the worst value per check, and an overall pass flag.
//!
//! Measured quantities serialize as strings with 17 significant digits so
//! output is byte-stable and round-trips exactly; complex values serialize
//! as `{"re": .., "im": ..}` objects.

use num_complex::Complex64;
use serde::ser::{SerializeStruct, Serializer};
use serde::Serialize;
use std::collections::BTreeMap;
use std::time::{SystemTime, UNIX_EPOCH};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone)]
pub enum Cell {
    /// A measured real quantity, formatted with full precision.
    Measure(f64),
    Complex(Complex64),
    Count(u64),
    Flag(bool),
    Text(String),
}

pub fn format_measure(value: f64) -> String {
    format!("{value:.16e}")
}

impl Serialize for Cell {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            Cell::Measure(v) => serializer.serialize_str(&format_measure(*v)),
            Cell::Complex(z) => {
                let mut s = serializer.serialize_struct("Complex", 2)?;
                s.serialize_field("re", &z.re)?;
                s.serialize_field("im", &z.im)?;
                s.end()
            }
            Cell::Count(v) => serializer.serialize_u64(*v),
            Cell::Flag(b) => serializer.serialize_bool(*b),
            Cell::Text(t) => serializer.serialize_str(t),
        }
    }
}

pub type Row = BTreeMap<String, Cell>;

#[derive(Serialize)]
pub struct Report {
    pub schema_version: u32,
    pub command: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timestamp: Option<String>,
    pub provenance: Row,
    pub tolerances: Row,
    pub max_residuals: Row,
    pub pass: bool,
    pub trials: Vec<Row>,
}

impl Report {
    pub fn new(command: &str, with_timestamp: bool) -> Self {
        Report {
            schema_version: SCHEMA_VERSION,
            command: command.to_string(),
            timestamp: with_timestamp.then(utc_timestamp),
            provenance: Row::new(),
            tolerances: Row::new(),
            max_residuals: Row::new(),
            pass: true,
            trials: Vec::new(),
        }
    }

    /// Records the worst value for a named check and folds it into `pass`
    /// against the registered tolerance.
    pub fn finish_check(&mut self, name: &str, tolerance: f64, worst: f64) {
        self.tolerances
            .insert(name.to_string(), Cell::Measure(tolerance));
        self.max_residuals
            .insert(name.to_string(), Cell::Measure(worst));
        if !(worst <= tolerance) {
            self.pass = false;
        }
    }

    pub fn to_json(&self) -> String {
        let mut text =
            serde_json::to_string_pretty(self).expect("report serialization cannot fail");
        text.push('\n');
        text
    }

    pub fn to_csv(&self) -> String {
        let mut columns: Vec<(String, bool)> = Vec::new();
        if let Some(first) = self.trials.first() {
            for (key, value) in first {
                columns.push((key.clone(), matches!(value, Cell::Complex(_))));
            }
        }
        let mut out = String::new();
        let mut header: Vec<String> = Vec::new();
        for (key, is_complex) in &columns {
            if *is_complex {
                header.push(format!("{key}.re"));
                header.push(format!("{key}.im"));
            } else {
                header.push(key.clone());
            }
        }
        out.push_str(&header.join(","));
        out.push('\n');
        for row in &self.trials {
            let mut fields: Vec<String> = Vec::new();
            for (key, _) in &columns {
                match row.get(key) {
                    Some(Cell::Measure(v)) => fields.push(format_measure(*v)),
                    Some(Cell::Complex(z)) => {
                        fields.push(format!("{}", z.re));
                        fields.push(format!("{}", z.im));
                    }
                    Some(Cell::Count(v)) => fields.push(v.to_string()),
                    Some(Cell::Flag(b)) => fields.push(b.to_string()),
                    Some(Cell::Text(t)) => fields.push(csv_escape(t)),
                    None => fields.push(String::new()),
                }
            }
            out.push_str(&fields.join(","));
            out.push('\n');
        }
        out
    }
}

fn csv_escape(text: &str) -> String {
    if text.contains(',') || text.contains('"') || text.contains('\n') {
        format!("\"{}\"", text.replace('"', "\"\""))
    } else {
        text.to_string()
    }
}

fn utc_timestamp() -> String {
    let secs = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    let days = (secs / 86400) as i64;
    let rem = secs % 86400;
    let (hour, minute, second) = (rem / 3600, (rem % 3600) / 60, rem % 60);
    let z = days + 719_468;
    let era = z.div_euclid(146_097);
    let doe = z.rem_euclid(146_097);
    let yoe = (doe - doe / 1460 + doe / 36_524 - doe / 146_096) / 365;
    let year0 = yoe + era * 400;
    let doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    let mp = (5 * doy + 2) / 153;
    let day = doy - (153 * mp + 2) / 5 + 1;
    let month = if mp < 10 { mp + 3 } else { mp - 9 };
    let year = if month <= 2 { year0 + 1 } else { year0 };
    format!("{year:04}-{month:02}-{day:02}T{hour:02}:{minute:02}:{second:02}Z")
}
