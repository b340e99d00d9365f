//! Machine-readable run reports in two formats.
//!
//! Both formats start with the run manifest. The CSV form writes it as
//! `# key = value` comment lines, then a header
//! `section,quantity,estimate,se,oracle,z`, then one row per quantity. The
//! structured form is TOML with a `[manifest]` table and one `[[sections]]`
//! entry per section. Sections can also carry a status and free-form notes.
//! In CSV these become `# section: ...` comment lines.
//!
//! Numbers use Rust's shortest round-trip formatting, so they are locale
//! independent and two runs with the same manifest give the same bytes. The
//! only exception is the `duration_s` line.

use std::io::{self, Write};
use std::time::Duration;

use serde::Serialize;

use crate::stats::Estimate;

/// Bumped whenever a column or key changes meaning.
pub const SCHEMA_VERSION: u32 = 1;

/// The manifest key whose value differs between otherwise identical runs.
pub const DURATION_KEY: &str = "duration_s";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Csv,
    Structured,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Param {
    pub name: String,
    pub value: String,
}

/// What produced a report.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Manifest {
    pub schema: u32,
    pub command: String,
    pub version: String,
    pub seed: u64,
    pub params: Vec<Param>,
    #[serde(rename = "duration_s")]
    pub duration: f64,
}

impl Manifest {
    pub fn new(command: impl Into<String>, seed: u64) -> Self {
        Manifest {
            schema: SCHEMA_VERSION,
            command: command.into(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            seed,
            params: Vec::new(),
            duration: 0.0,
        }
    }

    pub fn param(mut self, name: impl Into<String>, value: impl ToString) -> Self {
        self.params.push(Param {
            name: name.into(),
            value: value.to_string(),
        });
        self
    }

    pub fn set_duration(&mut self, d: Duration) {
        self.duration = d.as_secs_f64();
    }

    /// The manifest as `#` comment lines, as at the top of a CSV report.
    pub fn write_comments<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "# sphsplit-report v{}", self.schema)?;
        writeln!(w, "# command = {}", self.command)?;
        writeln!(w, "# version = {}", self.version)?;
        writeln!(w, "# seed = {}", self.seed)?;
        for p in &self.params {
            writeln!(w, "# param {} = {}", p.name, p.value)?;
        }
        writeln!(w, "# {DURATION_KEY} = {}", self.duration)
    }
}

/// A named scalar with no uncertainty attached.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Value {
    pub name: String,
    pub value: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Default)]
pub struct Section {
    pub name: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub status: Option<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub values: Vec<Value>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub rows: Vec<Estimate>,
}

impl Section {
    pub fn new(name: impl Into<String>) -> Self {
        Section {
            name: name.into(),
            ..Default::default()
        }
    }

    pub fn value(mut self, name: impl Into<String>, value: f64) -> Self {
        self.values.push(Value {
            name: name.into(),
            value,
        });
        self
    }

    pub fn rows(mut self, rows: impl IntoIterator<Item = Estimate>) -> Self {
        self.rows.extend(rows);
        self
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub manifest: Manifest,
    pub sections: Vec<Section>,
}

fn num(x: f64) -> String {
    format!("{x}")
}

fn opt(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

impl Report {
    pub fn new(manifest: Manifest) -> Self {
        Report {
            manifest,
            sections: Vec::new(),
        }
    }

    pub fn push(&mut self, s: Section) {
        self.sections.push(s);
    }

    pub fn write<W: Write>(&self, format: Format, w: W) -> io::Result<()> {
        match format {
            Format::Csv => self.write_csv(w),
            Format::Structured => self.write_structured(w),
        }
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        self.manifest.write_comments(&mut w)?;
        for s in &self.sections {
            if let Some(st) = &s.status {
                writeln!(w, "# {}: {st}", s.name)?;
            }
            for n in &s.notes {
                writeln!(w, "# {}: {n}", s.name)?;
            }
        }
        let mut out = csv::Writer::from_writer(w);
        out.write_record(["section", "quantity", "estimate", "se", "oracle", "z"])?;
        for s in &self.sections {
            for v in &s.values {
                out.write_record([s.name.as_str(), &v.name, &num(v.value), "", "", ""])?;
            }
            for r in &s.rows {
                out.write_record([s.name.as_str(), &r.quantity, &num(r.estimate), &num(r.se), &opt(r.oracle), &opt(r.z)])?;
            }
        }
        out.flush()
    }

    pub fn write_structured<W: Write>(&self, mut w: W) -> io::Result<()> {
        let text = toml::to_string(self).map_err(io::Error::other)?;
        w.write_all(text.as_bytes())
    }

    pub fn to_string(&self, format: Format) -> String {
        let mut buf = Vec::new();
        self.write(format, &mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("reports are UTF-8")
    }
}

/// `text` without the duration line, for comparing reruns.
pub fn strip_duration(text: &str) -> String {
    text.lines()
        .filter(|l| !l.trim_start_matches("# ").starts_with(DURATION_KEY))
        .map(|l| format!("{l}\n"))
        .collect()
}
