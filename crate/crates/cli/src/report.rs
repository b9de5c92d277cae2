//! Run reports: metric rows, asserted checks and artifact files. Rendering is
//! deterministic; wall-clock time is printed to stderr by the binary and
//! never enters the report.

use std::fmt::Write as _;

use tiler_core::rational::{exact, to_f64};
use tiler_core::Rational;

#[derive(Clone, Debug, PartialEq)]
pub enum Value {
    Exact(Rational),
    Int(usize),
    Float(f64),
    Text(String),
}

impl Value {
    fn cells(&self) -> (String, String) {
        match self {
            Value::Exact(r) => (exact(r), format!("{:.6}", to_f64(r))),
            Value::Int(i) => (i.to_string(), i.to_string()),
            Value::Float(x) => (format!("{x:.6}"), format!("{x:.6}")),
            Value::Text(t) => (t.clone(), String::new()),
        }
    }
}

impl From<Rational> for Value {
    fn from(r: Rational) -> Self {
        Value::Exact(r)
    }
}

impl From<&Rational> for Value {
    fn from(r: &Rational) -> Self {
        Value::Exact(r.clone())
    }
}

impl From<usize> for Value {
    fn from(i: usize) -> Self {
        Value::Int(i)
    }
}

impl From<f64> for Value {
    fn from(x: f64) -> Self {
        Value::Float(x)
    }
}

impl From<String> for Value {
    fn from(t: String) -> Self {
        Value::Text(t)
    }
}

impl From<&str> for Value {
    fn from(t: &str) -> Self {
        Value::Text(t.to_string())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub name: String,
    /// The inequality or identity being asserted.
    pub anchor: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Artifact {
    pub file: String,
    pub contents: String,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Report {
    pub pipeline: String,
    pub header: Vec<(String, String)>,
    pub config: String,
    pub metrics: Vec<(String, Value)>,
    pub checks: Vec<Check>,
    pub artifacts: Vec<Artifact>,
}

fn csv_cell(text: &str) -> String {
    if text.contains([',', '"', '\n']) {
        format!("\"{}\"", text.replace('"', "\"\""))
    } else {
        text.to_string()
    }
}

impl Report {
    pub fn new(pipeline: &str) -> Self {
        Report {
            pipeline: pipeline.to_string(),
            ..Default::default()
        }
    }

    pub fn header(&mut self, key: &str, value: impl ToString) {
        self.header.push((key.to_string(), value.to_string()));
    }

    pub fn metric(&mut self, name: impl Into<String>, value: impl Into<Value>) {
        self.metrics.push((name.into(), value.into()));
    }

    pub fn check(&mut self, name: impl Into<String>, anchor: impl Into<String>, pass: bool, detail: impl Into<String>) {
        self.checks.push(Check {
            name: name.into(),
            anchor: anchor.into(),
            pass,
            detail: detail.into(),
        });
    }

    /// A randomized estimate: trials, hit count, frequency and confidence
    /// radius `z sigma`.
    pub fn estimate(&mut self, name: &str, hits: usize, trials: usize, radius: f64) {
        self.metric(format!("{name}.trials"), trials);
        self.metric(format!("{name}.hits"), hits);
        let freq = if trials == 0 {
            Rational::from_integer(0.into())
        } else {
            tiler_core::rational::ratio_usize(hits, trials)
        };
        self.metric(format!("{name}.frequency"), freq);
        self.metric(format!("{name}.confidence_radius"), radius);
    }

    pub fn artifact(&mut self, file: impl Into<String>, contents: String) {
        self.artifacts.push(Artifact {
            file: file.into(),
            contents,
        });
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.pass)
    }

    pub fn check_named(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn metric_named(&self, name: &str) -> Option<&Value> {
        self.metrics.iter().find(|m| m.0 == name).map(|m| &m.1)
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# tiler report");
        let _ = writeln!(out, "pipeline: {}", self.pipeline);
        for (k, v) in &self.header {
            let _ = writeln!(out, "{k}: {v}");
        }
        out.push_str("\n[config]\n");
        for line in self.config.lines() {
            let _ = writeln!(out, "  {line}");
        }
        out.push_str("\n[metrics]\nname,value,decimal\n");
        for (name, v) in &self.metrics {
            let (value, decimal) = v.cells();
            let _ = writeln!(out, "{},{},{}", csv_cell(name), csv_cell(&value), decimal);
        }
        out.push_str("\n[checks]\nresult,check,anchor,detail\n");
        for c in &self.checks {
            let _ = writeln!(
                out,
                "{},{},{},{}",
                if c.pass { "PASS" } else { "FAIL" },
                csv_cell(&c.name),
                csv_cell(&c.anchor),
                csv_cell(&c.detail)
            );
        }
        let failed = self.failures().count();
        let _ = writeln!(
            out,
            "\n[summary]\nchecks: {} passed, {failed} failed\nresult: {}",
            self.checks.len() - failed,
            if failed == 0 { "PASS" } else { "FAIL" }
        );
        if !self.artifacts.is_empty() {
            out.push_str("artifacts:");
            for a in &self.artifacts {
                let _ = write!(out, " {}", a.file);
            }
            out.push('\n');
        }
        out
    }
}
