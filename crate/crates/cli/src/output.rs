use std::fmt::Write as _;

use serde_json::{json, Map, Value};

/// A value printed with explicit precision in key=value mode.
#[derive(Debug, Clone)]
pub enum Val {
    Int(i128),
    Real(f64),
    Text(String),
    Bool(bool),
    List(Vec<String>),
}

impl Val {
    fn to_json(&self) -> Value {
        match self {
            Val::Int(v) => i64::try_from(*v).map_or_else(|_| json!(v.to_string()), |v| json!(v)),
            Val::Real(v) => json!(v),
            Val::Text(v) => json!(v),
            Val::Bool(v) => json!(v),
            Val::List(v) => json!(v),
        }
    }
}

pub const REAL_DIGITS: usize = 10;

impl From<usize> for Val {
    fn from(v: usize) -> Self {
        Val::Int(v as i128)
    }
}

impl From<u64> for Val {
    fn from(v: u64) -> Self {
        Val::Int(v as i128)
    }
}

impl From<u32> for Val {
    fn from(v: u32) -> Self {
        Val::Int(v as i128)
    }
}

impl From<i64> for Val {
    fn from(v: i64) -> Self {
        Val::Int(v as i128)
    }
}

impl From<f64> for Val {
    fn from(v: f64) -> Self {
        Val::Real(v)
    }
}

impl From<bool> for Val {
    fn from(v: bool) -> Self {
        Val::Bool(v)
    }
}

impl From<String> for Val {
    fn from(v: String) -> Self {
        Val::Text(v)
    }
}

impl From<&str> for Val {
    fn from(v: &str) -> Self {
        Val::Text(v.to_string())
    }
}

impl From<Vec<String>> for Val {
    fn from(v: Vec<String>) -> Self {
        Val::List(v)
    }
}

/// Command echo, parameter echo and payload. Timing is reported separately.
#[derive(Debug, Clone, Default)]
pub struct Report {
    command: String,
    params: Vec<(String, Val)>,
    payload: Vec<(String, Val)>,
}

impl Report {
    pub fn new(command: impl Into<String>) -> Self {
        Report {
            command: command.into(),
            ..Report::default()
        }
    }

    pub fn param(&mut self, key: &str, v: impl Into<Val>) -> &mut Self {
        self.params.push((key.to_string(), v.into()));
        self
    }

    pub fn put(&mut self, key: &str, v: impl Into<Val>) -> &mut Self {
        self.payload.push((key.to_string(), v.into()));
        self
    }

    pub fn render(&self, as_json: bool) -> String {
        if as_json {
            let obj = |items: &[(String, Val)]| {
                Value::Object(items.iter().map(|(k, v)| (k.clone(), v.to_json())).collect::<Map<_, _>>())
            };
            let doc = json!({
                "command": self.command,
                "params": obj(&self.params),
                "result": obj(&self.payload),
            });
            return serde_json::to_string_pretty(&doc).expect("json values serialize") + "\n";
        }
        let mut out = String::new();
        writeln!(out, "command={}", self.command).unwrap();
        let mut line = |prefix: &str, k: &str, v: &Val| match v {
            Val::Int(i) => writeln!(out, "{prefix}{k}={i}").unwrap(),
            Val::Real(r) if *r != 0.0 && r.abs() < 1e-6 => {
                writeln!(out, "{prefix}{k}={r:.REAL_DIGITS$e}").unwrap()
            }
            Val::Real(r) => writeln!(out, "{prefix}{k}={r:.REAL_DIGITS$}").unwrap(),
            Val::Text(t) => writeln!(out, "{prefix}{k}={t}").unwrap(),
            Val::Bool(b) => writeln!(out, "{prefix}{k}={b}").unwrap(),
            Val::List(items) => {
                writeln!(out, "{prefix}{k}.count={}", items.len()).unwrap();
                for item in items {
                    writeln!(out, "{prefix}{k}={item}").unwrap();
                }
            }
        };
        for (k, v) in &self.params {
            line("param.", k, v);
        }
        for (k, v) in &self.payload {
            line("", k, v);
        }
        out
    }
}
