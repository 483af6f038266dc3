//! Versioned JSON Lines reports.
//!
//! A report is a header line, one line per result, one line per error and a
//! closing summary line. Every line carries `schema_version` and `record`.
//! Integers that may exceed 64 bits are decimal strings; real numbers are
//! interval pairs of decimal strings with a precision in bits.

use std::io::{self, Write};

use serde::Serialize;
use serde_json::{json, Value};

pub const SCHEMA_VERSION: u32 = 1;

/// Failure classes, each with its process exit code.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ErrorKind {
    Parse,
    NotPisot,
    Rounding,
    ExpectationFailed,
    Residual,
    Other,
}

impl ErrorKind {
    pub fn exit_code(self) -> i32 {
        match self {
            ErrorKind::Parse => 2,
            ErrorKind::NotPisot => 3,
            ErrorKind::Rounding => 4,
            ErrorKind::ExpectationFailed => 5,
            ErrorKind::Residual => 6,
            ErrorKind::Other => 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportError {
    pub kind: ErrorKind,
    pub message: String,
    #[serde(skip_serializing_if = "Value::is_null")]
    pub data: Value,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub command: String,
    pub inputs: Value,
    pub results: Vec<Value>,
    pub errors: Vec<ReportError>,
}

impl Report {
    pub fn new(command: impl Into<String>, inputs: Value) -> Self {
        Report { command: command.into(), inputs, results: Vec::new(), errors: Vec::new() }
    }

    pub fn push(&mut self, result: impl Serialize) {
        self.results.push(serde_json::to_value(result).expect("report payloads serialize"));
    }

    pub fn error(&mut self, kind: ErrorKind, message: impl Into<String>, data: Value) {
        self.errors.push(ReportError { kind, message: message.into(), data });
    }

    /// Exit code of the first error, 0 without errors.
    pub fn exit_code(&self) -> i32 {
        self.errors.first().map_or(0, |e| e.kind.exit_code())
    }

    pub fn lines(&self) -> Vec<Value> {
        let v = SCHEMA_VERSION;
        let mut out = vec![json!({
            "schema_version": v, "record": "header", "command": self.command, "inputs": self.inputs,
        })];
        out.extend(self.results.iter().enumerate().map(|(i, r)| {
            json!({ "schema_version": v, "record": "result", "index": i, "data": r })
        }));
        out.extend(self.errors.iter().map(|e| {
            let mut line = json!({ "schema_version": v, "record": "error" });
            line.as_object_mut().unwrap().extend(serde_json::to_value(e).unwrap().as_object().unwrap().clone());
            line
        }));
        out.push(json!({
            "schema_version": v,
            "record": "summary",
            "command": self.command,
            "results": self.results.len(),
            "errors": self.errors.len(),
            "exit_code": self.exit_code(),
        }));
        out
    }

    pub fn write_jsonl(&self, w: &mut impl Write) -> io::Result<()> {
        for line in self.lines() {
            serde_json::to_writer(&mut *w, &line)?;
            w.write_all(b"\n")?;
        }
        Ok(())
    }

    pub fn to_jsonl(&self) -> String {
        let mut buf = Vec::new();
        self.write_jsonl(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("json is utf-8")
    }
}

/// Serializes a `BigInt` as a decimal string.
pub mod decimal {
    use num_bigint::BigInt;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(v)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

/// Serializes a `Vec<BigInt>` as a list of decimal strings.
pub mod decimal_vec {
    use num_bigint::BigInt;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(|x| x.to_string()))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigInt>, D::Error> {
        Vec::<String>::deserialize(d)?
            .iter()
            .map(|s| s.parse().map_err(serde::de::Error::custom))
            .collect()
    }
}

/// True when `v` contains a JSON number that is not an integer.
pub fn has_bare_float(v: &Value) -> bool {
    match v {
        Value::Number(n) => !(n.is_i64() || n.is_u64()),
        Value::Array(a) => a.iter().any(has_bare_float),
        Value::Object(o) => o.values().any(has_bare_float),
        _ => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lines_are_framed() {
        let mut r = Report::new("certify", json!({ "poly": "-1,-1,1" }));
        r.push(json!({ "verdict": "pisot" }));
        r.error(ErrorKind::NotPisot, "x", Value::Null);
        let text = r.to_jsonl();
        let lines: Vec<Value> = text.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
        assert_eq!(lines.len(), 4);
        assert!(lines.iter().all(|l| l["schema_version"] == SCHEMA_VERSION));
        let kinds: Vec<_> = lines.iter().map(|l| l["record"].as_str().unwrap()).collect();
        assert_eq!(kinds, ["header", "result", "error", "summary"]);
        assert_eq!(lines[2]["kind"], "not_pisot");
        assert_eq!(lines[3]["exit_code"], 3);
        assert_eq!(r.exit_code(), 3);
    }

    #[test]
    fn float_detection() {
        assert!(!has_bare_float(&json!({ "a": [1, -2, "0.5"] })));
        assert!(has_bare_float(&json!({ "a": [1, 0.5] })));
    }

    #[test]
    fn decimal_round_trip() {
        #[derive(Serialize, serde::Deserialize, PartialEq, Debug)]
        struct W {
            #[serde(with = "decimal")]
            a: num_bigint::BigInt,
            #[serde(with = "decimal_vec")]
            b: Vec<num_bigint::BigInt>,
        }
        let w = W { a: num_bigint::BigInt::from(-7) << 100, b: vec![1.into(), (-2).into()] };
        let s = serde_json::to_string(&w).unwrap();
        assert!(s.contains("\"-8873554201597605810476922437632\""));
        assert_eq!(serde_json::from_str::<W>(&s).unwrap(), w);
    }
}
