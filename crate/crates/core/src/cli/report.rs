//! Reports: exact values as `"p/q"` strings, floats only under `display_only`.

use num_bigint::BigInt;
use serde_json::{json, Map, Value};

use crate::charge::GaussRational;
use crate::check::Check;
use crate::lattice::{CohVector, NsClass};
use crate::rational::{format_rational, to_f64, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    Ok,
    /// A regime or hypothesis check failed; exit code 2.
    RegimeFailure,
    /// The input violates an invariant; exit code 1.
    Invalid,
}

impl Outcome {
    pub fn exit_code(self) -> i32 {
        match self {
            Outcome::Ok => 0,
            Outcome::Invalid => 1,
            Outcome::RegimeFailure => 2,
        }
    }

    fn as_str(self) -> &'static str {
        match self {
            Outcome::Ok => "ok",
            Outcome::RegimeFailure => "regime_failure",
            Outcome::Invalid => "invalid",
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

/// Data behind the scan diagram.
#[derive(Clone, Debug, PartialEq)]
pub struct ScanPlot {
    pub t_max_sq: Rational,
    /// `(t², label)` in ascending `t²`.
    pub hits: Vec<(Rational, String)>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub command: String,
    pub inputs: Map<String, Value>,
    pub results: Map<String, Value>,
    pub display_only: Map<String, Value>,
    pub checks: Vec<Check>,
    pub table: Option<Table>,
    pub outcome: Outcome,
    pub plot: Option<ScanPlot>,
}

impl Report {
    pub fn new(command: &str) -> Self {
        Report {
            command: command.to_string(),
            inputs: Map::new(),
            results: Map::new(),
            display_only: Map::new(),
            checks: Vec::new(),
            table: None,
            outcome: Outcome::Ok,
            plot: None,
        }
    }

    pub fn input(&mut self, key: &str, value: Value) {
        self.inputs.insert(key.to_string(), value);
    }

    pub fn result(&mut self, key: &str, value: Value) {
        self.results.insert(key.to_string(), value);
    }

    pub fn display(&mut self, key: &str, value: Value) {
        self.display_only.insert(key.to_string(), value);
    }

    pub fn check(&mut self, c: Check) {
        self.checks.push(c);
    }

    /// Marks the report as a regime failure if any of `checks` failed.
    pub fn require(&mut self, checks: &[Check]) {
        if checks.iter().any(|c| !c.passed) && self.outcome == Outcome::Ok {
            self.outcome = Outcome::RegimeFailure;
        }
    }

    pub fn to_value(&self) -> Value {
        let mut out = Map::new();
        out.insert("command".into(), json!(self.command));
        out.insert("inputs".into(), Value::Object(self.inputs.clone()));
        out.insert("results".into(), Value::Object(self.results.clone()));
        if !self.display_only.is_empty() {
            out.insert("display_only".into(), Value::Object(self.display_only.clone()));
        }
        out.insert(
            "checks".into(),
            serde_json::to_value(&self.checks).expect("checks serialize"),
        );
        out.insert("status".into(), json!(self.outcome.as_str()));
        Value::Object(out)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_value()).expect("report serializes");
        s.push('\n');
        s
    }

    /// One row per wall or charge when the command has a natural table,
    /// otherwise `field,value` rows over the flattened results.
    pub fn to_csv(&self) -> String {
        let table = self.table.clone().unwrap_or_else(|| {
            let mut rows = Vec::new();
            flatten("", &Value::Object(self.results.clone()), &mut rows);
            Table {
                header: vec!["field".into(), "value".into()],
                rows,
            }
        });
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&table.header).expect("in-memory write");
        for row in &table.rows {
            w.write_record(row).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8")
    }
}

fn flatten(prefix: &str, v: &Value, out: &mut Vec<Vec<String>>) {
    let join = |k: &str| {
        if prefix.is_empty() {
            k.to_string()
        } else {
            format!("{prefix}.{k}")
        }
    };
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                flatten(&join(k), x, out);
            }
        }
        Value::Array(items) if items.iter().all(|x| x.is_string()) => {
            let parts: Vec<&str> = items.iter().filter_map(Value::as_str).collect();
            out.push(vec![prefix.to_string(), format!("({})", parts.join(","))]);
        }
        Value::Array(items) => {
            for (i, x) in items.iter().enumerate() {
                flatten(&join(&i.to_string()), x, out);
            }
        }
        Value::String(s) => out.push(vec![prefix.to_string(), s.clone()]),
        other => out.push(vec![prefix.to_string(), other.to_string()]),
    }
}

pub fn q(x: &Rational) -> Value {
    Value::String(format_rational(x))
}

pub fn q_list(xs: &[Rational]) -> Value {
    Value::Array(xs.iter().map(q).collect())
}

pub fn class_value(c: &NsClass) -> Value {
    q_list(c.coords())
}

/// `[r, ns…, s]`, the same layout the vector flags use.
pub fn vector_value(v: &CohVector) -> Value {
    q_list(&v.coords())
}

pub fn int_list(xs: &[BigInt]) -> Value {
    Value::Array(xs.iter().map(|x| Value::String(x.to_string())).collect())
}

pub fn gauss_value(z: &GaussRational) -> Value {
    json!({ "re": q(&z.re), "im": q(&z.im) })
}

pub fn tuple_text(xs: &[Rational]) -> String {
    let parts: Vec<String> = xs.iter().map(format_rational).collect();
    format!("({})", parts.join(","))
}

pub fn float(x: &Rational) -> Value {
    json!(to_f64(x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::frac;

    #[test]
    fn json_is_sorted_and_exact() {
        let mut r = Report::new("pair");
        r.result("value", q(&frac(-1, 1)));
        r.result("alpha", q(&frac(3, 4)));
        let text = r.to_json();
        assert!(text.find("\"alpha\"").unwrap() < text.find("\"value\"").unwrap());
        assert!(text.contains("\"3/4\""));
        assert!(!text.contains("display_only"));
    }

    #[test]
    fn csv_flattens_results() {
        let mut r = Report::new("x");
        r.result("v", q_list(&[frac(1, 2), frac(0, 1)]));
        r.result("z", json!({"re": "1", "im": "-2"}));
        assert_eq!(r.to_csv(), "field,value\nv,\"(1/2,0)\"\nz.im,-2\nz.re,1\n");
    }

    #[test]
    fn require_sets_regime_failure() {
        let mut r = Report::new("x");
        r.require(&[Check::new("a", true, ""), Check::new("b", false, "")]);
        assert_eq!(r.outcome.exit_code(), 2);
    }
}
