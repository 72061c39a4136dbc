//! Deterministic serialization of results: JSON, aligned text, and CSV.

use serde_json::{json, Value};

use crate::normal_form::{CandidateVerdict, NormalFormResult};
use crate::presentation::{word_to_string, Presentation};
use crate::{Error, Result};

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Format {
    Json,
    Text,
    Csv,
}

impl std::str::FromStr for Format {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(Format::Json),
            "text" => Ok(Format::Text),
            "csv" => Ok(Format::Csv),
            _ => Err(Error::Parse(format!("unknown format {s:?}"))),
        }
    }
}

pub fn result_json(r: &NormalFormResult) -> Value {
    json!({
        "p": r.class.p,
        "n": r.class.n,
        "g0": r.class.g0,
        "genus": r.class.g,
        "t": r.class.t(),
        "power": r.power,
        "matrix": r.matrix.to_json(),
        "trace": r.trace.to_string(),
        "order": r.order,
        "symplectic": r.symplectic,
        "relation": r.relation,
        "basis": r.basis.iter().map(|b| b.to_string()).collect::<Vec<_>>(),
    })
}

/// Render a normal-form result.
pub fn render(r: &NormalFormResult, format: Format) -> Result<Vec<u8>> {
    match format {
        Format::Json => Ok(serde_json::to_vec_pretty(&result_json(r)).expect("serializable")),
        Format::Text => {
            let mut s = String::new();
            s.push_str(&format!(
                "class: p = {}, n = ({}), g0 = {}, genus = {}, t = {}\n",
                r.class.p,
                r.class
                    .n
                    .iter()
                    .map(|x| x.to_string())
                    .collect::<Vec<_>>()
                    .join(","),
                r.class.g0,
                r.class.g,
                r.class.t()
            ));
            s.push_str(&format!(
                "power = {}, order = {}, trace = {}, symplectic = {}\n",
                r.power, r.order, r.trace, r.symplectic
            ));
            s.push_str(&format!(
                "basis: {}\n",
                r.basis
                    .iter()
                    .map(|b| b.to_string())
                    .collect::<Vec<_>>()
                    .join(" ")
            ));
            if !r.relation.is_empty() {
                s.push_str(&format!("relation: {}\n", r.relation));
            }
            s.push_str("matrix:\n");
            s.push_str(&r.matrix.to_string());
            Ok(s.into_bytes())
        }
        Format::Csv => {
            let mut s = String::from(csv_header());
            s.push_str(&csv_row(r));
            Ok(s.into_bytes())
        }
    }
}

pub fn csv_header() -> &'static str {
    "p,g0,t,n,genus,power,trace,order,symplectic\n"
}

pub fn csv_row(r: &NormalFormResult) -> String {
    format!(
        "{},{},{},{},{},{},{},{},{}\n",
        r.class.p,
        r.class.g0,
        r.class.t(),
        r.class
            .n
            .iter()
            .map(|x| x.to_string())
            .collect::<Vec<_>>()
            .join(";"),
        r.class.g,
        r.power,
        r.trace,
        r.order,
        r.symplectic
    )
}

pub fn presentation_json(p: &Presentation) -> Value {
    json!({
        "generators": p.generators.iter().map(|g| g.to_string()).collect::<Vec<_>>(),
        "relation": p.relation.iter().map(|l| l.to_string()).collect::<Vec<_>>(),
        "qhat": p.qhat.iter().map(|l| l.to_string()).collect::<Vec<_>>(),
        "lrhat": p.lrhat.iter().map(|l| l.to_string()).collect::<Vec<_>>(),
        "conjugators": p
            .conjugators
            .iter()
            .map(|(g, w)| (g.to_string(), Value::String(word_to_string(w))))
            .collect::<serde_json::Map<String, Value>>(),
    })
}

pub fn verdict_json(v: &CandidateVerdict) -> Value {
    json!({
        "order": v.order,
        "trace": v.trace.to_string(),
        "genus": v.genus,
        "derived_t": v.derived_t.to_string(),
        "verdict": v.verdict.to_string(),
        "admissible_tuples": v
            .tuples
            .iter()
            .map(|c| json!({"p": c.p, "n": c.n, "g0": c.g0}))
            .collect::<Vec<_>>(),
        "charpoly_matches": v
            .charpoly_matches
            .iter()
            .map(|c| json!({"p": c.p, "n": c.n, "g0": c.g0}))
            .collect::<Vec<_>>(),
    })
}
