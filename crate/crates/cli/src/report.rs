//! The JSON report written to stdout, and its plain-text rendering.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::problem::CNum;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CommandEcho {
    pub name: String,
    pub file: String,
    pub flags: BTreeMap<String, String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Report {
    pub command: CommandEcho,
    /// SHA-256 of the problem file bytes followed by the command echo.
    pub input_digest: String,
    pub results: Value,
    pub residuals: BTreeMap<String, f64>,
    pub warnings: Vec<String>,
    pub versions: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timestamp: Option<u64>,
}

pub fn versions() -> BTreeMap<String, String> {
    BTreeMap::from([
        ("conedet".to_string(), env!("CARGO_PKG_VERSION").to_string()),
        ("report_schema".to_string(), "1".to_string()),
    ])
}

pub fn digest(raw: &[u8], echo: &CommandEcho) -> String {
    let mut h = Sha256::new();
    h.update(raw);
    h.update(echo.name.as_bytes());
    for (k, v) in &echo.flags {
        h.update(b"\0");
        h.update(k.as_bytes());
        h.update(b"=");
        h.update(v.as_bytes());
    }
    hex::encode(h.finalize())
}

pub fn cnum(z: conedet_core::Complex64) -> Value {
    json!(CNum::from(z))
}

impl Report {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "conedet {} {}", self.command.name, self.command.file);
        for (k, v) in &self.command.flags {
            let _ = writeln!(out, "  --{k} {v}");
        }
        let _ = writeln!(out, "digest: {}", self.input_digest);
        if self.command.name == "singularities" {
            singularity_table(&self.results, &mut out);
        } else {
            flatten("", &self.results, &mut out);
        }
        if !self.residuals.is_empty() {
            let _ = writeln!(out, "residuals:");
            for (k, v) in &self.residuals {
                let _ = writeln!(out, "  {k:<32} {v:.3e}");
            }
        }
        for w in &self.warnings {
            let _ = writeln!(out, "warning: {w}");
        }
        out
    }
}

fn scalar_text(v: &Value) -> String {
    match v {
        Value::Object(m) if m.len() == 2 && m.contains_key("re") && m.contains_key("im") => {
            let re = m["re"].as_f64().unwrap_or(f64::NAN);
            let im = m["im"].as_f64().unwrap_or(f64::NAN);
            if im == 0.0 {
                format!("{re:.15e}")
            } else {
                format!("{re:.15e} {} {:.15e}i", if im < 0.0 { '-' } else { '+' }, im.abs())
            }
        }
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn is_scalar(v: &Value) -> bool {
    match v {
        Value::Object(m) => m.len() == 2 && m.contains_key("re") && m.contains_key("im"),
        Value::Array(a) => a.iter().all(|x| !x.is_object() && !x.is_array()),
        _ => true,
    }
}

fn flatten(prefix: &str, v: &Value, out: &mut String) {
    if is_scalar(v) {
        let _ = writeln!(out, "{prefix:<34} {}", scalar_text(v));
        return;
    }
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                flatten(&key, x, out);
            }
        }
        Value::Array(a) => {
            for (i, x) in a.iter().enumerate() {
                flatten(&format!("{prefix}[{i}]"), x, out);
            }
        }
        _ => unreachable!(),
    }
}

fn singularity_table(results: &Value, out: &mut String) {
    for key in ["j0", "q0", "log_branch_coeff_at_0", "alpha0_value", "a_j0alpha0", "gamma_tilde"] {
        if let Some(v) = results.get(key) {
            let _ = writeln!(out, "{key:<24} {}", scalar_text(v));
        }
    }
    let mut rows: BTreeMap<String, Vec<String>> = BTreeMap::new();
    let entries = |name: &str| results.get(name).and_then(Value::as_array).cloned().unwrap_or_default();
    for p in entries("poles") {
        rows.entry(xi_key(&p)).or_default().push(format!(
            "pole  order {:<3} p_xi {:<4} f(-xi) {}",
            p["order"],
            p["p_xi"],
            scalar_text(&p["f_at_minus_xi"])
        ));
    }
    for l in entries("logs") {
        rows.entry(xi_key(&l)).or_default().push(format!(
            "log   ell  {:<3}           g_lead {}",
            l["ell_xi"],
            scalar_text(&l["g_leading"])
        ));
    }
    let _ = writeln!(out, "{:<22} entry", "xi");
    if rows.is_empty() {
        let _ = writeln!(out, "(none)");
    }
    for (xi, lines) in rows {
        for line in lines {
            let _ = writeln!(out, "{xi:<22} {line}");
        }
    }
}

/// Zero-padded sort key so that ξ values order numerically.
fn xi_key(entry: &Value) -> String {
    let xi = entry["xi"].as_f64().unwrap_or(f64::NAN);
    format!("{xi:>21.15}")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Report {
        let echo = CommandEcho { name: "det".into(), file: "x.json".into(), flags: BTreeMap::new() };
        Report {
            input_digest: digest(b"{}", &echo),
            command: echo,
            results: json!({"value": {"re": 0.1 + 0.2, "im": -1e-300}, "method": "general"}),
            residuals: BTreeMap::from([("ratio_times_neumann".to_string(), 1.5e-16)]),
            warnings: vec![],
            versions: versions(),
            timestamp: None,
        }
    }

    #[test]
    fn json_round_trip_is_bit_exact() {
        let r = sample();
        let back: Report = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(back, r);
        assert_eq!(back.to_json(), r.to_json());
        assert_eq!(back.results["value"]["re"].as_f64().unwrap().to_bits(), (0.1f64 + 0.2).to_bits());
    }

    #[test]
    fn digest_depends_on_flags() {
        let mut echo = CommandEcho { name: "det".into(), file: "x".into(), flags: BTreeMap::new() };
        let d0 = digest(b"{}", &echo);
        echo.flags.insert("method".into(), "ratio".into());
        assert_ne!(d0, digest(b"{}", &echo));
    }

    #[test]
    fn text_rendering_lists_values() {
        let t = sample().to_text();
        assert!(t.contains("value"));
        assert!(t.contains("ratio_times_neumann"));
    }
}
