//! Deterministic serialization.
//!
//! Every float that reaches an output file goes through one of two fixed
//! formatters: [`float15`] for analysis quantities (15 significant digits,
//! scientific notation, dot decimal separator regardless of locale) and
//! [`float17`] for covariance-matrix entries (17 significant digits, enough
//! for exact f64 round-trips). JSON documents are assembled by hand so that
//! key order, indentation, and digit counts never depend on library
//! internals; the only JSON we parse is the config file.

use chrono::{SecondsFormat, Utc};
use panet::network::NetworkSpec;
use panet::symplectic::CovarianceMatrix;
use std::fmt::Write;

pub fn float15(x: f64) -> String {
    format!("{x:.14e}")
}

pub fn float17(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn json_escape(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for c in text.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            c if (c as u32) < 0x20 => {
                let _ = write!(out, "\\u{:04x}", c as u32);
            }
            c => out.push(c),
        }
    }
    out
}

/// `{"modes": 6, "theta": ..., "s1": ..., "s2": ...}`; the squeezing pair is
/// omitted for sweep runs, where it varies row by row.
pub fn spec_json(spec: &NetworkSpec, with_squeezing: bool) -> String {
    let mut out = format!(
        "{{\"modes\": {}, \"theta\": {}",
        spec.n_modes,
        float15(spec.theta)
    );
    if with_squeezing {
        let _ = write!(
            out,
            ", \"s1\": {}, \"s2\": {}",
            float15(spec.s1),
            float15(spec.s2)
        );
    }
    out.push('}');
    out
}

/// The covariance matrix as the fixed ingestion schema, one matrix row per
/// line, entries at full precision.
pub fn cm_json(cm: &CovarianceMatrix) -> String {
    let m = cm.matrix();
    let dim = m.nrows();
    let mut out = String::new();
    out.push_str("{\n");
    let _ = writeln!(out, "  \"modes\": {},", cm.n_modes());
    out.push_str("  \"ordering\": \"XYXY\",\n");
    out.push_str("  \"vacuum_variance\": 1.0,\n");
    out.push_str("  \"matrix\": [\n");
    for r in 0..dim {
        let row: Vec<String> = (0..dim).map(|c| float17(m[(r, c)])).collect();
        let comma = if r + 1 < dim { "," } else { "" };
        let _ = writeln!(out, "    [{}]{comma}", row.join(", "));
    }
    out.push_str("  ]\n}\n");
    out
}

/// The run manifest that accompanies every output file as a
/// `<name>.manifest.json` sidecar: tool identity, the measurement
/// conventions the numbers silently assume, the resolved network spec, the
/// sweep, and a command-specific summary.
pub struct Manifest<'a> {
    pub command: &'a str,
    pub spec: &'a NetworkSpec,
    pub spec_with_squeezing: bool,
    pub sweep_json: String,
    pub summary_json: Option<String>,
}

impl Manifest<'_> {
    pub fn render(&self) -> String {
        let mut out = String::new();
        out.push_str("{\n");
        out.push_str("  \"tool\": \"panet\",\n");
        let _ = writeln!(out, "  \"version\": \"{}\",", env!("CARGO_PKG_VERSION"));
        let _ = writeln!(out, "  \"command\": \"{}\",", json_escape(self.command));
        let _ = writeln!(
            out,
            "  \"generated_at\": \"{}\",",
            Utc::now().to_rfc3339_opts(SecondsFormat::Secs, true)
        );
        out.push_str("  \"conventions\": {\n");
        out.push_str("    \"quadrature_ordering\": \"XYXY\",\n");
        out.push_str("    \"vacuum_variance\": 1.0,\n");
        out.push_str(
            "    \"nu\": \"absolute eigenvalues of i*Omega*sigma; nu < 1 after partial transpose witnesses entanglement\",\n",
        );
        out.push_str("    \"entropy\": \"base-2 logarithm, reported in bits\"\n");
        out.push_str("  },\n");
        let _ = writeln!(
            out,
            "  \"spec\": {},",
            spec_json(self.spec, self.spec_with_squeezing)
        );
        let _ = write!(out, "  \"sweep\": {}", self.sweep_json);
        if let Some(summary) = &self.summary_json {
            let _ = write!(out, ",\n  \"summary\": {summary}");
        }
        out.push_str("\n}\n");
        out
    }
}
