//! Equation files.
//!
//! An equation is stored as UTF-8 JSON:
//!
//! ```json
//! {
//!   "order": 2,
//!   "coefficients": [
//!     {"type": "periodic", "period": ["-1", "-1"]},
//!     {"type": "perturbed", "period": ["1"], "exceptions": [{"n": 0, "value": "0"}]},
//!     {"type": "oracle", "rule": {"kind": "step", "below": "1", "from": "0"}}
//!   ]
//! }
//! ```
//!
//! Coefficients are listed a_0 ... a_r; rationals are the strings "p" or
//! "p/q" with q > 0 after normalization; unknown fields are rejected. The
//! "oracle" type marks the coefficient kinds outside the decidable class;
//! its rules are:
//!
//! - `step`: a two-phase constant (fields `below`, `from`);
//! - `signal`: the signal-equation trailing coefficient built on an external
//!   sequence (optional field `command`);
//! - `prefix-nonzero`: the all-nonzero-prefix flag of an external sequence
//!   (optional field `command`);
//! - `external`: the external sequence itself as a coefficient (optional
//!   field `command`);
//! - `interleave`: round-robin interleaving (field `parts`, a list of
//!   coefficient objects).
//!
//! Rules that need an external sequence take their command from the file or
//! from an override supplied by the caller; all rules naming the same
//! command share a single process and cache.

use std::collections::HashMap;
use std::path::Path;
use std::time::Duration;

use serde_json::{json, Map, Value};

use crate::equation::DifferenceEquation;
use crate::error::FormatError;
use crate::rat::{format_rat, parse_rat, Rat};
use crate::sequence::{OracleSequence, PeriodicSequence, PerturbedSequence, Sequence};
use crate::subprocess::{command_oracle, default_timeout};

/// Reads equation files, resolving oracle rules to subprocess-backed
/// sequences. One reader instantiates at most one process per distinct
/// command, so every rule in a file sees a consistent view of the sequence.
pub struct EquationReader {
    /// When set, overrides (or supplies) the command of every oracle rule.
    pub oracle_command: Option<String>,
    /// Per-request timeout for subprocess oracles.
    pub timeout: Duration,
    handles: HashMap<String, OracleSequence>,
}

impl Default for EquationReader {
    fn default() -> Self {
        Self::new()
    }
}

impl EquationReader {
    pub fn new() -> Self {
        EquationReader {
            oracle_command: None,
            timeout: default_timeout(),
            handles: HashMap::new(),
        }
    }

    pub fn with_command(mut self, command: Option<String>) -> Self {
        self.oracle_command = command;
        self
    }

    pub fn read(&mut self, path: impl AsRef<Path>) -> Result<DifferenceEquation, FormatError> {
        let text = std::fs::read_to_string(path)?;
        self.read_str(&text)
    }

    pub fn read_str(&mut self, text: &str) -> Result<DifferenceEquation, FormatError> {
        let value: Value =
            serde_json::from_str(text).map_err(|e| FormatError::Json(e.to_string()))?;
        let obj = as_object(&value, "top level")?;
        check_fields(obj, &["order", "coefficients"], "top level")?;
        let order = obj
            .get("order")
            .and_then(Value::as_u64)
            .ok_or_else(|| FormatError::Malformed("missing or invalid \"order\"".into()))?
            as usize;
        let coeffs = obj
            .get("coefficients")
            .and_then(Value::as_array)
            .ok_or_else(|| FormatError::Malformed("missing or invalid \"coefficients\"".into()))?;
        if coeffs.len() != order + 1 {
            return Err(FormatError::Malformed(format!(
                "order {} requires {} coefficients, found {}",
                order,
                order + 1,
                coeffs.len()
            )));
        }
        let coeffs = coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| {
                self.parse_coefficient(c)
                    .map_err(|e| prefix_error(e, &format!("coefficient {i}")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(DifferenceEquation::new(coeffs))
    }

    fn parse_coefficient(&mut self, v: &Value) -> Result<Sequence, FormatError> {
        let obj = as_object(v, "coefficient")?;
        let typ = obj
            .get("type")
            .and_then(Value::as_str)
            .ok_or_else(|| FormatError::Malformed("missing \"type\"".into()))?;
        match typ {
            "periodic" => {
                check_fields(obj, &["type", "period"], "periodic coefficient")?;
                Ok(Sequence::Periodic(parse_period(obj)?))
            }
            "perturbed" => {
                check_fields(
                    obj,
                    &["type", "period", "exceptions"],
                    "perturbed coefficient",
                )?;
                let base = parse_period(obj)?;
                let entries = obj
                    .get("exceptions")
                    .and_then(Value::as_array)
                    .ok_or_else(|| FormatError::Malformed("missing \"exceptions\" list".into()))?;
                let mut exceptions = std::collections::BTreeMap::new();
                for e in entries {
                    let eo = as_object(e, "exception")?;
                    check_fields(eo, &["n", "value"], "exception")?;
                    let n = eo.get("n").and_then(Value::as_i64).ok_or_else(|| {
                        FormatError::Malformed("exception needs integer \"n\"".into())
                    })?;
                    let value = parse_rat_field(eo, "value")?;
                    exceptions.insert(n, value);
                }
                Ok(Sequence::Perturbed(PerturbedSequence::new(
                    base, exceptions,
                )))
            }
            "oracle" => {
                check_fields(obj, &["type", "rule"], "oracle coefficient")?;
                let rule = obj.get("rule").ok_or_else(|| {
                    FormatError::Malformed("oracle coefficient needs a \"rule\"".into())
                })?;
                self.parse_rule(rule)
            }
            other => Err(FormatError::Malformed(format!(
                "unknown coefficient type {other:?}"
            ))),
        }
    }

    fn parse_rule(&mut self, v: &Value) -> Result<Sequence, FormatError> {
        let obj = as_object(v, "oracle rule")?;
        let kind = obj
            .get("kind")
            .and_then(Value::as_str)
            .ok_or_else(|| FormatError::Malformed("oracle rule needs a \"kind\"".into()))?;
        match kind {
            "step" => {
                check_fields(obj, &["kind", "below", "from"], "step rule")?;
                Ok(Sequence::Step {
                    below: parse_rat_field(obj, "below")?,
                    from: parse_rat_field(obj, "from")?,
                })
            }
            "signal" => {
                check_fields(obj, &["kind", "command"], "signal rule")?;
                let v = self.resolve_oracle(obj)?;
                Ok(Sequence::SignalCoeff { v })
            }
            "prefix-nonzero" => {
                check_fields(obj, &["kind", "command"], "prefix-nonzero rule")?;
                let v = self.resolve_oracle(obj)?;
                Ok(Sequence::NonzeroPrefixFlag { v })
            }
            "external" => {
                check_fields(obj, &["kind", "command"], "external rule")?;
                let v = self.resolve_oracle(obj)?;
                Ok(Sequence::Oracle(v))
            }
            "interleave" => {
                check_fields(obj, &["kind", "parts"], "interleave rule")?;
                let parts = obj.get("parts").and_then(Value::as_array).ok_or_else(|| {
                    FormatError::Malformed("interleave rule needs \"parts\"".into())
                })?;
                if parts.len() < 2 {
                    return Err(FormatError::Malformed(
                        "interleave rule needs at least two parts".into(),
                    ));
                }
                let parts = parts
                    .iter()
                    .map(|p| self.parse_coefficient(p))
                    .collect::<Result<Vec<_>, _>>()?;
                Ok(Sequence::Interleaved(parts))
            }
            other => Err(FormatError::Malformed(format!(
                "unknown oracle rule kind {other:?}"
            ))),
        }
    }

    fn resolve_oracle(&mut self, obj: &Map<String, Value>) -> Result<OracleSequence, FormatError> {
        let file_command = match obj.get("command") {
            None => None,
            Some(Value::String(s)) => Some(s.clone()),
            Some(_) => {
                return Err(FormatError::Malformed(
                    "\"command\" must be a string".into(),
                ));
            }
        };
        let command = self
            .oracle_command
            .clone()
            .or(file_command)
            .ok_or(FormatError::MissingOracleCommand)?;
        let timeout = self.timeout;
        Ok(self
            .handles
            .entry(command.clone())
            .or_insert_with(|| command_oracle(command, timeout))
            .clone())
    }
}

/// Read an equation file with default settings (oracle commands must be
/// present in the file itself).
pub fn read_equation(path: impl AsRef<Path>) -> Result<DifferenceEquation, FormatError> {
    EquationReader::new().read(path)
}

/// Serialize an equation to its JSON file form.
pub fn equation_to_json(e: &DifferenceEquation) -> Result<Value, FormatError> {
    let coefficients = e
        .coeffs()
        .iter()
        .enumerate()
        .map(|(i, c)| coefficient_to_json(c, i))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(json!({
        "order": e.order(),
        "coefficients": coefficients,
    }))
}

/// Write an equation file (pretty-printed JSON plus trailing newline).
pub fn write_equation(e: &DifferenceEquation, path: impl AsRef<Path>) -> Result<(), FormatError> {
    let value = equation_to_json(e)?;
    let mut text = serde_json::to_string_pretty(&value).expect("JSON serialization");
    text.push('\n');
    std::fs::write(path, text)?;
    Ok(())
}

fn coefficient_to_json(c: &Sequence, index: usize) -> Result<Value, FormatError> {
    let command_of = |o: &OracleSequence| -> Result<Value, FormatError> {
        match o.command() {
            Some(cmd) => Ok(Value::String(cmd.to_string())),
            None => Err(FormatError::UnserializableOracle { index }),
        }
    };
    Ok(match c {
        Sequence::Periodic(p) => json!({
            "type": "periodic",
            "period": period_strings(p),
        }),
        Sequence::Perturbed(p) if p.exceptions().is_empty() => json!({
            "type": "periodic",
            "period": period_strings(p.base()),
        }),
        Sequence::Perturbed(p) => json!({
            "type": "perturbed",
            "period": period_strings(p.base()),
            "exceptions": p
                .exceptions()
                .iter()
                .map(|(n, v)| json!({"n": n, "value": format_rat(v)}))
                .collect::<Vec<_>>(),
        }),
        Sequence::Step { below, from } => json!({
            "type": "oracle",
            "rule": {"kind": "step", "below": format_rat(below), "from": format_rat(from)},
        }),
        Sequence::SignalCoeff { v } => json!({
            "type": "oracle",
            "rule": {"kind": "signal", "command": command_of(v)?},
        }),
        Sequence::NonzeroPrefixFlag { v } => json!({
            "type": "oracle",
            "rule": {"kind": "prefix-nonzero", "command": command_of(v)?},
        }),
        Sequence::Oracle(v) => json!({
            "type": "oracle",
            "rule": {"kind": "external", "command": command_of(v)?},
        }),
        Sequence::Interleaved(parts) => json!({
            "type": "oracle",
            "rule": {
                "kind": "interleave",
                "parts": parts
                    .iter()
                    .map(|p| coefficient_to_json(p, index))
                    .collect::<Result<Vec<_>, _>>()?,
            },
        }),
    })
}

fn period_strings(p: &PeriodicSequence) -> Vec<String> {
    p.period().iter().map(format_rat).collect()
}

fn as_object<'a>(v: &'a Value, what: &str) -> Result<&'a Map<String, Value>, FormatError> {
    v.as_object()
        .ok_or_else(|| FormatError::Malformed(format!("{what} must be a JSON object")))
}

fn check_fields(obj: &Map<String, Value>, allowed: &[&str], what: &str) -> Result<(), FormatError> {
    for key in obj.keys() {
        if !allowed.contains(&key.as_str()) {
            return Err(FormatError::Malformed(format!(
                "unknown field {key:?} in {what}"
            )));
        }
    }
    Ok(())
}

fn parse_rat_field(obj: &Map<String, Value>, field: &str) -> Result<Rat, FormatError> {
    let s = obj
        .get(field)
        .and_then(Value::as_str)
        .ok_or_else(|| FormatError::Malformed(format!("missing rational string {field:?}")))?;
    parse_rat(s).map_err(FormatError::Malformed)
}

fn parse_period(obj: &Map<String, Value>) -> Result<PeriodicSequence, FormatError> {
    let entries = obj
        .get("period")
        .and_then(Value::as_array)
        .ok_or_else(|| FormatError::Malformed("missing \"period\" list".into()))?;
    if entries.is_empty() {
        return Err(FormatError::Malformed("empty period".into()));
    }
    let values = entries
        .iter()
        .map(|v| {
            v.as_str()
                .ok_or_else(|| FormatError::Malformed("period entries must be strings".into()))
                .and_then(|s| parse_rat(s).map_err(FormatError::Malformed))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(PeriodicSequence::new(values))
}

fn prefix_error(e: FormatError, context: &str) -> FormatError {
    match e {
        FormatError::Malformed(msg) => FormatError::Malformed(format!("{context}: {msg}")),
        other => other,
    }
}
