//! Flat `key=value` parameters: a config file, then `--set` overrides.
//!
//! Lines are `key = value`; blank lines and `#` comments are ignored.
//! Later assignments win. Keys are checked against the experiment's
//! parameter table, so a typo is an error rather than a silent default.

use std::collections::BTreeMap;
use std::fmt;

use ngd_core::filtering::Scaling;

use crate::error::{LabError, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Value {
    Float(f64),
    /// A number that defaults to a value derived from other parameters.
    OptFloat(Option<f64>),
    Count(usize),
    /// `None` means "derive from the other parameters".
    Window(Option<(f64, f64)>),
    Scaling(Scaling),
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Float(x) => write!(f, "{}", crate::format::num(*x)),
            Value::Count(n) => write!(f, "{n}"),
            Value::OptFloat(Some(x)) => write!(f, "{}", crate::format::num(*x)),
            Value::OptFloat(None) | Value::Window(None) => write!(f, "auto"),
            Value::Window(Some((a, b))) => {
                write!(f, "{},{}", crate::format::num(*a), crate::format::num(*b))
            }
            Value::Scaling(Scaling::Fixed) => write!(f, "fixed"),
            Value::Scaling(Scaling::InverseSqrtN) => write!(f, "inverse_sqrt_n"),
        }
    }
}

/// One accepted parameter of an experiment.
#[derive(Debug, Clone, Copy)]
pub struct ParamDef {
    pub key: &'static str,
    pub default: Value,
    pub doc: &'static str,
}

/// Raw assignments in the order they were given.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides(Vec<(String, String)>);

impl Overrides {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn set(&mut self, key: &str, value: &str) {
        self.0.push((
            canonical_key(key.trim()).to_string(),
            value.trim().to_string(),
        ));
    }

    /// Parse a single `key=value` assignment.
    pub fn push_assignment(&mut self, text: &str) -> Result<()> {
        let (k, v) = text
            .split_once('=')
            .ok_or_else(|| LabError::config(format!("expected key=value, got `{text}`")))?;
        if k.trim().is_empty() {
            return Err(LabError::config(format!("empty key in `{text}`")));
        }
        self.set(k, v);
        Ok(())
    }

    /// Parse the contents of a config file.
    pub fn push_file(&mut self, text: &str) -> Result<()> {
        for (n, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            self.push_assignment(line)
                .map_err(|e| LabError::config(format!("line {}: {e}", n + 1)))?;
        }
        Ok(())
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &str)> {
        self.0.iter().map(|(k, v)| (k.as_str(), v.as_str()))
    }
}

fn canonical_key(key: &str) -> &str {
    match key {
        "τ" => "tau",
        "ε" => "epsilon",
        other => other,
    }
}

/// Resolved parameter values for one run.
#[derive(Debug, Clone)]
pub struct Settings {
    values: BTreeMap<&'static str, Value>,
    order: Vec<&'static str>,
    overrides: Overrides,
}

impl Settings {
    pub fn resolve(params: &[ParamDef], overrides: &Overrides) -> Result<Self> {
        let mut values: BTreeMap<&'static str, Value> =
            params.iter().map(|p| (p.key, p.default)).collect();
        for (key, raw) in overrides.iter() {
            let def = params.iter().find(|p| p.key == key).ok_or_else(|| {
                let known: Vec<&str> = params.iter().map(|p| p.key).collect();
                LabError::config(format!(
                    "unknown key `{key}` (accepted: {})",
                    known.join(", ")
                ))
            })?;
            values.insert(def.key, parse_value(def, raw)?);
        }
        Ok(Settings {
            values,
            order: params.iter().map(|p| p.key).collect(),
            overrides: overrides.clone(),
        })
    }

    fn get(&self, key: &str) -> Value {
        *self
            .values
            .get(key)
            .unwrap_or_else(|| panic!("parameter `{key}` is not declared"))
    }

    pub fn f(&self, key: &str) -> f64 {
        match self.get(key) {
            Value::Float(x) => x,
            other => panic!("parameter `{key}` is {other:?}, not a number"),
        }
    }

    pub fn opt_f(&self, key: &str) -> Option<f64> {
        match self.get(key) {
            Value::OptFloat(x) => x,
            other => panic!("parameter `{key}` is {other:?}, not an optional number"),
        }
    }

    pub fn count(&self, key: &str) -> usize {
        match self.get(key) {
            Value::Count(n) => n,
            other => panic!("parameter `{key}` is {other:?}, not a count"),
        }
    }

    pub fn window(&self) -> Option<(f64, f64)> {
        match self.get("window") {
            Value::Window(w) => w,
            other => panic!("parameter `window` is {other:?}"),
        }
    }

    pub fn scaling(&self) -> Scaling {
        match self.get("scaling") {
            Value::Scaling(s) => s,
            other => panic!("parameter `scaling` is {other:?}"),
        }
    }

    /// `(key, value)` in declaration order.
    pub fn entries(&self) -> impl Iterator<Item = (&'static str, Value)> + '_ {
        self.order.iter().map(|k| (*k, self.values[k]))
    }

    pub fn overrides(&self) -> &Overrides {
        &self.overrides
    }
}

fn parse_value(def: &ParamDef, raw: &str) -> Result<Value> {
    let bad = |what: &str| LabError::config(format!("`{}`: {what}, got `{raw}`", def.key));
    let float = |s: &str| -> Result<f64> {
        let x: f64 = s.trim().parse().map_err(|_| bad("expected a number"))?;
        if x.is_finite() {
            Ok(x)
        } else {
            Err(bad("expected a finite number"))
        }
    };
    match def.default {
        Value::Float(_) => float(raw).map(Value::Float),
        Value::OptFloat(_) if raw == "auto" => Ok(Value::OptFloat(None)),
        Value::OptFloat(_) => float(raw).map(|x| Value::OptFloat(Some(x))),
        Value::Count(_) => raw
            .parse()
            .map(Value::Count)
            .map_err(|_| bad("expected a non-negative integer")),
        Value::Window(_) => {
            if raw == "auto" {
                return Ok(Value::Window(None));
            }
            let (a, b) = raw
                .split_once(',')
                .ok_or_else(|| bad("expected `start,end`"))?;
            let (a, b) = (float(a)?, float(b)?);
            if a >= b {
                return Err(bad("window start must precede its end"));
            }
            Ok(Value::Window(Some((a, b))))
        }
        Value::Scaling(_) => match raw {
            "fixed" => Ok(Value::Scaling(Scaling::Fixed)),
            "inverse_sqrt_n" => Ok(Value::Scaling(Scaling::InverseSqrtN)),
            _ => Err(bad("expected `fixed` or `inverse_sqrt_n`")),
        },
    }
}
