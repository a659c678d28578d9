//! INI-style configuration: `key = value` lines under `[subcommand]`
//! headers. Keys before the first header apply to every subcommand.
//! Resolution order is defaults, then file, then flags.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::{Map, Number, Value};

use super::CliError;

#[derive(Debug, Clone, Default, PartialEq)]
pub struct IniFile {
    /// Section name ("" for the preamble) to ordered key/value pairs.
    pub sections: BTreeMap<String, Vec<(String, String)>>,
}

impl IniFile {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut sections: BTreeMap<String, Vec<(String, String)>> = BTreeMap::new();
        let mut current = String::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') || line.starts_with(';') {
                continue;
            }
            if let Some(rest) = line.strip_prefix('[') {
                let name = rest
                    .strip_suffix(']')
                    .ok_or_else(|| CliError::Config(format!("line {}: unterminated section header", lineno + 1)))?;
                current = name.trim().to_string();
                sections.entry(current.clone()).or_default();
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| CliError::Config(format!("line {}: expected key = value", lineno + 1)))?;
            let key = normalize_key(key.trim());
            if key.is_empty() {
                return Err(CliError::Config(format!("line {}: empty key", lineno + 1)));
            }
            sections
                .entry(current.clone())
                .or_default()
                .push((key, unquote(value.trim()).to_string()));
        }
        Ok(Self { sections })
    }

    pub fn read(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    /// Preamble entries followed by the named section's.
    pub fn entries_for(&self, section: &str) -> Vec<(String, String)> {
        let mut out = self.sections.get("").cloned().unwrap_or_default();
        if !section.is_empty() {
            out.extend(self.sections.get(section).cloned().unwrap_or_default());
        }
        out
    }
}

fn normalize_key(k: &str) -> String {
    k.replace('-', "_")
}

fn unquote(v: &str) -> &str {
    v.strip_prefix('"').and_then(|s| s.strip_suffix('"')).unwrap_or(v)
}

/// Interprets `raw` according to the type of the default it replaces.
fn coerce(key: &str, raw: &str, current: &Value) -> Result<Value, CliError> {
    let bad = |what: &str| CliError::Config(format!("{key}: expected {what}, got {raw:?}"));
    Ok(match current {
        Value::Bool(_) => Value::Bool(raw.parse().map_err(|_| bad("true or false"))?),
        Value::Number(n) if n.is_f64() => number(raw).ok_or_else(|| bad("a number"))?,
        Value::Number(_) => Value::Number(raw.parse::<u64>().map_err(|_| bad("a non-negative integer"))?.into()),
        Value::String(_) => Value::String(raw.to_string()),
        // Unset optional: numbers and booleans are recognized, anything else is text.
        Value::Null => number(raw)
            .or_else(|| raw.parse::<bool>().ok().map(Value::Bool))
            .unwrap_or_else(|| Value::String(raw.to_string())),
        Value::Array(_) | Value::Object(_) => return Err(bad("a scalar")),
    })
}

fn number(raw: &str) -> Option<Value> {
    if let Ok(i) = raw.parse::<u64>() {
        return Some(Value::Number(i.into()));
    }
    let x: f64 = raw.parse().ok()?;
    Number::from_f64(x).map(Value::Number)
}

/// Merges defaults, the file section and the non-null flag values.
pub fn resolve<C, F>(section: &str, file: Option<&IniFile>, flags: &F) -> Result<C, CliError>
where
    C: Serialize + DeserializeOwned + Default,
    F: Serialize,
{
    let mut merged = match serde_json::to_value(C::default()).expect("config serializes") {
        Value::Object(m) => m,
        _ => unreachable!("configs are structs"),
    };
    if let Some(file) = file {
        for (key, raw) in file.entries_for(section) {
            let current = merged
                .get(&key)
                .ok_or_else(|| CliError::Config(format!("unknown key {key:?} for {section}")))?;
            let value = coerce(&key, &raw, current)?;
            merged.insert(key, value);
        }
    }
    if let Value::Object(flags) = serde_json::to_value(flags).expect("flags serialize") {
        for (key, value) in flags {
            if value.is_null() {
                continue;
            }
            debug_assert!(merged.contains_key(&key), "flag {key} has no config field");
            merged.insert(key, value);
        }
    }
    serde_json::from_value(Value::Object(merged)).map_err(|e| CliError::Config(format!("{section}: {e}")))
}

/// One-section INI rendering of a resolved config; parses back to the same
/// config. Unset optional keys are omitted.
pub fn to_ini<C: Serialize>(section: &str, config: &C) -> String {
    let mut out = format!("[{section}]\n");
    if let Value::Object(map) = serde_json::to_value(config).expect("config serializes") {
        write_entries(&mut out, &map);
    }
    out
}

fn write_entries(out: &mut String, map: &Map<String, Value>) {
    for (k, v) in map {
        match v {
            Value::Null => {}
            Value::String(s) => {
                let _ = writeln!(out, "{k} = {s}");
            }
            // serde_json prints the shortest string that parses back exactly.
            other => {
                let _ = writeln!(out, "{k} = {other}");
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde::Deserialize;

    #[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
    struct Demo {
        temp: f64,
        points: usize,
        strict: bool,
        label: String,
        omega: Option<f64>,
    }

    impl Default for Demo {
        fn default() -> Self {
            Self {
                temp: 290.0,
                points: 500,
                strict: true,
                label: "x".into(),
                omega: None,
            }
        }
    }

    #[derive(Serialize)]
    struct Flags {
        #[serde(skip_serializing_if = "Option::is_none")]
        temp: Option<f64>,
        #[serde(skip_serializing_if = "Option::is_none")]
        points: Option<usize>,
    }

    #[test]
    fn flags_override_file_override_defaults() {
        let ini = IniFile::parse("points = 7\n# comment\n[demo]\ntemp = 4\nomega = 1.5e3\nstrict = false\n[other]\ntemp = 9\n").unwrap();
        let flags = Flags { temp: Some(1.25), points: None };
        let c: Demo = resolve("demo", Some(&ini), &flags).unwrap();
        assert_eq!(
            c,
            Demo {
                temp: 1.25,
                points: 7,
                strict: false,
                label: "x".into(),
                omega: Some(1.5e3)
            }
        );
    }

    #[test]
    fn bad_entries_are_config_errors() {
        let none = Flags { temp: None, points: None };
        for text in ["[demo]\nbogus = 1\n", "[demo]\npoints = 2.5\n", "[demo]\ntemp = warm\n", "[demo\n", "[demo]\njunk\n"] {
            let r = IniFile::parse(text).and_then(|ini| resolve::<Demo, _>("demo", Some(&ini), &none));
            assert!(matches!(r, Err(CliError::Config(_))), "{text:?}");
        }
    }

    #[test]
    fn ini_round_trip() {
        let c = Demo {
            temp: 0.1 + 0.2,
            points: 3,
            strict: false,
            label: "(1,1,1)".into(),
            omega: Some(1.0 / 3.0),
        };
        let ini = IniFile::parse(&to_ini("demo", &c)).unwrap();
        let back: Demo = resolve("demo", Some(&ini), &Flags { temp: None, points: None }).unwrap();
        assert_eq!(back, c);
        assert_eq!(back.temp.to_bits(), c.temp.to_bits());
    }
}
