//! JSON config loading with `key.path=value` overrides and strict, path-aware
//! deserialization.

use std::fmt;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::Value;

/// Bad arguments or configuration; maps to exit code 2.
#[derive(Debug)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

pub fn usage(msg: impl Into<String>) -> anyhow::Error {
    UsageError(msg.into()).into()
}

pub fn read_json(path: &Path) -> anyhow::Result<Value> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| usage(format!("{}: {e}", path.display())))
}

pub fn to_value<T: Serialize>(v: &T) -> anyhow::Result<Value> {
    Ok(serde_json::to_value(v)?)
}

/// Sets `a.b.c=value` inside `root`. The value is parsed as JSON when it
/// parses, otherwise taken as a string, so `seed=3` and `loss=mse` both work.
/// Missing keys are created; the strict schema rejects unknown ones later.
pub fn apply_set(root: &mut Value, assignment: &str) -> anyhow::Result<()> {
    let (path, raw) = assignment
        .split_once('=')
        .ok_or_else(|| usage(format!("override `{assignment}` is not of the form key=value")))?;
    if path.is_empty() {
        return Err(usage(format!("override `{assignment}` has an empty key")));
    }
    let value = serde_json::from_str(raw).unwrap_or_else(|_| Value::String(raw.to_string()));
    let mut cur = root;
    for seg in path.split('.') {
        if cur.is_null() {
            *cur = Value::Object(Default::default());
        }
        cur = match cur {
            Value::Object(map) => map.entry(seg.to_string()).or_insert(Value::Null),
            Value::Array(items) => {
                let i: usize = seg
                    .parse()
                    .map_err(|_| usage(format!("`{path}`: `{seg}` is not a list index")))?;
                let len = items.len();
                items
                    .get_mut(i)
                    .ok_or_else(|| usage(format!("`{path}`: index {i} out of range for {len} items")))?
            }
            _ => return Err(usage(format!("`{path}`: `{seg}` is inside a scalar"))),
        };
    }
    *cur = value;
    Ok(())
}

/// Deserializes with the JSON path of the first offending field in the error.
pub fn from_value<T: DeserializeOwned>(v: Value, what: &str) -> anyhow::Result<T> {
    serde_path_to_error::deserialize(v).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner();
        if path == "." {
            usage(format!("invalid {what}: {inner}"))
        } else {
            usage(format!("invalid {what} at `{path}`: {inner}"))
        }
    })
}

/// `base`, then each override, then strict deserialization.
pub fn layered<T: Serialize + DeserializeOwned>(base: Value, sets: &[String], what: &str) -> anyhow::Result<T> {
    let mut v = base;
    for s in sets {
        apply_set(&mut v, s)?;
    }
    from_value(v, what)
}

#[cfg(test)]
mod tests {
    use super::*;
    use reupload_lab::model::TrainConfig;

    #[test]
    fn nested_and_typed_overrides() {
        let mut v = serde_json::json!({"a": {"b": 1}, "xs": [1, 2]});
        apply_set(&mut v, "a.b=2.5").unwrap();
        apply_set(&mut v, "a.c=mse").unwrap();
        apply_set(&mut v, "xs.1=7").unwrap();
        assert_eq!(v, serde_json::json!({"a": {"b": 2.5, "c": "mse"}, "xs": [1, 7]}));
        assert!(apply_set(&mut v, "xs.5=1").is_err());
        assert!(apply_set(&mut v, "novalue").is_err());
    }

    #[test]
    fn unknown_key_names_the_path() {
        let base = to_value(&TrainConfig::default()).unwrap();
        let err = layered::<TrainConfig>(base.clone(), &["bogus=1".into()], "train config").unwrap_err();
        assert!(err.to_string().contains("bogus"), "{err}");
        let err = layered::<TrainConfig>(base.clone(), &["epochs=-1".into()], "train config").unwrap_err();
        assert!(err.to_string().contains("epochs"), "{err}");
        let ok: TrainConfig = layered(base, &["loss=mse".into(), "epochs=3".into()], "train config").unwrap();
        assert_eq!(ok.epochs, 3);
    }
}
