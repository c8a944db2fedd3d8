//! Flag sets double as JSON config records: keys are the long flag names,
//! and a flag given on the command line wins over the file.

use crate::error::{CliError, CliResult};
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::{Map, Value};
use std::path::Path;

fn to_object(v: &impl Serialize) -> Map<String, Value> {
    match serde_json::to_value(v).expect("flag records serialize") {
        Value::Object(m) => m,
        _ => unreachable!("flag records are structs"),
    }
}

/// Overlays the flags that were set onto the config file, if any.
pub fn merge<T: Serialize + DeserializeOwned>(flags: &T, config: Option<&Path>) -> CliResult<T> {
    let Some(path) = config else {
        return Ok(serde_json::from_value(Value::Object(to_object(flags))).expect("round trip"));
    };
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::io(format!("cannot read {}", path.display()), e))?;
    let bad = |msg: String| CliError::Usage(format!("{}: {msg}", path.display()));
    let mut base = match serde_json::from_str::<Value>(&text).map_err(|e| bad(e.to_string()))? {
        Value::Object(m) => m,
        _ => return Err(bad("config must be a JSON object".into())),
    };
    let flags = to_object(flags);
    if let Some(k) = base.keys().find(|k| !flags.contains_key(*k)) {
        return Err(bad(format!("unknown key `{k}`")));
    }
    for (k, v) in flags {
        if !v.is_null() {
            base.insert(k, v);
        }
    }
    serde_json::from_value(Value::Object(base)).map_err(|e| bad(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde::Deserialize;

    #[derive(Serialize, Deserialize, Default, Debug, PartialEq)]
    #[serde(default, rename_all = "kebab-case")]
    struct F {
        seed: Option<u64>,
        batch_size: Option<usize>,
    }

    #[test]
    fn flags_win_over_file() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("c.json");
        std::fs::write(&p, r#"{"seed": 4, "batch-size": 32}"#).unwrap();
        let got = merge(
            &F {
                seed: Some(9),
                batch_size: None,
            },
            Some(&p),
        )
        .unwrap();
        assert_eq!(
            got,
            F {
                seed: Some(9),
                batch_size: Some(32)
            }
        );
        std::fs::write(&p, r#"{"sead": 4}"#).unwrap();
        assert!(matches!(
            merge(&F::default(), Some(&p)),
            Err(CliError::Usage(_))
        ));
        std::fs::write(&p, r#"{"seed": "x"}"#).unwrap();
        assert!(matches!(
            merge(&F::default(), Some(&p)),
            Err(CliError::Usage(_))
        ));
        assert_eq!(merge(&F::default(), None).unwrap(), F::default());
    }
}
