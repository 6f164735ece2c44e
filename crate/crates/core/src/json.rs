//! JSON decoding with the location of the first schema error.

use serde::de::DeserializeOwned;

use crate::error::{Error, Result};

fn located(path: &serde_path_to_error::Path, inner: impl std::fmt::Display) -> Error {
    let path = path.to_string();
    if path == "." {
        Error::Parse(inner.to_string())
    } else {
        Error::Parse(format!("at `{path}`: {inner}"))
    }
}

pub fn from_str<T: DeserializeOwned>(text: &str) -> Result<T> {
    let mut de = serde_json::Deserializer::from_str(text);
    let value =
        serde_path_to_error::deserialize(&mut de).map_err(|e| located(e.path(), e.inner()))?;
    de.end().map_err(|e| Error::Parse(e.to_string()))?;
    Ok(value)
}

pub fn from_value<T: DeserializeOwned>(value: serde_json::Value) -> Result<T> {
    serde_path_to_error::deserialize(value).map_err(|e| located(e.path(), e.inner()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[derive(Debug, serde::Deserialize)]
    #[serde(deny_unknown_fields)]
    struct Inner {
        #[allow(dead_code)]
        x: u32,
    }

    #[derive(Debug, serde::Deserialize)]
    struct Outer {
        #[allow(dead_code)]
        items: Vec<Inner>,
    }

    #[test]
    fn reports_path() {
        let err = from_str::<Outer>(r#"{"items":[{"x":1},{"x":"no"}]}"#).unwrap_err();
        assert!(err.to_string().contains("items[1].x"), "{err}");
        assert!(from_str::<Outer>(r#"{"items":[]} trailing"#).is_err());
    }
}
