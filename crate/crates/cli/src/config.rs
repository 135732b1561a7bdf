//! The `--config` file: TOML with the same keys as the global flags.

use std::path::Path;

use anyhow::Context;
use khwidth::khovanov::Method;
use serde::Deserialize;

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct Raw {
    threads: Option<usize>,
    max_crossings: Option<usize>,
    json: Option<bool>,
    ascii: Option<bool>,
    method: Option<String>,
}

#[derive(Debug, Default)]
pub struct FileConfig {
    pub threads: Option<usize>,
    pub max_crossings: Option<usize>,
    pub json: Option<bool>,
    pub ascii: Option<bool>,
    pub method: Option<Method>,
}

pub fn parse(text: &str) -> anyhow::Result<FileConfig> {
    let raw: Raw = toml::from_str(text).map_err(|e| crate::usage(format!("config: {e}")))?;
    let method = match raw.method.as_deref() {
        None => None,
        Some("auto") => Some(Method::Auto),
        Some("cube") => Some(Method::Cube),
        Some("scan") => Some(Method::Scan),
        Some(other) => return Err(crate::usage(format!("config: unknown method {other:?}"))),
    };
    Ok(FileConfig { threads: raw.threads, max_crossings: raw.max_crossings, json: raw.json, ascii: raw.ascii, method })
}

pub fn load(path: &Path) -> anyhow::Result<FileConfig> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse(&text)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn keys() {
        let c = parse("threads = 2\nmax_crossings = 12\nmethod = \"scan\"\njson = true\n").unwrap();
        assert_eq!(c.threads, Some(2));
        assert_eq!(c.max_crossings, Some(12));
        assert_eq!(c.method, Some(Method::Scan));
        assert_eq!(c.json, Some(true));
        assert!(parse("colour = 3").is_err());
        assert!(parse("method = \"fast\"").is_err());
    }
}
