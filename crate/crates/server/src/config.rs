use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ConfigError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("missing required key {0:?}")]
    Missing(&'static str),
}

/// Settings read from a `key = value` file.
///
/// Keys: `bind`, `port`, `prefix`, `data` (comma-separated N-Triples
/// files, merged), `master`, `dump-dir`. `#` starts a comment line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ServerConfig {
    pub bind: String,
    pub port: u16,
    /// Path prefix of concept pages, with leading and trailing `/`.
    pub prefix: String,
    pub data: Vec<PathBuf>,
    pub master: Option<PathBuf>,
    pub dump_dir: Option<PathBuf>,
}

impl Default for ServerConfig {
    fn default() -> Self {
        ServerConfig {
            bind: "127.0.0.1".into(),
            port: 8080,
            prefix: "/resources/MSC/2010/".into(),
            data: Vec::new(),
            master: None,
            dump_dir: None,
        }
    }
}

impl ServerConfig {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut config = ServerConfig::default();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |message: String| ConfigError::Syntax { line: idx + 1, message };
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| err(format!("expected key = value, got {line:?}")))?;
            let value = value.trim();
            match key.trim() {
                "bind" => config.bind = value.to_owned(),
                "port" => config.port = value.parse().map_err(|_| err(format!("invalid port {value:?}")))?,
                "prefix" => {
                    if !value.starts_with('/') || !value.ends_with('/') {
                        return Err(err(format!("prefix must start and end with '/': {value:?}")));
                    }
                    config.prefix = value.to_owned();
                }
                "data" => {
                    config.data = value
                        .split(',')
                        .map(str::trim)
                        .filter(|p| !p.is_empty())
                        .map(PathBuf::from)
                        .collect()
                }
                "master" => config.master = Some(PathBuf::from(value)),
                "dump-dir" => config.dump_dir = Some(PathBuf::from(value)),
                other => return Err(err(format!("unknown key {other:?}"))),
            }
        }
        if config.data.is_empty() {
            return Err(ConfigError::Missing("data"));
        }
        Ok(config)
    }
}
