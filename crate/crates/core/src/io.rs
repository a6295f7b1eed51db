//! Parsing of the on-disk formats. Every entry point validates its input
//! and never panics on malformed bytes.

use crate::error::{Error, Result};
use crate::geometry::Config;
use crate::patterns::Covering;
use crate::setsystem::SetSystem;

fn text(bytes: &[u8]) -> Result<&str> {
    std::str::from_utf8(bytes).map_err(|e| Error::InvalidParameter(format!("input is not UTF-8: {e}")))
}

pub fn parse_set_system(bytes: &[u8]) -> Result<SetSystem> {
    Ok(serde_json::from_str(text(bytes)?)?)
}

pub fn parse_config(bytes: &[u8]) -> Result<Config> {
    Ok(serde_json::from_str(text(bytes)?)?)
}

pub fn parse_covering(bytes: &[u8]) -> Result<Covering> {
    Ok(serde_json::from_str(text(bytes)?)?)
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: serde::Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}
