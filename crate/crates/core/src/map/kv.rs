//! Line-oriented key=value serialization of map definitions.

use super::{IteratedMap, MapError, StandardMap};
use crate::interval::Interval;
use std::collections::BTreeMap;

/// A serializable map definition: either a standard-family member or a
/// composed-iterate descriptor over one.
#[derive(Clone, Debug, PartialEq)]
pub enum MapDef {
    Standard(StandardMap),
    Iterated(IteratedMap),
}

impl MapDef {
    pub fn to_kv_block(&self) -> String {
        match self {
            MapDef::Standard(m) => m.to_kv_block(),
            MapDef::Iterated(m) => m.to_kv_block(),
        }
    }

    pub fn parse_kv_block(text: &str) -> Result<MapDef, MapError> {
        let mut kv = BTreeMap::new();
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| MapError::InvalidParams(format!("malformed line {line:?}")))?;
            kv.insert(k.trim().to_string(), v.trim().to_string());
        }
        let get = |key: &str| -> Result<f64, MapError> {
            kv.get(key)
                .ok_or_else(|| MapError::InvalidParams(format!("missing key {key}")))?
                .parse::<f64>()
                .map_err(|e| MapError::InvalidParams(format!("bad value for {key}: {e}")))
        };
        let family = kv
            .get("family")
            .ok_or_else(|| MapError::InvalidParams("missing key family".into()))?;
        let base = StandardMap::new(get("u")?, get("v")?, get("c")?, get("alpha")?)?;
        match family.as_str() {
            "standard" => Ok(MapDef::Standard(base)),
            "iterated" => {
                let window = Interval::new(get("window_lo")?, get("window_hi")?);
                let lt = get("left_time")? as u64;
                let rt = get("right_time")? as u64;
                Ok(MapDef::Iterated(IteratedMap::new(base, window, lt, rt)?))
            }
            other => Err(MapError::InvalidParams(format!("unknown family {other:?}"))),
        }
    }
}
