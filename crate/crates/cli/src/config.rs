//! Map files, point lists and the config echo written into every result.

use std::path::Path;

use recur_core::dynamics::{MapSpec, TorusPoint};
use serde::Serialize;

use crate::CliError;

/// Built-in maps accepted by `--map` in place of a file.
pub const BUILTIN_MAPS: [&str; 4] = ["catmap", "expanding", "doubling", "product"];

pub fn builtin_map(name: &str) -> Option<MapSpec> {
    match name {
        "catmap" => Some(MapSpec::cat_map()),
        "expanding" => Some(MapSpec::expanding_example()),
        "doubling" => Some(MapSpec::doubling()),
        "product" => Some(MapSpec::product_example()),
        _ => None,
    }
}

/// A map together with the text it was read from.
#[derive(Debug, Clone)]
pub struct LoadedMap {
    pub map: MapSpec,
    pub source: String,
}

/// Reads a MapSpec JSON file, or a built-in name when no such file exists.
pub fn load_map(arg: &str) -> Result<LoadedMap, CliError> {
    let path = Path::new(arg);
    if !path.exists() {
        if let Some(map) = builtin_map(arg) {
            return Ok(LoadedMap {
                source: serde_json::to_string(&map)?,
                map,
            });
        }
        return Err(CliError::Config(format!(
            "map file {arg} does not exist and is not a built-in ({})",
            BUILTIN_MAPS.join(", ")
        )));
    }
    let source = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let map: MapSpec = serde_json::from_str(&source)
        .map_err(|e| CliError::Config(format!("invalid map in {arg}: {e}")))?;
    Ok(LoadedMap { map, source })
}

pub fn parse_list(s: &str) -> Result<Vec<f64>, CliError> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| CliError::Config(format!("not a number: {t:?}")))
        })
        .collect()
}

pub fn parse_point(s: &str, map: &MapSpec) -> Result<TorusPoint, CliError> {
    let c = parse_list(s)?;
    if c.len() != map.dim() {
        return Err(CliError::Config(format!(
            "--x has {} coordinates but {} acts on a {}-torus",
            c.len(),
            map.id(),
            map.dim()
        )));
    }
    Ok(TorusPoint::new(&c)?)
}

/// The resolved configuration echoed into result headers.
#[derive(Debug, Serialize)]
pub struct ConfigEcho<'a, A: Serialize> {
    pub command: &'a str,
    pub map: Option<&'a MapSpec>,
    pub seed: u64,
    pub params: &'a A,
}
