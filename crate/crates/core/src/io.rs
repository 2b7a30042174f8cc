//! JSON files for spaces, maps, actions and towers. Paths inside a file are
//! resolved relative to the directory holding that file.

use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::de::DeserializeOwned;
use serde::Serialize;

use crate::actions::{GroupAction, RawAction};
use crate::error::{Error, Result};
use crate::genpaths::{RawTower, Tower};
use crate::map::{RawMap, UniformMap};
use crate::space::{validate_space, FiniteUniformSpace, RawSpace};

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|source| Error::Json {
        path: path.to_path_buf(),
        source,
    })
}

/// Pretty JSON with a trailing newline.
pub fn to_json_string<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report types serialize");
    s.push('\n');
    s
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|source| Error::Io {
            path: dir.to_path_buf(),
            source,
        })?;
    }
    fs::write(path, to_json_string(value)).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn relative(base: &Path, name: &str) -> PathBuf {
    let p = Path::new(name);
    if p.is_absolute() {
        p.to_path_buf()
    } else {
        base.parent().unwrap_or(Path::new("")).join(p)
    }
}

pub fn load_space(path: &Path) -> Result<Arc<FiniteUniformSpace>> {
    let raw: RawSpace = read_json(path)?;
    Ok(Arc::new(validate_space(raw)?))
}

pub fn load_map(path: &Path) -> Result<UniformMap> {
    let raw: RawMap = read_json(path)?;
    let source = load_space(&relative(path, &raw.source))?;
    let target = if raw.target == raw.source {
        source.clone()
    } else {
        load_space(&relative(path, &raw.target))?
    };
    UniformMap::new(source, target, raw.values)
}

pub fn load_action(path: &Path) -> Result<GroupAction> {
    let raw: RawAction = read_json(path)?;
    let space = load_space(&relative(path, &raw.space))?;
    GroupAction::new(space, raw.generators, raw.names)
}

pub fn load_tower(path: &Path) -> Result<Tower> {
    let raw: RawTower = read_json(path)?;
    let levels = raw
        .levels
        .iter()
        .map(|l| load_space(&relative(path, l)))
        .collect::<Result<Vec<_>>>()?;
    let mut bonds = Vec::new();
    for (k, b) in raw.bonds.iter().enumerate() {
        let raw_map: RawMap = read_json(&relative(path, b))?;
        let (Some(src), Some(dst)) = (levels.get(k + 1), levels.get(k)) else {
            return Err(Error::Tower(format!("bond {k} has no matching levels")));
        };
        bonds.push(UniformMap::new(src.clone(), dst.clone(), raw_map.values)?);
    }
    Tower::new(levels, bonds)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn relative_paths_resolve_against_the_file() {
        assert_eq!(
            relative(Path::new("a/b/map.json"), "s.json"),
            PathBuf::from("a/b/s.json")
        );
        assert_eq!(relative(Path::new("map.json"), "s.json"), PathBuf::from("s.json"));
        assert_eq!(
            relative(Path::new("a/map.json"), "/abs/s.json"),
            PathBuf::from("/abs/s.json")
        );
    }
}
