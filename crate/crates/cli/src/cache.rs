//! On-disk cache of Bernoulli tables and Lyndon bases.
//!
//! Files are JSON with a `"schema"` field; anything with another schema, or
//! that fails to parse, is treated as absent. Writes go to a temporary file
//! in the target directory and are renamed into place.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use propg_core::bernoulli::BernoulliTable;
use propg_core::freelie::{BasisTable, LyndonWord};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};
use crate::report::SCHEMA;

pub const ENV_VAR: &str = "PROPG_CACHE";

const BERNOULLI_DIR: &str = "bernoulli";
const LIE_DIR: &str = "lie";

#[derive(Serialize, Deserialize)]
struct BernoulliFile {
    schema: u32,
    p: String,
    residues: Vec<String>,
}

#[derive(Serialize, Deserialize)]
struct LieFile {
    schema: u32,
    #[serde(rename = "D")]
    max_degree: String,
    degrees: BTreeMap<String, Vec<Vec<String>>>,
}

#[derive(Deserialize)]
struct SchemaOnly {
    schema: serde_json::Value,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Entry {
    pub kind: &'static str,
    pub file: String,
    pub valid: bool,
}

#[derive(Clone, Debug)]
pub struct Cache {
    root: PathBuf,
}

impl Cache {
    pub fn new(root: impl Into<PathBuf>) -> Self {
        Self { root: root.into() }
    }

    /// `$PROPG_CACHE`, else `<platform cache dir>/propg`.
    pub fn from_env() -> CliResult<Self> {
        match std::env::var_os(ENV_VAR) {
            Some(dir) if !dir.is_empty() => Ok(Self::new(dir)),
            _ => dirs::cache_dir()
                .map(|d| Self::new(d.join("propg")))
                .ok_or(CliError::NoCacheDir),
        }
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    fn bernoulli_path(&self, p: u64) -> PathBuf {
        self.root.join(BERNOULLI_DIR).join(format!("p{p}.json"))
    }

    fn lie_path(&self, max_degree: u32) -> PathBuf {
        self.root
            .join(LIE_DIR)
            .join(format!("basis-D{max_degree}.json"))
    }

    pub fn load_bernoulli(&self, p: u64) -> Option<BernoulliTable> {
        let file: BernoulliFile = read_current(&self.bernoulli_path(p))?;
        if file.p.parse::<u64>().ok()? != p {
            return None;
        }
        let residues = file
            .residues
            .iter()
            .map(|r| r.parse().ok())
            .collect::<Option<Vec<u64>>>()?;
        let expected = if p > 3 { ((p - 3) / 2) as usize } else { 0 };
        (residues.len() == expected && residues.iter().all(|&r| r < p))
            .then_some(BernoulliTable { p, residues })
    }

    pub fn store_bernoulli(&self, table: &BernoulliTable) -> CliResult<()> {
        let file = BernoulliFile {
            schema: SCHEMA,
            p: table.p.to_string(),
            residues: table.residues.iter().map(u64::to_string).collect(),
        };
        write_atomic(&self.bernoulli_path(table.p), &file)
    }

    pub fn load_basis(&self, max_degree: u32) -> Option<BasisTable> {
        let file: LieFile = read_current(&self.lie_path(max_degree))?;
        if file.max_degree.parse::<u32>().ok()? != max_degree {
            return None;
        }
        let mut by_degree = BTreeMap::new();
        for (deg, words) in file.degrees {
            let deg: u32 = deg.parse().ok()?;
            let words = words
                .into_iter()
                .map(|w| {
                    let letters = w
                        .iter()
                        .map(|l| l.parse().ok())
                        .collect::<Option<Vec<u32>>>()?;
                    let word = LyndonWord::new(letters).ok()?;
                    (word.degree() == deg).then_some(word)
                })
                .collect::<Option<Vec<_>>>()?;
            by_degree.insert(deg, words);
        }
        (by_degree.len() == max_degree as usize).then_some(BasisTable {
            max_degree,
            by_degree,
        })
    }

    pub fn store_basis(&self, table: &BasisTable) -> CliResult<()> {
        let degrees = table
            .by_degree
            .iter()
            .map(|(d, words)| {
                let words = words
                    .iter()
                    .map(|w| w.letters().iter().map(u32::to_string).collect())
                    .collect();
                (d.to_string(), words)
            })
            .collect();
        let file = LieFile {
            schema: SCHEMA,
            max_degree: table.max_degree.to_string(),
            degrees,
        };
        write_atomic(&self.lie_path(table.max_degree), &file)
    }

    /// Cache files in a fixed order (Bernoulli by prime, then bases by degree).
    pub fn entries(&self) -> CliResult<Vec<Entry>> {
        let mut out = Vec::new();
        for (kind, dir) in [("bernoulli", BERNOULLI_DIR), ("lie-basis", LIE_DIR)] {
            let mut files = list_json(&self.root.join(dir))?;
            files.sort_by_key(|path| numeric_key(path));
            for path in files {
                let valid =
                    match kind {
                        "bernoulli" => numeric_key(&path)
                            .is_some_and(|(n, _)| self.load_bernoulli(n).is_some()),
                        _ => numeric_key(&path)
                            .is_some_and(|(n, _)| self.load_basis(n as u32).is_some()),
                    };
                let file = format!(
                    "{dir}/{}",
                    path.file_name().unwrap_or_default().to_string_lossy()
                );
                out.push(Entry { kind, file, valid });
            }
        }
        Ok(out)
    }

    /// Removes every cache file; returns how many were removed.
    pub fn clear(&self) -> CliResult<usize> {
        let mut removed = 0;
        for dir in [BERNOULLI_DIR, LIE_DIR] {
            for path in list_json(&self.root.join(dir))? {
                fs::remove_file(&path).map_err(|e| CliError::io(&path, e))?;
                removed += 1;
            }
        }
        Ok(removed)
    }
}

fn numeric_key(path: &Path) -> Option<(u64, String)> {
    let name = path.file_stem()?.to_string_lossy().into_owned();
    let digits: String = name.chars().filter(char::is_ascii_digit).collect();
    Some((digits.parse().ok()?, name))
}

fn list_json(dir: &Path) -> CliResult<Vec<PathBuf>> {
    let rd = match fs::read_dir(dir) {
        Ok(rd) => rd,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(Vec::new()),
        Err(e) => return Err(CliError::io(dir, e)),
    };
    let mut out = Vec::new();
    for entry in rd {
        let path = entry.map_err(|e| CliError::io(dir, e))?.path();
        if path.extension().is_some_and(|x| x == "json") {
            out.push(path);
        }
    }
    Ok(out)
}

fn read_current<T: for<'de> Deserialize<'de>>(path: &Path) -> Option<T> {
    let text = fs::read_to_string(path).ok()?;
    let head: SchemaOnly = serde_json::from_str(&text).ok()?;
    if head.schema != SCHEMA {
        return None;
    }
    serde_json::from_str(&text).ok()
}

fn write_atomic<T: Serialize>(path: &Path, value: &T) -> CliResult<()> {
    let dir = path.parent().expect("cache paths have a parent");
    fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| CliError::io(dir, e))?;
    serde_json::to_writer(&mut tmp, value)?;
    tmp.write_all(b"\n")
        .map_err(|e| CliError::io(tmp.path(), e))?;
    tmp.persist(path).map_err(|e| CliError::io(path, e.error))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use propg_core::bernoulli::bernoulli_mod_p;
    use propg_core::freelie::lyndon_basis;

    #[test]
    fn roundtrip_and_stale_schema() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::new(dir.path());
        assert!(cache.entries().unwrap().is_empty());
        let t = bernoulli_mod_p(37).unwrap();
        cache.store_bernoulli(&t).unwrap();
        assert_eq!(cache.load_bernoulli(37), Some(t));
        let b = lyndon_basis(10).unwrap();
        cache.store_basis(&b).unwrap();
        assert_eq!(cache.load_basis(10), Some(b));

        let path = dir.path().join("bernoulli/p37.json");
        let text = fs::read_to_string(&path)
            .unwrap()
            .replace("\"schema\":1", "\"schema\":0");
        fs::write(&path, text).unwrap();
        assert_eq!(cache.load_bernoulli(37), None);
        let entries = cache.entries().unwrap();
        assert_eq!(entries.len(), 2);
        assert!(!entries[0].valid && entries[1].valid);

        assert_eq!(cache.clear().unwrap(), 2);
        assert!(cache.entries().unwrap().is_empty());
    }

    #[test]
    fn corrupted_files_are_ignored() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::new(dir.path());
        fs::create_dir_all(dir.path().join("bernoulli")).unwrap();
        fs::write(dir.path().join("bernoulli/p5.json"), "{not json").unwrap();
        assert_eq!(cache.load_bernoulli(5), None);
        fs::write(
            dir.path().join("bernoulli/p5.json"),
            r#"{"schema":1,"p":"5","residues":["9"]}"#,
        )
        .unwrap();
        assert_eq!(cache.load_bernoulli(5), None);
    }
}
