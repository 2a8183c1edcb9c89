//! TOML manifest describing a collection of benchmark datasets.

use std::fs;
use std::io::BufReader;
use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::dataset::{load_delimited, min_max_normalize, Dataset, DatasetSchema};
use crate::error::{Error, Result};

/// One dataset entry.
#[derive(Debug, Clone, Deserialize)]
pub struct ManifestEntry {
    pub name: String,
    /// Path to the data file, relative to the manifest's directory.
    pub path: String,
    /// Field separator; omit for whitespace-delimited files.
    pub delimiter: Option<String>,
    pub class_column: Option<usize>,
    #[serde(default)]
    pub has_header: bool,
    #[serde(default = "default_missing_token")]
    pub missing_token: String,
    /// Cluster count; defaults to the number of distinct class labels.
    pub k: Option<usize>,
    /// Optional shape checks applied after loading.
    pub expect_n: Option<usize>,
    pub expect_d: Option<usize>,
}

fn default_missing_token() -> String {
    "?".to_string()
}

#[derive(Debug, Deserialize)]
struct ManifestFile {
    #[serde(rename = "dataset")]
    datasets: Vec<ManifestEntry>,
}

/// Parse a manifest file into its entries, in file order.
pub fn load_manifest(path: &Path) -> Result<Vec<ManifestEntry>> {
    let text = fs::read_to_string(path)?;
    let parsed: ManifestFile =
        toml::from_str(&text).map_err(|e| Error::Manifest(e.to_string()))?;
    if parsed.datasets.is_empty() {
        return Err(Error::Manifest("manifest lists no datasets".to_string()));
    }
    Ok(parsed.datasets)
}

impl ManifestEntry {
    fn schema(&self) -> Result<DatasetSchema> {
        let delimiter = match &self.delimiter {
            None => None,
            Some(s) => {
                let mut chars = s.chars();
                let c = chars.next();
                if c.is_none() || chars.next().is_some() {
                    return Err(Error::Manifest(format!(
                        "dataset '{}': delimiter must be a single character",
                        self.name
                    )));
                }
                c
            }
        };
        Ok(DatasetSchema {
            delimiter,
            class_column: self.class_column,
            missing_token: self.missing_token.clone(),
            has_header: self.has_header,
        })
    }

    /// Load the dataset (unnormalized) and resolve its cluster count.
    pub fn load(&self, base_dir: &Path) -> Result<(Dataset, usize)> {
        let path: PathBuf = base_dir.join(&self.path);
        let file = fs::File::open(&path)?;
        let ds = load_delimited(&self.name, BufReader::new(file), &self.schema()?)?;
        if let Some(n) = self.expect_n {
            if ds.n() != n {
                return Err(Error::Manifest(format!(
                    "dataset '{}': expected {} rows, loaded {}",
                    self.name, n, ds.n()
                )));
            }
        }
        if let Some(d) = self.expect_d {
            if ds.d() != d {
                return Err(Error::Manifest(format!(
                    "dataset '{}': expected {} attributes, loaded {}",
                    self.name, d, ds.d()
                )));
            }
        }
        let k = match self.k {
            Some(k) => k,
            None => ds.class_count()?,
        };
        Ok((ds, k))
    }

    /// Load and min-max normalize.
    pub fn load_normalized(&self, base_dir: &Path) -> Result<(Dataset, usize)> {
        let (ds, k) = self.load(base_dir)?;
        Ok((min_max_normalize(&ds), k))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn write_file(dir: &Path, name: &str, content: &str) {
        let mut f = fs::File::create(dir.join(name)).unwrap();
        f.write_all(content.as_bytes()).unwrap();
    }

    #[test]
    fn loads_entries_and_datasets() {
        let dir = tempfile::tempdir().unwrap();
        write_file(dir.path(), "toy.csv", "1,2,a\n3,4,b\n5,6,a\n");
        write_file(
            dir.path(),
            "manifest.toml",
            r#"
[[dataset]]
name = "toy"
path = "toy.csv"
delimiter = ","
class_column = 2
expect_n = 3
expect_d = 2
"#,
        );
        let entries = load_manifest(&dir.path().join("manifest.toml")).unwrap();
        assert_eq!(entries.len(), 1);
        let (ds, k) = entries[0].load(dir.path()).unwrap();
        assert_eq!((ds.n(), ds.d(), k), (3, 2, 2));
        let (norm, _) = entries[0].load_normalized(dir.path()).unwrap();
        assert_eq!(norm.attr_min(), &[0.0, 0.0]);
        assert_eq!(norm.attr_max(), &[1.0, 1.0]);
    }

    #[test]
    fn k_override_beats_class_count() {
        let dir = tempfile::tempdir().unwrap();
        write_file(dir.path(), "toy.csv", "1,2\n3,4\n5,6\n");
        write_file(
            dir.path(),
            "manifest.toml",
            "[[dataset]]\nname = \"toy\"\npath = \"toy.csv\"\ndelimiter = \",\"\nk = 2\n",
        );
        let entries = load_manifest(&dir.path().join("manifest.toml")).unwrap();
        let (_, k) = entries[0].load(dir.path()).unwrap();
        assert_eq!(k, 2);
    }

    #[test]
    fn shape_mismatch_is_reported() {
        let dir = tempfile::tempdir().unwrap();
        write_file(dir.path(), "toy.csv", "1,2\n3,4\n");
        write_file(
            dir.path(),
            "manifest.toml",
            "[[dataset]]\nname = \"toy\"\npath = \"toy.csv\"\ndelimiter = \",\"\nk = 2\nexpect_n = 99\n",
        );
        let entries = load_manifest(&dir.path().join("manifest.toml")).unwrap();
        assert!(matches!(entries[0].load(dir.path()), Err(Error::Manifest(_))));
    }

    #[test]
    fn bad_toml_is_a_manifest_error() {
        let dir = tempfile::tempdir().unwrap();
        write_file(dir.path(), "manifest.toml", "not toml [[");
        assert!(matches!(
            load_manifest(&dir.path().join("manifest.toml")),
            Err(Error::Manifest(_))
        ));
    }
}
