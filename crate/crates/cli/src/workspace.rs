//! Persistent workspace: cached genera, ingested candidate lists and run
//! manifests. Writes go through a temporary file and a rename.

use std::collections::BTreeMap;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::json;
use sha2::{Digest, Sha256};
use ternary_core::regularity::genera_of_disc;
use ternary_core::TernaryForm;

pub const ENV_VAR: &str = "TERNARY_WORKSPACE";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CachedGenus {
    pub disc: i64,
    pub genus_symbol: String,
    pub classes: Vec<TernaryForm>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
struct DiscIndex {
    disc: i64,
    genera: Vec<String>,
}

#[derive(Clone, Debug)]
pub struct Workspace {
    root: PathBuf,
}

pub fn write_atomic(path: &Path, bytes: &[u8]) -> io::Result<()> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir)?;
    }
    let tmp = path.with_extension(format!("tmp.{}", std::process::id()));
    {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(bytes)?;
        f.sync_all()?;
    }
    fs::rename(&tmp, path)
}

impl Workspace {
    pub fn open(root: impl Into<PathBuf>) -> io::Result<Self> {
        let root = root.into();
        fs::create_dir_all(&root)?;
        Ok(Workspace { root })
    }

    pub fn from_env() -> io::Result<Option<Self>> {
        match std::env::var_os(ENV_VAR) {
            Some(v) if !v.is_empty() => Workspace::open(PathBuf::from(v)).map(Some),
            _ => Ok(None),
        }
    }

    fn genus_path(&self, disc: i64, symbol: &str) -> PathBuf {
        self.root
            .join("genera")
            .join(disc.to_string())
            .join(format!("{}.json", &sha256_hex(symbol.as_bytes())[..16]))
    }

    fn index_path(&self, disc: i64) -> PathBuf {
        self.root
            .join("genera")
            .join(disc.to_string())
            .join("index.json")
    }

    /// Stores `bytes` at `rel` unless an entry exists already (entries are
    /// immutable), and writes its manifest.
    pub fn store(
        &self,
        rel: &Path,
        bytes: &[u8],
        command: &str,
        config: &serde_json::Value,
    ) -> io::Result<()> {
        let path = self.root.join(rel);
        if path.exists() {
            return Ok(());
        }
        write_atomic(&path, bytes)?;
        let manifest = json!({
            "artifact": rel.to_string_lossy(),
            "command": command,
            "config": config,
            "sha256": sha256_hex(bytes),
            "version": VERSION,
        });
        let mpath = self
            .root
            .join("manifests")
            .join(rel)
            .with_extension("manifest.json");
        write_atomic(
            &mpath,
            serde_json::to_string_pretty(&manifest).unwrap().as_bytes(),
        )
    }

    pub fn cached_genus(&self, disc: i64, symbol: &str) -> Option<CachedGenus> {
        let text = fs::read_to_string(self.genus_path(disc, symbol)).ok()?;
        serde_json::from_str(&text)
            .ok()
            .filter(|g: &CachedGenus| g.genus_symbol == symbol && g.disc == disc)
    }

    fn cached_genera(&self, disc: i64) -> Option<Vec<CachedGenus>> {
        let text = fs::read_to_string(self.index_path(disc)).ok()?;
        let index: DiscIndex = serde_json::from_str(&text).ok()?;
        index
            .genera
            .iter()
            .map(|s| self.cached_genus(disc, s))
            .collect()
    }

    /// Genera of `disc` keyed by symbol string, from the cache when present.
    pub fn genera(&self, disc: i64) -> io::Result<BTreeMap<String, Vec<TernaryForm>>> {
        if let Some(gs) = self.cached_genera(disc) {
            return Ok(gs
                .into_iter()
                .map(|g| (g.genus_symbol, g.classes))
                .collect());
        }
        let genera: BTreeMap<String, Vec<TernaryForm>> = genera_of_disc(disc)
            .into_iter()
            .map(|(s, c)| (s.to_string(), c))
            .collect();
        let config = json!({ "disc": disc });
        for (symbol, classes) in &genera {
            let entry = CachedGenus {
                disc,
                genus_symbol: symbol.clone(),
                classes: classes.clone(),
            };
            let rel = self
                .genus_path(disc, symbol)
                .strip_prefix(&self.root)
                .unwrap()
                .to_path_buf();
            self.store(
                &rel,
                serde_json::to_string(&entry).unwrap().as_bytes(),
                "genera",
                &config,
            )?;
        }
        let index = DiscIndex {
            disc,
            genera: genera.keys().cloned().collect(),
        };
        let rel = self
            .index_path(disc)
            .strip_prefix(&self.root)
            .unwrap()
            .to_path_buf();
        self.store(
            &rel,
            serde_json::to_string(&index).unwrap().as_bytes(),
            "genera",
            &config,
        )?;
        Ok(genera)
    }

    /// Keeps a copy of an ingested candidate list, keyed by content hash.
    pub fn ingest(&self, name: &str, text: &str) -> io::Result<PathBuf> {
        let rel = PathBuf::from("ingested")
            .join(format!("{name}-{}.csv", &sha256_hex(text.as_bytes())[..16]));
        self.store(&rel, text.as_bytes(), "ingest", &json!({ "name": name }))?;
        Ok(self.root.join(rel))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn scratch(name: &str) -> PathBuf {
        let p = std::env::temp_dir().join(format!("ternary-ws-{name}-{}", std::process::id()));
        let _ = fs::remove_dir_all(&p);
        p
    }

    #[test]
    fn cache_round_trip() {
        let root = scratch("roundtrip");
        let ws = Workspace::open(&root).unwrap();
        let cold = ws.genera(432).unwrap();
        assert!(ws.cached_genera(432).is_some());
        let warm = ws.genera(432).unwrap();
        assert_eq!(cold, warm);
        assert!(root
            .join("manifests/genera/432/index.manifest.json")
            .exists());
        fs::remove_dir_all(root).unwrap();
    }

    #[test]
    fn entries_are_immutable() {
        let root = scratch("immutable");
        let ws = Workspace::open(&root).unwrap();
        let rel = Path::new("x/a.txt");
        ws.store(rel, b"one", "t", &json!({})).unwrap();
        ws.store(rel, b"two", "t", &json!({})).unwrap();
        assert_eq!(fs::read(root.join(rel)).unwrap(), b"one");
        fs::remove_dir_all(root).unwrap();
    }
}
