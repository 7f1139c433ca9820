use std::collections::HashMap;
use std::fs::{File, OpenOptions};
use std::hash::Hash;
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::Serialize;

use crate::error::{Error, Result};

/// Append-only JSON Lines store of completed work units, keyed by `K`.
///
/// Loading tolerates a truncated final line (an interrupted run) but
/// rejects malformed lines elsewhere.
pub struct JsonlCache<K, V> {
    path: PathBuf,
    entries: HashMap<K, V>,
    key_of: fn(&V) -> K,
}

impl<K, V> JsonlCache<K, V>
where
    K: Eq + Hash,
    V: Serialize + DeserializeOwned + Clone,
{
    pub fn open(path: impl AsRef<Path>, key_of: fn(&V) -> K) -> Result<Self> {
        let path = path.as_ref().to_path_buf();
        let mut entries = HashMap::new();
        if path.exists() {
            let lines: Vec<String> = BufReader::new(File::open(&path)?)
                .lines()
                .collect::<std::io::Result<_>>()?;
            let last = lines.len().saturating_sub(1);
            for (i, line) in lines.iter().enumerate() {
                if line.trim().is_empty() {
                    continue;
                }
                match serde_json::from_str::<V>(line) {
                    Ok(v) => {
                        entries.insert(key_of(&v), v);
                    }
                    Err(e) if i == last => {
                        log::warn!("ignoring truncated cache line in {}: {e}", path.display());
                    }
                    Err(e) => return Err(Error::from_json(e, Some(i))),
                }
            }
        }
        Ok(JsonlCache {
            path,
            entries,
            key_of,
        })
    }

    pub fn get(&self, key: &K) -> Option<&V> {
        self.entries.get(key)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn append<'a, I>(&mut self, values: I) -> Result<()>
    where
        I: IntoIterator<Item = &'a V>,
        V: 'a,
    {
        let mut file = OpenOptions::new()
            .create(true)
            .append(true)
            .open(&self.path)?;
        for v in values {
            let mut line = serde_json::to_vec(v).expect("cache record serializes");
            line.push(b'\n');
            file.write_all(&line)?;
            self.entries.insert((self.key_of)(v), v.clone());
        }
        file.flush()?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde::Deserialize;

    #[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
    struct Rec {
        k: u32,
        v: String,
    }

    #[test]
    fn persists_and_reloads() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.jsonl");
        let mut c = JsonlCache::open(&path, |r: &Rec| r.k).unwrap();
        assert!(c.is_empty());
        c.append(&[
            Rec {
                k: 1,
                v: "a".into(),
            },
            Rec {
                k: 2,
                v: "b".into(),
            },
        ])
        .unwrap();

        // simulate an interrupted write
        std::fs::OpenOptions::new()
            .append(true)
            .open(&path)
            .unwrap()
            .write_all(b"{\"k\":3,\"v\"")
            .unwrap();

        let c = JsonlCache::open(&path, |r: &Rec| r.k).unwrap();
        assert_eq!(c.len(), 2);
        assert_eq!(c.get(&2).unwrap().v, "b");
    }

    #[test]
    fn corrupt_middle_line_is_an_error() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.jsonl");
        std::fs::write(&path, "garbage\n{\"k\":1,\"v\":\"a\"}\n").unwrap();
        assert!(JsonlCache::open(&path, |r: &Rec| r.k).is_err());
    }
}
