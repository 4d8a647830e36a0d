//! Content-addressed result store: one key=value text file per entry, named
//! by the SHA-256 of the canonical PD code, invariant and field.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{Duration, SystemTime, UNIX_EPOCH};

use sha2::{Digest, Sha256};

const EXT: &str = "entry";

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct CacheKey {
    pub pd: String,
    pub invariant: String,
    pub field: String,
}

impl CacheKey {
    pub fn new(pd: impl Into<String>, invariant: &str, field: &str) -> Self {
        CacheKey {
            pd: pd.into(),
            invariant: invariant.to_string(),
            field: field.to_string(),
        }
    }

    pub fn digest(&self) -> String {
        let mut h = Sha256::new();
        h.update(format!(
            "pd={}\ninvariant={}\nfield={}\n",
            self.pd, self.invariant, self.field
        ));
        format!("{:x}", h.finalize())
    }
}

/// A stored value with its metadata. `values` holds the invariant-specific
/// records, e.g. `s`, `s_min`, `s_max` or `table`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CacheEntry {
    pub key: CacheKey,
    pub values: BTreeMap<String, String>,
    pub engine: String,
    pub wall_ms: u128,
    pub timestamp: u64,
}

impl CacheEntry {
    pub fn new(key: CacheKey, values: BTreeMap<String, String>, wall: Duration) -> Self {
        let timestamp = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map_or(0, |d| d.as_secs());
        CacheEntry {
            key,
            values,
            engine: concat!("knotconc ", env!("CARGO_PKG_VERSION")).to_string(),
            wall_ms: wall.as_millis(),
            timestamp,
        }
    }

    fn render(&self) -> String {
        let mut out = format!(
            "key={}\ninvariant={}\nfield={}\npd={}\nengine={}\nwall_ms={}\ntimestamp={}\n",
            self.key.digest(),
            self.key.invariant,
            self.key.field,
            self.key.pd,
            self.engine,
            self.wall_ms,
            self.timestamp
        );
        for (k, v) in &self.values {
            out.push_str(&format!("value.{k}={v}\n"));
        }
        out
    }

    fn parse(text: &str) -> Result<Self, String> {
        let mut rec = BTreeMap::new();
        for line in text.lines() {
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| format!("line without '=': {line:?}"))?;
            if rec.insert(k.to_string(), v.to_string()).is_some() {
                return Err(format!("duplicate record {k}"));
            }
        }
        let take = |k: &str| {
            rec.get(k)
                .cloned()
                .ok_or_else(|| format!("missing record {k}"))
        };
        let key = CacheKey {
            pd: take("pd")?,
            invariant: take("invariant")?,
            field: take("field")?,
        };
        if take("key")? != key.digest() {
            return Err("stored digest does not match its records".into());
        }
        let values: BTreeMap<String, String> = rec
            .iter()
            .filter_map(|(k, v)| k.strip_prefix("value.").map(|k| (k.to_string(), v.clone())))
            .collect();
        if values.is_empty() {
            return Err("no values".into());
        }
        Ok(CacheEntry {
            key,
            values,
            engine: take("engine")?,
            wall_ms: take("wall_ms")?
                .parse()
                .map_err(|e| format!("wall_ms: {e}"))?,
            timestamp: take("timestamp")?
                .parse()
                .map_err(|e| format!("timestamp: {e}"))?,
        })
    }
}

/// A cache directory shared by any number of processes.
#[derive(Clone, Debug)]
pub struct Cache {
    dir: PathBuf,
}

impl Cache {
    pub fn open(dir: &Path) -> std::io::Result<Self> {
        fs::create_dir_all(dir)?;
        Ok(Cache {
            dir: dir.to_path_buf(),
        })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    fn path(&self, key: &CacheKey) -> PathBuf {
        self.dir.join(format!("{}.{EXT}", key.digest()))
    }

    /// Reads an entry. Unreadable or corrupt entries count as misses.
    pub fn get(&self, key: &CacheKey) -> Option<CacheEntry> {
        let path = self.path(key);
        let text = fs::read_to_string(&path).ok()?;
        match CacheEntry::parse(&text) {
            Ok(e) if e.key == *key => Some(e),
            Ok(_) => {
                log::warn!(
                    "cache entry {} belongs to another key; recomputing",
                    path.display()
                );
                None
            }
            Err(why) => {
                log::warn!("corrupt cache entry {}: {why}; recomputing", path.display());
                None
            }
        }
    }

    /// Writes an entry via a temporary file and a rename. A valid entry
    /// already on disk is kept.
    pub fn put(&self, entry: &CacheEntry) -> std::io::Result<()> {
        if self.get(&entry.key).is_some() {
            return Ok(());
        }
        let mut tmp = tempfile::NamedTempFile::new_in(&self.dir)?;
        tmp.write_all(entry.render().as_bytes())?;
        tmp.as_file().sync_all()?;
        tmp.persist(self.path(&entry.key)).map_err(|e| e.error)?;
        Ok(())
    }

    /// All readable entries, ordered by key.
    pub fn entries(&self) -> std::io::Result<Vec<CacheEntry>> {
        let mut out = Vec::new();
        for f in fs::read_dir(&self.dir)? {
            let p = f?.path();
            if p.extension().is_some_and(|e| e == EXT) {
                match fs::read_to_string(&p)
                    .map_err(|e| e.to_string())
                    .and_then(|t| CacheEntry::parse(&t))
                {
                    Ok(e) => out.push(e),
                    Err(why) => log::warn!("skipping {}: {why}", p.display()),
                }
            }
        }
        out.sort_by(|a, b| a.key.cmp(&b.key));
        Ok(out)
    }

    /// Removes every entry file; returns how many were removed.
    pub fn clear(&self) -> std::io::Result<usize> {
        let mut n = 0;
        for f in fs::read_dir(&self.dir)? {
            let p = f?.path();
            if p.extension().is_some_and(|e| e == EXT) {
                fs::remove_file(p)?;
                n += 1;
            }
        }
        Ok(n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn entry(v: &str) -> CacheEntry {
        let key = CacheKey::new("PD[X[1,5,2,4],X[3,1,4,6],X[5,3,6,2]]", "s", "Q");
        CacheEntry::new(
            key,
            BTreeMap::from([("s".to_string(), v.to_string())]),
            Duration::from_millis(3),
        )
    }

    #[test]
    fn put_then_get() {
        let dir = tempfile::tempdir().unwrap();
        let c = Cache::open(dir.path()).unwrap();
        let e = entry("-2");
        assert!(c.get(&e.key).is_none());
        c.put(&e).unwrap();
        assert_eq!(c.get(&e.key), Some(e.clone()));
        assert_eq!(c.entries().unwrap(), vec![e]);
        assert_eq!(c.clear().unwrap(), 1);
        assert!(c.entries().unwrap().is_empty());
    }

    #[test]
    fn keys_are_stable_and_distinct() {
        let a = CacheKey::new("PD[]", "s", "Q");
        assert_eq!(a.digest(), CacheKey::new("PD[]", "s", "Q").digest());
        assert_ne!(a.digest(), CacheKey::new("PD[]", "s", "Fp:3").digest());
        assert_ne!(a.digest(), CacheKey::new("PD[]", "kh", "Q").digest());
        assert_eq!(a.digest().len(), 64);
    }

    #[test]
    fn corrupt_entries_are_misses() {
        let dir = tempfile::tempdir().unwrap();
        let c = Cache::open(dir.path()).unwrap();
        let e = entry("-2");
        c.put(&e).unwrap();
        let path = c.path(&e.key);
        fs::write(&path, "garbage").unwrap();
        assert!(c.get(&e.key).is_none());
        // A fresh put replaces the corrupt file.
        c.put(&e).unwrap();
        assert_eq!(c.get(&e.key), Some(e));
        let text = fs::read_to_string(&path)
            .unwrap()
            .replace("field=Q", "field=Fp:2");
        fs::write(&path, text).unwrap();
        assert!(c.get(&entry("-2").key).is_none());
    }

    #[test]
    fn existing_entries_are_not_rewritten() {
        let dir = tempfile::tempdir().unwrap();
        let c = Cache::open(dir.path()).unwrap();
        c.put(&entry("-2")).unwrap();
        c.put(&entry("7")).unwrap();
        assert_eq!(c.get(&entry("-2").key).unwrap().values["s"], "-2");
    }
}
