//! Persistent representation-number cache.
//!
//! File format, one record per line, lines sorted lexicographically:
//!
//! ```text
//! v1|<lattice-id>|<genus>|<upper triangle of N, comma-separated row-major>|<count>
//! ```
//!
//! Re-importing an export is a no-op; importing a record that disagrees with
//! an existing one is an integrity error.

use crate::lattices::LatticeId;
use crate::qforms::FourierIndex;
use std::collections::HashMap;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CacheError {
    #[error("cache line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("cache line {line}: record {key} disagrees with existing value ({new} != {old})")]
    Conflict { line: usize, key: String, new: u64, old: u64 },
    #[error("cache io: {0}")]
    Io(String),
}

pub const CACHE_FILE_NAME: &str = "repcache.v1";

#[derive(Default)]
pub struct RepCache {
    map: HashMap<(LatticeId, FourierIndex), u64>,
    dirty: bool,
}

impl RepCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, id: LatticeId, n: &FourierIndex) -> Option<u64> {
        self.map.get(&(id, n.clone())).copied()
    }

    pub fn contains(&self, id: LatticeId, n: &FourierIndex) -> bool {
        self.map.contains_key(&(id, n.clone()))
    }

    /// Inserts a record; panics if it contradicts an existing one (internal
    /// writers must never disagree with recomputation).
    pub fn insert(&mut self, id: LatticeId, n: FourierIndex, count: u64) {
        match self.map.insert((id, n), count) {
            None => self.dirty = true,
            Some(old) => {
                assert_eq!(old, count, "cache overwrite with different value");
            }
        }
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn is_dirty(&self) -> bool {
        self.dirty
    }

    fn record_line(id: LatticeId, n: &FourierIndex, count: u64) -> String {
        let mut s = String::new();
        let upper: Vec<String> = n.upper_triangle().iter().map(|x| x.to_string()).collect();
        write!(s, "v1|{}|{}|{}|{}", id, n.genus(), upper.join(","), count).unwrap();
        s
    }

    /// All records as sorted lines.
    pub fn export_string(&self) -> String {
        let mut lines: Vec<String> = self
            .map
            .iter()
            .map(|((id, n), &c)| Self::record_line(*id, n, c))
            .collect();
        lines.sort_unstable();
        let mut out = lines.join("\n");
        if !out.is_empty() {
            out.push('\n');
        }
        out
    }

    /// Imports records; returns the number of new records.
    pub fn import_str(&mut self, data: &str) -> Result<usize, CacheError> {
        let mut added = 0;
        for (lineno, line) in data.lines().enumerate() {
            let line_n = lineno + 1;
            let line = line.trim_end();
            if line.is_empty() {
                continue;
            }
            let parts: Vec<&str> = line.split('|').collect();
            if parts.len() != 5 || parts[0] != "v1" {
                return Err(CacheError::Parse {
                    line: line_n,
                    msg: format!("expected 5 `|`-separated fields starting with v1, got `{line}`"),
                });
            }
            let id: LatticeId = parts[1]
                .parse()
                .map_err(|e| CacheError::Parse { line: line_n, msg: e })?;
            let genus: usize = parts[2]
                .parse()
                .map_err(|_| CacheError::Parse { line: line_n, msg: format!("bad genus `{}`", parts[2]) })?;
            let upper: Vec<i64> = if parts[3].is_empty() {
                Vec::new()
            } else {
                parts[3]
                    .split(',')
                    .map(|t| {
                        t.parse::<i64>().map_err(|_| CacheError::Parse {
                            line: line_n,
                            msg: format!("bad entry `{t}`"),
                        })
                    })
                    .collect::<Result<_, _>>()?
            };
            let n = FourierIndex::from_upper(genus, &upper).map_err(|e| CacheError::Parse {
                line: line_n,
                msg: e.to_string(),
            })?;
            let count: u64 = parts[4]
                .parse()
                .map_err(|_| CacheError::Parse { line: line_n, msg: format!("bad count `{}`", parts[4]) })?;
            match self.map.get(&(id, n.clone())) {
                Some(&old) if old != count => {
                    return Err(CacheError::Conflict {
                        line: line_n,
                        key: Self::record_line(id, &n, count),
                        new: count,
                        old,
                    });
                }
                Some(_) => {}
                None => {
                    self.map.insert((id, n), count);
                    added += 1;
                }
            }
        }
        if added > 0 {
            self.dirty = true;
        }
        Ok(added)
    }

    pub fn export_file(&self, path: &Path) -> Result<(), CacheError> {
        fs::write(path, self.export_string()).map_err(|e| CacheError::Io(e.to_string()))
    }

    pub fn import_file(&mut self, path: &Path) -> Result<usize, CacheError> {
        let data = fs::read_to_string(path).map_err(|e| CacheError::Io(e.to_string()))?;
        self.import_str(&data)
    }

    /// Loads `<dir>/repcache.v1` if present.
    pub fn load_dir(&mut self, dir: &Path) -> Result<usize, CacheError> {
        let path = dir.join(CACHE_FILE_NAME);
        if !path.exists() {
            return Ok(0);
        }
        let n = self.import_file(&path)?;
        self.dirty = false;
        Ok(n)
    }

    /// Writes `<dir>/repcache.v1` atomically (temp file + rename).
    pub fn save_dir(&mut self, dir: &Path) -> Result<(), CacheError> {
        fs::create_dir_all(dir).map_err(|e| CacheError::Io(e.to_string()))?;
        let tmp = dir.join(format!("{CACHE_FILE_NAME}.tmp"));
        self.export_file(&tmp)?;
        fs::rename(&tmp, dir.join(CACHE_FILE_NAME)).map_err(|e| CacheError::Io(e.to_string()))?;
        self.dirty = false;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn key(n: i64) -> FourierIndex {
        FourierIndex::scalar(n)
    }

    #[test]
    fn export_import_round_trip() {
        let mut c = RepCache::new();
        c.insert(LatticeId::L(5), key(1), 32);
        c.insert(LatticeId::L(6), key(2), 480);
        c.insert(LatticeId::L(6), FourierIndex::zero(0), 1);
        let s = c.export_string();
        let mut d = RepCache::new();
        assert_eq!(d.import_str(&s).unwrap(), 3);
        assert_eq!(d.export_string(), s);
        // re-import is a no-op
        assert_eq!(d.import_str(&s).unwrap(), 0);
    }

    #[test]
    fn export_is_sorted() {
        let mut c = RepCache::new();
        c.insert(LatticeId::L(7), key(3), 7);
        c.insert(LatticeId::L(0), key(1), 0);
        let s = c.export_string();
        let lines: Vec<&str> = s.lines().collect();
        let mut sorted = lines.clone();
        sorted.sort_unstable();
        assert_eq!(lines, sorted);
    }

    #[test]
    fn conflicting_import_is_rejected_with_line_number() {
        let mut c = RepCache::new();
        c.insert(LatticeId::L(5), key(1), 32);
        let err = c.import_str("v1|L5|1|1|33\n").unwrap_err();
        assert!(matches!(err, CacheError::Conflict { line: 1, .. }));
    }

    #[test]
    fn malformed_line_reports_position() {
        let mut c = RepCache::new();
        let err = c.import_str("v1|L5|1|1|32\nnot a record\n").unwrap_err();
        assert!(matches!(err, CacheError::Parse { line: 2, .. }));
    }

    #[test]
    fn merge_of_disjoint_caches_is_union() {
        let mut a = RepCache::new();
        a.insert(LatticeId::L(5), key(1), 32);
        let mut b = RepCache::new();
        b.insert(LatticeId::L(5), key(2), 480);
        let sa = a.export_string();
        let sb = b.export_string();
        let mut u = RepCache::new();
        u.import_str(&sa).unwrap();
        u.import_str(&sb).unwrap();
        assert_eq!(u.len(), 2);
    }

    #[test]
    fn genus_zero_record_round_trips() {
        let mut c = RepCache::new();
        c.insert(LatticeId::L(3), FourierIndex::zero(0), 1);
        let s = c.export_string();
        assert!(s.contains("v1|L3|0||1"));
        let mut d = RepCache::new();
        d.import_str(&s).unwrap();
        assert_eq!(d.get(LatticeId::L(3), &FourierIndex::zero(0)), Some(1));
    }
}
