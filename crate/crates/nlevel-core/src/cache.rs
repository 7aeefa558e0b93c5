//! On-disk zero cache: one CSV per modulus with schema
//! `q,char_label,index,gamma,abs_err`, plus a small JSON sidecar
//! recording the verified height so idempotence is decidable without
//! recomputation.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::zeros::{find_zeros_all, ZeroTable};

pub struct ZeroCache {
    dir: PathBuf,
}

#[derive(Serialize, Deserialize)]
struct Meta {
    q: u64,
    height_max: f64,
    completeness_checked: bool,
    labels: Vec<String>,
}

#[derive(Serialize, Deserialize)]
struct Row {
    q: u64,
    char_label: String,
    index: i64,
    gamma: f64,
    abs_err: f64,
}

impl ZeroCache {
    pub fn new(dir: impl AsRef<Path>) -> Result<Self, Error> {
        std::fs::create_dir_all(dir.as_ref())?;
        Ok(ZeroCache {
            dir: dir.as_ref().to_path_buf(),
        })
    }

    fn csv_path(&self, q: u64) -> PathBuf {
        self.dir.join(format!("zeros_{q:05}.csv"))
    }

    fn meta_path(&self, q: u64) -> PathBuf {
        self.dir.join(format!("zeros_{q:05}.meta.json"))
    }

    /// Cached verified height for modulus q, if any.
    pub fn cached_height(&self, q: u64) -> Option<f64> {
        let meta: Meta =
            serde_json::from_reader(std::fs::File::open(self.meta_path(q)).ok()?).ok()?;
        Some(meta.height_max)
    }

    /// Tables for all primitive χ mod q with zeros to height ≥ t_max,
    /// computing and persisting only when the cache cannot serve the
    /// request. Returns (tables, served_from_cache).
    pub fn ensure(&self, q: u64, t_max: f64) -> Result<(Vec<ZeroTable>, bool), Error> {
        if let Some(h) = self.cached_height(q) {
            if h >= t_max {
                return Ok((self.load(q)?, true));
            }
        }
        let tables = find_zeros_all(q, t_max)?;
        self.store_with_floor(q, &tables, t_max)?;
        Ok((tables, false))
    }

    pub fn load(&self, q: u64) -> Result<Vec<ZeroTable>, Error> {
        let meta: Meta = serde_json::from_reader(
            std::fs::File::open(self.meta_path(q))
                .map_err(|_| Error::Cache(format!("no cached zeros for q={q}")))?,
        )
        .map_err(|e| Error::Cache(format!("bad meta for q={q}: {e}")))?;
        let mut rdr = csv::Reader::from_path(self.csv_path(q))?;
        let mut per_label: BTreeMap<String, Vec<(f64, f64)>> = meta
            .labels
            .iter()
            .map(|l| (l.clone(), vec![]))
            .collect();
        for rec in rdr.deserialize() {
            let row: Row = rec?;
            if row.q != q {
                return Err(Error::Cache(format!(
                    "modulus mismatch in {}: {}",
                    self.csv_path(q).display(),
                    row.q
                )));
            }
            per_label
                .entry(row.char_label)
                .or_default()
                .push((row.gamma, row.abs_err));
        }
        let mut out = vec![];
        for label in &meta.labels {
            let mut zeros = per_label.remove(label).unwrap_or_default();
            zeros.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
            out.push(ZeroTable {
                q,
                char_label: label.clone(),
                height_max: meta.height_max,
                zeros,
                completeness_checked: meta.completeness_checked,
            });
        }
        Ok(out)
    }

    pub fn store(&self, q: u64, tables: &[ZeroTable]) -> Result<(), Error> {
        self.store_with_floor(q, tables, 0.0)
    }

    /// `floor` records the verified height when `tables` is empty (moduli
    /// with no primitive characters), so such requests still cache.
    fn store_with_floor(&self, q: u64, tables: &[ZeroTable], floor: f64) -> Result<(), Error> {
        let height = tables
            .iter()
            .map(|t| t.height_max)
            .fold(f64::INFINITY, f64::min);
        let meta = Meta {
            q,
            height_max: if height.is_finite() { height } else { floor },
            completeness_checked: tables.iter().all(|t| t.completeness_checked),
            labels: tables.iter().map(|t| t.char_label.clone()).collect(),
        };
        // sort rows by (q, char_label, index)
        let mut sorted: Vec<&ZeroTable> = tables.iter().collect();
        sorted.sort_by(|a, b| a.char_label.cmp(&b.char_label));
        let mut wtr = csv::Writer::from_path(self.csv_path(q))?;
        for t in sorted {
            for (index, gamma, abs_err) in t.indexed() {
                wtr.serialize(Row {
                    q,
                    char_label: t.char_label.clone(),
                    index,
                    gamma,
                    abs_err,
                })?;
            }
        }
        wtr.flush()?;
        serde_json::to_writer_pretty(std::fs::File::create(self.meta_path(q))?, &meta)
            .map_err(|e| Error::Cache(format!("meta write failed: {e}")))?;
        Ok(())
    }
}
