//! On-disk cache of class censuses, keyed by a content hash of `(q, n)`.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use cuspcenter_core::classes::{enumerate_classes, ClassFactor, ClassType, DEFAULT_ENUMERATION_BOUND};
use cuspcenter_core::Result;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::json::ClassJson;

pub const CACHE_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Serialize, Deserialize)]
struct CensusFile {
    schema_version: u32,
    key: String,
    q: u64,
    n: u64,
    classes: Vec<ClassJson>,
}

#[derive(Debug, Clone)]
pub struct ClassCache {
    dir: PathBuf,
}

impl ClassCache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        ClassCache { dir: dir.into() }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    /// SHA-256 of the canonical description of the census.
    pub fn key(q: u64, n: u64) -> String {
        let mut h = Sha256::new();
        h.update(format!("cuspcenter-class-census;schema={CACHE_SCHEMA_VERSION};q={q};n={n}"));
        hex::encode(h.finalize())
    }

    pub fn path(&self, q: u64, n: u64) -> PathBuf {
        self.dir.join(format!("census-{}.json", &Self::key(q, n)[..32]))
    }

    /// A cached census, or `None` if absent, from another schema, or
    /// inconsistent with the class formulas.
    pub fn load(&self, q: u64, n: u64) -> Option<Vec<ClassType>> {
        let text = fs::read_to_string(self.path(q, n)).ok()?;
        let file: CensusFile = serde_json::from_str(&text).ok()?;
        if file.schema_version != CACHE_SCHEMA_VERSION || file.key != Self::key(q, n) || file.q != q || file.n != n {
            return None;
        }
        file.classes
            .iter()
            .map(|c| {
                let factors = c
                    .factors
                    .iter()
                    .map(|f| ClassFactor { poly: f.poly.clone(), partition: f.partition.clone() })
                    .collect();
                let ct = ClassType::new(q, n, factors);
                (ct.class_size.to_string() == c.size).then_some(ct)
            })
            .collect()
    }

    pub fn store(&self, q: u64, n: u64, classes: &[ClassType]) -> io::Result<()> {
        fs::create_dir_all(&self.dir)?;
        let file = CensusFile {
            schema_version: CACHE_SCHEMA_VERSION,
            key: Self::key(q, n),
            q,
            n,
            classes: classes.iter().map(ClassJson::from).collect(),
        };
        let path = self.path(q, n);
        let tmp = path.with_extension(format!("tmp{}", std::process::id()));
        fs::write(&tmp, serde_json::to_string(&file).expect("serializable"))?;
        fs::rename(tmp, path)
    }
}

/// Classes of `GL_n(F_q)`, through the cache when one is given. Cache write
/// failures are ignored; the census is still returned.
pub fn load_or_enumerate(cache: Option<&ClassCache>, q: u64, n: u64) -> Result<Vec<ClassType>> {
    if let Some(classes) = cache.and_then(|c| c.load(q, n)) {
        return Ok(classes);
    }
    let classes = enumerate_classes(q, n, DEFAULT_ENUMERATION_BOUND)?;
    if let Some(c) = cache {
        let _ = c.store(q, n, &classes);
    }
    Ok(classes)
}
