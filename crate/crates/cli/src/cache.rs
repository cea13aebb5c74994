//! One schema-versioned JSON document per `(kind, p, f)` under the cache directory.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
struct Envelope<T> {
    schema: u32,
    kind: String,
    p: u64,
    f: u32,
    data: T,
}

pub fn path(dir: &Path, kind: &str, p: u64, f: u32) -> PathBuf {
    dir.join(format!("{kind}-p{p}-f{f}.json"))
}

/// Cached value, or `None` if absent, unreadable or of another schema.
pub fn load<T: DeserializeOwned>(dir: &Path, kind: &str, p: u64, f: u32) -> Option<T> {
    let text = fs::read_to_string(path(dir, kind, p, f)).ok()?;
    let env: Envelope<T> = serde_json::from_str(&text).ok()?;
    (env.schema == SCHEMA_VERSION && env.kind == kind && env.p == p && env.f == f).then_some(env.data)
}

pub fn store<T: Serialize>(dir: &Path, kind: &str, p: u64, f: u32, data: &T) -> Result<()> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let env = Envelope {
        schema: SCHEMA_VERSION,
        kind: kind.to_string(),
        p,
        f,
        data,
    };
    let target = path(dir, kind, p, f);
    let tmp = target.with_extension("json.tmp");
    fs::write(&tmp, serde_json::to_string_pretty(&env)?).with_context(|| format!("writing {}", tmp.display()))?;
    fs::rename(&tmp, &target).with_context(|| format!("writing {}", target.display()))?;
    Ok(())
}

/// Cached value for `(kind, p, f)`, computing and storing it on a miss.
pub fn get_or_compute<T, F>(dir: Option<&Path>, kind: &str, p: u64, f: u32, compute: F) -> Result<T>
where
    T: Serialize + DeserializeOwned,
    F: FnOnce() -> Result<T>,
{
    let Some(dir) = dir else {
        return compute();
    };
    if let Some(hit) = load(dir, kind, p, f) {
        return Ok(hit);
    }
    let value = compute()?;
    store(dir, kind, p, f, &value)?;
    Ok(value)
}
