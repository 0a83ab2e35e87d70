//! On-disk cache of the periodic basis columns.
//!
//! The columns `H̲_w, w ∈ W` determine every `p`, `q` and `q'` entry in every
//! window, so the cache is keyed by root datum only. Entries are re-certified
//! on load; anything unreadable or stale is recomputed and overwritten.

use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use periodic_kl::periodic::PeriodicElement;
use periodic_kl::{AffineWeylGroup, DatumSpec, PeriodicModule, Result};
use serde::{Deserialize, Serialize};
use serde_json::Value;

pub const FORMAT_VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
struct CacheFile {
    format_version: u32,
    root_datum: DatumSpec,
    columns: Vec<Value>,
}

pub fn cache_path(dir: &Path, g: &AffineWeylGroup) -> PathBuf {
    let rd = g.root_datum();
    dir.join(format!(
        "periodic-{}{}-l{}-v{FORMAT_VERSION}.json",
        rd.cartan_type().family,
        rd.rank(),
        rd.l()
    ))
}

fn load(path: &Path, g: &Arc<AffineWeylGroup>) -> Option<PeriodicModule> {
    let text = fs::read_to_string(path).ok()?;
    let file: CacheFile = serde_json::from_str(&text).ok()?;
    if file.format_version != FORMAT_VERSION || file.root_datum != DatumSpec::of(g.root_datum()) {
        return None;
    }
    let columns = file
        .columns
        .iter()
        .map(|c| PeriodicElement::from_json(g, c))
        .collect::<Result<Vec<_>>>()
        .ok()?;
    PeriodicModule::from_columns(g.clone(), columns).ok()
}

fn store(path: &Path, m: &PeriodicModule) -> std::io::Result<()> {
    let g = m.group();
    let file = CacheFile {
        format_version: FORMAT_VERSION,
        root_datum: DatumSpec::of(g.root_datum()),
        columns: m.columns().iter().map(|c| c.to_json(g)).collect(),
    };
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent)?;
    }
    // write-then-rename so a concurrent reader never sees half a file
    let tmp = path.with_extension(format!("tmp{}", std::process::id()));
    fs::write(
        &tmp,
        serde_json::to_string(&file).expect("cache serializes"),
    )?;
    fs::rename(tmp, path)
}

/// The periodic module for `g`, through the cache when a directory is given.
pub fn periodic_module(
    g: Arc<AffineWeylGroup>,
    dir: Option<&Path>,
    max_gap: u64,
) -> Result<PeriodicModule> {
    let Some(dir) = dir else {
        return PeriodicModule::with_max_gap(g, max_gap);
    };
    let path = cache_path(dir, &g);
    if let Some(m) = load(&path, &g) {
        return Ok(m);
    }
    let m = PeriodicModule::with_max_gap(g, max_gap)?;
    if let Err(e) = store(&path, &m) {
        eprintln!("warning: could not write cache {}: {e}", path.display());
    }
    Ok(m)
}
