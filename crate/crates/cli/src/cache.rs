//! Content-addressed on-disk store for Ext tables.

use std::path::{Path, PathBuf};

use atmot_core::cobar::{compute_ext, CobarError, ExtCoeffs, ExtTable};
use sha2::{Digest, Sha256};

pub const CACHE_ENV: &str = "ATMOT_CACHE_DIR";
const FORMAT: &str = "ext-v1";

pub struct ExtCache {
    dir: Option<PathBuf>,
}

impl ExtCache {
    /// Cache rooted at `$ATMOT_CACHE_DIR`, else under the system temp directory; `None` disables it.
    pub fn from_env(enabled: bool) -> Self {
        let dir = enabled.then(|| match std::env::var_os(CACHE_ENV) {
            Some(d) if !d.is_empty() => PathBuf::from(d),
            _ => std::env::temp_dir().join("atmot-cache"),
        });
        ExtCache { dir }
    }

    pub fn key(n: usize, s_max: usize, max_degree: i64, coeffs: ExtCoeffs) -> String {
        let mut h = Sha256::new();
        h.update(format!("{FORMAT}|n={n}|s_max={s_max}|D={max_degree}|coeffs={coeffs}").as_bytes());
        hex::encode(h.finalize())
    }

    fn path(dir: &Path, key: &str) -> PathBuf {
        dir.join(format!("{key}.json"))
    }

    pub fn ext(&self, n: usize, s_max: usize, max_degree: i64, coeffs: ExtCoeffs) -> Result<ExtTable, CobarError> {
        let Some(dir) = &self.dir else {
            return compute_ext(n, s_max, max_degree, coeffs);
        };
        let path = Self::path(dir, &Self::key(n, s_max, max_degree, coeffs));
        if let Some(t) = std::fs::read_to_string(&path).ok().and_then(|s| serde_json::from_str::<ExtTable>(&s).ok()) {
            if (t.n, t.s_max, t.max_degree, t.coeffs) == (n, s_max, max_degree, coeffs) {
                return Ok(t);
            }
        }
        let t = compute_ext(n, s_max, max_degree, coeffs)?;
        // Unwritable caches only cost recomputation.
        let _ = store(dir, &path, &t);
        Ok(t)
    }
}

fn store(dir: &Path, path: &Path, t: &ExtTable) -> std::io::Result<()> {
    std::fs::create_dir_all(dir)?;
    let tmp = path.with_extension(format!("tmp{}", std::process::id()));
    std::fs::write(&tmp, serde_json::to_vec(t).map_err(std::io::Error::other)?)?;
    std::fs::rename(tmp, path)
}
