//! On-disk cache of a priori report sets.
//!
//! A set is stored under a file name spelled out from every input that can
//! change its outcome (constants, grid, depth, precision). Loading re-checks
//! those inputs against the file contents, so an edited or stale file is
//! treated as a miss rather than trusted.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use gasket_core::apriori::AprioriConfig;
use gasket_core::operator::AprioriConstants;
use log::{debug, warn};

use crate::format::{reports_from_str, reports_to_string, ReportSet};

pub const CACHE_ENV: &str = "GASKET_CACHE_DIR";
pub const DEFAULT_DIR: &str = ".gasket-cache";

#[derive(Clone, Debug)]
pub struct ReportCache {
    dir: PathBuf,
}

impl ReportCache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        ReportCache { dir: dir.into() }
    }

    /// `dir` if given, else `$GASKET_CACHE_DIR`, else `./.gasket-cache`.
    pub fn locate(dir: Option<&Path>) -> Self {
        match dir {
            Some(d) => Self::new(d),
            None => Self::new(std::env::var_os(CACHE_ENV).map(PathBuf::from).unwrap_or_else(|| PathBuf::from(DEFAULT_DIR))),
        }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn path_for(&self, constants: &AprioriConstants, cfg: &AprioriConfig) -> PathBuf {
        let mut name = String::from("apriori");
        for (k, v) in constants.fields() {
            name.push_str(&format!("_{k}{v}"));
        }
        name.push_str(&format!(
            "_sub{}_prec{}_n{}_sw{}_d{}.txt",
            cfg.subdivision, cfg.prec, cfg.n_max, cfg.n_switch, cfg.max_depth
        ));
        self.dir.join(name)
    }

    pub fn load(&self, constants: &AprioriConstants, cfg: &AprioriConfig) -> Option<ReportSet> {
        let path = self.path_for(constants, cfg);
        let text = match fs::read_to_string(&path) {
            Ok(t) => t,
            Err(e) => {
                debug!("cache miss {}: {e}", path.display());
                return None;
            }
        };
        match reports_from_str(&text) {
            Ok(set) if set.constants == *constants && set.config == *cfg && set.reports.iter().all(|r| r.constants == *constants) => Some(set),
            Ok(_) => {
                warn!("ignoring {}: recorded inputs differ from the requested ones", path.display());
                None
            }
            Err(e) => {
                warn!("ignoring unreadable cache file {}: {e}", path.display());
                None
            }
        }
    }

    pub fn store(&self, set: &ReportSet) -> io::Result<PathBuf> {
        fs::create_dir_all(&self.dir)?;
        let path = self.path_for(&set.constants, &set.config);
        let tmp = path.with_extension("tmp");
        fs::write(&tmp, reports_to_string(set))?;
        fs::rename(&tmp, &path)?;
        Ok(path)
    }
}
