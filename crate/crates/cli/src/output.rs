use std::fs;
use std::path::{Path, PathBuf};

use foel_core::report::CsvTable;
use foel_core::FoelVerdict;
use serde::Serialize;

use crate::Failure;

/// `E(S_lower) - E(S)` for one adjacent pair of sectors.
#[derive(Serialize)]
pub struct Margin {
    pub s_times2: i64,
    pub s_lower_times2: i64,
    pub gap: f64,
}

#[derive(Serialize)]
pub struct FoelSummary {
    pub foel_ok: bool,
    pub crossings: usize,
    pub violations: usize,
    pub margins: Vec<Margin>,
}

impl From<&FoelVerdict> for FoelSummary {
    fn from(v: &FoelVerdict) -> Self {
        FoelSummary {
            foel_ok: v.ok,
            crossings: v.crossings.len(),
            violations: v.violations.len(),
            margins: v
                .margins
                .iter()
                .map(|&(s, lower, gap)| Margin { s_times2: s.twice(), s_lower_times2: lower.twice(), gap })
                .collect(),
        }
    }
}

pub struct OutDir(PathBuf);

impl OutDir {
    pub fn create(path: &Path) -> Result<Self, Failure> {
        fs::create_dir_all(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
        Ok(OutDir(path.to_path_buf()))
    }

    pub fn csv(&self, name: &str, table: &CsvTable) -> Result<(), Failure> {
        let path = self.0.join(name);
        table.write_to(&path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
    }

    pub fn json<T: Serialize>(&self, name: &str, value: &T) -> Result<(), Failure> {
        let path = self.0.join(name);
        let mut text = serde_json::to_string_pretty(value).expect("summary serializes");
        text.push('\n');
        fs::write(&path, text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
    }
}
