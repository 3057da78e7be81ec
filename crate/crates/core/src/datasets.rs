//! Benchmark datasets: the two social-network affiliation matrices and the
//! planted-block synthetic matrix.

use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::bicluster::{generate_synthetic, GroundTruth};
use crate::error::{Error, Result};
use crate::io::{load_matrix, parse_csv, MatrixFormat};
use crate::matrix::DataMatrix;

const SOUTHERN_WOMEN: &str = include_str!("../data/southern_women.csv");

/// File name looked up for the CEOs/clubs matrix (not bundled).
pub const GALASKIEWICZ_FILE: &str = "galaskiewicz_ceos_clubs.csv";

/// Value range used for the synthetic benchmark matrix.
pub const SYNTHETIC_RANGE: (u32, u32) = (1, 9);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Dataset {
    SouthernWomen,
    Galaskiewicz,
    Synthetic,
}

impl Dataset {
    pub const ALL: [Dataset; 3] = [
        Dataset::Galaskiewicz,
        Dataset::SouthernWomen,
        Dataset::Synthetic,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Dataset::SouthernWomen => "southern-women",
            Dataset::Galaskiewicz => "galaskiewicz",
            Dataset::Synthetic => "synthetic",
        }
    }
}

impl FromStr for Dataset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Dataset::ALL
            .into_iter()
            .find(|d| d.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown dataset `{s}`")))
    }
}

/// Davis, Gardner & Gardner's 18 women x 14 events, in the published order.
pub fn southern_women() -> DataMatrix {
    parse_csv(SOUTHERN_WOMEN).expect("bundled fixture parses")
}

fn default_data_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("data")
}

/// The 26 CEOs x 15 clubs matrix, read from `dir` (or the crate's `data/`
/// directory) because no verified transcription ships with the crate.
pub fn galaskiewicz(dir: Option<&Path>) -> Result<DataMatrix> {
    let path = dir
        .map_or_else(default_data_dir, Path::to_path_buf)
        .join(GALASKIEWICZ_FILE);
    if !path.exists() {
        return Err(Error::Input(format!(
            "{} not found; supply the 26x15 CEOs/clubs matrix as CSV there",
            path.display()
        )));
    }
    let a = load_matrix(&path, MatrixFormat::Csv)?;
    if (a.rows(), a.cols()) != (26, 15) {
        return Err(Error::Format(format!(
            "{} is {}x{}, expected 26x15",
            path.display(),
            a.rows(),
            a.cols()
        )));
    }
    Ok(a)
}

/// The 56 x 50 four-block synthetic matrix with its ground truth.
pub fn synthetic(seed: u64) -> (DataMatrix, GroundTruth) {
    generate_synthetic(56, 50, 4, SYNTHETIC_RANGE, 0.0, seed).expect("valid fixed parameters")
}

pub fn load(
    dataset: Dataset,
    dir: Option<&Path>,
    seed: u64,
) -> Result<(DataMatrix, Option<GroundTruth>)> {
    Ok(match dataset {
        Dataset::SouthernWomen => (southern_women(), None),
        Dataset::Galaskiewicz => (galaskiewicz(dir)?, None),
        Dataset::Synthetic => {
            let (a, t) = synthetic(seed);
            (a, Some(t))
        }
    })
}
