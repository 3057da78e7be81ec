//! Biclustering of two-mode matrices by weighted bandwidth minimization.
//!
//! Rows and columns are reordered to minimize `sum a_ij^2 (i - j)^2`, which
//! pulls large entries toward the diagonal and exposes biclusters as
//! diagonal blocks. The search is a biogeography-based optimizer whose
//! migration rates come from a Lotka-Volterra trajectory.

pub mod baselines;
pub mod bbo;
pub mod bicluster;
pub mod cli;
pub mod datasets;
pub mod error;
pub mod io;
pub mod matrix;
pub mod migration;
pub mod plot;
pub mod rng;

pub use baselines::{brute_force_optimum, hill_climb, rcm_order, OracleResult};
pub use bbo::{run_bbo, BboConfig, SolveResult};
pub use bicluster::{
    extract_blocks, generate_synthetic, recovery_score, Bicluster, BiclusterSet, GroundTruth,
};
pub use error::{Error, Result};
pub use io::{load_matrix, save_matrix, MatrixFormat};
pub use matrix::{
    apply_arrangement, bandwidth_cost, bandwidth_cost_delta, classic_bandwidth, scramble,
    Arrangement, DataMatrix, Mode, Permutation, Swap,
};
pub use migration::{build_schedule, integrate_lv, LvParams, MigrationSchedule, Trajectory};
