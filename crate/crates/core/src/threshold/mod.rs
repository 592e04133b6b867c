//! Monte Carlo experiments on collapse and on the auxiliary random graphs.

pub mod boost;
pub mod estimate;
pub mod paths;
pub mod stats;
pub mod sweep;
pub mod zgraph;

pub use boost::{boost_experiment, BoostConfig, BoostReport};
pub use estimate::{estimate_h, estimate_h_exhaustive, Counts, HEstimate, TrialRecord};
pub use paths::{gprime_path_stats, PathStats};
pub use sweep::{find_threshold, sweep, SearchError, ThresholdCurve, ThresholdSearch};
pub use zgraph::{z_graph_stats, ZGraphStats};
