//! Follower graph and per-hashtag epidemic estimates.

mod estimate;
mod graph;
mod summary;

pub use estimate::{
    activity_span, adoption_fraction, estimate, group_by_hashtag, is_retweet, retweet_fraction, seeder_fraction,
    AdoptionLog, BetaAttribution, BetaEstimate, EpidemicEstimates, UserActivity,
};
pub use graph::{load_graph, write_graph, FollowerGraph, GraphBuilder, GraphStats};
pub use summary::{
    class_summary, default_levels, quantile, subsample_edges, subsampling_harness, ClassSummary, FiveNumber,
    SubsampleRow, QUANTITIES,
};
