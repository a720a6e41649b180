//! Grid-density rough clustering of multispectral rasters and rough-set rule
//! induction over the resulting clusters.
//!
//! The pipeline has two halves:
//!
//! * **Object identification.** Pixels are converted to HSI ([`colorspace`]),
//!   the raster is partitioned into an `n × n` grid and cells are claimed pass by
//!   pass around the highest-hue unclustered pixel ([`grid`]). Cluster borders are
//!   then smoothed pixel by pixel using seed distance and the β homogeneity
//!   index ([`boundary`]).
//! * **Classification.** Labeled clusters become a decision table of discretized
//!   HSI values, LEM2 induces certain and possible rules from the lower and upper
//!   approximations of each concept ([`roughset`]), and images are classified
//!   pixel-wise against the rule base ([`classify`]).
//!
//! The crate is `no_std` and only needs `alloc`. File formats, the CLI and
//! timing live in the companion `gridrough` crate.

#![no_std]

extern crate alloc;

#[cfg(test)]
#[macro_use]
extern crate std;

pub mod boundary;
pub mod classify;
pub mod colorspace;
pub mod grid;
pub mod raster;
pub mod roughset;

pub use boundary::{
    beta_measure, beta_of_assignment, find_border_cells, merge_similar_seeds, refine_boundaries,
    relabel_cells,
    BetaScore, BorderSet, RefineStats, Refinement,
};
pub use classify::{
    accuracy, build_decision_table, class_palette, classify_image, classify_pixel,
    classify_values, cluster_majority, distinct_colors, labeled_agreement, Agreement,
    ClassifyError, Discretizer, LabelsFile, ObjectLabel, RuleSet, TrainingSet,
};
pub use colorspace::{hsi_manhattan, rgb_to_hsi, similarity_flag, HsiImage, HsiPixel};
pub use grid::{
    build_grid, rough_cluster, score_cells, select_seed_cell, select_seed_pixel, ClusterError,
    ClusterId, ClusterMap, ClusteringParams, Gamma, Grid, GridCell, PerfStats, PhaseTime,
    RoughClustering,
};
pub use raster::{ImageRaster, LabelId, LabelRaster, Palette, RasterError, Rgb};
pub use roughset::{
    compute_blocks, indiscernibility_classes, induce_rules, lem2_local_covering, lower_approx,
    upper_approx, AVPair, Block, Certainty, Concept, DecisionTable, LocalCovering, RoughSetError,
    RowSet, Rule,
};
