//! File formats and command-line pipeline around `gridrough-core`.
//!
//! Images are PPM (P3 or P6, maxval 255). Label maps are palette-colored P6
//! images with a `.palette` sidecar. Rules are written both as text lines and
//! as JSON.

pub mod labels;
pub mod palette;
pub mod pipeline;
pub mod ppm;
pub mod report;
pub mod rules_io;
pub mod synth;
pub mod table_io;

pub use pipeline::{
    cmd_classify, cmd_cluster, cmd_induce, cmd_pipeline, segment, Error, PipelineOutcome, RunConfig,
    Segmentation,
};
pub use ppm::{load_ppm, save_ppm};
