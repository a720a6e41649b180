//! The four commands: cluster, induce, classify and the full pipeline.
//!
//! Every command reads its inputs from disk and writes its outputs into the
//! run's output directory, so the pipeline is literally the three steps run
//! back to back. Console output goes to the `log` writer.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use gridrough_core::{
    build_decision_table, classify_image, cluster_majority, distinct_colors, labeled_agreement,
    merge_similar_seeds, refine_boundaries, relabel_cells, rough_cluster, ClassifyError, ClusterError, ClusterId, ClusterMap,
    ClusteringParams, Discretizer, Grid, HsiImage, ImageRaster, LabelId, LabelRaster, Palette,
    PerfStats, PhaseTime, RefineStats, RuleSet,
};

use crate::labels::parse_labels;
use crate::palette::{self, PaletteError};
use crate::ppm::{self, PpmFileError};
use crate::report;
use crate::rules_io;

pub const CLUSTER_MAP: &str = "clusters.ppm";
pub const CLUSTER_REPORT: &str = "clusters.txt";
pub const PERF_REPORT: &str = "perf.txt";
pub const RULES_TEXT: &str = "rules.txt";
pub const RULES_JSON: &str = "rules.json";
pub const INDUCE_REPORT: &str = "induce.txt";
pub const CLASSIFIED: &str = "classified.ppm";
pub const COVERAGE_REPORT: &str = "coverage.txt";
pub const OBJECTS_REPORT: &str = "objects.txt";
pub const ACCURACY_REPORT: &str = "accuracy.txt";

/// Failures, grouped by the exit status they map to.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("parameter error: {0}")]
    Param(String),
    #[error("i/o error: {0}")]
    Io(String),
    #[error("data error: {0}")]
    Data(String),
}

impl Error {
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Param(_) => 2,
            Error::Io(_) => 3,
            Error::Data(_) => 4,
        }
    }

    fn io(path: &Path, e: std::io::Error) -> Self {
        Error::Io(format!("{}: {e}", path.display()))
    }
}

impl From<ClusterError> for Error {
    fn from(e: ClusterError) -> Self {
        match e {
            ClusterError::GridOutOfRange { .. }
            | ClusterError::InvalidTheta(_)
            | ClusterError::InvalidGamma(_)
            | ClusterError::InvalidThetaFraction(_) => Error::Param(e.to_string()),
            _ => Error::Data(e.to_string()),
        }
    }
}

impl From<ClassifyError> for Error {
    fn from(e: ClassifyError) -> Self {
        match e {
            ClassifyError::ZeroBins => Error::Param(e.to_string()),
            _ => Error::Data(e.to_string()),
        }
    }
}

impl From<PpmFileError> for Error {
    fn from(e: PpmFileError) -> Self {
        match e {
            PpmFileError::Io { .. } => Error::Io(e.to_string()),
            PpmFileError::Format { .. } => Error::Data(e.to_string()),
        }
    }
}

impl From<PaletteError> for Error {
    fn from(e: PaletteError) -> Self {
        match e {
            PaletteError::Io { .. } => Error::Io(e.to_string()),
            PaletteError::Ppm(inner) => inner.into(),
            _ => Error::Data(e.to_string()),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub input: PathBuf,
    pub out_dir: PathBuf,
    pub params: ClusteringParams,
    pub bins: u32,
    pub refine: bool,
}

impl RunConfig {
    pub fn new(input: impl Into<PathBuf>, out_dir: impl Into<PathBuf>) -> Self {
        RunConfig {
            input: input.into(),
            out_dir: out_dir.into(),
            params: ClusteringParams::default(),
            bins: 8,
            refine: true,
        }
    }

    pub fn out(&self, name: &str) -> PathBuf {
        self.out_dir.join(name)
    }

    fn discretizer(&self) -> Result<Discretizer> {
        Ok(Discretizer::new(self.bins)?)
    }

    fn prepare_out_dir(&self) -> Result<()> {
        fs::create_dir_all(&self.out_dir).map_err(|e| Error::io(&self.out_dir, e))
    }
}

/// Clusters of one image after the rough phase and, optionally, refinement.
#[derive(Debug, Clone)]
pub struct Segmentation {
    pub hsi: HsiImage,
    pub grid: Grid,
    pub map: ClusterMap,
    pub stats: PerfStats,
    pub refine: Option<RefineSummary>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RefineSummary {
    pub stats: RefineStats,
    /// Clusters folded into an earlier cluster with a Θ-similar seed.
    pub merged_clusters: usize,
}

pub fn segment(image: &ImageRaster, params: &ClusteringParams, refine: bool) -> Result<Segmentation> {
    let start = Instant::now();
    let rough = rough_cluster(image, params)?;
    let mut stats = rough.stats;
    stats.wall_times.push(PhaseTime {
        phase: "rough",
        duration: start.elapsed(),
    });
    if !refine {
        return Ok(Segmentation {
            hsi: rough.hsi,
            grid: rough.grid,
            map: rough.map,
            stats,
            refine: None,
        });
    }
    let start = Instant::now();
    let refined = refine_boundaries(&rough.hsi, &rough.map, &rough.grid);
    let (map, merged) = merge_similar_seeds(&refined.map, params.theta_band);
    let grid = relabel_cells(&refined.grid, &map);
    stats.wall_times.push(PhaseTime {
        phase: "refine",
        duration: start.elapsed(),
    });
    stats.q_border_cells = refined.stats.border_cells;
    stats.r_border_pixels = refined.stats.border_pixels;
    Ok(Segmentation {
        hsi: rough.hsi,
        grid,
        map,
        stats,
        refine: Some(RefineSummary {
            stats: refined.stats,
            merged_clusters: merged,
        }),
    })
}

/// The cluster map as a label raster: label `k` is cluster `k`.
pub fn cluster_label_map(map: &ClusterMap) -> LabelRaster {
    let colors = distinct_colors(map.len());
    let mut palette = Palette::new();
    for (c, &color) in map.clusters().iter().zip(&colors) {
        palette
            .insert(LabelId(c.id.0), format!("cluster{}", c.id), color)
            .expect("cluster ids are never the reserved id");
    }
    let labels = map
        .assignment()
        .iter()
        .map(|c| c.map_or(LabelId::UNCLASSIFIED, |c| LabelId(c.0)))
        .collect();
    LabelRaster::new(map.width(), map.height(), labels, palette).expect("assignment matches the map")
}

fn write(path: &Path, contents: impl AsRef<[u8]>) -> Result<()> {
    fs::write(path, contents).map_err(|e| Error::io(path, e))
}

fn save_labels(labels: &LabelRaster, path: &Path) -> Result<()> {
    palette::save_label_map(labels, path).map_err(|e| Error::io(path, e))
}

fn log_line(log: &mut dyn Write, text: &str) {
    // console output is best effort
    let _ = log.write_all(text.as_bytes());
}

pub fn cmd_cluster(cfg: &RunConfig, log: &mut dyn Write) -> Result<Segmentation> {
    let image = ppm::load_ppm(&cfg.input)?;
    cfg.params.validate(image.width(), image.height())?;
    cfg.prepare_out_dir()?;
    let seg = segment(&image, &cfg.params, cfg.refine)?;
    let labels = cluster_label_map(&seg.map);
    save_labels(&labels, &cfg.out(CLUSTER_MAP))?;
    let colors: Vec<_> = labels.palette().iter().map(|(_, e)| e.color).collect();
    write(
        &cfg.out(CLUSTER_REPORT),
        report::cluster_report(image.width(), image.height(), &cfg.params, cfg.refine, &seg.map, &colors),
    )?;
    write(&cfg.out(PERF_REPORT), report::perf_report(&seg.stats, seg.refine.as_ref()))?;
    log_line(log, &format!("clusters {}\n", seg.map.len()));
    log_line(log, &report::timing_lines(&seg.stats));
    Ok(seg)
}

/// Reads `clusters.ppm` back into a map over `image`.
pub fn load_cluster_map(cfg: &RunConfig, hsi: &HsiImage) -> Result<ClusterMap> {
    let path = cfg.out(CLUSTER_MAP);
    if !path.exists() {
        return Err(Error::Io(format!(
            "{}: cluster output is missing; run `cluster` first",
            path.display()
        )));
    }
    let labels = palette::load_label_map(&path)?;
    if (labels.width(), labels.height()) != (hsi.width(), hsi.height()) {
        return Err(Error::Data(format!(
            "{} is {}x{} but the image is {}x{}",
            path.display(),
            labels.width(),
            labels.height(),
            hsi.width(),
            hsi.height()
        )));
    }
    let assignment = labels
        .labels()
        .iter()
        .map(|l| {
            (!l.is_unclassified())
                .then_some(ClusterId(l.0))
                .ok_or_else(|| Error::Data(format!("{} has pixels outside every cluster", path.display())))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ClusterMap::from_assignment(hsi, &assignment)?)
}

pub fn cmd_induce(cfg: &RunConfig, labels_path: &Path, log: &mut dyn Write) -> Result<RuleSet> {
    let disc = cfg.discretizer()?;
    let image = ppm::load_ppm(&cfg.input)?;
    let hsi = HsiImage::from_raster(&image);
    let map = load_cluster_map(cfg, &hsi)?;
    let text = fs::read_to_string(labels_path).map_err(|e| Error::io(labels_path, e))?;
    let labels = parse_labels(&text).map_err(|e| Error::Data(format!("{}: {e}", labels_path.display())))?;
    let training = build_decision_table(&hsi, &map, &labels, &disc)?;
    let rules = RuleSet::induce(&training, disc)?;
    write(&cfg.out(RULES_TEXT), rules_io::format_text(&rules))?;
    write(&cfg.out(RULES_JSON), rules_io::format_json(&rules))?;
    let summary = report::induce_report(&training, &rules);
    write(&cfg.out(INDUCE_REPORT), &summary)?;
    log_line(log, &summary);
    Ok(rules)
}

pub fn load_rules(path: &Path) -> Result<RuleSet> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    rules_io::parse_any(&text).map_err(|e| Error::Data(format!("{}: {e}", path.display())))
}

/// Truth raster for `--truth`: its own sidecar when present, otherwise its
/// colors are read through the predicted class palette.
pub fn load_truth(path: &Path, predicted: &Palette) -> Result<LabelRaster> {
    if palette::sidecar_path(path).exists() {
        return Ok(palette::load_label_map(path)?);
    }
    let image = ppm::load_ppm(path)?;
    Ok(palette::decode_with(&image, predicted.clone(), path)?)
}

#[derive(Debug, Clone)]
pub struct ClassifyOutcome {
    pub labels: LabelRaster,
    pub accuracy: Option<f64>,
}

pub fn cmd_classify(
    cfg: &RunConfig,
    rules_path: &Path,
    target: &Path,
    truth: Option<&Path>,
    log: &mut dyn Write,
) -> Result<ClassifyOutcome> {
    let rules = load_rules(rules_path)?;
    let image = ppm::load_ppm(target)?;
    cfg.params.validate(image.width(), image.height())?;
    let truth = truth.map(|p| load_truth(p, &gridrough_core::class_palette(&rules.classes))).transpose()?;
    cfg.prepare_out_dir()?;
    let labels = classify_image(&image, &rules)?;
    let seg = segment(&image, &cfg.params, cfg.refine)?;
    let objects = cluster_majority(&seg.map, &labels)?;
    save_labels(&labels, &cfg.out(CLASSIFIED))?;
    let coverage = report::coverage_report(&labels);
    write(&cfg.out(COVERAGE_REPORT), &coverage)?;
    write(&cfg.out(OBJECTS_REPORT), report::objects_report(&objects, &labels))?;
    log_line(log, &coverage);
    let mut accuracy = None;
    if let Some(truth) = truth {
        let agreement = labeled_agreement(&labels, &truth)?;
        let text = report::accuracy_report(&agreement);
        write(&cfg.out(ACCURACY_REPORT), &text)?;
        log_line(log, &text);
        accuracy = agreement.ratio();
    }
    Ok(ClassifyOutcome { labels, accuracy })
}

#[derive(Debug, Clone)]
pub enum PipelineOutcome {
    /// No labels file yet; only the cluster outputs were written.
    NeedsLabels,
    Done(ClassifyOutcome),
}

pub fn cmd_pipeline(
    cfg: &RunConfig,
    labels_path: &Path,
    truth: Option<&Path>,
    log: &mut dyn Write,
) -> Result<PipelineOutcome> {
    cmd_cluster(cfg, log)?;
    if !labels_path.exists() {
        log_line(
            log,
            &format!(
                "labels file {} not found; stopping after clustering.\n\
                 Inspect {} and {}, then write one `<cluster_id> <class_name>` line per cluster \
                 to {} and rerun.\n",
                labels_path.display(),
                cfg.out(CLUSTER_MAP).display(),
                cfg.out(CLUSTER_REPORT).display(),
                labels_path.display()
            ),
        );
        return Ok(PipelineOutcome::NeedsLabels);
    }
    cmd_induce(cfg, labels_path, log)?;
    let outcome = cmd_classify(cfg, &cfg.out(RULES_TEXT), &cfg.input, truth, log)?;
    Ok(PipelineOutcome::Done(outcome))
}
