//! Turning labeled clusters into a rule base and applying it pixel by pixel.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use thiserror::Error;

use crate::colorspace::{HsiImage, HsiPixel};
use crate::grid::{ClusterId, ClusterMap};
use crate::raster::{ImageRaster, LabelId, LabelRaster, Palette, RasterError, Rgb};
use crate::roughset::{induce_rules, Certainty, DecisionTable, RoughSetError, Rule};

/// Attribute names of the discretized HSI channels, in column order.
pub const ATTRIBUTES: [&str; 3] = ["h_bin", "s_bin", "i_bin"];
pub const DECISION: &str = "class";

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ClassifyError {
    #[error("bins per channel must be at least 1")]
    ZeroBins,
    #[error("the rule list is empty")]
    EmptyRules,
    #[error("no cluster carries a label")]
    NoLabeledClusters,
    #[error("training needs at least two classes, only {0:?} is labeled")]
    SingleClass(String),
    #[error("labels refer to unknown cluster id {0}")]
    UnknownCluster(ClusterId),
    #[error("cluster id {0} is labeled more than once")]
    DuplicateCluster(ClusterId),
    #[error("class name {0:?} must be non-empty and free of whitespace")]
    BadClassName(String),
    #[error("rasters differ in size: {left:?} vs {right:?}")]
    DimensionMismatch {
        left: (usize, usize),
        right: (usize, usize),
    },
    #[error("rule references attribute {attribute} but pixels have {available}")]
    RuleAttribute { attribute: usize, available: usize },
    #[error("rule decides class code {0} which has no name")]
    RuleClass(u32),
    #[error(transparent)]
    Raster(#[from] RasterError),
    #[error(transparent)]
    RoughSet(#[from] RoughSetError),
}

/// Equal-width binning of H, S and I.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Discretizer {
    bins: u32,
}

impl Default for Discretizer {
    fn default() -> Self {
        Discretizer { bins: 8 }
    }
}

impl Discretizer {
    pub fn new(bins: u32) -> Result<Self, ClassifyError> {
        if bins == 0 {
            return Err(ClassifyError::ZeroBins);
        }
        Ok(Discretizer { bins })
    }

    pub fn bins(&self) -> u32 {
        self.bins
    }

    /// Bin of a value normalised to `[0, 1]`. Bins are right-open except the last.
    pub fn bin(&self, normalized: f64) -> u32 {
        let raw = libm::floor(f64::from(self.bins) * normalized);
        if raw.is_nan() || raw < 0.0 {
            0
        } else {
            (raw as u32).min(self.bins - 1)
        }
    }

    pub fn discretize(&self, p: HsiPixel) -> [u32; 3] {
        [self.bin(p.h / 360.0), self.bin(p.s), self.bin(p.i)]
    }
}

/// Human-assigned class names for clusters.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LabelsFile {
    entries: BTreeMap<ClusterId, String>,
}

impl LabelsFile {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, id: ClusterId, name: impl Into<String>) -> Result<(), ClassifyError> {
        let name = name.into();
        if name.is_empty() || name.chars().any(char::is_whitespace) {
            return Err(ClassifyError::BadClassName(name));
        }
        if self.entries.contains_key(&id) {
            return Err(ClassifyError::DuplicateCluster(id));
        }
        self.entries.insert(id, name);
        Ok(())
    }

    pub fn get(&self, id: ClusterId) -> Option<&str> {
        self.entries.get(&id).map(String::as_str)
    }

    pub fn iter(&self) -> impl Iterator<Item = (ClusterId, &str)> {
        self.entries.iter().map(|(&id, n)| (id, n.as_str()))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

impl FromIterator<(ClusterId, String)> for LabelsFile {
    fn from_iter<I: IntoIterator<Item = (ClusterId, String)>>(iter: I) -> Self {
        LabelsFile {
            entries: iter.into_iter().collect(),
        }
    }
}

/// Decision table built from labeled clusters, plus the clusters left out.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrainingSet {
    pub table: DecisionTable,
    /// Class names indexed by decision code.
    pub classes: Vec<String>,
    pub unlabeled_clusters: Vec<ClusterId>,
}

/// One example per pixel of every labeled cluster, in raster order, with
/// attributes `(h_bin, s_bin, i_bin)` and the cluster's class as decision.
/// Class codes follow first appearance when walking labels by cluster id.
pub fn build_decision_table(
    hsi: &HsiImage,
    map: &ClusterMap,
    labels: &LabelsFile,
    disc: &Discretizer,
) -> Result<TrainingSet, ClassifyError> {
    if let Some((bad, _)) = labels.iter().find(|(id, _)| id.index() >= map.len()) {
        return Err(ClassifyError::UnknownCluster(bad));
    }
    if labels.is_empty() {
        return Err(ClassifyError::NoLabeledClusters);
    }
    let mut classes: Vec<String> = Vec::new();
    let mut class_of_cluster: Vec<Option<u32>> = vec![None; map.len()];
    for (id, name) in labels.iter() {
        let code = match classes.iter().position(|c| c == name) {
            Some(k) => k,
            None => {
                classes.push(name.to_string());
                classes.len() - 1
            }
        };
        class_of_cluster[id.index()] = Some(code as u32);
    }
    if classes.len() < 2 {
        return Err(ClassifyError::SingleClass(classes.swap_remove(0)));
    }

    let mut rows = Vec::new();
    let mut decisions = Vec::new();
    for (p, cluster) in map.assignment().iter().enumerate() {
        let Some(code) = cluster.and_then(|c| class_of_cluster[c.index()]) else {
            continue;
        };
        rows.push(disc.discretize(hsi.pixel(p)).to_vec());
        decisions.push(code);
    }
    let table = DecisionTable::new(ATTRIBUTES.iter().map(|a| a.to_string()).collect(), rows, decisions)?
        .with_decision_name(DECISION)
        .with_decision_labels(classes.iter().cloned().enumerate().map(|(k, n)| (k as u32, n)));
    let unlabeled_clusters = map
        .clusters()
        .iter()
        .map(|c| c.id)
        .filter(|id| labels.get(*id).is_none())
        .collect();
    Ok(TrainingSet {
        table,
        classes,
        unlabeled_clusters,
    })
}

/// A self-contained rule base: rules plus the vocabulary needed to apply them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RuleSet {
    pub attributes: Vec<String>,
    pub classes: Vec<String>,
    pub discretizer: Discretizer,
    pub rules: Vec<Rule>,
}

impl RuleSet {
    pub fn induce(training: &TrainingSet, disc: Discretizer) -> Result<Self, ClassifyError> {
        let rules = induce_rules(&training.table)?;
        Ok(RuleSet {
            attributes: training.table.attributes().to_vec(),
            classes: training.classes.clone(),
            discretizer: disc,
            rules,
        })
    }

    pub fn count(&self, certainty: Certainty) -> usize {
        self.rules.iter().filter(|r| r.certainty == certainty).count()
    }

    /// Checks every rule against the attribute and class vocabulary.
    pub fn validate(&self) -> Result<(), ClassifyError> {
        if self.rules.is_empty() {
            return Err(ClassifyError::EmptyRules);
        }
        for rule in &self.rules {
            if let Some(c) = rule.conditions.iter().find(|c| c.attribute >= self.attributes.len()) {
                return Err(ClassifyError::RuleAttribute {
                    attribute: c.attribute,
                    available: self.attributes.len(),
                });
            }
            if rule.decision as usize >= self.classes.len() {
                return Err(ClassifyError::RuleClass(rule.decision));
            }
        }
        Ok(())
    }

    /// `IF h_bin=3 AND s_bin=7 THEN class=water`.
    pub fn describe(&self, rule: &Rule) -> String {
        let mut out = String::from("IF ");
        for (k, c) in rule.conditions.iter().enumerate() {
            if k > 0 {
                out.push_str(" AND ");
            }
            out.push_str(&alloc::format!("{}={}", self.attributes[c.attribute], c.value));
        }
        out.push_str(&alloc::format!(" THEN {}={}", DECISION, self.classes[rule.decision as usize]));
        out
    }
}

/// Class of a discretized attribute vector, or `None` if no rule applies.
///
/// Fully matching rules win over partial ones. Among full matches, certain
/// rules beat possible ones, then the class with the largest summed strength
/// wins. Without a full match, each rule votes `strength × matched / total`.
/// Remaining ties go to the class that appears first in rule order.
pub fn classify_values(values: &[u32], rules: &[Rule]) -> Result<Option<u32>, ClassifyError> {
    if rules.is_empty() {
        return Err(ClassifyError::EmptyRules);
    }
    if let Some(c) = rules
        .iter()
        .flat_map(|r| &r.conditions)
        .find(|c| c.attribute >= values.len())
    {
        return Err(ClassifyError::RuleAttribute {
            attribute: c.attribute,
            available: values.len(),
        });
    }

    let full: Vec<&Rule> = rules.iter().filter(|r| r.matches(values)).collect();
    if !full.is_empty() {
        let any_certain = full.iter().any(|r| r.certainty == Certainty::Certain);
        let votes = full
            .into_iter()
            .filter(|r| !any_certain || r.certainty == Certainty::Certain)
            .map(|r| (r.decision, r.strength as f64));
        return Ok(tally(votes));
    }

    let votes = rules.iter().filter_map(|r| {
        let matched = r.matched_conditions(values);
        (matched > 0).then(|| {
            (
                r.decision,
                r.strength as f64 * matched as f64 / r.conditions.len() as f64,
            )
        })
    });
    Ok(tally(votes))
}

/// Highest summed weight per class; first-seen class on ties; `None` when
/// every weight is zero.
fn tally(votes: impl Iterator<Item = (u32, f64)>) -> Option<u32> {
    let mut order: Vec<u32> = Vec::new();
    let mut weight: BTreeMap<u32, f64> = BTreeMap::new();
    for (class, w) in votes {
        if !weight.contains_key(&class) {
            order.push(class);
        }
        *weight.entry(class).or_insert(0.0) += w;
    }
    let mut best: Option<(u32, f64)> = None;
    for class in order {
        let w = weight[&class];
        if w > best.map_or(0.0, |(_, bw)| bw) {
            best = Some((class, w));
        }
    }
    best.map(|(c, _)| c)
}

pub fn classify_pixel(
    p: HsiPixel,
    rules: &[Rule],
    disc: &Discretizer,
) -> Result<Option<u32>, ClassifyError> {
    classify_values(&disc.discretize(p), rules)
}

/// Distinct, non-black display colors, stable by index.
pub fn distinct_colors(n: usize) -> Vec<Rgb> {
    const BASE: [Rgb; 12] = [
        Rgb::new(0, 0, 255),
        Rgb::new(0, 160, 0),
        Rgb::new(220, 30, 30),
        Rgb::new(240, 200, 0),
        Rgb::new(0, 200, 220),
        Rgb::new(200, 0, 200),
        Rgb::new(140, 90, 40),
        Rgb::new(255, 140, 0),
        Rgb::new(128, 128, 128),
        Rgb::new(120, 200, 120),
        Rgb::new(255, 255, 255),
        Rgb::new(90, 60, 160),
    ];
    let mut seen: BTreeSet<Rgb> = BTreeSet::new();
    let mut out = Vec::with_capacity(n);
    let mut k: u32 = 0;
    while out.len() < n {
        let color = match BASE.get(k as usize) {
            Some(&c) => c,
            None => {
                // odd multiplier makes the index mix a bijection on 24 bits
                let mixed = k.wrapping_mul(0x9E_37_79).wrapping_add(0x5A_5A_5A) & 0xFF_FF_FF;
                Rgb::new((mixed >> 16) as u8, (mixed >> 8) as u8, mixed as u8)
            }
        };
        k += 1;
        if color != Rgb::BLACK && seen.insert(color) {
            out.push(color);
        }
    }
    out
}

/// Palette with one entry per class name, ids equal to class codes.
pub fn class_palette(classes: &[String]) -> Palette {
    let mut palette = Palette::new();
    for (k, (name, color)) in classes.iter().zip(distinct_colors(classes.len())).enumerate() {
        palette
            .insert(LabelId(k as u32), name.clone(), color)
            .expect("class ids are never the reserved id");
    }
    palette
}

/// Classifies every pixel; pixels no rule reaches get [`LabelId::UNCLASSIFIED`].
pub fn classify_image(image: &ImageRaster, rules: &RuleSet) -> Result<LabelRaster, ClassifyError> {
    rules.validate()?;
    let disc = rules.discretizer;
    let mut cache: BTreeMap<[u32; 3], LabelId> = BTreeMap::new();
    let mut labels = Vec::with_capacity(image.len());
    for &px in image.pixels() {
        let values = disc.discretize(crate::colorspace::rgb_to_hsi(px));
        let id = match cache.get(&values) {
            Some(&id) => id,
            None => {
                let id = classify_values(&values, &rules.rules)?
                    .map_or(LabelId::UNCLASSIFIED, LabelId);
                cache.insert(values, id);
                id
            }
        };
        labels.push(id);
    }
    Ok(LabelRaster::new(
        image.width(),
        image.height(),
        labels,
        class_palette(&rules.classes),
    )?)
}

/// Fraction of pixels whose label names agree. Unclassified only matches
/// unclassified.
pub fn accuracy(predicted: &LabelRaster, truth: &LabelRaster) -> Result<f64, ClassifyError> {
    let dims = |r: &LabelRaster| (r.width(), r.height());
    if dims(predicted) != dims(truth) {
        return Err(ClassifyError::DimensionMismatch {
            left: dims(predicted),
            right: dims(truth),
        });
    }
    let name = |r: &LabelRaster, id: LabelId| -> Option<String> {
        r.palette().get(id).map(|e| e.name.clone())
    };
    let mut names: BTreeMap<(bool, LabelId), Option<String>> = BTreeMap::new();
    let mut hits = 0usize;
    for (&p, &t) in predicted.labels().iter().zip(truth.labels()) {
        let same = match (p.is_unclassified(), t.is_unclassified()) {
            (true, true) => true,
            (false, false) => {
                let pn = names.entry((true, p)).or_insert_with(|| name(predicted, p)).clone();
                let tn = names.entry((false, t)).or_insert_with(|| name(truth, t));
                pn.is_some() && pn == *tn
            }
            _ => false,
        };
        hits += usize::from(same);
    }
    Ok(hits as f64 / predicted.labels().len() as f64)
}

/// Agreement counted only over pixels the truth raster labels.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Agreement {
    pub labeled: usize,
    pub correct: usize,
}

impl Agreement {
    /// `correct / labeled`, or `None` when the truth labels nothing.
    pub fn ratio(&self) -> Option<f64> {
        (self.labeled > 0).then(|| self.correct as f64 / self.labeled as f64)
    }
}

/// Like [`accuracy`], but pixels whose truth label is unclassified are skipped.
pub fn labeled_agreement(predicted: &LabelRaster, truth: &LabelRaster) -> Result<Agreement, ClassifyError> {
    let dims = |r: &LabelRaster| (r.width(), r.height());
    if dims(predicted) != dims(truth) {
        return Err(ClassifyError::DimensionMismatch {
            left: dims(predicted),
            right: dims(truth),
        });
    }
    let mut agreement = Agreement { labeled: 0, correct: 0 };
    for (&p, &t) in predicted.labels().iter().zip(truth.labels()) {
        let Some(tn) = truth.palette().get(t) else {
            continue;
        };
        agreement.labeled += 1;
        if predicted.palette().get(p).is_some_and(|pn| pn.name == tn.name) {
            agreement.correct += 1;
        }
    }
    Ok(agreement)
}

/// Majority label of one cluster in a classified raster.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ObjectLabel {
    pub cluster: ClusterId,
    pub label: LabelId,
    pub votes: usize,
    pub pixels: usize,
}

/// The most frequent label inside each cluster (lowest id on ties, so
/// unclassified only wins outright).
pub fn cluster_majority(
    map: &ClusterMap,
    labels: &LabelRaster,
) -> Result<Vec<ObjectLabel>, ClassifyError> {
    if (map.width(), map.height()) != (labels.width(), labels.height()) {
        return Err(ClassifyError::DimensionMismatch {
            left: (map.width(), map.height()),
            right: (labels.width(), labels.height()),
        });
    }
    let mut counts: Vec<BTreeMap<LabelId, usize>> = vec![BTreeMap::new(); map.len()];
    for (cluster, &label) in map.assignment().iter().zip(labels.labels()) {
        if let Some(c) = cluster {
            *counts[c.index()].entry(label).or_insert(0) += 1;
        }
    }
    Ok(counts
        .into_iter()
        .enumerate()
        .map(|(k, votes)| {
            let pixels = votes.values().sum();
            let (label, n) = votes
                .into_iter()
                .fold((LabelId::UNCLASSIFIED, 0), |best, (l, n)| if n > best.1 { (l, n) } else { best });
            ObjectLabel {
                cluster: ClusterId(k as u32),
                label,
                votes: n,
                pixels,
            }
        })
        .collect())
}
