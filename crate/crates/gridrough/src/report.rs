//! Plain-text reports. Nothing here depends on the clock, so the files are
//! byte-identical across runs; wall times only go to the console.

use std::fmt::Write as _;

use gridrough_core::{
    Agreement, Certainty, ClusterMap, ClusteringParams, Gamma, LabelRaster, ObjectLabel, PerfStats,
    Rgb, RuleSet, TrainingSet,
};

use crate::pipeline::RefineSummary;

pub fn gamma_text(g: Gamma) -> String {
    match g {
        Gamma::Auto => "auto".into(),
        Gamma::Fixed(v) => format!("{v}"),
    }
}

pub fn cluster_report(
    width: usize,
    height: usize,
    params: &ClusteringParams,
    refine: bool,
    map: &ClusterMap,
    colors: &[Rgb],
) -> String {
    let mut out = String::new();
    writeln!(out, "image {width}x{height}").unwrap();
    writeln!(out, "grid_n {}", params.grid_n).unwrap();
    writeln!(out, "theta_band {}", params.theta_band).unwrap();
    writeln!(out, "gamma {}", gamma_text(params.gamma)).unwrap();
    writeln!(out, "theta_fraction {}", params.theta_fraction).unwrap();
    writeln!(out, "refine {}", if refine { "on" } else { "off" }).unwrap();
    writeln!(out, "clusters {}", map.len()).unwrap();
    writeln!(out).unwrap();
    writeln!(out, "id pass pixels seed_hue seed_x seed_y color").unwrap();
    for (c, color) in map.clusters().iter().zip(colors) {
        writeln!(
            out,
            "{} {} {} {:.3} {} {} {}",
            c.id,
            c.pass,
            c.member_pixel_count,
            c.seed_pixel.h,
            c.seed_pixel_index % width,
            c.seed_pixel_index / width,
            color
        )
        .unwrap();
    }
    if !map.pass_log().is_empty() {
        writeln!(out).unwrap();
        writeln!(out, "pass seed_x seed_y seed_hue seed_cell ratio threshold cells").unwrap();
        for p in map.pass_log() {
            writeln!(
                out,
                "{} {} {} {:.3} {},{} {:.4} {:.4} {}",
                p.pass,
                p.seed_pixel_index % width,
                p.seed_pixel_index / width,
                p.seed_pixel.h,
                p.seed_cell / params.grid_n,
                p.seed_cell % params.grid_n,
                p.seed_cell_ratio,
                p.threshold,
                p.claimed.len()
            )
            .unwrap();
        }
    }
    out
}

pub fn perf_report(stats: &PerfStats, refine: Option<&RefineSummary>) -> String {
    let mut out = String::new();
    writeln!(out, "n_cells {}", stats.n_cells).unwrap();
    writeln!(out, "k_seeds {}", stats.k_seeds).unwrap();
    writeln!(out, "q_border_cells {}", stats.q_border_cells).unwrap();
    writeln!(out, "r_border_pixels {}", stats.r_border_pixels).unwrap();
    if let Some(r) = refine {
        writeln!(out, "reassigned_pixels {}", r.stats.reassigned).unwrap();
        writeln!(out, "shortcut_hits {}", r.stats.shortcut_hits).unwrap();
        writeln!(out, "dropped_clusters {}", r.stats.dropped_clusters).unwrap();
        writeln!(out, "merged_clusters {}", r.merged_clusters).unwrap();
    }
    out
}

pub fn timing_lines(stats: &PerfStats) -> String {
    stats
        .wall_times
        .iter()
        .map(|t| format!("time {} {:.3} ms\n", t.phase, t.duration.as_secs_f64() * 1e3))
        .collect()
}

pub fn induce_report(training: &TrainingSet, rules: &RuleSet) -> String {
    let mut out = String::new();
    writeln!(out, "examples {}", training.table.n_rows()).unwrap();
    writeln!(out, "bins {}", rules.discretizer.bins()).unwrap();
    writeln!(out, "classes {}", training.classes.join(" ")).unwrap();
    let consistent = training.table.is_consistent();
    writeln!(out, "consistency {}", if consistent { "consistent" } else { "inconsistent" }).unwrap();
    writeln!(out, "certain_rules {}", rules.count(Certainty::Certain)).unwrap();
    writeln!(out, "possible_rules {}", rules.count(Certainty::Possible)).unwrap();
    let unlabeled: Vec<String> = training.unlabeled_clusters.iter().map(|c| c.to_string()).collect();
    writeln!(out, "unlabeled_clusters {}", unlabeled.join(" ")).unwrap();
    out
}

pub fn coverage_report(labels: &LabelRaster) -> String {
    let total = labels.labels().len();
    let mut out = String::new();
    writeln!(out, "pixels {total}").unwrap();
    for (id, e) in labels.palette().iter() {
        let n = labels.labels().iter().filter(|&&l| l == id).count();
        writeln!(out, "class {} {} {:.6}", e.name, n, n as f64 / total as f64).unwrap();
    }
    let unclassified = labels.labels().iter().filter(|l| l.is_unclassified()).count();
    writeln!(out, "unclassified {} {:.6}", unclassified, unclassified as f64 / total as f64).unwrap();
    out
}

pub fn objects_report(objects: &[ObjectLabel], labels: &LabelRaster) -> String {
    let mut out = String::from("cluster pixels label votes\n");
    for o in objects {
        let name = labels
            .palette()
            .get(o.label)
            .map_or_else(|| "unclassified".to_string(), |e| e.name.clone());
        writeln!(out, "{} {} {} {}", o.cluster, o.pixels, name, o.votes).unwrap();
    }
    out
}

pub fn accuracy_report(a: &Agreement) -> String {
    match a.ratio() {
        Some(r) => format!("labeled_pixels {}\ncorrect {}\naccuracy {:.6}\n", a.labeled, a.correct, r),
        None => "labeled_pixels 0\ncorrect 0\naccuracy none\n".to_string(),
    }
}
