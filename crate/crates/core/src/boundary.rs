//! Pixel-level smoothing of cluster borders after the rough phase.
//!
//! Only pixels inside border cells (cells with a 4-neighbour cell in another
//! cluster) are revisited. Each one may move to a cluster owning one of its
//! cell's neighbours when that raises the β homogeneity index, with seed
//! distance deciding between equally good candidates.
//!
//! β is the ratio of the total sum of squares to the pooled within-cluster
//! sum of squares over HSI feature vectors. Hue enters as a point on a circle
//! of circumference 1, `(cos h, sin h) / 2π`, so the arithmetic mean of the
//! embedded vectors is the circular mean of unit hue vectors and sums of
//! squares stay well defined across the 0/360 seam.

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use fixedbitset::FixedBitSet;

use crate::colorspace::{hsi_manhattan, similarity_flag, HsiImage, HsiPixel};
use crate::grid::{ClusterId, ClusterMap, Grid};

type Feature = [f64; 4];

/// Deltas within this much of each other count as β ties.
const BETA_TIE: f64 = 1e-12;

fn feature(p: HsiPixel) -> Feature {
    let rad = p.h * PI / 180.0;
    let scale = 1.0 / (2.0 * PI);
    [
        scale * libm::cos(rad),
        scale * libm::sin(rad),
        p.s,
        p.i,
    ]
}

fn sq_dist(a: &Feature, b: &Feature) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct BorderSet {
    pub border_cells: Vec<(usize, usize)>,
    /// Raster indices, ascending.
    pub border_pixels: Vec<usize>,
}

impl BorderSet {
    pub fn is_empty(&self) -> bool {
        self.border_cells.is_empty()
    }
}

/// Cells that have at least one 4-neighbour cell in a different cluster,
/// together with all of their pixels. Cluster membership is read from the
/// grid cells.
pub fn find_border_cells(grid: &Grid) -> BorderSet {
    let cells = grid.cells();
    let mut border = BorderSet::default();
    for (index, cell) in cells.iter().enumerate() {
        let differs = grid
            .neighbors4(index)
            .any(|nb| cells[nb].cluster_id != cell.cluster_id);
        if differs {
            border.border_cells.push((cell.row, cell.col));
            border.border_pixels.extend_from_slice(&cell.pixel_indices);
        }
    }
    border.border_pixels.sort_unstable();
    border
}

/// Result of [`beta_measure`]. `value` is `f64::INFINITY` when every cluster is
/// perfectly homogeneous, which orders above every finite score.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BetaScore {
    pub value: f64,
    pub total_ss: f64,
    pub within_ss: f64,
}

impl BetaScore {
    pub fn is_infinite(&self) -> bool {
        self.value.is_infinite()
    }
}

/// β index of a total assignment over an HSI image.
pub fn beta_of_assignment(hsi: &HsiImage, assignment: &[ClusterId]) -> BetaScore {
    assert_eq!(hsi.len(), assignment.len(), "assignment must cover the image");
    let features: Vec<Feature> = hsi.pixels().iter().map(|&p| feature(p)).collect();
    let k = assignment.iter().map(|c| c.index() + 1).max().unwrap_or(0);

    // Means are accumulated as offsets from a member of the group, so a group
    // of identical pixels has a mean equal to them and a sum of squares of 0.
    let mut pivots: Vec<Option<Feature>> = vec![None; k];
    let mut offsets = vec![[0.0; 4]; k];
    let mut counts = vec![0usize; k];
    let global_pivot = features.first().copied().unwrap_or([0.0; 4]);
    let mut global_offset = [0.0; 4];
    for (f, c) in features.iter().zip(assignment) {
        let pivot = *pivots[c.index()].get_or_insert(*f);
        counts[c.index()] += 1;
        for d in 0..4 {
            global_offset[d] += f[d] - global_pivot[d];
            offsets[c.index()][d] += f[d] - pivot[d];
        }
    }
    let n = features.len() as f64;
    let global_mean: Feature = core::array::from_fn(|d| global_pivot[d] + global_offset[d] / n);
    let means: Vec<Feature> = (0..k)
        .map(|c| match pivots[c] {
            Some(pivot) => core::array::from_fn(|d| pivot[d] + offsets[c][d] / counts[c] as f64),
            None => [0.0; 4],
        })
        .collect();

    let mut total_ss = 0.0;
    let mut within_ss = 0.0;
    for (f, c) in features.iter().zip(assignment) {
        total_ss += sq_dist(f, &global_mean);
        within_ss += sq_dist(f, &means[c.index()]);
    }
    let value = if within_ss > 0.0 {
        total_ss / within_ss
    } else {
        f64::INFINITY
    };
    BetaScore {
        value,
        total_ss,
        within_ss,
    }
}

/// β index of a cluster map. Panics if the map is not total.
pub fn beta_measure(hsi: &HsiImage, map: &ClusterMap) -> BetaScore {
    let assignment = map
        .total_assignment()
        .expect("beta_measure needs every pixel assigned");
    beta_of_assignment(hsi, &assignment)
}

/// Running sums for one cluster, enough to price moving a pixel in or out.
#[derive(Debug, Clone, Copy, Default)]
struct ClusterSums {
    count: usize,
    sum: Feature,
}

impl ClusterSums {
    fn mean(&self) -> Feature {
        let n = self.count as f64;
        self.sum.map(|v| v / n)
    }

    fn add(&mut self, f: &Feature) {
        self.count += 1;
        for d in 0..4 {
            self.sum[d] += f[d];
        }
    }

    fn remove(&mut self, f: &Feature) {
        self.count -= 1;
        for d in 0..4 {
            self.sum[d] -= f[d];
        }
    }
}

/// Change of the within-cluster sum of squares when `f` moves from `from` to `to`.
fn move_delta(f: &Feature, from: &ClusterSums, to: &ClusterSums) -> f64 {
    let leave = if from.count <= 1 {
        0.0
    } else {
        let n = from.count as f64;
        n / (n - 1.0) * sq_dist(f, &from.mean())
    };
    let join = if to.count == 0 {
        0.0
    } else {
        let n = to.count as f64;
        n / (n + 1.0) * sq_dist(f, &to.mean())
    };
    join - leave
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct RefineStats {
    /// Border cells visited (Q).
    pub border_cells: usize,
    /// Pixels in those cells (R).
    pub border_pixels: usize,
    /// Pixels that changed cluster.
    pub reassigned: usize,
    /// Pixels settled by the neighbour shortcut without a β comparison.
    pub shortcut_hits: usize,
    /// Clusters emptied and removed; surviving ids were renumbered densely.
    pub dropped_clusters: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Refinement {
    pub map: ClusterMap,
    /// The input grid with each cell relabelled to the majority cluster of its
    /// pixels in the refined map.
    pub grid: Grid,
    pub stats: RefineStats,
}

/// Reassigns border pixels to improve β.
///
/// Border pixels are visited cluster by cluster (in id order of the cell that
/// holds them), ascending raster index within a cluster, and updates apply
/// immediately. For pixel `x` currently in cluster `c`:
///
/// 1. Candidates are `c` plus the clusters of the 4-neighbour cells of `x`'s cell.
/// 2. If an already-visited 4-neighbour pixel sits in a candidate cluster whose
///    seed is strictly nearer to `x` than every other candidate's seed, `x`
///    joins that cluster without comparing β, provided the move does not lower β.
/// 3. Otherwise `x` goes to the candidate with the highest β (staying put is a
///    candidate); equal β is resolved by smaller seed distance, then by staying,
///    then by lower id.
///
/// Non-border pixels never change. Clusters left empty are dropped.
pub fn refine_boundaries(hsi: &HsiImage, map: &ClusterMap, grid: &Grid) -> Refinement {
    let border = find_border_cells(grid);
    let mut out = map.clone();
    let mut stats = RefineStats {
        border_cells: border.border_cells.len(),
        border_pixels: border.border_pixels.len(),
        ..RefineStats::default()
    };
    if border.is_empty() {
        return Refinement {
            map: out,
            grid: grid.clone(),
            stats,
        };
    }

    let assignment: Vec<ClusterId> = map
        .total_assignment()
        .expect("refinement needs a completed rough phase");
    let features: Vec<Feature> = hsi.pixels().iter().map(|&p| feature(p)).collect();
    let mut sums = vec![ClusterSums::default(); map.len()];
    for (f, c) in features.iter().zip(&assignment) {
        sums[c.index()].add(f);
    }
    let mut current = assignment;
    let seeds: Vec<HsiPixel> = map.clusters().iter().map(|c| c.seed_pixel).collect();

    let cell_cluster = |cell: usize| {
        grid.cells()[cell]
            .cluster_id
            .expect("rough phase leaves every cell clustered")
    };
    let mut order = border.border_pixels.clone();
    order.sort_by_key(|&p| (cell_cluster(grid.cell_of(p)), p));

    let mut is_border = FixedBitSet::with_capacity(hsi.len());
    for &p in &border.border_pixels {
        is_border.insert(p);
    }
    let mut visited = FixedBitSet::with_capacity(hsi.len());
    let (width, height) = (hsi.width(), hsi.height());

    for &p in &order {
        let px = hsi.pixel(p);
        let f = &features[p];
        let cur = current[p];
        let cell = grid.cell_of(p);
        let candidates: BTreeSet<ClusterId> = core::iter::once(cur)
            .chain(grid.neighbors4(cell).map(cell_cluster))
            .collect();
        let seed_dist = |c: ClusterId| hsi_manhattan(px, seeds[c.index()]);

        let (x, y) = (p % width, p / width);
        let neighbours = [
            (y > 0).then(|| p - width),
            (x > 0).then(|| p - 1),
            (x + 1 < width).then(|| p + 1),
            (y + 1 < height).then(|| p + width),
        ];
        let nearest_neighbour_cluster = neighbours
            .into_iter()
            .flatten()
            .filter(|&q| is_border.contains(q) && visited.contains(q))
            .map(|q| current[q])
            .filter(|c| candidates.contains(c))
            .min_by(|&a, &b| seed_dist(a).total_cmp(&seed_dist(b)).then(a.cmp(&b)));

        let mut decided = None;
        if let Some(cn) = nearest_neighbour_cluster {
            let dn = seed_dist(cn);
            let strictly_nearest = candidates
                .iter()
                .filter(|&&c| c != cn)
                .all(|&c| dn < seed_dist(c));
            if strictly_nearest {
                if cn == cur {
                    decided = Some(cur);
                } else if move_delta(f, &sums[cur.index()], &sums[cn.index()]) <= BETA_TIE {
                    decided = Some(cn);
                }
            }
        }
        let target = match decided {
            Some(c) => {
                stats.shortcut_hits += 1;
                c
            }
            None => {
                let mut best = (cur, 0.0, seed_dist(cur));
                for &c in candidates.iter().filter(|&&c| c != cur) {
                    let delta = move_delta(f, &sums[cur.index()], &sums[c.index()]);
                    if delta > BETA_TIE {
                        continue;
                    }
                    let dist = seed_dist(c);
                    let better = if delta < best.1 - BETA_TIE {
                        true
                    } else if delta <= best.1 + BETA_TIE {
                        dist < best.2
                    } else {
                        false
                    };
                    if better {
                        best = (c, delta, dist);
                    }
                }
                best.0
            }
        };

        if target != cur {
            sums[cur.index()].remove(f);
            sums[target.index()].add(f);
            current[p] = target;
            out.set_assignment(p, target);
            stats.reassigned += 1;
        }
        visited.insert(p);
    }

    stats.dropped_clusters = out.compact();
    let grid = relabel_cells(grid, &out);
    Refinement {
        map: out,
        grid,
        stats,
    }
}

/// Folds each cluster into the earliest cluster whose seed pixel lies within
/// `theta_band` of its own seed, then renumbers densely. Returns the merged
/// map and the number of clusters absorbed.
///
/// Mixed cells that miss the γ threshold of their color's pass are picked up
/// by later passes seeded on the same color; this step reunites them.
pub fn merge_similar_seeds(map: &ClusterMap, theta_band: f64) -> (ClusterMap, usize) {
    let clusters = map.clusters();
    let mut target: Vec<ClusterId> = Vec::with_capacity(clusters.len());
    for (k, c) in clusters.iter().enumerate() {
        let into = (0..k)
            .filter(|&j| target[j].index() == j)
            .find(|&j| similarity_flag(c.seed_pixel, clusters[j].seed_pixel, theta_band))
            .map_or(c.id, |j| ClusterId(j as u32));
        target.push(into);
    }
    let mut out = map.clone();
    for (p, a) in map.assignment().iter().enumerate() {
        if let Some(c) = a {
            out.set_assignment(p, target[c.index()]);
        }
    }
    for (k, &t) in target.iter().enumerate() {
        if t.index() != k {
            let cells = core::mem::take(&mut out.clusters_mut()[k].member_cells);
            let into = &mut out.clusters_mut()[t.index()].member_cells;
            into.extend(cells);
            into.sort_unstable();
        }
    }
    let absorbed = out.compact();
    (out, absorbed)
}

/// Copy of `grid` with each cell's cluster set to the majority cluster of its
/// pixels in `map` (lowest id on ties).
pub fn relabel_cells(grid: &Grid, map: &ClusterMap) -> Grid {
    let mut grid = grid.clone();
    let mut counts = vec![0usize; map.len()];
    for cell in grid.cells_mut() {
        counts.iter_mut().for_each(|c| *c = 0);
        for &p in &cell.pixel_indices {
            if let Some(c) = map.cluster_of(p) {
                counts[c.index()] += 1;
            }
        }
        let mut best: Option<(usize, usize)> = None;
        for (id, &n) in counts.iter().enumerate() {
            if n > 0 && best.is_none_or(|(_, m)| n > m) {
                best = Some((id, n));
            }
        }
        cell.cluster_id = best.map(|(id, _)| ClusterId(id as u32));
    }
    grid
}
