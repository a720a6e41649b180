//! Rough clustering over an `n × n` grid of cells.
//!
//! Each pass picks the unclustered pixel with the highest hue as the seed,
//! scores every unclustered cell by the fraction of its pixels within
//! `theta_band` of that seed (the population-object ratio), opens a cluster at
//! the best-scoring cell and, in the same sweep, claims every other unclustered
//! cell whose ratio reaches the pass threshold. Passes repeat until every cell
//! belongs to a cluster. Claimed cells join whole; pixel-level disagreements
//! are left to [`crate::boundary`].

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::time::Duration;

use thiserror::Error;

use crate::colorspace::{similarity_flag, HsiImage, HsiPixel};
use crate::raster::ImageRaster;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ClusterId(pub u32);

impl ClusterId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for ClusterId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ClusterError {
    #[error("grid_n = {grid_n} must lie in 1..={max} for a {width}x{height} image")]
    GridOutOfRange {
        grid_n: usize,
        width: usize,
        height: usize,
        max: usize,
    },
    #[error("theta_band must be a non-negative finite distance, got {0}")]
    InvalidTheta(f64),
    #[error("gamma must lie in [0, 1], got {0}")]
    InvalidGamma(f64),
    #[error("theta_fraction must be a non-negative finite multiplier, got {0}")]
    InvalidThetaFraction(f64),
    #[error("every pixel is already clustered")]
    NoUnclusteredPixels,
    #[error("every grid cell is already clustered")]
    NoUnclusteredCells,
    #[error("assignment has {actual} entries for a raster of {expected} pixels")]
    AssignmentLength { expected: usize, actual: usize },
}

/// Cell-claiming threshold for a pass.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Gamma {
    /// `theta_fraction × ratio(seed cell)`, recomputed each pass and clamped to `[0, 1]`.
    Auto,
    Fixed(f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClusteringParams {
    /// Maximum HSI Manhattan distance for a pixel to count as similar to the seed.
    pub theta_band: f64,
    pub gamma: Gamma,
    /// Multiplier applied to the seed cell's ratio in [`Gamma::Auto`] mode.
    pub theta_fraction: f64,
    /// Cells per image side.
    pub grid_n: usize,
}

impl Default for ClusteringParams {
    fn default() -> Self {
        ClusteringParams {
            theta_band: 0.1,
            gamma: Gamma::Auto,
            theta_fraction: 0.9,
            grid_n: 32,
        }
    }
}

impl ClusteringParams {
    pub fn validate(&self, width: usize, height: usize) -> Result<(), ClusterError> {
        if !(self.theta_band.is_finite() && self.theta_band >= 0.0) {
            return Err(ClusterError::InvalidTheta(self.theta_band));
        }
        if let Gamma::Fixed(g) = self.gamma {
            if !(0.0..=1.0).contains(&g) {
                return Err(ClusterError::InvalidGamma(g));
            }
        }
        if !(self.theta_fraction.is_finite() && self.theta_fraction >= 0.0) {
            return Err(ClusterError::InvalidThetaFraction(self.theta_fraction));
        }
        check_grid_n(width, height, self.grid_n)
    }

    /// Threshold used in a pass whose seed cell scored `seed_ratio`.
    pub fn effective_gamma(&self, seed_ratio: f64) -> f64 {
        match self.gamma {
            Gamma::Fixed(g) => g,
            Gamma::Auto => (self.theta_fraction * seed_ratio).clamp(0.0, 1.0),
        }
    }
}

fn check_grid_n(width: usize, height: usize, grid_n: usize) -> Result<(), ClusterError> {
    let max = width.min(height);
    if grid_n == 0 || grid_n > max {
        return Err(ClusterError::GridOutOfRange {
            grid_n,
            width,
            height,
            max,
        });
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridCell {
    pub row: usize,
    pub col: usize,
    pub pixel_indices: Vec<usize>,
    pub density: usize,
    pub population_count: usize,
    pub population_object_ratio: f64,
    pub cluster_id: Option<ClusterId>,
}

/// The `n × n` partition of a raster, cells stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    n: usize,
    width: usize,
    height: usize,
    cells: Vec<GridCell>,
    cell_of_pixel: Vec<usize>,
}

impl Grid {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn cells(&self) -> &[GridCell] {
        &self.cells
    }

    pub fn cells_mut(&mut self) -> &mut [GridCell] {
        &mut self.cells
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn index(&self, row: usize, col: usize) -> usize {
        row * self.n + col
    }

    pub fn cell(&self, row: usize, col: usize) -> &GridCell {
        &self.cells[self.index(row, col)]
    }

    /// Index of the cell containing raster pixel `pixel`.
    pub fn cell_of(&self, pixel: usize) -> usize {
        self.cell_of_pixel[pixel]
    }

    /// 4-neighbours of a cell, in up/left/right/down order.
    pub fn neighbors4(&self, cell: usize) -> impl Iterator<Item = usize> + '_ {
        let (row, col) = (cell / self.n, cell % self.n);
        let n = self.n;
        [
            (row > 0).then(|| cell - n),
            (col > 0).then(|| cell - 1),
            (col + 1 < n).then(|| cell + 1),
            (row + 1 < n).then(|| cell + n),
        ]
        .into_iter()
        .flatten()
    }

    pub fn unclustered_count(&self) -> usize {
        self.cells.iter().filter(|c| c.cluster_id.is_none()).count()
    }
}

/// Partitions a `width × height` raster into `grid_n × grid_n` cells.
///
/// Cell `(r, c)` spans rows `⌊r·H/n⌋..⌊(r+1)·H/n⌋` and the analogous columns,
/// so cell sizes differ by at most one row or column.
pub fn build_grid(width: usize, height: usize, grid_n: usize) -> Result<Grid, ClusterError> {
    check_grid_n(width, height, grid_n)?;
    let span = |k: usize, extent: usize| (k * extent / grid_n, (k + 1) * extent / grid_n);

    let mut cells = Vec::with_capacity(grid_n * grid_n);
    let mut cell_of_pixel = vec![0; width * height];
    for row in 0..grid_n {
        let (y0, y1) = span(row, height);
        for col in 0..grid_n {
            let (x0, x1) = span(col, width);
            let index = cells.len();
            let mut pixel_indices = Vec::with_capacity((y1 - y0) * (x1 - x0));
            for y in y0..y1 {
                for x in x0..x1 {
                    let p = y * width + x;
                    pixel_indices.push(p);
                    cell_of_pixel[p] = index;
                }
            }
            cells.push(GridCell {
                row,
                col,
                density: pixel_indices.len(),
                pixel_indices,
                population_count: 0,
                population_object_ratio: 0.0,
                cluster_id: None,
            });
        }
    }
    Ok(Grid {
        n: grid_n,
        width,
        height,
        cells,
        cell_of_pixel,
    })
}

/// The unclustered pixel with the highest hue; ties go to the lowest raster index.
pub fn select_seed_pixel(
    hsi: &HsiImage,
    assignment: &[Option<ClusterId>],
) -> Result<usize, ClusterError> {
    if assignment.len() != hsi.len() {
        return Err(ClusterError::AssignmentLength {
            expected: hsi.len(),
            actual: assignment.len(),
        });
    }
    let mut best: Option<(usize, f64)> = None;
    for (index, (p, a)) in hsi.pixels().iter().zip(assignment).enumerate() {
        if a.is_some() {
            continue;
        }
        match best {
            Some((_, h)) if p.h <= h => {}
            _ => best = Some((index, p.h)),
        }
    }
    best.map(|(index, _)| index)
        .ok_or(ClusterError::NoUnclusteredPixels)
}

/// Recomputes population counts and ratios of every unclustered cell against `seed`.
pub fn score_cells(grid: &mut Grid, hsi: &HsiImage, seed: HsiPixel, theta_band: f64) {
    let pixels = hsi.pixels();
    for cell in grid.cells.iter_mut().filter(|c| c.cluster_id.is_none()) {
        let count = cell
            .pixel_indices
            .iter()
            .filter(|&&p| similarity_flag(pixels[p], seed, theta_band))
            .count();
        cell.population_count = count;
        cell.population_object_ratio = if cell.density == 0 {
            0.0
        } else {
            count as f64 / cell.density as f64
        };
    }
}

/// The unclustered cell with the highest population-object ratio, first in
/// row-major order on ties.
pub fn select_seed_cell(grid: &Grid) -> Result<usize, ClusterError> {
    let mut best: Option<(usize, f64)> = None;
    for (index, cell) in grid.cells.iter().enumerate() {
        if cell.cluster_id.is_some() {
            continue;
        }
        match best {
            Some((_, r)) if cell.population_object_ratio <= r => {}
            _ => best = Some((index, cell.population_object_ratio)),
        }
    }
    best.map(|(index, _)| index)
        .ok_or(ClusterError::NoUnclusteredCells)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Cluster {
    pub id: ClusterId,
    /// Rough-phase pass that opened the cluster; survives renumbering.
    pub pass: usize,
    pub seed_pixel: HsiPixel,
    pub seed_pixel_index: usize,
    /// `(row, col)` of the cell that opened the cluster.
    pub seed_cell: (usize, usize),
    /// Cells claimed during the rough phase, by grid index.
    pub member_cells: Vec<usize>,
    pub member_pixel_count: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClaimedCell {
    pub cell: usize,
    pub ratio: f64,
}

/// One pass of the rough phase.
#[derive(Debug, Clone, PartialEq)]
pub struct PassRecord {
    pub pass: usize,
    pub seed_pixel_index: usize,
    pub seed_pixel: HsiPixel,
    pub seed_cell: usize,
    pub seed_cell_ratio: f64,
    pub threshold: f64,
    /// Seed cell first, then the swept cells in row-major order.
    pub claimed: Vec<ClaimedCell>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClusterMap {
    width: usize,
    height: usize,
    assignment: Vec<Option<ClusterId>>,
    clusters: Vec<Cluster>,
    pass_log: Vec<PassRecord>,
}

impl ClusterMap {
    /// Rebuilds a map from a stored total assignment. Ids must be dense from 0.
    /// Seeds are recovered as each cluster's highest-hue pixel (lowest index on
    /// ties); cell membership and the pass log are not recoverable and stay empty.
    pub fn from_assignment(hsi: &HsiImage, assignment: &[ClusterId]) -> Result<Self, ClusterError> {
        if assignment.len() != hsi.len() {
            return Err(ClusterError::AssignmentLength {
                expected: hsi.len(),
                actual: assignment.len(),
            });
        }
        let k = assignment.iter().map(|c| c.index() + 1).max().unwrap_or(0);
        let mut clusters: Vec<Option<Cluster>> = vec![None; k];
        for (p, &id) in assignment.iter().enumerate() {
            let px = hsi.pixel(p);
            let slot = &mut clusters[id.index()];
            match slot {
                Some(c) => {
                    c.member_pixel_count += 1;
                    if px.h > c.seed_pixel.h {
                        c.seed_pixel = px;
                        c.seed_pixel_index = p;
                    }
                }
                None => {
                    *slot = Some(Cluster {
                        id,
                        pass: id.index(),
                        seed_pixel: px,
                        seed_pixel_index: p,
                        seed_cell: (0, 0),
                        member_cells: Vec::new(),
                        member_pixel_count: 1,
                    })
                }
            }
        }
        let clusters = clusters
            .into_iter()
            .enumerate()
            .map(|(i, c)| {
                c.unwrap_or(Cluster {
                    id: ClusterId(i as u32),
                    pass: i,
                    seed_pixel: HsiPixel::default(),
                    seed_pixel_index: 0,
                    seed_cell: (0, 0),
                    member_cells: Vec::new(),
                    member_pixel_count: 0,
                })
            })
            .collect();
        Ok(ClusterMap {
            width: hsi.width(),
            height: hsi.height(),
            assignment: assignment.iter().map(|&c| Some(c)).collect(),
            clusters,
            pass_log: Vec::new(),
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn assignment(&self) -> &[Option<ClusterId>] {
        &self.assignment
    }

    pub fn cluster_of(&self, pixel: usize) -> Option<ClusterId> {
        self.assignment[pixel]
    }

    pub fn clusters(&self) -> &[Cluster] {
        &self.clusters
    }

    pub fn cluster(&self, id: ClusterId) -> &Cluster {
        &self.clusters[id.index()]
    }

    pub fn len(&self) -> usize {
        self.clusters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.clusters.is_empty()
    }

    pub fn pass_log(&self) -> &[PassRecord] {
        &self.pass_log
    }

    pub fn is_total(&self) -> bool {
        self.assignment.iter().all(Option::is_some)
    }

    /// The assignment with every pixel resolved; `None` if any pixel is unassigned.
    pub fn total_assignment(&self) -> Option<Vec<ClusterId>> {
        self.assignment.iter().copied().collect()
    }

    pub(crate) fn clusters_mut(&mut self) -> &mut [Cluster] {
        &mut self.clusters
    }

    pub(crate) fn set_assignment(&mut self, pixel: usize, id: ClusterId) {
        self.assignment[pixel] = Some(id);
    }

    /// Recounts member pixels, drops clusters left empty and renumbers the
    /// survivors densely in their existing order. Returns the number dropped.
    pub(crate) fn compact(&mut self) -> usize {
        for c in &mut self.clusters {
            c.member_pixel_count = 0;
        }
        for id in self.assignment.iter().flatten() {
            self.clusters[id.index()].member_pixel_count += 1;
        }
        let mut remap = vec![None; self.clusters.len()];
        let mut next = 0u32;
        for (old, c) in self.clusters.iter().enumerate() {
            if c.member_pixel_count > 0 {
                remap[old] = Some(ClusterId(next));
                next += 1;
            }
        }
        let dropped = self.clusters.len() - next as usize;
        if dropped == 0 {
            return 0;
        }
        self.clusters.retain(|c| c.member_pixel_count > 0);
        for c in &mut self.clusters {
            c.id = remap[c.id.index()].expect("surviving cluster has an id");
        }
        for a in self.assignment.iter_mut().flatten() {
            *a = remap[a.index()].expect("assigned pixels belong to surviving clusters");
        }
        dropped
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PhaseTime {
    pub phase: &'static str,
    pub duration: Duration,
}

/// Counters behind the `O(N × K)` cost of the rough phase.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PerfStats {
    /// Total grid cells (N).
    pub n_cells: usize,
    /// Passes, one per seed pixel (K).
    pub k_seeds: usize,
    /// Border cells visited by boundary refinement (Q).
    pub q_border_cells: usize,
    /// Pixels inside those border cells (R).
    pub r_border_pixels: usize,
    /// Filled in by callers that have a clock.
    pub wall_times: Vec<PhaseTime>,
}

/// Everything the rough phase produces.
#[derive(Debug, Clone, PartialEq)]
pub struct RoughClustering {
    pub hsi: HsiImage,
    pub grid: Grid,
    pub map: ClusterMap,
    pub stats: PerfStats,
}

/// Runs the rough phase on an RGB image.
pub fn rough_cluster(
    image: &ImageRaster,
    params: &ClusteringParams,
) -> Result<RoughClustering, ClusterError> {
    params.validate(image.width(), image.height())?;
    let hsi = HsiImage::from_raster(image);
    let (grid, map, stats) = rough_cluster_hsi(&hsi, params)?;
    Ok(RoughClustering {
        hsi,
        grid,
        map,
        stats,
    })
}

/// Runs the rough phase on an image already converted to HSI.
pub fn rough_cluster_hsi(
    hsi: &HsiImage,
    params: &ClusteringParams,
) -> Result<(Grid, ClusterMap, PerfStats), ClusterError> {
    params.validate(hsi.width(), hsi.height())?;
    let mut grid = build_grid(hsi.width(), hsi.height(), params.grid_n)?;
    let mut assignment: Vec<Option<ClusterId>> = vec![None; hsi.len()];
    let mut clusters = Vec::new();
    let mut pass_log = Vec::new();
    let mut remaining = grid.len();

    while remaining > 0 {
        let pass = pass_log.len();
        let id = ClusterId(pass as u32);
        let seed_pixel_index = select_seed_pixel(hsi, &assignment)?;
        let seed_pixel = hsi.pixel(seed_pixel_index);
        score_cells(&mut grid, hsi, seed_pixel, params.theta_band);
        let seed_cell = select_seed_cell(&grid)?;
        let seed_cell_ratio = grid.cells[seed_cell].population_object_ratio;
        let threshold = params.effective_gamma(seed_cell_ratio);

        let mut claimed = vec![ClaimedCell {
            cell: seed_cell,
            ratio: seed_cell_ratio,
        }];
        grid.cells[seed_cell].cluster_id = Some(id);
        for (index, cell) in grid.cells.iter_mut().enumerate() {
            if cell.cluster_id.is_none() && cell.population_object_ratio >= threshold {
                cell.cluster_id = Some(id);
                claimed.push(ClaimedCell {
                    cell: index,
                    ratio: cell.population_object_ratio,
                });
            }
        }

        let mut member_cells: Vec<usize> = claimed.iter().map(|c| c.cell).collect();
        member_cells.sort_unstable();
        let mut member_pixel_count = 0;
        for &c in &member_cells {
            for &p in &grid.cells[c].pixel_indices {
                assignment[p] = Some(id);
            }
            member_pixel_count += grid.cells[c].density;
        }
        remaining -= claimed.len();

        let seed_cell_ref = &grid.cells[seed_cell];
        clusters.push(Cluster {
            id,
            pass,
            seed_pixel,
            seed_pixel_index,
            seed_cell: (seed_cell_ref.row, seed_cell_ref.col),
            member_cells,
            member_pixel_count,
        });
        pass_log.push(PassRecord {
            pass,
            seed_pixel_index,
            seed_pixel,
            seed_cell,
            seed_cell_ratio,
            threshold,
            claimed,
        });
    }

    let stats = PerfStats {
        n_cells: grid.len(),
        k_seeds: clusters.len(),
        ..PerfStats::default()
    };
    let map = ClusterMap {
        width: hsi.width(),
        height: hsi.height(),
        assignment,
        clusters,
        pass_log,
    };
    Ok((grid, map, stats))
}
