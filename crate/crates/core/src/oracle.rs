//! Brute-force realization of `Ш` on a truncated Haar system.
//!
//! A leaf indicator `1_c` is expanded as `|c|·Σ h_J(c) h_J` over the
//! ancestors `c ⊊ J ⊆ top`, and `Ш` is applied atom by atom with `h_J` and
//! `Шh_J` evaluated pointwise from their definitions in double precision.
//! Nothing here uses the exact engine's sign bookkeeping. The only error is
//! the dropped `1_top` direction: on the zero-anchored window it contributes
//! exactly `|c|/|top|` to every entry.

use rayon::prelude::*;

use crate::dyadic::{pair_apex, DyadicInterval};
use crate::error::{Error, Result};
use crate::haar::LeafVector;
use crate::haar::DyadicFunction;
use crate::shift::{restricted_indicator_shift, restricted_shift};
use crate::svd::singular_values;

/// Largest matrix dimension accepted unless the caller raises the cap.
pub const DEFAULT_MAX_DIM: usize = 4096;
/// Largest ancestor height accepted.
pub const MAX_HEIGHT: u32 = 40;
/// Ancestor height used by the singular-value probes.
pub const SVD_HEIGHT: u32 = 40;
/// Singular values above this count toward the numerical rank.
pub const RANK_TOLERANCE: f64 = 1e-9;

/// `h_J(x)` from the definition `|J|^{−1/2}(1_{J_+} − 1_{J_−})`.
pub fn haar_at(j: &DyadicInterval, x: f64) -> f64 {
    let left = j.left_f64();
    let size = j.size_f64();
    let mid = left + size / 2.0;
    if x < left || x >= left + size {
        0.0
    } else if x < mid {
        -1.0 / size.sqrt()
    } else {
        1.0 / size.sqrt()
    }
}

/// `Шh_J(x) = (h_{J_+}(x) − h_{J_−}(x))/√2`.
pub fn shift_haar_at(j: &DyadicInterval, x: f64) -> f64 {
    let (jm, jp) = j.children();
    (haar_at(&jp, x) - haar_at(&jm, x)) / std::f64::consts::SQRT_2
}

/// Finite section: columns are the leaves of `domain` at `depth`, rows are
/// intervals of `row_scale` tiling `range`, and the mean part of each leaf
/// is expanded through the ancestors up to `top`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TruncatedSystem {
    pub domain: DyadicInterval,
    pub depth: u32,
    pub range: DyadicInterval,
    pub row_scale: i32,
    pub top: DyadicInterval,
    /// Levels between the zero-anchored anchor and `top`.
    pub height: u32,
}

impl TruncatedSystem {
    /// `1_W Ш` on the leaves of a zero-anchored window, rows one level finer.
    pub fn window(window: DyadicInterval, depth: u32, height: u32) -> Self {
        Self {
            domain: window,
            depth,
            range: window,
            row_scale: window.scale() - depth as i32 - 1,
            top: window.ancestor(height),
            height,
        }
    }

    /// `1_K Ш` on functions supported in `I`, with the truncation anchored at
    /// the smallest zero-anchored interval holding both.
    pub fn restricted(i: DyadicInterval, k: DyadicInterval, depth: u32, height: u32) -> Self {
        let anchor = pair_apex(&i, &k).unwrap_or_else(|| i.apex());
        let finest = i.scale() - depth as i32 - 1;
        Self {
            domain: i,
            depth,
            range: k,
            row_scale: finest.min(k.scale()),
            top: anchor.ancestor(height),
            height,
        }
    }

    pub fn cols(&self) -> usize {
        1usize << self.depth
    }

    pub fn rows(&self) -> usize {
        1usize << (self.range.scale() - self.row_scale)
    }

}

/// Dense row-major matrix with the intervals indexing its rows and columns.
#[derive(Debug, Clone)]
pub struct DenseOperator {
    pub system: TruncatedSystem,
    pub rows: Vec<DyadicInterval>,
    pub cols: Vec<DyadicInterval>,
    data: Vec<f64>,
}

impl DenseOperator {
    pub fn get(&self, r: usize, c: usize) -> f64 {
        self.data[r * self.cols.len() + c]
    }

    /// Row values of `Σ_c v_c·(column c)`.
    pub fn apply(&self, v: &[f64]) -> Vec<f64> {
        let n = self.cols.len();
        self.data
            .chunks_exact(n)
            .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// Matrix in orthonormal coordinates: entries scaled by `√(|row|/|col|)`.
    pub fn orthonormal(&self) -> Vec<f64> {
        let scale = 2f64.powf((self.system.row_scale - self.system.domain.scale() + self.system.depth as i32) as f64 / 2.0);
        self.data.iter().map(|x| x * scale).collect()
    }

    /// `‖1_range Ш 1_c‖ / ‖1_c‖` for column `c`.
    pub fn column_norm(&self, c: usize) -> f64 {
        let b = self.orthonormal();
        let n = self.cols.len();
        (0..self.rows.len()).map(|r| b[r * n + c] * b[r * n + c]).sum::<f64>().sqrt()
    }
}

fn check_size(rows: usize, cols: usize, cap: usize) -> Result<()> {
    if rows > 2 * cap || cols > cap {
        return Err(Error::TooLarge { rows, cols, cap });
    }
    Ok(())
}

/// Builds the dense truncated operator described by `system`.
pub fn build(system: TruncatedSystem, cap: usize) -> Result<DenseOperator> {
    if system.depth > 24 || system.range.scale() - system.row_scale > 25 {
        return Err(Error::TooLarge { rows: usize::MAX, cols: usize::MAX, cap });
    }
    let (nr, nc) = (system.rows(), system.cols());
    check_size(nr, nc, cap)?;
    if system.height > MAX_HEIGHT {
        return Err(Error::Precondition(format!(
            "ancestor height {} exceeds {MAX_HEIGHT}",
            system.height
        )));
    }
    let rows: Vec<DyadicInterval> = (0..nr)
        .map(|r| DyadicInterval::leaf(&system.range, (system.range.scale() - system.row_scale) as u32, r))
        .collect();
    let cols: Vec<DyadicInterval> = (0..nc).map(|c| DyadicInterval::leaf(&system.domain, system.depth, c)).collect();
    let points: Vec<f64> = rows.iter().map(|x| x.left_f64() + x.size_f64() / 2.0).collect();

    // column-major construction, one column per task
    let columns: Vec<Vec<f64>> = cols
        .par_iter()
        .map(|leaf| {
            let mass = leaf.size_f64();
            let centre = leaf.left_f64() + mass / 2.0;
            let ancestors = leaf.ancestors_up_to(&system.top);
            points
                .iter()
                .map(|&x| {
                    ancestors
                        .iter()
                        .map(|j| mass * haar_at(j, centre) * shift_haar_at(j, x))
                        .sum()
                })
                .collect()
        })
        .collect();
    let mut data = vec![0.0; nr * nc];
    for (c, col) in columns.iter().enumerate() {
        for (r, v) in col.iter().enumerate() {
            data[r * nc + c] = *v;
        }
    }
    Ok(DenseOperator { system, rows, cols, data })
}

/// Matrix of `f ↦ 1_W Ш f` on the leaves of `W` at depth `D`, with `A`
/// ancestor levels above `W`. Rows are the leaves of depth `D + 1`.
pub fn build_matrix(window: DyadicInterval, depth: u32, height: u32, cap: usize) -> Result<DenseOperator> {
    build(TruncatedSystem::window(window, depth, height), cap)
}

/// `‖1_K Ш f‖` from the dense truncated matrix.
pub fn oracle_restricted_norm(
    i: &DyadicInterval,
    k: &DyadicInterval,
    height: u32,
    f: &LeafVector<f64>,
) -> Result<f64> {
    if f.root() != *i {
        return Err(Error::IncompatibleRoots(f.root(), *i));
    }
    let system = TruncatedSystem::restricted(*i, *k, f.depth(), height);
    let m = build(system, DEFAULT_MAX_DIM)?;
    let out = m.apply(f.values());
    let row_size = 2f64.powi(system.row_scale);
    Ok((out.iter().map(|v| v * v).sum::<f64>() * row_size).sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Constraint {
    None,
    ZeroMean,
}

impl Constraint {
    pub fn name(self) -> &'static str {
        match self {
            Constraint::None => "none",
            Constraint::ZeroMean => "zero-mean",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SvdReport {
    pub sigma_min: f64,
    pub sigma_max: f64,
    pub rank_numeric: usize,
    pub singular_values: Vec<f64>,
}

/// Singular values of `1_K Ш` on functions supported in `I` at depth `D`,
/// optionally restricted to zero-mean functions.
pub fn smallest_singular(
    i: &DyadicInterval,
    k: &DyadicInterval,
    depth: u32,
    constraint: Constraint,
    cap: usize,
) -> Result<SvdReport> {
    let system = TruncatedSystem::restricted(*i, *k, depth, SVD_HEIGHT);
    let m = build(system, cap)?;
    let b = m.orthonormal();
    let (nr, nc) = (m.rows.len(), m.cols.len());
    let (data, cols) = match constraint {
        Constraint::None => (b, nc),
        Constraint::ZeroMean => {
            // orthonormal Haar vectors in leaf coordinates: h_J·√|leaf|
            let basis = zero_mean_basis(i, depth);
            let nb = basis.len();
            let mut out = vec![0.0; nr * nb];
            for r in 0..nr {
                for (q, vec) in basis.iter().enumerate() {
                    out[r * nb + q] = (0..nc).map(|c| b[r * nc + c] * vec[c]).sum();
                }
            }
            (out, nb)
        }
    };
    if cols == 0 {
        return Err(Error::Precondition("the constrained domain is empty at depth 0".into()));
    }
    let sv = singular_values(&data, nr, cols);
    Ok(SvdReport {
        sigma_min: *sv.last().expect("at least one column"),
        sigma_max: sv[0],
        rank_numeric: sv.iter().filter(|s| **s > RANK_TOLERANCE).count(),
        singular_values: sv,
    })
}

fn zero_mean_basis(i: &DyadicInterval, depth: u32) -> Vec<Vec<f64>> {
    let n = 1usize << depth;
    let leaf_size = 2f64.powi(i.scale() - depth as i32);
    let mut out = Vec::with_capacity(n.saturating_sub(1));
    for d in 0..depth {
        for j in 0..1usize << d {
            let atom = DyadicInterval::leaf(i, d, j);
            out.push(
                (0..n)
                    .map(|c| {
                        let leaf = DyadicInterval::leaf(i, depth, c);
                        haar_at(&atom, leaf.left_f64() + leaf_size / 2.0) * leaf_size.sqrt()
                    })
                    .collect(),
            );
        }
    }
    out
}

/// One line of a convergence table.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceRow {
    pub height: u32,
    pub max_deviation: f64,
    /// `(dev(A)/dev(A_prev))^{1/(A − A_prev)}`, the per-level decay.
    pub ratio_per_step: Option<f64>,
}

/// Maximum deviation between the oracle and the exact engine over the leaf
/// basis of `I` at `depth`, observed on `K`, for each ancestor height.
pub fn convergence_study(
    i: &DyadicInterval,
    k: &DyadicInterval,
    depth: u32,
    heights: &[u32],
) -> Result<Vec<ConvergenceRow>> {
    let leaves: Vec<DyadicInterval> = (0..1usize << depth).map(|c| DyadicInterval::leaf(i, depth, c)).collect();
    let forms: Vec<_> = leaves.iter().map(|c| restricted_indicator_shift(c, k).to_float()).collect();
    let mut out: Vec<ConvergenceRow> = Vec::new();
    for &height in heights {
        let m = build(TruncatedSystem::restricted(*i, *k, depth, height), DEFAULT_MAX_DIM)?;
        let mut worst: f64 = 0.0;
        for (c, form) in forms.iter().enumerate() {
            for (r, x) in m.rows.iter().enumerate() {
                worst = worst.max((m.get(r, c) - form.value_on(x)).abs());
            }
        }
        let ratio_per_step = out.last().map(|prev| {
            let steps = height as f64 - prev.height as f64;
            (worst / prev.max_deviation).powf(1.0 / steps)
        });
        out.push(ConvergenceRow {
            height,
            max_deviation: worst,
            ratio_per_step,
        });
    }
    Ok(out)
}

/// Parameters of an engine/oracle agreement sweep on one window.
#[derive(Debug, Clone)]
pub struct SweepConfig {
    /// Zero-anchored window, `[0, 2^m)` or `[−2^m, 0)`.
    pub window: DyadicInterval,
    pub depth: u32,
    /// Ancestor heights, ascending and consecutive steps compared.
    pub heights: Vec<u32>,
    /// Smallest scale of the indicator atoms `1_y` fed to both sides.
    pub atom_min_scale: i32,
    /// Smallest scale of the observation intervals `K`.
    pub k_min_scale: i32,
}

/// Outcome of [`agreement_sweep`].
#[derive(Debug, Clone, PartialEq)]
pub struct AgreementReport {
    pub pairs_checked: usize,
    /// Largest `deviation / 2^{4−A}` over all pairs and heights; agreement
    /// holds when this is at most 1.
    pub worst_bound_fraction: f64,
    pub min_ratio: f64,
    pub max_ratio: f64,
    /// Largest deviation seen for the zero-mean atoms `h_y`.
    pub zero_mean_max_deviation: f64,
    /// First pair `(y, K, A, deviation)` that breaks the bound, if any.
    pub violation: Option<(DyadicInterval, DyadicInterval, u32, f64)>,
}

impl AgreementReport {
    pub fn agrees(&self) -> bool {
        self.violation.is_none() && self.min_ratio >= 0.4 && self.max_ratio <= 0.6 && self.zero_mean_max_deviation <= 1e-9
    }
}

fn intervals_in(window: &DyadicInterval, min_scale: i32) -> Vec<DyadicInterval> {
    let mut out = Vec::new();
    for scale in (min_scale..=window.scale()).rev() {
        let d = (window.scale() - scale) as u32;
        for j in 0..1usize << d {
            out.push(DyadicInterval::leaf(window, d, j));
        }
    }
    out
}

/// Compares the exact engine with the dense oracle for every indicator atom
/// `1_y` and Haar atom `h_y` (`y` in the window, scale ≥ `atom_min_scale`)
/// against every observation interval `K` (scale ≥ `k_min_scale`), at each
/// ancestor height.
pub fn agreement_sweep(config: &SweepConfig, cap: usize) -> Result<AgreementReport> {
    let w = config.window;
    if !w.is_zero_anchored() {
        return Err(Error::Precondition(format!("window {w} is not zero-anchored")));
    }
    let mats: Vec<DenseOperator> = config
        .heights
        .iter()
        .map(|&a| build_matrix(w, config.depth, a, cap))
        .collect::<Result<_>>()?;
    let leaf_scale = w.scale() - config.depth as i32;
    if config.atom_min_scale < leaf_scale || config.k_min_scale < leaf_scale - 1 {
        return Err(Error::Precondition("atoms and observation intervals must be unions of leaves".into()));
    }
    let atoms = intervals_in(&w, config.atom_min_scale);
    let ks = intervals_in(&w, config.k_min_scale);
    let nr = mats[0].rows.len();
    let row_depth = config.depth + 1;

    let mut report = AgreementReport {
        pairs_checked: 0,
        worst_bound_fraction: 0.0,
        min_ratio: f64::INFINITY,
        max_ratio: f64::NEG_INFINITY,
        zero_mean_max_deviation: 0.0,
        violation: None,
    };
    // oracle images of 1_y, per height, summed from the leaf columns
    let column_sum = |m: &DenseOperator, y: &DyadicInterval| -> Vec<f64> {
        let d = (y.scale() - leaf_scale) as u32;
        let first = (y.index() - (w.index() << (w.scale() - y.scale()))) as usize * (1usize << d);
        let width = 1usize << d;
        let nc = m.cols.len();
        (0..nr)
            .map(|r| m.data[r * nc + first..r * nc + first + width].iter().sum())
            .collect()
    };
    for y in &atoms {
        let images: Vec<Vec<f64>> = mats.iter().map(|m| column_sum(m, y)).collect();
        let haar_images: Option<Vec<Vec<f64>>> = (y.scale() > leaf_scale).then(|| {
            let (ym, yp) = y.children();
            let amp = 1.0 / y.size_f64().sqrt();
            mats.iter()
                .map(|m| {
                    let (a, b) = (column_sum(m, &ym), column_sum(m, &yp));
                    a.iter().zip(&b).map(|(lo, hi)| amp * (hi - lo)).collect()
                })
                .collect()
        });
        let haar_fn = (y.scale() > leaf_scale).then(|| DyadicFunction::haar(*y));
        for k in &ks {
            let form = restricted_indicator_shift(y, k).to_float();
            let haar_form = haar_fn.as_ref().map(|h| restricted_shift(h, k).0.to_float());
            let row_scale = w.scale() - row_depth as i32;
            let count = 1usize << (k.scale() - row_scale);
            let first_row = (k.index() - (w.index() << (w.scale() - k.scale()))) as usize * count;
            let mut prev: Option<f64> = None;
            for (hi, &a) in config.heights.iter().enumerate() {
                let mut dev: f64 = 0.0;
                for r in first_row..first_row + count {
                    let x = &mats[hi].rows[r];
                    dev = dev.max((images[hi][r] - form.value_on(x)).abs());
                    if let (Some(hf), Some(himg)) = (&haar_form, &haar_images) {
                        let zd = (himg[hi][r] - hf.value_on(x)).abs();
                        report.zero_mean_max_deviation = report.zero_mean_max_deviation.max(zd);
                    }
                }
                let fraction = dev / 2f64.powi(4 - a as i32);
                report.worst_bound_fraction = report.worst_bound_fraction.max(fraction);
                if fraction > 1.0 && report.violation.is_none() {
                    report.violation = Some((*y, *k, a, dev));
                }
                if let Some(p) = prev {
                    let steps = (a - config.heights[hi - 1]) as f64;
                    let ratio = (dev / p).powf(1.0 / steps);
                    report.min_ratio = report.min_ratio.min(ratio);
                    report.max_ratio = report.max_ratio.max(ratio);
                }
                prev = Some(dev);
            }
            report.pairs_checked += 1;
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn di(k: i32, l: i64) -> DyadicInterval {
        DyadicInterval::new(k, l)
    }

    #[test]
    fn pointwise_atoms() {
        let j = di(1, 0);
        assert_eq!(haar_at(&j, 0.5), -1.0 / 2f64.sqrt());
        assert_eq!(haar_at(&j, 1.5), 1.0 / 2f64.sqrt());
        assert_eq!(haar_at(&j, 2.0), 0.0);
        // Шh_{[0,2)} = (h_{[1,2)} − h_{[0,1)})/√2: +1/√2 on [0,1/2)
        assert!((shift_haar_at(&j, 0.25) - 1.0 / 2f64.sqrt()).abs() < 1e-15);
        assert!((shift_haar_at(&j, 1.25) + 1.0 / 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn two_leaf_window_matches_engine() {
        let w = di(1, 0);
        let m = build_matrix(w, 1, 30, DEFAULT_MAX_DIM).unwrap();
        let form = restricted_indicator_shift(&di(0, 0), &w).to_float();
        for (r, x) in m.rows.iter().enumerate() {
            assert!((m.get(r, 0) - form.value_on(x)).abs() <= 2f64.powi(-29));
        }
    }

    #[test]
    fn column_norms_approach_one() {
        let w = di(2, 0);
        let mut prev_gap = f64::INFINITY;
        for a in [4, 8, 16, 24] {
            let m = build_matrix(w, 3, a, DEFAULT_MAX_DIM).unwrap();
            let mut gap: f64 = 0.0;
            for c in 0..m.cols.len() {
                let n = m.column_norm(c);
                assert!(n <= 1.0 + 2f64.powi(-(a as i32)));
                gap = gap.max(1.0 - n);
            }
            assert!(gap <= prev_gap);
            prev_gap = gap;
        }
    }

    #[test]
    fn restricted_norm_examples() {
        let i = di(0, 0);
        let one = LeafVector::new(i, 0, vec![1.0]).unwrap();
        let gap = oracle_restricted_norm(&i, &di(0, 3), 24, &one).unwrap();
        assert!((gap - 0.25).abs() < 1e-6);
        let cov = oracle_restricted_norm(&i, &di(1, 0), 24, &one).unwrap();
        assert!((cov - 0.75f64.sqrt()).abs() < 1e-6);
        let h = DyadicFunction::haar(i).to_f64().synthesize();
        for k in [di(0, 1), di(1, 1), di(0, 5)] {
            assert!(oracle_restricted_norm(&i, &k, 24, &h).unwrap() < 1e-12);
        }
    }

    #[test]
    fn convergence_halves_per_level() {
        let rows = convergence_study(&di(0, 0), &di(0, 3), 2, &[8, 12, 16, 20]).unwrap();
        for row in &rows[1..] {
            let r = row.ratio_per_step.unwrap();
            assert!((0.4..=0.6).contains(&r), "{row:?}");
        }
        // the self pair still has the dropped-mean error
        let rows = convergence_study(&di(0, 1), &di(0, 1), 2, &[4, 5, 6]).unwrap();
        assert!(rows.iter().all(|r| r.max_deviation > 0.0));
    }

    #[test]
    fn svd_examples() {
        let cov = smallest_singular(&di(0, 0), &di(2, 0), 4, Constraint::None, DEFAULT_MAX_DIM).unwrap();
        assert!(cov.sigma_min >= 0.5 - 1e-9);
        assert!((cov.sigma_min - (7.0f64 / 8.0).sqrt()).abs() < 1e-9);
        let int = smallest_singular(&di(2, 0), &di(0, 0), 2, Constraint::None, DEFAULT_MAX_DIM).unwrap();
        assert!(int.sigma_min <= 1e-9);
        let gap = smallest_singular(&di(0, 0), &di(1, 1), 4, Constraint::None, DEFAULT_MAX_DIM).unwrap();
        assert_eq!(gap.rank_numeric, 1);
        assert!(gap.singular_values[1] <= 1e-9);
        let gap0 = smallest_singular(&di(0, 0), &di(1, 1), 4, Constraint::ZeroMean, DEFAULT_MAX_DIM).unwrap();
        assert!(gap0.sigma_max <= 1e-9);
    }

    #[test]
    fn svd_agrees_with_reference_decomposition() {
        let m = build(TruncatedSystem::restricted(di(1, 0), di(2, 0), 3, 30), DEFAULT_MAX_DIM).unwrap();
        let b = m.orthonormal();
        let (nr, nc) = (m.rows.len(), m.cols.len());
        let ours = singular_values(&b, nr, nc);
        let reference = nalgebra::DMatrix::from_row_slice(nr, nc, &b).singular_values();
        let mut theirs: Vec<f64> = reference.iter().copied().collect();
        theirs.sort_by(|x, y| y.total_cmp(x));
        for (a, r) in ours.iter().zip(&theirs) {
            assert!((a - r).abs() < 1e-10);
        }
    }

    #[test]
    fn smallest_singular_does_not_grow_under_refinement() {
        for (i, k) in [(di(0, 0), di(2, 0)), (di(2, 0), di(1, 1)), (di(1, 1), di(0, 0))] {
            let mut prev = f64::INFINITY;
            for d in 1..6 {
                let s = smallest_singular(&i, &k, d, Constraint::None, DEFAULT_MAX_DIM).unwrap().sigma_min;
                assert!(s <= prev + 1e-10);
                prev = s;
            }
        }
    }

    #[test]
    fn near_isometry_on_full_window() {
        // Gram matrix of 1_W Ш on leaves of W: identity minus the mean
        // direction's share of mass escaping W, plus O(2^{−A})
        let w = di(2, 0);
        let a = 30;
        let m = build_matrix(w, 3, a, DEFAULT_MAX_DIM).unwrap();
        let b = m.orthonormal();
        let (nr, nc) = (m.rows.len(), m.cols.len());
        let mut gram = vec![0.0; nc * nc];
        for p in 0..nc {
            for q in 0..nc {
                gram[p * nc + q] = (0..nr).map(|r| b[r * nc + p] * b[r * nc + q]).sum();
            }
        }
        // the defect I − G is rank one: the constant vector is its only
        // non-null direction up to truncation
        let defect: Vec<f64> = (0..nc * nc)
            .map(|x| if x / nc == x % nc { 1.0 } else { 0.0 } - gram[x])
            .collect();
        let sv = singular_values(&defect, nc, nc);
        assert!(sv[1] < 2f64.powi(-(a as i32) + 4), "{sv:?}");
        let exact = num_traits::ToPrimitive::to_f64(&crate::shift::indicator_constant(&w, &w)).unwrap();
        assert!((sv[0] - (1.0 - exact)).abs() < 1e-8, "{sv:?} {exact}");
    }

    #[test]
    fn small_sweep_agrees() {
        for w in [di(2, 0), di(2, -1)] {
            let report = agreement_sweep(
                &SweepConfig {
                    window: w,
                    depth: 4,
                    heights: vec![20, 21, 22],
                    atom_min_scale: -2,
                    k_min_scale: 0,
                },
                DEFAULT_MAX_DIM,
            )
            .unwrap();
            assert!(report.agrees(), "{report:?}");
        }
    }

    #[test]
    fn exact_engine_value_matches_form() {
        let form = restricted_indicator_shift(&di(0, 0), &di(2, 0));
        for j in 0..8 {
            let x = DyadicInterval::leaf(&di(2, 0), 3, j);
            let exact = form.value_on(&x).unwrap().to_f64();
            assert!((exact - form.to_float().value_on(&x)).abs() < 1e-15);
        }
    }
}
