use ndarray::{Array2, ArrayView1, ArrayView2, Axis};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

pub const DEFAULT_MAX_ITER: usize = 300;
pub const DEFAULT_RESTARTS: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct KMeansOptions {
    pub k: usize,
    pub seed: u64,
    pub restarts: usize,
    pub max_iter: usize,
    /// Z-score each column before clustering.
    pub standardize: bool,
}

impl KMeansOptions {
    pub fn new(k: usize, seed: u64) -> Self {
        KMeansOptions {
            k,
            seed,
            restarts: DEFAULT_RESTARTS,
            max_iter: DEFAULT_MAX_ITER,
            standardize: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClusterAssignment {
    /// Cluster id per row, numbered by first appearance in row order.
    pub labels: Vec<usize>,
    /// One row per cluster, in the (possibly standardized) feature space.
    pub centroids: Array2<f64>,
    pub wcss: f64,
    pub k: usize,
    pub seed: u64,
    pub restarts_used: usize,
    pub iterations: usize,
    pub converged: bool,
}

impl ClusterAssignment {
    pub fn cluster_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.k];
        for &l in &self.labels {
            sizes[l] += 1;
        }
        sizes
    }

    /// Row indices belonging to `cluster`.
    pub fn members(&self, cluster: usize) -> Vec<usize> {
        self.labels
            .iter()
            .enumerate()
            .filter(|(_, &l)| l == cluster)
            .map(|(i, _)| i)
            .collect()
    }
}

pub(crate) fn sq_dist(a: ArrayView1<f64>, b: ArrayView1<f64>) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Sum over rows of the squared distance to the assigned centroid.
pub fn wcss(data: ArrayView2<f64>, labels: &[usize], centroids: ArrayView2<f64>) -> f64 {
    data.rows()
        .into_iter()
        .zip(labels)
        .map(|(row, &l)| sq_dist(row, centroids.row(l)))
        .sum()
}

/// Column z-scores using the population standard deviation; constant columns
/// become zeros.
pub fn standardize(data: ArrayView2<f64>) -> Array2<f64> {
    let mut out = data.to_owned();
    let n = data.nrows() as f64;
    if data.nrows() == 0 {
        return out;
    }
    for mut col in out.axis_iter_mut(Axis(1)) {
        let mean = col.sum() / n;
        let var = col.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / n;
        let sd = var.sqrt();
        if sd > 0.0 && sd.is_finite() {
            col.mapv_inplace(|x| (x - mean) / sd);
        } else {
            col.fill(0.0);
        }
    }
    out
}

pub(crate) fn validate(data: ArrayView2<f64>, k: usize) -> Result<()> {
    if k == 0 {
        return Err(Error::invalid("k must be at least 1"));
    }
    if k > data.nrows() {
        return Err(Error::invalid(format!(
            "k = {k} exceeds the number of rows ({})",
            data.nrows()
        )));
    }
    if data.iter().any(|x| !x.is_finite()) {
        return Err(Error::invalid("feature matrix contains non-finite values"));
    }
    Ok(())
}

fn nearest(row: ArrayView1<f64>, centroids: ArrayView2<f64>) -> (usize, f64) {
    let mut best = (0, f64::INFINITY);
    for (c, centroid) in centroids.rows().into_iter().enumerate() {
        let d = sq_dist(row, centroid);
        if d < best.1 {
            best = (c, d);
        }
    }
    best
}

fn kmeans_pp(data: ArrayView2<f64>, k: usize, rng: &mut ChaCha8Rng) -> Array2<f64> {
    let n = data.nrows();
    let mut centroids = Array2::zeros((k, data.ncols()));
    let first = rng.random_range(0..n);
    centroids.row_mut(0).assign(&data.row(first));
    let mut dist: Vec<f64> = data.rows().into_iter().map(|r| sq_dist(r, data.row(first))).collect();
    for c in 1..k {
        let total: f64 = dist.iter().sum();
        let pick = if total > 0.0 {
            let target = rng.random::<f64>() * total;
            let mut acc = 0.0;
            let mut chosen = n - 1;
            for (i, d) in dist.iter().enumerate() {
                acc += d;
                if acc > target && *d > 0.0 {
                    chosen = i;
                    break;
                }
            }
            chosen
        } else {
            rng.random_range(0..n)
        };
        centroids.row_mut(c).assign(&data.row(pick));
        for (i, row) in data.rows().into_iter().enumerate() {
            dist[i] = dist[i].min(sq_dist(row, data.row(pick)));
        }
    }
    centroids
}

fn assign(data: ArrayView2<f64>, centroids: ArrayView2<f64>) -> Vec<usize> {
    data.rows().into_iter().map(|r| nearest(r, centroids).0).collect()
}

/// Moves the point farthest from its centroid into each empty cluster, taking
/// donors only from clusters with at least two members.
fn repair_empty(data: ArrayView2<f64>, labels: &mut [usize], centroids: &mut Array2<f64>) {
    let k = centroids.nrows();
    loop {
        let mut sizes = vec![0usize; k];
        for &l in labels.iter() {
            sizes[l] += 1;
        }
        let Some(empty) = sizes.iter().position(|&s| s == 0) else {
            return;
        };
        let mut far: Option<(usize, f64)> = None;
        for (i, row) in data.rows().into_iter().enumerate() {
            if sizes[labels[i]] < 2 {
                continue;
            }
            let d = sq_dist(row, centroids.row(labels[i]));
            if far.is_none_or(|(_, best)| d > best) {
                far = Some((i, d));
            }
        }
        let (i, _) = far.expect("n >= k leaves a cluster with two members");
        labels[i] = empty;
        centroids.row_mut(empty).assign(&data.row(i));
    }
}

fn update_centroids(data: ArrayView2<f64>, labels: &[usize], k: usize) -> Array2<f64> {
    let mut sums = Array2::<f64>::zeros((k, data.ncols()));
    let mut counts = vec![0usize; k];
    for (row, &l) in data.rows().into_iter().zip(labels) {
        let mut s = sums.row_mut(l);
        s += &row;
        counts[l] += 1;
    }
    for (mut s, &c) in sums.rows_mut().into_iter().zip(&counts) {
        if c > 0 {
            s /= c as f64;
        }
    }
    sums
}

pub(crate) struct LloydRun {
    pub labels: Vec<usize>,
    pub centroids: Array2<f64>,
    pub wcss: f64,
    pub iterations: usize,
    pub converged: bool,
    /// Objective after each centroid update.
    #[cfg_attr(not(test), allow(dead_code))]
    pub history: Vec<f64>,
}

pub(crate) fn lloyd(data: ArrayView2<f64>, init: Array2<f64>, max_iter: usize) -> LloydRun {
    let k = init.nrows();
    let mut centroids = init;
    let mut labels = assign(data, centroids.view());
    let mut history = Vec::new();
    let mut iterations = 0;
    let mut converged = false;
    while iterations < max_iter.max(1) {
        iterations += 1;
        repair_empty(data, &mut labels, &mut centroids);
        centroids = update_centroids(data, &labels, k);
        history.push(wcss(data, &labels, centroids.view()));
        let next = assign(data, centroids.view());
        if next == labels {
            converged = true;
            break;
        }
        labels = next;
    }
    if !converged {
        repair_empty(data, &mut labels, &mut centroids);
        centroids = update_centroids(data, &labels, k);
    }
    let total = wcss(data, &labels, centroids.view());
    LloydRun {
        labels,
        centroids,
        wcss: total,
        iterations,
        converged,
        history,
    }
}

pub(crate) fn restart_rng(seed: u64, restart: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(restart as u64);
    rng
}

/// Renumbers clusters by first appearance in row order.
pub(crate) fn canonical(run: LloydRun, k: usize, seed: u64, restarts_used: usize) -> ClusterAssignment {
    let mut map = vec![usize::MAX; k];
    let mut next = 0;
    for &l in &run.labels {
        if map[l] == usize::MAX {
            map[l] = next;
            next += 1;
        }
    }
    for m in map.iter_mut().filter(|m| **m == usize::MAX) {
        *m = next;
        next += 1;
    }
    let labels = run.labels.iter().map(|&l| map[l]).collect();
    let mut centroids = Array2::zeros(run.centroids.raw_dim());
    for (old, &new) in map.iter().enumerate() {
        centroids.row_mut(new).assign(&run.centroids.row(old));
    }
    ClusterAssignment {
        labels,
        centroids,
        wcss: run.wcss,
        k,
        seed,
        restarts_used,
        iterations: run.iterations,
        converged: run.converged,
    }
}

/// Best of `restarts` Lloyd runs from k-means++ seeds, all drawn from
/// restart-indexed streams of one seeded generator.
pub(crate) fn best_of_restarts(data: ArrayView2<f64>, opts: &KMeansOptions) -> LloydRun {
    let mut best: Option<LloydRun> = None;
    for r in 0..opts.restarts {
        let mut rng = restart_rng(opts.seed, r);
        let init = kmeans_pp(data, opts.k, &mut rng);
        let run = lloyd(data, init, opts.max_iter);
        // strict `<` keeps the lowest restart index on ties
        if best.as_ref().is_none_or(|b| run.wcss < b.wcss) {
            best = Some(run);
        }
    }
    best.expect("restarts >= 1")
}

pub fn kmeans(data: ArrayView2<f64>, opts: &KMeansOptions) -> Result<ClusterAssignment> {
    validate(data, opts.k)?;
    if opts.restarts == 0 {
        return Err(Error::invalid("restarts must be at least 1"));
    }
    let transformed;
    let data = if opts.standardize {
        transformed = standardize(data);
        transformed.view()
    } else {
        data
    };
    let run = best_of_restarts(data, opts);
    Ok(canonical(run, opts.k, opts.seed, opts.restarts))
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    #[test]
    fn two_blobs() {
        let data = array![[0.0, 0.0], [10.0, 10.0], [0.0, 1.0], [10.0, 11.0]];
        let a = kmeans(data.view(), &KMeansOptions::new(2, 7)).unwrap();
        assert_eq!(a.labels, [0, 1, 0, 1]);
        assert!((a.wcss - 1.0).abs() < 1e-12);
        assert_eq!(a.centroids.row(0).to_vec(), [0.0, 0.5]);
    }

    #[test]
    fn single_cluster_is_the_mean() {
        let data = array![[1.0, 2.0], [3.0, 2.0], [5.0, 8.0]];
        let a = kmeans(data.view(), &KMeansOptions::new(1, 0)).unwrap();
        assert_eq!(a.labels, [0, 0, 0]);
        assert_eq!(a.centroids.row(0).to_vec(), [3.0, 4.0]);
        // 4+0+4 + 4+4+16
        assert!((a.wcss - 32.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_input() {
        let data = array![[1.0], [2.0]];
        assert!(kmeans(data.view(), &KMeansOptions::new(3, 0)).is_err());
        assert!(kmeans(data.view(), &KMeansOptions::new(0, 0)).is_err());
        let nan = array![[1.0], [f64::NAN]];
        assert!(kmeans(nan.view(), &KMeansOptions::new(1, 0)).is_err());
        let mut o = KMeansOptions::new(1, 0);
        o.restarts = 0;
        assert!(kmeans(data.view(), &o).is_err());
    }

    #[test]
    fn duplicate_points_still_fill_every_cluster() {
        let data = array![[1.0, 1.0], [1.0, 1.0], [1.0, 1.0], [2.0, 2.0]];
        let a = kmeans(data.view(), &KMeansOptions::new(3, 11)).unwrap();
        assert!(a.cluster_sizes().iter().all(|&s| s > 0));
        assert!(a.wcss.abs() < 1e-12);
    }

    #[test]
    fn reported_wcss_matches_recomputation() {
        let data = Array2::from_shape_fn((30, 3), |(i, j)| ((i * 7 + j * 13) % 11) as f64);
        for k in 1..=5 {
            let a = kmeans(data.view(), &KMeansOptions::new(k, 3)).unwrap();
            let again = wcss(data.view(), &a.labels, a.centroids.view());
            assert!((a.wcss - again).abs() <= 1e-9 * again.max(1.0));
            assert!(a.cluster_sizes().iter().all(|&s| s > 0));
        }
    }

    #[test]
    fn objective_never_increases_across_iterations() {
        let data = Array2::from_shape_fn((40, 2), |(i, j)| (((i * 31 + j * 17) % 23) as f64).sqrt());
        for r in 0..5 {
            let mut rng = restart_rng(9, r);
            let init = kmeans_pp(data.view(), 4, &mut rng);
            let run = lloyd(data.view(), init, 300);
            for w in run.history.windows(2) {
                assert!(w[1] <= w[0] + 1e-9);
            }
        }
    }

    #[test]
    fn deterministic_for_seed() {
        let data = Array2::from_shape_fn((25, 2), |(i, j)| ((i * 5 + j) % 9) as f64);
        let o = KMeansOptions::new(3, 42);
        let a = kmeans(data.view(), &o).unwrap();
        let b = kmeans(data.view(), &o).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn standardized_columns() {
        let data = array![[1.0, 5.0, 2.0], [2.0, 5.0, 4.0], [3.0, 5.0, 9.0], [6.0, 5.0, 1.0]];
        let z = standardize(data.view());
        for col in z.axis_iter(Axis(1)) {
            let mean = col.sum() / 4.0;
            assert!(mean.abs() < 1e-12);
        }
        for j in [0, 2] {
            let var = z.column(j).iter().map(|x| x * x).sum::<f64>() / 4.0;
            assert!((var - 1.0).abs() < 1e-12);
        }
        assert!(z.column(1).iter().all(|&x| x == 0.0));
    }
}
