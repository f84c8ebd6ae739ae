use std::io::Write;
use std::ops::RangeInclusive;

use ndarray::{concatenate, ArrayView2, Axis};

use crate::error::{Error, Result};

use super::kmeans::{
    best_of_restarts, canonical, lloyd, sq_dist, standardize, validate, ClusterAssignment, KMeansOptions,
};

/// Relative spread of second differences below which the elbow is flagged.
pub const LOW_CONFIDENCE_SPREAD: f64 = 0.10;

#[derive(Debug, Clone, PartialEq)]
pub struct ElbowCurve {
    /// `(k, best wcss)` for every k in the range, ascending.
    pub points: Vec<(usize, f64)>,
    /// `wcss(k-1) - 2 wcss(k) + wcss(k+1)` for each interior k.
    pub second_differences: Vec<(usize, f64)>,
    pub selected_k: usize,
    /// Set when the second differences are nearly flat (spread below 10% of
    /// the first wcss), i.e. there is no clear elbow.
    pub low_confidence: bool,
    /// Best solution found for each k, aligned with `points`.
    pub solutions: Vec<ClusterAssignment>,
}

impl ElbowCurve {
    pub fn solution(&self, k: usize) -> Option<&ClusterAssignment> {
        self.solutions.iter().find(|s| s.k == k)
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "k,wcss")?;
        for (k, v) in &self.points {
            writeln!(w, "{k},{v}")?;
        }
        w.flush()?;
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ElbowOptions {
    pub seed: u64,
    pub restarts: usize,
    pub max_iter: usize,
    pub standardize: bool,
}

impl From<&KMeansOptions> for ElbowOptions {
    fn from(o: &KMeansOptions) -> Self {
        ElbowOptions {
            seed: o.seed,
            restarts: o.restarts,
            max_iter: o.max_iter,
            standardize: o.standardize,
        }
    }
}

/// Runs K-means for each k in `k_range` and picks the k with the largest
/// discrete second difference of the wcss curve.
///
/// Each k keeps the better of its own restarts and a warm start from the
/// previous k's solution plus one centroid on the worst-fit point, so the
/// curve never increases.
pub fn elbow_select(data: ArrayView2<f64>, k_range: RangeInclusive<usize>, opts: &ElbowOptions) -> Result<ElbowCurve> {
    let (lo, hi) = (*k_range.start(), *k_range.end());
    if hi < lo || hi - lo + 1 < 3 {
        return Err(Error::invalid(format!(
            "k range {lo}..={hi} needs at least three values"
        )));
    }
    validate(data, hi)?;
    validate(data, lo)?;
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

    let mut solutions: Vec<ClusterAssignment> = Vec::with_capacity(hi - lo + 1);
    for k in lo..=hi {
        let kopts = KMeansOptions {
            k,
            seed: opts.seed,
            restarts: opts.restarts,
            max_iter: opts.max_iter,
            standardize: false,
        };
        let mut best = best_of_restarts(data, &kopts);
        if let Some(prev) = solutions.last() {
            let worst = data
                .rows()
                .into_iter()
                .zip(&prev.labels)
                .enumerate()
                .map(|(i, (row, &l))| (i, sq_dist(row, prev.centroids.row(l))))
                .fold((0, f64::NEG_INFINITY), |acc, x| if x.1 > acc.1 { x } else { acc })
                .0;
            let init = concatenate(Axis(0), &[prev.centroids.view(), data.row(worst).insert_axis(Axis(0))])
                .expect("matching column count");
            let split = lloyd(data, init, opts.max_iter);
            if split.wcss < best.wcss {
                best = split;
            }
        }
        solutions.push(canonical(best, k, opts.seed, opts.restarts));
    }

    let points: Vec<(usize, f64)> = solutions.iter().map(|s| (s.k, s.wcss)).collect();
    let second_differences: Vec<(usize, f64)> = points
        .windows(3)
        .map(|w| (w[1].0, w[0].1 - 2.0 * w[1].1 + w[2].1))
        .collect();
    let (selected_k, top) =
        second_differences
            .iter()
            .copied()
            .fold((second_differences[0].0, f64::NEG_INFINITY), |acc, x| {
                if x.1 > acc.1 {
                    x
                } else {
                    acc
                }
            });
    let bottom = second_differences.iter().map(|x| x.1).fold(f64::INFINITY, f64::min);
    let low_confidence = (top - bottom) < LOW_CONFIDENCE_SPREAD * points[0].1 || points[0].1 <= 0.0;

    Ok(ElbowCurve {
        points,
        second_differences,
        selected_k,
        low_confidence,
        solutions,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::Array2;

    fn opts() -> ElbowOptions {
        ElbowOptions {
            seed: 5,
            restarts: 10,
            max_iter: 300,
            standardize: false,
        }
    }

    /// Two tight blobs far apart.
    fn two_blobs() -> Array2<f64> {
        Array2::from_shape_fn((20, 2), |(i, j)| {
            let base = if i < 10 { 0.0 } else { 50.0 };
            base + ((i * 3 + j * 7) % 5) as f64 * 0.2
        })
    }

    #[test]
    fn picks_two_for_planted_pair() {
        let c = elbow_select(two_blobs().view(), 1..=6, &opts()).unwrap();
        assert_eq!(c.selected_k, 2);
        assert!(!c.low_confidence);
        assert_eq!(c.points.len(), 6);
        assert_eq!(c.second_differences.len(), 4);
    }

    #[test]
    fn curve_is_non_increasing() {
        let data = Array2::from_shape_fn((30, 3), |(i, j)| ((i * 13 + j * 5) % 17) as f64);
        let c = elbow_select(data.view(), 1..=8, &opts()).unwrap();
        for w in c.points.windows(2) {
            assert!(w[1].1 <= w[0].1 + 1e-9, "{:?}", c.points);
        }
    }

    #[test]
    fn uniform_grid_still_selects() {
        let data = Array2::from_shape_fn((25, 2), |(i, j)| if j == 0 { (i % 5) as f64 } else { (i / 5) as f64 });
        let c = elbow_select(data.view(), 1..=6, &opts()).unwrap();
        assert!((2..=5).contains(&c.selected_k));
    }

    #[test]
    fn flat_curve_is_low_confidence() {
        let data = Array2::from_elem((12, 2), 3.0);
        let c = elbow_select(data.view(), 1..=4, &opts()).unwrap();
        assert!(c.low_confidence);
        assert_eq!(c.selected_k, 2);
    }

    #[test]
    fn range_validation() {
        let d = two_blobs();
        assert!(elbow_select(d.view(), 1..=2, &opts()).is_err());
        assert!(elbow_select(d.view(), 1..=40, &opts()).is_err());
        assert!(elbow_select(d.view(), 0..=3, &opts()).is_err());
    }
}
