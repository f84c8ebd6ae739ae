//! K-means with seeded k-means++ restarts, elbow selection of k and the
//! adjusted Rand index for comparing partitions.

mod ari;
mod elbow;
mod kmeans;

pub use ari::adjusted_rand_index;
pub use elbow::{elbow_select, ElbowCurve, ElbowOptions, LOW_CONFIDENCE_SPREAD};
pub use kmeans::{kmeans, standardize, wcss, ClusterAssignment, KMeansOptions, DEFAULT_MAX_ITER, DEFAULT_RESTARTS};
