//! Random benchmark instances: a source cloud, a rigidly transformed and
//! noise-corrupted destination cloud, and the ground-truth transform.

use planreg_core::geom::TAU;
use planreg_core::{Point2, PointSet, RigidTransform2};
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum InstanceError {
    #[error("instance size must be at least 1")]
    EmptyInstance,
    #[error("noise std must be non-negative and finite")]
    InvalidSigma,
    #[error("outlier fraction must lie in [0, 1]")]
    InvalidOutlierFraction,
    #[error("coordinate range must be a non-empty finite interval")]
    InvalidCoordRange,
}

/// Generation parameters. Defaults follow the benchmark protocol:
/// 10% outliers, coordinates in [-10, 10].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct InstanceSpec {
    pub n: usize,
    /// Per-axis gaussian noise std applied to inliers.
    pub sigma: f64,
    #[serde(default = "default_outlier_fraction")]
    pub outlier_fraction: f64,
    /// Per-axis interval for source points, the translation, and outlier
    /// displacement targets.
    #[serde(default = "default_coord_range")]
    pub coord_range: (f64, f64),
    pub seed: u64,
}

fn default_outlier_fraction() -> f64 {
    0.1
}

fn default_coord_range() -> (f64, f64) {
    (-10.0, 10.0)
}

impl InstanceSpec {
    pub fn new(n: usize, sigma: f64, seed: u64) -> Self {
        InstanceSpec {
            n,
            sigma,
            outlier_fraction: default_outlier_fraction(),
            coord_range: default_coord_range(),
            seed,
        }
    }

    pub fn validate(&self) -> Result<(), InstanceError> {
        if self.n == 0 {
            return Err(InstanceError::EmptyInstance);
        }
        if !(self.sigma >= 0.0 && self.sigma.is_finite()) {
            return Err(InstanceError::InvalidSigma);
        }
        if !(0.0..=1.0).contains(&self.outlier_fraction) {
            return Err(InstanceError::InvalidOutlierFraction);
        }
        let (lo, hi) = self.coord_range;
        if !(lo < hi && lo.is_finite() && hi.is_finite()) {
            return Err(InstanceError::InvalidCoordRange);
        }
        Ok(())
    }

    /// Number of outliers: `ceil(outlier_fraction * n)`.
    pub fn outlier_count(&self) -> usize {
        (self.outlier_fraction * self.n as f64).ceil() as usize
    }
}

/// A generated registration problem with its ground truth.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Instance {
    pub src: PointSet,
    pub dest: PointSet,
    pub true_transform: RigidTransform2,
    pub outlier_mask: Vec<bool>,
    pub spec: InstanceSpec,
}

/// Draw an instance: source points uniform in the coordinate square, a
/// uniform random rigid transform, gaussian inlier noise and uniformly
/// redrawn outlier displacements. Bit-identical across runs for a fixed
/// spec.
pub fn generate_instance(spec: &InstanceSpec) -> Result<Instance, InstanceError> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let (lo, hi) = spec.coord_range;
    let uniform = |rng: &mut ChaCha8Rng| rng.gen_range(lo..hi);

    let src_points: Vec<Point2> = (0..spec.n)
        .map(|_| Point2::new(uniform(&mut rng), uniform(&mut rng)))
        .collect();
    let z = Point2::new(uniform(&mut rng), uniform(&mut rng));
    let theta = rng.gen_range(0.0..TAU);
    let true_transform = RigidTransform2::new(z, theta);

    let mut outlier_mask = vec![false; spec.n];
    for idx in sample(&mut rng, spec.n, spec.outlier_count()) {
        outlier_mask[idx] = true;
    }

    let normal = Normal::new(0.0, spec.sigma).expect("validated sigma");
    let dest_points: Vec<Point2> = src_points
        .iter()
        .zip(&outlier_mask)
        .map(|(p, &outlier)| {
            let t = true_transform.apply(*p);
            if outlier {
                t + Point2::new(uniform(&mut rng), uniform(&mut rng))
            } else {
                t + Point2::new(normal.sample(&mut rng), normal.sample(&mut rng))
            }
        })
        .collect();

    Ok(Instance {
        src: PointSet::new(src_points).expect("n >= 1, finite coords"),
        dest: PointSet::new(dest_points).expect("n >= 1, finite coords"),
        true_transform,
        outlier_mask,
        spec: *spec,
    })
}
