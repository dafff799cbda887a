//! Shared helpers for the oracle test suites.

#![allow(dead_code)]

use planreg_core::geom::TAU;
use planreg_core::{Point2, PointSet, RigidTransform2, TransformBox, TrimConfig};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_points(rng: &mut ChaCha8Rng, n: usize, half_range: f64) -> PointSet {
    let pts = (0..n)
        .map(|_| {
            Point2::new(
                rng.gen_range(-half_range..half_range),
                rng.gen_range(-half_range..half_range),
            )
        })
        .collect();
    PointSet::new(pts).unwrap()
}

/// A random box inside z in [-zr, zr]^2 with angular width at most
/// `max_theta_width`.
pub fn random_box(rng: &mut ChaCha8Rng, zr: f64, max_theta_width: f64) -> TransformBox {
    let x0 = rng.gen_range(-zr..zr * 0.5);
    let y0 = rng.gen_range(-zr..zr * 0.5);
    let wx = rng.gen_range(0.01..zr * 0.5);
    let wy = rng.gen_range(0.01..zr * 0.5);
    let t0 = rng.gen_range(0.0..TAU * 0.75);
    let wt = rng.gen_range(1e-3..max_theta_width.min(TAU - t0));
    TransformBox::new(
        Point2::new(x0, y0),
        Point2::new(x0 + wx, y0 + wy),
        t0,
        t0 + wt,
    )
    .unwrap()
}

pub fn random_transform_in(rng: &mut ChaCha8Rng, b: &TransformBox) -> RigidTransform2 {
    RigidTransform2::new(
        Point2::new(
            rng.gen_range(b.z_min.x..=b.z_max.x),
            rng.gen_range(b.z_min.y..=b.z_max.y),
        ),
        rng.gen_range(b.theta_min..=b.theta_max),
    )
}

/// Minimum of the trimmed objective over sampled transforms in the box
/// (corners, center and random interior points). An upper bound on the true
/// restricted minimum, so any valid lower bound must stay below it.
pub fn sampled_min_objective(
    rng: &mut ChaCha8Rng,
    b: &TransformBox,
    src: &PointSet,
    dest: &PointSet,
    trim: TrimConfig,
    samples: usize,
) -> f64 {
    let mut best = f64::INFINITY;
    let mut eval = |t: &RigidTransform2| {
        let v = planreg_core::objective::trimmed_objective(t, src, dest, trim).unwrap();
        if v < best {
            best = v;
        }
    };
    for &zx in &[b.z_min.x, b.z_max.x] {
        for &zy in &[b.z_min.y, b.z_max.y] {
            for &th in &[b.theta_min, b.theta_max] {
                eval(&RigidTransform2::new(Point2::new(zx, zy), th));
            }
        }
    }
    let (zc, tc) = b.center();
    eval(&RigidTransform2::new(zc, tc));
    for _ in 0..samples {
        eval(&random_transform_in(rng, b));
    }
    best
}
