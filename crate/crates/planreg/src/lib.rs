//! Std companion to `planreg-core`: random benchmark instances, point-set
//! and pose-graph file formats, SVG plotting, and the solver CLI plumbing.

pub mod instances;
pub mod io;
pub mod posegraph;
pub mod report;
pub mod svg;

use planreg_core::geom::TAU;
use planreg_core::{Point2, PointSet, TransformBox};

/// Default search box when none is given: any transform placing some source
/// point on some destination point has its translation inside the
/// destination bounding box inflated by the source radius; the full turn
/// covers rotation.
pub fn default_root_box(src: &PointSet, dest: &PointSet) -> TransformBox {
    let radius = src.max_norm();
    let pad = Point2::new(radius, radius);
    let mut lo = dest[0];
    let mut hi = dest[0];
    for q in dest.iter() {
        lo = lo.min_components(*q);
        hi = hi.max_components(*q);
    }
    TransformBox::new(lo - pad, hi + pad, 0.0, TAU).expect("bbox is well ordered")
}
