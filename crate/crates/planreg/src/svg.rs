//! Minimal SVG scatter plots: registration overlays and composed maps.
//! One marker element per rendered point; output is plain, valid XML.

use planreg_core::{Point2, PointSet, RigidTransform2};

const CANVAS: f64 = 800.0;
const MARGIN: f64 = 40.0;

#[derive(Clone, Copy, Debug)]
pub enum Marker {
    /// Filled circle of the given radius (pixels).
    Circle(f64),
    /// Upright cross with the given half-extent (pixels).
    Cross(f64),
}

/// A scatter layer: points drawn with one marker style and color.
pub struct Layer {
    pub points: Vec<Point2>,
    pub marker: Marker,
    pub color: &'static str,
}

/// Maps data coordinates to pixel coordinates (y flipped).
struct Viewport {
    min: Point2,
    scale: f64,
    height: f64,
}

impl Viewport {
    fn fit(layers: &[Layer]) -> Viewport {
        let mut min = Point2::new(f64::INFINITY, f64::INFINITY);
        let mut max = Point2::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
        for layer in layers {
            for p in &layer.points {
                min = min.min_components(*p);
                max = max.max_components(*p);
            }
        }
        if !min.is_finite() || !max.is_finite() {
            min = Point2::new(0.0, 0.0);
            max = Point2::new(1.0, 1.0);
        }
        let extent = (max.x - min.x).max(max.y - min.y).max(1e-9);
        Viewport {
            min,
            scale: (CANVAS - 2.0 * MARGIN) / extent,
            height: CANVAS,
        }
    }

    fn to_px(&self, p: Point2) -> (f64, f64) {
        let x = MARGIN + (p.x - self.min.x) * self.scale;
        let y = self.height - MARGIN - (p.y - self.min.y) * self.scale;
        (x, y)
    }
}

/// Renders the layers into a complete SVG document.
pub fn render(layers: &[Layer]) -> String {
    let vp = Viewport::fit(layers);
    let mut out = String::new();
    out.push_str(&format!(
        "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n\
         <svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{c}\" height=\"{c}\" \
         viewBox=\"0 0 {c} {c}\">\n",
        c = CANVAS
    ));
    out.push_str("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");
    for layer in layers {
        for &p in &layer.points {
            let (x, y) = vp.to_px(p);
            match layer.marker {
                Marker::Circle(r) => out.push_str(&format!(
                    "<circle cx=\"{x:.2}\" cy=\"{y:.2}\" r=\"{r}\" fill=\"{}\"/>\n",
                    layer.color
                )),
                Marker::Cross(h) => out.push_str(&format!(
                    "<path d=\"M {x0:.2} {y:.2} L {x1:.2} {y:.2} M {x:.2} {y0:.2} L {x:.2} {y1:.2}\" \
                     stroke=\"{}\" stroke-width=\"1.5\" fill=\"none\"/>\n",
                    layer.color,
                    x0 = x - h,
                    x1 = x + h,
                    y0 = y - h,
                    y1 = y + h,
                )),
            }
        }
    }
    out.push_str("</svg>\n");
    out
}

/// Registration overlay: source in red, destination in green, transformed
/// source in blue.
pub fn solve_plot(src: &PointSet, dest: &PointSet, transform: &RigidTransform2) -> String {
    let transformed: Vec<Point2> = src.iter().map(|p| transform.apply(*p)).collect();
    render(&[
        Layer {
            points: src.to_vec(),
            marker: Marker::Circle(3.0),
            color: "red",
        },
        Layer {
            points: dest.to_vec(),
            marker: Marker::Circle(3.0),
            color: "green",
        },
        Layer {
            points: transformed,
            marker: Marker::Circle(3.0),
            color: "blue",
        },
    ])
}

/// Composed map: every scan drawn in the reference frame, inlier points as
/// green crosses, outliers as red crosses, one circle per estimated pose.
pub fn map_plot(scans: &[(PointSet, Vec<bool>)], poses: &[RigidTransform2]) -> String {
    let mut inliers = Vec::new();
    let mut outliers = Vec::new();
    let mut centers = Vec::new();
    for ((scan, inlier_mask), pose) in scans.iter().zip(poses) {
        centers.push(pose.apply(Point2::new(0.0, 0.0)));
        for (k, p) in scan.iter().enumerate() {
            let q = pose.apply(*p);
            if inlier_mask.get(k).copied().unwrap_or(true) {
                inliers.push(q);
            } else {
                outliers.push(q);
            }
        }
    }
    render(&[
        Layer {
            points: inliers,
            marker: Marker::Cross(3.0),
            color: "green",
        },
        Layer {
            points: outliers,
            marker: Marker::Cross(3.0),
            color: "red",
        },
        Layer {
            points: centers,
            marker: Marker::Circle(5.0),
            color: "black",
        },
    ])
}
