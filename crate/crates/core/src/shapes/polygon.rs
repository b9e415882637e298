use crate::error::{Error, Result};
use crate::quadrature::{node, DEFAULT_QUADRATURE_N};
use crate::shapes::StarShape;
use crate::Vec2;
use std::f64::consts::{PI, TAU};

/// Simple polygon with counterclockwise vertices.
#[derive(Debug, Clone, PartialEq)]
pub struct Polygon {
    vertices: Vec<Vec2>,
}

impl Polygon {
    pub fn new(vertices: Vec<Vec2>) -> Result<Self> {
        if vertices.len() < 3 {
            return Err(Error::Domain(format!("polygon needs at least 3 vertices, got {}", vertices.len())));
        }
        if vertices.iter().any(|v| !(v.x.is_finite() && v.y.is_finite())) {
            return Err(Error::Domain("non-finite vertex".into()));
        }
        let poly = Self { vertices };
        let area = poly.signed_area();
        if !(area > 0.0) {
            return Err(Error::Domain(format!("signed area {area} is not positive (vertices must be CCW)")));
        }
        if poly.self_intersects() {
            return Err(Error::Domain("polygon is not simple".into()));
        }
        Ok(poly)
    }

    pub fn vertices(&self) -> &[Vec2] {
        &self.vertices
    }

    /// Directed edges `(p_i, p_{i+1})`.
    pub fn edges(&self) -> impl Iterator<Item = (Vec2, Vec2)> + '_ {
        let m = self.vertices.len();
        (0..m).map(move |i| (self.vertices[i], self.vertices[(i + 1) % m]))
    }

    /// Shoelace formula.
    pub fn signed_area(&self) -> f64 {
        0.5 * self.edges().map(|(p, q)| p.cross(q)).sum::<f64>()
    }

    pub fn area(&self) -> f64 {
        self.signed_area().abs()
    }

    pub fn perimeter(&self) -> f64 {
        self.edges().map(|(p, q)| (q - p).norm()).sum()
    }

    pub fn centroid(&self) -> Vec2 {
        let mut c = Vec2::ZERO;
        for (p, q) in self.edges() {
            c = c + (p + q) * p.cross(q);
        }
        c * (1.0 / (6.0 * self.signed_area()))
    }

    pub fn scaled(&self, factor: f64) -> Result<Self> {
        Self::new(self.vertices.iter().map(|&v| v * factor).collect())
    }

    pub fn translated(&self, x: Vec2) -> Result<Self> {
        Self::new(self.vertices.iter().map(|&v| v + x).collect())
    }

    /// Area of the intersection with the disk `B(center, radius)`, exact up
    /// to rounding: a signed sum over edges of triangle–disk overlaps.
    pub fn disk_overlap(&self, center: Vec2, radius: f64) -> f64 {
        self.edges()
            .map(|(p, q)| triangle_disk_overlap(p - center, q - center, radius))
            .sum::<f64>()
    }

    /// Length of the boundary inside the open ball and the integral of the
    /// outward normal over that part.
    pub fn boundary_in_ball(&self, center: Vec2, radius: f64) -> (f64, Vec2) {
        let mut length = 0.0;
        let mut normal = Vec2::ZERO;
        for (p, q) in self.edges() {
            for (a, b) in split_by_circle(p - center, q - center, radius) {
                if ((a + b) * 0.5).norm() < radius {
                    length += (b - a).norm();
                    normal = normal + (b - a).perp_cw();
                }
            }
        }
        (length, normal)
    }

    fn self_intersects(&self) -> bool {
        let m = self.vertices.len();
        let edges: Vec<(Vec2, Vec2)> = self.edges().collect();
        for i in 0..m {
            for j in i + 1..m {
                if j == i + 1 || (i == 0 && j == m - 1) {
                    continue;
                }
                if segments_touch(edges[i], edges[j]) {
                    return true;
                }
            }
        }
        false
    }
}

fn orient(a: Vec2, b: Vec2, c: Vec2) -> f64 {
    (b - a).cross(c - a)
}

fn segments_touch((p1, p2): (Vec2, Vec2), (q1, q2): (Vec2, Vec2)) -> bool {
    let d1 = orient(q1, q2, p1);
    let d2 = orient(q1, q2, p2);
    let d3 = orient(p1, p2, q1);
    let d4 = orient(p1, p2, q2);
    if ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0)) && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0)) {
        return true;
    }
    let on = |a: Vec2, b: Vec2, c: Vec2, d: f64| {
        d == 0.0 && c.x >= a.x.min(b.x) && c.x <= a.x.max(b.x) && c.y >= a.y.min(b.y) && c.y <= a.y.max(b.y)
    };
    on(q1, q2, p1, d1) || on(q1, q2, p2, d2) || on(p1, p2, q1, d3) || on(p1, p2, q2, d4)
}

/// Splits the segment `a → b` at its crossings with the circle of radius
/// `radius` about the origin.
fn split_by_circle(a: Vec2, b: Vec2, radius: f64) -> Vec<(Vec2, Vec2)> {
    let d = b - a;
    let qa = d.norm_sq();
    let qb = 2.0 * a.dot(d);
    let qc = a.norm_sq() - radius * radius;
    let disc = qb * qb - 4.0 * qa * qc;
    let mut ts = vec![0.0];
    if disc > 0.0 && qa > 0.0 {
        let sq = disc.sqrt();
        for t in [(-qb - sq) / (2.0 * qa), (-qb + sq) / (2.0 * qa)] {
            if t > 0.0 && t < 1.0 {
                ts.push(t);
            }
        }
    }
    ts.push(1.0);
    ts.windows(2).map(|w| (a + d * w[0], a + d * w[1])).collect()
}

/// Signed area of `triangle(0, a, b) ∩ B(0, radius)`.
fn triangle_disk_overlap(a: Vec2, b: Vec2, radius: f64) -> f64 {
    split_by_circle(a, b, radius)
        .into_iter()
        .map(|(p, q)| {
            if ((p + q) * 0.5).norm() <= radius {
                0.5 * p.cross(q)
            } else {
                0.5 * radius * radius * p.cross(q).atan2(p.dot(q))
            }
        })
        .sum()
}

/// Regular `m`-gon of area `π` with a vertex on the positive x-axis.
pub fn make_regular_polygon(m: usize) -> Result<Polygon> {
    if m < 3 {
        return Err(Error::Domain(format!("regular polygon needs m ≥ 3, got {m}")));
    }
    let mf = m as f64;
    let circumradius = (2.0 * PI / (mf * (TAU / mf).sin())).sqrt();
    Polygon::new((0..m).map(|i| Vec2::polar(TAU * i as f64 / mf) * circumradius).collect())
}

/// Radial profile of a polygon star-shaped about the origin, on the default grid.
pub fn polygon_to_star(poly: &Polygon) -> Result<StarShape> {
    polygon_to_star_with(poly, DEFAULT_QUADRATURE_N)
}

/// Samples the exact ray–edge distance at `n` nodes.
pub fn polygon_to_star_with(poly: &Polygon, n: usize) -> Result<StarShape> {
    crate::quadrature::check_grid_size(n)?;
    let mut r = Vec::with_capacity(n);
    for i in 0..n {
        let w = Vec2::polar(node(i, n));
        let mut hits: Vec<f64> = Vec::new();
        for (p, q) in poly.edges() {
            let d = q - p;
            let denom = w.cross(d);
            if denom.abs() < 1e-300 {
                continue;
            }
            let s = p.cross(d) / denom;
            let u = p.cross(w) / denom;
            if s > 0.0 && (-1e-12..=1.0 + 1e-12).contains(&u) && !hits.iter().any(|h| (h - s).abs() < 1e-12) {
                hits.push(s);
            }
        }
        if hits.len() != 1 {
            return Err(Error::NotStarShaped(format!(
                "ray at angle {:.6} meets the boundary {} times",
                node(i, n),
                hits.len()
            )));
        }
        r.push(hits[0]);
    }
    StarShape::from_samples(r)
}
