//! JSON shape files.

use super::{polygon_to_star_with, Polygon, Profile, StarShape};
use crate::error::{Error, Result};
use crate::spectral::FourierCoeffs;
use crate::Vec2;
use serde::{Deserialize, Serialize};

/// On-disk shape description.
///
/// ```json
/// {"kind":"fourier","a":[0.0,0.0,0.1],"b":[0.0,0.0]}
/// {"kind":"samples","r":[1.0, ...]}
/// {"kind":"polygon","vertices":[[1.0,0.0],[0.0,1.0],[-1.0,0.0]]}
/// ```
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum ShapeFile {
    Fourier { a: Vec<f64>, b: Vec<f64> },
    Samples { r: Vec<f64> },
    Polygon { vertices: Vec<[f64; 2]> },
}

/// Any shape the metrics accept.
#[derive(Debug, Clone, PartialEq)]
pub enum Shape {
    Star(StarShape),
    Polygon(Polygon),
}

impl ShapeFile {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("shape files serialize")
    }

    /// Builds the shape; Fourier profiles use `quadrature_n` nodes.
    pub fn into_shape(self, quadrature_n: usize) -> Result<Shape> {
        Ok(match self {
            ShapeFile::Fourier { a, b } => Shape::Star(StarShape::from_fourier_with(FourierCoeffs::new(a, b)?, quadrature_n)?),
            ShapeFile::Samples { r } => Shape::Star(StarShape::from_samples(r)?),
            ShapeFile::Polygon { vertices } => Shape::Polygon(Polygon::new(vertices.into_iter().map(Vec2::from).collect())?),
        })
    }
}

impl From<&Shape> for ShapeFile {
    fn from(shape: &Shape) -> Self {
        match shape {
            Shape::Star(s) => match s.profile() {
                Profile::Fourier(u) => ShapeFile::Fourier { a: u.cos_coeffs().to_vec(), b: u.sin_coeffs().to_vec() },
                Profile::Samples(r) => ShapeFile::Samples { r: r.clone() },
            },
            Shape::Polygon(p) => ShapeFile::Polygon { vertices: p.vertices().iter().map(|&v| v.into()).collect() },
        }
    }
}

impl Shape {
    /// Star-shaped view; polygons are sampled on `n` nodes.
    pub fn to_star(&self, n: usize) -> Result<StarShape> {
        match self {
            Shape::Star(s) => Ok(s.clone()),
            Shape::Polygon(p) => polygon_to_star_with(p, n),
        }
    }
}

impl From<StarShape> for Shape {
    fn from(s: StarShape) -> Self {
        Shape::Star(s)
    }
}

impl From<Polygon> for Shape {
    fn from(p: Polygon) -> Self {
        Shape::Polygon(p)
    }
}
