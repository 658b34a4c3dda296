//! Polygon predicates and the geographic to projected transformation.
//!
//! Coordinates are longitude/latitude in degrees throughout, except for
//! [`ProjectedPoint`], which is in metres on UTM zone 16N.

mod projection;

pub use projection::{euclidean_distance, project, ProjectedPoint, UTM16N_CENTRAL_MERIDIAN};

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LonLat {
    pub lon: f64,
    pub lat: f64,
}

impl LonLat {
    pub const fn new(lon: f64, lat: f64) -> Self {
        Self { lon, lat }
    }
}

impl From<(f64, f64)> for LonLat {
    fn from((lon, lat): (f64, f64)) -> Self {
        Self { lon, lat }
    }
}

/// Axis-aligned box in degrees.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundingBox {
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
}

impl BoundingBox {
    /// Box enclosing `points`, or `None` when the iterator is empty.
    pub fn enclosing(points: impl IntoIterator<Item = LonLat>) -> Option<Self> {
        let mut it = points.into_iter();
        let first = it.next()?;
        let mut bb = BoundingBox {
            x_min: first.lon,
            x_max: first.lon,
            y_min: first.lat,
            y_max: first.lat,
        };
        for p in it {
            bb.x_min = bb.x_min.min(p.lon);
            bb.x_max = bb.x_max.max(p.lon);
            bb.y_min = bb.y_min.min(p.lat);
            bb.y_max = bb.y_max.max(p.lat);
        }
        Some(bb)
    }

    pub fn union(&self, other: &BoundingBox) -> BoundingBox {
        BoundingBox {
            x_min: self.x_min.min(other.x_min),
            x_max: self.x_max.max(other.x_max),
            y_min: self.y_min.min(other.y_min),
            y_max: self.y_max.max(other.y_max),
        }
    }

    /// Closed containment test.
    pub fn contains(&self, p: LonLat) -> bool {
        p.lon >= self.x_min && p.lon <= self.x_max && p.lat >= self.y_min && p.lat <= self.y_max
    }

    pub fn width(&self) -> f64 {
        self.x_max - self.x_min
    }

    pub fn height(&self) -> f64 {
        self.y_max - self.y_min
    }

    pub fn area(&self) -> f64 {
        self.width() * self.height()
    }
}

/// A closed ring: first vertex equals last, at least four vertices.
#[derive(Debug, Clone, PartialEq)]
pub struct Ring(Vec<LonLat>);

impl Ring {
    pub fn new(vertices: Vec<LonLat>) -> Result<Self> {
        if vertices.len() < 4 {
            return Err(Error::Geometry(format!(
                "ring has {} vertices, at least 4 required",
                vertices.len()
            )));
        }
        if vertices.iter().any(|p| !p.lon.is_finite() || !p.lat.is_finite()) {
            return Err(Error::Geometry("ring has a non-finite vertex".into()));
        }
        if vertices.first() != vertices.last() {
            return Err(Error::Geometry(
                "ring is not closed (first vertex differs from last)".into(),
            ));
        }
        Ok(Ring(vertices))
    }

    /// Closes the ring by repeating the first vertex if needed.
    pub fn closed(mut vertices: Vec<LonLat>) -> Result<Self> {
        if let (Some(first), Some(last)) = (vertices.first().copied(), vertices.last()) {
            if first != *last {
                vertices.push(first);
            }
        }
        Ring::new(vertices)
    }

    pub fn vertices(&self) -> &[LonLat] {
        &self.0
    }

    /// Signed shoelace area in square degrees (counter-clockwise positive).
    pub fn signed_area(&self) -> f64 {
        self.0
            .windows(2)
            .map(|w| w[0].lon * w[1].lat - w[1].lon * w[0].lat)
            .sum::<f64>()
            / 2.0
    }

    fn edges(&self) -> impl Iterator<Item = (LonLat, LonLat)> + '_ {
        self.0.windows(2).map(|w| (w[0], w[1]))
    }
}

/// One exterior ring with zero or more holes.
#[derive(Debug, Clone, PartialEq)]
pub struct PolygonPart {
    pub exterior: Ring,
    pub holes: Vec<Ring>,
}

/// A possibly multi-part polygon with holes.
#[derive(Debug, Clone, PartialEq)]
pub struct Polygon {
    parts: Vec<PolygonPart>,
}

impl Polygon {
    pub fn new(parts: Vec<PolygonPart>) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::Geometry("polygon has no rings".into()));
        }
        Ok(Polygon { parts })
    }

    /// Single-part polygon without holes; the ring is closed if necessary.
    pub fn from_exterior(vertices: impl IntoIterator<Item = (f64, f64)>) -> Result<Self> {
        let ring = Ring::closed(vertices.into_iter().map(LonLat::from).collect())?;
        Polygon::new(vec![PolygonPart {
            exterior: ring,
            holes: Vec::new(),
        }])
    }

    pub fn parts(&self) -> &[PolygonPart] {
        &self.parts
    }

    pub fn rings(&self) -> impl Iterator<Item = &Ring> {
        self.parts
            .iter()
            .flat_map(|p| std::iter::once(&p.exterior).chain(p.holes.iter()))
    }

    /// Even-odd ray casting over every ring of every part.
    ///
    /// Edges are half-open in latitude, and a point counts as inside when
    /// it lies strictly left of an odd number of edge crossings. For an
    /// axis-aligned rectangle this makes the covered set
    /// `[x_min, x_max) x [y_min, y_max)`.
    pub fn contains(&self, p: LonLat) -> bool {
        let mut inside = false;
        for ring in self.rings() {
            for (a, b) in ring.edges() {
                if (a.lat > p.lat) != (b.lat > p.lat) {
                    let x = a.lon + (p.lat - a.lat) * (b.lon - a.lon) / (b.lat - a.lat);
                    if p.lon < x {
                        inside = !inside;
                    }
                }
            }
        }
        inside
    }

    pub fn bbox(&self) -> BoundingBox {
        BoundingBox::enclosing(self.rings().flat_map(|r| r.vertices().iter().copied()))
            .expect("validated rings are non-empty")
    }

    /// Area in square degrees: exterior areas minus hole areas.
    pub fn area(&self) -> f64 {
        self.parts
            .iter()
            .map(|p| {
                p.exterior.signed_area().abs()
                    - p.holes.iter().map(|h| h.signed_area().abs()).sum::<f64>()
            })
            .sum()
    }

    /// Mean of the exterior ring vertices of the first part (closing vertex
    /// excluded). Inside for convex shapes only.
    pub fn vertex_centroid(&self) -> LonLat {
        let v = self.parts[0].exterior.vertices();
        let v = &v[..v.len() - 1];
        let n = v.len() as f64;
        LonLat::new(
            v.iter().map(|p| p.lon).sum::<f64>() / n,
            v.iter().map(|p| p.lat).sum::<f64>() / n,
        )
    }
}

/// Free-function form of [`Polygon::contains`].
pub fn contains(poly: &Polygon, p: LonLat) -> bool {
    poly.contains(p)
}

/// Free-function form of [`Polygon::bbox`].
pub fn bbox(poly: &Polygon) -> BoundingBox {
    poly.bbox()
}
