use std::collections::BTreeMap;
use std::path::Path;

use serde_json::Value;

use crate::geometry::{BoundingBox, LonLat, Polygon, PolygonPart, Ring};
use crate::{Error, Result};

pub const DEFAULT_FIPS_PROPERTY: &str = "fips";
pub const DEFAULT_GRID_CELLS: usize = 64;

#[derive(Debug, Clone)]
pub struct BlockGeometry {
    pub fips: String,
    pub polygon: Polygon,
    pub bbox: BoundingBox,
}

/// Uniform grid over the data extent mapping each cell to the blocks whose
/// bounding boxes overlap it. Candidate lists are in FIPS order.
#[derive(Debug, Clone)]
struct CoverageGrid {
    extent: BoundingBox,
    nx: usize,
    ny: usize,
    cells: Vec<Vec<u32>>,
}

impl CoverageGrid {
    fn build(entries: &[BlockGeometry], nx: usize, ny: usize) -> Self {
        let extent = entries
            .iter()
            .map(|e| e.bbox)
            .reduce(|a, b| a.union(&b))
            .unwrap_or(BoundingBox {
                x_min: 0.0,
                x_max: 0.0,
                y_min: 0.0,
                y_max: 0.0,
            });
        let mut grid = CoverageGrid {
            extent,
            nx: nx.max(1),
            ny: ny.max(1),
            cells: Vec::new(),
        };
        grid.cells = vec![Vec::new(); grid.nx * grid.ny];
        for (i, e) in entries.iter().enumerate() {
            let (x0, x1) = (grid.col(e.bbox.x_min), grid.col(e.bbox.x_max));
            let (y0, y1) = (grid.row(e.bbox.y_min), grid.row(e.bbox.y_max));
            for y in y0..=y1 {
                for x in x0..=x1 {
                    grid.cells[y * grid.nx + x].push(i as u32);
                }
            }
        }
        grid
    }

    fn col(&self, lon: f64) -> usize {
        cell_of(lon, self.extent.x_min, self.extent.width(), self.nx)
    }

    fn row(&self, lat: f64) -> usize {
        cell_of(lat, self.extent.y_min, self.extent.height(), self.ny)
    }

    fn candidates(&self, p: LonLat) -> &[u32] {
        if !self.extent.contains(p) {
            return &[];
        }
        &self.cells[self.row(p.lat) * self.nx + self.col(p.lon)]
    }
}

fn cell_of(v: f64, min: f64, span: f64, n: usize) -> usize {
    if span <= 0.0 {
        return 0;
    }
    let c = ((v - min) / span * n as f64).floor();
    (c.max(0.0) as usize).min(n - 1)
}

/// Block boundaries keyed by FIPS, with a coarse grid for point lookup.
#[derive(Debug, Clone)]
pub struct BlockGeometryIndex {
    entries: Vec<BlockGeometry>,
    by_fips: BTreeMap<String, usize>,
    grid: CoverageGrid,
}

impl BlockGeometryIndex {
    pub fn new(blocks: impl IntoIterator<Item = (String, Polygon)>) -> Result<Self> {
        Self::with_grid(blocks, DEFAULT_GRID_CELLS)
    }

    pub fn with_grid(
        blocks: impl IntoIterator<Item = (String, Polygon)>,
        cells_per_axis: usize,
    ) -> Result<Self> {
        let mut sorted = BTreeMap::new();
        for (fips, polygon) in blocks {
            if sorted.contains_key(&fips) {
                return Err(Error::Geometry(format!("duplicate geometry for FIPS {fips}")));
            }
            sorted.insert(fips, polygon);
        }
        let entries: Vec<BlockGeometry> = sorted
            .into_iter()
            .map(|(fips, polygon)| BlockGeometry {
                bbox: polygon.bbox(),
                fips,
                polygon,
            })
            .collect();
        let by_fips = entries
            .iter()
            .enumerate()
            .map(|(i, e)| (e.fips.clone(), i))
            .collect();
        let grid = CoverageGrid::build(&entries, cells_per_axis, cells_per_axis);
        Ok(Self {
            entries,
            by_fips,
            grid,
        })
    }

    pub fn get(&self, fips: &str) -> Option<&BlockGeometry> {
        self.by_fips.get(fips).map(|&i| &self.entries[i])
    }

    pub(crate) fn entry(&self, i: usize) -> &BlockGeometry {
        &self.entries[i]
    }

    pub fn contains_fips(&self, fips: &str) -> bool {
        self.by_fips.contains_key(fips)
    }

    /// Entries in FIPS order.
    pub fn iter(&self) -> impl Iterator<Item = &BlockGeometry> {
        self.entries.iter()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn extent(&self) -> BoundingBox {
        self.grid.extent
    }

    /// Blocks whose bounding box may contain `p`: a superset of the blocks
    /// that actually contain it, in FIPS order.
    pub fn candidates(&self, p: LonLat) -> impl Iterator<Item = &BlockGeometry> {
        self.grid
            .candidates(p)
            .iter()
            .map(|&i| &self.entries[i as usize])
    }

    /// First block in FIPS order whose polygon contains `p`.
    pub fn locate(&self, p: LonLat) -> Option<&BlockGeometry> {
        self.candidates(p)
            .find(|e| e.bbox.contains(p) && e.polygon.contains(p))
    }
}

pub fn load_geodata(path: &Path, fips_property: &str) -> Result<BlockGeometryIndex> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_geodata(&text, fips_property).map_err(|e| match e {
        Error::Geometry(m) => Error::Geometry(format!("{}: {m}", path.display())),
        other => other,
    })
}

/// Parses a GeoJSON FeatureCollection of Polygon/MultiPolygon features.
pub fn parse_geodata(text: &str, fips_property: &str) -> Result<BlockGeometryIndex> {
    let doc: Value = serde_json::from_str(text)
        .map_err(|e| Error::Geometry(format!("invalid GeoJSON: {e}")))?;
    if doc.get("type").and_then(Value::as_str) != Some("FeatureCollection") {
        return Err(Error::Geometry("expected a FeatureCollection".into()));
    }
    let features = doc
        .get("features")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::Geometry("FeatureCollection has no 'features' array".into()))?;

    let mut blocks = Vec::with_capacity(features.len());
    for (i, feature) in features.iter().enumerate() {
        let fips = feature
            .get("properties")
            .and_then(|p| p.get(fips_property))
            .and_then(|v| match v {
                Value::String(s) if !s.is_empty() => Some(s.clone()),
                Value::Number(n) if n.is_u64() => Some(n.to_string()),
                _ => None,
            })
            .ok_or_else(|| {
                Error::Geometry(format!("feature {i}: missing '{fips_property}' property"))
            })?;
        let polygon = feature
            .get("geometry")
            .ok_or_else(|| Error::Geometry(format!("feature {i} ({fips}): no geometry")))
            .and_then(parse_polygonal)
            .map_err(|e| match e {
                Error::Geometry(m) => Error::Geometry(format!("feature {i} ({fips}): {m}")),
                other => other,
            })?;
        blocks.push((fips, polygon));
    }
    BlockGeometryIndex::new(blocks)
}

/// Polygon or MultiPolygon geometry object.
pub(crate) fn parse_polygonal(geometry: &Value) -> Result<Polygon> {
    let kind = geometry.get("type").and_then(Value::as_str).unwrap_or("null");
    let coords = geometry.get("coordinates");
    let parts = match (kind, coords) {
        ("Polygon", Some(c)) => vec![parse_part(c)?],
        ("MultiPolygon", Some(Value::Array(polys))) => {
            polys.iter().map(parse_part).collect::<Result<Vec<_>>>()?
        }
        ("Polygon" | "MultiPolygon", _) => {
            return Err(Error::Geometry(format!("{kind} without coordinates")))
        }
        (other, _) => {
            return Err(Error::Geometry(format!(
                "unsupported geometry type {other}; expected Polygon or MultiPolygon"
            )))
        }
    };
    Polygon::new(parts)
}

fn parse_part(rings: &Value) -> Result<PolygonPart> {
    let rings = rings
        .as_array()
        .ok_or_else(|| Error::Geometry("polygon rings must be an array".into()))?;
    let mut parsed = rings.iter().map(parse_ring);
    let exterior = parsed
        .next()
        .ok_or_else(|| Error::Geometry("polygon without rings".into()))??;
    let holes = parsed.collect::<Result<Vec<_>>>()?;
    Ok(PolygonPart { exterior, holes })
}

fn parse_ring(ring: &Value) -> Result<Ring> {
    let points = ring
        .as_array()
        .ok_or_else(|| Error::Geometry("ring must be an array of positions".into()))?;
    let vertices = points
        .iter()
        .map(parse_position)
        .collect::<Result<Vec<_>>>()?;
    Ring::new(vertices)
}

pub(crate) fn parse_position(v: &Value) -> Result<LonLat> {
    match v.as_array().map(Vec::as_slice) {
        Some([lon, lat, ..]) => match (lon.as_f64(), lat.as_f64()) {
            (Some(lon), Some(lat)) => Ok(LonLat::new(lon, lat)),
            _ => Err(Error::Geometry(format!("non-numeric position {v}"))),
        },
        _ => Err(Error::Geometry(format!("invalid position {v}"))),
    }
}
