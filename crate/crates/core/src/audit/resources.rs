use std::fs::File;
use std::path::Path;

use serde_json::Value;

use crate::error::csv_read_error;
use crate::geometry::{LonLat, Polygon, PolygonPart};
use crate::ingest::{parse_polygonal, parse_position};
use crate::{Error, Result};

/// Points of one resource type.
#[derive(Debug, Clone, PartialEq)]
pub struct ResourceSet {
    label: String,
    points: Vec<LonLat>,
    names: Vec<Option<String>>,
}

impl ResourceSet {
    pub fn new(label: impl Into<String>, points: Vec<LonLat>) -> Result<Self> {
        let names = vec![None; points.len()];
        Self::with_names(label, points, names)
    }

    pub fn with_names(
        label: impl Into<String>,
        points: Vec<LonLat>,
        names: Vec<Option<String>>,
    ) -> Result<Self> {
        let label = label.into();
        if points.is_empty() {
            return Err(Error::Invalid(format!("resource set '{label}' is empty")));
        }
        if let Some(p) = points.iter().find(|p| !p.lon.is_finite() || !p.lat.is_finite()) {
            return Err(Error::Invalid(format!(
                "resource set '{label}' has a non-finite point {p:?}"
            )));
        }
        assert_eq!(points.len(), names.len());
        Ok(Self {
            label,
            points,
            names,
        })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn points(&self) -> &[LonLat] {
        &self.points
    }

    pub fn name(&self, i: usize) -> Option<&str> {
        self.names[i].as_deref()
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

fn is_geojson(path: &Path) -> bool {
    matches!(
        path.extension().and_then(|e| e.to_str()).map(str::to_ascii_lowercase).as_deref(),
        Some("json" | "geojson")
    )
}

/// Loads resources from a `lon,lat[,name]` CSV or a GeoJSON file of
/// Point / MultiPoint features, chosen by file extension.
pub fn load_resources(label: &str, path: &Path) -> Result<ResourceSet> {
    if is_geojson(path) {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        return parse_resources_geojson(label, &text)
            .map_err(|e| Error::Invalid(format!("{}: {e}", path.display())));
    }
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(file);
    let headers = rdr.headers().map_err(|e| csv_read_error(path, e))?.clone();
    let col = |name: &str| headers.iter().position(|h| h.eq_ignore_ascii_case(name));
    let (lon_c, lat_c) = match (col("lon"), col("lat")) {
        (Some(a), Some(b)) => (a, b),
        _ => {
            return Err(Error::Schema(format!(
                "{}: resource CSV needs 'lon' and 'lat' columns",
                path.display()
            )))
        }
    };
    let name_c = col("name");
    let (mut points, mut names) = (Vec::new(), Vec::new());
    for rec in rdr.records() {
        let rec = rec.map_err(|e| csv_read_error(path, e))?;
        let row = rec.position().map(|p| p.line() as usize).unwrap_or_default();
        let num = |c: usize| {
            let raw = rec.get(c).unwrap_or("");
            raw.parse::<f64>().ok().filter(|v| v.is_finite()).ok_or_else(|| Error::Parse {
                row,
                message: format!("{}: bad coordinate '{raw}'", path.display()),
            })
        };
        points.push(LonLat::new(num(lon_c)?, num(lat_c)?));
        names.push(
            name_c
                .and_then(|c| rec.get(c))
                .filter(|s| !s.is_empty())
                .map(str::to_owned),
        );
    }
    ResourceSet::with_names(label, points, names)
}

pub fn parse_resources_geojson(label: &str, text: &str) -> Result<ResourceSet> {
    let root: Value =
        serde_json::from_str(text).map_err(|e| Error::Geometry(format!("invalid GeoJSON: {e}")))?;
    let features: Vec<&Value> = match root.get("type").and_then(Value::as_str) {
        Some("FeatureCollection") => root
            .get("features")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Geometry("FeatureCollection without features".into()))?
            .iter()
            .collect(),
        Some("Feature") => vec![&root],
        _ => return Err(Error::Geometry("expected a Feature or FeatureCollection".into())),
    };
    let (mut points, mut names) = (Vec::new(), Vec::new());
    for (i, f) in features.iter().enumerate() {
        let name = f
            .get("properties")
            .and_then(|p| p.get("name"))
            .and_then(Value::as_str)
            .map(str::to_owned);
        let geom = f.get("geometry").unwrap_or(&Value::Null);
        let coords = geom.get("coordinates").unwrap_or(&Value::Null);
        match geom.get("type").and_then(Value::as_str) {
            Some("Point") => {
                points.push(parse_position(coords)?);
                names.push(name);
            }
            Some("MultiPoint") => {
                for c in coords.as_array().into_iter().flatten() {
                    points.push(parse_position(c)?);
                    names.push(name.clone());
                }
            }
            other => {
                return Err(Error::Geometry(format!(
                    "feature {i}: expected Point or MultiPoint, got {}",
                    other.unwrap_or("null")
                )))
            }
        }
    }
    ResourceSet::with_names(label, points, names)
}

/// Audit boundary: every polygon in a GeoJSON geometry, Feature or
/// FeatureCollection, taken together.
pub fn load_boundary(path: &Path) -> Result<Polygon> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_boundary(&text).map_err(|e| Error::Invalid(format!("{}: {e}", path.display())))
}

pub fn parse_boundary(text: &str) -> Result<Polygon> {
    let root: Value =
        serde_json::from_str(text).map_err(|e| Error::Geometry(format!("invalid GeoJSON: {e}")))?;
    let geometries: Vec<&Value> = match root.get("type").and_then(Value::as_str) {
        Some("FeatureCollection") => root
            .get("features")
            .and_then(Value::as_array)
            .into_iter()
            .flatten()
            .filter_map(|f| f.get("geometry"))
            .collect(),
        Some("Feature") => root.get("geometry").into_iter().collect(),
        _ => vec![&root],
    };
    let mut parts: Vec<PolygonPart> = Vec::new();
    for g in geometries {
        parts.extend(parse_polygonal(g)?.parts().iter().cloned());
    }
    Polygon::new(parts)
}
