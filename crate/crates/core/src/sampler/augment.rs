use std::collections::BTreeMap;
use std::fmt;
use std::fs::File;
use std::path::Path;

use super::{build_cdf, CdfIndex, RngStream, SampleRecord};
use crate::error::csv_read_error;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub enum AttributeValue {
    Category(String),
    Number(f64),
}

impl fmt::Display for AttributeValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AttributeValue::Category(s) => f.write_str(s),
            AttributeValue::Number(x) => write!(f, "{x}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum AttributeKind {
    /// Per-unit weights over `labels`, drawn by inverse CDF.
    Categorical {
        labels: Vec<String>,
        units: BTreeMap<String, CdfIndex<usize>>,
    },
    /// Per-unit `(mean, stddev)`, drawn from a normal distribution.
    OrdinalNormal { units: BTreeMap<String, (f64, f64)> },
}

/// An extra attribute attached to generated records from unit-level
/// tables. Units are keyed by FIPS or a FIPS prefix (tract, block group);
/// a record uses the longest unit key that prefixes its block FIPS.
#[derive(Debug, Clone, PartialEq)]
pub struct AttributeSpec {
    name: String,
    kind: AttributeKind,
}

impl AttributeSpec {
    pub fn categorical(
        name: impl Into<String>,
        labels: Vec<String>,
        units: impl IntoIterator<Item = (String, Vec<f64>)>,
    ) -> Result<Self> {
        let name = name.into();
        if labels.is_empty() {
            return Err(Error::Augment(format!("attribute {name}: no categories")));
        }
        let mut table = BTreeMap::new();
        for (unit, weights) in units {
            if weights.len() != labels.len() {
                return Err(Error::Augment(format!(
                    "attribute {name}, unit {unit}: {} weights for {} categories",
                    weights.len(),
                    labels.len()
                )));
            }
            let cdf = build_cdf(weights.into_iter().enumerate())
                .map_err(|e| Error::Augment(format!("attribute {name}, unit {unit}: {e}")))?;
            table.insert(unit, cdf);
        }
        Ok(Self {
            name,
            kind: AttributeKind::Categorical {
                labels,
                units: table,
            },
        })
    }

    pub fn ordinal_normal(
        name: impl Into<String>,
        units: impl IntoIterator<Item = (String, f64, f64)>,
    ) -> Result<Self> {
        let name = name.into();
        let mut table = BTreeMap::new();
        for (unit, mean, sd) in units {
            if !mean.is_finite() || !(sd >= 0.0) || !sd.is_finite() {
                return Err(Error::Augment(format!(
                    "attribute {name}, unit {unit}: invalid normal parameters ({mean}, {sd})"
                )));
            }
            table.insert(unit, (mean, sd));
        }
        Ok(Self {
            name,
            kind: AttributeKind::OrdinalNormal { units: table },
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn kind(&self) -> &AttributeKind {
        &self.kind
    }

    fn lookup<'a, V>(table: &'a BTreeMap<String, V>, fips: &str) -> Option<&'a V> {
        (1..=fips.len())
            .rev()
            .filter(|&n| fips.is_char_boundary(n))
            .find_map(|n| table.get(&fips[..n]))
    }

    /// Draws a value for a record in block `fips`.
    pub fn draw(&self, fips: &str, rng: &mut RngStream) -> Result<AttributeValue> {
        let missing = || Error::Augment(format!("attribute {}: no unit covers block {fips}", self.name));
        match &self.kind {
            AttributeKind::Categorical { labels, units } => {
                let cdf = Self::lookup(units, fips).ok_or_else(missing)?;
                Ok(AttributeValue::Category(labels[*cdf.draw(rng)].clone()))
            }
            AttributeKind::OrdinalNormal { units } => {
                let &(mean, sd) = Self::lookup(units, fips).ok_or_else(missing)?;
                Ok(AttributeValue::Number(mean + sd * rng.standard_normal()))
            }
        }
    }
}

/// Adds one attribute to `record`, drawn for the record's block.
pub fn augment(
    mut record: SampleRecord,
    spec: &AttributeSpec,
    rng: &mut RngStream,
) -> Result<SampleRecord> {
    let value = spec.draw(&record.block_fips, rng)?;
    record.attributes.push((spec.name.clone(), value));
    Ok(record)
}

/// Reads an attribute table. A header of exactly `unit,mean,stddev` gives
/// an ordinal-normal attribute; `unit,<label>,...` gives a categorical one.
pub fn load_attribute_spec(path: &Path, name: &str) -> Result<AttributeSpec> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(file);
    let headers = rdr.headers().map_err(|e| csv_read_error(path, e))?.clone();
    if headers.get(0) != Some("unit") || headers.len() < 2 {
        return Err(Error::Schema(format!(
            "{}: attribute table must start with a 'unit' column",
            path.display()
        )));
    }
    let parse = |row: usize, raw: &str| {
        raw.parse::<f64>().map_err(|_| Error::Parse {
            row,
            message: format!("{}: '{raw}' is not a number", path.display()),
        })
    };
    let mut rows = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(|e| csv_read_error(path, e))?;
        let values = rec
            .iter()
            .skip(1)
            .map(|v| parse(i + 2, v))
            .collect::<Result<Vec<_>>>()?;
        rows.push((rec.get(0).unwrap_or_default().to_owned(), values));
    }
    let labels: Vec<String> = headers.iter().skip(1).map(str::to_owned).collect();
    if labels == ["mean", "stddev"] {
        AttributeSpec::ordinal_normal(name, rows.into_iter().map(|(u, v)| (u, v[0], v[1])))
    } else {
        AttributeSpec::categorical(name, labels, rows)
    }
}
