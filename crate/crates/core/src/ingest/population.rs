use std::collections::{BTreeMap, HashSet};
use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use crate::error::{csv_read_error, csv_write_error};
use crate::{Error, Result};

/// Ordered demographic categories. The order defines every group CDF.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DemographicSchema {
    attribute_name: String,
    group_names: Vec<String>,
}

impl DemographicSchema {
    pub fn new(
        attribute_name: impl Into<String>,
        group_names: impl IntoIterator<Item = impl Into<String>>,
    ) -> Result<Self> {
        let attribute_name = attribute_name.into();
        let group_names: Vec<String> = group_names.into_iter().map(Into::into).collect();
        if group_names.is_empty() {
            return Err(Error::Schema("schema has no groups".into()));
        }
        let mut seen = HashSet::new();
        for g in &group_names {
            if g.is_empty() {
                return Err(Error::Schema("empty group label".into()));
            }
            if !seen.insert(g.as_str()) {
                return Err(Error::Schema(format!("duplicate group label '{g}'")));
            }
        }
        if attribute_name.is_empty() {
            return Err(Error::Schema("empty attribute name".into()));
        }
        Ok(Self {
            attribute_name,
            group_names,
        })
    }

    pub fn attribute_name(&self) -> &str {
        &self.attribute_name
    }

    pub fn groups(&self) -> &[String] {
        &self.group_names
    }

    pub fn len(&self) -> usize {
        self.group_names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.group_names.is_empty()
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.group_names.iter().position(|g| g == label)
    }

    /// Resolves labels to schema indices, sorted and de-duplicated.
    pub fn resolve_groups<S: AsRef<str>>(&self, labels: &[S]) -> Result<Vec<usize>> {
        let mut idx = labels
            .iter()
            .map(|l| {
                self.index_of(l.as_ref())
                    .ok_or_else(|| Error::Schema(format!("unknown group '{}'", l.as_ref())))
            })
            .collect::<Result<Vec<_>>>()?;
        idx.sort_unstable();
        idx.dedup();
        if idx.is_empty() {
            return Err(Error::Schema("group filter is empty".into()));
        }
        Ok(idx)
    }
}

/// Per-block demographic counts keyed by block FIPS.
#[derive(Debug, Clone, PartialEq)]
pub struct PopulationTable {
    schema: DemographicSchema,
    rows: BTreeMap<String, Vec<u64>>,
}

impl PopulationTable {
    pub fn new(schema: DemographicSchema) -> Self {
        Self {
            schema,
            rows: BTreeMap::new(),
        }
    }

    pub fn insert(&mut self, fips: impl Into<String>, counts: Vec<u64>) -> Result<()> {
        let fips = fips.into();
        if fips.is_empty() {
            return Err(Error::Invalid("empty FIPS key".into()));
        }
        if counts.len() != self.schema.len() {
            return Err(Error::Schema(format!(
                "block {fips}: {} counts for {} groups",
                counts.len(),
                self.schema.len()
            )));
        }
        if self.rows.contains_key(&fips) {
            return Err(Error::Invalid(format!("duplicate FIPS {fips}")));
        }
        self.rows.insert(fips, counts);
        Ok(())
    }

    pub fn schema(&self) -> &DemographicSchema {
        &self.schema
    }

    pub fn get(&self, fips: &str) -> Option<&[u64]> {
        self.rows.get(fips).map(Vec::as_slice)
    }

    pub fn contains(&self, fips: &str) -> bool {
        self.rows.contains_key(fips)
    }

    pub fn block_total(&self, fips: &str) -> Option<u64> {
        self.get(fips).map(|c| c.iter().sum())
    }

    /// Rows in FIPS order.
    pub fn iter(&self) -> impl Iterator<Item = (&str, &[u64])> {
        self.rows.iter().map(|(k, v)| (k.as_str(), v.as_slice()))
    }

    pub fn fips(&self) -> impl Iterator<Item = &str> {
        self.rows.keys().map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn total(&self) -> u64 {
        self.rows.values().flatten().sum()
    }

    pub fn group_totals(&self) -> Vec<u64> {
        let mut totals = vec![0; self.schema.len()];
        for counts in self.rows.values() {
            for (t, c) in totals.iter_mut().zip(counts) {
                *t += c;
            }
        }
        totals
    }
}

/// Loads a stats file whose header must contain `fips` and every schema
/// group. Extra columns are ignored.
pub fn load_population_stats(path: &Path, schema: &DemographicSchema) -> Result<PopulationTable> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    read_population_stats(file, schema, path)
}

/// Loads a stats file taking every non-`fips` column as a group, in file order.
pub fn load_population_stats_inferred(path: &Path, attribute_name: &str) -> Result<PopulationTable> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(file);
    let headers = rdr.headers().map_err(|e| csv_read_error(path, e))?.clone();
    if !headers.iter().any(|h| h == "fips") {
        return Err(Error::Schema(format!(
            "{}: missing 'fips' column",
            path.display()
        )));
    }
    let schema = DemographicSchema::new(attribute_name, headers.iter().filter(|h| *h != "fips"))?;
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    read_population_stats(file, &schema, path)
}

pub fn read_population_stats<R: Read>(
    reader: R,
    schema: &DemographicSchema,
    source: &Path,
) -> Result<PopulationTable> {
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(reader);
    let headers = rdr.headers().map_err(|e| csv_read_error(source, e))?.clone();
    let column = |name: &str| {
        headers.iter().position(|h| h == name).ok_or_else(|| {
            Error::Schema(format!("{}: missing column '{name}'", source.display()))
        })
    };
    let fips_col = column("fips")?;
    let group_cols = schema
        .groups()
        .iter()
        .map(|g| column(g))
        .collect::<Result<Vec<_>>>()?;

    let mut table = PopulationTable::new(schema.clone());
    for (i, record) in rdr.records().enumerate() {
        // Header is line 1.
        let row = i + 2;
        let record = record.map_err(|e| csv_read_error(source, e))?;
        let fips = record.get(fips_col).unwrap_or_default();
        if fips.is_empty() {
            return Err(Error::Parse {
                row,
                message: format!("{}: empty fips", source.display()),
            });
        }
        let mut counts = Vec::with_capacity(group_cols.len());
        for (g, &col) in schema.groups().iter().zip(&group_cols) {
            let raw = record.get(col).unwrap_or_default();
            let count = raw.parse::<u64>().map_err(|_| Error::Parse {
                row,
                message: format!(
                    "{}: block {fips}, column '{g}': '{raw}' is not a non-negative integer",
                    source.display()
                ),
            })?;
            counts.push(count);
        }
        if table.contains(fips) {
            return Err(Error::Parse {
                row,
                message: format!("{}: duplicate fips {fips}", source.display()),
            });
        }
        table.insert(fips, counts)?;
    }
    Ok(table)
}

pub fn write_population_stats<W: Write>(table: &PopulationTable, writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    let mut header = vec!["fips"];
    header.extend(table.schema().groups().iter().map(String::as_str));
    w.write_record(&header).map_err(csv_write_error)?;
    for (fips, counts) in table.iter() {
        let mut rec = vec![fips.to_string()];
        rec.extend(counts.iter().map(u64::to_string));
        w.write_record(&rec).map_err(csv_write_error)?;
    }
    w.flush().map_err(Error::Write)?;
    Ok(())
}
