use std::collections::{BTreeMap, BTreeSet};
use std::fs::File;
use std::path::Path;

use super::PopulationTable;
use crate::error::csv_read_error;
use crate::{Error, Result};

/// How zip codes map onto blocks.
#[derive(Debug, Clone, PartialEq, Default)]
pub enum ZipMapping {
    /// The zip values are themselves FIPS prefixes.
    #[default]
    FipsPrefix,
    /// Explicit crosswalk: zip -> FIPS entries. Each entry matches every
    /// block whose FIPS starts with it, so tract- or block-group-level
    /// crosswalks work unchanged.
    Crosswalk(BTreeMap<String, Vec<String>>),
}

#[derive(Debug, Clone, PartialEq, Default)]
pub enum RegionFilter {
    #[default]
    All,
    Zip {
        zips: Vec<String>,
        mapping: ZipMapping,
    },
    Blocks(Vec<String>),
}

impl RegionFilter {
    /// Blocks of `table` selected by this filter. Empty selections are errors.
    pub fn resolve(&self, table: &PopulationTable) -> Result<BTreeSet<String>> {
        let selected: BTreeSet<String> = match self {
            RegionFilter::All => table.fips().map(str::to_owned).collect(),
            RegionFilter::Blocks(list) => {
                let mut set = BTreeSet::new();
                for fips in list {
                    if !table.contains(fips) {
                        return Err(Error::Invalid(format!(
                            "block {fips} is not in the population table"
                        )));
                    }
                    set.insert(fips.clone());
                }
                set
            }
            RegionFilter::Zip { zips, mapping } => {
                let mut prefixes = Vec::new();
                for zip in zips {
                    match mapping {
                        ZipMapping::FipsPrefix => prefixes.push(zip.as_str()),
                        ZipMapping::Crosswalk(cw) => {
                            let entries = cw.get(zip).ok_or_else(|| {
                                Error::Invalid(format!("zip {zip} is not in the crosswalk"))
                            })?;
                            prefixes.extend(entries.iter().map(String::as_str));
                        }
                    }
                }
                table
                    .fips()
                    .filter(|f| prefixes.iter().any(|p| f.starts_with(p)))
                    .map(str::to_owned)
                    .collect()
            }
        };
        if selected.is_empty() {
            return Err(Error::EmptyDistribution(format!(
                "region filter {self:?} selects no blocks"
            )));
        }
        Ok(selected)
    }
}

/// Reads a `zip,fips` crosswalk.
pub fn load_crosswalk(path: &Path) -> Result<ZipMapping> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(file);
    let headers = rdr.headers().map_err(|e| csv_read_error(path, e))?.clone();
    let col = |name: &str| {
        headers.iter().position(|h| h == name).ok_or_else(|| {
            Error::Schema(format!("{}: missing column '{name}'", path.display()))
        })
    };
    let (zip_col, fips_col) = (col("zip")?, col("fips")?);
    let mut map: BTreeMap<String, Vec<String>> = BTreeMap::new();
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(|e| csv_read_error(path, e))?;
        let (zip, fips) = (rec.get(zip_col).unwrap_or(""), rec.get(fips_col).unwrap_or(""));
        if zip.is_empty() || fips.is_empty() {
            return Err(Error::Parse {
                row: i + 2,
                message: format!("{}: empty zip or fips", path.display()),
            });
        }
        map.entry(zip.to_owned()).or_default().push(fips.to_owned());
    }
    Ok(ZipMapping::Crosswalk(map))
}
