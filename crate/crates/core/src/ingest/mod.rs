//! Loading and joining the two input families: per-block demographic
//! counts (CSV) and block boundaries (GeoJSON).

mod geodata;
mod population;
mod region;

pub use geodata::{
    load_geodata, parse_geodata, BlockGeometry, BlockGeometryIndex, DEFAULT_FIPS_PROPERTY,
    DEFAULT_GRID_CELLS,
};
pub(crate) use geodata::{parse_polygonal, parse_position};
pub use population::{
    load_population_stats, load_population_stats_inferred, read_population_stats,
    write_population_stats, DemographicSchema, PopulationTable,
};
pub use region::{load_crosswalk, RegionFilter, ZipMapping};

use log::warn;
use serde::Serialize;

use crate::geometry::Polygon;
use crate::{Error, Result};

/// FIPS keys present in only one of the two inputs.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct JoinReport {
    /// Zero-population blocks without geometry; harmless, never sampled.
    pub stats_only: Vec<String>,
    /// Blocks with geometry but no statistics; kept, never sampled.
    pub geometry_only: Vec<String>,
}

impl JoinReport {
    pub fn is_empty(&self) -> bool {
        self.stats_only.is_empty() && self.geometry_only.is_empty()
    }
}

/// One row of the joined model, in FIPS order.
#[derive(Debug, Clone)]
pub struct ModelBlock {
    pub fips: String,
    pub counts: Vec<u64>,
    /// Index into the geometry index; `None` only for zero-population blocks.
    geometry: Option<usize>,
}

impl ModelBlock {
    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }
}

/// Statistics and geometry joined on block FIPS. Immutable after
/// construction.
#[derive(Debug, Clone)]
pub struct PopulationModel {
    table: PopulationTable,
    geo: BlockGeometryIndex,
    blocks: Vec<ModelBlock>,
    report: JoinReport,
}

/// Joins statistics and geometry. Populated blocks without a boundary abort
/// the join, since dropping them would bias every block CDF.
pub fn join_inputs(stats: PopulationTable, geo: BlockGeometryIndex) -> Result<PopulationModel> {
    let geo_pos: std::collections::HashMap<&str, usize> = geo
        .iter()
        .enumerate()
        .map(|(i, e)| (e.fips.as_str(), i))
        .collect();

    let mut missing = Vec::new();
    let mut report = JoinReport::default();
    let mut blocks = Vec::with_capacity(stats.len());
    for (fips, counts) in stats.iter() {
        let geometry = geo_pos.get(fips).copied();
        if geometry.is_none() {
            if counts.iter().any(|&c| c > 0) {
                missing.push(fips.to_owned());
            } else {
                report.stats_only.push(fips.to_owned());
            }
        }
        blocks.push(ModelBlock {
            fips: fips.to_owned(),
            counts: counts.to_vec(),
            geometry,
        });
    }
    if !missing.is_empty() {
        return Err(Error::Join(missing));
    }
    report.geometry_only = geo
        .iter()
        .filter(|e| !stats.contains(&e.fips))
        .map(|e| e.fips.clone())
        .collect();
    if !report.stats_only.is_empty() {
        warn!(
            "{} zero-population block(s) have no geometry and will never be sampled",
            report.stats_only.len()
        );
    }
    if !report.geometry_only.is_empty() {
        warn!(
            "{} block(s) have geometry but no statistics and will never be sampled",
            report.geometry_only.len()
        );
    }
    Ok(PopulationModel {
        table: stats,
        geo,
        blocks,
        report,
    })
}

impl PopulationModel {
    pub fn table(&self) -> &PopulationTable {
        &self.table
    }

    pub fn schema(&self) -> &DemographicSchema {
        self.table.schema()
    }

    pub fn geometry(&self) -> &BlockGeometryIndex {
        &self.geo
    }

    pub fn report(&self) -> &JoinReport {
        &self.report
    }

    /// Blocks with statistics, in FIPS order.
    pub fn blocks(&self) -> &[ModelBlock] {
        &self.blocks
    }

    pub fn block_index(&self, fips: &str) -> Option<usize> {
        self.blocks
            .binary_search_by(|b| b.fips.as_str().cmp(fips))
            .ok()
    }

    pub fn polygon(&self, block: usize) -> Option<&Polygon> {
        self.blocks[block]
            .geometry
            .map(|g| &self.geo.entry(g).polygon)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn schema() -> DemographicSchema {
        DemographicSchema::new("race", ["A", "B"]).unwrap()
    }

    fn geo(keys: &[&str]) -> BlockGeometryIndex {
        BlockGeometryIndex::new(keys.iter().enumerate().map(|(i, k)| {
            let x = i as f64;
            (
                k.to_string(),
                Polygon::from_exterior([(x, 0.0), (x + 1.0, 0.0), (x + 1.0, 1.0), (x, 1.0)])
                    .unwrap(),
            )
        }))
        .unwrap()
    }

    fn table(rows: &[(&str, [u64; 2])]) -> PopulationTable {
        let mut t = PopulationTable::new(schema());
        for (k, c) in rows {
            t.insert(*k, c.to_vec()).unwrap();
        }
        t
    }

    #[test]
    fn identical_keys_give_empty_report() {
        let m = join_inputs(table(&[("a", [1, 2]), ("b", [0, 3])]), geo(&["a", "b"])).unwrap();
        assert!(m.report().is_empty());
        assert!(m.polygon(0).is_some());
    }

    #[test]
    fn zero_population_extra_block_is_a_warning() {
        let m = join_inputs(table(&[("a", [1, 2]), ("z", [0, 0])]), geo(&["a"])).unwrap();
        assert_eq!(m.report().stats_only, vec!["z".to_string()]);
        assert!(m.polygon(m.block_index("z").unwrap()).is_none());
    }

    #[test]
    fn populated_block_without_geometry_fails() {
        match join_inputs(table(&[("a", [1, 2]), ("p", [10, 0])]), geo(&["a"])) {
            Err(Error::Join(list)) => assert_eq!(list, vec!["p".to_string()]),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn geometry_only_blocks_are_reported() {
        let m = join_inputs(table(&[("a", [1, 2])]), geo(&["a", "g"])).unwrap();
        assert_eq!(m.report().geometry_only, vec!["g".to_string()]);
    }
}
