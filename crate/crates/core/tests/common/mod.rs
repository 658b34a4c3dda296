#![allow(dead_code)]

pub mod stats_data;

use popsynth::geometry::Polygon;
use popsynth::ingest::{join_inputs, BlockGeometryIndex, DemographicSchema, PopulationModel, PopulationTable};

/// (lon, lat, easting, northing) from PROJ, see `oracles/projection.py`.
pub const UTM16N_GOLDEN: [(f64, f64, f64, f64); 10] = [
    (-87.6298, 41.8781, 447741.916717, 4636433.683864),
    (-87.9073, 41.9742, 424828.889789, 4647309.759144),
    (-88.2434, 40.1164, 394042.756070, 4441417.481868),
    (-89.6501, 39.7817, 273054.731983, 4406888.121052),
    (-87.5, 37.0, 455511.809285, 4094989.194183),
    (-84.5, 45.0, 697038.328159, 4985991.017242),
    (-89.9, 42.5, 261709.183570, 4709369.048694),
    (-86.0, 30.0, 596450.152567, 3319206.222661),
    (-87.0, 48.0, 500000.000000, 5316300.224329),
    (-85.3, 35.0, 655135.664579, 3874363.370287),
];

pub const CELL: f64 = 0.005;

pub fn fips(i: usize) -> String {
    format!("17031{i:06}")
}

/// Square cell `i` of a grid `cols` wide, anchored in Chicago.
pub fn cell(i: usize, cols: usize) -> Polygon {
    let x = -87.9 + CELL * (i % cols) as f64;
    let y = 41.7 + CELL * (i / cols) as f64;
    Polygon::from_exterior([(x, y), (x + CELL, y), (x + CELL, y + CELL), (x, y + CELL)]).unwrap()
}

pub fn grid_table(groups: &[String], counts: &[Vec<u64>]) -> PopulationTable {
    let mut t = PopulationTable::new(DemographicSchema::new("race", groups.iter().cloned()).unwrap());
    for (i, c) in counts.iter().enumerate() {
        t.insert(fips(i), c.clone()).unwrap();
    }
    t
}

pub fn grid_model(table: PopulationTable, cols: usize) -> PopulationModel {
    let geo = BlockGeometryIndex::new((0..table.len()).map(|i| (fips(i), cell(i, cols)))).unwrap();
    join_inputs(table, geo).unwrap()
}

/// Small deterministic generator for fixture counts.
pub struct Lcg(pub u64);

impl Lcg {
    pub fn next(&mut self) -> u64 {
        self.0 = self.0.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        self.0 >> 33
    }

    pub fn below(&mut self, n: u64) -> u64 {
        self.next() % n
    }

    pub fn unit(&mut self) -> f64 {
        self.next() as f64 / (1u64 << 31) as f64
    }
}

/// Block-by-group counts with one dominant group holding roughly a fifth of
/// the population, as in the end-to-end fixture.
pub fn skewed_counts(blocks: usize, groups: usize, seed: u64) -> Vec<Vec<u64>> {
    let mut rng = Lcg(seed);
    (0..blocks)
        .map(|_| {
            (0..groups)
                .map(|g| if g == 0 { 20 + rng.below(30) } else { 1 + rng.below(6) })
                .collect()
        })
        .collect()
}
