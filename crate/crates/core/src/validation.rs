//! Compares a generated dataset with the statistics it was drawn from.
//!
//! Two properties are checked: the distribution over groups (named after
//! the group attribute, e.g. `race`) and the
//! distribution over blocks (FIPS order, aggregated in runs of `m`). Each
//! is normalised on both sides and compared with K-S and Welch t.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::ingest::{PopulationTable, RegionFilter};
use crate::sampler::DatasetRow;
use crate::stats::{
    aggregate_blocks, default_aggregation, ks_test, summary, t_test, DistributionVector, Summary,
    TestResult,
};
use crate::{Error, Result};

pub const DEFAULT_ALPHA: f64 = 0.05;
/// Lower bound on aggregated block labels for the default `m`.
pub const MIN_BLOCK_LABELS: usize = 10;

#[derive(Debug, Clone)]
pub struct ValidationConfig {
    pub alpha: f64,
    /// Block aggregation width; `None` picks one from the dataset size.
    pub agg_m: Option<usize>,
    pub region: RegionFilter,
    pub groups: Option<Vec<String>>,
}

impl Default for ValidationConfig {
    fn default() -> Self {
        Self {
            alpha: DEFAULT_ALPHA,
            agg_m: None,
            region: RegionFilter::All,
            groups: None,
        }
    }
}

/// Dataset row counts per block and group.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct DatasetCounts {
    pub n: u64,
    pub cells: BTreeMap<String, BTreeMap<String, u64>>,
}

impl DatasetCounts {
    pub fn add(&mut self, fips: &str, group: &str) {
        self.n += 1;
        let row = match self.cells.get_mut(fips) {
            Some(r) => r,
            None => self.cells.entry(fips.to_owned()).or_default(),
        };
        match row.get_mut(group) {
            Some(c) => *c += 1,
            None => {
                row.insert(group.to_owned(), 1);
            }
        }
    }

    pub fn from_rows(rows: impl IntoIterator<Item = Result<DatasetRow>>) -> Result<Self> {
        let mut c = Self::default();
        for r in rows {
            let r = r?;
            c.add(&r.fips, &r.group);
        }
        Ok(c)
    }

    pub fn count(&self, fips: &str, group: &str) -> u64 {
        self.cells
            .get(fips)
            .and_then(|r| r.get(group))
            .copied()
            .unwrap_or(0)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TestOutcome {
    pub property: String,
    pub test: String,
    pub statistic: Option<f64>,
    pub p_value: Option<f64>,
    /// `None` when the test is undefined for this input.
    pub pass: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl TestOutcome {
    fn from_result(property: &str, test: &str, r: Result<TestResult>, alpha: f64) -> Result<Self> {
        match r {
            Ok(r) => Ok(Self {
                property: property.to_owned(),
                test: test.to_owned(),
                statistic: Some(r.statistic),
                p_value: Some(r.p_value),
                pass: Some(r.passes(alpha)),
                note: None,
            }),
            Err(Error::UndefinedStatistic(msg)) => Ok(Self {
                property: property.to_owned(),
                test: test.to_owned(),
                statistic: None,
                p_value: None,
                pass: None,
                note: Some(msg),
            }),
            Err(e) => Err(e),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PropertySummary {
    pub property: String,
    pub labels: usize,
    pub expected: Summary,
    pub observed: Summary,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationReport {
    pub n: u64,
    pub alpha: f64,
    pub agg_m: usize,
    /// Rows outside the selected region or groups.
    pub excluded: u64,
    pub summaries: Vec<PropertySummary>,
    pub tests: Vec<TestOutcome>,
    pub all_pass: bool,
}

/// Default block aggregation: the size schedule, narrowed so that at least
/// [`MIN_BLOCK_LABELS`] labels remain when there are enough blocks.
pub fn choose_aggregation(n: u64, blocks: usize) -> usize {
    default_aggregation(n).min((blocks / MIN_BLOCK_LABELS).max(1))
}

fn compare(
    property: &str,
    expected: DistributionVector,
    observed: DistributionVector,
    alpha: f64,
    tests: &mut Vec<TestOutcome>,
) -> Result<PropertySummary> {
    let expected = expected.normalize()?;
    let observed = observed.normalize().map_err(|_| {
        Error::EmptyDistribution(format!("dataset has no rows for the {property} property"))
    })?;
    tests.push(TestOutcome::from_result(property, "ks", ks_test(&expected, &observed), alpha)?);
    tests.push(TestOutcome::from_result(
        property,
        "welch_t",
        t_test(expected.values(), observed.values()),
        alpha,
    )?);
    Ok(PropertySummary {
        property: property.to_owned(),
        labels: expected.len(),
        expected: summary(expected.values()).expect("non-empty"),
        observed: summary(observed.values()).expect("non-empty"),
    })
}

pub fn validate(
    counts: &DatasetCounts,
    table: &PopulationTable,
    config: &ValidationConfig,
) -> Result<ValidationReport> {
    if !(0.0..1.0).contains(&config.alpha) {
        return Err(Error::Invalid(format!("alpha {} is outside [0, 1)", config.alpha)));
    }
    let schema = table.schema();
    let group_idx = match &config.groups {
        Some(g) => schema.resolve_groups(g)?,
        None => (0..schema.len()).collect(),
    };
    let blocks = config.region.resolve(table)?;
    for (fips, row) in &counts.cells {
        if !table.contains(fips) {
            return Err(Error::Invalid(format!("dataset block {fips} is not in the statistics")));
        }
        if let Some(g) = row.keys().find(|g| schema.index_of(g).is_none()) {
            return Err(Error::Invalid(format!("dataset group '{g}' is not in the statistics")));
        }
    }

    let labels: Vec<&str> = group_idx.iter().map(|&i| schema.groups()[i].as_str()).collect();
    let block_labels: Vec<&str> = blocks.iter().map(String::as_str).collect();
    let mut expected_groups = vec![0u64; labels.len()];
    let mut observed_groups = vec![0u64; labels.len()];
    let mut expected_blocks = vec![0u64; block_labels.len()];
    let mut observed_blocks = vec![0u64; block_labels.len()];
    for (b, fips) in block_labels.iter().enumerate() {
        let row = table.get(fips).expect("resolved block");
        for (k, &g) in group_idx.iter().enumerate() {
            let obs = counts.count(fips, labels[k]);
            expected_groups[k] += row[g];
            observed_groups[k] += obs;
            expected_blocks[b] += row[g];
            observed_blocks[b] += obs;
        }
    }
    let excluded = counts.n - observed_groups.iter().sum::<u64>();

    let m = config
        .agg_m
        .unwrap_or_else(|| choose_aggregation(counts.n, block_labels.len()));
    if m == 0 {
        return Err(Error::Invalid("aggregation width m must be at least 1".into()));
    }

    let mut tests = Vec::new();
    let mut summaries = Vec::new();
    summaries.push(compare(
        schema.attribute_name(),
        DistributionVector::from_counts(labels.iter().copied(), &expected_groups)?,
        DistributionVector::from_counts(labels.iter().copied(), &observed_groups)?,
        config.alpha,
        &mut tests,
    )?);
    let bl = block_labels.iter().copied();
    summaries.push(compare(
        "block",
        aggregate_blocks(&DistributionVector::from_counts(bl.clone(), &expected_blocks)?, m),
        aggregate_blocks(&DistributionVector::from_counts(bl, &observed_blocks)?, m),
        config.alpha,
        &mut tests,
    )?);
    let all_pass = tests.iter().all(|t| t.pass != Some(false));
    Ok(ValidationReport {
        n: counts.n,
        alpha: config.alpha,
        agg_m: m,
        excluded,
        summaries,
        tests,
        all_pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ingest::DemographicSchema;

    fn table() -> PopulationTable {
        let mut t = PopulationTable::new(DemographicSchema::new("race", ["A", "B", "C"]).unwrap());
        for i in 0..40u64 {
            t.insert(format!("b{i:03}"), vec![10 + i, 5 + (i % 7), 3]).unwrap();
        }
        t
    }

    fn exact_counts(t: &PopulationTable, scale: u64) -> DatasetCounts {
        let mut c = DatasetCounts::default();
        for (fips, row) in t.iter() {
            for (g, &k) in t.schema().groups().iter().zip(row) {
                for _ in 0..k * scale {
                    c.add(fips, g);
                }
            }
        }
        c
    }

    #[test]
    fn exact_reproduction_passes() {
        let t = table();
        let r = validate(&exact_counts(&t, 3), &t, &ValidationConfig::default()).unwrap();
        assert!(r.all_pass, "{r:?}");
        let ks: Vec<_> = r.tests.iter().filter(|t| t.test == "ks").collect();
        assert_eq!(ks.len(), 2);
        assert!(ks.iter().all(|t| t.statistic.unwrap() < 1e-12));
        assert_eq!(r.excluded, 0);
    }

    #[test]
    fn perturbed_groups_fail() {
        // K-S sizes are label counts, so a handful of groups cannot reject
        let groups: Vec<String> = (0..12).map(|g| format!("g{g}")).collect();
        let mut t = PopulationTable::new(DemographicSchema::new("race", groups.clone()).unwrap());
        for i in 0..30u64 {
            t.insert(format!("b{i:03}"), (0..12).map(|g| 5 + (i + g) % 4).collect()).unwrap();
        }
        let mut c = DatasetCounts::default();
        for (fips, _) in t.iter() {
            for _ in 0..50 {
                c.add(fips, "g11");
            }
        }
        let r = validate(&c, &t, &ValidationConfig::default()).unwrap();
        assert!(!r.all_pass);
        let race_ks = r.tests.iter().find(|t| t.property == "race" && t.test == "ks").unwrap();
        assert_eq!(race_ks.pass, Some(false));
        let block_ks = r.tests.iter().find(|t| t.property == "block" && t.test == "ks").unwrap();
        assert_eq!(block_ks.pass, Some(true));
    }

    #[test]
    fn aggregation_and_choice() {
        assert_eq!(choose_aggregation(50_000, 40), 4);
        assert_eq!(choose_aggregation(20_000_000, 100_000), 5);
        assert_eq!(choose_aggregation(10, 3), 1);
        let t = table();
        let cfg = ValidationConfig {
            agg_m: Some(1000),
            ..Default::default()
        };
        let r = validate(&exact_counts(&t, 1), &t, &cfg).unwrap();
        assert_eq!(r.agg_m, 1000);
        let block_t = r.tests.iter().find(|t| t.property == "block" && t.test == "welch_t").unwrap();
        assert_eq!(block_t.pass, None);
        assert!(r.all_pass);
    }

    #[test]
    fn restrictions_and_unknowns() {
        let t = table();
        let c = exact_counts(&t, 1);
        let cfg = ValidationConfig {
            groups: Some(vec!["A".into(), "B".into()]),
            region: RegionFilter::Blocks((0..20).map(|i| format!("b{i:03}")).collect()),
            ..Default::default()
        };
        let r = validate(&c, &t, &cfg).unwrap();
        assert!(r.excluded > 0);
        assert_eq!(r.summaries[0].labels, 2);

        let mut bad = DatasetCounts::default();
        bad.add("zzz", "A");
        assert!(validate(&bad, &t, &ValidationConfig::default()).is_err());
        let mut bad = DatasetCounts::default();
        bad.add("b000", "Q");
        assert!(validate(&bad, &t, &ValidationConfig::default()).is_err());
        let cfg = ValidationConfig {
            alpha: 1.5,
            ..Default::default()
        };
        assert!(validate(&c, &t, &cfg).is_err());
    }

    #[test]
    fn report_serialises() {
        let t = table();
        let r = validate(&exact_counts(&t, 1), &t, &ValidationConfig::default()).unwrap();
        let v = serde_json::to_value(&r).unwrap();
        assert_eq!(v["tests"].as_array().unwrap().len(), 4);
        assert_eq!(v["all_pass"], true);
    }
}
