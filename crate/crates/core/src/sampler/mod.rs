//! Inverse-CDF and rejection sampling of synthetic individuals.
//!
//! A draw picks a block from the population-weighted block CDF, then a
//! group from that block's group CDF, then a location uniformly inside the
//! block polygon. Group and region filters restrict and re-normalise both
//! CDFs.

mod augment;
mod cdf;
mod dataset;
mod location;
mod rng;

pub use augment::{augment, load_attribute_spec, AttributeKind, AttributeSpec, AttributeValue};
pub use cdf::{build_cdf, CdfIndex};
pub use dataset::{
    fill_block, generate_dataset, read_dataset, tally_blocks, DatasetReader, DatasetRow,
    DatasetSummary, DatasetWriter, GroupCount, RecordSink,
};
pub use location::{sample_location, sample_location_counted, DEFAULT_MAX_ATTEMPTS};
pub use rng::{RngStream, MASTER_STREAM};

use crate::geometry::LonLat;
use crate::ingest::{PopulationModel, RegionFilter};
use crate::{Error, Result};

/// One synthetic individual.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleRecord {
    pub lon: f64,
    pub lat: f64,
    pub block_fips: String,
    pub group: String,
    pub attributes: Vec<(String, AttributeValue)>,
}

impl SampleRecord {
    pub fn location(&self) -> LonLat {
        LonLat::new(self.lon, self.lat)
    }
}

/// Block and group CDFs for one (region, group set) restriction of a model.
#[derive(Debug, Clone)]
pub struct Sampler<'m> {
    model: &'m PopulationModel,
    groups: Vec<usize>,
    block_cdf: CdfIndex<usize>,
    group_cdfs: Vec<Option<CdfIndex<usize>>>,
    max_attempts: usize,
}

impl<'m> Sampler<'m> {
    /// `groups = None` keeps every schema group.
    pub fn new<S: AsRef<str>>(
        model: &'m PopulationModel,
        filter: &RegionFilter,
        groups: Option<&[S]>,
    ) -> Result<Self> {
        let schema = model.schema();
        let groups = match groups {
            Some(labels) => schema.resolve_groups(labels)?,
            None => (0..schema.len()).collect(),
        };
        let region = filter.resolve(model.table())?;

        let mut group_cdfs = vec![None; model.blocks().len()];
        let mut weights = Vec::with_capacity(region.len());
        for (i, block) in model.blocks().iter().enumerate() {
            if !region.contains(&block.fips) || model.polygon(i).is_none() {
                continue;
            }
            let restricted: u64 = groups.iter().map(|&g| block.counts[g]).sum();
            weights.push((i, restricted as f64));
            if restricted > 0 {
                group_cdfs[i] = Some(build_cdf(
                    groups.iter().map(|&g| (g, block.counts[g] as f64)),
                )?);
            }
        }
        let block_cdf = build_cdf(weights).map_err(|e| match e {
            Error::EmptyDistribution(_) => Error::EmptyDistribution(format!(
                "filtered population is zero (region {filter:?}, {} group(s))",
                groups.len()
            )),
            other => other,
        })?;
        Ok(Self {
            model,
            groups,
            block_cdf,
            group_cdfs,
            max_attempts: DEFAULT_MAX_ATTEMPTS,
        })
    }

    pub fn with_max_attempts(mut self, max_attempts: usize) -> Self {
        self.max_attempts = max_attempts.max(1);
        self
    }

    pub fn model(&self) -> &'m PopulationModel {
        self.model
    }

    /// Schema indices of the groups this sampler draws from.
    pub fn groups(&self) -> &[usize] {
        &self.groups
    }

    /// CDF over model block indices (restricted weights).
    pub fn block_cdf(&self) -> &CdfIndex<usize> {
        &self.block_cdf
    }

    pub fn group_cdf(&self, block: usize) -> Option<&CdfIndex<usize>> {
        self.group_cdfs.get(block).and_then(Option::as_ref)
    }

    pub fn max_attempts(&self) -> usize {
        self.max_attempts
    }

    /// Model block index.
    pub fn draw_block(&self, rng: &mut RngStream) -> usize {
        *self.block_cdf.draw(rng)
    }

    /// Schema group index for a block drawn by this sampler.
    pub fn draw_group(&self, block: usize, rng: &mut RngStream) -> Result<usize> {
        self.group_cdf(block)
            .map(|cdf| *cdf.draw(rng))
            .ok_or_else(|| {
                Error::EmptyDistribution(format!(
                    "block {} has no population in the selected groups",
                    self.model.blocks()[block].fips
                ))
            })
    }

    pub fn draw_location(&self, block: usize, rng: &mut RngStream) -> Result<LonLat> {
        let fips = &self.model.blocks()[block].fips;
        let poly = self
            .model
            .polygon(block)
            .ok_or_else(|| Error::Geometry(format!("block {fips} has no geometry")))?;
        sample_location(poly, fips, rng, self.max_attempts)
    }

    /// One record: block, then group, then location, all from `rng`.
    pub fn sample(&self, rng: &mut RngStream) -> Result<SampleRecord> {
        let block = self.draw_block(rng);
        let group = self.draw_group(block, rng)?;
        let p = self.draw_location(block, rng)?;
        Ok(self.record(block, group, p))
    }

    fn record(&self, block: usize, group: usize, p: LonLat) -> SampleRecord {
        SampleRecord {
            lon: p.lon,
            lat: p.lat,
            block_fips: self.model.blocks()[block].fips.clone(),
            group: self.model.schema().groups()[group].clone(),
            attributes: Vec::new(),
        }
    }
}

/// One individual from the whole population.
pub fn get_sample(model: &PopulationModel, rng: &mut RngStream) -> Result<SampleRecord> {
    Sampler::new::<&str>(model, &RegionFilter::All, None)?.sample(rng)
}

/// One individual from a zip code or block list.
pub fn get_sample_region(
    model: &PopulationModel,
    filter: &RegionFilter,
    rng: &mut RngStream,
) -> Result<SampleRecord> {
    Sampler::new::<&str>(model, filter, None)?.sample(rng)
}

/// One individual from the given demographic groups.
pub fn get_sample_group<S: AsRef<str>>(
    model: &PopulationModel,
    groups: &[S],
    rng: &mut RngStream,
) -> Result<SampleRecord> {
    Sampler::new(model, &RegionFilter::All, Some(groups))?.sample(rng)
}

/// One individual at a fixed location: the containing block is located
/// (first match in FIPS order) and only the group is drawn.
pub fn get_sample_at(
    model: &PopulationModel,
    lon: f64,
    lat: f64,
    rng: &mut RngStream,
) -> Result<SampleRecord> {
    let p = LonLat::new(lon, lat);
    let geo = model
        .geometry()
        .locate(p)
        .ok_or(Error::NotFound { lon, lat })?;
    let block = model.block_index(&geo.fips).ok_or_else(|| {
        Error::EmptyDistribution(format!("block {} has no population statistics", geo.fips))
    })?;
    let counts = &model.blocks()[block].counts;
    let cdf = build_cdf(counts.iter().enumerate().map(|(g, &c)| (g, c as f64))).map_err(
        |_| Error::EmptyDistribution(format!("block {} has zero population", geo.fips)),
    )?;
    let group = *cdf.draw(rng);
    Ok(SampleRecord {
        lon,
        lat,
        block_fips: geo.fips.clone(),
        group: model.schema().groups()[group].clone(),
        attributes: Vec::new(),
    })
}
