use std::collections::BTreeMap;
use std::fs::File;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::Serialize;

use super::{AttributeSpec, RngStream, SampleRecord, Sampler, MASTER_STREAM};
use crate::error::{csv_read_error, csv_write_error};
use crate::geometry::LonLat;
use crate::{Error, Result};

/// Upper bound on records held in memory between writes.
const BATCH_RECORDS: u64 = 1 << 18;

/// Destination for generated records.
pub trait RecordSink {
    fn write_record(&mut self, record: &SampleRecord) -> Result<()>;
}

impl RecordSink for Vec<SampleRecord> {
    fn write_record(&mut self, record: &SampleRecord) -> Result<()> {
        self.push(record.clone());
        Ok(())
    }
}

/// CSV writer for `lon,lat,fips,<attribute>[,<augmented>...]` with
/// coordinates at seven decimals.
pub struct DatasetWriter<W: Write> {
    inner: csv::Writer<W>,
    columns: usize,
}

impl<W: Write> DatasetWriter<W> {
    pub fn new(writer: W, group_column: &str, augmented: &[&str]) -> Result<Self> {
        let mut inner = csv::Writer::from_writer(writer);
        let mut header = vec!["lon", "lat", "fips", group_column];
        header.extend_from_slice(augmented);
        inner.write_record(&header).map_err(csv_write_error)?;
        Ok(Self {
            inner,
            columns: header.len(),
        })
    }

    pub fn finish(self) -> Result<W> {
        self.inner
            .into_inner()
            .map_err(|e| Error::Write(std::io::Error::other(e.to_string())))
    }
}

impl<W: Write> RecordSink for DatasetWriter<W> {
    fn write_record(&mut self, r: &SampleRecord) -> Result<()> {
        if 4 + r.attributes.len() != self.columns {
            return Err(Error::Invalid(format!(
                "record has {} augmented attribute(s), header expects {}",
                r.attributes.len(),
                self.columns - 4
            )));
        }
        let lon = format!("{:.7}", r.lon);
        let lat = format!("{:.7}", r.lat);
        let extra: Vec<String> = r.attributes.iter().map(|(_, v)| v.to_string()).collect();
        let mut fields: Vec<&str> = vec![&lon, &lat, &r.block_fips, &r.group];
        fields.extend(extra.iter().map(String::as_str));
        self.inner.write_record(&fields).map_err(csv_write_error)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GroupCount {
    pub group: String,
    pub count: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DatasetSummary {
    pub n: u64,
    pub seed: u64,
    /// Selected groups, in schema order.
    pub per_group: Vec<GroupCount>,
    /// Blocks with at least one record.
    pub per_block: BTreeMap<String, u64>,
}

/// Draws `n` block keys from the master stream and counts them. The result
/// is indexed like `sampler.block_cdf().keys()`.
pub fn tally_blocks(sampler: &Sampler<'_>, n: u64, rng: &mut RngStream) -> Vec<u64> {
    let cdf = sampler.block_cdf();
    let mut counts = vec![0u64; cdf.len()];
    for _ in 0..n {
        counts[cdf.draw_index(rng)] += 1;
    }
    counts
}

/// Generates `count` records for one model block from the block's own
/// stream: all group draws first, then all locations, then augmentation.
pub fn fill_block(
    sampler: &Sampler<'_>,
    block: usize,
    count: u64,
    seed: u64,
    attributes: &[AttributeSpec],
) -> Result<Vec<SampleRecord>> {
    let fips = &sampler.model().blocks()[block].fips;
    let mut rng = RngStream::for_block(seed, fips);
    let groups = (0..count)
        .map(|_| sampler.draw_group(block, &mut rng))
        .collect::<Result<Vec<_>>>()?;
    let mut records = Vec::with_capacity(groups.len());
    for g in groups {
        let p = sampler.draw_location(block, &mut rng)?;
        records.push(SampleRecord {
            lon: p.lon,
            lat: p.lat,
            block_fips: fips.clone(),
            group: sampler.model().schema().groups()[g].clone(),
            attributes: Vec::with_capacity(attributes.len()),
        });
    }
    for r in &mut records {
        for spec in attributes {
            let v = spec.draw(fips, &mut rng)?;
            r.attributes.push((spec.name().to_owned(), v));
        }
    }
    Ok(records)
}

/// Count-then-fill dataset generation.
///
/// Block keys for all `n` records are drawn first and tallied; each block
/// is then filled from its own stream. Blocks are processed in parallel in
/// bounded batches and written in FIPS order, so the output bytes depend
/// only on `(seed, inputs, n)`.
pub fn generate_dataset<S: RecordSink>(
    sampler: &Sampler<'_>,
    n: u64,
    seed: u64,
    attributes: &[AttributeSpec],
    sink: &mut S,
) -> Result<DatasetSummary> {
    if n == 0 {
        return Err(Error::Invalid("dataset size must be at least 1".into()));
    }
    let mut master = RngStream::new(seed, MASTER_STREAM);
    let tallies = tally_blocks(sampler, n, &mut master);
    let keys = sampler.block_cdf().keys();
    let schema = sampler.model().schema();

    let mut group_counts = vec![0u64; schema.len()];
    let mut per_block = BTreeMap::new();
    let mut batch: Vec<(usize, u64)> = Vec::new();
    let mut pending = 0u64;

    let mut flush = |batch: &mut Vec<(usize, u64)>| -> Result<()> {
        let filled: Vec<Result<Vec<SampleRecord>>> = batch
            .par_iter()
            .map(|&(block, count)| fill_block(sampler, block, count, seed, attributes))
            .collect();
        for records in filled {
            for r in records? {
                sink.write_record(&r)?;
                let g = schema.index_of(&r.group).expect("group from schema");
                group_counts[g] += 1;
            }
        }
        batch.clear();
        Ok(())
    };

    for (pos, &count) in tallies.iter().enumerate() {
        if count == 0 {
            continue;
        }
        let block = keys[pos];
        per_block.insert(sampler.model().blocks()[block].fips.clone(), count);
        batch.push((block, count));
        pending += count;
        if pending >= BATCH_RECORDS {
            flush(&mut batch)?;
            pending = 0;
        }
    }
    flush(&mut batch)?;

    let per_group = sampler
        .groups()
        .iter()
        .map(|&g| GroupCount {
            group: schema.groups()[g].clone(),
            count: group_counts[g],
        })
        .collect();
    Ok(DatasetSummary {
        n,
        seed,
        per_group,
        per_block,
    })
}

/// One row of a dataset CSV.
#[derive(Debug, Clone, PartialEq)]
pub struct DatasetRow {
    pub lon: f64,
    pub lat: f64,
    pub fips: String,
    pub group: String,
}

impl DatasetRow {
    pub fn location(&self) -> LonLat {
        LonLat::new(self.lon, self.lat)
    }
}

/// Streaming reader over a dataset CSV written by [`DatasetWriter`].
pub struct DatasetReader<R: Read> {
    path: PathBuf,
    inner: csv::Reader<R>,
    cols: [usize; 4],
    record: csv::StringRecord,
}

/// Opens a dataset CSV. The group column is `group_column` if given, else
/// the fourth column.
pub fn read_dataset(path: &Path, group_column: Option<&str>) -> Result<DatasetReader<File>> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    DatasetReader::new(file, path, group_column)
}

impl<R: Read> DatasetReader<R> {
    pub fn new(reader: R, path: &Path, group_column: Option<&str>) -> Result<Self> {
        let mut inner = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
        let headers = inner.headers().map_err(|e| csv_read_error(path, e))?.clone();
        let col = |name: &str| {
            headers.iter().position(|h| h == name).ok_or_else(|| {
                Error::Schema(format!("{}: missing column '{name}'", path.display()))
            })
        };
        let group = match group_column {
            Some(name) => col(name)?,
            None if headers.len() >= 4 => 3,
            None => {
                return Err(Error::Schema(format!(
                    "{}: expected lon,lat,fips,<group> columns",
                    path.display()
                )))
            }
        };
        Ok(Self {
            path: path.to_owned(),
            cols: [col("lon")?, col("lat")?, col("fips")?, group],
            inner,
            record: csv::StringRecord::new(),
        })
    }

    /// Name of the group column.
    pub fn group_column(&mut self) -> Result<String> {
        let h = self.inner.headers().map_err(|e| csv_read_error(&self.path, e))?;
        Ok(h[self.cols[3]].to_owned())
    }

    fn parse(&self) -> Result<DatasetRow> {
        let row = self.record.position().map(|p| p.line() as usize).unwrap_or_default();
        let field = |i: usize| self.record.get(self.cols[i]).unwrap_or("");
        let coord = |i: usize| {
            field(i).parse::<f64>().ok().filter(|v| v.is_finite()).ok_or_else(|| Error::Parse {
                row,
                message: format!("{}: bad coordinate '{}'", self.path.display(), field(i)),
            })
        };
        Ok(DatasetRow {
            lon: coord(0)?,
            lat: coord(1)?,
            fips: field(2).to_owned(),
            group: field(3).to_owned(),
        })
    }
}

impl<R: Read> Iterator for DatasetReader<R> {
    type Item = Result<DatasetRow>;

    fn next(&mut self) -> Option<Self::Item> {
        match self.inner.read_record(&mut self.record) {
            Ok(false) => None,
            Ok(true) => Some(self.parse()),
            Err(e) => Some(Err(csv_read_error(&self.path, e))),
        }
    }
}
