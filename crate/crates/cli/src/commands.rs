use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use log::{info, warn};
use serde::Serialize;
use serde_json::json;

use popsynth::audit::{
    audit_dataset, export_explanation, load_boundary, load_merge_map, load_resources,
    write_chart_csv, Auditor, GroupMerge,
};
use popsynth::geometry::LonLat;
use popsynth::ingest::{
    join_inputs, load_crosswalk, load_geodata, load_population_stats_inferred, PopulationModel,
    PopulationTable, RegionFilter, ZipMapping, DEFAULT_FIPS_PROPERTY,
};
use popsynth::sampler::{
    generate_dataset, load_attribute_spec, read_dataset, AttributeSpec, DatasetWriter, RngStream,
    Sampler,
};
use popsynth::validation::{validate as run_validation, DatasetCounts, ValidationConfig, DEFAULT_ALPHA};

use crate::config::{parse_pairs, split_list};
use crate::{Failure, Opts, EXIT_REJECTED};

const DEFAULT_GROUP_COLUMN: &str = "race";
const DEFAULT_EXPLAIN_N: u64 = 2000;

type CmdResult = Result<u8, Failure>;

fn required<'a>(v: &'a Option<PathBuf>, flag: &str) -> Result<&'a Path, Failure> {
    v.as_deref().ok_or_else(|| Failure::input(format!("missing required --{flag}")))
}

fn group_column(o: &Opts) -> &str {
    o.group_column.as_deref().unwrap_or(DEFAULT_GROUP_COLUMN)
}

fn create(path: &Path) -> Result<BufWriter<File>, Failure> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| Failure::internal(format!("cannot create {}: {e}", path.display())))
}

/// File at `path`, or stdout.
fn output(path: Option<&Path>) -> Result<Box<dyn Write>, Failure> {
    Ok(match path {
        Some(p) => Box::new(create(p)?),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn write_json<T: Serialize>(value: &T, path: Option<&Path>) -> Result<(), Failure> {
    let mut out = output(path)?;
    serde_json::to_writer_pretty(&mut out, value)
        .map_err(|e| Failure::internal(format!("cannot write JSON: {e}")))?;
    writeln!(out).and_then(|_| out.flush()).map_err(|e| Failure::internal(e.to_string()))
}

fn region(o: &Opts) -> Result<RegionFilter, Failure> {
    let zips = split_list(&o.zip);
    let blocks = split_list(&o.blocks);
    match (zips.is_empty(), blocks.is_empty()) {
        (false, false) => Err(Failure::input("--zip and --blocks cannot be combined")),
        (false, true) => {
            let mapping = match &o.crosswalk {
                Some(p) => load_crosswalk(p)?,
                None => ZipMapping::FipsPrefix,
            };
            Ok(RegionFilter::Zip { zips, mapping })
        }
        (true, false) => Ok(RegionFilter::Blocks(blocks)),
        (true, true) => Ok(RegionFilter::All),
    }
}

fn groups(o: &Opts) -> Option<Vec<String>> {
    let g = split_list(&o.groups);
    (!g.is_empty()).then_some(g)
}

fn load_model(o: &Opts) -> Result<PopulationModel, Failure> {
    let stats = load_population_stats_inferred(required(&o.stats, "stats")?, group_column(o))?;
    let fips_property = o.fips_property.as_deref().unwrap_or(DEFAULT_FIPS_PROPERTY);
    let geo = load_geodata(required(&o.geo, "geo")?, fips_property)?;
    let model = join_inputs(stats, geo)?;
    let report = model.report();
    if !report.is_empty() {
        info!(
            "join: {} zero-population block(s) without geometry, {} boundary(ies) without statistics",
            report.stats_only.len(),
            report.geometry_only.len()
        );
    }
    Ok(model)
}

fn load_attributes(o: &Opts) -> Result<Vec<AttributeSpec>, Failure> {
    parse_pairs(&o.attributes, "--attribute")
        .map_err(Failure::input)?
        .into_iter()
        .map(|(name, path)| load_attribute_spec(&path, &name).map_err(Failure::from))
        .collect()
}

fn load_auditors(o: &Opts) -> Result<Vec<Auditor>, Failure> {
    let pairs = parse_pairs(&o.resources, "--resources").map_err(Failure::input)?;
    if pairs.is_empty() {
        return Err(Failure::input("at least one --resources <label>=<path> is required"));
    }
    pairs
        .iter()
        .map(|(label, path)| Ok(Auditor::new(load_resources(label, path)?)?))
        .collect()
}

fn seed(o: &Opts) -> u64 {
    o.seed.unwrap_or_else(|| {
        let s = rand::random::<u64>();
        warn!("no --seed given; using {s}");
        s
    })
}

pub fn generate(o: &Opts) -> CmdResult {
    let n = o.n.ok_or_else(|| Failure::input("missing required --n"))?;
    if n == 0 {
        return Err(Failure::input("--n must be at least 1"));
    }
    let seed = seed(o);
    let start = Instant::now();
    let model = load_model(o)?;
    let attributes = load_attributes(o)?;
    let groups = groups(o);
    let sampler = Sampler::new(&model, &region(o)?, groups.as_deref())?;

    let names: Vec<&str> = attributes.iter().map(AttributeSpec::name).collect();
    let mut writer = DatasetWriter::new(output(o.out.as_deref())?, group_column(o), &names)?;
    let summary = generate_dataset(&sampler, n, seed, &attributes, &mut writer)?;
    writer.finish()?.flush().map_err(|e| Failure::internal(e.to_string()))?;
    let runtime = start.elapsed().as_secs_f64();
    info!("generated {n} records in {runtime:.2}s");

    let summary_path = o.summary.clone().or_else(|| {
        o.out.as_ref().map(|p| {
            let mut s = p.clone().into_os_string();
            s.push(".summary.json");
            PathBuf::from(s)
        })
    });
    if let Some(path) = summary_path {
        let doc = json!({
            "n": summary.n,
            "seed": summary.seed,
            "runtime_s": runtime,
            "per_group": summary.per_group,
            "blocks_with_records": summary.per_block.len(),
            "join": model.report(),
        });
        write_json(&doc, Some(&path))?;
    }
    Ok(0)
}

fn load_stats(o: &Opts) -> Result<PopulationTable, Failure> {
    Ok(load_population_stats_inferred(required(&o.stats, "stats")?, group_column(o))?)
}

pub fn validate(o: &Opts) -> CmdResult {
    let table = load_stats(o)?;
    let dataset = required(&o.dataset, "dataset")?;
    let rows = read_dataset(dataset, o.group_column.as_deref())?;
    let counts = DatasetCounts::from_rows(rows)?;
    if matches!(o.agg_m, Some(0)) {
        return Err(Failure::input("--agg-m must be at least 1"));
    }
    let config = ValidationConfig {
        alpha: o.alpha.unwrap_or(DEFAULT_ALPHA),
        agg_m: o.agg_m,
        region: region(o)?,
        groups: groups(o),
    };
    let report = run_validation(&counts, &table, &config)?;
    write_json(&report, o.out.as_deref())?;
    if report.all_pass {
        Ok(0)
    } else {
        eprintln!("validation rejected at alpha {}", report.alpha);
        Ok(EXIT_REJECTED)
    }
}

pub fn audit(o: &Opts) -> CmdResult {
    let dataset = required(&o.dataset, "dataset")?;
    let auditors = load_auditors(o)?;
    let merge = match &o.merge_map {
        Some(p) => load_merge_map(p)?,
        None => GroupMerge::identity(),
    };
    let boundary = o.boundary.as_deref().map(load_boundary).transpose()?;
    let rows = read_dataset(dataset, o.group_column.as_deref())?;
    let persons = rows.map(|r| r.map(|r| (r.location(), r.group)));
    let outcome = audit_dataset(persons, &auditors, &merge, boundary.as_ref())?;
    info!(
        "audited {} person(s), {} outside the boundary",
        outcome.audited, outcome.outside_boundary
    );
    write_json(&outcome, o.out.as_deref())?;
    if let Some(path) = &o.chart_csv {
        write_chart_csv(&outcome.reports, create(path)?)?;
    }
    Ok(0)
}

/// Up to `n` rows of the dataset, chosen by partial Fisher-Yates.
fn subsample(path: &Path, o: &Opts, n: u64, seed: u64) -> Result<Vec<(LonLat, String)>, Failure> {
    let mut all = read_dataset(path, o.group_column.as_deref())?
        .map(|r| r.map(|r| (r.location(), r.group)))
        .collect::<Result<Vec<_>, _>>()?;
    let k = (n as usize).min(all.len());
    let mut rng = RngStream::new(seed, 0);
    for i in 0..k {
        let j = i + (rng.next_u64() % (all.len() - i) as u64) as usize;
        all.swap(i, j);
    }
    all.truncate(k);
    Ok(all)
}

pub fn explain(o: &Opts) -> CmdResult {
    let n = o.n.unwrap_or(DEFAULT_EXPLAIN_N);
    if n == 0 {
        return Err(Failure::input("--n must be at least 1"));
    }
    let mut auditors = load_auditors(o)?;
    if auditors.len() != 1 {
        return Err(Failure::input("explain takes exactly one --resources <label>=<path>"));
    }
    let auditor = auditors.pop().expect("one auditor");
    let seed = seed(o);
    let persons = match &o.dataset {
        Some(path) => subsample(path, o, n, seed)?,
        None => {
            let model = load_model(o)?;
            let groups = groups(o);
            let sampler = Sampler::new(&model, &region(o)?, groups.as_deref())?;
            let mut records = Vec::new();
            generate_dataset(&sampler, n, seed, &[], &mut records)?;
            records.into_iter().map(|r| (r.location(), r.group)).collect()
        }
    };
    let written = export_explanation(&persons, &auditor, output(o.out.as_deref())?)?;
    info!("wrote {written} explanation line(s)");
    Ok(0)
}
