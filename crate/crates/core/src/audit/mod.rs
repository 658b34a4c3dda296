//! Equity audit: per-group mean distance to the nearest resource and the
//! max/min disparity ratio across groups.

mod kdtree;
mod merge;
mod resources;

pub use kdtree::{nearest_linear, KdTree2, DEFAULT_BUCKET_SIZE};
pub use merge::{load_merge_map, GroupMerge};
pub use resources::{
    load_boundary, load_resources, parse_boundary, parse_resources_geojson, ResourceSet,
};

use std::collections::BTreeMap;
use std::io::Write;

use log::warn;
use rayon::prelude::*;
use serde::{Serialize, Serializer};
use serde_json::json;

use crate::geometry::{project, LonLat, Polygon, ProjectedPoint};
use crate::{Error, Result};

const CHUNK: usize = 1 << 16;

/// Resource set with its projected KD-tree.
#[derive(Debug, Clone)]
pub struct Auditor {
    resources: ResourceSet,
    tree: KdTree2,
}

impl Auditor {
    pub fn new(resources: ResourceSet) -> Result<Self> {
        let projected = resources
            .points()
            .iter()
            .map(|&p| project(p))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            tree: KdTree2::new(projected),
            resources,
        })
    }

    pub fn label(&self) -> &str {
        self.resources.label()
    }

    pub fn resources(&self) -> &ResourceSet {
        &self.resources
    }

    pub fn tree(&self) -> &KdTree2 {
        &self.tree
    }

    /// Nearest resource index and distance in metres.
    pub fn nearest(&self, p: LonLat) -> Result<(usize, f64)> {
        Ok(self.tree.nearest(project(p)?))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Disparity {
    Ratio(f64),
    /// Some group's mean distance is zero while another's is not.
    Infinite,
    /// Fewer than two groups.
    Undefined,
}

impl Disparity {
    pub fn ratio(&self) -> Option<f64> {
        match *self {
            Disparity::Ratio(r) => Some(r),
            _ => None,
        }
    }
}

impl Serialize for Disparity {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match *self {
            Disparity::Ratio(r) => s.serialize_f64(round_to(r, 3)),
            Disparity::Infinite => s.serialize_str("infinite"),
            Disparity::Undefined => s.serialize_none(),
        }
    }
}

fn round_to(v: f64, places: i32) -> f64 {
    let k = 10f64.powi(places);
    (v * k).round() / k
}

fn round2<S: Serializer>(v: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_f64(round_to(*v, 2))
}

/// `max / min`, with a zero minimum flagged rather than divided.
pub fn disparity_ratio(min_avg: f64, max_avg: f64) -> Disparity {
    if max_avg == min_avg {
        Disparity::Ratio(1.0)
    } else if min_avg <= 0.0 {
        Disparity::Infinite
    } else {
        Disparity::Ratio(max_avg / min_avg)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GroupDistance {
    pub group: String,
    #[serde(rename = "mean_distance_m", serialize_with = "round2")]
    pub mean_distance: f64,
    pub count: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AuditReport {
    pub resource: String,
    pub resource_count: usize,
    /// Sorted by group label.
    pub groups: Vec<GroupDistance>,
    #[serde(serialize_with = "round2")]
    pub min_avg: f64,
    #[serde(serialize_with = "round2")]
    pub max_avg: f64,
    pub disparity: Disparity,
}

impl AuditReport {
    /// Builds a report from per-group (sum of distances, count) pairs;
    /// groups with a zero count are dropped.
    pub fn from_sums(
        resource: &str,
        resource_count: usize,
        sums: impl IntoIterator<Item = (String, f64, u64)>,
    ) -> Result<Self> {
        let mut groups: Vec<GroupDistance> = sums
            .into_iter()
            .filter(|(g, _, n)| {
                if *n == 0 {
                    warn!("group '{g}' has no members for {resource}; excluded");
                }
                *n > 0
            })
            .map(|(group, sum, count)| GroupDistance {
                group,
                mean_distance: sum / count as f64,
                count,
            })
            .collect();
        if groups.is_empty() {
            return Err(Error::Invalid(format!("no persons to audit against {resource}")));
        }
        groups.sort_by(|a, b| a.group.cmp(&b.group));
        let min_avg = groups.iter().map(|g| g.mean_distance).fold(f64::INFINITY, f64::min);
        let max_avg = groups.iter().map(|g| g.mean_distance).fold(0.0, f64::max);
        let disparity = if groups.len() < 2 {
            Disparity::Undefined
        } else {
            disparity_ratio(min_avg, max_avg)
        };
        Ok(Self {
            resource: resource.to_owned(),
            resource_count,
            groups,
            min_avg,
            max_avg,
            disparity,
        })
    }

    pub fn group(&self, name: &str) -> Option<&GroupDistance> {
        self.groups.iter().find(|g| g.group == name)
    }

    pub fn persons(&self) -> u64 {
        self.groups.iter().map(|g| g.count).sum()
    }
}

/// Disparity of a report; an error when it has fewer than two groups.
pub fn disparity(report: &AuditReport) -> Result<Disparity> {
    match report.disparity {
        Disparity::Undefined => Err(Error::UndefinedStatistic(format!(
            "disparity for {} needs at least 2 groups, report has {}",
            report.resource,
            report.groups.len()
        ))),
        d => Ok(d),
    }
}

/// Reports for several resource types over one pass of the dataset.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AuditOutcome {
    pub reports: Vec<AuditReport>,
    /// Persons inside the boundary (all persons if there is none).
    pub audited: u64,
    pub outside_boundary: u64,
}

/// Audits `persons` against every auditor. Persons are projected and queried
/// in parallel chunks and summed in input order, so the result does not
/// depend on the thread count.
pub fn audit_dataset<I, G>(
    persons: I,
    auditors: &[Auditor],
    merge: &GroupMerge,
    boundary: Option<&Polygon>,
) -> Result<AuditOutcome>
where
    I: IntoIterator<Item = Result<(LonLat, G)>>,
    G: AsRef<str>,
{
    if auditors.is_empty() {
        return Err(Error::Invalid("no resource sets to audit".into()));
    }
    let mut index: BTreeMap<String, usize> = BTreeMap::new();
    let mut sums: Vec<Vec<f64>> = vec![Vec::new(); auditors.len()];
    let mut counts: Vec<u64> = Vec::new();
    let (mut audited, mut outside) = (0u64, 0u64);
    let mut chunk: Vec<(LonLat, usize)> = Vec::with_capacity(CHUNK);

    let flush = |chunk: &mut Vec<(LonLat, usize)>, sums: &mut Vec<Vec<f64>>| -> Result<()> {
        let projected = chunk
            .par_iter()
            .map(|(p, _)| project(*p))
            .collect::<Result<Vec<ProjectedPoint>>>()?;
        for (a, auditor) in auditors.iter().enumerate() {
            let d: Vec<f64> = projected.par_iter().map(|&q| auditor.tree.nearest(q).1).collect();
            let s = &mut sums[a];
            for (&(_, g), dist) in chunk.iter().zip(d) {
                s[g] += dist;
            }
        }
        chunk.clear();
        Ok(())
    };

    for item in persons {
        let (p, group) = item?;
        if boundary.is_some_and(|b| !b.contains(p)) {
            outside += 1;
            continue;
        }
        let merged = merge.apply(group.as_ref())?;
        let g = match index.get(merged) {
            Some(&g) => g,
            None => {
                let g = counts.len();
                index.insert(merged.to_owned(), g);
                counts.push(0);
                sums.iter_mut().for_each(|s| s.push(0.0));
                g
            }
        };
        counts[g] += 1;
        audited += 1;
        chunk.push((p, g));
        if chunk.len() == CHUNK {
            flush(&mut chunk, &mut sums)?;
        }
    }
    flush(&mut chunk, &mut sums)?;

    for t in merge.targets() {
        if !index.contains_key(t) {
            warn!("merged group '{t}' has no members; excluded");
        }
    }
    let reports = auditors
        .iter()
        .zip(&sums)
        .map(|(a, s)| {
            AuditReport::from_sums(
                a.label(),
                a.resources().len(),
                index.iter().map(|(name, &g)| (name.clone(), s[g], counts[g])),
            )
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(AuditOutcome {
        reports,
        audited,
        outside_boundary: outside,
    })
}

/// Single resource type, no boundary.
pub fn average_distance_per_group<I, G>(
    persons: I,
    auditor: &Auditor,
    merge: &GroupMerge,
) -> Result<AuditReport>
where
    I: IntoIterator<Item = (LonLat, G)>,
    G: AsRef<str>,
{
    let out = audit_dataset(
        persons.into_iter().map(Ok),
        std::slice::from_ref(auditor),
        merge,
        None,
    )?;
    Ok(out.reports.into_iter().next().expect("one auditor"))
}

/// Same computation directly on projected coordinates.
pub fn average_distance_projected<G: AsRef<str>>(
    label: &str,
    persons: &[(ProjectedPoint, G)],
    resources: &[ProjectedPoint],
) -> Result<AuditReport> {
    if resources.is_empty() {
        return Err(Error::Invalid(format!("resource set '{label}' is empty")));
    }
    let tree = KdTree2::new(resources.to_vec());
    let mut acc: BTreeMap<&str, (f64, u64)> = BTreeMap::new();
    for (p, g) in persons {
        let e = acc.entry(g.as_ref()).or_default();
        e.0 += tree.nearest(*p).1;
        e.1 += 1;
    }
    AuditReport::from_sums(
        label,
        resources.len(),
        acc.into_iter().map(|(g, (s, n))| (g.to_owned(), s, n)),
    )
}

/// Writes a GeoJSON FeatureCollection with one LineString per person, from
/// the person to the nearest resource. Returns the feature count.
pub fn export_explanation<W: Write, G: AsRef<str>>(
    persons: &[(LonLat, G)],
    auditor: &Auditor,
    out: W,
) -> Result<usize> {
    if persons.is_empty() {
        return Err(Error::Invalid("explanation needs at least one person".into()));
    }
    let mut features = Vec::with_capacity(persons.len());
    for (p, g) in persons {
        let (i, d) = auditor.nearest(*p)?;
        let r = auditor.resources().points()[i];
        let mut props = json!({
            "group": g.as_ref(),
            "distance_m": d,
            "resource": auditor.label(),
            "resource_index": i,
        });
        if let Some(name) = auditor.resources().name(i) {
            props["resource_name"] = json!(name);
        }
        features.push(json!({
            "type": "Feature",
            "geometry": {"type": "LineString", "coordinates": [[p.lon, p.lat], [r.lon, r.lat]]},
            "properties": props,
        }));
    }
    let n = features.len();
    let doc = json!({"type": "FeatureCollection", "features": features});
    let mut out = std::io::BufWriter::new(out);
    serde_json::to_writer(&mut out, &doc).map_err(|e| Error::Write(e.into()))?;
    out.flush().map_err(Error::Write)?;
    Ok(n)
}

/// Bar-chart data: one row per (resource, group).
pub fn write_chart_csv<W: Write>(reports: &[AuditReport], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let err = crate::error::csv_write_error;
    w.write_record(["resource", "group", "mean_distance_m", "count"]).map_err(err)?;
    for r in reports {
        for g in &r.groups {
            w.write_record([
                r.resource.as_str(),
                g.group.as_str(),
                &format!("{:.2}", g.mean_distance),
                &g.count.to_string(),
            ])
            .map_err(err)?;
        }
    }
    w.flush().map_err(Error::Write)
}
