use std::collections::BTreeMap;
use std::fs::File;
use std::path::Path;

use crate::error::csv_read_error;
use crate::{Error, Result};

/// Maps dataset groups onto the groups reported by an audit.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct GroupMerge {
    map: BTreeMap<String, String>,
    fallback: Option<String>,
    passthrough: bool,
}

impl GroupMerge {
    /// Every group reported under its own label.
    pub fn identity() -> Self {
        Self {
            passthrough: true,
            ..Self::default()
        }
    }

    /// Explicit mapping. Groups not in `pairs` go to `fallback`, or are an
    /// error when there is none.
    pub fn new<A: Into<String>, B: Into<String>>(
        pairs: impl IntoIterator<Item = (A, B)>,
        fallback: Option<String>,
    ) -> Self {
        Self {
            map: pairs.into_iter().map(|(a, b)| (a.into(), b.into())).collect(),
            fallback,
            passthrough: false,
        }
    }

    /// Keeps the listed groups and pools everything else under `other`.
    pub fn keep<S: AsRef<str>>(keep: &[S], other: &str) -> Self {
        Self::new(
            keep.iter().map(|k| (k.as_ref().to_owned(), k.as_ref().to_owned())),
            Some(other.to_owned()),
        )
    }

    pub fn apply<'a>(&'a self, group: &'a str) -> Result<&'a str> {
        if let Some(m) = self.map.get(group) {
            return Ok(m);
        }
        if let Some(f) = &self.fallback {
            return Ok(f);
        }
        if self.passthrough {
            return Ok(group);
        }
        Err(Error::Invalid(format!("group '{group}' is not covered by the merge map")))
    }

    /// Merged labels named explicitly by the map.
    pub fn targets(&self) -> impl Iterator<Item = &str> {
        let mut t: Vec<&str> = self.map.values().map(String::as_str).collect();
        t.extend(self.fallback.as_deref());
        t.sort_unstable();
        t.dedup();
        t.into_iter()
    }
}

/// Reads a `group,merged` CSV. A `*` row sets the fallback label.
pub fn load_merge_map(path: &Path) -> Result<GroupMerge> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(file);
    let headers = rdr.headers().map_err(|e| csv_read_error(path, e))?.clone();
    let col = |name: &str| {
        headers.iter().position(|h| h == name).ok_or_else(|| {
            Error::Schema(format!("{}: missing column '{name}'", path.display()))
        })
    };
    let (g, m) = (col("group")?, col("merged")?);
    let mut pairs = Vec::new();
    let mut fallback = None;
    for rec in rdr.records() {
        let rec = rec.map_err(|e| csv_read_error(path, e))?;
        let (from, to) = (rec.get(g).unwrap_or(""), rec.get(m).unwrap_or(""));
        if to.is_empty() {
            return Err(Error::Parse {
                row: rec.position().map(|p| p.line() as usize).unwrap_or_default(),
                message: format!("{}: empty merged label", path.display()),
            });
        }
        if from == "*" {
            fallback = Some(to.to_owned());
        } else {
            pairs.push((from.to_owned(), to.to_owned()));
        }
    }
    Ok(GroupMerge::new(pairs, fallback))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    #[test]
    fn identity_and_keep() {
        assert_eq!(GroupMerge::identity().apply("Asian").unwrap(), "Asian");
        let m = GroupMerge::keep(&["White", "Black"], "Other Races");
        assert_eq!(m.apply("White").unwrap(), "White");
        assert_eq!(m.apply("Samoan").unwrap(), "Other Races");
        assert_eq!(m.targets().collect::<Vec<_>>(), ["Black", "Other Races", "White"]);
    }

    #[test]
    fn strict_map_rejects_unknown() {
        let m = GroupMerge::new([("a", "A")], None);
        assert!(m.apply("b").is_err());
    }

    #[test]
    fn csv_with_fallback() {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        write!(f, "group,merged\nWhite + Black,Mixed Races\nAsian,Asian\n*,Other Races\n").unwrap();
        let m = load_merge_map(f.path()).unwrap();
        assert_eq!(m.apply("White + Black").unwrap(), "Mixed Races");
        assert_eq!(m.apply("Fijian").unwrap(), "Other Races");
    }
}
