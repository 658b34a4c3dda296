//! Distribution comparison: normalisation, block aggregation, two-sample
//! K-S, Welch t, one-way ANOVA and χ² goodness of fit.

mod special;

pub use special::{
    chi_square_sf, f_sf, kolmogorov_sf, ln_gamma, reg_inc_beta, reg_lower_gamma,
    reg_upper_gamma, student_t_two_sided,
};

use serde::Serialize;

use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct DistributionVector {
    labels: Vec<String>,
    values: Vec<f64>,
    normalized: bool,
}

impl DistributionVector {
    pub fn new<L: Into<String>>(labels: impl IntoIterator<Item = L>, values: Vec<f64>) -> Result<Self> {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if labels.len() != values.len() {
            return Err(Error::Invalid(format!(
                "{} labels for {} values",
                labels.len(),
                values.len()
            )));
        }
        if let Some(v) = values.iter().find(|v| !v.is_finite() || **v < 0.0) {
            return Err(Error::Invalid(format!("distribution value {v} is not a non-negative real")));
        }
        Ok(Self {
            labels,
            values,
            normalized: false,
        })
    }

    /// Labels `0..n`.
    pub fn unlabeled(values: Vec<f64>) -> Result<Self> {
        Self::new((0..values.len()).map(|i| i.to_string()), values)
    }

    pub fn from_counts<L: Into<String>>(labels: impl IntoIterator<Item = L>, counts: &[u64]) -> Result<Self> {
        Self::new(labels, counts.iter().map(|&c| c as f64).collect())
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn total(&self) -> f64 {
        self.values.iter().sum()
    }

    pub fn normalize(mut self) -> Result<Self> {
        let total = self.total();
        if total <= 0.0 {
            return Err(Error::EmptyDistribution("cannot normalise a zero vector".into()));
        }
        for v in &mut self.values {
            *v /= total;
        }
        self.normalized = true;
        Ok(self)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TestResult {
    pub test: String,
    pub statistic: f64,
    pub p_value: f64,
    pub sizes: Vec<usize>,
}

impl TestResult {
    fn new(test: &str, statistic: f64, p_value: f64, sizes: Vec<usize>) -> Self {
        Self {
            test: test.to_owned(),
            statistic,
            p_value: p_value.clamp(0.0, 1.0),
            sizes,
        }
    }

    pub fn passes(&self, alpha: f64) -> bool {
        self.p_value > alpha
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Summary {
    pub mean: f64,
    pub sd: f64,
    pub count: usize,
}

/// Sums consecutive runs of `m` entries; a trailing partial run is kept.
/// Merged labels read `first..last`.
pub fn aggregate_blocks(v: &DistributionVector, m: usize) -> DistributionVector {
    let m = m.max(1);
    if m == 1 {
        return v.clone();
    }
    let mut labels = Vec::with_capacity(v.len().div_ceil(m));
    let mut values = Vec::with_capacity(labels.capacity());
    for (ls, vs) in v.labels.chunks(m).zip(v.values.chunks(m)) {
        labels.push(if ls.len() == 1 {
            ls[0].clone()
        } else {
            format!("{}..{}", ls[0], ls[ls.len() - 1])
        });
        values.push(vs.iter().sum());
    }
    DistributionVector {
        labels,
        values,
        normalized: v.normalized,
    }
}

/// Default aggregation width for a dataset of `n` records.
pub fn default_aggregation(n: u64) -> usize {
    match n {
        n if n >= 12_800_000 => 5,
        n if n >= 5_000_000 => 10,
        n if n >= 1_000_000 => 50,
        n if n >= 500_000 => 100,
        n if n >= 200_000 => 250,
        _ => 1000,
    }
}

fn ks_p(d: f64, na: usize, nb: usize) -> f64 {
    let ne = (na * nb) as f64 / (na + nb) as f64;
    kolmogorov_sf(ne.sqrt() * d)
}

/// K-S statistic over a shared label order, sizes taken as label counts.
pub fn ks_test(a: &DistributionVector, b: &DistributionVector) -> Result<TestResult> {
    if a.len() != b.len() {
        return Err(Error::Invalid(format!(
            "K-S needs equal-length vectors, got {} and {}",
            a.len(),
            b.len()
        )));
    }
    if a.labels != b.labels {
        return Err(Error::Invalid("K-S vectors have different label orders".into()));
    }
    if !a.normalized || !b.normalized {
        return Err(Error::Invalid("K-S vectors must be normalised".into()));
    }
    if a.is_empty() {
        return Err(Error::Invalid("K-S on empty vectors".into()));
    }
    let (mut ca, mut cb, mut d) = (0.0f64, 0.0f64, 0.0f64);
    for (x, y) in a.values.iter().zip(&b.values) {
        ca += x;
        cb += y;
        d = d.max((ca - cb).abs());
    }
    let d = d.min(1.0);
    Ok(TestResult::new("ks", d, ks_p(d, a.len(), b.len()), vec![a.len(), b.len()]))
}

/// Classic two-sample K-S on raw observations.
pub fn ks_test_samples(a: &[f64], b: &[f64]) -> Result<TestResult> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::Invalid("K-S needs two non-empty samples".into()));
    }
    if a.iter().chain(b).any(|v| v.is_nan()) {
        return Err(Error::Invalid("K-S sample contains NaN".into()));
    }
    let mut xs = a.to_vec();
    let mut ys = b.to_vec();
    xs.sort_by(f64::total_cmp);
    ys.sort_by(f64::total_cmp);
    let (na, nb) = (xs.len() as f64, ys.len() as f64);
    let (mut i, mut j, mut d) = (0usize, 0usize, 0.0f64);
    while i < xs.len() && j < ys.len() {
        let v = xs[i].min(ys[j]);
        while i < xs.len() && xs[i] <= v {
            i += 1;
        }
        while j < ys.len() && ys[j] <= v {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    Ok(TestResult::new("ks", d, ks_p(d, xs.len(), ys.len()), vec![xs.len(), ys.len()]))
}

fn mean_var(x: &[f64]) -> (f64, f64) {
    let n = x.len() as f64;
    let mean = x.iter().sum::<f64>() / n;
    let ss: f64 = x.iter().map(|v| (v - mean) * (v - mean)).sum();
    (mean, if x.len() > 1 { ss / (n - 1.0) } else { 0.0 })
}

/// Welch's unequal-variance t-test, two-sided.
pub fn t_test(a: &[f64], b: &[f64]) -> Result<TestResult> {
    if a.len() < 2 || b.len() < 2 {
        return Err(Error::UndefinedStatistic(format!(
            "t-test needs at least 2 values per sample, got {} and {}",
            a.len(),
            b.len()
        )));
    }
    let (ma, va) = mean_var(a);
    let (mb, vb) = mean_var(b);
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (sa, sb) = (va / na, vb / nb);
    let se2 = sa + sb;
    if se2 <= 0.0 {
        return Err(Error::UndefinedStatistic("t-test on two constant samples".into()));
    }
    let t = (ma - mb) / se2.sqrt();
    let df = se2 * se2 / (sa * sa / (na - 1.0) + sb * sb / (nb - 1.0));
    Ok(TestResult::new("welch_t", t, student_t_two_sided(t, df), vec![a.len(), b.len()]))
}

/// One-way ANOVA F test.
pub fn anova<S: AsRef<[f64]>>(groups: &[S]) -> Result<TestResult> {
    if groups.len() < 2 {
        return Err(Error::UndefinedStatistic("ANOVA needs at least 2 groups".into()));
    }
    if let Some(g) = groups.iter().find(|g| g.as_ref().len() < 2) {
        return Err(Error::UndefinedStatistic(format!(
            "ANOVA group has {} value(s), needs 2",
            g.as_ref().len()
        )));
    }
    let n: usize = groups.iter().map(|g| g.as_ref().len()).sum();
    let grand = groups.iter().flat_map(|g| g.as_ref()).sum::<f64>() / n as f64;
    let (mut ssb, mut ssw) = (0.0, 0.0);
    for g in groups {
        let g = g.as_ref();
        let (m, v) = mean_var(g);
        ssb += g.len() as f64 * (m - grand) * (m - grand);
        ssw += v * (g.len() as f64 - 1.0);
    }
    if ssw <= 0.0 {
        return Err(Error::UndefinedStatistic("ANOVA with zero within-group variance".into()));
    }
    let df1 = (groups.len() - 1) as f64;
    let df2 = (n - groups.len()) as f64;
    let f = (ssb / df1) / (ssw / df2);
    let sizes = groups.iter().map(|g| g.as_ref().len()).collect();
    Ok(TestResult::new("anova", f, f_sf(f, df1, df2), sizes))
}

/// Mean and sample standard deviation; `None` for an empty slice.
pub fn summary(values: &[f64]) -> Option<Summary> {
    if values.is_empty() {
        return None;
    }
    let (mean, var) = mean_var(values);
    Some(Summary {
        mean,
        sd: var.sqrt(),
        count: values.len(),
    })
}

/// Pearson χ² goodness of fit. Cells with zero probability are dropped and
/// must be empty.
pub fn chi_square_gof(observed: &[u64], probs: &[f64]) -> Result<TestResult> {
    if observed.len() != probs.len() {
        return Err(Error::Invalid(format!(
            "{} observed cells for {} probabilities",
            observed.len(),
            probs.len()
        )));
    }
    let psum: f64 = probs.iter().sum();
    if probs.iter().any(|p| !p.is_finite() || *p < 0.0) || (psum - 1.0).abs() > 1e-6 {
        return Err(Error::Invalid("cell probabilities must be non-negative and sum to 1".into()));
    }
    let n: u64 = observed.iter().sum();
    let (mut stat, mut cells) = (0.0, 0usize);
    for (&o, &p) in observed.iter().zip(probs) {
        if p == 0.0 {
            if o > 0 {
                return Err(Error::Invalid(format!("{o} observation(s) in a zero-probability cell")));
            }
            continue;
        }
        let e = n as f64 * p;
        stat += (o as f64 - e) * (o as f64 - e) / e;
        cells += 1;
    }
    if n == 0 || cells < 2 {
        return Err(Error::UndefinedStatistic("χ² needs observations in at least 2 cells".into()));
    }
    let df = (cells - 1) as f64;
    Ok(TestResult::new("chi_square", stat, chi_square_sf(stat, df), vec![n as usize]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const NORMALIZED_TOL: f64 = 1e-9;

    fn norm(v: &[f64]) -> DistributionVector {
        DistributionVector::unlabeled(v.to_vec()).unwrap().normalize().unwrap()
    }

    #[test]
    fn normalise_sums_to_one() {
        let v = norm(&[1.0, 2.0, 7.0]);
        assert!(v.is_normalized());
        assert!((v.total() - 1.0).abs() < NORMALIZED_TOL);
        assert!(DistributionVector::unlabeled(vec![0.0, 0.0]).unwrap().normalize().is_err());
        assert!(DistributionVector::unlabeled(vec![-1.0]).is_err());
        assert!(DistributionVector::new(["a"], vec![1.0, 2.0]).is_err());
    }

    #[test]
    fn aggregation_examples() {
        let v = DistributionVector::new(["a", "b", "c", "d", "e", "f"], vec![1., 2., 3., 4., 5., 6.]).unwrap();
        let a = aggregate_blocks(&v, 2);
        assert_eq!(a.values(), &[3.0, 7.0, 11.0]);
        assert_eq!(a.labels()[0], "a..b");
        assert_eq!(aggregate_blocks(&v, 1), v);
        let a4 = aggregate_blocks(&v, 4);
        assert_eq!(a4.values(), &[10.0, 11.0]);
    }

    #[test]
    fn aggregation_schedule() {
        let cases = [
            (12_800_000, 5),
            (5_000_000, 10),
            (1_000_000, 50),
            (500_000, 100),
            (200_000, 250),
            (50_000, 1000),
        ];
        for (n, m) in cases {
            assert_eq!(default_aggregation(n), m, "n={n}");
        }
    }

    #[test]
    fn ks_identical_and_disjoint() {
        let a = norm(&[1.0, 2.0, 3.0]);
        let r = ks_test(&a, &a).unwrap();
        assert_eq!((r.statistic, r.p_value), (0.0, 1.0));
        let r = ks_test(&norm(&[1.0, 0.0, 0.0]), &norm(&[0.0, 0.0, 1.0])).unwrap();
        assert_eq!(r.statistic, 1.0);
    }

    #[test]
    fn ks_preconditions() {
        let raw = DistributionVector::unlabeled(vec![1.0, 2.0]).unwrap();
        assert!(ks_test(&raw, &raw).is_err());
        assert!(ks_test(&norm(&[1.0, 2.0]), &norm(&[1.0, 2.0, 3.0])).is_err());
        let x = DistributionVector::new(["x", "y"], vec![1.0, 1.0]).unwrap().normalize().unwrap();
        assert!(ks_test(&x, &norm(&[1.0, 1.0])).is_err());
    }

    #[test]
    fn t_test_edge_cases() {
        let a = [1.0, 2.0, 3.0, 4.0];
        let r = t_test(&a, &a).unwrap();
        assert_eq!((r.statistic, r.p_value), (0.0, 1.0));
        assert!(matches!(t_test(&[2.0, 2.0], &[2.0, 2.0]), Err(Error::UndefinedStatistic(_))));
        assert!(t_test(&[1.0], &a).is_err());
    }

    #[test]
    fn t_test_p_falls_with_shift() {
        let a = [1.0, 2.5, 3.0, 4.2, 5.1];
        let mut last = 1.0;
        for c in 1..20 {
            let b: Vec<f64> = a.iter().map(|x| x + c as f64).collect();
            let p = t_test(&a, &b).unwrap().p_value;
            assert!(p <= last);
            last = p;
        }
        assert!(last < 1e-6);
    }

    #[test]
    fn anova_edge_cases() {
        let g = [vec![1.0, 2.0, 3.0], vec![1.0, 2.0, 3.0]];
        let r = anova(&g).unwrap();
        assert_eq!(r.statistic, 0.0);
        assert_eq!(r.p_value, 1.0);
        assert!(anova(&[vec![1.0, 1.0], vec![2.0, 2.0]]).is_err());
        assert!(anova(&[vec![1.0, 2.0]]).is_err());
        assert!(anova(&[vec![1.0, 2.0], vec![3.0]]).is_err());
    }

    #[test]
    fn summary_examples() {
        let s = summary(&[1.0, 2.0, 3.0]).unwrap();
        assert_eq!((s.mean, s.sd, s.count), (2.0, 1.0, 3));
        assert_eq!(summary(&[4.0]).unwrap().sd, 0.0);
        assert!(summary(&[]).is_none());
    }

    #[test]
    fn chi_square_examples() {
        let r = chi_square_gof(&[25, 25, 25, 25], &[0.25; 4]).unwrap();
        assert_eq!(r.statistic, 0.0);
        assert_eq!(r.p_value, 1.0);
        // (10-20)^2/20 * 2 = 10 on 1 df
        let r = chi_square_gof(&[10, 30], &[0.5, 0.5]).unwrap();
        assert!((r.statistic - 10.0).abs() < 1e-12);
        assert!((r.p_value - 0.001_565_402_258_002_549_7).abs() < 1e-12);
        assert!(chi_square_gof(&[1, 1, 0], &[0.5, 0.5, 0.0]).is_ok());
        assert!(chi_square_gof(&[1, 1, 1], &[0.5, 0.5, 0.0]).is_err());
    }

    proptest! {
        #[test]
        fn ks_self_is_zero(v in prop::collection::vec(0.0f64..100.0, 1..40)) {
            prop_assume!(v.iter().sum::<f64>() > 0.0);
            let a = norm(&v);
            prop_assert_eq!(ks_test(&a, &a).unwrap().statistic, 0.0);
        }

        #[test]
        fn ks_bounds(
            pairs in prop::collection::vec((0.0f64..100.0, 0.0f64..100.0), 1..40)
        ) {
            let (x, y): (Vec<f64>, Vec<f64>) = pairs.into_iter().unzip();
            prop_assume!(x.iter().sum::<f64>() > 0.0 && y.iter().sum::<f64>() > 0.0);
            let r = ks_test(&norm(&x), &norm(&y)).unwrap();
            prop_assert!((0.0..=1.0).contains(&r.statistic));
            prop_assert!((0.0..=1.0).contains(&r.p_value));
        }

        #[test]
        fn aggregation_preserves_mass(
            v in prop::collection::vec(0.0f64..1e6, 0..200),
            m in 1usize..60
        ) {
            let d = DistributionVector::unlabeled(v).unwrap();
            let a = aggregate_blocks(&d, m);
            prop_assert!((a.total() - d.total()).abs() <= 1e-9 * d.total().max(1.0));
            prop_assert_eq!(a.len(), d.len().div_ceil(m));
        }

        #[test]
        fn anova_and_t_ranges(
            a in prop::collection::vec(-50.0f64..50.0, 2..20),
            b in prop::collection::vec(-50.0f64..50.0, 2..20),
            c in prop::collection::vec(-50.0f64..50.0, 2..20)
        ) {
            if let Ok(r) = anova(&[&a[..], &b[..], &c[..]]) {
                prop_assert!(r.statistic >= 0.0 && r.statistic.is_finite());
                prop_assert!((0.0..=1.0).contains(&r.p_value));
            }
            if let Ok(r) = t_test(&a, &b) {
                prop_assert!(r.statistic.is_finite());
                prop_assert!((0.0..=1.0).contains(&r.p_value));
            }
        }
    }
}
