use super::RngStream;
use crate::{Error, Result};

/// Cumulative distribution over an ordered key list.
///
/// `cum[i] = (w_0 + ... + w_i) / total`. Zero-weight keys stay in place
/// but can never be drawn.
#[derive(Debug, Clone, PartialEq)]
pub struct CdfIndex<K> {
    keys: Vec<K>,
    cum: Vec<f64>,
    total_weight: f64,
}

/// Builds the normalised cumulative vector for `weights`, in order.
pub fn build_cdf<K, W>(weights: impl IntoIterator<Item = (K, W)>) -> Result<CdfIndex<K>>
where
    W: Into<f64>,
{
    let mut keys = Vec::new();
    let mut prefix = Vec::new();
    let mut acc = 0.0f64;
    for (k, w) in weights {
        let w: f64 = w.into();
        if !(w >= 0.0) || !w.is_finite() {
            return Err(Error::Invalid(format!("weight {w} is not a finite non-negative number")));
        }
        acc += w;
        keys.push(k);
        prefix.push(acc);
    }
    if !(acc > 0.0) {
        return Err(Error::EmptyDistribution(format!(
            "{} key(s) with total weight 0",
            keys.len()
        )));
    }
    // The last prefix equals the total bit for bit, so cum ends at exactly 1.
    let cum = prefix.into_iter().map(|p| p / acc).collect();
    Ok(CdfIndex {
        keys,
        cum,
        total_weight: acc,
    })
}

impl<K> CdfIndex<K> {
    pub fn keys(&self) -> &[K] {
        &self.keys
    }

    pub fn cumulative(&self) -> &[f64] {
        &self.cum
    }

    pub fn total_weight(&self) -> f64 {
        self.total_weight
    }

    pub fn len(&self) -> usize {
        self.keys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.keys.is_empty()
    }

    /// Index `k` with `cum[k-1] <= u < cum[k]`, by binary search.
    ///
    /// `u` outside `[0, 1)` is clamped to the first/last drawable index.
    pub fn index_for(&self, u: f64) -> usize {
        let i = self.cum.partition_point(|&c| c <= u);
        if i < self.cum.len() {
            i
        } else {
            // u >= 1: the last key with positive weight.
            let top = self.cum[self.cum.len() - 1];
            self.cum.partition_point(|&c| c < top)
        }
    }

    pub fn key_for(&self, u: f64) -> &K {
        &self.keys[self.index_for(u)]
    }

    pub fn draw_index(&self, rng: &mut RngStream) -> usize {
        self.index_for(rng.uniform())
    }

    pub fn draw(&self, rng: &mut RngStream) -> &K {
        &self.keys[self.draw_index(rng)]
    }

    /// Probability mass of key `i`.
    pub fn probability(&self, i: usize) -> f64 {
        if i == 0 {
            self.cum[0]
        } else {
            self.cum[i] - self.cum[i - 1]
        }
    }
}
