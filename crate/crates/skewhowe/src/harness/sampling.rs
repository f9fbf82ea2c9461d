use std::collections::hash_map::DefaultHasher;
use std::hash::{Hash, Hasher};

use rayon::prelude::*;
use serde::Serialize;

use crate::combinatorics::Sampler;
use crate::error::{Error, Result};
use crate::params::EnsembleParams;

/// Guard on `n · k · samples · replicates`.
pub const SAMPLING_LIMIT: f64 = 1e11;

/// Occupation counts of one replicate.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct ReplicateCounts {
    pub samples: u64,
    /// `one[a − 1]`: samples with a particle at `a`.
    pub one: Vec<u64>,
    /// Upper triangle, `a < b`, of the pair counts.
    two: Vec<u32>,
}

impl ReplicateCounts {
    fn new(sites: usize, samples: u64) -> Self {
        Self { samples, one: vec![0; sites], two: vec![0; sites * (sites - 1) / 2] }
    }

    pub fn sites(&self) -> usize {
        self.one.len()
    }

    fn pair_index(&self, a: usize, b: usize) -> usize {
        // rows a = 1.., columns b > a
        let s = self.sites();
        let (a, b) = (a - 1, b - 1);
        a * (2 * s - a - 1) / 2 + (b - a - 1)
    }

    /// Samples with particles at both `a` and `b` (1-based); the diagonal is the one-point count.
    pub fn pair(&self, a: usize, b: usize) -> u64 {
        match a.cmp(&b) {
            std::cmp::Ordering::Equal => self.one[a - 1],
            std::cmp::Ordering::Less => u64::from(self.two[self.pair_index(a, b)]),
            std::cmp::Ordering::Greater => u64::from(self.two[self.pair_index(b, a)]),
        }
    }

    fn record(&mut self, coords: &[usize]) {
        for (x, &a) in coords.iter().enumerate() {
            self.one[a - 1] += 1;
            for &b in &coords[x + 1..] {
                let idx = self.pair_index(b.min(a), b.max(a));
                self.two[idx] += 1;
            }
        }
    }
}

/// Occupation statistics of `replicates × samples` diagrams.
///
/// Sample `s` of replicate `r` uses stream `r · samples + s` of the seed, so any
/// sample's indicator vector can be regenerated with [`SampleBatch::indicator`].
#[derive(Debug, Clone)]
pub struct SampleBatch {
    params: EnsembleParams,
    seed: u64,
    samples: u64,
    replicates: Vec<ReplicateCounts>,
}

fn particles(rows: &[usize], n: usize, out: &mut Vec<usize>) {
    out.clear();
    out.extend(rows.iter().enumerate().map(|(i, &l)| l + n - i));
}

/// Draws `num_replicates` independent batches of `num_samples` diagrams, in parallel over replicates.
pub fn run_sampling(params: &EnsembleParams, num_samples: u64, num_replicates: usize, seed: u64) -> Result<SampleBatch> {
    params.require_symmetric("sampling")?;
    if num_samples == 0 || num_replicates == 0 {
        return Err(Error::Domain("need at least one sample and one replicate".into()));
    }
    if num_samples > u64::from(u32::MAX) {
        return Err(Error::Resource(format!("{num_samples} samples per replicate overflow the pair counters")));
    }
    let work = (params.n() * params.k()) as f64 * num_samples as f64 * num_replicates as f64;
    if work > SAMPLING_LIMIT {
        return Err(Error::Resource(format!("n·k·samples·replicates = {work:.3e} exceeds {SAMPLING_LIMIT:.0e}")));
    }
    let (n, sites) = (params.n(), params.n() + params.k());
    let replicates = (0..num_replicates)
        .into_par_iter()
        .map(|r| -> Result<ReplicateCounts> {
            let mut sampler = Sampler::new(params)?;
            let mut counts = ReplicateCounts::new(sites, num_samples);
            let mut coords = Vec::with_capacity(n);
            for s in 0..num_samples {
                particles(sampler.sample_rows(seed, r as u64 * num_samples + s), n, &mut coords);
                counts.record(&coords);
            }
            Ok(counts)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SampleBatch { params: params.clone(), seed, samples: num_samples, replicates })
}

impl SampleBatch {
    pub fn params(&self) -> &EnsembleParams {
        &self.params
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn samples_per_replicate(&self) -> u64 {
        self.samples
    }

    pub fn replicates(&self) -> &[ReplicateCounts] {
        &self.replicates
    }

    pub fn total_samples(&self) -> u64 {
        self.samples * self.replicates.len() as u64
    }

    /// Occupation indicators over `1..=n+k` of sample `s` in replicate `r`.
    pub fn indicator(&self, r: usize, s: u64) -> Result<Vec<bool>> {
        if r >= self.replicates.len() || s >= self.samples {
            return Err(Error::Domain(format!("no sample ({r}, {s}) in this batch")));
        }
        let mut sampler = Sampler::new(&self.params)?;
        let mut coords = Vec::new();
        particles(sampler.sample_rows(self.seed, r as u64 * self.samples + s), self.params.n(), &mut coords);
        let mut out = vec![false; self.params.n() + self.params.k()];
        coords.iter().for_each(|&a| out[a - 1] = true);
        Ok(out)
    }

    /// One-point estimate `ρ̂(a)` pooled over all replicates.
    pub fn density(&self, a: usize) -> f64 {
        let c: u64 = self.replicates.iter().map(|r| r.one[a - 1]).sum();
        c as f64 / self.total_samples() as f64
    }

    /// Pooled two-point estimate `ρ̂₂(a, b)`.
    pub fn pair_density(&self, a: usize, b: usize) -> f64 {
        let c: u64 = self.replicates.iter().map(|r| r.pair(a, b)).sum();
        c as f64 / self.total_samples() as f64
    }

    /// Hash of all counts, for determinism checks.
    pub fn digest(&self) -> u64 {
        let mut h = DefaultHasher::new();
        (self.seed, self.samples, &self.replicates).hash(&mut h);
        h.finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pair_index_is_a_bijection() {
        let c = ReplicateCounts::new(7, 0);
        let mut seen = vec![false; c.two.len()];
        for a in 1..=7 {
            for b in a + 1..=7 {
                let i = c.pair_index(a, b);
                assert!(!seen[i]);
                seen[i] = true;
            }
        }
        assert!(seen.iter().all(|&s| s));
    }

    #[test]
    fn n1_k1_density() {
        let params = EnsembleParams::new(1, 1).unwrap();
        let batch = run_sampling(&params, 2500, 4, 3).unwrap();
        assert!((batch.density(1) - 0.5).abs() < 0.015);
        assert!((batch.density(1) + batch.density(2) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn indicators_have_n_particles() {
        let params = EnsembleParams::new(3, 4).unwrap();
        let batch = run_sampling(&params, 50, 3, 9).unwrap();
        let mut one = vec![0u64; 7];
        for r in 0..3 {
            for s in 0..50 {
                let v = batch.indicator(r, s).unwrap();
                assert_eq!(v.iter().filter(|&&b| b).count(), 3);
                v.iter().enumerate().filter(|(_, &b)| b).for_each(|(a, _)| one[a] += 1);
            }
        }
        let pooled: Vec<u64> =
            (0..7).map(|a| batch.replicates().iter().map(|r| r.one[a]).sum()).collect();
        assert_eq!(one, pooled);
        for r in batch.replicates() {
            assert_eq!(r.one.iter().sum::<u64>(), 3 * 50);
            for a in 1..=7 {
                assert_eq!(r.pair(a, a), r.one[a - 1]);
                for b in 1..=7 {
                    assert_eq!(r.pair(a, b), r.pair(b, a));
                }
            }
        }
    }

    #[test]
    fn deterministic_and_seed_dependent() {
        let params = EnsembleParams::new(2, 3).unwrap();
        let a = run_sampling(&params, 200, 3, 5).unwrap();
        let b = run_sampling(&params, 200, 3, 5).unwrap();
        let c = run_sampling(&params, 200, 3, 6).unwrap();
        assert_eq!(a.digest(), b.digest());
        assert_ne!(a.digest(), c.digest());
    }

    #[test]
    fn guards() {
        let params = EnsembleParams::new(50, 100).unwrap();
        assert!(matches!(run_sampling(&params, 1_000_000, 1000, 1), Err(Error::Resource(_))));
        assert!(matches!(run_sampling(&params, 0, 1, 1), Err(Error::Domain(_))));
    }
}
