//! Synthetic spike matrices with planted cofiring patterns.
//!
//! Noise uses ChaCha8 (`rand_chacha` 0.3) seeded through
//! `SeedableRng::seed_from_u64(seed)`. Cells are visited bin by bin, neuron by
//! neuron within a bin; each visit draws one `u64`, whose top 53 bits give a
//! uniform `x` in `[0, 1)`, and the cell flips when `x < noise_rate`. With
//! `noise_rate == 0` no numbers are drawn.

use std::collections::{BTreeMap, HashSet};

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::codes::{Pattern, SpikeMatrix};
use crate::error::{Error, Result};

/// Name and version of the noise generator, for provenance output.
pub const RNG_NAME: &str = "chacha8 (rand_chacha 0.3, seed_from_u64)";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NamedPattern {
    pub name: String,
    pub members: Pattern,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScheduleEntry {
    pub bin: usize,
    pub patterns: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SynthSpec {
    pub n: usize,
    pub patterns: Vec<NamedPattern>,
    pub schedule: Vec<ScheduleEntry>,
    #[serde(default)]
    pub noise_rate: f64,
    #[serde(default)]
    pub seed: u64,
    /// Total number of bins; defaults to one past the last scheduled bin.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bins: Option<usize>,
}

impl SynthSpec {
    pub fn validate(&self) -> Result<()> {
        let mut names = HashSet::new();
        for p in &self.patterns {
            if !names.insert(p.name.as_str()) {
                return Err(Error::Invalid(format!(
                    "pattern name {:?} defined twice",
                    p.name
                )));
            }
            if let Some(&m) = p.members.members().last() {
                if m >= self.n {
                    return Err(Error::Invalid(format!(
                        "pattern {:?} uses neuron {m} but n = {}",
                        p.name, self.n
                    )));
                }
            }
        }
        for e in &self.schedule {
            if let Some(bad) = e
                .patterns
                .iter()
                .find(|name| !names.contains(name.as_str()))
            {
                return Err(Error::Invalid(format!(
                    "bin {} schedules undefined pattern {bad:?}",
                    e.bin
                )));
            }
        }
        if !(0.0..=1.0).contains(&self.noise_rate) {
            return Err(Error::Invalid(format!(
                "noise rate {} outside [0, 1]",
                self.noise_rate
            )));
        }
        if let Some(bins) = self.bins {
            if let Some(e) = self.schedule.iter().find(|e| e.bin >= bins) {
                return Err(Error::Invalid(format!(
                    "bin {} scheduled beyond the {bins} requested bins",
                    e.bin
                )));
            }
        }
        Ok(())
    }

    fn n_bins(&self) -> usize {
        self.bins
            .unwrap_or_else(|| self.schedule.iter().map(|e| e.bin + 1).max().unwrap_or(0))
    }
}

pub fn synth_generate(spec: &SynthSpec) -> Result<SpikeMatrix> {
    spec.validate()?;
    let by_name: BTreeMap<&str, &Pattern> = spec
        .patterns
        .iter()
        .map(|p| (p.name.as_str(), &p.members))
        .collect();
    let n_bins = spec.n_bins();
    let mut m = SpikeMatrix::zeros(spec.n, n_bins);
    for e in &spec.schedule {
        for name in &e.patterns {
            for &neuron in by_name[name.as_str()].members() {
                m.set(neuron, e.bin, true);
            }
        }
    }
    if spec.noise_rate > 0.0 {
        let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
        let scale = 1.0 / (1u64 << 53) as f64;
        for bin in 0..n_bins {
            for neuron in 0..spec.n {
                let x = (rng.next_u64() >> 11) as f64 * scale;
                if x < spec.noise_rate {
                    let v = m.get(neuron, bin);
                    m.set(neuron, bin, !v);
                }
            }
        }
    }
    Ok(m)
}

/// Three disjoint groups A = {0,1,2}, B = {3,4,5}, C = {6,7,8}, each firing
/// alone once and then pairwise: A; B; C; A+B; B+C; A+C.
pub fn triad_spec() -> SynthSpec {
    let pattern = |name: &str, members: [usize; 3]| NamedPattern {
        name: name.to_string(),
        members: Pattern::new(members),
    };
    let entry = |bin: usize, names: &[&str]| ScheduleEntry {
        bin,
        patterns: names.iter().map(|s| s.to_string()).collect(),
    };
    SynthSpec {
        n: 9,
        patterns: vec![
            pattern("A", [0, 1, 2]),
            pattern("B", [3, 4, 5]),
            pattern("C", [6, 7, 8]),
        ],
        schedule: vec![
            entry(0, &["A"]),
            entry(1, &["B"]),
            entry(2, &["C"]),
            entry(3, &["A", "B"]),
            entry(4, &["B", "C"]),
            entry(5, &["A", "C"]),
        ],
        noise_rate: 0.0,
        seed: 0,
        bins: None,
    }
}
