//! Levelwise comparison of two hyperstructures over the same neurons.
//!
//! Bonds are matched across datasets by their canonical nested-set form, so
//! two bonds agree exactly when they bind the same neurons in the same
//! recursive arrangement.

use std::collections::BTreeSet;
use std::fmt;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::complex::SimplicialComplex;
use crate::error::{Error, Result};
use crate::homology::{betti, DEFAULT_DIM_CAP};
use crate::hyperstructure::Hyperstructure;
use crate::topology::{level_complex, nerve, NerveConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MapStatus {
    Bijective,
    /// Every bond of A has a match in B, but not conversely.
    InjectiveAToB,
    /// Every bond of B has a match in A, but not conversely.
    InjectiveBToA,
    Neither,
}

impl MapStatus {
    fn classify(size_a: usize, size_b: usize, shared: usize) -> Self {
        match (shared == size_a, shared == size_b) {
            (true, true) => MapStatus::Bijective,
            (true, false) => MapStatus::InjectiveAToB,
            (false, true) => MapStatus::InjectiveBToA,
            (false, false) => MapStatus::Neither,
        }
    }

    pub fn swapped(self) -> Self {
        match self {
            MapStatus::InjectiveAToB => MapStatus::InjectiveBToA,
            MapStatus::InjectiveBToA => MapStatus::InjectiveAToB,
            other => other,
        }
    }
}

impl fmt::Display for MapStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MapStatus::Bijective => "bijective",
            MapStatus::InjectiveAToB => "injective-only(A->B)",
            MapStatus::InjectiveBToA => "injective-only(B->A)",
            MapStatus::Neither => "neither",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LevelComparison {
    pub level: usize,
    pub size_a: usize,
    pub size_b: usize,
    pub shared: usize,
    pub jaccard: f64,
    pub map_status: MapStatus,
    pub betti_a: Vec<usize>,
    pub betti_b: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonReport {
    pub levels: Vec<LevelComparison>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub nerve_betti_a: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub nerve_betti_b: Option<Vec<usize>>,
}

impl ComparisonReport {
    /// The same comparison with the roles of A and B exchanged.
    pub fn swapped(&self) -> Self {
        ComparisonReport {
            levels: self
                .levels
                .iter()
                .map(|l| LevelComparison {
                    level: l.level,
                    size_a: l.size_b,
                    size_b: l.size_a,
                    shared: l.shared,
                    jaccard: l.jaccard,
                    map_status: l.map_status.swapped(),
                    betti_a: l.betti_b.clone(),
                    betti_b: l.betti_a.clone(),
                })
                .collect(),
            nerve_betti_a: self.nerve_betti_b.clone(),
            nerve_betti_b: self.nerve_betti_a.clone(),
        }
    }

    pub fn to_table(&self) -> String {
        let fmt_betti = |b: &[usize]| {
            if b.is_empty() {
                "-".to_string()
            } else {
                b.iter().map(usize::to_string).collect::<Vec<_>>().join(",")
            }
        };
        let header = [
            "level", "|A|", "|B|", "shared", "jaccard", "map", "betti A", "betti B",
        ];
        let mut rows: Vec<Vec<String>> = vec![header.iter().map(|s| s.to_string()).collect()];
        for l in &self.levels {
            rows.push(vec![
                l.level.to_string(),
                l.size_a.to_string(),
                l.size_b.to_string(),
                l.shared.to_string(),
                format!("{:.4}", l.jaccard),
                l.map_status.to_string(),
                fmt_betti(&l.betti_a),
                fmt_betti(&l.betti_b),
            ]);
        }
        let widths: Vec<usize> = (0..header.len())
            .map(|c| rows.iter().map(|r| r[c].len()).max().unwrap_or(0))
            .collect();
        let mut out = String::new();
        for r in &rows {
            let line: Vec<String> = r
                .iter()
                .zip(&widths)
                .map(|(cell, w)| format!("{cell:<w$}"))
                .collect();
            let _ = writeln!(out, "{}", line.join("  ").trim_end());
        }
        if let (Some(a), Some(b)) = (&self.nerve_betti_a, &self.nerve_betti_b) {
            let _ = writeln!(out, "nerve betti A: {}  B: {}", fmt_betti(a), fmt_betti(b));
        }
        out
    }
}

#[derive(Debug, Clone)]
pub struct CompareOptions {
    pub with_nerve: bool,
    pub nerve: NerveConfig,
    pub dim_cap: usize,
}

impl Default for CompareOptions {
    fn default() -> Self {
        CompareOptions {
            with_nerve: false,
            nerve: NerveConfig::default(),
            dim_cap: DEFAULT_DIM_CAP,
        }
    }
}

/// Betti numbers in dimensions below the cap, so no face above the cap is
/// ever enumerated.
fn capped_betti(k: &SimplicialComplex, dim_cap: usize) -> Result<Vec<usize>> {
    match k.dim() {
        None => Ok(Vec::new()),
        Some(top) => betti(k, top.min(dim_cap.saturating_sub(1)), dim_cap),
    }
}

fn level_betti(h: &Hyperstructure, level: usize, dim_cap: usize) -> Result<Vec<usize>> {
    if level > h.k() {
        return Ok(Vec::new());
    }
    capped_betti(&level_complex(h, level)?, dim_cap)
}

pub fn compare_levels(a: &Hyperstructure, b: &Hyperstructure) -> Result<ComparisonReport> {
    compare_levels_with(a, b, &CompareOptions::default())
}

pub fn compare_levels_with(
    a: &Hyperstructure,
    b: &Hyperstructure,
    opts: &CompareOptions,
) -> Result<ComparisonReport> {
    if a.n() != b.n() {
        return Err(Error::Universe(a.n(), b.n()));
    }
    let forms = |h: &Hyperstructure, level: usize| -> Result<BTreeSet<String>> {
        if level > h.k() {
            return Ok(BTreeSet::new());
        }
        Ok(h.canonical_forms(level)?.into_iter().collect())
    };
    let mut levels = Vec::new();
    for level in 1..=a.k().max(b.k()) {
        let fa = forms(a, level)?;
        let fb = forms(b, level)?;
        let shared = fa.intersection(&fb).count();
        let (size_a, size_b) = (fa.len(), fb.len());
        let union = size_a + size_b - shared;
        levels.push(LevelComparison {
            level,
            size_a,
            size_b,
            shared,
            jaccard: if union == 0 {
                1.0
            } else {
                shared as f64 / union as f64
            },
            map_status: MapStatus::classify(size_a, size_b, shared),
            betti_a: level_betti(a, level, opts.dim_cap)?,
            betti_b: level_betti(b, level, opts.dim_cap)?,
        });
    }
    let (nerve_betti_a, nerve_betti_b) = if opts.with_nerve {
        (
            Some(capped_betti(&nerve(a, &opts.nerve)?, opts.dim_cap)?),
            Some(capped_betti(&nerve(b, &opts.nerve)?, opts.dim_cap)?),
        )
    } else {
        (None, None)
    };
    Ok(ComparisonReport {
        levels,
        nerve_betti_a,
        nerve_betti_b,
    })
}
