//! Detection of cofiring patterns and patterns of patterns.
//!
//! Level 1 holds neuron patterns. A level-(l+1) bond is a set of at least two
//! level-l bonds realized together in one bin. The boundary of a bond is its
//! constituent set; iterating the boundary down to level 0 yields the bond's
//! neuron support.
//!
//! Construction is a single chronological pass over the bins of an
//! [`OccurrenceLog`]. For each nonempty bin:
//!
//! 1. the active set is decomposed against the known level-1 patterns
//!    ([`realize_level1`]); if it does not decompose it is registered as a new
//!    pattern. The realized patterns form `R_1`.
//! 2. while `|R_l| >= 2` and `l < max_level`, the set `R_l` itself is
//!    registered (or re-counted) as a level-(l+1) bond and `R_(l+1)` becomes
//!    every known level-(l+1) bond whose constituents lie inside `R_l`.
//!
//! Bonds count as realized in the bin that creates them.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::codes::{OccurrenceLog, Pattern};
use crate::error::{Error, Result};

#[derive(
    Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize, clap::ValueEnum,
)]
#[serde(rename_all = "kebab-case")]
pub enum Decomposition {
    /// The active set must be a disjoint union of known patterns.
    #[default]
    ExactCover,
    /// Every known pattern contained in the active set is realized.
    #[value(alias = "subset")]
    SubsetRealization,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BuildConfig {
    pub max_level: usize,
    pub decomposition: Decomposition,
    pub min_count: usize,
    /// Fix the level-1 patterns from all distinct active sets (smallest
    /// first) before the chronological pass, making `C_1` independent of
    /// bin order.
    #[serde(default)]
    pub two_pass: bool,
    /// Also record a decomposed active set as a level-1 bond of its own. Such
    /// union words never take part in decompositions or higher bonds.
    #[serde(default)]
    pub keep_union_words: bool,
}

impl Default for BuildConfig {
    fn default() -> Self {
        BuildConfig {
            max_level: 3,
            decomposition: Decomposition::ExactCover,
            min_count: 1,
            two_pass: false,
            keep_union_words: false,
        }
    }
}

impl BuildConfig {
    pub fn validate(&self) -> Result<()> {
        if self.max_level < 1 {
            return Err(Error::Config("max_level must be at least 1".into()));
        }
        if self.min_count < 1 {
            return Err(Error::Config("min_count must be at least 1".into()));
        }
        Ok(())
    }
}

/// An element of one level of the hyperstructure. Its level is implied by
/// where it is stored; `id` equals its position within that level.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bond {
    pub id: usize,
    /// Neuron indices at level 1, level-(l-1) bond ids above.
    pub constituents: Vec<usize>,
    pub count: usize,
    pub bins: Vec<u64>,
}

impl Bond {
    fn new(id: usize, constituents: Vec<usize>) -> Self {
        Bond {
            id,
            constituents,
            count: 0,
            bins: Vec::new(),
        }
    }

    fn mark(&mut self, bin: u64) {
        if self.bins.last() != Some(&bin) {
            self.bins.push(bin);
            self.count = self.bins.len();
        }
    }
}

/// Outcome of decomposing one active set against the known level-1 patterns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Realization {
    /// Indices (into `known`) of the realized patterns, ascending.
    Cover(Vec<usize>),
    NewPattern(Pattern),
}

/// Decides which known level-1 patterns an active set realizes.
///
/// Exact-cover candidates are tried in order of decreasing size, then
/// lexicographically; the search always extends the cover through the
/// smallest uncovered neuron and returns the first complete disjoint cover.
pub fn realize_level1(active: &Pattern, known: &[Pattern], mode: Decomposition) -> Realization {
    let mut candidates: Vec<usize> = (0..known.len())
        .filter(|&i| !known[i].is_empty() && known[i].is_subset_of(active))
        .collect();
    match mode {
        Decomposition::SubsetRealization => {
            if candidates.is_empty() {
                Realization::NewPattern(active.clone())
            } else {
                Realization::Cover(candidates)
            }
        }
        Decomposition::ExactCover => {
            candidates.sort_by(|&a, &b| {
                known[b]
                    .len()
                    .cmp(&known[a].len())
                    .then_with(|| known[a].members().cmp(known[b].members()))
            });
            let mut chosen = Vec::new();
            if !active.is_empty() && exact_cover(active.members(), known, &candidates, &mut chosen)
            {
                chosen.sort_unstable();
                Realization::Cover(chosen)
            } else {
                Realization::NewPattern(active.clone())
            }
        }
    }
}

fn exact_cover(
    uncovered: &[usize],
    known: &[Pattern],
    candidates: &[usize],
    chosen: &mut Vec<usize>,
) -> bool {
    let Some(&pivot) = uncovered.first() else {
        return true;
    };
    for &c in candidates {
        let p = &known[c];
        if !p.contains(pivot) || !crate::complex::is_subset(p.members(), uncovered) {
            continue;
        }
        let rest: Vec<usize> = uncovered
            .iter()
            .copied()
            .filter(|x| !p.contains(*x))
            .collect();
        chosen.push(c);
        if exact_cover(&rest, known, candidates, chosen) {
            return true;
        }
        chosen.pop();
    }
    false
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawHyperstructure")]
pub struct Hyperstructure {
    n: usize,
    config: BuildConfig,
    levels: Vec<Vec<Bond>>,
}

#[derive(Deserialize)]
struct RawHyperstructure {
    n: usize,
    config: BuildConfig,
    levels: Vec<Vec<Bond>>,
}

impl TryFrom<RawHyperstructure> for Hyperstructure {
    type Error = Error;

    fn try_from(raw: RawHyperstructure) -> Result<Self> {
        let h = Hyperstructure {
            n: raw.n,
            config: raw.config,
            levels: raw.levels,
        };
        h.validate()?;
        Ok(h)
    }
}

/// Bond table for one level, keyed by constituent set.
#[derive(Default)]
struct LevelTable {
    bonds: Vec<Bond>,
    index: HashMap<Vec<usize>, usize>,
}

impl LevelTable {
    fn get_or_insert(&mut self, constituents: Vec<usize>) -> usize {
        if let Some(&id) = self.index.get(&constituents) {
            return id;
        }
        let id = self.bonds.len();
        self.index.insert(constituents.clone(), id);
        self.bonds.push(Bond::new(id, constituents));
        id
    }
}

struct Builder<'a> {
    config: &'a BuildConfig,
    /// `tables[l - 1]` holds level `l`.
    tables: Vec<LevelTable>,
    /// Level-1 bond ids eligible for decompositions, with their patterns.
    pool_ids: Vec<usize>,
    pool: Vec<Pattern>,
    union_words: HashSet<usize>,
}

impl<'a> Builder<'a> {
    fn new(config: &'a BuildConfig) -> Self {
        Builder {
            config,
            tables: (0..config.max_level)
                .map(|_| LevelTable::default())
                .collect(),
            pool_ids: Vec::new(),
            pool: Vec::new(),
            union_words: HashSet::new(),
        }
    }

    fn register_pattern(&mut self, p: Pattern) -> usize {
        let id = self.tables[0].get_or_insert(p.members().to_vec());
        if !self.pool_ids.contains(&id) {
            self.union_words.remove(&id);
            self.pool_ids.push(id);
            self.pool.push(p);
        }
        id
    }

    fn realize(&mut self, active: &Pattern) -> Realization {
        match realize_level1(active, &self.pool, self.config.decomposition) {
            Realization::Cover(idx) => {
                Realization::Cover(idx.into_iter().map(|i| self.pool_ids[i]).collect())
            }
            new => new,
        }
    }

    fn seed_patterns(&mut self, log: &OccurrenceLog) {
        let mut distinct: Vec<&Pattern> = log
            .bins()
            .iter()
            .map(|b| &b.active)
            .filter(|p| !p.is_empty())
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        distinct.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        for p in distinct {
            if let Realization::NewPattern(p) = self.realize(p) {
                self.register_pattern(p);
            }
        }
    }

    fn process_bin(&mut self, bin: u64, active: &Pattern) {
        let mut realized: BTreeSet<usize> = match self.realize(active) {
            Realization::Cover(ids) => ids.into_iter().collect(),
            Realization::NewPattern(p) => std::iter::once(self.register_pattern(p)).collect(),
        };
        if self.config.keep_union_words {
            let key = active.members().to_vec();
            let existing = self.tables[0].index.get(&key).copied();
            match existing {
                Some(id) if realized.contains(&id) => {}
                Some(id) => self.tables[0].bonds[id].mark(bin),
                None => {
                    let id = self.tables[0].get_or_insert(key);
                    self.union_words.insert(id);
                    self.tables[0].bonds[id].mark(bin);
                }
            }
        }
        realized.retain(|id| !self.union_words.contains(id));
        for &id in &realized {
            self.tables[0].bonds[id].mark(bin);
        }

        let mut current: Vec<usize> = realized.into_iter().collect();
        for upper in 1..self.config.max_level {
            if current.len() < 2 {
                break;
            }
            let table = &mut self.tables[upper];
            table.get_or_insert(current.clone());
            let next: Vec<usize> = table
                .bonds
                .iter()
                .filter(|b| crate::complex::is_subset(&b.constituents, &current))
                .map(|b| b.id)
                .collect();
            for &id in &next {
                table.bonds[id].mark(bin);
            }
            current = next;
        }
    }

    fn finish(self, n: usize) -> Hyperstructure {
        let min_count = self.config.min_count;
        let mut levels: Vec<Vec<Bond>> = Vec::new();
        // old id -> new id for the level below
        let mut remap: Vec<Option<usize>> = Vec::new();
        for (l, table) in self.tables.into_iter().enumerate() {
            let mut kept = Vec::new();
            let mut next_remap = vec![None; table.bonds.len()];
            for bond in table.bonds {
                if bond.count < min_count {
                    continue;
                }
                let constituents = if l == 0 {
                    Some(bond.constituents)
                } else {
                    bond.constituents
                        .iter()
                        .map(|&c| remap[c])
                        .collect::<Option<Vec<_>>>()
                };
                let Some(constituents) = constituents else {
                    continue;
                };
                next_remap[bond.id] = Some(kept.len());
                kept.push(Bond {
                    id: kept.len(),
                    constituents,
                    count: bond.count,
                    bins: bond.bins,
                });
            }
            if kept.is_empty() {
                break;
            }
            levels.push(kept);
            remap = next_remap;
        }
        Hyperstructure {
            n,
            config: self.config.clone(),
            levels,
        }
    }
}

/// Builds the hyperstructure of a log. Deterministic in `(log, config)`.
pub fn build_hyperstructure(log: &OccurrenceLog, config: &BuildConfig) -> Result<Hyperstructure> {
    config.validate()?;
    let mut builder = Builder::new(config);
    if config.two_pass {
        builder.seed_patterns(log);
    }
    for bin in log.bins() {
        if !bin.active.is_empty() {
            builder.process_bin(bin.index, &bin.active);
        }
    }
    let h = builder.finish(log.n());
    debug_assert!(h.validate().is_ok());
    Ok(h)
}

/// Recursively sorted nested set of neuron indices.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
enum Nested {
    Leaf(Vec<usize>),
    Set(Vec<Nested>),
}

impl Nested {
    fn render(&self, out: &mut String) {
        out.push('{');
        match self {
            Nested::Leaf(members) => {
                for (i, m) in members.iter().enumerate() {
                    if i > 0 {
                        out.push(',');
                    }
                    let _ = write!(out, "{m}");
                }
            }
            Nested::Set(children) => {
                for (i, c) in children.iter().enumerate() {
                    if i > 0 {
                        out.push(',');
                    }
                    c.render(out);
                }
            }
        }
        out.push('}');
    }
}

impl Hyperstructure {
    /// A hyperstructure with no bonds.
    pub fn empty(n: usize, config: BuildConfig) -> Self {
        Hyperstructure {
            n,
            config,
            levels: Vec::new(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn config(&self) -> &BuildConfig {
        &self.config
    }

    /// Highest populated level; 0 when empty.
    pub fn k(&self) -> usize {
        self.levels.len()
    }

    pub fn levels(&self) -> &[Vec<Bond>] {
        &self.levels
    }

    pub fn level_sizes(&self) -> Vec<usize> {
        self.levels.iter().map(Vec::len).collect()
    }

    pub fn total_bonds(&self) -> usize {
        self.levels.iter().map(Vec::len).sum()
    }

    /// Bonds of level `level` (1-based).
    pub fn level(&self, level: usize) -> Result<&[Bond]> {
        if level == 0 || level > self.k() {
            return Err(self.range_error(level, 1));
        }
        Ok(&self.levels[level - 1])
    }

    pub fn bond(&self, level: usize, id: usize) -> Result<&Bond> {
        self.level(level)
            .ok()
            .and_then(|bonds| bonds.get(id))
            .ok_or(Error::Lookup { level, id })
    }

    /// Level-1 patterns in id order.
    pub fn patterns(&self) -> Vec<Pattern> {
        self.levels
            .first()
            .map(|l| {
                l.iter()
                    .map(|b| Pattern::from(b.constituents.clone()))
                    .collect()
            })
            .unwrap_or_default()
    }

    pub(crate) fn range_error(&self, level: usize, lowest: usize) -> Error {
        Error::Range {
            level,
            valid: if self.k() >= lowest {
                format!("{lowest}..={}", self.k())
            } else {
                "none".to_string()
            },
        }
    }

    /// The level-(l-1) bonds that a level-l bond binds.
    pub fn boundary(&self, level: usize, id: usize) -> Result<&[usize]> {
        if level < 2 {
            return Err(self.range_error(level, 2));
        }
        Ok(&self.bond(level, id)?.constituents)
    }

    /// Iterated boundary of a bond down to `target`; at `target == 0` the
    /// neuron support.
    pub fn downset(&self, level: usize, id: usize, target: usize) -> Result<BTreeSet<usize>> {
        let bond = self.bond(level, id)?;
        if target >= level {
            return Err(Error::Range {
                level: target,
                valid: format!("0..{level}"),
            });
        }
        let mut current: BTreeSet<usize> = bond.constituents.iter().copied().collect();
        let mut l = level - 1;
        while l > target {
            let below = &self.levels[l - 1];
            current = current
                .iter()
                .flat_map(|&c| below[c].constituents.iter().copied())
                .collect();
            l -= 1;
        }
        Ok(current)
    }

    /// Downsets to `target` of every bond at `level`, in id order.
    pub fn level_downsets(&self, level: usize, target: usize) -> Result<Vec<BTreeSet<usize>>> {
        let n = self.level(level)?.len();
        (0..n).map(|id| self.downset(level, id, target)).collect()
    }

    fn nested_level(&self, level: usize) -> Result<Vec<Nested>> {
        self.level(level)?;
        let mut current: Vec<Nested> = self.levels[0]
            .iter()
            .map(|b| Nested::Leaf(b.constituents.clone()))
            .collect();
        for l in 2..=level {
            current = self.levels[l - 1]
                .iter()
                .map(|b| {
                    let mut children: Vec<Nested> =
                        b.constituents.iter().map(|&c| current[c].clone()).collect();
                    children.sort();
                    Nested::Set(children)
                })
                .collect();
        }
        Ok(current)
    }

    /// Fully expanded nested-set rendering of one bond, e.g. `{{0,1,2},{3,4,5}}`.
    pub fn canonical_form(&self, level: usize, id: usize) -> Result<String> {
        self.bond(level, id)?;
        let nested = self.nested_level(level)?;
        let mut s = String::new();
        nested[id].render(&mut s);
        Ok(s)
    }

    /// Canonical forms of every bond at `level`, in id order.
    pub fn canonical_forms(&self, level: usize) -> Result<Vec<String>> {
        Ok(self
            .nested_level(level)?
            .iter()
            .map(|nested| {
                let mut s = String::new();
                nested.render(&mut s);
                s
            })
            .collect())
    }

    /// Checks every structural invariant; used after deserialization.
    pub fn validate(&self) -> Result<()> {
        self.config.validate()?;
        if self.k() > self.config.max_level {
            return Err(Error::Integrity(format!(
                "{} levels exceed max_level {}",
                self.k(),
                self.config.max_level
            )));
        }
        for (l0, bonds) in self.levels.iter().enumerate() {
            let level = l0 + 1;
            if bonds.is_empty() {
                return Err(Error::Integrity(format!("level {level} is empty")));
            }
            let mut seen = HashSet::new();
            for (pos, b) in bonds.iter().enumerate() {
                let fail = |msg: &str| Error::Integrity(format!("level {level} bond {pos}: {msg}"));
                if b.id != pos {
                    return Err(fail("id differs from position"));
                }
                if b.constituents.is_empty() {
                    return Err(fail("no constituents"));
                }
                if b.constituents.windows(2).any(|w| w[0] >= w[1]) {
                    return Err(fail("constituents not strictly sorted"));
                }
                if level >= 2 && b.constituents.len() < 2 {
                    return Err(fail("fewer than two constituents"));
                }
                let bound = if level == 1 {
                    self.n
                } else {
                    self.levels[l0 - 1].len()
                };
                if b.constituents.iter().any(|&c| c >= bound) {
                    return Err(fail("constituent out of range"));
                }
                if b.count == 0 || b.count != b.bins.len() {
                    return Err(fail("count does not match bins"));
                }
                if b.bins.windows(2).any(|w| w[0] >= w[1]) {
                    return Err(fail("bins not strictly increasing"));
                }
                if !seen.insert(&b.constituents) {
                    return Err(fail("duplicate constituents"));
                }
            }
        }
        Ok(())
    }
}
