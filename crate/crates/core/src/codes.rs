//! Binary codewords, their supports, and occurrence logs built from spike data.
//!
//! Neurons are indexed `0..n`. A spike matrix has one row per neuron and one
//! column per time bin; column `j` of the matrix becomes bin `j` of the log.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::complex::SimplicialComplex;
use crate::error::{Error, Result};

/// Upper bound on the number of bins an event list may expand into.
const MAX_BINS: u64 = 1 << 28;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Codeword {
    bits: Vec<bool>,
}

impl Codeword {
    pub fn from_bits(bits: &[u8]) -> Result<Self> {
        let bits = bits
            .iter()
            .enumerate()
            .map(|(i, &b)| match b {
                0 => Ok(false),
                1 => Ok(true),
                other => Err(Error::Invalid(format!(
                    "bit {i} is {other}, expected 0 or 1"
                ))),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Codeword { bits })
    }

    pub fn from_bools(bits: Vec<bool>) -> Self {
        Codeword { bits }
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }
}

impl fmt::Display for Codeword {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.bits {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// A finite set of codewords of common length `n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Code {
    n: usize,
    words: BTreeSet<Codeword>,
}

impl Code {
    pub fn new(n: usize, words: impl IntoIterator<Item = Codeword>) -> Result<Self> {
        let mut set = BTreeSet::new();
        for w in words {
            if w.len() != n {
                return Err(Error::Dimension(format!(
                    "codeword of length {} in a code of length {n}",
                    w.len()
                )));
            }
            set.insert(w);
        }
        Ok(Code { n, words: set })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn words(&self) -> impl Iterator<Item = &Codeword> {
        self.words.iter()
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    /// The supports of all codewords.
    pub fn supports(&self) -> Vec<Pattern> {
        self.words.iter().map(support).collect()
    }
}

/// Sorted, duplicate-free set of neuron indices. May be empty (a silent bin).
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(from = "Vec<usize>", into = "Vec<usize>")]
pub struct Pattern {
    members: Vec<usize>,
}

impl From<Vec<usize>> for Pattern {
    fn from(mut members: Vec<usize>) -> Self {
        members.sort_unstable();
        members.dedup();
        Pattern { members }
    }
}

impl From<Pattern> for Vec<usize> {
    fn from(p: Pattern) -> Self {
        p.members
    }
}

impl FromIterator<usize> for Pattern {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        Pattern::from(iter.into_iter().collect::<Vec<_>>())
    }
}

impl Pattern {
    pub fn new(members: impl IntoIterator<Item = usize>) -> Self {
        members.into_iter().collect()
    }

    pub fn empty() -> Self {
        Pattern::default()
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, neuron: usize) -> bool {
        self.members.binary_search(&neuron).is_ok()
    }

    pub fn is_subset_of(&self, other: &Pattern) -> bool {
        crate::complex::is_subset(&self.members, &other.members)
    }

    pub fn is_disjoint(&self, other: &Pattern) -> bool {
        let (mut i, mut j) = (0, 0);
        while i < self.members.len() && j < other.members.len() {
            match self.members[i].cmp(&other.members[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => return false,
            }
        }
        true
    }

    pub fn union(&self, other: &Pattern) -> Pattern {
        self.members.iter().chain(&other.members).copied().collect()
    }

    /// Indicator word of this pattern in a universe of `n` neurons.
    pub fn indicator(&self, n: usize) -> Result<Codeword> {
        let mut bits = vec![false; n];
        for &m in &self.members {
            *bits
                .get_mut(m)
                .ok_or_else(|| Error::Invalid(format!("neuron {m} out of range for n = {n}")))? =
                true;
        }
        Ok(Codeword { bits })
    }

    fn check_range(&self, n: usize) -> Result<()> {
        match self.members.last() {
            Some(&m) if m >= n => Err(Error::Invalid(format!(
                "neuron {m} out of range for n = {n}"
            ))),
            _ => Ok(()),
        }
    }
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, m) in self.members.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{m}")?;
        }
        f.write_str("}")
    }
}

/// The set of neurons active in a codeword.
pub fn support(word: &Codeword) -> Pattern {
    Pattern {
        members: word
            .bits
            .iter()
            .enumerate()
            .filter_map(|(i, &b)| b.then_some(i))
            .collect(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bin {
    #[serde(rename = "bin")]
    pub index: u64,
    pub active: Pattern,
}

/// Chronological list of time bins with the neurons active in each.
/// Silent bins are kept since they carry timing.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawLog")]
pub struct OccurrenceLog {
    n: usize,
    bins: Vec<Bin>,
}

#[derive(Deserialize)]
struct RawLog {
    n: usize,
    bins: Vec<Bin>,
}

impl TryFrom<RawLog> for OccurrenceLog {
    type Error = Error;

    fn try_from(raw: RawLog) -> Result<Self> {
        OccurrenceLog::new(raw.n, raw.bins)
    }
}

impl OccurrenceLog {
    pub fn new(n: usize, bins: Vec<Bin>) -> Result<Self> {
        for w in bins.windows(2) {
            if w[1].index <= w[0].index {
                return Err(Error::Invalid(format!(
                    "bin indices must be strictly increasing ({} follows {})",
                    w[1].index, w[0].index
                )));
            }
        }
        for b in &bins {
            b.active.check_range(n)?;
        }
        Ok(OccurrenceLog { n, bins })
    }

    pub fn empty(n: usize) -> Self {
        OccurrenceLog {
            n,
            bins: Vec::new(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn bins(&self) -> &[Bin] {
        &self.bins
    }

    pub fn is_empty(&self) -> bool {
        self.bins.is_empty()
    }

    /// Keep only the bins whose index satisfies `keep`, preserving order.
    pub fn restrict(&self, mut keep: impl FnMut(u64) -> bool) -> OccurrenceLog {
        OccurrenceLog {
            n: self.n,
            bins: self
                .bins
                .iter()
                .filter(|b| keep(b.index))
                .cloned()
                .collect(),
        }
    }
}

/// Dense neurons x bins binary matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpikeMatrix {
    rows: Vec<Vec<bool>>,
    n_bins: usize,
}

impl SpikeMatrix {
    pub fn new(rows: Vec<Vec<bool>>) -> Result<Self> {
        let n_bins = rows.first().map_or(0, Vec::len);
        if let Some((r, row)) = rows.iter().enumerate().find(|(_, r)| r.len() != n_bins) {
            return Err(Error::Dimension(format!(
                "row {} has {} cells, expected {n_bins}",
                r + 1,
                row.len()
            )));
        }
        Ok(SpikeMatrix { rows, n_bins })
    }

    pub fn zeros(n: usize, n_bins: usize) -> Self {
        SpikeMatrix {
            rows: vec![vec![false; n_bins]; n],
            n_bins,
        }
    }

    /// Parses comma-separated rows of `0`/`1` cells. With `header`, the first
    /// line is skipped. Blank lines are ignored.
    pub fn parse(text: &str, header: bool) -> Result<Self> {
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(header)
            .flexible(true)
            .from_reader(text.as_bytes());
        let mut rows = Vec::new();
        let mut width: Option<usize> = None;
        for record in reader.records() {
            let record = record?;
            let line = record
                .position()
                .map_or(rows.len() + 1, |p| p.line() as usize);
            let row = record
                .iter()
                .enumerate()
                .map(|(c, cell)| match cell.trim() {
                    "0" => Ok(false),
                    "1" => Ok(true),
                    other => Err(Error::Parse {
                        row: line,
                        column: c + 1,
                        message: format!("cell {other:?} is not 0 or 1"),
                    }),
                })
                .collect::<Result<Vec<_>>>()?;
            match width {
                None => width = Some(row.len()),
                Some(w) if w != row.len() => {
                    return Err(Error::Dimension(format!(
                        "line {line} has {} cells, expected {w}",
                        row.len()
                    )))
                }
                Some(_) => {}
            }
            rows.push(row);
        }
        SpikeMatrix::new(rows)
    }

    pub fn n(&self) -> usize {
        self.rows.len()
    }

    pub fn n_bins(&self) -> usize {
        self.n_bins
    }

    pub fn get(&self, neuron: usize, bin: usize) -> bool {
        self.rows[neuron][bin]
    }

    pub fn set(&mut self, neuron: usize, bin: usize, value: bool) {
        self.rows[neuron][bin] = value;
    }

    pub fn rows(&self) -> &[Vec<bool>] {
        &self.rows
    }

    pub fn render(&self) -> String {
        let mut out = String::with_capacity(self.rows.len() * (2 * self.n_bins + 1));
        for row in &self.rows {
            for (j, &b) in row.iter().enumerate() {
                if j > 0 {
                    out.push(',');
                }
                out.push(if b { '1' } else { '0' });
            }
            out.push('\n');
        }
        out
    }

    /// Column `j` becomes bin `j`; every column is kept, silent or not.
    pub fn to_log(&self) -> OccurrenceLog {
        let bins = (0..self.n_bins)
            .map(|j| Bin {
                index: j as u64,
                active: (0..self.n()).filter(|&i| self.rows[i][j]).collect(),
            })
            .collect();
        OccurrenceLog { n: self.n(), bins }
    }

    /// Dense rendering of a log: columns `0..=last bin index`, absent bins silent.
    pub fn from_log(log: &OccurrenceLog) -> Result<Self> {
        let n_bins = match log.bins.last() {
            None => 0,
            Some(b) if b.index >= MAX_BINS => {
                return Err(Error::Invalid(format!(
                    "bin index {} too large to render",
                    b.index
                )))
            }
            Some(b) => b.index as usize + 1,
        };
        let mut m = SpikeMatrix::zeros(log.n, n_bins);
        for b in &log.bins {
            for &i in b.active.members() {
                m.rows[i][b.index as usize] = true;
            }
        }
        Ok(m)
    }
}

/// Parses a neurons x bins CSV into `(n, log)`.
pub fn parse_spike_matrix(text: &str, header: bool) -> Result<(usize, OccurrenceLog)> {
    let m = SpikeMatrix::parse(text, header)?;
    Ok((m.n(), m.to_log()))
}

pub fn render_matrix(log: &OccurrenceLog) -> Result<String> {
    Ok(SpikeMatrix::from_log(log)?.render())
}

/// Bins `(neuron, seconds)` events into half-open windows `[k dt, (k+1) dt)`.
/// Bins between the first and last event are kept even when silent; nothing
/// is emitted past the last event.
pub fn bin_event_list(events: &[(usize, f64)], dt: f64, n: usize) -> Result<OccurrenceLog> {
    if !dt.is_finite() || dt <= 0.0 {
        return Err(Error::Invalid(format!(
            "bin width must be positive, got {dt}"
        )));
    }
    let mut active: BTreeMap<u64, BTreeSet<usize>> = BTreeMap::new();
    for &(neuron, t) in events {
        if neuron >= n {
            return Err(Error::Invalid(format!(
                "neuron {neuron} out of range for n = {n}"
            )));
        }
        if !t.is_finite() || t < 0.0 {
            return Err(Error::Invalid(format!(
                "timestamp {t} must be finite and non-negative"
            )));
        }
        let k = (t / dt).floor();
        if k >= MAX_BINS as f64 {
            return Err(Error::Invalid(format!(
                "timestamp {t} at bin width {dt} exceeds {MAX_BINS} bins"
            )));
        }
        active.entry(k as u64).or_default().insert(neuron);
    }
    let last = match active.keys().next_back() {
        None => return Ok(OccurrenceLog::empty(n)),
        Some(&k) => k,
    };
    let bins = (0..=last)
        .map(|k| Bin {
            index: k,
            active: active
                .get(&k)
                .map(|s| s.iter().copied().collect())
                .unwrap_or_default(),
        })
        .collect();
    Ok(OccurrenceLog { n, bins })
}

/// Reads `neuron_id,timestamp` rows.
pub fn parse_event_csv(text: &str, header: bool) -> Result<Vec<(usize, f64)>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(header)
        .from_reader(text.as_bytes());
    let mut events = Vec::new();
    for record in reader.records() {
        let record = record?;
        let line = record
            .position()
            .map_or(events.len() + 1, |p| p.line() as usize);
        if record.len() != 2 {
            return Err(Error::Dimension(format!(
                "line {line} has {} fields, expected neuron_id,timestamp",
                record.len()
            )));
        }
        let neuron = record[0]
            .trim()
            .parse::<usize>()
            .map_err(|e| Error::Parse {
                row: line,
                column: 1,
                message: e.to_string(),
            })?;
        let t = record[1].trim().parse::<f64>().map_err(|e| Error::Parse {
            row: line,
            column: 2,
            message: e.to_string(),
        })?;
        events.push((neuron, t));
    }
    Ok(events)
}

/// Distinct nonempty active sets of a log as codewords.
pub fn code_of_log(log: &OccurrenceLog) -> Code {
    let words = log.bins.iter().filter(|b| !b.active.is_empty()).map(|b| {
        b.active
            .indicator(log.n)
            .expect("log invariant: active sets respect n")
    });
    Code::new(log.n, words).expect("log invariant: all words have length n")
}

/// The smallest simplicial complex on neurons `0..n` containing every pattern.
pub fn generated_complex(patterns: &[Pattern], n: usize) -> Result<SimplicialComplex> {
    let labels = (0..n).map(|i| i.to_string()).collect();
    SimplicialComplex::from_generators(labels, patterns.iter().map(|p| p.members.clone()))
}
