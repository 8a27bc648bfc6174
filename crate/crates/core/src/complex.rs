//! Abstract simplicial complexes stored by their maximal simplices.
//!
//! Faces are never materialised eagerly: a single generator on `m` vertices
//! implies `2^m - 1` faces, so callers enumerate faces per dimension up to a
//! cap of their choosing.

use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A simplex is a strictly increasing list of vertex indices.
pub type Simplex = Vec<usize>;

/// Downward-closed set of simplices, represented by its inclusion-maximal
/// members. Vertex labels are opaque strings used only for display and export.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawComplex")]
pub struct SimplicialComplex {
    #[serde(rename = "vertices")]
    vertex_labels: Vec<String>,
    maximal: Vec<Simplex>,
}

#[derive(Deserialize)]
struct RawComplex {
    vertices: Vec<String>,
    maximal: Vec<Vec<usize>>,
}

impl TryFrom<RawComplex> for SimplicialComplex {
    type Error = Error;

    fn try_from(raw: RawComplex) -> Result<Self> {
        SimplicialComplex::from_generators(raw.vertices, raw.maximal)
    }
}

impl SimplicialComplex {
    pub fn empty() -> Self {
        SimplicialComplex {
            vertex_labels: Vec::new(),
            maximal: Vec::new(),
        }
    }

    /// Smallest complex containing every generator. Generators are sorted and
    /// deduplicated; empty generators are ignored; any generator contained in
    /// another is absorbed.
    pub fn from_generators<I, S>(vertex_labels: Vec<String>, generators: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: IntoIterator<Item = usize>,
    {
        let nv = vertex_labels.len();
        let mut candidates: Vec<Simplex> = Vec::new();
        for g in generators {
            let mut s: Simplex = g.into_iter().collect();
            s.sort_unstable();
            s.dedup();
            if s.is_empty() {
                continue;
            }
            if let Some(&v) = s.last() {
                if v >= nv {
                    return Err(Error::Invalid(format!(
                        "vertex index {v} out of range for {nv} labelled vertices"
                    )));
                }
            }
            candidates.push(s);
        }
        Ok(SimplicialComplex {
            vertex_labels,
            maximal: maximal_only(candidates),
        })
    }

    pub fn vertex_labels(&self) -> &[String] {
        &self.vertex_labels
    }

    /// Maximal simplices in lexicographic order.
    pub fn maximal_simplices(&self) -> &[Simplex] {
        &self.maximal
    }

    pub fn is_empty(&self) -> bool {
        self.maximal.is_empty()
    }

    /// Dimension of the largest simplex; `None` for the empty complex.
    pub fn dim(&self) -> Option<usize> {
        self.maximal.iter().map(|s| s.len() - 1).max()
    }

    /// Vertices that actually occur in some simplex.
    pub fn vertices(&self) -> Vec<usize> {
        let set: BTreeSet<usize> = self.maximal.iter().flatten().copied().collect();
        set.into_iter().collect()
    }

    pub fn contains(&self, simplex: &[usize]) -> bool {
        if simplex.is_empty() {
            return !self.maximal.is_empty();
        }
        self.maximal.iter().any(|m| is_subset(simplex, m))
    }

    /// All `d`-simplices, lexicographically sorted.
    pub fn faces(&self, d: usize) -> Vec<Simplex> {
        let size = d + 1;
        let mut out = BTreeSet::new();
        for m in &self.maximal {
            if m.len() < size {
                continue;
            }
            for_each_combination(m, size, |c| {
                out.insert(c.to_vec());
            });
        }
        out.into_iter().collect()
    }

    /// Faces grouped by dimension, for dimensions `0..=min(cap, dim)`.
    pub fn faces_up_to(&self, cap: usize) -> Vec<Vec<Simplex>> {
        match self.dim() {
            None => Vec::new(),
            Some(top) => (0..=top.min(cap)).map(|d| self.faces(d)).collect(),
        }
    }

    /// Face counts `f_0, f_1, ...` up to `min(cap, dim)`.
    pub fn f_vector(&self, cap: usize) -> Vec<usize> {
        self.faces_up_to(cap).iter().map(Vec::len).collect()
    }

    /// Alternating sum of face counts. Only the true Euler characteristic
    /// when `cap >= dim`.
    pub fn euler_characteristic(&self, cap: usize) -> i64 {
        alternating_sum(&self.f_vector(cap))
    }
}

pub(crate) fn alternating_sum(values: &[usize]) -> i64 {
    values
        .iter()
        .enumerate()
        .map(|(d, &v)| if d % 2 == 0 { v as i64 } else { -(v as i64) })
        .sum()
}

/// Both slices sorted ascending.
pub(crate) fn is_subset(small: &[usize], big: &[usize]) -> bool {
    if small.len() > big.len() {
        return false;
    }
    let mut it = big.iter();
    'outer: for x in small {
        for y in it.by_ref() {
            if y == x {
                continue 'outer;
            }
            if y > x {
                return false;
            }
        }
        return false;
    }
    true
}

/// Keep only inclusion-maximal sets; output sorted lexicographically.
fn maximal_only(mut candidates: Vec<Simplex>) -> Vec<Simplex> {
    candidates.sort_unstable_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.cmp(b)));
    candidates.dedup();
    let mut kept: Vec<Simplex> = Vec::new();
    let mut by_vertex: HashMap<usize, Vec<usize>> = HashMap::new();
    for c in candidates {
        let absorbed = {
            let pool = c
                .iter()
                .map(|v| by_vertex.get(v).map(Vec::as_slice).unwrap_or(&[]))
                .min_by_key(|l| l.len())
                .unwrap_or(&[]);
            pool.iter().any(|&k| is_subset(&c, &kept[k]))
        };
        if absorbed {
            continue;
        }
        let idx = kept.len();
        for &v in &c {
            by_vertex.entry(v).or_default().push(idx);
        }
        kept.push(c);
    }
    kept.sort_unstable();
    kept
}

/// Calls `f` with every `size`-subset of `items`, in lexicographic order of
/// positions.
pub(crate) fn for_each_combination<F: FnMut(&[usize])>(items: &[usize], size: usize, mut f: F) {
    let n = items.len();
    if size > n {
        return;
    }
    if size == 0 {
        f(&[]);
        return;
    }
    let mut idx: Vec<usize> = (0..size).collect();
    let mut buf: Vec<usize> = idx.iter().map(|&i| items[i]).collect();
    loop {
        f(&buf);
        // advance the rightmost index that still has room
        let mut i = size;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if idx[i] != i + n - size {
                break;
            }
            if i == 0 {
                return;
            }
        }
        idx[i] += 1;
        for j in i + 1..size {
            idx[j] = idx[j - 1] + 1;
        }
        for j in i..size {
            buf[j] = items[idx[j]];
        }
    }
}
