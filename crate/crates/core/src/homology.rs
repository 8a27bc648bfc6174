//! Simplicial homology and persistence over GF(2).
//!
//! Chains are sets of simplices; a column of a boundary matrix is the sorted
//! list of row positions of a simplex's facets, and column addition is
//! symmetric difference.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

use crate::complex::{alternating_sum, for_each_combination, Simplex, SimplicialComplex};
use crate::error::{Error, Result};
use crate::hyperstructure::Hyperstructure;
use crate::topology::level_complex;

/// Default cap on the dimension of enumerated faces.
pub const DEFAULT_DIM_CAP: usize = 5;

/// The boundary map from `d`-chains to `(d-1)`-chains.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundaryMatrix {
    pub dim: usize,
    /// `(d-1)`-simplices, lexicographic.
    pub rows: Vec<Simplex>,
    /// `d`-simplices, lexicographic.
    pub cols: Vec<Simplex>,
    /// For each column, the sorted row positions of its facets.
    pub columns: Vec<Vec<usize>>,
}

impl BoundaryMatrix {
    pub fn rank(&self) -> usize {
        gf2_rank(self.columns.clone())
    }

    fn between(rows: Vec<Simplex>, cols: Vec<Simplex>, dim: usize) -> Self {
        let row_index: HashMap<&[usize], usize> = rows
            .iter()
            .enumerate()
            .map(|(i, s)| (s.as_slice(), i))
            .collect();
        let columns = cols
            .iter()
            .map(|s| {
                if dim == 0 {
                    return Vec::new();
                }
                let mut col: Vec<usize> = facets(s).map(|f| row_index[f.as_slice()]).collect();
                col.sort_unstable();
                col
            })
            .collect();
        BoundaryMatrix {
            dim,
            rows,
            cols,
            columns,
        }
    }
}

/// Facets of a simplex, each obtained by dropping one vertex.
fn facets(s: &[usize]) -> impl Iterator<Item = Simplex> + '_ {
    (0..s.len()).map(move |skip| {
        s.iter()
            .enumerate()
            .filter_map(|(i, &v)| (i != skip).then_some(v))
            .collect()
    })
}

/// In-place sparse column reduction; returns the pivot (lowest row) of every
/// column after reduction, `None` for columns reduced to zero.
fn reduce(columns: &mut [Vec<usize>]) -> Vec<Option<usize>> {
    let mut owner: HashMap<usize, usize> = HashMap::new();
    let mut lows = vec![None; columns.len()];
    for j in 0..columns.len() {
        while let Some(&low) = columns[j].last() {
            match owner.get(&low) {
                Some(&k) => {
                    let other = std::mem::take(&mut columns[k]);
                    columns[j] = symmetric_difference(&columns[j], &other);
                    columns[k] = other;
                }
                None => {
                    owner.insert(low, j);
                    lows[j] = Some(low);
                    break;
                }
            }
        }
    }
    lows
}

fn symmetric_difference(a: &[usize], b: &[usize]) -> Vec<usize> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

/// Rank over GF(2) of a matrix given by sorted sparse columns.
pub fn gf2_rank(mut columns: Vec<Vec<usize>>) -> usize {
    reduce(&mut columns).iter().filter(|l| l.is_some()).count()
}

/// Boundary matrix of dimension `d`. Requires `d <= dim_cap`.
pub fn boundary_matrix(k: &SimplicialComplex, d: usize, dim_cap: usize) -> Result<BoundaryMatrix> {
    if d > dim_cap {
        return Err(Error::DimCap {
            found: d,
            cap: dim_cap,
        });
    }
    let rows = if d == 0 { Vec::new() } else { k.faces(d - 1) };
    Ok(BoundaryMatrix::between(rows, k.faces(d), d))
}

/// Betti numbers `b_0..=b_max_dim` over GF(2).
///
/// Faces are enumerated up to dimension `max_dim + 1` (or the dimension of
/// the complex, if smaller); that dimension may not exceed `dim_cap`.
pub fn betti(k: &SimplicialComplex, max_dim: usize, dim_cap: usize) -> Result<Vec<usize>> {
    let Some(top) = k.dim() else {
        return Ok(vec![0; max_dim + 1]);
    };
    let needed = top.min(max_dim + 1);
    if needed > dim_cap {
        return Err(Error::DimCap {
            found: needed,
            cap: dim_cap,
        });
    }
    let faces = k.faces_up_to(needed);
    // ranks[d] = rank of the boundary from d-chains; ranks[0] = 0
    let mut ranks = vec![0usize; max_dim + 2];
    for d in 1..=needed {
        ranks[d] = BoundaryMatrix::between(faces[d - 1].clone(), faces[d].clone(), d).rank();
    }
    Ok((0..=max_dim)
        .map(|d| {
            let f = faces.get(d).map_or(0, Vec::len);
            f - ranks[d] - ranks[d + 1]
        })
        .collect())
}

/// Betti numbers up to the dimension of the complex (empty for the empty
/// complex).
pub fn betti_numbers(k: &SimplicialComplex, dim_cap: usize) -> Result<Vec<usize>> {
    match k.dim() {
        None => Ok(Vec::new()),
        Some(top) => betti(k, top, dim_cap),
    }
}

/// Alternating sum of Betti numbers.
pub fn euler_from_betti(betti: &[usize]) -> i64 {
    alternating_sum(betti)
}

#[derive(Debug, Clone, PartialEq)]
pub struct FilteredSimplex {
    pub simplex: Simplex,
    pub value: f64,
}

/// Simplices of a complex with real values, ordered by value, then dimension,
/// then lexicographically.
#[derive(Debug, Clone, PartialEq)]
pub struct Filtration {
    complex: SimplicialComplex,
    entries: Vec<FilteredSimplex>,
}

impl Filtration {
    /// Orders the given simplices. Monotonicity is checked by
    /// [`Filtration::validate`] and by [`persistence`], not here.
    pub fn new(
        complex: SimplicialComplex,
        values: impl IntoIterator<Item = (Simplex, f64)>,
    ) -> Self {
        let mut entries: Vec<FilteredSimplex> = values
            .into_iter()
            .map(|(simplex, value)| FilteredSimplex { simplex, value })
            .collect();
        entries.sort_by(|a, b| {
            a.value
                .total_cmp(&b.value)
                .then_with(|| a.simplex.len().cmp(&b.simplex.len()))
                .then_with(|| a.simplex.cmp(&b.simplex))
        });
        Filtration { complex, entries }
    }

    /// Assigns `value(simplex)` to every face of the complex. The complex
    /// must not exceed `dim_cap`.
    pub fn from_fn(
        complex: SimplicialComplex,
        dim_cap: usize,
        mut value: impl FnMut(&[usize]) -> f64,
    ) -> Result<Self> {
        check_cap(&complex, dim_cap)?;
        let values: Vec<(Simplex, f64)> = complex
            .faces_up_to(dim_cap)
            .into_iter()
            .flatten()
            .map(|s| {
                let v = value(&s);
                (s, v)
            })
            .collect();
        Ok(Filtration::new(complex, values))
    }

    pub fn complex(&self) -> &SimplicialComplex {
        &self.complex
    }

    pub fn entries(&self) -> &[FilteredSimplex] {
        &self.entries
    }

    /// Distinct filtration values, ascending.
    pub fn values(&self) -> Vec<f64> {
        let mut v: Vec<f64> = self.entries.iter().map(|e| e.value).collect();
        v.dedup();
        v
    }

    pub fn value_of(&self, simplex: &[usize]) -> Option<f64> {
        self.entries
            .iter()
            .find(|e| e.simplex == simplex)
            .map(|e| e.value)
    }

    /// Every facet is present with a value no larger than its coface.
    pub fn validate(&self) -> Result<()> {
        let index: HashMap<&[usize], f64> = self
            .entries
            .iter()
            .map(|e| (e.simplex.as_slice(), e.value))
            .collect();
        for e in &self.entries {
            if e.value.is_nan() {
                return Err(Error::Invalid(format!(
                    "simplex {:?} has a NaN value",
                    e.simplex
                )));
            }
            if e.simplex.len() < 2 {
                continue;
            }
            for f in facets(&e.simplex) {
                match index.get(f.as_slice()) {
                    None => {
                        return Err(Error::Invalid(format!(
                            "face {f:?} of {:?} is missing from the filtration",
                            e.simplex
                        )))
                    }
                    Some(&fv) if fv > e.value => {
                        return Err(Error::NotMonotone {
                            face: f,
                            face_value: fv,
                            coface: e.simplex.clone(),
                            coface_value: e.value,
                        })
                    }
                    Some(_) => {}
                }
            }
        }
        Ok(())
    }

    /// The subcomplex of simplices with value at most `theta`.
    pub fn sublevel(&self, theta: f64) -> SimplicialComplex {
        SimplicialComplex::from_generators(
            self.complex.vertex_labels().to_vec(),
            self.entries
                .iter()
                .filter(|e| e.value <= theta)
                .map(|e| e.simplex.clone()),
        )
        .expect("filtration simplices come from the complex")
    }
}

fn check_cap(k: &SimplicialComplex, dim_cap: usize) -> Result<()> {
    match k.dim() {
        Some(d) if d > dim_cap => Err(Error::DimCap {
            found: d,
            cap: dim_cap,
        }),
        _ => Ok(()),
    }
}

/// Frequency filtration of the level-`i` complex: with `c_max` the largest
/// bond count at level `i`, a simplex enters at `c_max - count` of the most
/// frequent bond containing it. Vertices in no level-`i` bond enter at 0.
pub fn frequency_filtration(h: &Hyperstructure, i: usize, dim_cap: usize) -> Result<Filtration> {
    let complex = level_complex(h, i)?;
    check_cap(&complex, dim_cap)?;
    let bonds = h.level(i)?;
    let c_max = bonds.iter().map(|b| b.count).max().unwrap_or(0);
    let mut values: BTreeMap<Simplex, f64> = BTreeMap::new();
    for b in bonds {
        let v = (c_max - b.count) as f64;
        for size in 1..=b.constituents.len().min(dim_cap + 1) {
            for_each_combination(&b.constituents, size, |face| {
                values
                    .entry(face.to_vec())
                    .and_modify(|old| *old = old.min(v))
                    .or_insert(v);
            });
        }
    }
    for s in complex.maximal_simplices() {
        if s.len() == 1 {
            values.entry(s.clone()).or_insert(0.0);
        }
    }
    Ok(Filtration::new(complex, values))
}

/// Persistence interval; `death == None` means the class never dies.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub dim: usize,
    pub birth: f64,
    pub death: Option<f64>,
}

impl Interval {
    /// Whether the class is alive at `theta` (half-open `[birth, death)`).
    pub fn contains(&self, theta: f64) -> bool {
        self.birth <= theta && self.death.is_none_or(|d| theta < d)
    }

    pub fn is_infinite(&self) -> bool {
        self.death.is_none()
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Barcode {
    pub intervals: Vec<Interval>,
}

impl Barcode {
    pub fn in_dim(&self, dim: usize) -> impl Iterator<Item = &Interval> {
        self.intervals.iter().filter(move |i| i.dim == dim)
    }

    /// Number of intervals of dimension `dim` alive at `theta`.
    pub fn rank_at(&self, dim: usize, theta: f64) -> usize {
        self.in_dim(dim).filter(|i| i.contains(theta)).count()
    }
}

fn interval_order(a: &Interval, b: &Interval) -> std::cmp::Ordering {
    let death = |i: &Interval| i.death.unwrap_or(f64::INFINITY);
    a.dim
        .cmp(&b.dim)
        .then_with(|| a.birth.total_cmp(&b.birth))
        .then_with(|| death(a).total_cmp(&death(b)))
}

/// Standard column reduction in filtration order. Zero-length intervals are
/// dropped unless `keep_zero`.
pub fn persistence(f: &Filtration, keep_zero: bool) -> Result<Barcode> {
    f.validate()?;
    let entries = f.entries();
    let index: HashMap<&[usize], usize> = entries
        .iter()
        .enumerate()
        .map(|(i, e)| (e.simplex.as_slice(), i))
        .collect();
    let mut columns: Vec<Vec<usize>> = entries
        .iter()
        .map(|e| {
            if e.simplex.len() < 2 {
                return Vec::new();
            }
            let mut col: Vec<usize> = facets(&e.simplex).map(|s| index[s.as_slice()]).collect();
            col.sort_unstable();
            col
        })
        .collect();
    let lows = reduce(&mut columns);

    let mut paired = vec![false; entries.len()];
    let mut intervals = Vec::new();
    for (j, low) in lows.iter().enumerate() {
        if let Some(i) = *low {
            paired[i] = true;
            paired[j] = true;
            let (birth, death) = (entries[i].value, entries[j].value);
            if keep_zero || death > birth {
                intervals.push(Interval {
                    dim: entries[i].simplex.len() - 1,
                    birth,
                    death: Some(death),
                });
            }
        }
    }
    for (j, e) in entries.iter().enumerate() {
        if !paired[j] && lows[j].is_none() {
            intervals.push(Interval {
                dim: e.simplex.len() - 1,
                birth: e.value,
                death: None,
            });
        }
    }
    intervals.sort_by(interval_order);
    Ok(Barcode { intervals })
}

/// Frequency barcodes of every level, bottom-up.
pub fn barcode_sequence(
    h: &Hyperstructure,
    dim_cap: usize,
    keep_zero: bool,
) -> Result<Vec<(usize, Barcode)>> {
    (1..=h.k())
        .map(|i| {
            Ok((
                i,
                persistence(&frequency_filtration(h, i, dim_cap)?, keep_zero)?,
            ))
        })
        .collect()
}

fn format_value(v: Option<f64>) -> String {
    match v {
        None => "inf".to_string(),
        Some(x) if x.is_infinite() => "inf".to_string(),
        Some(x) => format!("{x}"),
    }
}

/// CSV with header `level,dim,birth,death`, rows ordered by level, dimension,
/// birth and death; infinite deaths are written `inf`.
pub fn barcodes_to_csv(sequence: &[(usize, Barcode)]) -> String {
    let mut rows: Vec<(usize, Interval)> = sequence
        .iter()
        .flat_map(|(level, b)| b.intervals.iter().map(move |i| (*level, *i)))
        .collect();
    rows.sort_by(|a, b| a.0.cmp(&b.0).then_with(|| interval_order(&a.1, &b.1)));
    let mut out = String::from("level,dim,birth,death\n");
    for (level, i) in rows {
        let _ = writeln!(
            out,
            "{level},{},{},{}",
            i.dim,
            format_value(Some(i.birth)),
            format_value(i.death)
        );
    }
    out
}
