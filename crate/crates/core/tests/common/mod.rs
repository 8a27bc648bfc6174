//! Fixtures and independent oracles shared by the integration tests.
//!
//! Nothing here calls into the homology, clique, or cover code it is used to
//! check: faces are enumerated as bitmasks, ranks come from dense Gaussian
//! elimination, covers from exhaustive subset search.

#![allow(dead_code)]

use std::collections::BTreeSet;

use hypercode::codes::{Bin, OccurrenceLog, Pattern};
use rand::seq::SliceRandom;
use rand::Rng;

pub const A: [usize; 3] = [0, 1, 2];
pub const B: [usize; 3] = [3, 4, 5];
pub const C: [usize; 3] = [6, 7, 8];

pub const TRIAD_CSV: &str = "\
1,0,0,1,0,1
1,0,0,1,0,1
1,0,0,1,0,1
0,1,0,1,1,0
0,1,0,1,1,0
0,1,0,1,1,0
0,0,1,0,1,1
0,0,1,0,1,1
0,0,1,0,1,1
";

pub fn log_of(n: usize, sets: &[Vec<usize>]) -> OccurrenceLog {
    OccurrenceLog::new(
        n,
        sets.iter()
            .enumerate()
            .map(|(i, s)| Bin {
                index: i as u64,
                active: Pattern::new(s.iter().copied()),
            })
            .collect(),
    )
    .unwrap()
}

fn union(parts: &[&[usize]]) -> Vec<usize> {
    let set: BTreeSet<usize> = parts.iter().flat_map(|p| p.iter().copied()).collect();
    set.into_iter().collect()
}

/// Active sets t_1..t_6: A; B; C; A+B; B+C; A+C.
pub fn triad_sets() -> Vec<Vec<usize>> {
    vec![
        A.to_vec(),
        B.to_vec(),
        C.to_vec(),
        union(&[&A, &B]),
        union(&[&B, &C]),
        union(&[&A, &C]),
    ]
}

pub fn triad_log() -> OccurrenceLog {
    log_of(9, &triad_sets())
}

/// TRIAD followed by t_7 = A+B+C.
pub fn triad_plus_all_log() -> OccurrenceLog {
    let mut sets = triad_sets();
    sets.push(union(&[&A, &B, &C]));
    log_of(9, &sets)
}

/// TRIAD without t_6.
pub fn triad_minus_last_log() -> OccurrenceLog {
    let mut sets = triad_sets();
    sets.pop();
    log_of(9, &sets)
}

// ---------------------------------------------------------------------------
// Homology oracle: dense GF(2) rank-nullity over bitmask faces.

/// Every nonempty subset of some generator, as vertex bitmasks.
pub fn all_faces(generators: &[Vec<usize>]) -> BTreeSet<u32> {
    let mut faces = BTreeSet::new();
    for g in generators {
        let mask: u32 = g.iter().map(|&v| 1u32 << v).sum();
        // enumerate submasks
        let mut sub = mask;
        while sub != 0 {
            faces.insert(sub);
            sub = (sub - 1) & mask;
        }
    }
    faces
}

/// Rank over GF(2) by row reduction on a dense 0/1 matrix.
pub fn dense_rank(mut rows: Vec<Vec<bool>>) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows.len()).find(|&r| rows[r][c]) else {
            continue;
        };
        rows.swap(rank, p);
        let pivot = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != rank && row[c] {
                for (x, y) in row.iter_mut().zip(&pivot) {
                    *x ^= *y;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Betti numbers `b_0..=b_top` of the complex generated by vertex sets over
/// at most 32 vertices.
pub fn oracle_betti(generators: &[Vec<usize>]) -> Vec<usize> {
    let faces = all_faces(generators);
    let top = match faces.iter().map(|m| m.count_ones() as usize).max() {
        None => return Vec::new(),
        Some(s) => s - 1,
    };
    let by_dim: Vec<Vec<u32>> = (0..=top + 1)
        .map(|d| {
            faces
                .iter()
                .copied()
                .filter(|m| m.count_ones() as usize == d + 1)
                .collect()
        })
        .collect();
    // rank of the boundary from dimension d to d-1
    let rank = |d: usize| -> usize {
        if d == 0 || by_dim[d].is_empty() {
            return 0;
        }
        let rows = &by_dim[d - 1];
        let matrix: Vec<Vec<bool>> = rows
            .iter()
            .map(|&r| {
                by_dim[d]
                    .iter()
                    .map(|&c| c & r == r && (c ^ r).count_ones() == 1)
                    .collect()
            })
            .collect();
        dense_rank(matrix)
    };
    (0..=top)
        .map(|d| by_dim[d].len() - rank(d) - rank(d + 1))
        .collect()
}

/// Random generator sets on at most `max_vertices` vertices with simplices of
/// dimension at most `max_dim`.
pub fn random_generators<R: Rng>(
    rng: &mut R,
    max_vertices: usize,
    max_dim: usize,
) -> (usize, Vec<Vec<usize>>) {
    let n = rng.gen_range(1..=max_vertices);
    let count = rng.gen_range(1..=8);
    let vertices: Vec<usize> = (0..n).collect();
    let gens = (0..count)
        .map(|_| {
            let size = rng.gen_range(1..=(max_dim + 1).min(n));
            let mut g: Vec<usize> = vertices.choose_multiple(rng, size).copied().collect();
            g.sort_unstable();
            g
        })
        .collect();
    (n, gens)
}

/// A log in which each of a few random patterns recurs up to `max_count`
/// times, bins shuffled.
pub fn random_weighted_log<R: Rng>(rng: &mut R, max_n: usize, max_count: usize) -> OccurrenceLog {
    let n = rng.gen_range(2..=max_n);
    let neurons: Vec<usize> = (0..n).collect();
    let m = rng.gen_range(1..=6);
    let mut sets = Vec::new();
    for _ in 0..m {
        let size = rng.gen_range(1..=4.min(n));
        let p: Vec<usize> = neurons.choose_multiple(rng, size).copied().collect();
        for _ in 0..rng.gen_range(1..=max_count) {
            sets.push(p.clone());
        }
    }
    sets.shuffle(rng);
    log_of(n, &sets)
}

// ---------------------------------------------------------------------------
// Cover oracle.

/// Every subset of `known` that partitions `active`, as sorted index lists.
pub fn all_exact_covers(active: &[usize], known: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let target: BTreeSet<usize> = active.iter().copied().collect();
    let mut covers = Vec::new();
    for mask in 1u32..(1 << known.len()) {
        let chosen: Vec<usize> = (0..known.len()).filter(|i| mask >> i & 1 == 1).collect();
        let total: usize = chosen.iter().map(|&i| known[i].len()).sum();
        let covered: BTreeSet<usize> = chosen
            .iter()
            .flat_map(|&i| known[i].iter().copied())
            .collect();
        if total == covered.len() && covered == target {
            covers.push(chosen);
        }
    }
    covers
}

// ---------------------------------------------------------------------------
// Nested-set rendering used as expected canonical forms.

pub fn leaf(members: &[usize]) -> String {
    let parts: Vec<String> = members.iter().map(|m| m.to_string()).collect();
    format!("{{{}}}", parts.join(","))
}

/// Children given as (sort key, rendering); rendered in key order.
pub fn nest(mut children: Vec<(Vec<usize>, String)>) -> String {
    children.sort();
    let parts: Vec<String> = children.into_iter().map(|c| c.1).collect();
    format!("{{{}}}", parts.join(","))
}

/// Canonical rendering of a level-2 bond binding the given neuron patterns.
pub fn level2_form(patterns: &[Vec<usize>]) -> String {
    nest(patterns.iter().map(|p| (p.clone(), leaf(p))).collect())
}
