//! Level complexes, gluing graphs, bond composition and the nerve of a
//! hyperstructure.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::codes::generated_complex;
use crate::complex::SimplicialComplex;
use crate::error::{Error, Result};
use crate::hyperstructure::Hyperstructure;

/// Default limit on the number of maximal cliques per gluing graph.
pub const DEFAULT_CLIQUE_BUDGET: usize = 1_000_000;

pub fn bond_label(level: usize, id: usize) -> String {
    format!("{level}:{id}")
}

/// `Δ(C_i)`. Level 1 lives on neurons; level `i >= 2` lives on the level-(i-1)
/// bonds, with those bound by no level-`i` bond kept as isolated vertices.
pub fn level_complex(h: &Hyperstructure, i: usize) -> Result<SimplicialComplex> {
    let bonds = h.level(i)?;
    if i == 1 {
        return generated_complex(&h.patterns(), h.n());
    }
    let below = h.level(i - 1)?.len();
    let mut covered = vec![false; below];
    for b in bonds {
        for &c in &b.constituents {
            covered[c] = true;
        }
    }
    let labels = (0..below).map(|id| bond_label(i - 1, id)).collect();
    let isolated = (0..below).filter(|&v| !covered[v]).map(|v| vec![v]);
    SimplicialComplex::from_generators(
        labels,
        bonds.iter().map(|b| b.constituents.clone()).chain(isolated),
    )
}

/// The boundary map from level `from_level` to `to_level = from_level - 1`,
/// tabulated by bond id.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Correspondence {
    pub from_level: usize,
    pub to_level: usize,
    pub map: Vec<Vec<usize>>,
}

/// Correspondence from level `i + 1` down to level `i`.
pub fn delta_correspondence(h: &Hyperstructure, i: usize) -> Result<Correspondence> {
    if i == 0 || i + 1 > h.k() {
        return Err(Error::Range {
            level: i,
            valid: if h.k() >= 2 {
                format!("1..={}", h.k() - 1)
            } else {
                "none".into()
            },
        });
    }
    let map = h
        .level(i + 1)?
        .iter()
        .map(|b| h.boundary(i + 1, b.id).map(<[usize]>::to_vec))
        .collect::<Result<_>>()?;
    Ok(Correspondence {
        from_level: i + 1,
        to_level: i,
        map,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GluingEdge {
    pub a: usize,
    pub b: usize,
    /// Shared part of the two downsets at depth `level_j`.
    pub overlap: Vec<usize>,
}

/// Which level-`i` bonds glue along a nonempty overlap of their level-`j`
/// downsets.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GluingGraph {
    pub level_i: usize,
    pub level_j: usize,
    pub vertices: Vec<usize>,
    /// Sorted by `(a, b)` with `a < b`.
    pub edges: Vec<GluingEdge>,
}

impl GluingGraph {
    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.vertices.len()];
        for e in &self.edges {
            adj[e.a].push(e.b);
            adj[e.b].push(e.a);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        adj
    }

    pub fn edge(&self, a: usize, b: usize) -> Option<&GluingEdge> {
        let (a, b) = if a < b { (a, b) } else { (b, a) };
        self.edges
            .binary_search_by(|e| (e.a, e.b).cmp(&(a, b)))
            .ok()
            .map(|i| &self.edges[i])
    }

    pub fn to_dot(&self) -> String {
        let mut out = format!("graph gluing_{}_{} {{\n", self.level_i, self.level_j);
        for &v in &self.vertices {
            let _ = writeln!(out, "  \"{}\";", bond_label(self.level_i, v));
        }
        for e in &self.edges {
            let overlap: Vec<String> = e.overlap.iter().map(|x| x.to_string()).collect();
            let _ = writeln!(
                out,
                "  \"{}\" -- \"{}\" [label=\"{{{}}}\"];",
                bond_label(self.level_i, e.a),
                bond_label(self.level_i, e.b),
                overlap.join(",")
            );
        }
        out.push_str("}\n");
        out
    }
}

fn check_depth(h: &Hyperstructure, i: usize, j: usize) -> Result<()> {
    h.level(i)?;
    if j >= i {
        return Err(Error::Range {
            level: j,
            valid: format!("0..{i}"),
        });
    }
    Ok(())
}

pub fn gluing_graph(h: &Hyperstructure, i: usize, j: usize) -> Result<GluingGraph> {
    check_depth(h, i, j)?;
    let downsets = h.level_downsets(i, j)?;
    let mut edges = Vec::new();
    for a in 0..downsets.len() {
        for b in a + 1..downsets.len() {
            let overlap: Vec<usize> = downsets[a].intersection(&downsets[b]).copied().collect();
            if !overlap.is_empty() {
                edges.push(GluingEdge { a, b, overlap });
            }
        }
    }
    Ok(GluingGraph {
        level_i: i,
        level_j: j,
        vertices: (0..downsets.len()).collect(),
        edges,
    })
}

/// Result of gluing a chain of bonds `b_1 □ b_2 □ ... □ b_m`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Composite {
    pub level: usize,
    pub depth: usize,
    pub ids: Vec<usize>,
    /// Union of the level-`depth` downsets.
    pub union: Vec<usize>,
    /// Overlap used at each consecutive gluing.
    pub overlaps: Vec<Vec<usize>>,
}

/// Glues level-`i` bonds in the given order along their level-`j` downsets.
/// Every consecutive pair must overlap. Does not modify `h`.
pub fn compose_bonds(h: &Hyperstructure, i: usize, ids: &[usize], j: usize) -> Result<Composite> {
    check_depth(h, i, j)?;
    if ids.is_empty() {
        return Err(Error::Invalid("composition of no bonds".into()));
    }
    let downsets = ids
        .iter()
        .map(|&id| h.downset(i, id, j))
        .collect::<Result<Vec<_>>>()?;
    let mut overlaps = Vec::new();
    for (w, pair) in downsets.windows(2).enumerate() {
        let overlap: Vec<usize> = pair[0].intersection(&pair[1]).copied().collect();
        if overlap.is_empty() {
            return Err(Error::Composition {
                level: i,
                depth: j,
                a: ids[w],
                b: ids[w + 1],
            });
        }
        overlaps.push(overlap);
    }
    let union: BTreeSet<usize> = downsets.into_iter().flatten().collect();
    Ok(Composite {
        level: i,
        depth: j,
        ids: ids.to_vec(),
        union: union.into_iter().collect(),
        overlaps,
    })
}

#[derive(
    Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize, clap::ValueEnum,
)]
#[serde(rename_all = "kebab-case")]
pub enum NerveRule {
    /// A set of bonds spans a simplex when every pair glues (flag complex).
    #[default]
    Pairwise,
    /// A set of bonds spans a simplex when its gluing subgraph is connected,
    /// i.e. the bonds compose in some order.
    Connected,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NerveConfig {
    pub rule: NerveRule,
    /// Levels whose bonds become nerve vertices; `None` means all.
    pub include_levels: Option<Vec<usize>>,
    /// Gluing depths per level; levels absent here use every `j < i`.
    pub include_j: BTreeMap<usize, Vec<usize>>,
    pub clique_budget: usize,
}

impl Default for NerveConfig {
    fn default() -> Self {
        NerveConfig {
            rule: NerveRule::Pairwise,
            include_levels: None,
            include_j: BTreeMap::new(),
            clique_budget: DEFAULT_CLIQUE_BUDGET,
        }
    }
}

impl NerveConfig {
    /// Included `(i, [j...])` strata, ascending.
    fn strata(&self, k: usize) -> Result<Vec<(usize, Vec<usize>)>> {
        let levels: BTreeSet<usize> = match &self.include_levels {
            None => (1..=k).collect(),
            Some(ls) => ls.iter().copied().collect(),
        };
        if let Some(&bad) = levels.iter().find(|&&l| l == 0 || l > k) {
            return Err(Error::Config(format!("nerve level {bad} outside 1..={k}")));
        }
        for (i, js) in &self.include_j {
            if !levels.contains(i) {
                return Err(Error::Config(format!(
                    "gluing depths given for excluded level {i}"
                )));
            }
            if let Some(j) = js.iter().find(|&&j| j >= *i) {
                return Err(Error::Config(format!(
                    "gluing depth {j} is not below level {i}"
                )));
            }
        }
        if self.clique_budget == 0 {
            return Err(Error::Config("clique budget must be positive".into()));
        }
        Ok(levels
            .into_iter()
            .map(|i| {
                let js = match self.include_j.get(&i) {
                    Some(js) => js
                        .iter()
                        .copied()
                        .collect::<BTreeSet<_>>()
                        .into_iter()
                        .collect(),
                    None => (0..i).collect(),
                };
                (i, js)
            })
            .collect())
    }
}

/// Maximal cliques by Bron–Kerbosch with pivoting. `adj` holds sorted
/// neighbour lists. Fails once more than `budget` cliques are found.
pub fn maximal_cliques(adj: &[Vec<usize>], budget: usize) -> Result<Vec<Vec<usize>>> {
    fn intersect(a: &[usize], b: &[usize]) -> Vec<usize> {
        let (mut i, mut j, mut out) = (0, 0, Vec::new());
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    out.push(a[i]);
                    i += 1;
                    j += 1;
                }
            }
        }
        out
    }

    fn expand(
        adj: &[Vec<usize>],
        r: &mut Vec<usize>,
        mut p: Vec<usize>,
        mut x: Vec<usize>,
        out: &mut Vec<Vec<usize>>,
        budget: usize,
    ) -> Result<()> {
        if p.is_empty() {
            if x.is_empty() {
                if out.len() == budget {
                    return Err(Error::CliqueBudget(budget));
                }
                let mut c = r.clone();
                c.sort_unstable();
                out.push(c);
            }
            return Ok(());
        }
        // pivot with the most neighbours in P
        let pivot = p
            .iter()
            .chain(&x)
            .copied()
            .max_by_key(|&u| (intersect(&p, &adj[u]).len(), std::cmp::Reverse(u)))
            .expect("P is nonempty");
        let todo: Vec<usize> = p
            .iter()
            .copied()
            .filter(|v| adj[pivot].binary_search(v).is_err())
            .collect();
        for v in todo {
            r.push(v);
            expand(
                adj,
                r,
                intersect(&p, &adj[v]),
                intersect(&x, &adj[v]),
                out,
                budget,
            )?;
            r.pop();
            p.retain(|&w| w != v);
            let pos = x.binary_search(&v).unwrap_or_else(|e| e);
            x.insert(pos, v);
        }
        Ok(())
    }

    let mut out = Vec::new();
    let all: Vec<usize> = (0..adj.len()).collect();
    expand(adj, &mut Vec::new(), all, Vec::new(), &mut out, budget)?;
    out.sort_unstable();
    Ok(out)
}

/// Connected components, each sorted, ordered by smallest member.
fn components(adj: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let mut seen = vec![false; adj.len()];
    let mut out = Vec::new();
    for start in 0..adj.len() {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut stack = vec![start];
        let mut comp = Vec::new();
        while let Some(v) = stack.pop() {
            comp.push(v);
            for &w in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out
}

/// Simplices contributed by one `(i, j)` stratum, in level-`i` bond ids.
pub fn stratum_simplices(
    h: &Hyperstructure,
    i: usize,
    j: usize,
    rule: NerveRule,
    budget: usize,
) -> Result<Vec<Vec<usize>>> {
    let graph = gluing_graph(h, i, j)?;
    let adj = graph.adjacency();
    match rule {
        NerveRule::Pairwise => maximal_cliques(&adj, budget),
        NerveRule::Connected => Ok(components(&adj)),
    }
}

/// The nerve: vertices are the bonds of the included levels (labelled
/// `level:id`, ordered by level then id); each included `(i, j)` stratum
/// contributes the simplices its rule allows. Every bond is at least a vertex.
pub fn nerve(h: &Hyperstructure, cfg: &NerveConfig) -> Result<SimplicialComplex> {
    let strata = cfg.strata(h.k())?;
    let mut labels = Vec::new();
    let mut generators: Vec<Vec<usize>> = Vec::new();
    for (i, js) in &strata {
        let offset = labels.len();
        let size = h.level(*i)?.len();
        labels.extend((0..size).map(|id| bond_label(*i, id)));
        generators.extend((0..size).map(|id| vec![offset + id]));
        for &j in js {
            for s in stratum_simplices(h, *i, j, cfg.rule, cfg.clique_budget)? {
                generators.push(s.into_iter().map(|v| offset + v).collect());
            }
        }
    }
    SimplicialComplex::from_generators(labels, generators)
}
