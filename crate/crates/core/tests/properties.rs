mod common;

use std::collections::BTreeSet;

use common::*;
use hypercode::codes::{
    bin_event_list, generated_complex, parse_spike_matrix, render_matrix, OccurrenceLog, Pattern,
    SpikeMatrix,
};
use hypercode::compare::{compare_levels, MapStatus};
use hypercode::homology::{
    betti, betti_numbers, euler_from_betti, frequency_filtration, persistence,
};
use hypercode::hyperstructure::{
    build_hyperstructure, realize_level1, BuildConfig, Decomposition, Realization,
};
use hypercode::topology::{gluing_graph, level_complex, nerve, NerveConfig, NerveRule};
use hypercode::{Hyperstructure, SimplicialComplex};
use proptest::prelude::*;

fn mask_sets(n: usize, masks: &[u16]) -> Vec<Vec<usize>> {
    masks
        .iter()
        .map(|m| (0..n).filter(|i| m >> i & 1 == 1).collect())
        .collect()
}

fn arb_log() -> impl Strategy<Value = OccurrenceLog> {
    (1usize..=8).prop_flat_map(|n| {
        prop::collection::vec(0u16..(1 << n), 0..24)
            .prop_map(move |masks| log_of(n, &mask_sets(n, &masks)))
    })
}

fn arb_config() -> impl Strategy<Value = BuildConfig> {
    (
        1usize..=4,
        any::<bool>(),
        1usize..=3,
        any::<bool>(),
        any::<bool>(),
    )
        .prop_map(
            |(max_level, subset, min_count, two_pass, keep_union_words)| BuildConfig {
                max_level,
                decomposition: if subset {
                    Decomposition::SubsetRealization
                } else {
                    Decomposition::ExactCover
                },
                min_count,
                two_pass,
                keep_union_words,
            },
        )
}

fn labels(n: usize) -> Vec<String> {
    (0..n).map(|i| i.to_string()).collect()
}

fn is_subset(a: &[usize], b: &[usize]) -> bool {
    a.iter().all(|x| b.contains(x))
}

fn check_antichain(k: &SimplicialComplex) -> Result<(), TestCaseError> {
    let max = k.maximal_simplices();
    for (i, a) in max.iter().enumerate() {
        for (j, b) in max.iter().enumerate() {
            prop_assert!(i == j || !is_subset(a, b), "{a:?} inside {b:?}");
        }
    }
    Ok(())
}

fn check_euler(k: &SimplicialComplex) -> Result<(), TestCaseError> {
    if let Some(top) = k.dim() {
        let b = betti(k, top, top.max(5)).unwrap();
        prop_assert_eq!(k.euler_characteristic(top), euler_from_betti(&b));
    }
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn matrix_text_round_trip(rows in 1usize..=32, cols in 1usize..=64, seed in any::<u64>()) {
        use rand::{Rng, SeedableRng};
        let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
        let cells: Vec<Vec<bool>> = (0..rows).map(|_| (0..cols).map(|_| rng.gen_bool(0.3)).collect()).collect();
        let m = SpikeMatrix::new(cells).unwrap();
        let (n, log) = parse_spike_matrix(&m.render(), false).unwrap();
        prop_assert_eq!(n, rows);
        prop_assert_eq!(&log, &m.to_log());
        prop_assert_eq!(render_matrix(&log).unwrap(), m.render());
    }

    #[test]
    fn binning_ignores_event_order(
        events in prop::collection::vec((0usize..6, 0.0f64..20.0), 0..40),
        shuffle_seed in any::<u64>(),
        dt in 0.1f64..3.0,
    ) {
        use rand::{seq::SliceRandom, SeedableRng};
        let mut shuffled = events.clone();
        shuffled.shuffle(&mut rand::rngs::StdRng::seed_from_u64(shuffle_seed));
        prop_assert_eq!(bin_event_list(&events, dt, 6).unwrap(), bin_event_list(&shuffled, dt, 6).unwrap());
    }

    #[test]
    fn generated_complex_is_an_antichain(masks in prop::collection::vec(1u16..(1 << 10), 0..12)) {
        let patterns: Vec<Pattern> = mask_sets(10, &masks).into_iter().map(Pattern::from).collect();
        let k = generated_complex(&patterns, 10).unwrap();
        check_antichain(&k)?;
        for p in &patterns {
            prop_assert!(k.contains(p.members()));
        }
    }

    #[test]
    fn build_invariants(log in arb_log(), config in arb_config()) {
        let h = build_hyperstructure(&log, &config).unwrap();
        prop_assert!(h.validate().is_ok());
        prop_assert!(h.k() <= config.max_level);
        for l in 2..=h.k() {
            for b in h.level(l).unwrap() {
                let min_below = b
                    .constituents
                    .iter()
                    .map(|&c| h.bond(l - 1, c).unwrap().count)
                    .min()
                    .unwrap();
                prop_assert!(b.count <= min_below);
                // realized only where every constituent is realized
                for bin in &b.bins {
                    for &c in &b.constituents {
                        prop_assert!(h.bond(l - 1, c).unwrap().bins.contains(bin));
                    }
                }
            }
        }
        let again = build_hyperstructure(&log, &config).unwrap();
        prop_assert_eq!(serde_json::to_string(&h).unwrap(), serde_json::to_string(&again).unwrap());
    }

    #[test]
    fn single_level_matches_realizations(log in arb_log(), subset in any::<bool>()) {
        let mode = if subset { Decomposition::SubsetRealization } else { Decomposition::ExactCover };
        let config = BuildConfig { max_level: 1, decomposition: mode, ..Default::default() };
        let h = build_hyperstructure(&log, &config).unwrap();
        let mut known: Vec<Pattern> = Vec::new();
        let mut outputs: BTreeSet<Pattern> = BTreeSet::new();
        for bin in log.bins().iter().filter(|b| !b.active.is_empty()) {
            match realize_level1(&bin.active, &known, mode) {
                Realization::Cover(ids) => outputs.extend(ids.iter().map(|&i| known[i].clone())),
                Realization::NewPattern(p) => {
                    outputs.insert(p.clone());
                    known.push(p);
                }
            }
        }
        let built: BTreeSet<Pattern> = h.patterns().into_iter().collect();
        prop_assert_eq!(built, outputs);
    }

    #[test]
    fn exact_cover_is_a_partition_and_complete(
        known_masks in prop::collection::vec(1u16..(1 << 7), 0..7),
        active_mask in 1u16..(1 << 7),
    ) {
        let known_sets = mask_sets(7, &known_masks);
        let known: Vec<Pattern> = known_sets.iter().cloned().map(Pattern::from).collect();
        let active = mask_sets(7, &[active_mask]).remove(0);
        let brute = all_exact_covers(&active, &known_sets);
        match realize_level1(&Pattern::from(active.clone()), &known, Decomposition::ExactCover) {
            Realization::Cover(ids) => {
                let parts: Vec<usize> = ids.iter().flat_map(|&i| known_sets[i].clone()).collect();
                let set: BTreeSet<usize> = parts.iter().copied().collect();
                prop_assert_eq!(set.len(), parts.len());
                prop_assert_eq!(set.into_iter().collect::<Vec<_>>(), active);
                prop_assert!(!brute.is_empty());
            }
            Realization::NewPattern(_) => prop_assert!(brute.is_empty()),
        }
    }

    #[test]
    fn rebuild_from_own_bins_reproduces_level_one(log in arb_log(), two_pass in any::<bool>()) {
        let config = BuildConfig { two_pass, ..Default::default() };
        let h = build_hyperstructure(&log, &config).unwrap();
        for (id, p) in h.patterns().iter().enumerate() {
            let bins: BTreeSet<u64> = h.bond(1, id).unwrap().bins.iter().copied().collect();
            let rebuilt = build_hyperstructure(&log.restrict(|b| bins.contains(&b)), &config).unwrap();
            prop_assert!(rebuilt.patterns().contains(p), "{p} not rebuilt");
        }
    }

    #[test]
    fn rebuild_from_downset_bins_reproduces_every_bond(log in arb_log()) {
        let config = BuildConfig::default();
        let h = build_hyperstructure(&log, &config).unwrap();
        for l in 2..=h.k() {
            for b in h.level(l).unwrap() {
                let mut bins: BTreeSet<u64> = b.bins.iter().copied().collect();
                for below in 1..l {
                    for id in h.downset(l, b.id, below).unwrap() {
                        bins.extend(h.bond(below, id).unwrap().bins.iter().copied());
                    }
                }
                let rebuilt = build_hyperstructure(&log.restrict(|x| bins.contains(&x)), &config).unwrap();
                let form = h.canonical_form(l, b.id).unwrap();
                prop_assert!(rebuilt.k() >= l && rebuilt.canonical_forms(l).unwrap().contains(&form), "{form} lost");
            }
        }
    }

    #[test]
    fn level_one_complex_is_generated_complex(log in arb_log()) {
        let h = build_hyperstructure(&log, &BuildConfig::default()).unwrap();
        if h.k() >= 1 {
            prop_assert_eq!(level_complex(&h, 1).unwrap(), generated_complex(&h.patterns(), h.n()).unwrap());
        }
    }

    #[test]
    fn gluing_graphs_are_simple(log in arb_log()) {
        let h = build_hyperstructure(&log, &BuildConfig::default()).unwrap();
        for i in 1..=h.k() {
            for j in 0..i {
                let g = gluing_graph(&h, i, j).unwrap();
                for e in &g.edges {
                    prop_assert!(e.a < e.b);
                    prop_assert!(!e.overlap.is_empty());
                    prop_assert_eq!(g.edge(e.b, e.a), Some(e));
                }
                let adj = g.adjacency();
                for (v, list) in adj.iter().enumerate() {
                    prop_assert!(!list.contains(&v));
                    for &w in list {
                        prop_assert!(adj[w].contains(&v));
                    }
                }
            }
        }
    }

    #[test]
    fn nerve_is_flag_complex_of_gluing_graphs(log in arb_log()) {
        let h = build_hyperstructure(&log, &BuildConfig::default()).unwrap();
        let k = nerve(&h, &NerveConfig::default()).unwrap();
        check_antichain(&k)?;
        prop_assert_eq!(k.vertex_labels().len(), h.total_bonds());
        prop_assert_eq!(k.vertices().len(), h.total_bonds());
        let offsets: Vec<usize> = (0..h.k()).map(|l| h.levels()[..l].iter().map(Vec::len).sum()).collect();
        let level_of = |v: usize| offsets.iter().rposition(|&o| o <= v).unwrap() + 1;
        for i in 1..=h.k() {
            let graphs: Vec<_> = (0..i).map(|j| gluing_graph(&h, i, j).unwrap()).collect();
            let size = h.level(i).unwrap().len();
            // brute-force maximal cliques of each stratum, small levels only
            if size <= 10 {
                for g in &graphs {
                    let is_clique = |mask: u32| {
                        let vs: Vec<usize> = (0..size).filter(|v| mask >> v & 1 == 1).collect();
                        vs.iter().enumerate().all(|(x, &a)| vs[x + 1..].iter().all(|&b| g.edge(a, b).is_some()))
                    };
                    for mask in 1u32..(1 << size) {
                        let maximal = is_clique(mask)
                            && (0..size).all(|v| mask >> v & 1 == 1 || !is_clique(mask | 1 << v));
                        if maximal {
                            let s: Vec<usize> = (0..size).filter(|v| mask >> v & 1 == 1).map(|v| offsets[i - 1] + v).collect();
                            prop_assert!(k.contains(&s), "clique {s:?} missing");
                        }
                    }
                }
            }
        }
        // every simplex lives in one level and is a clique of one stratum
        for s in k.maximal_simplices() {
            let l = level_of(s[0]);
            prop_assert!(s.iter().all(|&v| level_of(v) == l));
            let local: Vec<usize> = s.iter().map(|&v| v - offsets[l - 1]).collect();
            if local.len() >= 2 {
                let in_some_stratum = (0..l).any(|j| {
                    let g = gluing_graph(&h, l, j).unwrap();
                    local.iter().enumerate().all(|(x, &a)| local[x + 1..].iter().all(|&b| g.edge(a, b).is_some()))
                });
                prop_assert!(in_some_stratum, "{s:?} is not a clique");
            }
        }
    }

    #[test]
    fn connected_nerve_is_closed_and_covers_components(log in arb_log(), face_seed in any::<u64>()) {
        use rand::{Rng, SeedableRng};
        let h = build_hyperstructure(&log, &BuildConfig::default()).unwrap();
        let cfg = NerveConfig { rule: NerveRule::Connected, ..Default::default() };
        let k = nerve(&h, &cfg).unwrap();
        check_antichain(&k)?;
        prop_assert_eq!(k.vertices().len(), h.total_bonds());
        let mut rng = rand::rngs::StdRng::seed_from_u64(face_seed);
        for s in k.maximal_simplices() {
            for _ in 0..4 {
                let face: Vec<usize> = s.iter().copied().filter(|_| rng.gen_bool(0.5)).collect();
                prop_assert!(face.is_empty() || k.contains(&face));
            }
        }
        let pairwise = nerve(&h, &NerveConfig::default()).unwrap();
        for s in pairwise.maximal_simplices() {
            prop_assert!(k.contains(s));
        }
    }

    #[test]
    fn betti_matches_dense_oracle(seed in any::<u64>()) {
        use rand::SeedableRng;
        let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
        let (n, gens) = random_generators(&mut rng, 8, 3);
        let k = SimplicialComplex::from_generators(labels(n), gens.clone()).unwrap();
        prop_assert_eq!(betti_numbers(&k, 5).unwrap(), oracle_betti(&gens));
        check_euler(&k)?;
    }

    #[test]
    fn barcodes_agree_with_sublevel_betti(seed in any::<u64>()) {
        use rand::SeedableRng;
        let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
        let log = random_weighted_log(&mut rng, 10, 5);
        let h = build_hyperstructure(&log, &BuildConfig::default()).unwrap();
        for i in 1..=h.k() {
            let f = frequency_filtration(&h, i, 5).unwrap();
            let bars = persistence(&f, false).unwrap();
            prop_assert_eq!(&bars, &persistence(&f, false).unwrap());
            for bar in &bars.intervals {
                prop_assert!(bar.death.is_none_or(|d| d > bar.birth));
            }
            let top = f.complex().dim().unwrap();
            for theta in f.values() {
                let sub = f.sublevel(theta);
                let b = betti(&sub, top, 5).unwrap();
                for (d, &bd) in b.iter().enumerate() {
                    prop_assert_eq!(bars.rank_at(d, theta), bd, "level {} dim {} theta {}", i, d, theta);
                }
            }
        }
    }

    #[test]
    fn comparison_is_symmetric(a in arb_log(), b_masks in prop::collection::vec(0u16..(1 << 8), 0..16)) {
        let ha = build_hyperstructure(&a, &BuildConfig::default()).unwrap();
        let b = log_of(a.n(), &mask_sets(a.n(), &b_masks));
        let hb = build_hyperstructure(&b, &BuildConfig::default()).unwrap();
        let ab = compare_levels(&ha, &hb).unwrap();
        prop_assert_eq!(&ab.swapped(), &compare_levels(&hb, &ha).unwrap());
        for l in &ab.levels {
            prop_assert!((0.0..=1.0).contains(&l.jaccard));
            prop_assert!(l.shared <= l.size_a.min(l.size_b));
            let same_forms = forms(&ha, l.level) == forms(&hb, l.level);
            prop_assert_eq!(l.jaccard == 1.0, same_forms);
            if l.map_status == MapStatus::Bijective {
                prop_assert!(l.size_a == l.size_b && l.shared == l.size_a);
            }
        }
        let selfie = compare_levels(&ha, &ha).unwrap();
        prop_assert!(selfie.levels.iter().all(|l| l.map_status == MapStatus::Bijective && l.jaccard == 1.0));
    }
}

fn forms(h: &Hyperstructure, level: usize) -> BTreeSet<String> {
    if level > h.k() {
        return BTreeSet::new();
    }
    h.canonical_forms(level).unwrap().into_iter().collect()
}
