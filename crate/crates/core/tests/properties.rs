use std::collections::BTreeSet;

use proptest::prelude::*;
use rand::Rng;

use prodcell::complex::build_complex;
use prodcell::constructions::{self, lantern, mixed, multiloop, sphere_chain};
use prodcell::digraph::{
    analyze, cartesian_product, glue_at_vertex, is_isomorphic, product_label, simplex, Digraph,
};
use prodcell::dow::{
    build_insertion, concat_disjoint, immediate_successors, is_squarefree, maximal_factors, Dow,
    FactorKind, Word,
};
use prodcell::homology::homology_summary;
use prodcell::verify::{random_consistent_digraph, random_dow, rng};
use prodcell::wordgraph::{are_coprime, rooted_word_graph};

fn dow_from_seed(seed: u64, max_size: usize) -> Dow {
    let mut r = rng(seed);
    let n = r.gen_range(0..=max_size);
    random_dow(&mut r, n)
}

fn digraph_from_seed(seed: u64, max_vertices: usize) -> Digraph {
    let mut r = rng(seed);
    let n = r.gen_range(2..=max_vertices);
    let p = r.gen_range(0.2..0.8);
    random_consistent_digraph(&mut r, n, p)
}

fn labeled_edges(g: &Digraph) -> BTreeSet<(String, String)> {
    g.edges()
        .map(|(u, v)| (g.label(u).to_string(), g.label(v).to_string()))
        .collect()
}

fn labeled_vertices(g: &Digraph) -> BTreeSet<String> {
    g.labels().iter().cloned().collect()
}

fn betti(g: &Digraph, top: usize) -> Vec<usize> {
    let h = homology_summary(&build_complex(g, top + 1), top).unwrap();
    (0..=top).map(|n| h.betti(n)).collect()
}

fn choose(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// `u` written in fresh symbols starting at `from`.
fn fresh_word(len: usize, from: u32) -> Word {
    Word::new((from..from + len as u32).collect())
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, max_global_rejects: 100_000, ..ProptestConfig::default() })]

    #[test]
    fn product_is_symmetric_and_associative(a in any::<u64>(), b in any::<u64>(), c in any::<u64>()) {
        let (g, h, k) = (digraph_from_seed(a, 4), digraph_from_seed(b, 4), digraph_from_seed(c, 3));
        prop_assert!(is_isomorphic(&cartesian_product(&g, &h), &cartesian_product(&h, &g)));
        prop_assert!(is_isomorphic(
            &cartesian_product(&cartesian_product(&g, &h), &k),
            &cartesian_product(&g, &cartesian_product(&h, &k)),
        ));
    }

    #[test]
    fn product_keeps_consistent_direction(a in any::<u64>(), b in any::<u64>()) {
        let (g, h) = (digraph_from_seed(a, 5), digraph_from_seed(b, 5));
        let (rg, rh) = (analyze(&g), analyze(&h));
        let r = analyze(&cartesian_product(&g, &h));
        prop_assert!(r.consistently_directed);
        prop_assert_eq!(r.sources, vec![product_label(&rg.sources[0], &rh.sources[0])]);
        prop_assert_eq!(r.targets, vec![product_label(&rg.targets[0], &rh.targets[0])]);
    }

    #[test]
    fn rooted_graphs_run_from_root_to_empty(seed in any::<u64>()) {
        let d = dow_from_seed(seed, 6);
        let r = analyze(&rooted_word_graph(&d).graph);
        prop_assert!(r.consistently_directed);
        prop_assert_eq!(r.sources, vec![d.to_comma_string()]);
        prop_assert_eq!(r.targets, vec![Dow::empty().to_comma_string()]);
    }

    #[test]
    fn successor_graphs_are_induced_subgraphs(seed in any::<u64>()) {
        let d = dow_from_seed(seed, 6);
        let g = rooted_word_graph(&d);
        for (i, u) in g.words.iter().enumerate() {
            let sub = g.graph.induced_subgraph(&g.graph.descendants(i));
            let own = rooted_word_graph(u).graph;
            prop_assert_eq!(labeled_vertices(&sub), labeled_vertices(&own));
            prop_assert_eq!(labeled_edges(&sub), labeled_edges(&own));
        }
    }

    #[test]
    fn coprimality_is_symmetric(a in any::<u64>(), b in any::<u64>()) {
        let (x, y) = (dow_from_seed(a, 4), dow_from_seed(b, 4));
        prop_assert_eq!(are_coprime(&x, &y), are_coprime(&y, &x));
    }

    #[test]
    fn inserting_into_a_maximal_factor_keeps_the_graph(
        seed in any::<u64>(),
        pick in any::<usize>(),
        cut in any::<usize>(),
        vlen in 1usize..=3,
    ) {
        let d = dow_from_seed(seed, 5);
        prop_assume!(!d.is_empty());
        let factors = maximal_factors(&d).unwrap();
        let f = &factors.factors[pick % factors.len()];
        let s = d.symbols();
        let x = Word::new(s[..f.first.start].to_vec());
        let y = Word::new(s[f.first.end..f.second.start].to_vec());
        let z = Word::new(s[f.second.end..].to_vec());
        let k = cut % (f.len() + 1);
        let u1 = Word::new(f.letters[..k].to_vec());
        let u2 = Word::new(f.letters[k..].to_vec());
        let v = fresh_word(vlen, d.size() as u32 + 1);
        let grown = build_insertion(&x, &y, &z, &u1, &u2, &v, f.kind).unwrap();
        // Square factors can make two deletions of `d` coincide while their
        // counterparts in `grown` differ; see `insertion_can_split_merged_successors`.
        prop_assume!(is_squarefree(&d) && is_squarefree(&grown));
        prop_assert!(
            is_isomorphic(&rooted_word_graph(&d).graph, &rooted_word_graph(&grown).graph),
            "{} vs {}", d, grown
        );
    }

    #[test]
    fn appending_a_fresh_edge_factor(seed in any::<u64>(), ulen in 1usize..=3, ret in any::<bool>()) {
        let w = dow_from_seed(seed, 5);
        let u = fresh_word(ulen, 1);
        let tail = if ret { u.concat(&u.reversed()) } else { u.concat(&u) };
        let uu = Dow::normalize(tail.symbols()).unwrap();
        let gw = rooted_word_graph(&w);
        prop_assume!(!gw.contains(&uu));
        let joint = rooted_word_graph(&concat_disjoint(&w, &uu)).graph;
        prop_assert!(is_isomorphic(&joint, &cartesian_product(&gw.graph, &simplex(1))));
    }

    #[test]
    fn doubling_embeds_two_copies(seed in any::<u64>(), ulen in 1usize..=3, ret in any::<bool>()) {
        let w = dow_from_seed(seed, 5);
        let u = fresh_word(ulen, 1);
        let tail = if ret { u.concat(&u.reversed()) } else { u.concat(&u) };
        let uu = Dow::normalize(tail.symbols()).unwrap();
        prop_assume!(are_coprime(&w, &uu));

        let gw = rooted_word_graph(&w);
        let big = rooted_word_graph(&concat_disjoint(&w, &uu));
        let front = rooted_word_graph(&concat_disjoint(&uu, &w));
        prop_assert!(is_isomorphic(&big.graph, &front.graph));

        for image in [
            gw.words.clone(),
            gw.words.iter().map(|v| concat_disjoint(v, &uu)).collect::<Vec<_>>(),
        ] {
            let ids: Vec<usize> = image.iter().map(|v| big.vertex_of(v).expect("vertex of G_wuu")).collect();
            let distinct: BTreeSet<usize> = ids.iter().copied().collect();
            prop_assert_eq!(distinct.len(), ids.len());
            for (a, b) in gw.graph.edges() {
                prop_assert!(big.graph.has_edge(ids[a], ids[b]));
            }
            prop_assert!(is_isomorphic(&big.graph.induced_subgraph(&ids), &gw.graph));
        }
    }

    #[test]
    fn degree_zero_counts_components(n in 1usize..9, edges in prop::collection::vec((0usize..9, 0usize..9), 0..12)) {
        let mut g = Digraph::new();
        for i in 0..n {
            g.add_vertex(&format!("v{i}")).unwrap();
        }
        for (a, b) in edges {
            let (a, b) = (a % n, b % n);
            if a < b {
                g.add_edge(a, b).unwrap();
            }
        }
        prop_assert_eq!(betti(&g, 0)[0], g.component_count());
    }

    #[test]
    fn wedge_adds_betti_numbers(a in any::<u64>(), b in any::<u64>(), pick in any::<usize>()) {
        let corpus = [
            constructions::path_square(),
            constructions::three_square_sphere(),
            multiloop(2),
            lantern(3).unwrap(),
            digraph_from_seed(a, 6),
        ];
        let g = &corpus[pick % corpus.len()];
        let h = digraph_from_seed(b, 6);
        let vg = g.label(pick % g.vertex_count()).to_string();
        let vh = h.label(0).to_string();
        let wedge = glue_at_vertex(g, &h, &vg, &vh).unwrap();
        let (bg, bh, bw) = (betti(g, 3), betti(&h, 3), betti(&wedge, 3));
        prop_assert_eq!(bw[0], 1);
        for n in 1..=3 {
            prop_assert_eq!(bw[n], bg[n] + bh[n], "degree {}", n);
        }
    }

    #[test]
    fn complexes_are_closed_and_deduplicated(seed in any::<u64>()) {
        let g = digraph_from_seed(seed, 8);
        let cx = build_complex(&g, 4);
        for n in 0..=cx.top_dim() {
            let cells = cx.cells(n);
            let distinct: BTreeSet<_> = cells.iter().collect();
            prop_assert_eq!(distinct.len(), cells.len());
            for (i, c) in cells.iter().enumerate() {
                prop_assert_eq!(cx.position(c), Some(i));
                if n > 0 {
                    for (face, _) in c.facets().unwrap() {
                        prop_assert!(cx.position(&face).is_some());
                        prop_assert_eq!(face.dim(), n - 1);
                    }
                }
            }
        }
        prop_assert_eq!(cx.to_json(), build_complex(&g, 4).to_json());
    }
}

#[test]
fn tournament_simplex_counts() {
    for m in 1..=7 {
        let counts = build_complex(&simplex(m - 1), 4).cell_counts();
        for (n, &c) in counts.iter().enumerate() {
            // Products of faces add cells beyond simplices only when two
            // factors fit, which a tournament never allows.
            assert_eq!(c, choose(m, n + 1), "m={m} n={n}");
        }
    }
}

#[test]
fn construction_formulas_up_to_six() {
    for k in 0..=6 {
        assert_eq!(betti(&multiloop(k), 2), [1, k, 0], "multiloop {k}");
    }
    for k in 1..=6 {
        assert_eq!(
            betti(&sphere_chain(k).unwrap(), 2),
            [1, 0, k],
            "sphere_chain {k}"
        );
    }
    for k in 2..=6 {
        assert_eq!(
            betti(&lantern(k).unwrap(), 2),
            [1, 0, choose(k - 1, 2)],
            "lantern {k}"
        );
    }
    for k in 0..=6 {
        for l in 0..=6 {
            assert_eq!(betti(&mixed(k, l).unwrap(), 2), [1, k, l], "mixed {k} {l}");
        }
    }
}

#[test]
fn insertion_kinds_cover_both_modes() {
    let x = Word::new(vec![]);
    let u1: Word = "1".parse().unwrap();
    let u2: Word = "2".parse().unwrap();
    let y: Word = "3".parse().unwrap();
    let z: Word = "3".parse().unwrap();
    let v: Word = "4".parse().unwrap();
    let rep = build_insertion(&x, &y, &z, &u1, &u2, &v, FactorKind::Repeat).unwrap();
    let ret = build_insertion(&x, &y, &z, &u1, &u2, &v, FactorKind::Return).unwrap();
    assert_eq!(rep.to_string(), "12341234");
    assert_eq!(ret.to_string(), "12343214");
}

#[test]
fn insertion_can_split_merged_successors() {
    // Both factors of 12213443 delete to 1221; after inserting 5 into the
    // first factor the two deletions give 1221 and 123321.
    let d: Dow = "12213443".parse().unwrap();
    let x = Word::new(vec![]);
    let z: Word = "3443".parse().unwrap();
    let u2: Word = "12".parse().unwrap();
    let v: Word = "5".parse().unwrap();
    let grown = build_insertion(&x, &x, &z, &x, &u2, &v, FactorKind::Return).unwrap();
    assert_eq!(grown.to_string(), "1233214554");
    assert_eq!(immediate_successors(&d).len(), 1);
    assert_eq!(immediate_successors(&grown).len(), 2);
    assert_eq!(rooted_word_graph(&d).vertex_count(), 3);
    assert_eq!(rooted_word_graph(&grown).vertex_count(), 4);
}
