mod common;

use std::collections::BTreeSet;

use cksplit::coxeter::{
    canonical_reduced_word, flag_graph, flag_vertices_alt, minimal_coset_reps, weyl_group, word_label, DynkinSpec,
    WeylElement,
};
use cksplit::cw::{cw_kk_summary, skeleton_filtration};
use common::*;

fn factorial(n: usize) -> usize {
    (1..=n).product()
}

fn all_perms(n: usize) -> Vec<Vec<u8>> {
    fn go(rest: &mut Vec<u8>, cur: &mut Vec<u8>, out: &mut Vec<Vec<u8>>) {
        if rest.is_empty() {
            out.push(cur.clone());
        }
        for k in 0..rest.len() {
            let x = rest.remove(k);
            cur.push(x);
            go(rest, cur, out);
            cur.pop();
            rest.insert(k, x);
        }
    }
    let mut out = Vec::new();
    go(&mut (1..=n as u8).collect(), &mut Vec::new(), &mut out);
    out
}

/// Minimal coset representatives straight from the descent condition on
/// one-line notation: `w(i) < w(i+1)` at every untagged `i`.
fn oracle_reps(rank: usize, tags: &[usize]) -> BTreeSet<Vec<u8>> {
    all_perms(rank + 1)
        .into_iter()
        .filter(|w| (1..=rank).filter(|i| !tags.contains(i)).all(|i| w[i - 1] < w[i]))
        .collect()
}

#[test]
fn group_elements_match_permutations() {
    for rank in 1..=4 {
        let g = weyl_group(rank).unwrap();
        assert_eq!(g.len(), factorial(rank + 1));
        for (w, d) in &g {
            assert_eq!(*d, inversions(w.one_line()));
            assert_eq!(w.length(), *d);
        }
    }
}

#[test]
fn words_follow_right_multiplication() {
    for rank in 1..=4 {
        for w in all_perms(rank + 1) {
            let e = WeylElement::from_one_line(&w).unwrap();
            let word = canonical_reduced_word(&e);
            assert_eq!(word.len(), inversions(&w));
            assert_eq!(perm_of_word(rank, &word), w);
            assert_eq!(Some(word), lex_first_word(rank, &w, inversions(&w)));
        }
    }
}

#[test]
fn coxeter_relations_hold() {
    let id = WeylElement::identity(4);
    for i in 1..=4 {
        assert_eq!(WeylElement::from_word(4, &[i, i]), id);
        for j in 1..=4 {
            let (a, b) = (WeylElement::from_word(4, &[i, j]), WeylElement::from_word(4, &[j, i]));
            if i.abs_diff(j) == 1 {
                assert_eq!(WeylElement::from_word(4, &[i, j, i]), WeylElement::from_word(4, &[j, i, j]));
                assert_ne!(a, b);
            } else {
                assert_eq!(a, b);
            }
        }
    }
}

#[test]
fn both_vertex_constructions_agree() {
    for rank in 1..=4 {
        for tags in tag_sets(rank) {
            let spec = DynkinSpec::new(rank, &tags).unwrap();
            let reps: BTreeSet<Vec<u8>> = minimal_coset_reps(&spec).iter().map(|r| r.element.one_line().to_vec()).collect();
            let alt: BTreeSet<Vec<u8>> = flag_vertices_alt(&spec).iter().map(|w| w.one_line().to_vec()).collect();
            assert_eq!(reps, alt, "rank {} tags {:?}", rank, tags);
            assert_eq!(reps, oracle_reps(rank, &tags));
        }
    }
}

#[test]
fn representatives_are_sorted_by_length_then_word() {
    for rank in 1..=4 {
        for tags in tag_sets(rank) {
            let reps = minimal_coset_reps(&DynkinSpec::new(rank, &tags).unwrap());
            let keys: Vec<(usize, Vec<usize>)> = reps.iter().map(|r| (r.length, r.word.clone())).collect();
            let mut sorted = keys.clone();
            sorted.sort();
            assert_eq!(keys, sorted);
            assert_eq!(reps[0].label(), "e");
        }
    }
}

#[test]
fn flag_edges_are_bruhat_covers() {
    for rank in 1..=4 {
        for tags in tag_sets(rank) {
            let spec = DynkinSpec::new(rank, &tags).unwrap();
            let reps = minimal_coset_reps(&spec);
            let g = flag_graph(&spec).unwrap();
            assert!(g.is_amplified() && g.is_acyclic());
            for (a, v) in reps.iter().enumerate() {
                assert_eq!(g.vertex(a).as_str(), word_label(&v.word));
                for (b, w) in reps.iter().enumerate() {
                    let cover = w.length == v.length + 1 && bruhat_le(v.element.one_line(), w.element.one_line());
                    assert_eq!(!g.mult(a, b).is_zero(), cover, "{} -> {} for tags {:?}", v.label(), w.label(), tags);
                }
            }
            let sources: Vec<usize> = (0..g.n()).filter(|&v| g.is_source(v)).collect();
            assert_eq!(sources, [0]);
        }
    }
}

#[test]
fn grassmannians_are_symmetric() {
    for rank in 1..=4 {
        for k in 1..=rank {
            let g = flag_graph(&DynkinSpec::new(rank, &[k]).unwrap()).unwrap();
            let h = flag_graph(&DynkinSpec::new(rank, &[rank + 1 - k]).unwrap()).unwrap();
            assert_eq!(g.n(), h.n());
            // The diagram flip sends s_i to s_{rank+1-i}.
            let flip = |label: &str| -> usize {
                let word: Vec<usize> = if label == "e" {
                    vec![]
                } else {
                    label.split('s').filter(|t| !t.is_empty()).map(|t| rank + 1 - t.parse::<usize>().unwrap()).collect()
                };
                let target = canonical_reduced_word(&WeylElement::from_word(rank, &word));
                h.index_of(&word_label(&target)).unwrap()
            };
            let map: Vec<usize> = g.vertices().iter().map(|v| flip(v.as_str())).collect();
            for a in 0..g.n() {
                for b in 0..g.n() {
                    assert_eq!(g.mult(a, b), h.mult(map[a], map[b]));
                }
            }
        }
    }
}

#[test]
fn skeletons_are_quotients_by_longer_cells() {
    for rank in 1..=4 {
        for tags in tag_sets(rank) {
            let spec = DynkinSpec::new(rank, &tags).unwrap();
            let f = skeleton_filtration(&spec).unwrap();
            let full = f.full();
            for (k, s) in f.levels.iter().enumerate() {
                assert_eq!(s.level, k);
                let expect = oracle_reps(rank, &tags).into_iter().filter(|w| inversions(w) <= k).count();
                assert_eq!(s.graph.n(), expect);
                let keep: Vec<usize> = (0..full.n()).filter(|&v| f.lengths[v] <= k).collect();
                for (i, &a) in keep.iter().enumerate() {
                    assert_eq!(s.graph.vertex(i), full.vertex(a));
                    for (j, &b) in keep.iter().enumerate() {
                        assert_eq!(s.graph.mult(i, j), full.mult(a, b));
                    }
                }
            }
        }
    }
}

#[test]
fn cw_chain_splits_off_one_copy_per_cell() {
    for rank in 1..=3 {
        for tags in tag_sets(rank) {
            let spec = DynkinSpec::new(rank, &tags).unwrap();
            let s = cw_kk_summary(&spec).unwrap();
            let n = minimal_coset_reps(&spec).len();
            let f = skeleton_filtration(&spec).unwrap();
            assert_eq!(s.removal_order.len(), n - 1);
            assert_eq!(s.records.len(), f.levels.len());
            for r in &s.records[..s.records.len() - 1] {
                let k = r.level.unwrap();
                assert_eq!(r.vertices, f.level(k).unwrap().n());
                assert_eq!(r.compact_summands + r.vertices, n);
            }
            let last = &s.records[s.records.len() - 2];
            assert_eq!((last.level, last.compact_summands), (Some(0), n - 1));
            assert_eq!(s.records.last().unwrap().text, format!("ℂ^{}", n));
            assert!(s.k0.checks.all_passed());
            let lengths: Vec<usize> = s
                .removal_order
                .iter()
                .map(|v| f.lengths[f.full().index_of(v.as_str()).unwrap()])
                .collect();
            assert!(lengths.windows(2).all(|w| w[0] >= w[1]));
        }
    }
}
