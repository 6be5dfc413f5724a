mod common;

use cksplit::coxeter::{flag_graph, DynkinSpec};
use cksplit::ktheory::{chain_k0, check_split_exact_k0, induced_k0, k_groups, smith_normal_form};
use cksplit::splitting::{
    build_splitting, kk_chain, multi_sink_splitting, valid_stars, verify_split_exact, EmbeddingOnly, FirstChoice,
    IdealKind, LastChoice, PreferSource, StarPolicy,
};
use cksplit::{AmpGraph, Multiplicity};
use common::*;

/// The star condition evaluated directly from BFS reachability.
fn oracle_stars(g: &AmpGraph, sink: usize) -> Vec<usize> {
    (0..g.n())
        .filter(|&v| v != sink)
        .filter(|&v| {
            let preds: Vec<usize> = (0..g.n()).filter(|&u| !g.mult(u, v).is_zero()).collect();
            preds.is_empty() || preds.iter().all(|&u| bfs_reach(g, u).contains(&sink))
        })
        .collect()
}

fn sinks(g: &AmpGraph) -> Vec<usize> {
    (0..g.n()).filter(|&v| successors(g, v).is_empty()).collect()
}

#[test]
fn every_valid_star_on_the_corpus_splits() {
    let mut splits = 0;
    for g in dag_corpus(100, 2024) {
        for s in sinks(&g).into_iter().filter(|_| g.n() > 1) {
            let sink = g.vertex(s).as_str();
            let stars = valid_stars(&g, sink).unwrap();
            let idx: Vec<usize> = stars.iter().map(|v| g.index_of(v.as_str()).unwrap()).collect();
            assert_eq!(idx, oracle_stars(&g, s));
            let mut sigmas = Vec::new();
            for star in &stars {
                let sd = build_splitting(&g, sink, Some(star.as_str())).unwrap();
                let report = verify_split_exact(&sd).unwrap();
                assert!(report.all_passed(), "{:?}", report.failed());

                // Only pairs (v, sink) change, Zero to Omega, each with a long path.
                let w = sd.working();
                for a in 0..g.n() {
                    for b in 0..g.n() {
                        if g.mult(a, b) != w.mult(a, b) {
                            assert_eq!(b, s);
                            assert!(g.mult(a, b).is_zero() && w.mult(a, b) == Multiplicity::Omega);
                            assert!(long_path(&g, a, b));
                        }
                    }
                }

                let k0 = check_split_exact_k0(&sd).unwrap();
                assert!(k0.checks.all_passed());
                assert!(k0.q.mul(&k0.s).unwrap().is_identity());
                let kernel = smith_normal_form(&k0.q).unwrap().kernel_basis();
                assert_eq!(kernel.cols(), 1);
                for r in 0..kernel.rows() {
                    assert_eq!(kernel.get(r, 0).abs(), i64::from(r == s));
                }
                sigmas.push(k0.s);
                splits += 1;
            }
            for a in 0..sigmas.len() {
                for b in a + 1..sigmas.len() {
                    assert_ne!(sigmas[a], sigmas[b]);
                }
            }

            let sd = build_splitting(&g, sink, None).unwrap();
            let report = verify_split_exact(&sd).unwrap();
            assert_eq!(report.failed(), ["sigma.unitality"]);
            assert_eq!(sd.ideal() == IdealKind::Scalars, (0..g.n()).all(|u| g.mult(u, s).is_zero()));
        }
    }
    assert!(splits > 100, "corpus too small: {}", splits);
}

#[test]
fn chains_have_one_step_per_removed_vertex() {
    let policies: [&dyn StarPolicy; 4] = [&FirstChoice, &LastChoice, &PreferSource, &EmbeddingOnly];
    for (k, g) in dag_corpus(100, 77).into_iter().enumerate() {
        let policy = policies[k % policies.len()];
        let chain = kk_chain(&g, policy).unwrap();
        assert_eq!(chain.steps().len(), g.n() - 1);
        assert_eq!(chain.pi_terms().len(), g.n().max(1));
        assert!(chain.splitting().report().ok());
        let kg = k_groups(&g).unwrap();
        assert_eq!((kg.k0_rank, kg.k1_rank), (g.n(), 0));
        let k0 = chain_k0(chain.steps()).unwrap();
        assert!(k0.checks.all_passed(), "{:?}", k0.checks.failed());
        for sd in chain.steps() {
            assert_eq!(k_groups(sd.quotient()).unwrap().k0_rank + 1, k_groups(sd.working()).unwrap().k0_rank);
        }
    }
}

#[test]
fn steps_chain_quotients() {
    for g in dag_corpus(30, 5) {
        let chain = kk_chain(&g, &FirstChoice).unwrap();
        for w in chain.steps().windows(2) {
            assert!(std::sync::Arc::ptr_eq(w[0].quotient(), w[1].working()));
        }
        if let Some(last) = chain.steps().last() {
            assert_eq!(last.quotient().n(), 1);
        }
    }
}

#[test]
fn glue_graph_two_sinks() {
    let gr = flag_graph(&DynkinSpec::new(3, &[2]).unwrap()).unwrap();
    let x6 = gr.quotient(&gr.vertex_set(&["s2s1s3s2"]).unwrap()).unwrap();
    let glue = x6.quotient(&x6.vertex_set(&["s1s3s2"]).unwrap()).unwrap();
    let ms = multi_sink_splitting(&glue, &["s1s2", "s3s2"], &[Some("e"), Some("s2")]).unwrap();
    assert!(ms.report().all_passed(), "{:?}", ms.report().failed());
    let labels: Vec<&str> = ms.final_graph().vertices().iter().map(|v| v.as_str()).collect();
    assert_eq!(labels, ["e", "s2"]);
    assert_eq!(ms.final_graph().family_count(), 1);
    assert_eq!(ms.composite_sigma().source().n(), 2);
    assert_eq!(ms.composite_sigma().target().n(), 4);
    let s = induced_k0(ms.composite_sigma()).unwrap();
    let q = induced_k0(ms.composite_q()).unwrap();
    assert!(q.mul(&s).unwrap().is_identity());
}

#[test]
fn grassmannian_sinks_in_order() {
    let gr = flag_graph(&DynkinSpec::new(3, &[2]).unwrap()).unwrap();
    let order = ["s2s1s3s2", "s1s3s2", "s1s2", "s3s2", "s2"];
    let ms = multi_sink_splitting(&gr, &order, &[Some("e"); 5]).unwrap();
    assert_eq!(ms.final_graph().vertices()[0].as_str(), "e");
    assert_eq!(ms.final_graph().n(), 1);
    let ms = multi_sink_splitting(&gr, &order, &[None; 5]).unwrap();
    assert!(ms.report().ok());
    assert!(!ms.report().get("sigma.unitality").unwrap().passed);
}

#[test]
fn cycles_allow_only_the_embedding() {
    let g = AmpGraph::amplified(&["u1", "u2", "z"], &[("u1", "u2"), ("u2", "u1")]).unwrap();
    assert!(valid_stars(&g, "z").unwrap().is_empty());
    assert_eq!(oracle_stars(&g, 2), Vec::<usize>::new());
    assert!(build_splitting(&g, "z", Some("u1")).is_err());
    let sd = build_splitting(&g, "z", None).unwrap();
    assert!(verify_split_exact(&sd).unwrap().ok());
}

#[test]
fn single_isolated_vertex_ideal_is_scalars() {
    let g = AmpGraph::amplified(&["a", "v"], &[]).unwrap();
    let sd = build_splitting(&g, "v", Some("a")).unwrap();
    assert_eq!(sd.ideal(), IdealKind::Scalars);
    assert!(verify_split_exact(&sd).unwrap().all_passed());
}
