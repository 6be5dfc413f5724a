//! Reference implementations used as oracles. None of these call into the
//! library's algorithms; they only read graph structure. The fixture
//! helpers at the end drive the CLI.
#![allow(dead_code)]

use std::collections::{BTreeSet, VecDeque};
use std::path::PathBuf;
use std::process::Command;
use std::sync::Arc;

use cksplit::algebra::{CKElement, EdgeRef, Path};
use cksplit::cli::{run, EXIT_OK};
use cksplit::ktheory::IntMatrix;
use cksplit::{AmpGraph, Multiplicity};
use num_bigint::BigInt;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

pub fn labels(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("v{}", i)).collect()
}

/// Random amplified DAG: a random topological order, each forward pair an
/// `Omega` family with probability `p`.
pub fn random_dag(rng: &mut ChaCha8Rng, n: usize, p: f64) -> AmpGraph {
    let names = labels(n);
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut g = AmpGraph::new(&names).unwrap();
    for a in 0..n {
        for b in a + 1..n {
            if rng.gen_bool(p) {
                g.set_mult(&names[order[a]], &names[order[b]], Multiplicity::Omega).unwrap();
            }
        }
    }
    g
}

/// Random amplified graph, cycles and loops allowed.
pub fn random_graph(rng: &mut ChaCha8Rng, n: usize, p: f64) -> AmpGraph {
    let names = labels(n);
    let mut g = AmpGraph::new(&names).unwrap();
    for a in 0..n {
        for b in 0..n {
            if rng.gen_bool(p) {
                g.set_mult(&names[a], &names[b], Multiplicity::Omega).unwrap();
            }
        }
    }
    g
}

/// The fixed corpus of random DAGs with 1..=7 vertices.
pub fn dag_corpus(count: usize, seed: u64) -> Vec<AmpGraph> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let n = rng.gen_range(1..=7);
            let p = rng.gen_range(0.2..0.7);
            random_dag(&mut rng, n, p)
        })
        .collect()
}

pub fn successors(g: &AmpGraph, v: usize) -> Vec<usize> {
    (0..g.n()).filter(|&w| !g.mult(v, w).is_zero()).collect()
}

/// Vertices reachable from `v` by a path of length at least one (BFS).
pub fn bfs_reach(g: &AmpGraph, v: usize) -> BTreeSet<usize> {
    let mut seen = BTreeSet::new();
    let mut queue: VecDeque<usize> = successors(g, v).into();
    while let Some(w) = queue.pop_front() {
        if seen.insert(w) {
            queue.extend(successors(g, w));
        }
    }
    seen
}

/// Path relation by label pairs.
pub fn path_relation(g: &AmpGraph) -> BTreeSet<(String, String)> {
    let mut out = BTreeSet::new();
    for v in 0..g.n() {
        for w in bfs_reach(g, v) {
            out.insert((g.vertex(v).to_string(), g.vertex(w).to_string()));
        }
    }
    out
}

/// Whether a path of length >= 2 runs from `v` to `w`.
pub fn long_path(g: &AmpGraph, v: usize, w: usize) -> bool {
    successors(g, v).into_iter().any(|u| bfs_reach(g, u).contains(&w))
}

pub fn is_hereditary_mask(g: &AmpGraph, mask: u64) -> bool {
    (0..g.n()).filter(|&v| mask >> v & 1 == 1).all(|v| successors(g, v).iter().all(|&w| mask >> w & 1 == 1))
}

/// Every hereditary subset as a sorted index list, via all `2^N` masks.
pub fn brute_force_hereditary(g: &AmpGraph) -> BTreeSet<Vec<usize>> {
    (0u64..1 << g.n())
        .filter(|&m| is_hereditary_mask(g, m))
        .map(|m| (0..g.n()).filter(|&v| m >> v & 1 == 1).collect())
        .collect()
}

/// A generator letter of the graph algebra.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Letter {
    P(usize),
    S(usize, usize, u32),
    SStar(usize, usize, u32),
}

/// Rewrites a letter sequence to normal form with the local rules
/// `p_v p_w -> δ p_v`, projection absorption next to edges,
/// `s_e^* s_f -> δ p_{r(e)}`, and vanishing of non-composable neighbours.
/// `None` is the zero element.
pub fn rewrite(mut w: Vec<Letter>) -> Option<Vec<Letter>> {
    use Letter::*;
    loop {
        let mut changed = false;
        let mut i = 0;
        while i + 1 < w.len() {
            let (x, y) = (w[i], w[i + 1]);
            let step: Option<Option<Vec<Letter>>> = match (x, y) {
                (P(a), P(b)) => Some((a == b).then(|| vec![P(a)])),
                (P(a), S(s, _, _)) => Some((a == s).then(|| vec![y])),
                (S(_, r, _), P(b)) => Some((r == b).then(|| vec![x])),
                (P(a), SStar(_, r, _)) => Some((a == r).then(|| vec![y])),
                (SStar(s, _, _), P(b)) => Some((s == b).then(|| vec![x])),
                (SStar(s1, r1, i1), S(s2, r2, i2)) => Some(((s1, r1, i1) == (s2, r2, i2)).then(|| vec![P(r1)])),
                (S(_, r1, _), S(s2, _, _)) if r1 != s2 => Some(None),
                (SStar(s1, _, _), SStar(_, r2, _)) if s1 != r2 => Some(None),
                (S(_, r1, _), SStar(_, r2, _)) if r1 != r2 => Some(None),
                _ => None,
            };
            match step {
                Some(None) => return None,
                Some(Some(rep)) => {
                    w.splice(i..i + 2, rep);
                    changed = true;
                }
                None => i += 1,
            }
        }
        if !changed {
            return Some(w);
        }
    }
}

pub fn letter_element(g: &Arc<AmpGraph>, l: Letter) -> CKElement {
    match l {
        Letter::P(v) => CKElement::vertex(g, g.vertex(v).as_str()).unwrap(),
        Letter::S(a, b, i) => CKElement::edge(g, g.vertex(a).as_str(), g.vertex(b).as_str(), i).unwrap(),
        Letter::SStar(a, b, i) => CKElement::edge(g, g.vertex(a).as_str(), g.vertex(b).as_str(), i).unwrap().adjoint(),
    }
}

/// A single-word element as a letter sequence, or `None` for zero.
pub fn element_letters(x: &CKElement) -> Option<Vec<Letter>> {
    let terms: Vec<_> = x.terms().collect();
    if terms.is_empty() {
        return None;
    }
    assert_eq!(terms.len(), 1, "generator products are single words");
    let (w, c) = terms[0];
    assert_eq!(c, 1);
    if w.is_vertex() {
        return Some(vec![Letter::P(w.alpha().source())]);
    }
    let mut out: Vec<Letter> = w.alpha().edges().iter().map(|e| Letter::S(e.src, e.dst, e.index)).collect();
    out.extend(w.beta().edges().iter().rev().map(|e| Letter::SStar(e.src, e.dst, e.index)));
    Some(out)
}

/// All generator letters of `g` with edge indices `< indices`.
pub fn alphabet(g: &AmpGraph, indices: u32) -> Vec<Letter> {
    let mut out: Vec<Letter> = (0..g.n()).map(Letter::P).collect();
    for a in 0..g.n() {
        for b in 0..g.n() {
            if g.mult(a, b) == Multiplicity::Omega {
                for i in 0..indices {
                    out.push(Letter::S(a, b, i));
                    out.push(Letter::SStar(a, b, i));
                }
            }
        }
    }
    out
}

/// Determinant by cofactor expansion along the first row.
pub fn cofactor_det(m: &[Vec<i128>]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::from(1);
    }
    if n == 1 {
        return BigInt::from(m[0][0]);
    }
    let mut total = BigInt::from(0);
    for c in 0..n {
        if m[0][c] == 0 {
            continue;
        }
        let minor: Vec<Vec<i128>> = m[1..].iter().map(|r| r.iter().enumerate().filter(|&(j, _)| j != c).map(|(_, &x)| x).collect()).collect();
        let term = BigInt::from(m[0][c]) * cofactor_det(&minor);
        if c % 2 == 0 {
            total += term;
        } else {
            total -= term;
        }
    }
    total
}

fn gcd(a: i128, b: i128) -> i128 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut out = subsets(n - 1, k);
    for mut s in subsets(n - 1, k - 1) {
        s.push(n - 1);
        out.push(s);
    }
    out
}

/// Invariant factors from determinantal divisors: `d_1 ⋯ d_k` is the gcd
/// of all `k x k` minors.
pub fn invariant_factors_by_minors(a: &IntMatrix) -> Vec<i64> {
    let (m, n) = (a.rows(), a.cols());
    let mut divisors: Vec<i128> = vec![1];
    for k in 1..=m.min(n) {
        let mut g = 0i128;
        for rows in subsets(m, k) {
            for cols in subsets(n, k) {
                let minor: Vec<Vec<i128>> =
                    rows.iter().map(|&r| cols.iter().map(|&c| a.get(r, c) as i128).collect()).collect();
                g = gcd(g, i128::try_from(cofactor_det(&minor)).expect("small minors"));
            }
        }
        if g == 0 {
            break;
        }
        divisors.push(g);
    }
    divisors.windows(2).map(|w| (w[1] / w[0]) as i64).collect()
}

pub fn random_matrix(rng: &mut ChaCha8Rng, max_dim: usize, bound: i64) -> IntMatrix {
    let r = rng.gen_range(1..=max_dim);
    let c = rng.gen_range(1..=max_dim);
    let rows: Vec<Vec<i64>> = (0..r).map(|_| (0..c).map(|_| rng.gen_range(-bound..=bound)).collect()).collect();
    IntMatrix::from_rows(&rows)
}

/// Permutations in one-line notation (values 1-based).
pub fn perm_mul_generator(w: &[u8], i: usize) -> Vec<u8> {
    let mut v = w.to_vec();
    v.swap(i - 1, i);
    v
}

pub fn perm_of_word(rank: usize, word: &[usize]) -> Vec<u8> {
    word.iter().fold((1..=rank as u8 + 1).collect(), |w: Vec<u8>, &i| perm_mul_generator(&w, i))
}

pub fn inversions(w: &[u8]) -> usize {
    let mut c = 0;
    for i in 0..w.len() {
        for j in i + 1..w.len() {
            if w[i] > w[j] {
                c += 1;
            }
        }
    }
    c
}

/// Tableau criterion: `v <= w` in Bruhat order iff for all `i, k`,
/// `#{j <= i : v(j) >= k} <= #{j <= i : w(j) >= k}`.
pub fn bruhat_le(v: &[u8], w: &[u8]) -> bool {
    let n = v.len();
    (1..=n).all(|i| {
        (1..=n as u8).all(|k| {
            v[..i].iter().filter(|&&x| x >= k).count() <= w[..i].iter().filter(|&&x| x >= k).count()
        })
    })
}

/// Lexicographically first word of length `len` multiplying to `w`, by
/// exhaustive search.
pub fn lex_first_word(rank: usize, w: &[u8], len: usize) -> Option<Vec<usize>> {
    fn go(rank: usize, target: &[u8], len: usize, cur: &mut Vec<usize>) -> bool {
        if cur.len() == len {
            return perm_of_word(rank, cur) == target;
        }
        for i in 1..=rank {
            cur.push(i);
            if go(rank, target, len, cur) {
                return true;
            }
            cur.pop();
        }
        false
    }
    let mut cur = Vec::new();
    go(rank, w, len, &mut cur).then_some(cur)
}

/// All nonempty subsets of `1..=rank`.
pub fn tag_sets(rank: usize) -> Vec<Vec<usize>> {
    (1u32..1 << rank).map(|m| (1..=rank).filter(|i| m >> (i - 1) & 1 == 1).collect()).collect()
}

// Random normal-form words walked along the graph.

pub fn walk_forward(rng: &mut ChaCha8Rng, g: &AmpGraph, start: usize, len: usize) -> Path {
    let mut edges = Vec::new();
    let mut at = start;
    for _ in 0..len {
        let next = successors(g, at);
        if next.is_empty() {
            break;
        }
        let w = next[rng.gen_range(0..next.len())];
        edges.push(EdgeRef { src: at, dst: w, index: rng.gen_range(0..=3) });
        at = w;
    }
    Path::from_edges(edges).unwrap_or_else(|| Path::empty(start))
}

pub fn walk_backward(rng: &mut ChaCha8Rng, g: &AmpGraph, end: usize, len: usize) -> Path {
    let mut edges = Vec::new();
    let mut at = end;
    for _ in 0..len {
        let prev: Vec<usize> = (0..g.n()).filter(|&u| g.mult(u, at) == Multiplicity::Omega).collect();
        if prev.is_empty() {
            break;
        }
        let u = prev[rng.gen_range(0..prev.len())];
        edges.push(EdgeRef { src: u, dst: at, index: rng.gen_range(0..=3) });
        at = u;
    }
    edges.reverse();
    Path::from_edges(edges).unwrap_or_else(|| Path::empty(end))
}

pub fn random_word(rng: &mut ChaCha8Rng, g: &Arc<AmpGraph>) -> CKElement {
    let v = rng.gen_range(0..g.n());
    let (la, lb) = (rng.gen_range(0..=3), rng.gen_range(0..=3));
    let alpha = walk_forward(rng, g, v, la);
    let beta = walk_backward(rng, g, alpha.range(), lb);
    CKElement::word(g, alpha, beta).unwrap()
}

pub fn random_element(rng: &mut ChaCha8Rng, g: &Arc<AmpGraph>) -> CKElement {
    let mut x = CKElement::zero(g);
    for _ in 0..rng.gen_range(1..=3) {
        let c = [-2, -1, 1, 2][rng.gen_range(0..4)];
        x = x.add(&random_word(rng, g).scale(c).unwrap()).unwrap();
    }
    x
}

pub fn random_setting(rng: &mut ChaCha8Rng) -> Arc<AmpGraph> {
    let n = rng.gen_range(1..=6);
    Arc::new(random_dag(rng, n, 0.5))
}

// Shipped fixtures and the report commands run on them.

pub const FIXTURES: [&str; 7] = ["example", "cp1", "cp2", "cp3", "gr24", "x6", "cp2_glue"];

pub fn root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..")
}

pub fn fixture(name: &str) -> String {
    root().join("fixtures").join(format!("{}.json", name)).to_string_lossy().into_owned()
}

pub fn bin(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_cksplit")).args(args).output().unwrap()
}

pub fn json(args: &[&str]) -> Value {
    let mut argv = vec!["cksplit", "--json"];
    argv.extend_from_slice(args);
    let out = run(argv);
    assert_eq!(out.code, EXIT_OK, "{:?}: {}", args, out.stderr);
    serde_json::from_str(&out.stdout).unwrap()
}

/// Every report command on the shipped fixtures, with the schema it follows.
pub fn command_table() -> Vec<(Vec<String>, &'static str)> {
    let mut out: Vec<(Vec<String>, &'static str)> = Vec::new();
    let own = |v: &[&str]| v.iter().map(|s| s.to_string()).collect::<Vec<_>>();
    for name in FIXTURES {
        let f = fixture(name);
        let sinks: Vec<String> = json(&["classify", &f])["sinks"]
            .as_array()
            .unwrap()
            .iter()
            .map(|s| s.as_str().unwrap().to_string())
            .collect();
        out.push((own(&["classify", &f]), "classify"));
        out.push((own(&["hereditary", &f]), "hereditary"));
        out.push((own(&["ktheory", &f]), "ktheory"));
        for policy in ["first", "last", "source", "embed"] {
            out.push((own(&["chain", &f, "--policy", policy]), "chain"));
        }
        out.push((own(&["quotient", &f, "--remove", &sinks[0]]), "graph"));
        out.push((own(&["hereditary", &f, "--closure", &sinks[0]]), "hereditary"));
        for s in &sinks {
            out.push((own(&["stars", &f, "--sink", s]), "stars"));
            out.push((own(&["split", &f, "--sink", s, "--embed", "--verify"]), "split"));
            let stars = json(&["stars", &f, "--sink", s]);
            for star in stars["stars"].as_array().unwrap() {
                out.push((own(&["split", &f, "--sink", s, "--star", star.as_str().unwrap(), "--verify"]), "split"));
            }
        }
    }
    for (rank, tag) in [("1", "1"), ("2", "1"), ("3", "1"), ("3", "2"), ("3", "1,3"), ("3", "1,2,3")] {
        out.push((own(&["flag", "--rank", rank, "--tag", tag]), "graph"));
        out.push((own(&["cw", "--rank", rank, "--tag", tag]), "cw"));
    }
    out
}
