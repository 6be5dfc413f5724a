//! Type-A Weyl groups as permutation groups, parabolic quotients by the
//! subgroup of untagged generators, and the amplified graphs built on the
//! minimal coset representatives.
//!
//! `W(A_n) = S_{n+1}` acts on `{1..n+1}`; elements are stored in one-line
//! notation. Right multiplication by `s_i` swaps positions `i, i+1`, left
//! multiplication swaps the values `i, i+1`.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::graph::{AmpGraph, GraphError, Multiplicity};

pub const DEFAULT_MAX_RANK: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoxeterError {
    #[error("rank {rank} outside 1..={max}")]
    RankOutOfRange { rank: usize, max: usize },
    #[error("at least one node must be tagged")]
    NothingTagged,
    #[error("tagged node {node} outside 1..={rank}")]
    TagOutOfRange { node: usize, rank: usize },
    #[error("vertex characterizations disagree: {0}")]
    CrossCheck(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// A type-A Dynkin diagram with a nonempty set of tagged nodes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DynkinSpec {
    rank: usize,
    tagged: BTreeSet<usize>,
}

impl DynkinSpec {
    pub fn new(rank: usize, tagged: &[usize]) -> Result<Self, CoxeterError> {
        Self::with_max_rank(rank, tagged, DEFAULT_MAX_RANK)
    }

    pub fn with_max_rank(rank: usize, tagged: &[usize], max_rank: usize) -> Result<Self, CoxeterError> {
        if rank == 0 || rank > max_rank {
            return Err(CoxeterError::RankOutOfRange { rank, max: max_rank });
        }
        if tagged.is_empty() {
            return Err(CoxeterError::NothingTagged);
        }
        if let Some(&node) = tagged.iter().find(|&&t| t == 0 || t > rank) {
            return Err(CoxeterError::TagOutOfRange { node, rank });
        }
        Ok(DynkinSpec { rank, tagged: tagged.iter().copied().collect() })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn tagged(&self) -> &BTreeSet<usize> {
        &self.tagged
    }

    pub fn is_tagged(&self, i: usize) -> bool {
        self.tagged.contains(&i)
    }

    /// Generators of the parabolic subgroup `W_S`.
    pub fn untagged(&self) -> impl Iterator<Item = usize> + '_ {
        (1..=self.rank).filter(|i| !self.tagged.contains(i))
    }
}

/// A permutation of `{1..n+1}` in one-line notation.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WeylElement(Vec<u8>);

impl WeylElement {
    pub fn identity(rank: usize) -> Self {
        WeylElement((1..=rank as u8 + 1).collect())
    }

    /// `None` unless `images` is a permutation of `1..=len`.
    pub fn from_one_line(images: &[u8]) -> Option<Self> {
        let mut seen = vec![false; images.len()];
        for &x in images {
            let k = (x as usize).checked_sub(1)?;
            if k >= images.len() || std::mem::replace(&mut seen[k], true) {
                return None;
            }
        }
        Some(WeylElement(images.to_vec()))
    }

    /// Product `s_{w_1} s_{w_2} ⋯` of a word in the generators.
    pub fn from_word(rank: usize, word: &[usize]) -> Self {
        word.iter().fold(Self::identity(rank), |w, &i| w.mul_generator(i))
    }

    pub fn rank(&self) -> usize {
        self.0.len() - 1
    }

    pub fn one_line(&self) -> &[u8] {
        &self.0
    }

    /// Number of inversions.
    pub fn length(&self) -> usize {
        let w = &self.0;
        (0..w.len()).map(|i| (i + 1..w.len()).filter(|&j| w[i] > w[j]).count()).sum()
    }

    /// `w · s_i`.
    pub fn mul_generator(&self, i: usize) -> Self {
        let mut w = self.0.clone();
        w.swap(i - 1, i);
        WeylElement(w)
    }

    /// `s_i · w`.
    pub fn generator_mul(&self, i: usize) -> Self {
        let (a, b) = (i as u8, i as u8 + 1);
        WeylElement(self.0.iter().map(|&x| if x == a { b } else if x == b { a } else { x }).collect())
    }

    /// `ℓ(w s_i) < ℓ(w)`.
    pub fn has_right_descent(&self, i: usize) -> bool {
        self.0[i - 1] > self.0[i]
    }

    /// `ℓ(s_i w) < ℓ(w)`: the value `i+1` appears before `i`.
    pub fn has_left_descent(&self, i: usize) -> bool {
        let pos = |v: u8| self.0.iter().position(|&x| x == v);
        pos(i as u8 + 1) < pos(i as u8)
    }
}

impl fmt::Debug for WeylElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

impl Serialize for WeylElement {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.0.serialize(s)
    }
}

/// All of `W(A_n)` with lengths, in breadth-first order from the identity,
/// generated by right multiplication with `s_1, …, s_n`.
pub fn weyl_group(rank: usize) -> Result<Vec<(WeylElement, usize)>, CoxeterError> {
    weyl_group_with_max_rank(rank, DEFAULT_MAX_RANK)
}

pub fn weyl_group_with_max_rank(rank: usize, max_rank: usize) -> Result<Vec<(WeylElement, usize)>, CoxeterError> {
    if rank == 0 || rank > max_rank {
        return Err(CoxeterError::RankOutOfRange { rank, max: max_rank });
    }
    Ok(bfs(rank).0)
}

fn bfs(rank: usize) -> (Vec<(WeylElement, usize)>, HashMap<WeylElement, usize>) {
    let start = WeylElement::identity(rank);
    let mut depth = HashMap::from([(start.clone(), 0)]);
    let mut order = vec![(start, 0)];
    let mut head = 0;
    while head < order.len() {
        let (w, d) = order[head].clone();
        head += 1;
        for i in 1..=rank {
            let next = w.mul_generator(i);
            if !depth.contains_key(&next) {
                depth.insert(next.clone(), d + 1);
                order.push((next, d + 1));
            }
        }
    }
    (order, depth)
}

/// Lexicographically smallest reduced word, built by repeatedly stripping
/// the smallest left descent.
pub fn canonical_reduced_word(w: &WeylElement) -> Vec<usize> {
    let mut word = Vec::with_capacity(w.length());
    let mut cur = w.clone();
    while let Some(i) = (1..=cur.rank()).find(|&i| cur.has_left_descent(i)) {
        word.push(i);
        cur = cur.generator_mul(i);
    }
    word
}

/// `s2s1s3s2` style label; `e` for the empty word.
pub fn word_label(word: &[usize]) -> String {
    if word.is_empty() {
        return "e".to_string();
    }
    word.iter().map(|i| format!("s{}", i)).collect()
}

/// Minimal-length representative of a coset `w W_S`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CosetRep {
    pub element: WeylElement,
    pub length: usize,
    pub word: Vec<usize>,
}

impl CosetRep {
    fn of(element: WeylElement) -> Self {
        let word = canonical_reduced_word(&element);
        CosetRep { length: word.len(), element, word }
    }

    pub fn label(&self) -> String {
        word_label(&self.word)
    }
}

fn is_minimal(spec: &DynkinSpec, w: &WeylElement) -> bool {
    spec.untagged().all(|s| !w.has_right_descent(s))
}

/// Representatives with no right descent at an untagged generator, sorted
/// by length and then by reduced word.
pub fn minimal_coset_reps(spec: &DynkinSpec) -> Vec<CosetRep> {
    let mut reps: Vec<CosetRep> =
        bfs(spec.rank).0.into_iter().filter(|(w, _)| is_minimal(spec, w)).map(|(w, _)| CosetRep::of(w)).collect();
    reps.sort_by(|a, b| (a.length, &a.word).cmp(&(b.length, &b.word)));
    reps
}

/// The identity and every element whose reduced words all end in a tagged
/// letter. The possible last letters of `w` are read off the Cayley graph:
/// `s` is one exactly when `w s` lies one layer closer to the identity.
pub fn flag_vertices_alt(spec: &DynkinSpec) -> Vec<WeylElement> {
    let (order, depth) = bfs(spec.rank);
    order
        .into_iter()
        .filter(|(w, d)| {
            (1..=spec.rank).filter(|&s| depth[&w.mul_generator(s)] + 1 == *d).all(|s| spec.is_tagged(s))
        })
        .map(|(w, _)| w)
        .collect()
}

/// Right-multiplies by untagged descents until none remain.
fn reduce_to_minimal(spec: &DynkinSpec, mut w: WeylElement) -> WeylElement {
    while let Some(s) = spec.untagged().find(|&s| w.has_right_descent(s)) {
        w = w.mul_generator(s);
    }
    w
}

/// Amplified graph on the minimal coset representatives, with an `Omega`
/// family `v -> w` whenever `ℓ(w) = ℓ(v) + 1` and `v` is obtained from the
/// canonical word of `w` by deleting one letter and reducing.
pub fn flag_graph(spec: &DynkinSpec) -> Result<AmpGraph, CoxeterError> {
    let reps = minimal_coset_reps(spec);

    let from_reps: BTreeSet<&WeylElement> = reps.iter().map(|r| &r.element).collect();
    let alt = flag_vertices_alt(spec);
    let from_alt: BTreeSet<&WeylElement> = alt.iter().collect();
    if from_reps != from_alt {
        let diff: Vec<_> = from_reps.symmetric_difference(&from_alt).collect();
        return Err(CoxeterError::CrossCheck(format!("{:?}", diff)));
    }

    let labels: Vec<String> = reps.iter().map(CosetRep::label).collect();
    let index: HashMap<&WeylElement, usize> = reps.iter().enumerate().map(|(i, r)| (&r.element, i)).collect();
    let mut g = AmpGraph::new(&labels)?;
    for (wi, w) in reps.iter().enumerate() {
        for k in 0..w.word.len() {
            let mut sub = w.word.clone();
            sub.remove(k);
            let v = reduce_to_minimal(spec, WeylElement::from_word(spec.rank, &sub));
            if v.length() + 1 == w.length {
                let vi = index[&v];
                g.set_mult(&labels[vi], &labels[wi], Multiplicity::Omega)?;
            }
        }
    }
    Ok(g)
}
