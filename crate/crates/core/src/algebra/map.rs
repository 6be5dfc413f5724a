use std::collections::BTreeMap;
use std::sync::Arc;

use super::element::{check_family, same_graph, CKElement, EdgeRef};
use super::AlgebraError;
use crate::graph::{AmpGraph, Multiplicity};

/// Formal sum of target edge families, all carrying the same symbolic index
/// as the edge being mapped: `s^i_{a,b} -> sum c * s^i_{x,y}`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Template {
    terms: BTreeMap<(usize, usize), i64>,
}

impl Template {
    pub fn zero() -> Self {
        Template::default()
    }

    pub fn single(src: usize, dst: usize) -> Self {
        let mut t = Template::default();
        t.terms.insert((src, dst), 1);
        t
    }

    pub fn from_terms<I: IntoIterator<Item = ((usize, usize), i64)>>(terms: I) -> Self {
        let mut t = Template::default();
        for (k, c) in terms {
            *t.terms.entry(k).or_insert(0) += c;
        }
        t.terms.retain(|_, c| *c != 0);
        t
    }

    pub fn terms(&self) -> impl Iterator<Item = ((usize, usize), i64)> + '_ {
        self.terms.iter().map(|(&k, &c)| (k, c))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The template's value at a concrete edge index.
    pub fn instantiate(&self, target: &Arc<AmpGraph>, index: u32) -> Result<CKElement, AlgebraError> {
        let mut acc = CKElement::zero(target);
        for (&(src, dst), &c) in &self.terms {
            let e = CKElement::edge_at(target, EdgeRef { src, dst, index })?;
            acc = acc.add(&e.scale(c)?)?;
        }
        Ok(acc)
    }

    pub fn render(&self, target: &AmpGraph) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut parts = Vec::new();
        for (k, (&(s, d), &c)) in self.terms.iter().enumerate() {
            let sym = format!("s[{}>{}#i]", target.vertex(s), target.vertex(d));
            let coef = match c {
                1 => String::new(),
                -1 => "-".to_string(),
                c => format!("{} ", c),
            };
            let sep = if k == 0 { "" } else { " + " };
            parts.push(format!("{}{}{}", sep, coef, sym));
        }
        parts.concat()
    }
}

/// A symbolic *-homomorphism `C*(source) -> C*(target)` given by the images
/// of vertex projections and of whole edge families.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorMap {
    source: Arc<AmpGraph>,
    target: Arc<AmpGraph>,
    vertex_images: Vec<CKElement>,
    family_images: BTreeMap<(usize, usize), Template>,
}

impl GeneratorMap {
    /// Sends every generator to the generator with the same labels in the
    /// target, or to zero when the target lacks it. This is the identity,
    /// the natural embedding of a quotient, and the quotient map, depending
    /// on which way the graphs are nested.
    pub fn natural(source: &Arc<AmpGraph>, target: &Arc<AmpGraph>) -> Result<Self, AlgebraError> {
        if !source.is_amplified() || !target.is_amplified() {
            return Err(AlgebraError::NotAmplified);
        }
        let vertex_images = source
            .vertices()
            .iter()
            .map(|v| match target.index_of(v.as_str()) {
                Some(_) => CKElement::vertex(target, v.as_str()),
                None => Ok(CKElement::zero(target)),
            })
            .collect::<Result<Vec<_>, _>>()?;
        let mut family_images = BTreeMap::new();
        for (s, d, _) in source.families() {
            let img = match (target.index_of(source.vertex(s).as_str()), target.index_of(source.vertex(d).as_str())) {
                (Some(ts), Some(td)) if target.mult(ts, td) == Multiplicity::Omega => Template::single(ts, td),
                _ => Template::zero(),
            };
            family_images.insert((s, d), img);
        }
        Ok(GeneratorMap { source: source.clone(), target: target.clone(), vertex_images, family_images })
    }

    pub fn identity(graph: &Arc<AmpGraph>) -> Result<Self, AlgebraError> {
        Self::natural(graph, graph)
    }

    pub fn source(&self) -> &Arc<AmpGraph> {
        &self.source
    }

    pub fn target(&self) -> &Arc<AmpGraph> {
        &self.target
    }

    pub fn vertex_image(&self, v: usize) -> &CKElement {
        &self.vertex_images[v]
    }

    pub fn family_image(&self, src: usize, dst: usize) -> Option<&Template> {
        self.family_images.get(&(src, dst))
    }

    pub fn family_images(&self) -> impl Iterator<Item = ((usize, usize), &Template)> {
        self.family_images.iter().map(|(&k, t)| (k, t))
    }

    pub fn set_vertex_image(&mut self, v: &str, image: CKElement) -> Result<(), AlgebraError> {
        let i = self.source.require(v)?;
        if !same_graph(image.graph(), &self.target) {
            return Err(AlgebraError::GraphMismatch);
        }
        self.vertex_images[i] = image;
        Ok(())
    }

    /// Sets the image of the family `src -> dst` to a sum of target families
    /// given by label.
    pub fn set_family_image(&mut self, src: &str, dst: &str, image: &[(&str, &str, i64)]) -> Result<(), AlgebraError> {
        let key = (self.source.require(src)?, self.source.require(dst)?);
        if !self.family_images.contains_key(&key) {
            return Err(AlgebraError::MissingFamily(src.to_string(), dst.to_string()));
        }
        let mut terms = Vec::with_capacity(image.len());
        for &(a, b, c) in image {
            let (ta, tb) = (self.target.require(a)?, self.target.require(b)?);
            check_family(&self.target, ta, tb)?;
            terms.push(((ta, tb), c));
        }
        self.family_images.insert(key, Template::from_terms(terms));
        Ok(())
    }

    /// Image of `s^index_{src,dst}`.
    pub fn edge_image(&self, e: EdgeRef) -> Result<CKElement, AlgebraError> {
        let t = self
            .family_images
            .get(&(e.src, e.dst))
            .ok_or_else(|| missing(&self.source, e.src, e.dst))?;
        t.instantiate(&self.target, e.index)
    }

    /// Extends the map multiplicatively to an arbitrary element.
    pub fn apply(&self, x: &CKElement) -> Result<CKElement, AlgebraError> {
        if !same_graph(x.graph(), &self.source) {
            return Err(AlgebraError::GraphMismatch);
        }
        let mut acc = CKElement::zero(&self.target);
        for (w, c) in x.terms() {
            let image = if w.is_vertex() {
                self.vertex_images[w.alpha().source()].clone()
            } else {
                let mut prod: Option<CKElement> = None;
                let alpha = w.alpha().edges().iter().map(|&e| self.edge_image(e));
                let beta = w.beta().edges().iter().rev().map(|&e| self.edge_image(e).map(|x| x.adjoint()));
                for factor in alpha.chain(beta) {
                    let factor = factor?;
                    prod = Some(match prod {
                        None => factor,
                        Some(p) => p.mul(&factor)?,
                    });
                }
                prod.expect("non-vertex word has at least one edge")
            };
            acc = acc.add(&image.scale(c)?)?;
        }
        Ok(acc)
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &GeneratorMap) -> Result<GeneratorMap, AlgebraError> {
        if !same_graph(&inner.target, &self.source) {
            return Err(AlgebraError::GraphMismatch);
        }
        let vertex_images =
            inner.vertex_images.iter().map(|x| self.apply(x)).collect::<Result<Vec<_>, _>>()?;
        let mut family_images = BTreeMap::new();
        for (&key, t) in &inner.family_images {
            let mut terms = Vec::new();
            for ((a, b), c) in t.terms() {
                let outer = self.family_images.get(&(a, b)).ok_or_else(|| missing(&self.source, a, b))?;
                for (k, d) in outer.terms() {
                    terms.push((k, c.checked_mul(d).ok_or(AlgebraError::Overflow)?));
                }
            }
            family_images.insert(key, Template::from_terms(terms));
        }
        Ok(GeneratorMap { source: inner.source.clone(), target: self.target.clone(), vertex_images, family_images })
    }

    /// Generator-image table: `(generator, image)` strings in vertex order,
    /// then family order.
    pub fn image_table(&self) -> Vec<(String, String)> {
        let mut rows = Vec::new();
        for (i, v) in self.source.vertices().iter().enumerate() {
            rows.push((format!("p[{}]", v), self.vertex_images[i].render()));
        }
        for (&(s, d), t) in &self.family_images {
            rows.push((
                format!("s[{}>{}#i]", self.source.vertex(s), self.source.vertex(d)),
                t.render(&self.target),
            ));
        }
        rows
    }
}

fn missing(g: &AmpGraph, s: usize, d: usize) -> AlgebraError {
    AlgebraError::MissingFamily(g.vertex(s).to_string(), g.vertex(d).to_string())
}
