use serde::Serialize;

use super::element::{CKElement, EdgeRef};
use super::map::GeneratorMap;
use super::AlgebraError;

/// One named check and its outcome.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    /// Whether a failure of this check fails the report.
    pub required: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct VerificationReport {
    pub checks: Vec<Check>,
}

impl VerificationReport {
    pub fn push(&mut self, name: &str, required: bool, failure: Option<String>) {
        self.checks.push(Check {
            name: name.to_string(),
            passed: failure.is_none(),
            required,
            counterexample: failure,
        });
    }

    /// Appends another report's checks with a name prefix.
    pub fn extend_prefixed(&mut self, prefix: &str, other: VerificationReport) {
        for mut c in other.checks {
            c.name = format!("{}{}", prefix, c.name);
            self.checks.push(c);
        }
    }

    pub fn get(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    /// All required checks passed.
    pub fn ok(&self) -> bool {
        self.checks.iter().all(|c| c.passed || !c.required)
    }

    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failed(&self) -> Vec<&str> {
        self.checks.iter().filter(|c| !c.passed).map(|c| c.name.as_str()).collect()
    }
}

/// Symbolic indices standing in for `i` and `j != i`. Templates are uniform in
/// the index, so these two cases cover every pair of concrete indices.
const I: u32 = 0;
const J: u32 = 1;

/// Checks that `m` defines a gauge-homogeneous *-homomorphism: the images
/// form a Cuntz-Krieger family in the target, and (when `unital`) sum to
/// the unit.
pub fn verify_ck_family(m: &GeneratorMap, unital: bool) -> Result<VerificationReport, AlgebraError> {
    let src = m.source();
    let tgt = m.target();
    let mut report = VerificationReport::default();
    let pname = |v: usize| format!("p[{}]", src.vertex(v));
    let sname = |(a, b): (usize, usize), i: u32| format!("s[{}>{}#{}]", src.vertex(a), src.vertex(b), i);

    let n = src.n();
    let mut fail = None;
    for v in 0..n {
        if !m.vertex_image(v).is_projection()? {
            fail = Some(format!("image of {} = {} is not a projection", pname(v), m.vertex_image(v)));
            break;
        }
    }
    report.push("vertex_projections", true, fail);

    let mut fail = None;
    'orth: for v in 0..n {
        for w in v + 1..n {
            let prod = m.vertex_image(v).mul(m.vertex_image(w))?;
            if !prod.is_zero() {
                fail = Some(format!("image({}) * image({}) = {}", pname(v), pname(w), prod));
                break 'orth;
            }
        }
    }
    report.push("vertex_orthogonality", true, fail);

    let families: Vec<(usize, usize)> = m.family_images().map(|(k, _)| k).collect();
    let image = |f: (usize, usize), i: u32| m.edge_image(EdgeRef { src: f.0, dst: f.1, index: i });

    // Partial isometry with support and range under the right projections.
    let mut fail = None;
    for &f in &families {
        let s = image(f, I)?;
        let (ps, pr) = (m.vertex_image(f.0), m.vertex_image(f.1));
        if s.mul(&s.adjoint())?.mul(&s)? != s {
            fail = Some(format!("image of {} = {} is not a partial isometry", sname(f, I), s));
            break;
        }
        if ps.mul(&s)? != s || s.mul(pr)? != s {
            fail = Some(format!("image of {} = {} is not compatible with its endpoint projections", sname(f, I), s));
            break;
        }
    }
    report.push("adjoint_compatibility", true, fail);

    let mut fail = None;
    'ck1: for &e in &families {
        let se = image(e, I)?;
        for &f in &families {
            for j in [I, J] {
                let lhs = se.adjoint().mul(&image(f, j)?)?;
                let rhs = if e == f && j == I { m.vertex_image(e.1).clone() } else { CKElement::zero(tgt) };
                if lhs != rhs {
                    fail = Some(format!("image({})* image({}) = {}, expected {}", sname(e, I), sname(f, j), lhs, rhs));
                    break 'ck1;
                }
            }
        }
    }
    report.push("ck1", true, fail);

    let mut fail = None;
    for &f in &families {
        let s = image(f, I)?;
        let range = s.mul(&s.adjoint())?;
        let support = m.vertex_image(f.0);
        let ok = range.is_projection()? && support.is_projection()? && range.is_subprojection(support)?;
        if !ok {
            fail = Some(format!("image({0}) image({0})* = {1} is not below image({2})", sname(f, I), range, pname(f.0)));
            break;
        }
    }
    report.push("ck2", true, fail);

    let mut total = CKElement::zero(tgt);
    for v in 0..n {
        total = total.add(m.vertex_image(v))?;
    }
    let unit = CKElement::unit(tgt);
    let fail = (total != unit).then(|| format!("sum of vertex images = {}, unit = {}", total, unit));
    report.push("unitality", unital, fail);

    let mut fail = None;
    for v in 0..n {
        let img = m.vertex_image(v);
        if !img.is_zero() && img.gauge_degree()? != Some(0) {
            fail = Some(format!("image of {} = {} is not of degree 0", pname(v), img));
            break;
        }
    }
    if fail.is_none() {
        for &f in &families {
            let img = image(f, I)?;
            if !img.is_zero() && img.gauge_degree()? != Some(1) {
                fail = Some(format!("image of {} = {} is not of degree 1", sname(f, I), img));
                break;
            }
        }
    }
    report.push("gauge_homogeneity", true, fail);

    Ok(report)
}

/// Checks `m` against the identity on every generator of `m`'s source,
/// which must equal its target.
pub fn verify_identity(m: &GeneratorMap) -> Result<Option<String>, AlgebraError> {
    let g = m.source();
    for (i, v) in g.vertices().iter().enumerate() {
        let p = CKElement::vertex(g, v.as_str())?;
        if *m.vertex_image(i) != p {
            return Ok(Some(format!("p[{}] -> {}", v, m.vertex_image(i))));
        }
    }
    for ((a, b), _) in m.family_images() {
        for i in [I, J] {
            let e = CKElement::edge_at(g, EdgeRef { src: a, dst: b, index: i })?;
            let img = m.apply(&e)?;
            if img != e {
                return Ok(Some(format!("{} -> {}", e, img)));
            }
        }
    }
    Ok(None)
}
