//! Leavitt path algebra elements over the rationals and Cuntz-Krieger checks.
//!
//! An element is a finite rational combination of monomials `s_α s_β*` with
//! `r(α) = r(β)`; the vertex projection `p_v` is the monomial on two
//! length-zero paths at `v`. Products use
//!
//! ```text
//! (α β*)(γ δ*) = α γ' δ*      if γ = β γ'
//!              = α (δ β')*    if β = γ β'
//!              = 0            otherwise
//! ```
//!
//! and equality is decided by expanding with `p_v = Σ_{s(e)=v} s_e s_e*`.
//!
//! Text format: one monomial per line, `<coef> * <alpha> ; <beta>`, with paths
//! written `e.f` or `@v`; `0` is the zero element.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::code::BlockMap;
use crate::graph::{Graph, GraphError, Path};
use crate::seq::Symbol;
use crate::ParseError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("elements live over different graphs")]
    GraphMismatch,
    #[error("graph must be finite with no sinks")]
    UnsupportedGraph,
    #[error("block map is undefined on the path `{0}`")]
    WindowMismatch(Path),
    #[error("block map sends `{path}` to `{image}`, which is not an edge")]
    ImageNotAnEdge { path: Path, image: Symbol },
    #[error("`{0}` is not the image of any path")]
    NoPreimage(Symbol),
    #[error("preimages of `{0}` start with different edges")]
    AmbiguousFirstEdge(Symbol),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Parse(#[from] ParseError),
}

/// The monomial `s_α s_β*`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Term {
    pub alpha: Path,
    pub beta: Path,
}

impl Term {
    /// `l(α) − l(β)`.
    pub fn degree(&self) -> i64 {
        self.alpha.len() as i64 - self.beta.len() as i64
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ; {}", self.alpha, self.beta)
    }
}

fn term_product(a: &Term, b: &Term) -> Option<Term> {
    if let Some(rest) = b.alpha.strip_prefix(&a.beta) {
        return Some(Term {
            alpha: a.alpha.then(&rest)?,
            beta: b.beta.clone(),
        });
    }
    if let Some(rest) = a.beta.strip_prefix(&b.alpha) {
        return Some(Term {
            alpha: a.alpha.clone(),
            beta: b.beta.then(&rest)?,
        });
    }
    None
}

/// A rational combination of monomials over a fixed graph.
#[derive(Clone)]
pub struct AlgebraElement {
    graph: Arc<Graph>,
    terms: BTreeMap<Term, BigRational>,
}

impl PartialEq for AlgebraElement {
    /// Structural equality of stored terms; see [`AlgebraElement::equal`] for
    /// equality in the algebra.
    fn eq(&self, other: &Self) -> bool {
        self.terms == other.terms && same_graph(&self.graph, &other.graph)
    }
}

impl Eq for AlgebraElement {}

impl fmt::Debug for AlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "AlgebraElement({})", self.to_string().replace('\n', " + "))
    }
}

fn same_graph(a: &Arc<Graph>, b: &Arc<Graph>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

impl AlgebraElement {
    pub fn zero(graph: &Arc<Graph>) -> Self {
        AlgebraElement {
            graph: graph.clone(),
            terms: BTreeMap::new(),
        }
    }

    /// `c · s_α s_β*`, which is zero when `r(α) ≠ r(β)`.
    pub fn monomial(graph: &Arc<Graph>, alpha: Path, beta: Path, c: BigRational) -> Self {
        let mut e = AlgebraElement::zero(graph);
        if alpha.range() == beta.range() && !c.is_zero() {
            e.terms.insert(Term { alpha, beta }, c);
        }
        e
    }

    /// `p_v`.
    pub fn vertex(graph: &Arc<Graph>, v: &Symbol) -> Result<Self, AlgebraError> {
        if !graph.has_vertex(v) {
            return Err(GraphError::UnknownVertex(v.clone()).into());
        }
        let p = Path::vertex(v.clone());
        Ok(AlgebraElement::monomial(graph, p.clone(), p, BigRational::one()))
    }

    /// `s_e`.
    pub fn edge(graph: &Arc<Graph>, e: &Symbol) -> Result<Self, AlgebraError> {
        let path = graph.path(&crate::Word::new(vec![e.clone()]))?;
        let r = Path::vertex(path.range().clone());
        Ok(AlgebraElement::monomial(graph, path, r, BigRational::one()))
    }

    /// `s_α` for a path, `p_v` for a length-zero path.
    pub fn path(graph: &Arc<Graph>, alpha: &Path) -> Self {
        let r = Path::vertex(alpha.range().clone());
        AlgebraElement::monomial(graph, alpha.clone(), r, BigRational::one())
    }

    pub fn graph(&self) -> &Arc<Graph> {
        &self.graph
    }

    pub fn terms(&self) -> &BTreeMap<Term, BigRational> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_term(&mut self, t: Term, c: BigRational) {
        let entry = self.terms.entry(t).or_insert_with(BigRational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.retain(|_, c| !c.is_zero());
        }
    }

    fn check(&self, other: &Self) -> Result<(), AlgebraError> {
        if same_graph(&self.graph, &other.graph) {
            Ok(())
        } else {
            Err(AlgebraError::GraphMismatch)
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.check(other)?;
        let mut out = self.clone();
        for (t, c) in &other.terms {
            out.add_term(t.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        let mut out = AlgebraElement::zero(&self.graph);
        if !c.is_zero() {
            out.terms = self.terms.iter().map(|(t, x)| (t.clone(), x * c)).collect();
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.add(&other.scale(&-BigRational::one()))
    }

    pub fn multiply(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.check(other)?;
        let mut out = AlgebraElement::zero(&self.graph);
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                if let Some(t) = term_product(a, b) {
                    out.add_term(t, x * y);
                }
            }
        }
        Ok(out)
    }

    /// The involution `s_α s_β* ↦ s_β s_α*`.
    pub fn adjoint(&self) -> Self {
        AlgebraElement {
            graph: self.graph.clone(),
            terms: self
                .terms
                .iter()
                .map(|(t, c)| {
                    (
                        Term {
                            alpha: t.beta.clone(),
                            beta: t.alpha.clone(),
                        },
                        c.clone(),
                    )
                })
                .collect(),
        }
    }

    /// The degree if every term has the same `l(α) − l(β)`.
    pub fn homogeneous_degree(&self) -> Option<i64> {
        let degrees: BTreeSet<i64> = self.terms.keys().map(Term::degree).collect();
        match degrees.len() {
            0 => Some(0),
            1 => degrees.into_iter().next(),
            _ => None,
        }
    }

    fn supported(&self) -> Result<(), AlgebraError> {
        if self.graph.is_finite() && self.graph.sinks().is_empty() {
            Ok(())
        } else {
            Err(AlgebraError::UnsupportedGraph)
        }
    }

    /// Rewrites every monomial with `min(l(α), l(β)) < depth` through
    /// `s_α s_β* = Σ_{s(e)=r(α)} s_{αe} s_{βe}*`.
    pub fn expand_to_depth(&self, depth: usize) -> Result<Self, AlgebraError> {
        self.supported()?;
        let mut out = AlgebraElement::zero(&self.graph);
        let mut pending: Vec<(Term, BigRational)> =
            self.terms.iter().map(|(t, c)| (t.clone(), c.clone())).collect();
        while let Some((t, c)) = pending.pop() {
            if t.alpha.len().min(t.beta.len()) >= depth {
                out.add_term(t, c);
                continue;
            }
            let v = t.alpha.range().clone();
            for e in self.graph.out_edges(&v, 0)?.edges {
                let step = self.graph.path(&crate::Word::new(vec![e]))?;
                let alpha = t.alpha.then(&step).expect("consecutive");
                let beta = t.beta.then(&step).expect("consecutive");
                pending.push((Term { alpha, beta }, c.clone()));
            }
        }
        Ok(out)
    }

    fn depth(&self) -> usize {
        self.terms
            .keys()
            .map(|t| t.alpha.len().min(t.beta.len()))
            .max()
            .unwrap_or(0)
    }

    /// Equality in the algebra. Both sides are expanded to the largest
    /// `min(l(α), l(β))` among their monomials; at that depth the expanded
    /// monomials are linearly independent, so equality is coefficientwise.
    pub fn equal(&self, other: &Self) -> Result<bool, AlgebraError> {
        self.check(other)?;
        let d = self.depth().max(other.depth());
        Ok(self.expand_to_depth(d)?.terms == other.expand_to_depth(d)?.terms)
    }

    /// Parses the element text format.
    pub fn parse(graph: &Arc<Graph>, text: &str) -> Result<Self, AlgebraError> {
        let mut out = AlgebraElement::zero(graph);
        for (i, raw) in text.lines().enumerate() {
            let err = |m: String| AlgebraError::Parse(ParseError::new(i + 1, m));
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() || line == "0" {
                continue;
            }
            let (coef, paths) = line
                .split_once('*')
                .ok_or_else(|| err("expected `<coef> * <alpha> ; <beta>`".into()))?;
            let (alpha, beta) = paths
                .split_once(';')
                .ok_or_else(|| err("expected `<alpha> ; <beta>`".into()))?;
            let c: BigRational = coef
                .trim()
                .parse()
                .map_err(|_| err(format!("invalid coefficient `{}`", coef.trim())))?;
            let alpha = graph.parse_path(alpha).map_err(|e| err(e.to_string()))?;
            let beta = graph.parse_path(beta).map_err(|e| err(e.to_string()))?;
            if alpha.range() != beta.range() {
                return Err(err("paths must end at the same vertex".into()));
            }
            out.add_term(Term { alpha, beta }, c);
        }
        Ok(out)
    }
}

impl fmt::Display for AlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (t, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str("\n")?;
            }
            write!(f, "{c} * {t}")?;
        }
        Ok(())
    }
}

/// Images of the generators `s_e`, `p_v` of one graph as elements over
/// another.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ImageMap {
    pub source: Arc<Graph>,
    pub target: Arc<Graph>,
    pub edges: BTreeMap<Symbol, AlgebraElement>,
    pub vertices: BTreeMap<Symbol, AlgebraElement>,
}

impl ImageMap {
    /// Generators sent to the same-named generators of an identical graph.
    pub fn identity(graph: &Arc<Graph>) -> Result<Self, AlgebraError> {
        let mut edges = BTreeMap::new();
        for e in graph.explicit_edges() {
            edges.insert(e.clone(), AlgebraElement::edge(graph, e)?);
        }
        let mut vertices = BTreeMap::new();
        for v in graph.explicit_vertices() {
            vertices.insert(v.clone(), AlgebraElement::vertex(graph, v)?);
        }
        Ok(ImageMap {
            source: graph.clone(),
            target: graph.clone(),
            edges,
            vertices,
        })
    }

    fn image_of_path(&self, alpha: &Path) -> AlgebraElement {
        if alpha.is_empty() {
            return self.vertices[alpha.source()].clone();
        }
        alpha
            .edges()
            .iter()
            .map(|e| self.edges[e].clone())
            .reduce(|a, b| a.multiply(&b).expect("same target graph"))
            .expect("nonempty path")
    }

    /// Extends the generator images multiplicatively and linearly.
    pub fn apply(&self, x: &AlgebraElement) -> Result<AlgebraElement, AlgebraError> {
        if !same_graph(x.graph(), &self.source) {
            return Err(AlgebraError::GraphMismatch);
        }
        let mut out = AlgebraElement::zero(&self.target);
        for (t, c) in x.terms() {
            let img = self
                .image_of_path(&t.alpha)
                .multiply(&self.image_of_path(&t.beta).adjoint())?;
            out = out.add(&img.scale(c))?;
        }
        Ok(out)
    }
}

fn require_finite(g: &Graph) -> Result<(), AlgebraError> {
    if g.is_finite() && g.sinks().is_empty() {
        Ok(())
    } else {
        Err(AlgebraError::UnsupportedGraph)
    }
}

fn edge_image(f: &Arc<Graph>, phi: &BlockMap, p: &Path) -> Result<Symbol, AlgebraError> {
    let g = phi
        .eval(p.edges())
        .ok_or_else(|| AlgebraError::WindowMismatch(p.clone()))?;
    if !f.is_edge(&g) {
        return Err(AlgebraError::ImageNotAnEdge {
            path: p.clone(),
            image: g,
        });
    }
    Ok(g)
}

/// The generator images induced by the block map `Φ` (window `n`) of a
/// bounded inverse of a 1-block conjugacy `X_F → X_E`:
///
/// ```text
/// s_e ↦ Σ { t_g : g = Φ(eα), α ∈ r(e)E^{n−1} }
/// p_v ↦ Σ { t_g t_g* : g = Φ(β), β ∈ vE^n }
/// ```
///
/// with each `g` counted once.
pub fn block_code_images(e: &Arc<Graph>, f: &Arc<Graph>, phi: &BlockMap) -> Result<ImageMap, AlgebraError> {
    require_finite(e)?;
    require_finite(f)?;
    let n = phi.window();
    let mut edges = BTreeMap::new();
    for edge in e.explicit_edges() {
        let first = e.path(&crate::Word::new(vec![edge.clone()]))?;
        let mut gs = BTreeSet::new();
        for alpha in e.enumerate_paths(first.range(), n - 1, 0)?.paths {
            gs.insert(edge_image(f, phi, &first.then(&alpha).expect("consecutive"))?);
        }
        let mut img = AlgebraElement::zero(f);
        for g in gs {
            img = img.add(&AlgebraElement::edge(f, &g)?)?;
        }
        edges.insert(edge.clone(), img);
    }
    let mut vertices = BTreeMap::new();
    for v in e.explicit_vertices() {
        let mut gs = BTreeSet::new();
        for beta in e.enumerate_paths(v, n, 0)?.paths {
            gs.insert(edge_image(f, phi, &beta)?);
        }
        let mut img = AlgebraElement::zero(f);
        for g in gs {
            let t = AlgebraElement::edge(f, &g)?;
            img = img.add(&t.multiply(&t.adjoint())?)?;
        }
        vertices.insert(v.clone(), img);
    }
    Ok(ImageMap {
        source: e.clone(),
        target: f.clone(),
        edges,
        vertices,
    })
}

/// Which Cuntz-Krieger condition failed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    /// `P_v` is a self-adjoint idempotent.
    Projection,
    /// `P_v P_w = 0` for `v ≠ w`.
    Orthogonality,
    /// `S_e* S_e = P_{r(e)}`.
    Ck1,
    /// `P_v = Σ_{s(e)=v} S_e S_e*`.
    Ck2,
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Relation::Projection => "projection",
            Relation::Orthogonality => "orthogonality",
            Relation::Ck1 => "CK1",
            Relation::Ck2 => "CK2",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CkVerdict {
    Valid {
        projections: usize,
        orthogonal_pairs: usize,
        ck1: usize,
        ck2: usize,
    },
    FailedRelation {
        relation: Relation,
        witness: String,
    },
}

/// Checks that the images form a Cuntz-Krieger family for the source graph.
pub fn verify_ck_family(images: &ImageMap) -> Result<CkVerdict, AlgebraError> {
    let fail = |relation, witness: String| Ok(CkVerdict::FailedRelation { relation, witness });
    let e = &images.source;
    for (v, p) in &images.vertices {
        if !p.multiply(p)?.equal(p)? || !p.adjoint().equal(p)? {
            return fail(Relation::Projection, v.to_string());
        }
    }
    let mut orthogonal_pairs = 0;
    for (v, p) in &images.vertices {
        for (w, q) in &images.vertices {
            if v < w {
                orthogonal_pairs += 1;
                if !p.multiply(q)?.is_zero() && !p.multiply(q)?.equal(&AlgebraElement::zero(&images.target))? {
                    return fail(Relation::Orthogonality, format!("{v},{w}"));
                }
            }
        }
    }
    for (edge, s) in &images.edges {
        let r = e.range(edge).expect("edge of the source graph");
        if !s.adjoint().multiply(s)?.equal(&images.vertices[&r])? {
            return fail(Relation::Ck1, edge.to_string());
        }
    }
    let mut ck2 = 0;
    for (v, p) in &images.vertices {
        let out = e.out_edges(v, 0)?.edges;
        if out.is_empty() {
            continue;
        }
        ck2 += 1;
        let mut sum = AlgebraElement::zero(&images.target);
        for edge in out {
            let s = &images.edges[&edge];
            sum = sum.add(&s.multiply(&s.adjoint())?)?;
        }
        if !sum.equal(p)? {
            return fail(Relation::Ck2, v.to_string());
        }
    }
    Ok(CkVerdict::Valid {
        projections: images.vertices.len(),
        orthogonal_pairs,
        ck1: images.edges.len(),
        ck2,
    })
}

/// An element over the source graph whose image is `t_a`:
/// `s_e · Σ { s_f s_f* : f ∈ r(e)E^1, Φ(efα) = a for some α }`, where `e` is
/// the common first edge of the `Φ`-preimages of `a` (just `s_e` when `n = 1`).
pub fn surjectivity_witness(
    images: &ImageMap,
    phi: &BlockMap,
    a: &Symbol,
) -> Result<AlgebraElement, AlgebraError> {
    let e = &images.source;
    let n = phi.window();
    let preimages: Vec<Path> = e
        .all_paths(n, 0)
        .paths
        .into_iter()
        .filter(|p| phi.eval(p.edges()).as_ref() == Some(a))
        .collect();
    let firsts: BTreeSet<&Symbol> = preimages.iter().map(|p| &p.edges()[0]).collect();
    let first = match firsts.len() {
        0 => return Err(AlgebraError::NoPreimage(a.clone())),
        1 => (*firsts.iter().next().expect("one element")).clone(),
        _ => return Err(AlgebraError::AmbiguousFirstEdge(a.clone())),
    };
    let s_e = AlgebraElement::edge(e, &first)?;
    if n == 1 {
        return Ok(s_e);
    }
    let seconds: BTreeSet<&Symbol> = preimages.iter().map(|p| &p.edges()[1]).collect();
    let mut sum = AlgebraElement::zero(e);
    for f in seconds {
        let s_f = AlgebraElement::edge(e, f)?;
        sum = sum.add(&s_f.multiply(&s_f.adjoint())?)?;
    }
    s_e.multiply(&sum)
}
