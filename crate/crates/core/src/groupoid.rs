//! The graph groupoid `{(αγ, l(α) − l(β), βγ)}` over boundary paths, and the
//! maps a conjugacy of edge shifts induces on boundary paths and groupoids.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::code::{CodeError, ConjugacyWitness};
use crate::graph::{BoundaryPath, Graph, GraphError, Path};
use crate::seq::{Seq, Symbol, Word};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupoidError {
    #[error("`{0}` is not a boundary path")]
    NotABoundaryPath(BoundaryPath),
    #[error("no paths α, β with the given lengths lead into a common tail")]
    NotAnElement,
    #[error("paths must end where the tail starts")]
    Mismatch,
    #[error("elements are not composable: `{0}` differs from `{1}`")]
    NotComposable(BoundaryPath, BoundaryPath),
    #[error("conjugacy sends edges `{0}` and `{1}` into the same emitter to edges with different ranges")]
    WellDefinednessViolation(Symbol, Symbol),
    #[error("no edge enters `{0}` within the horizon")]
    NoIncomingEdge(Symbol),
    #[error("images of probes through `{0}` do not settle")]
    NoLimit(Path),
    #[error("conjugacy must be between edge shifts")]
    NotAnEdgeShift,
    #[error(transparent)]
    Code(#[from] CodeError),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// `(αγ, l(α) − l(β), βγ)` with `α`, `β` as short as possible.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GroupoidElement {
    alpha: Path,
    beta: Path,
    gamma: BoundaryPath,
}

fn prepend(alpha: &Path, gamma: &BoundaryPath) -> BoundaryPath {
    match gamma {
        BoundaryPath::Infinite(s) => BoundaryPath::Infinite(Seq::concat(alpha.edges(), s)),
        BoundaryPath::Finite(p) => BoundaryPath::Finite(alpha.then(p).expect("checked on construction")),
    }
}

impl GroupoidElement {
    pub fn alpha(&self) -> &Path {
        &self.alpha
    }

    pub fn beta(&self) -> &Path {
        &self.beta
    }

    pub fn gamma(&self) -> &BoundaryPath {
        &self.gamma
    }

    pub fn k(&self) -> i64 {
        self.alpha.len() as i64 - self.beta.len() as i64
    }

    /// `αγ`, the value of the source map.
    pub fn x(&self) -> BoundaryPath {
        prepend(&self.alpha, &self.gamma)
    }

    /// `βγ`, the value of the range map.
    pub fn y(&self) -> BoundaryPath {
        prepend(&self.beta, &self.gamma)
    }

    pub fn inverse(&self) -> GroupoidElement {
        GroupoidElement {
            alpha: self.beta.clone(),
            beta: self.alpha.clone(),
            gamma: self.gamma.clone(),
        }
    }

    pub fn is_unit(&self) -> bool {
        self.alpha.is_empty() && self.beta.is_empty()
    }
}

impl fmt::Display for GroupoidElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.x(), self.k(), self.y())
    }
}

/// The groupoid of a graph with no sinks.
#[derive(Debug, Clone)]
pub struct Groupoid {
    graph: Arc<Graph>,
}

impl Groupoid {
    pub fn new(graph: Arc<Graph>) -> Result<Self, GroupoidError> {
        graph.check_no_sinks()?;
        Ok(Groupoid { graph })
    }

    pub fn graph(&self) -> &Arc<Graph> {
        &self.graph
    }

    fn first_vertex(&self, x: &BoundaryPath) -> Option<Symbol> {
        match x {
            BoundaryPath::Infinite(s) => self.graph.source(s.at(1)?),
            BoundaryPath::Finite(p) => Some(p.source().clone()),
        }
    }

    fn check_boundary(&self, x: &BoundaryPath) -> Result<(), GroupoidError> {
        if self.graph.boundary_contains(x) {
            Ok(())
        } else {
            Err(GroupoidError::NotABoundaryPath(x.clone()))
        }
    }

    /// The element `(αγ, l(α) − l(β), βγ)`.
    pub fn element(&self, alpha: &Path, beta: &Path, gamma: &BoundaryPath) -> Result<GroupoidElement, GroupoidError> {
        self.check_boundary(gamma)?;
        let s = self.first_vertex(gamma).ok_or(GroupoidError::Mismatch)?;
        if *alpha.range() != s || *beta.range() != s {
            return Err(GroupoidError::Mismatch);
        }
        let k = alpha.len() as i64 - beta.len() as i64;
        self.from_triple(&prepend(alpha, gamma), k, &prepend(beta, gamma))
    }

    /// Recovers the shortest `α`, `β`, `γ` behind `(x, k, y)`.
    pub fn from_triple(&self, x: &BoundaryPath, k: i64, y: &BoundaryPath) -> Result<GroupoidElement, GroupoidError> {
        self.check_boundary(x)?;
        self.check_boundary(y)?;
        let start = k.max(0) as usize;
        match (x, y) {
            (BoundaryPath::Infinite(sx), BoundaryPath::Infinite(sy)) => {
                let (tx, ty) = (sx.transient_len(), sy.transient_len());
                for a in start..=start + tx + ty + tx * ty {
                    let b = (a as i64 - k) as usize;
                    let tail = sx.shift_by(a);
                    if tail == sy.shift_by(b) {
                        let alpha = self.prefix_of(x, a)?;
                        let beta = self.prefix_of(y, b)?;
                        return Ok(GroupoidElement {
                            alpha,
                            beta,
                            gamma: BoundaryPath::Infinite(tail),
                        });
                    }
                }
                Err(GroupoidError::NotAnElement)
            }
            (BoundaryPath::Finite(px), BoundaryPath::Finite(py)) => {
                if px.len() as i64 - py.len() as i64 != k || px.range() != py.range() {
                    return Err(GroupoidError::NotAnElement);
                }
                for a in start..=px.len() {
                    let b = (a as i64 - k) as usize;
                    let gx = px.drop_first(a, &self.graph).expect("within length");
                    let gy = py.drop_first(b, &self.graph).expect("within length");
                    if gx == gy {
                        let alpha = prefix_path(px, a, &self.graph)?;
                        let beta = prefix_path(py, b, &self.graph)?;
                        return Ok(GroupoidElement {
                            alpha,
                            beta,
                            gamma: BoundaryPath::Finite(gx),
                        });
                    }
                }
                Err(GroupoidError::NotAnElement)
            }
            _ => Err(GroupoidError::NotAnElement),
        }
    }

    fn prefix_of(&self, x: &BoundaryPath, n: usize) -> Result<Path, GroupoidError> {
        match x {
            BoundaryPath::Infinite(s) if n > 0 => Ok(self.graph.path(&s.prefix(n).expect("infinite"))?),
            BoundaryPath::Finite(p) => prefix_path(p, n, &self.graph),
            _ => Ok(Path::vertex(self.first_vertex(x).expect("nonempty"))),
        }
    }

    pub fn unit(&self, x: &BoundaryPath) -> Result<GroupoidElement, GroupoidError> {
        self.from_triple(x, 0, x)
    }

    pub fn compose(&self, a: &GroupoidElement, b: &GroupoidElement) -> Result<GroupoidElement, GroupoidError> {
        let (ay, bx) = (a.y(), b.x());
        if ay != bx {
            return Err(GroupoidError::NotComposable(ay, bx));
        }
        self.from_triple(&a.x(), a.k() + b.k(), &b.y())
    }

    /// Membership in the basic open set `Z(α, β, F)`.
    pub fn in_basic_open(&self, el: &GroupoidElement, alpha: &Path, beta: &Path, excluded: &BTreeSet<Symbol>) -> bool {
        if alpha.range() != beta.range() || el.k() != alpha.len() as i64 - beta.len() as i64 {
            return false;
        }
        let tail = |z: &BoundaryPath, p: &Path| -> Option<BoundaryPath> {
            match z {
                BoundaryPath::Infinite(s) => {
                    if !s.starts_with(p.edges()) {
                        return None;
                    }
                    let rest = s.shift_by(p.len());
                    let v = self.graph.source(rest.at(1)?)?;
                    (v == *p.range() && (!p.is_empty() || self.first_vertex(z)? == *p.source()))
                        .then_some(BoundaryPath::Infinite(rest))
                }
                BoundaryPath::Finite(q) => q.strip_prefix(p).map(BoundaryPath::Finite),
            }
        };
        match (tail(&el.x(), alpha), tail(&el.y(), beta)) {
            (Some(gx), Some(gy)) if gx == gy => {
                let first = match &gx {
                    BoundaryPath::Infinite(s) => s.at(1).cloned(),
                    BoundaryPath::Finite(q) => q.edges().first().cloned(),
                };
                first.is_none_or(|e| !excluded.contains(&e))
            }
            _ => false,
        }
    }
}

fn prefix_path(p: &Path, n: usize, g: &Graph) -> Result<Path, GroupoidError> {
    if n == 0 {
        return Ok(Path::vertex(p.source().clone()));
    }
    Ok(g.path(&p.edges().slice(0, n))?)
}

fn target_graph(w: &ConjugacyWitness) -> Result<(&Graph, &Graph), GroupoidError> {
    match (w.source.graph(), w.target.graph()) {
        (Some(e), Some(f)) => Ok((e, f)),
        _ => Err(GroupoidError::NotAnEdgeShift),
    }
}

/// The image of a finite path of length at least one, as the limit of the
/// images of `α e_n x^n` over distinct out-edges `e_n` of `r(α)`.
fn finite_image(w: &ConjugacyWitness, e: &Graph, f: &Graph, alpha: &Path, horizon: u64) -> Result<Path, GroupoidError> {
    let mut images = Vec::new();
    for en in e.out_edges(alpha.range(), horizon)?.edges {
        let r = e.range(&en).expect("listed edge");
        let Some(xn) = e.infinite_path_from(&r, horizon as usize + e.explicit_vertices().count()) else {
            continue;
        };
        let probe = Seq::concat(&alpha.edges().with(en), &xn);
        let image = w.forward.apply(&probe)?;
        images.push(image.prefix(alpha.len()).expect("infinite image"));
    }
    let last = images.last().ok_or_else(|| GroupoidError::NoLimit(alpha.clone()))?;
    if images[images.len() / 2..].iter().any(|x| x != last) {
        return Err(GroupoidError::NoLimit(alpha.clone()));
    }
    Ok(f.path(last)?)
}

/// The boundary map induced by a conjugacy of edge shifts: `φ` on paths of
/// positive length, and `v ↦ r(φ(e))` for an edge `e` entering an infinite
/// emitter `v`. All edges entering `v` within the horizon must agree.
pub fn phi_tilde(w: &ConjugacyWitness, x: &BoundaryPath, horizon: u64) -> Result<BoundaryPath, GroupoidError> {
    let (e, f) = target_graph(w)?;
    if !e.boundary_contains(x) {
        return Err(GroupoidError::NotABoundaryPath(x.clone()));
    }
    match x {
        BoundaryPath::Infinite(s) => Ok(BoundaryPath::Infinite(w.forward.apply(s)?)),
        BoundaryPath::Finite(p) if !p.is_empty() => Ok(BoundaryPath::Finite(finite_image(w, e, f, p, horizon)?)),
        BoundaryPath::Finite(p) => {
            let v = p.source();
            let mut first: Option<(Symbol, Symbol)> = None;
            for edge in e.in_edges(v, horizon)?.edges {
                let img = finite_image(w, e, f, &e.path(&Word::new(vec![edge.clone()]))?, horizon)?;
                let r = img.range().clone();
                match &first {
                    None => first = Some((edge, r)),
                    Some((e0, r0)) if *r0 != r => {
                        return Err(GroupoidError::WellDefinednessViolation(e0.clone(), edge));
                    }
                    _ => {}
                }
            }
            let (_, r) = first.ok_or_else(|| GroupoidError::NoIncomingEdge(v.clone()))?;
            Ok(BoundaryPath::Finite(Path::vertex(r)))
        }
    }
}

/// `(x, k, y) ↦ (φ̃(x), k, φ̃(y))` into the groupoid of the target graph.
pub fn groupoid_map_h(
    w: &ConjugacyWitness,
    target: &Groupoid,
    el: &GroupoidElement,
    horizon: u64,
) -> Result<GroupoidElement, GroupoidError> {
    let x = phi_tilde(w, &el.x(), horizon)?;
    let y = phi_tilde(w, &el.y(), horizon)?;
    target.from_triple(&x, el.k(), &y)
}
