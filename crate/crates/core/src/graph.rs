//! Countable directed graphs, paths, and boundary paths.
//!
//! A [`Graph`] has finitely many explicitly listed vertices and edges plus any
//! number of built-in infinite families attached to explicit root vertices:
//!
//! * `ray` at root `r` with prefix `p`: vertices `p v1, p v2, …` and edges
//!   `p e_n : p v_{n-1} → p v_n`, where `p v0` is `r`. Every vertex of the ray
//!   emits exactly one edge; the graph becomes infinite but stays row-finite.
//! * `fan` at root `r` with prefix `p`: vertices `p w1, p w2, …`, edges
//!   `p h_n : r → p w_n` and return edges `p b_n : p w_n → r`. The root becomes
//!   an infinite emitter and no sink is created.
//!
//! Graph files are line based:
//!
//! ```text
//! graph G1
//! vertex u
//! vertex v
//! edge e u v
//! edge f v u
//! edge g v v
//! # families use the prefix `<root>/`, e.g. w/h1, w/w1, w/b1
//! emitter-infinite w fan
//! ```

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::seq::{Seq, Symbol, Word};
use crate::ParseError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("unknown vertex `{0}`")]
    UnknownVertex(Symbol),
    #[error("unknown edge `{0}`")]
    UnknownEdge(Symbol),
    #[error("duplicate id `{0}`")]
    Duplicate(Symbol),
    #[error("id `{0}` clashes with a generated family name")]
    NameClash(Symbol),
    #[error("vertex `{0}` is a sink")]
    HasSink(Symbol),
    #[error("vertex `{0}` is an infinite emitter; the graph is not row-finite")]
    NotRowFinite(Symbol),
    #[error("graph has infinitely many edges")]
    InfiniteGraph,
    #[error("edges `{0}` and `{1}` are not consecutive")]
    NotAPath(Symbol, Symbol),
    #[error("a path given by edges must have at least one edge")]
    EmptyPath,
    #[error("higher block graphs need N >= 2")]
    BlockLengthTooSmall,
    #[error(transparent)]
    Parse(#[from] ParseError),
}

/// Built-in infinite family shapes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FamilyKind {
    Ray,
    Fan,
}

impl FamilyKind {
    pub fn name(self) -> &'static str {
        match self {
            FamilyKind::Ray => "ray",
            FamilyKind::Fan => "fan",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
struct Family {
    kind: FamilyKind,
    root: Symbol,
    prefix: String,
}

/// A generated name decoded against a family.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Member {
    /// `e_n` of a ray, `h_n` of a fan.
    Forward(u64),
    /// `b_n` of a fan.
    Back(u64),
    /// `v_n` of a ray, `w_n` of a fan.
    Vertex(u64),
}

fn numbered(name: &str, prefix: &str, tag: char) -> Option<u64> {
    let rest = name.strip_prefix(prefix)?.strip_prefix(tag)?;
    if rest.is_empty() || rest.starts_with('0') || !rest.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    rest.parse().ok()
}

impl Family {
    fn sym(&self, tag: char, n: u64) -> Symbol {
        Symbol::named(&format!("{}{tag}{n}", self.prefix)).expect("family names are valid")
    }

    fn tags(&self) -> (char, Option<char>, char) {
        match self.kind {
            FamilyKind::Ray => ('e', None, 'v'),
            FamilyKind::Fan => ('h', Some('b'), 'w'),
        }
    }

    fn decode(&self, s: &Symbol) -> Option<Member> {
        let Symbol::Named(name) = s else { return None };
        let (fwd, back, vert) = self.tags();
        if let Some(n) = numbered(name, &self.prefix, fwd) {
            return Some(Member::Forward(n));
        }
        if let Some(n) = back.and_then(|b| numbered(name, &self.prefix, b)) {
            return Some(Member::Back(n));
        }
        numbered(name, &self.prefix, vert).map(Member::Vertex)
    }

    fn forward(&self, n: u64) -> Symbol {
        self.sym(self.tags().0, n)
    }

    fn back(&self, n: u64) -> Symbol {
        self.sym('b', n)
    }

    fn vertex(&self, n: u64) -> Symbol {
        if n == 0 {
            self.root.clone()
        } else {
            self.sym(self.tags().2, n)
        }
    }

    /// Source and range of a family edge.
    fn ends(&self, m: Member) -> Option<(Symbol, Symbol)> {
        match (self.kind, m) {
            (FamilyKind::Ray, Member::Forward(n)) => Some((self.vertex(n - 1), self.vertex(n))),
            (FamilyKind::Fan, Member::Forward(n)) => Some((self.root.clone(), self.vertex(n))),
            (FamilyKind::Fan, Member::Back(n)) => Some((self.vertex(n), self.root.clone())),
            _ => None,
        }
    }
}

/// How a vertex emits edges.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VertexClass {
    Sink,
    FiniteEmitter(usize),
    InfiniteEmitter,
}

/// Out-edges of a vertex that lie within a horizon.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeList {
    pub edges: Vec<Symbol>,
    /// Some edges were omitted because of the horizon.
    pub partial: bool,
}

/// A finite path; length-zero paths are tagged with their vertex.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Path {
    edges: Word,
    source: Symbol,
    range: Symbol,
}

impl Path {
    pub fn vertex(v: Symbol) -> Path {
        Path {
            source: v.clone(),
            range: v,
            edges: Word::empty(),
        }
    }

    pub fn source(&self) -> &Symbol {
        &self.source
    }

    pub fn range(&self) -> &Symbol {
        &self.range
    }

    pub fn edges(&self) -> &Word {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// `self` followed by `other`, if `other` starts where `self` ends.
    pub fn then(&self, other: &Path) -> Option<Path> {
        (self.range == other.source).then(|| Path {
            edges: self.edges.concat(&other.edges),
            source: self.source.clone(),
            range: other.range.clone(),
        })
    }

    /// The remainder of `self` after `prefix`.
    pub fn strip_prefix(&self, prefix: &Path) -> Option<Path> {
        (self.source == prefix.source && prefix.edges.is_prefix_of(&self.edges)).then(|| Path {
            edges: self.edges.slice(prefix.len(), self.len()),
            source: prefix.range.clone(),
            range: self.range.clone(),
        })
    }

    /// The path after dropping its first `k` edges.
    pub fn drop_first(&self, k: usize, g: &Graph) -> Option<Path> {
        if k > self.len() {
            return None;
        }
        if k == self.len() {
            return Some(Path::vertex(self.range.clone()));
        }
        let source = g.source(&self.edges[k])?;
        Some(Path {
            edges: self.edges.slice(k, self.len()),
            source,
            range: self.range.clone(),
        })
    }

    fn extend(&self, e: Symbol, range: Symbol) -> Path {
        Path {
            source: self.source.clone(),
            range,
            edges: self.edges.with(e),
        }
    }
}

impl fmt::Display for Path {
    /// Edges joined with `.`, or `@v` for the length-zero path at `v`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.edges.is_empty() {
            write!(f, "@{}", self.source)
        } else {
            write!(f, "{}", self.edges)
        }
    }
}

impl fmt::Debug for Path {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Paths enumerated under a horizon.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathSet {
    pub paths: Vec<Path>,
    pub partial: bool,
}

/// A point of the boundary path space.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BoundaryPath {
    Infinite(Seq),
    /// A finite path, possibly of length zero, ending at an infinite emitter.
    Finite(Path),
}

impl fmt::Display for BoundaryPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BoundaryPath::Infinite(x) => write!(f, "{x}"),
            BoundaryPath::Finite(p) => write!(f, "{p}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    name: String,
    vertices: BTreeSet<Symbol>,
    edges: BTreeMap<Symbol, (Symbol, Symbol)>,
    out: BTreeMap<Symbol, Vec<Symbol>>,
    families: Vec<Family>,
}

/// Incremental construction of a [`Graph`].
#[derive(Debug, Clone, Default)]
pub struct GraphBuilder {
    name: String,
    vertices: BTreeSet<Symbol>,
    edges: BTreeMap<Symbol, (Symbol, Symbol)>,
    edge_order: Vec<Symbol>,
    families: Vec<Family>,
}

impl GraphBuilder {
    pub fn new(name: &str) -> Self {
        GraphBuilder {
            name: name.to_string(),
            ..Default::default()
        }
    }

    pub fn vertex(&mut self, v: Symbol) -> Result<&mut Self, GraphError> {
        if !self.vertices.insert(v.clone()) {
            return Err(GraphError::Duplicate(v));
        }
        Ok(self)
    }

    pub fn edge(&mut self, e: Symbol, src: Symbol, dst: Symbol) -> Result<&mut Self, GraphError> {
        for v in [&src, &dst] {
            if !self.vertices.contains(v) {
                return Err(GraphError::UnknownVertex(v.clone()));
            }
        }
        if self.vertices.contains(&e) || self.edges.insert(e.clone(), (src, dst)).is_some() {
            return Err(GraphError::Duplicate(e));
        }
        self.edge_order.push(e);
        Ok(self)
    }

    /// Attaches a family at `root`, naming its members with `prefix`.
    pub fn family(
        &mut self,
        kind: FamilyKind,
        root: Symbol,
        prefix: &str,
    ) -> Result<&mut Self, GraphError> {
        if !self.vertices.contains(&root) {
            return Err(GraphError::UnknownVertex(root));
        }
        self.families.push(Family {
            kind,
            root,
            prefix: prefix.to_string(),
        });
        Ok(self)
    }

    pub fn build(&self) -> Result<Graph, GraphError> {
        for id in self.vertices.iter().chain(self.edges.keys()) {
            if self.families.iter().any(|f| f.decode(id).is_some()) {
                return Err(GraphError::NameClash(id.clone()));
            }
        }
        let mut out: BTreeMap<Symbol, Vec<Symbol>> = BTreeMap::new();
        for e in &self.edge_order {
            out.entry(self.edges[e].0.clone()).or_default().push(e.clone());
        }
        Ok(Graph {
            name: self.name.clone(),
            vertices: self.vertices.clone(),
            edges: self.edges.clone(),
            out,
            families: self.families.clone(),
        })
    }
}

fn sym(s: &str) -> Symbol {
    Symbol::named(s).expect("valid fixture name")
}

impl Graph {
    pub fn name(&self) -> &str {
        &self.name
    }

    /// Builds a finite graph from `(edge, source, range)` triples.
    pub fn from_edges<'a>(
        name: &str,
        vertices: impl IntoIterator<Item = &'a str>,
        edges: impl IntoIterator<Item = (&'a str, &'a str, &'a str)>,
    ) -> Result<Graph, GraphError> {
        let mut b = GraphBuilder::new(name);
        for v in vertices {
            b.vertex(sym(v))?;
        }
        for (e, s, r) in edges {
            b.edge(sym(e), sym(s), sym(r))?;
        }
        b.build()
    }

    /// Two vertices `u, v` with `e: u → v`, `f: v → u`, `g: v → v`.
    pub fn g1() -> Graph {
        Graph::from_edges(
            "G1",
            ["u", "v"],
            [("e", "u", "v"), ("f", "v", "u"), ("g", "v", "v")],
        )
        .expect("fixture")
    }

    /// The one-way infinite path `v0 →e1 v1 →e2 v2 → …`.
    pub fn ray() -> Graph {
        let mut b = GraphBuilder::new("ray");
        b.vertex(sym("v0")).expect("fixture");
        b.family(FamilyKind::Ray, sym("v0"), "").expect("fixture");
        b.build().expect("fixture")
    }

    /// Vertices `u, w` with `m: u → w`, a loop `l` at `u`, and a fan at `w`.
    /// No sinks, no sources, one infinite emitter `w`.
    pub fn fan_fixture() -> Graph {
        let mut b = GraphBuilder::new("H");
        b.vertex(sym("u")).and_then(|b| b.vertex(sym("w"))).expect("fixture");
        b.edge(sym("m"), sym("u"), sym("w")).expect("fixture");
        b.edge(sym("l"), sym("u"), sym("u")).expect("fixture");
        b.family(FamilyKind::Fan, sym("w"), "w/").expect("fixture");
        b.build().expect("fixture")
    }

    /// Whether the graph has finitely many edges.
    pub fn is_finite(&self) -> bool {
        self.families.is_empty()
    }

    pub fn is_row_finite(&self) -> bool {
        self.families.iter().all(|f| f.kind != FamilyKind::Fan)
    }

    /// Explicitly listed vertices.
    pub fn explicit_vertices(&self) -> impl Iterator<Item = &Symbol> {
        self.vertices.iter()
    }

    /// Explicitly listed edges.
    pub fn explicit_edges(&self) -> impl Iterator<Item = &Symbol> {
        self.edges.keys()
    }

    pub fn has_vertex(&self, v: &Symbol) -> bool {
        self.vertices.contains(v)
            || self
                .families
                .iter()
                .any(|f| matches!(f.decode(v), Some(Member::Vertex(_))))
    }

    /// Family index of an edge or vertex (0 for explicit ids).
    fn rank(&self, id: &Symbol) -> u64 {
        self.families
            .iter()
            .find_map(|f| match f.decode(id) {
                Some(Member::Forward(n) | Member::Back(n) | Member::Vertex(n)) => Some(n),
                None => None,
            })
            .unwrap_or(0)
    }

    /// Source and range of an edge.
    pub fn ends(&self, e: &Symbol) -> Option<(Symbol, Symbol)> {
        if let Some(se) = self.edges.get(e) {
            return Some(se.clone());
        }
        self.families
            .iter()
            .find_map(|f| f.decode(e).and_then(|m| f.ends(m)))
    }

    pub fn source(&self, e: &Symbol) -> Option<Symbol> {
        self.ends(e).map(|(s, _)| s)
    }

    pub fn range(&self, e: &Symbol) -> Option<Symbol> {
        self.ends(e).map(|(_, r)| r)
    }

    pub fn is_edge(&self, e: &Symbol) -> bool {
        self.ends(e).is_some()
    }

    /// Out-edges of `v` whose family index is at most `horizon`.
    pub fn out_edges(&self, v: &Symbol, horizon: u64) -> Result<EdgeList, GraphError> {
        if !self.has_vertex(v) {
            return Err(GraphError::UnknownVertex(v.clone()));
        }
        let mut edges = self.out.get(v).cloned().unwrap_or_default();
        let mut partial = false;
        for f in &self.families {
            match (f.kind, f.decode(v)) {
                (FamilyKind::Ray, Some(Member::Vertex(n))) => {
                    if n < horizon {
                        edges.push(f.forward(n + 1));
                    } else {
                        partial = true;
                    }
                }
                (FamilyKind::Fan, Some(Member::Vertex(n))) => edges.push(f.back(n)),
                _ => {}
            }
            if &f.root == v {
                match f.kind {
                    FamilyKind::Ray => {
                        if horizon >= 1 {
                            edges.push(f.forward(1));
                        } else {
                            partial = true;
                        }
                    }
                    FamilyKind::Fan => {
                        edges.extend((1..=horizon).map(|n| f.forward(n)));
                        partial = true;
                    }
                }
            }
        }
        Ok(EdgeList { edges, partial })
    }

    /// Edges whose range is `v`, within the horizon.
    pub fn in_edges(&self, v: &Symbol, horizon: u64) -> Result<EdgeList, GraphError> {
        if !self.has_vertex(v) {
            return Err(GraphError::UnknownVertex(v.clone()));
        }
        let mut edges: Vec<Symbol> = self
            .edges
            .iter()
            .filter(|(_, (_, r))| r == v)
            .map(|(e, _)| e.clone())
            .collect();
        let mut partial = false;
        for f in &self.families {
            if let Some(Member::Vertex(n)) = f.decode(v) {
                if n <= horizon {
                    edges.push(f.forward(n));
                } else {
                    partial = true;
                }
            }
            if &f.root == v && f.kind == FamilyKind::Fan {
                edges.extend((1..=horizon).map(|n| f.back(n)));
                partial = true;
            }
        }
        Ok(EdgeList { edges, partial })
    }

    pub fn classify_vertex(&self, v: &Symbol, probe_bound: u64) -> Result<VertexClass, GraphError> {
        let list = self.out_edges(v, probe_bound.max(1))?;
        debug_assert!(list
            .edges
            .iter()
            .all(|e| self.source(e).as_ref() == Some(v)));
        let infinite = self
            .families
            .iter()
            .any(|f| f.kind == FamilyKind::Fan && &f.root == v);
        Ok(if infinite {
            VertexClass::InfiniteEmitter
        } else {
            // ray vertices always emit exactly one generated edge
            let generated = self
                .families
                .iter()
                .filter(|f| {
                    f.kind == FamilyKind::Ray
                        && (&f.root == v || matches!(f.decode(v), Some(Member::Vertex(_))))
                })
                .count();
            let fan_back = self
                .families
                .iter()
                .filter(|f| f.kind == FamilyKind::Fan && matches!(f.decode(v), Some(Member::Vertex(_))))
                .count();
            match self.out.get(v).map_or(0, Vec::len) + generated + fan_back {
                0 => VertexClass::Sink,
                n => VertexClass::FiniteEmitter(n),
            }
        })
    }

    pub fn is_infinite_emitter(&self, v: &Symbol) -> bool {
        matches!(self.classify_vertex(v, 1), Ok(VertexClass::InfiniteEmitter))
    }

    /// Explicit vertices that are sinks. Generated vertices never are.
    pub fn sinks(&self) -> Vec<Symbol> {
        self.vertices
            .iter()
            .filter(|v| matches!(self.classify_vertex(v, 1), Ok(VertexClass::Sink)))
            .cloned()
            .collect()
    }

    pub fn check_no_sinks(&self) -> Result<(), GraphError> {
        match self.sinks().into_iter().next() {
            Some(v) => Err(GraphError::HasSink(v)),
            None => Ok(()),
        }
    }

    /// Vertices with family index at most `horizon`.
    pub fn vertices_upto(&self, horizon: u64) -> (Vec<Symbol>, bool) {
        let mut vs: Vec<Symbol> = self.vertices.iter().cloned().collect();
        for f in &self.families {
            vs.extend((1..=horizon).map(|n| f.vertex(n)));
        }
        (vs, !self.families.is_empty())
    }

    /// Edges with family index at most `horizon`.
    pub fn edges_upto(&self, horizon: u64) -> (Vec<Symbol>, bool) {
        let mut es: Vec<Symbol> = self.edges.keys().cloned().collect();
        for f in &self.families {
            es.extend((1..=horizon).map(|n| f.forward(n)));
            if f.kind == FamilyKind::Fan {
                es.extend((1..=horizon).map(|n| f.back(n)));
            }
        }
        (es, !self.families.is_empty())
    }

    /// Validates a sequence of edges as a path.
    pub fn path(&self, edges: &Word) -> Result<Path, GraphError> {
        let mut iter = edges.iter();
        let Some(first) = iter.next() else {
            return Err(GraphError::EmptyPath);
        };
        let (s, mut r) = self
            .ends(first)
            .ok_or_else(|| GraphError::UnknownEdge(first.clone()))?;
        let mut prev = first;
        for e in iter {
            let (s2, r2) = self
                .ends(e)
                .ok_or_else(|| GraphError::UnknownEdge(e.clone()))?;
            if s2 != r {
                return Err(GraphError::NotAPath(prev.clone(), e.clone()));
            }
            r = r2;
            prev = e;
        }
        Ok(Path {
            source: s,
            range: r,
            edges: edges.clone(),
        })
    }

    /// Parses `e.f.g` as a path, or `@v` as the length-zero path at `v`.
    pub fn parse_path(&self, text: &str) -> Result<Path, GraphError> {
        let text = text.trim();
        if let Some(v) = text.strip_prefix('@') {
            let v = Symbol::named(v).map_err(|e| ParseError::new(0, e.to_string()))?;
            if !self.has_vertex(&v) {
                return Err(GraphError::UnknownVertex(v));
            }
            return Ok(Path::vertex(v));
        }
        let w: Word = text.parse().map_err(|e: crate::seq::SeqError| ParseError::new(0, e.to_string()))?;
        self.path(&w)
    }

    /// All paths of length `n` starting at `v`, using edges within the
    /// horizon.
    pub fn enumerate_paths(&self, v: &Symbol, n: usize, horizon: u64) -> Result<PathSet, GraphError> {
        let mut frontier = vec![Path::vertex(v.clone())];
        if !self.has_vertex(v) {
            return Err(GraphError::UnknownVertex(v.clone()));
        }
        let mut partial = false;
        for _ in 0..n {
            let mut next = Vec::new();
            for p in &frontier {
                let out = self.out_edges(p.range(), horizon)?;
                partial |= out.partial;
                for e in out.edges {
                    if self.rank(&e) > horizon {
                        partial = true;
                        continue;
                    }
                    let r = self.range(&e).expect("listed edges exist");
                    next.push(p.extend(e, r));
                }
            }
            frontier = next;
        }
        frontier.sort();
        Ok(PathSet {
            paths: frontier,
            partial,
        })
    }

    /// All paths of length `n >= 1` within the horizon, from every vertex.
    pub fn all_paths(&self, n: usize, horizon: u64) -> PathSet {
        let (vs, mut partial) = self.vertices_upto(horizon);
        let mut paths = Vec::new();
        for v in vs {
            let set = self.enumerate_paths(&v, n, horizon).expect("listed vertex");
            partial |= set.partial;
            paths.extend(set.paths);
        }
        paths.sort();
        paths.dedup();
        PathSet { paths, partial }
    }

    /// Whether `x` is an infinite path.
    pub fn is_infinite_path(&self, x: &Seq) -> bool {
        if !x.is_infinite() {
            return false;
        }
        // the window over pre·per plus one more entry covers the wrap-around
        let n = x.transient_len() + 1;
        x.prefix(n).is_some_and(|w| self.path(&w).is_ok())
    }

    /// Membership in the edge shift: infinite paths; when there are infinitely
    /// many edges also `0⃗` and nonempty finite paths ending at infinite
    /// emitters.
    pub fn edge_shift_contains(&self, x: &Seq) -> bool {
        match x.as_finite() {
            None => self.is_infinite_path(x),
            Some(w) if w.is_empty() => !self.is_finite(),
            Some(w) => self
                .path(w)
                .is_ok_and(|p| self.is_infinite_emitter(p.range())),
        }
    }

    pub fn boundary_contains(&self, x: &BoundaryPath) -> bool {
        match x {
            BoundaryPath::Infinite(s) => self.is_infinite_path(s),
            BoundaryPath::Finite(p) => {
                let valid = if p.is_empty() {
                    self.has_vertex(p.source())
                } else {
                    self.path(p.edges()).is_ok_and(|q| q == *p)
                };
                valid && self.is_infinite_emitter(p.range())
            }
        }
    }

    /// An eventually periodic infinite path starting at `v`, found by always
    /// following the first out-edge; `None` if no vertex repeats within
    /// `max_steps`.
    pub fn infinite_path_from(&self, v: &Symbol, max_steps: usize) -> Option<Seq> {
        let mut seen: BTreeMap<Symbol, usize> = BTreeMap::new();
        let mut edges = Vec::new();
        let mut at = v.clone();
        for step in 0..=max_steps {
            if let Some(&i) = seen.get(&at) {
                let pre = Word::new(edges[..i].to_vec());
                let per = Word::new(edges[i..].to_vec());
                return Seq::periodic(pre, per).ok();
            }
            seen.insert(at.clone(), step);
            let e = self.out_edges(&at, 1).ok()?.edges.into_iter().next()?;
            at = self.range(&e)?;
            edges.push(e);
        }
        None
    }

    /// The higher block graph: vertices are paths of length `n − 1`, edges are
    /// paths of length `n`, with source and range the first and last `n − 1`
    /// edges. Path symbols are block letters.
    pub fn higher_block_graph(&self, n: usize) -> Result<Graph, GraphError> {
        if n < 2 {
            return Err(GraphError::BlockLengthTooSmall);
        }
        if let Some(f) = self.families.iter().find(|f| f.kind == FamilyKind::Fan) {
            return Err(GraphError::NotRowFinite(f.root.clone()));
        }
        if !self.is_finite() {
            return Err(GraphError::InfiniteGraph);
        }
        let mut b = GraphBuilder::new(&format!("{}^[{n}]", self.name));
        for p in self.all_paths(n - 1, 0).paths {
            b.vertex(Symbol::block(p.edges().symbols()))?;
        }
        for p in self.all_paths(n, 0).paths {
            let e = p.edges().symbols();
            b.edge(
                Symbol::block(e),
                Symbol::block(&e[..n - 1]),
                Symbol::block(&e[1..]),
            )?;
        }
        b.build()
    }

    /// Graph with one vertex per symbol and an edge `<a,b>: a → b` for every
    /// allowed pair.
    pub fn from_allowed_pairs(
        name: &str,
        symbols: &[Symbol],
        allowed: impl Fn(&Symbol, &Symbol) -> bool,
    ) -> Graph {
        let mut b = GraphBuilder::new(name);
        for s in symbols {
            b.vertex(s.clone()).expect("distinct symbols");
        }
        for a in symbols {
            for c in symbols {
                if allowed(a, c) {
                    b.edge(Symbol::block(&[a.clone(), c.clone()]), a.clone(), c.clone())
                        .expect("fresh edge");
                }
            }
        }
        b.build().expect("block letters never clash")
    }

    /// Removes sinks repeatedly until none remain.
    pub fn trim_sinks(&self) -> Graph {
        let mut g = self.clone();
        loop {
            let sinks: BTreeSet<Symbol> = g.sinks().into_iter().collect();
            if sinks.is_empty() {
                return g;
            }
            g.vertices.retain(|v| !sinks.contains(v));
            g.edges.retain(|_, (_, r)| !sinks.contains(r));
            g.families.retain(|f| !sinks.contains(&f.root));
            g.out.retain(|v, _| !sinks.contains(v));
            for list in g.out.values_mut() {
                list.retain(|e| g.edges.contains_key(e));
            }
        }
    }

    /// Serializes in the graph file format.
    pub fn to_text(&self) -> String {
        let mut s = format!("graph {}\n", self.name.replace(char::is_whitespace, "_"));
        for v in &self.vertices {
            s += &format!("vertex {v}\n");
        }
        for (v, list) in &self.out {
            for e in list {
                s += &format!("edge {e} {v} {}\n", self.edges[e].1);
            }
        }
        for f in &self.families {
            if f.prefix == format!("{}/", f.root) {
                s += &format!("emitter-infinite {} {}\n", f.root, f.kind.name());
            }
        }
        s
    }

    /// Parses the graph file format.
    pub fn parse(text: &str) -> Result<Graph, GraphError> {
        let mut builder: Option<GraphBuilder> = None;
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let err = |message: String| GraphError::Parse(ParseError::new(line_no, message));
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let toks: Vec<&str> = line.split_whitespace().collect();
            let symbol = |t: &str| Symbol::named(t).map_err(|e| err(e.to_string()));
            match (toks[0], builder.as_mut()) {
                ("graph", None) if toks.len() == 2 => builder = Some(GraphBuilder::new(toks[1])),
                ("graph", _) => return Err(err("expected `graph <name>` once".into())),
                (_, None) => return Err(err("file must start with `graph <name>`".into())),
                ("vertex", Some(b)) if toks.len() == 2 => {
                    b.vertex(symbol(toks[1])?).map_err(|e| err(e.to_string()))?;
                }
                ("edge", Some(b)) if toks.len() == 4 => {
                    b.edge(symbol(toks[1])?, symbol(toks[2])?, symbol(toks[3])?)
                        .map_err(|e| err(e.to_string()))?;
                }
                ("emitter-infinite", Some(b)) if toks.len() == 3 => {
                    let kind = match toks[2] {
                        "ray" => FamilyKind::Ray,
                        "fan" => FamilyKind::Fan,
                        other => return Err(err(format!("unknown family `{other}`"))),
                    };
                    b.family(kind, symbol(toks[1])?, &format!("{}/", toks[1]))
                        .map_err(|e| err(e.to_string()))?;
                }
                (kw, Some(_)) => return Err(err(format!("malformed `{kw}` line"))),
            }
        }
        builder
            .ok_or_else(|| GraphError::Parse(ParseError::new(0, "empty graph file".into())))?
            .build()
    }
}

impl fmt::Display for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(x: &str) -> Symbol {
        Symbol::named(x).unwrap()
    }

    fn words(paths: &[Path]) -> Vec<String> {
        paths.iter().map(ToString::to_string).collect()
    }

    #[test]
    fn classify_examples() {
        let ray = Graph::ray();
        assert_eq!(ray.classify_vertex(&s("v3"), 4).unwrap(), VertexClass::FiniteEmitter(1));
        assert_eq!(ray.classify_vertex(&s("v0"), 4).unwrap(), VertexClass::FiniteEmitter(1));
        let sink = Graph::from_edges("s", ["x", "y"], [("e", "x", "y")]).unwrap();
        assert_eq!(sink.classify_vertex(&s("y"), 4).unwrap(), VertexClass::Sink);
        let h = Graph::fan_fixture();
        assert_eq!(h.classify_vertex(&s("w"), 4).unwrap(), VertexClass::InfiniteEmitter);
        assert_eq!(h.classify_vertex(&s("w/w7"), 4).unwrap(), VertexClass::FiniteEmitter(1));
        assert!(matches!(
            h.classify_vertex(&s("zz"), 4),
            Err(GraphError::UnknownVertex(_))
        ));
    }

    #[test]
    fn path_examples() {
        let g = Graph::g1();
        assert_eq!(words(&g.enumerate_paths(&s("u"), 2, 8).unwrap().paths), ["e.f", "e.g"]);
        assert_eq!(words(&g.enumerate_paths(&s("v"), 0, 8).unwrap().paths), ["@v"]);
        assert_eq!(
            words(&g.enumerate_paths(&s("v"), 2, 8).unwrap().paths),
            ["f.e", "g.f", "g.g"]
        );
    }

    #[test]
    fn edge_shift_examples() {
        let g = Graph::g1();
        assert!(g.edge_shift_contains(&"(e.f)".parse().unwrap()));
        assert!(!g.edge_shift_contains(&Seq::empty()));
        let ray = Graph::ray();
        assert!(ray.edge_shift_contains(&Seq::empty()));
        assert!(!ray.edge_shift_contains(&"e3".parse().unwrap()));
        assert!(!ray.edge_shift_contains(&"(e3)".parse().unwrap()));
        let h = Graph::fan_fixture();
        assert!(h.edge_shift_contains(&"l.m".parse().unwrap()));
        assert!(h.edge_shift_contains(&"m.w/h4.w/b4".parse().unwrap()));
        assert!(!h.edge_shift_contains(&"l".parse().unwrap()));
        assert!(h.edge_shift_contains(&"m|(w/h2.w/b2)".parse().unwrap()));
    }

    #[test]
    fn higher_block_examples() {
        let g = Graph::g1();
        let g2 = g.higher_block_graph(2).unwrap();
        let vs: Vec<String> = g2.explicit_vertices().map(ToString::to_string).collect();
        assert_eq!(vs, ["e", "f", "g"]);
        let es: BTreeSet<String> = g2.explicit_edges().map(ToString::to_string).collect();
        let want: BTreeSet<String> =
            ["<e,f>", "<e,g>", "<f,e>", "<g,f>", "<g,g>"].map(String::from).into();
        assert_eq!(es, want);
        assert_eq!(g2.range(&"<e,f>".parse().unwrap()), Some(s("f")));
        let loop_graph = Graph::from_edges("loop", ["x"], [("l", "x", "x")]).unwrap();
        let lg = loop_graph.higher_block_graph(2).unwrap();
        assert_eq!(lg.explicit_edges().count(), 1);
        assert_eq!(g.higher_block_graph(3).unwrap().explicit_edges().count(), 8);
        assert!(matches!(
            Graph::fan_fixture().higher_block_graph(2),
            Err(GraphError::NotRowFinite(_))
        ));
    }

    #[test]
    fn boundary_examples() {
        let g = Graph::g1();
        assert!(g.boundary_contains(&BoundaryPath::Infinite("(e.f)".parse().unwrap())));
        assert!(!g.boundary_contains(&BoundaryPath::Finite(Path::vertex(s("u")))));
        let h = Graph::fan_fixture();
        assert!(h.boundary_contains(&BoundaryPath::Finite(Path::vertex(s("w")))));
    }

    #[test]
    fn parse_round_trip_and_errors() {
        let text = "graph H\nvertex u\nvertex w\nedge m u w\nedge l u u\nemitter-infinite w fan\n";
        let h = Graph::parse(text).unwrap();
        assert_eq!(h, Graph::fan_fixture());
        assert_eq!(Graph::parse(&h.to_text()).unwrap(), h);
        let bad = "graph X\nvertex u\nedge e u q\n";
        match Graph::parse(bad) {
            Err(GraphError::Parse(p)) => assert_eq!(p.line, 3),
            other => panic!("{other:?}"),
        }
        assert!(Graph::parse("vertex u\n").is_err());
    }

    #[test]
    fn infinite_path_search() {
        let g = Graph::g1();
        let x = g.infinite_path_from(&s("u"), 10).unwrap();
        assert!(g.is_infinite_path(&x));
        assert!(x.starts_with(&"e".parse().unwrap()));
        assert!(Graph::ray().infinite_path_from(&s("v0"), 20).is_none());
    }

    #[test]
    fn trim_removes_cascading_sinks() {
        let g = Graph::from_edges(
            "t",
            ["x", "y", "z"],
            [("a", "x", "x"), ("b", "x", "y"), ("c", "y", "z")],
        )
        .unwrap();
        let t = g.trim_sinks();
        assert_eq!(t.explicit_vertices().count(), 1);
        assert_eq!(t.explicit_edges().count(), 1);
    }
}
