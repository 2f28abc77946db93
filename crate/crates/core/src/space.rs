//! Shift space presentations, membership and block languages.
//!
//! Presentation files:
//!
//! ```text
//! shift forbidden infinite      # or finite:3 (a1..a3) or finite:e,f,g
//! block a1.a1
//! block a2.a3.a2
//! ```
//!
//! or a single line `shift edges <graph-file>` or `shift builtin <name>` with
//! `<name>` one of `ray`, `first_or_equal`, `full`. The older names
//! `ex5_17_ray` and `ex5_18_pairs` are accepted too.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::graph::{Graph, GraphError};
use crate::seq::{Seq, Symbol, Word};
use crate::ParseError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpaceError {
    #[error("the empty word cannot be forbidden")]
    EmptyForbiddenBlock,
    #[error("symbol `{0}` is not in the alphabet")]
    OutsideAlphabet(Symbol),
    #[error("`{0}` is not a member of the shift")]
    NotAMember(Seq),
    #[error("block `{0}` is longer than M+1")]
    BlockTooLong(Word),
    #[error("unknown builtin presentation `{0}`")]
    UnknownBuiltin(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Parse(#[from] ParseError),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Alphabet {
    Finite(Vec<Symbol>),
    /// The countably infinite alphabet of all symbols.
    Infinite,
}

impl Alphabet {
    /// `a1..an`.
    pub fn indexed(n: u32) -> Alphabet {
        Alphabet::Finite((1..=n).map(Symbol::a).collect())
    }

    pub fn contains(&self, s: &Symbol) -> bool {
        match self {
            Alphabet::Finite(v) => v.contains(s),
            Alphabet::Infinite => true,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Alphabet::Finite(_))
    }
}

impl fmt::Display for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Alphabet::Infinite => f.write_str("infinite"),
            Alphabet::Finite(v) => {
                let indexed = v.iter().enumerate().all(|(i, s)| s.index() == Some(i as u32 + 1));
                if indexed {
                    write!(f, "finite:{}", v.len())
                } else {
                    let names: Vec<String> = v.iter().map(ToString::to_string).collect();
                    write!(f, "finite:{}", names.join(","))
                }
            }
        }
    }
}

/// A description of a shift space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ShiftPresentation {
    Full(Alphabet),
    /// Sequences over the alphabet avoiding every block.
    Forbidden {
        blocks: BTreeSet<Word>,
        alphabet: Alphabet,
    },
    /// Sequences over `a1, a2, …` in which every adjacent pair `a_i a_j`
    /// has `i = 1` or `i = j`. Its forbidden set is infinite.
    FirstOrEqualPairs,
    /// The edge shift of a graph without sinks.
    Edges(Arc<Graph>),
}

/// Answer of a membership query.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Membership {
    Yes,
    No,
    /// Accepted within a horizon only. The built-in presentations are all
    /// decided exactly, so this is never returned by them.
    PartialYes,
}

/// `B_n(X)`, possibly restricted to a horizon.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockLanguage {
    pub n: usize,
    pub words: BTreeSet<Word>,
    /// Computed under a symbol or graph horizon.
    pub partial: bool,
}

/// Result of an infinite-extension check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Extension {
    /// At least `demand` symbols `a` with some `x·a·y` in the shift; each is
    /// listed with a witness continuation.
    Holds(Vec<(Symbol, Seq)>),
    /// Fewer than `demand` witnesses were found within the horizon.
    PartialHolds(Vec<(Symbol, Seq)>),
    /// The set of extension symbols is finite and is exactly this set.
    FailsWithWitness(BTreeSet<Symbol>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Classification {
    FiniteSymbol,
    RowFiniteInfinite,
    NotRowFinite,
    Unknown,
}

fn first_or_equal(a: &Symbol, b: &Symbol) -> bool {
    match (a.index(), b.index()) {
        (Some(i), Some(j)) => i == 1 || i == j,
        _ => false,
    }
}

fn all_words(symbols: &[Symbol], n: usize) -> Vec<Word> {
    let mut words = vec![Word::empty()];
    for _ in 0..n {
        words = words
            .iter()
            .flat_map(|w| symbols.iter().map(move |s| w.with(s.clone())))
            .collect();
    }
    words
}

/// Whether some block of `blocks` ends at the last position of `w`.
fn forbidden_suffix(w: &[Symbol], blocks: &BTreeSet<Word>, max_len: usize) -> bool {
    (1..=max_len.min(w.len())).any(|l| blocks.contains(&Word::new(w[w.len() - l..].to_vec())))
}

fn avoids(w: &Word, blocks: &BTreeSet<Word>) -> bool {
    let max_len = blocks.iter().map(Word::len).max().unwrap_or(0);
    (1..=w.len()).all(|end| !forbidden_suffix(&w.symbols()[..end], blocks, max_len))
}

/// The words of length `k = max block length − 1` from which an infinite
/// sequence avoiding the blocks continues, over a finite alphabet.
struct LiveStates {
    k: usize,
    live: BTreeSet<Word>,
}

impl LiveStates {
    fn new(symbols: &[Symbol], blocks: &BTreeSet<Word>) -> Self {
        let max_len = blocks.iter().map(Word::len).max().unwrap_or(1);
        let k = max_len - 1;
        let mut live: BTreeSet<Word> = all_words(symbols, k)
            .into_iter()
            .filter(|w| avoids(w, blocks))
            .collect();
        let mut succ: BTreeMap<Word, Vec<Word>> = BTreeMap::new();
        for u in &live {
            let next = symbols
                .iter()
                .map(|a| u.with(a.clone()))
                .filter(|ua| !forbidden_suffix(ua.symbols(), blocks, max_len))
                .map(|ua| ua.slice(ua.len() - k, ua.len()))
                .collect();
            succ.insert(u.clone(), next);
        }
        loop {
            let dead: Vec<Word> = live
                .iter()
                .filter(|u| !succ[*u].iter().any(|v| live.contains(v)))
                .cloned()
                .collect();
            if dead.is_empty() {
                break;
            }
            for d in dead {
                live.remove(&d);
            }
        }
        LiveStates { k, live }
    }

    /// Whether an admissible `w` continues to an infinite admissible sequence.
    fn extends(&self, w: &Word) -> bool {
        if w.len() >= self.k {
            return self.live.contains(&w.slice(w.len() - self.k, w.len()));
        }
        self.live.iter().any(|u| w.is_prefix_of(u))
    }
}

impl ShiftPresentation {
    /// Forbidden-block presentation; rejects the empty block and, over a
    /// finite alphabet, symbols outside it.
    pub fn forbidden(
        blocks: impl IntoIterator<Item = Word>,
        alphabet: Alphabet,
    ) -> Result<ShiftPresentation, SpaceError> {
        let blocks: BTreeSet<Word> = blocks.into_iter().collect();
        for b in &blocks {
            if b.is_empty() {
                return Err(SpaceError::EmptyForbiddenBlock);
            }
            if let Some(s) = b.iter().find(|s| !alphabet.contains(s)) {
                return Err(SpaceError::OutsideAlphabet(s.clone()));
            }
        }
        Ok(ShiftPresentation::Forbidden { blocks, alphabet })
    }

    /// The edge shift of `g`, which must have no sinks.
    pub fn edge_shift(g: Graph) -> Result<ShiftPresentation, SpaceError> {
        g.check_no_sinks()?;
        Ok(ShiftPresentation::Edges(Arc::new(g)))
    }

    pub fn builtin(name: &str) -> Result<ShiftPresentation, SpaceError> {
        match name {
            "ray" | "ex5_17_ray" => ShiftPresentation::edge_shift(Graph::ray()),
            "first_or_equal" | "ex5_18_pairs" => Ok(ShiftPresentation::FirstOrEqualPairs),
            "full" => Ok(ShiftPresentation::Full(Alphabet::Infinite)),
            other => Err(SpaceError::UnknownBuiltin(other.to_string())),
        }
    }

    pub fn graph(&self) -> Option<&Graph> {
        match self {
            ShiftPresentation::Edges(g) => Some(g),
            _ => None,
        }
    }

    fn blocks(&self) -> Option<(&BTreeSet<Word>, &Alphabet)> {
        static EMPTY: BTreeSet<Word> = BTreeSet::new();
        match self {
            ShiftPresentation::Full(a) => Some((&EMPTY, a)),
            ShiftPresentation::Forbidden { blocks, alphabet } => Some((blocks, alphabet)),
            _ => None,
        }
    }

    /// Whether only finitely many symbols can occur at the given horizon, so
    /// that horizon-restricted answers are exact.
    pub fn finitely_supported(&self) -> bool {
        match self {
            ShiftPresentation::Edges(g) => g.is_finite(),
            ShiftPresentation::FirstOrEqualPairs => false,
            _ => self.blocks().is_some_and(|(_, a)| a.is_finite()),
        }
    }

    /// The symbols considered at a horizon: the whole alphabet when finite,
    /// otherwise `a1..a_horizon` together with any symbol named by the
    /// presentation.
    pub fn horizon_alphabet(&self, horizon: u64) -> Vec<Symbol> {
        let indexed = || (1..=horizon as u32).map(Symbol::a);
        match self {
            ShiftPresentation::Edges(g) => g.edges_upto(horizon).0,
            ShiftPresentation::FirstOrEqualPairs => indexed().collect(),
            _ => {
                let (blocks, alphabet) = self.blocks().expect("block presentation");
                match alphabet {
                    Alphabet::Finite(v) => v.clone(),
                    Alphabet::Infinite => {
                        let mut set: BTreeSet<Symbol> = indexed().collect();
                        set.extend(blocks.iter().flat_map(|b| b.iter().cloned()));
                        set.into_iter().collect()
                    }
                }
            }
        }
    }

    /// Whether the word occurs in no forbidden pattern, ignoring extension.
    fn admissible(&self, w: &Word) -> bool {
        match self {
            ShiftPresentation::Edges(g) => w.is_empty() || g.path(w).is_ok(),
            ShiftPresentation::FirstOrEqualPairs => {
                w.iter().all(|s| s.index().is_some())
                    && w.symbols().windows(2).all(|p| first_or_equal(&p[0], &p[1]))
            }
            _ => {
                let (blocks, alphabet) = self.blocks().expect("block presentation");
                w.iter().all(|s| alphabet.contains(s)) && avoids(w, blocks)
            }
        }
    }

    pub fn contains(&self, x: &Seq) -> Membership {
        let yes = |b: bool| if b { Membership::Yes } else { Membership::No };
        if let ShiftPresentation::Edges(g) = self {
            return yes(g.edge_shift_contains(x));
        }
        match x.as_finite() {
            None => {
                let window = x.prefix(x.transient_len() + self.max_pattern_len()).expect("infinite");
                yes(self.admissible(&window))
            }
            Some(w) if w.is_empty() => yes(!self.finitely_supported()),
            Some(w) => match self {
                ShiftPresentation::FirstOrEqualPairs => {
                    yes(self.admissible(w) && w.last() == Some(&Symbol::a(1)))
                }
                // over a finite alphabet there is no finite member; over an
                // infinite one any symbol outside the finite F repeats forever
                _ => yes(!self.finitely_supported() && self.admissible(w)),
            },
        }
    }

    fn max_pattern_len(&self) -> usize {
        match self {
            ShiftPresentation::FirstOrEqualPairs | ShiftPresentation::Edges(_) => 2,
            _ => self
                .blocks()
                .and_then(|(b, _)| b.iter().map(Word::len).max())
                .unwrap_or(1),
        }
    }

    /// `B_n(X)` over the horizon alphabet.
    pub fn block_language(&self, n: usize, horizon: u64) -> BlockLanguage {
        if n == 0 {
            return BlockLanguage {
                n,
                words: [Word::empty()].into(),
                partial: false,
            };
        }
        if let ShiftPresentation::Edges(g) = self {
            let set = g.all_paths(n, horizon);
            return BlockLanguage {
                n,
                words: set.paths.into_iter().map(|p| p.edges().clone()).collect(),
                partial: set.partial,
            };
        }
        let symbols = self.horizon_alphabet(horizon);
        let mut words: Vec<Word> = vec![Word::empty()];
        for _ in 0..n {
            words = words
                .iter()
                .flat_map(|w| symbols.iter().map(move |s| w.with(s.clone())))
                .filter(|w| self.admissible(w))
                .collect();
        }
        let words: BTreeSet<Word> = match self.blocks() {
            Some((blocks, Alphabet::Finite(alpha))) => {
                let live = LiveStates::new(alpha, blocks);
                words
                    .into_iter()
                    .filter(|w| live.extends(w))
                    .collect()
            }
            // every admissible word continues with a symbol repeated forever
            _ => words.into_iter().collect(),
        };
        BlockLanguage {
            n,
            words,
            partial: !self.finitely_supported(),
        }
    }

    /// Looks for `demand` symbols `a` such that `x·a·y` lies in the shift for
    /// some `y`.
    pub fn check_infinite_extension(
        &self,
        x: &Word,
        demand: usize,
        horizon: u64,
    ) -> Result<Extension, SpaceError> {
        let as_seq = Seq::finite(x.clone());
        if self.contains(&as_seq) == Membership::No {
            return Err(SpaceError::NotAMember(as_seq));
        }
        let mut found = Vec::new();
        match self {
            ShiftPresentation::Edges(g) => {
                let candidates = match x.is_empty() {
                    true => g.edges_upto(horizon.max(demand as u64)).0,
                    false => {
                        let v = g.path(x)?.range().clone();
                        g.out_edges(&v, horizon.max(demand as u64))?.edges
                    }
                };
                for e in candidates {
                    let r = g.range(&e).expect("listed edge");
                    let tail = match g.infinite_path_from(&r, 64) {
                        Some(t) => t,
                        None if g.is_infinite_emitter(&r) => Seq::empty(),
                        None => continue,
                    };
                    found.push((e, tail));
                    if found.len() == demand {
                        break;
                    }
                }
            }
            _ => {
                // symbols outside every forbidden pattern can repeat forever
                let mut k = 1u32;
                let used: BTreeSet<Symbol> = self
                    .blocks()
                    .map(|(b, _)| b.iter().flat_map(|w| w.iter().cloned()).collect())
                    .unwrap_or_default();
                while found.len() < demand {
                    let a = Symbol::a(k);
                    k += 1;
                    if used.contains(&a) {
                        continue;
                    }
                    let tail = Seq::cycle(Word::new(vec![a.clone()])).expect("nonempty");
                    if self.contains(&Seq::concat(&x.with(a.clone()), &tail)) == Membership::Yes {
                        found.push((a, tail));
                    }
                }
            }
        }
        Ok(if found.len() >= demand {
            Extension::Holds(found)
        } else {
            Extension::PartialHolds(found)
        })
    }

    pub fn classify(&self, _horizon: u64) -> Classification {
        match self {
            ShiftPresentation::Edges(g) if g.is_finite() => Classification::FiniteSymbol,
            ShiftPresentation::Edges(g) if g.is_row_finite() => Classification::RowFiniteInfinite,
            ShiftPresentation::Edges(_) => Classification::NotRowFinite,
            // a1 is followed by every symbol
            ShiftPresentation::FirstOrEqualPairs => Classification::NotRowFinite,
            _ if self.finitely_supported() => Classification::FiniteSymbol,
            // a finite F over an infinite alphabet is never row-finite
            _ => Classification::NotRowFinite,
        }
    }

    /// All words of length `1..=max_len` over the horizon alphabet that are
    /// not blocks of the shift.
    pub fn canonical_forbidden_set(&self, max_len: usize, horizon: u64) -> BTreeSet<Word> {
        let symbols = self.horizon_alphabet(horizon);
        let mut out = BTreeSet::new();
        for n in 1..=max_len {
            let language = self.block_language(n, horizon).words;
            out.extend(
                all_words(&symbols, n)
                    .into_iter()
                    .filter(|w| !language.contains(w)),
            );
        }
        out
    }

    /// A forbidden-block presentation from a canonical forbidden set, over
    /// this presentation's alphabet when that is finite.
    pub fn rebuild(&self, forbidden: BTreeSet<Word>, horizon: u64) -> ShiftPresentation {
        let alphabet = if self.finitely_supported() {
            Alphabet::Finite(self.horizon_alphabet(horizon))
        } else {
            Alphabet::Infinite
        };
        ShiftPresentation::Forbidden {
            blocks: forbidden,
            alphabet,
        }
    }

    /// Parses a presentation file. `load_graph` resolves the path given on a
    /// `shift edges` line to the graph file's text.
    pub fn parse(
        text: &str,
        load_graph: impl Fn(&str) -> std::io::Result<String>,
    ) -> Result<ShiftPresentation, SpaceError> {
        let mut header: Option<(usize, Vec<String>)> = None;
        let mut blocks = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let err = |m: String| SpaceError::Parse(ParseError::new(line_no, m));
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let toks: Vec<&str> = line.split_whitespace().collect();
            match (toks[0], &header) {
                ("shift", None) => header = Some((line_no, toks[1..].iter().map(|s| s.to_string()).collect())),
                ("shift", Some(_)) => return Err(err("duplicate `shift` line".into())),
                (_, None) => return Err(err("file must start with a `shift` line".into())),
                ("block", Some(_)) if toks.len() == 2 => {
                    blocks.push((line_no, toks[1].parse::<Word>().map_err(|e| err(e.to_string()))?))
                }
                (kw, Some(_)) => return Err(err(format!("unexpected `{kw}` line"))),
            }
        }
        let (line_no, head) =
            header.ok_or_else(|| SpaceError::Parse(ParseError::new(0, "empty presentation".into())))?;
        let err = |m: String| SpaceError::Parse(ParseError::new(line_no, m));
        let head: Vec<&str> = head.iter().map(String::as_str).collect();
        if !matches!(head.first(), Some(&"forbidden")) {
            if let Some((l, _)) = blocks.first() {
                return Err(SpaceError::Parse(ParseError::new(*l, "`block` lines need `shift forbidden`".into())));
            }
        }
        match head.as_slice() {
            ["forbidden", alphabet] => {
                let alphabet = parse_alphabet(alphabet).map_err(err)?;
                for (l, b) in &blocks {
                    if b.is_empty() {
                        return Err(SpaceError::Parse(ParseError::new(*l, "empty block".into())));
                    }
                    if let Some(s) = b.iter().find(|s| !alphabet.contains(s)) {
                        return Err(SpaceError::Parse(ParseError::new(*l, format!("symbol `{s}` is not in the alphabet"))));
                    }
                }
                ShiftPresentation::forbidden(blocks.into_iter().map(|(_, b)| b), alphabet)
            }
            ["edges", path] => {
                let text = load_graph(path).map_err(|e| err(format!("cannot read `{path}`: {e}")))?;
                let g = Graph::parse(&text).map_err(|e| err(format!("in `{path}`: {e}")))?;
                ShiftPresentation::edge_shift(g)
            }
            ["builtin", name] => ShiftPresentation::builtin(name),
            _ => Err(err("expected `shift forbidden <alphabet>`, `shift edges <file>` or `shift builtin <name>`".into())),
        }
    }
}

fn parse_alphabet(s: &str) -> Result<Alphabet, String> {
    if s == "infinite" {
        return Ok(Alphabet::Infinite);
    }
    let spec = s
        .strip_prefix("finite:")
        .ok_or_else(|| format!("unknown alphabet `{s}`"))?;
    if let Ok(n) = spec.parse::<u32>() {
        return Ok(Alphabet::indexed(n));
    }
    let symbols = spec
        .split(',')
        .map(|t| t.parse::<Symbol>().map_err(|e| e.to_string()))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Alphabet::Finite(symbols))
}

impl fmt::Display for ShiftPresentation {
    /// The presentation file format. Edge shifts print their graph name only.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ShiftPresentation::Full(Alphabet::Infinite) => writeln!(f, "shift builtin full"),
            ShiftPresentation::FirstOrEqualPairs => writeln!(f, "shift builtin first_or_equal"),
            ShiftPresentation::Edges(g) => writeln!(f, "shift edges {}", g.name()),
            _ => {
                let (blocks, alphabet) = self.blocks().expect("block presentation");
                writeln!(f, "shift forbidden {alphabet}")?;
                for b in blocks {
                    writeln!(f, "block {b}")?;
                }
                Ok(())
            }
        }
    }
}

/// Pads every block to length `M + 1` by appending all words over
/// `a1..a_horizon`; the infinite members are unchanged.
pub fn pad_to_m_step(
    blocks: &BTreeSet<Word>,
    m: usize,
    horizon: u32,
) -> Result<BTreeSet<Word>, SpaceError> {
    let symbols: Vec<Symbol> = (1..=horizon).map(Symbol::a).collect();
    pad_to_m_step_over(blocks, m, &symbols)
}

pub fn pad_to_m_step_over(
    blocks: &BTreeSet<Word>,
    m: usize,
    symbols: &[Symbol],
) -> Result<BTreeSet<Word>, SpaceError> {
    let mut out = BTreeSet::new();
    for u in blocks {
        if u.len() > m + 1 {
            return Err(SpaceError::BlockTooLong(u.clone()));
        }
        for v in all_words(symbols, m + 1 - u.len()) {
            out.insert(u.concat(&v));
        }
    }
    Ok(out)
}

/// Every word of length `n` over `symbols`.
pub fn words_of_length(symbols: &[Symbol], n: usize) -> Vec<Word> {
    all_words(symbols, n)
}
