//! Sliding block codes, higher block recoding and conjugacy witnesses.
//!
//! Block-map files:
//!
//! ```text
//! blockmap phi2 window 2
//! map e.f <e,f>
//! map e.g <e,g>
//! default coordinate 1     # optional: unmapped windows go to their 1st entry
//! ```
//!
//! An unbounded code omits `window` from the header and lists one section per
//! symbol, `family <symbol> window <n>`, each followed by its `map` lines.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::graph::GraphError;
use crate::seq::{Seq, Symbol, Word};
use crate::space::{Alphabet, Classification, Membership, ShiftPresentation, SpaceError};
use crate::topology::first_disagreement;
use crate::ParseError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CodeError {
    #[error("window `{window}` at position {position} is outside the code's domain")]
    WindowNotInDomain { position: usize, window: Word },
    #[error("codes act on infinite sequences and 0⃗ only, got `{0}`")]
    FiniteInputUnsupported(Seq),
    #[error("image `{image}` of window `{window}` is outside the second code's domain")]
    ImageNotInDomain { window: Word, image: Word },
    #[error("composition needs a finite domain; use compose_over with an alphabet")]
    UnboundedDomain,
    #[error("operation needs a bounded code")]
    NotBounded,
    #[error("key `{key}` does not have length {window}")]
    KeyLength { key: Word, window: usize },
    #[error("key `{key}` in the family of `{symbol}` does not start with it")]
    KeyPrefix { symbol: Symbol, key: Word },
    #[error("window lengths must be positive")]
    ZeroWindow,
    #[error("coordinate {coordinate} lies outside window {window}")]
    BadCoordinate { coordinate: usize, window: usize },
    #[error("the shift is not row-finite")]
    NotRowFinite,
    #[error(transparent)]
    Space(#[from] SpaceError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Parse(#[from] ParseError),
}

/// What a block map does with a window missing from its table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Fallback {
    Reject,
    /// Output the window's entry at this 1-based position.
    Coordinate(usize),
}

/// A map from windows of a fixed length to symbols.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockMap {
    window: usize,
    table: BTreeMap<Word, Symbol>,
    fallback: Fallback,
}

impl BlockMap {
    pub fn new(
        window: usize,
        table: BTreeMap<Word, Symbol>,
        fallback: Fallback,
    ) -> Result<BlockMap, CodeError> {
        if window == 0 {
            return Err(CodeError::ZeroWindow);
        }
        if let Some(key) = table.keys().find(|k| k.len() != window) {
            return Err(CodeError::KeyLength {
                key: key.clone(),
                window,
            });
        }
        if let Fallback::Coordinate(c) = fallback {
            if c == 0 || c > window {
                return Err(CodeError::BadCoordinate {
                    coordinate: c,
                    window,
                });
            }
        }
        Ok(BlockMap {
            window,
            table,
            fallback,
        })
    }

    /// Table-only map.
    pub fn from_table(window: usize, table: BTreeMap<Word, Symbol>) -> Result<BlockMap, CodeError> {
        BlockMap::new(window, table, Fallback::Reject)
    }

    pub fn identity() -> BlockMap {
        BlockMap::coordinate(1, 1)
    }

    /// The window-`window` map returning entry `c`.
    pub fn coordinate(window: usize, c: usize) -> BlockMap {
        BlockMap::new(window, BTreeMap::new(), Fallback::Coordinate(c)).expect("valid coordinate")
    }

    pub fn window(&self) -> usize {
        self.window
    }

    pub fn table(&self) -> &BTreeMap<Word, Symbol> {
        &self.table
    }

    pub fn fallback(&self) -> Fallback {
        self.fallback
    }

    pub fn is_identity(&self) -> bool {
        self.window == 1 && self.table.is_empty() && self.fallback == Fallback::Coordinate(1)
    }

    pub fn eval(&self, w: &Word) -> Option<Symbol> {
        if w.len() != self.window {
            return None;
        }
        match (self.table.get(w), self.fallback) {
            (Some(s), _) => Some(s.clone()),
            (None, Fallback::Coordinate(c)) => Some(w[c - 1].clone()),
            (None, Fallback::Reject) => None,
        }
    }

    fn accepts_all(&self) -> bool {
        self.fallback != Fallback::Reject
    }
}

/// A sliding block code given by one block map or by a finite family of
/// per-symbol block maps.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SlidingBlockCode {
    Bounded(BlockMap),
    Unbounded(BTreeMap<Symbol, BlockMap>),
}

impl SlidingBlockCode {
    pub fn identity() -> SlidingBlockCode {
        SlidingBlockCode::Bounded(BlockMap::identity())
    }

    /// A per-symbol family; every key of the map for `a` must start with `a`.
    pub fn unbounded(family: BTreeMap<Symbol, BlockMap>) -> Result<SlidingBlockCode, CodeError> {
        for (a, map) in &family {
            if let Some(key) = map.table.keys().find(|k| k.first() != Some(a)) {
                return Err(CodeError::KeyPrefix {
                    symbol: a.clone(),
                    key: key.clone(),
                });
            }
        }
        Ok(SlidingBlockCode::Unbounded(family))
    }

    pub fn block_map(&self) -> Option<&BlockMap> {
        match self {
            SlidingBlockCode::Bounded(m) => Some(m),
            SlidingBlockCode::Unbounded(_) => None,
        }
    }

    /// Window of a bounded code.
    pub fn window(&self) -> Option<usize> {
        self.block_map().map(BlockMap::window)
    }

    /// Window needed at a position holding `a`.
    fn window_at(&self, a: &Symbol) -> Option<&BlockMap> {
        match self {
            SlidingBlockCode::Bounded(m) => Some(m),
            SlidingBlockCode::Unbounded(f) => f.get(a),
        }
    }

    /// Image symbol at 1-based `position` of `x`.
    fn symbol_at(&self, x: &Seq, position: usize) -> Result<Symbol, CodeError> {
        let a = x.at(position).expect("position within sequence");
        let fail = |window: Word| CodeError::WindowNotInDomain { position, window };
        let map = self
            .window_at(a)
            .ok_or_else(|| fail(Word::new(vec![a.clone()])))?;
        let w = x
            .subblock(position, map.window)
            .map_err(|_| fail(Word::new(vec![a.clone()])))?;
        map.eval(&w).ok_or_else(|| fail(w))
    }

    /// Applies the code: `0⃗ ↦ 0⃗`, eventually periodic sequences map to
    /// eventually periodic sequences with the same preperiod and period
    /// lengths before canonicalization.
    pub fn apply(&self, x: &Seq) -> Result<Seq, CodeError> {
        if x.is_empty() {
            return Ok(Seq::empty());
        }
        let (pre, per) = x
            .periodic_parts()
            .ok_or_else(|| CodeError::FiniteInputUnsupported(x.clone()))?;
        let image = |range: std::ops::Range<usize>| -> Result<Word, CodeError> {
            range.map(|i| self.symbol_at(x, i)).collect()
        };
        let p = pre.len();
        let pre_image = image(1..p + 1)?;
        let per_image = image(p + 1..p + per.len() + 1)?;
        Ok(Seq::periodic(pre_image, per_image).expect("period stays nonempty"))
    }

    /// Slides the code along a finite block, producing the image symbols at
    /// every position whose window fits inside the block.
    pub fn apply_to_block(&self, w: &Word) -> Result<Word, CodeError> {
        let x = Seq::finite(w.clone());
        let mut out = Vec::new();
        for i in 1..=w.len() {
            let need = self
                .window_at(&w[i - 1])
                .map_or(1, BlockMap::window);
            if i + need - 1 > w.len() {
                if matches!(self, SlidingBlockCode::Bounded(_)) {
                    break;
                }
                // unbounded windows vary, so later positions may still fit
                continue;
            }
            out.push(self.symbol_at(&x, i)?);
        }
        Ok(Word::new(out))
    }
}

impl From<BlockMap> for SlidingBlockCode {
    fn from(m: BlockMap) -> Self {
        SlidingBlockCode::Bounded(m)
    }
}

fn chained_domain(phi: &BlockMap, n: usize) -> Vec<Word> {
    let keys: Vec<&Word> = phi.table.keys().collect();
    let mut words: Vec<Word> = keys.iter().map(|k| (*k).clone()).collect();
    let m = phi.window;
    for _ in 1..n {
        words = words
            .iter()
            .flat_map(|w| {
                let tail = w.slice(w.len() - (m - 1), w.len());
                keys.iter()
                    .filter(move |k| tail.is_prefix_of(k))
                    .map(move |k| w.with(k[m - 1].clone()))
            })
            .collect();
    }
    words
}

fn composed_entry(phi: &BlockMap, psi: &BlockMap, w: &Word) -> Result<Option<Symbol>, CodeError> {
    let m = phi.window;
    let mut image = Vec::with_capacity(psi.window);
    for start in 0..psi.window {
        match phi.eval(&w.slice(start, start + m)) {
            Some(s) => image.push(s),
            None => return Ok(None),
        }
    }
    let image = Word::new(image);
    psi.eval(&image)
        .map(Some)
        .ok_or_else(|| CodeError::ImageNotInDomain {
            window: w.clone(),
            image,
        })
}

/// The `(M+N−1)`-block code `Δ(w) = Ψ(Φ(w_1…w_M) … Φ(w_N…w_{M+N−1}))`,
/// so that applying `Δ` equals applying `φ` then `ψ`.
///
/// Works when `φ` is table-only (its domain is then finite), when either code
/// is the identity, or when both are pure coordinate maps. Other codes with a
/// fallback need [`compose_over`].
pub fn compose(phi: &SlidingBlockCode, psi: &SlidingBlockCode) -> Result<SlidingBlockCode, CodeError> {
    let (Some(f), Some(g)) = (phi.block_map(), psi.block_map()) else {
        return Err(CodeError::NotBounded);
    };
    if f.is_identity() {
        return Ok(psi.clone());
    }
    if g.is_identity() {
        return Ok(phi.clone());
    }
    let window = f.window + g.window - 1;
    if let (true, true, Fallback::Coordinate(i), Fallback::Coordinate(j)) =
        (f.table.is_empty(), g.table.is_empty(), f.fallback, g.fallback)
    {
        return Ok(SlidingBlockCode::Bounded(BlockMap::coordinate(window, i + j - 1)));
    }
    if f.accepts_all() {
        return Err(CodeError::UnboundedDomain);
    }
    let mut table = BTreeMap::new();
    for w in chained_domain(f, g.window) {
        if let Some(s) = composed_entry(f, g, &w)? {
            table.insert(w, s);
        }
    }
    Ok(SlidingBlockCode::Bounded(BlockMap::from_table(window, table)?))
}

/// [`compose`] materialized over every word of length `M+N−1` on `symbols`
/// whose `M`-windows all lie in the domain of `φ`.
pub fn compose_over(
    phi: &SlidingBlockCode,
    psi: &SlidingBlockCode,
    symbols: &[Symbol],
) -> Result<SlidingBlockCode, CodeError> {
    let (Some(f), Some(g)) = (phi.block_map(), psi.block_map()) else {
        return Err(CodeError::NotBounded);
    };
    let window = f.window + g.window - 1;
    let mut table = BTreeMap::new();
    for w in crate::space::words_of_length(symbols, window) {
        if let Some(s) = composed_entry(f, g, &w)? {
            table.insert(w, s);
        }
    }
    Ok(SlidingBlockCode::Bounded(BlockMap::from_table(window, table)?))
}

/// The `N`-block code onto the higher block presentation, its 1-block
/// inverse, and the presentation itself.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HigherBlock {
    pub n: usize,
    /// `x ↦ ⟨x_1…x_N⟩⟨x_2…x_{N+1}⟩…`.
    pub forward: SlidingBlockCode,
    /// `⟨a_1…a_N⟩ ↦ a_1`.
    pub backward: SlidingBlockCode,
    pub target: ShiftPresentation,
    /// The tables were cut off at the horizon.
    pub partial: bool,
}

fn require_row_finite(x: &ShiftPresentation, horizon: u64) -> Result<(), CodeError> {
    match x.classify(horizon) {
        Classification::NotRowFinite | Classification::Unknown => Err(CodeError::NotRowFinite),
        _ => Ok(()),
    }
}

/// The higher block presentation `X^[N]`: over the alphabet `B_N(X)`, with
/// forbidden pairs of non-overlapping blocks and the images of the longer
/// forbidden blocks; edge shifts map to the edge shift of the higher block
/// graph.
pub fn higher_block_presentation(
    x: &ShiftPresentation,
    n: usize,
    horizon: u64,
) -> Result<ShiftPresentation, CodeError> {
    require_row_finite(x, horizon)?;
    if n <= 1 {
        return Ok(x.clone());
    }
    match x {
        ShiftPresentation::Edges(g) => Ok(ShiftPresentation::edge_shift(g.higher_block_graph(n)?)?),
        ShiftPresentation::Full(_) | ShiftPresentation::Forbidden { .. } => {
            let language = x.block_language(n, horizon).words;
            let letters: Vec<Symbol> = language.iter().map(|w| Symbol::block(w.symbols())).collect();
            let mut blocks = BTreeSet::new();
            for u in &language {
                for v in &language {
                    if u.slice(1, n) != v.slice(0, n - 1) {
                        blocks.insert(Word::new(vec![
                            Symbol::block(u.symbols()),
                            Symbol::block(v.symbols()),
                        ]));
                    }
                }
            }
            if let ShiftPresentation::Forbidden { blocks: f, .. } = x {
                for b in f.iter().filter(|b| b.len() > n) {
                    let image: Word = b.symbols().windows(n).map(Symbol::block).collect();
                    if image.iter().all(|s| letters.contains(s)) {
                        blocks.insert(image);
                    }
                }
            }
            Ok(ShiftPresentation::forbidden(blocks, Alphabet::Finite(letters))?)
        }
        ShiftPresentation::FirstOrEqualPairs => Err(CodeError::NotRowFinite),
    }
}

/// `φ_N`, `π_N` and `X^[N]`; the code tables range over `B_N(X)` at the
/// horizon.
pub fn higher_block_code(x: &ShiftPresentation, n: usize, horizon: u64) -> Result<HigherBlock, CodeError> {
    require_row_finite(x, horizon)?;
    if n <= 1 {
        return Ok(HigherBlock {
            n: 1,
            forward: SlidingBlockCode::identity(),
            backward: SlidingBlockCode::identity(),
            target: x.clone(),
            partial: false,
        });
    }
    let language = x.block_language(n, horizon);
    let mut forward = BTreeMap::new();
    let mut backward = BTreeMap::new();
    for w in &language.words {
        let letter = Symbol::block(w.symbols());
        forward.insert(w.clone(), letter.clone());
        backward.insert(Word::new(vec![letter]), w[0].clone());
    }
    Ok(HigherBlock {
        n,
        forward: SlidingBlockCode::Bounded(BlockMap::from_table(n, forward)?),
        backward: SlidingBlockCode::Bounded(BlockMap::from_table(1, backward)?),
        target: higher_block_presentation(x, n, horizon)?,
        partial: language.partial,
    })
}

/// The 1-block code `⟨a_1…a_M⟩ ↦ Ψ(a_1…a_M)` on `X^[M]`.
pub fn recode_to_1block(
    psi: &SlidingBlockCode,
    x: &ShiftPresentation,
    horizon: u64,
) -> Result<SlidingBlockCode, CodeError> {
    let map = psi.block_map().ok_or(CodeError::NotBounded)?;
    if map.window == 1 {
        return Ok(psi.clone());
    }
    let mut table = BTreeMap::new();
    for w in x.block_language(map.window, horizon).words {
        if let Some(s) = map.eval(&w) {
            table.insert(Word::new(vec![Symbol::block(w.symbols())]), s);
        }
    }
    Ok(SlidingBlockCode::Bounded(BlockMap::from_table(1, table)?))
}

/// Which half of a conjugacy witness failed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Forward,
    Backward,
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Direction::Forward => "forward",
            Direction::Backward => "backward",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Counterexample {
    /// A block of the domain whose image is not a block of the codomain.
    Block {
        direction: Direction,
        block: Word,
        image: Word,
    },
    /// The code could not be applied.
    Apply {
        direction: Direction,
        input: String,
        error: String,
    },
    RoundTrip { sample: Seq, got: Seq },
    /// The composed block map sends a window to something other than its
    /// first entry.
    FirstCoordinate { window: Word, got: Option<Symbol> },
    ShiftCommutation { direction: Direction, sample: Seq },
    /// A sample lies in neither the source nor the target.
    NotAMember(Seq),
}

impl fmt::Display for Counterexample {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Counterexample::Block {
                direction,
                block,
                image,
            } => write!(f, "{direction} image of block {block} is {image}, not a block of the codomain"),
            Counterexample::Apply {
                direction,
                input,
                error,
            } => write!(f, "{direction} code fails on {input}: {error}"),
            Counterexample::RoundTrip { sample, got } => write!(f, "round trip sends {sample} to {got}"),
            Counterexample::FirstCoordinate { window, got } => match got {
                Some(s) => write!(f, "composed map sends {window} to {s}"),
                None => write!(f, "composed map is undefined on {window}"),
            },
            Counterexample::ShiftCommutation { direction, sample } => {
                write!(f, "{direction} code does not commute with the shift on {sample}")
            }
            Counterexample::NotAMember(x) => write!(f, "sample {x} lies in neither shift"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verification {
    Unchecked,
    VerifiedToDepth(usize),
    Refuted(Counterexample),
}

/// A candidate conjugacy between two presentations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConjugacyWitness {
    pub forward: SlidingBlockCode,
    pub backward: SlidingBlockCode,
    pub source: ShiftPresentation,
    pub target: ShiftPresentation,
    /// Symbol and graph horizon used for block languages.
    pub horizon: u64,
    pub status: Verification,
}

impl ConjugacyWitness {
    pub fn new(
        forward: SlidingBlockCode,
        backward: SlidingBlockCode,
        source: ShiftPresentation,
        target: ShiftPresentation,
    ) -> Self {
        ConjugacyWitness {
            forward,
            backward,
            source,
            target,
            horizon: 8,
            status: Verification::Unchecked,
        }
    }

    /// The witness from `φ_N`, `π_N`.
    pub fn from_higher_block(x: &ShiftPresentation, hb: &HigherBlock) -> Self {
        ConjugacyWitness::new(hb.forward.clone(), hb.backward.clone(), x.clone(), hb.target.clone())
    }

    /// Runs [`verify_conjugacy`] and records the outcome.
    pub fn verify(&mut self, depth: usize, samples: &[Seq]) -> &Verification {
        self.status = verify_conjugacy(self, depth, samples);
        &self.status
    }
}

fn apply_or_refute(code: &SlidingBlockCode, d: Direction, x: &Seq) -> Result<Seq, Counterexample> {
    code.apply(x).map_err(|e| Counterexample::Apply {
        direction: d,
        input: x.to_string(),
        error: e.to_string(),
    })
}

fn check_blocks(
    code: &SlidingBlockCode,
    d: Direction,
    from: &ShiftPresentation,
    to: &ShiftPresentation,
    depth: usize,
    horizon: u64,
) -> Result<(), Counterexample> {
    let mut languages: BTreeMap<usize, BTreeSet<Word>> = BTreeMap::new();
    for k in 1..=depth {
        for block in from.block_language(k, horizon).words {
            let image = code.apply_to_block(&block).map_err(|e| Counterexample::Apply {
                direction: d,
                input: block.to_string(),
                error: e.to_string(),
            })?;
            if image.is_empty() {
                continue;
            }
            let target = languages
                .entry(image.len())
                .or_insert_with(|| to.block_language(image.len(), horizon).words);
            if !target.contains(&image) {
                return Err(Counterexample::Block {
                    direction: d,
                    block,
                    image,
                });
            }
        }
    }
    Ok(())
}

fn check_witness(w: &ConjugacyWitness, depth: usize, samples: &[Seq]) -> Result<(), Counterexample> {
    use Direction::{Backward, Forward};
    check_blocks(&w.forward, Forward, &w.source, &w.target, depth, w.horizon)?;
    check_blocks(&w.backward, Backward, &w.target, &w.source, depth, w.horizon)?;
    for x in samples {
        let (first, first_dir, second, second_dir) = if w.source.contains(x) == Membership::Yes {
            (&w.forward, Forward, &w.backward, Backward)
        } else if w.target.contains(x) == Membership::Yes {
            (&w.backward, Backward, &w.forward, Forward)
        } else {
            return Err(Counterexample::NotAMember(x.clone()));
        };
        let y = apply_or_refute(first, first_dir, x)?;
        let back = apply_or_refute(second, second_dir, &y)?;
        if back != *x {
            return Err(Counterexample::RoundTrip {
                sample: x.clone(),
                got: back,
            });
        }
        for (code, d, input) in [(first, first_dir, x), (second, second_dir, &y)] {
            let lhs = apply_or_refute(code, d, &input.shift())?;
            if lhs != apply_or_refute(code, d, input)?.shift() {
                return Err(Counterexample::ShiftCommutation {
                    direction: d,
                    sample: input.clone(),
                });
            }
        }
    }
    if let (Some(f), Some(g)) = (w.forward.window(), w.backward.window()) {
        let delta = compose(&w.forward, &w.backward).or_else(|_| {
            compose_over(&w.forward, &w.backward, &w.source.horizon_alphabet(w.horizon))
        });
        let delta = delta.map_err(|e| Counterexample::Apply {
            direction: Forward,
            input: "composition".into(),
            error: e.to_string(),
        })?;
        let map = delta.block_map().expect("bounded composition");
        for window in w.source.block_language(f + g - 1, w.horizon).words {
            let got = map.eval(&window);
            if got.as_ref() != Some(&window[0]) {
                return Err(Counterexample::FirstCoordinate { window, got });
            }
        }
    }
    Ok(())
}

/// Checks a conjugacy witness: both codes carry blocks of length up to
/// `depth` to blocks, round trips fix every sample, the composed block map
/// returns the first entry of each window, and both codes commute with the
/// shift on the samples.
pub fn verify_conjugacy(w: &ConjugacyWitness, depth: usize, samples: &[Seq]) -> Verification {
    match check_witness(w, depth, samples) {
        Ok(()) => Verification::VerifiedToDepth(depth),
        Err(c) => Verification::Refuted(c),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BoundednessProbe {
    UniformlyContinuousAtScale {
        pairs_checked: usize,
    },
    /// For bounded codes: one pair breaking the `δ = 1/2^{M+N}` bound. For
    /// unbounded codes: for every `k` up to the probe bound, a pair within
    /// `1/2^k` whose images are at least `1/2^N` apart.
    ViolationWitness {
        pairs: Vec<(usize, Seq, Seq)>,
    },
}

/// Checks uniform continuity for the boundedness metric on a sample pool.
///
/// Agreement on the first `t` entries means `D(x, y) < 1/2^t`. Pool entries
/// that are not infinite members of `x_space` are ignored.
pub fn probe_boundedness(
    code: &SlidingBlockCode,
    x_space: &ShiftPresentation,
    epsilon_exponent: usize,
    probe_bound: usize,
    pool: &[Seq],
) -> Result<BoundednessProbe, CodeError> {
    let members: Vec<&Seq> = pool
        .iter()
        .filter(|x| x.is_infinite() && x_space.contains(x) == Membership::Yes)
        .collect();
    let images: Vec<Seq> = members
        .iter()
        .map(|x| code.apply(x))
        .collect::<Result<_, _>>()?;
    let agree = |a: &Seq, b: &Seq| first_disagreement(a, b).map_or(usize::MAX, |k| k - 1);
    let n = epsilon_exponent;
    let mut checked = 0;
    match code.window() {
        Some(m) => {
            for i in 0..members.len() {
                for j in i + 1..members.len() {
                    if agree(members[i], members[j]) >= m + n {
                        checked += 1;
                        if agree(&images[i], &images[j]) < n {
                            return Ok(BoundednessProbe::ViolationWitness {
                                pairs: vec![(m + n, members[i].clone(), members[j].clone())],
                            });
                        }
                    }
                }
            }
            Ok(BoundednessProbe::UniformlyContinuousAtScale {
                pairs_checked: checked,
            })
        }
        None => {
            let mut pairs = Vec::new();
            for k in 1..=probe_bound + n {
                let found = (0..members.len()).find_map(|i| {
                    (i + 1..members.len()).find(|&j| {
                        agree(members[i], members[j]) >= k && agree(&images[i], &images[j]) < n
                    })
                    .map(|j| (k, members[i].clone(), members[j].clone()))
                });
                match found {
                    Some(p) => pairs.push(p),
                    None => {
                        return Ok(BoundednessProbe::UniformlyContinuousAtScale {
                            pairs_checked: members.len() * members.len().saturating_sub(1) / 2,
                        })
                    }
                }
            }
            Ok(BoundednessProbe::ViolationWitness { pairs })
        }
    }
}

/// The unbounded fixture on `a1..a_count`: the map for `a_k` has window `k`
/// and returns the last entry of the window.
pub fn last_entry_family(count: u32, alphabet: &[Symbol]) -> SlidingBlockCode {
    let mut family = BTreeMap::new();
    for k in 1..=count {
        let a = Symbol::a(k);
        let window = k as usize;
        let mut table = BTreeMap::new();
        for tail in crate::space::words_of_length(alphabet, window - 1) {
            let key = Word::new(vec![a.clone()]).concat(&tail);
            table.insert(key.clone(), key[window - 1].clone());
        }
        family.insert(a, BlockMap::from_table(window, table).expect("keys have the window length"));
    }
    SlidingBlockCode::unbounded(family).expect("keys start with their symbol")
}

fn write_map(f: &mut fmt::Formatter<'_>, map: &BlockMap) -> fmt::Result {
    for (k, v) in &map.table {
        writeln!(f, "map {k} {v}")?;
    }
    if let Fallback::Coordinate(c) = map.fallback {
        writeln!(f, "default coordinate {c}")?;
    }
    Ok(())
}

/// A code with the name from its file header.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NamedCode {
    pub name: String,
    pub code: SlidingBlockCode,
}

impl fmt::Display for NamedCode {
    /// The block-map file format.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.code {
            SlidingBlockCode::Bounded(m) => {
                writeln!(f, "blockmap {} window {}", self.name, m.window)?;
                write_map(f, m)
            }
            SlidingBlockCode::Unbounded(family) => {
                writeln!(f, "blockmap {}", self.name)?;
                for (a, m) in family {
                    writeln!(f, "family {a} window {}", m.window)?;
                    write_map(f, m)?;
                }
                Ok(())
            }
        }
    }
}

struct Section {
    window: usize,
    table: BTreeMap<Word, Symbol>,
    fallback: Fallback,
    line: usize,
}

impl Section {
    fn finish(self) -> Result<BlockMap, CodeError> {
        BlockMap::new(self.window, self.table, self.fallback)
            .map_err(|e| CodeError::Parse(ParseError::new(self.line, e.to_string())))
    }
}

fn current<'a>(
    bounded: &'a mut Option<Section>,
    family: &'a mut [(Symbol, Section)],
) -> Option<&'a mut Section> {
    match bounded {
        Some(s) => Some(s),
        None => family.last_mut().map(|(_, s)| s),
    }
}

impl NamedCode {
    /// Parses the block-map file format.
    pub fn parse(text: &str) -> Result<NamedCode, CodeError> {
        let mut name: Option<String> = None;
        let mut bounded: Option<Section> = None;
        let mut family: Vec<(Symbol, Section)> = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let err = |m: String| CodeError::Parse(ParseError::new(line_no, m));
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let toks: Vec<&str> = line.split_whitespace().collect();
            let window = |t: &str| match t.parse::<usize>() {
                Ok(n) if n > 0 => Ok(n),
                _ => Err(err(format!("invalid window `{t}`"))),
            };
            let new_section = |w: usize| Section {
                window: w,
                table: BTreeMap::new(),
                fallback: Fallback::Reject,
                line: line_no,
            };
            let is_bounded = bounded.is_some();
            match (toks.as_slice(), name.is_some()) {
                (["blockmap", n, "window", w], false) => {
                    name = Some(n.to_string());
                    bounded = Some(new_section(window(w)?));
                }
                (["blockmap", n], false) => name = Some(n.to_string()),
                (["blockmap", ..], _) => return Err(err("malformed or repeated `blockmap` header".into())),
                (_, false) => return Err(err("file must start with a `blockmap` header".into())),
                (["family", a, "window", w], true) if !is_bounded => {
                    let a: Symbol = a.parse().map_err(|e: crate::seq::SeqError| err(e.to_string()))?;
                    if family.iter().any(|(b, _)| *b == a) {
                        return Err(err(format!("duplicate family `{a}`")));
                    }
                    family.push((a, new_section(window(w)?)));
                }
                (["map", key, value], true) => {
                    let section = current(&mut bounded, &mut family).ok_or_else(|| err("`map` before any `family`".into()))?;
                    let key: Word = key.parse().map_err(|e: crate::seq::SeqError| err(e.to_string()))?;
                    let value: Symbol = value.parse().map_err(|e: crate::seq::SeqError| err(e.to_string()))?;
                    if key.len() != section.window {
                        return Err(err(format!("key `{key}` does not have length {}", section.window)));
                    }
                    if section.table.insert(key.clone(), value).is_some() {
                        return Err(err(format!("duplicate key `{key}`")));
                    }
                }
                (["default", "coordinate", c], true) => {
                    let section = current(&mut bounded, &mut family).ok_or_else(|| err("`default` before any `family`".into()))?;
                    let c = c.parse().map_err(|_| err(format!("invalid coordinate `{c}`")))?;
                    section.fallback = Fallback::Coordinate(c);
                }
                (["default", "reject"], true) => {
                    let section = current(&mut bounded, &mut family).ok_or_else(|| err("`default` before any `family`".into()))?;
                    section.fallback = Fallback::Reject;
                }
                _ => return Err(err(format!("unexpected line `{line}`"))),
            }
        }
        let name = name.ok_or_else(|| CodeError::Parse(ParseError::new(0, "empty block-map file".into())))?;
        let code = match bounded {
            Some(s) => SlidingBlockCode::Bounded(s.finish()?),
            None => {
                let mut maps = BTreeMap::new();
                for (a, s) in family {
                    let line = s.line;
                    let map = s.finish()?;
                    if let Some(key) = map.table.keys().find(|k| k.first() != Some(&a)) {
                        return Err(CodeError::Parse(ParseError::new(
                            line,
                            format!("key `{key}` does not start with `{a}`"),
                        )));
                    }
                    maps.insert(a, map);
                }
                SlidingBlockCode::unbounded(maps)?
            }
        };
        Ok(NamedCode { name, code })
    }
}
