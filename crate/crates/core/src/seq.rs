//! Symbols, words and the computable fragment of the sequence space.
//!
//! A [`Seq`] is either a finite word (possibly the empty sequence) or an
//! eventually periodic infinite word `pre · per · per · …`. Periodic values are
//! always kept in canonical form (primitive period, shortest preperiod), so
//! structural equality coincides with equality of the denoted sequences.
//!
//! Text syntax:
//!
//! * symbols: `a<k>` for the indexed letters, any other token for named
//!   letters, and `<x,y,…>` for block letters (letters whose value is a word);
//! * finite words: symbols joined with `.`, e.g. `a1.a2.a3`, and `~` for the
//!   empty sequence;
//! * eventually periodic sequences: `a1.a2|(a3.a1)` (preperiod `a1 a2`, period
//!   `a3 a1`), or `(a1.a2)` when the preperiod is empty.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use thiserror::Error;

/// Characters that may not occur inside a named symbol.
const RESERVED: &[char] = &['.', '|', '(', ')', '~', ';', '@', '*', '<', '>', ',', '#'];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeqError {
    #[error("invalid symbol `{0}`")]
    InvalidSymbol(String),
    #[error("symbol index must be at least 1")]
    ZeroIndex,
    #[error("period of an eventually periodic sequence must be nonempty")]
    EmptyPeriod,
    #[error("window {start}..{start}+{len} exceeds the sequence length")]
    OutOfRange { start: usize, len: usize },
    #[error("malformed sequence `{0}`")]
    Malformed(String),
}

/// A letter of the countable alphabet.
///
/// The indexed letters `a1, a2, …` carry the canonical order used by the word
/// enumeration; named letters are used for graph edges and vertices, and
/// block letters for higher block alphabets.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Symbol {
    Indexed(u32),
    Named(Arc<str>),
    Block(Arc<[Symbol]>),
}

impl Symbol {
    /// The indexed letter `a_k`.
    ///
    /// # Panics
    ///
    /// Panics if `k == 0`.
    pub fn a(k: u32) -> Symbol {
        assert!(k >= 1, "symbol indices start at 1");
        Symbol::Indexed(k)
    }

    /// A named letter. Names that spell an indexed letter (`a7`) become that
    /// indexed letter, so printing and parsing agree.
    pub fn named(name: &str) -> Result<Symbol, SeqError> {
        name.parse()
    }

    /// The block letter `<w_1,…,w_n>`. A block of length one is the letter
    /// itself, so `X^[1]` shares its alphabet with `X`.
    pub fn block(word: &[Symbol]) -> Symbol {
        if word.len() == 1 {
            word[0].clone()
        } else {
            Symbol::Block(word.iter().cloned().collect())
        }
    }

    pub fn index(&self) -> Option<u32> {
        match self {
            Symbol::Indexed(k) => Some(*k),
            _ => None,
        }
    }

    pub fn block_parts(&self) -> Option<&[Symbol]> {
        match self {
            Symbol::Block(parts) => Some(parts),
            _ => None,
        }
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Symbol::Indexed(k) => write!(f, "a{k}"),
            Symbol::Named(name) => f.write_str(name),
            Symbol::Block(parts) => {
                f.write_str("<")?;
                for (i, s) in parts.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{s}")?;
                }
                f.write_str(">")
            }
        }
    }
}

impl fmt::Debug for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

fn parse_index(token: &str) -> Option<Result<u32, SeqError>> {
    let digits = token.strip_prefix('a')?;
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    match digits.parse::<u32>() {
        Ok(0) => Some(Err(SeqError::ZeroIndex)),
        Ok(k) if !digits.starts_with('0') => Some(Ok(k)),
        Ok(_) => None,
        Err(_) => Some(Err(SeqError::InvalidSymbol(token.to_string()))),
    }
}

/// Splits `s` on `sep` occurrences that are not nested inside `<…>`.
fn split_top_level(s: &str, sep: char) -> Result<Vec<&str>, SeqError> {
    let mut parts = Vec::new();
    let mut depth = 0usize;
    let mut start = 0;
    for (i, c) in s.char_indices() {
        match c {
            '<' => depth += 1,
            '>' => {
                depth = depth
                    .checked_sub(1)
                    .ok_or_else(|| SeqError::InvalidSymbol(s.to_string()))?
            }
            c if c == sep && depth == 0 => {
                parts.push(&s[start..i]);
                start = i + c.len_utf8();
            }
            _ => {}
        }
    }
    if depth != 0 {
        return Err(SeqError::InvalidSymbol(s.to_string()));
    }
    parts.push(&s[start..]);
    Ok(parts)
}

impl FromStr for Symbol {
    type Err = SeqError;

    fn from_str(token: &str) -> Result<Symbol, SeqError> {
        let token = token.trim();
        if let Some(inner) = token.strip_prefix('<') {
            let inner = inner
                .strip_suffix('>')
                .ok_or_else(|| SeqError::InvalidSymbol(token.to_string()))?;
            let parts = split_top_level(inner, ',')?
                .into_iter()
                .map(str::parse)
                .collect::<Result<Vec<Symbol>, _>>()?;
            if parts.len() < 2 {
                return Err(SeqError::InvalidSymbol(token.to_string()));
            }
            return Ok(Symbol::Block(parts.into()));
        }
        if let Some(k) = parse_index(token) {
            return k.map(Symbol::Indexed);
        }
        if token.is_empty()
            || token
                .chars()
                .any(|c| c.is_whitespace() || RESERVED.contains(&c))
        {
            return Err(SeqError::InvalidSymbol(token.to_string()));
        }
        Ok(Symbol::Named(token.into()))
    }
}

/// A finite word (block). The empty word is the empty sequence `0⃗`.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word(Vec<Symbol>);

impl Word {
    pub fn new(symbols: Vec<Symbol>) -> Word {
        Word(symbols)
    }

    pub fn empty() -> Word {
        Word(Vec::new())
    }

    /// Word over indexed letters, `Word::indexed(&[1, 2])` is `a1 a2`.
    pub fn indexed(indices: &[u32]) -> Word {
        Word(indices.iter().map(|&k| Symbol::a(k)).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.0
    }

    pub fn into_symbols(self) -> Vec<Symbol> {
        self.0
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Symbol> {
        self.0.iter()
    }

    pub fn first(&self) -> Option<&Symbol> {
        self.0.first()
    }

    pub fn last(&self) -> Option<&Symbol> {
        self.0.last()
    }

    pub fn push(&mut self, s: Symbol) {
        self.0.push(s);
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn with(&self, s: Symbol) -> Word {
        let mut v = self.0.clone();
        v.push(s);
        Word(v)
    }

    pub fn is_prefix_of(&self, other: &Word) -> bool {
        other.0.starts_with(&self.0)
    }

    pub fn slice(&self, start: usize, end: usize) -> Word {
        Word(self.0[start..end].to_vec())
    }

    /// Whether `needle` occurs as a contiguous subblock.
    pub fn contains_block(&self, needle: &Word) -> bool {
        needle.is_empty() || self.0.windows(needle.len()).any(|w| w == needle.symbols())
    }

    /// All contiguous windows of length `n`.
    pub fn windows(&self, n: usize) -> impl Iterator<Item = Word> + '_ {
        self.0.windows(n.max(1)).filter(move |_| n > 0).map(|w| Word(w.to_vec()))
    }

    /// Largest index among indexed letters, `None` if a non-indexed letter
    /// occurs. The empty word yields `Some(0)`.
    pub fn max_index(&self) -> Option<u32> {
        self.0.iter().try_fold(0, |m, s| s.index().map(|k| m.max(k)))
    }
}

impl From<Vec<Symbol>> for Word {
    fn from(v: Vec<Symbol>) -> Word {
        Word(v)
    }
}

impl FromIterator<Symbol> for Word {
    fn from_iter<I: IntoIterator<Item = Symbol>>(iter: I) -> Word {
        Word(iter.into_iter().collect())
    }
}

impl<'a> IntoIterator for &'a Word {
    type Item = &'a Symbol;
    type IntoIter = std::slice::Iter<'a, Symbol>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

impl std::ops::Index<usize> for Word {
    type Output = Symbol;

    fn index(&self, i: usize) -> &Symbol {
        &self.0[i]
    }
}

fn write_dotted(f: &mut fmt::Formatter<'_>, symbols: &[Symbol]) -> fmt::Result {
    for (i, s) in symbols.iter().enumerate() {
        if i > 0 {
            f.write_str(".")?;
        }
        write!(f, "{s}")?;
    }
    Ok(())
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            f.write_str("~")
        } else {
            write_dotted(f, &self.0)
        }
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

fn parse_dotted(s: &str) -> Result<Vec<Symbol>, SeqError> {
    let s = s.trim();
    if s.is_empty() || s == "~" {
        return Ok(Vec::new());
    }
    split_top_level(s, '.')?.into_iter().map(str::parse).collect()
}

impl FromStr for Word {
    type Err = SeqError;

    fn from_str(s: &str) -> Result<Word, SeqError> {
        parse_dotted(s).map(Word)
    }
}

/// Length of a sequence: a natural number or infinity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Length {
    Finite(usize),
    Infinite,
}

impl Length {
    pub fn is_infinite(self) -> bool {
        self == Length::Infinite
    }
}

impl fmt::Display for Length {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Length::Finite(n) => write!(f, "{n}"),
            Length::Infinite => f.write_str("inf"),
        }
    }
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
enum Repr {
    Finite(Word),
    Periodic { pre: Word, per: Word },
}

/// A finite sequence or an eventually periodic infinite sequence.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Seq(Repr);

/// Borrowed view of a [`Seq`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeqView<'a> {
    Finite(&'a Word),
    Periodic { pre: &'a Word, per: &'a Word },
}

fn primitive_root(per: &[Symbol]) -> usize {
    let n = per.len();
    (1..=n)
        .find(|&d| n.is_multiple_of(d) && (d..n).all(|i| per[i] == per[i - d]))
        .unwrap_or(n)
}

impl Seq {
    /// The empty sequence `0⃗`.
    pub fn empty() -> Seq {
        Seq(Repr::Finite(Word::empty()))
    }

    pub fn finite(word: Word) -> Seq {
        Seq(Repr::Finite(word))
    }

    /// `pre · per · per · …`, brought to canonical form.
    pub fn periodic(pre: Word, per: Word) -> Result<Seq, SeqError> {
        if per.is_empty() {
            return Err(SeqError::EmptyPeriod);
        }
        let mut pre = pre.0;
        let mut per = per.0;
        per.truncate(primitive_root(&per));
        while let (Some(p), Some(q)) = (pre.last(), per.last()) {
            if p != q {
                break;
            }
            pre.pop();
            per.rotate_right(1);
        }
        Ok(Seq(Repr::Periodic {
            pre: Word(pre),
            per: Word(per),
        }))
    }

    /// Purely periodic sequence `per^ω`.
    pub fn cycle(per: Word) -> Result<Seq, SeqError> {
        Seq::periodic(Word::empty(), per)
    }

    pub fn view(&self) -> SeqView<'_> {
        match &self.0 {
            Repr::Finite(w) => SeqView::Finite(w),
            Repr::Periodic { pre, per } => SeqView::Periodic { pre, per },
        }
    }

    pub fn as_finite(&self) -> Option<&Word> {
        match &self.0 {
            Repr::Finite(w) => Some(w),
            Repr::Periodic { .. } => None,
        }
    }

    pub fn periodic_parts(&self) -> Option<(&Word, &Word)> {
        match &self.0 {
            Repr::Finite(_) => None,
            Repr::Periodic { pre, per } => Some((pre, per)),
        }
    }

    pub fn len(&self) -> Length {
        match &self.0 {
            Repr::Finite(w) => Length::Finite(w.len()),
            Repr::Periodic { .. } => Length::Infinite,
        }
    }

    /// Whether this is the empty sequence `0⃗`.
    pub fn is_empty(&self) -> bool {
        matches!(&self.0, Repr::Finite(w) if w.is_empty())
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self.0, Repr::Periodic { .. })
    }

    /// Entry `x_i`, 1-based.
    pub fn at(&self, i: usize) -> Option<&Symbol> {
        if i == 0 {
            return None;
        }
        match &self.0 {
            Repr::Finite(w) => w.0.get(i - 1),
            Repr::Periodic { pre, per } => {
                let i = i - 1;
                if i < pre.len() {
                    Some(&pre.0[i])
                } else {
                    Some(&per.0[(i - pre.len()) % per.len()])
                }
            }
        }
    }

    /// The entries in order; infinite for periodic sequences.
    pub fn iter(&self) -> Box<dyn Iterator<Item = &Symbol> + '_> {
        match &self.0 {
            Repr::Finite(w) => Box::new(w.iter()),
            Repr::Periodic { pre, per } => Box::new(pre.iter().chain(per.iter().cycle())),
        }
    }

    /// The initial segment of length `n`, if the sequence is that long.
    pub fn prefix(&self, n: usize) -> Option<Word> {
        if let Length::Finite(l) = self.len() {
            if n > l {
                return None;
            }
        }
        Some(self.iter().take(n).cloned().collect())
    }

    /// Whether `w` is an initial segment of this sequence.
    pub fn starts_with(&self, w: &Word) -> bool {
        match self.prefix(w.len()) {
            Some(p) => p == *w,
            None => false,
        }
    }

    /// Number of leading entries after which the sequence repeats; for finite
    /// sequences this is the length.
    pub fn transient_len(&self) -> usize {
        match &self.0 {
            Repr::Finite(w) => w.len(),
            Repr::Periodic { pre, per } => pre.len() + per.len(),
        }
    }

    /// The shift map: drops the first entry, sending sequences of length at
    /// most one to `0⃗`.
    pub fn shift(&self) -> Seq {
        match &self.0 {
            Repr::Finite(w) if w.len() <= 1 => Seq::empty(),
            Repr::Finite(w) => Seq::finite(w.slice(1, w.len())),
            Repr::Periodic { pre, per } => {
                if pre.is_empty() {
                    let mut rotated = per.0.clone();
                    rotated.rotate_left(1);
                    Seq::cycle(Word(rotated)).expect("period stays nonempty")
                } else {
                    Seq::periodic(pre.slice(1, pre.len()), per.clone())
                        .expect("period stays nonempty")
                }
            }
        }
    }

    /// `σ^k(x)`.
    pub fn shift_by(&self, k: usize) -> Seq {
        (0..k).fold(self.clone(), |s, _| s.shift())
    }

    /// Concatenation `x·y` of a finite word with a sequence.
    pub fn concat(x: &Word, y: &Seq) -> Seq {
        match &y.0 {
            Repr::Finite(w) => Seq::finite(x.concat(w)),
            Repr::Periodic { pre, per } => {
                Seq::periodic(x.concat(pre), per.clone()).expect("period stays nonempty")
            }
        }
    }

    /// The subblock `x_start … x_{start+len−1}` (1-based `start`).
    pub fn subblock(&self, start: usize, len: usize) -> Result<Word, SeqError> {
        if len == 0 {
            return Ok(Word::empty());
        }
        let out_of_range = SeqError::OutOfRange { start, len };
        if start == 0 {
            return Err(out_of_range);
        }
        let end = start + len - 1;
        if let Length::Finite(l) = self.len() {
            if end > l {
                return Err(out_of_range);
            }
        }
        Ok(self.iter().skip(start - 1).take(len).cloned().collect())
    }

    /// All distinct subblocks of length `n` (for periodic sequences the
    /// windows starting in `pre · per` already cover every subblock).
    pub fn windows(&self, n: usize) -> Vec<Word> {
        let mut out = std::collections::BTreeSet::new();
        match &self.0 {
            Repr::Finite(w) => out.extend(w.windows(n)),
            Repr::Periodic { .. } => {
                for start in 1..=self.transient_len() {
                    out.insert(self.subblock(start, n).expect("infinite"));
                }
            }
        }
        out.into_iter().collect()
    }

    /// Set of letters occurring in the sequence.
    pub fn alphabet(&self) -> std::collections::BTreeSet<Symbol> {
        match &self.0 {
            Repr::Finite(w) => w.iter().cloned().collect(),
            Repr::Periodic { pre, per } => pre.iter().chain(per.iter()).cloned().collect(),
        }
    }
}

impl fmt::Display for Seq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            Repr::Finite(w) => write!(f, "{w}"),
            Repr::Periodic { pre, per } => {
                if !pre.is_empty() {
                    write_dotted(f, &pre.0)?;
                    f.write_str("|")?;
                }
                f.write_str("(")?;
                write_dotted(f, &per.0)?;
                f.write_str(")")
            }
        }
    }
}

impl fmt::Debug for Seq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Seq {
    type Err = SeqError;

    fn from_str(s: &str) -> Result<Seq, SeqError> {
        let s = s.trim();
        let malformed = || SeqError::Malformed(s.to_string());
        match s.find('(') {
            None => {
                if s.contains('|') || s.contains(')') {
                    return Err(malformed());
                }
                Ok(Seq::finite(s.parse()?))
            }
            Some(open) => {
                let body = s[open + 1..].strip_suffix(')').ok_or_else(malformed)?;
                let head = &s[..open];
                let pre = match head.strip_suffix('|') {
                    Some(p) if !p.is_empty() => p,
                    Some(_) => "",
                    None if head.is_empty() => "",
                    None => return Err(malformed()),
                };
                if body.contains(['(', ')', '|']) || pre.contains(['(', ')', '|', '~']) {
                    return Err(malformed());
                }
                let per = parse_dotted(body)?;
                Seq::periodic(Word(parse_dotted(pre)?), Word(per))
            }
        }
    }
}

/// An entry of the compactified product space: a letter or the point at
/// infinity.
pub type CompactEntry = Option<Symbol>;

/// How a [`CompactifiedWord`] continues past its listed entries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Tail {
    /// Every later entry is the point at infinity.
    AllInfinity,
    /// The entries are a truncation; later entries are unknown.
    Truncated,
}

/// A finite description of a point of `A_∞ × A_∞ × …`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CompactifiedWord {
    pub entries: Vec<CompactEntry>,
    pub tail: Tail,
}

/// Image of a [`CompactifiedWord`] under the quotient map.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum QuotientImage {
    Seq(Seq),
    /// No point at infinity was observed in a truncated word, so the image
    /// could be any infinite sequence with this prefix.
    TruncationUnknown,
}

impl CompactifiedWord {
    pub fn new(entries: Vec<CompactEntry>, tail: Tail) -> Self {
        CompactifiedWord { entries, tail }
    }

    /// The quotient map: keep the entries before the first point at infinity.
    pub fn quotient(&self) -> QuotientImage {
        let cut = self.entries.iter().position(Option::is_none);
        match (cut, self.tail) {
            (Some(i), _) => QuotientImage::Seq(Seq::finite(
                self.entries[..i].iter().flatten().cloned().collect(),
            )),
            (None, Tail::AllInfinity) => {
                QuotientImage::Seq(Seq::finite(self.entries.iter().flatten().cloned().collect()))
            }
            (None, Tail::Truncated) => QuotientImage::TruncationUnknown,
        }
    }
}

impl FromStr for CompactifiedWord {
    type Err = SeqError;

    /// Parses `a1.a2.inf.a1` followed by an optional `|inf` (all later entries
    /// infinite) or `|...` (truncated, the default).
    fn from_str(s: &str) -> Result<Self, SeqError> {
        let s = s.trim();
        let (body, tail) = match s.rsplit_once('|') {
            Some((b, "inf")) => (b, Tail::AllInfinity),
            Some((b, "...")) => (b, Tail::Truncated),
            Some(_) => return Err(SeqError::Malformed(s.to_string())),
            None => (s, Tail::Truncated),
        };
        let entries = if body.is_empty() || body == "~" {
            Vec::new()
        } else {
            split_top_level(body, '.')?
                .into_iter()
                .map(|t| match t.trim() {
                    "inf" => Ok(None),
                    t => t.parse().map(Some),
                })
                .collect::<Result<_, _>>()?
        };
        Ok(CompactifiedWord { entries, tail })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seq(s: &str) -> Seq {
        s.parse().unwrap()
    }

    fn word(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn shift_examples() {
        assert_eq!(seq("a1.a2.a3").shift(), seq("a2.a3"));
        assert_eq!(Seq::empty().shift(), Seq::empty());
        assert_eq!(seq("a5").shift(), Seq::empty());
        assert_eq!(seq("(a1.a2)").shift(), seq("(a2.a1)"));
        assert_eq!(seq("a3|(a1)").shift(), seq("(a1)"));
    }

    #[test]
    fn concat_examples() {
        assert_eq!(Seq::concat(&word("a1"), &seq("a2")), seq("a1.a2"));
        assert_eq!(Seq::concat(&Word::empty(), &seq("(a1)")), seq("(a1)"));
        assert_eq!(Seq::concat(&word("a2"), &seq("(a2)")), seq("(a2)"));
        assert_eq!(Seq::concat(&word("a1.a2"), &Seq::empty()), seq("a1.a2"));
    }

    #[test]
    fn canonical_form_absorbs_preperiod_and_shrinks_period() {
        let s = Seq::periodic(word("a1.a2.a1"), word("a2.a1.a2.a1")).unwrap();
        assert_eq!(s, seq("(a1.a2)"));
        assert_eq!(s.to_string(), "(a1.a2)");
        let t = Seq::periodic(word("a3.a1"), word("a2.a1")).unwrap();
        assert_eq!(t.to_string(), "a3|(a1.a2)");
        assert_eq!(Seq::periodic(word("a1"), Word::empty()), Err(SeqError::EmptyPeriod));
    }

    #[test]
    fn subblock_examples() {
        assert_eq!(seq("(a1.a2)").subblock(2, 3).unwrap(), word("a2.a1.a2"));
        assert_eq!(seq("a1.a2").subblock(1, 0).unwrap(), Word::empty());
        assert_eq!(
            seq("a1.a2").subblock(2, 2),
            Err(SeqError::OutOfRange { start: 2, len: 2 })
        );
        assert!(seq("a1.a2").subblock(0, 1).is_err());
    }

    #[test]
    fn quotient_examples() {
        let x: CompactifiedWord = "a1.a2.inf.a1.inf.inf.a1".parse().unwrap();
        assert_eq!(x.quotient(), QuotientImage::Seq(seq("a1.a2")));
        let y: CompactifiedWord = "a1.a2.inf.a2.a7.inf.a2".parse().unwrap();
        assert_eq!(x.quotient(), y.quotient());
        let z: CompactifiedWord = "inf.inf.inf|inf".parse().unwrap();
        assert_eq!(z.quotient(), QuotientImage::Seq(Seq::empty()));
        let w: CompactifiedWord = "a1.a2.a3".parse().unwrap();
        assert_eq!(w.quotient(), QuotientImage::TruncationUnknown);
        let v: CompactifiedWord = "a1.a2.a3|inf".parse().unwrap();
        assert_eq!(v.quotient(), QuotientImage::Seq(seq("a1.a2.a3")));
        let empty = CompactifiedWord::new(vec![], Tail::AllInfinity);
        assert_eq!(empty.quotient(), QuotientImage::Seq(Seq::empty()));
    }

    #[test]
    fn symbol_syntax() {
        assert_eq!(Symbol::named("a7").unwrap(), Symbol::a(7));
        assert_eq!(Symbol::named("e").unwrap().to_string(), "e");
        let b: Symbol = "<e,<f,g>>".parse().unwrap();
        assert_eq!(b.to_string(), "<e,<f,g>>");
        assert_eq!(b.block_parts().unwrap().len(), 2);
        assert!("a0".parse::<Symbol>().is_err());
        assert!("e.f".parse::<Symbol>().is_err());
        assert!("".parse::<Symbol>().is_err());
        // leading zeros are not an index spelling
        assert!(matches!("a01".parse::<Symbol>().unwrap(), Symbol::Named(_)));
        assert_eq!(Symbol::block(&[Symbol::a(1)]), Symbol::a(1));
    }

    #[test]
    fn sequence_syntax_round_trip() {
        for s in ["~", "a1", "a1.a2.a3", "(a1)", "a1.a2|(a3.a1)", "(<e,f>.<f,e>)", "w/h3.m"] {
            assert_eq!(seq(s).to_string(), s);
        }
        assert_eq!(seq("|(a1)"), seq("(a1)"));
        assert!("a1|a2".parse::<Seq>().is_err());
        assert!("a1(a2)".parse::<Seq>().is_err());
        assert!("a1|()".parse::<Seq>().is_err());
    }

    #[test]
    fn lengths() {
        assert_eq!(Seq::empty().len(), Length::Finite(0));
        assert_eq!(seq("a1.a2").len(), Length::Finite(2));
        assert_eq!(seq("(a1)").len(), Length::Infinite);
        assert!(Length::Finite(10) < Length::Infinite);
    }
}
