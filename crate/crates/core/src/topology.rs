//! Cylinder sets, basic open sets, the word enumeration and the two metrics.
//!
//! The enumeration of finite words orders them by *shell*
//! `max(length, largest letter index)`, then by length, then lexicographically.
//! It starts `~, a1, a2, a1.a1, a1.a2, a2.a1, a2.a2, a3, …`.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

use crate::seq::{Length, Seq, Symbol, Word};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TopologyError {
    #[error("word `{0}` lies in both F and G")]
    DisjointnessViolation(Word),
    #[error("metric requires infinite sequences, got `{0}`")]
    NotInfinite(Seq),
    #[error("letter `{0}` is not an indexed letter a<k>")]
    NotIndexed(Symbol),
    #[error("enumeration index must be at least 1")]
    ZeroIndex,
}

/// The generalized cylinder `Z(base, excluded)`; with no exclusions this is
/// the cylinder `Z(base)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CylinderSpec {
    pub base: Word,
    pub excluded: BTreeSet<Symbol>,
}

impl CylinderSpec {
    pub fn new(base: Word) -> Self {
        CylinderSpec {
            base,
            excluded: BTreeSet::new(),
        }
    }

    pub fn excluding(base: Word, excluded: impl IntoIterator<Item = Symbol>) -> Self {
        CylinderSpec {
            base,
            excluded: excluded.into_iter().collect(),
        }
    }

    pub fn contains(&self, x: &Seq) -> bool {
        cylinder_contains(self, x)
    }
}

pub fn cylinder_contains(c: &CylinderSpec, x: &Seq) -> bool {
    if !x.starts_with(&c.base) {
        return false;
    }
    match x.at(c.base.len() + 1) {
        Some(next) => !c.excluded.contains(next),
        None => true,
    }
}

/// Result of intersecting two cylinders.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CylinderMeet {
    /// The intersection is the cylinder of this word.
    Cylinder(Word),
    Empty,
}

/// `Z(x) ∩ Z(y)`: the cylinder of the longer word when one is a prefix of
/// the other, empty otherwise.
pub fn cylinder_intersection(x: &Word, y: &Word) -> CylinderMeet {
    if x.is_prefix_of(y) {
        CylinderMeet::Cylinder(y.clone())
    } else if y.is_prefix_of(x) {
        CylinderMeet::Cylinder(x.clone())
    } else {
        CylinderMeet::Empty
    }
}

/// Coordinate `y` of the embedding of `x` into `{0,1}^{finite words}`.
pub fn alpha_coordinate(x: &Seq, y: &Word) -> u8 {
    u8::from(x.starts_with(y))
}

/// Membership of `x` in the basic open set `N(F, G)` pulled back along the
/// embedding: `x` extends every word of `F` and no word of `G`.
pub fn in_basic_open(
    x: &Seq,
    must: &BTreeSet<Word>,
    must_not: &BTreeSet<Word>,
) -> Result<bool, TopologyError> {
    if let Some(w) = must.intersection(must_not).next() {
        return Err(TopologyError::DisjointnessViolation(w.clone()));
    }
    Ok(must.iter().all(|w| alpha_coordinate(x, w) == 1)
        && must_not.iter().all(|w| alpha_coordinate(x, w) == 0))
}

/// A metric value: zero or `1/2^exponent`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Dyadic(Option<BigUint>);

impl Dyadic {
    pub fn zero() -> Dyadic {
        Dyadic(None)
    }

    /// `1/2^exponent`.
    pub fn pow2_inv(exponent: impl Into<BigUint>) -> Dyadic {
        Dyadic(Some(exponent.into()))
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_none()
    }

    pub fn exponent(&self) -> Option<&BigUint> {
        self.0.as_ref()
    }

    /// Exact rational value; `None` if the exponent is too large to
    /// materialize.
    pub fn to_rational(&self) -> Option<BigRational> {
        match &self.0 {
            None => Some(BigRational::zero()),
            Some(e) => {
                let e = e.to_u32().filter(|&e| e <= 1 << 16)?;
                let den = BigUint::one() << e;
                Some(BigRational::new(1.into(), den.into()))
            }
        }
    }

    pub fn to_f64(&self) -> f64 {
        match &self.0 {
            None => 0.0,
            Some(e) => e.to_i32().map_or(0.0, |e| 2f64.powi(-e)),
        }
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        match (&self.0, &other.0) {
            (None, None) => std::cmp::Ordering::Equal,
            (None, Some(_)) => std::cmp::Ordering::Less,
            (Some(_), None) => std::cmp::Ordering::Greater,
            (Some(a), Some(b)) => b.cmp(a),
        }
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            None => f.write_str("0"),
            Some(e) => write!(f, "1/2^{e}"),
        }
    }
}

/// The canonical bijection between finite words over `a1, a2, …` and the
/// positive integers.
#[derive(Debug, Clone, Copy, Default)]
pub struct WordEnumeration;

fn pow(base: u64, exp: usize) -> BigUint {
    num_traits::pow(BigUint::from(base), exp)
}

/// Number of words with shell at most `t`.
fn shells_up_to(t: u64) -> BigUint {
    (0..=t as usize).map(|l| pow(t, l)).sum()
}

/// Number of words of length `l` whose shell is exactly `s`.
fn shell_count(s: u64, l: usize) -> BigUint {
    if l as u64 == s {
        pow(s, l)
    } else {
        pow(s, l) - pow(s - 1, l)
    }
}

/// Number of words over `a1..ak` of the same length as `w` that precede it
/// lexicographically.
fn count_less(w: &[u64], k: u64) -> BigUint {
    let l = w.len();
    let mut total = BigUint::zero();
    for (i, &c) in w.iter().enumerate() {
        total += BigUint::from((c - 1).min(k)) * pow(k, l - i - 1);
        if c > k {
            break;
        }
    }
    total
}

fn indices(w: &Word) -> Result<Vec<u64>, TopologyError> {
    w.iter()
        .map(|s| {
            s.index()
                .map(u64::from)
                .ok_or_else(|| TopologyError::NotIndexed(s.clone()))
        })
        .collect()
}

impl WordEnumeration {
    pub fn shell(w: &Word) -> Result<u64, TopologyError> {
        let idx = indices(w)?;
        Ok(idx.iter().copied().max().unwrap_or(0).max(w.len() as u64))
    }

    /// Position of `w` in the enumeration; the empty word is 1.
    pub fn index(w: &Word) -> Result<BigUint, TopologyError> {
        let idx = indices(w)?;
        let l = idx.len();
        let s = idx.iter().copied().max().unwrap_or(0).max(l as u64);
        if s == 0 {
            return Ok(BigUint::one());
        }
        let mut pos = shells_up_to(s - 1);
        for shorter in 0..l {
            pos += shell_count(s, shorter);
        }
        pos += count_less(&idx, s);
        if (l as u64) < s {
            pos -= count_less(&idx, s - 1);
        }
        Ok(pos + 1u32)
    }

    /// The word at position `i` (1-based).
    pub fn word_at(i: &BigUint) -> Result<Word, TopologyError> {
        if i.is_zero() {
            return Err(TopologyError::ZeroIndex);
        }
        if i.is_one() {
            return Ok(Word::empty());
        }
        let mut s = 1u64;
        while shells_up_to(s) < *i {
            s += 1;
        }
        let mut rank = i - shells_up_to(s - 1) - 1u32;
        let mut len = 0usize;
        loop {
            let c = shell_count(s, len);
            if rank < c {
                break;
            }
            rank -= c;
            len += 1;
        }
        // need at least one a_s when the word is shorter than its shell
        let needs_top = (len as u64) < s;
        let mut out = Vec::with_capacity(len);
        let mut has_top = false;
        for pos in 0..len {
            let rest = len - pos - 1;
            for c in 1..=s {
                let completions = if !needs_top || has_top || c == s {
                    pow(s, rest)
                } else {
                    pow(s, rest) - pow(s - 1, rest)
                };
                if rank < completions {
                    out.push(c);
                    has_top |= c == s;
                    break;
                }
                rank -= completions;
            }
        }
        Ok(out.into_iter().map(|k| Symbol::a(k as u32)).collect())
    }

    pub fn word_at_u64(i: u64) -> Result<Word, TopologyError> {
        Self::word_at(&BigUint::from(i))
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Number of leading entries that decide equality of two sequences.
fn comparison_horizon(x: &Seq, y: &Seq) -> usize {
    let part = |s: &Seq| match s.periodic_parts() {
        Some((pre, per)) => (pre.len(), per.len()),
        None => (s.transient_len(), 1),
    };
    let (px, qx) = part(x);
    let (py, qy) = part(y);
    px.max(py) + qx / gcd(qx, qy) * qy
}

/// 1-based position of the first disagreement of `x` and `y`, counting the
/// end of a finite sequence as a disagreement; `None` if `x == y`.
pub fn first_disagreement(x: &Seq, y: &Seq) -> Option<usize> {
    if x == y {
        return None;
    }
    let bound = comparison_horizon(x, y) + 1;
    (1..=bound)
        .find(|&i| x.at(i) != y.at(i))
        .or(Some(bound))
}

/// `d_A(x, y) = 1/2^i` for the least enumeration index `i` whose word is an
/// initial segment of exactly one of `x`, `y`.
///
/// Every distinguishing word is a prefix of length at least `k` (the first
/// disagreement) of one of the two sequences, and enumeration indices grow
/// along prefixes, so only the two length-`k` prefixes need to be ranked.
pub fn metric_da(x: &Seq, y: &Seq) -> Result<Dyadic, TopologyError> {
    for s in x.alphabet().iter().chain(y.alphabet().iter()) {
        if s.index().is_none() {
            return Err(TopologyError::NotIndexed(s.clone()));
        }
    }
    let Some(k) = first_disagreement(x, y) else {
        return Ok(Dyadic::zero());
    };
    let mut best: Option<BigUint> = None;
    for s in [x, y] {
        if let Some(p) = s.prefix(k) {
            let i = WordEnumeration::index(&p)?;
            best = Some(match best {
                Some(b) if b <= i => b,
                _ => i,
            });
        }
    }
    Ok(Dyadic::pow2_inv(
        best.expect("a disagreement lies within one of the sequences"),
    ))
}

/// The boundedness metric on infinite sequences: `1/2^n` at the first
/// disagreement `n`.
pub fn metric_d(x: &Seq, y: &Seq) -> Result<Dyadic, TopologyError> {
    for s in [x, y] {
        if s.len() != Length::Infinite {
            return Err(TopologyError::NotInfinite(s.clone()));
        }
    }
    Ok(match first_disagreement(x, y) {
        None => Dyadic::zero(),
        Some(n) => Dyadic::pow2_inv(n as u64),
    })
}

/// Outcome of [`check_convergence`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConvergenceReport {
    pub holds: bool,
    /// Least `N` such that every term `x^n` with `n > N` satisfies the
    /// convergence clause; `N = xs.len()` is the vacuous witness.
    pub witness: usize,
    /// Number of terms after the witness, i.e. how much of the family was
    /// actually constrained.
    pub verified_tail: usize,
}

/// Bounded check of sequential convergence `x^n → x` on a finite family.
///
/// For infinite `x` a term passes when it agrees with `x` on entries
/// `1..=depth`. For finite `x` a term passes when it extends `x` and its next
/// entry, if any, avoids `test_set`.
pub fn check_convergence(
    xs: &[Seq],
    x: &Seq,
    depth: usize,
    test_set: &BTreeSet<Symbol>,
) -> ConvergenceReport {
    let passes = |t: &Seq| match x.len() {
        Length::Infinite => match (t.prefix(depth), x.prefix(depth)) {
            (Some(a), Some(b)) => a == b,
            _ => false,
        },
        Length::Finite(l) => {
            let base = x.as_finite().expect("finite");
            t.starts_with(base) && t.at(l + 1).is_none_or(|s| !test_set.contains(s))
        }
    };
    let failing_tail_start = xs.iter().rposition(|t| !passes(t)).map_or(0, |i| i + 1);
    ConvergenceReport {
        holds: true,
        witness: failing_tail_start,
        verified_tail: xs.len() - failing_tail_start,
    }
}
