//! Coxeter matrices, words over the generators, Tits reduction, girth,
//! right-angled partitions and the constructive loop reducer.
//!
//! Generators are 0-based indices internally. The text format for words is
//! a comma-separated list of 1-based indices (`"1,3,1,3"`).

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// A generator index.
pub type Gen = usize;

/// Default state cap for braid-orbit canonicalization.
pub const DEFAULT_ORBIT_CAP: usize = 100_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CoxeterError {
    #[error("malformed Coxeter matrix: {0}")]
    MalformedMatrix(String),
    #[error("letter {letter} is outside the alphabet of size {size}")]
    InvalidLetter { letter: usize, size: usize },
    #[error("generator subset must be nonempty")]
    EmptySubset,
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("partition is not right-angled")]
    NotRightAngled,
    #[error("length precondition failed: l_R = {l_red} (girth {red_girth}), l_B = {l_blue} (girth {blue_girth})")]
    PreconditionLength {
        l_red: usize,
        red_girth: Order,
        l_blue: usize,
        blue_girth: Order,
    },
    #[error("word is not a loop")]
    NotALoop,
    #[error("no reduction site found in {0}")]
    NoSite(String),
    #[error("move {index} does not apply: {reason}")]
    InvalidMove { index: usize, reason: String },
    #[error("braid orbit exceeded {0} states")]
    CapExceeded(usize),
    #[error("parse error: {0}")]
    Parse(String),
}

/// An entry of a Coxeter matrix, also used for girths: a positive integer or infinity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Order {
    Finite(u64),
    Infinite,
}

impl Order {
    pub fn finite(self) -> Option<u64> {
        match self {
            Order::Finite(n) => Some(n),
            Order::Infinite => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, Order::Infinite)
    }

    /// `true` iff `n < self`.
    pub fn exceeds(self, n: usize) -> bool {
        match self {
            Order::Finite(m) => (n as u64) < m,
            Order::Infinite => true,
        }
    }
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Order::Finite(n) => write!(f, "{n}"),
            Order::Infinite => write!(f, "inf"),
        }
    }
}

// JSON: integers, `null` for infinity.
impl Serialize for Order {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Order::Finite(n) => s.serialize_some(n),
            Order::Infinite => s.serialize_none(),
        }
    }
}

impl<'de> Deserialize<'de> for Order {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v: Option<u64> = Option::deserialize(d)?;
        Ok(v.map_or(Order::Infinite, Order::Finite))
    }
}

/// A symmetric Coxeter matrix with unit diagonal.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CoxeterMatrix {
    size: usize,
    entries: Vec<Order>,
}

impl CoxeterMatrix {
    pub fn new(rows: Vec<Vec<Order>>) -> Result<Self, CoxeterError> {
        let size = rows.len();
        if size == 0 {
            return Err(CoxeterError::MalformedMatrix("empty matrix".into()));
        }
        let mut entries = Vec::with_capacity(size * size);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != size {
                return Err(CoxeterError::MalformedMatrix(format!(
                    "row {} has length {}, expected {size}",
                    i + 1,
                    row.len()
                )));
            }
            entries.extend_from_slice(row);
        }
        let m = CoxeterMatrix { size, entries };
        for s in 0..size {
            if m.m(s, s) != Order::Finite(1) {
                return Err(CoxeterError::MalformedMatrix(format!(
                    "diagonal entry ({0},{0}) is {1}, expected 1",
                    s + 1,
                    m.m(s, s)
                )));
            }
            for t in 0..size {
                if m.m(s, t) != m.m(t, s) {
                    return Err(CoxeterError::MalformedMatrix(format!(
                        "asymmetric entries at ({},{})",
                        s + 1,
                        t + 1
                    )));
                }
                if s != t {
                    if let Order::Finite(v) = m.m(s, t) {
                        if v < 2 {
                            return Err(CoxeterError::MalformedMatrix(format!(
                                "off-diagonal entry ({},{}) = {v} < 2",
                                s + 1,
                                t + 1
                            )));
                        }
                    }
                }
            }
        }
        Ok(m)
    }

    /// The matrix of W(k): six generators indexed by Z/6, with m = 2 for
    /// neighbours, k at distance two and infinity for opposite generators.
    pub fn w_k(k: u64) -> Self {
        let mut entries = Vec::with_capacity(36);
        for i in 0..6 {
            for j in 0..6 {
                entries.push(match (6 + j - i) % 6 {
                    0 => Order::Finite(1),
                    1 | 5 => Order::Finite(2),
                    2 | 4 => Order::Finite(k),
                    _ => Order::Infinite,
                });
            }
        }
        CoxeterMatrix { size: 6, entries }
    }

    /// Returns `Some(k)` if this is the matrix of W(k).
    pub fn detect_wk(&self) -> Option<u64> {
        if self.size != 6 {
            return None;
        }
        let k = self.m(0, 2).finite()?;
        (k >= 2 && *self == Self::w_k(k)).then_some(k)
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn m(&self, s: Gen, t: Gen) -> Order {
        self.entries[s * self.size + t]
    }

    pub fn rows(&self) -> Vec<Vec<Order>> {
        self.entries.chunks(self.size).map(|r| r.to_vec()).collect()
    }

    fn check_letters(&self, letters: &[Gen]) -> Result<(), CoxeterError> {
        match letters.iter().find(|&&l| l >= self.size) {
            Some(&letter) => Err(CoxeterError::InvalidLetter {
                letter,
                size: self.size,
            }),
            None => Ok(()),
        }
    }
}

impl<'de> Deserialize<'de> for CoxeterMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            entries: Vec<Vec<Order>>,
        }
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Either {
            Rows(Vec<Vec<Order>>),
            Wrapped(Raw),
        }
        let rows = match Either::deserialize(d)? {
            Either::Rows(r) => r,
            Either::Wrapped(r) => r.entries,
        };
        CoxeterMatrix::new(rows).map_err(serde::de::Error::custom)
    }
}

/// A finite word over the generators.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(pub Vec<Gen>);

impl Word {
    pub fn new(letters: Vec<Gen>) -> Self {
        Word(letters)
    }

    /// Builds a word from 1-based generator numbers.
    pub fn from_one_based(letters: &[usize]) -> Self {
        Word(letters.iter().map(|&l| l - 1).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[Gen] {
        &self.0
    }

    pub fn reversed(&self) -> Word {
        Word(self.0.iter().rev().copied().collect())
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    /// Number of letters lying in `set`.
    pub fn count_in(&self, set: &[Gen]) -> usize {
        self.0.iter().filter(|l| set.contains(l)).count()
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|l| (l + 1).to_string()).collect();
        f.write_str(&parts.join(","))
    }
}

impl FromStr for Word {
    type Err = CoxeterError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut letters = Vec::new();
        for tok in s.split(|c: char| c == ',' || c.is_whitespace()) {
            let tok = tok.trim().trim_start_matches('s');
            if tok.is_empty() {
                continue;
            }
            let n: usize = tok
                .parse()
                .map_err(|_| CoxeterError::Parse(format!("bad letter {tok:?}")))?;
            if n == 0 {
                return Err(CoxeterError::Parse("letters are 1-based".into()));
            }
            letters.push(n - 1);
        }
        Ok(Word(letters))
    }
}

impl Serialize for Word {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Word {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A word modulo cyclic rotation, stored in its lexicographically least rotation.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CyclicWord(Vec<Gen>);

impl CyclicWord {
    pub fn new(letters: Vec<Gen>) -> Self {
        CyclicWord(least_rotation(letters))
    }

    pub fn letters(&self) -> &[Gen] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_word(&self) -> Word {
        Word(self.0.clone())
    }

    fn at(&self, i: usize) -> Gen {
        self.0[i % self.0.len()]
    }
}

impl From<Word> for CyclicWord {
    fn from(w: Word) -> Self {
        CyclicWord::new(w.0)
    }
}

impl fmt::Display for CyclicWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        Word(self.0.clone()).fmt(f)
    }
}

fn least_rotation(v: Vec<Gen>) -> Vec<Gen> {
    let n = v.len();
    if n < 2 {
        return v;
    }
    let best = (0..n)
        .min_by(|&a, &b| {
            (0..n)
                .map(|i| v[(a + i) % n])
                .cmp((0..n).map(|i| v[(b + i) % n]))
        })
        .unwrap_or(0);
    let mut out = v[best..].to_vec();
    out.extend_from_slice(&v[..best]);
    out
}

// ---------------------------------------------------------------------------
// Girth, partitions, sign and support
// ---------------------------------------------------------------------------

/// Girth of the parabolic subgroup W_I: `2·min m(s,t)` over distinct `s,t ∈ I`.
pub fn validate_and_girth(m: &CoxeterMatrix, subset: &[Gen]) -> Result<Order, CoxeterError> {
    if subset.is_empty() {
        return Err(CoxeterError::EmptySubset);
    }
    m.check_letters(subset)?;
    Ok(girth_unchecked(m, subset))
}

fn girth_unchecked(m: &CoxeterMatrix, subset: &[Gen]) -> Order {
    let mut best = Order::Infinite;
    for (a, &s) in subset.iter().enumerate() {
        for &t in &subset[a + 1..] {
            if s != t {
                if let Order::Finite(v) = m.m(s, t) {
                    best = best.min(Order::Finite(2 * v));
                }
            }
        }
    }
    best
}

/// A partition S = R ⊔ B of the generators into red and blue letters.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Partition {
    pub red: Vec<Gen>,
    pub blue: Vec<Gen>,
}

impl Partition {
    pub fn new(red: Vec<Gen>, blue: Vec<Gen>, size: usize) -> Result<Self, CoxeterError> {
        let mut seen = vec![false; size];
        for &g in red.iter().chain(blue.iter()) {
            if g >= size {
                return Err(CoxeterError::InvalidLetter { letter: g, size });
            }
            if seen[g] {
                return Err(CoxeterError::InvalidPartition(format!(
                    "generator {} appears twice",
                    g + 1
                )));
            }
            seen[g] = true;
        }
        if let Some(g) = seen.iter().position(|&b| !b) {
            return Err(CoxeterError::InvalidPartition(format!(
                "generator {} is not covered",
                g + 1
            )));
        }
        let (mut red, mut blue) = (red, blue);
        red.sort_unstable();
        blue.sort_unstable();
        Ok(Partition { red, blue })
    }

    /// Odd-numbered generators s1, s3, s5 red; even-numbered blue.
    pub fn w_k_standard() -> Self {
        Partition {
            red: vec![0, 2, 4],
            blue: vec![1, 3, 5],
        }
    }

    pub fn is_red(&self, g: Gen) -> bool {
        self.red.contains(&g)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PartitionReport {
    pub right_angled: bool,
    pub gal: bool,
    pub red_girth: Order,
    pub blue_girth: Order,
}

pub fn check_partition(m: &CoxeterMatrix, p: &Partition) -> Result<PartitionReport, CoxeterError> {
    Partition::new(p.red.clone(), p.blue.clone(), m.size())?;
    let mut right_angled = true;
    let mut gal = true;
    for &r in &p.red {
        for &b in &p.blue {
            match m.m(r, b) {
                Order::Infinite => {}
                Order::Finite(v) => {
                    right_angled &= v == 2;
                    gal &= v % 2 == 0;
                }
            }
        }
    }
    Ok(PartitionReport {
        right_angled,
        gal,
        red_girth: girth_unchecked(m, &p.red),
        blue_girth: girth_unchecked(m, &p.blue),
    })
}

/// `I(t) = {s ∈ I : m(s,t) = 2}`.
pub fn commuting_set(m: &CoxeterMatrix, subset: &[Gen], t: Gen) -> Vec<Gen> {
    subset
        .iter()
        .copied()
        .filter(|&s| s != t && m.m(s, t) == Order::Finite(2))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SignSupport {
    pub sign: i8,
    pub support: Vec<Gen>,
    /// For every generator t, the letters of the support commuting with t.
    pub commuting_sets: BTreeMap<Gen, Vec<Gen>>,
}

pub fn sign_support(w: &Word, m: &CoxeterMatrix) -> Result<SignSupport, CoxeterError> {
    let reduced = reduce(w, m, DEFAULT_ORBIT_CAP)?;
    let mut support: Vec<Gen> = reduced.word.0.clone();
    support.sort_unstable();
    support.dedup();
    let commuting_sets = (0..m.size())
        .map(|t| (t, commuting_set(m, &support, t)))
        .collect();
    Ok(SignSupport {
        sign: if w.len() % 2 == 0 { 1 } else { -1 },
        support,
        commuting_sets,
    })
}

// ---------------------------------------------------------------------------
// Tits reduction
// ---------------------------------------------------------------------------

/// One elementary reduction applied to the working word.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Reduction {
    /// Delete the equal letters at `position` and `position + 1`.
    Delete { position: usize },
    /// Replace the alternating word `w(s,t)` starting at `position` by `w(t,s)`.
    Braid { position: usize, s: usize, t: usize },
}

impl Reduction {
    pub fn apply(&self, w: &mut Vec<Gen>, m: &CoxeterMatrix) -> Result<(), CoxeterError> {
        match *self {
            Reduction::Delete { position } => {
                if position + 1 >= w.len() || w[position] != w[position + 1] {
                    return Err(CoxeterError::InvalidMove {
                        index: position,
                        reason: "no repeated letter".into(),
                    });
                }
                w.drain(position..position + 2);
            }
            Reduction::Braid { position, s, t } => {
                let len = m.m(s, t).finite().ok_or(CoxeterError::InvalidMove {
                    index: position,
                    reason: "infinite bond".into(),
                })? as usize;
                if position + len > w.len()
                    || (0..len).any(|j| w[position + j] != if j % 2 == 0 { s } else { t })
                {
                    return Err(CoxeterError::InvalidMove {
                        index: position,
                        reason: "substring is not w(s,t)".into(),
                    });
                }
                for j in 0..len {
                    w[position + j] = if j % 2 == 0 { t } else { s };
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Reduced {
    pub word: Word,
    pub trace: Vec<Reduction>,
    /// `false` when the braid orbit exceeded the cap (NONCANONICAL).
    pub canonical: bool,
}

/// Braid moves available on `w`: (position, s, t) with `w(s,t)` at position.
fn braid_moves<'a>(w: &'a [Gen], m: &'a CoxeterMatrix) -> impl Iterator<Item = (usize, Gen, Gen)> + 'a {
    (0..w.len().saturating_sub(1)).filter_map(move |p| {
        let (s, t) = (w[p], w[p + 1]);
        if s == t {
            return None;
        }
        let len = m.m(s, t).finite()? as usize;
        let fits = p + len <= w.len() && (0..len).all(|j| w[p + j] == if j % 2 == 0 { s } else { t });
        fits.then_some((p, s, t))
    })
}

fn apply_braid(w: &[Gen], p: usize, s: Gen, t: Gen, len: usize) -> Vec<Gen> {
    let mut out = w.to_vec();
    for j in 0..len {
        out[p + j] = if j % 2 == 0 { t } else { s };
    }
    out
}

/// Searches the braid orbit of `w` for a word satisfying `goal`; returns the
/// braid moves leading to it.
fn orbit_search(
    w: &[Gen],
    m: &CoxeterMatrix,
    goal: impl Fn(&[Gen]) -> bool,
) -> Option<Vec<(usize, Gen, Gen)>> {
    if goal(w) {
        return Some(Vec::new());
    }
    let mut parent: HashMap<Vec<Gen>, Option<(Vec<Gen>, (usize, Gen, Gen))>> = HashMap::new();
    parent.insert(w.to_vec(), None);
    let mut queue = VecDeque::from([w.to_vec()]);
    while let Some(cur) = queue.pop_front() {
        for (p, s, t) in braid_moves(&cur, m).collect::<Vec<_>>() {
            let len = m.m(s, t).finite().unwrap_or(0) as usize;
            let next = apply_braid(&cur, p, s, t, len);
            if parent.contains_key(&next) {
                continue;
            }
            parent.insert(next.clone(), Some((cur.clone(), (p, s, t))));
            if goal(&next) {
                let mut path = Vec::new();
                let mut node = next;
                while let Some(Some((prev, mv))) = parent.get(&node).cloned() {
                    path.push(mv);
                    node = prev;
                }
                path.reverse();
                return Some(path);
            }
            queue.push_back(next);
        }
    }
    None
}

/// Lexicographically least word in the braid orbit of `w`.
pub fn canonical_form(w: &Word, m: &CoxeterMatrix, cap: usize) -> Result<Word, CoxeterError> {
    let mut seen: std::collections::HashSet<Vec<Gen>> = std::collections::HashSet::new();
    seen.insert(w.0.clone());
    let mut queue = VecDeque::from([w.0.clone()]);
    let mut best = w.0.clone();
    while let Some(cur) = queue.pop_front() {
        for (p, s, t) in braid_moves(&cur, m).collect::<Vec<_>>() {
            let len = m.m(s, t).finite().unwrap_or(0) as usize;
            let next = apply_braid(&cur, p, s, t, len);
            if seen.insert(next.clone()) {
                if seen.len() > cap {
                    return Err(CoxeterError::CapExceeded(cap));
                }
                if next < best {
                    best = next.clone();
                }
                queue.push_back(next);
            }
        }
    }
    Ok(Word(best))
}

/// All words in the braid orbit of `w` (uncapped; intended for short words).
pub fn braid_orbit(w: &Word, m: &CoxeterMatrix) -> Vec<Word> {
    let mut seen = std::collections::BTreeSet::new();
    seen.insert(w.0.clone());
    let mut queue = VecDeque::from([w.0.clone()]);
    while let Some(cur) = queue.pop_front() {
        for (p, s, t) in braid_moves(&cur, m).collect::<Vec<_>>() {
            let len = m.m(s, t).finite().unwrap_or(0) as usize;
            let next = apply_braid(&cur, p, s, t, len);
            if seen.insert(next.clone()) {
                queue.push_back(next);
            }
        }
    }
    seen.into_iter().map(Word).collect()
}

/// Reduces `w` by elementary reductions.
///
/// Letters are appended one at a time to a reduced prefix. By the exchange
/// condition `v·s` is shorter than `v` exactly when some reduced expression
/// of `v` ends in `s`, and all reduced expressions of `v` lie in one braid
/// orbit, so an orbit search decides each step.
pub fn reduce(w: &Word, m: &CoxeterMatrix, search_cap: usize) -> Result<Reduced, CoxeterError> {
    m.check_letters(&w.0)?;
    let mut cur: Vec<Gen> = Vec::with_capacity(w.len());
    let mut trace = Vec::new();
    for &s in &w.0 {
        match orbit_search(&cur, m, |v| v.last() == Some(&s)) {
            Some(path) => {
                for (p, a, b) in path {
                    let len = m.m(a, b).finite().unwrap_or(0) as usize;
                    cur = apply_braid(&cur, p, a, b, len);
                    trace.push(Reduction::Braid { position: p, s: a, t: b });
                }
                trace.push(Reduction::Delete {
                    position: cur.len() - 1,
                });
                cur.pop();
            }
            None => cur.push(s),
        }
    }
    let reduced = Word(cur);
    let (word, canonical) = match canonical_form(&reduced, m, search_cap) {
        Ok(c) => (c, true),
        Err(_) => (reduced, false),
    };
    Ok(Reduced {
        word,
        trace,
        canonical,
    })
}

/// Bruhat length of the element represented by `w`.
pub fn bruhat_length(w: &Word, m: &CoxeterMatrix) -> Result<usize, CoxeterError> {
    Ok(reduce(w, m, 1)?.word.len())
}

/// Decides whether words represent the identity.
pub trait WordOracle {
    fn is_identity(&self, w: &[Gen]) -> bool;
}

impl WordOracle for CoxeterMatrix {
    fn is_identity(&self, w: &[Gen]) -> bool {
        reduce(&Word(w.to_vec()), self, 1).is_ok_and(|r| r.word.is_empty())
    }
}

// ---------------------------------------------------------------------------
// Loop reduction in the Cayley complex
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum MoveKind {
    /// Backtrack `tt` removed from the loop.
    DeleteTt,
    /// `s u s` replaced by `u` across the rectangle of commuting squares.
    SquareSus,
}

/// One homotopy move on a cyclic word; `position` indexes the canonical rotation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomotopyMove {
    pub kind: MoveKind,
    pub position: usize,
    /// 1-based letter `s` of a square move (the repeated letter for a deletion).
    #[serde(with = "one_based")]
    pub s: Gen,
    pub u: Word,
}

pub(crate) mod one_based {
    use super::Gen;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(g: &Gen, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_u64(*g as u64 + 1)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Gen, D::Error> {
        let v = u64::deserialize(d)?;
        if v == 0 {
            return Err(serde::de::Error::custom("letters are 1-based"));
        }
        Ok(v as usize - 1)
    }
}

impl HomotopyMove {
    /// Applies the move; the result is re-canonicalized.
    pub fn apply(&self, w: &CyclicWord, m: &CoxeterMatrix) -> Result<CyclicWord, CoxeterError> {
        let n = w.len();
        let bad = |reason: &str| CoxeterError::InvalidMove {
            index: self.position,
            reason: reason.to_string(),
        };
        if self.position >= n {
            return Err(bad("position out of range"));
        }
        let rotated: Vec<Gen> = (0..n).map(|i| w.at(self.position + i)).collect();
        let rest = match self.kind {
            MoveKind::DeleteTt => {
                if n < 2 || rotated[0] != rotated[1] || rotated[0] != self.s {
                    return Err(bad("no repeated letter at position"));
                }
                rotated[2..].to_vec()
            }
            MoveKind::SquareSus => {
                let ul = self.u.len();
                if ul + 2 > n {
                    return Err(bad("segment longer than the word"));
                }
                if rotated[0] != self.s || rotated[ul + 1] != self.s || rotated[1..=ul] != self.u.0[..] {
                    return Err(bad("substring is not s u s"));
                }
                if self.u.0.iter().any(|&r| m.m(r, self.s) != Order::Finite(2)) {
                    return Err(bad("u does not commute with s"));
                }
                let mut v = self.u.0.clone();
                v.extend_from_slice(&rotated[ul + 2..]);
                v
            }
        };
        Ok(CyclicWord::new(rest))
    }
}

/// Replays a certificate, returning every intermediate cyclic word
/// (the input first, the final word last).
pub fn replay(
    w: &CyclicWord,
    moves: &[HomotopyMove],
    m: &CoxeterMatrix,
) -> Result<Vec<CyclicWord>, CoxeterError> {
    let mut states = vec![w.clone()];
    for (index, mv) in moves.iter().enumerate() {
        let next = mv
            .apply(states.last().expect("nonempty"), m)
            .map_err(|e| match e {
                CoxeterError::InvalidMove { reason, .. } => CoxeterError::InvalidMove { index, reason },
                other => other,
            })?;
        states.push(next);
    }
    Ok(states)
}

/// Reduces a short cyclic loop to the empty word by homotopy moves in the
/// Cayley complex, for a right-angled partition.
///
/// At each step a repeated adjacent pair is deleted if one exists. Otherwise
/// the word is cut at its blue letters `u_1 s_1 … u_n s_n`, and consecutive
/// blue letters whose conjugates `s_i^{v_i}` agree are located; among those
/// pairs the shortest red segment wins, ties going to the smaller position.
pub fn reduce_loop(
    w: &CyclicWord,
    m: &CoxeterMatrix,
    p: &Partition,
    oracle: &dyn WordOracle,
) -> Result<Vec<HomotopyMove>, CoxeterError> {
    m.check_letters(w.letters())?;
    let report = check_partition(m, p)?;
    if !report.right_angled {
        return Err(CoxeterError::NotRightAngled);
    }
    let l_red = w.letters().iter().filter(|&&g| p.is_red(g)).count();
    let l_blue = w.len() - l_red;
    if !report.red_girth.exceeds(l_red) || !report.blue_girth.exceeds(l_blue) {
        return Err(CoxeterError::PreconditionLength {
            l_red,
            red_girth: report.red_girth,
            l_blue,
            blue_girth: report.blue_girth,
        });
    }
    if w.is_empty() || !oracle.is_identity(w.letters()) {
        return Err(CoxeterError::NotALoop);
    }

    let mut moves = Vec::with_capacity(w.len() / 2);
    let mut cur = w.clone();
    while !cur.is_empty() {
        let mv = find_site(&cur, m, p, oracle)?;
        cur = mv.apply(&cur, m)?;
        moves.push(mv);
    }
    Ok(moves)
}

fn find_site(
    w: &CyclicWord,
    m: &CoxeterMatrix,
    p: &Partition,
    oracle: &dyn WordOracle,
) -> Result<HomotopyMove, CoxeterError> {
    let n = w.len();
    if let Some(pos) = (0..n).find(|&i| n >= 2 && w.at(i) == w.at(i + 1)) {
        return Ok(HomotopyMove {
            kind: MoveKind::DeleteTt,
            position: pos,
            s: w.at(pos),
            u: Word::default(),
        });
    }

    let blue: Vec<usize> = (0..n).filter(|&i| !p.is_red(w.at(i))).collect();
    if blue.len() >= 2 {
        // (segment length, position, next blue position)
        let mut candidates: Vec<(usize, usize, usize)> = (0..blue.len())
            .map(|j| {
                let (a, b) = (blue[j], blue[(j + 1) % blue.len()]);
                let gap = (b + n - a) % n - 1;
                (gap, a, b)
            })
            .filter(|&(_, a, b)| w.at(a) == w.at(b))
            .collect();
        candidates.sort_unstable();
        for (gap, a, _) in candidates {
            let s = w.at(a);
            let u: Vec<Gen> = (1..=gap).map(|j| w.at(a + j)).collect();
            // s^{v} = s^{v u}  ⇔  s u s u⁻¹ = 1
            let mut probe = vec![s];
            probe.extend_from_slice(&u);
            probe.push(s);
            probe.extend(u.iter().rev());
            if !oracle.is_identity(&probe) {
                continue;
            }
            if u.iter().any(|&r| m.m(r, s) != Order::Finite(2)) {
                return Err(CoxeterError::NoSite(format!(
                    "segment {} between copies of s{} leaves the commuting set",
                    Word(u),
                    s + 1
                )));
            }
            return Ok(HomotopyMove {
                kind: MoveKind::SquareSus,
                position: a,
                s,
                u: Word(u),
            });
        }
    }
    Err(CoxeterError::NoSite(w.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn girth_examples() {
        let m = CoxeterMatrix::w_k(4);
        assert_eq!(validate_and_girth(&m, &[0, 1, 2, 3, 4, 5]).unwrap(), Order::Finite(4));
        assert_eq!(validate_and_girth(&m, &[0, 2, 4]).unwrap(), Order::Finite(8));
        assert_eq!(validate_and_girth(&m, &[0]).unwrap(), Order::Infinite);
        assert_eq!(validate_and_girth(&m, &[]), Err(CoxeterError::EmptySubset));
        assert_eq!(validate_and_girth(&m, &[0, 3]).unwrap(), Order::Infinite);
    }

    #[test]
    fn malformed_matrices() {
        use Order::*;
        let asym = vec![vec![Finite(1), Finite(3)], vec![Finite(2), Finite(1)]];
        assert!(matches!(CoxeterMatrix::new(asym), Err(CoxeterError::MalformedMatrix(_))));
        let diag = vec![vec![Finite(2), Finite(3)], vec![Finite(3), Finite(1)]];
        assert!(matches!(CoxeterMatrix::new(diag), Err(CoxeterError::MalformedMatrix(_))));
        let small = vec![vec![Finite(1), Finite(1)], vec![Finite(1), Finite(1)]];
        assert!(matches!(CoxeterMatrix::new(small), Err(CoxeterError::MalformedMatrix(_))));
        let ok = vec![vec![Finite(1), Infinite], vec![Infinite, Finite(1)]];
        assert!(CoxeterMatrix::new(ok).is_ok());
    }

    #[test]
    fn detect_wk_roundtrip() {
        for k in 3..9 {
            assert_eq!(CoxeterMatrix::w_k(k).detect_wk(), Some(k));
        }
    }

    #[test]
    fn word_text_format() {
        assert_eq!(w("1,3,1,3").0, vec![0, 2, 0, 2]);
        assert_eq!(w("s2 s1 s2").0, vec![1, 0, 1]);
        assert_eq!(w("1,3,1,3").to_string(), "1,3,1,3");
        assert!("0,1".parse::<Word>().is_err());
        assert!(w("").is_empty());
    }

    #[test]
    fn reduce_examples() {
        let m = CoxeterMatrix::w_k(4);
        let r = reduce(&w("1,1"), &m, DEFAULT_ORBIT_CAP).unwrap();
        assert!(r.word.is_empty());
        assert_eq!(r.trace, vec![Reduction::Delete { position: 0 }]);

        let r = reduce(&w("3,1,3,1"), &m, DEFAULT_ORBIT_CAP).unwrap();
        assert_eq!(r.word, w("1,3,1,3"));
        assert!(r.trace.is_empty());
        assert!(r.canonical);
        assert_eq!(braid_orbit(&w("1,3,1,3"), &m).len(), 2);

        let r = reduce(&w("2,1,2"), &m, DEFAULT_ORBIT_CAP).unwrap();
        assert_eq!(r.word, w("1"));
        // s2 s1 s2 → s1 s2 s2 → s1
        let mut v = w("2,1,2").0;
        for step in &r.trace {
            step.apply(&mut v, &m).unwrap();
        }
        assert_eq!(v, w("1").0);
        assert_eq!(r.trace.len(), 2);
    }

    #[test]
    fn trace_replays_to_reduced_word() {
        let m = CoxeterMatrix::w_k(3);
        let input = w("1,3,1,3,1,2,4,2,3,1,3");
        let r = reduce(&input, &m, DEFAULT_ORBIT_CAP).unwrap();
        let mut v = input.0.clone();
        for step in &r.trace {
            step.apply(&mut v, &m).unwrap();
        }
        assert_eq!(canonical_form(&Word(v), &m, DEFAULT_ORBIT_CAP).unwrap(), r.word);
    }

    #[test]
    fn noncanonical_when_cap_hit() {
        let m = CoxeterMatrix::w_k(4);
        let r = reduce(&w("3,1,3,1"), &m, 1).unwrap();
        assert!(!r.canonical);
        assert_eq!(r.word.len(), 4);
    }

    #[test]
    fn partition_examples() {
        for k in 3..8 {
            let m = CoxeterMatrix::w_k(k);
            let rep = check_partition(&m, &Partition::w_k_standard()).unwrap();
            assert!(rep.right_angled && rep.gal);
            assert_eq!(rep.red_girth, Order::Finite(2 * k));
            assert_eq!(rep.blue_girth, Order::Finite(2 * k));
        }
        use Order::*;
        let a2 = CoxeterMatrix::new(vec![vec![Finite(1), Finite(3)], vec![Finite(3), Finite(1)]]).unwrap();
        let rep = check_partition(&a2, &Partition::new(vec![0], vec![1], 2).unwrap()).unwrap();
        assert!(!rep.right_angled && !rep.gal);
        let rep = check_partition(&a2, &Partition::new(vec![0, 1], vec![], 2).unwrap()).unwrap();
        assert!(rep.right_angled);
        assert_eq!(rep.blue_girth, Infinite);
        assert!(Partition::new(vec![0], vec![0, 1], 2).is_err());
        assert!(Partition::new(vec![0], vec![], 2).is_err());
    }

    #[test]
    fn sign_support_examples() {
        let m = CoxeterMatrix::w_k(5);
        assert_eq!(sign_support(&w("1,2,1"), &m).unwrap().sign, -1);
        assert_eq!(sign_support(&w("1,1,2"), &m).unwrap().support, vec![1]);
        assert_eq!(commuting_set(&m, &[0, 2, 4], 1), vec![0, 2]);
    }

    #[test]
    fn reduce_loop_examples() {
        let m = CoxeterMatrix::w_k(4);
        let p = Partition::w_k_standard();
        let moves = reduce_loop(&CyclicWord::new(vec![0, 0]), &m, &p, &m).unwrap();
        assert_eq!(moves.len(), 1);
        assert_eq!((moves[0].kind, moves[0].position), (MoveKind::DeleteTt, 0));

        // s2 s1 s2 s1; canonical rotation is s1 s2 s1 s2
        let loop_ = CyclicWord::new(w("2,1,2,1").0);
        let moves = reduce_loop(&loop_, &m, &p, &m).unwrap();
        assert_eq!(moves.len(), 2);
        assert_eq!(moves[0].kind, MoveKind::SquareSus);
        assert_eq!((moves[0].s, moves[0].u.clone()), (1, w("1")));
        assert_eq!(moves[0].position, 1);
        assert_eq!((moves[1].kind, moves[1].position), (MoveKind::DeleteTt, 0));
        let states = replay(&loop_, &moves, &m).unwrap();
        assert!(states.last().unwrap().is_empty());

        let long = CyclicWord::new(w("1,3,1,3,1,3,1,3").0);
        assert!(matches!(
            reduce_loop(&long, &m, &p, &m),
            Err(CoxeterError::PreconditionLength { l_red: 8, .. })
        ));
        let not_loop = CyclicWord::new(w("1,2").0);
        assert_eq!(reduce_loop(&not_loop, &m, &p, &m), Err(CoxeterError::NotALoop));
    }

    #[test]
    fn move_json_format() {
        let mv = HomotopyMove {
            kind: MoveKind::SquareSus,
            position: 1,
            s: 1,
            u: w("1"),
        };
        let js = serde_json::to_string(&mv).unwrap();
        assert_eq!(js, r#"{"kind":"SQUARE_SUS","position":1,"s":2,"u":"1"}"#);
        let back: HomotopyMove = serde_json::from_str(&js).unwrap();
        assert_eq!(back, mv);
    }

    #[test]
    fn cyclic_words_compare_up_to_rotation() {
        assert_eq!(CyclicWord::new(vec![2, 0, 1]), CyclicWord::new(vec![0, 1, 2]));
        assert_ne!(CyclicWord::new(vec![0, 2, 1]), CyclicWord::new(vec![0, 1, 2]));
    }
}
