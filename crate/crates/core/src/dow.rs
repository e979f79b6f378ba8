//! Double occurrence words (DOWs) and their repeat/return reductions.
//!
//! A [`Word`] is an arbitrary finite sequence of positive symbols. A [`Dow`]
//! is a word in which every symbol occurs exactly twice, stored in ascending
//! order: the first occurrences read `1, 2, 3, ...` from left to right. Two
//! words that differ by a renaming of symbols share the same `Dow`, so class
//! equality is plain sequence equality.
//!
//! Text form: digit strings such as `1234523541` when every symbol is at most
//! 9, comma-separated integers (`1,2,10,...`) otherwise. The empty word is
//! written as the empty string or `e`.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::ops::Range;
use std::str::FromStr;

use crate::error::{Error, Result};

/// A finite sequence of positive integer symbols.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(Vec<u32>);

impl Word {
    pub fn new(symbols: Vec<u32>) -> Self {
        Word(symbols)
    }

    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn symbols(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn reversed(&self) -> Word {
        Word(self.0.iter().rev().copied().collect())
    }

    /// The set of symbols used by the word.
    pub fn alphabet(&self) -> BTreeSet<u32> {
        self.0.iter().copied().collect()
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut symbols = self.0.clone();
        symbols.extend_from_slice(&other.0);
        Word(symbols)
    }
}

impl From<Vec<u32>> for Word {
    fn from(symbols: Vec<u32>) -> Self {
        Word(symbols)
    }
}

impl FromStr for Word {
    type Err = Error;

    fn from_str(input: &str) -> Result<Self> {
        parse_symbols(input).map(Word)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_compact(&self.0))
    }
}

fn parse_symbols(input: &str) -> Result<Vec<u32>> {
    let trimmed = input.trim();
    if trimmed.is_empty() || trimmed == "e" || trimmed == "ε" {
        return Ok(Vec::new());
    }
    let err = |reason: &str| Error::ParseWord {
        input: input.to_string(),
        reason: reason.to_string(),
    };
    if trimmed.contains(',') {
        trimmed
            .split(',')
            .map(|part| {
                let part = part.trim();
                match part.parse::<u32>() {
                    Ok(0) => Err(err("symbols must be positive")),
                    Ok(s) => Ok(s),
                    Err(_) => Err(err("expected a comma-separated list of integers")),
                }
            })
            .collect()
    } else {
        trimmed
            .chars()
            .map(|c| match c.to_digit(10) {
                Some(0) => Err(err("symbols must be positive")),
                Some(d) => Ok(d),
                None => Err(err("expected digits 1-9 or a comma-separated list")),
            })
            .collect()
    }
}

fn format_compact(symbols: &[u32]) -> String {
    if symbols.is_empty() {
        "e".to_string()
    } else if symbols.iter().all(|&s| s <= 9) {
        symbols.iter().map(|s| s.to_string()).collect()
    } else {
        format_comma(symbols)
    }
}

pub fn format_comma(symbols: &[u32]) -> String {
    if symbols.is_empty() {
        return "e".to_string();
    }
    symbols
        .iter()
        .map(|s| s.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

/// A double occurrence word in ascending-order canonical form.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Dow(Vec<u32>);

impl Dow {
    pub fn empty() -> Self {
        Dow(Vec::new())
    }

    /// Validates that every symbol occurs exactly twice and returns the
    /// ascending-order representative.
    pub fn normalize(symbols: &[u32]) -> Result<Dow> {
        let mut counts: HashMap<u32, usize> = HashMap::new();
        for &s in symbols {
            *counts.entry(s).or_default() += 1;
        }
        if let Some((&symbol, &count)) = counts
            .iter()
            .filter(|&(_, &c)| c != 2)
            .min_by_key(|&(&s, _)| s)
        {
            return Err(Error::NotDoubleOccurrence { symbol, count });
        }
        Ok(Dow::relabel(symbols))
    }

    /// Renames symbols in order of first appearance. The input must already
    /// be double occurrence.
    pub(crate) fn relabel(symbols: &[u32]) -> Dow {
        let mut names: HashMap<u32, u32> = HashMap::with_capacity(symbols.len() / 2);
        let mut out = Vec::with_capacity(symbols.len());
        for &s in symbols {
            let next = names.len() as u32 + 1;
            out.push(*names.entry(s).or_insert(next));
        }
        Dow(out)
    }

    pub fn symbols(&self) -> &[u32] {
        &self.0
    }

    /// Number of distinct symbols, `|w| / 2`.
    pub fn size(&self) -> usize {
        self.0.len() / 2
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

    /// Comma-separated form, `e` for the empty word.
    pub fn to_comma_string(&self) -> String {
        format_comma(&self.0)
    }
}

impl FromStr for Dow {
    type Err = Error;

    fn from_str(input: &str) -> Result<Self> {
        Dow::normalize(&parse_symbols(input)?)
    }
}

impl fmt::Display for Dow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_compact(&self.0))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FactorKind {
    /// `u ... u`
    Repeat,
    /// `u ... u^R`
    Return,
}

/// A maximal repeat or return factor together with its two occurrence
/// intervals in the host word.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Factor {
    pub letters: Vec<u32>,
    pub kind: FactorKind,
    pub first: Range<usize>,
    pub second: Range<usize>,
}

impl Factor {
    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn is_trivial(&self) -> bool {
        self.letters.len() == 1
    }
}

impl fmt::Display for Factor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_compact(&self.letters))
    }
}

/// The maximal factors of a word, in order of first occurrence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactorSet {
    pub factors: Vec<Factor>,
}

impl FactorSet {
    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Factor> {
        self.factors.iter()
    }

    pub fn contains(&self, factor: &Factor) -> bool {
        self.factors.contains(factor)
    }
}

pub fn validate_dow(w: &Word) -> Result<Dow> {
    Dow::normalize(w.symbols())
}

pub fn ascending_normalize(w: &Word) -> Result<Dow> {
    Dow::normalize(w.symbols())
}

pub fn reverse(d: &Dow) -> Dow {
    let rev: Vec<u32> = d.0.iter().rev().copied().collect();
    Dow::relabel(&rev)
}

pub fn is_palindrome(d: &Dow) -> bool {
    reverse(d) == *d
}

/// Concatenation of two words on disjoint alphabets.
pub fn concat_disjoint(d1: &Dow, d2: &Dow) -> Dow {
    let shift = d1.size() as u32;
    let mut symbols = d1.0.clone();
    symbols.extend(d2.0.iter().map(|s| s + shift));
    Dow::relabel(&symbols)
}

/// `positions[s]` holds the two indices of symbol `s` (symbols are 1-based).
fn occurrence_table(d: &Dow) -> Vec<(usize, usize)> {
    let mut table = vec![(usize::MAX, usize::MAX); d.size() + 1];
    for (i, &s) in d.0.iter().enumerate() {
        let slot = &mut table[s as usize];
        if slot.0 == usize::MAX {
            slot.0 = i;
        } else {
            slot.1 = i;
        }
    }
    table
}

/// Every symbol lies in exactly one maximal factor. Scanning first
/// occurrences left to right, the leftmost unclaimed symbol starts its
/// factor, which is then grown to the right in whichever mode (repeat or
/// return) its neighbour admits. At most one mode can extend any position.
pub fn maximal_factors(d: &Dow) -> Result<FactorSet> {
    if d.is_empty() {
        return Err(Error::EmptyWord);
    }
    let w = &d.0;
    let n = w.len();
    let occ = occurrence_table(d);
    let mut claimed = vec![false; d.size() + 1];
    let mut factors = Vec::new();

    for start in 0..n {
        let s = w[start] as usize;
        if claimed[s] || occ[s].0 != start {
            continue;
        }
        let partner = occ[s].1;
        let extends_repeat =
            |j: usize| start + j < partner && partner + j < n && w[start + j] == w[partner + j];
        let extends_return =
            |j: usize| j <= partner && start + j < partner - j && w[start + j] == w[partner - j];

        let (kind, len) = if extends_repeat(1) {
            let mut len = 2;
            while extends_repeat(len) {
                len += 1;
            }
            (FactorKind::Repeat, len)
        } else if extends_return(1) {
            let mut len = 2;
            while extends_return(len) {
                len += 1;
            }
            (FactorKind::Return, len)
        } else {
            (FactorKind::Repeat, 1)
        };

        let letters = w[start..start + len].to_vec();
        for &l in &letters {
            claimed[l as usize] = true;
        }
        let second = match kind {
            FactorKind::Repeat => partner..partner + len,
            FactorKind::Return => partner + 1 - len..partner + 1,
        };
        factors.push(Factor {
            letters,
            kind,
            first: start..start + len,
            second,
        });
    }
    Ok(FactorSet { factors })
}

fn delete_intervals(d: &Dow, u: &Factor) -> Dow {
    let kept: Vec<u32> =
        d.0.iter()
            .enumerate()
            .filter(|(i, _)| !u.first.contains(i) && !u.second.contains(i))
            .map(|(_, &s)| s)
            .collect();
    Dow::relabel(&kept)
}

/// Repeat or return deletion `d_u(w)` of a maximal factor.
pub fn delete_factor(d: &Dow, u: &Factor) -> Result<Dow> {
    let factors = maximal_factors(d)?;
    if !factors.contains(u) {
        return Err(Error::NotAMaximalFactor(u.to_string()));
    }
    Ok(delete_intervals(d, u))
}

/// The set `D(w)` of immediate successors, sorted lexicographically.
pub fn immediate_successors(d: &Dow) -> Vec<Dow> {
    if d.is_empty() {
        return Vec::new();
    }
    let factors = maximal_factors(d).expect("nonempty word has factors");
    let set: BTreeSet<Dow> = factors.iter().map(|u| delete_intervals(d, u)).collect();
    set.into_iter().collect()
}

/// No two maximal factors share a length.
pub fn is_squarefree(d: &Dow) -> bool {
    let Ok(factors) = maximal_factors(d) else {
        return true;
    };
    let mut lengths: Vec<usize> = factors.iter().map(Factor::len).collect();
    lengths.sort_unstable();
    lengths.windows(2).all(|p| p[0] != p[1])
}

/// Inserts the single-occurrence word `v` inside both occurrences of the
/// factor `u = u1 u2` of the host `x u y u z` (repeat) or `x u y u^R z`
/// (return), producing `x u1 v u2 y u1 v u2 z` or
/// `x u1 v u2 y u2^R v^R u1^R z`.
pub fn build_insertion(
    x: &Word,
    y: &Word,
    z: &Word,
    u1: &Word,
    u2: &Word,
    v: &Word,
    kind: FactorKind,
) -> Result<Dow> {
    let u = u1.concat(u2);
    let host = match kind {
        FactorKind::Repeat => x.concat(&u).concat(y).concat(&u).concat(z),
        FactorKind::Return => x.concat(&u).concat(y).concat(&u.reversed()).concat(z),
    };
    validate_dow(&host)?;

    let host_alphabet = host.alphabet();
    if let Some(&s) = v.symbols().iter().find(|s| host_alphabet.contains(s)) {
        return Err(Error::AlphabetCollision(s));
    }

    let inner = u1.concat(v).concat(u2);
    let out = match kind {
        FactorKind::Repeat => x.concat(&inner).concat(y).concat(&inner).concat(z),
        FactorKind::Return => x
            .concat(&inner)
            .concat(y)
            .concat(&inner.reversed())
            .concat(z),
    };
    validate_dow(&out)
}

/// The tangled cord `t_n = 1 2 1 3 2 4 3 ... (n-1) (n-2) n (n-1) n`.
pub fn tangled_cord(n: usize) -> Result<Dow> {
    if n < 2 {
        return Err(Error::InvalidParameter {
            name: "n",
            value: n as i64,
            expected: "n >= 2",
        });
    }
    let n = n as u32;
    let mut symbols = vec![1, 2];
    for k in 3..=n {
        symbols.push(k - 2);
        symbols.push(k);
    }
    symbols.push(n - 1);
    symbols.push(n);
    Ok(Dow::relabel(&symbols))
}
