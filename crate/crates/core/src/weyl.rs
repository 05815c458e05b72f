//! The hyperoctahedral group `W_n` of signed permutations, its parabolic
//! subgroup `S_n`, words in the simple reflections `s_0, ..., s_{n-1}`, and
//! partitions.
//!
//! A signed permutation is stored in one-line notation with barred entries
//! written as negative integers, so `(2̄,1,3)` is `[-2, 1, 3]`. The product
//! is arranged so that `s_0` acting on the right bars the first entry and
//! `s_i` acting on the right swaps positions `i` and `i + 1`.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WeylError {
    #[error("rank mismatch: {0} vs {1}")]
    RankMismatch(usize, usize),
    #[error("not a signed permutation: {0}")]
    NotSignedPermutation(String),
    #[error("letter s{letter} is out of range for rank {rank}")]
    LetterOutOfRange { letter: usize, rank: usize },
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("partition {partition} is not strict with largest part at most {rank}")]
    NotStrictBounded { partition: String, rank: usize },
    #[error("parse error: {0}")]
    Parse(String),
}

/// An element of `W_n`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<i32>", into = "Vec<i32>")]
pub struct SignedPermutation {
    entries: Vec<i32>,
}

impl SignedPermutation {
    pub fn new(entries: Vec<i32>) -> Result<Self, WeylError> {
        let n = entries.len();
        let mut seen = vec![false; n + 1];
        for &e in &entries {
            let a = e.unsigned_abs() as usize;
            if a == 0 || a > n || seen[a] {
                return Err(WeylError::NotSignedPermutation(format!("{entries:?}")));
            }
            seen[a] = true;
        }
        Ok(Self { entries })
    }

    pub fn identity(n: usize) -> Self {
        Self { entries: (1..=n as i32).collect() }
    }

    /// The simple reflection `s_a` in `W_n`.
    pub fn generator(n: usize, a: usize) -> Result<Self, WeylError> {
        let mut w = Self::identity(n);
        w.apply_right(a)?;
        Ok(w)
    }

    /// The longest element `w_0 = (1̄, ..., n̄)`.
    pub fn longest(n: usize) -> Self {
        Self { entries: (1..=n as i32).map(|k| -k).collect() }
    }

    /// The longest element `ϖ_0 = (n, ..., 1)` of `S_n`.
    pub fn longest_unsigned(n: usize) -> Self {
        Self { entries: (1..=n as i32).rev().collect() }
    }

    /// Evaluates a word as `((e·s_{a_1})·s_{a_2})⋯`.
    pub fn from_word(n: usize, word: &Word) -> Result<Self, WeylError> {
        let mut w = Self::identity(n);
        for &a in word.letters() {
            w.apply_right(a)?;
        }
        Ok(w)
    }

    pub fn rank(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[i32] {
        &self.entries
    }

    pub fn is_identity(&self) -> bool {
        self.entries.iter().enumerate().all(|(i, &e)| e == i as i32 + 1)
    }

    /// True when no entry is barred, i.e. the element lies in `S_n`.
    pub fn is_unsigned(&self) -> bool {
        self.entries.iter().all(|&e| e > 0)
    }

    fn check_letter(&self, a: usize) -> Result<(), WeylError> {
        if a >= self.rank() {
            return Err(WeylError::LetterOutOfRange { letter: a, rank: self.rank() });
        }
        Ok(())
    }

    /// In-place right multiplication by `s_a`.
    pub fn apply_right(&mut self, a: usize) -> Result<(), WeylError> {
        self.check_letter(a)?;
        if a == 0 {
            self.entries[0] = -self.entries[0];
        } else {
            self.entries.swap(a - 1, a);
        }
        Ok(())
    }

    /// In-place left multiplication by `s_a`, which acts on values.
    pub fn apply_left(&mut self, a: usize) -> Result<(), WeylError> {
        self.check_letter(a)?;
        for e in self.entries.iter_mut() {
            let (s, v) = (e.signum(), e.abs());
            if a == 0 {
                if v == 1 {
                    *e = -*e;
                }
            } else if v == a as i32 {
                *e = s * (v + 1);
            } else if v == a as i32 + 1 {
                *e = s * (v - 1);
            }
        }
        Ok(())
    }

    pub fn mul_right(&self, a: usize) -> Result<Self, WeylError> {
        let mut w = self.clone();
        w.apply_right(a)?;
        Ok(w)
    }

    pub fn mul_left(&self, a: usize) -> Result<Self, WeylError> {
        let mut w = self.clone();
        w.apply_left(a)?;
        Ok(w)
    }

    /// The group product `self · other`, with `(uv)_k = sgn(v_k) u_{|v_k|}`.
    pub fn multiply(&self, other: &Self) -> Result<Self, WeylError> {
        if self.rank() != other.rank() {
            return Err(WeylError::RankMismatch(self.rank(), other.rank()));
        }
        let entries = other
            .entries
            .iter()
            .map(|&v| v.signum() * self.entries[v.unsigned_abs() as usize - 1])
            .collect();
        Ok(Self { entries })
    }

    pub fn inverse(&self) -> Self {
        let mut entries = vec![0; self.rank()];
        for (i, &e) in self.entries.iter().enumerate() {
            entries[e.unsigned_abs() as usize - 1] = e.signum() * (i as i32 + 1);
        }
        Self { entries }
    }

    /// Coxeter length by the type C inversion count.
    pub fn length(&self) -> usize {
        let w = &self.entries;
        let n = w.len();
        let mut len = 0;
        for i in 0..n {
            if -w[i] > w[i] {
                len += 1;
            }
            for j in i + 1..n {
                if w[i] > w[j] {
                    len += 1;
                }
                if -w[i] > w[j] {
                    len += 1;
                }
            }
        }
        len
    }

    /// Whether `ℓ(w s_a) < ℓ(w)`.
    pub fn has_right_descent(&self, a: usize) -> bool {
        if a == 0 {
            self.entries[0] < 0
        } else {
            self.entries[a - 1] > self.entries[a]
        }
    }

    /// Whether `ℓ(s_a w) < ℓ(w)`.
    pub fn has_left_descent(&self, a: usize) -> bool {
        self.inverse().has_right_descent(a)
    }

    /// Reduced words in lexicographic order, at most `limit` of them.
    ///
    /// The first letter of a reduced word is always a left descent and every
    /// left descent extends to a reduced word, so the depth-first search below
    /// never backtracks out of a dead end.
    pub fn reduced_words(&self, limit: Option<usize>) -> Vec<Word> {
        let mut out = Vec::new();
        let mut prefix = Vec::with_capacity(self.length());
        let cap = limit.unwrap_or(usize::MAX);
        reduced_words_rec(self.clone(), &mut prefix, &mut out, cap);
        out
    }

    /// The lexicographically first reduced word.
    pub fn first_reduced_word(&self) -> Word {
        self.reduced_words(Some(1)).pop().expect("every element has a reduced word")
    }

    /// The embedding `φ : W_n → S_{2n}`, as a one-line permutation of `1..=2n`.
    pub fn embed_phi(&self) -> Vec<usize> {
        let n = self.rank();
        let mut out = vec![0; 2 * n];
        for i in 1..=n {
            let v = self.entries[n - i];
            let image = if v > 0 { n + 1 - v as usize } else { n + v.unsigned_abs() as usize };
            out[i - 1] = image;
            out[2 * n - i] = 2 * n + 1 - image;
        }
        out
    }

    /// The same element viewed in `W_m` for `m ≥ n`, fixing `n+1, ..., m`.
    pub fn embed(&self, m: usize) -> Self {
        assert!(m >= self.rank());
        let mut entries = self.entries.clone();
        entries.extend(self.rank() as i32 + 1..=m as i32);
        Self { entries }
    }

    /// All elements of `W_n`, sorted by the derived order on entries.
    pub fn all(n: usize) -> Vec<Self> {
        let mut out = Vec::new();
        for perm in Self::all_unsigned(n) {
            for mask in 0u32..(1 << n) {
                let entries = perm
                    .entries
                    .iter()
                    .enumerate()
                    .map(|(i, &e)| if mask >> i & 1 == 1 { -e } else { e })
                    .collect();
                out.push(Self { entries });
            }
        }
        out.sort();
        out
    }

    /// All elements of `S_n`, sorted lexicographically.
    pub fn all_unsigned(n: usize) -> Vec<Self> {
        let mut out = Vec::new();
        let mut cur: Vec<i32> = Vec::with_capacity(n);
        let mut used = vec![false; n + 1];
        fn rec(n: usize, cur: &mut Vec<i32>, used: &mut [bool], out: &mut Vec<SignedPermutation>) {
            if cur.len() == n {
                out.push(SignedPermutation { entries: cur.clone() });
                return;
            }
            for v in 1..=n {
                if !used[v] {
                    used[v] = true;
                    cur.push(v as i32);
                    rec(n, cur, used, out);
                    cur.pop();
                    used[v] = false;
                }
            }
        }
        rec(n, &mut cur, &mut used, &mut out);
        out
    }

    /// The maximal Grassmannian element `w_λ = (λ̄_1, ..., λ̄_ℓ, λ'_k, ..., λ'_1)`.
    pub fn max_grassmannian(lambda: &Partition, n: usize) -> Result<Self, WeylError> {
        let lc = lambda.strict_complement(n)?;
        let mut entries: Vec<i32> = lambda.parts().iter().map(|&p| -(p as i32)).collect();
        entries.extend(lc.parts().iter().rev().map(|&p| p as i32));
        Self::new(entries)
    }

    /// Absolute values of the barred entries, as a strict partition.
    pub fn barred_parts(&self) -> Partition {
        Partition::new(self.entries.iter().filter(|&&e| e < 0).map(|e| e.unsigned_abs()).collect())
    }
}

fn reduced_words_rec(w: SignedPermutation, prefix: &mut Vec<usize>, out: &mut Vec<Word>, cap: usize) {
    if out.len() >= cap {
        return;
    }
    if w.is_identity() {
        out.push(Word::new(prefix.clone()));
        return;
    }
    let winv = w.inverse();
    for a in 0..w.rank() {
        if winv.has_right_descent(a) {
            prefix.push(a);
            reduced_words_rec(w.mul_left(a).unwrap(), prefix, out, cap);
            prefix.pop();
        }
    }
}

impl fmt::Display for SignedPermutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.entries.iter().map(|e| e.to_string()).collect();
        f.write_str(&parts.join(" "))
    }
}

impl fmt::Debug for SignedPermutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{self}]")
    }
}

impl FromStr for SignedPermutation {
    type Err = WeylError;

    /// Parses `"-2 1 3"` (commas are accepted as separators too).
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let entries = s
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|t| !t.is_empty())
            .map(|t| t.parse::<i32>().map_err(|_| WeylError::Parse(format!("bad entry {t:?}"))))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(entries)
    }
}

impl TryFrom<Vec<i32>> for SignedPermutation {
    type Error = WeylError;
    fn try_from(v: Vec<i32>) -> Result<Self, Self::Error> {
        Self::new(v)
    }
}

impl From<SignedPermutation> for Vec<i32> {
    fn from(w: SignedPermutation) -> Self {
        w.entries
    }
}

/// A word in the simple reflections, stored as the list of indices.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Word {
    letters: Vec<usize>,
}

impl Word {
    pub fn new(letters: Vec<usize>) -> Self {
        Self { letters }
    }

    pub fn letters(&self) -> &[usize] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn is_reduced(&self, n: usize) -> Result<bool, WeylError> {
        Ok(SignedPermutation::from_word(n, self)?.length() == self.len())
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return f.write_str("e");
        }
        let parts: Vec<String> = self.letters.iter().map(|a| format!("s{a}")).collect();
        f.write_str(&parts.join(" "))
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({self})")
    }
}

impl FromStr for Word {
    type Err = WeylError;

    /// Parses `"s2 s1 s0"`, `"s2s1s0"` or `"e"` for the empty word.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        if t.is_empty() || t == "e" {
            return Ok(Self::default());
        }
        let mut letters = Vec::new();
        for chunk in t.split(|c: char| c == 's' || c.is_whitespace() || c == ',') {
            if chunk.is_empty() {
                continue;
            }
            letters.push(chunk.parse().map_err(|_| WeylError::Parse(format!("bad word {s:?}")))?);
        }
        if letters.is_empty() {
            return Err(WeylError::Parse(format!("bad word {s:?}")));
        }
        Ok(Self { letters })
    }
}

/// A partition, stored without trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(from = "Vec<u32>", into = "Vec<u32>")]
pub struct Partition {
    parts: Vec<u32>,
}

impl Partition {
    /// Sorts the parts into weakly decreasing order and drops zeros.
    pub fn new(mut parts: Vec<u32>) -> Self {
        parts.retain(|&p| p > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Self { parts }
    }

    /// Rejects input that is not already weakly decreasing.
    pub fn from_decreasing(parts: Vec<u32>) -> Result<Self, WeylError> {
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(WeylError::InvalidPartition(format!("{parts:?} is not weakly decreasing")));
        }
        Ok(Self::new(parts))
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    pub fn weight(&self) -> u32 {
        self.parts.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn largest(&self) -> u32 {
        self.parts.first().copied().unwrap_or(0)
    }

    pub fn is_strict(&self) -> bool {
        self.parts.windows(2).all(|w| w[0] > w[1])
    }

    /// The complement `λ'` of a strict `λ ⊆ ρ_n`: the parts of `{1..n}` not in `λ`.
    pub fn strict_complement(&self, n: usize) -> Result<Self, WeylError> {
        if !self.is_strict() || self.largest() as usize > n {
            return Err(WeylError::NotStrictBounded { partition: self.to_string(), rank: n });
        }
        Ok(Self::new((1..=n as u32).filter(|k| !self.parts.contains(k)).collect()))
    }

    /// The largest part occurring at least twice, if any.
    pub fn largest_repeated_part(&self) -> Option<u32> {
        self.parts.windows(2).filter(|w| w[0] == w[1]).map(|w| w[0]).max()
    }

    /// Removes `count` copies of `part`.
    pub fn remove_part(&self, part: u32, count: usize) -> Self {
        let mut parts = self.parts.clone();
        for _ in 0..count {
            let pos = parts.iter().position(|&p| p == part).expect("part present");
            parts.remove(pos);
        }
        Self { parts }
    }

    /// The staircase `ρ_n = (n, n-1, ..., 1)`.
    pub fn staircase(n: usize) -> Self {
        Self::new((1..=n as u32).collect())
    }

    /// All partitions of `d` with largest part at most `max_part`.
    pub fn all_of_weight(d: u32, max_part: u32) -> Vec<Self> {
        let mut out = Vec::new();
        fn rec(rest: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Partition>) {
            if rest == 0 {
                out.push(Partition { parts: cur.clone() });
                return;
            }
            for p in (1..=max.min(rest)).rev() {
                cur.push(p);
                rec(rest - p, p, cur, out);
                cur.pop();
            }
        }
        rec(d, max_part, &mut Vec::new(), &mut out);
        out
    }

    /// The strict partitions with parts at most `n`, that is `𝒟_n`.
    pub fn strict_bounded(n: usize) -> Vec<Self> {
        let mut out: Vec<Self> = (0u32..(1 << n))
            .map(|mask| Self::new((1..=n as u32).filter(|k| mask >> (k - 1) & 1 == 1).collect()))
            .collect();
        out.sort();
        out
    }
}

impl Ord for Partition {
    /// Graded: by weight, then lexicographically by parts.
    fn cmp(&self, other: &Self) -> Ordering {
        self.weight().cmp(&other.weight()).then_with(|| self.parts.cmp(&other.parts))
    }
}

impl PartialOrd for Partition {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl From<Vec<u32>> for Partition {
    fn from(v: Vec<u32>) -> Self {
        Self::new(v)
    }
}

impl From<Partition> for Vec<u32> {
    fn from(p: Partition) -> Self {
        p.parts
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.parts.iter().map(|p| p.to_string()).collect();
        f.write_str(&parts.join(","))
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({self})")
    }
}

impl FromStr for Partition {
    type Err = WeylError;

    /// Parses `"3,1"`; the empty string and `"()"` give the empty partition.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim().trim_start_matches('(').trim_end_matches(')');
        let parts = t
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|x| !x.is_empty())
            .map(|x| x.parse::<u32>().map_err(|_| WeylError::Parse(format!("bad part {x:?}"))))
            .collect::<Result<Vec<_>, _>>()?;
        Self::from_decreasing(parts)
    }
}
