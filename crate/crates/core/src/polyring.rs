//! Sparse multivariate polynomials over ℤ in `x_1, ..., x_n`, the action of
//! `W_n` by signed permutations of the variables, and divided differences.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use smallvec::SmallVec;
use thiserror::Error;

use crate::weyl::{SignedPermutation, Word};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("rank mismatch: {0} vs {1}")]
    RankMismatch(usize, usize),
    #[error("operator index {index} is out of range for rank {rank}")]
    IndexOutOfRange { index: usize, rank: usize },
    #[error("word {0} is not reduced")]
    NotReduced(String),
    #[error("bad coefficient {0:?}")]
    BadCoefficient(String),
    #[error("exponent vector of length {got} for rank {rank}")]
    BadExponent { got: usize, rank: usize },
}

/// Exponent vector, ordered graded-lexicographically with `x_1 > x_2 > ⋯`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Monomial(SmallVec<[u32; 6]>);

impl Monomial {
    pub fn new(exps: &[u32]) -> Self {
        Self(SmallVec::from_slice(exps))
    }

    pub fn exps(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0.as_slice())
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MultiPoly {
    nvars: usize,
    terms: BTreeMap<Monomial, BigInt>,
}

/// One entry of the JSON polynomial schema.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyTerm {
    pub coeff: String,
    pub exp: Vec<u32>,
}

impl MultiPoly {
    pub fn zero(n: usize) -> Self {
        Self { nvars: n, terms: BTreeMap::new() }
    }

    pub fn one(n: usize) -> Self {
        Self::constant(n, BigInt::one())
    }

    pub fn constant(n: usize, c: impl Into<BigInt>) -> Self {
        Self::monomial(n, &vec![0; n], c)
    }

    /// The variable `x_i`, with `i` counted from 1.
    pub fn var(n: usize, i: usize) -> Self {
        assert!((1..=n).contains(&i), "variable x{i} out of range for rank {n}");
        let mut e = vec![0; n];
        e[i - 1] = 1;
        Self::monomial(n, &e, 1)
    }

    pub fn monomial(n: usize, exps: &[u32], c: impl Into<BigInt>) -> Self {
        assert_eq!(exps.len(), n);
        let mut p = Self::zero(n);
        p.add_term(Monomial::new(exps), c.into());
        p
    }

    /// `e_k(x_1, ..., x_n)`.
    pub fn elementary(k: usize, n: usize) -> Self {
        let mut p = Self::zero(n);
        if k > n {
            return p;
        }
        for mask in 0u64..(1 << n) {
            if mask.count_ones() as usize == k {
                let e: Vec<u32> = (0..n).map(|i| (mask >> i & 1) as u32).collect();
                p.add_term(Monomial::new(&e), BigInt::one());
            }
        }
        p
    }

    /// `e_k(x_1², ..., x_n²)`.
    pub fn elementary_squares(k: usize, n: usize) -> Self {
        let mut p = Self::zero(n);
        for (m, c) in Self::elementary(k, n).terms {
            let e: Vec<u32> = m.exps().iter().map(|x| 2 * x).collect();
            p.add_term(Monomial::new(&e), c);
        }
        p
    }

    /// `x^δ = x_1^{n-1} x_2^{n-2} ⋯ x_{n-1}`.
    pub fn staircase_monomial(n: usize) -> Self {
        let e: Vec<u32> = (0..n).map(|i| (n - 1 - i) as u32).collect();
        Self::monomial(n, &e, 1)
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in descending graded-lex order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigInt)> {
        self.terms.iter().rev()
    }

    pub fn coeff(&self, exps: &[u32]) -> BigInt {
        self.terms.get(&Monomial::new(exps)).cloned().unwrap_or_default()
    }

    pub fn constant_term(&self) -> BigInt {
        self.coeff(&vec![0; self.nvars])
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().next_back().map(Monomial::degree)
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut it = self.terms.keys().map(Monomial::degree);
        match it.next() {
            None => true,
            Some(d) => it.all(|e| e == d),
        }
    }

    pub fn homogeneous_part(&self, d: u32) -> Self {
        Self {
            nvars: self.nvars,
            terms: self.terms.iter().filter(|(m, _)| m.degree() == d).map(|(m, c)| (m.clone(), c.clone())).collect(),
        }
    }

    pub fn add_term(&mut self, m: Monomial, c: BigInt) {
        debug_assert_eq!(m.0.len(), self.nvars);
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn assert_same_rank(&self, other: &Self) {
        assert_eq!(self.nvars, other.nvars, "polynomial rank mismatch");
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        Self { nvars: self.nvars, terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect() }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut result = Self::one(self.nvars);
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                result = &result * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// `f(-x_1, ..., -x_n)`.
    pub fn negate_variables(&self) -> Self {
        Self {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), if m.degree() % 2 == 1 { -c } else { c.clone() }))
                .collect(),
        }
    }

    /// `(w f)(x) = f(w(x_1), ..., w(x_n))` where `w(x_k) = ±x_{|w_k|}`.
    ///
    /// This is a left action: `u(v f) = (uv) f`.
    pub fn act(&self, w: &SignedPermutation) -> Result<Self, PolyError> {
        if w.rank() != self.nvars {
            return Err(PolyError::RankMismatch(w.rank(), self.nvars));
        }
        let mut out = Self::zero(self.nvars);
        for (m, c) in &self.terms {
            let mut e = vec![0; self.nvars];
            let mut odd = false;
            for (k, &wk) in w.entries().iter().enumerate() {
                e[wk.unsigned_abs() as usize - 1] = m.0[k];
                if wk < 0 && m.0[k] % 2 == 1 {
                    odd = !odd;
                }
            }
            out.add_term(Monomial::new(&e), if odd { -c } else { c.clone() });
        }
        Ok(out)
    }

    /// The divided difference `∂_i`.
    ///
    /// Evaluated monomial by monomial through the closed form of the quotient,
    /// so no division is ever carried out.
    pub fn divided_difference(&self, i: usize) -> Result<Self, PolyError> {
        if i >= self.nvars {
            return Err(PolyError::IndexOutOfRange { index: i, rank: self.nvars });
        }
        let mut out = Self::zero(self.nvars);
        for (m, c) in &self.terms {
            if i == 0 {
                let p = m.0[0];
                if p % 2 == 1 {
                    let mut e = m.0.clone();
                    e[0] -= 1;
                    out.add_term(Monomial(e), c.clone());
                }
                continue;
            }
            let (p, q) = (m.0[i - 1], m.0[i]);
            if p == q {
                continue;
            }
            let (lo, hi, c) = if p > q { (q, p, c.clone()) } else { (p, q, -c) };
            for k in 0..hi - lo {
                let mut e = m.0.clone();
                e[i - 1] = lo + k;
                e[i] = hi - 1 - k;
                out.add_term(Monomial(e), c.clone());
            }
        }
        Ok(out)
    }

    /// `∂_{a_1} ∘ ⋯ ∘ ∂_{a_r}` for a reduced word, so `∂_{a_r}` acts first.
    pub fn divided_difference_word(&self, word: &Word) -> Result<Self, PolyError> {
        for &a in word.letters() {
            if a >= self.nvars {
                return Err(PolyError::IndexOutOfRange { index: a, rank: self.nvars });
            }
        }
        if !word.is_reduced(self.nvars).expect("letters checked") {
            return Err(PolyError::NotReduced(word.to_string()));
        }
        let mut f = self.clone();
        for &a in word.letters().iter().rev() {
            if f.is_zero() {
                break;
            }
            f = f.divided_difference(a)?;
        }
        Ok(f)
    }

    /// `∂_w` for a group element, through its first reduced word.
    pub fn divided_difference_element(&self, w: &SignedPermutation) -> Result<Self, PolyError> {
        if w.rank() != self.nvars {
            return Err(PolyError::RankMismatch(w.rank(), self.nvars));
        }
        self.divided_difference_word(&w.first_reduced_word())
    }

    /// Sets `x_{m+1} = ⋯ = x_n = 0` and views the result in rank `m`.
    pub fn truncate(&self, m: usize) -> Self {
        assert!(m <= self.nvars);
        let mut out = Self::zero(m);
        for (mono, c) in &self.terms {
            if mono.0[m..].iter().all(|&e| e == 0) {
                out.add_term(Monomial::new(&mono.0[..m]), c.clone());
            }
        }
        out
    }

    /// The same polynomial viewed in rank `m ≥ n`.
    pub fn extend(&self, m: usize) -> Self {
        assert!(m >= self.nvars);
        let mut out = Self::zero(m);
        for (mono, c) in &self.terms {
            let mut e = mono.0.to_vec();
            e.resize(m, 0);
            out.add_term(Monomial::new(&e), c.clone());
        }
        out
    }

    /// Evaluates at integer points.
    pub fn evaluate(&self, point: &[BigInt]) -> BigInt {
        assert_eq!(point.len(), self.nvars);
        let mut total = BigInt::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (x, &e) in point.iter().zip(m.0.iter()) {
                t *= num_traits::pow(x.clone(), e as usize);
            }
            total += t;
        }
        total
    }

    /// Substitutes `x_i ↦ images[i-1]` inside any commutative ring.
    pub fn substitute<R, F>(&self, images: &[R], from_int: F) -> R
    where
        R: Clone + for<'a> Add<&'a R, Output = R> + for<'a> Mul<&'a R, Output = R>,
        F: Fn(&BigInt) -> R,
    {
        assert_eq!(images.len(), self.nvars);
        let mut powers: Vec<Vec<R>> = images.iter().map(|x| vec![from_int(&BigInt::one()), x.clone()]).collect();
        let mut total = from_int(&BigInt::zero());
        for (m, c) in &self.terms {
            let mut t = from_int(c);
            for (i, &e) in m.0.iter().enumerate() {
                while powers[i].len() <= e as usize {
                    let next = powers[i].last().unwrap().clone() * &images[i];
                    powers[i].push(next);
                }
                if e > 0 {
                    t = t * &powers[i][e as usize];
                }
            }
            total = total + &t;
        }
        total
    }

    pub fn to_terms(&self) -> Vec<PolyTerm> {
        self.terms().map(|(m, c)| PolyTerm { coeff: c.to_string(), exp: m.0.to_vec() }).collect()
    }

    /// Reads the JSON schema back. Rational coefficients must be integral.
    pub fn from_terms(n: usize, terms: &[PolyTerm]) -> Result<Self, PolyError> {
        let mut p = Self::zero(n);
        for t in terms {
            if t.exp.len() != n {
                return Err(PolyError::BadExponent { got: t.exp.len(), rank: n });
            }
            let c = parse_integer_coefficient(&t.coeff)?;
            p.add_term(Monomial::new(&t.exp), c);
        }
        Ok(p)
    }
}

fn parse_integer_coefficient(s: &str) -> Result<BigInt, PolyError> {
    let bad = || PolyError::BadCoefficient(s.to_string());
    match s.split_once('/') {
        None => s.trim().parse().map_err(|_| bad()),
        Some((a, b)) => {
            let a: BigInt = a.trim().parse().map_err(|_| bad())?;
            let b: BigInt = b.trim().parse().map_err(|_| bad())?;
            if b.is_zero() || !(&a % &b).is_zero() {
                return Err(bad());
            }
            Ok(a / b)
        }
    }
}

impl Serialize for MultiPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_terms().serialize(s)
    }
}

impl fmt::Display for MultiPoly {
    /// Renders as `x1^2*x2 - 3*x3 + 1`, which the expression parser reads back.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (idx, (m, c)) in self.terms().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if idx == 0 {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            let vars: Vec<String> = m
                .0
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, &e)| if e == 1 { format!("x{}", i + 1) } else { format!("x{}^{}", i + 1, e) })
                .collect();
            if vars.is_empty() {
                write!(f, "{a}")?;
            } else if a.is_one() {
                f.write_str(&vars.join("*"))?;
            } else {
                write!(f, "{a}*{}", vars.join("*"))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MultiPoly[{}]({self})", self.nvars)
    }
}

impl<'a> Add<&'a MultiPoly> for &MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: &'a MultiPoly) -> MultiPoly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl<'a> Add<&'a MultiPoly> for MultiPoly {
    type Output = MultiPoly;
    fn add(mut self, rhs: &'a MultiPoly) -> MultiPoly {
        self += rhs;
        self
    }
}

impl Add for MultiPoly {
    type Output = MultiPoly;
    fn add(mut self, rhs: MultiPoly) -> MultiPoly {
        self += &rhs;
        self
    }
}

impl<'a> AddAssign<&'a MultiPoly> for MultiPoly {
    fn add_assign(&mut self, rhs: &'a MultiPoly) {
        self.assert_same_rank(rhs);
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), c.clone());
        }
    }
}

impl<'a> SubAssign<&'a MultiPoly> for MultiPoly {
    fn sub_assign(&mut self, rhs: &'a MultiPoly) {
        self.assert_same_rank(rhs);
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), -c);
        }
    }
}

impl<'a> Sub<&'a MultiPoly> for &MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: &'a MultiPoly) -> MultiPoly {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Sub for MultiPoly {
    type Output = MultiPoly;
    fn sub(mut self, rhs: MultiPoly) -> MultiPoly {
        self -= &rhs;
        self
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        MultiPoly { nvars: self.nvars, terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect() }
    }
}

impl Neg for MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        -&self
    }
}

impl<'a> Mul<&'a MultiPoly> for &MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: &'a MultiPoly) -> MultiPoly {
        self.assert_same_rank(rhs);
        let mut out = MultiPoly::zero(self.nvars);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                let e: SmallVec<[u32; 6]> = ma.0.iter().zip(mb.0.iter()).map(|(x, y)| x + y).collect();
                out.add_term(Monomial(e), ca * cb);
            }
        }
        out
    }
}

impl<'a> Mul<&'a MultiPoly> for MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: &'a MultiPoly) -> MultiPoly {
        &self * rhs
    }
}

impl Mul for MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: MultiPoly) -> MultiPoly {
        &self * &rhs
    }
}
