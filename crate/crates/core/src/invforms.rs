//! `Sp(2n)`-invariant differential forms on the symplectic flag variety.
//!
//! Forms are exterior polynomials in the scaled one-forms `ω_{ij}`, `ω̄_{ij}`
//! (`i < j`), `ω^{pq}`, `ω̄^{pq}` (`p ≤ q`) and the vertical forms dual to the
//! Cartan subalgebra. Every scaled symbol equals `γ` times a dual basis
//! vector of `sp(2n, ℂ)`, where `γ² = i/2π`. Each monomial therefore carries
//! an integer `γ`-weight: the exterior derivative lowers it by one, `dd^c`
//! restores it, and anything that reaches the user has weight zero.
//!
//! Index conventions are those of the skew-diagonal symplectic form. The
//! structure constants are computed in the block realization
//! `(A, B, C) = [[A, B], [C, -Aᵀ]]` and transported by the index bijection
//! `(i, j) ↦ (n+1-j, n+1-i)`, `(p, q) ↦ (n+1-q, n+1-p)`, `k ↦ n+1-k`. The
//! curvature formulas go through the same bijection, so curvature and `d`
//! always speak the same language.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::memo::Memo;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormError {
    #[error("rank mismatch: {0} vs {1}")]
    RankMismatch(usize, usize),
    #[error("index out of range: {0}")]
    IndexOutOfRange(String),
    #[error("vertical one-forms survive in the result; the input is not a basic form")]
    Vertical,
    #[error("exterior derivative produced a term of type ({0},{1}) from type ({2},{3})")]
    NotIntegrable(usize, usize, usize, usize),
    #[error("form is not a multiple of the top form")]
    NotTopDegree,
    #[error("form has a component of unequal holomorphic and antiholomorphic degree")]
    Unbalanced,
    #[error("form has residual gamma weight")]
    ResidualWeight,
    #[error("rank {0} is too large for the form engine")]
    RankTooLarge(usize),
}

/// A one-form of the invariant coframe.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum OneForm {
    /// `ω_{ij}` (or `ω̄_{ij}` when `bar`), `i < j`.
    Lower { i: u8, j: u8, bar: bool },
    /// `ω^{pq}` (or `ω̄^{pq}`), `p ≤ q`.
    Upper { p: u8, q: u8, bar: bool },
    /// The form dual to the `k`-th Cartan direction.
    Cartan { k: u8 },
}

impl OneForm {
    pub fn lower(i: usize, j: usize, bar: bool) -> Self {
        Self::Lower { i: i as u8, j: j as u8, bar }
    }

    /// `ω^{pq}` with the symmetric convention `ω^{pq} = ω^{qp}`.
    pub fn upper(p: usize, q: usize, bar: bool) -> Self {
        Self::Upper { p: p.min(q) as u8, q: p.max(q) as u8, bar }
    }

    pub fn is_barred(self) -> bool {
        match self {
            Self::Lower { bar, .. } | Self::Upper { bar, .. } => bar,
            Self::Cartan { .. } => false,
        }
    }

    pub fn is_vertical(self) -> bool {
        matches!(self, Self::Cartan { .. })
    }

    /// The index bijection between the block and skew-diagonal realizations.
    fn relabel(self, n: usize) -> Self {
        let r = |x: u8| (n as u8 + 1) - x;
        match self {
            Self::Lower { i, j, bar } => Self::Lower { i: r(j), j: r(i), bar },
            Self::Upper { p, q, bar } => Self::Upper { p: r(q), q: r(p), bar },
            Self::Cartan { k } => Self::Cartan { k: r(k) },
        }
    }

    fn token(self) -> String {
        match self {
            Self::Lower { i, j, bar } => format!("{}_{i}{j}", if bar { "Wb" } else { "W" }),
            Self::Upper { p, q, bar } => format!("{}^{p}{q}", if bar { "Wb" } else { "W" }),
            Self::Cartan { k } => format!("H_{k}"),
        }
    }
}

/// The coframe of rank `n`: symbol table and exterior derivative.
#[derive(Debug)]
pub struct Frame {
    n: usize,
    symbols: Vec<OneForm>,
    lookup: HashMap<OneForm, usize>,
    /// `d` of each symbol as `(β, γ, c)` meaning `c · ω_β ∧ ω_γ` with `β < γ`,
    /// before the factor `γ⁻¹`.
    d_table: Vec<Vec<(usize, usize, i64)>>,
    /// Root of the basis vector dual to each symbol, in block labels.
    roots: Vec<Vec<i32>>,
    reducers: Mutex<HashMap<usize, Arc<ExactReducer>>>,
}

/// Row-reduced basis of the torus-invariant `∂`- and `∂̄`-exact forms of
/// type `(p, p)`. Each row is keyed by its pivot, the largest monomial it
/// contains; no pivot occurs in any other row.
#[derive(Debug, Default)]
pub struct ExactReducer {
    rows: BTreeMap<u64, BTreeMap<u64, BigRational>>,
}

impl ExactReducer {
    pub fn dimension(&self) -> usize {
        self.rows.len()
    }

    fn reduce(&self, v: &mut BTreeMap<u64, BigRational>) {
        for (pivot, row) in &self.rows {
            let Some(c) = v.get(pivot).cloned() else { continue };
            for (m, x) in row {
                let e = v.entry(*m).or_insert_with(BigRational::zero);
                *e -= &c * x;
                if e.is_zero() {
                    v.remove(m);
                }
            }
        }
    }

    fn insert(&mut self, mut v: BTreeMap<u64, BigRational>, order: impl Fn(u64, u64) -> Ordering) {
        self.reduce(&mut v);
        let Some(pivot) = v.keys().copied().max_by(|a, b| order(*a, *b)) else { return };
        let inv = v[&pivot].recip();
        for x in v.values_mut() {
            *x *= &inv;
        }
        for row in self.rows.values_mut() {
            let Some(c) = row.get(&pivot).cloned() else { continue };
            for (m, x) in &v {
                let e = row.entry(*m).or_insert_with(BigRational::zero);
                *e -= &c * x;
                if e.is_zero() {
                    row.remove(m);
                }
            }
        }
        self.rows.insert(pivot, v);
    }
}

fn mask_order(a: u64, b: u64) -> Ordering {
    FormMonomial { mask: a, weight: 0 }.cmp(&FormMonomial { mask: b, weight: 0 })
}

/// The root `ε_i - ε_j`, `ε_p + ε_q` or their negatives, in block labels.
fn root(s: OneForm, n: usize) -> Vec<i32> {
    let mut r = vec![0; n];
    match s {
        OneForm::Lower { i, j, bar } => {
            let sg = if bar { -1 } else { 1 };
            r[i as usize - 1] += sg;
            r[j as usize - 1] -= sg;
        }
        OneForm::Upper { p, q, bar } => {
            let sg = if bar { -1 } else { 1 };
            r[p as usize - 1] += sg;
            r[q as usize - 1] += sg;
        }
        OneForm::Cartan { .. } => {}
    }
    r
}

/// All subsets of `pool` of size `k`, as masks with their total root.
fn weighted_subsets(pool: &[usize], k: usize, roots: &[Vec<i32>], n: usize) -> Vec<(u64, Vec<i32>)> {
    fn rec(pool: &[usize], k: usize, start: usize, mask: u64, w: &mut Vec<i32>, roots: &[Vec<i32>], out: &mut Vec<(u64, Vec<i32>)>) {
        if k == 0 {
            out.push((mask, w.clone()));
            return;
        }
        for t in start..pool.len() {
            if pool.len() - t < k {
                break;
            }
            let s = pool[t];
            for (a, b) in w.iter_mut().zip(&roots[s]) {
                *a += b;
            }
            rec(pool, k - 1, t + 1, mask | 1u64 << s, w, roots, out);
            for (a, b) in w.iter_mut().zip(&roots[s]) {
                *a -= b;
            }
        }
    }
    let mut out = Vec::new();
    rec(pool, k, 0, 0, &mut vec![0; n], roots, &mut out);
    out
}

/// Signed `2n × 2n` integer matrices in the block realization.
type Mat = Vec<Vec<i64>>;

fn mat_zero(n: usize) -> Mat {
    vec![vec![0; 2 * n]; 2 * n]
}

fn bracket(x: &Mat, y: &Mat) -> Mat {
    let m = x.len();
    let mut z = vec![vec![0; m]; m];
    for i in 0..m {
        for k in 0..m {
            if x[i][k] == 0 && y[i][k] == 0 {
                continue;
            }
            for j in 0..m {
                z[i][j] += x[i][k] * y[k][j] - y[i][k] * x[k][j];
            }
        }
    }
    z
}

/// Block-realization matrix of the basis vector dual to `s` (standard labels).
fn basis_matrix(s: OneForm, n: usize) -> Mat {
    let mut m = mat_zero(n);
    match s {
        OneForm::Lower { i, j, bar } => {
            let (i, j) = (i as usize - 1, j as usize - 1);
            if bar {
                m[j][i] = -1;
                m[n + i][n + j] = 1;
            } else {
                m[i][j] = 1;
                m[n + j][n + i] = -1;
            }
        }
        OneForm::Upper { p, q, bar } => {
            let (p, q) = (p as usize - 1, q as usize - 1);
            let (r0, c0, v) = if bar { (n, 0, -1) } else { (0, n, 1) };
            m[r0 + p][c0 + q] = v;
            m[r0 + q][c0 + p] = v;
        }
        OneForm::Cartan { k } => {
            let k = k as usize - 1;
            m[k][k] = 1;
            m[n + k][n + k] = -1;
        }
    }
    m
}

/// Coordinates of `x ∈ sp(2n)` in the basis, in standard labels.
fn coordinates(x: &Mat, n: usize) -> Vec<(OneForm, i64)> {
    let mut out = Vec::new();
    for i in 1..=n {
        for j in i + 1..=n {
            out.push((OneForm::lower(i, j, false), x[i - 1][j - 1]));
            out.push((OneForm::lower(i, j, true), -x[j - 1][i - 1]));
        }
    }
    for p in 1..=n {
        for q in p..=n {
            out.push((OneForm::upper(p, q, false), x[p - 1][n + q - 1]));
            out.push((OneForm::upper(p, q, true), -x[n + p - 1][q - 1]));
        }
    }
    for k in 1..=n {
        out.push((OneForm::Cartan { k: k as u8 }, x[k - 1][k - 1]));
    }
    out.retain(|(_, c)| *c != 0);
    out
}

/// Structure constants `[e_β, e_γ] = Σ c^α_{βγ} e_α` in the block realization,
/// checked to reconstruct every bracket exactly.
pub fn structure_constants(n: usize) -> BTreeMap<(OneForm, OneForm), Vec<(OneForm, i64)>> {
    let symbols = canonical_symbols(n);
    let mats: Vec<Mat> = symbols.iter().map(|&s| basis_matrix(s, n)).collect();
    let mut out = BTreeMap::new();
    for (a, &sa) in symbols.iter().enumerate() {
        for (b, &sb) in symbols.iter().enumerate() {
            let z = bracket(&mats[a], &mats[b]);
            let coords = coordinates(&z, n);
            let mut back = mat_zero(n);
            for &(s, c) in &coords {
                let m = basis_matrix(s, n);
                for (row, mrow) in back.iter_mut().zip(m.iter()) {
                    for (x, y) in row.iter_mut().zip(mrow.iter()) {
                        *x += c * y;
                    }
                }
            }
            assert_eq!(back, z, "bracket [{sa:?}, {sb:?}] leaves the basis span");
            out.insert((sa, sb), coords);
        }
    }
    out
}

fn canonical_symbols(n: usize) -> Vec<OneForm> {
    let mut s = Vec::new();
    for i in 1..=n {
        for j in i + 1..=n {
            s.push(OneForm::lower(i, j, false));
            s.push(OneForm::lower(i, j, true));
        }
    }
    for p in 1..=n {
        for q in p..=n {
            s.push(OneForm::upper(p, q, false));
            s.push(OneForm::upper(p, q, true));
        }
    }
    for k in 1..=n {
        s.push(OneForm::Cartan { k: k as u8 });
    }
    s
}

/// Largest rank whose coframe fits in a 64-bit monomial mask.
pub const MAX_RANK: usize = 5;

impl Frame {
    fn build(n: usize) -> Self {
        let symbols = canonical_symbols(n);
        let lookup: HashMap<OneForm, usize> = symbols.iter().enumerate().map(|(i, &s)| (s, i)).collect();
        let sc = structure_constants(n);
        // d ω^α = -Σ_{β<γ} c^α_{βγ} ω^β ∧ ω^γ in block labels.
        let mut std_d: HashMap<OneForm, BTreeMap<(usize, usize), i64>> = HashMap::new();
        for ((sb, sg), coords) in &sc {
            let (b, g) = (lookup[sb], lookup[sg]);
            if b >= g {
                continue;
            }
            for &(sa, c) in coords {
                *std_d.entry(sa).or_default().entry((b, g)).or_default() -= c;
            }
        }
        // Transport to skew labels: d_skew(s) = σ(d_std(σ s)).
        let mut d_table = vec![Vec::new(); symbols.len()];
        for (idx, &s) in symbols.iter().enumerate() {
            let Some(terms) = std_d.get(&s.relabel(n)) else { continue };
            let mut acc: BTreeMap<(usize, usize), i64> = BTreeMap::new();
            for (&(b, g), &c) in terms {
                let (rb, rg) = (lookup[&symbols[b].relabel(n)], lookup[&symbols[g].relabel(n)]);
                let (lo, hi, c) = if rb < rg { (rb, rg, c) } else { (rg, rb, -c) };
                *acc.entry((lo, hi)).or_default() += c;
            }
            d_table[idx] = acc.into_iter().filter(|(_, c)| *c != 0).map(|((b, g), c)| (b, g, c)).collect();
        }
        let roots = symbols.iter().map(|&s| root(s.relabel(n), n)).collect();
        Self { n, symbols, lookup, d_table, roots, reducers: Mutex::new(HashMap::new()) }
    }

    pub fn rank(&self) -> usize {
        self.n
    }

    pub fn symbols(&self) -> &[OneForm] {
        &self.symbols
    }

    pub fn index(&self, s: OneForm) -> Option<usize> {
        self.lookup.get(&s).copied()
    }

    fn bit(&self, s: OneForm) -> u64 {
        1u64 << self.lookup[&s]
    }

    /// The full exterior derivative, vertical terms included.
    pub fn d(&self, a: &InvForm) -> InvForm {
        let mut out = InvForm::zero(self.n);
        for (m, c) in &a.terms {
            let mut rest = m.mask;
            let mut pos = 0u32;
            while rest != 0 {
                let s = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                let without = m.mask & !(1u64 << s);
                let below = without & ((1u64 << s) - 1);
                let above = without & !((1u64 << s) - 1);
                for &(b, g, k) in &self.d_table[s] {
                    let pair = (1u64 << b) | (1u64 << g);
                    if pair & without != 0 {
                        continue;
                    }
                    let mut sign = wedge_sign(below, pair) * wedge_sign(below | pair, above);
                    if pos % 2 == 1 {
                        sign = -sign;
                    }
                    let coeff = c * BigRational::from_integer(BigInt::from(k * sign as i64));
                    out.add_term(FormMonomial { mask: without | pair, weight: m.weight - 1 }, coeff);
                }
                pos += 1;
            }
        }
        out
    }

    fn bidegree(&self, mask: u64) -> (usize, usize, usize) {
        let (mut p, mut q, mut v) = (0, 0, 0);
        let mut rest = mask;
        while rest != 0 {
            let s = self.symbols[rest.trailing_zeros() as usize];
            rest &= rest - 1;
            if s.is_vertical() {
                v += 1;
            } else if s.is_barred() {
                q += 1;
            } else {
                p += 1;
            }
        }
        (p, q, v)
    }

    /// Splits `d a` into its `(1,0)` and `(0,1)` parts, that is `(∂a, ∂̄a)`.
    pub fn d_split(&self, a: &InvForm) -> Result<(InvForm, InvForm), FormError> {
        let mut del = InvForm::zero(self.n);
        let mut delbar = InvForm::zero(self.n);
        for ((p, q), part) in self.bidegree_parts(a)? {
            for (m, c) in &self.d(&part).terms {
                match self.bidegree(m.mask) {
                    (_, _, v) if v > 0 => return Err(FormError::Vertical),
                    (pp, qq, _) if pp == p + 1 && qq == q => del.add_term(*m, c.clone()),
                    (pp, qq, _) if pp == p && qq == q + 1 => delbar.add_term(*m, c.clone()),
                    (pp, qq, _) => return Err(FormError::NotIntegrable(pp, qq, p, q)),
                }
            }
        }
        Ok((del, delbar))
    }

    fn bidegree_parts(&self, a: &InvForm) -> Result<BTreeMap<(usize, usize), InvForm>, FormError> {
        let mut parts: BTreeMap<(usize, usize), InvForm> = BTreeMap::new();
        for (m, c) in &a.terms {
            let (p, q, v) = self.bidegree(m.mask);
            if v > 0 {
                return Err(FormError::Vertical);
            }
            parts.entry((p, q)).or_insert_with(|| InvForm::zero(self.n)).add_term(*m, c.clone());
        }
        Ok(parts)
    }

    /// Torus-invariant exact forms of type `(p, p)`: the span of `∂α` and
    /// `∂̄β` over torus-invariant `α`, `β` of types `(p-1, p)` and `(p, p-1)`.
    /// Averaging over the compact group shows that an invariant form which is
    /// `∂`- or `∂̄`-exact is exact in this sense.
    pub fn exact_reducer(&self, p: usize) -> Arc<ExactReducer> {
        if let Some(r) = self.reducers.lock().unwrap().get(&p) {
            return r.clone();
        }
        let built = Arc::new(self.build_reducer(p));
        self.reducers.lock().unwrap().entry(p).or_insert(built).clone()
    }

    fn build_reducer(&self, p: usize) -> ExactReducer {
        let mut reducer = ExactReducer::default();
        if p == 0 {
            return reducer;
        }
        let holo: Vec<usize> = (0..self.symbols.len())
            .filter(|&i| !self.symbols[i].is_vertical() && !self.symbols[i].is_barred())
            .collect();
        let anti: Vec<usize> = (0..self.symbols.len()).filter(|&i| self.symbols[i].is_barred()).collect();
        if p > holo.len() {
            return reducer;
        }
        let mut by_weight: HashMap<Vec<i32>, Vec<u64>> = HashMap::new();
        for (mask, w) in weighted_subsets(&anti, p, &self.roots, self.n) {
            by_weight.entry(w).or_default().push(mask);
        }
        let mut by_weight_small: HashMap<Vec<i32>, Vec<u64>> = HashMap::new();
        for (mask, w) in weighted_subsets(&anti, p - 1, &self.roots, self.n) {
            by_weight_small.entry(w).or_default().push(mask);
        }
        let negate = |w: &[i32]| w.iter().map(|x| -x).collect::<Vec<i32>>();
        let push = |form: InvForm, reducer: &mut ExactReducer| {
            let v: BTreeMap<u64, BigRational> = form.terms.into_iter().map(|(m, c)| (m.mask, c)).collect();
            if !v.is_empty() {
                reducer.insert(v, mask_order);
            }
        };
        for (hmask, w) in weighted_subsets(&holo, p - 1, &self.roots, self.n) {
            for &amask in by_weight.get(&negate(&w)).into_iter().flatten() {
                let alpha = InvForm::monomial(self.n, hmask | amask, 0, BigRational::one());
                let (del, _) = self.d_split(&alpha).expect("torus-invariant forms are basic");
                push(del, &mut reducer);
            }
        }
        for (hmask, w) in weighted_subsets(&holo, p, &self.roots, self.n) {
            for &amask in by_weight_small.get(&negate(&w)).into_iter().flatten() {
                let beta = InvForm::monomial(self.n, hmask | amask, 0, BigRational::one());
                let (_, delbar) = self.d_split(&beta).expect("torus-invariant forms are basic");
                push(delbar, &mut reducer);
            }
        }
        reducer
    }

    /// The normal form of a class-ready form modulo invariant exact forms.
    pub fn reduce_exact(&self, a: &InvForm) -> Result<InvForm, FormError> {
        let mut parts: BTreeMap<usize, BTreeMap<u64, BigRational>> = BTreeMap::new();
        for (m, c) in &a.terms {
            if m.weight != 0 {
                return Err(FormError::ResidualWeight);
            }
            let (hp, hq, v) = self.bidegree(m.mask);
            if v > 0 {
                return Err(FormError::Vertical);
            }
            if hp != hq {
                return Err(FormError::Unbalanced);
            }
            parts.entry(hp).or_default().insert(m.mask, c.clone());
        }
        let mut out = InvForm::zero(self.n);
        for (p, mut v) in parts {
            self.exact_reducer(p).reduce(&mut v);
            for (mask, c) in v {
                out.add_term(FormMonomial { mask, weight: 0 }, c);
            }
        }
        Ok(out)
    }

    /// `dd^c a = γ² ∂∂̄ a`.
    pub fn ddc(&self, a: &InvForm) -> Result<InvForm, FormError> {
        if a.n != self.n {
            return Err(FormError::RankMismatch(a.n, self.n));
        }
        let (_, delbar) = self.d_split(a)?;
        let (del, _) = self.d_split(&delbar)?;
        Ok(del.shift_weight(2))
    }

    /// `Ω_{ij} = ω_{ij} ∧ ω̄_{ij}`.
    pub fn omega_lower(&self, i: usize, j: usize) -> Result<InvForm, FormError> {
        if !(1 <= i && i < j && j <= self.n) {
            return Err(FormError::IndexOutOfRange(format!("Omega_{i}{j}")));
        }
        Ok(self.pair(OneForm::lower(i, j, false), OneForm::lower(i, j, true)))
    }

    /// `Ω^{pq} = ω^{pq} ∧ ω̄^{pq}`, symmetric in `p, q`.
    pub fn omega_upper(&self, p: usize, q: usize) -> Result<InvForm, FormError> {
        if !(1..=self.n).contains(&p) || !(1..=self.n).contains(&q) {
            return Err(FormError::IndexOutOfRange(format!("Omega^{p}{q}")));
        }
        Ok(self.pair(OneForm::upper(p, q, false), OneForm::upper(p, q, true)))
    }

    fn pair(&self, a: OneForm, b: OneForm) -> InvForm {
        &self.one_form(a) * &self.one_form(b)
    }

    pub fn one_form(&self, s: OneForm) -> InvForm {
        InvForm::monomial(self.n, self.bit(s), 0, BigRational::one())
    }

    /// `Ω = ⋀_{i<j} Ω_{ij} ∧ ⋀_{p≤q} Ω^{pq}`.
    pub fn top(&self) -> InvForm {
        InvForm::monomial(self.n, self.top_mask(), 0, BigRational::one())
    }

    fn top_mask(&self) -> u64 {
        let horizontal = self.symbols.iter().filter(|s| !s.is_vertical()).count();
        (1u64 << horizontal) - 1
    }

    /// The rational `r` with `a = r Ω`.
    pub fn top_coefficient(&self, a: &InvForm) -> Result<BigRational, FormError> {
        let top = self.top_mask();
        let mut r = BigRational::zero();
        for (m, c) in &a.terms {
            if m.mask != top {
                return Err(FormError::NotTopDegree);
            }
            if m.weight != 0 {
                return Err(FormError::ResidualWeight);
            }
            r += c;
        }
        Ok(r)
    }

    /// `∫ a`, using `∫ Ω = ∏_{k=1}^n 1/(2k-1)!`.
    pub fn integrate_top(&self, a: &InvForm) -> Result<BigRational, FormError> {
        Ok(self.top_coefficient(a)? * omega_volume(self.n))
    }

    /// The curvature matrix of `Ē_k`:
    /// `Θ_{αβ} = -Σ_{j>k} ω_{αj} ∧ ω̄_{βj} - Σ_p ω^{pα} ∧ ω̄^{pβ}`,
    /// stated in block labels and transported to skew-diagonal labels.
    pub fn curvature_e(&self, k: usize) -> Result<CurvatureMatrix, FormError> {
        let n = self.n;
        if !(1..=n).contains(&k) {
            return Err(FormError::IndexOutOfRange(format!("E_{k}")));
        }
        let lift = |s: OneForm| self.one_form(s.relabel(n));
        let mut entries = vec![vec![InvForm::zero(n); k]; k];
        for (a, row) in entries.iter_mut().enumerate() {
            for (b, entry) in row.iter_mut().enumerate() {
                let (al, be) = (a + 1, b + 1);
                let mut t = InvForm::zero(n);
                for j in k + 1..=n {
                    t -= &(&lift(OneForm::lower(al, j, false)) * &lift(OneForm::lower(be, j, true)));
                }
                for p in 1..=n {
                    t -= &(&lift(OneForm::upper(p, al, false)) * &lift(OneForm::upper(p, be, true)));
                }
                *entry = t;
            }
        }
        Ok(CurvatureMatrix { label: format!("E_{k}"), entries })
    }

    /// `c_1(Q̄_k) = Σ_{i<k} Ω_{ik} - Σ_{j>k} Ω_{kj} - Σ_p Ω^{pk}` in block
    /// labels, transported to skew-diagonal labels.
    pub fn c1_quotient(&self, k: usize) -> Result<InvForm, FormError> {
        let n = self.n;
        if !(1..=n).contains(&k) {
            return Err(FormError::IndexOutOfRange(format!("Q_{k}")));
        }
        let mut t = InvForm::zero(n);
        let relabeled = |a: OneForm, b: OneForm| self.pair(a.relabel(n), b.relabel(n));
        for i in 1..k {
            t += &relabeled(OneForm::lower(i, k, false), OneForm::lower(i, k, true));
        }
        for j in k + 1..=n {
            t -= &relabeled(OneForm::lower(k, j, false), OneForm::lower(k, j, true));
        }
        for p in 1..=n {
            t -= &relabeled(OneForm::upper(p, k, false), OneForm::upper(p, k, true));
        }
        Ok(t)
    }

    /// The form representing `x_i = -c_1(L̄_i)`, `L_i = E_{n+1-i}/E_{n-i}`:
    /// `x_i = -Σ_{j>i} Ω_{ij} + Σ_{j<i} Ω_{ji} + Σ_p Ω^{pi}`.
    pub fn x_form(&self, i: usize) -> Result<InvForm, FormError> {
        let n = self.n;
        if !(1..=n).contains(&i) {
            return Err(FormError::IndexOutOfRange(format!("x_{i}")));
        }
        let mut t = InvForm::zero(n);
        for j in i + 1..=n {
            t -= &self.omega_lower(i, j)?;
        }
        for j in 1..i {
            t += &self.omega_lower(j, i)?;
        }
        for p in 1..=n {
            t += &self.omega_upper(p, i)?;
        }
        Ok(t)
    }

    /// Renders a form with `O_ij` / `O^pq` for complete `Ω` factors and the
    /// one-form tokens `W_ij`, `Wb_ij`, `W^pq`, `Wb^pq`, `H_k` otherwise.
    pub fn render(&self, a: &InvForm) -> String {
        if a.is_zero() {
            return "0".into();
        }
        let mut s = String::new();
        for (idx, (m, c)) in a.terms.iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            s.push_str(match (idx, neg) {
                (0, true) => "-",
                (0, false) => "",
                (_, true) => " - ",
                (_, false) => " + ",
            });
            let mut factors = Vec::new();
            if m.weight != 0 {
                factors.push(format!("g^{}", m.weight));
            }
            factors.extend(self.monomial_tokens(m.mask, true));
            if factors.is_empty() {
                s.push_str(&abs.to_string());
            } else if abs.is_one() {
                s.push_str(&factors.join("*"));
            } else {
                s.push_str(&format!("{abs}*{}", factors.join("*")));
            }
        }
        s
    }

    /// Tokens of a monomial; with `pair_up`, adjacent `ω ∧ ω̄` pairs become `O`.
    pub fn monomial_tokens(&self, mask: u64, pair_up: bool) -> Vec<String> {
        let idx: Vec<usize> = (0..64).filter(|b| mask >> b & 1 == 1).collect();
        let mut out = Vec::new();
        let mut k = 0;
        while k < idx.len() {
            let s = self.symbols[idx[k]];
            let partner = match s {
                OneForm::Lower { i, j, bar: false } => Some((OneForm::Lower { i, j, bar: true }, format!("O_{i}{j}"))),
                OneForm::Upper { p, q, bar: false } => Some((OneForm::Upper { p, q, bar: true }, format!("O^{p}{q}"))),
                _ => None,
            };
            if let (true, Some((b, tok))) = (pair_up, partner) {
                if k + 1 < idx.len() && self.symbols[idx[k + 1]] == b {
                    out.push(tok);
                    k += 2;
                    continue;
                }
            }
            out.push(s.token());
            k += 1;
        }
        out
    }

    pub fn to_json_terms(&self, a: &InvForm) -> Vec<FormTerm> {
        a.terms
            .iter()
            .map(|(m, c)| FormTerm {
                monomial: self.monomial_tokens(m.mask, false),
                coeff: c.to_string(),
                gamma: m.weight,
            })
            .collect()
    }
}

/// `∏_{k=1}^n 1/(2k-1)!`.
pub fn omega_volume(n: usize) -> BigRational {
    let mut denom = BigInt::one();
    for k in 1..=n {
        for f in 1..=(2 * k - 1) {
            denom *= f;
        }
    }
    BigRational::new(BigInt::one(), denom)
}

/// Shared coframe of rank `n`.
pub fn frame(n: usize) -> Result<Arc<Frame>, FormError> {
    static CACHE: Memo<usize, Arc<Frame>> = Memo::new();
    if n == 0 || n > MAX_RANK {
        return Err(FormError::RankTooLarge(n));
    }
    Ok(CACHE.get_or_insert_with(n, || Arc::new(Frame::build(n))))
}

/// Sign of `a ∧ b` relative to the sorted monomial `a | b`, for disjoint masks.
fn wedge_sign(a: u64, b: u64) -> i32 {
    let mut inversions = 0u32;
    let mut rest = b;
    while rest != 0 {
        let y = rest.trailing_zeros();
        rest &= rest - 1;
        inversions += if y >= 63 { 0 } else { (a >> (y + 1)).count_ones() };
    }
    if inversions % 2 == 0 {
        1
    } else {
        -1
    }
}

/// A sorted wedge monomial with its `γ`-weight.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FormMonomial {
    pub mask: u64,
    pub weight: i32,
}

impl FormMonomial {
    pub fn degree(&self) -> u32 {
        self.mask.count_ones()
    }
}

impl Ord for FormMonomial {
    /// By degree, then lexicographically on the sorted symbol lists.
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| {
            let diff = self.mask ^ other.mask;
            if diff == 0 {
                self.weight.cmp(&other.weight)
            } else if self.mask >> diff.trailing_zeros() & 1 == 1 {
                Ordering::Less
            } else {
                Ordering::Greater
            }
        })
    }
}

impl PartialOrd for FormMonomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// An invariant form with exact rational coefficients.
#[derive(Clone, PartialEq, Eq)]
pub struct InvForm {
    n: usize,
    terms: BTreeMap<FormMonomial, BigRational>,
}

/// JSON rendering of one term.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FormTerm {
    pub monomial: Vec<String>,
    pub coeff: String,
    #[serde(default, skip_serializing_if = "is_zero_i32")]
    pub gamma: i32,
}

fn is_zero_i32(x: &i32) -> bool {
    *x == 0
}

impl InvForm {
    pub fn zero(n: usize) -> Self {
        Self { n, terms: BTreeMap::new() }
    }

    pub fn one(n: usize) -> Self {
        Self::scalar(n, BigRational::one())
    }

    pub fn scalar(n: usize, c: BigRational) -> Self {
        Self::monomial(n, 0, 0, c)
    }

    pub fn monomial(n: usize, mask: u64, weight: i32, c: BigRational) -> Self {
        let mut f = Self::zero(n);
        f.add_term(FormMonomial { mask, weight }, c);
        f
    }

    pub fn rank(&self) -> usize {
        self.n
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

    pub fn terms(&self) -> impl Iterator<Item = (&FormMonomial, &BigRational)> {
        self.terms.iter()
    }

    pub fn add_term(&mut self, m: FormMonomial, c: BigRational) {
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

    /// True when every monomial has `γ`-weight zero.
    pub fn is_class_ready(&self) -> bool {
        self.terms.keys().all(|m| m.weight == 0)
    }

    /// Part of total form degree `2p` (type `(p,p)` for the forms used here).
    pub fn degree_part(&self, degree: u32) -> Self {
        Self {
            n: self.n,
            terms: self.terms.iter().filter(|(m, _)| m.degree() == degree).map(|(m, c)| (*m, c.clone())).collect(),
        }
    }

    pub fn shift_weight(&self, by: i32) -> Self {
        Self {
            n: self.n,
            terms: self.terms.iter().map(|(m, c)| (FormMonomial { mask: m.mask, weight: m.weight + by }, c.clone())).collect(),
        }
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::zero(self.n);
        }
        Self { n: self.n, terms: self.terms.iter().map(|(m, x)| (*m, x * c)).collect() }
    }

    pub fn scale_int(&self, c: i64) -> Self {
        self.scale(&BigRational::from_integer(BigInt::from(c)))
    }

    pub fn wedge(&self, other: &Self) -> Result<Self, FormError> {
        if self.n != other.n {
            return Err(FormError::RankMismatch(self.n, other.n));
        }
        let mut out = Self::zero(self.n);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                if ma.mask & mb.mask != 0 {
                    continue;
                }
                let s = wedge_sign(ma.mask, mb.mask);
                let c = ca * cb;
                out.add_term(
                    FormMonomial { mask: ma.mask | mb.mask, weight: ma.weight + mb.weight },
                    if s < 0 { -c } else { c },
                );
            }
        }
        Ok(out)
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = Self::one(self.n);
        for _ in 0..k {
            out = &out * self;
        }
        out
    }
}

impl fmt::Debug for InvForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match frame(self.n) {
            Ok(fr) => write!(f, "InvForm[{}]({})", self.n, fr.render(self)),
            Err(_) => write!(f, "InvForm[{}]({:?})", self.n, self.terms),
        }
    }
}

impl<'a> AddAssign<&'a InvForm> for InvForm {
    fn add_assign(&mut self, rhs: &'a InvForm) {
        assert_eq!(self.n, rhs.n, "form rank mismatch");
        for (m, c) in &rhs.terms {
            self.add_term(*m, c.clone());
        }
    }
}

impl<'a> SubAssign<&'a InvForm> for InvForm {
    fn sub_assign(&mut self, rhs: &'a InvForm) {
        assert_eq!(self.n, rhs.n, "form rank mismatch");
        for (m, c) in &rhs.terms {
            self.add_term(*m, -c);
        }
    }
}

impl<'a> Add<&'a InvForm> for &InvForm {
    type Output = InvForm;
    fn add(self, rhs: &'a InvForm) -> InvForm {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for InvForm {
    type Output = InvForm;
    fn add(mut self, rhs: InvForm) -> InvForm {
        self += &rhs;
        self
    }
}

impl<'a> Add<&'a InvForm> for InvForm {
    type Output = InvForm;
    fn add(mut self, rhs: &'a InvForm) -> InvForm {
        self += rhs;
        self
    }
}

impl<'a> Mul<&'a InvForm> for InvForm {
    type Output = InvForm;
    fn mul(self, rhs: &'a InvForm) -> InvForm {
        &self * rhs
    }
}

impl<'a> Sub<&'a InvForm> for &InvForm {
    type Output = InvForm;
    fn sub(self, rhs: &'a InvForm) -> InvForm {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Sub for InvForm {
    type Output = InvForm;
    fn sub(mut self, rhs: InvForm) -> InvForm {
        self -= &rhs;
        self
    }
}

impl Neg for &InvForm {
    type Output = InvForm;
    fn neg(self) -> InvForm {
        InvForm { n: self.n, terms: self.terms.iter().map(|(m, c)| (*m, -c)).collect() }
    }
}

impl Neg for InvForm {
    type Output = InvForm;
    fn neg(self) -> InvForm {
        -&self
    }
}

impl<'a> Mul<&'a InvForm> for &InvForm {
    type Output = InvForm;
    /// The wedge product; panics on a rank mismatch (see [`InvForm::wedge`]).
    fn mul(self, rhs: &'a InvForm) -> InvForm {
        self.wedge(rhs).expect("form rank mismatch")
    }
}

impl Mul for InvForm {
    type Output = InvForm;
    fn mul(self, rhs: InvForm) -> InvForm {
        &self * &rhs
    }
}

/// A square matrix of commuting even-degree forms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CurvatureMatrix {
    pub label: String,
    pub entries: Vec<Vec<InvForm>>,
}

impl CurvatureMatrix {
    pub fn size(&self) -> usize {
        self.entries.len()
    }

    fn rank(&self) -> usize {
        self.entries[0][0].rank()
    }

    /// The curvature of the dual bundle, `-Kᵀ`.
    pub fn dual(&self) -> Self {
        let k = self.size();
        let entries = (0..k).map(|a| (0..k).map(|b| -&self.entries[b][a]).collect()).collect();
        Self { label: format!("{}*", self.label), entries }
    }

    pub fn trace(&self) -> InvForm {
        let mut t = InvForm::zero(self.rank());
        for (a, row) in self.entries.iter().enumerate() {
            t += &row[a];
        }
        t
    }

    fn matmul(&self, other: &Self) -> Self {
        let k = self.size();
        let mut entries = vec![vec![InvForm::zero(self.rank()); k]; k];
        for (a, row) in entries.iter_mut().enumerate() {
            for (b, e) in row.iter_mut().enumerate() {
                for c in 0..k {
                    *e += &(&self.entries[a][c] * &other.entries[c][b]);
                }
            }
        }
        Self { label: self.label.clone(), entries }
    }

    /// `p_r = Tr(K^r)`; `p_0` is the rank of the bundle.
    pub fn power_sum(&self, r: u32) -> InvForm {
        if r == 0 {
            return InvForm::scalar(self.rank(), BigRational::from_integer(BigInt::from(self.size())));
        }
        let mut m = self.clone();
        for _ in 1..r {
            m = m.matmul(self);
        }
        m.trace()
    }

    /// `[c_0, c_1, ..., c_k]`, `c_j` being the sum of principal `j × j` minors.
    pub fn chern_forms(&self) -> Vec<InvForm> {
        let k = self.size();
        let n = self.rank();
        let mut out = vec![InvForm::zero(n); k + 1];
        for mask in 0u32..(1 << k) {
            let idx: Vec<usize> = (0..k).filter(|i| mask >> i & 1 == 1).collect();
            let det = self.minor_det(&idx);
            out[idx.len()] += &det;
        }
        out
    }

    /// Leibniz expansion; entries commute because they have even degree.
    fn minor_det(&self, idx: &[usize]) -> InvForm {
        let n = self.rank();
        if idx.is_empty() {
            return InvForm::one(n);
        }
        let mut total = InvForm::zero(n);
        let mut perm: Vec<usize> = (0..idx.len()).collect();
        permutations(&mut perm, 0, &mut |p, sign| {
            let mut t = InvForm::scalar(n, BigRational::from_integer(BigInt::from(sign)));
            for (r, &c) in p.iter().enumerate() {
                t = &t * &self.entries[idx[r]][idx[c]];
                if t.is_zero() {
                    return;
                }
            }
            total += &t;
        });
        total
    }
}

fn permutations(p: &mut Vec<usize>, k: usize, f: &mut dyn FnMut(&[usize], i64)) {
    fn sign(p: &[usize]) -> i64 {
        let mut inv = 0;
        for i in 0..p.len() {
            for j in i + 1..p.len() {
                if p[i] > p[j] {
                    inv += 1;
                }
            }
        }
        if inv % 2 == 0 {
            1
        } else {
            -1
        }
    }
    if k == p.len() {
        f(p, sign(p));
        return;
    }
    for i in k..p.len() {
        p.swap(k, i);
        permutations(p, k + 1, f);
        p.swap(k, i);
    }
}
