//! Symplectic Schubert polynomials `𝔠_w`, the complementary basis
//! `𝔠_{λ,ϖ} = Q̃_λ(X_n) 𝔖_ϖ(-X_n)`, expansion of arbitrary integer
//! polynomials in the combined basis, structure constants, the scalar
//! product and membership in the ideal `I_n` of positive degree invariants.
//!
//! Expansion runs in three exact stages.
//!
//! 1. `ℤ[X_n]` is free over the symmetric polynomials with basis `𝔖_ϖ`. Peeling
//!    from the longest `ϖ` down, `∂_ϖ` of the remainder is the coefficient of
//!    `𝔖_ϖ`, because `∂_ϖ 𝔖_π` is `δ_{ϖ,π}` whenever `ℓ(π) ≤ ℓ(ϖ)`.
//! 2. Each symmetric coefficient is written in the `Q̃_λ`, `λ_1 ≤ n`, by
//!    solving a square system over the monomial symmetric coordinates.
//! 3. The strict-`λ` part is rewritten in the `𝔠_w` by inverting the
//!    square, degree-graded matrix of the `e^w_{λ,ϖ}`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::SquareSolver;
use crate::memo::Memo;
use crate::polyring::MultiPoly;
use crate::qbasis::{bh_coefficients, qtilde, schubert_a};
use crate::weyl::{Partition, SignedPermutation};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SymplecticError {
    #[error("partition ({partition}) has a part larger than the rank {rank}")]
    PartTooLarge { partition: String, rank: usize },
    #[error("{0} is not a permutation in S_n")]
    NotUnsigned(String),
    #[error("rank mismatch: {0} vs {1}")]
    RankMismatch(usize, usize),
    #[error("internal error: non-integral expansion coefficient")]
    NonIntegral,
}

/// An index of the basis `{𝔠_w} ∪ {𝔠_{λ,ϖ} : λ ∈ 𝒢_n ∖ 𝒟_n}`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CBasisIndex {
    Schubert { w: SignedPermutation },
    Pair { lambda: Partition, pi: SignedPermutation },
}

impl CBasisIndex {
    pub fn degree(&self) -> usize {
        match self {
            Self::Schubert { w } => w.length(),
            Self::Pair { lambda, pi } => lambda.weight() as usize + pi.length(),
        }
    }
}

impl fmt::Display for CBasisIndex {
    /// `cw(-2 1 3)` or `cpair(1,1; 2 1 3)`, both readable by the expression parser.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Schubert { w } => write!(f, "cw({w})"),
            Self::Pair { lambda, pi } => write!(f, "cpair({lambda}; {pi})"),
        }
    }
}

/// An exact integer combination of basis elements.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CExpansion {
    n: usize,
    terms: BTreeMap<CBasisIndex, BigInt>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CExpansionTerm {
    pub index: CBasisIndex,
    pub coeff: String,
}

impl CExpansion {
    pub fn zero(n: usize) -> Self {
        Self { n, terms: BTreeMap::new() }
    }

    pub fn rank(&self) -> usize {
        self.n
    }

    pub fn add(&mut self, index: CBasisIndex, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(index.clone()).or_default();
        *e += c;
        if e.is_zero() {
            self.terms.remove(&index);
        }
    }

    pub fn get(&self, index: &CBasisIndex) -> BigInt {
        self.terms.get(index).cloned().unwrap_or_default()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&CBasisIndex, &BigInt)> {
        self.terms.iter()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    /// The `𝔠_w` coefficients.
    pub fn schubert_part(&self) -> BTreeMap<SignedPermutation, BigInt> {
        self.terms
            .iter()
            .filter_map(|(k, c)| match k {
                CBasisIndex::Schubert { w } => Some((w.clone(), c.clone())),
                CBasisIndex::Pair { .. } => None,
            })
            .collect()
    }

    /// The part supported on non-strict `λ`, which spans `I_n`.
    pub fn ideal_part(&self) -> Self {
        Self {
            n: self.n,
            terms: self
                .terms
                .iter()
                .filter(|(k, _)| matches!(k, CBasisIndex::Pair { .. }))
                .map(|(k, c)| (k.clone(), c.clone()))
                .collect(),
        }
    }

    /// The polynomial this expansion stands for.
    pub fn reconstruct(&self) -> MultiPoly {
        let mut p = MultiPoly::zero(self.n);
        for (k, c) in &self.terms {
            let b = match k {
                CBasisIndex::Schubert { w } => schubert_c(w),
                CBasisIndex::Pair { lambda, pi } => c_pair(lambda, pi, self.n).expect("valid index"),
            };
            p += &b.scale(c);
        }
        p
    }

    pub fn to_terms(&self) -> Vec<CExpansionTerm> {
        self.terms.iter().map(|(k, c)| CExpansionTerm { index: k.clone(), coeff: c.to_string() }).collect()
    }
}

impl Serialize for CExpansion {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_terms().serialize(s)
    }
}

impl fmt::Display for CExpansion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (k, c)) in self.terms.iter().enumerate() {
            let a = c.abs();
            match (i, c.is_negative()) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            if a.is_one() {
                write!(f, "{k}")?;
            } else {
                write!(f, "{a}*{k}")?;
            }
        }
        Ok(())
    }
}

fn check_pair(lambda: &Partition, varpi: &SignedPermutation, n: usize) -> Result<(), SymplecticError> {
    if lambda.largest() as usize > n {
        return Err(SymplecticError::PartTooLarge { partition: lambda.to_string(), rank: n });
    }
    if !varpi.is_unsigned() {
        return Err(SymplecticError::NotUnsigned(varpi.to_string()));
    }
    if varpi.rank() != n {
        return Err(SymplecticError::RankMismatch(varpi.rank(), n));
    }
    Ok(())
}

/// `𝔠_{λ,ϖ} = (-1)^{ℓ(ϖ)} Q̃_λ(X_n) 𝔖_ϖ(X_n)`.
pub fn c_pair(lambda: &Partition, varpi: &SignedPermutation, n: usize) -> Result<MultiPoly, SymplecticError> {
    check_pair(lambda, varpi, n)?;
    let p = &qtilde(lambda, n) * &schubert_a(varpi, n);
    Ok(if varpi.length() % 2 == 1 { -p } else { p })
}

/// One summand `coeff · Q̃_λ(X_n) 𝔖_ϖ(X_n)` of a symplectic Schubert
/// polynomial, with the sign `(-1)^{ℓ(ϖ)}` folded into `coeff`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct QSTerm {
    pub lambda: Partition,
    pub pi: SignedPermutation,
    pub coeff: BigInt,
}

impl fmt::Display for QSTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}*qtilde({})*schubA({})", self.coeff, self.lambda, self.pi)
    }
}

/// `𝔠_w` as signed multiples of `Q̃_λ 𝔖_ϖ`, ordered by `(λ, ϖ)`.
pub fn schubert_c_terms(w: &SignedPermutation) -> Vec<QSTerm> {
    let mut out: Vec<QSTerm> = bh_coefficients(w)
        .iter()
        .map(|(lambda, pi, e)| {
            let s = if pi.length() % 2 == 1 { -BigInt::from(e) } else { BigInt::from(e) };
            QSTerm { lambda: lambda.clone(), pi: pi.clone(), coeff: s }
        })
        .collect();
    out.sort();
    out
}

/// The symplectic Schubert polynomial `𝔠_w = Σ e^w_{λ,ϖ} 𝔠_{λ,ϖ}`.
pub fn schubert_c(w: &SignedPermutation) -> MultiPoly {
    static CACHE: Memo<SignedPermutation, MultiPoly> = Memo::new();
    CACHE.get_or_insert_with(w.clone(), || {
        let n = w.rank();
        let mut p = MultiPoly::zero(n);
        for t in schubert_c_terms(w) {
            p += &(&qtilde(&t.lambda, n) * &schubert_a(&t.pi, n)).scale(&t.coeff);
        }
        p
    })
}

/// Exponent vectors of the monomial symmetric functions of degree `d` in `n`
/// variables, in the same order as `Partition::all_of_weight(d, n)` read
/// through conjugation.
fn symmetric_coordinates(d: u32, n: usize) -> Vec<Vec<u32>> {
    let mut out: Vec<Vec<u32>> = Partition::all_of_weight(d, d.max(1))
        .into_iter()
        .filter(|p| p.len() <= n)
        .map(|p| {
            let mut e = p.parts().to_vec();
            e.resize(n, 0);
            e
        })
        .collect();
    out.sort();
    out
}

struct QSolver {
    basis: Vec<Partition>,
    coords: Vec<Vec<u32>>,
    solver: SquareSolver,
}

fn q_solver(n: usize, d: u32) -> std::sync::Arc<QSolver> {
    static CACHE: Memo<(usize, u32), std::sync::Arc<QSolver>> = Memo::new();
    CACHE.get_or_insert_with((n, d), || {
        let basis = Partition::all_of_weight(d, n as u32);
        let coords = symmetric_coordinates(d, n);
        assert_eq!(basis.len(), coords.len());
        let polys: Vec<MultiPoly> = basis.iter().map(|l| qtilde(l, n)).collect();
        let matrix: Vec<Vec<BigInt>> = coords.iter().map(|e| polys.iter().map(|p| p.coeff(e)).collect()).collect();
        let solver = SquareSolver::new(&matrix).expect("Q̃ polynomials form a basis");
        std::sync::Arc::new(QSolver { basis, coords, solver })
    })
}

/// Writes a symmetric polynomial as `Σ c_λ Q̃_λ(X_n)` over `λ_1 ≤ n`.
fn expand_symmetric(s: &MultiPoly, n: usize) -> Result<BTreeMap<Partition, BigInt>, SymplecticError> {
    let mut out = BTreeMap::new();
    let mut degrees: Vec<u32> = s.terms().map(|(m, _)| m.degree()).collect();
    degrees.dedup();
    for d in degrees {
        let qs = q_solver(n, d);
        let b: Vec<BigInt> = qs.coords.iter().map(|e| s.coeff(e)).collect();
        let x = qs.solver.solve_integer(&b).ok_or(SymplecticError::NonIntegral)?;
        for (l, c) in qs.basis.iter().zip(x) {
            if !c.is_zero() {
                out.insert(l.clone(), c);
            }
        }
    }
    Ok(out)
}

struct ESolver {
    rows: Vec<(Partition, SignedPermutation)>,
    cols: Vec<SignedPermutation>,
    solver: SquareSolver,
}

/// The block of `(e^w_{λ,ϖ})` with `ℓ(w) = |λ| + ℓ(ϖ) = d`, `λ ∈ 𝒟_n`.
fn e_solver(n: usize, d: usize) -> std::sync::Arc<ESolver> {
    static CACHE: Memo<(usize, usize), std::sync::Arc<ESolver>> = Memo::new();
    CACHE.get_or_insert_with((n, d), || {
        let cols: Vec<SignedPermutation> = SignedPermutation::all(n).into_iter().filter(|w| w.length() == d).collect();
        let mut rows = Vec::new();
        for lambda in Partition::strict_bounded(n) {
            for pi in SignedPermutation::all_unsigned(n) {
                if lambda.weight() as usize + pi.length() == d {
                    rows.push((lambda.clone(), pi));
                }
            }
        }
        assert_eq!(rows.len(), cols.len());
        let es: Vec<_> = cols.iter().map(bh_coefficients).collect();
        let matrix: Vec<Vec<BigInt>> =
            rows.iter().map(|(l, p)| es.iter().map(|e| BigInt::from(e.get(l, p))).collect()).collect();
        let solver = SquareSolver::new(&matrix).expect("the 𝔠_w form a basis");
        std::sync::Arc::new(ESolver { rows, cols, solver })
    })
}

/// The unique expansion of `h` in the basis indexed by [`CBasisIndex`].
pub fn expand(h: &MultiPoly, n: usize) -> Result<CExpansion, SymplecticError> {
    if h.nvars() != n {
        return Err(SymplecticError::RankMismatch(h.nvars(), n));
    }
    // Stage 1: coefficients of the 𝔖_ϖ over the symmetric polynomials.
    let mut perms = SignedPermutation::all_unsigned(n);
    perms.sort_by_key(|p| std::cmp::Reverse(p.length()));
    let mut rest = h.clone();
    let mut sym: Vec<(SignedPermutation, MultiPoly)> = Vec::new();
    let mut i = 0;
    while i < perms.len() {
        let l = perms[i].length();
        let mut j = i;
        let mut level = Vec::new();
        while j < perms.len() && perms[j].length() == l {
            let s = rest.divided_difference_element(&perms[j]).expect("rank checked");
            level.push((perms[j].clone(), s));
            j += 1;
        }
        for (p, s) in &level {
            if !s.is_zero() {
                rest -= &(&schubert_a(p, n) * s);
            }
        }
        sym.extend(level);
        i = j;
    }
    assert!(rest.is_zero(), "Schubert peeling left a remainder");

    // Stage 2: Q̃ coefficients; the index (λ, ϖ) gets (-1)^{ℓ(ϖ)} c because
    // Q̃_λ 𝔖_ϖ = (-1)^{ℓ(ϖ)} 𝔠_{λ,ϖ}.
    let mut out = CExpansion::zero(n);
    let mut strict: BTreeMap<usize, BTreeMap<(Partition, SignedPermutation), BigInt>> = BTreeMap::new();
    for (pi, s) in sym {
        if s.is_zero() {
            continue;
        }
        for (lambda, c) in expand_symmetric(&s, n)? {
            let c = if pi.length() % 2 == 1 { -c } else { c };
            if lambda.is_strict() {
                let d = lambda.weight() as usize + pi.length();
                strict.entry(d).or_default().insert((lambda, pi.clone()), c);
            } else {
                out.add(CBasisIndex::Pair { lambda, pi: pi.clone() }, c);
            }
        }
    }

    // Stage 3: Σ_w a_w e^w_{λ,ϖ} = c_{λ,ϖ} on each degree block.
    for (d, coeffs) in strict {
        let es = e_solver(n, d);
        let b: Vec<BigInt> = es.rows.iter().map(|k| coeffs.get(k).cloned().unwrap_or_default()).collect();
        let a = es.solver.solve_integer(&b).ok_or(SymplecticError::NonIntegral)?;
        for (w, c) in es.cols.iter().zip(a) {
            out.add(CBasisIndex::Schubert { w: w.clone() }, c);
        }
    }
    Ok(out)
}

/// The expansion of `𝔠_u 𝔠_v`.
pub fn structure_constants(u: &SignedPermutation, v: &SignedPermutation) -> Result<CExpansion, SymplecticError> {
    if u.rank() != v.rank() {
        return Err(SymplecticError::RankMismatch(u.rank(), v.rank()));
    }
    expand(&(&schubert_c(u) * &schubert_c(v)), u.rank())
}

/// `⟨f, g⟩ = (-1)^{n(n-1)/2} ∂_{w_0}(fg)`.
pub fn scalar_product(f: &MultiPoly, g: &MultiPoly, n: usize) -> Result<MultiPoly, SymplecticError> {
    if f.nvars() != n || g.nvars() != n {
        return Err(SymplecticError::RankMismatch(f.nvars().max(g.nvars()), n));
    }
    let fg = f * g;
    if fg.degree().is_none_or(|d| (d as usize) < n * n) {
        return Ok(MultiPoly::zero(n));
    }
    let p = fg.divided_difference_element(&SignedPermutation::longest(n)).expect("rank checked");
    Ok(if (n * (n - 1) / 2) % 2 == 1 { -p } else { p })
}

/// Whether `h ∈ I_n`, together with the expansion of its `I_n` component.
pub fn ideal_membership(h: &MultiPoly, n: usize) -> Result<(bool, CExpansion), SymplecticError> {
    let e = expand(h, n)?;
    let member = e.schubert_part().is_empty();
    Ok((member, e.ideal_part()))
}
