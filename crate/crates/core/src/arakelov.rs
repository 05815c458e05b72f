//! Arithmetic intersection theory on the symplectic flag variety.
//!
//! The invariant arithmetic Chow ring splits as `CH(X) ⊕ Ã`, where `Ã` is
//! modeled by invariant forms. A class is therefore an integer combination
//! of the `Ĉ_w` together with a class-ready [`InvForm`]. Products follow
//!
//! * `Ĉ_u · Ĉ_v`: expand `𝔠_u 𝔠_v` in the `𝔠`-basis; the strict indices give
//!   Schubert classes and each `𝔠_{λ,ϖ}` with a repeated part `r` gives the
//!   form `(-1)^r 𝔠_{λ̄,ϖ}(x) ∧ c̃_{2r}(Ē, Ē*)`;
//! * `Ĉ_u · a(η) = a(𝔠_u(x) ∧ η)`;
//! * `a(η) · a(η') = a(dd^c η ∧ η')`.
//!
//! The Bott–Chern forms of the stepwise filtration are only known here up to
//! degree 2 once `n ≥ 3`. Higher components can be supplied through
//! [`ArakelovContext::with_filtration_components`]; without them every
//! computation that needs one reports [`ArakelovError::Unsupported`].

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::invforms::{frame, omega_volume, FormError, FormTerm, Frame, InvForm};
use crate::memo::Memo;
use crate::polyring::MultiPoly;
use crate::symplectic::{c_pair, expand, schubert_c, CBasisIndex, CExpansion, SymplecticError};
use crate::weyl::SignedPermutation;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArakelovError {
    #[error(
        "unsupported: the Bott-Chern component c~_{degree} of the stepwise filtration is not \
         available at rank {n}; supply it with ArakelovContext::with_filtration_components"
    )]
    Unsupported { degree: usize, n: usize },
    #[error("monomial has total degree {got}, expected {expected}")]
    WrongDegree { got: u32, expected: usize },
    #[error("rank mismatch: {0} vs {1}")]
    RankMismatch(usize, usize),
    #[error(transparent)]
    Form(#[from] FormError),
    #[error(transparent)]
    Symplectic(#[from] SymplecticError),
}

/// `ℋ_r = 1 + 1/2 + ⋯ + 1/r`, with `ℋ_0 = 0`.
pub fn harmonic(r: usize) -> BigRational {
    (1..=r).map(|k| BigRational::new(BigInt::one(), BigInt::from(k))).fold(BigRational::zero(), |a, b| a + b)
}

/// Which exact sequence a Bott–Chern form belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BottChernKind {
    /// `0 → S → E → Q → 0` with `S = E_n`, `Q = E_n*` (the Lagrangian sequence).
    Lagrangian,
    /// The filtration `E_1 ⊂ ⋯ ⊂ E_n` of the tautological bundle.
    Filtration,
    /// Its dual.
    FiltrationDual,
    /// The combined class `c̃(Ē, Ē*)`.
    Pair,
}

/// A graded Bott–Chern form. `components[k]` is `c̃_k`, a form of type
/// `(k-1, k-1)`; degrees listed in `missing` are unknown.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BottChern {
    pub kind: BottChernKind,
    pub components: Vec<InvForm>,
    pub missing: BTreeSet<usize>,
}

impl BottChern {
    pub fn component(&self, k: usize) -> Result<InvForm, ArakelovError> {
        let n = self.components[0].rank();
        if self.missing.contains(&k) {
            return Err(ArakelovError::Unsupported { degree: k, n });
        }
        Ok(self.components.get(k).cloned().unwrap_or_else(|| InvForm::zero(n)))
    }

    /// The sum of all components; fails if any is missing.
    pub fn total(&self) -> Result<InvForm, ArakelovError> {
        if let Some(&k) = self.missing.iter().next() {
            return Err(ArakelovError::Unsupported { degree: k, n: self.components[0].rank() });
        }
        let mut t = InvForm::zero(self.components[0].rank());
        for c in &self.components {
            t += c;
        }
        Ok(t)
    }
}

/// Precomputed forms for the arithmetic Chow ring of rank `n`.
#[derive(Debug)]
pub struct ArakelovContext {
    n: usize,
    frame: Arc<Frame>,
    x: Vec<InvForm>,
    lagrangian: BottChern,
    filtration: BottChern,
    filtration_dual: BottChern,
    pair: BottChern,
}

impl ArakelovContext {
    /// The shared context of rank `n`, with no external Bott–Chern data.
    pub fn get(n: usize) -> Result<Arc<Self>, ArakelovError> {
        static CACHE: Memo<usize, Result<Arc<ArakelovContext>, ArakelovError>> = Memo::new();
        CACHE.get_or_insert_with(n, || Self::with_filtration_components(n, BTreeMap::new()).map(Arc::new))
    }

    /// A context in which the unknown filtration components `c̃_k(Ē)`,
    /// `3 ≤ k ≤ n`, are taken from `external`.
    pub fn with_filtration_components(n: usize, external: BTreeMap<usize, InvForm>) -> Result<Self, ArakelovError> {
        let frame = frame(n)?;
        let x = (1..=n).map(|i| frame.x_form(i)).collect::<Result<Vec<_>, _>>()?;
        let lagrangian = bc_lagrangian_in(&frame)?;
        let filtration = bc_filtration_in(&frame, &external)?;
        let filtration_dual = dual_filtration(&filtration);
        let pair = bc_pair_in(&frame, &lagrangian, &filtration, &filtration_dual)?;
        Ok(Self { n, frame, x, lagrangian, filtration, filtration_dual, pair })
    }

    pub fn rank(&self) -> usize {
        self.n
    }

    pub fn frame(&self) -> &Frame {
        &self.frame
    }

    pub fn x_forms(&self) -> &[InvForm] {
        &self.x
    }

    pub fn lagrangian(&self) -> &BottChern {
        &self.lagrangian
    }

    pub fn filtration(&self) -> &BottChern {
        &self.filtration
    }

    pub fn filtration_dual(&self) -> &BottChern {
        &self.filtration_dual
    }

    pub fn pair(&self) -> &BottChern {
        &self.pair
    }

    /// `f(x_1, …, x_n)` with the `x_i` replaced by their invariant forms.
    pub fn evaluate_on_forms(&self, f: &MultiPoly) -> Result<InvForm, ArakelovError> {
        if f.nvars() != self.n {
            return Err(ArakelovError::RankMismatch(f.nvars(), self.n));
        }
        let n = self.n;
        Ok(f.substitute(&self.x, |c| InvForm::scalar(n, BigRational::from_integer(c.clone()))))
    }

    /// The arithmetic class attached to a polynomial through the `𝔠`-basis.
    pub fn arith_class(&self, h: &MultiPoly) -> Result<ArithClass, ArakelovError> {
        if h.nvars() != self.n {
            return Err(ArakelovError::RankMismatch(h.nvars(), self.n));
        }
        self.class_of_expansion(&expand(h, self.n)?)
    }

    fn class_of_expansion(&self, e: &CExpansion) -> Result<ArithClass, ArakelovError> {
        let mut out = ArithClass::zero(self.n);
        for (index, c) in e.iter() {
            match index {
                CBasisIndex::Schubert { w } => out.add_schubert(w.clone(), c.clone()),
                CBasisIndex::Pair { lambda, pi } => {
                    let r = lambda.largest_repeated_part().expect("pair indices are not strict") as usize;
                    let reduced = lambda.remove_part(r as u32, 2);
                    let poly = c_pair(&reduced, pi, self.n)?;
                    let mut eta = &self.evaluate_on_forms(&poly)? * &self.pair.component(2 * r)?;
                    if r % 2 == 1 {
                        eta = -eta;
                    }
                    out.form += &eta.scale(&BigRational::from_integer(c.clone()));
                }
            }
        }
        out.form = self.frame.reduce_exact(&out.form)?;
        Ok(out)
    }

    /// `Ĉ_w`.
    pub fn schubert_class(&self, w: &SignedPermutation) -> Result<ArithClass, ArakelovError> {
        if w.rank() != self.n {
            return Err(ArakelovError::RankMismatch(w.rank(), self.n));
        }
        let mut out = ArithClass::zero(self.n);
        out.add_schubert(w.clone(), BigInt::one());
        Ok(out)
    }

    /// The class `a(η)`, with `η` taken modulo invariant exact forms.
    pub fn form_class(&self, eta: InvForm) -> Result<ArithClass, ArakelovError> {
        if eta.rank() != self.n {
            return Err(ArakelovError::RankMismatch(eta.rank(), self.n));
        }
        Ok(ArithClass { n: self.n, schubert: BTreeMap::new(), form: self.frame.reduce_exact(&eta)? })
    }

    /// `x̂_i`, the class of `x_i` (a combination of the `Ĉ_w`).
    pub fn x_hat(&self, i: usize) -> Result<ArithClass, ArakelovError> {
        self.arith_class(&MultiPoly::var(self.n, i))
    }

    pub fn arith_product(&self, a: &ArithClass, b: &ArithClass) -> Result<ArithClass, ArakelovError> {
        for r in [a.n, b.n] {
            if r != self.n {
                return Err(ArakelovError::RankMismatch(r, self.n));
            }
        }
        let mut out = ArithClass::zero(self.n);
        if !a.schubert.is_empty() && !b.schubert.is_empty() {
            let pa = a.schubert_polynomial();
            let pb = b.schubert_polynomial();
            out += &self.arith_class(&(&pa * &pb))?;
        }
        if !b.form.is_zero() {
            out.form += &(&self.evaluate_on_forms(&a.schubert_polynomial())? * &b.form);
        }
        if !a.form.is_zero() {
            out.form += &(&self.evaluate_on_forms(&b.schubert_polynomial())? * &a.form);
            if !b.form.is_zero() {
                out.form += &(&self.frame.ddc(&a.form)? * &b.form);
            }
        }
        out.form = self.frame.reduce_exact(&out.form)?;
        Ok(out)
    }

    /// The class of `x̂^k` for `|k| = n² + 1`, as `r · Ω`, and its degree `½ r ∫Ω`.
    pub fn arith_monomial_degree(&self, k: &[u32]) -> Result<ArithDegree, ArakelovError> {
        if k.len() != self.n {
            return Err(ArakelovError::RankMismatch(k.len(), self.n));
        }
        let total: u32 = k.iter().sum();
        if total as usize != self.n * self.n + 1 {
            return Err(ArakelovError::WrongDegree { got: total, expected: self.n * self.n + 1 });
        }
        self.top_degree(&MultiPoly::monomial(self.n, k, 1))
    }

    /// The Faltings height: the arithmetic degree of `(Σ i x̂_i)^{n²+1}`.
    pub fn faltings_height(&self) -> Result<ArithDegree, ArakelovError> {
        let mut l = MultiPoly::zero(self.n);
        for i in 1..=self.n {
            l += &MultiPoly::var(self.n, i).scale(&BigInt::from(i));
        }
        self.top_degree(&l.pow((self.n * self.n + 1) as u32))
    }

    /// Degree of the class of a polynomial of degree `n² + 1`.
    pub fn top_degree(&self, h: &MultiPoly) -> Result<ArithDegree, ArakelovError> {
        let class = self.arith_class(h)?;
        assert!(class.schubert.is_empty(), "a polynomial of degree n^2+1 lies in the ideal");
        let r = self.frame.top_coefficient(&class.form)?;
        let degree = &r * omega_volume(self.n) / BigRational::from_integer(BigInt::from(2));
        Ok(ArithDegree { omega_coefficient: r, degree })
    }
}

/// `c̃_k(Ē_LG) = (-1)^{k-1} ℋ_{k-1} p_{k-1}(Q̄)` with `Q̄ = Ē_n*`, `k ≤ 2n`.
fn bc_lagrangian_in(frame: &Frame) -> Result<BottChern, ArakelovError> {
    let n = frame.rank();
    let q = frame.curvature_e(n)?.dual();
    let mut components = vec![InvForm::zero(n)];
    for k in 1..=2 * n {
        let mut c = q.power_sum((k - 1) as u32).scale(&harmonic(k - 1));
        if k % 2 == 0 {
            c = -c;
        }
        components.push(c);
    }
    Ok(BottChern { kind: BottChernKind::Lagrangian, components, missing: BTreeSet::new() })
}

/// `c̃_1 = 0`, `c̃_2 = -Σ_{i<j} Ω_{ij}`, `c̃_p = 0` for `p > n`; degrees
/// `3..=n` come from `external` or are marked missing.
fn bc_filtration_in(frame: &Frame, external: &BTreeMap<usize, InvForm>) -> Result<BottChern, ArakelovError> {
    let n = frame.rank();
    let mut components = vec![InvForm::zero(n); 2 * n + 1];
    let mut missing = BTreeSet::new();
    if n >= 2 {
        let mut c2 = InvForm::zero(n);
        for i in 1..=n {
            for j in i + 1..=n {
                c2 -= &frame.omega_lower(i, j)?;
            }
        }
        components[2] = c2;
    }
    for k in 3..=n {
        match external.get(&k) {
            Some(f) if f.rank() == n => components[k] = f.clone(),
            Some(f) => return Err(ArakelovError::RankMismatch(f.rank(), n)),
            None => {
                missing.insert(k);
            }
        }
    }
    Ok(BottChern { kind: BottChernKind::Filtration, components, missing })
}

/// `c̃(Ē*) = Σ (-1)^{i+1} α_i` for `c̃(Ē) = Σ α_i`, `α_i` of type `(i, i)`.
fn dual_filtration(f: &BottChern) -> BottChern {
    let components = f.components.iter().enumerate().map(|(k, c)| if k % 2 == 1 { -c } else { c.clone() }).collect();
    BottChern { kind: BottChernKind::FiltrationDual, components, missing: f.missing.clone() }
}

/// `c̃(Ē,Ē*) = c̃(Ē_LG) + c̃(Ē) c(Ē_n*) + c̃(Ē*) c(Ē_n) + dd^c c̃(Ē) ∧ c̃(Ē*)`,
/// assembled degree by degree. A degree is missing once it involves a
/// missing filtration component.
fn bc_pair_in(
    frame: &Frame,
    lg: &BottChern,
    filt: &BottChern,
    dual: &BottChern,
) -> Result<BottChern, ArakelovError> {
    let n = frame.rank();
    let en = frame.curvature_e(n)?;
    let c_e = en.chern_forms();
    let c_dual = en.dual().chern_forms();
    let top = 2 * n;
    let first_missing = filt.missing.iter().next().copied().unwrap_or(usize::MAX);
    let ddc: Vec<InvForm> = filt
        .components
        .iter()
        .enumerate()
        .map(|(k, c)| if k >= first_missing { Ok(InvForm::zero(n)) } else { frame.ddc(c) })
        .collect::<Result<_, _>>()?;
    let mut components = vec![InvForm::zero(n); top + 1];
    let mut missing = BTreeSet::new();
    for (k, slot) in components.iter_mut().enumerate().skip(1) {
        if k >= first_missing {
            missing.insert(k);
            continue;
        }
        let mut t = lg.components[k].clone();
        for j in 1..=k {
            let l = k - j;
            if l < c_dual.len() {
                t += &(&filt.components[j] * &c_dual[l]);
                t += &(&dual.components[j] * &c_e[l]);
            }
            if l >= 1 {
                t += &(&ddc[j] * &dual.components[l]);
            }
        }
        *slot = t;
    }
    Ok(BottChern { kind: BottChernKind::Pair, components, missing })
}

/// `c̃(Ē_LG)` at rank `n`.
pub fn bc_lagrangian(n: usize) -> Result<BottChern, ArakelovError> {
    Ok(ArakelovContext::get(n)?.lagrangian.clone())
}

/// `c̃(Ē)` for the stepwise filtration at rank `n`.
pub fn bc_filtration(n: usize) -> Result<BottChern, ArakelovError> {
    Ok(ArakelovContext::get(n)?.filtration.clone())
}

/// `c̃(Ē*)` at rank `n`.
pub fn bc_filtration_dual(n: usize) -> Result<BottChern, ArakelovError> {
    Ok(ArakelovContext::get(n)?.filtration_dual.clone())
}

/// `c̃(Ē,Ē*)` at rank `n`.
pub fn bc_pair(n: usize) -> Result<BottChern, ArakelovError> {
    Ok(ArakelovContext::get(n)?.pair.clone())
}

pub fn arith_class(h: &MultiPoly, n: usize) -> Result<ArithClass, ArakelovError> {
    ArakelovContext::get(n)?.arith_class(h)
}

pub fn arith_product(a: &ArithClass, b: &ArithClass, n: usize) -> Result<ArithClass, ArakelovError> {
    ArakelovContext::get(n)?.arith_product(a, b)
}

pub fn arith_monomial_degree(k: &[u32], n: usize) -> Result<ArithDegree, ArakelovError> {
    ArakelovContext::get(n)?.arith_monomial_degree(k)
}

pub fn faltings_height(n: usize) -> Result<ArithDegree, ArakelovError> {
    ArakelovContext::get(n)?.faltings_height()
}

/// A top-degree arithmetic class `r · a(Ω)` and its degree `½ r ∫Ω`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArithDegree {
    pub omega_coefficient: BigRational,
    pub degree: BigRational,
}

/// An element of the invariant arithmetic Chow ring. The form part is kept
/// in the normal form of [`Frame::reduce_exact`], so equal classes compare
/// equal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArithClass {
    n: usize,
    schubert: BTreeMap<SignedPermutation, BigInt>,
    form: InvForm,
}

impl ArithClass {
    pub fn zero(n: usize) -> Self {
        Self { n, schubert: BTreeMap::new(), form: InvForm::zero(n) }
    }

    pub fn rank(&self) -> usize {
        self.n
    }

    pub fn schubert_part(&self) -> &BTreeMap<SignedPermutation, BigInt> {
        &self.schubert
    }

    pub fn form_part(&self) -> &InvForm {
        &self.form
    }

    pub fn is_zero(&self) -> bool {
        self.schubert.is_empty() && self.form.is_zero()
    }

    fn add_schubert(&mut self, w: SignedPermutation, c: BigInt) {
        let e = self.schubert.entry(w).or_default();
        *e += c;
        if e.is_zero() {
            self.schubert.retain(|_, v| !v.is_zero());
        }
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        let mut out = Self::zero(self.n);
        for (w, x) in &self.schubert {
            out.add_schubert(w.clone(), x * c);
        }
        out.form = self.form.scale(&BigRational::from_integer(c.clone()));
        out
    }

    /// `Σ a_w 𝔠_w`.
    fn schubert_polynomial(&self) -> MultiPoly {
        let mut p = MultiPoly::zero(self.n);
        for (w, c) in &self.schubert {
            p += &schubert_c(w).scale(c);
        }
        p
    }

    pub fn to_json(&self) -> ArithClassJson {
        let frame = frame(self.n).expect("rank validated at construction");
        ArithClassJson {
            schubert: self
                .schubert
                .iter()
                .map(|(w, c)| SchubertTerm { w: w.entries().to_vec(), coeff: c.to_string() })
                .collect(),
            form: frame.to_json_terms(&self.form),
        }
    }
}

impl<'a> std::ops::AddAssign<&'a ArithClass> for ArithClass {
    fn add_assign(&mut self, rhs: &'a ArithClass) {
        assert_eq!(self.n, rhs.n, "class rank mismatch");
        for (w, c) in &rhs.schubert {
            self.add_schubert(w.clone(), c.clone());
        }
        self.form += &rhs.form;
    }
}

impl std::ops::Add for ArithClass {
    type Output = ArithClass;
    fn add(mut self, rhs: ArithClass) -> ArithClass {
        self += &rhs;
        self
    }
}

impl fmt::Display for ArithClass {
    /// `2*C(-2 1) + a(-O_12)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self.schubert.iter().map(|(w, c)| format!("{c}*C({w})")).collect();
        if !self.form.is_zero() {
            let frame = frame(self.n).map_err(|_| fmt::Error)?;
            parts.push(format!("a({})", frame.render(&self.form)));
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SchubertTerm {
    pub w: Vec<i32>,
    pub coeff: String,
}

/// JSON layout of an [`ArithClass`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArithClassJson {
    pub schubert: Vec<SchubertTerm>,
    pub form: Vec<FormTerm>,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(a: i64, b: i64) -> BigRational {
        BigRational::new(a.into(), b.into())
    }

    struct N2 {
        f: Arc<Frame>,
        a: InvForm,
        p: InvForm,
        q: InvForm,
        r: InvForm,
    }

    fn n2() -> N2 {
        let f = frame(2).unwrap();
        N2 {
            a: f.omega_lower(1, 2).unwrap(),
            p: f.omega_upper(1, 1).unwrap(),
            q: f.omega_upper(1, 2).unwrap(),
            r: f.omega_upper(2, 2).unwrap(),
            f,
        }
    }

    #[test]
    fn harmonic_numbers() {
        assert_eq!(harmonic(0), q(0, 1));
        assert_eq!(harmonic(3), q(11, 6));
    }

    #[test]
    fn lagrangian_n2() {
        let N2 { p, q: qq, r, .. } = n2();
        let lg = bc_lagrangian(2).unwrap();
        assert!(lg.component(1).unwrap().is_zero());
        let xi1 = &(&p + &qq.scale_int(2)) + &r;
        let expected = &(&(&p * &qq) * &r).scale_int(11) - &xi1;
        assert_eq!(lg.total().unwrap(), expected);
    }

    #[test]
    fn filtration_n2_and_n1() {
        let N2 { a, .. } = n2();
        assert_eq!(bc_filtration(2).unwrap().total().unwrap(), -&a);
        assert_eq!(bc_filtration_dual(2).unwrap().total().unwrap(), -&a);
        assert!(bc_filtration(1).unwrap().total().unwrap().is_zero());
    }

    #[test]
    fn pair_n2() {
        let N2 { a, p, q: qq, r, .. } = n2();
        let xi1 = &(&p + &qq.scale_int(2)) + &r;
        let expected = -&xi1 - a.scale_int(2) - (&(&a * &p) * &r).scale_int(2) - (&(&a * &p) * &qq).scale_int(3)
            - (&(&a * &qq) * &r).scale_int(3)
            + (&(&p * &qq) * &r).scale_int(11);
        let pair = bc_pair(2).unwrap();
        assert_eq!(pair.total().unwrap(), expected);
        assert!(pair.component(1).unwrap().is_zero());
    }

    #[test]
    fn pair_degree_two_closed_form() {
        for n in 1..=3 {
            let ctx = ArakelovContext::get(n).unwrap();
            let f = ctx.frame();
            let mut expected = InvForm::zero(n);
            for i in 1..=n {
                for j in i..=n {
                    if i < j {
                        expected -= &f.omega_lower(i, j).unwrap().scale_int(2);
                        expected -= &f.omega_upper(i, j).unwrap().scale_int(2);
                    } else {
                        expected -= &f.omega_upper(i, i).unwrap();
                    }
                }
            }
            let c2 = ctx.pair().component(2).unwrap();
            assert_eq!(c2, expected, "n={n}");
            let c1_en = &f.curvature_e(n).unwrap().chern_forms()[1];
            assert_eq!(c2, c1_en + &ctx.filtration().component(2).unwrap().scale_int(2));
        }
    }

    #[test]
    fn n3_gating() {
        let ctx = ArakelovContext::get(3).unwrap();
        assert!(matches!(ctx.filtration().component(3), Err(ArakelovError::Unsupported { degree: 3, n: 3 })));
        assert!(matches!(ctx.pair().component(4), Err(ArakelovError::Unsupported { .. })));
        assert!(ctx.pair().component(2).is_ok());
        // e_2(X²) needs c̃_4 of the pair.
        let e2 = MultiPoly::elementary_squares(2, 3);
        assert!(matches!(ctx.arith_class(&e2), Err(ArakelovError::Unsupported { .. })));
        let e1 = MultiPoly::elementary_squares(1, 3);
        let c = ctx.arith_class(&e1).unwrap();
        assert_eq!(c.form_part(), &-ctx.pair().component(2).unwrap());
        // Supplying the component lifts the gate.
        let mut ext = BTreeMap::new();
        ext.insert(3, InvForm::zero(3));
        let ctx = ArakelovContext::with_filtration_components(3, ext).unwrap();
        assert!(ctx.arith_class(&e2).is_ok());
    }

    #[test]
    fn monomial_classes_n2() {
        let expected = [([5, 0], 10), ([4, 1], -8), ([3, 2], -16), ([2, 3], 6), ([1, 4], 26), ([0, 5], 0)];
        for (k, r) in expected {
            let d = arith_monomial_degree(&k, 2).unwrap();
            assert_eq!(d.omega_coefficient, q(r, 1), "{k:?}");
            assert_eq!(d.degree, q(r, 12));
        }
        assert!(matches!(arith_monomial_degree(&[1, 1], 2), Err(ArakelovError::WrongDegree { .. })));
    }

    #[test]
    fn monomial_classes_by_products() {
        let ctx = ArakelovContext::get(2).unwrap();
        let x = [ctx.x_hat(1).unwrap(), ctx.x_hat(2).unwrap()];
        for k1 in 0..=5u32 {
            let mut c = ctx.arith_class(&MultiPoly::one(2)).unwrap();
            for _ in 0..k1 {
                c = ctx.arith_product(&c, &x[0]).unwrap();
            }
            for _ in 0..5 - k1 {
                c = ctx.arith_product(&c, &x[1]).unwrap();
            }
            let d = ctx.arith_monomial_degree(&[k1, 5 - k1]).unwrap();
            assert!(c.schubert_part().is_empty());
            assert_eq!(ctx.frame().top_coefficient(c.form_part()).unwrap(), d.omega_coefficient);
        }
    }

    #[test]
    fn height_n2() {
        let h = faltings_height(2).unwrap();
        assert_eq!(h.omega_coefficient, q(1850, 1));
        assert_eq!(h.degree, q(925, 6));
    }

    #[test]
    fn products_n2() {
        let ctx = ArakelovContext::get(2).unwrap();
        let s0: SignedPermutation = "-1 2".parse().unwrap();
        let c = ctx.schubert_class(&s0).unwrap();
        let sq = ctx.arith_product(&c, &c).unwrap();
        let s1s0: SignedPermutation = SignedPermutation::from_word(2, &crate::weyl::Word::new(vec![1, 0])).unwrap();
        assert_eq!(sq.schubert_part().len(), 1);
        assert_eq!(sq.schubert_part()[&s1s0], BigInt::from(2));
        assert_eq!(sq.form_part(), &-ctx.pair().component(2).unwrap());
        let N2 { f, a, p, q: qq, r } = n2();
        let ea = ctx.form_class(a.clone()).unwrap();
        let prod = ctx.arith_product(&ea, &ea).unwrap();
        assert_eq!(prod.form_part(), &f.reduce_exact(&(&(&a * &qq) * &(&p + &r))).unwrap());
        let id = ctx.schubert_class(&SignedPermutation::identity(2)).unwrap();
        assert_eq!(ctx.arith_product(&id, &sq).unwrap(), sq);
        assert_eq!(ctx.arith_product(&sq, &id).unwrap(), sq);
    }
}
