//! The Pragacz–Ratajski polynomials `Q̃_λ(X_n)`, type A Schubert polynomials,
//! Kraśkiewicz tableaux and the coefficients `e^w_{λ,ϖ}` that expand a
//! symplectic Schubert polynomial.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;

use crate::memo::Memo;
use crate::polyring::MultiPoly;
use crate::weyl::{Partition, SignedPermutation};

/// `Q̃_λ(X_n)`. Zero when `λ_1 > n`; `1` for the empty partition.
pub fn qtilde(lambda: &Partition, n: usize) -> MultiPoly {
    static CACHE: Memo<(Vec<u32>, usize), MultiPoly> = Memo::new();
    if lambda.largest() as usize > n {
        return MultiPoly::zero(n);
    }
    CACHE.get_or_insert_with((lambda.parts().to_vec(), n), || qtilde_uncached(lambda.parts(), n))
}

/// `Q̃_λ(X_n)` straight from the defining Pfaffian, with no shortcut for
/// `λ_1 > n`. Agrees with [`qtilde`]; kept public so that the vanishing can
/// be checked rather than assumed.
pub fn qtilde_by_definition(lambda: &Partition, n: usize) -> MultiPoly {
    qtilde_uncached(lambda.parts(), n)
}

fn qtilde_uncached(parts: &[u32], n: usize) -> MultiPoly {
    match parts.len() {
        0 => MultiPoly::one(n),
        1 => MultiPoly::elementary(parts[0] as usize, n),
        2 => qtilde_two(parts[0], parts[1], n),
        _ => {
            let mut padded = parts.to_vec();
            if padded.len() % 2 == 1 {
                padded.push(0);
            }
            let mut memo = HashMap::new();
            pfaffian(&padded, (1u64 << padded.len()) - 1, n, &mut memo)
        }
    }
}

/// `Q̃_{i,j} = Q̃_i Q̃_j + 2 Σ_{r=1}^{j} (-1)^r Q̃_{i+r} Q̃_{j-r}` for `i ≥ j`.
fn qtilde_two(i: u32, j: u32, n: usize) -> MultiPoly {
    let e = |k: u32| MultiPoly::elementary(k as usize, n);
    let mut p = &e(i) * &e(j);
    for r in 1..=j {
        let t = (&e(i + r) * &e(j - r)).scale(&BigInt::from(if r % 2 == 0 { 2 } else { -2 }));
        p += &t;
    }
    p
}

fn qtilde_entry(a: u32, b: u32, n: usize) -> MultiPoly {
    static CACHE: Memo<(u32, u32, usize), MultiPoly> = Memo::new();
    CACHE.get_or_insert_with((a, b, n), || {
        if b == 0 {
            MultiPoly::elementary(a as usize, n)
        } else {
            qtilde_two(a, b, n)
        }
    })
}

/// Pfaffian of `(Q̃_{λ_i,λ_j})` restricted to the indices in `mask`, expanded
/// along the first remaining row.
fn pfaffian(parts: &[u32], mask: u64, n: usize, memo: &mut HashMap<u64, MultiPoly>) -> MultiPoly {
    if mask == 0 {
        return MultiPoly::one(n);
    }
    if let Some(p) = memo.get(&mask) {
        return p.clone();
    }
    let first = mask.trailing_zeros() as usize;
    let rest = mask & !(1 << first);
    let mut total = MultiPoly::zero(n);
    let mut sign = true;
    for j in (first + 1)..parts.len() {
        if rest >> j & 1 == 0 {
            continue;
        }
        let entry = qtilde_entry(parts[first], parts[j], n);
        if !entry.is_zero() {
            let minor = pfaffian(parts, rest & !(1 << j), n, memo);
            let t = &entry * &minor;
            if sign {
                total += &t;
            } else {
                total -= &t;
            }
        }
        sign = !sign;
    }
    memo.insert(mask, total.clone());
    total
}

/// The type A Schubert polynomial `𝔖_ϖ = ∂_{ϖ⁻¹ϖ_0}(x_1^{n-1} ⋯ x_{n-1})`.
pub fn schubert_a(varpi: &SignedPermutation, n: usize) -> MultiPoly {
    static CACHE: Memo<SignedPermutation, MultiPoly> = Memo::new();
    assert!(varpi.is_unsigned(), "{varpi} is not in S_n");
    assert_eq!(varpi.rank(), n);
    CACHE.get_or_insert_with(varpi.clone(), || {
        let v = varpi.inverse().multiply(&SignedPermutation::longest_unsigned(n)).unwrap();
        MultiPoly::staircase_monomial(n).divided_difference_element(&v).expect("reduced word")
    })
}

/// Whether `a_1 > ⋯ > a_k < ⋯ < a_m` for some `k`.
pub fn is_unimodal(word: &[usize]) -> bool {
    let mut i = 1;
    while i < word.len() && word[i] < word[i - 1] {
        i += 1;
    }
    while i < word.len() && word[i] > word[i - 1] {
        i += 1;
    }
    i >= word.len()
}

/// Length of the longest unimodal subsequence.
pub fn longest_unimodal_subsequence(word: &[usize]) -> usize {
    let m = word.len();
    let mut dec = vec![1usize; m];
    let mut uni = vec![1usize; m];
    for i in 0..m {
        for j in 0..i {
            if word[j] > word[i] {
                dec[i] = dec[i].max(dec[j] + 1);
            }
        }
        uni[i] = dec[i];
        for j in 0..i {
            if word[j] < word[i] {
                uni[i] = uni[i].max(uni[j] + 1);
            }
        }
    }
    uni.into_iter().max().unwrap_or(0)
}

/// A Kraśkiewicz tableau, stored by rows `t_1, ..., t_r` with `|t_i| = λ_i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KraskiewiczTableau {
    pub shape: Partition,
    pub rows: Vec<Vec<usize>>,
}

impl KraskiewiczTableau {
    /// The row word `t_r ⋯ t_1`.
    pub fn row_word(&self) -> Vec<usize> {
        self.rows.iter().rev().flatten().copied().collect()
    }
}

struct TableauSearch<'a> {
    lengths: Vec<usize>,
    word: Vec<usize>,
    visit: &'a mut dyn FnMut(&[usize]),
}

impl TableauSearch<'_> {
    /// Extends the row word by one letter. `row` counts rows from the bottom,
    /// `pos` is the position inside that row and `rest = prefix⁻¹ · u`.
    fn extend(&mut self, rest: &SignedPermutation, row: usize, pos: usize, increasing: bool) {
        if row == self.lengths.len() {
            (self.visit)(&self.word);
            return;
        }
        let len = self.lengths[row];
        let rest_inv = rest.inverse();
        let last = if pos > 0 { Some(*self.word.last().unwrap()) } else { None };
        for a in 0..rest.rank() {
            if !rest_inv.has_right_descent(a) {
                continue;
            }
            let now_increasing = match last {
                None => false,
                Some(l) if a == l => continue,
                Some(l) if a > l => true,
                Some(_) if increasing => continue,
                Some(_) => false,
            };
            self.word.push(a);
            let next = rest.mul_left(a).unwrap();
            if pos + 1 == len {
                if longest_unimodal_subsequence(&self.word) == len {
                    self.extend(&next, row + 1, 0, false);
                }
            } else {
                self.extend(&next, row, pos + 1, now_increasing);
            }
            self.word.pop();
        }
    }
}

fn search_tableaux(u: &SignedPermutation, lambda: &Partition, visit: &mut dyn FnMut(&[usize])) {
    if !lambda.is_strict() || lambda.weight() as usize != u.length() {
        return;
    }
    let lengths: Vec<usize> = lambda.parts().iter().rev().map(|&p| p as usize).collect();
    let mut search = TableauSearch { lengths, word: Vec::with_capacity(u.length()), visit };
    search.extend(u, 0, 0, false);
}

/// All Kraśkiewicz tableaux for `u` of the strict shape `λ`.
pub fn kraskiewicz_tableaux(u: &SignedPermutation, lambda: &Partition) -> Vec<KraskiewiczTableau> {
    let mut out = Vec::new();
    let parts = lambda.parts().to_vec();
    search_tableaux(u, lambda, &mut |word| {
        let mut rows = Vec::with_capacity(parts.len());
        let mut end = word.len();
        for &p in &parts {
            rows.push(word[end - p as usize..end].to_vec());
            end -= p as usize;
        }
        out.push(KraskiewiczTableau { shape: lambda.clone(), rows });
    });
    out
}

/// The number of Kraśkiewicz tableaux for `u` of shape `λ`; zero unless `λ`
/// is strict with `|λ| = ℓ(u)`.
pub fn kraskiewicz_count(u: &SignedPermutation, lambda: &Partition) -> u64 {
    let mut count = 0;
    search_tableaux(u, lambda, &mut |_| count += 1);
    count
}

/// Strict partitions of `d` that can occur as Kraśkiewicz shapes in `W_n`:
/// a unimodal word over `{0, ..., n-1}` has at most `2n - 1` letters.
fn candidate_shapes(d: usize, n: usize) -> Vec<Partition> {
    Partition::all_of_weight(d as u32, (2 * n - 1).max(1) as u32).into_iter().filter(Partition::is_strict).collect()
}

/// The nonzero coefficients `e^w_{λ,ϖ}`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct BHCoefficients {
    entries: BTreeMap<(Partition, SignedPermutation), u64>,
}

impl BHCoefficients {
    pub fn get(&self, lambda: &Partition, varpi: &SignedPermutation) -> u64 {
        self.entries.get(&(lambda.clone(), varpi.clone())).copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Partition, &SignedPermutation, u64)> {
        self.entries.iter().map(|((l, v), &c)| (l, v, c))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// `e^w_{λ,ϖ}` = number of Kraśkiewicz tableaux of shape `λ` for `wϖ⁻¹`,
/// whenever `ℓ(wϖ⁻¹) = ℓ(w) - ℓ(ϖ)`, for `λ ∈ 𝒟_n`.
pub fn bh_coefficients(w: &SignedPermutation) -> BHCoefficients {
    static CACHE: Memo<SignedPermutation, BHCoefficients> = Memo::new();
    CACHE.get_or_insert_with(w.clone(), || bh_restricted(w))
}

fn bh_restricted(w: &SignedPermutation) -> BHCoefficients {
    let n = w.rank() as u32;
    let mut all = bh_coefficients_all(w);
    all.entries.retain(|(lambda, _), _| lambda.largest() <= n);
    all
}

/// Same as [`bh_coefficients`] but keeping shapes with `λ_1 > n`. Those do
/// occur (for instance for `w_0`), and drop out of `𝔠_w` because
/// `Q̃_λ(X_n) = 0` for them.
pub fn bh_coefficients_all(w: &SignedPermutation) -> BHCoefficients {
    let n = w.rank();
    let lw = w.length();
    let mut entries = BTreeMap::new();
    for varpi in SignedPermutation::all_unsigned(n) {
        let lv = varpi.length();
        if lv > lw {
            continue;
        }
        let u = w.multiply(&varpi.inverse()).unwrap();
        if u.length() != lw - lv {
            continue;
        }
        for lambda in candidate_shapes(lw - lv, n) {
            let c = kraskiewicz_count(&u, &lambda);
            if c > 0 {
                entries.insert((lambda, varpi.clone()), c);
            }
        }
    }
    BHCoefficients { entries }
}
