use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::Signed;
use sp_schubert::linalg::rank;
use sp_schubert::polyring::MultiPoly;
use sp_schubert::qbasis::{bh_coefficients_all, kraskiewicz_count, qtilde, qtilde_by_definition, schubert_a};
use sp_schubert::weyl::{Partition, SignedPermutation};

fn coefficient_rows(polys: &[MultiPoly]) -> Vec<Vec<BigInt>> {
    let mut columns: BTreeMap<Vec<u32>, usize> = BTreeMap::new();
    for p in polys {
        for (m, _) in p.terms() {
            let k = columns.len();
            columns.entry(m.exps().to_vec()).or_insert(k);
        }
    }
    polys
        .iter()
        .map(|p| {
            let mut row = vec![BigInt::from(0); columns.len()];
            for (m, c) in p.terms() {
                row[columns[m.exps()]] = c.clone();
            }
            row
        })
        .collect()
}

#[test]
fn qtilde_linear_independence() {
    for n in 1..=4 {
        for d in 0..=8 {
            let polys: Vec<MultiPoly> =
                Partition::all_of_weight(d, n as u32).iter().map(|l| qtilde(l, n)).collect();
            assert_eq!(rank(&coefficient_rows(&polys)), polys.len(), "n={n} d={d}");
        }
    }
}

#[test]
fn qtilde_vanishes_beyond_rank() {
    for n in 1..=3usize {
        for d in 1..=8 {
            for l in Partition::all_of_weight(d, d) {
                let p = qtilde_by_definition(&l, n);
                if l.largest() as usize > n {
                    assert!(p.is_zero(), "Q~_{l}(X_{n})");
                } else {
                    assert_eq!(p, qtilde(&l, n));
                }
            }
        }
    }
}

#[test]
fn qtilde_factorization() {
    for n in 1..=4usize {
        for d in 0..=4 {
            for l in Partition::all_of_weight(d, n as u32) {
                for k in 1..=n as u32 {
                    let mut parts = l.parts().to_vec();
                    parts.extend([k, k]);
                    let big = qtilde(&Partition::new(parts), n);
                    let kk = qtilde(&Partition::new(vec![k, k]), n);
                    assert_eq!(big, &kk * &qtilde(&l, n), "n={n} l={l} k={k}");
                }
            }
        }
    }
}

#[test]
fn nonnegative_coefficients() {
    for n in 1..=3usize {
        for d in 0..=6 {
            for l in Partition::all_of_weight(d, n as u32) {
                assert!(qtilde(&l, n).terms().all(|(_, c)| !c.is_negative()));
            }
        }
    }
    for n in 1..=4 {
        for w in SignedPermutation::all_unsigned(n) {
            assert!(schubert_a(&w, n).terms().all(|(_, c)| !c.is_negative()));
        }
    }
}

#[test]
fn schubert_a_stability() {
    for n in 1..=3 {
        for w in SignedPermutation::all_unsigned(n) {
            let big = schubert_a(&w.embed(n + 1), n + 1);
            assert_eq!(big.truncate(n), schubert_a(&w, n));
            assert_eq!(big, schubert_a(&w, n).extend(n + 1));
        }
    }
}

/// Strictly decreasing, then strictly increasing.
fn unimodal(word: &[usize]) -> bool {
    let mut i = 1;
    while i < word.len() && word[i] < word[i - 1] {
        i += 1;
    }
    while i < word.len() && word[i] > word[i - 1] {
        i += 1;
    }
    i >= word.len()
}

fn longest_unimodal_brute(word: &[usize]) -> usize {
    (0u32..1 << word.len())
        .filter_map(|mask| {
            let sub: Vec<usize> = (0..word.len()).filter(|i| mask >> i & 1 == 1).map(|i| word[i]).collect();
            unimodal(&sub).then_some(sub.len())
        })
        .max()
        .unwrap_or(0)
}

/// Kraśkiewicz tableaux counted by enumerating every reduced word of `u` and
/// cutting it into rows `t_r, …, t_1`.
fn brute_force_count(u: &SignedPermutation, lambda: &Partition) -> u64 {
    let lengths: Vec<usize> = lambda.parts().iter().rev().map(|&p| p as usize).collect();
    let mut count = 0;
    'words: for word in u.reduced_words(None) {
        let letters = word.letters();
        let mut end = 0;
        for &len in &lengths {
            let row = &letters[end..end + len];
            end += len;
            if !unimodal(row) || longest_unimodal_brute(&letters[..end]) != len {
                continue 'words;
            }
        }
        count += 1;
    }
    count
}

#[test]
fn kraskiewicz_matches_brute_force() {
    let mut checked = 0;
    for n in 1..=3usize {
        for u in SignedPermutation::all(n) {
            let l = u.length();
            if l > 7 {
                continue;
            }
            for lambda in Partition::all_of_weight(l as u32, l as u32) {
                let expected = if lambda.is_strict() { brute_force_count(&u, &lambda) } else { 0 };
                assert_eq!(kraskiewicz_count(&u, &lambda), expected, "u={u} lambda={lambda}");
                checked += 1;
            }
        }
    }
    assert!(checked > 100);
}

#[test]
fn every_element_has_a_tableau() {
    for n in 1..=3 {
        for w in SignedPermutation::all(n) {
            assert!(!bh_coefficients_all(&w).is_empty(), "{w}");
        }
    }
}
