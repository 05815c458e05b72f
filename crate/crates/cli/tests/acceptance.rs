//! Acceptance criteria 1 to 8, one verdict line each, exact comparisons only.
//!
//! Expected values are either published numbers typed in below or come from
//! independent routes computed here (brute force, alternative formulas), never
//! from the code path under test. Sub-checks print indented under their
//! criterion. The process exits nonzero if any criterion fails.

use std::collections::{BTreeMap, HashMap};
use std::process::Command;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sp_schubert::arakelov::{ArakelovContext, ArakelovError};
use sp_schubert::invforms::{frame, omega_volume, InvForm};
use sp_schubert::linalg::rank;
use sp_schubert::polyring::MultiPoly;
use sp_schubert::qbasis::{bh_coefficients, kraskiewicz_count, qtilde, qtilde_by_definition, schubert_a};
use sp_schubert::symplectic::{
    c_pair, expand, ideal_membership, scalar_product, schubert_c, structure_constants, CExpansion,
};
use sp_schubert::weyl::{Partition, SignedPermutation};

struct Check {
    name: String,
    ok: bool,
    detail: String,
}

#[derive(Default)]
struct Criterion {
    checks: Vec<Check>,
}

impl Criterion {
    fn check(&mut self, name: impl Into<String>, ok: bool, detail: impl Into<String>) {
        self.checks.push(Check { name: name.into(), ok, detail: detail.into() });
    }

    fn ok(&self) -> bool {
        self.checks.iter().all(|c| c.ok)
    }
}

fn report(id: u32, title: &str, c: &Criterion, elapsed: Duration) -> bool {
    let verdict = if c.ok() { "PASS" } else { "FAIL" };
    let failed = c.checks.iter().filter(|k| !k.ok).count();
    let summary = if failed == 0 {
        format!("{} checks", c.checks.len())
    } else {
        format!("{failed} of {} checks failed", c.checks.len())
    };
    println!("criterion {id}: {verdict}  {title} ({summary}, {:.2} s)", elapsed.as_secs_f64());
    for k in &c.checks {
        let tag = if k.ok { "ok  " } else { "FAIL" };
        if k.detail.is_empty() {
            println!("    {tag} {}", k.name);
        } else {
            println!("    {tag} {}: {}", k.name, k.detail);
        }
    }
    c.ok()
}

fn cli(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_spschubert")).args(args).output().expect("binary runs");
    (out.status.code().unwrap_or(-1), String::from_utf8_lossy(&out.stdout).into_owned())
}

fn q(a: i64, b: i64) -> BigRational {
    BigRational::new(a.into(), b.into())
}

fn sign(k: usize) -> BigInt {
    if k % 2 == 0 {
        BigInt::one()
    } else {
        -BigInt::one()
    }
}

fn factorial(k: usize) -> BigInt {
    (1..=k).map(BigInt::from).product()
}

fn random_poly(rng: &mut ChaCha8Rng, n: usize, max_deg: u32) -> MultiPoly {
    let mut p = MultiPoly::zero(n);
    for _ in 0..rng.gen_range(1..8) {
        let mut e = vec![0u32; n];
        for _ in 0..rng.gen_range(0..=max_deg) {
            e[rng.gen_range(0..n)] += 1;
        }
        p += &MultiPoly::monomial(n, &e, rng.gen_range(-9i64..=9));
    }
    p
}

// Criterion 1

fn criterion_1() -> Criterion {
    let mut c = Criterion::default();
    let t = Instant::now();
    let (code, out) = cli(&["table", "--n", "3", "--check"]);
    let secs = t.elapsed().as_secs_f64();
    let last = out.lines().last().unwrap_or_default().to_string();
    c.check("table --n 3 --check exits 0", code == 0, format!("exit {code}, {last:?}"));
    c.check("all 48 rows match", last == "check: 48/48 rows match", last.clone());
    c.check("runs in under 30 s", secs < 30.0, format!("{secs:.2} s"));
    let rows = out.lines().filter(|l| l.contains(" | ")).count();
    c.check("table lists all of W_3", rows == 48, format!("{rows} rows"));
    c
}

// Criterion 2

fn criterion_2() -> Criterion {
    let mut c = Criterion::default();
    let t = Instant::now();
    let ctx = ArakelovContext::get(2).unwrap();
    let published = [([5u32, 0u32], 10i64), ([4, 1], -8), ([3, 2], -16), ([2, 3], 6), ([1, 4], 26), ([0, 5], 0)];
    for (k, r) in published {
        let d = ctx.arith_monomial_degree(&k).unwrap();
        c.check(
            format!("x1^{} x2^{} = {r} Omega", k[0], k[1]),
            d.omega_coefficient == q(r, 1) && d.degree == q(r, 12),
            format!("r = {}, degree = {}", d.omega_coefficient, d.degree),
        );
    }
    let secs = t.elapsed().as_secs_f64();
    c.check("six classes in under 10 s", secs < 10.0, format!("{secs:.2} s"));

    // Independent route: iterated arithmetic products of x̂_1, x̂_2.
    let x = [ctx.x_hat(1).unwrap(), ctx.x_hat(2).unwrap()];
    let mut agree = true;
    for (k, r) in published {
        let mut p = ctx.arith_class(&MultiPoly::one(2)).unwrap();
        for (i, &e) in k.iter().enumerate() {
            for _ in 0..e {
                p = ctx.arith_product(&p, &x[i]).unwrap();
            }
        }
        agree &= p.schubert_part().is_empty() && ctx.frame().top_coefficient(p.form_part()).unwrap() == q(r, 1);
    }
    c.check("same six values by iterated products of x-hat", agree, "");

    let (code, out) = cli(&["arakelov", "--n", "2", "--mono", "5,0"]);
    c.check(
        "arakelov --n 2 --mono 5,0",
        code == 0 && out.starts_with("r = 10\ndegree = 5/6\n"),
        out.lines().take(2).collect::<Vec<_>>().join(", "),
    );
    c
}

// Criterion 3

fn criterion_3() -> Criterion {
    let mut c = Criterion::default();
    let (code, out) = cli(&["height", "--n", "2"]);
    c.check("height --n 2 prints 925/6", code == 0 && out.trim() == "925/6", out.trim().to_string());
    let (_, json) = cli(&["height", "--n", "2", "--json"]);
    let v: serde_json::Value = serde_json::from_str(&json).unwrap();
    c.check(
        "(x1 + 2 x2)^5 = 1850 Omega",
        v["omega_coefficient"] == "1850",
        format!("omega_coefficient = {}", v["omega_coefficient"]),
    );
    // Cross-check from the six published monomial values and the binomial expansion.
    let published = [10i64, -8, -16, 6, 26, 0];
    let r: i64 = (0..=5).map(|b| binom(5, b) * (1i64 << b) * published[b as usize]).sum();
    c.check("binomial expansion of the monomial values gives 1850", r == 1850, format!("{r}"));
    c
}

fn binom(n: i64, k: i64) -> i64 {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

// Criterion 4

fn criterion_4() -> Criterion {
    let mut c = Criterion::default();
    let ctx = ArakelovContext::get(2).unwrap();
    let f = ctx.frame();
    let o12 = f.omega_lower(1, 2).unwrap();
    let (p11, p12, p22) = (f.omega_upper(1, 1).unwrap(), f.omega_upper(1, 2).unwrap(), f.omega_upper(2, 2).unwrap());
    let xi1 = &(&p11 + &p12.scale_int(2)) + &p22;
    let xi2 = &(&(&p11 * &p22) + &(&p11 * &p12).scale_int(2)) + &(&p12 * &p22).scale_int(2);
    c.check("xi1^2 = 2 xi2", xi1.pow(2) == xi2.scale_int(2), "");

    let lg = ctx.lagrangian().total().unwrap();
    let lg_pub = &(-&xi1) + &(&(&p11 * &p12) * &p22).scale_int(11);
    let lg_xi = &(-&xi1) + &(&xi1 * &xi2).scale(&q(11, 6));
    c.check("c~(E_LG) = -O^11 - 2 O^12 - O^22 + 11 O^11 O^12 O^22", lg == lg_pub, f.render(&lg));
    c.check("c~(E_LG) = -xi1 + 11/6 xi1 xi2", lg == lg_xi, "");

    let e = ctx.filtration().total().unwrap();
    let e_dual = ctx.filtration_dual().total().unwrap();
    c.check("c~(E) = -O_12", e == -&o12, f.render(&e));
    c.check("c~(E*) = -O_12", e_dual == -&o12, f.render(&e_dual));

    let ddc = f.ddc(&o12).unwrap();
    let ddc_pub = &p12 * &(&p11 + &p22);
    c.check("dd^c(O_12) = O^12 (O^11 + O^22) as printed", ddc == ddc_pub, format!("computed {}", f.render(&ddc)));
    let extra = &o12 * &(&p22 - &p11);
    c.check(
        "dd^c(O_12) = O^12 (O^11 + O^22) + O_12 (O^22 - O^11)",
        ddc == &ddc_pub + &extra,
        "the second summand is forced by dd^c x1 = 0",
    );
    c.check("dd^c(O_12) ^ O_12 = O^12 (O^11 + O^22) ^ O_12", &ddc * &o12 == &ddc_pub * &o12, "");
    let x1 = f.x_form(1).unwrap();
    c.check("x1 = -O_12 + O^11 + O^12 is d-closed with dd^c x1 = 0", f.d(&x1).is_zero() && f.ddc(&x1).unwrap().is_zero(), "");
    let pieces = &(&(-&ddc_pub) + &f.ddc(&p11).unwrap()) + &f.ddc(&p12).unwrap();
    c.check("the printed dd^c(O_12) would give dd^c x1 != 0", !pieces.is_zero(), f.render(&pieces));

    let pair = ctx.pair().total().unwrap();
    let pair_first = &(&(&(-&xi1) - &o12.scale_int(2)) - &(&o12 * &xi2).scale_int(2))
        + &(&(&(&p11 * &p12) * &p22).scale_int(11) + &(&(&o12 * &p12) * &(&p11 + &p22)));
    let pair_second = &(-&xi1) - &o12.scale_int(2) - (&(&o12 * &p11) * &p22).scale_int(2)
        - (&(&o12 * &p11) * &p12).scale_int(3)
        - (&(&o12 * &p12) * &p22).scale_int(3)
        + (&(&p11 * &p12) * &p22).scale_int(11);
    c.check("c~(E,E*), first printed form", pair == pair_first, f.render(&pair));
    c.check("c~(E,E*), expanded printed form", pair == pair_second, "");
    c
}

// Criterion 5

fn dw(f: &MultiPoly, letters: &[usize]) -> MultiPoly {
    letters.iter().rev().fold(f.clone(), |g, &i| g.divided_difference(i).unwrap())
}

fn power(x: &SignedPermutation, k: usize) -> SignedPermutation {
    (0..k).fold(SignedPermutation::identity(x.rank()), |p, _| p.multiply(x).unwrap())
}

fn coxeter(n: usize) -> bool {
    let s: Vec<_> = (0..n).map(|a| SignedPermutation::generator(n, a).unwrap()).collect();
    for i in 0..n {
        if !power(&s[i], 2).is_identity() || s[i].is_identity() {
            return false;
        }
        for j in i + 1..n {
            let m = match (i, j) {
                (0, 1) => 4,
                _ if j == i + 1 => 3,
                _ => 2,
            };
            let p = s[i].multiply(&s[j]).unwrap();
            if !power(&p, m).is_identity() || (1..m).any(|k| power(&p, k).is_identity()) {
                return false;
            }
        }
    }
    true
}

fn phi_homomorphism(n: usize) -> bool {
    let compose = |p: &[usize], q: &[usize]| -> Vec<usize> { q.iter().map(|&k| p[k - 1]).collect() };
    let all = SignedPermutation::all(n);
    let phis: HashMap<&SignedPermutation, Vec<usize>> = all.iter().map(|w| (w, w.embed_phi())).collect();
    all.iter().all(|u| all.iter().all(|v| u.multiply(v).unwrap().embed_phi() == compose(&phis[u], &phis[v])))
}

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
            let mut row = vec![BigInt::zero(); columns.len()];
            for (m, c) in p.terms() {
                row[columns[m.exps()]] = c.clone();
            }
            row
        })
        .collect()
}

fn descent_violations(target: impl Fn(&SignedPermutation, &SignedPermutation) -> SignedPermutation) -> usize {
    let mut bad = 0;
    for w in SignedPermutation::all(3) {
        let cw = schubert_c(&w);
        for pi in SignedPermutation::all_unsigned(3) {
            let d = cw.divided_difference_element(&pi).unwrap();
            let t = target(&w, &pi);
            let expected = if t.length() + pi.length() == w.length() {
                schubert_c(&t).scale(&sign(pi.length()))
            } else {
                MultiPoly::zero(3)
            };
            bad += usize::from(d != expected);
        }
    }
    bad
}

/// Counts of (entries checked, entries wrong) for (orth) under a pairing.
fn orth_counts(pairing: &dyn Fn(&MultiPoly, &MultiPoly, usize) -> MultiPoly) -> (usize, usize) {
    let (mut total, mut bad) = (0, 0);
    for n in 1..=3 {
        let all = SignedPermutation::all(n);
        let w0 = SignedPermutation::longest(n);
        let polys: Vec<MultiPoly> = all.iter().map(schubert_c).collect();
        for (u, cu) in all.iter().zip(&polys) {
            for (v, cv) in all.iter().zip(&polys) {
                if u.length() + v.length() > n * n {
                    continue;
                }
                let expected = if *v == w0.multiply(u).unwrap() { MultiPoly::one(n) } else { MultiPoly::zero(n) };
                total += 1;
                bad += usize::from(pairing(cu, cv, n) != expected);
            }
        }
    }
    (total, bad)
}

fn orth2_counts(pairing: &dyn Fn(&MultiPoly, &MultiPoly, usize) -> MultiPoly) -> (usize, usize) {
    let (mut total, mut bad) = (0, 0);
    for n in 1..=3 {
        let perms = SignedPermutation::all_unsigned(n);
        let strict = Partition::strict_bounded(n);
        let varpi0 = SignedPermutation::longest_unsigned(n);
        let bound = n * (n - 1) / 2;
        for l in &strict {
            for rho in &perms {
                let a = c_pair(l, rho, n).unwrap();
                for mu in &strict {
                    for pi in &perms {
                        if rho.length() + pi.length() > bound {
                            continue;
                        }
                        let b = c_pair(mu, pi, n).unwrap();
                        let dual = *mu == l.strict_complement(n).unwrap() && *pi == varpi0.multiply(rho).unwrap();
                        let expected = if dual { MultiPoly::one(n) } else { MultiPoly::zero(n) };
                        total += 1;
                        bad += usize::from(pairing(&a, &b, n) != expected);
                    }
                }
            }
        }
    }
    (total, bad)
}

fn criterion_5() -> Criterion {
    let mut c = Criterion::default();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);

    c.check("Coxeter relations, n <= 4", (1..=4).all(coxeter), "");
    c.check("phi is a homomorphism W_n -> S_2n, n <= 3", (1..=3).all(phi_homomorphism), "");

    let mut braid_ok = true;
    let mut words_ok = true;
    for _ in 0..200 {
        let n = rng.gen_range(1..=3);
        let f = random_poly(&mut rng, n, 6);
        for i in 0..n {
            for j in i + 1..n {
                braid_ok &= if j >= i + 2 {
                    dw(&f, &[i, j]) == dw(&f, &[j, i])
                } else if i == 0 {
                    dw(&f, &[0, 1, 0, 1]) == dw(&f, &[1, 0, 1, 0])
                } else {
                    dw(&f, &[i, j, i]) == dw(&f, &[j, i, j])
                };
            }
        }
        let w = SignedPermutation::all(n).choose(&mut rng).unwrap().clone();
        let words = w.reduced_words(Some(12));
        let first = dw(&f, words[0].letters());
        words_ok &= words.iter().all(|wd| dw(&f, wd.letters()) == first);
        words_ok &= f.divided_difference_element(&w).unwrap() == first;
    }
    c.check("braid relations of the divided differences, 200 random polynomials", braid_ok, "");
    c.check("reduced-word independence of d_w, 200 random polynomials", words_ok, "");

    let mut indep = true;
    for n in 1..=4 {
        for d in 0..=8 {
            let polys: Vec<MultiPoly> = Partition::all_of_weight(d, n as u32).iter().map(|l| qtilde(l, n)).collect();
            indep &= rank(&coefficient_rows(&polys)) == polys.len();
        }
    }
    c.check("Q~_lambda (lambda_1 <= n) independent in each degree <= 8, n <= 4", indep, "");
    let mut vanish = true;
    for n in 1..=3usize {
        for d in 1..=8 {
            for l in Partition::all_of_weight(d, d) {
                if l.largest() as usize > n {
                    vanish &= qtilde_by_definition(&l, n).is_zero();
                }
            }
        }
    }
    c.check("Q~_lambda(X_n) = 0 when lambda_1 > n (weights <= 8, n <= 3)", vanish, "");

    let mut stab_a = true;
    let mut stab_c = true;
    for n in 2..=4usize {
        for m in 1..n {
            for w in SignedPermutation::all_unsigned(m) {
                stab_a &= schubert_a(&w.embed(n), n).truncate(m) == schubert_a(&w, m);
            }
            let mut elems = SignedPermutation::all(m);
            elems.shuffle(&mut rng);
            elems.truncate(12);
            for w in elems {
                stab_c &= schubert_c(&w.embed(n)).truncate(m) == schubert_c(&w);
            }
        }
    }
    c.check("stability of type A Schubert polynomials, m < n <= 4", stab_a, "");
    c.check("stability of c_w, m < n <= 4, 12 sampled w per (m, n)", stab_c, "");

    let mut grass = true;
    for n in 1..=3 {
        for lambda in Partition::strict_bounded(n) {
            let w = SignedPermutation::max_grassmannian(&lambda, n).unwrap();
            grass &= schubert_c(&w) == qtilde(&lambda, n);
        }
    }
    c.check("(d) c_{w_lambda} = Q~_lambda, n <= 3", grass, "");

    let literal = descent_violations(|w, pi| w.multiply(pi).unwrap());
    let inverse = descent_violations(|w, pi| w.multiply(&pi.inverse()).unwrap());
    c.check("(e) d_pi c_w = (-1)^l(pi) c_{w pi} as printed, n = 3", literal == 0, format!("{literal} of 288 pairs violate"));
    c.check("(e) with w pi^-1 in place of w pi, n = 3", inverse == 0, format!("{inverse} of 288 pairs violate"));

    let literal_pairing = |f: &MultiPoly, g: &MultiPoly, n: usize| scalar_product(f, g, n).unwrap();
    let unsigned = |f: &MultiPoly, g: &MultiPoly, _n: usize| {
        (f * g).divided_difference_element(&SignedPermutation::longest(f.nvars())).unwrap()
    };
    let (t1, b1) = orth_counts(&literal_pairing);
    c.check("(orth) with <f,g> = (-1)^{n(n-1)/2} d_w0(fg), n <= 3", b1 == 0, format!("{b1} of {t1} entries differ"));
    let (t2, b2) = orth_counts(&unsigned);
    c.check("(orth) with the unsigned pairing d_w0(fg), n <= 3", b2 == 0, format!("{b2} of {t2} entries differ"));
    let (t3, b3) = orth2_counts(&literal_pairing);
    c.check("(orth2) with <f,g> = (-1)^{n(n-1)/2} d_w0(fg), n <= 3", b3 == 0, format!("{b3} of {t3} entries differ"));
    let (t4, b4) = orth2_counts(&unsigned);
    c.check("(orth2) with the unsigned pairing d_w0(fg), n <= 3", b4 == 0, format!("{b4} of {t4} entries differ"));

    let mut round = true;
    let mut membership = true;
    for _ in 0..100 {
        let n = rng.gen_range(1..=3);
        let h = random_poly(&mut rng, n, 6);
        let e = expand(&h, n).unwrap();
        round &= e.reconstruct() == h;
        // The printed expansion must parse back to the same polynomial.
        round &= sp_schubert_cli::expr::parse_poly(&e.to_string(), n).unwrap() == h;
        membership &= ideal_membership(&h, n).unwrap().0 == e.schubert_part().is_empty();
    }
    c.check("expansion round-trip, 100 random polynomials, n <= 3, degree <= 6", round, "");
    c.check("ideal verdict agrees with the expansion", membership, "");
    c
}

// Criterion 6

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

/// Tableaux counted by enumerating every reduced word and cutting it into rows.
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

fn criterion_6() -> Criterion {
    let mut c = Criterion::default();
    let (mut pairs, mut bad) = (0, 0);
    for n in 1..=3usize {
        for u in SignedPermutation::all(n) {
            let l = u.length();
            if l > 7 {
                continue;
            }
            for lambda in Partition::all_of_weight(l as u32, l as u32) {
                let expected = if lambda.is_strict() { brute_force_count(&u, &lambda) } else { 0 };
                pairs += 1;
                bad += usize::from(kraskiewicz_count(&u, &lambda) != expected);
            }
        }
    }
    c.check("Kraskiewicz count = brute force, l(u) <= 7, n <= 3", bad == 0, format!("{bad} of {pairs} (u, lambda) differ"));

    let n = 2;
    let mut disagree = 0;
    for u in SignedPermutation::all(n) {
        for v in SignedPermutation::all(n) {
            let direct = structure_constants(&u, &v).unwrap();
            let mut termwise = CExpansion::zero(n);
            for (l1, p1, e1) in bh_coefficients(&u).iter() {
                for (l2, p2, e2) in bh_coefficients(&v).iter() {
                    let prod = &c_pair(l1, p1, n).unwrap() * &c_pair(l2, p2, n).unwrap();
                    for (index, k) in expand(&prod, n).unwrap().iter() {
                        termwise.add(index.clone(), k * BigInt::from(e1 * e2));
                    }
                }
            }
            disagree += usize::from(direct != termwise);
        }
    }
    c.check("structure constants two ways, all 64 pairs in W_2", disagree == 0, format!("{disagree} pairs differ"));
    c
}

// Criterion 7

fn criterion_7() -> Criterion {
    let mut c = Criterion::default();
    for n in 2..=3usize {
        let f = frame(n).unwrap();
        let mut prod = InvForm::one(n);
        for k in 1..=n {
            prod = &prod * &(-f.c1_quotient(k).unwrap()).pow((2 * n - 2 * k + 1) as u32);
        }
        let expected: BigInt = (1..=n).map(|k| factorial(2 * k - 1)).product();
        let got = f.top_coefficient(&prod).unwrap();
        c.check(
            format!("n = {n}: prod c1(Q_k*)^(2n-2k+1) = {expected} Omega"),
            got == BigRational::from_integer(expected),
            format!("{got} Omega"),
        );
    }
    let f = frame(2).unwrap();
    let vol = f.integrate_top(&f.top()).unwrap();
    c.check("integral of Omega = 1/6 at n = 2", vol == q(1, 6) && omega_volume(2) == q(1, 6), vol.to_string());
    c
}

// Criterion 8

fn criterion_8() -> Criterion {
    let mut c = Criterion::default();
    let ctx = ArakelovContext::get(2).unwrap();
    let mut count = 0;
    let mut all_ok = true;
    let mut check_top = |h: &MultiPoly| {
        let class = ctx.arith_class(h).unwrap();
        let d = ctx.top_degree(h).unwrap();
        count += 1;
        all_ok &= class.schubert_part().is_empty()
            && class.form_part().is_class_ready()
            && d.degree == &d.omega_coefficient * omega_volume(2) / BigRational::from_integer(2.into());
    };
    for k1 in 0..=5u32 {
        check_top(&MultiPoly::monomial(2, &[k1, 5 - k1], 1));
    }
    let all = SignedPermutation::all(2);
    for u in &all {
        for v in &all {
            let l = u.length() + v.length();
            if l <= 5 {
                let x1 = MultiPoly::var(2, 1).pow((5 - l) as u32);
                check_top(&(&(&schubert_c(u) * &schubert_c(v)) * &x1));
            }
        }
    }
    let l = &MultiPoly::var(2, 1) + &MultiPoly::var(2, 2).scale(&BigInt::from(2));
    check_top(&l.pow(5));
    c.check(
        format!("{count} arithmetic degrees at n = 2 are exact rationals with zero gamma-weight"),
        all_ok,
        "",
    );

    // Beyond n = 2 the missing Bott-Chern components must be reported, not guessed.
    let ctx3 = ArakelovContext::get(3).unwrap();
    let unsupported = matches!(
        ctx3.arith_class(&MultiPoly::elementary_squares(2, 3)),
        Err(ArakelovError::Unsupported { .. })
    );
    let (code, _) = cli(&["height", "--n", "3"]);
    c.check("n = 3 degrees needing unavailable components return Unsupported", unsupported && code == 1, "");
    c
}

fn main() {
    let start = Instant::now();
    let criteria: [(u32, &str, fn() -> Criterion); 8] = [
        (2, "Sp4/B monomial classes", criterion_2),
        (1, "W_3 reference table", criterion_1),
        (3, "Faltings height of Sp4/B", criterion_3),
        (4, "hermitian fixtures at n = 2", criterion_4),
        (5, "property suites", criterion_5),
        (6, "oracle equivalences", criterion_6),
        (7, "normalization", criterion_7),
        (8, "rationality", criterion_8),
    ];
    let mut results = BTreeMap::new();
    for (id, title, run) in criteria {
        let t = Instant::now();
        let c = run();
        results.insert(id, (title, c, t.elapsed()));
    }
    let mut failed = Vec::new();
    for (id, (title, c, elapsed)) in &results {
        if !report(*id, title, c, *elapsed) {
            failed.push(*id);
        }
    }
    println!("acceptance: {} of 8 criteria pass ({:.1} s)", 8 - failed.len(), start.elapsed().as_secs_f64());
    if !failed.is_empty() {
        println!("failing criteria: {failed:?}");
        std::process::exit(1);
    }
}
