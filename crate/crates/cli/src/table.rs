//! Tables of `𝔠_w` in the basis `Q̃_λ 𝔖_ϖ`, and the bundled reference for `W_3`.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use sp_schubert::symplectic::schubert_c_terms;
use sp_schubert::weyl::{Partition, SignedPermutation, Word};

const FIXTURE_W3: &str = include_str!("../fixtures/table_w3.json");

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableTerm {
    pub lambda: Vec<u32>,
    pub pi: Vec<i32>,
    pub coeff: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableRow {
    pub w: Vec<i32>,
    pub word: String,
    pub terms: Vec<TableTerm>,
}

#[derive(Debug, Clone, Deserialize)]
pub struct Fixture {
    pub rank: usize,
    pub rows: Vec<TableRow>,
}

pub fn bundled_fixture(n: usize) -> Option<Fixture> {
    match n {
        3 => Some(serde_json::from_str(FIXTURE_W3).expect("bundled fixture is valid JSON")),
        _ => None,
    }
}

/// One computed row.
pub fn row(w: &SignedPermutation) -> TableRow {
    let terms = schubert_c_terms(w)
        .into_iter()
        .map(|t| TableTerm {
            lambda: t.lambda.parts().to_vec(),
            pi: t.pi.entries().to_vec(),
            coeff: i64::try_from(&t.coeff).expect("table coefficients are small"),
        })
        .collect();
    TableRow { w: w.entries().to_vec(), word: w.first_reduced_word().to_string(), terms }
}

/// All of `W_n`, ordered by length and then by the lexicographically first
/// reduced word.
pub fn table(n: usize) -> Vec<TableRow> {
    let mut ws: Vec<(usize, Vec<usize>, SignedPermutation)> = SignedPermutation::all(n)
        .into_iter()
        .map(|w| (w.length(), w.first_reduced_word().letters().to_vec(), w))
        .collect();
    ws.sort();
    ws.iter().map(|(_, _, w)| row(w)).collect()
}

type TermKey = (Vec<u32>, Vec<i32>);

fn term_map(terms: &[TableTerm]) -> BTreeMap<TermKey, i64> {
    let mut m = BTreeMap::new();
    for t in terms {
        let lambda = Partition::new(t.lambda.clone()).parts().to_vec();
        *m.entry((lambda, t.pi.clone())).or_insert(0) += t.coeff;
    }
    m.retain(|_, c| *c != 0);
    m
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct CheckReport {
    pub rows_checked: usize,
    pub rows_matched: usize,
    pub mismatches: Vec<String>,
}

impl CheckReport {
    pub fn ok(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Compares a computed table against a reference row by row, keyed by the
/// element. Each reference word must also evaluate to its element, and the
/// reference must cover the group exactly once.
pub fn check(n: usize, computed: &[TableRow], reference: &Fixture) -> CheckReport {
    let mut report = CheckReport::default();
    if reference.rank != n {
        report.mismatches.push(format!("reference has rank {}, expected {n}", reference.rank));
        return report;
    }
    let by_w: BTreeMap<&[i32], &TableRow> = computed.iter().map(|r| (r.w.as_slice(), r)).collect();
    let mut seen = BTreeSet::new();
    for r in &reference.rows {
        report.rows_checked += 1;
        let label = format!("[{}]", r.w.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" "));
        if !seen.insert(r.w.clone()) {
            report.mismatches.push(format!("{label}: listed twice"));
            continue;
        }
        match r.word.parse::<Word>().map(|wd| SignedPermutation::from_word(n, &wd)) {
            Ok(Ok(w)) if w.entries() == r.w.as_slice() => {}
            _ => report.mismatches.push(format!("{label}: word {:?} does not give this element", r.word)),
        }
        let Some(mine) = by_w.get(r.w.as_slice()) else {
            report.mismatches.push(format!("{label}: not an element of W_{n}"));
            continue;
        };
        let (want, got) = (term_map(&r.terms), term_map(&mine.terms));
        if want == got {
            report.rows_matched += 1;
        } else {
            report.mismatches.push(format!("{label}: expected {want:?}, computed {got:?}"));
        }
    }
    for r in computed {
        if !seen.contains(&r.w) {
            report.mismatches.push(format!("{:?}: missing from the reference", r.w));
        }
    }
    report
}

/// `"qtilde(1)*schubA(1 2 3) - qtilde()*schubA(2 1 3)"`, readable by the expression parser.
pub fn render_terms(terms: &[TableTerm]) -> String {
    if terms.is_empty() {
        return "0".into();
    }
    let mut s = String::new();
    for (i, t) in terms.iter().enumerate() {
        let a = t.coeff.unsigned_abs();
        s.push_str(match (i, t.coeff < 0) {
            (0, true) => "-",
            (0, false) => "",
            (_, true) => " - ",
            (_, false) => " + ",
        });
        if a != 1 {
            s.push_str(&format!("{a}*"));
        }
        let lambda = t.lambda.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(",");
        let pi = t.pi.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(" ");
        s.push_str(&format!("qtilde({lambda})*schubA({pi})"));
    }
    s
}
