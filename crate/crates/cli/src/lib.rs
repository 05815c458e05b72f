//! The `spschubert` command line, kept in a library so it can be driven in-process.

pub mod expr;
pub mod table;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};
use sp_schubert::arakelov::{ArakelovContext, ArithDegree};
use sp_schubert::symplectic::{expand, ideal_membership, schubert_c, structure_constants};
use sp_schubert::weyl::SignedPermutation;

use crate::expr::{parse_element, parse_poly, ExprError};

#[derive(Debug, Parser)]
#[command(name = "spschubert", version, about = "Symplectic Schubert polynomials and arithmetic intersections on Sp(2n)/B")]
pub struct Cli {
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// The symplectic Schubert polynomial of one element.
    Cw {
        #[arg(long)]
        n: usize,
        /// A signed permutation such as "-2 1 3", or a word such as "s2 s1 s0".
        #[arg(long, allow_hyphen_values = true)]
        w: String,
    },
    /// Every polynomial of W_n in the basis qtilde(λ)*schubA(ϖ).
    Table {
        #[arg(long)]
        n: usize,
        /// Compare with the bundled reference table; exit status 2 on mismatch.
        #[arg(long)]
        check: bool,
    },
    /// Structure constants of cw(u)*cw(v).
    Mult {
        #[arg(long)]
        n: usize,
        #[arg(long, allow_hyphen_values = true)]
        u: String,
        #[arg(long, allow_hyphen_values = true)]
        v: String,
    },
    /// Expand a polynomial in the cw / cpair basis.
    Expand {
        #[arg(long)]
        n: usize,
        #[arg(long, allow_hyphen_values = true)]
        poly: String,
        /// Also report whether the polynomial lies in the ideal I_n.
        #[arg(long)]
        ideal: bool,
    },
    /// Arithmetic degree of a monomial x̂_1^k1 ⋯ x̂_n^kn of degree n²+1.
    Arakelov {
        #[arg(long)]
        n: usize,
        /// Comma separated exponents, e.g. "5,0".
        #[arg(long)]
        mono: String,
    },
    /// The Faltings height, the degree of (x̂_1 + 2x̂_2 + ⋯ + n x̂_n)^{n²+1}.
    Height {
        #[arg(long)]
        n: usize,
    },
}

/// What a run printed and its exit status.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Debug)]
struct Failure {
    kind: &'static str,
    message: String,
    position: Option<usize>,
}

impl Failure {
    fn new(kind: &'static str, e: impl ToString) -> Self {
        Self { kind, message: e.to_string(), position: None }
    }

    fn to_json(&self) -> Value {
        let mut v = json!({"error": {"kind": self.kind, "message": self.message}});
        if let Some(p) = self.position {
            v["error"]["position"] = json!(p);
        }
        v
    }
}

impl From<ExprError> for Failure {
    fn from(e: ExprError) -> Self {
        match e {
            ExprError::Parse(p) => Self { kind: "parse", message: p.message, position: Some(p.position) },
            ExprError::Eval(v) => Self::new("eval", v),
        }
    }
}

const MAX_RANK: usize = 6;

fn check_rank(n: usize) -> Result<(), Failure> {
    if n == 0 || n > MAX_RANK {
        return Err(Failure::new("argument", format!("--n must lie in 1..={MAX_RANK}, got {n}")));
    }
    Ok(())
}

fn element(s: &str, n: usize) -> Result<SignedPermutation, Failure> {
    let w = parse_element(s, Some(n)).map_err(|e| Failure::new("argument", e))?;
    if w.rank() > n {
        return Err(Failure::new("argument", format!("{w} does not lie in W_{n}")));
    }
    Ok(w.embed(n))
}

/// Text and JSON forms of a successful result, plus its exit status.
struct Output {
    text: String,
    json: Value,
    code: i32,
}

impl Output {
    fn ok(text: String, json: Value) -> Self {
        Self { text, json, code: 0 }
    }
}

fn degree_json(d: &ArithDegree) -> Value {
    json!({"omega_coefficient": d.omega_coefficient.to_string(), "degree": d.degree.to_string()})
}

fn execute(cmd: &Command) -> Result<Output, Failure> {
    match cmd {
        Command::Cw { n, w } => {
            check_rank(*n)?;
            let w = element(w, *n)?;
            let row = table::row(&w);
            let poly = schubert_c(&w);
            let text = format!(
                "w = {w}\nword = {}\nlength = {}\nterms = {}\npoly = {poly}\n",
                row.word,
                w.length(),
                table::render_terms(&row.terms)
            );
            let json = json!({
                "n": n, "w": w.entries(), "word": row.word, "length": w.length(),
                "terms": row.terms, "polynomial": poly,
            });
            Ok(Output::ok(text, json))
        }
        Command::Table { n, check } => {
            check_rank(*n)?;
            let rows = table::table(*n);
            let mut text = String::new();
            for r in &rows {
                let w = r.w.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ");
                text.push_str(&format!("{w} | {} | {}\n", r.word, table::render_terms(&r.terms)));
            }
            let mut json = json!({"n": n, "rows": rows});
            let mut code = 0;
            if *check {
                let reference = table::bundled_fixture(*n)
                    .ok_or_else(|| Failure::new("argument", format!("no reference table bundled for n = {n}")))?;
                let report = table::check(*n, &rows, &reference);
                for m in &report.mismatches {
                    text.push_str(&format!("MISMATCH {m}\n"));
                }
                text.push_str(&format!(
                    "check: {}/{} rows match{}\n",
                    report.rows_matched,
                    rows.len(),
                    if report.ok() { "" } else { " (FAILED)" }
                ));
                if !report.ok() {
                    code = 2;
                }
                json["check"] = json!({"ok": report.ok(), "rows_matched": report.rows_matched, "mismatches": report.mismatches});
            }
            Ok(Output { text, json, code })
        }
        Command::Mult { n, u, v } => {
            check_rank(*n)?;
            let (u, v) = (element(u, *n)?, element(v, *n)?);
            let e = structure_constants(&u, &v).map_err(|e| Failure::new("math", e))?;
            let text = format!("{e}\n");
            Ok(Output::ok(text, json!({"n": n, "u": u.entries(), "v": v.entries(), "expansion": e})))
        }
        Command::Expand { n, poly, ideal } => {
            check_rank(*n)?;
            let h = parse_poly(poly, *n)?;
            let e = expand(&h, *n).map_err(|e| Failure::new("math", e))?;
            let mut text = format!("{e}\n");
            let mut json = json!({"n": n, "polynomial": h, "expansion": e});
            if *ideal {
                let (member, _) = ideal_membership(&h, *n).map_err(|e| Failure::new("math", e))?;
                text.push_str(&format!("in ideal: {member}\n"));
                json["ideal_member"] = json!(member);
            }
            Ok(Output::ok(text, json))
        }
        Command::Arakelov { n, mono } => {
            check_rank(*n)?;
            let k = mono
                .split(',')
                .map(|t| t.trim().parse::<u32>())
                .collect::<Result<Vec<_>, _>>()
                .map_err(|_| Failure::new("argument", format!("bad --mono {mono:?}, expected e.g. 5,0")))?;
            let ctx = ArakelovContext::get(*n).map_err(|e| Failure::new("math", e))?;
            let d = ctx.arith_monomial_degree(&k).map_err(|e| Failure::new("math", e))?;
            let h = sp_schubert::polyring::MultiPoly::monomial(*n, &k, 1);
            let class = ctx.arith_class(&h).map_err(|e| Failure::new("math", e))?;
            let text = format!("r = {}\ndegree = {}\nclass = {class}\n", d.omega_coefficient, d.degree);
            let mut json = degree_json(&d);
            json["n"] = json!(n);
            json["mono"] = json!(k);
            json["class"] = serde_json::to_value(class.to_json()).expect("serializable");
            Ok(Output::ok(text, json))
        }
        Command::Height { n } => {
            check_rank(*n)?;
            let d = ArakelovContext::get(*n).and_then(|c| c.faltings_height()).map_err(|e| Failure::new("math", e))?;
            let mut json = degree_json(&d);
            json["n"] = json!(n);
            json["height"] = json!(d.degree.to_string());
            Ok(Output::ok(format!("{}\n", d.degree), json))
        }
    }
}

/// Runs the command line on `args` (including the program name).
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                return Outcome { code: 0, stdout: e.to_string(), stderr: String::new() };
            }
            let f = Failure::new("usage", e.to_string().trim_end());
            return Outcome { code: 1, stdout: String::new(), stderr: format!("{}\n", f.to_json()) };
        }
    };
    match execute(&cli.command) {
        Ok(out) => {
            let stdout = if cli.json {
                format!("{}\n", serde_json::to_string_pretty(&out.json).expect("serializable"))
            } else {
                out.text
            };
            Outcome { code: out.code, stdout, stderr: String::new() }
        }
        Err(f) => Outcome { code: 1, stdout: String::new(), stderr: format!("{}\n", f.to_json()) },
    }
}
