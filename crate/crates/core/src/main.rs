use std::io::Write;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde_json::{json, Value};

use unimodular::error::{Error, Result};
use unimodular::form::{classify, GramForm};
use unimodular::matrix::{IntMatrix, LatticeVector};
use unimodular::orbit::{characteristic_family, enumerate_isotropic_planes, escape, family_parameters, LeadingBlock};
use unimodular::{exterior, json as js, topology, verify};

#[derive(Parser)]
#[command(name = "unimodular", version, about = "Exact computations with unimodular lattices and their automorphisms")]
struct Cli {
    /// Seed for every randomized step.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Coordinate bound for enumerations.
    #[arg(long, global = true, default_value_t = 3)]
    bound: i64,
    /// Pretty-print JSON with this many spaces.
    #[arg(long, global = true, num_args = 0..=1, default_missing_value = "2")]
    json_indent: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a verification target (or `all`) and emit a report.
    VerifyPaper { target: String },
    /// Invariants and standard representative of a form given as JSON.
    Classify {
        /// `{"dim": n, "gram": [[..]]}` or a bare array of rows.
        form: String,
    },
    /// Orbit escape trace of a vector.
    Escape {
        #[arg(long)]
        form: String,
        /// Comma-separated coordinates.
        #[arg(long, allow_hyphen_values = true)]
        start: String,
        #[arg(long, default_value_t = 10)]
        steps: usize,
    },
    /// Infinite family of characteristic vectors of norm σ + 8k.
    CharFamily {
        #[arg(long, value_enum, default_value_t = Leading::TwoU)]
        leading: Leading,
        /// Optional tail form description, e.g. `E8` or `<1>`.
        #[arg(long)]
        tail: Option<String>,
        #[arg(long, allow_hyphen_values = true, default_value = "0")]
        k: BigInt,
        #[arg(long, default_value_t = 10)]
        count: usize,
    },
    /// Isotropic rank-2 sublattices with coordinates bounded by `--bound`.
    Planes {
        #[arg(long, default_value = "2U")]
        form: String,
    },
    /// Induced action of a 4×4 integer matrix on the exterior square.
    Lambda2 {
        /// JSON array of rows.
        #[arg(long)]
        matrix: String,
    },
    /// Kodaira dimension from the signs of K·ω and K².
    Kodaira {
        #[arg(long, allow_hyphen_values = true)]
        kw: i64,
        #[arg(long, allow_hyphen_values = true)]
        k2: i64,
    },
    /// Invariants of the known symplectic Calabi-Yau surfaces.
    CyTable,
    /// Cohomology of the Kodaira-Thurston nilmanifold.
    Kt {
        #[arg(long, allow_hyphen_values = true, default_value_t = 1)]
        lambda: i64,
        /// Lift a GL(2, Z) matrix given as a,b,c,d (row major).
        #[arg(long = "phi-T", allow_hyphen_values = true)]
        phi_t: Option<String>,
        /// Number of distinct isotropic planes in the orbit of the cup-product image.
        #[arg(long)]
        witness: Option<usize>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Leading {
    #[value(name = "2U")]
    TwoU,
    #[value(name = "2<1>+2<-1>")]
    TwoPlusTwoMinus,
}

enum Outcome {
    Pass(Value),
    Fail(Value),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let indent = cli.json_indent;
    match execute(&cli) {
        Ok(Outcome::Pass(v)) => {
            emit(&v, indent);
            ExitCode::SUCCESS
        }
        Ok(Outcome::Fail(v)) => {
            emit(&v, indent);
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn emit(v: &Value, indent: Option<usize>) {
    let text = match indent {
        None => serde_json::to_string(v).expect("serializable"),
        Some(n) => {
            let pad = vec![b' '; n];
            let fmt = serde_json::ser::PrettyFormatter::with_indent(&pad);
            let mut buf = Vec::new();
            let mut ser = serde_json::Serializer::with_formatter(&mut buf, fmt);
            serde::Serialize::serialize(v, &mut ser).expect("serializable");
            String::from_utf8(buf).expect("utf8")
        }
    };
    // A closed pipe (e.g. `| head`) is not an error worth reporting.
    let _ = writeln!(std::io::stdout().lock(), "{text}");
}

fn parse_form_arg(s: &str) -> Result<GramForm> {
    let t = s.trim();
    if t.starts_with('{') || t.starts_with('[') {
        js::parse_form(&parse_json(t)?)
    } else {
        GramForm::parse(t)
    }
}

fn parse_json(s: &str) -> Result<Value> {
    serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))
}

fn parse_ints(s: &str) -> Result<Vec<i64>> {
    s.split(',')
        .map(|x| x.trim().parse().map_err(|_| Error::Parse(format!("not an integer: {x:?}"))))
        .collect()
}

fn execute(cli: &Cli) -> Result<Outcome> {
    let ok = |v| Ok(Outcome::Pass(v));
    match &cli.command {
        Command::VerifyPaper { target } => {
            let report = verify::run(target, cli.seed)?;
            for c in report.checks.iter().filter(|c| !c.passed) {
                eprintln!("FAIL {}: {}", c.name, c.detail);
            }
            let v = serde_json::to_value(&report).expect("serializable");
            Ok(if report.passed() { Outcome::Pass(v) } else { Outcome::Fail(v) })
        }
        Command::Classify { form } => {
            let c = classify(&js::parse_form(&parse_json(form)?)?)?;
            let canonical = match &c.canonical {
                Some(spec) => json!({ "description": spec.to_string(), "form": js::form(&GramForm::standard(*spec)?) }),
                None => Value::Null,
            };
            ok(json!({ "invariants": c.invariants, "canonical": canonical, "note": c.note }))
        }
        Command::Escape { form, start, steps } => {
            let form = Arc::new(parse_form_arg(form)?);
            let start = LatticeVector::from_i64s(&parse_ints(start)?);
            let trace = escape(&form, &start, *steps)?;
            trace.verify()?;
            ok(trace.to_json())
        }
        Command::CharFamily { leading, tail, k, count } => {
            let lead = match leading {
                Leading::TwoU => LeadingBlock::TwoU,
                Leading::TwoPlusTwoMinus => LeadingBlock::TwoPlusTwoMinus,
            };
            let tail = tail.as_deref().map(GramForm::parse).transpose()?;
            let fam = characteristic_family(lead, tail.as_ref(), k, *count)?;
            fam.verify()?;
            ok(fam.to_json())
        }
        Command::Planes { form } => {
            let form = parse_form_arg(form)?;
            let planes = enumerate_isotropic_planes(&form, cli.bound)?;
            let is_2u = form == GramForm::parse("2U")?;
            let list: Vec<Value> = planes
                .iter()
                .map(|p| {
                    let mut v = p.to_json();
                    if is_2u {
                        v["family"] = match family_parameters(p) {
                            Some((a, b, variant)) => json!({ "a": js::int(&a), "b": js::int(&b), "variant": variant }),
                            None => Value::Null,
                        };
                    }
                    v
                })
                .collect();
            ok(json!({ "form": js::form(&form), "bound": cli.bound, "count": list.len(), "planes": list }))
        }
        Command::Lambda2 { matrix } => {
            let a = js::parse_matrix(&parse_json(matrix)?)?;
            let report = exterior::lambda2(&a)?;
            let mut v = report.to_json();
            v["word"] = match known_word(&report.output) {
                Some(w) => Value::from(w),
                None => Value::Null,
            };
            ok(v)
        }
        Command::Kodaira { kw, k2 } => {
            let k = topology::kodaira_dimension(topology::KodairaInput { k_dot_omega: *kw, k_squared: *k2, minimal: true })?;
            ok(json!({ "k_dot_omega": kw, "k_squared": k2, "kodaira_dimension": k }))
        }
        Command::CyTable => {
            let rows: Vec<Value> = topology::cy_table()
                .iter()
                .map(|r| {
                    let mut v = serde_json::to_value(r).expect("serializable");
                    v["k_squared"] = Value::from(topology::canonical_norm(r.chi, r.sigma));
                    v["consistent"] = Value::from(r.is_consistent());
                    v
                })
                .collect();
            ok(json!({ "rows": rows }))
        }
        Command::Kt { lambda, phi_t, witness } => {
            let alg = topology::kt_algebra(*lambda)?;
            let mut out = json!({
                "lambda": lambda,
                "h2_gram": js::matrix(&alg.h2_gram),
                "cup_product_image": alg.wedge_image()?.to_json(),
            });
            if let Some(s) = phi_t {
                let e = parse_ints(s)?;
                if e.len() != 4 {
                    return Err(Error::Parse("--phi-T expects four integers a,b,c,d".into()));
                }
                let t = IntMatrix::from_i64(&[&e[0..2], &e[2..4]]);
                let phi = topology::solve_phi_t(*lambda, &t)?;
                phi.verify()?;
                out["phi_T"] = phi.to_json();
            }
            if let Some(n) = witness {
                let cert = topology::kt_infinite_index_witness(*n)?;
                cert.verify()?;
                out["witness"] = cert.to_json();
            }
            ok(out)
        }
    }
}

/// Names the output when it is a short word in the wall generators of 3U.
fn known_word(m: &IntMatrix) -> Option<String> {
    let gens = exterior::generators();
    if m.is_identity() {
        return Some("1".into());
    }
    let labels: Vec<&str> = gens.generators.iter().map(|(l, _)| l.as_str()).collect();
    for a in &labels {
        if exterior::word(a).matrix() == m {
            return Some(a.to_string());
        }
    }
    for a in &labels {
        for b in &labels {
            let w = format!("{a} {b}");
            if exterior::word(&w).matrix() == m {
                return Some(w);
            }
        }
    }
    None
}
