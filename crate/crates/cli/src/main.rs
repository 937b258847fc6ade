//! Command-line front end: loads algebra / triple files, runs the requested
//! computation or verification suite, and writes machine-readable JSON
//! reports to standard output (logs and errors go to standard error).
//!
//! Exit codes: 0 all checks passed, 1 at least one check failed,
//! 2 usage or configuration error.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use pbwstar::freelie;
use pbwstar::gvs::{sym_monomials, GradedSpace};
use pbwstar::liealg::LieAlg;
use pbwstar::report::{CheckResult, RunReport, Status};
use pbwstar::scalar::format_rat;
use pbwstar::tamepair::TripleSpec;
use pbwstar::ualg::{SymElem, UAlg};
use pbwstar::verify::Suite;

/// Truncations above this need an explicit override; the cost of the exact
/// tensor combinatorics grows like dim^trunc.
const TRUNC_CEILING: usize = 6;

#[derive(Parser)]
#[command(
    name = "pbwstar",
    version,
    about = "Exact star products, PBW coefficients, Duflo elements and tame triples for graded Lie algebras"
)]
struct Cli {
    /// Render human-readable tables instead of JSON (values stay exact).
    #[arg(long, global = true)]
    pretty: bool,

    /// Allow truncations above the built-in ceiling of 6.
    #[arg(long, global = true)]
    force_depth: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Load an algebra file and check antisymmetry and the Jacobi identity.
    Validate {
        #[arg(long)]
        algebra: PathBuf,
        /// Print the normalized algebra spec back out.
        #[arg(long)]
        emit: bool,
    },
    /// The Baker-Campbell-Hausdorff series in the Lyndon basis.
    Bch {
        #[arg(long)]
        degree: usize,
    },
    /// The multibrace operation M_{p,q} in the Lyndon basis.
    Mbrace {
        #[arg(long)]
        p: usize,
        #[arg(long)]
        q: usize,
    },
    /// The star multiplication table of all monomial pairs within the
    /// truncation.
    Star {
        #[arg(long)]
        algebra: PathBuf,
        #[arg(long, default_value_t = 4)]
        trunc: usize,
        /// Use the PBW normal-ordering oracle instead of the multibrace
        /// product.
        #[arg(long)]
        oracle: bool,
    },
    /// The structure coefficients c_p^k of the star product.
    PbwCoeffs {
        #[arg(long)]
        algebra: PathBuf,
        #[arg(long)]
        p: usize,
    },
    /// The Duflo element components up to the truncation.
    Duflo {
        #[arg(long)]
        algebra: PathBuf,
        #[arg(long, default_value_t = 4)]
        trunc: usize,
    },
    /// Solve the torsion recursion from a top component and verify both the
    /// closed form and the factorization.
    Torsion {
        #[arg(long)]
        algebra: PathBuf,
        #[arg(long)]
        ell: usize,
        #[arg(long)]
        trunc: Option<usize>,
        /// Top component: `sym` (identity on S^ell) or `proj` (projection
        /// from words of length ell).
        #[arg(long, default_value = "sym")]
        top: String,
    },
    /// Reductivity, tameness and the induced module structure of a triple.
    Tame {
        #[arg(long)]
        triple: PathBuf,
        #[arg(long, default_value_t = 4)]
        trunc: usize,
    },
    /// Run the verification battery on an algebra (and optionally a triple).
    Verify {
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long)]
        algebra: PathBuf,
        #[arg(long, default_value_t = 4)]
        trunc: usize,
        #[arg(long)]
        triple: Option<PathBuf>,
    },
    /// Debug print of the symmetric-group ideal decomposition
    /// 1 - pi_n = sum (1 - tau_i) a_i.
    SymDecomp {
        #[arg(long)]
        n: usize,
    },
}

struct ConfigError(String);

impl<E: std::fmt::Display> From<E> for ConfigError {
    fn from(e: E) -> Self {
        ConfigError(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(ConfigError(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn load_algebra(path: &Path) -> Result<LieAlg, ConfigError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| ConfigError(format!("cannot read {}: {e}", path.display())))?;
    Ok(LieAlg::from_json(&text)?)
}

fn load_triple(path: &Path) -> Result<TripleSpec, ConfigError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| ConfigError(format!("cannot read {}: {e}", path.display())))?;
    Ok(TripleSpec::from_json(&text)?)
}

fn check_trunc(trunc: usize, force: bool) -> Result<(), ConfigError> {
    if trunc > TRUNC_CEILING && !force {
        return Err(ConfigError(format!(
            "truncation {trunc} exceeds the ceiling {TRUNC_CEILING}; pass --force-depth to override"
        )));
    }
    Ok(())
}

fn sym_elem_json(space: &GradedSpace, s: &SymElem) -> Value {
    Value::Array(
        s.terms
            .iter()
            .map(|(m, c)| {
                json!({
                    "monomial": m.display(space),
                    "coeff": format_rat(c),
                })
            })
            .collect(),
    )
}

fn lie_elem_json(e: &freelie::FreeLieElem, name: impl Fn(u8) -> String) -> Value {
    Value::Array(
        e.terms
            .iter()
            .map(|(w, c)| {
                json!({
                    "lyndon_word": w.iter().map(|&l| name(l)).collect::<Vec<_>>(),
                    "coefficient": format_rat(c),
                })
            })
            .collect(),
    )
}

fn emit_report(report: &RunReport, pretty: bool) -> u8 {
    if pretty {
        println!("# {}", report.command);
        for r in &report.results {
            let status = match r.status {
                Status::Pass => "PASS",
                Status::Fail => "FAIL",
                Status::Skip => "SKIP",
            };
            match &r.detail {
                Some(d) => println!("{status:4}  {:32} {d}", r.check_name),
                None => println!("{status:4}  {}", r.check_name),
            }
        }
    } else {
        println!("{}", serde_json::to_string_pretty(report).unwrap());
    }
    report.exit_status as u8
}

fn run(cli: Cli) -> Result<u8, ConfigError> {
    match cli.command {
        Command::Validate { algebra, emit } => {
            let path_str = algebra.display().to_string();
            match load_algebra(&algebra) {
                Ok(alg) => {
                    if emit {
                        println!(
                            "{}",
                            serde_json::to_string_pretty(&alg.to_spec()).unwrap()
                        );
                        Ok(0)
                    } else {
                        let report = RunReport::new(
                            "validate",
                            json!({"algebra": path_str, "name": alg.name()}),
                            vec![CheckResult::pass_with(
                                "algebra_valid",
                                format!("{} ({} generators)", alg.name(), alg.dim()),
                            )],
                        );
                        Ok(emit_report(&report, cli.pretty))
                    }
                }
                Err(ConfigError(msg)) => {
                    // a well-formed file with bad algebraic data is a check
                    // failure, not a usage error
                    if msg.contains("cannot read") || msg.contains("bad JSON") {
                        Err(ConfigError(msg))
                    } else {
                        let report = RunReport::new(
                            "validate",
                            json!({"algebra": path_str}),
                            vec![CheckResult::fail("algebra_valid", msg)],
                        );
                        Ok(emit_report(&report, cli.pretty))
                    }
                }
            }
        }

        Command::Bch { degree } => {
            if degree == 0 || degree > 8 {
                return Err(ConfigError(
                    "degree must be between 1 and 8 (the series blows up combinatorially)"
                        .into(),
                ));
            }
            let series = freelie::bch(degree);
            let name = |l: u8| if l == 0 { "x".into() } else { "y".into() };
            println!(
                "{}",
                serde_json::to_string_pretty(&lie_elem_json(&series, name)).unwrap()
            );
            Ok(0)
        }

        Command::Mbrace { p, q } => {
            if p + q == 0 || p + q > 8 {
                return Err(ConfigError("need 1 <= p + q <= 8".into()));
            }
            let elem = freelie::mbrace(p, q);
            let name = move |l: u8| {
                let l = l as usize;
                if l < p {
                    format!("x{}", l + 1)
                } else {
                    format!("y{}", l - p + 1)
                }
            };
            println!(
                "{}",
                serde_json::to_string_pretty(&lie_elem_json(&elem, name)).unwrap()
            );
            Ok(0)
        }

        Command::Star {
            algebra,
            trunc,
            oracle,
        } => {
            check_trunc(trunc, cli.force_depth)?;
            let alg = load_algebra(&algebra)?;
            let rows = if oracle {
                pbwstar::batch::pbw_table(&alg, trunc)?
            } else {
                pbwstar::batch::star_table(&alg, trunc)?
            };
            let space = alg.space();
            if cli.pretty {
                for row in &rows {
                    println!(
                        "{} ⋆ {} = {}",
                        row.left.display(space),
                        row.right.display(space),
                        row.product.display(space)
                    );
                }
            } else {
                let value: Vec<Value> = rows
                    .iter()
                    .map(|row| {
                        json!({
                            "left": row.left.display(space),
                            "right": row.right.display(space),
                            "product": sym_elem_json(space, &row.product),
                        })
                    })
                    .collect();
                println!("{}", serde_json::to_string_pretty(&value).unwrap());
            }
            Ok(0)
        }

        Command::PbwCoeffs { algebra, p } => {
            if p == 0 || p > TRUNC_CEILING {
                return Err(ConfigError(format!("need 1 <= p <= {TRUNC_CEILING}")));
            }
            let alg = load_algebra(&algebra)?;
            let ua = UAlg::new(&alg, p);
            let space = alg.space();
            let words = pbwstar::gvs::all_words(alg.dim(), p);
            let mut per_k = Vec::new();
            for k in 1..=p {
                let mat = ua.structure_coefficients(p, k)?;
                let basis = sym_monomials(space, k);
                let columns: Vec<Value> = words
                    .iter()
                    .enumerate()
                    .map(|(j, w)| {
                        let image: Vec<Value> = basis
                            .iter()
                            .enumerate()
                            .filter(|(i, _)| pbwstar::scalar::sign_of(mat.at(*i, j)) != 0)
                            .map(|(i, m)| {
                                json!({
                                    "monomial": m.display(space),
                                    "coeff": format_rat(mat.at(i, j)),
                                })
                            })
                            .collect();
                        json!({
                            "word": w.iter().map(|&c| space.name(c)).collect::<Vec<_>>(),
                            "image": image,
                        })
                    })
                    .collect();
                per_k.push(json!({"k": k, "columns": columns}));
            }
            println!(
                "{}",
                serde_json::to_string_pretty(&json!({"p": p, "coefficients": per_k}))
                    .unwrap()
            );
            Ok(0)
        }

        Command::Duflo { algebra, trunc } => {
            check_trunc(trunc, cli.force_depth)?;
            let alg = load_algebra(&algebra)?;
            let d = pbwstar::duflo::duflo_element(&alg, trunc);
            let space = alg.space();
            if cli.pretty {
                for (p, comp) in d.components.iter().enumerate() {
                    println!("d_{p} = {}", comp.display(space));
                }
                return Ok(0);
            }
            let mut components = serde_json::Map::new();
            for (p, comp) in d.components.iter().enumerate() {
                let mut terms = serde_json::Map::new();
                for (m, c) in &comp.terms {
                    let key = if m.0.is_empty() {
                        "1".to_string()
                    } else {
                        pbwstar::liealg::dual_monomial_display(m, space)
                    };
                    terms.insert(key, Value::String(format_rat(c)));
                }
                components.insert(p.to_string(), Value::Object(terms));
            }
            println!(
                "{}",
                serde_json::to_string_pretty(&Value::Object(components)).unwrap()
            );
            Ok(0)
        }

        Command::Torsion {
            algebra,
            ell,
            trunc,
            top,
        } => {
            let trunc = trunc.unwrap_or((ell + 1).max(4));
            check_trunc(trunc, cli.force_depth)?;
            let alg = load_algebra(&algebra)?;
            let space = alg.space();
            let (labels, tops): (Vec<String>, Vec<SymElem>) = match top.as_str() {
                "sym" => {
                    let monos = sym_monomials(space, ell);
                    let labels = monos.iter().map(|m| m.display(space)).collect();
                    let tops = monos
                        .iter()
                        .map(|m| SymElem::monomial(trunc, m.clone()))
                        .collect();
                    (labels, tops)
                }
                "proj" => {
                    let words = pbwstar::gvs::all_words(alg.dim(), ell);
                    let labels = words
                        .iter()
                        .map(|w| {
                            w.iter()
                                .map(|&c| space.name(c).to_string())
                                .collect::<Vec<_>>()
                                .join("⊗")
                        })
                        .collect();
                    let tops = words
                        .iter()
                        .map(|w| {
                            let mut s = SymElem::zero(trunc);
                            if let Some((m, sign)) = pbwstar::gvs::sort_word(space, w) {
                                s.add_term(m, pbwstar::scalar::qi(sign as i64));
                            }
                            s
                        })
                        .collect();
                    (labels, tops)
                }
                other => {
                    return Err(ConfigError(format!(
                        "unknown top `{other}` (expected sym|proj)"
                    )))
                }
            };
            let solved = pbwstar::duflo::torsion_solve(&alg, trunc, ell, &tops)?;
            let closed = pbwstar::duflo::torsion_closed_form(&alg, trunc, ell, &tops)?;
            let residues = pbwstar::duflo::torsion_residues(&alg, trunc, &solved)?;
            let mut components = serde_json::Map::new();
            for (k, layer) in solved.components.iter().enumerate() {
                let cols: Vec<Value> = layer
                    .iter()
                    .zip(labels.iter())
                    .map(|(s, label)| {
                        json!({"source": label, "terms": sym_elem_json(space, s)})
                    })
                    .collect();
                components.insert(k.to_string(), Value::Array(cols));
            }
            let residue_json: Vec<Value> = residues
                .iter()
                .map(|(col, v, piece, part)| {
                    json!({
                        "source": labels[*col],
                        "letter": space.name(*v),
                        "degree": piece,
                        "residue": sym_elem_json(space, part),
                    })
                })
                .collect();
            let value = json!({
                "ell": ell,
                "trunc": trunc,
                "components": components,
                "verdicts": {
                    "closed_form_matches": solved == closed,
                    "factors_through_top_degree": residues.is_empty(),
                },
                "residues": residue_json,
            });
            println!("{}", serde_json::to_string_pretty(&value).unwrap());
            Ok(0)
        }

        Command::Tame { triple, trunc } => {
            check_trunc(trunc, cli.force_depth)?;
            let t = load_triple(&triple)?;
            let results = pbwstar::verify::run_triple_suite(&t, trunc);
            let report = RunReport::new(
                "tame",
                json!({"triple": triple.display().to_string(), "trunc": trunc}),
                results.clone(),
            );
            if cli.pretty {
                return Ok(emit_report(&report, true));
            }
            let lookup = |name: &str| results.iter().find(|r| r.check_name == name);
            let status_bool = |name: &str| lookup(name).map(|r| r.status == Status::Pass);
            let mut value = serde_json::Map::new();
            value.insert(
                "reductive".into(),
                json!(status_bool("reductive").unwrap_or(false)),
            );
            if let Some(tame) = status_bool("tame") {
                value.insert("tame".into(), json!(tame));
            }
            let witness = lookup("reductive")
                .and_then(|r| r.detail.clone())
                .or_else(|| lookup("tame").and_then(|r| r.detail.clone()));
            if let Some(w) = witness {
                value.insert("witness".into(), json!(w));
            }
            for key in ["module_axioms", "delta_section", "antimorphism"] {
                if let Some(r) = lookup(key) {
                    let out_key = if key == "delta_section" { "section" } else { key };
                    value.insert(out_key.into(), json!(r.status == Status::Pass));
                    if let Some(d) = &r.detail {
                        value.insert(format!("{out_key}_detail"), json!(d));
                    }
                }
            }
            println!(
                "{}",
                serde_json::to_string_pretty(&Value::Object(value)).unwrap()
            );
            Ok(report.exit_status as u8)
        }

        Command::Verify {
            suite,
            algebra,
            trunc,
            triple,
        } => {
            check_trunc(trunc, cli.force_depth)?;
            let suite: Suite = suite.parse().map_err(ConfigError)?;
            let alg = load_algebra(&algebra)?;
            let mut results = pbwstar::verify::run_algebra_suite(&alg, trunc, suite);
            let mut inputs = json!({
                "algebra": algebra.display().to_string(),
                "name": alg.name(),
                "trunc": trunc,
            });
            if let Some(tp) = &triple {
                let t = load_triple(tp)?;
                results.extend(pbwstar::verify::run_triple_suite(&t, trunc));
                inputs["triple"] = json!(tp.display().to_string());
            }
            let report = RunReport::new("verify", inputs, results);
            Ok(emit_report(&report, cli.pretty))
        }

        Command::SymDecomp { n } => {
            if !(2..=7).contains(&n) {
                return Err(ConfigError("need 2 <= n <= 7".into()));
            }
            let a = pbwstar::symgroup::ideal_decomposition(n);
            println!("1 - pi_{n} = sum_i (1 - tau_i) a_i with:");
            for (i, ai) in a.iter().enumerate() {
                println!("  a_{} = {}", i + 1, ai);
            }
            let check = pbwstar::symgroup::expand_decomposition(n, &a)
                == pbwstar::symgroup::one_minus_symmetrizer(n);
            println!("identity check: {}", if check { "ok" } else { "FAILED" });
            Ok(if check { 0 } else { 1 })
        }
    }
}
