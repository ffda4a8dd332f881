//! `dkforge`: command-line access to the Dold-Kan toolkit.
//!
//! Exit status is 0 on success, 1 when a suite reports a failed check, and 2
//! for usage errors and invalid input.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use serde_json::Value;

use dkforge::algebra::{gamma_ring, normalize_ring};
use dkforge::chain::{tensor, tensor_maps};
use dkforge::doldkan::{gamma, gamma_map, normalize, normalize_map, normalized_aw, normalized_shuffle};
use dkforge::enriched::graph_tensor;
use dkforge::io::{self, Kind};
use dkforge::simplicial;
use dkforge::suite::{run_suite, SuiteConfig, SUITES};
use dkforge::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Verb {
    /// Normalized chain complex of a simplicial group (or map).
    Normalize,
    /// Dold-Kan inverse of a complex (or chain map).
    Gamma,
    /// Normalized shuffle map NA⊗NB -> N(A⊗B).
    Shuffle,
    /// Normalized Alexander-Whitney map N(A⊗B) -> NA⊗NB.
    Aw,
    /// Homology of a complex, or of the normalization of a simplicial group.
    Homology,
    /// Simplicial ring of a DGA.
    GammaRing,
    /// DGA of a simplicial ring.
    NormalizeRing,
    /// Tensor product of two complexes, chain maps or simplicial groups.
    Tensor,
    /// Tensor product of two I-graphs.
    GraphTensor,
    /// Runs a verification suite.
    #[value(alias = "run-suite")]
    Check,
}

#[derive(Debug, Parser)]
#[command(name = "dkforge", version, about = "Exact Dold-Kan correspondence over the integers")]
struct Cli {
    verb: Verb,
    /// Input payloads, in order.
    #[arg(long = "in", value_name = "FILE", num_args = 1..)]
    inputs: Vec<PathBuf>,
    /// Write the result here instead of standard output.
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
    /// Truncate inputs to this level (or run suites at it).
    #[arg(long, value_name = "N")]
    truncation: Option<usize>,
    #[arg(long, value_name = "N")]
    seed: Option<u64>,
    #[arg(long, value_name = "NAME")]
    suite: Option<String>,
    /// Random cases per property (suites only).
    #[arg(long, value_name = "N")]
    cases: Option<usize>,
    /// Include per-check timings in suite reports.
    #[arg(long)]
    timings: bool,
}

/// The rendered output and whether every check passed.
struct Outcome {
    text: String,
    passed: bool,
}

impl Outcome {
    fn json(v: &Value) -> Outcome {
        Outcome {
            text: io::canonical(v),
            passed: true,
        }
    }
}

fn usage(msg: impl Into<String>) -> Error {
    Error::Precondition(msg.into())
}

fn load(path: &PathBuf) -> Result<Value> {
    let text = fs::read_to_string(path).map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?;
    io::parse_value(&text)
}

fn expect_inputs(cli: &Cli, n: usize) -> Result<Vec<Value>> {
    if cli.inputs.len() != n {
        return Err(usage(format!("{:?} takes {n} --in file(s), got {}", cli.verb, cli.inputs.len())));
    }
    cli.inputs.iter().map(load).collect()
}

/// The level to work at: the stored one, or `--truncation` if it is no larger.
fn level(cli: &Cli, stored: usize) -> Result<usize> {
    match cli.truncation {
        Some(t) if t > stored => Err(usage(format!("--truncation {t} exceeds the stored truncation {stored}"))),
        Some(t) => Ok(t),
        None => Ok(stored),
    }
}

fn complex(cli: &Cli, v: &Value) -> Result<dkforge::chain::ChainComplex> {
    let c = io::complex_from(v)?;
    Ok(c.truncate(level(cli, c.truncation())?))
}

fn group(cli: &Cli, v: &Value) -> Result<simplicial::SimplicialAbGroup> {
    let a = io::simplicial_from(v)?;
    Ok(a.truncate(level(cli, a.truncation())?))
}

fn run(cli: &Cli) -> Result<Outcome> {
    if cli.verb != Verb::Check && (cli.seed.is_some() || cli.suite.is_some() || cli.cases.is_some() || cli.timings) {
        return Err(usage("--seed, --suite, --cases and --timings apply to `check` only"));
    }
    match cli.verb {
        Verb::Normalize => {
            let [v] = <[Value; 1]>::try_from(expect_inputs(cli, 1)?).expect("one input");
            match io::kind_of(&v)? {
                Kind::SimplicialMap => {
                    let f = io::simplicial_map_from(&v)?;
                    let t = level(cli, f.truncation())?;
                    Ok(Outcome::json(&io::chain_map_value(&normalize_map(&f)?.truncate(t))))
                }
                _ => Ok(Outcome::json(&io::complex_value(&normalize(&group(cli, &v)?)?.complex))),
            }
        }
        Verb::Gamma => {
            let [v] = <[Value; 1]>::try_from(expect_inputs(cli, 1)?).expect("one input");
            match io::kind_of(&v)? {
                Kind::ChainMap => {
                    let f = io::chain_map_from(&v)?;
                    let f = f.truncate(level(cli, f.truncation())?);
                    let (gs, gt) = (gamma(f.source())?, gamma(f.target())?);
                    Ok(Outcome::json(&io::simplicial_map_value(&gamma_map(&f, &gs, &gt))))
                }
                _ => Ok(Outcome::json(&io::simplicial_value(gamma(&complex(cli, &v)?)?.group()))),
            }
        }
        Verb::Shuffle | Verb::Aw => {
            let inputs = expect_inputs(cli, 2)?;
            let (a, b) = (group(cli, &inputs[0])?, group(cli, &inputs[1])?);
            let (na, nb) = (normalize(&a)?, normalize(&b)?);
            let nab = normalize(&simplicial::tensor(&a, &b))?;
            let f = if cli.verb == Verb::Shuffle {
                normalized_shuffle(&a, &b, &na, &nb, &nab)
            } else {
                normalized_aw(&a, &b, &na, &nb, &nab)
            };
            Ok(Outcome::json(&io::chain_map_value(&f)))
        }
        Verb::Homology => {
            let [v] = <[Value; 1]>::try_from(expect_inputs(cli, 1)?).expect("one input");
            let c = match io::kind_of(&v)? {
                Kind::Simplicial => normalize(&group(cli, &v)?)?.complex,
                _ => complex(cli, &v)?,
            };
            Ok(Outcome {
                text: c.homology().to_string(),
                passed: true,
            })
        }
        Verb::GammaRing => {
            let [v] = <[Value; 1]>::try_from(expect_inputs(cli, 1)?).expect("one input");
            let r = io::dga_from(&v)?;
            let r = r.truncate(level(cli, r.truncation())?);
            Ok(Outcome::json(&io::ring_value(&gamma_ring(&r)?.0)))
        }
        Verb::NormalizeRing => {
            let [v] = <[Value; 1]>::try_from(expect_inputs(cli, 1)?).expect("one input");
            let a = io::ring_from(&v)?;
            if cli.truncation.is_some_and(|t| t != a.truncation()) {
                return Err(usage("normalize-ring works at the stored truncation"));
            }
            Ok(Outcome::json(&io::dga_value(&normalize_ring(&a)?.0)))
        }
        Verb::Tensor => {
            let inputs = expect_inputs(cli, 2)?;
            let kinds = (io::kind_of(&inputs[0])?, io::kind_of(&inputs[1])?);
            let out = match kinds {
                (Kind::Complex, Kind::Complex) => {
                    io::complex_value(&tensor(&complex(cli, &inputs[0])?, &complex(cli, &inputs[1])?).0)
                }
                (Kind::ChainMap, Kind::ChainMap) => {
                    let (f, g) = (io::chain_map_from(&inputs[0])?, io::chain_map_from(&inputs[1])?);
                    let t = level(cli, f.truncation().min(g.truncation()))?;
                    io::chain_map_value(&tensor_maps(&f, &g).truncate(t))
                }
                (Kind::Simplicial, Kind::Simplicial) => {
                    io::simplicial_value(&simplicial::tensor(&group(cli, &inputs[0])?, &group(cli, &inputs[1])?))
                }
                (a, b) => return Err(usage(format!("cannot tensor a {a:?} with a {b:?}"))),
            };
            Ok(Outcome::json(&out))
        }
        Verb::GraphTensor => {
            let inputs = expect_inputs(cli, 2)?;
            let graph = |v: &Value| match io::kind_of(v)? {
                Kind::Category => Ok(io::category_from(v)?.graph().clone()),
                _ => io::graph_from(v),
            };
            let (g, h) = (graph(&inputs[0])?, graph(&inputs[1])?);
            if cli.truncation.is_some() {
                return Err(usage("graph-tensor works at the stored truncation"));
            }
            Ok(Outcome::json(&io::graph_value(&graph_tensor(&g, &h)?)))
        }
        Verb::Check => {
            if !cli.inputs.is_empty() {
                return Err(usage("check takes no --in files"));
            }
            let name = cli
                .suite
                .as_deref()
                .ok_or_else(|| usage(format!("check needs --suite, one of {}", SUITES.join(", "))))?;
            let mut cfg = SuiteConfig::default();
            if let Some(s) = cli.seed {
                cfg.seed = s;
            }
            if let Some(t) = cli.truncation {
                cfg.truncation = t;
            }
            if let Some(c) = cli.cases {
                cfg.cases = c;
            }
            let report = run_suite(name, &cfg.capped_by_env()?)?;
            Ok(Outcome {
                text: io::canonical(&report.to_json(cli.timings)),
                passed: report.passed(),
            })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            let text = out.text + "\n";
            let written = match &cli.out {
                Some(path) => fs::write(path, text).map_err(|e| format!("cannot write {}: {e}", path.display())),
                None => {
                    print!("{text}");
                    Ok(())
                }
            };
            match written {
                Err(e) => {
                    eprintln!("dkforge: {e}");
                    ExitCode::from(2)
                }
                Ok(()) if out.passed => ExitCode::SUCCESS,
                Ok(()) => ExitCode::from(1),
            }
        }
        Err(e) => {
            eprintln!("dkforge: {e}");
            ExitCode::from(2)
        }
    }
}
