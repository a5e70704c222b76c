//! `csd` — command-line driver for the finite C*-dynamical-system toolkit.
//!
//! Loads a system description (JSON), dispatches verification and
//! construction commands, prints a human summary to stdout, and optionally
//! writes a deterministic machine-readable report with `--json`.
//!
//! Exit codes: 0 all requested verdicts pass, 1 at least one check failed,
//! 2 invalid input (unparseable file, failed axioms, unknown names, bad
//! flags).

mod jsonfmt;

use clap::{Args, Parser, Subcommand, ValueEnum};
use cstar_dynamics::definiteness::{
    is_alpha_nd_direct_for, is_alpha_nd_gamma, is_alpha_pd, quadratic_form,
};
use cstar_dynamics::haagerup::{c0_window_report, haagerup_to_nd, nd_to_haagerup, ExhaustionChain, PDFamily};
use cstar_dynamics::kernel_cocycle::build_module;
use cstar_dynamics::report::CheckReport;
use cstar_dynamics::samples::Sampler;
use cstar_dynamics::schoenberg::{default_t_grid, schoenberg_converse, schoenberg_forward};
use cstar_dynamics::system::{element_to_wire, matrix_to_wire, SystemFile};
use cstar_dynamics::{crossed, CoefficientClass, Error, LoadedSystem, Tolerance, Verdict};
use serde_json::{Map, Value};
use std::path::PathBuf;
use std::process::ExitCode;

const REPORT_SCHEMA_VERSION: u32 = 1;

#[derive(Parser)]
#[command(
    name = "csd",
    version,
    about = "Verify and construct functions on finite C*-dynamical systems",
    long_about = "Verify positive/negative definiteness of functions on a finite \
C*-dynamical system, build the associated Hilbert-module cocycle data, check the \
exponentiation equivalence and the induced semigroup on the crossed product, and \
run the windowed vanishing-at-infinity constructions. Systems are described by \
self-describing JSON files; see the repository README for the format."
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,

    /// Relative tolerance used by all checks (overrides the file's `tol`).
    #[arg(long, global = true, value_name = "EPS")]
    tol: Option<f64>,

    /// Seed for sampled cross-checks; recorded in the report.
    #[arg(long, global = true, value_name = "N")]
    seed: Option<u64>,

    /// Write the full machine-readable report to this path.
    #[arg(long, global = true, value_name = "OUT")]
    json: Option<PathBuf>,
}

#[derive(Args)]
struct FileArg {
    /// System description (JSON).
    file: PathBuf,
}

#[derive(Subcommand)]
enum Cmd {
    /// Validate the group table, the action axioms, and the file shape.
    Validate {
        #[command(flatten)]
        file: FileArg,
    },
    /// Check a named function for positive/negative definiteness.
    Check {
        #[command(flatten)]
        file: FileArg,
        /// Function name from the file's `functions` map.
        #[arg(long = "fn", value_name = "NAME")]
        function: String,
        /// Which verdicts to compute.
        #[arg(long, value_enum, default_value_t = CheckMode::Both)]
        mode: CheckMode,
        /// Coefficient class quantified over by the direct check.
        #[arg(long, value_enum, default_value_t = ClassArg::All)]
        class: ClassArg,
        /// Additionally evaluate the quadratic form on this many random
        /// sum-zero tuples (seeded by --seed) as a cross-check.
        #[arg(long, default_value_t = 0, value_name = "N")]
        samples: usize,
    },
    /// Build the Hilbert-module and cocycle data for a normalised
    /// negative definite function and verify the structure equations.
    Gns {
        #[command(flatten)]
        file: FileArg,
        #[arg(long = "fn", value_name = "NAME")]
        function: String,
    },
    /// Check the exponentiation equivalence between negative definiteness
    /// of ψ and positive definiteness of e^{−tψ} on a t-grid.
    Schoenberg {
        #[command(flatten)]
        file: FileArg,
        #[arg(long = "fn", value_name = "NAME")]
        function: String,
        /// Direction to check.
        #[arg(long, value_enum, default_value_t = SchoenbergMode::Forward)]
        mode: SchoenbergMode,
        /// Comma-separated t-grid (default 0.001,0.01,0.1,1,10).
        #[arg(long, value_name = "LIST")]
        t: Option<String>,
    },
    /// Verify the induced unital completely positive semigroup on the
    /// crossed product and its generator.
    Semigroup {
        #[command(flatten)]
        file: FileArg,
        #[arg(long = "fn", value_name = "NAME")]
        function: String,
        /// Comma-separated t-grid (default 0.001,0.01,0.1,1,10).
        #[arg(long, value_name = "LIST")]
        t: Option<String>,
        /// Embed the full Choi matrices in the JSON report.
        #[arg(long)]
        choi: bool,
    },
    /// Windowed vanishing-at-infinity constructions.
    Haagerup {
        #[command(flatten)]
        file: FileArg,
        #[arg(long, value_enum)]
        mode: HaagerupMode,
        /// build-nd: comma-separated names of the positive definite family.
        #[arg(long, value_name = "NAMES")]
        family: Option<String>,
        /// build-family: source negative definite function.
        #[arg(long = "fn", value_name = "NAME")]
        function: Option<String>,
        /// Named chain from the file's `chains` map.
        #[arg(long, value_name = "NAME")]
        chain: Option<String>,
        /// Inline chain: subsets of element indices, e.g. "0;0,1;0,1,2,3".
        #[arg(long, value_name = "SETS")]
        chain_sets: Option<String>,
        /// build-family: comma-separated t-grid (default 0.25,0.5,1,2,4).
        #[arg(long, value_name = "LIST")]
        t: Option<String>,
    },
    /// Aggregate overview: validation plus classification of every
    /// function in the file. Exit code reflects validity only; the
    /// per-function verdicts are informational.
    Report {
        #[command(flatten)]
        file: FileArg,
    },
}

#[derive(Clone, Copy, ValueEnum, PartialEq)]
enum CheckMode {
    Pd,
    NdDirect,
    NdGamma,
    Both,
}

#[derive(Clone, Copy, ValueEnum)]
enum ClassArg {
    All,
    Central,
}

#[derive(Clone, Copy, ValueEnum)]
enum SchoenbergMode {
    Forward,
    Converse,
}

#[derive(Clone, Copy, ValueEnum)]
enum HaagerupMode {
    BuildNd,
    BuildFamily,
}

/// One row of the report: shared shape for verdicts and report lines.
struct Entry {
    name: String,
    passed: bool,
    residual: f64,
    threshold: Option<f64>,
    detail: Option<String>,
    witness: Option<Value>,
    /// Informational entries never affect the exit code.
    informational: bool,
}

impl Entry {
    fn from_verdict(name: impl Into<String>, v: &Verdict<f64>) -> Self {
        Entry {
            name: name.into(),
            passed: v.passed,
            residual: v.residual,
            threshold: Some(v.threshold),
            detail: None,
            witness: v
                .witness
                .as_ref()
                .map(|w| serde_json::to_value(w).expect("witness serialises")),
            informational: false,
        }
    }

    fn to_value(&self) -> Value {
        let mut m = Map::new();
        m.insert("name".into(), Value::String(self.name.clone()));
        m.insert("passed".into(), Value::Bool(self.passed));
        m.insert("residual".into(), jsonfmt::fnum(self.residual));
        if let Some(t) = self.threshold {
            m.insert("threshold".into(), jsonfmt::fnum(t));
        }
        if let Some(d) = &self.detail {
            m.insert("detail".into(), Value::String(d.clone()));
        }
        if let Some(w) = &self.witness {
            m.insert("witness".into(), w.clone());
        }
        if self.informational {
            m.insert("informational".into(), Value::Bool(true));
        }
        Value::Object(m)
    }
}

fn entries_from_report(report: &CheckReport<f64>, prefix: &str) -> Vec<Entry> {
    report
        .lines
        .iter()
        .map(|l| Entry {
            name: format!("{prefix}{}", l.name),
            passed: l.passed,
            residual: l.residual,
            threshold: None,
            detail: l.detail.clone(),
            witness: None,
            informational: false,
        })
        .collect()
}

struct Outcome {
    command: &'static str,
    entries: Vec<Entry>,
    extras: Map<String, Value>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let started = std::time::Instant::now();

    let file = match &cli.command {
        Cmd::Validate { file } => &file.file,
        Cmd::Check { file, .. } => &file.file,
        Cmd::Gns { file, .. } => &file.file,
        Cmd::Schoenberg { file, .. } => &file.file,
        Cmd::Semigroup { file, .. } => &file.file,
        Cmd::Haagerup { file, .. } => &file.file,
        Cmd::Report { file } => &file.file,
    };

    let text = match std::fs::read_to_string(file) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: cannot read {}: {e}", file.display());
            return ExitCode::from(2);
        }
    };
    let hash = format!("fnv1a64:{:016x}", fnv1a64(text.as_bytes()));

    let result = SystemFile::parse(&text)
        .and_then(|sf| sf.load::<f64>())
        .and_then(|mut sys| {
            if let Some(eps) = cli.tol {
                if !(eps.is_finite() && eps > 0.0) {
                    return Err(Error::InvalidInput(format!(
                        "--tol must be a positive finite number, got {eps}"
                    )));
                }
                sys.tol = Tolerance::relative(eps);
            }
            run(&cli, &sys)
        });

    let outcome = match result {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };

    let passed = outcome
        .entries
        .iter()
        .all(|e| e.passed || e.informational);
    let failed_count = outcome
        .entries
        .iter()
        .filter(|e| !e.passed && !e.informational)
        .count();

    // Human summary.
    println!("csd {} on {} — {}", outcome.command, file.display(), hash);
    for e in &outcome.entries {
        let mark = if e.passed { "[ok]  " } else { "[FAIL]" };
        let thr = e
            .threshold
            .map(|t| format!("  (thr {t:.3e})"))
            .unwrap_or_default();
        let info = if e.informational { "  [info]" } else { "" };
        println!("  {mark} {:<44} residual {:.3e}{thr}{info}", e.name, e.residual);
        if !e.passed {
            if let Some(d) = &e.detail {
                println!("         {d}");
            }
        }
    }
    println!(
        "summary: {} ({} of {} checks failed)",
        if passed { "PASS" } else { "FAIL" },
        failed_count,
        outcome.entries.len()
    );

    // Machine report.
    if let Some(out) = &cli.json {
        let mut doc = Map::new();
        doc.insert(
            "schema_version".into(),
            Value::Number(REPORT_SCHEMA_VERSION.into()),
        );
        doc.insert("command".into(), Value::String(outcome.command.into()));
        doc.insert("system_hash".into(), Value::String(hash));
        if let Some(seed) = cli.seed {
            doc.insert("seed".into(), Value::Number(seed.into()));
        }
        if let Some(eps) = cli.tol {
            doc.insert("tol".into(), jsonfmt::fnum(eps));
        }
        doc.insert(
            "checks".into(),
            Value::Array(outcome.entries.iter().map(Entry::to_value).collect()),
        );
        for (k, v) in outcome.extras {
            doc.insert(k, v);
        }
        doc.insert("passed".into(), Value::Bool(passed));
        doc.insert(
            "wall_time_ms".into(),
            Value::Number((started.elapsed().as_millis() as u64).into()),
        );
        let rendered = jsonfmt::to_string_pretty(&Value::Object(doc));
        if let Err(e) = std::fs::write(out, rendered) {
            eprintln!("error: cannot write {}: {e}", out.display());
            return ExitCode::from(2);
        }
    }

    if passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn run(cli: &Cli, sys: &LoadedSystem<f64>) -> Result<Outcome, Error> {
    match &cli.command {
        Cmd::Validate { .. } => cmd_validate(sys),
        Cmd::Check {
            function,
            mode,
            class,
            samples,
            ..
        } => cmd_check(sys, function, *mode, *class, *samples, cli.seed),
        Cmd::Gns { function, .. } => cmd_gns(sys, function),
        Cmd::Schoenberg {
            function, mode, t, ..
        } => cmd_schoenberg(sys, function, *mode, t.as_deref()),
        Cmd::Semigroup {
            function, t, choi, ..
        } => cmd_semigroup(sys, function, t.as_deref(), *choi),
        Cmd::Haagerup {
            mode,
            family,
            function,
            chain,
            chain_sets,
            t,
            ..
        } => cmd_haagerup(
            sys,
            *mode,
            family.as_deref(),
            function.as_deref(),
            chain.as_deref(),
            chain_sets.as_deref(),
            t.as_deref(),
        ),
        Cmd::Report { .. } => cmd_report(sys),
    }
}

fn cmd_validate(sys: &LoadedSystem<f64>) -> Result<Outcome, Error> {
    let mut entries = vec![Entry {
        name: "group_axioms".into(),
        passed: true,
        residual: 0.0,
        threshold: None,
        detail: Some("checked exactly on load".into()),
        witness: None,
        informational: false,
    }];
    entries.extend(entries_from_report(
        &sys.action.validate(&sys.tol),
        "action.",
    ));
    let mut extras = Map::new();
    extras.insert(
        "system".into(),
        serde_json::json!({
            "group_order": sys.action.group().order(),
            "block_dims": sys.action.descriptor().block_dims(),
            "functions": sys.functions.keys().collect::<Vec<_>>(),
            "chains": sys.chains.keys().collect::<Vec<_>>(),
        }),
    );
    Ok(Outcome {
        command: "validate",
        entries,
        extras,
    })
}

fn cmd_check(
    sys: &LoadedSystem<f64>,
    function: &str,
    mode: CheckMode,
    class: ClassArg,
    samples: usize,
    seed: Option<u64>,
) -> Result<Outcome, Error> {
    let f = sys.function(function)?;
    let class = match class {
        ClassArg::All => CoefficientClass::All,
        ClassArg::Central => CoefficientClass::Central,
    };
    let mut entries = Vec::new();

    let mut direct: Option<Verdict<f64>> = None;
    if matches!(mode, CheckMode::Pd) {
        entries.push(Entry::from_verdict(
            "positive_definite",
            &is_alpha_pd(f, &sys.action, &sys.tol),
        ));
    }
    if matches!(mode, CheckMode::NdDirect | CheckMode::Both) {
        let v = is_alpha_nd_direct_for(f, &sys.action, &sys.tol, class);
        entries.push(Entry::from_verdict("negative_definite[direct]", &v));
        direct = Some(v);
    }
    if matches!(mode, CheckMode::NdGamma | CheckMode::Both) {
        let v = is_alpha_nd_gamma(f, &sys.action, &sys.tol);
        entries.push(Entry::from_verdict("negative_definite[gamma]", &v));
        if mode == CheckMode::Both {
            let agree = direct.as_ref().map(|d| d.passed) == Some(v.passed);
            entries.push(Entry {
                name: "agreement".into(),
                passed: agree,
                residual: if agree { 0.0 } else { 1.0 },
                threshold: Some(0.5),
                detail: Some("direct and kernel verdicts coincide".into()),
                witness: None,
                informational: false,
            });
        }
    }

    if samples > 0 {
        let mut sampler = Sampler::<f64>::new(seed.unwrap_or(0));
        let n = sys.action.group().order();
        let mut worst = f64::NEG_INFINITY;
        let mut evaluated = 0usize;
        for i in 0..samples {
            let len = 2 + i % (2 * n);
            let (elements, coeffs) = sampler.random_sum_zero_tuple(&sys.action, len);
            let q = quadratic_form(f, &sys.action, &elements, &coeffs)?;
            let top = q
                .spectral_max(&Tolerance::absolute(f64::INFINITY))
                .expect("unconditional spectral bound");
            if top > worst {
                worst = top;
            }
            evaluated += 1;
        }
        let thr = sys.tol.effective(f.sup_norm());
        let claim_nd = direct.as_ref().map(|d| d.passed).unwrap_or(false);
        entries.push(Entry {
            name: "sampled_quadratic_form".into(),
            passed: !claim_nd || worst <= thr,
            residual: worst,
            threshold: Some(thr),
            detail: Some(format!(
                "max of the quadratic form over {evaluated} random sum-zero tuples (seed {})",
                seed.unwrap_or(0)
            )),
            witness: None,
            informational: !claim_nd,
        });
    }

    Ok(Outcome {
        command: "check",
        entries,
        extras: Map::new(),
    })
}

fn cmd_gns(sys: &LoadedSystem<f64>, function: &str) -> Result<Outcome, Error> {
    let f = sys.function(function)?;
    let rep = build_module(f, &sys.action, &sys.tol)?;
    let entries = entries_from_report(&rep.verify(f, &sys.tol), "");
    let mut extras = Map::new();
    extras.insert(
        "quotient_rank".into(),
        Value::Number((rep.quotient_rank() as u64).into()),
    );
    let n = rep.gram().side();
    let gram: Vec<Vec<Value>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    serde_json::to_value(element_to_wire(rep.gram().entry(i, j)))
                        .expect("wire data serialises")
                })
                .collect()
        })
        .collect();
    extras.insert(
        "gram".into(),
        serde_json::to_value(gram).expect("wire data serialises"),
    );
    Ok(Outcome {
        command: "gns",
        entries,
        extras,
    })
}

fn parse_t_grid(spec: Option<&str>, default: Vec<f64>) -> Result<Vec<f64>, Error> {
    match spec {
        None => Ok(default),
        Some(s) => s
            .split(',')
            .map(|part| {
                part.trim()
                    .parse::<f64>()
                    .ok()
                    .filter(|x| x.is_finite())
                    .ok_or_else(|| {
                        Error::InvalidInput(format!("bad t-grid entry {part:?}"))
                    })
            })
            .collect(),
    }
}

fn cmd_schoenberg(
    sys: &LoadedSystem<f64>,
    function: &str,
    mode: SchoenbergMode,
    t: Option<&str>,
) -> Result<Outcome, Error> {
    let f = sys.function(function)?;
    let grid = parse_t_grid(t, default_t_grid())?;
    let report = match mode {
        SchoenbergMode::Forward => schoenberg_forward(f, &sys.action, &grid, &sys.tol)?,
        SchoenbergMode::Converse => schoenberg_converse(f, &sys.action, &grid, &sys.tol)?,
    };
    Ok(Outcome {
        command: "schoenberg",
        entries: entries_from_report(&report, ""),
        extras: Map::new(),
    })
}

fn cmd_semigroup(
    sys: &LoadedSystem<f64>,
    function: &str,
    t: Option<&str>,
    choi: bool,
) -> Result<Outcome, Error> {
    let f = sys.function(function)?;
    let grid = parse_t_grid(t, default_t_grid())?;
    let mut entries =
        entries_from_report(&crossed::verify_cp_semigroup(f, &sys.action, &grid, &sys.tol)?, "");
    entries.extend(entries_from_report(
        &crossed::generator_check(f, &sys.action, &sys.tol)?,
        "",
    ));
    let mut extras = Map::new();
    if choi {
        let mut blobs = Map::new();
        for &t in &grid {
            let m = crossed::choi_matrix(f, &sys.action, t, &sys.tol)?;
            blobs.insert(
                format!("t={t}"),
                serde_json::to_value(matrix_to_wire(&m)).expect("wire data serialises"),
            );
        }
        extras.insert("choi".into(), Value::Object(blobs));
    }
    Ok(Outcome {
        command: "semigroup",
        entries,
        extras,
    })
}

fn parse_chain_sets(spec: &str, order: usize) -> Result<ExhaustionChain, Error> {
    let subsets = spec
        .split(';')
        .map(|part| {
            part.split(',')
                .filter(|s| !s.trim().is_empty())
                .map(|s| {
                    s.trim()
                        .parse::<usize>()
                        .map_err(|_| Error::InvalidInput(format!("bad chain index {s:?}")))
                })
                .collect::<Result<Vec<usize>, Error>>()
        })
        .collect::<Result<Vec<_>, Error>>()?;
    ExhaustionChain::new(order, subsets)
}

fn cmd_haagerup(
    sys: &LoadedSystem<f64>,
    mode: HaagerupMode,
    family: Option<&str>,
    function: Option<&str>,
    chain: Option<&str>,
    chain_sets: Option<&str>,
    t: Option<&str>,
) -> Result<Outcome, Error> {
    let order = sys.action.group().order();
    let chain = match (chain, chain_sets) {
        (Some(_), Some(_)) => {
            return Err(Error::InvalidInput(
                "give either --chain or --chain-sets, not both".into(),
            ))
        }
        (Some(name), None) => Some(sys.chain(name)?.clone()),
        (None, Some(spec)) => Some(parse_chain_sets(spec, order)?),
        (None, None) => None,
    };

    match mode {
        HaagerupMode::BuildNd => {
            let names = family.ok_or_else(|| {
                Error::InvalidInput("--family is required for build-nd".into())
            })?;
            let members = names
                .split(',')
                .map(|name| sys.function(name.trim()).cloned())
                .collect::<Result<Vec<_>, Error>>()?;
            let family = PDFamily::new(members, &sys.action, &sys.tol)?;
            let chain =
                chain.unwrap_or_else(|| ExhaustionChain::trivial(sys.action.group()));
            let (psi, report) = haagerup_to_nd(&family, &sys.action, &chain, &sys.tol)?;
            let mut extras = Map::new();
            extras.insert(
                "psi".into(),
                serde_json::to_value(
                    psi.values().iter().map(element_to_wire).collect::<Vec<_>>(),
                )
                .expect("wire data serialises"),
            );
            Ok(Outcome {
                command: "haagerup",
                entries: entries_from_report(&report, ""),
                extras,
            })
        }
        HaagerupMode::BuildFamily => {
            let name = function.ok_or_else(|| {
                Error::InvalidInput("--fn is required for build-family".into())
            })?;
            let psi = sys.function(name)?;
            let grid = parse_t_grid(t, vec![0.25, 0.5, 1.0, 2.0, 4.0])?;
            let (family, report) = nd_to_haagerup(psi, &sys.action, &grid, &sys.tol)?;
            let mut entries = entries_from_report(&report, "");
            if let Some(chain) = &chain {
                for (j, member) in family.members().iter().enumerate() {
                    entries.extend(entries_from_report(
                        &c0_window_report(member, chain),
                        &format!("member[{j}]."),
                    ));
                }
            }
            let mut extras = Map::new();
            extras.insert(
                "family".into(),
                serde_json::to_value(
                    family
                        .members()
                        .iter()
                        .map(|h| h.values().iter().map(element_to_wire).collect::<Vec<_>>())
                        .collect::<Vec<_>>(),
                )
                .expect("wire data serialises"),
            );
            Ok(Outcome {
                command: "haagerup",
                entries,
                extras,
            })
        }
    }
}

fn cmd_report(sys: &LoadedSystem<f64>) -> Result<Outcome, Error> {
    let mut entries = entries_from_report(&sys.action.validate(&sys.tol), "action.");
    for (name, f) in &sys.functions {
        let (sym, _) = f.symmetry_residual(&sys.action);
        let classify = |v: &Verdict<f64>| {
            format!(
                "verdict: {} (residual {:.3e}, threshold {:.3e})",
                if v.passed { "yes" } else { "no" },
                v.residual,
                v.threshold
            )
        };
        let pd = is_alpha_pd(f, &sys.action, &sys.tol);
        let nd_d = is_alpha_nd_direct_for(f, &sys.action, &sys.tol, CoefficientClass::All);
        let nd_g = is_alpha_nd_gamma(f, &sys.action, &sys.tol);
        for (check, verdict) in [
            ("positive_definite", &pd),
            ("negative_definite[direct]", &nd_d),
            ("negative_definite[gamma]", &nd_g),
        ] {
            entries.push(Entry {
                name: format!("{name}.{check}"),
                passed: verdict.passed,
                residual: verdict.residual,
                threshold: Some(verdict.threshold),
                detail: Some(classify(verdict)),
                witness: None,
                informational: true,
            });
        }
        entries.push(Entry {
            name: format!("{name}.symmetry"),
            passed: true,
            residual: sym,
            threshold: None,
            detail: Some("α_g(f(g⁻¹)) = f(g)* deviation".into()),
            witness: None,
            informational: true,
        });
    }
    Ok(Outcome {
        command: "report",
        entries,
        extras: Map::new(),
    })
}

fn fnv1a64(bytes: &[u8]) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for &b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}
