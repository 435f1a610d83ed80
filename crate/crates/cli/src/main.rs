//! `kan` - build, verify, and classify Kantor-double superalgebras and their
//! bimodules from the command line.
//!
//! All results go to stdout as UTF-8 JSON; progress and violation streams go
//! to stderr. Exit codes: 0 pass, 1 verification failure (or a negative
//! classification answer), 2 usage or parameter error.

use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};

use kanalg::analysis::{
    certificate_to_json, check_irreducible, check_isomorphic, classify, special_elements,
    Irreducibility,
};
use kanalg::bimodule::{
    build_v_alpha, check_action_table, check_commutator_relations, check_jordan_bimodule,
    check_power_relations, check_sandwich_relations, regular_bimodule, BimoduleAction, VAlphaSpec,
};
use kanalg::grassmann::Grassmann;
use kanalg::kantor::{build_kan, grassmann_poisson, DotBracketAlgebra};
use kanalg::report::CheckReport;
use kanalg::scalar::{FieldContext, Scalar};
use kanalg::superalg::StructureTable;
use kanalg::tensor::{
    build_tensor_double, grading_derivation, jordan_bracket_tensor, TruncatedPolyAlgebra,
};

#[derive(Parser)]
#[command(
    name = "kan",
    version,
    about = "Exact-arithmetic engine for Kantor-double Jordan superalgebras"
)]
struct Cli {
    /// Coefficient field: `q` for exact rationals, or an odd prime for F_p
    #[arg(long, global = true, default_value = "q")]
    field: String,
    /// Worker threads for exhaustive checks (default: all cores)
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Cap on reported violations per check
    #[arg(long, global = true, default_value_t = 10)]
    limit: usize,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Construct a table or an action and print it as JSON
    Build {
        #[command(subcommand)]
        what: BuildCmd,
    },
    /// Run a verification suite against a target
    Check {
        /// Which identities to verify
        #[arg(value_enum)]
        suite: Suite,
        #[command(flatten)]
        target: Target,
    },
    /// Verify irreducibility and report the isomorphism invariants
    Classify {
        #[command(flatten)]
        target: Target,
    },
    /// Test two modules for isomorphism (exit 0 iff isomorphic)
    Iso {
        /// Left module: valpha:n=..,alpha=..,parity=.. | regular:n | file:path
        #[arg(long)]
        left: String,
        /// Right module, same syntax
        #[arg(long)]
        right: String,
    },
    /// Print a basis of the joint annihilator (the special elements)
    Special {
        #[command(flatten)]
        target: Target,
    },
}

#[derive(Subcommand)]
enum BuildCmd {
    /// The double of the Grassmann superalgebra on n generators
    Kan {
        #[arg(long)]
        n: usize,
    },
    /// The one-parameter family module over that double
    Valpha {
        #[arg(long)]
        n: usize,
        /// Parameter: integer, a/b, or `al` for the formal parameter
        #[arg(long, allow_hyphen_values = true)]
        alpha: String,
        #[arg(long)]
        parity: u8,
    },
    /// The double of the tensor bracket on G_n (x) F[t]/(t^N)
    Tensor {
        #[arg(long)]
        n: usize,
        #[arg(long, allow_hyphen_values = true)]
        alpha: String,
        /// Truncation order N (t^N = 0)
        #[arg(long, default_value_t = 4)]
        trunc: usize,
    },
}

#[derive(Copy, Clone, ValueEnum)]
enum Suite {
    /// Supercommutativity and the Jordan superidentity on a table
    Jordan,
    /// The doubling conditions on a dot-bracket source
    Kantor,
    /// The split-null-extension Jordan check and operator relations
    Bimodule,
    /// Commutator, power, sandwich, and family-action relation suites
    Lemmas,
    /// Everything applicable to the target
    All,
}

#[derive(Args)]
struct Target {
    /// The double of G_n (table target) or its Poisson bracket (kantor suite)
    #[arg(long)]
    kan: Option<usize>,
    /// Tensor spec n=..,alpha=..,trunc=..
    #[arg(long)]
    tensor: Option<String>,
    /// Family module spec n=..,alpha=..,parity=..
    #[arg(long)]
    valpha: Option<String>,
    /// Regular bimodule of the double of G_n
    #[arg(long)]
    regular: Option<usize>,
    /// JSON file (a table for jordan/kantor, an action for module suites)
    #[arg(long)]
    file: Option<PathBuf>,
}

/// Exit status 2 is reserved for usage and parameter problems.
struct UsageError(String);

type CliResult<T> = Result<T, UsageError>;

impl<E: std::fmt::Display> From<E> for UsageError {
    fn from(e: E) -> Self {
        UsageError(e.to_string())
    }
}

fn parse_field(field: &str) -> CliResult<FieldContext> {
    match field {
        "q" | "Q" | "rational" => Ok(FieldContext::rational()),
        p => {
            let p: u64 = p
                .parse()
                .map_err(|_| UsageError(format!("unknown field `{p}`: use `q` or an odd prime")))?;
            Ok(FieldContext::prime(p)?)
        }
    }
}

/// Parses an alpha argument; `al` upgrades the context to symbolic.
fn parse_alpha(ctx: &mut FieldContext, text: &str) -> CliResult<Scalar> {
    if text.contains("al") {
        *ctx = ctx.with_symbolic();
    }
    Ok(ctx.parse_scalar(text)?)
}

fn parse_kv(spec: &str) -> CliResult<std::collections::BTreeMap<String, String>> {
    let mut out = std::collections::BTreeMap::new();
    for part in spec.split(',') {
        let (k, v) = part
            .split_once('=')
            .ok_or_else(|| UsageError(format!("expected key=value in `{part}`")))?;
        out.insert(k.trim().to_string(), v.trim().to_string());
    }
    Ok(out)
}

fn parse_valpha_spec(ctx: &mut FieldContext, spec: &str) -> CliResult<(usize, Scalar, u8)> {
    let kv = parse_kv(spec)?;
    let n: usize = kv
        .get("n")
        .ok_or_else(|| UsageError("valpha spec needs n=".into()))?
        .parse()
        .map_err(|e| UsageError(format!("bad n: {e}")))?;
    let alpha = parse_alpha(
        ctx,
        kv.get("alpha")
            .ok_or_else(|| UsageError("valpha spec needs alpha=".into()))?,
    )?;
    let parity: u8 = kv
        .get("parity")
        .map(|p| p.parse())
        .transpose()
        .map_err(|e| UsageError(format!("bad parity: {e}")))?
        .unwrap_or(0);
    if parity > 1 {
        return Err(UsageError("parity must be 0 or 1".into()));
    }
    Ok((n, alpha, parity))
}

fn parse_tensor_spec(ctx: &mut FieldContext, spec: &str) -> CliResult<(usize, Scalar, usize)> {
    let kv = parse_kv(spec)?;
    let n: usize = kv
        .get("n")
        .ok_or_else(|| UsageError("tensor spec needs n=".into()))?
        .parse()
        .map_err(|e| UsageError(format!("bad n: {e}")))?;
    let alpha = parse_alpha(
        ctx,
        kv.get("alpha")
            .ok_or_else(|| UsageError("tensor spec needs alpha=".into()))?,
    )?;
    let trunc: usize = kv
        .get("trunc")
        .map(|p| p.parse())
        .transpose()
        .map_err(|e| UsageError(format!("bad trunc: {e}")))?
        .unwrap_or(4);
    Ok((n, alpha, trunc))
}

impl Target {
    fn count(&self) -> usize {
        [
            self.kan.is_some(),
            self.tensor.is_some(),
            self.valpha.is_some(),
            self.regular.is_some(),
            self.file.is_some(),
        ]
        .iter()
        .filter(|b| **b)
        .count()
    }

    /// Resolves to a structure table (jordan suite).
    fn table(&self, ctx: &mut FieldContext) -> CliResult<StructureTable> {
        if self.count() != 1 {
            return Err(UsageError(
                "give exactly one of --kan/--tensor/--valpha/--regular/--file".into(),
            ));
        }
        if let Some(n) = self.kan {
            return Ok(build_kan(n, *ctx)?);
        }
        if let Some(spec) = &self.tensor {
            let (n, alpha, trunc) = parse_tensor_spec(ctx, spec)?;
            return Ok(build_tensor_double(n, &alpha, trunc, *ctx)?.0);
        }
        if let Some(path) = &self.file {
            let text = std::fs::read_to_string(path)?;
            return Ok(StructureTable::from_json(&text)?);
        }
        Err(UsageError(
            "this suite needs a table target (--kan, --tensor, or --file)".into(),
        ))
    }

    /// Resolves to a dot-bracket source (kantor suite).
    fn dot_bracket(&self, ctx: &mut FieldContext) -> CliResult<DotBracketAlgebra> {
        if let Some(n) = self.kan {
            let gr = Grassmann::new(n, *ctx)?;
            return Ok(grassmann_poisson(&gr)?);
        }
        if let Some(spec) = &self.tensor {
            let (n, alpha, trunc) = parse_tensor_spec(ctx, spec)?;
            let gr = Grassmann::new(n, *ctx)?;
            let poisson = grassmann_poisson(&gr)?;
            let e = grading_derivation(&gr);
            let a = TruncatedPolyAlgebra::new(trunc, alpha)?;
            return Ok(jordan_bracket_tensor(&poisson, &e, &a)?);
        }
        Err(UsageError(
            "the kantor suite needs --kan N (Grassmann bracket) or --tensor n=..,alpha=..,trunc=.."
                .into(),
        ))
    }

    /// Resolves to a bimodule action (module suites).
    fn module(&self, ctx: &mut FieldContext) -> CliResult<BimoduleAction> {
        if self.count() != 1 {
            return Err(UsageError(
                "give exactly one of --valpha/--regular/--file".into(),
            ));
        }
        if let Some(spec) = &self.valpha {
            let (n, alpha, parity) = parse_valpha_spec(ctx, spec)?;
            let kan = Arc::new(build_kan(n, *ctx)?);
            return Ok(build_v_alpha(
                &kan,
                &VAlphaSpec {
                    n,
                    alpha,
                    v_parity: parity,
                },
            )?);
        }
        if let Some(n) = self.regular {
            let kan = Arc::new(build_kan(n, *ctx)?);
            return Ok(regular_bimodule(&kan));
        }
        if let Some(path) = &self.file {
            let text = std::fs::read_to_string(path)?;
            return Ok(BimoduleAction::from_json(&text)?);
        }
        Err(UsageError(
            "this suite needs a module target (--valpha, --regular, or --file)".into(),
        ))
    }
}

fn parse_module_ref(ctx: &mut FieldContext, text: &str) -> CliResult<BimoduleAction> {
    let (kind, rest) = text
        .split_once(':')
        .ok_or_else(|| UsageError(format!("expected kind:spec, got `{text}`")))?;
    let target = match kind {
        "valpha" => Target {
            kan: None,
            tensor: None,
            valpha: Some(rest.to_string()),
            regular: None,
            file: None,
        },
        "regular" => Target {
            kan: None,
            tensor: None,
            valpha: None,
            regular: Some(
                rest.parse()
                    .map_err(|e| UsageError(format!("bad n: {e}")))?,
            ),
            file: None,
        },
        "file" => Target {
            kan: None,
            tensor: None,
            valpha: None,
            regular: None,
            file: Some(PathBuf::from(rest)),
        },
        other => return Err(UsageError(format!("unknown module kind `{other}`"))),
    };
    target.module(ctx)
}

fn stream_report(report: &CheckReport) {
    eprintln!(
        "[{}] {} ({} ms)",
        if report.passed() { "pass" } else { "FAIL" },
        report.subject,
        report.timing_ms
    );
    for v in &report.violations {
        eprintln!(
            "  violation at ({}): residual {}",
            v.inputs.join(", "),
            v.residual
        );
    }
}

fn emit_report(report: CheckReport) -> CliResult<u8> {
    stream_report(&report);
    println!("{}", serde_json::to_string_pretty(&report)?);
    Ok(if report.passed() { 0 } else { 1 })
}

fn run_jordan_suite(table: &StructureTable, limit: usize) -> CheckReport {
    let sc = table.check_supercommutative(limit);
    stream_report(&sc);
    let jordan = table.check_jordan_superidentity(limit);
    stream_report(&jordan);
    CheckReport::merge(
        format!("jordan suite dim={}", table.dim()),
        vec![sc, jordan],
    )
}

fn run_module_suites(
    suite: Suite,
    module: &BimoduleAction,
    limit: usize,
) -> CliResult<CheckReport> {
    let mut parts = Vec::new();
    let bimodule = matches!(suite, Suite::Bimodule | Suite::All);
    let lemmas = matches!(suite, Suite::Lemmas | Suite::All);
    if bimodule {
        let r = check_jordan_bimodule(module, limit)?;
        stream_report(&r);
        parts.push(r);
        let r = module.algebra().check_operator_relations(module)?;
        stream_report(&r);
        parts.push(r);
    }
    if lemmas {
        // the parameter and special line, needed by the alpha-aware suites
        let kernel = special_elements(module)?;
        let alpha = if kernel.len() == 1 {
            let c = classify(module)?;
            Some(c.alpha)
        } else {
            None
        };
        let r = check_commutator_relations(module)?;
        stream_report(&r);
        parts.push(r);
        let r = check_power_relations(module, alpha.as_ref())?;
        stream_report(&r);
        parts.push(r);
        let r = check_sandwich_relations(module)?;
        stream_report(&r);
        parts.push(r);
        if let Some(alpha) = &alpha {
            let r = check_action_table(module, &kernel[0], alpha)?;
            stream_report(&r);
            parts.push(r);
        }
    }
    Ok(CheckReport::merge(
        format!("module suite dimV={}", module.dim_v()),
        parts,
    ))
}

fn run(cli: Cli) -> CliResult<u8> {
    if let Some(threads) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .map_err(|e| UsageError(format!("thread pool: {e}")))?;
    }
    let mut ctx = parse_field(&cli.field)?;
    let limit = cli.limit;
    match cli.cmd {
        Cmd::Build { what } => {
            match what {
                BuildCmd::Kan { n } => {
                    let table = build_kan(n, ctx)?;
                    println!("{}", table.to_json());
                }
                BuildCmd::Valpha { n, alpha, parity } => {
                    let alpha = parse_alpha(&mut ctx, &alpha)?;
                    if parity > 1 {
                        return Err(UsageError("parity must be 0 or 1".into()));
                    }
                    let kan = Arc::new(build_kan(n, ctx)?);
                    let action = build_v_alpha(
                        &kan,
                        &VAlphaSpec {
                            n,
                            alpha,
                            v_parity: parity,
                        },
                    )?;
                    println!("{}", action.to_json());
                }
                BuildCmd::Tensor { n, alpha, trunc } => {
                    let alpha = parse_alpha(&mut ctx, &alpha)?;
                    let (table, _) = build_tensor_double(n, &alpha, trunc, ctx)?;
                    println!("{}", table.to_json());
                }
            }
            Ok(0)
        }
        Cmd::Check { suite, target } => match suite {
            Suite::Jordan => {
                let table = target.table(&mut ctx)?;
                emit_report(run_jordan_suite(&table, limit))
            }
            Suite::Kantor => {
                let source = target.dot_bracket(&mut ctx)?;
                emit_report(source.check_kantor_conditions(limit))
            }
            Suite::Bimodule | Suite::Lemmas => {
                let module = target.module(&mut ctx)?;
                emit_report(run_module_suites(suite, &module, limit)?)
            }
            Suite::All => {
                if target.valpha.is_some() || target.regular.is_some() {
                    let module = target.module(&mut ctx)?;
                    emit_report(run_module_suites(suite, &module, limit)?)
                } else if target.tensor.is_some() {
                    let source = target.dot_bracket(&mut ctx)?;
                    let cond = source.check_kantor_conditions(limit);
                    stream_report(&cond);
                    let table = source.kantor_double()?;
                    let jordan = run_jordan_suite(&table, limit);
                    emit_report(CheckReport::merge(
                        "all suites".to_string(),
                        vec![cond, jordan],
                    ))
                } else if let Some(n) = target.kan {
                    let gr = Grassmann::new(n, ctx)?;
                    let source = grassmann_poisson(&gr)?;
                    let cond = source.check_kantor_conditions(limit);
                    stream_report(&cond);
                    let table = build_kan(n, ctx)?;
                    let jordan = run_jordan_suite(&table, limit);
                    emit_report(CheckReport::merge(
                        "all suites".to_string(),
                        vec![cond, jordan],
                    ))
                } else {
                    // file: decide by shape
                    let path = target
                        .file
                        .clone()
                        .ok_or_else(|| UsageError("check all needs a target".into()))?;
                    let text = std::fs::read_to_string(&path)?;
                    if let Ok(module) = BimoduleAction::from_json(&text) {
                        emit_report(run_module_suites(suite, &module, limit)?)
                    } else {
                        let table = StructureTable::from_json(&text)?;
                        emit_report(run_jordan_suite(&table, limit))
                    }
                }
            }
        },
        Cmd::Classify { target } => {
            let module = target.module(&mut ctx)?;
            let outcome = check_irreducible(&module)?;
            match &outcome {
                Irreducibility::Reducible { .. } => {
                    eprintln!("module is reducible; certificate follows");
                    println!("{}", certificate_to_json(&outcome));
                    Ok(1)
                }
                Irreducibility::Irreducible(cert) => {
                    println!(
                        "{}",
                        serde_json::json!({
                            "parity": cert.v_parity,
                            "alpha": cert.alpha.to_string(),
                        })
                    );
                    Ok(0)
                }
            }
        }
        Cmd::Iso { left, right } => {
            let l = parse_module_ref(&mut ctx, &left)?;
            let r = parse_module_ref(&mut ctx, &right)?;
            let iso = check_isomorphic(&l, &r)?;
            let map = iso.map_rows.as_ref().map(|rows| {
                rows.iter()
                    .map(|row| row.iter().map(|c| c.to_string()).collect::<Vec<_>>())
                    .collect::<Vec<_>>()
            });
            println!(
                "{}",
                serde_json::to_string_pretty(&serde_json::json!({
                    "isomorphic": iso.isomorphic,
                    "map": map,
                }))?
            );
            Ok(if iso.isomorphic { 0 } else { 1 })
        }
        Cmd::Special { target } => {
            let module = target.module(&mut ctx)?;
            let kernel = special_elements(&module)?;
            let basis: Vec<Vec<String>> = kernel
                .iter()
                .map(|row| row.iter().map(|c| c.to_string()).collect())
                .collect();
            println!(
                "{}",
                serde_json::to_string_pretty(&serde_json::json!({
                    "dim": kernel.len(),
                    "basis": basis,
                }))?
            );
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(UsageError(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
