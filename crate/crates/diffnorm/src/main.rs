//! Command-line front end: parse differential polynomials and system files,
//! drive the reduction and normalization pipeline, and emit deterministic
//! structured result documents.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num::BigRational;

use diffnorm::document::{cv_from_node, cv_to_node, Node};
use diffnorm::error::{Error, Result};
use diffnorm::parse::{parse_diffpoly, parse_rat_list};
use diffnorm::pipeline::{
    extend_through, normalize, normalize_time, verify_surjectivity_sample, ChangeOfVariables,
    PipelineParams,
};
use diffnorm::poly::{format_diffpoly, DiffPoly, VarNames};
use diffnorm::reduction::{partial_reduce, saturation_membership};
use diffnorm::scalar::{DiffField, RatT, C64};
use diffnorm::series::TruncSeries;
use diffnorm::transforms::{make_manageable, manageable_witness, Automorphism, ManageableParams};

type Q = BigRational;
type QP = DiffPoly<Q>;

#[derive(Parser)]
#[command(
    name = "diffnorm",
    version,
    about = "Differential Noether normalization and series extension"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Backend {
    Exact,
    Float,
}

#[derive(Subcommand)]
enum Command {
    /// Partially reduce Q modulo P and print the certificate.
    Reduce {
        /// Comma-separated indeterminate names, e.g. "x,y".
        #[arg(long)]
        vars: String,
        /// Distinguished indeterminate (one of the declared names).
        #[arg(long)]
        wrt: String,
        /// The modulus P.
        p: String,
        /// The polynomial to reduce.
        q: String,
    },
    /// Decide membership of Q in the saturation ideal of P.
    Member {
        #[arg(long)]
        vars: String,
        #[arg(long)]
        wrt: String,
        p: String,
        q: String,
    },
    /// Test manageability of Q; search for a making shift when it fails.
    Manageable {
        #[arg(long)]
        vars: String,
        #[arg(long)]
        wrt: String,
        q: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Normalize a system file into a change-of-variables document.
    Normalize {
        file: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        /// Treat the system as having polynomial-in-time coefficients.
        #[arg(long)]
        time: bool,
        /// Degree bound for primitive-element candidate coefficients.
        #[arg(long)]
        degree_bound: Option<u32>,
    },
    /// Extend input series through a change-of-variables document.
    Extend {
        file: PathBuf,
        /// One comma-separated coefficient list per basis coordinate
        /// (lowest degree first), series separated by ';'.
        #[arg(long, default_value = "")]
        inputs: String,
        #[arg(long)]
        trunc: Option<u32>,
        #[arg(long, value_enum, default_value_t = Backend::Exact)]
        backend: Backend,
    },
    /// Normalize a system file and sample random inputs through the result.
    Verify {
        file: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        trials: Option<u32>,
        #[arg(long)]
        trunc: Option<u32>,
        #[arg(long)]
        time: bool,
        #[arg(long)]
        degree_bound: Option<u32>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(doc) => {
            print!("{doc}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn doc_err(msg: impl Into<String>) -> Error {
    Error::Document { msg: msg.into() }
}

fn parse_names(vars: &str) -> Result<VarNames> {
    VarNames::new(
        vars.split(',')
            .map(|s| s.trim().to_string())
            .filter(|s| !s.is_empty())
            .collect(),
    )
}

fn lookup(names: &VarNames, wrt: &str) -> Result<u32> {
    names
        .index(wrt)
        .ok_or_else(|| doc_err(format!("--wrt names unknown indeterminate '{wrt}'")))
}

fn series_leaf<K: DiffField>(s: &TruncSeries<K>) -> String {
    s.coeffs()
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(", ")
}

// ---------------------------------------------------------------------------
// System files.
// ---------------------------------------------------------------------------

struct SystemFile {
    names: VarNames,
    d: u32,
    time: bool,
    eqs: Vec<String>,
    ineq: Option<String>,
    seed: Option<u64>,
    trunc: Option<u32>,
    trials: Option<u32>,
    degree_bound: Option<u32>,
}

fn leaf_number<T: std::str::FromStr>(doc: &Node, key: &str) -> Result<Option<T>> {
    match doc.get(key) {
        None => Ok(None),
        Some(node) => {
            let text = node
                .as_leaf()
                .ok_or_else(|| doc_err(format!("'{key}' is not a value")))?;
            text.parse()
                .map(Some)
                .map_err(|_| doc_err(format!("'{key}' is not a number: {text}")))
        }
    }
}

fn load_system(path: &Path) -> Result<SystemFile> {
    let text = std::fs::read_to_string(path)?;
    let doc = Node::parse(&text)?;
    let names = parse_names(doc.expect_leaf("vars")?)?;
    let d: u32 = leaf_number(&doc, "d")?.ok_or_else(|| doc_err("missing key 'd'"))?;
    if d >= names.len() {
        return Err(doc_err("d must be smaller than the number of indeterminates"));
    }
    let time = match doc.get("mode") {
        None => false,
        Some(node) => match node.as_leaf() {
            Some("constant") => false,
            Some("time") => true,
            _ => return Err(doc_err("mode must be 'constant' or 'time'")),
        },
    };
    let mut eqs = Vec::new();
    for node in doc.get_all("eq") {
        let text = node
            .as_leaf()
            .ok_or_else(|| doc_err("'eq' entries must be values"))?;
        eqs.push(text.to_string());
    }
    if eqs.is_empty() {
        return Err(doc_err("the system needs at least one 'eq' line"));
    }
    let ineq = match doc.get("ineq") {
        None => None,
        Some(node) => Some(
            node.as_leaf()
                .ok_or_else(|| doc_err("'ineq' must be a value"))?
                .to_string(),
        ),
    };
    Ok(SystemFile {
        names,
        d,
        time,
        eqs,
        ineq,
        seed: leaf_number(&doc, "seed")?,
        trunc: leaf_number(&doc, "trunc")?,
        trials: leaf_number(&doc, "trials")?,
        degree_bound: leaf_number(&doc, "degree-bound")?,
    })
}

/// Normalize a loaded system, returning the change of variables and the
/// names covering all its indeterminates (with `t` appended when adjoined).
fn normalize_system(
    sys: &SystemFile,
    force_time: bool,
    seed: u64,
    degree_bound: Option<u32>,
) -> Result<(ChangeOfVariables, VarNames)> {
    let time = sys.time || force_time;
    let n = sys.names.len();
    let mut params = PipelineParams {
        seed,
        ..PipelineParams::default()
    };
    if let Some(b) = degree_bound.or(sys.degree_bound) {
        params.candidate_degree = b;
    }
    if time && sys.names.index("t").is_some() {
        return Err(doc_err(
            "time systems implicitly provide 't'; do not declare it as an indeterminate",
        ));
    }
    let cv = if time {
        let rels: Vec<DiffPoly<RatT>> = sys
            .eqs
            .iter()
            .map(|e| parse_diffpoly(e, &sys.names))
            .collect::<Result<_>>()?;
        let ineq: DiffPoly<RatT> = match &sys.ineq {
            Some(text) => parse_diffpoly(text, &sys.names)?,
            None => DiffPoly::one(),
        };
        normalize_time(&rels, &ineq, n, sys.d, &params)?
    } else {
        let rels: Vec<QP> = sys
            .eqs
            .iter()
            .map(|e| parse_diffpoly(e, &sys.names))
            .collect::<Result<_>>()?;
        let ineq: QP = match &sys.ineq {
            Some(text) => parse_diffpoly(text, &sys.names)?,
            None => DiffPoly::one(),
        };
        normalize(&rels, &ineq, n, sys.d, &params)?
    };
    let mut names = sys.names.clone();
    if cv.t_index.is_some() {
        names.push("t".to_string());
    }
    Ok((cv, names))
}

// ---------------------------------------------------------------------------
// Commands.
// ---------------------------------------------------------------------------

fn run(command: Command) -> Result<String> {
    match command {
        Command::Reduce { vars, wrt, p, q } => cmd_reduce(&vars, &wrt, &p, &q),
        Command::Member { vars, wrt, p, q } => cmd_member(&vars, &wrt, &p, &q),
        Command::Manageable {
            vars,
            wrt,
            q,
            seed,
        } => cmd_manageable(&vars, &wrt, &q, seed),
        Command::Normalize {
            file,
            seed,
            time,
            degree_bound,
        } => cmd_normalize(&file, seed, time, degree_bound),
        Command::Extend {
            file,
            inputs,
            trunc,
            backend,
        } => cmd_extend(&file, &inputs, trunc, backend),
        Command::Verify {
            file,
            seed,
            trials,
            trunc,
            time,
            degree_bound,
        } => cmd_verify(&file, seed, trials, trunc, time, degree_bound),
    }
}

fn cmd_reduce(vars: &str, wrt: &str, p_text: &str, q_text: &str) -> Result<String> {
    let names = parse_names(vars)?;
    let i = lookup(&names, wrt)?;
    let p: QP = parse_diffpoly(p_text, &names)?;
    let q: QP = parse_diffpoly(q_text, &names)?;
    let cert = partial_reduce(&q, &p, i)?;
    if !cert.verify(&q, &p) {
        return Err(Error::Internal {
            msg: "reduction certificate failed verification".into(),
        });
    }
    let mut doc = Node::list();
    doc.push_leaf("result", "reduce");
    doc.push_leaf("wrt", wrt);
    doc.push_leaf("order", cert.order.to_string());
    doc.push_leaf("separant", format_diffpoly(&cert.separant, &names));
    doc.push_leaf("s-power", cert.s_power.to_string());
    let mut mults = Node::list();
    for (j, c) in &cert.multipliers {
        mults.push_leaf(j.to_string(), format_diffpoly(c, &names));
    }
    doc.push("multipliers", mults);
    doc.push_leaf("remainder", format_diffpoly(&cert.remainder, &names));
    Ok(doc.emit())
}

fn cmd_member(vars: &str, wrt: &str, p_text: &str, q_text: &str) -> Result<String> {
    let names = parse_names(vars)?;
    let i = lookup(&names, wrt)?;
    let p: QP = parse_diffpoly(p_text, &names)?;
    let q: QP = parse_diffpoly(q_text, &names)?;
    let cert = saturation_membership(&q, &p, i)?;
    let mut doc = Node::list();
    doc.push_leaf("result", "member");
    doc.push_leaf("member", cert.member.to_string());
    doc.push_leaf("s-power", cert.reduction.s_power.to_string());
    doc.push_leaf(
        "remainder",
        format_diffpoly(&cert.reduction.remainder, &names),
    );
    if let Some(quotient) = &cert.quotient {
        doc.push_leaf("quotient", format_diffpoly(quotient, &names));
    }
    Ok(doc.emit())
}

fn cmd_manageable(vars: &str, wrt: &str, q_text: &str, seed: u64) -> Result<String> {
    let names = parse_names(vars)?;
    let i = lookup(&names, wrt)?;
    let q: QP = parse_diffpoly(q_text, &names)?;
    let mut doc = Node::list();
    doc.push_leaf("result", "manageable");
    let witness_text =
        |w: &diffnorm::poly::Monomial| format_diffpoly(&QP::one().mul_monomial(w), &names);
    match manageable_witness(&q, i) {
        Some(w) => {
            doc.push_leaf("manageable", "true");
            doc.push_leaf("witness", witness_text(&w));
        }
        None => {
            doc.push_leaf("manageable", "false");
            let params = ManageableParams {
                seed,
                ..ManageableParams::default()
            };
            let out = make_manageable(&q, names.len(), i, &params)?;
            doc.push("shift", automorphism_node(&out.shift, &names));
            doc.push_leaf("transformed", format_diffpoly(&out.transformed, &names));
            doc.push_leaf("witness", witness_text(&out.witness));
            doc.push_leaf("trials", out.trials.to_string());
        }
    }
    Ok(doc.emit())
}

fn automorphism_node(a: &Automorphism<Q>, names: &VarNames) -> Node {
    let mut node = Node::list();
    node.push_leaf("tag", a.tag());
    let mut fwd = Node::list();
    for (j, img) in a.forward_map() {
        fwd.push_leaf(names.name(*j), format_diffpoly(img, names));
    }
    node.push("forward", fwd);
    node
}

fn cmd_normalize(
    file: &Path,
    seed: Option<u64>,
    time: bool,
    degree_bound: Option<u32>,
) -> Result<String> {
    let sys = load_system(file)?;
    let seed = seed.or(sys.seed).unwrap_or(0);
    let (cv, names) = normalize_system(&sys, time, seed, degree_bound)?;
    let mut doc = Node::list();
    doc.push_leaf("result", "normalize");
    doc.push_leaf("seed", seed.to_string());
    doc.push("change-of-variables", cv_to_node(&cv, &names));
    Ok(doc.emit())
}

fn parse_inputs(text: &str, d: u32, trunc: u32) -> Result<Vec<TruncSeries<Q>>> {
    let chunks: Vec<&str> = text
        .split(';')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .collect();
    if chunks.len() != d as usize {
        return Err(Error::PreconditionOrder {
            msg: format!("expected {d} input series, got {}", chunks.len()),
        });
    }
    let mut out = Vec::with_capacity(chunks.len());
    for chunk in chunks {
        let mut coeffs = parse_rat_list(chunk)?;
        coeffs.truncate(trunc as usize + 1);
        coeffs.resize(trunc as usize + 1, Q::from_integer(0.into()));
        out.push(TruncSeries::new(coeffs));
    }
    Ok(out)
}

fn push_extension_report<K: DiffField>(
    doc: &mut Node,
    sol: &diffnorm::pipeline::OriginalSolution<K>,
    cv: &ChangeOfVariables,
    names: &VarNames,
) {
    let report = &sol.report;
    doc.push_leaf("backend", report.backend);
    doc.push_leaf("order", report.order.to_string());
    doc.push_leaf("truncation", report.truncation.to_string());
    doc.push_leaf(
        "initial",
        report
            .initial
            .iter()
            .map(ToString::to_string)
            .collect::<Vec<_>>()
            .join(", "),
    );
    doc.push_leaf("guard-value", report.guard_value.to_string());
    doc.push_leaf("residual-depth", report.residual.trunc().to_string());
    doc.push_leaf("residual-zero", report.residual_is_zero().to_string());
    if let Some(lam) = &sol.lambda {
        doc.push_leaf("lambda", lam.to_string());
    }
    let mut comps = Node::list();
    let mut k = 0usize;
    for j in 1..=cv.n {
        if Some(j) == cv.t_index {
            continue;
        }
        comps.push_leaf(names.name(j), series_leaf(&sol.components[k]));
        k += 1;
    }
    doc.push("components", comps);
    if let Some(ts) = &sol.t_series {
        doc.push_leaf("t-series", series_leaf(ts));
    }
}

fn cmd_extend(
    file: &Path,
    inputs: &str,
    trunc: Option<u32>,
    backend: Backend,
) -> Result<String> {
    let text = std::fs::read_to_string(file)?;
    let top = Node::parse(&text)?;
    let cv_node = top
        .get("change-of-variables")
        .unwrap_or(&top);
    let (cv, names) = cv_from_node(cv_node)?;
    let trunc = trunc.unwrap_or(8);
    let rat_inputs = parse_inputs(inputs, cv.d, trunc)?;
    let mut doc = Node::list();
    doc.push_leaf("result", "extend");
    match backend {
        Backend::Exact => {
            let sol = extend_through::<Q>(&cv, &rat_inputs, trunc)?;
            push_extension_report(&mut doc, &sol, &cv, &names);
        }
        Backend::Float => {
            let float_inputs: Vec<TruncSeries<C64>> = rat_inputs
                .iter()
                .map(|s| s.map(C64::from_rational))
                .collect();
            let sol = extend_through::<C64>(&cv, &float_inputs, trunc)?;
            push_extension_report(&mut doc, &sol, &cv, &names);
        }
    }
    Ok(doc.emit())
}

fn cmd_verify(
    file: &Path,
    seed: Option<u64>,
    trials: Option<u32>,
    trunc: Option<u32>,
    time: bool,
    degree_bound: Option<u32>,
) -> Result<String> {
    let sys = load_system(file)?;
    let seed = seed.or(sys.seed).unwrap_or(0);
    let trials = trials.or(sys.trials).unwrap_or(20);
    let trunc = trunc.or(sys.trunc).unwrap_or(8);
    let (cv, _names) = normalize_system(&sys, time, seed, degree_bound)?;
    let report = verify_surjectivity_sample(&cv, trials, trunc, seed);
    let mut doc = Node::list();
    doc.push_leaf("result", "verify");
    doc.push_leaf("seed", seed.to_string());
    doc.push_leaf("trials", report.trials.to_string());
    doc.push_leaf("successes", report.successes.to_string());
    for outcome in &report.outcomes {
        let mut node = Node::list();
        node.push_leaf("index", outcome.trial.to_string());
        node.push_leaf("backend", &outcome.backend);
        if let Some(m) = outcome.truncation {
            node.push_leaf("truncation", m.to_string());
        }
        node.push_leaf("residual-zero", outcome.residual_zero.to_string());
        if let Some(err) = &outcome.error {
            node.push_leaf("error", err);
        }
        doc.push("trial", node);
    }
    Ok(doc.emit())
}

// Inline CLI smoke tests live in tests/cli.rs; unit tests here would need a
// built binary, which integration tests get for free.
