use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use kmfg::adm::AdmGraph;
use kmfg::cartan::{CartanError, CartanMatrix};
use kmfg::coxeter::{CoxeterError, CoxeterWord, WeylGroup};
use kmfg::fpgroup::{self, CheckStatus, FpError};
use kmfg::pi1::{self, Caps, FlagReport, GroupOrder, Pi1Error};
use kmfg::{format_index_set, parse_index_set};

mod render;

/// Fundamental groups of split real Kac–Moody groups and their flag varieties.
#[derive(Parser, Debug)]
#[command(name = "kmfg", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
#[group(required = true, multiple = false)]
struct Input {
    /// Named type: A5, C3, E10, G2, A1~, X16, ...
    #[arg(long = "type", value_name = "NAME")]
    type_name: Option<String>,
    /// Matrix file, plain rows or JSON `{size, entries}`; `-` reads stdin.
    #[arg(long, value_name = "PATH")]
    matrix: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
struct Common {
    #[command(flatten)]
    input: Input,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Proceed even when the matrix is neither symmetrizable nor two-spherical.
    #[arg(long)]
    force: bool,
    /// Coset table cap for Todd–Coxeter enumeration.
    #[arg(long, env = "KMFG_MAX_COSETS", default_value_t = fpgroup::DEFAULT_MAX_COSETS)]
    max_cosets: usize,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Dot,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Hypotheses and a summary of the diagram.
    Info(Common),
    /// pi1 of the group and of its maximal compact subgroup.
    Pi1 {
        #[command(flatten)]
        common: Common,
        /// Also list spin covers and flag varieties for J = {} and singletons.
        #[arg(long)]
        full: bool,
    },
    /// pi1 of the spin covers.
    Spin {
        #[command(flatten)]
        common: Common,
        /// One '1'/'2' per free component of the parity graph.
        #[arg(long, conflicts_with = "all")]
        kappa: Option<String>,
        /// Every admissible colouring (the default).
        #[arg(long)]
        all: bool,
    },
    /// pi1 of the flag variety G/P_J.
    Flag {
        #[command(flatten)]
        common: Common,
        /// 1-based comma list; empty for G/B.
        #[arg(long, default_value = "", value_name = "J")]
        set: String,
    },
    /// Weyl group elements, Schubert cells and their closures.
    Weyl {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_name = "L")]
        max_length: usize,
        /// Parabolic subset J; lists minimal coset representatives W^J.
        #[arg(long, default_value = "", value_name = "J")]
        parabolic: String,
        /// Cell counts per dimension instead of the elements.
        #[arg(long, conflicts_with = "closure")]
        cells: bool,
        /// Cells in the closure of the cell of this word (1-based letters).
        #[arg(long, value_name = "WORD")]
        closure: Option<String>,
        #[arg(long, default_value_t = kmfg::coxeter::DEFAULT_ELEMENT_CAP)]
        max_elements: usize,
    },
    /// The coloured parity graph.
    Adm {
        #[command(flatten)]
        common: Common,
        /// Same as --format dot.
        #[arg(long)]
        dot: bool,
    },
    /// Check the component groups and presentations with coset enumeration.
    Verify(Common),
}

/// A failure with its exit code and stable identifier.
#[derive(Debug)]
struct Failure {
    code: u8,
    id: &'static str,
    message: String,
}

impl Failure {
    fn new(code: u8, id: &'static str, message: impl Into<String>) -> Failure {
        Failure {
            code,
            id,
            message: message.into(),
        }
    }
}

impl From<CartanError> for Failure {
    fn from(e: CartanError) -> Failure {
        let id = match e {
            CartanError::Syntax { .. } => "E202",
            CartanError::Invariant(_) => "E201",
            CartanError::UnknownName(_) | CartanError::RankOutOfRange { .. } => "E203",
            CartanError::IndexOutOfRange { .. } => "E204",
        };
        Failure::new(2, id, e.to_string())
    }
}

impl From<Pi1Error> for Failure {
    fn from(e: Pi1Error) -> Failure {
        match e {
            Pi1Error::HypothesisRefused(_) => Failure::new(3, "E300", e.to_string()),
            Pi1Error::Adm(_) => Failure::new(2, "E205", e.to_string()),
            Pi1Error::Fp(f) => f.into(),
            Pi1Error::Reducible { .. } => Failure::new(2, "E206", e.to_string()),
        }
    }
}

impl From<FpError> for Failure {
    fn from(e: FpError) -> Failure {
        match e {
            FpError::ZeroCap => Failure::new(1, "E101", e.to_string()),
            _ => Failure::new(2, "E204", e.to_string()),
        }
    }
}

impl From<CoxeterError> for Failure {
    fn from(e: CoxeterError) -> Failure {
        match e {
            CoxeterError::ElementCap { .. } => Failure::new(4, "E400", e.to_string()),
            CoxeterError::Overflow => Failure::new(4, "E401", e.to_string()),
            _ => Failure::new(2, "E207", e.to_string()),
        }
    }
}

/// Output produced so far, and an optional failure to report after it.
struct Outcome {
    stdout: String,
    failure: Option<Failure>,
}

impl Outcome {
    fn ok(stdout: String) -> Outcome {
        Outcome { stdout, failure: None }
    }
}

fn load(input: &Input) -> Result<CartanMatrix, Failure> {
    match (&input.type_name, &input.matrix) {
        (Some(name), None) => Ok(CartanMatrix::from_named(name)?),
        (None, Some(path)) => {
            let text = if path.as_os_str() == "-" {
                std::io::read_to_string(std::io::stdin())
            } else {
                fs::read_to_string(path)
            }
            .map_err(|e| Failure::new(2, "E200", format!("cannot read {}: {e}", path.display())))?;
            Ok(CartanMatrix::parse(&text)?)
        }
        _ => Err(Failure::new(1, "E100", "exactly one of --type and --matrix is required")),
    }
}

fn reject_dot(format: Format, what: &str) -> Result<(), Failure> {
    if format == Format::Dot {
        return Err(Failure::new(1, "E102", format!("dot output is only available for `adm`, not `{what}`")));
    }
    Ok(())
}

fn caps(common: &Common) -> Result<Caps, Failure> {
    if common.max_cosets == 0 {
        return Err(Failure::new(1, "E101", "--max-cosets must be at least 1"));
    }
    Ok(Caps {
        max_cosets: common.max_cosets,
        ..Caps::default()
    })
}

fn json_out(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json renders");
    s.push('\n');
    s
}

fn run(cli: Cli) -> Result<Outcome, Failure> {
    match cli.command {
        Command::Info(common) => info(&common),
        Command::Pi1 { common, full } => pi1_cmd(&common, full),
        Command::Spin { common, kappa, all: _ } => spin_cmd(&common, kappa.as_deref()),
        Command::Flag { common, set } => flag_cmd(&common, &set),
        Command::Weyl {
            common,
            max_length,
            parabolic,
            cells,
            closure,
            max_elements,
        } => weyl_cmd(&common, max_length, &parabolic, cells, closure.as_deref(), max_elements),
        Command::Adm { common, dot } => adm_cmd(&common, dot),
        Command::Verify(common) => verify_cmd(&common),
    }
}

fn info(common: &Common) -> Result<Outcome, Failure> {
    reject_dot(common.format, "info")?;
    let m = load(&common.input)?;
    let h = m.hypotheses();
    let factors = m.irreducible_components();
    if common.format == Format::Json {
        return Ok(Outcome::ok(json_out(&json!({
            "rank": m.rank(),
            "matrix": m.rows(),
            "hypotheses": h,
            "simply_laced": m.is_simply_laced(),
            "factors": factors.iter().map(|f| f.iter().map(|v| v + 1).collect::<Vec<_>>()).collect::<Vec<_>>(),
        }))));
    }
    let mut out = String::new();
    let _ = writeln!(out, "rank: {}", m.rank());
    let _ = writeln!(out, "matrix:\n{m}");
    let _ = writeln!(out, "irreducible: {}", render::yes_no(h.irreducible));
    let _ = writeln!(out, "symmetrizable: {}", render::yes_no(h.symmetrizable));
    let _ = writeln!(out, "two-spherical: {}", render::yes_no(h.two_spherical));
    let _ = writeln!(out, "spherical: {}", render::yes_no(h.spherical));
    let _ = writeln!(out, "simply-laced: {}", render::yes_no(m.is_simply_laced()));
    if factors.len() > 1 {
        let list: Vec<String> = factors.iter().map(|f| format_index_set(f)).collect();
        let _ = writeln!(out, "irreducible factors: {}", list.join(" "));
    }
    let gated = h.symmetrizable || h.two_spherical;
    let _ = writeln!(
        out,
        "theorems apply: {}",
        if gated { "yes" } else { "no (neither symmetrizable nor two-spherical)" }
    );
    Ok(Outcome::ok(out))
}

fn pi1_cmd(common: &Common, full: bool) -> Result<Outcome, Failure> {
    reject_dot(common.format, "pi1")?;
    let m = load(&common.input)?;
    if full {
        let report = pi1::full_report(&m, caps(common)?, common.force)?;
        let stdout = match common.format {
            Format::Json => json_out(&report.to_json()),
            _ => render::full_report(&report),
        };
        let failure = report.exhausted().then(|| {
            Failure::new(4, "E400", "some flag orders were not decided within the coset cap")
        });
        return Ok(Outcome { stdout, failure });
    }
    let product = pi1::pi1_group_product(&m, common.force)?;
    let caveat = !m.is_symmetrizable();
    let reducible = product.factors.len() > 1;
    let g = AdmGraph::build(&m);
    if common.format == Format::Json {
        let components: Vec<Value> = g
            .components()
            .iter()
            .map(|c| {
                json!({
                    "vertices": c.vertices.iter().map(|v| v + 1).collect::<Vec<_>>(),
                    "colour": c.colour,
                    "contribution": pi1::contribution(c.colour),
                })
            })
            .collect();
        let mut v = json!({
            "hypotheses": m.hypotheses(),
            "components": components,
            "pi1_G": product.product,
            "pi1_K": {"z": product.product.free_rank, "c2": product.product.c2_count, "caveat": caveat},
        });
        if reducible {
            v["factors"] = json!(product.factors);
        }
        return Ok(Outcome::ok(json_out(&v)));
    }
    let mut out = String::new();
    if reducible {
        let _ = writeln!(out, "reducible diagram: product over irreducible factors (outside the irreducible setting)");
        for f in &product.factors {
            let set: Vec<usize> = f.vertices.iter().map(|v| v - 1).collect();
            let _ = writeln!(out, "  factor {}: {}", format_index_set(&set), f.pi1);
        }
    }
    let _ = writeln!(out, "pi1(G) = {}", product.product);
    let _ = writeln!(out, "pi1(K) = {}", product.product);
    if caveat {
        let _ = writeln!(out, "caveat: K -> G is only known to be a weak homotopy equivalence for symmetrizable matrices");
    }
    Ok(Outcome::ok(out))
}

fn spin_cmd(common: &Common, kappa: Option<&str>) -> Result<Outcome, Failure> {
    reject_dot(common.format, "spin")?;
    let m = load(&common.input)?;
    pi1::check_gate(&m, common.force)?;
    let g = AdmGraph::build(&m);
    let kappas = match kappa {
        Some(bits) => vec![g.kappa_from_bits(bits).map_err(Pi1Error::from)?],
        None => {
            let free = g.free_components().len();
            if free > 20 {
                return Err(Failure::new(4, "E402", format!("{free} free components give 2^{free} colourings; pass --kappa")));
            }
            g.enumerate_kappa()
        }
    };
    let mut rows = Vec::new();
    for k in &kappas {
        // the formula is multiplicative over irreducible factors
        let counts = g.counts(Some(k)).map_err(Pi1Error::from)?;
        let t = pi1::Pi1Type::new(counts.green, counts.blue_kappa_one.unwrap_or(0));
        rows.push((k.to_bits(&g), t));
    }
    if common.format == Format::Json {
        let v: Vec<Value> = rows
            .iter()
            .map(|(bits, t)| json!({"kappa": bits, "z": t.free_rank, "c2": t.c2_count}))
            .collect();
        return Ok(Outcome::ok(json_out(&json!({ "spin": v }))));
    }
    let mut out = String::new();
    for (bits, t) in rows {
        let label = if bits.is_empty() { "-".to_string() } else { bits };
        let _ = writeln!(out, "pi1(Spin(kappa={label})) = {t}");
    }
    Ok(Outcome::ok(out))
}

fn flag_cmd(common: &Common, set: &str) -> Result<Outcome, Failure> {
    reject_dot(common.format, "flag")?;
    let m = load(&common.input)?;
    let set = parse_index_set(set, m.rank())?;
    let report = pi1::pi1_flag(&m, &set, caps(common)?, common.force)?;
    let stdout = match common.format {
        Format::Json => json_out(&render::flag_json(&report)),
        _ => render::flag_text(&report),
    };
    Ok(Outcome {
        stdout,
        failure: flag_failure(&report),
    })
}

fn flag_failure(report: &FlagReport) -> Option<Failure> {
    if let GroupOrder::Exhausted { limit } = report.order {
        return Some(Failure::new(4, "E400", format!("coset enumeration stopped at the cap of {limit} cosets")));
    }
    if !report.consistent() {
        return Some(Failure::new(2, "E301", "computed invariants disagree with the closed form"));
    }
    None
}

fn weyl_cmd(
    common: &Common,
    max_length: usize,
    parabolic: &str,
    cells: bool,
    closure: Option<&str>,
    max_elements: usize,
) -> Result<Outcome, Failure> {
    reject_dot(common.format, "weyl")?;
    let m = load(&common.input)?;
    let set = parse_index_set(parabolic, m.rank())?;
    let w = WeylGroup::new(&m);
    if cells {
        let counts = w.cell_counts(&set, max_length, max_elements)?;
        if common.format == Format::Json {
            let map: serde_json::Map<String, Value> =
                counts.iter().map(|(k, v)| (k.to_string(), json!(v))).collect();
            return Ok(Outcome::ok(json_out(&json!({"parabolic": render::one_based(&set), "cells": map}))));
        }
        let mut out = String::new();
        let _ = writeln!(out, "J = {}", format_index_set(&set));
        for (dim, n) in counts {
            let _ = writeln!(out, "dim {dim}: {n}");
        }
        return Ok(Outcome::ok(out));
    }
    let elements = match closure {
        Some(text) => {
            let word = CoxeterWord::parse(text, m.rank())?;
            let target = w.element_from_word(&word)?;
            let mut below = w.closure_cells(&target, &set, max_elements)?;
            below.retain(|x| x.length() <= max_length);
            below
        }
        None => w.minimal_reps(&set, max_length, max_elements)?,
    };
    let mut rows = Vec::with_capacity(elements.len());
    for e in &elements {
        rows.push((e.length(), w.reduced_word(e)?));
    }
    if common.format == Format::Json {
        let v: Vec<Value> = rows
            .iter()
            .map(|(len, word)| json!({"length": len, "word": word.letters().iter().map(|i| i + 1).collect::<Vec<_>>()}))
            .collect();
        return Ok(Outcome::ok(json_out(&json!({"parabolic": render::one_based(&set), "elements": v}))));
    }
    let mut out = String::new();
    for (len, word) in rows {
        let _ = writeln!(out, "{len}\t{word}");
    }
    Ok(Outcome::ok(out))
}

fn adm_cmd(common: &Common, dot: bool) -> Result<Outcome, Failure> {
    let m = load(&common.input)?;
    let g = AdmGraph::build(&m);
    if dot || common.format == Format::Dot {
        return Ok(Outcome::ok(g.to_dot()));
    }
    if common.format == Format::Json {
        return Ok(Outcome::ok(json_out(&g.to_json(None).expect("no kappa given"))));
    }
    let mut out = String::new();
    for c in g.components() {
        let _ = writeln!(out, "{} {}", c.colour, format_index_set(&c.vertices));
    }
    let counts = g.counts(None).expect("no kappa given");
    let _ = writeln!(out, "n_r = {}, n_g = {}, n_b = {}", counts.red, counts.green, counts.blue);
    let edges: Vec<String> = g.edges().iter().map(|(i, j)| format!("{}-{}", i + 1, j + 1)).collect();
    let _ = writeln!(out, "edges: {}", if edges.is_empty() { "none".to_string() } else { edges.join(" ") });
    Ok(Outcome::ok(out))
}

fn verify_cmd(common: &Common) -> Result<Outcome, Failure> {
    reject_dot(common.format, "verify")?;
    let m = load(&common.input)?;
    pi1::check_gate(&m, common.force)?;
    let caps = caps(common)?;
    let suite = render::verify_suite(&m, caps)?;
    let stdout = match common.format {
        Format::Json => json_out(&suite.json),
        _ => suite.text.clone(),
    };
    let failure = match suite.status {
        CheckStatus::Pass => None,
        CheckStatus::Fail => Some(Failure::new(2, "E301", "verification failed")),
        CheckStatus::Inconclusive => Some(Failure::new(4, "E400", "some checks hit the coset cap")),
    };
    Ok(Outcome { stdout, failure })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion | ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand) {
                let _ = e.print();
                return ExitCode::from(if e.kind() == ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand { 1 } else { 0 });
            }
            let rendered = e.render().to_string();
            let first = rendered.lines().next().unwrap_or("").trim_start_matches("error: ");
            eprintln!("error[E100]: {first}");
            eprint!("{}", rendered.split_once('\n').map_or("", |(_, rest)| rest));
            return ExitCode::from(1);
        }
    };
    match run(cli) {
        Ok(outcome) => {
            print!("{}", outcome.stdout);
            match outcome.failure {
                None => ExitCode::SUCCESS,
                Some(f) => {
                    eprintln!("error[{}]: {}", f.id, f.message);
                    ExitCode::from(f.code)
                }
            }
        }
        Err(f) => {
            eprintln!("error[{}]: {}", f.id, f.message);
            ExitCode::from(f.code)
        }
    }
}
