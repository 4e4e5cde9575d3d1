//! `hdlf`: JSON in, JSON out front end for the hdlf library.
//!
//! Exit status: 0 when every checked property holds, 1 on a property
//! violation, 2 when precision or a truncation box runs out, 3 on unusable
//! input (schema errors name the failing field).

mod cmds;
mod io;
mod schema;

use std::collections::BTreeMap;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use io::{canonical, to_value, write_text, Artifact, CliError, CliResult, EXIT_INPUT, EXIT_PASS, EXIT_VIOLATION};

/// Environment variable holding the precision exponent M.
pub const PRECISION_ENV: &str = "HDLF_PRECISION";

#[derive(Parser, Serialize)]
#[command(name = "hdlf", version, about = "Exact arithmetic for higher-dimensional local fields")]
struct Cli {
    /// Print the JSON schema of an input type (or of all types) and exit.
    #[arg(long, value_name = "TYPE", num_args = 0..=1, default_missing_value = "all")]
    #[serde(skip)]
    schema: Option<String>,

    /// Write the artifact to this file instead of stdout.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,

    #[command(subcommand)]
    command: Option<Group>,
}

#[derive(Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
enum Group {
    /// Piecewise-linear Herbrand functions built from jump data.
    #[command(subcommand)]
    Herbrand(HerbrandCmd),
    /// Root localization and discriminant formulas.
    #[command(subcommand)]
    Krasner(KrasnerCmd),
    /// Witt vector arithmetic, Artin-Hasse series and the map gamma.
    #[command(subcommand)]
    Witt(WittCmd),
    /// The Artin-Schreier elimination recursion.
    #[command(subcommand)]
    Epp(EppCmd),
    /// Cyclotomic towers, compatible sequences, descent and duality.
    #[command(subcommand)]
    Norms(NormsCmd),
    /// Seeded fixture generation.
    #[command(subcommand)]
    Corpus(CorpusCmd),
}

#[derive(Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum HerbrandCmd {
    /// Build phi from RamJumps JSON.
    FromJumps {
        input: String,
        /// Also evaluate phi here, e.g. `--at 3/2,-1`.
        #[arg(long)]
        at: Vec<String>,
    },
    /// outer ∘ inner; each input is a HerbrandMap or RamJumps.
    Compose { outer: String, inner: String },
    /// The inverse map.
    Invert { input: String },
    /// The last edge point (i, j).
    LastEdge { input: String },
}

#[derive(Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum KrasnerCmd {
    /// Distance to the close root from v_K(F(alpha)) = A + (0, ..., 0, 1).
    Locate {
        input: String,
        /// A as comma-separated rationals.
        #[arg(long = "value", allow_hyphen_values = true)]
        value: String,
    },
    /// Discriminant valuation from RamJumps or from an Eisenstein polynomial.
    Disc {
        input: String,
        /// v_L(theta) for the different sum; defaults to (0, ..., 0, 1).
        #[arg(long, allow_hyphen_values = true)]
        v_theta: Option<String>,
    },
    /// The value identity at each `--a` (or at a default grid) and the
    /// discriminant bound.
    Check {
        input: String,
        #[arg(long, allow_hyphen_values = true)]
        a: Vec<String>,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum GammaElement {
    /// 1 + [ε]^{1/p} + ... + [ε]^{(p-1)/p}; gamma must vanish.
    Kernel,
    /// [ε]; gamma must be 1.
    Epsilon,
    /// [ε] - 1; gamma must vanish.
    EpsilonMinusOne,
    /// p; gamma must be p.
    P,
}

#[derive(Args, Clone, Serialize)]
pub struct TowerArgs {
    #[arg(long, default_value_t = 3)]
    pub p: u64,
    #[arg(long, default_value_t = 4)]
    pub depth: usize,
    /// Truncation modulus p^M (the exponent falls back to $HDLF_PRECISION,
    /// then to 8, or 16 for p = 2).
    #[arg(long)]
    pub precision: Option<u64>,
}

#[derive(Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum WittCmd {
    /// Sum of two Witt vectors with the same ring tag.
    Add { a: String, b: String },
    /// Product of two Witt vectors with the same ring tag.
    Mul { a: String, b: String },
    /// Ghost components.
    Ghost { a: String },
    /// Coefficients of E(X) with integrality and congruence checks.
    ArtinHasse {
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 20)]
        degree: usize,
    },
    /// gamma of a named element of W(R) over the cyclotomic tower.
    Gamma {
        #[command(flatten)]
        tower: TowerArgs,
        #[arg(long, value_enum, default_value_t = GammaElement::Kernel)]
        element: GammaElement,
        /// Witt length.
        #[arg(long, default_value_t = 2)]
        length: usize,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RuleArg {
    Zero,
    Minimal,
}

#[derive(Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum EppCmd {
    /// A, B and B^(s) of a datum.
    Invariants { input: String },
    /// Run the recursion and report n*; `--emit` writes the full trace.
    Run {
        /// Datum JSON (positional form).
        datum: Option<String>,
        /// Datum JSON (flag form).
        #[arg(long)]
        input: Option<String>,
        #[arg(long, default_value_t = 50)]
        steps: usize,
        #[arg(long)]
        emit: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = RuleArg::Minimal)]
        tilde: RuleArg,
        #[arg(long, value_enum, default_value_t = RuleArg::Minimal)]
        plain: RuleArg,
    },
    /// Evaluate every step inequality on a trace (bare or as emitted by `run`).
    Check { trace: String },
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum DualityElement {
    EpsilonMinusOne,
    Zero,
    Random,
}

#[derive(Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum NormsCmd {
    /// Compatibility certificates for epsilon and the uniformizer sequence.
    Tower {
        #[command(flatten)]
        tower: TowerArgs,
        /// Also run the p-th power projection check of the 2-dimensional tower.
        #[arg(long)]
        basic_2d: bool,
    },
    /// The sequence (1, zeta_p, zeta_{p^2}, ...) with certificates.
    Epsilon {
        #[command(flatten)]
        tower: TowerArgs,
    },
    /// Embed a one-variable series T -> (pi_u) into the tower.
    Embed {
        series: String,
        #[command(flatten)]
        tower: TowerArgs,
    },
    /// Recover pi_u from pi_{u+1}; `--control` runs the perturbed polynomial.
    Descend {
        #[command(flatten)]
        tower: TowerArgs,
        #[arg(long, default_value_t = 1)]
        level: usize,
        #[arg(long)]
        control: bool,
    },
    /// exp(-p gamma(sigma^{-1} f) - ... - p^M gamma(sigma^{-M} f)).
    Duality {
        #[command(flatten)]
        tower: TowerArgs,
        #[arg(long = "shifts", default_value_t = 1)]
        m: usize,
        #[arg(long, default_value_t = 2)]
        length: usize,
        #[arg(long, value_enum, default_value_t = DualityElement::EpsilonMinusOne)]
        element: DualityElement,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CorpusKind {
    RamJumps,
    Epp,
    Witt,
    Series,
}

#[derive(Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CorpusCmd {
    /// Seeded random fixtures of one kind.
    Gen {
        #[arg(long, value_enum)]
        kind: CorpusKind,
        #[arg(long, default_value_t = 10)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        p: Option<u64>,
    },
}

/// What a command hands back: its result and whether every checked
/// property held.
pub struct Outcome {
    pub result: serde_json::Value,
    pub pass: bool,
}

/// Inputs read during a run, echoed into the artifact.
pub type Inputs = BTreeMap<String, serde_json::Value>;

fn dispatch(cli: &Cli, group: &Group, inputs: &mut Inputs) -> CliResult<Outcome> {
    match group {
        Group::Herbrand(c) => cmds::herbrand(c, inputs),
        Group::Krasner(c) => cmds::krasner(c, inputs),
        Group::Witt(c) => cmds::witt(c, inputs),
        Group::Epp(c) => cmds::epp(c, inputs, &to_value(cli)),
        Group::Norms(c) => cmds::norms(c, inputs),
        Group::Corpus(c) => cmds::corpus(c),
    }
}

fn run(cli: &Cli) -> CliResult<i32> {
    if let Some(name) = &cli.schema {
        let s = schema::lookup(name).ok_or_else(|| CliError::Io(format!("unknown schema {name:?}; known: {}", schema::names().join(", "))))?;
        write_text(cli.output.as_deref(), &canonical(&s))?;
        return Ok(EXIT_PASS);
    }
    let Some(group) = &cli.command else {
        return Err(CliError::Io("no subcommand given; see --help".into()));
    };
    let mut inputs = Inputs::new();
    let out = dispatch(cli, group, &mut inputs)?;
    let mut config = to_value(cli);
    config[PRECISION_ENV] = std::env::var(PRECISION_ENV).map(serde_json::Value::String).unwrap_or(serde_json::Value::Null);
    let art = Artifact { config, inputs, result: out.result, pass: out.pass };
    write_text(cli.output.as_deref(), &canonical(&art.to_json()))?;
    Ok(if out.pass { EXIT_PASS } else { EXIT_VIOLATION })
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_PASS };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    let code = match run(&cli) {
        Ok(c) => c,
        Err(e) => {
            eprint!("{}", canonical(&e.to_json()));
            e.exit_code()
        }
    };
    std::process::exit(code);
}
