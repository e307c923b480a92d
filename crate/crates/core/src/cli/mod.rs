//! Command surface: declaration files in, reports out.

mod classical;
mod reduction;
mod report;
mod vertex;

use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

pub use report::{Entry, Report, SCHEMA_VERSION};

use crate::coeff::Coeff;
use crate::diffalg::DiffPoly;
use crate::error::{Error, Result};
use crate::pva::PvaSpec;
use crate::syntax::{parse_source, Names, SourceSpec, Style};

#[derive(Parser, Debug)]
#[command(name = "pvakit", version, about = "Exact lambda-bracket calculus")]
pub struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Emit::Text)]
    pub emit: Emit,
    /// Write output to a file instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Emit {
    Text,
    Latex,
    Json,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Skewsymmetry, Jacobi and pairwise compatibility of every bracket in a file.
    Check { file: PathBuf },
    /// {F λ G} by the master formula, plus the functional bracket.
    Bracket {
        file: PathBuf,
        f: String,
        g: String,
        #[arg(long)]
        label: Option<String>,
    },
    /// Lenard–Magri scheme for a pair of brackets.
    Hierarchy {
        file: PathBuf,
        /// Comma-separated components of ξ₀.
        #[arg(long, default_value = "1")]
        seed: String,
        #[arg(long, default_value_t = 3)]
        steps: usize,
        #[arg(long, default_value = "H")]
        h: String,
        #[arg(long, default_value = "K")]
        k: String,
        /// Check commutation of the flows 0..=N (default min(steps, 3)).
        #[arg(long)]
        commute_upto: Option<usize>,
    },
    /// Variational calculus on one expression, or a randomized property run.
    Varcalc {
        file: PathBuf,
        f: Option<String>,
        #[arg(long)]
        sample: Option<usize>,
        /// Number of generators for --sample (defaults to the file's).
        #[arg(long)]
        gens: Option<usize>,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 4)]
        degree: u32,
        #[arg(long, default_value_t = 3)]
        order: u32,
    },
    /// Homogeneous Drinfeld–Sokolov hierarchy for a Lie algebra.
    Ds {
        #[arg(long)]
        algebra: PathBuf,
        #[arg(long)]
        s: String,
        #[arg(long)]
        a: String,
        #[arg(long, default_value_t = 3)]
        trunc: usize,
    },
    /// Dirac reduction by second-class constraints.
    Dirac {
        file: PathBuf,
        /// Constraints (defaults to the file's `constraints`).
        #[arg(long, value_delimiter = ',')]
        constraints: Vec<String>,
        #[arg(long, default_value_t = 6)]
        trunc: u32,
        /// Reduce only this bracket.
        #[arg(long)]
        label: Option<String>,
        /// Reduced t_N flow from the DS densities of `--s`, `--a`.
        #[arg(long)]
        flow: Option<usize>,
        #[arg(long)]
        s: Option<String>,
        #[arg(long)]
        a: Option<String>,
        #[arg(long, default_value = "H")]
        h: String,
        #[arg(long, default_value = "K")]
        k: String,
        /// Match the reduced flow against u' = u'' + κu²v, v' = −v'' − κuv².
        #[arg(long)]
        nls: bool,
    },
    /// Vertex-algebra computations (FILE may be builtin:virasoro|boson|fermion|sl2).
    Va {
        file: String,
        #[command(subcommand)]
        cmd: VaCommand,
    },
    /// Canonical form of a declaration file.
    Print { file: PathBuf },
}

#[derive(Subcommand, Debug)]
pub enum VaCommand {
    /// [A λ B].
    Bracket { a: String, b: String },
    /// Whether [L λ L] has Virasoro form, and its central charge.
    Virasoro { l: String },
    /// [L λ A] = (T + Δλ)A.
    Primary {
        l: String,
        a: String,
        #[arg(long)]
        weight: Option<String>,
    },
    /// Skewsymmetry and Jacobi on generators.
    Check,
    /// Sugawara construction over the file's Lie algebra.
    Sugawara {
        #[arg(long, default_value = "k")]
        level: String,
        #[arg(long, default_value_t = 1)]
        oracle_level: i64,
    },
}

pub fn load(path: &Path) -> Result<SourceSpec> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Invalid(format!("{}: {e}", path.display())))?;
    parse_source(&text).map_err(|e| Error::Invalid(format!("{}: {e}", path.display())))
}

/// The bracket named `label`, or the only one when `label` is None.
pub(crate) fn pick<'a>(spec: &'a SourceSpec, label: Option<&str>) -> Result<&'a PvaSpec> {
    match label {
        Some(l) => spec.bracket(l),
        None if spec.brackets.len() == 1 => Ok(spec.brackets.values().next().expect("one")),
        None => spec.bracket(""),
    }
}

pub(crate) fn kind(base: &str, label: &str) -> String {
    if label.is_empty() {
        base.to_string()
    } else {
        format!("{base}({label})")
    }
}

pub(crate) fn vec_styled(names: &Names, v: &[DiffPoly], style: Style) -> String {
    if v.len() == 1 {
        names.poly_styled(&v[0], style)
    } else {
        names.vector(v, style)
    }
}

pub(crate) fn coeff_text(c: &Coeff, style: Style) -> String {
    crate::syntax::print::coeff(c, style)
}

/// Run a parsed command line.
pub fn run(cli: &Cli) -> Result<Report> {
    match &cli.command {
        Command::Check { file } => Ok(classical::check(&load(file)?)),
        Command::Bracket { file, f, g, label } => classical::bracket(&load(file)?, f, g, label.as_deref()),
        Command::Hierarchy {
            file,
            seed,
            steps,
            h,
            k,
            commute_upto,
        } => classical::hierarchy(&load(file)?, seed, *steps, h, k, *commute_upto),
        Command::Varcalc {
            file,
            f,
            sample,
            gens,
            seed,
            degree,
            order,
        } => {
            let spec = load(file)?;
            match (f, sample) {
                (Some(f), _) => classical::varcalc_one(&spec, f),
                (None, Some(n)) => Ok(classical::varcalc_sample(gens.unwrap_or(spec.generators.len()), *n, *seed, *degree, *order)),
                (None, None) => Err(Error::Invalid("varcalc needs an expression or --sample N".into())),
            }
        }
        Command::Ds { algebra, s, a, trunc } => reduction::ds(&load(algebra)?, s, a, *trunc),
        Command::Dirac {
            file,
            constraints,
            trunc,
            label,
            flow,
            s,
            a,
            h,
            k,
            nls,
        } => {
            let opts = reduction::DiracOpts {
                constraints: constraints.clone(),
                trunc: *trunc,
                label: label.clone(),
                flow: *flow,
                s: s.clone(),
                a: a.clone(),
                h: h.clone(),
                k: k.clone(),
                nls: *nls,
            };
            reduction::dirac(&load(file)?, &opts)
        }
        Command::Va { file, cmd } => {
            let spec = match file.strip_prefix("builtin:") {
                Some(name) => vertex::builtin(name)?,
                None => load(Path::new(file))?,
            };
            vertex::run(&spec, cmd)
        }
        Command::Print { file } => {
            let spec = load(file)?;
            let mut r = Report::new("print");
            r.info("source", &[], crate::syntax::print_source(&spec), "");
            Ok(r)
        }
    }
}

/// Render a report in the requested format. `print` in text mode emits
/// the bare canonical source.
pub fn render(cli: &Cli, report: &Report) -> String {
    match (cli.emit, &cli.command) {
        (Emit::Text, Command::Print { .. }) => report.entries[0].text.clone(),
        (Emit::Text, _) => report.to_text(),
        (Emit::Latex, _) => report.to_latex(),
        (Emit::Json, _) => report.to_json(),
    }
}
