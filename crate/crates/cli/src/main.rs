//! `specimen`: type-check, normalise and compose terms from the command line.

use std::fs;
use std::io::{self, Read};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use specimen_core::compose::{readings, ComposeConfig, ComposeError, Reading, SyntaxTree};
use specimen_core::hol::{formula_to_sexp, generics, pretty, to_formula, HolTerm, PrettyOptions};
use specimen_core::kernel::{normalize_checked, parse_term, type_of, Env, ReduceError};
use specimen_core::lexicon::{CoercionKind, Grammar};
use specimen_core::{batch::Execution, demo};

#[derive(Parser, Debug)]
#[command(name = "specimen", version, about = "Meaning assembly in System F with specimen quantifiers")]
struct Cli {
    /// Lexicon file with `word` entries (defaults to the bundled demo).
    #[arg(long, global = true)]
    lexicon: Option<PathBuf>,
    /// Ontology file with sorts, inclusions and constants (defaults to the bundled demo).
    #[arg(long, global = true)]
    ontology: Option<PathBuf>,
    /// Longest chain of inclusions tried as a coercion.
    #[arg(long, global = true, default_value_t = 3)]
    max_coercion_depth: usize,
    /// Reduction step budget.
    #[arg(long, global = true, default_value_t = 100_000, value_parser = clap::value_parser!(u64).range(1..))]
    fuel: u64,
    /// Hide inclusion morphisms in printed formulas.
    #[arg(long, global = true)]
    elide_inclusions: bool,
    #[arg(long, global = true, value_enum, default_value_t = Format::Pretty)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Pretty,
    Sexpr,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the type of a term.
    Check { file: Option<PathBuf> },
    /// Print the normal form of a term and the number of steps taken.
    Normalize { file: Option<PathBuf> },
    /// Print every reading of a syntax tree.
    Readings { file: Option<PathBuf> },
}

enum Failure {
    /// Bad input: exit code 1.
    User(String),
    /// A broken invariant or exhausted budget: exit code 2.
    Internal(String),
}

fn user(e: impl std::fmt::Display) -> Failure {
    Failure::User(e.to_string())
}

fn read_input(file: &Option<PathBuf>) -> Result<String, Failure> {
    match file {
        Some(p) if p != Path::new("-") => {
            fs::read_to_string(p).map_err(|e| Failure::User(format!("{}: {e}", p.display())))
        }
        _ => {
            let mut s = String::new();
            io::stdin().read_to_string(&mut s).map_err(user)?;
            Ok(s)
        }
    }
}

fn load_grammar(cli: &Cli) -> Result<Grammar, Failure> {
    let read = |p: &Option<PathBuf>, fallback: &str| -> Result<String, Failure> {
        match p {
            Some(p) => fs::read_to_string(p).map_err(|e| Failure::User(format!("{}: {e}", p.display()))),
            None => Ok(fallback.to_string()),
        }
    };
    let ontology = read(&cli.ontology, demo::ONTOLOGY)?;
    let lexicon = read(&cli.lexicon, demo::LEXICON)?;
    Grammar::from_sources([ontology.as_str(), lexicon.as_str()]).map_err(user)
}

fn run(cli: &Cli) -> Result<String, Failure> {
    let grammar = load_grammar(cli)?;
    let fuel = cli.fuel as usize;
    match &cli.command {
        Command::Check { file } => {
            let term = parse_term(&read_input(file)?, &grammar.signature, &Env::new()).map_err(user)?;
            let ty = type_of(&term, &grammar.signature, &Env::new()).map_err(user)?;
            Ok(format!("{ty}\n"))
        }
        Command::Normalize { file } => {
            let term = parse_term(&read_input(file)?, &grammar.signature, &Env::new()).map_err(user)?;
            match normalize_checked(&term, &grammar.signature, &Env::new(), fuel) {
                Ok(n) => Ok(format!("{}\nsteps: {}\n", n.term, n.steps)),
                Err(e @ ReduceError::IllTyped(_)) => Err(user(e)),
                Err(e @ ReduceError::FuelExhausted { .. }) => Err(Failure::Internal(e.to_string())),
            }
        }
        Command::Readings { file } => {
            let tree = SyntaxTree::parse(&read_input(file)?).map_err(user)?;
            let config = ComposeConfig { max_depth: cli.max_coercion_depth, fuel, execution: Execution::Parallel };
            let rs = readings(&tree, &grammar, &config).map_err(|e: ComposeError| {
                if e.is_internal() {
                    Failure::Internal(e.to_string())
                } else {
                    user(e)
                }
            })?;
            let opts = PrettyOptions { elide_inclusions: cli.elide_inclusions };
            Ok(rs
                .iter()
                .enumerate()
                .map(|(i, r)| match cli.format {
                    Format::Pretty => render_pretty(i + 1, r, &grammar, opts),
                    Format::Sexpr => render_sexpr(i + 1, r, &grammar),
                })
                .collect())
        }
    }
}

fn kind(k: CoercionKind) -> &'static str {
    match k {
        CoercionKind::Lexical => "lexical",
        CoercionKind::Inclusion => "inclusion",
    }
}

fn render_pretty(n: usize, r: &Reading, g: &Grammar, opts: PrettyOptions) -> String {
    let mut out = format!("reading {n}\n");
    match to_formula(r, &g.signature) {
        Ok(f) => {
            out += &format!("  formula: {}\n", pretty(&f, opts));
            for gen in generics(&f) {
                if let HolTerm::Generic { name, sort, restrictor: Some(res), .. } = gen {
                    out += &format!("  generic: {name} : {sort} with {}\n", pretty(res, opts));
                }
            }
        }
        Err(e) => out += &format!("  formula: unavailable ({e})\n"),
    }
    out += &format!("  term: {}\n", r.term);
    if r.trace.is_empty() {
        out += "  trace: none\n";
    }
    for u in &r.trace {
        out += &format!("  trace: {u}\n");
    }
    if r.instantiations.is_empty() {
        out += "  instantiations: none\n";
    }
    for i in &r.instantiations {
        out += &format!("  instantiation: {i}\n");
    }
    out
}

fn render_sexpr(n: usize, r: &Reading, g: &Grammar) -> String {
    let formula = match to_formula(r, &g.signature) {
        Ok(f) => formula_to_sexp(&f),
        Err(_) => "()".to_string(),
    };
    let trace: Vec<String> = r
        .trace
        .iter()
        .map(|u| {
            format!(
                "(coercion {} :word {} :at {} :site {} :kind {}{})",
                u.coercion,
                u.anchor_word,
                u.at,
                u.site,
                kind(u.kind),
                if u.exclusive { " :exclusive" } else { "" }
            )
        })
        .collect();
    let insts: Vec<String> =
        r.instantiations.iter().map(|i| format!("(inst {} {} {} {})", i.word, i.at, i.binder, i.ty)).collect();
    format!(
        "(reading {n}\n  :formula {formula}\n  :term {}\n  :trace ({})\n  :instantiations ({}))\n",
        r.term,
        trace.join(" "),
        insts.join(" ")
    )
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            // Usage errors are user errors; help and version are not errors.
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(&cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(Failure::User(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Internal(msg)) => {
            eprintln!("internal error: {msg}");
            ExitCode::from(2)
        }
    }
}
