use std::fs;
use std::io::{self, Write};
use std::ops::RangeInclusive;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use mukai_walls::lattice::GenusContext;
use mukai_walls::report::{self, Format, GenusReport};
use mukai_walls::sweep::{verify_range, Execution};
use mukai_walls::Error;

#[derive(Parser, Debug)]
#[command(name = "mukai-walls", version, about = "Wall-crossing numerics for Bl_X P^g over a K3 surface of genus g")]
struct Cli {
    #[arg(long, global = true, allow_negative_numbers = true)]
    genus: Option<i64>,

    /// Genus range `a..b` (inclusive), for `verify`.
    #[arg(long, global = true)]
    range: Option<String>,

    #[arg(long, global = true, default_value = "md")]
    format: Format,

    /// Write the output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Print nothing on stdout; the exit code carries the result.
    #[arg(long, global = true)]
    quiet: bool,

    /// Force a single-threaded sweep.
    #[arg(long, global = true)]
    sequential: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug, Clone, Copy, PartialEq, Eq)]
enum Command {
    /// Wall table: i, (c,d), μ, k±, v_{c,d}, dim M(v_{c,d}).
    Table,
    /// Run the invariant suite over a genus range.
    Verify,
    /// Dual-pair involution for g ≡ 3 mod 4.
    Duality,
    /// Visitor verdicts and the block ledger of the Fano model.
    Sod,
    /// Ample chambers and the Fano test.
    Cones,
    /// Ψ and ϑ on the Mukai lattice, discriminant action.
    Lattice,
}

enum Failure {
    Usage(String),
    Invariant(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Invariant(_) | Error::NonIntegral(_) => Failure::Invariant(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

fn parse_range(s: &str) -> Result<RangeInclusive<i64>, Failure> {
    let bad = || Failure::Usage(format!("malformed range `{s}` (expected a..b)"));
    let (a, b) = s.split_once("..").ok_or_else(bad)?;
    let b = b.strip_prefix('=').unwrap_or(b);
    let a: i64 = a.trim().parse().map_err(|_| bad())?;
    let b: i64 = b.trim().parse().map_err(|_| bad())?;
    GenusContext::new(a)?;
    GenusContext::new(b)?;
    if a > b {
        return Err(Failure::Usage(format!("empty range {a}..{b}")));
    }
    Ok(a..=b)
}

fn require_genus(cli: &Cli) -> Result<i64, Failure> {
    if cli.range.is_some() {
        return Err(Failure::Usage("--range is only accepted by `verify`".into()));
    }
    let g = cli
        .genus
        .ok_or_else(|| Failure::Usage("--genus is required".into()))?;
    GenusContext::new(g)?;
    Ok(g)
}

/// Returns the rendered output and whether every check passed.
fn run(cli: &Cli) -> Result<(String, bool), Failure> {
    match cli.command {
        Command::Verify => {
            let genera = match (&cli.range, cli.genus) {
                (Some(r), None) => parse_range(r)?,
                (None, Some(g)) => {
                    GenusContext::new(g)?;
                    g..=g
                }
                (Some(_), Some(_)) => return Err(Failure::Usage("give either --genus or --range".into())),
                (None, None) => return Err(Failure::Usage("--range or --genus is required".into())),
            };
            let exec = if cli.sequential { Execution::Sequential } else { Execution::default() };
            let checks = verify_range(genera, exec);
            let passed = checks.iter().all(|c| c.passed());
            Ok((report::render_verify(&checks, cli.format)?, passed))
        }
        Command::Lattice => {
            let ctx = GenusContext::new(require_genus(cli)?)?;
            Ok((report::render_lattice(&ctx, cli.format)?, true))
        }
        cmd => {
            let g = require_genus(cli)?;
            if cmd == Command::Duality {
                GenusContext::new(g)?.require_residue(3).map_err(|e| {
                    Failure::Usage(format!("{e}; the wall duality exists only for g ≡ 3 mod 4"))
                })?;
            }
            let r = GenusReport::build(g)?;
            let out = match cmd {
                Command::Table => report::render_table(&r, cli.format)?,
                Command::Duality => report::render_duality(&r, cli.format)?,
                Command::Sod => report::render_sod(&r, cli.format)?,
                Command::Cones => report::render_cones(&r, cli.format)?,
                Command::Verify | Command::Lattice => unreachable!("handled above"),
            };
            Ok((out, true))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (text, passed) = match run(&cli) {
        Ok(v) => v,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
        Err(Failure::Invariant(msg)) => {
            eprintln!("invariant failure: {msg}");
            return ExitCode::from(1);
        }
    };
    if let Some(path) = &cli.out {
        if let Err(e) = fs::write(path, &text) {
            eprintln!("error: cannot write {}: {e}", path.display());
            return ExitCode::from(2);
        }
    } else if !cli.quiet {
        let mut stdout = io::stdout().lock();
        if stdout.write_all(text.as_bytes()).and_then(|_| stdout.flush()).is_err() {
            return ExitCode::from(2);
        }
    }
    if passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
