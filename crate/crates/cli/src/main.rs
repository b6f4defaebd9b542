//! `relfree`: command-line front end for the `relfree_core` algorithms.

mod commands;
mod inputs;
mod verify;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use commands::{CommandInput, Output};

#[derive(Parser)]
#[command(
    name = "relfree",
    version,
    about = "Exact free-group computations and certificate verification"
)]
struct Cli {
    /// Output format. `dot` is available for `fold` and `basis` only.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Re-verify a JSON artifact previously emitted by this command.
    #[arg(long, global = true, value_name = "FILE")]
    verify_file: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Dot,
}

#[derive(Args, Clone, Default)]
pub struct GensArgs {
    /// Comma-separated generator words, e.g. "x0 x1^-2, x1 x2^-2".
    #[arg(long, allow_hyphen_values = true)]
    pub gens: Option<String>,
    /// File with one generator word per line; `#` starts a comment.
    #[arg(long, value_name = "FILE")]
    pub gens_file: Option<PathBuf>,
}

#[derive(Args, Clone, Default)]
pub struct RecipeArgs {
    /// 1, 2, 3 or custom.
    #[arg(long)]
    pub case: Option<String>,
    /// Iteration pitch of a custom recipe.
    #[arg(long)]
    pub k: Option<u32>,
    /// Coding arity of a custom recipe.
    #[arg(long)]
    pub h: Option<u32>,
    /// Coding word over z1..zh of a custom recipe.
    #[arg(long, allow_hyphen_values = true)]
    pub w: Option<String>,
    /// Leading exponent of a custom recipe: 1 or -1.
    #[arg(long, allow_hyphen_values = true)]
    pub sign: Option<String>,
}

#[derive(Subcommand)]
pub enum Command {
    /// Freely reduce a word.
    Reduce { word: Option<String> },
    /// Fold the subgroup graph of a generator list.
    Fold(GensArgs),
    /// Decide membership of a word in a subgroup.
    Member {
        #[command(flatten)]
        gens: GensArgs,
        #[arg(long, allow_hyphen_values = true)]
        word: Option<String>,
    },
    /// Extract a free basis of a subgroup.
    Basis(GensArgs),
    /// Express a word in the extracted basis of a subgroup.
    Express {
        #[command(flatten)]
        gens: GensArgs,
        #[arg(long, allow_hyphen_values = true)]
        word: Option<String>,
    },
    /// Support closure of seed words across several bases.
    SupportClosure {
        /// Comma-separated seed words.
        #[arg(long, allow_hyphen_values = true)]
        seeds: Option<String>,
        /// A basis as comma-separated words; repeat for several bases.
        #[arg(long = "basis", allow_hyphen_values = true)]
        bases: Vec<String>,
        /// A basis file, one word per line; repeat for several bases.
        #[arg(long = "basis-file", value_name = "FILE")]
        basis_files: Vec<PathBuf>,
    },
    /// Decide whether a word is part of a basis of the free group of a given rank.
    Primitive {
        word: Option<String>,
        #[arg(long)]
        rank: Option<u32>,
    },
    /// Solve a witness family triangularly and emit a basis certificate.
    TriangularSolve {
        #[command(flatten)]
        recipe: RecipeArgs,
        /// Truncation index n.
        #[arg(long)]
        n: Option<u32>,
    },
    /// Try to extend a subgroup basis to a basis of the ambient free group.
    FreeFactor {
        #[command(flatten)]
        gens: GensArgs,
        #[arg(long)]
        rank: Option<u32>,
    },
    /// Extend an automorphism of a free factor by the identity.
    ExtendAut {
        /// Map such as "x0 -> x1; x1 -> x0".
        #[arg(long, allow_hyphen_values = true)]
        map: Option<String>,
        /// Rank of the free factor.
        #[arg(long)]
        rank: Option<u32>,
        /// Optional inverse map used as a witness.
        #[arg(long, allow_hyphen_values = true)]
        inverse: Option<String>,
    },
    /// Exponent-sum vector of a word.
    Abelianize { word: Option<String> },
    /// Abelian (modulus 0) or exponent-n independence of a word list.
    Independent {
        #[command(flatten)]
        gens: GensArgs,
        #[arg(long, default_value_t = 0)]
        modulus: u64,
    },
    /// Class-2 nilpotent normal form.
    Nil2 {
        word: Option<String>,
        /// Defaults to one more than the largest generator index.
        #[arg(long)]
        rank: Option<u32>,
    },
    /// Image in the dyadic quotient, x_i -> 1/2^i.
    Dyadic { word: Option<String> },
    /// Verify the construction-principle hypotheses at a finite truncation.
    CpVerify {
        #[command(flatten)]
        recipe: RecipeArgs,
        /// Truncation N.
        #[arg(long, default_value_t = relfree_core::cp::DEFAULT_TRUNCATION)]
        n: u32,
        /// Divisibility depth; defaults to 2N.
        #[arg(long)]
        depth: Option<u64>,
    },
    /// Dyadic divisibility certificate.
    Divisibility {
        #[arg(long)]
        depth: Option<u64>,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Reduce { .. } => "reduce",
            Command::Fold(_) => "fold",
            Command::Member { .. } => "member",
            Command::Basis(_) => "basis",
            Command::Express { .. } => "express",
            Command::SupportClosure { .. } => "support-closure",
            Command::Primitive { .. } => "primitive",
            Command::TriangularSolve { .. } => "triangular-solve",
            Command::FreeFactor { .. } => "free-factor",
            Command::ExtendAut { .. } => "extend-aut",
            Command::Abelianize { .. } => "abelianize",
            Command::Independent { .. } => "independent",
            Command::Nil2 { .. } => "nil2",
            Command::Dyadic { .. } => "dyadic",
            Command::CpVerify { .. } => "cp-verify",
            Command::Divisibility { .. } => "divisibility",
        }
    }

    fn draws_graphs(&self) -> bool {
        matches!(self, Command::Fold(_) | Command::Basis(_))
    }
}

#[derive(Debug)]
pub enum CliError {
    /// Bad invocation: exit status 1.
    Usage(String),
    /// Invalid input data: exit status 2.
    Invalid(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Invalid(_) => 2,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Invalid(m) => m,
        }
    }
}

fn run(cli: Cli) -> Result<String, CliError> {
    let name = cli.command.name();
    if cli.format == Format::Dot && !cli.command.draws_graphs() {
        return Err(CliError::Usage(format!(
            "--format dot is only available for fold and basis, not {name}"
        )));
    }
    if let Some(path) = &cli.verify_file {
        if cli.format == Format::Dot {
            return Err(CliError::Usage("--verify-file reports as text or json".into()));
        }
        let outcome = verify::verify_file(name, path)?;
        return Ok(outcome.render(name, path, cli.format));
    }
    let input = CommandInput::from_command(cli.command)?;
    let output: Output = input.run()?;
    Ok(match cli.format {
        Format::Text => output.text,
        Format::Json => {
            let envelope = commands::envelope(name, &input, &output);
            let mut json = serde_json::to_string_pretty(&envelope).expect("JSON value");
            json.push('\n');
            json
        }
        Format::Dot => output.dot.expect("graph commands provide DOT"),
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = if err.use_stderr() { 1 } else { 0 };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(err) => {
            eprintln!("error: {}", err.message());
            ExitCode::from(err.exit_code())
        }
    }
}
