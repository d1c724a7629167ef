use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

mod commands;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SideArg {
    Left,
    Right,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Domination {
    Pw,
    Pwpw,
    W,
}

/// Finite pomonoids and S-posets: tensor products, flatness conditions,
/// axiom schemes and enumeration.
#[derive(Debug, Parser)]
#[command(name = "sposet", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Largest S-poset size for enumeration, audit, search and the EP bound.
    #[arg(long, global = true, default_value_t = 3)]
    pub max_size: usize,

    /// Largest total skeleton length for bounded flatness checks.
    #[arg(long, global = true, default_value_t = 4)]
    pub skeleton_bound: usize,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,

    /// Seed for sampled runs.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Worker threads (default: one per core).
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Validate a pomonoid or S-poset document.
    Validate { file: PathBuf },

    /// Tensor a right S-poset with a left one. A pomonoid document stands
    /// for the pomonoid acting on itself.
    Tensor {
        #[arg(long)]
        left: PathBuf,
        #[arg(long)]
        right: PathBuf,
        /// Emit a tossing for `a,b <= a',b'`. Entries are element names, or
        /// indices when no element has that name.
        #[arg(long, num_args = 2, value_names = ["A,B", "A',B'"])]
        certify: Option<Vec<String>>,
        /// Certify equality with a double tossing instead.
        #[arg(long, requires = "certify")]
        double: bool,
    },

    /// Check a tossing certificate against its two factors.
    Verify {
        #[arg(long)]
        left: PathBuf,
        #[arg(long)]
        right: PathBuf,
        #[arg(long)]
        certificate: PathBuf,
    },

    /// Decide an interpolation condition.
    Check {
        #[arg(long)]
        condition: String,
        #[arg(long)]
        sposet: PathBuf,
    },

    /// Decide an ideal flatness variant (PWF, WF, PWPF, WPF), or check
    /// flatness (F) or po-flatness (PF) up to the skeleton bound.
    Flat {
        #[arg(long)]
        variant: String,
        #[arg(long)]
        sposet: PathBuf,
        /// Overrides --skeleton-bound.
        #[arg(long)]
        bound: Option<usize>,
    },

    /// Recognise free and projective S-posets.
    Classify {
        #[arg(long)]
        sposet: PathBuf,
    },

    /// Emit an axiom scheme, or evaluate one on an S-poset.
    Axioms {
        #[arg(long)]
        monoid: PathBuf,
        /// PiS, EP, Pw, PWP, PWPw or W.
        #[arg(long)]
        class: String,
        #[arg(long, conflicts_with = "eval")]
        emit: bool,
        /// S-poset to evaluate the sentences on.
        #[arg(long)]
        eval: Option<PathBuf>,
        /// Evaluate these sentences instead of the emitted ones.
        #[arg(long, requires = "eval")]
        sentences: Option<PathBuf>,
    },

    /// The sets R<=(s,t) and r<=(s,t), their generators and a dominating set.
    Relations {
        #[arg(long)]
        monoid: PathBuf,
        #[arg(long)]
        s: String,
        #[arg(long)]
        t: Option<String>,
        #[arg(long, value_enum)]
        dominating: Option<Domination>,
    },

    /// Check one e-good factorisation, or the covering condition on all
    /// idempotents when no factorisation is given.
    Egood {
        #[arg(long)]
        monoid: PathBuf,
        #[arg(long, requires_all = ["x", "y", "e"])]
        a: Option<String>,
        #[arg(long, requires = "a")]
        x: Option<String>,
        #[arg(long, requires = "a")]
        y: Option<String>,
        #[arg(long, requires = "a")]
        e: Option<String>,
    },

    /// Enumerate pomonoids of an order, or S-posets of a size over a pomonoid.
    Enumerate {
        #[arg(long, conflicts_with = "monoid")]
        pomonoids: Option<usize>,
        #[arg(long, requires = "size")]
        monoid: Option<PathBuf>,
        #[arg(long)]
        size: Option<usize>,
        #[arg(long, value_enum, default_value_t = SideArg::Left)]
        side: SideArg,
    },

    /// Check the implications between classes on every enumerated left
    /// S-poset up to --max-size.
    Audit {
        #[arg(long)]
        monoid: PathBuf,
        /// Audit a seeded random sample of this many instances.
        #[arg(long)]
        sample: Option<usize>,
    },

    /// Find the first enumerated S-poset in the weaker class but not the stronger.
    Search {
        #[arg(long)]
        monoid: PathBuf,
        #[arg(long)]
        stronger: String,
        #[arg(long)]
        weaker: String,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Some(jobs) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match commands::run(&cli) {
        Ok(out) => {
            print!("{}", out.text);
            ExitCode::from(out.code)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
