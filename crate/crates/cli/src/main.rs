use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use sumset_cli::commands::{self, GlobalOpts, MethodArg, SearchMode, VerifyArgs};
use sumset_cli::report::{emit, Format};
use sumset_cli::strategies::Strategy;
use sumset_core::DEFAULT_COMBINATION_GUARD;

#[derive(Parser)]
#[command(
    name = "sumset",
    about = "Restricted sumsets in finite abelian groups: exact representation counts, \
             covering checks, character audits, and threshold tables",
    version
)]
struct Cli {
    /// Master seed for every randomized subcommand.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Output format (some commands have no csv form).
    #[arg(long, global = true, value_enum, default_value_t = Format::Plain)]
    format: Format,

    /// Refuse subset enumerations larger than this.
    #[arg(long, global = true, default_value_t = DEFAULT_COMBINATION_GUARD)]
    guard_combinations: u64,

    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Commands,
}

#[derive(Subcommand)]
enum Commands {
    /// List the partitions of h in colexicographic order with their signed
    /// coefficients.
    Partitions {
        #[arg(long)]
        h: u32,
    },
    /// Print the covering-density root for one h.
    Alpha {
        #[arg(long)]
        h: u32,
        /// Decimal digits to print (1..=17).
        #[arg(long, default_value_t = 12)]
        digits: usize,
    },
    /// Order bound and first admissible odd order for a given density.
    Thresholds {
        #[arg(long)]
        h: u32,
        #[arg(long)]
        alpha: f64,
    },
    /// Density roots and order bounds for h = 4..=11.
    Table {},
    /// Compute restricted sumset representation counts for a set read from a
    /// file.
    Sumset {
        /// Group as factor list, e.g. "101" or "3x9x5".
        #[arg(long)]
        group: String,
        /// Path to the set file (one element per line; # starts a comment).
        #[arg(long)]
        set: PathBuf,
        #[arg(long)]
        h: u32,
        #[arg(long, value_enum, default_value_t = MethodArg::Identity)]
        method: MethodArg,
        /// Also write the full count vector (JSON) to this path.
        #[arg(long)]
        emit_counts: Option<PathBuf>,
    },
    /// Character-sum audits (orthogonality, power identity, spectrum bound)
    /// for a set read from a file.
    AuditCharacters {
        #[arg(long)]
        group: String,
        #[arg(long)]
        set: PathBuf,
    },
    /// Randomized covering verification at density alpha in cyclic groups.
    Verify {
        #[arg(long)]
        h: u32,
        #[arg(long)]
        alpha: f64,
        /// Group order, or "auto" for the smallest admissible odd order.
        #[arg(long, default_value = "auto")]
        n: String,
        #[arg(long, default_value_t = 12)]
        trials: u32,
        /// Comma-separated subset of random,interval,coset-union.
        #[arg(long, value_enum, value_delimiter = ',',
              default_values_t = [Strategy::Random, Strategy::Interval, Strategy::CosetUnion])]
        strategies: Vec<Strategy>,
        /// Run even when n is even or below the order bound.
        #[arg(long)]
        force: bool,
    },
    /// Exhaustively check pair sums over all subsets of size n/2 + 2 in Z_n.
    ExhaustivePairs {
        #[arg(long)]
        n: u32,
        /// Resume/save progress at this path.
        #[arg(long)]
        checkpoint: Option<PathBuf>,
        /// Stop after this many subsets (writes a checkpoint if one is set).
        #[arg(long)]
        max_steps: Option<u64>,
    },
    /// Exhaustively check triple sums over all subsets of size n/2 + 1 in Z_n.
    ExhaustiveTriples {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        checkpoint: Option<PathBuf>,
        #[arg(long)]
        max_steps: Option<u64>,
    },
    /// Smallest size whose subsets all cover the group, by exhaustive search
    /// or greedy bracketing.
    Critical {
        #[arg(long)]
        group: String,
        #[arg(long)]
        h: u32,
        #[arg(long, value_enum, default_value_t = SearchMode::Exhaustive)]
        mode: SearchMode,
        /// Random attempts per size (greedy mode only).
        #[arg(long, default_value_t = 40)]
        trials: u32,
    },
    /// Time the covering decision per method over a list of odd orders.
    Bench {
        /// Comma-separated odd group orders.
        #[arg(long, value_delimiter = ',', required = true)]
        sizes: Vec<u64>,
        #[arg(long, default_value_t = 4)]
        h: u32,
        #[arg(long, default_value_t = 0.41)]
        alpha: f64,
        /// Timed repetitions per row (median is reported).
        #[arg(long, default_value_t = 3)]
        reps: u32,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let opts = GlobalOpts {
        seed: cli.seed,
        format: cli.format,
        guard: cli.guard_combinations,
    };
    let result = match &cli.command {
        Commands::Partitions { h } => commands::partitions_cmd(&opts, *h),
        Commands::Alpha { h, digits } => commands::alpha_cmd(&opts, *h, *digits),
        Commands::Thresholds { h, alpha } => commands::thresholds_cmd(&opts, *h, *alpha),
        Commands::Table {} => commands::table_cmd(&opts),
        Commands::Sumset {
            group,
            set,
            h,
            method,
            emit_counts,
        } => commands::sumset_cmd(&opts, group, set, *h, *method, emit_counts.as_ref()),
        Commands::AuditCharacters { group, set } => {
            commands::audit_characters_cmd(&opts, group, set)
        }
        Commands::Verify {
            h,
            alpha,
            n,
            trials,
            strategies,
            force,
        } => commands::verify_cmd(
            &opts,
            &VerifyArgs {
                h: *h,
                alpha: *alpha,
                n: n.clone(),
                trials: *trials,
                strategies: strategies.clone(),
                force: *force,
            },
        ),
        Commands::ExhaustivePairs {
            n,
            checkpoint,
            max_steps,
        } => commands::scan_cmd(&opts, 2, *n, checkpoint.as_ref(), *max_steps),
        Commands::ExhaustiveTriples {
            n,
            checkpoint,
            max_steps,
        } => commands::scan_cmd(&opts, 3, *n, checkpoint.as_ref(), *max_steps),
        Commands::Critical {
            group,
            h,
            mode,
            trials,
        } => commands::critical_cmd(&opts, group, *h, *mode, *trials),
        Commands::Bench {
            sizes,
            h,
            alpha,
            reps,
        } => commands::bench_cmd(&opts, sizes, *h, *alpha, *reps),
    };
    match result {
        Ok(r) => {
            if let Err(e) = emit(cli.out.as_ref(), &r.text) {
                eprintln!("error: {e:#}");
                return ExitCode::from(2);
            }
            if r.failed {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
