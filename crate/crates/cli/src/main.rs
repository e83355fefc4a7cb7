//! `incgames`: solve, query, generate and benchmark incomplete zero-sum games.

mod report;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use clap::{Args, Parser, Subcommand, ValueEnum};
use incgames::bench::{run_benchmark, BenchConfig, Method, UnspecifiedRule};
use incgames::format::{emit_game, parse_dimacs, parse_game, parse_set_cover, Instance};
use incgames::incomplete::{query_action, IncompleteMatrixGame, QueryMode, QueryOptions, QueryResult};
use incgames::matrix::{essential_set, quasi_strict_equilibrium, Action};
use incgames::mip::{mip_necessary_bp, mip_possible_bp, mip_possible_es, MipQueryOptions, NECESSARY_ES_REASON};
use incgames::reductions::{
    alternating_game, b_k, cyclone, random_incomplete_weak_tournament, sat_to_necessary_weak_tournament,
    sat_to_weak_tournament, setcover_to_necessary_game, setcover_to_possible_game, threesat_to_possible_tournament,
    threesat_to_tournament, AlternatingGameSpec, SatTournament, SetCoverGame,
};
use incgames::tournament::IncompleteTournament;
use incgames::{Error, Rational, Result};

use report::{QueryDoc, SolveDoc};

#[derive(Parser)]
#[command(name = "incgames", version, about = "Exact solvers for incompletely specified zero-sum games")]
struct Cli {
    /// Print JSON with rationals as numerator/denominator pairs.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Value, a quasi-strict equilibrium and the essential set of a complete game.
    Solve { file: PathBuf },
    /// Decide whether an action is a possible or necessary equilibrium action.
    Query(QueryArgs),
    /// Write a generated instance in the game file format.
    Gen {
        #[command(subcommand)]
        which: Gen,
        /// Output file; standard output when absent.
        #[arg(long, short, global = true)]
        out: Option<PathBuf>,
    },
    /// MIP vs brute force on random incomplete weak tournaments.
    Bench(BenchArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Possible,
    Necessary,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Brute,
    Mip,
}

#[derive(Args)]
struct QueryArgs {
    #[arg(long, value_enum)]
    mode: ModeArg,
    #[arg(long)]
    action: String,
    #[arg(long, value_enum, default_value = "brute")]
    method: MethodArg,
    /// Give up after this many seconds.
    #[arg(long)]
    timeout: Option<f64>,
    /// Enumerate even when the completion count exceeds the safety limit.
    #[arg(long)]
    force: bool,
    file: PathBuf,
}

#[derive(Subcommand)]
enum Gen {
    /// Alternating game with diagonal `d` (entries in {-1,0,1}) and scale `h`.
    Alternating {
        /// Comma separated diagonal, e.g. `1,-1,0`.
        #[arg(long, allow_hyphen_values = true)]
        d: String,
        /// Defaults to `(n-1)^2 n^3`.
        #[arg(long)]
        h: Option<Rational>,
    },
    /// Cyclone tournament on `n` (odd) vertices.
    Cyclone {
        #[arg(long)]
        n: usize,
    },
    /// Nested tournament `B_k`.
    Bk {
        #[arg(long)]
        k: usize,
    },
    /// Random incomplete weak tournament with `u` unspecified pairs.
    RandomWt {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        u: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Necessary-action game from a set-cover file: `r_star` is necessary iff no cover exists.
    SetcoverNec { file: PathBuf },
    /// Possible-action game from a set-cover file: `r_prime` is possible iff a cover exists.
    SetcoverPos { file: PathBuf },
    /// Weak tournament from DIMACS CNF: `d` is possible iff satisfiable.
    SatWt { file: PathBuf },
    /// Weak tournament from DIMACS CNF: `d'` is necessary iff unsatisfiable.
    SatWtNec { file: PathBuf },
    /// Tournament from DIMACS 3-CNF: `d` is necessary iff unsatisfiable.
    #[command(name = "3sat-t")]
    ThreeSatT { file: PathBuf },
    /// Tournament from DIMACS 3-CNF: `d` is possible iff satisfiable.
    #[command(name = "3sat-t-pos")]
    ThreeSatTPos { file: PathBuf },
}

#[derive(Clone, Copy, ValueEnum)]
enum RuleArg {
    Half,
    Full,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodsArg {
    Brute,
    Mip,
    Both,
}

#[derive(Args)]
struct BenchArgs {
    /// Sizes as `LO..HI` (inclusive) or a comma separated list.
    #[arg(long, default_value = "4..16")]
    sizes: String,
    #[arg(long, value_enum, default_value = "full")]
    rule: RuleArg,
    #[arg(long, default_value_t = 100)]
    trials: usize,
    /// Per-instance time limit in seconds.
    #[arg(long, default_value_t = 10.0)]
    timeout: f64,
    /// Drop a method after a size whose mean time exceeds this many seconds; defaults to the timeout.
    #[arg(long)]
    cutoff: Option<f64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value = "both")]
    methods: MethodsArg,
    /// Run the trials of each size in parallel.
    #[arg(long)]
    parallel: bool,
    /// Per-trial CSV; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Per-size summary CSV; a table on standard error when absent.
    #[arg(long)]
    summary: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

fn run(cli: Cli) -> Result<String> {
    match cli.command {
        Command::Solve { file } => solve(&read_game(&file)?, cli.json),
        Command::Query(args) => query(&args, cli.json),
        Command::Gen { which, out } => {
            let text = generate(which)?;
            match out {
                Some(path) => {
                    write_file(&path, &text)?;
                    Ok(String::new())
                }
                None => Ok(text),
            }
        }
        Command::Bench(args) => bench(&args),
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Input(format!("cannot read {}: {e}", path.display())))
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::Input(format!("cannot write {}: {e}", path.display())))
}

fn read_game(path: &Path) -> Result<Instance> {
    parse_game(&read(path)?).map_err(|e| match e {
        Error::Parse { line, column, message } => Error::Parse {
            line,
            column,
            message: format!("{message} (in {})", path.display()),
        },
        e => e,
    })
}

fn solve(inst: &Instance, json: bool) -> Result<String> {
    let g = inst.game();
    if !g.free_coordinates().is_empty() || g.has_intervals() {
        return Err(Error::Input(
            "solve needs a fully specified game; use `query` for games with unspecified entries".into(),
        ));
    }
    let game = g.complete(&Default::default())?;
    let eq = quasi_strict_equilibrium(&game);
    let es = essential_set(&game);
    let doc = SolveDoc::new(inst.kind().name(), &game, &eq, &es);
    Ok(if json { report::to_json(&doc) } else { doc.to_text() })
}

fn query(args: &QueryArgs, json: bool) -> Result<String> {
    let inst = read_game(&args.file)?;
    let g = inst.game();
    let action = g.action(&args.action)?;
    let mode = match args.mode {
        ModeArg::Possible => QueryMode::Possible,
        ModeArg::Necessary => QueryMode::Necessary,
    };
    let timeout = args.timeout.map(Duration::from_secs_f64);
    let deadline = timeout.map(|t| Instant::now() + t);
    let result = match args.method {
        MethodArg::Brute => brute(&g, action, mode, args.force, deadline)?,
        MethodArg::Mip => mip(&inst, action, mode, deadline)?,
    };
    let method = match args.method {
        MethodArg::Brute => "brute",
        MethodArg::Mip => "mip",
    };
    let doc = QueryDoc::new(&g, mode, method, &args.action, &result);
    Ok(if json { report::to_json(&doc) } else { doc.to_text() })
}

fn brute(
    g: &IncompleteMatrixGame,
    action: Action,
    mode: QueryMode,
    force: bool,
    deadline: Option<Instant>,
) -> Result<QueryResult> {
    let g = g.canonicalize_intervals()?;
    let opts = QueryOptions {
        force,
        deadline,
        ..Default::default()
    };
    query_action(&g, action, mode, &opts)
}

fn mip(inst: &Instance, action: Action, mode: QueryMode, deadline: Option<Instant>) -> Result<QueryResult> {
    let opts = MipQueryOptions {
        exact_optimum: false,
        deadline,
    };
    let k = match action {
        Action::Row(k) | Action::Column(k) => k,
    };
    let res = match (inst, mode) {
        (Instance::WeakTournament(w), QueryMode::Possible) => mip_possible_es(w, k, &opts)?,
        (Instance::WeakTournament(_), QueryMode::Necessary) => return Err(Error::Unsupported(NECESSARY_ES_REASON.into())),
        (Instance::Tournament(t), QueryMode::Possible) => mip_possible_bp(t, k, &opts)?,
        (Instance::Tournament(t), QueryMode::Necessary) => mip_necessary_bp(t, k, &opts)?,
        (Instance::Matrix(_), _) => {
            return Err(Error::Unsupported(format!(
                "the MIP models only weak tournament and tournament games, not {} games; use --method brute",
                inst.kind().name()
            )))
        }
    };
    let mut q = res.query;
    // report the quasi-strict equilibrium of the witness, as brute force does
    if let Some(w) = &q.witness {
        q.equilibrium = Some(quasi_strict_equilibrium(&inst.game().complete(w)?));
    }
    Ok(q)
}

fn with_notes(notes: &[String], inst: &Instance) -> String {
    let mut out = String::new();
    for n in notes {
        out.push_str(&format!("# {n}\n"));
    }
    out.push_str(&emit_game(inst));
    out
}

fn generate(which: Gen) -> Result<String> {
    match which {
        Gen::Alternating { d, h } => {
            let d: Vec<i8> = d
                .split(',')
                .map(|t| t.trim().parse().map_err(|_| Error::Input(format!("diagonal entry '{t}' is not an integer"))))
                .collect::<Result<_>>()?;
            let n = d.len() as i64;
            let h = h.unwrap_or_else(|| Rational::from((n - 1).pow(2) * n.pow(3)));
            let game = alternating_game(&AlternatingGameSpec::new(d, h)?)?;
            Ok(emit_game(&Instance::Matrix(IncompleteMatrixGame::from_game(&game))))
        }
        Gen::Cyclone { n } => Ok(emit_game(&Instance::Tournament(IncompleteTournament::from(cyclone(n)?)))),
        Gen::Bk { k } => Ok(emit_game(&Instance::Tournament(IncompleteTournament::from(b_k(k))))),
        Gen::RandomWt { n, u, seed } => {
            let w = random_incomplete_weak_tournament(n, u, seed)?;
            Ok(emit_game(&Instance::WeakTournament(w)))
        }
        Gen::SetcoverNec { file } => {
            let r = setcover_to_necessary_game(&parse_set_cover(&read(&file)?)?)?;
            Ok(setcover_notes("necessary", r))
        }
        Gen::SetcoverPos { file } => {
            let r = setcover_to_possible_game(&parse_set_cover(&read(&file)?)?)?;
            Ok(setcover_notes("possible", r))
        }
        Gen::SatWt { file } => {
            let r = sat_to_weak_tournament(&parse_dimacs(&read(&file)?)?);
            let notes = vec![format!("query: possible {}", r.tournament.label(r.target()))];
            Ok(with_notes(&notes, &Instance::WeakTournament(r.tournament)))
        }
        Gen::SatWtNec { file } => {
            let r = sat_to_necessary_weak_tournament(&parse_dimacs(&read(&file)?)?);
            let notes = vec![format!("query: necessary {} (brute force only)", r.tournament.label(r.target()))];
            Ok(with_notes(&notes, &Instance::WeakTournament(r.tournament)))
        }
        Gen::ThreeSatT { file } => Ok(threesat_notes("necessary", threesat_to_tournament(&parse_dimacs(&read(&file)?)?)?)),
        Gen::ThreeSatTPos { file } => {
            Ok(threesat_notes("possible", threesat_to_possible_tournament(&parse_dimacs(&read(&file)?)?)?))
        }
    }
}

fn setcover_notes(mode: &str, r: SetCoverGame) -> String {
    let mut notes = vec![format!("query: {mode} {}", r.game.label(r.action))];
    notes.extend(r.normalization);
    with_notes(&notes, &Instance::Matrix(r.game))
}

fn threesat_notes(mode: &str, r: SatTournament) -> String {
    let mut notes = vec![format!("query: {mode} {}", r.tournament.label(r.d))];
    notes.extend(r.normalization);
    with_notes(&notes, &Instance::Tournament(r.tournament))
}

fn bench(args: &BenchArgs) -> Result<String> {
    let sizes = parse_sizes(&args.sizes)?;
    let positive = |what: &str, s: f64| {
        if s.is_finite() && s > 0.0 {
            Ok(Duration::from_secs_f64(s))
        } else {
            Err(Error::Input(format!("{what} must be a positive number of seconds")))
        }
    };
    let cfg = BenchConfig {
        sizes,
        rule: match args.rule {
            RuleArg::Half => UnspecifiedRule::Half,
            RuleArg::Full => UnspecifiedRule::Full,
        },
        trials: args.trials,
        timeout: positive("timeout", args.timeout)?,
        cutoff: args.cutoff.map(|c| positive("cutoff", c)).transpose()?,
        base_seed: args.seed,
        methods: match args.methods {
            MethodsArg::Brute => vec![Method::Brute],
            MethodsArg::Mip => vec![Method::Mip],
            MethodsArg::Both => vec![Method::Brute, Method::Mip],
        },
        parallel: args.parallel,
    };
    let report = run_benchmark(&cfg)?;
    match &args.summary {
        Some(path) => write_file(path, &report.summary_csv()?)?,
        None => eprint!("{}", report::summary_table(&report)),
    }
    let csv = report.records_csv()?;
    match &args.out {
        Some(path) => {
            write_file(path, &csv)?;
            Ok(String::new())
        }
        None => Ok(csv),
    }
}

fn parse_sizes(s: &str) -> Result<Vec<usize>> {
    let bad = || Error::Input(format!("sizes '{s}' must look like 4..12 or 4,6,8"));
    if let Some((lo, hi)) = s.split_once("..") {
        let lo: usize = lo.trim().parse().map_err(|_| bad())?;
        let hi: usize = hi.trim().trim_start_matches('=').parse().map_err(|_| bad())?;
        if lo > hi {
            return Err(bad());
        }
        return Ok((lo..=hi).collect());
    }
    s.split(',').map(|t| t.trim().parse().map_err(|_| bad())).collect()
}
