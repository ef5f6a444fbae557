use std::io::IsTerminal;
use std::net::SocketAddr;
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;
use std::sync::Arc;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use rank1_wordle::simulator::{game_rng, write_report, Report};
use rank1_wordle::strategy::{Rank1Lsi, SelectionPolicy, StrategyError};
use rank1_wordle::{
    build_matrix, display_degrees, dominant_left_singular_vector, filter_candidates, load_lexicon,
    rank_candidates, run_simulation, BundledList, Encoding, GuessHistory, Lexicon,
    SimulationConfig, Strategy, Word,
};
use rank1_wordle_service::{router, AppState, ServiceConfig};

/// Exit status when the history rules out every candidate.
const EXIT_EMPTY_POOL: u8 = 3;

#[derive(Parser)]
#[command(
    name = "rank1-wordle",
    version,
    about = "Rank-one approximation Wordle strategy"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Play every secret with one strategy and summarize the results.
    Simulate(SimulateArgs),
    /// Suggest the next guess for a game in progress.
    Suggest(SuggestArgs),
    /// Rank a word list by angle to its dominant direction.
    Rank(RankArgs),
    /// Run the HTTP assistant service.
    Serve(ServeArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum StrategyArg {
    Rank1Lsi,
    Random,
}

/// A bundled list name or a path to a newline-separated word file.
#[derive(Clone, Debug)]
enum WordSource {
    Bundled(BundledList),
    File(PathBuf),
}

impl FromStr for WordSource {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s.parse::<BundledList>() {
            Ok(list) => WordSource::Bundled(list),
            Err(_) => WordSource::File(PathBuf::from(s)),
        })
    }
}

impl WordSource {
    fn load(&self) -> Result<Lexicon> {
        match self {
            WordSource::Bundled(list) => list
                .load()
                .with_context(|| format!("loading bundled {} list", list.label())),
            WordSource::File(path) => {
                load_lexicon(path).with_context(|| format!("loading word list {}", path.display()))
            }
        }
    }
}

#[derive(clap::Args)]
struct SimulateArgs {
    #[arg(long, value_enum, default_value = "rank1-lsi")]
    strategy: StrategyArg,
    #[arg(long, default_value = "positional")]
    encoding: Encoding,
    /// Opening guess; chosen by the strategy when omitted.
    #[arg(long)]
    first_guess: Option<Word>,
    /// Candidate pool at the start of each game: guesses, solutions or a file.
    #[arg(long, default_value = "solutions")]
    pool: WordSource,
    /// Secrets to play: solutions or a file.
    #[arg(long, default_value = "solutions")]
    secrets: WordSource,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Worker threads; defaults to the number of CPUs.
    #[arg(long)]
    jobs: Option<usize>,
    #[arg(long, default_value_t = rank1_wordle::game::MAX_GUESSES)]
    max_guesses: usize,
    /// Write a JSON report, including every game, to this path.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(clap::Args)]
struct SuggestArgs {
    /// Guesses so far, e.g. "SLATE:GYBBB,CRONY:BBGYB".
    #[arg(long, default_value = "")]
    history: GuessHistory,
    #[arg(long, default_value = "positional")]
    encoding: Encoding,
    #[arg(long, default_value = "solutions")]
    pool: WordSource,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(clap::Args)]
struct RankArgs {
    /// Word list: guesses, solutions or a file.
    #[arg(long)]
    words: WordSource,
    #[arg(long, default_value = "positional")]
    encoding: Encoding,
    #[arg(long, default_value_t = 10)]
    top: usize,
}

#[derive(clap::Args)]
struct ServeArgs {
    #[arg(long, default_value = "127.0.0.1")]
    host: std::net::IpAddr,
    /// Port to listen on; 0 picks a free one.
    #[arg(long, default_value_t = 8080)]
    port: u16,
    /// Pool for sessions that do not name one.
    #[arg(long, default_value = "solutions")]
    pool: BundledList,
    /// Encoding for sessions that do not name one.
    #[arg(long, default_value = "positional")]
    encoding: Encoding,
    /// Directory of web UI assets to serve at /.
    #[arg(long)]
    static_dir: Option<PathBuf>,
}

fn main() -> ExitCode {
    tracing_subscriber::fmt()
        .with_env_filter(
            tracing_subscriber::EnvFilter::try_from_default_env()
                .unwrap_or_else(|_| tracing_subscriber::EnvFilter::new("info")),
        )
        .with_writer(std::io::stderr)
        .with_ansi(std::io::stderr().is_terminal())
        .init();
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Simulate(args) => simulate(args),
        Command::Suggest(args) => suggest(args),
        Command::Rank(args) => rank(args),
        Command::Serve(args) => serve(args),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn simulate(args: SimulateArgs) -> Result<ExitCode> {
    let strategy = match args.strategy {
        StrategyArg::Rank1Lsi => Strategy::rank1_lsi(args.encoding),
        StrategyArg::Random => Strategy::Random,
    };
    let pool = args.pool.load()?;
    let secrets = args.secrets.load()?;
    if let Some(word) = args.first_guess {
        if !pool.contains(&word) && !BundledList::Guesses.load()?.contains(&word) {
            bail!("{word} is not an accepted guess");
        }
    }
    let mut cfg = SimulationConfig::new(strategy, Arc::new(secrets), Arc::new(pool));
    cfg.first_guess = args.first_guess;
    cfg.seed = args.seed;
    cfg.max_guesses = args.max_guesses;
    if let Some(jobs) = args.jobs {
        cfg.parallelism = jobs;
    }
    let outcome = run_simulation(&cfg)?;
    if let Some(path) = &args.out {
        write_report(&Report::from_run(&cfg, &outcome, true), path)?;
        tracing::info!("report written to {}", path.display());
    }
    println!("{}", outcome.summary.headline());
    Ok(ExitCode::SUCCESS)
}

fn suggest(args: SuggestArgs) -> Result<ExitCode> {
    let pool = args.pool.load()?;
    let remaining = filter_candidates(pool.words(), &args.history);
    let ranking = match Rank1Lsi::new(args.encoding).rank_pool(&remaining) {
        Err(StrategyError::EmptyPool) => {
            eprintln!(
                "error: no word in the {} list fits this history",
                pool.label()
            );
            return Ok(ExitCode::from(EXIT_EMPTY_POOL));
        }
        other => other?,
    };
    // Same tie-break stream as the service uses for this history.
    let mut rng = game_rng(args.seed, args.history.len());
    let pick = rank1_wordle::strategy::choose(&ranking, &mut rng);
    println!(
        "{} {:.1}° remaining={}",
        pick.word,
        display_degrees(pick.theta.unwrap_or(0.0)),
        remaining.len()
    );
    Ok(ExitCode::SUCCESS)
}

fn rank(args: RankArgs) -> Result<ExitCode> {
    let words = args.words.load()?;
    let matrix = build_matrix(words.words(), args.encoding)?;
    let u = dominant_left_singular_vector(matrix.columns(), Default::default())?;
    for c in rank_candidates(&matrix, &u)?.iter().take(args.top) {
        println!("{} {:.1}°", c.word, display_degrees(c.theta));
    }
    Ok(ExitCode::SUCCESS)
}

fn serve(args: ServeArgs) -> Result<ExitCode> {
    let lexicons = rank1_wordle::BundledLexicons::load()?;
    let config = ServiceConfig {
        default_encoding: args.encoding,
        default_pool: args.pool,
        static_dir: args.static_dir,
        ..ServiceConfig::default()
    };
    let app = router(Arc::new(AppState::new(&lexicons, config)));
    let runtime = tokio::runtime::Runtime::new()?;
    runtime.block_on(async {
        let addr = SocketAddr::new(args.host, args.port);
        let listener = tokio::net::TcpListener::bind(addr)
            .await
            .with_context(|| format!("binding {addr}"))?;
        tracing::info!("listening on http://{}", listener.local_addr()?);
        rank1_wordle_service::serve(listener, app).await?;
        Ok(ExitCode::SUCCESS)
    })
}
