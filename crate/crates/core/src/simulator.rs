//! Batch play over a list of secrets, summary statistics, and JSON reports.

use std::path::Path;
use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::embedding::Encoding;
use crate::game::{Feedback, MAX_GUESSES};
use crate::spectral::RankedCandidate;
use crate::strategy::{
    play_game_cached, GameOptions, GameRecord, Rank1Lsi, RankingCache, SelectionPolicy, Strategy,
    StrategyError,
};
use crate::wordlist::{Lexicon, Word};

#[derive(Debug, Error)]
pub enum SimulationError {
    #[error("no secrets to play")]
    NoSecrets,
    #[error("max_guesses must be at least 1")]
    NoGuessesAllowed,
    #[error("parallelism must be at least 1")]
    NoWorkers,
    #[error("cannot start worker pool")]
    ThreadPool(#[from] rayon::ThreadPoolBuildError),
    #[error("game against {secret} failed")]
    Game {
        secret: Word,
        #[source]
        source: StrategyError,
    },
    #[error("cannot access report {path}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed report")]
    Json(#[from] serde_json::Error),
}

#[derive(Debug, Clone)]
pub struct SimulationConfig {
    pub strategy: Strategy,
    pub first_guess: Option<Word>,
    pub secrets: Arc<Lexicon>,
    pub pool: Arc<Lexicon>,
    pub max_guesses: usize,
    pub seed: u64,
    pub parallelism: usize,
}

impl SimulationConfig {
    pub fn new(strategy: Strategy, secrets: Arc<Lexicon>, pool: Arc<Lexicon>) -> Self {
        SimulationConfig {
            strategy,
            first_guess: None,
            secrets,
            pool,
            max_guesses: MAX_GUESSES,
            seed: 0,
            parallelism: rayon::current_num_threads(),
        }
    }
}

/// Generator for game `index` of a run seeded with `seed`.
///
/// Each game gets its own ChaCha stream, so a game's draws do not depend on
/// which worker ran it or in what order.
pub fn game_rng(seed: u64, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    rng
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationSummary {
    pub games: usize,
    pub wins: usize,
    pub win_rate: f64,
    /// Mean guess count over won games only; 0 when nothing was won.
    pub avg_guesses_wins: f64,
    /// Wins by guess count `1..=max_guesses`, then losses.
    pub histogram: Vec<usize>,
}

impl SimulationSummary {
    pub fn from_records(records: &[GameRecord], max_guesses: usize) -> SimulationSummary {
        let mut histogram = vec![0; max_guesses + 1];
        let mut guess_total = 0;
        for r in records {
            if r.solved && (1..=max_guesses).contains(&r.num_guesses) {
                histogram[r.num_guesses - 1] += 1;
                guess_total += r.num_guesses;
            } else {
                histogram[max_guesses] += 1;
            }
        }
        let games = records.len();
        let wins = games - histogram[max_guesses];
        SimulationSummary {
            games,
            wins,
            win_rate: if games == 0 {
                0.0
            } else {
                wins as f64 / games as f64
            },
            avg_guesses_wins: if wins == 0 {
                0.0
            } else {
                guess_total as f64 / wins as f64
            },
            histogram,
        }
    }

    pub fn losses(&self) -> usize {
        self.games - self.wins
    }

    /// `avg=<x> win=<y>%`
    pub fn headline(&self) -> String {
        format!(
            "avg={:.2} win={:.1}%",
            self.avg_guesses_wins,
            self.win_rate * 100.0
        )
    }
}

#[derive(Debug, Clone)]
pub struct SimulationOutcome {
    pub summary: SimulationSummary,
    pub records: Vec<GameRecord>,
}

pub fn run_simulation(cfg: &SimulationConfig) -> Result<SimulationOutcome, SimulationError> {
    if cfg.secrets.is_empty() {
        return Err(SimulationError::NoSecrets);
    }
    if cfg.max_guesses == 0 {
        return Err(SimulationError::NoGuessesAllowed);
    }
    if cfg.parallelism == 0 {
        return Err(SimulationError::NoWorkers);
    }
    let opts = GameOptions {
        first_guess: cfg.first_guess,
        max_guesses: cfg.max_guesses,
    };
    let cache = RankingCache::new();
    let pool = cfg.pool.words();
    let play = |(index, secret): (usize, &Word)| {
        let mut rng = game_rng(cfg.seed, index);
        match play_game_cached(&cfg.strategy, *secret, pool, opts, &mut rng, Some(&cache)) {
            Ok(record) => Ok(record),
            Err(StrategyError::UnsolvableSecret(_)) => {
                tracing::debug!(%secret, "secret missing from pool; scored as a loss");
                Ok(GameRecord::unsolvable(*secret))
            }
            Err(source) => Err(SimulationError::Game {
                secret: *secret,
                source,
            }),
        }
    };
    let workers = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.parallelism)
        .build()?;
    let records = workers.install(|| {
        cfg.secrets
            .words()
            .par_iter()
            .enumerate()
            .map(play)
            .collect::<Result<Vec<_>, _>>()
    })?;
    Ok(SimulationOutcome {
        summary: SimulationSummary::from_records(&records, cfg.max_guesses),
        records,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportConfig {
    pub strategy: String,
    pub encoding: Option<Encoding>,
    pub first_guess: Option<Word>,
    pub pool_label: String,
    pub secrets_label: String,
    pub seed: u64,
    pub max_guesses: usize,
}

impl From<&SimulationConfig> for ReportConfig {
    fn from(cfg: &SimulationConfig) -> Self {
        ReportConfig {
            strategy: cfg.strategy.name().to_string(),
            encoding: cfg.strategy.encoding(),
            first_guess: cfg.first_guess,
            pool_label: cfg.pool.label().to_string(),
            secrets_label: cfg.secrets.label().to_string(),
            seed: cfg.seed,
            max_guesses: cfg.max_guesses,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportGame {
    pub secret: Word,
    pub guesses: Vec<Word>,
    pub feedbacks: Vec<Feedback>,
    pub solved: bool,
    pub ties_encountered: usize,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub unsolvable: bool,
}

impl From<&GameRecord> for ReportGame {
    fn from(r: &GameRecord) -> Self {
        ReportGame {
            secret: r.secret,
            guesses: r.guesses.clone(),
            feedbacks: r.feedbacks.clone(),
            solved: r.solved,
            ties_encountered: r.ties_encountered,
            unsolvable: r.unsolvable,
        }
    }
}

impl ReportGame {
    pub fn to_record(&self) -> GameRecord {
        GameRecord {
            secret: self.secret,
            guesses: self.guesses.clone(),
            feedbacks: self.feedbacks.clone(),
            solved: self.solved,
            num_guesses: self.guesses.len(),
            ties_encountered: self.ties_encountered,
            pool_sizes: Vec::new(),
            unsolvable: self.unsolvable,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub config: ReportConfig,
    pub summary: SimulationSummary,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub games: Option<Vec<ReportGame>>,
}

impl Report {
    pub fn new(
        config: ReportConfig,
        summary: SimulationSummary,
        records: Option<&[GameRecord]>,
    ) -> Self {
        Report {
            config,
            summary,
            games: records.map(|rs| rs.iter().map(ReportGame::from).collect()),
        }
    }

    pub fn from_run(cfg: &SimulationConfig, outcome: &SimulationOutcome, with_games: bool) -> Self {
        Report::new(
            cfg.into(),
            outcome.summary.clone(),
            with_games.then_some(outcome.records.as_slice()),
        )
    }
}

pub fn write_report(report: &Report, path: impl AsRef<Path>) -> Result<(), SimulationError> {
    let path = path.as_ref();
    let json = serde_json::to_string_pretty(report)?;
    std::fs::write(path, json + "\n").map_err(|source| SimulationError::Io {
        path: path.display().to_string(),
        source,
    })
}

pub fn read_report(path: impl AsRef<Path>) -> Result<Report, SimulationError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| SimulationError::Io {
        path: path.display().to_string(),
        source,
    })?;
    Ok(serde_json::from_str(&text)?)
}

/// Best opening words for one lexicon under one encoding.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StartingWords {
    pub lexicon: String,
    pub encoding: Encoding,
    pub top: Vec<RankedCandidate>,
    /// Highest-ranked word with five distinct letters.
    pub top_distinct: Option<RankedCandidate>,
}

/// Ranks `lexicon` as a single pool and keeps the `k` best words.
pub fn rank_lexicon(
    lexicon: &Lexicon,
    encoding: Encoding,
    k: usize,
) -> Result<StartingWords, StrategyError> {
    let ranking = Rank1Lsi::new(encoding).rank_pool(lexicon.words())?;
    Ok(StartingWords {
        lexicon: lexicon.label().to_string(),
        encoding,
        top_distinct: ranking
            .ranked
            .iter()
            .find(|c| c.word.has_distinct_letters())
            .copied(),
        top: ranking.ranked.into_iter().take(k).collect(),
    })
}

/// The four (lexicon, encoding) opening-word rankings.
pub fn derive_starting_words(
    guesses: &Lexicon,
    solutions: &Lexicon,
    k: usize,
) -> Result<Vec<StartingWords>, StrategyError> {
    let mut out = Vec::with_capacity(4);
    for lexicon in [guesses, solutions] {
        for encoding in [Encoding::Frequency, Encoding::Positional] {
            out.push(rank_lexicon(lexicon, encoding, k)?);
        }
    }
    Ok(out)
}
