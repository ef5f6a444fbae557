//! Guess selection policies and the single-game loop.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, Mutex};

use rand::{Rng, RngCore};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::embedding::{build_matrix, Encoding, MatrixError};
use crate::game::{filter_candidates, score_guess, Feedback, GuessHistory, MAX_GUESSES};
use crate::spectral::{
    dominant_left_singular_vector, rank_candidates, PowerIteration, RankedCandidate, SpectralError,
};
use crate::wordlist::Word;

/// Angles closer than this (radians) to the best one count as a tie.
pub const TIE_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum StrategyError {
    #[error("candidate pool is empty")]
    EmptyPool,
    #[error("secret {0} is not in the starting pool")]
    UnsolvableSecret(Word),
    #[error("max_guesses must be at least 1")]
    NoGuessesAllowed,
    #[error(transparent)]
    Spectral(#[from] SpectralError),
}

impl From<MatrixError> for StrategyError {
    fn from(e: MatrixError) -> Self {
        match e {
            MatrixError::EmptyPool => StrategyError::EmptyPool,
            // Word matrices are built only from valid words.
            other => unreachable!("word matrix construction failed: {other}"),
        }
    }
}

/// The deterministic part of a suggestion: every word that is equally good.
#[derive(Debug, Clone, PartialEq)]
pub struct PoolRanking {
    pub pool_size: usize,
    /// Best-first ranking of the whole pool. Empty for policies without angles.
    pub ranked: Vec<RankedCandidate>,
    /// Words the policy cannot tell apart, in pool order. Never empty.
    pub tied: Vec<Word>,
    /// Angle shared by the tied words, if the policy measures one.
    pub theta: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Suggestion {
    pub word: Word,
    pub theta: Option<f64>,
    pub pool_size: usize,
    pub tied_count: usize,
}

/// A way of picking the next guess from the current candidate pool.
pub trait SelectionPolicy: Send + Sync {
    /// Ranks the pool. Must not depend on any randomness.
    fn rank_pool(&self, pool: &[Word]) -> Result<PoolRanking, StrategyError>;

    /// Ranks the pool and breaks ties uniformly with `rng`. The generator is
    /// only consulted when more than one word is tied.
    fn suggest(&self, pool: &[Word], rng: &mut dyn RngCore) -> Result<Suggestion, StrategyError> {
        Ok(choose(&self.rank_pool(pool)?, rng))
    }
}

pub fn choose(ranking: &PoolRanking, rng: &mut dyn RngCore) -> Suggestion {
    let word = match ranking.tied.len() {
        1 => ranking.tied[0],
        n => ranking.tied[rng.random_range(0..n)],
    };
    Suggestion {
        word,
        theta: ranking.theta,
        pool_size: ranking.pool_size,
        tied_count: ranking.tied.len(),
    }
}

/// Rank-one approximation with angle ranking: guess the candidate whose
/// encoding is closest in angle to the dominant left singular vector of the
/// candidate matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rank1Lsi {
    pub encoding: Encoding,
    pub power: PowerIteration,
}

impl Rank1Lsi {
    pub fn new(encoding: Encoding) -> Rank1Lsi {
        Rank1Lsi {
            encoding,
            power: PowerIteration::default(),
        }
    }
}

impl SelectionPolicy for Rank1Lsi {
    fn rank_pool(&self, pool: &[Word]) -> Result<PoolRanking, StrategyError> {
        let matrix = build_matrix(pool, self.encoding)?;
        let u = dominant_left_singular_vector(matrix.columns(), self.power)?;
        let ranked = rank_candidates(&matrix, &u)?;
        let best = ranked[0].theta;
        let mut tied: Vec<(usize, Word)> = ranked
            .iter()
            .take_while(|c| c.theta - best <= TIE_TOLERANCE)
            .map(|c| (c.column_index, c.word))
            .collect();
        tied.sort_by_key(|&(i, _)| i);
        Ok(PoolRanking {
            pool_size: pool.len(),
            tied: tied.into_iter().map(|(_, w)| w).collect(),
            theta: Some(best),
            ranked,
        })
    }
}

/// The uninformed control: any candidate, uniformly.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct RandomPick;

impl SelectionPolicy for RandomPick {
    fn rank_pool(&self, pool: &[Word]) -> Result<PoolRanking, StrategyError> {
        if pool.is_empty() {
            return Err(StrategyError::EmptyPool);
        }
        Ok(PoolRanking {
            pool_size: pool.len(),
            ranked: Vec::new(),
            tied: pool.to_vec(),
            theta: None,
        })
    }
}

/// The two shipped policies, as a value that can be parsed and reported.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Strategy {
    Rank1Lsi(Rank1Lsi),
    Random,
}

impl Strategy {
    pub fn rank1_lsi(encoding: Encoding) -> Strategy {
        Strategy::Rank1Lsi(Rank1Lsi::new(encoding))
    }

    pub fn name(&self) -> &'static str {
        match self {
            Strategy::Rank1Lsi(_) => "rank1-lsi",
            Strategy::Random => "random",
        }
    }

    pub fn encoding(&self) -> Option<Encoding> {
        match self {
            Strategy::Rank1Lsi(r) => Some(r.encoding),
            Strategy::Random => None,
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.encoding() {
            Some(enc) => write!(f, "{}/{}", self.name(), enc),
            None => f.write_str(self.name()),
        }
    }
}

/// Strategy kind without its parameters, as spelled on the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StrategyKind {
    Rank1Lsi,
    Random,
}

impl FromStr for StrategyKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "rank1-lsi" => Ok(StrategyKind::Rank1Lsi),
            "random" => Ok(StrategyKind::Random),
            other => Err(format!("unknown strategy {other:?}")),
        }
    }
}

impl SelectionPolicy for Strategy {
    fn rank_pool(&self, pool: &[Word]) -> Result<PoolRanking, StrategyError> {
        match self {
            Strategy::Rank1Lsi(r) => r.rank_pool(pool),
            Strategy::Random => RandomPick.rank_pool(pool),
        }
    }
}

/// Shares pool rankings between games that reach the same history.
///
/// With a fixed starting pool the candidate pool is a function of the
/// history alone, so the deterministic ranking can be reused; tie-breaking
/// still draws from each game's own generator.
#[derive(Debug, Default)]
pub struct RankingCache {
    entries: Mutex<HashMap<GuessHistory, Arc<PoolRanking>>>,
}

impl RankingCache {
    pub fn new() -> RankingCache {
        RankingCache::default()
    }

    pub fn len(&self) -> usize {
        self.entries.lock().expect("cache lock").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn get_or_rank(
        &self,
        history: &GuessHistory,
        pool: &[Word],
        policy: &dyn SelectionPolicy,
    ) -> Result<Arc<PoolRanking>, StrategyError> {
        if let Some(hit) = self.entries.lock().expect("cache lock").get(history) {
            return Ok(Arc::clone(hit));
        }
        let ranking = Arc::new(policy.rank_pool(pool)?);
        self.entries
            .lock()
            .expect("cache lock")
            .insert(history.clone(), Arc::clone(&ranking));
        Ok(ranking)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GameOptions {
    /// Forced opening guess. Need not be a candidate.
    pub first_guess: Option<Word>,
    pub max_guesses: usize,
}

impl Default for GameOptions {
    fn default() -> Self {
        GameOptions {
            first_guess: None,
            max_guesses: MAX_GUESSES,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GameRecord {
    pub secret: Word,
    pub guesses: Vec<Word>,
    pub feedbacks: Vec<Feedback>,
    pub solved: bool,
    pub num_guesses: usize,
    /// Turns on which the policy had to break a tie at random.
    pub ties_encountered: usize,
    /// Candidate pool size before each guess.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub pool_sizes: Vec<usize>,
    /// The secret was never in the starting pool; counted as a loss.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub unsolvable: bool,
}

impl GameRecord {
    pub fn unsolvable(secret: Word) -> GameRecord {
        GameRecord {
            secret,
            guesses: Vec::new(),
            feedbacks: Vec::new(),
            solved: false,
            num_guesses: 0,
            ties_encountered: 0,
            pool_sizes: Vec::new(),
            unsolvable: true,
        }
    }

    pub fn history(&self) -> GuessHistory {
        self.guesses
            .iter()
            .zip(&self.feedbacks)
            .map(|(&guess, &feedback)| crate::game::HistoryEntry { guess, feedback })
            .collect()
    }
}

/// Plays one hard-mode game against `secret`.
pub fn play_game(
    policy: &dyn SelectionPolicy,
    secret: Word,
    pool0: &[Word],
    opts: GameOptions,
    rng: &mut dyn RngCore,
) -> Result<GameRecord, StrategyError> {
    play_game_cached(policy, secret, pool0, opts, rng, None)
}

/// [`play_game`] with an optional ranking cache shared across games that
/// start from the same pool with the same policy.
pub fn play_game_cached(
    policy: &dyn SelectionPolicy,
    secret: Word,
    pool0: &[Word],
    opts: GameOptions,
    rng: &mut dyn RngCore,
    cache: Option<&RankingCache>,
) -> Result<GameRecord, StrategyError> {
    if opts.max_guesses == 0 {
        return Err(StrategyError::NoGuessesAllowed);
    }
    if !pool0.contains(&secret) {
        return Err(StrategyError::UnsolvableSecret(secret));
    }
    let mut pool = pool0.to_vec();
    let mut history = GuessHistory::new();
    let mut record = GameRecord {
        secret,
        guesses: Vec::new(),
        feedbacks: Vec::new(),
        solved: false,
        num_guesses: 0,
        ties_encountered: 0,
        pool_sizes: Vec::new(),
        unsolvable: false,
    };

    for turn in 0..opts.max_guesses {
        if pool.is_empty() {
            return Err(StrategyError::EmptyPool);
        }
        record.pool_sizes.push(pool.len());
        let guess = match opts.first_guess.filter(|_| turn == 0) {
            Some(first) => first,
            None => {
                let ranking = match cache {
                    Some(cache) => cache.get_or_rank(&history, &pool, policy)?,
                    None => Arc::new(policy.rank_pool(&pool)?),
                };
                let pick = choose(&ranking, rng);
                if pick.tied_count > 1 {
                    record.ties_encountered += 1;
                }
                pick.word
            }
        };
        let feedback = score_guess(&secret, &guess);
        history.push(guess, feedback);
        record.guesses.push(guess);
        record.feedbacks.push(feedback);
        record.num_guesses += 1;
        if feedback.is_solved() {
            record.solved = true;
            break;
        }
        let latest: GuessHistory = history.entries()[history.len() - 1..]
            .iter()
            .copied()
            .collect();
        pool = filter_candidates(&pool, &latest);
    }
    Ok(record)
}
