//! In-memory game sessions.

use std::num::NonZeroUsize;
use std::sync::{Arc, Mutex};
use std::time::{Duration, Instant};

use chrono::{DateTime, Utc};
use lru::LruCache;
use serde::Serialize;
use uuid::Uuid;

use rank1_wordle::game::{filter_candidates, is_consistent, Feedback, GuessHistory, MAX_GUESSES};
use rank1_wordle::simulator::game_rng;
use rank1_wordle::strategy::{choose, Rank1Lsi, SelectionPolicy, StrategyError};
use rank1_wordle::{display_degrees, Encoding, Word};

use crate::error::ApiError;

/// How many ranked candidates a suggestion lists.
pub const TOP_K: usize = 10;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Candidate {
    pub word: Word,
    pub theta_degrees: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuggestionView {
    pub word: Word,
    pub theta_degrees: f64,
    pub remaining_count: usize,
    pub tied_count: usize,
    pub top: Vec<Candidate>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct FeedbackOutcome {
    pub remaining_count: usize,
    pub solved: bool,
    pub empty_pool: bool,
}

#[derive(Debug)]
pub struct Session {
    pub id: Uuid,
    pub created_at: DateTime<Utc>,
    created: Instant,
    pub encoding: Encoding,
    pub pool_label: String,
    pub seed: u64,
    initial: Arc<[Word]>,
    history: GuessHistory,
    remaining: Vec<Word>,
    suggestion: Option<SuggestionView>,
}

impl Session {
    pub fn new(encoding: Encoding, pool_label: String, pool: Arc<[Word]>, seed: u64) -> Session {
        Session {
            id: Uuid::new_v4(),
            created_at: Utc::now(),
            created: Instant::now(),
            encoding,
            pool_label,
            seed,
            remaining: pool.to_vec(),
            initial: pool,
            history: GuessHistory::new(),
            suggestion: None,
        }
    }

    pub fn history(&self) -> &GuessHistory {
        &self.history
    }

    pub fn remaining(&self) -> &[Word] {
        &self.remaining
    }

    pub fn initial_pool(&self) -> &[Word] {
        &self.initial
    }

    pub fn is_solved(&self) -> bool {
        self.history.is_solved()
    }

    pub fn record(&mut self, guess: Word, feedback: Feedback) -> Result<FeedbackOutcome, ApiError> {
        if self.is_solved() {
            return Err(ApiError::Conflict("session is already solved".into()));
        }
        if self.history.len() >= MAX_GUESSES {
            return Err(ApiError::Conflict(format!(
                "session already holds {MAX_GUESSES} guesses"
            )));
        }
        self.history.push(guess, feedback);
        self.remaining
            .retain(|w| is_consistent(w, &guess, &feedback));
        self.suggestion = None;
        Ok(self.outcome())
    }

    pub fn outcome(&self) -> FeedbackOutcome {
        FeedbackOutcome {
            remaining_count: self.remaining.len(),
            solved: self.is_solved(),
            empty_pool: self.remaining.is_empty(),
        }
    }

    /// Next guess for the current history. The tie-break stream depends only
    /// on the seed and the number of recorded guesses, so replaying a history
    /// reproduces the suggestion.
    pub fn suggestion(&mut self) -> Result<SuggestionView, ApiError> {
        if self.is_solved() {
            return Err(ApiError::Conflict("session is already solved".into()));
        }
        if let Some(cached) = &self.suggestion {
            return Ok(cached.clone());
        }
        let policy = Rank1Lsi::new(self.encoding);
        let ranking = policy.rank_pool(&self.remaining).map_err(|e| match e {
            StrategyError::EmptyPool => ApiError::EmptyPool,
            other => ApiError::Internal(other.to_string()),
        })?;
        let mut rng = game_rng(self.seed, self.history.len());
        let pick = choose(&ranking, &mut rng);
        let view = SuggestionView {
            word: pick.word,
            theta_degrees: display_degrees(pick.theta.unwrap_or(0.0)),
            remaining_count: self.remaining.len(),
            tied_count: pick.tied_count,
            top: ranking
                .ranked
                .iter()
                .take(TOP_K)
                .map(|c| Candidate {
                    word: c.word,
                    theta_degrees: display_degrees(c.theta),
                })
                .collect(),
        };
        self.suggestion = Some(view.clone());
        Ok(view)
    }

    /// Recomputes the pool from scratch; used to check the running filter.
    pub fn refiltered(&self) -> Vec<Word> {
        filter_candidates(&self.initial, &self.history)
    }

    fn expired(&self, ttl: Duration) -> bool {
        self.created.elapsed() > ttl
    }
}

pub type SharedSession = Arc<tokio::sync::Mutex<Session>>;

/// Bounded, expiring session table. Each session sits behind its own lock so
/// requests for different sessions never wait on each other.
pub struct SessionStore {
    sessions: Mutex<LruCache<Uuid, SharedSession>>,
    ttl: Duration,
}

impl SessionStore {
    pub fn new(capacity: usize, ttl: Duration) -> SessionStore {
        let capacity = NonZeroUsize::new(capacity).unwrap_or(NonZeroUsize::MIN);
        SessionStore {
            sessions: Mutex::new(LruCache::new(capacity)),
            ttl,
        }
    }

    pub fn insert(&self, session: Session) -> SharedSession {
        let id = session.id;
        let shared = Arc::new(tokio::sync::Mutex::new(session));
        let mut table = self.sessions.lock().expect("session table poisoned");
        self.purge(&mut table);
        table.put(id, Arc::clone(&shared));
        shared
    }

    pub fn get(&self, id: &Uuid) -> Option<SharedSession> {
        let mut table = self.sessions.lock().expect("session table poisoned");
        let shared = Arc::clone(table.get(id)?);
        // A session whose lock is held is in use and therefore not stale.
        let expired = shared
            .try_lock()
            .map(|s| s.expired(self.ttl))
            .unwrap_or(false);
        if expired {
            table.pop(id);
            return None;
        }
        Some(shared)
    }

    pub fn remove(&self, id: &Uuid) -> bool {
        let mut table = self.sessions.lock().expect("session table poisoned");
        table.pop(id).is_some()
    }

    pub fn len(&self) -> usize {
        self.sessions.lock().expect("session table poisoned").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn purge(&self, table: &mut LruCache<Uuid, SharedSession>) {
        let stale: Vec<Uuid> = table
            .iter()
            .filter(|(_, s)| s.try_lock().map(|s| s.expired(self.ttl)).unwrap_or(false))
            .map(|(id, _)| *id)
            .collect();
        for id in stale {
            table.pop(&id);
        }
    }
}
