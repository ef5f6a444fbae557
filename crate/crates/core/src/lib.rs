//! Wordle guess selection by rank-one approximation.
//!
//! The candidate words are encoded as columns of a nonnegative matrix, the
//! dominant left singular vector of that matrix is taken as the idealized
//! "average" candidate, and the real candidate making the smallest angle with
//! it is guessed next. Around that core sit a hard-mode game engine, a batch
//! simulator, and the lexicons the game is played with.

pub mod embedding;
pub mod game;
pub mod simulator;
pub mod spectral;
pub mod strategy;
pub mod wordlist;

pub use embedding::{build_matrix, encode_frequency, encode_positional, Encoding, WordMatrix};
pub use game::{filter_candidates, is_consistent, score_guess, Color, Feedback, GuessHistory};
pub use simulator::{run_simulation, SimulationConfig, SimulationSummary};
pub use spectral::{
    dominant_left_singular_vector, rank_candidates, DominantVector, RankedCandidate,
};
pub use strategy::{play_game, SelectionPolicy, Strategy, Suggestion};
pub use wordlist::{load_lexicon, BundledLexicons, BundledList, Lexicon, Word};

/// Degrees rounded half-up to one decimal, as angles are shown to people.
pub fn display_degrees(radians: f64) -> f64 {
    (radians.to_degrees() * 10.0 + 0.5).floor() / 10.0
}
