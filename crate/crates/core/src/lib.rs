//! Combinatorics of list decoding for random linear codes.
//!
//! * [`gfq`]: small finite fields and packed vectors over them.
//! * [`hamming`]: q-ary entropy, exact ball volumes, uniform ball sampling.
//! * [`codes`]: random linear codes, spans, exact and Monte Carlo list-size checkers.
//! * [`chains`]: constructive q-ary Sauer–Shelah shattering and increasing chains,
//!   with brute-force certifiers.
//! * [`experiments`]: seeded Monte Carlo harnesses and their exact small-case oracles.

pub mod chains;
pub mod codes;
pub mod error;
pub mod experiments;
pub mod gfq;
pub mod hamming;
pub mod par;
pub mod rng;

pub use codes::{check_ld_exact, check_ld_montecarlo, random_code, span_set, CheckMode, Code, LdVerdict};
pub use error::{Error, Result};
pub use gfq::{linear_combination, Field, FieldTable, VecQ};
pub use hamming::{ball_volume, entropy_q, sample_ball_uniform, BallSampler, BallSpec, Fraction};
pub use rng::SeedStream;
