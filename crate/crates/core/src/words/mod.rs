//! Words over integer alphabets, word systems (factorial languages truncated
//! at a horizon) and their sets of excluded words.
//!
//! A word system `X` is a family of levels `X₀ = {Λ}, X₁, …, X_N` where every
//! word of `Xₙ` has length `n` and every subword of a member is again a
//! member. Such a system is generated by a set `E` of excluded words
//! ([`from_exclusions`]); the unique reduced generating set is its
//! [`antidictionary`].

mod exclusion;
mod system;
mod word;

pub use exclusion::{antidictionary, from_exclusions, reduce_exclusions, ExclusionSet};
pub use system::{check_word_system, Level, Violation, WordSystem};
pub use word::{concat, is_subword, lex_compare, Letter, Word};

pub(crate) use system::extension_pool;
