//! Carrier data: words, bar-words, exact scalars, sparse linear combinations
//! and word-indexed value tables.

mod lincomb;
pub mod scalar;
mod table;
mod word;

pub use lincomb::LinComb;
pub use scalar::{parse_scalar, Scalar};
pub use table::WordTable;
pub use word::{
    bar_concat, bar_words_of_degree, bar_words_up_to, words_of_degree, words_up_to, Alphabet,
    BarWord, Letter, PositionSet, Word,
};
