//! Exact conversions between moments and monotone, free and boolean cumulants
//! of non-commutative random variables.
//!
//! Every conversion is available along two independent routes:
//!
//! * the shuffle-algebra route, which treats moments as a character `Φ` on
//!   the double tensor algebra `T(T(A))` and cumulants as infinitesimal
//!   characters obtained from the shuffle exponential (monotone), the left
//!   half-shuffle exponential (free) and the right half-shuffle exponential
//!   (boolean), with the pre-Lie Magnus expansion linking the three;
//! * the partition route, which sums over non-crossing, interval and
//!   irreducible non-crossing partitions, weighted by inverse tree factorials
//!   where monotone cumulants are involved.
//!
//! All arithmetic is exact over arbitrary-precision rationals.
//!
//! ```
//! use shuffle_cumulants::prelude::*;
//!
//! // semicircle moments up to degree 4
//! let ab = Alphabet::standard(1).unwrap();
//! let m = CumulantTable::univariate(Kind::Moment, &[int(0), int(1), int(0), int(2)]).unwrap();
//! let k = moments_to_cumulants(&m, Kind::Free).unwrap();
//! assert_eq!(k.value(&ab.parse_word("aa").unwrap()).unwrap(), &int(1));
//! assert_eq!(k.value(&ab.parse_word("aaaa").unwrap()).unwrap(), &int(0));
//! ```

pub mod algebra;
pub mod cli;
pub mod error;
pub mod form;
pub mod hopf;
mod memo;
pub mod partitions;
pub mod prelie;
pub mod transforms;

pub use error::{Error, Result};

pub mod prelude {
    pub use crate::algebra::scalar::{frac, int};
    pub use crate::algebra::{Alphabet, BarWord, LinComb, PositionSet, Scalar, Word, WordTable};
    pub use crate::form::Form;
    pub use crate::hopf::Coalgebra;
    pub use crate::partitions::{Family, SetPartition, Weight};
    pub use crate::prelie::InfChar;
    pub use crate::transforms::{
        convert, cumulants_to_moments, moments_to_cumulants, CumulantTable, Kind,
    };
    pub use crate::{Error, Result};
}
