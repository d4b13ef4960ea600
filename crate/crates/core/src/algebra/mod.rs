pub mod index;
pub mod jet;
pub mod prec;
pub mod scalar;
pub mod star;
pub mod weyl;

pub use index::{BaseMono, Form, MultiIndex, MAX_DIM};
pub use jet::JetPoly;
pub use prec::EXACT;
pub use scalar::{HalfInt, Scalar};
pub use star::{star_exp, Wick};
pub use weyl::{Key, WeylForm};
