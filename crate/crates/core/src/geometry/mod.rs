pub mod kahler;
pub mod potential;

pub use kahler::{invert_matrix, KahlerData, Part};
pub use potential::{k_normalize, Builtin, CoordinateChange, PotentialJet};
