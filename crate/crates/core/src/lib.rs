//! Group testing with points and axis-parallel boxes.
//!
//! Items are points in `Z^d` and tests are closed boxes; a test is positive
//! when it contains a defective point. The crate builds the standard
//! families of such configurations, checks separability and disjunctness
//! exactly, simulates and decodes test outcomes, and provides the pattern
//! and covering tools used to bound how many points a family of boxes can
//! tell apart.

pub mod bitset;
pub mod combinatorics;
pub mod constructions;
pub mod error;
pub mod geometry;
pub mod io;
pub mod patterns;
pub mod setsystem;
pub mod witness;

pub use bitset::BitSet;
pub use error::{Error, Result};
pub use geometry::{AxisBox, Claims, Config, Point};
pub use patterns::{Covering, PatternKind, Scheme};
pub use setsystem::{Outcome, SetSystem, SubsetMode, VerifyOptions};
pub use witness::{Verdict, Witness};
