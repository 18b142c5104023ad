//! Monotone set systems on the hypercube `Q_n` and its `p`-biased variant.
//!
//! Families are dense bit vectors over the `2^n` subsets of `[n]`; all
//! measures are exact rationals. On top of that sit the explicit
//! constructions of three upsets with many points in exactly one of them,
//! the block lift that carries a biased example to a uniform cube, the
//! linear-programming bound, weighted posets, and search.
//!
//! ```
//! use upcube::{constructions::q5_triple, rational::Bias, setcube::occupancy};
//!
//! let t = q5_triple();
//! let prof = occupancy(&t.x, &t.y, &t.z, &Bias::uniform()).unwrap();
//! assert_eq!(prof.counts, [5, 13, 7, 7]);
//! ```

pub mod bounds;
pub mod constructions;
pub mod error;
pub mod harness;
pub mod lift;
pub mod posets;
pub mod rational;
pub mod report;
pub mod search;
pub mod setcube;

pub use error::{Error, Result};
pub use rational::Bias;
pub use setcube::{Family, OccupancyProfile, Point};
