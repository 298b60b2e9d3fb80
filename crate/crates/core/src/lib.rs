//! Exact arithmetic for the reverse Collatz tree.
//!
//! The tree hangs every integer off the one it reaches under the shortcut map
//! `f(d) = (3d + 1) / 2` for odd `d`, `d / 2` for even `d`. Its building blocks:
//!
//! * [`decomposition`]: odd values as `2^n 3^(N-n) h - 1`, even parents as
//!   `3^N h - 1`, and the mod-6 classes of odd parents.
//! * [`subtrees`]: the `N` odd children of an even parent and the even
//!   children `p 2^b` of an odd parent.
//! * [`trajectories`]: main-child chains stacked above an odd integer.
//! * [`cycles`]: exhaustive search for cycles where a child is its own
//!   grandparent, and a forward scan for any cycle.
//! * [`tree`]: breadth-first reverse construction from 1, audits, DOT and
//!   JSON output.
//!
//! All arithmetic is exact. Kernels are generic over [`Natural`]: `u128` reports
//! overflow as [`Error::Overflow`], `BigUint` never overflows.

pub mod cycles;
pub mod decomposition;
pub mod dynamics;
pub mod error;
pub mod natural;
pub mod subtrees;
pub mod trajectories;
pub mod tree;

pub use dynamics::{iterate, odd_ascent, step, trajectory, MapVariant, Trajectory};
pub use error::{Error, Result};
pub use natural::Natural;
