//! Polynomial identity testing.

mod hard;
mod nw;
mod perm;
mod sz;

pub use hard::{nw_pit, HardFamily, NwPitOptions, DEFAULT_GRID_BUDGET};
pub use nw::{nw_design, NwDesign};
pub use perm::{verify_permanent, Backend, PermVerdict};
pub use sz::{schwartz_zippel, schwartz_zippel_with, SzOptions};

use crate::coeffring::Scalar;

/// Outcome of an identity test. A nonzero verdict carries a point where the
/// circuit does not vanish.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Zero,
    NonZero(Vec<Scalar>),
}

impl Verdict {
    pub fn is_zero(&self) -> bool {
        matches!(self, Verdict::Zero)
    }
}
