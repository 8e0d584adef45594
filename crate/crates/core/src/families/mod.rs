//! Explicit polynomial and circuit families.

mod balanced;
mod p_family;
mod palindrome;
mod permanent;
mod projection;

pub use balanced::{build_e_abp, build_e_width2, BenOrParams};
pub use p_family::{build_p, p_formula, FamilyParams, PBuild, PForm};
pub use palindrome::{build_palindrome, palindrome_program};
pub use permanent::{build_permanent_sparse, permanent_var};
pub use projection::{apply_projection, project_to_formula, Projection};
