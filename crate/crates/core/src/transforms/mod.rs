//! Width-preserving program transformations.

mod deriv;
mod depth;
mod homog;
mod root;
mod stagger;
mod width2;

pub use deriv::{partial_derivative_y, W_D};
pub use depth::{depth_to_width, formula_program};
pub use homog::{homogeneous_component, homogeneous_components, homogeneous_partial_sums, homogeneous_prefix, W_H};
pub use root::{newton_series_root, root_circuit, root_circuit_with_budget, root_coefficients, RootProblem, DEFAULT_SIZE_BUDGET, W_R};
pub use stagger::{order_edges, staggerize, EdgeSchedule, LayerMultigraph};
pub use width2::sparse_to_width2;

use crate::coeffring::{Ring, Scalar};
use crate::error::{Error, Result};
use crate::ir::{Circuit, Slp};
use crate::rng::{random_point, SeedStream};

/// Fixed seed for the randomized degree checks, so transforms stay
/// deterministic functions of their input.
const CHECK_SEED: u64 = 0x5eed_00d5_1d23;

/// Largest syntactic degree for which the interpolation-based degree check
/// is attempted.
const CHECK_DEGREE_LIMIT: u64 = 2048;

/// Evaluates `t -> c(line(t))` at `0..=deg` and returns the interpolated
/// univariate coefficients, or `None` when the check is infeasible.
fn univariate_profile(c: &Slp, deg: u64, line: impl Fn(&Scalar) -> Vec<Scalar>) -> Result<Option<Vec<Scalar>>> {
    let ring = c.ring();
    if deg > CHECK_DEGREE_LIMIT || !ring.has_elements(deg + 1) {
        return Ok(None);
    }
    let ts = ring.distinct_points(deg + 1)?;
    let vals = ts.iter().map(|t| c.evaluate(&line(t))).collect::<Result<Vec<_>>>()?;
    Ok(Some(crate::coeffring::vandermonde_solve(&ts, &vals)?))
}

/// Checks that the total degree of `c` is at most `bound`: syntactically
/// when possible, otherwise by restricting to a random line through 0.
fn check_total_degree(c: &Slp, bound: u64) -> Result<()> {
    let syn = c.syntactic_degree();
    if syn <= bound {
        return Ok(());
    }
    let ring = c.ring();
    let a = random_point(ring, c.num_vars() as usize, &mut SeedStream::new(CHECK_SEED).rng(0));
    let profile = univariate_profile(c, syn, |t| a.iter().map(|ai| ai * t).collect())?;
    if let Some(coeffs) = profile {
        if coeffs.iter().skip(bound as usize + 1).any(|s| !s.is_zero()) {
            return Err(Error::DegreeBoundViolated { bound, message: "total degree exceeds the bound".into() });
        }
    }
    Ok(())
}

/// Same as [`check_total_degree`] for the degree in the last variable.
fn check_last_var_degree(c: &Slp, bound: u64) -> Result<()> {
    let y = c.num_vars();
    let syn = c.syntactic_degree_in(y);
    if syn <= bound {
        return Ok(());
    }
    let ring = c.ring();
    let a = random_point(ring, y as usize, &mut SeedStream::new(CHECK_SEED).rng(1));
    let profile = univariate_profile(c, syn, |t| {
        let mut p = a.clone();
        p[y as usize - 1] = t.clone();
        p
    })?;
    if let Some(coeffs) = profile {
        if coeffs.iter().skip(bound as usize + 1).any(|s| !s.is_zero()) {
            return Err(Error::DegreeBoundViolated { bound, message: format!("degree in x{y} exceeds the bound") });
        }
    }
    Ok(())
}

fn zero_program(c: &Slp) -> Slp {
    Slp::constant(c.ring(), c.mode(), c.num_vars(), c.ring().zero())
}

fn require_commutative(c: &Slp, what: &str) -> Result<()> {
    if c.mode() != crate::ir::Mode::Commutative {
        return Err(Error::ModeMismatch(format!("{what} needs a commutative program")));
    }
    Ok(())
}

/// `i (i-1) ... (i-j+1)` in the ring.
fn falling_factorial(ring: Ring, i: u32, j: u32) -> Scalar {
    (0..j).fold(ring.one(), |acc, t| &acc * &ring.from_u64((i - t) as u64))
}
