//! Circuit representations and the brute-force expansion oracle.

mod abp;
mod algebra;
mod formula;
mod layered;
mod monomial;
mod poly;
mod slp;
pub mod text;

pub use abp::{Abp, AbpEdge, LinearForm};
pub use algebra::{Algebra, DegreeAlgebra, Expansion, PointEval};
pub use formula::{Formula, FormulaArena, FormulaNode};
pub use layered::{CircuitBuilder, Gate, GateKind, LayeredCircuit, ValidationReport};
pub use monomial::{Mode, Monomial};
pub use poly::SparsePolynomial;
pub use slp::{reg, Instr, Leaf, Op, Operand, ProgramBuilder, Slp};

use crate::coeffring::{Ring, Scalar};
use crate::error::{Error, Result};

/// Resource limits for the expansion oracle.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Caps {
    pub max_degree: u32,
    pub max_terms: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps { max_degree: 64, max_terms: 1 << 20 }
    }
}

/// Anything that computes a polynomial from variables and constants with
/// binary `+` and `*`.
pub trait Circuit {
    fn ring(&self) -> Ring;
    fn mode(&self) -> Mode;
    fn num_vars(&self) -> u32;

    /// Runs the circuit in an arbitrary algebra.
    fn interpret<A: Algebra>(&self, alg: &A) -> Result<A::Value>;

    fn evaluate(&self, point: &[Scalar]) -> Result<Scalar> {
        let n = self.num_vars() as usize;
        if point.len() != n {
            return Err(Error::ArityMismatch { expected: n, got: point.len() });
        }
        let ring = self.ring();
        if let Some(bad) = point.iter().find(|s| s.ring() != ring) {
            return Err(Error::RingMismatch(ring.to_string(), bad.ring().to_string()));
        }
        self.interpret(&PointEval::new(point))
    }

    fn expand(&self, caps: Caps) -> Result<SparsePolynomial> {
        self.interpret(&Expansion::new(self.ring(), self.mode(), self.num_vars(), caps))
    }

    /// Upper bound on the total degree, read off the syntax.
    fn syntactic_degree(&self) -> u64 {
        self.interpret(&DegreeAlgebra::total()).unwrap_or(u64::MAX)
    }

    /// Upper bound on the degree in one variable.
    fn syntactic_degree_in(&self, var: u32) -> u64 {
        self.interpret(&DegreeAlgebra::in_var(var)).unwrap_or(u64::MAX)
    }
}
