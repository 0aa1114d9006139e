//! Exact linear algebra over arbitrary-precision integers and rationals.
//!
//! Smith normal form with unimodular transforms, integer kernel and
//! cokernel presentations, rational feasibility of affine inequality
//! systems (Fourier-Motzkin by default, an exact simplex for large
//! non-strict systems and for l1-minimal points), and the Stiemke
//! alternative. No floating point anywhere.

mod feasible;
mod matrix;
mod rational;
mod simplex;
mod snf;
mod stiemke;

pub use feasible::{rational_feasible, Contradiction, Feasibility, LinearInequality};
pub use matrix::IntMatrix;
pub use rational::{format_rational, int, parse_rational, rat, Int, Rational};
pub use simplex::{l1_minimal_point, simplex_feasible, SimplexOutcome};
pub use snf::{cokernel_presentation, kernel_basis, snf, solve_integer, H0Presentation, SnfResult};
pub use stiemke::{stiemke_alternative, AlternativeCertificate};

/// Variable count above which feasibility dispatches to the simplex engine
/// instead of elimination. Elimination can square the row count per
/// eliminated variable; the simplex cost stays polynomial per pivot.
const ELIMINATION_VAR_LIMIT: usize = 12;

/// A feasible point of an affine system, or None. Dispatches on size:
/// Fourier-Motzkin elimination up to 12 variables or whenever a strict row
/// is present, exact simplex above that. Both engines are exact, so the
/// verdict does not depend on the route.
pub fn feasible_point(
    n_vars: usize,
    system: &[LinearInequality],
) -> crate::error::Result<Option<Vec<Rational>>> {
    if n_vars <= ELIMINATION_VAR_LIMIT || system.iter().any(|row| row.strict) {
        match rational_feasible(n_vars, system)? {
            Feasibility::Feasible(point) => Ok(Some(point)),
            Feasibility::Infeasible(_) => Ok(None),
        }
    } else {
        simplex_feasible(n_vars, system)
    }
}

/// Scales a rational vector to the integer vector with the same direction:
/// multiplies by the lcm of denominators, then divides by the gcd of the
/// results. Returns the zero vector unchanged.
pub fn scale_to_integers(xs: &[Rational]) -> Vec<Int> {
    use num::{Integer, One, Signed, Zero};
    let mut l: Int = Int::one();
    for x in xs {
        l = l.lcm(x.denom());
    }
    let mut out: Vec<Int> = xs.iter().map(|x| x.numer() * (&l / x.denom())).collect();
    let mut g = Int::zero();
    for v in &out {
        g = g.gcd(v);
    }
    if !g.is_zero() && g.abs() > Int::one() {
        for v in &mut out {
            *v /= &g;
        }
    }
    out
}
