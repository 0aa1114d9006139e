use super::feasible::LinearInequality;
use super::matrix::{strictly_dominates_zero, IntMatrix};
use super::rational::{rat, Int, Rational};
use super::simplex::l1_minimal_point;
use super::{feasible_point, scale_to_integers};
use crate::error::{Error, Result};
use num::{BigRational, Signed, Zero};

/// Exactly one side of the alternative for an integer matrix M:
/// either some integer f with M f >= 0 and M f != 0, or a strictly
/// positive integer y with y^T M = 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AlternativeCertificate {
    Primal { f: Vec<Int>, image: Vec<Int> },
    Dual { y: Vec<Int> },
}

fn row_rational(m: &IntMatrix, i: usize) -> Vec<Rational> {
    (0..m.cols())
        .map(|j| BigRational::from_integer(m.get(i, j).clone()))
        .collect()
}

fn col_rational(m: &IntMatrix, j: usize) -> Vec<Rational> {
    (0..m.rows())
        .map(|i| BigRational::from_integer(m.get(i, j).clone()))
        .collect()
}

/// The system { M f >= 0, (M f)_j >= 1 } over the columns of M.
fn primal_system(m: &IntMatrix, j: usize) -> Vec<LinearInequality> {
    let mut sys: Vec<LinearInequality> = (0..m.rows())
        .map(|i| LinearInequality::geq(row_rational(m, i), Rational::zero()))
        .collect();
    sys.push(LinearInequality::geq(row_rational(m, j), rat(-1, 1)));
    sys
}

/// The system { y >= 1, y^T M = 0 } over the rows of M, equalities split
/// into opposite inequalities.
fn dual_system(m: &IntMatrix) -> Vec<LinearInequality> {
    let rows = m.rows();
    let mut sys = Vec::with_capacity(rows + 2 * m.cols());
    for i in 0..rows {
        let mut e = vec![Rational::zero(); rows];
        e[i] = rat(1, 1);
        sys.push(LinearInequality::geq(e, rat(-1, 1)));
    }
    for j in 0..m.cols() {
        let col = col_rational(m, j);
        let neg = col.iter().map(|v| -v).collect();
        sys.push(LinearInequality::geq(col, Rational::zero()));
        sys.push(LinearInequality::geq(neg, Rational::zero()));
    }
    sys
}

/// Decides the alternative for M and returns the witnessing certificate.
/// The primal side is scanned coordinate by coordinate in row order, so the
/// reported f makes the lowest possible image coordinate positive; the
/// returned f has minimal l1 norm for that coordinate and is scaled to a
/// primitive integer vector. Both certificates are re-verified in integer
/// arithmetic before being returned.
pub fn stiemke_alternative(m: &IntMatrix) -> Result<AlternativeCertificate> {
    let cols = m.cols();
    for j in 0..m.rows() {
        let sys = primal_system(m, j);
        if feasible_point(cols, &sys)?.is_none() {
            continue;
        }
        let point = l1_minimal_point(cols, &sys)?.ok_or_else(|| {
            Error::Inconsistency(format!(
                "coordinate {} was feasible but the l1 program found nothing",
                j
            ))
        })?;
        let f = scale_to_integers(&point);
        let image = m.mul_vec(&f)?;
        if !strictly_dominates_zero(&image) {
            return Err(Error::Inconsistency(
                "primal witness lost positivity under integer scaling".into(),
            ));
        }
        return Ok(AlternativeCertificate::Primal { f, image });
    }

    let point = feasible_point(m.rows(), &dual_system(m))?.ok_or_else(|| {
        Error::Inconsistency("neither side of the alternative is feasible".into(),)
    })?;
    let y = scale_to_integers(&point);
    if !y.iter().all(|v| v.is_positive()) {
        return Err(Error::Inconsistency(
            "dual witness lost strict positivity under integer scaling".into(),
        ));
    }
    for j in 0..cols {
        let s: Int = (0..m.rows()).map(|i| &y[i] * m.get(i, j)).sum();
        if !s.is_zero() {
            return Err(Error::Inconsistency(
                "dual witness does not annihilate the matrix".into(),
            ));
        }
    }
    Ok(AlternativeCertificate::Dual { y })
}
