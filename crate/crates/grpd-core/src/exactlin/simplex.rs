use super::feasible::LinearInequality;
use super::rational::Rational;
use crate::error::{Error, Result};
use num::{One, Signed, Zero};

/// Outcome of the low-level solver on a standard-form program.
#[derive(Clone, Debug)]
pub enum SimplexOutcome {
    Optimal { x: Vec<Rational>, value: Rational },
    Infeasible,
    Unbounded,
}

/// One standard-form constraint: coefficients and right-hand side.
type StandardRow = (Vec<Rational>, Rational);

/// Two-phase primal simplex with Bland's rule, exact rational pivots.
/// Minimizes c.z subject to rows a.z = b with z >= 0. Deterministic.
fn solve_standard(n: usize, c: &[Rational], rows: &[StandardRow]) -> SimplexOutcome {
    let m = rows.len();
    let width = n + m + 1; // artificials, then rhs
    let mut t: Vec<Vec<Rational>> = Vec::with_capacity(m);
    for (i, (coeffs, rhs)) in rows.iter().enumerate() {
        let mut row = vec![Rational::zero(); width];
        let flip = rhs.is_negative();
        for (j, v) in coeffs.iter().enumerate() {
            row[j] = if flip { -v.clone() } else { v.clone() };
        }
        row[n + i] = Rational::one();
        row[width - 1] = if flip { -rhs.clone() } else { rhs.clone() };
        t.push(row);
    }
    let mut basis: Vec<usize> = (n..n + m).collect();

    // Phase 1: minimize the sum of artificials.
    let mut cost = vec![Rational::zero(); width];
    for c in &mut cost[n..n + m] {
        *c = Rational::one();
    }
    for row in &t {
        for j in 0..width {
            cost[j] -= &row[j];
        }
    }
    if !pivot_loop(&mut t, &mut basis, &mut cost, width - 1) {
        // Phase 1 of a program with artificial start is never unbounded.
        return SimplexOutcome::Infeasible;
    }
    if cost[width - 1].is_negative() {
        // Minimum of the artificial sum is -cost[rhs] > 0: no feasible point.
        return SimplexOutcome::Infeasible;
    }

    // Drive leftover artificials out of the basis or drop redundant rows.
    let mut r = 0;
    while r < t.len() {
        if basis[r] >= n {
            let enter = (0..n).find(|&j| !t[r][j].is_zero());
            match enter {
                Some(j) => pivot(&mut t, &mut basis, r, j),
                None => {
                    t.remove(r);
                    basis.remove(r);
                    continue;
                }
            }
        }
        r += 1;
    }

    // Phase 2: recompute reduced costs for the real objective; artificials
    // are excluded from entering.
    let mut cost2 = vec![Rational::zero(); width];
    cost2[..n].clone_from_slice(&c[..n]);
    for (r, &b) in basis.iter().enumerate() {
        if b < n && !c[b].is_zero() {
            let factor = c[b].clone();
            for j in 0..width {
                let v = &cost2[j] - &factor * &t[r][j];
                cost2[j] = v;
            }
        }
    }
    if !pivot_loop(&mut t, &mut basis, &mut cost2, n) {
        return SimplexOutcome::Unbounded;
    }

    let mut x = vec![Rational::zero(); n];
    for (r, &b) in basis.iter().enumerate() {
        if b < n {
            x[b] = t[r][width - 1].clone();
        }
    }
    let value = -cost2[width - 1].clone();
    SimplexOutcome::Optimal { x, value }
}

/// Bland pivoting until optimal (true) or unbounded (false). Columns at
/// index >= allowed_cols never enter.
fn pivot_loop(
    t: &mut [Vec<Rational>],
    basis: &mut [usize],
    cost: &mut [Rational],
    allowed_cols: usize,
) -> bool {
    let width = cost.len();
    loop {
        let enter = (0..allowed_cols).find(|&j| cost[j].is_negative());
        let Some(j) = enter else {
            return true;
        };
        // Ratio test over positive column entries; Bland tie break on the
        // smallest basic variable index.
        let mut leave: Option<(usize, Rational)> = None;
        for (r, row) in t.iter().enumerate() {
            if !row[j].is_positive() {
                continue;
            }
            let ratio = &row[width - 1] / &row[j];
            let better = match &leave {
                Some((lr, lratio)) => {
                    ratio < *lratio || (ratio == *lratio && basis[r] < basis[*lr])
                }
                None => true,
            };
            if better {
                leave = Some((r, ratio));
            }
        }
        let Some((r, _)) = leave else {
            return false;
        };
        pivot_with_cost(t, basis, cost, r, j);
    }
}

fn pivot(t: &mut [Vec<Rational>], basis: &mut [usize], r: usize, j: usize) {
    let p = t[r][j].clone();
    for v in t[r].iter_mut() {
        *v /= &p;
    }
    for i in 0..t.len() {
        if i == r || t[i][j].is_zero() {
            continue;
        }
        let f = t[i][j].clone();
        let (row_i, row_r) = if i < r {
            let (a, b) = t.split_at_mut(r);
            (&mut a[i], &b[0])
        } else {
            let (a, b) = t.split_at_mut(i);
            (&mut b[0], &a[r])
        };
        for (v, p) in row_i.iter_mut().zip(row_r.iter()) {
            *v = &*v - &f * p;
        }
    }
    basis[r] = j;
}

fn pivot_with_cost(
    t: &mut [Vec<Rational>],
    basis: &mut [usize],
    cost: &mut [Rational],
    r: usize,
    j: usize,
) {
    pivot(t, basis, r, j);
    if !cost[j].is_zero() {
        let f = cost[j].clone();
        for (c, v) in cost.iter_mut().zip(t[r].iter()) {
            *c = &*c - &f * v;
        }
    }
}

/// Builds the standard-form rows for a system over free variables:
/// x = p - m with p, m >= 0 and one surplus variable per inequality.
/// Returns (total variables, rows). Strict inequalities are not
/// representable in a closed program and are rejected.
fn standard_rows(n_vars: usize, system: &[LinearInequality]) -> Result<(usize, Vec<StandardRow>)> {
    for (i, row) in system.iter().enumerate() {
        if row.coeffs.len() != n_vars {
            return Err(Error::Dimension(format!(
                "inequality {} has {} coefficients, expected {}",
                i,
                row.coeffs.len(),
                n_vars
            )));
        }
        if row.strict {
            return Err(Error::Unsupported(
                "the simplex engine handles non-strict systems only".into(),
            ));
        }
    }
    let total = 2 * n_vars + system.len();
    let rows = system
        .iter()
        .enumerate()
        .map(|(i, ineq)| {
            let mut coeffs = vec![Rational::zero(); total];
            for (k, c) in ineq.coeffs.iter().enumerate() {
                coeffs[k] = c.clone();
                coeffs[n_vars + k] = -c.clone();
            }
            coeffs[2 * n_vars + i] = -Rational::one();
            (coeffs, -ineq.constant.clone())
        })
        .collect();
    Ok((total, rows))
}

fn recover_point(n_vars: usize, z: &[Rational]) -> Vec<Rational> {
    (0..n_vars).map(|k| &z[k] - &z[n_vars + k]).collect()
}

/// Feasibility of a non-strict affine system by exact simplex (phase 1
/// only). Same verdicts as `rational_feasible`; intended for systems too
/// large for elimination. Returns a feasible point when one exists.
pub fn simplex_feasible(
    n_vars: usize,
    system: &[LinearInequality],
) -> Result<Option<Vec<Rational>>> {
    let (total, rows) = standard_rows(n_vars, system)?;
    let c = vec![Rational::zero(); total];
    match solve_standard(total, &c, &rows) {
        SimplexOutcome::Optimal { x, .. } => Ok(Some(recover_point(n_vars, &x))),
        SimplexOutcome::Infeasible => Ok(None),
        SimplexOutcome::Unbounded => Err(Error::Inconsistency(
            "zero objective cannot be unbounded".into(),
        )),
    }
}

/// A point of minimal l1 norm in a non-strict affine system, or None when
/// the system is infeasible. The split-variable objective sum |p| + |m| is
/// exact: at the optimum at most one of each pair is nonzero.
pub fn l1_minimal_point(
    n_vars: usize,
    system: &[LinearInequality],
) -> Result<Option<Vec<Rational>>> {
    let (total, rows) = standard_rows(n_vars, system)?;
    let mut c = vec![Rational::zero(); total];
    for v in &mut c[..2 * n_vars] {
        *v = Rational::one();
    }
    match solve_standard(total, &c, &rows) {
        SimplexOutcome::Optimal { x, .. } => Ok(Some(recover_point(n_vars, &x))),
        SimplexOutcome::Infeasible => Ok(None),
        SimplexOutcome::Unbounded => Err(Error::Inconsistency(
            "an l1 objective is bounded below by zero".into(),
        )),
    }
}
