use super::rational::Rational;
use crate::error::{Error, Result};
use num::{Signed, Zero};
use std::collections::BTreeMap;
use std::fmt;

/// Affine inequality `coeffs . x + constant >= 0`, strict when `strict`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearInequality {
    pub coeffs: Vec<Rational>,
    pub constant: Rational,
    pub strict: bool,
}

impl LinearInequality {
    pub fn geq(coeffs: Vec<Rational>, constant: Rational) -> Self {
        LinearInequality {
            coeffs,
            constant,
            strict: false,
        }
    }

    pub fn gt(coeffs: Vec<Rational>, constant: Rational) -> Self {
        LinearInequality {
            coeffs,
            constant,
            strict: true,
        }
    }

    fn scaled(&self, factor: &Rational) -> LinearInequality {
        // factor must be positive; positive scaling preserves the inequality.
        LinearInequality {
            coeffs: self.coeffs.iter().map(|c| c * factor).collect(),
            constant: &self.constant * factor,
            strict: self.strict,
        }
    }

    /// Constant row that can never hold: `constant >= 0` is false, or
    /// `constant > 0` with a zero constant.
    fn is_constant_contradiction(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
            && (self.constant.is_negative() || (self.strict && self.constant.is_zero()))
    }

    fn is_constant_truth(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero()) && !self.is_constant_contradiction()
    }
}

/// The contradictory constant inequality reached by elimination: the claim
/// `constant >= 0` (or `> 0`) with a constant that refutes it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Contradiction {
    pub constant: Rational,
    pub strict: bool,
}

impl fmt::Display for Contradiction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rel = if self.strict { ">" } else { ">=" };
        write!(f, "derived constant inequality {} {} 0 is false", self.constant, rel)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Feasibility {
    Feasible(Vec<Rational>),
    Infeasible(Contradiction),
}

impl Feasibility {
    pub fn is_feasible(&self) -> bool {
        matches!(self, Feasibility::Feasible(_))
    }

    pub fn point(&self) -> Option<&Vec<Rational>> {
        match self {
            Feasibility::Feasible(p) => Some(p),
            Feasibility::Infeasible(_) => None,
        }
    }
}

// Row budget for the elimination; generously above anything the decision
// procedures produce, purely a defense against pathological inputs.
const ROW_BUDGET: usize = 500_000;

/// Deduplicates rows that differ only by a positive scale, keeping the
/// tightest constant and the stricter flag on ties.
fn dedup(rows: Vec<LinearInequality>) -> Vec<LinearInequality> {
    let mut best: BTreeMap<Vec<Rational>, (Rational, bool)> = BTreeMap::new();
    let mut constants: Vec<LinearInequality> = Vec::new();
    for row in rows {
        if row.is_constant_truth() {
            continue;
        }
        let scale = row
            .coeffs
            .iter()
            .find(|c| !c.is_zero())
            .map(|c| c.abs().recip());
        let row = match scale {
            Some(s) => row.scaled(&s),
            None => {
                constants.push(row);
                continue;
            }
        };
        match best.get_mut(&row.coeffs) {
            Some((constant, strict)) => {
                if row.constant < *constant {
                    *constant = row.constant;
                    *strict = row.strict;
                } else if row.constant == *constant {
                    *strict = *strict || row.strict;
                }
            }
            None => {
                best.insert(row.coeffs, (row.constant, row.strict));
            }
        }
    }
    let mut out: Vec<LinearInequality> = best
        .into_iter()
        .map(|(coeffs, (constant, strict))| LinearInequality {
            coeffs,
            constant,
            strict,
        })
        .collect();
    out.extend(constants);
    out
}

/// Decides feasibility of a system of affine inequalities over the
/// rationals by Fourier-Motzkin elimination. Returns a feasible point, or
/// the contradictory constant inequality the elimination reached.
///
/// Deterministic: elimination order greedily minimizes the product of
/// lower- and upper-bound counts with lowest-index tie breaking, and the
/// reported point prefers zero coordinates where the bounds allow them.
pub fn rational_feasible(n_vars: usize, system: &[LinearInequality]) -> Result<Feasibility> {
    for (i, row) in system.iter().enumerate() {
        if row.coeffs.len() != n_vars {
            return Err(Error::Dimension(format!(
                "inequality {} has {} coefficients, expected {}",
                i,
                row.coeffs.len(),
                n_vars
            )));
        }
    }
    if let Some(row) = system.iter().find(|r| r.is_constant_contradiction()) {
        return Ok(Feasibility::Infeasible(Contradiction {
            constant: row.constant.clone(),
            strict: row.strict,
        }));
    }

    let mut rows = dedup(system.to_vec());
    let mut remaining: Vec<usize> = (0..n_vars).collect();
    // Per eliminated variable, the rows that mentioned it, for back
    // substitution.
    let mut steps: Vec<(usize, Vec<LinearInequality>)> = Vec::new();

    while !remaining.is_empty() {
        // Greedy choice: fewest pairwise combinations, lowest index on ties.
        let mut j = remaining[0];
        let mut best_cost = usize::MAX;
        for &cand in &remaining {
            let pos = rows.iter().filter(|r| r.coeffs[cand].is_positive()).count();
            let neg = rows.iter().filter(|r| r.coeffs[cand].is_negative()).count();
            let cost = pos * neg;
            if cost < best_cost {
                best_cost = cost;
                j = cand;
            }
        }
        remaining.retain(|&x| x != j);

        let (involved, mut kept): (Vec<_>, Vec<_>) =
            rows.into_iter().partition(|r| !r.coeffs[j].is_zero());
        let lowers: Vec<&LinearInequality> = involved
            .iter()
            .filter(|r| r.coeffs[j].is_positive())
            .collect();
        let uppers: Vec<&LinearInequality> = involved
            .iter()
            .filter(|r| r.coeffs[j].is_negative())
            .collect();
        for lo in &lowers {
            let lo_scaled = lo.scaled(&lo.coeffs[j].recip());
            for up in &uppers {
                let up_scaled = up.scaled(&(-up.coeffs[j].clone()).recip());
                let combined = LinearInequality {
                    coeffs: lo_scaled
                        .coeffs
                        .iter()
                        .zip(&up_scaled.coeffs)
                        .map(|(a, b)| a + b)
                        .collect(),
                    constant: &lo_scaled.constant + &up_scaled.constant,
                    strict: lo_scaled.strict || up_scaled.strict,
                };
                if combined.is_constant_contradiction() {
                    return Ok(Feasibility::Infeasible(Contradiction {
                        constant: combined.constant,
                        strict: combined.strict,
                    }));
                }
                kept.push(combined);
            }
        }
        rows = dedup(kept);
        if rows.len() > ROW_BUDGET {
            return Err(Error::Unsupported(
                "inequality elimination exceeded the internal row budget".into(),
            ));
        }
        steps.push((j, involved));
    }

    // All variables eliminated; contradictions were caught on the way, so
    // the system is feasible. Assign values in reverse elimination order.
    let mut values: Vec<Rational> = vec![Rational::zero(); n_vars];
    let mut assigned = vec![false; n_vars];
    for (j, involved) in steps.into_iter().rev() {
        let mut lower: Option<(Rational, bool)> = None;
        let mut upper: Option<(Rational, bool)> = None;
        for row in &involved {
            // Evaluate the row at the already assigned variables.
            let mut rest = row.constant.clone();
            for (k, c) in row.coeffs.iter().enumerate() {
                if k == j || c.is_zero() {
                    continue;
                }
                debug_assert!(assigned[k], "rows at this step mention later variables only");
                rest += c * &values[k];
            }
            let cj = &row.coeffs[j];
            let bound = -(&rest / cj);
            if cj.is_positive() {
                let tighter = match &lower {
                    Some((b, s)) => bound > *b || (bound == *b && row.strict && !s),
                    None => true,
                };
                if tighter {
                    lower = Some((bound, row.strict));
                }
            } else {
                let tighter = match &upper {
                    Some((b, s)) => bound < *b || (bound == *b && row.strict && !s),
                    None => true,
                };
                if tighter {
                    upper = Some((bound, row.strict));
                }
            }
        }
        values[j] = choose_value(&lower, &upper);
        assigned[j] = true;
    }
    Ok(Feasibility::Feasible(values))
}

/// Smallest-magnitude convenient value within the (consistent) bounds,
/// preferring zero.
fn choose_value(lower: &Option<(Rational, bool)>, upper: &Option<(Rational, bool)>) -> Rational {
    let zero = Rational::zero();
    let zero_ok = |b: &Option<(Rational, bool)>, is_lower: bool| match b {
        None => true,
        Some((v, strict)) => {
            if is_lower {
                if *strict {
                    zero > *v
                } else {
                    zero >= *v
                }
            } else if *strict {
                zero < *v
            } else {
                zero <= *v
            }
        }
    };
    if zero_ok(lower, true) && zero_ok(upper, false) {
        return zero;
    }
    match (lower, upper) {
        (Some((lo, ls)), Some((up, _))) => {
            if lo == up {
                // Consistency guarantees both bounds are closed here.
                lo.clone()
            } else if *ls {
                (lo + up) / Rational::from_integer(2.into())
            } else {
                lo.clone()
            }
        }
        (Some((lo, ls)), None) => {
            if *ls {
                lo + Rational::from_integer(1.into())
            } else {
                lo.clone()
            }
        }
        (None, Some((up, us))) => {
            if *us {
                up - Rational::from_integer(1.into())
            } else {
                up.clone()
            }
        }
        (None, None) => zero,
    }
}
