//! Three independent deciders for AF embeddability of the groupoid algebra
//! of an admissible graph, all reducing to one exact question about the
//! transfer matrix A: embeddable exactly when no integer vector f has
//! (A^n - I) f nonnegative and nonzero. The deciders never share their
//! search logic; `decide` runs all of them and insists they agree.

use crate::error::{Error, Result};
use crate::exactlin::{
    feasible_point, int, l1_minimal_point, scale_to_integers, stiemke_alternative,
    AlternativeCertificate, Int, IntMatrix, LinearInequality, Rational,
};
use crate::graphmodel::{
    self, adjacency_transfer, cycle_vertices, cycles_with_entrance, dominates_zero,
    shortest_cycle_through, DirectedGraph, TransferMatrix,
};
use num::{Signed, Zero};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Lp,
    Stiemke,
    Cycle,
    Compression,
}

impl Method {
    pub fn name(&self) -> &'static str {
        match self {
            Method::Lp => "lp",
            Method::Stiemke => "stiemke",
            Method::Cycle => "cycle",
            Method::Compression => "compression",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Certificate {
    /// Obstruction to embeddability: h = (A^n - I) f is nonnegative and
    /// nonzero.
    Witness { f: Vec<Int>, h: Vec<Int> },
    /// Certifies embeddability: a strictly positive y fixed by the
    /// transpose of A^n.
    FixedVector { y: Vec<Int> },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub embeddable: bool,
    pub method: Method,
    pub certificate: Option<Certificate>,
    pub power: u32,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decision {
    pub embeddable: bool,
    pub verdicts: Vec<Verdict>,
}

fn powered(tm: &TransferMatrix, power: u32) -> Result<IntMatrix> {
    if power == 0 {
        return Err(Error::Precondition("power must be at least 1".into()));
    }
    tm.a.pow(power)
}

fn condition_matrix(tm: &TransferMatrix, power: u32) -> Result<IntMatrix> {
    let ap = powered(tm, power)?;
    ap.sub(&IntMatrix::identity(ap.rows()))
}

fn row_rational(m: &IntMatrix, i: usize) -> Vec<Rational> {
    (0..m.cols())
        .map(|j| Rational::from(m.get(i, j).clone()))
        .collect()
}

/// Witness search by exact feasibility: for each coordinate j in turn, ask
/// for M f >= 0 with (M f)_j >= 1 and take the l1-smallest rational point,
/// cleared to integers. No feasible coordinate means embeddable.
pub fn af_lp(tm: &TransferMatrix, power: u32) -> Result<Verdict> {
    let m = condition_matrix(tm, power)?;
    let n = m.rows();
    for j in 0..n {
        let mut system: Vec<LinearInequality> = (0..n)
            .map(|i| LinearInequality::geq(row_rational(&m, i), Rational::zero()))
            .collect();
        system.push(LinearInequality::geq(
            row_rational(&m, j),
            -Rational::from(int(1)),
        ));
        if feasible_point(n, &system)?.is_none() {
            continue;
        }
        let point = l1_minimal_point(n, &system)?.ok_or_else(|| {
            Error::Inconsistency("feasible system lost its optimum".into())
        })?;
        let f = scale_to_integers(&point);
        let h = m.mul_vec(&f)?;
        if !dominates_zero(&h) {
            return Err(Error::Inconsistency(
                "scaled witness stopped dominating zero".into(),
            ));
        }
        return Ok(Verdict {
            embeddable: false,
            method: Method::Lp,
            certificate: Some(Certificate::Witness { f, h }),
            power,
        });
    }
    Ok(Verdict {
        embeddable: true,
        method: Method::Lp,
        certificate: None,
        power,
    })
}

/// Witness search through the alternative: either side of the alternative
/// for M = A^n - I is re-verified over the integers before it is trusted.
pub fn af_stiemke(tm: &TransferMatrix, power: u32) -> Result<Verdict> {
    let m = condition_matrix(tm, power)?;
    match stiemke_alternative(&m)? {
        AlternativeCertificate::Primal { f, image } => Ok(Verdict {
            embeddable: false,
            method: Method::Stiemke,
            certificate: Some(Certificate::Witness { f, h: image }),
            power,
        }),
        AlternativeCertificate::Dual { y } => {
            let fixed = powered(tm, power)?.transpose().mul_vec(&y)?;
            if fixed != y || y.iter().any(|c| !c.is_positive()) {
                return Err(Error::Inconsistency(
                    "dual certificate is not a positive fixed vector".into(),
                ));
            }
            Ok(Verdict {
                embeddable: true,
                method: Method::Stiemke,
                certificate: Some(Certificate::FixedVector { y }),
                power,
            })
        }
    }
}

/// Decides by the cycle criterion: embeddable exactly when no cycle has an
/// entrance. A negative verdict is certified by walking a shortest cycle
/// through a branching cycle vertex u: with L its length, the vector
/// f = sum of (A^n)^i delta_u for i < L telescopes to
/// (A^n - I) f = (A^n)^L delta_u - delta_u, which the entrance pushes
/// strictly above zero.
pub fn af_cycle(g: &DirectedGraph, power: u32) -> Result<Verdict> {
    if power == 0 {
        return Err(Error::Precondition("power must be at least 1".into()));
    }
    let entrances = cycles_with_entrance(g)?;
    if entrances.is_empty() {
        return Ok(Verdict {
            embeddable: true,
            method: Method::Cycle,
            certificate: None,
            power,
        });
    }
    let tm = adjacency_transfer(g)?;
    let on_cycle = cycle_vertices(g);
    let branching = tm
        .order
        .iter()
        .find(|v| on_cycle.contains(*v) && g.out_edges(v).len() >= 2)
        .ok_or_else(|| {
            Error::Inconsistency(
                "entrance reported but no cycle vertex branches forward".into(),
            )
        })?;
    let cycle = shortest_cycle_through(g, branching).ok_or_else(|| {
        Error::Inconsistency("branching vertex fell off its cycle".into())
    })?;
    let len = u32::try_from(cycle.len()).expect("cycle length fits u32");

    let idx = tm
        .order
        .iter()
        .position(|v| v == branching)
        .expect("branching vertex is ordered");
    let mut delta = vec![Int::zero(); tm.order.len()];
    delta[idx] = int(1);

    let mut f = vec![Int::zero(); tm.order.len()];
    let mut term = delta.clone();
    for _ in 0..len {
        for (acc, t) in f.iter_mut().zip(&term) {
            *acc += t;
        }
        term = graphmodel::transfer_apply(&tm, &term, power)?;
    }
    // term now holds (A^n)^L delta_u
    let h: Vec<Int> = term.iter().zip(&delta).map(|(a, b)| a - b).collect();
    let direct = condition_matrix(&tm, power)?.mul_vec(&f)?;
    if direct != h || !dominates_zero(&h) {
        return Err(Error::Inconsistency(
            "cycle certificate failed the telescoping identity".into(),
        ));
    }
    Ok(Verdict {
        embeddable: false,
        method: Method::Cycle,
        certificate: Some(Certificate::Witness { f, h }),
        power,
    })
}

/// True when the power-n condition holds, that is, no integer vector f has
/// (A^n - I) f nonnegative and nonzero.
pub fn power_condition(tm: &TransferMatrix, power: u32) -> Result<bool> {
    Ok(af_lp(tm, power)?.embeddable)
}

/// Runs every decider at the given power and returns the shared verdict
/// with all certificates. Disagreement is an internal inconsistency.
pub fn decide(g: &DirectedGraph, power: u32) -> Result<Decision> {
    graphmodel::require_admissible(g)?;
    let tm = adjacency_transfer(g)?;
    let verdicts = vec![
        af_lp(&tm, power)?,
        af_stiemke(&tm, power)?,
        af_cycle(g, power)?,
    ];
    let embeddable = verdicts[0].embeddable;
    if verdicts.iter().any(|v| v.embeddable != embeddable) {
        return Err(Error::Inconsistency(format!(
            "deciders disagree: {:?}",
            verdicts
        )));
    }
    for v in &verdicts {
        verify_verdict(&tm, v)?;
    }
    Ok(Decision { embeddable, verdicts })
}

/// Replays a verdict's certificate using only exact linear algebra.
pub fn verify_verdict(tm: &TransferMatrix, verdict: &Verdict) -> Result<()> {
    match (&verdict.certificate, verdict.embeddable) {
        (Some(Certificate::Witness { f, h }), false) => {
            let m = condition_matrix(tm, verdict.power)?;
            let image = m.mul_vec(f)?;
            if image != *h || !dominates_zero(h) {
                return Err(Error::Inconsistency(
                    "witness certificate failed replay".into(),
                ));
            }
        }
        (Some(Certificate::FixedVector { y }), true) => {
            let fixed = powered(tm, verdict.power)?.transpose().mul_vec(y)?;
            if fixed != *y || y.iter().any(|c| !c.is_positive()) {
                return Err(Error::Inconsistency(
                    "fixed-vector certificate failed replay".into(),
                ));
            }
        }
        (None, true) => {}
        (None, false) => {
            return Err(Error::Inconsistency(
                "negative verdict carries no witness".into(),
            ));
        }
        (Some(_), _) => {
            return Err(Error::Inconsistency(
                "certificate does not match the verdict sign".into(),
            ));
        }
    }
    Ok(())
}
