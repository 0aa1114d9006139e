//! Finite dynamical models: compression checking for permutations, whose
//! crossed products are the bijective special case of the embeddability
//! question, and epsilon-pseudoloop search on finite metric models of the
//! topological graph (X, X, sigma, id).

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::Deserialize;

use crate::decide::{af_lp, Method, Verdict};
use crate::error::{Error, Result};
use crate::exactlin::{parse_rational, Rational};
use crate::graphmodel::{adjacency_transfer, DirectedGraph, Edge};
use crate::guards;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SystemKind {
    Bijection,
    General,
}

/// A total map sigma on a finite point set. The kind is inferred: sigma is a
/// bijection exactly when its image exhausts the points.
#[derive(Clone, Debug, Deserialize, PartialEq, Eq)]
pub struct FiniteSystem {
    pub points: Vec<String>,
    pub sigma: BTreeMap<String, String>,
}

impl FiniteSystem {
    pub fn new(points: Vec<String>, sigma: BTreeMap<String, String>) -> Result<Self> {
        let sys = FiniteSystem { points, sigma };
        sys.check()?;
        Ok(sys)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let sys: FiniteSystem = serde_json::from_str(text)
            .map_err(|e| Error::Structural(format!("system json: {}", e)))?;
        sys.check()?;
        Ok(sys)
    }

    fn check(&self) -> Result<()> {
        let set: BTreeSet<&String> = self.points.iter().collect();
        if set.len() != self.points.len() {
            return Err(Error::Structural("duplicate point".into()));
        }
        for p in &self.points {
            if !self.sigma.contains_key(p) {
                return Err(Error::Structural(format!("sigma is undefined at {p}")));
            }
        }
        for (p, q) in &self.sigma {
            if !set.contains(p) {
                return Err(Error::Structural(format!("sigma defined at unknown point {p}")));
            }
            if !set.contains(q) {
                return Err(Error::Structural(format!("sigma sends {p} to unknown point {q}")));
            }
        }
        Ok(())
    }

    pub fn kind(&self) -> SystemKind {
        let image: BTreeSet<&String> = self.sigma.values().collect();
        if image.len() == self.points.len() {
            SystemKind::Bijection
        } else {
            SystemKind::General
        }
    }

    pub fn is_bijection(&self) -> bool {
        self.kind() == SystemKind::Bijection
    }

    fn require_bijection(&self) -> Result<()> {
        if !self.is_bijection() {
            return Err(Error::Precondition("sigma is not a bijection".into()));
        }
        Ok(())
    }

    pub fn apply(&self, x: &str) -> Result<&str> {
        self.sigma
            .get(x)
            .map(String::as_str)
            .ok_or_else(|| Error::Precondition(format!("unknown point {x}")))
    }
}

/// True when sigma(U) is a proper subset of U. For bijections the answer is
/// always false; the inclusion is still computed from the definition.
pub fn compresses(sys: &FiniteSystem, u: &BTreeSet<String>) -> Result<bool> {
    sys.require_bijection()?;
    let mut image = BTreeSet::new();
    for x in u {
        image.insert(sys.apply(x)?.to_string());
    }
    Ok(image.is_subset(u) && image != *u)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompressionReport {
    pub exists: bool,
    pub subsets_checked: u128,
}

/// Exhaustively searches all subsets for a compressed one and compares the
/// outcome with the cardinality argument (a bijection preserves subset
/// sizes, so a strict inclusion sigma(U) < U is impossible). Along the way
/// the dichotomy is asserted: an invariant-or-nothing image, never a proper
/// one.
pub fn compression_exists(sys: &FiniteSystem) -> Result<CompressionReport> {
    sys.require_bijection()?;
    let n = sys.points.len();
    guards::check("compression points", n as u128, guards::SUBSET_POINTS)?;
    let total: u128 = 1u128 << n;
    for mask in 0..total {
        let subset: BTreeSet<String> = sys
            .points
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> *i & 1 == 1)
            .map(|(_, p)| p.clone())
            .collect();
        if compresses(sys, &subset)? {
            return Err(Error::Inconsistency(format!(
                "bijection compresses {subset:?}"
            )));
        }
    }
    Ok(CompressionReport { exists: false, subsets_checked: total })
}

/// Decides embeddability of the crossed product of a finite bijection: it
/// holds exactly when no subset is compressed, which the exhaustive search
/// confirms. The verdict is cross-checked against the integer-vector
/// criterion for the matrix of f -> f after relabeling by sigma.
pub fn crossed_product_verdict(sys: &FiniteSystem) -> Result<Verdict> {
    let report = compression_exists(sys)?;
    let embeddable = !report.exists;
    let graph = permutation_graph(sys)?;
    let tm = adjacency_transfer(&graph)?;
    let lp = af_lp(&tm, 1)?;
    if lp.embeddable != embeddable {
        return Err(Error::Inconsistency(format!(
            "compression and transfer checks disagree: {lp:?}"
        )));
    }
    Ok(Verdict {
        embeddable,
        method: Method::Compression,
        certificate: None,
        power: 1,
    })
}

/// One edge per point, from x to sigma(x), so that the transfer matrix is
/// exactly the matrix of the pushforward f -> f of sigma inverse.
fn permutation_graph(sys: &FiniteSystem) -> Result<DirectedGraph> {
    sys.require_bijection()?;
    let edges = sys
        .points
        .iter()
        .map(|p| {
            Ok(Edge {
                id: p.clone(),
                src: p.clone(),
                rng: sys.apply(p)?.to_string(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    DirectedGraph::new(sys.points.clone(), edges)
}

/// A finite system with an exact rational metric, indexed by the order of
/// the point list.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MetricModel {
    pub system: FiniteSystem,
    d: Vec<Vec<Rational>>,
}

#[derive(Deserialize)]
struct MetricModelFile {
    points: Vec<String>,
    sigma: BTreeMap<String, String>,
    metric: Vec<Vec<String>>,
}

impl MetricModel {
    pub fn new(system: FiniteSystem, d: Vec<Vec<Rational>>) -> Result<Self> {
        let model = MetricModel { system, d };
        model.check()?;
        Ok(model)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: MetricModelFile = serde_json::from_str(text)
            .map_err(|e| Error::Structural(format!("metric model json: {}", e)))?;
        let system = FiniteSystem::new(file.points, file.sigma)?;
        let d = file
            .metric
            .iter()
            .map(|row| row.iter().map(|s| parse_rational(s)).collect())
            .collect::<Result<Vec<Vec<Rational>>>>()?;
        MetricModel::new(system, d)
    }

    fn check(&self) -> Result<()> {
        let n = self.system.points.len();
        if self.d.len() != n || self.d.iter().any(|row| row.len() != n) {
            return Err(Error::Structural(format!(
                "metric must be a {n} by {n} matrix"
            )));
        }
        use num::Zero;
        let p = &self.system.points;
        for i in 0..n {
            if !self.d[i][i].is_zero() {
                return Err(Error::Structural(format!("metric is nonzero at ({0}, {0})", p[i])));
            }
            for j in 0..n {
                if self.d[i][j] != self.d[j][i] {
                    return Err(Error::Structural(format!(
                        "metric is asymmetric at ({}, {})",
                        p[i], p[j]
                    )));
                }
                if i != j && self.d[i][j] <= Rational::zero() {
                    return Err(Error::Structural(format!(
                        "metric is not positive at ({}, {})",
                        p[i], p[j]
                    )));
                }
                for k in 0..n {
                    if self.d[i][k] > &self.d[i][j] + &self.d[j][k] {
                        return Err(Error::Structural(format!(
                            "triangle inequality fails at ({}, {}, {})",
                            p[i], p[j], p[k]
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    fn index(&self, x: &str) -> Result<usize> {
        self.system
            .points
            .iter()
            .position(|p| p == x)
            .ok_or_else(|| Error::Precondition(format!("unknown point {x}")))
    }

    pub fn dist(&self, x: &str, y: &str) -> Result<&Rational> {
        Ok(&self.d[self.index(x)?][self.index(y)?])
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PseudoloopReport {
    pub exists: bool,
    /// Accepted edge sequence e_1 .. e_n, present exactly when exists.
    pub witness: Option<Vec<String>>,
    /// Length bound the search is complete for. A minimal accepted sequence
    /// never repeats a final state, so it visits each point at most once
    /// and the bound is never binding; it is reported for negative verdicts.
    pub cap: usize,
}

/// Searches for an epsilon-pseudoloop based at the given point: an edge
/// sequence e_1 = base, e_2, .. , e_n with d(sigma(e_i), e_{i+1}) < eps at
/// every step and d(base, sigma(e_n)) < eps at the end. All comparisons are
/// strict and exact.
pub fn pseudoloop_exists(
    m: &MetricModel,
    base: &str,
    eps: &Rational,
) -> Result<PseudoloopReport> {
    use num::Zero;
    if *eps <= Rational::zero() {
        return Err(Error::Precondition("eps must be positive".into()));
    }
    let b = m.index(base)?;
    let n = m.system.points.len();
    let cap = n * n;
    let image: Vec<usize> = m
        .system
        .points
        .iter()
        .map(|p| m.index(m.system.apply(p)?))
        .collect::<Result<Vec<_>>>()?;

    let mut parent: Vec<Option<usize>> = vec![None; n];
    let mut seen = vec![false; n];
    let mut queue = VecDeque::new();
    seen[b] = true;
    queue.push_back(b);
    while let Some(u) = queue.pop_front() {
        if m.d[b][image[u]] < *eps {
            let mut walk = vec![u];
            while let Some(prev) = parent[*walk.last().expect("nonempty")] {
                walk.push(prev);
            }
            walk.reverse();
            let witness = walk.into_iter().map(|i| m.system.points[i].clone()).collect();
            return Ok(PseudoloopReport { exists: true, witness: Some(witness), cap });
        }
        for w in 0..n {
            if !seen[w] && m.d[image[u]][w] < *eps {
                seen[w] = true;
                parent[w] = Some(u);
                queue.push_back(w);
            }
        }
    }
    Ok(PseudoloopReport { exists: false, witness: None, cap })
}
