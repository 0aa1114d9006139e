//! Deterministic random generators shared by the integration suites.

#![allow(dead_code)]

use std::collections::BTreeMap;

use grpd_core::dynsys::{FiniteSystem, MetricModel};
use grpd_core::exactlin::rat;
use grpd_core::fibered::FiberedSet;
use grpd_core::graphmodel::{DirectedGraph, Edge};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Sink/source-free multigraph: every vertex gets 1..=max_out outgoing
/// edges with random targets, then every uncovered vertex receives one
/// incoming edge. Total out-degree at most max_out + fixups keeps pair
/// multiplicities at most max_out.
pub fn random_admissible_graph(
    rng: &mut ChaCha8Rng,
    min_v: usize,
    max_v: usize,
    max_out: usize,
) -> DirectedGraph {
    let n = rng.gen_range(min_v..=max_v);
    let vertices: Vec<String> = (1..=n).map(|i| format!("v{i}")).collect();
    let mut endpoints = Vec::new();
    let mut indeg = vec![0usize; n];
    for v in &vertices {
        for _ in 0..rng.gen_range(1..=max_out) {
            let t = rng.gen_range(0..n);
            indeg[t] += 1;
            endpoints.push((v.clone(), vertices[t].clone()));
        }
    }
    for t in 0..n {
        if indeg[t] == 0 {
            let s = rng.gen_range(0..n);
            endpoints.push((vertices[s].clone(), vertices[t].clone()));
        }
    }
    let edges = endpoints
        .into_iter()
        .enumerate()
        .map(|(i, (src, target))| Edge {
            id: format!("e{:02}", i + 1),
            src,
            rng: target,
        })
        .collect();
    DirectedGraph::new(vertices, edges).expect("generated graph is structurally valid")
}

/// Fibered set with 1..=max_x points over a nonempty base; the first |Y|
/// points of a shuffle hit each base point once, so sigma is surjective.
pub fn random_fibered(rng: &mut ChaCha8Rng, max_x: usize) -> FiberedSet {
    let nx = rng.gen_range(1..=max_x);
    let ny = rng.gen_range(1..=nx);
    let xs: Vec<String> = (1..=nx).map(|i| format!("x{i:02}")).collect();
    let ys: Vec<String> = (1..=ny).map(|i| format!("y{i:02}")).collect();
    let mut shuffled = xs.clone();
    shuffled.shuffle(rng);
    let mut sigma = BTreeMap::new();
    for (i, x) in shuffled.iter().enumerate() {
        let y = if i < ny { &ys[i] } else { &ys[rng.gen_range(0..ny)] };
        sigma.insert(x.clone(), y.clone());
    }
    FiberedSet::new(xs, ys, sigma).expect("generated fibered set is valid")
}

pub fn random_permutation(rng: &mut ChaCha8Rng, n: usize) -> FiniteSystem {
    let points: Vec<String> = (1..=n).map(|i| format!("p{i:02}")).collect();
    let mut targets = points.clone();
    targets.shuffle(rng);
    let sigma = points.iter().cloned().zip(targets).collect();
    FiniteSystem::new(points, sigma).expect("permutation is valid")
}

/// Random map with a random metric whose off-diagonal values lie in
/// [5/q, 10/q]; the largest value never exceeds twice the smallest, so the
/// triangle inequality holds for free.
#[allow(clippy::needless_range_loop)] // symmetric writes d[i][j] and d[j][i]
pub fn random_metric_model(rng: &mut ChaCha8Rng, max_x: usize) -> MetricModel {
    let n = rng.gen_range(1..=max_x);
    let points: Vec<String> = (1..=n).map(|i| format!("p{i:02}")).collect();
    let sigma: BTreeMap<String, String> = points
        .iter()
        .map(|p| (p.clone(), points[rng.gen_range(0..n)].clone()))
        .collect();
    let q = rng.gen_range(1..=3i64);
    let mut d = vec![vec![rat(0, 1); n]; n];
    for i in 0..n {
        for j in (i + 1)..n {
            let val = rat(rng.gen_range(5..=10), q);
            d[i][j] = val.clone();
            d[j][i] = val;
        }
    }
    let system = FiniteSystem::new(points, sigma).expect("generated system is valid");
    MetricModel::new(system, d).expect("doubling-bounded values form a metric")
}

/// The discrete metric model of a system: distance 1 between distinct
/// points.
#[allow(clippy::needless_range_loop)] // off-diagonal fill reads both indices
pub fn discrete_model(sys: &FiniteSystem) -> MetricModel {
    let n = sys.points.len();
    let mut d = vec![vec![rat(0, 1); n]; n];
    for i in 0..n {
        for j in 0..n {
            if i != j {
                d[i][j] = rat(1, 1);
            }
        }
    }
    MetricModel::new(sys.clone(), d).expect("discrete metric is a metric")
}
