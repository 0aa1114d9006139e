//! Brute-force reference computations for the test suite. They share only
//! the integer-matrix substrate with the main code paths: every search,
//! canonical form and connecting map here is recomputed from first
//! principles, so a disagreement always means a bug.

use std::collections::BTreeMap;

use num::{Signed, Zero};

use crate::drgroupoid::{refine_points, window_paths, Path, PathFunction};
use crate::error::{Error, Result};
use crate::exactlin::{
    cokernel_presentation, int, snf, solve_integer, H0Presentation, Int, IntMatrix,
};
use crate::fibered::{boundary, ChainFunction, FiberedSet};
use crate::graphmodel::{DirectedGraph, TransferMatrix};
use crate::guards;

/// Scans the integer box [-bound, bound]^dim in lexicographic order and
/// returns the first f with (A - I) f nonnegative and nonzero.
pub fn witness_search(tm: &TransferMatrix, bound: i64) -> Result<Option<Vec<Int>>> {
    if bound < 0 {
        return Err(Error::Precondition("bound must be nonnegative".into()));
    }
    let dim = tm.order.len();
    let width = 2 * bound as u128 + 1;
    let size = width
        .checked_pow(u32::try_from(dim).expect("dimension fits u32"))
        .unwrap_or(u128::MAX);
    guards::check("witness box", size, guards::WITNESS_BOX)?;
    let m = tm.a.sub(&IntMatrix::identity(dim))?;
    let mut f = vec![-bound; dim];
    loop {
        let fv: Vec<Int> = f.iter().map(|&c| int(c)).collect();
        let h = m.mul_vec(&fv)?;
        if h.iter().all(|c| !c.is_negative()) && h.iter().any(|c| c.is_positive()) {
            return Ok(Some(fv));
        }
        let mut i = dim;
        loop {
            if i == 0 {
                return Ok(None);
            }
            i -= 1;
            if f[i] < bound {
                f[i] += 1;
                for slot in f[i + 1..].iter_mut() {
                    *slot = -bound;
                }
                break;
            }
        }
    }
}

/// Columns are all ordered same-fiber differences delta_v - delta_u, rows
/// follow sorted points.
fn difference_matrix(fs: &FiberedSet) -> Result<IntMatrix> {
    let xs = fs.sorted_x();
    let n = xs.len();
    guards::check("brute-force points", n as u128, guards::BRUTE_POINTS)?;
    let index: BTreeMap<String, usize> =
        xs.iter().cloned().enumerate().map(|(i, x)| (x, i)).collect();
    let mut columns: Vec<Vec<Int>> = Vec::new();
    for y in fs.sorted_y() {
        let fiber = fs.fiber(&y);
        for u in &fiber {
            for v in &fiber {
                if u == v {
                    continue;
                }
                let mut col = vec![Int::zero(); n];
                col[index[u.as_str()]] = int(-1);
                col[index[v.as_str()]] = int(1);
                columns.push(col);
            }
        }
    }
    let cols = columns.len();
    let mut entries = Vec::with_capacity(n * cols);
    for i in 0..n {
        for col in &columns {
            entries.push(col[i].clone());
        }
    }
    IntMatrix::from_entries(n, cols, entries)
}

/// Classes of the point masses in the Smith-normal-form free coordinates,
/// one vector per sorted point.
pub fn h0_point_classes(fs: &FiberedSet) -> Result<Vec<Vec<Int>>> {
    let m = difference_matrix(fs)?;
    let s = snf(&m);
    let rank = s.rank();
    let n = m.rows();
    Ok((0..n)
        .map(|x| (rank..n).map(|i| s.u.get(i, x).clone()).collect())
        .collect())
}

/// Presents degree-zero homology from scratch as the cokernel of the full
/// difference matrix. The cone is the set of distinct point-mass classes
/// read off in the Smith-normal-form free coordinates, in first-appearance
/// order over sorted points.
pub fn h0_bruteforce(fs: &FiberedSet) -> Result<H0Presentation> {
    let m = difference_matrix(fs)?;
    let mut pres = cokernel_presentation(&m);
    let mut cone: Vec<Vec<Int>> = Vec::new();
    for class in h0_point_classes(fs)? {
        if !cone.contains(&class) {
            cone.push(class);
        }
    }
    pres.positive_cone = Some(cone);
    Ok(pres)
}

/// Decides equality of two degree-zero classes by solving for an integer
/// combination of same-fiber differences realizing f - g.
pub fn h0_equal_bruteforce(
    fs: &FiberedSet,
    f: &ChainFunction,
    g: &ChainFunction,
) -> Result<bool> {
    if f.level() != 0 || g.level() != 0 {
        return Err(Error::Precondition("classes live in degree zero".into()));
    }
    let xs = fs.sorted_x();
    for h in [f, g] {
        for key in h.values().keys() {
            if !xs.contains(&key[0]) {
                return Err(Error::Precondition(format!("unknown point {}", key[0])));
            }
        }
    }
    let b: Vec<Int> = xs
        .iter()
        .map(|x| f.value(std::slice::from_ref(x)) - g.value(std::slice::from_ref(x)))
        .collect();
    let m = difference_matrix(fs)?;
    Ok(solve_integer(&m, &b).is_some())
}

struct XorShift(u64);

impl XorShift {
    fn new(seed: u64) -> Self {
        XorShift(seed | 1)
    }

    fn next(&mut self) -> u64 {
        let mut x = self.0;
        x ^= x << 13;
        x ^= x >> 7;
        x ^= x << 17;
        self.0 = x;
        x
    }

    fn below(&mut self, n: u64) -> u64 {
        self.next() % n
    }
}

/// Applies the boundary twice to random degree-two chains; the composite
/// must vanish identically, so any false return is a bug in the boundary.
pub fn chain_check(fs: &FiberedSet, trials: u32, seed: u64) -> Result<bool> {
    if trials == 0 {
        return Err(Error::Precondition("trials must be at least 1".into()));
    }
    let fibers: Vec<Vec<String>> = fs.sorted_y().iter().map(|y| fs.fiber(y)).collect();
    let mut rng = XorShift::new(seed);
    for _ in 0..trials {
        let mut f = ChainFunction::zero(2);
        for _ in 0..1 + rng.below(6) {
            let fiber = &fibers[rng.below(fibers.len() as u64) as usize];
            let mut pick = || fiber[rng.below(fiber.len() as u64) as usize].clone();
            let key = vec![pick(), pick(), pick()];
            f.add_term(key, int(rng.below(7) as i64 - 3));
        }
        let once = boundary(fs, &f)?;
        let twice = boundary(fs, &once)?;
        if !twice.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Realizes a vertex-weight vector at a refinement level as a cylinder
/// function on the reversed graph, one lexicographically first window path
/// attached at each weighted vertex, and reads the attach sums back after
/// `steps` further refinements. Appending a tail edge on the reversed
/// graph moves a path's attach vertex backwards along an original edge, so
/// each refinement carries the sums by exactly the range-source transfer
/// matrix of the original graph without ever multiplying by it.
pub fn chain_model_sums(
    g: &DirectedGraph,
    weights: &[Int],
    level: usize,
    steps: usize,
) -> Result<Vec<Int>> {
    let rev = g.reversed();
    let order = g.sorted_vertices();
    if weights.len() != order.len() {
        return Err(Error::Dimension(format!(
            "{} weights for {} vertices",
            weights.len(),
            order.len()
        )));
    }
    let mut values = BTreeMap::new();
    if level == 0 {
        for (v, w) in order.iter().zip(weights) {
            if !w.is_zero() {
                values.insert(Path::Vertex(v.clone()), w.clone());
            }
        }
    } else {
        let window = window_paths(&rev, level)?;
        for (v, w) in order.iter().zip(weights) {
            if w.is_zero() {
                continue;
            }
            let p = window
                .paths
                .iter()
                .map(|es| Path::Edges(es.clone()))
                .find(|p| p.attach(&rev).map(|a| a == *v).unwrap_or(false))
                .ok_or_else(|| {
                    Error::Precondition(format!("no level-{level} path attached at {v}"))
                })?;
            values.insert(p, w.clone());
        }
    }
    let f = PathFunction::new(&rev, level, values)?;
    let refined = refine_points(&rev, &f, steps)?;
    refined.attach_sums(&rev)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphmodel::{adjacency_transfer, transfer_apply, Edge};

    fn graph(vertices: &[&str], edges: &[(&str, &str, &str)]) -> DirectedGraph {
        DirectedGraph::new(
            vertices.iter().map(|s| s.to_string()).collect(),
            edges
                .iter()
                .map(|(id, src, rng)| Edge {
                    id: id.to_string(),
                    src: src.to_string(),
                    rng: rng.to_string(),
                })
                .collect(),
        )
        .unwrap()
    }

    fn matrix(rows: &[Vec<i64>]) -> TransferMatrix {
        TransferMatrix {
            order: (0..rows.len()).map(|i| format!("v{i}")).collect(),
            a: IntMatrix::from_rows(rows).unwrap(),
        }
    }

    fn fibered(x: &[&str], y: &[&str], sigma: &[(&str, &str)]) -> FiberedSet {
        FiberedSet::new(
            x.iter().map(|s| s.to_string()).collect(),
            y.iter().map(|s| s.to_string()).collect(),
            sigma
                .iter()
                .map(|(a, b)| (a.to_string(), b.to_string()))
                .collect(),
        )
        .unwrap()
    }

    fn fs0() -> FiberedSet {
        fibered(&["1", "2", "3"], &["a", "b"], &[("1", "a"), ("2", "a"), ("3", "b")])
    }

    #[test]
    fn witness_boxes_scan_in_lex_order() {
        let doubling = matrix(&[vec![2]]);
        assert_eq!(witness_search(&doubling, 5).unwrap(), Some(vec![int(1)]));

        let identity = matrix(&[vec![1]]);
        assert_eq!(witness_search(&identity, 5).unwrap(), None);

        let swap = matrix(&[vec![0, 1], vec![1, 0]]);
        assert_eq!(witness_search(&swap, 3).unwrap(), None);

        assert!(matches!(
            witness_search(&swap, 2000).unwrap_err(),
            Error::Guard { .. }
        ));
    }

    #[test]
    fn brute_force_presentations_match_known_groups() {
        let pres = h0_bruteforce(&fs0()).unwrap();
        assert_eq!(pres.free_rank, 2);
        assert!(pres.torsion.is_empty());
        let cone = pres.positive_cone.unwrap();
        assert_eq!(cone.len(), 2);

        let free = fibered(
            &["1", "2", "3"],
            &["a", "b", "c"],
            &[("1", "a"), ("2", "b"), ("3", "c")],
        );
        let pres = h0_bruteforce(&free).unwrap();
        assert_eq!(pres.free_rank, 3);
        assert_eq!(pres.positive_cone.unwrap().len(), 3);

        let collapsed = fibered(&["1", "2", "3"], &["a"], &[("1", "a"), ("2", "a"), ("3", "a")]);
        let pres = h0_bruteforce(&collapsed).unwrap();
        assert_eq!(pres.free_rank, 1);
        assert!(pres.torsion.is_empty());
        assert_eq!(pres.positive_cone.unwrap().len(), 1);
    }

    #[test]
    fn class_equality_solves_for_differences() {
        let fs = fs0();
        let d1 = ChainFunction::delta(&["1"]);
        let d2 = ChainFunction::delta(&["2"]);
        let d3 = ChainFunction::delta(&["3"]);
        assert!(h0_equal_bruteforce(&fs, &d1, &d2).unwrap());
        assert!(!h0_equal_bruteforce(&fs, &d1, &d3).unwrap());
        let sum = d1.add(&d3).unwrap();
        assert!(h0_equal_bruteforce(&fs, &sum, &d2.add(&d3).unwrap()).unwrap());
    }

    #[test]
    fn random_chains_compose_to_zero() {
        assert!(chain_check(&fs0(), 25, 7).unwrap());
        let single = fibered(&["1", "2", "3"], &["a"], &[("1", "a"), ("2", "a"), ("3", "a")]);
        assert!(chain_check(&single, 25, 99).unwrap());
        assert!(chain_check(&single, 0, 1).is_err());
    }

    #[test]
    fn chain_models_carry_transfer_sums() {
        let full_shift = graph(&["v"], &[("0", "v", "v"), ("1", "v", "v")]);
        assert_eq!(chain_model_sums(&full_shift, &[int(1)], 0, 1).unwrap(), vec![int(2)]);
        assert_eq!(chain_model_sums(&full_shift, &[int(1)], 0, 3).unwrap(), vec![int(8)]);
        assert_eq!(chain_model_sums(&full_shift, &[int(3)], 2, 1).unwrap(), vec![int(6)]);

        let entrance = graph(
            &["v1", "v2"],
            &[("e1", "v1", "v1"), ("e2", "v2", "v1"), ("e3", "v2", "v2")],
        );
        let tm = adjacency_transfer(&entrance).unwrap();
        for weights in [[0i64, 1], [1, 0], [2, -1]] {
            let w: Vec<Int> = weights.iter().map(|&c| int(c)).collect();
            for steps in 0..3 {
                assert_eq!(
                    chain_model_sums(&entrance, &w, 1, steps).unwrap(),
                    transfer_apply(&tm, &w, steps as u32).unwrap(),
                );
            }
        }
    }
}
