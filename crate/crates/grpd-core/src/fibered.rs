//! Finite fibered sets sigma: X -> Y and the relation R(sigma) of same-fiber
//! pairs, with chain functions, boundary maps, degree-0/1 homology, and the
//! per-fiber matrix picture behind the trace pairing.
//!
//! A chain function of level n is an integer function on composable n-tuples
//! of R(sigma); identifying the tuple (g_1, .., g_n) with its point sequence
//! gives keys (u_0, .., u_n) lying in one fiber. Level 0 means functions on X.

use crate::error::{Error, Result};
use crate::exactlin::{cokernel_presentation, int, snf};
use crate::exactlin::{H0Presentation, Int, IntMatrix};
use crate::guards;
use num::Zero;
use serde::Deserialize;
use std::collections::{BTreeMap, BTreeSet};

#[derive(Clone, Debug, Deserialize, PartialEq, Eq)]
pub struct FiberedSet {
    #[serde(rename = "X")]
    pub x: Vec<String>,
    #[serde(rename = "Y")]
    pub y: Vec<String>,
    pub sigma: BTreeMap<String, String>,
}

impl FiberedSet {
    pub fn new(x: Vec<String>, y: Vec<String>, sigma: BTreeMap<String, String>) -> Result<Self> {
        let fs = FiberedSet { x, y, sigma };
        fs.check()?;
        Ok(fs)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let fs: FiberedSet = serde_json::from_str(text)
            .map_err(|e| Error::Structural(format!("fibered set json: {}", e)))?;
        fs.check()?;
        Ok(fs)
    }

    fn check(&self) -> Result<()> {
        let xs: BTreeSet<&String> = self.x.iter().collect();
        let ys: BTreeSet<&String> = self.y.iter().collect();
        if xs.len() != self.x.len() {
            return Err(Error::Structural("duplicate point id in X".into()));
        }
        if ys.len() != self.y.len() {
            return Err(Error::Structural("duplicate point id in Y".into()));
        }
        for p in &self.x {
            match self.sigma.get(p) {
                None => {
                    return Err(Error::Structural(format!("sigma undefined at {:?}", p)));
                }
                Some(q) if !ys.contains(q) => {
                    return Err(Error::Structural(format!(
                        "sigma({:?}) = {:?} is not in Y",
                        p, q
                    )));
                }
                _ => {}
            }
        }
        for p in self.sigma.keys() {
            if !xs.contains(p) {
                return Err(Error::Structural(format!(
                    "sigma defined at {:?} outside X",
                    p
                )));
            }
        }
        let image: BTreeSet<&String> = self.sigma.values().collect();
        for q in &self.y {
            if !image.contains(q) {
                return Err(Error::Structural(format!(
                    "sigma is not surjective: {:?} has empty fiber",
                    q
                )));
            }
        }
        Ok(())
    }

    pub fn sorted_x(&self) -> Vec<String> {
        let mut v = self.x.clone();
        v.sort();
        v
    }

    pub fn sorted_y(&self) -> Vec<String> {
        let mut v = self.y.clone();
        v.sort();
        v
    }

    /// Points of the fiber over y, ascending.
    pub fn fiber(&self, y: &str) -> Vec<String> {
        let mut f: Vec<String> = self
            .x
            .iter()
            .filter(|p| self.sigma[*p] == y)
            .cloned()
            .collect();
        f.sort();
        f
    }

    fn contains_point(&self, p: &str) -> bool {
        self.sigma.contains_key(p)
    }

    fn same_fiber(&self, tuple: &[String]) -> bool {
        tuple
            .windows(2)
            .all(|w| self.sigma[&w[0]] == self.sigma[&w[1]])
    }
}

/// A right inverse of sigma: one chosen point per fiber.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Section {
    pub phi: BTreeMap<String, String>,
}

impl Section {
    pub fn new(fs: &FiberedSet, phi: BTreeMap<String, String>) -> Result<Self> {
        for y in &fs.y {
            match phi.get(y) {
                None => {
                    return Err(Error::Precondition(format!("section undefined at {:?}", y)));
                }
                Some(p) if !fs.contains_point(p) || fs.sigma[p] != *y => {
                    return Err(Error::Precondition(format!(
                        "section sends {:?} to {:?} outside its fiber",
                        y, p
                    )));
                }
                _ => {}
            }
        }
        if phi.len() != fs.y.len() {
            return Err(Error::Precondition(
                "section defined outside Y".to_string(),
            ));
        }
        Ok(Section { phi })
    }
}

/// All sections, ordered by the ascending choice within each sorted fiber.
pub fn enumerate_sections(fs: &FiberedSet) -> Result<Vec<Section>> {
    let ys = fs.sorted_y();
    let fibers: Vec<Vec<String>> = ys.iter().map(|y| fs.fiber(y)).collect();
    let mut total: u128 = 1;
    for f in &fibers {
        total = total.saturating_mul(f.len() as u128);
    }
    guards::check("section enumeration", total, guards::SECTION_PRODUCT)?;

    let mut sections = vec![BTreeMap::new()];
    for (y, fiber) in ys.iter().zip(&fibers) {
        let mut next = Vec::with_capacity(sections.len() * fiber.len());
        for partial in &sections {
            for p in fiber {
                let mut phi: BTreeMap<String, String> = partial.clone();
                phi.insert(y.clone(), p.clone());
                next.push(phi);
            }
        }
        sections = next;
    }
    sections
        .into_iter()
        .map(|phi| Section::new(fs, phi))
        .collect()
}

/// Ordered same-fiber pairs, sorted; the arrow (u, v) has range u and
/// source v.
pub fn relation_pairs(fs: &FiberedSet) -> Vec<(String, String)> {
    let mut out = Vec::new();
    for y in fs.sorted_y() {
        let fiber = fs.fiber(&y);
        for u in &fiber {
            for v in &fiber {
                out.push((u.clone(), v.clone()));
            }
        }
    }
    out.sort();
    out
}

/// Integer function on composable tuples. Zero values are never stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainFunction {
    level: usize,
    values: BTreeMap<Vec<String>, Int>,
}

impl ChainFunction {
    pub fn new(level: usize, values: BTreeMap<Vec<String>, Int>) -> Result<Self> {
        for key in values.keys() {
            if key.len() != level + 1 {
                return Err(Error::Dimension(format!(
                    "level {} key has {} points",
                    level,
                    key.len()
                )));
            }
        }
        let values = values.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        Ok(ChainFunction { level, values })
    }

    pub fn zero(level: usize) -> Self {
        ChainFunction { level, values: BTreeMap::new() }
    }

    pub fn delta(key: &[&str]) -> Self {
        assert!(!key.is_empty(), "delta needs at least one point");
        let mut values = BTreeMap::new();
        values.insert(key.iter().map(|s| s.to_string()).collect(), int(1));
        ChainFunction { level: key.len() - 1, values }
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn values(&self) -> &BTreeMap<Vec<String>, Int> {
        &self.values
    }

    pub fn value(&self, key: &[String]) -> Int {
        self.values.get(key).cloned().unwrap_or_else(Int::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.values.is_empty()
    }

    pub fn add_term(&mut self, key: Vec<String>, coeff: Int) {
        assert_eq!(key.len(), self.level + 1, "term level mismatch");
        if coeff.is_zero() {
            return;
        }
        let entry = self.values.entry(key.clone()).or_insert_with(Int::zero);
        *entry += coeff;
        if entry.is_zero() {
            self.values.remove(&key);
        }
    }

    pub fn add(&self, other: &ChainFunction) -> Result<ChainFunction> {
        if self.level != other.level {
            return Err(Error::Dimension("adding chains of different levels".into()));
        }
        let mut out = self.clone();
        for (k, c) in &other.values {
            out.add_term(k.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &ChainFunction) -> Result<ChainFunction> {
        if self.level != other.level {
            return Err(Error::Dimension("subtracting chains of different levels".into()));
        }
        let mut out = self.clone();
        for (k, c) in &other.values {
            out.add_term(k.clone(), -c.clone());
        }
        Ok(out)
    }

    fn check_support(&self, fs: &FiberedSet) -> Result<()> {
        for key in self.values.keys() {
            for p in key {
                if !fs.contains_point(p) {
                    return Err(Error::Precondition(format!(
                        "support point {:?} is not in X",
                        p
                    )));
                }
            }
            if self.level >= 1 && !fs.same_fiber(key) {
                return Err(Error::Precondition(format!(
                    "support tuple {:?} crosses fibers",
                    key
                )));
            }
        }
        Ok(())
    }
}

/// Alternating sum of the face maps: face i deletes point u_i. For level 1
/// this is source minus range pushforward.
pub fn boundary(fs: &FiberedSet, f: &ChainFunction) -> Result<ChainFunction> {
    if f.level() == 0 {
        return Err(Error::Precondition(
            "boundary is undefined on level-0 functions".into(),
        ));
    }
    f.check_support(fs)?;
    let mut out = ChainFunction::zero(f.level() - 1);
    for (key, coeff) in f.values() {
        for i in 0..key.len() {
            let mut face = key.clone();
            face.remove(i);
            let sign = if i % 2 == 0 { coeff.clone() } else { -coeff.clone() };
            out.add_term(face, sign);
        }
    }
    Ok(out)
}

/// Sums of a level-0 function over each fiber, in sorted Y order.
pub fn fiber_sum(fs: &FiberedSet, f: &ChainFunction) -> Result<Vec<Int>> {
    if f.level() != 0 {
        return Err(Error::Dimension("fiber sums need a level-0 function".into()));
    }
    f.check_support(fs)?;
    let ys = fs.sorted_y();
    let index: BTreeMap<&String, usize> = ys.iter().enumerate().map(|(i, y)| (y, i)).collect();
    let mut out = vec![Int::zero(); ys.len()];
    for (key, coeff) in f.values() {
        out[index[&fs.sigma[&key[0]]]] += coeff;
    }
    Ok(out)
}

/// Degree-0 classes agree exactly when all fiber sums agree.
pub fn h0_class_equal(fs: &FiberedSet, f1: &ChainFunction, f2: &ChainFunction) -> Result<bool> {
    Ok(fiber_sum(fs, f1)? == fiber_sum(fs, f2)?)
}

fn boundary_one_matrix(fs: &FiberedSet, pairs: &[(String, String)]) -> IntMatrix {
    let xs = fs.sorted_x();
    let index: BTreeMap<&String, usize> = xs.iter().enumerate().map(|(i, p)| (p, i)).collect();
    let mut m = IntMatrix::zeros(xs.len(), pairs.len());
    for (j, (u, v)) in pairs.iter().enumerate() {
        // boundary of delta_(u,v) is delta_v - delta_u
        let mut add = |p: &String, s: i64| {
            let i = index[p];
            let cur = m.get(i, j) + int(s);
            m.set(i, j, cur);
        };
        add(v, 1);
        add(u, -1);
    }
    m
}

/// Homology of the relation in degree 0 or 1.
///
/// Degree 0 is presented in fiber-sum coordinates: the free part is Z^Y and
/// the cone is generated by the standard basis classes. The rank and torsion
/// are still read off a Smith normal form of the boundary matrix, so a
/// defect anywhere in the chain model surfaces as an inconsistency error.
/// Degree 1 is computed as kernel modulo image. Higher degrees are not
/// supported.
pub fn homology(fs: &FiberedSet, degree: usize) -> Result<H0Presentation> {
    let pairs = relation_pairs(fs);
    let d1 = boundary_one_matrix(fs, &pairs);
    match degree {
        0 => {
            let computed = cokernel_presentation(&d1);
            if computed.free_rank != fs.y.len() || !computed.torsion.is_empty() {
                return Err(Error::Inconsistency(format!(
                    "degree-0 homology presented rank {} with {} torsion factors, expected free rank {}",
                    computed.free_rank,
                    computed.torsion.len(),
                    fs.y.len()
                )));
            }
            let n = fs.y.len();
            let cone: Vec<Vec<Int>> = (0..n)
                .map(|i| (0..n).map(|j| if i == j { int(1) } else { int(0) }).collect())
                .collect();
            Ok(H0Presentation {
                free_rank: n,
                torsion: Vec::new(),
                positive_cone: Some(cone),
            })
        }
        1 => {
            let r1 = snf(&d1).rank();
            let pair_index: BTreeMap<&(String, String), usize> =
                pairs.iter().enumerate().map(|(i, p)| (p, i)).collect();
            // Degree-2 boundary restricted to basepoint triples (x0, u, v):
            // these span the full image because the general column obeys
            // (u,v,w) = (x0,v,w) - (x0,u,w) + (x0,u,v) identically over
            // the integers.
            let mut d2_cols = 0usize;
            for y in fs.sorted_y() {
                let k = fs.fiber(&y).len();
                d2_cols += k * k;
            }
            let mut d2 = IntMatrix::zeros(pairs.len(), d2_cols);
            let mut j = 0usize;
            for y in fs.sorted_y() {
                let fiber = fs.fiber(&y);
                let x0 = &fiber[0];
                for u in &fiber {
                    for v in &fiber {
                        let bump = |m: &mut IntMatrix, key: (String, String), s: i64| {
                            let i = pair_index[&key];
                            let cur = m.get(i, j).clone();
                            m.set(i, j, cur + int(s));
                        };
                        bump(&mut d2, (u.clone(), v.clone()), 1);
                        bump(&mut d2, (x0.clone(), v.clone()), -1);
                        bump(&mut d2, (x0.clone(), u.clone()), 1);
                        j += 1;
                    }
                }
            }
            if d1.mul(&d2)? != IntMatrix::zeros(d1.rows(), d2_cols) {
                return Err(Error::Inconsistency(
                    "degree-2 boundary image escapes the degree-1 kernel".into(),
                ));
            }
            // ZZ^pairs modulo the kernel of d1 embeds in ZZ^X, so it is
            // free and the inclusion of the kernel splits: the cokernel of
            // d2 is the degree-1 group plus a free factor of rank r1.
            let mut presentation = cokernel_presentation(&d2);
            if presentation.free_rank < r1 {
                return Err(Error::Inconsistency(
                    "degree-1 presentation lost the free factor of the image".into(),
                ));
            }
            presentation.free_rank -= r1;
            presentation.positive_cone = None;
            Ok(presentation)
        }
        n => Err(Error::Unsupported(format!(
            "homology in degree {} is not supported",
            n
        ))),
    }
}

/// Per-fiber matrix units: for each y the fiber is enumerated with the
/// section's choice first, then the rest ascending.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockDecomposition {
    pub blocks: Vec<(String, Vec<String>)>,
}

impl BlockDecomposition {
    /// Writes a level-1 function as one integer matrix per block:
    /// entry (r, s) of block y is the value at (u_r, u_s).
    pub fn mu(&self, fs: &FiberedSet, f: &ChainFunction) -> Result<Vec<IntMatrix>> {
        if f.level() != 1 {
            return Err(Error::Dimension("mu needs a level-1 function".into()));
        }
        f.check_support(fs)?;
        let mut out = Vec::with_capacity(self.blocks.len());
        for (_, points) in &self.blocks {
            let k = points.len();
            let mut m = IntMatrix::zeros(k, k);
            for (r, u) in points.iter().enumerate() {
                for (s, v) in points.iter().enumerate() {
                    m.set(r, s, f.value(&[u.clone(), v.clone()]));
                }
            }
            out.push(m);
        }
        Ok(out)
    }
}

pub fn block_decomposition(fs: &FiberedSet, phi: &Section) -> Result<BlockDecomposition> {
    let mut blocks = Vec::new();
    for y in fs.sorted_y() {
        let chosen = phi.phi[&y].clone();
        let mut points = vec![chosen.clone()];
        points.extend(fs.fiber(&y).into_iter().filter(|p| *p != chosen));
        blocks.push((y, points));
    }
    Ok(BlockDecomposition { blocks })
}

/// Block decomposition with plain ascending fiber enumeration; used where
/// no section is involved. Traces and the projection property do not
/// depend on the enumeration.
fn canonical_blocks(fs: &FiberedSet) -> BlockDecomposition {
    BlockDecomposition {
        blocks: fs.sorted_y().into_iter().map(|y| {
            let fiber = fs.fiber(&y);
            (y, fiber)
        }).collect(),
    }
}

fn require_projection(label: &str, m: &IntMatrix) -> Result<()> {
    if m.mul(m)? != *m || m.transpose() != *m {
        return Err(Error::Precondition(format!(
            "{} is not a projection: a block fails idempotence or symmetry",
            label
        )));
    }
    Ok(())
}

fn block_traces(fs: &FiberedSet, label: &str, p: &ChainFunction) -> Result<Vec<Int>> {
    let blocks = canonical_blocks(fs);
    let mats = blocks.mu(fs, p)?;
    let mut out = Vec::with_capacity(mats.len());
    for m in &mats {
        require_projection(label, m)?;
        let mut t = Int::zero();
        for i in 0..m.rows() {
            t += m.get(i, i);
        }
        out.push(t);
    }
    Ok(out)
}

/// Trace of a projection against a section: a level-0 function supported on
/// the section's chosen points, whose value at phi(y) is the block trace
/// over y.
pub fn trace_phi(fs: &FiberedSet, phi: &Section, p: &ChainFunction) -> Result<ChainFunction> {
    trace_phi_amplified(fs, phi, std::slice::from_ref(p))
}

/// Trace of a block-diagonal matrix of projections over the relation. Each
/// diagonal entry must itself be a projection; traces add.
pub fn trace_phi_amplified(
    fs: &FiberedSet,
    phi: &Section,
    diagonal: &[ChainFunction],
) -> Result<ChainFunction> {
    if diagonal.is_empty() {
        return Err(Error::Precondition("empty matrix of projections".into()));
    }
    let ys = fs.sorted_y();
    let mut totals = vec![Int::zero(); ys.len()];
    for (i, p) in diagonal.iter().enumerate() {
        let label = format!("diagonal entry {}", i);
        for (slot, t) in block_traces(fs, &label, p)?.into_iter().enumerate() {
            totals[slot] += t;
        }
    }
    let mut values = BTreeMap::new();
    for (y, t) in ys.iter().zip(totals) {
        if !t.is_zero() {
            values.insert(vec![phi.phi[y].clone()], t);
        }
    }
    ChainFunction::new(0, values)
}

/// Two projections are equivalent exactly when their block traces agree.
pub fn projection_equiv(fs: &FiberedSet, p: &ChainFunction, q: &ChainFunction) -> Result<bool> {
    let tp = block_traces(fs, "first argument", p)?;
    let tq = block_traces(fs, "second argument", q)?;
    Ok(tp == tq)
}

/// The diagonal indicator of a point set: sum of delta_(x,x) over x in V.
pub fn diagonal_indicator(points: &[String]) -> ChainFunction {
    let mut values = BTreeMap::new();
    for p in points {
        values.insert(vec![p.clone(), p.clone()], int(1));
    }
    ChainFunction { level: 1, values }
}
