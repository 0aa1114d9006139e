//! Finite windows into the path space of a graph and the groupoid
//! structure visible at that scale: the shift transfer on same-tail pairs,
//! skew elements graded by a shift count, the section-induced
//! factorization, and dimension-group elements over the transfer matrix.
//!
//! A window of length L holds every path e1..eL with s(e_i) = r(e_(i+1)).
//! The shift deletes the first edge, so a length-1 path contracts to its
//! source vertex. Two paths of equal length are related when they share
//! their attach vertex, the source of the last edge.

use crate::error::{Error, Result};
use crate::exactlin::Int;
use crate::graphmodel::{self, DirectedGraph, TransferMatrix};
use crate::guards;
use num::{Signed, Zero};
use std::collections::BTreeMap;

/// A finite path: either the empty path at a vertex or a nonempty edge
/// sequence.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Path {
    Vertex(String),
    Edges(Vec<String>),
}

impl Path {
    pub fn len(&self) -> usize {
        match self {
            Path::Vertex(_) => 0,
            Path::Edges(es) => es.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn edges(ids: &[&str]) -> Path {
        Path::Edges(ids.iter().map(|s| s.to_string()).collect())
    }

    pub fn validate(&self, g: &DirectedGraph) -> Result<()> {
        match self {
            Path::Vertex(v) => {
                if !g.vertices.contains(v) {
                    return Err(Error::Precondition(format!("unknown vertex {:?}", v)));
                }
            }
            Path::Edges(es) => {
                if es.is_empty() {
                    return Err(Error::Precondition(
                        "edge path with no edges; use the vertex form".into(),
                    ));
                }
                for id in es {
                    if g.edge(id).is_none() {
                        return Err(Error::Precondition(format!("unknown edge {:?}", id)));
                    }
                }
                for w in es.windows(2) {
                    let a = g.edge(&w[0]).expect("validated");
                    let b = g.edge(&w[1]).expect("validated");
                    if a.src != b.rng {
                        return Err(Error::Precondition(format!(
                            "edges {:?}, {:?} do not compose",
                            w[0], w[1]
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Source of the last edge; the path's tail starts here.
    pub fn attach(&self, g: &DirectedGraph) -> Result<String> {
        match self {
            Path::Vertex(v) => Ok(v.clone()),
            Path::Edges(es) => Ok(g
                .edge(es.last().expect("nonempty"))
                .ok_or_else(|| Error::Precondition("unknown edge".into()))?
                .src
                .clone()),
        }
    }

    /// Range of the first edge; prepending attaches here.
    pub fn range(&self, g: &DirectedGraph) -> Result<String> {
        match self {
            Path::Vertex(v) => Ok(v.clone()),
            Path::Edges(es) => Ok(g
                .edge(&es[0])
                .ok_or_else(|| Error::Precondition("unknown edge".into()))?
                .rng
                .clone()),
        }
    }

    /// Deletes the first j edges; contracting past the window is a
    /// boundary error.
    pub fn drop_first(&self, g: &DirectedGraph, j: usize) -> Result<Path> {
        if j == 0 {
            return Ok(self.clone());
        }
        match self {
            Path::Vertex(_) => Err(Error::Boundary(
                "shift applied to an empty path".into(),
            )),
            Path::Edges(es) => {
                if j > es.len() {
                    return Err(Error::Boundary(format!(
                        "shift by {} exceeds path length {}",
                        j,
                        es.len()
                    )));
                }
                if j == es.len() {
                    Ok(Path::Vertex(self.attach(g)?))
                } else {
                    Ok(Path::Edges(es[j..].to_vec()))
                }
            }
        }
    }

    fn prepend(&self, g: &DirectedGraph, edge_id: &str) -> Result<Path> {
        let e = g
            .edge(edge_id)
            .ok_or_else(|| Error::Precondition(format!("unknown edge {:?}", edge_id)))?;
        if e.src != self.range(g)? {
            return Err(Error::Precondition(format!(
                "edge {:?} does not prepend to this path",
                edge_id
            )));
        }
        let mut es = vec![edge_id.to_string()];
        if let Path::Edges(rest) = self {
            es.extend(rest.iter().cloned());
        }
        Ok(Path::Edges(es))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PathWindow {
    pub graph: DirectedGraph,
    pub length: usize,
    pub paths: Vec<Vec<String>>,
}

/// All length-L paths in lexicographic edge-id order. L must be at least 1.
pub fn window_paths(g: &DirectedGraph, length: usize) -> Result<PathWindow> {
    if length == 0 {
        return Err(Error::Precondition("window length must be at least 1".into()));
    }
    guards::check(
        "window enumeration",
        graphmodel::path_count(g, length),
        guards::WINDOW_PATHS,
    )?;
    let mut paths = Vec::new();
    let mut prefix: Vec<String> = Vec::new();
    extend_paths(g, length, &mut prefix, &mut paths, None);
    Ok(PathWindow { graph: g.clone(), length, paths })
}

/// Depth-first extension appending edges whose range equals the running
/// source; `require_range` pins the range of the first edge when set.
fn extend_paths(
    g: &DirectedGraph,
    remaining: usize,
    prefix: &mut Vec<String>,
    out: &mut Vec<Vec<String>>,
    require_range: Option<&str>,
) {
    if remaining == 0 {
        out.push(prefix.clone());
        return;
    }
    let candidates: Vec<&graphmodel::Edge> = match prefix.last() {
        Some(last) => g.in_edges(&g.edge(last).expect("validated prefix").src),
        None => match require_range {
            Some(v) => {
                let mut es: Vec<_> = g.edges.iter().filter(|e| e.rng == v).collect();
                es.sort_by(|a, b| a.id.cmp(&b.id));
                es
            }
            None => {
                let mut es: Vec<_> = g.edges.iter().collect();
                es.sort_by(|a, b| a.id.cmp(&b.id));
                es
            }
        },
    };
    for e in candidates {
        prefix.push(e.id.clone());
        extend_paths(g, remaining - 1, prefix, out, require_range);
        prefix.pop();
    }
}

/// All length-k continuations appendable after attach vertex v: sequences
/// z1..zk with r(z1) = v and r(z_(i+1)) = s(z_i).
pub fn tails(g: &DirectedGraph, v: &str, k: usize) -> Vec<Vec<String>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    let mut prefix = Vec::new();
    extend_paths(g, k, &mut prefix, &mut out, Some(v));
    out
}

/// Integer function on same-attach pairs of equal-length paths.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WindowFunction {
    pub length: usize,
    pub values: BTreeMap<(Path, Path), Int>,
}

impl WindowFunction {
    pub fn new(g: &DirectedGraph, length: usize, values: BTreeMap<(Path, Path), Int>) -> Result<Self> {
        for (u, v) in values.keys() {
            u.validate(g)?;
            v.validate(g)?;
            if u.len() != length || v.len() != length {
                return Err(Error::Dimension(format!(
                    "support pair at lengths {}/{} in a length-{} window",
                    u.len(),
                    v.len(),
                    length
                )));
            }
            if u.attach(g)? != v.attach(g)? {
                return Err(Error::Precondition(format!(
                    "pair {:?}, {:?} does not share its tail",
                    u, v
                )));
            }
        }
        let values = values.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        Ok(WindowFunction { length, values })
    }

    pub fn delta(g: &DirectedGraph, u: Path, v: Path) -> Result<Self> {
        let length = u.len();
        let mut values = BTreeMap::new();
        values.insert((u, v), crate::exactlin::int(1));
        WindowFunction::new(g, length, values)
    }

    fn add_term(&mut self, key: (Path, Path), coeff: Int) {
        if coeff.is_zero() {
            return;
        }
        let entry = self.values.entry(key.clone()).or_insert_with(Int::zero);
        *entry += coeff;
        if entry.is_zero() {
            self.values.remove(&key);
        }
    }
}

/// Level-0 integer function on window paths.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PathFunction {
    pub length: usize,
    pub values: BTreeMap<Path, Int>,
}

impl PathFunction {
    pub fn new(g: &DirectedGraph, length: usize, values: BTreeMap<Path, Int>) -> Result<Self> {
        for p in values.keys() {
            p.validate(g)?;
            if p.len() != length {
                return Err(Error::Dimension(format!(
                    "support path of length {} in a length-{} window",
                    p.len(),
                    length
                )));
            }
        }
        let values = values.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        Ok(PathFunction { length, values })
    }

    pub fn delta(g: &DirectedGraph, p: Path) -> Result<Self> {
        let length = p.len();
        let mut values = BTreeMap::new();
        values.insert(p, crate::exactlin::int(1));
        PathFunction::new(g, length, values)
    }

    fn add_term(&mut self, key: Path, coeff: Int) {
        if coeff.is_zero() {
            return;
        }
        let entry = self.values.entry(key.clone()).or_insert_with(Int::zero);
        *entry += coeff;
        if entry.is_zero() {
            self.values.remove(&key);
        }
    }

    /// Sums per attach vertex, in sorted vertex order.
    pub fn attach_sums(&self, g: &DirectedGraph) -> Result<Vec<Int>> {
        let idx = g.vertex_index();
        let mut out = vec![Int::zero(); idx.len()];
        for (p, c) in &self.values {
            out[idx[&p.attach(g)?]] += c;
        }
        Ok(out)
    }
}

/// Pushforward along the shift: both paths of every support pair lose
/// their first edge. Level 1 contracts to the diagonal on vertices.
pub fn relation_transfer(g: &DirectedGraph, f: &WindowFunction) -> Result<WindowFunction> {
    if f.length == 0 {
        return Err(Error::Boundary(
            "relation transfer needs pairs of length at least 1".into(),
        ));
    }
    let mut out = WindowFunction { length: f.length - 1, values: BTreeMap::new() };
    for ((u, v), c) in &f.values {
        let key = (u.drop_first(g, 1)?, v.drop_first(g, 1)?);
        out.add_term(key, c.clone());
    }
    Ok(out)
}

/// Refines every support pair by all common length-k tail extensions.
/// This is the window form of the inclusion into the next relation level.
pub fn refine_pairs(g: &DirectedGraph, f: &WindowFunction, k: usize) -> Result<WindowFunction> {
    let mut budget: u128 = 0;
    let mut out = WindowFunction { length: f.length + k, values: BTreeMap::new() };
    for ((u, v), c) in &f.values {
        let at = u.attach(g)?;
        let ts = tails(g, &at, k);
        budget = budget.saturating_add(ts.len() as u128);
        guards::check("window refinement", budget, guards::WINDOW_PATHS)?;
        for z in ts {
            let ext = |p: &Path| -> Path {
                let mut es: Vec<String> = match p {
                    Path::Vertex(_) => Vec::new(),
                    Path::Edges(es) => es.clone(),
                };
                es.extend(z.iter().cloned());
                if es.is_empty() {
                    p.clone()
                } else {
                    Path::Edges(es)
                }
            };
            out.add_term((ext(u), ext(v)), c.clone());
        }
    }
    Ok(out)
}

/// Refines a level-0 function by all length-k tail extensions.
pub fn refine_points(g: &DirectedGraph, f: &PathFunction, k: usize) -> Result<PathFunction> {
    let mut budget: u128 = 0;
    let mut out = PathFunction { length: f.length + k, values: BTreeMap::new() };
    for (p, c) in &f.values {
        let at = p.attach(g)?;
        let ts = tails(g, &at, k);
        budget = budget.saturating_add(ts.len() as u128);
        guards::check("window refinement", budget, guards::WINDOW_PATHS)?;
        for z in ts {
            let mut es: Vec<String> = match p {
                Path::Vertex(_) => Vec::new(),
                Path::Edges(es) => es.clone(),
            };
            es.extend(z.iter().cloned());
            let key = if es.is_empty() { p.clone() } else { Path::Edges(es) };
            out.add_term(key, c.clone());
        }
    }
    Ok(out)
}

/// Difference of the two endpoint pushforwards of a pair function.
pub fn window_boundary(f: &WindowFunction) -> Result<PathFunction> {
    let mut out = PathFunction { length: f.length, values: BTreeMap::new() };
    for ((u, v), c) in &f.values {
        out.add_term(v.clone(), c.clone());
        out.add_term(u.clone(), -c.clone());
    }
    Ok(out)
}

/// A preferred outgoing edge per vertex; prepending it is a right inverse
/// of the shift.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphSection {
    pub preferred: BTreeMap<String, String>,
}

impl GraphSection {
    pub fn new(g: &DirectedGraph, preferred: BTreeMap<String, String>) -> Result<Self> {
        for v in &g.vertices {
            match preferred.get(v) {
                None => {
                    return Err(Error::Precondition(format!(
                        "section undefined at vertex {:?}",
                        v
                    )));
                }
                Some(id) => match g.edge(id) {
                    Some(e) if e.src == *v => {}
                    _ => {
                        return Err(Error::Precondition(format!(
                            "section at {:?} must pick an outgoing edge",
                            v
                        )));
                    }
                },
            }
        }
        if preferred.len() != g.vertices.len() {
            return Err(Error::Precondition("section defined outside the vertex set".into()));
        }
        Ok(GraphSection { preferred })
    }

    /// phi^t: prepend the preferred edge t times; negative t shifts instead.
    pub fn power(&self, g: &DirectedGraph, p: &Path, t: i64) -> Result<Path> {
        if t < 0 {
            let j = usize::try_from(-t).expect("shift count fits usize");
            return p.drop_first(g, j);
        }
        let mut cur = p.clone();
        for _ in 0..t {
            let v = cur.range(g)?;
            cur = cur.prepend(g, &self.preferred[&v])?;
        }
        Ok(cur)
    }
}

/// All preferred-edge sections, ordered by ascending edge choice per
/// sorted vertex.
pub fn enumerate_graph_sections(g: &DirectedGraph) -> Result<Vec<GraphSection>> {
    graphmodel::require_admissible(g)?;
    let vs = g.sorted_vertices();
    let mut total: u128 = 1;
    for v in &vs {
        total = total.saturating_mul(g.out_edges(v).len() as u128);
    }
    guards::check("graph section enumeration", total, guards::SECTION_PRODUCT)?;

    let mut sections = vec![BTreeMap::new()];
    for v in &vs {
        let outs = g.out_edges(v);
        let mut next = Vec::with_capacity(sections.len() * outs.len());
        for partial in &sections {
            for e in &outs {
                let mut m: BTreeMap<String, String> = partial.clone();
                m.insert(v.clone(), e.id.clone());
                next.push(m);
            }
        }
        sections = next;
    }
    sections
        .into_iter()
        .map(|preferred| GraphSection::new(g, preferred))
        .collect()
}

/// An element of the skew picture: paths x, y with the grading k equal to
/// their length difference, and a translation coordinate a.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct SkewElement {
    pub x: Path,
    pub k: i64,
    pub y: Path,
    pub a: i64,
}

impl SkewElement {
    pub fn new(g: &DirectedGraph, x: Path, y: Path, a: i64) -> Result<Self> {
        x.validate(g)?;
        y.validate(g)?;
        if x.attach(g)? != y.attach(g)? {
            return Err(Error::Precondition(
                "skew element legs do not share their tail".into(),
            ));
        }
        let k = x.len() as i64 - y.len() as i64;
        Ok(SkewElement { x, k, y, a })
    }
}

/// Integer function on skew elements with translation coordinate confined
/// to [-window, window].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SkewFunction {
    pub window: i64,
    pub values: BTreeMap<SkewElement, Int>,
}

impl SkewFunction {
    pub fn new(g: &DirectedGraph, window: i64, values: BTreeMap<SkewElement, Int>) -> Result<Self> {
        if window < 0 {
            return Err(Error::Precondition("window bound must be nonnegative".into()));
        }
        for el in values.keys() {
            SkewElement::new(g, el.x.clone(), el.y.clone(), el.a)?;
            if el.k != el.x.len() as i64 - el.y.len() as i64 {
                return Err(Error::Precondition("skew grading does not match leg lengths".into()));
            }
            if el.a.abs() > window {
                return Err(Error::Boundary(format!(
                    "translation coordinate {} outside window [-{}, {}]",
                    el.a, window, window
                )));
            }
        }
        let values = values.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        Ok(SkewFunction { window, values })
    }
}

/// The shift automorphism of the skew picture: translates the a-coordinate
/// down by one. Leaving the window is a boundary error, never truncation.
pub fn beta_shift(f: &SkewFunction) -> Result<SkewFunction> {
    let mut values = BTreeMap::new();
    for (el, c) in &f.values {
        let a = el.a - 1;
        if a < -f.window {
            return Err(Error::Boundary(format!(
                "shift moves support to {} below window -{}",
                a, f.window
            )));
        }
        let mut moved = el.clone();
        moved.a = a;
        values.insert(moved, c.clone());
    }
    Ok(SkewFunction { window: f.window, values })
}

/// Embeds a same-length pair into the skew picture at translation 0.
pub fn eta(g: &DirectedGraph, x: Path, y: Path) -> Result<SkewElement> {
    if x.len() != y.len() {
        return Err(Error::Precondition(
            "eta needs paths of equal length".into(),
        ));
    }
    SkewElement::new(g, x, y, 0)
}

/// Resolves a skew element to a same-tail pair by applying phi^a to the
/// left leg and phi^(a+k) to the right; negative powers shift.
pub fn rho_phi(
    g: &DirectedGraph,
    phi: &GraphSection,
    el: &SkewElement,
) -> Result<(Path, Path)> {
    let x = phi.power(g, &el.x, el.a)?;
    let y = phi.power(g, &el.y, el.a + el.k)?;
    if x.len() != y.len() || x.attach(g)? != y.attach(g)? {
        return Err(Error::Inconsistency(
            "resolved skew element is not a same-tail pair".into(),
        ));
    }
    Ok((x, y))
}

/// Checks the window square: pushing a level-0 function through the skew
/// picture (embed at translation 0, shift, resolve through the section)
/// must equal the direct transfer that sums over one-edge extensions.
/// The support must sit in a window of length at least 2 so the shifted
/// image stays inside a genuine window.
pub fn diagram_check(
    g: &DirectedGraph,
    phi: &GraphSection,
    f: &PathFunction,
) -> Result<bool> {
    if f.length < 2 {
        return Err(Error::Boundary(
            "diagram check needs windows of length at least 2".into(),
        ));
    }
    PathFunction::new(g, f.length, f.values.clone())?;

    // through the skew picture
    let mut values = BTreeMap::new();
    for (p, c) in &f.values {
        values.insert(eta(g, p.clone(), p.clone())?, c.clone());
    }
    let embedded = SkewFunction::new(g, 1, values)?;
    let shifted = beta_shift(&embedded)?;
    let mut lhs = PathFunction { length: f.length - 1, values: BTreeMap::new() };
    for (el, c) in &shifted.values {
        let (x, y) = rho_phi(g, phi, el)?;
        if x != y {
            return Err(Error::Inconsistency(
                "unit-space element resolved off the diagonal".into(),
            ));
        }
        lhs.add_term(x, c.clone());
    }

    // direct transfer: sum over one-edge backward extensions
    let shorter = window_paths(g, f.length - 1)?;
    let mut rhs = PathFunction { length: f.length - 1, values: BTreeMap::new() };
    for ids in &shorter.paths {
        let z = Path::Edges(ids.clone());
        let range = z.range(g)?;
        let mut total = Int::zero();
        for e in g.edges.iter().filter(|e| e.src == range) {
            let extended = z.prepend(g, &e.id)?;
            if let Some(c) = f.values.get(&extended) {
                total += c;
            }
        }
        if !total.is_zero() {
            rhs.add_term(z, total);
        }
    }

    Ok(lhs == rhs)
}

/// An element of the stationary inductive limit over the transfer matrix:
/// a vertex-indexed vector tagged with the level where it enters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DimensionGroupElement {
    pub level: usize,
    pub v: Vec<Int>,
}

impl DimensionGroupElement {
    pub fn new(level: usize, v: Vec<Int>) -> Self {
        DimensionGroupElement { level, v }
    }
}

fn check_dims(tm: &TransferMatrix, e: &DimensionGroupElement) -> Result<()> {
    if e.v.len() != tm.order.len() {
        return Err(Error::Dimension(format!(
            "element has {} coordinates, matrix has {}",
            e.v.len(),
            tm.order.len()
        )));
    }
    Ok(())
}

/// Equality in the limit: (n1, v1) and (n2, v2) agree exactly when pushing
/// the earlier one up to the later level gives vectors whose difference
/// dies under dim-many further applications. The kernel chain of an
/// integer matrix stabilizes within dim steps, so this decides equality at
/// every higher level at once.
pub fn dg_equal(
    e1: &DimensionGroupElement,
    e2: &DimensionGroupElement,
    tm: &TransferMatrix,
) -> Result<bool> {
    check_dims(tm, e1)?;
    check_dims(tm, e2)?;
    let (lo, hi) = if e1.level <= e2.level { (e1, e2) } else { (e2, e1) };
    let gap = u32::try_from(hi.level - lo.level)
        .map_err(|_| Error::Unsupported("level gap exceeds u32".into()))?;
    let lifted = graphmodel::transfer_apply(tm, &lo.v, gap)?;
    let diff: Vec<Int> = lifted
        .iter()
        .zip(&hi.v)
        .map(|(a, b)| a - b)
        .collect();
    let dim = u32::try_from(tm.order.len()).expect("vertex count fits u32");
    let settled = graphmodel::transfer_apply(tm, &diff, dim)?;
    Ok(settled.iter().all(Zero::is_zero))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Positivity {
    /// Certified by a nonnegative image within the search depth; holds the
    /// first such power.
    Positive(u32),
    /// The negated element certified positive and the class is nonzero.
    NotPositive,
    /// Neither sign certified within the search depth.
    Unknown(u32),
}

fn first_nonnegative(tm: &TransferMatrix, v: &[Int], depth: u32) -> Result<Option<u32>> {
    let mut cur = v.to_vec();
    for k in 0..=depth {
        if cur.iter().all(|c| !c.is_negative()) {
            return Ok(Some(k));
        }
        if k < depth {
            cur = tm.a.mul_vec(&cur)?;
        }
    }
    Ok(None)
}

/// Three-valued positivity in the limit order. Positive verdicts carry the
/// certifying power; a not-positive verdict needs the mirrored certificate
/// plus a nonzero class, and everything else stays unknown at the given
/// depth.
pub fn dg_positive(
    e: &DimensionGroupElement,
    tm: &TransferMatrix,
    depth: u32,
) -> Result<Positivity> {
    check_dims(tm, e)?;
    if let Some(k) = first_nonnegative(tm, &e.v, depth)? {
        return Ok(Positivity::Positive(k));
    }
    let negated: Vec<Int> = e.v.iter().map(|c| -c).collect();
    if first_nonnegative(tm, &negated, depth)?.is_some() {
        let dim = u32::try_from(tm.order.len()).expect("vertex count fits u32");
        let settled = graphmodel::transfer_apply(tm, &e.v, dim)?;
        if !settled.iter().all(Zero::is_zero) {
            return Ok(Positivity::NotPositive);
        }
    }
    Ok(Positivity::Unknown(depth))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::int;
    use crate::graphmodel::{adjacency_transfer, Edge};

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

    /// One vertex, two loops labelled 0 and 1.
    fn full_shift() -> DirectedGraph {
        graph(&["v"], &[("0", "v", "v"), ("1", "v", "v")])
    }

    fn entrance_graph() -> DirectedGraph {
        graph(
            &["v1", "v2"],
            &[("e1", "v1", "v1"), ("e2", "v2", "v1"), ("e3", "v2", "v2")],
        )
    }

    #[test]
    fn windows_enumerate_composable_sequences() {
        let w = window_paths(&full_shift(), 2).unwrap();
        assert_eq!(w.paths.len(), 4);
        assert_eq!(w.paths[0], vec!["0", "0"]);
        assert_eq!(w.paths[3], vec!["1", "1"]);

        let g = entrance_graph();
        let w = window_paths(&g, 2).unwrap();
        assert!(w.paths.contains(&vec!["e1".to_string(), "e1".to_string()]));
        assert!(w.paths.contains(&vec!["e2".to_string(), "e3".to_string()]));
        assert!(!w.paths.contains(&vec!["e1".to_string(), "e3".to_string()]));

        assert!(window_paths(&g, 0).is_err());
    }

    #[test]
    fn transfer_drops_the_first_edge() {
        let g = full_shift();
        let f = WindowFunction::delta(
            &g,
            Path::edges(&["0", "0"]),
            Path::edges(&["1", "0"]),
        )
        .unwrap();
        let t = relation_transfer(&g, &f).unwrap();
        let expect = WindowFunction::delta(&g, Path::edges(&["0"]), Path::edges(&["0"])).unwrap();
        assert_eq!(t, expect);

        // two pairs whose images split by second edge
        let mut f = f;
        f.add_term(
            (Path::edges(&["0", "1"]), Path::edges(&["1", "1"])),
            int(1),
        );
        let t = relation_transfer(&g, &f).unwrap();
        let mut expect = expect;
        expect.add_term((Path::edges(&["1"]), Path::edges(&["1"])), int(1));
        assert_eq!(t, expect);

        // level 1 contracts to the diagonal on vertices
        let f = WindowFunction::delta(&g, Path::edges(&["0"]), Path::edges(&["1"])).unwrap();
        let t = relation_transfer(&g, &f).unwrap();
        let expect = WindowFunction::delta(
            &g,
            Path::Vertex("v".into()),
            Path::Vertex("v".into()),
        )
        .unwrap();
        assert_eq!(t, expect);
    }

    #[test]
    fn mismatched_pairs_are_rejected() {
        let g = entrance_graph();
        // e1 attaches at v1, e3 attaches at v2
        assert!(WindowFunction::delta(&g, Path::edges(&["e1"]), Path::edges(&["e3"])).is_err());
        // e3 then e1 do not compose
        assert!(Path::edges(&["e3", "e1"]).validate(&g).is_err());
    }

    #[test]
    fn refinement_commutes_with_the_boundary() {
        let g = entrance_graph();
        let f = WindowFunction::delta(&g, Path::edges(&["e2"]), Path::edges(&["e3"])).unwrap();
        let refined = refine_pairs(&g, &f, 2).unwrap();
        assert!(refined.values.keys().all(|(u, v)| u.len() == 3 && v.len() == 3));

        let a = window_boundary(&refined).unwrap();
        let b = refine_points(&g, &window_boundary(&f).unwrap(), 2).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn sections_prepend_and_shift() {
        let g = full_shift();
        let phi = GraphSection::new(&g, [("v".to_string(), "0".to_string())].into()).unwrap();
        let x = Path::edges(&["1"]);
        assert_eq!(phi.power(&g, &x, 2).unwrap(), Path::edges(&["0", "0", "1"]));
        assert_eq!(phi.power(&g, &x, -1).unwrap(), Path::Vertex("v".into()));
        assert!(phi.power(&g, &x, -2).is_err());

        let sections = enumerate_graph_sections(&g).unwrap();
        assert_eq!(sections.len(), 2);

        let sections = enumerate_graph_sections(&entrance_graph()).unwrap();
        assert_eq!(sections.len(), 2); // v1 has one out-edge, v2 has two
    }

    #[test]
    fn skew_elements_track_grading_and_translation() {
        let g = full_shift();
        let el = SkewElement::new(&g, Path::edges(&["0", "1"]), Path::edges(&["1"]), 0).unwrap();
        assert_eq!(el.k, 1);

        let phi = GraphSection::new(&g, [("v".to_string(), "0".to_string())].into()).unwrap();
        let (x, y) = rho_phi(&g, &phi, &el).unwrap();
        assert_eq!(x, Path::edges(&["0", "1"]));
        assert_eq!(y, Path::edges(&["0", "1"]));

        // a = -1 shifts both legs
        let el = SkewElement::new(&g, Path::edges(&["0", "1"]), Path::edges(&["1", "1"]), -1).unwrap();
        let (x, y) = rho_phi(&g, &phi, &el).unwrap();
        assert_eq!(x, Path::edges(&["1"]));
        assert_eq!(y, Path::edges(&["1"]));

        // eta embeds at translation 0 and resolves to itself
        let e = eta(&g, Path::edges(&["0"]), Path::edges(&["1"])).unwrap();
        assert_eq!(e.a, 0);
        let (x, y) = rho_phi(&g, &phi, &e).unwrap();
        assert_eq!((x, y), (Path::edges(&["0"]), Path::edges(&["1"])));
    }

    #[test]
    fn shifting_past_the_window_is_an_error() {
        let g = full_shift();
        let el = eta(&g, Path::edges(&["0"]), Path::edges(&["0"])).unwrap();
        let mut values = BTreeMap::new();
        values.insert(el, int(1));
        let f = SkewFunction::new(&g, 0, values).unwrap();
        let err = beta_shift(&f).unwrap_err();
        assert!(matches!(err, Error::Boundary(_)));

        let f = SkewFunction {
            window: 1,
            values: f.values,
        };
        let shifted = beta_shift(&f).unwrap();
        assert!(shifted.values.keys().all(|e| e.a == -1));
        assert!(beta_shift(&shifted).is_err());
    }

    #[test]
    fn diagram_square_commutes_on_full_shift_windows() {
        let g = full_shift();
        let phi = GraphSection::new(&g, [("v".to_string(), "0".to_string())].into()).unwrap();
        let f = PathFunction::delta(&g, Path::edges(&["0", "0", "0"])).unwrap();
        assert!(diagram_check(&g, &phi, &f).unwrap());

        let short = PathFunction::delta(&g, Path::edges(&["0"])).unwrap();
        assert!(matches!(diagram_check(&g, &phi, &short), Err(Error::Boundary(_))));
    }

    #[test]
    fn limit_equality_follows_the_transfer_matrix() {
        let g = full_shift();
        let tm = adjacency_transfer(&g).unwrap();
        let e0 = DimensionGroupElement::new(0, vec![int(1)]);
        let e1 = DimensionGroupElement::new(1, vec![int(2)]);
        assert!(dg_equal(&e0, &e1, &tm).unwrap());
        let e1 = DimensionGroupElement::new(0, vec![int(2)]);
        assert!(!dg_equal(&e0, &e1, &tm).unwrap());
    }

    #[test]
    fn positivity_is_three_valued() {
        let g = entrance_graph();
        let tm = adjacency_transfer(&g).unwrap();
        let e = DimensionGroupElement::new(0, vec![int(1), int(0)]);
        assert_eq!(dg_positive(&e, &tm, 1).unwrap(), Positivity::Positive(0));

        let g = full_shift();
        let tm = adjacency_transfer(&g).unwrap();
        let e = DimensionGroupElement::new(0, vec![int(-1)]);
        assert_eq!(dg_positive(&e, &tm, 3).unwrap(), Positivity::NotPositive);

        let g = graph(
            &["v1", "v2"],
            &[("e1", "v1", "v2"), ("e2", "v2", "v1")],
        );
        let tm = adjacency_transfer(&g).unwrap();
        let e = DimensionGroupElement::new(0, vec![int(1), int(-1)]);
        assert_eq!(dg_positive(&e, &tm, 3).unwrap(), Positivity::Unknown(3));
    }
}
