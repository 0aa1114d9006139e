use super::matrix::IntMatrix;
use super::rational::Int;
use num::{Integer, One, Signed, Zero};

/// Smith normal form data: `u * m * v = d` with `u`, `v` unimodular and `d`
/// diagonal, nonnegative, each entry dividing the next. `d` is unique.
#[derive(Clone, Debug)]
pub struct SnfResult {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
}

impl SnfResult {
    /// Number of nonzero diagonal entries.
    pub fn rank(&self) -> usize {
        let n = self.d.rows().min(self.d.cols());
        (0..n).filter(|&i| !self.d.get(i, i).is_zero()).count()
    }

    pub fn diagonal(&self) -> Vec<Int> {
        let n = self.d.rows().min(self.d.cols());
        (0..n).map(|i| self.d.get(i, i).clone()).collect()
    }
}

/// Free rank and torsion divisors of a finitely presented abelian group,
/// with an optional positive-cone description (generator classes) attached
/// by homology computations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct H0Presentation {
    pub free_rank: usize,
    pub torsion: Vec<Int>,
    pub positive_cone: Option<Vec<Vec<Int>>>,
}

/// Quotient q with |a - q*p| <= |p|/2 (nearest multiple of p).
fn nearest_quotient(a: &Int, p: &Int) -> Int {
    let pa = p.abs();
    let mut q0 = a.div_floor(&pa);
    let r0 = a - &q0 * &pa;
    if &r0 * 2 > pa {
        q0 += 1;
    }
    if p.is_negative() {
        -q0
    } else {
        q0
    }
}

/// Smallest nonzero |entry| in the submatrix at (t.., t..); ties broken by
/// lowest (row, col) in row-major order.
fn pivot_position(d: &IntMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for r in t..d.rows() {
        for c in t..d.cols() {
            let e = d.get(r, c);
            if e.is_zero() {
                continue;
            }
            match best {
                Some((br, bc)) if d.get(br, bc).abs() <= e.abs() => {}
                _ => best = Some((r, c)),
            }
        }
    }
    best
}

/// Smith normal form of any integer matrix, including empty shapes.
/// Deterministic: pivot selection by smallest nonzero absolute value with
/// row-major tie breaking.
pub fn snf(m: &IntMatrix) -> SnfResult {
    let rows = m.rows();
    let cols = m.cols();
    let mut d = m.clone();
    let mut u = IntMatrix::identity(rows);
    let mut v = IntMatrix::identity(cols);

    let mut t = 0;
    while t < rows.min(cols) {
        let Some((pi, pj)) = pivot_position(&d, t) else {
            break;
        };
        d.swap_rows(t, pi);
        u.swap_rows(t, pi);
        d.swap_cols(t, pj);
        v.swap_cols(t, pj);

        'reduce: loop {
            // Clear column t below the pivot. A nonzero remainder is
            // strictly smaller than the pivot and becomes the new pivot.
            let mut r = t + 1;
            while r < rows {
                if d.get(r, t).is_zero() {
                    r += 1;
                    continue;
                }
                let q = nearest_quotient(d.get(r, t), d.get(t, t));
                d.row_sub_mul(r, t, &q);
                u.row_sub_mul(r, t, &q);
                if !d.get(r, t).is_zero() {
                    d.swap_rows(t, r);
                    u.swap_rows(t, r);
                    // Restart: the pivot changed.
                    r = t + 1;
                    continue;
                }
                r += 1;
            }
            // Clear row t right of the pivot.
            let mut dirty = false;
            let mut c = t + 1;
            while c < cols {
                if d.get(t, c).is_zero() {
                    c += 1;
                    continue;
                }
                let q = nearest_quotient(d.get(t, c), d.get(t, t));
                d.col_sub_mul(c, t, &q);
                v.col_sub_mul(c, t, &q);
                if !d.get(t, c).is_zero() {
                    d.swap_cols(t, c);
                    v.swap_cols(t, c);
                    // Column swap may reintroduce entries below the pivot.
                    dirty = true;
                    c = t + 1;
                    continue;
                }
                c += 1;
            }
            if dirty {
                continue 'reduce;
            }
            // Divisibility: the pivot must divide the remaining submatrix.
            let pivot = d.get(t, t).clone();
            let bad = (t + 1..rows)
                .flat_map(|r| (t + 1..cols).map(move |c| (r, c)))
                .find(|&(r, c)| !(d.get(r, c) % &pivot).is_zero());
            match bad {
                Some((r, _)) => {
                    d.row_add(t, r);
                    u.row_add(t, r);
                }
                None => break,
            }
        }

        if d.get(t, t).is_negative() {
            d.negate_row(t);
            u.negate_row(t);
        }
        t += 1;
    }
    SnfResult { u, d, v }
}

/// Basis of the integer kernel lattice of `m`, one vector per column beyond
/// the rank, read off the column transform. Each vector is normalized so
/// its first nonzero entry is positive; the basis is saturated (a direct
/// summand of the ambient lattice).
pub fn kernel_basis(m: &IntMatrix) -> Vec<Vec<Int>> {
    let s = snf(m);
    let rank = s.rank();
    (rank..m.cols())
        .map(|j| {
            let mut col: Vec<Int> = (0..m.cols()).map(|i| s.v.get(i, j).clone()).collect();
            if let Some(first) = col.iter().find(|x| !x.is_zero()) {
                if first.is_negative() {
                    for x in &mut col {
                        *x = -x.clone();
                    }
                }
            }
            col
        })
        .collect()
}

/// Cokernel of `m` acting on column vectors: free rank `rows - rank` and the
/// diagonal entries exceeding one as torsion divisors. The positive cone is
/// not part of a bare cokernel.
pub fn cokernel_presentation(m: &IntMatrix) -> H0Presentation {
    let s = snf(m);
    let rank = s.rank();
    let torsion: Vec<Int> = s
        .diagonal()
        .into_iter()
        .filter(|d| !d.is_zero() && !d.is_one())
        .collect();
    H0Presentation {
        free_rank: m.rows() - rank,
        torsion,
        positive_cone: None,
    }
}

/// One integer solution x of m*x = b, when it exists.
pub fn solve_integer(m: &IntMatrix, b: &[Int]) -> Option<Vec<Int>> {
    if b.len() != m.rows() {
        return None;
    }
    let s = snf(m);
    let rank = s.rank();
    // u*m*v = d, so m*x = b iff d*w = u*b with x = v*w.
    let ub = s.u.mul_vec(b).ok()?;
    let mut w = vec![Int::zero(); m.cols()];
    for i in 0..m.rows() {
        if i < rank {
            let di = s.d.get(i, i);
            let (q, r) = ub[i].div_rem(di);
            if !r.is_zero() {
                return None;
            }
            w[i] = q;
        } else if !ub[i].is_zero() {
            return None;
        }
    }
    s.v.mul_vec(&w).ok()
}
