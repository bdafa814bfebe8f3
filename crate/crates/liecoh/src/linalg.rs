//! Exact linear algebra over the scalar field.
//!
//! Elimination is fraction-free in the usual integer-preserving sense: rows
//! are combined by `piv * r_j - e * r_i` and the content (rational gcd over
//! all coefficients) is stripped after each update, which keeps coefficient
//! growth in check. Pivots are chosen per column among the smallest entries,
//! ties broken by row index, so all outputs are deterministic.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

// ---------------------------------------------------------------------------
// Dense vectors

pub fn zero_vec(n: usize) -> Vec<Scalar> {
    vec![Scalar::zero(); n]
}

pub fn is_zero_vec(v: &[Scalar]) -> bool {
    v.iter().all(|x| x.is_zero())
}

pub fn add_vec(a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn sub_vec(a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn scale_vec(a: &[Scalar], c: &Scalar) -> Vec<Scalar> {
    a.iter().map(|x| x * c).collect()
}

pub fn axpy(acc: &mut [Scalar], c: &Scalar, v: &[Scalar]) {
    assert_eq!(acc.len(), v.len());
    if c.is_zero() {
        return;
    }
    for (a, x) in acc.iter_mut().zip(v) {
        *a += &(c * x);
    }
}

pub fn dot(a: &[Scalar], b: &[Scalar]) -> Scalar {
    assert_eq!(a.len(), b.len());
    let mut s = Scalar::zero();
    for (x, y) in a.iter().zip(b) {
        if !x.is_zero() && !y.is_zero() {
            s += &(x * y);
        }
    }
    s
}

// ---------------------------------------------------------------------------
// Dense matrices (small, used for module actions and automorphisms)

#[derive(Clone, PartialEq, Eq)]
pub struct Mat {
    pub rows: usize,
    pub cols: usize,
    data: Vec<Scalar>,
}

impl Mat {
    pub fn zero(rows: usize, cols: usize) -> Self {
        Mat { rows, cols, data: vec![Scalar::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Mat::zero(n, n);
        for i in 0..n {
            m.set(i, i, Scalar::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Scalar>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            data.extend(row);
        }
        Mat { rows: r, cols: c, data }
    }

    pub fn get(&self, r: usize, c: usize) -> &Scalar {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Scalar) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Scalar] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn apply(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(v.len(), self.cols, "matrix-vector shape mismatch");
        (0..self.rows).map(|r| dot(self.row(r), v)).collect()
    }

    pub fn matmul(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.rows, "matrix product shape mismatch");
        let mut out = Mat::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let v = out.get(i, j) + &(a * other.get(k, j));
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn add(&self, other: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&other.data) {
            *a += b;
        }
        out
    }

    pub fn sub(&self, other: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&other.data) {
            *a -= b;
        }
        out
    }

    pub fn scale(&self, c: &Scalar) -> Mat {
        let mut out = self.clone();
        for a in out.data.iter_mut() {
            *a = &*a * c;
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols && *self == Mat::identity(self.rows)
    }

    pub fn pow(&self, e: u32) -> Mat {
        assert_eq!(self.rows, self.cols);
        let mut acc = Mat::identity(self.rows);
        for _ in 0..e {
            acc = acc.matmul(self);
        }
        acc
    }

    /// Inverse via solving against the identity; None when singular.
    pub fn inverse(&self) -> Option<Mat> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let sp = SparseMatrix::from_dense_rows(
            (0..n).map(|r| self.row(r).to_vec()).collect(),
            n,
        );
        let mut cols = Vec::with_capacity(n);
        for j in 0..n {
            let mut e = zero_vec(n);
            e[j] = Scalar::one();
            match solve(&sp, &e).ok()? {
                SolveOutcome::Solution(x) => cols.push(x),
                SolveOutcome::Infeasible { .. } => return None,
            }
        }
        let mut inv = Mat::zero(n, n);
        for (j, col) in cols.iter().enumerate() {
            for i in 0..n {
                inv.set(i, j, col[i].clone());
            }
        }
        Some(inv)
    }
}

impl std::fmt::Debug for Mat {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "Mat {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            writeln!(
                f,
                "  {}",
                self.row(r).iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")
            )?;
        }
        write!(f, "]")
    }
}

// ---------------------------------------------------------------------------
// Sparse matrices and elimination

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseMatrix {
    pub rows: usize,
    pub cols: usize,
    entries: BTreeMap<(usize, usize), Scalar>,
}

impl SparseMatrix {
    pub fn new(rows: usize, cols: usize) -> Self {
        SparseMatrix { rows, cols, entries: BTreeMap::new() }
    }

    /// Accumulate into an entry; duplicate triplets are merged here so the
    /// no-duplicates invariant holds by construction.
    pub fn add_entry(&mut self, r: usize, c: usize, v: &Scalar) {
        assert!(r < self.rows && c < self.cols, "index out of range");
        if v.is_zero() {
            return;
        }
        let slot = self.entries.entry((r, c)).or_insert_with(Scalar::zero);
        *slot += v;
        if slot.is_zero() {
            self.entries.remove(&(r, c));
        }
    }

    pub fn from_dense_rows(rows: Vec<Vec<Scalar>>, cols: usize) -> Self {
        let mut m = SparseMatrix::new(rows.len(), cols);
        for (r, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), cols, "ragged rows");
            for (c, v) in row.iter().enumerate() {
                m.add_entry(r, c, v);
            }
        }
        m
    }

    /// Columns of the matrix given as a list of column vectors.
    pub fn from_columns(cols: &[Vec<Scalar>], rows: usize) -> Self {
        let mut m = SparseMatrix::new(rows, cols.len());
        for (c, col) in cols.iter().enumerate() {
            assert_eq!(col.len(), rows, "column length mismatch");
            for (r, v) in col.iter().enumerate() {
                m.add_entry(r, c, v);
            }
        }
        m
    }

    pub fn entries(&self) -> impl Iterator<Item = (&(usize, usize), &Scalar)> {
        self.entries.iter()
    }

    pub fn to_dense_rows(&self) -> Vec<Vec<Scalar>> {
        let mut rows = vec![zero_vec(self.cols); self.rows];
        for (&(r, c), v) in &self.entries {
            rows[r][c] = v.clone();
        }
        rows
    }

    pub fn apply(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(v.len(), self.cols, "shape mismatch");
        let mut out = zero_vec(self.rows);
        for (&(r, c), a) in &self.entries {
            if !v[c].is_zero() {
                out[r] += &(a * &v[c]);
            }
        }
        out
    }

    /// y * A for a row vector y.
    pub fn apply_left(&self, y: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(y.len(), self.rows, "shape mismatch");
        let mut out = zero_vec(self.cols);
        for (&(r, c), a) in &self.entries {
            if !y[r].is_zero() {
                out[c] += &(a * &y[r]);
            }
        }
        out
    }
}

/// Strip the rational content from a row (gcd of all numerators over lcm of
/// all denominators across every cyclotomic coefficient).
fn strip_content(row: &mut [Scalar]) {
    let mut num_gcd = BigInt::zero();
    let mut den_lcm = BigInt::one();
    for s in row.iter() {
        for c in s.coeffs() {
            if !c.is_zero() {
                num_gcd = num_gcd.gcd(&c.numer().abs());
                den_lcm = den_lcm.lcm(c.denom());
            }
        }
    }
    if num_gcd.is_zero() || (num_gcd.is_one() && den_lcm.is_one()) {
        return;
    }
    let factor = Scalar::from_rational(BigRational::new(den_lcm, num_gcd));
    for s in row.iter_mut() {
        *s = &*s * &factor;
    }
}

struct Echelon {
    rows: Vec<Vec<Scalar>>,
    /// Transform T with T * input = rows, when tracking was requested.
    transform: Option<Vec<Vec<Scalar>>>,
    /// (row, col) of each pivot, in increasing column order; pivots are 1.
    pivots: Vec<(usize, usize)>,
}

/// Reduced row echelon form with optional transform tracking.
fn rref(mut rows: Vec<Vec<Scalar>>, track: bool) -> Echelon {
    let nrows = rows.len();
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut transform = if track {
        Some((0..nrows).map(|i| {
            let mut e = zero_vec(nrows);
            e[i] = Scalar::one();
            e
        }).collect::<Vec<_>>())
    } else {
        None
    };
    let mut pivots = Vec::new();
    let mut next = 0usize;
    for col in 0..ncols {
        // Smallest nonzero candidate entry wins, ties by row index.
        let mut best: Option<(u64, usize)> = None;
        for r in next..nrows {
            if !rows[r][col].is_zero() {
                let cx = rows[r][col].complexity();
                if best.map_or(true, |(bc, _)| cx < bc) {
                    best = Some((cx, r));
                }
            }
        }
        let Some((_, pr)) = best else { continue };
        rows.swap(next, pr);
        if let Some(t) = transform.as_mut() {
            t.swap(next, pr);
        }
        let piv = rows[next][col].clone();
        for r in next + 1..nrows {
            if rows[r][col].is_zero() {
                continue;
            }
            let e = rows[r][col].clone();
            // Fraction-free update r <- piv*r - e*pivrow, then content strip.
            for c in 0..ncols {
                rows[r][c] = &(&piv * &rows[r][c]) - &(&e * &rows[next][c]);
            }
            if let Some(t) = transform.as_mut() {
                for c in 0..nrows {
                    t[r][c] = &(&piv * &t[r][c]) - &(&e * &t[next][c]);
                }
                // Content is computed jointly so T * input = rows stays exact.
                let mut joined = rows[r].clone();
                joined.extend_from_slice(&t[r]);
                strip_content(&mut joined);
                let (a, b) = joined.split_at(ncols);
                rows[r] = a.to_vec();
                t[r] = b.to_vec();
            } else {
                strip_content(&mut rows[r]);
            }
        }
        pivots.push((next, col));
        next += 1;
        if next == nrows {
            break;
        }
    }
    // Normalize pivots to 1 and clear above.
    for &(pr, pc) in pivots.iter() {
        let inv = rows[pr][pc].inv();
        for c in 0..ncols {
            rows[pr][c] = &rows[pr][c] * &inv;
        }
        if let Some(t) = transform.as_mut() {
            for c in 0..nrows {
                t[pr][c] = &t[pr][c] * &inv;
            }
        }
    }
    for &(pr, pc) in pivots.iter().rev() {
        for r in 0..pr {
            if rows[r][pc].is_zero() {
                continue;
            }
            let e = rows[r][pc].clone();
            for c in 0..ncols {
                let d = &e * &rows[pr][c];
                rows[r][c] = &rows[r][c] - &d;
            }
            if let Some(t) = transform.as_mut() {
                for c in 0..nrows {
                    let d = &e * &t[pr][c];
                    t[r][c] = &t[r][c] - &d;
                }
            }
        }
    }
    Echelon { rows, transform, pivots }
}

pub fn rank(a: &SparseMatrix) -> usize {
    rref(a.to_dense_rows(), false).pivots.len()
}

/// Reduced row echelon form of a list of row vectors, with pivot positions.
/// Zero rows are dropped.
pub fn row_reduce(rows: Vec<Vec<Scalar>>) -> (Vec<Vec<Scalar>>, Vec<(usize, usize)>) {
    let ech = rref(rows, false);
    let keep = ech.pivots.len();
    (ech.rows.into_iter().take(keep).collect(), ech.pivots)
}

/// Basis of the right kernel, read off the reduced echelon form: one vector
/// per free column, in increasing column order.
pub fn kernel_basis(a: &SparseMatrix) -> Vec<Vec<Scalar>> {
    let ech = rref(a.to_dense_rows(), false);
    let pivot_cols: Vec<usize> = ech.pivots.iter().map(|&(_, c)| c).collect();
    let mut out = Vec::new();
    for f in 0..a.cols {
        if pivot_cols.contains(&f) {
            continue;
        }
        let mut v = zero_vec(a.cols);
        v[f] = Scalar::one();
        for &(pr, pc) in &ech.pivots {
            let c = &ech.rows[pr][f];
            if !c.is_zero() {
                v[pc] = -c;
            }
        }
        out.push(v);
    }
    out
}

/// Basis of the column space: the original columns sitting at pivot positions.
pub fn image_basis(a: &SparseMatrix) -> Vec<Vec<Scalar>> {
    let ech = rref(a.to_dense_rows(), false);
    let dense = a.to_dense_rows();
    ech.pivots
        .iter()
        .map(|&(_, c)| (0..a.rows).map(|r| dense[r][c].clone()).collect())
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SolveOutcome {
    Solution(Vec<Scalar>),
    /// Left-null certificate y with y*A = 0 and y*b != 0.
    Infeasible { certificate: Vec<Scalar> },
}

/// Solve A x = b exactly. Returns a particular solution (free variables 0) or
/// an infeasibility certificate, which is re-verified before being returned.
pub fn solve(a: &SparseMatrix, b: &[Scalar]) -> Result<SolveOutcome> {
    if b.len() != a.rows {
        return Err(Error::DimensionMismatch { expected: a.rows, got: b.len() });
    }
    let mut rows = a.to_dense_rows();
    for (row, bv) in rows.iter_mut().zip(b) {
        row.push(bv.clone());
    }
    let ech = rref(rows, true);
    let t = ech.transform.as_ref().unwrap();
    for &(pr, pc) in &ech.pivots {
        if pc == a.cols {
            // Pivot in the b column: inconsistent. The transform row is the
            // certificate.
            let y = t[pr].clone();
            debug_assert!(is_zero_vec(&a.apply_left(&y)));
            debug_assert!(!dot(&y, b).is_zero());
            return Ok(SolveOutcome::Infeasible { certificate: y });
        }
    }
    let mut x = zero_vec(a.cols);
    for &(pr, pc) in &ech.pivots {
        x[pc] = ech.rows[pr][a.cols].clone();
    }
    Ok(SolveOutcome::Solution(x))
}

/// Coordinates of v in the span of `basis` (vectors of equal length), if any.
pub fn coordinates_in_span(basis: &[Vec<Scalar>], v: &[Scalar]) -> Option<Vec<Scalar>> {
    if basis.is_empty() {
        return if is_zero_vec(v) { Some(Vec::new()) } else { None };
    }
    let m = SparseMatrix::from_columns(basis, v.len());
    match solve(&m, v).ok()? {
        SolveOutcome::Solution(x) => Some(x),
        SolveOutcome::Infeasible { .. } => None,
    }
}

pub fn span_rank(vectors: &[Vec<Scalar>], dim: usize) -> usize {
    if vectors.is_empty() {
        return 0;
    }
    rank(&SparseMatrix::from_columns(vectors, dim))
}

/// Exact subspace equality by double inclusion (rank of the joint span).
pub fn same_span(a: &[Vec<Scalar>], b: &[Vec<Scalar>], dim: usize) -> bool {
    let ra = span_rank(a, dim);
    let rb = span_rank(b, dim);
    if ra != rb {
        return false;
    }
    let mut joint = a.to_vec();
    joint.extend(b.to_vec());
    span_rank(&joint, dim) == ra
}

/// Indices of `candidates` whose classes extend `fixed` to a larger span,
/// scanning in order. Used to pick cohomology representatives complementary
/// to the coboundary space.
pub fn independent_over(
    fixed: &[Vec<Scalar>],
    candidates: &[Vec<Scalar>],
    dim: usize,
) -> Vec<usize> {
    let mut chosen: Vec<Vec<Scalar>> = fixed.to_vec();
    let mut r = span_rank(&chosen, dim);
    let mut out = Vec::new();
    for (i, c) in candidates.iter().enumerate() {
        chosen.push(c.clone());
        let r2 = span_rank(&chosen, dim);
        if r2 > r {
            out.push(i);
            r = r2;
        } else {
            chosen.pop();
        }
    }
    out
}
