//! Dense exact linear algebra over a finite field.
//!
//! Matrices carry their `FieldSpec` and store element codes row-major.
//! Everything here is plain Gaussian elimination; fields are tiny and the
//! point is exactness, not asymptotics.

use crate::error::{Error, Result};
use crate::field::FieldSpec;
use std::fmt;
use std::sync::Arc;

#[derive(Clone)]
pub struct Mat {
    spec: Arc<FieldSpec>,
    rows: usize,
    cols: usize,
    a: Vec<u64>,
}

impl PartialEq for Mat {
    fn eq(&self, other: &Self) -> bool {
        self.spec == other.spec
            && self.rows == other.rows
            && self.cols == other.cols
            && self.a == other.a
    }
}
impl Eq for Mat {}

impl fmt::Debug for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Mat {}x{} over {:?}", self.rows, self.cols, self.spec)?;
        for r in 0..self.rows {
            writeln!(f, "  {:?}", &self.a[r * self.cols..(r + 1) * self.cols])?;
        }
        Ok(())
    }
}

impl Mat {
    pub fn zero(spec: Arc<FieldSpec>, rows: usize, cols: usize) -> Self {
        Mat { spec, rows, cols, a: vec![0; rows * cols] }
    }

    pub fn identity(spec: Arc<FieldSpec>, n: usize) -> Self {
        let mut m = Self::zero(spec, n, n);
        for i in 0..n {
            m.a[i * n + i] = 1;
        }
        m
    }

    pub fn from_rows(spec: Arc<FieldSpec>, rows: Vec<Vec<u64>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |v| v.len());
        let mut a = Vec::with_capacity(r * c);
        for row in &rows {
            assert_eq!(row.len(), c);
            a.extend_from_slice(row);
        }
        Mat { spec, rows: r, cols: c, a }
    }

    pub fn from_fn(spec: Arc<FieldSpec>, rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> u64) -> Self {
        let mut m = Self::zero(spec, rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                m.a[r * cols + c] = f(r, c);
            }
        }
        m
    }

    pub fn spec(&self) -> &Arc<FieldSpec> {
        &self.spec
    }
    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u64 {
        self.a[r * self.cols + c]
    }
    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: u64) {
        self.a[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[u64] {
        &self.a[r * self.cols..(r + 1) * self.cols]
    }

    pub fn rows_vec(&self) -> Vec<Vec<u64>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn col(&self, c: usize) -> Vec<u64> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.a.iter().all(|&x| x == 0)
    }

    pub fn transpose(&self) -> Mat {
        let mut out = Mat::zero(self.spec.clone(), self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.a[c * self.rows + r] = self.get(r, c);
            }
        }
        out
    }

    pub fn add(&self, other: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let f = &self.spec;
        let a = self.a.iter().zip(&other.a).map(|(&x, &y)| f.add(x, y)).collect();
        Mat { spec: self.spec.clone(), rows: self.rows, cols: self.cols, a }
    }

    pub fn sub(&self, other: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let f = &self.spec;
        let a = self.a.iter().zip(&other.a).map(|(&x, &y)| f.sub(x, y)).collect();
        Mat { spec: self.spec.clone(), rows: self.rows, cols: self.cols, a }
    }

    pub fn scale(&self, s: u64) -> Mat {
        let f = &self.spec;
        let a = self.a.iter().map(|&x| f.mul(x, s)).collect();
        Mat { spec: self.spec.clone(), rows: self.rows, cols: self.cols, a }
    }

    pub fn mul(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.rows, "dimension mismatch in matrix product");
        let f = &self.spec;
        let mut out = Mat::zero(self.spec.clone(), self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let x = self.get(r, k);
                if x == 0 {
                    continue;
                }
                for c in 0..other.cols {
                    let y = other.get(k, c);
                    if y != 0 {
                        let idx = r * other.cols + c;
                        out.a[idx] = f.add(out.a[idx], f.mul(x, y));
                    }
                }
            }
        }
        out
    }

    /// Matrix-vector product (vectors are columns).
    pub fn apply(&self, v: &[u64]) -> Vec<u64> {
        assert_eq!(self.cols, v.len());
        let f = &self.spec;
        (0..self.rows)
            .map(|r| {
                let mut acc = 0u64;
                for c in 0..self.cols {
                    acc = f.add(acc, f.mul(self.get(r, c), v[c]));
                }
                acc
            })
            .collect()
    }

    /// Frobenius applied entrywise.
    pub fn frobenius(&self, t: u32) -> Mat {
        let f = &self.spec;
        let a = self.a.iter().map(|&x| f.frobenius(x, t)).collect();
        Mat { spec: self.spec.clone(), rows: self.rows, cols: self.cols, a }
    }

    /// In-place reduced row echelon form; returns pivot column indices.
    pub fn rref(&mut self) -> Vec<usize> {
        let f = self.spec.clone();
        let mut pivots = Vec::new();
        let mut r0 = 0usize;
        for c in 0..self.cols {
            let Some(rp) = (r0..self.rows).find(|&r| self.get(r, c) != 0) else {
                continue;
            };
            if rp != r0 {
                for k in 0..self.cols {
                    self.a.swap(r0 * self.cols + k, rp * self.cols + k);
                }
            }
            let inv = f.inv(self.get(r0, c)).expect("pivot nonzero");
            for k in 0..self.cols {
                let v = f.mul(self.get(r0, k), inv);
                self.set(r0, k, v);
            }
            for r in 0..self.rows {
                if r != r0 && self.get(r, c) != 0 {
                    let factor = self.get(r, c);
                    for k in 0..self.cols {
                        let v = f.sub(self.get(r, k), f.mul(factor, self.get(r0, k)));
                        self.set(r, k, v);
                    }
                }
            }
            pivots.push(c);
            r0 += 1;
            if r0 == self.rows {
                break;
            }
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.rref().len()
    }

    /// Basis of `{ v : M v = 0 }`, one kernel vector per row of the result.
    pub fn kernel_basis(&self) -> Mat {
        let f = self.spec.clone();
        let mut m = self.clone();
        let pivots = m.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut out = Mat::zero(f.clone(), free.len(), self.cols);
        for (i, &fc) in free.iter().enumerate() {
            out.set(i, fc, 1);
            for (pr, &pc) in pivots.iter().enumerate() {
                out.set(i, pc, f.neg(m.get(pr, fc)));
            }
        }
        out
    }

    /// Solve `M x = b` for one solution; `None` if inconsistent.
    pub fn solve(&self, b: &[u64]) -> Option<Vec<u64>> {
        assert_eq!(b.len(), self.rows);
        let f = self.spec.clone();
        let mut aug = Mat::zero(f.clone(), self.rows, self.cols + 1);
        for r in 0..self.rows {
            for c in 0..self.cols {
                aug.set(r, c, self.get(r, c));
            }
            aug.set(r, self.cols, b[r]);
        }
        let pivots = aug.rref();
        if pivots.contains(&self.cols) {
            return None; // pivot in the constant column
        }
        let mut x = vec![0u64; self.cols];
        for (pr, &pc) in pivots.iter().enumerate() {
            x[pc] = aug.get(pr, self.cols);
        }
        Some(x)
    }

    pub fn inverse(&self) -> Option<Mat> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let f = self.spec.clone();
        let mut aug = Mat::zero(f.clone(), n, 2 * n);
        for r in 0..n {
            for c in 0..n {
                aug.set(r, c, self.get(r, c));
            }
            aug.set(r, n + r, 1);
        }
        let pivots = aug.rref();
        if pivots.len() < n || pivots[n - 1] >= n {
            return None;
        }
        let mut out = Mat::zero(f, n, n);
        for r in 0..n {
            for c in 0..n {
                out.set(r, c, aug.get(r, n + c));
            }
        }
        Some(out)
    }

    /// Stack other's rows below self's.
    pub fn vstack(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.cols);
        let mut a = self.a.clone();
        a.extend_from_slice(&other.a);
        Mat { spec: self.spec.clone(), rows: self.rows + other.rows, cols: self.cols, a }
    }

    /// Row space membership test against an rref basis.
    pub fn row_space_contains(&self, v: &[u64]) -> bool {
        Echelon::from_mat(self).reduce(v).iter().all(|&x| x == 0)
    }

    /// Coordinates of `v` with respect to this matrix's rows (solved, so
    /// the rows need not be in echelon form).
    pub fn coords_in_rows(&self, v: &[u64]) -> Option<Vec<u64>> {
        self.transpose().solve(v)
    }
}

/// Incrementally maintained reduced row echelon basis; the workhorse behind
/// spinning and radical filtrations.
#[derive(Clone)]
pub struct Echelon {
    spec: Arc<FieldSpec>,
    dim: usize,
    rows: Vec<Vec<u64>>,
    pivots: Vec<usize>,
}

impl Echelon {
    pub fn new(spec: Arc<FieldSpec>, dim: usize) -> Self {
        Echelon { spec, dim, rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn from_mat(m: &Mat) -> Self {
        let mut e = Echelon::new(m.spec().clone(), m.cols());
        for r in 0..m.rows() {
            e.insert(m.row(r).to_vec());
        }
        e
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }
    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }
    pub fn dim(&self) -> usize {
        self.dim
    }
    pub fn rows(&self) -> &[Vec<u64>] {
        &self.rows
    }
    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Reduce `v` against the current basis; the remainder is zero iff `v`
    /// lies in the span.
    pub fn reduce(&self, v: &[u64]) -> Vec<u64> {
        let f = &self.spec;
        let mut w = v.to_vec();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            let c = w[p];
            if c != 0 {
                for k in 0..self.dim {
                    w[k] = f.sub(w[k], f.mul(c, row[k]));
                }
            }
        }
        w
    }

    /// Insert a vector; returns true if it extended the span.
    pub fn insert(&mut self, v: Vec<u64>) -> bool {
        let f = self.spec.clone();
        let mut w = self.reduce(&v);
        let Some(p) = w.iter().position(|&x| x != 0) else {
            return false;
        };
        let inv = f.inv(w[p]).expect("nonzero");
        for x in w.iter_mut() {
            *x = f.mul(*x, inv);
        }
        // back-substitute to keep rows reduced
        for (row, &rp) in self.rows.iter_mut().zip(&self.pivots) {
            debug_assert!(rp != p);
            let c = row[p];
            if c != 0 {
                for k in 0..self.dim {
                    row[k] = f.sub(row[k], f.mul(c, w[k]));
                }
            }
        }
        let pos = self.pivots.iter().position(|&rp| rp > p).unwrap_or(self.rows.len());
        self.rows.insert(pos, w);
        self.pivots.insert(pos, p);
        true
    }

    pub fn contains(&self, v: &[u64]) -> bool {
        self.reduce(v).iter().all(|&x| x == 0)
    }

    /// Coordinates of `v` in this basis, if it lies in the span.
    pub fn coords(&self, v: &[u64]) -> Option<Vec<u64>> {
        let f = &self.spec;
        let mut w = v.to_vec();
        let mut coords = vec![0u64; self.rows.len()];
        for (i, (row, &p)) in self.rows.iter().zip(&self.pivots).enumerate() {
            let c = w[p];
            if c != 0 {
                coords[i] = c;
                for k in 0..self.dim {
                    w[k] = f.sub(w[k], f.mul(c, row[k]));
                }
            }
        }
        if w.iter().all(|&x| x == 0) {
            Some(coords)
        } else {
            None
        }
    }

    pub fn to_mat(&self) -> Mat {
        Mat::from_rows_padded(self.spec.clone(), &self.rows, self.dim)
    }

    /// Extend to a full basis of the ambient space with unit vectors;
    /// returns the indices of the adjoined coordinates.
    pub fn complete(&mut self) -> Vec<usize> {
        let mut added = Vec::new();
        for c in 0..self.dim {
            if !self.pivots.contains(&c) {
                let mut v = vec![0u64; self.dim];
                v[c] = 1;
                if self.insert(v) {
                    added.push(c);
                }
            }
        }
        added
    }
}

impl Mat {
    fn from_rows_padded(spec: Arc<FieldSpec>, rows: &[Vec<u64>], dim: usize) -> Mat {
        let mut a = Vec::with_capacity(rows.len() * dim);
        for row in rows {
            a.extend_from_slice(row);
        }
        Mat { spec, rows: rows.len(), cols: dim, a }
    }
}

/// Deterministic PRNG (splitmix64) used for seeded searches; no external
/// randomness anywhere in the crate.
#[derive(Clone)]
pub struct Rng(u64);

impl Rng {
    pub fn new(seed: u64) -> Self {
        Rng(seed.wrapping_add(0x9e3779b97f4a7c15))
    }
    pub fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }
    pub fn below(&mut self, n: u64) -> u64 {
        self.next_u64() % n.max(1)
    }
}

/// Solve the simultaneous intertwining system `X A_i = B_i X` for all i.
/// Returns a basis of solutions, each reshaped to a `brows x bcols` matrix.
/// Constraint rows are streamed through an echelon (a kernel only depends
/// on the row space), so memory stays quadratic in the unknowns even for
/// many equations.
pub fn intertwiner_basis(
    spec: &Arc<FieldSpec>,
    a_mats: &[Mat],
    b_mats: &[Mat],
) -> Result<Vec<Mat>> {
    if a_mats.len() != b_mats.len() {
        return Err(Error::AlgebraMismatch);
    }
    let acols = a_mats.first().map_or(0, |m| m.cols());
    let brows = b_mats.first().map_or(0, |m| m.rows());
    let unknowns = brows * acols; // X is brows x acols
    let mut constraints = Echelon::new(spec.clone(), unknowns);
    for (am, bm) in a_mats.iter().zip(b_mats) {
        // (X A - B X)[r][c] = sum_k X[r][k] A[k][c] - sum_k B[r][k] X[k][c]
        for r in 0..brows {
            for c in 0..acols {
                let mut row = vec![0u64; unknowns];
                for k in 0..acols {
                    row[r * acols + k] = spec.add(row[r * acols + k], am.get(k, c));
                }
                for k in 0..brows {
                    row[k * acols + c] = spec.sub(row[k * acols + c], bm.get(r, k));
                }
                constraints.insert(row);
                if constraints.len() == unknowns {
                    return Ok(Vec::new()); // full rank, zero kernel
                }
            }
        }
    }
    let kernel = constraints.to_mat().kernel_basis();
    let mut out = Vec::new();
    for i in 0..kernel.rows() {
        let mut m = Mat::zero(spec.clone(), brows, acols);
        for r in 0..brows {
            for c in 0..acols {
                m.set(r, c, kernel.get(i, r * acols + c));
            }
        }
        out.push(m);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf(p: u64, m: u32) -> Arc<FieldSpec> {
        FieldSpec::get(p, m).unwrap()
    }

    #[test]
    fn solver_recovers_known_solutions_exactly() {
        // random square systems with planted solutions; residual must vanish
        for (p, m) in [(2u64, 1u32), (3, 2), (2, 2), (5, 1)] {
            let f = gf(p, m);
            let mut rng = Rng::new(7 * p + m as u64);
            for n in 1..=6usize {
                for _ in 0..20 {
                    let a = Mat::from_fn(f.clone(), n, n, |_, _| rng.below(f.q()));
                    let x: Vec<u64> = (0..n).map(|_| rng.below(f.q())).collect();
                    let b = a.apply(&x);
                    let got = a.solve(&b).expect("consistent by construction");
                    assert_eq!(a.apply(&got), b);
                }
            }
        }
    }

    #[test]
    fn kernel_and_rank() {
        let f = gf(3, 1);
        let m = Mat::from_rows(f.clone(), vec![vec![1, 2, 0], vec![0, 1, 1]]);
        assert_eq!(m.rank(), 2);
        let k = m.kernel_basis();
        assert_eq!(k.rows(), 1);
        for r in 0..k.rows() {
            assert!(m.apply(k.row(r)).iter().all(|&x| x == 0));
        }
    }

    #[test]
    fn inverse_roundtrip() {
        let f = gf(2, 2);
        let mut rng = Rng::new(99);
        for _ in 0..50 {
            let m = Mat::from_fn(f.clone(), 4, 4, |_, _| rng.below(4));
            if let Some(inv) = m.inverse() {
                assert_eq!(m.mul(&inv), Mat::identity(f.clone(), 4));
                assert_eq!(inv.mul(&m), Mat::identity(f.clone(), 4));
            }
        }
    }

    #[test]
    fn echelon_coords() {
        let f = gf(5, 1);
        let mut e = Echelon::new(f.clone(), 3);
        assert!(e.insert(vec![1, 2, 3]));
        assert!(e.insert(vec![0, 1, 1]));
        assert!(!e.insert(vec![2, 4, 6]));
        let v = vec![1, 3, 4]; // (1,2,3) + (0,1,1)
        let c = e.coords(&v).unwrap();
        // reconstruct
        let mut rec = vec![0u64; 3];
        for (ci, row) in c.iter().zip(e.rows()) {
            for k in 0..3 {
                rec[k] = f.add(rec[k], f.mul(*ci, row[k]));
            }
        }
        assert_eq!(rec, v);
        assert!(e.coords(&[0, 0, 1]).is_none());
    }
}
