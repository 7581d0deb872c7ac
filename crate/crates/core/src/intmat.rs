//! Small dense integer matrices: products, determinants, unimodular
//! inverses, and Smith normal form. Sizes here are bounded by the number of
//! simple modules of a desk-scale algebra, so i64 with occasional i128
//! intermediates is plenty.

use std::fmt;

#[derive(Clone, PartialEq, Eq)]
pub struct IntMat {
    rows: usize,
    cols: usize,
    a: Vec<i64>,
}

impl fmt::Debug for IntMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "IntMat {}x{}", self.rows, self.cols)?;
        for r in 0..self.rows {
            writeln!(f, "  {:?}", &self.a[r * self.cols..(r + 1) * self.cols])?;
        }
        Ok(())
    }
}

impl fmt::Display for IntMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            write!(f, "[")?;
            for c in 0..self.cols {
                if c > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self.get(r, c))?;
            }
            write!(f, "]")?;
            if r + 1 < self.rows {
                writeln!(f)?;
            }
        }
        Ok(())
    }
}

impl IntMat {
    pub fn zero(rows: usize, cols: usize) -> Self {
        IntMat { rows, cols, a: vec![0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m.a[i * n + i] = 1;
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<i64>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |v| v.len());
        let mut a = Vec::with_capacity(r * c);
        for row in &rows {
            assert_eq!(row.len(), c);
            a.extend_from_slice(row);
        }
        IntMat { rows: r, cols: c, a }
    }

    /// Permutation matrix sending basis vector `i` to `perm[i]`: column `i`
    /// has its 1 in row `perm[i]`.
    pub fn permutation(perm: &[usize]) -> Self {
        let n = perm.len();
        let mut m = Self::zero(n, n);
        for (i, &pi) in perm.iter().enumerate() {
            m.set(pi, i, 1);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }
    #[inline]
    pub fn get(&self, r: usize, c: usize) -> i64 {
        self.a[r * self.cols + c]
    }
    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: i64) {
        self.a[r * self.cols + c] = v;
    }
    pub fn col(&self, c: usize) -> Vec<i64> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }
    pub fn rows_vec(&self) -> Vec<Vec<i64>> {
        (0..self.rows)
            .map(|r| self.a[r * self.cols..(r + 1) * self.cols].to_vec())
            .collect()
    }

    pub fn mul(&self, other: &IntMat) -> IntMat {
        assert_eq!(self.cols, other.rows);
        let mut out = IntMat::zero(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let x = self.get(r, k);
                if x == 0 {
                    continue;
                }
                for c in 0..other.cols {
                    let v = out.get(r, c) + x * other.get(k, c);
                    out.set(r, c, v);
                }
            }
        }
        out
    }

    pub fn det(&self) -> i64 {
        assert_eq!(self.rows, self.cols);
        // Bareiss fraction-free elimination in i128
        let n = self.rows;
        if n == 0 {
            return 1;
        }
        let mut m: Vec<i128> = self.a.iter().map(|&x| x as i128).collect();
        let mut sign = 1i128;
        let mut prev = 1i128;
        for k in 0..n - 1 {
            if m[k * n + k] == 0 {
                let Some(sw) = (k + 1..n).find(|&r| m[r * n + k] != 0) else {
                    return 0;
                };
                for c in 0..n {
                    m.swap(k * n + c, sw * n + c);
                }
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = m[i * n + j] * m[k * n + k] - m[i * n + k] * m[k * n + j];
                    m[i * n + j] = v / prev;
                }
                m[i * n + k] = 0;
            }
            prev = m[k * n + k];
        }
        (sign * m[n * n - 1]) as i64
    }

    /// Inverse of a matrix with determinant +-1.
    pub fn inverse_unimodular(&self) -> Option<IntMat> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let d = self.det();
        if d != 1 && d != -1 {
            return None;
        }
        // adjugate via cofactors; n is tiny
        let mut adj = IntMat::zero(n, n);
        for r in 0..n {
            for c in 0..n {
                let mut minor = IntMat::zero(n - 1, n - 1);
                for (mr, rr) in (0..n).filter(|&x| x != r).enumerate() {
                    for (mc, cc) in (0..n).filter(|&x| x != c).enumerate() {
                        minor.set(mr, mc, self.get(rr, cc));
                    }
                }
                let cof = if (r + c) % 2 == 0 { minor.det() } else { -minor.det() };
                adj.set(c, r, cof * d); // d = 1/d for d = +-1
            }
        }
        Some(adj)
    }

    /// Diagonal of the Smith normal form, each entry dividing the next,
    /// nonzero entries first, all non-negative.
    pub fn smith_diagonal(&self) -> Vec<i64> {
        let mut m = self.rows_vec();
        let rows = self.rows;
        let cols = self.cols;
        let n = rows.min(cols);
        let mut out = Vec::with_capacity(n);
        let mut t = 0usize;
        while t < n {
            let mut pivot = None;
            'find: for r in t..rows {
                for c in t..cols {
                    if m[r][c] != 0 {
                        pivot = Some((r, c));
                        break 'find;
                    }
                }
            }
            let Some((pr, pc)) = pivot else {
                break;
            };
            m.swap(t, pr);
            for row in m.iter_mut() {
                row.swap(t, pc);
            }
            // |m[t][t]| strictly decreases on every retry, so this terminates
            loop {
                let mut retry = false;
                for r in t + 1..rows {
                    if m[r][t] == 0 {
                        continue;
                    }
                    let q = m[r][t].div_euclid(m[t][t]);
                    for c in t..cols {
                        m[r][c] -= q * m[t][c];
                    }
                    if m[r][t] != 0 {
                        m.swap(t, r);
                        retry = true;
                        break;
                    }
                }
                if retry {
                    continue;
                }
                for c in t + 1..cols {
                    if m[t][c] == 0 {
                        continue;
                    }
                    let q = m[t][c].div_euclid(m[t][t]);
                    for r in t..rows {
                        m[r][c] -= q * m[r][t];
                    }
                    if m[t][c] != 0 {
                        for row in m.iter_mut() {
                            row.swap(t, c);
                        }
                        retry = true;
                        break;
                    }
                }
                if retry {
                    continue;
                }
                // divisibility: fold an offending row into the pivot row and
                // let the row-clearing pass shrink the pivot
                let piv = m[t][t];
                let mut fixed = true;
                'div: for r in t + 1..rows {
                    for c in t + 1..cols {
                        if m[r][c] % piv != 0 {
                            for cc in t..cols {
                                m[t][cc] += m[r][cc];
                            }
                            fixed = false;
                            break 'div;
                        }
                    }
                }
                if fixed {
                    break;
                }
            }
            out.push(m[t][t].abs());
            t += 1;
        }
        while out.len() < n {
            out.push(0);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn det_and_inverse() {
        let m = IntMat::from_rows(vec![vec![2, 1], vec![1, 1]]);
        assert_eq!(m.det(), 1);
        let inv = m.inverse_unimodular().unwrap();
        assert_eq!(m.mul(&inv), IntMat::identity(2));
        assert_eq!(inv.mul(&m), IntMat::identity(2));
        let s = IntMat::from_rows(vec![vec![2, 0], vec![0, 2]]);
        assert_eq!(s.det(), 4);
        assert!(s.inverse_unimodular().is_none());
    }

    #[test]
    fn smith_diagonals() {
        assert_eq!(IntMat::from_rows(vec![vec![3]]).smith_diagonal(), vec![3]);
        assert_eq!(
            IntMat::from_rows(vec![vec![2, 1], vec![1, 2]]).smith_diagonal(),
            vec![1, 3]
        );
        assert_eq!(
            IntMat::from_rows(vec![vec![2, 4, 4], vec![-6, 6, 12], vec![10, 4, 16]])
                .smith_diagonal(),
            vec![2, 2, 156] // classic worked example
        );
        assert_eq!(IntMat::identity(3).smith_diagonal(), vec![1, 1, 1]);
        assert_eq!(IntMat::zero(2, 3).smith_diagonal(), vec![0, 0]);
    }

    #[test]
    fn permutation_composition() {
        // perm sends i to perm[i]; matrix product composes accordingly
        let p = IntMat::permutation(&[1, 2, 0]);
        let q = IntMat::permutation(&[2, 0, 1]);
        assert_eq!(p.mul(&q), IntMat::identity(3));
        let e0 = IntMat::from_rows(vec![vec![1], vec![0], vec![0]]);
        assert_eq!(p.mul(&e0).col(0), vec![0, 1, 0]);
    }
}
