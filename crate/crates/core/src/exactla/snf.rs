//! Smith normal form over the integers.
//!
//! Entries are `i64`; intermediate products are checked and an overflow
//! aborts with a panic. Desk-scale fans stay far below that bound.

use num_integer::Integer;

/// Dense row-major integer matrix.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntMat {
    rows: usize,
    cols: usize,
    data: Vec<i64>,
}

/// `A = U * D * V` with `U`, `V` unimodular and `D` diagonal with
/// `d_i | d_{i+1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SnfResult {
    pub u: IntMat,
    pub d: IntMat,
    pub v: IntMat,
}

impl SnfResult {
    /// Nonzero diagonal entries of `D`.
    pub fn invariant_factors(&self) -> Vec<i64> {
        (0..self.d.rows.min(self.d.cols))
            .map(|i| self.d.get(i, i))
            .filter(|&x| x != 0)
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.invariant_factors().len()
    }
}

fn ck_mul(a: i64, b: i64) -> i64 {
    a.checked_mul(b).expect("integer overflow in lattice computation")
}

fn ck_add(a: i64, b: i64) -> i64 {
    a.checked_add(b).expect("integer overflow in lattice computation")
}

impl IntMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMat {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMat::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        let mut m = IntMat::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), cols, "ragged rows");
            m.data[i * cols..(i + 1) * cols].copy_from_slice(r);
        }
        m
    }

    /// `len x k` matrix with the given vectors as columns.
    pub fn from_cols(cols: &[Vec<i64>], len: usize) -> Self {
        let mut m = IntMat::zeros(len, cols.len());
        for (j, c) in cols.iter().enumerate() {
            assert_eq!(c.len(), len, "column length mismatch");
            for (i, &x) in c.iter().enumerate() {
                m.set(i, j, x);
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> i64 {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: i64) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> Vec<i64> {
        self.data[r * self.cols..(r + 1) * self.cols].to_vec()
    }

    pub fn col(&self, c: usize) -> Vec<i64> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn columns(&self) -> Vec<Vec<i64>> {
        (0..self.cols).map(|c| self.col(c)).collect()
    }

    pub fn mul(&self, other: &IntMat) -> IntMat {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        let mut out = IntMat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let idx = i * out.cols + j;
                    out.data[idx] = ck_add(out.data[idx], ck_mul(a, other.get(k, j)));
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[i64]) -> Vec<i64> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                (0..self.cols).fold(0i64, |acc, j| ck_add(acc, ck_mul(self.get(i, j), v[j])))
            })
            .collect()
    }

    pub fn transpose(&self) -> IntMat {
        let mut t = IntMat::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c));
            }
        }
        t
    }

    pub fn select_rows(&self, idx: &[usize]) -> IntMat {
        IntMat::from_rows(&idx.iter().map(|&r| self.row(r)).collect::<Vec<_>>()).with_cols(self.cols)
    }

    pub fn select_cols(&self, idx: &[usize]) -> IntMat {
        IntMat::from_cols(&idx.iter().map(|&c| self.col(c)).collect::<Vec<_>>(), self.rows)
    }

    fn with_cols(mut self, cols: usize) -> IntMat {
        if self.rows == 0 {
            self.cols = cols;
        }
        self
    }

    /// Exact determinant via fraction-free (Bareiss) elimination.
    pub fn det(&self) -> i64 {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return 1;
        }
        let mut a: Vec<Vec<i128>> = (0..n)
            .map(|i| (0..n).map(|j| self.get(i, j) as i128).collect())
            .collect();
        let mut sign = 1i128;
        let mut prev = 1i128;
        for k in 0..n - 1 {
            if a[k][k] == 0 {
                let Some(p) = (k + 1..n).find(|&i| a[i][k] != 0) else {
                    return 0;
                };
                a.swap(k, p);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
                }
            }
            prev = a[k][k];
        }
        i64::try_from(sign * a[n - 1][n - 1]).expect("determinant overflow")
    }

    // elementary operations used by the SNF loop
    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[dst] += c * row[src]
    fn add_row(&mut self, dst: usize, src: usize, c: i64) {
        if c == 0 {
            return;
        }
        for j in 0..self.cols {
            let v = ck_add(self.get(dst, j), ck_mul(c, self.get(src, j)));
            self.set(dst, j, v);
        }
    }

    /// col[dst] += c * col[src]
    fn add_col(&mut self, dst: usize, src: usize, c: i64) {
        if c == 0 {
            return;
        }
        for i in 0..self.rows {
            let v = ck_add(self.get(i, dst), ck_mul(c, self.get(i, src)));
            self.set(i, dst, v);
        }
    }

    fn negate_row(&mut self, r: usize) {
        for j in 0..self.cols {
            let v = -self.get(r, j);
            self.set(r, j, v);
        }
    }
}

/// Smith normal form `A = U * D * V`, deterministic for a fixed input.
pub fn smith_normal_form(a: &IntMat) -> SnfResult {
    let (m, n) = (a.rows, a.cols);
    let mut d = a.clone();
    // invariant: a = u * d * v
    let mut u = IntMat::identity(m);
    let mut v = IntMat::identity(n);

    for t in 0..m.min(n) {
        // smallest nonzero entry of the trailing block, first in row-major order
        let mut best: Option<(usize, usize)> = None;
        for i in t..m {
            for j in t..n {
                let x = d.get(i, j);
                if x != 0 && best.is_none_or(|(bi, bj)| x.abs() < d.get(bi, bj).abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else {
            break;
        };
        // row swap: d <- P d, u <- u P^{-1} (swap columns of u)
        d.swap_rows(t, pi);
        u.swap_cols(t, pi);
        d.swap_cols(t, pj);
        v.swap_rows(t, pj);

        loop {
            let mut changed = false;
            // clear column t below the pivot
            for i in t + 1..m {
                let x = d.get(i, t);
                if x == 0 {
                    continue;
                }
                let q = Integer::div_floor(&x, &d.get(t, t));
                // d <- E d with E = I - q e_i e_t^T, u <- u E^{-1}: col_t(u) += q col_i(u)
                d.add_row(i, t, -q);
                u.add_col(t, i, q);
                if d.get(i, t) != 0 {
                    d.swap_rows(t, i);
                    u.swap_cols(t, i);
                    changed = true;
                }
            }
            // clear row t right of the pivot
            for j in t + 1..n {
                let x = d.get(t, j);
                if x == 0 {
                    continue;
                }
                let q = Integer::div_floor(&x, &d.get(t, t));
                // d <- d F with F = I - q e_t e_j^T, v <- F^{-1} v: row_t(v) += q row_j(v)
                d.add_col(j, t, -q);
                v.add_row(t, j, q);
                if d.get(t, j) != 0 {
                    d.swap_cols(t, j);
                    v.swap_rows(t, j);
                    changed = true;
                }
            }
            if changed {
                continue;
            }
            // divisibility of the trailing block by the pivot
            let p = d.get(t, t);
            let bad = (t + 1..m).find(|&i| (t + 1..n).any(|j| d.get(i, j) % p != 0));
            match bad {
                Some(i) => {
                    // row_t += row_i ; u: col_i -= col_t
                    d.add_row(t, i, 1);
                    u.add_col(i, t, -1);
                }
                None => break,
            }
        }
        if d.get(t, t) < 0 {
            d.negate_row(t);
            // negating a row: u column t negated
            for r in 0..m {
                let x = -u.get(r, t);
                u.set(r, t, x);
            }
        }
    }
    SnfResult { u, d, v }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check(a: &IntMat) -> SnfResult {
        let s = smith_normal_form(a);
        assert_eq!(s.u.mul(&s.d).mul(&s.v), *a, "reconstruction failed");
        assert_eq!(s.u.det().abs(), 1);
        assert_eq!(s.v.det().abs(), 1);
        let f = s.invariant_factors();
        for w in f.windows(2) {
            assert_eq!(w[1] % w[0], 0, "divisibility chain broken: {f:?}");
        }
        for i in 0..s.d.rows() {
            for j in 0..s.d.cols() {
                if i != j {
                    assert_eq!(s.d.get(i, j), 0);
                }
            }
        }
        s
    }

    #[test]
    fn diagonal_input_is_fixed() {
        let s = check(&IntMat::from_rows(&[vec![2, 0], vec![0, 4]]));
        assert_eq!(s.invariant_factors(), vec![2, 4]);
    }

    #[test]
    fn single_column_gives_gcd() {
        let s = check(&IntMat::from_cols(&[vec![2, 4, 6]], 3));
        assert_eq!(s.invariant_factors(), vec![2]);
    }

    #[test]
    fn ray_generator_is_saturated() {
        let s = check(&IntMat::from_cols(&[vec![1, 1, 1]], 3));
        assert_eq!(s.invariant_factors(), vec![1]);
    }

    #[test]
    fn non_coprime_diagonal_is_repaired() {
        let s = check(&IntMat::from_rows(&[vec![2, 0], vec![0, 3]]));
        assert_eq!(s.invariant_factors(), vec![1, 6]);
    }

    #[test]
    fn deterministic() {
        let a = IntMat::from_rows(&[vec![3, 5, 7], vec![2, -4, 6], vec![1, 1, 1]]);
        assert_eq!(smith_normal_form(&a), smith_normal_form(&a));
        check(&a);
    }

    #[test]
    fn bareiss_det() {
        let a = IntMat::from_rows(&[vec![2, -1, 0], vec![1, 3, 4], vec![0, 5, 1]]);
        assert_eq!(a.det(), 2 * (3 - 20) + 1);
    }
}
