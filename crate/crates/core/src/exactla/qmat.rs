use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::Rat;

/// Dense row-major matrix over the rationals.
#[derive(Clone, PartialEq, Eq)]
pub struct QMat {
    rows: usize,
    cols: usize,
    data: Vec<Rat>,
}

impl fmt::Debug for QMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "QMat {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(|x| x.to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

/// Output of [`rank_kernel_image`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankKernelImage {
    pub rank: usize,
    pub kernel: QMat,
    pub image: QMat,
}

impl QMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        QMat {
            rows,
            cols,
            data: vec![Rat::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = QMat::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = Rat::one();
        }
        m
    }

    pub fn from_rows(rows: &[Vec<Rat>], cols: usize) -> Self {
        let mut m = QMat::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), cols, "ragged rows");
            for (j, x) in r.iter().enumerate() {
                m.data[i * cols + j] = x.clone();
            }
        }
        m
    }

    pub fn from_i64_rows(rows: &[Vec<i64>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        let mut m = QMat::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), cols, "ragged rows");
            for (j, &x) in r.iter().enumerate() {
                m.data[i * cols + j] = Rat::from_integer(BigInt::from(x));
            }
        }
        m
    }

    /// Builds a `len x k` matrix whose columns are the given vectors.
    pub fn from_cols(cols: &[Vec<Rat>], len: usize) -> Self {
        let mut m = QMat::zeros(len, cols.len());
        for (j, c) in cols.iter().enumerate() {
            assert_eq!(c.len(), len, "column length mismatch");
            for (i, x) in c.iter().enumerate() {
                m.data[i * m.cols + j] = x.clone();
            }
        }
        m
    }

    pub fn from_i64_cols(cols: &[Vec<i64>], len: usize) -> Self {
        let cols: Vec<Vec<Rat>> = cols.iter().map(|c| c.iter().map(|&x| int(x)).collect()).collect();
        QMat::from_cols(&cols, len)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_empty(&self) -> bool {
        self.rows == 0 || self.cols == 0
    }

    pub fn get(&self, r: usize, c: usize) -> &Rat {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Rat) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Rat] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn col(&self, c: usize) -> Vec<Rat> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<Rat>> {
        (0..self.cols).map(|c| self.col(c)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> QMat {
        let mut t = QMat::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.data[c * self.rows + r] = self.get(r, c).clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &QMat) -> QMat {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        let mut out = QMat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let idx = i * out.cols + j;
                    out.data[idx] += a * b;
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Rat]) -> Vec<Rat> {
        assert_eq!(self.cols, v.len(), "dimension mismatch in product");
        (0..self.rows)
            .map(|i| {
                let mut acc = Rat::zero();
                for (a, b) in self.row(i).iter().zip(v) {
                    if !a.is_zero() && !b.is_zero() {
                        acc += a * b;
                    }
                }
                acc
            })
            .collect()
    }

    pub fn scale(&self, s: &Rat) -> QMat {
        QMat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x * s).collect(),
        }
    }

    pub fn add(&self, other: &QMat) -> QMat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        QMat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        }
    }

    /// Horizontal concatenation `[self | other]`.
    pub fn hcat(&self, other: &QMat) -> QMat {
        assert_eq!(self.rows, other.rows, "row count mismatch in hcat");
        let mut out = QMat::zeros(self.rows, self.cols + other.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.set(r, c, self.get(r, c).clone());
            }
            for c in 0..other.cols {
                out.set(r, self.cols + c, other.get(r, c).clone());
            }
        }
        out
    }

    /// Vertical concatenation.
    pub fn vcat(&self, other: &QMat) -> QMat {
        assert_eq!(self.cols, other.cols, "column count mismatch in vcat");
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        QMat {
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        }
    }

    /// Copies `block` into `self` with its top-left corner at `(r0, c0)`.
    pub fn set_block(&mut self, r0: usize, c0: usize, block: &QMat) {
        for r in 0..block.rows {
            for c in 0..block.cols {
                let v = block.get(r, c);
                if !v.is_zero() {
                    self.set(r0 + r, c0 + c, v.clone());
                }
            }
        }
    }

    pub fn select_cols(&self, idx: &[usize]) -> QMat {
        let cols: Vec<Vec<Rat>> = idx.iter().map(|&c| self.col(c)).collect();
        QMat::from_cols(&cols, self.rows)
    }

    pub fn select_rows(&self, idx: &[usize]) -> QMat {
        let rows: Vec<Vec<Rat>> = idx.iter().map(|&r| self.row(r).to_vec()).collect();
        QMat::from_rows(&rows, self.cols)
    }

    /// Reduced row echelon form with the leftmost-nonzero pivot rule.
    /// Returns the reduced matrix and the pivot columns.
    pub fn rref(&self) -> (QMat, Vec<usize>) {
        let mut m = self.clone();
        let pivots = m.rref_in_place();
        (m, pivots)
    }

    fn rref_in_place(&mut self) -> Vec<usize> {
        let (rows, cols) = (self.rows, self.cols);
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..cols {
            if r == rows {
                break;
            }
            let Some(p) = (r..rows).find(|&i| !self.get(i, c).is_zero()) else {
                continue;
            };
            if p != r {
                for j in 0..cols {
                    self.data.swap(p * cols + j, r * cols + j);
                }
            }
            let inv = self.get(r, c).recip();
            for j in c..cols {
                let idx = r * cols + j;
                if !self.data[idx].is_zero() {
                    self.data[idx] *= &inv;
                }
            }
            let pivot_row: Vec<(usize, Rat)> = (c..cols)
                .filter(|&j| !self.get(r, j).is_zero())
                .map(|j| (j, self.get(r, j).clone()))
                .collect();
            for i in 0..rows {
                if i == r {
                    continue;
                }
                let factor = self.get(i, c).clone();
                if factor.is_zero() {
                    continue;
                }
                for (j, v) in &pivot_row {
                    let idx = i * cols + j;
                    self.data[idx] -= &factor * v;
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        if self.rows == 0 || self.cols == 0 {
            return 0;
        }
        if self.rows > self.cols {
            self.transpose().rref_in_place_owned()
        } else {
            self.clone().rref_in_place().len()
        }
    }

    fn rref_in_place_owned(mut self) -> usize {
        self.rref_in_place().len()
    }

    /// Canonical basis of the column space: reduced column echelon form with
    /// unit pivots (columns ordered by pivot row).
    pub fn column_echelon(&self) -> QMat {
        let (r, piv) = self.transpose().rref();
        let keep: Vec<usize> = (0..piv.len()).collect();
        r.select_rows(&keep).transpose()
    }

    /// Pivot rows of a matrix already in reduced column echelon form.
    pub fn echelon_pivots(&self) -> Vec<usize> {
        (0..self.cols)
            .map(|c| {
                (0..self.rows)
                    .find(|&r| !self.get(r, c).is_zero())
                    .expect("zero column in echelon basis")
            })
            .collect()
    }

    /// Canonical basis of the null space, in reduced column echelon form.
    pub fn kernel(&self) -> QMat {
        let (r, piv) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !piv.contains(c)).collect();
        let mut basis = Vec::with_capacity(free.len());
        for &f in &free {
            let mut v = vec![Rat::zero(); self.cols];
            v[f] = Rat::one();
            for (i, &p) in piv.iter().enumerate() {
                v[p] = -r.get(i, f).clone();
            }
            basis.push(v);
        }
        QMat::from_cols(&basis, self.cols).column_echelon()
    }

    /// Some solution `x` of `self * x = b`, or `None` when inconsistent.
    pub fn solve(&self, b: &[Rat]) -> Option<Vec<Rat>> {
        assert_eq!(b.len(), self.rows);
        let bcol = QMat::from_cols(&[b.to_vec()], self.rows);
        let aug = self.hcat(&bcol);
        let (r, piv) = aug.rref();
        if piv.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![Rat::zero(); self.cols];
        for (i, &p) in piv.iter().enumerate() {
            x[p] = r.get(i, self.cols).clone();
        }
        Some(x)
    }

    /// Determinant by Gaussian elimination.
    pub fn det(&self) -> Rat {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        let mut m = self.clone();
        let mut det = Rat::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !m.get(i, c).is_zero()) else {
                return Rat::zero();
            };
            if p != c {
                for j in 0..n {
                    m.data.swap(p * n + j, c * n + j);
                }
                det = -det;
            }
            let piv = m.get(c, c).clone();
            det *= &piv;
            for i in c + 1..n {
                let factor = m.get(i, c) / &piv;
                if factor.is_zero() {
                    continue;
                }
                for j in c..n {
                    let v = &factor * m.get(c, j);
                    m.data[i * n + j] -= v;
                }
            }
        }
        det
    }

    pub fn is_integral(&self) -> bool {
        self.data.iter().all(|x| x.is_integer())
    }

    pub fn max_abs_den(&self) -> BigInt {
        self.data
            .iter()
            .map(|x| x.denom().abs())
            .max()
            .unwrap_or_else(BigInt::one)
    }
}

/// Rank, kernel and image of `m`, the latter two as canonical echelon bases.
pub fn rank_kernel_image(m: &QMat) -> RankKernelImage {
    let image = m.column_echelon();
    RankKernelImage {
        rank: image.cols(),
        kernel: m.kernel(),
        image,
    }
}

pub fn int(x: i64) -> Rat {
    Rat::from_integer(BigInt::from(x))
}

/// Coordinates of `v` in a reduced column echelon basis `basis` (with pivot
/// rows `pivots`). Returns `None` when `v` is not in the span.
pub fn echelon_coords(basis: &QMat, pivots: &[usize], v: &[Rat]) -> Option<Vec<Rat>> {
    let coords: Vec<Rat> = pivots.iter().map(|&p| v[p].clone()).collect();
    let back = basis.mul_vec(&coords);
    if back.as_slice() == v {
        Some(coords)
    } else {
        None
    }
}

/// Coordinates in an echelon basis without membership verification.
pub fn echelon_coords_unchecked(pivots: &[usize], v: &[Rat]) -> Vec<Rat> {
    pivots.iter().map(|&p| v[p].clone()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cube_vertices() -> QMat {
        let mut rows = Vec::new();
        for a in [-1, 1] {
            for b in [-1, 1] {
                for c in [-1, 1] {
                    rows.push(vec![a, b, c]);
                }
            }
        }
        QMat::from_i64_rows(&rows)
    }

    #[test]
    fn identity_has_full_rank() {
        let rki = rank_kernel_image(&QMat::identity(3));
        assert_eq!(rki.rank, 3);
        assert_eq!(rki.kernel.cols(), 0);
        assert_eq!(rki.image, QMat::identity(3));
    }

    #[test]
    fn cube_vertex_rows_span_space() {
        let m = cube_vertices();
        assert_eq!(rank_kernel_image(&m).rank, 3);
        assert_eq!(m.transpose().rank(), 3);
    }

    #[test]
    fn cross_bm_boundary_rank() {
        // four rays each mapping to the origin with sign +1
        let m = QMat::from_i64_rows(&[vec![1, 1, 1, 1]]);
        let rki = rank_kernel_image(&m);
        assert_eq!(rki.rank, 1);
        assert_eq!(rki.kernel.cols(), 3);
        assert!(m.mul(&rki.kernel).is_zero());
    }

    #[test]
    fn solve_detects_inconsistency() {
        let m = QMat::from_i64_rows(&[vec![1, 1], vec![2, 2]]);
        assert!(m.solve(&[int(1), int(3)]).is_none());
        let x = m.solve(&[int(1), int(2)]).unwrap();
        assert_eq!(m.mul_vec(&x), vec![int(1), int(2)]);
    }

    #[test]
    fn echelon_coordinates_read_pivots() {
        let m = QMat::from_i64_cols(&[vec![1, 2, 3], vec![0, 1, 1]], 3).column_echelon();
        let piv = m.echelon_pivots();
        let v = vec![int(2), int(5), int(7)];
        let c = echelon_coords(&m, &piv, &v).unwrap();
        assert_eq!(m.mul_vec(&c), v);
        assert!(echelon_coords(&m, &piv, &[int(0), int(0), int(1)]).is_none());
    }
}
