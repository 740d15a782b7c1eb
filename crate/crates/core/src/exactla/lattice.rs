use num_integer::Integer;

use super::qmat::{int, QMat};
use super::snf::{smith_normal_form, IntMat};
use crate::error::{Error, Result};

/// A saturated sublattice of `Z^n` together with coordinates on the quotient.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientData {
    pub ambient_rank: usize,
    /// Basis of the saturation of the input span, as columns (`n x r`).
    pub sub_basis: IntMat,
    /// Integer vectors projecting to the standard basis of the quotient (`n x (n-r)`).
    pub quot_basis: IntMat,
    /// Projection `Z^n -> Z^{n-r}`, integral and surjective (`(n-r) x n`).
    pub proj: IntMat,
}

impl QuotientData {
    pub fn sub_rank(&self) -> usize {
        self.sub_basis.cols()
    }

    pub fn quotient_rank(&self) -> usize {
        self.proj.rows()
    }

    pub fn project(&self, v: &[i64]) -> Vec<i64> {
        self.proj.mul_vec(v)
    }

    pub fn proj_q(&self) -> QMat {
        to_qmat(&self.proj)
    }
}

pub fn to_qmat(m: &IntMat) -> QMat {
    let mut q = QMat::zeros(m.rows(), m.cols());
    for r in 0..m.rows() {
        for c in 0..m.cols() {
            let x = m.get(r, c);
            if x != 0 {
                q.set(r, c, int(x));
            }
        }
    }
    q
}

pub fn gcd_of(v: &[i64]) -> i64 {
    v.iter().fold(0i64, |g, &x| g.gcd(&x))
}

/// Divides `v` by the gcd of its entries.
pub fn primitive(v: &[i64]) -> Result<Vec<i64>> {
    let g = gcd_of(v);
    if g == 0 {
        return Err(Error::ZeroVector);
    }
    Ok(v.iter().map(|x| x / g).collect())
}

/// Saturation of the span of the columns of `sub_gens` in `Z^ambient_rank`,
/// with complementary quotient coordinates.
pub fn quotient_lattice(sub_gens: &IntMat, ambient_rank: usize) -> QuotientData {
    let n = ambient_rank;
    if sub_gens.cols() == 0 {
        return QuotientData {
            ambient_rank: n,
            sub_basis: IntMat::zeros(n, 0),
            quot_basis: IntMat::identity(n),
            proj: IntMat::identity(n),
        };
    }
    assert_eq!(sub_gens.rows(), n, "generators live in the wrong ambient rank");
    let snf = smith_normal_form(sub_gens);
    let r = snf.rank();
    let u = &snf.u;
    let u_inv = unimodular_inverse(u);
    let sub_idx: Vec<usize> = (0..r).collect();
    let quot_idx: Vec<usize> = (r..n).collect();
    QuotientData {
        ambient_rank: n,
        sub_basis: u.select_cols(&sub_idx),
        quot_basis: u.select_cols(&quot_idx),
        proj: if quot_idx.is_empty() {
            IntMat::zeros(0, n)
        } else {
            u_inv.select_rows(&quot_idx)
        },
    }
}

/// Inverse of a unimodular integer matrix.
pub fn unimodular_inverse(u: &IntMat) -> IntMat {
    let n = u.rows();
    let q = to_qmat(u);
    let aug = q.hcat(&QMat::identity(n));
    let (r, piv) = aug.rref();
    assert_eq!(piv.len(), n, "matrix is singular");
    let mut inv = IntMat::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let x = r.get(i, n + j);
            assert!(x.is_integer(), "matrix is not unimodular");
            inv.set(i, j, i64::try_from(x.to_integer()).expect("entry overflow"));
        }
    }
    inv
}

/// Rank-`r` lattice check: are the columns a basis of their saturation?
pub fn is_saturated_basis(gens: &IntMat) -> bool {
    if gens.cols() == 0 {
        return true;
    }
    let snf = smith_normal_form(gens);
    let f = snf.invariant_factors();
    f.len() == gens.cols() && f.iter().all(|&x| x == 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check(q: &QuotientData) {
        let ps = q.proj.mul(&q.sub_basis);
        assert!((0..ps.rows()).all(|r| ps.row(r).iter().all(|&x| x == 0)));
        assert_eq!(q.proj.mul(&q.quot_basis), IntMat::identity(q.quotient_rank()));
    }

    #[test]
    fn primitive_vectors() {
        assert_eq!(primitive(&[2, 4, 6]).unwrap(), vec![1, 2, 3]);
        assert_eq!(primitive(&[1, 1, 1]).unwrap(), vec![1, 1, 1]);
        assert_eq!(primitive(&[-3, 7, 4]).unwrap(), vec![-3, 7, 4]);
        assert!(matches!(primitive(&[0, 0]), Err(Error::ZeroVector)));
    }

    #[test]
    fn quotient_by_diagonal_ray() {
        let q = quotient_lattice(&IntMat::from_cols(&[vec![1, 1, 1]], 3), 3);
        assert_eq!(q.quotient_rank(), 2);
        assert_eq!(q.proj.rows(), 2);
        assert_eq!(q.proj.cols(), 3);
        check(&q);
    }

    #[test]
    fn quotient_by_zero_is_identity() {
        let q = quotient_lattice(&IntMat::zeros(2, 0), 2);
        assert_eq!(q.proj, IntMat::identity(2));
        check(&q);
    }

    #[test]
    fn saturation_of_index_four_lattice() {
        let q = quotient_lattice(&IntMat::from_cols(&[vec![2, 0], vec![0, 2]], 2), 2);
        assert_eq!(q.quotient_rank(), 0);
        assert_eq!(q.sub_basis.det().abs(), 1);
        check(&q);
    }

    #[test]
    fn cube_edge_is_not_unimodular() {
        let g = IntMat::from_cols(&[vec![1, 1, 1], vec![-1, 1, 1]], 3);
        assert!(!is_saturated_basis(&g));
        let q = quotient_lattice(&g, 3);
        assert_eq!(q.sub_rank(), 2);
        check(&q);
    }
}
