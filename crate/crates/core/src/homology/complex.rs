use num_traits::Zero;

use crate::error::{Error, Result};
use crate::exactla::{int, QMat};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ChainTheory {
    Ordinary,
    BorelMoore,
    CompactSupport,
    Relative,
    SemiOpen,
    MappingCone,
}

/// A bounded chain complex `C_0 <- C_1 <- ... <- C_top` of rational vector
/// spaces. `boundaries[q]` is the matrix of `C_q -> C_{q-1}` (`boundaries[0]`
/// has zero rows).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainComplex {
    pub theory: ChainTheory,
    pub p: usize,
    pub dims: Vec<usize>,
    pub boundaries: Vec<QMat>,
}

impl ChainComplex {
    pub fn new(theory: ChainTheory, p: usize, dims: Vec<usize>, boundaries: Vec<QMat>) -> ChainComplex {
        assert_eq!(dims.len(), boundaries.len());
        for (q, b) in boundaries.iter().enumerate() {
            assert_eq!(b.cols(), dims[q]);
            assert_eq!(b.rows(), if q == 0 { 0 } else { dims[q - 1] });
        }
        ChainComplex {
            theory,
            p,
            dims,
            boundaries,
        }
    }

    pub fn zero(theory: ChainTheory, p: usize, top: usize) -> ChainComplex {
        let dims = vec![0; top + 1];
        let boundaries = vec![QMat::zeros(0, 0); top + 1];
        ChainComplex::new(theory, p, dims, boundaries)
    }

    pub fn top(&self) -> usize {
        self.dims.len() - 1
    }

    pub fn dim(&self, q: usize) -> usize {
        self.dims.get(q).copied().unwrap_or(0)
    }

    /// `C_q -> C_{q-1}`, with zero maps outside the stored range.
    pub fn boundary(&self, q: usize) -> QMat {
        match self.boundaries.get(q) {
            Some(b) => b.clone(),
            None => QMat::zeros(self.dim(q.wrapping_sub(1)), 0),
        }
    }

    fn rank(&self, q: usize) -> usize {
        if q == 0 || q > self.top() {
            0
        } else {
            self.boundaries[q].rank()
        }
    }

    /// `∂_{q-1} ∂_q = 0` for every `q`.
    pub fn is_complex(&self) -> bool {
        (2..=self.top()).all(|q| self.boundaries[q - 1].mul(&self.boundaries[q]).is_zero())
    }

    pub fn homology_dims(&self) -> Vec<usize> {
        (0..=self.top())
            .map(|q| self.dims[q] - self.rank(q) - self.rank(q + 1))
            .collect()
    }

    /// Dimensions of the cohomology of the termwise dual cochain complex,
    /// computed from the transposed matrices.
    pub fn cohomology_dims(&self) -> Vec<usize> {
        let rank_t = |q: usize| -> usize {
            if q == 0 || q > self.top() {
                0
            } else {
                self.boundaries[q].transpose().rank()
            }
        };
        (0..=self.top())
            .map(|q| self.dims[q] - rank_t(q + 1) - rank_t(q))
            .collect()
    }

    /// Basis of the cycles `Z_q`, as columns.
    pub fn cycles(&self, q: usize) -> QMat {
        if q == 0 {
            QMat::identity(self.dims[0])
        } else {
            self.boundaries[q].kernel()
        }
    }

    /// Basis of the boundaries `B_q`, as columns.
    pub fn boundaries_in(&self, q: usize) -> QMat {
        if q >= self.top() {
            QMat::zeros(self.dims[q], 0)
        } else {
            self.boundaries[q + 1].column_echelon()
        }
    }

    /// Quotient by a subcomplex given by its inclusion matrices.
    pub fn quotient(&self, inclusions: &[QMat]) -> Result<ChainComplex> {
        if inclusions.len() != self.dims.len() {
            return Err(Error::InvalidComplex("one inclusion per degree is required".into()));
        }
        // per degree: echelon basis of the image, and the complementary rows
        let mut lifts = Vec::new();
        let mut projs = Vec::new();
        for (q, inc) in inclusions.iter().enumerate() {
            if inc.rows() != self.dims[q] {
                return Err(Error::InvalidComplex(format!("inclusion in degree {q} has wrong shape")));
            }
            let e = inc.column_echelon();
            if e.cols() != inc.cols() {
                return Err(Error::InvalidComplex(format!("inclusion in degree {q} is not injective")));
            }
            let piv = e.echelon_pivots();
            let rest: Vec<usize> = (0..self.dims[q]).filter(|r| !piv.contains(r)).collect();
            let n = self.dims[q];
            // proj = S (I - E P)
            let mut ep = QMat::zeros(n, n);
            for (j, &pr) in piv.iter().enumerate() {
                for i in 0..n {
                    let x = e.get(i, j);
                    if !x.is_zero() {
                        ep.set(i, pr, x.clone());
                    }
                }
            }
            let reduce = QMat::identity(n).add(&ep.scale(&-int(1)));
            projs.push(reduce.select_rows(&rest));
            let mut lift = QMat::zeros(n, rest.len());
            for (j, &r) in rest.iter().enumerate() {
                lift.set(r, j, int(1));
            }
            lifts.push(lift);
        }
        for q in 1..self.dims.len() {
            let image = self.boundaries[q].mul(&inclusions[q]);
            if !projs[q - 1].mul(&image).is_zero() {
                return Err(Error::InvalidComplex("boundary does not preserve the subcomplex".into()));
            }
        }
        let dims: Vec<usize> = lifts.iter().map(QMat::cols).collect();
        let boundaries = (0..dims.len())
            .map(|q| {
                if q == 0 {
                    QMat::zeros(0, dims[0])
                } else {
                    projs[q - 1].mul(&self.boundaries[q]).mul(&lifts[q])
                }
            })
            .collect();
        Ok(ChainComplex::new(ChainTheory::Relative, self.p, dims, boundaries))
    }
}

/// Checks `∂_D φ_q = φ_{q-1} ∂_C` in every degree.
pub fn is_chain_map(c: &ChainComplex, d: &ChainComplex, phi: &[QMat]) -> bool {
    if phi.len() != c.dims.len() || c.dims.len() != d.dims.len() {
        return false;
    }
    (0..phi.len()).all(|q| {
        phi[q].rows() == d.dims[q]
            && phi[q].cols() == c.dims[q]
            && (q == 0 || d.boundaries[q].mul(&phi[q]) == phi[q - 1].mul(&c.boundaries[q]))
    })
}

/// The mapping cone of `φ: C -> D`: `Cone_k = C_{k-1} ⊕ D_k` with
/// `∂(a, b) = (-∂a, φ(a) + ∂b)`.
pub fn mapping_cone(c: &ChainComplex, d: &ChainComplex, phi: &[QMat]) -> Result<ChainComplex> {
    if !is_chain_map(c, d, phi) {
        return Err(Error::NotAChainMap("φ does not commute with the boundaries".into()));
    }
    let top = c.top() + 1;
    let cd = |q: usize| c.dim(q);
    let dd = |q: usize| d.dim(q);
    let dims: Vec<usize> = (0..=top)
        .map(|k| if k == 0 { dd(0) } else { cd(k - 1) + dd(k) })
        .collect();
    let mut boundaries = vec![QMat::zeros(0, dims[0])];
    for k in 1..=top {
        let mut m = QMat::zeros(dims[k - 1], dims[k]);
        let (src_c, tgt_c) = (cd(k - 1), if k >= 2 { cd(k - 2) } else { 0 });
        // -∂a
        if k >= 2 && src_c > 0 && tgt_c > 0 {
            m.set_block(0, 0, &c.boundaries[k - 1].scale(&-int(1)));
        }
        // φ(a)
        if src_c > 0 && dd(k - 1) > 0 {
            m.set_block(tgt_c, 0, &phi[k - 1]);
        }
        // ∂b
        if k <= d.top() && dd(k) > 0 && dd(k - 1) > 0 {
            m.set_block(tgt_c, src_c, &d.boundaries[k]);
        }
        boundaries.push(m);
    }
    let cone = ChainComplex::new(ChainTheory::MappingCone, d.p, dims, boundaries);
    if !cone.is_complex() {
        return Err(Error::InvalidComplex("mapping cone fails ∂² = 0".into()));
    }
    Ok(cone)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactla::int;

    /// Simplicial chains of an interval: two points, one edge.
    fn interval() -> ChainComplex {
        let b1 = QMat::from_rows(&[vec![int(-1)], vec![int(1)]], 1);
        ChainComplex::new(ChainTheory::Ordinary, 0, vec![2, 1], vec![QMat::zeros(0, 2), b1])
    }

    #[test]
    fn interval_homology() {
        let c = interval();
        assert!(c.is_complex());
        assert_eq!(c.homology_dims(), vec![1, 0]);
        assert_eq!(c.cohomology_dims(), vec![1, 0]);
    }

    #[test]
    fn cone_of_identity_is_acyclic() {
        let c = interval();
        let id = vec![QMat::identity(2), QMat::identity(1)];
        let cone = mapping_cone(&c, &c, &id).unwrap();
        assert!(cone.homology_dims().iter().all(|&x| x == 0));
    }

    #[test]
    fn cone_of_zero_source_is_target() {
        let c = interval();
        let z = ChainComplex::new(ChainTheory::Ordinary, 0, vec![0, 0], vec![QMat::zeros(0, 0), QMat::zeros(0, 0)]);
        let phi = vec![QMat::zeros(2, 0), QMat::zeros(1, 0)];
        let cone = mapping_cone(&z, &c, &phi).unwrap();
        assert_eq!(&cone.homology_dims()[..2], &c.homology_dims()[..]);
    }

    #[test]
    fn quotient_by_endpoint() {
        let c = interval();
        let inc = vec![QMat::from_rows(&[vec![int(1)], vec![int(0)]], 1), QMat::zeros(1, 0)];
        let rel = c.quotient(&inc).unwrap();
        assert_eq!(rel.homology_dims(), vec![0, 0]);
        let phi_cone = mapping_cone(
            &ChainComplex::new(ChainTheory::Ordinary, 0, vec![1, 0], vec![QMat::zeros(0, 1), QMat::zeros(1, 0)]),
            &c,
            &inc,
        )
        .unwrap();
        assert_eq!(&phi_cone.homology_dims()[..2], &rel.homology_dims()[..]);
    }

    #[test]
    fn non_chain_map_rejected() {
        let c = interval();
        let bad = vec![QMat::identity(2), QMat::zeros(1, 1)];
        assert!(matches!(mapping_cone(&c, &c, &bad), Err(Error::NotAChainMap(_))));
    }
}
