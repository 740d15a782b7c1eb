//! Coefficient spaces `F_p(γ)` of the compactification, their structure
//! maps along face inclusions, and contractions.
//!
//! Multivectors are stored in the coordinates of `∧^p Q^m` with the
//! lexicographic basis of `p`-subsets, where `m` is the rank of `N^sed`.

use std::collections::HashMap;
use std::sync::OnceLock;

use num_traits::Zero;

use crate::compact::{ExtComplex, FaceId};
use crate::error::{Error, Result};
use crate::exactla::{echelon_coords, int, IntMat, QMat, Rat};
use crate::fan::ConeId;

/// Largest lattice rank the dense exterior-algebra code accepts.
pub const MAX_RANK: usize = 12;

/// Lexicographic enumeration of the `p`-subsets of `0..n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WedgeBasis {
    pub n: usize,
    pub p: usize,
    subsets: Vec<Vec<usize>>,
    index: HashMap<Vec<usize>, usize>,
}

fn subsets(n: usize, p: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, p: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == p {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < p - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if p <= n {
        rec(0, n, p, &mut Vec::new(), &mut out);
    }
    out
}

impl WedgeBasis {
    pub fn new(n: usize, p: usize) -> WedgeBasis {
        let subsets = subsets(n, p);
        let index = subsets.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect();
        WedgeBasis {
            n,
            p,
            subsets,
            index,
        }
    }

    pub fn dim(&self) -> usize {
        self.subsets.len()
    }

    pub fn subset(&self, i: usize) -> &[usize] {
        &self.subsets[i]
    }

    pub fn position(&self, s: &[usize]) -> Option<usize> {
        self.index.get(s).copied()
    }

    pub fn subsets(&self) -> &[Vec<usize>] {
        &self.subsets
    }
}

/// `v_1 ∧ ... ∧ v_p` for integer vectors of length `n`.
pub fn wedge_vectors(n: usize, vectors: &[Vec<i64>]) -> Vec<i64> {
    let p = vectors.len();
    let basis = WedgeBasis::new(n, p);
    let m = IntMat::from_cols(vectors, n);
    basis
        .subsets()
        .iter()
        .map(|rows| m.select_rows(rows).det())
        .collect()
}

/// Sign of the permutation sorting the concatenation of two disjoint sorted sets.
fn shuffle_sign(a: &[usize], b: &[usize]) -> i64 {
    let inversions: usize = a.iter().map(|x| b.iter().filter(|y| *y < x).count()).sum();
    if inversions.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// Exterior product `∧^a × ∧^b -> ∧^{a+b}` in coordinates.
pub fn wedge_product(n: usize, a: usize, x: &[Rat], b: usize, y: &[Rat]) -> Vec<Rat> {
    let (ba, bb, bc) = (WedgeBasis::new(n, a), WedgeBasis::new(n, b), WedgeBasis::new(n, a + b));
    let mut out = vec![Rat::zero(); bc.dim()];
    for (i, xi) in x.iter().enumerate() {
        if xi.is_zero() {
            continue;
        }
        let s = ba.subset(i);
        for (j, yj) in y.iter().enumerate() {
            if yj.is_zero() {
                continue;
            }
            let t = bb.subset(j);
            if s.iter().any(|e| t.contains(e)) {
                continue;
            }
            let mut u: Vec<usize> = s.iter().chain(t).copied().collect();
            u.sort_unstable();
            let sign = shuffle_sign(s, t);
            out[bc.position(&u).unwrap()] += xi * yj * int(sign);
        }
    }
    out
}

/// `∧^p` of an `m x n` integer matrix, as a `C(m,p) x C(n,p)` matrix of minors.
pub fn wedge_power(map: &IntMat, p: usize) -> QMat {
    let (rb, cb) = (WedgeBasis::new(map.rows(), p), WedgeBasis::new(map.cols(), p));
    let mut out = QMat::zeros(rb.dim(), cb.dim());
    for (j, cols) in cb.subsets().iter().enumerate() {
        let sub = map.select_cols(cols);
        for (i, rows) in rb.subsets().iter().enumerate() {
            let d = sub.select_rows(rows).det();
            if d != 0 {
                out.set(i, j, int(d));
            }
        }
    }
    out
}

/// Contraction `ι_α(ν)` of a `k`-form by a `p`-vector in rank `n`, with
/// `ι_{e^{i_1} ∧ ... ∧ e^{i_k}} = ι_{e^{i_k}} ∘ ... ∘ ι_{e^{i_1}}`.
pub fn contract(n: usize, k: usize, alpha: &[Rat], p: usize, nu: &[Rat]) -> Result<Vec<Rat>> {
    if k > p {
        return Err(Error::DegreeMismatch(format!("cannot contract a {k}-form with a {p}-vector")));
    }
    let (bk, bp, bq) = (WedgeBasis::new(n, k), WedgeBasis::new(n, p), WedgeBasis::new(n, p - k));
    if alpha.len() != bk.dim() || nu.len() != bp.dim() {
        return Err(Error::DegreeMismatch("coordinate vector of the wrong length".into()));
    }
    let mut out = vec![Rat::zero(); bq.dim()];
    for (i, a) in alpha.iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        let idx = bk.subset(i);
        for (j, v) in nu.iter().enumerate() {
            if v.is_zero() {
                continue;
            }
            let mut rest = bp.subset(j).to_vec();
            let mut sign = 1i64;
            let mut ok = true;
            for e in idx {
                match rest.iter().position(|x| x == e) {
                    Some(pos) => {
                        if pos % 2 == 1 {
                            sign = -sign;
                        }
                        rest.remove(pos);
                    }
                    None => {
                        ok = false;
                        break;
                    }
                }
            }
            if ok {
                out[bq.position(&rest).unwrap()] += a * v * int(sign);
            }
        }
    }
    Ok(out)
}

/// A canonical echelon basis of `F_p(γ)` inside `∧^p Q^m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoeffBasis {
    pub face: FaceId,
    pub p: usize,
    pub basis: QMat,
    pub pivots: Vec<usize>,
}

impl CoeffBasis {
    pub fn dim(&self) -> usize {
        self.basis.cols()
    }

    /// Coordinates of a multivector of `F_p(γ)`; `None` if outside.
    pub fn coords(&self, v: &[Rat]) -> Option<Vec<Rat>> {
        echelon_coords(&self.basis, &self.pivots, v)
    }

    /// A multiform extending the dual basis vector combination `alpha`.
    pub fn extend_form(&self, alpha: &[Rat]) -> Vec<Rat> {
        let mut l = vec![Rat::zero(); self.basis.rows()];
        for (a, &p) in alpha.iter().zip(&self.pivots) {
            l[p] = a.clone();
        }
        l
    }
}

/// Coefficient cosheaf on an extended complex, optionally restricted to the
/// support of a subfan (a mask over cone ids of the base fan).
pub struct Sheaf<'a> {
    cx: &'a ExtComplex,
    mask: Option<Vec<bool>>,
    max_p: usize,
    cache: Vec<OnceLock<CoeffBasis>>,
}

impl<'a> Sheaf<'a> {
    pub fn new(cx: &'a ExtComplex) -> Result<Sheaf<'a>> {
        Sheaf::build(cx, None)
    }

    /// `F^Δ_p` for a subfan `Δ` given by the cones it contains.
    pub fn restricted(cx: &'a ExtComplex, cones: &[ConeId]) -> Result<Sheaf<'a>> {
        let mut mask = vec![false; cx.base().num_cones()];
        for &c in cones {
            mask[c] = true;
        }
        Sheaf::build(cx, Some(mask))
    }

    fn build(cx: &'a ExtComplex, mask: Option<Vec<bool>>) -> Result<Sheaf<'a>> {
        let n = cx.base().ambient_rank();
        if n > MAX_RANK {
            return Err(Error::RankTooLarge(n));
        }
        let cache = (0..cx.num_faces() * (n + 1)).map(|_| OnceLock::new()).collect();
        Ok(Sheaf {
            cx,
            mask,
            max_p: n,
            cache,
        })
    }

    pub fn complex(&self) -> &ExtComplex {
        self.cx
    }

    pub fn in_support(&self, c: ConeId) -> bool {
        self.mask.as_ref().is_none_or(|m| m[c])
    }

    /// `F_p(γ)`; zero-dimensional for faces outside the support.
    pub fn basis(&self, face: FaceId, p: usize) -> &CoeffBasis {
        assert!(p <= self.max_p, "degree {p} exceeds the lattice rank");
        self.cache[face * (self.max_p + 1) + p].get_or_init(|| self.compute_basis(face, p))
    }

    pub fn dim(&self, face: FaceId, p: usize) -> usize {
        if p > self.max_p {
            return 0;
        }
        self.basis(face, p).dim()
    }

    fn compute_basis(&self, face: FaceId, p: usize) -> CoeffBasis {
        let f = self.cx.face(face);
        let fan = self.cx.base();
        let m = f.ambient();
        let wb = WedgeBasis::new(m, p);
        let mut cols: Vec<Vec<Rat>> = Vec::new();
        if self.in_support(f.top) {
            for eta in fan.cones_above(f.top) {
                if !self.in_support(eta) {
                    continue;
                }
                let maximal = fan.up_covers(eta).iter().all(|&e| !self.in_support(e));
                if !maximal {
                    continue;
                }
                let top = self.cx.face_id(f.sed, eta).expect("face above");
                let gens = self.cx.face(top).lattice.sub_basis.columns();
                for s in subsets(gens.len(), p) {
                    let vs: Vec<Vec<i64>> = s.iter().map(|&i| gens[i].clone()).collect();
                    let w = if p == 0 { vec![1] } else { wedge_vectors(m, &vs) };
                    cols.push(w.into_iter().map(int).collect());
                }
            }
        }
        let basis = QMat::from_cols(&cols, wb.dim()).column_echelon();
        let pivots = basis.echelon_pivots();
        CoeffBasis {
            face,
            p,
            basis,
            pivots,
        }
    }

    /// Matrix of `i_{δ ≻ γ}: F_p(δ) -> F_p(γ)` for `γ ≼ δ`.
    pub fn coeff_map(&self, gamma: FaceId, delta: FaceId, p: usize) -> Result<QMat> {
        if !self.cx.is_face(gamma, delta) {
            return Err(Error::NotACover(gamma, delta));
        }
        let (bg, bd) = (self.basis(gamma, p), self.basis(delta, p));
        let mut out = QMat::zeros(bg.dim(), bd.dim());
        if bd.dim() == 0 || bg.dim() == 0 {
            return Ok(out);
        }
        let (tg, td) = (self.cx.face(gamma).sed, self.cx.face(delta).sed);
        let image = if tg == td {
            bd.basis.clone()
        } else {
            wedge_power(&self.cx.projection(td, tg), p).mul(&bd.basis)
        };
        for j in 0..image.cols() {
            let c = bg
                .coords(&image.col(j))
                .expect("structure map lands in the coefficient space");
            for (i, x) in c.into_iter().enumerate() {
                out.set(i, j, x);
            }
        }
        Ok(out)
    }

    /// The multivector `ν_δ` of a face, in the wedge coordinates of its sedentarity.
    pub fn canonical_multivector(&self, face: FaceId) -> Vec<Rat> {
        let f = self.cx.face(face);
        let gens = f.lattice.sub_basis.columns();
        let w = if gens.is_empty() {
            vec![1]
        } else {
            wedge_vectors(f.ambient(), &gens)
        };
        let s = self.cx.nu_sign(face) as i64;
        w.into_iter().map(|x| int(x * s)).collect()
    }
}

/// Checks the pairing identity `<i*(α), v> = <α, i(v)>` for the dual maps.
pub fn dual_pairing_holds(map: &QMat, alpha: &[Rat], v: &[Rat]) -> bool {
    let lhs: Rat = map
        .transpose()
        .mul_vec(alpha)
        .iter()
        .zip(v)
        .map(|(a, b)| a * b)
        .fold(Rat::zero(), |s, x| s + x);
    let rhs: Rat = alpha
        .iter()
        .zip(map.mul_vec(v))
        .map(|(a, b)| a * b)
        .fold(Rat::zero(), |s, x| s + x);
    lhs == rhs
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::compact::compactify;
    use crate::fan::Fan;

    fn r(v: &[i64]) -> Vec<Rat> {
        v.iter().map(|&x| int(x)).collect()
    }

    fn cross() -> Fan {
        let rays = vec![vec![1, 0], vec![-1, 0], vec![0, 1], vec![0, -1]];
        Fan::new(2, rays, vec![vec![0], vec![1], vec![2], vec![3]]).unwrap()
    }

    fn lambda2() -> Fan {
        let rays = vec![vec![1, 0], vec![0, 1], vec![-1, 0], vec![0, -1]];
        Fan::new(2, rays, vec![vec![0, 1], vec![1, 2], vec![2, 3], vec![0, 3]]).unwrap()
    }

    #[test]
    fn contraction_signs() {
        // e^1 on e1∧e2 and e^2 on e1∧e2
        assert_eq!(contract(2, 1, &r(&[1, 0]), 2, &r(&[1])).unwrap(), r(&[0, 1]));
        assert_eq!(contract(2, 1, &r(&[0, 1]), 2, &r(&[1])).unwrap(), r(&[-1, 0]));
        assert_eq!(contract(2, 2, &r(&[1]), 2, &r(&[1])).unwrap(), r(&[1]));
        assert!(contract(2, 2, &r(&[1]), 1, &r(&[1, 0])).is_err());
    }

    #[test]
    fn wedge_product_is_graded_commutative() {
        let x = r(&[1, 2, 3]);
        let y = r(&[0, 1, -1]);
        let xy = wedge_product(3, 1, &x, 1, &y);
        let yx = wedge_product(3, 1, &y, 1, &x);
        assert_eq!(xy, yx.iter().map(|v| -v).collect::<Vec<_>>());
        assert_eq!(xy, wedge_vectors(3, &[vec![1, 2, 3], vec![0, 1, -1]]).into_iter().map(int).collect::<Vec<_>>());
    }

    #[test]
    fn cross_origin_dims() {
        let c = compactify(&cross());
        let s = Sheaf::new(&c).unwrap();
        assert_eq!(s.dim(0, 0), 1);
        assert_eq!(s.dim(0, 1), 2);
        assert_eq!(s.dim(0, 2), 0);
    }

    #[test]
    fn maps_in_degree_zero_are_identities() {
        let c = compactify(&lambda2());
        let s = Sheaf::new(&c).unwrap();
        for cv in c.covers() {
            assert_eq!(s.coeff_map(cv.lower, cv.upper, 0).unwrap(), QMat::identity(1));
        }
    }

    #[test]
    fn functoriality_on_lambda() {
        let c = compactify(&lambda2());
        let s = Sheaf::new(&c).unwrap();
        for p in 0..=2 {
            for a in c.covers() {
                for b in c.covers_below(a.lower) {
                    let direct = s.coeff_map(b.lower, a.upper, p).unwrap();
                    let composed = s
                        .coeff_map(b.lower, a.lower, p)
                        .unwrap()
                        .mul(&s.coeff_map(a.lower, a.upper, p).unwrap());
                    assert_eq!(direct, composed);
                }
            }
        }
    }

    #[test]
    fn drop_map_kills_the_ray_direction() {
        let f = lambda2();
        let c = compactify(&f);
        let s = Sheaf::new(&c).unwrap();
        let ray = f.ray_cone(0);
        let upper = c.face_id(0, ray).unwrap();
        let lower = c.face_id(ray, ray).unwrap();
        let m = s.coeff_map(lower, upper, 1).unwrap();
        // F_1 at the ray is all of Q^2; the e_1 direction dies at infinity
        assert_eq!((m.rows(), m.cols()), (1, 2));
        assert_eq!(m.rank(), 1);
        let e1 = s.basis(upper, 1).coords(&[int(1), int(0)]).unwrap();
        assert!(m.mul_vec(&e1).iter().all(|x| x.is_zero()));
    }
}
