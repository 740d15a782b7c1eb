//! The canonical compactification as a face complex.
//!
//! Faces are pairs `C^tau_sigma` with `tau ≼ sigma`; `tau` is the
//! sedentarity. A face lives in `N^tau`, and its tangent lattice is
//! `N_sigma / N_tau` written in the coordinates of `N^tau`.

use std::collections::{BTreeSet, HashMap};

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exactla::{quotient_lattice, to_qmat, IntMat, QMat, QuotientData, Rat};
use crate::fan::{ConeId, Fan};

pub type FaceId = usize;

#[derive(Clone, Debug)]
pub struct ExtFace {
    pub id: FaceId,
    pub sed: ConeId,
    pub top: ConeId,
    pub dim: usize,
    /// `N_delta` inside `N^sed`; `sub_basis` carries the canonical multivector.
    pub lattice: QuotientData,
}

impl ExtFace {
    /// Rank of the lattice `N^sed` the face lives in.
    pub fn ambient(&self) -> usize {
        self.lattice.ambient_rank
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CoverKind {
    /// `C^tau_{sigma'} ⋖ C^tau_sigma` with `sigma' ⋖ sigma`.
    SameSed,
    /// `C^{tau'}_sigma ⋖ C^tau_sigma` with `tau ⋖ tau'`.
    Drop,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Cover {
    pub lower: FaceId,
    pub upper: FaceId,
    pub kind: CoverKind,
    pub sign: i8,
}

#[derive(Clone, Debug)]
pub struct ExtComplex {
    base: Fan,
    faces: Vec<ExtFace>,
    index: HashMap<(ConeId, ConeId), FaceId>,
    covers: Vec<Cover>,
    cover_index: HashMap<(FaceId, FaceId), usize>,
    down: Vec<Vec<usize>>,
    up: Vec<Vec<usize>>,
    /// Sign applied to each canonical multivector (all +1 by default).
    nu_sign: Vec<i8>,
}

fn sign_of(x: &Rat) -> i8 {
    if x.is_positive() {
        1
    } else if x.is_negative() {
        -1
    } else {
        0
    }
}

/// `ϖ_delta(v_1 ∧ ... ∧ v_k)` relative to the wedge of the columns of `basis`.
fn evaluate_top_form(basis: &IntMat, vectors: &[Vec<Rat>]) -> Rat {
    let k = basis.cols();
    assert_eq!(vectors.len(), k);
    if k == 0 {
        return Rat::one();
    }
    let b = to_qmat(basis);
    let cols: Vec<Vec<Rat>> = vectors
        .iter()
        .map(|v| b.solve(v).expect("vector lies in the face lattice"))
        .collect();
    QMat::from_cols(&cols, k).det()
}

fn to_rat(v: &[i64]) -> Vec<Rat> {
    v.iter().map(|&x| Rat::from_integer(x.into())).collect()
}

impl ExtComplex {
    pub fn base(&self) -> &Fan {
        &self.base
    }

    pub fn faces(&self) -> &[ExtFace] {
        &self.faces
    }

    pub fn face(&self, id: FaceId) -> &ExtFace {
        &self.faces[id]
    }

    pub fn num_faces(&self) -> usize {
        self.faces.len()
    }

    pub fn face_id(&self, sed: ConeId, top: ConeId) -> Option<FaceId> {
        self.index.get(&(sed, top)).copied()
    }

    pub fn covers(&self) -> &[Cover] {
        &self.covers
    }

    /// Covers `γ ⋖ delta` with the given upper face.
    pub fn covers_below(&self, delta: FaceId) -> impl Iterator<Item = &Cover> + '_ {
        self.down[delta].iter().map(move |&i| &self.covers[i])
    }

    /// Covers `delta ⋖ ε` with the given lower face.
    pub fn covers_above(&self, delta: FaceId) -> impl Iterator<Item = &Cover> + '_ {
        self.up[delta].iter().map(move |&i| &self.covers[i])
    }

    pub fn sign(&self, lower: FaceId, upper: FaceId) -> Result<i8> {
        self.cover_index
            .get(&(lower, upper))
            .map(|&i| self.covers[i].sign)
            .ok_or(Error::NotACover(lower, upper))
    }

    /// `γ ≼ delta` in the face order.
    pub fn is_face(&self, gamma: FaceId, delta: FaceId) -> bool {
        let (g, d) = (&self.faces[gamma], &self.faces[delta]);
        let f = &self.base;
        f.is_face(d.sed, g.sed) && f.is_face(g.sed, g.top) && f.is_face(g.top, d.top)
    }

    /// Sign of the canonical multivector of a face relative to the default.
    pub fn nu_sign(&self, id: FaceId) -> i8 {
        self.nu_sign[id]
    }

    /// The same complex with the canonical multivectors multiplied by the
    /// given signs; cover signs change accordingly.
    pub fn with_nu_signs(&self, signs: &[i8]) -> ExtComplex {
        assert_eq!(signs.len(), self.faces.len());
        let mut c = self.clone();
        for cov in &mut c.covers {
            let old = self.nu_sign[cov.lower] * self.nu_sign[cov.upper];
            let new = signs[cov.lower] * signs[cov.upper];
            cov.sign *= old * new;
        }
        c.nu_sign = signs.to_vec();
        c
    }

    /// Test fixture: the same complex with one cover sign negated.
    pub fn with_flipped_sign(&self, cover: usize) -> ExtComplex {
        let mut c = self.clone();
        c.covers[cover].sign = -c.covers[cover].sign;
        c
    }

    /// Matrix of `N^tau -> N^{tau'}` for `tau ≼ tau'`, in quotient coordinates.
    pub fn projection(&self, tau: ConeId, tau2: ConeId) -> IntMat {
        let f = &self.base;
        f.lattice(tau2).proj.mul(&f.lattice(tau).quot_basis)
    }

    /// Faces whose sedentarity lies in `seds`, which must be closed under
    /// taking faces.
    pub fn open_subcomplex(&self, seds: &[ConeId]) -> Result<Vec<FaceId>> {
        let set: BTreeSet<ConeId> = seds.iter().copied().collect();
        for &s in &set {
            if s >= self.base.num_cones() {
                return Err(Error::NotACone(s.to_string()));
            }
            if let Some(t) = self.base.faces_of(s).into_iter().find(|t| !set.contains(t)) {
                return Err(Error::InvalidSedentarity(format!(
                    "cone {s} is present but its face {t} is not"
                )));
            }
        }
        Ok(self
            .faces
            .iter()
            .filter(|f| set.contains(&f.sed))
            .map(|f| f.id)
            .collect())
    }

    /// Faces with sedentarity containing `sigma`: a copy of the
    /// compactified star fan at `sigma`.
    pub fn faces_at_least(&self, sigma: ConeId) -> Vec<FaceId> {
        self.faces
            .iter()
            .filter(|f| self.base.is_face(sigma, f.sed))
            .map(|f| f.id)
            .collect()
    }
}

/// Builds the face complex of the canonical compactification.
pub fn compactify(fan: &Fan) -> ExtComplex {
    let mut faces = Vec::new();
    let mut index = HashMap::new();
    for tau in 0..fan.num_cones() {
        let lt = fan.lattice(tau);
        let m = lt.quotient_rank();
        for sigma in fan.cones_above(tau) {
            let gens = lt.proj.mul(&fan.generators(sigma));
            let mut lattice = quotient_lattice(&gens, m);
            let dim = fan.cone(sigma).dim - fan.cone(tau).dim;
            if dim == 1 {
                // orient towards the cone
                let n = fan.normal_in_quotient(tau, sigma);
                lattice.sub_basis = IntMat::from_cols(&[n], m);
            }
            let id = faces.len();
            index.insert((tau, sigma), id);
            faces.push(ExtFace {
                id,
                sed: tau,
                top: sigma,
                dim,
                lattice,
            });
        }
    }

    let mut covers = Vec::new();
    for delta in &faces {
        let (tau, sigma) = (delta.sed, delta.top);
        // same sedentarity: C^tau_{sigma'} with tau ≼ sigma' ⋖ sigma
        for &s2 in fan.down_covers(sigma) {
            if !fan.is_face(tau, s2) {
                continue;
            }
            let gamma = &faces[index[&(tau, s2)]];
            let r = fan
                .cone(sigma)
                .rays
                .iter()
                .find(|r| fan.cone(s2).rays.binary_search(r).is_err())
                .expect("cover adds a ray");
            let n = fan.lattice(tau).project(fan.ray(*r));
            let mut vs = vec![to_rat(&n)];
            vs.extend(gamma.lattice.sub_basis.columns().iter().map(|c| to_rat(c)));
            let val = evaluate_top_form(&delta.lattice.sub_basis, &vs);
            covers.push(Cover {
                lower: gamma.id,
                upper: delta.id,
                kind: CoverKind::SameSed,
                sign: sign_of(&val),
            });
        }
        // sedentarity drop: C^{tau'}_sigma with tau ⋖ tau' ≼ sigma
        for &t2 in fan.up_covers(tau) {
            if !fan.is_face(t2, sigma) {
                continue;
            }
            let gamma = &faces[index[&(t2, sigma)]];
            let e = fan.normal_in_quotient(tau, t2);
            let lift = fan.lattice(tau).proj.mul(&fan.lattice(t2).quot_basis);
            let mut vs = vec![to_rat(&e)];
            for b in gamma.lattice.sub_basis.columns() {
                vs.push(to_rat(&lift.mul_vec(&b)));
            }
            let val = -evaluate_top_form(&delta.lattice.sub_basis, &vs);
            covers.push(Cover {
                lower: gamma.id,
                upper: delta.id,
                kind: CoverKind::Drop,
                sign: sign_of(&val),
            });
        }
    }
    covers.sort_by_key(|c| (c.upper, c.lower));
    debug_assert!(covers.iter().all(|c| c.sign != 0));
    let mut cover_index = HashMap::new();
    let mut down = vec![Vec::new(); faces.len()];
    let mut up = vec![Vec::new(); faces.len()];
    for (i, c) in covers.iter().enumerate() {
        cover_index.insert((c.lower, c.upper), i);
        down[c.upper].push(i);
        up[c.lower].push(i);
    }
    let n = faces.len();
    ExtComplex {
        base: fan.clone(),
        faces,
        index,
        covers,
        cover_index,
        down,
        up,
        nu_sign: vec![1; n],
    }
}

/// Checks that every interval of length two carries cancelling signs.
pub fn signs_coherent(c: &ExtComplex) -> bool {
    for eps in 0..c.num_faces() {
        let mut acc: HashMap<FaceId, i64> = HashMap::new();
        for mid in c.covers_below(eps) {
            for low in c.covers_below(mid.lower) {
                *acc.entry(low.lower).or_default() += (mid.sign * low.sign) as i64;
            }
        }
        if acc.values().any(|v| !v.is_zero()) {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lambda1() -> Fan {
        Fan::new(1, vec![vec![1], vec![-1]], vec![vec![0], vec![1]]).unwrap()
    }

    fn lambda2() -> Fan {
        let rays = vec![vec![1, 0], vec![0, 1], vec![-1, 0], vec![0, -1]];
        Fan::new(2, rays, vec![vec![0, 1], vec![1, 2], vec![2, 3], vec![0, 3]]).unwrap()
    }

    #[test]
    fn segment_faces_and_signs() {
        let c = compactify(&lambda1());
        assert_eq!(c.num_faces(), 5);
        // each ray segment: +origin, -point at infinity
        for f in c.faces().iter().filter(|f| f.dim == 1) {
            let signs: Vec<(CoverKind, i8)> = c.covers_below(f.id).map(|cv| (cv.kind, cv.sign)).collect();
            assert!(signs.contains(&(CoverKind::SameSed, 1)));
            assert!(signs.contains(&(CoverKind::Drop, -1)));
        }
    }

    #[test]
    fn lambda_counts_and_coherence() {
        let c = compactify(&lambda2());
        assert_eq!(c.num_faces(), 25);
        assert!(signs_coherent(&c));
        assert!(!signs_coherent(&c.with_flipped_sign(3)));
    }

    #[test]
    fn sign_rejects_non_covers() {
        let c = compactify(&lambda2());
        let top = c.face_id(0, 5).unwrap();
        assert!(matches!(c.sign(0, top), Err(Error::NotACover(..))));
    }

    #[test]
    fn open_subcomplex_requires_down_closed() {
        let f = lambda2();
        let c = compactify(&f);
        assert_eq!(c.open_subcomplex(&[0]).unwrap().len(), 9);
        assert!(c.open_subcomplex(&[f.ray_cone(0)]).is_err());
        assert_eq!(c.open_subcomplex(&(0..f.num_cones()).collect::<Vec<_>>()).unwrap().len(), 25);
    }

    #[test]
    fn reorienting_keeps_coherence() {
        let c = compactify(&lambda2());
        let signs: Vec<i8> = (0..c.num_faces()).map(|i| if i % 3 == 0 { -1 } else { 1 }).collect();
        let d = c.with_nu_signs(&signs);
        assert!(signs_coherent(&d));
        assert_ne!(c.covers(), d.covers());
    }
}
