//! Chow rings of simplicial fans, presented as cone-supported monomials in
//! the ray variables modulo the linear relations.

use std::collections::HashMap;

use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactla::{int, QMat, Rat};
use crate::fan::{ConeId, Fan};
use crate::homology::{homology_table, Space, Theory};
use crate::weights::{check_balancing, Orientation};

/// A monomial as a sorted multiset of ray ids.
pub type Monomial = Vec<usize>;

fn support(m: &Monomial) -> Vec<usize> {
    let mut s = m.clone();
    s.dedup();
    s
}

/// Degree-`k` monomials whose support is a cone, in lexicographic order.
fn monomials(fan: &Fan, k: usize) -> Vec<Monomial> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(fan: &Fan, k: usize, start: usize, cur: &mut Monomial, out: &mut Vec<Monomial>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for r in start..fan.num_rays() {
            cur.push(r);
            if fan.cone_id(&support(cur)).is_some() {
                rec(fan, k, r, cur, out);
            }
            cur.pop();
        }
    }
    rec(fan, k, 0, &mut cur, &mut out);
    out
}

/// One graded piece `A^k` as a quotient of the span of cone-supported
/// monomials by the relations.
#[derive(Clone, Debug)]
struct Piece {
    monomials: Vec<Monomial>,
    index: HashMap<Monomial, usize>,
    /// Reduced row echelon form of the relations.
    relations: QMat,
    pivots: Vec<usize>,
    /// Monomial positions of the non-pivot columns: the quotient basis.
    basis: Vec<usize>,
}

impl Piece {
    fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Coordinates of the class of a vector of monomial coefficients.
    fn reduce(&self, v: &[Rat]) -> Vec<Rat> {
        let mut v = v.to_vec();
        for (i, &p) in self.pivots.iter().enumerate() {
            if v[p].is_zero() {
                continue;
            }
            let c = v[p].clone();
            for (j, vj) in v.iter_mut().enumerate() {
                let x = self.relations.get(i, j);
                if !x.is_zero() {
                    *vj -= &c * x;
                }
            }
        }
        self.basis.iter().map(|&j| v[j].clone()).collect()
    }

    fn class_of(&self, m: &Monomial) -> Option<Vec<Rat>> {
        let &i = self.index.get(m)?;
        let mut v = vec![Rat::zero(); self.monomials.len()];
        v[i] = int(1);
        Some(self.reduce(&v))
    }
}

#[derive(Clone, Debug)]
pub struct ChowRing {
    pieces: Vec<Piece>,
    dim: usize,
}

impl ChowRing {
    pub fn new(fan: &Fan) -> Result<ChowRing> {
        if !fan.is_simplicial() {
            return Err(Error::NotSimplicial);
        }
        let d = fan.dim();
        let n = fan.ambient_rank();
        let mut pieces = Vec::new();
        let mut prev: Vec<Monomial> = Vec::new();
        for k in 0..=d {
            let monos = monomials(fan, k);
            let index: HashMap<Monomial, usize> = monos.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
            let mut rows = Vec::new();
            if k > 0 {
                for mu in &prev {
                    for i in 0..n {
                        let mut row = vec![Rat::zero(); monos.len()];
                        let mut any = false;
                        for r in 0..fan.num_rays() {
                            let c = fan.ray(r)[i];
                            if c == 0 {
                                continue;
                            }
                            let mut m = mu.clone();
                            m.push(r);
                            m.sort_unstable();
                            if let Some(&j) = index.get(&m) {
                                row[j] += int(c);
                                any = true;
                            }
                        }
                        if any {
                            rows.push(row);
                        }
                    }
                }
            }
            let rel = QMat::from_rows(&rows, monos.len());
            let (r, piv) = rel.rref();
            let relations = r.select_rows(&(0..piv.len()).collect::<Vec<_>>());
            let basis = (0..monos.len()).filter(|j| !piv.contains(j)).collect();
            pieces.push(Piece {
                monomials: monos.clone(),
                index,
                relations,
                pivots: piv,
                basis,
            });
            prev = monos;
        }
        Ok(ChowRing { pieces, dim: d })
    }

    pub fn dims(&self) -> Vec<usize> {
        self.pieces.iter().map(Piece::dim).collect()
    }

    /// Monomial representatives of the basis of `A^k`.
    pub fn basis(&self, k: usize) -> Vec<Monomial> {
        let p = &self.pieces[k];
        p.basis.iter().map(|&j| p.monomials[j].clone()).collect()
    }

    /// Class in `A^{|m|}` of a monomial, zero outside the cones.
    pub fn class_of(&self, m: &Monomial) -> Vec<Rat> {
        let k = m.len();
        let mut m = m.clone();
        m.sort_unstable();
        self.pieces
            .get(k)
            .map(|p| p.class_of(&m).unwrap_or_else(|| vec![Rat::zero(); p.dim()]))
            .unwrap_or_default()
    }
}

pub fn chow_dims(fan: &Fan) -> Result<Vec<usize>> {
    Ok(ChowRing::new(fan)?.dims())
}

#[derive(Clone, Debug, Serialize)]
pub struct Pairing {
    pub k: usize,
    pub rows: usize,
    pub cols: usize,
    pub rank: usize,
    pub nondegenerate: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct PairingReport {
    pub dims: Vec<usize>,
    pub unimodular: bool,
    /// `dim A^k = dim A^{d-k}` for all `k`.
    pub symmetric_dims: bool,
    /// Facet monomials are proportional in `A^d` with ratios given by the
    /// weights, so the degree map is well defined.
    pub degree_consistent: Option<bool>,
    pub pairings: Vec<Pairing>,
    pub passes: bool,
}

pub fn chow_pd_check(fan: &Fan, w: &Orientation) -> Result<PairingReport> {
    if !check_balancing(fan, w)?.is_balanced() {
        return Err(Error::NotBalanced);
    }
    let ring = ChowRing::new(fan)?;
    let dims = ring.dims();
    let d = ring.dim;
    let symmetric_dims = (0..=d).all(|k| dims[k] == dims[d - k]);
    let unimodular = fan.is_unimodular();
    if !unimodular {
        return Ok(PairingReport {
            dims,
            unimodular,
            symmetric_dims,
            degree_consistent: None,
            pairings: Vec::new(),
            passes: symmetric_dims,
        });
    }
    let top_dim = dims[d];
    // deg on the quotient basis of A^d, from the facet monomials
    let mut degree: Option<Vec<Rat>> = None;
    let mut consistent = top_dim == 1;
    if consistent {
        for &s in fan.facets() {
            let c = ring.class_of(&fan.cone(s).rays);
            if c[0].is_zero() {
                consistent = false;
                break;
            }
            let g = int(w.get(s)) / &c[0];
            match &degree {
                None => degree = Some(vec![g]),
                Some(v) if v[0] != g => {
                    consistent = false;
                    break;
                }
                Some(_) => {}
            }
        }
    }
    let mut pairings = Vec::new();
    if let (true, Some(deg)) = (consistent, &degree) {
        for k in 0..=d {
            let left = ring.basis(k);
            let right = ring.basis(d - k);
            let mut m = QMat::zeros(left.len(), right.len());
            for (i, a) in left.iter().enumerate() {
                for (j, b) in right.iter().enumerate() {
                    let mut prod = a.clone();
                    prod.extend_from_slice(b);
                    let c = ring.class_of(&prod);
                    if !c.is_empty() {
                        m.set(i, j, &c[0] * &deg[0]);
                    }
                }
            }
            let rank = m.rank();
            pairings.push(Pairing {
                k,
                rows: left.len(),
                cols: right.len(),
                rank,
                nondegenerate: rank == left.len() && rank == right.len(),
            });
        }
    }
    let passes = consistent && pairings.iter().all(|p| p.nondegenerate);
    Ok(PairingReport {
        dims,
        unimodular,
        symmetric_dims,
        degree_consistent: Some(consistent),
        pairings,
        passes,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct FyReport {
    pub chow: Vec<usize>,
    pub diagonal: Vec<usize>,
    /// `H^{p,q}(Σ̄) = 0` for `p < q`.
    pub upper_vanishes: bool,
    /// `H^{p,0}(Σ̄) = 0` for `p > 0`.
    pub first_column_vanishes: bool,
    pub passes: bool,
}

/// Compares `A^•(Σ)` with the diagonal of `H^{•,•}(Σ̄)`.
pub fn fy_crosscheck(fan: &Fan) -> Result<FyReport> {
    let chow = chow_dims(fan)?;
    let h = homology_table(fan, &Space::Compactification, Theory::Ordinary)?;
    let d = fan.dim();
    let diagonal: Vec<usize> = (0..=d).map(|p| h.get(p, p)).collect();
    let upper_vanishes = (0..=d).all(|p| (p + 1..=d).all(|q| h.get(p, q) == 0));
    let first_column_vanishes = (1..=d).all(|p| h.get(p, 0) == 0);
    let passes = chow == diagonal && upper_vanishes && first_column_vanishes;
    Ok(FyReport {
        chow,
        diagonal,
        upper_vanishes,
        first_column_vanishes,
        passes,
    })
}

/// Facets whose monomial vanishes in `A^d`; empty for tropical fans.
pub fn vanishing_facets(fan: &Fan) -> Result<Vec<ConeId>> {
    let ring = ChowRing::new(fan)?;
    Ok(fan
        .facets()
        .iter()
        .copied()
        .filter(|&s| ring.class_of(&fan.cone(s).rays).iter().all(Zero::is_zero))
        .collect())
}
