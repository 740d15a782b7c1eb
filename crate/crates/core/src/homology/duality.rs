use rayon::prelude::*;
use serde::Serialize;

use super::{build_complex, face_set, homology_table_on, HomologyTable, Space, Theory};
use crate::compact::{compactify, ExtComplex};
use crate::error::{Error, Result};
use crate::exactla::{int, QMat, Rat};
use crate::fan::{ConeId, Fan};
use crate::homology::ChainTheory;
use crate::sheaf::{contract, Sheaf};
use crate::weights::{check_balancing, Orientation};

/// `ν_Σ = (ω(σ) ν_σ)` in `C^BM_{d,d}`, with its boundary.
#[derive(Clone, Debug)]
pub struct FundamentalCycle {
    pub coords: Vec<Rat>,
    pub boundary: Vec<Rat>,
}

impl FundamentalCycle {
    pub fn is_cycle(&self) -> bool {
        self.boundary.iter().all(|x| *x == Rat::from_integer(0.into()))
    }
}

fn facet_faces(cx: &ExtComplex) -> Vec<(ConeId, usize)> {
    let fan = cx.base();
    fan.facets()
        .iter()
        .map(|&s| (s, cx.face_id(0, s).expect("facet face")))
        .collect()
}

pub fn fundamental_cycle(fan: &Fan, w: &Orientation) -> Result<FundamentalCycle> {
    if !fan.is_pure() {
        return Err(Error::NotPure);
    }
    let cx = compactify(fan);
    let sheaf = Sheaf::new(&cx)?;
    let d = fan.dim();
    let faces = face_set(&cx, &Space::Fan, Theory::BorelMoore)?;
    let c = super::build_complex_unchecked(&sheaf, &faces, d, ChainTheory::BorelMoore);
    let mut coords = Vec::new();
    for (s, f) in facet_faces(&cx) {
        let nu = sheaf.canonical_multivector(f);
        let x = sheaf.basis(f, d).coords(&nu).expect("ν_σ spans F_d(σ)");
        coords.push(&x[0] * int(w.get(s)));
    }
    let boundary = c.boundary(d).mul_vec(&coords);
    Ok(FundamentalCycle { coords, boundary })
}

/// The degree-zero cap map `F^p(0) -> H^BM_{d-p,d}`.
#[derive(Clone, Debug, Serialize)]
pub struct CapReport {
    pub p: usize,
    pub source_dim: usize,
    pub target_dim: usize,
    pub rank: usize,
    pub images_are_cycles: bool,
}

impl CapReport {
    pub fn injective(&self) -> bool {
        self.rank == self.source_dim
    }

    pub fn surjective(&self) -> bool {
        self.rank == self.target_dim
    }

    pub fn bijective(&self) -> bool {
        self.injective() && self.surjective()
    }
}

/// Matrix of `α ↦ ι_α(ν_Σ)` into `C^BM_{d-p,d}` (columns indexed by the dual
/// basis of `F_p(0)`), with the report on its rank.
pub fn cap_degree0(cx: &ExtComplex, w: &Orientation, p: usize) -> Result<(QMat, CapReport)> {
    let fan = cx.base();
    let d = fan.dim();
    if p > d {
        return Err(Error::DegreeMismatch(format!("p = {p} exceeds the fan dimension {d}")));
    }
    let sheaf = Sheaf::new(cx)?;
    let faces = face_set(cx, &Space::Fan, Theory::BorelMoore)?;
    let c = build_complex(&sheaf, &faces, d - p, ChainTheory::BorelMoore)?;
    let origin = cx.face_id(0, 0).expect("zero face");
    let src = sheaf.basis(origin, p);
    let n = fan.ambient_rank();
    let facets = facet_faces(cx);
    let mut m = QMat::zeros(c.dim(d), src.dim());
    for j in 0..src.dim() {
        let mut alpha = vec![int(0); src.dim()];
        alpha[j] = int(1);
        let l = src.extend_form(&alpha);
        let mut row = 0;
        for &(s, f) in &facets {
            let nu = sheaf.canonical_multivector(f);
            let img = contract(n, p, &l, d, &nu)?;
            let tgt = sheaf.basis(f, d - p);
            let x = tgt.coords(&img).expect("contraction stays in F_{d-p}(σ)");
            for (i, v) in x.into_iter().enumerate() {
                m.set(row + i, j, v * int(w.get(s)));
            }
            row += tgt.dim();
        }
    }
    let images_are_cycles = c.boundary(d).mul(&m).is_zero();
    let target_dim = c.cycles(d).cols();
    let report = CapReport {
        p,
        source_dim: src.dim(),
        target_dim,
        rank: m.rank(),
        images_are_cycles,
    };
    Ok((m, report))
}

#[derive(Clone, Debug, Serialize)]
pub struct PdReport {
    pub dim: usize,
    pub borel_moore: HomologyTable,
    /// `H^BM_{a,b} = 0` for all `b ≠ d`.
    pub vanishing: bool,
    pub caps: Vec<CapReport>,
    pub holds: bool,
}

impl PdReport {
    pub fn all_injective(&self) -> bool {
        self.caps.iter().all(CapReport::injective)
    }
}

/// Poincaré duality of a balanced fan: BM vanishing off the top row and
/// bijectivity of the degree-zero cap maps.
pub fn pd_check(fan: &Fan, w: &Orientation) -> Result<PdReport> {
    if !check_balancing(fan, w)?.is_balanced() {
        return Err(Error::NotBalanced);
    }
    let cx = compactify(fan);
    pd_check_on(&cx, w)
}

fn pd_check_on(cx: &ExtComplex, w: &Orientation) -> Result<PdReport> {
    let d = cx.base().dim();
    let bm = homology_table_on(cx, &Space::Fan, Theory::BorelMoore)?;
    let vanishing = (0..=d).all(|a| (0..=d).all(|b| b == d || bm.get(a, b) == 0));
    let caps = (0..=d)
        .into_par_iter()
        .map(|p| cap_degree0(cx, w, p).map(|(_, r)| r))
        .collect::<Result<Vec<_>>>()?;
    let holds = vanishing && caps.iter().all(|c| c.bijective() && c.images_are_cycles);
    Ok(PdReport {
        dim: d,
        borel_moore: bm,
        vanishing,
        caps,
        holds,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SmoothCriterion {
    /// Poincaré duality for the fan and all its star fans.
    Local,
    /// Unique ray relation in codimension one plus BM vanishing on all stars.
    Aksnes,
}

#[derive(Clone, Debug, Serialize)]
pub struct StarReport {
    pub cone: ConeId,
    pub star_dim: usize,
    /// Poincaré duality of the star (local criterion).
    pub pd: Option<bool>,
    /// `H^BM_{a,b}(Σ^σ) = 0` for `b ≠ d - dim σ`.
    pub vanishing: bool,
    /// For codimension-one cones: the rays of the star satisfy one relation.
    pub unique_relation: Option<bool>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SmoothReport {
    pub criterion: SmoothCriterion,
    pub smooth: bool,
    pub stars: Vec<StarReport>,
}

pub fn smooth_check(fan: &Fan, w: &Orientation, criterion: SmoothCriterion) -> Result<SmoothReport> {
    if !check_balancing(fan, w)?.is_balanced() {
        return Err(Error::NotBalanced);
    }
    let weighted = fan.clone().with_weights(w.clone())?;
    let d = fan.dim();
    let stars = (0..fan.num_cones())
        .into_par_iter()
        .map(|sigma| -> Result<StarReport> {
            let sd = weighted.star_fan(sigma)?;
            let star = &sd.star;
            let sw = star.orientation();
            let cx = compactify(star);
            let k = star.dim();
            let (pd, vanishing) = match criterion {
                SmoothCriterion::Local => {
                    let r = pd_check_on(&cx, &sw)?;
                    (Some(r.holds), r.vanishing)
                }
                SmoothCriterion::Aksnes => {
                    let bm = homology_table_on(&cx, &Space::Fan, Theory::BorelMoore)?;
                    let v = (0..=k).all(|a| (0..=k).all(|b| b == k || bm.get(a, b) == 0));
                    (None, v)
                }
            };
            let unique_relation = (criterion == SmoothCriterion::Aksnes && d > 0 && fan.cone(sigma).dim + 1 == d)
                .then(|| {
                    let cols = star.rays().to_vec();
                    let r = QMat::from_i64_cols(&cols, star.ambient_rank()).rank();
                    r + 1 == star.num_rays()
                });
            Ok(StarReport {
                cone: sigma,
                star_dim: k,
                pd,
                vanishing,
                unique_relation,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let smooth = stars.iter().all(|s| match criterion {
        SmoothCriterion::Local => s.pd == Some(true),
        SmoothCriterion::Aksnes => s.vanishing && s.unique_relation != Some(false),
    });
    Ok(SmoothReport {
        criterion,
        smooth,
        stars,
    })
}
