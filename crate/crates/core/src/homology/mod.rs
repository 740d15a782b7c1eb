//! Cellular tropical (co)homology of fans, their compactifications and
//! sedentarity-filtered open subsets.

mod complex;
mod duality;
mod modification;

use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

pub use complex::{is_chain_map, mapping_cone, ChainComplex, ChainTheory};
pub use duality::{
    cap_degree0, fundamental_cycle, pd_check, smooth_check, CapReport, FundamentalCycle, PdReport,
    SmoothCriterion, SmoothReport, StarReport,
};
pub use modification::{verify_tm_coefficients, verify_tm_homology, TmCoefficientReport, TmHomologyReport};

use crate::compact::{compactify, ExtComplex, FaceId};
use crate::error::{Error, Result};
use crate::exactla::{QMat, Rat};
use crate::fan::{ConeId, Fan};
use crate::sheaf::Sheaf;

/// Which cells enter a complex.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Space {
    /// The fan itself (faces of sedentarity zero).
    Fan,
    /// The canonical compactification.
    Compactification,
    /// The open union of strata with the given sedentarities.
    Open(Vec<ConeId>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Theory {
    /// Ordinary cohomology `H^{p,q}`.
    Ordinary,
    /// Borel–Moore homology `H^BM_{p,q}`.
    BorelMoore,
    /// Cohomology with compact support `H_c^{p,q}`.
    Compact,
}

/// Dimensions indexed by `[p][q]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HomologyTable {
    pub theory: Theory,
    pub grid: Vec<Vec<usize>>,
}

impl HomologyTable {
    pub fn get(&self, p: usize, q: usize) -> usize {
        self.grid.get(p).and_then(|r| r.get(q)).copied().unwrap_or(0)
    }
}

impl fmt::Display for HomologyTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cols = self.grid.first().map_or(0, Vec::len);
        let width = self
            .grid
            .iter()
            .flatten()
            .map(|x| x.to_string().len())
            .max()
            .unwrap_or(1)
            .max(3);
        write!(f, "{:>5}", "p\\q")?;
        for q in 0..cols {
            write!(f, " {q:>width$}")?;
        }
        writeln!(f)?;
        for (p, row) in self.grid.iter().enumerate() {
            write!(f, "{p:>5}")?;
            for x in row {
                write!(f, " {x:>width$}")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// Faces of `cx` entering the complex for a space and theory.
pub fn face_set(cx: &ExtComplex, space: &Space, theory: Theory) -> Result<Vec<FaceId>> {
    match space {
        Space::Fan => Ok(match theory {
            Theory::Ordinary => vec![cx.face_id(0, 0).expect("zero cone")],
            _ => cx.open_subcomplex(&[0])?,
        }),
        Space::Compactification => Ok((0..cx.num_faces()).collect()),
        Space::Open(seds) => {
            if theory == Theory::Ordinary {
                return Err(Error::InvalidComplex(
                    "ordinary cohomology of a semi-open space is not supported".into(),
                ));
            }
            cx.open_subcomplex(seds)
        }
    }
}

fn chain_theory(space: &Space, theory: Theory) -> ChainTheory {
    match (space, theory) {
        (Space::Open(_), _) => ChainTheory::SemiOpen,
        (_, Theory::Ordinary) => ChainTheory::Ordinary,
        (_, Theory::BorelMoore) => ChainTheory::BorelMoore,
        (_, Theory::Compact) => ChainTheory::CompactSupport,
    }
}

/// Assembles `C_{p,•}` on the given faces, without checking `∂² = 0`.
pub fn build_complex_unchecked(
    sheaf: &Sheaf,
    faces: &[FaceId],
    p: usize,
    theory: ChainTheory,
) -> ChainComplex {
    let cx = sheaf.complex();
    let top = cx.base().dim();
    let mut in_set = vec![false; cx.num_faces()];
    for &f in faces {
        in_set[f] = true;
    }
    let mut terms: Vec<Vec<FaceId>> = vec![Vec::new(); top + 1];
    for &f in faces {
        terms[cx.face(f).dim].push(f);
    }
    for t in &mut terms {
        t.sort_unstable();
    }
    let mut offset = vec![0usize; cx.num_faces()];
    let dims: Vec<usize> = terms
        .iter()
        .map(|t| {
            let mut acc = 0;
            for &f in t {
                offset[f] = acc;
                acc += sheaf.dim(f, p);
            }
            acc
        })
        .collect();
    let boundaries: Vec<QMat> = (0..=top)
        .map(|q| {
            if q == 0 {
                return QMat::zeros(0, dims[0]);
            }
            let mut m = QMat::zeros(dims[q - 1], dims[q]);
            for &delta in &terms[q] {
                if sheaf.dim(delta, p) == 0 {
                    continue;
                }
                for cv in cx.covers_below(delta) {
                    if !in_set[cv.lower] || sheaf.dim(cv.lower, p) == 0 {
                        continue;
                    }
                    let block = sheaf
                        .coeff_map(cv.lower, delta, p)
                        .expect("cover is a face relation");
                    let block = if cv.sign < 0 { block.scale(&Rat::from_integer((-1).into())) } else { block };
                    m.set_block(offset[cv.lower], offset[delta], &block);
                }
            }
            m
        })
        .collect();
    ChainComplex::new(theory, p, dims, boundaries)
}

/// Assembles `C_{p,•}` on the given faces and verifies `∂² = 0`.
pub fn build_complex(sheaf: &Sheaf, faces: &[FaceId], p: usize, theory: ChainTheory) -> Result<ChainComplex> {
    let c = build_complex_unchecked(sheaf, faces, p, theory);
    if c.is_complex() {
        Ok(c)
    } else {
        Err(Error::InvalidComplex(format!("∂² ≠ 0 in coefficient degree {p}")))
    }
}

/// The complex of a space and theory on a precomputed compactification.
pub fn complex_for(cx: &ExtComplex, space: &Space, theory: Theory, p: usize) -> Result<ChainComplex> {
    let sheaf = Sheaf::new(cx)?;
    let faces = face_set(cx, space, theory)?;
    build_complex(&sheaf, &faces, p, chain_theory(space, theory))
}

fn dims_for(c: &ChainComplex, theory: Theory) -> Vec<usize> {
    match theory {
        Theory::BorelMoore => c.homology_dims(),
        Theory::Ordinary | Theory::Compact => c.cohomology_dims(),
    }
}

/// Full `(p, q)` table on a precomputed compactification.
pub fn homology_table_on(cx: &ExtComplex, space: &Space, theory: Theory) -> Result<HomologyTable> {
    let sheaf = Sheaf::new(cx)?;
    let faces = face_set(cx, space, theory)?;
    let d = cx.base().dim();
    let ct = chain_theory(space, theory);
    let grid = (0..=d)
        .into_par_iter()
        .map(|p| build_complex(&sheaf, &faces, p, ct).map(|c| dims_for(&c, theory)))
        .collect::<Result<Vec<_>>>()?;
    Ok(HomologyTable { theory, grid })
}

pub fn homology_table(fan: &Fan, space: &Space, theory: Theory) -> Result<HomologyTable> {
    homology_table_on(&compactify(fan), space, theory)
}

/// Inclusion `C^BM_{p,•}(Δ) -> C^BM_{p,•}(Σ)` on sedentarity-zero faces,
/// with `Δ` given by its cones in `Σ`.
pub fn subfan_inclusion(cx: &ExtComplex, delta: &[ConeId], p: usize) -> Result<(ChainComplex, ChainComplex, Vec<QMat>)> {
    let fan = cx.base();
    for &c in delta {
        if c >= fan.num_cones() {
            return Err(Error::NotASubfan(format!("cone {c} out of range")));
        }
        if fan.faces_of(c).iter().any(|t| !delta.contains(t)) {
            return Err(Error::NotASubfan(format!("faces of cone {c} missing")));
        }
    }
    let full = Sheaf::new(cx)?;
    let sub = Sheaf::restricted(cx, delta)?;
    let faces_s = cx.open_subcomplex(&[0])?;
    let mut faces_d: Vec<FaceId> = delta.iter().map(|&c| cx.face_id(0, c).unwrap()).collect();
    faces_d.sort_unstable();
    let cs = build_complex(&full, &faces_s, p, ChainTheory::BorelMoore)?;
    let cd = build_complex(&sub, &faces_d, p, ChainTheory::BorelMoore)?;
    let d = fan.dim();
    let mut inc = Vec::new();
    for q in 0..=d {
        let mut m = QMat::zeros(cs.dim(q), cd.dim(q));
        let (mut ro, mut co) = (0usize, 0usize);
        let mut row_off = std::collections::HashMap::new();
        for &f in faces_s.iter().filter(|&&f| cx.face(f).dim == q) {
            row_off.insert(f, ro);
            ro += full.dim(f, p);
        }
        for &f in faces_d.iter().filter(|&&f| cx.face(f).dim == q) {
            let bs = sub.basis(f, p);
            let bf = full.basis(f, p);
            for j in 0..bs.dim() {
                let c = bf.coords(&bs.basis.col(j)).expect("F^Δ_p ⊆ F^Σ_p");
                for (i, x) in c.into_iter().enumerate() {
                    m.set(row_off[&f] + i, co + j, x);
                }
            }
            co += bs.dim();
        }
        inc.push(m);
    }
    Ok((cd, cs, inc))
}

/// `C^BM_{p,•}(Σ, Δ)` as the quotient complex.
pub fn relative_complex(cx: &ExtComplex, delta: &[ConeId], p: usize) -> Result<ChainComplex> {
    let (_, cs, inc) = subfan_inclusion(cx, delta, p)?;
    cs.quotient(&inc)
}

/// BM and compact-support tables of the pair `(Σ, Δ)`.
pub fn relative_tables(cx: &ExtComplex, delta: &[ConeId]) -> Result<(HomologyTable, HomologyTable)> {
    let d = cx.base().dim();
    let cs = (0..=d)
        .into_par_iter()
        .map(|p| relative_complex(cx, delta, p))
        .collect::<Result<Vec<_>>>()?;
    Ok((
        HomologyTable {
            theory: Theory::BorelMoore,
            grid: cs.iter().map(ChainComplex::homology_dims).collect(),
        },
        HomologyTable {
            theory: Theory::Compact,
            grid: cs.iter().map(ChainComplex::cohomology_dims).collect(),
        },
    ))
}
