//! Rational fans: validation, face poset, star fans and products.
//!
//! A cone is identified by the sorted set of its ray indices. Cones are
//! stored sorted by `(dim, rays)`, so the zero cone always has id 0 and the
//! ids of one dimension form a contiguous block.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_traits::Signed;

use crate::error::{Error, Result};
use crate::exactla::{is_saturated_basis, primitive, quotient_lattice, IntMat, QMat, QuotientData};
use crate::weights::Orientation;

pub type ConeId = usize;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cone {
    pub id: ConeId,
    pub rays: Vec<usize>,
    pub dim: usize,
}

/// Unvalidated fan description: rays plus the list of cones (all faces of
/// non-simplicial cones must be present; the zero cone may be omitted).
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RawFan {
    pub ambient_rank: usize,
    pub rays: Vec<Vec<i64>>,
    pub cones: Vec<Vec<usize>>,
}

/// Records that a fan was built as `left x right`.
#[derive(Clone, Debug)]
pub struct ProductData {
    pub left: Fan,
    pub right: Fan,
    /// Cone id of the product to the pair of factor cone ids.
    pub pairs: Vec<(ConeId, ConeId)>,
}

#[derive(Clone, Debug)]
pub struct Fan {
    ambient_rank: usize,
    rays: Vec<Vec<i64>>,
    cones: Vec<Cone>,
    index: HashMap<Vec<usize>, ConeId>,
    by_dim: Vec<Vec<ConeId>>,
    covers: Vec<(ConeId, ConeId)>,
    up: Vec<Vec<ConeId>>,
    down: Vec<Vec<ConeId>>,
    lattices: Vec<QuotientData>,
    dim: usize,
    pure: bool,
    simplicial: bool,
    weights: Option<Orientation>,
    product: Option<Box<ProductData>>,
    warnings: Vec<String>,
}

/// The star fan of a cone, with the bookkeeping tying it back to the source fan.
#[derive(Clone, Debug)]
pub struct StarData {
    pub base_cone: Cone,
    pub star: Fan,
    /// Projection `N -> N^sigma` in the star's coordinates.
    pub proj: QuotientData,
    /// Star ray index to the cone of the source fan covering the base cone.
    pub ray_origin: Vec<ConeId>,
    /// Star cone id to the source cone `eta` with `eta^sigma` equal to it.
    pub cone_origin: Vec<ConeId>,
}

fn rank_of(rays: &[Vec<i64>], ids: &[usize], n: usize) -> usize {
    if ids.is_empty() {
        return 0;
    }
    let cols: Vec<Vec<i64>> = ids.iter().map(|&i| rays[i].clone()).collect();
    QMat::from_i64_cols(&cols, n).rank()
}

fn is_subset(a: &[usize], b: &[usize]) -> bool {
    // both sorted
    let mut j = 0;
    for &x in a {
        while j < b.len() && b[j] < x {
            j += 1;
        }
        if j == b.len() || b[j] != x {
            return false;
        }
        j += 1;
    }
    true
}

fn intersect(a: &[usize], b: &[usize]) -> Vec<usize> {
    a.iter().copied().filter(|x| b.binary_search(x).is_ok()).collect()
}

/// A cone contains a line iff some circuit among its generators has a
/// relation with all coefficients of one sign.
fn contains_line(rays: &[Vec<i64>], ids: &[usize], n: usize) -> bool {
    let k = ids.len();
    let rank = rank_of(rays, ids, n);
    if rank == k {
        return false;
    }
    for mask in 1u64..(1u64 << k) {
        let sz = mask.count_ones() as usize;
        if sz < 2 || sz > rank + 1 {
            continue;
        }
        let sub: Vec<usize> = (0..k).filter(|&i| mask >> i & 1 == 1).map(|i| ids[i]).collect();
        let cols: Vec<Vec<i64>> = sub.iter().map(|&i| rays[i].clone()).collect();
        let ker = QMat::from_i64_cols(&cols, n).kernel();
        if ker.cols() != 1 {
            continue;
        }
        let v = ker.col(0);
        if v.iter().all(|x| x.is_positive()) || v.iter().all(|x| x.is_negative()) {
            return true;
        }
    }
    false
}

impl Fan {
    /// Validates a raw description. Non-primitive rays are normalized and a
    /// warning is recorded.
    pub fn validate(raw: &RawFan) -> Result<Fan> {
        let n = raw.ambient_rank;
        let mut rays = Vec::with_capacity(raw.rays.len());
        let mut warnings = Vec::new();
        for (i, r) in raw.rays.iter().enumerate() {
            if r.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: r.len(),
                });
            }
            let p = primitive(r)?;
            if &p != r {
                warnings.push(format!("ray {i} {r:?} normalized to {p:?}"));
            }
            rays.push(p);
        }
        let mut seen = HashMap::new();
        for (i, r) in rays.iter().enumerate() {
            if seen.insert(r.clone(), i).is_some() {
                return Err(Error::DuplicateRay(i));
            }
        }

        let mut listed: BTreeSet<Vec<usize>> = BTreeSet::new();
        for c in &raw.cones {
            let mut s = c.clone();
            s.sort_unstable();
            s.dedup();
            if let Some(&bad) = s.iter().find(|&&i| i >= rays.len()) {
                return Err(Error::RayIndexOutOfRange(bad));
            }
            if s.is_empty() {
                continue;
            }
            if !listed.insert(s.clone()) {
                return Err(Error::DuplicateCone(s));
            }
        }

        let mut all: BTreeSet<Vec<usize>> = BTreeSet::new();
        all.insert(Vec::new());
        for c in &listed {
            let rank = rank_of(&rays, c, n);
            if rank == c.len() {
                for mask in 1u64..(1u64 << c.len()) {
                    let sub: Vec<usize> = (0..c.len())
                        .filter(|&i| mask >> i & 1 == 1)
                        .map(|i| c[i])
                        .collect();
                    all.insert(sub);
                }
            } else {
                if contains_line(&rays, c, n) {
                    return Err(Error::NotStrictlyConvex(c.clone()));
                }
                all.insert(c.clone());
                for &r in c {
                    all.insert(vec![r]);
                }
            }
        }

        let dims: BTreeMap<Vec<usize>, usize> =
            all.iter().map(|c| (c.clone(), rank_of(&rays, c, n))).collect();
        let list: Vec<&Vec<usize>> = all.iter().collect();
        for (i, a) in list.iter().enumerate() {
            for b in &list[i + 1..] {
                let m = intersect(a, b);
                if !all.contains(&m) {
                    return Err(Error::FaceClosure((*a).clone()));
                }
                // a proper face must drop dimension
                for (small, big) in [(a, b), (b, a)] {
                    if small.len() < big.len() && is_subset(small, big) && dims[*small] == dims[*big] {
                        return Err(Error::WrongRank((*big).clone()));
                    }
                }
            }
        }
        // non-simplicial cones need their facets listed
        for c in &all {
            let k = dims[c];
            if c.len() == k || k < 2 {
                continue;
            }
            let mut covered: BTreeSet<usize> = BTreeSet::new();
            let mut count = 0;
            for f in &all {
                if dims[f] + 1 == k && is_subset(f, c) {
                    covered.extend(f.iter().copied());
                    count += 1;
                }
            }
            if covered.len() != c.len() || count < k {
                return Err(Error::FaceClosure(c.clone()));
            }
        }

        let mut sorted: Vec<(usize, Vec<usize>)> = all.into_iter().map(|c| (dims[&c], c)).collect();
        sorted.sort();
        let cones: Vec<Cone> = sorted
            .into_iter()
            .enumerate()
            .map(|(id, (dim, rays))| Cone { id, rays, dim })
            .collect();
        Ok(Fan::assemble(n, rays, cones, warnings))
    }

    /// Convenience wrapper around [`Fan::validate`].
    pub fn new(ambient_rank: usize, rays: Vec<Vec<i64>>, cones: Vec<Vec<usize>>) -> Result<Fan> {
        Fan::validate(&RawFan {
            ambient_rank,
            rays,
            cones,
        })
    }

    fn assemble(n: usize, rays: Vec<Vec<i64>>, cones: Vec<Cone>, warnings: Vec<String>) -> Fan {
        let index: HashMap<Vec<usize>, ConeId> =
            cones.iter().map(|c| (c.rays.clone(), c.id)).collect();
        let dim = cones.iter().map(|c| c.dim).max().unwrap_or(0);
        let mut by_dim = vec![Vec::new(); dim + 1];
        for c in &cones {
            by_dim[c.dim].push(c.id);
        }
        let mut up = vec![Vec::new(); cones.len()];
        let mut down = vec![Vec::new(); cones.len()];
        let mut covers = Vec::new();
        for k in 1..=dim {
            for &s in &by_dim[k] {
                for &t in &by_dim[k - 1] {
                    if is_subset(&cones[t].rays, &cones[s].rays) {
                        covers.push((t, s));
                        up[t].push(s);
                        down[s].push(t);
                    }
                }
            }
        }
        covers.sort_unstable();
        let lattices = cones
            .iter()
            .map(|c| {
                let cols: Vec<Vec<i64>> = c.rays.iter().map(|&i| rays[i].clone()).collect();
                quotient_lattice(&IntMat::from_cols(&cols, n), n)
            })
            .collect();
        let simplicial = cones.iter().all(|c| c.rays.len() == c.dim);
        let mut fan = Fan {
            ambient_rank: n,
            rays,
            cones,
            index,
            by_dim,
            covers,
            up,
            down,
            lattices,
            dim,
            pure: true,
            simplicial,
            weights: None,
            product: None,
            warnings,
        };
        fan.pure = fan.cones.iter().all(|c| c.dim == dim || !fan.up[c.id].is_empty());
        fan
    }

    pub fn ambient_rank(&self) -> usize {
        self.ambient_rank
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_pure(&self) -> bool {
        self.pure
    }

    pub fn is_simplicial(&self) -> bool {
        self.simplicial
    }

    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    pub fn rays(&self) -> &[Vec<i64>] {
        &self.rays
    }

    pub fn ray(&self, i: usize) -> &[i64] {
        &self.rays[i]
    }

    pub fn num_rays(&self) -> usize {
        self.rays.len()
    }

    pub fn cones(&self) -> &[Cone] {
        &self.cones
    }

    pub fn cone(&self, id: ConeId) -> &Cone {
        &self.cones[id]
    }

    pub fn num_cones(&self) -> usize {
        self.cones.len()
    }

    /// Cone ids of the given dimension (empty above the fan dimension).
    pub fn cones_of_dim(&self, k: usize) -> &[ConeId] {
        self.by_dim.get(k).map_or(&[], Vec::as_slice)
    }

    pub fn facets(&self) -> &[ConeId] {
        self.cones_of_dim(self.dim)
    }

    /// Number of cones per dimension, `0..=dim`.
    pub fn f_vector(&self) -> Vec<usize> {
        self.by_dim.iter().map(Vec::len).collect()
    }

    pub fn cone_id(&self, rays: &[usize]) -> Option<ConeId> {
        let mut s = rays.to_vec();
        s.sort_unstable();
        self.index.get(&s).copied()
    }

    /// Cone generated by a single ray.
    pub fn ray_cone(&self, ray: usize) -> ConeId {
        self.index[&vec![ray]]
    }

    pub fn covers(&self) -> &[(ConeId, ConeId)] {
        &self.covers
    }

    /// Cones covering `c` (one dimension up).
    pub fn up_covers(&self, c: ConeId) -> &[ConeId] {
        &self.up[c]
    }

    /// Cones covered by `c` (one dimension down).
    pub fn down_covers(&self, c: ConeId) -> &[ConeId] {
        &self.down[c]
    }

    pub fn is_face(&self, tau: ConeId, sigma: ConeId) -> bool {
        is_subset(&self.cones[tau].rays, &self.cones[sigma].rays)
    }

    /// All cones `eta` with `c ≼ eta`, in id order.
    pub fn cones_above(&self, c: ConeId) -> Vec<ConeId> {
        (c..self.cones.len()).filter(|&e| self.is_face(c, e)).collect()
    }

    /// All faces of `c`, in id order.
    pub fn faces_of(&self, c: ConeId) -> Vec<ConeId> {
        (0..=c).filter(|&t| self.is_face(t, c)).collect()
    }

    /// `sigma ∧ delta`, the largest common face.
    pub fn meet(&self, a: ConeId, b: ConeId) -> ConeId {
        let m = intersect(&self.cones[a].rays, &self.cones[b].rays);
        self.index[&m]
    }

    /// Saturated lattice `N_sigma` and the quotient `N^sigma`.
    pub fn lattice(&self, c: ConeId) -> &QuotientData {
        &self.lattices[c]
    }

    pub fn generators(&self, c: ConeId) -> IntMat {
        let cols: Vec<Vec<i64>> = self.cones[c].rays.iter().map(|&i| self.rays[i].clone()).collect();
        IntMat::from_cols(&cols, self.ambient_rank)
    }

    /// The unit normal `n_{sigma/tau}` in `N^tau` coordinates.
    pub fn normal_in_quotient(&self, tau: ConeId, sigma: ConeId) -> Vec<i64> {
        assert_eq!(self.cones[tau].dim + 1, self.cones[sigma].dim, "not a cover");
        let r = self.cones[sigma]
            .rays
            .iter()
            .find(|r| self.cones[tau].rays.binary_search(r).is_err())
            .expect("cover adds a ray");
        let v = self.lattices[tau].project(&self.rays[*r]);
        primitive(&v).expect("ray outside tau projects to a nonzero vector")
    }

    /// The unit normal `n_{sigma/tau}` as a vector of `N`: `N_tau + Z n = N_sigma`
    /// with `n` pointing into `sigma`.
    pub fn normal_vector(&self, tau: ConeId, sigma: ConeId) -> Vec<i64> {
        let u = self.normal_in_quotient(tau, sigma);
        self.lattices[tau].quot_basis.mul_vec(&u)
    }

    /// All primitive generators of each cone extend to a basis of `N_sigma`.
    pub fn is_unimodular(&self) -> bool {
        self.simplicial && (0..self.cones.len()).all(|c| is_saturated_basis(&self.generators(c)))
    }

    pub fn weights(&self) -> Option<&Orientation> {
        self.weights.as_ref()
    }

    /// Stored weights, or weight one on every facet.
    pub fn orientation(&self) -> Orientation {
        self.weights
            .clone()
            .unwrap_or_else(|| Orientation::constant(self, 1))
    }

    pub fn with_weights(mut self, w: Orientation) -> Result<Fan> {
        w.check_support(self.facets())?;
        self.weights = Some(w);
        Ok(self)
    }

    pub fn product_data(&self) -> Option<&ProductData> {
        self.product.as_deref()
    }

    /// Sub-collection of cones, closed under faces, as a fan on the same rays
    /// (unused rays are dropped). Returns the new fan and the map from its
    /// cone ids to ids in `self`.
    pub fn subfan(&self, cones: &[ConeId]) -> Result<(Fan, Vec<ConeId>)> {
        let set: BTreeSet<ConeId> = cones.iter().copied().collect();
        for &c in &set {
            for t in self.faces_of(c) {
                if !set.contains(&t) {
                    return Err(Error::NotASubfan(format!("face {t} of cone {c} missing")));
                }
            }
        }
        let used: Vec<usize> = set
            .iter()
            .flat_map(|&c| self.cones[c].rays.clone())
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let remap: BTreeMap<usize, usize> = used.iter().enumerate().map(|(i, &r)| (r, i)).collect();
        let rays: Vec<Vec<i64>> = used.iter().map(|&r| self.rays[r].clone()).collect();
        let raw_cones: Vec<Vec<usize>> = set
            .iter()
            .map(|&c| self.cones[c].rays.iter().map(|r| remap[r]).collect())
            .collect();
        let sub = Fan::new(self.ambient_rank, rays, raw_cones)?;
        let back: Vec<ConeId> = sub
            .cones
            .iter()
            .map(|c| {
                let orig: Vec<usize> = c.rays.iter().map(|&i| used[i]).collect();
                self.index[&orig]
            })
            .collect();
        Ok((sub, back))
    }

    /// The star fan `Σ^sigma` in `N^sigma`.
    pub fn star_fan(&self, sigma: ConeId) -> Result<StarData> {
        if sigma >= self.cones.len() {
            return Err(Error::NotACone(sigma.to_string()));
        }
        if self.simplicial || sigma == 0 {
            return self.star_simplicial(sigma);
        }
        match &self.product {
            Some(pd) => self.star_product(pd, sigma),
            None => Err(Error::UnsupportedStar(sigma)),
        }
    }

    fn star_simplicial(&self, sigma: ConeId) -> Result<StarData> {
        let proj = self.lattices[sigma].clone();
        let base = &self.cones[sigma];
        let mut star_rays = Vec::new();
        let mut ray_origin = Vec::new();
        let mut ray_of: BTreeMap<usize, usize> = BTreeMap::new();
        for &eta in &self.up[sigma] {
            for &r in &self.cones[eta].rays {
                if base.rays.binary_search(&r).is_err() {
                    ray_of.insert(r, star_rays.len());
                    star_rays.push(primitive(&proj.project(&self.rays[r]))?);
                    ray_origin.push(eta);
                }
            }
        }
        let above = self.cones_above(sigma);
        let star_cones: Vec<Vec<usize>> = above
            .iter()
            .map(|&eta| {
                self.cones[eta]
                    .rays
                    .iter()
                    .filter(|r| base.rays.binary_search(r).is_err())
                    .map(|r| ray_of[r])
                    .collect()
            })
            .collect();
        let mut star = Fan::new(proj.quotient_rank(), star_rays, star_cones.clone())?;
        let mut cone_origin = vec![usize::MAX; star.num_cones()];
        for (eta, sc) in above.iter().zip(&star_cones) {
            let id = star.cone_id(sc).expect("star cone present");
            cone_origin[id] = *eta;
        }
        if let Some(w) = &self.weights {
            let induced: BTreeMap<ConeId, i64> = star
                .facets()
                .iter()
                .map(|&f| (f, w.get(cone_origin[f])))
                .collect();
            star = star.with_weights(Orientation::new(induced)?)?;
        }
        Ok(StarData {
            base_cone: base.clone(),
            star,
            proj,
            ray_origin,
            cone_origin,
        })
    }

    fn star_product(&self, pd: &ProductData, sigma: ConeId) -> Result<StarData> {
        let (s1, s2) = pd.pairs[sigma];
        let a = pd.left.star_fan(s1)?;
        let b = pd.right.star_fan(s2)?;
        let star = product(&a.star, &b.star)?;
        let spd = star.product.as_ref().expect("product records its factors");
        let lookup: HashMap<(ConeId, ConeId), ConeId> =
            pd.pairs.iter().enumerate().map(|(i, &p)| (p, i)).collect();
        let cone_origin: Vec<ConeId> = spd
            .pairs
            .iter()
            .map(|&(x, y)| lookup[&(a.cone_origin[x], b.cone_origin[y])])
            .collect();
        let mut ray_origin = Vec::new();
        for &e in &a.ray_origin {
            ray_origin.push(lookup[&(e, s2)]);
        }
        for &e in &b.ray_origin {
            ray_origin.push(lookup[&(s1, e)]);
        }
        let n1 = pd.left.ambient_rank;
        let proj = block_quotient(&a.proj, &b.proj, n1, pd.right.ambient_rank);
        Ok(StarData {
            base_cone: self.cones[sigma].clone(),
            star,
            proj,
            ray_origin,
            cone_origin,
        })
    }
}

fn block_diag(a: &IntMat, b: &IntMat) -> IntMat {
    let mut m = IntMat::zeros(a.rows() + b.rows(), a.cols() + b.cols());
    for i in 0..a.rows() {
        for j in 0..a.cols() {
            m.set(i, j, a.get(i, j));
        }
    }
    for i in 0..b.rows() {
        for j in 0..b.cols() {
            m.set(a.rows() + i, a.cols() + j, b.get(i, j));
        }
    }
    m
}

fn block_quotient(a: &QuotientData, b: &QuotientData, n1: usize, n2: usize) -> QuotientData {
    QuotientData {
        ambient_rank: n1 + n2,
        sub_basis: block_diag(&a.sub_basis, &b.sub_basis),
        quot_basis: block_diag(&a.quot_basis, &b.quot_basis),
        proj: block_diag(&a.proj, &b.proj),
    }
}

/// The product fan `f1 x f2` in `N1 x N2`, remembering its factors.
pub fn product(f1: &Fan, f2: &Fan) -> Result<Fan> {
    let (n1, n2) = (f1.ambient_rank, f2.ambient_rank);
    let mut rays = Vec::new();
    for r in &f1.rays {
        let mut v = r.clone();
        v.resize(n1 + n2, 0);
        rays.push(v);
    }
    for r in &f2.rays {
        let mut v = vec![0; n1];
        v.extend_from_slice(r);
        rays.push(v);
    }
    let off = f1.rays.len();
    let mut raw = Vec::new();
    for a in &f1.cones {
        for b in &f2.cones {
            let mut c = a.rays.clone();
            c.extend(b.rays.iter().map(|r| r + off));
            raw.push(c);
        }
    }
    let mut fan = Fan::new(n1 + n2, rays, raw)?;
    let mut pairs = vec![(0, 0); fan.num_cones()];
    for a in &f1.cones {
        for b in &f2.cones {
            let mut c = a.rays.clone();
            c.extend(b.rays.iter().map(|r| r + off));
            pairs[fan.index[&c]] = (a.id, b.id);
        }
    }
    if let (Some(w1), Some(w2)) = (&f1.weights, &f2.weights) {
        let w: BTreeMap<ConeId, i64> = fan
            .facets()
            .iter()
            .map(|&f| {
                let (a, b) = pairs[f];
                (f, w1.get(a) * w2.get(b))
            })
            .collect();
        fan = fan.with_weights(Orientation::new(w)?)?;
    }
    fan.product = Some(Box::new(ProductData {
        left: f1.clone(),
        right: f2.clone(),
        pairs,
    }));
    Ok(fan)
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

    fn cross() -> Fan {
        let rays = vec![vec![1, 0], vec![-1, 0], vec![0, 1], vec![0, -1]];
        Fan::new(2, rays, vec![vec![0], vec![1], vec![2], vec![3]]).unwrap()
    }

    fn cube() -> Fan {
        let mut rays = Vec::new();
        for a in [-1, 1] {
            for b in [-1, 1] {
                for c in [-1, 1] {
                    rays.push(vec![a, b, c]);
                }
            }
        }
        let mut cones = Vec::new();
        for i in 0..8 {
            for j in i + 1..8 {
                let diff = (0..3).filter(|&k| rays[i][k] != rays[j][k]).count();
                if diff == 1 {
                    cones.push(vec![i, j]);
                }
            }
        }
        Fan::new(3, rays, cones).unwrap()
    }

    #[test]
    fn cube_skeleton_validates() {
        let f = cube();
        assert_eq!(f.f_vector(), vec![1, 8, 12]);
        assert!(f.is_pure());
        assert!(f.is_simplicial());
        assert!(!f.is_unimodular());
    }

    #[test]
    fn zero_fan() {
        let f = Fan::new(2, vec![], vec![]).unwrap();
        assert_eq!(f.dim(), 0);
        assert_eq!(f.num_cones(), 1);
    }

    #[test]
    fn cross_is_pure_and_unimodular() {
        let f = cross();
        assert_eq!(f.dim(), 1);
        assert!(f.is_pure());
        assert!(f.is_unimodular());
    }

    #[test]
    fn non_primitive_ray_is_normalized() {
        let f = Fan::new(2, vec![vec![2, 0], vec![0, 1]], vec![vec![0, 1]]).unwrap();
        assert_eq!(f.ray(0), &[1, 0]);
        assert_eq!(f.warnings().len(), 1);
    }

    #[test]
    fn rejections() {
        assert!(matches!(
            Fan::new(2, vec![vec![1, 0], vec![-1, 0]], vec![vec![0, 1]]),
            Err(Error::NotStrictlyConvex(_)) | Err(Error::WrongRank(_))
        ));
        assert!(matches!(
            Fan::new(1, vec![vec![1]], vec![vec![0], vec![0]]),
            Err(Error::DuplicateCone(_))
        ));
        assert!(matches!(
            Fan::new(2, vec![vec![1, 0]], vec![vec![3]]),
            Err(Error::RayIndexOutOfRange(3))
        ));
        assert!(matches!(Fan::new(2, vec![vec![0, 0]], vec![]), Err(Error::ZeroVector)));
    }

    #[test]
    fn square_cone_needs_its_edges() {
        // cone over a square: 4 rays, rank 3
        let rays = vec![vec![1, 1, 1], vec![-1, 1, 1], vec![-1, -1, 1], vec![1, -1, 1]];
        assert!(matches!(
            Fan::new(3, rays.clone(), vec![vec![0, 1, 2, 3]]),
            Err(Error::FaceClosure(_))
        ));
        let cones = vec![vec![0, 1, 2, 3], vec![0, 1], vec![1, 2], vec![2, 3], vec![0, 3]];
        let f = Fan::new(3, rays, cones).unwrap();
        assert!(!f.is_simplicial());
        assert_eq!(f.f_vector(), vec![1, 4, 4, 1]);
        assert!(matches!(f.star_fan(1), Err(Error::UnsupportedStar(1))));
    }

    #[test]
    fn star_of_lambda_at_ray() {
        let f = lambda2();
        let s = f.star_fan(f.ray_cone(0)).unwrap();
        assert_eq!(s.star.ambient_rank(), 1);
        assert_eq!(s.star.f_vector(), vec![1, 2]);
    }

    #[test]
    fn star_of_cube_at_ray() {
        let f = cube();
        let s = f.star_fan(f.ray_cone(7)).unwrap();
        assert_eq!(s.star.ambient_rank(), 2);
        assert_eq!(s.star.f_vector(), vec![1, 3]);
    }

    #[test]
    fn product_of_lines_is_lambda() {
        let p = product(&lambda1(), &lambda1()).unwrap();
        assert_eq!(p.f_vector(), lambda2().f_vector());
        assert!(p.is_simplicial());
        let q = product(&lambda1(), &cross()).unwrap();
        assert_eq!(q.ambient_rank(), 3);
        assert_eq!(q.num_rays(), 6);
        assert_eq!(q.facets().len(), 8);
        let z = product(&Fan::new(0, vec![], vec![]).unwrap(), &cross()).unwrap();
        assert_eq!(z.f_vector(), cross().f_vector());
    }

    #[test]
    fn normals_point_into_the_cone() {
        let f = cube();
        for &(t, s) in f.covers() {
            let n = f.normal_vector(t, s);
            let gens = f.generators(s);
            // N_tau + Z n has the same saturation as N_sigma
            let mut cols = f.generators(t).columns();
            cols.push(n);
            let both = IntMat::from_cols(&cols, 3);
            assert_eq!(quotient_lattice(&both, 3).sub_rank(), quotient_lattice(&gens, 3).sub_rank());
        }
    }

    #[test]
    fn meet_is_intersection() {
        let f = lambda2();
        let a = f.cone_id(&[0, 1]).unwrap();
        let b = f.cone_id(&[1, 2]).unwrap();
        assert_eq!(f.meet(a, b), f.ray_cone(1));
    }
}
