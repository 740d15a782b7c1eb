//! Tropical structure on fans: weights and balancing, conewise linear
//! functions, orders of vanishing, divisors and tropical modifications.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactla::{smith_normal_form, unimodular_inverse, IntMat};
use crate::fan::{ConeId, Fan, StarData};

/// Nonzero integer weights on the facets of a pure fan.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Orientation {
    weights: BTreeMap<ConeId, i64>,
}

impl Orientation {
    pub fn new(weights: BTreeMap<ConeId, i64>) -> Result<Orientation> {
        if let Some((c, _)) = weights.iter().find(|(_, &w)| w == 0) {
            return Err(Error::InvalidWeights(format!("zero weight on cone {c}")));
        }
        Ok(Orientation { weights })
    }

    pub fn constant(fan: &Fan, w: i64) -> Orientation {
        Orientation {
            weights: fan.facets().iter().map(|&f| (f, w)).collect(),
        }
    }

    /// Weight of a facet; 0 for cones that carry none.
    pub fn get(&self, c: ConeId) -> i64 {
        self.weights.get(&c).copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (ConeId, i64)> + '_ {
        self.weights.iter().map(|(&c, &w)| (c, w))
    }

    pub fn as_map(&self) -> &BTreeMap<ConeId, i64> {
        &self.weights
    }

    pub(crate) fn check_support(&self, facets: &[ConeId]) -> Result<()> {
        let keys: Vec<ConeId> = self.weights.keys().copied().collect();
        let mut f = facets.to_vec();
        f.sort_unstable();
        if keys != f {
            return Err(Error::InvalidWeights(
                "weights must be given on exactly the facets".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub cone: ConeId,
    /// The weighted sum of normals in `N^tau` coordinates.
    pub sum: Vec<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BalancingReport {
    pub violations: Vec<Violation>,
}

impl BalancingReport {
    pub fn is_balanced(&self) -> bool {
        self.violations.is_empty()
    }
}

pub fn check_balancing(fan: &Fan, w: &Orientation) -> Result<BalancingReport> {
    if !fan.is_pure() {
        return Err(Error::NotPure);
    }
    w.check_support(fan.facets())?;
    let d = fan.dim();
    let mut violations = Vec::new();
    if d == 0 {
        return Ok(BalancingReport { violations });
    }
    for &tau in fan.cones_of_dim(d - 1) {
        let m = fan.lattice(tau).quotient_rank();
        let mut sum = vec![0i64; m];
        for &sigma in fan.up_covers(tau) {
            let n = fan.normal_in_quotient(tau, sigma);
            for (s, x) in sum.iter_mut().zip(n) {
                *s += w.get(sigma) * x;
            }
        }
        if sum.iter().any(|&x| x != 0) {
            violations.push(Violation { cone: tau, sum });
        }
    }
    Ok(BalancingReport { violations })
}

fn require_balanced(fan: &Fan, w: &Orientation) -> Result<()> {
    if check_balancing(fan, w)?.is_balanced() {
        Ok(())
    } else {
        Err(Error::NotBalanced)
    }
}

fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Integer `f` with `f . g_i = values_i` for the columns `g_i` of `gens`.
fn integral_form(gens: &IntMat, values: &[i64]) -> Result<Vec<i64>> {
    let n = gens.rows();
    if gens.cols() == 0 {
        return Ok(vec![0; n]);
    }
    // gens^T = U D V, so f = V^{-1} y with D y = U^{-1} values
    let snf = smith_normal_form(&gens.transpose());
    let rhs = unimodular_inverse(&snf.u).mul_vec(values);
    let mut y = vec![0i64; n];
    for (i, &b) in rhs.iter().enumerate() {
        let d = if i < n { snf.d.get(i, i) } else { 0 };
        if d == 0 {
            if b != 0 {
                return Err(Error::InvalidFunction("values are not linear on a cone".into()));
            }
        } else if b % d != 0 {
            return Err(Error::InvalidFunction("no integral linear form takes these values".into()));
        } else {
            y[i] = b / d;
        }
    }
    Ok(unimodular_inverse(&snf.v).mul_vec(&y))
}

/// A continuous conewise integral linear function, stored as one integral
/// linear form per facet.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PLFunction {
    forms: BTreeMap<ConeId, Vec<i64>>,
}

impl PLFunction {
    /// Builds the function from per-facet forms, checking that neighbouring
    /// forms agree on common faces.
    pub fn from_facet_forms(fan: &Fan, forms: BTreeMap<ConeId, Vec<i64>>) -> Result<PLFunction> {
        let facets = fan.facets();
        if forms.keys().copied().collect::<Vec<_>>() != facets {
            return Err(Error::InvalidFunction("one form per facet is required".into()));
        }
        if forms.values().any(|f| f.len() != fan.ambient_rank()) {
            return Err(Error::InvalidFunction("form of the wrong length".into()));
        }
        for (i, &a) in facets.iter().enumerate() {
            for &b in &facets[i + 1..] {
                let m = fan.meet(a, b);
                for &r in &fan.cone(m).rays {
                    if dot(&forms[&a], fan.ray(r)) != dot(&forms[&b], fan.ray(r)) {
                        return Err(Error::InvalidFunction(format!(
                            "forms on facets {a} and {b} disagree on ray {r}"
                        )));
                    }
                }
            }
        }
        Ok(PLFunction { forms })
    }

    /// Builds the function on a simplicial fan from its values on the rays.
    pub fn from_ray_values(fan: &Fan, values: &[i64]) -> Result<PLFunction> {
        if !fan.is_simplicial() {
            return Err(Error::NotSimplicial);
        }
        if values.len() != fan.num_rays() {
            return Err(Error::InvalidFunction("one value per ray is required".into()));
        }
        let mut forms = BTreeMap::new();
        for &f in fan.facets() {
            let vals: Vec<i64> = fan.cone(f).rays.iter().map(|&r| values[r]).collect();
            forms.insert(f, integral_form(&fan.generators(f), &vals)?);
        }
        Ok(PLFunction { forms })
    }

    pub fn linear(fan: &Fan, l: &[i64]) -> PLFunction {
        PLFunction {
            forms: fan.facets().iter().map(|&f| (f, l.to_vec())).collect(),
        }
    }

    pub fn forms(&self) -> &BTreeMap<ConeId, Vec<i64>> {
        &self.forms
    }

    pub fn facet_form(&self, facet: ConeId) -> &[i64] {
        &self.forms[&facet]
    }

    /// Form of the smallest facet containing `c`; it agrees with the function on `c`.
    pub fn form_on(&self, fan: &Fan, c: ConeId) -> &[i64] {
        let f = fan
            .facets()
            .iter()
            .find(|&&f| fan.is_face(c, f))
            .expect("pure fan: every cone lies in a facet");
        &self.forms[f]
    }

    pub fn ray_value(&self, fan: &Fan, r: usize) -> i64 {
        dot(self.form_on(fan, fan.ray_cone(r)), fan.ray(r))
    }

    pub fn add_linear(&self, l: &[i64]) -> PLFunction {
        PLFunction {
            forms: self
                .forms
                .iter()
                .map(|(&c, f)| (c, f.iter().zip(l).map(|(a, b)| a + b).collect()))
                .collect(),
        }
    }
}

/// `ord_tau(f)` for a codimension-one cone `tau`.
pub fn order_of_vanishing(fan: &Fan, w: &Orientation, f: &PLFunction, tau: ConeId) -> Result<i64> {
    if fan.dim() == 0 || fan.cone(tau).dim + 1 != fan.dim() {
        return Err(Error::NotACone(format!("{tau} is not of codimension one")));
    }
    let n = fan.ambient_rank();
    let mut total = vec![0i64; n];
    let mut ord = 0i64;
    for &sigma in fan.up_covers(tau) {
        let nv = fan.normal_vector(tau, sigma);
        ord -= w.get(sigma) * dot(f.facet_form(sigma), &nv);
        for (t, x) in total.iter_mut().zip(&nv) {
            *t += w.get(sigma) * x;
        }
    }
    Ok(ord + dot(f.form_on(fan, tau), &total))
}

/// `div(f)`: the codimension-one cones with nonzero order and their faces.
#[derive(Clone, Debug)]
pub struct Divisor {
    /// Cones of the ambient fan in the support (closed under faces), sorted.
    pub cones: Vec<ConeId>,
    /// Order of vanishing per codimension-one cone of the support.
    pub orders: BTreeMap<ConeId, i64>,
    /// The support as a weighted fan, with the map from its ids to ambient ids.
    pub subfan: Option<(Fan, Vec<ConeId>)>,
}

impl Divisor {
    pub fn is_empty(&self) -> bool {
        self.cones.is_empty()
    }

    pub fn contains(&self, c: ConeId) -> bool {
        self.cones.binary_search(&c).is_ok()
    }
}

pub fn divisor(fan: &Fan, w: &Orientation, f: &PLFunction) -> Result<Divisor> {
    require_balanced(fan, w)?;
    let d = fan.dim();
    let mut orders = BTreeMap::new();
    if d > 0 {
        for &tau in fan.cones_of_dim(d - 1) {
            let o = order_of_vanishing(fan, w, f, tau)?;
            if o != 0 {
                orders.insert(tau, o);
            }
        }
    }
    let mut cones: Vec<ConeId> = orders.keys().flat_map(|&t| fan.faces_of(t)).collect();
    cones.sort_unstable();
    cones.dedup();
    let subfan = if cones.is_empty() {
        None
    } else {
        let (sub, map) = fan.subfan(&cones)?;
        let w: BTreeMap<ConeId, i64> = sub.facets().iter().map(|&c| (c, orders[&map[c]])).collect();
        Some((sub.with_weights(Orientation::new(w)?)?, map))
    };
    Ok(Divisor {
        cones,
        orders,
        subfan,
    })
}

/// How a cone of a modification arises from the base fan.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModFace {
    /// `Γ_f(sigma)`.
    Graph(ConeId),
    /// `delta + R_{>=0} e` for `delta` in the divisor.
    Up(ConeId),
}

#[derive(Clone, Debug)]
pub struct ModificationData {
    pub base: Fan,
    pub function: PLFunction,
    pub divisor: Divisor,
    /// The modified fan in rank `n + 1`, with weights.
    pub total: Fan,
    /// `n x (n+1)` projection forgetting the last coordinate.
    pub proj_map: IntMat,
    pub special_vector: Vec<i64>,
    /// Ray index of `rho` in `total`, absent for a degenerate modification.
    pub rho: Option<usize>,
    pub face_map: Vec<ModFace>,
    /// Graph face `Γ_f(sigma)` per base cone id.
    pub graph_cone: Vec<ConeId>,
}

impl ModificationData {
    pub fn is_degenerate(&self) -> bool {
        self.rho.is_none()
    }

    /// Cone id of `delta_up` for a cone of the divisor.
    pub fn up_cone(&self, delta: ConeId) -> Option<ConeId> {
        self.face_map.iter().position(|&m| m == ModFace::Up(delta))
    }

    pub fn rho_cone(&self) -> Option<ConeId> {
        self.rho.map(|r| self.total.ray_cone(r))
    }

    /// Pullback `g o pr` of a function on the base fan.
    pub fn pullback(&self, g: &PLFunction) -> PLFunction {
        let forms = self
            .total
            .facets()
            .iter()
            .map(|&c| {
                let base_cone = match self.face_map[c] {
                    ModFace::Graph(s) | ModFace::Up(s) => s,
                };
                let mut form = g.form_on(&self.base, base_cone).to_vec();
                form.push(0);
                (c, form)
            })
            .collect();
        PLFunction { forms }
    }
}

pub fn tropical_modification(fan: &Fan, w: &Orientation, f: &PLFunction) -> Result<ModificationData> {
    let div = divisor(fan, w, f)?;
    let n = fan.ambient_rank();
    let mut rays: Vec<Vec<i64>> = (0..fan.num_rays())
        .map(|r| {
            let mut v = fan.ray(r).to_vec();
            v.push(f.ray_value(fan, r));
            v
        })
        .collect();
    let mut e = vec![0i64; n + 1];
    e[n] = 1;
    let rho = if div.is_empty() {
        None
    } else {
        rays.push(e.clone());
        Some(rays.len() - 1)
    };
    let mut cones: Vec<Vec<usize>> = fan.cones().iter().map(|c| c.rays.clone()).collect();
    if let Some(rho) = rho {
        for &dl in &div.cones {
            let mut c = fan.cone(dl).rays.clone();
            c.push(rho);
            cones.push(c);
        }
    }
    let total = Fan::new(n + 1, rays, cones)?;
    let mut face_map = vec![ModFace::Graph(0); total.num_cones()];
    let mut graph_cone = vec![0; fan.num_cones()];
    for c in fan.cones() {
        let id = total.cone_id(&c.rays).expect("graph cone present");
        face_map[id] = ModFace::Graph(c.id);
        graph_cone[c.id] = id;
    }
    let mut weights = BTreeMap::new();
    for &s in fan.facets() {
        weights.insert(graph_cone[s], w.get(s));
    }
    if let Some(rho) = rho {
        for &dl in &div.cones {
            let mut c = fan.cone(dl).rays.clone();
            c.push(rho);
            let id = total.cone_id(&c).expect("up cone present");
            face_map[id] = ModFace::Up(dl);
            if let Some(&o) = div.orders.get(&dl) {
                weights.insert(id, o);
            }
        }
    }
    let ow = Orientation::new(weights)?;
    let total = total.with_weights(ow.clone())?;
    if !check_balancing(&total, &ow)?.is_balanced() {
        return Err(Error::InvalidWeights("modification is not balanced".into()));
    }
    let mut proj_map = IntMat::zeros(n, n + 1);
    for i in 0..n {
        proj_map.set(i, i, 1);
    }
    Ok(ModificationData {
        base: fan.clone(),
        function: f.clone(),
        divisor: div,
        total,
        proj_map,
        special_vector: e,
        rho,
        face_map,
        graph_cone,
    })
}

/// `f^sigma`: the function induced on the star fan at `sigma`.
pub fn induced_function(fan: &Fan, f: &PLFunction, star: &StarData) -> Result<PLFunction> {
    let sigma = star.base_cone.id;
    let l = f.form_on(fan, sigma).to_vec();
    let q = &star.proj.quot_basis;
    let mut forms = BTreeMap::new();
    for &sf in star.star.facets() {
        let eta = star.cone_origin[sf];
        let diff: Vec<i64> = f.facet_form(eta).iter().zip(&l).map(|(a, b)| a - b).collect();
        let form: Vec<i64> = (0..q.cols()).map(|j| dot(&diff, &q.col(j))).collect();
        forms.insert(sf, form);
    }
    PLFunction::from_facet_forms(&star.star, forms)
}
