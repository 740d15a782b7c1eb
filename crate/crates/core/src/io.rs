//! The JSON fan file format and its canonical serialization.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fan::{product, ConeId, Fan};
use crate::weights::{Orientation, PLFunction};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FunctionSpec {
    /// Values on the rays, in ray order.
    RayValues(Vec<i64>),
    /// Integral linear forms keyed by facet index in `cones`.
    FacetForms(BTreeMap<usize, Vec<i64>>),
}

/// A fan file. Cones list every nonzero face; `weights` and `facet_forms` are
/// keyed by position in `cones`. A file with `product_of` describes the
/// product of its two entries and carries no rays, cones or weights itself.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FanFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ambient_rank: Option<usize>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub cones: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub function: Option<FunctionSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub product_of: Option<Box<(FanFile, FanFile)>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub rays: Vec<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<BTreeMap<usize, i64>>,
}

/// A parsed and validated fan with its weights (all 1 when the file has
/// none) and optional function.
#[derive(Clone, Debug)]
pub struct LoadedFan {
    pub fan: Fan,
    pub weights: Orientation,
    pub function: Option<PLFunction>,
}

pub fn parse(text: &str) -> Result<FanFile> {
    serde_json::from_str(text)
        .map_err(|e| Error::Parse(format!("line {}, column {}: {}", e.line(), e.column(), e)))
}

impl FanFile {
    pub fn load(&self) -> Result<LoadedFan> {
        let fan = match &self.product_of {
            Some(pair) => {
                if self.ambient_rank.is_some() || !self.rays.is_empty() || !self.cones.is_empty() || self.weights.is_some() {
                    return Err(Error::Parse(
                        "a product file takes no ambient_rank, rays, cones or weights".into(),
                    ));
                }
                let a = pair.0.load()?;
                let b = pair.1.load()?;
                product(&a.fan, &b.fan)?
            }
            None => {
                let n = self
                    .ambient_rank
                    .ok_or_else(|| Error::Parse("missing field `ambient_rank`".into()))?;
                let fan = Fan::new(n, self.rays.clone(), self.cones.clone())?;
                let w = match &self.weights {
                    None => Orientation::constant(&fan, 1),
                    Some(map) => {
                        let mut out = BTreeMap::new();
                        for (&i, &x) in map {
                            out.insert(self.cone_of(&fan, i)?, x);
                        }
                        Orientation::new(out)?
                    }
                };
                fan.with_weights(w)?
            }
        };
        let weights = fan.orientation();
        let function = match &self.function {
            None => None,
            Some(FunctionSpec::RayValues(v)) => Some(PLFunction::from_ray_values(&fan, v)?),
            Some(FunctionSpec::FacetForms(m)) => {
                let mut forms = BTreeMap::new();
                for (&i, l) in m {
                    forms.insert(self.cone_of(&fan, i)?, l.clone());
                }
                Some(PLFunction::from_facet_forms(&fan, forms)?)
            }
        };
        Ok(LoadedFan {
            fan,
            weights,
            function,
        })
    }

    fn cone_of(&self, fan: &Fan, i: usize) -> Result<ConeId> {
        let rays = self
            .cones
            .get(i)
            .ok_or_else(|| Error::Parse(format!("cone index {i} out of range")))?;
        let mut r = rays.clone();
        r.sort_unstable();
        r.dedup();
        fan.cone_id(&r)
            .ok_or_else(|| Error::NotACone(format!("{rays:?}")))
    }

    /// Canonical form: cones sorted by dimension then rays, explicit weights,
    /// the function by its ray values, products kept factor-wise.
    pub fn canonical(&self) -> Result<FanFile> {
        let loaded = self.load()?;
        let function = loaded
            .function
            .as_ref()
            .map(|f| FunctionSpec::RayValues((0..loaded.fan.num_rays()).map(|r| f.ray_value(&loaded.fan, r)).collect()));
        if let Some(pair) = &self.product_of {
            return Ok(FanFile {
                product_of: Some(Box::new((pair.0.canonical()?, pair.1.canonical()?))),
                function,
                ..FanFile::default()
            });
        }
        let mut out = from_fan(&loaded.fan, &loaded.weights);
        out.function = function;
        Ok(out)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string(self).expect("fan files serialize");
        s.push('\n');
        s
    }
}

/// The canonical file of a fan with the given weights.
pub fn from_fan(fan: &Fan, w: &Orientation) -> FanFile {
    let cones: Vec<Vec<usize>> = fan.cones()[1..].iter().map(|c| c.rays.clone()).collect();
    let weights = fan.facets().iter().filter(|&&s| s > 0).map(|&s| (s - 1, w.get(s))).collect();
    FanFile {
        ambient_rank: Some(fan.ambient_rank()),
        cones,
        rays: fan.rays().to_vec(),
        // the zero fan has no listed facet to carry a weight
        weights: (fan.dim() > 0).then_some(weights),
        ..FanFile::default()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const LAMBDA: &str = r#"{"ambient_rank": 2, "rays": [[1,0],[0,1],[-1,0],[0,-1]],
        "cones": [[0,1],[2,1],[2,3],[3,0]], "function": {"ray_values": [0,0,-1,-1]}}"#;

    #[test]
    fn round_trip_is_stable() {
        let f = parse(LAMBDA).unwrap();
        let c = f.canonical().unwrap();
        let s = c.to_json();
        let again = parse(&s).unwrap().canonical().unwrap().to_json();
        assert_eq!(s, again);
        assert_eq!(c.cones.len(), 8);
        assert_eq!(c.weights.as_ref().unwrap().len(), 4);
        assert!(s.starts_with(r#"{"ambient_rank":2,"cones":[[0],[1],[2],[3],[0,1]"#));
    }

    #[test]
    fn weights_are_keyed_by_file_position() {
        let text = r#"{"ambient_rank":1,"rays":[[1],[-1]],"cones":[[1],[0]],"weights":{"0":3,"1":3}}"#;
        let l = parse(text).unwrap().load().unwrap();
        assert_eq!(l.weights.get(l.fan.ray_cone(1)), 3);
    }

    #[test]
    fn parse_errors_carry_position() {
        let e = parse("{\n  \"ambient_rank\": 2,\n  \"rays\": [[1,0],\n}").unwrap_err();
        match e {
            Error::Parse(m) => assert!(m.starts_with("line 4"), "{m}"),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse(r#"{"ambient_rank":1,"bogus":1}"#), Err(Error::Parse(_))));
    }

    #[test]
    fn products_stay_factored() {
        let line = r#"{"ambient_rank":1,"rays":[[1],[-1]],"cones":[[0],[1]]}"#;
        let text = format!(r#"{{"product_of":[{line},{line}]}}"#);
        let f = parse(&text).unwrap();
        let l = f.load().unwrap();
        assert_eq!(l.fan.facets().len(), 4);
        let c = f.canonical().unwrap();
        assert!(c.product_of.is_some());
        assert_eq!(parse(&c.to_json()).unwrap().canonical().unwrap(), c);
    }
}
