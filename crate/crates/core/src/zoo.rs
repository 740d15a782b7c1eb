//! Built-in example fans.

use crate::error::{Error, Result};
use crate::fan::Fan;
use crate::io::{from_fan, FanFile, FunctionSpec};
use crate::weights::{tropical_modification, Orientation, PLFunction};

/// Fans exercised by the property suites.
pub const ZOO: &[&str] = &[
    "point",
    "line1",
    "lambda2",
    "cross",
    "cube-skeleton",
    "tropline3",
    "mod-lambda-cross",
    "bergman-u(2,3)",
    "bergman-u(3,4)",
    "product:line1×cross",
];

/// Every fixed name accepted by [`example`], plus the parametric families.
pub const NAMES: &[&str] = &[
    "point",
    "line1",
    "lambda2",
    "cross",
    "cube-skeleton",
    "tropline3",
    "mod-lambda-cross",
    "bergman-u(r,n)",
    "product:A×B",
];

fn plain(fan: &Fan) -> FanFile {
    from_fan(fan, &Orientation::constant(fan, 1))
}

pub fn point() -> Fan {
    Fan::new(0, vec![], vec![]).expect("zero fan")
}

pub fn line1() -> Fan {
    Fan::new(1, vec![vec![1], vec![-1]], vec![vec![0], vec![1]]).expect("line")
}

pub fn lambda2() -> Fan {
    let rays = vec![vec![1, 0], vec![0, 1], vec![-1, 0], vec![0, -1]];
    Fan::new(2, rays, vec![vec![0, 1], vec![1, 2], vec![2, 3], vec![0, 3]]).expect("complete plane fan")
}

/// `min(0,x) + min(0,y)` on `lambda2`, whose divisor is the cross.
pub fn lambda2_function(fan: &Fan) -> PLFunction {
    let vals: Vec<i64> = fan.rays().iter().map(|r| r[0].min(0) + r[1].min(0)).collect();
    PLFunction::from_ray_values(fan, &vals).expect("integral on rays")
}

pub fn cross() -> Fan {
    let rays = vec![vec![1, 0], vec![-1, 0], vec![0, 1], vec![0, -1]];
    Fan::new(2, rays, vec![vec![0], vec![1], vec![2], vec![3]]).expect("cross")
}

pub fn cube_skeleton() -> Fan {
    let mut rays = Vec::new();
    for x in [-1, 1] {
        for y in [-1, 1] {
            for z in [-1, 1] {
                rays.push(vec![x, y, z]);
            }
        }
    }
    let mut cones = Vec::new();
    for i in 0..8 {
        for j in i + 1..8 {
            if (0..3).filter(|&c| rays[i][c] != rays[j][c]).count() == 1 {
                cones.push(vec![i, j]);
            }
        }
    }
    Fan::new(3, rays, cones).expect("cube skeleton")
}

pub fn tropline3() -> Fan {
    let rays = vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1], vec![-1, -1, -1]];
    Fan::new(3, rays, vec![vec![0], vec![1], vec![2], vec![3]]).expect("tropical line")
}

pub fn mod_lambda_cross() -> Fan {
    let l = lambda2();
    let f = lambda2_function(&l);
    tropical_modification(&l, &Orientation::constant(&l, 1), &f)
        .expect("modification of the plane")
        .total
}

/// The Bergman fan of the uniform matroid `U(r,n)` in `R^n / R(1,…,1)`,
/// written in the basis `e_1, …, e_{n-1}`.
pub fn bergman_uniform(r: usize, n: usize) -> Result<Fan> {
    if r == 0 || r > n || n > 6 {
        return Err(Error::UnknownExample(format!("bergman-u({r},{n}) needs 1 ≤ r ≤ n ≤ 6")));
    }
    // proper nonempty flats: subsets of size < r, as bitmasks
    let flats: Vec<u32> = (1u32..(1 << n) - 1)
        .filter(|m| (m.count_ones() as usize) < r)
        .collect();
    let rays: Vec<Vec<i64>> = flats
        .iter()
        .map(|&m| {
            let last = m & (1 << (n - 1)) != 0;
            (0..n - 1)
                .map(|i| {
                    let bit = i64::from(m & (1 << i) != 0);
                    if last {
                        bit - 1
                    } else {
                        bit
                    }
                })
                .collect()
        })
        .collect();
    let mut cones = Vec::new();
    let mut chain = Vec::new();
    fn chains(flats: &[u32], start: usize, chain: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        for j in start..flats.len() {
            let ok = chain.last().is_none_or(|&i| {
                let (a, b) = (flats[i], flats[j]);
                a & b == a && a != b
            });
            if ok {
                chain.push(j);
                out.push(chain.clone());
                chains(flats, 0, chain, out);
                chain.pop();
            }
        }
    }
    chains(&flats, 0, &mut chain, &mut cones);
    for c in &mut cones {
        c.sort_unstable();
    }
    Fan::new(n - 1, rays, cones)
}

fn parse_bergman(name: &str) -> Option<(usize, usize)> {
    let inner = name.strip_prefix("bergman-u(")?.strip_suffix(')')?;
    let (r, n) = inner.split_once(',')?;
    Some((r.trim().parse().ok()?, n.trim().parse().ok()?))
}

/// The fan file of a named example.
pub fn example(name: &str) -> Result<FanFile> {
    let name = name.trim();
    if let Some(rest) = name.strip_prefix("product:") {
        let (a, b) = rest
            .split_once('×')
            .or_else(|| rest.split_once('x'))
            .ok_or_else(|| Error::UnknownExample(name.to_string()))?;
        return Ok(FanFile {
            product_of: Some(Box::new((example(a)?, example(b)?))),
            ..FanFile::default()
        });
    }
    if let Some((r, n)) = parse_bergman(name) {
        return Ok(plain(&bergman_uniform(r, n)?));
    }
    Ok(match name {
        "point" => plain(&point()),
        "line1" => plain(&line1()),
        "lambda2" => {
            let l = lambda2();
            let f = lambda2_function(&l);
            let mut file = plain(&l);
            file.function = Some(FunctionSpec::RayValues((0..l.num_rays()).map(|r| f.ray_value(&l, r)).collect()));
            file
        }
        "cross" => plain(&cross()),
        "cube-skeleton" => plain(&cube_skeleton()),
        "tropline3" => plain(&tropline3()),
        "mod-lambda-cross" => {
            let m = mod_lambda_cross();
            from_fan(&m, &m.orientation())
        }
        _ => return Err(Error::UnknownExample(name.to_string())),
    })
}
