//! Acceptance suite. Prints one PASS/FAIL line per criterion with its
//! runtime and limit, and exits nonzero if any criterion fails.

use std::process::Command;
use std::time::{Duration, Instant};

use tropfan::chow::{chow_dims, chow_pd_check, fy_crosscheck};
use tropfan::compact::compactify;
use tropfan::deligne::{build_double_complex, deligne_sequence, prop36_check, row_exactness_check, DeligneMode, Verdict};
use tropfan::homology::{
    complex_for, homology_table, homology_table_on, pd_check, smooth_check, verify_tm_coefficients,
    verify_tm_homology, HomologyTable, SmoothCriterion, Space, Theory,
};
use tropfan::io::LoadedFan;
use tropfan::sheaf::Sheaf;
use tropfan::weights::{check_balancing, divisor, tropical_modification, PLFunction};
use tropfan::zoo::{self, ZOO};
use tropfan::{Fan, Orientation};

type Check = Result<(), String>;
type Criterion = (&'static str, fn() -> Check, u64);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Check {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn ex(name: &str) -> LoadedFan {
    zoo::example(name).unwrap().load().unwrap()
}

fn grid(t: &HomologyTable) -> Vec<Vec<usize>> {
    t.grid.clone()
}

fn f1_at_origin(fan: &Fan, p: usize) -> usize {
    let cx = compactify(fan);
    let sheaf = Sheaf::new(&cx).unwrap();
    sheaf.dim(cx.face_id(0, 0).unwrap(), p)
}

fn cli(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_tropfan")).args(args).output().unwrap();
    (out.status.code().unwrap_or(-1), String::from_utf8(out.stdout).unwrap())
}

/// The numeric rows of a text table printed by `tropfan homology`.
fn cli_table(text: &str) -> Vec<Vec<usize>> {
    text.lines()
        .skip(2)
        .map(|l| l.split_whitespace().skip(1).map(|x| x.parse().unwrap()).collect())
        .collect()
}

fn ac1() -> Check {
    let c = ex("cube-skeleton").fan;
    let hc = vec![vec![0, 0, 5], vec![0, 0, 3], vec![0, 2, 1]];
    let hbar = vec![vec![1, 0, 0], vec![0, 5, 0], vec![0, 2, 1]];
    let t = homology_table(&c, &Space::Fan, Theory::Compact).map_err(|e| e.to_string())?;
    ensure(grid(&t) == hc, || format!("H_c = {:?}", t.grid))?;
    let t = homology_table(&c, &Space::Compactification, Theory::Ordinary).map_err(|e| e.to_string())?;
    ensure(grid(&t) == hbar, || format!("H(compactification) = {:?}", t.grid))?;
    let (code, out) = cli(&["homology", "--example", "cube-skeleton", "--theory", "compact", "--space", "fan"]);
    ensure(code == 0 && cli_table(&out) == hc, || format!("cli compact: {out}"))?;
    let (code, out) = cli(&["homology", "--example", "cube-skeleton", "--theory", "ordinary", "--space", "compactification"]);
    ensure(code == 0 && cli_table(&out) == hbar, || format!("cli ordinary: {out}"))
}

fn ac2() -> Check {
    let m = ex("mod-lambda-cross");
    let bm = homology_table(&m.fan, &Space::Fan, Theory::BorelMoore).unwrap();
    ensure(bm.get(0, 2) == 4, || format!("H^BM_(0,2) = {}", bm.get(0, 2)))?;
    let f2 = f1_at_origin(&m.fan, 2);
    ensure(f2 == 3, || format!("F^2(0) = {f2}"))?;
    let pd = pd_check(&m.fan, &m.weights).unwrap();
    ensure(!pd.holds, || "Poincaré duality unexpectedly holds".into())?;
    let lam = ex("lambda2").fan;
    let a = homology_table(&m.fan, &Space::Compactification, Theory::Ordinary).unwrap();
    let b = homology_table(&lam, &Space::Compactification, Theory::Ordinary).unwrap();
    ensure(a.grid == b.grid, || format!("{:?} vs {:?}", a.grid, b.grid))
}

fn ac3() -> Check {
    let c = ex("cross").fan;
    ensure(f1_at_origin(&c, 1) == 2, || "cross F_1(0) != 2".into())?;
    let t = ex("tropline3").fan;
    ensure(f1_at_origin(&t, 1) == 3, || "tropical line F_1(0) != 3".into())?;
    // max(0,x) - max(0,y) has no divisor on the cross, so its modification
    // is the graph: a line in three-space with three-dimensional F_1(0)
    let vals: Vec<i64> = c.rays().iter().map(|r| r[0].max(0) - r[1].max(0)).collect();
    let g = PLFunction::from_ray_values(&c, &vals).unwrap();
    let m = tropical_modification(&c, &Orientation::constant(&c, 1), &g).unwrap();
    ensure(m.is_degenerate(), || "expected a degenerate modification".into())?;
    let mut rays = m.total.rays().to_vec();
    rays.sort();
    let mut want = vec![vec![1, 0, 1], vec![-1, 0, 0], vec![0, 1, -1], vec![0, -1, 0]];
    want.sort();
    ensure(rays == want, || format!("rays {rays:?}"))?;
    ensure(f1_at_origin(&m.total, 1) == 3, || "modified cross F_1(0) != 3".into())
}

fn ac4() -> Check {
    let l = ex("lambda2");
    let f = l.function.clone().unwrap();
    let d = divisor(&l.fan, &l.weights, &f).unwrap();
    ensure(d.orders.values().all(|&o| o == 1) && d.orders.len() == 4, || format!("orders {:?}", d.orders))?;
    let (sub, _) = d.subfan.as_ref().ok_or("empty divisor")?;
    let mut rays = sub.rays().to_vec();
    rays.sort();
    let mut cross = ex("cross").fan.rays().to_vec();
    cross.sort();
    ensure(rays == cross && sub.dim() == 1 && sub.facets().len() == 4, || format!("divisor rays {rays:?}"))?;
    ensure(sub.facets().iter().all(|&s| sub.orientation().get(s) == 1), || "weights not 1".into())?;
    for name in ZOO {
        let z = ex(name);
        let n = z.fan.ambient_rank();
        let lin: Vec<i64> = (0..n as i64).map(|i| 2 * i - 1).collect();
        let d = divisor(&z.fan, &z.weights, &PLFunction::linear(&z.fan, &lin)).unwrap();
        ensure(d.is_empty(), || format!("linear divisor on {name} not empty"))?;
    }
    Ok(())
}

/// `dim H(A x B)` from the factor tables.
fn kunneth(a: &HomologyTable, b: &HomologyTable) -> Vec<Vec<usize>> {
    let (ra, ca) = (a.grid.len(), a.grid[0].len());
    let (rb, cb) = (b.grid.len(), b.grid[0].len());
    let mut out = vec![vec![0; ca + cb - 1]; ra + rb - 1];
    for p1 in 0..ra {
        for q1 in 0..ca {
            for p2 in 0..rb {
                for q2 in 0..cb {
                    out[p1 + p2][q1 + q2] += a.grid[p1][q1] * b.grid[p2][q2];
                }
            }
        }
    }
    out
}

fn ac5() -> Check {
    ensure(ZOO.len() >= 8, || "zoo too small".into())?;
    for name in ZOO {
        let f = ex(name).fan;
        ensure(f.ambient_rank() <= 4, || format!("{name} rank"))?;
        let cx = compactify(&f);
        for (space, theories) in [
            (Space::Fan, [Theory::Ordinary, Theory::BorelMoore, Theory::Compact]),
            (Space::Compactification, [Theory::Ordinary, Theory::BorelMoore, Theory::Compact]),
        ] {
            for th in theories {
                for p in 0..=f.dim() {
                    let c = complex_for(&cx, &space, th, p).map_err(|e| e.to_string())?;
                    ensure(c.is_complex(), || format!("{name}: d^2 != 0 for {space:?} {th:?} p={p}"))?;
                }
            }
        }
        let hc = homology_table_on(&cx, &Space::Fan, Theory::Compact).unwrap();
        let bm = homology_table_on(&cx, &Space::Fan, Theory::BorelMoore).unwrap();
        ensure(hc.grid == bm.grid, || format!("{name}: H_c {:?} vs BM {:?}", hc.grid, bm.grid))?;
        let bm = homology_table_on(&cx, &Space::Compactification, Theory::BorelMoore).unwrap();
        let ord = homology_table_on(&cx, &Space::Compactification, Theory::Ordinary).unwrap();
        ensure(bm.grid == ord.grid, || format!("{name}: compact BM {:?} vs {:?}", bm.grid, ord.grid))?;
    }
    let prod = ex("product:line1×cross").fan;
    for space in [Space::Fan, Space::Compactification] {
        for th in [Theory::BorelMoore, Theory::Ordinary] {
            let a = homology_table(&ex("line1").fan, &space, th).unwrap();
            let b = homology_table(&ex("cross").fan, &space, th).unwrap();
            let p = homology_table(&prod, &space, th).unwrap();
            let k = kunneth(&a, &b);
            ensure(p.grid == k, || format!("Künneth {space:?} {th:?}: {:?} vs {k:?}", p.grid))?;
        }
    }
    Ok(())
}

fn ac6() -> Check {
    for name in ZOO {
        let f = ex(name).fan;
        if !f.is_simplicial() {
            continue;
        }
        let r = fy_crosscheck(&f).unwrap();
        ensure(r.passes, || format!("{name}: chow {:?} vs diagonal {:?}", r.chow, r.diagonal))?;
    }
    let c = ex("cube-skeleton");
    ensure(chow_dims(&c.fan).unwrap() == vec![1, 5, 1], || "cube Chow dims".into())?;
    let r = chow_pd_check(&c.fan, &c.weights).unwrap();
    ensure(r.passes, || format!("cube Chow duality {r:?}"))
}

fn smooth_names() -> Vec<&'static str> {
    vec!["lambda2", "line1", "tropline3", "bergman-u(2,3)", "bergman-u(2,4)", "bergman-u(2,5)", "bergman-u(3,4)"]
}

fn ac7() -> Check {
    for name in ZOO {
        let f = ex(name).fan;
        if !f.is_simplicial() {
            continue;
        }
        for k in 0..=f.dim() {
            let dc = build_double_complex(&f, k).unwrap();
            ensure(dc.is_double_complex(), || format!("{name} k={k}: not a double complex"))?;
            let rows = row_exactness_check(&dc);
            ensure(rows.iter().all(|r| r.exact), || format!("{name} k={k}: {rows:?}"))?;
        }
    }
    for name in smooth_names() {
        let l = ex(name);
        let s = smooth_check(&l.fan, &l.weights, SmoothCriterion::Local).unwrap();
        ensure(s.smooth, || format!("{name} not smooth"))?;
        for p in 0..=l.fan.dim() {
            let r = deligne_sequence(&l.fan, &l.weights, p, DeligneMode::Full).unwrap();
            ensure(r.verdict == Verdict::Exact, || format!("{name} p={p}: {r:?}"))?;
        }
    }
    let c = ex("cube-skeleton");
    let r = deligne_sequence(&c.fan, &c.weights, 2, DeligneMode::Full).unwrap();
    ensure(r.euler == -2 && r.verdict == Verdict::NotExact, || format!("cube p=2: {r:?}"))?;
    for name in ["cube-skeleton", "lambda2"] {
        let f = ex(name).fan;
        for k in 0..=f.dim() {
            let r = prop36_check(&f, k).unwrap();
            ensure(r.holds, || format!("{name} k={k}: {r:?}"))?;
        }
    }
    Ok(())
}

fn ac8() -> Check {
    let l = ex("lambda2");
    let f = l.function.clone().unwrap();
    let lin = PLFunction::linear(&l.fan, &[2, -3]);
    for (what, g) in [("f", &f), ("linear", &lin)] {
        let c = verify_tm_coefficients(&l.fan, &l.weights, g).unwrap();
        ensure(c.passed, || format!("{what}: coefficients {c:?}"))?;
        let h = verify_tm_homology(&l.fan, &l.weights, g).unwrap();
        ensure(h.passed, || format!("{what}: homology {h:?}"))?;
    }
    let h = verify_tm_homology(&l.fan, &l.weights, &lin).unwrap();
    ensure(h.degenerate, || "linear modification not degenerate".into())
}

fn ac9() -> Check {
    for name in ZOO {
        let l = ex(name);
        let a = smooth_check(&l.fan, &l.weights, SmoothCriterion::Local).unwrap();
        let b = smooth_check(&l.fan, &l.weights, SmoothCriterion::Aksnes).unwrap();
        ensure(a.smooth == b.smooth, || format!("{name}: local {} aksnes {}", a.smooth, b.smooth))?;
        let want = match *name {
            "lambda2" | "tropline3" => Some(true),
            "cube-skeleton" | "cross" | "mod-lambda-cross" => Some(false),
            _ => None,
        };
        if let Some(w) = want {
            ensure(a.smooth == w, || format!("{name}: smooth = {}", a.smooth))?;
        }
    }
    Ok(())
}

fn ac10() -> Check {
    // doubling one quadrant of the plane unbalances exactly its two rays
    let l = ex("lambda2").fan;
    let q = l.cone_id(&[0, 1]).unwrap();
    let mut w = Orientation::constant(&l, 1).as_map().clone();
    w.insert(q, 2);
    let r = check_balancing(&l, &Orientation::new(w).unwrap()).unwrap();
    let mut bad: Vec<Vec<usize>> = r.violations.iter().map(|v| l.cone(v.cone).rays.clone()).collect();
    bad.sort();
    ensure(bad == vec![vec![0], vec![1]], || format!("violations at {bad:?}"))?;

    let cx = compactify(&l);
    for i in 0..cx.covers().len() {
        let bad = cx.with_flipped_sign(i);
        let broken = (0..=2).any(|p| {
            [Theory::Ordinary, Theory::BorelMoore].iter().any(|&th| {
                complex_for(&bad, &Space::Compactification, th, p).map_or(true, |c| !c.is_complex())
            })
        });
        ensure(broken, || format!("flipping cover {i} went unnoticed"))?;
    }

    let dc = build_double_complex(&l, 0).unwrap();
    for &(tau, sigma) in l.covers() {
        let bad = dc.with_flipped_sign(&l, (tau, sigma)).unwrap();
        let rows = row_exactness_check(&bad);
        ensure(rows.iter().any(|r| !r.exact), || format!("flipping ({tau},{sigma}) went unnoticed"))?;
    }
    Ok(())
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("AC1", ac1, 10),
        ("AC2", ac2, 30),
        ("AC3", ac3, 1),
        ("AC4", ac4, 1),
        ("AC5", ac5, 120),
        ("AC6", ac6, 30),
        ("AC7", ac7, 120),
        ("AC8", ac8, 60),
        ("AC9", ac9, 60),
        ("AC10", ac10, 60),
    ];
    let mut failed = 0;
    for (name, f, limit) in criteria {
        let start = Instant::now();
        let res = std::panic::catch_unwind(f).unwrap_or_else(|_| Err("panicked".into()));
        let t = start.elapsed();
        let in_time = t <= Duration::from_secs(limit);
        match (&res, in_time) {
            (Ok(()), true) => println!("{name} PASS ({:.2}s, limit {limit}s)", t.as_secs_f64()),
            (Ok(()), false) => println!("{name} FAIL ({:.2}s, limit {limit}s): over time", t.as_secs_f64()),
            (Err(e), _) => println!("{name} FAIL ({:.2}s, limit {limit}s): {e}", t.as_secs_f64()),
        }
        if res.is_err() || !in_time {
            failed += 1;
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
