use tropfan::compact::compactify;
use tropfan::homology::{complex_for, homology_table, Space, Theory};
use tropfan::sheaf::Sheaf;
use tropfan::zoo::{self, ZOO};

fn alternating(v: impl IntoIterator<Item = usize>) -> i64 {
    v.into_iter().enumerate().map(|(i, x)| if i % 2 == 0 { x as i64 } else { -(x as i64) }).sum()
}

/// Euler characteristics of the homology agree with those of the chain
/// groups, which are counted without any rank computation.
#[test]
fn euler_characteristics_match_chain_counts() {
    for name in ZOO {
        let fan = zoo::example(name).unwrap().load().unwrap().fan;
        let cx = compactify(&fan);
        for space in [Space::Fan, Space::Compactification] {
            for th in [Theory::Ordinary, Theory::BorelMoore, Theory::Compact] {
                let t = homology_table(&fan, &space, th).unwrap();
                for p in 0..=fan.dim() {
                    let c = complex_for(&cx, &space, th, p).unwrap();
                    let chains = alternating((0..=c.top()).map(|q| c.dim(q)));
                    assert_eq!(alternating(t.grid[p].iter().copied()), chains, "{name} {space:?} {th:?} p={p}");
                }
            }
        }
    }
}

/// On a fan the BM Euler characteristic in degree `p` is the signed count of
/// cones weighted by `dim F_p`, computed here straight from the sheaf.
#[test]
fn bm_euler_characteristic_from_cone_counts() {
    for name in ZOO {
        let fan = zoo::example(name).unwrap().load().unwrap().fan;
        let cx = compactify(&fan);
        let sheaf = Sheaf::new(&cx).unwrap();
        let t = homology_table(&fan, &Space::Fan, Theory::BorelMoore).unwrap();
        for p in 0..=fan.dim() {
            let count: i64 = fan
                .cones()
                .iter()
                .map(|c| {
                    let n = sheaf.dim(cx.face_id(0, c.id).unwrap(), p) as i64;
                    if c.dim % 2 == 0 { n } else { -n }
                })
                .sum();
            assert_eq!(alternating(t.grid[p].iter().copied()), count, "{name} p={p}");
        }
    }
}

#[test]
fn golden_plane_and_line() {
    let lam = zoo::example("lambda2").unwrap().load().unwrap().fan;
    let t = homology_table(&lam, &Space::Compactification, Theory::Ordinary).unwrap();
    assert_eq!(t.grid, vec![vec![1, 0, 0], vec![0, 2, 0], vec![0, 0, 1]]);
    let line = zoo::example("tropline3").unwrap().load().unwrap().fan;
    let t = homology_table(&line, &Space::Compactification, Theory::Ordinary).unwrap();
    assert_eq!(t.grid, vec![vec![1, 0], vec![0, 1]]);
}
