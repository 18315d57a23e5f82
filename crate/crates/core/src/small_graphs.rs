//! Exhaustive enumeration of small connected graphs up to isomorphism.

use crate::graph::Graph;

/// Largest order supported; canonical forms are computed over all `n!`
/// relabellings.
pub const MAX_ORDER: usize = 7;

fn pairs(n: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            out.push((a, b));
        }
    }
    out
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn go(cur: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if cur.len() == used.len() {
            out.push(cur.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                cur.push(i);
                go(cur, used, out);
                cur.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

fn connected(n: usize, mask: u32, pairs: &[(usize, usize)]) -> bool {
    let mut reach = 1u32;
    loop {
        let mut grown = reach;
        for (i, &(a, b)) in pairs.iter().enumerate() {
            if mask >> i & 1 == 1 && (reach >> a & 1 == 1 || reach >> b & 1 == 1) {
                grown |= 1 << a | 1 << b;
            }
        }
        if grown == reach {
            break;
        }
        reach = grown;
    }
    reach == (1 << n) - 1
}

/// All connected simple graphs on exactly `n` vertices, one per isomorphism
/// class, in increasing order of canonical code. `n` must be at most
/// [`MAX_ORDER`].
pub fn connected_graphs(n: usize) -> Vec<Graph> {
    assert!(n <= MAX_ORDER, "order {n} too large for exhaustive enumeration");
    if n == 0 {
        return Vec::new();
    }
    let ps = pairs(n);
    let mut slot = vec![vec![0usize; n]; n];
    for (i, &(a, b)) in ps.iter().enumerate() {
        slot[a][b] = i;
        slot[b][a] = i;
    }
    let perms = permutations(n);
    // image of each pair slot under each permutation
    let images: Vec<Vec<usize>> = perms
        .iter()
        .map(|p| ps.iter().map(|&(a, b)| slot[p[a]][p[b]]).collect())
        .collect();
    let mut seen = std::collections::BTreeSet::new();
    for mask in 0u32..(1 << ps.len()) {
        if !connected(n, mask, &ps) {
            continue;
        }
        let canon = images
            .iter()
            .map(|img| {
                img.iter()
                    .enumerate()
                    .filter(|&(i, _)| mask >> i & 1 == 1)
                    .fold(0u32, |acc, (_, &j)| acc | 1 << j)
            })
            .min()
            .unwrap();
        seen.insert(canon);
    }
    seen.into_iter()
        .map(|code| {
            let edges: Vec<_> = ps
                .iter()
                .enumerate()
                .filter(|&(i, _)| code >> i & 1 == 1)
                .map(|(_, &e)| e)
                .collect();
            Graph::from_edges(n, &edges).unwrap()
        })
        .collect()
}

/// Connected graphs on `1..=max_n` vertices.
pub fn connected_graphs_up_to(max_n: usize) -> Vec<Graph> {
    (1..=max_n).flat_map(connected_graphs).collect()
}
