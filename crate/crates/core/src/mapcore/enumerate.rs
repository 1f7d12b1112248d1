//! Brute-force catalogues of small rooted maps, for cross-checking.

use std::collections::BTreeMap;

use super::map::HalfEdgeMap;

fn next_permutation(p: &mut [u32]) -> bool {
    let n = p.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// Every rooted planar map with `n` edges, once each, in canonical form.
/// Runs through all `(2n)!` rotations, so keep `n <= 5`.
pub fn all_rooted_maps(n: usize) -> Vec<HalfEdgeMap> {
    assert!(n <= 5, "catalogue too large");
    if n == 0 {
        return vec![HalfEdgeMap::vertex_map()];
    }
    let len = 2 * n;
    let alpha: Vec<u32> = (0..len as u32).map(|h| h ^ 1).collect();
    let mut sigma: Vec<u32> = (0..len as u32).collect();
    let mut found = BTreeMap::new();
    loop {
        let m = HalfEdgeMap::from_raw(alpha.clone(), sigma.clone(), 0);
        if m.validate().is_planar_map() {
            // root 0 with every labelling already covers every rooting
            let c = m.canonical();
            found.entry(c.canonical_code()).or_insert(c);
        }
        if !next_permutation(&mut sigma) {
            break;
        }
    }
    found.into_values().collect()
}
