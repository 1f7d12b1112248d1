//! Uniform rooted quadrangulations from labelled trees (Schaeffer's
//! construction).
//!
//! A plane tree with `n` edges and integer labels changing by at most one
//! along edges, plus one extra vertex below the minimum label, gives a
//! pointed quadrangulation with `n` faces: every corner is joined to the next
//! corner in contour order whose label is one less. One more fair bit picks
//! the orientation of the root edge. Every rooted quadrangulation with `n`
//! faces has `n + 2` vertices, so forgetting the point keeps the law uniform.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::mapcore::{HalfEdgeMap, Quadrangulation};

/// A uniform Dyck path of length `2n` (`true` is an up step), drawn with the
/// cycle lemma.
pub fn uniform_dyck_path<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<bool> {
    let mut steps = vec![false; 2 * n + 1];
    steps[..n].fill(true);
    steps.shuffle(rng);
    let mut s = 0i64;
    let mut best = i64::MAX;
    let mut at = 0;
    for (k, &up) in steps.iter().enumerate() {
        s += if up { 1 } else { -1 };
        if s < best {
            best = s;
            at = k + 1;
        }
    }
    let len = steps.len();
    steps.rotate_left(at % len);
    steps.pop();
    steps
}

/// The quadrangulation of a labelled tree given by its contour (Dyck path),
/// the labels of its vertices in order of first visit, and the root
/// orientation bit.
pub fn schaeffer(steps: &[bool], labels: &[i64], flip: bool) -> Quadrangulation {
    let corners = steps.len();
    let n = corners / 2;
    assert!(n >= 1 && labels.len() == n + 1);

    // vertex of each corner
    let mut corner_vertex = vec![0u32; corners];
    let mut stack = vec![0u32];
    let mut next = 1u32;
    for (i, &up) in steps.iter().enumerate() {
        corner_vertex[i] = *stack.last().unwrap();
        if up {
            stack.push(next);
            next += 1;
        } else {
            stack.pop();
        }
    }

    let lab: Vec<i64> = corner_vertex.iter().map(|&v| labels[v as usize]).collect();
    let lmin = *lab.iter().min().unwrap();
    let lmax = *lab.iter().max().unwrap();
    let none = usize::MAX;
    let star = corners;
    // succ[i] is a corner index or `star`
    let mut succ = vec![star; corners];
    let mut next_at = vec![none; (lmax - lmin + 1) as usize];
    for pos in (0..2 * corners).rev() {
        let i = pos % corners;
        let l = (lab[i] - lmin) as usize;
        if pos < corners && l > 0 && next_at[l - 1] != none {
            succ[i] = next_at[l - 1] % corners;
        }
        next_at[l] = pos;
    }

    // arcs arriving at each corner, nearest first
    let mut in_start = vec![0u32; corners + 3];
    for &s in &succ {
        in_start[s + 2] += 1;
    }
    for k in 2..in_start.len() {
        in_start[k] += in_start[k - 1];
    }
    let mut in_arcs = vec![0u32; corners];
    for (i, &s) in succ.iter().enumerate() {
        in_arcs[in_start[s + 1] as usize] = i as u32;
        in_start[s + 1] += 1;
    }
    for j in 0..corners {
        let seg = &mut in_arcs[in_start[j] as usize..in_start[j + 1] as usize];
        seg.sort_unstable_by_key(|&i| (j + corners - i as usize) % corners);
    }

    // corners of each vertex, in contour order
    let vertices = n + 1;
    let mut v_start = vec![0u32; vertices + 1];
    for &v in &corner_vertex {
        v_start[v as usize + 1] += 1;
    }
    for v in 0..vertices {
        v_start[v + 1] += v_start[v];
    }
    let mut fill = v_start.clone();
    let mut v_corners = vec![0u32; corners];
    for (i, &v) in corner_vertex.iter().enumerate() {
        v_corners[fill[v as usize] as usize] = i as u32;
        fill[v as usize] += 1;
    }

    // arc i is half-edges 2i (at corner i) and 2i + 1 (at its successor)
    let hec = 2 * corners;
    let alpha: Vec<u32> = (0..hec as u32).map(|h| h ^ 1).collect();
    let mut sigma = vec![0u32; hec];
    let mut around = Vec::new();
    for v in 0..vertices {
        around.clear();
        for &j in &v_corners[v_start[v] as usize..v_start[v + 1] as usize] {
            let j = j as usize;
            for &i in &in_arcs[in_start[j] as usize..in_start[j + 1] as usize] {
                around.push(2 * i + 1);
            }
            around.push(2 * j as u32);
        }
        close_cycle(&mut sigma, &around, true);
    }
    around.clear();
    around.extend(in_arcs[in_start[star] as usize..in_start[star + 1] as usize].iter().map(|&i| 2 * i + 1));
    close_cycle(&mut sigma, &around, false);

    let root = if flip { 1 } else { 0 };
    let map = HalfEdgeMap::from_raw(alpha, sigma, root);

    // bipartition by label parity; the root's origin is black
    let origin_label = |h: usize| -> i64 {
        if h % 2 == 0 {
            lab[h / 2]
        } else {
            match succ[h / 2] {
                s if s == star => lmin - 1,
                s => lab[s],
            }
        }
    };
    let root_label = origin_label(root as usize);
    let black: Vec<bool> = (0..hec).map(|h| (origin_label(h) - root_label) % 2 == 0).collect();
    let q = Quadrangulation::from_parts(map, black);
    debug_assert!(q.map().validate().is_planar_map());
    debug_assert!(q.map().face_degrees().iter().all(|&d| d == 4));
    q
}

/// Makes `sigma` cycle through `seq` forwards or backwards.
fn close_cycle(sigma: &mut [u32], seq: &[u32], forward: bool) {
    let k = seq.len();
    for t in 0..k {
        let (a, b) = (seq[t], seq[(t + 1) % k]);
        if forward {
            sigma[a as usize] = b;
        } else {
            sigma[b as usize] = a;
        }
    }
}

/// A uniform rooted quadrangulation with `n >= 1` faces.
pub fn sample_uniform_quadrangulation<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Quadrangulation {
    assert!(n >= 1, "a quadrangulation needs at least one face");
    let steps = uniform_dyck_path(n, rng);
    let mut labels = vec![0i64; n + 1];
    let mut stack = vec![0usize];
    let mut next = 1;
    for &up in &steps {
        if up {
            labels[next] = labels[*stack.last().unwrap()] + rng.random_range(-1..=1);
            stack.push(next);
            next += 1;
        } else {
            stack.pop();
        }
    }
    let flip = rng.random::<bool>();
    schaeffer(&steps, &labels, flip)
}
