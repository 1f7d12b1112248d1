use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A rooted planar map as a rotation system on half-edges.
///
/// `alpha` pairs the two halves of each edge and `sigma` sends a half-edge to
/// the next one counter-clockwise around its origin. Vertices are the cycles
/// of `sigma`, faces the cycles of `sigma ∘ alpha`. The corner `c(h)` is the
/// angular sector between `h` and `sigma(h)`.
///
/// The vertex map (one vertex, no edge) has no half-edges at all.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HalfEdgeMap {
    alpha: Vec<u32>,
    sigma: Vec<u32>,
    root: u32,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Validation {
    pub involution: std::result::Result<(), u32>,
    pub permutation: std::result::Result<(), u32>,
    pub connected: bool,
    pub vertices: usize,
    pub edges: usize,
    pub faces: usize,
}

impl Validation {
    pub fn euler(&self) -> i64 {
        self.vertices as i64 - self.edges as i64 + self.faces as i64
    }

    pub fn is_planar_map(&self) -> bool {
        self.involution.is_ok() && self.permutation.is_ok() && self.connected && self.euler() == 2
    }

    pub fn describe(&self) -> String {
        let mut out = Vec::new();
        if let Err(h) = self.involution {
            out.push(format!("alpha is not a fixed-point-free involution at {h}"));
        }
        if let Err(h) = self.permutation {
            out.push(format!("sigma is not a permutation (value {h} repeated or out of range)"));
        }
        if !self.connected {
            out.push("not connected".into());
        }
        if self.involution.is_ok() && self.permutation.is_ok() && self.euler() != 2 {
            out.push(format!("V - E + F = {}", self.euler()));
        }
        out.join("; ")
    }
}

/// Cycle labelling of a permutation: `id[h]` and the number of cycles.
pub(crate) fn cycles(perm: impl Fn(u32) -> u32, len: usize) -> (Vec<u32>, usize) {
    let mut id = vec![u32::MAX; len];
    let mut count = 0u32;
    for start in 0..len as u32 {
        if id[start as usize] != u32::MAX {
            continue;
        }
        let mut h = start;
        loop {
            id[h as usize] = count;
            h = perm(h);
            if h == start {
                break;
            }
        }
        count += 1;
    }
    (id, count as usize)
}

impl HalfEdgeMap {
    pub fn vertex_map() -> Self {
        HalfEdgeMap { alpha: Vec::new(), sigma: Vec::new(), root: 0 }
    }

    /// The single-edge map: two vertices joined by one edge.
    pub fn edge_map() -> Self {
        HalfEdgeMap { alpha: vec![1, 0], sigma: vec![0, 1], root: 0 }
    }

    /// Checked constructor.
    pub fn new(alpha: Vec<u32>, sigma: Vec<u32>, root: u32) -> Result<Self> {
        let m = HalfEdgeMap { alpha, sigma, root };
        if m.alpha.len() != m.sigma.len() {
            return Err(Error::InvalidMap("alpha and sigma lengths differ".into()));
        }
        if m.alpha.len() % 2 == 1 {
            return Err(Error::InvalidMap("odd number of half-edges".into()));
        }
        if !m.alpha.is_empty() && m.root as usize >= m.alpha.len() {
            return Err(Error::InvalidMap(format!("root {} out of range", m.root)));
        }
        let v = m.validate();
        if !v.is_planar_map() {
            return Err(Error::InvalidMap(v.describe()));
        }
        Ok(m)
    }

    pub(crate) fn from_raw(alpha: Vec<u32>, sigma: Vec<u32>, root: u32) -> Self {
        debug_assert_eq!(alpha.len(), sigma.len());
        HalfEdgeMap { alpha, sigma, root }
    }

    pub fn alpha(&self, h: u32) -> u32 {
        self.alpha[h as usize]
    }

    pub fn sigma(&self, h: u32) -> u32 {
        self.sigma[h as usize]
    }

    pub fn alphas(&self) -> &[u32] {
        &self.alpha
    }

    pub fn sigmas(&self) -> &[u32] {
        &self.sigma
    }

    pub fn root(&self) -> u32 {
        self.root
    }

    pub fn is_vertex_map(&self) -> bool {
        self.alpha.is_empty()
    }

    pub fn half_edge_count(&self) -> usize {
        self.alpha.len()
    }

    /// Number of edges, which is the size of the map.
    pub fn size(&self) -> usize {
        self.alpha.len() / 2
    }

    pub fn sigma_inverse(&self) -> Vec<u32> {
        let mut inv = vec![0; self.sigma.len()];
        for (h, &s) in self.sigma.iter().enumerate() {
            inv[s as usize] = h as u32;
        }
        inv
    }

    /// Vertex id of the origin of each half-edge, and the vertex count.
    pub fn vertex_ids(&self) -> (Vec<u32>, usize) {
        if self.is_vertex_map() {
            return (Vec::new(), 1);
        }
        cycles(|h| self.sigma[h as usize], self.sigma.len())
    }

    /// Face id of the corner `c(h)` for each half-edge, and the face count.
    pub fn face_ids(&self) -> (Vec<u32>, usize) {
        if self.is_vertex_map() {
            return (Vec::new(), 1);
        }
        cycles(|h| self.alpha[self.sigma[h as usize] as usize], self.sigma.len())
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_ids().1
    }

    pub fn face_count(&self) -> usize {
        self.face_ids().1
    }

    pub fn validate(&self) -> Validation {
        let n = self.alpha.len();
        let mut involution = Ok(());
        for (h, &a) in self.alpha.iter().enumerate() {
            if a as usize >= n || a as usize == h || self.alpha[a as usize] as usize != h {
                involution = Err(h as u32);
                break;
            }
        }
        let mut permutation = Ok(());
        let mut seen = vec![false; n];
        for &s in &self.sigma {
            if s as usize >= n || seen[s as usize] {
                permutation = Err(s);
                break;
            }
            seen[s as usize] = true;
        }
        if involution.is_err() || permutation.is_err() {
            return Validation { involution, permutation, connected: false, vertices: 0, edges: n / 2, faces: 0 };
        }
        let connected = self.reachable_from_root() == n;
        let (_, vertices) = self.vertex_ids();
        let (_, faces) = self.face_ids();
        Validation { involution, permutation, connected, vertices, edges: n / 2, faces }
    }

    fn reachable_from_root(&self) -> usize {
        if self.is_vertex_map() {
            return 0;
        }
        let mut seen = vec![false; self.alpha.len()];
        let mut stack = vec![self.root];
        seen[self.root as usize] = true;
        let mut count = 0;
        while let Some(h) = stack.pop() {
            count += 1;
            for next in [self.sigma[h as usize], self.alpha[h as usize]] {
                if !seen[next as usize] {
                    seen[next as usize] = true;
                    stack.push(next);
                }
            }
        }
        count
    }

    /// Labels half-edges by a breadth-first search from the root that looks
    /// at `sigma` before `alpha`. Two rooted maps are isomorphic exactly when
    /// their relabelled forms are equal.
    fn canonical_order(&self) -> (Vec<u32>, Vec<u32>) {
        let n = self.alpha.len();
        let mut label = vec![u32::MAX; n];
        let mut order = Vec::with_capacity(n);
        let mut queue = VecDeque::with_capacity(n);
        label[self.root as usize] = 0;
        order.push(self.root);
        queue.push_back(self.root);
        while let Some(h) = queue.pop_front() {
            for next in [self.sigma[h as usize], self.alpha[h as usize]] {
                if label[next as usize] == u32::MAX {
                    label[next as usize] = order.len() as u32;
                    order.push(next);
                    queue.push_back(next);
                }
            }
        }
        (label, order)
    }

    /// Root-preserving relabelling into canonical form.
    pub fn canonical(&self) -> HalfEdgeMap {
        if self.is_vertex_map() {
            return self.clone();
        }
        let (label, order) = self.canonical_order();
        let alpha = order.iter().map(|&h| label[self.alpha[h as usize] as usize]).collect();
        let sigma = order.iter().map(|&h| label[self.sigma[h as usize] as usize]).collect();
        HalfEdgeMap { alpha, sigma, root: 0 }
    }

    /// Compact canonical code; equal codes mean isomorphic rooted maps.
    pub fn canonical_code(&self) -> Vec<u32> {
        let c = self.canonical();
        let mut code = Vec::with_capacity(2 * c.alpha.len());
        for h in 0..c.alpha.len() {
            code.push(c.alpha[h]);
            code.push(c.sigma[h]);
        }
        code
    }

    pub fn isomorphic(&self, other: &HalfEdgeMap) -> bool {
        self.half_edge_count() == other.half_edge_count() && self.canonical() == other.canonical()
    }

    /// Relabels half-edges so that `order[i]` becomes `i`; `order` must be a
    /// permutation of all half-edges.
    pub fn relabel(&self, order: &[u32]) -> HalfEdgeMap {
        let mut label = vec![0u32; order.len()];
        for (i, &h) in order.iter().enumerate() {
            label[h as usize] = i as u32;
        }
        let alpha = order.iter().map(|&h| label[self.alpha[h as usize] as usize]).collect();
        let sigma = order.iter().map(|&h| label[self.sigma[h as usize] as usize]).collect();
        HalfEdgeMap { alpha, sigma, root: label[self.root as usize] }
    }

    /// Same map rooted at another half-edge.
    pub fn rerooted(&self, root: u32) -> HalfEdgeMap {
        assert!((root as usize) < self.alpha.len());
        HalfEdgeMap { alpha: self.alpha.clone(), sigma: self.sigma.clone(), root }
    }

    /// True when the map has no loop and no pair of parallel edges.
    pub fn is_simple(&self) -> bool {
        let (vid, _) = self.vertex_ids();
        let mut pairs: Vec<(u32, u32)> = Vec::with_capacity(self.size());
        for h in 0..self.alpha.len() as u32 {
            let a = self.alpha[h as usize];
            if h < a {
                let (x, y) = (vid[h as usize], vid[a as usize]);
                if x == y {
                    return false;
                }
                pairs.push((x.min(y), x.max(y)));
            }
        }
        pairs.sort_unstable();
        pairs.windows(2).all(|w| w[0] != w[1])
    }

    /// Degree of the face containing the corner `c(h)`.
    pub fn face_degrees(&self) -> Vec<usize> {
        let (fid, count) = self.face_ids();
        let mut deg = vec![0; count];
        for &f in &fid {
            deg[f as usize] += 1;
        }
        deg
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn loop_map() -> HalfEdgeMap {
        // one vertex with a loop: sigma = (0 1)
        HalfEdgeMap::new(vec![1, 0], vec![1, 0], 0).unwrap()
    }

    #[test]
    fn small_maps_satisfy_euler() {
        for m in [HalfEdgeMap::edge_map(), loop_map()] {
            let v = m.validate();
            assert!(v.is_planar_map(), "{}", v.describe());
        }
        let v = HalfEdgeMap::vertex_map().validate();
        assert_eq!((v.vertices, v.edges, v.faces), (1, 0, 1));
    }

    #[test]
    fn rejects_non_planar_rotation() {
        // K_{?}: one vertex with two loops interleaved gives genus 1
        let alpha = vec![2, 3, 0, 1];
        let sigma = vec![1, 2, 3, 0];
        let err = HalfEdgeMap::new(alpha, sigma, 0).unwrap_err();
        assert!(err.to_string().contains("V - E + F"));
    }

    #[test]
    fn rejects_bad_involution() {
        assert!(HalfEdgeMap::new(vec![0, 1], vec![0, 1], 0).is_err());
        assert!(HalfEdgeMap::new(vec![1, 0], vec![0, 0], 0).is_err());
    }

    #[test]
    fn canonical_form_forgets_labels() {
        let a = HalfEdgeMap::new(vec![1, 0, 3, 2], vec![2, 1, 0, 3], 0).unwrap();
        let b = a.relabel(&[3, 2, 1, 0]);
        assert!(a.isomorphic(&b));
        assert_eq!(a.canonical_code(), b.canonical_code());
        assert!(!a.isomorphic(&a.rerooted(1)) || a.canonical() == a.rerooted(1).canonical());
    }

    #[test]
    fn simplicity() {
        assert!(HalfEdgeMap::edge_map().is_simple());
        assert!(!loop_map().is_simple());
        // two parallel edges between two vertices
        let m = HalfEdgeMap::new(vec![1, 0, 3, 2], vec![2, 3, 0, 1], 0).unwrap();
        assert!(!m.is_simple());
    }
}
