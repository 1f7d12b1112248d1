use std::collections::VecDeque;

use crate::error::{Error, Result};

use super::map::HalfEdgeMap;

/// A rooted quadrangulation with its black/white vertex colouring. The root
/// half-edge always leaves a black vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Quadrangulation {
    map: HalfEdgeMap,
    black: Vec<bool>,
}

/// Colours half-edges by the parity of the graph distance of their origin
/// from the root vertex. Fails if the map is not bipartite.
pub(crate) fn bicolour(map: &HalfEdgeMap) -> Option<Vec<bool>> {
    let n = map.half_edge_count();
    let (vid, vcount) = map.vertex_ids();
    let mut colour = vec![u8::MAX; vcount];
    let root_v = vid[map.root() as usize] as usize;
    colour[root_v] = 0;
    let mut queue = VecDeque::new();
    queue.push_back(map.root());
    let mut seen = vec![false; n];
    seen[map.root() as usize] = true;
    while let Some(h) = queue.pop_front() {
        let c = colour[vid[h as usize] as usize];
        let a = map.alpha(h);
        let w = vid[a as usize] as usize;
        if colour[w] == u8::MAX {
            colour[w] = 1 - c;
        } else if colour[w] == c {
            return None;
        }
        for next in [map.sigma(h), a] {
            if !seen[next as usize] {
                seen[next as usize] = true;
                queue.push_back(next);
            }
        }
    }
    Some((0..n).map(|h| colour[vid[h] as usize] == 0).collect())
}

impl Quadrangulation {
    /// Checks that every face has degree four and colours the vertices.
    pub fn from_map(map: HalfEdgeMap) -> Result<Self> {
        if map.is_vertex_map() {
            return Err(Error::NotQuadrangulation("no faces".into()));
        }
        if let Some(d) = map.face_degrees().into_iter().find(|&d| d != 4) {
            return Err(Error::NotQuadrangulation(format!("face of degree {d}")));
        }
        let black = bicolour(&map).ok_or_else(|| Error::NotQuadrangulation("not bipartite".into()))?;
        Ok(Quadrangulation { map, black })
    }

    pub(crate) fn from_parts(map: HalfEdgeMap, black: Vec<bool>) -> Self {
        debug_assert!(black[map.root() as usize]);
        Quadrangulation { map, black }
    }

    pub fn map(&self) -> &HalfEdgeMap {
        &self.map
    }

    pub fn into_map(self) -> HalfEdgeMap {
        self.map
    }

    /// Number of faces.
    pub fn size(&self) -> usize {
        self.map.size() / 2
    }

    pub fn is_black(&self, h: u32) -> bool {
        self.black[h as usize]
    }

    pub fn colours(&self) -> &[bool] {
        &self.black
    }

    /// Simple quadrangulations have no multiple edges (they never have loops).
    pub fn is_simple(&self) -> bool {
        self.map.is_simple()
    }

    pub fn canonical_code(&self) -> Vec<u32> {
        self.map.canonical_code()
    }

    pub fn isomorphic(&self, other: &Quadrangulation) -> bool {
        self.map.isomorphic(&other.map)
    }

    /// `tau = sigma alpha sigma alpha`, which moves a black half-edge to the
    /// next black half-edge around its face.
    pub fn tau(&self, h: u32) -> u32 {
        let m = &self.map;
        m.sigma(m.alpha(m.sigma(m.alpha(h))))
    }

    /// The black half-edges in the intrinsic order used to attach pendant
    /// blocks: a depth-first search from the root through `sigma` and `tau`.
    pub fn block_order(&self) -> Vec<u32> {
        block_order_by(self.map.half_edge_count(), self.map.root(), |h| self.map.sigma(h), |h| self.tau(h))
    }
}

/// Depth-first order from `root`, visiting `a(h)` before `b(h)`.
pub(crate) fn block_order_by(len: usize, root: u32, b: impl Fn(u32) -> u32, a: impl Fn(u32) -> u32) -> Vec<u32> {
    let mut seen = vec![false; len];
    let mut order = Vec::new();
    let mut stack = vec![root];
    while let Some(h) = stack.pop() {
        if std::mem::replace(&mut seen[h as usize], true) {
            continue;
        }
        order.push(h);
        stack.push(b(h));
        stack.push(a(h));
    }
    order
}
