//! Graph distances on maps.

use std::collections::VecDeque;

use rand::Rng;

use crate::error::{Error, Result};

use super::map::HalfEdgeMap;

/// Vertex adjacency of a map (multi-edges and loops kept).
pub struct Graph {
    /// Vertex of the origin of each half-edge.
    pub vid: Vec<u32>,
    start: Vec<u32>,
    adj: Vec<u32>,
}

impl Graph {
    pub fn new(m: &HalfEdgeMap) -> Self {
        let (vid, nv) = m.vertex_ids();
        let mut start = vec![0u32; nv + 1];
        for &v in &vid {
            start[v as usize + 1] += 1;
        }
        for v in 0..nv {
            start[v + 1] += start[v];
        }
        let mut fill = start.clone();
        let mut adj = vec![0u32; vid.len()];
        for h in 0..vid.len() {
            let v = vid[h] as usize;
            adj[fill[v] as usize] = vid[m.alpha(h as u32) as usize];
            fill[v] += 1;
        }
        Graph { vid, start, adj }
    }

    pub fn vertex_count(&self) -> usize {
        self.start.len() - 1
    }

    pub fn bfs(&self, source: u32) -> Vec<u32> {
        let mut dist = vec![u32::MAX; self.vertex_count()];
        let mut queue = VecDeque::new();
        dist[source as usize] = 0;
        queue.push_back(source);
        while let Some(v) = queue.pop_front() {
            let d = dist[v as usize] + 1;
            for &w in &self.adj[self.start[v as usize] as usize..self.start[v as usize + 1] as usize] {
                if dist[w as usize] == u32::MAX {
                    dist[w as usize] = d;
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    fn eccentricity(&self, source: u32) -> (u32, u32) {
        let d = self.bfs(source);
        let (far, &ecc) = d.iter().enumerate().max_by_key(|&(i, &x)| (x, std::cmp::Reverse(i))).unwrap();
        (far as u32, ecc)
    }
}

/// Distances from the root vertex to every vertex.
pub fn bfs_from_root(m: &HalfEdgeMap) -> Vec<u32> {
    if m.is_vertex_map() {
        return vec![0];
    }
    let g = Graph::new(m);
    g.bfs(g.vid[m.root() as usize])
}

/// Largest edge count for which [`diameter_exact`] runs all-pairs BFS.
pub const EXACT_DIAMETER_LIMIT: usize = 100_000;

pub fn diameter_exact(m: &HalfEdgeMap) -> Result<u32> {
    if m.size() > EXACT_DIAMETER_LIMIT {
        return Err(Error::TooLarge(m.size()));
    }
    if m.is_vertex_map() {
        return Ok(0);
    }
    let g = Graph::new(m);
    Ok((0..g.vertex_count() as u32).map(|v| g.eccentricity(v).1).max().unwrap_or(0))
}

/// Double-sweep lower bound: eccentricity of the vertex farthest from the
/// root vertex.
pub fn diameter_lower_bound(m: &HalfEdgeMap) -> u32 {
    if m.is_vertex_map() {
        return 0;
    }
    let g = Graph::new(m);
    let (far, _) = g.eccentricity(g.vid[m.root() as usize]);
    g.eccentricity(far).1
}

/// Distances from the root vertex to `reps` independent uniform vertices.
pub fn root_distances<R: Rng + ?Sized>(m: &HalfEdgeMap, reps: usize, rng: &mut R) -> Vec<u32> {
    let d = bfs_from_root(m);
    (0..reps).map(|_| d[rng.random_range(0..d.len())]).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn path_distances() {
        let m = HalfEdgeMap::new(vec![1, 0, 3, 2], vec![0, 2, 1, 3], 0).unwrap();
        let mut d = bfs_from_root(&m);
        d.sort();
        assert_eq!(d, vec![0, 1, 2]);
        assert_eq!(diameter_exact(&m).unwrap(), 2);
        assert_eq!(diameter_lower_bound(&m), 2);
    }

    #[test]
    fn vertex_map() {
        let m = HalfEdgeMap::vertex_map();
        assert_eq!(diameter_exact(&m).unwrap(), 0);
        assert_eq!(bfs_from_root(&m), vec![0]);
    }
}
