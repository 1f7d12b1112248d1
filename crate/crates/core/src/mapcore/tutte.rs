//! Tutte's angular bijection between rooted maps with `n` edges and rooted
//! quadrangulations with `n` faces.

use crate::error::{Error, Result};

use super::map::HalfEdgeMap;
use super::quad::Quadrangulation;

/// Vertices of `m` become black, faces become white, and each corner `c(h)`
/// becomes the edge `{2h, 2h + 1}` (black half-edge `2h`).
pub fn tutte(m: &HalfEdgeMap) -> Result<Quadrangulation> {
    if m.is_vertex_map() {
        return Err(Error::VertexMap);
    }
    let n = m.half_edge_count();
    let sinv = m.sigma_inverse();
    let mut alpha = vec![0u32; 2 * n];
    let mut sigma = vec![0u32; 2 * n];
    let mut black = vec![false; 2 * n];
    for h in 0..n {
        let (b, w) = (2 * h, 2 * h + 1);
        alpha[b] = w as u32;
        alpha[w] = b as u32;
        sigma[b] = 2 * m.sigma(h as u32);
        sigma[w] = 2 * sinv[m.alpha(h as u32) as usize] + 1;
        black[b] = true;
    }
    Ok(Quadrangulation::from_parts(HalfEdgeMap::from_raw(alpha, sigma, 2 * m.root()), black))
}

/// Inverse of [`tutte`]: the black vertices with one edge per face.
pub fn tutte_inverse(q: &Quadrangulation) -> HalfEdgeMap {
    let qm = q.map();
    let len = qm.half_edge_count();
    let mut index = vec![u32::MAX; len];
    let mut blacks = Vec::with_capacity(len / 2);
    for h in 0..len as u32 {
        if q.is_black(h) {
            index[h as usize] = blacks.len() as u32;
            blacks.push(h);
        }
    }
    let mut alpha = Vec::with_capacity(blacks.len());
    let mut sigma = Vec::with_capacity(blacks.len());
    for &x in &blacks {
        sigma.push(index[qm.sigma(x) as usize]);
        let across = qm.sigma(qm.alpha(qm.sigma(qm.alpha(x))));
        alpha.push(index[across as usize]);
    }
    HalfEdgeMap::from_raw(alpha, sigma, index[qm.root() as usize])
}
