//! Rebuilding a map or quadrangulation from its block tree and blocks.

use crate::error::{Error, Result};

use super::decompose::map_block_order;
use super::map::HalfEdgeMap;
use super::quad::Quadrangulation;
use super::tree::BlockTree;

struct Glue {
    alpha: Vec<u32>,
    sigma: Vec<u32>,
    sinv: Vec<u32>,
}

impl Glue {
    fn swap(&mut self, x: u32, y: u32) {
        let (x, y) = (x as usize, y as usize);
        self.sigma.swap(x, y);
        self.sinv[self.sigma[x] as usize] = x as u32;
        self.sinv[self.sigma[y] as usize] = y as u32;
    }
}

/// Concatenates the blocks into one array and returns the glue state, the
/// offset of each block and its attachment order in global labels.
fn concat<'a>(
    tree: &BlockTree,
    blocks: impl ExactSizeIterator<Item = (&'a HalfEdgeMap, Vec<u32>)>,
) -> Result<(Glue, Vec<u32>, Vec<Vec<u32>>)> {
    let internal = tree.internal_nodes();
    if blocks.len() != internal.len() {
        return Err(Error::InvalidTree(format!("{} blocks for {} internal nodes", blocks.len(), internal.len())));
    }
    let mut glue = Glue { alpha: Vec::new(), sigma: Vec::new(), sinv: Vec::new() };
    let mut roots = Vec::with_capacity(internal.len());
    let mut orders = Vec::with_capacity(internal.len());
    for ((b, order), &v) in blocks.zip(&internal) {
        let degree = tree.degrees()[v as usize];
        if order.len() as u32 != degree {
            return Err(Error::SizeMismatch { degree, found: order.len() as u32 / 2 });
        }
        let off = glue.alpha.len() as u32;
        glue.alpha.extend(b.alphas().iter().map(|&a| a + off));
        glue.sigma.extend(b.sigmas().iter().map(|&s| s + off));
        roots.push(b.root() + off);
        orders.push(order.into_iter().map(|h| h + off).collect());
    }
    glue.sinv = vec![0; glue.sigma.len()];
    for (h, &s) in glue.sigma.iter().enumerate() {
        glue.sinv[s as usize] = h as u32;
    }
    Ok((glue, roots, orders))
}

/// Children of each internal node, as indices into the block list.
fn block_children(tree: &BlockTree) -> Vec<Vec<Option<u32>>> {
    let children = tree.children();
    let mut index = vec![u32::MAX; tree.node_count()];
    let internal = tree.internal_nodes();
    for (i, &v) in internal.iter().enumerate() {
        index[v as usize] = i as u32;
    }
    internal
        .iter()
        .map(|&v| {
            children
                .of(v as usize)
                .iter()
                .map(|&c| (index[c as usize] != u32::MAX).then_some(index[c as usize]))
                .collect()
        })
        .collect()
}

/// Inverse of [`decompose_map`](super::decompose::decompose_map), up to
/// relabelling. Blocks must be 2-connected with the right sizes.
pub fn assemble_map(tree: &BlockTree, blocks: &[HalfEdgeMap]) -> Result<HalfEdgeMap> {
    if tree.node_count() == 1 {
        if !blocks.is_empty() {
            return Err(Error::InvalidTree("a leaf carries no block".into()));
        }
        return Ok(HalfEdgeMap::vertex_map());
    }
    let (mut glue, roots, orders) = concat(tree, blocks.iter().map(|b| (b, map_block_order(b))))?;
    let kids = block_children(tree);
    for i in (0..kids.len()).rev() {
        for (j, child) in kids[i].iter().enumerate() {
            if let Some(c) = *child {
                let e = orders[i][j];
                let last = glue.sinv[roots[c as usize] as usize];
                glue.swap(e, last);
            }
        }
    }
    Ok(HalfEdgeMap::from_raw(glue.alpha, glue.sigma, roots[0]))
}

/// Inverse of [`decompose_quad`](super::quad_decompose::decompose_quad).
pub fn assemble_quad(tree: &BlockTree, blocks: &[Quadrangulation]) -> Result<Quadrangulation> {
    if tree.node_count() == 1 {
        return Err(Error::VertexMap);
    }
    let (mut glue, roots, orders) = concat(tree, blocks.iter().map(|b| (b.map(), b.block_order())))?;
    let black: Vec<bool> = blocks.iter().flat_map(|b| b.colours().iter().copied()).collect();
    let kids = block_children(tree);
    for i in (0..kids.len()).rev() {
        for (j, child) in kids[i].iter().enumerate() {
            if let Some(c) = *child {
                let x = orders[i][j];
                let gb = glue.sinv[roots[c as usize] as usize];
                glue.swap(x, gb);
                let p = glue.sinv[glue.alpha[x as usize] as usize];
                let r = glue.sinv[glue.alpha[gb as usize] as usize];
                glue.swap(p, r);
            }
        }
    }
    let map = HalfEdgeMap::from_raw(glue.alpha, glue.sigma, roots[0]);
    Ok(Quadrangulation::from_parts(map, black))
}
