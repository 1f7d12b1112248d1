//! Decomposition of a rooted map into its 2-connected blocks.

use super::map::HalfEdgeMap;
use super::quad::block_order_by;
use super::tree::{BlockTree, Decomposition};

const NONE: u32 = u32::MAX;

/// Block id of every half-edge together with the rotation restricted to each
/// block (`sigma_b(h)` is the next half-edge of the same block around the
/// origin of `h`).
pub(crate) struct BlockSplit {
    pub block: Vec<u32>,
    pub sigma_b: Vec<u32>,
}

struct Frame {
    v: u32,
    parent_edge: u32,
    start: u32,
    next: u32,
}

pub(crate) fn split_blocks(m: &HalfEdgeMap) -> BlockSplit {
    let len = m.half_edge_count();
    let (vid, nv) = m.vertex_ids();
    let mut first = vec![NONE; nv];
    for h in 0..len {
        if first[vid[h] as usize] == NONE {
            first[vid[h] as usize] = h as u32;
        }
    }

    let mut block = vec![NONE; len];
    let mut nblocks = 0u32;
    let mut disc = vec![NONE; nv];
    let mut low = vec![0u32; nv];
    let mut estack: Vec<u32> = Vec::new();
    let mut frames: Vec<Frame> = Vec::new();

    let r = vid[m.root() as usize];
    disc[r as usize] = 0;
    low[r as usize] = 0;
    let mut clock = 1u32;
    frames.push(Frame { v: r, parent_edge: NONE, start: first[r as usize], next: first[r as usize] });

    while let Some(f) = frames.last_mut() {
        if f.next != NONE {
            let h = f.next;
            let s = m.sigma(h);
            f.next = if s == f.start { NONE } else { s };
            let v = f.v;
            let a = m.alpha(h);
            let w = vid[a as usize];
            let e = h.min(a);
            if w == v {
                if h < a {
                    block[h as usize] = nblocks;
                    block[a as usize] = nblocks;
                    nblocks += 1;
                }
                continue;
            }
            if e == f.parent_edge {
                continue;
            }
            if disc[w as usize] == NONE {
                estack.push(e);
                disc[w as usize] = clock;
                low[w as usize] = clock;
                clock += 1;
                let st = first[w as usize];
                frames.push(Frame { v: w, parent_edge: e, start: st, next: st });
            } else if disc[w as usize] < disc[v as usize] {
                estack.push(e);
                low[v as usize] = low[v as usize].min(disc[w as usize]);
            }
        } else {
            let done = frames.pop().unwrap();
            if let Some(p) = frames.last() {
                let (u, v) = (p.v as usize, done.v as usize);
                low[u] = low[u].min(low[v]);
                if low[v] >= disc[u] {
                    loop {
                        let e = estack.pop().expect("edge stack underflow");
                        block[e as usize] = nblocks;
                        block[m.alpha(e) as usize] = nblocks;
                        if e == done.parent_edge {
                            break;
                        }
                    }
                    nblocks += 1;
                }
            }
        }
    }
    debug_assert!(block.iter().all(|&b| b != NONE));

    // restricted rotations, one sweep per vertex
    let mut sigma_b = vec![NONE; len];
    let mut head = vec![NONE; nblocks as usize];
    let mut last = vec![NONE; nblocks as usize];
    let mut touched: Vec<u32> = Vec::new();
    for v in 0..nv {
        let start = first[v];
        let mut h = start;
        loop {
            let b = block[h as usize] as usize;
            if last[b] == NONE {
                head[b] = h;
                touched.push(b as u32);
            } else {
                sigma_b[last[b] as usize] = h;
            }
            last[b] = h;
            h = m.sigma(h);
            if h == start {
                break;
            }
        }
        for &b in &touched {
            sigma_b[last[b as usize] as usize] = head[b as usize];
            last[b as usize] = NONE;
        }
        touched.clear();
    }
    BlockSplit { block, sigma_b }
}

enum Item {
    Leaf,
    /// A pendant rooted at `root` whose rotation at the root vertex stops
    /// just before `stop`.
    Block { root: u32, stop: u32 },
}

/// Preorder walk over the block tree. `on_block(root, order)` receives the
/// block half-edges in attachment order and returns `false` to stop early.
fn walk(m: &HalfEdgeMap, split: &BlockSplit, mut on_leaf: impl FnMut(), mut on_block: impl FnMut(&[u32]) -> bool) {
    let len = m.half_edge_count();
    let mut seen = vec![false; len];
    let mut stack = vec![Item::Block { root: m.root(), stop: m.root() }];
    let mut order: Vec<u32> = Vec::new();
    let mut dfs: Vec<u32> = Vec::new();
    while let Some(item) = stack.pop() {
        let (root, stop) = match item {
            Item::Leaf => {
                on_leaf();
                continue;
            }
            Item::Block { root, stop } => (root, stop),
        };
        order.clear();
        dfs.clear();
        dfs.push(root);
        while let Some(h) = dfs.pop() {
            if std::mem::replace(&mut seen[h as usize], true) {
                continue;
            }
            order.push(h);
            dfs.push(split.sigma_b[h as usize]);
            dfs.push(m.alpha(h));
        }
        if !on_block(&order) {
            return;
        }
        // The corner c(e) runs from e to sigma_b(e), except the last corner
        // at the root vertex, which runs to the end of the enclosing pendant.
        for &e in order.iter().rev() {
            let next = split.sigma_b[e as usize];
            let end = if next == root { stop } else { next };
            let s = m.sigma(e);
            if s == end {
                stack.push(Item::Leaf);
            } else {
                stack.push(Item::Block { root: s, stop: end });
            }
        }
    }
}

/// The block `order` relabelled so that `order[i]` becomes half-edge `i`.
fn extract(m: &HalfEdgeMap, split: &BlockSplit, order: &[u32], label: &mut [u32]) -> HalfEdgeMap {
    for (i, &h) in order.iter().enumerate() {
        label[h as usize] = i as u32;
    }
    let alpha = order.iter().map(|&h| label[m.alpha(h) as usize]).collect();
    let sigma = order.iter().map(|&h| label[split.sigma_b[h as usize] as usize]).collect();
    HalfEdgeMap::from_raw(alpha, sigma, 0)
}

/// Block order of a standalone 2-connected map: children of the block in a
/// decomposition are attached at these half-edges, in this order.
pub fn map_block_order(b: &HalfEdgeMap) -> Vec<u32> {
    block_order_by(b.half_edge_count(), b.root(), |h| b.sigma(h), |h| b.alpha(h))
}

/// Splits `m` into its block tree and blocks. Each block comes back
/// relabelled so that its attachment order is `0, 1, 2, ...`.
pub fn decompose_map(m: &HalfEdgeMap) -> Decomposition<HalfEdgeMap> {
    if m.is_vertex_map() {
        return Decomposition { tree: BlockTree::leaf(), blocks: Vec::new() };
    }
    let split = split_blocks(m);
    let degrees = std::cell::RefCell::new(Vec::with_capacity(m.half_edge_count() + 1));
    let mut blocks = Vec::new();
    let mut label = vec![0u32; m.half_edge_count()];
    walk(m, &split, || degrees.borrow_mut().push(0), |order| {
        degrees.borrow_mut().push(order.len() as u32);
        blocks.push(extract(m, &split, order, &mut label));
        true
    });
    Decomposition { tree: BlockTree::from_degrees_unchecked(degrees.into_inner()), blocks }
}

/// Block tree only, without extracting blocks.
pub fn map_block_tree(m: &HalfEdgeMap) -> BlockTree {
    if m.is_vertex_map() {
        return BlockTree::leaf();
    }
    let split = split_blocks(m);
    let degrees = std::cell::RefCell::new(Vec::with_capacity(m.half_edge_count() + 1));
    walk(m, &split, || degrees.borrow_mut().push(0), |order| {
        degrees.borrow_mut().push(order.len() as u32);
        true
    });
    BlockTree::from_degrees_unchecked(degrees.into_inner())
}

/// The first block of size `k` in preorder, if any.
pub fn first_block_of_size(m: &HalfEdgeMap, k: usize) -> Option<HalfEdgeMap> {
    if m.is_vertex_map() {
        return None;
    }
    let split = split_blocks(m);
    let mut found = None;
    let mut label = vec![0u32; m.half_edge_count()];
    walk(m, &split, || {}, |order| {
        if order.len() == 2 * k {
            found = Some(extract(m, &split, order, &mut label));
            false
        } else {
            true
        }
    });
    found
}

/// True when `m` has a single block (the vertex map counts as 2-connected).
pub fn is_two_connected(m: &HalfEdgeMap) -> bool {
    if m.is_vertex_map() {
        return true;
    }
    let split = split_blocks(m);
    split.block.iter().all(|&b| b == split.block[0])
}
