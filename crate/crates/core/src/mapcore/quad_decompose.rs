//! Decomposition of a rooted quadrangulation into simple blocks, done on the
//! quadrangulation itself.
//!
//! Edges with the same pair of endpoints form a parallel class; each class
//! bounds a family of 2-cycles. Around the root, the faces reachable without
//! crossing such walls form the simple core. Every class touching the core
//! has two walls `g_a`, `g_b` facing it, and the part of the map between them
//! is cut off as a pendant by two rotation swaps (one at each endpoint).

use super::map::HalfEdgeMap;
use super::quad::Quadrangulation;
use super::tree::{BlockTree, Decomposition};

const NONE: u32 = u32::MAX;

struct Splitter<'a> {
    alpha: &'a [u32],
    black: &'a [bool],
    vid: Vec<u32>,
    sigma: Vec<u32>,
    sinv: Vec<u32>,
    stamp: Vec<u32>,
    clock: u32,
    face: Vec<u32>,
    wall: Vec<bool>,
    pend: Vec<u32>,
    label: Vec<u32>,
    class_of: Vec<u32>,
    next_w: Vec<u32>,
    prev_w: Vec<u32>,
}

/// One level of the decomposition: the core half-edges in attachment order
/// and, for each, the root of the pendant hanging there.
struct Level {
    order: Vec<u32>,
    pendants: Vec<u32>,
}

impl<'a> Splitter<'a> {
    fn new(q: &'a Quadrangulation) -> Self {
        let m = q.map();
        let len = m.half_edge_count();
        let (vid, _) = m.vertex_ids();
        Splitter {
            alpha: m.alphas(),
            black: q.colours(),
            vid,
            sigma: m.sigmas().to_vec(),
            sinv: m.sigma_inverse(),
            stamp: vec![0; len],
            clock: 0,
            face: vec![NONE; len],
            wall: vec![false; len],
            pend: vec![NONE; len],
            label: vec![0; len],
            class_of: vec![NONE; len],
            next_w: vec![NONE; len],
            prev_w: vec![NONE; len],
        }
    }

    fn tau(&self, h: u32) -> u32 {
        let s = &self.sigma;
        let a = self.alpha;
        s[a[s[a[h as usize] as usize] as usize] as usize]
    }

    fn swap(&mut self, x: u32, y: u32) {
        let (x, y) = (x as usize, y as usize);
        self.sigma.swap(x, y);
        self.sinv[self.sigma[x] as usize] = x as u32;
        self.sinv[self.sigma[y] as usize] = y as u32;
    }

    fn component(&mut self, root: u32) -> Vec<u32> {
        self.clock += 1;
        let c = self.clock;
        let mut comp = vec![root];
        self.stamp[root as usize] = c;
        let mut i = 0;
        while i < comp.len() {
            let h = comp[i];
            i += 1;
            for next in [self.sigma[h as usize], self.alpha[h as usize]] {
                if self.stamp[next as usize] != c {
                    self.stamp[next as usize] = c;
                    comp.push(next);
                }
            }
        }
        comp
    }

    fn level(&mut self, root: u32) -> Level {
        let comp = self.component(root);

        // faces of the corners c(h)
        for &h in &comp {
            self.face[h as usize] = NONE;
            self.wall[h as usize] = false;
        }
        let mut nf = 0u32;
        for &h in &comp {
            if self.face[h as usize] != NONE {
                continue;
            }
            let mut x = h;
            loop {
                self.face[x as usize] = nf;
                x = self.alpha[self.sigma[x as usize] as usize];
                if x == h {
                    break;
                }
            }
            nf += 1;
        }

        // parallel classes, keyed by original endpoints
        let mut keyed: Vec<(u32, u32, u32)> = comp
            .iter()
            .filter(|&&x| self.black[x as usize])
            .map(|&x| (self.vid[x as usize], self.vid[self.alpha[x as usize] as usize], x))
            .collect();
        keyed.sort_unstable();
        let mut classes: Vec<(usize, usize)> = Vec::new();
        let mut i = 0;
        while i < keyed.len() {
            let mut j = i + 1;
            while j < keyed.len() && keyed[j].0 == keyed[i].0 && keyed[j].1 == keyed[i].1 {
                j += 1;
            }
            if j - i >= 2 {
                for &(_, _, x) in &keyed[i..j] {
                    self.wall[x as usize] = true;
                    self.wall[self.alpha[x as usize] as usize] = true;
                }
                classes.push((i, j));
            }
            i = j;
        }

        // neighbouring walls of the same class around their black endpoint
        if !classes.is_empty() {
            let (class_of, next_w, prev_w) = (&mut self.class_of, &mut self.next_w, &mut self.prev_w);
            for (ci, &(i, j)) in classes.iter().enumerate() {
                for &(_, _, x) in &keyed[i..j] {
                    class_of[x as usize] = ci as u32;
                }
            }
            self.clock += 1;
            let c = self.clock;
            let mut first = vec![NONE; classes.len()];
            let mut last = vec![NONE; classes.len()];
            let mut touched = Vec::new();
            for &(i, j) in &classes {
                for &(_, _, x) in &keyed[i..j] {
                    if self.stamp[x as usize] == c {
                        continue;
                    }
                    let mut h = x;
                    loop {
                        self.stamp[h as usize] = c;
                        let ci = class_of[h as usize];
                        if ci != NONE {
                            let ci = ci as usize;
                            if first[ci] == NONE {
                                first[ci] = h;
                                touched.push(ci);
                            } else {
                                next_w[last[ci] as usize] = h;
                                prev_w[h as usize] = last[ci];
                            }
                            last[ci] = h;
                        }
                        h = self.sigma[h as usize];
                        if h == x {
                            break;
                        }
                    }
                    for ci in touched.drain(..) {
                        next_w[last[ci] as usize] = first[ci];
                        prev_w[first[ci] as usize] = last[ci];
                        first[ci] = NONE;
                        last[ci] = NONE;
                    }
                }
            }
            for &(_, _, x) in &keyed {
                class_of[x as usize] = NONE;
            }
        }

        // faces reachable from the root face, where crossing a parallel class
        // leads to the face on the far side of the whole class
        let mut in_core = vec![false; nf as usize];
        if !classes.is_empty() {
            let mut start = vec![0u32; nf as usize + 1];
            for &h in &comp {
                start[self.face[h as usize] as usize + 1] += 1;
            }
            for f in 0..nf as usize {
                start[f + 1] += start[f];
            }
            let mut fill = start.clone();
            let mut corners = vec![0u32; comp.len()];
            for &h in &comp {
                let f = self.face[h as usize] as usize;
                corners[fill[f] as usize] = h;
                fill[f] += 1;
            }
            let across_wall = |e: u32, f: u32| -> u32 {
                let x = if self.black[e as usize] { e } else { self.alpha[e as usize] };
                if self.face[x as usize] == f {
                    self.face[self.sinv[self.next_w[x as usize] as usize] as usize]
                } else {
                    self.face[self.prev_w[x as usize] as usize]
                }
            };
            let f0 = self.face[self.sinv[root as usize] as usize];
            in_core[f0 as usize] = true;
            let mut queue = vec![f0];
            while let Some(f) = queue.pop() {
                for &h in &corners[start[f as usize] as usize..start[f as usize + 1] as usize] {
                    let s = self.sigma[h as usize];
                    let g1 = if self.wall[h as usize] { across_wall(h, f) } else { self.face[self.sinv[h as usize] as usize] };
                    let g2 = if self.wall[s as usize] { across_wall(s, f) } else { self.face[s as usize] };
                    for g in [g1, g2] {
                        if !std::mem::replace(&mut in_core[g as usize], true) {
                            queue.push(g);
                        }
                    }
                }
            }
        } else {
            in_core.iter_mut().for_each(|f| *f = true);
        }

        // cut pendants off at the classes facing the core; all pairs are
        // found before the first swap changes the corners
        let mut pairs = Vec::new();
        for &(i, j) in &classes {
            let mut ga = NONE;
            let mut gb = NONE;
            for &(_, _, x) in &keyed[i..j] {
                if in_core[self.face[self.sinv[x as usize] as usize] as usize] {
                    ga = x;
                }
                if in_core[self.face[x as usize] as usize] {
                    gb = x;
                }
            }
            debug_assert!((ga == NONE) == (gb == NONE), "class touches the core on one side only");
            if ga != NONE && gb != NONE {
                pairs.push((ga, gb));
            }
        }
        for (ga, gb) in pairs {
            self.pend[ga as usize] = self.sigma[ga as usize];
            self.swap(ga, gb);
            let p = self.sinv[self.alpha[gb as usize] as usize];
            let r = self.sinv[self.alpha[ga as usize] as usize];
            self.swap(p, r);
        }

        // attachment order on the core
        self.clock += 1;
        let c = self.clock;
        let mut order = Vec::new();
        let mut stack = vec![root];
        while let Some(h) = stack.pop() {
            if self.stamp[h as usize] == c {
                continue;
            }
            self.stamp[h as usize] = c;
            order.push(h);
            stack.push(self.sigma[h as usize]);
            stack.push(self.tau(h));
        }
        let pendants = order.iter().map(|&x| std::mem::replace(&mut self.pend[x as usize], NONE)).collect();
        Level { order, pendants }
    }

    /// The core as a standalone quadrangulation: black half-edge `order[i]`
    /// becomes `2i` and its partner `2i + 1`.
    fn extract(&mut self, order: &[u32]) -> Quadrangulation {
        for (i, &x) in order.iter().enumerate() {
            self.label[x as usize] = 2 * i as u32;
            self.label[self.alpha[x as usize] as usize] = 2 * i as u32 + 1;
        }
        let mut alpha = vec![0u32; 2 * order.len()];
        let mut sigma = vec![0u32; 2 * order.len()];
        let mut black = vec![false; 2 * order.len()];
        for (i, &x) in order.iter().enumerate() {
            let w = self.alpha[x as usize];
            alpha[2 * i] = 2 * i as u32 + 1;
            alpha[2 * i + 1] = 2 * i as u32;
            sigma[2 * i] = self.label[self.sigma[x as usize] as usize];
            sigma[2 * i + 1] = self.label[self.sigma[w as usize] as usize];
            black[2 * i] = true;
        }
        Quadrangulation::from_parts(HalfEdgeMap::from_raw(alpha, sigma, 0), black)
    }
}

enum Item {
    Leaf,
    Block(u32),
}

fn walk(q: &Quadrangulation, mut on_leaf: impl FnMut(), mut on_block: impl FnMut(&mut Splitter, &Level) -> bool) {
    let mut sp = Splitter::new(q);
    let mut stack = vec![Item::Block(q.map().root())];
    while let Some(item) = stack.pop() {
        match item {
            Item::Leaf => on_leaf(),
            Item::Block(root) => {
                let level = sp.level(root);
                if !on_block(&mut sp, &level) {
                    return;
                }
                for &p in level.pendants.iter().rev() {
                    stack.push(if p == NONE { Item::Leaf } else { Item::Block(p) });
                }
            }
        }
    }
}

/// Splits `q` into its tree of simple blocks. Each block is relabelled so
/// that its attachment order is `0, 2, 4, ...`.
pub fn decompose_quad(q: &Quadrangulation) -> Decomposition<Quadrangulation> {
    let degrees = std::cell::RefCell::new(Vec::with_capacity(q.map().half_edge_count() / 2 + 1));
    let mut blocks = Vec::new();
    walk(q, || degrees.borrow_mut().push(0), |sp, level| {
        degrees.borrow_mut().push(level.order.len() as u32);
        blocks.push(sp.extract(&level.order));
        true
    });
    Decomposition { tree: BlockTree::from_degrees_unchecked(degrees.into_inner()), blocks }
}

pub fn quad_block_tree(q: &Quadrangulation) -> BlockTree {
    let degrees = std::cell::RefCell::new(Vec::new());
    walk(q, || degrees.borrow_mut().push(0), |_, level| {
        degrees.borrow_mut().push(level.order.len() as u32);
        true
    });
    BlockTree::from_degrees_unchecked(degrees.into_inner())
}
