use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A plane tree stored as its preorder outdegree sequence. In a block tree
/// every internal node has even outdegree `2k`, where `k` is the size of the
/// block it carries, and the tree has `2n` edges for a map of size `n`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct BlockTree {
    degrees: Vec<u32>,
}

/// Children of every node, as a flat adjacency array.
#[derive(Clone, Debug)]
pub struct Children {
    start: Vec<u32>,
    flat: Vec<u32>,
}

impl Children {
    pub fn of(&self, v: usize) -> &[u32] {
        &self.flat[self.start[v] as usize..self.start[v + 1] as usize]
    }
}

impl BlockTree {
    pub fn leaf() -> Self {
        BlockTree { degrees: vec![0] }
    }

    /// Accepts any valid preorder outdegree sequence (no parity check).
    pub fn from_degrees_any(degrees: Vec<u32>) -> Result<Self> {
        if degrees.is_empty() {
            return Err(Error::InvalidTree("empty sequence".into()));
        }
        let mut open: i64 = 1;
        for (i, &d) in degrees.iter().enumerate() {
            if open <= 0 {
                return Err(Error::InvalidTree(format!("sequence ends early at position {i}")));
            }
            open += d as i64 - 1;
        }
        if open != 0 {
            return Err(Error::InvalidTree(format!("{open} missing nodes")));
        }
        Ok(BlockTree { degrees })
    }

    /// Like [`from_degrees_any`](Self::from_degrees_any) but also requires
    /// even outdegrees, as in every block tree.
    pub fn from_degrees(degrees: Vec<u32>) -> Result<Self> {
        if let Some(d) = degrees.iter().find(|&&d| d % 2 == 1) {
            return Err(Error::InvalidTree(format!("odd outdegree {d}")));
        }
        Self::from_degrees_any(degrees)
    }

    pub(crate) fn from_degrees_unchecked(degrees: Vec<u32>) -> Self {
        BlockTree { degrees }
    }

    pub fn degrees(&self) -> &[u32] {
        &self.degrees
    }

    pub fn node_count(&self) -> usize {
        self.degrees.len()
    }

    pub fn edge_count(&self) -> usize {
        self.degrees.len() - 1
    }

    /// Size `n` of the decorated map: half the number of tree edges.
    pub fn map_size(&self) -> usize {
        self.edge_count() / 2
    }

    pub fn block_count(&self) -> usize {
        self.degrees.iter().filter(|&&d| d > 0).count()
    }

    /// Block sizes `k = degree / 2` of the internal nodes, in preorder.
    pub fn block_sizes(&self) -> Vec<u32> {
        self.degrees.iter().filter(|&&d| d > 0).map(|&d| d / 2).collect()
    }

    /// Indices of internal nodes in preorder.
    pub fn internal_nodes(&self) -> Vec<u32> {
        (0..self.degrees.len() as u32).filter(|&v| self.degrees[v as usize] > 0).collect()
    }

    /// The `j` largest block sizes, in decreasing order, padded with zeros.
    pub fn largest_blocks(&self, j: usize) -> Vec<u32> {
        let mut sizes = self.block_sizes();
        sizes.sort_unstable_by(|a, b| b.cmp(a));
        sizes.resize(j, 0);
        sizes
    }

    pub fn root_block_size(&self) -> u32 {
        self.degrees[0] / 2
    }

    pub fn children(&self) -> Children {
        let n = self.degrees.len();
        let mut start = Vec::with_capacity(n + 1);
        let mut acc = 0u32;
        for &d in &self.degrees {
            start.push(acc);
            acc += d;
        }
        start.push(acc);
        let mut flat = vec![0u32; acc as usize];
        let mut fill = start.clone();
        // stack of nodes still waiting for children
        let mut stack: Vec<u32> = Vec::new();
        if self.degrees[0] > 0 {
            stack.push(0);
        }
        for v in 1..n as u32 {
            let p = *stack.last().expect("valid preorder sequence") as usize;
            flat[fill[p] as usize] = v;
            fill[p] += 1;
            if fill[p] == start[p + 1] {
                stack.pop();
            }
            if self.degrees[v as usize] > 0 {
                stack.push(v);
            }
        }
        Children { start, flat }
    }

    /// Depth of each node; the root has depth 0.
    pub fn depths(&self) -> Vec<u32> {
        let n = self.degrees.len();
        let mut depth = vec![0u32; n];
        let mut stack: Vec<(u32, u32)> = Vec::new();
        if self.degrees[0] > 0 {
            stack.push((0, self.degrees[0]));
        }
        for v in 1..n {
            let top = stack.last_mut().expect("valid preorder sequence");
            depth[v] = depth[top.0 as usize] + 1;
            top.1 -= 1;
            if top.1 == 0 {
                stack.pop();
            }
            if self.degrees[v] > 0 {
                stack.push((v as u32, self.degrees[v]));
            }
        }
        depth
    }

    pub fn height(&self) -> u32 {
        self.depths().into_iter().max().unwrap_or(0)
    }

    /// Average depth over all nodes.
    pub fn mean_depth(&self) -> f64 {
        let d = self.depths();
        d.iter().map(|&x| x as f64).sum::<f64>() / d.len() as f64
    }
}

/// A block tree decorated by blocks. Leaves carry the vertex map and are not
/// stored; `blocks[i]` belongs to the `i`-th internal node in preorder.
#[derive(Clone, Debug)]
pub struct Decomposition<B> {
    pub tree: BlockTree,
    pub blocks: Vec<B>,
}

impl<B> Decomposition<B> {
    /// Preorder index of the node carrying `blocks[i]`.
    pub fn block_nodes(&self) -> Vec<u32> {
        self.tree.internal_nodes()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validates_sequences() {
        assert!(BlockTree::from_degrees(vec![2, 0, 0]).is_ok());
        assert!(BlockTree::from_degrees(vec![2, 0]).is_err());
        assert!(BlockTree::from_degrees(vec![0, 0]).is_err());
        assert!(BlockTree::from_degrees(vec![1, 0]).is_err());
        assert!(BlockTree::from_degrees_any(vec![1, 0]).is_ok());
    }

    #[test]
    fn children_and_depths() {
        let t = BlockTree::from_degrees(vec![2, 2, 0, 0, 0]).unwrap();
        let c = t.children();
        assert_eq!(c.of(0), &[1, 4]);
        assert_eq!(c.of(1), &[2, 3]);
        assert!(c.of(2).is_empty());
        assert_eq!(t.depths(), vec![0, 1, 2, 2, 1]);
        assert_eq!(t.height(), 2);
        assert_eq!(t.map_size(), 2);
        assert_eq!(t.largest_blocks(3), vec![1, 1, 0]);
    }
}
