//! Finite subtrees of the Cayley tree Γ^k.
//!
//! The root has `k + 1` neighbours and every other interior vertex has
//! `k` children, matching the regular tree truncated at a given depth.
//! Vertices are indexed in breadth-first order (root = 0), which fixes
//! a deterministic layout for configurations and edge enumeration.

use serde::Serialize;

use crate::error::Error;
use crate::Result;

#[derive(Debug, Clone, Serialize)]
pub struct CayleySubtree {
    k: u32,
    depth: u32,
    /// Parent of each vertex; `None` for the root.
    parents: Vec<Option<usize>>,
    depths: Vec<u32>,
}

impl CayleySubtree {
    pub fn new(k: u32, depth: u32) -> Result<Self> {
        if k < 2 {
            return Err(Error::InvalidOrder(k));
        }
        if depth < 1 {
            return Err(Error::Parse("subtree depth must be at least 1".into()));
        }
        let mut parents = vec![None];
        let mut depths = vec![0u32];
        let mut level: Vec<usize> = vec![0];
        for d in 1..=depth {
            let mut next = Vec::new();
            for &v in &level {
                let fan = if v == 0 { k + 1 } else { k };
                for _ in 0..fan {
                    let id = parents.len();
                    parents.push(Some(v));
                    depths.push(d);
                    next.push(id);
                }
            }
            level = next;
        }
        Ok(CayleySubtree {
            k,
            depth,
            parents,
            depths,
        })
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    pub fn vertex_count(&self) -> usize {
        self.parents.len()
    }

    pub fn parent(&self, v: usize) -> Option<usize> {
        self.parents[v]
    }

    pub fn depth_of(&self, v: usize) -> u32 {
        self.depths[v]
    }

    /// Vertices of the depth-`d` sphere (the boundary ∂Λ).
    pub fn boundary(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.vertex_count()).filter(move |&v| self.depths[v] == self.depth)
    }

    /// Oriented edges `(parent, child)` in child order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (1..self.vertex_count()).map(move |v| (self.parents[v].unwrap(), v))
    }
}
