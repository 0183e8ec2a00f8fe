//! Trivalent trees with labeled leaves.
//!
//! A tree on `m` leaves is grown from the tripod on leaves `0, 1, 2` by
//! inserting leaf `k` into one of the `2k - 3` edges present at that point.
//! The insertion choices form a mixed-radix code, so the trees are indexed
//! by `0..(2m-5)!!` and any index decodes independently of the others.

use crate::lattice::{omega, Degree, LatticeVector};

/// `(2m - 5)!!`, the number of trivalent trees with `m ≥ 3` labeled leaves.
pub fn tree_count(m: usize) -> u64 {
    assert!(m >= 3, "trees need at least 3 leaves");
    (3..m).map(|k| (2 * k - 3) as u64).product()
}

/// Leaves are `0..m`, internal vertices `m..2m-2`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TreeTopology {
    leaves: usize,
    edges: Vec<(usize, usize)>,
}

impl TreeTopology {
    /// Decodes tree number `index` of [`tree_count`]`(m)`.
    pub fn from_index(m: usize, mut index: u64) -> Self {
        assert!(index < tree_count(m), "tree index out of range");
        let hub = m;
        let mut edges = vec![(0, hub), (1, hub), (2, hub)];
        for k in 3..m {
            let radix = (2 * k - 3) as u64;
            let choice = (index % radix) as usize;
            index /= radix;
            let fresh = m + k - 2;
            let (a, b) = edges[choice];
            edges[choice] = (a, fresh);
            edges.push((fresh, b));
            edges.push((k, fresh));
        }
        TreeTopology { leaves: m, edges }
    }

    pub fn leaves(&self) -> usize {
        self.leaves
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn vertex_count(&self) -> usize {
        2 * self.leaves - 2
    }

    /// The `m - 3` edges joining two internal vertices.
    pub fn bounded_edge_count(&self) -> usize {
        self.edges
            .iter()
            .filter(|&&(a, b)| a >= self.leaves && b >= self.leaves)
            .count()
    }

    /// Canonical form: each edge ordered, edge list sorted.
    pub fn normalized_edges(&self) -> Vec<(usize, usize)> {
        let mut e: Vec<_> = self
            .edges
            .iter()
            .map(|&(a, b)| (a.min(b), a.max(b)))
            .collect();
        e.sort_unstable();
        e
    }

    /// Leaf-label bipartitions induced by the bounded edges; two labeled
    /// trees are equal iff these sets agree.
    pub fn splits(&self) -> Vec<Vec<bool>> {
        let tree = RootedTree::new(self);
        let mut out: Vec<Vec<bool>> = tree
            .order
            .iter()
            .filter(|&&v| v >= self.leaves && v != tree.root)
            .map(|&v| {
                let mut side = vec![false; self.leaves];
                tree.mark_leaves(v, &mut side);
                // orient so leaf 0 is on the false side
                if side[0] {
                    side.iter_mut().for_each(|s| *s = !*s);
                }
                side
            })
            .collect();
        out.sort();
        out
    }
}

/// Iterates every trivalent tree with `m` labeled leaves exactly once.
pub fn enumerate_trees(m: usize) -> impl Iterator<Item = TreeTopology> {
    (0..tree_count(m)).map(move |i| TreeTopology::from_index(m, i))
}

/// A topology rooted at the internal vertex next to leaf 0.
#[derive(Debug, Clone)]
pub(crate) struct RootedTree {
    pub leaves: usize,
    pub root: usize,
    pub parent: Vec<usize>,
    pub children: Vec<Vec<usize>>,
    /// Vertices in breadth-first order from the root.
    pub order: Vec<usize>,
}

impl RootedTree {
    pub fn new(t: &TreeTopology) -> Self {
        let n = t.vertex_count();
        let mut adj = vec![Vec::with_capacity(3); n];
        for &(a, b) in &t.edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        let root = adj[0][0];
        let mut parent = vec![usize::MAX; n];
        let mut children = vec![Vec::new(); n];
        let mut order = Vec::with_capacity(n);
        parent[root] = root;
        order.push(root);
        let mut head = 0;
        while head < order.len() {
            let x = order[head];
            head += 1;
            for &y in &adj[x] {
                if parent[y] == usize::MAX {
                    parent[y] = x;
                    children[x].push(y);
                    order.push(y);
                }
            }
        }
        RootedTree {
            leaves: t.leaves,
            root,
            parent,
            children,
            order,
        }
    }

    fn mark_leaves(&self, v: usize, side: &mut [bool]) {
        if v < self.leaves {
            side[v] = true;
        }
        for &c in &self.children[v] {
            self.mark_leaves(c, side);
        }
    }
}

/// A topology with leaf `j` carrying the `j`-th vector of a degree and every
/// edge carrying its slope.
#[derive(Debug, Clone)]
pub struct CombinatorialTree {
    topology: TreeTopology,
    pub(crate) rooted: RootedTree,
    /// `slope[v]`: slope of the edge from `parent(v)` to `v`, pointing away
    /// from the root; it is the sum of the end vectors below `v`.
    pub(crate) slope: Vec<LatticeVector>,
    ends: Vec<LatticeVector>,
}

impl CombinatorialTree {
    pub fn new(topology: TreeTopology, degree: &Degree) -> Self {
        assert_eq!(topology.leaves(), degree.len(), "one leaf per end");
        let rooted = RootedTree::new(&topology);
        let ends = degree.vectors().to_vec();
        let mut slope = vec![LatticeVector::ZERO; topology.vertex_count()];
        for &v in rooted.order.iter().rev() {
            slope[v] = if v < rooted.leaves {
                ends[v]
            } else {
                rooted.children[v].iter().map(|&c| slope[c]).sum()
            };
        }
        CombinatorialTree {
            topology,
            rooted,
            slope,
            ends,
        }
    }

    pub fn topology(&self) -> &TreeTopology {
        &self.topology
    }

    pub fn ends(&self) -> &[LatticeVector] {
        &self.ends
    }

    pub fn root(&self) -> usize {
        self.rooted.root
    }

    /// Internal vertices other than the root, in breadth-first order. Each
    /// owns the bounded edge to its parent.
    pub fn bounded_edges(&self) -> Vec<usize> {
        self.rooted
            .order
            .iter()
            .copied()
            .filter(|&v| v >= self.rooted.leaves && v != self.rooted.root)
            .collect()
    }

    pub fn internal_vertices(&self) -> impl Iterator<Item = usize> + '_ {
        self.rooted
            .order
            .iter()
            .copied()
            .filter(|&v| v >= self.rooted.leaves)
    }

    pub fn parent(&self, v: usize) -> usize {
        self.rooted.parent[v]
    }

    /// Outgoing slopes at an internal vertex, one per incident edge.
    pub fn outgoing_slopes(&self, v: usize) -> Vec<LatticeVector> {
        let mut out: Vec<LatticeVector> = self.rooted.children[v]
            .iter()
            .map(|&c| self.slope[c])
            .collect();
        if v != self.rooted.root {
            out.push(-self.slope[v]);
        }
        out
    }

    /// `|ω(u, v)|` for two outgoing slopes at internal vertex `v`.
    pub fn vertex_multiplicity(&self, v: usize) -> i64 {
        let s = self.outgoing_slopes(v);
        omega(s[0], s[1]).abs()
    }

    pub fn has_zero_slope(&self) -> bool {
        self.bounded_edges()
            .iter()
            .any(|&v| self.slope[v].is_zero())
    }

    pub fn is_balanced(&self) -> bool {
        self.internal_vertices().all(|v| {
            self.outgoing_slopes(v)
                .into_iter()
                .sum::<LatticeVector>()
                .is_zero()
        })
    }
}
