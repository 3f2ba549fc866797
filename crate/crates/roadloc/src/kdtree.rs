//! Exact 3D k-d tree for nearest-neighbor queries.
//!
//! Small and exact by construction: splits on the widest axis at the median,
//! prunes with the usual hyperplane distance bound. Equivalence with a linear
//! scan is enforced by property tests.

#[derive(Debug, Clone)]
struct Node {
    axis: usize,
    split: f64,
    left: usize,
    right: usize,
    /// Leaf payload: indices into the point array. Empty for inner nodes.
    leaf: Vec<u32>,
}

const LEAF_SIZE: usize = 16;
const NO_CHILD: usize = usize::MAX;

#[derive(Debug, Clone)]
pub struct KdTree {
    points: Vec<[f64; 3]>,
    nodes: Vec<Node>,
    root: usize,
}

impl KdTree {
    pub fn build(points: Vec<[f64; 3]>) -> Self {
        let mut tree = Self {
            points,
            nodes: Vec::new(),
            root: NO_CHILD,
        };
        if !tree.points.is_empty() {
            let mut idx: Vec<u32> = (0..tree.points.len() as u32).collect();
            tree.root = tree.build_node(&mut idx);
        }
        tree
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    fn build_node(&mut self, idx: &mut [u32]) -> usize {
        if idx.len() <= LEAF_SIZE {
            self.nodes.push(Node {
                axis: 0,
                split: 0.0,
                left: NO_CHILD,
                right: NO_CHILD,
                leaf: idx.to_vec(),
            });
            return self.nodes.len() - 1;
        }
        // Widest-spread axis.
        let mut axis = 0;
        let mut best_spread = -1.0;
        for a in 0..3 {
            let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
            for &i in idx.iter() {
                let v = self.points[i as usize][a];
                lo = lo.min(v);
                hi = hi.max(v);
            }
            if hi - lo > best_spread {
                best_spread = hi - lo;
                axis = a;
            }
        }
        let mid = idx.len() / 2;
        let points = &self.points;
        idx.select_nth_unstable_by(mid, |&a, &b| {
            points[a as usize][axis]
                .partial_cmp(&points[b as usize][axis])
                .unwrap()
        });
        let split = self.points[idx[mid] as usize][axis];
        // mid >= 1 and mid < len here, so both halves are non-empty and the
        // recursion terminates even when all points coincide.
        let (lo_half, hi_half) = idx.split_at_mut(mid);
        let left = self.build_node(lo_half);
        let right = self.build_node(hi_half);
        self.nodes.push(Node {
            axis,
            split,
            left,
            right,
            leaf: Vec::new(),
        });
        self.nodes.len() - 1
    }

    /// Index and squared distance of the nearest point, or `None` when empty.
    pub fn nearest(&self, query: [f64; 3]) -> Option<(usize, f64)> {
        if self.is_empty() {
            return None;
        }
        let mut best = (usize::MAX, f64::INFINITY);
        self.search(self.root, query, &mut best);
        Some(best)
    }

    /// Squared distance to the nearest point; infinity when empty.
    pub fn nearest_dist2(&self, query: [f64; 3]) -> f64 {
        self.nearest(query).map_or(f64::INFINITY, |(_, d2)| d2)
    }

    fn search(&self, node: usize, query: [f64; 3], best: &mut (usize, f64)) {
        let n = &self.nodes[node];
        if n.left == NO_CHILD {
            for &i in &n.leaf {
                let p = self.points[i as usize];
                let d2 = (p[0] - query[0]).powi(2)
                    + (p[1] - query[1]).powi(2)
                    + (p[2] - query[2]).powi(2);
                if d2 < best.1 {
                    *best = (i as usize, d2);
                }
            }
            return;
        }
        let delta = query[n.axis] - n.split;
        let (near, far) = if delta < 0.0 {
            (n.left, n.right)
        } else {
            (n.right, n.left)
        };
        self.search(near, query, best);
        if delta * delta < best.1 {
            self.search(far, query, best);
        }
    }
}
