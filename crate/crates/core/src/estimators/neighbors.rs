//! Chebyshev-norm neighbour queries over a fixed sample set.
//!
//! Every query is made on behalf of one of the indexed samples and never
//! counts that sample as its own neighbour.

use ndarray::Array2;

const BRUTE_FORCE_BELOW: usize = 64;
const LEAF_SIZE: usize = 16;

/// Whether a radius query includes points exactly on the boundary.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Boundary {
    /// `distance < radius`
    Strict,
    /// `distance <= radius`
    Inclusive,
}

impl Boundary {
    #[inline]
    fn admits(self, distance: f64, radius: f64) -> bool {
        match self {
            Boundary::Strict => distance < radius,
            Boundary::Inclusive => distance <= radius,
        }
    }
}

/// Immutable spatial index; safe to query from many threads.
#[derive(Debug, Clone)]
pub struct NeighborIndex {
    n: usize,
    d: usize,
    points: Vec<f64>,
    tree: Option<KdTree>,
}

#[derive(Debug, Clone)]
struct KdTree {
    order: Vec<usize>,
    nodes: Vec<Node>,
    // per node: d lower bounds followed by d upper bounds
    bounds: Vec<f64>,
}

/// Covers `order[start..end]`; interior nodes also carry their split.
#[derive(Debug, Clone, Copy)]
struct Node {
    start: usize,
    end: usize,
    split: Option<Split>,
}

#[derive(Debug, Clone, Copy)]
struct Split {
    dim: usize,
    value: f64,
    left: usize,
    right: usize,
}

#[inline]
fn chebyshev(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).fold(0.0, |m, (x, y)| m.max((x - y).abs()))
}

impl NeighborIndex {
    pub fn new(samples: &Array2<f64>) -> Self {
        let (n, d) = samples.dim();
        let points: Vec<f64> = samples.iter().copied().collect();
        let tree = (n >= BRUTE_FORCE_BELOW && d > 0).then(|| KdTree::build(&points, n, d));
        Self { n, d, points, tree }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    #[inline]
    fn point(&self, i: usize) -> &[f64] {
        &self.points[i * self.d..(i + 1) * self.d]
    }

    /// Distance from sample `i` to its `k`-th nearest other sample.
    ///
    /// Panics if `k` is zero or not smaller than the number of samples.
    pub fn kth_neighbor_distance(&self, i: usize, k: usize) -> f64 {
        assert!(k >= 1 && k < self.n, "k = {k} outside 1..{}", self.n);
        let mut best = KBest::new(k);
        let q = self.point(i);
        match &self.tree {
            Some(tree) => tree.knn(self, 0, q, i, &mut best),
            None => {
                for j in (0..self.n).filter(|&j| j != i) {
                    best.offer(chebyshev(q, self.point(j)));
                }
            }
        }
        best.worst()
    }

    /// Number of other samples within `radius` of sample `i`.
    pub fn count_within(&self, i: usize, radius: f64, boundary: Boundary) -> usize {
        let q = self.point(i);
        let total = match &self.tree {
            Some(tree) => tree.count(self, 0, q, radius, boundary),
            None => (0..self.n)
                .filter(|&j| boundary.admits(chebyshev(q, self.point(j)), radius))
                .count(),
        };
        // the query point sits at distance zero from itself
        total - usize::from(boundary.admits(0.0, radius))
    }
}

/// The k smallest distances seen so far, ascending.
struct KBest {
    k: usize,
    dist: Vec<f64>,
}

impl KBest {
    fn new(k: usize) -> Self {
        Self {
            k,
            dist: Vec::with_capacity(k + 1),
        }
    }

    #[inline]
    fn worst(&self) -> f64 {
        if self.dist.len() < self.k {
            f64::INFINITY
        } else {
            self.dist[self.k - 1]
        }
    }

    #[inline]
    fn offer(&mut self, d: f64) {
        if d >= self.worst() {
            return;
        }
        let pos = self.dist.partition_point(|&x| x <= d);
        self.dist.insert(pos, d);
        self.dist.truncate(self.k);
    }
}

impl KdTree {
    fn build(points: &[f64], n: usize, d: usize) -> Self {
        let mut tree = Self {
            order: (0..n).collect(),
            nodes: Vec::with_capacity(2 * n / LEAF_SIZE + 1),
            bounds: Vec::new(),
        };
        tree.build_node(points, d, 0, n);
        tree
    }

    fn build_node(&mut self, points: &[f64], d: usize, start: usize, end: usize) -> usize {
        let id = self.nodes.len();
        self.nodes.push(Node {
            start,
            end,
            split: None,
        });
        let mut lo = vec![f64::INFINITY; d];
        let mut hi = vec![f64::NEG_INFINITY; d];
        for &p in &self.order[start..end] {
            for c in 0..d {
                let v = points[p * d + c];
                lo[c] = lo[c].min(v);
                hi[c] = hi[c].max(v);
            }
        }
        self.bounds.extend_from_slice(&lo);
        self.bounds.extend_from_slice(&hi);

        let (dim, spread) = (0..d)
            .map(|c| (c, hi[c] - lo[c]))
            .fold((0, -1.0), |acc, cur| if cur.1 > acc.1 { cur } else { acc });
        if end - start <= LEAF_SIZE || spread <= 0.0 {
            return id;
        }
        let mid = start + (end - start) / 2;
        self.order[start..end].select_nth_unstable_by(mid - start, |&a, &b| {
            points[a * d + dim].total_cmp(&points[b * d + dim])
        });
        let value = points[self.order[mid] * d + dim];
        let left = self.build_node(points, d, start, mid);
        let right = self.build_node(points, d, mid, end);
        self.nodes[id].split = Some(Split {
            dim,
            value,
            left,
            right,
        });
        id
    }

    #[inline]
    fn node_bounds(&self, node: usize, d: usize) -> (&[f64], &[f64]) {
        let b = &self.bounds[node * 2 * d..(node + 1) * 2 * d];
        b.split_at(d)
    }

    /// Smallest and largest Chebyshev distance from `q` to the node's box.
    #[inline]
    fn box_distances(&self, node: usize, d: usize, q: &[f64]) -> (f64, f64) {
        let (lo, hi) = self.node_bounds(node, d);
        let mut near = 0.0f64;
        let mut far = 0.0f64;
        for c in 0..d {
            let below = lo[c] - q[c];
            let above = q[c] - hi[c];
            near = near.max(below).max(above);
            far = far.max((q[c] - lo[c]).abs()).max((hi[c] - q[c]).abs());
        }
        (near, far)
    }

    fn knn(&self, index: &NeighborIndex, node: usize, q: &[f64], skip: usize, best: &mut KBest) {
        let Node { start, end, split } = self.nodes[node];
        match split {
            None => {
                for &j in &self.order[start..end] {
                    if j != skip {
                        best.offer(chebyshev(q, index.point(j)));
                    }
                }
            }
            Some(Split {
                dim,
                value,
                left,
                right,
            }) => {
                let (first, second) = if q[dim] < value {
                    (left, right)
                } else {
                    (right, left)
                };
                for child in [first, second] {
                    let (near, _) = self.box_distances(child, index.d, q);
                    if near < best.worst() {
                        self.knn(index, child, q, skip, best);
                    }
                }
            }
        }
    }

    fn count(&self, index: &NeighborIndex, node: usize, q: &[f64], r: f64, b: Boundary) -> usize {
        let (near, far) = self.box_distances(node, index.d, q);
        if !b.admits(near, r) {
            return 0;
        }
        let Node { start, end, split } = self.nodes[node];
        if b.admits(far, r) {
            return end - start;
        }
        match split {
            Some(Split { left, right, .. }) => {
                self.count(index, left, q, r, b) + self.count(index, right, q, r, b)
            }
            None => self.order[start..end]
                .iter()
                .filter(|&&j| b.admits(chebyshev(q, index.point(j)), r))
                .count(),
        }
    }
}
