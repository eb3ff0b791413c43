//! Static 3-d tree for exact nearest-neighbor queries.

use crate::geom::Vec3;

const LEAF_SIZE: usize = 8;

#[derive(Debug)]
enum Node {
    Leaf { start: usize, end: usize },
    Split { axis: usize, value: f64, left: usize, right: usize },
}

#[derive(Debug)]
pub struct KdTree {
    points: Vec<Vec3>,
    nodes: Vec<Node>,
}

impl KdTree {
    pub fn build(points: &[Vec3]) -> Self {
        let mut tree = KdTree {
            points: points.to_vec(),
            nodes: Vec::new(),
        };
        if !tree.points.is_empty() {
            let n = tree.points.len();
            tree.build_node(0, n);
        }
        tree
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    fn build_node(&mut self, start: usize, end: usize) -> usize {
        let id = self.nodes.len();
        if end - start <= LEAF_SIZE {
            self.nodes.push(Node::Leaf { start, end });
            return id;
        }
        let slice = &mut self.points[start..end];
        let mut lo = [f64::INFINITY; 3];
        let mut hi = [f64::NEG_INFINITY; 3];
        for p in slice.iter() {
            for k in 0..3 {
                lo[k] = lo[k].min(p[k]);
                hi[k] = hi[k].max(p[k]);
            }
        }
        let axis = (0..3)
            .max_by(|&a, &b| (hi[a] - lo[a]).total_cmp(&(hi[b] - lo[b])))
            .unwrap_or(0);
        if hi[axis] == lo[axis] {
            // All points coincide.
            self.nodes.push(Node::Leaf { start, end });
            return id;
        }
        let mid = slice.len() / 2;
        slice.select_nth_unstable_by(mid, |a, b| a[axis].total_cmp(&b[axis]));
        let value = slice[mid][axis];
        // Placeholder, patched once the children exist.
        self.nodes.push(Node::Leaf { start, end });
        let left = self.build_node(start, start + mid);
        let right = self.build_node(start + mid, end);
        self.nodes[id] = Node::Split { axis, value, left, right };
        id
    }

    /// Squared distance from `q` to its nearest stored point.
    ///
    /// Uses the same arithmetic as a linear scan, so results are bitwise
    /// equal to `min_p |q - p|²`.
    pub fn nearest_dist2(&self, q: Vec3) -> f64 {
        let mut best = f64::INFINITY;
        if !self.nodes.is_empty() {
            self.search(0, q, &mut best);
        }
        best
    }

    fn search(&self, node: usize, q: Vec3, best: &mut f64) {
        match self.nodes[node] {
            Node::Leaf { start, end } => {
                for p in &self.points[start..end] {
                    let dx = q[0] - p[0];
                    let dy = q[1] - p[1];
                    let dz = q[2] - p[2];
                    let d = dx * dx + dy * dy + dz * dz;
                    if d < *best {
                        *best = d;
                    }
                }
            }
            Node::Split { axis, value, left, right } => {
                // Points left of the split have coordinate <= value, right >= value.
                let diff = q[axis] - value;
                let (near, far) = if diff < 0.0 { (left, right) } else { (right, left) };
                self.search(near, q, best);
                if diff * diff <= *best {
                    self.search(far, q, best);
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{RngExt, SeedableRng};

    #[test]
    fn matches_linear_scan() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for n in [1usize, 2, 9, 100, 700] {
            let pts: Vec<Vec3> = (0..n).map(|_| [rng.random(), rng.random(), rng.random()]).collect();
            let tree = KdTree::build(&pts);
            for _ in 0..50 {
                let q: Vec3 = [rng.random::<f64>() * 1.5, rng.random(), rng.random::<f64>() - 0.2];
                let brute = pts
                    .iter()
                    .map(|p| {
                        let (dx, dy, dz) = (q[0] - p[0], q[1] - p[1], q[2] - p[2]);
                        dx * dx + dy * dy + dz * dz
                    })
                    .fold(f64::INFINITY, f64::min);
                assert_eq!(tree.nearest_dist2(q), brute);
            }
        }
    }

    #[test]
    fn duplicate_points() {
        let pts = vec![[0.5; 3]; 40];
        let tree = KdTree::build(&pts);
        assert_eq!(tree.nearest_dist2([0.5; 3]), 0.0);
    }
}
