//! Sup-norm kd-tree over `f64` points, each carrying an integer height.
//!
//! Every node keeps its bounding box and the minimum height below it, so a
//! query can prune on distance and on height at the same time.

const LEAF_SIZE: usize = 16;

#[derive(Clone, Debug)]
struct Node {
    start: usize,
    end: usize,
    /// Child node indices, `None` for leaves.
    children: Option<(usize, usize)>,
    min_height: u64,
}

#[derive(Clone, Debug)]
pub struct KdTree {
    dim: usize,
    /// Row-major coordinates, permuted into tree order.
    coords: Vec<f64>,
    heights: Vec<u64>,
    /// Tree position -> original point index.
    ids: Vec<usize>,
    nodes: Vec<Node>,
    /// `2 * dim` floats per node: mins then maxes.
    boxes: Vec<f64>,
}

impl KdTree {
    pub fn build(dim: usize, coords: &[f64], heights: &[u64]) -> Self {
        assert!(dim > 0);
        assert_eq!(coords.len(), dim * heights.len());
        let n = heights.len();
        let mut ids: Vec<usize> = (0..n).collect();
        let mut tree = KdTree {
            dim,
            coords: Vec::new(),
            heights: Vec::new(),
            ids: Vec::new(),
            nodes: Vec::new(),
            boxes: Vec::new(),
        };
        if n > 0 {
            tree.build_node(coords, heights, &mut ids, 0, n);
        }
        tree.coords = ids
            .iter()
            .flat_map(|&i| coords[i * dim..(i + 1) * dim].iter().copied())
            .collect();
        tree.heights = ids.iter().map(|&i| heights[i]).collect();
        tree.ids = ids;
        tree
    }

    fn build_node(&mut self, coords: &[f64], heights: &[u64], ids: &mut [usize], start: usize, end: usize) -> usize {
        let dim = self.dim;
        let mut lo = vec![f64::INFINITY; dim];
        let mut hi = vec![f64::NEG_INFINITY; dim];
        let mut min_height = u64::MAX;
        for &i in &ids[start..end] {
            for d in 0..dim {
                let v = coords[i * dim + d];
                lo[d] = lo[d].min(v);
                hi[d] = hi[d].max(v);
            }
            min_height = min_height.min(heights[i]);
        }
        let index = self.nodes.len();
        self.nodes.push(Node {
            start,
            end,
            children: None,
            min_height,
        });
        self.boxes.extend_from_slice(&lo);
        self.boxes.extend_from_slice(&hi);

        if end - start > LEAF_SIZE {
            let split_dim = (0..dim)
                .max_by(|&a, &b| (hi[a] - lo[a]).total_cmp(&(hi[b] - lo[b])))
                .unwrap();
            let mid = start + (end - start) / 2;
            ids[start..end].select_nth_unstable_by(mid - start, |&a, &b| {
                coords[a * dim + split_dim].total_cmp(&coords[b * dim + split_dim])
            });
            let left = self.build_node(coords, heights, ids, start, mid);
            let right = self.build_node(coords, heights, ids, mid, end);
            self.nodes[index].children = Some((left, right));
        }
        index
    }

    pub fn len(&self) -> usize {
        self.heights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.heights.is_empty()
    }

    fn box_distance(&self, node: usize, x: &[f64]) -> f64 {
        let b = &self.boxes[node * 2 * self.dim..(node + 1) * 2 * self.dim];
        let (lo, hi) = b.split_at(self.dim);
        let mut d = 0.0f64;
        for i in 0..self.dim {
            d = d.max(lo[i] - x[i]).max(x[i] - hi[i]);
        }
        d
    }

    fn point_distance(&self, pos: usize, x: &[f64]) -> f64 {
        let p = &self.coords[pos * self.dim..(pos + 1) * self.dim];
        p.iter().zip(x).fold(0.0f64, |d, (a, b)| d.max((a - b).abs()))
    }

    /// Smallest height among points accepted by `accept`, visiting only
    /// points whose `f64` distance is at most `radius`. `accept` gets the
    /// original index and the `f64` distance and makes the final call.
    pub fn min_height_within(
        &self,
        x: &[f64],
        radius: f64,
        mut accept: impl FnMut(usize, f64) -> bool,
    ) -> Option<(u64, usize)> {
        let mut best: Option<(u64, usize)> = None;
        if self.nodes.is_empty() {
            return None;
        }
        let mut stack = vec![0usize];
        while let Some(node) = stack.pop() {
            let n = &self.nodes[node];
            if best.is_some_and(|(h, _)| n.min_height >= h) || self.box_distance(node, x) > radius {
                continue;
            }
            match n.children {
                Some((l, r)) => {
                    // visit the child with the smaller minimum height first
                    if self.nodes[l].min_height <= self.nodes[r].min_height {
                        stack.push(r);
                        stack.push(l);
                    } else {
                        stack.push(l);
                        stack.push(r);
                    }
                }
                None => {
                    for pos in n.start..n.end {
                        let h = self.heights[pos];
                        if best.is_some_and(|(b, _)| h >= b) {
                            continue;
                        }
                        let d = self.point_distance(pos, x);
                        if d <= radius && accept(self.ids[pos], d) {
                            best = Some((h, self.ids[pos]));
                        }
                    }
                }
            }
        }
        best
    }

    /// Nearest point (sup norm) among those with height at most `cap`.
    pub fn nearest_under_cap(&self, x: &[f64], cap: u64) -> Option<(usize, f64)> {
        let mut best: Option<(usize, f64)> = None;
        if self.nodes.is_empty() {
            return None;
        }
        let mut stack = vec![0usize];
        while let Some(node) = stack.pop() {
            let n = &self.nodes[node];
            if n.min_height > cap || best.is_some_and(|(_, d)| self.box_distance(node, x) >= d) {
                continue;
            }
            match n.children {
                Some((l, r)) => {
                    let (dl, dr) = (self.box_distance(l, x), self.box_distance(r, x));
                    if dl <= dr {
                        stack.push(r);
                        stack.push(l);
                    } else {
                        stack.push(l);
                        stack.push(r);
                    }
                }
                None => {
                    for pos in n.start..n.end {
                        if self.heights[pos] > cap {
                            continue;
                        }
                        let d = self.point_distance(pos, x);
                        if best.is_none_or(|(_, b)| d < b) {
                            best = Some((self.ids[pos], d));
                        }
                    }
                }
            }
        }
        best
    }

    /// Original indices of every point within `radius` (f64 distance).
    pub fn within(&self, x: &[f64], radius: f64) -> Vec<usize> {
        let mut out = Vec::new();
        if self.nodes.is_empty() {
            return out;
        }
        let mut stack = vec![0usize];
        while let Some(node) = stack.pop() {
            if self.box_distance(node, x) > radius {
                continue;
            }
            let n = &self.nodes[node];
            match n.children {
                Some((l, r)) => {
                    stack.push(l);
                    stack.push(r);
                }
                None => {
                    for pos in n.start..n.end {
                        if self.point_distance(pos, x) <= radius {
                            out.push(self.ids[pos]);
                        }
                    }
                }
            }
        }
        out.sort_unstable();
        out
    }
}
