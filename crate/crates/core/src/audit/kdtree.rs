use crate::geometry::ProjectedPoint;

pub const DEFAULT_BUCKET_SIZE: usize = 16;

#[derive(Debug, Clone)]
enum Node {
    Leaf {
        start: usize,
        end: usize,
    },
    Split {
        axis: usize,
        value: f64,
        left: usize,
        right: usize,
    },
}

/// Static 2-D tree over projected points.
///
/// `nearest` is exact and breaks distance ties towards the smaller input
/// index, so it always agrees with a linear scan.
#[derive(Debug, Clone)]
pub struct KdTree2 {
    points: Vec<ProjectedPoint>,
    order: Vec<usize>,
    nodes: Vec<Node>,
}

#[inline]
fn coord(p: &ProjectedPoint, axis: usize) -> f64 {
    if axis == 0 {
        p.easting
    } else {
        p.northing
    }
}

#[inline]
fn dist2(a: &ProjectedPoint, b: &ProjectedPoint) -> f64 {
    let de = a.easting - b.easting;
    let dn = a.northing - b.northing;
    de * de + dn * dn
}

impl KdTree2 {
    /// Panics if `points` is empty.
    pub fn new(points: Vec<ProjectedPoint>) -> Self {
        Self::with_bucket_size(points, DEFAULT_BUCKET_SIZE)
    }

    pub fn with_bucket_size(points: Vec<ProjectedPoint>, bucket: usize) -> Self {
        assert!(!points.is_empty(), "KD-tree needs at least one point");
        let mut tree = KdTree2 {
            order: (0..points.len()).collect(),
            points,
            nodes: Vec::new(),
        };
        tree.build(0, tree.points.len(), bucket.max(1));
        tree
    }

    fn build(&mut self, start: usize, end: usize, bucket: usize) -> usize {
        let id = self.nodes.len();
        if end - start <= bucket {
            self.nodes.push(Node::Leaf { start, end });
            return id;
        }
        let (mut lo, mut hi) = ([f64::INFINITY; 2], [f64::NEG_INFINITY; 2]);
        for &i in &self.order[start..end] {
            for a in 0..2 {
                let c = coord(&self.points[i], a);
                lo[a] = lo[a].min(c);
                hi[a] = hi[a].max(c);
            }
        }
        let axis = usize::from(hi[1] - lo[1] > hi[0] - lo[0]);
        let mid = start + (end - start) / 2;
        let points = &self.points;
        self.order[start..end].select_nth_unstable_by(mid - start, |&a, &b| {
            coord(&points[a], axis)
                .total_cmp(&coord(&points[b], axis))
                .then(a.cmp(&b))
        });
        let value = coord(&self.points[self.order[mid]], axis);
        self.nodes.push(Node::Leaf { start, end });
        let left = self.build(start, mid, bucket);
        let right = self.build(mid, end, bucket);
        self.nodes[id] = Node::Split {
            axis,
            value,
            left,
            right,
        };
        id
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[ProjectedPoint] {
        &self.points
    }

    /// Index and Euclidean distance of the nearest point.
    pub fn nearest(&self, q: ProjectedPoint) -> (usize, f64) {
        let mut best = (f64::INFINITY, usize::MAX);
        self.search(0, &q, &mut best);
        (best.1, best.0.sqrt())
    }

    fn search(&self, node: usize, q: &ProjectedPoint, best: &mut (f64, usize)) {
        match self.nodes[node] {
            Node::Leaf { start, end } => {
                for &i in &self.order[start..end] {
                    let d = dist2(q, &self.points[i]);
                    if d < best.0 || (d == best.0 && i < best.1) {
                        *best = (d, i);
                    }
                }
            }
            Node::Split {
                axis,
                value,
                left,
                right,
            } => {
                let diff = coord(q, axis) - value;
                let (near, far) = if diff < 0.0 { (left, right) } else { (right, left) };
                self.search(near, q, best);
                if diff * diff <= best.0 {
                    self.search(far, q, best);
                }
            }
        }
    }
}

/// Reference nearest neighbour by exhaustive scan, same tie rule.
pub fn nearest_linear(points: &[ProjectedPoint], q: ProjectedPoint) -> (usize, f64) {
    let mut best = (f64::INFINITY, usize::MAX);
    for (i, p) in points.iter().enumerate() {
        let d = dist2(&q, p);
        if d < best.0 {
            best = (d, i);
        }
    }
    (best.1, best.0.sqrt())
}
