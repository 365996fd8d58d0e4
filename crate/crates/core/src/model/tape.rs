//! Minimal reverse-mode differentiation tape over `f64` vectors.
//!
//! Nodes are created eagerly (forward values computed on construction) in
//! topological order, so the backward pass is a single reverse sweep.
//! Parameters live in one flat slice owned by the caller; `MatVec` and
//! `AddBias` reference offsets into it and accumulate their gradients into a
//! caller-provided buffer of the same length.
//!
//! Non-smooth points use the conventional subgradients: ReLU and |.| take 0
//! at the kink, and the Euclidean distance takes 0 at coincident points.

pub(super) type NodeId = usize;

enum Op {
    Const,
    MatVec {
        w_offset: usize,
        rows: usize,
        cols: usize,
        x: NodeId,
    },
    AddBias {
        b_offset: usize,
        x: NodeId,
    },
    Add {
        a: NodeId,
        b: NodeId,
    },
    Mul {
        a: NodeId,
        b: NodeId,
    },
    Sigmoid {
        x: NodeId,
    },
    Tanh {
        x: NodeId,
    },
    Relu {
        x: NodeId,
    },
    Slice {
        x: NodeId,
        start: usize,
    },
    Concat {
        a: NodeId,
        b: NodeId,
    },
    MeanVecs {
        xs: Vec<NodeId>,
    },
    L2Dist {
        a: NodeId,
        b: NodeId,
        mask: Option<Vec<bool>>,
    },
    AbsShift {
        x: NodeId,
        shift: f64,
    },
    WeightedSum {
        terms: Vec<(NodeId, f64)>,
    },
}

struct Node {
    value: Vec<f64>,
    op: Op,
}

pub(super) struct Tape<'p> {
    params: &'p [f64],
    nodes: Vec<Node>,
}

#[inline]
fn sigmoid(x: f64) -> f64 {
    if x >= 0.0 {
        1.0 / (1.0 + (-x).exp())
    } else {
        let e = x.exp();
        e / (1.0 + e)
    }
}

impl<'p> Tape<'p> {
    pub fn new(params: &'p [f64]) -> Self {
        Tape {
            params,
            nodes: Vec::new(),
        }
    }

    fn push(&mut self, value: Vec<f64>, op: Op) -> NodeId {
        self.nodes.push(Node { value, op });
        self.nodes.len() - 1
    }

    pub fn value(&self, id: NodeId) -> &[f64] {
        &self.nodes[id].value
    }

    pub fn scalar(&self, id: NodeId) -> f64 {
        debug_assert_eq!(self.nodes[id].value.len(), 1);
        self.nodes[id].value[0]
    }

    pub fn constant(&mut self, v: Vec<f64>) -> NodeId {
        self.push(v, Op::Const)
    }

    /// `y = W x` with `W` row-major at `params[w_offset..]`, shape rows x cols.
    pub fn matvec(&mut self, w_offset: usize, rows: usize, cols: usize, x: NodeId) -> NodeId {
        debug_assert_eq!(self.nodes[x].value.len(), cols);
        let mut y = vec![0.0; rows];
        let xv = &self.nodes[x].value;
        for i in 0..rows {
            let wrow = &self.params[w_offset + i * cols..w_offset + (i + 1) * cols];
            let mut acc = 0.0;
            for j in 0..cols {
                acc += wrow[j] * xv[j];
            }
            y[i] = acc;
        }
        self.push(
            y,
            Op::MatVec {
                w_offset,
                rows,
                cols,
                x,
            },
        )
    }

    pub fn add_bias(&mut self, b_offset: usize, x: NodeId) -> NodeId {
        let xv = &self.nodes[x].value;
        let y: Vec<f64> = xv
            .iter()
            .enumerate()
            .map(|(i, v)| v + self.params[b_offset + i])
            .collect();
        self.push(y, Op::AddBias { b_offset, x })
    }

    pub fn add(&mut self, a: NodeId, b: NodeId) -> NodeId {
        debug_assert_eq!(self.nodes[a].value.len(), self.nodes[b].value.len());
        let y: Vec<f64> = self.nodes[a]
            .value
            .iter()
            .zip(&self.nodes[b].value)
            .map(|(x, z)| x + z)
            .collect();
        self.push(y, Op::Add { a, b })
    }

    pub fn mul(&mut self, a: NodeId, b: NodeId) -> NodeId {
        debug_assert_eq!(self.nodes[a].value.len(), self.nodes[b].value.len());
        let y: Vec<f64> = self.nodes[a]
            .value
            .iter()
            .zip(&self.nodes[b].value)
            .map(|(x, z)| x * z)
            .collect();
        self.push(y, Op::Mul { a, b })
    }

    pub fn sigmoid(&mut self, x: NodeId) -> NodeId {
        let y: Vec<f64> = self.nodes[x].value.iter().map(|&v| sigmoid(v)).collect();
        self.push(y, Op::Sigmoid { x })
    }

    pub fn tanh(&mut self, x: NodeId) -> NodeId {
        let y: Vec<f64> = self.nodes[x].value.iter().map(|v| v.tanh()).collect();
        self.push(y, Op::Tanh { x })
    }

    pub fn relu(&mut self, x: NodeId) -> NodeId {
        let y: Vec<f64> = self.nodes[x].value.iter().map(|v| v.max(0.0)).collect();
        self.push(y, Op::Relu { x })
    }

    pub fn slice(&mut self, x: NodeId, start: usize, len: usize) -> NodeId {
        let y = self.nodes[x].value[start..start + len].to_vec();
        self.push(y, Op::Slice { x, start })
    }

    pub fn concat(&mut self, a: NodeId, b: NodeId) -> NodeId {
        let mut y = self.nodes[a].value.clone();
        y.extend_from_slice(&self.nodes[b].value);
        self.push(y, Op::Concat { a, b })
    }

    /// Elementwise mean of same-length vectors.
    pub fn mean_vecs(&mut self, xs: &[NodeId]) -> NodeId {
        debug_assert!(!xs.is_empty());
        let len = self.nodes[xs[0]].value.len();
        let mut y = vec![0.0; len];
        for &x in xs {
            for (o, v) in y.iter_mut().zip(&self.nodes[x].value) {
                *o += v;
            }
        }
        let inv = 1.0 / xs.len() as f64;
        for o in y.iter_mut() {
            *o *= inv;
        }
        self.push(y, Op::MeanVecs { xs: xs.to_vec() })
    }

    /// Scalar Euclidean distance between two vectors.
    pub fn l2_dist(&mut self, a: NodeId, b: NodeId) -> NodeId {
        self.l2_dist_inner(a, b, None)
    }

    /// Euclidean distance over the coordinates where `mask` is true.
    pub fn l2_dist_masked(&mut self, a: NodeId, b: NodeId, mask: Vec<bool>) -> NodeId {
        self.l2_dist_inner(a, b, Some(mask))
    }

    fn l2_dist_inner(&mut self, a: NodeId, b: NodeId, mask: Option<Vec<bool>>) -> NodeId {
        let av = &self.nodes[a].value;
        let bv = &self.nodes[b].value;
        debug_assert_eq!(av.len(), bv.len());
        if let Some(m) = &mask {
            debug_assert_eq!(m.len(), av.len());
        }
        let mut acc = 0.0;
        for k in 0..av.len() {
            if mask.as_ref().is_some_and(|m| !m[k]) {
                continue;
            }
            let d = av[k] - bv[k];
            acc += d * d;
        }
        self.push(vec![acc.sqrt()], Op::L2Dist { a, b, mask })
    }

    /// Scalar `|x - shift|`.
    pub fn abs_shift(&mut self, x: NodeId, shift: f64) -> NodeId {
        debug_assert_eq!(self.nodes[x].value.len(), 1);
        let y = (self.nodes[x].value[0] - shift).abs();
        self.push(vec![y], Op::AbsShift { x, shift })
    }

    /// Scalar weighted sum of scalar nodes.
    pub fn weighted_sum(&mut self, terms: Vec<(NodeId, f64)>) -> NodeId {
        let y: f64 = terms
            .iter()
            .map(|&(id, c)| {
                debug_assert_eq!(self.nodes[id].value.len(), 1);
                c * self.nodes[id].value[0]
            })
            .sum();
        self.push(vec![y], Op::WeightedSum { terms })
    }

    /// Reverse sweep from `root` (a scalar node); parameter gradients are
    /// accumulated into `grad_params`.
    pub fn backward(&self, root: NodeId, grad_params: &mut [f64]) {
        debug_assert_eq!(grad_params.len(), self.params.len());
        let mut adj: Vec<Vec<f64>> = self
            .nodes
            .iter()
            .map(|n| vec![0.0; n.value.len()])
            .collect();
        adj[root][0] = 1.0;

        for id in (0..=root).rev() {
            if adj[id].iter().all(|&g| g == 0.0) {
                continue;
            }
            let g = std::mem::take(&mut adj[id]);
            match &self.nodes[id].op {
                Op::Const => {}
                Op::MatVec {
                    w_offset,
                    rows,
                    cols,
                    x,
                } => {
                    let xv = &self.nodes[*x].value;
                    for i in 0..*rows {
                        let gi = g[i];
                        if gi == 0.0 {
                            continue;
                        }
                        let row = *w_offset + i * cols;
                        for j in 0..*cols {
                            grad_params[row + j] += gi * xv[j];
                            adj[*x][j] += gi * self.params[row + j];
                        }
                    }
                }
                Op::AddBias { b_offset, x } => {
                    for (i, gi) in g.iter().enumerate() {
                        grad_params[b_offset + i] += gi;
                        adj[*x][i] += gi;
                    }
                }
                Op::Add { a, b } => {
                    for (i, gi) in g.iter().enumerate() {
                        adj[*a][i] += gi;
                        adj[*b][i] += gi;
                    }
                }
                Op::Mul { a, b } => {
                    for (i, gi) in g.iter().enumerate() {
                        adj[*a][i] += gi * self.nodes[*b].value[i];
                        adj[*b][i] += gi * self.nodes[*a].value[i];
                    }
                }
                Op::Sigmoid { x } => {
                    for (i, gi) in g.iter().enumerate() {
                        let y = self.nodes[id].value[i];
                        adj[*x][i] += gi * y * (1.0 - y);
                    }
                }
                Op::Tanh { x } => {
                    for (i, gi) in g.iter().enumerate() {
                        let y = self.nodes[id].value[i];
                        adj[*x][i] += gi * (1.0 - y * y);
                    }
                }
                Op::Relu { x } => {
                    for (i, gi) in g.iter().enumerate() {
                        if self.nodes[*x].value[i] > 0.0 {
                            adj[*x][i] += gi;
                        }
                    }
                }
                Op::Slice { x, start } => {
                    for (i, gi) in g.iter().enumerate() {
                        adj[*x][start + i] += gi;
                    }
                }
                Op::Concat { a, b } => {
                    let alen = self.nodes[*a].value.len();
                    for i in 0..alen {
                        adj[*a][i] += g[i];
                    }
                    for i in alen..g.len() {
                        adj[*b][i - alen] += g[i];
                    }
                }
                Op::MeanVecs { xs } => {
                    let inv = 1.0 / xs.len() as f64;
                    for &x in xs {
                        for (i, gi) in g.iter().enumerate() {
                            adj[x][i] += gi * inv;
                        }
                    }
                }
                Op::L2Dist { a, b, mask } => {
                    let d = self.nodes[id].value[0];
                    if d == 0.0 {
                        continue; // subgradient 0 at coincident points
                    }
                    let scale = g[0] / d;
                    let av = &self.nodes[*a].value;
                    let bv = &self.nodes[*b].value;
                    for k in 0..av.len() {
                        if mask.as_ref().is_some_and(|m| !m[k]) {
                            continue;
                        }
                        let diff = scale * (av[k] - bv[k]);
                        adj[*a][k] += diff;
                        adj[*b][k] -= diff;
                    }
                }
                Op::AbsShift { x, shift } => {
                    let s = self.nodes[*x].value[0] - shift;
                    let sign = if s > 0.0 {
                        1.0
                    } else if s < 0.0 {
                        -1.0
                    } else {
                        0.0
                    };
                    adj[*x][0] += g[0] * sign;
                }
                Op::WeightedSum { terms } => {
                    for &(id_in, c) in terms {
                        adj[id_in][0] += g[0] * c;
                    }
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{finite_diff_grad, RngState};

    /// A deliberately tangled scalar function of 14 parameters exercising
    /// every op, evaluated through the tape.
    fn tangle(params: &[f64]) -> (f64, Vec<f64>) {
        let mut tape = Tape::new(params);
        let x = tape.constant(vec![0.3, -0.7, 1.1]);
        let h = tape.matvec(0, 2, 3, x); // W: 6 params
        let h = tape.add_bias(6, h); // b: 2 params
        let s = tape.sigmoid(h);
        let t = tape.tanh(h);
        let m = tape.mul(s, t);
        let r = tape.relu(m);
        let h2 = tape.matvec(8, 2, 2, r); // W2: 4 params
        let h2 = tape.add_bias(12, h2); // b2: 2 params
        let joined = tape.concat(m, h2);
        let left = tape.slice(joined, 0, 2);
        let right = tape.slice(joined, 2, 2);
        let pooled = tape.mean_vecs(&[left, right]);
        let target = tape.constant(vec![0.25, -0.5]);
        let d = tape.l2_dist(pooled, target);
        let a = tape.abs_shift(d, 0.4);
        let d2 = tape.l2_dist_masked(left, right, vec![true, false]);
        let loss = tape.weighted_sum(vec![(a, 0.7), (d2, 0.3)]);
        let mut grads = vec![0.0; params.len()];
        tape.backward(loss, &mut grads);
        (tape.scalar(loss), grads)
    }

    #[test]
    fn gradients_match_finite_differences() {
        let mut rng = RngState::new(99);
        for _ in 0..5 {
            let params = rng.uniform(-0.9, 0.9, 14).unwrap();
            let (_, analytic) = tangle(&params);
            let numeric = finite_diff_grad(|p| tangle(p).0, &params, 1e-6).unwrap();
            for (k, (a, n)) in analytic.iter().zip(&numeric).enumerate() {
                let denom = a.abs().max(n.abs());
                if denom < 1e-8 {
                    continue;
                }
                let rel = (a - n).abs() / denom;
                assert!(rel < 1e-5, "param {k}: analytic {a} vs numeric {n}");
            }
        }
    }

    #[test]
    fn mean_of_identical_vectors_is_identity() {
        let params: Vec<f64> = vec![];
        let mut tape = Tape::new(&params);
        let a = tape.constant(vec![1.0, 2.0]);
        let pooled = tape.mean_vecs(&[a, a, a]);
        assert_eq!(tape.value(pooled), &[1.0, 2.0]);
    }

    #[test]
    fn l2_dist_at_zero_has_zero_subgradient() {
        let params = vec![1.0, 1.0];
        let mut tape = Tape::new(&params);
        let c = tape.constant(vec![0.5, 0.5]);
        let x = tape.add_bias(0, c);
        let y = tape.add_bias(0, c);
        let d = tape.l2_dist(x, y);
        let mut grads = vec![0.0; 2];
        tape.backward(d, &mut grads);
        assert_eq!(grads, vec![0.0, 0.0]);
        assert_eq!(tape.scalar(d), 0.0);
    }
}
