//! Classical lifting decision by max-flow/min-cut.
//!
//! Network: `source -> i` with capacity `mu1(i)`, `i -> j` for `(i, j) in R`
//! with an effectively infinite capacity `|mu1| + 1`, and `j -> sink` with
//! capacity `mu2(j)`. A flow of value `|mu1|` is a witness; otherwise the
//! left vertices reachable from the source in the residual graph form a set
//! `S` with `mu1(S) > mu2(R(S))`.

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;

use super::{JointSubDistribution, Relation, SubDistribution, Weight};
use crate::error::{dim_err, input_err, Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub enum ClassicalVerdict<W = f64> {
    Exists(JointSubDistribution<W>),
    /// Violating set `S`, sorted ascending.
    NotExists(Vec<usize>),
}

impl<W> ClassicalVerdict<W> {
    pub fn exists(&self) -> bool {
        matches!(self, ClassicalVerdict::Exists(_))
    }
}

#[derive(Debug, Clone)]
struct Edge<W> {
    to: usize,
    rev: usize,
    cap: W,
    flow: W,
}

/// Dinic's algorithm on real or rational capacities. Residuals at or below
/// `cutoff` count as saturated.
struct Dinic<W> {
    graph: Vec<Vec<Edge<W>>>,
    level: Vec<i64>,
    next: Vec<usize>,
    cutoff: W,
}

impl<W: Weight> Dinic<W> {
    fn new(nodes: usize, cutoff: W) -> Self {
        Self {
            graph: (0..nodes).map(|_| Vec::new()).collect(),
            level: vec![-1; nodes],
            next: vec![0; nodes],
            cutoff,
        }
    }

    /// Returns `(node, index)` of the forward edge.
    fn add_edge(&mut self, from: usize, to: usize, cap: W) -> (usize, usize) {
        let fwd = self.graph[from].len();
        let bwd = self.graph[to].len() + usize::from(from == to);
        self.graph[from].push(Edge { to, rev: bwd, cap, flow: W::zero() });
        self.graph[to].push(Edge { to: from, rev: fwd, cap: W::zero(), flow: W::zero() });
        (from, fwd)
    }

    fn residual(&self, e: &Edge<W>) -> W {
        e.cap - e.flow
    }

    fn bfs(&mut self, s: usize, t: usize) -> bool {
        self.level.iter_mut().for_each(|l| *l = -1);
        self.level[s] = 0;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for e in &self.graph[u] {
                if self.level[e.to] < 0 && self.residual(e) > self.cutoff {
                    self.level[e.to] = self.level[u] + 1;
                    queue.push_back(e.to);
                }
            }
        }
        self.level[t] >= 0
    }

    fn dfs(&mut self, u: usize, t: usize, limit: W) -> W {
        if u == t {
            return limit;
        }
        while self.next[u] < self.graph[u].len() {
            let idx = self.next[u];
            let (to, res) = {
                let e = &self.graph[u][idx];
                (e.to, self.residual(e))
            };
            if res > self.cutoff && self.level[to] == self.level[u] + 1 {
                let push = if res < limit { res } else { limit };
                let got = self.dfs(to, t, push);
                if got > W::zero() {
                    let rev = self.graph[u][idx].rev;
                    self.graph[u][idx].flow = self.graph[u][idx].flow + got;
                    self.graph[to][rev].flow = self.graph[to][rev].flow - got;
                    return got;
                }
            }
            self.next[u] += 1;
        }
        W::zero()
    }

    fn max_flow(&mut self, s: usize, t: usize, bound: W) -> W {
        let mut total = W::zero();
        while self.bfs(s, t) {
            self.next.iter_mut().for_each(|x| *x = 0);
            loop {
                let f = self.dfs(s, t, bound);
                if !(f > W::zero()) {
                    break;
                }
                total = total + f;
            }
        }
        total
    }

    /// Nodes reachable from `s` through edges with residual above the cutoff.
    fn reachable(&self, s: usize) -> Vec<bool> {
        let mut seen = vec![false; self.graph.len()];
        seen[s] = true;
        let mut stack = vec![s];
        while let Some(u) = stack.pop() {
            for e in &self.graph[u] {
                if !seen[e.to] && self.residual(e) > self.cutoff {
                    seen[e.to] = true;
                    stack.push(e.to);
                }
            }
        }
        seen
    }
}

/// Decides `mu1 R^# mu2` for equal-weight sub-distributions.
pub fn check_lifting_maxflow<W: Weight>(
    mu1: &SubDistribution<W>,
    mu2: &SubDistribution<W>,
    relation: &Relation,
) -> Result<ClassicalVerdict<W>> {
    let (m, n) = (mu1.len(), mu2.len());
    if relation.rows() != m || relation.cols() != n {
        return Err(dim_err!(
            "relation is {}x{}, marginals have sizes {m} and {n}",
            relation.rows(),
            relation.cols()
        ));
    }
    let (w1, w2) = (mu1.total(), mu2.total());
    let diff = if w1 >= w2 { w1 - w2 } else { w2 - w1 };
    if diff > W::match_tol() {
        return Err(input_err!(
            "weights differ (|mu1| = {w1}, |mu2| = {w2}); lifting requires equal weights"
        ));
    }
    if !(w1 > W::zero()) && !(w2 > W::zero()) {
        return Ok(ClassicalVerdict::Exists(JointSubDistribution::zero(m, n)));
    }

    let source = 0;
    let sink = m + n + 1;
    let left = |i: usize| 1 + i;
    let right = |j: usize| 1 + m + j;
    let infinite = w1 + W::one();
    let mut net = Dinic::new(m + n + 2, W::flow_cutoff(w1));
    for i in 0..m {
        if mu1.get(i) > W::zero() {
            net.add_edge(source, left(i), mu1.get(i));
        }
    }
    let mut pair_edges = Vec::new();
    for (i, j) in relation.pairs() {
        pair_edges.push((i, j, net.add_edge(left(i), right(j), infinite)));
    }
    for j in 0..n {
        if mu2.get(j) > W::zero() {
            net.add_edge(right(j), sink, mu2.get(j));
        }
    }

    let flow = net.max_flow(source, sink, infinite);
    if w1 - flow <= W::match_tol() {
        let mut weights = vec![W::zero(); m * n];
        for (i, j, (u, k)) in pair_edges {
            let f = net.graph[u][k].flow;
            if f > W::zero() {
                weights[i * n + j] = f;
            }
        }
        return Ok(ClassicalVerdict::Exists(JointSubDistribution::from_vec_unchecked(m, n, weights)));
    }

    let seen = net.reachable(source);
    let set: Vec<usize> = (0..m).filter(|&i| seen[left(i)]).collect();
    let image = relation.image(&set)?;
    if !W::strictly_exceeds(mu1.mass(&set), mu2.mass(&image)) {
        return Err(Error::Numerical(alloc::format!(
            "min-cut set {set:?} does not violate the domination condition"
        )));
    }
    Ok(ClassicalVerdict::NotExists(set))
}
