//! Small deterministic max-flow used for the large-angle assignment.
//!
//! Plain augmenting-path search over an adjacency-list residual graph.
//! Edges are explored in insertion order, so results are reproducible.
//! The networks here are bipartite with unit arcs out of the source, which
//! keeps the number of augmentations at `O(B)`.

pub struct MaxFlow {
    head: Vec<Vec<usize>>, // per node: edge indices
    to: Vec<usize>,
    cap: Vec<i64>,
}

impl MaxFlow {
    pub fn new(n: usize) -> Self {
        MaxFlow {
            head: vec![Vec::new(); n],
            to: Vec::new(),
            cap: Vec::new(),
        }
    }

    pub fn add_edge(&mut self, u: usize, v: usize, cap: i64) {
        let e = self.to.len();
        self.to.push(v);
        self.cap.push(cap);
        self.to.push(u);
        self.cap.push(0);
        self.head[u].push(e);
        self.head[v].push(e + 1);
    }

    pub fn run(&mut self, s: usize, t: usize) -> i64 {
        let mut total = 0;
        loop {
            let mut parent: Vec<Option<usize>> = vec![None; self.head.len()];
            let mut queue = std::collections::VecDeque::new();
            queue.push_back(s);
            let mut found = false;
            'bfs: while let Some(u) = queue.pop_front() {
                for &e in &self.head[u] {
                    let v = self.to[e];
                    if self.cap[e] > 0 && parent[v].is_none() && v != s {
                        parent[v] = Some(e);
                        if v == t {
                            found = true;
                            break 'bfs;
                        }
                        queue.push_back(v);
                    }
                }
            }
            if !found {
                return total;
            }
            // Bottleneck along the path.
            let mut push = i64::MAX;
            let mut v = t;
            while v != s {
                let e = parent[v].unwrap();
                push = push.min(self.cap[e]);
                v = self.to[e ^ 1];
            }
            let mut v = t;
            while v != s {
                let e = parent[v].unwrap();
                self.cap[e] -= push;
                self.cap[e ^ 1] += push;
                v = self.to[e ^ 1];
            }
            total += push;
        }
    }

    /// After `run`: the node that received the unit sent out of `u`, if
    /// any. Only meaningful when all of `u`'s outgoing arcs had capacity 1.
    pub fn saturated_neighbor(&self, u: usize) -> Option<usize> {
        for &e in &self.head[u] {
            // Forward edges are the even-indexed ones created from u.
            if e % 2 == 0 && self.to[e ^ 1] == u && self.cap[e] == 0 {
                return Some(self.to[e]);
            }
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bipartite_saturation() {
        // Source 0, left {1,2}, right {3,4}, sink 5; perfect matching.
        let mut f = MaxFlow::new(6);
        f.add_edge(0, 1, 1);
        f.add_edge(0, 2, 1);
        f.add_edge(1, 3, 1);
        f.add_edge(2, 3, 1);
        f.add_edge(2, 4, 1);
        f.add_edge(3, 5, 1);
        f.add_edge(4, 5, 1);
        assert_eq!(f.run(0, 5), 2);
        assert_eq!(f.saturated_neighbor(1), Some(3));
        assert_eq!(f.saturated_neighbor(2), Some(4));
    }

    #[test]
    fn infeasible_when_demand_exceeds_arcs() {
        let mut f = MaxFlow::new(4);
        f.add_edge(0, 1, 1);
        f.add_edge(1, 2, 1);
        f.add_edge(2, 3, 2);
        assert_eq!(f.run(0, 3), 1);
    }
}
