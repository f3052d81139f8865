//! Left-right planarity test with embedding extraction.
//!
//! Iterative formulation of the Brandes/de Fraysseix–Rosenstiehl left-right
//! criterion, so deep DFS trees do not exhaust the stack.

use std::collections::BTreeMap;

use crate::graphcore::{Dense, Graph, Vertex};

const NONE: usize = usize::MAX;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
struct Interval {
    low: Option<usize>,
    high: Option<usize>,
}

impl Interval {
    fn single(e: usize) -> Self {
        Interval {
            low: Some(e),
            high: Some(e),
        }
    }

    fn is_empty(&self) -> bool {
        self.low.is_none() && self.high.is_none()
    }
}

#[derive(Clone, Copy, Debug, Default)]
struct ConflictPair {
    left: Interval,
    right: Interval,
}

impl ConflictPair {
    fn swap(&mut self) {
        std::mem::swap(&mut self.left, &mut self.right);
    }
}

struct Lr {
    adj: Vec<Vec<(usize, usize)>>,
    height: Vec<usize>,
    parent_edge: Vec<Option<usize>>,
    oriented: Vec<bool>,
    tail: Vec<usize>,
    head: Vec<usize>,
    lowpt: Vec<usize>,
    lowpt2: Vec<usize>,
    nesting: Vec<i64>,
    out: Vec<Vec<usize>>,
    refs: Vec<Option<usize>>,
    side: Vec<i64>,
    stack: Vec<ConflictPair>,
    stack_bottom: Vec<usize>,
    lowpt_edge: Vec<Option<usize>>,
    roots: Vec<usize>,
}

impl Lr {
    fn new(d: &Dense) -> Self {
        let n = d.len();
        let mut adj = vec![Vec::new(); n];
        let mut m = 0;
        for v in 0..n {
            for &w in &d.adj[v] {
                if v < w {
                    adj[v].push((w, m));
                    adj[w].push((v, m));
                    m += 1;
                }
            }
        }
        // Keep neighbour order by vertex index for determinism.
        for list in &mut adj {
            list.sort_unstable();
        }
        Lr {
            adj,
            height: vec![NONE; n],
            parent_edge: vec![None; n],
            oriented: vec![false; m],
            tail: vec![NONE; m],
            head: vec![NONE; m],
            lowpt: vec![0; m],
            lowpt2: vec![0; m],
            nesting: vec![0; m],
            out: vec![Vec::new(); n],
            refs: vec![None; m],
            side: vec![1; m],
            stack: Vec::new(),
            stack_bottom: vec![0; m],
            lowpt_edge: vec![None; m],
            roots: Vec::new(),
        }
    }

    fn orient(&mut self, root: usize) {
        let n = self.adj.len();
        let mut ind = vec![0usize; n];
        let mut resumed = vec![false; self.oriented.len()];
        let mut dfs = vec![root];
        while let Some(v) = dfs.pop() {
            let e = self.parent_edge[v];
            while ind[v] < self.adj[v].len() {
                let (w, vw) = self.adj[v][ind[v]];
                if !resumed[vw] {
                    if self.oriented[vw] {
                        ind[v] += 1;
                        continue;
                    }
                    self.oriented[vw] = true;
                    self.tail[vw] = v;
                    self.head[vw] = w;
                    self.out[v].push(vw);
                    self.lowpt[vw] = self.height[v];
                    self.lowpt2[vw] = self.height[v];
                    if self.height[w] == NONE {
                        self.parent_edge[w] = Some(vw);
                        self.height[w] = self.height[v] + 1;
                        dfs.push(v);
                        dfs.push(w);
                        resumed[vw] = true;
                        break;
                    }
                    self.lowpt[vw] = self.height[w];
                }
                self.nesting[vw] = 2 * self.lowpt[vw] as i64;
                if self.lowpt2[vw] < self.height[v] {
                    self.nesting[vw] += 1;
                }
                if let Some(e) = e {
                    if self.lowpt[vw] < self.lowpt[e] {
                        self.lowpt2[e] = self.lowpt[e].min(self.lowpt2[vw]);
                        self.lowpt[e] = self.lowpt[vw];
                    } else if self.lowpt[vw] > self.lowpt[e] {
                        self.lowpt2[e] = self.lowpt2[e].min(self.lowpt[vw]);
                    } else {
                        self.lowpt2[e] = self.lowpt2[e].min(self.lowpt2[vw]);
                    }
                }
                ind[v] += 1;
            }
        }
    }

    fn sort_by_nesting(&mut self) {
        for v in 0..self.out.len() {
            let nesting = &self.nesting;
            self.out[v].sort_by_key(|&e| nesting[e]);
        }
    }

    fn conflicting(&self, iv: &Interval, b: usize) -> bool {
        match iv.high {
            Some(h) if !iv.is_empty() => self.lowpt[h] > self.lowpt[b],
            _ => false,
        }
    }

    fn lowest(&self, p: &ConflictPair) -> usize {
        match (p.left.low, p.right.low) {
            (None, Some(r)) => self.lowpt[r],
            (Some(l), None) => self.lowpt[l],
            (Some(l), Some(r)) => self.lowpt[l].min(self.lowpt[r]),
            (None, None) => NONE,
        }
    }

    fn test(&mut self, root: usize) -> bool {
        let n = self.adj.len();
        let mut ind = vec![0usize; n];
        let mut resumed = vec![false; self.oriented.len()];
        let mut dfs = vec![root];
        while let Some(v) = dfs.pop() {
            let e = self.parent_edge[v];
            let mut descended = false;
            while ind[v] < self.out[v].len() {
                let ei = self.out[v][ind[v]];
                let w = self.head[ei];
                if !resumed[ei] {
                    self.stack_bottom[ei] = self.stack.len();
                    if self.parent_edge[w] == Some(ei) {
                        dfs.push(v);
                        dfs.push(w);
                        resumed[ei] = true;
                        descended = true;
                        break;
                    }
                    self.lowpt_edge[ei] = Some(ei);
                    self.stack.push(ConflictPair {
                        left: Interval::default(),
                        right: Interval::single(ei),
                    });
                }
                if self.lowpt[ei] < self.height[v] {
                    if ei == self.out[v][0] {
                        if let Some(e) = e {
                            self.lowpt_edge[e] = self.lowpt_edge[ei];
                        }
                    } else if let Some(e) = e {
                        if !self.add_constraints(ei, e) {
                            return false;
                        }
                    }
                }
                ind[v] += 1;
            }
            if !descended {
                if let Some(e) = e {
                    self.remove_back_edges(e);
                }
            }
        }
        true
    }

    fn add_constraints(&mut self, ei: usize, e: usize) -> bool {
        let mut p = ConflictPair::default();
        loop {
            let Some(mut q) = self.stack.pop() else {
                break;
            };
            if !q.left.is_empty() {
                q.swap();
            }
            if !q.left.is_empty() {
                return false;
            }
            let qlow = q.right.low.expect("right interval nonempty");
            if self.lowpt[qlow] > self.lowpt[e] {
                if p.right.is_empty() {
                    p.right = q.right;
                } else if let Some(pl) = p.right.low {
                    self.refs[pl] = q.right.high;
                }
                p.right.low = q.right.low;
            } else {
                self.refs[qlow] = self.lowpt_edge[e];
            }
            if self.stack.len() == self.stack_bottom[ei] {
                break;
            }
        }
        while let Some(top) = self.stack.last() {
            if !(self.conflicting(&top.left, ei) || self.conflicting(&top.right, ei)) {
                break;
            }
            let mut q = self.stack.pop().expect("peeked");
            if self.conflicting(&q.right, ei) {
                q.swap();
            }
            if self.conflicting(&q.right, ei) {
                return false;
            }
            if let Some(pl) = p.right.low {
                self.refs[pl] = q.right.high;
            }
            if q.right.low.is_some() {
                p.right.low = q.right.low;
            }
            if p.left.is_empty() {
                p.left = q.left;
            } else if let Some(pl) = p.left.low {
                self.refs[pl] = q.left.high;
            }
            p.left.low = q.left.low;
        }
        if !(p.left.is_empty() && p.right.is_empty()) {
            self.stack.push(p);
        }
        true
    }

    fn remove_back_edges(&mut self, e: usize) {
        let u = self.tail[e];
        while let Some(top) = self.stack.last() {
            if self.lowest(top) != self.height[u] {
                break;
            }
            let p = self.stack.pop().expect("peeked");
            if let Some(l) = p.left.low {
                self.side[l] = -1;
            }
        }
        if let Some(mut p) = self.stack.pop() {
            while let Some(h) = p.left.high {
                if self.head[h] != u {
                    break;
                }
                p.left.high = self.refs[h];
            }
            if p.left.high.is_none() {
                if let Some(l) = p.left.low {
                    self.refs[l] = p.right.low;
                    self.side[l] = -1;
                    p.left.low = None;
                }
            }
            while let Some(h) = p.right.high {
                if self.head[h] != u {
                    break;
                }
                p.right.high = self.refs[h];
            }
            if p.right.high.is_none() {
                if let Some(r) = p.right.low {
                    self.refs[r] = p.left.low;
                    self.side[r] = -1;
                    p.right.low = None;
                }
            }
            self.stack.push(p);
        }
        if self.lowpt[e] < self.height[u] {
            if let Some(top) = self.stack.last() {
                let hl = top.left.high;
                let hr = top.right.high;
                self.refs[e] = match (hl, hr) {
                    (Some(l), None) => Some(l),
                    (Some(l), Some(r)) if self.lowpt[l] > self.lowpt[r] => Some(l),
                    _ => hr,
                };
            }
        }
    }

    fn sign(&mut self, start: usize, old_ref: &mut [Option<usize>]) -> i64 {
        let mut touched = Vec::new();
        let mut dfs = vec![start];
        while let Some(e) = dfs.pop() {
            if let Some(r) = self.refs[e] {
                dfs.push(e);
                dfs.push(r);
                old_ref[e] = Some(r);
                touched.push(e);
                self.refs[e] = None;
            } else if let Some(r) = old_ref[e] {
                self.side[e] *= self.side[r];
            }
        }
        for e in touched {
            old_ref[e] = None;
        }
        self.side[start]
    }
}

/// Rotation lists kept as plain vectors; "clockwise" means the next index.
struct RotationBuilder {
    rot: Vec<Vec<usize>>,
    first: Vec<Option<usize>>,
}

impl RotationBuilder {
    fn add_cw(&mut self, v: usize, w: usize, reference: Option<usize>) {
        match reference {
            None => {
                self.rot[v].push(w);
                self.first[v] = Some(w);
            }
            Some(r) => {
                let pos = self.rot[v].iter().position(|&x| x == r).expect("reference present");
                self.rot[v].insert(pos + 1, w);
            }
        }
    }

    fn add_ccw(&mut self, v: usize, w: usize, reference: Option<usize>) {
        match reference {
            None => {
                self.rot[v].push(w);
                self.first[v] = Some(w);
            }
            Some(r) => {
                let pos = self.rot[v].iter().position(|&x| x == r).expect("reference present");
                self.rot[v].insert(pos, w);
                if self.first[v] == Some(r) {
                    self.first[v] = Some(w);
                }
            }
        }
    }
}

fn lr_rotation_dense(d: &Dense) -> Option<Vec<Vec<usize>>> {
    let n = d.len();
    let m = d.edge_count();
    if n > 2 && m > 3 * n - 6 {
        return None;
    }
    let mut lr = Lr::new(d);
    for v in 0..n {
        if lr.height[v] == NONE {
            lr.height[v] = 0;
            lr.roots.push(v);
            lr.orient(v);
        }
    }
    lr.sort_by_nesting();
    for root in lr.roots.clone() {
        if !lr.test(root) {
            return None;
        }
    }
    let mut old_ref = vec![None; m];
    for e in 0..m {
        let s = lr.sign(e, &mut old_ref);
        lr.nesting[e] *= s;
    }
    lr.sort_by_nesting();

    let mut b = RotationBuilder {
        rot: vec![Vec::new(); n],
        first: vec![None; n],
    };
    for v in 0..n {
        let mut prev = None;
        for &e in &lr.out[v] {
            let w = lr.head[e];
            b.add_cw(v, w, prev);
            prev = Some(w);
        }
    }
    let mut left_ref = vec![NONE; n];
    let mut right_ref = vec![NONE; n];
    let mut ind = vec![0usize; n];
    for &root in &lr.roots {
        let mut dfs = vec![root];
        while let Some(v) = dfs.pop() {
            while ind[v] < lr.out[v].len() {
                let ei = lr.out[v][ind[v]];
                ind[v] += 1;
                let w = lr.head[ei];
                if lr.parent_edge[w] == Some(ei) {
                    let first = b.first[w];
                    b.add_ccw(w, v, first);
                    left_ref[v] = w;
                    right_ref[v] = w;
                    dfs.push(v);
                    dfs.push(w);
                    break;
                } else if lr.side[ei] == 1 {
                    b.add_cw(w, v, Some(right_ref[w]));
                } else {
                    b.add_ccw(w, v, Some(left_ref[w]));
                    left_ref[w] = v;
                }
            }
        }
    }
    Some(b.rot)
}

/// Planar rotation system of `g`, or `None` when `g` is not planar.
pub fn planar_rotation(g: &Graph) -> Option<BTreeMap<Vertex, Vec<Vertex>>> {
    let d = Dense::new(g);
    let rot = lr_rotation_dense(&d)?;
    Some(
        rot.into_iter()
            .enumerate()
            .map(|(v, nbrs)| (d.ids[v], nbrs.into_iter().map(|w| d.ids[w]).collect()))
            .collect(),
    )
}

pub fn is_planar(g: &Graph) -> bool {
    lr_rotation_dense(&Dense::new(g)).is_some()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphcore::generators::*;

    #[test]
    fn kuratowski_graphs_are_not_planar() {
        assert!(!is_planar(&complete(5)));
        assert!(!is_planar(&complete_bipartite(3, 3)));
        assert!(!is_planar(&petersen()));
        assert!(!is_planar(&torus_grid(4, 4)));
    }

    #[test]
    fn planar_families() {
        assert!(is_planar(&complete(4)));
        assert!(is_planar(&grid(12, 9)));
        assert!(is_planar(&cube()));
        assert!(is_planar(&wheel(9)));
        assert!(is_planar(&random_planar(10, 3)));
        assert!(is_planar(&complete_bipartite(2, 7)));
        assert!(is_planar(&Graph::new()));
    }

    #[test]
    fn k5_minus_edge_is_planar() {
        let mut g = complete(5);
        g.remove_edge(Vertex(0), Vertex(1));
        assert!(is_planar(&g));
    }

    #[test]
    fn long_path_does_not_overflow() {
        assert!(is_planar(&path(200_000)));
        assert!(is_planar(&grid(300, 300)));
    }
}
