//! Exponential-time exact oracles for small graphs.
//!
//! The genus search traces faces itself and does not share code with the
//! embedding module, so the two can check each other.

mod crossing;

use std::collections::BTreeMap;
use std::sync::atomic::{AtomicBool, AtomicU64, AtomicUsize, Ordering};
use std::time::{Duration, Instant};

use rayon::prelude::*;
use thiserror::Error;

use crate::embedding::{RotationEmbedding, Sign};
use crate::graphcore::{Edge, Graph, Vertex};

pub use crossing::{
    crossing_number_at_most, exact_crossing_number, exact_edge_planarization, exact_vertex_planarization,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OracleBudget {
    /// Search nodes visited before the oracle gives up.
    pub max_states: u64,
    pub timeout: Option<Duration>,
}

impl Default for OracleBudget {
    fn default() -> Self {
        OracleBudget {
            max_states: 10_000_000,
            timeout: None,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("search exceeded {0} states")]
    OverBudget(u64),
    #[error("search exceeded {0:?}")]
    Timeout(Duration),
}

/// Shared node counter and clock for one oracle call.
pub(crate) struct Meter {
    budget: OracleBudget,
    start: Instant,
    nodes: AtomicU64,
    failed: AtomicBool,
}

impl Meter {
    pub(crate) fn new(budget: &OracleBudget) -> Self {
        Meter {
            budget: *budget,
            start: Instant::now(),
            nodes: AtomicU64::new(0),
            failed: AtomicBool::new(false),
        }
    }

    pub(crate) fn tick(&self) -> Result<(), OracleError> {
        let n = self.nodes.fetch_add(1, Ordering::Relaxed) + 1;
        if self.failed.load(Ordering::Relaxed) || n > self.budget.max_states {
            self.failed.store(true, Ordering::Relaxed);
            return Err(OracleError::OverBudget(self.budget.max_states));
        }
        if let Some(limit) = self.budget.timeout {
            if n % 1024 == 0 && self.start.elapsed() > limit {
                self.failed.store(true, Ordering::Relaxed);
                return Err(OracleError::Timeout(limit));
            }
        }
        Ok(())
    }

    pub(crate) fn charge(&self, states: u64) -> Result<(), OracleError> {
        if states > self.budget.max_states {
            return Err(OracleError::OverBudget(self.budget.max_states));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Surface {
    /// Any surface; signs are searched.
    Any,
    /// Orientable surfaces only; every sign is `+1`.
    Orientable,
}

/// Length of a shortest cycle, or `None` for forests.
pub(crate) fn girth(g: &Graph) -> Option<usize> {
    let mut best: Option<usize> = None;
    for s in g.vertices() {
        let mut dist = BTreeMap::from([(s, 0usize)]);
        let mut parent = BTreeMap::new();
        let mut queue = std::collections::VecDeque::from([s]);
        while let Some(v) = queue.pop_front() {
            for &w in g.neighbors(v) {
                match dist.get(&w) {
                    None => {
                        dist.insert(w, dist[&v] + 1);
                        parent.insert(w, v);
                        queue.push_back(w);
                    }
                    Some(&dw) if parent.get(&v) != Some(&w) => {
                        let len = dist[&v] + dw + 1;
                        best = Some(best.map_or(len, |b| b.min(len)));
                    }
                    _ => {}
                }
            }
        }
    }
    best
}

fn factorial(k: usize) -> u64 {
    (1..=k as u64).fold(1u64, |a, b| a.saturating_mul(b))
}

/// One connected component laid out for the search.
struct Layout {
    ids: Vec<Vertex>,
    adj: Vec<Vec<usize>>,
    /// First dart of each vertex; dart `off[v] + i` leaves `v` towards `adj[v][i]`.
    off: Vec<usize>,
    tail: Vec<usize>,
    head: Vec<usize>,
    /// Index of the tail in the head's adjacency list.
    back: Vec<usize>,
    edge: Vec<usize>,
    /// Edges of a breadth-first spanning tree; their signs are fixed to `+1`.
    tree: Vec<bool>,
    m: usize,
    min_face: usize,
}

impl Layout {
    fn new(g: &Graph) -> Self {
        let ids: Vec<Vertex> = g.vertices().collect();
        let index: BTreeMap<Vertex, usize> = ids.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let adj: Vec<Vec<usize>> = ids.iter().map(|&v| g.neighbors(v).iter().map(|w| index[w]).collect()).collect();
        let mut off = Vec::with_capacity(ids.len());
        let (mut tail, mut head) = (Vec::new(), Vec::new());
        for (v, a) in adj.iter().enumerate() {
            off.push(tail.len());
            for &w in a {
                tail.push(v);
                head.push(w);
            }
        }
        let dart_of = |v: usize, w: usize| off[v] + adj[v].iter().position(|&x| x == w).expect("adjacent");
        let back: Vec<usize> = (0..tail.len())
            .map(|d| adj[head[d]].iter().position(|&x| x == tail[d]).expect("symmetric"))
            .collect();
        let mut edge = vec![usize::MAX; tail.len()];
        let mut m = 0;
        for d in 0..tail.len() {
            if tail[d] < head[d] {
                edge[d] = m;
                edge[dart_of(head[d], tail[d])] = m;
                m += 1;
            }
        }
        let mut tree = vec![false; m];
        let mut seen = vec![false; ids.len()];
        let mut queue = std::collections::VecDeque::new();
        if !ids.is_empty() {
            seen[0] = true;
            queue.push_back(0);
        }
        while let Some(v) = queue.pop_front() {
            for &w in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    tree[edge[dart_of(v, w)]] = true;
                    queue.push_back(w);
                }
            }
        }
        let min_face = if m + 1 == ids.len() { 2 } else { girth(g).unwrap_or(3) };
        Layout {
            ids,
            adj,
            off,
            tail,
            head,
            back,
            edge,
            tree,
            m,
            min_face,
        }
    }

    fn n(&self) -> usize {
        self.ids.len()
    }

    fn darts(&self) -> usize {
        self.tail.len()
    }

    fn dart(&self, v: usize, i: usize) -> usize {
        self.off[v] + i
    }

    fn reverse(&self, d: usize) -> usize {
        self.dart(self.head[d], self.back[d])
    }
}

fn cyclic_orders(a: &[usize]) -> Vec<Vec<usize>> {
    if a.len() <= 2 {
        return vec![(0..a.len()).collect()];
    }
    let mut out = Vec::new();
    let mut rest: Vec<usize> = (1..a.len()).collect();
    permute(&mut rest, 0, &mut |p| {
        let mut r = vec![0];
        r.extend_from_slice(p);
        out.push(r);
    });
    out
}

fn permute(xs: &mut [usize], k: usize, f: &mut dyn FnMut(&[usize])) {
    if k == xs.len() {
        f(xs);
        return;
    }
    for i in k..xs.len() {
        xs.swap(k, i);
        permute(xs, k + 1, f);
        xs.swap(k, i);
    }
}

const UNSET: usize = usize::MAX;

#[derive(Clone, Copy)]
enum Change {
    Succ(usize, usize),
    Sign(usize),
    Used(usize),
    Face(usize),
}

#[derive(Clone, Copy)]
struct Walk {
    start: usize,
    cur: usize,
    len: usize,
}

#[derive(Clone, Copy)]
enum Goal {
    /// Lowest genus, pruning against a shared best.
    Minimize,
    /// First embedding in search order with genus at most this.
    First(usize),
    /// Every embedding of exactly this genus.
    Collect(usize),
}

/// Face-by-face construction of a rotation system: each face is walked to
/// completion, fixing rotations and signs only when the walk needs them.
struct Builder<'a> {
    lay: &'a Layout,
    surface: Surface,
    goal: Goal,
    meter: &'a Meter,
    best: &'a AtomicUsize,
    /// `succ[v][i]` is the index of the neighbour after `adj[v][i]`.
    succ: Vec<Vec<usize>>,
    pred: Vec<Vec<usize>>,
    /// 0 unknown, 1 plus, -1 minus.
    sign: Vec<i8>,
    /// Dart-states `2 * d + (minus as usize)` already on a face.
    used: Vec<bool>,
    faces: usize,
    face_len: usize,
    trail: Vec<Change>,
    found: Vec<RotationEmbedding>,
    local_best: usize,
    done: bool,
}

impl<'a> Builder<'a> {
    fn new(lay: &'a Layout, surface: Surface, goal: Goal, meter: &'a Meter, best: &'a AtomicUsize) -> Self {
        let sign = lay
            .tree
            .iter()
            .map(|&t| if t || surface == Surface::Orientable { 1 } else { 0 })
            .collect();
        Builder {
            lay,
            surface,
            goal,
            meter,
            best,
            succ: lay.adj.iter().map(|a| vec![UNSET; a.len()]).collect(),
            pred: lay.adj.iter().map(|a| vec![UNSET; a.len()]).collect(),
            sign,
            used: vec![false; 2 * lay.darts()],
            faces: 0,
            face_len: 0,
            trail: Vec::new(),
            found: Vec::new(),
            local_best: usize::MAX,
            done: false,
        }
    }

    fn undo(&mut self, mark: usize) {
        while self.trail.len() > mark {
            match self.trail.pop().expect("nonempty trail") {
                Change::Succ(v, i) => {
                    let j = self.succ[v][i];
                    self.succ[v][i] = UNSET;
                    self.pred[v][j] = UNSET;
                }
                Change::Sign(e) => self.sign[e] = 0,
                Change::Used(s) => self.used[s] = false,
                Change::Face(len) => {
                    self.faces -= 1;
                    self.face_len -= len;
                }
            }
        }
    }

    /// Sets `succ[v][i] = j` unless it closes a cycle shorter than the degree.
    fn link(&mut self, v: usize, i: usize, j: usize) -> bool {
        let deg = self.lay.adj[v].len();
        if self.succ[v][i] != UNSET || self.pred[v][j] != UNSET || (i == j && deg > 1) {
            return false;
        }
        let mut k = j;
        let mut steps = 1;
        while k != i {
            match self.succ[v][k] {
                UNSET => break,
                next => {
                    k = next;
                    steps += 1;
                }
            }
        }
        if k == i && steps < deg {
            return false;
        }
        self.succ[v][i] = j;
        self.pred[v][j] = i;
        self.trail.push(Change::Succ(v, i));
        true
    }

    fn mark(&mut self, state: usize) -> bool {
        if self.used[state] {
            return false;
        }
        self.used[state] = true;
        self.trail.push(Change::Used(state));
        true
    }

    fn floor(&self, walk: Option<Walk>) -> usize {
        let lay = self.lay;
        let mf = lay.min_face;
        let open = 2 * lay.m - self.face_len;
        let f_max = match walk {
            None => self.faces + open / mf,
            Some(w) => self.faces + 1 + open.saturating_sub(w.len.max(mf)) / mf,
        };
        let chi = 2 + lay.m as isize - lay.n() as isize - f_max as isize;
        let floor = chi.max(0) as usize;
        match self.surface {
            Surface::Orientable => floor + floor % 2,
            Surface::Any => floor,
        }
    }

    fn prune(&self, floor: usize) -> bool {
        self.done
            || match self.goal {
                Goal::Minimize => floor >= self.best.load(Ordering::Relaxed) || floor >= self.local_best,
                Goal::First(t) | Goal::Collect(t) => floor > t,
            }
    }

    fn next_unused(&self) -> Option<usize> {
        match self.surface {
            Surface::Orientable => (0..self.lay.darts()).map(|d| 2 * d).find(|&s| !self.used[s]),
            Surface::Any => (0..2 * self.lay.darts()).find(|&s| !self.used[s]),
        }
    }

    fn search(&mut self, walk: Option<Walk>) -> Result<(), OracleError> {
        self.meter.tick()?;
        if self.prune(self.floor(walk)) {
            return Ok(());
        }
        let walk = match walk {
            Some(w) => w,
            None => match self.next_unused() {
                Some(s) => Walk { start: s, cur: s, len: 0 },
                None => {
                    self.leaf();
                    return Ok(());
                }
            },
        };
        let lay = self.lay;
        let (d, minus) = (walk.cur / 2, walk.cur % 2 == 1);
        let e = lay.edge[d];
        let signs: &[i8] = match self.sign[e] {
            0 => &[1, -1],
            1 => &[1],
            _ => &[-1],
        };
        for &sg in signs {
            let mark = self.trail.len();
            if self.sign[e] == 0 {
                self.sign[e] = sg;
                self.trail.push(Change::Sign(e));
            }
            let arrive_minus = minus != (sg < 0);
            let mirror = 2 * lay.reverse(d) + usize::from(!arrive_minus);
            let mirrored = self.surface == Surface::Orientable || self.mark(mirror);
            if mirrored && self.mark(walk.cur) {
                self.step(walk, arrive_minus)?;
            }
            self.undo(mark);
        }
        Ok(())
    }

    /// Leaves the head of the current dart, choosing the rotation slot if needed.
    fn step(&mut self, walk: Walk, arrive_minus: bool) -> Result<(), OracleError> {
        let lay = self.lay;
        let d = walk.cur / 2;
        let (w, bi) = (lay.head[d], lay.back[d]);
        let fixed = if arrive_minus { self.pred[w][bi] } else { self.succ[w][bi] };
        let choices: Vec<usize> = if fixed != UNSET {
            vec![fixed]
        } else {
            let closing = walk.start / 2;
            let mut c: Vec<usize> = (0..lay.adj[w].len()).collect();
            // Try the slot that closes the face first.
            if lay.tail[closing] == w {
                let j = closing - lay.off[w];
                c.retain(|&x| x != j);
                c.insert(0, j);
            }
            c
        };
        for j in choices {
            let mark = self.trail.len();
            let ok = fixed != UNSET || if arrive_minus { self.link(w, j, bi) } else { self.link(w, bi, j) };
            if ok {
                let next = 2 * lay.dart(w, j) + usize::from(arrive_minus);
                if next == walk.start {
                    let len = walk.len + 1;
                    self.faces += 1;
                    self.face_len += len;
                    self.trail.push(Change::Face(len));
                    self.search(None)?;
                } else if !self.used[next] {
                    self.search(Some(Walk {
                        cur: next,
                        len: walk.len + 1,
                        ..walk
                    }))?;
                }
            }
            self.undo(mark);
            if self.done {
                break;
            }
        }
        Ok(())
    }

    fn genus(&self) -> usize {
        2 + self.lay.m - self.lay.n() - self.faces
    }

    fn leaf(&mut self) {
        let eg = self.genus();
        match self.goal {
            Goal::Minimize => {
                if eg < self.local_best {
                    self.local_best = eg;
                    self.best.fetch_min(eg, Ordering::Relaxed);
                }
            }
            Goal::First(t) => {
                if eg <= t {
                    self.found.push(self.embedding());
                    self.done = true;
                }
            }
            Goal::Collect(t) => {
                if eg == t {
                    self.found.push(self.embedding());
                }
            }
        }
    }

    fn embedding(&self) -> RotationEmbedding {
        let lay = self.lay;
        let rotation = (0..lay.n())
            .map(|v| {
                let deg = lay.adj[v].len();
                let mut order = Vec::with_capacity(deg);
                let mut i = 0;
                for _ in 0..deg {
                    order.push(lay.ids[lay.adj[v][i]]);
                    i = self.succ[v][i];
                }
                (lay.ids[v], order)
            })
            .collect();
        let signs = (0..lay.darts())
            .filter(|&d| lay.tail[d] < lay.head[d])
            .map(|d| {
                let e = Edge::new(lay.ids[lay.tail[d]], lay.ids[lay.head[d]]);
                (e, Sign::from_bool(self.sign[lay.edge[d]] > 0))
            })
            .collect();
        RotationEmbedding::new(rotation, signs).expect("search builds valid rotation systems")
    }

    /// Fixes the full rotation at `v` to `order` (indices into `adj[v]`).
    fn fix_rotation(&mut self, v: usize, order: &[usize]) {
        for k in 0..order.len() {
            let ok = self.link(v, order[k], order[(k + 1) % order.len()]);
            debug_assert!(ok || order.len() == 1);
        }
    }
}

/// Runs one goal on a connected component, split across workers by the
/// rotation at the highest-degree vertex.
fn search_component(
    lay: &Layout,
    surface: Surface,
    goal: Goal,
    meter: &Meter,
) -> Result<(usize, Vec<RotationEmbedding>), OracleError> {
    if lay.m == 0 {
        let e = RotationEmbedding::from_rotation(lay.ids.iter().map(|&v| (v, Vec::new())).collect())
            .expect("isolated vertices");
        return Ok((0, vec![e]));
    }
    let root = (0..lay.n()).max_by_key(|&v| (lay.adj[v].len(), std::cmp::Reverse(v))).expect("nonempty");
    for v in 0..lay.n() {
        meter.charge(factorial(lay.adj[v].len().saturating_sub(1)))?;
    }
    let best = AtomicUsize::new(usize::MAX);
    let run = |order: &Vec<usize>| -> Result<(usize, Vec<RotationEmbedding>), OracleError> {
        let mut b = Builder::new(lay, surface, goal, meter, &best);
        b.fix_rotation(root, order);
        b.search(None)?;
        Ok((b.local_best, b.found))
    };
    let orders = cyclic_orders(&lay.adj[root]);
    match goal {
        Goal::Minimize => {
            let parts: Vec<_> = orders.par_iter().map(run).collect();
            for p in parts {
                p?;
            }
            Ok((best.load(Ordering::Relaxed), Vec::new()))
        }
        Goal::Collect(t) => {
            let parts: Vec<_> = orders.par_iter().map(run).collect();
            let mut all = Vec::new();
            for p in parts {
                all.extend(p?.1);
            }
            Ok((t, all))
        }
        Goal::First(t) => {
            for order in &orders {
                let (_, found) = run(order)?;
                if let Some(e) = found.into_iter().next() {
                    return Ok((t, vec![e]));
                }
            }
            unreachable!("the minimum was reached by some rotation at the root")
        }
    }
}

/// Minimum Euler genus over the requested surfaces, with a witness.
pub fn min_genus_embedding(
    g: &Graph,
    surface: Surface,
    budget: &OracleBudget,
) -> Result<(usize, RotationEmbedding), OracleError> {
    let meter = Meter::new(budget);
    let mut total = 0;
    let mut witness = RotationEmbedding::from_rotation(BTreeMap::new()).expect("empty embedding");
    for comp in g.component_subgraphs() {
        let lay = Layout::new(&comp);
        let (eg, _) = search_component(&lay, surface, Goal::Minimize, &meter)?;
        let (_, found) = search_component(&lay, surface, Goal::First(eg), &meter)?;
        total += eg;
        witness = witness.disjoint_union(&found[0]);
    }
    Ok((total, witness))
}

pub fn exact_euler_genus(g: &Graph, budget: &OracleBudget) -> Result<usize, OracleError> {
    min_genus_embedding(g, Surface::Any, budget).map(|(eg, _)| eg)
}

/// Orientable genus (half the Euler genus of the best orientable drawing).
pub fn exact_orientable_genus(g: &Graph, budget: &OracleBudget) -> Result<usize, OracleError> {
    min_genus_embedding(g, Surface::Orientable, budget).map(|(eg, _)| eg / 2)
}

/// Every embedding of minimum Euler genus, with signs normalized to `+1`
/// on a breadth-first spanning tree of each component.
pub fn enumerate_min_genus_embeddings(g: &Graph, budget: &OracleBudget) -> Result<Vec<RotationEmbedding>, OracleError> {
    let meter = Meter::new(budget);
    let mut acc = vec![RotationEmbedding::from_rotation(BTreeMap::new()).expect("empty embedding")];
    for comp in g.component_subgraphs() {
        let lay = Layout::new(&comp);
        let (eg, _) = search_component(&lay, Surface::Any, Goal::Minimize, &meter)?;
        let (_, all) = search_component(&lay, Surface::Any, Goal::Collect(eg), &meter)?;
        meter.charge((acc.len() as u64).saturating_mul(all.len() as u64))?;
        acc = acc
            .iter()
            .flat_map(|a| all.iter().map(move |b| a.disjoint_union(b)))
            .collect();
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphcore::generators::*;

    fn budget() -> OracleBudget {
        OracleBudget::default()
    }

    #[test]
    fn small_trees_and_cycles_are_planar() {
        for g in [path(1), path(2), path(5), cycle(3), star(4), complete(4)] {
            assert_eq!(exact_euler_genus(&g, &budget()).unwrap(), 0);
        }
    }

    #[test]
    fn witnesses_retrace_to_the_reported_genus() {
        for g in [complete(5), complete_bipartite(3, 3), petersen()] {
            let (eg, e) = min_genus_embedding(&g, Surface::Any, &budget()).unwrap();
            assert_eq!(e.euler_genus(), eg);
            assert!(e.embeds(&g));
        }
    }

    #[test]
    fn triangle_has_only_planar_minimum_embeddings() {
        let all = enumerate_min_genus_embeddings(&cycle(3), &budget()).unwrap();
        assert!(!all.is_empty());
        assert!(all.iter().all(|e| e.euler_genus() == 0));
    }

    #[test]
    fn over_budget_is_refused() {
        let tight = OracleBudget {
            max_states: 10,
            timeout: None,
        };
        assert!(matches!(exact_euler_genus(&complete(6), &tight), Err(OracleError::OverBudget(10))));
    }
}
