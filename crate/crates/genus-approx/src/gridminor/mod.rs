//! Grid minors in planar pieces, surviving subgrids, flat grids and
//! planarly nested cycle sequences.

use std::collections::BTreeSet;

use serde::Serialize;
use thiserror::Error;

use crate::decomp::{planarizing_set, PieceRejection, PlanarizingConfig};
use crate::graphcore::generators::{grid, grid_id};
use crate::graphcore::{verify_minor_mapping, Graph, MinorMapping, Vertex};
use crate::planarity::is_planar;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GridMinor {
    pub rows: usize,
    pub cols: usize,
    pub mapping: MinorMapping,
}

impl GridMinor {
    fn from_cells(cells: &[Vec<BTreeSet<Vertex>>]) -> Self {
        let rows = cells.len();
        let cols = cells.first().map_or(0, Vec::len);
        let branch_sets = cells
            .iter()
            .enumerate()
            .flat_map(|(i, row)| {
                row.iter()
                    .enumerate()
                    .map(move |(j, set)| (grid_id(cols as u64, i as u64, j as u64), set.clone()))
            })
            .collect();
        GridMinor {
            rows,
            cols,
            mapping: MinorMapping {
                minor: grid(rows as u64, cols as u64),
                branch_sets,
            },
        }
    }

    /// Side of the largest square this minor contains.
    pub fn side(&self) -> usize {
        self.rows.min(self.cols)
    }

    pub fn cell(&self, row: usize, col: usize) -> &BTreeSet<Vertex> {
        &self.mapping.branch_sets[&grid_id(self.cols as u64, row as u64, col as u64)]
    }

    /// Verified minor mapping onto the grid of the stated shape.
    pub fn validate(&self, host: &Graph) -> bool {
        self.mapping.minor == grid(self.rows as u64, self.cols as u64)
            && verify_minor_mapping(host, &self.mapping)
    }

    /// The square window of side `size` with top-left cell `(row, col)`.
    pub fn window(&self, row: usize, col: usize, size: usize) -> GridMinor {
        let cells: Vec<Vec<BTreeSet<Vertex>>> = (row..row + size)
            .map(|i| (col..col + size).map(|j| self.cell(i, j).clone()).collect())
            .collect();
        GridMinor::from_cells(&cells)
    }

    pub fn support(&self) -> BTreeSet<Vertex> {
        self.mapping.support()
    }
}

fn common(g: &Graph, a: Vertex, b: Vertex) -> Vec<Vertex> {
    g.neighbors(a)
        .iter()
        .copied()
        .filter(|&x| g.has_edge(x, b))
        .collect()
}

/// The neighbour of `q` opposite to `p`: it shares no neighbour with `p` besides `q`.
fn straight(g: &Graph, p: Vertex, q: Vertex) -> Option<Vertex> {
    let mut options = g
        .neighbors(q)
        .iter()
        .copied()
        .filter(|&w| w != p && !g.has_edge(w, p) && common(g, p, w) == [q]);
    let first = options.next()?;
    options.next().is_none().then_some(first)
}

/// Builds a grid subgraph starting from corner `v` with first row through `a`
/// and first column through `b`. Returns the cells of the largest square.
fn ladder(g: &Graph, v: Vertex, a: Vertex, b: Vertex) -> Vec<Vec<Vertex>> {
    let mut used = BTreeSet::from([v, a, b]);
    let extend = |first: Vertex, second: Vertex, used: &mut BTreeSet<Vertex>| {
        let mut line = vec![first, second];
        while let Some(next) = straight(g, line[line.len() - 2], line[line.len() - 1]) {
            if !used.insert(next) {
                break;
            }
            line.push(next);
        }
        line
    };
    let row0 = extend(v, a, &mut used);
    let col0 = extend(v, b, &mut used);
    let mut rows = vec![row0];
    let mut best = 1;
    for (i, &start) in col0.iter().enumerate().skip(1) {
        let limit = rows[i - 1].len();
        let mut row = vec![start];
        for j in 1..limit {
            let candidates: Vec<Vertex> = common(g, rows[i - 1][j], row[j - 1])
                .into_iter()
                .filter(|&x| x != rows[i - 1][j - 1] && !used.contains(&x))
                .collect();
            match candidates.first() {
                Some(&x) => {
                    used.insert(x);
                    row.push(x);
                }
                None => break,
            }
        }
        let width = rows.iter().map(Vec::len).min().unwrap_or(0).min(row.len());
        rows.push(row);
        best = best.max(width.min(rows.len()));
        if row_too_short(&rows, i) {
            break;
        }
    }
    rows.truncate(best);
    for row in &mut rows {
        row.truncate(best);
    }
    rows
}

fn row_too_short(rows: &[Vec<Vertex>], i: usize) -> bool {
    rows[i].len() <= i
}

fn find_short_cycle(g: &Graph) -> Option<Vec<Vertex>> {
    for u in g.vertices() {
        for v in g.vertices().filter(|&v| v > u) {
            let shared = common(g, u, v);
            if shared.len() >= 2 {
                return Some(vec![u, shared[0], v, shared[1]]);
            }
        }
    }
    for e in g.edges() {
        let (u, v) = e.ends();
        let blocked: BTreeSet<Vertex> = common(g, u, v).into_iter().collect();
        let h = g.without_edges([&e]);
        if let Some(p) = h.shortest_path(u, v, |x| !blocked.contains(&x)) {
            if p.len() >= 4 {
                return Some(p);
            }
        }
    }
    None
}

/// Square grid minor of a planar graph, verified before it is returned.
///
/// Searches for grid subgraphs grown row by row from every corner; falls
/// back to a 2×2 grid from a cycle of length at least four, then to 1×1.
pub fn planar_grid_minor(g: &Graph) -> GridMinor {
    let mut best: Vec<Vec<Vertex>> = Vec::new();
    let cap = (g.vertex_count() as f64).sqrt() as usize;
    'outer: for v in g.vertices() {
        let nbrs = g.neighbors(v);
        for (i, &a) in nbrs.iter().enumerate() {
            for &b in &nbrs[i + 1..] {
                if common(g, a, b).iter().all(|&x| x == v) {
                    continue;
                }
                let found = ladder(g, v, a, b);
                if found.len() > best.len() {
                    best = found;
                    if best.len() >= cap {
                        break 'outer;
                    }
                }
            }
        }
    }
    let gm = if best.len() >= 2 {
        let cells: Vec<Vec<BTreeSet<Vertex>>> = best
            .iter()
            .map(|row| row.iter().map(|&x| BTreeSet::from([x])).collect())
            .collect();
        GridMinor::from_cells(&cells)
    } else if let Some(c) = find_short_cycle(g) {
        let cells = vec![
            vec![BTreeSet::from([c[0]]), BTreeSet::from([c[1]])],
            vec![c[3..].iter().copied().collect(), BTreeSet::from([c[2]])],
        ];
        GridMinor::from_cells(&cells)
    } else {
        let v = g.vertices().next().expect("nonempty graph");
        GridMinor::from_cells(&[vec![BTreeSet::from([v])]])
    };
    debug_assert!(gm.validate(g));
    gm
}

/// Kept rows and columns inside the best box: a row (column) is kept when it
/// has no deleted cell within the box's column (row) range.
fn avoidance(cells: &BTreeSet<(usize, usize)>, r: usize) -> (Vec<usize>, Vec<usize>) {
    let bounds = |pick: fn(&(usize, usize)) -> usize| {
        let mut b: BTreeSet<usize> = BTreeSet::from([0, r - 1]);
        for c in cells {
            let x = pick(c);
            b.insert(x.saturating_sub(1));
            b.insert((x + 1).min(r - 1));
        }
        b.into_iter().collect::<Vec<usize>>()
    };
    let row_bounds = bounds(|c| c.0);
    let col_bounds = bounds(|c| c.1);
    let mut best: (usize, Vec<usize>, Vec<usize>) = (0, Vec::new(), Vec::new());
    for (ri, &r0) in row_bounds.iter().enumerate() {
        for &r1 in &row_bounds[ri..] {
            for (ci, &c0) in col_bounds.iter().enumerate() {
                for &c1 in &col_bounds[ci..] {
                    if (r1 - r0 + 1).min(c1 - c0 + 1) <= best.0 {
                        continue;
                    }
                    let inside: Vec<&(usize, usize)> = cells
                        .iter()
                        .filter(|c| (r0..=r1).contains(&c.0) && (c0..=c1).contains(&c.1))
                        .collect();
                    let rows: Vec<usize> = (r0..=r1).filter(|&i| inside.iter().all(|c| c.0 != i)).collect();
                    let cols: Vec<usize> = (c0..=c1).filter(|&j| inside.iter().all(|c| c.1 != j)).collect();
                    let side = rows.len().min(cols.len());
                    if side > best.0 {
                        best = (side, rows, cols);
                    }
                }
            }
        }
    }
    let (side, mut rows, mut cols) = best;
    rows.truncate(side);
    cols.truncate(side);
    (rows, cols)
}

/// Square grid minor of the grid minus `deleted` cells (grid vertex ids),
/// of side at least `r − |deleted|`.
pub fn surviving_subgrid(h: &GridMinor, deleted: &BTreeSet<Vertex>) -> GridMinor {
    let r = h.side();
    if r == 0 {
        return h.clone();
    }
    let cols = h.cols as u64;
    let cells: BTreeSet<(usize, usize)> = deleted
        .iter()
        .map(|v| ((v.0 / cols) as usize, (v.0 % cols) as usize))
        .filter(|&(i, j)| i < r && j < r)
        .collect();
    let (kr, kc) = avoidance(&cells, r);
    let side = kr.len();
    // Cell (a, b) absorbs the row segment up to the next kept column and the
    // column segment up to the next kept row.
    let out: Vec<Vec<BTreeSet<Vertex>>> = (0..side)
        .map(|a| {
            (0..side)
                .map(|b| {
                    let row_end = if b + 1 < side { kc[b + 1] } else { kc[b] + 1 };
                    let col_end = if a + 1 < side { kr[a + 1] } else { kr[a] + 1 };
                    let mut set = BTreeSet::new();
                    for j in kc[b]..row_end {
                        set.extend(h.cell(kr[a], j).iter().copied());
                    }
                    for i in kr[a]..col_end {
                        set.extend(h.cell(i, kc[b]).iter().copied());
                    }
                    set
                })
                .collect()
        })
        .collect();
    GridMinor::from_cells(&out)
}

#[derive(Debug, Error, PartialEq)]
pub enum GridError {
    #[error(transparent)]
    Reject(#[from] PieceRejection),
    #[error("no flat grid of side {0} was found")]
    TooSmall(usize),
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PlanarPiece {
    pub removed: BTreeSet<Vertex>,
    pub piece: Graph,
    pub grid: GridMinor,
}

/// Planarizing set plus the planar component carrying the largest grid minor.
pub fn large_planar_piece(
    g: &Graph,
    genus_budget: usize,
    cfg: &PlanarizingConfig,
) -> Result<PlanarPiece, PieceRejection> {
    let removed = planarizing_set(g, genus_budget, cfg)?;
    let rest = g.without_vertices(&removed);
    let best = rest
        .component_subgraphs()
        .into_iter()
        .map(|piece| {
            let grid = planar_grid_minor(&piece);
            (grid.side(), piece.vertex_count(), piece, grid)
        })
        .max_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)).then_with(|| b.2.vertex_set().cmp(&a.2.vertex_set())))
        .map(|(_, _, piece, grid)| (piece, grid));
    let (piece, grid) = match best {
        Some(found) => found,
        None => (Graph::new(), GridMinor::from_cells(&[])),
    };
    Ok(PlanarPiece { removed, piece, grid })
}

/// Vertices of `f` with a neighbour outside `f`.
pub fn attachment_vertices(g: &Graph, f: &BTreeSet<Vertex>) -> BTreeSet<Vertex> {
    f.iter()
        .copied()
        .filter(|&v| g.neighbors(v).iter().any(|w| !f.contains(w)))
        .collect()
}

/// `f` is flat iff `f` plus an apex on its attachment vertices is planar.
pub fn is_flat(g: &Graph, f: &BTreeSet<Vertex>) -> bool {
    let mut h = g.induced(f);
    let apex = Vertex(g.fresh_id().max(h.fresh_id()));
    h.add_vertex(apex);
    for v in attachment_vertices(g, f) {
        h.add_edge(apex, v).expect("apex is fresh");
    }
    is_planar(&h)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FlatGrid {
    pub flat: BTreeSet<Vertex>,
    pub grid: GridMinor,
    pub removed: BTreeSet<Vertex>,
}

/// A flat square window of the grid minor found in a large planar piece,
/// preferring windows whose image avoids the planarizing set's neighbourhood.
pub fn flat_grid_minor(
    g: &Graph,
    genus_budget: usize,
    min_r: usize,
    cfg: &PlanarizingConfig,
) -> Result<FlatGrid, GridError> {
    let piece = large_planar_piece(g, genus_budget, cfg)?;
    let gm = &piece.grid;
    let r = gm.side();
    if r < min_r {
        return Err(GridError::TooSmall(min_r));
    }
    let near_x: Vec<Vec<bool>> = (0..r)
        .map(|i| {
            (0..r)
                .map(|j| {
                    gm.cell(i, j)
                        .iter()
                        .any(|&v| g.neighbors(v).iter().any(|w| piece.removed.contains(w)))
                })
                .collect()
        })
        .collect();
    let mut prefix = vec![vec![0usize; r + 1]; r + 1];
    for i in 0..r {
        for j in 0..r {
            prefix[i + 1][j + 1] = prefix[i][j + 1] + prefix[i + 1][j] - prefix[i][j] + usize::from(near_x[i][j]);
        }
    }
    let touches = |i: usize, j: usize, s: usize| {
        prefix[i + s][j + s] + prefix[i][j] - prefix[i][j + s] - prefix[i + s][j] > 0
    };
    for avoid in [true, false] {
        for s in (min_r..=r).rev() {
            for i in 0..=r - s {
                for j in 0..=r - s {
                    if avoid && touches(i, j, s) {
                        continue;
                    }
                    let window = gm.window(i, j, s);
                    let flat = window.support();
                    if is_flat(g, &flat) {
                        return Ok(FlatGrid {
                            flat,
                            grid: window,
                            removed: piece.removed.clone(),
                        });
                    }
                }
            }
        }
    }
    Err(GridError::TooSmall(min_r))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NestedCycles {
    /// `cycles[0]` is innermost.
    pub cycles: Vec<Vec<Vertex>>,
    /// A vertex strictly inside the innermost cycle.
    pub inside: Vertex,
    /// A vertex outside the outermost cycle, fixing which side is "outside".
    pub outside: Vertex,
}

/// Connects consecutive branch sets into a host cycle through them.
fn host_cycle(g: &Graph, ring: &[&BTreeSet<Vertex>]) -> Vec<Vertex> {
    let k = ring.len();
    // Entry and exit vertex of each branch set along the ring.
    let mut links = Vec::with_capacity(k);
    for i in 0..k {
        let (here, next) = (ring[i], ring[(i + 1) % k]);
        let (x, y) = here
            .iter()
            .find_map(|&x| g.neighbors(x).iter().find(|y| next.contains(y)).map(|&y| (x, y)))
            .expect("adjacent branch sets");
        links.push((x, y));
    }
    let mut cycle = Vec::new();
    for i in 0..k {
        let entry = links[(i + k - 1) % k].1;
        let exit = links[i].0;
        let set = ring[i];
        let path = g
            .shortest_path(entry, exit, |v| set.contains(&v))
            .expect("branch sets are connected");
        cycle.extend(path);
    }
    cycle
}

fn ring_cells(lo: usize, hi: usize) -> Vec<(usize, usize)> {
    let mut cells = Vec::new();
    for j in lo..hi {
        cells.push((lo, j));
    }
    for i in lo..hi {
        cells.push((i, hi));
    }
    for j in (lo + 1..=hi).rev() {
        cells.push((hi, j));
    }
    for i in (lo + 1..=hi).rev() {
        cells.push((i, lo));
    }
    cells
}

/// Concentric cycles of a flat grid, innermost first.
pub fn planarly_nested_sequence(
    g: &Graph,
    genus_budget: usize,
    min_k: usize,
    cfg: &PlanarizingConfig,
) -> Result<NestedCycles, GridError> {
    let flat = flat_grid_minor(g, genus_budget, 2 * min_k + 1, cfg)?;
    let gm = &flat.grid;
    let s = gm.side();
    // With a vertex beyond the window the boundary ring can serve as the
    // outermost cycle; otherwise the outermost ring sits one cell inside.
    let beyond = g
        .vertices()
        .find(|v| !flat.flat.contains(v) && g.neighbors(*v).iter().any(|w| flat.flat.contains(w)));
    let (first, k, outside) = match beyond {
        Some(v) => (0, (s - 1) / 2, v),
        None if s >= 2 * min_k + 3 => (1, (s - 3) / 2, *gm.cell(0, 0).iter().next().expect("nonempty cell")),
        None => return Err(GridError::TooSmall(2 * min_k + 3)),
    };
    let centre = s / 2;
    let mut cycles: Vec<Vec<Vertex>> = (first..first + k)
        .map(|o| {
            let ring: Vec<&BTreeSet<Vertex>> = ring_cells(o, s - 1 - o)
                .into_iter()
                .map(|(i, j)| gm.cell(i, j))
                .collect();
            host_cycle(g, &ring)
        })
        .collect();
    cycles.reverse();
    let inside = *gm.cell(centre, centre).iter().next().expect("nonempty cell");
    let nested = NestedCycles { cycles, inside, outside };
    debug_assert!(nested.validate(g));
    Ok(nested)
}

/// The component of `g − cycle` containing `anchor`, or `None` if `anchor` is on the cycle.
fn side_of(g: &Graph, cycle: &[Vertex], anchor: Vertex) -> Option<BTreeSet<Vertex>> {
    let on: BTreeSet<Vertex> = cycle.iter().copied().collect();
    if on.contains(&anchor) {
        return None;
    }
    Some(g.reach(anchor, |v| !on.contains(&v)).into_iter().collect())
}

/// `g` with the component `part` contracted to one vertex joined to the feet.
pub fn contract_component(g: &Graph, part: &BTreeSet<Vertex>) -> Graph {
    let feet: BTreeSet<Vertex> = part
        .iter()
        .flat_map(|&v| g.neighbors(v).iter().copied())
        .filter(|w| !part.contains(w))
        .collect();
    let mut h = g.without_vertices(part);
    let hub = Vertex(g.fresh_id());
    h.add_vertex(hub);
    for f in feet {
        h.add_edge(hub, f).expect("hub is fresh");
    }
    h
}

impl NestedCycles {
    /// Disjoint cycles, outside components shrinking outward, each
    /// contraction planar, and `inside` strictly inside the innermost cycle.
    pub fn validate(&self, g: &Graph) -> bool {
        let mut seen = BTreeSet::new();
        for c in &self.cycles {
            let ok_cycle = c.len() >= 3
                && (0..c.len()).all(|i| g.has_edge(c[i], c[(i + 1) % c.len()]))
                && c.iter().all(|&v| seen.insert(v));
            if !ok_cycle {
                return false;
            }
        }
        let sides: Option<Vec<BTreeSet<Vertex>>> = self
            .cycles
            .iter()
            .map(|c| side_of(g, c, self.outside))
            .collect();
        let Some(sides) = sides else {
            return false;
        };
        let shrinking = sides.windows(2).all(|w| w[1].is_subset(&w[0]) && w[1] != w[0]);
        let inside_ok = self.cycles.first().is_some_and(|c1| {
            !c1.contains(&self.inside) && !sides[0].contains(&self.inside)
        });
        shrinking && inside_ok && sides.iter().all(|part| is_planar(&contract_component(g, part)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphcore::generators::*;

    #[test]
    fn grid_contains_itself() {
        let g = grid(10, 10);
        let gm = planar_grid_minor(&g);
        assert!(gm.validate(&g));
        assert!(gm.side() >= 5);
    }

    #[test]
    fn star_has_only_a_single_cell() {
        let g = star(9);
        let gm = planar_grid_minor(&g);
        assert!(gm.validate(&g));
        assert_eq!(gm.side(), 1);
    }

    #[test]
    fn surviving_after_row_deletion() {
        let g = grid(6, 6);
        let gm = planar_grid_minor(&g);
        assert_eq!(gm.side(), 6);
        let row: BTreeSet<Vertex> = (0..6).map(|j| grid_id(6, 0, j)).collect();
        let host_row: BTreeSet<Vertex> = (0..6).flat_map(|j| gm.cell(0, j).clone()).collect();
        let sub = surviving_subgrid(&gm, &row);
        assert!(sub.side() >= 5);
        assert!(sub.validate(&g.without_vertices(&host_row)));
    }

    #[test]
    fn one_deleted_cell_costs_at_most_one_row() {
        let g = grid(10, 10);
        let gm = planar_grid_minor(&g);
        for v in [grid_id(10, 0, 0), grid_id(10, 4, 5), grid_id(10, 9, 3)] {
            let sub = surviving_subgrid(&gm, &BTreeSet::from([v]));
            assert!(sub.side() >= 9);
            let host = gm.mapping.branch_sets[&v].clone();
            assert!(sub.validate(&g.without_vertices(&host)));
        }
    }

    #[test]
    fn torus_has_a_nested_sequence() {
        let g = torus_grid(20, 20);
        let nested = planarly_nested_sequence(&g, 2, 3, &PlanarizingConfig::default()).unwrap();
        assert!(nested.cycles.len() >= 3);
        assert!(nested.validate(&g));
    }

    #[test]
    fn surviving_after_scattered_deletions() {
        let g = grid(10, 10);
        let gm = planar_grid_minor(&g);
        let hit: BTreeSet<Vertex> = [(1, 7), (4, 4), (8, 2)].iter().map(|&(i, j)| grid_id(10, i, j)).collect();
        let host_hit: BTreeSet<Vertex> = [(1, 7), (4, 4), (8, 2)].iter().flat_map(|&(i, j)| gm.cell(i, j).clone()).collect();
        let sub = surviving_subgrid(&gm, &hit);
        assert!(sub.side() >= 7);
        assert!(sub.validate(&g.without_vertices(&host_hit)));
    }

    #[test]
    fn nested_cycles_in_a_planar_grid() {
        let g = grid(16, 16);
        let nested = planarly_nested_sequence(&g, 1, 3, &PlanarizingConfig::default()).unwrap();
        assert!(nested.cycles.len() >= 3);
        assert!(nested.validate(&g));
    }

    #[test]
    fn k33_is_too_small() {
        let r = planarly_nested_sequence(&complete_bipartite(3, 3), 1, 2, &PlanarizingConfig::default());
        assert!(matches!(r, Err(GridError::TooSmall(_))));
    }
}
