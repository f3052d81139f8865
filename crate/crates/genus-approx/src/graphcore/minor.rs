use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::{Graph, Vertex};

/// Branch sets witnessing `minor` as a minor of some host graph.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinorMapping {
    #[serde(skip)]
    pub minor: Graph,
    pub branch_sets: BTreeMap<Vertex, BTreeSet<Vertex>>,
}

impl MinorMapping {
    pub fn identity(g: &Graph) -> Self {
        MinorMapping {
            minor: g.clone(),
            branch_sets: g.vertices().map(|v| (v, BTreeSet::from([v]))).collect(),
        }
    }

    /// All host vertices used by some branch set.
    pub fn support(&self) -> BTreeSet<Vertex> {
        self.branch_sets.values().flatten().copied().collect()
    }
}

/// Checks disjointness, connectivity of every branch set, and that each
/// minor edge is realised by a host edge between the two branch sets.
pub fn verify_minor_mapping(host: &Graph, mm: &MinorMapping) -> bool {
    if mm.minor.vertices().any(|v| !mm.branch_sets.contains_key(&v)) {
        return false;
    }
    let mut owner: BTreeMap<Vertex, Vertex> = BTreeMap::new();
    for (&m, set) in &mm.branch_sets {
        if set.is_empty() || !mm.minor.contains(m) {
            return false;
        }
        for &h in set {
            if !host.contains(h) || owner.insert(h, m).is_some() {
                return false;
            }
        }
    }
    for set in mm.branch_sets.values() {
        let start = *set.iter().next().expect("nonempty");
        if host.reach(start, |w| set.contains(&w)).len() != set.len() {
            return false;
        }
    }
    mm.minor.edges().all(|e| {
        let (a, b) = e.ends();
        mm.branch_sets[&a].iter().any(|&x| {
            host.neighbors(x)
                .iter()
                .any(|y| owner.get(y) == Some(&b))
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphcore::generators::{complete, cycle, grid, path};

    #[test]
    fn identity_is_valid() {
        let g = grid(3, 3);
        assert!(verify_minor_mapping(&g, &MinorMapping::identity(&g)));
    }

    #[test]
    fn disconnected_branch_set_fails() {
        let host = path(3);
        let minor = Graph::from_edges([]).map(|mut g| {
            g.add_vertex(Vertex(0));
            g
        });
        let mm = MinorMapping {
            minor: minor.unwrap(),
            branch_sets: BTreeMap::from([(Vertex(0), BTreeSet::from([Vertex(0), Vertex(2)]))]),
        };
        assert!(!verify_minor_mapping(&host, &mm));
    }

    #[test]
    fn cycle_contracts_to_triangle() {
        let host = cycle(6);
        let mm = MinorMapping {
            minor: complete(3),
            branch_sets: BTreeMap::from([
                (Vertex(0), BTreeSet::from([Vertex(0), Vertex(1)])),
                (Vertex(1), BTreeSet::from([Vertex(2), Vertex(3)])),
                (Vertex(2), BTreeSet::from([Vertex(4), Vertex(5)])),
            ]),
        };
        assert!(verify_minor_mapping(&host, &mm));
        let mut overlapping = mm.clone();
        overlapping
            .branch_sets
            .get_mut(&Vertex(2))
            .unwrap()
            .insert(Vertex(3));
        assert!(!verify_minor_mapping(&host, &overlapping));
    }

    #[test]
    fn missing_witness_edge_fails() {
        let host = path(4);
        let mm = MinorMapping {
            minor: complete(3),
            branch_sets: BTreeMap::from([
                (Vertex(0), BTreeSet::from([Vertex(0)])),
                (Vertex(1), BTreeSet::from([Vertex(1), Vertex(2)])),
                (Vertex(2), BTreeSet::from([Vertex(3)])),
            ]),
        };
        assert!(!verify_minor_mapping(&host, &mm));
    }
}
