//! Exhaustive enumeration of odd minimal cutsets on small planar boxes.

use std::collections::VecDeque;

use super::connected::for_each_connected_set;
use super::EdgeCutset;
use crate::error::{Error, Result};
use crate::lattice::{LatticeBox, Parity, Vertex};

/// Largest box radius accepted by [`enumerate_omcut`].
pub const OMCUT_MAX_N: usize = 3;

fn complement_connected(lattice: &LatticeBox, inner: &[bool]) -> bool {
    let mut seen = vec![false; lattice.len()];
    let mut queue: VecDeque<usize> = VecDeque::new();
    let start = lattice.indices().find(|&i| lattice.is_boundary(i)).expect("box has a boundary");
    seen[start] = true;
    queue.push_back(start);
    while let Some(i) = queue.pop_front() {
        for w in lattice.neighbor_indices(i) {
            if !seen[w] && !inner[w] {
                seen[w] = true;
                queue.push_back(w);
            }
        }
    }
    lattice.indices().all(|i| inner[i] || seen[i])
}

/// All odd minimal cutsets separating `x` from the boundary, each once,
/// sorted by size and then by edge list.
///
/// An inner region with an odd boundary is the closed neighbourhood of its
/// even vertices, and those even vertices form a set connected at distance
/// two. The search grows such even sets from `x` over the even vertices
/// whose closed neighbourhood avoids the boundary, then keeps the regions
/// whose complement is connected.
pub fn enumerate_omcut(lattice: LatticeBox, x: &Vertex) -> Result<Vec<EdgeCutset>> {
    if lattice.d != 2 || lattice.n > OMCUT_MAX_N {
        return Err(Error::Guard(format!(
            "cutset enumeration needs d = 2 and n <= {OMCUT_MAX_N}, got {lattice}"
        )));
    }
    lattice.check_dim(x)?;
    let xi = lattice.index_of(x).ok_or_else(|| Error::OutsideBox(x.clone()))?;
    if lattice.parity_of(xi) != Parity::Even {
        return Err(Error::AnchorOdd(x.clone()));
    }
    let admissible: Vec<bool> = lattice
        .indices()
        .map(|i| {
            lattice.parity_of(i) == Parity::Even
                && !lattice.is_boundary(i)
                && lattice.neighbor_indices(i).all(|w| !lattice.is_boundary(w))
        })
        .collect();
    if !admissible[xi] {
        return Ok(Vec::new());
    }
    let adj: Vec<Vec<usize>> = lattice
        .indices()
        .map(|i| {
            if !admissible[i] {
                return Vec::new();
            }
            let mut out: Vec<usize> = lattice
                .neighbor_indices(i)
                .flat_map(|w| lattice.neighbor_indices(w).collect::<Vec<_>>())
                .filter(|&u| u != i && admissible[u])
                .collect();
            out.sort_unstable();
            out.dedup();
            out
        })
        .collect();

    let mut found = Vec::new();
    for_each_connected_set(&adj, xi, Some(&admissible), lattice.len(), |evens| {
        let mut inner = vec![false; lattice.len()];
        for &e in evens {
            inner[e] = true;
            for w in lattice.neighbor_indices(e) {
                inner[w] = true;
            }
        }
        if complement_connected(&lattice, &inner) {
            found.push(EdgeCutset::from_inner_region(lattice, xi, inner));
        }
    });
    found.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.edge_keys().cmp(b.edge_keys())));
    Ok(found)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cutset::{is_minimal_cutset, is_odd_cutset};

    #[test]
    fn n2_has_only_the_plus() {
        let b = LatticeBox::new(2, 2).unwrap();
        let all = enumerate_omcut(b, &Vertex::origin(2)).unwrap();
        assert_eq!(all.len(), 1);
        assert_eq!(all[0].len(), 12);
        assert_eq!(all[0].inner_indices().len(), 5);
    }

    #[test]
    fn n3_cutsets_are_odd_minimal_and_large() {
        let b = LatticeBox::new(2, 3).unwrap();
        let all = enumerate_omcut(b, &Vertex::origin(2)).unwrap();
        assert!(all.len() > 1);
        for g in &all {
            assert!(is_minimal_cutset(g).unwrap());
            assert!(is_odd_cutset(g));
            assert!(g.len() >= 12);
        }
        for w in all.windows(2) {
            assert!(w[0] != w[1]);
        }
    }

    #[test]
    fn guards_and_anchor_checks() {
        assert!(matches!(
            enumerate_omcut(LatticeBox::new(2, 4).unwrap(), &Vertex::origin(2)),
            Err(Error::Guard(_))
        ));
        assert!(matches!(
            enumerate_omcut(LatticeBox::new(3, 2).unwrap(), &Vertex::origin(3)),
            Err(Error::Guard(_))
        ));
        let b = LatticeBox::new(2, 3).unwrap();
        assert!(matches!(enumerate_omcut(b, &Vertex::new(vec![1, 0])), Err(Error::AnchorOdd(_))));
        assert!(enumerate_omcut(b, &Vertex::new(vec![2, 2])).unwrap().is_empty());
    }
}
