//! Connected-subset enumeration on small graphs.

use crate::error::{Error, Result};

/// An undirected simple graph on `0..n` given by adjacency lists.
#[derive(Clone, Debug, Default)]
pub struct SimpleGraph {
    adj: Vec<Vec<usize>>,
}

impl SimpleGraph {
    pub fn new(n: usize) -> Self {
        SimpleGraph { adj: vec![Vec::new(); n] }
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Self::new(n);
        for &(a, b) in edges {
            g.add_edge(a, b)?;
        }
        Ok(g)
    }

    pub fn add_edge(&mut self, a: usize, b: usize) -> Result<()> {
        let n = self.adj.len();
        if a >= n || b >= n {
            return Err(Error::InvalidParameter(format!("edge ({a}, {b}) outside 0..{n}")));
        }
        if a == b {
            return Err(Error::InvalidParameter(format!("self-loop at {a}")));
        }
        if !self.adj[a].contains(&b) {
            self.adj[a].push(b);
            self.adj[b].push(a);
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.adj.len()
    }

    pub fn is_empty(&self) -> bool {
        self.adj.is_empty()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn adjacency(&self) -> &[Vec<usize>] {
        &self.adj
    }
}

struct Walker<'a, F> {
    adj: &'a [Vec<usize>],
    max: usize,
    set: Vec<usize>,
    in_set: Vec<bool>,
    forbidden: Vec<bool>,
    mark: Vec<bool>,
    visit: F,
}

impl<F: FnMut(&[usize])> Walker<'_, F> {
    // Invariant: `cand` is exactly N(set) minus set minus forbidden. Picking
    // cand[i] and forbidding cand[..i] visits each connected superset once.
    fn grow(&mut self, cand: &[usize]) {
        (self.visit)(&self.set);
        if self.set.len() >= self.max {
            return;
        }
        let mut forbidden_here = Vec::new();
        for (i, &w) in cand.iter().enumerate() {
            let mut next = cand[i + 1..].to_vec();
            for &u in &next {
                self.mark[u] = true;
            }
            self.in_set[w] = true;
            self.set.push(w);
            for &u in &self.adj[w] {
                if !self.in_set[u] && !self.forbidden[u] && !self.mark[u] {
                    self.mark[u] = true;
                    next.push(u);
                }
            }
            for &u in &next {
                self.mark[u] = false;
            }
            self.grow(&next);
            self.set.pop();
            self.in_set[w] = false;
            self.forbidden[w] = true;
            forbidden_here.push(w);
        }
        for w in forbidden_here {
            self.forbidden[w] = false;
        }
    }
}

/// Calls `visit` once for every connected vertex set that contains `root`,
/// avoids vertices with `allowed[v] == false`, and has at most `max_size`
/// elements.
pub fn for_each_connected_set<F: FnMut(&[usize])>(
    adj: &[Vec<usize>],
    root: usize,
    allowed: Option<&[bool]>,
    max_size: usize,
    visit: F,
) {
    let n = adj.len();
    if root >= n || max_size == 0 || allowed.is_some_and(|a| !a[root]) {
        return;
    }
    let forbidden: Vec<bool> = match allowed {
        Some(a) => a.iter().map(|&ok| !ok).collect(),
        None => vec![false; n],
    };
    let mut walker = Walker {
        adj,
        max: max_size,
        set: vec![root],
        in_set: vec![false; n],
        forbidden,
        mark: vec![false; n],
        visit,
    };
    walker.in_set[root] = true;
    let cand: Vec<usize> = adj[root].iter().copied().filter(|&u| !walker.forbidden[u]).collect();
    walker.grow(&cand);
}

/// Number of connected `M`-subsets of `graph` containing `v`.
pub fn count_connected_sets(graph: &SimpleGraph, v: usize, m: usize) -> Result<u64> {
    if v >= graph.len() {
        return Err(Error::InvalidParameter(format!("vertex {v} outside graph of order {}", graph.len())));
    }
    if m == 0 {
        return Err(Error::InvalidParameter("set size must be positive".into()));
    }
    let mut count = 0u64;
    for_each_connected_set(graph.adjacency(), v, None, m, |s| {
        if s.len() == m {
            count += 1;
        }
    });
    Ok(count)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute(graph: &SimpleGraph, v: usize, m: usize) -> u64 {
        let n = graph.len();
        let mut count = 0;
        for mask in 0u32..(1 << n) {
            if mask.count_ones() as usize != m || mask & (1 << v) == 0 {
                continue;
            }
            let mut seen = 1u32 << v;
            let mut stack = vec![v];
            while let Some(u) = stack.pop() {
                for &w in graph.neighbors(u) {
                    if mask & (1 << w) != 0 && seen & (1 << w) == 0 {
                        seen |= 1 << w;
                        stack.push(w);
                    }
                }
            }
            if seen == mask {
                count += 1;
            }
        }
        count
    }

    #[test]
    fn path_and_cycle_counts() {
        let path = SimpleGraph::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        assert_eq!(count_connected_sets(&path, 1, 2).unwrap(), 2);
        let c4 = SimpleGraph::from_edges(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        assert_eq!(count_connected_sets(&c4, 0, 3).unwrap(), 3);
        assert_eq!(count_connected_sets(&c4, 0, 1).unwrap(), 1);
    }

    #[test]
    fn star_counts() {
        let star = SimpleGraph::from_edges(5, &[(0, 1), (0, 2), (0, 3), (0, 4)]).unwrap();
        assert_eq!(count_connected_sets(&star, 0, 3).unwrap(), 6);
        assert_eq!(count_connected_sets(&star, 1, 3).unwrap(), 3);
    }

    #[test]
    fn agrees_with_brute_force_on_grid() {
        let mut g = SimpleGraph::new(12);
        for r in 0..3 {
            for c in 0..4 {
                let i = r * 4 + c;
                if c + 1 < 4 {
                    g.add_edge(i, i + 1).unwrap();
                }
                if r + 1 < 3 {
                    g.add_edge(i, i + 4).unwrap();
                }
            }
        }
        for m in 1..=12 {
            assert_eq!(count_connected_sets(&g, 5, m).unwrap(), brute(&g, 5, m), "m = {m}");
        }
    }

    #[test]
    fn rejects_bad_input() {
        assert!(SimpleGraph::from_edges(2, &[(0, 2)]).is_err());
        assert!(SimpleGraph::from_edges(2, &[(1, 1)]).is_err());
        let g = SimpleGraph::new(2);
        assert!(count_connected_sets(&g, 3, 1).is_err());
        assert!(count_connected_sets(&g, 0, 0).is_err());
    }

    #[test]
    fn allowed_mask_restricts() {
        let path = SimpleGraph::from_edges(4, &[(0, 1), (1, 2), (2, 3)]).unwrap();
        let allowed = [true, true, false, true];
        let mut sets = Vec::new();
        for_each_connected_set(path.adjacency(), 0, Some(&allowed), 4, |s| sets.push(s.to_vec()));
        assert_eq!(sets.len(), 2);
    }
}
