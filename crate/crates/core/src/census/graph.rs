use std::collections::VecDeque;

use num_rational::Ratio;

use crate::cnf::Formula;

/// Variables as vertices, an edge between any two variables sharing a clause.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimalGraph {
    adj: Vec<Vec<u32>>,
}

impl PrimalGraph {
    pub fn new(f: &Formula) -> Self {
        let mut adj: Vec<Vec<u32>> = vec![Vec::new(); f.num_vars()];
        for c in f.clauses() {
            let [a, b, d] = c.vars();
            for (x, y) in [(a, b), (a, d), (b, d)] {
                adj[x].push(y as u32);
                adj[y].push(x as u32);
            }
        }
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
        }
        PrimalGraph { adj }
    }

    pub fn num_vertices(&self) -> usize {
        self.adj.len()
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.adj[v].iter().map(|&u| u as usize)
    }

    pub fn has_edge(&self, x: usize, y: usize) -> bool {
        self.adj[x].binary_search(&(y as u32)).is_ok()
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// Average degree of the subgraph induced by `set`; `None` for an empty
    /// set. Repeated vertices in `set` are counted once.
    pub fn avg_degree(&self, set: &[usize]) -> Option<Ratio<u64>> {
        let mut members: Vec<usize> = set.to_vec();
        members.sort_unstable();
        members.dedup();
        if members.is_empty() {
            return None;
        }
        let mut inside = vec![false; self.adj.len()];
        for &v in &members {
            inside[v] = true;
        }
        let twice_edges: usize = members
            .iter()
            .map(|&v| self.neighbors(v).filter(|&u| inside[u]).count())
            .sum();
        Some(Ratio::new(twice_edges as u64, members.len() as u64))
    }

    /// Hop count of a shortest path, `None` if unreachable.
    pub fn distance(&self, x: usize, y: usize) -> Option<usize> {
        if x == y {
            return Some(0);
        }
        let mut dist = vec![usize::MAX; self.adj.len()];
        let mut queue = VecDeque::new();
        dist[x] = 0;
        queue.push_back(x);
        while let Some(v) = queue.pop_front() {
            for u in self.neighbors(v) {
                if dist[u] == usize::MAX {
                    dist[u] = dist[v] + 1;
                    if u == y {
                        return Some(dist[u]);
                    }
                    queue.push_back(u);
                }
            }
        }
        None
    }

    /// Vertices at distance `1..=radius` from `x`, with their distances.
    pub fn ball(&self, x: usize, radius: usize) -> Vec<(usize, usize)> {
        let mut seen = std::collections::HashMap::new();
        seen.insert(x, 0usize);
        let mut frontier = vec![x];
        let mut out = Vec::new();
        for d in 1..=radius {
            let mut next = Vec::new();
            for &v in &frontier {
                for u in self.neighbors(v) {
                    if let std::collections::hash_map::Entry::Vacant(e) = seen.entry(u) {
                        e.insert(d);
                        next.push(u);
                        out.push((u, d));
                    }
                }
            }
            if next.is_empty() {
                break;
            }
            frontier = next;
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triangle() {
        let f = Formula::from_dimacs_clauses(3, &[[1, 2, 3]]).unwrap();
        let g = PrimalGraph::new(&f);
        assert!((0..3).all(|v| g.degree(v) == 2));
        assert_eq!(g.edge_count(), 3);
        assert_eq!(g.avg_degree(&[0, 1, 2]), Some(Ratio::new(2, 1)));
        assert_eq!(g.avg_degree(&[0, 1]), Some(Ratio::new(1, 1)));
        assert_eq!(g.avg_degree(&[]), None);
        assert_eq!(g.distance(1, 1), Some(0));
    }

    #[test]
    fn path_distance_and_unreachable() {
        let f = Formula::from_dimacs_clauses(7, &[[1, 2, 3], [3, 4, 5]]).unwrap();
        let g = PrimalGraph::new(&f);
        assert_eq!(g.distance(0, 4), Some(2));
        assert_eq!(g.distance(4, 0), Some(2));
        assert_eq!(g.distance(0, 6), None);
        assert_eq!(g.max_degree(), 4);
        let mut b = g.ball(0, 1);
        b.sort();
        assert_eq!(b, vec![(1, 1), (2, 1)]);
        assert_eq!(g.ball(0, 2).len(), 4);
    }

    #[test]
    fn duplicate_clauses_do_not_duplicate_edges() {
        let f = Formula::from_dimacs_clauses(3, &[[1, 2, 3], [-1, 2, -3]]).unwrap();
        let g = PrimalGraph::new(&f);
        assert_eq!(g.edge_count(), 3);
    }
}
