//! Exact maximum independent set for small sparse graphs.
//!
//! Branch and bound with degree-0/1 reductions, connected-component
//! splitting, max-degree branching, and an upper bound from a greedy clique
//! cover or, when the caller supplies one, a cover by vertex-disjoint cycles.

#[derive(Clone, PartialEq, Eq)]
struct VertexSet {
    words: Vec<u64>,
    len: usize,
}

impl VertexSet {
    fn empty(n: usize) -> Self {
        VertexSet {
            words: vec![0; n.div_ceil(64)],
            len: 0,
        }
    }

    #[inline]
    fn contains(&self, v: u32) -> bool {
        self.words[(v / 64) as usize] >> (v % 64) & 1 == 1
    }

    #[inline]
    fn insert(&mut self, v: u32) {
        if !self.contains(v) {
            self.words[(v / 64) as usize] |= 1 << (v % 64);
            self.len += 1;
        }
    }

    #[inline]
    fn remove(&mut self, v: u32) {
        if self.contains(v) {
            self.words[(v / 64) as usize] &= !(1 << (v % 64));
            self.len -= 1;
        }
    }

    fn iter(&self) -> impl Iterator<Item = u32> + '_ {
        self.words.iter().enumerate().flat_map(|(i, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let b = w.trailing_zeros();
                    w &= w - 1;
                    Some(i as u32 * 64 + b)
                }
            })
        })
    }
}

/// Undirected simple graph on `0..n` given by adjacency lists.
pub struct Graph {
    adj: Vec<Vec<u32>>,
    cycles: Vec<Vec<u32>>,
}

impl Graph {
    /// Builds a graph from adjacency lists; self-loops and repeats are dropped
    /// and the relation is symmetrised.
    pub fn new(adj: Vec<Vec<u32>>) -> Self {
        let n = adj.len();
        let mut sym: Vec<Vec<u32>> = vec![Vec::new(); n];
        for (v, list) in adj.iter().enumerate() {
            for &u in list {
                if u as usize != v {
                    sym[v].push(u);
                    sym[u as usize].push(v as u32);
                }
            }
        }
        for list in &mut sym {
            list.sort_unstable();
            list.dedup();
        }
        Graph {
            adj: sym,
            cycles: Vec::new(),
        }
    }

    /// Adds vertex-disjoint cycles (each listed in cyclic order, consecutive
    /// vertices adjacent) used for a second upper bound. Chords are allowed.
    /// Panics if a listed cycle is not a cycle of the graph.
    pub fn with_cycle_cover(mut self, cycles: Vec<Vec<u32>>) -> Self {
        let mut seen = vec![false; self.len()];
        for c in &cycles {
            for (i, &v) in c.iter().enumerate() {
                assert!(
                    !std::mem::replace(&mut seen[v as usize], true),
                    "vertex {v} covered twice"
                );
                let next = c[(i + 1) % c.len()];
                if c.len() > 1 && next != v {
                    assert!(
                        self.adj[v as usize].binary_search(&next).is_ok(),
                        "{v} and {next} not adjacent"
                    );
                }
            }
        }
        self.cycles = cycles;
        self
    }

    pub fn len(&self) -> usize {
        self.adj.len()
    }

    pub fn is_empty(&self) -> bool {
        self.adj.is_empty()
    }

    pub fn neighbors(&self, v: u32) -> &[u32] {
        &self.adj[v as usize]
    }

    fn degree_in(&self, v: u32, active: &VertexSet) -> usize {
        self.adj[v as usize]
            .iter()
            .filter(|&&u| active.contains(u))
            .count()
    }

    /// A maximum independent set of the subgraph induced by `allowed`
    /// (all vertices when `None`), sorted ascending.
    pub fn maximum_independent_set(&self, allowed: Option<&[bool]>) -> Vec<u32> {
        let mut active = VertexSet::empty(self.len());
        for v in 0..self.len() {
            if allowed.is_none_or(|a| a[v]) {
                active.insert(v as u32);
            }
        }
        let mut best = self.solve(&active);
        best.sort_unstable();
        best
    }

    fn solve(&self, active: &VertexSet) -> Vec<u32> {
        let mut best = self.greedy(active);
        let mut chosen = Vec::new();
        self.branch(active.clone(), &mut chosen, &mut best);
        best
    }

    /// Applies degree-0 and degree-1 reductions in place, returning the
    /// vertices forced into the solution.
    fn reduce(&self, active: &mut VertexSet) -> Vec<u32> {
        let mut taken = Vec::new();
        loop {
            let mut changed = false;
            let candidates: Vec<u32> = active.iter().collect();
            for v in candidates {
                if !active.contains(v) {
                    continue;
                }
                let mut live = self.adj[v as usize].iter().filter(|&&u| active.contains(u));
                match (live.next(), live.next()) {
                    (None, _) => {
                        active.remove(v);
                        taken.push(v);
                        changed = true;
                    }
                    (Some(&u), None) => {
                        active.remove(v);
                        active.remove(u);
                        taken.push(v);
                        changed = true;
                    }
                    _ => {}
                }
            }
            if !changed {
                return taken;
            }
        }
    }

    fn components(&self, active: &VertexSet) -> Vec<VertexSet> {
        let mut seen = VertexSet::empty(self.len());
        let mut comps = Vec::new();
        for start in active.iter() {
            if seen.contains(start) {
                continue;
            }
            let mut comp = VertexSet::empty(self.len());
            let mut stack = vec![start];
            seen.insert(start);
            while let Some(v) = stack.pop() {
                comp.insert(v);
                for &u in &self.adj[v as usize] {
                    if active.contains(u) && !seen.contains(u) {
                        seen.insert(u);
                        stack.push(u);
                    }
                }
            }
            comps.push(comp);
        }
        comps
    }

    /// Number of cliques in a greedy clique cover; an upper bound on the
    /// independence number of the induced subgraph.
    fn clique_cover_bound(&self, active: &VertexSet) -> usize {
        let mut clique_of: Vec<u32> = vec![u32::MAX; self.len()];
        let mut cliques: Vec<Vec<u32>> = Vec::new();
        for v in active.iter() {
            let mut placed = false;
            for &u in &self.adj[v as usize] {
                let c = clique_of[u as usize];
                if c == u32::MAX || !active.contains(u) {
                    continue;
                }
                let members = &cliques[c as usize];
                if members
                    .iter()
                    .all(|&m| self.adj[v as usize].binary_search(&m).is_ok())
                {
                    cliques[c as usize].push(v);
                    clique_of[v as usize] = c;
                    placed = true;
                    break;
                }
            }
            if !placed {
                clique_of[v as usize] = cliques.len() as u32;
                cliques.push(vec![v]);
            }
        }
        cliques.len()
    }

    /// Sum over the cover cycles of the independence number of the active
    /// part of each cycle, ignoring chords; uncovered vertices count one each.
    fn cycle_cover_bound(&self, active: &VertexSet) -> usize {
        let mut covered = 0;
        let mut total = 0;
        for c in &self.cycles {
            let n = c.len();
            let live = c.iter().filter(|&&v| active.contains(v)).count();
            covered += live;
            if live == 0 {
                continue;
            }
            if live == n {
                total += if n == 1 { 1 } else { n / 2 };
                continue;
            }
            // paths left after removing inactive vertices; start after a gap
            let start = c
                .iter()
                .position(|&v| !active.contains(v))
                .expect("some vertex inactive");
            let mut run = 0usize;
            for i in 1..=n {
                if active.contains(c[(start + i) % n]) {
                    run += 1;
                } else {
                    total += run.div_ceil(2);
                    run = 0;
                }
            }
        }
        total + active.len - covered
    }

    fn upper_bound(&self, active: &VertexSet) -> usize {
        let cliques = self.clique_cover_bound(active);
        if self.cycles.is_empty() {
            cliques
        } else {
            cliques.min(self.cycle_cover_bound(active))
        }
    }

    fn greedy(&self, active: &VertexSet) -> Vec<u32> {
        let mut order: Vec<u32> = active.iter().collect();
        order.sort_by_key(|&v| self.degree_in(v, active));
        let mut blocked = VertexSet::empty(self.len());
        let mut out = Vec::new();
        for v in order {
            if blocked.contains(v) {
                continue;
            }
            out.push(v);
            blocked.insert(v);
            for &u in &self.adj[v as usize] {
                blocked.insert(u);
            }
        }
        out
    }

    fn branch(&self, mut active: VertexSet, chosen: &mut Vec<u32>, best: &mut Vec<u32>) {
        let mark = chosen.len();
        chosen.extend(self.reduce(&mut active));

        if active.len == 0 {
            if chosen.len() > best.len() {
                best.clone_from(chosen);
            }
            chosen.truncate(mark);
            return;
        }
        if chosen.len() + self.upper_bound(&active) <= best.len() {
            chosen.truncate(mark);
            return;
        }

        let comps = self.components(&active);
        if comps.len() > 1 {
            let mut total = chosen.clone();
            for comp in &comps {
                total.extend(self.solve(comp));
            }
            if total.len() > best.len() {
                *best = total;
            }
            chosen.truncate(mark);
            return;
        }

        let v = active
            .iter()
            .max_by_key(|&v| (self.degree_in(v, &active), std::cmp::Reverse(v)))
            .expect("non-empty");

        let mut with_v = active.clone();
        with_v.remove(v);
        for &u in &self.adj[v as usize] {
            with_v.remove(u);
        }
        chosen.push(v);
        self.branch(with_v, chosen, best);
        chosen.pop();

        let mut without_v = active;
        without_v.remove(v);
        self.branch(without_v, chosen, best);

        chosen.truncate(mark);
    }
}
