//! Finite hypergraphs on at most 64 vertices, with exact coloring searches.
//!
//! Vertices are `0..n`. Edges are stored as [`VertexSet`] masks, sorted in
//! colexicographic order and deduplicated, so edge indices are stable across
//! runs. The text format and the CLI shift everything to 1-based labels.

use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::vset::VertexSet;

/// Node limit for exhaustive searches.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchBudget {
    pub max_nodes: u64,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget { max_nodes: 200_000_000 }
    }
}

impl SearchBudget {
    pub fn nodes(max_nodes: u64) -> Self {
        SearchBudget { max_nodes }
    }
}

pub(crate) struct NodeCounter {
    used: u64,
    max: u64,
}

impl NodeCounter {
    pub(crate) fn new(budget: SearchBudget) -> Self {
        NodeCounter { used: 0, max: budget.max_nodes }
    }

    /// Counts one node; false once the budget is spent.
    pub(crate) fn tick(&mut self) -> bool {
        self.used += 1;
        self.used <= self.max
    }

    pub(crate) fn used(&self) -> u64 {
        self.used
    }

    pub(crate) fn remaining(&self) -> u64 {
        self.max.saturating_sub(self.used)
    }

    pub(crate) fn consume(&mut self, n: u64) {
        self.used += n;
    }
}

#[derive(Clone, Debug)]
pub struct Hypergraph {
    n: usize,
    edges: Vec<VertexSet>,
    uniformity: Option<usize>,
    incident: Vec<Vec<usize>>,
    neighbors: Vec<VertexSet>,
    lookup: HashSet<VertexSet>,
}

impl PartialEq for Hypergraph {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.edges == other.edges && self.uniformity == other.uniformity
    }
}

impl Eq for Hypergraph {}

impl Hypergraph {
    /// Builds a hypergraph from 0-based vertex lists, canonicalizing and
    /// deduplicating edges. Uniformity is detected when all edges agree.
    pub fn new<I, E>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = E>,
        E: IntoIterator<Item = usize>,
    {
        if n == 0 {
            return Err(Error::NoVertices);
        }
        if n > VertexSet::CAPACITY {
            return Err(Error::TooManyVertices { n, max: VertexSet::CAPACITY });
        }
        let mut sets = Vec::new();
        for e in edges {
            let mut s = VertexSet::EMPTY;
            for v in e {
                if v >= n {
                    return Err(Error::VertexOutOfRange { vertex: v, n });
                }
                s.insert(v);
            }
            sets.push(s);
        }
        Self::from_sets(n, sets)
    }

    pub fn from_sets(n: usize, mut edges: Vec<VertexSet>) -> Result<Self> {
        if n == 0 {
            return Err(Error::NoVertices);
        }
        if n > VertexSet::CAPACITY {
            return Err(Error::TooManyVertices { n, max: VertexSet::CAPACITY });
        }
        let full = VertexSet::full(n);
        for e in &edges {
            if e.is_empty() {
                return Err(Error::EmptyEdge);
            }
            if !e.is_subset(full) {
                let vertex = e.difference(full).first().unwrap();
                return Err(Error::VertexOutOfRange { vertex, n });
            }
        }
        edges.sort_unstable();
        edges.dedup();
        let uniformity = match edges.first() {
            Some(first) if edges.iter().all(|e| e.len() == first.len()) => Some(first.len()),
            _ => None,
        };
        let mut incident = vec![Vec::new(); n];
        let mut neighbors = vec![VertexSet::EMPTY; n];
        for (i, e) in edges.iter().enumerate() {
            for v in e.iter() {
                incident[v].push(i);
                neighbors[v] = neighbors[v].union(e.without(v));
            }
        }
        let lookup = edges.iter().copied().collect();
        Ok(Hypergraph { n, edges, uniformity, incident, neighbors, lookup })
    }

    /// Declares the hypergraph `r`-uniform; needed for edgeless instances.
    pub fn with_uniformity(mut self, r: usize) -> Result<Self> {
        if r == 0 {
            return Err(Error::InvalidParameters("uniformity must be positive".into()));
        }
        if let Some(e) = self.edges.iter().find(|e| e.len() != r) {
            return Err(Error::UniformityMismatch { size: e.len(), r });
        }
        self.uniformity = Some(r);
        Ok(self)
    }

    /// `K_n^r`: all `r`-subsets of `n` vertices.
    pub fn complete(n: usize, r: usize) -> Result<Self> {
        Self::from_sets(n, crate::vset::k_subsets(n, r))?.with_uniformity(r)
    }

    pub fn cycle(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::InvalidParameters("cycles need at least 3 vertices".into()));
        }
        Self::new(n, (0..n).map(|i| [i, (i + 1) % n]))
    }

    pub fn edgeless(n: usize, r: usize) -> Result<Self> {
        Self::from_sets(n, Vec::new())?.with_uniformity(r)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn vertex_set(&self) -> VertexSet {
        VertexSet::full(self.n)
    }

    pub fn edges(&self) -> &[VertexSet] {
        &self.edges
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn uniformity(&self) -> Option<usize> {
        self.uniformity
    }

    pub fn require_uniformity(&self) -> Result<usize> {
        self.uniformity.ok_or(Error::NotUniform)
    }

    pub fn has_edge(&self, e: VertexSet) -> bool {
        self.lookup.contains(&e)
    }

    /// Indices of the edges containing `v`.
    pub fn incident(&self, v: usize) -> &[usize] {
        &self.incident[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.incident[v].len()
    }

    /// Vertices sharing an edge with `v`.
    pub fn neighbors(&self, v: usize) -> VertexSet {
        self.neighbors[v]
    }

    fn check_set(&self, s: VertexSet) -> Result<()> {
        match s.difference(self.vertex_set()).first() {
            Some(vertex) => Err(Error::VertexOutOfRange { vertex, n: self.n }),
            None => Ok(()),
        }
    }

    /// True when some edge lies inside `s`.
    pub fn spans_edge(&self, s: VertexSet) -> bool {
        self.edges.iter().any(|e| e.is_subset(s))
    }

    /// True when adding `v` to `s` creates an edge inside `s ∪ {v}` through `v`.
    pub fn closes_edge(&self, s: VertexSet, v: usize) -> bool {
        let s = s.with(v);
        self.incident[v].iter().any(|&i| self.edges[i].is_subset(s))
    }

    /// `H[U]`, relabeled to `0..|U|` in increasing vertex order.
    pub fn induced(&self, u: VertexSet) -> Result<Induced> {
        self.check_set(u)?;
        let vertices = u.to_vec();
        let mut pos = vec![usize::MAX; self.n];
        for (i, &v) in vertices.iter().enumerate() {
            pos[v] = i;
        }
        let edges = self.edges.iter().filter(|e| e.is_subset(u)).map(|e| e.iter().map(|v| pos[v]).collect()).collect();
        let mut graph = Hypergraph::from_sets(vertices.len().max(1), edges)?;
        if let Some(r) = self.uniformity {
            graph = graph.with_uniformity(r)?;
        }
        Ok(Induced { graph, vertices })
    }

    /// `H[U_1, …, U_q]`: edges inside the union meeting every part at most once.
    pub fn partite_subhypergraph(&self, parts: &PartiteFamily) -> Result<PartiteSubhypergraph> {
        self.check_set(parts.union())?;
        let union = parts.union();
        let edges = self.edges.iter().filter(|e| e.is_subset(union) && parts.parts.iter().all(|p| e.intersection(*p).len() <= 1)).copied().collect();
        Ok(PartiteSubhypergraph { parts: parts.clone(), edges })
    }

    /// Whether every `r`-set meeting each part at most once is an edge.
    /// Vacuously true with fewer than `r` nonempty parts.
    pub fn is_complete_partite(&self, parts: &PartiteFamily, r: usize) -> bool {
        let nonempty: Vec<VertexSet> = parts.parts.iter().copied().filter(|p| !p.is_empty()).collect();
        if nonempty.len() < r {
            return true;
        }
        fn rec(h: &Hypergraph, parts: &[VertexSet], start: usize, need: usize, acc: VertexSet) -> bool {
            if need == 0 {
                return h.has_edge(acc);
            }
            (start..parts.len()).all(|i| parts.len() - i < need || parts[i].iter().all(|v| rec(h, parts, i + 1, need - 1, acc.with(v))))
        }
        rec(self, &nonempty, 0, r, VertexSet::EMPTY)
    }

    /// Whether `v` can join part `i` of a complete `r`-partite family and keep
    /// it complete. `v` must not already belong to any part.
    pub fn can_join_part(&self, parts: &[VertexSet], i: usize, v: usize, r: usize) -> bool {
        if parts.iter().any(|p| p.contains(v)) {
            return false;
        }
        if r == 2 {
            let others = parts.iter().enumerate().filter(|&(j, _)| j != i).fold(VertexSet::EMPTY, |acc, (_, p)| acc.union(*p));
            return others.is_subset(self.neighbors[v]);
        }
        let others: Vec<VertexSet> = parts.iter().enumerate().filter(|&(j, p)| j != i && !p.is_empty()).map(|(_, p)| *p).collect();
        if others.len() + 1 < r {
            return true;
        }
        fn rec(h: &Hypergraph, parts: &[VertexSet], start: usize, need: usize, acc: VertexSet) -> bool {
            if need == 0 {
                return h.has_edge(acc);
            }
            (start..parts.len()).all(|j| parts.len() - j < need || parts[j].iter().all(|u| rec(h, parts, j + 1, need - 1, acc.with(u))))
        }
        rec(self, &others, 0, r - 1, VertexSet::singleton(v))
    }

    /// Largest `m` such that some `m`-set has all its `r`-subsets as edges.
    /// Sets smaller than `r` count as complete, so an instance without any
    /// complete `r`-set reports `min(n, r - 1)`.
    pub fn clique_number(&self) -> Result<usize> {
        let r = self.require_uniformity()?;
        let mut best = 0;
        let mut clique = Vec::new();
        self.clique_rec(r, 0, &mut clique, VertexSet::EMPTY, &mut best);
        Ok(best)
    }

    fn clique_rec(&self, r: usize, start: usize, clique: &mut Vec<usize>, set: VertexSet, best: &mut usize) {
        *best = (*best).max(clique.len());
        for v in start..self.n {
            if clique.len() + (self.n - v) <= *best {
                return;
            }
            if clique.len() + 1 >= r && !self.extends_clique(r, set, v) {
                continue;
            }
            clique.push(v);
            self.clique_rec(r, v + 1, clique, set.with(v), best);
            clique.pop();
        }
    }

    fn extends_clique(&self, r: usize, set: VertexSet, v: usize) -> bool {
        if r == 2 {
            return set.is_subset(self.neighbors[v]);
        }
        crate::vset::k_subsets(set.len(), r - 1).into_iter().all(|idx| {
            let members = set.to_vec();
            let s: VertexSet = idx.iter().map(|i| members[i]).collect();
            self.has_edge(s.with(v))
        })
    }

    /// Largest vertex set spanning no edge.
    pub fn independence_number(&self) -> usize {
        fn rec(h: &Hypergraph, v: usize, set: VertexSet, best: &mut usize) {
            if set.len() + (h.n - v) <= *best {
                return;
            }
            if v == h.n {
                *best = set.len();
                return;
            }
            if !h.closes_edge(set, v) {
                rec(h, v + 1, set.with(v), best);
            }
            rec(h, v + 1, set, best);
        }
        let mut best = 0;
        rec(self, 0, VertexSet::EMPTY, &mut best);
        best
    }

    pub fn is_proper(&self, c: &Coloring) -> Result<bool> {
        Ok(self.monochromatic_edge(c)?.is_none())
    }

    /// First monochromatic edge, if any.
    pub fn monochromatic_edge(&self, c: &Coloring) -> Result<Option<VertexSet>> {
        if c.colors.len() != self.n {
            return Err(Error::PartialColoring { got: c.colors.len(), n: self.n });
        }
        Ok(self.edges.iter().copied().find(|e| {
            let first = c.colors[e.first().unwrap()];
            e.iter().all(|v| c.colors[v] == first)
        }))
    }

    pub fn require_proper(&self, c: &Coloring) -> Result<()> {
        match self.monochromatic_edge(c)? {
            Some(e) => Err(Error::ImproperColoring(e.to_vec())),
            None => Ok(()),
        }
    }

    /// Decides `k`-colorability by backtracking. Vertices are picked by
    /// fewest remaining colors (ties: higher degree, then lower index), colors
    /// are tried in index order and a new color is opened only after all
    /// previously used ones.
    pub fn colorability(&self, k: usize, budget: SearchBudget) -> Colorability {
        let mut counter = NodeCounter::new(budget);
        let mut state = ColorState { color: vec![usize::MAX; self.n], class: vec![VertexSet::EMPTY; k], used: 0 };
        match self.color_rec(k, &mut state, &mut counter) {
            Some(true) => Colorability::Colorable(Coloring { colors: state.color, palette: k }),
            Some(false) => Colorability::NotColorable,
            None => Colorability::Unknown,
        }
    }

    fn forbidden(&self, v: usize, c: usize, class: &[VertexSet]) -> bool {
        self.incident[v].iter().any(|&i| self.edges[i].without(v).is_subset(class[c]))
    }

    fn color_rec(&self, k: usize, st: &mut ColorState, counter: &mut NodeCounter) -> Option<bool> {
        if !counter.tick() {
            return None;
        }
        let limit = (st.used + 1).min(k);
        let mut pick: Option<(usize, usize, usize)> = None; // (vertex, allowed mask, allowed count)
        for v in 0..self.n {
            if st.color[v] != usize::MAX {
                continue;
            }
            let mut mask = 0usize;
            for c in 0..limit {
                if !self.forbidden(v, c, &st.class) {
                    mask |= 1 << c;
                }
            }
            let cnt = mask.count_ones() as usize;
            if cnt == 0 {
                return Some(false);
            }
            let better = match pick {
                None => true,
                Some((u, _, best)) => cnt < best || (cnt == best && self.degree(v) > self.degree(u)),
            };
            if better {
                pick = Some((v, mask, cnt));
            }
        }
        let Some((v, mask, _)) = pick else {
            return Some(true);
        };
        for c in 0..limit {
            if mask >> c & 1 == 0 {
                continue;
            }
            st.color[v] = c;
            st.class[c].insert(v);
            let prev_used = st.used;
            st.used = st.used.max(c + 1);
            match self.color_rec(k, st, counter) {
                Some(true) => return Some(true),
                None => return None,
                Some(false) => {}
            }
            st.used = prev_used;
            st.class[c].remove(v);
            st.color[v] = usize::MAX;
        }
        Some(false)
    }

    /// Exact chromatic number with a witness coloring.
    pub fn chromatic_number(&self, budget: SearchBudget) -> ChromaticResult {
        if self.edges.iter().any(|e| e.len() == 1) {
            return ChromaticResult { value: ChromaticNumber::Infinite, witness: None, exact: true, lower: 0 };
        }
        let mut counter_budget = budget;
        for k in 1..=self.n {
            match self.colorability(k, counter_budget) {
                Colorability::Colorable(c) => return ChromaticResult { value: ChromaticNumber::Finite(k), witness: Some(c), exact: true, lower: k },
                Colorability::NotColorable => {}
                Colorability::Unknown => {
                    let greedy = self.greedy_coloring();
                    let upper = greedy.palette;
                    return ChromaticResult { value: ChromaticNumber::Finite(upper), witness: Some(greedy), exact: false, lower: k };
                }
            }
            counter_budget = budget;
        }
        unreachable!("n colors always suffice without singleton edges")
    }

    /// First-fit coloring in vertex order.
    pub fn greedy_coloring(&self) -> Coloring {
        let mut class: Vec<VertexSet> = Vec::new();
        let mut colors = vec![0; self.n];
        for v in 0..self.n {
            let c = (0..).find(|&c| c >= class.len() || !self.forbidden(v, c, &class)).unwrap();
            if c == class.len() {
                class.push(VertexSet::EMPTY);
            }
            class[c].insert(v);
            colors[v] = c;
        }
        Coloring { colors, palette: class.len() }
    }

    /// Closed neighborhoods `N[e ∖ {v}]` over all edges `e` and `v ∈ e`,
    /// deduplicated. For graphs these are the closed neighborhoods `N[u]`
    /// of non-isolated vertices.
    pub fn local_neighborhoods(&self) -> Vec<VertexSet> {
        let mut out: Vec<VertexSet> = Vec::new();
        for e in &self.edges {
            for v in e.iter() {
                let x = e.without(v);
                let mut closed = x;
                for f in &self.edges {
                    let rest = f.difference(x);
                    if rest.len() == 1 {
                        closed = closed.union(rest);
                    }
                }
                out.push(closed);
            }
        }
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Palette size seen by the worst closed neighborhood under `c`.
    pub fn local_palette(&self, c: &Coloring) -> usize {
        self.local_neighborhoods().iter().map(|s| s.iter().fold(0u64, |acc, v| acc | 1 << c.colors[v]).count_ones() as usize).max().unwrap_or(0)
    }

    /// Exact local chromatic number by branch and bound over proper colorings
    /// (at most `n` colors, canonical up to color permutation).
    pub fn local_chromatic_number(&self, budget: SearchBudget) -> Result<LocalChromaticResult> {
        if self.edges.is_empty() {
            return Err(Error::Precondition("local chromatic number needs at least one edge".into()));
        }
        if self.edges.iter().any(|e| e.len() == 1) {
            return Err(Error::Precondition("a singleton edge admits no proper coloring".into()));
        }
        let hoods = self.local_neighborhoods();
        let mut member_of = vec![Vec::new(); self.n];
        for (i, s) in hoods.iter().enumerate() {
            for v in s.iter() {
                member_of[v].push(i);
            }
        }
        let mut search = LocalSearch {
            h: self,
            hoods: &hoods,
            member_of: &member_of,
            color: vec![usize::MAX; self.n],
            class: vec![VertexSet::EMPTY; self.n],
            best: self.n + 1,
            best_coloring: None,
            counter: NodeCounter::new(budget),
            exhausted: false,
        };
        search.rec(0, 0);
        let witness = search.best_coloring.expect("some proper coloring exists");
        Ok(LocalChromaticResult { value: search.best, witness, exact: !search.exhausted })
    }

    /// All proper colorings with at most `max_colors` colors, canonical up to
    /// color permutation (colors appear in first-occurrence order), stopping
    /// after `limit` colorings.
    pub fn proper_colorings(&self, max_colors: usize, limit: usize) -> Vec<Coloring> {
        let mut out = Vec::new();
        let mut color = vec![usize::MAX; self.n];
        let mut class = vec![VertexSet::EMPTY; max_colors];
        self.enum_rec(0, 0, max_colors, limit, &mut color, &mut class, &mut out);
        out
    }

    #[allow(clippy::too_many_arguments)]
    fn enum_rec(&self, v: usize, used: usize, k: usize, limit: usize, color: &mut Vec<usize>, class: &mut Vec<VertexSet>, out: &mut Vec<Coloring>) {
        if out.len() >= limit {
            return;
        }
        if v == self.n {
            out.push(Coloring { colors: color.clone(), palette: used });
            return;
        }
        for c in 0..(used + 1).min(k) {
            if self.forbidden(v, c, class) {
                continue;
            }
            color[v] = c;
            class[c].insert(v);
            self.enum_rec(v + 1, used.max(c + 1), k, limit, color, class, out);
            class[c].remove(v);
            color[v] = usize::MAX;
        }
    }

    /// A random proper coloring from `palette` colors: vertices in random
    /// order, each given a uniformly random color that closes no
    /// monochromatic edge. Restarts on dead ends; `None` after 1000 tries.
    pub fn random_proper_coloring<R: Rng + ?Sized>(&self, palette: usize, rng: &mut R) -> Option<Coloring> {
        if palette == 0 {
            return None;
        }
        let mut order: Vec<usize> = (0..self.n).collect();
        'attempt: for _ in 0..1000 {
            order.shuffle(rng);
            let mut class = vec![VertexSet::EMPTY; palette];
            let mut colors = vec![0; self.n];
            for &v in &order {
                let allowed: Vec<usize> = (0..palette).filter(|&c| !self.forbidden(v, c, &class)).collect();
                let Some(&c) = allowed.choose(rng) else {
                    continue 'attempt;
                };
                class[c].insert(v);
                colors[v] = c;
            }
            return Some(Coloring { colors, palette });
        }
        None
    }
}

struct ColorState {
    color: Vec<usize>,
    class: Vec<VertexSet>,
    used: usize,
}

struct LocalSearch<'a> {
    h: &'a Hypergraph,
    hoods: &'a [VertexSet],
    member_of: &'a [Vec<usize>],
    color: Vec<usize>,
    class: Vec<VertexSet>,
    best: usize,
    best_coloring: Option<Coloring>,
    counter: NodeCounter,
    exhausted: bool,
}

impl LocalSearch<'_> {
    fn palette_of(&self, s: VertexSet) -> usize {
        s.iter().filter(|&v| self.color[v] != usize::MAX).fold(0u64, |acc, v| acc | 1 << self.color[v]).count_ones() as usize
    }

    fn rec(&mut self, v: usize, used: usize) {
        if self.exhausted || !self.counter.tick() {
            self.exhausted = true;
            return;
        }
        let n = self.h.n;
        if v == n {
            let value = self.hoods.iter().map(|&s| self.palette_of(s)).max().unwrap_or(0);
            if value < self.best {
                self.best = value;
                self.best_coloring = Some(Coloring { colors: self.color.clone(), palette: used });
            }
            return;
        }
        for c in 0..(used + 1).min(n) {
            if self.h.forbidden(v, c, &self.class) {
                continue;
            }
            self.color[v] = c;
            self.class[c].insert(v);
            let ok = self.member_of[v].iter().all(|&i| self.palette_of(self.hoods[i]) < self.best);
            if ok {
                self.rec(v + 1, used.max(c + 1));
            }
            self.class[c].remove(v);
            self.color[v] = usize::MAX;
        }
    }
}

/// Outcome of a `k`-colorability test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Colorability {
    Colorable(Coloring),
    NotColorable,
    Unknown,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ChromaticNumber {
    Finite(usize),
    /// Some edge is a singleton, so no proper coloring exists.
    Infinite,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChromaticResult {
    /// Exact value, or the best upper bound found when `exact` is false.
    pub value: ChromaticNumber,
    pub witness: Option<Coloring>,
    pub exact: bool,
    /// Certified lower bound (every smaller palette was refuted).
    pub lower: usize,
}

impl ChromaticResult {
    pub fn finite(&self) -> Option<usize> {
        match self.value {
            ChromaticNumber::Finite(k) => Some(k),
            ChromaticNumber::Infinite => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalChromaticResult {
    pub value: usize,
    pub witness: Coloring,
    pub exact: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Coloring {
    colors: Vec<usize>,
    palette: usize,
}

impl Coloring {
    pub fn new(colors: Vec<usize>, palette: usize) -> Result<Self> {
        if let Some(&color) = colors.iter().find(|&&c| c >= palette) {
            return Err(Error::ColorOutOfPalette { color, palette });
        }
        Ok(Coloring { colors, palette })
    }

    /// Palette sized to the largest color used.
    pub fn from_colors(colors: Vec<usize>) -> Self {
        let palette = colors.iter().max().map_or(0, |m| m + 1);
        Coloring { colors, palette }
    }

    pub fn color(&self, v: usize) -> usize {
        self.colors[v]
    }

    pub fn colors(&self) -> &[usize] {
        &self.colors
    }

    pub fn palette(&self) -> usize {
        self.palette
    }

    /// Number of distinct colors actually used.
    pub fn used(&self) -> usize {
        let mut seen: Vec<usize> = self.colors.clone();
        seen.sort_unstable();
        seen.dedup();
        seen.len()
    }

    /// Bit mask of the colors appearing on `s` (palettes up to 64).
    pub fn color_mask(&self, s: VertexSet) -> u64 {
        s.iter().fold(0, |acc, v| acc | 1 << self.colors[v])
    }
}

/// An ordered family `(U_1, …, U_q)` of pairwise disjoint vertex sets.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PartiteFamily {
    parts: Vec<VertexSet>,
}

impl PartiteFamily {
    pub fn new(parts: Vec<VertexSet>) -> Result<Self> {
        for i in 0..parts.len() {
            for j in i + 1..parts.len() {
                if parts[i].intersects(parts[j]) {
                    return Err(Error::OverlappingParts(i, j));
                }
            }
        }
        Ok(PartiteFamily { parts })
    }

    pub fn parts(&self) -> &[VertexSet] {
        &self.parts
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn union(&self) -> VertexSet {
        self.parts.iter().fold(VertexSet::EMPTY, |acc, p| acc.union(*p))
    }

    pub fn total_size(&self) -> usize {
        self.parts.iter().map(|p| p.len()).sum()
    }

    /// Cyclic rotation `(U_{1+k}, …, U_{p+k})`.
    pub fn rotated(&self, k: usize) -> Self {
        let q = self.parts.len();
        PartiteFamily { parts: (0..q).map(|i| self.parts[(i + k) % q]).collect() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Induced {
    pub graph: Hypergraph,
    /// `vertices[i]` is the original label of new vertex `i`.
    pub vertices: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartiteSubhypergraph {
    pub parts: PartiteFamily,
    pub edges: Vec<VertexSet>,
}

impl PartiteSubhypergraph {
    pub fn is_partite(&self) -> bool {
        self.edges.iter().all(|e| self.parts.parts().iter().all(|p| e.intersection(*p).len() <= 1))
    }
}

/// `KG^r(F)`: vertex `i` is the edge `F.edges()[i]` (colex order); edges
/// are the `r`-sets of pairwise disjoint edges of `F`.
pub fn kneser(f: &Hypergraph, r: usize) -> Result<Hypergraph> {
    if r < 2 {
        return Err(Error::KneserUniformity(r));
    }
    let ground = f.edges();
    let mut edges = Vec::new();
    fn rec(ground: &[VertexSet], r: usize, start: usize, used: VertexSet, chosen: VertexSet, out: &mut Vec<VertexSet>) {
        if chosen.len() == r {
            out.push(chosen);
            return;
        }
        for i in start..ground.len() {
            if !ground[i].intersects(used) {
                rec(ground, r, i + 1, used.union(ground[i]), chosen.with(i), out);
            }
        }
    }
    if ground.len() > VertexSet::CAPACITY {
        return Err(Error::TooManyVertices { n: ground.len(), max: VertexSet::CAPACITY });
    }
    rec(ground, r, 0, VertexSet::EMPTY, VertexSet::EMPTY, &mut edges);
    Hypergraph::from_sets(ground.len(), edges)?.with_uniformity(r)
}

/// `KG^r(n, k) = KG^r(K_n^k)`.
pub fn usual_kneser(n: usize, k: usize, r: usize) -> Result<Hypergraph> {
    kneser(&Hypergraph::complete(n, k)?, r)
}

/// The Petersen graph `KG^2(5, 2)`.
pub fn petersen() -> Hypergraph {
    usual_kneser(5, 2, 2).expect("fixed parameters")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(v: &[usize]) -> VertexSet {
        v.iter().copied().collect()
    }

    #[test]
    fn build_canonicalizes() {
        let k5 = Hypergraph::complete(5, 2).unwrap();
        assert_eq!(k5.num_edges(), 10);
        assert_eq!(k5.uniformity(), Some(2));
        let h = Hypergraph::new(4, vec![vec![0, 1, 2], vec![1, 2, 3]]).unwrap();
        assert_eq!(h.uniformity(), Some(3));
        assert_eq!(h.num_edges(), 2);
        let d = Hypergraph::new(3, vec![vec![0, 1], vec![1, 0]]).unwrap();
        assert_eq!(d.num_edges(), 1);
    }

    #[test]
    fn build_errors() {
        assert_eq!(Hypergraph::new(0, Vec::<Vec<usize>>::new()), Err(Error::NoVertices));
        assert_eq!(Hypergraph::new(3, vec![vec![0, 3]]), Err(Error::VertexOutOfRange { vertex: 3, n: 3 }));
        assert_eq!(Hypergraph::new(3, vec![Vec::<usize>::new()]), Err(Error::EmptyEdge));
        assert!(matches!(Hypergraph::new(65, Vec::<Vec<usize>>::new()), Err(Error::TooManyVertices { .. })));
        assert!(Hypergraph::new(4, vec![vec![0, 1], vec![0, 1, 2]]).unwrap().uniformity().is_none());
    }

    #[test]
    fn induced_examples() {
        let k5 = Hypergraph::complete(5, 2).unwrap();
        let i = k5.induced(set(&[0, 1, 2])).unwrap();
        assert_eq!(i.graph.num_edges(), 3);
        assert_eq!(i.vertices, vec![0, 1, 2]);
        let k53 = Hypergraph::complete(5, 3).unwrap();
        let i = k53.induced(set(&[0, 1])).unwrap();
        assert_eq!((i.graph.n(), i.graph.num_edges()), (2, 0));
        let h = Hypergraph::new(4, vec![vec![0, 1, 2], vec![1, 2, 3]]).unwrap();
        let i = h.induced(set(&[0, 1, 2])).unwrap();
        assert_eq!(i.graph.edges(), &[set(&[0, 1, 2])]);
        assert!(k5.induced(set(&[7])).is_err());
    }

    #[test]
    fn partite_examples() {
        let k4 = Hypergraph::complete(4, 2).unwrap();
        let fam = PartiteFamily::new(vec![set(&[0, 1]), set(&[2, 3])]).unwrap();
        let sub = k4.partite_subhypergraph(&fam).unwrap();
        assert_eq!(sub.edges.len(), 4);
        assert!(sub.is_partite());

        let k63 = Hypergraph::complete(6, 3).unwrap();
        let fam = PartiteFamily::new(vec![set(&[0, 1]), set(&[2]), set(&[3])]).unwrap();
        let sub = k63.partite_subhypergraph(&fam).unwrap();
        assert_eq!(sub.edges, vec![set(&[0, 2, 3]), set(&[1, 2, 3])]);

        let k2 = Hypergraph::complete(2, 2).unwrap();
        let fam = PartiteFamily::new(vec![set(&[0]), set(&[1]), VertexSet::EMPTY]).unwrap();
        assert_eq!(k2.partite_subhypergraph(&fam).unwrap().edges.len(), 1);

        assert_eq!(PartiteFamily::new(vec![set(&[0, 1]), set(&[1])]), Err(Error::OverlappingParts(0, 1)));
    }

    #[test]
    fn complete_partite_examples() {
        let k5 = Hypergraph::complete(5, 2).unwrap();
        let fam = PartiteFamily::new(vec![set(&[0, 1]), set(&[2, 3])]).unwrap();
        assert!(k5.is_complete_partite(&fam, 2));
        let pet = petersen();
        let e = pet.edges()[0].to_vec();
        let fam = PartiteFamily::new(vec![set(&[e[0]]), set(&[e[1]])]).unwrap();
        assert!(pet.is_complete_partite(&fam, 2));
        let k63 = Hypergraph::complete(6, 3).unwrap();
        let fam = PartiteFamily::new(vec![set(&[0]), set(&[1]), VertexSet::EMPTY]).unwrap();
        assert!(k63.is_complete_partite(&fam, 3));
        let c5 = Hypergraph::cycle(5).unwrap();
        let fam = PartiteFamily::new(vec![set(&[0, 2]), set(&[1, 3])]).unwrap();
        assert!(!c5.is_complete_partite(&fam, 2));
    }

    #[test]
    fn clique_numbers() {
        assert_eq!(Hypergraph::complete(5, 2).unwrap().clique_number().unwrap(), 5);
        assert_eq!(petersen().clique_number().unwrap(), 2);
        assert_eq!(usual_kneser(7, 2, 3).unwrap().clique_number().unwrap(), 3);
        assert_eq!(Hypergraph::edgeless(4, 3).unwrap().clique_number().unwrap(), 2);
        let nonuniform = Hypergraph::new(3, vec![vec![0], vec![1, 2]]).unwrap();
        assert_eq!(nonuniform.clique_number(), Err(Error::NotUniform));
    }

    #[test]
    fn clique_number_of_kneser_matches_pigeonhole() {
        for (n, k) in [(5, 2), (6, 2), (7, 2), (7, 3), (8, 3)] {
            let kg = usual_kneser(n, k, 2).unwrap();
            assert_eq!(kg.clique_number().unwrap(), n / k, "KG({n},{k})");
        }
    }

    #[test]
    fn properness() {
        let k3 = Hypergraph::complete(3, 2).unwrap();
        assert!(k3.is_proper(&Coloring::from_colors(vec![0, 1, 2])).unwrap());
        assert!(!k3.is_proper(&Coloring::from_colors(vec![0, 0, 1])).unwrap());
        let h = Hypergraph::new(3, vec![vec![0, 1, 2]]).unwrap();
        assert!(h.is_proper(&Coloring::from_colors(vec![0, 0, 1])).unwrap());
        assert!(matches!(k3.is_proper(&Coloring::from_colors(vec![0, 1])), Err(Error::PartialColoring { .. })));
        assert!(Coloring::new(vec![0, 3], 2).is_err());
    }

    #[test]
    fn chromatic_examples() {
        let b = SearchBudget::default();
        assert_eq!(petersen().chromatic_number(b).value, ChromaticNumber::Finite(3));
        let kg382 = usual_kneser(8, 2, 3).unwrap();
        let res = kg382.chromatic_number(b);
        assert_eq!(res.value, ChromaticNumber::Finite(3));
        assert!(kg382.is_proper(res.witness.as_ref().unwrap()).unwrap());
        let single = Hypergraph::new(1, vec![vec![0]]).unwrap();
        assert_eq!(single.chromatic_number(b).value, ChromaticNumber::Infinite);
        assert_eq!(Hypergraph::edgeless(3, 2).unwrap().chromatic_number(b).finite(), Some(1));
    }

    #[test]
    fn chromatic_budget_is_reported() {
        let res = usual_kneser(7, 3, 2).unwrap().chromatic_number(SearchBudget::nodes(3));
        assert!(!res.exact);
        assert!(res.lower <= res.finite().unwrap());
    }

    #[test]
    fn local_chromatic_examples() {
        let b = SearchBudget::default();
        assert_eq!(Hypergraph::complete(4, 2).unwrap().local_chromatic_number(b).unwrap().value, 4);
        assert_eq!(Hypergraph::cycle(5).unwrap().local_chromatic_number(b).unwrap().value, 3);
        let e3 = Hypergraph::new(3, vec![vec![0, 1, 2]]).unwrap();
        let res = e3.local_chromatic_number(b).unwrap();
        assert_eq!(res.value, 2);
        assert_eq!(e3.local_palette(&res.witness), 2);
        assert!(Hypergraph::edgeless(3, 2).unwrap().local_chromatic_number(b).is_err());
    }

    #[test]
    fn kneser_examples() {
        let pet = petersen();
        assert_eq!((pet.n(), pet.num_edges()), (10, 15));
        let kg42 = usual_kneser(4, 2, 2).unwrap();
        assert_eq!((kg42.n(), kg42.num_edges()), (6, 3));
        let empty = usual_kneser(5, 3, 2).unwrap();
        assert_eq!(empty.num_edges(), 0);
        assert_eq!(empty.uniformity(), Some(2));
        assert_eq!(kneser(&Hypergraph::complete(4, 2).unwrap(), 1), Err(Error::KneserUniformity(1)));
    }

    #[test]
    fn independence_numbers() {
        assert_eq!(petersen().independence_number(), 4);
        assert_eq!(Hypergraph::complete(5, 3).unwrap().independence_number(), 2);
        assert_eq!(Hypergraph::cycle(5).unwrap().independence_number(), 2);
    }

    #[test]
    fn colorings_enumeration_is_canonical() {
        let c5 = Hypergraph::cycle(5).unwrap();
        let all = c5.proper_colorings(3, usize::MAX);
        // chromatic polynomial of C5 at 3 is 30; up to the 3! permutations: 5
        assert_eq!(all.len(), 5);
        assert!(all.iter().all(|c| c5.is_proper(c).unwrap()));
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let c = petersen().random_proper_coloring(4, &mut rng).unwrap();
        assert!(petersen().is_proper(&c).unwrap());
    }
}
