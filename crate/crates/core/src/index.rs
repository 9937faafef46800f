//! The value function `l`, the sign functions `s` and `s₀`, the cross-index
//! of free `Z_p`-posets and certified intervals for the index of free
//! simplicial `G`-complexes.
//!
//! Both indices are found by searching for equivariant maps into a target
//! with one orbit per level (`Q_{n,p}` or `G^{*(n+1)}`), assigning a
//! `(group element, level)` pair to one representative per orbit.

use serde::{Deserialize, Serialize};

use crate::altdefect::{alt_sigma, Ordering};
use crate::complex::{barycentric_subdivision, box_complex, sigma_complex, Face, GComplex, GPoset};
use crate::error::{Error, Result};
use crate::hypergraph::{kneser, Hypergraph, NodeCounter, SearchBudget};
use crate::sat::{Lit, Solver};
use crate::vset::VertexSet;
use crate::zp::{exponent, FiniteGroup, Modulus};

/// A simplex of `(σ^{p-1}_{p-2})^{*m}`, i.e. a subset of `Z_p × [m]`.
/// `classes[ε]` holds the (0-based) levels `j` with `(ε, j) ∈ τ`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LabeledSimplex {
    p: usize,
    m: usize,
    classes: Vec<VertexSet>,
}

impl LabeledSimplex {
    pub fn new(p: usize, m: usize, elements: &[(usize, usize)]) -> Result<Self> {
        if p < 2 {
            return Err(Error::ModulusTooSmall(p));
        }
        if m > VertexSet::CAPACITY {
            return Err(Error::TooManyVertices { n: m, max: VertexSet::CAPACITY });
        }
        let mut classes = vec![VertexSet::EMPTY; p];
        for &(eps, j) in elements {
            if eps >= p || j >= m {
                return Err(Error::OutsideDomain(format!("({eps}, {j}) is not in Z_{p} × [{m}]")));
            }
            classes[eps].insert(j);
        }
        Ok(LabeledSimplex { p, m, classes })
    }

    pub fn from_classes(m: usize, classes: Vec<VertexSet>) -> Result<Self> {
        let p = classes.len();
        let elems: Vec<(usize, usize)> = classes.iter().enumerate().flat_map(|(e, c)| c.iter().map(move |j| (e, j))).collect();
        LabeledSimplex::new(p, m, &elems)
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// `τ^ε` as a set of levels.
    pub fn class(&self, eps: usize) -> VertexSet {
        self.classes[eps]
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.classes.iter().map(|c| c.len()).collect()
    }

    pub fn len(&self) -> usize {
        self.classes.iter().map(|c| c.len()).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.iter().all(|c| c.is_empty())
    }

    pub fn elements(&self) -> Vec<(usize, usize)> {
        let mut out: Vec<(usize, usize)> = self.classes.iter().enumerate().flat_map(|(e, c)| c.iter().map(move |j| (e, j))).collect();
        out.sort_by_key(|&(e, j)| (j, e));
        out
    }

    /// No level carries all `p` signs.
    pub fn is_simplex(&self) -> bool {
        let all = self.classes.iter().fold(VertexSet(u64::MAX), |a, c| a.intersection(*c));
        all.is_empty()
    }

    pub fn is_subset(&self, other: &LabeledSimplex) -> bool {
        self.p == other.p && self.classes.iter().zip(&other.classes).all(|(a, b)| a.is_subset(*b))
    }

    /// `ω^k · τ`.
    pub fn rotate(&self, k: usize) -> LabeledSimplex {
        let p = self.p;
        let mut classes = vec![VertexSet::EMPTY; p];
        for (eps, c) in self.classes.iter().enumerate() {
            classes[(eps + k) % p] = *c;
        }
        LabeledSimplex { p, m: self.m, classes }
    }

    /// `h(τ) = min_ε |τ^ε|`.
    pub fn h(&self) -> usize {
        self.classes.iter().map(|c| c.len()).min().unwrap_or(0)
    }

    fn key(&self) -> Vec<(usize, usize)> {
        let mut k: Vec<(usize, usize)> = self.elements().into_iter().map(|(e, j)| (j, exponent(e, self.p))).collect();
        k.sort_unstable();
        k
    }
}

/// `(l(τ), h(τ))` by the closed form `l = p·h + |{ε : |τ^ε| > h}|`.
pub fn value_l(tau: &LabeledSimplex) -> (usize, usize) {
    let h = tau.h();
    let above = tau.classes.iter().filter(|c| c.len() > h).count();
    (tau.p * h + above, h)
}

/// `l(τ)` as the largest balanced union `⋃ B^ε` with `B^ε ⊆ τ^ε`; only the
/// sizes `|B^ε|` matter, so this ranges over size vectors.
pub fn value_l_by_definition(tau: &LabeledSimplex) -> usize {
    let sizes = tau.sizes();
    let mut best = 0;
    let mut b = vec![0usize; sizes.len()];
    loop {
        let (lo, hi) = (b.iter().min().copied().unwrap_or(0), b.iter().max().copied().unwrap_or(0));
        if hi - lo <= 1 {
            best = best.max(b.iter().sum());
        }
        let mut i = 0;
        while i < b.len() && b[i] == sizes[i] {
            b[i] = 0;
            i += 1;
        }
        if i == b.len() {
            return best;
        }
        b[i] += 1;
    }
}

/// The rotation `j` with `item = ω^j · rep`, where `rep` minimizes `key`
/// over the orbit. Fails when a nontrivial rotation fixes `item`.
fn orbit_sign<T: PartialEq, K: Ord>(p: usize, item: &T, rotate: impl Fn(&T, usize) -> T, key: impl Fn(&T) -> K) -> Result<usize> {
    if (1..p).any(|k| rotate(item, k) == *item) {
        return Err(Error::OutsideDomain("the orbit is not free".into()));
    }
    Ok((0..p).min_by_key(|&j| key(&rotate(item, (p - j) % p))).unwrap())
}

/// `s₀` on nonempty proper subsets of `Z_p` (as residue sets).
pub fn s0(set: VertexSet, p: usize) -> Result<usize> {
    if set.is_empty() || set.len() >= p || set.last().is_some_and(|x| x >= p) {
        return Err(Error::OutsideDomain(format!("{set:?} is not a nonempty proper subset of Z_{p}")));
    }
    let rot = |s: &VertexSet, k: usize| s.iter().map(|x| (x + k) % p).collect::<VertexSet>();
    let key = |s: &VertexSet| {
        let mut e: Vec<usize> = s.iter().map(|x| exponent(x, p)).collect();
        e.sort_unstable();
        e
    };
    orbit_sign(p, &set, rot, key)
}

/// `s` on `W`: simplices whose nonempty classes all have the same size.
pub fn s(tau: &LabeledSimplex) -> Result<usize> {
    let sizes: Vec<usize> = tau.sizes().into_iter().filter(|&x| x > 0).collect();
    if sizes.is_empty() || sizes.iter().any(|&x| x != sizes[0]) {
        return Err(Error::OutsideDomain(format!("class sizes {:?} are not all in {{0, a}}", tau.sizes())));
    }
    if !tau.is_simplex() {
        return Err(Error::OutsideDomain("some level carries every sign".into()));
    }
    orbit_sign(tau.p, tau, |t, k| t.rotate(k), |t| t.key())
}

/// `k · f(a)` and `f(b)` must span a simplex of `G^{*(n+1)}`.
#[derive(Clone, Copy, Debug)]
struct Arc {
    a: usize,
    b: usize,
    k: usize,
}

enum Outcome<T> {
    Solution(T),
    Infeasible,
    Unknown,
}

/// Equivariant simplicial map search over orbit representatives. The search
/// branches on levels only: two adjacent variables on a common level must
/// satisfy `h_b = k · h_a`, and these equations live in a union-find with
/// group offsets, so a cycle of equations with a nontrivial product fails at
/// once. Levels are interchangeable, so a variable never opens a level past
/// the first unused one.
struct Csp {
    levels: usize,
    nvars: usize,
    arcs: Vec<Arc>,
    incident: Vec<Vec<usize>>,
    mul: Vec<Vec<usize>>,
    inv: Vec<usize>,
    rank: Vec<usize>,
    contradictory: bool,
}

#[derive(Clone)]
struct State {
    dom: Vec<u64>,
    fixed: Vec<bool>,
    parent: Vec<usize>,
    /// `h_x = off[x] · h_parent(x)`.
    off: Vec<usize>,
    size: Vec<usize>,
}

impl Csp {
    fn new(group: &FiniteGroup, levels: usize, nvars: usize, arcs: Vec<Arc>) -> Self {
        let order = group.order();
        let contradictory = arcs.iter().any(|a| a.a == a.b && a.k != 0);
        let arcs: Vec<Arc> = arcs.into_iter().filter(|a| a.a != a.b).collect();
        let mut incident = vec![Vec::new(); nvars];
        for (i, a) in arcs.iter().enumerate() {
            incident[a.a].push(i);
            incident[a.b].push(i);
        }
        let mut by_degree: Vec<usize> = (0..nvars).collect();
        by_degree.sort_by_key(|&v| std::cmp::Reverse(incident[v].len()));
        let mut rank = vec![0; nvars];
        for (i, &v) in by_degree.iter().enumerate() {
            rank[v] = i;
        }
        let mul = (0..order).map(|a| (0..order).map(|b| group.mul(a, b)).collect()).collect();
        let inv = (0..order).map(|g| group.inverse(g)).collect();
        Csp { levels, nvars, arcs, incident, mul, inv, rank, contradictory }
    }

    fn find(&self, st: &State, mut x: usize) -> (usize, usize) {
        let mut o = 0;
        while st.parent[x] != x {
            o = self.mul[o][st.off[x]];
            x = st.parent[x];
        }
        (x, o)
    }

    /// Records `h_b = k · h_a`; false if it contradicts earlier equations.
    fn union(&self, st: &mut State, a: usize, b: usize, k: usize) -> bool {
        let (ra, oa) = self.find(st, a);
        let (rb, ob) = self.find(st, b);
        if ra == rb {
            return ob == self.mul[k][oa];
        }
        if st.size[ra] >= st.size[rb] {
            st.parent[rb] = ra;
            st.off[rb] = self.mul[self.mul[self.inv[ob]][k]][oa];
            st.size[ra] += st.size[rb];
        } else {
            st.parent[ra] = rb;
            st.off[ra] = self.mul[self.mul[self.inv[oa]][self.inv[k]]][ob];
            st.size[rb] += st.size[ra];
        }
        true
    }

    /// Could `c` join level `l` given the variables already fixed there?
    fn consistent(&self, st: &State, c: usize, l: usize) -> bool {
        let mut seen: Vec<(usize, usize)> = Vec::new();
        for &ai in &self.incident[c] {
            let arc = self.arcs[ai];
            let other = if arc.a == c { arc.b } else { arc.a };
            if !st.fixed[other] || st.dom[other] != 1 << l {
                continue;
            }
            let (r, o) = self.find(st, other);
            let implied = if arc.b == c { self.mul[arc.k][o] } else { self.mul[self.inv[arc.k]][o] };
            match seen.iter().find(|s| s.0 == r) {
                Some(&(_, prev)) if prev != implied => return false,
                Some(_) => {}
                None => seen.push((r, implied)),
            }
        }
        true
    }

    fn propagate(&self, st: &mut State, start: &[usize]) -> bool {
        let mut queue: Vec<usize> = start.to_vec();
        let mut queued = vec![false; self.nvars];
        for &v in start {
            queued[v] = true;
        }
        while let Some(v) = queue.pop() {
            queued[v] = false;
            let d = st.dom[v];
            let mut changes: Vec<(usize, u64)> = Vec::new();
            if d.count_ones() == 1 && !st.fixed[v] {
                st.fixed[v] = true;
                let l = d.trailing_zeros() as usize;
                for &ai in &self.incident[v] {
                    let arc = self.arcs[ai];
                    let other = if arc.a == v { arc.b } else { arc.a };
                    if st.fixed[other] && st.dom[other] == d && !self.union(st, arc.a, arc.b, arc.k) {
                        return false;
                    }
                }
                for &ai in &self.incident[v] {
                    let arc = self.arcs[ai];
                    let other = if arc.a == v { arc.b } else { arc.a };
                    if !st.fixed[other] && st.dom[other] & d != 0 && !self.consistent(st, other, l) {
                        changes.push((other, st.dom[other] & !d));
                    }
                }
            }
            for (o, nd) in changes {
                let nd = nd & st.dom[o];
                if nd == 0 {
                    return false;
                }
                if nd != st.dom[o] {
                    st.dom[o] = nd;
                    if !queued[o] {
                        queued[o] = true;
                        queue.push(o);
                    }
                }
            }
        }
        true
    }

    /// `(group element, level)` per variable.
    fn solve(&self, counter: &mut NodeCounter) -> Outcome<Vec<(usize, usize)>> {
        if self.contradictory {
            return Outcome::Infeasible;
        }
        let full = if self.levels >= 64 { u64::MAX } else { (1u64 << self.levels) - 1 };
        let mut st = State {
            dom: vec![full; self.nvars],
            fixed: vec![false; self.nvars],
            parent: (0..self.nvars).collect(),
            off: vec![0; self.nvars],
            size: vec![1; self.nvars],
        };
        let all: Vec<usize> = (0..self.nvars).collect();
        if !self.propagate(&mut st, &all) {
            return Outcome::Infeasible;
        }
        self.search(st, counter)
    }

    fn search(&self, st: State, counter: &mut NodeCounter) -> Outcome<Vec<(usize, usize)>> {
        if !counter.tick() {
            return Outcome::Unknown;
        }
        let pick = (0..self.nvars).filter(|&v| !st.fixed[v]).min_by_key(|&v| (st.dom[v].count_ones(), self.rank[v]));
        let Some(x) = pick else {
            return Outcome::Solution((0..self.nvars).map(|v| (self.find(&st, v).1, st.dom[v].trailing_zeros() as usize)).collect());
        };
        let fresh = (0..self.nvars).filter(|&v| st.fixed[v]).map(|v| st.dom[v].trailing_zeros() as usize + 1).max().unwrap_or(0) + 1;
        let mut bits = st.dom[x];
        while bits != 0 {
            let l = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            if l >= fresh {
                break;
            }
            let mut next = st.clone();
            next.dom[x] = 1 << l;
            if !self.propagate(&mut next, &[x]) {
                continue;
            }
            match self.search(next, counter) {
                Outcome::Infeasible => {}
                other => return other,
            }
        }
        Outcome::Infeasible
    }
}

/// Result of a cross-index search: exact when `upper == Some(lower)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrossIndex {
    pub lower: isize,
    pub upper: Option<isize>,
    /// `(sign, level)` for every element, into `Q_{upper,p}`.
    pub witness: Option<Vec<(usize, usize)>>,
    pub nodes: u64,
}

impl CrossIndex {
    pub fn value(&self) -> Option<isize> {
        (self.upper == Some(self.lower)).then_some(self.lower)
    }

    pub fn is_exact(&self) -> bool {
        self.value().is_some()
    }
}

/// Least `n ≤ n_max` with an order-preserving `Z_p`-map `P → Q_{n,p}`.
/// The empty poset has cross-index `-1`.
pub fn xind_exact(poset: &GPoset, n_max: usize, budget: SearchBudget) -> Result<CrossIndex> {
    if poset.is_empty() {
        return Ok(CrossIndex { lower: -1, upper: Some(-1), witness: Some(Vec::new()), nodes: 0 });
    }
    let orbits = poset.orbits();
    if !orbits.free {
        return Err(Error::NotFree);
    }
    let p = poset.p();
    let var_of: std::collections::HashMap<usize, usize> = orbits.reps.iter().enumerate().map(|(i, &r)| (r, i)).collect();
    let arcs: Vec<(usize, usize, usize)> = poset
        .covers()
        .into_iter()
        .map(|(x, y)| {
            let (g, h) = (orbits.shift[x], orbits.shift[y]);
            (var_of[&orbits.rep[x]], var_of[&orbits.rep[y]], (g + p - h) % p)
        })
        .collect();
    let n_max = n_max.min(63);
    let mut counter = NodeCounter::new(budget);
    for n in 0..=n_max {
        match q_map_search(p, n, orbits.reps.len(), &arcs, &mut counter) {
            Outcome::Solution(vals) => {
                let witness = (0..poset.len())
                    .map(|x| {
                        let (h, l) = vals[var_of[&orbits.rep[x]]];
                        ((h + orbits.shift[x]) % p, l)
                    })
                    .collect();
                return Ok(CrossIndex { lower: n as isize, upper: Some(n as isize), witness: Some(witness), nodes: counter.used() });
            }
            Outcome::Infeasible => {}
            Outcome::Unknown => return Ok(CrossIndex { lower: n as isize, upper: None, witness: None, nodes: counter.used() }),
        }
    }
    Ok(CrossIndex { lower: n_max as isize + 1, upper: None, witness: None, nodes: counter.used() })
}

/// Order-preserving equivariant maps into `Q_{n,p}` as a satisfiability
/// problem over orbit representatives: `y[a][l]` says the level of `a` is at
/// least `l`, `s[a][g]` says its sign is `g`. An arc `(a, b, k)` asks for
/// `k · f(a) ≤ f(b)`; on a common level this forces `sign(b) = k + sign(a)`.
fn q_map_search(p: usize, n: usize, nvars: usize, arcs: &[(usize, usize, usize)], counter: &mut NodeCounter) -> Outcome<Vec<(usize, usize)>> {
    let mut sat = Solver::new();
    let y: Vec<Vec<usize>> = (0..nvars).map(|_| (0..n).map(|_| sat.new_var()).collect()).collect();
    let s: Vec<Vec<usize>> = (0..nvars).map(|_| (0..p).map(|_| sat.new_var()).collect()).collect();
    // level of a is at least l, for 1 ≤ l ≤ n
    let at_least = |a: usize, l: usize| Lit::pos(y[a][l - 1]);
    let mut ok = true;
    for a in 0..nvars {
        for l in 1..n {
            ok &= sat.add_clause(&[!at_least(a, l + 1), at_least(a, l)]);
        }
        ok &= sat.add_clause(&s[a].iter().map(|&v| Lit::pos(v)).collect::<Vec<_>>());
        for g in 0..p {
            for h in g + 1..p {
                ok &= sat.add_clause(&[Lit::neg(s[a][g]), Lit::neg(s[a][h])]);
            }
        }
    }
    let mut comp: Vec<usize> = (0..nvars).collect();
    fn find(c: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while c[r] != r {
            r = c[r];
        }
        c[x] = r;
        r
    }
    for &(a, b, k) in arcs {
        if a == b {
            return Outcome::Infeasible;
        }
        let (ra, rb) = (find(&mut comp, a), find(&mut comp, b));
        comp[ra] = rb;
        for l in 1..=n {
            ok &= sat.add_clause(&[!at_least(a, l), at_least(b, l)]);
        }
        for l in 0..=n {
            let mut guard = Vec::new();
            if l >= 1 {
                guard.push(!at_least(a, l));
            }
            if l < n {
                guard.push(at_least(b, l + 1));
            }
            for g in 0..p {
                let mut c = guard.clone();
                c.push(Lit::neg(s[a][g]));
                c.push(Lit::pos(s[b][(k + g) % p]));
                ok &= sat.add_clause(&c);
            }
        }
    }
    // right multiplication commutes with the action, so one variable per
    // component may take the identity sign
    let mut seen = std::collections::HashSet::new();
    for a in 0..nvars {
        if seen.insert(find(&mut comp, a)) {
            ok &= sat.add_clause(&[Lit::pos(s[a][0])]);
        }
    }
    if !ok {
        return Outcome::Infeasible;
    }
    match sat.solve(counter) {
        Some(true) => Outcome::Solution(
            (0..nvars)
                .map(|a| {
                    let g = (0..p).find(|&g| sat.model_value(s[a][g])).unwrap();
                    let l = y[a].iter().filter(|&&v| sat.model_value(v)).count();
                    (g, l)
                })
                .collect(),
        ),
        Some(false) => Outcome::Infeasible,
        None => Outcome::Unknown,
    }
}

/// Checks that `map` (`(sign, level)` per element) is an order-preserving
/// `Z_p`-map `P → Q_{n,p}`.
pub fn is_q_map(poset: &GPoset, n: usize, map: &[(usize, usize)]) -> bool {
    let p = poset.p();
    if map.len() != poset.len() || map.iter().any(|&(e, l)| e >= p || l > n) {
        return false;
    }
    let equivariant = (0..poset.len()).all(|x| {
        let (e, l) = map[x];
        map[poset.act(1, x)] == ((e + 1) % p, l)
    });
    equivariant && poset.covers().into_iter().all(|(x, y)| map[x] == map[y] || map[x].1 < map[y].1)
}

/// An independently checkable reason for an index bound.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Certificate {
    /// A free complex of dimension `d` has index at most `d`.
    Dimension { dim: isize },
    /// An equivariant simplicial map `sd^depth(K) → G^{*(n+1)}`, given as
    /// `(group element, level)` per vertex of the subdivision.
    ExplicitMap { depth: usize, n: usize, map: Vec<(usize, usize)> },
    /// Vertices `x_0..x_m` with `{g_0 x_0, …, g_m x_m}` a simplex for every
    /// choice of group elements, giving a map `G^{*(m+1)} → K`.
    SubcomplexEmbedding { vertices: Vec<usize> },
    /// `K = Σ_p(n, α)` has index at least `n − α − 1`.
    SigmaAlternation { n: usize, alpha: usize },
    /// `K = B_0(KG^r(F), Z_p)` has index at least `|V(F)| − alt_p(F, σ) − 1`.
    KneserAlternation { vertices: usize, edges: Vec<Vec<usize>>, r: usize, ordering: Vec<usize>, alternation: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Bound {
    Lower(isize),
    Upper(isize),
}

/// Structural facts about `K` that unlock registered lower bounds.
#[derive(Clone, Debug)]
pub enum IndexHint {
    Sigma { n: usize, alpha: usize },
    KneserBox { f: Hypergraph, r: usize, ordering: Ordering },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct IndexInterval {
    pub lower: isize,
    pub upper: isize,
    pub certificates: Vec<Certificate>,
}

impl IndexInterval {
    pub fn is_exact(&self) -> bool {
        self.lower == self.upper
    }
}

#[derive(Clone, Copy, Debug)]
pub struct IndOptions {
    /// Largest subdivision depth tried for the map search.
    pub depth: usize,
    /// Largest target `n` tried for the map search.
    pub n_max: usize,
    pub budget: SearchBudget,
    /// Skip a subdivision whose input has more simplices than this.
    pub max_simplices: usize,
}

impl Default for IndOptions {
    fn default() -> Self {
        IndOptions { depth: 1, n_max: 63, budget: SearchBudget::nodes(2_000_000), max_simplices: 4000 }
    }
}

const VERIFY_SIMPLICES: usize = 200_000;

/// Certified interval for `ind_G(K)`.
pub fn ind_bounds(k: &GComplex, hints: &[IndexHint], opts: &IndOptions) -> Result<IndexInterval> {
    if k.num_vertices() == 0 {
        return Ok(IndexInterval { lower: -1, upper: -1, certificates: vec![Certificate::Dimension { dim: -1 }] });
    }
    if !k.is_free() {
        return Err(Error::NotFree);
    }
    let mut certs = Vec::new();
    let dim = k.dim();
    let mut upper = dim;
    let mut upper_cert = Certificate::Dimension { dim };
    let mut lower_cert = embedding_certificate(k, opts.budget);
    let mut lower = match &lower_cert {
        Certificate::SubcomplexEmbedding { vertices } => vertices.len() as isize - 1,
        _ => unreachable!(),
    };
    // the alternation bounds hold for prime moduli only
    let prime = Modulus::prime(k.group().order()).is_ok();
    for hint in hints.iter().filter(|_| prime) {
        let cert = match hint {
            IndexHint::Sigma { n, alpha } => Certificate::SigmaAlternation { n: *n, alpha: *alpha },
            IndexHint::KneserBox { f, r, ordering } => Certificate::KneserAlternation {
                vertices: f.n(),
                edges: f.edges().iter().map(|e| e.to_vec()).collect(),
                r: *r,
                ordering: ordering.as_slice().to_vec(),
                alternation: alt_sigma(f, k.group().order(), ordering)?,
            },
        };
        if let Bound::Lower(b) = verify_certificate(k, &cert)? {
            if b > lower {
                lower = b;
                lower_cert = cert;
            }
        }
    }
    let mut counter = NodeCounter::new(opts.budget);
    let mut current = Some(k.clone());
    for depth in 0..=opts.depth {
        let Some(sd) = current.take() else { break };
        let mut n = lower.max(0) as usize;
        while (n as isize) < upper && n <= opts.n_max && n < 64 {
            match equivariant_map(&sd, n, &mut counter) {
                Outcome::Solution(map) => {
                    upper = n as isize;
                    upper_cert = Certificate::ExplicitMap { depth, n, map };
                    break;
                }
                Outcome::Infeasible => n += 1,
                Outcome::Unknown => break,
            }
        }
        if depth < opts.depth && lower < upper {
            current = barycentric_subdivision(&sd, opts.max_simplices).map(|(s, _)| s);
        }
    }
    certs.push(lower_cert);
    certs.push(upper_cert);
    Ok(IndexInterval { lower, upper, certificates: certs })
}

/// Search for an equivariant simplicial map `K → G^{*(n+1)}`, returning
/// `(group element, level)` per vertex.
fn equivariant_map(k: &GComplex, n: usize, counter: &mut NodeCounter) -> Outcome<Vec<(usize, usize)>> {
    let orbits = k.orbits();
    let group = k.group();
    let var_of: std::collections::HashMap<usize, usize> = orbits.reps.iter().enumerate().map(|(i, &r)| (r, i)).collect();
    let mut arcs = Vec::new();
    for (x, y) in k.edges() {
        let (a, b) = (orbits.rep[x], orbits.rep[y]);
        let (g, h) = (orbits.shift[x], orbits.shift[y]);
        let kk = group.mul(group.inverse(h), g);
        if a == b {
            // x and y = g'·x sit in one orbit and must share a level
            return Outcome::Infeasible;
        }
        arcs.push(Arc { a: var_of[&a], b: var_of[&b], k: kk });
    }
    let csp = Csp::new(group, n + 1, orbits.reps.len(), arcs);
    match csp.solve(counter) {
        Outcome::Solution(vals) => {
            let map = (0..k.num_vertices())
                .map(|x| {
                    let (h, l) = vals[var_of[&orbits.rep[x]]];
                    (group.mul(orbits.shift[x], h), l)
                })
                .collect();
            Outcome::Solution(map)
        }
        Outcome::Infeasible => Outcome::Infeasible,
        Outcome::Unknown => Outcome::Unknown,
    }
}

/// Greedy-then-exhaustive search for a large set of orbit representatives
/// whose every translate combination spans a simplex.
fn embedding_certificate(k: &GComplex, budget: SearchBudget) -> Certificate {
    let orbits = k.orbits();
    let reps = orbits.reps.clone();
    let order = k.group().order();
    // pairwise compatibility: every translate of b is adjacent to a
    let compat: Vec<Vec<bool>> =
        reps.iter().map(|&a| reps.iter().map(|&b| a != b && (0..order).all(|g| k.neighbors(a).contains(k.act(g, b)))).collect()).collect();
    let mut best: Vec<usize> = vec![0];
    let mut counter = NodeCounter::new(budget);
    let mut cur = Vec::new();
    fn rec(k: &GComplex, compat: &[Vec<bool>], reps: &[usize], start: usize, cur: &mut Vec<usize>, best: &mut Vec<usize>, counter: &mut NodeCounter) {
        if cur.len() > best.len() {
            *best = cur.clone();
        }
        for i in start..reps.len() {
            if !counter.tick() {
                return;
            }
            if cur.len() + (reps.len() - i) <= best.len() {
                return;
            }
            if !cur.iter().all(|&j| compat[j][i]) {
                continue;
            }
            cur.push(i);
            let verts: Vec<usize> = cur.iter().map(|&j| reps[j]).collect();
            if k.is_flag() || all_translates_simplices(k, &verts) {
                rec(k, compat, reps, i + 1, cur, best, counter);
            }
            cur.pop();
        }
    }
    rec(k, &compat, &reps, 0, &mut cur, &mut best, &mut counter);
    Certificate::SubcomplexEmbedding { vertices: best.iter().map(|&j| reps[j]).collect() }
}

/// Every `{g_0 x_0, …, g_m x_m}` is a simplex; `g_0` is fixed to the identity
/// since simplices are closed under the action.
fn all_translates_simplices(k: &GComplex, xs: &[usize]) -> bool {
    let order = k.group().order();
    let m = xs.len();
    if m == 0 {
        return true;
    }
    let mut gs = vec![0usize; m];
    loop {
        let f = Face::from_slice(&xs.iter().zip(&gs).map(|(&x, &g)| k.act(g, x)).collect::<Vec<_>>());
        if !k.is_simplex(&f) {
            return false;
        }
        let mut i = 1;
        while i < m && gs[i] == order - 1 {
            gs[i] = 0;
            i += 1;
        }
        if i >= m {
            return true;
        }
        gs[i] += 1;
    }
}

/// Re-checks a certificate against `K` from scratch and returns the bound it
/// proves.
pub fn verify_certificate(k: &GComplex, cert: &Certificate) -> Result<Bound> {
    let bad = |msg: &str| Err(Error::Precondition(msg.to_string()));
    match cert {
        Certificate::Dimension { dim } => {
            if *dim != k.dim() {
                return bad("dimension mismatch");
            }
            if !k.is_free() {
                return Err(Error::NotFree);
            }
            Ok(Bound::Upper(*dim))
        }
        Certificate::ExplicitMap { depth, n, map } => {
            let mut sd = k.clone();
            for _ in 0..*depth {
                sd = match barycentric_subdivision(&sd, VERIFY_SIMPLICES) {
                    Some((s, _)) => s,
                    None => return bad("subdivision too large to verify"),
                };
            }
            let group = k.group();
            if map.len() != sd.num_vertices() || map.iter().any(|&(g, l)| g >= group.order() || l > *n) {
                return bad("map has the wrong shape");
            }
            for g in 0..group.order() {
                for v in 0..sd.num_vertices() {
                    let (h, l) = map[v];
                    if map[sd.act(g, v)] != (group.mul(g, h), l) {
                        return bad("map is not equivariant");
                    }
                }
            }
            if sd.edges().into_iter().any(|(x, y)| map[x] != map[y] && map[x].1 == map[y].1) {
                return bad("map is not simplicial");
            }
            Ok(Bound::Upper(*n as isize))
        }
        Certificate::SubcomplexEmbedding { vertices } => {
            if vertices.is_empty() || vertices.iter().any(|&v| v >= k.num_vertices()) {
                return bad("embedding vertices out of range");
            }
            if !all_translates_simplices(k, vertices) {
                return bad("some translate combination is not a simplex");
            }
            Ok(Bound::Lower(vertices.len() as isize - 1))
        }
        Certificate::SigmaAlternation { n, alpha } => {
            let p = Modulus::prime(k.group().order())?;
            if !k.same_as(&sigma_complex(*n, p, *alpha)?) {
                return bad("complex is not the alternation complex");
            }
            Ok(Bound::Lower(*n as isize - *alpha as isize - 1))
        }
        Certificate::KneserAlternation { vertices, edges, r, ordering, alternation } => {
            let p = Modulus::prime(k.group().order())?;
            let f = Hypergraph::new(*vertices, edges.iter().map(|e| e.iter().copied()))?;
            let sigma = Ordering::new(ordering.clone())?;
            if alt_sigma(&f, p.get(), &sigma)? != *alternation {
                return bad("alternation number does not match");
            }
            if !k.same_as(&box_complex(&kneser(&f, *r)?, p)?) {
                return bad("complex is not the box complex of the Kneser hypergraph");
            }
            Ok(Bound::Lower(*vertices as isize - *alternation as isize - 1))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{hom_poset, order_complex, q_poset, zp_join_power};
    use crate::hypergraph::petersen;

    fn z(p: usize) -> Modulus {
        Modulus::prime(p).unwrap()
    }

    fn with_sizes(p: usize, sizes: &[usize]) -> LabeledSimplex {
        let m = sizes.iter().copied().max().unwrap_or(0).max(1) + p;
        let elems: Vec<(usize, usize)> = sizes.iter().enumerate().flat_map(|(e, &c)| (0..c).map(move |j| (e, j + e))).collect();
        LabeledSimplex::new(p, m, &elems).unwrap()
    }

    #[test]
    fn value_examples() {
        assert_eq!(value_l(&with_sizes(3, &[2, 1, 1])), (4, 1));
        assert_eq!(value_l(&with_sizes(3, &[2, 0, 1])), (2, 0));
        assert_eq!(value_l(&with_sizes(2, &[3, 3])), (6, 3));
        assert_eq!(value_l(&LabeledSimplex::new(2, 1, &[]).unwrap()), (0, 0));
        for sizes in [[2usize, 1, 1], [2, 0, 1], [0, 0, 0], [4, 2, 3]] {
            let t = with_sizes(3, &sizes);
            assert_eq!(value_l(&t).0, value_l_by_definition(&t));
        }
    }

    #[test]
    fn sign_examples() {
        assert_eq!(s0(VertexSet::singleton(1), 3).unwrap(), 0);
        assert_eq!(s0(VertexSet::singleton(2), 3).unwrap(), 1);
        assert!(s0(VertexSet::full(3), 3).is_err());
        let t = LabeledSimplex::new(3, 1, &[(1, 0)]).unwrap();
        let t2 = LabeledSimplex::new(3, 1, &[(2, 0)]).unwrap();
        assert_eq!(s(&t2).unwrap(), (s(&t).unwrap() + 1) % 3);
        let bad = LabeledSimplex::new(2, 3, &[(0, 0), (0, 1), (1, 2)]).unwrap();
        assert!(s(&bad).is_err());
    }

    #[test]
    fn cross_index_of_q_posets() {
        for n in 0..=2 {
            let q = q_poset(n, 2).unwrap();
            let x = xind_exact(&q, 5, SearchBudget::default()).unwrap();
            assert_eq!(x.value(), Some(n as isize));
            assert!(is_q_map(&q, n, x.witness.as_ref().unwrap()));
        }
    }

    #[test]
    fn cross_index_of_hom_complexes() {
        let xind = |h: &Hypergraph| xind_exact(&hom_poset(h, 2, z(2)).unwrap().poset, 6, SearchBudget::default()).unwrap();
        assert_eq!(xind(&Hypergraph::complete(2, 2).unwrap()).value(), Some(0));
        assert_eq!(xind(&Hypergraph::complete(4, 2).unwrap()).value(), Some(2));
        assert_eq!(xind(&petersen()).value(), Some(1));
        let empty = hom_poset(&Hypergraph::edgeless(3, 3).unwrap(), 3, z(3)).unwrap();
        assert_eq!(xind_exact(&empty.poset, 3, SearchBudget::default()).unwrap().value(), Some(-1));
    }

    #[test]
    fn index_intervals() {
        let opts = IndOptions::default();
        let z22 = zp_join_power(2, 2).unwrap();
        let i = ind_bounds(&z22, &[], &IndOptions { depth: 0, ..opts }).unwrap();
        assert_eq!((i.lower, i.upper), (1, 1));
        let b = box_complex(&Hypergraph::complete(2, 2).unwrap(), z(2)).unwrap();
        let i = ind_bounds(&b, &[], &IndOptions { depth: 1, ..opts }).unwrap();
        assert_eq!((i.lower, i.upper), (1, 1));
        let s = sigma_complex(2, z(2), 1).unwrap();
        let i = ind_bounds(&s, &[IndexHint::Sigma { n: 2, alpha: 1 }], &IndOptions { depth: 0, ..opts }).unwrap();
        assert_eq!((i.lower, i.upper), (0, 0));
        for c in &i.certificates {
            verify_certificate(&s, c).unwrap();
        }
    }

    #[test]
    fn certificates_roundtrip_and_recheck() {
        let pet = petersen();
        let b = box_complex(&pet, z(2)).unwrap();
        let f = Hypergraph::complete(5, 2).unwrap();
        let hint = IndexHint::KneserBox { f, r: 2, ordering: Ordering::identity(5) };
        let i = ind_bounds(&b, &[hint], &IndOptions::default()).unwrap();
        assert_eq!((i.lower, i.upper), (2, 2));
        for c in &i.certificates {
            let json = serde_json::to_string(c).unwrap();
            let back: Certificate = serde_json::from_str(&json).unwrap();
            assert_eq!(&back, c);
            verify_certificate(&b, &back).unwrap();
        }
        let forged = Certificate::SubcomplexEmbedding { vertices: (0..10).collect() };
        assert!(verify_certificate(&b, &forged).is_err());
    }

    #[test]
    fn order_complex_index_below_cross_index() {
        let q = q_poset(2, 3).unwrap();
        let i = ind_bounds(&order_complex(&q), &[], &IndOptions { depth: 0, ..Default::default() }).unwrap();
        let x = xind_exact(&q, 4, SearchBudget::default()).unwrap();
        assert_eq!(x.value(), Some(2));
        assert!(i.lower <= 2);
    }
}
