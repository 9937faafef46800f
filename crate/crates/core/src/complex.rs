//! Finite simplicial complexes and posets with a finite group acting on
//! vertices, and the constructions built from hypergraphs and signed
//! vectors: box complexes, hom posets, order complexes, joins, barycentric
//! subdivisions, `Q_{n,p}`, `Z_p^{*n}`, `σ(r, t)` and `Σ_p(n, α)`.
//!
//! Group elements of `Z_p` are residues (see [`crate::zp`]).

use std::collections::HashMap;
use std::fmt;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::altdefect::{alt, nonzero_vectors, SignedVector};
use crate::error::{Error, Result};
use crate::hypergraph::{Hypergraph, PartiteFamily};
use crate::vset::{k_subsets, VertexSet};
use crate::zp::{omega, FiniteGroup, Modulus};

/// A set of vertex indices of a complex (unbounded bitset).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Face {
    words: Vec<u64>,
}

impl Face {
    pub fn empty() -> Self {
        Face { words: Vec::new() }
    }

    pub fn from_slice(vs: &[usize]) -> Self {
        let mut f = Face::empty();
        for &v in vs {
            f.insert(v);
        }
        f
    }

    pub fn insert(&mut self, v: usize) {
        let w = v / 64;
        if self.words.len() <= w {
            self.words.resize(w + 1, 0);
        }
        self.words[w] |= 1 << (v % 64);
    }

    pub fn remove(&mut self, v: usize) {
        if let Some(w) = self.words.get_mut(v / 64) {
            *w &= !(1 << (v % 64));
        }
        self.trim();
    }

    fn trim(&mut self) {
        while self.words.last() == Some(&0) {
            self.words.pop();
        }
    }

    pub fn with(&self, v: usize) -> Self {
        let mut f = self.clone();
        f.insert(v);
        f
    }

    pub fn contains(&self, v: usize) -> bool {
        self.words.get(v / 64).is_some_and(|w| w >> (v % 64) & 1 == 1)
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn is_subset(&self, other: &Face) -> bool {
        self.words.iter().enumerate().all(|(i, &w)| w & !other.words.get(i).copied().unwrap_or(0) == 0)
    }

    pub fn intersects(&self, other: &Face) -> bool {
        self.words.iter().zip(&other.words).any(|(a, b)| a & b != 0)
    }

    pub fn intersection(&self, other: &Face) -> Face {
        let mut f = Face { words: self.words.iter().zip(&other.words).map(|(a, b)| a & b).collect() };
        f.trim();
        f
    }

    pub fn union(&self, other: &Face) -> Face {
        let n = self.words.len().max(other.words.len());
        let words = (0..n).map(|i| self.words.get(i).copied().unwrap_or(0) | other.words.get(i).copied().unwrap_or(0)).collect();
        Face { words }
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(i, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let b = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(i * 64 + b)
            })
        })
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }

    pub fn first(&self) -> Option<usize> {
        self.iter().next()
    }
}

impl fmt::Debug for Face {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl Serialize for Face {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.iter())
    }
}

impl<'de> Deserialize<'de> for Face {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        Ok(Face::from_slice(&Vec::<usize>::deserialize(d)?))
    }
}

#[derive(Clone, Debug)]
enum Structure {
    /// Downward closure of the stored facets.
    Facets,
    /// Every clique of the 1-skeleton is a simplex.
    Flag,
    /// `B_0(H, Z_p)` for `r ≥ 3`, decided by a completeness test.
    Box { h: Hypergraph, p: usize, r: usize },
}

/// A finite simplicial complex with a finite group acting on its vertices.
#[derive(Clone, Debug)]
pub struct GComplex {
    labels: Vec<String>,
    structure: Structure,
    adj: Vec<Face>,
    facets: OnceLock<Vec<Face>>,
    group: FiniteGroup,
    action: Vec<Vec<usize>>,
}

impl GComplex {
    /// The downward closure of `facets`; non-maximal entries are dropped.
    pub fn from_facets(labels: Vec<String>, facets: Vec<Face>, group: FiniteGroup, action: Vec<Vec<usize>>) -> Result<Self> {
        let n = labels.len();
        if facets.iter().any(|f| f.iter().any(|v| v >= n)) {
            return Err(Error::InvalidParameters("facet vertex out of range".into()));
        }
        let facets = maximal_only(facets);
        let mut adj = vec![Face::empty(); n];
        for f in &facets {
            let vs = f.to_vec();
            for &a in &vs {
                for &b in &vs {
                    if a != b {
                        adj[a].insert(b);
                    }
                }
            }
        }
        let k = GComplex { labels, structure: Structure::Facets, adj, facets: OnceLock::new(), group, action };
        k.check_action()?;
        let _ = k.facets.set(facets);
        k.check_closed()?;
        Ok(k)
    }

    /// The clique complex of the graph `adj` (symmetric, irreflexive).
    pub fn flag(labels: Vec<String>, adj: Vec<Face>, group: FiniteGroup, action: Vec<Vec<usize>>) -> Result<Self> {
        let n = labels.len();
        if adj.len() != n {
            return Err(Error::InvalidParameters("adjacency size mismatch".into()));
        }
        for (a, row) in adj.iter().enumerate() {
            for b in row.iter() {
                if b >= n || b == a || !adj[b].contains(a) {
                    return Err(Error::InvalidParameters("adjacency must be symmetric and loop-free".into()));
                }
            }
        }
        let k = GComplex { labels, structure: Structure::Flag, adj, facets: OnceLock::new(), group, action };
        k.check_action()?;
        k.check_closed()?;
        Ok(k)
    }

    fn check_action(&self) -> Result<()> {
        let n = self.labels.len();
        let g = self.group.order();
        if self.action.len() != g || self.action.iter().any(|row| row.len() != n) {
            return Err(Error::InvalidParameters("action table has the wrong shape".into()));
        }
        for (gi, row) in self.action.iter().enumerate() {
            let mut seen = vec![false; n];
            for &v in row {
                if v >= n || seen[v] {
                    return Err(Error::InvalidParameters("group elements must act by permutations".into()));
                }
                seen[v] = true;
            }
            if gi == 0 && row.iter().enumerate().any(|(v, &w)| v != w) {
                return Err(Error::InvalidParameters("the identity must act trivially".into()));
            }
        }
        for a in 0..g {
            for b in 0..g {
                let ab = self.group.mul(a, b);
                if (0..n).any(|v| self.action[a][self.action[b][v]] != self.action[ab][v]) {
                    return Err(Error::InvalidParameters("action is not compatible with the group law".into()));
                }
            }
        }
        Ok(())
    }

    /// Every image of a facet (or 1-simplex, for flag complexes) is a simplex.
    fn check_closed(&self) -> Result<()> {
        for g in 0..self.group.order() {
            match self.structure {
                Structure::Flag => {
                    for (a, row) in self.adj.iter().enumerate() {
                        for b in row.iter() {
                            if !self.adj[self.action[g][a]].contains(self.action[g][b]) {
                                return Err(Error::InvalidParameters("action does not preserve simplices".into()));
                            }
                        }
                    }
                }
                _ => {
                    for f in self.facets() {
                        if !self.is_simplex(&self.act_face(g, f)) {
                            return Err(Error::InvalidParameters("action does not preserve simplices".into()));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    pub fn num_vertices(&self) -> usize {
        self.labels.len()
    }

    pub fn label(&self, v: usize) -> &str {
        &self.labels[v]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn act(&self, g: usize, v: usize) -> usize {
        self.action[g][v]
    }

    pub fn act_face(&self, g: usize, f: &Face) -> Face {
        let mut out = Face::empty();
        for v in f.iter() {
            out.insert(self.action[g][v]);
        }
        out
    }

    pub fn is_flag(&self) -> bool {
        matches!(self.structure, Structure::Flag)
    }

    /// Vertices joined to `v` by an edge.
    pub fn neighbors(&self, v: usize) -> &Face {
        &self.adj[v]
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (a, row) in self.adj.iter().enumerate() {
            out.extend(row.iter().filter(|&b| b > a).map(|b| (a, b)));
        }
        out
    }

    /// Membership test; the empty set is a simplex.
    pub fn is_simplex(&self, f: &Face) -> bool {
        let vs = f.to_vec();
        if vs.iter().any(|&v| v >= self.labels.len()) {
            return false;
        }
        if vs.len() <= 1 {
            return true;
        }
        if vs.iter().enumerate().any(|(i, &a)| vs[i + 1..].iter().any(|&b| !self.adj[a].contains(b))) {
            return false;
        }
        match &self.structure {
            Structure::Flag => true,
            Structure::Facets => self.facets().iter().any(|g| f.is_subset(g)),
            Structure::Box { h, p, r } => box_family(h, *p, f).is_some_and(|fam| h.is_complete_partite(&fam, *r)),
        }
    }

    /// Maximal simplices, computed on first use for flag and box complexes.
    pub fn facets(&self) -> &[Face] {
        self.facets.get_or_init(|| match &self.structure {
            Structure::Facets => unreachable!("facets are set at construction"),
            Structure::Flag => maximal_cliques(&self.adj),
            Structure::Box { h, p, r } => box_facets(h, *p, *r),
        })
    }

    /// Dimension; `-1` for the empty complex.
    pub fn dim(&self) -> isize {
        if self.labels.is_empty() {
            return -1;
        }
        if let (Structure::Box { h, p, r }, None) = (&self.structure, self.facets.get()) {
            return box_max_size(h, *p, *r) as isize - 1;
        }
        self.facets().iter().map(|f| f.len() as isize - 1).max().unwrap_or(-1)
    }

    /// Same labels, action and simplices.
    pub fn same_as(&self, other: &GComplex) -> bool {
        if self.labels != other.labels || self.action != other.action || self.adj != other.adj || self.group != other.group {
            return false;
        }
        match (&self.structure, &other.structure) {
            (Structure::Flag, Structure::Flag) => true,
            (Structure::Box { h, p, r }, Structure::Box { h: h2, p: p2, r: r2 }) => h == h2 && p == p2 && r == r2,
            _ => self.facets() == other.facets(),
        }
    }

    /// All nonempty simplices in increasing lexicographic order of their
    /// sorted vertex lists, stopping (and returning `None`) past `limit`.
    pub fn simplices(&self, limit: usize) -> Option<Vec<Face>> {
        let mut out = Vec::new();
        let mut cur = Vec::new();
        fn rec(k: &GComplex, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Face>, limit: usize) -> bool {
            for v in start..k.labels.len() {
                if cur.iter().any(|&a| !k.adj[a].contains(v)) {
                    continue;
                }
                cur.push(v);
                let f = Face::from_slice(cur);
                if cur.len() <= 2 || k.is_simplex(&f) {
                    if out.len() >= limit {
                        return false;
                    }
                    out.push(f);
                    if !rec(k, v + 1, cur, out, limit) {
                        return false;
                    }
                }
                cur.pop();
            }
            true
        }
        rec(self, 0, &mut cur, &mut out, limit).then_some(out)
    }

    /// Orbits of the vertices with their least member as representative.
    pub fn orbits(&self) -> Orbits {
        orbits_of(self.labels.len(), &self.action, |g| {
            (0..self.labels.len()).all(|v| {
                let orbit = cyclic_orbit(&self.action, &self.group, g, v);
                !self.is_simplex(&orbit)
            })
        })
    }

    pub fn is_free(&self) -> bool {
        self.orbits().free
    }

    /// Text form: vertex table, maximal simplices, action of every element.
    pub fn to_text(&self) -> String {
        let mut s = format!("complex {} {}\n", self.labels.len(), self.group.order());
        for (i, l) in self.labels.iter().enumerate() {
            s += &format!("v {i} {l}\n");
        }
        for f in self.facets() {
            let vs: Vec<String> = f.iter().map(|v| v.to_string()).collect();
            s += &format!("f {}\n", vs.join(" "));
        }
        for (g, row) in self.action.iter().enumerate() {
            let vs: Vec<String> = row.iter().map(|v| v.to_string()).collect();
            s += &format!("a {g} {}\n", vs.join(" "));
        }
        s
    }

    /// Parses [`Self::to_text`] output, with the group taken to be `Z_order`.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut labels = Vec::new();
        let mut facets = Vec::new();
        let mut action = Vec::new();
        let mut order = 0;
        for (ln, line) in text.lines().enumerate() {
            let err = |msg: &str| Error::Parse { line: ln + 1, msg: msg.to_string() };
            let mut it = line.split_whitespace();
            match it.next() {
                Some("complex") => {
                    it.next();
                    order = it.next().and_then(|x| x.parse().ok()).ok_or_else(|| err("bad header"))?;
                }
                Some("v") => {
                    it.next();
                    labels.push(it.collect::<Vec<_>>().join(" "));
                }
                Some("f") => {
                    let vs: std::result::Result<Vec<usize>, _> = it.map(str::parse).collect();
                    facets.push(Face::from_slice(&vs.map_err(|_| err("bad facet"))?));
                }
                Some("a") => {
                    it.next();
                    let vs: std::result::Result<Vec<usize>, _> = it.map(str::parse).collect();
                    action.push(vs.map_err(|_| err("bad action row"))?);
                }
                None => {}
                Some(_) => return Err(err("unknown line")),
            }
        }
        if order < 1 {
            return Err(Error::Parse { line: 1, msg: "missing header".into() });
        }
        GComplex::from_facets(labels, facets, FiniteGroup::cyclic(order), action)
    }
}

/// Vertex partition into orbits.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Orbits {
    /// `rep[v]` is the least member of the orbit of `v`.
    pub rep: Vec<usize>,
    /// `shift[v] = g` with `v = g · rep[v]`.
    pub shift: Vec<usize>,
    pub reps: Vec<usize>,
    pub free: bool,
}

impl Orbits {
    pub fn count(&self) -> usize {
        self.reps.len()
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.reps.iter().map(|&r| self.rep.iter().filter(|&&x| x == r).count()).collect()
    }
}

fn orbits_of(n: usize, action: &[Vec<usize>], free_for: impl Fn(usize) -> bool) -> Orbits {
    let mut rep = vec![usize::MAX; n];
    let mut shift = vec![0; n];
    let mut reps = Vec::new();
    for v in 0..n {
        if rep[v] != usize::MAX {
            continue;
        }
        reps.push(v);
        for (g, row) in action.iter().enumerate() {
            let w = row[v];
            if rep[w] == usize::MAX {
                rep[w] = v;
                shift[w] = g;
            }
        }
    }
    let free = (1..action.len()).all(free_for);
    Orbits { rep, shift, reps, free }
}

/// The orbit of `v` under the cyclic subgroup generated by `g`.
fn cyclic_orbit(action: &[Vec<usize>], group: &FiniteGroup, g: usize, v: usize) -> Face {
    let mut f = Face::empty();
    let mut h = g;
    f.insert(v);
    f.insert(action[g][v]);
    while h != 0 {
        f.insert(action[h][v]);
        h = group.mul(h, g);
    }
    f
}

fn maximal_only(mut facets: Vec<Face>) -> Vec<Face> {
    facets.sort_by_key(|f| std::cmp::Reverse(f.len()));
    let mut out: Vec<Face> = Vec::new();
    for f in facets {
        if !out.iter().any(|g| f.is_subset(g)) {
            out.push(f);
        }
    }
    out.sort();
    out
}

/// Maximal cliques by Bron–Kerbosch with pivoting.
fn maximal_cliques(adj: &[Face]) -> Vec<Face> {
    let n = adj.len();
    let mut out = Vec::new();
    let all = Face::from_slice(&(0..n).collect::<Vec<_>>());
    fn bk(adj: &[Face], r: &mut Vec<usize>, p: Face, x: Face, out: &mut Vec<Face>) {
        if p.is_empty() {
            if x.is_empty() {
                out.push(Face::from_slice(r));
            }
            return;
        }
        let pivot = p.union(&x).iter().max_by_key(|&u| adj[u].intersection(&p).len()).unwrap();
        let candidates: Vec<usize> = p.iter().filter(|&v| !adj[pivot].contains(v)).collect();
        let mut p = p;
        let mut x = x;
        for v in candidates {
            r.push(v);
            bk(adj, r, p.intersection(&adj[v]), x.intersection(&adj[v]), out);
            r.pop();
            p.remove(v);
            x.insert(v);
        }
    }
    if n > 0 {
        bk(adj, &mut Vec::new(), all, Face::empty(), &mut out);
    }
    out.sort();
    out
}

fn cyclic_action(p: usize, n_per: usize, index: impl Fn(usize, usize) -> usize, decode: impl Fn(usize) -> (usize, usize)) -> Vec<Vec<usize>> {
    (0..p)
        .map(|k| {
            (0..p * n_per)
                .map(|v| {
                    let (g, x) = decode(v);
                    index((g + k) % p, x)
                })
                .collect()
        })
        .collect()
}

/// `σ(r, t)`: vertex set `Z_r`, maximal simplices all `t`-subsets.
pub fn sigma_rt(r: usize, t: usize) -> Result<GComplex> {
    if t > r || t == 0 || r < 2 {
        return Err(Error::InvalidParameters(format!("σ(r, t) needs 1 <= t <= r and r >= 2, got r={r}, t={t}")));
    }
    let labels = (0..r).map(|k| omega(k, r)).collect();
    let facets = k_subsets(r, t).into_iter().map(|s| Face::from_slice(&s.to_vec())).collect();
    let action = (0..r).map(|k| (0..r).map(|v| (v + k) % r).collect()).collect();
    GComplex::from_facets(labels, facets, FiniteGroup::cyclic(r), action)
}

/// Index of `(ε, j)` in `Z_p^{*n}` and `Q_{n-1,p}` (level `j` is 0-based).
pub fn join_vertex(p: usize, eps: usize, level: usize) -> usize {
    level * p + eps
}

/// `Z_p^{*n}`: vertices `Z_p × [n]`, a set is a simplex iff no level carries
/// two vertices.
pub fn zp_join_power(p: usize, n: usize) -> Result<GComplex> {
    if p < 2 {
        return Err(Error::ModulusTooSmall(p));
    }
    let nv = p * n;
    let labels = (0..nv).map(|v| format!("({},{})", omega(v % p, p), v / p + 1)).collect();
    let adj = (0..nv).map(|v| Face::from_slice(&(0..nv).filter(|&w| w / p != v / p).collect::<Vec<_>>())).collect();
    let action = cyclic_action(p, n, |g, j| join_vertex(p, g, j), |v| (v % p, v / p));
    GComplex::flag(labels, adj, FiniteGroup::cyclic(p), action)
}

/// The join `K * L` with the diagonal action.
pub fn join(k: &GComplex, l: &GComplex) -> Result<GComplex> {
    if k.group != l.group {
        return Err(Error::GroupMismatch);
    }
    if k.num_vertices() == 0 {
        return Ok(l.clone());
    }
    if l.num_vertices() == 0 {
        return Ok(k.clone());
    }
    let nk = k.num_vertices();
    let labels: Vec<String> = k.labels.iter().cloned().chain(l.labels.iter().map(|s| format!("{s}'"))).collect();
    let action: Vec<Vec<usize>> =
        (0..k.group.order()).map(|g| k.action[g].iter().copied().chain(l.action[g].iter().map(|&w| w + nk)).collect()).collect();
    let shift = |f: &Face| Face::from_slice(&f.iter().map(|v| v + nk).collect::<Vec<_>>());
    if k.is_flag() && l.is_flag() {
        let all_l = Face::from_slice(&(nk..nk + l.num_vertices()).collect::<Vec<_>>());
        let all_k = Face::from_slice(&(0..nk).collect::<Vec<_>>());
        let adj = k.adj.iter().map(|a| a.union(&all_l)).chain(l.adj.iter().map(|a| shift(a).union(&all_k))).collect();
        return GComplex::flag(labels, adj, k.group.clone(), action);
    }
    let mut facets = Vec::new();
    for a in k.facets() {
        for b in l.facets() {
            facets.push(a.union(&shift(b)));
        }
    }
    GComplex::from_facets(labels, facets, k.group.clone(), action)
}

/// Barycentric subdivision: vertices are the nonempty simplices (in the
/// order of [`GComplex::simplices`]), simplices are inclusion chains.
/// Returns `None` when `K` has more than `limit` simplices.
pub fn barycentric_subdivision(k: &GComplex, limit: usize) -> Option<(GComplex, Vec<Face>)> {
    let faces = k.simplices(limit)?;
    let index: HashMap<&Face, usize> = faces.iter().enumerate().map(|(i, f)| (f, i)).collect();
    let labels = faces.iter().map(|f| format!("{{{}}}", f.iter().map(|v| k.labels[v].clone()).collect::<Vec<_>>().join(","))).collect();
    let mut adj = vec![Face::empty(); faces.len()];
    for (i, a) in faces.iter().enumerate() {
        for (j, b) in faces.iter().enumerate() {
            if i != j && a.len() < b.len() && a.is_subset(b) {
                adj[i].insert(j);
                adj[j].insert(i);
            }
        }
    }
    let action = (0..k.group.order()).map(|g| faces.iter().map(|f| index[&k.act_face(g, f)]).collect()).collect();
    let sd = GComplex::flag(labels, adj, k.group.clone(), action).expect("subdivision of a valid complex");
    Some((sd, faces))
}

/// Index of `(ε, v)` in `B_0(H, Z_p)`.
pub fn box_vertex(n: usize, eps: usize, v: usize) -> usize {
    eps * n + v
}

/// Decodes a face of `B_0(H, Z_p)` into its parts (indexed by residue), or
/// `None` when two parts overlap.
fn box_family(h: &Hypergraph, p: usize, f: &Face) -> Option<PartiteFamily> {
    let n = h.n();
    let mut parts = vec![VertexSet::EMPTY; p];
    for x in f.iter() {
        let (eps, v) = (x / n, x % n);
        parts[eps].insert(v);
    }
    PartiteFamily::new(parts).ok()
}

/// Decodes a face of a box complex into the family `(U_ε)` by residue.
pub fn box_parts(n: usize, p: usize, f: &Face) -> Vec<VertexSet> {
    let mut parts = vec![VertexSet::EMPTY; p];
    for x in f.iter() {
        parts[x / n].insert(x % n);
    }
    parts
}

/// `B_0(H, Z_p)`: vertices `Z_p × V(H)`, simplices `⋃ {ε} × U_ε` with the
/// `U_ε` pairwise disjoint and `H[U_ε]` complete `r`-uniform `p`-partite.
pub fn box_complex(h: &Hypergraph, p: Modulus) -> Result<GComplex> {
    let r = h.require_uniformity()?;
    let p = check_modulus(p, r)?;
    let n = h.n();
    let labels = (0..p * n).map(|x| format!("({},{})", omega(x / n, p), x % n + 1)).collect();
    let action = cyclic_action(p, n, |g, v| box_vertex(n, g, v), |x| (x / n, x % n));
    let mut adj = vec![Face::empty(); p * n];
    for a in 0..p * n {
        for b in 0..p * n {
            let (ea, va) = (a / n, a % n);
            let (eb, vb) = (b / n, b % n);
            let ok = if va == vb {
                false
            } else if ea == eb || r > 2 {
                true
            } else {
                h.has_edge(VertexSet::singleton(va).with(vb))
            };
            if ok {
                adj[a].insert(b);
            }
        }
    }
    let group = FiniteGroup::cyclic(p);
    if r == 2 {
        return GComplex::flag(labels, adj, group, action);
    }
    Ok(GComplex { labels, structure: Structure::Box { h: h.clone(), p, r }, adj, facets: OnceLock::new(), group, action })
}

fn check_modulus(p: Modulus, r: usize) -> Result<usize> {
    let pv = p.get();
    if pv < r {
        return Err(Error::ModulusBelowUniformity { p: pv, r });
    }
    Ok(pv)
}

/// Maximal complete partite families of `B_0(H, Z_p)` (`r ≥ 3`).
fn box_facets(h: &Hypergraph, p: usize, r: usize) -> Vec<Face> {
    let mut out = Vec::new();
    let mut parts = vec![VertexSet::EMPTY; p];
    fn rec(h: &Hypergraph, r: usize, v: usize, parts: &mut Vec<VertexSet>, out: &mut Vec<Face>) {
        let n = h.n();
        if v == n {
            // maximal iff no unused vertex can join any part
            let used = parts.iter().fold(VertexSet::EMPTY, |a, b| a.union(*b));
            let maximal = (0..n).filter(|&w| !used.contains(w)).all(|w| (0..parts.len()).all(|i| !h.can_join_part(parts, i, w, r)));
            if maximal && !used.is_empty() {
                let mut f = Face::empty();
                for (eps, part) in parts.iter().enumerate() {
                    for x in part.iter() {
                        f.insert(box_vertex(n, eps, x));
                    }
                }
                out.push(f);
            }
            return;
        }
        for i in 0..parts.len() {
            if h.can_join_part(parts, i, v, r) {
                parts[i].insert(v);
                rec(h, r, v + 1, parts, out);
                parts[i].remove(v);
            }
        }
        // the maximality test at the leaf discards needless omissions
        rec(h, r, v + 1, parts, out);
    }
    rec(h, r, 0, &mut parts, &mut out);
    out.sort();
    out
}

/// Largest total size of a complete partite family (branch and bound).
fn box_max_size(h: &Hypergraph, p: usize, r: usize) -> usize {
    fn rec(h: &Hypergraph, r: usize, v: usize, size: usize, parts: &mut Vec<VertexSet>, best: &mut usize) {
        if size + (h.n() - v) <= *best {
            return;
        }
        if v == h.n() {
            *best = size;
            return;
        }
        for i in 0..parts.len() {
            if h.can_join_part(parts, i, v, r) {
                parts[i].insert(v);
                rec(h, r, v + 1, size + 1, parts, best);
                parts[i].remove(v);
            }
        }
        rec(h, r, v + 1, size, parts, best);
    }
    let mut best = 0;
    rec(h, r, 0, 0, &mut vec![VertexSet::EMPTY; p], &mut best);
    best
}

/// A finite poset with a `Z_p` action given by the generator `ω`.
#[derive(Clone, Debug)]
pub struct GPoset {
    labels: Vec<String>,
    p: usize,
    up: Vec<Vec<usize>>,
    down: Vec<Vec<usize>>,
    above: Vec<Face>,
    gen: Vec<usize>,
}

impl GPoset {
    /// Builds the poset generated by the relations `a < b` in `covers`.
    /// `gen[x]` is `ω · x`; it must be an order automorphism with `ω^p = 1`.
    pub fn from_relations(labels: Vec<String>, covers: &[(usize, usize)], gen: Vec<usize>, p: usize) -> Result<Self> {
        let n = labels.len();
        if gen.len() != n || covers.iter().any(|&(a, b)| a >= n || b >= n || a == b) {
            return Err(Error::InvalidParameters("malformed poset data".into()));
        }
        let mut up = vec![Vec::new(); n];
        let mut down = vec![Vec::new(); n];
        for &(a, b) in covers {
            up[a].push(b);
            down[b].push(a);
        }
        for l in up.iter_mut().chain(down.iter_mut()) {
            l.sort_unstable();
            l.dedup();
        }
        // topological order (Kahn) for the reachability closure
        let mut indeg: Vec<usize> = down.iter().map(Vec::len).collect();
        let mut stack: Vec<usize> = (0..n).filter(|&v| indeg[v] == 0).collect();
        let mut topo = Vec::with_capacity(n);
        while let Some(v) = stack.pop() {
            topo.push(v);
            for &w in &up[v] {
                indeg[w] -= 1;
                if indeg[w] == 0 {
                    stack.push(w);
                }
            }
        }
        if topo.len() != n {
            return Err(Error::InvalidParameters("order relation has a cycle".into()));
        }
        let mut above = vec![Face::empty(); n];
        for &v in topo.iter().rev() {
            let mut a = Face::empty();
            for &w in &up[v] {
                a.insert(w);
                a = a.union(&above[w]);
            }
            above[v] = a;
        }
        let poset = GPoset { labels, p, up, down, above, gen };
        poset.check_action()?;
        Ok(poset)
    }

    fn check_action(&self) -> Result<()> {
        let n = self.labels.len();
        let mut seen = vec![false; n];
        for &w in &self.gen {
            if w >= n || seen[w] {
                return Err(Error::InvalidParameters("ω must act by a permutation".into()));
            }
            seen[w] = true;
        }
        if (0..n).any(|x| self.act(self.p, x) != x) {
            return Err(Error::InvalidParameters("ω^p must act trivially".into()));
        }
        for x in 0..n {
            for &y in &self.up[x] {
                if !self.less(self.gen[x], self.gen[y]) {
                    return Err(Error::InvalidParameters("action does not preserve the order".into()));
                }
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn label(&self, x: usize) -> &str {
        &self.labels[x]
    }

    /// `ω^k · x`.
    pub fn act(&self, k: usize, x: usize) -> usize {
        (0..k % self.p).fold(x, |y, _| self.gen[y])
    }

    pub fn generator(&self) -> &[usize] {
        &self.gen
    }

    /// Strict order `x < y`.
    pub fn less(&self, x: usize, y: usize) -> bool {
        self.above[x].contains(y)
    }

    pub fn leq(&self, x: usize, y: usize) -> bool {
        x == y || self.less(x, y)
    }

    pub fn comparable(&self, x: usize, y: usize) -> bool {
        self.less(x, y) || self.less(y, x)
    }

    /// Generating relations `x < y` as given (cover pairs for the built-in posets).
    pub fn covers(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (x, ys) in self.up.iter().enumerate() {
            out.extend(ys.iter().map(|&y| (x, y)));
        }
        out
    }

    pub fn below(&self, y: usize) -> &[usize] {
        &self.down[y]
    }

    pub fn above_covers(&self, x: usize) -> &[usize] {
        &self.up[x]
    }

    /// Length (number of elements) of a longest chain.
    pub fn height(&self) -> usize {
        let n = self.len();
        let mut memo = vec![0usize; n];
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&x| std::cmp::Reverse(self.above[x].len()));
        // elements with larger up-sets come first, so process in reverse
        for &x in order.iter().rev() {
            memo[x] = 1 + self.up[x].iter().map(|&y| memo[y]).max().unwrap_or(0);
        }
        memo.into_iter().max().unwrap_or(0)
    }

    pub fn orbits(&self) -> Orbits {
        let action: Vec<Vec<usize>> = (0..self.p).map(|k| (0..self.len()).map(|x| self.act(k, x)).collect()).collect();
        orbits_of(self.len(), &action, |k| (0..self.len()).all(|x| action[k][x] != x))
    }

    pub fn is_free(&self) -> bool {
        self.orbits().free
    }

    /// Text form: element table, generating relations, generator action.
    pub fn to_text(&self) -> String {
        let mut s = format!("poset {} {}\n", self.len(), self.p);
        for (i, l) in self.labels.iter().enumerate() {
            s += &format!("x {i} {l}\n");
        }
        for (a, b) in self.covers() {
            s += &format!("c {a} {b}\n");
        }
        let g: Vec<String> = self.gen.iter().map(|v| v.to_string()).collect();
        s += &format!("g {}\n", g.join(" "));
        s
    }
}

/// `Q_{n,p}`: `Z_p × {0..n}` with `(ε, i) < (ε', j)` iff `i < j`.
/// Element `(ε, i)` has index [`join_vertex`]`(p, ε, i)`.
pub fn q_poset(n: usize, p: usize) -> Result<GPoset> {
    if p < 2 {
        return Err(Error::ModulusTooSmall(p));
    }
    let total = p * (n + 1);
    let labels = (0..total).map(|v| format!("({},{})", omega(v % p, p), v / p)).collect();
    let mut rel = Vec::new();
    for i in 0..n {
        for a in 0..p {
            for b in 0..p {
                rel.push((join_vertex(p, a, i), join_vertex(p, b, i + 1)));
            }
        }
    }
    let gen = (0..total).map(|v| join_vertex(p, (v % p + 1) % p, v / p)).collect();
    GPoset::from_relations(labels, &rel, gen, p)
}

/// `Hom(K^r_p, H)` with its elements as `p`-tuples of vertex sets.
#[derive(Clone, Debug)]
pub struct HomPoset {
    pub poset: GPoset,
    pub tuples: Vec<Vec<VertexSet>>,
}

/// `Hom(K^r_p, H)`: `p`-tuples of nonempty pairwise disjoint sets spanning a
/// complete `r`-uniform `p`-partite subhypergraph, ordered componentwise by
/// inclusion, with `ω · (U_1, …, U_p) = (U_2, …, U_p, U_1)`.
pub fn hom_poset(h: &Hypergraph, r: usize, p: Modulus) -> Result<HomPoset> {
    let hr = h.require_uniformity()?;
    if hr != r {
        return Err(Error::UniformityMismatch { size: hr, r });
    }
    let p = check_modulus(p, r)?;
    let n = h.n();
    let mut tuples = Vec::new();
    let mut parts = vec![VertexSet::EMPTY; p];
    fn rec(h: &Hypergraph, r: usize, v: usize, parts: &mut Vec<VertexSet>, out: &mut Vec<Vec<VertexSet>>) {
        let n = h.n();
        let empty = parts.iter().filter(|x| x.is_empty()).count();
        if n - v < empty {
            return;
        }
        if v == n {
            out.push(parts.clone());
            return;
        }
        rec(h, r, v + 1, parts, out);
        for i in 0..parts.len() {
            if h.can_join_part(parts, i, v, r) {
                parts[i].insert(v);
                rec(h, r, v + 1, parts, out);
                parts[i].remove(v);
            }
        }
    }
    rec(h, r, 0, &mut parts, &mut tuples);
    // enumeration already checks completeness incrementally; nonempty parts only
    tuples.retain(|t| t.iter().all(|x| !x.is_empty()));
    tuples.sort_by(|a, b| {
        let sa: usize = a.iter().map(|x| x.len()).sum();
        let sb: usize = b.iter().map(|x| x.len()).sum();
        sa.cmp(&sb).then_with(|| a.cmp(b))
    });
    let index: HashMap<&Vec<VertexSet>, usize> = tuples.iter().enumerate().map(|(i, t)| (t, i)).collect();
    let mut rel = Vec::new();
    for (i, t) in tuples.iter().enumerate() {
        for j in 0..p {
            for v in 0..n {
                if t.iter().any(|x| x.contains(v)) {
                    continue;
                }
                let mut bigger = t.clone();
                bigger[j].insert(v);
                if let Some(&k) = index.get(&bigger) {
                    rel.push((i, k));
                }
            }
        }
    }
    let gen = tuples
        .iter()
        .map(|t| {
            let rotated: Vec<VertexSet> = (0..p).map(|i| t[(i + 1) % p]).collect();
            index[&rotated]
        })
        .collect();
    let labels = tuples.iter().map(|t| tuple_label(t)).collect();
    let poset = GPoset::from_relations(labels, &rel, gen, p)?;
    Ok(HomPoset { poset, tuples })
}

fn tuple_label(t: &[VertexSet]) -> String {
    let parts: Vec<String> = t.iter().map(|x| format!("{{{}}}", x.iter().map(|v| (v + 1).to_string()).collect::<Vec<_>>().join(","))).collect();
    format!("({})", parts.join(","))
}

/// `ΔP`: the chains of `P`.
pub fn order_complex(poset: &GPoset) -> GComplex {
    let n = poset.len();
    let adj = (0..n).map(|x| Face::from_slice(&(0..n).filter(|&y| poset.comparable(x, y)).collect::<Vec<_>>())).collect();
    let action = (0..poset.p).map(|k| (0..n).map(|x| poset.act(k, x)).collect()).collect();
    GComplex::flag(poset.labels.clone(), adj, FiniteGroup::cyclic(poset.p), action).expect("order complex of a valid poset")
}

/// The poset of signed vectors with `alt ≥ α + 1` ordered by `⊆`.
pub fn sigma_poset(n: usize, p: usize, alpha: usize) -> Result<(GPoset, Vec<SignedVector>)> {
    if alpha > n {
        return Err(Error::InvalidParameters(format!("α = {alpha} exceeds n = {n}")));
    }
    if n == 0 {
        return Err(Error::InvalidParameters("n must be positive".into()));
    }
    let vectors: Vec<SignedVector> = nonzero_vectors(n, p).into_iter().filter(|x| alt(x) > alpha).collect();
    let index: HashMap<&SignedVector, usize> = vectors.iter().enumerate().map(|(i, x)| (x, i)).collect();
    let mut rel = Vec::new();
    for (i, x) in vectors.iter().enumerate() {
        for pos in 0..n {
            if x.entry(pos).is_some() {
                continue;
            }
            for eps in 0..p {
                if let Some(&j) = index.get(&x.with_entry(pos, Some(eps))) {
                    rel.push((i, j));
                }
            }
        }
    }
    // one-step extensions generate ⊆ only if intermediate vectors exist; add all pairs
    for (i, x) in vectors.iter().enumerate() {
        for (j, y) in vectors.iter().enumerate() {
            if i != j && x.is_subset(y) {
                rel.push((i, j));
            }
        }
    }
    let gen = vectors.iter().map(|x| index[&x.rotate(1)]).collect();
    let labels = vectors.iter().map(|x| format!("{x:?}")).collect();
    Ok((GPoset::from_relations(labels, &rel, gen, p)?, vectors))
}

/// `Σ_p(n, α) = Δ{X : alt(X) ≥ α + 1}`.
pub fn sigma_complex(n: usize, p: Modulus, alpha: usize) -> Result<GComplex> {
    let (poset, _) = sigma_poset(n, p.get(), alpha)?;
    Ok(order_complex(&poset))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(p: usize) -> Modulus {
        Modulus::prime(p).unwrap()
    }

    #[test]
    fn standard_spaces() {
        let s = sigma_rt(3, 2).unwrap();
        assert_eq!(s.num_vertices(), 3);
        assert_eq!(s.facets().len(), 3);
        assert_eq!(s.dim(), 1);
        let z22 = zp_join_power(2, 2).unwrap();
        assert_eq!(z22.num_vertices(), 4);
        assert_eq!(z22.facets().len(), 4);
        for n in 1..=4 {
            assert_eq!(zp_join_power(3, n).unwrap().dim(), n as isize - 1);
        }
        assert!(sigma_rt(2, 3).is_err());
    }

    #[test]
    fn joins() {
        let s0 = zp_join_power(2, 1).unwrap();
        let j = join(&s0, &s0).unwrap();
        assert_eq!(j.facets().len(), zp_join_power(2, 2).unwrap().facets().len());
        let s = sigma_rt(3, 2).unwrap();
        let z3 = zp_join_power(3, 1).unwrap();
        let js = join(&s, &z3).unwrap();
        assert_eq!(js.dim(), s.dim() + z3.dim() + 1);
        let empty = zp_join_power(2, 0).unwrap();
        assert_eq!(join(&empty, &s0).unwrap().facets(), s0.facets());
        assert!(matches!(join(&s, &s0), Err(Error::GroupMismatch)));
    }

    #[test]
    fn subdivisions() {
        let edge = GComplex::from_facets(
            vec!["a".into(), "b".into()],
            vec![Face::from_slice(&[0, 1])],
            FiniteGroup::cyclic(2),
            vec![vec![0, 1], vec![1, 0]],
        )
        .unwrap();
        let (sd, faces) = barycentric_subdivision(&edge, 100).unwrap();
        assert_eq!((sd.num_vertices(), sd.edges().len()), (3, 2));
        assert_eq!(faces.len(), 3);
        let tri = sigma_rt(3, 2).unwrap();
        let (sd, _) = barycentric_subdivision(&tri, 100).unwrap();
        assert_eq!((sd.num_vertices(), sd.edges().len()), (6, 6));
        assert!(sd.edges().iter().all(|&(a, _)| sd.neighbors(a).len() == 2));
    }

    #[test]
    fn box_complex_examples() {
        let k2 = Hypergraph::complete(2, 2).unwrap();
        let b = box_complex(&k2, z(2)).unwrap();
        assert_eq!(b.num_vertices(), 4);
        assert_eq!(b.facets().len(), 4);
        assert!(b.facets().iter().all(|f| f.len() == 2));
        assert!(b.is_free());
        let single = Hypergraph::edgeless(1, 2).unwrap();
        let b = box_complex(&single, z(2)).unwrap();
        assert_eq!(b.facets(), &[Face::from_slice(&[0]), Face::from_slice(&[1])]);
        assert!(box_complex(&k2, Modulus::prime(2).unwrap()).is_ok());
        let k3 = Hypergraph::complete(3, 3).unwrap();
        assert!(matches!(box_complex(&k3, z(2)), Err(Error::ModulusBelowUniformity { .. })));
    }

    #[test]
    fn box_complex_uniformity_three() {
        let e = Hypergraph::complete(3, 3).unwrap();
        let b = box_complex(&e, z(3)).unwrap();
        assert!(b.is_free());
        // the whole edge split into three singleton parts is a simplex
        let f = Face::from_slice(&[box_vertex(3, 0, 0), box_vertex(3, 1, 1), box_vertex(3, 2, 2)]);
        assert!(b.is_simplex(&f));
        assert!(b.facets().iter().all(|f| b.is_simplex(f)));
        let bad = Face::from_slice(&[box_vertex(3, 0, 0), box_vertex(3, 1, 0)]);
        assert!(!b.is_simplex(&bad));
    }

    #[test]
    fn hom_examples() {
        let k2 = Hypergraph::complete(2, 2).unwrap();
        let hom = hom_poset(&k2, 2, z(2)).unwrap();
        assert_eq!(hom.poset.len(), 2);
        assert!(!hom.poset.comparable(0, 1));
        assert_eq!(hom.poset.act(1, 0), 1);
        let k3 = Hypergraph::complete(3, 2).unwrap();
        assert_eq!(hom_poset(&k3, 2, z(2)).unwrap().poset.len(), 12);
        let c5 = Hypergraph::cycle(5).unwrap();
        let c5_3 = Hypergraph::edgeless(5, 3).unwrap();
        assert!(hom_poset(&c5_3, 3, z(3)).unwrap().poset.is_empty());
        assert!(hom_poset(&c5, 2, z(2)).unwrap().poset.is_free());
        let pet = crate::hypergraph::petersen();
        assert_eq!(hom_poset(&pet, 2, z(2)).unwrap().poset.len(), 110);
    }

    #[test]
    fn q_and_order_complexes() {
        let q0 = q_poset(0, 2).unwrap();
        assert_eq!(q0.len(), 2);
        let d0 = order_complex(&q0);
        assert_eq!(d0.facets().len(), 2);
        let q1 = q_poset(1, 2).unwrap();
        let d1 = order_complex(&q1);
        assert_eq!(d1.edges().len(), 4);
        let q13 = q_poset(1, 3).unwrap();
        assert_eq!(q13.len(), 6);
        for a in 0..3 {
            for b in 0..3 {
                assert!(q13.less(join_vertex(3, a, 0), join_vertex(3, b, 1)));
            }
        }
        for n in 0..4 {
            assert_eq!(q_poset(n, 2).unwrap().height(), n + 1);
        }
        let o = q13.orbits();
        assert_eq!((o.count(), o.free), (2, true));
        assert_eq!(o.sizes(), vec![3, 3]);
    }

    #[test]
    fn sigma_complexes() {
        let s = sigma_complex(2, z(2), 1).unwrap();
        assert_eq!(s.num_vertices(), 2);
        assert!(s.edges().is_empty());
        assert_eq!(sigma_complex(2, z(2), 0).unwrap().num_vertices(), 8);
        assert_eq!(sigma_complex(3, z(2), 3).unwrap().num_vertices(), 0);
        assert!(sigma_complex(2, z(2), 3).is_err());
        assert!(sigma_complex(3, z(3), 1).unwrap().is_free());
    }

    #[test]
    fn orbit_decomposition() {
        let z22 = zp_join_power(2, 2).unwrap();
        let o = z22.orbits();
        assert_eq!((o.count(), o.free), (2, true));
        // an edge swapped by the involution is a fixed simplex
        let fixed = GComplex::from_facets(
            vec!["a".into(), "b".into()],
            vec![Face::from_slice(&[0, 1])],
            FiniteGroup::cyclic(2),
            vec![vec![0, 1], vec![1, 0]],
        )
        .unwrap();
        assert!(!fixed.is_free());
    }

    #[test]
    fn text_roundtrip() {
        let k = sigma_rt(3, 2).unwrap();
        let back = GComplex::from_text(&k.to_text()).unwrap();
        assert_eq!(back.facets(), k.facets());
        assert_eq!(back.labels(), k.labels());
        assert!(q_poset(1, 2).unwrap().to_text().starts_with("poset 4 2"));
    }
}
