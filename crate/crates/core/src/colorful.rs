//! Colorful complete multipartite subhypergraphs in properly colored
//! hypergraphs, alternating bipartite subgraphs in colored graphs, and lower
//! bounds for the local chromatic number together with a replay of their
//! two-case argument on a concrete witness.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::altdefect::{alt_sigma, Ordering, SignedVector};
use crate::complex::hom_poset;
use crate::error::{Error, Result};
use crate::hypergraph::{kneser, Coloring, Hypergraph, NodeCounter, PartiteFamily, SearchBudget};
use crate::index::{xind_exact, CrossIndex};
use crate::tucker::{check_fan_chain, find_fan_chain, lambda_from_coloring, ChainSearch, FanChain};
use crate::vset::VertexSet;
use crate::zp::Modulus;

/// `(U_1, …, U_p)` spanning a complete `r`-uniform `p`-partite
/// subhypergraph, each part rainbow, sizes within one of each other.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColorfulWitness {
    pub parts: PartiteFamily,
    pub total_size: usize,
    /// Colors of each part, in vertex order.
    pub colors: Vec<Vec<usize>>,
    /// Set when the modulus is not prime.
    pub experimental: bool,
}

impl ColorfulWitness {
    fn new(parts: Vec<VertexSet>, c: &Coloring, experimental: bool) -> Result<Self> {
        let colors = parts.iter().map(|p| p.iter().map(|v| c.color(v)).collect()).collect();
        let parts = PartiteFamily::new(parts)?;
        Ok(ColorfulWitness { total_size: parts.total_size(), parts, colors, experimental })
    }
}

/// Re-checks a witness from scratch: disjoint parts, rainbow parts, balanced
/// sizes, and every `r`-set meeting `r` distinct parts once is an edge.
pub fn validate_colorful_witness(h: &Hypergraph, c: &Coloring, w: &ColorfulWitness) -> std::result::Result<(), String> {
    let parts = w.parts.parts();
    let mut seen = VertexSet::EMPTY;
    for (i, p) in parts.iter().enumerate() {
        if p.intersects(seen) {
            return Err(format!("part {} overlaps an earlier part", i + 1));
        }
        seen = seen.union(*p);
        if p.iter().any(|v| v >= h.n()) {
            return Err(format!("part {} leaves the vertex range", i + 1));
        }
        let mut colors: Vec<usize> = p.iter().map(|v| c.color(v)).collect();
        if colors != w.colors[i] {
            return Err(format!("recorded colors of part {} are stale", i + 1));
        }
        colors.sort_unstable();
        if colors.windows(2).any(|x| x[0] == x[1]) {
            return Err(format!("part {} repeats a color", i + 1));
        }
    }
    let sizes: Vec<usize> = parts.iter().map(|p| p.len()).collect();
    if sizes.iter().sum::<usize>() != w.total_size {
        return Err("total size does not match the parts".into());
    }
    if sizes.iter().max().unwrap_or(&0) - sizes.iter().min().unwrap_or(&0) > 1 {
        return Err(format!("part sizes {sizes:?} are not balanced"));
    }
    let r = h.uniformity().ok_or("hypergraph has no uniformity")?;
    // every transversal r-set, by brute force over vertices of the union
    let owner: Vec<Option<usize>> = (0..h.n()).map(|v| parts.iter().position(|p| p.contains(v))).collect();
    let members: Vec<usize> = seen.iter().collect();
    let mut missing = None;
    let mut stack = vec![(0usize, Vec::<usize>::new())];
    while let Some((start, chosen)) = stack.pop() {
        if chosen.len() == r {
            let e: VertexSet = chosen.iter().copied().collect();
            if !h.has_edge(e) {
                missing = Some(chosen);
                break;
            }
            continue;
        }
        for i in start..members.len() {
            let v = members[i];
            if chosen.iter().all(|&u| owner[u] != owner[v]) {
                let mut next = chosen.clone();
                next.push(v);
                stack.push((i + 1, next));
            }
        }
    }
    if let Some(e) = missing {
        return Err(format!("transversal {e:?} is not an edge"));
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "result", rename_all = "snake_case")]
pub enum ColorfulSearch {
    Found(ColorfulWitness),
    /// The target is out of reach; `best` achieves the largest total.
    Counterexample {
        target: usize,
        best_total: usize,
        best: ColorfulWitness,
    },
    /// The node budget ran out; `best` is the largest witness confirmed.
    Unknown {
        target: usize,
        best: Option<ColorfulWitness>,
    },
}

impl ColorfulSearch {
    pub fn witness(&self) -> Option<&ColorfulWitness> {
        match self {
            ColorfulSearch::Found(w) => Some(w),
            _ => None,
        }
    }
}

struct PartSearch<'a> {
    h: &'a Hypergraph,
    c: &'a Coloring,
    r: usize,
    sizes: Vec<usize>,
    parts: Vec<VertexSet>,
    masks: Vec<u64>,
    counter: NodeCounter,
    exhausted: bool,
}

impl PartSearch<'_> {
    fn rec(&mut self, v: usize, left: usize) -> bool {
        if left == 0 {
            return true;
        }
        if v == self.h.n() || self.h.n() - v < left {
            return false;
        }
        if !self.counter.tick() {
            self.exhausted = true;
            return false;
        }
        let bit = 1u64 << self.c.color(v);
        for i in 0..self.parts.len() {
            if self.parts[i].len() == self.sizes[i] || self.masks[i] & bit != 0 {
                continue;
            }
            // equal-size parts are opened in order
            if self.parts[i].is_empty() && i > 0 && self.sizes[i] == self.sizes[i - 1] && self.parts[i - 1].is_empty() {
                continue;
            }
            if !self.h.can_join_part(&self.parts, i, v, self.r) {
                continue;
            }
            self.parts[i].insert(v);
            self.masks[i] |= bit;
            if self.rec(v + 1, left - 1) {
                return true;
            }
            self.parts[i].remove(v);
            self.masks[i] &= !bit;
            if self.exhausted {
                return false;
            }
        }
        self.rec(v + 1, left)
    }
}

/// Part sizes of a balanced family of `total` vertices over `p` parts, larger
/// parts first.
pub fn balanced_sizes(total: usize, p: usize) -> Vec<usize> {
    (0..p).map(|i| total / p + usize::from(i < total % p)).collect()
}

fn search_total(h: &Hypergraph, c: &Coloring, r: usize, p: usize, total: usize, counter: &mut NodeCounter) -> (Option<Vec<VertexSet>>, bool) {
    let mut s = PartSearch {
        h,
        c,
        r,
        sizes: balanced_sizes(total, p),
        parts: vec![VertexSet::EMPTY; p],
        masks: vec![0; p],
        counter: NodeCounter::new(SearchBudget::nodes(counter.remaining())),
        exhausted: false,
    };
    let found = s.rec(0, total);
    counter.consume(s.counter.used());
    (found.then_some(s.parts), s.exhausted)
}

/// A colorful balanced complete `r`-uniform `p`-partite subhypergraph with
/// `target` vertices (`r` the uniformity of `H`), the first one in vertex
/// order with larger parts first. When none exists, smaller totals are tried
/// downward and the largest one achieved is reported.
pub fn find_colorful_balanced(h: &Hypergraph, c: &Coloring, p: Modulus, target: usize, budget: SearchBudget) -> Result<ColorfulSearch> {
    let r = h.require_uniformity()?;
    let pv = p.get();
    if pv < r {
        return Err(Error::ModulusBelowUniformity { p: pv, r });
    }
    if c.colors().len() != h.n() {
        return Err(Error::PartialColoring { got: c.colors().len(), n: h.n() });
    }
    h.require_proper(c)?;
    let experimental = !p.is_prime();
    let mut counter = NodeCounter::new(budget);
    let mut total = target.min(h.n());
    loop {
        let (parts, exhausted) = search_total(h, c, r, pv, total, &mut counter);
        if let Some(parts) = parts {
            let w = ColorfulWitness::new(parts, c, experimental)?;
            return Ok(if total == target {
                ColorfulSearch::Found(w)
            } else {
                ColorfulSearch::Counterexample { target, best_total: total, best: w }
            });
        }
        if exhausted {
            return Ok(ColorfulSearch::Unknown { target, best: None });
        }
        // the empty family always qualifies
        total -= 1;
    }
}

/// Which proper colorings to test.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum CorpusPolicy {
    /// Every proper coloring with at most `max_colors` colors, up to color
    /// permutation, capped at a million.
    Exhaustive { max_colors: usize },
    /// Seeded random proper colorings, palette drawn from
    /// `min_colors..=max_colors`.
    Sampled { count: usize, min_colors: usize, max_colors: usize, seed: u64 },
}

pub const EXHAUSTIVE_CAP: usize = 1_000_000;

pub fn coloring_corpus(h: &Hypergraph, policy: CorpusPolicy) -> Vec<Coloring> {
    match policy {
        CorpusPolicy::Exhaustive { max_colors } => h.proper_colorings(max_colors, EXHAUSTIVE_CAP),
        CorpusPolicy::Sampled { count, min_colors, max_colors, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut out = Vec::with_capacity(count);
            let mut failures = 0;
            while out.len() < count && failures < 100 {
                let palette = rng.gen_range(min_colors.max(1)..=max_colors.max(min_colors.max(1)));
                match h.random_proper_coloring(palette, &mut rng) {
                    Some(c) => out.push(c),
                    None => failures += 1,
                }
            }
            out
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CorpusReport {
    pub target: usize,
    pub colorings: usize,
    pub found: usize,
    /// Colorings without a witness of the target size, with the best total.
    pub counterexamples: Vec<(Coloring, usize)>,
    pub unknown: usize,
}

impl CorpusReport {
    pub fn passed(&self) -> bool {
        self.counterexamples.is_empty() && self.unknown == 0 && self.found == self.colorings
    }
}

/// Runs [`find_colorful_balanced`] on every coloring, in parallel, and
/// re-validates each witness.
pub fn colorful_corpus(h: &Hypergraph, p: Modulus, target: usize, colorings: &[Coloring], budget: SearchBudget) -> Result<CorpusReport> {
    let results: Vec<Result<ColorfulSearch>> = colorings.par_iter().map(|c| find_colorful_balanced(h, c, p, target, budget)).collect();
    let mut report = CorpusReport { target, colorings: colorings.len(), found: 0, counterexamples: Vec::new(), unknown: 0 };
    for (c, res) in colorings.iter().zip(results) {
        match res? {
            ColorfulSearch::Found(w) => {
                if let Err(e) = validate_colorful_witness(h, c, &w) {
                    return Err(Error::Precondition(format!("search returned an invalid witness: {e}")));
                }
                report.found += 1;
            }
            ColorfulSearch::Counterexample { best_total, .. } => report.counterexamples.push((c.clone(), best_total)),
            ColorfulSearch::Unknown { .. } => report.unknown += 1,
        }
    }
    Ok(report)
}

/// The colorful subhypergraph of `KG^p(F)` read off the fan chain of the
/// labeling built from `c` and `σ`, with its `|V(F)| − alt_p(F, σ)` vertices.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AlternationWitness {
    pub alternation: usize,
    pub target: usize,
    pub chain: Option<FanChain<SignedVector>>,
    /// `None` when no chain exists, a counterexample to the chain lemma.
    pub witness: Option<ColorfulWitness>,
}

pub fn colorful_from_alternation(f: &Hypergraph, p: Modulus, c: &Coloring, sigma: &Ordering) -> Result<AlternationWitness> {
    let pv = p.get();
    let kg = kneser(f, pv)?;
    let (lambda, alpha) = lambda_from_coloring(f, pv, c, sigma)?;
    debug_assert_eq!(alpha, alt_sigma(f, pv, sigma)?);
    let target = f.n() - alpha;
    let ChainSearch::Found(chain) = find_fan_chain(&lambda, alpha)? else {
        return Ok(AlternationWitness { alternation: alpha, target, chain: None, witness: None });
    };
    if !check_fan_chain(&lambda, alpha, &chain) {
        return Err(Error::Precondition("fan chain fails its own check".into()));
    }
    let parts = crate::tucker::colorful_parts_from_chain(f, pv, c, sigma, alpha, &chain)?;
    let mut ordered = parts;
    // larger parts first, matching the balanced search
    ordered.sort_by_key(|p| std::cmp::Reverse(p.len()));
    let w = ColorfulWitness::new(ordered, c, !p.is_prime())?;
    validate_colorful_witness(&kg, c, &w).map_err(Error::Precondition)?;
    Ok(AlternationWitness { alternation: alpha, target, chain: Some(chain), witness: Some(w) })
}

/// A complete bipartite `K_{⌈t/2⌉,⌊t/2⌋}` with `t` distinct colors which,
/// sorted, alternate between the two sides.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZigzagWitness {
    pub t: usize,
    /// Vertices in increasing color order; even positions form the first side.
    pub vertices: Vec<usize>,
    pub colors: Vec<usize>,
    pub sides: [Vec<usize>; 2],
}

/// Re-checks sides, adjacency and strict interleaving of colors.
pub fn validate_zigzag(g: &Hypergraph, c: &Coloring, w: &ZigzagWitness) -> bool {
    let t = w.t;
    let colors: Vec<usize> = w.vertices.iter().map(|&v| c.color(v)).collect();
    let mut a: Vec<(usize, usize)> = w.sides[0].iter().map(|&v| (c.color(v), 0)).collect();
    a.extend(w.sides[1].iter().map(|&v| (c.color(v), 1)));
    a.sort_unstable();
    let interleaved = a.windows(2).all(|x| x[0].0 < x[1].0 && x[0].1 != x[1].1);
    let complete = w.sides[0].iter().all(|&u| w.sides[1].iter().all(|&v| g.has_edge(VertexSet::singleton(u).with(v))));
    w.vertices.len() == t
        && colors == w.colors
        && w.sides[0].len() == t.div_ceil(2)
        && w.sides[1].len() == t / 2
        && a.len() == t
        && interleaved
        && complete
}

/// The search target `Xind(Hom(K_2, G)) + 2`, from the certified lower bound.
pub fn zigzag_target(g: &Hypergraph, budget: SearchBudget) -> Result<(usize, CrossIndex)> {
    let hom = hom_poset(g, 2, Modulus::prime(2)?)?;
    let x = xind_exact(&hom.poset, hom.poset.height(), budget)?;
    Ok(((x.lower + 2).max(0) as usize, x))
}

/// Looks for a [`ZigzagWitness`] with `t` vertices; `t` defaults to
/// [`zigzag_target`]. `None` is a counterexample when `t` is the default.
pub fn zigzag_check(g: &Hypergraph, c: &Coloring, t: Option<usize>, budget: SearchBudget) -> Result<Option<ZigzagWitness>> {
    if g.require_uniformity()? != 2 {
        return Err(Error::UniformityMismatch { size: g.uniformity().unwrap_or(0), r: 2 });
    }
    if g.num_edges() == 0 {
        return Err(Error::Precondition("the graph has no edge".into()));
    }
    if c.colors().len() != g.n() {
        return Err(Error::PartialColoring { got: c.colors().len(), n: g.n() });
    }
    g.require_proper(c)?;
    let t = match t {
        Some(t) => t,
        None => zigzag_target(g, budget)?.0,
    };
    let mut by_color: Vec<usize> = (0..g.n()).collect();
    by_color.sort_by_key(|&v| (c.color(v), v));
    fn rec(g: &Hypergraph, c: &Coloring, order: &[usize], t: usize, chosen: &mut Vec<usize>, sides: &mut [VertexSet; 2]) -> bool {
        if chosen.len() == t {
            return true;
        }
        let side = chosen.len() % 2;
        let floor = chosen.last().map(|&u| c.color(u) + 1).unwrap_or(0);
        for &v in order {
            if c.color(v) < floor {
                continue;
            }
            if !sides[1 - side].is_subset(g.neighbors(v)) {
                continue;
            }
            chosen.push(v);
            sides[side].insert(v);
            if rec(g, c, order, t, chosen, sides) {
                return true;
            }
            sides[side].remove(v);
            chosen.pop();
        }
        false
    }
    let mut chosen = Vec::new();
    let mut sides = [VertexSet::EMPTY; 2];
    if !rec(g, c, &by_color, t, &mut chosen, &mut sides) {
        return Ok(None);
    }
    let w = ZigzagWitness {
        t,
        colors: chosen.iter().map(|&v| c.color(v)).collect(),
        sides: [chosen.iter().step_by(2).copied().collect(), chosen.iter().skip(1).step_by(2).copied().collect()],
        vertices: chosen,
    };
    debug_assert!(validate_zigzag(g, c, &w));
    Ok(Some(w))
}

/// Lower bounds on the local chromatic number computed from `t`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalFormulas {
    pub t: usize,
    pub p: usize,
    pub r: usize,
    pub a: usize,
    pub b: usize,
    /// `min(⌈((p−r+1)a + min{p−r+1, b})/(r−1)⌉ + 1, ⌈t/(r−1)⌉)`.
    pub hypergraph_bound: usize,
    /// `t − ⌊t/p⌋ + 1`, for graphs.
    pub graph_bound: usize,
    /// `t < p`: no colorful witness has all parts nonempty, so the values
    /// are formal.
    pub degenerate: bool,
}

pub fn local_lower_formulas(t: usize, p: usize, r: usize) -> Result<LocalFormulas> {
    if r < 2 {
        return Err(Error::InvalidParameters(format!("uniformity must be at least 2, got {r}")));
    }
    if p < r {
        return Err(Error::ModulusBelowUniformity { p, r });
    }
    let (a, b) = (t / p, t % p);
    let q = p - r + 1;
    let first = (q * a + q.min(b)).div_ceil(r - 1) + 1;
    let second = t.div_ceil(r - 1);
    Ok(LocalFormulas { t, p, r, a, b, hypergraph_bound: first.min(second), graph_bound: t - t / p + 1, degenerate: t < p })
}

/// `⌈(p−1)|V(F)|/p⌉ − (p−1)·α(F) + 1`, a lower bound for `χ_l(KG^2(F))`.
pub fn independence_bound(f: &Hypergraph, p: usize) -> Result<i64> {
    if p < 2 {
        return Err(Error::ModulusTooSmall(p));
    }
    let n = f.n() as i64;
    let p = p as i64;
    let alpha = f.independence_number() as i64;
    Ok(((p - 1) * n + p - 1) / p - (p - 1) * alpha + 1)
}

/// One run of the two-case argument behind the hypergraph bound, on a
/// concrete witness `(U_1, …, U_p)` with larger parts first.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ProofReplay {
    /// 1 when `U_1 … U_{p−r+1}` see fewer than `⌈t/(r−1)⌉` colors, else 2.
    pub case: u8,
    /// Colors seen by `U_1 … U_{p−r+1}`.
    pub covered: Vec<usize>,
    /// In case 1, a vertex of the last `r − 1` parts with a new color.
    pub v: Option<usize>,
    /// An edge meeting `U_{p−r+1}` in `u` and the last `r − 1` parts once each.
    pub edge: Vec<usize>,
    pub u: usize,
    /// `|c(N[e ∖ {u}])|`.
    pub neighborhood_colors: usize,
    /// The count the argument promises for this case.
    pub promised: usize,
    pub holds: bool,
}

/// `X ∪ {w : some edge f has f ∖ X = {w}}`.
fn closed_neighborhood(h: &Hypergraph, x: VertexSet) -> VertexSet {
    h.edges().iter().fold(x, |acc, f| {
        let rest = f.difference(x);
        if rest.len() == 1 {
            acc.union(rest)
        } else {
            acc
        }
    })
}

pub fn replay_local_argument(h: &Hypergraph, c: &Coloring, w: &ColorfulWitness, t: usize, r: usize) -> Result<ProofReplay> {
    let parts = w.parts.parts();
    let p = parts.len();
    if p < r || parts[p - r..].iter().any(|u| u.is_empty()) {
        return Err(Error::Precondition("the last r parts of the witness must be nonempty".into()));
    }
    let q = p - r + 1;
    let covered_set: u64 = parts[..q].iter().fold(0, |acc, u| acc | c.color_mask(*u));
    let covered: Vec<usize> = (0..64).filter(|&k| covered_set >> k & 1 == 1).collect();
    let threshold = t.div_ceil(r - 1);
    let u = parts[q - 1].first().unwrap();
    let (case, v) = if covered.len() < threshold {
        let v = parts[q..].iter().flat_map(|s| s.iter()).find(|&v| covered_set >> c.color(v) & 1 == 0);
        let Some(v) = v else {
            return Ok(ProofReplay { case: 1, covered, v: None, edge: Vec::new(), u, neighborhood_colors: 0, promised: 0, holds: false });
        };
        (1, Some(v))
    } else {
        (2, None)
    };
    let mut edge = VertexSet::singleton(u);
    for s in &parts[q..] {
        let pick = match v {
            Some(v) if s.contains(v) => v,
            _ => s.first().unwrap(),
        };
        edge.insert(pick);
    }
    let hood = closed_neighborhood(h, edge.without(u));
    let seen = c.color_mask(hood);
    let contains_covered = covered_set & !seen == 0;
    let (promised, extra_ok) = match v {
        Some(v) => {
            let sizes: usize = parts[..q].iter().map(|s| s.len()).sum();
            (1 + sizes.div_ceil(r - 1), seen >> c.color(v) & 1 == 1)
        }
        None => (threshold, true),
    };
    let neighborhood_colors = seen.count_ones() as usize;
    Ok(ProofReplay {
        case,
        covered,
        v,
        edge: edge.to_vec(),
        u,
        neighborhood_colors,
        promised,
        holds: h.has_edge(edge) && contains_covered && extra_ok && neighborhood_colors >= promised,
    })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum LocalReport {
    /// `ω(H) < p`: the bound does not apply.
    NotApplicable {
        clique_number: usize,
        p: usize,
    },
    Checked(Box<LocalCertificate>),
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LocalCertificate {
    pub r: usize,
    pub p: usize,
    pub xind: CrossIndex,
    pub t: usize,
    pub formulas: LocalFormulas,
    pub local_chromatic: usize,
    pub local_chromatic_exact: bool,
    /// The coloring realizing `local_chromatic`.
    pub coloring: Coloring,
    pub bound_holds: bool,
    pub witness: Option<ColorfulWitness>,
    pub replay: Option<ProofReplay>,
}

impl LocalCertificate {
    pub fn passed(&self) -> bool {
        self.bound_holds && self.replay.as_ref().is_some_and(|r| r.holds)
    }
}

/// Evaluates the local chromatic bound from `t = Xind(Hom(K^r_p, H)) + p`
/// (certified lower bound of the cross-index), compares it with the exact
/// local chromatic number and replays the two-case argument on a colorful
/// witness for the optimal coloring.
pub fn certify_local(h: &Hypergraph, p: Modulus, budget: SearchBudget) -> Result<LocalReport> {
    let r = h.require_uniformity()?;
    let pv = p.get();
    if pv < r {
        return Err(Error::ModulusBelowUniformity { p: pv, r });
    }
    if h.num_edges() == 0 {
        return Err(Error::Precondition("the hypergraph has no edge".into()));
    }
    let omega = h.clique_number()?;
    if omega < pv {
        return Ok(LocalReport::NotApplicable { clique_number: omega, p: pv });
    }
    let hom = hom_poset(h, r, p)?;
    let xind = xind_exact(&hom.poset, hom.poset.height(), budget)?;
    let t = (xind.lower + pv as isize).max(0) as usize;
    let formulas = local_lower_formulas(t, pv, r)?;
    let local = h.local_chromatic_number(budget)?;
    let coloring = local.witness.clone();
    let search = find_colorful_balanced(h, &coloring, p, t, budget)?;
    let witness = search.witness().cloned();
    let replay = match &witness {
        Some(w) => Some(replay_local_argument(h, &coloring, w, t, r)?),
        None => None,
    };
    Ok(LocalReport::Checked(Box::new(LocalCertificate {
        r,
        p: pv,
        xind,
        t,
        formulas,
        local_chromatic: local.value,
        local_chromatic_exact: local.exact,
        bound_holds: local.value >= formulas.hypergraph_bound,
        coloring,
        witness,
        replay,
    })))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::altdefect::{alt_min, AltMode};
    use crate::hypergraph::{petersen, usual_kneser};

    fn p2() -> Modulus {
        Modulus::prime(2).unwrap()
    }

    #[test]
    fn petersen_colorings_have_a_three_vertex_witness() {
        let g = petersen();
        for c in g.proper_colorings(3, usize::MAX) {
            let res = find_colorful_balanced(&g, &c, p2(), 3, SearchBudget::default()).unwrap();
            let w = res.witness().expect("witness");
            assert_eq!(w.parts.parts().iter().map(|p| p.len()).collect::<Vec<_>>(), vec![2, 1]);
            validate_colorful_witness(&g, &c, w).unwrap();
        }
    }

    #[test]
    fn kneser_three_uniform_target_four() {
        let h = usual_kneser(7, 2, 3).unwrap();
        let c = h.chromatic_number(SearchBudget::default()).witness.unwrap();
        let res = find_colorful_balanced(&h, &c, Modulus::prime(3).unwrap(), 4, SearchBudget::default()).unwrap();
        let w = res.witness().unwrap();
        assert_eq!(w.parts.parts().iter().map(|p| p.len()).collect::<Vec<_>>(), vec![2, 1, 1]);
        validate_colorful_witness(&h, &c, w).unwrap();
    }

    #[test]
    fn single_edge_splits_into_singletons() {
        let h = Hypergraph::new(3, [[0, 1, 2]]).unwrap();
        let c = Coloring::from_colors(vec![0, 1, 2]);
        let res = find_colorful_balanced(&h, &c, Modulus::prime(3).unwrap(), 3, SearchBudget::default()).unwrap();
        let w = res.witness().unwrap();
        assert!(w.parts.parts().iter().all(|p| p.len() == 1));
        let res = find_colorful_balanced(&h, &c, Modulus::prime(3).unwrap(), 4, SearchBudget::default()).unwrap();
        assert!(matches!(res, ColorfulSearch::Counterexample { best_total: 3, .. }));
    }

    #[test]
    fn improper_coloring_is_rejected() {
        let g = petersen();
        let c = Coloring::from_colors(vec![0; 10]);
        assert!(matches!(find_colorful_balanced(&g, &c, p2(), 3, SearchBudget::default()), Err(Error::ImproperColoring(_))));
    }

    #[test]
    fn validator_catches_tampering() {
        let g = petersen();
        let c = g.chromatic_number(SearchBudget::default()).witness.unwrap();
        let w = find_colorful_balanced(&g, &c, p2(), 3, SearchBudget::default()).unwrap().witness().unwrap().clone();
        let mut bad = w.clone();
        let v = (0..10).find(|&v| !w.parts.union().contains(v) && !g.neighbors(v).is_subset(VertexSet::EMPTY)).unwrap();
        let mut parts = w.parts.parts().to_vec();
        parts[1].insert(v);
        bad.parts = PartiteFamily::new(parts).unwrap();
        assert!(validate_colorful_witness(&g, &c, &bad).is_err());
    }

    #[test]
    fn alternation_pipeline_on_petersen() {
        let f = Hypergraph::complete(5, 2).unwrap();
        let alt = alt_min(&f, 2, AltMode::Exact).unwrap();
        let kg = petersen();
        for c in kg.proper_colorings(4, 50) {
            let w = colorful_from_alternation(&f, p2(), &c, &alt.ordering).unwrap();
            assert_eq!(w.target, 3);
            assert_eq!(w.witness.unwrap().total_size, 3);
        }
    }

    #[test]
    fn zigzag_on_complete_graphs() {
        let k4 = Hypergraph::complete(4, 2).unwrap();
        let c = Coloring::from_colors(vec![0, 1, 2, 3]);
        let w = zigzag_check(&k4, &c, None, SearchBudget::default()).unwrap().unwrap();
        assert_eq!(w.t, 4);
        assert_eq!(w.sides, [vec![0, 2], vec![1, 3]]);
        assert!(validate_zigzag(&k4, &c, &w));
        let k2 = Hypergraph::complete(2, 2).unwrap();
        let c = Coloring::from_colors(vec![1, 0]);
        let w = zigzag_check(&k2, &c, Some(2), SearchBudget::default()).unwrap().unwrap();
        assert_eq!(w.vertices, vec![1, 0]);
    }

    #[test]
    fn zigzag_on_petersen() {
        let g = petersen();
        let (t, x) = zigzag_target(&g, SearchBudget::default()).unwrap();
        assert_eq!(x.value(), Some(1));
        assert_eq!(t, 3);
        let c = g.chromatic_number(SearchBudget::default()).witness.unwrap();
        let w = zigzag_check(&g, &c, Some(3), SearchBudget::default()).unwrap().unwrap();
        assert!(validate_zigzag(&g, &c, &w));
    }

    #[test]
    fn formula_spot_checks() {
        let f = local_lower_formulas(7, 3, 3).unwrap();
        assert_eq!((f.a, f.b, f.hypergraph_bound), (2, 1, 3));
        assert_eq!(local_lower_formulas(3, 2, 2).unwrap().graph_bound, 3);
        let zero = local_lower_formulas(0, 3, 2).unwrap();
        assert_eq!(zero.hypergraph_bound, 0);
        assert!(zero.degenerate);
        assert!(local_lower_formulas(5, 2, 3).is_err());
        // for graphs both formulas agree
        for t in 0..30 {
            for p in [2, 3, 5, 7] {
                let f = local_lower_formulas(t, p, 2).unwrap();
                assert_eq!(f.hypergraph_bound, f.graph_bound.min(t));
            }
        }
    }

    #[test]
    fn independence_bound_on_complete_graph_family() {
        // K_5^2 has α = 1: ⌈5/2⌉ − 1 + 1 = 3 = χ_l(Petersen)
        let f = Hypergraph::complete(5, 2).unwrap();
        assert_eq!(independence_bound(&f, 2).unwrap(), 3);
    }

    #[test]
    fn local_certificates() {
        let k4 = Hypergraph::complete(4, 2).unwrap();
        let LocalReport::Checked(cert) = certify_local(&k4, p2(), SearchBudget::default()).unwrap() else { panic!() };
        assert_eq!(cert.t, 4);
        assert_eq!(cert.formulas.hypergraph_bound, 3);
        assert_eq!(cert.local_chromatic, 4);
        assert!(cert.passed(), "{cert:?}");

        let edge = Hypergraph::new(3, [[0, 1, 2]]).unwrap();
        let LocalReport::Checked(cert) = certify_local(&edge, Modulus::prime(3).unwrap(), SearchBudget::default()).unwrap() else { panic!() };
        assert_eq!(cert.local_chromatic, 2);
        assert_eq!(cert.formulas.hypergraph_bound, 2);
        assert!(cert.passed(), "{cert:?}");

        let k3 = Hypergraph::complete(3, 2).unwrap();
        let LocalReport::Checked(cert) = certify_local(&k3, Modulus::prime(3).unwrap(), SearchBudget::default()).unwrap() else { panic!() };
        assert_eq!(cert.local_chromatic, 3);
        assert!(cert.passed(), "{cert:?}");

        let c5 = Hypergraph::cycle(5).unwrap();
        assert!(matches!(
            certify_local(&c5, Modulus::prime(3).unwrap(), SearchBudget::default()).unwrap(),
            LocalReport::NotApplicable { clique_number: 2, p: 3 }
        ));
    }
}
