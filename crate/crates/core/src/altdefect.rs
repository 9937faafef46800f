//! Signed vectors, alternation numbers and the colorability defect.

use std::fmt;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hypergraph::{Colorability, Hypergraph, SearchBudget};
use crate::vset::{k_subsets, VertexSet};
use crate::zp;

/// An element of `(Z_p ∪ {0})^n`, stored as one position set per residue.
///
/// The zero entry is the absence of a residue, never residue 0 (which is
/// the identity `ω^p`).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SignedVector {
    n: usize,
    classes: Vec<VertexSet>,
}

impl SignedVector {
    pub fn zero(n: usize, p: usize) -> Self {
        assert!(n <= VertexSet::CAPACITY, "signed vectors hold at most 64 entries");
        SignedVector { n, classes: vec![VertexSet::EMPTY; p] }
    }

    /// From entries: `None` is the zero marker, `Some(k)` the residue `k`.
    pub fn from_entries(entries: &[Option<usize>], p: usize) -> Result<Self> {
        if entries.len() > VertexSet::CAPACITY {
            return Err(Error::TooManyVertices { n: entries.len(), max: VertexSet::CAPACITY });
        }
        let mut x = Self::zero(entries.len(), p);
        for (i, e) in entries.iter().enumerate() {
            if let Some(k) = *e {
                if k >= p {
                    return Err(Error::InvalidParameters(format!("residue {k} is outside Z_{p}")));
                }
                x.classes[k].insert(i);
            }
        }
        Ok(x)
    }

    pub fn from_classes(n: usize, classes: Vec<VertexSet>) -> Result<Self> {
        let full = VertexSet::full(n);
        for i in 0..classes.len() {
            if !classes[i].is_subset(full) {
                return Err(Error::InvalidParameters("class outside the coordinate range".into()));
            }
            for j in i + 1..classes.len() {
                if classes[i].intersects(classes[j]) {
                    return Err(Error::OverlappingParts(i, j));
                }
            }
        }
        Ok(SignedVector { n, classes })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn p(&self) -> usize {
        self.classes.len()
    }

    pub fn entry(&self, i: usize) -> Option<usize> {
        self.classes.iter().position(|c| c.contains(i))
    }

    pub fn entries(&self) -> Vec<Option<usize>> {
        (0..self.n).map(|i| self.entry(i)).collect()
    }

    /// `X^ε`: the positions carrying residue `eps`.
    pub fn class(&self, eps: usize) -> VertexSet {
        self.classes[eps]
    }

    pub fn classes(&self) -> &[VertexSet] {
        &self.classes
    }

    pub fn support(&self) -> VertexSet {
        self.classes.iter().fold(VertexSet::EMPTY, |a, c| a.union(*c))
    }

    pub fn is_zero(&self) -> bool {
        self.support().is_empty()
    }

    pub fn first_nonzero(&self) -> Option<usize> {
        self.support().first().and_then(|i| self.entry(i))
    }

    /// `X ⊆ Y` classwise.
    pub fn is_subset(&self, other: &SignedVector) -> bool {
        self.classes.iter().zip(&other.classes).all(|(a, b)| a.is_subset(*b))
    }

    /// `ω^k · X`: every nonzero entry multiplied by `ω^k`.
    pub fn rotate(&self, k: usize) -> SignedVector {
        let p = self.p();
        let mut classes = vec![VertexSet::EMPTY; p];
        for (eps, c) in self.classes.iter().enumerate() {
            classes[(eps + k) % p] = *c;
        }
        SignedVector { n: self.n, classes }
    }

    pub fn with_entry(&self, i: usize, eps: Option<usize>) -> SignedVector {
        let mut out = self.clone();
        for c in out.classes.iter_mut() {
            c.remove(i);
        }
        if let Some(e) = eps {
            out.classes[e].insert(i);
        }
        out
    }

    /// Orbit key: entries compared position by position, zero first and
    /// residues by their exponent in `1..=p`.
    pub fn canonical_key(&self) -> Vec<usize> {
        let p = self.p();
        self.entries().iter().map(|e| e.map_or(0, |k| zp::exponent(k, p))).collect()
    }

    /// The rotation index `k` and representative `R` with `self = ω^k · R`,
    /// `R` being the least orbit member under [`Self::canonical_key`].
    pub fn orbit_position(&self) -> (usize, SignedVector) {
        let p = self.p();
        let rep = (0..p).map(|k| self.rotate(k)).min_by_key(|x| x.canonical_key()).unwrap();
        let k = (0..p).find(|&k| rep.rotate(k) == *self).unwrap();
        (k, rep)
    }
}

impl fmt::Debug for SignedVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        let p = self.p();
        for i in 0..self.n {
            if i > 0 {
                write!(f, ",")?;
            }
            match self.entry(i) {
                None => write!(f, "0")?,
                Some(k) if p == 2 => write!(f, "{}", if k == 1 { "+" } else { "-" })?,
                Some(k) => write!(f, "{}", zp::omega(k, p))?,
            }
        }
        write!(f, ")")
    }
}

/// All nonzero signed vectors of length `n` over `Z_p`.
pub fn nonzero_vectors(n: usize, p: usize) -> Vec<SignedVector> {
    let total = (p + 1).pow(n as u32);
    (1..total)
        .map(|mut code| {
            let mut x = SignedVector::zero(n, p);
            for i in 0..n {
                let d = code % (p + 1);
                code /= p + 1;
                if d > 0 {
                    x.classes[d - 1].insert(i);
                }
            }
            x
        })
        .collect()
}

/// Length of the longest alternating subsequence of nonzero entries: the
/// number of maximal runs of equal consecutive nonzero entries.
pub fn alt(x: &SignedVector) -> usize {
    let mut runs = 0;
    let mut last = None;
    for i in x.support().iter() {
        let e = x.entry(i);
        if e != last {
            runs += 1;
            last = e;
        }
    }
    runs
}

/// A bijection `σ: positions → V(H)`, stored as `σ(i) = order[i]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Ordering {
    order: Vec<usize>,
}

impl Ordering {
    pub fn new(order: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; order.len()];
        for &v in &order {
            if v >= order.len() || seen[v] {
                return Err(Error::NotBijection);
            }
            seen[v] = true;
        }
        Ok(Ordering { order })
    }

    pub fn identity(n: usize) -> Self {
        Ordering { order: (0..n).collect() }
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    pub fn get(&self, i: usize) -> usize {
        self.order[i]
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.order
    }

    /// `σ(S)` for a set of positions.
    pub fn image(&self, positions: VertexSet) -> VertexSet {
        positions.iter().map(|i| self.order[i]).collect()
    }
}

/// `alt_p(H, σ)`: the largest `alt(X)` over vectors whose classes map to
/// edge-free vertex sets.
pub fn alt_sigma(h: &Hypergraph, p: usize, sigma: &Ordering) -> Result<usize> {
    check_ordering(h, sigma)?;
    if p < 2 {
        return Err(Error::ModulusTooSmall(p));
    }
    Ok(alt_sigma_capped(h, p, sigma, usize::MAX))
}

/// A vector attaining `alt_p(H, σ)`.
pub fn alt_sigma_witness(h: &Hypergraph, p: usize, sigma: &Ordering) -> Result<SignedVector> {
    check_ordering(h, sigma)?;
    let mut best = (0, SignedVector::zero(h.n(), p));
    let mut classes = vec![VertexSet::EMPTY; p];
    let mut pos = vec![VertexSet::EMPTY; p];
    alt_dfs(h, sigma, 0, None, 0, &mut classes, &mut pos, usize::MAX, &mut |v, pos: &[VertexSet]| {
        if v > best.0 {
            best = (v, SignedVector { n: h.n(), classes: pos.to_vec() });
        }
    });
    Ok(best.1)
}

fn check_ordering(h: &Hypergraph, sigma: &Ordering) -> Result<()> {
    if sigma.len() != h.n() {
        return Err(Error::NotBijection);
    }
    Ok(())
}

/// `min(alt_p(H, σ), cap)`, stopping as soon as `cap` is reached.
///
/// Only vectors whose runs have length one are explored: shortening a run to
/// a single entry keeps `alt` and can only shrink the classes.
pub(crate) fn alt_sigma_capped(h: &Hypergraph, p: usize, sigma: &Ordering, cap: usize) -> usize {
    let mut best = 0;
    let mut classes = vec![VertexSet::EMPTY; p];
    let mut pos = vec![VertexSet::EMPTY; p];
    alt_dfs(h, sigma, 0, None, 0, &mut classes, &mut pos, cap, &mut |v, _| best = best.max(v));
    best.min(cap)
}

#[allow(clippy::too_many_arguments)]
fn alt_dfs(
    h: &Hypergraph,
    sigma: &Ordering,
    i: usize,
    last: Option<usize>,
    value: usize,
    classes: &mut Vec<VertexSet>,
    pos: &mut Vec<VertexSet>,
    cap: usize,
    record: &mut dyn FnMut(usize, &[VertexSet]),
) -> usize {
    // returns the best value found in this subtree (for the cap test)
    record(value, pos);
    let n = sigma.len();
    if value >= cap || i == n {
        return value;
    }
    let mut best = value;
    for j in i..n {
        if value + (n - j) <= best {
            break;
        }
        let v = sigma.get(j);
        // the first entry is fixed to residue 0 by rotation symmetry
        let choices: Vec<usize> = match last {
            None => vec![0],
            Some(l) => (0..classes.len()).filter(|&e| e != l).collect(),
        };
        for eps in choices {
            if h.closes_edge(classes[eps], v) {
                continue;
            }
            classes[eps].insert(v);
            pos[eps].insert(j);
            let got = alt_dfs(h, sigma, j + 1, Some(eps), value + 1, classes, pos, cap, record);
            classes[eps].remove(v);
            pos[eps].remove(j);
            best = best.max(got);
            if best >= cap {
                return best;
            }
        }
    }
    best
}

/// Reference `alt_p(H, σ)` by enumerating every signed vector.
pub fn alt_sigma_bruteforce(h: &Hypergraph, p: usize, sigma: &Ordering) -> usize {
    nonzero_vectors(h.n(), p).iter().filter(|x| x.classes().iter().all(|c| !h.spans_edge(sigma.image(*c)))).map(alt).max().unwrap_or(0)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum AltMode {
    /// All orderings, first position restricted to automorphism orbits.
    Exact,
    /// The identity plus `samples` seeded random orderings.
    Sampled { samples: usize, seed: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AltMin {
    pub value: usize,
    pub ordering: Ordering,
    /// False when `value` is only an upper bound on `alt_p(H)`.
    pub exact: bool,
}

/// `alt_p(H) = min_σ alt_p(H, σ)`.
pub fn alt_min(h: &Hypergraph, p: usize, mode: AltMode) -> Result<AltMin> {
    if p < 2 {
        return Err(Error::ModulusTooSmall(p));
    }
    let n = h.n();
    match mode {
        AltMode::Sampled { samples, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut best_order = Ordering::identity(n);
            let mut best = alt_sigma_capped(h, p, &best_order, usize::MAX);
            let mut order: Vec<usize> = (0..n).collect();
            for _ in 0..samples {
                order.shuffle(&mut rng);
                let sigma = Ordering { order: order.clone() };
                let v = alt_sigma_capped(h, p, &sigma, best);
                if v < best {
                    best = v;
                    best_order = sigma;
                }
            }
            Ok(AltMin { value: best, ordering: best_order, exact: false })
        }
        AltMode::Exact => {
            if n > 10 {
                return Err(Error::InvalidParameters(format!("exact alternation number is limited to 10 vertices, got {n}")));
            }
            let reps = orbit_representatives(h);
            let results: Vec<(usize, Vec<usize>)> = reps
                .par_iter()
                .map(|&first| {
                    let mut best = (usize::MAX, Vec::new());
                    let mut order = vec![first];
                    let rest: Vec<usize> = (0..n).filter(|&v| v != first).collect();
                    permute(h, p, &mut order, &rest, &mut best);
                    best
                })
                .collect();
            let (value, order) = results.into_iter().min().unwrap();
            Ok(AltMin { value, ordering: Ordering { order }, exact: true })
        }
    }
}

fn permute(h: &Hypergraph, p: usize, order: &mut Vec<usize>, rest: &[usize], best: &mut (usize, Vec<usize>)) {
    if rest.is_empty() {
        let sigma = Ordering { order: order.clone() };
        let v = alt_sigma_capped(h, p, &sigma, best.0);
        if v < best.0 || (v == best.0 && *order < best.1) {
            *best = (v, order.clone());
        }
        return;
    }
    for i in 0..rest.len() {
        order.push(rest[i]);
        let mut next = rest.to_vec();
        next.remove(i);
        permute(h, p, order, &next, best);
        order.pop();
    }
}

/// Least vertex of each orbit of the automorphism group of `h`.
pub fn orbit_representatives(h: &Hypergraph) -> Vec<usize> {
    let n = h.n();
    let mut rep = vec![usize::MAX; n];
    for u in 0..n {
        if rep[u] != usize::MAX {
            continue;
        }
        rep[u] = u;
        for v in u + 1..n {
            if rep[v] == usize::MAX && automorphism_maps(h, u, v) {
                rep[v] = u;
            }
        }
    }
    (0..n).filter(|&v| rep[v] == v).collect()
}

/// Whether some automorphism sends `u` to `v`.
pub fn automorphism_maps(h: &Hypergraph, u: usize, v: usize) -> bool {
    let n = h.n();
    if h.degree(u) != h.degree(v) {
        return false;
    }
    let mut map = vec![usize::MAX; n];
    let mut used = VertexSet::EMPTY;
    map[u] = v;
    used.insert(v);
    let order: Vec<usize> = std::iter::once(u).chain((0..n).filter(|&w| w != u)).collect();
    extend_automorphism(h, &order, 1, &mut map, &mut used)
}

fn extend_automorphism(h: &Hypergraph, order: &[usize], k: usize, map: &mut Vec<usize>, used: &mut VertexSet) -> bool {
    let mapped_ok = |map: &Vec<usize>, x: usize| {
        // every edge through x whose vertices are all mapped must map to an edge
        h.incident(x).iter().all(|&i| {
            let e = h.edges()[i];
            if e.iter().any(|w| map[w] == usize::MAX) {
                return true;
            }
            h.has_edge(e.iter().map(|w| map[w]).collect())
        })
    };
    if k == order.len() {
        return true;
    }
    let x = order[k];
    for y in 0..h.n() {
        if used.contains(y) || h.degree(x) != h.degree(y) {
            continue;
        }
        map[x] = y;
        used.insert(y);
        if mapped_ok(map, x) && extend_automorphism(h, order, k + 1, map, used) {
            return true;
        }
        used.remove(y);
        map[x] = usize::MAX;
    }
    false
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Defect {
    pub value: usize,
    /// A removal set achieving the value.
    pub removed: VertexSet,
}

/// `cd_r(H)`: fewest vertices whose removal leaves an `r`-colorable hypergraph.
pub fn colorability_defect(h: &Hypergraph, r: usize, budget: SearchBudget) -> Result<Defect> {
    if r < 2 {
        return Err(Error::InvalidParameters(format!("colorability defect needs r >= 2, got {r}")));
    }
    let n = h.n();
    for k in 0..=n {
        for removed in k_subsets(n, k) {
            let keep = h.vertex_set().difference(removed);
            if keep.is_empty() {
                return Ok(Defect { value: k, removed });
            }
            let sub = h.induced(keep)?.graph;
            match sub.colorability(r, budget) {
                Colorability::Colorable(_) => return Ok(Defect { value: k, removed }),
                Colorability::NotColorable => {}
                Colorability::Unknown => return Err(Error::Precondition("search budget exhausted while computing the defect".into())),
            }
        }
    }
    unreachable!("removing every vertex leaves a colorable hypergraph")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sv(e: &[i32], p: usize) -> SignedVector {
        let entries: Vec<Option<usize>> = e.iter().map(|&x| (x > 0).then(|| (x as usize) % p)).collect();
        SignedVector::from_entries(&entries, p).unwrap()
    }

    #[test]
    fn alt_examples() {
        // exponents: 1 = ω, 2 = ω², 0 = zero marker
        assert_eq!(alt(&sv(&[1, 2, 1, 2], 2)), 4);
        assert_eq!(alt(&sv(&[1, 0, 2, 2, 1], 3)), 3);
        assert_eq!(alt(&sv(&[0, 0, 0], 2)), 0);
    }

    fn alt_brute(x: &SignedVector) -> usize {
        let nz: Vec<usize> = x.support().iter().map(|i| x.entry(i).unwrap()).collect();
        let mut best = 0;
        for mask in 0u32..(1 << nz.len()) {
            let sub: Vec<usize> = (0..nz.len()).filter(|i| mask >> i & 1 == 1).map(|i| nz[i]).collect();
            if sub.windows(2).all(|w| w[0] != w[1]) {
                best = best.max(sub.len());
            }
        }
        best
    }

    #[test]
    fn alt_matches_subsequence_bruteforce() {
        for p in 2..=3 {
            for x in nonzero_vectors(5, p) {
                assert_eq!(alt(&x), alt_brute(&x), "{x:?}");
            }
        }
    }

    #[test]
    fn zero_marker_is_not_residue_zero() {
        let x = SignedVector::from_entries(&[Some(0), None], 2).unwrap();
        assert_eq!(x.entry(0), Some(0));
        assert_eq!(x.entry(1), None);
        assert_eq!(alt(&x), 1);
        assert_eq!(x.rotate(1).entry(0), Some(1));
    }

    #[test]
    fn alt_sigma_examples() {
        let id = |n| Ordering::identity(n);
        let k52 = Hypergraph::complete(5, 2).unwrap();
        assert_eq!(alt_sigma(&k52, 2, &id(5)).unwrap(), 2);
        let k53 = Hypergraph::complete(5, 3).unwrap();
        assert_eq!(alt_sigma(&k53, 2, &id(5)).unwrap(), 4);
        let k72 = Hypergraph::complete(7, 2).unwrap();
        assert_eq!(alt_sigma(&k72, 3, &id(7)).unwrap(), 3);
    }

    #[test]
    fn alt_sigma_matches_bruteforce() {
        let graphs = [
            Hypergraph::cycle(5).unwrap(),
            crate::hypergraph::petersen().induced(VertexSet::full(7)).unwrap().graph,
            Hypergraph::new(6, vec![vec![0, 1, 2], vec![2, 3, 4], vec![1, 4, 5]]).unwrap(),
        ];
        for h in &graphs {
            for p in 2..=3 {
                let sigma = Ordering::new((0..h.n()).rev().collect()).unwrap();
                assert_eq!(alt_sigma(h, p, &sigma).unwrap(), alt_sigma_bruteforce(h, p, &sigma));
                let w = alt_sigma_witness(h, p, &sigma).unwrap();
                assert_eq!(alt(&w), alt_sigma_bruteforce(h, p, &sigma));
            }
        }
    }

    #[test]
    fn alt_min_examples() {
        let k52 = Hypergraph::complete(5, 2).unwrap();
        assert_eq!(alt_min(&k52, 2, AltMode::Exact).unwrap().value, 2);
        let k53 = Hypergraph::complete(5, 3).unwrap();
        assert_eq!(alt_min(&k53, 2, AltMode::Exact).unwrap().value, 4);
        let e3 = Hypergraph::edgeless(3, 2).unwrap();
        assert_eq!(alt_min(&e3, 2, AltMode::Exact).unwrap().value, 3);
        let sampled = alt_min(&Hypergraph::cycle(6).unwrap(), 2, AltMode::Sampled { samples: 20, seed: 1 }).unwrap();
        assert!(!sampled.exact);
        assert!(sampled.value >= alt_min(&Hypergraph::cycle(6).unwrap(), 2, AltMode::Exact).unwrap().value);
    }

    #[test]
    fn defect_examples() {
        let b = SearchBudget::default();
        assert_eq!(colorability_defect(&Hypergraph::complete(6, 2).unwrap(), 2, b).unwrap().value, 4);
        assert_eq!(colorability_defect(&Hypergraph::complete(7, 2).unwrap(), 3, b).unwrap().value, 4);
        assert_eq!(colorability_defect(&Hypergraph::edgeless(4, 2).unwrap(), 2, b).unwrap().value, 0);
    }

    #[test]
    fn orbit_reps() {
        assert_eq!(orbit_representatives(&Hypergraph::complete(5, 2).unwrap()), vec![0]);
        let path = Hypergraph::new(4, vec![vec![0, 1], vec![1, 2], vec![2, 3]]).unwrap();
        assert_eq!(orbit_representatives(&path), vec![0, 1]);
        assert!(!automorphism_maps(&path, 0, 1));
    }

    #[test]
    fn orbit_position_roundtrip() {
        for x in nonzero_vectors(3, 3) {
            let (k, rep) = x.orbit_position();
            assert_eq!(rep.rotate(k), x);
            assert_eq!(rep.orbit_position().0, 0);
        }
    }
}
