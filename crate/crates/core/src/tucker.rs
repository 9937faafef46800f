//! Executable checks of Tucker-type lemmas: equivariant labelings of signed
//! vectors and their fan chains, the labeling built from a coloring of a
//! Kneser hypergraph, the collapse map `Γ` with its case analysis, fan
//! chains in labeled `G`-complexes and balanced or alternating chains in
//! `Z_p`-posets.
//!
//! A missing chain is reported as a counterexample value, never a panic.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::altdefect::{alt, alt_sigma, Ordering, SignedVector};
use crate::complex::{order_complex, Face, GComplex, GPoset};
use crate::error::{Error, Result};
use crate::hypergraph::{kneser, Coloring, Hypergraph, NodeCounter, SearchBudget};
use crate::index::{ind_bounds, is_q_map, s, s0, value_l, xind_exact, IndOptions, LabeledSimplex};
use crate::vset::VertexSet;

const MAX_CUBE: usize = 1 << 20;
const MAX_P: usize = 6;

/// `(Z_p ∪ {0})^n` with vectors indexed by their base-`(p+1)` code
/// (digit 0 for a zero entry, `ε + 1` for residue `ε`).
struct Cube {
    n: usize,
    p: usize,
    vectors: Vec<SignedVector>,
    rot: Vec<usize>,
    supersets: Vec<Vec<usize>>,
    subsets: Vec<Vec<usize>>,
    /// Nonzero codes by support size, then code.
    order: Vec<usize>,
    /// Orbit representatives in `order`.
    reps: Vec<usize>,
}

impl Cube {
    fn new(n: usize, p: usize) -> Result<Self> {
        if p < 2 {
            return Err(Error::ModulusTooSmall(p));
        }
        if p > MAX_P {
            return Err(Error::InvalidParameters(format!("labelings are supported for p ≤ {MAX_P}")));
        }
        let size = (p + 1).checked_pow(n as u32).filter(|&s| s <= MAX_CUBE);
        let Some(size) = size else {
            return Err(Error::InvalidParameters(format!("(Z_{p} ∪ {{0}})^{n} is too large")));
        };
        let mut vectors = Vec::with_capacity(size);
        let mut digits = vec![0usize; n];
        for _ in 0..size {
            let entries: Vec<Option<usize>> = digits.iter().map(|&d| d.checked_sub(1)).collect();
            vectors.push(SignedVector::from_entries(&entries, p)?);
            for d in digits.iter_mut() {
                *d += 1;
                if *d <= p {
                    break;
                }
                *d = 0;
            }
        }
        let code = |x: &SignedVector| encode(x, p);
        let rot: Vec<usize> = vectors.iter().map(|x| code(&x.rotate(1))).collect();
        let mut supersets = vec![Vec::new(); size];
        let mut subsets = vec![Vec::new(); size];
        for c in 1..size {
            let x = &vectors[c];
            let zeros: Vec<usize> = (0..n).filter(|&i| x.entry(i).is_none()).collect();
            let mut fill = vec![0usize; zeros.len()];
            loop {
                let mut i = 0;
                while i < fill.len() && fill[i] == p {
                    fill[i] = 0;
                    i += 1;
                }
                if i == fill.len() {
                    break;
                }
                fill[i] += 1;
                let d = c + zeros.iter().zip(&fill).map(|(&z, &f)| f * (p + 1).pow(z as u32)).sum::<usize>();
                supersets[c].push(d);
                subsets[d].push(c);
            }
        }
        let mut order: Vec<usize> = (1..size).collect();
        order.sort_by_key(|&c| (vectors[c].support().len(), c));
        let rank: Vec<usize> = {
            let mut r = vec![0; size];
            for (i, &c) in order.iter().enumerate() {
                r[c] = i;
            }
            r
        };
        for list in supersets.iter_mut().chain(subsets.iter_mut()) {
            list.sort_by_key(|&d| rank[d]);
        }
        let mut seen = vec![false; size];
        let mut reps = Vec::new();
        for &c in &order {
            if !seen[c] {
                reps.push(c);
                let mut d = c;
                for _ in 0..p {
                    seen[d] = true;
                    d = rot[d];
                }
            }
        }
        Ok(Cube { n, p, vectors, rot, supersets, subsets, order, reps })
    }

    fn code(&self, x: &SignedVector) -> Result<usize> {
        if x.len() != self.n || x.p() != self.p || x.is_zero() {
            return Err(Error::OutsideDomain(format!("{x:?} is not a nonzero vector of (Z_{} ∪ {{0}})^{}", self.p, self.n)));
        }
        Ok(encode(x, self.p))
    }

    /// `ω^k · x` as a code.
    fn rotate(&self, mut c: usize, k: usize) -> usize {
        for _ in 0..k % self.p {
            c = self.rot[c];
        }
        c
    }
}

fn encode(x: &SignedVector, p: usize) -> usize {
    x.entries().iter().rev().fold(0, |acc, e| acc * (p + 1) + e.map_or(0, |k| k + 1))
}

/// A map from nonzero signed vectors to `Z_p × [m]` (levels 1-based).
#[derive(Clone)]
pub struct EquivariantLabeling {
    cube: std::sync::Arc<Cube>,
    m: usize,
    labels: Vec<(usize, usize)>,
}

impl std::fmt::Debug for EquivariantLabeling {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_map().entries(self.cube.order.iter().map(|&c| (&self.cube.vectors[c], self.labels[c]))).finish()
    }
}

impl EquivariantLabeling {
    /// Labels every nonzero vector by `f`; nothing is checked here.
    pub fn from_fn(n: usize, p: usize, m: usize, f: impl Fn(&SignedVector) -> (usize, usize)) -> Result<Self> {
        let cube = Cube::new(n, p)?;
        let labels = cube.vectors.iter().enumerate().map(|(c, x)| if c == 0 { (0, 0) } else { f(x) }).collect();
        Ok(EquivariantLabeling { cube: std::sync::Arc::new(cube), m, labels })
    }

    /// Labels orbit representatives by `f` and extends by `λ(ω^k X) = ω^k λ(X)`.
    pub fn from_representatives(n: usize, p: usize, m: usize, f: impl Fn(&SignedVector) -> (usize, usize)) -> Result<Self> {
        let cube = Cube::new(n, p)?;
        let mut labels = vec![(0, 0); cube.vectors.len()];
        for &r in &cube.reps {
            let (e, j) = f(&cube.vectors[r]);
            for k in 0..p {
                labels[cube.rotate(r, k)] = ((e + k) % p, j);
            }
        }
        Ok(EquivariantLabeling { cube: std::sync::Arc::new(cube), m, labels })
    }

    pub fn n(&self) -> usize {
        self.cube.n
    }

    pub fn p(&self) -> usize {
        self.cube.p
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn label(&self, x: &SignedVector) -> Result<(usize, usize)> {
        Ok(self.labels[self.cube.code(x)?])
    }

    pub fn set_label(&mut self, x: &SignedVector, label: (usize, usize)) -> Result<()> {
        let c = self.cube.code(x)?;
        self.labels[c] = label;
        Ok(())
    }

    /// Nonzero vectors with their labels, by support size.
    pub fn entries(&self) -> Vec<(SignedVector, (usize, usize))> {
        self.cube.order.iter().map(|&c| (self.cube.vectors[c].clone(), self.labels[c])).collect()
    }

    /// The simplices `{λ(X_1), …, λ(X_k)}` over maximal chains, as simplices
    /// of `(Z_p × [m])` with 0-based levels.
    pub fn image(&self) -> Result<Vec<LabeledSimplex>> {
        let cube = &self.cube;
        let mut out: Vec<LabeledSimplex> = Vec::new();
        let mut stack: Vec<(usize, Vec<(usize, usize)>)> =
            cube.order.iter().filter(|&&c| cube.vectors[c].support().len() == 1).map(|&c| (c, vec![self.labels[c]])).collect();
        while let Some((c, labels)) = stack.pop() {
            let ups: Vec<usize> =
                cube.supersets[c].iter().copied().filter(|&d| cube.vectors[d].support().len() == cube.vectors[c].support().len() + 1).collect();
            if ups.is_empty() {
                let elems: Vec<(usize, usize)> = labels.iter().map(|&(e, j)| (e, j - 1)).collect();
                let t = LabeledSimplex::new(self.p(), self.m, &elems)?;
                if !out.contains(&t) {
                    out.push(t);
                }
            }
            for d in ups {
                let mut next = labels.clone();
                next.push(self.labels[d]);
                stack.push((d, next));
            }
        }
        Ok(out)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum LabelingVerdict {
    Pass,
    LabelOutOfRange {
        x: SignedVector,
        label: (usize, usize),
    },
    NotEquivariant {
        x: SignedVector,
    },
    /// `X ⊆ Y` share a level `≤ α` but not a sign.
    SignChangeAtLowLevel {
        lower: SignedVector,
        upper: SignedVector,
    },
    /// A chain on one level `≥ α + 1` carries every sign.
    AllSignsOnChain {
        chain: Vec<SignedVector>,
    },
}

impl LabelingVerdict {
    pub fn passed(&self) -> bool {
        matches!(self, LabelingVerdict::Pass)
    }
}

/// Bit `m` set when some chain realizes the sign set `m`.
type MaskSet = u64;

fn sign_masks(cube: &Cube, labels: &[Option<(usize, usize)>], c: usize, up: bool, memo: &mut [Option<MaskSet>]) -> MaskSet {
    if let Some(m) = memo[c] {
        return m;
    }
    let (e, j) = labels[c].unwrap();
    let bit = 1usize << e;
    let mut set: MaskSet = 1 << bit;
    let next = if up { &cube.supersets[c] } else { &cube.subsets[c] };
    for &d in next {
        if d == 0 || labels[d].map(|l| l.1) != Some(j) {
            continue;
        }
        let sub = sign_masks(cube, labels, d, up, memo);
        let mut bits = sub;
        while bits != 0 {
            let m = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            set |= 1 << (m | bit);
        }
    }
    memo[c] = Some(set);
    set
}

fn combine_full(a: MaskSet, b: MaskSet, full: usize) -> bool {
    let mut bits = a;
    while bits != 0 {
        let x = bits.trailing_zeros() as usize;
        bits &= bits - 1;
        let mut other = b;
        while other != 0 {
            let y = other.trailing_zeros() as usize;
            other &= other - 1;
            if x | y == full {
                return true;
            }
        }
    }
    false
}

/// A chain through `c` on `c`'s level covering the signs in `need`.
fn chain_with_signs(cube: &Cube, labels: &[Option<(usize, usize)>], c: usize, need: usize) -> Vec<usize> {
    let full = need;
    let mut down_memo = vec![None; cube.vectors.len()];
    let mut up_memo = vec![None; cube.vectors.len()];
    let j = labels[c].unwrap().1;
    let bit = |d: usize| 1usize << labels[d].unwrap().0;
    // walk down collecting a prefix, then up for the rest
    let mut down = vec![c];
    let mut have = bit(c);
    let up_set = sign_masks(cube, labels, c, true, &mut up_memo);
    loop {
        let cur = *down.last().unwrap();
        let missing_after_up = |acc: usize| combine_full(1 << acc, up_set, full);
        if missing_after_up(have) {
            break;
        }
        let step = cube.subsets[cur].iter().copied().find(|&d| {
            d != 0
                && labels[d].map(|l| l.1) == Some(j)
                && combine_full(sign_masks(cube, labels, d, false, &mut down_memo), 1 << have, full).then_some(()).is_some()
                || (d != 0 && labels[d].map(|l| l.1) == Some(j) && {
                    let dm = sign_masks(cube, labels, d, false, &mut down_memo);
                    let mut ok = false;
                    let mut bits = dm;
                    while bits != 0 {
                        let x = bits.trailing_zeros() as usize;
                        bits &= bits - 1;
                        ok |= combine_full(1 << (x | have), up_set, full);
                    }
                    ok
                })
        });
        let Some(d) = step else { break };
        down.push(d);
        have |= bit(d);
    }
    down.reverse();
    let mut chain = down;
    let mut cur = c;
    while have != full {
        let next = cube.supersets[cur]
            .iter()
            .copied()
            .find(|&d| labels[d].map(|l| l.1) == Some(j) && combine_full(1 << have, sign_masks(cube, labels, d, true, &mut up_memo), full));
        let Some(d) = next else { break };
        chain.push(d);
        have |= bit(d);
        cur = d;
    }
    chain
}

/// First violation of the two labeling conditions for a given `α`, or of
/// equivariance and the label range.
pub fn check_labeling_conditions(lambda: &EquivariantLabeling, alpha: usize) -> LabelingVerdict {
    let cube = &lambda.cube;
    let p = cube.p;
    for &c in &cube.order {
        let (e, j) = lambda.labels[c];
        if e >= p || j == 0 || j > lambda.m {
            return LabelingVerdict::LabelOutOfRange { x: cube.vectors[c].clone(), label: (e, j) };
        }
        if lambda.labels[cube.rot[c]] != ((e + 1) % p, j) {
            return LabelingVerdict::NotEquivariant { x: cube.vectors[c].clone() };
        }
    }
    for &c in &cube.order {
        let (e, j) = lambda.labels[c];
        if j > alpha {
            continue;
        }
        for &d in &cube.supersets[c] {
            let (e2, j2) = lambda.labels[d];
            if j2 == j && e2 != e {
                return LabelingVerdict::SignChangeAtLowLevel { lower: cube.vectors[c].clone(), upper: cube.vectors[d].clone() };
            }
        }
    }
    let labels: Vec<Option<(usize, usize)>> = (0..cube.vectors.len()).map(|c| (c > 0).then(|| lambda.labels[c])).collect();
    let full = (1usize << p) - 1;
    let mut memo = vec![None; cube.vectors.len()];
    for &c in &cube.order {
        if lambda.labels[c].1 <= alpha {
            continue;
        }
        if sign_masks(cube, &labels, c, true, &mut memo) >> full & 1 == 1 {
            let chain = chain_with_signs(cube, &labels, c, full);
            return LabelingVerdict::AllSignsOnChain { chain: chain.into_iter().map(|d| cube.vectors[d].clone()).collect() };
        }
    }
    LabelingVerdict::Pass
}

/// Conditions restricted to comparabilities through `c`, among labeled vectors.
fn violates_through(
    cube: &Cube,
    labels: &[Option<(usize, usize)>],
    c: usize,
    alpha: usize,
    memo: &mut (Vec<Option<MaskSet>>, Vec<Option<MaskSet>>),
) -> bool {
    let (e, j) = labels[c].unwrap();
    if j <= alpha {
        return cube.supersets[c].iter().chain(&cube.subsets[c]).any(|&d| matches!(labels[d], Some((e2, j2)) if j2 == j && e2 != e));
    }
    let full = (1usize << cube.p) - 1;
    if cube.p == 2 {
        return cube.supersets[c].iter().chain(&cube.subsets[c]).any(|&d| matches!(labels[d], Some((e2, j2)) if j2 == j && e2 != e));
    }
    memo.0.iter_mut().for_each(|m| *m = None);
    memo.1.iter_mut().for_each(|m| *m = None);
    let down = sign_masks(cube, labels, c, false, &mut memo.0);
    let up = sign_masks(cube, labels, c, true, &mut memo.1);
    combine_full(down, up, full)
}

/// `Z_1 ⊂ … ⊂ Z_k` with their labels.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FanChain<T> {
    pub chain: Vec<T>,
    pub labels: Vec<(usize, usize)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "result", rename_all = "snake_case")]
pub enum ChainSearch<T> {
    Found(FanChain<T>),
    /// No chain with the guaranteed properties exists.
    Counterexample,
}

impl<T> ChainSearch<T> {
    pub fn found(&self) -> Option<&FanChain<T>> {
        match self {
            ChainSearch::Found(c) => Some(c),
            ChainSearch::Counterexample => None,
        }
    }
}

fn balanced_bounds(k: usize, p: usize) -> (usize, usize) {
    (k / p, k.div_ceil(p))
}

/// `⌊k/p⌋ ≤ |{i : ε_i = ε}| ≤ ⌈k/p⌉` for every `ε`.
pub fn is_balanced(signs: &[usize], p: usize) -> bool {
    let (lo, hi) = balanced_bounds(signs.len(), p);
    (0..p).all(|e| {
        let c = signs.iter().filter(|&&x| x == e).count();
        lo <= c && c <= hi
    })
}

fn fan_chain_codes(cube: &Cube, labels: &[(usize, usize)], alpha: usize) -> Option<Vec<usize>> {
    let k = cube.n.saturating_sub(alpha);
    if k == 0 {
        return Some(Vec::new());
    }
    let (lo, hi) = balanced_bounds(k, cube.p);
    #[allow(clippy::too_many_arguments)]
    fn rec(
        cube: &Cube,
        labels: &[(usize, usize)],
        alpha: usize,
        k: usize,
        lo: usize,
        hi: usize,
        chain: &mut Vec<usize>,
        counts: &mut [usize],
    ) -> bool {
        if chain.len() == k {
            return true;
        }
        let candidates: &[usize] = match chain.last() {
            None => &cube.order,
            Some(&last) => &cube.supersets[last],
        };
        for &d in candidates {
            let (e, j) = labels[d];
            if j <= alpha || counts[e] == hi || chain.iter().any(|&c| labels[c] == (e, j)) {
                continue;
            }
            // room left for the support to grow
            if cube.vectors[d].support().len() + (k - chain.len() - 1) > cube.n {
                continue;
            }
            counts[e] += 1;
            let left = k - chain.len() - 1;
            let deficit: usize = counts.iter().map(|&c| lo.saturating_sub(c)).sum();
            if deficit <= left {
                chain.push(d);
                if rec(cube, labels, alpha, k, lo, hi, chain, counts) {
                    return true;
                }
                chain.pop();
            }
            counts[e] -= 1;
        }
        false
    }
    let mut chain = Vec::new();
    let mut counts = vec![0; cube.p];
    rec(cube, labels, alpha, k, lo, hi, &mut chain, &mut counts).then_some(chain)
}

/// A chain `Z_1 ⊂ … ⊂ Z_{n−α}` with every level above `α`, pairwise distinct
/// labels and balanced signs; lexicographically first in (support size,
/// code) order.
pub fn find_fan_chain(lambda: &EquivariantLabeling, alpha: usize) -> Result<ChainSearch<SignedVector>> {
    let verdict = check_labeling_conditions(lambda, alpha);
    if !verdict.passed() {
        return Err(Error::Precondition(format!("labeling fails its conditions: {verdict:?}")));
    }
    let cube = &lambda.cube;
    Ok(match fan_chain_codes(cube, &lambda.labels, alpha) {
        Some(codes) => ChainSearch::Found(FanChain {
            labels: codes.iter().map(|&c| lambda.labels[c]).collect(),
            chain: codes.into_iter().map(|c| cube.vectors[c].clone()).collect(),
        }),
        None => ChainSearch::Counterexample,
    })
}

/// Re-checks the three chain properties from scratch.
pub fn check_fan_chain(lambda: &EquivariantLabeling, alpha: usize, chain: &FanChain<SignedVector>) -> bool {
    let k = lambda.n().saturating_sub(alpha);
    let labels: Option<Vec<(usize, usize)>> = chain.chain.iter().map(|x| lambda.label(x).ok()).collect();
    let Some(labels) = labels else { return false };
    let strict = chain.chain.windows(2).all(|w| w[0].is_subset(&w[1]) && w[0] != w[1]);
    let distinct = (0..labels.len()).all(|i| (i + 1..labels.len()).all(|j| labels[i] != labels[j]));
    let signs: Vec<usize> = labels.iter().map(|l| l.0).collect();
    chain.chain.len() == k && labels == chain.labels && strict && labels.iter().all(|l| l.1 > alpha) && distinct && is_balanced(&signs, lambda.p())
}

/// Number of chains `X_1 ⊂ … ⊂ X_n` whose labels, sorted by level, are
/// `(0, c_1), (1, c_2), (0, c_3), …` with `c_1 < c_2 < …` (`p = 2`).
pub fn ky_fan_count(lambda: &EquivariantLabeling) -> Result<u64> {
    if lambda.p() != 2 {
        return Err(Error::InvalidParameters("alternating chain counts need p = 2".into()));
    }
    Ok(alternating_flags(&lambda.cube, &lambda.labels))
}

fn alternating_flags(cube: &Cube, labels: &[(usize, usize)]) -> u64 {
    let n = cube.n;
    fn rec(cube: &Cube, labels: &[(usize, usize)], c: usize, acc: &mut Vec<(usize, usize)>, n: usize) -> u64 {
        if acc.len() == n {
            let mut sorted = acc.clone();
            sorted.sort_by_key(|l| l.1);
            let ok = sorted.windows(2).all(|w| w[0].1 < w[1].1) && sorted.iter().enumerate().all(|(i, l)| l.0 == i % 2);
            return u64::from(ok);
        }
        let mut total = 0;
        for &d in &cube.supersets[c] {
            if cube.vectors[d].support().len() == acc.len() + 1 {
                acc.push(labels[d]);
                total += rec(cube, labels, d, acc, n);
                acc.pop();
            }
        }
        total
    }
    let mut total = 0;
    for &c in &cube.order {
        if cube.vectors[c].support().len() == 1 {
            let mut acc = vec![labels[c]];
            total += rec(cube, labels, c, &mut acc, n);
        }
    }
    total
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FanParams {
    pub n: usize,
    pub m: usize,
    pub p: usize,
    pub alpha: usize,
}

impl FanParams {
    /// `n − α ≤ (p − 1)(m − α)`.
    pub fn within_bound(&self) -> bool {
        self.n.saturating_sub(self.alpha) <= (self.p - 1) * self.m.saturating_sub(self.alpha)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum Enumeration {
    Exhaustive,
    /// Random depth-first descents, one admissible labeling each.
    Sampled {
        samples: usize,
        seed: u64,
    },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FanSweep {
    pub params: FanParams,
    pub enumeration: Enumeration,
    /// Admissible labelings visited (orbit-representative assignments).
    pub admissible: u64,
    pub chains_found: u64,
    /// Admissible labelings without the guaranteed chain.
    pub counterexamples: u64,
    /// Admissible labelings although `n − α > (p − 1)(m − α)`.
    pub bound_violations: u64,
    /// For `p = 2, α = 0`: admissible labelings with an even number of
    /// alternating chains.
    pub even_alternating_counts: Option<u64>,
    pub first_counterexample: Option<Vec<(SignedVector, (usize, usize))>>,
    pub complete: bool,
    pub nodes: u64,
}

impl FanSweep {
    pub fn failures(&self) -> u64 {
        self.counterexamples + self.bound_violations + self.even_alternating_counts.unwrap_or(0)
    }
}

struct SweepState {
    admissible: u64,
    chains: u64,
    counterexamples: u64,
    bound_violations: u64,
    even: u64,
    first: Option<Vec<(usize, (usize, usize))>>,
    complete: bool,
    nodes: u64,
}

impl SweepState {
    fn new() -> Self {
        SweepState { admissible: 0, chains: 0, counterexamples: 0, bound_violations: 0, even: 0, first: None, complete: true, nodes: 0 }
    }

    fn merge(mut self, o: SweepState) -> SweepState {
        self.admissible += o.admissible;
        self.chains += o.chains;
        self.counterexamples += o.counterexamples;
        self.bound_violations += o.bound_violations;
        self.even += o.even;
        if self.first.is_none() {
            self.first = o.first;
        }
        self.complete &= o.complete;
        self.nodes += o.nodes;
        self
    }
}

struct Sweeper<'a> {
    cube: &'a Cube,
    params: FanParams,
    values: Vec<(usize, usize)>,
}

impl Sweeper<'_> {
    /// Labels the orbit of `reps[i]`; false if that breaks a condition.
    fn place(
        &self,
        labels: &mut [Option<(usize, usize)>],
        i: usize,
        v: (usize, usize),
        memo: &mut (Vec<Option<MaskSet>>, Vec<Option<MaskSet>>),
    ) -> bool {
        let r = self.cube.reps[i];
        let p = self.cube.p;
        for k in 0..p {
            labels[self.cube.rotate(r, k)] = Some(((v.0 + k) % p, v.1));
        }
        (0..p).all(|k| !violates_through(self.cube, labels, self.cube.rotate(r, k), self.params.alpha, memo))
    }

    fn unplace(&self, labels: &mut [Option<(usize, usize)>], i: usize) {
        let r = self.cube.reps[i];
        for k in 0..self.cube.p {
            labels[self.cube.rotate(r, k)] = None;
        }
    }

    fn leaf(&self, labels: &[Option<(usize, usize)>], st: &mut SweepState) {
        st.admissible += 1;
        let full: Vec<(usize, usize)> = labels.iter().map(|l| l.unwrap_or((0, 0))).collect();
        if !self.params.within_bound() {
            st.bound_violations += 1;
        }
        if fan_chain_codes(self.cube, &full, self.params.alpha).is_some() {
            st.chains += 1;
        } else {
            st.counterexamples += 1;
            if st.first.is_none() {
                st.first = Some(self.cube.order.iter().map(|&c| (c, full[c])).collect());
            }
        }
        if self.cube.p == 2 && self.params.alpha == 0 && alternating_flags(self.cube, &full).is_multiple_of(2) {
            st.even += 1;
            if st.first.is_none() {
                st.first = Some(self.cube.order.iter().map(|&c| (c, full[c])).collect());
            }
        }
    }

    fn exhaustive(
        &self,
        labels: &mut [Option<(usize, usize)>],
        i: usize,
        st: &mut SweepState,
        counter: &mut NodeCounter,
        memo: &mut (Vec<Option<MaskSet>>, Vec<Option<MaskSet>>),
    ) {
        if !st.complete {
            return;
        }
        if i == self.cube.reps.len() {
            self.leaf(labels, st);
            return;
        }
        for &v in &self.values {
            if !counter.tick() {
                st.complete = false;
                return;
            }
            if self.place(labels, i, v, memo) {
                self.exhaustive(labels, i + 1, st, counter, memo);
            }
            self.unplace(labels, i);
            if !st.complete {
                return;
            }
        }
    }

    /// One random descent; true once an admissible labeling is reached.
    fn sample(
        &self,
        labels: &mut [Option<(usize, usize)>],
        i: usize,
        st: &mut SweepState,
        counter: &mut NodeCounter,
        rng: &mut ChaCha8Rng,
        memo: &mut (Vec<Option<MaskSet>>, Vec<Option<MaskSet>>),
    ) -> bool {
        if i == self.cube.reps.len() {
            self.leaf(labels, st);
            return true;
        }
        let mut values = self.values.clone();
        values.shuffle(rng);
        for v in values {
            if !counter.tick() {
                st.complete = false;
                return false;
            }
            if self.place(labels, i, v, memo) && self.sample(labels, i + 1, st, counter, rng, memo) {
                self.unplace(labels, i);
                return true;
            }
            self.unplace(labels, i);
            if !st.complete {
                return false;
            }
        }
        false
    }
}

/// Enumerates admissible equivariant labelings (both conditions) over orbit
/// representatives and looks for the guaranteed chain in each.
pub fn fan_sweep(params: FanParams, enumeration: Enumeration, budget: SearchBudget) -> Result<FanSweep> {
    if params.n == 0 || params.m == 0 {
        return Err(Error::InvalidParameters("n and m must be positive".into()));
    }
    let cube = Cube::new(params.n, params.p)?;
    let values: Vec<(usize, usize)> = (1..=params.m).flat_map(|j| (0..params.p).map(move |e| (e, j))).collect();
    let sweeper = Sweeper { cube: &cube, params, values };
    let size = cube.vectors.len();
    let fresh_memo = || (vec![None; size], vec![None; size]);
    let st = match enumeration {
        Enumeration::Exhaustive => {
            let branches = sweeper.values.len() as u64;
            let per_branch = SearchBudget::nodes((budget.max_nodes / branches).max(1));
            sweeper
                .values
                .par_iter()
                .map(|&v| {
                    let mut st = SweepState::new();
                    let mut counter = NodeCounter::new(per_branch);
                    let mut labels = vec![None; size];
                    let mut memo = fresh_memo();
                    if sweeper.place(&mut labels, 0, v, &mut memo) {
                        sweeper.exhaustive(&mut labels, 1, &mut st, &mut counter, &mut memo);
                    }
                    st.nodes = counter.used();
                    st
                })
                .collect::<Vec<_>>()
                .into_iter()
                .fold(SweepState::new(), SweepState::merge)
        }
        Enumeration::Sampled { samples, seed } => {
            let mut st = SweepState::new();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut counter = NodeCounter::new(budget);
            let mut memo = fresh_memo();
            for _ in 0..samples {
                let mut labels = vec![None; size];
                if !sweeper.sample(&mut labels, 0, &mut st, &mut counter, &mut rng, &mut memo) && st.complete {
                    // no admissible labeling at all
                    break;
                }
                if !st.complete {
                    break;
                }
            }
            st.nodes = counter.used();
            st
        }
    };
    Ok(FanSweep {
        params,
        enumeration,
        admissible: st.admissible,
        chains_found: st.chains,
        counterexamples: st.counterexamples,
        bound_violations: st.bound_violations,
        even_alternating_counts: (params.p == 2 && params.alpha == 0).then_some(st.even),
        first_counterexample: st.first.map(|v| v.into_iter().map(|(c, l)| (cube.vectors[c].clone(), l)).collect()),
        complete: st.complete,
        nodes: st.nodes,
    })
}

/// Antipodal labelings `λ: {−1,0,+1}^n ∖ {0} → {±1, …, ±m}` with no
/// complementary pair `X ⊆ Y`, `λ(X) = −λ(Y)`: the `p = 2, α = 0` case,
/// where the chain bound reads `m ≥ n`. Label `(ε, j)` stands for `+j` when
/// `ε = 0` and `−j` when `ε = 1`.
pub fn classical_tucker_sweep(n: usize, m: usize, budget: SearchBudget) -> Result<FanSweep> {
    fan_sweep(FanParams { n, m, p: 2, alpha: 0 }, Enumeration::Exhaustive, budget)
}

/// The labeling used to find colorful subhypergraphs of `KG^p(F)`: below the
/// alternation threshold `a = alt_p(F, σ)` a vector is labeled by its first
/// nonzero entry and alternation; above it by `a + c(X)`, `c(X)` the largest
/// color (1-based) of an edge of `F` inside some `σ(X^ε)`, and the sign `ε`
/// of the colex-largest class holding such an edge.
///
/// Returns the labeling and `α = a`; `m = a + palette`.
pub fn lambda_from_coloring(f: &Hypergraph, p: usize, c: &Coloring, sigma: &Ordering) -> Result<(EquivariantLabeling, usize)> {
    if sigma.len() != f.n() {
        return Err(Error::NotBijection);
    }
    let kg = kneser(f, p)?;
    if c.colors().len() != kg.n() {
        return Err(Error::PartialColoring { got: c.colors().len(), n: kg.n() });
    }
    kg.require_proper(c)?;
    let a = alt_sigma(f, p, sigma)?;
    let m = a + c.palette();
    let edges = f.edges();
    let lambda = EquivariantLabeling::from_fn(f.n(), p, m, |x| {
        let ax = alt(x);
        if ax <= a {
            return (x.first_nonzero().unwrap(), ax);
        }
        let mut best: Option<(usize, VertexSet, usize)> = None;
        for eps in 0..p {
            let class = x.class(eps);
            let image = sigma.image(class);
            let top = edges.iter().enumerate().filter(|(_, e)| e.is_subset(image)).map(|(i, _)| c.color(i)).max();
            if let Some(col) = top {
                let better = match best {
                    None => true,
                    Some((bc, bclass, _)) => col > bc || (col == bc && class.0 > bclass.0),
                };
                if better {
                    best = Some((col, class, eps));
                }
            }
        }
        let (col, _, eps) = best.expect("alternation above alt_p(F, σ) forces an edge in some class");
        (eps, a + col + 1)
    })?;
    Ok((lambda, a))
}

/// The colorful family read off a fan chain of [`lambda_from_coloring`]:
/// for each `Z_i` labeled `(ε_i, a + c)`, an edge of color `c` (0-based
/// `c - 1`) inside `σ(Z_i^{ε_i})`, collected into part `ε_i`. Parts hold
/// vertices of `KG^p(F)`.
pub fn colorful_parts_from_chain(
    f: &Hypergraph,
    p: usize,
    c: &Coloring,
    sigma: &Ordering,
    alpha: usize,
    chain: &FanChain<SignedVector>,
) -> Result<Vec<VertexSet>> {
    let mut parts = vec![VertexSet::EMPTY; p];
    for (x, &(eps, j)) in chain.chain.iter().zip(&chain.labels) {
        if j <= alpha {
            return Err(Error::Precondition("chain element at a level not above α".into()));
        }
        let color = j - alpha - 1;
        let image = sigma.image(x.class(eps));
        let edge = f
            .edges()
            .iter()
            .enumerate()
            .find(|(i, e)| e.is_subset(image) && c.color(*i) == color)
            .map(|(i, _)| i)
            .ok_or_else(|| Error::Precondition(format!("no edge of color {} inside the class", color + 1)))?;
        parts[eps].insert(edge);
    }
    Ok(parts)
}

/// Splits `σ ∪ τ`: levels `< α` (0-based) form `σ`, the rest `τ`.
fn split(rho: &LabeledSimplex, alpha: usize) -> (Vec<VertexSet>, LabeledSimplex) {
    let low = VertexSet::full(alpha.min(64));
    let sigma: Vec<VertexSet> = (0..rho.p()).map(|e| rho.class(e).intersection(low)).collect();
    let tau: Vec<VertexSet> = (0..rho.p()).map(|e| rho.class(e).difference(low)).collect();
    (sigma, LabeledSimplex::from_classes(rho.m(), tau).expect("restriction of a valid simplex"))
}

/// `Γ(σ ∪ τ)` as `(sign, level)` with a 1-based level: `(ε, max level of σ)`
/// when `τ = ∅`, otherwise `(s₀(τ̄), α + l(τ))` when `h(τ) = 0` and
/// `(s(τ̄), α + l(τ))` when `h(τ) > 0`.
pub fn gamma(rho: &LabeledSimplex, alpha: usize) -> Result<(usize, usize)> {
    let p = rho.p();
    let (sigma, tau) = split(rho, alpha);
    if tau.is_empty() {
        let top = sigma.iter().enumerate().filter_map(|(e, c)| c.last().map(|j| (j, e))).max();
        let Some((j, e)) = top else {
            return Err(Error::OutsideDomain("Γ is defined on nonempty simplices".into()));
        };
        if sigma.iter().filter(|c| c.contains(j)).count() > 1 {
            return Err(Error::OutsideDomain("σ must carry one sign per level".into()));
        }
        return Ok((e, j + 1));
    }
    let (l, h) = value_l(&tau);
    let sign = if h == 0 {
        let empty: VertexSet = (0..p).filter(|&e| tau.class(e).is_empty()).collect();
        s0(empty, p)?
    } else {
        let classes = (0..p).map(|e| if tau.class(e).len() == h { tau.class(e) } else { VertexSet::EMPTY }).collect();
        s(&LabeledSimplex::from_classes(rho.m(), classes)?)?
    };
    Ok((sign, alpha + l))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProofCase {
    BothTauEmpty,
    TauEmptyBelowOnly,
    /// `h(τ) = h(τ') = 0`.
    BothHZero,
    /// `h(τ) = 0 < h(τ')`.
    HZeroThenPositive,
    /// `h(τ) = h(τ') > 0`.
    SameH,
    /// `0 < h(τ) < h(τ')`.
    GrowingH,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum Refutation {
    /// The two images lie on different levels.
    LevelsDiffer { below: usize, above: usize },
    /// The two images share a level and the sign inputs coincide.
    SignsAgree,
    /// The case argument does not rule out the pair.
    Unrefuted { gamma: (usize, usize), gamma_prime: (usize, usize) },
}

/// For `ρ ⊆ ρ'`, replays the case analysis showing `Γ(ρ)` and `Γ(ρ')` never
/// share a level with different signs, then re-checks the claimed outcome
/// against the computed values. `Unrefuted` marks a gap.
pub fn refute_conflict(rho: &LabeledSimplex, rho_prime: &LabeledSimplex, alpha: usize) -> Result<(ProofCase, Refutation)> {
    if !rho.is_subset(rho_prime) || rho.is_empty() {
        return Err(Error::Precondition("need nonempty simplices ρ ⊆ ρ'".into()));
    }
    let p = rho.p();
    let (_, tau) = split(rho, alpha);
    let (_, tau2) = split(rho_prime, alpha);
    let g = gamma(rho, alpha)?;
    let g2 = gamma(rho_prime, alpha)?;
    let (l, h) = value_l(&tau);
    let (l2, h2) = value_l(&tau2);
    let levels = |below: usize, above: usize| Refutation::LevelsDiffer { below, above };
    let (case, claim) = if tau.is_empty() && tau2.is_empty() {
        // both levels carry one sign in σ', so equal levels give equal signs
        (ProofCase::BothTauEmpty, if g.1 == g2.1 { Refutation::SignsAgree } else { levels(g.1, g2.1) })
    } else if tau.is_empty() {
        (ProofCase::TauEmptyBelowOnly, levels(g.1, alpha + l2))
    } else if h == 0 && h2 == 0 {
        let zeros = |t: &LabeledSimplex| (0..p).filter(|&e| t.class(e).is_empty()).count();
        if zeros(&tau) == zeros(&tau2) {
            (ProofCase::BothHZero, Refutation::SignsAgree)
        } else {
            (ProofCase::BothHZero, levels(alpha + p - zeros(&tau), alpha + p - zeros(&tau2)))
        }
    } else if h == 0 {
        (ProofCase::HZeroThenPositive, levels(alpha + l, alpha + l2))
    } else if h == h2 {
        let minimal = |t: &LabeledSimplex| (0..p).filter(|&e| t.class(e).len() == h).count();
        if minimal(&tau) == minimal(&tau2) {
            (ProofCase::SameH, Refutation::SignsAgree)
        } else {
            (ProofCase::SameH, levels(alpha + l, alpha + l2))
        }
    } else {
        (ProofCase::GrowingH, levels(alpha + l, alpha + l2))
    };
    let holds = match claim {
        Refutation::LevelsDiffer { below, above } => below == g.1 && above == g2.1 && below < above,
        Refutation::SignsAgree => g == g2,
        Refutation::Unrefuted { .. } => false,
    };
    Ok((case, if holds { claim } else { Refutation::Unrefuted { gamma: g, gamma_prime: g2 } }))
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GammaReport {
    /// Simplices of `K` (vertices of `sd K`).
    pub vertices: usize,
    /// Comparable pairs of `sd K` that were checked.
    pub pairs: usize,
    pub conflicts: Vec<(LabeledSimplex, LabeledSimplex)>,
    pub cases: Vec<(ProofCase, usize)>,
    pub equivariant: bool,
    /// Largest level used by `Γ`, at most `n − 1` when valid.
    pub max_level: usize,
}

impl GammaReport {
    pub fn is_simplicial_map(&self) -> bool {
        self.conflicts.is_empty() && self.equivariant
    }
}

/// Builds `Γ` on `sd K` for the complex generated by `facets` and checks it
/// is a simplicial `Z_p`-map to `Z_p^{*(n−1)}`. Every simplex must have
/// `l(τ) ≤ n − α − 1`; otherwise the lemma's chain exists and the collapse
/// is undefined.
pub fn gamma_collapse(facets: &[LabeledSimplex], n: usize, alpha: usize) -> Result<GammaReport> {
    let mut faces: Vec<LabeledSimplex> = Vec::new();
    let mut seen = std::collections::HashSet::new();
    for f in facets {
        let elems = f.elements();
        if elems.len() > 20 {
            return Err(Error::InvalidParameters("facet too large to subdivide".into()));
        }
        for mask in 1u32..1 << elems.len() {
            let sub: Vec<(usize, usize)> = (0..elems.len()).filter(|&i| mask >> i & 1 == 1).map(|i| elems[i]).collect();
            let t = LabeledSimplex::new(f.p(), f.m(), &sub)?;
            if seen.insert(t.clone()) {
                faces.push(t);
            }
        }
    }
    let mut values = Vec::with_capacity(faces.len());
    for rho in &faces {
        let (_, tau) = split(rho, alpha);
        if !tau.is_simplex() {
            return Err(Error::OutsideDomain("τ has a level with every sign".into()));
        }
        if alpha + value_l(&tau).0 >= n {
            return Err(Error::Precondition(format!("l(τ) = {} ≥ n − α: the chain of the lemma exists", value_l(&tau).0)));
        }
        values.push(gamma(rho, alpha)?);
    }
    let index: std::collections::HashMap<&LabeledSimplex, usize> = faces.iter().enumerate().map(|(i, f)| (f, i)).collect();
    let p = facets.first().map_or(2, |f| f.p());
    let equivariant =
        faces.iter().enumerate().all(|(i, f)| index.get(&f.rotate(1)).is_none_or(|&j| values[j] == ((values[i].0 + 1) % p, values[i].1)));
    let mut conflicts = Vec::new();
    let mut cases: std::collections::BTreeMap<String, (ProofCase, usize)> = Default::default();
    let mut pairs = 0;
    for (i, a) in faces.iter().enumerate() {
        for (j, b) in faces.iter().enumerate() {
            if i == j || !a.is_subset(b) {
                continue;
            }
            pairs += 1;
            let (case, _) = refute_conflict(a, b, alpha)?;
            cases.entry(format!("{case:?}")).or_insert((case, 0)).1 += 1;
            if values[i].1 == values[j].1 && values[i].0 != values[j].0 {
                conflicts.push((a.clone(), b.clone()));
            }
        }
    }
    Ok(GammaReport {
        vertices: faces.len(),
        pairs,
        conflicts,
        cases: cases.into_values().collect(),
        equivariant,
        max_level: values.iter().map(|v| v.1).max().unwrap_or(0),
    })
}

/// Checks that `labels` (`(g, j)` per vertex, `j ≥ 1`) is `G`-equivariant
/// and that no edge joins `(g, j)` and `(g', j)` with `g ≠ g'`.
pub fn check_gfan_labeling(t: &GComplex, labels: &[(usize, usize)]) -> Result<()> {
    let group = t.group();
    if labels.len() != t.num_vertices() || labels.iter().any(|&(g, j)| g >= group.order() || j == 0) {
        return Err(Error::Precondition("labels must give (g, j) with j ≥ 1 for every vertex".into()));
    }
    for g in 0..group.order() {
        for v in 0..t.num_vertices() {
            let (h, j) = labels[v];
            if labels[t.act(g, v)] != (group.mul(g, h), j) {
                return Err(Error::Precondition(format!("labeling is not equivariant at vertex {v}")));
            }
        }
    }
    for (u, v) in t.edges() {
        if labels[u].1 == labels[v].1 && labels[u].0 != labels[v].0 {
            return Err(Error::Precondition(format!("edge {u}-{v} joins two signs on level {}", labels[u].1)));
        }
    }
    Ok(())
}

/// A simplex of `T` with labels `(g_0, j_0), …, (g_n, j_n)`, `g_i ≠ g_{i+1}`
/// and `j_0 < … < j_n`.
pub fn gfan_chain(t: &GComplex, labels: &[(usize, usize)], n: usize) -> Result<ChainSearch<usize>> {
    check_gfan_labeling(t, labels)?;
    let mut order: Vec<usize> = (0..t.num_vertices()).collect();
    order.sort_by_key(|&v| (labels[v].1, v));
    fn rec(t: &GComplex, labels: &[(usize, usize)], order: &[usize], want: usize, chain: &mut Vec<usize>) -> bool {
        if chain.len() == want {
            return true;
        }
        for &v in order {
            if let Some(&last) = chain.last() {
                let (g, j) = labels[last];
                if labels[v].1 <= j || labels[v].0 == g || !t.neighbors(last).contains(v) {
                    continue;
                }
                let face = Face::from_slice(&chain.iter().copied().chain([v]).collect::<Vec<_>>());
                if !t.is_simplex(&face) {
                    continue;
                }
            }
            chain.push(v);
            if rec(t, labels, order, want, chain) {
                return true;
            }
            chain.pop();
        }
        false
    }
    let mut chain = Vec::new();
    Ok(if rec(t, labels, &order, n + 1, &mut chain) {
        ChainSearch::Found(FanChain { labels: chain.iter().map(|&v| labels[v]).collect(), chain })
    } else {
        ChainSearch::Counterexample
    })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GFanSweep {
    pub m: usize,
    pub n: usize,
    pub admissible: u64,
    pub chains_found: u64,
    pub counterexamples: u64,
    /// Admissible labelings with `m < n + 1`.
    pub bound_violations: u64,
    pub complete: bool,
}

/// Every admissible equivariant labeling of `T` into `G × [m]`, enumerated
/// over orbit representatives, checked for a fan chain of length `n + 1`.
pub fn gfan_sweep(t: &GComplex, m: usize, n: usize, budget: SearchBudget) -> Result<GFanSweep> {
    let orbits = t.orbits();
    if !orbits.free {
        return Err(Error::NotFree);
    }
    let group = t.group();
    let order = group.order();
    let mut labels: Vec<Option<(usize, usize)>> = vec![None; t.num_vertices()];
    let mut report = GFanSweep { m, n, admissible: 0, chains_found: 0, counterexamples: 0, bound_violations: 0, complete: true };
    let mut counter = NodeCounter::new(budget);
    #[allow(clippy::too_many_arguments)]
    fn rec(
        t: &GComplex,
        reps: &[usize],
        i: usize,
        m: usize,
        n: usize,
        labels: &mut Vec<Option<(usize, usize)>>,
        report: &mut GFanSweep,
        counter: &mut NodeCounter,
    ) {
        if !report.complete {
            return;
        }
        if i == reps.len() {
            report.admissible += 1;
            if m < n + 1 {
                report.bound_violations += 1;
            }
            let full: Vec<(usize, usize)> = labels.iter().map(|l| l.unwrap()).collect();
            match gfan_chain(t, &full, n) {
                Ok(ChainSearch::Found(_)) => report.chains_found += 1,
                _ => report.counterexamples += 1,
            }
            return;
        }
        let group = t.group();
        let r = reps[i];
        for j in 1..=m {
            for h in 0..group.order() {
                if !counter.tick() {
                    report.complete = false;
                    return;
                }
                let members: Vec<usize> = (0..group.order()).map(|g| t.act(g, r)).collect();
                for (g, &v) in members.iter().enumerate() {
                    labels[v] = Some((group.mul(g, h), j));
                }
                let ok = members.iter().all(|&v| {
                    let (gv, jv) = labels[v].unwrap();
                    t.neighbors(v).iter().all(|u| !matches!(labels[u], Some((gu, ju)) if ju == jv && gu != gv))
                });
                if ok {
                    rec(t, reps, i + 1, m, n, labels, report, counter);
                }
                for &v in &members {
                    labels[v] = None;
                }
            }
        }
    }
    let _ = order;
    rec(t, &orbits.reps, 0, m, n, &mut labels, &mut report, &mut counter);
    Ok(report)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PosetChains {
    /// Certified lower bound on `ind(ΔP)` plus one.
    pub balanced_length: usize,
    /// `p_1 ≺ … ≺ p_k` with strictly increasing levels and balanced signs.
    pub balanced: ChainSearch<usize>,
    /// For `p = 2`: the cross-index lower bound used, plus one.
    pub alternating_length: Option<usize>,
    /// For `p = 2`: a chain whose consecutive signs differ.
    pub alternating: Option<ChainSearch<usize>>,
}

fn poset_chain_search(poset: &GPoset, psi: &[(usize, usize)], k: usize, ok: &dyn Fn(&[usize], usize) -> bool) -> ChainSearch<usize> {
    fn rec(poset: &GPoset, k: usize, chain: &mut Vec<usize>, ok: &dyn Fn(&[usize], usize) -> bool) -> bool {
        if chain.len() == k {
            return true;
        }
        let cands: Vec<usize> = match chain.last() {
            None => (0..poset.len()).collect(),
            Some(&x) => (0..poset.len()).filter(|&y| poset.less(x, y)).collect(),
        };
        for y in cands {
            if ok(chain, y) {
                chain.push(y);
                if rec(poset, k, chain, ok) {
                    return true;
                }
                chain.pop();
            }
        }
        false
    }
    let mut chain = Vec::new();
    if rec(poset, k, &mut chain, ok) {
        ChainSearch::Found(FanChain { labels: chain.iter().map(|&x| psi[x]).collect(), chain })
    } else {
        ChainSearch::Counterexample
    }
}

/// Chains in `P` guaranteed by an order-preserving `Z_p`-map `ψ: P → Q_{s,p}`.
pub fn poset_chain(poset: &GPoset, psi: &[(usize, usize)], s_levels: usize, opts: &IndOptions) -> Result<PosetChains> {
    if !is_q_map(poset, s_levels, psi) {
        return Err(Error::Precondition("ψ is not an order-preserving Z_p-map into Q_{s,p}".into()));
    }
    let p = poset.p();
    let lower = ind_bounds(&order_complex(poset), &[], opts)?.lower;
    let k = (lower + 1).max(0) as usize;
    let (lo, hi) = balanced_bounds(k, p);
    let balanced = poset_chain_search(poset, psi, k, &|chain, y| {
        if chain.last().is_some_and(|&x| psi[x].1 >= psi[y].1) {
            return false;
        }
        let mut counts = vec![0usize; p];
        for &x in chain.iter().chain([&y]) {
            counts[psi[x].0] += 1;
        }
        let left = k - chain.len() - 1;
        counts.iter().all(|&c| c <= hi) && counts.iter().map(|&c| lo.saturating_sub(c)).sum::<usize>() <= left
    });
    let (alternating_length, alternating) = if p == 2 {
        let x = xind_exact(poset, s_levels, opts.budget)?;
        let k2 = (x.lower + 1).max(0) as usize;
        let search = poset_chain_search(poset, psi, k2, &|chain, y| chain.last().is_none_or(|&x| psi[x].0 != psi[y].0));
        (Some(k2), Some(search))
    } else {
        (None, None)
    };
    Ok(PosetChains { balanced_length: k, balanced, alternating_length, alternating })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Lemma {
    /// Chains for labelings of `(Z_p ∪ {0})^n` under both conditions.
    ZpFan,
    /// The antipodal `p = 2, α = 0` case with its alternating-chain parity.
    Tucker,
}

/// A batch of sweeps described in JSON.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Campaign {
    pub lemma: Lemma,
    pub grid: Vec<FanParams>,
    pub enumeration: Enumeration,
    #[serde(default)]
    pub max_nodes: Option<u64>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CampaignReport {
    pub lemma: Lemma,
    pub runs: Vec<FanSweep>,
    pub counterexamples: u64,
    pub complete: bool,
}

pub fn run_campaign(campaign: &Campaign) -> Result<CampaignReport> {
    let budget = campaign.max_nodes.map_or_else(SearchBudget::default, SearchBudget::nodes);
    let mut runs = Vec::new();
    for params in &campaign.grid {
        if campaign.lemma == Lemma::Tucker && (params.p != 2 || params.alpha != 0) {
            return Err(Error::InvalidParameters("the antipodal case needs p = 2 and α = 0".into()));
        }
        runs.push(fan_sweep(*params, campaign.enumeration, budget)?);
    }
    Ok(CampaignReport {
        lemma: campaign.lemma,
        counterexamples: runs.iter().map(|r| r.failures()).sum(),
        complete: runs.iter().all(|r| r.complete),
        runs,
    })
}
