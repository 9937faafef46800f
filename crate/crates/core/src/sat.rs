//! A small CDCL satisfiability solver: two watched literals, first-UIP
//! learning, VSIDS with phase saving and Luby restarts.

use crate::hypergraph::NodeCounter;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub(crate) struct Lit(u32);

impl Lit {
    pub fn pos(v: usize) -> Lit {
        Lit(2 * v as u32)
    }

    pub fn neg(v: usize) -> Lit {
        Lit(2 * v as u32 + 1)
    }

    pub fn var(self) -> usize {
        (self.0 >> 1) as usize
    }

    fn index(self) -> usize {
        self.0 as usize
    }

    fn negative(self) -> bool {
        self.0 & 1 == 1
    }
}

impl std::ops::Not for Lit {
    type Output = Lit;
    fn not(self) -> Lit {
        Lit(self.0 ^ 1)
    }
}

const UNDEF: i8 = -1;
const NO_REASON: usize = usize::MAX;

struct Heap {
    heap: Vec<usize>,
    pos: Vec<usize>,
}

impl Heap {
    fn contains(&self, v: usize) -> bool {
        self.pos[v] != usize::MAX
    }

    fn push(&mut self, v: usize, act: &[f64]) {
        if self.contains(v) {
            return;
        }
        self.pos[v] = self.heap.len();
        self.heap.push(v);
        self.up(self.heap.len() - 1, act);
    }

    fn pop(&mut self, act: &[f64]) -> Option<usize> {
        let top = *self.heap.first()?;
        let last = self.heap.pop().unwrap();
        self.pos[top] = usize::MAX;
        if !self.heap.is_empty() {
            self.heap[0] = last;
            self.pos[last] = 0;
            self.down(0, act);
        }
        Some(top)
    }

    fn up(&mut self, mut i: usize, act: &[f64]) {
        let v = self.heap[i];
        while i > 0 {
            let parent = (i - 1) / 2;
            if act[self.heap[parent]] >= act[v] {
                break;
            }
            self.heap[i] = self.heap[parent];
            self.pos[self.heap[i]] = i;
            i = parent;
        }
        self.heap[i] = v;
        self.pos[v] = i;
    }

    fn down(&mut self, mut i: usize, act: &[f64]) {
        let v = self.heap[i];
        loop {
            let mut child = 2 * i + 1;
            if child >= self.heap.len() {
                break;
            }
            if child + 1 < self.heap.len() && act[self.heap[child + 1]] > act[self.heap[child]] {
                child += 1;
            }
            if act[self.heap[child]] <= act[v] {
                break;
            }
            self.heap[i] = self.heap[child];
            self.pos[self.heap[i]] = i;
            i = child;
        }
        self.heap[i] = v;
        self.pos[v] = i;
    }
}

pub(crate) struct Solver {
    clauses: Vec<Vec<Lit>>,
    watches: Vec<Vec<usize>>,
    value: Vec<i8>,
    level: Vec<usize>,
    reason: Vec<usize>,
    phase: Vec<bool>,
    activity: Vec<f64>,
    inc: f64,
    heap: Heap,
    trail: Vec<Lit>,
    limits: Vec<usize>,
    head: usize,
    seen: Vec<bool>,
    unsat: bool,
}

impl Solver {
    pub fn new() -> Self {
        Solver {
            clauses: Vec::new(),
            watches: Vec::new(),
            value: Vec::new(),
            level: Vec::new(),
            reason: Vec::new(),
            phase: Vec::new(),
            activity: Vec::new(),
            inc: 1.0,
            heap: Heap { heap: Vec::new(), pos: Vec::new() },
            trail: Vec::new(),
            limits: Vec::new(),
            head: 0,
            seen: Vec::new(),
            unsat: false,
        }
    }

    pub fn new_var(&mut self) -> usize {
        let v = self.value.len();
        self.value.push(UNDEF);
        self.level.push(0);
        self.reason.push(NO_REASON);
        self.phase.push(false);
        self.activity.push(0.0);
        self.seen.push(false);
        self.watches.push(Vec::new());
        self.watches.push(Vec::new());
        self.heap.pos.push(usize::MAX);
        self.heap.push(v, &self.activity);
        v
    }

    /// `Some(true)` if the literal is true under the current assignment.
    fn lit_value(&self, l: Lit) -> Option<bool> {
        match self.value[l.var()] {
            UNDEF => None,
            x => Some((x == 1) != l.negative()),
        }
    }

    pub fn model_value(&self, v: usize) -> bool {
        self.value[v] == 1
    }

    fn assign(&mut self, l: Lit, reason: usize) {
        let v = l.var();
        self.value[v] = if l.negative() { 0 } else { 1 };
        self.level[v] = self.limits.len();
        self.reason[v] = reason;
        self.trail.push(l);
    }

    /// Adds a clause at the root; returns false once the formula is unsatisfiable.
    pub fn add_clause(&mut self, lits: &[Lit]) -> bool {
        if self.unsat {
            return false;
        }
        let mut c: Vec<Lit> = Vec::with_capacity(lits.len());
        for &l in lits {
            match self.lit_value(l) {
                Some(true) => return true,
                Some(false) => continue,
                None => {}
            }
            if c.contains(&!l) {
                return true;
            }
            if !c.contains(&l) {
                c.push(l);
            }
        }
        match c.len() {
            0 => {
                self.unsat = true;
                false
            }
            1 => {
                self.assign(c[0], NO_REASON);
                if self.propagate().is_some() {
                    self.unsat = true;
                }
                !self.unsat
            }
            _ => {
                self.attach(c);
                true
            }
        }
    }

    fn attach(&mut self, c: Vec<Lit>) -> usize {
        let i = self.clauses.len();
        self.watches[c[0].index()].push(i);
        self.watches[c[1].index()].push(i);
        self.clauses.push(c);
        i
    }

    /// Returns a conflicting clause, if any.
    fn propagate(&mut self) -> Option<usize> {
        while self.head < self.trail.len() {
            let falsified = !self.trail[self.head];
            self.head += 1;
            let ws = std::mem::take(&mut self.watches[falsified.index()]);
            let mut kept = Vec::with_capacity(ws.len());
            let mut conflict = None;
            let mut iter = ws.into_iter();
            for ci in iter.by_ref() {
                let c = &mut self.clauses[ci];
                if c[0] == falsified {
                    c.swap(0, 1);
                }
                let first = c[0];
                if self.value[first.var()] != UNDEF && (self.value[first.var()] == 1) != first.negative() {
                    kept.push(ci);
                    continue;
                }
                let mut moved = false;
                for k in 2..c.len() {
                    let l = c[k];
                    let val = self.value[l.var()];
                    if val == UNDEF || (val == 1) != l.negative() {
                        c.swap(1, k);
                        let w = c[1].index();
                        self.watches[w].push(ci);
                        moved = true;
                        break;
                    }
                }
                if moved {
                    continue;
                }
                kept.push(ci);
                if self.lit_value(first) == Some(false) {
                    conflict = Some(ci);
                    break;
                }
                self.assign(first, ci);
            }
            kept.extend(iter);
            self.watches[falsified.index()] = kept;
            if conflict.is_some() {
                return conflict;
            }
        }
        None
    }

    fn bump(&mut self, v: usize) {
        self.activity[v] += self.inc;
        if self.activity[v] > 1e100 {
            for a in &mut self.activity {
                *a *= 1e-100;
            }
            self.inc *= 1e-100;
        }
        if self.heap.contains(v) {
            let i = self.heap.pos[v];
            self.heap.up(i, &self.activity);
        }
    }

    /// First-UIP clause with the asserting literal first.
    fn analyze(&mut self, mut confl: usize) -> Vec<Lit> {
        let current = self.limits.len();
        let mut learnt = vec![Lit(0)];
        let mut pending = 0;
        let mut p: Option<Lit> = None;
        let mut idx = self.trail.len();
        loop {
            let start = usize::from(p.is_some());
            for j in start..self.clauses[confl].len() {
                let q = self.clauses[confl][j];
                let v = q.var();
                if !self.seen[v] && self.level[v] > 0 {
                    self.seen[v] = true;
                    self.bump(v);
                    if self.level[v] == current {
                        pending += 1;
                    } else {
                        learnt.push(q);
                    }
                }
            }
            loop {
                idx -= 1;
                if self.seen[self.trail[idx].var()] {
                    break;
                }
            }
            let lit = self.trail[idx];
            self.seen[lit.var()] = false;
            pending -= 1;
            p = Some(lit);
            if pending == 0 {
                break;
            }
            confl = self.reason[lit.var()];
        }
        learnt[0] = !p.unwrap();
        // drop literals implied by the rest of the clause
        let mut out = vec![learnt[0]];
        for &q in &learnt[1..] {
            let r = self.reason[q.var()];
            let redundant = r != NO_REASON && self.clauses[r][1..].iter().all(|l| self.seen[l.var()] || self.level[l.var()] == 0);
            if !redundant {
                out.push(q);
            }
        }
        for &q in &learnt[1..] {
            self.seen[q.var()] = false;
        }
        self.inc /= 0.95;
        out
    }

    fn backtrack(&mut self, level: usize) {
        if self.limits.len() <= level {
            return;
        }
        let start = self.limits[level];
        for i in (start..self.trail.len()).rev() {
            let v = self.trail[i].var();
            self.phase[v] = !self.trail[i].negative();
            self.value[v] = UNDEF;
            self.reason[v] = NO_REASON;
            self.heap.push(v, &self.activity);
        }
        self.trail.truncate(start);
        self.limits.truncate(level);
        self.head = start;
    }

    /// `Some(satisfiable)`, or `None` when the conflict budget runs out.
    pub fn solve(&mut self, counter: &mut NodeCounter) -> Option<bool> {
        if self.unsat {
            return Some(false);
        }
        if self.propagate().is_some() {
            self.unsat = true;
            return Some(false);
        }
        let mut restart = 1u64;
        let mut conflicts_left = luby(restart) * 100;
        loop {
            if let Some(confl) = self.propagate() {
                if self.limits.is_empty() {
                    self.unsat = true;
                    return Some(false);
                }
                if !counter.tick() {
                    self.backtrack(0);
                    return None;
                }
                let learnt = self.analyze(confl);
                let bt = learnt[1..].iter().map(|l| self.level[l.var()]).max().unwrap_or(0);
                self.backtrack(bt);
                if learnt.len() == 1 {
                    self.assign(learnt[0], NO_REASON);
                } else {
                    let mut c = learnt;
                    let j = (1..c.len()).max_by_key(|&j| self.level[c[j].var()]).unwrap();
                    c.swap(1, j);
                    let first = c[0];
                    let ci = self.attach(c);
                    self.assign(first, ci);
                }
                conflicts_left = conflicts_left.saturating_sub(1);
                continue;
            }
            if conflicts_left == 0 {
                restart += 1;
                conflicts_left = luby(restart) * 100;
                self.backtrack(0);
                continue;
            }
            let next = loop {
                match self.heap.pop(&self.activity) {
                    Some(v) if self.value[v] == UNDEF => break Some(v),
                    Some(_) => continue,
                    None => break None,
                }
            };
            let Some(v) = next else { return Some(true) };
            self.limits.push(self.trail.len());
            let l = if self.phase[v] { Lit::pos(v) } else { Lit::neg(v) };
            self.assign(l, NO_REASON);
        }
    }
}

fn luby(mut i: u64) -> u64 {
    // i-th term (1-based) of 1, 1, 2, 1, 1, 2, 4, ...
    loop {
        let mut k = 1;
        while (1u64 << k) - 1 < i {
            k += 1;
        }
        if (1u64 << k) - 1 == i {
            return 1 << (k - 1);
        }
        i -= (1u64 << (k - 1)) - 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::SearchBudget;

    fn solve(nvars: usize, clauses: &[Vec<i32>]) -> (Option<bool>, Solver) {
        let mut s = Solver::new();
        for _ in 0..nvars {
            s.new_var();
        }
        for c in clauses {
            let lits: Vec<Lit> = c.iter().map(|&x| if x > 0 { Lit::pos(x as usize - 1) } else { Lit::neg((-x) as usize - 1) }).collect();
            s.add_clause(&lits);
        }
        let mut counter = NodeCounter::new(SearchBudget::nodes(1_000_000));
        (s.solve(&mut counter), s)
    }

    #[test]
    fn luby_sequence() {
        let seq: Vec<u64> = (1..=15).map(luby).collect();
        assert_eq!(seq, vec![1, 1, 2, 1, 1, 2, 4, 1, 1, 2, 1, 1, 2, 4, 8]);
    }

    #[test]
    fn pigeonhole_is_unsat() {
        // 5 pigeons, 4 holes
        let var = |i: usize, j: usize| (i * 4 + j + 1) as i32;
        let mut cls = Vec::new();
        for i in 0..5 {
            cls.push((0..4).map(|j| var(i, j)).collect());
        }
        for j in 0..4 {
            for a in 0..5 {
                for b in a + 1..5 {
                    cls.push(vec![-var(a, j), -var(b, j)]);
                }
            }
        }
        assert_eq!(solve(20, &cls).0, Some(false));
    }

    #[test]
    fn models_satisfy_random_formulas() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let n = rng.gen_range(3..12);
            let m = rng.gen_range(1..50);
            let cls: Vec<Vec<i32>> = (0..m)
                .map(|_| {
                    (0..3)
                        .map(|_| {
                            let v = rng.gen_range(1..=n) as i32;
                            if rng.gen_bool(0.5) {
                                v
                            } else {
                                -v
                            }
                        })
                        .collect()
                })
                .collect();
            let brute = (0..1u32 << n).any(|mask| cls.iter().all(|c| c.iter().any(|&x| (mask >> (x.unsigned_abs() - 1) & 1 == 1) == (x > 0))));
            let (res, s) = solve(n, &cls);
            assert_eq!(res, Some(brute));
            if brute {
                assert!(cls.iter().all(|c| c.iter().any(|&x| s.model_value(x.unsigned_abs() as usize - 1) == (x > 0))));
            }
        }
    }
}
