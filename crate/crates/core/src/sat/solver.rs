//! A small CDCL solver: two watched literals, first-UIP learning, activity
//! based branching with phase saving, Luby restarts and LBD-based clause
//! deletion. Decisions are deterministic (ties broken by variable index).

use std::time::{Duration, Instant};

/// Literal `2 * var + sign` with 0-based variables; sign 1 is negative.
type Lit = u32;

const NO_REASON: u32 = u32::MAX;

fn var(l: Lit) -> usize {
    (l >> 1) as usize
}

fn neg(l: Lit) -> Lit {
    l ^ 1
}

fn from_dimacs(l: i32) -> Lit {
    let v = l.unsigned_abs() - 1;
    (v << 1) | u32::from(l < 0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Value {
    Unset,
    True,
    False,
}

/// Outcome of [`Solver::solve`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Answer {
    /// `model[v]` is the value of DIMACS variable `v`; index 0 is unused.
    Sat(Vec<bool>),
    Unsat,
    /// Budget exhausted before an answer.
    Unknown,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct Limits {
    pub conflicts: Option<u64>,
    pub time: Option<Duration>,
}

/// Counters reported after a run.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Stats {
    pub decisions: u64,
    pub conflicts: u64,
    pub propagations: u64,
    pub restarts: u64,
}

struct Clause {
    lits: Vec<Lit>,
    learnt: bool,
    lbd: u32,
    deleted: bool,
}

/// Indexed max-heap of variables keyed by activity.
struct Heap {
    items: Vec<usize>,
    pos: Vec<usize>,
}

const ABSENT: usize = usize::MAX;

impl Heap {
    fn new(n: usize) -> Self {
        Heap {
            items: (0..n).collect(),
            pos: (0..n).collect(),
        }
    }

    fn better(act: &[f64], a: usize, b: usize) -> bool {
        act[a] > act[b] || (act[a] == act[b] && a < b)
    }

    fn up(&mut self, act: &[f64], mut i: usize) {
        while i > 0 {
            let p = (i - 1) / 2;
            if !Self::better(act, self.items[i], self.items[p]) {
                break;
            }
            self.swap(i, p);
            i = p;
        }
    }

    fn down(&mut self, act: &[f64], mut i: usize) {
        loop {
            let (l, r) = (2 * i + 1, 2 * i + 2);
            let mut best = i;
            if l < self.items.len() && Self::better(act, self.items[l], self.items[best]) {
                best = l;
            }
            if r < self.items.len() && Self::better(act, self.items[r], self.items[best]) {
                best = r;
            }
            if best == i {
                return;
            }
            self.swap(i, best);
            i = best;
        }
    }

    fn swap(&mut self, i: usize, j: usize) {
        self.items.swap(i, j);
        self.pos[self.items[i]] = i;
        self.pos[self.items[j]] = j;
    }

    fn insert(&mut self, act: &[f64], v: usize) {
        if self.pos[v] != ABSENT {
            return;
        }
        self.pos[v] = self.items.len();
        self.items.push(v);
        self.up(act, self.items.len() - 1);
    }

    fn pop(&mut self, act: &[f64]) -> Option<usize> {
        let top = *self.items.first()?;
        let last = self.items.pop().unwrap();
        self.pos[top] = ABSENT;
        if !self.items.is_empty() {
            self.items[0] = last;
            self.pos[last] = 0;
            self.down(act, 0);
        }
        Some(top)
    }

    fn bumped(&mut self, act: &[f64], v: usize) {
        if self.pos[v] != ABSENT {
            self.up(act, self.pos[v]);
        }
    }
}

pub struct Solver {
    num_vars: usize,
    clauses: Vec<Clause>,
    watches: Vec<Vec<u32>>,
    value: Vec<Value>,
    level: Vec<u32>,
    reason: Vec<u32>,
    trail: Vec<Lit>,
    trail_lim: Vec<usize>,
    qhead: usize,
    activity: Vec<f64>,
    var_inc: f64,
    heap: Heap,
    phase: Vec<bool>,
    seen: Vec<bool>,
    ok: bool,
    num_learnts: usize,
    pub stats: Stats,
}

impl Solver {
    pub fn new(num_vars: usize) -> Self {
        Solver {
            num_vars,
            clauses: Vec::new(),
            watches: vec![Vec::new(); 2 * num_vars],
            value: vec![Value::Unset; num_vars],
            level: vec![0; num_vars],
            reason: vec![NO_REASON; num_vars],
            trail: Vec::new(),
            trail_lim: Vec::new(),
            qhead: 0,
            activity: vec![0.0; num_vars],
            var_inc: 1.0,
            heap: Heap::new(num_vars),
            phase: vec![false; num_vars],
            seen: vec![false; num_vars],
            ok: true,
            num_learnts: 0,
            stats: Stats::default(),
        }
    }

    fn lit_value(&self, l: Lit) -> Value {
        match self.value[var(l)] {
            Value::Unset => Value::Unset,
            v if (l & 1 == 0) == (v == Value::True) => Value::True,
            _ => Value::False,
        }
    }

    fn decision_level(&self) -> u32 {
        self.trail_lim.len() as u32
    }

    fn enqueue(&mut self, l: Lit, reason: u32) {
        let v = var(l);
        self.value[v] = if l & 1 == 0 { Value::True } else { Value::False };
        self.level[v] = self.decision_level();
        self.reason[v] = reason;
        self.trail.push(l);
    }

    /// Adds a clause of DIMACS literals. Must be called before [`Solver::solve`].
    ///
    /// # Panics
    /// If a literal is 0 or names a variable above `num_vars`.
    pub fn add_clause(&mut self, dimacs: &[i32]) {
        if !self.ok {
            return;
        }
        let mut lits: Vec<Lit> = dimacs
            .iter()
            .map(|&l| {
                assert!(
                    l != 0 && l.unsigned_abs() as usize <= self.num_vars,
                    "literal {l} out of range"
                );
                from_dimacs(l)
            })
            .collect();
        lits.sort_unstable();
        lits.dedup();
        if lits.windows(2).any(|w| w[0] ^ 1 == w[1]) {
            return;
        }
        lits.retain(|&l| self.lit_value(l) != Value::False);
        if lits.iter().any(|&l| self.lit_value(l) == Value::True) {
            return;
        }
        match lits.len() {
            0 => self.ok = false,
            1 => {
                self.enqueue(lits[0], NO_REASON);
                if self.propagate().is_some() {
                    self.ok = false;
                }
            }
            _ => {
                self.attach(lits, false, 0);
            }
        }
    }

    fn attach(&mut self, lits: Vec<Lit>, learnt: bool, lbd: u32) -> u32 {
        let id = self.clauses.len() as u32;
        self.watches[lits[0] as usize].push(id);
        self.watches[lits[1] as usize].push(id);
        self.clauses.push(Clause {
            lits,
            learnt,
            lbd,
            deleted: false,
        });
        if learnt {
            self.num_learnts += 1;
        }
        id
    }

    /// Unit propagation; returns a conflicting clause.
    fn propagate(&mut self) -> Option<u32> {
        while self.qhead < self.trail.len() {
            let p = self.trail[self.qhead];
            self.qhead += 1;
            self.stats.propagations += 1;
            let false_lit = neg(p);
            let mut ws = std::mem::take(&mut self.watches[false_lit as usize]);
            let (mut i, mut j) = (0, 0);
            let mut conflict = None;
            while i < ws.len() {
                let cid = ws[i];
                i += 1;
                if self.clauses[cid as usize].deleted {
                    continue;
                }
                let lits = &mut self.clauses[cid as usize].lits;
                if lits[0] == false_lit {
                    lits.swap(0, 1);
                }
                let first = lits[0];
                if self.lit_value(first) == Value::True {
                    ws[j] = cid;
                    j += 1;
                    continue;
                }
                let lits = &mut self.clauses[cid as usize].lits;
                let mut moved = false;
                for k in 2..lits.len() {
                    let l = lits[k];
                    let val = match self.value[var(l)] {
                        Value::Unset => Value::Unset,
                        v if (l & 1 == 0) == (v == Value::True) => Value::True,
                        _ => Value::False,
                    };
                    if val != Value::False {
                        lits.swap(1, k);
                        self.watches[l as usize].push(cid);
                        moved = true;
                        break;
                    }
                }
                if moved {
                    continue;
                }
                ws[j] = cid;
                j += 1;
                if self.lit_value(first) == Value::False {
                    conflict = Some(cid);
                    while i < ws.len() {
                        ws[j] = ws[i];
                        i += 1;
                        j += 1;
                    }
                } else {
                    self.enqueue(first, cid);
                }
            }
            ws.truncate(j);
            // nothing can have been pushed to this list meanwhile: a new
            // watch is never a false literal
            self.watches[false_lit as usize] = ws;
            if conflict.is_some() {
                self.qhead = self.trail.len();
                return conflict;
            }
        }
        None
    }

    fn bump(&mut self, v: usize) {
        self.activity[v] += self.var_inc;
        if self.activity[v] > 1e100 {
            for a in &mut self.activity {
                *a *= 1e-100;
            }
            self.var_inc *= 1e-100;
        }
        self.heap.bumped(&self.activity, v);
    }

    /// First-UIP analysis; returns the learnt clause (asserting literal first)
    /// and the level to jump back to.
    fn analyze(&mut self, mut confl: u32) -> (Vec<Lit>, u32) {
        let mut learnt: Vec<Lit> = vec![0];
        let mut path = 0;
        let mut p: Option<Lit> = None;
        let mut idx = self.trail.len();
        let current = self.decision_level();
        loop {
            let start = usize::from(p.is_some());
            let lits = self.clauses[confl as usize].lits.clone();
            for &q in &lits[start..] {
                let v = var(q);
                if !self.seen[v] && self.level[v] > 0 {
                    self.bump(v);
                    self.seen[v] = true;
                    if self.level[v] >= current {
                        path += 1;
                    } else {
                        learnt.push(q);
                    }
                }
            }
            loop {
                idx -= 1;
                if self.seen[var(self.trail[idx])] {
                    break;
                }
            }
            let lit = self.trail[idx];
            p = Some(lit);
            self.seen[var(lit)] = false;
            path -= 1;
            if path == 0 {
                break;
            }
            confl = self.reason[var(lit)];
        }
        learnt[0] = neg(p.unwrap());
        for &l in &learnt[1..] {
            self.seen[var(l)] = false;
        }
        let mut back = 0;
        if learnt.len() > 1 {
            let mut best = 1;
            for k in 2..learnt.len() {
                if self.level[var(learnt[k])] > self.level[var(learnt[best])] {
                    best = k;
                }
            }
            learnt.swap(1, best);
            back = self.level[var(learnt[1])];
        }
        (learnt, back)
    }

    fn cancel_until(&mut self, lvl: u32) {
        if self.decision_level() <= lvl {
            return;
        }
        let stop = self.trail_lim[lvl as usize];
        for k in (stop..self.trail.len()).rev() {
            let l = self.trail[k];
            let v = var(l);
            self.phase[v] = l & 1 == 0;
            self.value[v] = Value::Unset;
            self.reason[v] = NO_REASON;
            self.heap.insert(&self.activity, v);
        }
        self.trail.truncate(stop);
        self.trail_lim.truncate(lvl as usize);
        self.qhead = stop;
    }

    fn lbd(&mut self, lits: &[Lit]) -> u32 {
        let mut levels: Vec<u32> = lits.iter().map(|&l| self.level[var(l)]).collect();
        levels.sort_unstable();
        levels.dedup();
        levels.len() as u32
    }

    /// Deletes the worse half of the learnt clauses that are not reasons.
    fn reduce(&mut self) {
        let mut cand: Vec<u32> = (0..self.clauses.len() as u32)
            .filter(|&c| {
                let cl = &self.clauses[c as usize];
                cl.learnt && !cl.deleted && cl.lbd > 2
            })
            .collect();
        cand.sort_by_key(|&c| (std::cmp::Reverse(self.clauses[c as usize].lbd), c));
        let locked = |s: &Self, c: u32| {
            let l0 = s.clauses[c as usize].lits[0];
            s.reason[var(l0)] == c && s.lit_value(l0) == Value::True
        };
        for &c in &cand[..cand.len() / 2] {
            if !locked(self, c) {
                self.clauses[c as usize].deleted = true;
                self.clauses[c as usize].lits = Vec::new();
                self.num_learnts -= 1;
            }
        }
    }

    fn luby(mut i: u64) -> u64 {
        // 1 1 2 1 1 2 4 1 1 2 ...
        let mut size = 1;
        let mut seq = 0;
        while size < i + 1 {
            seq += 1;
            size = 2 * size + 1;
        }
        while size - 1 != i {
            size = (size - 1) / 2;
            seq -= 1;
            i %= size;
        }
        1 << seq
    }

    pub fn solve(&mut self, limits: Limits) -> Answer {
        if !self.ok {
            return Answer::Unsat;
        }
        let started = Instant::now();
        if self.propagate().is_some() {
            self.ok = false;
            return Answer::Unsat;
        }
        let mut restart_round = 0;
        let mut max_learnts = (self.clauses.len() / 3).max(5000);
        loop {
            let budget = 100 * Self::luby(restart_round);
            restart_round += 1;
            let mut conflicts_here = 0;
            loop {
                if let Some(confl) = self.propagate() {
                    self.stats.conflicts += 1;
                    conflicts_here += 1;
                    if self.decision_level() == 0 {
                        self.ok = false;
                        return Answer::Unsat;
                    }
                    let (learnt, back) = self.analyze(confl);
                    self.cancel_until(back);
                    if learnt.len() == 1 {
                        self.enqueue(learnt[0], NO_REASON);
                    } else {
                        let lbd = self.lbd(&learnt);
                        let asserting = learnt[0];
                        let id = self.attach(learnt, true, lbd);
                        self.enqueue(asserting, id);
                    }
                    self.var_inc /= 0.95;
                    if let Some(max) = limits.conflicts {
                        if self.stats.conflicts >= max {
                            self.cancel_until(0);
                            return Answer::Unknown;
                        }
                    }
                    if self.stats.conflicts % 256 == 0 {
                        if let Some(t) = limits.time {
                            if started.elapsed() >= t {
                                self.cancel_until(0);
                                return Answer::Unknown;
                            }
                        }
                    }
                } else {
                    if conflicts_here >= budget {
                        self.stats.restarts += 1;
                        self.cancel_until(0);
                        break;
                    }
                    if self.num_learnts >= max_learnts {
                        self.reduce();
                        max_learnts += max_learnts / 10;
                    }
                    let next = loop {
                        match self.heap.pop(&self.activity) {
                            None => break None,
                            Some(v) if self.value[v] == Value::Unset => break Some(v),
                            Some(_) => {}
                        }
                    };
                    let Some(v) = next else {
                        let model = std::iter::once(false)
                            .chain(self.value.iter().map(|&x| x == Value::True))
                            .collect();
                        self.cancel_until(0);
                        return Answer::Sat(model);
                    };
                    self.stats.decisions += 1;
                    self.trail_lim.push(self.trail.len());
                    let lit = ((v as u32) << 1) | u32::from(!self.phase[v]);
                    self.enqueue(lit, NO_REASON);
                }
            }
        }
    }
}

/// Solves a clause list over `num_vars` DIMACS variables.
pub fn solve_clauses(num_vars: usize, clauses: &[Vec<i32>], limits: Limits) -> (Answer, Stats) {
    let mut s = Solver::new(num_vars);
    for c in clauses {
        s.add_clause(c);
    }
    let a = s.solve(limits);
    (a, s.stats)
}
