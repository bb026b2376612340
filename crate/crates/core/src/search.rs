//! Exhaustive branch-and-bound search for the smallest range holding a
//! B*[g] set (or B*[g] mod n set) of a given size.
//!
//! Integer problems are solved for an exact span `L` with both endpoints `0`
//! and `L` fixed, then shifted into `{1, ..., L + 1}`. Modular problems fix
//! `0` and require the cyclic gap ending at `0` to be a largest gap. Both
//! searches keep the representation counts incrementally and a bitmask of
//! candidates that can still be added on their own.

use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::sets::{is_bstar, IntSet};

/// Largest `n` accepted by the search (sums must fit an 8-bit index).
pub const MAX_SEARCH_N: u64 = 128;
pub const MAX_SEARCH_G: u64 = 200;
pub const DEFAULT_NODE_BUDGET: u64 = 1_000_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SearchKind {
    Modular,
    Integer,
}

impl SearchKind {
    pub fn as_str(self) -> &'static str {
        match self {
            SearchKind::Modular => "modular",
            SearchKind::Integer => "integer",
        }
    }
}

impl std::str::FromStr for SearchKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "modular" | "mod" => Ok(SearchKind::Modular),
            "integer" | "int" => Ok(SearchKind::Integer),
            _ => Err(format!("unknown search kind '{s}'")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Budget {
    /// Node limit for a single decision `exists_set(kind, g, n, k)`.
    pub max_nodes: u64,
    pub max_time: Option<Duration>,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_nodes: DEFAULT_NODE_BUDGET,
            max_time: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchProblem {
    pub kind: SearchKind,
    pub g: u64,
    pub k: u64,
    /// First `n` tried; `None` starts at the counting lower bound.
    pub n_start: Option<u64>,
    pub n_limit: u64,
    pub budget: Budget,
}

impl SearchProblem {
    pub fn new(kind: SearchKind, g: u64, k: u64) -> Self {
        SearchProblem {
            kind,
            g,
            k,
            n_start: None,
            n_limit: MAX_SEARCH_N,
            budget: Budget::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchResult {
    pub kind: SearchKind,
    pub g: u64,
    pub k: u64,
    /// `None` when no set was found up to `n_limit`.
    pub min_n: Option<u64>,
    pub witness: Option<IntSet>,
    pub nodes_explored: u64,
    /// True iff every `n` below `min_n` (or up to `n_limit` when nothing was
    /// found) was ruled out by a completed search or a counting bound.
    pub exhaustive: bool,
}

impl SearchResult {
    /// `kind,g,k,min_n,exhaustive,witness` with the witness as
    /// space-separated elements.
    pub fn csv_row(&self) -> String {
        let min_n = self.min_n.map_or("none".to_string(), |n| n.to_string());
        let witness = self.witness.as_ref().map_or(String::new(), |w| {
            w.elements()
                .iter()
                .map(|e| e.to_string())
                .collect::<Vec<_>>()
                .join(" ")
        });
        format!(
            "{},{},{},{},{},{}",
            self.kind.as_str(),
            self.g,
            self.k,
            min_n,
            self.exhaustive,
            witness
        )
    }
}

pub const CSV_HEADER: &str = "kind,g,k,min_n,exhaustive,witness";

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SearchError {
    #[error("bad search parameters: {0}")]
    BadParams(String),
    #[error("search budget exceeded after {nodes} nodes")]
    BudgetExceeded { nodes: u64 },
}

#[derive(Clone, Debug, PartialEq)]
pub enum Decision {
    Found(IntSet),
    Infeasible,
}

/// Smallest `n` not excluded by counting ordered representations.
///
/// Integer sets in `{1..n}`: `k^2 <= ge (2n - 1 - k) + go k`, where `ge`/`go`
/// are the largest even/odd numbers `<= g`, since `r(t)` is odd exactly when
/// `t/2` is in the set. Sidon sets also need `k(k-1)/2 <= n - 1` distinct
/// differences. Modular sets: `k^2 <= g n` for even `g`, `k^2 <= (g-1) n + k`
/// for odd `g`. `None` when no `n` passes (B*[1] sets have one element).
pub fn counting_lower_bound(kind: SearchKind, g: u64, k: u64) -> Option<u64> {
    if k <= 1 {
        return Some(1);
    }
    if g < 2 {
        return None;
    }
    let ge = g - g % 2;
    let go = if g % 2 == 1 { g } else { g - 1 };
    let ok = |n: u64| -> bool {
        if n < k {
            return false;
        }
        match kind {
            SearchKind::Integer => {
                let cap = ge * (2 * n - 1 - k) + go * k;
                k * k <= cap && (g != 2 || k * (k - 1) / 2 < n)
            }
            SearchKind::Modular => {
                if g.is_multiple_of(2) {
                    k * k <= g * n
                } else {
                    k * k <= (g - 1) * n + k
                }
            }
        }
    };
    (k..).find(|&n| ok(n))
}

fn validate(kind: SearchKind, g: u64, n: u64, k: u64) -> Result<(), SearchError> {
    if g == 0 || k == 0 || n == 0 {
        return Err(SearchError::BadParams("g, n and k must be positive".into()));
    }
    if g > MAX_SEARCH_G {
        return Err(SearchError::BadParams(format!(
            "g must be at most {MAX_SEARCH_G}"
        )));
    }
    if n > MAX_SEARCH_N {
        return Err(SearchError::BadParams(format!(
            "n must be at most {MAX_SEARCH_N}"
        )));
    }
    let _ = kind;
    Ok(())
}

/// Shared across the branches of one decision.
struct Shared {
    nodes: AtomicU64,
    abort: AtomicBool,
    budget: Budget,
    started: Instant,
}

impl Shared {
    fn new(budget: Budget) -> Self {
        Shared {
            nodes: AtomicU64::new(0),
            abort: AtomicBool::new(false),
            budget,
            started: Instant::now(),
        }
    }

    fn charge(&self, n: u64) -> bool {
        let total = self.nodes.fetch_add(n, Ordering::Relaxed) + n;
        let over_time = self
            .budget
            .max_time
            .is_some_and(|t| self.started.elapsed() > t);
        if total > self.budget.max_nodes || over_time {
            self.abort.store(true, Ordering::Relaxed);
        }
        !self.abort.load(Ordering::Relaxed)
    }
}

#[derive(Clone, Copy, Default)]
struct Bits256([u128; 2]);

impl Bits256 {
    fn set(&mut self, t: usize) {
        self.0[t >> 7] |= 1u128 << (t & 127);
    }

    fn get(&self, t: usize) -> bool {
        self.0[t >> 7] >> (t & 127) & 1 == 1
    }

    /// Bits `s..s+128` as a u128 (bit `v` of the result is bit `v + s`).
    fn shr_low(&self, s: usize) -> u128 {
        if s == 0 {
            self.0[0]
        } else if s < 128 {
            (self.0[0] >> s) | (self.0[1] << (128 - s))
        } else {
            self.0[1] >> (s - 128)
        }
    }

    fn is_empty(&self) -> bool {
        self.0[0] == 0 && self.0[1] == 0
    }

    fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        (0..2).flat_map(move |w| {
            let mut x = self.0[w];
            std::iter::from_fn(move || {
                if x == 0 {
                    None
                } else {
                    let b = x.trailing_zeros() as usize;
                    x &= x - 1;
                    Some(w * 128 + b)
                }
            })
        })
    }
}

fn range_mask(lo: usize, hi: usize) -> u128 {
    // bits lo..=hi
    if lo > hi || lo >= 128 {
        return 0;
    }
    let hi = hi.min(127);
    let upper = if hi == 127 { u128::MAX } else { (1u128 << (hi + 1)) - 1 };
    upper & !((1u128 << lo) - 1)
}

#[derive(Clone, Copy)]
struct Frame {
    heavy: Bits256,
    full: Bits256,
    domain: u128,
}

#[derive(Clone)]
struct Dfs<'a> {
    kind: SearchKind,
    n: usize,
    span_of_l: usize,
    heavy_at: u8,
    full_at: u8,
    reps: [u8; 256],
    elems: Vec<usize>,
    /// `spans[j]`: lower bound on `max - min` of an integer B*[g] set of size `j`.
    spans: &'a [u64],
    shared: &'a Shared,
    pending: u64,
}

enum Outcome {
    Found(Vec<usize>),
    Exhausted,
    Aborted,
}

impl<'a> Dfs<'a> {
    fn new(kind: SearchKind, g: u64, n: usize, spans: &'a [u64], shared: &'a Shared) -> Self {
        Dfs {
            kind,
            n,
            span_of_l: n - 1,
            heavy_at: (g - 1) as u8,
            full_at: g as u8,
            reps: [0; 256],
            elems: Vec::with_capacity(16),
            spans,
            shared,
            pending: 0,
        }
    }

    fn sum(&self, a: usize, b: usize) -> usize {
        match self.kind {
            SearchKind::Integer => a + b,
            SearchKind::Modular => (a + b) % self.n,
        }
    }

    fn shifted(&self, bits: &Bits256, s: usize) -> u128 {
        match self.kind {
            SearchKind::Integer => bits.shr_low(s),
            SearchKind::Modular => {
                let x = bits.0[0];
                let n = self.n;
                if s == 0 {
                    x
                } else {
                    let mask = if n == 128 { u128::MAX } else { (1u128 << n) - 1 };
                    ((x >> s) | (x << (n - s))) & mask
                }
            }
        }
    }

    fn halves(&self, t: usize) -> [Option<usize>; 2] {
        match self.kind {
            SearchKind::Integer => [t.is_multiple_of(2).then_some(t / 2), None],
            SearchKind::Modular => {
                let n = self.n;
                if n % 2 == 1 {
                    [Some(t * n.div_ceil(2) % n), None]
                } else if t.is_multiple_of(2) {
                    [Some(t / 2), Some(t / 2 + n / 2)]
                } else {
                    [None, None]
                }
            }
        }
    }

    /// Adds `e` and returns the frame of the extended set. The domain still
    /// contains values at or below `e`; callers mask those out.
    fn push(&mut self, e: usize, frame: &Frame) -> Frame {
        let mut new_heavy = Bits256::default();
        let mut new_full = Bits256::default();
        let mut heavy = frame.heavy;
        let mut full = frame.full;
        for i in 0..self.elems.len() {
            let t = self.sum(self.elems[i], e);
            self.bump(t, 2, &mut heavy, &mut full, &mut new_heavy, &mut new_full);
        }
        let t = self.sum(e, e);
        self.bump(t, 1, &mut heavy, &mut full, &mut new_heavy, &mut new_full);

        let mut domain = frame.domain & !self.shifted(&heavy, e);
        if !new_heavy.is_empty() {
            for i in 0..self.elems.len() {
                domain &= !self.shifted(&new_heavy, self.elems[i]);
            }
        }
        for t in new_full.ones() {
            for v in self.halves(t).into_iter().flatten() {
                if v < 128 {
                    domain &= !(1u128 << v);
                }
            }
        }
        self.elems.push(e);
        Frame {
            heavy,
            full,
            domain,
        }
    }

    #[inline]
    fn bump(
        &mut self,
        t: usize,
        by: u8,
        heavy: &mut Bits256,
        full: &mut Bits256,
        new_heavy: &mut Bits256,
        new_full: &mut Bits256,
    ) {
        let r = self.reps[t] + by;
        self.reps[t] = r;
        if r >= self.heavy_at && !heavy.get(t) {
            heavy.set(t);
            new_heavy.set(t);
        }
        if r >= self.full_at && !full.get(t) {
            full.set(t);
            new_full.set(t);
        }
    }

    fn pop(&mut self) {
        let e = self.elems.pop().expect("pop on empty search state");
        for i in 0..self.elems.len() {
            let t = self.sum(self.elems[i], e);
            self.reps[t] -= 2;
        }
        let t = self.sum(e, e);
        self.reps[t] -= 1;
    }

    fn tick(&mut self) -> bool {
        self.pending += 1;
        if self.pending >= 4096 {
            let n = std::mem::take(&mut self.pending);
            return self.shared.charge(n);
        }
        true
    }

    fn flush(&mut self) {
        let n = std::mem::take(&mut self.pending);
        self.shared.charge(n);
    }

    fn span(&self, j: usize) -> usize {
        self.spans.get(j).copied().unwrap_or(0) as usize
    }

    /// Integer search: elements strictly between `last` and `hi`, `need` more.
    fn integer(&mut self, frame: Frame, last: usize, hi: usize, need: usize) -> Outcome {
        if need == 0 {
            return Outcome::Found(self.elems.clone());
        }
        let l = self.span_of_l;
        let avail = frame.domain & range_mask(last + 1, hi);
        if (avail.count_ones() as usize) < need {
            return Outcome::Exhausted;
        }
        // {v, need - 1 later elements, L} must fit its minimal span
        let top = match l.checked_sub(self.span(need + 1)) {
            Some(t) => t.min(hi),
            None => return Outcome::Exhausted,
        };
        let mut cands = avail & range_mask(last + 1, top);
        while cands != 0 {
            let v = cands.trailing_zeros() as usize;
            cands &= cands - 1;
            if !self.tick() {
                return Outcome::Aborted;
            }
            let child = self.push(v, &frame);
            let out = self.integer(child, v, hi, need - 1);
            self.pop();
            match out {
                Outcome::Exhausted => {}
                other => return other,
            }
        }
        Outcome::Exhausted
    }

    /// Modular search with `0` fixed; `gap` is the largest gap so far.
    fn modular(&mut self, frame: Frame, last: usize, gap: usize, need: usize) -> Outcome {
        if need == 0 {
            return Outcome::Found(self.elems.clone());
        }
        let n = self.n;
        if n < gap + last + need {
            return Outcome::Exhausted;
        }
        let avail = frame.domain & range_mask(last + 1, n - gap);
        if (avail.count_ones() as usize) < need {
            return Outcome::Exhausted;
        }
        let tail = self.span(need);
        let mut cands = avail;
        while cands != 0 {
            let v = cands.trailing_zeros() as usize;
            cands &= cands - 1;
            let g2 = gap.max(v - last);
            // the final gap back to 0 must be a largest gap
            if v + tail + g2 > n {
                break;
            }
            if !self.tick() {
                return Outcome::Aborted;
            }
            let child = self.push(v, &frame);
            let out = self.modular(child, v, g2, need - 1);
            self.pop();
            match out {
                Outcome::Exhausted => {}
                other => return other,
            }
        }
        Outcome::Exhausted
    }
}

/// Span lower bounds `spans[j]` for integer B*[g] sets of size `j`, either
/// proved by search or taken from the counting bound.
#[derive(Clone, Debug)]
pub struct Searcher {
    budget: Budget,
    spans: std::collections::HashMap<u64, Vec<u64>>,
    nodes: u64,
}

impl Default for Searcher {
    fn default() -> Self {
        Searcher::new(Budget::default())
    }
}

impl Searcher {
    pub fn new(budget: Budget) -> Self {
        Searcher {
            budget,
            spans: Default::default(),
            nodes: 0,
        }
    }

    /// Nodes explored so far, including span precomputation.
    pub fn nodes(&self) -> u64 {
        self.nodes
    }

    fn spans_for(&mut self, g: u64, upto: usize) -> Vec<u64> {
        let mut spans = self.spans.get(&g).cloned().unwrap_or_else(|| vec![0, 0]);
        while spans.len() <= upto {
            let j = spans.len() as u64;
            let Some(floor) = counting_lower_bound(SearchKind::Integer, g, j) else {
                spans.push(MAX_SEARCH_N);
                continue;
            };
            let mut l = (floor - 1).max(spans[spans.len() - 1] + 1);
            let proved = loop {
                if l + 1 > MAX_SEARCH_N {
                    break l;
                }
                match self.integer_exact(g, l as usize, j as usize, &spans) {
                    Ok(Some(_)) => break l,
                    Ok(None) => l += 1,
                    Err(_) => break l,
                }
            };
            spans.push(proved);
        }
        self.spans.insert(g, spans.clone());
        spans
    }

    fn run_branches<F>(&mut self, shared: &Shared, roots: Vec<usize>, f: F) -> Result<Option<Vec<usize>>, SearchError>
    where
        F: Fn(usize) -> Outcome + Sync,
    {
        let found = roots.into_par_iter().find_map_first(|v| match f(v) {
            Outcome::Found(w) => Some(w),
            _ => None,
        });
        self.nodes += shared.nodes.load(Ordering::Relaxed);
        match found {
            Some(w) => Ok(Some(w)),
            None if shared.abort.load(Ordering::Relaxed) => Err(SearchError::BudgetExceeded {
                nodes: shared.nodes.load(Ordering::Relaxed),
            }),
            None => Ok(None),
        }
    }

    /// B*[g] set of size `k` with minimum 0 and maximum exactly `l`.
    fn integer_exact(
        &mut self,
        g: u64,
        l: usize,
        k: usize,
        spans: &[u64],
    ) -> Result<Option<Vec<usize>>, SearchError> {
        if k == 1 {
            return Ok((l == 0).then(|| vec![0]));
        }
        if l == 0 || g < 2 {
            return Ok(None);
        }
        let shared = Shared::new(self.budget);
        let mut root = Dfs::new(SearchKind::Integer, g, l + 1, spans, &shared);
        let empty = Frame {
            heavy: Bits256::default(),
            full: Bits256::default(),
            domain: range_mask(1, l - 1),
        };
        let f0 = root.push(0, &empty);
        let f1 = root.push(l, &f0);
        if k == 2 {
            return Ok(Some(vec![0, l]));
        }
        let need = k - 2;
        let top = l.saturating_sub(spans.get(need + 1).copied().unwrap_or(0) as usize);
        let first = f1.domain & range_mask(1, top.min(l - 1));
        let roots: Vec<usize> = (0..128).filter(|&v| first >> v & 1 == 1).collect();
        let shared_ref = &shared;
        let result = self.run_branches(&shared, roots, |v| {
            let mut dfs = root.clone();
            dfs.shared = shared_ref;
            if !dfs.tick() {
                return Outcome::Aborted;
            }
            let child = dfs.push(v, &f1);
            // mirror images: first gap no larger than last gap
            let out = dfs.integer(child, v, l - v, need - 1);
            dfs.flush();
            out
        });
        result.map(|w| {
            w.map(|mut w| {
                w.sort_unstable();
                w
            })
        })
    }

    fn modular_decide(
        &mut self,
        g: u64,
        n: usize,
        k: usize,
        spans: &[u64],
    ) -> Result<Option<Vec<usize>>, SearchError> {
        if k == 1 {
            return Ok(Some(vec![0]));
        }
        if g < 2 {
            return Ok(None);
        }
        let shared = Shared::new(self.budget);
        let mut root = Dfs::new(SearchKind::Modular, g, n, spans, &shared);
        let empty = Frame {
            heavy: Bits256::default(),
            full: Bits256::default(),
            domain: range_mask(1, n - 1),
        };
        let f0 = root.push(0, &empty);
        let need = k - 1;
        let tail = spans.get(need).copied().unwrap_or(0) as usize;
        // with v the smallest nonzero element, v + tail + v <= n
        let first = f0.domain & range_mask(1, n - 1);
        let roots: Vec<usize> = (1..n)
            .filter(|&v| first >> v & 1 == 1 && 2 * v + tail <= n)
            .collect();
        let shared_ref = &shared;
        self.run_branches(&shared, roots, |v| {
            let mut dfs = root.clone();
            dfs.shared = shared_ref;
            if !dfs.tick() {
                return Outcome::Aborted;
            }
            let child = dfs.push(v, &f0);
            let out = dfs.modular(child, v, v, need - 1);
            dfs.flush();
            out
        })
    }

    /// Decides whether a B*[g] set of size `k` exists in `{1..n}` (integer)
    /// or mod `n` (modular). Witnesses are the first in canonical order for
    /// the smallest feasible span.
    pub fn exists_set(
        &mut self,
        kind: SearchKind,
        g: u64,
        n: u64,
        k: u64,
    ) -> Result<Decision, SearchError> {
        validate(kind, g, n, k)?;
        if k > n {
            return Err(SearchError::BadParams(format!("k={k} exceeds n={n}")));
        }
        let spans = self.spans_for(g, (k as usize).saturating_sub(1));
        match kind {
            SearchKind::Modular => {
                if counting_lower_bound(kind, g, k).is_none_or(|lo| n < lo) {
                    return Ok(Decision::Infeasible);
                }
                Ok(match self.modular_decide(g, n as usize, k as usize, &spans)? {
                    Some(w) => Decision::Found(to_set(kind, n, &w)),
                    None => Decision::Infeasible,
                })
            }
            SearchKind::Integer => {
                let Some(lo) = counting_lower_bound(kind, g, k) else {
                    return Ok(Decision::Infeasible);
                };
                for l in lo - 1..n {
                    if let Some(w) = self.integer_exact(g, l as usize, k as usize, &spans)? {
                        return Ok(Decision::Found(to_set(kind, n, &w)));
                    }
                }
                Ok(Decision::Infeasible)
            }
        }
    }

    pub fn min_n(&mut self, problem: &SearchProblem) -> Result<SearchResult, SearchError> {
        let SearchProblem {
            kind, g, k, n_limit, ..
        } = *problem;
        // no n passes the counting bound: nothing to search
        let floor = counting_lower_bound(kind, g, k).unwrap_or(n_limit + 1);
        let start = problem.n_start.unwrap_or(floor.min(n_limit)).max(1);
        validate(kind, g, start.max(1), k)?;
        if start > n_limit {
            return Err(SearchError::BadParams(format!(
                "n_start={start} exceeds n_limit={n_limit}"
            )));
        }
        if n_limit > MAX_SEARCH_N {
            return Err(SearchError::BadParams(format!(
                "n_limit must be at most {MAX_SEARCH_N}"
            )));
        }
        let before = self.nodes;
        let spans = self.spans_for(g, (k as usize).saturating_sub(1));
        // values below the counting bound need no search
        let mut exhaustive = start <= floor;
        let mut n = start.max(k).max(floor);
        while n <= n_limit {
            let attempt = match kind {
                SearchKind::Integer => self.integer_exact(g, n as usize - 1, k as usize, &spans),
                SearchKind::Modular => self.modular_decide(g, n as usize, k as usize, &spans),
            };
            match attempt {
                Ok(Some(w)) => {
                    return Ok(SearchResult {
                        kind,
                        g,
                        k,
                        min_n: Some(n),
                        witness: Some(to_set(kind, n, &w)),
                        nodes_explored: self.nodes - before,
                        exhaustive,
                    })
                }
                Ok(None) => {}
                Err(SearchError::BudgetExceeded { .. }) => exhaustive = false,
                Err(e) => return Err(e),
            }
            n += 1;
        }
        Ok(SearchResult {
            kind,
            g,
            k,
            min_n: None,
            witness: None,
            nodes_explored: self.nodes - before,
            exhaustive,
        })
    }
}

fn to_set(kind: SearchKind, n: u64, w: &[usize]) -> IntSet {
    let set = match kind {
        SearchKind::Integer => IntSet::integer(w.iter().map(|&e| e as u64 + 1)),
        SearchKind::Modular => IntSet::modular(w.iter().map(|&e| e as u64), n),
    }
    .expect("search produces distinct in-range elements");
    set
}

/// Convenience wrapper with a fresh [`Searcher`] and the default budget.
pub fn exists_set(kind: SearchKind, g: u64, n: u64, k: u64) -> Result<Decision, SearchError> {
    Searcher::default().exists_set(kind, g, n, k)
}

/// Convenience wrapper with a fresh [`Searcher`] using the problem's budget.
pub fn min_n(problem: &SearchProblem) -> Result<SearchResult, SearchError> {
    Searcher::new(problem.budget).min_n(problem)
}

/// Checks a search witness against `(kind, g, n, k)`.
pub fn witness_ok(kind: SearchKind, g: u64, n: u64, k: u64, w: &IntSet) -> bool {
    let shape = match kind {
        SearchKind::Integer => {
            w.modulus().is_none() && w.min().is_some_and(|m| m >= 1) && w.max().is_some_and(|m| m <= n)
        }
        SearchKind::Modular => w.modulus() == Some(n),
    };
    shape && w.len() as u64 == k && is_bstar(w, g)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// All k-subsets of `{0..n-1}` (lexicographic), checked directly.
    fn brute(kind: SearchKind, g: u64, n: u64, k: u64) -> Option<Vec<u64>> {
        fn rec(
            start: u64,
            n: u64,
            k: u64,
            cur: &mut Vec<u64>,
            ok: &dyn Fn(&[u64]) -> bool,
        ) -> Option<Vec<u64>> {
            if cur.len() as u64 == k {
                return ok(cur).then(|| cur.clone());
            }
            for v in start..n {
                cur.push(v);
                if let Some(w) = rec(v + 1, n, k, cur, ok) {
                    return Some(w);
                }
                cur.pop();
            }
            None
        }
        let ok = |s: &[u64]| -> bool {
            let set = match kind {
                SearchKind::Integer => IntSet::integer(s.iter().copied()),
                SearchKind::Modular => IntSet::modular(s.iter().copied(), n),
            }
            .unwrap();
            is_bstar(&set, g)
        };
        rec(0, n, k, &mut Vec::new(), &ok)
    }

    #[test]
    fn spec_examples() {
        let mut s = Searcher::default();
        match s.exists_set(SearchKind::Modular, 3, 7, 4).unwrap() {
            Decision::Found(w) => assert!(witness_ok(SearchKind::Modular, 3, 7, 4, &w)),
            Decision::Infeasible => panic!("expected a witness"),
        }
        let r = s.min_n(&SearchProblem::new(SearchKind::Integer, 2, 4)).unwrap();
        assert_eq!(r.min_n, Some(7));
        assert!(r.exhaustive);
        let r = s.min_n(&SearchProblem::new(SearchKind::Integer, 1, 1)).unwrap();
        assert_eq!(r.min_n, Some(1));
        assert_eq!(r.witness, Some(IntSet::integer([1]).unwrap()));
    }

    #[test]
    fn agrees_with_brute_force() {
        let mut s = Searcher::default();
        for kind in [SearchKind::Integer, SearchKind::Modular] {
            for g in 1..=5u64 {
                for n in 1..=14u64 {
                    for k in 1..=n.min(6) {
                        let fast = s.exists_set(kind, g, n, k).unwrap();
                        let slow = brute(kind, g, n, k);
                        match (&fast, &slow) {
                            (Decision::Found(w), Some(_)) => {
                                assert!(witness_ok(kind, g, n, k, w), "{kind:?} g={g} n={n} k={k} {w}")
                            }
                            (Decision::Infeasible, None) => {}
                            _ => panic!("{kind:?} g={g} n={n} k={k}: {fast:?} vs {slow:?}"),
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn budget_is_reported() {
        let mut s = Searcher::new(Budget {
            max_nodes: 10,
            max_time: None,
        });
        let r = s.min_n(&SearchProblem::new(SearchKind::Integer, 2, 9));
        let r = r.unwrap();
        assert!(!r.exhaustive);
        let err = Searcher::new(Budget {
            max_nodes: 1,
            max_time: None,
        })
        .exists_set(SearchKind::Modular, 2, 60, 8);
        assert!(matches!(err, Err(SearchError::BudgetExceeded { .. })), "{err:?}");
    }

    #[test]
    fn rejects_bad_params() {
        assert!(exists_set(SearchKind::Integer, 0, 5, 2).is_err());
        assert!(exists_set(SearchKind::Integer, 2, 5, 6).is_err());
        assert!(exists_set(SearchKind::Modular, 2, 200, 6).is_err());
    }

    #[test]
    fn counting_bounds_are_below_known_values() {
        assert!(counting_lower_bound(SearchKind::Integer, 2, 8).unwrap() <= 35);
        assert!(counting_lower_bound(SearchKind::Modular, 5, 10).unwrap() <= 28);
        assert_eq!(counting_lower_bound(SearchKind::Integer, 4, 4), Some(4));
        assert_eq!(counting_lower_bound(SearchKind::Integer, 1, 2), None);
    }

    #[test]
    fn csv_row_shape() {
        let r = min_n(&SearchProblem::new(SearchKind::Modular, 3, 4)).unwrap();
        assert_eq!(r.csv_row(), "modular,3,4,7,true,0 1 2 4");
    }
}
