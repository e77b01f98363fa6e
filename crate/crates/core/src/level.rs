//! Entry levels and the incremental `k*` trackers.
//!
//! For a fixed score, "hypothesis j clears at k" is monotone in k, so each
//! hypothesis has an entry level `ℓ_j`: the smallest k at which it clears.
//! Both online e-BH and online BH then reduce to
//! `k_t* = max{k ≤ t : #{j ≤ t : ℓ_j ≤ k} ≥ k}` and `R_t = {j : ℓ_j ≤ k_t*}`.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use crate::stream::{e_clears, p_clears};

/// Levels above this are treated as "never clears". No stream gets near it.
pub const MAX_LEVEL: u64 = 1 << 52;

/// Smallest `k ≥ 1` with `pred(k)`, searched upward from a floating guess.
/// The guess only needs to be close; the exact predicate decides.
fn settle_level(guess: f64, pred: impl Fn(u64) -> bool) -> Option<u64> {
    let mut k = if guess.is_nan() || guess < 1.0 {
        1
    } else if guess > MAX_LEVEL as f64 {
        return if pred(MAX_LEVEL) { search_level(pred) } else { None };
    } else {
        guess as u64
    };
    while k > 1 && pred(k - 1) {
        k -= 1;
    }
    let start = k;
    while !pred(k) {
        k += 1;
        if k - start > 4 {
            // A bad guess; fall back to the exact search.
            return search_level(pred);
        }
    }
    Some(k)
}

/// Smallest `k ∈ [1, MAX_LEVEL]` with `pred(k)` for a monotone predicate.
pub fn search_level(pred: impl Fn(u64) -> bool) -> Option<u64> {
    let mut hi = 1u64;
    while !pred(hi) {
        if hi >= MAX_LEVEL {
            return None;
        }
        hi = (hi * 2).min(MAX_LEVEL);
    }
    let mut lo = hi / 2; // pred(lo) is false, or lo == 0
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if pred(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Some(hi)
}

/// Entry level of an e-value: smallest k with `E ≥ 1/(k α γ)`.
pub fn e_entry_level(e: f64, alpha: f64, gamma: f64) -> Option<u64> {
    if gamma <= 0.0 || e <= 0.0 {
        return None;
    }
    settle_level(1.0 / (e * alpha * gamma), |k| e_clears(e, alpha, gamma, k))
}

/// Entry level of a p-value under `β(k) = k`: smallest k with `P ≤ α γ k`.
pub fn p_entry_level(p: f64, alpha: f64, gamma: f64) -> Option<u64> {
    if gamma <= 0.0 {
        return None;
    }
    settle_level(p / (alpha * gamma), |k| p_clears(p, alpha, gamma, k as f64))
}

/// Counts-based `k* = max{k ≤ t : #{ℓ ≤ k} ≥ k}` for a one-off level list.
pub fn k_star_of_levels(levels: impl IntoIterator<Item = Option<u64>>, t: usize) -> usize {
    let mut count = vec![0usize; t + 1];
    for l in levels.into_iter().flatten() {
        if l as usize <= t {
            count[l as usize] += 1;
        }
    }
    let mut cum = 0;
    let mut best = 0;
    for (k, c) in count.iter().enumerate().skip(1) {
        cum += c;
        if cum >= k {
            best = k;
        }
    }
    best
}

/// What changed after pushing one hypothesis into a tracker.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelUpdate {
    pub k_star: usize,
    pub newly_rejected: Vec<usize>,
}

/// Incremental `k*` for a stream of fixed entry levels.
///
/// Keeps `D(k) = #{ℓ ≤ k} − k` in a lazy segment tree over `k ∈ [1, cap]`;
/// a new level adds 1 on the suffix `[ℓ, cap]`, and `k_t*` is the rightmost
/// `k ≤ t` with `D(k) ≥ 0`. Each step costs `O(log t)` plus the output size.
#[derive(Debug, Clone)]
pub struct LevelTracker {
    cap: usize,
    max: Vec<i64>,
    lazy: Vec<i64>,
    buckets: BTreeMap<u64, Vec<usize>>,
    time: usize,
    k_star: usize,
}

impl Default for LevelTracker {
    fn default() -> Self {
        Self::new()
    }
}

impl LevelTracker {
    const INITIAL_CAP: usize = 64;

    pub fn new() -> Self {
        let mut tracker =
            LevelTracker { cap: 0, max: Vec::new(), lazy: Vec::new(), buckets: BTreeMap::new(), time: 0, k_star: 0 };
        tracker.rebuild(Self::INITIAL_CAP);
        tracker
    }

    pub fn k_star(&self) -> usize {
        self.k_star
    }

    /// Adds hypothesis `time + 1` with the given level (`None` = never clears).
    pub fn push(&mut self, level: Option<u64>) -> LevelUpdate {
        self.time += 1;
        let index = self.time;
        if self.time > self.cap {
            self.rebuild((self.cap * 2).max(self.time.next_power_of_two()));
        }
        if let Some(l) = level {
            self.buckets.entry(l).or_default().push(index);
            if l as usize <= self.cap {
                self.add(1, 1, self.cap, l as usize, self.cap, 1);
            }
        }
        let old = self.k_star;
        let new = self.rightmost_nonneg(1, 1, self.cap, self.time).unwrap_or(0);
        debug_assert!(new >= old);
        self.k_star = new;

        let mut newly: Vec<usize> = Vec::new();
        if level.is_some_and(|l| l as usize <= old) {
            newly.push(index);
        }
        if new > old {
            for (_, ids) in self.buckets.range(old as u64 + 1..=new as u64) {
                newly.extend_from_slice(ids);
            }
            newly.sort_unstable();
        }
        LevelUpdate { k_star: new, newly_rejected: newly }
    }

    fn rebuild(&mut self, cap: usize) {
        self.cap = cap;
        let mut count = vec![0i64; cap + 1];
        for (&l, ids) in self.buckets.range(..=cap as u64) {
            count[l as usize] += ids.len() as i64;
        }
        let mut leaves = vec![0i64; cap];
        let mut cum = 0;
        for k in 1..=cap {
            cum += count[k];
            leaves[k - 1] = cum - k as i64;
        }
        self.max = vec![0; 2 * cap];
        self.lazy = vec![0; 2 * cap];
        self.build(1, 1, cap, &leaves);
    }

    fn build(&mut self, node: usize, lo: usize, hi: usize, leaves: &[i64]) {
        if lo == hi {
            self.max[node] = leaves[lo - 1];
            return;
        }
        let mid = (lo + hi) / 2;
        self.build(2 * node, lo, mid, leaves);
        self.build(2 * node + 1, mid + 1, hi, leaves);
        self.max[node] = self.max[2 * node].max(self.max[2 * node + 1]);
    }

    fn push_down(&mut self, node: usize) {
        let z = self.lazy[node];
        if z != 0 {
            for child in [2 * node, 2 * node + 1] {
                self.max[child] += z;
                self.lazy[child] += z;
            }
            self.lazy[node] = 0;
        }
    }

    fn add(&mut self, node: usize, lo: usize, hi: usize, from: usize, to: usize, v: i64) {
        if to < lo || hi < from {
            return;
        }
        if from <= lo && hi <= to {
            self.max[node] += v;
            self.lazy[node] += v;
            return;
        }
        self.push_down(node);
        let mid = (lo + hi) / 2;
        self.add(2 * node, lo, mid, from, to, v);
        self.add(2 * node + 1, mid + 1, hi, from, to, v);
        self.max[node] = self.max[2 * node].max(self.max[2 * node + 1]);
    }

    fn rightmost_nonneg(&mut self, node: usize, lo: usize, hi: usize, limit: usize) -> Option<usize> {
        if lo > limit || self.max[node] < 0 {
            return None;
        }
        if lo == hi {
            return Some(lo);
        }
        self.push_down(node);
        let mid = (lo + hi) / 2;
        self.rightmost_nonneg(2 * node + 1, mid + 1, hi, limit)
            .or_else(|| self.rightmost_nonneg(2 * node, lo, mid, limit))
    }
}

/// Incremental `k*` with decision deadlines.
///
/// With `F` the number of rejected hypotheses whose deadline has passed and
/// `C_t` the active set, `k_t* = F + max{k ≤ |C_t| : #{j ∈ C_t : ℓ_j ≤ F + k} ≥ k}`.
/// Active hypotheses are rejected iff `ℓ_j ≤ k_t*`; expired ones keep the
/// decision they had at their deadline.
#[derive(Debug, Clone, Default)]
pub struct DeadlineTracker {
    /// `(level, index)` of active hypotheses with a finite level, sorted.
    active: Vec<(u64, usize)>,
    expiries: BTreeMap<usize, Vec<usize>>,
    levels: Vec<Option<u64>>,
    rejected: Vec<bool>,
    frozen_rejected: usize,
    expired: usize,
    time: usize,
    k_star: usize,
}

impl DeadlineTracker {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn k_star(&self) -> usize {
        self.k_star
    }

    /// Number of hypotheses whose decision is still open, `|C_t|`.
    pub fn active_len(&self) -> usize {
        self.time - self.expired
    }

    /// Adds hypothesis `time + 1` with its level and deadline (`None` = ∞).
    pub fn push(&mut self, level: Option<u64>, deadline: Option<usize>) -> LevelUpdate {
        self.time += 1;
        let t = self.time;
        debug_assert!(deadline.is_none_or(|d| d >= t));

        while let Some(entry) = self.expiries.first_entry() {
            if *entry.key() >= t {
                break;
            }
            for i in entry.remove() {
                self.expired += 1;
                if self.rejected[i - 1] {
                    self.frozen_rejected += 1;
                }
                if let Some(l) = self.levels[i - 1] {
                    let pos = self.active.binary_search(&(l, i)).expect("active entry");
                    self.active.remove(pos);
                }
            }
        }

        self.levels.push(level);
        self.rejected.push(false);
        if let Some(l) = level {
            let pos = self.active.binary_search(&(l, t)).unwrap_or_else(|p| p);
            self.active.insert(pos, (l, t));
        }
        if let Some(d) = deadline {
            self.expiries.entry(d).or_default().push(t);
        }

        let f = self.frozen_rejected as u64;
        let mut best = 0;
        for (k, &(l, _)) in self.active.iter().enumerate() {
            if l <= f + k as u64 + 1 {
                best = k + 1;
            }
        }
        let k_star = self.frozen_rejected + best;
        debug_assert!(k_star >= self.k_star);
        self.k_star = k_star;

        let mut newly = Vec::new();
        for &(l, i) in &self.active {
            if l as usize > k_star {
                break;
            }
            if !self.rejected[i - 1] {
                self.rejected[i - 1] = true;
                newly.push(i);
            }
        }
        newly.sort_unstable();
        LevelUpdate { k_star, newly_rejected: newly }
    }
}
