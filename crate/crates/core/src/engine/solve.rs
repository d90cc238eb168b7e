//! The selector problem and its three solvers.
//!
//! * Plain enumeration walks all `r^n` colourings in mixed-radix order with
//!   position `0` least significant.
//! * Pruned search assigns colours to the positions some selector looks at,
//!   most significant first and colours ascending, and abandons a branch as
//!   soon as some selector is fully coloured and good. Its first
//!   counterexample, with untouched positions coloured `0`, is the first one
//!   plain enumeration would meet.
//! * Sampling colours morphisms by hashing their keys and scans selectors
//!   lazily.
//!
//! Work is split into deterministic blocks that run in parallel; results are
//! merged in block order, so verdicts do not depend on the worker count.

use std::sync::atomic::{AtomicU64, Ordering};

use rayon::prelude::*;

use super::{Counterexample, SearchBudget, Strategy, Verdict};
use crate::encoding::combine;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Requirement {
    /// Every group is monochromatic.
    Constant,
    /// All groups together use at most this many colours.
    AtMost(usize),
}

impl Requirement {
    fn holds_on<T: PartialEq + Copy>(&self, groups: &[Vec<T>], color: impl Fn(T) -> u32) -> bool {
        match *self {
            Requirement::Constant => groups.iter().all(|g| match g.split_first() {
                Some((&first, rest)) => {
                    let c = color(first);
                    rest.iter().all(|&x| color(x) == c)
                }
                None => true,
            }),
            Requirement::AtMost(k) => {
                let mut seen: Vec<u32> = Vec::with_capacity(k + 1);
                for g in groups {
                    for &x in g {
                        let c = color(x);
                        if !seen.contains(&c) {
                            seen.push(c);
                            if seen.len() > k {
                                return false;
                            }
                        }
                    }
                }
                true
            }
        }
    }

    /// Holds under every colouring.
    fn trivially_holds<T: Ord + Copy>(&self, groups: &[Vec<T>]) -> bool {
        match *self {
            Requirement::Constant => groups.iter().all(|g| g.iter().all(|x| *x == g[0])),
            Requirement::AtMost(k) => {
                let mut all: Vec<T> = groups.iter().flatten().copied().collect();
                all.sort();
                all.dedup();
                all.len() <= k
            }
        }
    }
}

/// Selectors as groups of positions in `hom(a, c)`.
#[derive(Clone, Debug)]
pub struct Problem {
    pub n: usize,
    pub selectors: Vec<Vec<Vec<u32>>>,
    pub requirement: Requirement,
}

impl Problem {
    pub fn holds(&self, selector: usize, colors: &[u32]) -> bool {
        self.requirement
            .holds_on(&self.selectors[selector], |i: u32| colors[i as usize])
    }

    /// The first selector meeting the requirement under `colors`.
    pub fn first_good(&self, colors: &[u32]) -> Option<usize> {
        (0..self.selectors.len()).find(|&s| self.holds(s, colors))
    }

    fn relevant(&self) -> Vec<u32> {
        let mut seen = vec![false; self.n];
        for groups in &self.selectors {
            let involved: Vec<u32> = match self.requirement {
                // singleton groups never constrain anything
                Requirement::Constant => groups.iter().filter(|g| g.len() > 1).flatten().copied().collect(),
                Requirement::AtMost(_) => groups.iter().flatten().copied().collect(),
            };
            for i in involved {
                seen[i as usize] = true;
            }
        }
        (0..self.n as u32).rev().filter(|&i| seen[i as usize]).collect()
    }
}

fn pow_checked(r: u32, n: usize) -> Option<u64> {
    (r as u64).checked_pow(u32::try_from(n).ok()?)
}

/// Common preamble: `r = 0`, no selectors, a trivially good selector.
fn shortcut(p: &Problem, r: u32) -> Result<Option<Verdict>> {
    if r == 0 {
        if p.n == 0 {
            return Ok(Some(Verdict::pass(Strategy::Vacuous, 0)));
        }
        return Err(Error::Precondition(
            "no 0-colouring of a non-empty hom-set exists".into(),
        ));
    }
    if p.selectors.is_empty() {
        return Ok(Some(Verdict::fail(
            Strategy::Enumeration,
            1,
            Counterexample::Colors(vec![0; p.n]),
        )));
    }
    if p.selectors.iter().any(|g| p.requirement.trivially_holds(g)) {
        return Ok(Some(Verdict::pass(Strategy::Trivial, 0)));
    }
    Ok(None)
}

/// Exhaustive verdict: plain enumeration when `r^n` fits the budget, pruned
/// search otherwise, refusal when neither fits.
pub fn solve_exhaustive(p: &Problem, r: u32, budget: &SearchBudget) -> Result<Verdict> {
    if let Some(v) = shortcut(p, r)? {
        return Ok(v);
    }
    match pow_checked(r, p.n) {
        Some(total) if total <= budget.max_colorings => Ok(enumerate(p, r, total)),
        _ => pruned_search(p, r, budget.max_colorings),
    }
}

const BLOCK: u64 = 1 << 12;

fn digits(mut x: u64, r: u32, n: usize) -> Vec<u32> {
    let mut out = vec![0u32; n];
    for d in out.iter_mut() {
        *d = (x % r as u64) as u32;
        x /= r as u64;
    }
    out
}

fn increment(colors: &mut [u32], r: u32) {
    for c in colors.iter_mut() {
        *c += 1;
        if *c < r {
            return;
        }
        *c = 0;
    }
}

/// Plain mixed-radix enumeration of all `total = r^n` colourings.
pub fn enumerate(p: &Problem, r: u32, total: u64) -> Verdict {
    let blocks = total.div_ceil(BLOCK);
    let first_bad = (0..blocks).into_par_iter().find_map_first(|b| {
        let lo = b * BLOCK;
        let hi = (lo + BLOCK).min(total);
        let mut colors = digits(lo, r, p.n);
        for x in lo..hi {
            if p.first_good(&colors).is_none() {
                return Some((x, colors));
            }
            increment(&mut colors, r);
        }
        None
    });
    match first_bad {
        Some((x, colors)) => Verdict::fail(Strategy::Enumeration, x + 1, Counterexample::Colors(colors)),
        None => Verdict::pass(Strategy::Enumeration, total),
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Status {
    Open,
    Dead,
    Good,
}

struct Dfs<'a> {
    p: &'a Problem,
    r: u32,
    order: &'a [u32],
    touching: &'a [Vec<u32>],
    colors: Vec<i64>,
    status: Vec<Status>,
    alive: usize,
    good: usize,
    nodes: u64,
    cap: u64,
    shared: &'a AtomicU64,
}

enum JobResult {
    Clean(u64),
    Found(u64, Vec<u32>),
    Aborted,
}

impl<'a> Dfs<'a> {
    fn new(
        p: &'a Problem,
        r: u32,
        order: &'a [u32],
        touching: &'a [Vec<u32>],
        cap: u64,
        shared: &'a AtomicU64,
    ) -> Self {
        Self {
            p,
            r,
            order,
            touching,
            colors: vec![-1; p.n],
            status: vec![Status::Open; p.selectors.len()],
            alive: p.selectors.len(),
            good: 0,
            nodes: 0,
            cap,
            shared,
        }
    }

    fn compute(&self, s: usize) -> Status {
        let groups = &self.p.selectors[s];
        let mut complete = true;
        match self.p.requirement {
            Requirement::Constant => {
                for g in groups.iter().filter(|g| g.len() > 1) {
                    let mut seen = -1i64;
                    for &i in g {
                        let c = self.colors[i as usize];
                        if c < 0 {
                            complete = false;
                        } else if seen < 0 {
                            seen = c;
                        } else if seen != c {
                            return Status::Dead;
                        }
                    }
                }
            }
            Requirement::AtMost(k) => {
                let mut seen: Vec<i64> = Vec::new();
                for &i in groups.iter().flatten() {
                    let c = self.colors[i as usize];
                    if c < 0 {
                        complete = false;
                    } else if !seen.contains(&c) {
                        seen.push(c);
                        if seen.len() > k {
                            return Status::Dead;
                        }
                    }
                }
            }
        }
        if complete {
            Status::Good
        } else {
            Status::Open
        }
    }

    fn set(&mut self, i: u32, c: i64) {
        self.colors[i as usize] = c;
        for &s in &self.touching[i as usize] {
            let s = s as usize;
            let new = self.compute(s);
            let old = std::mem::replace(&mut self.status[s], new);
            if old == new {
                continue;
            }
            match old {
                Status::Dead => self.alive += 1,
                Status::Good => self.good -= 1,
                Status::Open => {}
            }
            match new {
                Status::Dead => self.alive -= 1,
                Status::Good => self.good += 1,
                Status::Open => {}
            }
        }
    }

    fn witness(&self) -> Vec<u32> {
        self.colors.iter().map(|&c| c.max(0) as u32).collect()
    }

    /// Ok(Some(colouring)) on a counterexample, Err(()) when over budget.
    fn run(&mut self, depth: usize) -> std::result::Result<Option<Vec<u32>>, ()> {
        if self.good > 0 {
            return Ok(None);
        }
        if self.alive == 0 {
            return Ok(Some(self.witness()));
        }
        if depth == self.order.len() {
            // every selector is decided, and none is good
            return Ok(Some(self.witness()));
        }
        let i = self.order[depth];
        for c in 0..self.r as i64 {
            self.nodes += 1;
            if self.nodes > self.cap
                || (self.nodes.is_multiple_of(1024) && self.shared.fetch_add(1024, Ordering::Relaxed) > self.cap)
            {
                return Err(());
            }
            self.set(i, c);
            let out = self.run(depth + 1);
            self.set(i, -1);
            match out {
                Ok(None) => {}
                other => return other,
            }
        }
        Ok(None)
    }

    fn job(&mut self, prefix: &[u32]) -> JobResult {
        for (d, &c) in prefix.iter().enumerate() {
            self.nodes += 1;
            self.set(self.order[d], c as i64);
            if self.good > 0 {
                return JobResult::Clean(self.nodes);
            }
            if self.alive == 0 {
                return JobResult::Found(self.nodes, self.witness());
            }
        }
        match self.run(prefix.len()) {
            Ok(None) => JobResult::Clean(self.nodes),
            Ok(Some(w)) => JobResult::Found(self.nodes, w),
            Err(()) => JobResult::Aborted,
        }
    }
}

/// Pruned depth-first search over the relevant positions.
pub fn pruned_search(p: &Problem, r: u32, cap: u64) -> Result<Verdict> {
    let order = p.relevant();
    let mut touching = vec![Vec::new(); p.n];
    for (s, groups) in p.selectors.iter().enumerate() {
        let mut idx: Vec<u32> = groups.iter().flatten().copied().collect();
        idx.sort_unstable();
        idx.dedup();
        for i in idx {
            touching[i as usize].push(s as u32);
        }
    }
    // split on the leading positions into at least 256 blocks when possible
    let mut depth = 0;
    while depth < order.len() && pow_checked(r, depth).is_some_and(|x| x < 256) {
        depth += 1;
    }
    let blocks = pow_checked(r, depth).unwrap_or(1);
    let shared = AtomicU64::new(0);
    let prefix_of = |b: u64| {
        // most significant digit first
        let mut d = digits(b, r, depth);
        d.reverse();
        d
    };
    let results: Vec<JobResult> = (0..blocks)
        .into_par_iter()
        .map(|b| Dfs::new(p, r, &order, &touching, cap, &shared).job(&prefix_of(b)))
        .collect();
    let mut used = 0u64;
    for (b, res) in results.into_iter().enumerate() {
        let res = match res {
            JobResult::Aborted => {
                let fresh = AtomicU64::new(0);
                let left = cap.saturating_sub(used);
                Dfs::new(p, r, &order, &touching, left, &fresh).job(&prefix_of(b as u64))
            }
            other => other,
        };
        match res {
            JobResult::Clean(n) => used += n,
            JobResult::Found(n, w) => {
                used += n;
                if used > cap {
                    break;
                }
                return Ok(Verdict::fail(Strategy::PrunedSearch, used, Counterexample::Colors(w)));
            }
            JobResult::Aborted => {
                used = cap + 1;
            }
        }
        if used > cap {
            break;
        }
    }
    if used > cap {
        return Err(Error::BudgetRefused(format!(
            "search over {} relevant positions with {r} colours needs more than {cap} nodes",
            order.len()
        )));
    }
    Ok(Verdict::pass(Strategy::PrunedSearch, used))
}

/// Source of selectors for sampled checks: each selector is a family of
/// groups of morphism keys.
pub trait SelectorStream: Sync {
    /// Calls `visit` on selectors in canonical order until it returns `true`
    /// or `limit` selectors were offered. Returns `Some(index)` of the
    /// accepted selector, `None` when the stream ended, and an error when the
    /// limit was hit.
    fn scan(&self, limit: u64, visit: &mut dyn FnMut(&[Vec<u64>]) -> bool) -> Result<Option<u64>>;
}

pub fn sample_color(seed: u64, sample: u64, key: u64, r: u32) -> u32 {
    (combine(combine(seed, sample), key) % r as u64) as u32
}

/// Sampled verdict over `budget.sample_count` hashed colourings.
pub fn solve_sampled(
    stream: &dyn SelectorStream,
    requirement: Requirement,
    r: u32,
    budget: &SearchBudget,
) -> Result<Verdict> {
    if r == 0 {
        return Err(Error::Precondition("sampled checks need at least one colour".into()));
    }
    let seed = budget.seed;
    let outcomes: Vec<Result<bool>> = (0..budget.sample_count)
        .into_par_iter()
        .map(|s| {
            let found = stream.scan(budget.max_selector_scan, &mut |groups| {
                requirement.holds_on(groups, |k: u64| sample_color(seed, s, k, r))
            })?;
            Ok(found.is_some())
        })
        .collect();
    for (s, out) in outcomes.into_iter().enumerate() {
        if !out? {
            return Ok(Verdict::fail(
                Strategy::Sampled,
                s as u64 + 1,
                Counterexample::Sample { seed, sample: s as u64 },
            ));
        }
    }
    Ok(Verdict::pass(Strategy::Sampled, budget.sample_count))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn problem(selectors: Vec<Vec<Vec<u32>>>, n: usize, requirement: Requirement) -> Problem {
        Problem {
            n,
            selectors,
            requirement,
        }
    }

    /// Pigeonhole: positions 0..3, selectors are the pairs.
    fn pairs(n: u32) -> Problem {
        let mut sel = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                sel.push(vec![vec![i, j]]);
            }
        }
        problem(sel, n as usize, Requirement::Constant)
    }

    #[test]
    fn pigeonhole_passes_and_fails() {
        assert!(enumerate(&pairs(3), 2, 8).passed());
        let v = enumerate(&pairs(2), 2, 4);
        assert_eq!(v.counterexample, Some(Counterexample::Colors(vec![1, 0])));
    }

    #[test]
    fn search_agrees_with_enumeration() {
        for n in 2..6 {
            for r in 1..4 {
                let p = pairs(n);
                let total = (r as u64).pow(n);
                let a = enumerate(&p, r, total);
                let b = pruned_search(&p, r, 1 << 30).unwrap();
                assert_eq!(a.outcome, b.outcome, "n={n} r={r}");
                assert_eq!(a.counterexample, b.counterexample, "n={n} r={r}");
            }
        }
    }

    #[test]
    fn irrelevant_positions_are_zero() {
        // position 0 is never looked at
        let p = problem(vec![vec![vec![1, 2]]], 3, Requirement::Constant);
        let v = pruned_search(&p, 2, 100).unwrap();
        assert_eq!(v.counterexample, Some(Counterexample::Colors(vec![0, 1, 0])));
        assert_eq!(enumerate(&p, 2, 8).counterexample, v.counterexample);
    }

    #[test]
    fn budget_refusal_is_explicit() {
        let p = pairs(6);
        assert!(matches!(pruned_search(&p, 3, 10), Err(Error::BudgetRefused(_))));
    }

    #[test]
    fn zero_colours() {
        let empty = problem(vec![], 0, Requirement::Constant);
        assert!(solve_exhaustive(&empty, 0, &SearchBudget::default()).unwrap().passed());
        assert!(solve_exhaustive(&pairs(2), 0, &SearchBudget::default()).is_err());
    }

    #[test]
    fn at_most_requirement() {
        // three positions, one selector looking at all: at most 2 of 3 colours fails
        let p = problem(vec![vec![vec![0, 1, 2]]], 3, Requirement::AtMost(2));
        let v = solve_exhaustive(&p, 3, &SearchBudget::default()).unwrap();
        assert_eq!(v.counterexample, Some(Counterexample::Colors(vec![2, 1, 0])));
    }
}
