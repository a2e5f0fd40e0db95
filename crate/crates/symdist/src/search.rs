//! Desk-scale exhaustive search for the least entry bound M admitting an
//! evaluation-distinct sequence, plus a meet-in-the-middle verifier for the
//! classical degree-1, full-family case.
//!
//! Candidate sequences draw entries from `[0, M]^k` in a canonical order
//! that quotients out permutations: strictly increasing in lexicographic
//! coordinate order when that provably loses no solutions (k = 1,
//! floor(lambda*n) >= m and n >= m + 1, where two equal entries always yield
//! a colliding subset pair exchanging the duplicates), non-decreasing
//! otherwise. Partial sequences are extended only while all evaluations over
//! the current prefix family stay distinct, which is sound because a prefix
//! collision survives into every completion.

use crate::bounds::{prob_upper_full, BoundValue};
use crate::error::{Error, Result};
use crate::esp::EspState;
use crate::params::ProblemParams;
use crate::scalar::Scalar;
use crate::sequence::{Element, IntSequence, Sequence};
use crate::subset::SubsetRef;
use crate::verify::{verify_distinct, VerificationResult, VerifyMode, VerifyOptions, Witness};
use crate::{Int, Rat};
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashSet};
use std::sync::atomic::{AtomicU64, Ordering as AtomicOrdering};
use std::time::{Duration, Instant};

/// Node and wall-clock limits; `None` means unlimited. A node is one
/// attempted partial-sequence extension.
#[derive(Clone, Copy, Debug, Default)]
pub struct Budget {
    pub max_nodes: Option<u64>,
    pub max_wall: Option<Duration>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SearchStatus {
    Found,
    InfeasibleUpTo,
    BudgetExceeded,
}

impl SearchStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            SearchStatus::Found => "found",
            SearchStatus::InfeasibleUpTo => "infeasibleUpTo",
            SearchStatus::BudgetExceeded => "budgetExceeded",
        }
    }
}

#[derive(Clone, Debug)]
pub struct SearchOutcome {
    pub status: SearchStatus,
    pub m_min: Option<Int>,
    pub witness: Option<IntSequence>,
    pub nodes_expanded: u64,
    pub wall_time: Duration,
}

/// Scan order for [`min_m_search`]: a linear scan from 0 gives the cheapest
/// infeasibility proofs at small n; doubling plus bisection suits larger
/// feasible thresholds.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strategy {
    Linear,
    Bisect,
}

/// Smallest subset size whose evaluation participates in distinctness for
/// search purposes. Degree 1 keeps the empty subset (the classical
/// subset-sum convention, where its sum 0 rules out zero entries); for
/// higher degree every subset smaller than the degree evaluates to zero, so
/// those are excluded to keep the problem non-vacuous.
pub fn qualifying_min_size(m: u32) -> u32 {
    if m == 1 {
        0
    } else {
        m
    }
}

struct Ctx {
    nodes: AtomicU64,
    max_nodes: u64,
    deadline: Option<Instant>,
}

impl Ctx {
    fn new(budget: &Budget, start: Instant) -> Self {
        Ctx {
            nodes: AtomicU64::new(0),
            max_nodes: budget.max_nodes.unwrap_or(u64::MAX),
            deadline: budget.max_wall.map(|w| start + w),
        }
    }

    fn tick(&self) -> Result<()> {
        let used = self.nodes.fetch_add(1, AtomicOrdering::Relaxed) + 1;
        if used > self.max_nodes {
            return Err(Error::BudgetExceeded { nodes: used });
        }
        if let Some(d) = self.deadline {
            if Instant::now() >= d {
                return Err(Error::BudgetExceeded { nodes: used });
            }
        }
        Ok(())
    }

    fn used(&self) -> u64 {
        self.nodes.load(AtomicOrdering::Relaxed)
    }
}

/// Shared per-search configuration.
struct Dfs<'a> {
    params: &'a ProblemParams,
    /// M + 1: the per-coordinate alphabet size.
    radix: u64,
    /// radix^(k-1-c) for coordinate c; decodes a candidate index to a tuple.
    place_values: Vec<u64>,
    total: u64,
    cap: u32,
    min_size: u32,
    strict: bool,
    prune: bool,
    ctx: &'a Ctx,
}

/// Mutable branch state: the chosen prefix, every prefix subset of size
/// <= cap with its carrier table, and the evaluation keys of qualifying
/// subsets seen so far.
#[derive(Clone)]
struct BranchState {
    chosen: Vec<Element<Int>>,
    subs: Vec<(u32, EspState<Int>)>,
    seen: HashSet<Vec<u8>>,
}

fn eval_key(state: &EspState<Int>, k: u32, m: u32) -> Vec<u8> {
    let mut buf = Vec::new();
    for c in 0..k {
        state.value(c, m).write_canonical_bytes(&mut buf);
    }
    buf
}

impl<'a> Dfs<'a> {
    fn new(params: &'a ProblemParams, m_bound: u64, prune: bool, ctx: &'a Ctx) -> Result<Self> {
        let radix = m_bound
            .checked_add(1)
            .ok_or_else(|| Error::DomainError("entry bound too large".into()))?;
        let k = params.k();
        let total = radix
            .checked_pow(k)
            .ok_or_else(|| Error::DomainError("candidate space exceeds u64".into()))?;
        let place_values = (0..k).map(|c| radix.pow(k - 1 - c)).collect();
        let cap = params.size_cap();
        let m = params.m();
        let strict = k == 1 && cap >= m && params.n() > m;
        Ok(Dfs {
            params,
            radix,
            place_values,
            total,
            cap,
            min_size: qualifying_min_size(m),
            strict,
            prune,
            ctx,
        })
    }

    fn root_state(&self) -> BranchState {
        let p = self.params;
        let empty = EspState::empty(p.k(), p.m());
        let mut seen = HashSet::new();
        if self.min_size == 0 {
            seen.insert(eval_key(&empty, p.k(), p.m()));
        }
        BranchState {
            chosen: Vec::with_capacity(p.n() as usize),
            subs: vec![(0, empty)],
            seen,
        }
    }

    fn decode(&self, idx: u64) -> Element<Int> {
        let coords = self
            .place_values
            .iter()
            .map(|&pv| Int::from(idx / pv % self.radix))
            .collect();
        Element(coords)
    }

    /// Extends every prefix subset by the candidate entry, refusing (and
    /// undoing) the placement as soon as a qualifying evaluation repeats.
    /// Returns the rollback journal on success.
    fn place(
        &self,
        st: &mut BranchState,
        x: &Element<Int>,
    ) -> Result<Option<(usize, Vec<Vec<u8>>)>> {
        let old_len = st.subs.len();
        let mut added: Vec<Vec<u8>> = Vec::new();
        let (k, m) = (self.params.k(), self.params.m());
        for i in 0..old_len {
            let size = st.subs[i].0;
            if size + 1 > self.cap {
                continue;
            }
            let ext = st.subs[i].1.extend(x)?;
            if size + 1 >= self.min_size {
                let key = eval_key(&ext, k, m);
                if !st.seen.insert(key.clone()) {
                    st.subs.truncate(old_len);
                    for prior in &added {
                        st.seen.remove(prior);
                    }
                    return Ok(None);
                }
                added.push(key);
            }
            st.subs.push((size + 1, ext));
        }
        Ok(Some((old_len, added)))
    }

    fn rollback(&self, st: &mut BranchState, journal: (usize, Vec<Vec<u8>>)) {
        st.subs.truncate(journal.0);
        for key in &journal.1 {
            st.seen.remove(key);
        }
    }

    fn leaf(&self, st: &BranchState) -> Result<Option<Vec<Element<Int>>>> {
        if self.prune {
            return Ok(Some(st.chosen.clone()));
        }
        // Pruning disabled: nothing was checked on the way down, so the
        // full family is verified here.
        let seq = Sequence::new(self.params.clone(), st.chosen.clone(), None)?;
        let opts = VerifyOptions {
            min_size: Some(self.min_size),
            ..VerifyOptions::default()
        };
        let res = verify_distinct(&seq, &opts)?;
        Ok(if res.distinct {
            Some(st.chosen.clone())
        } else {
            None
        })
    }

    fn dfs(&self, st: &mut BranchState, start: u64) -> Result<Option<Vec<Element<Int>>>> {
        if st.chosen.len() == self.params.n() as usize {
            return self.leaf(st);
        }
        for idx in start..self.total {
            self.ctx.tick()?;
            let x = self.decode(idx);
            let journal = if self.prune {
                match self.place(st, &x)? {
                    Some(j) => Some(j),
                    None => continue,
                }
            } else {
                None
            };
            st.chosen.push(x);
            let next_start = if self.strict { idx + 1 } else { idx };
            let found = self.dfs(st, next_start)?;
            if found.is_some() {
                return Ok(found);
            }
            st.chosen.pop();
            if let Some(j) = journal {
                self.rollback(st, j);
            }
        }
        Ok(None)
    }

    /// Top-level search: branches on the first entry across workers; each
    /// branch is an independent sequential depth-first scan. `find_first`
    /// keeps the reported witness the lexicographically least one no matter
    /// how many threads run.
    fn run(&self) -> Result<Option<Vec<Element<Int>>>> {
        if self.params.n() == 0 {
            return Ok(Some(Vec::new()));
        }
        let base = self.root_state();
        let hit = (0..self.total)
            .into_par_iter()
            .map(|first| -> Result<Option<Vec<Element<Int>>>> {
                self.ctx.tick()?;
                let mut st = base.clone();
                let x = self.decode(first);
                // No rollback needed: the branch state is dropped whole.
                if self.prune && self.place(&mut st, &x)?.is_none() {
                    return Ok(None);
                }
                st.chosen.push(x);
                let next_start = if self.strict { first + 1 } else { first };
                self.dfs(&mut st, next_start)
            })
            .find_first(|r| !matches!(r, Ok(None)));
        match hit {
            None => Ok(None),
            Some(r) => r,
        }
    }
}

fn bound_to_u64(m_bound: &Int) -> Result<u64> {
    if m_bound.is_negative() {
        return Err(Error::DomainError(format!(
            "entry bound must be >= 0, got {m_bound}"
        )));
    }
    m_bound
        .to_u64()
        .ok_or_else(|| Error::DomainError("entry bound too large for search".into()))
}

fn feasible_inner(
    params: &ProblemParams,
    m_bound: u64,
    ctx: &Ctx,
    prune: bool,
) -> Result<Option<IntSequence>> {
    let dfs = Dfs::new(params, m_bound, prune, ctx)?;
    match dfs.run()? {
        None => Ok(None),
        Some(elems) => {
            let seq = Sequence::new(params.clone(), elems, Some(Int::from(m_bound)))?;
            Ok(Some(seq))
        }
    }
}

/// Decides whether some sequence with entries in `[0, M]^k` has all
/// qualifying evaluations distinct, returning the lexicographically least
/// witness or `None` for a proof by exhaustion.
pub fn feasible(
    params: &ProblemParams,
    m_bound: &Int,
    budget: &Budget,
) -> Result<Option<IntSequence>> {
    let ctx = Ctx::new(budget, Instant::now());
    feasible_inner(params, bound_to_u64(m_bound)?, &ctx, true)
}

/// Reference variant of [`feasible`] that places all entries before any
/// distinctness check. Exponentially slower; used to cross-check that
/// pruning never changes an answer.
pub fn feasible_unpruned(
    params: &ProblemParams,
    m_bound: &Int,
    budget: &Budget,
) -> Result<Option<IntSequence>> {
    let ctx = Ctx::new(budget, Instant::now());
    feasible_inner(params, bound_to_u64(m_bound)?, &ctx, false)
}

/// Finds the least M <= m_max with a feasible sequence. The returned
/// witness is re-verified, checked against the non-asymptotic probabilistic
/// upper bound, and (by scan structure) M - 1 is proven infeasible.
pub fn min_m_search(
    params: &ProblemParams,
    m_max: &Int,
    budget: &Budget,
    strategy: Strategy,
) -> Result<SearchOutcome> {
    min_m_search_with(params, m_max, budget, strategy, true)
}

/// [`min_m_search`] with pruning switchable; the unpruned path exists for
/// equivalence testing only.
pub fn min_m_search_with(
    params: &ProblemParams,
    m_max: &Int,
    budget: &Budget,
    strategy: Strategy,
    prune: bool,
) -> Result<SearchOutcome> {
    let m_max_u = bound_to_u64(m_max)?;
    let start = Instant::now();
    let ctx = Ctx::new(budget, start);
    let scan = (|| -> Result<Option<(u64, IntSequence)>> {
        match strategy {
            Strategy::Linear => {
                for m_val in 0..=m_max_u {
                    if let Some(w) = feasible_inner(params, m_val, &ctx, prune)? {
                        return Ok(Some((m_val, w)));
                    }
                }
                Ok(None)
            }
            Strategy::Bisect => {
                if let Some(w) = feasible_inner(params, 0, &ctx, prune)? {
                    return Ok(Some((0, w)));
                }
                if m_max_u == 0 {
                    return Ok(None);
                }
                let mut lo = 0u64;
                let mut hi = 1u64.min(m_max_u);
                let mut witness;
                loop {
                    match feasible_inner(params, hi, &ctx, prune)? {
                        Some(w) => {
                            witness = w;
                            break;
                        }
                        None => {
                            if hi >= m_max_u {
                                return Ok(None);
                            }
                            lo = hi;
                            hi = hi.saturating_mul(2).min(m_max_u);
                        }
                    }
                }
                while hi - lo > 1 {
                    let mid = lo + (hi - lo) / 2;
                    match feasible_inner(params, mid, &ctx, prune)? {
                        Some(w) => {
                            witness = w;
                            hi = mid;
                        }
                        None => lo = mid,
                    }
                }
                Ok(Some((hi, witness)))
            }
        }
    })();
    let wall_time = start.elapsed();
    let nodes_expanded = ctx.used();
    match scan {
        Ok(Some((m_val, witness))) => {
            certify(params, m_val, &witness)?;
            Ok(SearchOutcome {
                status: SearchStatus::Found,
                m_min: Some(Int::from(m_val)),
                witness: Some(witness),
                nodes_expanded,
                wall_time,
            })
        }
        Ok(None) => Ok(SearchOutcome {
            status: SearchStatus::InfeasibleUpTo,
            m_min: None,
            witness: None,
            nodes_expanded,
            wall_time,
        }),
        Err(Error::BudgetExceeded { .. }) => Ok(SearchOutcome {
            status: SearchStatus::BudgetExceeded,
            m_min: None,
            witness: None,
            nodes_expanded,
            wall_time,
        }),
        Err(e) => Err(e),
    }
}

/// Independent checks on a search result: the witness must verify, and the
/// minimum must respect the non-asymptotic probabilistic upper bound
/// (a theorem for entries from [1, M], hence for our [0, M] minimum too).
fn certify(params: &ProblemParams, m_val: u64, witness: &IntSequence) -> Result<()> {
    let opts = VerifyOptions {
        min_size: Some(qualifying_min_size(params.m())),
        ..VerifyOptions::default()
    };
    let res = verify_distinct(witness, &opts)?;
    if !res.distinct {
        return Err(Error::IdentityViolated {
            lhs: "search witness".into(),
            rhs: "independent verification".into(),
        });
    }
    let ub = prob_upper_full(params.n(), params.m(), params.k())?;
    let found = Rat::from_integer(Int::from(m_val));
    let within = match &ub.value {
        BoundValue::Exact(r) => found <= *r,
        BoundValue::Enclosure(i) => found <= *i.hi(),
    };
    if !within {
        return Err(Error::IdentityViolated {
            lhs: format!("minimal bound {m_val}"),
            rhs: "probabilistic upper bound".into(),
        });
    }
    Ok(())
}

/// Meet-in-the-middle verdict for degree 1 over the full family: all subset
/// sums (empty subset included) are distinct iff merging the sorted
/// pairwise sums of the two half-set tables never yields a repeat. Memory
/// is ~2^(n/2) entries instead of 2^n.
pub fn mitm_verify(seq: &IntSequence) -> Result<VerificationResult<Int>> {
    let p = seq.params();
    if p.m() != 1 {
        return Err(Error::HypothesisViolated(format!(
            "meet-in-the-middle needs degree 1, got {}",
            p.m()
        )));
    }
    if !p.lambda().is_one() {
        return Err(Error::HypothesisViolated(format!(
            "meet-in-the-middle needs the full family (lambda = 1), got {}",
            p.lambda()
        )));
    }
    let n = p.n();
    if n > 64 {
        return Err(Error::DomainError(
            "meet-in-the-middle limited to 64 entries".into(),
        ));
    }
    let k = p.k() as usize;
    let half = n / 2;
    let table = |from: u32, to: u32| -> Result<Vec<(Vec<Int>, u64)>> {
        let mut rows: Vec<(Vec<Int>, u64)> = vec![(vec![Int::zero(); k], 0u64)];
        for i in from..=to {
            let a = &seq.element(i)?.0;
            for idx in 0..rows.len() {
                let mut s = rows[idx].0.clone();
                for (c, ac) in a.iter().enumerate() {
                    s[c] += ac;
                }
                let mask = rows[idx].1 | 1u64 << (i - 1);
                rows.push((s, mask));
            }
        }
        rows.sort();
        Ok(rows)
    };
    let left = table(1, half)?;
    let right = table(half + 1, n)?;

    // One sorted stream per left row (adding a constant preserves order in
    // the sorted right table); a k-way merge visits all 2^n sums in
    // nondecreasing order and needs only adjacency to detect repeats.
    let mut heap: BinaryHeap<Reverse<(Vec<Int>, usize, usize)>> = BinaryHeap::new();
    for (li, l) in left.iter().enumerate() {
        let mut v = l.0.clone();
        for (c, rc) in right[0].0.iter().enumerate() {
            v[c] += rc;
        }
        heap.push(Reverse((v, li, 0)));
    }
    let mut compared = 0u64;
    let mut prev: Option<(Vec<Int>, usize, usize)> = None;
    while let Some(Reverse((v, li, ri))) = heap.pop() {
        compared += 1;
        if ri + 1 < right.len() {
            let mut nv = left[li].0.clone();
            for (c, rc) in right[ri + 1].0.iter().enumerate() {
                nv[c] += rc;
            }
            heap.push(Reverse((nv, li, ri + 1)));
        }
        if let Some((pv, pli, pri)) = &prev {
            if *pv == v {
                let mut a = SubsetRef::Bits(left[*pli].1 | right[*pri].1);
                let mut b = SubsetRef::Bits(left[li].1 | right[ri].1);
                if b < a {
                    std::mem::swap(&mut a, &mut b);
                }
                return Ok(VerificationResult {
                    distinct: false,
                    witness: Some(Witness {
                        a,
                        b,
                        value_a: v.clone(),
                        value_b: v,
                    }),
                    compared,
                    mode: VerifyMode::Exact,
                });
            }
        }
        prev = Some((v, li, ri));
    }
    Ok(VerificationResult {
        distinct: true,
        witness: None,
        compared,
        mode: VerifyMode::Exact,
    })
}
