//! Distinctness verification over capped subset families.
//!
//! Two modes:
//!
//! 1. `Exact`: two qualifying subsets may not share an evaluation. Collisions
//!    are detected by hashing evaluations; per value the two canonically
//!    smallest subsets are retained, which makes witness selection a pure
//!    reduction. Reductions are order-free, so the parallel partitioned walk
//!    and any chunk schedule produce byte-identical results.
//! 2. `RealSpacing`: any two evaluations must be at least 1 apart in
//!    max-coordinate distance. Points are bucketed into unit grid cells
//!    (floor per coordinate); a violating pair always lands in the same or
//!    an adjacent cell, so each point probes its `3^k` cell neighborhood.
//!
//! Memory control: with a configured entry budget and a family too large for
//! it, the verifier either refuses (so the caller can decide) or, in chunked
//! mode, makes `ceil(family / budget)` passes storing only the values whose
//! stable hash falls in the current chunk. Probing is unconditional in every
//! pass, which guarantees each violating pair is observed in the pass owning
//! the earlier point's cell.
//!
//! The reported witness is always canonical: the minimal colliding pair in
//! the size-then-lex pair order (compare the later subsets, then the
//! earlier). Re-running with any thread count returns identical output.

use crate::counting::family_size;
use crate::error::{Error, Result};
use crate::esp::{walk_family, walk_family_partitioned};
use crate::scalar::{fnv1a64, Scalar};
use crate::sequence::{EvalValue, Sequence};
use crate::subset::SubsetRef;
use crate::Int;
use num_bigint::BigUint;
use num_traits::ToPrimitive;
use std::collections::HashMap;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VerifyMode {
    Exact,
    RealSpacing,
}

#[derive(Clone, Debug)]
pub struct VerifyOptions {
    pub mode: VerifyMode,
    /// Smallest subset size compared; defaults to the polynomial degree `m`.
    /// Setting 0 with `m == 1` additionally compares the empty subset
    /// (evaluation 0), the classical subset-sum convention.
    pub min_size: Option<u32>,
    /// Upper bound on stored table entries. `None` is unbounded.
    pub memory_budget: Option<u64>,
    /// Allow multi-pass chunked verification instead of failing when the
    /// family exceeds the memory budget.
    pub chunked: bool,
    /// Stop at the first collision found (sequential walk, witness is the
    /// first in depth-first order rather than the canonical minimum).
    pub early_exit: bool,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            mode: VerifyMode::Exact,
            min_size: None,
            memory_budget: None,
            chunked: false,
            early_exit: false,
        }
    }
}

/// A colliding (or too-close, in real-spacing mode) pair of subsets with
/// their evaluations. `a` precedes `b` in size-then-lex order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness<T: Scalar> {
    pub a: SubsetRef,
    pub b: SubsetRef,
    pub value_a: EvalValue<T>,
    pub value_b: EvalValue<T>,
}

#[derive(Clone, Debug)]
pub struct VerificationResult<T: Scalar> {
    pub distinct: bool,
    pub witness: Option<Witness<T>>,
    /// Number of qualifying subsets compared.
    pub compared: u64,
    pub mode: VerifyMode,
}

/// Pair order used for canonical witnesses: later subset first, then the
/// earlier one. The minimum under this order is "the first collision a
/// size-then-lex scan would report".
fn pair_before<T: Scalar>(x: &Witness<T>, y: &Witness<T>) -> bool {
    (&x.b, &x.a) < (&y.b, &y.a)
}

fn keep_better<T: Scalar>(best: &mut Option<Witness<T>>, cand: Witness<T>) {
    match best {
        None => *best = Some(cand),
        Some(b) => {
            if pair_before(&cand, b) {
                *best = Some(cand);
            }
        }
    }
}

/// Per-value record: the two canonically smallest subsets seen.
struct TwoMin {
    first: SubsetRef,
    second: Option<SubsetRef>,
}

impl TwoMin {
    fn new(s: SubsetRef) -> Self {
        TwoMin {
            first: s,
            second: None,
        }
    }

    fn absorb(&mut self, s: SubsetRef) {
        if s < self.first {
            let old = std::mem::replace(&mut self.first, s);
            self.absorb_second(old);
        } else {
            self.absorb_second(s);
        }
    }

    fn absorb_second(&mut self, s: SubsetRef) {
        match &self.second {
            None => self.second = Some(s),
            Some(t) if &s < t => self.second = Some(s),
            _ => {}
        }
    }

    fn merge(&mut self, other: TwoMin) {
        self.absorb(other.first);
        if let Some(s) = other.second {
            self.absorb_second(s);
        }
    }
}

/// Number of chunk passes needed so each pass stores at most `budget`
/// entries, assuming an even hash split.
fn plan_chunks(family: &BigUint, budget: Option<u64>, chunked: bool) -> Result<u64> {
    let budget = match budget {
        None => return Ok(1),
        Some(b) => b,
    };
    if budget == 0 {
        return Err(Error::DomainError("memory budget must be positive".into()));
    }
    let fits = family <= &BigUint::from(budget);
    if fits {
        return Ok(1);
    }
    if !chunked {
        return Err(Error::MemoryBudgetExceeded {
            needed: family.to_u64().unwrap_or(u64::MAX),
            budget,
        });
    }
    let chunks = (family + BigUint::from(budget - 1)) / BigUint::from(budget);
    chunks.to_u64().ok_or(Error::MemoryBudgetExceeded {
        needed: u64::MAX,
        budget,
    })
}

fn value_chunk<T: Scalar>(value: &[T], scratch: &mut Vec<u8>, chunks: u64) -> u64 {
    if chunks == 1 {
        return 0;
    }
    scratch.clear();
    for v in value {
        v.write_canonical_bytes(scratch);
    }
    fnv1a64(scratch) % chunks
}

/// Verifies that all qualifying evaluations of `seq` are distinct (exact
/// mode) or pairwise at least 1 apart in max-coordinate distance
/// (real-spacing mode).
pub fn verify_distinct<T: Scalar>(
    seq: &Sequence<T>,
    opts: &VerifyOptions,
) -> Result<VerificationResult<T>> {
    let p = seq.params();
    let lo = opts.min_size.unwrap_or(p.m());
    let hi = p.size_cap();
    let family = family_size(p.n(), p.lambda(), lo);
    let chunks = plan_chunks(&family, opts.memory_budget, opts.chunked)?;
    match opts.mode {
        VerifyMode::Exact => {
            if opts.early_exit && chunks == 1 {
                return Ok(verify_exact_early_exit(seq, lo, hi));
            }
            verify_exact(seq, lo, hi, chunks)
        }
        VerifyMode::RealSpacing => verify_real(seq, lo, hi, chunks),
    }
}

struct ExactState<T: Scalar> {
    map: HashMap<EvalValue<T>, TwoMin>,
    compared: u64,
    scratch: Vec<u8>,
}

fn verify_exact<T: Scalar>(
    seq: &Sequence<T>,
    lo: u32,
    hi: u32,
    chunks: u64,
) -> Result<VerificationResult<T>> {
    let mut best: Option<Witness<T>> = None;
    let mut compared = 0u64;
    for chunk in 0..chunks {
        let parts = walk_family_partitioned(
            seq,
            lo,
            hi,
            || ExactState {
                map: HashMap::new(),
                compared: 0,
                scratch: Vec::new(),
            },
            |st: &mut ExactState<T>, stack, esp| {
                st.compared += 1;
                let value = esp.eval();
                if value_chunk(&value, &mut st.scratch, chunks) != chunk {
                    return;
                }
                let subset = SubsetRef::from_sorted(stack);
                st.map
                    .entry(value)
                    .and_modify(|tm| tm.absorb(subset.clone()))
                    .or_insert_with(|| TwoMin::new(subset));
            },
        );
        // Collisions can span partitions, so the per-value records are
        // merged before extraction. TwoMin::merge is order-free.
        let mut merged: HashMap<EvalValue<T>, TwoMin> = HashMap::new();
        for part in parts {
            if chunk == 0 {
                compared += part.compared;
            }
            for (value, tm) in part.map {
                use std::collections::hash_map::Entry;
                match merged.entry(value) {
                    Entry::Occupied(mut e) => e.get_mut().merge(tm),
                    Entry::Vacant(e) => {
                        e.insert(tm);
                    }
                }
            }
        }
        for (value, tm) in merged {
            if let Some(second) = tm.second {
                keep_better(
                    &mut best,
                    Witness {
                        a: tm.first,
                        b: second,
                        value_a: value.clone(),
                        value_b: value,
                    },
                );
            }
        }
    }
    Ok(VerificationResult {
        distinct: best.is_none(),
        witness: best,
        compared,
        mode: VerifyMode::Exact,
    })
}

fn verify_exact_early_exit<T: Scalar>(
    seq: &Sequence<T>,
    lo: u32,
    hi: u32,
) -> VerificationResult<T> {
    let mut map: HashMap<EvalValue<T>, SubsetRef> = HashMap::new();
    let mut witness: Option<Witness<T>> = None;
    let mut compared = 0u64;
    walk_family(seq, lo, hi, &mut |stack, esp| {
        if witness.is_some() {
            return false;
        }
        compared += 1;
        let value = esp.eval();
        let subset = SubsetRef::from_sorted(stack);
        if let Some(prev) = map.get(&value) {
            let (a, b) = if prev < &subset {
                (prev.clone(), subset)
            } else {
                (subset, prev.clone())
            };
            witness = Some(Witness {
                a,
                b,
                value_a: value.clone(),
                value_b: value,
            });
            return false;
        }
        map.insert(value, subset);
        true
    });
    VerificationResult {
        distinct: witness.is_none(),
        witness,
        compared,
        mode: VerifyMode::Exact,
    }
}

struct RealPoint<T: Scalar> {
    value: EvalValue<T>,
    subset: SubsetRef,
}

fn verify_real<T: Scalar>(
    seq: &Sequence<T>,
    lo: u32,
    hi: u32,
    chunks: u64,
) -> Result<VerificationResult<T>> {
    let k = seq.params().k() as usize;
    let one = T::ring_one();
    let mut best: Option<Witness<T>> = None;
    let mut compared = 0u64;
    for chunk in 0..chunks {
        let mut points: Vec<RealPoint<T>> = Vec::new();
        let mut cells: HashMap<Vec<Int>, Vec<usize>> = HashMap::new();
        let mut scratch: Vec<u8> = Vec::new();
        walk_family(seq, lo, hi, &mut |stack, esp| {
            if chunk == 0 {
                compared += 1;
            }
            let value = esp.eval();
            let cell: Vec<Int> = value.iter().map(|v| v.floor_int()).collect();
            // Probe the full neighborhood unconditionally: the earlier point
            // of any violating pair was stored in the pass owning its cell.
            let subset = SubsetRef::from_sorted(stack);
            let mut offsets = vec![-1i8; k];
            'cells: loop {
                let ncell: Vec<Int> = cell
                    .iter()
                    .zip(&offsets)
                    .map(|(c, &o)| c + Int::from(o))
                    .collect();
                if let Some(idxs) = cells.get(&ncell) {
                    for &qi in idxs {
                        let q = &points[qi];
                        if q.subset == subset {
                            continue;
                        }
                        if linf_below_one(&value, &q.value, &one) {
                            let (a, b, va, vb) = if q.subset < subset {
                                (
                                    q.subset.clone(),
                                    subset.clone(),
                                    q.value.clone(),
                                    value.clone(),
                                )
                            } else {
                                (
                                    subset.clone(),
                                    q.subset.clone(),
                                    value.clone(),
                                    q.value.clone(),
                                )
                            };
                            keep_better(
                                &mut best,
                                Witness {
                                    a,
                                    b,
                                    value_a: va,
                                    value_b: vb,
                                },
                            );
                        }
                    }
                }
                // advance mixed-radix offsets over {-1,0,1}^k
                for slot in offsets.iter_mut() {
                    if *slot < 1 {
                        *slot += 1;
                        continue 'cells;
                    }
                    *slot = -1;
                }
                break;
            }
            // store under the chunk filter
            scratch.clear();
            for c in &cell {
                c.write_canonical_bytes(&mut scratch);
            }
            if chunks == 1 || fnv1a64(&scratch) % chunks == chunk {
                let idx = points.len();
                points.push(RealPoint { value, subset });
                cells.entry(cell).or_default().push(idx);
            }
            true
        });
    }
    Ok(VerificationResult {
        distinct: best.is_none(),
        witness: best,
        compared,
        mode: VerifyMode::RealSpacing,
    })
}

/// True when `|a_c - b_c| < 1` for every coordinate, i.e. the pair violates
/// the unit spacing requirement.
fn linf_below_one<T: Scalar>(a: &[T], b: &[T], one: &T) -> bool {
    a.iter().zip(b).all(|(x, y)| {
        let d = if x >= y { x.sub_ref(y) } else { y.sub_ref(x) };
        &d < one
    })
}

/// Collects colliding subset pairs (exact mode) for the repair loop, up to
/// `max_pairs`. Returns the pairs and whether the collection was truncated.
pub fn collect_collisions<T: Scalar>(
    seq: &Sequence<T>,
    min_size: u32,
    max_pairs: usize,
) -> (Vec<(SubsetRef, SubsetRef)>, bool) {
    let p = seq.params();
    let hi = p.size_cap();
    let mut map: HashMap<EvalValue<T>, SubsetRef> = HashMap::new();
    let mut pairs: Vec<(SubsetRef, SubsetRef)> = Vec::new();
    let mut truncated = false;
    walk_family(seq, min_size, hi, &mut |stack, esp| {
        let value = esp.eval();
        let subset = SubsetRef::from_sorted(stack);
        match map.get(&value) {
            Some(first) => {
                if pairs.len() < max_pairs {
                    pairs.push((first.clone(), subset));
                } else {
                    truncated = true;
                    return false;
                }
            }
            None => {
                map.insert(value, subset);
            }
        }
        true
    });
    (pairs, truncated)
}
