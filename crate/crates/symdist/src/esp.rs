//! Elementary symmetric polynomial evaluation.
//!
//! For a subset `A` of sequence positions, the degree-`m` evaluation is
//!
//! ```text
//! e_m(A) = sum over {i_1 < ... < i_m} subset of A of a_{i_1} * ... * a_{i_m}
//! ```
//!
//! taken per coordinate for `k`-dimensional entries, and defined as 0 when
//! `|A| < m`. Evaluations are computed through the carrier table
//! `e_0, ..., e_m` and the extension rule
//!
//! ```text
//! e_j(S + {x}) = e_j(S) + x * e_{j-1}(S)
//! ```
//!
//! which makes the cost of visiting an entire subset family proportional to
//! the number of visited subsets (times `k * m` ring operations), since a
//! depth-first walk shares tables between a subset and its prefixes.

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::sequence::{Element, EvalValue, Sequence};
use crate::subset::SubsetRef;
use rayon::prelude::*;

/// Carrier state for incremental evaluation: the table of elementary
/// symmetric polynomial values `e_0..e_m` for each coordinate of the set of
/// entries absorbed so far.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EspState<T: Scalar> {
    k: u32,
    m: u32,
    /// Row-major `k x (m+1)`: `table[c*(m+1) + j] = e_j` of coordinate `c`.
    table: Vec<T>,
    count: u32,
}

impl<T: Scalar> EspState<T> {
    /// State of the empty set: `e_0 = 1`, all higher values 0.
    pub fn empty(k: u32, m: u32) -> Self {
        let stride = (m + 1) as usize;
        let mut table = vec![T::ring_zero(); k as usize * stride];
        for c in 0..k as usize {
            table[c * stride] = T::ring_one();
        }
        EspState {
            k,
            m,
            table,
            count: 0,
        }
    }

    pub fn count(&self) -> u32 {
        self.count
    }

    pub fn degree(&self) -> u32 {
        self.m
    }

    /// `e_j` for one coordinate; zero when `j` exceeds the absorbed count.
    pub fn value(&self, coord: u32, j: u32) -> &T {
        let stride = (self.m + 1) as usize;
        &self.table[coord as usize * stride + j as usize]
    }

    /// Top-degree evaluation across all coordinates.
    pub fn eval(&self) -> EvalValue<T> {
        (0..self.k).map(|c| self.value(c, self.m).clone()).collect()
    }

    /// Returns the state extended by one entry. The entry's arity must
    /// match the state's dimension.
    pub fn extend(&self, x: &Element<T>) -> Result<EspState<T>> {
        if x.arity() != self.k as usize {
            return Err(Error::DimensionMismatch {
                expected: self.k as usize,
                got: x.arity(),
            });
        }
        let mut next = self.clone();
        next.extend_in_place(x);
        Ok(next)
    }

    fn extend_in_place(&mut self, x: &Element<T>) {
        let stride = (self.m + 1) as usize;
        // Only rows up to the new count can be nonzero; updating from the
        // top down lets each e_j read the previous e_{j-1}.
        let top = self.m.min(self.count + 1) as usize;
        for (c, xc) in x.0.iter().enumerate() {
            let row = &mut self.table[c * stride..(c + 1) * stride];
            for j in (1..=top).rev() {
                let bump = xc.mul_ref(&row[j - 1]);
                row[j] = row[j].add_ref(&bump);
            }
        }
        self.count += 1;
    }
}

/// Evaluates the degree-`m` polynomial of one subset from scratch.
pub fn eval_subset<T: Scalar>(seq: &Sequence<T>, subset: &SubsetRef) -> Result<EvalValue<T>> {
    let p = seq.params();
    let mut st = EspState::empty(p.k(), p.m());
    for i in subset.to_indices() {
        let e = seq.element(i)?;
        st.extend_in_place(e);
    }
    Ok(st.eval())
}

/// Depth-first walk over every subset of `[1, n]` with size in `[lo, hi]`,
/// presenting each subset's index stack and carrier state to the visitor.
/// A `false` return from the visitor aborts the walk.
///
/// The walk order is depth-first on increasing index lists ({1}, {1,2},
/// {1,2,3}, ..., {2}, ...), not size-then-lex; callers that need canonical
/// order must not depend on visit order (the verifier reduces witnesses
/// order-independently).
pub fn walk_family<T: Scalar, F>(seq: &Sequence<T>, lo: u32, hi: u32, visit: &mut F)
where
    F: FnMut(&[u32], &EspState<T>) -> bool,
{
    let p = seq.params();
    let n = p.n();
    let hi = hi.min(n);
    if lo > hi {
        return;
    }
    let root = EspState::empty(p.k(), p.m());
    let mut stack: Vec<u32> = Vec::with_capacity(hi as usize);
    if lo == 0 && !visit(&stack, &root) {
        return;
    }
    walk_rec(seq, lo, hi, 1, &root, &mut stack, visit);
}

/// Returns false when the walk was aborted by the visitor.
fn walk_rec<T: Scalar, F>(
    seq: &Sequence<T>,
    lo: u32,
    hi: u32,
    start: u32,
    state: &EspState<T>,
    stack: &mut Vec<u32>,
    visit: &mut F,
) -> bool
where
    F: FnMut(&[u32], &EspState<T>) -> bool,
{
    let n = seq.params().n();
    let depth = stack.len() as u32;
    if depth == hi {
        return true;
    }
    for i in start..=n {
        // Prune branches that can no longer reach the minimum size.
        if depth + 1 + (n - i) < lo {
            break;
        }
        let elem = &seq.elements()[(i - 1) as usize];
        let mut next = state.clone();
        next.extend_in_place(elem);
        stack.push(i);
        let mut alive = true;
        if depth + 1 >= lo {
            alive = visit(stack, &next);
        }
        if alive {
            alive = walk_rec(seq, lo, hi, i + 1, &next, stack, visit);
        }
        stack.pop();
        if !alive {
            return false;
        }
    }
    true
}

/// Fixed fan-out of the parallel walk. Partition structure must not depend
/// on the worker count, or merged results could vary between runs with
/// different `--threads`; 256 prefix patterns saturate small thread pools
/// while keeping per-partition state cheap.
const PARTITION_PREFIX_BITS: u32 = 8;

/// Parallel version of [`walk_family`]: the family is split into
/// `2^d` partitions by the membership pattern of the first `d` indices,
/// partitions are walked independently, and the per-partition states are
/// returned in partition order (so any merge the caller performs is
/// deterministic regardless of thread count or scheduling).
pub fn walk_family_partitioned<T, St, Init, Visit>(
    seq: &Sequence<T>,
    lo: u32,
    hi: u32,
    init: Init,
    visit: Visit,
) -> Vec<St>
where
    T: Scalar,
    St: Send,
    Init: Fn() -> St + Sync,
    Visit: Fn(&mut St, &[u32], &EspState<T>) + Sync,
{
    let p = seq.params();
    let n = p.n();
    let hi = hi.min(n);
    if lo > hi {
        return Vec::new();
    }
    let d = PARTITION_PREFIX_BITS.min(n);
    (0u64..(1u64 << d))
        .into_par_iter()
        .map(|pattern| {
            let mut st = init();
            // Build the prefix: indices 1..=d whose bit is set join the
            // subset skeleton shared by the whole partition.
            let mut stack: Vec<u32> = Vec::new();
            let mut esp = EspState::empty(p.k(), p.m());
            for i in 1..=d {
                if (pattern >> (i - 1)) & 1 == 1 {
                    esp.extend_in_place(&seq.elements()[(i - 1) as usize]);
                    stack.push(i);
                }
            }
            let w = stack.len() as u32;
            if w > hi || w + (n - d) < lo {
                return st;
            }
            {
                let mut vis = |s: &[u32], e: &EspState<T>| {
                    visit(&mut st, s, e);
                    true
                };
                if w >= lo {
                    vis(&stack, &esp);
                }
                walk_rec(seq, lo, hi, d + 1, &esp, &mut stack, &mut vis);
            }
            st
        })
        .collect()
}
