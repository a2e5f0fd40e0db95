//! Brute-force reference implementations.
//!
//! These are deliberately written without the carrier-table recurrence, the
//! hash-based collision store, or the shared walker: evaluation expands the
//! defining sum over index combinations, and verification compares every
//! pair of qualifying subsets directly. They exist to cross-check the fast
//! paths and stay correct by construction; do not optimize them.

use crate::error::Result;
use crate::scalar::Scalar;
use crate::sequence::{EvalValue, Sequence};
use crate::subset::SubsetRef;

/// Degree-`m` evaluation by direct expansion: sums the products over all
/// size-`m` index combinations of the subset, per coordinate.
pub fn naive_eval<T: Scalar>(seq: &Sequence<T>, subset: &SubsetRef) -> Result<EvalValue<T>> {
    let p = seq.params();
    let k = p.k() as usize;
    let m = p.m() as usize;
    let idx = subset.to_indices();
    let mut acc: Vec<T> = vec![T::ring_zero(); k];
    if idx.len() >= m {
        let mut choice: Vec<usize> = Vec::with_capacity(m);
        expand(seq, &idx, m, 0, &mut choice, &mut acc)?;
    }
    Ok(acc)
}

fn expand<T: Scalar>(
    seq: &Sequence<T>,
    idx: &[u32],
    m: usize,
    start: usize,
    choice: &mut Vec<usize>,
    acc: &mut Vec<T>,
) -> Result<()> {
    if choice.len() == m {
        for (c, slot) in acc.iter_mut().enumerate() {
            let mut prod = T::ring_one();
            for &pos in choice.iter() {
                let e = seq.element(idx[pos])?;
                prod = prod.mul_ref(&e.0[c]);
            }
            *slot = slot.add_ref(&prod);
        }
        return Ok(());
    }
    for pos in start..idx.len() {
        if idx.len() - pos < m - choice.len() {
            break;
        }
        choice.push(pos);
        expand(seq, idx, m, pos + 1, choice, acc)?;
        choice.pop();
    }
    Ok(())
}

/// Pairwise distinctness check: enumerates every qualifying subset, then
/// compares all pairs of evaluations with a double loop.
pub fn naive_verify<T: Scalar>(
    seq: &Sequence<T>,
    min_size: Option<u32>,
) -> Result<(bool, Option<(SubsetRef, SubsetRef)>)> {
    let p = seq.params();
    let lo = min_size.unwrap_or(p.m());
    let hi = p.size_cap();
    let mut subsets: Vec<Vec<u32>> = Vec::new();
    for size in lo..=hi.min(p.n()) {
        let mut comb: Vec<u32> = Vec::new();
        gather(p.n(), size as usize, 1, &mut comb, &mut subsets);
    }
    let mut values: Vec<EvalValue<T>> = Vec::with_capacity(subsets.len());
    for s in &subsets {
        values.push(naive_eval(seq, &SubsetRef::from_sorted(s))?);
    }
    for i in 0..values.len() {
        for j in i + 1..values.len() {
            if values[i] == values[j] {
                return Ok((
                    false,
                    Some((
                        SubsetRef::from_sorted(&subsets[i]),
                        SubsetRef::from_sorted(&subsets[j]),
                    )),
                ));
            }
        }
    }
    Ok((true, None))
}

fn gather(n: u32, size: usize, start: u32, comb: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
    if comb.len() == size {
        out.push(comb.clone());
        return;
    }
    for i in start..=n {
        if ((n - i + 1) as usize) < size - comb.len() {
            break;
        }
        comb.push(i);
        gather(n, size, i + 1, comb, out);
        comb.pop();
    }
}
