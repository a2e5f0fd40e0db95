//! Exact and sampled moments of the evaluation map over subset families,
//! the exact variance-decomposition identity, and closed forms for the
//! all-ones sequence.
//!
//! "Exact" here means exact: enumeration accumulates in the sequence's own
//! scalar type and converts to rationals only at the end, so reports are
//! free of rounding.

use crate::bounds::{allones_variance_bound, BoundValue};
use crate::counting::{binomial, cap_for, family_size};
use crate::error::{Error, Result};
use crate::esp::{eval_subset, walk_family_partitioned};
use crate::interval::Interval;
use crate::rng::{below, derive_seed, rng_from};
use crate::scalar::Scalar;
use crate::sequence::Sequence;
use crate::subset::SubsetRef;
use crate::{Int, Rat};
use num_bigint::BigUint;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;

/// Fixed number of Monte Carlo shards. Sharding is by index, not by thread,
/// so estimates are identical for every thread count.
const MC_SHARDS: u64 = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MomentMode {
    Exact,
    MonteCarlo,
}

#[derive(Clone, Debug)]
pub struct MomentReport {
    /// Per-coordinate mean of the evaluation over the family.
    pub mu: Vec<Rat>,
    /// Total variance: sum of per-coordinate variances.
    pub sigma2: Rat,
    /// Exact family size (exact mode) or sample count (Monte Carlo mode).
    pub family_count: Int,
    pub mode: MomentMode,
    /// Standard error of the mean (L2 across coordinates), Monte Carlo only.
    pub stderr: Option<Rat>,
}

/// Exact mean and variance of the evaluation over all subsets with
/// `min_size <= |A| <= floor(lambda n)`; sizes below the polynomial degree
/// contribute zero evaluations.
pub fn exact_moments<T: Scalar>(
    seq: &Sequence<T>,
    lambda: &Rat,
    min_size: u32,
    budget: Option<u64>,
) -> Result<MomentReport> {
    let p = seq.params();
    let (n, k) = (p.n(), p.k());
    let cap = cap_for(n, lambda);
    let fam = family_size(n, lambda, min_size);
    if fam.is_zero() {
        return Err(Error::DegenerateFamily);
    }
    if let Some(b) = budget {
        let needed = fam.to_u64().unwrap_or(u64::MAX);
        if needed > b {
            return Err(Error::BudgetExceeded { nodes: needed });
        }
    }
    struct Acc<T> {
        sum: Vec<T>,
        sumsq: Vec<T>,
        count: u64,
    }
    let parts = walk_family_partitioned(
        seq,
        min_size,
        cap,
        || Acc {
            sum: vec![T::ring_zero(); k as usize],
            sumsq: vec![T::ring_zero(); k as usize],
            count: 0,
        },
        |acc: &mut Acc<T>, _stack, st| {
            let e = st.eval();
            for (c, v) in e.iter().enumerate() {
                acc.sum[c] = acc.sum[c].add_ref(v);
                acc.sumsq[c] = acc.sumsq[c].add_ref(&v.mul_ref(v));
            }
            acc.count += 1;
        },
    );
    let mut sum = vec![T::ring_zero(); k as usize];
    let mut sumsq = vec![T::ring_zero(); k as usize];
    let mut count = 0u64;
    for part in &parts {
        for c in 0..k as usize {
            sum[c] = sum[c].add_ref(&part.sum[c]);
            sumsq[c] = sumsq[c].add_ref(&part.sumsq[c]);
        }
        count += part.count;
    }
    let fam_rat = Rat::from_integer(Int::from(fam.clone()));
    debug_assert_eq!(BigUint::from(count), fam);
    let mut mu = Vec::with_capacity(k as usize);
    let mut sigma2 = Rat::zero();
    for c in 0..k as usize {
        let m1 = sum[c].to_rat() / &fam_rat;
        let m2 = sumsq[c].to_rat() / &fam_rat;
        sigma2 += m2 - &m1 * &m1;
        mu.push(m1);
    }
    Ok(MomentReport {
        mu,
        sigma2,
        family_count: Int::from(fam),
        mode: MomentMode::Exact,
        stderr: None,
    })
}

/// One degree shape of the variance decomposition: monomials with `j`
/// squared factors and `2m-2j` distinct linear factors.
#[derive(Clone, Debug)]
pub struct CoefficientRow {
    pub j: u32,
    /// Pairing multiplicity C(2m-2j, m-j).
    pub multiplicity: Int,
    /// Full coefficient of the shape's pattern sum in 2^n sigma^2,
    /// including the multiplicity; exactly zero for j = 0.
    pub coefficient: Rat,
    /// Pattern sum over the sequence, summed across coordinates.
    pub pattern_sum: Rat,
}

#[derive(Clone, Debug)]
pub struct CoefficientReport {
    pub rows: Vec<CoefficientRow>,
    /// 2^n sigma^2 computed by full enumeration.
    pub lhs: Rat,
    /// Reconstruction from the closed-form coefficients.
    pub rhs: Rat,
}

fn pow2_signed(e: i64) -> Rat {
    if e >= 0 {
        Rat::from_integer(Int::one() << (e as usize))
    } else {
        Rat::new(Int::one(), Int::one() << ((-e) as usize))
    }
}

/// Exact decomposition of the full-power-set variance:
/// 2^n sigma^2 = sum over j=1..m of C(2m-2j, m-j) 2^(n-2m) (2^j - 1) T_j,
/// where T_j is the pattern sum with j squared factors. Verified against the
/// enumerated left side; a mismatch is fatal because every consumer of the
/// closed form would be wrong.
pub fn coefficient_identity<T: Scalar>(
    seq: &Sequence<T>,
    budget: Option<u64>,
) -> Result<CoefficientReport> {
    let p = seq.params();
    if !p.lambda().is_one() {
        return Err(Error::HypothesisViolated(format!(
            "the variance decomposition is stated for the full power set (lambda = 1), got {}",
            p.lambda()
        )));
    }
    let (n, k, m) = (p.n(), p.k(), p.m());
    let mom = exact_moments(seq, &Rat::one(), 0, budget)?;
    let lhs = &mom.sigma2 * pow2_signed(n as i64);

    let mut rows = Vec::with_capacity(m as usize + 1);
    let mut rhs = Rat::zero();
    for j in 0..=m {
        let mult = Int::from(binomial(2 * m - 2 * j, m - j));
        let coefficient = if j == 0 {
            Rat::zero()
        } else {
            Rat::from_integer(mult.clone())
                * pow2_signed(n as i64 - 2 * m as i64)
                * Rat::from_integer((Int::one() << (j as usize)) - 1)
        };
        let pattern_sum = pattern_sum(seq, 2 * m - j, j, k)?;
        rhs += &coefficient * &pattern_sum;
        rows.push(CoefficientRow {
            j,
            multiplicity: mult,
            coefficient,
            pattern_sum,
        });
    }
    if lhs != rhs {
        return Err(Error::IdentityViolated {
            lhs: lhs.to_string(),
            rhs: rhs.to_string(),
        });
    }
    Ok(CoefficientReport { rows, lhs, rhs })
}

/// Sum over index sets S of size `support` and square positions Q in S of
/// size `squares` of prod_{q in Q} a_q^2 * prod_{s in S minus Q} a_s,
/// summed across coordinates.
fn pattern_sum<T: Scalar>(seq: &Sequence<T>, support: u32, squares: u32, k: u32) -> Result<Rat> {
    let n = seq.params().n();
    if support > n {
        return Ok(Rat::zero());
    }
    let mut total = Rat::zero();
    let mut set: Vec<u32> = Vec::with_capacity(support as usize);
    sum_over_supports(seq, support, squares, k, 1, &mut set, &mut total)?;
    Ok(total)
}

fn sum_over_supports<T: Scalar>(
    seq: &Sequence<T>,
    support: u32,
    squares: u32,
    k: u32,
    start: u32,
    set: &mut Vec<u32>,
    total: &mut Rat,
) -> Result<()> {
    let n = seq.params().n();
    if set.len() as u32 == support {
        let mut squared: Vec<usize> = Vec::with_capacity(squares as usize);
        sum_over_square_choices(seq, set, squares, k, 0, &mut squared, total)?;
        return Ok(());
    }
    for i in start..=n {
        if n - i + 1 < support - set.len() as u32 {
            break;
        }
        set.push(i);
        sum_over_supports(seq, support, squares, k, i + 1, set, total)?;
        set.pop();
    }
    Ok(())
}

fn sum_over_square_choices<T: Scalar>(
    seq: &Sequence<T>,
    set: &[u32],
    squares: u32,
    k: u32,
    start: usize,
    squared: &mut Vec<usize>,
    total: &mut Rat,
) -> Result<()> {
    if squared.len() as u32 == squares {
        for c in 0..k as usize {
            let mut prod = T::ring_one();
            for (pos, &idx) in set.iter().enumerate() {
                let a = &seq.element(idx)?.0[c];
                prod = prod.mul_ref(a);
                if squared.contains(&pos) {
                    prod = prod.mul_ref(a);
                }
            }
            *total += prod.to_rat();
        }
        return Ok(());
    }
    for pos in start..set.len() {
        if set.len() - pos < squares as usize - squared.len() {
            break;
        }
        squared.push(pos);
        sum_over_square_choices(seq, set, squares, k, pos + 1, squared, total)?;
        squared.pop();
    }
    Ok(())
}

/// Closed-form exact moments for the all-ones sequence: the evaluation of a
/// size-i subset is C(i, m), so sums collapse to O(n) binomial terms.
pub fn allones_exact(n: u32, m: u32, lambda: &Rat) -> Result<MomentReport> {
    if n < 1 || m < 1 {
        return Err(Error::DomainError(format!(
            "allones_exact needs n, m >= 1, got n={n}, m={m}"
        )));
    }
    let cap = cap_for(n, lambda);
    let mut fam = BigUint::zero();
    let mut s1 = BigUint::zero();
    let mut s2 = BigUint::zero();
    for i in 0..=cap.min(n) {
        let w = binomial(n, i);
        let v = binomial(i, m);
        s1 += &w * &v;
        s2 += &w * &v * &v;
        fam += w;
    }
    let famr = Rat::from_integer(Int::from(fam.clone()));
    let mu = Rat::from_integer(Int::from(s1)) / &famr;
    let m2 = Rat::from_integer(Int::from(s2)) / &famr;
    let sigma2 = m2 - &mu * &mu;
    Ok(MomentReport {
        mu: vec![mu],
        sigma2,
        family_count: Int::from(fam),
        mode: MomentMode::Exact,
        stderr: None,
    })
}

/// Monte Carlo moments over the family of subsets of size <= floor(lambda n):
/// sizes by exact inverse CDF on binomial weights, then a uniform subset of
/// that size. Deterministic for a given seed, independent of thread count.
pub fn montecarlo_moments<T: Scalar>(
    seq: &Sequence<T>,
    lambda: &Rat,
    samples: u64,
    seed: u64,
) -> Result<MomentReport> {
    if samples < 2 {
        return Err(Error::DomainError(format!(
            "montecarlo_moments needs at least 2 samples, got {samples}"
        )));
    }
    let p = seq.params();
    let (n, k) = (p.n(), p.k());
    let cap = cap_for(n, lambda).min(n);
    // cumulative[i] = sum of C(n, t) for t <= i
    let mut cumulative: Vec<BigUint> = Vec::with_capacity(cap as usize + 1);
    let mut acc = BigUint::zero();
    for i in 0..=cap {
        acc += binomial(n, i);
        cumulative.push(acc.clone());
    }
    let total = acc;

    struct Acc<T> {
        sum: Vec<T>,
        sumsq: Vec<T>,
    }
    let shard_results: Vec<Acc<T>> = (0..MC_SHARDS)
        .into_par_iter()
        .map(|shard| {
            let quota = samples / MC_SHARDS + u64::from(shard < samples % MC_SHARDS);
            let mut rng = rng_from(derive_seed(seed, shard));
            let mut acc = Acc {
                sum: vec![T::ring_zero(); k as usize],
                sumsq: vec![T::ring_zero(); k as usize],
            };
            let mut pool: Vec<u32> = (1..=n).collect();
            for _ in 0..quota {
                let r = below(&mut rng, &total);
                let size = cumulative.partition_point(|c| *c <= r) as u32;
                // partial Fisher-Yates: first `size` entries become the subset
                for t in 0..size as usize {
                    let span = BigUint::from(n as u64 - t as u64);
                    let off = below(&mut rng, &span).to_usize().unwrap();
                    pool.swap(t, t + off);
                }
                let mut pick: Vec<u32> = pool[..size as usize].to_vec();
                pick.sort_unstable();
                let e = eval_subset(seq, &SubsetRef::from_sorted(&pick)).expect("in-range indices");
                for (c, v) in e.iter().enumerate() {
                    acc.sum[c] = acc.sum[c].add_ref(v);
                    acc.sumsq[c] = acc.sumsq[c].add_ref(&v.mul_ref(v));
                }
            }
            acc
        })
        .collect();

    let mut sum = vec![T::ring_zero(); k as usize];
    let mut sumsq = vec![T::ring_zero(); k as usize];
    for part in &shard_results {
        for c in 0..k as usize {
            sum[c] = sum[c].add_ref(&part.sum[c]);
            sumsq[c] = sumsq[c].add_ref(&part.sumsq[c]);
        }
    }
    let s = Rat::from_integer(Int::from(samples));
    let mut mu = Vec::with_capacity(k as usize);
    let mut sigma2 = Rat::zero();
    for c in 0..k as usize {
        let mean = sum[c].to_rat() / &s;
        // unbiased sample variance
        let var =
            (sumsq[c].to_rat() - &s * &mean * &mean) / Rat::from_integer(Int::from(samples - 1));
        sigma2 += var;
        mu.push(mean);
    }
    if sigma2.is_negative() {
        // tiny negative from cancellation cannot happen in exact arithmetic,
        // but clamp anyway to honor the report invariant
        sigma2 = Rat::zero();
    }
    let stderr = Interval::exact(&sigma2 / &s).sqrt().midpoint();
    Ok(MomentReport {
        mu,
        sigma2,
        family_count: Int::from(samples),
        mode: MomentMode::MonteCarlo,
        stderr: Some(stderr),
    })
}

/// Exact all-ones variance next to its closed-form case bound, with their
/// ratio. No assertion: the bound is asymptotic, so the caller applies slack.
#[derive(Clone, Debug)]
pub struct ComparisonReport {
    pub n: u32,
    pub m: u32,
    pub lambda: Rat,
    pub exact_sigma2: Rat,
    pub bound: BoundValue,
    pub ratio: Interval,
}

pub fn bound_comparison(n: u32, m: u32, lambda: &Rat) -> Result<ComparisonReport> {
    let exact = allones_exact(n, m, lambda)?;
    let bound = allones_variance_bound(n, m, lambda)?.value;
    let ratio = Interval::exact(exact.sigma2.clone()).div(&bound.to_interval());
    Ok(ComparisonReport {
        n,
        m,
        lambda: lambda.clone(),
        exact_sigma2: exact.sigma2,
        bound,
        ratio,
    })
}
