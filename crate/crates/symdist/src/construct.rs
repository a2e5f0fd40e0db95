//! Builders for evaluation-distinct sequences: the explicit base-(2+eps)
//! construction in real and integer form, and the probabilistic
//! sample-and-repair construction.

use crate::bounds::{binary_entropy, tau_from_entropy};
use crate::error::{Error, Result};
use crate::params::ProblemParams;
use crate::rng::{derive_seed, one_to, rng_from};
use crate::sequence::{IntSequence, RatSequence, Sequence};
use crate::verify::{collect_collisions, verify_distinct, VerifyOptions};
use crate::{Int, Rat};

use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};

fn check_explicit_args(m: u32, epsilon: &Rat) -> Result<()> {
    if m < 2 {
        return Err(Error::HypothesisViolated(format!(
            "the explicit construction is stated for degree >= 2, got m={m}"
        )));
    }
    if !epsilon.is_positive() {
        return Err(Error::DomainError(format!(
            "explicit construction needs epsilon > 0, got {epsilon}"
        )));
    }
    Ok(())
}

fn rat_powi(base: &Rat, e: u32) -> Rat {
    let mut acc = Rat::one();
    let mut b = base.clone();
    let mut e = e;
    while e > 0 {
        if e & 1 == 1 {
            acc *= &b;
        }
        e >>= 1;
        if e > 0 {
            b = &b * &b;
        }
    }
    acc
}

/// Exact rational sequence a_i = (2+eps)^n - 2^(i-1), one-dimensional,
/// full family. The defining property is only guaranteed for large n, so
/// callers should verify (real-spacing mode) rather than assume.
pub fn construct_real(n: u32, m: u32, epsilon: &Rat) -> Result<RatSequence> {
    check_explicit_args(m, epsilon)?;
    let base = rat_powi(&(Rat::from_integer(Int::from(2)) + epsilon), n);
    let mut elems: Vec<Rat> = Vec::with_capacity(n as usize);
    let mut pw = Rat::one();
    for _ in 0..n {
        elems.push(&base - &pw);
        pw *= Rat::from_integer(Int::from(2));
    }
    let bound = elems.first().cloned();
    let params = ProblemParams::new(n, 1, m, Rat::one())?;
    Sequence::from_scalars(params, elems, bound)
}

/// Integer sequence a_i = floor((2+eps)^n) - 2^(i-1). Subtracting an integer
/// commutes with the floor, so this equals floor((2+eps)^n - 2^(i-1))
/// entry for entry; both are computed and compared to keep that identity
/// checked rather than assumed.
pub fn construct_integer(n: u32, m: u32, epsilon: &Rat) -> Result<IntSequence> {
    check_explicit_args(m, epsilon)?;
    let base = rat_powi(&(Rat::from_integer(Int::from(2)) + epsilon), n);
    let base_floor = base.floor().to_integer();
    let mut elems: Vec<Int> = Vec::with_capacity(n as usize);
    let mut pw = Int::one();
    for _ in 0..n {
        let direct = (&base - Rat::from_integer(pw.clone())).floor().to_integer();
        let composed = &base_floor - &pw;
        assert_eq!(
            direct, composed,
            "floor must commute with integer subtraction"
        );
        elems.push(composed);
        pw <<= 1;
    }
    let bound = elems.first().cloned();
    let params = ProblemParams::new(n, 1, m, Rat::one())?;
    Sequence::from_scalars(params, elems, bound)
}

/// Controls for the probabilistic construction.
#[derive(Clone, Debug)]
pub struct ProbRecipe {
    /// Entries are sampled uniformly from [1, M] per coordinate.
    pub m_bound: Int,
    /// Extra elements sampled beyond n; up to this many may be removed
    /// during repair. Default: the entropy-optimal repetition count for
    /// lambda < 1/2, otherwise 1.
    pub overshoot: Option<u32>,
    pub max_retries: u32,
    pub seed: u64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AttemptLog {
    pub seed: u64,
    pub sampled: u32,
    pub collisions_found: u64,
    /// 1-based positions removed, in removal order, relative to the sampled
    /// sequence of this attempt.
    pub removed: Vec<u32>,
    pub success: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RepairLog {
    pub root_seed: u64,
    pub overshoot: u32,
    pub attempts: Vec<AttemptLog>,
}

/// Pair-coverage cap per repair round; collisions beyond this are found by
/// the re-collection that follows each round.
const COLLISION_CAP: usize = 100_000;

/// Samples n + t elements with coordinates uniform in [1, M], then greedily
/// removes the element covering the most colliding subset pairs until the
/// family is collision-free, retrying with a fresh derived seed when more
/// than t removals would be needed. The returned sequence always passes
/// verification.
pub fn construct_probabilistic(
    params: &ProblemParams,
    recipe: &ProbRecipe,
) -> Result<(IntSequence, RepairLog)> {
    if recipe.max_retries < 1 {
        return Err(Error::DomainError("maxRetries must be >= 1".into()));
    }
    if !recipe.m_bound.is_positive() || recipe.m_bound < Int::from(params.m()) {
        return Err(Error::DomainError(format!(
            "sampling bound must be at least the degree ({}), got {}",
            params.m(),
            recipe.m_bound
        )));
    }
    let half = Rat::new(Int::one(), Int::from(2));
    let overshoot = match recipe.overshoot {
        Some(t) => t,
        None if *params.lambda() < half => tau_from_entropy(&binary_entropy(params.lambda())?)?
            .try_into()
            .map_err(|_| Error::DomainError("overshoot out of range".into()))?,
        None => 1,
    };
    let (n, k) = (params.n(), params.k());
    let n_prime = n + overshoot;
    let sample_params = params.with_n(n_prime)?;
    let bound_mag = recipe.m_bound.magnitude().clone();

    let mut log = RepairLog {
        root_seed: recipe.seed,
        overshoot,
        attempts: Vec::new(),
    };
    for attempt in 0..recipe.max_retries {
        let attempt_seed = derive_seed(recipe.seed, attempt as u64);
        let mut rng = rng_from(attempt_seed);
        let mut flat: Vec<Int> = Vec::with_capacity((n_prime * k) as usize);
        for _ in 0..n_prime * k {
            flat.push(Int::from(one_to(&mut rng, &bound_mag)));
        }
        let sampled =
            Sequence::from_scalars(sample_params.clone(), flat, Some(recipe.m_bound.clone()))?;

        let mut alive: Vec<bool> = vec![true; n_prime as usize];
        let mut removed: Vec<u32> = Vec::new();
        let mut collisions_found = 0u64;
        let repaired = loop {
            let live: Vec<u32> = (0..n_prime).filter(|&i| alive[i as usize]).collect();
            let current = sampled.restrict_to(&live.iter().map(|&i| i + 1).collect::<Vec<_>>())?;
            let (pairs, truncated) = collect_collisions(&current, params.m(), COLLISION_CAP);
            collisions_found += pairs.len() as u64;
            if pairs.is_empty() {
                break true;
            }
            // Greedy cover: remove the live element present in the most
            // colliding pairs; ties break toward the smallest index.
            let mut cover = vec![0u64; live.len()];
            for (a, b) in &pairs {
                let mut seen: Vec<u32> = a.to_indices();
                for i in b.to_indices() {
                    if !seen.contains(&i) {
                        seen.push(i);
                    }
                }
                for i in seen {
                    cover[(i - 1) as usize] += 1;
                }
            }
            let best = (0..live.len())
                .max_by_key(|&i| (cover[i], std::cmp::Reverse(i)))
                .expect("nonempty live set with collisions");
            let original = live[best];
            alive[original as usize] = false;
            removed.push(original + 1);
            if removed.len() as u32 > overshoot {
                break false;
            }
            // loop re-collects; `truncated` only matters for pacing
            let _ = truncated;
        };

        if repaired {
            // keep the first n surviving elements in order
            let mut live: Vec<u32> = (0..n_prime).filter(|&i| alive[i as usize]).collect();
            live.truncate(n as usize);
            let final_seq =
                sampled.restrict_to(&live.iter().map(|&i| i + 1).collect::<Vec<_>>())?;
            let check = verify_distinct(&final_seq, &VerifyOptions::default())?;
            if check.distinct {
                log.attempts.push(AttemptLog {
                    seed: attempt_seed,
                    sampled: n_prime,
                    collisions_found,
                    removed,
                    success: true,
                });
                return Ok((final_seq, log));
            }
        }
        log.attempts.push(AttemptLog {
            seed: attempt_seed,
            sampled: n_prime,
            collisions_found,
            removed,
            success: false,
        });
    }
    Err(Error::RetriesExhausted {
        attempts: recipe.max_retries,
    })
}
