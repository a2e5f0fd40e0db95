//! Randomized invariants over the public API. Each property states a
//! contract the library promises for every input in the sampled domain;
//! failures shrink to minimal counterexamples and persist under
//! proptest-regressions/.

use num_traits::Signed;
use proptest::prelude::*;

use symdist::bounds::{
    allones_variance_bound, binary_entropy, pigeonhole_lower, prob_upper, prob_upper_full,
    tau_from_entropy, variance_lower_general, variance_lower_small,
};
use symdist::construct::{construct_integer, construct_probabilistic, ProbRecipe};
use symdist::counting::cap_for;
use symdist::esp::eval_subset;
use symdist::interval::Interval;
use symdist::params::parse_ratio;
use symdist::search::{feasible, min_m_search_with, mitm_verify, Budget, Strategy as ScanOrder};
use symdist::seqfile::{any_from_json, sequence_to_json, AnySequence};
use symdist::stats::{allones_exact, montecarlo_moments};
use symdist::verify::{verify_distinct, VerifyMode, VerifyOptions};
use symdist::{Element, Error, Int, IntSequence, ProblemParams, Rat, Sequence, SubsetRef};

fn rat(s: &str) -> Rat {
    parse_ratio(s).unwrap()
}

fn exact_opts() -> VerifyOptions {
    VerifyOptions {
        mode: VerifyMode::Exact,
        min_size: None,
        memory_budget: None,
        chunked: false,
        early_exit: false,
    }
}

fn int_sequence(n: u32, k: u32, m: u32, lambda: &str, flat: &[i64]) -> IntSequence {
    let p = ProblemParams::new(n, k, m, rat(lambda)).unwrap();
    let elems = flat
        .chunks(k as usize)
        .map(|c| Element(c.iter().map(|&v| Int::from(v)).collect()))
        .collect();
    Sequence::new(p, elems, None).unwrap()
}

fn mask_indices(mask: u64, n: u32) -> Vec<u32> {
    (0..n)
        .filter(|i| mask >> i & 1 == 1)
        .map(|i| i + 1)
        .collect()
}

/// Defining sum, written independently of the incremental update: the sum
/// over all degree-m index combinations of the coordinate product.
fn direct_expansion(seq: &IntSequence, indices: &[u32]) -> Vec<Int> {
    let k = seq.params().k() as usize;
    let m = seq.params().m() as usize;
    let t = indices.len();
    let mut acc = vec![Int::from(0); k];
    if t < m {
        return acc;
    }
    let mut comb: Vec<usize> = (0..m).collect();
    loop {
        for (c, slot) in acc.iter_mut().enumerate() {
            let mut prod = Int::from(1);
            for &pos in &comb {
                prod *= &seq.elements()[(indices[pos] - 1) as usize].0[c];
            }
            *slot += prod;
        }
        let mut i = m;
        loop {
            if i == 0 {
                return acc;
            }
            i -= 1;
            if comb[i] != i + t - m {
                comb[i] += 1;
                for j in i + 1..m {
                    comb[j] = comb[j - 1] + 1;
                }
                break;
            }
        }
    }
}

fn binom(n: u64, k: u64) -> Int {
    if k > n {
        return Int::from(0);
    }
    let mut acc = Int::from(1);
    for i in 0..k.min(n - k) {
        acc = acc * Int::from(n - i) / Int::from(i + 1);
    }
    acc
}

/// (n, k, m, flat entries, subset mask) with entries in [lo, hi].
fn instance(n_max: u32, lo: i64, hi: i64) -> impl Strategy<Value = (u32, u32, u32, Vec<i64>, u64)> {
    (1..=n_max, 1..=2u32, 1..=3u32).prop_flat_map(move |(n, k, m)| {
        (
            Just(n),
            Just(k),
            Just(m),
            proptest::collection::vec(lo..=hi, (n * k) as usize),
            0..(1u64 << n),
        )
    })
}

proptest! {
    #[test]
    fn evaluation_equals_direct_expansion((n, k, m, flat, mask) in instance(10, 0, 1000)) {
        let seq = int_sequence(n, k, m, "1", &flat);
        let idx = mask_indices(mask, n);
        let got = eval_subset(&seq, &SubsetRef::from_sorted(&idx)).unwrap();
        prop_assert_eq!(got, direct_expansion(&seq, &idx));
    }

    #[test]
    fn evaluation_depends_only_on_the_multiset(
        (n, k, m, flat, mask) in instance(10, 0, 1000),
        seed in 0u64..1 << 32,
    ) {
        let seq = int_sequence(n, k, m, "1", &flat);
        // reseat the elements under a seeded shuffle and remap the subset
        let mut perm: Vec<u32> = (0..n).collect();
        let mut state = seed | 1;
        for i in (1..perm.len()).rev() {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            perm.swap(i, (state >> 33) as usize % (i + 1));
        }
        let shuffled: Vec<i64> = perm
            .iter()
            .flat_map(|&src| flat[(src * k) as usize..((src + 1) * k) as usize].to_vec())
            .collect();
        let perm_seq = int_sequence(n, k, m, "1", &shuffled);
        let idx = mask_indices(mask, n);
        let mut mapped: Vec<u32> = perm
            .iter()
            .enumerate()
            .filter(|(_, &src)| mask >> src & 1 == 1)
            .map(|(pos, _)| pos as u32 + 1)
            .collect();
        mapped.sort_unstable();
        let a = eval_subset(&seq, &SubsetRef::from_sorted(&idx)).unwrap();
        let b = eval_subset(&perm_seq, &SubsetRef::from_sorted(&mapped)).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn adding_a_positive_element_strictly_increases(
        (n, k, m, flat, mask) in instance(10, 1, 1000),
    ) {
        let seq = int_sequence(n, k, m, "1", &flat);
        let idx = mask_indices(mask, n);
        prop_assume!(idx.len() >= m as usize && idx.len() < n as usize);
        let extra = (1..=n).find(|i| !idx.contains(i)).unwrap();
        let mut bigger = idx.clone();
        bigger.push(extra);
        bigger.sort_unstable();
        let small = eval_subset(&seq, &SubsetRef::from_sorted(&idx)).unwrap();
        let large = eval_subset(&seq, &SubsetRef::from_sorted(&bigger)).unwrap();
        for c in 0..k as usize {
            prop_assert!(large[c] > small[c], "coordinate {c}: {} !> {}", large[c], small[c]);
        }
    }

    #[test]
    fn allones_evaluation_counts_combinations(
        n in 1..=16u32,
        m in 1..=3u32,
        raw in any::<u64>(),
    ) {
        let mask = raw & ((1u64 << n) - 1);
        let seq = int_sequence(n, 1, m, "1", &vec![1i64; n as usize]);
        let idx = mask_indices(mask, n);
        let got = eval_subset(&seq, &SubsetRef::from_sorted(&idx)).unwrap();
        prop_assert_eq!(&got[0], &binom(idx.len() as u64, m as u64));
    }

    #[test]
    fn failed_verification_reproduces_the_collision(
        (n, k, m, flat, _) in instance(9, 1, 30),
        lam in prop::sample::select(vec!["3/10", "1/2", "1"]),
    ) {
        let seq = int_sequence(n, k, m, lam, &flat);
        let res = verify_distinct(&seq, &exact_opts()).unwrap();
        if let Some(w) = &res.witness {
            prop_assert!(!res.distinct);
            let a = w.a.to_indices();
            let b = w.b.to_indices();
            prop_assert_ne!(&a, &b);
            let cap = cap_for(n, &rat(lam)) as usize;
            for s in [&a, &b] {
                prop_assert!(s.len() >= m as usize && s.len() <= cap);
            }
            let va = eval_subset(&seq, &SubsetRef::from_sorted(&a)).unwrap();
            let vb = eval_subset(&seq, &SubsetRef::from_sorted(&b)).unwrap();
            prop_assert_eq!(&va, &w.value_a);
            prop_assert_eq!(&vb, &w.value_b);
            prop_assert_eq!(va, vb);
        } else {
            prop_assert!(res.distinct);
        }
    }

    #[test]
    fn size_cap_below_degree_verifies_vacuously(
        n in 2..=10u32,
        k in 1..=2u32,
        m in 2..=3u32,
        flat in proptest::collection::vec(1i64..=5, 20usize),
    ) {
        // lambda = (m-1)/n caps subset size strictly below the degree
        prop_assume!(m <= n);
        let lam = format!("{}/{n}", m - 1);
        let seq = int_sequence(n, k, m, &lam, &flat[..(n * k) as usize]);
        let res = verify_distinct(&seq, &exact_opts()).unwrap();
        prop_assert!(res.distinct);
        prop_assert!(res.witness.is_none());
    }

    #[test]
    fn repetition_count_minimizes_growth_per_element(
        p in 1u32..=24,
        q in 2u32..=50,
    ) {
        prop_assume!(2 * p < q);
        let lam = Rat::new(Int::from(p), Int::from(q));
        let h = binary_entropy(&lam).unwrap();
        let tau = tau_from_entropy(&h).unwrap();
        let g = |t: u64| -> Interval {
            h.scale(&Rat::from_integer(Int::from(2 * t)))
                .exp2()
                .scale(&Rat::new(Int::from(1), Int::from(t)))
        };
        let at_tau = g(tau);
        prop_assert!(g(tau + 1).lt(&at_tau) != Some(true), "tau+1 beats tau at {lam}");
        if tau > 1 {
            prop_assert!(g(tau - 1).lt(&at_tau) != Some(true), "tau-1 beats tau at {lam}");
        }
    }

    #[test]
    fn bound_values_are_positive(
        n in 1..=30u32,
        k in 1..=3u32,
        m in 1..=4u32,
        lam in prop::sample::select(vec!["1/10", "3/10", "1/2", "7/10", "1"]),
    ) {
        let p = ProblemParams::new(n, k, m, rat(lam)).unwrap();
        let mut reports = Vec::new();
        let mut push = |r: Result<symdist::bounds::BoundReport, Error>| -> Result<(), TestCaseError> {
            // bounds outside their stated hypotheses refuse rather than
            // emit values; only produced values must be positive
            match r {
                Ok(rep) => {
                    reports.push(rep);
                    Ok(())
                }
                Err(Error::HypothesisViolated(_))
                | Err(Error::DomainError(_))
                | Err(Error::DegenerateFamily) => Ok(()),
                Err(e) => Err(TestCaseError::fail(e.to_string())),
            }
        };
        push(pigeonhole_lower(&p))?;
        push(variance_lower_general(&p, false))?;
        push(variance_lower_general(&p, true))?;
        push(allones_variance_bound(n, m, &rat(lam)))?;
        push(prob_upper_full(n, m, k))?;
        if k == 1 {
            push(variance_lower_small(n, m))?;
        }
        push(prob_upper(&p))?;
        prop_assert!(!reports.is_empty());
        for r in &reports {
            prop_assert!(r.value.is_positive(), "{} not positive at n={n} k={k} m={m} lambda={lam}", r.name);
        }
    }

    #[test]
    fn doubling_elements_follow_the_floor_formula(
        n in 1..=25u32,
        m in 2..=3u32,
        p in 1u32..=8,
        q in 1u32..=8,
    ) {
        let eps = Rat::new(Int::from(p), Int::from(q));
        let seq = construct_integer(n, m, &eps).unwrap();
        let base = {
            let b = Rat::from_integer(Int::from(2)) + &eps;
            let mut acc = Rat::from_integer(Int::from(1));
            for _ in 0..n {
                acc *= &b;
            }
            acc
        };
        let base_floor = base.floor().to_integer();
        let mut pw = Int::from(1);
        for (i, e) in seq.elements().iter().enumerate() {
            let direct = (&base - Rat::from_integer(pw.clone())).floor().to_integer();
            prop_assert_eq!(&e.0[0], &direct, "element {} breaks the floor identity", i + 1);
            prop_assert_eq!(e.0[0].clone(), &base_floor - &pw);
            pw <<= 1;
        }
        prop_assert_eq!(seq.bound(), seq.elements().first().map(|e| &e.0[0]));
    }

    #[test]
    fn sampled_construction_is_deterministic_and_in_range(
        n in 3..=6u32,
        m in 1..=2u32,
        lam in prop::sample::select(vec!["1/2", "1"]),
        m_bound in 20i64..=200,
        seed in 0u64..1 << 48,
    ) {
        let p = ProblemParams::new(n, 1, m, rat(lam)).unwrap();
        let recipe = ProbRecipe {
            m_bound: Int::from(m_bound),
            overshoot: None,
            max_retries: 4,
            seed,
        };
        let first = construct_probabilistic(&p, &recipe);
        let second = construct_probabilistic(&p, &recipe);
        match (first, second) {
            (Ok((s1, l1)), Ok((s2, l2))) => {
                prop_assert_eq!(s1.elements(), s2.elements());
                prop_assert_eq!(
                    serde_json::to_string(&l1).unwrap(),
                    serde_json::to_string(&l2).unwrap()
                );
                let res = verify_distinct(&s1, &exact_opts()).unwrap();
                prop_assert!(res.distinct);
                let bound = Int::from(m_bound);
                for e in s1.elements() {
                    prop_assert!(e.0[0] >= Int::from(1) && e.0[0] <= bound);
                }
            }
            (Err(Error::RetriesExhausted { .. }), Err(Error::RetriesExhausted { .. })) => {}
            (a, b) => {
                return Err(TestCaseError::fail(format!(
                    "same recipe diverged: {a:?} vs {b:?}"
                )))
            }
        }
    }

    #[test]
    fn documents_round_trip_byte_identically((n, k, m, flat, _) in instance(10, 0, 1000)) {
        let seq = int_sequence(n, k, m, "1/2", &flat);
        let text = sequence_to_json(&seq);
        match any_from_json(&text).unwrap() {
            AnySequence::Int(back) => {
                prop_assert_eq!(back.elements(), seq.elements());
                prop_assert_eq!(sequence_to_json(&back), text);
            }
            AnySequence::Rat(_) => return Err(TestCaseError::fail("integer ring lost".to_string())),
        }
    }

    #[test]
    fn larger_entry_budgets_stay_feasible(
        n in 2..=4u32,
        m in 1..=2u32,
        k in 1..=2u32,
        lam in prop::sample::select(vec!["3/10", "1/2", "1"]),
        m_val in 0i64..=8,
    ) {
        let p = ProblemParams::new(n, k, m, rat(lam)).unwrap();
        let budget = Budget::default();
        if feasible(&p, &Int::from(m_val), &budget).unwrap().is_some() {
            let again = feasible(&p, &Int::from(m_val + 1), &budget).unwrap();
            prop_assert!(again.is_some(), "feasible at {m_val} but not at {}", m_val + 1);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn split_verification_agrees_with_direct(
        n in 1..=20u32,
        flat in proptest::collection::vec(1i64..=1000, 20usize),
    ) {
        let seq = int_sequence(n, 1, 1, "1", &flat[..n as usize]);
        let split = mitm_verify(&seq).unwrap();
        let mut opts = exact_opts();
        opts.min_size = Some(0);
        let direct = verify_distinct(&seq, &opts).unwrap();
        prop_assert_eq!(split.distinct, direct.distinct);
        if let Some(w) = &split.witness {
            let va = eval_subset(&seq, &SubsetRef::from_sorted(&w.a.to_indices())).unwrap();
            let vb = eval_subset(&seq, &SubsetRef::from_sorted(&w.b.to_indices())).unwrap();
            prop_assert_eq!(va, vb);
        }
    }
}

#[test]
fn pruned_and_unpruned_searches_agree_exhaustively() {
    let budget = Budget::default();
    for n in 1..=4u32 {
        for m in 1..=2u32 {
            for k in 1..=2u32 {
                for lam in ["3/10", "1/2", "1"] {
                    let p = ProblemParams::new(n, k, m, rat(lam)).unwrap();
                    let fast =
                        min_m_search_with(&p, &Int::from(8), &budget, ScanOrder::Linear, true)
                            .unwrap();
                    let slow =
                        min_m_search_with(&p, &Int::from(8), &budget, ScanOrder::Linear, false)
                            .unwrap();
                    assert_eq!(fast.status, slow.status, "n={n} m={m} k={k} lambda={lam}");
                    assert_eq!(fast.m_min, slow.m_min, "n={n} m={m} k={k} lambda={lam}");
                    match (&fast.witness, &slow.witness) {
                        (Some(a), Some(b)) => {
                            assert_eq!(a.elements(), b.elements(), "n={n} m={m} k={k} lambda={lam}")
                        }
                        (None, None) => {}
                        _ => panic!("witness presence differs at n={n} m={m} k={k} lambda={lam}"),
                    }
                }
            }
        }
    }
}

#[test]
fn montecarlo_error_shrinks_with_samples() {
    // mean absolute estimation error across seeds should fall roughly like
    // 1/sqrt(samples); 16x the samples must buy clearly more than ~1.8x
    let exact = allones_exact(12, 1, &rat("1/2")).unwrap();
    let seq = int_sequence(12, 1, 1, "1/2", &[1i64; 12]);
    let mean_abs_err = |samples: u64| -> Rat {
        let mut total = Rat::from_integer(Int::from(0));
        for seed in 0..8u64 {
            let est = montecarlo_moments(&seq, &rat("1/2"), samples, seed).unwrap();
            total += (&est.mu[0] - &exact.mu[0]).abs();
        }
        total / Rat::from_integer(Int::from(8))
    };
    let coarse = mean_abs_err(500);
    let fine = mean_abs_err(8000);
    assert!(
        &fine * rat("9/5") < coarse,
        "16x samples: error {} -> {}, expected a ~4x drop",
        coarse,
        fine
    );
}
