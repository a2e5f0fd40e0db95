//! Closed-form lower and upper bounds on the minimal element bound M that
//! permits (or is forced by) evaluation distinctness over the bounded-size
//! subset family.
//!
//! Every calculator returns a `BoundReport` whose `asymptotic` flag records
//! whether the source inequality only holds up to a (1+o(1)) factor that the
//! calculator drops. Values that involve roots, logarithms, or pi are carried
//! as intervals; purely rational results stay exact.

use crate::counting::{binomial, factorial, family_size};
use crate::error::{Error, Result};
use crate::interval::{format_rat_auto, format_sig, Interval};
use crate::params::ProblemParams;
use crate::{Int, Rat};
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::cmp::Ordering;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Lower,
    Upper,
}

impl Side {
    pub fn as_str(&self) -> &'static str {
        match self {
            Side::Lower => "lower",
            Side::Upper => "upper",
        }
    }
}

/// A bound value: exact rational when the formula is rational in its inputs,
/// otherwise a verified enclosure.
#[derive(Clone, Debug)]
pub enum BoundValue {
    Exact(Rat),
    Enclosure(Interval),
}

impl BoundValue {
    pub fn to_interval(&self) -> Interval {
        match self {
            BoundValue::Exact(r) => Interval::exact(r.clone()),
            BoundValue::Enclosure(i) => i.clone(),
        }
    }

    pub fn is_positive(&self) -> bool {
        match self {
            BoundValue::Exact(r) => r.is_positive(),
            BoundValue::Enclosure(i) => i.is_positive(),
        }
    }

    /// Decimal rendering: exact expansion when it terminates, otherwise
    /// `sig` significant digits of the midpoint.
    pub fn decimal(&self, sig: usize) -> String {
        match self {
            BoundValue::Exact(r) => format_rat_auto(r, sig),
            BoundValue::Enclosure(i) => i.to_decimal(sig),
        }
    }

    /// Base-2 logarithm rendering; empty for non-positive values.
    pub fn log2_decimal(&self, sig: usize) -> String {
        if !self.is_positive() {
            return String::new();
        }
        let l = self.to_interval().log2();
        format_sig(&l.midpoint(), sig)
    }
}

#[derive(Clone, Debug)]
pub struct BoundReport {
    pub name: &'static str,
    pub n: u32,
    pub k: u32,
    pub m: u32,
    pub lambda: Rat,
    pub side: Side,
    pub asymptotic: bool,
    pub value: BoundValue,
    /// Named companion quantities (for example the repetition count tau used
    /// by the probabilistic bound), reported as extra rows by the CLI.
    pub aux: Vec<(&'static str, BoundValue)>,
}

fn rat_u(v: u32) -> Rat {
    Rat::from_integer(Int::from(v))
}

fn rat_pow(r: &Rat, e: u32) -> Rat {
    let mut acc = Rat::one();
    let mut base = r.clone();
    let mut e = e;
    while e > 0 {
        if e & 1 == 1 {
            acc *= &base;
        }
        e >>= 1;
        if e > 0 {
            base = &base * &base;
        }
    }
    acc
}

/// h(x) = -x log2 x - (1-x) log2(1-x), with h(0) = h(1) = 0.
pub fn binary_entropy(lambda: &Rat) -> Result<Interval> {
    if lambda.is_negative() || *lambda > Rat::one() {
        return Err(Error::DomainError(format!(
            "binary entropy needs an argument in [0,1], got {}",
            lambda
        )));
    }
    if lambda.is_zero() || lambda.is_one() {
        return Ok(Interval::exact(Rat::zero()));
    }
    let co = Rat::one() - lambda;
    let a = Interval::exact(lambda.clone())
        .log2()
        .scale(&-lambda.clone());
    let b = Interval::exact(co.clone()).log2().scale(&-co);
    Ok(a.add(&b))
}

/// Gamma(k/2 + 1)^2 as an interval: (j!)^2 exactly for even k = 2j, and
/// pi * ((2j)! / (4^j j!))^2 for odd k with j = (k+1)/2.
fn gamma_half_sq(k: u32) -> Interval {
    if k.is_multiple_of(2) {
        let f = Rat::from_integer(Int::from(factorial(k / 2)));
        Interval::exact(&f * &f)
    } else {
        let j = k.div_ceil(2);
        let c = Rat::new(
            Int::from(factorial(2 * j)),
            Int::from(2u32).pow(2 * j) * Int::from(factorial(j)),
        );
        Interval::pi().scale(&(&c * &c))
    }
}

/// Counting bound: with count qualifying subsets and every coordinate of an
/// evaluation confined to fewer than (lambda n)^m M^m / m! integer values,
/// distinctness forces M >= (m!)^(1/m) count^(1/(km)) / (lambda n).
pub fn pigeonhole_lower(p: &ProblemParams) -> Result<BoundReport> {
    let (n, k, m) = (p.n(), p.k(), p.m());
    let mut count = Int::from(family_size(n, p.lambda(), 0));
    for i in 0..m {
        count -= Int::from(binomial(n, i));
    }
    if !count.is_positive() {
        return Err(Error::DegenerateFamily);
    }
    let ln = p.lambda() * rat_u(n);
    let value = Interval::exact(Rat::from_integer(Int::from(factorial(m))))
        .nth_root(m)
        .mul(&Interval::exact(Rat::from_integer(count)).nth_root(k * m))
        .scale(&(Rat::one() / ln));
    Ok(BoundReport {
        name: "pigeonhole_lower",
        n,
        k,
        m,
        lambda: p.lambda().clone(),
        side: Side::Lower,
        asymptotic: true,
        value: BoundValue::Enclosure(value),
        aux: vec![],
    })
}

/// One-dimensional full-family variance bound:
/// M >= 2^(1-1/m) ((m-1)!)^(1/m) / 3^(1/(2m)) * 2^(n/m) / n^(1-1/(2m)).
pub fn variance_lower_small(n: u32, m: u32) -> Result<BoundReport> {
    if m < 1 || n < m {
        return Err(Error::DomainError(format!(
            "variance_lower_small needs n >= m >= 1, got n={n}, m={m}"
        )));
    }
    let two = Interval::exact(rat_u(2));
    let c = two
        .pow_ratio(m as i64 - 1, m)
        .mul(&Interval::exact(Rat::from_integer(Int::from(factorial(m - 1)))).nth_root(m))
        .div(&Interval::exact(rat_u(3)).nth_root(2 * m));
    let growth = two
        .pow_ratio(n as i64, m)
        .div(&Interval::exact(rat_u(n)).pow_ratio(2 * m as i64 - 1, 2 * m));
    Ok(BoundReport {
        name: "variance_lower_small",
        n,
        k: 1,
        m,
        lambda: Rat::one(),
        side: Side::Lower,
        asymptotic: true,
        value: BoundValue::Enclosure(c.mul(&growth)),
        aux: vec![],
    })
}

/// lambda-case split shared by the variance bounds. Returns the exact
/// rational part of the case constant: (numerator factorial)^2 over the
/// polynomial in lambda, without the Gamma/pi factor.
fn variance_case_factor(m: u32, lambda: &Rat) -> Rat {
    let lam_sum = rat_pow(lambda, 2 * m - 1) + rat_pow(lambda, 2 * m);
    match lambda.cmp(&Rat::new(Int::one(), Int::from(2))) {
        Ordering::Less => {
            let f = Rat::from_integer(Int::from(factorial(m - 1)));
            (&f * &f) / (rat_u(2) * lam_sum)
        }
        Ordering::Equal => {
            let f = Rat::from_integer(Int::from(factorial(m - 1)));
            let p = Rat::from_integer(Int::from(2u32).pow(2 * m));
            let inner = Rat::from_integer(Int::from(2u32).pow(2 * m + 1)) * lam_sum + Rat::one();
            (&p * &f * &f) / inner
        }
        Ordering::Greater => {
            let f = Rat::from_integer(Int::from(factorial(m)));
            let inner = rat_u(2 * m * m) * lam_sum + Rat::one();
            (&f * &f) / inner
        }
    }
}

/// Sphere-packing variance bound in k dimensions:
/// M^(2m) >= case-constant * |F|^(2/k) / n^(2m-1), with the case picked by
/// comparing lambda against 1/2 exactly. `real_spacing` selects the variant
/// for real sequences with evaluations at pairwise distance >= 1, which
/// weakens the M^(2m) bound by a factor of 4.
pub fn variance_lower_general(p: &ProblemParams, real_spacing: bool) -> Result<BoundReport> {
    let (n, k, m) = (p.n(), p.k(), p.m());
    let fam = Int::from(family_size(n, p.lambda(), 0));
    let gamma_pow = gamma_half_sq(k).nth_root(k);
    let mut factor = variance_case_factor(m, p.lambda()) / rat_u(k + 2);
    if real_spacing {
        factor /= rat_u(4);
    }
    let case_const = gamma_pow.scale(&factor).div(&Interval::pi());
    let value = case_const
        .nth_root(2 * m)
        .mul(&Interval::exact(Rat::from_integer(fam)).nth_root(k * m))
        .div(&Interval::exact(rat_u(n)).pow_ratio(2 * m as i64 - 1, 2 * m));
    Ok(BoundReport {
        name: if real_spacing {
            "variance_lower_general_real"
        } else {
            "variance_lower_general"
        },
        n,
        k,
        m,
        lambda: p.lambda().clone(),
        side: Side::Lower,
        asymptotic: true,
        value: BoundValue::Enclosure(value),
        aux: vec![],
    })
}

/// Variance upper bound for an M-bounded evaluation-distinct sequence,
/// exact rational in all three lambda cases.
pub fn variance_upper_sequence(p: &ProblemParams, m_bound: &Int) -> Result<BoundReport> {
    if !m_bound.is_positive() {
        return Err(Error::DomainError(format!(
            "variance_upper_sequence needs M >= 1, got {m_bound}"
        )));
    }
    let (n, k, m) = (p.n(), p.k(), p.m());
    let lam = p.lambda();
    let lam_sum = rat_pow(lam, 2 * m - 1) + rat_pow(lam, 2 * m);
    let half = Rat::new(Int::one(), Int::from(2));
    let coeff = match lam.cmp(&half) {
        Ordering::Less => {
            let f = Rat::from_integer(Int::from(factorial(m - 1)));
            rat_u(2 * k) * lam_sum / (&f * &f)
        }
        Ordering::Equal => {
            let f = Rat::from_integer(Int::from(factorial(m - 1)));
            let inner = Rat::from_integer(Int::from(2u32).pow(2 * m + 1)) * lam_sum + Rat::one();
            rat_u(k) * inner / (Rat::from_integer(Int::from(2u32).pow(2 * m)) * &f * &f)
        }
        Ordering::Greater => {
            let f = Rat::from_integer(Int::from(factorial(m)));
            let inner = rat_u(2 * m * m) * lam_sum + Rat::one();
            rat_u(k) * inner / (&f * &f)
        }
    };
    let value = coeff
        * Rat::from_integer(Int::from(n).pow(2 * m - 1))
        * Rat::from_integer(m_bound.pow(2 * m));
    Ok(BoundReport {
        name: "variance_upper_sequence",
        n,
        k,
        m,
        lambda: lam.clone(),
        side: Side::Upper,
        asymptotic: true,
        value: BoundValue::Exact(value),
        aux: vec![("M", BoundValue::Exact(Rat::from_integer(m_bound.clone())))],
    })
}

/// Variance upper bound for the all-ones sequence, by lambda case.
pub fn allones_variance_bound(n: u32, m: u32, lambda: &Rat) -> Result<BoundReport> {
    if n < 1 || m < 1 {
        return Err(Error::DomainError(format!(
            "allones_variance_bound needs n, m >= 1, got n={n}, m={m}"
        )));
    }
    if !lambda.is_positive() || *lambda > Rat::one() {
        return Err(Error::DomainError(format!(
            "allones_variance_bound needs lambda in (0,1], got {lambda}"
        )));
    }
    let half = Rat::new(Int::one(), Int::from(2));
    let fm1 = Rat::from_integer(Int::from(factorial(m - 1)));
    let value = match lambda.cmp(&half) {
        Ordering::Less => {
            let ln = lambda * rat_u(n);
            let poly = rat_pow(&ln, 2 * m - 2) / (&fm1 * &fm1);
            BoundValue::Enclosure(Interval::exact(rat_u(n)).sqrt().scale(&poly))
        }
        Ordering::Equal => {
            let den = Rat::from_integer(Int::from(2u32).pow(2 * m)) * &fm1 * &fm1;
            BoundValue::Exact(Rat::from_integer(Int::from(n).pow(2 * m - 1)) / den)
        }
        Ordering::Greater => {
            let fm = Rat::from_integer(Int::from(factorial(m)));
            BoundValue::Exact(Rat::from_integer(Int::from(n).pow(2 * m - 1)) / (&fm * &fm))
        }
    };
    Ok(BoundReport {
        name: "allones_variance_bound",
        n,
        k: 1,
        m,
        lambda: lambda.clone(),
        side: Side::Upper,
        asymptotic: true,
        value,
        aux: vec![],
    })
}

/// Smallest positive integer t with 4^(h t)/t minimal: ceil(1/(4^h - 1)).
/// Fails when the working precision cannot separate the ceiling argument
/// from an integer.
pub fn tau_from_entropy(h: &Interval) -> Result<u64> {
    let four_h = h.scale(&rat_u(2)).exp2();
    let em1 = four_h.sub(&Interval::exact(Rat::one()));
    if !em1.is_positive() {
        return Err(Error::DomainError(
            "entropy too small to determine the repetition count".into(),
        ));
    }
    let recip = Interval::exact(Rat::one()).div(&em1);
    let lo = recip.lo().ceil().to_integer();
    let hi = recip.hi().ceil().to_integer();
    if lo != hi {
        return Err(Error::DomainError(
            "repetition count indeterminate at working precision".into(),
        ));
    }
    lo.to_u64()
        .ok_or_else(|| Error::DomainError("repetition count out of range".into()))
}

/// Probabilistic existence bound for lambda < 1/2:
/// M = (4^(h tau)/tau)^(1/k) * m * 4^(h n / k), h = binary entropy of lambda.
pub fn prob_upper(p: &ProblemParams) -> Result<BoundReport> {
    let half = Rat::new(Int::one(), Int::from(2));
    if *p.lambda() >= half {
        return Err(Error::HypothesisViolated(format!(
            "probabilistic bound requires lambda < 1/2 (got {}); use prob_upper_full",
            p.lambda()
        )));
    }
    let (n, k, m) = (p.n(), p.k(), p.m());
    let h = binary_entropy(p.lambda())?;
    let tau = tau_from_entropy(&h)?;
    let tau_rat = Rat::from_integer(Int::from(tau));
    let c = h
        .scale(&(rat_u(2) * &tau_rat))
        .exp2()
        .scale(&(Rat::one() / &tau_rat))
        .nth_root(k);
    let growth = h.scale(&Rat::new(Int::from(2 * n), Int::from(k))).exp2();
    let value = c.mul(&growth).scale(&rat_u(m));
    Ok(BoundReport {
        name: "prob_upper",
        n,
        k,
        m,
        lambda: p.lambda().clone(),
        side: Side::Upper,
        asymptotic: false,
        value: BoundValue::Enclosure(value),
        aux: vec![("tau", BoundValue::Exact(tau_rat))],
    })
}

/// Probabilistic existence bound without the family-size restriction:
/// M <= m * 4^(n/k). Exact when k divides 2n.
pub fn prob_upper_full(n: u32, m: u32, k: u32) -> Result<BoundReport> {
    if m < 1 || k < 1 {
        return Err(Error::DomainError(format!(
            "prob_upper_full needs m, k >= 1, got m={m}, k={k}"
        )));
    }
    let value = if (2 * n).is_multiple_of(k) {
        let e = 2 * n / k;
        BoundValue::Exact(rat_u(m) * Rat::from_integer(Int::from(2u32).pow(e)))
    } else {
        BoundValue::Enclosure(
            Interval::exact(rat_u(4))
                .pow_ratio(n as i64, k)
                .scale(&rat_u(m)),
        )
    };
    Ok(BoundReport {
        name: "prob_upper_full",
        n,
        k,
        m,
        lambda: Rat::one(),
        side: Side::Upper,
        asymptotic: false,
        value,
        aux: vec![],
    })
}

/// One row of the leading-constant comparison for the 1-dimensional full
/// family: both constants multiply 2^(n/m)/n^(1-1/(2m)).
#[derive(Clone, Debug)]
pub struct ConstantsRow {
    pub m: u32,
    /// 2^(1-1/m) ((m-1)!)^(1/m) / 3^(1/(2m)), from the dedicated
    /// one-dimensional variance argument.
    pub variance_route: Interval,
    /// (m!)^(1/m) / (3(4m^2+1))^(1/(2m)), from specializing the
    /// sphere-packing bound to k = 1, full family.
    pub packing_route: Interval,
}

/// Both leading constants for m = 1..=m_max, each enclosed to well over 30
/// significant digits; the packing-route constant is strictly smaller in
/// every row.
pub fn constants_table(m_max: u32) -> Result<Vec<ConstantsRow>> {
    if m_max < 1 {
        return Err(Error::DomainError("constants_table needs mMax >= 1".into()));
    }
    let mut rows = Vec::with_capacity(m_max as usize);
    for m in 1..=m_max {
        let variance_route = Interval::exact(rat_u(2))
            .pow_ratio(m as i64 - 1, m)
            .mul(&Interval::exact(Rat::from_integer(Int::from(factorial(m - 1)))).nth_root(m))
            .div(&Interval::exact(rat_u(3)).nth_root(2 * m));
        let packing_route = Interval::exact(Rat::from_integer(Int::from(factorial(m))))
            .nth_root(m)
            .div(&Interval::exact(rat_u(3 * (4 * m * m + 1))).nth_root(2 * m));
        if packing_route.lt(&variance_route) != Some(true) {
            return Err(Error::IdentityViolated {
                lhs: packing_route.to_decimal(40),
                rhs: variance_route.to_decimal(40),
            });
        }
        rows.push(ConstantsRow {
            m,
            variance_route,
            packing_route,
        });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::parse_ratio;

    fn rat(s: &str) -> Rat {
        parse_ratio(s).unwrap()
    }

    fn params(n: u32, k: u32, m: u32, lam: &str) -> ProblemParams {
        ProblemParams::new(n, k, m, rat(lam)).unwrap()
    }

    fn assert_in(i: &Interval, lo: &str, hi: &str) {
        assert!(
            i.lo() > &rat(lo) && i.hi() < &rat(hi),
            "interval [{}, {}] not inside ({}, {})",
            i.lo(),
            i.hi(),
            lo,
            hi
        );
    }

    #[test]
    fn entropy_known_points() {
        let h = binary_entropy(&rat("1/2")).unwrap();
        assert_eq!(h.lo(), &Rat::one());
        assert_eq!(h.hi(), &Rat::one());
        let z = binary_entropy(&rat("0")).unwrap();
        assert!(z.lo().is_zero() && z.hi().is_zero());
        let small = binary_entropy(&rat("11/100")).unwrap();
        assert!(small.hi() < &rat("1/2"));
        assert!(small.lo() > &rat("49/100"));
        assert!(binary_entropy(&rat("3/2")).is_err());
    }

    #[test]
    fn pigeonhole_examples() {
        // m=1, k=1, lambda=1: (2^n - 1)/n
        let r = pigeonhole_lower(&params(6, 1, 1, "1")).unwrap();
        let v = r.value.to_interval();
        assert!(v.contains(&rat("63/6")) || (v.lo() <= &rat("63/6") && v.hi() >= &rat("63/6")));
        assert!(r.asymptotic);

        // m=2, k=1, lambda=1, n=10: sqrt(2 * 1013)/10
        let r = pigeonhole_lower(&params(10, 1, 2, "1")).unwrap();
        assert_in(&r.value.to_interval(), "45011/10000", "45012/10000");

        // empty family
        assert!(matches!(
            pigeonhole_lower(&params(10, 1, 3, "1/5")),
            Err(Error::DegenerateFamily)
        ));
    }

    #[test]
    fn variance_small_example() {
        // m=1, n=4: 16/(sqrt(3) * 2) = 8/sqrt(3) = 4.61880...
        let r = variance_lower_small(4, 1).unwrap();
        assert_in(&r.value.to_interval(), "46188/10000", "46189/10000");
        assert!(variance_lower_small(2, 3).is_err());
    }

    #[test]
    fn variance_general_cases() {
        // lambda=1, k=1, m=1, n=10: sqrt(1/60) * 2^10 / sqrt(10)
        let r = variance_lower_general(&params(10, 1, 1, "1"), false).unwrap();
        assert_in(&r.value.to_interval(), "4180/100", "4181/100");

        // real-spacing variant is exactly half for m=1 (fourth root of 4^2m)
        let rr = variance_lower_general(&params(10, 1, 1, "1"), true).unwrap();
        let doubled = rr.value.to_interval().scale(&rat("2"));
        assert!(doubled.contains(&r.value.to_interval().midpoint()));

        // case selection is exact on the rational lambda
        let below = variance_lower_general(&params(10, 1, 1, "499/1000"), false).unwrap();
        let at = variance_lower_general(&params(10, 1, 1, "1/2"), false).unwrap();
        assert!(below.value.is_positive() && at.value.is_positive());

        // k=2, m=1, lambda=1/4, n=40: finite positive value
        let s = variance_lower_general(&params(40, 2, 1, "1/4"), false).unwrap();
        assert!(s.value.is_positive());
    }

    #[test]
    fn gamma_squared_values() {
        let g2 = gamma_half_sq(2);
        assert!(g2.contains(&Rat::one()));
        let g1 = gamma_half_sq(1);
        // Gamma(3/2)^2 = pi/4
        let q = Interval::pi().scale(&rat("1/4"));
        assert!(g1.lo() <= q.hi() && q.lo() <= g1.hi());
        let g3 = gamma_half_sq(3);
        // Gamma(5/2)^2 = 9 pi / 16
        let q3 = Interval::pi().scale(&rat("9/16"));
        assert!(g3.lo() <= q3.hi() && q3.lo() <= g3.hi());
    }

    #[test]
    fn variance_upper_cases() {
        // k=1, m=1, lambda=1, M=3, n=10: 5 n M^2 = 450
        let r = variance_upper_sequence(&params(10, 1, 1, "1"), &Int::from(3)).unwrap();
        match &r.value {
            BoundValue::Exact(v) => assert_eq!(v, &rat("450")),
            _ => panic!("expected exact value"),
        }
        // lambda = 1/2, m=1, k=1, M=1: 7 n / 4
        let r = variance_upper_sequence(&params(10, 1, 1, "1/2"), &Int::from(1)).unwrap();
        match &r.value {
            BoundValue::Exact(v) => assert_eq!(v, &rat("35/2")),
            _ => panic!("expected exact value"),
        }
        // doubling M scales by 2^(2m)
        let a = variance_upper_sequence(&params(12, 2, 2, "1/3"), &Int::from(5)).unwrap();
        let b = variance_upper_sequence(&params(12, 2, 2, "1/3"), &Int::from(10)).unwrap();
        match (&a.value, &b.value) {
            (BoundValue::Exact(x), BoundValue::Exact(y)) => {
                assert_eq!(y, &(x * rat("16")));
            }
            _ => panic!("expected exact values"),
        }
    }

    #[test]
    fn allones_cases() {
        let r = allones_variance_bound(16, 1, &rat("1/2")).unwrap();
        match &r.value {
            BoundValue::Exact(v) => assert_eq!(v, &rat("4")),
            _ => panic!(),
        }
        let r = allones_variance_bound(16, 1, &rat("1")).unwrap();
        match &r.value {
            BoundValue::Exact(v) => assert_eq!(v, &rat("16")),
            _ => panic!(),
        }
        let r = allones_variance_bound(16, 1, &rat("1/4")).unwrap();
        assert!(r.value.to_interval().contains(&rat("4")));
    }

    #[test]
    fn prob_bounds() {
        let r = prob_upper(&params(21, 1, 1, "3/10")).unwrap();
        assert!(!r.asymptotic);
        assert!(r.value.is_positive());
        match &r.aux[0].1 {
            BoundValue::Exact(t) => assert_eq!(t, &Rat::one()),
            _ => panic!(),
        }
        assert!(matches!(
            prob_upper(&params(10, 1, 1, "1/2")),
            Err(Error::HypothesisViolated(_))
        ));

        let f = prob_upper_full(4, 1, 1).unwrap();
        match &f.value {
            BoundValue::Exact(v) => assert_eq!(v, &rat("256")),
            _ => panic!(),
        }
        let f = prob_upper_full(4, 3, 2).unwrap();
        match &f.value {
            BoundValue::Exact(v) => assert_eq!(v, &rat("48")),
            _ => panic!(),
        }
        let f = prob_upper_full(0, 1, 1).unwrap();
        match &f.value {
            BoundValue::Exact(v) => assert_eq!(v, &rat("1")),
            _ => panic!(),
        }
        // k does not divide 2n: enclosure around 4^(5/3)
        let f = prob_upper_full(5, 1, 3).unwrap();
        assert_in(&f.value.to_interval(), "10079/1000", "10080/1000");
    }

    #[test]
    fn constants_rows() {
        let rows = constants_table(10).unwrap();
        assert_eq!(rows.len(), 10);
        assert_in(&rows[0].variance_route, "57734/100000", "57736/100000");
        assert_in(&rows[0].packing_route, "25819/100000", "25820/100000");
        for row in &rows {
            assert_eq!(row.packing_route.lt(&row.variance_route), Some(true));
            assert!(row.variance_route.rel_width_below(40));
            assert!(row.packing_route.rel_width_below(40));
        }
    }

    #[test]
    fn tau_minimizes_growth_per_repetition() {
        for lam in ["1/10", "1/5", "3/10", "2/5", "49/100", "1/100"] {
            let h = binary_entropy(&rat(lam)).unwrap();
            let tau = tau_from_entropy(&h).unwrap();
            let g = |t: u64| -> Interval {
                h.scale(&(rat("2") * Rat::from_integer(Int::from(t))))
                    .exp2()
                    .scale(&Rat::new(Int::one(), Int::from(t)))
            };
            let at = g(tau);
            assert_ne!(g(tau + 1).lt(&at), Some(true), "lambda={lam}");
            if tau > 1 {
                assert_ne!(g(tau - 1).lt(&at), Some(true), "lambda={lam}");
            }
        }
    }

    #[test]
    fn ratio_of_lower_bounds_increases() {
        // variance_lower_small / pigeonhole_lower at m=1, k=1, lambda=1
        let mut prev: Option<Rat> = None;
        for n in 4..=64 {
            let v = variance_lower_small(n, 1).unwrap().value.to_interval();
            let p = pigeonhole_lower(&params(n, 1, 1, "1"))
                .unwrap()
                .value
                .to_interval();
            let ratio = v.div(&p).midpoint();
            if let Some(q) = prev {
                assert!(ratio > q, "ratio not increasing at n={n}");
            }
            prev = Some(ratio);
        }
    }
}
