use crate::{Int, Rat};
use num_bigint::BigUint;
use num_traits::{One, Zero};

/// Binomial coefficient `C(n, r)` by the rolling product; exact.
pub fn binomial(n: u32, r: u32) -> BigUint {
    if r > n {
        return BigUint::zero();
    }
    let r = r.min(n - r);
    let mut acc = BigUint::one();
    for i in 0..r {
        acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    acc
}

/// `r!` as an exact integer.
pub fn factorial(r: u32) -> BigUint {
    let mut acc = BigUint::one();
    for i in 2..=r {
        acc *= BigUint::from(i);
    }
    acc
}

/// Number of subsets of `[1, n]` with `min_size <= |A| <= floor(lambda*n)`,
/// i.e. the size of the subset family under the density cap.
pub fn family_size(n: u32, lambda: &Rat, min_size: u32) -> BigUint {
    let cap = cap_for(n, lambda);
    family_size_capped(n, min_size, cap)
}

/// Same with an explicit size cap.
pub fn family_size_capped(n: u32, min_size: u32, cap: u32) -> BigUint {
    let mut total = BigUint::zero();
    let mut i = min_size;
    while i <= cap.min(n) {
        total += binomial(n, i);
        if i == u32::MAX {
            break;
        }
        i += 1;
    }
    total
}

/// `floor(lambda * n)` without constructing full params.
pub fn cap_for(n: u32, lambda: &Rat) -> u32 {
    use num_traits::ToPrimitive;
    let ln = lambda * Rat::from_integer(Int::from(n));
    ln.floor().to_integer().to_u32().unwrap_or(0)
}
