//! Scalar abstraction over the two exact coefficient rings in use:
//! arbitrary-precision integers and exact rationals. Everything downstream
//! (evaluation, verification, moments) is generic over this trait; there is
//! deliberately no floating-point instance.

use crate::{Int, Rat};
use num_bigint::{BigInt, Sign};
use num_traits::{One, Signed, Zero};
use std::hash::Hash;

pub trait Scalar: Clone + Eq + Ord + Hash + Send + Sync + std::fmt::Debug + 'static {
    fn ring_zero() -> Self;
    fn ring_one() -> Self;
    fn add_ref(&self, rhs: &Self) -> Self;
    fn sub_ref(&self, rhs: &Self) -> Self;
    fn mul_ref(&self, rhs: &Self) -> Self;
    fn is_zero_val(&self) -> bool;
    fn is_negative_val(&self) -> bool;

    /// Greatest integer `<= self`.
    fn floor_int(&self) -> Int;

    /// Exact embedding into the rationals.
    fn to_rat(&self) -> Rat;

    /// Appends a canonical, prefix-free byte encoding. Two values encode
    /// identically iff they are equal; used for deterministic chunk hashing.
    fn write_canonical_bytes(&self, out: &mut Vec<u8>);

    /// Parses the sequence-file string form: decimal integer, or `p/q`.
    fn parse_scalar(s: &str) -> Option<Self>;

    /// Inverse of `parse_scalar`; integers print as plain decimals,
    /// non-integer rationals as `p/q`.
    fn format_scalar(&self) -> String;
}

fn write_bigint_bytes(v: &BigInt, out: &mut Vec<u8>) {
    let (sign, mag) = v.to_bytes_le();
    out.push(match sign {
        Sign::Minus => 0,
        Sign::NoSign => 1,
        Sign::Plus => 2,
    });
    out.extend_from_slice(&(mag.len() as u64).to_le_bytes());
    out.extend_from_slice(&mag);
}

impl Scalar for Int {
    fn ring_zero() -> Self {
        BigInt::zero()
    }

    fn ring_one() -> Self {
        BigInt::one()
    }

    fn add_ref(&self, rhs: &Self) -> Self {
        self + rhs
    }

    fn sub_ref(&self, rhs: &Self) -> Self {
        self - rhs
    }

    fn mul_ref(&self, rhs: &Self) -> Self {
        self * rhs
    }

    fn is_zero_val(&self) -> bool {
        self.is_zero()
    }

    fn is_negative_val(&self) -> bool {
        self.is_negative()
    }

    fn floor_int(&self) -> Int {
        self.clone()
    }

    fn to_rat(&self) -> Rat {
        Rat::from_integer(self.clone())
    }

    fn write_canonical_bytes(&self, out: &mut Vec<u8>) {
        write_bigint_bytes(self, out);
    }

    fn parse_scalar(s: &str) -> Option<Self> {
        s.trim().parse().ok()
    }

    fn format_scalar(&self) -> String {
        self.to_string()
    }
}

impl Scalar for Rat {
    fn ring_zero() -> Self {
        Rat::zero()
    }

    fn ring_one() -> Self {
        Rat::one()
    }

    fn add_ref(&self, rhs: &Self) -> Self {
        self + rhs
    }

    fn sub_ref(&self, rhs: &Self) -> Self {
        self - rhs
    }

    fn mul_ref(&self, rhs: &Self) -> Self {
        self * rhs
    }

    fn is_zero_val(&self) -> bool {
        self.is_zero()
    }

    fn is_negative_val(&self) -> bool {
        self.is_negative()
    }

    fn floor_int(&self) -> Int {
        self.floor().to_integer()
    }

    fn to_rat(&self) -> Rat {
        self.clone()
    }

    fn write_canonical_bytes(&self, out: &mut Vec<u8>) {
        // Ratio keeps itself reduced with a positive denominator, so
        // numerator/denominator bytes are canonical.
        write_bigint_bytes(self.numer(), out);
        write_bigint_bytes(self.denom(), out);
    }

    fn parse_scalar(s: &str) -> Option<Self> {
        crate::params::parse_ratio(s).ok()
    }

    fn format_scalar(&self) -> String {
        if self.is_integer() {
            self.numer().to_string()
        } else {
            format!("{}/{}", self.numer(), self.denom())
        }
    }
}

/// FNV-1a over a byte slice. Pinned here (rather than relying on the
/// standard library's unspecified default hasher) because chunk assignment
/// must be stable across runs and toolchain versions.
pub fn fnv1a64(bytes: &[u8]) -> u64 {
    let mut h: u64 = 0xcbf29ce484222325;
    for &b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(0x100000001b3);
    }
    h
}
