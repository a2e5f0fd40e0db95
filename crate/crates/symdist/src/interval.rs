//! Directed-rounding interval arithmetic over exact rational endpoints.
//!
//! Every operation returns an interval guaranteed to contain the true real
//! result. Transcendental functions (log2, exp2) are evaluated by series in
//! fixed-point integer arithmetic with explicit tail bounds; roots go through
//! integer nth-root on a scaled numerator. The working precision is chosen so
//! that reported values are correct well past the 50 significant digits used
//! in output.

use crate::{Int, Rat};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Decimal digits of internal fixed-point precision for series evaluation.
pub const WORK_DIGITS: u32 = 120;

fn pow10_int(d: u32) -> Int {
    Int::from(10u32).pow(d)
}

fn div_ceil_int(a: &Int, b: &Int) -> Int {
    // b > 0 in every call site
    -((-a).div_floor(b))
}

/// floor(r * s) for s > 0.
fn fp_floor(r: &Rat, s: &Int) -> Int {
    (r.numer() * s).div_floor(r.denom())
}

/// ceil(r * s) for s > 0.
fn fp_ceil(r: &Rat, s: &Int) -> Int {
    let num = r.numer() * s;
    div_ceil_int(&num, r.denom())
}

/// Fixed-point enclosure of ln 2 = 2 atanh(1/3), scaled by `s`.
/// Series: 2 * sum_{j>=0} (1/3)^(2j+1) / (2j+1).
fn ln2_fp(s: &Int) -> (Int, Int) {
    let two_s: Int = s * 2;
    let mut lo = Int::zero();
    let mut hi = Int::zero();
    let mut p3 = Int::from(3u32);
    let mut j: u64 = 0;
    loop {
        let d = &p3 * Int::from(2 * j + 1);
        let t_lo = two_s.div_floor(&d);
        let t_hi = div_ceil_int(&two_s, &d);
        lo += &t_lo;
        hi += &t_hi;
        // consecutive terms shrink by more than 9x, so the tail after a
        // term of at most 8 units is below one unit
        if t_hi <= Int::from(8u32) {
            hi += 1;
            break;
        }
        p3 *= 9u32;
        j += 1;
    }
    (lo, hi)
}

/// Fixed-point enclosure of ln y for y in [1, 2), scaled by `s`.
/// Uses ln y = 2 atanh(t) with t = (y-1)/(y+1) in [0, 1/3].
fn ln_frac_fp(y: &Rat, s: &Int) -> (Int, Int) {
    let t = (y - Rat::one()) / (y + Rat::one());
    if t.is_zero() {
        return (Int::zero(), Int::zero());
    }
    let tl = fp_floor(&t, s);
    let th = fp_ceil(&t, s);
    let s2 = s * s;
    let tl2 = &tl * &tl;
    let th2 = &th * &th;
    let mut pow_lo = tl;
    let mut pow_hi = th;
    let mut lo = Int::zero();
    let mut hi = Int::zero();
    let mut j: u64 = 0;
    loop {
        let odd = Int::from(2 * j + 1);
        lo += (&pow_lo * 2u32).div_floor(&odd);
        let term_hi_num: Int = &pow_hi * 2u32;
        hi += div_ceil_int(&term_hi_num, &odd);
        // tail after term j is at most pow_hi/20 scaled units once j >= 1
        if pow_hi <= Int::from(20u32) && j >= 1 {
            hi += 1;
            break;
        }
        pow_lo = (&pow_lo * &tl2).div_floor(&s2);
        let ph_num = &pow_hi * &th2;
        pow_hi = div_ceil_int(&ph_num, &s2);
        j += 1;
    }
    (lo, hi)
}

/// Largest e with 2^e <= r, for r > 0.
fn ilog2_rat(r: &Rat) -> i64 {
    debug_assert!(r.is_positive());
    let p = r.numer().magnitude();
    let q = r.denom().magnitude();
    let mut e = p.bits() as i64 - q.bits() as i64;
    // r >= 2^e  <=>  p >= q << e (e >= 0), or p << -e >= q (e < 0)
    let ge = |e: i64| -> bool {
        if e >= 0 {
            *p >= (q << (e as usize))
        } else {
            (p << ((-e) as usize)) >= *q
        }
    };
    while !ge(e) {
        e -= 1;
    }
    while ge(e + 1) {
        e += 1;
    }
    e
}

fn pow2_rat(e: i64) -> Rat {
    if e >= 0 {
        Rat::from_integer(Int::one() << (e as usize))
    } else {
        Rat::new(Int::one(), Int::one() << ((-e) as usize))
    }
}

/// Directed bound on 2^x at a single rational point.
/// Splits x = f + u with f = floor(x), then 2^u = exp(u ln 2) by Taylor
/// series in fixed point; u ln 2 < 0.694 so the series converges fast.
fn exp2_point(x: &Rat, s: &Int, up: bool) -> Rat {
    let f = x.floor().to_integer();
    let u = x - Rat::from_integer(f.clone());
    let fe = f.to_i64().expect("exp2 exponent magnitude out of range");
    let scale = pow2_rat(fe);
    if u.is_zero() {
        return scale;
    }
    let (l2l, l2h) = ln2_fp(s);
    // v = u * ln2, scaled by s, rounded in the requested direction
    let v = if up {
        
        fp_ceil(&u, &l2h)
    } else {
        fp_floor(&u, &l2l)
    };
    let mut acc = s.clone();
    let mut term = s.clone();
    let mut j: u64 = 1;
    loop {
        let num = &term * &v;
        let den = s * Int::from(j);
        term = if up {
            div_ceil_int(&num, &den)
        } else {
            num.div_floor(&den)
        };
        acc += &term;
        // v/s < 0.7, so the tail after term j is below term_j once j >= 2
        if term <= Int::from(4u32) && j >= 2 {
            if up {
                acc += &term;
                acc += 1;
            }
            break;
        }
        j += 1;
    }
    let frac = Rat::new(acc, s.clone());
    scale * frac
}

/// A closed interval [lo, hi] with exact rational endpoints.
#[derive(Clone, Debug, PartialEq)]
pub struct Interval {
    lo: Rat,
    hi: Rat,
}

impl Interval {
    pub fn new(lo: Rat, hi: Rat) -> Self {
        debug_assert!(lo <= hi, "interval endpoints out of order");
        Interval { lo, hi }
    }

    pub fn exact(r: Rat) -> Self {
        Interval {
            lo: r.clone(),
            hi: r,
        }
    }

    pub fn from_integer(i: i64) -> Self {
        Interval::exact(Rat::from_integer(Int::from(i)))
    }

    pub fn lo(&self) -> &Rat {
        &self.lo
    }

    pub fn hi(&self) -> &Rat {
        &self.hi
    }

    pub fn width(&self) -> Rat {
        &self.hi - &self.lo
    }

    pub fn midpoint(&self) -> Rat {
        (&self.lo + &self.hi) / Rat::from_integer(Int::from(2))
    }

    pub fn contains(&self, r: &Rat) -> bool {
        self.lo <= *r && *r <= self.hi
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.lo.is_positive()
    }

    /// True relative width bound: width <= |midpoint| * 10^-digits.
    pub fn rel_width_below(&self, digits: u32) -> bool {
        let mid = self.midpoint();
        if mid.is_zero() {
            return self.width().is_zero();
        }
        let tol = mid.abs() / Rat::from_integer(pow10_int(digits));
        self.width() <= tol
    }

    pub fn add(&self, other: &Interval) -> Interval {
        Interval::new(&self.lo + &other.lo, &self.hi + &other.hi)
    }

    pub fn sub(&self, other: &Interval) -> Interval {
        Interval::new(&self.lo - &other.hi, &self.hi - &other.lo)
    }

    pub fn neg(&self) -> Interval {
        Interval::new(-self.hi.clone(), -self.lo.clone())
    }

    pub fn mul(&self, other: &Interval) -> Interval {
        let c = [
            &self.lo * &other.lo,
            &self.lo * &other.hi,
            &self.hi * &other.lo,
            &self.hi * &other.hi,
        ];
        let mut lo = c[0].clone();
        let mut hi = c[0].clone();
        for v in &c[1..] {
            if *v < lo {
                lo = v.clone();
            }
            if *v > hi {
                hi = v.clone();
            }
        }
        Interval::new(lo, hi)
    }

    /// Division; the divisor must not straddle zero.
    pub fn div(&self, other: &Interval) -> Interval {
        assert!(!other.contains_zero(), "interval division by zero");
        let r = Interval::new(Rat::one() / &other.hi, Rat::one() / &other.lo);
        self.mul(&r)
    }

    /// Multiply by an exact rational.
    pub fn scale(&self, r: &Rat) -> Interval {
        if r.is_negative() {
            Interval::new(&self.hi * r, &self.lo * r)
        } else {
            Interval::new(&self.lo * r, &self.hi * r)
        }
    }

    /// Integer power; negative exponents require a sign-definite interval.
    pub fn powi(&self, p: i32) -> Interval {
        if p < 0 {
            return Interval::exact(Rat::one()).div(&self.powi(-p));
        }
        let mut acc = Interval::exact(Rat::one());
        let mut base = self.clone();
        let mut e = p as u32;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// n-th root of a non-negative interval, n >= 1.
    pub fn nth_root(&self, n: u32) -> Interval {
        assert!(n >= 1);
        assert!(
            !self.lo.is_negative(),
            "nth_root requires a non-negative interval"
        );
        Interval::new(
            root_point(&self.lo, n, false),
            root_point(&self.hi, n, true),
        )
    }

    pub fn sqrt(&self) -> Interval {
        self.nth_root(2)
    }

    /// x^(p/q) for a positive interval: exact integer power then root.
    pub fn pow_ratio(&self, p: i64, q: u32) -> Interval {
        assert!(q >= 1);
        assert!(self.is_positive(), "pow_ratio requires a positive interval");
        assert!(p.unsigned_abs() <= i32::MAX as u64);
        let ip = self.powi(p.unsigned_abs() as i32);
        let r = ip.nth_root(q);
        if p < 0 {
            Interval::exact(Rat::one()).div(&r)
        } else {
            r
        }
    }

    /// Base-2 logarithm of a strictly positive interval.
    pub fn log2(&self) -> Interval {
        assert!(self.is_positive(), "log2 requires a positive interval");
        Interval::new(log2_point(&self.lo, false), log2_point(&self.hi, true))
    }

    /// 2^x.
    pub fn exp2(&self) -> Interval {
        let s = pow10_int(WORK_DIGITS);
        Interval::new(
            exp2_point(&self.lo, &s, false),
            exp2_point(&self.hi, &s, true),
        )
    }

    /// Enclosure of pi from a 100-decimal literal.
    pub fn pi() -> Interval {
        const PI_DIGITS: &str = "31415926535897932384626433832795028841971693993751\
                                 058209749445923078164062862089986280348253421170679";
        let digits: String = PI_DIGITS.chars().filter(|c| c.is_ascii_digit()).collect();
        let num: Int = digits.parse().expect("pi literal");
        let den = pow10_int(digits.len() as u32 - 1);
        Interval::new(Rat::new(num.clone(), den.clone()), Rat::new(num + 1, den))
    }

    /// Definitive strict comparison when the intervals do not overlap.
    pub fn lt(&self, other: &Interval) -> Option<bool> {
        if self.hi < other.lo {
            Some(true)
        } else if other.hi < self.lo {
            Some(false)
        } else {
            None
        }
    }

    /// Midpoint rendered to `sig` significant digits.
    pub fn to_decimal(&self, sig: usize) -> String {
        format_sig(&self.midpoint(), sig)
    }
}

fn log2_point(r: &Rat, up: bool) -> Rat {
    let e = ilog2_rat(r);
    let y = r / pow2_rat(e);
    let s = pow10_int(WORK_DIGITS);
    let (fl, fh) = ln_frac_fp(&y, &s);
    let (l2l, l2h) = ln2_fp(&s);
    // frac = ln(y)/ln(2) in [0, 1); bound the quotient in the chosen direction
    let frac = if up {
        Rat::new(fh, l2l)
    } else {
        Rat::new(fl, l2h)
    };
    Rat::from_integer(Int::from(e)) + frac
}

fn root_point(r: &Rat, n: u32, up: bool) -> Rat {
    if r.is_zero() {
        return Rat::zero();
    }
    let s = pow10_int(WORK_DIGITS);
    let sn = s.pow(n);
    // N = floor(r * s^n); u = floor(N^(1/n)) gives u/s <= r^(1/n) < (u+1)/s
    let num = r.numer() * &sn;
    let scaled = num.div_floor(r.denom());
    let mag = scaled.to_biguint().expect("root of non-negative value");
    let root = mag.nth_root(n);
    let u = Int::from(root.clone());
    if up {
        // exact perfect roots need no upward slack
        if &scaled * r.denom() == num && num_traits::Pow::pow(&root, n) == mag {
            return Rat::new(u, s);
        }
        Rat::new(u + 1, s)
    } else {
        Rat::new(u, s)
    }
}

/// Render a rational to `sig` significant digits (round half away from zero).
pub fn format_sig(r: &Rat, sig: usize) -> String {
    assert!(sig >= 1);
    if r.is_zero() {
        return "0".to_string();
    }
    let neg = r.is_negative();
    let a = r.abs();
    // d = floor(log10(a))
    let mut d = a.numer().to_string().len() as i64 - a.denom().to_string().len() as i64;
    let ge_pow10 = |d: i64| -> bool {
        if d >= 0 {
            *a.numer() >= a.denom() * pow10_int(d as u32)
        } else {
            a.numer() * pow10_int((-d) as u32) >= *a.denom()
        }
    };
    while !ge_pow10(d) {
        d -= 1;
    }
    while ge_pow10(d + 1) {
        d += 1;
    }
    // mantissa = round(a * 10^(sig-1-d)), an integer with exactly sig digits
    let shift = sig as i64 - 1 - d;
    let (num, den) = if shift >= 0 {
        (a.numer() * pow10_int(shift as u32), a.denom().clone())
    } else {
        (a.numer().clone(), a.denom() * pow10_int((-shift) as u32))
    };
    let mut mant = (num * 2u32 + &den).div_floor(&(den * 2u32));
    if mant >= pow10_int(sig as u32) {
        mant = mant.div_floor(&Int::from(10u32));
        d += 1;
    }
    let digits = mant.to_string();
    debug_assert_eq!(digits.len(), sig);
    let body = if (0..21).contains(&d) {
        let ip = d as usize + 1;
        if ip >= sig {
            let mut s = digits.clone();
            s.push_str(&"0".repeat(ip - sig));
            s
        } else {
            format!("{}.{}", &digits[..ip], &digits[ip..])
        }
    } else if (-4..0).contains(&d) {
        format!("0.{}{}", "0".repeat((-d - 1) as usize), digits)
    } else {
        let mut s = String::new();
        s.push_str(&digits[..1]);
        if sig > 1 {
            s.push('.');
            s.push_str(&digits[1..]);
        }
        s.push_str(&format!("e{}{}", if d >= 0 { "+" } else { "-" }, d.abs()));
        s
    };
    let mut out = body;
    // trim trailing zeros in a fractional part, keeping at least one digit
    if out.contains('.') && !out.contains('e') {
        while out.ends_with('0') {
            out.pop();
        }
        if out.ends_with('.') {
            out.pop();
        }
    }
    if neg {
        format!("-{}", out)
    } else {
        out
    }
}

/// Render a rational exactly when its decimal expansion terminates within
/// 64 fractional digits, otherwise round to `sig` significant digits.
pub fn format_rat_auto(r: &Rat, sig: usize) -> String {
    if r.denom().is_one() {
        return r.numer().to_string();
    }
    let mut den = r.denom().magnitude().clone();
    let mut twos = 0u32;
    while den.is_even() {
        den /= 2u32;
        twos += 1;
    }
    let mut fives = 0u32;
    let five = num_bigint::BigUint::from(5u32);
    while (&den % &five).is_zero() {
        den /= &five;
        fives += 1;
    }
    let frac_digits = twos.max(fives);
    if den.is_one() && frac_digits <= 64 {
        let neg = r.is_negative();
        let a = r.abs();
        let scaled = a.numer() * pow10_int(frac_digits) / a.denom();
        let s = scaled.to_string();
        let s = if s.len() <= frac_digits as usize {
            format!("{}{}", "0".repeat(frac_digits as usize + 1 - s.len()), s)
        } else {
            s
        };
        let ip = s.len() - frac_digits as usize;
        let mut out = format!("{}.{}", &s[..ip], &s[ip..]);
        while out.ends_with('0') {
            out.pop();
        }
        if out.ends_with('.') {
            out.pop();
        }
        if neg {
            out = format!("-{}", out);
        }
        out
    } else {
        format_sig(r, sig)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::parse_ratio;

    fn rat(s: &str) -> Rat {
        parse_ratio(s).unwrap()
    }

    fn dec(s: &str) -> Rat {
        // parse a decimal literal into an exact rational
        let neg = s.starts_with('-');
        let t = s.trim_start_matches('-');
        let (ip, fp) = match t.split_once('.') {
            Some((a, b)) => (a, b),
            None => (t, ""),
        };
        let num: Int = format!("{}{}", ip, fp).parse().unwrap();
        let den = pow10_int(fp.len() as u32);
        let r = Rat::new(num, den);
        if neg {
            -r
        } else {
            r
        }
    }

    /// The enclosure lies within 10^-digits of a reference constant that is
    /// itself only quoted to ~40 decimals.
    fn tight_around(i: &Interval, k: &Rat, digits: u32) -> bool {
        let tol = Rat::new(Int::one(), pow10_int(digits));
        i.lo() >= &(k - &tol) && i.hi() <= &(k + &tol)
    }

    #[test]
    fn log2_brackets_known_values() {
        let x = Interval::exact(rat("1024"));
        let l = x.log2();
        assert!(l.contains(&rat("10")));
        assert!(l.rel_width_below(100));

        let three = Interval::exact(rat("3")).log2();
        // log2(3) = 1.5849625007211561814537389439478...
        let k = dec("1.5849625007211561814537389439478165087598144076924");
        assert!(tight_around(&three, &k, 45));
    }

    #[test]
    fn exp2_brackets_known_values() {
        let x = Interval::exact(rat("3"));
        let e = x.exp2();
        assert!(e.contains(&rat("8")));

        let h = Interval::exact(rat("1/2")).exp2();
        // 2^(1/2) = 1.4142135623730950488016887242096980785696...
        let k = dec("1.4142135623730950488016887242096980785696");
        assert!(tight_around(&h, &k, 38));
        assert!(h.rel_width_below(100));

        let neg = Interval::exact(rat("-2")).exp2();
        assert!(neg.contains(&rat("1/4")));
    }

    #[test]
    fn roots_bracket_known_values() {
        let two = Interval::exact(rat("2"));
        let r = two.sqrt();
        let k = dec("1.4142135623730950488016887242096980785696");
        assert!(tight_around(&r, &k, 38));
        assert!(r.rel_width_below(110));

        let c = Interval::exact(rat("27")).nth_root(3);
        assert!(c.contains(&rat("3")));
    }

    #[test]
    fn pi_digits() {
        let p = Interval::pi();
        let k = dec("3.1415926535897932384626433832795028841972");
        assert!(tight_around(&p, &k, 38));
        assert!(p.rel_width_below(95));
    }

    #[test]
    fn ln2_fixed_point_enclosure() {
        let s = pow10_int(60);
        let (lo, hi) = ln2_fp(&s);
        let l = Rat::new(lo, s.clone());
        let h = Rat::new(hi, s);
        let known = dec("0.6931471805599453094172321214581765680755");
        let band = Interval::new(l.clone(), h.clone());
        assert!(tight_around(&band, &known, 38));
        assert!(&h - &l < rat("1/1000000000000000000000000000000000000000000000000"));
    }

    #[test]
    fn interval_ops() {
        let a = Interval::new(rat("1"), rat("2"));
        let b = Interval::new(rat("-3"), rat("4"));
        let m = a.mul(&b);
        assert_eq!(m.lo(), &rat("-6"));
        assert_eq!(m.hi(), &rat("8"));
        let p = b.powi(2);
        assert!(p.contains(&rat("0")) && p.contains(&rat("16")));
        let d = a.div(&Interval::new(rat("2"), rat("4")));
        assert_eq!(d.lo(), &rat("1/4"));
        assert_eq!(d.hi(), &rat("1"));
        assert_eq!(a.pow_ratio(3, 1).hi(), &rat("8"));
    }

    #[test]
    fn formatting() {
        assert_eq!(format_sig(&rat("1/3"), 5), "0.33333");
        assert_eq!(format_sig(&rat("2/3"), 5), "0.66667");
        assert_eq!(format_sig(&rat("28"), 5), "28");
        assert_eq!(format_sig(&rat("-1/8"), 3), "-0.125");
        assert_eq!(format_sig(&rat("12345678"), 3), "12300000");
        assert_eq!(format_sig(&dec("0.00001"), 2), "1.0e-5");
        assert_eq!(format_rat_auto(&rat("9535"), 50), "9535");
        assert_eq!(format_rat_auto(&rat("7/2"), 50), "3.5");
        assert_eq!(format_rat_auto(&rat("1/3"), 5), "0.33333");
    }

    #[test]
    fn ilog2_edges() {
        assert_eq!(ilog2_rat(&rat("1")), 0);
        assert_eq!(ilog2_rat(&rat("1/2")), -1);
        assert_eq!(ilog2_rat(&rat("3")), 1);
        assert_eq!(ilog2_rat(&rat("1023/1024")), -1);
        assert_eq!(ilog2_rat(&rat("1025/1024")), 0);
    }
}
