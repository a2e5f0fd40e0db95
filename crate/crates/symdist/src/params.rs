use crate::error::{Error, Result};
use crate::{Int, Rat};
use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Shared problem parameters: sequence length `n`, coordinate dimension `k`,
/// polynomial degree `m`, and the density `lambda` in `(0, 1]` that caps
/// subset sizes at `floor(lambda * n)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProblemParams {
    n: u32,
    k: u32,
    m: u32,
    lambda: Rat,
}

impl ProblemParams {
    pub fn new(n: u32, k: u32, m: u32, lambda: Rat) -> Result<Self> {
        if n < 1 {
            return Err(Error::DomainError("n must be >= 1".into()));
        }
        if k < 1 {
            return Err(Error::DomainError("k must be >= 1".into()));
        }
        if m < 1 {
            return Err(Error::DomainError("m must be >= 1".into()));
        }
        if !lambda.is_positive() || lambda > Rat::one() {
            return Err(Error::DomainError(format!(
                "lambda must lie in (0, 1], got {}",
                format_ratio(&lambda)
            )));
        }
        Ok(ProblemParams { n, k, m, lambda })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn lambda(&self) -> &Rat {
        &self.lambda
    }

    /// Largest admissible subset size, `floor(lambda * n)`.
    pub fn size_cap(&self) -> u32 {
        let ln = &self.lambda * Rat::from_integer(Int::from(self.n));
        ln.floor()
            .to_integer()
            .to_u32()
            .expect("size cap fits u32 because lambda <= 1")
    }

    /// Same parameters with a different sequence length.
    pub fn with_n(&self, n: u32) -> Result<Self> {
        ProblemParams::new(n, self.k, self.m, self.lambda.clone())
    }
}

/// Parses a rational parameter written as `p/q`, as a bare integer `p`, or
/// as a decimal string like `3.5` or `-0.25`.
pub fn parse_ratio(s: &str) -> Result<Rat> {
    let s = s.trim();
    if let Some((ip, fp)) = s.split_once('.') {
        let (negative, ip_mag) = match ip.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, ip.strip_prefix('+').unwrap_or(ip)),
        };
        if fp.is_empty()
            || !fp.chars().all(|c| c.is_ascii_digit())
            || !ip_mag.chars().all(|c| c.is_ascii_digit())
        {
            return Err(Error::Parse(format!("bad decimal literal {s:?}")));
        }
        let int_mag: BigInt = if ip_mag.is_empty() {
            BigInt::zero()
        } else {
            ip_mag
                .parse()
                .map_err(|_| Error::Parse(format!("bad decimal literal {s:?}")))?
        };
        let frac: BigInt = fp
            .parse()
            .map_err(|_| Error::Parse(format!("bad decimal literal {s:?}")))?;
        let den = BigInt::from(10).pow(fp.len() as u32);
        let mag = int_mag * &den + frac;
        let signed = if negative { -mag } else { mag };
        return Ok(Rat::new(signed, den));
    }
    let (num, den) = match s.split_once('/') {
        Some((p, q)) => (p.trim(), q.trim()),
        None => (s, "1"),
    };
    let p: BigInt = num
        .parse()
        .map_err(|_| Error::Parse(format!("bad rational numerator in {s:?}")))?;
    let q: BigInt = den
        .parse()
        .map_err(|_| Error::Parse(format!("bad rational denominator in {s:?}")))?;
    if q.is_zero() {
        return Err(Error::Parse(format!("zero denominator in {s:?}")));
    }
    Ok(Rat::new(p, q))
}

/// Formats a rational as `p/q` (always with explicit denominator, so the
/// output is unambiguous and round-trips through `parse_ratio`).
pub fn format_ratio(r: &Rat) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lam(p: i64, q: i64) -> Rat {
        Rat::new(Int::from(p), Int::from(q))
    }

    #[test]
    fn size_cap_floors() {
        let p = ProblemParams::new(10, 1, 2, lam(1, 2)).unwrap();
        assert_eq!(p.size_cap(), 5);
        let p = ProblemParams::new(10, 1, 2, lam(3, 10)).unwrap();
        assert_eq!(p.size_cap(), 3);
        let p = ProblemParams::new(21, 1, 2, lam(3, 10)).unwrap();
        assert_eq!(p.size_cap(), 6);
        let p = ProblemParams::new(7, 1, 1, lam(1, 1)).unwrap();
        assert_eq!(p.size_cap(), 7);
        // floor(1/3 * 3) = 1 exactly, not a float artifact
        let p = ProblemParams::new(3, 1, 2, lam(1, 3)).unwrap();
        assert_eq!(p.size_cap(), 1);
    }

    #[test]
    fn lambda_domain() {
        assert!(ProblemParams::new(5, 1, 1, lam(0, 1)).is_err());
        assert!(ProblemParams::new(5, 1, 1, lam(3, 2)).is_err());
        assert!(ProblemParams::new(5, 1, 1, lam(-1, 2)).is_err());
        assert!(ProblemParams::new(5, 1, 1, lam(1, 1)).is_ok());
    }

    #[test]
    fn ratio_round_trip() {
        for s in ["1/2", "3/10", "1/1", "7/3"] {
            let r = parse_ratio(s).unwrap();
            assert_eq!(format_ratio(&r), s);
        }
        assert_eq!(parse_ratio("1").unwrap(), lam(1, 1));
        assert_eq!(parse_ratio(" 2/4 ").unwrap(), lam(1, 2));
        assert!(parse_ratio("1/0").is_err());
        assert!(parse_ratio("x/2").is_err());
    }

    #[test]
    fn decimal_literals() {
        assert_eq!(parse_ratio("3.5").unwrap(), lam(7, 2));
        assert_eq!(parse_ratio("-0.25").unwrap(), lam(-1, 4));
        assert_eq!(parse_ratio(".5").unwrap(), lam(1, 2));
        assert_eq!(parse_ratio("9535.7431640625").unwrap(), lam(9764601, 1024));
        assert!(parse_ratio("3.").is_err());
        assert!(parse_ratio("3.x").is_err());
    }
}
