use crate::error::{Error, Result};
use crate::params::ProblemParams;
use crate::scalar::Scalar;
use crate::{Int, Rat};

/// One sequence entry: a `k`-tuple of coordinates.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Element<T: Scalar>(pub Vec<T>);

impl<T: Scalar> Element<T> {
    pub fn arity(&self) -> usize {
        self.0.len()
    }
}

/// Evaluation result: one value per coordinate.
pub type EvalValue<T> = Vec<T>;

/// A finite sequence of `k`-dimensional entries together with its problem
/// parameters and the declared entry bound, if any.
///
/// Invariants enforced at construction: the number of entries equals
/// `params.n()`, every entry has arity `params.k()`, no coordinate is
/// negative, and when a bound is declared every coordinate is `<=` it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sequence<T: Scalar> {
    params: ProblemParams,
    elems: Vec<Element<T>>,
    bound: Option<T>,
}

/// Integer-valued sequence (the exact-distinctness setting).
pub type IntSequence = Sequence<Int>;
/// Rational-valued sequence (the real-spacing setting).
pub type RatSequence = Sequence<Rat>;

impl<T: Scalar> Sequence<T> {
    pub fn new(params: ProblemParams, elems: Vec<Element<T>>, bound: Option<T>) -> Result<Self> {
        if elems.len() != params.n() as usize {
            return Err(Error::DimensionMismatch {
                expected: params.n() as usize,
                got: elems.len(),
            });
        }
        let k = params.k() as usize;
        for e in &elems {
            if e.arity() != k {
                return Err(Error::DimensionMismatch {
                    expected: k,
                    got: e.arity(),
                });
            }
            for c in &e.0 {
                if c.is_negative_val() {
                    return Err(Error::DomainError(format!(
                        "negative coordinate {}",
                        c.format_scalar()
                    )));
                }
                if let Some(b) = &bound {
                    if c > b {
                        return Err(Error::DomainError(format!(
                            "coordinate {} exceeds declared bound {}",
                            c.format_scalar(),
                            b.format_scalar()
                        )));
                    }
                }
            }
        }
        Ok(Sequence {
            params,
            elems,
            bound,
        })
    }

    /// Convenience constructor for one-dimensional sequences.
    pub fn from_scalars(params: ProblemParams, vals: Vec<T>, bound: Option<T>) -> Result<Self> {
        let elems = vals.into_iter().map(|v| Element(vec![v])).collect();
        Sequence::new(params, elems, bound)
    }

    pub fn params(&self) -> &ProblemParams {
        &self.params
    }

    pub fn elements(&self) -> &[Element<T>] {
        &self.elems
    }

    /// Entry at a 1-based index.
    pub fn element(&self, index: u32) -> Result<&Element<T>> {
        if index < 1 || index > self.params.n() {
            return Err(Error::IndexOutOfRange {
                index,
                n: self.params.n(),
            });
        }
        Ok(&self.elems[(index - 1) as usize])
    }

    pub fn bound(&self) -> Option<&T> {
        self.bound.as_ref()
    }

    /// Largest coordinate appearing anywhere; `None` for an empty tuple set.
    pub fn max_coordinate(&self) -> Option<&T> {
        self.elems.iter().flat_map(|e| e.0.iter()).max()
    }

    /// A copy keeping only the entries at the given 1-based positions, with
    /// `n` shrunk to match. Used by the repair loop after element removal.
    pub fn restrict_to(&self, keep: &[u32]) -> Result<Sequence<T>> {
        let mut elems = Vec::with_capacity(keep.len());
        for &i in keep {
            elems.push(self.element(i)?.clone());
        }
        let params = self.params.with_n(keep.len() as u32)?;
        Sequence::new(params, elems, self.bound.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    fn params(n: u32, k: u32) -> ProblemParams {
        ProblemParams::new(n, k, 1, Rat::one()).unwrap()
    }

    #[test]
    fn shape_validation() {
        let p = params(2, 2);
        let good = Sequence::new(
            p.clone(),
            vec![
                Element(vec![Int::from(1), Int::from(2)]),
                Element(vec![Int::from(3), Int::from(4)]),
            ],
            None,
        );
        assert!(good.is_ok());
        let short = Sequence::new(
            p.clone(),
            vec![Element(vec![Int::from(1), Int::from(2)])],
            None,
        );
        assert!(matches!(short, Err(Error::DimensionMismatch { .. })));
        let ragged = Sequence::new(
            p.clone(),
            vec![
                Element(vec![Int::from(1)]),
                Element(vec![Int::from(3), Int::from(4)]),
            ],
            None,
        );
        assert!(matches!(ragged, Err(Error::DimensionMismatch { .. })));
        let negative = Sequence::new(
            p,
            vec![
                Element(vec![Int::from(-1), Int::from(2)]),
                Element(vec![Int::from(3), Int::from(4)]),
            ],
            None,
        );
        assert!(matches!(negative, Err(Error::DomainError(_))));
    }

    #[test]
    fn bound_enforced() {
        let p = params(2, 1);
        let over = Sequence::from_scalars(
            p.clone(),
            vec![Int::from(1), Int::from(9)],
            Some(Int::from(5)),
        );
        assert!(over.is_err());
        let ok = Sequence::from_scalars(p, vec![Int::from(1), Int::from(5)], Some(Int::from(5)));
        assert!(ok.is_ok());
    }

    #[test]
    fn restrict_keeps_order() {
        let p = params(4, 1);
        let s = Sequence::from_scalars(
            p,
            vec![Int::from(10), Int::from(20), Int::from(30), Int::from(40)],
            None,
        )
        .unwrap();
        let r = s.restrict_to(&[1, 3, 4]).unwrap();
        assert_eq!(r.params().n(), 3);
        assert_eq!(r.element(2).unwrap().0[0], Int::from(30));
    }
}
