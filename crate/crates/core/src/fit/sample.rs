use alloc::vec::Vec;

use crate::beew::Region;
use crate::error::{Error, Result};

/// Bivariate observations split into ties (`I0`), `x1 < x2` (`I1`) and
/// `x1 > x2` (`I2`).
#[derive(Debug, Clone, PartialEq)]
pub struct ClassifiedSample {
    pairs: Vec<(f64, f64)>,
    tie_eps: f64,
    ties: Vec<usize>,
    lower: Vec<usize>,
    upper: Vec<usize>,
}

/// Partitions `pairs` with the tie rule `|x1 − x2| ≤ tie_eps · max(1, |x1|)`.
///
/// Every coordinate must be finite and positive; the first offending row
/// (zero-based) is reported.
pub fn classify(pairs: &[(f64, f64)], tie_eps: f64) -> Result<ClassifiedSample> {
    if pairs.is_empty() {
        return Err(Error::NoData);
    }
    if !(tie_eps >= 0.0) {
        return Err(Error::domain("tie_eps", tie_eps, ">= 0"));
    }
    let mut ties = Vec::new();
    let mut lower = Vec::new();
    let mut upper = Vec::new();
    for (row, &(x1, x2)) in pairs.iter().enumerate() {
        let valid = |x: f64| x.is_finite() && x > 0.0;
        if !valid(x1) || !valid(x2) {
            return Err(Error::NonPositiveObservation { row, x1, x2 });
        }
        match Region::classify(x1, x2, tie_eps) {
            Region::Diagonal => ties.push(row),
            Region::X1Less => lower.push(row),
            Region::X2Less => upper.push(row),
        }
    }
    Ok(ClassifiedSample {
        pairs: pairs.to_vec(),
        tie_eps,
        ties,
        lower,
        upper,
    })
}

impl ClassifiedSample {
    pub fn pairs(&self) -> &[(f64, f64)] {
        &self.pairs
    }

    pub fn tie_eps(&self) -> f64 {
        self.tie_eps
    }

    pub fn n(&self) -> usize {
        self.pairs.len()
    }

    pub fn n0(&self) -> usize {
        self.ties.len()
    }

    pub fn n1(&self) -> usize {
        self.lower.len()
    }

    pub fn n2(&self) -> usize {
        self.upper.len()
    }

    /// Row indices in `I0`.
    pub fn tie_rows(&self) -> &[usize] {
        &self.ties
    }

    /// Row indices in `I1` (`x1 < x2`).
    pub fn lower_rows(&self) -> &[usize] {
        &self.lower
    }

    /// Row indices in `I2` (`x1 > x2`).
    pub fn upper_rows(&self) -> &[usize] {
        &self.upper
    }

    /// Common value of a tied pair; rounded ties use the midpoint.
    pub(crate) fn tie_value(&self, row: usize) -> f64 {
        let (x1, x2) = self.pairs[row];
        0.5 * (x1 + x2)
    }

    pub(crate) fn region_of(&self, row: usize) -> Region {
        let (x1, x2) = self.pairs[row];
        Region::classify(x1, x2, self.tie_eps)
    }

    /// Same data with the columns exchanged.
    pub fn swapped(&self) -> ClassifiedSample {
        ClassifiedSample {
            pairs: self.pairs.iter().map(|&(a, b)| (b, a)).collect(),
            tie_eps: self.tie_eps,
            ties: self.ties.clone(),
            lower: self.upper.clone(),
            upper: self.lower.clone(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classify_examples() {
        let s = classify(&[(1.0, 1.0), (1.0, 2.0), (3.0, 2.0)], 0.0).unwrap();
        assert_eq!((s.n0(), s.n1(), s.n2(), s.n()), (1, 1, 1, 3));
        assert_eq!(s.tie_rows(), &[0]);
        assert_eq!(s.lower_rows(), &[1]);
        assert_eq!(s.upper_rows(), &[2]);
        let s = classify(&[(1.0, 1.0000001)], 1e-6).unwrap();
        assert_eq!(s.n0(), 1);
        assert_eq!(classify(&[], 0.0), Err(Error::NoData));
    }

    #[test]
    fn rejects_nonpositive_rows() {
        let err = classify(&[(1.0, 2.0), (0.5, 0.0)], 0.0).unwrap_err();
        assert_eq!(
            err,
            Error::NonPositiveObservation {
                row: 1,
                x1: 0.5,
                x2: 0.0
            }
        );
        assert!(classify(&[(f64::NAN, 1.0)], 0.0).is_err());
        assert!(classify(&[(1.0, 1.0)], -1.0).is_err());
    }

    #[test]
    fn swap_exchanges_off_diagonal_sets() {
        let s = classify(&[(1.0, 1.0), (1.0, 2.0), (3.0, 2.0), (4.0, 5.0)], 0.0).unwrap();
        let t = s.swapped();
        assert_eq!((t.n0(), t.n1(), t.n2()), (1, 1, 2));
        assert_eq!(t.pairs()[1], (2.0, 1.0));
    }
}
