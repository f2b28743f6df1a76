//! Schrödinger-admissible exponent pairs.

use crate::error::{invalid, Result};
use crate::scalar::{Exact, Exponent};

/// `(p, q)` with `2/p + d/q = d/2`, `2 ≤ p, q ≤ ∞`, `(p, q, d) ≠ (2, ∞, 2)`.
#[derive(Debug, Clone, PartialEq)]
pub struct AdmissiblePair<S> {
    pub p: Exponent<S>,
    pub q: Exponent<S>,
    pub d: u32,
}

impl<S: Exact> AdmissiblePair<S> {
    pub fn new(p: Exponent<S>, q: Exponent<S>, d: u32) -> Result<Self> {
        if !is_admissible(&p, &q, d) {
            return invalid(format!("({}, {}, {d}) is not admissible", p.to_f64(), q.to_f64()));
        }
        Ok(Self { p, q, d })
    }
}

fn at_least_two<S: Exact>(e: &Exponent<S>) -> bool {
    match e {
        Exponent::Infinite => true,
        Exponent::Finite(v) => *v >= S::from_ratio(2, 1) || v.same(&S::from_ratio(2, 1)),
    }
}

/// Exponents outside `[2, ∞]` are reported as not admissible.
pub fn is_admissible<S: Exact>(p: &Exponent<S>, q: &Exponent<S>, d: u32) -> bool {
    if d == 0 || !at_least_two(p) || !at_least_two(q) {
        return false;
    }
    let two = S::from_ratio(2, 1);
    let dd = S::from_ratio(d as i64, 1);
    let lhs = two.clone() * p.reciprocal() + dd.clone() * q.reciprocal();
    if !lhs.same(&(dd / two.clone())) {
        return false;
    }
    let endpoint = d == 2 && q.is_infinite() && matches!(p, Exponent::Finite(v) if v.same(&two));
    !endpoint
}

/// Hölder conjugates `(p', q')`.
pub fn admissible_dual<S: Exact>(pair: &AdmissiblePair<S>) -> (Exponent<S>, Exponent<S>) {
    (pair.p.conjugate(), pair.q.conjugate())
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::Ratio;

    type Q = Ratio<i64>;

    fn fin(n: i64, d: i64) -> Exponent<Q> {
        Exponent::Finite(Q::new(n, d))
    }

    #[test]
    fn table() {
        assert!(is_admissible(&Exponent::<Q>::Infinite, &fin(2, 1), 3));
        assert!(is_admissible(&fin(2, 1), &fin(6, 1), 3));
        assert!(is_admissible(&fin(8, 3), &fin(4, 1), 3));
        assert!(!is_admissible(&fin(2, 1), &Exponent::Infinite, 2));
        assert!(!is_admissible(&fin(3, 2), &fin(6, 1), 3));
        assert!(is_admissible(&Exponent::Infinite, &Exponent::Finite(2.0f64), 2));
        assert!(is_admissible(&Exponent::Finite(8.0 / 3.0), &Exponent::Finite(4.0f64), 3));
    }

    #[test]
    fn dual_pair() {
        let pair = AdmissiblePair::new(fin(2, 1), fin(6, 1), 3).unwrap();
        let (p, q) = admissible_dual(&pair);
        assert_eq!(p, fin(2, 1));
        assert_eq!(q, fin(6, 5));
        let energy = AdmissiblePair::new(Exponent::Infinite, fin(2, 1), 3).unwrap();
        assert_eq!(admissible_dual(&energy).0, fin(1, 1));
        assert!(AdmissiblePair::new(fin(2, 1), fin(2, 1), 3).is_err());
    }
}
