//! Exponents of the uniform bounds on the density fluctuation and on the
//! momentum, exact in rational arithmetic.

use crate::error::{invalid, Result};
use crate::scalar::Exact;

fn check_gamma<S: Exact>(gamma: &S) -> Result<()> {
    if !(*gamma > S::one() && *gamma < S::from_ratio(3, 1)) {
        return invalid(format!("gamma = {gamma:?} outside (1, 3)"));
    }
    Ok(())
}

/// `β(γ) = 2/(6 − γ)` for `γ < 2`, `1` for `γ ≥ 2`.
pub fn beta_exponent<S: Exact>(gamma: &S) -> Result<S> {
    check_gamma(gamma)?;
    let two = S::from_ratio(2, 1);
    if *gamma < two {
        Ok(two / (S::from_ratio(6, 1) - gamma.clone()))
    } else {
        Ok(S::one())
    }
}

/// `α(p) = 2(6 − p)/(p(6 − γ))` for `γ < 2`, `(6 − p)/(2p)` for `γ ≥ 2`,
/// on `p ∈ [2, 6]` (the endpoint `p = 6` gives the limit value 0).
pub fn alpha_exponent<S: Exact>(p: &S, gamma: &S) -> Result<S> {
    check_gamma(gamma)?;
    let (two, six) = (S::from_ratio(2, 1), S::from_ratio(6, 1));
    if !(*p >= two && *p <= six) {
        return invalid(format!("p = {p:?} outside [2, 6)"));
    }
    let top = six.clone() - p.clone();
    if *gamma < two {
        Ok(two * top / (p.clone() * (six - gamma.clone())))
    } else {
        Ok(top / (two * p.clone()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::Ratio;

    type Q = Ratio<i64>;

    #[test]
    fn table_values() {
        let two = Q::from_integer(2);
        let g15 = Q::new(3, 2);
        assert_eq!(beta_exponent(&two).unwrap(), Q::from_integer(1));
        assert_eq!(alpha_exponent(&two, &two).unwrap(), Q::from_integer(1));
        assert_eq!(beta_exponent(&g15).unwrap(), Q::new(4, 9));
        assert_eq!(alpha_exponent(&two, &g15).unwrap(), Q::new(8, 9));
        // α(2) = 4/(6 − γ) on the lower branch
        assert_eq!(alpha_exponent(&two, &g15).unwrap(), Q::from_integer(4) / (Q::from_integer(6) - g15));
    }

    #[test]
    fn endpoint_and_range() {
        for g in [Q::new(5, 4), Q::new(5, 2)] {
            assert_eq!(alpha_exponent(&Q::from_integer(6), &g).unwrap(), Q::from_integer(0));
            assert!(alpha_exponent(&Q::new(13, 2), &g).is_err());
            assert!(alpha_exponent(&Q::from_integer(1), &g).is_err());
        }
        assert!(beta_exponent(&Q::from_integer(3)).is_err());
        assert!(beta_exponent(&1.0f64).is_err());
    }

    #[test]
    fn branch_jump_at_two() {
        let below = beta_exponent(&Q::new(1999, 1000)).unwrap();
        assert!(below < Q::new(1, 2) + Q::new(1, 1000));
        assert_eq!(beta_exponent(&Q::from_integer(2)).unwrap(), Q::from_integer(1));
    }
}
