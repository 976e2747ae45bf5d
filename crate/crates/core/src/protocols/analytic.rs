//! Closed-form output error rates for error-free distillation circuits.

use super::spec::ProtocolKind;
use crate::scalar::{complement, Scalar};

/// 7-to-1 output error given input error `p` on every resource state.
pub fn analytic_pout_7to1<T: Scalar>(p: &T) -> T {
    let q = complement(p);
    let seven = T::from_count(7);
    let p3q4 = p.powu(3) * q.powu(4);
    let p4q3 = p.powu(4) * q.powu(3);
    let num = seven.clone() * p3q4.clone() + p.powu(7);
    let den = p.powu(7) + q.powu(7) + seven.clone() * p4q3 + seven * p3q4;
    num / den
}

/// 15-to-1 output error given input error `p` on every resource state.
pub fn analytic_pout_15to1<T: Scalar>(p: &T) -> T {
    let two = T::from_count(2);
    let fifteen = T::from_count(15);
    let s = T::one() - two.clone() * p.clone();
    let s8 = s.powu(8);
    let num = T::one() - fifteen.clone() * s.powu(7) + fifteen.clone() * s8.clone() - s.powu(15);
    let den = two * (T::one() + fifteen * s8);
    num / den
}

/// Probability that every check passes (error-free circuit).
pub fn analytic_accept_7to1<T: Scalar>(p: &T) -> T {
    let q = complement(p);
    let seven = T::from_count(7);
    p.powu(7) + q.powu(7) + seven.clone() * q.powu(3) * p.powu(4) + seven * q.powu(4) * p.powu(3)
}

pub fn analytic_accept_15to1<T: Scalar>(p: &T) -> T {
    let s = T::one() - T::from_count(2) * p.clone();
    (T::one() + T::from_count(15) * s.powu(8)) / T::from_count(16)
}

pub fn analytic_pout<T: Scalar>(kind: ProtocolKind, p: &T) -> T {
    match kind {
        ProtocolKind::SevenToOne => analytic_pout_7to1(p),
        ProtocolKind::FifteenToOne => analytic_pout_15to1(p),
    }
}

pub fn analytic_accept<T: Scalar>(kind: ProtocolKind, p: &T) -> T {
    match kind {
        ProtocolKind::SevenToOne => analytic_accept_7to1(p),
        ProtocolKind::FifteenToOne => analytic_accept_15to1(p),
    }
}

/// Leading-order coefficient `c` in `p_out ≈ c p^3`.
pub fn leading_coefficient(kind: ProtocolKind) -> u64 {
    match kind {
        ProtocolKind::SevenToOne => 7,
        ProtocolKind::FifteenToOne => 35,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::exact;
    use num_traits::Zero;

    #[test]
    fn endpoints() {
        assert_eq!(analytic_pout_7to1(&0.0f64), 0.0);
        assert_eq!(analytic_pout_15to1(&0.0f64), 0.0);
        assert_eq!(analytic_pout_15to1(&0.5f64), 0.5);
        assert!(analytic_pout_15to1(&exact(1, 2)) == exact(1, 2));
        assert!(analytic_pout_7to1(&exact(0, 1)).is_zero());
    }

    #[test]
    fn values_at_one_percent() {
        // direct evaluation of the rational expressions
        let a = analytic_pout_7to1(&0.01f64);
        assert!((a - 7.2142e-6).abs() < 1e-9, "{a}");
        let b = analytic_pout_15to1(&0.01f64);
        assert!((b - 3.609e-5).abs() < 1e-8, "{b}");
        // the cubic term alone undershoots by about 3.1% at this p
        assert!((b / 3.5e-5 - 1.0).abs() < 0.035, "{b}");
        let d7 = 1.0 - analytic_accept_7to1(&0.01f64);
        assert!((d7 - 0.0679).abs() < 1e-4, "{d7}");
        let d15 = 1.0 - analytic_accept_15to1(&0.01f64);
        assert!((d15 - 0.1399).abs() < 1e-4, "{d15}");
    }

    #[test]
    fn leading_order_at_small_p() {
        let p = 1e-4f64;
        for kind in [ProtocolKind::SevenToOne, ProtocolKind::FifteenToOne] {
            let ratio = analytic_pout(kind, &p) / (leading_coefficient(kind) as f64 * p.powi(3));
            assert!((0.99..=1.01).contains(&ratio), "{kind:?} {ratio}");
        }
    }

    #[test]
    fn single_precision_agrees() {
        let a = analytic_pout_7to1(&0.1f32) as f64;
        let b = analytic_pout_7to1(&0.1f64);
        assert!((a - b).abs() < 1e-6);
    }
}
