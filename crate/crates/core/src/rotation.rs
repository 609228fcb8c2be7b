//! Roots of unity held exactly as rotations `a/d` of a full turn.

use std::f64::consts::FRAC_PI_2;
use std::fmt;
use std::ops::Mul;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{domain, Error, Result};
use crate::order::gcd;

/// `e^{2 pi i a/d}` with `0 <= a < d`, `gcd(a, d) = 1`, or the value zero.
///
/// The identity is `a/d = 0/1`. Zero is stored as a zero denominator so the
/// type stays two words wide in large memo tables.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct UnitRotation {
    num: u64,
    den: u64,
}

impl UnitRotation {
    pub const ZERO: UnitRotation = UnitRotation { num: 0, den: 0 };
    pub const ONE: UnitRotation = UnitRotation { num: 0, den: 1 };
    pub const MINUS_ONE: UnitRotation = UnitRotation { num: 1, den: 2 };

    /// Rotation by `a/d` of a turn, reduced. Panics if `d == 0`.
    pub fn new(a: u64, d: u64) -> UnitRotation {
        assert!(d > 0, "rotation denominator must be positive");
        Self::reduced(a as u128 % d as u128, d as u128)
    }

    /// `e^{2 pi i / d}`
    pub fn primitive(d: u64) -> UnitRotation {
        Self::new(1, d)
    }

    fn reduced(a: u128, d: u128) -> UnitRotation {
        let a = a % d;
        let g = gcd128(a, d);
        let (a, d) = (a / g, d / g);
        let den = u64::try_from(d).expect("rotation denominator overflowed u64");
        UnitRotation { num: a as u64, den }
    }

    pub fn is_zero(self) -> bool {
        self.den == 0
    }

    pub fn is_one(self) -> bool {
        self == Self::ONE
    }

    /// `None` for zero.
    pub fn fraction(self) -> Option<(u64, u64)> {
        (!self.is_zero()).then_some((self.num, self.den))
    }

    /// Multiplicative order of the root of unity; `None` for zero.
    pub fn order(self) -> Option<u64> {
        self.fraction().map(|(_, d)| d)
    }

    pub fn pow(self, k: u64) -> Result<UnitRotation> {
        if self.is_zero() {
            return if k == 0 {
                domain("zero to the power zero is undefined")
            } else {
                Ok(Self::ZERO)
            };
        }
        let d = self.den as u128;
        Ok(Self::reduced(self.num as u128 * (k as u128 % d), d))
    }

    /// Reduces the angle to the first octant with integer arithmetic before
    /// calling into trigonometry, so `d` in {1, 2, 4} gives exact values and
    /// conjugate/symmetric rotations give bitwise-symmetric results.
    pub fn to_complex(self) -> Complex64 {
        if self.is_zero() {
            return Complex64::new(0.0, 0.0);
        }
        let d = self.den as u128;
        let four_a = 4 * self.num as u128;
        let quadrant = four_a / d;
        let r = four_a % d;
        // angle within the quadrant is (pi/2) * r/d
        let (c, s) = if 2 * r <= d {
            let theta = FRAC_PI_2 * (r as f64 / d as f64);
            (theta.cos(), theta.sin())
        } else {
            let theta = FRAC_PI_2 * ((d - r) as f64 / d as f64);
            (theta.sin(), theta.cos())
        };
        let (re, im) = match quadrant {
            0 => (c, s),
            1 => (-s, c),
            2 => (-c, -s),
            _ => (s, -c),
        };
        Complex64::new(re, im)
    }
}

fn gcd128(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

impl Mul for UnitRotation {
    type Output = UnitRotation;

    fn mul(self, rhs: UnitRotation) -> UnitRotation {
        if self.is_zero() || rhs.is_zero() {
            return Self::ZERO;
        }
        if self.is_one() {
            return rhs;
        }
        if rhs.is_one() {
            return self;
        }
        let (d1, d2) = (self.den as u128, rhs.den as u128);
        let g = gcd(self.den, rhs.den) as u128;
        let l = d1 / g * d2;
        let a = self.num as u128 * (l / d1) + rhs.num as u128 * (l / d2);
        Self::reduced(a, l)
    }
}

pub fn rot_mul(a: UnitRotation, b: UnitRotation) -> UnitRotation {
    a * b
}

pub fn rot_pow(r: UnitRotation, k: u64) -> Result<UnitRotation> {
    r.pow(k)
}

impl fmt::Display for UnitRotation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.fraction() {
            None => f.write_str("0"),
            Some((a, d)) => write!(f, "{a}/{d}"),
        }
    }
}

impl fmt::Debug for UnitRotation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.fraction() {
            None => f.write_str("Zero"),
            Some((a, d)) => write!(f, "Rot({a},{d})"),
        }
    }
}

/// Parses `0` or `a/d`.
impl FromStr for UnitRotation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "0" {
            return Ok(Self::ZERO);
        }
        let bad = || Error::Domain(format!("expected `0` or `a/d`, got {s:?}"));
        let (a, d) = s.split_once('/').ok_or_else(bad)?;
        let a: u64 = a.parse().map_err(|_| bad())?;
        let d: u64 = d.parse().map_err(|_| bad())?;
        if d == 0 {
            return Err(bad());
        }
        Ok(Self::new(a, d))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn rot(a: u64, d: u64) -> UnitRotation {
        UnitRotation::new(a, d)
    }

    #[test]
    fn multiplication_examples() {
        assert_eq!(rot(1, 2) * rot(1, 3), rot(5, 6));
        assert_eq!(UnitRotation::ONE * rot(3, 7), rot(3, 7));
        assert_eq!(rot(1, 3) * rot(2, 3), UnitRotation::ONE);
        assert_eq!(UnitRotation::ZERO * rot(1, 3), UnitRotation::ZERO);
        assert_eq!(rot(1, 3) * UnitRotation::ZERO, UnitRotation::ZERO);
    }

    #[test]
    fn power_examples() {
        assert_eq!(rot(1, 3).pow(3).unwrap(), UnitRotation::ONE);
        assert_eq!(rot(1, 2).pow(5).unwrap(), rot(1, 2));
        assert_eq!(rot(1, 6).pow(4).unwrap(), rot(2, 3));
        assert_eq!(rot(3, 7).pow(0).unwrap(), UnitRotation::ONE);
        assert_eq!(UnitRotation::ZERO.pow(3).unwrap(), UnitRotation::ZERO);
        assert!(UnitRotation::ZERO.pow(0).is_err());
        assert_eq!(rot(1, u64::MAX).pow(u64::MAX).unwrap(), UnitRotation::ONE);
    }

    #[test]
    fn normalization() {
        assert_eq!(rot(2, 4), rot(1, 2));
        assert_eq!(rot(7, 7), UnitRotation::ONE);
        assert_eq!(rot(0, 9), UnitRotation::ONE);
        assert_eq!(rot(9, 6).fraction(), Some((1, 2)));
        assert_eq!(UnitRotation::ONE.fraction(), Some((0, 1)));
    }

    #[test]
    fn exact_complex_values() {
        assert_eq!(rot(1, 2).to_complex(), Complex64::new(-1.0, 0.0));
        assert_eq!(rot(1, 4).to_complex(), Complex64::new(0.0, 1.0));
        assert_eq!(rot(3, 4).to_complex(), Complex64::new(0.0, -1.0));
        assert_eq!(UnitRotation::ONE.to_complex(), Complex64::new(1.0, 0.0));
        assert_eq!(UnitRotation::ZERO.to_complex(), Complex64::new(0.0, 0.0));
    }

    fn ulp(x: f64) -> f64 {
        let x = x.abs();
        f64::from_bits(x.to_bits() + 1) - x
    }

    #[test]
    fn third_of_a_turn_within_one_ulp() {
        let z = rot(1, 3).to_complex();
        let oracle = (std::f64::consts::TAU / 3.0).sin_cos();
        assert!((z.re + 0.5).abs() <= ulp(0.5), "{}", z.re);
        assert!((z.im - 0.8660254037844387).abs() <= ulp(0.8660254037844387));
        assert!((z.im - oracle.0).abs() <= 2.0 * ulp(oracle.0));
    }

    #[test]
    fn roots_of_unity_cancel() {
        for d in 1..=200u64 {
            let sum: Complex64 = (0..d).map(|a| rot(a, d).to_complex()).sum();
            if d == 1 {
                assert_eq!(sum, Complex64::new(1.0, 0.0));
            } else {
                assert!(sum.norm() <= d as f64 * 1e-13, "d = {d}: {sum}");
            }
        }
    }

    #[test]
    fn unit_modulus() {
        for d in 1..60u64 {
            for a in 0..d {
                let n = rot(a, d).to_complex().norm();
                assert!((n - 1.0).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn text_round_trip() {
        for r in [UnitRotation::ZERO, UnitRotation::ONE, rot(5, 6)] {
            assert_eq!(r.to_string().parse::<UnitRotation>().unwrap(), r);
        }
        assert_eq!(rot(5, 6).to_string(), "5/6");
        assert!("1/0".parse::<UnitRotation>().is_err());
        assert!("x".parse::<UnitRotation>().is_err());
    }

    fn arb_rot() -> impl Strategy<Value = UnitRotation> {
        prop_oneof![
            1 => Just(UnitRotation::ZERO),
            12 => (1u64..5000).prop_flat_map(|d| (0..d, Just(d))).prop_map(|(a, d)| rot(a, d)),
        ]
    }

    proptest! {
        #[test]
        fn mul_is_commutative_and_associative(a in arb_rot(), b in arb_rot(), c in arb_rot()) {
            prop_assert_eq!(a * b, b * a);
            prop_assert_eq!((a * b) * c, a * (b * c));
            prop_assert_eq!(a * UnitRotation::ONE, a);
        }

        #[test]
        fn outputs_are_normalized(a in arb_rot(), b in arb_rot(), k in 1u64..1000) {
            for r in [a * b, a.pow(k).unwrap()] {
                if let Some((n, d)) = r.fraction() {
                    prop_assert!(n < d);
                    prop_assert_eq!(gcd(n, d), 1);
                    prop_assert_eq!(UnitRotation::new(n, d), r);
                }
            }
        }

        #[test]
        fn pow_agrees_with_repeated_mul(a in arb_rot(), k in 1u64..40) {
            let mut acc = a;
            for _ in 1..k {
                acc = acc * a;
            }
            prop_assert_eq!(a.pow(k).unwrap(), acc);
        }

        #[test]
        fn complex_mul_matches(a in arb_rot(), b in arb_rot()) {
            let lhs = (a * b).to_complex();
            let rhs = a.to_complex() * b.to_complex();
            prop_assert!((lhs - rhs).norm() < 1e-12);
        }
    }
}
