//! The sum `(x+1)^2 + ... + (x+d)^2` as a quadratic in `x`, and verified
//! solutions of `sum = y^n`.

use std::cmp::Ordering;
use std::fmt;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::Integer;

/// Range of `d` covered by the verification pipeline.
pub const D_MIN: u32 = 2;
pub const D_MAX: u32 = 10;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EquationError {
    #[error("d = {0} is outside [{D_MIN}, {D_MAX}]")]
    DOutOfRange(u32),
    #[error("exponent n = {0} must be at least 2")]
    ExponentTooSmall(u32),
    #[error("({d}, {x}, {y}, {n}) does not satisfy the equation")]
    NotASolution { d: u32, x: Integer, y: Integer, n: u32 },
}

/// A `(d, n)` pair within the scope of the equation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EquationInstance {
    d: u32,
    n: u32,
}

impl EquationInstance {
    pub fn new(d: u32, n: u32) -> Result<Self, EquationError> {
        check_d(d)?;
        if n < 2 {
            return Err(EquationError::ExponentTooSmall(n));
        }
        Ok(EquationInstance { d, n })
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn n(&self) -> u32 {
        self.n
    }
}

fn check_d(d: u32) -> Result<(), EquationError> {
    if (D_MIN..=D_MAX).contains(&d) {
        Ok(())
    } else {
        Err(EquationError::DOutOfRange(d))
    }
}

/// `d x^2 + d(d+1) x + d(d+1)(2d+1)/6`, which equals `sum_{j=1..d} (x+j)^2`.
///
/// Accepts any `d >= 1`.
pub fn consecutive_square_sum(d: u32, x: &Integer) -> Integer {
    let d = u64::from(d);
    let linear = d * (d + 1);
    let constant = d * (d + 1) * (2 * d + 1) / 6;
    (x * d + linear) * x + constant
}

/// `consecutive_square_sum(d, x) == y^n`.
pub fn check_solution(d: u32, x: &Integer, y: &Integer, n: u32) -> bool {
    consecutive_square_sum(d, x) == y.pow(n)
}

/// The reflection `x -> -(x + d + 1)`, which permutes the `d` squares.
pub fn mirror(d: u32, x: &Integer) -> Integer {
    -(x + (d + 1))
}

/// A checked solution `(d, x, y, n)`.
///
/// Stored with `y >= 0`; for even `n` and nonzero `y` the flag `plus_minus`
/// records that `-y` is a solution too, so the pair is one record.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Solution {
    pub d: u32,
    #[serde(with = "crate::decimal")]
    pub x: Integer,
    #[serde(with = "crate::decimal")]
    pub y: Integer,
    pub n: u32,
    pub plus_minus: bool,
}

impl Solution {
    pub fn new(d: u32, x: Integer, y: Integer, n: u32) -> Result<Self, EquationError> {
        check_d(d)?;
        if n < 2 {
            return Err(EquationError::ExponentTooSmall(n));
        }
        if !check_solution(d, &x, &y, n) {
            return Err(EquationError::NotASolution { d, x, y, n });
        }
        let (y, plus_minus) = if n.is_multiple_of(2) {
            let plus_minus = !y.is_zero();
            (y.abs(), plus_minus)
        } else {
            (y, false)
        };
        Ok(Solution { d, x, y, n, plus_minus })
    }

    /// Ordering used for canonical lists: by `(d, n, x)`.
    pub fn canonical_cmp(&self, other: &Self) -> Ordering {
        (self.d, self.n, &self.x, &self.y).cmp(&(other.d, other.n, &other.x, &other.y))
    }
}

impl Ord for Solution {
    fn cmp(&self, other: &Self) -> Ordering {
        self.canonical_cmp(other)
    }
}

impl PartialOrd for Solution {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Solution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pm = if self.plus_minus { "±" } else { "" };
        write!(f, "(d={}, x={}, y={}{}, n={})", self.d, self.x, pm, self.y, self.n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn big(v: i64) -> Integer {
        Integer::from(v)
    }

    fn literal_sum(d: u32, x: &Integer) -> Integer {
        (1..=d).map(|j| (x + j).pow(2)).sum()
    }

    #[test]
    fn sum_examples() {
        assert_eq!(consecutive_square_sum(2, &big(118)), big(28561));
        assert_eq!(consecutive_square_sum(2, &big(-1)), big(1));
        assert_eq!(consecutive_square_sum(3, &big(0)), big(14));
        assert_eq!(consecutive_square_sum(1, &big(-1)), big(0));
    }

    #[test]
    fn check_examples() {
        assert!(check_solution(2, &big(-121), &big(13), 4));
        assert!(check_solution(2, &big(118), &big(-13), 4));
        assert!(!check_solution(3, &big(0), &big(2), 2));
    }

    #[test]
    fn mirror_examples() {
        assert_eq!(mirror(2, &big(118)), big(-121));
        assert_eq!(mirror(2, &big(-1)), big(-2));
        assert_eq!(mirror(7, &mirror(7, &big(12345))), big(12345));
    }

    #[test]
    fn solution_canonicalizes_sign() {
        let s = Solution::new(2, big(118), big(-13), 4).unwrap();
        assert_eq!(s.y, big(13));
        assert!(s.plus_minus);
        let odd = Solution::new(2, big(-1), big(1), 3).unwrap();
        assert!(!odd.plus_minus);
        assert!(matches!(
            Solution::new(3, big(0), big(2), 2),
            Err(EquationError::NotASolution { .. })
        ));
        assert_eq!(Solution::new(11, big(0), big(0), 2), Err(EquationError::DOutOfRange(11)));
        assert_eq!(Solution::new(2, big(-1), big(1), 1), Err(EquationError::ExponentTooSmall(1)));
    }

    #[test]
    fn solution_json_uses_decimal_strings() {
        let s = Solution::new(2, big(-121), big(13), 4).unwrap();
        let json = serde_json::to_string(&s).unwrap();
        assert_eq!(json, r#"{"d":2,"x":"-121","y":"13","n":4,"plus_minus":true}"#);
        let back: Solution = serde_json::from_str(&json).unwrap();
        assert_eq!(back, s);
    }

    #[test]
    fn instance_bounds() {
        assert!(EquationInstance::new(2, 2).is_ok());
        assert_eq!(EquationInstance::new(1, 2), Err(EquationError::DOutOfRange(1)));
        assert_eq!(EquationInstance::new(5, 1), Err(EquationError::ExponentTooSmall(1)));
    }

    proptest! {
        #[test]
        fn closed_form_matches_literal_sum(d in 1u32..=40, x in -1_000_000i64..=1_000_000) {
            let x = big(x);
            prop_assert_eq!(consecutive_square_sum(d, &x), literal_sum(d, &x));
        }

        #[test]
        fn completed_square_identity(d in 1u32..=40, x in -1_000_000i64..=1_000_000) {
            let x = big(x);
            let dd = big(i64::from(d));
            let t: Integer = &x * 2 + d + 1;
            let rhs = &dd * (t.pow(2) * 3 + &dd * &dd - 1);
            prop_assert_eq!(consecutive_square_sum(d, &x) * 12, rhs);
        }

        #[test]
        fn mirror_preserves_sum(d in 1u32..=40, x in -1_000_000i64..=1_000_000) {
            let x = big(x);
            prop_assert_eq!(consecutive_square_sum(d, &x), consecutive_square_sum(d, &mirror(d, &x)));
        }

        #[test]
        fn sum_positive_for_d_at_least_two(d in 2u32..=10, x in -1_000_000i64..=1_000_000) {
            prop_assert!(consecutive_square_sum(d, &big(x)) > big(0));
        }
    }
}
