//! The `d = 2, n = 2` family: `(2x+3)^2 - 2y^2 = -1`, solved by odd powers of
//! the unit `1 + √2`.

use std::collections::BTreeMap;
use std::ops::Mul;

use num_integer::Integer as _;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::Integer;

/// `a + b√2`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Z2Element {
    pub a: Integer,
    pub b: Integer,
}

impl Z2Element {
    pub fn new(a: impl Into<Integer>, b: impl Into<Integer>) -> Self {
        Z2Element { a: a.into(), b: b.into() }
    }

    pub fn one() -> Self {
        Z2Element::new(1, 0)
    }

    /// `a^2 - 2b^2`.
    pub fn norm(&self) -> Integer {
        &self.a * &self.a - &self.b * &self.b * 2u32
    }

    pub fn pow(&self, mut k: u64) -> Self {
        let mut acc = Z2Element::one();
        let mut base = self.clone();
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            k >>= 1;
        }
        acc
    }
}

impl Mul for &Z2Element {
    type Output = Z2Element;

    fn mul(self, rhs: &Z2Element) -> Z2Element {
        Z2Element {
            a: &self.a * &rhs.a + &self.b * &rhs.b * 2u32,
            b: &self.a * &rhs.b + &self.b * &rhs.a,
        }
    }
}

/// `(1 + √2)^k`; negative `k` uses the inverse `√2 - 1`.
pub fn unit_power(k: i64) -> Z2Element {
    let base = if k >= 0 { Z2Element::new(1, 1) } else { Z2Element::new(-1, 1) };
    base.pow(k.unsigned_abs())
}

/// Member of the family `2x + 3 + y√2 = sign · (1 + √2)^(2r+1)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PellSolution {
    pub r: i64,
    pub sign: i8,
    #[serde(with = "crate::decimal")]
    pub x: Integer,
    #[serde(with = "crate::decimal")]
    pub y: Integer,
}

impl PellSolution {
    /// `(2x+3)^2 - 2y^2`; always `-1`.
    pub fn pell_value(&self) -> Integer {
        let t: Integer = &self.x * 2u32 + 3u32;
        &t * &t - &self.y * &self.y * 2u32
    }
}

/// Solution at index `r` on the branch `sign` (`+1` or `-1`).
pub fn pell_solution(r: i64, sign: i8) -> PellSolution {
    let sign = if sign < 0 { -1 } else { 1 };
    let unit = unit_power(2 * r + 1);
    let (t, y) = if sign > 0 { (unit.a, unit.b) } else { (-unit.a, -unit.b) };
    // t is odd: odd powers of 1 + √2 have odd rational part.
    debug_assert!(t.is_odd());
    let x = (t - 3u32) / 2u32;
    PellSolution { r, sign, x, y }
}

/// All family members with `|x| <= x_bound`, sorted by `x`, one record per
/// `(x, |y|)`.
///
/// Each `(x, |y|)` arises from four `(r, sign)` choices; indices `r >= 0`
/// with both signs already reach every member once.
pub fn enumerate_in_range(x_bound: &Integer) -> Vec<PellSolution> {
    let mut by_key: BTreeMap<(Integer, Integer), PellSolution> = BTreeMap::new();
    for r in 0.. {
        let branches = [pell_solution(r, 1), pell_solution(r, -1)];
        if branches.iter().all(|s| s.x.abs() > *x_bound) {
            break;
        }
        for s in branches {
            if s.x.abs() <= *x_bound {
                by_key.entry((s.x.clone(), s.y.abs())).or_insert(s);
            }
        }
    }
    by_key.into_values().collect()
}

/// The first `count` members ordered by `|2x+3|`, alternating branches.
pub fn first_members(count: usize) -> Vec<PellSolution> {
    (0..)
        .flat_map(|r| [pell_solution(r, 1), pell_solution(r, -1)])
        .take(count)
        .collect()
}

/// `(2x+3)^2 - 2y^2 = -1`.
pub fn is_family_member(x: &Integer, y: &Integer) -> bool {
    let t: Integer = x * 2u32 + 3u32;
    (&t * &t - y * y * 2u32) == -Integer::one() && !t.is_zero()
}
