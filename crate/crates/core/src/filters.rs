//! Nonexistence lemmas as decision procedures.
//!
//! Each filter either returns an [`EliminationCertificate`] for a `(d, n)`
//! case or `None`. A certificate carries only witness data; [`verify`]
//! re-derives the claim from those fields without calling the filters.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::small_valuation;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FilterError {
    #[error("mod 8 square obstruction is only available for d = 6 or d = 8, got d = {0}")]
    NoMod8Obstruction(u32),
}

/// Proof that `sum_{j=1..d} (x+j)^2 = y^n` has no integer solutions.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EliminationCertificate {
    pub d: u32,
    /// The exponent this certificate was issued for.
    pub n: u32,
    /// Human-readable description of every exponent the witness covers.
    pub exponent_scope: String,
    pub witness: Witness,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    /// A prime `p = ±5 (mod 12)` with `ord_p(d)` not divisible by `n`.
    ZhangBai { p: u64, ord: u32 },
    /// `r = ord_2(d) >= 2`, `3 ∤ d`: solutions force `n | r - 1`.
    Dyadic { r: u32 },
    /// `r = ord_3(d) >= 2`, `d` odd: solutions force `n | r - 1`.
    Triadic { r: u32 },
    /// For `n = 2`: `den * (a(2x+b)^2 + c) = num * S(x)` turns `S = y^2` into
    /// `a(2x+b)^2 + c = 2z^2`, and the residue sets mod 8 are disjoint.
    Mod8 {
        square_coeff: u32,
        shift: u32,
        constant: u32,
        scale_num: u32,
        scale_den: u32,
        lhs_residues: Vec<u32>,
        rhs_residues: Vec<u32>,
    },
}

impl Witness {
    pub fn name(&self) -> &'static str {
        match self {
            Witness::ZhangBai { .. } => "zhang_bai",
            Witness::Dyadic { .. } => "dyadic",
            Witness::Triadic { .. } => "triadic",
            Witness::Mod8 { .. } => "mod8",
        }
    }
}

fn prime_divisors(mut d: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= d {
        if d.is_multiple_of(p) {
            out.push(p);
            while d.is_multiple_of(p) {
                d /= p;
            }
        }
        p += 1;
    }
    if d > 1 {
        out.push(d);
    }
    out
}

fn is_small_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|q| q * q <= p).all(|q| !p.is_multiple_of(q))
}

fn scope_not_dividing(k: u32) -> String {
    format!("every n >= 2 with n ∤ {k}")
}

/// Eliminates `(d, n)` when some prime `p = ±5 (mod 12)` divides `d` with
/// `ord_p(d) ≢ 0 (mod n)`.
pub fn zhang_bai(d: u32, n: u32) -> Option<EliminationCertificate> {
    if d == 0 || n < 2 {
        return None;
    }
    prime_divisors(u64::from(d))
        .into_iter()
        .filter(|p| matches!(p % 12, 5 | 7))
        .map(|p| (p, small_valuation(u64::from(d), p)))
        .find(|&(_, ord)| ord % n != 0)
        .map(|(p, ord)| EliminationCertificate {
            d,
            n,
            exponent_scope: scope_not_dividing(ord),
            witness: Witness::ZhangBai { p, ord },
        })
}

/// 2-adic valuation argument for `4 | d`, `3 ∤ d`.
///
/// Writing `D = d/4`, the sum equals `D((2x+d+1)^2 + (d^2-1)/3)` and the
/// bracket is `2 (mod 4)`, so `n ord_2(y) = r - 1`.
pub fn dyadic(d: u32, n: u32) -> Option<EliminationCertificate> {
    let r = dyadic_guard(d)?;
    if n < 2 || (r - 1) % n == 0 {
        return None;
    }
    Some(EliminationCertificate {
        d,
        n,
        exponent_scope: scope_not_dividing(r - 1),
        witness: Witness::Dyadic { r },
    })
}

fn dyadic_guard(d: u32) -> Option<u32> {
    if d == 0 || d.is_multiple_of(3) {
        return None;
    }
    let r = small_valuation(u64::from(d), 2);
    (r >= 2).then_some(r)
}

/// 3-adic valuation argument for `9 | d`, `d` odd.
///
/// With `D = d/3` the sum is `D(3(x+(d+1)/2)^2 + (d^2-1)/4)`, and the
/// bracket is never divisible by 3, so `n ord_3(y) = r - 1`.
pub fn triadic(d: u32, n: u32) -> Option<EliminationCertificate> {
    let r = triadic_guard(d)?;
    if n < 2 || (r - 1) % n == 0 {
        return None;
    }
    Some(EliminationCertificate {
        d,
        n,
        exponent_scope: scope_not_dividing(r - 1),
        witness: Witness::Triadic { r },
    })
}

fn triadic_guard(d: u32) -> Option<u32> {
    if d == 0 || d.is_multiple_of(2) {
        return None;
    }
    let r = small_valuation(u64::from(d), 3);
    (r >= 2).then_some(r)
}

fn mod8_lhs(a: u64, b: u64, c: u64, x: u64) -> u64 {
    (a * (2 * x + b).pow(2) + c) % 8
}

fn residues(values: impl Iterator<Item = u64>) -> Vec<u32> {
    let mut out: Vec<u32> = values.map(|v| v as u32).collect();
    out.sort_unstable();
    out.dedup();
    out
}

/// `n = 2` obstruction for `d = 6` and `d = 8`.
///
/// `d = 6`: `2 S = 3(2x+7)^2 + 35`, so `S = y^2` needs `3(2x+7)^2 + 35 = 2y^2`.
/// `d = 8`: `S = 2((2x+9)^2 + 21)`, so `y = 2Y` and `(2x+9)^2 + 21 = 2Y^2`.
/// The left side is always 6 mod 8, while `2z^2` is 0 or 2 mod 8.
pub fn mod8_square_obstruction(d: u32) -> Result<EliminationCertificate, FilterError> {
    let (a, c, scale_num, scale_den) = match d {
        6 => (3u32, 35u32, 2u32, 1u32),
        8 => (1, 21, 1, 2),
        _ => return Err(FilterError::NoMod8Obstruction(d)),
    };
    let b = d + 1;
    let lhs_residues = residues((0..8).map(|x| mod8_lhs(a.into(), b.into(), c.into(), x)));
    let rhs_residues = residues((0..8u64).map(|z| 2 * z * z % 8));
    Ok(EliminationCertificate {
        d,
        n: 2,
        exponent_scope: "n = 2".to_string(),
        witness: Witness::Mod8 {
            square_coeff: a,
            shift: b,
            constant: c,
            scale_num,
            scale_den,
            lhs_residues,
            rhs_residues,
        },
    })
}

/// Runs every filter that applies to `(d, n)` and returns the first
/// certificate, in the order Zhang-Bai, dyadic, triadic, mod 8.
pub fn eliminate(d: u32, n: u32) -> Option<EliminationCertificate> {
    zhang_bai(d, n)
        .or_else(|| dyadic(d, n))
        .or_else(|| triadic(d, n))
        .or_else(|| if n == 2 { mod8_square_obstruction(d).ok() } else { None })
}

/// Re-checks a certificate from its own fields.
///
/// Valuations, residues and the polynomial identity behind the mod 8
/// rewrite are recomputed from scratch; the filters are not consulted.
pub fn verify(cert: &EliminationCertificate) -> bool {
    let d = u64::from(cert.d);
    let n = cert.n;
    if d == 0 || n < 2 {
        return false;
    }
    match &cert.witness {
        Witness::ZhangBai { p, ord } => {
            is_small_prime(*p)
                && matches!(p % 12, 5 | 7)
                && d % p == 0
                && small_valuation(d, *p) == *ord
                && ord % n != 0
        }
        Witness::Dyadic { r } => {
            // Bracket (2x+d+1)^2 + (d^2-1)/3 must be exactly 2 mod 4.
            let bracket_ok = d % 3 != 0
                && (0..4).all(|x| ((2 * x + d + 1).pow(2) + (d * d - 1) / 3) % 4 == 2);
            *r >= 2 && small_valuation(d, 2) == *r && bracket_ok && (r - 1) % n != 0
        }
        Witness::Triadic { r } => {
            // Bracket 3((2x+d+1)/2)^2 + (d^2-1)/4, scaled by 4: 3(2x+d+1)^2 + d^2 - 1.
            // 4 is invertible mod 3 so divisibility by 3 is unaffected.
            let bracket_ok =
                d % 2 == 1 && (0..3).all(|x| (3 * (2 * x + d + 1).pow(2) + d * d - 1) % 3 != 0);
            *r >= 2 && small_valuation(d, 3) == *r && bracket_ok && (r - 1) % n != 0
        }
        Witness::Mod8 {
            square_coeff,
            shift,
            constant,
            scale_num,
            scale_den,
            lhs_residues,
            rhs_residues,
        } => {
            if n != 2 {
                return false;
            }
            let (a, b, c) = (u64::from(*square_coeff), u64::from(*shift), u64::from(*constant));
            let (num, den) = (u64::from(*scale_num), u64::from(*scale_den));
            // den * (4a x^2 + 4ab x + a b^2 + c) == num * (d x^2 + d(d+1) x + d(d+1)(2d+1)/6)
            let identity = den * 4 * a == num * d
                && den * 4 * a * b == num * d * (d + 1)
                && den * (a * b * b + c) == num * d * (d + 1) * (2 * d + 1) / 6
                && (num * d * (d + 1) * (2 * d + 1)) % 6 == 0;
            // (2, 1): lhs = 2 y^2. (1, 2): y^2 = 2 lhs forces y even, lhs = 2 (y/2)^2.
            let rewrite = matches!((num, den), (2, 1) | (1, 2));
            let lhs = residues((0..8).map(|x| mod8_lhs(a, b, c, x)));
            let rhs = residues((0..8u64).map(|z| 2 * z * z % 8));
            identity
                && rewrite
                && &lhs == lhs_residues
                && &rhs == rhs_residues
                && lhs.iter().all(|v| !rhs.contains(v))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::Integer;
    use crate::equation::consecutive_square_sum;

    #[test]
    fn zhang_bai_examples() {
        let c = zhang_bai(5, 3).unwrap();
        assert_eq!(c.witness, Witness::ZhangBai { p: 5, ord: 1 });
        let c = zhang_bai(7, 2).unwrap();
        assert_eq!(c.witness, Witness::ZhangBai { p: 7, ord: 1 });
        let c = zhang_bai(10, 4).unwrap();
        assert_eq!(c.witness, Witness::ZhangBai { p: 5, ord: 1 });
        assert_eq!(zhang_bai(6, 3), None);
        assert_eq!(zhang_bai(2, 2), None);
        // ord_5(25) = 2 is divisible by n = 2.
        assert_eq!(zhang_bai(25, 2), None);
        assert!(zhang_bai(25, 3).is_some());
    }

    #[test]
    fn dyadic_examples() {
        assert_eq!(dyadic(4, 2).unwrap().witness, Witness::Dyadic { r: 2 });
        assert_eq!(dyadic(8, 3).unwrap().witness, Witness::Dyadic { r: 3 });
        assert_eq!(dyadic(8, 2), None);
        assert!(dyadic(8, 4).is_some());
        assert_eq!(dyadic(2, 3), None);
        // 3 | 12 fails the guard even though ord_2(12) = 2.
        assert_eq!(dyadic(12, 3), None);
    }

    #[test]
    fn triadic_examples() {
        assert_eq!(triadic(9, 2).unwrap().witness, Witness::Triadic { r: 2 });
        assert!(triadic(9, 5).is_some());
        assert_eq!(triadic(6, 2), None);
        assert_eq!(triadic(18, 3), None);
        assert_eq!(triadic(27, 2), None);
        assert!(triadic(27, 3).is_some());
    }

    #[test]
    fn mod8_examples() {
        for d in [6, 8] {
            let c = mod8_square_obstruction(d).unwrap();
            match &c.witness {
                Witness::Mod8 { lhs_residues, rhs_residues, .. } => {
                    assert_eq!(lhs_residues, &vec![6]);
                    assert_eq!(rhs_residues, &vec![0, 2]);
                }
                w => panic!("unexpected witness {w:?}"),
            }
            assert!(verify(&c));
        }
        assert_eq!(mod8_square_obstruction(7), Err(FilterError::NoMod8Obstruction(7)));
    }

    #[test]
    fn mod8_residue_scan_for_six() {
        for x in 0u64..8 {
            assert_eq!((3 * (2 * x + 7).pow(2) + 35) % 8, 6);
        }
    }

    #[test]
    fn mod8_rewrite_matches_the_sum() {
        for x in -50i64..50 {
            let xb = Integer::from(x);
            let lhs6 = Integer::from(3 * (2 * x + 7).pow(2) + 35);
            assert_eq!(lhs6, consecutive_square_sum(6, &xb) * 2);
            let lhs8 = Integer::from((2 * x + 9).pow(2) + 21);
            assert_eq!(lhs8 * 2, consecutive_square_sum(8, &xb));
        }
    }

    #[test]
    fn tampered_certificates_are_rejected() {
        let mut c = zhang_bai(5, 3).unwrap();
        c.witness = Witness::ZhangBai { p: 5, ord: 2 };
        assert!(!verify(&c));
        let mut c = dyadic(8, 3).unwrap();
        c.n = 2;
        assert!(!verify(&c));
        let mut c = triadic(9, 2).unwrap();
        c.d = 27;
        c.n = 2;
        assert!(!verify(&c));
        let mut c = mod8_square_obstruction(6).unwrap();
        if let Witness::Mod8 { constant, .. } = &mut c.witness {
            *constant = 33;
        }
        assert!(!verify(&c));
        let mut c = mod8_square_obstruction(8).unwrap();
        c.d = 2;
        assert!(!verify(&c));
    }

    #[test]
    fn dyadic_premises_hold_under_guard() {
        for d in (4u64..=10_000).step_by(4).filter(|d| d % 3 != 0) {
            assert_eq!((d - 1) * (d + 1) / 3 % 4, 1, "d = {d}");
            for x in [-7i64, -2, -1, 0, 1, 5, 1000, 99_999] {
                let t = 2 * x + d as i64 + 1;
                assert_eq!(t * t % 4, 1, "d = {d}, x = {x}");
            }
        }
    }

    #[test]
    fn triadic_premise_holds_under_guard() {
        for d in (9u64..=10_000).step_by(9).filter(|d| d % 2 == 1) {
            for x in [-11i64, -3, -1, 0, 2, 7, 1000, 99_999] {
                // 4 * bracket = 3(2x+d+1)^2 + d^2 - 1, in integers.
                let t = (2 * x + d as i64 + 1) as i128;
                let scaled = 3 * t * t + (d as i128) * (d as i128) - 1;
                assert_eq!(scaled % 4, 0);
                assert_ne!((scaled / 4) % 3, 0, "d = {d}, x = {x}");
            }
        }
    }

    #[test]
    fn certificates_round_trip_as_json() {
        let c = mod8_square_obstruction(8).unwrap();
        let json = serde_json::to_value(&c).unwrap();
        assert_eq!(json["witness"]["kind"], "mod8");
        let back: EliminationCertificate = serde_json::from_value(json).unwrap();
        assert_eq!(back, c);
    }
}
