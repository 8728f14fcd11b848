//! The `d = 6`, odd prime exponent machinery.
//!
//! A solution of `X^2 + 105 = 6 y^p` yields `γ = u + v√-105` with `v = ±1`
//! and `3 | u`. Setting `α = γ/√6`, `β = γ̄/√6` gives a Lehmer pair with
//! `R = (α+β)^2 = 2u^2/3` and `Q = αβ = (u^2+105)/6`, and the solution forces
//! `ũ_p = ±1`, i.e. the pair is `p`-defective.
//!
//! Everything here works with the integer parameters `(R, Q)` only.

use std::ops::Mul;

use num_integer::Integer as _;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::{self, Effort, Integer};
use crate::par;

/// Exponents handled by the scan: the small primes plus the two candidates
/// left open below the primitive-divisor bound.
pub const SCAN_PRIMES: [u32; 4] = [3, 5, 7, 13];

/// Every Lehmer sequence term `ũ_m` with `m >= 30` has a primitive divisor.
pub const PRIMITIVE_DIVISOR_BOUND: u32 = 30;

/// Orders of roots of unity in a degree-4 field satisfy `φ(k) <= 4`, so
/// `k <= 12`.
const ROOT_OF_UNITY_ORDER_BOUND: u32 = 12;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LehmerError {
    #[error("γ = {u} + {v}√-105 needs v = ±1")]
    VNotUnit { u: Integer, v: Integer },
    #[error("u = {0} is not 3 mod 6 (need 3 | u and u odd)")]
    UNotThreeModSix(Integer),
    #[error("(R, Q) = ({r}, {q}) is not a Lehmer pair")]
    InvalidPair { r: Integer, q: Integer },
    #[error("index m must be at least 1")]
    ZeroIndex,
    #[error("p = {0} is not one of 3, 5, 7, 13")]
    UnsupportedPrime(u32),
    #[error("p = {0} is not 3 or 5")]
    NoPolynomialCheck(u32),
    #[error("could not finish factoring ũ_{m}: composite cofactor {cofactor}")]
    Indeterminate { m: u32, cofactor: Integer },
}

/// `u + v√-105`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QuadIntM105 {
    pub u: Integer,
    pub v: Integer,
}

impl QuadIntM105 {
    pub const D: i64 = -105;

    pub fn new(u: impl Into<Integer>, v: impl Into<Integer>) -> Self {
        QuadIntM105 { u: u.into(), v: v.into() }
    }

    /// `u^2 + 105 v^2`.
    pub fn norm(&self) -> Integer {
        &self.u * &self.u + &self.v * &self.v * 105u32
    }

    pub fn conjugate(&self) -> Self {
        QuadIntM105 { u: self.u.clone(), v: -&self.v }
    }

    pub fn pow(&self, mut k: u32) -> Self {
        let mut acc = QuadIntM105::new(1, 0);
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

impl Mul for &QuadIntM105 {
    type Output = QuadIntM105;

    fn mul(self, rhs: &QuadIntM105) -> QuadIntM105 {
        QuadIntM105 {
            u: &self.u * &rhs.u - &self.v * &rhs.v * 105u32,
            v: &self.u * &rhs.v + &self.v * &rhs.u,
        }
    }
}

/// Integer parameters of a Lehmer pair: `R = (α+β)^2`, `Q = αβ`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LehmerPair {
    #[serde(with = "crate::decimal")]
    pub r: Integer,
    #[serde(with = "crate::decimal")]
    pub q: Integer,
}

impl LehmerPair {
    pub fn new(r: impl Into<Integer>, q: impl Into<Integer>) -> Self {
        LehmerPair { r: r.into(), q: q.into() }
    }

    /// `(α^2 - β^2)^2 = R(R - 4Q)`.
    pub fn discriminant_factor(&self) -> Integer {
        &self.r * (&self.r - &self.q * 4u32)
    }
}

/// `R = 2u^2/3`, `Q = (u^2 + 105)/6` for `γ = u ± √-105`, `u ≡ 3 (mod 6)`.
pub fn gamma_to_pair(g: &QuadIntM105) -> Result<LehmerPair, LehmerError> {
    if g.v.abs() != Integer::one() {
        return Err(LehmerError::VNotUnit { u: g.u.clone(), v: g.v.clone() });
    }
    if g.u.mod_floor(&Integer::from(6)) != Integer::from(3) {
        return Err(LehmerError::UNotThreeModSix(g.u.clone()));
    }
    let u2 = &g.u * &g.u;
    Ok(LehmerPair {
        r: &u2 * 2u32 / 3u32,
        q: (u2 + 105u32) / 6u32,
    })
}

/// `ũ_0, ..., ũ_m` via the parity-split recurrence
/// `ũ_k = R ũ_{k-1} - Q ũ_{k-2}` (k odd), `ũ_k = ũ_{k-1} - Q ũ_{k-2}` (k even).
pub fn lehmer_terms(pair: &LehmerPair, m: u32) -> Vec<Integer> {
    let mut terms = Vec::with_capacity(m as usize + 1);
    terms.push(Integer::zero());
    if m == 0 {
        return terms;
    }
    terms.push(Integer::one());
    for k in 2..=m as usize {
        let prev = &terms[k - 1];
        let prev2 = &terms[k - 2];
        let next = if k % 2 == 1 {
            &pair.r * prev - &pair.q * prev2
        } else {
            prev - &pair.q * prev2
        };
        terms.push(next);
    }
    terms
}

/// `ũ_m`.
pub fn lehmer_term(pair: &LehmerPair, m: u32) -> Integer {
    lehmer_terms(pair, m).pop().expect("at least one term")
}

/// `R, Q` nonzero and coprime, `α ≠ β`, and `α/β` not a root of unity.
pub fn is_valid_lehmer_pair(pair: &LehmerPair) -> bool {
    if pair.r.is_zero() || pair.q.is_zero() || !pair.r.gcd(&pair.q).is_one() {
        return false;
    }
    // α = β: the sequence is defined through α - β, and α/β = 1.
    if pair.r == &pair.q * 4u32 {
        return false;
    }
    lehmer_terms(pair, ROOT_OF_UNITY_ORDER_BOUND)
        .iter()
        .skip(1)
        .all(|t| !t.is_zero())
}

/// Primes dividing `ũ_m` but not `R(R-4Q) · ũ_1 ⋯ ũ_{m-1}`.
///
/// Only `ũ_m` is factored; each of its primes is tested against the product
/// by divisibility.
pub fn primitive_divisors(
    pair: &LehmerPair,
    m: u32,
    effort: Effort,
) -> Result<Vec<Integer>, LehmerError> {
    if m == 0 {
        return Err(LehmerError::ZeroIndex);
    }
    if !is_valid_lehmer_pair(pair) {
        return Err(LehmerError::InvalidPair { r: pair.r.clone(), q: pair.q.clone() });
    }
    let terms = lehmer_terms(pair, m);
    let target = &terms[m as usize];
    if target.abs().is_one() {
        return Ok(Vec::new());
    }
    let factorization = arith::factorize(target, effort).expect("valid pairs have ũ_m ≠ 0");
    if !factorization.is_complete() {
        return Err(LehmerError::Indeterminate { m, cofactor: factorization.cofactor });
    }
    let modulus = terms[1..m as usize]
        .iter()
        .fold(pair.discriminant_factor(), |acc, t| acc * t);
    Ok(factorization
        .primes()
        .filter(|p| !modulus.is_multiple_of(p))
        .cloned()
        .collect())
}

/// `ũ_m` has no primitive divisor.
pub fn is_defective(pair: &LehmerPair, m: u32, effort: Effort) -> Result<bool, LehmerError> {
    primitive_divisors(pair, m, effort).map(|ps| ps.is_empty())
}

/// Result of scanning admissible `u` for `ũ_p = ±1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DefectScanReport {
    pub p: u32,
    pub u_bound: u64,
    pub scanned: u64,
    #[serde(with = "crate::decimal::vec")]
    pub violations: Vec<Integer>,
}

/// Admissible `u`: `u ≡ 3 (mod 6)`, `0 < |u| <= bound`, ascending.
pub fn admissible_u(bound: u64) -> Vec<i64> {
    let bound = i64::try_from(bound).unwrap_or(i64::MAX);
    let positive: Vec<i64> = (3..=bound).step_by(6).collect();
    positive
        .iter()
        .rev()
        .map(|u| -u)
        .chain(positive.iter().copied())
        .collect()
}

fn check_prime(p: u32) -> Result<(), LehmerError> {
    if SCAN_PRIMES.contains(&p) {
        Ok(())
    } else {
        Err(LehmerError::UnsupportedPrime(p))
    }
}

fn is_violation(u: i64, p: u32) -> bool {
    let pair = gamma_to_pair(&QuadIntM105::new(u, 1)).expect("admissible u");
    lehmer_term(&pair, p).abs().is_one()
}

fn scan_with(
    p: u32,
    u_bound: u64,
    map: impl FnOnce(&[i64]) -> Vec<bool>,
) -> Result<DefectScanReport, LehmerError> {
    check_prime(p)?;
    let us = admissible_u(u_bound);
    let flags = map(&us);
    let violations = us
        .iter()
        .zip(flags)
        .filter(|(_, hit)| *hit)
        .map(|(&u, _)| Integer::from(u))
        .collect();
    Ok(DefectScanReport { p, u_bound, scanned: us.len() as u64, violations })
}

/// Scans every admissible `u` with `|u| <= u_bound` for `ũ_p = ±1`, in
/// parallel when the `parallel` feature is on.
pub fn defect_scan(p: u32, u_bound: u64) -> Result<DefectScanReport, LehmerError> {
    scan_with(p, u_bound, |us| par::map_ordered(us, |&u| is_violation(u, p)))
}

/// Single-threaded [`defect_scan`].
pub fn defect_scan_serial(p: u32, u_bound: u64) -> Result<DefectScanReport, LehmerError> {
    scan_with(p, u_bound, |us| us.iter().map(|&u| is_violation(u, p)).collect())
}

/// `T_p(u) = ((u+√-105)^p - (u-√-105)^p) / (2√-105)` as coefficients of
/// `u^0, u^1, ..., u^(p-1)`.
pub fn thue_polynomial(p: u32) -> Vec<Integer> {
    let mut coeffs = vec![Integer::zero(); p as usize];
    let mut binom = Integer::one();
    let mut minus_105_pow = Integer::one();
    // C(p, j) u^(p-j) (-105)^((j-1)/2) for odd j.
    for j in 1..=p {
        binom = binom * (p - j + 1) / j;
        if j % 2 == 1 {
            coeffs[(p - j) as usize] = &binom * &minus_105_pow;
            minus_105_pow *= -105;
        }
    }
    coeffs
}

fn eval_poly(coeffs: &[Integer], u: &Integer) -> Integer {
    coeffs.iter().rev().fold(Integer::zero(), |acc, c| acc * u + c)
}

/// Analysis of `T_p(u) = target` through `w = u^2`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TargetAnalysis {
    #[serde(with = "crate::decimal")]
    pub target: Integer,
    /// Discriminant in `w` when the reduced equation is quadratic.
    #[serde(with = "crate::decimal::option", skip_serializing_if = "Option::is_none", default)]
    pub discriminant: Option<Integer>,
    /// Integer values of `w` solving the reduced equation.
    #[serde(with = "crate::decimal::vec")]
    pub w_solutions: Vec<Integer>,
    #[serde(with = "crate::decimal::vec")]
    pub integer_roots: Vec<Integer>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyCheckReport {
    pub p: u32,
    /// Coefficients of `T_p`, constant term first.
    #[serde(with = "crate::decimal::vec")]
    pub polynomial: Vec<Integer>,
    #[serde(with = "crate::decimal::vec")]
    pub targets: Vec<Integer>,
    pub analyses: Vec<TargetAnalysis>,
    #[serde(with = "crate::decimal::vec")]
    pub integer_roots: Vec<Integer>,
    /// Bound of the corroborating direct scan over `u`.
    pub scan_bound: u64,
    #[serde(with = "crate::decimal::vec")]
    pub scan_hits: Vec<Integer>,
}

impl PolyCheckReport {
    pub fn has_no_roots(&self) -> bool {
        self.integer_roots.is_empty() && self.scan_hits.is_empty()
    }
}

/// Scan bound used to corroborate the exact root analysis.
pub const POLY_SCAN_BOUND: u64 = 1000;

fn roots_from_w(w_solutions: &[Integer]) -> Vec<Integer> {
    let mut roots = Vec::new();
    for w in w_solutions {
        if let Ok(Some(r)) = arith::exact_nth_root(w, 2) {
            if r.is_zero() {
                roots.push(r);
            } else {
                roots.push(-&r);
                roots.push(r);
            }
        }
    }
    roots.sort();
    roots.dedup();
    roots
}

fn solve_in_w(w_coeffs: &[Integer], target: &Integer) -> TargetAnalysis {
    let mut shifted = w_coeffs.to_vec();
    shifted[0] -= target;
    let (discriminant, w_solutions) = match shifted.as_slice() {
        [c0, c1] => {
            let (w, rem) = (-c0).div_rem(c1);
            (None, if rem.is_zero() { vec![w] } else { Vec::new() })
        }
        [c0, c1, c2] => {
            let disc = c1 * c1 - c2 * c0 * 4u32;
            let mut ws = Vec::new();
            if let Ok(Some(s)) = arith::exact_nth_root(&disc, 2) {
                let denom: Integer = c2 * 2u32;
                for num in [-c1 - &s, -c1 + &s] {
                    let (w, rem) = num.div_rem(&denom);
                    if rem.is_zero() {
                        ws.push(w);
                    }
                }
                ws.sort();
                ws.dedup();
            }
            (Some(disc), ws)
        }
        _ => unreachable!("T_3 and T_5 are linear or quadratic in u^2"),
    };
    let integer_roots = roots_from_w(&w_solutions);
    TargetAnalysis { target: target.clone(), discriminant, w_solutions, integer_roots }
}

/// `T_p(u)` computed from `(u + √-105)^p` directly, without the expansion.
pub fn thue_value(p: u32, u: &Integer) -> Integer {
    QuadIntM105::new(u.clone(), 1).pow(p).v
}

/// Shows `T_p(u) = ±6^((p-1)/2)` has no integer solution for `p ∈ {3, 5}`.
///
/// The exact analysis substitutes `w = u^2` and solves the resulting linear
/// or quadratic equation; a direct scan over `|u| <= 1000` corroborates it.
pub fn small_prime_poly_check(p: u32) -> Result<PolyCheckReport, LehmerError> {
    if p != 3 && p != 5 {
        return Err(LehmerError::NoPolynomialCheck(p));
    }
    let polynomial = thue_polynomial(p);
    let w_coeffs: Vec<Integer> = polynomial.iter().step_by(2).cloned().collect();
    let six_pow = Integer::from(6).pow((p - 1) / 2);
    let targets = vec![six_pow.clone(), -six_pow];
    let analyses: Vec<TargetAnalysis> = targets.iter().map(|t| solve_in_w(&w_coeffs, t)).collect();
    let mut integer_roots: Vec<Integer> =
        analyses.iter().flat_map(|a| a.integer_roots.iter().cloned()).collect();
    integer_roots.sort();
    integer_roots.dedup();

    let bound = POLY_SCAN_BOUND as i64;
    let scan_hits = (-bound..=bound)
        .map(Integer::from)
        .filter(|u| targets.contains(&thue_value(p, u)))
        .collect();
    debug_assert!((-3..=3).all(|u: i64| {
        let u = Integer::from(u);
        eval_poly(&polynomial, &u) == thue_value(p, &u)
    }));

    Ok(PolyCheckReport {
        p,
        polynomial,
        targets,
        analyses,
        integer_roots,
        scan_bound: POLY_SCAN_BOUND,
        scan_hits,
    })
}
