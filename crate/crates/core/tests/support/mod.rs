//! Test-only oracles, independent of the library's computation paths.

#![allow(dead_code)]

use num_bigint::BigInt;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sqsum::lehmer::{is_valid_lehmer_pair, LehmerPair};

/// `a + b√R`, multiplied formally modulo `t^2 - R`.
#[derive(Clone, Debug, PartialEq)]
pub struct Surd {
    pub a: BigInt,
    pub b: BigInt,
}

/// `(α^m - β^m) / (α - β)` for `m = 0..=max`, as elements of `Z[√R]`, from
/// `s_m = √R s_{m-1} - Q s_{m-2}`.
pub fn normalized_power_differences(pair: &LehmerPair, max: u32) -> Vec<Surd> {
    let mut out = vec![
        Surd { a: BigInt::zero(), b: BigInt::zero() },
        Surd { a: BigInt::from(1), b: BigInt::zero() },
    ];
    for k in 2..=max as usize {
        let prev = &out[k - 1];
        let prev2 = &out[k - 2];
        // √R (a + b√R) = bR + a√R
        let next = Surd {
            a: &prev.b * &pair.r - &pair.q * &prev2.a,
            b: prev.a.clone() - &pair.q * &prev2.b,
        };
        out.push(next);
    }
    out.truncate(max as usize + 1);
    out
}

/// Lehmer terms through the symbolic route: odd `m` must land in `Z`,
/// even `m` in `√R Z` (division by `α + β = √R`). `None` if the structure
/// fails.
pub fn symbolic_lehmer_terms(pair: &LehmerPair, max: u32) -> Option<Vec<BigInt>> {
    normalized_power_differences(pair, max)
        .into_iter()
        .enumerate()
        .map(|(m, s)| {
            if m % 2 == 1 {
                s.b.is_zero().then_some(s.a)
            } else {
                s.a.is_zero().then_some(s.b)
            }
        })
        .collect()
}

/// `count` valid Lehmer pairs drawn from a fixed seed.
pub fn seeded_pairs(seed: u64, count: usize) -> Vec<LehmerPair> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    while out.len() < count {
        let pair = LehmerPair::new(rng.gen_range(-60i64..=60), rng.gen_range(-60i64..=60));
        if is_valid_lehmer_pair(&pair) && !out.contains(&pair) {
            out.push(pair);
        }
    }
    out
}

/// `sum_{j=1..d} (x+j)^2` by literal summation.
pub fn literal_sum(d: u32, x: &BigInt) -> BigInt {
    (1..=d).map(|j| (x + j) * (x + j)).sum()
}
