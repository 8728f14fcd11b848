//! Exact big-integer utilities: valuations, integer roots, perfect-power
//! detection, primality and factorization.
//!
//! Everything here is a pure function over [`Integer`] values. No floating
//! point result is ever trusted without an exact integer comparison.

use std::sync::OnceLock;

use num_bigint::{BigInt, BigUint, RandBigInt, Sign};
use num_integer::Integer as _;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

/// Arbitrary-precision signed integer used throughout the crate.
pub type Integer = BigInt;

/// Seed used by every randomized routine unless the caller overrides it.
pub const DEFAULT_SEED: u64 = 0x5eed_0f5c_0ae5;

/// Primes below this bound are removed by trial division before rho starts.
pub const TRIAL_DIVISION_LIMIT: u32 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArithError {
    #[error("valuation of zero is undefined")]
    ZeroValuation,
    #[error("{0} is not prime")]
    NotPrime(Integer),
    #[error("root index must be at least 1")]
    ZeroRootIndex,
    #[error("cannot factor zero")]
    FactorZero,
}

/// Largest `e` with `p^e | n`.
pub fn padic_valuation(n: &Integer, p: &Integer) -> Result<u32, ArithError> {
    if n.is_zero() {
        return Err(ArithError::ZeroValuation);
    }
    if !is_prime(p) {
        return Err(ArithError::NotPrime(p.clone()));
    }
    let p = p.abs();
    let mut rest = n.abs();
    let mut e = 0;
    loop {
        let (q, r) = rest.div_rem(&p);
        if !r.is_zero() {
            return Ok(e);
        }
        rest = q;
        e += 1;
    }
}

/// Valuation for small machine integers; `p` is assumed prime.
pub(crate) fn small_valuation(mut n: u64, p: u64) -> u32 {
    debug_assert!(n != 0 && p >= 2);
    let mut e = 0;
    while n.is_multiple_of(p) {
        n /= p;
        e += 1;
    }
    e
}

/// Floor of the `n`-th root of a nonnegative machine integer.
///
/// The float estimate is only a starting point; the result is corrected by
/// exact `checked_pow` comparisons in both directions.
fn floor_root_u64(s: u64, n: u32) -> u64 {
    if s < 2 || n == 1 {
        return s;
    }
    if n >= 64 {
        return 1;
    }
    let mut r = (s as f64).powf(1.0 / n as f64) as u64;
    let fits = |r: u64| r.checked_pow(n).is_some_and(|v| v <= s);
    while r > 0 && !fits(r) {
        r -= 1;
    }
    while fits(r + 1) {
        r += 1;
    }
    r
}

/// Floor of the `n`-th root by integer Newton iteration, started above the
/// true root so that the sequence decreases monotonically onto the floor.
fn floor_root_big(s: &BigUint, n: u32) -> BigUint {
    if s.is_zero() || s.is_one() || n == 1 {
        return s.clone();
    }
    let bits = s.bits();
    let start_bits = bits.div_ceil(u64::from(n));
    let mut x = BigUint::one() << start_bits;
    let n_big = BigUint::from(n);
    let n_minus_1 = BigUint::from(n - 1);
    loop {
        let next = (&n_minus_1 * &x + s / x.pow(n - 1)) / &n_big;
        if next >= x {
            return x;
        }
        x = next;
    }
}

/// Floor of the `n`-th root of a nonnegative integer.
pub fn floor_root(s: &BigUint, n: u32) -> BigUint {
    match s.to_u64() {
        Some(small) => BigUint::from(floor_root_u64(small, n)),
        None => floor_root_big(s, n),
    }
}

/// Returns `y` with `y^n = s` exactly, or `None` when no integer root exists.
///
/// For even `n` the nonnegative root is returned; for odd `n` the root carries
/// the sign of `s`. Negative `s` with even `n` has no root.
pub fn exact_nth_root(s: &Integer, n: u32) -> Result<Option<Integer>, ArithError> {
    if n == 0 {
        return Err(ArithError::ZeroRootIndex);
    }
    if s.is_negative() && n.is_multiple_of(2) {
        return Ok(None);
    }
    let mag = s.magnitude();
    let root = match mag.to_u64() {
        Some(small) => {
            let r = floor_root_u64(small, n);
            if r.checked_pow(n) != Some(small) {
                return Ok(None);
            }
            BigUint::from(r)
        }
        None => {
            let r = floor_root_big(mag, n);
            if &r.pow(n) != mag {
                return Ok(None);
            }
            r
        }
    };
    let sign = if s.is_negative() { Sign::Minus } else { Sign::Plus };
    Ok(Some(BigInt::from_biguint(sign, root)))
}

/// One way of writing `S` as a perfect power.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PerfectPower {
    pub n: u32,
    /// Nonnegative for even `n`.
    pub root: Integer,
    /// `-root` is also an `n`-th root (even `n`, nonzero root).
    pub plus_minus: bool,
}

impl PerfectPower {
    fn new(n: u32, root: Integer) -> Self {
        let plus_minus = n.is_multiple_of(2) && !root.is_zero();
        PerfectPower { n, root, plus_minus }
    }
}

/// Every `(n, y)` with `2 <= n <= n_max` and `y^n = s`.
///
/// For `|s| >= 2` the exponent cannot exceed the bit length of `|s|`, so the
/// loop stops there.
pub fn perfect_power_exponents(s: &Integer, n_max: u32) -> Vec<PerfectPower> {
    if n_max < 2 {
        return Vec::new();
    }
    let mag = s.magnitude();
    if mag.is_zero() || mag.is_one() {
        return (2..=n_max)
            .filter(|n| !(s.is_negative() && n % 2 == 0))
            .map(|n| PerfectPower::new(n, s.clone()))
            .collect();
    }
    let top = n_max.min(u32::try_from(mag.bits()).unwrap_or(u32::MAX));
    (2..=top)
        .filter_map(|n| {
            exact_nth_root(s, n)
                .expect("n >= 2")
                .map(|root| PerfectPower::new(n, root))
        })
        .collect()
}

const SMALL_PRIMES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

fn mul_mod_u64(a: u64, b: u64, m: u64) -> u64 {
    ((u128::from(a) * u128::from(b)) % u128::from(m)) as u64
}

fn pow_mod_u64(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod_u64(acc, base, m);
        }
        base = mul_mod_u64(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin for 64-bit inputs; the first twelve primes are
/// a complete witness set below 3.3 * 10^24.
fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in SMALL_PRIMES {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for a in SMALL_PRIMES {
        let mut x = pow_mod_u64(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod_u64(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn miller_rabin_round(n: &BigUint, n_minus_1: &BigUint, d: &BigUint, s: u64, a: &BigUint) -> bool {
    let mut x = a.modpow(d, n);
    if x.is_one() || &x == n_minus_1 {
        return true;
    }
    for _ in 1..s {
        x = (&x * &x) % n;
        if &x == n_minus_1 {
            return true;
        }
    }
    false
}

/// Rounds with random bases beyond 64 bits; each round errs with probability
/// at most 1/4, so 64 rounds keep the error below 2^-128.
const RANDOM_MR_ROUNDS: usize = 64;

fn is_prime_big(n: &BigUint) -> bool {
    for p in SMALL_PRIMES {
        if (n % p).is_zero() {
            return false;
        }
    }
    let n_minus_1 = n - 1u32;
    let s = n_minus_1.trailing_zeros().expect("n > 1");
    let d = &n_minus_1 >> s;
    if !SMALL_PRIMES
        .iter()
        .all(|&a| miller_rabin_round(n, &n_minus_1, &d, s, &BigUint::from(a)))
    {
        return false;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(DEFAULT_SEED);
    let two = BigUint::from(2u32);
    (0..RANDOM_MR_ROUNDS).all(|_| {
        let a = rng.gen_biguint_range(&two, &n_minus_1);
        miller_rabin_round(n, &n_minus_1, &d, s, &a)
    })
}

/// True iff `|n|` is prime.
pub fn is_prime(n: &Integer) -> bool {
    let mag = n.magnitude();
    match mag.to_u64() {
        Some(small) => is_prime_u64(small),
        None => is_prime_big(mag),
    }
}

/// Work budget for [`factorize`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Effort {
    /// Total rho iterations allowed across all composite pieces.
    pub rho_steps: u64,
    pub seed: u64,
}

impl Effort {
    pub fn with_seed(seed: u64) -> Self {
        Effort { seed, ..Effort::default() }
    }
}

impl Default for Effort {
    fn default() -> Self {
        Effort { rho_steps: 2_000_000, seed: DEFAULT_SEED }
    }
}

/// Prime factorization of `|n|`, possibly partial.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    /// `(prime, multiplicity)`, primes strictly increasing.
    pub factors: Vec<(Integer, u32)>,
    /// Product of the pieces the budget could not split; 1 when complete.
    pub cofactor: Integer,
}

impl Factorization {
    pub fn is_complete(&self) -> bool {
        self.cofactor.is_one()
    }

    pub fn primes(&self) -> impl Iterator<Item = &Integer> {
        self.factors.iter().map(|(p, _)| p)
    }

    /// `prod p^e * cofactor`.
    pub fn reassemble(&self) -> Integer {
        self.factors
            .iter()
            .fold(self.cofactor.clone(), |acc, (p, e)| acc * p.pow(*e))
    }
}

fn small_primes() -> &'static [u32] {
    static PRIMES: OnceLock<Vec<u32>> = OnceLock::new();
    PRIMES.get_or_init(|| {
        let limit = TRIAL_DIVISION_LIMIT as usize;
        let mut composite = vec![false; limit + 1];
        let mut primes = Vec::new();
        for i in 2..=limit {
            if !composite[i] {
                primes.push(i as u32);
                let mut j = i * i;
                while j <= limit {
                    composite[j] = true;
                    j += i;
                }
            }
        }
        primes
    })
}

/// Brent's variant of Pollard rho. Returns a nontrivial factor of the odd
/// composite `n`, or `None` once `steps` is used up.
fn rho_split(n: &BigUint, rng: &mut ChaCha8Rng, steps: &mut u64) -> Option<BigUint> {
    const BATCH: u64 = 128;
    let one = BigUint::one();
    while *steps > 0 {
        let c = rng.gen_biguint_range(&one, n);
        let mut y = rng.gen_biguint_below(n);
        let mut r = 1u64;
        let mut q = BigUint::one();
        let mut g = BigUint::one();
        let mut x = y.clone();
        let mut ys = y.clone();
        let f = |v: &BigUint| (v * v + &c) % n;
        while g.is_one() {
            x = y.clone();
            for _ in 0..r {
                y = f(&y);
            }
            let mut k = 0;
            while k < r && g.is_one() {
                ys = y.clone();
                let m = BATCH.min(r - k);
                for _ in 0..m {
                    y = f(&y);
                    let diff = if x > y { &x - &y } else { &y - &x };
                    q = (q * diff) % n;
                }
                *steps = steps.saturating_sub(m);
                g = q.gcd(n);
                k += m;
                if *steps == 0 && g.is_one() {
                    return None;
                }
            }
            r *= 2;
        }
        if &g == n {
            // Batch overshot; redo it one step at a time.
            loop {
                ys = f(&ys);
                let diff = if x > ys { &x - &ys } else { &ys - &x };
                g = diff.gcd(n);
                if !g.is_one() {
                    break;
                }
            }
        }
        if &g != n {
            return Some(g);
        }
    }
    None
}

/// Factors `|n|`: trial division by primes below 10^6, then seeded rho.
///
/// When the budget runs out, unsplit composites go to the cofactor rather
/// than being reported as prime.
pub fn factorize(n: &Integer, effort: Effort) -> Result<Factorization, ArithError> {
    if n.is_zero() {
        return Err(ArithError::FactorZero);
    }
    let mut rest = n.magnitude().clone();
    let mut found: Vec<BigUint> = Vec::new();
    for &p in small_primes() {
        if rest.is_one() {
            break;
        }
        let p_big = BigUint::from(p);
        if &p_big * &p_big > rest {
            break;
        }
        loop {
            let (q, r) = rest.div_rem(&p_big);
            if !r.is_zero() {
                break;
            }
            found.push(p_big.clone());
            rest = q;
        }
    }

    let mut cofactor = BigUint::one();
    let mut rng = ChaCha8Rng::seed_from_u64(effort.seed);
    let mut steps = effort.rho_steps;
    let mut pending = vec![rest];
    while let Some(m) = pending.pop() {
        if m.is_one() {
            continue;
        }
        if is_prime(&BigInt::from(m.clone())) {
            found.push(m);
            continue;
        }
        if let Some(root) = perfect_square_root(&m) {
            pending.push(root.clone());
            pending.push(root);
            continue;
        }
        match rho_split(&m, &mut rng, &mut steps) {
            Some(f) => {
                let other = &m / &f;
                pending.push(f);
                pending.push(other);
            }
            None => cofactor *= m,
        }
    }

    found.sort();
    let mut factors: Vec<(Integer, u32)> = Vec::new();
    for p in found {
        let p = BigInt::from(p);
        match factors.last_mut() {
            Some((last, e)) if *last == p => *e += 1,
            _ => factors.push((p, 1)),
        }
    }
    Ok(Factorization { factors, cofactor: BigInt::from(cofactor) })
}

fn perfect_square_root(m: &BigUint) -> Option<BigUint> {
    let r = floor_root(m, 2);
    (&r * &r == *m).then_some(r)
}
