//! Exact integer arithmetic on magnitudes below 2^127.
//!
//! Everything here is a pure function of its inputs. The only shared state is
//! the table of small primes used for trial division, built once on first use.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use crate::error::{Error, Result};

/// Exclusive upper bound on every integer accepted by this module.
pub const INPUT_LIMIT: u128 = 1 << 127;

/// Trial division bound used by [`factor`] before switching to Pollard rho.
pub const TRIAL_BOUND: u32 = 100_000;

fn check_range(n: u128) -> Result<()> {
    if n >= INPUT_LIMIT {
        return Err(Error::OutOfRange {
            value: n.to_string(),
        });
    }
    Ok(())
}

pub fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

#[inline]
pub fn add_mod(a: u128, b: u128, m: u128) -> u128 {
    let (s, overflow) = a.overflowing_add(b);
    if overflow || s >= m {
        s.wrapping_sub(m)
    } else {
        s
    }
}

/// `a * b mod m` without overflow for any `m > 0`.
pub fn mul_mod(a: u128, b: u128, m: u128) -> u128 {
    debug_assert!(m > 0);
    if m <= u64::MAX as u128 {
        return (a % m) * (b % m) % m;
    }
    let (mut a, mut b) = (a % m, b % m);
    let mut acc = 0;
    while b > 0 {
        if b & 1 == 1 {
            acc = add_mod(acc, a, m);
        }
        a = add_mod(a, a, m);
        b >>= 1;
    }
    acc
}

pub fn pow_mod(base: u128, mut exp: u128, m: u128) -> u128 {
    if m == 1 {
        return 0;
    }
    if m > u64::MAX as u128 && m & 1 == 1 && m < INPUT_LIMIT {
        let mont = Montgomery::new(m);
        return mont.leave(mont.pow(mont.enter(base), exp));
    }
    let mut base = base % m;
    let mut acc = 1;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Full 256-bit product as `(high, low)`.
#[inline]
fn mul_wide(a: u128, b: u128) -> (u128, u128) {
    const LO: u128 = u64::MAX as u128;
    let (a1, a0) = (a >> 64, a & LO);
    let (b1, b0) = (b >> 64, b & LO);
    let p00 = a0 * b0;
    let p01 = a0 * b1;
    let p10 = a1 * b0;
    let p11 = a1 * b1;
    let mid = (p00 >> 64) + (p01 & LO) + (p10 & LO);
    let lo = (p00 & LO) | ((mid & LO) << 64);
    let hi = p11 + (p01 >> 64) + (p10 >> 64) + (mid >> 64);
    (hi, lo)
}

/// Montgomery arithmetic for odd moduli in `(2^64, 2^127)`.
#[derive(Debug, Clone, Copy)]
struct Montgomery {
    m: u128,
    neg_inv: u128,
    r2: u128,
}

impl Montgomery {
    fn new(m: u128) -> Self {
        debug_assert!(m & 1 == 1 && m < INPUT_LIMIT);
        // Newton iteration doubles the number of correct low bits; m*m = 1 mod 8.
        let mut inv = m;
        for _ in 0..7 {
            inv = inv.wrapping_mul(2u128.wrapping_sub(m.wrapping_mul(inv)));
        }
        let r1 = (u128::MAX % m + 1) % m;
        Montgomery {
            m,
            neg_inv: inv.wrapping_neg(),
            r2: mul_mod(r1, r1, m),
        }
    }

    #[inline]
    fn redc(&self, hi: u128, lo: u128) -> u128 {
        let u = lo.wrapping_mul(self.neg_inv);
        let (th, tl) = mul_wide(u, self.m);
        let (_, carry) = lo.overflowing_add(tl);
        let r = hi + th + carry as u128;
        if r >= self.m {
            r - self.m
        } else {
            r
        }
    }

    #[inline]
    fn mul(&self, a: u128, b: u128) -> u128 {
        let (hi, lo) = mul_wide(a, b);
        self.redc(hi, lo)
    }

    fn enter(&self, a: u128) -> u128 {
        self.mul(a % self.m, self.r2)
    }

    fn leave(&self, a: u128) -> u128 {
        self.redc(0, a)
    }

    fn pow(&self, mut base: u128, mut exp: u128) -> u128 {
        let mut acc = self.enter(1);
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }
}

/// Modular ring used by Miller-Rabin and Pollard rho, so both share one code
/// path for word-sized and double-word moduli.
trait Ring {
    fn modulus(&self) -> u128;
    fn mul(&self, a: u128, b: u128) -> u128;
    fn enter(&self, a: u128) -> u128;
    fn one(&self) -> u128;

    fn add(&self, a: u128, b: u128) -> u128 {
        add_mod(a, b, self.modulus())
    }

    fn pow(&self, mut base: u128, mut exp: u128) -> u128 {
        let mut acc = self.one();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }
}

struct Word(u128);

impl Ring for Word {
    fn modulus(&self) -> u128 {
        self.0
    }
    #[inline]
    fn mul(&self, a: u128, b: u128) -> u128 {
        a * b % self.0
    }
    fn enter(&self, a: u128) -> u128 {
        a % self.0
    }
    fn one(&self) -> u128 {
        1 % self.0
    }
}

impl Ring for Montgomery {
    fn modulus(&self) -> u128 {
        self.m
    }
    #[inline]
    fn mul(&self, a: u128, b: u128) -> u128 {
        Montgomery::mul(self, a, b)
    }
    fn enter(&self, a: u128) -> u128 {
        self.enter(a)
    }
    fn one(&self) -> u128 {
        self.enter(1)
    }
}

/// Strong probable-prime test of odd `n > 2` to base `a`.
fn strong_probable_prime<R: Ring>(ring: &R, a: u128) -> bool {
    let n = ring.modulus();
    let a = a % n;
    if a == 0 {
        return true;
    }
    let n1 = n - 1;
    let s = n1.trailing_zeros();
    let d = n1 >> s;
    let one = ring.one();
    let minus_one = ring.enter(n1);
    let mut x = ring.pow(ring.enter(a), d);
    if x == one || x == minus_one {
        return true;
    }
    for _ in 1..s {
        x = ring.mul(x, x);
        if x == minus_one {
            return true;
        }
        if x == one {
            return false;
        }
    }
    false
}

const SMALL_PRIMES: [u128; 15] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47];

/// Bases making Miller-Rabin exact below 2^64 (Sinclair's set).
const BASES_64: [u128; 7] = [2, 325, 9375, 28178, 450775, 9780504, 1795265022];

/// The first 13 primes are an exact base set below this bound (Sorenson–Webster).
const BOUND_13_PRIMES: u128 = 3_317_044_064_679_887_385_961_981;

/// Deterministic primality test for `n < 2^127`.
///
/// Below 2^64 and below 3.3e24 proven base sets are used. Above that the
/// Miller test runs every base up to `2 (ln n)^2`, which is exact under GRH.
pub fn is_prime(n: u128) -> Result<bool> {
    check_range(n)?;
    Ok(is_prime_unchecked(n))
}

pub(crate) fn is_prime_unchecked(n: u128) -> bool {
    if n < 2 {
        return false;
    }
    for p in SMALL_PRIMES {
        if n == p {
            return true;
        }
        if n.is_multiple_of(p) {
            return false;
        }
    }
    if n < 53 * 53 {
        return true;
    }
    if n <= u64::MAX as u128 {
        let ring = Word(n);
        return BASES_64.iter().all(|&a| strong_probable_prime(&ring, a));
    }
    let ring = Montgomery::new(n);
    if n < BOUND_13_PRIMES {
        return SMALL_PRIMES[..13]
            .iter()
            .all(|&a| strong_probable_prime(&ring, a));
    }
    let ln = (n as f64).ln();
    let bach = (2.0 * ln * ln).floor() as u128;
    (2..=bach).all(|a| strong_probable_prime(&ring, a))
}

fn small_prime_table() -> &'static [u32] {
    static TABLE: OnceLock<Vec<u32>> = OnceLock::new();
    TABLE.get_or_init(|| simple_sieve(TRIAL_BOUND as usize))
}

fn simple_sieve(limit: usize) -> Vec<u32> {
    if limit < 2 {
        return Vec::new();
    }
    let mut composite = vec![false; limit + 1];
    let mut primes = Vec::new();
    for i in 2..=limit {
        if composite[i] {
            continue;
        }
        primes.push(i as u32);
        let mut j = i * i;
        while j <= limit {
            composite[j] = true;
            j += i;
        }
    }
    primes
}

/// Prime factorization of a positive integer.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Factorization {
    value: u128,
    factors: Vec<(u128, u32)>,
}

impl Factorization {
    pub fn value(&self) -> u128 {
        self.value
    }

    /// `(prime, exponent)` pairs with strictly increasing primes.
    pub fn factors(&self) -> &[(u128, u32)] {
        &self.factors
    }

    pub fn primes(&self) -> impl Iterator<Item = u128> + '_ {
        self.factors.iter().map(|&(p, _)| p)
    }

    /// Exponent of `q`, zero when `q` does not divide the value.
    pub fn exponent_of(&self, q: u128) -> u32 {
        self.factors
            .binary_search_by_key(&q, |&(p, _)| p)
            .map(|i| self.factors[i].1)
            .unwrap_or(0)
    }

    pub fn is_one(&self) -> bool {
        self.factors.is_empty()
    }
}

pub fn factor(n: u128) -> Result<Factorization> {
    check_range(n)?;
    if n == 0 {
        return Err(Error::Zero);
    }
    let mut found = BTreeMap::new();
    let mut rem = n;
    let mut exhausted = true;
    for &p in small_prime_table() {
        let p = p as u128;
        if p * p > rem {
            exhausted = false;
            break;
        }
        if rem.is_multiple_of(p) {
            let mut e = 0;
            while rem.is_multiple_of(p) {
                rem /= p;
                e += 1;
            }
            found.insert(p, e);
        }
    }
    if rem > 1 {
        if exhausted {
            split(rem, 1, &mut found);
        } else {
            *found.entry(rem).or_insert(0) += 1;
        }
    }
    Ok(Factorization {
        value: n,
        factors: found.into_iter().collect(),
    })
}

/// Splits `n` (all of whose prime factors exceed the trial bound) into primes.
fn split(n: u128, mult: u32, out: &mut BTreeMap<u128, u32>) {
    if n == 1 {
        return;
    }
    if is_prime_unchecked(n) {
        *out.entry(n).or_insert(0) += mult;
        return;
    }
    if let Some((root, e)) = perfect_power(n) {
        split(root, mult * e, out);
        return;
    }
    let d = find_divisor(n);
    split(d, mult, out);
    split(n / d, mult, out);
}

fn perfect_power(n: u128) -> Option<(u128, u32)> {
    let bits = 128 - n.leading_zeros();
    for e in 2..bits {
        let r = integer_nth_root(n, e);
        if r < 2 {
            break;
        }
        if r.checked_pow(e) == Some(n) {
            return Some((r, e));
        }
    }
    None
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

/// Nontrivial divisor of an odd composite `n` that is not a perfect power.
fn find_divisor(n: u128) -> u128 {
    let mut seed = splitmix64(n as u64 ^ (n >> 64) as u64);
    loop {
        let c = (seed as u128) % (n - 1) + 1;
        let x0 = (splitmix64(seed) as u128) % n;
        let d = if n <= u64::MAX as u128 {
            brent(&Word(n), c, x0)
        } else {
            let ring = Montgomery::new(n);
            brent(&ring, ring.enter(c), ring.enter(x0))
        };
        if let Some(d) = d {
            return d;
        }
        seed = splitmix64(seed);
    }
}

fn brent<R: Ring>(ring: &R, c: u128, x0: u128) -> Option<u128> {
    const BATCH: u64 = 128;
    let n = ring.modulus();
    let f = |v: u128| ring.add(ring.mul(v, v), c);
    let diff = |a: u128, b: u128| a.abs_diff(b);
    let (mut x, mut y, mut ys) = (x0, x0, x0);
    let mut q = 1u128;
    let mut g = 1u128;
    let mut r = 1u64;
    while g == 1 {
        x = y;
        for _ in 0..r {
            y = f(y);
        }
        let mut k = 0;
        while k < r && g == 1 {
            ys = y;
            for _ in 0..BATCH.min(r - k) {
                y = f(y);
                q = ring.mul(q, diff(x, y));
            }
            g = gcd(q, n);
            k += BATCH;
        }
        r *= 2;
        if r > 1 << 34 {
            return None;
        }
    }
    if g == n {
        loop {
            ys = f(ys);
            g = gcd(diff(x, ys), n);
            if g > 1 {
                break;
            }
        }
    }
    (g != n).then_some(g)
}

/// Largest `e` with `q^e | n`.
pub fn valuation(n: u128, q: u128) -> Result<u32> {
    check_range(n)?;
    if n == 0 {
        return Err(Error::Zero);
    }
    if !is_prime(q)? {
        return Err(Error::NotPrime(q));
    }
    Ok(valuation_unchecked(n, q))
}

/// Valuation for a caller-guaranteed `q >= 2`; `n = 0` yields `u32::MAX`.
pub(crate) fn valuation_unchecked(mut n: u128, q: u128) -> u32 {
    if n == 0 {
        return u32::MAX;
    }
    let mut e = 0;
    while n.is_multiple_of(q) {
        n /= q;
        e += 1;
    }
    e
}

/// `floor(n^(1/k))`, exact.
///
/// # Panics
/// If `k == 0`.
pub fn integer_nth_root(n: u128, k: u32) -> u128 {
    assert!(k > 0, "root index must be positive");
    if k == 1 || n < 2 {
        return n;
    }
    if k >= 128 {
        return 1;
    }
    let fits = |r: u128| r.checked_pow(k).is_some_and(|v| v <= n);
    let est = (n as f64).powf(1.0 / k as f64) as u128;
    let slack = (est >> 40) + 2;
    let (mut lo, mut hi) = (est.saturating_sub(slack), est + slack);
    if !fits(lo) || fits(hi) {
        lo = 0;
        hi = 1u128 << (128 / k + 1);
    }
    // invariant: fits(lo), !fits(hi)
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if fits(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

pub fn isqrt_u64(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while (r as u128) * (r as u128) > n as u128 {
        r -= 1;
    }
    while ((r + 1) as u128) * ((r + 1) as u128) <= n as u128 {
        r += 1;
    }
    r
}

pub fn euler_phi(n: u128) -> Result<u128> {
    let f = factor(n)?;
    Ok(f.factors().iter().fold(n, |acc, &(p, _)| acc / p * (p - 1)))
}

const SEGMENT: u64 = 1 << 18;

/// Ascending primes `p <= limit` with `p = r mod m`, produced by a segmented
/// sieve of Eratosthenes.
#[derive(Debug, Clone)]
pub struct PrimesInAp {
    limit: u64,
    r: u64,
    m: u64,
    base: Vec<u32>,
    lo: u64,
    composite: Vec<bool>,
    idx: usize,
    done: bool,
}

pub fn primes_in_ap(limit: u64, r: u64, m: u64) -> Result<PrimesInAp> {
    if m == 0 {
        return Err(Error::InvalidParameter("modulus must be positive".into()));
    }
    let r = r % m;
    let g = gcd(r as u128, m as u128) as u64;
    if g != 1 {
        return Err(Error::DegenerateProgression { r, m, gcd: g });
    }
    let root = isqrt_u64(limit);
    let base = if root <= TRIAL_BOUND as u64 {
        small_prime_table()
            .iter()
            .copied()
            .take_while(|&p| (p as u64) <= root)
            .collect()
    } else {
        simple_sieve(root as usize)
    };
    Ok(PrimesInAp {
        limit,
        r,
        m,
        base,
        lo: 0,
        composite: Vec::new(),
        idx: 0,
        done: false,
    })
}

impl PrimesInAp {
    fn sieve_next_segment(&mut self) -> bool {
        if self.done {
            return false;
        }
        let lo = self.lo + self.composite.len() as u64;
        let hi = self.limit.min(lo.saturating_add(SEGMENT - 1));
        let mut composite = vec![false; (hi - lo + 1) as usize];
        for &p in &self.base {
            let p = p as u64;
            if p * p > hi {
                break;
            }
            let start = (p * p).max(lo.div_ceil(p) * p);
            let mut j = start;
            while j <= hi {
                composite[(j - lo) as usize] = true;
                j += p;
            }
        }
        self.done = hi == self.limit;
        self.lo = lo;
        self.composite = composite;
        self.idx = 0;
        true
    }
}

impl Iterator for PrimesInAp {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        loop {
            while self.idx < self.composite.len() {
                let v = self.lo + self.idx as u64;
                let composite = self.composite[self.idx];
                self.idx += 1;
                if !composite && v >= 2 && v % self.m == self.r {
                    return Some(v);
                }
            }
            if !self.sieve_next_segment() {
                return None;
            }
        }
    }
}
