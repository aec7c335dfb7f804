//! The three exceptional families and their certificates.
//!
//! * `THM1`: odd `k >= 3`, prime `p = 1 mod 4k`, target `p^k`, `z = 2k mod 4k`,
//!   any sign (zeros included).
//! * `THM2`: `4 | k`, prime `p = 7 mod 8`, cofactor `n < p` with `n = 1 mod 8`
//!   built from primes `= 1 mod 4`, target `(np)^2`, positive `x, y, z`.
//! * `THM3`: as `THM2` with `k = 2 mod 4`, `k >= 6`, and `z` even.
//!
//! For every admissible `z` a [`Witness`] names a prime `q = 3 mod 4` dividing
//! `target - z^k` to an odd power, which rules out `x^2 + y^2 = target - z^k`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::arith::{
    self, euler_phi, factor, integer_nth_root, is_prime, pow_mod, valuation_unchecked,
};
use crate::error::{Error, Result};
use crate::search::{positive_z_bound, ResidueClass, SearchSpec};
use crate::two_squares::is_sum_of_two_squares;

/// Largest sieve bound a generator may request.
pub const GENERATOR_SIEVE_BUDGET: u128 = 10_000_000_000;

/// Largest limit accepted by [`landau_count`].
pub const LANDAU_BUDGET: u64 = 100_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Family {
    Thm1,
    Thm2,
    Thm3,
}

impl Family {
    pub fn check_exponent(self, k: u32) -> Result<()> {
        let ok = match self {
            Family::Thm1 => k >= 3 && k % 2 == 1,
            Family::Thm2 => k >= 4 && k.is_multiple_of(4),
            Family::Thm3 => k >= 6 && k % 4 == 2,
        };
        if ok {
            return Ok(());
        }
        let need = match self {
            Family::Thm1 => "odd k >= 3",
            Family::Thm2 => "k divisible by 4",
            Family::Thm3 => "k = 2 mod 4 with k >= 6",
        };
        Err(Error::InvalidParameter(format!(
            "{self} needs {need}, got k = {k}"
        )))
    }

    pub fn z_class(self, k: u32) -> ResidueClass {
        match self {
            Family::Thm1 => ResidueClass::new(2 * k as u64, 4 * k as u64).expect("2k < 4k"),
            Family::Thm2 => ResidueClass::ANY,
            Family::Thm3 => ResidueClass::new(0, 2).expect("0 < 2"),
        }
    }

    pub fn positivity(self) -> bool {
        self != Family::Thm1
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::Thm1 => "THM1",
            Family::Thm2 => "THM2",
            Family::Thm3 => "THM3",
        })
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "thm1" => Ok(Family::Thm1),
            "thm2" => Ok(Family::Thm2),
            "thm3" => Ok(Family::Thm3),
            _ => Err(Error::InvalidParameter(format!(
                "unknown family {s:?}, expected thm1, thm2 or thm3"
            ))),
        }
    }
}

/// One exceptional target with its provenance.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FamilyTarget {
    pub family: Family,
    pub k: u32,
    pub p: u64,
    pub cofactor_n: u64,
    #[serde(with = "crate::dec")]
    pub target: u128,
    pub z_class: ResidueClass,
    pub positivity: bool,
}

/// `n = 1 mod 8` and every prime factor of `n` is `1 mod 4`.
pub fn is_admissible_cofactor(n: u64) -> bool {
    n % 8 == 1
        && factor(n as u128)
            .map(|f| f.primes().all(|q| q % 4 == 1))
            .unwrap_or(false)
}

impl FamilyTarget {
    /// Builds a target after checking every hypothesis of its family.
    pub fn new(family: Family, k: u32, p: u64, cofactor_n: u64) -> Result<Self> {
        family.check_exponent(k)?;
        if !is_prime(p as u128)? {
            return Err(Error::InvalidParameter(format!("p = {p} is not prime")));
        }
        let target = match family {
            Family::Thm1 => {
                if p % (4 * k as u64) != 1 {
                    return Err(Error::InvalidParameter(format!(
                        "THM1 needs p = 1 mod {}, got p = {p}",
                        4 * k
                    )));
                }
                if cofactor_n != 1 {
                    return Err(Error::InvalidParameter("THM1 has cofactor 1".into()));
                }
                (p as u128)
                    .checked_pow(k)
                    .filter(|&t| t < arith::INPUT_LIMIT)
                    .ok_or(Error::Overflow("p^k"))?
            }
            Family::Thm2 | Family::Thm3 => {
                if p % 8 != 7 {
                    return Err(Error::InvalidParameter(format!(
                        "{family} needs p = 7 mod 8, got p = {p}"
                    )));
                }
                if cofactor_n >= p || !is_admissible_cofactor(cofactor_n) {
                    return Err(Error::InvalidParameter(format!(
                        "cofactor {cofactor_n} must be 1 mod 8, below p, with prime factors 1 mod 4"
                    )));
                }
                let np = cofactor_n as u128 * p as u128;
                np.checked_mul(np)
                    .filter(|&t| t < arith::INPUT_LIMIT)
                    .ok_or(Error::Overflow("(np)^2"))?
            }
        };
        Ok(FamilyTarget {
            family,
            k,
            p,
            cofactor_n,
            target,
            z_class: family.z_class(k),
            positivity: family.positivity(),
        })
    }

    /// `[-4p, p]` for THM1, `[1, floor((target - 2)^(1/k))]` otherwise.
    pub fn acceptance_window(&self) -> (i128, i128) {
        match self.family {
            Family::Thm1 => (-4 * self.p as i128, self.p as i128),
            _ => (1, positive_z_bound(self.target, self.k).max(1) as i128),
        }
    }

    pub fn search_spec(&self) -> Result<SearchSpec> {
        let (lo, hi) = self.acceptance_window();
        SearchSpec::new(self.target, self.k, self.z_class, lo, hi, self.positivity)
    }

    /// Admissible `z` of the acceptance window, ascending.
    pub fn window_z(&self) -> impl Iterator<Item = i128> {
        let (lo, hi) = self.acceptance_window();
        let step = self.z_class.m() as usize;
        (self.z_class.first_at_or_above(lo)..=hi).step_by(step)
    }

    /// `n p`; the square root of the target for THM2/THM3.
    pub fn np(&self) -> u128 {
        self.cofactor_n as u128 * self.p as u128
    }
}

pub fn generate(family: Family, k: u32, limit: u128) -> Result<Vec<FamilyTarget>> {
    match family {
        Family::Thm1 => generate_thm1(k, limit),
        Family::Thm2 => generate_thm2(k, limit),
        Family::Thm3 => generate_thm3(k, limit),
    }
}

pub fn generate_thm1(k: u32, limit: u128) -> Result<Vec<FamilyTarget>> {
    Family::Thm1.check_exponent(k)?;
    let root = integer_nth_root(limit, k);
    sieve_budget(root)?;
    arith::primes_in_ap(root as u64, 1, 4 * k as u64)?
        .map(|p| FamilyTarget::new(Family::Thm1, k, p, 1))
        .collect()
}

pub fn generate_thm2(k: u32, limit: u128) -> Result<Vec<FamilyTarget>> {
    generate_square_family(Family::Thm2, k, limit)
}

pub fn generate_thm3(k: u32, limit: u128) -> Result<Vec<FamilyTarget>> {
    generate_square_family(Family::Thm3, k, limit)
}

fn sieve_budget(bound: u128) -> Result<()> {
    if bound > GENERATOR_SIEVE_BUDGET {
        return Err(Error::Budget {
            what: "generator sieve bound",
            actual: bound,
            limit: GENERATOR_SIEVE_BUDGET,
        });
    }
    Ok(())
}

fn generate_square_family(family: Family, k: u32, limit: u128) -> Result<Vec<FamilyTarget>> {
    family.check_exponent(k)?;
    // np <= s with n < p forces n^2 < s.
    let s = integer_nth_root(limit, 2);
    sieve_budget(s)?;
    let s = s as u64;
    let primes: Vec<u64> = arith::primes_in_ap(s, 7, 8)?.collect();
    let cofactor_bound = arith::isqrt_u64(s);
    let mut targets = Vec::new();
    for n in OneModFourSmooth::up_to(cofactor_bound)
        .iter()
        .filter(|n| n % 8 == 1)
    {
        let lo = primes.partition_point(|&p| p <= n);
        let hi = primes.partition_point(|&p| p <= s / n);
        for &p in primes.get(lo..hi).unwrap_or_default() {
            targets.push(FamilyTarget::new(family, k, p, n)?);
        }
    }
    targets.sort_by_key(|t| t.target);
    Ok(targets)
}

/// Bitset over odd numbers `<= limit` marking those whose prime factors are
/// all `1 mod 4`. Even numbers never qualify since 2 is not `1 mod 4`.
struct OneModFourSmooth {
    limit: u64,
    good: Vec<u64>,
}

impl OneModFourSmooth {
    fn up_to(limit: u64) -> Self {
        // slot i is the odd number 2i + 1
        let slots = limit.div_ceil(2) as usize;
        let words = slots.div_ceil(64);
        let mut composite = vec![0u64; words];
        let mut good = vec![u64::MAX; words];
        if !slots.is_multiple_of(64) {
            if let Some(last) = good.last_mut() {
                *last = (1u64 << (slots % 64)) - 1;
            }
        }
        let get = |bits: &[u64], i: usize| bits[i / 64] >> (i % 64) & 1 == 1;
        let clear = |bits: &mut [u64], i: usize| bits[i / 64] &= !(1u64 << (i % 64));
        let set = |bits: &mut [u64], i: usize| bits[i / 64] |= 1u64 << (i % 64);
        for i in 1..slots {
            if get(&composite, i) {
                continue;
            }
            let q = 2 * i as u64 + 1;
            let sq = q.saturating_mul(q);
            if sq <= limit {
                let mut j = (sq / 2) as usize;
                while j < slots {
                    set(&mut composite, j);
                    j += q as usize;
                }
            }
            if q % 4 == 3 {
                let mut j = i;
                while j < slots {
                    clear(&mut good, j);
                    j += q as usize;
                }
            }
        }
        OneModFourSmooth { limit, good }
    }

    fn count(&self, only_one_mod_eight: bool) -> u64 {
        if !only_one_mod_eight {
            return self.good.iter().map(|w| w.count_ones() as u64).sum();
        }
        // 2i + 1 = 1 mod 8 exactly when i = 0 mod 4
        let mask = 0x1111_1111_1111_1111u64;
        self.good
            .iter()
            .map(|w| (w & mask).count_ones() as u64)
            .sum()
    }

    fn iter(&self) -> impl Iterator<Item = u64> + '_ {
        let limit = self.limit;
        self.good.iter().enumerate().flat_map(move |(wi, &w)| {
            (0..64)
                .filter(move |b| w >> b & 1 == 1)
                .map(move |b| 2 * (wi as u64 * 64 + b) + 1)
                .filter(move |&v| v <= limit)
        })
    }
}

/// Number of `n <= limit` all of whose prime factors are `1 mod 4` (`n = 1`
/// included), optionally only those with `n = 1 mod 8`.
pub fn landau_count(limit: u64, require_1_mod_8: bool) -> Result<u64> {
    if limit > LANDAU_BUDGET {
        return Err(Error::Budget {
            what: "landau_count limit",
            actual: limit as u128,
            limit: LANDAU_BUDGET as u128,
        });
    }
    Ok(OneModFourSmooth::up_to(limit).count(require_1_mod_8))
}

/// Certificate that `target - z^k` is not a sum of two squares.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    #[serde(with = "crate::dec")]
    pub z: i128,
    #[serde(with = "crate::dec")]
    pub q: u128,
    pub facts: WitnessFacts,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "shape", rename_all = "snake_case")]
pub enum WitnessFacts {
    /// THM1: `q` divides `p - z` to an odd power and misses the cofactor
    /// `p^(k-1) + p^(k-2) z + ... + z^(k-1)`.
    OddExponent {
        #[serde(with = "crate::dec")]
        p_minus_z: u128,
        p_minus_z_mod_4k: u64,
        q_mod_4: u8,
        valuation_p_minus_z: u32,
        q_divides_k: bool,
        q_divides_z: bool,
        /// The cofactor sum reduced mod `q`, summed term by term.
        #[serde(with = "crate::dec")]
        cofactor_sum_mod_q: u128,
        /// `k z^(k-1) mod q`, equal to the above since `p = z mod q`.
        #[serde(with = "crate::dec")]
        k_z_pow_mod_q: u128,
        #[serde(with = "crate::dec")]
        target_minus_z_pow_k: u128,
        valuation_target_minus_z_pow_k: u32,
    },
    /// THM2/THM3: `q` divides `np - z^t` (`t = k/2`) to an odd power; if it
    /// also divided `np + z^t` it would divide `2np` and `2z^t`, forcing
    /// `q = p | z` and `z^k >= p^k >= p^4 > (np)^2`.
    EvenExponent {
        t: u32,
        #[serde(with = "crate::dec")]
        np: u128,
        #[serde(with = "crate::dec")]
        z_pow_t: u128,
        #[serde(with = "crate::dec")]
        np_minus_z_pow_t: u128,
        np_minus_z_pow_t_mod_8: u8,
        q_mod_4: u8,
        valuation_np_minus_z_pow_t: u32,
        #[serde(with = "crate::dec")]
        np_plus_z_pow_t_mod_q: u128,
        q_divides_2np: bool,
        q_divides_2z_pow_t: bool,
        q_equals_p: bool,
        p_divides_z: bool,
        size: SizeContradiction,
        #[serde(with = "crate::dec")]
        target_minus_z_pow_k: u128,
        valuation_target_minus_z_pow_k: u32,
    },
}

/// `z^k >= p^k >= p^4 > (np)^2` instantiated for a `z` divisible by `p`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SizeContradiction {
    #[serde(with = "crate::dec")]
    pub z_pow_k: u128,
    #[serde(with = "crate::dec")]
    pub target: u128,
    #[serde(with = "crate::dec")]
    pub p_pow_4: u128,
    #[serde(with = "crate::dec")]
    pub np_squared: u128,
    /// `p^4 > (np)^2`, i.e. any multiple of `p` is already too large.
    pub p_pow_4_exceeds_target: bool,
    /// `z^k < (np)^2`, so `z` is not such a multiple.
    pub z_pow_k_below_target: bool,
}

fn violation(target: &FamilyTarget, z: i128, what: &str) -> Error {
    Error::TheoremViolation(format!(
        "{} k={} p={} n={} target={} z={z}: {what}",
        target.family, target.k, target.p, target.cofactor_n, target.target
    ))
}

/// First prime `q = 3 mod 4` dividing `v` to an odd power.
fn odd_blocking_prime(v: u128) -> Result<Option<(u128, u32)>> {
    Ok(factor(v)?
        .factors()
        .iter()
        .copied()
        .find(|&(q, e)| q % 4 == 3 && e % 2 == 1))
}

/// `target - z^k`, positive by the witness preconditions.
fn target_minus_z_pow_k(target: &FamilyTarget, z: i128) -> Result<u128> {
    let zk = z
        .unsigned_abs()
        .checked_pow(target.k)
        .ok_or(Error::Overflow("|z|^k"))?;
    let value = if z < 0 {
        target
            .target
            .checked_add(zk)
            .ok_or(Error::Overflow("target + |z|^k"))?
    } else {
        target
            .target
            .checked_sub(zk)
            .ok_or(Error::Overflow("target - z^k"))?
    };
    if value >= arith::INPUT_LIMIT {
        return Err(Error::Overflow("target - z^k"));
    }
    Ok(value)
}

pub fn witness(target: &FamilyTarget, z: i128) -> Result<Witness> {
    if !target.z_class.contains(z) {
        return Err(Error::InvalidParameter(format!(
            "z = {z} is not in the class {}",
            target.z_class
        )));
    }
    let w = match target.family {
        Family::Thm1 => odd_exponent_witness(target, z)?,
        Family::Thm2 | Family::Thm3 => even_exponent_witness(target, z)?,
    };
    w.check(target)
        .map_err(|what| violation(target, z, &what))?;
    Ok(w)
}

fn odd_exponent_witness(target: &FamilyTarget, z: i128) -> Result<Witness> {
    let (p, k) = (target.p as i128, target.k);
    if z >= p {
        return Err(Error::InvalidParameter(format!(
            "THM1 witness needs z < p = {p}, got {z}"
        )));
    }
    let p_minus_z = (p - z) as u128;
    let Some((q, e)) = odd_blocking_prime(p_minus_z)? else {
        return Err(violation(
            target,
            z,
            "p - z has no prime 3 mod 4 to an odd power",
        ));
    };
    let z_mod_q = z.rem_euclid(q as i128) as u128;
    let p_mod_q = target.p as u128 % q;
    let cofactor_sum_mod_q = (0..k).fold(0u128, |acc, i| {
        let term = arith::mul_mod(
            pow_mod(p_mod_q, (k - 1 - i) as u128, q),
            pow_mod(z_mod_q, i as u128, q),
            q,
        );
        arith::add_mod(acc, term, q)
    });
    let k_z_pow_mod_q = arith::mul_mod(k as u128 % q, pow_mod(z_mod_q, (k - 1) as u128, q), q);
    let rest = target_minus_z_pow_k(target, z)?;
    Ok(Witness {
        z,
        q,
        facts: WitnessFacts::OddExponent {
            p_minus_z,
            p_minus_z_mod_4k: (p_minus_z % (4 * k as u128)) as u64,
            q_mod_4: (q % 4) as u8,
            valuation_p_minus_z: e,
            q_divides_k: (k as u128).is_multiple_of(q),
            q_divides_z: z_mod_q == 0,
            cofactor_sum_mod_q,
            k_z_pow_mod_q,
            target_minus_z_pow_k: rest,
            valuation_target_minus_z_pow_k: valuation_unchecked(rest, q),
        },
    })
}

fn even_exponent_witness(target: &FamilyTarget, z: i128) -> Result<Witness> {
    if z < 1 {
        return Err(Error::InvalidParameter(format!(
            "{} witness needs z >= 1, got {z}",
            target.family
        )));
    }
    let z_u = z as u128;
    let z_pow_k = z_u.checked_pow(target.k).filter(|&v| v < target.target);
    let Some(z_pow_k) = z_pow_k else {
        return Err(Error::InvalidParameter(format!(
            "{} witness needs z^k < target, got z = {z}",
            target.family
        )));
    };
    let t = target.k / 2;
    let np = target.np();
    let p = target.p as u128;
    let z_pow_t = z_u.pow(t);
    let diff = np - z_pow_t;
    let Some((q, e)) = odd_blocking_prime(diff)? else {
        return Err(violation(
            target,
            z,
            "np - z^t has no prime 3 mod 4 to an odd power",
        ));
    };
    let rest = target_minus_z_pow_k(target, z)?;
    Ok(Witness {
        z,
        q,
        facts: WitnessFacts::EvenExponent {
            t,
            np,
            z_pow_t,
            np_minus_z_pow_t: diff,
            np_minus_z_pow_t_mod_8: (diff % 8) as u8,
            q_mod_4: (q % 4) as u8,
            valuation_np_minus_z_pow_t: e,
            np_plus_z_pow_t_mod_q: (np % q + z_pow_t % q) % q,
            q_divides_2np: (2 * np).is_multiple_of(q),
            q_divides_2z_pow_t: (2 * z_pow_t).is_multiple_of(q),
            q_equals_p: q == p,
            p_divides_z: z_u.is_multiple_of(p),
            size: SizeContradiction {
                z_pow_k,
                target: target.target,
                p_pow_4: p.pow(4),
                np_squared: np * np,
                p_pow_4_exceeds_target: p.pow(4) > np * np,
                z_pow_k_below_target: z_pow_k < target.target,
            },
            target_minus_z_pow_k: rest,
            valuation_target_minus_z_pow_k: valuation_unchecked(rest, q),
        },
    })
}

impl Witness {
    /// Re-derives every recorded fact from scratch, including an independent
    /// factorization of `target - z^k`.
    pub fn check(&self, target: &FamilyTarget) -> std::result::Result<(), String> {
        let q = self.q;
        let fail = |what: &str| Err(what.to_string());
        if !is_prime(q).unwrap_or(false) {
            return fail("q is not prime");
        }
        if q % 4 != 3 {
            return fail("q is not 3 mod 4");
        }
        let rest = target_minus_z_pow_k(target, self.z).map_err(|e| e.to_string())?;
        let recorded_rest = match &self.facts {
            WitnessFacts::OddExponent {
                p_minus_z,
                p_minus_z_mod_4k,
                valuation_p_minus_z,
                q_divides_k,
                q_divides_z,
                cofactor_sum_mod_q,
                k_z_pow_mod_q,
                target_minus_z_pow_k,
                ..
            } => {
                let k = target.k as u128;
                if *p_minus_z as i128 != target.p as i128 - self.z {
                    return fail("p - z recorded wrongly");
                }
                if *p_minus_z_mod_4k as u128 != 2 * k + 1 || (2 * k + 1) % 4 != 3 {
                    return fail("p - z is not 2k + 1 mod 4k");
                }
                if valuation_unchecked(*p_minus_z, q) != *valuation_p_minus_z
                    || valuation_p_minus_z % 2 == 0
                {
                    return fail("v_q(p - z) is not the recorded odd value");
                }
                if *q_divides_k
                    || k.is_multiple_of(q)
                    || *q_divides_z
                    || self.z.rem_euclid(q as i128) == 0
                {
                    return fail("q divides k or z");
                }
                if cofactor_sum_mod_q != k_z_pow_mod_q || *cofactor_sum_mod_q == 0 {
                    return fail("cofactor sum mod q is not the nonzero k z^(k-1)");
                }
                *target_minus_z_pow_k
            }
            WitnessFacts::EvenExponent {
                t,
                np,
                z_pow_t,
                np_minus_z_pow_t,
                np_minus_z_pow_t_mod_8,
                valuation_np_minus_z_pow_t,
                np_plus_z_pow_t_mod_q,
                q_equals_p,
                p_divides_z,
                size,
                target_minus_z_pow_k,
                ..
            } => {
                if *t != target.k / 2 || *np != target.np() || *np * *np != target.target {
                    return fail("t or np recorded wrongly");
                }
                if np.checked_sub(*z_pow_t) != Some(*np_minus_z_pow_t) {
                    return fail("np - z^t recorded wrongly");
                }
                let parity_ok = if self.z % 2 == 0 {
                    np_minus_z_pow_t % 4 == 3
                } else {
                    np_minus_z_pow_t % 8 == 6
                };
                if !parity_ok || *np_minus_z_pow_t_mod_8 as u128 != np_minus_z_pow_t % 8 {
                    return fail("parity of np - z^t does not match z");
                }
                if valuation_unchecked(*np_minus_z_pow_t, q) != *valuation_np_minus_z_pow_t
                    || valuation_np_minus_z_pow_t % 2 == 0
                {
                    return fail("v_q(np - z^t) is not the recorded odd value");
                }
                if *np_plus_z_pow_t_mod_q == 0 || (np + z_pow_t) % q != *np_plus_z_pow_t_mod_q {
                    return fail("q divides np + z^t");
                }
                if *p_divides_z && !*q_equals_p {
                    return fail("inconsistent chain");
                }
                if !size.p_pow_4_exceeds_target || !size.z_pow_k_below_target {
                    return fail("size contradiction does not hold");
                }
                *target_minus_z_pow_k
            }
        };
        if recorded_rest != rest {
            return fail("target - z^k recorded wrongly");
        }
        let independent = factor(rest).map_err(|e| e.to_string())?;
        if independent.exponent_of(q) % 2 == 0 {
            return fail("q does not divide target - z^k to an odd power");
        }
        if is_sum_of_two_squares(rest).unwrap_or(true) {
            return fail("target - z^k is a sum of two squares");
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensityRow {
    #[serde(with = "crate::dec")]
    pub limit: u128,
    pub actual: u64,
    /// `None` where the formula is undefined (`N < 3`).
    pub predicted: Option<f64>,
    pub ratio: Option<f64>,
    /// The comparator is a lower-bound order of magnitude, not an asymptotic.
    pub lower_bound_order: bool,
}

/// `k / (2 phi(k)) N^(1/k) / ln N` for THM1, `N^(1/2) / (ln N)^(1/2)` otherwise.
pub fn predicted_count(family: Family, k: u32, limit: u128) -> Result<Option<f64>> {
    if limit < 3 {
        return Ok(None);
    }
    let n = limit as f64;
    let ln = n.ln();
    Ok(Some(match family {
        Family::Thm1 => {
            let phi = euler_phi(k as u128)? as f64;
            k as f64 / (2.0 * phi) * n.powf(1.0 / k as f64) / ln
        }
        Family::Thm2 | Family::Thm3 => n.sqrt() / ln.sqrt(),
    }))
}

pub fn density_report(family: Family, k: u32, limits: &[u128]) -> Result<Vec<DensityRow>> {
    if limits.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::InvalidParameter("limits must be ascending".into()));
    }
    let Some(&max) = limits.last() else {
        return Ok(Vec::new());
    };
    let targets = generate(family, k, max)?;
    limits
        .iter()
        .map(|&limit| {
            let actual = targets.partition_point(|t| t.target <= limit) as u64;
            let predicted = predicted_count(family, k, limit)?;
            Ok(DensityRow {
                limit,
                actual,
                predicted,
                ratio: predicted.map(|p| actual as f64 / p),
                lower_bound_order: family != Family::Thm1,
            })
        })
        .collect()
}
