//! Local solvability of `x^2 + y^2 + z^k = n` with `z` in a residue class.
//!
//! For an odd prime `q` it is enough to find an admissible `z` with
//! `n - z^k` a unit mod `q`: every residue is a sum of two squares mod an odd
//! prime, and a solution of `x^2 + y^2 = c` with `c` a unit has `x` or `y` a
//! unit, so it lifts. Everything else (always `q = 2`) goes through a
//! breadth-first search over solutions mod `q^j`, stopping as soon as a node
//! satisfies the multivariate Hensel criterion
//! `v(F) > 2 v(dF/dv)` for one of the variables.
//!
//! A prime above the generic bound that divides none of `n`, the class
//! modulus and `k` needs no individual treatment: `z` runs through every
//! residue mod `q`, at most `k < q` of them satisfy `z^k = n`, so the unit
//! argument applies.

use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{self, factor, is_prime, mul_mod, pow_mod, valuation_unchecked, INPUT_LIMIT};
use crate::error::{Error, Result};
use crate::search::ResidueClass;

/// Upper limit on residues examined per level of the lifting search.
pub const CANDIDATE_CAP: u128 = 1 << 24;

/// Hard cap on the lifting depth.
pub const MAX_LEVEL_CAP: u32 = 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LocalStatus {
    Solvable,
    Obstructed,
    Undecided,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Variable {
    X,
    Y,
    Z,
}

/// How a verdict at one prime was reached.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum LiftTrace {
    /// An admissible `z` with `n - z^k` a unit mod `q` (odd `q` only).
    UnitDefect {
        #[serde(with = "crate::dec")]
        z: u128,
        #[serde(with = "crate::dec")]
        defect_mod_q: u128,
    },
    /// A solution mod `q^level` meeting the Hensel criterion in `variable`.
    HenselNode {
        #[serde(with = "crate::dec")]
        x: u128,
        #[serde(with = "crate::dec")]
        y: u128,
        #[serde(with = "crate::dec")]
        z: u128,
        variable: Variable,
        derivative_valuation: u32,
        /// `F(x, y, z)` vanishes mod `q^defect_valuation_at_least`.
        defect_valuation_at_least: u32,
    },
    /// Exhaustive table: no solution exists mod `modulus = q^level`.
    NoSolutions {
        #[serde(with = "crate::dec")]
        modulus: u128,
        residues_checked: u64,
    },
    /// Search stopped without a certificate either way.
    Exhausted { frontier: u64, reason: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimeVerdict {
    #[serde(with = "crate::dec")]
    pub q: u128,
    pub status: LocalStatus,
    /// Prime-power exponent at which the verdict was reached.
    pub level: u32,
    pub trace: LiftTrace,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LocalVerdict {
    NoObstructionFound,
    Obstructed,
    Undecided,
}

/// Covers every prime above `above` that is not a special prime.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlanketCertificate {
    pub above: u64,
    pub argument: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalReport {
    #[serde(with = "crate::dec")]
    pub n: u128,
    pub k: u32,
    pub z_class: ResidueClass,
    pub verdict: LocalVerdict,
    pub verdicts: Vec<PrimeVerdict>,
    pub checked_bound: u64,
    #[serde(with = "crate::dec::seq")]
    pub special_primes: Vec<u128>,
    pub blanket: BlanketCertificate,
}

impl LocalReport {
    pub fn undecided(&self) -> impl Iterator<Item = &PrimeVerdict> {
        self.verdicts
            .iter()
            .filter(|v| v.status == LocalStatus::Undecided)
    }

    pub fn verdict_at(&self, q: u128) -> Option<&PrimeVerdict> {
        self.verdicts.iter().find(|v| v.q == q)
    }
}

/// Lifting depth `2v + 3` with `v = max(v_q(2k), v_q(n))`, capped at
/// [`MAX_LEVEL_CAP`].
pub fn default_max_level(n: u128, k: u32, q: u128) -> u32 {
    let v = valuation_unchecked(2 * k as u128, q).max(valuation_unchecked(n, q).min(MAX_LEVEL_CAP));
    (2 * v + 3).min(MAX_LEVEL_CAP)
}

pub fn is_locally_solvable_at(
    n: u128,
    k: u32,
    z_class: ResidueClass,
    q: u128,
    max_level: u32,
) -> Result<PrimeVerdict> {
    if !is_prime(q)? {
        return Err(Error::NotPrime(q));
    }
    if max_level == 0 {
        return Err(Error::InvalidParameter("max_level must be positive".into()));
    }
    if k == 0 {
        return Err(Error::InvalidParameter(
            "exponent k must be positive".into(),
        ));
    }
    if n >= INPUT_LIMIT {
        return Err(Error::OutOfRange {
            value: n.to_string(),
        });
    }
    if q != 2 {
        if let Some(verdict) = unit_defect(n, k, z_class, q) {
            return Ok(verdict);
        }
    }
    Ok(LiftingSearch::new(n, k, z_class, q).run(max_level))
}

fn unit_defect(n: u128, k: u32, z_class: ResidueClass, q: u128) -> Option<PrimeVerdict> {
    let (r, m) = (z_class.r() as u128, z_class.m() as u128);
    // Distinct residues mod q reachable inside the class; k + 1 of them suffice.
    let tries = if m % q == 0 { 1 } else { q.min(k as u128 + 1) };
    (0..tries).find_map(|i| {
        let z = r + m * i;
        let defect = (n % q + q - pow_mod(z, k as u128, q)) % q;
        (defect != 0).then_some(PrimeVerdict {
            q,
            status: LocalStatus::Solvable,
            level: 1,
            trace: LiftTrace::UnitDefect {
                z,
                defect_mod_q: defect,
            },
        })
    })
}

#[derive(Clone, Copy)]
struct Node {
    x: u128,
    y: u128,
    z: u128,
}

struct LiftingSearch {
    n: u128,
    k: u32,
    q: u128,
    /// `v_q(m)`: the class pins `z` modulo `q^e`.
    e: u32,
    /// Class representative modulo `q^e`.
    z_base: u128,
}

impl LiftingSearch {
    fn new(n: u128, k: u32, z_class: ResidueClass, q: u128) -> Self {
        let m = z_class.m() as u128;
        let e = if m == 1 { 0 } else { valuation_unchecked(m, q) };
        let qe = q.pow(e);
        LiftingSearch {
            n,
            k,
            q,
            e,
            z_base: z_class.r() as u128 % qe,
        }
    }

    fn defect_mod(&self, node: &Node, modulus: u128) -> u128 {
        let s = arith::add_mod(
            mul_mod(node.x, node.x, modulus),
            mul_mod(node.y, node.y, modulus),
            modulus,
        );
        let s = arith::add_mod(s, pow_mod(node.z, self.k as u128, modulus), modulus);
        (s + modulus - self.n % modulus) % modulus
    }

    fn q_pow(&self, level: u32) -> Option<u128> {
        self.q.checked_pow(level).filter(|&v| v < INPUT_LIMIT)
    }

    fn run(&self, max_level: u32) -> PrimeVerdict {
        let q = self.q;
        let mut frontier: Vec<Node> = Vec::new();
        let mut level = 0u32;
        let mut q_level = 1u128;
        loop {
            let next_level = level + 1;
            let Some(q_next) = self.q_pow(next_level) else {
                return self.undecided(level, frontier.len(), "prime power exceeds 2^127");
            };
            let z_fixed = next_level <= self.e;
            let per_node = q * q * if z_fixed { 1 } else { q };
            let parents = frontier.len().max(1) as u128;
            if parents.saturating_mul(per_node) > CANDIDATE_CAP {
                return self.undecided(level, frontier.len(), "candidate cap exceeded");
            }
            let seeds = if level == 0 {
                vec![Node {
                    x: 0,
                    y: 0,
                    z: if self.e > 0 { self.z_base } else { 0 },
                }]
            } else {
                frontier
            };
            let z_digits = if z_fixed { 1 } else { q };
            let mut next = Vec::new();
            let mut checked = 0u64;
            for parent in &seeds {
                for a in 0..q {
                    for b in 0..q {
                        for c in 0..z_digits {
                            let node = Node {
                                x: parent.x + a * q_level,
                                y: parent.y + b * q_level,
                                z: if z_fixed {
                                    parent.z
                                } else {
                                    parent.z + c * q_level
                                },
                            };
                            checked += 1;
                            if self.defect_mod(&node, q_next) == 0 {
                                next.push(node);
                            }
                        }
                    }
                }
            }
            level = next_level;
            q_level = q_next;
            if next.is_empty() {
                return PrimeVerdict {
                    q,
                    status: LocalStatus::Obstructed,
                    level,
                    trace: LiftTrace::NoSolutions {
                        modulus: q_level,
                        residues_checked: checked,
                    },
                };
            }
            if let Some(trace) = next.iter().find_map(|node| self.certify(node, level)) {
                return PrimeVerdict {
                    q,
                    status: LocalStatus::Solvable,
                    level,
                    trace,
                };
            }
            if level >= max_level {
                return self.undecided(
                    level,
                    next.len(),
                    "max_level reached without a liftable node",
                );
            }
            frontier = next;
        }
    }

    /// Checks the Hensel criterion at a node that solves the congruence mod `q^level`.
    fn certify(&self, node: &Node, level: u32) -> Option<LiftTrace> {
        let q = self.q;
        let v2 = valuation_unchecked(2, q);
        let mut options = Vec::with_capacity(3);
        if node.x != 0 {
            let d = v2 + valuation_unchecked(node.x, q);
            options.push((Variable::X, d, 2 * d + 1));
        }
        if node.y != 0 {
            let d = v2 + valuation_unchecked(node.y, q);
            options.push((Variable::Y, d, 2 * d + 1));
        }
        if node.z != 0 {
            let d = valuation_unchecked(self.k as u128, q)
                + (self.k - 1) * valuation_unchecked(node.z, q);
            // the Newton step must also keep z inside its class mod q^e
            options.push((Variable::Z, d, (2 * d + 1).max(d + self.e)));
        }
        options.into_iter().find_map(|(variable, d, needed)| {
            let holds = needed <= level
                || self
                    .q_pow(needed)
                    .is_some_and(|modulus| self.defect_mod(node, modulus) == 0);
            holds.then_some(LiftTrace::HenselNode {
                x: node.x,
                y: node.y,
                z: node.z,
                variable,
                derivative_valuation: d,
                defect_valuation_at_least: needed.max(level),
            })
        })
    }

    fn undecided(&self, level: u32, frontier: usize, reason: &str) -> PrimeVerdict {
        PrimeVerdict {
            q: self.q,
            status: LocalStatus::Undecided,
            level,
            trace: LiftTrace::Exhausted {
                frontier: frontier as u64,
                reason: reason.into(),
            },
        }
    }
}

/// Prime divisors of `n`, of the class modulus, of `k`, and 2.
pub fn special_primes(n: u128, k: u32, z_class: ResidueClass) -> Result<Vec<u128>> {
    let mut set = BTreeSet::from([2u128]);
    for v in [n, z_class.m() as u128, k as u128] {
        set.extend(factor(v)?.primes());
    }
    Ok(set.into_iter().collect())
}

pub fn local_report(
    n: u128,
    k: u32,
    z_class: ResidueClass,
    generic_bound: u64,
    max_level: u32,
) -> Result<LocalReport> {
    let need = (k as u64).max(z_class.m()).max(2);
    if generic_bound < need {
        return Err(Error::InvalidParameter(format!(
            "generic bound {generic_bound} must be at least max(k, m, 2) = {need}"
        )));
    }
    if n == 0 {
        return Err(Error::InvalidParameter("target n must be positive".into()));
    }
    let special = special_primes(n, k, z_class)?;
    let mut primes: BTreeSet<u128> = arith::primes_in_ap(generic_bound, 0, 1)?
        .map(u128::from)
        .collect();
    primes.extend(special.iter().copied());
    let primes: Vec<u128> = primes.into_iter().collect();
    let verdicts = primes
        .par_iter()
        .map(|&q| is_locally_solvable_at(n, k, z_class, q, max_level))
        .collect::<Vec<_>>()
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    let verdict = if verdicts.iter().any(|v| v.status == LocalStatus::Obstructed) {
        LocalVerdict::Obstructed
    } else if verdicts.iter().any(|v| v.status == LocalStatus::Undecided) {
        LocalVerdict::Undecided
    } else {
        LocalVerdict::NoObstructionFound
    };
    Ok(LocalReport {
        n,
        k,
        z_class,
        verdict,
        verdicts,
        checked_bound: generic_bound,
        special_primes: special,
        blanket: BlanketCertificate {
            above: generic_bound,
            argument: format!(
                "every prime q > {generic_bound} outside the special set has q > k and q coprime \
                 to the class modulus, so z covers all residues mod q, at most {k} of them \
                 satisfy z^k = n, and the remaining z leave a unit defect that lifts"
            ),
        },
    })
}
