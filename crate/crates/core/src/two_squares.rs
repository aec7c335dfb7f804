//! Sums of two squares.
//!
//! `n` is `x^2 + y^2` exactly when every prime `q = 3 mod 4` divides `n` to an
//! even power. [`is_sum_of_two_squares`] decides this from the factorization;
//! [`two_square_representations`] enumerates directly and serves as its oracle.

use crate::arith::{factor, isqrt_u64};
use crate::error::{Error, Result};

/// Largest `n` accepted by [`two_square_representations`].
pub const ENUMERATION_BOUND: u64 = 100_000_000_000_000;

pub fn is_sum_of_two_squares(n: u128) -> Result<bool> {
    if n == 0 {
        return Ok(true);
    }
    let odd = n >> n.trailing_zeros();
    if odd % 4 == 3 {
        return Ok(false);
    }
    let f = factor(odd)?;
    Ok(f.factors().iter().all(|&(q, e)| q % 4 != 3 || e % 2 == 0))
}

/// All `(x, y)` with `0 <= x <= y` and `x^2 + y^2 = n`, ascending in `x`.
pub fn two_square_representations(n: u64) -> Result<Vec<(u64, u64)>> {
    if n > ENUMERATION_BOUND {
        return Err(Error::Budget {
            what: "two-squares enumeration target",
            actual: n as u128,
            limit: ENUMERATION_BOUND as u128,
        });
    }
    let mut reps = Vec::new();
    for x in 0..=isqrt_u64(n / 2) {
        let rest = n - x * x;
        let y = isqrt_u64(rest);
        if y * y == rest {
            reps.push((x, y));
        }
    }
    Ok(reps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn classification_examples() {
        assert!(is_sum_of_two_squares(0).unwrap());
        assert!(!is_sum_of_two_squares(3).unwrap());
        assert!(!is_sum_of_two_squares(1981).unwrap());
        assert!(is_sum_of_two_squares(2).unwrap());
        assert!(is_sum_of_two_squares(9 * 5).unwrap());
        assert!(!is_sum_of_two_squares(27 * 5).unwrap());
    }

    #[test]
    fn enumeration_examples() {
        assert_eq!(two_square_representations(25).unwrap(), [(0, 5), (3, 4)]);
        assert_eq!(two_square_representations(2).unwrap(), [(1, 1)]);
        assert!(two_square_representations(21).unwrap().is_empty());
        assert_eq!(two_square_representations(0).unwrap(), [(0, 0)]);
        assert!(matches!(
            two_square_representations(ENUMERATION_BOUND + 1),
            Err(Error::Budget { .. })
        ));
    }

    const Q3: [u128; 8] = [3, 7, 11, 19, 23, 31, 43, 983];

    proptest! {
        #[test]
        fn products_of_sums_stay_sums(a in 0u128..1_000_000, b in 0u128..1_000_000) {
            if is_sum_of_two_squares(a).unwrap() && is_sum_of_two_squares(b).unwrap() {
                prop_assert!(is_sum_of_two_squares(a * b).unwrap());
            }
        }

        #[test]
        fn odd_power_of_3_mod_4_prime_blocks(
            qi in 0usize..Q3.len(),
            half in 0u32..3,
            m in 1u128..100_000,
        ) {
            let q = Q3[qi];
            prop_assume!(m % q != 0);
            let e = 2 * half + 1;
            prop_assert!(!is_sum_of_two_squares(q.pow(e) * m).unwrap());
        }
    }
}
