//! The pinned random stream behind every seeded computation.
//!
//! Output contract: `ChaCha8Rng::seed_from_u64(seed)` from `rand_chacha` 0.3,
//! consumed one `next_u64()` per draw. An event of rational probability `r`
//! happens iff the draw is below `floor(r * 2^64)` (with `r = 1` always
//! true). ChaCha's output is specified bit-for-bit independent of platform,
//! so streams reproduce everywhere.

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive};
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::ratio::Rational;

pub type Stream = ChaCha8Rng;

pub fn stream(seed: u64) -> Stream {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `floor(r * 2^64)` as a u128 so that `r = 1` maps to `2^64`, above every
/// draw. `r` must lie in `[0, 1]`.
pub fn threshold(r: &Rational) -> u128 {
    if *r >= Rational::one() {
        return 1u128 << 64;
    }
    let scaled: BigInt = (r * Rational::from_integer(BigInt::one() << 64u32)).floor().to_integer();
    scaled.to_u128().unwrap_or(0)
}

#[inline]
pub fn draw_below(rng: &mut Stream, threshold: u128) -> bool {
    (rng.next_u64() as u128) < threshold
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratio::{from_int, rational};

    #[test]
    fn thresholds() {
        assert_eq!(threshold(&from_int(0)), 0);
        assert_eq!(threshold(&from_int(1)), 1u128 << 64);
        assert_eq!(threshold(&rational(1, 2)), 1u128 << 63);
        assert_eq!(threshold(&rational(1, 3)), (u64::MAX / 3) as u128);
    }

    #[test]
    fn stream_is_pinned() {
        // Reference outputs of the pinned generator; a change here breaks
        // reproducibility of every seeded report.
        let mut s = stream(0);
        let first: Vec<u64> = (0..3).map(|_| s.next_u64()).collect();
        assert_eq!(first, vec![0xb585f767a79a3b6c, 0x7746a55fbad8c037, 0xb2fb0d3281e2a6e6]);
    }
}
