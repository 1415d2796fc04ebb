//! Seeded randomness shared by generators and randomized checks.

use alloc::vec::Vec;
use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng as _, SeedableRng};

use crate::rational::RationalVector;

pub type Rng = rand_chacha::ChaCha8Rng;

/// Seed used when a caller does not supply one.
pub const DEFAULT_SEED: u64 = 0x5eed_d5a1;

pub fn seeded(seed: u64) -> Rng {
    Rng::seed_from_u64(seed)
}

/// Independent stream number `k` derived from `seed`.
pub fn derived(seed: u64, k: u64) -> Rng {
    let mut r = Rng::seed_from_u64(seed);
    r.set_stream(k);
    r
}

/// Rational with numerator in `[-num_bound, num_bound]` and denominator in
/// `[1, den_bound]`.
pub fn rational(rng: &mut Rng, num_bound: i64, den_bound: i64) -> BigRational {
    let p = rng.gen_range(-num_bound..=num_bound);
    let q = rng.gen_range(1..=den_bound);
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

/// Random rational vector of length `n` with small entries.
pub fn rational_vector(rng: &mut Rng, n: usize) -> RationalVector {
    let xs: Vec<BigRational> = (0..n).map(|_| rational(rng, 1000, 60)).collect();
    RationalVector::from_rationals(&xs).expect("positive length")
}

/// Random vector with strictly positive entries.
pub fn positive_vector(rng: &mut Rng, n: usize) -> RationalVector {
    let xs: Vec<BigRational> =
        (0..n).map(|_| BigRational::new(rng.gen_range(1..=1000i64).into(), rng.gen_range(1..=60i64).into())).collect();
    RationalVector::from_rationals(&xs).expect("positive length")
}
