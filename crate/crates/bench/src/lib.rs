//! Shared fixtures for the criterion benches.

use cosetrepair::{encode, Codeword, FieldCtx, Message};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Fields benchmarked, as `(label, p, m, t)`.
pub const FIELDS: &[(&str, u32, u32, u32)] = &[
    ("gf9_gf3", 3, 1, 2),
    ("gf64_gf8", 2, 3, 2),
    ("gf256_gf16", 2, 4, 2),
];

/// A random codeword of `RS(F, k)` with `f(0)` erased.
pub fn erased_codeword(ctx: &FieldCtx, k: usize, seed: u64) -> Codeword {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let msg = Message::random(ctx, k, &mut rng);
    encode(ctx, &msg)
        .and_then(Codeword::erase_zero)
        .expect("k is in range")
}
