use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Generator for sample `stream` under a single 64-bit seed. Each stream is
/// an independent ChaCha keystream, so sample `i` does not depend on how many
/// samples are drawn in total.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn streams_are_independent_of_count() {
        let a: u64 = stream_rng(9, 3).random();
        let b: u64 = stream_rng(9, 3).random();
        let c: u64 = stream_rng(9, 4).random();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }
}
