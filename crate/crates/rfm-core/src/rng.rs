//! Deterministic stream-splitting built on counter-addressed ChaCha streams.
//!
//! Every Monte-Carlo consumer takes an explicit stream so that results are a
//! pure function of (seed, stream id), independent of worker count or
//! evaluation order.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Domain tags keep unrelated consumers of the same seed independent.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StreamKind {
    Trajectory,
    Bootstrap,
    Proposal,
    Diagnostic,
    Prior,
}

impl StreamKind {
    fn tag(self) -> u64 {
        match self {
            StreamKind::Trajectory => 0x1,
            StreamKind::Bootstrap => 0x2,
            StreamKind::Proposal => 0x3,
            StreamKind::Diagnostic => 0x4,
            StreamKind::Prior => 0x5,
        }
    }
}

/// RNG for stream `index` of the given kind under a master seed.
pub fn stream(seed: u64, kind: StreamKind, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // ChaCha exposes a 64-bit stream address; fold the kind into the high bits.
    rng.set_stream((kind.tag() << 56) ^ index);
    rng
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn streams_are_independent_of_draw_order() {
        let mut a = stream(42, StreamKind::Trajectory, 7);
        let first: f64 = a.gen();
        // Drawing from another stream does not perturb stream 7.
        let mut other = stream(42, StreamKind::Trajectory, 8);
        let _: [f64; 16] = other.gen();
        let mut b = stream(42, StreamKind::Trajectory, 7);
        let again: f64 = b.gen();
        assert_eq!(first, again);
    }

    #[test]
    fn kinds_do_not_collide() {
        let mut a = stream(1, StreamKind::Trajectory, 0);
        let mut b = stream(1, StreamKind::Bootstrap, 0);
        let xa: u64 = a.gen();
        let xb: u64 = b.gen();
        assert_ne!(xa, xb);
    }
}
