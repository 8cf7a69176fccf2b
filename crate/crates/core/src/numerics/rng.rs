use rand::RngCore;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Exp1, Open01, StandardNormal};

/// A reproducible random stream addressed by `(seed, stream_id)`.
///
/// Backed by the ChaCha8 counter-mode generator: the seed fixes the key and
/// `stream_id` selects the 64-bit stream (nonce), so streams with distinct
/// ids never overlap and each one is a pure function of its address.
/// A stream is single-owner; parallel work takes one [`split`](Self::split)
/// child per task.
#[derive(Debug, Clone)]
pub struct RngStream {
    seed: u64,
    stream_id: u64,
    inner: ChaCha8Rng,
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

impl RngStream {
    pub fn new(seed: u64, stream_id: u64) -> Self {
        let mut inner = ChaCha8Rng::seed_from_u64(seed);
        inner.set_stream(stream_id);
        Self {
            seed,
            stream_id,
            inner,
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream_id(&self) -> u64 {
        self.stream_id
    }

    /// Child stream number `index`, independent of the parent's position.
    ///
    /// Children of distinct parents live under distinct derived keys, so
    /// block-partitioned Monte Carlo never reuses variates.
    pub fn split(&self, index: u64) -> RngStream {
        let key =
            splitmix64(self.seed ^ splitmix64(self.stream_id.wrapping_add(0x5851_f42d_4c95_7f2d)));
        RngStream::new(key, index)
    }

    /// Uniform variate on the open interval `(0, 1)`.
    pub fn uniform(&mut self) -> f64 {
        self.inner.sample(Open01)
    }

    /// Unit-mean exponential variate.
    pub fn exp1(&mut self) -> f64 {
        self.inner.sample(Exp1)
    }

    pub fn std_normal(&mut self) -> f64 {
        self.inner.sample(StandardNormal)
    }
}

impl RngCore for RngStream {
    fn next_u32(&mut self) -> u32 {
        self.inner.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        self.inner.fill_bytes(dst)
    }
}
