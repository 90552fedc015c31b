use rand::seq::index::sample;
use rand::Rng;

/// A type in `S = {1, 0}`.
pub type Type = u8;

/// A `{1,0}`-valued assignment over sites, bit-packed, with a cached count
/// of ones.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Configuration {
    bits: Vec<u64>,
    len: usize,
    ones: usize,
}

impl Configuration {
    pub fn zeros(len: usize) -> Self {
        Configuration {
            bits: vec![0; len.div_ceil(64)],
            len,
            ones: 0,
        }
    }

    pub fn ones(len: usize) -> Self {
        let mut c = Self::zeros(len);
        for x in 0..len {
            c.set(x, 1);
        }
        c
    }

    /// Ones exactly at `sites`.
    pub fn with_ones(len: usize, sites: &[usize]) -> Self {
        let mut c = Self::zeros(len);
        for &x in sites {
            c.set(x, 1);
        }
        c
    }

    pub fn from_types(types: &[Type]) -> Self {
        let mut c = Self::zeros(types.len());
        for (x, &t) in types.iter().enumerate() {
            c.set(x, t);
        }
        c
    }

    /// A draw from `u_m`, the uniform law on configurations with exactly
    /// `m` ones.
    pub fn uniform_with_ones<R: Rng + ?Sized>(len: usize, m: usize, rng: &mut R) -> Self {
        assert!(m <= len, "cannot place {m} ones on {len} sites");
        let mut c = Self::zeros(len);
        for x in sample(rng, len, m) {
            c.set(x, 1);
        }
        c
    }

    /// Configuration whose bits are the low `len` bits of `code`.
    pub fn from_code(len: usize, code: u64) -> Self {
        let mut c = Self::zeros(len);
        for x in 0..len {
            c.set(x, ((code >> x) & 1) as Type);
        }
        c
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, x: usize) -> Type {
        ((self.bits[x >> 6] >> (x & 63)) & 1) as Type
    }

    /// Sets `xi(x) = t`; returns whether the type changed.
    #[inline]
    pub fn set(&mut self, x: usize, t: Type) -> bool {
        debug_assert!(t <= 1 && x < self.len);
        let old = self.get(x);
        if old == t {
            return false;
        }
        self.bits[x >> 6] ^= 1 << (x & 63);
        if t == 1 {
            self.ones += 1;
        } else {
            self.ones -= 1;
        }
        true
    }

    pub fn ones_count(&self) -> usize {
        self.ones
    }

    pub fn is_all_ones(&self) -> bool {
        self.ones == self.len
    }

    pub fn is_all_zeros(&self) -> bool {
        self.ones == 0
    }

    pub fn types(&self) -> Vec<Type> {
        (0..self.len).map(|x| self.get(x)).collect()
    }

    /// `xi(x)` as `f64`, for linear algebra on configurations.
    pub fn as_f64(&self) -> Vec<f64> {
        (0..self.len).map(|x| self.get(x) as f64).collect()
    }
}
