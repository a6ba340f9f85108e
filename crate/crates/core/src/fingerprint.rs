//! 64-bit FNV-1a fingerprinting for reproducibility stamps.
//!
//! Every trace and output file carries a fingerprint of the exact inputs that
//! produced it, so reruns can be checked for bit-identical provenance. FNV-1a
//! is used for its simplicity and stability — this is a provenance stamp, not
//! a cryptographic commitment.

const FNV_OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
const FNV_PRIME: u64 = 0x0000_0100_0000_01b3;

/// Incremental FNV-1a hasher.
#[derive(Debug, Clone)]
pub struct Fingerprint(u64);

impl Default for Fingerprint {
    fn default() -> Self {
        Fingerprint(FNV_OFFSET)
    }
}

impl Fingerprint {
    pub fn new() -> Fingerprint {
        Fingerprint::default()
    }

    pub fn write_bytes(&mut self, bytes: &[u8]) -> &mut Self {
        for &b in bytes {
            self.0 ^= u64::from(b);
            self.0 = self.0.wrapping_mul(FNV_PRIME);
        }
        self
    }

    pub fn write_u64(&mut self, v: u64) -> &mut Self {
        self.write_bytes(&v.to_le_bytes())
    }

    pub fn write_i64(&mut self, v: i64) -> &mut Self {
        self.write_bytes(&v.to_le_bytes())
    }

    /// Hashes the exact bit pattern of the float (no rounding).
    pub fn write_f64(&mut self, v: f64) -> &mut Self {
        self.write_u64(v.to_bits())
    }

    pub fn finish(&self) -> u64 {
        self.0
    }
}

/// One-shot hash of a byte string.
pub fn fnv1a64(bytes: &[u8]) -> u64 {
    let mut f = Fingerprint::new();
    f.write_bytes(bytes);
    f.finish()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_vectors() {
        // Standard FNV-1a test vectors.
        assert_eq!(fnv1a64(b""), 0xcbf2_9ce4_8422_2325);
        assert_eq!(fnv1a64(b"a"), 0xaf63_dc4c_8601_ec8c);
        assert_eq!(fnv1a64(b"foobar"), 0x85944171f73967e8);
    }

    #[test]
    fn float_bits_distinguish_signed_zero() {
        let mut a = Fingerprint::new();
        a.write_f64(0.0);
        let mut b = Fingerprint::new();
        b.write_f64(-0.0);
        assert_ne!(a.finish(), b.finish());
    }
}
