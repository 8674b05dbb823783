//! Prime moduli and residue arithmetic mod p.

use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PrimeError {
    #[error("{0} is not prime")]
    NotPrime(u32),
    #[error("operation requires an odd prime, got p = 2")]
    EvenPrime,
}

/// A prime modulus. Small by construction: every group we handle has
/// order at most a few thousand, so `p` fits comfortably in `u32` and
/// products of two residues fit in `u64`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Prime(u32);

impl Prime {
    pub fn new(p: u32) -> Result<Self, PrimeError> {
        if is_prime(p) {
            Ok(Prime(p))
        } else {
            Err(PrimeError::NotPrime(p))
        }
    }

    #[inline]
    pub fn get(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn as_usize(self) -> usize {
        self.0 as usize
    }

    pub fn is_odd(self) -> bool {
        self.0 != 2
    }

    /// Rejects `p = 2` with [`PrimeError::EvenPrime`].
    pub fn require_odd(self) -> Result<Self, PrimeError> {
        if self.is_odd() {
            Ok(self)
        } else {
            Err(PrimeError::EvenPrime)
        }
    }

    /// `p^k`, or `None` on overflow.
    pub fn pow(self, k: u32) -> Option<usize> {
        (self.0 as usize).checked_pow(k)
    }

    /// Returns `k` with `n = p^k`, or `None` if `n` is not a power of `p`.
    pub fn log(self, mut n: usize) -> Option<u32> {
        if n == 0 {
            return None;
        }
        let p = self.as_usize();
        let mut k = 0;
        while n.is_multiple_of(p) {
            n /= p;
            k += 1;
        }
        (n == 1).then_some(k)
    }

    pub fn is_power(self, n: usize) -> bool {
        self.log(n).is_some()
    }

    #[inline]
    pub fn reduce(self, x: u64) -> u32 {
        (x % self.0 as u64) as u32
    }

    #[inline]
    pub fn add(self, a: u32, b: u32) -> u32 {
        let s = a + b;
        if s >= self.0 {
            s - self.0
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(self, a: u32, b: u32) -> u32 {
        if a >= b {
            a - b
        } else {
            a + self.0 - b
        }
    }

    #[inline]
    pub fn neg(self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.0 - a
        }
    }

    #[inline]
    pub fn mul(self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.0 as u64) as u32
    }

    pub fn pow_mod(self, base: u32, mut exp: u64) -> u32 {
        let mut acc = 1 % self.0;
        let mut b = base % self.0;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, b);
            }
            b = self.mul(b, b);
            exp >>= 1;
        }
        acc
    }

    /// Inverse of a nonzero residue, via Fermat.
    pub fn inv(self, a: u32) -> Option<u32> {
        let a = a % self.0;
        (a != 0).then(|| self.pow_mod(a, self.0 as u64 - 2))
    }

    /// `C(p, r) / p mod p` for `1 <= r <= p - 1`.
    ///
    /// The integer binomial is formed exactly and divided by `p` before
    /// reducing; `p | C(p, r)` on that range makes the division exact.
    pub fn reduced_binomial(self, r: u32) -> u32 {
        assert!(r >= 1 && r < self.0, "r must lie in [1, p-1]");
        let c = binomial(self.0 as u64, r as u64);
        debug_assert_eq!(c % self.0 as u128, 0);
        ((c / self.0 as u128) % self.0 as u128) as u32
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

pub fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn binomial(n: u64, k: u64) -> u128 {
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}
