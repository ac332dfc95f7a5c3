//! Arithmetic modulo the Mersenne prime 2^61 − 1.

use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

/// 2^61 − 1.
pub const MODULUS: u64 = (1 << 61) - 1;

/// Element of F_p with p = [`MODULUS`], kept reduced into `0..p`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Fp(u64);

impl Fp {
    pub const ZERO: Fp = Fp(0);
    pub const ONE: Fp = Fp(1);

    pub fn new(v: u64) -> Self {
        Fp(reduce(v as u128))
    }

    pub fn from_i64(v: i64) -> Self {
        if v >= 0 {
            Fp::new(v as u64)
        } else {
            -Fp::new(v.unsigned_abs())
        }
    }

    /// Accepts only canonical representatives.
    pub fn from_canonical(v: u64) -> Option<Self> {
        (v < MODULUS).then_some(Fp(v))
    }

    pub fn value(self) -> u64 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        Fp(rng.gen_range(0..MODULUS))
    }

    pub fn pow(self, mut exp: u64) -> Self {
        let mut base = self;
        let mut acc = Fp::ONE;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            exp >>= 1;
        }
        acc
    }

    /// Multiplicative inverse by Fermat; `None` for zero.
    pub fn inverse(self) -> Option<Self> {
        (!self.is_zero()).then(|| self.pow(MODULUS - 2))
    }
}

#[inline]
fn reduce(v: u128) -> u64 {
    // 2^61 ≡ 1, so fold the high bits down twice
    let folded = (v & MODULUS as u128) + (v >> 61);
    let folded = (folded & MODULUS as u128) + (folded >> 61);
    let r = folded as u64;
    if r >= MODULUS {
        r - MODULUS
    } else {
        r
    }
}

impl std::ops::Add for Fp {
    type Output = Fp;
    fn add(self, rhs: Fp) -> Fp {
        let s = self.0 + rhs.0;
        Fp(if s >= MODULUS { s - MODULUS } else { s })
    }
}

impl std::ops::Sub for Fp {
    type Output = Fp;
    fn sub(self, rhs: Fp) -> Fp {
        if self.0 >= rhs.0 {
            Fp(self.0 - rhs.0)
        } else {
            Fp(self.0 + MODULUS - rhs.0)
        }
    }
}

impl std::ops::Mul for Fp {
    type Output = Fp;
    fn mul(self, rhs: Fp) -> Fp {
        Fp(reduce(self.0 as u128 * rhs.0 as u128))
    }
}

impl std::ops::Neg for Fp {
    type Output = Fp;
    fn neg(self) -> Fp {
        if self.0 == 0 {
            self
        } else {
            Fp(MODULUS - self.0)
        }
    }
}

impl fmt::Debug for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}
