//! Arithmetic in the prime field Z_p for moduli below 2^61.
//!
//! Residues are kept canonical in `[0, p)`. Products are formed in a 128-bit
//! intermediate, which is exact because `p < 2^61`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use rand::RngCore;

use crate::error::{Error, Result};

/// 2^61 − 1, a Mersenne prime. Every 7-byte big-endian chunk fits below it.
pub const DEFAULT_PRIME: u64 = (1 << 61) - 1;

/// Exclusive upper bound on supported moduli.
pub const MODULUS_LIMIT: u64 = 1 << 61;

/// A prime `p` with `2 < p < 2^61`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PrimeModulus(u64);

impl PrimeModulus {
    pub fn new(p: u64) -> Result<Self> {
        if p <= 2 || p >= MODULUS_LIMIT {
            return Err(Error::Parameter(format!(
                "modulus {p} outside the supported range (2, 2^61)"
            )));
        }
        if !is_prime(p) {
            return Err(Error::Parameter(format!("modulus {p} is not prime")));
        }
        Ok(PrimeModulus(p))
    }

    pub fn default_prime() -> Self {
        PrimeModulus(DEFAULT_PRIME)
    }

    #[inline]
    pub fn value(self) -> u64 {
        self.0
    }

    /// Lifts a raw integer into the field, failing if it is not already canonical.
    pub fn element(self, value: u64) -> Result<FieldElement> {
        FieldElement::new(value, self)
    }

    /// Lifts a raw integer into the field, reducing it mod p.
    pub fn reduce(self, value: u64) -> FieldElement {
        FieldElement {
            value: value % self.0,
            modulus: self,
        }
    }

    pub fn zero(self) -> FieldElement {
        FieldElement {
            value: 0,
            modulus: self,
        }
    }

    pub fn one(self) -> FieldElement {
        FieldElement {
            value: 1,
            modulus: self,
        }
    }

    // Raw residue arithmetic. Inputs must already be canonical.

    #[inline]
    pub(crate) fn add_raw(self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.0 {
            s - self.0
        } else {
            s
        }
    }

    #[inline]
    pub(crate) fn sub_raw(self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.0 - b
        }
    }

    #[inline]
    pub(crate) fn mul_raw(self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.0 as u128) as u64
    }

    pub(crate) fn pow_raw(self, mut base: u64, mut exp: u64) -> u64 {
        let mut acc = 1 % self.0;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul_raw(acc, base);
            }
            base = self.mul_raw(base, base);
            exp >>= 1;
        }
        acc
    }

    /// Inverse by Fermat's little theorem.
    pub(crate) fn inv_raw(self, a: u64) -> Result<u64> {
        if a == 0 {
            return Err(Error::DivisionByZero);
        }
        Ok(self.pow_raw(a, self.0 - 2))
    }
}

impl fmt::Display for PrimeModulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A canonical residue together with the modulus it lives under.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FieldElement {
    value: u64,
    modulus: PrimeModulus,
}

impl FieldElement {
    pub fn new(value: u64, modulus: PrimeModulus) -> Result<Self> {
        if value >= modulus.0 {
            return Err(Error::Range(format!(
                "value {value} is not below the modulus {modulus}"
            )));
        }
        Ok(FieldElement { value, modulus })
    }

    #[inline]
    pub fn value(self) -> u64 {
        self.value
    }

    #[inline]
    pub fn modulus(self) -> PrimeModulus {
        self.modulus
    }

    pub fn is_zero(self) -> bool {
        self.value == 0
    }

    fn same_field(self, other: FieldElement) -> Result<PrimeModulus> {
        if self.modulus != other.modulus {
            return Err(Error::Parameter(format!(
                "modulus mismatch: {} vs {}",
                self.modulus, other.modulus
            )));
        }
        Ok(self.modulus)
    }

    pub fn checked_add(self, other: FieldElement) -> Result<FieldElement> {
        let m = self.same_field(other)?;
        Ok(FieldElement {
            value: m.add_raw(self.value, other.value),
            modulus: m,
        })
    }

    pub fn checked_sub(self, other: FieldElement) -> Result<FieldElement> {
        let m = self.same_field(other)?;
        Ok(FieldElement {
            value: m.sub_raw(self.value, other.value),
            modulus: m,
        })
    }

    pub fn checked_mul(self, other: FieldElement) -> Result<FieldElement> {
        let m = self.same_field(other)?;
        Ok(FieldElement {
            value: m.mul_raw(self.value, other.value),
            modulus: m,
        })
    }

    /// Multiplicative inverse; zero has none.
    pub fn inv(self) -> Result<FieldElement> {
        Ok(FieldElement {
            value: self.modulus.inv_raw(self.value)?,
            modulus: self.modulus,
        })
    }

    pub fn pow(self, exp: u64) -> FieldElement {
        FieldElement {
            value: self.modulus.pow_raw(self.value, exp),
            modulus: self.modulus,
        }
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

// Operator forms panic on a modulus mismatch; use the `checked_*` methods
// where operands come from untrusted sources.

impl Add for FieldElement {
    type Output = FieldElement;
    fn add(self, rhs: FieldElement) -> FieldElement {
        self.checked_add(rhs)
            .expect("field operands under different moduli")
    }
}

impl Sub for FieldElement {
    type Output = FieldElement;
    fn sub(self, rhs: FieldElement) -> FieldElement {
        self.checked_sub(rhs)
            .expect("field operands under different moduli")
    }
}

impl Mul for FieldElement {
    type Output = FieldElement;
    fn mul(self, rhs: FieldElement) -> FieldElement {
        self.checked_mul(rhs)
            .expect("field operands under different moduli")
    }
}

impl Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        FieldElement {
            value: self.modulus.sub_raw(0, self.value),
            modulus: self.modulus,
        }
    }
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin, exact for every 64-bit input.
///
/// The first twelve primes as witnesses suffice for all n < 3.3 * 10^24.
pub fn is_prime(n: u64) -> bool {
    const WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &q in &WITNESSES {
        if n.is_multiple_of(q) {
            return n == q;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &WITNESSES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Draws a uniform residue by masked rejection sampling.
pub fn sample_uniform<R: RngCore + ?Sized>(modulus: PrimeModulus, rng: &mut R) -> FieldElement {
    FieldElement {
        value: sample_raw(modulus, rng),
        modulus,
    }
}

pub(crate) fn sample_raw<R: RngCore + ?Sized>(modulus: PrimeModulus, rng: &mut R) -> u64 {
    let p = modulus.0;
    let bits = 64 - (p - 1).leading_zeros();
    let mask = if bits == 64 {
        u64::MAX
    } else {
        (1u64 << bits) - 1
    };
    loop {
        let candidate = rng.next_u64() & mask;
        if candidate < p {
            return candidate;
        }
    }
}
