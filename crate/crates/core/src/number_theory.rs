//! Elementary modular arithmetic over `u64` with `u128` intermediates.
//!
//! Everything here is desk-scale: factorization is plain trial division with a
//! hard input bound, and orders are found by walking the divisors of the
//! Carmichael function.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest input `factorize` accepts unless a caller passes its own bound.
pub const DEFAULT_FACTOR_BOUND: u64 = 1_000_000_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NumberTheoryError {
    #[error("{value} is not a unit modulo {modulus}")]
    NotAUnit { value: u64, modulus: u64 },
    #[error("{value} is outside the supported range [{min}, {max}]")]
    OutOfRange { value: u64, min: u64, max: u64 },
    #[error("modulus must be at least 2, got {0}")]
    BadModulus(u64),
}

pub type Result<T> = std::result::Result<T, NumberTheoryError>;

/// Euclidean algorithm. `gcd(0, 0)` is 0.
pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

pub fn lcm(a: u64, b: u64) -> u64 {
    if a == 0 || b == 0 {
        return 0;
    }
    a / gcd(a, b) * b
}

#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

/// Square-and-multiply. Returns 0 for modulus 1.
pub fn mod_pow(base: u64, mut exp: u64, modulus: u64) -> u64 {
    if modulus == 1 {
        return 0;
    }
    let mut result = 1u64;
    let mut b = base % modulus;
    while exp > 0 {
        if exp & 1 == 1 {
            result = mul_mod(result, b, modulus);
        }
        b = mul_mod(b, b, modulus);
        exp >>= 1;
    }
    result
}

/// Extended Euclid: returns `(g, x, y)` with `a*x + b*y = g`.
pub fn extended_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    let (mut old_r, mut r) = (a, b);
    let (mut old_s, mut s) = (1i128, 0i128);
    let (mut old_t, mut t) = (0i128, 1i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
        (old_t, t) = (t, old_t - q * t);
    }
    (old_r, old_s, old_t)
}

pub fn mod_inverse(a: u64, m: u64) -> Result<u64> {
    if m < 2 {
        return Err(NumberTheoryError::BadModulus(m));
    }
    let (g, x, _) = extended_gcd((a % m) as i128, m as i128);
    if g != 1 {
        return Err(NumberTheoryError::NotAUnit {
            value: a,
            modulus: m,
        });
    }
    Ok(x.rem_euclid(m as i128) as u64)
}

/// A residue class `value mod modulus` with `value < modulus`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Residue {
    value: u64,
    modulus: u64,
}

impl Residue {
    pub fn new(value: u64, modulus: u64) -> Result<Self> {
        if modulus < 2 {
            return Err(NumberTheoryError::BadModulus(modulus));
        }
        Ok(Residue {
            value: value % modulus,
            modulus,
        })
    }

    pub fn one(modulus: u64) -> Result<Self> {
        Residue::new(1, modulus)
    }

    pub fn value(self) -> u64 {
        self.value
    }

    pub fn modulus(self) -> u64 {
        self.modulus
    }

    pub fn is_unit(self) -> bool {
        gcd(self.value, self.modulus) == 1
    }

    pub fn pow(self, exp: u64) -> Residue {
        Residue {
            value: mod_pow(self.value, exp, self.modulus),
            modulus: self.modulus,
        }
    }

    pub fn inverse(self) -> Result<Residue> {
        Ok(Residue {
            value: mod_inverse(self.value, self.modulus)?,
            modulus: self.modulus,
        })
    }
}

/// Panics if the moduli differ.
impl std::ops::Mul for Residue {
    type Output = Residue;
    fn mul(self, other: Residue) -> Residue {
        assert_eq!(self.modulus, other.modulus, "residue moduli differ");
        Residue {
            value: mul_mod(self.value, other.value, self.modulus),
            modulus: self.modulus,
        }
    }
}

impl fmt::Display for Residue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self.value, self.modulus)
    }
}

/// Prime-power decomposition, primes strictly increasing.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Factorization {
    factors: Vec<(u64, u32)>,
}

impl Factorization {
    pub fn factors(&self) -> &[(u64, u32)] {
        &self.factors
    }

    pub fn prime_powers(&self) -> Vec<u64> {
        self.factors.iter().map(|&(p, e)| p.pow(e)).collect()
    }

    pub fn reconstruct(&self) -> u64 {
        self.factors.iter().map(|&(p, e)| p.pow(e)).product()
    }

    pub fn is_prime_power(&self) -> bool {
        self.factors.len() == 1
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

pub fn factorize(n: u64) -> Result<Factorization> {
    factorize_bounded(n, DEFAULT_FACTOR_BOUND)
}

/// Trial division for `2 <= n <= bound`.
pub fn factorize_bounded(n: u64, bound: u64) -> Result<Factorization> {
    if n < 2 || n > bound {
        return Err(NumberTheoryError::OutOfRange {
            value: n,
            min: 2,
            max: bound,
        });
    }
    let mut rest = n;
    let mut factors = Vec::new();
    let mut d = 2u64;
    while d.saturating_mul(d) <= rest {
        if rest.is_multiple_of(d) {
            let mut e = 0;
            while rest.is_multiple_of(d) {
                rest /= d;
                e += 1;
            }
            factors.push((d, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if rest > 1 {
        factors.push((rest, 1));
    }
    Ok(Factorization { factors })
}

pub fn euler_phi(n: u64) -> Result<u64> {
    if n == 0 {
        return Err(NumberTheoryError::OutOfRange {
            value: 0,
            min: 1,
            max: DEFAULT_FACTOR_BOUND,
        });
    }
    if n == 1 {
        return Ok(1);
    }
    Ok(factorize(n)?
        .factors
        .iter()
        .map(|&(p, e)| (p - 1) * p.pow(e - 1))
        .product())
}

/// Exponent of `(Z/nZ)^x`: lcm over prime powers, halving `phi(2^e)` for `e >= 3`.
pub fn carmichael_lambda(n: u64) -> Result<u64> {
    if n == 0 {
        return Err(NumberTheoryError::OutOfRange {
            value: 0,
            min: 1,
            max: DEFAULT_FACTOR_BOUND,
        });
    }
    if n == 1 {
        return Ok(1);
    }
    let fac = factorize(n)?;
    Ok(fac.factors.iter().fold(1u64, |acc, &(p, e)| {
        let phi = (p - 1) * p.pow(e - 1);
        let component = if p == 2 && e >= 3 { phi / 2 } else { phi };
        lcm(acc, component)
    }))
}

/// All positive divisors, ascending.
pub fn divisors(n: u64) -> Result<Vec<u64>> {
    if n == 1 {
        return Ok(vec![1]);
    }
    let fac = factorize(n)?;
    let mut divs = vec![1u64];
    for &(p, e) in fac.factors() {
        let current = divs.clone();
        let mut pk = 1u64;
        for _ in 0..e {
            pk *= p;
            divs.extend(current.iter().map(|d| d * pk));
        }
    }
    divs.sort_unstable();
    Ok(divs)
}

/// Least `k >= 1` with `g^k = 1 (mod n)`, searched among divisors of lambda(n).
pub fn multiplicative_order(g: u64, n: u64) -> Result<u64> {
    if n == 1 {
        return Ok(1);
    }
    if n == 0 || gcd(g % n, n) != 1 {
        return Err(NumberTheoryError::NotAUnit {
            value: g,
            modulus: n,
        });
    }
    let lambda = carmichael_lambda(n)?;
    let order = divisors(lambda)?
        .into_iter()
        .find(|&d| mod_pow(g, d, n) == 1)
        .expect("g^lambda(n) = 1 for every unit");
    Ok(order)
}

/// Pairwise-coprime prime powers whose product is `k`.
pub fn crt_split(k: u64) -> Result<Vec<u64>> {
    Ok(factorize(k)?.prime_powers())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrtVerdict {
    pub overall: bool,
    pub components: Vec<u64>,
    pub per_component: Vec<bool>,
}

/// Tests `h = 1 (mod k)` directly and on every prime-power component of `k`.
pub fn crt_check_unity(h: u64, k: u64) -> Result<CrtVerdict> {
    if k < 2 {
        return Err(NumberTheoryError::BadModulus(k));
    }
    let components = crt_split(k)?;
    let per_component = components.iter().map(|&q| h % q == 1 % q).collect();
    Ok(CrtVerdict {
        overall: h % k == 1,
        components,
        per_component,
    })
}

/// Units of `Z/mZ` in ascending order.
pub fn units(m: u64) -> Vec<u64> {
    (1..m).filter(|&v| gcd(v, m) == 1).collect()
}
