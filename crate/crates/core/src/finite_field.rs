//! Arithmetic in `GF(p^n) = F_p[x] / <I(x)>` for a fixed monic irreducible `I`.
//!
//! Elements are coefficient vectors, little-endian by degree. The integer
//! label of an element is the base-`p` value of its digit string, so for
//! `p = 2` the label is the usual bit pattern (AES bytes map to themselves).
//! `s_map` and `c_map` convert between labels `1..q-1` and nonzero elements.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::number_theory::is_prime;

/// Irreducibility is checked by exhaustive divisor search, so fields are capped here.
pub const MAX_FIELD_ORDER: u64 = 1 << 16;

/// The Rijndael polynomial `x^8 + x^4 + x^3 + x + 1`.
pub const AES_POLY: u64 = 0x11B;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("polynomial is reducible over F_{p}")]
    NotIrreducible { p: u64 },
    #[error("invalid polynomial: {0}")]
    InvalidPolynomial(String),
    #[error("field order {0} exceeds the supported maximum {MAX_FIELD_ORDER}")]
    FieldTooLarge(u64),
    #[error("label {label} outside [1, {max}]")]
    OutOfRange { label: u64, max: u64 },
    #[error("zero has no multiplicative label or inverse")]
    ZeroElement,
    #[error("0^0 is undefined")]
    ZeroToZero,
}

pub type Result<T> = std::result::Result<T, FieldError>;

/// A validated `GF(p^n)` description.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawFieldSpec", into = "RawFieldSpec")]
pub struct FieldSpec {
    p: u64,
    n: usize,
    irreducible: Vec<u64>,
    q: u64,
}

#[derive(Serialize, Deserialize)]
struct RawFieldSpec {
    p: u64,
    n: usize,
    irreducible: Vec<u64>,
}

impl TryFrom<RawFieldSpec> for FieldSpec {
    type Error = FieldError;
    fn try_from(raw: RawFieldSpec) -> Result<Self> {
        FieldSpec::new(raw.p, raw.n, raw.irreducible)
    }
}

impl From<FieldSpec> for RawFieldSpec {
    fn from(f: FieldSpec) -> Self {
        RawFieldSpec {
            p: f.p,
            n: f.n,
            irreducible: f.irreducible,
        }
    }
}

/// A field element; `coeffs[i]` is the coefficient of `x^i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldElement {
    coeffs: Vec<u64>,
}

impl FieldElement {
    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }
}

impl FieldSpec {
    /// `irreducible` is little-endian with length `n + 1` and leading coefficient 1.
    pub fn new(p: u64, n: usize, irreducible: Vec<u64>) -> Result<Self> {
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        if n == 0 {
            return Err(FieldError::InvalidPolynomial(
                "degree must be at least 1".into(),
            ));
        }
        if irreducible.len() != n + 1 || irreducible[n] != 1 {
            return Err(FieldError::InvalidPolynomial(format!(
                "expected a monic polynomial of degree {n}"
            )));
        }
        if let Some(&c) = irreducible.iter().find(|&&c| c >= p) {
            return Err(FieldError::InvalidPolynomial(format!(
                "coefficient {c} not reduced mod {p}"
            )));
        }
        let q = (p as u128)
            .checked_pow(n as u32)
            .filter(|&q| q <= MAX_FIELD_ORDER as u128);
        let q = match q {
            Some(q) => q as u64,
            None => return Err(FieldError::FieldTooLarge(p.saturating_pow(n as u32))),
        };
        if !is_irreducible(&irreducible, p) {
            return Err(FieldError::NotIrreducible { p });
        }
        Ok(FieldSpec {
            p,
            n,
            irreducible,
            q,
        })
    }

    /// Characteristic-2 field from a bitmask, e.g. `0x11B` for AES.
    pub fn from_bitmask(mask: u64) -> Result<Self> {
        if mask < 2 {
            return Err(FieldError::InvalidPolynomial(format!(
                "{mask:#x} has degree < 1"
            )));
        }
        let n = 63 - mask.leading_zeros() as usize;
        let coeffs = (0..=n).map(|i| (mask >> i) & 1).collect();
        FieldSpec::new(2, n, coeffs)
    }

    pub fn aes() -> Self {
        FieldSpec::from_bitmask(AES_POLY).expect("Rijndael polynomial is irreducible")
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    /// Order of the multiplicative group, `q - 1`.
    pub fn group_order(&self) -> u64 {
        self.q - 1
    }

    pub fn irreducible(&self) -> &[u64] {
        &self.irreducible
    }

    pub fn bitmask(&self) -> Option<u64> {
        (self.p == 2).then(|| {
            self.irreducible
                .iter()
                .enumerate()
                .fold(0u64, |acc, (i, &c)| acc | (c << i))
        })
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement {
            coeffs: vec![0; self.n],
        }
    }

    pub fn one(&self) -> FieldElement {
        let mut coeffs = vec![0; self.n];
        coeffs[0] = 1;
        FieldElement { coeffs }
    }

    /// Element for any label in `[0, q-1]`, zero included.
    pub fn element(&self, label: u64) -> Result<FieldElement> {
        if label >= self.q {
            return Err(FieldError::OutOfRange {
                label,
                max: self.q - 1,
            });
        }
        let mut rest = label;
        let coeffs = (0..self.n)
            .map(|_| {
                let c = rest % self.p;
                rest /= self.p;
                c
            })
            .collect();
        Ok(FieldElement { coeffs })
    }

    /// Base-`p` value of the coefficient string.
    pub fn index(&self, e: &FieldElement) -> u64 {
        e.coeffs.iter().rev().fold(0u64, |acc, &c| acc * self.p + c)
    }

    /// `s : {1..q-1} -> GF(q)^x`.
    pub fn s_map(&self, h: u64) -> Result<FieldElement> {
        if h == 0 || h >= self.q {
            return Err(FieldError::OutOfRange {
                label: h,
                max: self.q - 1,
            });
        }
        self.element(h)
    }

    /// `C = s^{-1}`.
    pub fn c_map(&self, e: &FieldElement) -> Result<u64> {
        if e.is_zero() {
            return Err(FieldError::ZeroElement);
        }
        Ok(self.index(e))
    }

    pub fn add(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        let coeffs = a
            .coeffs
            .iter()
            .zip(&b.coeffs)
            .map(|(x, y)| (x + y) % self.p)
            .collect();
        FieldElement { coeffs }
    }

    pub fn fmul(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        let p = self.p;
        let n = self.n;
        let mut prod = vec![0u64; 2 * n - 1];
        for (i, &x) in a.coeffs.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.coeffs.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x * y) % p;
            }
        }
        // reduce from the top using x^n = -(I(x) - x^n)
        for d in (n..prod.len()).rev() {
            let c = prod[d];
            if c == 0 {
                continue;
            }
            prod[d] = 0;
            for (k, &ik) in self.irreducible[..n].iter().enumerate() {
                let sub = c * ik % p;
                let at = d - n + k;
                prod[at] = (prod[at] + p - sub) % p;
            }
        }
        prod.truncate(n);
        FieldElement { coeffs: prod }
    }

    /// Inverse by extended Euclid on `(a, I)` in `F_p[x]`.
    pub fn finv(&self, a: &FieldElement) -> Result<FieldElement> {
        if a.is_zero() {
            return Err(FieldError::ZeroElement);
        }
        let p = self.p;
        let mut old_r = trim(self.irreducible.clone());
        let mut r = trim(a.coeffs.clone());
        let mut old_s: Vec<u64> = vec![];
        let mut s: Vec<u64> = vec![1];
        while !r.is_empty() {
            let (quot, rem) = poly_divmod(&old_r, &r, p);
            let next_s = poly_sub(&old_s, &poly_mul(&quot, &s, p), p);
            old_r = std::mem::replace(&mut r, rem);
            old_s = std::mem::replace(&mut s, next_s);
        }
        // old_r is a nonzero constant since I is irreducible
        debug_assert_eq!(old_r.len(), 1);
        let scale = inv_mod_prime(old_r[0], p);
        let mut coeffs: Vec<u64> = old_s.iter().map(|&c| c * scale % p).collect();
        coeffs.resize(self.n, 0);
        Ok(FieldElement { coeffs })
    }

    pub fn fpow(&self, a: &FieldElement, mut e: u64) -> Result<FieldElement> {
        if a.is_zero() {
            return if e == 0 {
                Err(FieldError::ZeroToZero)
            } else {
                Ok(self.zero())
            };
        }
        let mut result = self.one();
        let mut base = a.clone();
        while e > 0 {
            if e & 1 == 1 {
                result = self.fmul(&result, &base);
            }
            base = self.fmul(&base, &base);
            e >>= 1;
        }
        Ok(result)
    }

    /// Product of two nonzero labels, as a label.
    pub fn mul_labels(&self, a: u64, b: u64) -> Result<u64> {
        let prod = self.fmul(&self.s_map(a)?, &self.s_map(b)?);
        self.c_map(&prod)
    }

    pub fn inv_label(&self, a: u64) -> Result<u64> {
        self.c_map(&self.finv(&self.s_map(a)?)?)
    }

    /// Polynomial text: `x^3+x+1` style for display.
    pub fn describe(&self, e: &FieldElement) -> String {
        let terms: Vec<String> = e
            .coeffs
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, &c)| c != 0)
            .map(|(i, &c)| {
                let coef = if c == 1 && i > 0 {
                    String::new()
                } else {
                    c.to_string()
                };
                match i {
                    0 => coef,
                    1 => format!("{coef}x"),
                    _ => format!("{coef}x^{i}"),
                }
            })
            .collect();
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join("+")
        }
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.bitmask() {
            Some(mask) => write!(f, "GF({}^{}) mod {:#x}", self.p, self.n, mask),
            None => write!(f, "GF({}^{}) mod {:?}", self.p, self.n, self.irreducible),
        }
    }
}

/// Hex bitmask (`0x11B`) when `p = 2`, otherwise a comma-separated
/// little-endian coefficient list such as `1,0,1` for `x^2 + 1`.
pub fn parse_polynomial(text: &str, p: u64) -> Result<Vec<u64>> {
    let text = text.trim();
    if let Some(hex) = text.strip_prefix("0x").or_else(|| text.strip_prefix("0X")) {
        if p != 2 {
            return Err(FieldError::InvalidPolynomial(
                "hex bitmasks are only valid for p = 2".into(),
            ));
        }
        let mask = u64::from_str_radix(hex, 16)
            .map_err(|e| FieldError::InvalidPolynomial(format!("{text}: {e}")))?;
        if mask == 0 {
            return Err(FieldError::InvalidPolynomial("zero polynomial".into()));
        }
        let deg = 63 - mask.leading_zeros() as usize;
        return Ok((0..=deg).map(|i| (mask >> i) & 1).collect());
    }
    text.split(',')
        .map(|c| {
            c.trim()
                .parse::<u64>()
                .map_err(|e| FieldError::InvalidPolynomial(format!("{c:?}: {e}")))
        })
        .collect()
}

/// Builds a field from `parse_polynomial` output.
pub fn field_from_text(text: &str, p: u64) -> Result<FieldSpec> {
    let coeffs = trim(parse_polynomial(text, p)?);
    if coeffs.len() < 2 {
        return Err(FieldError::InvalidPolynomial(format!(
            "{text} has degree < 1"
        )));
    }
    FieldSpec::new(p, coeffs.len() - 1, coeffs)
}

fn trim(mut v: Vec<u64>) -> Vec<u64> {
    while v.last() == Some(&0) {
        v.pop();
    }
    v
}

fn inv_mod_prime(a: u64, p: u64) -> u64 {
    crate::number_theory::mod_pow(a, p - 2, p)
}

fn poly_mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    trim(out)
}

fn poly_sub(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let len = a.len().max(b.len());
    let out = (0..len)
        .map(|i| {
            let x = a.get(i).copied().unwrap_or(0);
            let y = b.get(i).copied().unwrap_or(0);
            (x + p - y) % p
        })
        .collect();
    trim(out)
}

/// Long division; `b` must be nonzero and trimmed.
fn poly_divmod(a: &[u64], b: &[u64], p: u64) -> (Vec<u64>, Vec<u64>) {
    let mut rem = trim(a.to_vec());
    let db = b.len() - 1;
    let lead_inv = inv_mod_prime(b[db], p);
    if rem.len() < b.len() {
        return (vec![], rem);
    }
    let mut quot = vec![0u64; rem.len() - db];
    while rem.len() >= b.len() {
        let shift = rem.len() - b.len();
        let c = rem[rem.len() - 1] * lead_inv % p;
        quot[shift] = c;
        for (i, &bi) in b.iter().enumerate() {
            rem[shift + i] = (rem[shift + i] + p - c * bi % p) % p;
        }
        rem = trim(rem);
    }
    (trim(quot), rem)
}

/// Brute force: no monic divisor of degree `1..=n/2`.
fn is_irreducible(poly: &[u64], p: u64) -> bool {
    let n = poly.len() - 1;
    for d in 1..=n / 2 {
        let count = p.pow(d as u32);
        for low in 0..count {
            let mut cand: Vec<u64> = Vec::with_capacity(d + 1);
            let mut rest = low;
            for _ in 0..d {
                cand.push(rest % p);
                rest /= p;
            }
            cand.push(1);
            let (_, rem) = poly_divmod(poly, &cand, p);
            if rem.is_empty() {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf8() -> FieldSpec {
        FieldSpec::from_bitmask(0b1011).unwrap()
    }

    #[test]
    fn construction() {
        assert_eq!(gf8().q(), 8);
        assert_eq!(FieldSpec::aes().q(), 256);
        assert_eq!(
            FieldSpec::from_bitmask(0b101),
            Err(FieldError::NotIrreducible { p: 2 })
        );
        assert_eq!(
            FieldSpec::new(4, 2, vec![1, 1, 1]),
            Err(FieldError::NotPrime(4))
        );
        assert!(matches!(
            FieldSpec::new(2, 2, vec![1, 1, 0]),
            Err(FieldError::InvalidPolynomial(_))
        ));
        // x^2 + 1 over F_3 is irreducible; over F_5 it has roots 2, 3
        assert_eq!(FieldSpec::new(3, 2, vec![1, 0, 1]).unwrap().q(), 9);
        assert_eq!(
            FieldSpec::new(5, 2, vec![1, 0, 1]),
            Err(FieldError::NotIrreducible { p: 5 })
        );
        assert!(matches!(
            FieldSpec::new(2, 17, vec![1; 18]),
            Err(FieldError::FieldTooLarge(_))
        ));
    }

    #[test]
    fn maps() {
        let f = gf8();
        assert_eq!(f.s_map(1).unwrap(), f.one());
        assert_eq!(f.s_map(2).unwrap().coeffs(), &[0, 1, 0]);
        let aes = FieldSpec::aes();
        assert_eq!(aes.describe(&aes.s_map(0x53).unwrap()), "x^6+x^4+x+1");
        assert_eq!(f.c_map(&f.one()), Ok(1));
        assert_eq!(f.c_map(&f.s_map(2).unwrap()), Ok(2));
        assert_eq!(f.c_map(&f.zero()), Err(FieldError::ZeroElement));
        assert!(matches!(f.s_map(0), Err(FieldError::OutOfRange { .. })));
        assert!(matches!(f.s_map(8), Err(FieldError::OutOfRange { .. })));
    }

    #[test]
    fn gf8_arithmetic() {
        let f = gf8();
        let x = f.s_map(2).unwrap();
        let x2 = f.s_map(4).unwrap();
        // x^3 = x + 1
        assert_eq!(f.c_map(&f.fmul(&x, &x2)), Ok(0b011));
        // x^{-1} = x^2 + 1
        assert_eq!(f.c_map(&f.finv(&x).unwrap()), Ok(0b101));
        assert_eq!(f.fpow(&x, 7).unwrap(), f.one());
        assert_eq!(f.fpow(&x, 0).unwrap(), f.one());
        assert_eq!(f.fpow(&f.zero(), 0), Err(FieldError::ZeroToZero));
        assert_eq!(f.finv(&f.zero()), Err(FieldError::ZeroElement));
    }

    #[test]
    fn odd_characteristic() {
        let f = FieldSpec::new(3, 2, vec![1, 0, 1]).unwrap();
        for h in 1..9 {
            let a = f.s_map(h).unwrap();
            assert_eq!(f.fmul(&a, &f.finv(&a).unwrap()), f.one());
            assert_eq!(f.fpow(&a, 8).unwrap(), f.one());
        }
    }

    #[test]
    fn polynomial_text() {
        assert_eq!(parse_polynomial("0x11B", 2).unwrap().len(), 9);
        assert_eq!(parse_polynomial("1, 0, 1", 3).unwrap(), vec![1, 0, 1]);
        assert!(parse_polynomial("0x7", 3).is_err());
        assert_eq!(field_from_text("0x11b", 2).unwrap(), FieldSpec::aes());
        assert_eq!(FieldSpec::aes().bitmask(), Some(0x11B));
    }

    #[test]
    fn serde_validates() {
        let json = serde_json::to_string(&gf8()).unwrap();
        assert_eq!(json, r#"{"p":2,"n":3,"irreducible":[1,1,0,1]}"#);
        let back: FieldSpec = serde_json::from_str(&json).unwrap();
        assert_eq!(back, gf8());
        assert!(
            serde_json::from_str::<FieldSpec>(r#"{"p":2,"n":2,"irreducible":[1,0,1]}"#).is_err()
        );
    }
}
