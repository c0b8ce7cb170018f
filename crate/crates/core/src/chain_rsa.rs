//! The uncompressed RSA exponent chain `E(h) = (((g^h1)^h2)...)^hn mod N`.
//!
//! Play never happens here: the chain is compressed to `PCG(k, {1})` with
//! `k = ord_N(g)` by [`chain_to_pcg`]. This module keeps the tower evaluation
//! as the independent side of that equivalence.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::game_core::{ChainGame, GameSpec};
use crate::number_theory::{
    crt_check_unity, gcd, mod_pow, mul_mod, multiplicative_order, CrtVerdict,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawChainSpec")]
pub struct ChainSpec {
    #[serde(rename = "N")]
    modulus: u64,
    g: u64,
    k: u64,
}

// `k` is always recomputed on input.
#[derive(Deserialize)]
struct RawChainSpec {
    #[serde(rename = "N")]
    modulus: u64,
    g: u64,
}

impl TryFrom<RawChainSpec> for ChainSpec {
    type Error = Error;
    fn try_from(raw: RawChainSpec) -> Result<Self> {
        ChainSpec::new(raw.modulus, raw.g)
    }
}

impl ChainSpec {
    pub fn new(modulus: u64, g: u64) -> Result<Self> {
        if modulus < 2 {
            return Err(Error::InvalidSpec(format!(
                "chain modulus must be at least 2, got {modulus}"
            )));
        }
        let g = g % modulus;
        if gcd(g, modulus) != 1 {
            return Err(Error::InvalidSpec(format!(
                "{g} is not a unit mod {modulus}"
            )));
        }
        let k = multiplicative_order(g, modulus)?;
        Ok(ChainSpec { modulus, g, k })
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn generator(&self) -> u64 {
        self.g
    }

    /// `ord_N(g)`.
    pub fn order(&self) -> u64 {
        self.k
    }
}

/// Left-associated tower, one `mod_pow` per heap.
pub fn evaluate_chain(spec: &ChainSpec, heaps: &[u64]) -> Result<u64> {
    if heaps.is_empty() {
        return Err(Error::InvalidPosition("no heaps".into()));
    }
    Ok(heaps
        .iter()
        .fold(spec.g, |acc, &h| mod_pow(acc, h, spec.modulus)))
}

/// `H(h) = prod h_i`, reduced mod `k` only when the exact product overflows.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FlatExponent {
    pub exponent: u64,
    pub reduced: bool,
}

/// A reduced exponent of 0 is reported as `k`, so the exponent stays positive
/// and `g^exponent` still equals `g^H`.
pub fn flatten_exponent(heaps: &[u64], k: u64) -> FlatExponent {
    let exact = heaps.iter().try_fold(1u64, |acc, &h| acc.checked_mul(h));
    match exact {
        Some(exponent) => FlatExponent {
            exponent,
            reduced: false,
        },
        None => {
            let r = heaps.iter().fold(1 % k, |acc, &h| mul_mod(acc, h, k));
            FlatExponent {
                exponent: if r == 0 { k } else { r },
                reduced: true,
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompressionReport {
    pub spec: ChainSpec,
    pub bound: u64,
    pub n: usize,
    pub total: u64,
    pub losing_count: u64,
    pub counterexamples: Vec<Vec<u64>>,
}

impl CompressionReport {
    pub fn holds(&self) -> bool {
        self.counterexamples.is_empty()
    }
}

/// Exhaustive check of `E(h) = g  <=>  H(h) = 1 (mod k)` over `[1, bound]^n`.
pub fn compression_check(spec: &ChainSpec, bound: u64, n: usize) -> Result<CompressionReport> {
    if bound == 0 || n == 0 {
        return Err(Error::PreconditionViolated(
            "bound and n must be positive".into(),
        ));
    }
    let total = (bound as u128).pow(n as u32);
    if total > 100_000_000 {
        return Err(Error::TooLarge(format!("{bound}^{n} positions")));
    }
    let k = spec.k;
    let mut heaps = vec![1u64; n];
    let mut losing_count = 0;
    let mut counterexamples = Vec::new();
    loop {
        let tower_losing = evaluate_chain(spec, &heaps)? == spec.g;
        let flat = flatten_exponent(&heaps, k).exponent % k == 1 % k;
        if tower_losing {
            losing_count += 1;
        }
        if tower_losing != flat {
            counterexamples.push(heaps.clone());
        }
        if !next_vector(&mut heaps, 1, bound) {
            break;
        }
    }
    Ok(CompressionReport {
        spec: *spec,
        bound,
        n,
        total: total as u64,
        losing_count,
        counterexamples,
    })
}

/// Odometer increment over `[lo, hi]^n`; false once it wraps.
pub(crate) fn next_vector(v: &mut [u64], lo: u64, hi: u64) -> bool {
    for x in v.iter_mut().rev() {
        if *x < hi {
            *x += 1;
            return true;
        }
        *x = lo;
    }
    false
}

/// The compressed game `PCG(k, {1})` in unit mode.
pub fn chain_to_pcg(spec: &ChainSpec) -> Result<GameSpec> {
    if spec.k < 2 {
        return Err(Error::DegenerateOrder(spec.k));
    }
    GameSpec::numeric(spec.k, [1], true)
}

/// The chain itself as a playable spec (moves run on the compressed game).
pub fn chain_game(spec: &ChainSpec, unit_mode: bool) -> Result<GameSpec> {
    Ok(GameSpec::Chain(ChainGame::new(*spec, unit_mode)?))
}

/// Losing verdict of `heaps` split over the prime-power components of `k`.
pub fn crt_losing_check(spec: &ChainSpec, heaps: &[u64]) -> Result<CrtVerdict> {
    if spec.k < 2 {
        return Err(Error::DegenerateOrder(spec.k));
    }
    let h = heaps.iter().fold(1, |acc, &x| mul_mod(acc, x, spec.k));
    Ok(crt_check_unity(h, spec.k)?)
}
