//! Marcus–Tardos type constants and the derived constants of the
//! neighborhood-complexity and encoding bounds, in exact arithmetic.

use std::fmt;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// Which known value of the grid-minor density constant `c_t` to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    /// `2 t^4 binom(t^2, t)`.
    Classic,
    /// `ceil(8/3 (t+1)^2 2^(4t))`.
    #[default]
    Ck,
}

impl std::str::FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "classic" => Ok(Variant::Classic),
            "ck" => Ok(Variant::Ck),
            _ => Err(Error::input(format!("unknown variant {s:?} (classic|ck)"))),
        }
    }
}

fn binomial(n: u64, k: u64) -> BigUint {
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// `c_t`: every `m x n` 0/1 matrix with at least `c_t max(m, n)` ones has a `t`-grid minor.
pub fn mt_constant(t: u64, variant: Variant) -> Result<BigUint> {
    if t == 0 {
        return Err(Error::input("c_t is defined for t >= 1"));
    }
    Ok(match variant {
        Variant::Classic => BigUint::from(2u8) * BigUint::from(t).pow(4) * binomial(t * t, t),
        Variant::Ck => {
            let num = (BigUint::from(8u8) * BigUint::from(t + 1).pow(2)) << (4 * t) as usize;
            num.div_ceil(&BigUint::from(3u8))
        }
    })
}

/// Exact `2^exponent` kept in exponent form; the values here have far too
/// many bits to materialize.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Pow2 {
    pub exponent: BigUint,
}

impl Pow2 {
    pub fn new(exponent: BigUint) -> Self {
        Pow2 { exponent }
    }

    /// Exact value, when it fits in `max_bits` bits.
    pub fn value(&self, max_bits: u64) -> Option<BigUint> {
        let e = self.exponent.to_u64()?;
        (e < max_bits).then(|| BigUint::one() << e as usize)
    }

    /// Whether `x <= factor * 2^exponent`.
    pub fn bounds(&self, x: &BigUint, factor: &BigUint) -> bool {
        if x.is_zero() {
            return true;
        }
        if factor.is_zero() {
            return false;
        }
        // x <= f * 2^e  <=>  ceil(x / f) <= 2^e  <=>  bits(ceil(x / f) - 1) <= e
        let q = x.div_ceil(factor) - 1u8;
        BigUint::from(q.bits()) <= self.exponent
    }
}

impl fmt::Display for Pow2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "2^{}", self.exponent)
    }
}

impl Serialize for Pow2 {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

pub(crate) fn ser_biguint<S: Serializer>(
    v: &BigUint,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(v)
}

/// The constants a width parameter `t` induces.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct PatternConstants {
    pub t: u64,
    pub variant: Variant,
    #[serde(serialize_with = "ser_biguint")]
    pub mt_classic: BigUint,
    #[serde(serialize_with = "ser_biguint")]
    pub mt_ck: BigUint,
    /// Neighborhood-complexity factor `n_t = 2^(c_{4t+4})`.
    pub n_t: Pow2,
    /// Anchor count `k_t = 4 c_{2t} + 4t`.
    #[serde(serialize_with = "ser_biguint")]
    pub k_t: BigUint,
    /// Anchor-tuple factor `m_t = 2^(c_{2t} + 1)`.
    pub m_t: Pow2,
}

impl PatternConstants {
    pub fn new(t: u64, variant: Variant) -> Result<Self> {
        if t == 0 {
            return Err(Error::input("pattern constants need t >= 1"));
        }
        let c = |s| mt_constant(s, variant);
        let c2t = c(2 * t)?;
        Ok(PatternConstants {
            t,
            variant,
            mt_classic: mt_constant(t, Variant::Classic)?,
            mt_ck: mt_constant(t, Variant::Ck)?,
            n_t: Pow2::new(c(4 * t + 4)?),
            k_t: BigUint::from(4u8) * &c2t + 4 * t,
            m_t: Pow2::new(c2t + 1u8),
        })
    }

    /// `c_{2t}` for the chosen variant: the literal sweep threshold.
    pub fn c_2t(&self) -> BigUint {
        mt_constant(2 * self.t, self.variant).expect("t >= 1")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_values() {
        assert_eq!(
            mt_constant(1, Variant::Classic).unwrap(),
            BigUint::from(2u8)
        );
        assert_eq!(
            mt_constant(2, Variant::Classic).unwrap(),
            BigUint::from(192u8)
        );
        assert_eq!(mt_constant(1, Variant::Ck).unwrap(), BigUint::from(171u8));
        assert!(mt_constant(0, Variant::Ck).is_err());
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(4, 2), BigUint::from(6u8));
        assert_eq!(binomial(9, 3), BigUint::from(84u8));
        assert_eq!(binomial(5, 0), BigUint::one());
    }

    #[test]
    fn pow2_bounds() {
        let p = Pow2::new(BigUint::from(3u8));
        let f = BigUint::from(5u8);
        assert!(p.bounds(&BigUint::from(40u8), &f));
        assert!(!p.bounds(&BigUint::from(41u8), &f));
        assert!(p.bounds(&BigUint::zero(), &f));
        assert_eq!(p.value(64), Some(BigUint::from(8u8)));
        let huge = Pow2::new(BigUint::from(10u8).pow(30));
        assert!(huge.bounds(&BigUint::from(u128::MAX), &BigUint::one()));
        assert_eq!(huge.value(1 << 20), None);
    }

    #[test]
    fn derived_constants_small_t() {
        let pc = PatternConstants::new(1, Variant::Classic).unwrap();
        // c_2 = 2 * 16 * binom(4, 2) = 192, c_8 = 2 * 8^4 * binom(64, 8)
        assert_eq!(pc.k_t, BigUint::from(4u32 * 192 + 4));
        assert_eq!(pc.m_t.exponent, BigUint::from(193u32));
        assert_eq!(
            pc.n_t.exponent,
            BigUint::from(2u32) * BigUint::from(4096u32) * binomial(64, 8)
        );
    }
}
