//! Finitely supported formal sums with exact rational coefficients.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A formal sum `Σ c_k [k]` tagged with the field order and quiver digest it lives
/// over. Zero coefficients are never stored; iteration order is the order of `K`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LinearCombination<K: Ord> {
    q: u32,
    quiver: String,
    terms: BTreeMap<K, BigRational>,
}

impl<K: Ord + Clone> LinearCombination<K> {
    pub fn zero(q: u32, quiver: impl Into<String>) -> Self {
        LinearCombination {
            q,
            quiver: quiver.into(),
            terms: BTreeMap::new(),
        }
    }

    /// The basis element `1·[k]`.
    pub fn basis(q: u32, quiver: impl Into<String>, key: K) -> Self {
        let mut e = Self::zero(q, quiver);
        e.add_term(key, BigRational::one());
        e
    }

    pub fn from_terms(
        q: u32,
        quiver: impl Into<String>,
        terms: impl IntoIterator<Item = (K, BigRational)>,
    ) -> Self {
        let mut e = Self::zero(q, quiver);
        for (k, c) in terms {
            e.add_term(k, c);
        }
        e
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn quiver_digest(&self) -> &str {
        &self.quiver
    }

    pub fn terms(&self) -> &BTreeMap<K, BigRational> {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, key: &K) -> BigRational {
        self.terms.get(key).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn add_term(&mut self, key: K, c: BigRational) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(key.clone()).or_insert_with(BigRational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.q != other.q {
            return Err(Error::FieldMismatch(self.q, other.q));
        }
        if self.quiver != other.quiver {
            return Err(Error::QuiverMismatch);
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.add_term(k.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(&-BigRational::one()))
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        let mut out = Self::zero(self.q, self.quiver.clone());
        for (k, v) in &self.terms {
            out.add_term(k.clone(), v * c);
        }
        out
    }

    /// Bilinear extension of a product defined on basis keys.
    pub fn bilinear<F>(&self, other: &Self, mut on_basis: F) -> Result<Self>
    where
        F: FnMut(&K, &K) -> Result<Self>,
    {
        self.check_compatible(other)?;
        let mut out = Self::zero(self.q, self.quiver.clone());
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                let prod = on_basis(a, b)?;
                out = out.add(&prod.scale(&(ca * cb)))?;
            }
        }
        Ok(out)
    }

    /// `Some(d)` when every supported key has degree `d` (`None` for zero or mixed).
    pub fn homogeneous_degree<D: PartialEq>(&self, degree: impl Fn(&K) -> D) -> Option<D> {
        let mut it = self.terms.keys().map(degree);
        let first = it.next()?;
        it.all(|d| d == first).then_some(first)
    }

    pub fn to_json(&self, render: impl Fn(&K) -> String) -> ElementJson {
        ElementJson {
            q: self.q,
            quiver: self.quiver.clone(),
            terms: self
                .terms
                .iter()
                .map(|(k, c)| TermJson {
                    class: render(k),
                    num: c.numer().to_string(),
                    den: c.denom().to_string(),
                })
                .collect(),
        }
    }

    pub fn from_json(json: &ElementJson, parse: impl Fn(&str) -> Result<K>) -> Result<Self> {
        let mut e = Self::zero(json.q, json.quiver.clone());
        for t in &json.terms {
            let num: BigInt = t
                .num
                .parse()
                .map_err(|_| Error::Invalid(format!("bad numerator `{}`", t.num)))?;
            let den: BigInt = t
                .den
                .parse()
                .map_err(|_| Error::Invalid(format!("bad denominator `{}`", t.den)))?;
            if den.is_zero() {
                return Err(Error::Invalid("zero denominator".into()));
            }
            e.add_term(parse(&t.class)?, BigRational::new(num, den));
        }
        Ok(e)
    }

    /// Human-readable form such as `3·[(2)] + 1/2·[H0=(1);H1=(1)]`.
    pub fn display(&self, render: impl Fn(&K) -> String) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        self.terms
            .iter()
            .map(|(k, c)| {
                if c.is_one() {
                    format!("[{}]", render(k))
                } else {
                    format!("{}·[{}]", c, render(k))
                }
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ElementJson {
    pub q: u32,
    pub quiver: String,
    pub terms: Vec<TermJson>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub class: String,
    pub num: String,
    pub den: String,
}

pub fn rational(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn integer(n: impl Into<BigInt>) -> BigRational {
    BigRational::from_integer(n.into())
}
