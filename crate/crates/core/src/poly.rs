//! Sparse multivariate polynomials over the integers or a prime field, with a degree table.

use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "ring", rename_all = "kebab-case")]
pub enum Ring {
    Integers,
    Prime { p: u64 },
}

impl Ring {
    pub fn reduce(&self, c: BigInt) -> BigInt {
        match self {
            Ring::Integers => c,
            Ring::Prime { p } => c.mod_floor(&BigInt::from(*p)),
        }
    }

    pub fn is_unit(&self, c: &BigInt) -> bool {
        match self {
            Ring::Integers => c.abs().is_one(),
            Ring::Prime { .. } => !self.reduce(c.clone()).is_zero(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if let Ring::Prime { p } = self {
            if *p < 2 || (2..*p).take_while(|q| q * q <= *p).any(|q| p % q == 0) {
                return Err(Error::InvalidParameter(format!("{p} is not prime")));
            }
        }
        Ok(())
    }
}

/// Variable names, their degrees, and the coefficient ring.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PolyRing {
    pub vars: Vec<String>,
    pub degrees: Vec<u32>,
    pub coefficients: Ring,
}

impl PolyRing {
    pub fn new(vars: Vec<String>, degrees: Vec<u32>, coefficients: Ring) -> Self {
        assert_eq!(vars.len(), degrees.len());
        Self { vars, degrees, coefficients }
    }

    /// `prefix1 .. prefixn`, all of the same degree.
    pub fn indexed(prefix: &str, n: usize, degree: u32, coefficients: Ring) -> Self {
        Self::new((1..=n).map(|i| format!("{prefix}{i}")).collect(), vec![degree; n], coefficients)
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }
}

pub type Monomial = Vec<u32>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poly {
    pub ring: PolyRing,
    pub terms: BTreeMap<Monomial, BigInt>,
}

impl Poly {
    pub fn zero(ring: &PolyRing) -> Self {
        Self { ring: ring.clone(), terms: BTreeMap::new() }
    }

    pub fn constant(ring: &PolyRing, c: impl Into<BigInt>) -> Self {
        Self::monomial(ring, vec![0; ring.nvars()], c)
    }

    pub fn one(ring: &PolyRing) -> Self {
        Self::constant(ring, 1)
    }

    pub fn var(ring: &PolyRing, i: usize) -> Self {
        let mut m = vec![0; ring.nvars()];
        m[i] = 1;
        Self::monomial(ring, m, 1)
    }

    pub fn monomial(ring: &PolyRing, m: Monomial, c: impl Into<BigInt>) -> Self {
        let mut p = Self::zero(ring);
        p.add_term(m, c.into());
        p
    }

    fn add_term(&mut self, m: Monomial, c: BigInt) {
        let old = self.terms.remove(&m).unwrap_or_else(BigInt::zero);
        let new = self.ring.coefficients.reduce(old + c);
        if !new.is_zero() {
            self.terms.insert(m, new);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, m: &[u32]) -> BigInt {
        self.terms.get(m).cloned().unwrap_or_else(BigInt::zero)
    }

    fn check(&self, other: &Poly) -> Result<()> {
        if self.ring != other.ring {
            return Err(Error::RingMismatch("polynomials over different rings".into()));
        }
        Ok(())
    }

    pub fn add(&self, other: &Poly) -> Result<Poly> {
        self.check(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn scale(&self, s: &BigInt) -> Poly {
        let mut out = Poly::zero(&self.ring);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), c * s);
        }
        out
    }

    pub fn sub(&self, other: &Poly) -> Result<Poly> {
        self.add(&other.scale(&BigInt::from(-1)))
    }

    pub fn mul(&self, other: &Poly) -> Result<Poly> {
        self.check(other)?;
        let mut acc: BTreeMap<Monomial, BigInt> = BTreeMap::new();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                let m: Monomial = m1.iter().zip(m2).map(|(a, b)| a + b).collect();
                *acc.entry(m).or_insert_with(BigInt::zero) += c1 * c2;
            }
        }
        let cr = self.ring.coefficients;
        let terms = acc.into_iter().map(|(m, c)| (m, cr.reduce(c))).filter(|(_, c)| !c.is_zero()).collect();
        Ok(Poly { ring: self.ring.clone(), terms })
    }

    pub fn pow(&self, mut e: u32) -> Poly {
        let mut base = self.clone();
        let mut out = Poly::one(&self.ring);
        while e > 0 {
            if e & 1 == 1 {
                out = out.mul(&base).expect("same ring");
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base).expect("same ring");
            }
        }
        out
    }

    pub fn monomial_degree(&self, m: &[u32]) -> u32 {
        m.iter().zip(&self.ring.degrees).map(|(e, d)| e * d).sum()
    }

    /// The common degree of all terms, if homogeneous and nonzero.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut degs = self.terms.keys().map(|m| self.monomial_degree(m));
        let first = degs.next()?;
        degs.all(|d| d == first).then_some(first)
    }

    pub fn homogeneous_part(&self, degree: u32) -> Poly {
        let terms = self.terms.iter().filter(|(m, _)| self.monomial_degree(m) == degree).map(|(m, c)| (m.clone(), c.clone())).collect();
        Poly { ring: self.ring.clone(), terms }
    }

    /// Substitutes `images[i]` for variable `i`; the images live in `target`.
    pub fn substitute(&self, target: &PolyRing, images: &[Poly]) -> Result<Poly> {
        if images.len() != self.ring.nvars() || images.iter().any(|p| &p.ring != target) {
            return Err(Error::RingMismatch("polynomials over different rings".into()));
        }
        let mut out = Poly::zero(target);
        for (m, c) in &self.terms {
            let mut t = Poly::constant(target, c.clone());
            for (img, &e) in images.iter().zip(m) {
                if e > 0 {
                    t = t.mul(&img.pow(e))?;
                }
            }
            out = out.add(&t)?;
        }
        Ok(out)
    }

    pub fn format_monomial(&self, m: &[u32]) -> String {
        let parts: Vec<String> = m
            .iter()
            .zip(&self.ring.vars)
            .filter(|(e, _)| **e > 0)
            .map(|(e, v)| if *e == 1 { v.clone() } else { format!("{v}^{e}") })
            .collect();
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("*")
        }
    }

    pub fn parse_monomial(ring: &PolyRing, s: &str) -> Result<Monomial> {
        let mut m = vec![0; ring.nvars()];
        if s == "1" {
            return Ok(m);
        }
        for f in s.split('*') {
            let (v, e) = match f.split_once('^') {
                Some((v, e)) => (v, e.parse::<u32>().map_err(|_| Error::Parse(format!("bad exponent in {f}")))?),
                None => (f, 1),
            };
            let i = ring.vars.iter().position(|x| x == v).ok_or_else(|| Error::Parse(format!("unknown variable {v}")))?;
            m[i] += e;
        }
        Ok(m)
    }
}

impl Poly {
    /// Parses sums like `c1^2*c2 - 3*c2 + 1`.
    pub fn parse(ring: &PolyRing, s: &str) -> Result<Poly> {
        let mut out = Poly::zero(ring);
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(Error::Parse("empty polynomial".into()));
        }
        let mut terms = Vec::new();
        let mut start = 0;
        for (i, ch) in compact.char_indices() {
            if (ch == '+' || ch == '-') && i > start {
                terms.push(&compact[start..i]);
                start = i;
            }
        }
        terms.push(&compact[start..]);
        for t in terms {
            let (neg, body) = match t.as_bytes().first() {
                Some(b'-') => (true, &t[1..]),
                Some(b'+') => (false, &t[1..]),
                _ => (false, t),
            };
            let (coef, mono) = match body.split_once('*') {
                Some((c, rest)) if c.parse::<BigInt>().is_ok() => (c.parse::<BigInt>().unwrap(), rest),
                _ => match body.parse::<BigInt>() {
                    Ok(c) => (c, "1"),
                    Err(_) => (BigInt::one(), body),
                },
            };
            let m = Self::parse_monomial(ring, mono)?;
            out.add_term(m, if neg { -coef } else { coef });
        }
        Ok(out)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        // highest monomials first
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let mono = self.format_monomial(m);
            let (sign, mag) = if c.is_negative() { ("-", -c) } else { ("+", c.clone()) };
            if i == 0 {
                if sign == "-" {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            match (mag.is_one(), mono.as_str()) {
                (true, "1") => write!(f, "1")?,
                (true, _) => write!(f, "{mono}")?,
                (false, "1") => write!(f, "{mag}")?,
                (false, _) => write!(f, "{mag}*{mono}")?,
            }
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct PolyRepr {
    #[serde(flatten)]
    ring: PolyRing,
    terms: BTreeMap<String, String>,
}

impl Serialize for Poly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let terms = self.terms.iter().map(|(m, c)| (self.format_monomial(m), c.to_string())).collect();
        PolyRepr { ring: self.ring.clone(), terms }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Poly {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let r = PolyRepr::deserialize(d)?;
        if r.ring.vars.len() != r.ring.degrees.len() {
            return Err(D::Error::custom("vars and degrees differ in length"));
        }
        let mut p = Poly::zero(&r.ring);
        for (m, c) in r.terms {
            let mono = Poly::parse_monomial(&r.ring, &m).map_err(D::Error::custom)?;
            let c: BigInt = c.parse().map_err(D::Error::custom)?;
            p.add_term(mono, c);
        }
        Ok(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn zr(n: usize) -> PolyRing {
        PolyRing::indexed("u", n, 2, Ring::Integers)
    }

    #[test]
    fn arithmetic_and_display() {
        let r = zr(2);
        let u1 = Poly::var(&r, 0);
        let u2 = Poly::var(&r, 1);
        let g = u1.mul(&u1.sub(&u2).unwrap()).unwrap();
        assert_eq!(g.to_string(), "u1^2 - u1*u2");
        assert_eq!(g.homogeneous_degree(), Some(4));
        assert!(u1.sub(&u1).unwrap().is_zero());
        assert_eq!(u1.add(&u2).unwrap().pow(3).coefficient(&[2, 1]), BigInt::from(3));
    }

    #[test]
    fn prime_field_reduces() {
        let r = PolyRing::indexed("t", 1, 1, Ring::Prime { p: 2 });
        let t = Poly::var(&r, 0);
        let one = Poly::one(&r);
        assert_eq!(t.add(&one).unwrap().pow(2).to_string(), "t1^2 + 1");
        assert!(Ring::Prime { p: 9 }.validate().is_err());
    }

    #[test]
    fn json_round_trip() {
        let r = zr(2);
        let g = Poly::var(&r, 0).pow(2).sub(&Poly::var(&r, 1).scale(&BigInt::from(5))).unwrap();
        let s = serde_json::to_string(&g).unwrap();
        let back: Poly = serde_json::from_str(&s).unwrap();
        assert_eq!(back, g);
    }

    #[test]
    fn parses_sums() {
        let r = PolyRing::indexed("c", 2, 2, Ring::Integers);
        let p = Poly::parse(&r, "c1^2*c2 - 3*c2 + 1 - c1^2*c2").unwrap();
        assert_eq!(p.to_string(), "-3*c2 + 1");
        assert!(Poly::parse(&r, "c3").is_err());
        assert_eq!(Poly::parse(&r, "-2").unwrap(), Poly::constant(&r, -2));
    }
}
