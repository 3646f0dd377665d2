//! Index ideals of spheres and products of spheres under circle and `Z_2^n` actions, and the
//! key-monomial test that rules out equivariant maps between them.

use crate::error::{Error, Result};
use crate::poly::{Monomial, Poly, PolyRing, Ring};
use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Group {
    Circle,
    Z2,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum IdealSpec {
    Monomial { ring: PolyRing, generators: Vec<Monomial> },
    Principal { generator: Poly },
}

impl IdealSpec {
    pub fn ring(&self) -> &PolyRing {
        match self {
            IdealSpec::Monomial { ring, .. } => ring,
            IdealSpec::Principal { generator } => &generator.ring,
        }
    }
}

fn group_ring(n: usize, group: Group) -> PolyRing {
    match group {
        Group::Circle => PolyRing::indexed("u", n, 2, Ring::Integers),
        Group::Z2 => PolyRing::indexed("t", n, 1, Ring::Prime { p: 2 }),
    }
}

/// `(u_1^d, ..., u_n^d)` for the circle, `(t_1^{2d}, ..., t_n^{2d})` over `F_2` for `Z_2`.
pub fn index_product_of_spheres(n: usize, d: usize, group: Group) -> Result<IdealSpec> {
    if n == 0 || d == 0 {
        return Err(Error::InvalidParameter("need n, d >= 1".into()));
    }
    let e = match group {
        Group::Circle => d as u32,
        Group::Z2 => 2 * d as u32,
    };
    let generators = (0..n)
        .map(|i| {
            let mut m = vec![0; n];
            m[i] = e;
            m
        })
        .collect();
    Ok(IdealSpec::Monomial { ring: group_ring(n, group), generators })
}

/// Principal generator: `u_1^{d-1} ... u_n^{d-n} prod_{i<j} (u_i - u_j)` for the circle, or
/// `t_1^{a_1} ... t_n^{a_n} prod_{i<j} (t_j^2 + t_i^2)` over `F_2`.
pub fn index_representation_sphere(n: usize, d: usize, group: Group, exponents: Option<&[u32]>) -> Result<IdealSpec> {
    if n == 0 {
        return Err(Error::InvalidParameter("need n >= 1".into()));
    }
    let ring = group_ring(n, group);
    let lead: Vec<u32> = match group {
        Group::Circle => {
            if n > d {
                return Err(Error::InvalidParameter(format!("need n <= d, got n={n}, d={d}")));
            }
            (1..=n).map(|i| (d - i) as u32).collect()
        }
        Group::Z2 => {
            let a = exponents.ok_or_else(|| Error::InvalidParameter("Z_2 generator needs exponents".into()))?;
            if a.len() != n {
                return Err(Error::InvalidParameter(format!("{} exponents for n={n}", a.len())));
            }
            a.to_vec()
        }
    };
    let mut g = Poly::monomial(&ring, lead, 1);
    for i in 0..n {
        for j in i + 1..n {
            let f = match group {
                Group::Circle => Poly::var(&ring, i).sub(&Poly::var(&ring, j))?,
                Group::Z2 => Poly::var(&ring, j).pow(2).add(&Poly::var(&ring, i).pow(2))?,
            };
            g = g.mul(&f)?;
        }
    }
    Ok(IdealSpec::Principal { generator: g })
}

pub fn monomial_in_monomial_ideal(m: &[u32], ideal: &IdealSpec) -> Result<bool> {
    match ideal {
        IdealSpec::Monomial { ring, generators } => {
            if m.len() != ring.nvars() {
                return Err(Error::DimensionMismatch { expected: ring.nvars(), found: m.len() });
            }
            Ok(generators.iter().any(|g| g.iter().zip(m).all(|(a, b)| a <= b)))
        }
        IdealSpec::Principal { .. } => Err(Error::InvalidParameter("membership needs a monomial ideal".into())),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KeyTermReport {
    pub group: Group,
    pub n: usize,
    pub d: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exponents: Option<Vec<u32>>,
    pub key_monomial: String,
    pub coefficient: String,
    pub coefficient_is_unit: bool,
    pub outside_product_ideal: bool,
    pub survives: bool,
    pub contradiction_established: bool,
    /// False when the parameters violate the theorem's hypothesis; the computation is still
    /// carried out.
    pub within_hypothesis: bool,
    pub generator: Poly,
}

/// Expands the representation-sphere generator and checks that the key monomial has a unit
/// coefficient and lies outside the product-of-spheres ideal.
pub fn key_term_survives(n: usize, d: usize, group: Group, exponents: Option<&[u32]>) -> Result<KeyTermReport> {
    let principal = index_representation_sphere(n, d, group, exponents)?;
    let product = index_product_of_spheres(n, d, group)?;
    let IdealSpec::Principal { generator } = principal else { unreachable!() };
    let (key, within): (Monomial, bool) = match group {
        Group::Circle => (vec![(d - 1) as u32; n], n <= d),
        Group::Z2 => {
            let a = exponents.expect("checked above");
            let key: Monomial = a.iter().enumerate().map(|(i, &ai)| ai + 2 * i as u32).collect();
            let within = key.iter().all(|&e| e < 2 * d as u32);
            (key, within)
        }
    };
    let coefficient: BigInt = generator.coefficient(&key);
    let unit = generator.ring.coefficients.is_unit(&coefficient);
    let outside = !monomial_in_monomial_ideal(&key, &product)?;
    Ok(KeyTermReport {
        group,
        n,
        d,
        exponents: exponents.map(|a| a.to_vec()),
        key_monomial: generator.format_monomial(&key),
        coefficient: coefficient.to_string(),
        coefficient_is_unit: unit,
        outside_product_ideal: outside,
        survives: unit && outside,
        contradiction_established: unit && outside && within,
        within_hypothesis: within,
        generator,
    })
}

/// Exponent vectors with `a_i <= 2d` and `a_i + 2(i-1) <= 2d - 1`.
pub fn admissible_exponents(n: usize, d: usize) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(n: usize, d: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        let i = cur.len() as u32;
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        let max = (2 * d - 1).saturating_sub(2 * i).min(2 * d);
        if 2 * i > 2 * d - 1 {
            return;
        }
        for a in 0..=max {
            cur.push(a);
            rec(n, d, cur, out);
            cur.pop();
        }
    }
    rec(n, d as u32, &mut cur, &mut out);
    out
}
