//! Complex rational vectors and affine charts on complex Grassmannians.

use crate::error::{Error, Result};
use crate::geometry::j_map;
use crate::linalg::{nullspace, rref};
use crate::scalar::{fmt_q, parse_q, Q};
use num_complex::Complex;
use num_traits::Zero;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

pub type C = Complex<Q>;

pub fn c(re: Q, im: Q) -> C {
    Complex::new(re, im)
}

/// Interleaved realification `(re_0, im_0, re_1, im_1, ...)`.
pub fn to_real(v: &[C]) -> Vec<Q> {
    v.iter().flat_map(|z| [z.re.clone(), z.im.clone()]).collect()
}

pub fn from_real(x: &[Q]) -> Vec<C> {
    x.chunks(2).map(|p| c(p[0].clone(), p[1].clone())).collect()
}

pub fn hermitian_dot(a: &[C], b: &[C]) -> C {
    a.iter().zip(b).fold(C::zero(), |acc, (x, y)| acc + x.conj() * y.clone())
}

/// Basis of `{w : <v, w>_herm = 0 for all v}`, which is also the real orthogonal complement.
pub fn hermitian_complement(vectors: &[Vec<C>], d: usize) -> Vec<Vec<C>> {
    if vectors.is_empty() {
        return (0..d)
            .map(|i| (0..d).map(|j| if i == j { c(Q::from_integer(1.into()), Q::zero()) } else { C::zero() }).collect())
            .collect();
    }
    let rows: Vec<Vec<C>> = vectors.iter().map(|v| v.iter().map(|z| z.conj()).collect()).collect();
    nullspace(&rows, d)
}

/// Real basis `{w_1, J w_1, ...}` of the complex span.
pub fn realify_basis(vectors: &[Vec<C>]) -> Vec<Vec<Q>> {
    vectors
        .iter()
        .flat_map(|v| {
            let r = to_real(v);
            let jr = j_map(&r);
            [r, jr]
        })
        .collect()
}

pub fn complex_rank(vectors: &[Vec<C>]) -> usize {
    crate::linalg::rank(vectors)
}

/// Complex `(d-k)`-subspace given by the identity on rows `index_set` and `z` elsewhere.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GrassmannChart {
    pub d: usize,
    pub index_set: Vec<usize>,
    #[serde(serialize_with = "ser_cmat", deserialize_with = "de_cmat")]
    pub z: Vec<Vec<C>>,
}

fn ser_cmat<S: Serializer>(m: &[Vec<C>], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(m.iter().map(|row| row.iter().map(|z| [fmt_q(&z.re), fmt_q(&z.im)]).collect::<Vec<_>>()))
}

fn de_cmat<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<Vec<C>>, D::Error> {
    let m = Vec::<Vec<[String; 2]>>::deserialize(d)?;
    m.iter()
        .map(|row| {
            row.iter()
                .map(|[a, b]| {
                    Ok(c(
                        parse_q(a).map_err(serde::de::Error::custom)?,
                        parse_q(b).map_err(serde::de::Error::custom)?,
                    ))
                })
                .collect()
        })
        .collect()
}

impl GrassmannChart {
    pub fn complement_positions(&self) -> Vec<usize> {
        (0..self.d).filter(|i| !self.index_set.contains(i)).collect()
    }

    pub fn validate(&self) -> Result<()> {
        let comp = self.complement_positions();
        let mut sorted = self.index_set.clone();
        sorted.sort();
        sorted.dedup();
        if sorted.len() != self.index_set.len() || sorted.iter().any(|&i| i >= self.d) {
            return Err(Error::InvalidParameter("chart index set is not a subset of 0..d".into()));
        }
        if self.z.len() != self.index_set.len() || self.z.iter().any(|r| r.len() != comp.len()) {
            return Err(Error::InvalidParameter("chart parameter matrix has the wrong shape".into()));
        }
        Ok(())
    }

    pub fn complex_basis(&self) -> Vec<Vec<C>> {
        let comp = self.complement_positions();
        self.index_set
            .iter()
            .enumerate()
            .map(|(a, &ia)| {
                let mut w = vec![C::zero(); self.d];
                w[ia] = c(Q::from_integer(1.into()), Q::zero());
                for (j, &cj) in comp.iter().enumerate() {
                    w[cj] = self.z[a][j].clone();
                }
                w
            })
            .collect()
    }

    pub fn real_basis(&self) -> Vec<Vec<Q>> {
        realify_basis(&self.complex_basis())
    }

    /// The complex orthogonal complement of the chart's subspace.
    pub fn complement_basis(&self) -> Vec<Vec<C>> {
        hermitian_complement(&self.complex_basis(), self.d)
    }

    /// The chart containing `span_C(basis)` whose index set is the first pivot set.
    pub fn from_subspace(basis: &[Vec<C>]) -> Result<Self> {
        let d = basis.first().map_or(0, |v| v.len());
        let mut m = basis.to_vec();
        let pivots = rref(&mut m);
        if pivots.len() != basis.len() {
            return Err(Error::DependentSet { index: pivots.len() });
        }
        let comp: Vec<usize> = (0..d).filter(|i| !pivots.contains(i)).collect();
        let z = m.iter().map(|row| comp.iter().map(|&j| row[j].clone()).collect()).collect();
        Ok(Self { d, index_set: pivots, z })
    }

    /// The chart with a prescribed index set, if the subspace is transverse to it.
    pub fn from_subspace_in(basis: &[Vec<C>], index_set: &[usize]) -> Option<Self> {
        let d = basis.first().map_or(0, |v| v.len());
        let k = index_set.len();
        if basis.len() != k {
            return None;
        }
        // rows w_a = sum_b M^{-1}_{ab} basis_b with M_{ab} = basis_b[index_set[a]]
        let comp: Vec<usize> = (0..d).filter(|i| !index_set.contains(i)).collect();
        let mut aug: Vec<Vec<C>> = (0..k)
            .map(|b| {
                let mut row: Vec<C> = index_set.iter().map(|&i| basis[b][i].clone()).collect();
                row.extend(comp.iter().map(|&j| basis[b][j].clone()));
                row
            })
            .collect();
        let piv = rref(&mut aug);
        if piv.len() < k || piv[..k] != (0..k).collect::<Vec<_>>()[..] {
            return None;
        }
        let z = aug.iter().map(|row| row[k..].to_vec()).collect();
        Some(Self { d, index_set: index_set.to_vec(), z })
    }

    pub fn params(&self) -> Vec<Q> {
        self.z.iter().flatten().flat_map(|z| [z.re.clone(), z.im.clone()]).collect()
    }

    pub fn with_params(d: usize, index_set: Vec<usize>, params: &[Q]) -> Self {
        let cols = d - index_set.len();
        let z = params
            .chunks(2 * cols.max(1))
            .take(index_set.len())
            .map(|row| row.chunks(2).take(cols).map(|p| c(p[0].clone(), p[1].clone())).collect())
            .collect::<Vec<Vec<C>>>();
        let z = if cols == 0 { vec![Vec::new(); index_set.len()] } else { z };
        Self { d, index_set, z }
    }
}

/// All `size`-subsets of `0..n` in lexicographic order.
pub fn subsets(n: usize, size: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(size);
    fn rec(start: usize, n: usize, size: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == size {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, size, cur, out);
            cur.pop();
        }
    }
    rec(0, n, size, &mut cur, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::is_j_invariant;
    use crate::linalg::dot;
    use crate::scalar::qi;

    fn cv(xs: &[(i64, i64)]) -> Vec<C> {
        xs.iter().map(|&(a, b)| c(qi(a), qi(b))).collect()
    }

    #[test]
    fn chart_roundtrip() {
        let basis = vec![cv(&[(0, 0), (2, 1), (1, 0)])];
        let ch = GrassmannChart::from_subspace(&basis).unwrap();
        assert_eq!(ch.index_set, vec![1]);
        let w = ch.complex_basis();
        assert_eq!(complex_rank(&[w[0].clone(), basis[0].clone()]), 1);
        let other = GrassmannChart::from_subspace_in(&basis, &[2]).unwrap();
        assert_eq!(complex_rank(&[other.complex_basis()[0].clone(), basis[0].clone()]), 1);
        assert!(GrassmannChart::from_subspace_in(&basis, &[0]).is_none());
        let again = GrassmannChart::with_params(3, vec![1], &ch.params());
        assert_eq!(again, ch);
    }

    #[test]
    fn complement_is_real_orthogonal_and_invariant() {
        let ch = GrassmannChart::from_subspace(&[cv(&[(1, 2), (3, -1)])]).unwrap();
        let w = ch.real_basis();
        let perp = realify_basis(&ch.complement_basis());
        assert!(is_j_invariant(&w) && is_j_invariant(&perp));
        for a in &w {
            for b in &perp {
                assert!(dot(a, b).is_zero());
            }
        }
    }
}
