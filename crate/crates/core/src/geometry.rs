//! Complex structure on `R^{2d}`, complex affine flats and discrete measures.

use crate::error::{Error, Result};
use crate::linalg::{self, first_dependent, in_span, rank};
use crate::scalar::{serde_qmat, serde_qvec, Q};
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

/// The interleaved complex structure: `e_{2j} -> e_{2j+1}`, `e_{2j+1} -> -e_{2j}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ComplexStructure {
    pub d: usize,
}

impl ComplexStructure {
    pub fn new(d: usize) -> Self {
        Self { d }
    }

    pub fn real_dim(&self) -> usize {
        2 * self.d
    }

    pub fn apply(&self, x: &[Q]) -> Vec<Q> {
        j_map(x)
    }
}

pub fn j_map(x: &[Q]) -> Vec<Q> {
    let mut out = vec![Q::zero(); x.len()];
    for j in 0..x.len() / 2 {
        out[2 * j] = -x[2 * j + 1].clone();
        out[2 * j + 1] = x[2 * j].clone();
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum FlatKind {
    /// Direction is `J`-invariant of real dimension `2k`.
    Complex { k: usize },
    /// Direction is a `J`-invariant part of real dimension `2(k-1)` plus one extra line.
    ComplexPlusLine { k: usize },
}

impl FlatKind {
    pub fn real_dim(&self) -> usize {
        match *self {
            FlatKind::Complex { k } => 2 * k,
            FlatKind::ComplexPlusLine { k } => 2 * k - 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexFlat {
    #[serde(with = "serde_qvec")]
    pub base: Vec<Q>,
    #[serde(with = "serde_qmat")]
    pub direction_basis: Vec<Vec<Q>>,
    pub kind: FlatKind,
}

impl ComplexFlat {
    pub fn ambient_dim(&self) -> usize {
        self.base.len()
    }

    /// Checks independence, dimensions and the kind's invariance property.
    pub fn validate(&self) -> Result<()> {
        let n = self.base.len();
        if !n.is_multiple_of(2) {
            return Err(Error::InvalidFlat(format!("odd ambient dimension {n}")));
        }
        for v in &self.direction_basis {
            if v.len() != n {
                return Err(Error::DimensionMismatch { expected: n, found: v.len() });
            }
        }
        if let Some(i) = first_dependent(&self.direction_basis) {
            return Err(Error::DependentSet { index: i });
        }
        let dim = self.direction_basis.len();
        if dim != self.kind.real_dim() {
            return Err(Error::InvalidFlat(format!(
                "kind {:?} needs real dimension {}, basis has {dim}",
                self.kind,
                self.kind.real_dim()
            )));
        }
        match self.kind {
            FlatKind::Complex { .. } => {
                if !is_j_invariant(&self.direction_basis) {
                    return Err(Error::InvalidFlat("direction is not J-invariant".into()));
                }
            }
            FlatKind::ComplexPlusLine { k } => {
                if k == 0 {
                    return Err(Error::InvalidFlat("complex-plus-line needs k >= 1".into()));
                }
                if invariant_part_dim(&self.direction_basis) != 2 * k - 2 {
                    return Err(Error::InvalidFlat(
                        "J-invariant part has the wrong dimension".into(),
                    ));
                }
            }
        }
        Ok(())
    }

    pub fn contains_point(&self, x: &[Q]) -> bool {
        in_span(&self.direction_basis, &linalg::sub(x, &self.base))
    }
}

/// Real dimension of the largest `J`-invariant subspace of `span(basis)`.
pub fn invariant_part_dim(basis: &[Vec<Q>]) -> usize {
    let mut all = basis.to_vec();
    all.extend(basis.iter().map(|v| j_map(v)));
    2 * basis.len() - rank(&all)
}

pub fn make_complex_flat(base: Vec<Q>, spanning: &[Vec<Q>]) -> Result<ComplexFlat> {
    let n = base.len();
    let mut dir = Vec::with_capacity(2 * spanning.len());
    for (i, v) in spanning.iter().enumerate() {
        if v.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: v.len() });
        }
        dir.push(v.clone());
        dir.push(j_map(v));
        if rank(&dir) < dir.len() {
            return Err(Error::DependentSet { index: i });
        }
    }
    Ok(ComplexFlat { base, direction_basis: dir, kind: FlatKind::Complex { k: spanning.len() } })
}

/// Complex span of `spanning` plus the component of `line` orthogonal to it.
pub fn make_complex_plus_line_flat(
    base: Vec<Q>,
    spanning: &[Vec<Q>],
    line: &[Q],
) -> Result<ComplexFlat> {
    let inner = make_complex_flat(base, spanning)?;
    let extra = linalg::project_complement(&inner.direction_basis, line);
    if linalg::is_zero_vec(&extra) {
        return Err(Error::DependentSet { index: spanning.len() });
    }
    let mut dir = inner.direction_basis;
    dir.push(extra);
    Ok(ComplexFlat {
        base: inner.base,
        direction_basis: dir,
        kind: FlatKind::ComplexPlusLine { k: spanning.len() + 1 },
    })
}

pub fn orthogonal_project(direction: &[Vec<Q>], x: &[Q]) -> Vec<Q> {
    linalg::project_complement(direction, x)
}

pub fn is_j_invariant(basis: &[Vec<Q>]) -> bool {
    basis.iter().all(|b| in_span(basis, &j_map(b)))
}

/// A finitely supported probability measure with rational weights.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MassCloud {
    #[serde(with = "serde_qmat")]
    pub points: Vec<Vec<Q>>,
    #[serde(with = "serde_qvec")]
    pub weights: Vec<Q>,
}

impl MassCloud {
    pub fn new(points: Vec<Vec<Q>>, weights: Vec<Q>) -> Result<Self> {
        let c = Self { points, weights };
        c.validate()?;
        Ok(c)
    }

    pub fn uniform(points: Vec<Vec<Q>>) -> Result<Self> {
        let w = Q::new(1.into(), (points.len().max(1) as i64).into());
        let n = points.len();
        Self::new(points, vec![w; n])
    }

    pub fn validate(&self) -> Result<()> {
        if self.points.is_empty() {
            return Err(Error::InvalidCloud("no points".into()));
        }
        if self.points.len() != self.weights.len() {
            return Err(Error::InvalidCloud("points and weights differ in length".into()));
        }
        let m = self.points[0].len();
        if let Some(p) = self.points.iter().find(|p| p.len() != m) {
            return Err(Error::DimensionMismatch { expected: m, found: p.len() });
        }
        if self.weights.iter().any(|w| !w.is_positive()) {
            return Err(Error::InvalidCloud("non-positive weight".into()));
        }
        let total: Q = self.weights.iter().sum();
        if !total.is_one() {
            return Err(Error::InvalidCloud(format!("weights sum to {total}")));
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.points[0].len()
    }

    /// Weight of the closed halfspace `<x, normal> >= offset`.
    pub fn halfspace_weight(&self, normal: &[Q], offset: &Q) -> Q {
        self.points
            .iter()
            .zip(&self.weights)
            .filter(|(p, _)| &linalg::dot(p, normal) >= offset)
            .map(|(_, w)| w.clone())
            .sum()
    }

    pub fn map_points(&self, f: impl Fn(&[Q]) -> Vec<Q>) -> MassCloud {
        MassCloud {
            points: self.points.iter().map(|p| f(p)).collect(),
            weights: self.weights.clone(),
        }
    }

    pub fn mean(&self) -> Vec<Q> {
        let mut m = vec![Q::zero(); self.dim()];
        for (p, w) in self.points.iter().zip(&self.weights) {
            for (a, x) in m.iter_mut().zip(p) {
                *a += w * x;
            }
        }
        m
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{q, qi};

    fn v(xs: &[i64]) -> Vec<Q> {
        xs.iter().map(|&x| qi(x)).collect()
    }

    #[test]
    fn complex_flat_examples() {
        let f = make_complex_flat(v(&[0, 0, 0, 0]), &[v(&[1, 0, 0, 0])]).unwrap();
        assert_eq!(f.direction_basis, vec![v(&[1, 0, 0, 0]), v(&[0, 1, 0, 0])]);
        assert_eq!(f.kind, FlatKind::Complex { k: 1 });

        let e = make_complex_flat(v(&[0, 0, 0, 0]), &[v(&[1, 0, 0, 0]), v(&[1, 0, 0, 0])]);
        assert_eq!(e.unwrap_err(), Error::DependentSet { index: 1 });

        let f = make_complex_flat(v(&[1, 0, 0, 0]), &[v(&[1, 1, 0, 0])]).unwrap();
        assert_eq!(f.direction_basis, vec![v(&[1, 1, 0, 0]), v(&[-1, 1, 0, 0])]);
        assert!(f.validate().is_ok());
    }

    #[test]
    fn i_times_v_is_dependent() {
        let e = make_complex_flat(v(&[0, 0, 0, 0]), &[v(&[1, 0, 0, 0]), v(&[0, 1, 0, 0])]);
        assert_eq!(e.unwrap_err(), Error::DependentSet { index: 1 });
    }

    #[test]
    fn projection_examples() {
        let dir = vec![v(&[1, 0, 0, 0]), v(&[0, 1, 0, 0])];
        assert_eq!(orthogonal_project(&dir, &v(&[3, 4, 5, 6])), v(&[0, 0, 5, 6]));
        assert_eq!(orthogonal_project(&[], &v(&[3, 4])), v(&[3, 4]));
        assert_eq!(orthogonal_project(&[v(&[1, 1])], &v(&[1, 0])), vec![q(1, 2), q(-1, 2)]);
    }

    #[test]
    fn j_invariance_examples() {
        assert!(is_j_invariant(&[v(&[1, 0]), v(&[0, 1])]));
        assert!(!is_j_invariant(&[v(&[1, 0])]));
        assert!(!is_j_invariant(&[v(&[1, 0, 0, 0, 0, 0]), v(&[0, 1, 0, 0, 0, 0]), v(&[0, 0, 1, 0, 0, 0])]));
        let x = v(&[1, 2, 3, 4]);
        assert_eq!(j_map(&j_map(&x)), linalg::scale(&x, &qi(-1)));
    }

    #[test]
    fn plus_line_flat() {
        let f = make_complex_plus_line_flat(v(&[0, 0, 0, 0]), &[], &v(&[1, 2, 0, 0])).unwrap();
        assert_eq!(f.kind, FlatKind::ComplexPlusLine { k: 1 });
        assert!(f.validate().is_ok());
        let g = make_complex_plus_line_flat(v(&[0; 6]), &[v(&[1, 0, 0, 0, 0, 0])], &v(&[1, 1, 1, 0, 0, 0]))
            .unwrap();
        assert_eq!(g.direction_basis.len(), 3);
        assert!(g.validate().is_ok());
    }

    #[test]
    fn cloud_weights_must_sum_to_one() {
        assert!(MassCloud::new(vec![v(&[0, 0])], vec![q(1, 2)]).is_err());
        assert!(MassCloud::uniform(vec![v(&[0, 0]), v(&[1, 1])]).is_ok());
    }
}
