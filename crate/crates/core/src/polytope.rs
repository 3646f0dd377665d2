//! Vertex enumeration for bounded H-polytopes by incremental clipping (double description).

use crate::linalg::{self, dot, rank};
use crate::scalar::{serde_q, serde_qvec, Q};
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

/// The closed halfspace `<x, normal> >= offset`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Halfspace {
    #[serde(with = "serde_qvec")]
    pub normal: Vec<Q>,
    #[serde(with = "serde_q")]
    pub offset: Q,
}

impl Halfspace {
    pub fn new(normal: Vec<Q>, offset: Q) -> Self {
        Self { normal, offset }
    }

    pub fn slack(&self, x: &[Q]) -> Q {
        dot(&self.normal, x) - &self.offset
    }

    pub fn contains(&self, x: &[Q]) -> bool {
        !self.slack(x).is_negative()
    }

    /// Same halfspace scaled so the first nonzero normal entry has absolute value 1.
    pub fn normalized(&self) -> Halfspace {
        match self.normal.iter().find(|x| !x.is_zero()) {
            Some(lead) => {
                let s = lead.abs();
                Halfspace {
                    normal: self.normal.iter().map(|x| x / &s).collect(),
                    offset: &self.offset / &s,
                }
            }
            None => self.clone(),
        }
    }
}

#[derive(Debug, Clone)]
struct Vertex {
    point: Vec<Q>,
    tight: Vec<usize>,
}

fn sorted_intersection(a: &[usize], b: &[usize]) -> Vec<usize> {
    let (mut i, mut j) = (0, 0);
    let mut out = Vec::new();
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out
}

fn is_subset(small: &[usize], big: &[usize]) -> bool {
    sorted_intersection(small, big).len() == small.len()
}

/// Vertices of `{x in [-bound, bound]^dim : h(x) for h in constraints}`, each with the indices of
/// the caller's constraints that are tight there. Sorted lexicographically by point.
pub fn enumerate_vertices(
    dim: usize,
    constraints: &[Halfspace],
    bound: &Q,
) -> Vec<(Vec<Q>, Vec<usize>)> {
    assert!(dim >= 1);
    let nbox = 2 * dim;
    let mut all: Vec<Halfspace> = Vec::with_capacity(nbox + constraints.len());
    for i in 0..dim {
        all.push(Halfspace::new(linalg::unit(dim, i), -bound.clone()));
        all.push(Halfspace::new(linalg::scale(&linalg::unit(dim, i), &Q::from_integer((-1).into())), -bound.clone()));
    }
    all.extend(constraints.iter().cloned());

    let mut verts: Vec<Vertex> = (0..1usize << dim)
        .map(|mask| {
            let point = (0..dim)
                .map(|i| if mask >> i & 1 == 1 { bound.clone() } else { -bound.clone() })
                .collect();
            let tight = (0..dim).map(|i| 2 * i + (mask >> i & 1)).collect();
            Vertex { point, tight }
        })
        .collect();

    for ci in nbox..all.len() {
        let h = &all[ci];
        let vals: Vec<Q> = verts.iter().map(|v| h.slack(&v.point)).collect();
        if vals.iter().all(|v| !v.is_negative()) {
            for (v, s) in verts.iter_mut().zip(&vals) {
                if s.is_zero() {
                    v.tight.push(ci);
                }
            }
            continue;
        }
        if vals.iter().all(|v| v.is_negative()) {
            return Vec::new();
        }
        let ins: Vec<usize> = (0..verts.len()).filter(|&i| vals[i].is_positive()).collect();
        let outs: Vec<usize> = (0..verts.len()).filter(|&i| vals[i].is_negative()).collect();
        let mut created = Vec::new();
        for &u in &ins {
            for &w in &outs {
                let common = sorted_intersection(&verts[u].tight, &verts[w].tight);
                if common.len() + 1 < dim {
                    continue;
                }
                let blocked = (0..verts.len())
                    .any(|x| x != u && x != w && is_subset(&common, &verts[x].tight));
                if blocked {
                    continue;
                }
                let normals: Vec<Vec<Q>> = common.iter().map(|&c| all[c].normal.clone()).collect();
                if rank(&normals) + 1 != dim {
                    continue;
                }
                let lambda = &vals[u] / (&vals[u] - &vals[w]);
                let dir = linalg::sub(&verts[w].point, &verts[u].point);
                let point = linalg::axpy(&verts[u].point, &lambda, &dir);
                let mut tight = common;
                tight.push(ci);
                created.push(Vertex { point, tight });
            }
        }
        let mut next: Vec<Vertex> = Vec::with_capacity(verts.len() + created.len());
        for (i, mut v) in verts.into_iter().enumerate() {
            if vals[i].is_zero() {
                v.tight.push(ci);
                next.push(v);
            } else if vals[i].is_positive() {
                next.push(v);
            }
        }
        next.extend(created);
        verts = next;
    }
    let mut out: Vec<(Vec<Q>, Vec<usize>)> = verts
        .into_iter()
        .map(|v| {
            let tight = v.tight.into_iter().filter(|&c| c >= nbox).map(|c| c - nbox).collect();
            (v.point, tight)
        })
        .collect();
    out.sort();
    out.dedup_by(|a, b| a.0 == b.0);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{q, qi};

    #[test]
    fn triangle() {
        let hs = vec![
            Halfspace::new(vec![qi(1), qi(0)], qi(0)),
            Halfspace::new(vec![qi(0), qi(1)], qi(0)),
            Halfspace::new(vec![qi(-1), qi(-1)], qi(-1)),
        ];
        let v = enumerate_vertices(2, &hs, &qi(10));
        let pts: Vec<Vec<Q>> = v.iter().map(|x| x.0.clone()).collect();
        assert_eq!(pts, vec![vec![qi(0), qi(0)], vec![qi(0), qi(1)], vec![qi(1), qi(0)]]);
    }

    #[test]
    fn degenerate_pyramid_apex() {
        // square pyramid: apex (0,0,1) has four tight facets
        let hs = vec![
            Halfspace::new(vec![qi(0), qi(0), qi(1)], qi(0)),
            Halfspace::new(vec![qi(-1), qi(0), qi(-1)], qi(-1)),
            Halfspace::new(vec![qi(1), qi(0), qi(-1)], qi(-1)),
            Halfspace::new(vec![qi(0), qi(-1), qi(-1)], qi(-1)),
            Halfspace::new(vec![qi(0), qi(1), qi(-1)], qi(-1)),
        ];
        let v = enumerate_vertices(3, &hs, &qi(5));
        assert_eq!(v.len(), 5);
        assert!(v.iter().any(|(p, t)| *p == vec![qi(0), qi(0), qi(1)] && t.len() == 4));
    }

    #[test]
    fn single_point_and_empty() {
        let hs = vec![
            Halfspace::new(vec![qi(1)], q(1, 2)),
            Halfspace::new(vec![qi(-1)], q(-1, 2)),
        ];
        assert_eq!(enumerate_vertices(1, &hs, &qi(3)).len(), 1);
        let hs = vec![Halfspace::new(vec![qi(1)], qi(1)), Halfspace::new(vec![qi(-1)], qi(0))];
        assert!(enumerate_vertices(1, &hs, &qi(3)).is_empty());
    }
}
