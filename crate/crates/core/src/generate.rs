//! Seeded instance generators.

use crate::error::{Error, Result};
use crate::geometry::MassCloud;
use crate::linalg::{self, rank};
use crate::scalar::Q;
use crate::tverberg::{PointSet, TvInstance, TvVariant};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Coordinates are multiples of this.
pub const GRID_DENOMINATOR: i64 = 1024;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Genericity {
    Generic,
    Clustered,
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn coord(rng: &mut ChaCha8Rng, spread: i64) -> Q {
    Q::new(rng.random_range(-spread..=spread).into(), GRID_DENOMINATOR.into())
}

fn subsets_ok(points: &[Vec<Q>], size: usize) -> bool {
    if points.len() < size {
        return true;
    }
    let mut idx: Vec<usize> = (0..size).collect();
    loop {
        let diffs: Vec<Vec<Q>> = idx[1..].iter().map(|&i| linalg::sub(&points[i], &points[idx[0]])).collect();
        if rank(&diffs) < size - 1 {
            return false;
        }
        let mut i = size;
        loop {
            if i == 0 {
                return true;
            }
            i -= 1;
            if idx[i] < points.len() - size + i {
                idx[i] += 1;
                for j in i + 1..size {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// Whether every subset of at most `min(dim + 1, 4)` points is affinely independent.
pub fn is_generic(points: &[Vec<Q>]) -> bool {
    let dim = points.first().map_or(0, |p| p.len());
    (2..=(dim + 1).min(4)).all(|s| subsets_ok(points, s))
}

/// `n` points in `[-1, 1]^dim` in general position.
pub fn generic_points(rng: &mut ChaCha8Rng, n: usize, dim: usize) -> Vec<Vec<Q>> {
    let mut pts: Vec<Vec<Q>> = Vec::with_capacity(n);
    while pts.len() < n {
        let p: Vec<Q> = (0..dim).map(|_| coord(rng, GRID_DENOMINATOR)).collect();
        pts.push(p);
        if !is_generic(&pts) {
            pts.pop();
        }
    }
    pts
}

/// Points scattered around `clusters` random centers, each offset at most 1/16.
pub fn clustered_points(rng: &mut ChaCha8Rng, n: usize, dim: usize, clusters: usize) -> Vec<Vec<Q>> {
    let centers = generic_points(rng, clusters.max(1), dim);
    let mut pts: Vec<Vec<Q>> = Vec::with_capacity(n);
    let mut i = 0;
    while pts.len() < n {
        let c = &centers[i % centers.len()];
        let p: Vec<Q> = c.iter().map(|x| x + coord(rng, GRID_DENOMINATOR / 16)).collect();
        if !pts.contains(&p) {
            pts.push(p);
            i += 1;
        }
    }
    pts
}

/// Uniform clouds in `R^{2d}`.
pub fn generate_measures(d: usize, sizes: &[usize], seed: u64, genericity: Genericity) -> Result<Vec<MassCloud>> {
    if d == 0 || sizes.is_empty() || sizes.contains(&0) {
        return Err(Error::InvalidParameter("need d >= 1 and positive cloud sizes".into()));
    }
    let mut r = rng(seed);
    sizes
        .iter()
        .map(|&n| {
            let pts = match genericity {
                Genericity::Generic => generic_points(&mut r, n, 2 * d),
                Genericity::Clustered => clustered_points(&mut r, n, 2 * d, 3),
            };
            MassCloud::uniform(pts)
        })
        .collect()
}

/// One point set per entry of `parts`, sized by the Tverberg count; with `colorful`, colors come
/// in classes of `parts - 1` consecutive points.
pub fn generate_tverberg(
    d: usize,
    k: usize,
    parts: &[usize],
    variant: TvVariant,
    colorful: bool,
    seed: u64,
    genericity: Genericity,
) -> Result<TvInstance> {
    let mut inst = TvInstance { d, k, variant, sets: Vec::new() };
    if parts.is_empty() || parts.contains(&0) || k >= d {
        return Err(Error::InvalidParameter("need k < d and positive part counts".into()));
    }
    if colorful && parts.windows(2).any(|w| w[0] != w[1]) {
        return Err(Error::InvalidParameter("colorful instances need a common part count".into()));
    }
    let mut r = rng(seed);
    for &p in parts {
        let n = inst.required_size(p);
        let points = match genericity {
            Genericity::Generic => generic_points(&mut r, n, 2 * d),
            Genericity::Clustered => clustered_points(&mut r, n, 2 * d, p),
        };
        let colors = (colorful && p > 1).then(|| (0..n).map(|i| i / (p - 1)).collect());
        inst.sets.push(PointSet { points, parts: p, colors });
    }
    inst.validate()?;
    Ok(inst)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_and_sized() {
        let a = generate_tverberg(2, 1, &[2, 2], TvVariant::Complex, false, 7, Genericity::Generic).unwrap();
        let b = generate_tverberg(2, 1, &[2, 2], TvVariant::Complex, false, 7, Genericity::Generic).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.sets.iter().map(|s| s.points.len()).collect::<Vec<_>>(), vec![4, 4]);
        let c = generate_tverberg(2, 1, &[3, 3], TvVariant::Complex, true, 1, Genericity::Generic).unwrap();
        assert_eq!(c.sets[0].points.len(), 7);
        assert_eq!(c.sets[0].colors.as_ref().unwrap(), &vec![0, 0, 1, 1, 2, 2, 3]);
    }

    #[test]
    fn generic_points_are_generic() {
        let mut r = rng(3);
        let pts = generic_points(&mut r, 12, 2);
        assert!(is_generic(&pts));
        assert!(!is_generic(&[vec![Q::from_integer(0.into())], vec![Q::from_integer(0.into())]]));
    }
}
