//! Exact halfspace depth of points and flats, and depth regions.

use crate::error::{Error, Result};
use crate::geometry::{ComplexFlat, MassCloud};
use crate::linalg::{self, dot, nullspace, rank, rref, unit};
use crate::polytope::{enumerate_vertices, Halfspace};
use crate::scalar::{serde_q, serde_qmat, serde_qvec, Q};
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::collections::HashSet;

pub const MAX_DEPTH_DIM: usize = 6;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DepthValue {
    #[serde(with = "serde_q")]
    pub value: Q,
    /// The closed halfspace `<x, witness_normal> >= witness_offset` has weight `value`.
    #[serde(with = "serde_qvec")]
    pub witness_normal: Vec<Q>,
    #[serde(with = "serde_q")]
    pub witness_offset: Q,
}

impl DepthValue {
    pub fn witness(&self) -> Halfspace {
        Halfspace::new(self.witness_normal.clone(), self.witness_offset.clone())
    }
}

/// Minimum over nonzero `u` of the weight of `{a : <a, u> >= 0}`, with a minimizing `u`.
///
/// Vectors of lower rank are first rewritten in pivot coordinates. In full rank the optimum is
/// attained next to a ray of the arrangement `{a^perp}`: the weight strictly on the positive side
/// of the ray plus the optimum of the same problem restricted to the vectors orthogonal to it.
fn min_closed_weight(a: &[Vec<Q>], w: &[Q], r: usize) -> (Q, Vec<Q>) {
    let total: Q = w.iter().sum();
    let mut m = a.to_vec();
    let pivots = if m.is_empty() { Vec::new() } else { rref(&mut m) };
    let s = pivots.len();
    if s == 0 {
        return (total, unit(r, 0));
    }
    if s < r {
        let sub: Vec<Vec<Q>> = a.iter().map(|v| pivots.iter().map(|&j| v[j].clone()).collect()).collect();
        let (val, u) = min_closed_weight(&sub, w, s);
        let mut lifted = vec![Q::zero(); r];
        for (i, &j) in pivots.iter().enumerate() {
            lifted[j] = u[i].clone();
        }
        return (val, lifted);
    }
    if r == 1 {
        let pos: Q = a.iter().zip(w).filter(|(v, _)| !v[0].is_negative()).map(|(_, x)| x.clone()).sum();
        let neg: Q = a.iter().zip(w).filter(|(v, _)| !v[0].is_positive()).map(|(_, x)| x.clone()).sum();
        return if pos <= neg { (pos, vec![Q::one()]) } else { (neg, vec![-Q::one()]) };
    }
    let n = a.len();
    let mut best: Option<(Q, Vec<Q>)> = None;
    let mut seen: HashSet<Vec<Q>> = HashSet::new();
    let mut idx: Vec<usize> = (0..r - 1).collect();
    if r - 1 > n {
        unreachable!("full rank implies at least r vectors");
    }
    loop {
        let rows: Vec<Vec<Q>> = idx.iter().map(|&i| a[i].clone()).collect();
        if rank(&rows) == r - 1 {
            let u0 = nullspace(&rows, r).pop().expect("one-dimensional kernel");
            for sign in [1i64, -1] {
                let u: Vec<Q> = u0.iter().map(|x| x * Q::from_integer(sign.into())).collect();
                if !seen.insert(crate::scalar::normalize_direction(&u)) {
                    continue;
                }
                let mut strict = Q::zero();
                let mut bvec = Vec::new();
                let mut bw = Vec::new();
                let proj: Vec<Q> = a.iter().map(|v| dot(v, &u)).collect();
                for i in 0..n {
                    if proj[i].is_positive() {
                        strict += &w[i];
                    } else if proj[i].is_zero() {
                        bvec.push(a[i].clone());
                        bw.push(w[i].clone());
                    }
                }
                if let Some((bv, _)) = &best {
                    if &strict >= bv {
                        continue;
                    }
                }
                let (sub_val, sub_u) = min_closed_weight(&bvec, &bw, r);
                let val = strict + sub_val;
                if best.as_ref().is_none_or(|(bv, _)| &val < bv) {
                    let witness = perturb(&u, &sub_u, a, &proj);
                    best = Some((val, witness));
                }
            }
        }
        // next (r-1)-subset in lexicographic order
        let k = r - 1;
        let mut i = k;
        loop {
            if i == 0 {
                let (v, u) = best.expect("a full-rank set has a ray");
                return (v, u);
            }
            i -= 1;
            if idx[i] < n - k + i {
                idx[i] += 1;
                for j in i + 1..k {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// `u + delta * v` with `delta > 0` small enough that no nonzero sign of `<a, u>` flips.
fn perturb(u: &[Q], v: &[Q], a: &[Vec<Q>], proj: &[Q]) -> Vec<Q> {
    let mut delta = Q::one();
    for (x, pu) in a.iter().zip(proj) {
        if pu.is_zero() {
            continue;
        }
        let pv = dot(x, v);
        if pv.is_zero() {
            continue;
        }
        let bound = pu.abs() / (Q::from_integer(2.into()) * pv.abs());
        if bound < delta {
            delta = bound;
        }
    }
    linalg::axpy(u, &delta, v)
}

pub fn tukey_depth(cloud: &MassCloud, q: &[Q]) -> Result<DepthValue> {
    cloud.validate()?;
    let m = cloud.dim();
    if q.len() != m {
        return Err(Error::DimensionMismatch { expected: m, found: q.len() });
    }
    if m > MAX_DEPTH_DIM {
        return Err(Error::UnsupportedDimension { dim: m, max: MAX_DEPTH_DIM });
    }
    let a: Vec<Vec<Q>> = cloud.points.iter().map(|p| linalg::sub(p, q)).collect();
    let (value, normal) = min_closed_weight(&a, &cloud.weights, m);
    let offset = dot(q, &normal);
    let recount = cloud.halfspace_weight(&normal, &offset);
    if recount != value {
        return Err(Error::Internal(format!("depth witness recount {recount} != {value}")));
    }
    Ok(DepthValue { value, witness_normal: normal, witness_offset: offset })
}

/// Depth of a flat: the least weight of a closed halfspace containing it.
pub fn flat_depth(cloud: &MassCloud, flat: &ComplexFlat) -> Result<DepthValue> {
    cloud.validate()?;
    let n = cloud.dim();
    if flat.ambient_dim() != n {
        return Err(Error::DimensionMismatch { expected: n, found: flat.ambient_dim() });
    }
    let codim = n - flat.direction_basis.len();
    if codim > MAX_DEPTH_DIM {
        return Err(Error::UnsupportedDimension { dim: codim, max: MAX_DEPTH_DIM });
    }
    let dir = &flat.direction_basis;
    let a: Vec<Vec<Q>> =
        cloud.points.iter().map(|p| linalg::project_complement(dir, &linalg::sub(p, &flat.base))).collect();
    let (value, u) = min_closed_weight(&a, &cloud.weights, n);
    let mut normal = linalg::project_complement(dir, &u);
    if linalg::is_zero_vec(&normal) {
        normal = (0..n)
            .map(|i| linalg::project_complement(dir, &unit(n, i)))
            .find(|v| !linalg::is_zero_vec(v))
            .unwrap_or_else(|| vec![Q::zero(); n]);
    }
    let offset = dot(&flat.base, &normal);
    let recount = cloud.halfspace_weight(&normal, &offset);
    if recount != value {
        return Err(Error::Internal(format!("flat depth witness recount {recount} != {value}")));
    }
    Ok(DepthValue { value, witness_normal: normal, witness_offset: offset })
}

/// Independent planar oracle: weights of closed halfplanes whose boundary passes through `q` and
/// a cloud point, the same lines slightly rotated either way, and the axis directions.
pub fn brute_force_depth_2d(cloud: &MassCloud, q: &[Q]) -> Q {
    let a: Vec<Vec<Q>> = cloud.points.iter().map(|p| linalg::sub(p, q)).collect();
    let weight = |u: &[Q]| -> Q {
        a.iter().zip(&cloud.weights).filter(|(v, _)| !dot(v, u).is_negative()).map(|(_, w)| w.clone()).sum()
    };
    let mut cands: Vec<Vec<Q>> = Vec::new();
    for (x, y) in [(1, 0), (-1, 0), (0, 1), (0, -1)] {
        cands.push(vec![Q::from_integer(x.into()), Q::from_integer(y.into())]);
    }
    for v in &a {
        if linalg::is_zero_vec(v) {
            continue;
        }
        for s in [1i64, -1] {
            let s = Q::from_integer(s.into());
            let u = vec![-&v[1] * &s, &v[0] * &s];
            let rot = vec![-u[1].clone(), u[0].clone()];
            let mut delta = Q::one();
            for b in &a {
                let pu = dot(b, &u);
                let pr = dot(b, &rot);
                if !pu.is_zero() && !pr.is_zero() {
                    let bound = pu.abs() / (Q::from_integer(2.into()) * pr.abs());
                    if bound < delta {
                        delta = bound;
                    }
                }
            }
            cands.push(linalg::axpy(&u, &delta, &rot));
            cands.push(linalg::axpy(&u, &-delta.clone(), &rot));
            cands.push(u);
        }
    }
    cands.iter().map(|u| weight(u)).min().expect("candidates are nonempty")
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DepthRegion {
    #[serde(with = "serde_q")]
    pub threshold: Q,
    pub halfspaces: Vec<Halfspace>,
    #[serde(with = "serde_qmat")]
    pub vertices: Vec<Vec<Q>>,
}

impl DepthRegion {
    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn contains(&self, x: &[Q]) -> bool {
        !self.is_empty() && self.halfspaces.iter().all(|h| h.contains(x))
    }
}

/// Affine hull data: base point, pivot coordinates, and RREF rows of the difference vectors.
struct Hull {
    base: Vec<Q>,
    pivots: Vec<usize>,
    rows: Vec<Vec<Q>>,
}

fn affine_hull(points: &[Vec<Q>]) -> Hull {
    let base = points[0].clone();
    let mut rows: Vec<Vec<Q>> = points.iter().skip(1).map(|p| linalg::sub(p, &base)).collect();
    let pivots = if rows.is_empty() { Vec::new() } else { rref(&mut rows) };
    rows.truncate(pivots.len());
    Hull { base, pivots, rows }
}

impl Hull {
    fn coords(&self, x: &[Q]) -> Vec<Q> {
        self.pivots.iter().map(|&j| x[j].clone()).collect()
    }

    fn lift(&self, y: &[Q]) -> Vec<Q> {
        let mut x = self.base.clone();
        for (i, &j) in self.pivots.iter().enumerate() {
            let c = &y[i] - &self.base[j];
            x = linalg::axpy(&x, &c, &self.rows[i]);
        }
        x
    }

    fn lift_halfspace(&self, h: &Halfspace, n: usize) -> Halfspace {
        let mut normal = vec![Q::zero(); n];
        for (i, &j) in self.pivots.iter().enumerate() {
            normal[j] = h.normal[i].clone();
        }
        Halfspace::new(normal, h.offset.clone())
    }

    fn equalities(&self, n: usize) -> Vec<Halfspace> {
        let normals = if self.rows.is_empty() {
            (0..n).map(|i| unit(n, i)).collect()
        } else {
            nullspace(&self.rows, n)
        };
        let mut out = Vec::new();
        for v in normals {
            let off = dot(&v, &self.base);
            out.push(Halfspace::new(v.clone(), off.clone()));
            out.push(Halfspace::new(v.iter().map(|x| -x).collect(), -off));
        }
        out
    }
}

/// Halfspaces bounded by hyperplanes through `s` affinely independent points whose closed side
/// carries weight above `1 - t`, for a cloud spanning `Q^s`.
fn region_constraints(points: &[Vec<Q>], weights: &[Q], t: &Q, s: usize) -> Vec<Halfspace> {
    region_constraints_int(points, weights, t, s).unwrap_or_else(|| region_constraints_exact(points, weights, t, s))
}

fn region_constraints_exact(points: &[Vec<Q>], weights: &[Q], t: &Q, s: usize) -> Vec<Halfspace> {
    let n = points.len();
    let limit = Q::one() - t;
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (0..s).collect();
    if s > n {
        return out;
    }
    loop {
        let p0 = &points[idx[0]];
        let diffs: Vec<Vec<Q>> = idx[1..].iter().map(|&i| linalg::sub(&points[i], p0)).collect();
        let normal = if s == 1 {
            Some(vec![Q::one()])
        } else if rank(&diffs) == s - 1 {
            nullspace(&diffs, s).pop()
        } else {
            None
        };
        if let Some(nv) = normal {
            let off = dot(&nv, p0);
            for sign in [1i64, -1] {
                let sg = Q::from_integer(sign.into());
                let h = Halfspace::new(linalg::scale(&nv, &sg), &off * &sg).normalized();
                if seen.contains(&h) {
                    continue;
                }
                let wt: Q = points.iter().zip(weights).filter(|(p, _)| h.contains(p)).map(|(_, w)| w.clone()).sum();
                seen.insert(h.clone());
                if wt > limit {
                    out.push(h);
                }
            }
        }
        let mut i = s;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if idx[i] < n - s + i {
                idx[i] += 1;
                for j in i + 1..s {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
        }
    }
}

fn det_i128(m: &[Vec<i128>], cols: &[usize]) -> i128 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    let row = &m[n - 1];
    let mut acc = 0i128;
    for (pos, &c) in cols.iter().enumerate() {
        if row[c] == 0 {
            continue;
        }
        let rest: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
        let minor = det_i128(&m[..n - 1], &rest);
        let sign = if (n - 1 + pos).is_multiple_of(2) { 1 } else { -1 };
        acc += sign * row[c] * minor;
    }
    acc
}

fn gcd_i128(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Same constraints as [`region_constraints`], computed on integer coordinates after clearing
/// denominators; `None` when the entries are too large for `i128`.
fn region_constraints_int(points: &[Vec<Q>], weights: &[Q], t: &Q, s: usize) -> Option<Vec<Halfspace>> {
    use num_bigint::BigInt;
    use num_integer::Integer;
    use num_traits::ToPrimitive;
    let n = points.len();
    if s > n {
        return Some(Vec::new());
    }
    let den = points.iter().flatten().fold(BigInt::one(), |l, x| l.lcm(x.denom()));
    let ip: Vec<Vec<i128>> = points
        .iter()
        .map(|p| p.iter().map(|x| (x.numer() * (&den / x.denom())).to_i128()).collect::<Option<Vec<_>>>())
        .collect::<Option<_>>()?;
    let max = ip.iter().flatten().map(|x| x.unsigned_abs()).max().unwrap_or(0).max(1) as f64;
    let fact: f64 = (1..s).map(|i| i as f64).product();
    let bound = (s as f64 + 1.0) * fact * (2.0 * max).powi(s as i32 - 1) * max;
    if bound.log2() > 120.0 {
        return None;
    }
    let wden = weights.iter().fold(BigInt::one(), |l, w| l.lcm(w.denom()));
    let iw: Vec<i128> = weights.iter().map(|w| (w.numer() * (&wden / w.denom())).to_i128()).collect::<Option<_>>()?;
    let limit = (Q::one() - t) * Q::from_integer(wden);
    let denq = Q::from_integer(den);
    let all_cols: Vec<usize> = (0..s).collect();
    let mut seen: HashSet<(Vec<i128>, i128)> = HashSet::new();
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (0..s).collect();
    loop {
        let p0 = &ip[idx[0]];
        let diffs: Vec<Vec<i128>> = idx[1..].iter().map(|&i| ip[i].iter().zip(p0).map(|(a, b)| a - b).collect()).collect();
        let mut normal: Vec<i128> = (0..s)
            .map(|c| {
                let rest: Vec<usize> = all_cols.iter().copied().filter(|&x| x != c).collect();
                let m = det_i128(&diffs, &rest);
                if c % 2 == 0 {
                    m
                } else {
                    -m
                }
            })
            .collect();
        let g = normal.iter().fold(0, |g, &x| gcd_i128(g, x));
        if g != 0 {
            for x in normal.iter_mut() {
                *x /= g;
            }
            let off: i128 = normal.iter().zip(p0).map(|(a, b)| a * b).sum();
            let (mut pos, mut neg) = (0i128, 0i128);
            for (p, w) in ip.iter().zip(&iw) {
                let v: i128 = normal.iter().zip(p).map(|(a, b)| a * b).sum::<i128>() - off;
                if v >= 0 {
                    pos += w;
                }
                if v <= 0 {
                    neg += w;
                }
            }
            for (sign, wsum) in [(1i128, pos), (-1, neg)] {
                let key: (Vec<i128>, i128) = (normal.iter().map(|x| sign * x).collect(), sign * off);
                if !seen.insert(key.clone()) {
                    continue;
                }
                if Q::from_integer(wsum.into()) > limit {
                    let nq: Vec<Q> = key.0.iter().map(|&x| Q::from_integer(x.into())).collect();
                    out.push(Halfspace::new(nq, Q::from_integer(key.1.into()) / &denq).normalized());
                }
            }
        }
        let mut i = s;
        loop {
            if i == 0 {
                return Some(out);
            }
            i -= 1;
            if idx[i] < n - s + i {
                idx[i] += 1;
                for j in i + 1..s {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
        }
    }
}

fn region_impl(cloud: &MassCloud, t: &Q, recheck: bool) -> Result<DepthRegion> {
    cloud.validate()?;
    let m = cloud.dim();
    if m > MAX_DEPTH_DIM {
        return Err(Error::UnsupportedDimension { dim: m, max: MAX_DEPTH_DIM });
    }
    if !t.is_positive() || t > &Q::one() {
        return Err(Error::InvalidParameter(format!("threshold {t} outside (0, 1]")));
    }
    let hull = affine_hull(&cloud.points);
    let s = hull.pivots.len();
    let mut halfspaces = hull.equalities(m);
    if s == 0 {
        return Ok(DepthRegion { threshold: t.clone(), halfspaces, vertices: vec![hull.base.clone()] });
    }
    let pts: Vec<Vec<Q>> = cloud.points.iter().map(|p| hull.coords(p)).collect();
    let cons = region_constraints(&pts, &cloud.weights, t, s);
    let bound = pts.iter().flatten().map(|x| x.abs()).max().unwrap_or_else(Q::zero) + Q::one();
    let verts = enumerate_vertices(s, &cons, &bound);
    if verts.is_empty() {
        halfspaces.extend(cons.iter().map(|h| hull.lift_halfspace(h, m)));
        return Ok(DepthRegion { threshold: t.clone(), halfspaces, vertices: Vec::new() });
    }
    let mut used = vec![false; cons.len()];
    for (_, tight) in &verts {
        for &c in tight {
            used[c] = true;
        }
    }
    halfspaces.extend(cons.iter().zip(&used).filter(|(_, &u)| u).map(|(h, _)| hull.lift_halfspace(h, m)));
    let vertices: Vec<Vec<Q>> = verts.iter().map(|(y, _)| hull.lift(y)).collect();
    if recheck {
        for v in &vertices {
            let dv = tukey_depth(cloud, v)?;
            if &dv.value < t {
                return Err(Error::Internal(format!("region vertex has depth {} < {t}", dv.value)));
            }
        }
    }
    Ok(DepthRegion { threshold: t.clone(), halfspaces, vertices })
}

/// The polytope `{q : depth(q) >= t}`; every reported vertex is re-checked with `tukey_depth`.
pub fn centerpoint_region(cloud: &MassCloud, t: &Q) -> Result<DepthRegion> {
    region_impl(cloud, t, true)
}

/// Same region without the per-vertex depth re-check, for search inner loops whose results are
/// verified independently afterwards.
pub fn centerpoint_region_unchecked(cloud: &MassCloud, t: &Q) -> Result<DepthRegion> {
    region_impl(cloud, t, false)
}

/// Average of the region's vertices.
pub fn centerpoint_barycenter(cloud: &MassCloud, t: &Q) -> Result<Vec<Q>> {
    let region = centerpoint_region(cloud, t)?;
    if region.is_empty() {
        return Err(Error::EmptyRegion);
    }
    let n = Q::from_integer((region.vertices.len() as i64).into());
    let mut sum = vec![Q::zero(); cloud.dim()];
    for v in &region.vertices {
        sum = linalg::add(&sum, v);
    }
    Ok(sum.iter().map(|x| x / &n).collect())
}
