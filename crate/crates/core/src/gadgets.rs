//! Instances showing the transversal depth bound is sharp and that one more measure is too many,
//! plus exact checks of the two lemmas behind the sharpness argument.

use crate::error::{Error, Result};
use crate::geometry::MassCloud;
use crate::linalg::{self, dot};
use crate::scalar::Q;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Construction {
    TooManyMeasures,
    TightDepth,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GadgetInstance {
    pub construction: Construction,
    pub d: usize,
    pub k: usize,
    #[serde(with = "crate::scalar::serde_q")]
    pub epsilon: Q,
    pub battery_size: usize,
    pub measures: Vec<MassCloud>,
}

/// `size` points standing in for a ball: the center when `size` is odd, then antipodal pairs on
/// the coordinate axes, halving the radius each time the axes are used up.
pub fn battery(center: &[Q], radius: &Q, size: usize) -> Vec<Vec<Q>> {
    let n = center.len();
    let mut pts = Vec::with_capacity(size);
    if size % 2 == 1 {
        pts.push(center.to_vec());
    }
    let mut r = radius.clone();
    let mut axis = 0;
    while pts.len() < size {
        for s in [1i64, -1] {
            let mut p = center.to_vec();
            p[axis] += &r * Q::from_integer(s.into());
            pts.push(p);
        }
        axis += 1;
        if axis == n {
            axis = 0;
            r /= Q::from_integer(2.into());
        }
    }
    pts
}

/// Real coordinates of the complex basis vector `e_j` (1-based), optionally times `i`.
fn complex_unit(d: usize, j: usize, imaginary: bool) -> Vec<Q> {
    let mut v = vec![Q::zero(); 2 * d];
    v[2 * (j - 1) + usize::from(imaginary)] = Q::one();
    v
}

fn check_range(d: usize, k: usize, eps: &Q, battery_size: usize) -> Result<()> {
    if k >= d || d > 3 {
        return Err(Error::InvalidParameter(format!("need 0 <= k < d <= 3, got k={k}, d={d}")));
    }
    if !eps.is_positive() || eps >= &Q::new(1.into(), 4.into()) {
        return Err(Error::InvalidParameter(format!("epsilon {eps} outside (0, 1/4)")));
    }
    if battery_size == 0 {
        return Err(Error::InvalidParameter("battery size must be positive".into()));
    }
    Ok(())
}

/// Measure 0 on `2(d-k)+1` tiny batteries around `x_0, ..., x_{2(d-k)}` with
/// `x_{2j-1} = eps^2 e_{k+j}`, `x_{2j} = eps^2 i e_{k+j}`, `x_0 = -sum`; measures `1..=k` on
/// batteries of radius `eps` at `e_1, ..., e_k`.
pub fn make_tight_depth_instance(d: usize, k: usize, eps: &Q, battery_size: usize) -> Result<GadgetInstance> {
    check_range(d, k, eps, battery_size)?;
    let e2 = eps * eps;
    let e3 = &e2 * eps;
    let mut centers = vec![vec![Q::zero(); 2 * d]];
    for j in k + 1..=d {
        for im in [false, true] {
            centers.push(linalg::scale(&complex_unit(d, j, im), &e2));
        }
    }
    let sum = centers[1..].iter().fold(vec![Q::zero(); 2 * d], |a, c| linalg::add(&a, c));
    centers[0] = linalg::scale(&sum, &-Q::one());
    let pts0: Vec<Vec<Q>> = centers.iter().flat_map(|c| battery(c, &e3, battery_size)).collect();
    let mut measures = vec![MassCloud::uniform(pts0)?];
    for j in 1..=k {
        measures.push(MassCloud::uniform(battery(&complex_unit(d, j, false), eps, battery_size))?);
    }
    Ok(GadgetInstance { construction: Construction::TightDepth, d, k, epsilon: eps.clone(), battery_size, measures })
}

/// `k+2` batteries of radius `eps` at `0, e_1, ..., e_{k+1}`, one measure each.
pub fn make_too_many_measures_instance(d: usize, k: usize, eps: &Q, battery_size: usize) -> Result<GadgetInstance> {
    check_range(d, k, eps, battery_size)?;
    if k + 1 > d {
        return Err(Error::InvalidParameter("need k + 1 <= d for k + 2 independent centers".into()));
    }
    let mut measures = vec![MassCloud::uniform(battery(&vec![Q::zero(); 2 * d], eps, battery_size))?];
    for j in 1..=k + 1 {
        measures.push(MassCloud::uniform(battery(&complex_unit(d, j, false), eps, battery_size))?);
    }
    Ok(GadgetInstance { construction: Construction::TooManyMeasures, d, k, epsilon: eps.clone(), battery_size, measures })
}

// ---------------------------------------------------------------------------------------------
// Separation in the simplex with vertices e_0 = -(e_1 + ... + e_m), e_1, ..., e_m

/// The halfspace `<normal, x> <= 1 - r |normal|`: the facet halfspace opposite `e_j` pushed
/// inward by `r`. Membership is decided with squares, so no square roots appear.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShiftedHalfspace {
    pub j: usize,
    #[serde(with = "crate::scalar::serde_qvec")]
    pub normal: Vec<Q>,
    #[serde(with = "crate::scalar::serde_q")]
    pub shift: Q,
}

impl ShiftedHalfspace {
    pub fn norm_sq(&self) -> Q {
        dot(&self.normal, &self.normal)
    }

    pub fn contains(&self, x: &[Q]) -> bool {
        let room = Q::one() - dot(&self.normal, x);
        !room.is_negative() && &self.shift * &self.shift * self.norm_sq() <= &room * &room
    }

    /// Whether the open `radius`-ball around `x` misses the halfspace.
    pub fn ball_misses(&self, x: &[Q], radius: &Q) -> bool {
        // distance from x to the boundary, on the far side, is (f(x) - 1)/|a| + shift
        let over = dot(&self.normal, x) - Q::one();
        if over.is_negative() {
            // need (over + shift |a|) >= radius |a|, i.e. (shift - radius)|a| >= -over
            let gap = &self.shift - radius;
            !gap.is_negative() && &gap * &gap * self.norm_sq() >= &over * &over
        } else {
            radius <= &self.shift || {
                let gap = radius - &self.shift;
                &gap * &gap * self.norm_sq() <= &over * &over
            }
        }
    }
}

pub fn simplex_vertex(m: usize, j: usize) -> Vec<Q> {
    if j == 0 {
        vec![-Q::one(); m]
    } else {
        linalg::unit(m, j - 1)
    }
}

/// Outer facet normal scaled so the facet opposite `e_j` is `<a_j, x> = 1`.
pub fn facet_normal(m: usize, j: usize) -> Vec<Q> {
    let mut a = vec![Q::one(); m];
    if j > 0 {
        a[j - 1] -= Q::from_integer(((m + 1) as i64).into());
    }
    a
}

/// Whether `r` is below the inradius `(m+1) / (sqrt(m) + m sqrt(m^2+m-1))`, decided exactly.
pub fn below_inradius(m: usize, r: &Q) -> bool {
    let mq = Q::from_integer((m as i64).into());
    let a2 = r * r * &mq;
    let b2 = r * r * &mq * &mq * (&mq * &mq + &mq - Q::one());
    let c = &mq + Q::one();
    let s = &c * &c - &a2 - &b2;
    s.is_positive() && Q::from_integer(4.into()) * &a2 * &b2 < &s * &s
}

/// Some `j` and shifted halfspace containing `e_j` and `q` whose complement contains the open
/// `r`-balls around the other vertices. Postconditions are re-verified before returning.
pub fn separating_halfspace(m: usize, r: &Q, q: &[Q]) -> Result<ShiftedHalfspace> {
    if m < 2 {
        return Err(Error::InvalidParameter("need m >= 2".into()));
    }
    if q.len() != m {
        return Err(Error::DimensionMismatch { expected: m, found: q.len() });
    }
    if !r.is_positive() || !below_inradius(m, r) {
        return Err(Error::Hypothesis(format!("radius {r} is not in (0, R({m}))")));
    }
    for j in 0..=m {
        let h = ShiftedHalfspace { j, normal: facet_normal(m, j), shift: r.clone() };
        if h.contains(q) {
            let ok = h.contains(&simplex_vertex(m, j))
                && (0..=m).filter(|&l| l != j).all(|l| h.ball_misses(&simplex_vertex(m, l), r));
            if !ok {
                return Err(Error::Internal(format!("halfspace {j} fails its postconditions")));
            }
            return Ok(h);
        }
    }
    Err(Error::Internal("no shifted halfspace contains the query".into()))
}

// ---------------------------------------------------------------------------------------------
// Projection along a perturbed flat

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NormCheckReport {
    pub samples: usize,
    pub degenerate: usize,
    pub violations: usize,
    /// Largest squared image norm seen.
    #[serde(with = "crate::scalar::serde_q")]
    pub max_norm_sq: Q,
    pub passed: bool,
}

/// Rational unit vectors: coordinate axes and (3/5, 4/5) rotations in each coordinate pair.
pub fn unit_battery(n: usize) -> Vec<Vec<Q>> {
    let mut out = Vec::new();
    for i in 0..n {
        out.push(linalg::unit(n, i));
    }
    let (a, b) = (Q::new(3.into(), 5.into()), Q::new(4.into(), 5.into()));
    for i in 0..n {
        for j in i + 1..n {
            for (x, y) in [(a.clone(), b.clone()), (a.clone(), -b.clone()), (b.clone(), a.clone()), (b.clone(), -a.clone())] {
                let mut v = vec![Q::zero(); n];
                v[i] = x;
                v[j] = y;
                out.push(v);
            }
        }
    }
    out
}

/// For sampled `y_0 in B_eps(0), y_j in B_eps(e_j)`, projects onto `U = span_C(e_{k+1}..e_d)`
/// along the complex span of `y_j - y_0` and checks every battery vector lands within radius 2.
pub fn projection_norm_check(d: usize, k: usize, eps: &Q, samples: usize, seed: u64) -> Result<NormCheckReport> {
    if k >= d {
        return Err(Error::InvalidParameter("need k < d".into()));
    }
    let n = 2 * d;
    let mut rng = crate::generate::rng(seed);
    // each coordinate offset at most eps/n keeps the sample inside the eps-ball
    let scale = eps / Q::from_integer(((n as i64) * 1024).into());
    let mut jitter = |c: &[Q]| -> Vec<Q> {
        c.iter().map(|x| x + &scale * Q::from_integer(rng.random_range(-1024i64..=1024).into())).collect()
    };
    let u_basis: Vec<Vec<Q>> = (2 * k..n).map(|i| linalg::unit(n, i)).collect();
    let battery = unit_battery(n);
    let four = Q::from_integer(4.into());
    let mut report = NormCheckReport { samples, degenerate: 0, violations: 0, max_norm_sq: Q::zero(), passed: true };
    for _ in 0..samples {
        let y0 = jitter(&vec![Q::zero(); n]);
        let ys: Vec<Vec<Q>> = (1..=k).map(|j| jitter(&complex_unit(d, j, false))).collect();
        let mut dir = Vec::new();
        for y in &ys {
            let v = linalg::sub(y, &y0);
            dir.push(crate::geometry::j_map(&v));
            dir.push(v);
        }
        let mut cols = dir.clone();
        cols.extend(u_basis.iter().cloned());
        if linalg::rank(&cols) < n {
            report.degenerate += 1;
            continue;
        }
        let m = linalg::transpose(&cols);
        for v in &battery {
            let coef = linalg::solve(&m, v).expect("full rank");
            let img = &coef[dir.len()..];
            let ns: Q = img.iter().map(|x| x * x).sum();
            if ns > report.max_norm_sq {
                report.max_norm_sq = ns.clone();
            }
            if ns > four {
                report.violations += 1;
            }
        }
    }
    report.passed = report.degenerate == 0 && report.violations == 0;
    Ok(report)
}
