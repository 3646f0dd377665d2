//! Searches for complex central transversals, flags of them, and odd-codimension transversals.
//!
//! Candidate projection directions are sampled in rational Grassmannian charts. For each
//! candidate the clouds are projected, their depth regions are intersected by one exact margin
//! program, and a nonnegative margin yields a flat that is then re-verified from scratch.

use crate::complex::{from_real, hermitian_complement, realify_basis, subsets, to_real, GrassmannChart, C};
use crate::depth::{centerpoint_region_unchecked, flat_depth, DepthValue};
use crate::error::{Error, Result};
use crate::geometry::{j_map, make_complex_flat, make_complex_plus_line_flat, ComplexFlat, FlatKind, MassCloud};
use crate::linalg::{self, dot, rank};
use crate::lp::max_margin;
use crate::polytope::Halfspace;
use crate::scalar::{serde_q, serde_qvec, Q};
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub const DEFAULT_BUDGET: u64 = 100_000;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchConfig {
    /// Maximum number of candidate evaluations.
    pub budget: u64,
    #[serde(with = "serde_q")]
    pub grid_step: Q,
    /// Grid half-width, in steps.
    pub grid_radius: u32,
    pub restarts: usize,
    pub seed: u64,
    /// Worker threads; 0 means the available parallelism.
    pub workers: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            budget: DEFAULT_BUDGET,
            grid_step: Q::new(1.into(), 8.into()),
            grid_radius: 16,
            restarts: 16,
            seed: 0,
            workers: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchTrace {
    pub seed: u64,
    pub iterations: u64,
    pub phase: String,
    pub family: usize,
    #[serde(with = "serde_qvec")]
    pub params: Vec<Q>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransversalCert {
    pub flat: ComplexFlat,
    pub depths: Vec<DepthValue>,
    #[serde(with = "serde_q")]
    pub bound: Q,
    pub trace: SearchTrace,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FlagLevel {
    pub flat: ComplexFlat,
    /// Indices of the measures this level is certified for.
    pub measures: Vec<usize>,
    #[serde(with = "serde_q")]
    pub bound: Q,
    pub depths: Vec<DepthValue>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FlagCert {
    pub levels: Vec<FlagLevel>,
    pub trace: SearchTrace,
}

/// What a search that ran out of budget still knows.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BestEffort {
    pub flat: Option<ComplexFlat>,
    /// Exact minimum depth of `flat` over the measures.
    #[serde(with = "serde_q")]
    pub min_depth: Q,
    #[serde(with = "crate::scalar::serde_qvec")]
    pub margin: Vec<Q>,
    pub iterations: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SearchOutcome<T> {
    Certified(T),
    Exhausted(BestEffort),
}

impl<T> SearchOutcome<T> {
    pub fn certified(self) -> Option<T> {
        match self {
            SearchOutcome::Certified(c) => Some(c),
            SearchOutcome::Exhausted(_) => None,
        }
    }

    pub fn map<U>(self, f: impl FnOnce(T) -> U) -> SearchOutcome<U> {
        match self {
            SearchOutcome::Certified(c) => SearchOutcome::Certified(f(c)),
            SearchOutcome::Exhausted(b) => SearchOutcome::Exhausted(b),
        }
    }
}

pub fn transversal_bound(d: usize, k: usize) -> Q {
    Q::new(1.into(), ((2 * d - 2 * k + 1) as i64).into())
}

pub fn odd_transversal_bound(d: usize, k: usize) -> Q {
    Q::new(1.into(), ((2 * d - 2 * k + 2) as i64).into())
}

// ---------------------------------------------------------------------------------------------
// Generic sampling driver

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Sample {
    pub family: usize,
    pub params: Vec<Q>,
}

#[derive(Debug, Clone)]
pub(crate) struct Eval {
    pub margin: Q,
    pub point: Vec<Q>,
}

pub(crate) struct Driver<'a, E> {
    cfg: &'a SearchConfig,
    family_dims: Vec<usize>,
    eval: E,
    pub used: u64,
    pub best: Option<(Sample, Eval)>,
    pool: rayon::ThreadPool,
}

fn build_pool(workers: usize) -> rayon::ThreadPool {
    let mut b = rayon::ThreadPoolBuilder::new();
    if workers > 0 {
        b = b.num_threads(workers);
    }
    b.build().expect("thread pool")
}

impl<'a, E> Driver<'a, E>
where
    E: Fn(&Sample) -> Option<Eval> + Sync,
{
    pub fn new(cfg: &'a SearchConfig, family_dims: Vec<usize>, eval: E) -> Self {
        Self { cfg, family_dims, eval, used: 0, best: None, pool: build_pool(cfg.workers) }
    }

    fn remaining(&self) -> u64 {
        self.cfg.budget.saturating_sub(self.used)
    }

    /// Evaluates in parallel, results in input order. Truncates to the remaining budget.
    fn batch(&mut self, mut samples: Vec<Sample>) -> Vec<(Sample, Option<Eval>)> {
        samples.truncate(self.remaining().min(usize::MAX as u64) as usize);
        self.used += samples.len() as u64;
        let eval = &self.eval;
        let evals: Vec<Option<Eval>> = self.pool.install(|| samples.par_iter().map(eval).collect());
        for (s, e) in samples.iter().zip(&evals) {
            if let Some(e) = e {
                if self.best.as_ref().is_none_or(|(_, b)| e.margin > b.margin) {
                    self.best = Some((s.clone(), e.clone()));
                }
            }
        }
        samples.into_iter().zip(evals).collect()
    }

    fn try_accept<T>(
        results: &[(Sample, Option<Eval>)],
        phase: &str,
        accept: &mut impl FnMut(&Sample, &Eval, &str) -> Option<T>,
    ) -> Option<T> {
        for (s, e) in results {
            if let Some(e) = e {
                if !e.margin.is_negative() {
                    if let Some(t) = accept(s, e, phase) {
                        return Some(t);
                    }
                }
            }
        }
        None
    }

    fn climb<T>(
        &mut self,
        start: Sample,
        phase: &str,
        accept: &mut impl FnMut(&Sample, &Eval, &str) -> Option<T>,
    ) -> Option<T> {
        let first = self.batch(vec![start]);
        if let Some(t) = Self::try_accept(&first, phase, accept) {
            return Some(t);
        }
        let Some((mut cur, Some(mut cur_eval))) = first.into_iter().next() else {
            return None;
        };
        let two = Q::from_integer(2.into());
        let mut step = &self.cfg.grid_step * &two;
        let floor = &self.cfg.grid_step / Q::from_integer(64.into());
        let mut moves = 0;
        while step >= floor && self.remaining() > 0 && moves < 64 {
            let mut nbs = Vec::with_capacity(2 * cur.params.len());
            for j in 0..cur.params.len() {
                for sg in [1i64, -1] {
                    let mut p = cur.params.clone();
                    p[j] += &step * Q::from_integer(sg.into());
                    nbs.push(Sample { family: cur.family, params: p });
                }
            }
            if nbs.is_empty() {
                return None;
            }
            let res = self.batch(nbs);
            if let Some(t) = Self::try_accept(&res, phase, accept) {
                return Some(t);
            }
            let best = res
                .into_iter()
                .filter_map(|(s, e)| e.map(|e| (s, e)))
                .fold(None::<(Sample, Eval)>, |acc, (s, e)| match acc {
                    Some((bs, be)) if be.margin >= e.margin => Some((bs, be)),
                    _ => Some((s, e)),
                });
            match best {
                Some((s, e)) if e.margin > cur_eval.margin => {
                    cur = s;
                    cur_eval = e;
                    moves += 1;
                }
                _ => step = &step / &two,
            }
        }
        None
    }

    /// Seeds, hill climbing from the best seed, seeded random restarts, then a grid spiral.
    pub fn run<T>(
        &mut self,
        seeds: Vec<Sample>,
        mut accept: impl FnMut(&Sample, &Eval, &str) -> Option<T>,
    ) -> Option<T> {
        let res = self.batch(seeds.clone());
        if let Some(t) = Self::try_accept(&res, "seed", &mut accept) {
            return Some(t);
        }
        let start = res
            .iter()
            .filter_map(|(s, e)| e.as_ref().map(|e| (s, e)))
            .fold(None::<(&Sample, &Eval)>, |acc, (s, e)| match acc {
                Some((bs, be)) if be.margin >= e.margin => Some((bs, be)),
                _ => Some((s, e)),
            })
            .map(|(s, _)| s.clone())
            .or_else(|| seeds.first().cloned());
        let Some(start) = start else { return None };
        if let Some(t) = self.climb(start.clone(), "refine", &mut accept) {
            return Some(t);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(self.cfg.seed);
        for r in 1..=self.cfg.restarts {
            if self.remaining() == 0 {
                return None;
            }
            let params = start
                .params
                .iter()
                .map(|x| x + Q::new(rng.random_range(-16i64..=16).into(), 16.into()))
                .collect();
            let s = Sample { family: start.family, params };
            if let Some(t) = self.climb(s, &format!("restart-{r}"), &mut accept) {
                return Some(t);
            }
        }
        for fam in 0..self.family_dims.len() {
            let center: Vec<Q> = if fam == start.family {
                start.params.iter().map(|x| (x / &self.cfg.grid_step).round() * &self.cfg.grid_step).collect()
            } else {
                vec![Q::zero(); self.family_dims[fam]]
            };
            let mut grid = GridSpiral::new(center.len(), self.cfg.grid_radius as i64);
            loop {
                if self.remaining() == 0 {
                    return None;
                }
                let mut chunk = Vec::new();
                while chunk.len() < 32 {
                    match grid.next() {
                        Some(off) => {
                            let params = center
                                .iter()
                                .zip(&off)
                                .map(|(c, &o)| c + &self.cfg.grid_step * Q::from_integer(o.into()))
                                .collect();
                            chunk.push(Sample { family: fam, params });
                        }
                        None => break,
                    }
                }
                if chunk.is_empty() {
                    break;
                }
                let res = self.batch(chunk);
                if let Some(t) = Self::try_accept(&res, "grid", &mut accept) {
                    return Some(t);
                }
            }
        }
        None
    }
}

/// Integer offsets ordered by increasing sup-norm shell, lexicographic within a shell.
pub(crate) struct GridSpiral {
    dim: usize,
    radius: i64,
    shell: i64,
    cur: Option<Vec<i64>>,
}

impl GridSpiral {
    pub(crate) fn new(dim: usize, radius: i64) -> Self {
        Self { dim, radius, shell: 0, cur: None }
    }
}

impl Iterator for GridSpiral {
    type Item = Vec<i64>;
    fn next(&mut self) -> Option<Vec<i64>> {
        loop {
            if self.shell > self.radius || (self.dim == 0 && self.shell > 0) {
                return None;
            }
            let r = self.shell;
            let next = match self.cur.take() {
                None => Some(vec![-r; self.dim]),
                Some(mut v) => {
                    let mut i = self.dim;
                    loop {
                        if i == 0 {
                            break None;
                        }
                        i -= 1;
                        if v[i] < r {
                            v[i] += 1;
                            for x in v.iter_mut().skip(i + 1) {
                                *x = -r;
                            }
                            break Some(v);
                        }
                    }
                }
            };
            match next {
                Some(v) => {
                    self.cur = Some(v.clone());
                    if v.iter().map(|x| x.abs()).max().unwrap_or(0) == r {
                        return Some(v);
                    }
                }
                None => {
                    self.shell += 1;
                    self.cur = None;
                }
            }
        }
    }
}

// ---------------------------------------------------------------------------------------------
// Shared geometry helpers

pub(crate) fn project_cloud(cloud: &MassCloud, basis: &[Vec<Q>]) -> MassCloud {
    cloud.map_points(|p| basis.iter().map(|b| dot(b, p)).collect())
}

/// Region halfspaces of the projected cloud, zero-padded to `dim` coordinates.
pub(crate) fn region_halfspaces(cloud: &MassCloud, basis: &[Vec<Q>], t: &Q, dim: usize) -> Option<Vec<Halfspace>> {
    let projected = project_cloud(cloud, basis);
    let region = centerpoint_region_unchecked(&projected, t).ok()?;
    if region.is_empty() {
        return None;
    }
    Some(
        region
            .halfspaces
            .into_iter()
            .map(|h| {
                let mut n = h.normal;
                n.resize(dim, Q::zero());
                Halfspace::new(n, h.offset)
            })
            .collect(),
    )
}

/// Margin program over L1-normalized halfspaces.
pub(crate) fn margin_of(halfspaces: &[Halfspace], dim: usize) -> Option<Eval> {
    let mut normals = Vec::with_capacity(halfspaces.len());
    let mut offsets = Vec::with_capacity(halfspaces.len());
    for h in halfspaces {
        let l1: Q = h.normal.iter().map(|x| x.abs()).sum();
        if l1.is_zero() {
            if h.offset.is_positive() {
                return Some(Eval { margin: -Q::one(), point: vec![Q::zero(); dim] });
            }
            continue;
        }
        normals.push(h.normal.iter().map(|x| x / &l1).collect());
        offsets.push(&h.offset / &l1);
    }
    let (margin, point) = max_margin(&normals, &offsets, dim).ok()?;
    Some(Eval { margin, point })
}

/// A point `x` with `B^T x = y`, inside `span(B)`.
pub(crate) fn lift_point(basis: &[Vec<Q>], y: &[Q], n: usize) -> Vec<Q> {
    let coeffs = linalg::solve(&linalg::gram(basis), y).expect("independent basis");
    linalg::combine(basis, &coeffs, n)
}

/// Projection frame: complex subspace `W`, optionally extended by a real direction `v0`.
pub(crate) fn frame_basis(w: &[Vec<C>], v0: Option<&Vec<Q>>) -> Vec<Vec<Q>> {
    let mut b = realify_basis(w);
    if let Some(v) = v0 {
        b.push(v.clone());
    }
    b
}

/// The flat through the lift of `point` orthogonal to the frame.
pub(crate) fn flat_from_frame(w: &[Vec<C>], v0: Option<&Vec<Q>>, point: &[Q], d: usize) -> Option<ComplexFlat> {
    let x = lift_point(&frame_basis(w, v0), point, 2 * d);
    match v0 {
        None => {
            let dir: Vec<Vec<Q>> = hermitian_complement(w, d).iter().map(|v| to_real(v)).collect();
            make_complex_flat(x, &dir).ok()
        }
        Some(v0) => {
            let mut ws = w.to_vec();
            ws.push(from_real(v0));
            let inner: Vec<Vec<Q>> = hermitian_complement(&ws, d).iter().map(|v| to_real(v)).collect();
            make_complex_plus_line_flat(x, &inner, &j_map(v0)).ok()
        }
    }
}

/// `W` from a chart and `v0` from the line chart of the real complement of `W`: coordinate
/// `line` fixed to 1, the others taken from `line_params`.
pub(crate) fn odd_frame(chart: &GrassmannChart, line: usize, line_params: &[Q]) -> (Vec<Vec<C>>, Vec<Q>) {
    let perp = realify_basis(&chart.complement_basis());
    let mut v0 = perp[line].clone();
    let mut it = line_params.iter();
    for (j, r) in perp.iter().enumerate() {
        if j != line {
            let c = it.next().expect("line parameter count");
            v0 = linalg::axpy(&v0, c, r);
        }
    }
    (chart.complex_basis(), v0)
}

pub(crate) fn complex_means(measures: &[MassCloud]) -> Vec<Vec<C>> {
    measures.iter().map(|m| from_real(&m.mean())).collect()
}

fn complex_unit(d: usize, i: usize) -> Vec<C> {
    (0..d)
        .map(|j| if i == j { C::new(Q::one(), Q::zero()) } else { C::new(Q::zero(), Q::zero()) })
        .collect()
}

/// Extends a list of complex vectors by unit vectors until it has complex rank `target`.
pub(crate) fn extend_to_rank(mut vs: Vec<Vec<C>>, target: usize, d: usize) -> Vec<Vec<C>> {
    vs.retain(|v| !linalg::is_zero_vec(v));
    let mut indep: Vec<Vec<C>> = Vec::new();
    for v in vs {
        let mut t = indep.clone();
        t.push(v.clone());
        if rank(&t) == t.len() && indep.len() < target {
            indep.push(v);
        }
    }
    for i in 0..d {
        if indep.len() >= target {
            break;
        }
        let mut t = indep.clone();
        t.push(complex_unit(d, i));
        if rank(&t) == t.len() {
            indep = t;
        }
    }
    indep
}

fn check_measures(measures: &[MassCloud], d: usize) -> Result<()> {
    for m in measures {
        m.validate()?;
        if m.dim() != 2 * d {
            return Err(Error::DimensionMismatch { expected: 2 * d, found: m.dim() });
        }
    }
    Ok(())
}

fn ambient_d(measures: &[MassCloud]) -> Result<usize> {
    let first = measures.first().ok_or_else(|| Error::InvalidParameter("no measures".into()))?;
    let n = first.dim();
    if n % 2 != 0 {
        return Err(Error::InvalidParameter(format!("odd ambient dimension {n}")));
    }
    Ok(n / 2)
}

fn best_effort(
    best: Option<(Sample, Eval)>,
    used: u64,
    measures: &[MassCloud],
    build: impl Fn(&Sample, &Eval) -> Option<ComplexFlat>,
) -> BestEffort {
    let flat = best.as_ref().and_then(|(s, e)| build(s, e));
    let min_depth = flat
        .as_ref()
        .and_then(|f| measures.iter().map(|m| flat_depth(m, f).ok().map(|d| d.value)).min().flatten())
        .unwrap_or_else(Q::zero);
    BestEffort {
        flat,
        min_depth,
        margin: best.map(|(_, e)| vec![e.margin]).unwrap_or_default(),
        iterations: used,
    }
}

fn certify(measures: &[MassCloud], flat: &ComplexFlat, bound: &Q) -> Option<Vec<DepthValue>> {
    let depths: Vec<DepthValue> = measures.iter().map(|m| flat_depth(m, flat)).collect::<Result<_>>().ok()?;
    depths.iter().all(|d| &d.value >= bound).then_some(depths)
}

// ---------------------------------------------------------------------------------------------
// Complex k-transversals

struct EvenProblem<'a> {
    measures: &'a [MassCloud],
    d: usize,
    t: Q,
    families: Vec<Vec<usize>>,
}

impl EvenProblem<'_> {
    fn chart(&self, s: &Sample) -> GrassmannChart {
        GrassmannChart::with_params(self.d, self.families[s.family].clone(), &s.params)
    }

    fn eval(&self, s: &Sample) -> Option<Eval> {
        let basis = self.chart(s).real_basis();
        let dim = basis.len();
        let mut hs = Vec::new();
        for m in self.measures {
            hs.extend(region_halfspaces(m, &basis, &self.t, dim)?);
        }
        margin_of(&hs, dim)
    }

    fn flat(&self, s: &Sample, e: &Eval) -> Option<ComplexFlat> {
        flat_from_frame(&self.chart(s).complex_basis(), None, &e.point, self.d)
    }
}

/// Complex `k`-flat whose every closed containing halfspace has weight at least
/// `1/(2d-2k+1)` for each of the `k+1` measures.
pub fn search_transversal(measures: &[MassCloud], k: usize, cfg: &SearchConfig) -> Result<SearchOutcome<TransversalCert>> {
    let d = ambient_d(measures)?;
    check_measures(measures, d)?;
    if k >= d || d > 3 {
        return Err(Error::InvalidParameter(format!("need 0 <= k < d <= 3, got k={k}, d={d}")));
    }
    if measures.len() != k + 1 {
        return Err(Error::InvalidParameter(format!("expected {} measures, got {}", k + 1, measures.len())));
    }
    let t = transversal_bound(d, k);
    let families = subsets(d, d - k);
    let prob = EvenProblem { measures, d, t: t.clone(), families: families.clone() };
    let seed = even_seed(measures, d, k, &families);
    let dims = vec![2 * k * (d - k); families.len()];
    let mut driver = Driver::new(cfg, dims, |s: &Sample| prob.eval(s));
    let found = driver.run(seed, |s, e, phase| {
        let flat = prob.flat(s, e)?;
        let depths = certify(measures, &flat, &t)?;
        Some(TransversalCert {
            flat,
            depths,
            bound: t.clone(),
            trace: SearchTrace { seed: cfg.seed, iterations: 0, phase: phase.to_string(), family: s.family, params: s.params.clone() },
        })
    });
    Ok(match found {
        Some(mut c) => {
            c.trace.iterations = driver.used;
            SearchOutcome::Certified(c)
        }
        None => SearchOutcome::Exhausted(best_effort(driver.best.take(), driver.used, measures, |s, e| prob.flat(s, e))),
    })
}

/// Chart of the complex complement of the span of mean differences.
fn even_seed(measures: &[MassCloud], d: usize, k: usize, families: &[Vec<usize>]) -> Vec<Sample> {
    let means = complex_means(measures);
    let diffs: Vec<Vec<C>> = means[1..].iter().map(|m| m.iter().zip(&means[0]).map(|(a, b)| a - b).collect()).collect();
    let span = extend_to_rank(diffs, k, d);
    let w = hermitian_complement(&span, d);
    match GrassmannChart::from_subspace(&w) {
        Ok(ch) => {
            let fam = families.iter().position(|f| *f == ch.index_set).unwrap_or(0);
            vec![Sample { family: fam, params: ch.params() }]
        }
        Err(_) => vec![Sample { family: 0, params: vec![Q::zero(); 2 * k * (d - k)] }],
    }
}

/// Evaluates one fixed chart (for chart-invariance checks and tooling).
pub fn transversal_in_chart(measures: &[MassCloud], k: usize, chart: &GrassmannChart) -> Result<Option<TransversalCert>> {
    let d = ambient_d(measures)?;
    check_measures(measures, d)?;
    chart.validate()?;
    if chart.d != d || chart.index_set.len() != d - k {
        return Err(Error::InvalidParameter("chart shape does not match (d, k)".into()));
    }
    let t = transversal_bound(d, k);
    let prob = EvenProblem { measures, d, t: t.clone(), families: vec![chart.index_set.clone()] };
    let s = Sample { family: 0, params: chart.params() };
    let Some(e) = prob.eval(&s) else { return Ok(None) };
    if e.margin.is_negative() {
        return Ok(None);
    }
    let Some(flat) = prob.flat(&s, &e) else { return Ok(None) };
    Ok(certify(measures, &flat, &t).map(|depths| TransversalCert {
        flat,
        depths,
        bound: t,
        trace: SearchTrace { seed: 0, iterations: 1, phase: "fixed-chart".into(), family: 0, params: s.params },
    }))
}

// ---------------------------------------------------------------------------------------------
// Odd-codimension transversals

struct OddProblem<'a> {
    measures: &'a [MassCloud],
    d: usize,
    k: usize,
    t: Q,
    /// (chart index set, distinguished basis index of the line chart)
    families: Vec<(Vec<usize>, usize)>,
}

impl OddProblem<'_> {
    fn chart_dim(&self) -> usize {
        2 * self.k * (self.d - self.k)
    }

    /// Complex basis of `W` and the extra real direction `v0` in its complement.
    fn frame(&self, s: &Sample) -> (Vec<Vec<C>>, Vec<Q>) {
        let (idx, line) = &self.families[s.family];
        let (cp, lp) = s.params.split_at(self.chart_dim());
        let chart = GrassmannChart::with_params(self.d, idx.clone(), cp);
        odd_frame(&chart, *line, lp)
    }

    fn basis(&self, s: &Sample) -> Vec<Vec<Q>> {
        let (w, v0) = self.frame(s);
        frame_basis(&w, Some(&v0))
    }

    fn eval(&self, s: &Sample) -> Option<Eval> {
        let basis = self.basis(s);
        let dim = basis.len();
        let mut hs = Vec::new();
        for m in self.measures {
            hs.extend(region_halfspaces(m, &basis, &self.t, dim)?);
        }
        margin_of(&hs, dim)
    }

    fn flat(&self, s: &Sample, e: &Eval) -> Option<ComplexFlat> {
        let (w, v0) = self.frame(s);
        flat_from_frame(&w, Some(&v0), &e.point, self.d)
    }
}

/// Flat of real dimension `2k-1` (complex `(k-1)`-flat plus a line) with every depth at least
/// `1/(2d-2k+2)`.
pub fn search_odd_transversal(measures: &[MassCloud], k: usize, cfg: &SearchConfig) -> Result<SearchOutcome<TransversalCert>> {
    let d = ambient_d(measures)?;
    check_measures(measures, d)?;
    if k == 0 || k >= d || d > 3 {
        return Err(Error::InvalidParameter(format!("need 1 <= k < d <= 3, got k={k}, d={d}")));
    }
    if measures.len() != k + 1 {
        return Err(Error::InvalidParameter(format!("expected {} measures, got {}", k + 1, measures.len())));
    }
    let t = odd_transversal_bound(d, k);
    let mut families = Vec::new();
    for idx in subsets(d, d - k) {
        for line in 0..2 * k {
            families.push((idx.clone(), line));
        }
    }
    let prob = OddProblem { measures, d, k, t: t.clone(), families };
    let seeds = odd_seed(&prob);
    let dims = vec![2 * k * (d - k) + 2 * k - 1; prob.families.len()];
    let mut driver = Driver::new(cfg, dims, |s: &Sample| prob.eval(s));
    let found = driver.run(seeds, |s, e, phase| {
        let flat = prob.flat(s, e)?;
        let depths = certify(measures, &flat, &t)?;
        Some(TransversalCert {
            flat,
            depths,
            bound: t.clone(),
            trace: SearchTrace { seed: cfg.seed, iterations: 0, phase: phase.to_string(), family: s.family, params: s.params.clone() },
        })
    });
    Ok(match found {
        Some(mut c) => {
            c.trace.iterations = driver.used;
            SearchOutcome::Certified(c)
        }
        None => SearchOutcome::Exhausted(best_effort(driver.best.take(), driver.used, measures, |s, e| prob.flat(s, e))),
    })
}

/// `V` seeded as the complex span of the first `k-1` mean differences plus the last one.
fn odd_seed(prob: &OddProblem) -> Vec<Sample> {
    let (d, k) = (prob.d, prob.k);
    let means = complex_means(prob.measures);
    let diffs: Vec<Vec<C>> = means[1..].iter().map(|m| m.iter().zip(&means[0]).map(|(a, b)| a - b).collect()).collect();
    let span = extend_to_rank(diffs.clone(), k, d);
    let w = hermitian_complement(&span, d);
    let Ok(chart) = GrassmannChart::from_subspace(&w) else { return Vec::new() };
    let inner = extend_to_rank(diffs[..k - 1].to_vec(), k - 1, d);
    let inner_real = realify_basis(&inner);
    let last = to_real(&span[k - 1]);
    let l = linalg::project_complement(&inner_real, &last);
    let v0 = j_map(&l);
    let perp = realify_basis(&chart.complement_basis());
    let Some(coef) = linalg::solve(&linalg::transpose(&perp), &v0) else { return Vec::new() };
    let Some(line) = (0..coef.len()).max_by(|&a, &b| coef[a].abs().cmp(&coef[b].abs()).then(b.cmp(&a))) else {
        return Vec::new();
    };
    if coef[line].is_zero() {
        return Vec::new();
    }
    let Some(fam) = prob.families.iter().position(|(i, l)| *i == chart.index_set && *l == line) else {
        return Vec::new();
    };
    let mut params = chart.params();
    params.extend((0..coef.len()).filter(|&j| j != line).map(|j| &coef[j] / &coef[line]));
    vec![Sample { family: fam, params }]
}

// ---------------------------------------------------------------------------------------------
// Flags

struct FlagProblem<'a> {
    measures: &'a [MassCloud],
    d: usize,
    k: usize,
}

impl FlagProblem<'_> {
    fn frame(&self, s: &Sample) -> Vec<Vec<C>> {
        s.params.chunks(2 * self.d).map(from_real).collect()
    }

    fn eval(&self, s: &Sample) -> Option<Eval> {
        let (d, k) = (self.d, self.k);
        let basis = realify_basis(&self.frame(s));
        let dim = basis.len();
        if rank(&basis) < dim {
            return None;
        }
        let mut hs = Vec::new();
        let tk = transversal_bound(d, k);
        for m in &self.measures[..=k] {
            hs.extend(region_halfspaces(m, &basis, &tk, dim)?);
        }
        for i in k + 1..d {
            let ti = transversal_bound(d, i);
            hs.extend(region_halfspaces(&self.measures[i], &basis[..2 * (d - i)], &ti, dim)?);
        }
        margin_of(&hs, dim)
    }

    fn levels(&self, s: &Sample, e: &Eval) -> Option<Vec<ComplexFlat>> {
        let (d, k) = (self.d, self.k);
        let frame = self.frame(s);
        let basis = realify_basis(&frame);
        let x = lift_point(&basis, &e.point, 2 * d);
        (k..d)
            .map(|i| {
                let perp: Vec<Vec<Q>> = hermitian_complement(&frame[..d - i], d).iter().map(|v| to_real(v)).collect();
                make_complex_flat(x.clone(), &perp).ok()
            })
            .collect()
    }
}

/// Nested complex flats `V_k ⊆ ... ⊆ V_{d-1}`: `V_k` is a transversal for measures `0..=k`
/// and each `V_i` (i > k) has depth at least `1/(2d-2i+1)` for measure `i`.
pub fn search_flag_transversal(measures: &[MassCloud], k: usize, cfg: &SearchConfig) -> Result<SearchOutcome<FlagCert>> {
    let d = ambient_d(measures)?;
    check_measures(measures, d)?;
    if k >= d || d > 3 {
        return Err(Error::InvalidParameter(format!("need 0 <= k < d <= 3, got k={k}, d={d}")));
    }
    if measures.len() != d {
        return Err(Error::InvalidParameter(format!("expected {d} measures, got {}", measures.len())));
    }
    let prob = FlagProblem { measures, d, k };
    let means = complex_means(measures);
    let diffs: Vec<Vec<C>> = means[1..].iter().map(|m| m.iter().zip(&means[0]).map(|(a, b)| a - b).collect()).collect();
    let mut frame: Vec<Vec<C>> = Vec::new();
    for j in 1..=d - k {
        let mut cons = extend_to_rank(diffs[..d - j].to_vec(), d - j, d);
        cons.extend(frame.iter().cloned());
        let v = hermitian_complement(&cons, d).into_iter().next().unwrap_or_else(|| complex_unit(d, j - 1));
        frame.push(v);
    }
    let seed = Sample { family: 0, params: frame.iter().flat_map(|v| to_real(v)).collect() };
    let mut driver = Driver::new(cfg, vec![2 * d * (d - k)], |s: &Sample| prob.eval(s));
    let found = driver.run(vec![seed], |s, e, phase| {
        let flats = prob.levels(s, e)?;
        let mut levels = Vec::new();
        for (li, flat) in flats.into_iter().enumerate() {
            let i = k + li;
            let idx: Vec<usize> = if i == k { (0..=k).collect() } else { vec![i] };
            let ms: Vec<MassCloud> = idx.iter().map(|&j| measures[j].clone()).collect();
            let bound = transversal_bound(d, i);
            let depths = certify(&ms, &flat, &bound)?;
            levels.push(FlagLevel { flat, measures: idx, bound, depths });
        }
        Some(FlagCert {
            levels,
            trace: SearchTrace { seed: cfg.seed, iterations: 0, phase: phase.to_string(), family: 0, params: s.params.clone() },
        })
    });
    Ok(match found {
        Some(mut c) => {
            c.trace.iterations = driver.used;
            SearchOutcome::Certified(c)
        }
        None => {
            let best = driver.best.take();
            let flat = best.as_ref().and_then(|(s, e)| prob.levels(s, e)).and_then(|v| v.into_iter().next());
            let min_depth = flat
                .as_ref()
                .and_then(|f| measures[..=k].iter().map(|m| flat_depth(m, f).ok().map(|x| x.value)).min().flatten())
                .unwrap_or_else(Q::zero);
            SearchOutcome::Exhausted(BestEffort {
                flat,
                min_depth,
                margin: best.map(|(_, e)| vec![e.margin]).unwrap_or_default(),
                iterations: driver.used,
            })
        }
    })
}

// ---------------------------------------------------------------------------------------------
// Verification

pub type Verdict = std::result::Result<(), String>;

fn check_depths(measures: &[MassCloud], flat: &ComplexFlat, claimed: &[DepthValue], bound: &Q, what: &str) -> Verdict {
    if claimed.len() != measures.len() {
        return Err(format!("{what}: {} depth values for {} measures", claimed.len(), measures.len()));
    }
    for (i, (m, c)) in measures.iter().zip(claimed).enumerate() {
        let fresh = flat_depth(m, flat).map_err(|e| format!("{what}: measure {i}: {e}"))?;
        if fresh.value != c.value {
            return Err(format!("{what}: measure {i}: recorded depth {} but recomputed {}", c.value, fresh.value));
        }
        if &fresh.value < bound {
            return Err(format!("{what}: measure {i}: depth {} below bound {bound}", fresh.value));
        }
        let w = m.halfspace_weight(&c.witness_normal, &c.witness_offset);
        let contains = flat.direction_basis.iter().all(|b| dot(b, &c.witness_normal).is_zero())
            && dot(&flat.base, &c.witness_normal) >= c.witness_offset;
        if w != c.value || !contains {
            return Err(format!("{what}: measure {i}: witness halfspace does not certify the value"));
        }
    }
    Ok(())
}

/// Recomputes every depth from scratch and checks the flat's kind and the bound.
pub fn verify_transversal(cert: &TransversalCert, measures: &[MassCloud]) -> Verdict {
    cert.flat.validate().map_err(|e| format!("kind: {e}"))?;
    let k = match cert.flat.kind {
        FlatKind::Complex { k } | FlatKind::ComplexPlusLine { k } => k,
    };
    if measures.len() != k + 1 {
        return Err(format!("count: flat of parameter {k} needs {} measures, got {}", k + 1, measures.len()));
    }
    for (i, m) in measures.iter().enumerate() {
        m.validate().map_err(|e| format!("measure {i}: {e}"))?;
    }
    check_depths(measures, &cert.flat, &cert.depths, &cert.bound, "depth")
}

pub fn verify_flag(cert: &FlagCert, measures: &[MassCloud]) -> Verdict {
    if cert.levels.is_empty() {
        return Err("levels: empty flag".into());
    }
    let d = cert.levels[0].flat.ambient_dim() / 2;
    if measures.len() != d {
        return Err(format!("count: {d} measures expected, got {}", measures.len()));
    }
    for (li, lv) in cert.levels.iter().enumerate() {
        lv.flat.validate().map_err(|e| format!("level {li} kind: {e}"))?;
        if li + 1 < cert.levels.len() {
            let next = &cert.levels[li + 1].flat;
            let nested = next.contains_point(&lv.flat.base)
                && lv.flat.direction_basis.iter().all(|b| linalg::in_span(&next.direction_basis, b));
            if !nested {
                return Err(format!("level {li}: not contained in level {}", li + 1));
            }
        }
        let FlatKind::Complex { k: dim } = lv.flat.kind else {
            return Err(format!("level {li}: flag levels must be complex flats"));
        };
        if lv.bound > transversal_bound(d, dim) {
            return Err(format!("level {li}: bound {} exceeds 1/(2d-2i+1)", lv.bound));
        }
        let ms: Vec<MassCloud> = lv.measures.iter().filter_map(|&j| measures.get(j).cloned()).collect();
        if ms.len() != lv.measures.len() {
            return Err(format!("level {li}: measure index out of range"));
        }
        check_depths(&ms, &lv.flat, &lv.depths, &lv.bound, &format!("level {li}"))?;
    }
    Ok(())
}

// ---------------------------------------------------------------------------------------------
// Exploration: best achievable common depth

/// Largest `t` such that the projected clouds have a common point of depth at least `t` in
/// every cloud; 0 if none is positive.
pub fn best_common_depth(clouds: &[MassCloud]) -> Q {
    let dim = clouds[0].dim();
    // every depth value is the weight of some subset of the atoms
    let mut all = std::collections::BTreeSet::new();
    for c in clouds {
        let mut sums = std::collections::BTreeSet::from([Q::zero()]);
        for w in &c.weights {
            let next: Vec<Q> = sums.iter().map(|s| s + w).collect();
            sums.extend(next);
        }
        all.extend(sums.into_iter().filter(|s| s.is_positive()));
    }
    let levels: Vec<Q> = all.into_iter().collect();
    let feasible = |t: &Q| -> bool {
        let mut hs = Vec::new();
        for c in clouds {
            match centerpoint_region_unchecked(c, t) {
                Ok(r) if !r.is_empty() => hs.extend(r.halfspaces),
                _ => return false,
            }
        }
        margin_of(&hs, dim).is_some_and(|e| !e.margin.is_negative())
    };
    // regions shrink as t grows, so feasibility is monotone and a binary search suffices
    let (mut lo, mut hi) = (0usize, levels.len());
    while lo < hi {
        let mid = (lo + hi) / 2;
        if feasible(&levels[mid]) {
            lo = mid + 1;
        } else {
            hi = mid;
        }
    }
    if lo == 0 {
        Q::zero()
    } else {
        levels[lo - 1].clone()
    }
}

/// Best common depth over a chart grid of projections, for studying instances where no
/// transversal of the guaranteed depth is expected.
pub fn explore_transversal(measures: &[MassCloud], k: usize, step: &Q, radius: u32) -> Result<Q> {
    let d = ambient_d(measures)?;
    check_measures(measures, d)?;
    if k >= d {
        return Err(Error::InvalidParameter("need k < d".into()));
    }
    let mut samples = Vec::new();
    for idx in subsets(d, d - k) {
        for off in GridSpiral::new(2 * k * (d - k), radius as i64) {
            let params: Vec<Q> = off.iter().map(|&o| step * Q::from_integer(o.into())).collect();
            samples.push(GrassmannChart::with_params(d, idx.clone(), &params));
        }
    }
    let best = samples
        .par_iter()
        .map(|ch| {
            let basis = ch.real_basis();
            let clouds: Vec<MassCloud> = measures.iter().map(|m| project_cloud(m, &basis)).collect();
            best_common_depth(&clouds)
        })
        .max()
        .unwrap_or_else(Q::zero);
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{q, qi};

    fn atom(p: &[i64]) -> MassCloud {
        MassCloud::uniform(vec![p.iter().map(|&x| qi(x)).collect()]).unwrap()
    }

    fn small_cfg() -> SearchConfig {
        SearchConfig { budget: 2000, workers: 1, ..Default::default() }
    }

    #[test]
    fn grid_spiral_order() {
        let v: Vec<Vec<i64>> = GridSpiral::new(2, 1).collect();
        assert_eq!(v.len(), 9);
        assert_eq!(v[0], vec![0, 0]);
        assert_eq!(GridSpiral::new(0, 3).count(), 1);
    }

    #[test]
    fn centerpoint_in_the_plane() {
        let c = MassCloud::uniform(vec![vec![qi(0), qi(0)], vec![qi(4), qi(0)], vec![qi(0), qi(4)], vec![qi(3), qi(3)]]).unwrap();
        let cert = search_transversal(std::slice::from_ref(&c), 0, &small_cfg()).unwrap().certified().unwrap();
        assert!(cert.depths[0].value >= q(1, 3));
        assert!(verify_transversal(&cert, &[c]).is_ok());
    }

    #[test]
    fn atoms_give_depth_one() {
        let a = atom(&[1, 2, 3, 4]);
        let ms = vec![a.clone(), a.clone()];
        let cert = search_transversal(&ms, 1, &small_cfg()).unwrap().certified().unwrap();
        assert!(cert.depths.iter().all(|d| d.value == qi(1)));
        assert!(verify_transversal(&cert, &ms).is_ok());
        let odd = search_odd_transversal(&ms, 1, &small_cfg()).unwrap().certified().unwrap();
        assert_eq!(odd.bound, q(1, 4));
        assert!(verify_transversal(&odd, &ms).is_ok());
        let flag = search_flag_transversal(&ms, 0, &small_cfg()).unwrap().certified().unwrap();
        assert!(verify_flag(&flag, &ms).is_ok());
        assert!(flag.levels.iter().all(|l| l.depths.iter().all(|d| d.value == qi(1))));
    }

    #[test]
    fn tampered_certificates_fail() {
        let a = atom(&[1, 2, 3, 4]);
        let ms = vec![a.clone(), a];
        let cert = search_transversal(&ms, 1, &small_cfg()).unwrap().certified().unwrap();
        let mut up = cert.clone();
        up.bound = qi(2);
        assert!(verify_transversal(&up, &ms).unwrap_err().contains("below bound"));
        let mut bent = cert.clone();
        bent.flat.direction_basis[1] = linalg::unit(4, 2);
        assert!(verify_transversal(&bent, &ms).unwrap_err().starts_with("kind"));
    }

    #[test]
    fn wrong_counts_rejected() {
        let a = atom(&[0, 0, 0, 0]);
        assert!(search_transversal(std::slice::from_ref(&a), 1, &small_cfg()).is_err());
        assert!(search_odd_transversal(std::slice::from_ref(&a), 0, &small_cfg()).is_err());
        assert!(search_flag_transversal(&[a], 0, &small_cfg()).is_err());
    }
}
