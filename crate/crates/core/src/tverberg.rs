//! Tverberg-type partitions whose part hulls all meet one complex (or complex-plus-line) flat.
//!
//! A flat `V = x + U^⊥` meets `conv(S)` exactly when the projection of `x` onto `U` lies in the
//! convex hull of the projected points, so each projection frame `U` turns the question into an
//! intersection of planar (or low-dimensional) polytopes.

use crate::complex::{from_real, hermitian_complement, realify_basis, subsets, GrassmannChart, C};
use crate::depth::centerpoint_region_unchecked;
use crate::error::{Error, Result};
use crate::geometry::{j_map, ComplexFlat, FlatKind, MassCloud};
use crate::linalg::{self, dot};
use crate::lp::{lp_feasible, ExactLP, Feasibility, Relation};
use crate::polytope::{enumerate_vertices, Halfspace};
use crate::scalar::{serde_qmat, serde_qvec, Q};
use crate::transversal::{
    complex_means, extend_to_rank, flat_from_frame, frame_basis, margin_of, odd_frame, GridSpiral, SearchConfig,
    Verdict,
};
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;

/// Chart evaluations allowed by default; each one enumerates every partition tuple.
pub const DEFAULT_TV_BUDGET: u64 = 512;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TvVariant {
    Complex,
    ComplexPlusLine,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TvInstance {
    pub d: usize,
    pub k: usize,
    pub sets: Vec<PointSet>,
    pub variant: TvVariant,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointSet {
    #[serde(with = "serde_qmat")]
    pub points: Vec<Vec<Q>>,
    pub parts: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub colors: Option<Vec<usize>>,
}

impl TvInstance {
    pub fn required_size(&self, parts: usize) -> usize {
        let per = match self.variant {
            TvVariant::Complex => 2 * self.d - 2 * self.k + 1,
            TvVariant::ComplexPlusLine => 2 * self.d - 2 * self.k + 2,
        };
        (parts - 1) * per + 1
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidParameter(m));
        if self.d == 0 || self.k >= self.d {
            return bad(format!("need 0 <= k < d, got k={}, d={}", self.k, self.d));
        }
        if self.variant == TvVariant::ComplexPlusLine && self.k == 0 {
            return bad("the complex-plus-line variant needs k >= 1".into());
        }
        if self.sets.is_empty() {
            return bad("no point sets".into());
        }
        for (i, s) in self.sets.iter().enumerate() {
            if s.parts == 0 {
                return bad(format!("set {i}: zero parts"));
            }
            let need = self.required_size(s.parts);
            if s.points.len() != need {
                return bad(format!("set {i}: {} points, {} parts require {need}", s.points.len(), s.parts));
            }
            if let Some(p) = s.points.iter().find(|p| p.len() != 2 * self.d) {
                return Err(Error::DimensionMismatch { expected: 2 * self.d, found: p.len() });
            }
            if let Some(c) = &s.colors {
                if c.len() != s.points.len() {
                    return bad(format!("set {i}: {} colors for {} points", c.len(), s.points.len()));
                }
                let mut count: HashMap<usize, usize> = HashMap::new();
                for &x in c {
                    *count.entry(x).or_default() += 1;
                }
                if let Some((col, n)) = count.into_iter().filter(|&(_, n)| n + 1 > s.parts).min() {
                    return bad(format!("set {i}: color {col} has {n} points, at most {} allowed", s.parts - 1));
                }
            }
        }
        Ok(())
    }

    /// True when every part count is a power of one common prime, the range where existence is
    /// guaranteed; other instances are exploratory.
    pub fn within_theorem(&self) -> bool {
        let counts: Vec<usize> = self.sets.iter().map(|s| s.parts).filter(|&r| r > 1).collect();
        let Some(&first) = counts.first() else { return true };
        let Some(p) = (2..=first).find(|p| first % p == 0) else { return false };
        counts.iter().all(|&r| {
            let mut r = r;
            while r % p == 0 {
                r /= p;
            }
            r == 1
        })
    }

    fn frame_dims(&self) -> usize {
        match self.variant {
            TvVariant::Complex => 2 * (self.d - self.k),
            TvVariant::ComplexPlusLine => 2 * (self.d - self.k) + 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TverbergCert {
    pub flat: ComplexFlat,
    /// Real basis of the projection frame; `q` is in these coordinates.
    #[serde(with = "serde_qmat")]
    pub projection: Vec<Vec<Q>>,
    #[serde(with = "serde_qvec")]
    pub q: Vec<Q>,
    /// Per set, the parts as index lists.
    pub partitions: Vec<Vec<Vec<usize>>>,
    /// Per set and part, barycentric weights aligned with the part's indices.
    pub weights: Vec<Vec<WeightList>>,
    pub chart: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct WeightList(#[serde(with = "serde_qvec")] pub Vec<Q>);

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TvBestEffort {
    /// Largest margin of a partition tuple's hull intersection; negative means a gap.
    #[serde(default, with = "opt_q")]
    pub best_margin: Option<Q>,
    pub charts: u64,
}

mod opt_q {
    use super::Q;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(x: &Option<Q>, s: S) -> Result<S::Ok, S::Error> {
        x.as_ref().map(crate::scalar::fmt_q).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Q>, D::Error> {
        Option::<String>::deserialize(d)?
            .map(|s| crate::scalar::parse_q(&s).map_err(serde::de::Error::custom))
            .transpose()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TvOutcome {
    Certified(Box<TverbergCert>),
    Exhausted(TvBestEffort),
}

impl TvOutcome {
    pub fn certified(self) -> Option<TverbergCert> {
        match self {
            TvOutcome::Certified(c) => Some(*c),
            TvOutcome::Exhausted(_) => None,
        }
    }
}

impl SearchConfig {
    pub fn tverberg() -> Self {
        Self { budget: DEFAULT_TV_BUDGET, grid_radius: 8, ..Self::default() }
    }
}

// ---------------------------------------------------------------------------------------------
// Partitions

/// Set partitions of `0..n` into exactly `r` nonempty parts, in restricted-growth-string order,
/// skipping those where some part repeats a color.
pub struct Partitions<'a> {
    n: usize,
    r: usize,
    colors: Option<&'a [usize]>,
    rgs: Vec<usize>,
    started: bool,
    done: bool,
}

pub fn partitions(n: usize, r: usize, colors: Option<&[usize]>) -> Partitions<'_> {
    Partitions { n, r, colors, rgs: vec![0; n], started: false, done: r == 0 || r > n }
}

impl Partitions<'_> {
    fn advance(&mut self) -> bool {
        // next restricted growth string with values < r
        let n = self.n;
        let mut i = n;
        while i > 1 {
            i -= 1;
            let maxp = self.rgs[..i].iter().copied().max().unwrap_or(0);
            if self.rgs[i] <= maxp && self.rgs[i] + 1 < self.r {
                self.rgs[i] += 1;
                for x in self.rgs.iter_mut().skip(i + 1) {
                    *x = 0;
                }
                return true;
            }
        }
        false
    }

    fn acceptable(&self) -> bool {
        if self.rgs.iter().copied().max().map_or(0, |m| m + 1) != self.r {
            return false;
        }
        if let Some(c) = self.colors {
            let mut seen = std::collections::HashSet::new();
            for (i, &p) in self.rgs.iter().enumerate() {
                if !seen.insert((p, c[i])) {
                    return false;
                }
            }
        }
        true
    }
}

impl Iterator for Partitions<'_> {
    type Item = Vec<Vec<usize>>;
    fn next(&mut self) -> Option<Self::Item> {
        loop {
            if self.done {
                return None;
            }
            if self.started {
                if !self.advance() {
                    self.done = true;
                    return None;
                }
            } else {
                self.started = true;
            }
            if self.acceptable() {
                let mut parts = vec![Vec::new(); self.r];
                for (i, &p) in self.rgs.iter().enumerate() {
                    parts[p].push(i);
                }
                return Some(parts);
            }
        }
    }
}

// ---------------------------------------------------------------------------------------------
// Per-frame search

/// Projection frame: complex `W` and, for the odd variant, the extra real direction.
#[derive(Debug, Clone)]
struct Frame {
    w: Vec<Vec<C>>,
    v0: Option<Vec<Q>>,
}

impl Frame {
    fn basis(&self) -> Vec<Vec<Q>> {
        frame_basis(&self.w, self.v0.as_ref())
    }
}

fn hull_halfspaces(points: &[Vec<Q>]) -> Vec<Halfspace> {
    let cloud = MassCloud::uniform(points.to_vec()).expect("nonempty part");
    let t = Q::new(1.into(), (points.len() as i64).into());
    centerpoint_region_unchecked(&cloud, &t).expect("hull of a part").halfspaces
}

/// One set's candidate partitions with their hull-intersection halfspaces and its vertices.
struct SetCandidates {
    parts: Vec<Vec<Vec<usize>>>,
    halfspaces: Vec<Vec<Halfspace>>,
    vertices: Vec<Vec<Vec<Q>>>,
}

/// How far every vertex of one polytope lies outside some constraint of the other, if some
/// constraint excludes them all; a positive answer proves the two are disjoint.
fn separation(hs: &[Halfspace], verts: &[Vec<Q>]) -> Option<Q> {
    hs.iter()
        .filter_map(|h| {
            let l1: Q = h.normal.iter().map(|x| x.abs()).sum();
            if l1.is_zero() {
                return None;
            }
            let worst = verts.iter().map(|v| -h.slack(v)).min()?;
            worst.is_positive().then(|| worst / l1)
        })
        .max()
}

enum FrameResult {
    Found { partitions: Vec<Vec<Vec<usize>>>, q: Vec<Q> },
    Gap(Option<Q>),
}

fn search_frame(inst: &TvInstance, frame: &Frame) -> FrameResult {
    let basis = frame.basis();
    let dim = basis.len();
    let mut best: Option<Q> = None;
    let bump = |m: &Q, best: &mut Option<Q>| {
        if best.as_ref().is_none_or(|b| m > b) {
            *best = Some(m.clone());
        }
    };
    let mut closest: Option<(Q, Vec<Halfspace>)> = None;
    let note = |g: Q, hs: Vec<Halfspace>, closest: &mut Option<(Q, Vec<Halfspace>)>| {
        if closest.as_ref().is_none_or(|(c, _)| &g < c) {
            *closest = Some((g, hs));
        }
    };
    let mut cands = Vec::new();
    for set in &inst.sets {
        let proj: Vec<Vec<Q>> = set.points.iter().map(|p| basis.iter().map(|b| dot(b, p)).collect()).collect();
        let mut memo: HashMap<Vec<usize>, Vec<Halfspace>> = HashMap::new();
        let bound = proj.iter().flatten().map(|x| x.abs()).max().unwrap_or_else(Q::zero) + Q::one();
        let mut c = SetCandidates { parts: Vec::new(), halfspaces: Vec::new(), vertices: Vec::new() };
        for parts in partitions(proj.len(), set.parts, set.colors.as_deref()) {
            let hulls: Vec<Vec<Halfspace>> = parts
                .iter()
                .map(|part| {
                    memo.entry(part.clone())
                        .or_insert_with(|| hull_halfspaces(&part.iter().map(|&i| proj[i].clone()).collect::<Vec<_>>()))
                        .clone()
                })
                .collect();
            let hs: Vec<Halfspace> = hulls.iter().flatten().cloned().collect();
            // the points of a part are the vertices of its hull, so disjoint pairs show up without an LP
            let gap = (0..parts.len())
                .flat_map(|a| (0..parts.len()).filter(move |&b| b != a).map(move |b| (a, b)))
                .filter_map(|(a, b)| separation(&hulls[a], &parts[b].iter().map(|&i| proj[i].clone()).collect::<Vec<_>>()))
                .max();
            if let Some(g) = gap {
                note(g, hs, &mut closest);
                continue;
            }
            // a partition whose own parts already miss each other can never join a tuple
            let Some(e) = margin_of(&hs, dim) else { continue };
            if e.margin.is_negative() {
                bump(&e.margin, &mut best);
                continue;
            }
            let verts = enumerate_vertices(dim, &hs, &bound).into_iter().map(|(v, _)| v).collect();
            c.parts.push(parts);
            c.halfspaces.push(hs);
            c.vertices.push(verts);
        }
        if c.parts.is_empty() {
            if let Some(e) = closest.and_then(|(_, hs)| margin_of(&hs, dim)) {
                bump(&e.margin, &mut best);
            }
            return FrameResult::Gap(best);
        }
        cands.push(c);
    }
    let mut chosen = Vec::new();
    let mut acc = Vec::new();
    if let Some(q) = tuple_dfs(&cands, 0, &mut chosen, &mut acc, dim, &mut best, &mut closest) {
        let partitions = chosen.iter().enumerate().map(|(i, &j)| cands[i].parts[j].clone()).collect();
        return FrameResult::Found { partitions, q };
    }
    // pruned candidates skip the LP; report the margin of the nearest one
    if let Some(e) = closest.and_then(|(_, hs)| margin_of(&hs, dim)) {
        bump(&e.margin, &mut best);
    }
    FrameResult::Gap(best)
}

fn tuple_dfs(
    cands: &[SetCandidates],
    level: usize,
    chosen: &mut Vec<usize>,
    acc: &mut Vec<Halfspace>,
    dim: usize,
    best: &mut Option<Q>,
    closest: &mut Option<(Q, Vec<Halfspace>)>,
) -> Option<Vec<Q>> {
    if level == cands.len() {
        let e = margin_of(acc, dim)?;
        return (!e.margin.is_negative()).then_some(e.point);
    }
    for (j, hs) in cands[level].halfspaces.iter().enumerate() {
        let verts = &cands[level].vertices[j];
        let gap = chosen
            .iter()
            .enumerate()
            .filter_map(|(l, &i)| {
                let a = separation(hs, &cands[l].vertices[i]);
                let b = separation(&cands[l].halfspaces[i], verts);
                a.into_iter().chain(b).max()
            })
            .max();
        if let Some(g) = gap {
            if closest.as_ref().is_none_or(|(c, _)| &g < c) {
                let mut hs_all = acc.clone();
                hs_all.extend(hs.iter().cloned());
                *closest = Some((g, hs_all));
            }
            continue;
        }
        let len = acc.len();
        acc.extend(hs.iter().cloned());
        let ok = if level == 0 {
            true
        } else {
            match margin_of(acc, dim) {
                Some(e) if !e.margin.is_negative() => true,
                Some(e) => {
                    if best.as_ref().is_none_or(|b| &e.margin > b) {
                        *best = Some(e.margin);
                    }
                    false
                }
                None => false,
            }
        };
        if ok {
            chosen.push(j);
            if let Some(q) = tuple_dfs(cands, level + 1, chosen, acc, dim, best, closest) {
                return Some(q);
            }
            chosen.pop();
        }
        acc.truncate(len);
    }
    None
}

/// One LP in `q` and per-part convex weights: is there a point of the frame, in frame coordinates,
/// lying in every projected part hull? `projection` is the real frame basis.
pub fn feasible_given_direction(
    inst: &TvInstance,
    projection: &[Vec<Q>],
    partitions: &[Vec<Vec<usize>>],
) -> Result<Option<Vec<Q>>> {
    if partitions.len() != inst.sets.len() {
        return Err(Error::InvalidParameter(format!("{} partitions for {} sets", partitions.len(), inst.sets.len())));
    }
    let dim = projection.len();
    let mut offsets = Vec::new();
    let mut total = dim;
    for (i, (set, parts)) in inst.sets.iter().zip(partitions).enumerate() {
        if parts.len() != set.parts || parts.iter().any(|p| p.is_empty() || p.iter().any(|&j| j >= set.points.len())) {
            return Err(Error::InvalidParameter(format!("partition {i} does not match its set")));
        }
        for part in parts {
            offsets.push(total);
            total += part.len();
        }
    }
    let mut lp = ExactLP::new(total);
    for nn in &mut lp.nonneg[dim..] {
        *nn = true;
    }
    let mut slot = 0;
    for (set, parts) in inst.sets.iter().zip(partitions) {
        for part in parts {
            let off = offsets[slot];
            slot += 1;
            let mut row = vec![Q::zero(); total];
            for c in &mut row[off..off + part.len()] {
                *c = Q::one();
            }
            lp.add(row, Relation::Eq, Q::one());
            for (c, b) in projection.iter().enumerate() {
                let mut row = vec![Q::zero(); total];
                row[c] = -Q::one();
                for (t, &j) in part.iter().enumerate() {
                    row[off + t] = dot(b, &set.points[j]);
                }
                lp.add(row, Relation::Eq, Q::zero());
            }
        }
    }
    Ok(match lp_feasible(&lp)? {
        Feasibility::Feasible(x) => Some(x[..dim].to_vec()),
        Feasibility::Infeasible(_) => None,
    })
}

/// Barycentric weights of `q` in the hull of `points`.
fn barycentric(points: &[Vec<Q>], q: &[Q]) -> Option<Vec<Q>> {
    let n = points.len();
    let mut lp = ExactLP::new(n);
    lp.nonneg = vec![true; n];
    lp.add(vec![Q::one(); n], Relation::Eq, Q::one());
    for (c, qc) in q.iter().enumerate() {
        lp.add(points.iter().map(|p| p[c].clone()).collect(), Relation::Eq, qc.clone());
    }
    match lp_feasible(&lp).ok()? {
        Feasibility::Feasible(x) => Some(x),
        Feasibility::Infeasible(_) => None,
    }
}

fn build_cert(inst: &TvInstance, frame: &Frame, chart: usize, partitions: Vec<Vec<Vec<usize>>>, q: Vec<Q>) -> Option<TverbergCert> {
    let basis = frame.basis();
    let flat = flat_from_frame(&frame.w, frame.v0.as_ref(), &q, inst.d)?;
    let mut weights = Vec::new();
    for (set, parts) in inst.sets.iter().zip(&partitions) {
        let mut per = Vec::new();
        for part in parts {
            let proj: Vec<Vec<Q>> =
                part.iter().map(|&i| basis.iter().map(|b| dot(b, &set.points[i])).collect()).collect();
            per.push(WeightList(barycentric(&proj, &q)?));
        }
        weights.push(per);
    }
    let cert = TverbergCert { flat, projection: basis, q, partitions, weights, chart };
    verify_tv(&cert, inst).ok().map(|_| cert)
}

// ---------------------------------------------------------------------------------------------
// Frame enumeration

/// Frame of the flat through one point per set: `a_0 +` complex span of the differences
/// (for the odd variant the last difference only contributes a real line).
fn anchor_frame(inst: &TvInstance, anchors: &[&Vec<Q>]) -> Option<Frame> {
    let (d, k) = (inst.d, inst.k);
    let diffs: Vec<Vec<Q>> = anchors[1..].iter().map(|a| linalg::sub(a, anchors[0])).collect();
    let cdiffs: Vec<Vec<C>> = diffs.iter().map(|v| from_real(v)).collect();
    match inst.variant {
        TvVariant::Complex => {
            let span = extend_to_rank(cdiffs, k, d);
            if span.len() != k {
                return None;
            }
            let dir = realify_basis(&span);
            if diffs.iter().any(|v| !linalg::in_span(&dir, v)) {
                return None;
            }
            Some(Frame { w: hermitian_complement(&span, d), v0: None })
        }
        TvVariant::ComplexPlusLine => {
            let split = diffs.len().min(k - 1);
            let inner = extend_to_rank(cdiffs[..split].to_vec(), k - 1, d);
            if inner.len() != k - 1 {
                return None;
            }
            let inner_real = realify_basis(&inner);
            let rest: Vec<Vec<Q>> = diffs[split..].iter().map(|v| linalg::project_complement(&inner_real, v)).collect();
            let nonzero: Vec<&Vec<Q>> = rest.iter().filter(|v| !linalg::is_zero_vec(v)).collect();
            let line = match nonzero.first() {
                Some(v) => (*v).clone(),
                None => {
                    let spanned = extend_to_rank(inner.clone(), k, d);
                    linalg::project_complement(&inner_real, &crate::complex::to_real(&spanned[k - 1]))
                }
            };
            if nonzero.iter().any(|v| linalg::rank(&[line.clone(), (*v).clone()]) > 1) {
                return None;
            }
            let mut ws = inner.clone();
            ws.push(from_real(&line));
            Some(Frame { w: hermitian_complement(&ws, d), v0: Some(j_map(&line)) })
        }
    }
}

fn anchor_frames(inst: &TvInstance) -> Vec<Frame> {
    let mut out = Vec::new();
    let mut idx = vec![0usize; inst.sets.len()];
    loop {
        let anchors: Vec<&Vec<Q>> = idx.iter().zip(&inst.sets).map(|(&i, s)| &s.points[i]).collect();
        if let Some(f) = anchor_frame(inst, &anchors) {
            out.push(f);
        }
        let mut j = idx.len();
        loop {
            if j == 0 {
                return out;
            }
            j -= 1;
            idx[j] += 1;
            if idx[j] < inst.sets[j].points.len() {
                break;
            }
            idx[j] = 0;
        }
    }
}

/// Chart frames in the deterministic order: family, then grid shell around the mean seed.
fn chart_frames<'a>(inst: &'a TvInstance, cfg: &SearchConfig) -> impl Iterator<Item = Frame> + 'a {
    let (d, k) = (inst.d, inst.k);
    let step = cfg.grid_step.clone();
    let radius = cfg.grid_radius as i64;
    let mut families: Vec<(Vec<usize>, Option<usize>)> = Vec::new();
    for idx in subsets(d, d - k) {
        match inst.variant {
            TvVariant::Complex => families.push((idx, None)),
            TvVariant::ComplexPlusLine => families.extend((0..2 * k).map(|l| (idx.clone(), Some(l)))),
        }
    }
    let seed = seed_frame(inst);
    families.into_iter().flat_map(move |(idx, line)| {
        let center: Vec<Q> = seed
            .as_ref()
            .and_then(|f| {
                let ch = GrassmannChart::from_subspace_in(&f.w, &idx)?;
                let mut p = ch.params();
                if line.is_some() {
                    p.extend(vec![Q::zero(); 2 * k - 1]);
                }
                Some(p.iter().map(|x| (x / &step).round() * &step).collect())
            })
            .unwrap_or_else(|| vec![Q::zero(); 2 * k * (d - k) + line.map_or(0, |_| 2 * k - 1)]);
        let step = step.clone();
        GridSpiral::new(center.len(), radius).map(move |off| {
            let params: Vec<Q> = center.iter().zip(&off).map(|(c, &o)| c + &step * Q::from_integer(o.into())).collect();
            let (cp, lp) = params.split_at(2 * k * (d - k));
            let chart = GrassmannChart::with_params(d, idx.clone(), cp);
            match line {
                None => Frame { w: chart.complex_basis(), v0: None },
                Some(l) => {
                    let (w, v0) = odd_frame(&chart, l, lp);
                    Frame { w, v0: Some(v0) }
                }
            }
        })
    })
}

fn seed_frame(inst: &TvInstance) -> Option<Frame> {
    let clouds: Vec<MassCloud> = inst.sets.iter().map(|s| MassCloud::uniform(s.points.clone())).collect::<Result<_>>().ok()?;
    let means = complex_means(&clouds);
    let reals: Vec<Vec<Q>> = means.iter().map(|m| crate::complex::to_real(m)).collect();
    let refs: Vec<&Vec<Q>> = reals.iter().collect();
    anchor_frame(inst, &refs)
}

/// Anchored frames first, then chart samples; the budget counts frames.
pub fn search_tv(inst: &TvInstance, cfg: &SearchConfig) -> Result<TvOutcome> {
    inst.validate()?;
    if inst.frame_dims() > crate::depth::MAX_DEPTH_DIM {
        return Err(Error::UnsupportedDimension { dim: inst.frame_dims(), max: crate::depth::MAX_DEPTH_DIM });
    }
    let pool = {
        let mut b = rayon::ThreadPoolBuilder::new();
        if cfg.workers > 0 {
            b = b.num_threads(cfg.workers);
        }
        b.build().map_err(|e| Error::Internal(e.to_string()))?
    };
    let mut frames = anchor_frames(inst).into_iter().chain(chart_frames(inst, cfg));
    let mut used = 0u64;
    let mut best: Option<Q> = None;
    while used < cfg.budget {
        let take = (cfg.budget - used).min(16) as usize;
        let batch: Vec<Frame> = frames.by_ref().take(take).collect();
        if batch.is_empty() {
            break;
        }
        let base = used as usize;
        used += batch.len() as u64;
        let results: Vec<std::result::Result<TverbergCert, Option<Q>>> = pool.install(|| {
            batch
                .par_iter()
                .enumerate()
                .map(|(i, f)| match search_frame(inst, f) {
                    FrameResult::Found { partitions, q } => build_cert(inst, f, base + i, partitions, q).ok_or(None),
                    FrameResult::Gap(m) => Err(m),
                })
                .collect()
        });
        for r in results {
            match r {
                Ok(c) => return Ok(TvOutcome::Certified(Box::new(c))),
                Err(Some(m)) => {
                    if best.as_ref().is_none_or(|b| &m > b) {
                        best = Some(m);
                    }
                }
                Err(None) => {}
            }
        }
    }
    Ok(TvOutcome::Exhausted(TvBestEffort { best_margin: best, charts: used }))
}

// ---------------------------------------------------------------------------------------------
// Verification

pub fn verify_tv(cert: &TverbergCert, inst: &TvInstance) -> Verdict {
    inst.validate().map_err(|e| format!("instance: {e}"))?;
    let flat = &cert.flat;
    flat.validate().map_err(|e| format!("kind: {e}"))?;
    let expected = match inst.variant {
        TvVariant::Complex => FlatKind::Complex { k: inst.k },
        TvVariant::ComplexPlusLine => FlatKind::ComplexPlusLine { k: inst.k },
    };
    if flat.kind != expected || flat.ambient_dim() != 2 * inst.d {
        return Err(format!("kind: expected {expected:?} in dimension {}", 2 * inst.d));
    }
    let n = 2 * inst.d;
    let b = &cert.projection;
    if b.iter().any(|v| v.len() != n)
        || b.len() + flat.direction_basis.len() != n
        || linalg::rank(b) != b.len()
        || b.iter().any(|v| flat.direction_basis.iter().any(|u| !dot(u, v).is_zero()))
    {
        return Err("projection: not a basis of the flat's orthogonal complement".into());
    }
    if cert.q.len() != b.len() {
        return Err("projection: q has the wrong length".into());
    }
    if cert.partitions.len() != inst.sets.len() || cert.weights.len() != inst.sets.len() {
        return Err("partition: one partition per set required".into());
    }
    for (si, ((set, parts), ws)) in inst.sets.iter().zip(&cert.partitions).zip(&cert.weights).enumerate() {
        if parts.len() != set.parts {
            return Err(format!("partition: set {si} has {} parts, expected {}", parts.len(), set.parts));
        }
        let mut seen = vec![false; set.points.len()];
        for part in parts {
            if part.is_empty() {
                return Err(format!("partition: set {si} has an empty part"));
            }
            for &i in part {
                if i >= seen.len() || seen[i] {
                    return Err(format!("partition: set {si} index {i} repeated or out of range"));
                }
                seen[i] = true;
            }
            if let Some(c) = &set.colors {
                let mut cs: Vec<usize> = part.iter().map(|&i| c[i]).collect();
                cs.sort();
                if cs.windows(2).any(|w| w[0] == w[1]) {
                    return Err(format!("rainbow: set {si} has a part repeating a color"));
                }
            }
        }
        if seen.iter().any(|s| !s) {
            return Err(format!("partition: set {si} does not cover every point"));
        }
        if ws.len() != parts.len() {
            return Err(format!("witness: set {si} weight lists do not match parts"));
        }
        for (pi, (part, w)) in parts.iter().zip(ws).enumerate() {
            let w = &w.0;
            if w.len() != part.len() || w.iter().any(|x| x.is_negative()) || w.iter().sum::<Q>() != Q::one() {
                return Err(format!("witness: set {si} part {pi} is not a convex combination"));
            }
            let mut x = vec![Q::zero(); n];
            for (&i, wi) in part.iter().zip(w) {
                x = linalg::axpy(&x, wi, &set.points[i]);
            }
            let proj: Vec<Q> = b.iter().map(|v| dot(v, &x)).collect();
            if proj != cert.q {
                return Err(format!("witness: set {si} part {pi} does not reproduce q"));
            }
            if !flat.contains_point(&x) {
                return Err(format!("witness: set {si} part {pi} combination is not on the flat"));
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{q, qi};

    fn stirling2(n: usize, k: usize) -> usize {
        if n == 0 && k == 0 {
            return 1;
        }
        if n == 0 || k == 0 {
            return 0;
        }
        k * stirling2(n - 1, k) + stirling2(n - 1, k - 1)
    }

    #[test]
    fn partition_counts() {
        assert_eq!(partitions(4, 2, None).count(), 7);
        assert_eq!(partitions(3, 3, None).collect::<Vec<_>>(), vec![vec![vec![0], vec![1], vec![2]]]);
        for n in 1..=8 {
            for r in 1..=n {
                assert_eq!(partitions(n, r, None).count(), stirling2(n, r), "n={n} r={r}");
            }
        }
    }

    #[test]
    fn radon_point_of_a_quadrilateral() {
        // projection to the last complex coordinate; the diagonals cross at (1, 1)
        let pts = vec![pt(&[0, 0, 0, 0]), pt(&[5, 1, 2, 2]), pt(&[0, 0, 2, 0]), pt(&[0, 3, 0, 2])];
        let inst = TvInstance {
            d: 2,
            k: 1,
            variant: TvVariant::Complex,
            sets: vec![PointSet { points: pts, parts: 2, colors: None }],
        };
        let frame = vec![pt(&[0, 0, 1, 0]), pt(&[0, 0, 0, 1])];
        let diagonals = vec![vec![vec![0, 1], vec![2, 3]]];
        assert_eq!(feasible_given_direction(&inst, &frame, &diagonals).unwrap(), Some(vec![qi(1), qi(1)]));
        let sides = vec![vec![vec![0, 2], vec![1, 3]]];
        assert_eq!(feasible_given_direction(&inst, &frame, &sides).unwrap(), None);
    }

    #[test]
    fn prime_power_part_counts() {
        let mk = |parts: &[usize]| TvInstance {
            d: 2,
            k: 1,
            variant: TvVariant::Complex,
            sets: parts.iter().map(|&parts| PointSet { points: vec![], parts, colors: None }).collect(),
        };
        assert!(mk(&[2, 4, 1]).within_theorem());
        assert!(mk(&[3, 9]).within_theorem());
        assert!(!mk(&[2, 3]).within_theorem());
        assert!(!mk(&[6]).within_theorem());
    }

    #[test]
    fn rainbow_filter() {
        let ps: Vec<_> = partitions(3, 2, Some(&[0, 0, 1])).collect();
        assert_eq!(ps.len(), 2);
        assert!(ps.iter().all(|p| !p.contains(&vec![0, 1])));
    }

    fn pt(v: &[i64]) -> Vec<Q> {
        v.iter().map(|&x| qi(x)).collect()
    }

    #[test]
    fn single_points_give_the_line_through_them() {
        let inst = TvInstance {
            d: 2,
            k: 1,
            variant: TvVariant::Complex,
            sets: vec![
                PointSet { points: vec![pt(&[1, 0, 2, 0])], parts: 1, colors: None },
                PointSet { points: vec![pt(&[0, 3, 0, 1])], parts: 1, colors: None },
            ],
        };
        let cert = search_tv(&inst, &SearchConfig::tverberg()).unwrap().certified().unwrap();
        assert!(verify_tv(&cert, &inst).is_ok());
        assert!(cert.flat.contains_point(&inst.sets[0].points[0]));
        assert!(cert.flat.contains_point(&inst.sets[1].points[0]));
    }

    #[test]
    fn tampering_is_detected() {
        let inst = TvInstance {
            d: 1,
            k: 0,
            variant: TvVariant::Complex,
            sets: vec![PointSet { points: vec![pt(&[0, 0]), pt(&[4, 0]), pt(&[0, 4]), pt(&[1, 1])], parts: 2, colors: None }],
        };
        let cert = search_tv(&inst, &SearchConfig::tverberg()).unwrap().certified().unwrap();
        assert!(verify_tv(&cert, &inst).is_ok());
        let mut moved = cert.clone();
        let i = moved.partitions[0][0].pop().unwrap();
        moved.partitions[0][1].push(i);
        assert!(verify_tv(&moved, &inst).is_err());
        let mut bent = cert.clone();
        let w = &mut bent.weights[0][1].0;
        if w.len() > 1 {
            w[0] += q(1, 7);
            w[1] -= q(1, 7);
        } else {
            bent.q[0] += q(1, 7);
        }
        assert!(verify_tv(&bent, &inst).is_err());
    }

    #[test]
    fn size_violations_rejected() {
        let inst = TvInstance {
            d: 2,
            k: 1,
            variant: TvVariant::Complex,
            sets: vec![PointSet { points: vec![pt(&[0, 0, 0, 0]); 3], parts: 2, colors: None }],
        };
        let err = inst.validate().unwrap_err().to_string();
        assert!(err.contains("require 4"), "{err}");
    }

    #[test]
    fn separated_parts_are_infeasible() {
        let inst = TvInstance {
            d: 1,
            k: 0,
            variant: TvVariant::Complex,
            sets: vec![PointSet { points: vec![pt(&[0, 0]), pt(&[1, 0]), pt(&[5, 0]), pt(&[6, 0])], parts: 2, colors: None }],
        };
        let frame = Frame { w: vec![from_real(&pt(&[1, 0]))], v0: None };
        let found = search_frame(&inst, &frame);
        assert!(matches!(found, FrameResult::Found { .. }));
        let proj = vec![vec![qi(0)], vec![qi(1)]];
        assert!(barycentric(&proj, &[qi(3)]).is_none());
    }
}
