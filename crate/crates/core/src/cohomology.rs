//! Cohomology of complex Grassmannians `G_k(C^d)` in the Schur basis, Chern-class presentations,
//! the splitting map, and the Euler-class non-vanishing checks.

use crate::error::{Error, Result};
use crate::linalg;
use crate::poly::{Monomial, Poly, PolyRing, Ring};
use crate::scalar::Q;
use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// Weakly decreasing positive parts.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Partition(Vec<usize>);

impl TryFrom<Vec<usize>> for Partition {
    type Error = Error;
    fn try_from(v: Vec<usize>) -> Result<Self> {
        Partition::new(v)
    }
}

impl From<Partition> for Vec<usize> {
    fn from(p: Partition) -> Vec<usize> {
        p.0
    }
}

impl Partition {
    pub fn new(mut parts: Vec<usize>) -> Result<Self> {
        while parts.last() == Some(&0) {
            parts.pop();
        }
        if parts.windows(2).any(|w| w[0] < w[1]) || parts.contains(&0) {
            return Err(Error::InvalidParameter(format!("{parts:?} is not a partition")));
        }
        Ok(Self(parts))
    }

    pub fn empty() -> Self {
        Self(Vec::new())
    }

    /// `(1^n)`, a single column.
    pub fn column(n: usize) -> Self {
        Self(vec![1; n])
    }

    /// `(n)`, a single row.
    pub fn row(n: usize) -> Self {
        if n == 0 {
            Self::empty()
        } else {
            Self(vec![n])
        }
    }

    pub fn parts(&self) -> &[usize] {
        &self.0
    }

    pub fn size(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn fits(&self, rows: usize, cols: usize) -> bool {
        self.0.len() <= rows && self.0.first().is_none_or(|&c| c <= cols)
    }

    pub fn conjugate(&self) -> Self {
        let w = self.0.first().copied().unwrap_or(0);
        Self((1..=w).map(|j| self.0.iter().filter(|&&p| p >= j).count()).collect())
    }
}

/// Parameters of `H^*(G_k(C^d))` with the chosen coefficients.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SchurRing {
    pub k: usize,
    pub d: usize,
    pub coefficients: Ring,
}

impl SchurRing {
    pub fn new(k: usize, d: usize, coefficients: Ring) -> Result<Self> {
        if k > d {
            return Err(Error::InvalidParameter(format!("need k <= d, got k={k}, d={d}")));
        }
        coefficients.validate()?;
        Ok(Self { k, d, coefficients })
    }

    pub fn width(&self) -> usize {
        self.d - self.k
    }

    pub fn rectangle(&self) -> Vec<Partition> {
        rectangle_partitions(self.k, self.width())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SchurClass {
    pub ring: SchurRing,
    #[serde(with = "coeff_map")]
    pub coeffs: BTreeMap<Partition, BigInt>,
}

mod coeff_map {
    use super::Partition;
    use num_bigint::BigInt;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};
    use std::collections::BTreeMap;

    pub fn serialize<S: Serializer>(m: &BTreeMap<Partition, BigInt>, s: S) -> Result<S::Ok, S::Error> {
        let v: Vec<(Vec<usize>, String)> = m.iter().map(|(p, c)| (p.parts().to_vec(), c.to_string())).collect();
        v.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BTreeMap<Partition, BigInt>, D::Error> {
        use serde::de::Error;
        let v: Vec<(Vec<usize>, String)> = Vec::deserialize(d)?;
        v.into_iter()
            .map(|(p, c)| Ok((Partition::new(p).map_err(D::Error::custom)?, c.parse().map_err(D::Error::custom)?)))
            .collect()
    }
}

/// Partitions obtained from `lambda` by adding a vertical strip of `r` boxes inside the
/// `rows x cols` rectangle.
pub fn pieri_vertical(lambda: &Partition, r: usize, rows: usize, cols: usize) -> Vec<Partition> {
    let mut padded = lambda.0.clone();
    if padded.len() > rows {
        return Vec::new();
    }
    padded.resize(rows, 0);
    let mut out = Vec::new();
    for chosen in crate::complex::subsets(rows, r) {
        let mut mu = padded.clone();
        for &i in &chosen {
            mu[i] += 1;
        }
        if mu.windows(2).all(|w| w[0] >= w[1]) && mu.first().is_none_or(|&c| c <= cols) {
            out.push(Partition::new(mu).expect("weakly decreasing"));
        }
    }
    out
}

impl SchurClass {
    pub fn zero(ring: SchurRing) -> Self {
        Self { ring, coeffs: BTreeMap::new() }
    }

    pub fn basis(ring: SchurRing, lambda: Partition) -> Self {
        let mut s = Self::zero(ring);
        if lambda.fits(ring.k, ring.width()) {
            s.add_term(lambda, BigInt::one());
        }
        s
    }

    pub fn one(ring: SchurRing) -> Self {
        Self::basis(ring, Partition::empty())
    }

    /// The `r`-th Chern class of the tautological bundle, `s_(1^r)`.
    pub fn chern(ring: SchurRing, r: usize) -> Self {
        Self::basis(ring, Partition::column(r))
    }

    fn add_term(&mut self, p: Partition, c: BigInt) {
        let old = self.coeffs.remove(&p).unwrap_or_else(BigInt::zero);
        let new = self.ring.coefficients.reduce(old + c);
        if !new.is_zero() {
            self.coeffs.insert(p, new);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn add(&self, other: &SchurClass) -> Result<SchurClass> {
        self.check(other)?;
        let mut out = self.clone();
        for (p, c) in &other.coeffs {
            out.add_term(p.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn scale(&self, s: &BigInt) -> SchurClass {
        let mut out = SchurClass::zero(self.ring);
        for (p, c) in &self.coeffs {
            out.add_term(p.clone(), c * s);
        }
        out
    }

    fn check(&self, other: &SchurClass) -> Result<()> {
        if self.ring != other.ring {
            return Err(Error::RingMismatch(format!("{:?} vs {:?}", self.ring, other.ring)));
        }
        Ok(())
    }

    /// Product with the elementary class `e_r = s_(1^r)`.
    pub fn mul_elementary(&self, r: usize) -> SchurClass {
        let mut out = SchurClass::zero(self.ring);
        if r > self.ring.k {
            return out;
        }
        for (p, c) in &self.coeffs {
            for mu in pieri_vertical(p, r, self.ring.k, self.ring.width()) {
                out.add_term(mu, c.clone());
            }
        }
        out
    }

    /// Littlewood-Richardson product: `other` is decomposed into elementary monomials and
    /// applied by repeated Pieri steps.
    pub fn mul(&self, other: &SchurClass) -> Result<SchurClass> {
        self.check(other)?;
        let mut out = SchurClass::zero(self.ring);
        for (nu, cb) in &other.coeffs {
            for (es, c) in elementary_expansion(nu, self.ring.k) {
                let mut t = self.clone();
                for &r in &es {
                    t = t.mul_elementary(r);
                }
                out = out.add(&t.scale(&(c * cb)))?;
            }
        }
        Ok(out)
    }

    pub fn pow(&self, mut m: u32) -> SchurClass {
        let mut base = self.clone();
        let mut out = SchurClass::one(self.ring);
        while m > 0 {
            if m & 1 == 1 {
                out = out.mul(&base).expect("same ring");
            }
            m >>= 1;
            if m > 0 {
                base = base.mul(&base).expect("same ring");
            }
        }
        out
    }
}

/// `s_nu` as a signed sum of products `e_{r1} e_{r2} ...` (dual Jacobi-Trudi), dropping `e_r`
/// with `r > k`.
pub fn elementary_expansion(nu: &Partition, k: usize) -> BTreeMap<Vec<usize>, BigInt> {
    let conj = nu.conjugate().0;
    let l = conj.len();
    let mut out = BTreeMap::new();
    let mut perm: Vec<usize> = (0..l).collect();
    let mut used = vec![false; l];
    fn rec(
        i: usize,
        conj: &[usize],
        k: usize,
        perm: &mut Vec<usize>,
        used: &mut Vec<bool>,
        acc: &mut Vec<usize>,
        sign: i64,
        out: &mut BTreeMap<Vec<usize>, BigInt>,
    ) {
        let l = conj.len();
        if i == l {
            let mut key: Vec<usize> = acc.iter().copied().filter(|&r| r > 0).collect();
            key.sort_unstable();
            let e = out.entry(key).or_insert_with(BigInt::zero);
            *e += sign;
            return;
        }
        for j in 0..l {
            if used[j] {
                continue;
            }
            let idx = conj[i] as i64 - i as i64 + j as i64;
            if idx < 0 || idx as usize > k {
                continue;
            }
            // sign of the partial permutation: count inversions with earlier choices
            let inv = perm[..i].iter().filter(|&&p| p > j).count();
            let s = if inv % 2 == 0 { sign } else { -sign };
            used[j] = true;
            perm[i] = j;
            acc.push(idx as usize);
            rec(i + 1, conj, k, perm, used, acc, s, out);
            acc.pop();
            used[j] = false;
        }
    }
    rec(0, &conj, k, &mut perm, &mut used, &mut Vec::new(), 1, &mut out);
    out.retain(|_, c| !c.is_zero());
    out
}

pub fn rectangle_partitions(rows: usize, cols: usize) -> Vec<Partition> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(rows: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Partition>) {
        out.push(Partition(cur.clone()));
        if cur.len() == rows {
            return;
        }
        for p in 1..=max {
            cur.push(p);
            rec(rows, p, cur, out);
            cur.pop();
        }
    }
    rec(rows, cols, &mut cur, &mut out);
    out.sort();
    out
}

/// Rectangle partitions counted by size: the Betti numbers of `G_k(C^d)` in even degrees.
pub fn poincare_counts(k: usize, d: usize) -> Vec<u64> {
    let mut counts = vec![0u64; k * (d - k) + 1];
    for p in rectangle_partitions(k, d - k) {
        counts[p.size()] += 1;
    }
    counts
}

/// Coefficients of the Gaussian binomial `[d choose k]_q`.
pub fn gaussian_binomial(k: usize, d: usize) -> Vec<u64> {
    // [n, j] = [n-1, j-1] + q^j [n-1, j]
    let mut table: Vec<Vec<Vec<u64>>> = vec![vec![vec![1]]];
    for n in 1..=d {
        let mut row = Vec::with_capacity(n + 1);
        for j in 0..=n {
            let mut c = vec![0u64; j * (n - j) + 1];
            if j >= 1 {
                for (i, v) in table[n - 1][j - 1].iter().enumerate() {
                    c[i] += v;
                }
            }
            if j < n {
                for (i, v) in table[n - 1][j].iter().enumerate() {
                    c[i + j] += v;
                }
            }
            row.push(c);
        }
        table.push(row);
    }
    table[d][k].clone()
}

// ---------------------------------------------------------------------------------------------
// Chern-class presentation

/// `Z[c_1..c_k]` with `deg c_j = 2j`.
pub fn chern_ring(k: usize) -> PolyRing {
    PolyRing::new((1..=k).map(|j| format!("c{j}")).collect(), (1..=k).map(|j| 2 * j as u32).collect(), Ring::Integers)
}

/// Homogeneous parts of degrees `d-k+1 .. d` of `(1 + c_1 + ... + c_k)^{-1}`.
pub fn presentation_ideal(k: usize, d: usize) -> Result<Vec<Poly>> {
    if k == 0 || k > d {
        return Err(Error::InvalidParameter(format!("need 1 <= k <= d, got k={k}, d={d}")));
    }
    let ring = chern_ring(k);
    let mut h = vec![Poly::one(&ring)];
    for n in 1..=d {
        let mut t = Poly::zero(&ring);
        for j in 1..=k.min(n) {
            t = t.sub(&Poly::var(&ring, j - 1).mul(&h[n - j])?)?;
        }
        h.push(t);
    }
    Ok(h[d - k + 1..=d].to_vec())
}

/// Substitutes `c_j = s_(1^j)`.
pub fn chern_to_schur(p: &Poly, ring: SchurRing) -> Result<SchurClass> {
    if p.ring.nvars() != ring.k {
        return Err(Error::RingMismatch("Chern polynomial has the wrong number of generators".into()));
    }
    let mut out = SchurClass::zero(ring);
    for (m, c) in &p.terms {
        let mut t = SchurClass::one(ring);
        for (j, &e) in m.iter().enumerate() {
            for _ in 0..e {
                t = t.mul_elementary(j + 1);
            }
        }
        out = out.add(&t.scale(c))?;
    }
    Ok(out)
}

/// `s_lambda` as a polynomial in `c_1..c_k` (dual Jacobi-Trudi), without truncation.
pub fn schur_to_chern(lambda: &Partition, k: usize) -> Poly {
    let ring = chern_ring(k);
    let mut out = Poly::zero(&ring);
    for (es, c) in elementary_expansion(lambda, k) {
        let mut m = vec![0u32; k];
        for r in es {
            m[r - 1] += 1;
        }
        out = out.add(&Poly::monomial(&ring, m, c)).expect("same ring");
    }
    out
}

/// Monomials in variables of the given weights with weighted degree `deg`.
fn monomials_of_degree(weights: &[u32], deg: u32) -> Vec<Monomial> {
    let mut out = Vec::new();
    fn rec(weights: &[u32], i: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if i == weights.len() {
            if left == 0 {
                out.push(cur.clone());
            }
            return;
        }
        let mut e = 0;
        while e * weights[i] <= left {
            cur.push(e);
            rec(weights, i + 1, left - e * weights[i], cur, out);
            cur.pop();
            e += 1;
        }
    }
    rec(weights, 0, deg, &mut Vec::new(), &mut out);
    out.sort();
    out.reverse();
    out
}

/// Canonical representative of `p` modulo the presentation ideal, degree by degree: the ideal's
/// homogeneous component is put in reduced row echelon form and `p` is reduced against it.
pub fn normal_form(p: &Poly, k: usize, d: usize) -> Result<BTreeMap<Monomial, Q>> {
    let gens = presentation_ideal(k, d)?;
    let ring = chern_ring(k);
    if p.ring != ring {
        return Err(Error::RingMismatch("normal form expects a Chern polynomial".into()));
    }
    let mut by_degree: BTreeMap<u32, Vec<(Monomial, BigInt)>> = BTreeMap::new();
    for (m, c) in &p.terms {
        by_degree.entry(p.monomial_degree(m)).or_default().push((m.clone(), c.clone()));
    }
    let mut out = BTreeMap::new();
    for (deg, terms) in by_degree {
        let cols = monomials_of_degree(&ring.degrees, deg);
        let col_of: BTreeMap<&Monomial, usize> = cols.iter().enumerate().map(|(i, m)| (m, i)).collect();
        let mut rows: Vec<Vec<Q>> = Vec::new();
        for g in &gens {
            let Some(gd) = g.homogeneous_degree() else { continue };
            if gd > deg {
                continue;
            }
            for m in monomials_of_degree(&ring.degrees, deg - gd) {
                let t = g.mul(&Poly::monomial(&ring, m, 1))?;
                let mut row = vec![Q::zero(); cols.len()];
                for (tm, tc) in &t.terms {
                    row[col_of[tm]] = Q::from_integer(tc.clone());
                }
                rows.push(row);
            }
        }
        let pivots = if rows.is_empty() { Vec::new() } else { linalg::rref(&mut rows) };
        let mut v = vec![Q::zero(); cols.len()];
        for (m, c) in terms {
            v[col_of[&m]] = Q::from_integer(c);
        }
        for (r, &pc) in pivots.iter().enumerate() {
            if !v[pc].is_zero() {
                let f = v[pc].clone();
                v = linalg::axpy(&v, &(-f), &rows[r]);
            }
        }
        for (m, c) in cols.into_iter().zip(v) {
            if !c.is_zero() {
                out.insert(m, c);
            }
        }
    }
    Ok(out)
}

/// Checks that Schur multiplication matches multiplication in `Z[c]/I_k` for every pair of
/// Chern monomials of total degree at most `2k(d-k)`, and that partitions outside the
/// rectangle lie in the ideal. Returns the first disagreement.
pub fn schur_matches_quotient(k: usize, d: usize) -> Result<std::result::Result<(), String>> {
    let ring = chern_ring(k);
    let sring = SchurRing::new(k, d, Ring::Integers)?;
    let top = (k * (d - k)) as u32;
    let mut monos = Vec::new();
    for deg in 0..=top {
        monos.extend(monomials_of_degree(&(1..=k as u32).collect::<Vec<_>>(), deg));
    }
    let to_schur_poly = |s: &SchurClass| -> Poly {
        let mut p = Poly::zero(&ring);
        for (lam, c) in &s.coeffs {
            p = p.add(&schur_to_chern(lam, k).scale(c)).expect("same ring");
        }
        p
    };
    for a in &monos {
        for b in &monos {
            let wdeg: u32 = a.iter().chain(b.iter()).zip((1..=k as u32).cycle()).map(|(e, w)| e * w).sum();
            if wdeg > top {
                continue;
            }
            let pa = Poly::monomial(&ring, a.clone(), 1);
            let pb = Poly::monomial(&ring, b.clone(), 1);
            let quotient = normal_form(&pa.mul(&pb)?, k, d)?;
            let schur = chern_to_schur(&pa, sring)?.mul(&chern_to_schur(&pb, sring)?)?;
            let via_schur = normal_form(&to_schur_poly(&schur), k, d)?;
            if quotient != via_schur {
                return Ok(Err(format!("product {} * {} differs", pa, pb)));
            }
        }
    }
    for lam in rectangle_partitions(k + 1, d - k + 1) {
        if !lam.fits(k, d - k) && lam.size() <= d + 1 && !normal_form(&schur_to_chern(&lam, k), k, d)?.is_empty() {
            return Ok(Err(format!("s_{:?} outside the rectangle is not in the ideal", lam.parts())));
        }
    }
    Ok(Ok(()))
}

/// `c_j -> e_j(u_1, ..., u_k)`.
pub fn splitting_pullback(p: &Poly) -> Result<Poly> {
    let k = p.ring.nvars();
    let target = PolyRing::indexed("u", k, 2, p.ring.coefficients);
    let images: Vec<Poly> = (1..=k)
        .map(|j| {
            let mut e = Poly::zero(&target);
            for s in crate::complex::subsets(k, j) {
                let mut m = vec![0u32; k];
                for i in s {
                    m[i] = 1;
                }
                e = e.add(&Poly::monomial(&target, m, 1)).expect("same ring");
            }
            e
        })
        .collect();
    p.substitute(&target, &images)
}

// ---------------------------------------------------------------------------------------------
// Euler-class powers

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EulerPowerReport {
    pub nonzero: bool,
    pub class: SchurClass,
}

/// `c_n^m` in `H^*(G_n(C^d); F_p)`.
pub fn euler_power_nonvanishing(n: usize, d: usize, m: u32, p: u64) -> Result<EulerPowerReport> {
    if n == 0 || n > d {
        return Err(Error::InvalidParameter(format!("need 1 <= n <= d, got n={n}, d={d}")));
    }
    let ring = SchurRing::new(n, d, Ring::Prime { p })?;
    let class = SchurClass::chern(ring, n).pow(m);
    Ok(EulerPowerReport { nonzero: !class.is_zero(), class })
}

/// `(w_{2n} x)^m` in the mod-2 cohomology of the real projectivization of the complement bundle
/// over `G_n(C^d)`: a free module on `1, x, ..., x^{2(d-n)-1}` with
/// `x^{2(d-n)} = sum_{i=1}^{d-n} x^{2(d-n)-2i} w_{2i}`, where `w_{2i}` of the complement is `s_(i)`.
pub fn projectivization_power(n: usize, d: usize, m: u32) -> Result<Vec<SchurClass>> {
    if n == 0 || n >= d {
        return Err(Error::InvalidParameter(format!("need 1 <= n < d, got n={n}, d={d}")));
    }
    let ring = SchurRing::new(n, d, Ring::Prime { p: 2 })?;
    let l = 2 * (d - n);
    let mut v = vec![SchurClass::zero(ring); l];
    v[0] = SchurClass::one(ring);
    let w_top = SchurClass::chern(ring, n);
    let w: Vec<SchurClass> = (0..=d - n).map(|i| SchurClass::basis(ring, Partition::row(i))).collect();
    for _ in 0..m {
        let mut shifted = vec![SchurClass::zero(ring); l];
        for i in 0..l - 1 {
            shifted[i + 1] = v[i].mul(&w_top)?;
        }
        let overflow = v[l - 1].mul(&w_top)?;
        for (i, wi) in w.iter().enumerate().skip(1) {
            shifted[l - 2 * i] = shifted[l - 2 * i].add(&overflow.mul(wi)?)?;
        }
        v = shifted;
    }
    Ok(v)
}

pub fn projectivization_nonvanishing(n: usize, d: usize, m: u32) -> Result<bool> {
    Ok(projectivization_power(n, d, m)?.iter().any(|c| !c.is_zero()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn zring(k: usize, d: usize) -> SchurRing {
        SchurRing::new(k, d, Ring::Integers).unwrap()
    }

    fn part(v: &[usize]) -> Partition {
        Partition::new(v.to_vec()).unwrap()
    }

    #[test]
    fn pieri_examples() {
        let r = zring(1, 3);
        let s1 = SchurClass::basis(r, part(&[1]));
        assert_eq!(s1.mul(&s1).unwrap(), SchurClass::basis(r, part(&[2])));
        assert!(SchurClass::basis(r, part(&[2])).mul(&s1).unwrap().is_zero());
        let r = zring(2, 4);
        let s11 = SchurClass::basis(r, part(&[1, 1]));
        assert_eq!(s11.mul(&s11).unwrap(), SchurClass::basis(r, part(&[2, 2])));
        assert_eq!(s11.mul(&SchurClass::one(r)).unwrap(), s11);
    }

    #[test]
    fn littlewood_richardson_small() {
        // s_(1) * s_(1) = s_(2) + s_(1,1) in a large rectangle
        let r = zring(3, 6);
        let s1 = SchurClass::basis(r, part(&[1]));
        let sq = s1.mul(&s1).unwrap();
        assert_eq!(sq, SchurClass::basis(r, part(&[2])).add(&SchurClass::basis(r, part(&[1, 1]))).unwrap());
        // s_(2,1)^2 has s_(3,2,1) with coefficient 2
        let s21 = SchurClass::basis(r, part(&[2, 1]));
        assert_eq!(s21.mul(&s21).unwrap().coeffs[&part(&[3, 2, 1])], BigInt::from(2));
    }

    #[test]
    fn ideal_examples() {
        let g = presentation_ideal(2, 3).unwrap();
        assert_eq!(g[0].to_string(), "c1^2 - c2");
        assert_eq!(g[1].to_string(), "-c1^3 + 2*c1*c2");
        let g = presentation_ideal(1, 4).unwrap();
        assert_eq!(g.len(), 1);
        assert_eq!(g[0].to_string(), "c1^4");
        assert_eq!(presentation_ideal(3, 3).unwrap().len(), 3);
    }

    #[test]
    fn splitting_examples() {
        let r = chern_ring(3);
        let top = splitting_pullback(&Poly::var(&r, 2)).unwrap();
        assert_eq!(top.to_string(), "u1*u2*u3");
        let first = splitting_pullback(&Poly::var(&r, 0)).unwrap();
        assert_eq!(first.terms.len(), 3);
        assert_eq!(splitting_pullback(&Poly::one(&r)).unwrap().to_string(), "1");
    }

    #[test]
    fn euler_powers() {
        assert!(euler_power_nonvanishing(2, 4, 0, 3).unwrap().nonzero);
        assert!(euler_power_nonvanishing(1, 4, 3, 2).unwrap().nonzero);
        assert!(!euler_power_nonvanishing(1, 4, 4, 2).unwrap().nonzero);
    }

    #[test]
    fn projectivization_small() {
        assert!(projectivization_nonvanishing(1, 2, 0).unwrap());
        assert!(projectivization_nonvanishing(1, 2, 1).unwrap());
        assert!(!projectivization_nonvanishing(1, 2, 2).unwrap());
    }

    #[test]
    fn poincare_matches_gaussian_binomial() {
        assert_eq!(gaussian_binomial(2, 4), vec![1, 1, 2, 1, 1]);
        assert_eq!(poincare_counts(2, 4), gaussian_binomial(2, 4));
    }

    #[test]
    fn models_agree_small() {
        assert_eq!(schur_matches_quotient(2, 4).unwrap(), Ok(()));
    }

    #[test]
    fn partition_validation() {
        assert!(Partition::new(vec![1, 2]).is_err());
        assert_eq!(part(&[3, 1]).conjugate(), part(&[2, 1, 1]));
    }
}
