//! Exact dense linear algebra over fields with exact arithmetic.

use crate::scalar::Q;
use num_traits::{Num, Zero};

pub fn dot(a: &[Q], b: &[Q]) -> Q {
    a.iter().zip(b).fold(Q::zero(), |acc, (x, y)| acc + x * y)
}

pub fn add(a: &[Q], b: &[Q]) -> Vec<Q> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn sub(a: &[Q], b: &[Q]) -> Vec<Q> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn scale(a: &[Q], s: &Q) -> Vec<Q> {
    a.iter().map(|x| x * s).collect()
}

/// `a + s*b`
pub fn axpy(a: &[Q], s: &Q, b: &[Q]) -> Vec<Q> {
    a.iter().zip(b).map(|(x, y)| x + s * y).collect()
}

pub fn is_zero_vec<T: Zero>(v: &[T]) -> bool {
    v.iter().all(|x| x.is_zero())
}

pub fn unit(n: usize, i: usize) -> Vec<Q> {
    let mut v = vec![Q::zero(); n];
    v[i] = num_traits::One::one();
    v
}

/// In-place reduced row echelon form. Returns the pivot column of each leading row.
pub fn rref<T: Num + Clone>(m: &mut Vec<Vec<T>>) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = T::one() / m[r][c].clone();
        for x in m[r].iter_mut() {
            *x = x.clone() * inv.clone();
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in c..cols {
                    let t = m[r][j].clone();
                    if !t.is_zero() {
                        m[i][j] = m[i][j].clone() - f.clone() * t;
                    }
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    m.truncate(rows);
    pivots
}

pub fn rank<T: Num + Clone>(rows: &[Vec<T>]) -> usize {
    let mut m = rows.to_vec();
    rref(&mut m).len()
}

/// Basis of `{x : rows * x = 0}`, one vector per free column (free entry set to 1).
pub fn nullspace<T: Num + Clone>(rows: &[Vec<T>], ncols: usize) -> Vec<Vec<T>> {
    let mut m = rows.to_vec();
    let pivots = rref(&mut m);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![T::zero(); ncols];
            v[f] = T::one();
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = T::zero() - m[r][f].clone();
            }
            v
        })
        .collect()
}

/// Some solution of `a x = b`, if the system is consistent.
pub fn solve<T: Num + Clone>(a: &[Vec<T>], b: &[T]) -> Option<Vec<T>> {
    let ncols = a.first().map_or(0, |r| r.len());
    let mut m: Vec<Vec<T>> = a
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let pivots = rref(&mut m);
    if pivots.last() == Some(&ncols) {
        return None;
    }
    let mut x = vec![T::zero(); ncols];
    for (r, &pc) in pivots.iter().enumerate() {
        x[pc] = m[r][ncols].clone();
    }
    Some(x)
}

/// Index of the first vector lying in the span of its predecessors.
pub fn first_dependent<T: Num + Clone>(vectors: &[Vec<T>]) -> Option<usize> {
    let mut acc: Vec<Vec<T>> = Vec::new();
    for (i, v) in vectors.iter().enumerate() {
        acc.push(v.clone());
        if rank(&acc) < acc.len() {
            return Some(i);
        }
    }
    None
}

pub fn in_span(basis: &[Vec<Q>], v: &[Q]) -> bool {
    if basis.is_empty() {
        return is_zero_vec(v);
    }
    let mut rows = basis.to_vec();
    let r = rank(&rows);
    rows.push(v.to_vec());
    rank(&rows) == r
}

pub fn transpose<T: Clone>(m: &[Vec<T>]) -> Vec<Vec<T>> {
    let cols = m.first().map_or(0, |r| r.len());
    (0..cols).map(|j| m.iter().map(|r| r[j].clone()).collect()).collect()
}

pub fn gram(basis: &[Vec<Q>]) -> Vec<Vec<Q>> {
    basis
        .iter()
        .map(|a| basis.iter().map(|b| dot(a, b)).collect())
        .collect()
}

/// Coefficients `c` with `sum c_i basis_i` the orthogonal projection of `x` onto the span.
pub fn span_coefficients(basis: &[Vec<Q>], x: &[Q]) -> Vec<Q> {
    let rhs: Vec<Q> = basis.iter().map(|b| dot(b, x)).collect();
    solve(&gram(basis), &rhs).expect("basis must be independent")
}

pub fn combine(basis: &[Vec<Q>], coeffs: &[Q], dim: usize) -> Vec<Q> {
    let mut out = vec![Q::zero(); dim];
    for (b, c) in basis.iter().zip(coeffs) {
        if c.is_zero() {
            continue;
        }
        for (o, x) in out.iter_mut().zip(b) {
            *o += c * x;
        }
    }
    out
}

/// Orthogonal projection onto the orthogonal complement of `span(basis)`.
pub fn project_complement(basis: &[Vec<Q>], x: &[Q]) -> Vec<Q> {
    if basis.is_empty() {
        return x.to_vec();
    }
    let c = span_coefficients(basis, x);
    sub(x, &combine(basis, &c, x.len()))
}

/// Basis of the orthogonal complement of `span(vectors)` in `Q^n`.
pub fn orthogonal_complement(vectors: &[Vec<Q>], n: usize) -> Vec<Vec<Q>> {
    if vectors.is_empty() {
        return (0..n).map(|i| unit(n, i)).collect();
    }
    nullspace(vectors, n)
}

pub fn det(m: &[Vec<Q>]) -> Q {
    let n = m.len();
    let mut a = m.to_vec();
    let mut d: Q = num_traits::One::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !a[i][c].is_zero()) else {
            return Q::zero();
        };
        if p != c {
            a.swap(p, c);
            d = -d;
        }
        d *= &a[c][c];
        for i in c + 1..n {
            if a[i][c].is_zero() {
                continue;
            }
            let f = &a[i][c] / &a[c][c];
            for j in c..n {
                let t = &f * &a[c][j];
                a[i][j] -= t;
            }
        }
    }
    d
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{q, qi};

    #[test]
    fn nullspace_of_plane() {
        let rows = vec![vec![qi(1), qi(1), qi(0)]];
        let ns = nullspace(&rows, 3);
        assert_eq!(ns.len(), 2);
        for v in &ns {
            assert!(dot(&rows[0], v).is_zero());
        }
    }

    #[test]
    fn projection_example() {
        let p = project_complement(&[vec![qi(1), qi(1)]], &[qi(1), qi(0)]);
        assert_eq!(p, vec![q(1, 2), q(-1, 2)]);
    }

    #[test]
    fn dependent_detection() {
        let v = vec![vec![qi(1), qi(0)], vec![qi(2), qi(0)]];
        assert_eq!(first_dependent(&v), Some(1));
        assert_eq!(det(&[vec![qi(1), qi(2)], vec![qi(3), qi(4)]]), qi(-2));
    }

    #[test]
    fn inconsistent_system() {
        let a = vec![vec![qi(1)], vec![qi(1)]];
        assert!(solve(&a, &[qi(0), qi(1)]).is_none());
        assert_eq!(solve(&a, &[qi(2), qi(2)]), Some(vec![qi(2)]));
    }
}
