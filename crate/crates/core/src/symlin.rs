//! Exact symmetric linear algebra over Q and Q(i).
//!
//! Complex quadrics `q(z) = z^T Q z` with `Q = A - iB` are realified into the
//! pair of real quadrics `Re q(x+iy)` and `Im q(x+iy)` on `R^{2n+2}`, with Gram
//! matrices `[[A, B], [B, -A]]` and `[[-B, A], [A, B]]`.

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactnum::{GaussianRational, Rational, Scalar};

/// Largest supported projective dimension `n` (matrices are `(n+1) x (n+1)`).
pub const MAX_N: usize = 12;

#[derive(Clone, Debug, PartialEq)]
pub struct SymMatrix<T> {
    size: usize,
    entries: Vec<T>,
}

pub type ComplexSymMatrix = SymMatrix<GaussianRational>;
pub type RealSymMatrix = SymMatrix<Rational>;

impl<T: Scalar> SymMatrix<T> {
    pub fn zeros(size: usize) -> Self {
        SymMatrix {
            size,
            entries: vec![T::zero(); size * size],
        }
    }

    pub fn identity(size: usize) -> Self {
        Self::diagonal((0..size).map(|_| T::one()).collect())
    }

    pub fn diagonal(diag: Vec<T>) -> Self {
        let mut m = Self::zeros(diag.len());
        for (k, d) in diag.into_iter().enumerate() {
            m.entries[k * m.size + k] = d;
        }
        m
    }

    /// Builds from row-major rows, rejecting ragged or asymmetric input.
    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let size = rows.len();
        for row in &rows {
            if row.len() != size {
                return Err(Error::DimensionMismatch {
                    expected: size,
                    found: row.len(),
                });
            }
        }
        let entries: Vec<T> = rows.into_iter().flatten().collect();
        let m = SymMatrix { size, entries };
        for i in 0..size {
            for j in 0..i {
                if m.get(i, j) != m.get(j, i) {
                    return Err(Error::NotSymmetric);
                }
            }
        }
        Ok(m)
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.entries[i * self.size + j]
    }

    /// Sets both `(i, j)` and `(j, i)`.
    pub fn set(&mut self, i: usize, j: usize, value: T) {
        let size = self.size;
        self.entries[j * size + i] = value.clone();
        self.entries[i * size + j] = value;
    }

    pub fn rows(&self) -> Vec<Vec<T>> {
        self.entries.chunks(self.size).map(|r| r.to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|x| x.is_zero())
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.size, other.size);
        SymMatrix {
            size: self.size,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a.clone() + b.clone())
                .collect(),
        }
    }

    pub fn scale(&self, c: &T) -> Self {
        SymMatrix {
            size: self.size,
            entries: self.entries.iter().map(|a| a.clone() * c.clone()).collect(),
        }
    }

    /// `T^t M T` for a square (not necessarily symmetric) `transform`.
    pub fn congruent(&self, transform: &[Vec<T>]) -> Self {
        let n = self.size;
        let mut out = Self::zeros(n);
        // (M T)
        let mut mt = vec![vec![T::zero(); n]; n];
        for i in 0..n {
            for j in 0..n {
                let mut acc = T::zero();
                for k in 0..n {
                    acc = acc + self.get(i, k).clone() * transform[k][j].clone();
                }
                mt[i][j] = acc;
            }
        }
        for i in 0..n {
            for j in i..n {
                let mut acc = T::zero();
                for k in 0..n {
                    acc = acc + transform[k][i].clone() * mt[k][j].clone();
                }
                out.set(i, j, acc);
            }
        }
        out
    }

    /// `v^T M v`.
    pub fn quadratic_value(&self, v: &[T]) -> T {
        let mut acc = T::zero();
        for i in 0..self.size {
            for j in 0..self.size {
                acc = acc + v[i].clone() * self.get(i, j).clone() * v[j].clone();
            }
        }
        acc
    }
}

/// Determinant by fraction-free (Bareiss) elimination with row pivoting.
pub fn bareiss_det<T: Scalar>(mut m: Vec<Vec<T>>) -> T {
    let n = m.len();
    if n == 0 {
        return T::one();
    }
    let mut prev = T::one();
    let mut negate = false;
    for k in 0..n {
        let Some(p) = (k..n).find(|&r| !m[r][k].is_zero()) else {
            return T::zero();
        };
        if p != k {
            m.swap(p, k);
            negate = !negate;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (m[k][k].clone() * m[i][j].clone() - m[i][k].clone() * m[k][j].clone())
                    / prev.clone();
                m[i][j] = v;
            }
        }
        prev = m[k][k].clone();
    }
    let det = m[n - 1][n - 1].clone();
    if negate {
        -det
    } else {
        det
    }
}

/// Rank of a rectangular matrix by fraction-free elimination with pivoting.
pub fn bareiss_rank<T: Scalar>(mut m: Vec<Vec<T>>) -> usize {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut rank = 0;
    let mut prev = T::one();
    for col in 0..cols {
        if rank == rows {
            break;
        }
        let Some(p) = (rank..rows).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(p, rank);
        for i in rank + 1..rows {
            for j in col + 1..cols {
                let v = (m[rank][col].clone() * m[i][j].clone()
                    - m[i][col].clone() * m[rank][j].clone())
                    / prev.clone();
                m[i][j] = v;
            }
            m[i][col] = T::zero();
        }
        prev = m[rank][col].clone();
        rank += 1;
    }
    rank
}

/// Signature data of a real symmetric matrix.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Inertia {
    pub positive: usize,
    pub negative: usize,
    pub zero: usize,
}

impl Inertia {
    pub fn rank(&self) -> usize {
        self.positive + self.negative
    }
}

/// `Q = A - iB`: returns `(A, B)`.
pub fn decompose(q: &ComplexSymMatrix) -> (RealSymMatrix, RealSymMatrix) {
    let n = q.size();
    let mut a = RealSymMatrix::zeros(n);
    let mut b = RealSymMatrix::zeros(n);
    for i in 0..n {
        for j in i..n {
            let z = q.get(i, j);
            a.set(i, j, z.re.clone());
            b.set(i, j, -z.im.clone());
        }
    }
    (a, b)
}

fn block(tl: &RealSymMatrix, tr: &RealSymMatrix, br: &RealSymMatrix) -> RealSymMatrix {
    let n = tl.size();
    let mut out = RealSymMatrix::zeros(2 * n);
    for i in 0..n {
        for j in 0..n {
            out.entries[i * 2 * n + j] = tl.get(i, j).clone();
            out.entries[i * 2 * n + n + j] = tr.get(i, j).clone();
            out.entries[(n + i) * 2 * n + j] = tr.get(j, i).clone();
            out.entries[(n + i) * 2 * n + n + j] = br.get(i, j).clone();
        }
    }
    out
}

/// Gram matrix of `Re q(x+iy)` in the variables `(x, y)`: `[[A, B], [B, -A]]`.
pub fn realify_a(q: &ComplexSymMatrix) -> RealSymMatrix {
    let (a, b) = decompose(q);
    let neg_a = a.scale(&-Rational::one());
    block(&a, &b, &neg_a)
}

/// Gram matrix of `Im q(x+iy)` in the variables `(x, y)`: `[[-B, A], [A, B]]`.
pub fn realify_b(q: &ComplexSymMatrix) -> RealSymMatrix {
    let (a, b) = decompose(q);
    let neg_b = b.scale(&-Rational::one());
    block(&neg_b, &a, &b)
}

pub fn rank_complex(m: &ComplexSymMatrix) -> usize {
    bareiss_rank(m.rows())
}

pub fn rank_real(m: &RealSymMatrix) -> usize {
    bareiss_rank(m.rows())
}

/// Exact inertia by symmetric congruence: diagonal pivots when available,
/// otherwise a hyperbolic `[[0, c], [c, 0]]` block worth one positive and one
/// negative square.
pub fn inertia(m: &RealSymMatrix) -> Inertia {
    let size = m.size();
    let mut a = m.rows();
    let mut positive = 0;
    let mut negative = 0;

    fn sym_swap(a: &mut [Vec<Rational>], s: usize, t: usize) {
        if s == t {
            return;
        }
        a.swap(s, t);
        for row in a.iter_mut() {
            row.swap(s, t);
        }
    }

    let mut k = 0;
    while k < size {
        if let Some(p) = (k..size).find(|&p| !a[p][p].is_zero()) {
            sym_swap(&mut a, k, p);
            let pivot = a[k][k].clone();
            if pivot.is_positive() {
                positive += 1;
            } else {
                negative += 1;
            }
            for i in k + 1..size {
                if a[i][k].is_zero() {
                    continue;
                }
                let factor = &a[i][k] / &pivot;
                for j in k + 1..size {
                    let delta = &factor * &a[k][j];
                    a[i][j] -= delta;
                }
            }
            k += 1;
            continue;
        }
        let off = (k..size)
            .flat_map(|p| (p + 1..size).map(move |q| (p, q)))
            .find(|&(p, q)| !a[p][q].is_zero());
        let Some((p, q)) = off else {
            break;
        };
        sym_swap(&mut a, k, p);
        sym_swap(&mut a, k + 1, q);
        let c = a[k][k + 1].clone();
        positive += 1;
        negative += 1;
        // Schur complement against [[0, c], [c, 0]].
        for i in k + 2..size {
            for j in k + 2..size {
                let delta = (&a[i][k] * &a[k + 1][j] + &a[i][k + 1] * &a[k][j]) / &c;
                a[i][j] -= delta;
            }
        }
        k += 2;
    }
    Inertia {
        positive,
        negative,
        zero: size - positive - negative,
    }
}

/// First Stiefel-Whitney parity of the positive eigenbundle along the rotation
/// circle through the realification of `Q`: `rank_C(Q) mod 2`.
pub fn w1_parity(q: &ComplexSymMatrix) -> u8 {
    (rank_complex(q) % 2) as u8
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{gi, integer, rational, real};
    use num_complex::Complex;

    fn rmat(rows: &[&[i64]]) -> RealSymMatrix {
        RealSymMatrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| integer(x)).collect())
                .collect(),
        )
        .unwrap()
    }

    /// Gram matrix of z0 z2 - z1^2 on CP^3.
    fn twisted_q0() -> ComplexSymMatrix {
        let mut q = ComplexSymMatrix::zeros(4);
        q.set(0, 2, real(rational(1, 2)));
        q.set(1, 1, gi(-1, 0));
        q
    }

    #[test]
    fn decompose_sign_convention() {
        let (a, b) = decompose(&ComplexSymMatrix::from_rows(vec![vec![gi(1, 0)]]).unwrap());
        assert_eq!(a, rmat(&[&[1]]));
        assert_eq!(b, rmat(&[&[0]]));
        let (a, b) = decompose(&ComplexSymMatrix::from_rows(vec![vec![gi(0, 1)]]).unwrap());
        assert_eq!(a, rmat(&[&[0]]));
        assert_eq!(b, rmat(&[&[-1]]));
        let (a, b) = decompose(&twisted_q0());
        assert!(b.is_zero());
        assert_eq!(*a.get(0, 2), rational(1, 2));
        assert_eq!(*a.get(1, 1), integer(-1));
    }

    #[test]
    fn realify_single_square() {
        let q = ComplexSymMatrix::from_rows(vec![vec![gi(1, 0)]]).unwrap();
        assert_eq!(realify_a(&q), rmat(&[&[1, 0], &[0, -1]]));
        assert_eq!(realify_b(&q), rmat(&[&[0, 1], &[1, 0]]));
    }

    #[test]
    fn realify_real_block() {
        let q = twisted_q0();
        let p = realify_a(&q);
        assert_eq!(p.size(), 8);
        for i in 0..4 {
            for j in 0..4 {
                assert_eq!(p.get(i, j), &q.get(i, j).re);
                assert_eq!(p.get(4 + i, 4 + j), &-q.get(i, j).re.clone());
                assert!(p.get(i, 4 + j).is_zero());
            }
        }
        // Re q(x+iy) at x = (1,1,1,0), y = (0,1,0,0): z = (1, 1+i, 1, 0), q = 1 - (1+i)^2 = 1 - 2i
        let v: Vec<Rational> = [1, 1, 1, 0, 0, 1, 0, 0]
            .iter()
            .map(|&x| integer(x))
            .collect();
        assert_eq!(p.quadratic_value(&v), integer(1));
        assert_eq!(realify_b(&q).quadratic_value(&v), integer(-2));
    }

    #[test]
    fn realify_is_linear() {
        let q0 = twisted_q0();
        let q1 = ComplexSymMatrix::from_rows(vec![
            vec![gi(0, 1), gi(2, 0), gi(0, 0), gi(1, -1)],
            vec![gi(2, 0), gi(0, 0), gi(3, 0), gi(0, 0)],
            vec![gi(0, 0), gi(3, 0), gi(-1, 2), gi(0, 0)],
            vec![gi(1, -1), gi(0, 0), gi(0, 0), gi(5, 0)],
        ])
        .unwrap();
        assert_eq!(realify_a(&q0.add(&q1)), realify_a(&q0).add(&realify_a(&q1)));
        assert_eq!(realify_b(&q0.add(&q1)), realify_b(&q0).add(&realify_b(&q1)));
    }

    #[test]
    fn complex_ranks() {
        assert_eq!(rank_complex(&ComplexSymMatrix::zeros(3)), 0);
        assert_eq!(rank_complex(&twisted_q0()), 3);
        // a0 Q0 + a1 Q1 at [1,1] for q1 = z0 z3 - z1 z2
        let mut q = twisted_q0();
        q.set(0, 3, real(rational(1, 2)));
        q.set(1, 2, real(rational(-1, 2)));
        assert_eq!(rank_complex(&q), 4);
    }

    #[test]
    fn inertia_examples() {
        assert_eq!(
            inertia(&rmat(&[&[1, 0], &[0, -1]])),
            Inertia {
                positive: 1,
                negative: 1,
                zero: 0
            }
        );
        assert_eq!(
            inertia(&rmat(&[&[0, 1], &[1, 0]])),
            Inertia {
                positive: 1,
                negative: 1,
                zero: 0
            }
        );
        assert_eq!(
            inertia(&realify_a(&twisted_q0())),
            Inertia {
                positive: 3,
                negative: 3,
                zero: 2
            }
        );
        assert_eq!(
            inertia(&rmat(&[&[2, 1, 0], &[1, 2, 0], &[0, 0, -3]])),
            Inertia {
                positive: 2,
                negative: 1,
                zero: 0
            }
        );
        assert_eq!(
            inertia(&rmat(&[&[0, 0, 0], &[0, 0, 0], &[0, 0, 0]])),
            Inertia {
                positive: 0,
                negative: 0,
                zero: 3
            }
        );
    }

    #[test]
    fn hyperbolic_block_with_tail() {
        // [[0,1,1],[1,0,0],[1,0,0]] has eigenvalues sqrt2, -sqrt2, 0
        let m = rmat(&[&[0, 1, 1], &[1, 0, 0], &[1, 0, 0]]);
        assert_eq!(
            inertia(&m),
            Inertia {
                positive: 1,
                negative: 1,
                zero: 1
            }
        );
        // hyperbolic plane, a null direction, then a positive square
        let m = rmat(&[&[0, 2, 0, 0], &[2, 0, 0, 0], &[0, 0, 0, 0], &[0, 0, 0, 5]]);
        assert_eq!(
            inertia(&m),
            Inertia {
                positive: 2,
                negative: 1,
                zero: 1
            }
        );
    }

    #[test]
    fn w1_parities() {
        assert_eq!(w1_parity(&twisted_q0()), 1);
        assert_eq!(w1_parity(&ComplexSymMatrix::zeros(4)), 0);
        assert_eq!(w1_parity(&ComplexSymMatrix::identity(4)), 0);
    }

    #[test]
    fn determinants() {
        let m = vec![
            vec![integer(0), integer(2), integer(1)],
            vec![integer(1), integer(0), integer(0)],
            vec![integer(3), integer(1), integer(1)],
        ];
        // expansion along row 1: -1 * (2*1 - 1*1) = -1
        assert_eq!(bareiss_det(m), integer(-1));
        let c = vec![vec![gi(0, 1), gi(1, 0)], vec![gi(1, 0), gi(0, 1)]];
        assert_eq!(bareiss_det(c), Complex::new(integer(-2), integer(0)));
    }

    #[test]
    fn asymmetric_rows_rejected() {
        let rows = vec![vec![integer(0), integer(1)], vec![integer(2), integer(0)]];
        assert_eq!(RealSymMatrix::from_rows(rows), Err(Error::NotSymmetric));
    }
}
