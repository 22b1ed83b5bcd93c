//! Rank stratification of a pencil `a0*Q0 + a1*Q1` of complex quadrics.
//!
//! All binary forms here are computed by evaluation at the chart points
//! `[t, 1]`, `t = 0, 1, 2, ...`, followed by exact interpolation; a `j x j`
//! minor is a form of degree `j`, so `j + 1` chart values determine it,
//! including its behaviour at `[1, 0]`.

use std::collections::BTreeMap;
use std::fmt;

use itertools::Itertools;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactnum::{
    bf_distinct_root_count, bf_gcd, bf_squarefree_decomposition, integer, real, BinaryForm,
    GaussianRational, Rational,
};
use crate::symlin::{bareiss_det, rank_complex, ComplexSymMatrix, MAX_N};

#[derive(Clone, Debug, PartialEq)]
pub struct Pencil {
    n: usize,
    q0: ComplexSymMatrix,
    q1: ComplexSymMatrix,
}

impl Pencil {
    pub fn new(q0: ComplexSymMatrix, q1: ComplexSymMatrix) -> Result<Self> {
        Self::with_max_n(q0, q1, MAX_N)
    }

    /// Like [`Pencil::new`] with a caller-chosen guard on `n`.
    pub fn with_max_n(q0: ComplexSymMatrix, q1: ComplexSymMatrix, max_n: usize) -> Result<Self> {
        if q0.size() != q1.size() {
            return Err(Error::DimensionMismatch {
                expected: q0.size(),
                found: q1.size(),
            });
        }
        if q0.size() == 0 {
            return Err(Error::Input("quadrics need at least one variable".into()));
        }
        let n = q0.size() - 1;
        if n > max_n {
            return Err(Error::TooLarge { n, max: max_n });
        }
        if q0.is_zero() && q1.is_zero() {
            return Err(Error::ZeroQuadric);
        }
        Ok(Pencil { n, q0, q1 })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn q0(&self) -> &ComplexSymMatrix {
        &self.q0
    }

    pub fn q1(&self) -> &ComplexSymMatrix {
        &self.q1
    }

    pub fn at(&self, a0: &GaussianRational, a1: &GaussianRational) -> ComplexSymMatrix {
        self.q0.scale(a0).add(&self.q1.scale(a1))
    }

    /// Member at the chart point `[t, 1]`.
    fn chart(&self, t: i64) -> ComplexSymMatrix {
        self.at(&real(integer(t)), &GaussianRational::one())
    }

    /// True when `Q0` and `Q1` span at most a line (one of them zero, or proportional).
    pub fn is_dependent(&self) -> bool {
        let size = self.q0.size();
        let cells: Vec<(usize, usize)> = (0..size)
            .flat_map(|i| (i..size).map(move |j| (i, j)))
            .collect();
        for (x, &(i, j)) in cells.iter().enumerate() {
            for &(k, l) in &cells[x + 1..] {
                let lhs = self.q0.get(i, j) * self.q1.get(k, l);
                let rhs = self.q0.get(k, l) * self.q1.get(i, j);
                if lhs != rhs {
                    return false;
                }
            }
        }
        true
    }

    /// The nonzero generator when the pencil is dependent.
    pub fn representative(&self) -> &ComplexSymMatrix {
        if self.q0.is_zero() {
            &self.q1
        } else {
            &self.q0
        }
    }
}

fn submatrix(m: &ComplexSymMatrix, rows: &[usize], cols: &[usize]) -> Vec<Vec<GaussianRational>> {
    rows.iter()
        .map(|&r| cols.iter().map(|&c| m.get(r, c).clone()).collect())
        .collect()
}

/// `det(a0*Q0 + a1*Q1)` as a degree-`n+1` form; the zero form when it vanishes identically.
pub fn det_form(p: &Pencil) -> BinaryForm {
    let degree = p.n + 1;
    let samples: Vec<(Rational, GaussianRational)> = (0..=degree as i64)
        .map(|t| (integer(t), bareiss_det(p.chart(t).rows())))
        .collect();
    BinaryForm::interpolate(degree, &samples)
}

/// Normalized gcd of all `j x j` minors, or the zero form when every such minor
/// vanishes identically. Stops early once the gcd is constant.
pub fn minor_gcd(p: &Pencil, j: usize) -> Result<BinaryForm> {
    let size = p.n + 1;
    if j == 0 || j > size {
        return Err(Error::Input(format!("minor size {j} outside 1..={size}")));
    }
    let charts: Vec<ComplexSymMatrix> = (0..=j as i64).map(|t| p.chart(t)).collect();
    let subsets: Vec<Vec<usize>> = (0..size).combinations(j).collect();
    let mut running: Option<BinaryForm> = None;
    // Minors for (rows, cols) and (cols, rows) agree by symmetry.
    for (ri, rows) in subsets.iter().enumerate() {
        for cols in &subsets[ri..] {
            let samples: Vec<(Rational, GaussianRational)> = charts
                .iter()
                .enumerate()
                .map(|(t, m)| (integer(t as i64), bareiss_det(submatrix(m, rows, cols))))
                .collect();
            if samples.iter().all(|(_, v)| v.is_zero()) {
                continue;
            }
            let minor = BinaryForm::interpolate(j, &samples);
            let next = match &running {
                None => minor.normalize(),
                Some(g) => bf_gcd(g, &minor)?,
            };
            if next.is_constant() {
                return Ok(BinaryForm::one());
            }
            running = Some(next);
        }
    }
    Ok(running.unwrap_or_else(BinaryForm::zero))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Classification {
    /// `mu = n+1`, `sigma_mu = n+1`, `nu = n`.
    CompleteIntersection,
    ConstantRank,
    /// `det` not identically zero and every root's multiplicity equals its rank drop.
    GenericDeterminant,
    Other,
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Classification::CompleteIntersection => "complete_intersection",
            Classification::ConstantRank => "constant_rank",
            Classification::GenericDeterminant => "generic_determinant",
            Classification::Other => "other",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PencilProfile {
    pub n: usize,
    /// Generic (maximal) rank.
    pub mu: usize,
    /// Minimal rank over CP^1.
    pub nu: usize,
    pub det_form: BinaryForm,
    /// `j -> sigma_j`, the number of points of rank `<= j-1`, for `1 <= j <= mu`.
    pub sigma: BTreeMap<usize, usize>,
    pub sqfree_decomp: Vec<(BinaryForm, usize)>,
    pub exists_odd_multiplicity: bool,
    pub classification: Classification,
}

impl PencilProfile {
    /// Assembles a profile from its rank ladder `sigma[j-1] = sigma_j`, `j = 1..=mu`.
    ///
    /// `det_form` should be the zero form exactly when `mu < n+1`.
    pub fn from_ladder(
        n: usize,
        ladder: &[usize],
        det_form: BinaryForm,
        exists_odd_multiplicity: bool,
    ) -> Result<Self> {
        let mu = ladder.len();
        if mu == 0 || mu > n + 1 {
            return Err(Error::Input(format!(
                "generic rank {mu} outside 1..={}",
                n + 1
            )));
        }
        if ladder.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::Input("sigma ladder must be nondecreasing".into()));
        }
        let sigma: BTreeMap<usize, usize> = ladder
            .iter()
            .enumerate()
            .map(|(k, &s)| (k + 1, s))
            .collect();
        let at = |j: usize| -> Option<usize> {
            if j == 0 {
                Some(0)
            } else {
                sigma.get(&j).copied()
            }
        };
        // First strict increase of the ladder; sigma_{mu+1} counts as infinite.
        let nu = (0..=mu)
            .find(|&j| match (at(j + 1), at(j)) {
                (Some(next), Some(cur)) => next > cur,
                _ => true,
            })
            .unwrap_or(mu);
        let sqfree_decomp = if det_form.is_zero() {
            Vec::new()
        } else {
            bf_squarefree_decomposition(&det_form)?
        };
        let classification = if mu == n + 1 && at(mu) == Some(n + 1) && nu == n {
            Classification::CompleteIntersection
        } else if mu == nu {
            Classification::ConstantRank
        } else if mu == n + 1 && ladder.iter().sum::<usize>() == n + 1 {
            // sum_j sigma_j = sum over roots of the rank drop, which is bounded by the multiplicity
            Classification::GenericDeterminant
        } else {
            Classification::Other
        };
        Ok(PencilProfile {
            n,
            mu,
            nu,
            det_form,
            sigma,
            sqfree_decomp,
            exists_odd_multiplicity,
            classification,
        })
    }

    /// `sigma_j` for `0 <= j <= mu`.
    pub fn sigma(&self, j: usize) -> usize {
        if j == 0 {
            return 0;
        }
        self.sigma[&j]
    }
}

/// Generic rank, by sampling `n+2` chart points.
pub fn generic_rank(p: &Pencil) -> usize {
    (0..=(p.n as i64 + 1))
        .map(|t| rank_complex(&p.chart(t)))
        .max()
        .unwrap_or(0)
}

pub fn profile(p: &Pencil) -> Result<PencilProfile> {
    let mu = generic_rank(p);
    let mut ladder = vec![0; mu];
    // Sigma_j is contained in Sigma_{j+1}, so the first empty one ends the scan.
    for j in (1..=mu).rev() {
        let g = minor_gcd(p, j)?;
        debug_assert!(!g.is_zero(), "minor gcd vanished below the generic rank");
        let count = bf_distinct_root_count(&g)?;
        ladder[j - 1] = count;
        if count == 0 {
            break;
        }
    }
    let det = det_form(p);
    let exists_odd = if det.is_zero() {
        false
    } else {
        bf_squarefree_decomposition(&det)?
            .iter()
            .any(|(_, m)| m % 2 == 1)
    };
    PencilProfile::from_ladder(p.n, &ladder, det, exists_odd)
}

/// Rank of `a0*Q0 + a1*Q1` at a point of CP^1 given by Gaussian-rational coordinates.
pub fn rank_at(p: &Pencil, a0: &GaussianRational, a1: &GaussianRational) -> usize {
    rank_complex(&p.at(a0, a1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{gi, rational};

    fn twisted_pencil() -> Pencil {
        let mut q0 = ComplexSymMatrix::zeros(4);
        q0.set(0, 2, real(rational(1, 2)));
        q0.set(1, 1, gi(-1, 0));
        let mut q1 = ComplexSymMatrix::zeros(4);
        q1.set(0, 3, real(rational(1, 2)));
        q1.set(1, 2, real(rational(-1, 2)));
        Pencil::new(q0, q1).unwrap()
    }

    /// q0 = z0^2 - z1^2, q1 = 2 z2 (z0 + z1)
    fn constant_rank_pencil() -> Pencil {
        let q0 = ComplexSymMatrix::diagonal(vec![gi(1, 0), gi(-1, 0), gi(0, 0)]);
        let mut q1 = ComplexSymMatrix::zeros(3);
        q1.set(0, 2, gi(1, 0));
        q1.set(1, 2, gi(1, 0));
        Pencil::new(q0, q1).unwrap()
    }

    fn diag(entries: &[i64]) -> ComplexSymMatrix {
        ComplexSymMatrix::diagonal(entries.iter().map(|&x| gi(x, 0)).collect())
    }

    #[test]
    fn twisted_determinant() {
        let det = det_form(&twisted_pencil());
        // cofactor expansion gives a1^4 / 16
        assert_eq!(
            det,
            BinaryForm::alpha1().pow(4).scale(&real(rational(1, 16)))
        );
        assert_eq!(det.normalize(), BinaryForm::alpha1().pow(4));
    }

    #[test]
    fn constant_rank_determinant_vanishes() {
        assert!(det_form(&constant_rank_pencil()).is_zero());
    }

    #[test]
    fn diagonal_determinant() {
        let p = Pencil::new(diag(&[1, -1, 0]), diag(&[1, 0, -1])).unwrap();
        let expected = BinaryForm::alpha0()
            .mul(&BinaryForm::alpha1())
            .mul(&BinaryForm::linear(gi(1, 0), gi(1, 0)));
        // diag(a0 + a1, -a0, -a1)
        assert_eq!(det_form(&p), expected);
    }

    #[test]
    fn twisted_minor_gcds() {
        let p = twisted_pencil();
        assert_eq!(minor_gcd(&p, 4).unwrap(), BinaryForm::alpha1().pow(4));
        assert_eq!(minor_gcd(&p, 3).unwrap(), BinaryForm::one());
        assert!(minor_gcd(&p, 5).is_err());
    }

    #[test]
    fn constant_rank_minor_gcd() {
        let p = constant_rank_pencil();
        assert!(minor_gcd(&p, 3).unwrap().is_zero());
        assert!(minor_gcd(&p, 2).unwrap().is_constant());
    }

    #[test]
    fn twisted_profile() {
        let pp = profile(&twisted_pencil()).unwrap();
        assert_eq!((pp.mu, pp.nu), (4, 3));
        assert_eq!(pp.sigma(4), 1);
        assert_eq!(pp.sigma(3), 0);
        assert!(!pp.exists_odd_multiplicity);
        assert_eq!(pp.classification, Classification::Other);
    }

    #[test]
    fn constant_rank_profile() {
        let pp = profile(&constant_rank_pencil()).unwrap();
        assert_eq!((pp.mu, pp.nu), (2, 2));
        assert!(pp.det_form.is_zero());
        assert_eq!(pp.classification, Classification::ConstantRank);
    }

    #[test]
    fn literal_constant_rank_example_is_not_constant_rank() {
        // q1 = 2 z0 (z1 + z2) as printed: det = a0 a1^2, rank 2 at both roots
        let q0 = diag(&[1, -1, 0]);
        let mut q1 = ComplexSymMatrix::zeros(3);
        q1.set(0, 1, gi(1, 0));
        q1.set(0, 2, gi(1, 0));
        let p = Pencil::new(q0, q1).unwrap();
        let det = det_form(&p);
        assert_eq!(det, BinaryForm::alpha0().mul(&BinaryForm::alpha1().pow(2)));
        let pp = profile(&p).unwrap();
        assert_eq!((pp.mu, pp.nu), (3, 2));
        assert_eq!(pp.sigma(3), 2);
        assert!(pp.exists_odd_multiplicity);
    }

    #[test]
    fn diagonal_complete_intersection() {
        let p = Pencil::new(diag(&[1, 1, 1, 1]), diag(&[0, 1, 2, 3])).unwrap();
        let pp = profile(&p).unwrap();
        assert_eq!((pp.mu, pp.nu), (4, 3));
        assert_eq!(pp.sigma(4), 4);
        assert!(pp.exists_odd_multiplicity);
        assert_eq!(pp.classification, Classification::CompleteIntersection);
    }

    #[test]
    fn diagonal_two_roots_is_generic_determinant() {
        let p = Pencil::new(diag(&[1, 1, 1]), diag(&[0, 0, 1])).unwrap();
        let pp = profile(&p).unwrap();
        assert_eq!((pp.mu, pp.nu), (3, 1));
        assert_eq!((pp.sigma(2), pp.sigma(3)), (1, 2));
        assert_eq!(pp.classification, Classification::GenericDeterminant);
    }

    #[test]
    fn dependence() {
        let a = diag(&[1, 2, 3]);
        assert!(Pencil::new(a.clone(), a.scale(&gi(0, 2)))
            .unwrap()
            .is_dependent());
        assert!(Pencil::new(a.clone(), ComplexSymMatrix::zeros(3))
            .unwrap()
            .is_dependent());
        assert!(!Pencil::new(a, diag(&[1, 2, 4])).unwrap().is_dependent());
        assert_eq!(
            Pencil::new(ComplexSymMatrix::zeros(2), ComplexSymMatrix::zeros(2)),
            Err(Error::ZeroQuadric)
        );
    }

    #[test]
    fn ladder_validation() {
        assert!(PencilProfile::from_ladder(2, &[], BinaryForm::zero(), false).is_err());
        assert!(PencilProfile::from_ladder(2, &[2, 1], BinaryForm::zero(), false).is_err());
        let pp = PencilProfile::from_ladder(2, &[0, 2], BinaryForm::zero(), false).unwrap();
        assert_eq!((pp.mu, pp.nu), (2, 1));
    }
}
