//! Exact scalars over Q and Q(i), and homogeneous binary forms over Q(i).
//!
//! A binary form of degree `d` is stored by its `d + 1` coefficients, where
//! coefficient `k` multiplies `a0^k * a1^(d-k)`. Evaluating at `[t, 1]` gives an
//! ordinary polynomial in `t` whose coefficients are the same vector; the root
//! `[1, 0]` shows up as a drop in that polynomial's degree, i.e. as a power of
//! `a1` dividing the form.

use std::fmt;
use std::ops::Neg;

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{Num, One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;
pub type GaussianRational = Complex<BigRational>;

/// Exact field elements usable by the elimination routines.
pub trait Scalar: Clone + PartialEq + fmt::Debug + Num + Neg<Output = Self> {}

impl<T> Scalar for T where T: Clone + PartialEq + fmt::Debug + Num + Neg<Output = T> {}

pub fn rational(numer: i64, denom: i64) -> Rational {
    BigRational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn integer(value: i64) -> Rational {
    BigRational::from_integer(BigInt::from(value))
}

/// Gaussian integer `re + im*i` as a Gaussian rational.
pub fn gi(re: i64, im: i64) -> GaussianRational {
    Complex::new(integer(re), integer(im))
}

pub fn real(value: Rational) -> GaussianRational {
    Complex::new(value, Rational::zero())
}

pub fn format_rational(value: &Rational) -> String {
    if value.is_integer() {
        value.numer().to_string()
    } else {
        format!("{}/{}", value.numer(), value.denom())
    }
}

/// Renders `z` so that the polynomial parser reads it back as the same value.
///
/// Purely real or purely imaginary values are bare (`-1/2`, `3*i`, `-i`); mixed
/// values are parenthesized (`(1/2-3*i)`).
pub fn format_gaussian(z: &GaussianRational) -> String {
    let re = &z.re;
    let im = &z.im;
    let imag = |v: &Rational| -> String {
        if v.is_one() {
            "i".to_string()
        } else if (-v).is_one() {
            "-i".to_string()
        } else {
            format!("{}*i", format_rational(v))
        }
    };
    match (re.is_zero(), im.is_zero()) {
        (_, true) => format_rational(re),
        (true, false) => imag(im),
        (false, false) => {
            let tail = imag(&im.abs());
            let sign = if im.is_negative() { '-' } else { '+' };
            format!("({}{}{})", format_rational(re), sign, tail)
        }
    }
}

/// Dense univariate polynomials over Q(i), lowest degree first, no trailing zeros.
pub(crate) mod upoly {
    use super::*;

    pub type Poly = Vec<GaussianRational>;

    pub fn trim(mut p: Poly) -> Poly {
        while p.last().is_some_and(|c| c.is_zero()) {
            p.pop();
        }
        p
    }

    pub fn degree(p: &[GaussianRational]) -> Option<usize> {
        p.len().checked_sub(1)
    }

    pub fn mul(a: &[GaussianRational], b: &[GaussianRational]) -> Poly {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![GaussianRational::zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                out[i + j] += x * y;
            }
        }
        trim(out)
    }

    pub fn sub(a: &[GaussianRational], b: &[GaussianRational]) -> Poly {
        let len = a.len().max(b.len());
        let zero = GaussianRational::zero();
        let out = (0..len)
            .map(|k| a.get(k).unwrap_or(&zero) - b.get(k).unwrap_or(&zero))
            .collect();
        trim(out)
    }

    pub fn derivative(p: &[GaussianRational]) -> Poly {
        let out = p
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| c * real(integer(k as i64)))
            .collect();
        trim(out)
    }

    pub fn monic(p: &[GaussianRational]) -> Poly {
        match p.last() {
            None => Vec::new(),
            Some(lead) => {
                let inv = lead.inv();
                p.iter().map(|c| c * &inv).collect()
            }
        }
    }

    /// Division with remainder; `divisor` must be nonzero.
    pub fn div_rem(a: &[GaussianRational], divisor: &[GaussianRational]) -> (Poly, Poly) {
        let dlen = divisor.len();
        assert!(dlen > 0, "polynomial division by zero");
        let mut rem: Poly = a.to_vec();
        if rem.len() < dlen {
            return (Vec::new(), rem);
        }
        let lead_inv = divisor[dlen - 1].inv();
        let mut quot = vec![GaussianRational::zero(); rem.len() - dlen + 1];
        for shift in (0..quot.len()).rev() {
            let coef = &rem[shift + dlen - 1] * &lead_inv;
            if !coef.is_zero() {
                for (k, d) in divisor.iter().enumerate() {
                    rem[shift + k] -= &coef * d;
                }
            }
            quot[shift] = coef;
        }
        rem.truncate(dlen - 1);
        (trim(quot), trim(rem))
    }

    pub fn exact_div(a: &[GaussianRational], divisor: &[GaussianRational]) -> Poly {
        let (q, r) = div_rem(a, divisor);
        debug_assert!(r.is_empty(), "inexact polynomial division");
        q
    }

    /// Monic gcd; `gcd(0, 0) = 0`.
    pub fn gcd(a: &[GaussianRational], b: &[GaussianRational]) -> Poly {
        let mut x = trim(a.to_vec());
        let mut y = trim(b.to_vec());
        while !y.is_empty() {
            let (_, r) = div_rem(&x, &y);
            x = y;
            y = r;
        }
        monic(&x)
    }

    /// Yun's squarefree decomposition of a nonzero polynomial: monic,
    /// nonconstant, pairwise coprime factors with their multiplicities.
    pub fn yun(p: &[GaussianRational]) -> Vec<(Poly, usize)> {
        let mut out = Vec::new();
        if degree(p).unwrap_or(0) == 0 {
            return out;
        }
        let dp = derivative(p);
        let g = gcd(p, &dp);
        let mut c = exact_div(p, &g);
        let mut d = sub(&exact_div(&dp, &g), &derivative(&c));
        let mut mult = 1;
        while degree(&c).unwrap_or(0) > 0 {
            let a = gcd(&c, &d);
            c = exact_div(&c, &a);
            d = sub(&exact_div(&d, &a), &derivative(&c));
            if degree(&a).unwrap_or(0) > 0 {
                out.push((a, mult));
            }
            mult += 1;
        }
        out
    }

    /// Newton interpolation through `(node, value)` pairs with distinct nodes.
    pub fn interpolate(samples: &[(GaussianRational, GaussianRational)]) -> Poly {
        let m = samples.len();
        let mut table: Vec<GaussianRational> = samples.iter().map(|(_, v)| v.clone()).collect();
        for level in 1..m {
            for k in (level..m).rev() {
                let num = &table[k] - &table[k - 1];
                let den = &samples[k].0 - &samples[k - level].0;
                table[k] = num / den;
            }
        }
        // Horner on the Newton basis.
        let mut acc: Poly = Vec::new();
        for k in (0..m).rev() {
            let shifted = mul(&acc, &[-samples[k].0.clone(), GaussianRational::one()]);
            acc = sub(&shifted, &[-table[k].clone()]);
        }
        acc
    }
}

/// Homogeneous form in `(a0, a1)` over Q(i).
#[derive(Clone, Debug, PartialEq)]
pub struct BinaryForm {
    degree: usize,
    // Empty exactly for the zero form.
    coeffs: Vec<GaussianRational>,
}

impl BinaryForm {
    pub fn zero() -> Self {
        BinaryForm {
            degree: 0,
            coeffs: Vec::new(),
        }
    }

    /// Form of degree `coeffs.len() - 1`; all-zero input gives the zero form.
    pub fn new(coeffs: Vec<GaussianRational>) -> Self {
        if coeffs.iter().all(|c| c.is_zero()) {
            return Self::zero();
        }
        BinaryForm {
            degree: coeffs.len() - 1,
            coeffs,
        }
    }

    pub fn constant(c: GaussianRational) -> Self {
        Self::new(vec![c])
    }

    pub fn one() -> Self {
        Self::constant(GaussianRational::one())
    }

    /// `c0 * a0 + c1 * a1`.
    pub fn linear(c0: GaussianRational, c1: GaussianRational) -> Self {
        Self::new(vec![c1, c0])
    }

    pub fn alpha0() -> Self {
        Self::linear(GaussianRational::one(), GaussianRational::zero())
    }

    pub fn alpha1() -> Self {
        Self::linear(GaussianRational::zero(), GaussianRational::one())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Homogeneous degree; meaningless (reported as 0) for the zero form.
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn coeffs(&self) -> &[GaussianRational] {
        &self.coeffs
    }

    pub fn is_constant(&self) -> bool {
        !self.is_zero() && self.degree == 0
    }

    /// Largest `e` with `a1^e` dividing the form, i.e. the multiplicity of the root `[1, 0]`.
    pub fn alpha1_power(&self) -> usize {
        match self.coeffs.iter().rposition(|c| !c.is_zero()) {
            Some(top) => self.degree - top,
            None => 0,
        }
    }

    /// Restriction to the chart `a1 = 1`.
    pub fn dehomogenize(&self) -> upoly::Poly {
        upoly::trim(self.coeffs.clone())
    }

    fn from_affine(poly: upoly::Poly, degree: usize) -> Self {
        if poly.is_empty() {
            return Self::zero();
        }
        debug_assert!(poly.len() <= degree + 1);
        let mut coeffs = poly;
        coeffs.resize(degree + 1, GaussianRational::zero());
        BinaryForm { degree, coeffs }
    }

    pub fn eval(&self, a0: &GaussianRational, a1: &GaussianRational) -> GaussianRational {
        let mut acc = GaussianRational::zero();
        let mut p0 = GaussianRational::one();
        for (k, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                let mut term = c * &p0;
                for _ in 0..(self.degree - k) {
                    term *= a1;
                }
                acc += term;
            }
            p0 *= a0;
        }
        acc
    }

    pub fn mul(&self, other: &BinaryForm) -> BinaryForm {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![GaussianRational::zero(); self.degree + other.degree + 1];
        for (i, x) in self.coeffs.iter().enumerate() {
            for (j, y) in other.coeffs.iter().enumerate() {
                coeffs[i + j] += x * y;
            }
        }
        BinaryForm {
            degree: self.degree + other.degree,
            coeffs,
        }
    }

    pub fn pow(&self, exp: usize) -> BinaryForm {
        (0..exp).fold(Self::one(), |acc, _| acc.mul(self))
    }

    pub fn scale(&self, c: &GaussianRational) -> BinaryForm {
        if c.is_zero() {
            return Self::zero();
        }
        BinaryForm {
            degree: self.degree,
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
        }
    }

    /// Scales so the coefficient of the highest power of `a0` present is 1.
    pub fn normalize(&self) -> BinaryForm {
        match self.coeffs.iter().rev().find(|c| !c.is_zero()) {
            Some(lead) => self.scale(&lead.inv()),
            None => Self::zero(),
        }
    }

    pub fn same_up_to_scalar(&self, other: &BinaryForm) -> bool {
        self.normalize() == other.normalize()
    }

    /// Exact quotient `self / divisor`, or `None` if `divisor` does not divide.
    pub fn exact_div(&self, divisor: &BinaryForm) -> Option<BinaryForm> {
        if divisor.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Self::zero());
        }
        if divisor.degree > self.degree || divisor.alpha1_power() > self.alpha1_power() {
            return None;
        }
        let (q, r) = upoly::div_rem(&self.dehomogenize(), &divisor.dehomogenize());
        if !r.is_empty() {
            return None;
        }
        Some(Self::from_affine(q, self.degree - divisor.degree))
    }

    /// Recovers the degree-`degree` form from its values at `[t, 1]`; uses the
    /// first `degree + 1` samples, whose nodes must be distinct.
    pub fn interpolate(degree: usize, samples: &[(Rational, GaussianRational)]) -> BinaryForm {
        assert!(
            samples.len() > degree,
            "need {} samples to interpolate a degree-{degree} form",
            degree + 1
        );
        let pts: Vec<_> = samples[..=degree]
            .iter()
            .map(|(t, v)| (real(t.clone()), v.clone()))
            .collect();
        Self::from_affine(upoly::interpolate(&pts), degree)
    }
}

impl fmt::Display for BinaryForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for k in (0..=self.degree).rev() {
            let c = &self.coeffs[k];
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let mut vars = Vec::new();
            let e1 = self.degree - k;
            match k {
                0 => {}
                1 => vars.push("a0".to_string()),
                _ => vars.push(format!("a0^{k}")),
            }
            match e1 {
                0 => {}
                1 => vars.push("a1".to_string()),
                _ => vars.push(format!("a1^{e1}")),
            }
            if vars.is_empty() {
                write!(f, "{}", format_gaussian(c))?;
            } else if c.is_one() {
                write!(f, "{}", vars.join("*"))?;
            } else {
                write!(f, "{}*{}", format_gaussian(c), vars.join("*"))?;
            }
        }
        Ok(())
    }
}

/// Normalized gcd of two binary forms, keeping the shared power of `a1`.
pub fn bf_gcd(f: &BinaryForm, g: &BinaryForm) -> Result<BinaryForm> {
    match (f.is_zero(), g.is_zero()) {
        (true, true) => Err(Error::GcdOfZeroForms),
        (true, false) => Ok(g.normalize()),
        (false, true) => Ok(f.normalize()),
        (false, false) => {
            let shared = f.alpha1_power().min(g.alpha1_power());
            let affine = upoly::gcd(&f.dehomogenize(), &g.dehomogenize());
            let deg = upoly::degree(&affine).unwrap_or(0);
            Ok(BinaryForm::from_affine(affine, deg).mul(&BinaryForm::alpha1().pow(shared)))
        }
    }
}

/// Yun decomposition `f = unit * prod f_i^i`, sorted by multiplicity.
///
/// The root `[1, 0]` is folded in like any other root: a factor `a1` of
/// multiplicity `e` joins the entry with multiplicity `e`.
pub fn bf_squarefree_decomposition(f: &BinaryForm) -> Result<Vec<(BinaryForm, usize)>> {
    if f.is_zero() {
        return Err(Error::ZeroFormArgument("squarefree decomposition"));
    }
    let mut parts: Vec<(BinaryForm, usize)> = upoly::yun(&f.dehomogenize())
        .into_iter()
        .map(|(p, m)| {
            let deg = upoly::degree(&p).unwrap_or(0);
            (BinaryForm::from_affine(p, deg), m)
        })
        .collect();
    let e = f.alpha1_power();
    if e > 0 {
        match parts.iter_mut().find(|(_, m)| *m == e) {
            Some(entry) => entry.0 = entry.0.mul(&BinaryForm::alpha1()).normalize(),
            None => parts.push((BinaryForm::alpha1(), e)),
        }
    }
    parts.sort_by_key(|(_, m)| *m);
    Ok(parts)
}

/// Number of distinct roots of `f` in CP^1.
pub fn bf_distinct_root_count(f: &BinaryForm) -> Result<usize> {
    if f.is_zero() {
        return Err(Error::ZeroFormArgument("distinct root count"));
    }
    // finite roots: degree of the squarefree part of the chart polynomial
    let chart = f.dehomogenize();
    let finite = match upoly::degree(&chart) {
        Some(d) if d > 0 => {
            let g = upoly::gcd(&chart, &upoly::derivative(&chart));
            d - upoly::degree(&g).unwrap_or(0)
        }
        _ => 0,
    };
    Ok(finite + usize::from(f.alpha1_power() > 0))
}
