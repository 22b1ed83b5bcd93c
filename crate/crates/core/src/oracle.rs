//! Independent checks for plane pencils: counting the points of
//! `{q0 = q1 = 0} ⊂ CP^2` by elimination, and comparing the count with a
//! spectral report.
//!
//! After a random integer change of coordinates `w = T z`, the resultant of
//! the two conics with respect to `w2` is a binary quartic in `(w0, w1)`
//! whose distinct roots are the projections of the intersection points.
//! Projecting can only merge points, so each frame takes the largest count
//! over its three coordinate projections, and the reported count is the
//! largest over at least [`MIN_FRAMES`] frames, certified once two frames
//! reach it.

use std::fmt;

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactnum::{bf_distinct_root_count, integer, real, upoly, BinaryForm, GaussianRational};
use crate::pencil::PencilProfile;
use crate::specseq::{BettiReport, Status};
use crate::symlin::{bareiss_det, ComplexSymMatrix};

/// Frames drawn before a count can be certified.
pub const MIN_FRAMES: usize = 4;
/// Frames drawn before giving up on certification.
pub const MAX_FRAMES: usize = 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Count {
    Finite(usize),
    /// The conics share a component.
    Infinite,
}

impl fmt::Display for Count {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Count::Finite(v) => write!(f, "{v}"),
            Count::Infinite => f.write_str("infinite"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointCount {
    pub value: Count,
    /// Two independent frames agreed on `value`.
    pub certified: bool,
    /// Per-frame results in draw order.
    pub frames: Vec<Count>,
}

fn random_frame(rng: &mut ChaCha8Rng) -> Vec<Vec<GaussianRational>> {
    loop {
        let t: Vec<Vec<GaussianRational>> = (0..3)
            .map(|_| {
                (0..3)
                    .map(|_| real(integer(rng.gen_range(-3..=3))))
                    .collect()
            })
            .collect();
        if !bareiss_det(t.clone()).is_zero() {
            return t;
        }
    }
}

/// Coefficients of `q(w)` as a quadratic in `w2`, each a polynomial in `t = w0/w1`
/// (lowest degree first).
fn in_last_variable(q: &ComplexSymMatrix) -> [Vec<GaussianRational>; 3] {
    let two = real(integer(2));
    let c2 = vec![q.get(2, 2).clone()];
    let c1 = vec![&two * q.get(1, 2), &two * q.get(0, 2)];
    let c0 = vec![q.get(1, 1).clone(), &two * q.get(0, 1), q.get(0, 0).clone()];
    [c2, c1, c0]
}

/// Resultant of `a2 x^2 + a1 x + a0` and `b2 x^2 + b1 x + b0`:
/// `(a2 b0 - a0 b2)^2 - (a2 b1 - a1 b2)(a1 b0 - a0 b1)`.
fn quadratic_resultant(
    a: &[Vec<GaussianRational>; 3],
    b: &[Vec<GaussianRational>; 3],
) -> Vec<GaussianRational> {
    let cross =
        |x: &[GaussianRational],
         y: &[GaussianRational],
         u: &[GaussianRational],
         v: &[GaussianRational]| { upoly::sub(&upoly::mul(x, y), &upoly::mul(u, v)) };
    let [a2, a1, a0] = a;
    let [b2, b1, b0] = b;
    let p = cross(a2, b0, a0, b2);
    let q = cross(a2, b1, a1, b2);
    let r = cross(a1, b0, a0, b1);
    upoly::sub(&upoly::mul(&p, &p), &upoly::mul(&q, &r))
}

/// Resultant in `w2` as a binary quartic; `None` when the frame puts a common
/// point at `[0, 0, 1]`, where both leading coefficients vanish.
fn frame_resultant(p0: &ComplexSymMatrix, p1: &ComplexSymMatrix) -> Option<BinaryForm> {
    if p0.get(2, 2).is_zero() && p1.get(2, 2).is_zero() {
        return None;
    }
    let mut coeffs = quadratic_resultant(&in_last_variable(p0), &in_last_variable(p1));
    coeffs.resize(5, GaussianRational::zero());
    Some(BinaryForm::new(coeffs))
}

/// Count seen by one frame, or `None` if every projection was degenerate.
fn frame_count(
    q0: &ComplexSymMatrix,
    q1: &ComplexSymMatrix,
    frame: &[Vec<GaussianRational>],
) -> Result<Option<Count>> {
    let p0 = q0.congruent(frame);
    let p1 = q1.congruent(frame);
    let mut best: Option<Count> = None;
    for last in 0..3 {
        // move coordinate `last` into the eliminated slot
        let mut order: Vec<usize> = (0..3).filter(|&c| c != last).collect();
        order.push(last);
        let permute = |m: &ComplexSymMatrix| {
            let rows = order
                .iter()
                .map(|&a| order.iter().map(|&b| m.get(a, b).clone()).collect())
                .collect();
            ComplexSymMatrix::from_rows(rows).expect("permuted symmetric matrix")
        };
        let Some(res) = frame_resultant(&permute(&p0), &permute(&p1)) else {
            continue;
        };
        if res.is_zero() {
            return Ok(Some(Count::Infinite));
        }
        let count = bf_distinct_root_count(&res)?;
        best = Some(match best {
            Some(Count::Finite(v)) => Count::Finite(v.max(count)),
            _ => Count::Finite(count),
        });
    }
    Ok(best)
}

/// Counts the points of `{q0 = q1 = 0}` in CP^2, certified by two agreeing frames.
pub fn point_count_cp2(
    q0: &ComplexSymMatrix,
    q1: &ComplexSymMatrix,
    seed: u64,
) -> Result<PointCount> {
    for q in [q0, q1] {
        if q.size() != 3 {
            return Err(Error::OracleDimension(q.size().saturating_sub(1)));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut frames = Vec::new();
    let mut draws = 0;
    let rank = |c: &Count| match c {
        Count::Finite(v) => *v,
        Count::Infinite => usize::MAX,
    };
    while frames.len() < MAX_FRAMES && draws < 4 * MAX_FRAMES {
        draws += 1;
        let frame = random_frame(&mut rng);
        if let Some(count) = frame_count(q0, q1, &frame)? {
            frames.push(count);
        }
        if frames.len() >= MIN_FRAMES && certified_max(&frames, rank).1 {
            break;
        }
    }
    let (value, certified) = certified_max(&frames, rank);
    Ok(PointCount {
        value: value.unwrap_or(Count::Infinite),
        certified,
        frames,
    })
}

/// Largest count seen, and whether at least two frames reached it.
fn certified_max(frames: &[Count], rank: impl Fn(&Count) -> usize) -> (Option<Count>, bool) {
    let Some(max) = frames.iter().copied().max_by_key(|c| rank(c)) else {
        return (None, false);
    };
    let hits = frames.iter().filter(|&&c| c == max).count();
    (Some(max), hits >= 2)
}

/// Checks a resolved plane report against a certified finite point count:
/// `betti_C` must be `(count, 0, 0, 0, 0)`, and when a pencil profile is
/// given, four points must occur exactly when the determinant has three
/// distinct roots.
pub fn cross_check(
    report: &BettiReport,
    profile: Option<&PencilProfile>,
    pc: &PointCount,
) -> Result<bool> {
    if report.n != 2 {
        return Err(Error::OracleDimension(report.n));
    }
    if report.status != Status::Resolved {
        return Err(Error::Precondition("report is ambiguous".into()));
    }
    let Count::Finite(points) = pc.value else {
        return Err(Error::Precondition("intersection is not finite".into()));
    };
    if !pc.certified {
        return Err(Error::Precondition("point count is not certified".into()));
    }
    let mut expected = vec![0; 5];
    expected[0] = points;
    let mut ok = report.betti_c == expected;
    if let Some(pp) = profile {
        let three_roots = !pp.det_form.is_zero() && bf_distinct_root_count(&pp.det_form)? == 3;
        ok &= (points == 4) == three_roots;
    }
    Ok(ok)
}
