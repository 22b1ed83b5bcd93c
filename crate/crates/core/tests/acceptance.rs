//! Acceptance criteria 1-7. Prints one PASS/FAIL line per criterion; runs
//! without the libtest harness so the lines are never captured.
//!
//! Criterion 2 is checked against its literal input. That input does not
//! produce the constant-rank pencil the criterion describes (see
//! `KNOWN_FAILURES`), so it fails; the test asserts that exactly the known
//! failures fail.

use std::process::Command;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use quadbetti::exactnum::{bf_distinct_root_count, gi, GaussianRational, Rational};
use quadbetti::oracle::{cross_check, point_count_cp2, Count};
use quadbetti::pencil::{det_form, Classification, Pencil};
use quadbetti::qparse::{analyze, run, Command as RunCommand, InputSpec, Route};
use quadbetti::specseq::{closed_form_complete_intersection, closed_form_single, E2Table, Status};
use quadbetti::symlin::{inertia, rank_complex, rank_real, realify_a, ComplexSymMatrix, SymMatrix};

const LIMIT_1: Duration = Duration::from_secs(1);
const LIMIT_2: Duration = Duration::from_secs(1);
const LIMIT_3: Duration = Duration::from_secs(5);
const LIMIT_4: Duration = Duration::from_secs(10);
const LIMIT_5: Duration = Duration::from_secs(10);
const LIMIT_6: Duration = Duration::from_secs(30);
const LIMIT_7: Duration = Duration::from_secs(5);
const MATRICES_6: usize = 240;
const SEED_6: u64 = 0x5eed;
const ORACLE_SEED: u64 = 17;

/// Criteria expected to fail, with the reason.
const KNOWN_FAILURES: &[(usize, &str)] = &[(
    2,
    "q1 = 2z0(z1+z2) gives det = a0*a1^2 and C = three points; \
     the stated values belong to q1 = 2z2(z0+z1)",
)];

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn timed(limit: Duration, f: impl FnOnce() -> Outcome) -> Outcome {
    let start = Instant::now();
    let mut o = f();
    let elapsed = start.elapsed();
    if elapsed > limit {
        o.pass = false;
    }
    o.detail = format!(
        "{} [{:.3}s, limit {}s]",
        o.detail,
        elapsed.as_secs_f64(),
        limit.as_secs()
    );
    o
}

fn grid(n: usize, rows_top_down: &[[usize; 5]]) -> E2Table {
    let mut entries: Vec<Vec<usize>> = rows_top_down.iter().map(|r| r.to_vec()).collect();
    entries.reverse();
    E2Table::from_rows(n, entries).unwrap()
}

fn criterion_1() -> Outcome {
    let spec = InputSpec::from_texts(3, &["z0*z2 - z1^2", "z0*z3 - z1*z2"]);
    let a = match analyze(&spec) {
        Ok(a) => a,
        Err(e) => return outcome(false, format!("error: {e}")),
    };
    let r = &a.report;
    let e2 = grid(
        3,
        &[
            [1, 0, 0, 0, 0],
            [1, 0, 0, 0, 0],
            [1, 0, 0, 0, 0],
            [1, 0, 0, 0, 0],
            [0, 0, 1, 0, 0],
            [0, 0, 0, 0, 1],
            [0, 0, 0, 0, 1],
            [0, 0, 0, 0, 1],
        ],
    );
    let e3 = grid(
        3,
        &[
            [1, 0, 0, 0, 0],
            [1, 0, 0, 0, 0],
            [1, 0, 0, 0, 0],
            [1, 0, 0, 0, 0],
            [0, 0, 0, 0, 0],
            [0, 0, 0, 0, 0],
            [0, 0, 0, 0, 1],
            [0, 0, 0, 0, 1],
        ],
    );
    let pass = r.status == Status::Resolved
        && r.betti_r == [1, 1, 2, 2, 0, 0, 0, 0]
        && r.betti_c == [1, 0, 2, 0, 0, 0, 0]
        && r.e2 == e2
        && r.branch.pages.get(1) == Some(&e3)
        && r.ic_even_ranks[0] == 1
        && r.ic_even_ranks[1] == 1;
    outcome(
        pass,
        format!(
            "status {:?}, betti_R {:?}, betti_C {:?}, iC {:?}",
            r.status, r.betti_r, r.betti_c, r.ic_even_ranks
        ),
    )
}

fn criterion_2() -> Outcome {
    let spec = InputSpec::from_texts(2, &["z0^2 - z1^2", "2*z0*(z1 + z2)"]);
    let a = match analyze(&spec) {
        Ok(a) => a,
        Err(e) => return outcome(false, format!("error: {e}")),
    };
    let r = &a.report;
    let Some(pp) = a.profile.as_ref() else {
        return outcome(false, "not routed as a pencil");
    };
    let pass = r.status == Status::Resolved
        && r.betti_r == [2, 2, 1, 1, 0, 0]
        && r.betti_c == [2, 0, 1, 0, 0]
        && pp.det_form.is_zero()
        && pp.mu == 2
        && pp.nu == 2;
    outcome(
        pass,
        format!(
            "det = {}, mu = {}, nu = {}, betti_R {:?}, betti_C {:?}",
            pp.det_form, pp.mu, pp.nu, r.betti_r, r.betti_c
        ),
    )
}

fn sum_of_squares(count: usize) -> String {
    (0..count)
        .map(|k| format!("z{k}^2"))
        .collect::<Vec<_>>()
        .join(" + ")
}

fn criterion_3() -> Outcome {
    let mut checked = 0;
    for n in 1..=6 {
        for rho in 1..=n + 1 {
            let spec = InputSpec::from_texts(n, &[&sum_of_squares(rho)]);
            let got = match analyze(&spec) {
                Ok(a) if a.route == (Route::Single { rho }) => a.report.betti_c,
                Ok(a) => {
                    return outcome(false, format!("n={n} rho={rho}: routed as {:?}", a.route))
                }
                Err(e) => return outcome(false, format!("n={n} rho={rho}: {e}")),
            };
            let want = closed_form_single(n, rho).unwrap();
            if got != want {
                return outcome(
                    false,
                    format!("n={n} rho={rho}: got {got:?}, closed form {want:?}"),
                );
            }
            checked += 1;
        }
    }
    outcome(true, format!("{checked} (n, rho) pairs match"))
}

fn criterion_4() -> Outcome {
    let mut middles = Vec::new();
    for n in 2..=8 {
        let q1 = (1..=n)
            .map(|k| format!("{k}*z{k}^2"))
            .collect::<Vec<_>>()
            .join(" + ");
        let spec = InputSpec::from_texts(n, &[&sum_of_squares(n + 1), &q1]);
        let a = match analyze(&spec) {
            Ok(a) => a,
            Err(e) => return outcome(false, format!("n={n}: {e}")),
        };
        let class = a.profile.as_ref().map(|p| p.classification);
        if class != Some(Classification::CompleteIntersection) {
            return outcome(false, format!("n={n}: classified {class:?}"));
        }
        let want = closed_form_complete_intersection(n).unwrap();
        if a.report.betti_c != want || a.report.status != Status::Resolved {
            return outcome(
                false,
                format!("n={n}: got {:?}, closed form {want:?}", a.report.betti_c),
            );
        }
        let expected_middle = if n % 2 == 0 { n + 2 } else { n - 1 };
        if a.report.betti_c[n - 2] != expected_middle {
            return outcome(
                false,
                format!("n={n}: b_(n-2) = {}", a.report.betti_c[n - 2]),
            );
        }
        middles.push(a.report.betti_c[n - 2]);
    }
    outcome(true, format!("b_(n-2)(C) for n = 2..8: {middles:?}"))
}

fn diag_text(d: &[i64]) -> String {
    let terms: Vec<String> = d
        .iter()
        .enumerate()
        .filter(|(_, &v)| v != 0)
        .map(|(k, v)| format!("{v}*z{k}^2"))
        .collect();
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join(" + ")
    }
}

fn diag_matrix(d: &[i64]) -> ComplexSymMatrix {
    SymMatrix::diagonal(d.iter().map(|&v| gi(v, 0)).collect())
}

fn criterion_5() -> Outcome {
    let values = [-1i64, 0, 1, 2];
    let mut diagonals = Vec::new();
    for a in values {
        for b in values {
            for c in values {
                diagonals.push([a, b, c]);
            }
        }
    }
    // Permuting coordinates changes neither C nor the det form, so keep one
    // pencil per multiset of columns (a_k, b_k).
    let mut pairs = std::collections::BTreeSet::new();
    for d0 in &diagonals {
        for d1 in &diagonals {
            let mut cols: Vec<(i64, i64)> = (0..3).map(|k| (d0[k], d1[k])).collect();
            cols.sort_unstable();
            pairs.insert(cols);
        }
    }
    // usize::MAX marks an identically zero determinant
    let mut seen_roots = std::collections::BTreeSet::new();
    let (mut pencils, mut oracle_checks) = (0, 0);
    for cols in &pairs {
        let d0: Vec<i64> = cols.iter().map(|c| c.0).collect();
        let d1: Vec<i64> = cols.iter().map(|c| c.1).collect();
        let (m0, m1) = (diag_matrix(&d0), diag_matrix(&d1));
        let Ok(pencil) = Pencil::new(m0.clone(), m1.clone()) else {
            continue;
        };
        pencils += 1;
        let det = det_form(&pencil);
        let roots = if det.is_zero() {
            usize::MAX
        } else {
            bf_distinct_root_count(&det).unwrap()
        };
        seen_roots.insert(roots);
        let spec = InputSpec::from_texts(2, &[&diag_text(&d0), &diag_text(&d1)]);
        let a = match analyze(&spec) {
            Ok(a) => a,
            Err(e) => return outcome(false, format!("{d0:?} {d1:?}: {e}")),
        };
        let r = &a.report;
        let four = r.candidates.iter().any(|c| c.betti_c[0] == 4);
        if roots == 3 && (r.status != Status::Resolved || r.betti_c[0] != 4) {
            return outcome(
                false,
                format!("{d0:?} {d1:?}: three roots but b0 {:?}", r.betti_c),
            );
        }
        if roots != 3 && four {
            return outcome(false, format!("{d0:?} {d1:?}: b0 = 4 with {roots} roots"));
        }
        if a.route != Route::Pencil || r.status != Status::Resolved {
            continue;
        }
        let pc = point_count_cp2(&m0, &m1, ORACLE_SEED).unwrap();
        if let (Count::Finite(_), true) = (pc.value, pc.certified) {
            oracle_checks += 1;
            if !cross_check(r, a.profile.as_ref(), &pc).unwrap() {
                return outcome(
                    false,
                    format!(
                        "{d0:?} {d1:?}: oracle {} vs betti_C {:?}",
                        pc.value, r.betti_c
                    ),
                );
            }
        }
    }
    let covered = [1, 2, 3, usize::MAX].iter().all(|k| seen_roots.contains(k));
    outcome(
        covered,
        format!(
            "{pencils} pencils, {oracle_checks} oracle agreements, root counts covered: {covered}"
        ),
    )
}

fn criterion_6() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED_6);
    let entry = |rng: &mut ChaCha8Rng| {
        // sparse so that ranks vary
        if rng.gen_bool(0.3) {
            return gi(0, 0);
        }
        let den: i64 = rng.gen_range(1..=4);
        let r = |v: i64| Rational::new(v.into(), den.into());
        GaussianRational::new(r(rng.gen_range(-5..=5)), r(rng.gen_range(-5..=5)))
    };
    let mut ranks = std::collections::BTreeSet::new();
    for k in 0..MATRICES_6 {
        let size = rng.gen_range(2..=6);
        let mut q = ComplexSymMatrix::zeros(size);
        for i in 0..size {
            for j in i..size {
                q.set(i, j, entry(&mut rng));
            }
        }
        let real = realify_a(&q);
        let s = inertia(&real);
        let rc = rank_complex(&q);
        ranks.insert((size, rc));
        let rr = rank_real(&real);
        if !(2 * s.positive == rr && rr == 2 * rc && s.positive == s.negative) {
            return outcome(
                false,
                format!(
                    "matrix {k}: i+ = {}, i- = {}, rk_R = {rr}, rk_C = {rc}",
                    s.positive, s.negative
                ),
            );
        }
    }
    outcome(
        true,
        format!("{MATRICES_6} matrices, {} (size, rank) pairs", ranks.len()),
    )
}

fn criterion_7() -> Outcome {
    let (q0, q1) = ("z0^2 - z1^2", "z0^2 + z1^2");
    let spec = InputSpec::from_texts(2, &[q0, q1]);
    let a = match analyze(&spec) {
        Ok(a) => a,
        Err(e) => return outcome(false, format!("error: {e}")),
    };
    let r = &a.report;
    // C = {z0 = z1 = 0} is the single point [0, 0, 1]
    let truth_listed = r.candidates.iter().any(|c| c.betti_c == [1, 0, 0, 0, 0]);
    let code = run(&spec, RunCommand::Analyze)
        .map(|o| o.exit_code)
        .unwrap_or(-1);
    let cli = Command::new(env!("CARGO_BIN_EXE_quadbetti"))
        .args(["analyze", "--q0", q0, "--q1", q1, "--n", "2"])
        .output()
        .map(|o| o.status.code())
        .ok()
        .flatten();
    let pass = r.status == Status::Ambiguous
        && r.candidates.len() >= 2
        && truth_listed
        && code == 2
        && cli == Some(2);
    outcome(
        pass,
        format!(
            "{} candidates, true vector listed: {truth_listed}, exit codes run={code} cli={cli:?}",
            r.candidates.len()
        ),
    )
}

type Criterion = (usize, &'static str, Duration, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 7] = [
        (1, "skew cubic and line", LIMIT_1, criterion_1),
        (2, "constant-rank pencil", LIMIT_2, criterion_2),
        (3, "single quadric closed form", LIMIT_3, criterion_3),
        (4, "complete intersections", LIMIT_4, criterion_4),
        (5, "plane four-point criterion", LIMIT_5, criterion_5),
        (6, "realification identities", LIMIT_6, criterion_6),
        (7, "honest ambiguity", LIMIT_7, criterion_7),
    ];
    let mut failed = Vec::new();
    for (id, name, limit, check) in criteria {
        let o = timed(limit, check);
        let verdict = if o.pass { "PASS" } else { "FAIL" };
        println!("criterion {id} ({name}): {verdict} - {}", o.detail);
        if !o.pass {
            if let Some((_, why)) = KNOWN_FAILURES.iter().find(|(k, _)| *k == id) {
                println!("  known failure: {why}");
            }
            failed.push(id);
        }
    }
    let known: Vec<usize> = KNOWN_FAILURES.iter().map(|(k, _)| *k).collect();
    assert_eq!(
        failed, known,
        "failing criteria differ from the known failures"
    );
}
