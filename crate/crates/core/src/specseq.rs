//! Z2 spectral sequence for a set `R ⊂ RP^{2n+1}` cut by realified quadrics.
//!
//! Tables are indexed `(i, j)` with column `i` and row `j`, `0 <= j <= 2n+1`.
//! The differential `d_r` maps `(i, j)` to `(i + r, j - r + 1)`, and the limit
//! page computes homology: `b_k(R) = sum_{i+j = 2n+1-k} dim E_inf^{i,j}`.
//!
//! The engine tracks only dimensions and ranks. Differentials with a known
//! formula get their rank from it; every other differential between two
//! nonzero entries is enumerated, and a branch survives only if its limit
//! page satisfies the column-zero constraint and yields nonnegative Betti
//! numbers for the complex set.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pencil::PencilProfile;

/// Dimension grid of one page.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct E2Table {
    n: usize,
    columns: usize,
    /// `entries[j][i]`
    entries: Vec<Vec<usize>>,
}

impl E2Table {
    pub fn new(n: usize, columns: usize) -> Self {
        E2Table {
            n,
            columns,
            entries: vec![vec![0; columns]; 2 * n + 2],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rows(&self) -> usize {
        2 * self.n + 2
    }

    pub fn columns(&self) -> usize {
        self.columns
    }

    /// Zero outside the grid.
    pub fn get(&self, i: usize, j: usize) -> usize {
        self.entries
            .get(j)
            .and_then(|row| row.get(i))
            .copied()
            .unwrap_or(0)
    }

    pub fn set(&mut self, i: usize, j: usize, value: usize) {
        self.entries[j][i] = value;
    }

    pub fn column(&self, i: usize) -> Vec<usize> {
        (0..self.rows()).map(|j| self.get(i, j)).collect()
    }

    /// Row-major rows, `j` ascending.
    pub fn row_major(&self) -> &[Vec<usize>] {
        &self.entries
    }

    pub fn from_rows(n: usize, entries: Vec<Vec<usize>>) -> Result<Self> {
        if entries.len() != 2 * n + 2 {
            return Err(Error::DimensionMismatch {
                expected: 2 * n + 2,
                found: entries.len(),
            });
        }
        let columns = entries.first().map_or(0, |r| r.len());
        if entries.iter().any(|r| r.len() != columns) {
            return Err(Error::Input("ragged table".into()));
        }
        Ok(E2Table {
            n,
            columns,
            entries,
        })
    }
}

impl fmt::Display for E2Table {
    /// Row `j` descending, column `i` ascending.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let width = self
            .entries
            .iter()
            .flatten()
            .map(|v| v.to_string().len())
            .max()
            .unwrap_or(1);
        let label = (self.rows() - 1).to_string().len();
        write!(f, "{:>label$} |", "j")?;
        for i in 0..self.columns {
            write!(f, " {:>width$}", i)?;
        }
        writeln!(f)?;
        for j in (0..self.rows()).rev() {
            write!(f, "{:>label$} |", j)?;
            for i in 0..self.columns {
                write!(f, " {:>width$}", self.get(i, j))?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    Formula,
    ForcedZero,
    Enumerated,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DifferentialAssignment {
    pub page: usize,
    /// `(i, j)` of the source entry.
    pub source: (usize, usize),
    /// `None` only for an enumerated differential that has not been chosen yet.
    pub rank: Option<usize>,
    pub provenance: Provenance,
}

impl DifferentialAssignment {
    pub fn target(&self) -> Option<(usize, usize)> {
        target_of(self.page, self.source)
    }
}

fn target_of(page: usize, (i, j): (usize, usize)) -> Option<(usize, usize)> {
    (j + 1 >= page).then(|| (i + page, j + 1 - page))
}

/// Single quadric of rank `rho`: column 0 from row `rho` up, column 2 below it.
pub fn e2_single(n: usize, rho: usize) -> Result<E2Table> {
    if rho == 0 || rho > n + 1 {
        return Err(Error::RankParameter { n, rho });
    }
    let mut t = E2Table::new(n, 3);
    for j in 0..t.rows() {
        if j >= rho {
            t.set(0, j, 1);
        } else {
            t.set(2, j, 1);
        }
    }
    Ok(t)
}

/// Zero quadric: `R` is all of `RP^{2n+1}`.
fn e2_ambient(n: usize) -> E2Table {
    let mut t = E2Table::new(n, 3);
    for j in 0..t.rows() {
        t.set(0, j, 1);
    }
    t
}

pub fn e2_pencil(pp: &PencilProfile) -> E2Table {
    let mut t = E2Table::new(pp.n, 5);
    for j in 0..t.rows() {
        if j >= pp.mu {
            t.set(0, j, 1);
        } else if j >= pp.nu {
            let s = pp.sigma(j + 1);
            t.set(2, j, s);
            t.set(3, j, s - 1);
        } else {
            t.set(4, j, 1);
        }
    }
    t
}

/// Second-page differentials of a pencil with nonzero source.
///
/// `d2^{2,nu}` sums coordinates times `nu mod 2`; `d2^{0,mu}` for `mu = n+1`
/// sends 1 to the vector of multiplicity parities. `d2^{0,mu}` with `mu < n+1`
/// has no formula and is left `Enumerated`.
pub fn d2_ranks(pp: &PencilProfile) -> Vec<DifferentialAssignment> {
    let table = e2_pencil(pp);
    let mut out = Vec::new();
    for j in 0..table.rows() {
        for i in 0..table.columns() {
            if table.get(i, j) == 0 {
                continue;
            }
            let source = (i, j);
            let Some((ti, tj)) = target_of(2, source) else {
                continue;
            };
            let nonzero = ti < table.columns() && table.get(ti, tj) > 0;
            let (rank, provenance) = if !nonzero {
                (Some(0), Provenance::ForcedZero)
            } else if source == (0, pp.mu) {
                if pp.mu == pp.n + 1 {
                    (
                        Some(pp.exists_odd_multiplicity as usize),
                        Provenance::Formula,
                    )
                } else {
                    (None, Provenance::Enumerated)
                }
            } else if i == 2 && j == pp.nu {
                (Some(pp.nu % 2), Provenance::Formula)
            } else {
                (None, Provenance::Enumerated)
            };
            out.push(DifferentialAssignment {
                page: 2,
                source,
                rank,
                provenance,
            });
        }
    }
    out
}

fn d2_single(rho: usize) -> DifferentialAssignment {
    DifferentialAssignment {
        page: 2,
        source: (0, rho),
        rank: Some(rho % 2),
        provenance: Provenance::Formula,
    }
}

/// Next page from rank-valued differentials; every unlisted differential is zero.
///
/// `dim E_{r+1}(i,j) = dim E_r(i,j) - rank(out) - rank(in)`, which needs
/// `rank(in) + rank(out) <= dim` at every entry.
pub fn turn_page(
    table: &E2Table,
    page: usize,
    assignments: &[DifferentialAssignment],
) -> Result<E2Table> {
    let mut used = BTreeMap::<(usize, usize), usize>::new();
    for a in assignments.iter().filter(|a| a.page == page) {
        let rank = a.rank.ok_or_else(|| {
            Error::Input(format!("d_{page} at {:?} has no rank assigned", a.source))
        })?;
        if rank == 0 {
            continue;
        }
        let (i, j) = a.source;
        let violation = Error::RankBound { page, i, j, rank };
        let (ti, tj) = a.target().ok_or(violation.clone())?;
        if ti >= table.columns() {
            return Err(violation);
        }
        *used.entry(a.source).or_default() += rank;
        *used.entry((ti, tj)).or_default() += rank;
        for &(ci, cj) in &[(i, j), (ti, tj)] {
            if used[&(ci, cj)] > table.get(ci, cj) {
                return Err(violation);
            }
        }
    }
    let mut next = table.clone();
    for (&(i, j), &r) in &used {
        next.set(i, j, table.get(i, j) - r);
    }
    Ok(next)
}

/// `b_k(R)` from a limit page, `k = 0..=2n+1`.
pub fn betti_r_from_table(table: &E2Table) -> Vec<usize> {
    let top = table.rows() - 1;
    let mut b = vec![0; table.rows()];
    for j in 0..table.rows() {
        for i in 0..table.columns() {
            let degree = i + j;
            if degree <= top {
                b[top - degree] += table.get(i, j);
            }
        }
    }
    b
}

/// `b_j(C) = sum_{k=0..j} (-1)^k b_{j-k}(R)` for `j = 0..=2n`; may be negative for
/// inconsistent input.
pub fn betti_c_from_r(betti_r: &[usize]) -> Vec<i64> {
    let len = betti_r.len().saturating_sub(1);
    (0..len)
        .map(|j| {
            (0..=j)
                .map(|k| {
                    let v = betti_r[j - k] as i64;
                    if k % 2 == 0 {
                        v
                    } else {
                        -v
                    }
                })
                .sum()
        })
        .collect()
}

/// `rk(i_C^*)_{2k} = dim E_inf^{0, 2n+1-2k}`, `k = 0..=n`.
pub fn ic_even_ranks(e_inf: &E2Table) -> Vec<usize> {
    let top = e_inf.rows() - 1;
    (0..=e_inf.n()).map(|k| e_inf.get(0, top - 2 * k)).collect()
}

/// Column zero of a limit page must be a block of ones hanging from the top
/// row, of even length, with zeros below.
pub fn column_zero_admissible(e_inf: &E2Table) -> bool {
    let col = e_inf.column(0);
    let block = col.iter().rev().take_while(|&&v| v == 1).count();
    let rest_zero = col[..col.len() - block].iter().all(|&v| v == 0);
    rest_zero && block % 2 == 0
}

#[derive(Clone, Debug, PartialEq)]
pub enum SpectralInput {
    /// One quadric of complex rank `rho >= 1` in CP^n.
    Single {
        n: usize,
        rho: usize,
    },
    Pencil(PencilProfile),
    /// The zero quadric: `C = CP^n`.
    Ambient {
        n: usize,
    },
}

impl SpectralInput {
    pub fn n(&self) -> usize {
        match self {
            SpectralInput::Single { n, .. } | SpectralInput::Ambient { n } => *n,
            SpectralInput::Pencil(pp) => pp.n,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SolveOptions {
    /// Require `b_0(C) >= 1`. `None` enables it for pencils with `n >= 2`,
    /// where two quadrics always meet.
    pub nonempty: Option<bool>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Resolved,
    Ambiguous,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Candidate {
    #[serde(rename = "betti_R")]
    pub betti_r: Vec<usize>,
    #[serde(rename = "betti_C")]
    pub betti_c: Vec<usize>,
}

/// One surviving assignment of ranks, with every page it produced.
#[derive(Clone, Debug, PartialEq)]
pub struct Branch {
    /// `E_2, E_3, ...` up to and including the limit page.
    pub pages: Vec<E2Table>,
    /// Nontrivial differentials in page order.
    pub assignments: Vec<DifferentialAssignment>,
    pub candidate: Candidate,
}

impl Branch {
    pub fn e_inf(&self) -> &E2Table {
        self.pages.last().expect("branch has at least one page")
    }

    fn rank_of(&self, page: usize, source: (usize, usize)) -> usize {
        self.assignments
            .iter()
            .find(|a| a.page == page && a.source == source)
            .and_then(|a| a.rank)
            .unwrap_or(0)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BettiReport {
    pub n: usize,
    /// For an ambiguous report these are the first candidate's vectors.
    pub betti_r: Vec<usize>,
    pub betti_c: Vec<usize>,
    pub ic_even_ranks: Vec<usize>,
    pub status: Status,
    /// Every surviving `(betti_r, betti_c)`, sorted.
    pub candidates: Vec<Candidate>,
    /// Enumerated differentials `(page, source)` whose rank differs between candidates.
    pub distinguishing: Vec<(usize, (usize, usize))>,
    pub e2: E2Table,
    pub e_inf: E2Table,
    /// The reported branch (first in sorted order).
    pub branch: Branch,
    pub branch_count: usize,
    pub notes: Vec<String>,
}

struct Solver {
    n: usize,
    columns: usize,
    formulas: Vec<DifferentialAssignment>,
    nonempty: bool,
}

impl Solver {
    fn admissible(&self, e_inf: &E2Table) -> Option<Candidate> {
        if !column_zero_admissible(e_inf) {
            return None;
        }
        let betti_r = betti_r_from_table(e_inf);
        let signed = betti_c_from_r(&betti_r);
        if signed.iter().any(|&b| b < 0) {
            return None;
        }
        let betti_c: Vec<usize> = signed.into_iter().map(|b| b as usize).collect();
        if self.nonempty && betti_c.first().copied().unwrap_or(0) == 0 {
            return None;
        }
        Some(Candidate { betti_r, betti_c })
    }

    fn explore(
        &self,
        pages: Vec<E2Table>,
        path: Vec<DifferentialAssignment>,
        out: &mut Vec<Branch>,
    ) -> Result<()> {
        let table = pages.last().expect("nonempty page list");
        let page = pages.len() + 1;
        if page >= self.columns {
            if let Some(candidate) = self.admissible(table) {
                out.push(Branch {
                    pages,
                    assignments: path,
                    candidate,
                });
            }
            return Ok(());
        }
        let mut fixed = Vec::new();
        let mut open: Vec<((usize, usize), usize)> = Vec::new();
        for j in 0..table.rows() {
            for i in 0..self.columns {
                let source = (i, j);
                let Some((ti, tj)) = target_of(page, source) else {
                    continue;
                };
                if ti >= self.columns {
                    continue;
                }
                let bound = table.get(i, j).min(table.get(ti, tj));
                if bound == 0 {
                    continue;
                }
                let formula = self
                    .formulas
                    .iter()
                    .find(|f| f.page == page && f.source == source && f.rank.is_some());
                match formula {
                    Some(f) => fixed.push(f.clone()),
                    None => open.push((source, bound)),
                }
            }
        }
        if open.is_empty() {
            let next = turn_page(table, page, &fixed)?;
            let mut pages = pages;
            pages.push(next);
            let mut path = path;
            path.extend(fixed);
            return self.explore(pages, path, out);
        }
        let mut choice = vec![0usize; open.len()];
        loop {
            let mut step = fixed.clone();
            step.extend(open.iter().zip(&choice).map(|(&(source, _), &rank)| {
                DifferentialAssignment {
                    page,
                    source,
                    rank: Some(rank),
                    provenance: Provenance::Enumerated,
                }
            }));
            match turn_page(table, page, &step) {
                Ok(next) => {
                    let mut next_pages = pages.clone();
                    next_pages.push(next);
                    let mut next_path = path.clone();
                    next_path.extend(step);
                    self.explore(next_pages, next_path, out)?;
                }
                // Combinations with im(d_in) not fitting into ker(d_out) are unrealizable.
                Err(Error::RankBound { .. }) => {}
                Err(e) => return Err(e),
            }
            // odometer over 0..=bound for each open differential
            let mut k = 0;
            loop {
                if k == open.len() {
                    return Ok(());
                }
                if choice[k] < open[k].1 {
                    choice[k] += 1;
                    break;
                }
                choice[k] = 0;
                k += 1;
            }
        }
    }
}

/// Runs all pages, enumerating differentials without a formula, and reports
/// the Betti numbers of `R` and `C` (or every surviving candidate).
pub fn solve(input: &SpectralInput, options: &SolveOptions) -> Result<BettiReport> {
    let n = input.n();
    let (e2, formulas, default_nonempty) = match input {
        SpectralInput::Single { n, rho } => (e2_single(*n, *rho)?, vec![d2_single(*rho)], false),
        SpectralInput::Ambient { n } => (e2_ambient(*n), Vec::new(), false),
        SpectralInput::Pencil(pp) => {
            let formulas: Vec<_> = d2_ranks(pp)
                .into_iter()
                .filter(|d| d.provenance == Provenance::Formula)
                .collect();
            (e2_pencil(pp), formulas, pp.n >= 2)
        }
    };
    let solver = Solver {
        n,
        columns: e2.columns(),
        formulas,
        nonempty: options.nonempty.unwrap_or(default_nonempty),
    };
    let mut branches = Vec::new();
    solver.explore(vec![e2.clone()], Vec::new(), &mut branches)?;
    if branches.is_empty() {
        return Err(Error::InconsistentProfile);
    }
    branches.sort_by(|a, b| {
        a.candidate.cmp(&b.candidate).then_with(|| {
            let ra = a.assignments.iter().map(|d| d.rank);
            let rb = b.assignments.iter().map(|d| d.rank);
            ra.cmp(rb)
        })
    });
    let candidates: Vec<Candidate> = branches
        .iter()
        .map(|b| b.candidate.clone())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();

    let mut keys = BTreeSet::new();
    for b in &branches {
        for d in b
            .assignments
            .iter()
            .filter(|d| d.provenance == Provenance::Enumerated)
        {
            keys.insert((d.page, d.source));
        }
    }
    let distinguishing: Vec<_> = keys
        .into_iter()
        .filter(|&(page, source)| {
            branches.iter().any(|x| {
                branches.iter().any(|y| {
                    x.candidate != y.candidate && x.rank_of(page, source) != y.rank_of(page, source)
                })
            })
        })
        .collect();

    let status = if candidates.len() == 1 {
        Status::Resolved
    } else {
        Status::Ambiguous
    };
    let branch_count = branches.len();
    let chosen = branches.swap_remove(0);
    let mut notes = Vec::new();
    if branch_count > 1 && status == Status::Resolved {
        notes.push(format!(
            "{branch_count} rank assignments survive and agree on the Betti numbers"
        ));
    }
    if status == Status::Ambiguous {
        notes.push(format!(
            "{} candidate Betti vectors survive; the reported vectors are the first candidate",
            candidates.len()
        ));
    }
    debug_assert_eq!(solver.n, n);
    Ok(BettiReport {
        n,
        betti_r: chosen.candidate.betti_r.clone(),
        betti_c: chosen.candidate.betti_c.clone(),
        ic_even_ranks: ic_even_ranks(chosen.e_inf()),
        status,
        candidates,
        distinguishing,
        e2,
        e_inf: chosen.e_inf().clone(),
        branch: chosen,
        branch_count,
        notes,
    })
}

/// Betti numbers of a rank-`rho` quadric hypersurface in CP^n, `j = 0..=2n`.
pub fn closed_form_single(n: usize, rho: usize) -> Result<Vec<usize>> {
    if rho == 0 || rho > n + 1 {
        return Err(Error::RankParameter { n, rho });
    }
    let mut b = vec![0; 2 * n + 1];
    for j in (0..=(2 * n).saturating_sub(2)).step_by(2) {
        if n >= 1 {
            b[j] = 1;
        }
    }
    if rho.is_multiple_of(2) {
        b[2 * n - rho] = 2;
    }
    Ok(b)
}

/// Betti numbers of a smooth complete intersection of two quadrics in CP^n,
/// `j = 0..=2n`; the middle one is `n+2` (`n` even) or `n-1` (`n` odd).
pub fn closed_form_complete_intersection(n: usize) -> Result<Vec<usize>> {
    if n < 2 {
        return Err(Error::Input(format!(
            "complete intersection of two quadrics needs n >= 2 (got {n})"
        )));
    }
    let mut b = vec![0; 2 * n + 1];
    for j in (0..=2 * n - 4).step_by(2) {
        b[j] = 1;
    }
    b[n - 2] = if n.is_multiple_of(2) { n + 2 } else { n - 1 };
    Ok(b)
}
