//! Routing an [`InputSpec`] through the pipeline, and the documents printed
//! by the CLI.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactnum::BinaryForm;
use crate::oracle::{cross_check, point_count_cp2, PointCount};
use crate::pencil::{profile, Pencil, PencilProfile};
use crate::qparse::input::{Format, InputSpec};
use crate::specseq::{
    solve, BettiReport, Candidate, DifferentialAssignment, E2Table, SolveOptions, SpectralInput,
    Status,
};
use crate::symlin::{rank_complex, ComplexSymMatrix};

pub const REPORT_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum Route {
    Pencil,
    Single {
        rho: usize,
    },
    /// Every quadric is zero, so `C = CP^n`.
    Ambient,
}

/// Everything computed for one input.
#[derive(Clone, Debug, PartialEq)]
pub struct Analysis {
    pub n: usize,
    pub route: Route,
    pub profile: Option<PencilProfile>,
    pub report: BettiReport,
    /// The nonzero input quadrics.
    pub quadrics: Vec<ComplexSymMatrix>,
    pub notes: Vec<String>,
}

struct Routed {
    route: Route,
    profile: Option<PencilProfile>,
    input: SpectralInput,
    quadrics: Vec<ComplexSymMatrix>,
    notes: Vec<String>,
}

fn route(spec: &InputSpec) -> Result<Routed> {
    let matrices = spec.matrices()?;
    let quadrics: Vec<ComplexSymMatrix> = matrices.iter().flatten().cloned().collect();
    let n = spec.n;
    let mut notes = Vec::new();
    if quadrics.len() < matrices.len() {
        notes.push("identically zero quadric dropped".to_string());
    }
    let single = |q: &ComplexSymMatrix| {
        let rho = rank_complex(q);
        (
            Route::Single { rho },
            None,
            SpectralInput::Single { n, rho },
        )
    };
    let (route, profile, input) = match quadrics.as_slice() {
        [] => (Route::Ambient, None, SpectralInput::Ambient { n }),
        [q] => single(q),
        [q0, q1] => {
            let pencil = Pencil::with_max_n(q0.clone(), q1.clone(), spec.flags.max_n)?;
            if pencil.is_dependent() {
                notes.push("quadrics are linearly dependent; solved as a single quadric".into());
                single(pencil.representative())
            } else {
                let pp = profile(&pencil)?;
                (Route::Pencil, Some(pp.clone()), SpectralInput::Pencil(pp))
            }
        }
        _ => unreachable!("validated to at most two quadrics"),
    };
    Ok(Routed {
        route,
        profile,
        input,
        quadrics,
        notes,
    })
}

/// Full pipeline: parse, stratify, run the spectral sequence.
pub fn analyze(spec: &InputSpec) -> Result<Analysis> {
    let routed = route(spec)?;
    let options = SolveOptions {
        nonempty: spec.flags.assume_nonempty,
    };
    let report = solve(&routed.input, &options)?;
    let mut notes = routed.notes;
    notes.extend(report.notes.iter().cloned());
    Ok(Analysis {
        n: spec.n,
        route: routed.route,
        profile: routed.profile,
        report,
        quadrics: routed.quadrics,
        notes,
    })
}

fn classification_label(route: Route, profile: Option<&PencilProfile>) -> String {
    match (route, profile) {
        (Route::Pencil, Some(pp)) => pp.classification.to_string(),
        (Route::Single { .. }, _) => "single_quadric".into(),
        _ => "ambient".into(),
    }
}

fn ranks_of(
    route: Route,
    profile: Option<&PencilProfile>,
) -> (usize, usize, BTreeMap<usize, usize>) {
    match (route, profile) {
        (Route::Pencil, Some(pp)) => (pp.mu, pp.nu, pp.sigma.clone()),
        (Route::Single { rho }, _) => (rho, rho, BTreeMap::new()),
        _ => (0, 0, BTreeMap::new()),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SquarefreeFactor {
    pub factor: String,
    pub multiplicity: usize,
}

/// Output of the `profile` subcommand: the rank stratification only.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProfileDocument {
    pub version: u32,
    pub n: usize,
    pub route: Route,
    pub classification: String,
    pub mu: usize,
    pub nu: usize,
    pub sigma: BTreeMap<usize, usize>,
    pub det_form: String,
    pub squarefree: Vec<SquarefreeFactor>,
    pub exists_odd_multiplicity: bool,
    pub notes: Vec<String>,
}

pub fn stratify(spec: &InputSpec) -> Result<ProfileDocument> {
    let routed = route(spec)?;
    let pp = routed.profile.as_ref();
    let (mu, nu, sigma) = ranks_of(routed.route, pp);
    let det = pp.map_or_else(BinaryForm::zero, |p| p.det_form.clone());
    Ok(ProfileDocument {
        version: REPORT_VERSION,
        n: spec.n,
        route: routed.route,
        classification: classification_label(routed.route, pp),
        mu,
        nu,
        sigma,
        det_form: det.to_string(),
        squarefree: pp
            .map(|p| {
                p.sqfree_decomp
                    .iter()
                    .map(|(f, m)| SquarefreeFactor {
                        factor: f.to_string(),
                        multiplicity: *m,
                    })
                    .collect()
            })
            .unwrap_or_default(),
        exists_odd_multiplicity: pp.is_some_and(|p| p.exists_odd_multiplicity),
        notes: routed.notes,
    })
}

impl ProfileDocument {
    pub fn render_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "n = {}", self.n);
        let _ = writeln!(s, "classification: {}", self.classification);
        let _ = writeln!(s, "mu = {}, nu = {}", self.mu, self.nu);
        if !self.sigma.is_empty() {
            let _ = writeln!(s, "sigma: {}", format_sigma(&self.sigma));
        }
        let _ = writeln!(s, "det form: {}", self.det_form);
        for f in &self.squarefree {
            let _ = writeln!(s, "  ({})^{}", f.factor, f.multiplicity);
        }
        let _ = writeln!(s, "odd multiplicity: {}", self.exists_odd_multiplicity);
        write_notes(&mut s, &self.notes);
        s
    }
}

/// Versioned report; re-reading the JSON reproduces every field.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub version: u32,
    pub n: usize,
    pub classification: String,
    pub mu: usize,
    pub nu: usize,
    pub sigma: BTreeMap<usize, usize>,
    pub e2: E2Table,
    pub e_inf: E2Table,
    #[serde(rename = "betti_R")]
    pub betti_r: Vec<usize>,
    #[serde(rename = "betti_C")]
    pub betti_c: Vec<usize>,
    #[serde(rename = "iC_even_ranks")]
    pub ic_even_ranks: Vec<usize>,
    pub status: Status,
    pub candidates: Vec<Candidate>,
    pub notes: Vec<String>,
    /// Enumerated differentials `(page, (i, j))` whose rank separates candidates.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub distinguishing: Vec<(usize, (usize, usize))>,
    /// `E_2` through the limit page of the reported branch.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pages: Option<Vec<E2Table>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub differentials: Option<Vec<DifferentialAssignment>>,
}

impl ReportDocument {
    pub fn from_analysis(a: &Analysis, dump_pages: bool) -> Self {
        let (mu, nu, sigma) = ranks_of(a.route, a.profile.as_ref());
        let r = &a.report;
        ReportDocument {
            version: REPORT_VERSION,
            n: a.n,
            classification: classification_label(a.route, a.profile.as_ref()),
            mu,
            nu,
            sigma,
            e2: r.e2.clone(),
            e_inf: r.e_inf.clone(),
            betti_r: r.betti_r.clone(),
            betti_c: r.betti_c.clone(),
            ic_even_ranks: r.ic_even_ranks.clone(),
            status: r.status,
            candidates: r.candidates.clone(),
            notes: a.notes.clone(),
            distinguishing: r.distinguishing.clone(),
            pages: dump_pages.then(|| r.branch.pages.clone()),
            differentials: dump_pages.then(|| r.branch.assignments.clone()),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Input(e.to_string()))
    }

    pub fn render_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "n = {}", self.n);
        let _ = writeln!(s, "classification: {}", self.classification);
        let _ = writeln!(s, "mu = {}, nu = {}", self.mu, self.nu);
        if !self.sigma.is_empty() {
            let _ = writeln!(s, "sigma: {}", format_sigma(&self.sigma));
        }
        let _ = writeln!(s, "status: {}", status_label(self.status));
        match &self.pages {
            Some(pages) => {
                for (k, page) in pages.iter().enumerate() {
                    let r = k + 2;
                    if k + 1 == pages.len() {
                        let _ = writeln!(s, "\nE_{r} = E_inf");
                    } else {
                        let _ = writeln!(s, "\nE_{r}");
                    }
                    let _ = write!(s, "{page}");
                    for d in self.differentials.iter().flatten().filter(|d| d.page == r) {
                        let _ = writeln!(s, "  {}", format_differential(d));
                    }
                }
            }
            None => {
                let _ = write!(s, "\nE_2\n{}", self.e2);
                let _ = write!(s, "\nE_inf\n{}", self.e_inf);
            }
        }
        let _ = writeln!(s);
        let _ = writeln!(s, "betti_R: {}", join(&self.betti_r));
        let _ = writeln!(s, "betti_C: {}", join(&self.betti_c));
        let _ = writeln!(s, "iC_even_ranks: {}", join(&self.ic_even_ranks));
        if self.status == Status::Ambiguous {
            let _ = writeln!(s, "candidates:");
            for c in &self.candidates {
                let _ = writeln!(
                    s,
                    "  betti_R = ({})  betti_C = ({})",
                    join(&c.betti_r),
                    join(&c.betti_c)
                );
            }
            for (page, (i, j)) in &self.distinguishing {
                let _ = writeln!(s, "  undetermined: d_{page}^{{{i},{j}}}");
            }
        }
        write_notes(&mut s, &self.notes);
        s
    }
}

/// Output of the `oracle` subcommand.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleDocument {
    pub version: u32,
    pub n: usize,
    pub point_count: Option<PointCount>,
    pub status: Status,
    #[serde(rename = "betti_C")]
    pub betti_c: Vec<usize>,
    /// `None` when the comparison does not apply (infinite, uncertified or ambiguous).
    pub cross_check: Option<bool>,
    pub notes: Vec<String>,
}

pub fn oracle_check(spec: &InputSpec) -> Result<OracleDocument> {
    if spec.n != 2 {
        return Err(Error::OracleDimension(spec.n));
    }
    let analysis = analyze(spec)?;
    let mut notes = analysis.notes.clone();
    let (point_count, cross) = if analysis.route == Route::Pencil {
        let pc = point_count_cp2(
            &analysis.quadrics[0],
            &analysis.quadrics[1],
            spec.flags.seed,
        )?;
        let cross = match cross_check(&analysis.report, analysis.profile.as_ref(), &pc) {
            Ok(v) => Some(v),
            Err(Error::Precondition(why)) => {
                notes.push(format!("cross-check skipped: {why}"));
                None
            }
            Err(e) => return Err(e),
        };
        (Some(pc), cross)
    } else {
        notes.push("not a pencil of two independent quadrics; oracle not invoked".into());
        (None, None)
    };
    Ok(OracleDocument {
        version: REPORT_VERSION,
        n: spec.n,
        point_count,
        status: analysis.report.status,
        betti_c: analysis.report.betti_c.clone(),
        cross_check: cross,
        notes,
    })
}

impl OracleDocument {
    pub fn render_text(&self) -> String {
        let mut s = String::new();
        match &self.point_count {
            Some(pc) => {
                let _ = writeln!(
                    s,
                    "points: {} ({})",
                    pc.value,
                    if pc.certified {
                        "certified"
                    } else {
                        "uncertified"
                    }
                );
            }
            None => {
                let _ = writeln!(s, "points: not computed");
            }
        }
        let _ = writeln!(s, "status: {}", status_label(self.status));
        let _ = writeln!(s, "betti_C: {}", join(&self.betti_c));
        let verdict = match self.cross_check {
            Some(true) => "agree",
            Some(false) => "DISAGREE",
            None => "not applicable",
        };
        let _ = writeln!(s, "cross-check: {verdict}");
        write_notes(&mut s, &self.notes);
        s
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    /// Full pipeline.
    Analyze,
    /// Stratification only.
    Profile,
    /// Every page of the reported branch.
    E2,
    /// Point-count cross-check in CP^2.
    Oracle,
}

/// Rendered output and process exit code: 0 resolved, 2 ambiguous, 1 oracle disagreement.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Output {
    pub text: String,
    pub exit_code: i32,
}

fn emit<T: Serialize>(format: Format, doc: &T, text: impl FnOnce() -> String) -> String {
    match format {
        Format::Json => serde_json::to_string_pretty(doc).expect("document serializes") + "\n",
        Format::Text => text(),
    }
}

pub fn run(spec: &InputSpec, command: Command) -> Result<Output> {
    let format = spec.flags.format;
    match command {
        Command::Analyze | Command::E2 => {
            let analysis = analyze(spec)?;
            let dump = spec.flags.dump_pages || command == Command::E2;
            let doc = ReportDocument::from_analysis(&analysis, dump);
            let exit_code = match doc.status {
                Status::Resolved => 0,
                Status::Ambiguous => 2,
            };
            Ok(Output {
                text: emit(format, &doc, || doc.render_text()),
                exit_code,
            })
        }
        Command::Profile => {
            let doc = stratify(spec)?;
            Ok(Output {
                text: emit(format, &doc, || doc.render_text()),
                exit_code: 0,
            })
        }
        Command::Oracle => {
            let doc = oracle_check(spec)?;
            let exit_code = if doc.cross_check == Some(false) { 1 } else { 0 };
            Ok(Output {
                text: emit(format, &doc, || doc.render_text()),
                exit_code,
            })
        }
    }
}

fn status_label(status: Status) -> &'static str {
    match status {
        Status::Resolved => "resolved",
        Status::Ambiguous => "ambiguous",
    }
}

fn join(v: &[usize]) -> String {
    v.iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(" ")
}

fn format_sigma(sigma: &BTreeMap<usize, usize>) -> String {
    sigma
        .iter()
        .map(|(j, s)| format!("sigma_{j} = {s}"))
        .collect::<Vec<_>>()
        .join(", ")
}

fn format_differential(d: &DifferentialAssignment) -> String {
    let (i, j) = d.source;
    let rank = d.rank.map_or("?".to_string(), |r| r.to_string());
    let provenance = match d.provenance {
        crate::specseq::Provenance::Formula => "formula",
        crate::specseq::Provenance::ForcedZero => "forced zero",
        crate::specseq::Provenance::Enumerated => "enumerated",
    };
    format!("d_{}^{{{i},{j}}}: rank {rank} ({provenance})", d.page)
}

fn write_notes(s: &mut String, notes: &[String]) {
    if notes.is_empty() {
        return;
    }
    let _ = writeln!(s, "notes:");
    for note in notes {
        let _ = writeln!(s, "  - {note}");
    }
}
