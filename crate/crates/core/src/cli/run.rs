//! Running a scenario end to end and rendering the result.

use std::fmt::{self, Write as _};
use std::io;

use serde::Serialize;

use crate::clairaut::{ClairautScenario, InvariantDrift};
use crate::error::Error;
use crate::geometry::GeodesicTrajectory;
use crate::hermitian;
use crate::linalg::{self, Vector};
use crate::presets;
use crate::report::CheckReport;

use super::scenario::{GeodesicsBlock, InputError, LoadedScenario};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

/// Command-line overrides applied on top of a scenario file.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct RunOptions {
    pub seed: Option<u64>,
    pub samples: Option<usize>,
    pub tolerance_scale: Option<f64>,
}

impl LoadedScenario {
    pub fn apply(&mut self, opts: &RunOptions) -> Result<(), InputError> {
        let sc = &mut self.scenario;
        if let Some(seed) = opts.seed {
            sc.sampling.seed = seed;
        }
        if let Some(n) = opts.samples {
            if n == 0 {
                return Err(InputError::new("--samples", "must be positive"));
            }
            sc.sampling.count = n;
        }
        if let Some(k) = opts.tolerance_scale {
            if !(k > 0.0 && k.is_finite()) {
                return Err(InputError::new("--tolerance-scale", "must be positive"));
            }
            sc.tolerances = sc.tolerances.scaled(k);
        }
        Ok(())
    }
}

/// A runtime failure inside one check.
#[derive(Debug, Clone, PartialEq)]
pub struct RunError {
    pub check: String,
    pub source: Error,
}

impl fmt::Display for RunError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.check, self.source)
    }
}

impl std::error::Error for RunError {}

#[derive(Debug, Clone, Serialize)]
pub struct CheckRecord {
    #[serde(flatten)]
    pub report: CheckReport,
    pub verdict: &'static str,
}

#[derive(Debug, Clone, Serialize)]
pub struct ReportDocument {
    pub scenario: String,
    pub seed: u64,
    pub samples: usize,
    pub checks: Vec<CheckRecord>,
    pub overall: &'static str,
}

impl ReportDocument {
    fn new(scenario: String, seed: u64, samples: usize, checks: Vec<CheckReport>) -> Self {
        let passed = checks.iter().all(|c| c.passed || !c.gating);
        ReportDocument {
            scenario,
            seed,
            samples,
            checks: checks
                .into_iter()
                .map(|report| CheckRecord {
                    verdict: report.verdict(),
                    report,
                })
                .collect(),
            overall: if passed { "pass" } else { "fail" },
        }
    }

    pub fn passed(&self) -> bool {
        self.overall == "pass"
    }

    pub fn exit_code(&self) -> i32 {
        if self.passed() {
            EXIT_PASS
        } else {
            EXIT_FAIL
        }
    }

    pub fn check(&self, reference: &str) -> Option<&CheckReport> {
        self.checks
            .iter()
            .map(|c| &c.report)
            .find(|c| c.reference == reference)
    }

    pub fn to_machine(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serialises");
        s.push('\n');
        s
    }

    pub fn to_human(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "scenario {}  seed {}  samples {}", self.scenario, self.seed, self.samples);
        let _ = writeln!(
            out,
            "{:<46} {:<28} {:>7} {:>11} {:>9}  verdict",
            "check", "reference", "samples", "residual", "tol"
        );
        let _ = writeln!(out, "{}", "-".repeat(120));
        for c in &self.checks {
            let r = &c.report;
            let _ = writeln!(
                out,
                "{:<46} {:<28} {:>7} {:>11.3e} {:>9.1e}  {}",
                truncate(&r.name, 46),
                truncate(&r.reference, 28),
                r.samples,
                r.max_residual,
                r.tolerance,
                c.verdict
            );
            for n in &r.notes {
                let _ = writeln!(out, "    {n}");
            }
        }
        let _ = writeln!(out, "overall: {}", self.overall);
        out
    }
}

fn truncate(s: &str, width: usize) -> String {
    if s.chars().count() <= width {
        s.to_string()
    } else {
        let mut t: String = s.chars().take(width - 1).collect();
        t.push('~');
        t
    }
}

fn merge(into: &mut Option<CheckReport>, from: CheckReport) {
    match into {
        None => *into = Some(from),
        Some(acc) => {
            acc.samples += from.samples;
            acc.max_residual = acc.max_residual.max(from.max_residual);
            acc.passed &= from.passed;
            acc.notes.extend(from.notes);
        }
    }
}

fn at<T>(check: &str, r: crate::Result<T>) -> Result<T, RunError> {
    r.map_err(|source| RunError {
        check: check.to_string(),
        source,
    })
}

/// Every check of a scenario, in a fixed order. Gating failures give a
/// failing document; errors (a singular point, a geodesic leaving the
/// domain) abort with the name of the check that hit them.
pub fn run_scenario(loaded: &LoadedScenario) -> Result<ReportDocument, RunError> {
    let sc = &loaded.scenario;
    let tol = sc.tolerances;
    let seed = sc.sampling.seed;
    let samples = at("sampling", sc.samples())?;
    let m = &sc.submersion.total;
    let mut checks = Vec::new();

    checks.push(at(
        "almost Hermitian structure",
        hermitian::check_structure(m, &sc.structure, &samples, tol.algebraic, seed),
    )?);
    let nk = at(
        "nearly Kaehler",
        hermitian::check_nearly_kaehler(m, &sc.structure, &samples, tol.algebraic, seed),
    )?;
    checks.push(nk.nearly_kaehler);
    checks.push(nk.kaehler);

    checks.push(at(
        "Riemannian submersion",
        sc.submersion.check_submersion(&samples, tol.algebraic),
    )?);
    checks.push(at("anti-invariance", sc.check_anti_invariant(&samples))?.report);

    match sc.submersion.fiber_character(&samples, tol.fd) {
        Ok(fc) => {
            checks.push(fc.umbilical);
            checks.push(fc.totally_geodesic);
        }
        Err(Error::NoFibres) => {
            let mut r = CheckReport::new("fibres totally umbilical", "fibre-umbilical", tol.fd)
                .informational();
            r.note("zero-dimensional fibres");
            checks.push(r);
        }
        Err(e) => return Err(RunError { check: "fibre character".into(), source: e }),
    }
    checks.push(at("Clairaut criterion", sc.check_bishop(&samples))?);
    checks.push(at(
        "O'Neill skew-symmetry",
        sc.submersion.check_skew(&samples, tol.algebraic, seed),
    )?);
    let pq = at("P/Q identities", sc.check_pq_identities(&samples))?;
    checks.push(pq.antisymmetry);
    checks.push(pq.conjugation);
    checks.push(pq.duality);

    if let Some(g) = &loaded.geodesics {
        checks.extend(geodesic_checks(sc, g)?);
    }

    let basic = at("basic identity", sc.check_basic_identity(&samples))?;
    checks.push(basic.basic);
    checks.push(basic.mu_frame);
    checks.push(basic.horizontal_frame);
    checks.push(at("fibre dichotomies", sc.check_dichotomies(&samples))?);

    Ok(ReportDocument::new(
        loaded.name.clone(),
        seed,
        samples.len(),
        checks,
    ))
}

fn geodesic_checks(sc: &ClairautScenario, g: &GeodesicsBlock) -> Result<Vec<CheckReport>, RunError> {
    let tol = sc.tolerances;
    let mut energy = None;
    let mut invariant = None;
    let mut conditions = None;
    let mut clairaut = None;
    let mut planarity = None;
    for (i, ic) in g.initial.iter().enumerate() {
        let label = format!("geodesic {}", i + 1);
        let (p0, v0) = (Vector::from_vec(ic.p0.clone()), Vector::from_vec(ic.v0.clone()));
        let traj = at(&label, sc.submersion.total.geodesic_integrate(&p0, &v0, g.length, g.step))?;
        let gm = at(&label, sc.submersion.total.metric_at(&p0))?;
        let arc = g.length * linalg::norm(&gm, &v0);
        let budget = tol.geodesic * arc.max(1.0);

        let mut e = CheckReport::new("geodesic energy conservation", "geodesic-energy", budget);
        e.observe(traj.energy_drift);
        e.sample();
        merge(&mut energy, e);

        let mut c = CheckReport::new("Clairaut invariant e^f sin(theta)", "clairaut-invariant", budget);
        let drift = at(&label, sc.clairaut_invariant(&traj))?;
        c.observe(drift.relative_drift);
        c.sample();
        c.note(format!("{label}: c(0) = {:.9}, relative drift {:.3e}", drift.initial, drift.relative_drift));
        merge(&mut invariant, c);

        let mut cond = at(&label, sc.check_geodesic_conditions(&traj))?;
        cond.notes.iter_mut().for_each(|n| *n = format!("{label}: {n}"));
        let geodesic_ok = cond.passed;
        merge(&mut conditions, cond);

        let cl = if geodesic_ok {
            at(&label, sc.check_clairaut_condition(&traj))?
        } else {
            let mut r = CheckReport::new(
                "Clairaut condition along geodesic",
                "clairaut-geodesic-condition",
                tol.geodesic,
            );
            r.fail(format!("{label}: geodesic conditions fail, condition not evaluated"));
            r
        };
        merge(&mut clairaut, cl);

        let mut pl = CheckReport::new(
            "phi (nabla_h phi) phi h' along geodesics",
            "holomorphic-planarity",
            tol.algebraic,
        );
        for k in 0..traj.len() {
            pl.observe(at(&label, sc.holomorphic_planarity(&traj, k))?);
            pl.sample();
        }
        merge(&mut planarity, pl);
    }
    Ok([energy, invariant, conditions, clairaut, planarity]
        .into_iter()
        .flatten()
        .collect())
}

/// Result of `geodesic`: the trajectory and its Clairaut invariant.
#[derive(Debug, Clone)]
pub struct GeodesicRun {
    pub trajectory: GeodesicTrajectory,
    pub invariant: InvariantDrift,
}

pub fn integrate_geodesic(
    sc: &ClairautScenario,
    p0: &[f64],
    v0: &[f64],
    length: f64,
    step: f64,
) -> Result<GeodesicRun, RunError> {
    let m = sc.dim();
    if p0.len() != m || v0.len() != m {
        return Err(RunError {
            check: "geodesic".into(),
            source: Error::Dimension(format!("p0 and v0 need {m} components")),
        });
    }
    let trajectory = at(
        "geodesic",
        sc.submersion.total.geodesic_integrate(
            &Vector::from_vec(p0.to_vec()),
            &Vector::from_vec(v0.to_vec()),
            length,
            step,
        ),
    )?;
    let invariant = at("geodesic", sc.clairaut_invariant(&trajectory))?;
    Ok(GeodesicRun {
        trajectory,
        invariant,
    })
}

impl GeodesicRun {
    /// Rows `s, x1.., v1.., sin_theta, invariant`.
    pub fn write_csv<W: io::Write>(&self, w: W) -> csv::Result<()> {
        let m = self.trajectory.samples.first().map_or(0, |s| s.point.len());
        let mut out = csv::Writer::from_writer(w);
        let mut header = vec!["s".to_string()];
        header.extend((1..=m).map(|i| format!("x{i}")));
        header.extend((1..=m).map(|i| format!("v{i}")));
        header.push("sin_theta".into());
        header.push("invariant".into());
        out.write_record(&header)?;
        for (t, c) in self.trajectory.samples.iter().zip(&self.invariant.samples) {
            let mut row = vec![t.s.to_string()];
            row.extend(t.point.iter().map(f64::to_string));
            row.extend(t.velocity.iter().map(f64::to_string));
            row.push(c.sin_theta.to_string());
            row.push(c.value.to_string());
            out.write_record(&row)?;
        }
        out.flush()?;
        Ok(())
    }

    pub fn summary(&self) -> String {
        format!(
            "samples {}  energy drift {:.3e}  invariant c(0) = {:.9}  max |c - c(0)| = {:.3e}  relative {:.3e}",
            self.trajectory.len(),
            self.trajectory.energy_drift,
            self.invariant.initial,
            self.invariant.max_abs_drift,
            self.invariant.relative_drift
        )
    }
}

pub fn list_presets() -> String {
    let mut out = String::new();
    for p in presets::CATALOG {
        let kind = match p.kind {
            presets::PresetKind::Metric => "metric",
            presets::PresetKind::Structure => "structure",
            presets::PresetKind::Map => "map",
        };
        let _ = writeln!(out, "{:<16} {:<10} {}", p.name, kind, p.description);
    }
    out
}
