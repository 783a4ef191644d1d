//! The reproduction report: a fixed battery of checks, each rendered as one
//! `PASS`, `FAIL` or `SKIP` line against the bounds in [`calibration`].
//!
//! Output depends only on the [`ReportConfig`]; nothing time- or
//! thread-dependent is printed.

use crate::asymptotics::{self, Target};
use crate::brute_oracle;
use crate::calibration as cal;
use crate::contour_oracle::{cauchy_coefficient, ContourSpec};
use crate::distribution::{self, MomentInputs};
use crate::error::{Error, Result};
use crate::exact_enum::{self, build_triangle, Kind, RowSweep};
use crate::numeric::{ln_factorial, log_biguint};
use crate::rootedness;
use crate::saddle_solver::{self, Tolerance};
use serde::Serialize;
use std::fmt;
use std::str::FromStr;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Section {
    Brute,
    Identities,
    Moments,
    Saddle,
    Gap,
    Asymptotics,
    Ratio,
    Contour,
    Sturm,
    Normality,
}

impl Section {
    pub const ALL: [Section; 10] = [
        Section::Brute,
        Section::Identities,
        Section::Moments,
        Section::Saddle,
        Section::Gap,
        Section::Asymptotics,
        Section::Ratio,
        Section::Contour,
        Section::Sturm,
        Section::Normality,
    ];

    /// Sections that need no triangle beyond n = 300 and finish in seconds.
    pub const SEED: [Section; 6] = [
        Section::Brute,
        Section::Identities,
        Section::Moments,
        Section::Saddle,
        Section::Gap,
        Section::Contour,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Section::Brute => "brute",
            Section::Identities => "identities",
            Section::Moments => "moments",
            Section::Saddle => "saddle",
            Section::Gap => "gap",
            Section::Asymptotics => "asymptotics",
            Section::Ratio => "ratio",
            Section::Contour => "contour",
            Section::Sturm => "sturm",
            Section::Normality => "normality",
        }
    }
}

impl fmt::Display for Section {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Section {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Section::ALL
            .into_iter()
            .find(|sec| sec.as_str() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown report section {s:?}")))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReportConfig {
    /// Largest exact n any section may use.
    pub n_max: usize,
    /// Sections to run; empty means all.
    pub sections: Vec<Section>,
    /// Restrict to [`Section::SEED`].
    pub seed_invariants_only: bool,
}

impl Default for ReportConfig {
    fn default() -> Self {
        Self { n_max: 3000, sections: Vec::new(), seed_invariants_only: false }
    }
}

impl ReportConfig {
    pub fn selected(&self) -> Vec<Section> {
        let base: &[Section] = if self.seed_invariants_only { &Section::SEED } else { &Section::ALL };
        base.iter().copied().filter(|s| self.sections.is_empty() || self.sections.contains(s)).collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Status {
    Pass,
    Fail,
    Skip,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Skip => "SKIP",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub section: Section,
    pub name: String,
    pub status: Status,
    pub detail: String,
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}.{}: {}", self.status, self.section, self.name, self.detail)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Report {
    pub n_max: usize,
    pub checks: Vec<Check>,
}

impl Report {
    /// True iff no check failed.
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status != Status::Fail)
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for check in &self.checks {
            out.push_str(&check.to_string());
            out.push('\n');
        }
        let count = |s: Status| self.checks.iter().filter(|c| c.status == s).count();
        out.push_str(&format!(
            "{} passed, {} failed, {} skipped\n",
            count(Status::Pass),
            count(Status::Fail),
            count(Status::Skip)
        ));
        out
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

struct Battery {
    section: Section,
    checks: Vec<Check>,
}

impl Battery {
    fn push(&mut self, name: &str, outcome: Result<(bool, String)>) {
        let (status, detail) = match outcome {
            Ok((true, d)) => (Status::Pass, d),
            Ok((false, d)) => (Status::Fail, d),
            Err(e) => (Status::Fail, format!("error: {e}")),
        };
        self.checks.push(Check { section: self.section, name: name.into(), status, detail });
    }

    fn skip(&mut self, name: &str, why: String) {
        self.checks.push(Check { section: self.section, name: name.into(), status: Status::Skip, detail: why });
    }
}

/// Row sums of both kinds up to `n_max + 2`, with rows kept where needed.
struct Sweeps {
    m: RowSweep,
    n: RowSweep,
}

impl Sweeps {
    fn get(kind: Kind, sweeps: &Sweeps) -> &RowSweep {
        match kind {
            Kind::N => &sweeps.n,
            _ => &sweeps.m,
        }
    }
}

const MOMENT_N_MAX: usize = 300;
const ASYMPTOTIC_N_MAX: usize = 3000;
const BRUTE_N_MAX: usize = 5;

pub fn run(config: &ReportConfig) -> Report {
    let sections = config.selected();
    let n_max = config.n_max;
    let needs_sweeps = sections.iter().any(|s| {
        matches!(s, Section::Moments | Section::Asymptotics | Section::Ratio | Section::Normality)
    });
    let sweeps = needs_sweeps.then(|| {
        let top = n_max.min(ASYMPTOTIC_N_MAX) + 2;
        let mut keep: Vec<usize> = (0..=n_max.min(MOMENT_N_MAX)).collect();
        keep.extend(cal::KS_SWEEP.iter().copied().filter(|&n| n <= n_max));
        let run = |kind| RowSweep::run(kind, top, &keep);
        Sweeps { m: run(Kind::M), n: run(Kind::N) }
    });

    let mut report = Report { n_max, checks: Vec::new() };
    for section in sections {
        let mut b = Battery { section, checks: Vec::new() };
        match section {
            Section::Brute => brute(&mut b, n_max),
            Section::Identities => identities(&mut b, n_max),
            Section::Moments => moments(&mut b, n_max, sweeps.as_ref().expect("sweeps built")),
            Section::Saddle => saddle(&mut b),
            Section::Gap => gap(&mut b),
            Section::Asymptotics => asymptotic(&mut b, n_max, sweeps.as_ref().expect("sweeps built")),
            Section::Ratio => ratio(&mut b, n_max, sweeps.as_ref().expect("sweeps built")),
            Section::Contour => contour(&mut b, n_max),
            Section::Sturm => sturm(&mut b, n_max),
            Section::Normality => normality(&mut b, n_max, sweeps.as_ref().expect("sweeps built")),
        }
        report.checks.extend(b.checks);
    }
    report
}

fn brute(b: &mut Battery, n_max: usize) {
    let top = n_max.min(BRUTE_N_MAX);
    for (kind, allow_zero) in [(Kind::M, true), (Kind::N, false)] {
        let outcome = (|| {
            let triangle = build_triangle(kind, top);
            for n in 1..=top {
                let counts = brute_oracle::count_by_pairs(n, allow_zero)?;
                let row: Vec<u64> = triangle
                    .row(n)?
                    .iter()
                    .map(|v| u64::try_from(v).map_err(|_| Error::InvalidArgument("count overflow".into())))
                    .collect::<Result<_>>()?;
                if counts != row {
                    return Ok((false, format!("row {n}: enumeration {counts:?} vs triangle {row:?}")));
                }
            }
            Ok((true, format!("rows 1..={top} match enumeration")))
        })();
        b.push(&format!("rows_{kind}"), outcome);
    }
}

fn identity_line(check: exact_enum::IdentityCheck, top: usize) -> (bool, String) {
    match check.first_failure {
        None => (true, format!("exact for n <= {top}")),
        Some(n) => (false, format!("first failure at n = {n}")),
    }
}

fn identities(b: &mut Battery, n_max: usize) {
    let top60 = n_max.min(60);
    let top100 = n_max.min(100);
    b.push("stirling", Ok(identity_line(exact_enum::check_stirling_identity(top60), top60)));
    b.push("binomial", Ok(identity_line(exact_enum::check_binomial_identity(top100), top100)));
    for kind in [Kind::M, Kind::N] {
        let egf = exact_enum::egf_coefficients(kind, top60);
        let sums = RowSweep::run(kind, top60, &[]).sums;
        let first = egf.iter().zip(&sums).position(|(a, b)| a != b);
        let line = match first {
            None => (true, format!("exact for n <= {top60}")),
            Some(n) => (false, format!("first failure at n = {n}")),
        };
        b.push(&format!("egf_{kind}"), Ok(line));
    }
}

fn moments(b: &mut Battery, n_max: usize, sweeps: &Sweeps) {
    let top = n_max.min(MOMENT_N_MAX);
    for kind in [Kind::M, Kind::N] {
        let sweep = Sweeps::get(kind, sweeps);
        let outcome = (0..=top)
            .try_for_each(|n| distribution::exact_moments_from(&MomentInputs::from_sweep(sweep, n)?).map(|_| ()))
            .map(|()| (true, format!("pmf = derivative = ratio form for n <= {top}")));
        b.push(&format!("three_way_{kind}"), outcome);
    }
    if top >= 1 {
        let outcome = distribution::exact_moments_from(&MomentInputs::from_sweep(&sweeps.m, 1).expect("row 1 kept"))
            .map(|m| {
                let ok = m.mean == num_rational::BigRational::new(1.into(), 2.into())
                    && m.variance == num_rational::BigRational::new(1.into(), 4.into());
                (ok, format!("mean {} variance {}", m.mean, m.variance))
            });
        b.push("worked_n1", outcome);
    }
}

fn saddle(b: &mut Battery) {
    let tol = Tolerance::default();
    let mut worst_res: f64 = 0.0;
    let mut l1 = [0f64; 2];
    let mut l3 = [0f64; 4];
    let outcome = (|| {
        for c in [0u32, 1] {
            for &n in &cal::SADDLE_SWEEP {
                let root = saddle_solver::solve_saddle(n, c, tol)?;
                worst_res = worst_res.max(root.residual.abs() / n);
                let a = saddle_solver::lemma1_scaled_residuals(n, c)?;
                l1[0] = l1[0].max(a.rho_r.abs());
                l1[1] = l1[1].max(a.rho_exp.abs());
                let t = saddle_solver::triple_roots(n, c, tol)?;
                for (slot, v) in l3.iter_mut().zip(saddle_solver::lemma3_residuals(&t).as_array()) {
                    *slot = slot.max(v.abs());
                }
            }
        }
        Ok(())
    })();
    if let Err(e) = outcome {
        b.push("solve", Err(e));
        return;
    }
    let line = |value: f64, bound: f64| (value <= bound, format!("max {value:.4e} <= {bound:e}"));
    b.push("residual_per_n", Ok(line(worst_res, cal::SADDLE_RESIDUAL_PER_N)));
    b.push("lemma1_rho_r", Ok(line(l1[0], cal::LEMMA1_RHO_R)));
    b.push("lemma1_rho_exp", Ok(line(l1[1], cal::LEMMA1_RHO_EXP)));
    let bounds = [
        ("lemma3_gap01", cal::LEMMA3_GAP01),
        ("lemma3_gap12", cal::LEMMA3_GAP12),
        ("lemma3_second_difference", cal::LEMMA3_SECOND_DIFFERENCE),
        ("lemma3_reciprocal", cal::LEMMA3_RECIPROCAL),
    ];
    for ((name, bound), value) in bounds.into_iter().zip(l3) {
        b.push(name, Ok(line(value, bound)));
    }
}

fn gap(b: &mut Battery) {
    let outcome = cal::SADDLE_SWEEP
        .iter()
        .map(|&n| asymptotics::saddle_gap_check(n).map(f64::abs))
        .try_fold(0f64, |acc, v| v.map(|v| acc.max(v)))
        .map(|worst| (worst <= cal::SADDLE_GAP, format!("max {worst:.4e} <= {:e}", cal::SADDLE_GAP)));
    b.push("scaled_residual", outcome);
}

fn asymptotic(b: &mut Battery, n_max: usize, sweeps: &Sweeps) {
    let points: Vec<usize> = cal::ASYMPTOTIC_SWEEP.iter().copied().filter(|&n| n <= n_max).collect();
    if points.len() < 2 {
        b.skip("scaled_error", format!("needs n-max >= {}", cal::ASYMPTOTIC_SWEEP[1]));
        return;
    }
    for (target, sweep, bound, name) in [
        (Target::M, &sweeps.m, cal::ASYMPTOTIC_M, "scaled_error_M"),
        (Target::N, &sweeps.n, cal::ASYMPTOTIC_N, "scaled_error_N"),
    ] {
        let outcome = asymptotics::comparison_sweep(target, sweep, &points).map(|rows| {
            let errs: Vec<f64> = rows.iter().map(|r| r.scaled_err).collect();
            let bounded = errs.iter().all(|&e| e.is_finite() && e <= bound);
            let steady = errs.windows(2).all(|w| w[1] <= w[0] * cal::ASYMPTOTIC_GROWTH);
            let listed: Vec<String> = rows.iter().map(|r| format!("{}:{:.3e}", r.n, r.scaled_err)).collect();
            (bounded && steady, format!("{} (bound {bound:e}, growth <= {})", listed.join(" "), cal::ASYMPTOTIC_GROWTH))
        });
        b.push(name, outcome);
    }
}

fn ratio(b: &mut Battery, n_max: usize, sweeps: &Sweeps) {
    if n_max < 3000 {
        b.skip("window", "needs n-max >= 3000".into());
        return;
    }
    let normalized =
        |n: usize| asymptotics::ratio_nm_check(n, &sweeps.m, &sweeps.n).map(|r| (r, r.scaled_error + 1.0));
    let outcome = (|| {
        let (at2000, v2000) = normalized(2000)?;
        let (_, v300) = normalized(300)?;
        let (_, v3000) = normalized(3000)?;
        let (lo, hi) = cal::RATIO_WINDOW;
        let ok = (lo..=hi).contains(&v2000)
            && at2000.scaled_error.abs() < cal::RATIO_SCALED_ERROR
            && (v3000 - 1.0).abs() < (v300 - 1.0).abs();
        Ok((ok, format!("normalized ratio 300:{v300:.6} 2000:{v2000:.6} 3000:{v3000:.6}")))
    })();
    b.push("window", outcome);
}

fn contour(b: &mut Battery, n_max: usize) {
    let top = n_max.min(cal::CONTOUR_N_MAX);
    if top == 0 {
        b.skip("agreement", "needs n-max >= 1".into());
        return;
    }
    let sums = RowSweep::run(Kind::M, top, &[]).sums;
    let mut worst_exact: f64 = 0.0;
    let mut worst_radius: f64 = 0.0;
    let mut worst_imag: f64 = 0.0;
    let outcome = (|| {
        for n in 1..=top {
            let exact = log_biguint(&sums[n]) - ln_factorial(n as u64);
            let spec = ContourSpec::at_saddle(n)?;
            let base = cauchy_coefficient(&spec)?;
            worst_exact = worst_exact.max((base.log_value - exact).abs());
            worst_imag = worst_imag.max(base.imag_ratio);
            for f in cal::CONTOUR_RADIUS_FACTORS {
                let moved = cauchy_coefficient(&spec.with_radius(spec.radius * f)?)?;
                worst_radius = worst_radius.max((moved.log_value - base.log_value).abs());
                worst_imag = worst_imag.max(moved.imag_ratio);
            }
        }
        Ok(())
    })();
    if let Err(e) = outcome {
        b.push("agreement", Err(e));
        return;
    }
    let tol = cal::CONTOUR_AGREEMENT;
    b.push("agreement", Ok((worst_exact <= tol, format!("n <= {top}: max {worst_exact:.4e} <= {tol:e}"))));
    b.push("radius_invariance", Ok((worst_radius <= tol, format!("max {worst_radius:.4e} <= {tol:e}"))));
    let imag = cal::CONTOUR_IMAG_RATIO;
    b.push("imaginary_part", Ok((worst_imag <= imag, format!("max {worst_imag:.4e} <= {imag:e}"))));
}

fn sturm(b: &mut Battery, n_max: usize) {
    let top = n_max.min(cal::STURM_N_MAX);
    let ns: Vec<usize> = (1..=top).collect();
    for kind in [Kind::M, Kind::N] {
        let failures: Vec<String> = rootedness::certify_rows(&ns, kind)
            .into_iter()
            .zip(&ns)
            .filter_map(|(c, n)| c.err().map(|e| format!("{n}: {e}")))
            .collect();
        let line = if failures.is_empty() {
            (true, format!("rows 1..={top}: n distinct roots in (-inf, 0]"))
        } else {
            (false, failures.join("; "))
        };
        b.push(&format!("certified_{kind}"), Ok(line));
    }
}

fn normality(b: &mut Battery, n_max: usize, sweeps: &Sweeps) {
    let points: Vec<usize> = cal::KS_SWEEP.iter().copied().filter(|&n| n <= n_max).collect();
    if points.len() < 2 {
        b.skip("ks_trend", format!("needs n-max >= {}", cal::KS_SWEEP[1]));
    } else {
        for kind in [Kind::M, Kind::N] {
            let sweep = Sweeps::get(kind, sweeps);
            let outcome = points
                .iter()
                .map(|&n| Ok(distribution::summarize(&MomentInputs::from_sweep(sweep, n)?)?.kolmogorov_distance))
                .collect::<Result<Vec<f64>>>()
                .map(|ks| {
                    let decreasing = ks.windows(2).all(|w| w[1] < w[0]);
                    let last = *ks.last().expect("two points");
                    let listed: Vec<String> = points.iter().zip(&ks).map(|(n, d)| format!("{n}:{d:.4e}")).collect();
                    (decreasing && last < cal::KS_MAX, format!("{} (last < {})", listed.join(" "), cal::KS_MAX))
                });
            b.push(&format!("ks_trend_{kind}"), outcome);
        }
    }
    let list: Vec<usize> = [10, 100, 1000].into_iter().filter(|&n| n <= n_max).collect();
    for kind in [Kind::M, Kind::N] {
        let outcome = distribution::variance_divergence_check(&list, kind)
            .map(|ok| (ok, format!("variance increasing and x10 over {list:?}")));
        b.push(&format!("variance_divergence_{kind}"), outcome);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn section_names_round_trip() {
        for s in Section::ALL {
            assert_eq!(s.as_str().parse::<Section>().unwrap(), s);
        }
        assert!("bogus".parse::<Section>().is_err());
    }

    #[test]
    fn selection() {
        let cfg = ReportConfig { sections: vec![Section::Contour, Section::Sturm], seed_invariants_only: true, ..Default::default() };
        assert_eq!(cfg.selected(), vec![Section::Contour]);
        assert_eq!(ReportConfig::default().selected().len(), Section::ALL.len());
    }

    #[test]
    fn small_report_passes() {
        let cfg = ReportConfig { n_max: 12, sections: vec![Section::Brute, Section::Identities, Section::Moments], ..Default::default() };
        let report = run(&cfg);
        assert!(report.passed(), "{}", report.render());
        assert!(report.render().lines().all(|l| !l.starts_with("FAIL")));
    }

    #[test]
    fn skipped_sections_do_not_fail() {
        let cfg = ReportConfig { n_max: 50, sections: vec![Section::Ratio, Section::Asymptotics], ..Default::default() };
        let report = run(&cfg);
        assert!(report.passed());
        assert!(report.checks.iter().all(|c| c.status == Status::Skip));
    }
}
