//! Full verification of a single diagram.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::augment::DEFAULT_MAX_ELIGIBLE;
use crate::correspond::{verify_correspondence, CorrespondenceReport};
use crate::dga::{build_dga_with_budget, verify_d_squared, verify_degree_drop, Dga, DEFAULT_DISK_BUDGET};
use crate::diagram::{check_rho, crossing_gradings, maslov, MaslovData, Orientation, PlatDiagram};
use crate::error::{Error, Result};
use crate::halfpow::HalfPow;
use crate::report::Check;
use crate::ruling::{
    enumerate_rulings, expected_step, geometric_kinds, interlacing_trace, ruling_polynomial,
    theta_multiset, CrossingKind, Ruling, ThetaMultiset,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VerifyOptions {
    pub disk_budget: u64,
    pub max_eligible: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            disk_budget: DEFAULT_DISK_BUDGET,
            max_eligible: DEFAULT_MAX_ELIGIBLE,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RhoReport {
    pub rho: u64,
    pub chi_star: i64,
    pub augmentations: usize,
    pub rulings: usize,
    pub theta: ThetaMultiset,
    pub ruling_polynomial: String,
    pub aug_number: HalfPow,
    pub correspondence: CorrespondenceReport,
    pub checks: Vec<Check>,
}

#[derive(Debug, Clone, Serialize)]
pub struct DiagramReport {
    pub diagram: String,
    pub rotation: i64,
    pub tb: i64,
    pub checks: Vec<Check>,
    pub rhos: Vec<RhoReport>,
    /// Requested values of rho that do not divide 2r.
    pub skipped_rhos: Vec<u64>,
}

impl DiagramReport {
    pub fn all_checks(&self) -> impl Iterator<Item = &Check> {
        self.checks
            .iter()
            .chain(self.rhos.iter().flat_map(|r| r.checks.iter()))
            .chain(self.rhos.iter().flat_map(|r| r.correspondence.checks.iter()))
    }

    pub fn passed(&self) -> bool {
        self.all_checks().all(|c| c.passed)
    }

    pub fn first_failure(&self) -> Option<&Check> {
        self.all_checks().find(|c| !c.passed)
    }
}

/// Admissible rho: zero or odd, dividing 2r.
pub fn admissible(rho: u64, m: &MaslovData) -> bool {
    (rho == 0 || rho % 2 == 1) && check_rho(rho, m.modulus).is_ok()
}

/// Runs every check on `d` for each admissible `rho` in `rhos`. An explicitly
/// requested even nonzero rho is an error; a rho not dividing 2r is skipped.
pub fn verify_diagram(d: &PlatDiagram, rhos: &[u64], opts: VerifyOptions) -> Result<DiagramReport> {
    if let Some(&rho) = rhos.iter().find(|&&r| r != 0 && r % 2 == 0) {
        return Err(Error::EvenRhoUnsupported(rho));
    }
    let m = maslov(d, Orientation::Forward);
    let g = build_dga_with_budget(d, &m, opts.disk_budget)?;
    let mut checks = vec![
        Check::new("d^2 = 0", verify_d_squared(&g), ""),
        Check::new("differential lowers degree by one", verify_degree_drop(&g), ""),
    ];

    let reversed = maslov(d, Orientation::Reverse);
    let same = crossing_gradings(d, &m) == crossing_gradings(d, &reversed)
        && m.modulus == reversed.modulus
        && m.tb == reversed.tb
        && m.rotation == -reversed.rotation;
    checks.push(Check::new(
        "gradings independent of orientation",
        same,
        "",
    ));

    let mut reports = Vec::new();
    let mut skipped = Vec::new();
    for &rho in rhos {
        if !admissible(rho, &m) {
            skipped.push(rho);
            continue;
        }
        reports.push(verify_rho(d, &m, &g, rho, opts)?);
    }
    Ok(DiagramReport {
        diagram: d.to_text(),
        rotation: m.rotation,
        tb: m.tb,
        checks,
        rhos: reports,
        skipped_rhos: skipped,
    })
}

fn verify_rho(
    d: &PlatDiagram,
    m: &MaslovData,
    g: &Dga,
    rho: u64,
    opts: VerifyOptions,
) -> Result<RhoReport> {
    let (corr, _) = verify_correspondence(d, m, g, rho, opts.max_eligible)?;
    let rulings = enumerate_rulings(d, m, rho)?;
    let poly = ruling_polynomial(d, m, rho)?;
    let theta = theta_multiset(&rulings);
    let chi = corr.chi_star;
    let mut checks = Vec::new();

    checks.push(Check::new(
        "ruling polynomial matches enumerated theta multiset",
        poly.as_multiset() == theta,
        format!("poly {poly}, theta {:?}", theta.values()),
    ));
    checks.push(Check::new(
        "augmentations exist iff rulings exist",
        (corr.augmentations > 0) == (!rulings.is_empty()),
        format!("{} augmentations, {} rulings", corr.augmentations, rulings.len()),
    ));
    let parity_ok = rulings.iter().all(|r| (r.theta - chi).rem_euclid(2) == 0);
    checks.push(Check::new("theta has the parity of chi*", parity_ok, ""));

    let mut bad = Vec::new();
    for r in &rulings {
        if let Some(why) = ruling_identity_violation(d, m, g, r, rho, chi) {
            bad.push(format!("{}: {why}", r.letters()));
        }
    }
    bad.truncate(5);
    checks.push(Check::new(
        "return counts, balance identities and interlacing traces",
        bad.is_empty(),
        bad.join("; "),
    ));

    Ok(RhoReport {
        rho,
        chi_star: chi,
        augmentations: corr.augmentations,
        rulings: rulings.len(),
        theta,
        ruling_polynomial: poly.to_string(),
        aug_number: corr.aug_number,
        correspondence: corr,
        checks,
    })
}

/// First violated return-count or trace identity of a ruling, if any.
pub fn ruling_identity_violation(
    d: &PlatDiagram,
    m: &MaslovData,
    g: &Dga,
    r: &Ruling,
    rho: u64,
    chi: i64,
) -> Option<String> {
    let cusps = d.cusps() as i64;
    let returns = r.r as i64;
    let sum = r.theta + chi;
    if sum % 2 != 0 {
        return Some(format!("theta + chi* = {sum} is odd"));
    }
    let want = if rho == 1 { sum / 2 - cusps } else { sum / 2 };
    if returns != want {
        return Some(format!("r = {returns}, formula gives {want}"));
    }
    if rho == 1 && r.d != r.r {
        return Some(format!("d = {} but r = {}", r.d, r.r));
    }
    if rho == 0 {
        let mut balance = r.d as i64 - returns;
        for gen in g.generators().iter().take(d.crossing_count()) {
            let k = gen.grading.value();
            let sign = |e: i64| if e.rem_euclid(2) == 0 { 1 } else { -1 };
            if k > 0 {
                balance += sign(k);
            } else if k < 0 {
                balance += sign(k + 1);
            }
        }
        if balance != 0 {
            return Some(format!("balance identity leaves {balance}"));
        }
    }

    let trace = match interlacing_trace(d, m, r, rho) {
        Ok(t) => t,
        Err(e) => return Some(e.to_string()),
    };
    let n = trace.len();
    if trace[0] != 0 || trace[n - 1] != 0 || trace[n - 2] != trace[n - 1] {
        return Some(format!("trace {trace:?} does not start and end at 0"));
    }
    let gradings = crossing_gradings(d, m);
    for (j, kind) in geometric_kinds(d, r).into_iter().enumerate() {
        let step = trace[j + 1] - trace[j];
        let want = match kind {
            CrossingKind::Switch => 0,
            k => expected_step(gradings[j], k, rho),
        };
        if step != want {
            return Some(format!(
                "trace step {step} at q{} (expected {want}) in {trace:?}",
                j + 1
            ));
        }
    }
    None
}

/// Summary numbers for one rho, for atlas comparison.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub theta: Vec<i64>,
    pub augmentations: usize,
    pub chi_star: i64,
    pub aug_number: HalfPow,
}

pub fn summarize(report: &DiagramReport) -> BTreeMap<u64, Summary> {
    report
        .rhos
        .iter()
        .map(|r| {
            (
                r.rho,
                Summary {
                    theta: r.theta.values(),
                    augmentations: r.augmentations,
                    chi_star: r.chi_star,
                    aug_number: r.aug_number,
                },
            )
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trefoil_passes_everything() {
        let d: PlatDiagram = "plat 2 : 2 2 2".parse().unwrap();
        let rep = verify_diagram(&d, &[0, 1], VerifyOptions::default()).unwrap();
        assert!(rep.passed(), "{:?}", rep.first_failure());
        assert_eq!(rep.rhos.len(), 2);
    }

    #[test]
    fn kinked_unknot_skips_rho_zero() {
        let d: PlatDiagram = "plat 2 : 1 2".parse().unwrap();
        let rep = verify_diagram(&d, &[0, 1], VerifyOptions::default()).unwrap();
        assert_eq!(rep.skipped_rhos, vec![0]);
        assert!(rep.passed());
    }

    #[test]
    fn even_rho_refused() {
        let d: PlatDiagram = "plat 2 : 1 2".parse().unwrap();
        assert_eq!(
            verify_diagram(&d, &[2], VerifyOptions::default()).map(|_| ()),
            Err(Error::EvenRhoUnsupported(2))
        );
    }
}
