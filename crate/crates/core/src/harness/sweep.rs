//! Seeded random sweeps that run the full verification on many diagrams.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::diagram::PlatDiagram;
use crate::error::{Error, Result};
use crate::harness::random::random_plat_with;
use crate::harness::verify::{verify_diagram, DiagramReport, VerifyOptions};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SweepBounds {
    pub max_cusps: usize,
    pub max_crossings: usize,
}

impl Default for SweepBounds {
    fn default() -> Self {
        Self {
            max_cusps: 4,
            max_crossings: 12,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct RhoTally {
    pub diagrams: usize,
    pub augmentations: usize,
    pub rulings: usize,
    pub with_rulings: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SweepFailure {
    pub index: usize,
    pub diagram: String,
    pub check: String,
    pub detail: String,
    /// Smallest failing diagram found by deleting crossings.
    pub minimal: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SweepReport {
    pub seed: u64,
    pub count: usize,
    pub rhos: Vec<u64>,
    pub bounds: SweepBounds,
    pub checks_run: usize,
    pub per_rho: BTreeMap<u64, RhoTally>,
    pub failures: Vec<SweepFailure>,
    pub passed: bool,
}

/// The `index`-th diagram of a sweep; independent of every other index.
pub fn sweep_diagram(seed: u64, index: usize, bounds: SweepBounds) -> Result<PlatDiagram> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    for _ in 0..1000 {
        let cusps = rng.gen_range(1..=bounds.max_cusps.max(1));
        let crossings = if cusps == 1 {
            0
        } else {
            rng.gen_range(0..=bounds.max_crossings)
        };
        match random_plat_with(&mut rng, cusps, crossings) {
            Ok(d) => return Ok(d),
            Err(Error::GiveUp { .. }) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(Error::GiveUp { attempts: 1000 })
}

pub fn sweep_verify(
    count: usize,
    opts: VerifyOptions,
    rhos: &[u64],
    seed: u64,
    bounds: SweepBounds,
) -> Result<SweepReport> {
    let diagrams: Vec<PlatDiagram> = (0..count)
        .map(|i| sweep_diagram(seed, i, bounds))
        .collect::<Result<_>>()?;
    let results: Vec<Result<DiagramReport>> = diagrams
        .par_iter()
        .map(|d| verify_diagram(d, rhos, opts))
        .collect();

    let mut per_rho: BTreeMap<u64, RhoTally> = BTreeMap::new();
    let mut failures = Vec::new();
    let mut checks_run = 0;
    for (index, (d, res)) in diagrams.iter().zip(results).enumerate() {
        let rep = res?;
        checks_run += rep.all_checks().count();
        for r in &rep.rhos {
            let t = per_rho.entry(r.rho).or_default();
            t.diagrams += 1;
            t.augmentations += r.augmentations;
            t.rulings += r.rulings;
            t.with_rulings += usize::from(r.rulings > 0);
        }
        if let Some(c) = rep.first_failure() {
            failures.push(SweepFailure {
                index,
                diagram: d.to_text(),
                check: c.name.clone(),
                detail: c.detail.clone(),
                minimal: shrink(d, rhos, opts, &c.name).to_text(),
            });
        }
    }
    Ok(SweepReport {
        seed,
        count,
        rhos: rhos.to_vec(),
        bounds,
        checks_run,
        per_rho,
        passed: failures.is_empty(),
        failures,
    })
}

fn fails(d: &PlatDiagram, rhos: &[u64], opts: VerifyOptions, check: &str) -> bool {
    match verify_diagram(d, rhos, opts) {
        Ok(rep) => rep.all_checks().any(|c| !c.passed && c.name == check),
        Err(_) => false,
    }
}

/// Greedily deletes one or two adjacent crossings while the named check
/// keeps failing and the word still closes up to a knot.
pub fn shrink(d: &PlatDiagram, rhos: &[u64], opts: VerifyOptions, check: &str) -> PlatDiagram {
    let mut best = d.clone();
    'outer: loop {
        let w = best.word().to_vec();
        for len in [1, 2] {
            for start in 0..w.len().saturating_sub(len - 1) {
                let mut cand = w.clone();
                cand.drain(start..start + len);
                if let Ok(c) = PlatDiagram::new(best.cusps(), cand) {
                    if fails(&c, rhos, opts, check) {
                        best = c;
                        continue 'outer;
                    }
                }
            }
        }
        return best;
    }
}
