//! From augmentations to rulings.
//!
//! Crossings are processed left to right while a *virtual augmentation* is
//! carried along. At an eligible crossing the current pairing and the
//! virtual value decide switch, departure or return; afterwards the virtual
//! augmentation is updated on the crossings further right by parities of
//! special disks that close on a vertical segment just right of the current
//! crossing.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use serde::Serialize;

use crate::augment::{enumerate_augmentations_bounded, is_augmentation, Augmentation};
use crate::dga::{chi_star, leftward_moves, Corner, Dga};
use crate::diagram::{check_rho, crossing_gradings, MaslovData, PairingState, PlatDiagram};
use crate::error::{Error, Result};
use crate::halfpow::HalfPow;
use crate::report::{first_failure, Check};
use crate::ruling::{enumerate_rulings, CrossingKind, Ruling};

/// Local configuration of the two ruling pairs meeting at a crossing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum ConfigLabel {
    S1,
    S2,
    S3,
    D1,
    D2,
    D3,
    R1,
    R2,
    R3,
}

impl ConfigLabel {
    pub fn kind(self) -> CrossingKind {
        use ConfigLabel::*;
        match self {
            S1 | S2 | S3 => CrossingKind::Switch,
            D1 | D2 | D3 => CrossingKind::Departure,
            R1 | R2 | R3 => CrossingKind::Return,
        }
    }
}

impl fmt::Display for ConfigLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

/// Position of the companions of the crossing strands, read on the left of
/// the crossing.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Companions {
    /// One companion above the crossing, the other below.
    Split,
    Above,
    Below,
}

/// The nine-entry label table. `Split` means disjoint pairs for a switch or
/// departure and alternating pairs straddling the crossing for a return.
fn label(kind: CrossingKind, companions: Companions) -> ConfigLabel {
    use ConfigLabel::*;
    match (kind, companions) {
        (CrossingKind::Switch, Companions::Split) => S1,
        (CrossingKind::Switch, Companions::Above) => S2,
        (CrossingKind::Switch, Companions::Below) => S3,
        (CrossingKind::Departure, Companions::Split) => D1,
        (CrossingKind::Departure, Companions::Above) => D2,
        (CrossingKind::Departure, Companions::Below) => D3,
        (CrossingKind::Return, Companions::Split) => R1,
        (CrossingKind::Return, Companions::Above) => R2,
        (CrossingKind::Return, Companions::Below) => R3,
    }
}

fn companions(state: &PairingState, a: usize, b: usize) -> Companions {
    let (x, y) = (state.partner(a), state.partner(b));
    match (x < a, y < a) {
        (true, true) => Companions::Above,
        (false, false) => Companions::Below,
        _ => Companions::Split,
    }
}

/// Which pair of strands a special-disk segment joins.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SegmentKind {
    Crossing,
    Companion,
}

/// Order of update passes for each label; empty means the virtual
/// augmentation is carried over unchanged.
fn passes_for(label: ConfigLabel) -> &'static [SegmentKind] {
    use ConfigLabel::*;
    use SegmentKind::*;
    match label {
        S1 => &[Crossing],
        S2 => &[Companion, Crossing],
        S3 => &[Crossing, Companion],
        R2 | R3 => &[Companion],
        D1 | D2 | D3 | R1 => &[],
    }
}

/// A vertical segment just right of crossing `after` (1-based), joining the
/// 1-based rows `top < bottom`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Segment {
    pub after: usize,
    pub top: usize,
    pub bottom: usize,
}

/// Parity of the number of special disks from crossing `k` (1-based) back to
/// `segment`. Corners are allowed at crossings strictly between the two whose
/// value in `crossing_values` (indexed by 0-based crossing) is set.
pub fn special_disk_parity(
    d: &PlatDiagram,
    segment: Segment,
    k: usize,
    crossing_values: &[bool],
) -> bool {
    if k <= segment.after || k > d.crossing_count() {
        return false;
    }
    parity_to_segment(d, segment.after, segment.top - 1, segment.bottom - 1, k - 1, crossing_values)
}

/// 0-based core of [`special_disk_parity`]: the segment sits at slice
/// `after` (just right of crossing `after - 1`), the target is crossing `k`.
fn parity_to_segment(
    d: &PlatDiagram,
    after: usize,
    top: usize,
    bottom: usize,
    k: usize,
    values: &[bool],
) -> bool {
    let (a, b) = d.crossing_rows(k);
    let mut frontier: HashMap<(usize, usize), bool> = HashMap::from([((a, b), true)]);
    for l in (after..k).rev() {
        let (ca, _) = d.crossing_rows(l);
        let mut next: HashMap<(usize, usize), bool> = HashMap::new();
        for ((u, w), odd) in frontier {
            if !odd {
                continue;
            }
            for (nu, nw, corner) in leftward_moves(u, w, ca) {
                if matches!(corner, Some(Corner::Upper | Corner::Lower)) && !values[l] {
                    continue;
                }
                *next.entry((nu, nw)).or_insert(false) ^= true;
            }
        }
        frontier = next;
    }
    frontier.get(&(top, bottom)).copied().unwrap_or(false)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct UpdatePass {
    pub segment_kind: SegmentKind,
    pub segment: Segment,
    /// 1-based crossings whose value flipped in this pass.
    pub flipped: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExtensionRecord {
    pub crossing: usize,
    /// `None` for crossings whose degree is not divisible by rho.
    pub label: Option<ConfigLabel>,
    pub augmented: bool,
    pub passes: Vec<UpdatePass>,
}

/// The virtual augmentations `eps_1 .. eps_{m+1}` and what happened at each
/// crossing. Intermediate values of two-pass updates are recoverable from
/// the per-pass flip lists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VirtualAugTrace {
    pub steps: Vec<Augmentation>,
    pub records: Vec<ExtensionRecord>,
}

impl VirtualAugTrace {
    pub fn final_augmentation(&self) -> &Augmentation {
        self.steps.last().expect("trace holds eps_1")
    }
}

/// Runs the extension algorithm on an augmentation.
pub fn ruling_from_augmentation(
    d: &PlatDiagram,
    m: &MaslovData,
    g: &Dga,
    eps: &Augmentation,
    rho: u64,
) -> Result<(Ruling, VirtualAugTrace)> {
    check_rho(rho, m.modulus)?;
    if rho != 0 && rho % 2 == 0 {
        return Err(Error::EvenRhoUnsupported(rho));
    }
    if !is_augmentation(g, eps, rho)? {
        return Err(Error::NotAnAugmentation { rho });
    }
    extend(d, m, eps, rho)
}

fn extend(
    d: &PlatDiagram,
    m: &MaslovData,
    eps: &Augmentation,
    rho: u64,
) -> Result<(Ruling, VirtualAugTrace)> {
    let crossings = d.crossing_count();
    let gradings = crossing_gradings(d, m);
    let mut state = PairingState::cusp_pairing(d.rows());
    let mut current = eps.clone();
    let mut steps = vec![current.clone()];
    let mut records = Vec::with_capacity(crossings);
    let mut switches = BTreeSet::new();
    let mut decided = Vec::with_capacity(crossings);

    for j in 0..crossings {
        let (a, b) = d.crossing_rows(j);
        if state.partner(a) == b {
            return Err(Error::ReportFailure(format!(
                "crossing {} joins companion strands",
                j + 1
            )));
        }
        let augmented = current.0[j];
        if !gradings[j].is_divisible_by(rho) {
            state.transpose(a, b);
            decided.push(None);
            records.push(ExtensionRecord {
                crossing: j + 1,
                label: None,
                augmented,
                passes: vec![],
            });
            steps.push(current.clone());
            continue;
        }

        let side = companions(&state, a, b);
        let kind = match (state.interlaced(a, b), augmented) {
            (false, true) => CrossingKind::Switch,
            (false, false) => CrossingKind::Departure,
            (true, _) => CrossingKind::Return,
        };
        let lab = label(kind, side);
        if kind == CrossingKind::Switch {
            switches.insert(j + 1);
        } else {
            state.transpose(a, b);
        }
        decided.push(Some(kind));

        let mut passes = Vec::new();
        if augmented {
            for &seg_kind in passes_for(lab) {
                let (top, bottom) = match seg_kind {
                    SegmentKind::Crossing => (a, b),
                    SegmentKind::Companion => {
                        let (x, y) = (state.partner(a), state.partner(b));
                        (x.min(y), x.max(y))
                    }
                };
                let mut flipped = Vec::new();
                for k in j + 1..crossings {
                    if parity_to_segment(d, j + 1, top, bottom, k, &current.0[..crossings]) {
                        current.0[k] = !current.0[k];
                        flipped.push(k + 1);
                    }
                }
                passes.push(UpdatePass {
                    segment_kind: seg_kind,
                    segment: Segment {
                        after: j + 1,
                        top: top + 1,
                        bottom: bottom + 1,
                    },
                    flipped,
                });
            }
        }
        records.push(ExtensionRecord {
            crossing: j + 1,
            label: Some(lab),
            augmented,
            passes,
        });
        steps.push(current.clone());
    }

    let ruling = Ruling::from_switches(d, &gradings, rho, &switches).ok_or_else(|| {
        Error::ReportFailure(format!(
            "switches {switches:?} produced by the extension do not form a ruling"
        ))
    })?;
    if ruling.classification != decided {
        return Err(Error::ReportFailure(
            "extension decisions disagree with ruling classification".into(),
        ));
    }
    Ok((ruling, VirtualAugTrace { steps, records }))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fiber {
    pub ruling: Ruling,
    pub augmentations: Vec<Augmentation>,
    pub finals: Vec<Augmentation>,
    /// `2^((theta + chi*)/2)`; `None` when the exponent is not a
    /// non-negative integer.
    pub expected_size: Option<u128>,
}

/// Every enumerated ruling with the augmentations the algorithm sends to it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiberTable {
    pub rho: u64,
    pub chi_star: i64,
    pub fibers: Vec<Fiber>,
    /// Rulings produced by the algorithm that the sweep did not enumerate.
    pub strays: Vec<Ruling>,
}

impl FiberTable {
    pub fn augmentation_count(&self) -> usize {
        self.fibers.iter().map(|f| f.augmentations.len()).sum()
    }

    pub fn to_json(&self, g: &Dga) -> serde_json::Value {
        let crossings = g.crossing_count();
        let fibers: Vec<_> = self
            .fibers
            .iter()
            .map(|f| {
                serde_json::json!({
                    "ruling": f.ruling.to_json(),
                    "theta": f.ruling.theta,
                    "fiber": f.augmentations.iter().map(|a| a.to_json(g)).collect::<Vec<_>>(),
                    "patterns": f.augmentations.iter().map(|a| a.pattern(crossings)).collect::<Vec<_>>(),
                    "expected_size": f.expected_size,
                    "actual_size": f.augmentations.len(),
                })
            })
            .collect();
        serde_json::json!(fibers)
    }
}

fn expected_fiber_size(theta: i64, chi: i64) -> Option<u128> {
    let t = theta + chi;
    if t < 0 || t % 2 != 0 || t / 2 >= 127 {
        return None;
    }
    Some(1u128 << (t / 2))
}

pub fn fibers(
    d: &PlatDiagram,
    m: &MaslovData,
    g: &Dga,
    rho: u64,
    max_eligible: usize,
) -> Result<FiberTable> {
    let chi = chi_star(g, rho)?;
    let augs = enumerate_augmentations_bounded(g, rho, max_eligible)?;
    let rulings = enumerate_rulings(d, m, rho)?;
    let mut by_ruling: BTreeMap<Ruling, (Vec<Augmentation>, Vec<Augmentation>)> = BTreeMap::new();
    for eps in &augs {
        let (r, trace) = extend(d, m, eps, rho)?;
        let entry = by_ruling.entry(r).or_default();
        entry.0.push(eps.clone());
        entry.1.push(trace.final_augmentation().clone());
    }
    let mut fibers = Vec::with_capacity(rulings.len());
    for r in rulings {
        let (augmentations, finals) = by_ruling.remove(&r).unwrap_or_default();
        let expected_size = expected_fiber_size(r.theta, chi);
        fibers.push(Fiber {
            ruling: r,
            augmentations,
            finals,
            expected_size,
        });
    }
    Ok(FiberTable {
        rho,
        chi_star: chi,
        fibers,
        strays: by_ruling.into_keys().collect(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CorrespondenceReport {
    pub rho: u64,
    pub chi_star: i64,
    pub augmentations: usize,
    pub rulings: usize,
    pub aug_number: HalfPow,
    pub theta_sum: Option<HalfPow>,
    pub checks: Vec<Check>,
}

impl CorrespondenceReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    /// `Err(ReportFailure)` naming the first violated clause.
    pub fn ensure(&self) -> Result<()> {
        match first_failure(&self.checks) {
            None => Ok(()),
            Some(c) => Err(Error::ReportFailure(format!("{}: {}", c.name, c.detail))),
        }
    }
}

/// Checks fiber sizes against theta and against the return count, the
/// exact sum formula, the support of final virtual augmentations and their
/// injectivity.
pub fn verify_correspondence(
    d: &PlatDiagram,
    m: &MaslovData,
    g: &Dga,
    rho: u64,
    max_eligible: usize,
) -> Result<(CorrespondenceReport, FiberTable)> {
    let table = fibers(d, m, g, rho, max_eligible)?;
    let chi = table.chi_star;
    let cusps = d.cusps();
    let crossings = d.crossing_count();
    let total = table.augmentation_count();
    let mut checks = Vec::new();

    let strays = Check::new(
        "every augmentation lands on an enumerated ruling",
        table.strays.is_empty(),
        if table.strays.is_empty() {
            String::new()
        } else {
            format!("{} unexpected rulings", table.strays.len())
        },
    );
    checks.push(strays);

    let mut bad = Vec::new();
    for f in &table.fibers {
        if f.expected_size != Some(f.augmentations.len() as u128) {
            bad.push(format!(
                "{} theta={} has {} (expected {:?})",
                f.ruling.letters(),
                f.ruling.theta,
                f.augmentations.len(),
                f.expected_size
            ));
        }
    }
    checks.push(Check::new(
        "fiber size is 2^((theta + chi*)/2)",
        bad.is_empty(),
        bad.join("; "),
    ));

    let mut bad = Vec::new();
    for f in &table.fibers {
        let exp = if rho == 1 { f.ruling.r + cusps } else { f.ruling.r };
        let want = 1u128.checked_shl(exp as u32);
        if want != Some(f.augmentations.len() as u128) {
            bad.push(format!(
                "{} r={} has {}",
                f.ruling.letters(),
                f.ruling.r,
                f.augmentations.len()
            ));
        }
    }
    checks.push(Check::new(
        if rho == 1 {
            "fiber size is 2^(r + c(D))"
        } else {
            "fiber size is 2^r"
        },
        bad.is_empty(),
        bad.join("; "),
    ));

    let aug_number = HalfPow::scaled(total as u128, -chi);
    let theta_sum = HalfPow::checked_sum(
        table
            .fibers
            .iter()
            .map(|f| HalfPow::sqrt2_pow(f.ruling.theta))
            .collect::<Vec<_>>()
            .iter(),
    );
    checks.push(Check::new(
        "Aug equals the sum of 2^(theta/2)",
        theta_sum == Some(aug_number),
        format!(
            "Aug = {aug_number}, sum = {}",
            theta_sum.map_or("mixed parity".to_string(), |s| s.to_string())
        ),
    ));

    let mut bad = Vec::new();
    for f in &table.fibers {
        for fin in &f.finals {
            for (j, kind) in f.ruling.classification.iter().enumerate() {
                let on = fin.0[j];
                let ok = match kind {
                    Some(CrossingKind::Switch) => on,
                    Some(CrossingKind::Return) => true,
                    _ => !on,
                };
                if !ok {
                    bad.push(format!(
                        "{}: final {} at q{}",
                        f.ruling.letters(),
                        fin.pattern(crossings),
                        j + 1
                    ));
                }
            }
        }
    }
    bad.truncate(5);
    checks.push(Check::new(
        "final virtual augmentation supports all switches and only returns besides",
        bad.is_empty(),
        bad.join("; "),
    ));

    let finals: BTreeSet<&Augmentation> = table.fibers.iter().flat_map(|f| &f.finals).collect();
    checks.push(Check::new(
        "distinct augmentations give distinct final virtual augmentations",
        finals.len() == total,
        format!("{} finals for {} augmentations", finals.len(), total),
    ));

    let report = CorrespondenceReport {
        rho,
        chi_star: chi,
        augmentations: total,
        rulings: table.fibers.len(),
        aug_number,
        theta_sum,
        checks,
    };
    Ok((report, table))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::augment::DEFAULT_MAX_ELIGIBLE;
    use crate::dga::build_dga;
    use crate::diagram::{maslov, Orientation};

    struct Setup {
        d: PlatDiagram,
        m: MaslovData,
        g: Dga,
    }

    fn setup(n: usize, w: &[usize]) -> Setup {
        let d = PlatDiagram::new(n, w.to_vec()).unwrap();
        let m = maslov(&d, Orientation::Forward);
        let g = build_dga(&d, &m).unwrap();
        Setup { d, m, g }
    }

    fn eps(s: &Setup, crossing_bits: &str) -> Augmentation {
        let mut e = Augmentation::zero(s.g.len());
        for (i, c) in crossing_bits.chars().enumerate() {
            e.0[i] = c == '1';
        }
        e
    }

    #[test]
    fn trefoil_runs() {
        let s = setup(2, &[2, 2, 2]);
        let run = |bits: &str| {
            let (r, t) = ruling_from_augmentation(&s.d, &s.m, &s.g, &eps(&s, bits), 0).unwrap();
            (r.letters(), t.final_augmentation().pattern(3))
        };
        assert_eq!(run("100"), ("SSS".into(), "111".into()));
        assert_eq!(run("110"), ("SDR".into(), "100".into()));
        assert_eq!(run("111"), ("SDR".into(), "101".into()));
        assert_eq!(run("001"), ("DRS".into(), "001".into()));
        assert_eq!(run("011"), ("DRS".into(), "011".into()));
    }

    #[test]
    fn trefoil_labels() {
        let s = setup(2, &[2, 2, 2]);
        let (_, t) = ruling_from_augmentation(&s.d, &s.m, &s.g, &eps(&s, "011"), 0).unwrap();
        let labels: Vec<_> = t.records.iter().map(|r| r.label.unwrap()).collect();
        assert_eq!(labels, [ConfigLabel::D1, ConfigLabel::R1, ConfigLabel::S1]);
        let (_, t) = ruling_from_augmentation(&s.d, &s.m, &s.g, &eps(&s, "100"), 0).unwrap();
        assert_eq!(t.records[0].passes[0].flipped, vec![2]);
        assert_eq!(t.steps.len(), 4);
    }

    #[test]
    fn rejects_non_augmentations() {
        let s = setup(2, &[2, 2, 2]);
        assert_eq!(
            ruling_from_augmentation(&s.d, &s.m, &s.g, &eps(&s, "000"), 0).map(|_| ()),
            Err(Error::NotAnAugmentation { rho: 0 })
        );
        let k = setup(2, &[1, 2]);
        assert!(matches!(
            ruling_from_augmentation(&k.d, &k.m, &k.g, &eps(&k, "00"), 0),
            Err(Error::RhoIncompatible { .. })
        ));
    }

    #[test]
    fn special_disks() {
        let s = setup(2, &[2, 2, 2]);
        let seg = Segment { after: 2, top: 1, bottom: 4 };
        assert!(!special_disk_parity(&s.d, seg, 3, &[true, true, true]));
        let thin = Segment { after: 1, top: 2, bottom: 3 };
        assert!(special_disk_parity(&s.d, thin, 2, &[false; 3]));
        assert!(!special_disk_parity(&s.d, thin, 1, &[false; 3]));
    }

    #[test]
    fn trefoil_fibers() {
        let s = setup(2, &[2, 2, 2]);
        let t = fibers(&s.d, &s.m, &s.g, 0, DEFAULT_MAX_ELIGIBLE).unwrap();
        let sizes: Vec<(String, usize)> = t
            .fibers
            .iter()
            .map(|f| (f.ruling.letters(), f.augmentations.len()))
            .collect();
        assert_eq!(
            sizes,
            [("SDR".into(), 2), ("SSS".into(), 1), ("DRS".into(), 2)]
        );
        let (rep, _) = verify_correspondence(&s.d, &s.m, &s.g, 0, DEFAULT_MAX_ELIGIBLE).unwrap();
        assert!(rep.passed(), "{:?}", rep.checks);
        assert_eq!(rep.aug_number, HalfPow::new(5, -1));
    }

    #[test]
    fn unknot_fibers() {
        let s = setup(1, &[]);
        let t0 = fibers(&s.d, &s.m, &s.g, 0, DEFAULT_MAX_ELIGIBLE).unwrap();
        assert_eq!(t0.fibers.len(), 1);
        assert_eq!(t0.fibers[0].augmentations.len(), 1);
        let t1 = fibers(&s.d, &s.m, &s.g, 1, DEFAULT_MAX_ELIGIBLE).unwrap();
        assert_eq!(t1.fibers[0].augmentations.len(), 2);
        let (rep, _) = verify_correspondence(&s.d, &s.m, &s.g, 1, DEFAULT_MAX_ELIGIBLE).unwrap();
        assert!(rep.passed());
    }

    #[test]
    fn kinked_unknot_vacuous() {
        let s = setup(2, &[1, 2]);
        let (rep, t) = verify_correspondence(&s.d, &s.m, &s.g, 1, DEFAULT_MAX_ELIGIBLE).unwrap();
        assert!(rep.passed());
        assert_eq!((rep.augmentations, rep.rulings), (0, 0));
        assert!(t.fibers.is_empty());
        assert_eq!(rep.aug_number, HalfPow::ZERO);
    }
}
