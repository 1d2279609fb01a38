//! Graded normal rulings, found by a left-to-right sweep over pairing states.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use serde::Serialize;

use crate::diagram::{
    check_rho, crossing_gradings, Grading, MaslovData, PairingState, PlatDiagram,
};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum CrossingKind {
    #[serde(rename = "S")]
    Switch,
    #[serde(rename = "D")]
    Departure,
    #[serde(rename = "R")]
    Return,
}

impl CrossingKind {
    pub fn letter(self) -> char {
        match self {
            CrossingKind::Switch => 'S',
            CrossingKind::Departure => 'D',
            CrossingKind::Return => 'R',
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Ruling {
    /// 1-based crossing indices.
    pub switches: BTreeSet<usize>,
    /// Kind of every crossing whose grading is divisible by rho.
    pub classification: Vec<Option<CrossingKind>>,
    pub s: usize,
    pub d: usize,
    pub r: usize,
    pub theta: i64,
}

impl Ruling {
    /// Letters of the eligible crossings in word order, e.g. `"SDR"`.
    pub fn letters(&self) -> String {
        self.classification
            .iter()
            .flatten()
            .map(|k| k.letter())
            .collect()
    }

    /// Validates a switch set against the ruling conditions and classifies
    /// every eligible crossing. `None` if the switches do not form a ruling.
    pub fn from_switches(
        d: &PlatDiagram,
        gradings: &[Grading],
        rho: u64,
        switches: &BTreeSet<usize>,
    ) -> Option<Ruling> {
        let mut state = PairingState::cusp_pairing(d.rows());
        let mut classification = Vec::with_capacity(d.crossing_count());
        for (j, g) in gradings.iter().enumerate() {
            let (a, b) = d.crossing_rows(j);
            if state.partner(a) == b {
                return None;
            }
            let interlaced = state.interlaced(a, b);
            let switch = switches.contains(&(j + 1));
            if !g.is_divisible_by(rho) {
                if switch {
                    return None;
                }
                classification.push(None);
                state.transpose(a, b);
                continue;
            }
            let kind = match (interlaced, switch) {
                (false, true) => CrossingKind::Switch,
                (false, false) => CrossingKind::Departure,
                (true, false) => CrossingKind::Return,
                (true, true) => return None,
            };
            if kind != CrossingKind::Switch {
                state.transpose(a, b);
            }
            classification.push(Some(kind));
        }
        if state != PairingState::cusp_pairing(d.rows()) {
            return None;
        }
        Some(Ruling::assemble(d.cusps(), classification))
    }

    fn assemble(cusps: usize, classification: Vec<Option<CrossingKind>>) -> Ruling {
        let mut switches = BTreeSet::new();
        let (mut s, mut dd, mut r) = (0, 0, 0);
        for (j, k) in classification.iter().enumerate() {
            match k {
                Some(CrossingKind::Switch) => {
                    s += 1;
                    switches.insert(j + 1);
                }
                Some(CrossingKind::Departure) => dd += 1,
                Some(CrossingKind::Return) => r += 1,
                None => {}
            }
        }
        Ruling {
            switches,
            classification,
            s,
            d: dd,
            r,
            theta: cusps as i64 - s as i64,
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        let classes: serde_json::Map<String, serde_json::Value> = self
            .classification
            .iter()
            .enumerate()
            .filter_map(|(j, k)| k.map(|k| (format!("q{}", j + 1), k.letter().to_string().into())))
            .collect();
        serde_json::json!({
            "switches": self.switches,
            "classification": classes,
            "letters": self.letters(),
            "theta": self.theta,
            "s": self.s,
            "d": self.d,
            "r": self.r,
        })
    }
}

/// All `rho`-graded rulings, ordered lexicographically by switch set.
pub fn enumerate_rulings(d: &PlatDiagram, m: &MaslovData, rho: u64) -> Result<Vec<Ruling>> {
    check_rho(rho, m.modulus)?;
    let eligible: Vec<bool> = crossing_gradings(d, m)
        .iter()
        .map(|g| g.is_divisible_by(rho))
        .collect();
    let mut out = Vec::new();
    let mut kinds = Vec::with_capacity(d.crossing_count());
    sweep(
        d,
        &eligible,
        0,
        PairingState::cusp_pairing(d.rows()),
        &mut kinds,
        &mut out,
    );
    out.sort();
    Ok(out)
}

fn sweep(
    d: &PlatDiagram,
    eligible: &[bool],
    j: usize,
    state: PairingState,
    kinds: &mut Vec<Option<CrossingKind>>,
    out: &mut Vec<Ruling>,
) {
    if j == d.crossing_count() {
        if state == PairingState::cusp_pairing(d.rows()) {
            out.push(Ruling::assemble(d.cusps(), kinds.clone()));
        }
        return;
    }
    let (a, b) = d.crossing_rows(j);
    if state.partner(a) == b {
        return;
    }
    let mut passed = state.clone();
    passed.transpose(a, b);
    if !eligible[j] {
        kinds.push(None);
        sweep(d, eligible, j + 1, passed, kinds, out);
        kinds.pop();
        return;
    }
    if state.interlaced(a, b) {
        kinds.push(Some(CrossingKind::Return));
        sweep(d, eligible, j + 1, passed, kinds, out);
        kinds.pop();
    } else {
        kinds.push(Some(CrossingKind::Switch));
        sweep(d, eligible, j + 1, state, kinds, out);
        kinds.pop();
        kinds.push(Some(CrossingKind::Departure));
        sweep(d, eligible, j + 1, passed, kinds, out);
        kinds.pop();
    }
}

/// Multiset of theta values, kept as value -> multiplicity.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ThetaMultiset(pub BTreeMap<i64, usize>);

impl ThetaMultiset {
    pub fn values(&self) -> Vec<i64> {
        self.0
            .iter()
            .flat_map(|(&t, &c)| std::iter::repeat_n(t, c))
            .collect()
    }

    pub fn len(&self) -> usize {
        self.0.values().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

pub fn theta_multiset(rulings: &[Ruling]) -> ThetaMultiset {
    let mut m = BTreeMap::new();
    for r in rulings {
        *m.entry(r.theta).or_insert(0) += 1;
    }
    ThetaMultiset(m)
}

/// Laurent polynomial in `z` with non-negative integer coefficients.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LaurentPoly(pub BTreeMap<i64, u64>);

impl LaurentPoly {
    pub fn coefficient(&self, exp: i64) -> u64 {
        self.0.get(&exp).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// The multiset `{exp^coef}` this polynomial enumerates.
    pub fn as_multiset(&self) -> ThetaMultiset {
        ThetaMultiset(self.0.iter().map(|(&e, &c)| (e, c as usize)).collect())
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("0");
        }
        let terms: Vec<String> = self
            .0
            .iter()
            .map(|(&e, &c)| {
                let coef = if c == 1 && e != 0 { String::new() } else { c.to_string() };
                match e {
                    0 => coef,
                    1 => format!("{coef}z"),
                    e => format!("{coef}z^{e}"),
                }
            })
            .collect();
        f.write_str(&terms.join(" + "))
    }
}

impl Serialize for LaurentPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let terms: Vec<(i64, u64)> = self.0.iter().map(|(&e, &c)| (e, c)).collect();
        terms.serialize(s)
    }
}

/// `sum_R z^theta(R)`, by a transfer sweep over pairing states carrying
/// switch-count polynomials.
pub fn ruling_polynomial(d: &PlatDiagram, m: &MaslovData, rho: u64) -> Result<LaurentPoly> {
    check_rho(rho, m.modulus)?;
    let gradings = crossing_gradings(d, m);
    let mut layer: HashMap<PairingState, BTreeMap<usize, u64>> = HashMap::new();
    layer.insert(PairingState::cusp_pairing(d.rows()), BTreeMap::from([(0, 1)]));
    for (j, g) in gradings.iter().enumerate() {
        let (a, b) = d.crossing_rows(j);
        let mut next: HashMap<PairingState, BTreeMap<usize, u64>> = HashMap::new();
        let mut add = |state: PairingState, poly: &BTreeMap<usize, u64>, shift: usize| {
            let entry = next.entry(state).or_default();
            for (&s, &c) in poly {
                *entry.entry(s + shift).or_insert(0) += c;
            }
        };
        for (state, poly) in &layer {
            if state.partner(a) == b {
                continue;
            }
            let mut passed = state.clone();
            passed.transpose(a, b);
            if g.is_divisible_by(rho) && !state.interlaced(a, b) {
                add(state.clone(), poly, 1);
            }
            add(passed, poly, 0);
        }
        layer = next;
    }
    let mut out = BTreeMap::new();
    if let Some(poly) = layer.get(&PairingState::cusp_pairing(d.rows())) {
        for (&s, &c) in poly {
            out.insert(d.cusps() as i64 - s as i64, c);
        }
    }
    Ok(LaurentPoly(out))
}

/// Sign of an interlaced pair from `m(a2) - m(b2)`.
pub fn interlacing_sign(diff: i64, rho: u64) -> i64 {
    if rho == 0 {
        let plus = (diff <= 0 && diff % 2 == 0) || (diff > 0 && diff % 2 == 1);
        if plus {
            1
        } else {
            -1
        }
    } else {
        let r = diff.rem_euclid(rho as i64);
        if r == 0 || r % 2 == 1 {
            1
        } else {
            -1
        }
    }
}

/// Signed interlacing number of a ruling (unsigned for `rho = 1`) just
/// right of the left cusps, after each crossing, and at the right cusps,
/// where the pairing is the cusp pairing: `m + 2` entries in all.
pub fn interlacing_trace(
    d: &PlatDiagram,
    m: &MaslovData,
    ruling: &Ruling,
    rho: u64,
) -> Result<Vec<i64>> {
    check_rho(rho, m.modulus)?;
    if rho != 0 && rho % 2 == 0 {
        return Err(Error::EvenRhoUnsupported(rho));
    }
    let states = crate::diagram::slice_pairing_sweep(d, &ruling.switches);
    let occupants = d.slice_occupants();
    let mut trace: Vec<i64> = states
        .iter()
        .zip(&occupants)
        .map(|(state, occ)| slice_interlacing(state, occ, m, rho))
        .collect();
    let closing = PairingState::cusp_pairing(d.rows());
    let last = occupants.last().expect("at least one slice");
    trace.push(slice_interlacing(&closing, last, m, rho));
    Ok(trace)
}

fn slice_interlacing(state: &PairingState, occ: &[usize], m: &MaslovData, rho: u64) -> i64 {
    let pairs: Vec<(usize, usize)> = state
        .partners()
        .iter()
        .enumerate()
        .filter(|&(i, &p)| i < p)
        .map(|(i, &p)| (i, p))
        .collect();
    let mut total = 0;
    for (x, &(_, a2)) in pairs.iter().enumerate() {
        for &(b1, b2) in &pairs[x + 1..] {
            // Pairs are sorted by top row, so a1 < b1.
            if !(b1 < a2 && a2 < b2) {
                continue;
            }
            total += if rho == 1 {
                1
            } else {
                let diff = m.potential[occ[a2]] - m.potential[occ[b2]];
                interlacing_sign(diff, rho)
            };
        }
    }
    total
}

/// Change of the interlacing number across a non-switch crossing of the
/// given degree that acts geometrically as a departure or a return.
pub fn expected_step(grading: Grading, kind: CrossingKind, rho: u64) -> i64 {
    debug_assert!(kind != CrossingKind::Switch);
    if rho == 1 {
        return if kind == CrossingKind::Departure { 1 } else { -1 };
    }
    let c = grading.residue(rho);
    if c == 0 {
        return if kind == CrossingKind::Departure { 1 } else { -1 };
    }
    if rho == 0 {
        let plus = (c < 0 && c % 2 != 0) || (c > 0 && c % 2 == 0);
        if plus {
            1
        } else {
            -1
        }
    } else if c % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Geometric kind of every crossing of a ruling, including those whose
/// degree is not divisible by rho (which are departures or returns).
pub fn geometric_kinds(d: &PlatDiagram, ruling: &Ruling) -> Vec<CrossingKind> {
    let states = crate::diagram::slice_pairing_sweep(d, &ruling.switches);
    (0..d.crossing_count())
        .map(|j| {
            if ruling.switches.contains(&(j + 1)) {
                CrossingKind::Switch
            } else {
                let (a, b) = d.crossing_rows(j);
                if states[j].interlaced(a, b) {
                    CrossingKind::Return
                } else {
                    CrossingKind::Departure
                }
            }
        })
        .collect()
}
