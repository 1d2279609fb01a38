//! Plat-position fronts: the data model, the text/JSON parser, Maslov
//! potentials, crossing gradings and the classical invariants.
//!
//! A plat with `n` cusps has `2n` strand rows, numbered `1..=2n` from top to
//! bottom in every public interface. Left and right cusps both join the row
//! pairs `(2k-1, 2k)`. The word lists crossings left to right; a letter `p`
//! is a crossing between rows `p` and `p+1`.
//!
//! Internally rows are 0-based, and a *strand* is named by the 0-based row at
//! which it leaves the left cusps. Crossings only move strands between rows,
//! so each strand is a single smooth arc from a left cusp to a right cusp.

use std::fmt;
use std::ops::Add;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct PlatDiagram {
    cusps: usize,
    word: Vec<usize>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPlat {
    cusps: usize,
    word: Vec<usize>,
}

impl PlatDiagram {
    /// Validates positions and checks that the closure is a single component.
    pub fn new(cusps: usize, word: Vec<usize>) -> Result<Self> {
        if cusps == 0 {
            return Err(Error::Syntax("cusp count must be positive".into()));
        }
        let max = 2 * cusps - 2;
        for (i, &p) in word.iter().enumerate() {
            if p < 1 || p > max {
                return Err(Error::Range {
                    index: i + 1,
                    position: p,
                    max,
                });
            }
        }
        let components = component_count(cusps, &word);
        if components != 1 {
            return Err(Error::NotAKnot { components });
        }
        Ok(Self { cusps, word })
    }

    /// Number of left cusps, which equals the number of right cusps.
    pub fn cusps(&self) -> usize {
        self.cusps
    }

    pub fn word(&self) -> &[usize] {
        &self.word
    }

    pub fn crossing_count(&self) -> usize {
        self.word.len()
    }

    pub fn rows(&self) -> usize {
        2 * self.cusps
    }

    /// 0-based (upper, lower) rows of crossing `j` (0-based word index).
    pub fn crossing_rows(&self, j: usize) -> (usize, usize) {
        let p = self.word[j];
        (p - 1, p)
    }

    /// Strand occupying each row, for every generic slice `0..=m`.
    /// Slice 0 lies just right of the left cusps, slice `j` just right of
    /// crossing `j`.
    pub fn slice_occupants(&self) -> Vec<Vec<usize>> {
        let mut row: Vec<usize> = (0..self.rows()).collect();
        let mut out = Vec::with_capacity(self.word.len() + 1);
        out.push(row.clone());
        for j in 0..self.word.len() {
            let (a, b) = self.crossing_rows(j);
            row.swap(a, b);
            out.push(row.clone());
        }
        out
    }

    /// Right-end row reached by each strand.
    pub fn strand_ends(&self) -> Vec<usize> {
        let occ = self.slice_occupants();
        let last = occ.last().expect("at least one slice");
        let mut ends = vec![0; self.rows()];
        for (row, &s) in last.iter().enumerate() {
            ends[s] = row;
        }
        ends
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("plat {} :", self.cusps);
        for p in &self.word {
            s.push(' ');
            s.push_str(&p.to_string());
        }
        s
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("plain struct serializes")
    }
}

impl fmt::Display for PlatDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl FromStr for PlatDiagram {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_plat(s)
    }
}

impl<'de> Deserialize<'de> for PlatDiagram {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let raw = RawPlat::deserialize(de)?;
        PlatDiagram::new(raw.cusps, raw.word).map_err(serde::de::Error::custom)
    }
}

/// Parses `plat <n> : <p_1> ... <p_m>` or `{"cusps": n, "word": [...]}`.
/// Lines starting with `#` are ignored in the text form.
pub fn parse_plat(text: &str) -> Result<PlatDiagram> {
    let trimmed = text.trim();
    if trimmed.starts_with('{') {
        let raw: RawPlat =
            serde_json::from_str(trimmed).map_err(|e| Error::Syntax(e.to_string()))?;
        return PlatDiagram::new(raw.cusps, raw.word);
    }

    let body: Vec<&str> = trimmed
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .collect();
    let body = body.join(" ");
    let (head, tail) = body
        .split_once(':')
        .ok_or_else(|| Error::Syntax("expected `plat <n> : <word>`".into()))?;
    let mut head = head.split_whitespace();
    if head.next() != Some("plat") {
        return Err(Error::Syntax("expected keyword `plat`".into()));
    }
    let n = head
        .next()
        .ok_or_else(|| Error::Syntax("missing cusp count".into()))?;
    let cusps: usize = n
        .parse()
        .map_err(|_| Error::Syntax(format!("bad cusp count `{n}`")))?;
    if let Some(extra) = head.next() {
        return Err(Error::Syntax(format!("unexpected token `{extra}` before `:`")));
    }
    let word = tail
        .split_whitespace()
        .map(|t| {
            t.parse::<usize>()
                .map_err(|_| Error::Syntax(format!("bad crossing position `{t}`")))
        })
        .collect::<Result<Vec<_>>>()?;
    PlatDiagram::new(cusps, word)
}

/// Number of closed components of the plat closure of `word`, without any
/// range validation beyond what indexing needs.
pub fn component_count(cusps: usize, word: &[usize]) -> usize {
    let rows = 2 * cusps;
    let mut row_of: Vec<usize> = (0..rows).collect();
    let mut strand_at: Vec<usize> = (0..rows).collect();
    for &p in word {
        let (a, b) = (p - 1, p);
        strand_at.swap(a, b);
        row_of[strand_at[a]] = a;
        row_of[strand_at[b]] = b;
    }
    // Each strand is an edge between its left cusp and its right cusp; count
    // cycles of the resulting 2-regular multigraph.
    let mut seen = vec![false; rows];
    let mut components = 0;
    for start in 0..rows {
        if seen[start] {
            continue;
        }
        components += 1;
        let mut s = start;
        loop {
            seen[s] = true;
            let right_partner = strand_at[row_of[s] ^ 1];
            seen[right_partner] = true;
            s = right_partner ^ 1;
            if seen[s] {
                break;
            }
        }
    }
    components
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Orientation {
    /// Leave the top of left cusp 1 moving right.
    #[default]
    Forward,
    Reverse,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Heading {
    Right,
    Left,
}

/// A Maslov potential together with the classical invariants it determines.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MaslovData {
    /// Integer representative of the potential on each strand, indexed by
    /// the strand's left row. The top strand of left cusp 1 is 0.
    pub potential: Vec<i64>,
    /// `|2r(K)|`; gradings live in `Z/modulus`.
    pub modulus: u64,
    pub rotation: i64,
    pub tb: i64,
    pub orientation: Orientation,
    /// Traversal heading of each strand under `orientation`: +1 rightward.
    pub heading: Vec<i8>,
}

/// Computes a Maslov potential by walking the knot once.
pub fn maslov(d: &PlatDiagram, orientation: Orientation) -> MaslovData {
    let rows = d.rows();
    let ends = d.strand_ends();
    let mut right_occupant = vec![0; rows];
    for (s, &r) in ends.iter().enumerate() {
        right_occupant[r] = s;
    }

    let mut potential: Vec<Option<i64>> = vec![None; rows];
    let mut heading = vec![0i8; rows];
    let (mut downs, mut ups) = (0i64, 0i64);

    let start_heading = match orientation {
        Orientation::Forward => Heading::Right,
        Orientation::Reverse => Heading::Left,
    };
    let mut s = 0usize;
    let mut h = start_heading;
    let mut mu = 0i64;
    loop {
        potential[s] = Some(mu);
        heading[s] = if h == Heading::Right { 1 } else { -1 };
        // Row at which this strand meets its next cusp.
        let row = match h {
            Heading::Right => ends[s],
            Heading::Left => s,
        };
        // The upper row of a cusp pair is even (0-based).
        if row % 2 == 0 {
            downs += 1;
            mu -= 1;
        } else {
            ups += 1;
            mu += 1;
        }
        let next = match h {
            Heading::Right => right_occupant[row ^ 1],
            Heading::Left => row ^ 1,
        };
        h = match h {
            Heading::Right => Heading::Left,
            Heading::Left => Heading::Right,
        };
        if next == 0 && h == start_heading {
            break;
        }
        s = next;
    }

    let rotation_twice = downs - ups;
    let rotation = rotation_twice / 2;
    let modulus = rotation_twice.unsigned_abs();
    let potential: Vec<i64> = potential
        .into_iter()
        .map(|v| v.expect("knot visits every strand"))
        .collect();

    let mut writhe = 0i64;
    let occ = d.slice_occupants();
    for j in 0..d.crossing_count() {
        let (a, b) = d.crossing_rows(j);
        let (sa, sb) = (occ[j][a], occ[j][b]);
        writhe += if heading[sa] == heading[sb] { 1 } else { -1 };
    }

    MaslovData {
        potential,
        modulus,
        rotation,
        tb: writhe - d.cusps() as i64,
        orientation,
        heading,
    }
}

impl MaslovData {
    /// Potential of a strand as a residue mod `modulus`.
    pub fn strand_index(&self, strand: usize) -> Grading {
        Grading::new(self.potential[strand], self.modulus)
    }
}

/// A degree in `Z/modulus` (in `Z` when the modulus is 0).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Grading {
    value: i64,
    modulus: u64,
}

impl Grading {
    pub fn new(value: i64, modulus: u64) -> Self {
        let value = if modulus == 0 {
            value
        } else {
            value.rem_euclid(modulus as i64)
        };
        Self { value, modulus }
    }

    /// Canonical representative: in `[0, modulus)` unless the modulus is 0.
    pub fn value(&self) -> i64 {
        self.value
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// Residue mod `rho` (the integer itself for `rho = 0`). Callers must
    /// have checked `rho | modulus`.
    pub fn residue(&self, rho: u64) -> i64 {
        if rho == 0 {
            self.value
        } else {
            self.value.rem_euclid(rho as i64)
        }
    }

    pub fn is_divisible_by(&self, rho: u64) -> bool {
        self.residue(rho) == 0
    }
}

impl Add for Grading {
    type Output = Grading;

    fn add(self, rhs: Grading) -> Grading {
        debug_assert_eq!(self.modulus, rhs.modulus);
        Grading::new(self.value + rhs.value, self.modulus)
    }
}

impl fmt::Display for Grading {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.modulus == 0 {
            write!(f, "{}", self.value)
        } else {
            write!(f, "{} mod {}", self.value, self.modulus)
        }
    }
}

/// Checks `rho | modulus`.
pub fn check_rho(rho: u64, modulus: u64) -> Result<()> {
    let ok = if rho == 0 {
        modulus == 0
    } else {
        modulus % rho == 0
    };
    if ok {
        Ok(())
    } else {
        Err(Error::RhoIncompatible { rho, modulus })
    }
}

/// Grading of crossing `j` (1-based): potential of the strand entering from
/// the upper row minus that of the strand entering from the lower row.
pub fn crossing_grading(d: &PlatDiagram, m: &MaslovData, j: usize) -> Result<Grading> {
    let len = d.crossing_count();
    if j == 0 || j > len {
        return Err(Error::Index { index: j, len });
    }
    Ok(crossing_gradings(d, m)[j - 1])
}

/// Gradings of all crossings in word order.
pub fn crossing_gradings(d: &PlatDiagram, m: &MaslovData) -> Vec<Grading> {
    let occ = d.slice_occupants();
    (0..d.crossing_count())
        .map(|j| {
            let (a, b) = d.crossing_rows(j);
            Grading::new(
                m.potential[occ[j][a]] - m.potential[occ[j][b]],
                m.modulus,
            )
        })
        .collect()
}

/// Fixed-point-free involution on the rows of a vertical slice.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PairingState {
    partner: Vec<usize>,
}

impl PairingState {
    /// The pairing `(1,2)(3,4)...` induced by the cusps.
    pub fn cusp_pairing(rows: usize) -> Self {
        Self {
            partner: (0..rows).map(|r| r ^ 1).collect(),
        }
    }

    /// Builds a state from 0-based partner indices, checking that it is a
    /// fixed-point-free involution.
    pub fn from_partners(partner: Vec<usize>) -> Option<Self> {
        let n = partner.len();
        let ok = partner
            .iter()
            .enumerate()
            .all(|(i, &p)| p < n && p != i && partner[p] == i);
        ok.then_some(Self { partner })
    }

    /// 0-based partner of a 0-based row.
    pub fn partner(&self, row: usize) -> usize {
        self.partner[row]
    }

    pub fn partners(&self) -> &[usize] {
        &self.partner
    }

    pub fn rows(&self) -> usize {
        self.partner.len()
    }

    /// Exchanges the rows `a` and `b` (what a crossing without a switch does).
    pub fn transpose(&mut self, a: usize, b: usize) {
        let (pa, pb) = (self.partner[a], self.partner[b]);
        if pa == b {
            return;
        }
        self.partner[a] = pb;
        self.partner[b] = pa;
        self.partner[pa] = b;
        self.partner[pb] = a;
    }

    /// 1-based pairs in increasing order.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        self.partner
            .iter()
            .enumerate()
            .filter(|&(i, &p)| i < p)
            .map(|(i, &p)| (i + 1, p + 1))
            .collect()
    }

    /// Whether the pairs through rows `a` and `b` alternate top to bottom.
    pub fn interlaced(&self, a: usize, b: usize) -> bool {
        let (pa, pb) = (self.partner[a], self.partner[b]);
        if pa == b {
            return false;
        }
        let (a_lo, a_hi) = (a.min(pa), a.max(pa));
        let (b_lo, b_hi) = (b.min(pb), b.max(pb));
        (a_lo < b_lo && b_lo < a_hi && a_hi < b_hi) || (b_lo < a_lo && a_lo < b_hi && b_hi < a_hi)
    }
}

impl fmt::Display for PairingState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (a, b) in self.pairs() {
            write!(f, "({a},{b})")?;
        }
        Ok(())
    }
}

impl Serialize for PairingState {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.pairs().serialize(s)
    }
}

/// Pairing state at each of the `m + 1` generic slices. Crossings listed in
/// `switches` (1-based) leave the state alone; all others transpose rows.
pub fn slice_pairing_sweep(
    d: &PlatDiagram,
    switches: &std::collections::BTreeSet<usize>,
) -> Vec<PairingState> {
    let mut state = PairingState::cusp_pairing(d.rows());
    let mut out = vec![state.clone()];
    for j in 0..d.crossing_count() {
        if !switches.contains(&(j + 1)) {
            let (a, b) = d.crossing_rows(j);
            state.transpose(a, b);
        }
        out.push(state.clone());
    }
    out
}
