//! The Chekanov DGA of a plat front over Z/2.
//!
//! Disks are counted on the resolved front. A disk starts at its positive
//! corner (the left quadrant of a crossing, or the inside of a right cusp)
//! and is swept leftward as a pair of boundary rows `(upper, lower)`. At a
//! crossing the upper boundary sitting on the crossing's lower row may turn
//! a convex corner and stay in that row; symmetrically for the lower
//! boundary on the crossing's upper row. The two boundaries may never meet
//! at a crossing, and the disk must close smoothly at a left cusp. Each
//! right cusp also picks up the constant word from its resolution loop.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use serde::Serialize;

use crate::diagram::{check_rho, crossing_gradings, Grading, MaslovData, PlatDiagram};
use crate::error::{Error, Result};

pub const DEFAULT_DISK_BUDGET: u64 = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct GenId(pub usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GeneratorKind {
    Crossing,
    RightCusp,
    /// Generators added by an algebraic stabilization.
    StabilizerLow,
    StabilizerHigh,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Generator {
    pub kind: GeneratorKind,
    /// 1-based position among generators of the same kind.
    pub index: usize,
    pub grading: Grading,
}

impl Generator {
    pub fn name(&self) -> String {
        let prefix = match self.kind {
            GeneratorKind::Crossing => "q",
            GeneratorKind::RightCusp => "c",
            GeneratorKind::StabilizerLow => "alpha",
            GeneratorKind::StabilizerHigh => "beta",
        };
        format!("{prefix}{}", self.index)
    }
}

/// A noncommutative monomial; the empty word is the unit.
pub type Word = Vec<GenId>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dga {
    generators: Vec<Generator>,
    differential: Vec<BTreeSet<Word>>,
    modulus: u64,
}

impl Dga {
    /// Assembles a DGA from explicit data. Words are taken mod 2, so a word
    /// listed twice in one differential is a caller error and is rejected.
    pub fn from_parts(
        generators: Vec<Generator>,
        differential: Vec<Vec<Word>>,
        modulus: u64,
    ) -> Option<Self> {
        if generators.len() != differential.len() {
            return None;
        }
        let n = generators.len();
        let mut out = Vec::with_capacity(n);
        for words in differential {
            let mut set = BTreeSet::new();
            for w in words {
                if w.iter().any(|g| g.0 >= n) || !set.insert(w) {
                    return None;
                }
            }
            out.push(set);
        }
        Some(Self {
            generators,
            differential: out,
            modulus,
        })
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn differential(&self, g: GenId) -> &BTreeSet<Word> {
        &self.differential[g.0]
    }

    pub fn crossing_count(&self) -> usize {
        self.generators
            .iter()
            .filter(|g| g.kind == GeneratorKind::Crossing)
            .count()
    }

    pub fn find(&self, name: &str) -> Option<GenId> {
        self.generators
            .iter()
            .position(|g| g.name() == name)
            .map(GenId)
    }

    pub fn word_grading(&self, w: &[GenId]) -> Grading {
        w.iter()
            .fold(Grading::new(0, self.modulus), |acc, g| {
                acc + self.generators[g.0].grading
            })
    }

    pub fn word_name(&self, w: &[GenId]) -> String {
        if w.is_empty() {
            return "1".into();
        }
        w.iter()
            .map(|g| self.generators[g.0].name())
            .collect::<Vec<_>>()
            .join(" ")
    }

    /// Adds an algebraic stabilization of degree `i`: generators of degree
    /// `i - 1` and `i` with `d(high) = low` and `d(low) = 0`.
    pub fn stabilize(&self, degree: i64) -> Dga {
        let index = 1 + self
            .generators
            .iter()
            .filter(|g| g.kind == GeneratorKind::StabilizerLow)
            .count();
        let mut out = self.clone();
        let low = GenId(out.generators.len());
        out.generators.push(Generator {
            kind: GeneratorKind::StabilizerLow,
            index,
            grading: Grading::new(degree - 1, self.modulus),
        });
        out.differential.push(BTreeSet::new());
        out.generators.push(Generator {
            kind: GeneratorKind::StabilizerHigh,
            index,
            grading: Grading::new(degree, self.modulus),
        });
        out.differential.push(BTreeSet::from([vec![low]]));
        out
    }

    /// Z/2 expansion of `d(d(g))`, using `d` as a derivation on words.
    pub fn d_squared(&self, g: GenId) -> BTreeSet<Word> {
        let mut acc: BTreeMap<Word, bool> = BTreeMap::new();
        for w in &self.differential[g.0] {
            for (pos, x) in w.iter().enumerate() {
                for v in &self.differential[x.0] {
                    let mut out = Vec::with_capacity(w.len() + v.len());
                    out.extend_from_slice(&w[..pos]);
                    out.extend_from_slice(v);
                    out.extend_from_slice(&w[pos + 1..]);
                    *acc.entry(out).or_insert(false) ^= true;
                }
            }
        }
        acc.into_iter().filter(|&(_, odd)| odd).map(|(w, _)| w).collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        let generators: Vec<_> = self
            .generators
            .iter()
            .map(|g| {
                serde_json::json!({
                    "name": g.name(),
                    "kind": g.kind,
                    "grading": g.grading.value(),
                })
            })
            .collect();
        let mut differential = serde_json::Map::new();
        for (g, words) in self.generators.iter().zip(&self.differential) {
            let words: Vec<Vec<String>> = words
                .iter()
                .map(|w| w.iter().map(|x| self.generators[x.0].name()).collect())
                .collect();
            differential.insert(g.name(), serde_json::json!(words));
        }
        serde_json::json!({
            "modulus": self.modulus,
            "generators": generators,
            "differential": differential,
        })
    }
}

impl fmt::Display for Dga {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (g, words) in self.generators.iter().zip(&self.differential) {
            let rhs = if words.is_empty() {
                "0".to_string()
            } else {
                words
                    .iter()
                    .map(|w| self.word_name(w))
                    .collect::<Vec<_>>()
                    .join(" + ")
            };
            writeln!(f, "d{} = {}   (|{}| = {})", g.name(), rhs, g.name(), g.grading)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Corner {
    Upper,
    Lower,
}

/// Moves of a boundary pair `(upper, lower)` leftward across a crossing
/// whose rows are `(a, a + 1)`. Returns no moves if the two boundaries would
/// meet at the crossing.
pub(crate) fn leftward_moves(
    upper: usize,
    lower: usize,
    a: usize,
) -> impl Iterator<Item = (usize, usize, Option<Corner>)> {
    let b = a + 1;
    let moves: [Option<(usize, usize, Option<Corner>)>; 2] = if upper == a && lower == b {
        [None, None]
    } else if upper == b {
        [Some((a, lower, None)), Some((b, lower, Some(Corner::Upper)))]
    } else if upper == a {
        [Some((b, lower, None)), None]
    } else if lower == a {
        [Some((upper, b, None)), Some((upper, a, Some(Corner::Lower)))]
    } else if lower == b {
        [Some((upper, a, None)), None]
    } else {
        [Some((upper, lower, None)), None]
    };
    moves.into_iter().flatten()
}

#[derive(Clone, PartialEq, Eq, Hash)]
struct DiskState {
    upper: usize,
    lower: usize,
    upper_corners: Vec<usize>,
    lower_corners: Vec<usize>,
}

/// Words of all disks whose positive corner sits just right of slice
/// `start` with boundary rows `(upper, lower)`, taken mod 2. Corner entries
/// are 0-based crossing indices.
fn disks_leftward(
    d: &PlatDiagram,
    start: usize,
    upper: usize,
    lower: usize,
    budget: &mut u64,
) -> Result<BTreeSet<Vec<usize>>> {
    let mut frontier: HashMap<DiskState, bool> = HashMap::new();
    frontier.insert(
        DiskState {
            upper,
            lower,
            upper_corners: vec![],
            lower_corners: vec![],
        },
        true,
    );
    for j in (0..start).rev() {
        let (a, _) = d.crossing_rows(j);
        let mut next: HashMap<DiskState, bool> = HashMap::with_capacity(frontier.len());
        for (st, odd) in frontier {
            if !odd {
                continue;
            }
            if *budget == 0 {
                return Err(Error::ResourceLimit(format!(
                    "disk enumeration exceeded its state budget at crossing {}",
                    j + 1
                )));
            }
            *budget -= 1;
            for (u, l, corner) in leftward_moves(st.upper, st.lower, a) {
                let mut s = DiskState {
                    upper: u,
                    lower: l,
                    upper_corners: st.upper_corners.clone(),
                    lower_corners: st.lower_corners.clone(),
                };
                match corner {
                    Some(Corner::Upper) => s.upper_corners.push(j),
                    Some(Corner::Lower) => s.lower_corners.push(j),
                    None => {}
                }
                *next.entry(s).or_insert(false) ^= true;
            }
        }
        frontier = next;
    }

    let mut words: BTreeMap<Vec<usize>, bool> = BTreeMap::new();
    for (st, odd) in frontier {
        // Close at a left cusp: rows (2k, 2k+1), 0-based.
        if odd && st.upper % 2 == 0 && st.lower == st.upper + 1 {
            // Counterclockwise from the positive corner: the upper boundary
            // right to left, then the lower boundary left to right.
            let mut w = st.upper_corners;
            w.extend(st.lower_corners.into_iter().rev());
            *words.entry(w).or_insert(false) ^= true;
        }
    }
    Ok(words.into_iter().filter(|&(_, o)| o).map(|(w, _)| w).collect())
}

pub fn build_dga(d: &PlatDiagram, m: &MaslovData) -> Result<Dga> {
    build_dga_with_budget(d, m, DEFAULT_DISK_BUDGET)
}

/// Generators are the crossings `q1..qm` followed by the right cusps
/// `c1..cn`; `budget` bounds the number of disk states explored in total.
pub fn build_dga_with_budget(d: &PlatDiagram, m: &MaslovData, budget: u64) -> Result<Dga> {
    let crossings = d.crossing_count();
    let mut generators: Vec<Generator> = crossing_gradings(d, m)
        .into_iter()
        .enumerate()
        .map(|(j, grading)| Generator {
            kind: GeneratorKind::Crossing,
            index: j + 1,
            grading,
        })
        .collect();
    for k in 0..d.cusps() {
        generators.push(Generator {
            kind: GeneratorKind::RightCusp,
            index: k + 1,
            grading: Grading::new(1, m.modulus),
        });
    }

    let mut remaining = budget;
    let mut differential = Vec::with_capacity(generators.len());
    for j in 0..crossings {
        let (a, b) = d.crossing_rows(j);
        let words = disks_leftward(d, j, a, b, &mut remaining)?;
        differential.push(to_gen_words(words));
    }
    for k in 0..d.cusps() {
        let mut words = disks_leftward(d, crossings, 2 * k, 2 * k + 1, &mut remaining)?;
        // The resolution loop contributes the unit.
        if !words.remove(&Vec::new()) {
            words.insert(Vec::new());
        }
        differential.push(to_gen_words(words));
    }

    Ok(Dga {
        generators,
        differential,
        modulus: m.modulus,
    })
}

fn to_gen_words(words: BTreeSet<Vec<usize>>) -> BTreeSet<Word> {
    words
        .into_iter()
        .map(|w| w.into_iter().map(GenId).collect())
        .collect()
}

/// Generator counts by grading reduced mod `rho`.
pub fn degree_distribution(g: &Dga, rho: u64) -> Result<BTreeMap<i64, usize>> {
    check_rho(rho, g.modulus)?;
    let mut out = BTreeMap::new();
    for gen in &g.generators {
        *out.entry(gen.grading.residue(rho)).or_insert(0) += 1;
    }
    Ok(out)
}

/// Shifted Euler characteristic for `rho = 0` or odd `rho`.
pub fn chi_star(g: &Dga, rho: u64) -> Result<i64> {
    let dist = degree_distribution(g, rho)?;
    if rho != 0 && rho % 2 == 0 {
        return Err(Error::EvenRhoUnsupported(rho));
    }
    let sign = |k: i64| if k.rem_euclid(2) == 0 { 1 } else { -1 };
    Ok(dist
        .iter()
        .map(|(&k, &a)| {
            let a = a as i64;
            if rho == 0 && k < 0 {
                sign(k + 1) * a
            } else {
                sign(k) * a
            }
        })
        .sum())
}

/// True iff `d(d(g)) = 0` for every generator.
pub fn verify_d_squared(g: &Dga) -> bool {
    (0..g.len()).all(|i| g.d_squared(GenId(i)).is_empty())
}

/// True iff every word of every differential has degree one less than its
/// generator.
pub fn verify_degree_drop(g: &Dga) -> bool {
    g.generators.iter().enumerate().all(|(i, gen)| {
        let target = gen.grading + Grading::new(-1, g.modulus);
        g.differential[i]
            .iter()
            .all(|w| g.word_grading(w) == target)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::{maslov, Orientation};

    fn dga(n: usize, w: &[usize]) -> Dga {
        let d = PlatDiagram::new(n, w.to_vec()).unwrap();
        let m = maslov(&d, Orientation::Forward);
        build_dga(&d, &m).unwrap()
    }

    fn words(g: &Dga, name: &str) -> BTreeSet<String> {
        g.differential(g.find(name).unwrap())
            .iter()
            .map(|w| g.word_name(w))
            .collect()
    }

    #[test]
    fn trefoil_differential() {
        let g = dga(2, &[2, 2, 2]);
        for q in ["q1", "q2", "q3"] {
            assert!(words(&g, q).is_empty(), "{q}");
        }
        let c1: BTreeSet<String> = ["1", "q1", "q3", "q1 q2 q3"].map(String::from).into();
        let c2: BTreeSet<String> = ["1", "q1", "q3", "q3 q2 q1"].map(String::from).into();
        assert_eq!(words(&g, "c1"), c1);
        assert_eq!(words(&g, "c2"), c2);
        assert!(verify_d_squared(&g));
        assert!(verify_degree_drop(&g));
    }

    #[test]
    fn unknot_differential_cancels() {
        let g = dga(1, &[]);
        assert_eq!(g.len(), 1);
        assert_eq!(g.generators()[0].grading.value(), 1);
        assert!(words(&g, "c1").is_empty());
        assert!(verify_d_squared(&g));
    }

    #[test]
    fn mutated_trefoil_fails_d_squared() {
        let g = dga(2, &[2, 2, 2]);
        let c1 = g.find("c1").unwrap();
        let q1 = g.find("q1").unwrap();
        let mut diff: Vec<Vec<Word>> = (0..g.len())
            .map(|i| g.differential(GenId(i)).iter().cloned().collect())
            .collect();
        diff[c1.0].retain(|w| w != &vec![q1]);
        let bad = Dga::from_parts(g.generators().to_vec(), diff, g.modulus()).unwrap();
        // Still passes: the trefoil crossings are cycles, so deleting a word
        // cannot break d^2 = 0. Corrupt a crossing instead.
        assert!(verify_d_squared(&bad));

        let mut diff: Vec<Vec<Word>> = (0..g.len())
            .map(|i| g.differential(GenId(i)).iter().cloned().collect())
            .collect();
        diff[q1.0].push(vec![]);
        let bad = Dga::from_parts(g.generators().to_vec(), diff, g.modulus()).unwrap();
        assert!(!verify_d_squared(&bad));
    }

    #[test]
    fn distributions_and_chi() {
        let t = dga(2, &[2, 2, 2]);
        assert_eq!(degree_distribution(&t, 0).unwrap(), BTreeMap::from([(0, 3), (1, 2)]));
        assert_eq!(degree_distribution(&t, 1).unwrap(), BTreeMap::from([(0, 5)]));
        assert_eq!(chi_star(&t, 0).unwrap(), 1);
        assert_eq!(chi_star(&t, 1).unwrap(), 5);
        assert_eq!(chi_star(&t, 2), Err(Error::EvenRhoUnsupported(2)));

        let u = dga(1, &[]);
        assert_eq!(degree_distribution(&u, 0).unwrap(), BTreeMap::from([(1, 1)]));
        assert_eq!(chi_star(&u, 0).unwrap(), -1);

        let k = dga(2, &[1, 2]);
        assert_eq!(k.modulus(), 2);
        assert!(matches!(chi_star(&k, 0), Err(Error::RhoIncompatible { .. })));
        assert!(matches!(degree_distribution(&k, 3), Err(Error::RhoIncompatible { .. })));
    }

    #[test]
    fn negative_degrees_use_shifted_sign() {
        let gens = [-1, -2, 0, 3]
            .into_iter()
            .enumerate()
            .map(|(i, v)| Generator {
                kind: GeneratorKind::Crossing,
                index: i + 1,
                grading: Grading::new(v, 0),
            })
            .collect::<Vec<_>>();
        let g = Dga::from_parts(gens, vec![vec![]; 4], 0).unwrap();
        // k = -1: (-1)^0 = +1; k = -2: (-1)^-1 = -1; k = 0: +1; k = 3: -1.
        assert_eq!(chi_star(&g, 0).unwrap(), 0);
    }

    #[test]
    fn budget_exhaustion() {
        let d = PlatDiagram::new(2, vec![2, 2, 2]).unwrap();
        let m = maslov(&d, Orientation::Forward);
        assert!(matches!(
            build_dga_with_budget(&d, &m, 2),
            Err(Error::ResourceLimit(_))
        ));
    }

    #[test]
    fn stabilization_shape() {
        let g = dga(1, &[]).stabilize(0);
        assert_eq!(g.len(), 3);
        assert_eq!(words(&g, "beta1"), BTreeSet::from(["alpha1".to_string()]));
        assert_eq!(g.generators()[1].grading.value(), -1);
        assert!(verify_d_squared(&g));
        assert!(verify_degree_drop(&g));
    }
}
