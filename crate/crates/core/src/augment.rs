//! Graded augmentations of a DGA over Z/2.

use std::collections::BTreeMap;

use crate::diagram::check_rho;
use crate::dga::{chi_star, Dga, GenId};
use crate::error::{Error, Result};
use crate::halfpow::HalfPow;

pub const DEFAULT_MAX_ELIGIBLE: usize = 30;

/// A map from generators to Z/2, indexed by generator id.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Augmentation(pub Vec<bool>);

impl Augmentation {
    pub fn zero(len: usize) -> Self {
        Self(vec![false; len])
    }

    pub fn get(&self, g: GenId) -> bool {
        self.0[g.0]
    }

    pub fn set(&mut self, g: GenId, v: bool) {
        self.0[g.0] = v;
    }

    pub fn bits(&self) -> &[bool] {
        &self.0
    }

    /// Bit string over the first `len` generators, e.g. `"101"`.
    pub fn pattern(&self, len: usize) -> String {
        self.0[..len].iter().map(|&b| if b { '1' } else { '0' }).collect()
    }

    /// JSON object from generator names to 0/1.
    pub fn to_json(&self, g: &Dga) -> serde_json::Value {
        let map: serde_json::Map<String, serde_json::Value> = g
            .generators()
            .iter()
            .zip(&self.0)
            .map(|(gen, &b)| (gen.name(), serde_json::json!(u8::from(b))))
            .collect();
        serde_json::Value::Object(map)
    }
}

/// Value of `eps(w)` for a word: the product of its letters.
fn eval_word(eps: &Augmentation, w: &[GenId]) -> bool {
    w.iter().all(|x| eps.get(*x))
}

/// `eps(d g)` in Z/2.
pub fn eval_differential(g: &Dga, eps: &Augmentation, gen: GenId) -> bool {
    g.differential(gen)
        .iter()
        .fold(false, |acc, w| acc ^ eval_word(eps, w))
}

fn eligible(g: &Dga, rho: u64) -> Vec<bool> {
    g.generators()
        .iter()
        .map(|gen| gen.grading.is_divisible_by(rho))
        .collect()
}

/// True iff `eps` vanishes off degrees divisible by `rho` and kills `d`.
pub fn is_augmentation(g: &Dga, eps: &Augmentation, rho: u64) -> Result<bool> {
    check_rho(rho, g.modulus())?;
    if eps.0.len() != g.len() {
        return Ok(false);
    }
    let elig = eligible(g, rho);
    if eps.0.iter().zip(&elig).any(|(&v, &ok)| v && !ok) {
        return Ok(false);
    }
    Ok((0..g.len()).all(|i| !eval_differential(g, eps, GenId(i))))
}

pub fn enumerate_augmentations(g: &Dga, rho: u64) -> Result<Vec<Augmentation>> {
    enumerate_augmentations_bounded(g, rho, DEFAULT_MAX_ELIGIBLE)
}

/// All `rho`-graded augmentations in lexicographic order of their bit
/// vectors (generator order, `false < true`).
pub fn enumerate_augmentations_bounded(
    g: &Dga,
    rho: u64,
    max_eligible: usize,
) -> Result<Vec<Augmentation>> {
    check_rho(rho, g.modulus())?;
    let elig = eligible(g, rho);

    // Variables in order of first appearance in the differential, then any
    // eligible generator that never appears.
    let mut order: Vec<usize> = Vec::new();
    let mut placed = vec![false; g.len()];
    for i in 0..g.len() {
        for w in g.differential(GenId(i)) {
            for x in w {
                if elig[x.0] && !placed[x.0] {
                    placed[x.0] = true;
                    order.push(x.0);
                }
            }
        }
    }
    for (i, &ok) in elig.iter().enumerate() {
        if ok && !placed[i] {
            placed[i] = true;
            order.push(i);
        }
    }
    if order.len() > max_eligible {
        return Err(Error::ResourceLimit(format!(
            "{} eligible generators exceed the bound {}",
            order.len(),
            max_eligible
        )));
    }

    let mut rank = vec![usize::MAX; g.len()];
    for (pos, &v) in order.iter().enumerate() {
        rank[v] = pos;
    }
    // Each equation is checked once its last variable is fixed. Words that
    // contain an ineligible letter vanish identically and are dropped.
    let mut checks: Vec<Vec<Vec<Vec<usize>>>> = vec![Vec::new(); order.len() + 1];
    for i in 0..g.len() {
        let words: Vec<Vec<usize>> = g
            .differential(GenId(i))
            .iter()
            .filter(|w| w.iter().all(|x| elig[x.0]))
            .map(|w| w.iter().map(|x| x.0).collect())
            .collect();
        let last = words
            .iter()
            .flat_map(|w| w.iter().map(|&x| rank[x] + 1))
            .max()
            .unwrap_or(0);
        checks[last].push(words);
    }

    let mut out = Vec::new();
    let mut eps = Augmentation::zero(g.len());
    if satisfied(&checks[0], &eps) {
        search(&order, &checks, 0, &mut eps, &mut out);
    }
    out.sort();
    Ok(out)
}

fn satisfied(eqs: &[Vec<Vec<usize>>], eps: &Augmentation) -> bool {
    eqs.iter().all(|words| {
        !words
            .iter()
            .fold(false, |acc, w| acc ^ w.iter().all(|&x| eps.0[x]))
    })
}

fn search(
    order: &[usize],
    checks: &[Vec<Vec<Vec<usize>>>],
    depth: usize,
    eps: &mut Augmentation,
    out: &mut Vec<Augmentation>,
) {
    if depth == order.len() {
        out.push(eps.clone());
        return;
    }
    let v = order[depth];
    for value in [false, true] {
        eps.0[v] = value;
        if satisfied(&checks[depth + 1], eps) {
            search(order, checks, depth + 1, eps, out);
        }
    }
    eps.0[v] = false;
}

/// Number of augmentations times `2^(-chi*/2)`.
pub fn aug_number(g: &Dga, rho: u64) -> Result<HalfPow> {
    aug_number_bounded(g, rho, DEFAULT_MAX_ELIGIBLE)
}

pub fn aug_number_bounded(g: &Dga, rho: u64, max_eligible: usize) -> Result<HalfPow> {
    let chi = chi_star(g, rho)?;
    let count = enumerate_augmentations_bounded(g, rho, max_eligible)?.len();
    Ok(HalfPow::scaled(count as u128, -chi))
}

/// Augmentation counts keyed by `rho`, for reporting.
pub fn augmentation_counts(g: &Dga, rhos: &[u64]) -> Result<BTreeMap<u64, usize>> {
    rhos.iter()
        .map(|&r| Ok((r, enumerate_augmentations(g, r)?.len())))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dga::build_dga;
    use crate::diagram::{maslov, Orientation, PlatDiagram};

    fn dga(n: usize, w: &[usize]) -> Dga {
        let d = PlatDiagram::new(n, w.to_vec()).unwrap();
        build_dga(&d, &maslov(&d, Orientation::Forward)).unwrap()
    }

    fn assign(g: &Dga, ones: &[&str]) -> Augmentation {
        let mut eps = Augmentation::zero(g.len());
        for n in ones {
            eps.set(g.find(n).unwrap(), true);
        }
        eps
    }

    #[test]
    fn trefoil_checks() {
        let g = dga(2, &[2, 2, 2]);
        assert!(is_augmentation(&g, &assign(&g, &["q1", "q2", "q3"]), 0).unwrap());
        assert!(!is_augmentation(&g, &assign(&g, &[]), 0).unwrap());
    }

    #[test]
    fn unknot_cusp_not_gradable() {
        let g = dga(1, &[]);
        assert!(!is_augmentation(&g, &assign(&g, &["c1"]), 0).unwrap());
        assert!(is_augmentation(&g, &assign(&g, &["c1"]), 1).unwrap());
    }

    #[test]
    fn trefoil_enumeration() {
        let g = dga(2, &[2, 2, 2]);
        let augs = enumerate_augmentations(&g, 0).unwrap();
        let pats: Vec<String> = augs.iter().map(|a| a.pattern(3)).collect();
        assert_eq!(pats, ["001", "011", "100", "110", "111"]);
        assert_eq!(aug_number(&g, 0).unwrap(), HalfPow::new(5, -1));
    }

    #[test]
    fn unknots() {
        let g = dga(1, &[]);
        assert_eq!(enumerate_augmentations(&g, 0).unwrap().len(), 1);
        assert_eq!(enumerate_augmentations(&g, 1).unwrap().len(), 2);
        assert_eq!(aug_number(&g, 0).unwrap(), HalfPow::new(1, 1));
        let k = dga(2, &[1, 2]);
        assert!(enumerate_augmentations(&k, 1).unwrap().is_empty());
        assert_eq!(aug_number(&k, 1).unwrap(), HalfPow::ZERO);
    }

    #[test]
    fn errors() {
        let k = dga(2, &[1, 2]);
        assert!(matches!(enumerate_augmentations(&k, 0), Err(Error::RhoIncompatible { .. })));
        assert_eq!(aug_number(&k, 2), Err(Error::EvenRhoUnsupported(2)));
        // Even rho is still allowed for plain enumeration.
        assert!(enumerate_augmentations(&k, 2).is_ok());
        let t = dga(2, &[2, 2, 2]);
        assert!(matches!(
            enumerate_augmentations_bounded(&t, 1, 2),
            Err(Error::ResourceLimit(_))
        ));
    }

    #[test]
    fn enumeration_matches_exhaustive_check() {
        for (n, w) in [(2, vec![2, 2, 2]), (3, vec![2, 2, 4, 4, 3, 3]), (2, vec![1, 2])] {
            let Ok(d) = PlatDiagram::new(n, w) else { continue };
            let m = maslov(&d, Orientation::Forward);
            let g = build_dga(&d, &m).unwrap();
            for rho in [0u64, 1, 2] {
                let Ok(found) = enumerate_augmentations(&g, rho) else { continue };
                let mut brute = Vec::new();
                for bits in 0u32..(1 << g.len()) {
                    let eps = Augmentation((0..g.len()).map(|i| bits >> i & 1 == 1).collect());
                    if is_augmentation(&g, &eps, rho).unwrap() {
                        brute.push(eps);
                    }
                }
                brute.sort();
                assert_eq!(found, brute, "{d} rho={rho}");
            }
        }
    }
}
