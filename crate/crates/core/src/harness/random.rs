use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::diagram::{component_count, PlatDiagram};
use crate::error::{Error, Result};

pub const MAX_REJECTIONS: usize = 10_000;

/// Uniform word in `[1, 2n-2]^m`, resampled until it closes up to a knot.
pub fn random_plat(cusps: usize, crossings: usize, seed: u64) -> Result<PlatDiagram> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_plat_with(&mut rng, cusps, crossings)
}

/// `count` diagrams of the same shape drawn from one seeded stream.
pub fn random_plats(cusps: usize, crossings: usize, seed: u64, count: usize) -> Result<Vec<PlatDiagram>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| random_plat_with(&mut rng, cusps, crossings))
        .collect()
}

pub fn random_plat_with<R: Rng>(rng: &mut R, cusps: usize, crossings: usize) -> Result<PlatDiagram> {
    if cusps == 0 {
        return Err(Error::Syntax("cusp count must be positive".into()));
    }
    let max = 2 * cusps - 2;
    if max == 0 && crossings > 0 {
        return Err(Error::GiveUp { attempts: 0 });
    }
    let mut word = vec![0; crossings];
    for _ in 0..MAX_REJECTIONS {
        for p in word.iter_mut() {
            *p = rng.gen_range(1..=max);
        }
        if component_count(cusps, &word) == 1 {
            return PlatDiagram::new(cusps, word);
        }
    }
    Err(Error::GiveUp {
        attempts: MAX_REJECTIONS,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_in_seed() {
        let a = random_plat(2, 3, 7).unwrap();
        let b = random_plat(2, 3, 7).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.crossing_count(), 3);
    }

    #[test]
    fn impossible_shapes_give_up() {
        assert!(matches!(random_plat(2, 0, 1), Err(Error::GiveUp { .. })));
        assert!(matches!(random_plat(1, 2, 1), Err(Error::GiveUp { .. })));
        assert_eq!(random_plat(1, 0, 99).unwrap().to_text(), "plat 1 :");
    }

    #[test]
    fn batch_starts_with_single_draw() {
        let batch = random_plats(3, 6, 11, 4).unwrap();
        assert_eq!(batch.len(), 4);
        assert_eq!(batch[0], random_plat(3, 6, 11).unwrap());
    }
}
