//! Seeded random systems for cross-checking and benchmarks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::model::{Constraint, LinearSystem, Relop};
use crate::numeric::{int, KPoly};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GenConfig {
    pub max_vars: usize,
    pub max_le: usize,
    pub max_lt: usize,
    pub max_eq: usize,
    pub max_ne: usize,
    /// Coefficients and right-hand sides are drawn from `-coeff_bound..=coeff_bound`.
    pub coeff_bound: i64,
}

impl Default for GenConfig {
    fn default() -> Self {
        GenConfig {
            max_vars: 4,
            max_le: 3,
            max_lt: 2,
            max_eq: 0,
            max_ne: 3,
            coeff_bound: 3,
        }
    }
}

/// Draws `N`, then the row counts per operator, each uniformly from
/// `0..=max` (`1..=max_vars` for `N`), then every coefficient and right-hand
/// side uniformly. Rows are emitted grouped `<=`, `<`, `=`, `!=`.
pub fn random_system<R: Rng>(rng: &mut R, cfg: &GenConfig) -> LinearSystem {
    let n = rng.gen_range(1..=cfg.max_vars.max(1));
    let vars: Vec<String> = (1..=n).map(|i| format!("x{i}")).collect();
    let counts = [
        (Relop::Le, rng.gen_range(0..=cfg.max_le)),
        (Relop::Lt, rng.gen_range(0..=cfg.max_lt)),
        (Relop::Eq, rng.gen_range(0..=cfg.max_eq)),
        (Relop::Ne, rng.gen_range(0..=cfg.max_ne)),
    ];
    let b = cfg.coeff_bound;
    let mut rows = Vec::new();
    for (relop, count) in counts {
        for _ in 0..count {
            let coeffs: Vec<(String, KPoly)> = vars
                .iter()
                .map(|v| (v.clone(), KPoly::constant(int(rng.gen_range(-b..=b)))))
                .collect();
            rows.push(Constraint::new(coeffs, relop, int(rng.gen_range(-b..=b))));
        }
    }
    LinearSystem::new(vars, rows).expect("generated names are valid")
}

/// `count` systems from one ChaCha8 stream seeded with `seed`.
pub fn random_batch(seed: u64, count: usize, cfg: &GenConfig) -> Vec<LinearSystem> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| random_system(&mut rng, cfg)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn batches_are_reproducible() {
        let cfg = GenConfig::default();
        assert_eq!(random_batch(7, 20, &cfg), random_batch(7, 20, &cfg));
        assert_ne!(random_batch(7, 20, &cfg), random_batch(8, 20, &cfg));
    }

    #[test]
    fn respects_bounds() {
        let cfg = GenConfig::default();
        for s in random_batch(1, 200, &cfg) {
            let c = s.counts();
            assert!(c.n >= 1 && c.n <= 4);
            assert!(c.p <= 3 && c.q <= 2 && c.r <= 3 && c.eq == 0);
            for row in s.constraints() {
                assert!(row.rhs >= int(-3) && row.rhs <= int(3));
                assert!(row.coeffs.values().all(|p| p.is_constant()));
            }
        }
    }
}
