//! Fixtures shared by the criterion benchmarks under `benches/`.

use alpfeas_core::gen::{random_batch, GenConfig};
use alpfeas_core::{parse_system, LinearSystem};

/// Two `<=`, two `<` and three `!=` rows over three variables.
pub fn three_disequalities() -> LinearSystem {
    parse_system(
        "vars x1 x2 x3
x1 + 2 x2 - x3 <= 4
-x1 + x3 <= 2
2 x1 - x2 < 3
x2 + x3 < 5
x1 - x2 != 0
x2 + 2 x3 != 1
3 x1 - x3 != -2
",
    )
    .expect("fixture parses")
}

/// `count` seeded systems with up to `max_ne` disequalities.
pub fn random_systems(seed: u64, count: usize, max_ne: usize) -> Vec<LinearSystem> {
    random_batch(
        seed,
        count,
        &GenConfig {
            max_ne,
            ..GenConfig::default()
        },
    )
}
