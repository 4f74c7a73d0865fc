//! Benchmark fixtures shared by the criterion targets.

use tilting_core::Level;

/// Levels exercised by every benchmark.
pub fn levels() -> Vec<Level> {
    [3, 5, 7]
        .into_iter()
        .map(|l| Level::new(l).unwrap())
        .collect()
}
