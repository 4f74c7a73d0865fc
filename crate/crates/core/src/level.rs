use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The order `l` of the root of unity: `q = exp(i*pi*m/l)` with `l` odd and `l >= 3`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "i64", into = "usize")]
pub struct Level(usize);

impl Level {
    pub fn new(l: i64) -> Result<Self> {
        if l < 3 || l % 2 == 0 {
            return Err(Error::InvalidLevel(l));
        }
        Ok(Level(l as usize))
    }

    #[inline]
    pub fn get(self) -> usize {
        self.0
    }

    /// Number of nodes of the small-group lattice, `3l - 1`.
    #[inline]
    pub fn small_nodes(self) -> usize {
        3 * self.0 - 1
    }
}

impl TryFrom<i64> for Level {
    type Error = Error;
    fn try_from(l: i64) -> Result<Self> {
        Level::new(l)
    }
}

impl From<Level> for usize {
    fn from(l: Level) -> usize {
        l.0
    }
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}
