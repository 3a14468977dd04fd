//! Uniform periodic grids on `[0, 2π)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Grid indicator: `Zero` is the grid through the origin, `One` the
/// half-step shifted grid. Serialized as the integer 0 or 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub enum Indicator {
    #[default]
    Zero,
    One,
}

impl Indicator {
    pub fn bit(self) -> u8 {
        match self {
            Indicator::Zero => 0,
            Indicator::One => 1,
        }
    }

    pub const BOTH: [Indicator; 2] = [Indicator::Zero, Indicator::One];
}

impl TryFrom<u8> for Indicator {
    type Error = String;

    fn try_from(v: u8) -> std::result::Result<Self, String> {
        match v {
            0 => Ok(Indicator::Zero),
            1 => Ok(Indicator::One),
            _ => Err(format!("grid indicator must be 0 or 1, got {v}")),
        }
    }
}

impl From<Indicator> for u8 {
    fn from(i: Indicator) -> u8 {
        i.bit()
    }
}

/// `N` nodes with spacing `2π/N`, offset by `π/N` when the indicator is one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridSpec {
    pub n: usize,
    pub indicator: Indicator,
}

impl GridSpec {
    pub fn new(n: usize, indicator: Indicator) -> Result<Self> {
        let g = GridSpec { n, indicator };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        validate_node_count(self.n)
    }

    /// Node `j` (1-based), no range check.
    pub fn node<T: Real>(&self, j: usize) -> T {
        let n = T::of_u64(self.n as u64);
        let base = T::two_pi() * T::of_u64(j as u64 - 1) / n;
        match self.indicator {
            Indicator::Zero => base,
            Indicator::One => base + T::PI() / n,
        }
    }
}

pub(crate) fn validate_node_count(n: usize) -> Result<()> {
    if n < 3 {
        return Err(Error::InvalidGrid(format!("need at least 3 nodes, got {n}")));
    }
    if n.is_multiple_of(2) {
        return Err(Error::InvalidGrid(format!("node count must be odd, got {n}")));
    }
    Ok(())
}

pub fn grid_nodes<T: Real>(spec: GridSpec) -> Result<Vec<T>> {
    spec.validate()?;
    Ok((1..=spec.n).map(|j| spec.node(j)).collect())
}

/// Node `x_k` of the interpolation grid selected by `i2`.
pub fn selected_node<T: Real>(k: usize, i2: Indicator, n: usize) -> Result<T> {
    validate_node_count(n)?;
    if k == 0 || k > n {
        return Err(Error::IndexOutOfRange { index: k, len: n });
    }
    Ok(GridSpec { n, indicator: i2 }.node(k))
}
