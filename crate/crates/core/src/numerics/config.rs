use crate::error::{Error, Result};

/// Spatial accuracy of the one-sided derivative stencils.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum SchemeOrder {
    /// Adjacent differences.
    #[default]
    First,
    /// Second-order ENO.
    Second,
}

impl SchemeOrder {
    /// Nodes a dimension needs for the stencil.
    pub fn min_nodes(self) -> usize {
        match self {
            SchemeOrder::First => 3,
            SchemeOrder::Second => 5,
        }
    }

    pub fn as_u8(self) -> u8 {
        match self {
            SchemeOrder::First => 1,
            SchemeOrder::Second => 2,
        }
    }
}

impl TryFrom<u8> for SchemeOrder {
    type Error = Error;

    fn try_from(v: u8) -> Result<Self> {
        match v {
            1 => Ok(SchemeOrder::First),
            2 => Ok(SchemeOrder::Second),
            _ => Err(Error::InvalidConfig(format!("scheme order must be 1 or 2, got {v}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NumericsConfig {
    /// Fraction of the CFL-limited step actually taken, in (0, 1].
    pub cfl_factor: f64,
    pub scheme_order: SchemeOrder,
    /// Keep every k-th accepted slice (the last slice is always kept).
    pub slice_stride: usize,
    /// Longest backward horizon a solve may cover.
    pub horizon_cap: f64,
}

impl Default for NumericsConfig {
    fn default() -> Self {
        Self { cfl_factor: 0.5, scheme_order: SchemeOrder::First, slice_stride: 1, horizon_cap: 2.0 }
    }
}

impl NumericsConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.cfl_factor > 0.0 && self.cfl_factor <= 1.0) {
            return Err(Error::InvalidConfig(format!("cfl factor {} outside (0, 1]", self.cfl_factor)));
        }
        if self.slice_stride == 0 {
            return Err(Error::InvalidConfig("slice stride must be positive".into()));
        }
        if !(self.horizon_cap > 0.0 && self.horizon_cap.is_finite()) {
            return Err(Error::InvalidConfig(format!("horizon cap {} must be positive", self.horizon_cap)));
        }
        Ok(())
    }
}
