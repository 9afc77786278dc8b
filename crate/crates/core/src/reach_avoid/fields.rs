use std::borrow::Cow;

use crate::error::{Error, Result};
use crate::geom::ScalarField;

/// A scalar field indexed by time, such as a target `l(x, t)` or a
/// constraint `g(x, t)`.
pub trait TimeVaryingField: Send + Sync {
    fn at(&self, t: f64) -> Result<Cow<'_, ScalarField>>;

    /// True when `at` returns the same field for every time.
    fn is_static(&self) -> bool {
        false
    }
}

/// A field that does not change with time.
#[derive(Clone, Debug)]
pub struct StaticField(pub ScalarField);

impl TimeVaryingField for StaticField {
    fn at(&self, _t: f64) -> Result<Cow<'_, ScalarField>> {
        Ok(Cow::Borrowed(&self.0))
    }

    fn is_static(&self) -> bool {
        true
    }
}

/// Generates the field on demand from a closure.
pub struct FnField<F>(pub F);

impl<F> TimeVaryingField for FnField<F>
where
    F: Fn(f64) -> Result<ScalarField> + Send + Sync,
{
    fn at(&self, t: f64) -> Result<Cow<'_, ScalarField>> {
        (self.0)(t).map(Cow::Owned)
    }
}

/// Precomputed snapshots, linearly blended in time and held constant past
/// either end.
#[derive(Clone, Debug)]
pub struct FieldTable {
    entries: Vec<(f64, ScalarField)>,
}

impl FieldTable {
    pub fn new(mut entries: Vec<(f64, ScalarField)>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::EmptySolution);
        }
        entries.sort_by(|a, b| a.0.total_cmp(&b.0));
        if entries.windows(2).any(|w| !w[0].1.same_grid(&w[1].1) || w[0].0 == w[1].0) {
            return Err(Error::InvalidConfig("field table needs distinct times on one grid".into()));
        }
        Ok(Self { entries })
    }
}

impl TimeVaryingField for FieldTable {
    fn at(&self, t: f64) -> Result<Cow<'_, ScalarField>> {
        let e = &self.entries;
        let k = e.partition_point(|(ti, _)| *ti <= t);
        if k == 0 {
            return Ok(Cow::Borrowed(&e[0].1));
        }
        if k == e.len() || e[k - 1].0 == t {
            return Ok(Cow::Borrowed(&e[k - 1].1));
        }
        let (t0, f0) = &e[k - 1];
        let (t1, f1) = &e[k];
        let w = (t - t0) / (t1 - t0);
        let values = f0.values().iter().zip(f1.values()).map(|(a, b)| a + w * (b - a)).collect();
        Ok(Cow::Owned(ScalarField::from_raw(f0.grid().clone(), values).with_time(t)))
    }

    fn is_static(&self) -> bool {
        self.entries.len() == 1
    }
}
