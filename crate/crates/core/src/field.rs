use crate::bialgebra::{BNumber, BPoint};
use crate::error::Result;

/// A 𝔹-valued function on (part of) the biharmonic plane.
pub trait Field: Sync {
    fn value(&self, at: BPoint) -> Result<BNumber>;
}

impl<F> Field for F
where
    F: Fn(BPoint) -> BNumber + Sync,
{
    fn value(&self, at: BPoint) -> Result<BNumber> {
        Ok(self(at))
    }
}
