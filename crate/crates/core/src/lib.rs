//! Exact computation of quasi-F-splitting heights for hypersurfaces and
//! complete intersections in mixed characteristic, together with the
//! quasi-(F,F^∞)-splitting test, perfectoid pure thresholds and a truncated
//! Witt-vector kernel.

pub mod fedder;
pub mod graded;
pub mod groebner;
pub mod pipeline;
pub mod polyarith;
pub mod thresholds;
pub mod witt;
