//! Exact-arithmetic workbench for universal Z-forms over totally real
//! number fields: trace-form lattices, tensor minima, indecomposables,
//! sums of squares, Dedekind zeta sums, and representation scans.

pub mod embeddings;
pub mod enclosure;
pub mod error;
pub mod exec;
pub mod field;
pub mod indecomp;
pub mod intmat;
pub mod poly;
pub mod presets;
pub mod represent;
pub mod sos;
pub mod traceform;
pub mod zeta;
pub mod zform;

pub use error::{Error, Result};
pub use field::{load_field, parse_element, Field, FieldElement, FieldSpec, NumberField};
pub use zform::{MinimaResult, ZForm};
