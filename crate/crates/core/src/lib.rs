//! Verification and construction toolkit for maximal surfaces and timelike
//! minimal surfaces in Lorentz-Minkowski 3-space, given as graphs or
//! parametric patches.
//!
//! The crate evaluates the two governing quasilinear equations (the maximal
//! surface equation and the Born-Infeld equation) on surface graphs via
//! second-order forward-mode jets, realizes the Wick-rotation correspondence
//! between the two solution classes, computes Gauss maps into the unit
//! hyperboloids, integrates the Weierstrass-type representation for timelike
//! minimal surfaces, extracts singular loci as polylines, and certifies two
//! infinite-product identities against a high-precision oracle.
//!
//! Grid-scale work is data-parallel (rayon, behind the default `parallel`
//! feature) with a deterministic aggregation contract: reports are
//! byte-identical across thread counts, including the sequential fallback
//! selected by `LMS_THREADS=0`.

pub mod catalog;
pub mod error;
pub mod exec;
pub mod expr;
pub mod field;
pub mod gauss;
pub mod identities;
pub mod jet;
pub mod mesh;
pub mod pde;
pub mod quad;
pub mod report;
pub mod surface;
pub mod weierstrass;
pub mod wick;

mod locus;

pub use error::{EvalError, MathError, ParseError};
pub use expr::{CompiledExpr, SourceExpr};
pub use field::{Field, Func, Scalar};
pub use jet::Jet2;
pub use surface::{
    DomainConstraint, GraphSurface, ParametricSurface, Rect, Signature, SurfaceClass,
    WeierstrassData,
};
