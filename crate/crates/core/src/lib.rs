//! Betti numbers of intersections of complex quadrics, computed exactly from
//! a Z2 spectral sequence over the realified quadrics.
//!
//! The pipeline: parse quadrics into Gram matrices ([`qparse`]), compute the
//! determinant ladder of the pencil ([`pencil`]), build and run the spectral
//! sequence ([`specseq`]), and optionally cross-check zero-dimensional cases
//! in CP^2 by elimination ([`oracle`]).

pub mod error;
pub mod exactnum;
pub mod oracle;
pub mod pencil;
pub mod qparse;
pub mod specseq;
pub mod symlin;

pub use error::{Error, Result};
pub use exactnum::{BinaryForm, GaussianRational, Rational};
pub use oracle::{point_count_cp2, Count, PointCount};
pub use pencil::{Classification, Pencil, PencilProfile};
pub use qparse::{analyze, parse_quadric, InputSpec, ReportDocument};
pub use specseq::{BettiReport, E2Table, SolveOptions, SpectralInput, Status};
pub use symlin::{ComplexSymMatrix, RealSymMatrix, SymMatrix};
