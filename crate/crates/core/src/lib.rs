//! Exact computational toolkit for multi-circled plurisubharmonic singularities.
//!
//! The pipeline: parse a singularity expression (or ingest a monomial ideal),
//! extract its positively-homogeneous indicator, build the indicator diagram
//! (Newton polyhedron) with exact rational arithmetic, and from the diagram
//! compute higher Lelong numbers via mixed covolumes, the integrability index
//! and log canonical threshold via exact linear programming, and multiplier
//! ideal generators. Slow numeric oracles (Monte Carlo, lattice counting,
//! integrability probing) cross-check the exact engines.

pub mod covolume;
pub mod dd;
pub mod error;
pub mod expr;
pub mod mulideal;
pub mod oracles;
pub mod polyhedron;
pub mod rat;
pub mod simplex;
pub mod thresholds;
pub mod volume;

pub use error::{Error, Result};
pub use expr::{MonomialIdealPresentation, Node, SingularityExpr};
pub use polyhedron::{set_max_hull_dim, Facet, NewtonPolyhedron, PolyhedronHull};
pub use rat::Rat;
