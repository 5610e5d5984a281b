//! Exact computation with self-similar groupoid actions on the path space of
//! a finite directed graph.
//!
//! The library models an action system `(G, E)`: a groupoid `G` with unit
//! space `E^0` acting faithfully on the path forest of `E` through move
//! tables `(g.e, g|_e)` per generator and edge. On top of that sit
//!
//! * [`action`]: the automaton, the budgeted word problem and structural
//!   probes (pseudo-freeness, orbits, isotropy evidence, degree cocycles);
//! * [`semigroup`]: the inverse semigroup of triples `(alpha, g, beta)` with
//!   its three-case product and involution;
//! * [`germ`]: germs `[alpha, g, beta; xi]` over eventually periodic
//!   infinite paths, with composition, inversion and the `|alpha| - |beta|`
//!   cocycle;
//! * [`finitegpd`]: explicit finite groupoids, semidirect and skew products,
//!   the similarity checker, and homology via the nerve chain complex;
//! * [`zlin`]: exact integer linear algebra: Smith normal form, finitely
//!   generated abelian groups and localizations `Z[1/D]`;
//! * [`kthy`] and [`homol`]: the K-theory and homology pipelines for the
//!   gauge-invariant core and the germ groupoid, valid under explicitly
//!   probed assumptions.
//!
//! Everything is exact: integers are arbitrary precision and no floating
//! point is used anywhere.

pub mod action;
pub mod fixtures;
pub mod finitegpd;
pub mod germ;
pub mod graph;
pub mod homol;
pub mod kthy;
pub mod semigroup;
pub mod zlin;

pub use action::{ActionSystem, Budget, IsUnit, Witness, Word};
pub use graph::{EdgeId, Graph, Path, VertexId};
