//! Exact computations for `(n-1)`-connected `(2n+1)`-manifolds with
//! `H_n(M) = Z^r ⊕ G`: the Pontrjagin ring `H_*(ΩM)` as a one-relator
//! quadratic algebra, its Lie algebra of primitives via Lyndon words, the
//! sphere multiplicities in `π_*(M)`, and the loop-space splitting.
//!
//! ```
//! use loopspace::series::sphere_summand_counts;
//!
//! let l = sphere_summand_counts(2, 2, 3).unwrap();
//! assert_eq!(l.render(), "l[1]=2 l[2]=3 l[3]=5");
//! ```

pub mod algebra;
pub mod decomposition;
pub mod error;
pub mod groups;
pub mod koszul;
pub mod linalg;
pub mod lyndon;
pub mod manifold;
pub mod rewrite;
pub mod selftest;
pub mod series;
pub mod spheres;

pub use algebra::{Alphabet, Letter, NCPoly, OrderScheme, Word};
pub use decomposition::SpaceExpr;
pub use error::{Error, Result};
pub use groups::{AbelianGroup, FiniteAbelianGroup, GradedAbelianGroup};
pub use manifold::ManifoldModel;
pub use rewrite::QuadraticPresentation;
pub use series::PowerSeries;
