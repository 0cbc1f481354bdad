//! Root extraction in the l^e-torsion of supersingular elliptic curves
//! over F_{p^2}.
//!
//! Given scalars m, n and a point K in E[l^e], the solvers find a
//! generator pair (P, Q) of the torsion subgroup with K = m*P + n*Q, or
//! prove that none exists. The pieces stack bottom-up:
//!
//! * [`field`]: arithmetic in F_p and F_{p^2} = F_p(i), p = 3 (mod 4)
//! * [`curve`]: affine Weierstrass group law and l-power point orders
//! * [`torsion`]: Weil pairing, cofactor projection, basis search
//! * [`dlog`]: Pohlig-Hellman in mu_{l^e} and the extended dlog in E[l^e]
//! * [`solver`]: existence test, the two-case solver, l^r-th roots and
//!   simultaneous extraction, generic over a rank-2 group interface
//! * [`model`]: product-of-cyclic-groups oracle with exhaustive checkers
//! * [`params`] and [`wire`]: parameter search and the JSON formats

pub mod arith;
pub mod curve;
pub mod dlog;
pub mod error;
pub mod field;
pub mod group;
pub mod model;
pub mod params;
pub mod solver;
pub mod torsion;
pub mod wire;

pub use curve::{CurveParams, Point};
pub use error::Error;
pub use field::{Fp2Element, FpElement, PrimeField};
pub use group::{CurveTorsion, ModelTorsion, TorsionGroup};
pub use model::{ModelElement, ModelGroup};
pub use solver::{
    GrepCase, GrepInstance, GrepOutcome, GrepSolution, SimulBranch, SimulInstance, SimulOutcome,
};
pub use torsion::{TorsionBasis, TorsionContext};
