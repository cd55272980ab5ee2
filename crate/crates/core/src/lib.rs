//! Multiple holomorph quotients `T(G) = NHol(G) / Hol(G)` for the split
//! metacyclic `p`-groups
//!
//! ```text
//! G = <x, y | x^(p^m) = 1, y^(p^n) = 1, y x y^-1 = x^(1 + p^(m-r))>
//! ```
//!
//! with `p` odd, `m >= 2`, `n >= 1` and `1 <= r <= min(n, m-1)`.
//!
//! `|T(G)|` counts the `Aut(G)`-equivariant antihomomorphisms
//! `Gamma: G -> Aut(G)` whose regular subgroup `N_Gamma` is isomorphic to `G`.
//! Those maps are parametrized by triplets `(a, b, d)` ([`gamma`]), counted in
//! closed form or by enumeration ([`count`]), realized as explicit permutations
//! ([`holomorph`]) and cross-checked against a brute-force scan of
//! `Aut(G) x Aut(G)` that never touches the triplet parametrization ([`oracle`]).

pub mod arith;
pub mod aut;
pub mod count;
pub mod error;
pub mod gamma;
pub mod group;
pub mod holomorph;
pub mod oracle;
pub mod verify;

pub use aut::{AutStructure, Automorphism};
pub use error::{Error, Result};
pub use gamma::Triplet;
pub use group::{GroupElement, GroupParams, Regime};
