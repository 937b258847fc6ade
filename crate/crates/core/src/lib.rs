//! Exact-arithmetic engine for universal enveloping algebras of graded Lie
//! algebras over Q, built on the identification `U(g) ≅ (S(g), ⋆)`.
//!
//! The crate computes and cross-checks, with no floating point anywhere:
//!
//! * symmetric-group symmetrizers and the ideal decomposition
//!   `1 − π_n = Σ (1 − τ_i) a_i` ([`symgroup`]);
//! * Koszul-signed tensor powers, the split `V^{⊗n} = S^nV ⊕ Λ̃^nV`, and a
//!   Jacobi criterion through partially antisymmetric tensors ([`gvs`]);
//! * free Lie algebras on a Lyndon basis, the Baker–Campbell–Hausdorff
//!   series, and the symmetric multibrace operations it induces
//!   ([`freelie`]);
//! * validated graded Lie algebras, adjoint coactions, power traces and
//!   trace identities ([`liealg`]);
//! * the star product on truncated `S(V)` by coalgebra reconstruction from
//!   multibraces, an independent PBW normal-ordering oracle, structure
//!   coefficients, and the Todd-series formula for multiplication by
//!   degree-one elements ([`ualg`]);
//! * the Duflo element, its universal polynomials, and the reconstruction of
//!   torsion morphisms from their top component ([`duflo`]);
//! * tame triples of Lie algebras and the module structure they induce on
//!   the enveloping algebra of the complement ([`tamepair`]).
//!
//! Batch entry points in [`batch`] fan work out with rayon when the default
//! `parallel` feature is enabled and fall back to sequential iteration
//! otherwise; `*_seq` variants are always sequential so the two paths can be
//! benchmarked against each other.

pub mod batch;
pub mod duflo;
pub mod error;
pub mod freelie;
pub mod gvs;
pub mod liealg;
pub mod linalg;
pub mod report;
pub mod scalar;
pub mod symgroup;
pub mod tamepair;
pub mod ualg;
pub mod verify;

pub use error::Error;
pub use scalar::Q;
