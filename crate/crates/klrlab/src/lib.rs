//! Exact computations with type-A KLR (quiver Hecke) algebras.
//!
//! The crate is layered bottom-up:
//!
//! * [`qint`] — Laurent polynomials in `q` with big-integer coefficients and
//!   quantum integers;
//! * [`combi`] — partitions, weights, interlacing/branching sets, box-removal
//!   sequences, Gelfand–Tsetlin patterns and the Weyl dimension formula;
//! * [`uqmod`] — an independent oracle: explicit highest-weight modules of
//!   `U_q(sl_m)` and their q-Shapovalov Gram matrices;
//! * [`klr`] — the KLR diagram algebra: words, grading, a rewriting engine
//!   to the `ψ_w x^a 1_i` normal form, factorization algorithms and region
//!   weight decorations;
//! * [`cyclo`] — cyclotomic quotients `R^λ`, graded Hom dimensions, the
//!   branching projections `π`, Gelfand–Tsetlin idempotents and vanishing
//!   checks;
//! * [`acceptance`] — the end-to-end acceptance suite shared by the tests
//!   and the command-line driver.

pub mod combi;
pub mod qint;
pub mod uqmod;
pub mod klr;
pub mod linalg;
pub mod cyclo;
pub mod acceptance;
