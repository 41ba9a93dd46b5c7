//! The type-A KLR (quiver Hecke) diagram algebra.
//!
//! Diagrams are words: a bottom label sequence and a list of generators
//! (dots and crossings, 1-based positions) read bottom to top. Products put
//! the left factor on top. The [`rewrite`] engine reduces any element to the
//! normal form `ψ_w x^a 1_i`; [`factor`] implements the factorization of
//! idempotents through special idempotents; [`regions`] decorates the
//! regions of a diagram with `gl`-weights.

pub mod conventions;
pub mod factor;
pub mod polyrep;
pub mod regions;
pub mod rewrite;
pub mod word;

use thiserror::Error;

pub use factor::{factor_general, factor_one_strand, inv_r3, reconstruct, FactorTerm, SpecialIdempotentSpec};
pub use regions::{decorate_regions, RegionDecoration};
pub use rewrite::{is_normal_form, multiply, normal_form, Rewriter};
pub use word::{degree, make_word, parse_ops, Gen, KlrElement, KlrWord, StrandSeq};

/// Errors raised by the diagram layer.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum KlrError {
    #[error("label {label} out of range 1..={rank}")]
    LabelOutOfRange { label: u8, rank: usize },
    #[error("generator {gen:?} out of range for {strands} strands")]
    PositionOutOfRange { gen: Gen, strands: usize },
    #[error("label pattern {0:?} is not of the form (j, j, j+1)")]
    BadPattern(Vec<u8>),
    #[error("expected exactly {expected} strands labelled {label}, found {found}")]
    WrongStrandCount { label: u8, expected: usize, found: usize },
    #[error("rewriting exceeded its step budget of {0}")]
    BudgetExceeded(u64),
    #[error("{0}")]
    Parse(String),
}
