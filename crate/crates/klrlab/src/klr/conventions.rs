//! The single table of sign conventions used by the rewriting engine.
//!
//! Products are written with the top factor on the left (`ab` = `a` stacked
//! on top of `b`), positions are numbered from the left starting at 0, and
//! `ψ_r` crosses the strands at positions `r` and `r + 1`. Labels `i`, `j`
//! are read at the bottom of the generator they refer to.
//!
//! Changing a sign here is enough to switch conventions everywhere: the
//! engine, the move templates of the factorization algorithm and the
//! polynomial representation used in tests all read from this table.

/// `ψ_r² 1_{ij}` for adjacent labels equals
/// `R2_ADJACENT_LEFT · x_r + R2_ADJACENT_RIGHT · x_{r+1}`.
pub const R2_ADJACENT_LEFT: i64 = 1;
/// See [`R2_ADJACENT_LEFT`].
pub const R2_ADJACENT_RIGHT: i64 = 1;

/// `x_r ψ_r 1_{ij} = ψ_r x_{r+1} 1_{ij} + DOT_SLIDE_FROM_LEFT · δ_ij 1_{ij}`:
/// the correction when a dot on the left strand above a crossing slides down.
pub const DOT_SLIDE_FROM_LEFT: i64 = 1;
/// `x_{r+1} ψ_r 1_{ij} = ψ_r x_r 1_{ij} + DOT_SLIDE_FROM_RIGHT · δ_ij 1_{ij}`.
pub const DOT_SLIDE_FROM_RIGHT: i64 = -1;

/// `(ψ_r ψ_{r+1} ψ_r − ψ_{r+1} ψ_r ψ_{r+1}) 1_{ijk} = R3_SIGN · 1_{ijk}`
/// when `i = k` and `|i − j| = 1`, and 0 otherwise.
pub const R3_SIGN: i64 = 1;

/// Type-A Cartan entry `a_ij` for labels.
pub fn cartan(i: u8, j: u8) -> i64 {
    match i.abs_diff(j) {
        0 => 2,
        1 => -1,
        _ => 0,
    }
}

/// Degree of a dot on a strand labelled `i`: `a_ii`.
pub fn dot_degree() -> i64 {
    2
}

/// Degree of a crossing of strands labelled `i` and `j`: `−a_ij`.
pub fn crossing_degree(i: u8, j: u8) -> i64 {
    -cartan(i, j)
}

/// Value of `ψ_r²` on labels `(i, j)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DoubleCrossing {
    /// Equal labels: the double crossing vanishes.
    Zero,
    /// Distant labels: the double crossing is the identity.
    Identity,
    /// Adjacent labels: `left · x_r + right · x_{r+1}`.
    Dots { left: i64, right: i64 },
}

/// The R2 relation for labels `(i, j)`.
pub fn double_crossing(i: u8, j: u8) -> DoubleCrossing {
    match i.abs_diff(j) {
        0 => DoubleCrossing::Zero,
        1 => DoubleCrossing::Dots {
            left: R2_ADJACENT_LEFT,
            right: R2_ADJACENT_RIGHT,
        },
        _ => DoubleCrossing::Identity,
    }
}

/// `ψ_r ψ_{r+1} ψ_r − ψ_{r+1} ψ_r ψ_{r+1}` on bottom labels `(i, j, k)`.
pub fn braid_defect(i: u8, j: u8, k: u8) -> i64 {
    if i == k && i.abs_diff(j) == 1 {
        R3_SIGN
    } else {
        0
    }
}
