//! Region weight decorations: the leftmost region of a diagram carries a
//! `gl`-weight and crossing a strand labelled `j` from left to right
//! subtracts `ε_j − ε_{j+1}`.

use serde::{Deserialize, Serialize};

use super::word::{Gen, KlrWord};
use crate::combi::GlWeight;

/// Region labels at every height of a word.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegionDecoration {
    /// `heights[h][r]`: label of region `r` (0 = leftmost) below generator
    /// `h`; the last entry describes the top of the diagram.
    pub heights: Vec<Vec<GlWeight>>,
    /// Label of the rightmost region (the same at every height).
    pub rightmost: GlWeight,
    /// `(height, region)` of every region with a negative entry.
    pub negative: Vec<(usize, usize)>,
}

impl RegionDecoration {
    /// True if the rightmost region has a negative entry.
    pub fn rightmost_negative(&self) -> bool {
        self.rightmost.has_negative()
    }

    /// True if any region has a negative entry.
    pub fn any_negative(&self) -> bool {
        !self.negative.is_empty()
    }
}

fn regions_for(labels: &[u8], start: &GlWeight) -> Vec<GlWeight> {
    let mut cur = start.clone();
    let mut out = vec![cur.clone()];
    for &j in labels {
        let j = j as usize;
        cur.0[j - 1] -= 1;
        cur.0[j] += 1;
        out.push(cur.clone());
    }
    out
}

/// Decorates every region of `w` starting from `start` on the left.
/// `start` must have `rank + 1` entries.
pub fn decorate_regions(w: &KlrWord, start: &GlWeight) -> RegionDecoration {
    assert_eq!(start.0.len(), w.rank + 1, "start weight needs rank + 1 entries");
    let mut labels = w.bottom.clone();
    let mut heights = vec![regions_for(&labels, start)];
    for g in &w.ops {
        if let Gen::Cross { pos } = *g {
            labels.swap(pos - 1, pos);
        }
        heights.push(regions_for(&labels, start));
    }
    let rightmost = heights[0].last().cloned().unwrap_or_else(|| start.clone());
    let negative = heights
        .iter()
        .enumerate()
        .flat_map(|(h, rs)| {
            rs.iter()
                .enumerate()
                .filter(|(_, r)| r.has_negative())
                .map(move |(i, _)| (h, i))
        })
        .collect();
    RegionDecoration {
        heights,
        rightmost,
        negative,
    }
}
