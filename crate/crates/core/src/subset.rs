//! Subsets of a small labelled ground set, encoded as bit masks.
//!
//! Bit `i` of a [`Mask`] stands for `ground[i]`. The width cap keeps
//! full tabulation over `2^ground` inside a few megabytes.

use crate::error::{Error, Result};

pub type Mask = u32;

/// Largest ground set any powerset construction accepts.
pub const MAX_GROUND: usize = 20;

pub fn full_mask(width: usize) -> Mask {
    debug_assert!(width <= MAX_GROUND);
    ((1u64 << width) - 1) as Mask
}

pub fn is_subset(a: Mask, b: Mask) -> bool {
    a & !b == 0
}

pub fn bits(mask: Mask) -> impl Iterator<Item = usize> {
    (0..Mask::BITS as usize).filter(move |i| mask >> i & 1 == 1)
}

pub fn check_width(width: usize) -> Result<()> {
    if width > MAX_GROUND {
        return Err(Error::GroundSetTooLarge { size: width, cap: MAX_GROUND });
    }
    Ok(())
}

/// Labels of the members of `mask`, in ground order.
pub fn labels_of(ground: &[String], mask: Mask) -> Vec<String> {
    bits(mask).map(|i| ground[i].clone()).collect()
}

/// Display form: `∅` or `{A,B}`.
pub fn display(ground: &[String], mask: Mask) -> String {
    if mask == 0 {
        return "∅".to_string();
    }
    format!("{{{}}}", labels_of(ground, mask).join(","))
}

pub fn parse<S: AsRef<str>>(ground: &[String], labels: &[S]) -> Result<Mask> {
    let mut mask = 0;
    for l in labels {
        let l = l.as_ref();
        let i = ground
            .iter()
            .position(|g| g == l)
            .ok_or_else(|| Error::UnknownLabel(l.to_string()))?;
        mask |= 1 << i;
    }
    Ok(mask)
}

pub fn check_unique(labels: &[String]) -> Result<()> {
    let mut seen = std::collections::HashSet::new();
    for l in labels {
        if !seen.insert(l.as_str()) {
            return Err(Error::DuplicateLabel(l.clone()));
        }
    }
    Ok(())
}
