//! Jet orders that determine the jump.

use rayon::prelude::*;

use super::CoverSpec;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OrderMode {
    /// The a priori bound `(m+1)r - 1` (`d = 1`) or `(m+1)r + n` (`d = 2`).
    Bound,
    /// The least `s` that works over the cover's own finite field, found by
    /// scanning every jet. Spaces larger than `cap` are refused.
    Exhaustive { cap: u128 },
}

/// The least `s` such that two curves of `T_r` meeting with intersection
/// number at least `s + 1` always have the same jump.
pub fn sufficient_jet_order(cover: &CoverSpec, r: u32, mode: OrderMode) -> Result<u32> {
    let bound = jet_order_bound(cover, r)?;
    let cap = match mode {
        OrderMode::Bound => return Ok(bound),
        OrderMode::Exhaustive { cap } => cap,
    };
    let space = cover.jet_space(r)?;
    let table = cover.jump_table(&space, cap)?;
    if table.iter().all(|&h| h == table[0]) {
        return Ok(0);
    }
    // curves in T_r always meet with multiplicity >= r, so s < r is only
    // possible for a constant jump
    let first = space.regime().first_exponent();
    for prefix in 1..=space.jet_len() {
        let block = space.block_size(prefix) as usize;
        let stable = table
            .par_chunks(block)
            .all(|c| c.iter().all(|&h| h == c[0]));
        if stable {
            let s = first + prefix as u32 - 1;
            if s > bound {
                return Err(Error::Verification(format!(
                    "jet order {s} exceeds the bound {bound} for r={r}"
                )));
            }
            return Ok(s);
        }
    }
    Err(Error::Verification(format!(
        "jump not determined by the full jet of length {} for r={r}",
        space.jet_len()
    )))
}

/// `(m+1)r - 1` for `d = 1`, `(m+1)r + n` for `d = 2`.
pub fn jet_order_bound(cover: &CoverSpec, r: u32) -> Result<u32> {
    cover.regime(r)?;
    let m = cover.m();
    Ok(match cover.d() {
        1 => (m + 1) * r - 1,
        _ => (m + 1) * r + cover.n(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ffield::Field;
    use crate::series::BivariateLaurent;

    fn cover(f: &Field, terms: &[(i64, i64)], d: u8) -> CoverSpec {
        let a = BivariateLaurent::new(f, terms.iter().map(|&(i, j)| (i, j, f.one())), 20, 20)
            .unwrap();
        CoverSpec::normalize(a, d).unwrap()
    }

    #[test]
    fn bound_mode() {
        let f = Field::prime(2).unwrap();
        let c = cover(&f, &[(-1, 0)], 1);
        assert_eq!(sufficient_jet_order(&c, 3, OrderMode::Bound).unwrap(), 5);
        let c = cover(&f, &[(-1, -1)], 2);
        assert_eq!(sufficient_jet_order(&c, 2, OrderMode::Bound).unwrap(), 5);
    }

    #[test]
    fn constant_jump_needs_no_jet() {
        let f = Field::new(2, 2, Some(&[1, 1, 1])).unwrap();
        let c = cover(&f, &[(-1, 0)], 1);
        let mode = OrderMode::Exhaustive { cap: 1 << 20 };
        assert_eq!(sufficient_jet_order(&c, 1, mode).unwrap(), 0);
    }

    #[test]
    fn exhaustive_within_bound() {
        let f = Field::new(2, 2, Some(&[1, 1, 1])).unwrap();
        let c = cover(&f, &[(-1, 0), (-1, 1)], 1);
        let mode = OrderMode::Exhaustive { cap: 1 << 20 };
        let s = sufficient_jet_order(&c, 2, mode).unwrap();
        assert!(s <= 3, "s = {s}");
        assert!(s >= 2);
    }

    #[test]
    fn cap_is_enforced() {
        let f = Field::new(2, 2, Some(&[1, 1, 1])).unwrap();
        let c = cover(&f, &[(-1, 0)], 1);
        let mode = OrderMode::Exhaustive { cap: 10 };
        assert!(matches!(
            sufficient_jet_order(&c, 4, mode),
            Err(Error::EnumerationCap { .. })
        ));
    }
}
