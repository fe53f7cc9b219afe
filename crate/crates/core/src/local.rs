//! Artin-Schreier extensions of `k((t))` with `k` perfect.
//!
//! An extension `y^p - y = a` only depends on `a` modulo `d^p - d` and
//! modulo `k[[t]]`. [`as_reduce`] brings `a` to the canonical representative
//! whose poles all have order prime to `p`; the largest such pole order is
//! the ramification jump.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::ffield::{Field, FieldElement};
use crate::series::LaurentSeries;

/// `sum_l c_l t^{-l}` over `l >= 1`, `p` not dividing `l`, `c_l != 0`.
#[derive(Clone, PartialEq, Eq)]
pub struct ReducedForm {
    field: Field,
    terms: BTreeMap<u32, FieldElement>,
    proven_prec: i64,
}

impl fmt::Debug for ReducedForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map()
            .entries(
                self.terms
                    .iter()
                    .map(|(l, &c)| (l, self.field.format_element(c))),
            )
            .finish()
    }
}

impl ReducedForm {
    pub fn field(&self) -> &Field {
        &self.field
    }

    /// Pole orders and their coefficients, ascending.
    pub fn terms(&self) -> impl Iterator<Item = (u32, FieldElement)> + '_ {
        self.terms.iter().map(|(&l, &c)| (l, c))
    }

    pub fn coeff(&self, l: u32) -> FieldElement {
        self.terms.get(&l).copied().unwrap_or_default()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Precision of the input series; every pole term was certified.
    pub fn proven_prec(&self) -> i64 {
        self.proven_prec
    }

    /// The ramification jump: the deepest pole, or 0 for the trivial extension.
    pub fn jump(&self) -> u32 {
        self.terms.keys().next_back().copied().unwrap_or(0)
    }

    /// The form as a Laurent series known modulo `t^0`.
    pub fn to_series(&self) -> LaurentSeries {
        let depth = self.jump() as i64;
        let mut coeffs = vec![FieldElement::ZERO; depth as usize];
        for (&l, &c) in &self.terms {
            coeffs[(depth - l as i64) as usize] = c;
        }
        LaurentSeries::new(&self.field, -depth, coeffs, 0).expect("coefficients from this field")
    }
}

/// Reduces `a` modulo `d^p - d` and `k[[t]]`.
///
/// Works from the deepest pole upward: a term `c t^{-ps}` is replaced by
/// `c^{1/p} t^{-s}`, which is `a - (c^{1/p} t^{-s})^p + c^{1/p} t^{-s}`.
/// Requires every negative-exponent coefficient of `a` to be certified.
pub fn as_reduce(a: &LaurentSeries) -> Result<ReducedForm> {
    if a.prec() < 0 {
        return Err(Error::precision(format!(
            "series known only mod t^{}, pole part not certified",
            a.prec()
        )));
    }
    let f = a.field();
    let p = f.characteristic() as u64;
    let depth = (-a.val()).max(0) as u64;
    // pole[k] is the coefficient of t^{-k}
    let mut pole = vec![FieldElement::ZERO; depth as usize + 1];
    for (e, c) in a.terms() {
        if e < 0 {
            pole[(-e) as usize] = c;
        }
    }
    for k in (1..=depth).rev() {
        let c = pole[k as usize];
        if k % p == 0 && !c.is_zero() {
            let s = (k / p) as usize;
            pole[s] = f.add(pole[s], f.pth_root(c));
            pole[k as usize] = FieldElement::ZERO;
        }
    }
    let terms = pole
        .iter()
        .enumerate()
        .skip(1)
        .filter(|(_, c)| !c.is_zero())
        .map(|(k, &c)| (k as u32, c))
        .collect();
    Ok(ReducedForm {
        field: f.clone(),
        terms,
        proven_prec: a.prec(),
    })
}

/// The unique ramification jump of `y^p - y = a`, or 0 if the extension is
/// trivial over the algebraically closed residue field.
pub fn as_jump(a: &LaurentSeries) -> Result<u32> {
    Ok(as_reduce(a)?.jump())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn series(f: &Field, val: i64, cs: &[u32], prec: i64) -> LaurentSeries {
        let cs = cs.iter().map(|&c| f.element_at(c).unwrap()).collect();
        LaurentSeries::new(f, val, cs, prec).unwrap()
    }

    #[test]
    fn already_reduced() {
        let f = Field::prime(2).unwrap();
        let r = as_reduce(&series(&f, -3, &[1], 0)).unwrap();
        assert_eq!(r.terms().collect::<Vec<_>>(), vec![(3, f.one())]);
        assert_eq!(r.jump(), 3);
    }

    #[test]
    fn one_frobenius_step() {
        let f = Field::prime(2).unwrap();
        let r = as_reduce(&series(&f, -2, &[1], 0)).unwrap();
        assert_eq!(r.terms().collect::<Vec<_>>(), vec![(1, f.one())]);
        assert_eq!(r.jump(), 1);
    }

    #[test]
    fn nested_pth_roots() {
        // t^-4 over F_4 with coefficient g: g t^-4 -> g^{1/2} t^-2 -> g^{1/4} t^-1
        let f = Field::new(2, 2, Some(&[1, 1, 1])).unwrap();
        let g = f.generator();
        let a = LaurentSeries::monomial(&f, g, -4, 0);
        let r = as_reduce(&a).unwrap();
        assert_eq!(r.terms().collect::<Vec<_>>(), vec![(1, f.pth_root_iter(g, 2))]);
    }

    #[test]
    fn integral_series_is_unramified() {
        let f = Field::prime(3).unwrap();
        let a = series(&f, 0, &[1, 2, 1], 3);
        assert!(as_reduce(&a).unwrap().is_empty());
        assert_eq!(as_jump(&a).unwrap(), 0);
    }

    #[test]
    fn uncertified_pole_part_fails() {
        let f = Field::prime(2).unwrap();
        let a = series(&f, -3, &[1, 0], -1);
        assert!(matches!(as_reduce(&a), Err(Error::Precision(_))));
    }

    #[test]
    fn reduction_is_idempotent() {
        let f = Field::prime(3).unwrap();
        let a = series(&f, -9, &[1, 0, 2, 1, 0, 0, 1, 2, 1], 0);
        let r = as_reduce(&a).unwrap();
        assert_eq!(as_reduce(&r.to_series()).unwrap(), r);
    }
}
