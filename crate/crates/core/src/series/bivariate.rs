use std::collections::BTreeMap;

use super::LaurentSeries;
use crate::error::{Error, Result};
use crate::ffield::{Field, FieldElement};

/// Which variable a [`BivariateLaurent::slice`] sets to zero.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SliceAt {
    /// Keep the `T^0` terms, giving a series in `U`.
    T0,
    /// Keep the `U^0` terms, giving a series in `T`.
    U0,
}

/// A sparse element of `k[[T,U]][1/T, 1/U]`.
///
/// Precision is stored in the element's own exponents: the coefficient of
/// `T^i U^j` is certified iff `i < prec_t` and `j < prec_u`. If `m`, `n` are
/// the pole orders, this is the statement that `T^m U^n a` is known modulo
/// `T^{prec_t + m} A + U^{prec_u + n} A`. Terms outside the certified box
/// are dropped on construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BivariateLaurent {
    field: Field,
    terms: BTreeMap<(i64, i64), FieldElement>,
    prec_t: i64,
    prec_u: i64,
}

impl BivariateLaurent {
    pub fn new(
        field: &Field,
        terms: impl IntoIterator<Item = (i64, i64, FieldElement)>,
        prec_t: i64,
        prec_u: i64,
    ) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (i, j, c) in terms {
            if !field.contains(c) {
                return Err(Error::ForeignElement(c.index()));
            }
            if map.insert((i, j), c).is_some() {
                return Err(Error::domain(format!("duplicate term T^{i} U^{j}")));
            }
        }
        Ok(Self::from_map(field.clone(), map, prec_t, prec_u))
    }

    /// Like [`BivariateLaurent::new`] but with the precision given after
    /// clearing poles: `T^m U^n a` known modulo `(T^I, U^J)`.
    pub fn with_cleared_precision(
        field: &Field,
        terms: impl IntoIterator<Item = (i64, i64, FieldElement)>,
        cleared_t: i64,
        cleared_u: i64,
    ) -> Result<Self> {
        let raw = Self::new(field, terms, i64::MAX / 4, i64::MAX / 4)?;
        let m = raw.pole_t();
        let n = raw.pole_u();
        Ok(Self::from_map(
            raw.field,
            raw.terms,
            cleared_t - m,
            cleared_u - n,
        ))
    }

    fn from_map(
        field: Field,
        mut terms: BTreeMap<(i64, i64), FieldElement>,
        prec_t: i64,
        prec_u: i64,
    ) -> Self {
        terms.retain(|&(i, j), c| !c.is_zero() && i < prec_t && j < prec_u);
        Self {
            field,
            terms,
            prec_t,
            prec_u,
        }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn prec_t(&self) -> i64 {
        self.prec_t
    }

    pub fn prec_u(&self) -> i64 {
        self.prec_u
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Nonzero terms `(i, j, c)` meaning `c T^i U^j`, sorted by `(i, j)`.
    pub fn terms(&self) -> impl Iterator<Item = (i64, i64, FieldElement)> + '_ {
        self.terms.iter().map(|(&(i, j), &c)| (i, j, c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, i: i64, j: i64) -> Result<FieldElement> {
        if i >= self.prec_t || j >= self.prec_u {
            return Err(Error::precision(format!(
                "coefficient of T^{i} U^{j} is outside the certified range"
            )));
        }
        Ok(self.terms.get(&(i, j)).copied().unwrap_or_default())
    }

    /// `-v_T(a)` over the stored terms, clamped at 0.
    pub fn pole_t(&self) -> i64 {
        self.terms.keys().map(|&(i, _)| -i).max().unwrap_or(0).max(0)
    }

    /// `-v_U(a)` over the stored terms, clamped at 0.
    pub fn pole_u(&self) -> i64 {
        self.terms.keys().map(|&(_, j)| -j).max().unwrap_or(0).max(0)
    }

    /// The coefficient of `U^j` as a series in `T`.
    pub fn row_u(&self, j: i64) -> Result<LaurentSeries> {
        if j >= self.prec_u {
            return Err(Error::precision(format!(
                "U^{j} row is outside the certified range"
            )));
        }
        let lo = self.terms.keys().map(|&(i, _)| i).min().unwrap_or(0).min(0);
        let mut coeffs = vec![FieldElement::ZERO; (self.prec_t - lo).max(0) as usize];
        for (&(i, jj), &c) in &self.terms {
            if jj == j {
                coeffs[(i - lo) as usize] = c;
            }
        }
        LaurentSeries::new(&self.field, lo, coeffs, self.prec_t)
    }

    /// The coefficient of `T^i` as a series in `U`.
    pub fn row_t(&self, i: i64) -> Result<LaurentSeries> {
        if i >= self.prec_t {
            return Err(Error::precision(format!(
                "T^{i} row is outside the certified range"
            )));
        }
        let lo = self.terms.keys().map(|&(_, j)| j).min().unwrap_or(0).min(0);
        let mut coeffs = vec![FieldElement::ZERO; (self.prec_u - lo).max(0) as usize];
        for (&(ii, j), &c) in self.terms.range((i, i64::MIN)..=(i, i64::MAX)) {
            debug_assert_eq!(ii, i);
            coeffs[(j - lo) as usize] = c;
        }
        LaurentSeries::new(&self.field, lo, coeffs, self.prec_u)
    }

    /// Residue class modulo `T` (resp. `U`); the element must have no pole
    /// in the variable being set to zero.
    pub fn slice(&self, at: SliceAt) -> Result<LaurentSeries> {
        match at {
            SliceAt::T0 => {
                if self.terms.keys().any(|&(i, _)| i < 0) {
                    return Err(Error::domain("slice T=0 meets a pole in T"));
                }
                self.row_t(0)
            }
            SliceAt::U0 => {
                if self.terms.keys().any(|&(_, j)| j < 0) {
                    return Err(Error::domain("slice U=0 meets a pole in U"));
                }
                self.row_u(0)
            }
        }
    }

    /// Multiplication by `T^di U^dj`.
    pub fn shift(&self, di: i64, dj: i64) -> Self {
        Self {
            field: self.field.clone(),
            terms: self
                .terms
                .iter()
                .map(|(&(i, j), &c)| ((i + di, j + dj), c))
                .collect(),
            prec_t: self.prec_t + di,
            prec_u: self.prec_u + dj,
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.field != other.field {
            return Err(Error::MixedFields);
        }
        let mut map = self.terms.clone();
        for (&k, &c) in &other.terms {
            let e = map.entry(k).or_insert(FieldElement::ZERO);
            *e = self.field.add(*e, c);
        }
        Ok(Self::from_map(
            self.field.clone(),
            map,
            self.prec_t.min(other.prec_t),
            self.prec_u.min(other.prec_u),
        ))
    }

    pub fn neg(&self) -> Self {
        Self {
            field: self.field.clone(),
            terms: self
                .terms
                .iter()
                .map(|(&k, &c)| (k, self.field.neg(c)))
                .collect(),
            prec_t: self.prec_t,
            prec_u: self.prec_u,
        }
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    /// `a + D^p - D` for an exactly known `D` given by its terms. The
    /// certified box of `a` is kept.
    pub fn pshift(&self, d: &[(i64, i64, FieldElement)]) -> Result<Self> {
        let f = &self.field;
        let p = f.characteristic() as i64;
        let mut map = self.terms.clone();
        let mut bump = |k: (i64, i64), c: FieldElement| {
            let e = map.entry(k).or_insert(FieldElement::ZERO);
            *e = f.add(*e, c);
        };
        // D^p is additive in characteristic p.
        for &(i, j, c) in d {
            if !f.contains(c) {
                return Err(Error::ForeignElement(c.index()));
            }
            bump((p * i, p * j), f.frobenius(c, 1));
            bump((i, j), f.neg(c));
        }
        Ok(Self::from_map(f.clone(), map, self.prec_t, self.prec_u))
    }

    /// Lines `i j c`, one per term.
    pub fn terms_text(&self) -> String {
        self.terms
            .iter()
            .map(|(&(i, j), &c)| format!("{i} {j} {}\n", self.field.format_element(c)))
            .collect()
    }
}
