//! Truncated Laurent series with explicit precision.
//!
//! A [`LaurentSeries`] stands for an element of `k((t))` known modulo
//! `t^prec`. Every operation returns the precision it can actually certify
//! and asking for a coefficient at or beyond it is an error, never a silent
//! zero. [`BivariateLaurent`] holds the cover datum `a` in `k[[T,U]][1/T,1/U]`.

mod bivariate;

pub use bivariate::{BivariateLaurent, SliceAt};

use std::fmt;

use crate::error::{Error, Result};
use crate::ffield::{Field, FieldElement};

/// A univariate Laurent series known modulo `t^prec`.
///
/// Nonzero series are stored with a nonzero leading coefficient at `val`.
/// The zero series to precision `prec` has `val == prec` and no stored
/// coefficients.
#[derive(Clone, PartialEq, Eq)]
pub struct LaurentSeries {
    field: Field,
    val: i64,
    prec: i64,
    coeffs: Vec<FieldElement>,
}

impl fmt::Debug for LaurentSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LaurentSeries({})", self.to_text())
    }
}

impl LaurentSeries {
    /// Coefficients `coeffs[k]` of `t^{val+k}`, known modulo `t^prec`.
    /// Entries at or past `prec` are dropped; missing entries below `prec`
    /// are known zeros.
    pub fn new(field: &Field, val: i64, coeffs: Vec<FieldElement>, prec: i64) -> Result<Self> {
        if let Some(&c) = coeffs.iter().find(|&&c| !field.contains(c)) {
            return Err(Error::ForeignElement(c.index()));
        }
        Ok(Self::normalized(field.clone(), val, coeffs, prec))
    }

    fn normalized(field: Field, val: i64, mut coeffs: Vec<FieldElement>, prec: i64) -> Self {
        if val >= prec {
            return Self::zero(&field, prec);
        }
        coeffs.truncate((prec - val) as usize);
        let Some(first) = coeffs.iter().position(|c| !c.is_zero()) else {
            return Self::zero(&field, prec);
        };
        coeffs.drain(..first);
        let val = val + first as i64;
        coeffs.resize((prec - val) as usize, FieldElement::ZERO);
        Self {
            field,
            val,
            prec,
            coeffs,
        }
    }

    pub fn zero(field: &Field, prec: i64) -> Self {
        Self {
            field: field.clone(),
            val: prec,
            prec,
            coeffs: Vec::new(),
        }
    }

    pub fn one(field: &Field, prec: i64) -> Self {
        Self::monomial(field, FieldElement::ONE, 0, prec)
    }

    /// `c t^exp` known modulo `t^prec`.
    pub fn monomial(field: &Field, c: FieldElement, exp: i64, prec: i64) -> Self {
        Self::normalized(field.clone(), exp, vec![c], prec)
    }

    /// The variable `t` itself, modulo `t^prec`.
    pub fn var(field: &Field, prec: i64) -> Self {
        Self::monomial(field, FieldElement::ONE, 1, prec)
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    /// Index of the lowest nonzero coefficient, or `prec` for the zero series.
    pub fn val(&self) -> i64 {
        self.val
    }

    pub fn prec(&self) -> i64 {
        self.prec
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Leading coefficient, if the series is nonzero.
    pub fn leading(&self) -> Option<FieldElement> {
        self.coeffs.first().copied()
    }

    pub fn coeff(&self, k: i64) -> Result<FieldElement> {
        if k >= self.prec {
            return Err(Error::precision(format!(
                "coefficient of exponent {k} requested, series known mod t^{}",
                self.prec
            )));
        }
        if k < self.val {
            return Ok(FieldElement::ZERO);
        }
        Ok(self.coeffs[(k - self.val) as usize])
    }

    /// `(exponent, coefficient)` pairs with nonzero coefficient.
    pub fn terms(&self) -> impl Iterator<Item = (i64, FieldElement)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(k, &c)| (self.val + k as i64, c))
    }

    /// Drops everything at or above `prec` (no-op if already coarser).
    pub fn truncate(&self, prec: i64) -> Self {
        if prec >= self.prec {
            return self.clone();
        }
        Self::normalized(self.field.clone(), self.val, self.coeffs.clone(), prec)
    }

    fn check_field(&self, other: &Self) -> Result<()> {
        if self.field != other.field {
            return Err(Error::MixedFields);
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_field(other)?;
        let prec = self.prec.min(other.prec);
        let val = self.val.min(other.val).min(prec);
        let f = &self.field;
        let coeffs = (val..prec)
            .map(|k| {
                let a = self.coeff_unchecked(k);
                let b = other.coeff_unchecked(k);
                f.add(a, b)
            })
            .collect();
        Ok(Self::normalized(f.clone(), val, coeffs, prec))
    }

    pub fn neg(&self) -> Self {
        let f = &self.field;
        Self {
            field: f.clone(),
            val: self.val,
            prec: self.prec,
            coeffs: self.coeffs.iter().map(|&c| f.neg(c)).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: FieldElement) -> Self {
        let f = &self.field;
        let coeffs = self.coeffs.iter().map(|&x| f.mul(x, c)).collect();
        Self::normalized(f.clone(), self.val, coeffs, self.prec)
    }

    /// Multiplication by `t^k`.
    pub fn shift(&self, k: i64) -> Self {
        Self {
            field: self.field.clone(),
            val: self.val + k,
            prec: self.prec + k,
            coeffs: self.coeffs.clone(),
        }
    }

    fn coeff_unchecked(&self, k: i64) -> FieldElement {
        if k < self.val || k >= self.prec {
            FieldElement::ZERO
        } else {
            self.coeffs[(k - self.val) as usize]
        }
    }

    /// Product; known modulo `t^{min(prec_s + val_t, prec_t + val_s)}`.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_field(other)?;
        let prec = (self.prec + other.val).min(other.prec + self.val);
        let val = self.val + other.val;
        if self.is_zero() || other.is_zero() || val >= prec {
            return Ok(Self::zero(&self.field, prec));
        }
        let f = &self.field;
        let n = (prec - val) as usize;
        let mut out = vec![FieldElement::ZERO; n];
        for (i, &a) in self.coeffs.iter().enumerate().take(n) {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate().take(n - i) {
                if !b.is_zero() {
                    out[i + j] = f.add(out[i + j], f.mul(a, b));
                }
            }
        }
        Ok(Self::normalized(f.clone(), val, out, prec))
    }

    /// Multiplicative inverse; relative precision `prec - val` is kept, so
    /// the result is known modulo `t^{prec - 2 val}`.
    pub fn invert(&self) -> Result<Self> {
        let Some(lead) = self.leading() else {
            return Err(Error::precision(
                "cannot invert a series whose leading coefficient is not certified",
            ));
        };
        let f = &self.field;
        let n = self.coeffs.len();
        let lead_inv = f.inv(lead)?;
        let mut out = vec![FieldElement::ZERO; n];
        out[0] = lead_inv;
        for k in 1..n {
            let mut acc = FieldElement::ZERO;
            for i in 1..=k {
                acc = f.add(acc, f.mul(self.coeffs[i], out[k - i]));
            }
            out[k] = f.neg(f.mul(acc, lead_inv));
        }
        Ok(Self::normalized(
            f.clone(),
            -self.val,
            out,
            self.prec - 2 * self.val,
        ))
    }

    /// Coefficientwise `p^k`-Frobenius: the series raised to `p^k`.
    pub fn frobenius(&self, k: u32) -> Self {
        let f = &self.field;
        let pk = (f.characteristic() as i64).pow(k);
        if self.is_zero() {
            return Self::zero(f, self.prec * pk);
        }
        let mut coeffs = vec![FieldElement::ZERO; ((self.prec - self.val) * pk) as usize];
        for (idx, &c) in self.coeffs.iter().enumerate() {
            coeffs[idx * pk as usize] = f.frobenius(c, k);
        }
        Self::normalized(f.clone(), self.val * pk, coeffs, self.prec * pk)
    }

    /// Integer power. Factors of `p` in the exponent go through
    /// [`LaurentSeries::frobenius`], which is exact and multiplies the
    /// precision by `p`.
    pub fn pow(&self, k: i64) -> Result<Self> {
        if k < 0 {
            return self.invert()?.pow(-k);
        }
        if k == 0 {
            let rel = (self.prec - self.val).max(1);
            return Ok(Self::one(&self.field, rel));
        }
        let p = self.field.characteristic() as i64;
        let mut b = k;
        let mut frob = 0u32;
        while b % p == 0 {
            b /= p;
            frob += 1;
        }
        let mut result: Option<Self> = None;
        let mut base = self.clone();
        let mut e = b;
        loop {
            if e & 1 == 1 {
                result = Some(match result {
                    None => base.clone(),
                    Some(r) => r.mul(&base)?,
                });
            }
            e >>= 1;
            if e == 0 {
                break;
            }
            base = base.mul(&base)?;
        }
        let r = result.expect("positive exponent");
        Ok(if frob > 0 { r.frobenius(frob) } else { r })
    }

    /// Composition `self(g)`, requiring `val(g) >= 1`.
    ///
    /// With `s = sum_{v <= i < P} c_i t^i + O(t^P)` the result is
    /// `sum c_i g^i + O(g^P)`; each `g^i` carries its own precision and
    /// `O(g^P)` contributes `O(t^{val(g) P})`.
    pub fn substitute(&self, g: &Self) -> Result<Self> {
        self.check_field(g)?;
        let w = g.val;
        if w < 1 {
            return Err(Error::domain(format!(
                "substituted series must have valuation >= 1, got {w}"
            )));
        }
        let f = &self.field;
        if g.is_zero() && (self.val < 0 || self.prec < 0) {
            return Err(Error::precision(
                "negative powers of a series with uncertified leading term",
            ));
        }
        let mut acc = Self::zero(f, w * self.prec);
        if self.is_zero() {
            return Ok(acc);
        }
        // g^i for the current exponent i; g^0 is exact and handled apart.
        let mut power = if self.val != 0 {
            Some(g.pow(self.val)?)
        } else {
            None
        };
        for i in self.val..self.prec {
            let c = self.coeffs[(i - self.val) as usize];
            match &power {
                Some(pw) => {
                    if i > 0 && pw.val >= acc.prec {
                        break;
                    }
                    if !c.is_zero() {
                        acc = acc.add(&pw.scale(c))?;
                    }
                }
                None => {
                    if !c.is_zero() {
                        acc = acc.add(&Self::monomial(f, c, 0, acc.prec))?;
                    }
                }
            }
            power = match power {
                _ if i == -1 => None,
                _ if i == 0 => Some(g.clone()),
                Some(pw) => Some(pw.mul(g)?),
                None => None,
            };
        }
        Ok(acc)
    }

    /// Text form `val:prec:c_val,c_{val+1},...`.
    pub fn to_text(&self) -> String {
        format!(
            "{}:{}:{}",
            self.val,
            self.prec,
            self.field.format_element_list(&self.coeffs)
        )
    }

    pub fn from_text(field: &Field, s: &str) -> Result<Self> {
        let mut parts = s.trim().splitn(3, ':');
        let bad = || Error::domain(format!("malformed series text '{s}'"));
        let val: i64 = parts.next().and_then(|v| v.parse().ok()).ok_or_else(bad)?;
        let prec: i64 = parts.next().and_then(|v| v.parse().ok()).ok_or_else(bad)?;
        let coeffs = field.parse_element_list(parts.next().ok_or_else(bad)?)?;
        if val < prec && coeffs.len() as i64 != prec - val {
            return Err(bad());
        }
        Self::new(field, val, coeffs, prec)
    }
}
