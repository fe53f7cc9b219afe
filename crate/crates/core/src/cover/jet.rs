//! Curve germs through the closed point, in Weierstrass normal form.

use std::fmt;

use crate::error::{Error, Result};
use crate::ffield::{Field, FieldElement};
use crate::series::LaurentSeries;

/// Default bound on the number of points an exhaustive scan may visit.
pub const DEFAULT_ENUMERATION_CAP: u128 = 1 << 22;

/// Which Weierstrass family a jet belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Regime {
    /// `U = alpha_1 T + alpha_2 T^2 + ...`: curves meeting `T = 0`
    /// transversally when the branch divisor is `T = 0` alone.
    Transversal,
    /// `T = beta_r U^r + beta_{r+1} U^{r+1} + ...` with `beta_r != 0`.
    Tangent { r: u32 },
}

impl Regime {
    /// Exponent carried by the first stored coefficient.
    pub fn first_exponent(self) -> u32 {
        match self {
            Regime::Transversal => 1,
            Regime::Tangent { r } => r,
        }
    }
}

/// A truncated curve germ: `alpha_1..alpha_M` or `beta_r..beta_{r+M-1}`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CurveJet {
    regime: Regime,
    coeffs: Vec<FieldElement>,
}

impl fmt::Debug for CurveJet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let idx: Vec<u32> = self.coeffs.iter().map(|c| c.index()).collect();
        match self.regime {
            Regime::Transversal => write!(f, "x:{idx:?}"),
            Regime::Tangent { r } => write!(f, "t:{r}:{idx:?}"),
        }
    }
}

/// Intersection number of two curves, or a lower bound when the jets agree
/// as far as they are stored.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IntersectionOrder {
    Exact(u32),
    AtLeast(u32),
}

impl fmt::Display for IntersectionOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IntersectionOrder::Exact(k) => write!(f, "{k}"),
            IntersectionOrder::AtLeast(k) => write!(f, ">={k}"),
        }
    }
}

impl CurveJet {
    pub fn transversal(alphas: Vec<FieldElement>) -> Self {
        Self {
            regime: Regime::Transversal,
            coeffs: alphas,
        }
    }

    pub fn tangent(r: u32, betas: Vec<FieldElement>) -> Result<Self> {
        if r == 0 {
            return Err(Error::domain("tangency order r must be at least 1"));
        }
        match betas.first() {
            None => return Err(Error::ShortJet { need: 1, got: 0 }),
            Some(b) if b.is_zero() => {
                return Err(if betas.iter().all(|b| b.is_zero()) {
                    Error::BranchComponent
                } else {
                    Error::ZeroLeadingCoefficient
                });
            }
            _ => {}
        }
        Ok(Self {
            regime: Regime::Tangent { r },
            coeffs: betas,
        })
    }

    pub fn regime(&self) -> Regime {
        self.regime
    }

    /// Number of stored coefficients `M`.
    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeffs(&self) -> &[FieldElement] {
        &self.coeffs
    }

    /// Coefficient of the given normal-form exponent, if stored.
    pub fn coefficient(&self, exponent: u32) -> Option<FieldElement> {
        let first = self.regime.first_exponent();
        if exponent < first {
            return Some(FieldElement::ZERO);
        }
        self.coeffs.get((exponent - first) as usize).copied()
    }

    /// The first `len` coefficients.
    pub fn truncate(&self, len: usize) -> Self {
        Self {
            regime: self.regime,
            coeffs: self.coeffs[..len.min(self.coeffs.len())].to_vec(),
        }
    }

    pub fn check_field(&self, field: &Field) -> Result<()> {
        match self.coeffs.iter().find(|&&c| !field.contains(c)) {
            Some(c) => Err(Error::ForeignElement(c.index())),
            None => Ok(()),
        }
    }

    /// The curve as a series: `u(t)` known mod `t^{M+1}` (transversal) or
    /// `t(u)` known mod `u^{r+M}` (tangent).
    pub fn curve_series(&self, field: &Field) -> Result<LaurentSeries> {
        self.check_field(field)?;
        let first = self.regime.first_exponent() as i64;
        LaurentSeries::new(
            field,
            first,
            self.coeffs.clone(),
            first + self.coeffs.len() as i64,
        )
    }

    /// `(F.F')` for two jets of the same family: the first exponent where
    /// the normal-form coefficients differ.
    pub fn intersection_order(&self, other: &Self) -> Result<IntersectionOrder> {
        if self.regime != other.regime {
            return Err(Error::domain(format!(
                "cannot intersect jets of families {:?} and {:?}",
                self.regime, other.regime
            )));
        }
        let first = self.regime.first_exponent();
        let common = self.len().min(other.len());
        for k in 0..common {
            if self.coeffs[k] != other.coeffs[k] {
                return Ok(IntersectionOrder::Exact(first + k as u32));
            }
        }
        Ok(IntersectionOrder::AtLeast(first + common as u32))
    }

    /// Text form `x:<alpha_1>,...` or `t:<r>:<beta_r>,...`.
    pub fn to_text(&self, field: &Field) -> String {
        let body = field.format_element_list(&self.coeffs);
        match self.regime {
            Regime::Transversal => format!("x:{body}"),
            Regime::Tangent { r } => format!("t:{r}:{body}"),
        }
    }

    pub fn from_text(field: &Field, s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some(rest) = s.strip_prefix("x:") {
            return Ok(Self::transversal(field.parse_element_list(rest)?));
        }
        if let Some(rest) = s.strip_prefix("t:") {
            let (r, body) = rest
                .split_once(':')
                .ok_or_else(|| Error::domain(format!("malformed tangent jet '{s}'")))?;
            let r: u32 = r
                .trim()
                .parse()
                .map_err(|_| Error::domain(format!("bad tangency order '{r}'")))?;
            return Self::tangent(r, field.parse_element_list(body)?);
        }
        Err(Error::domain(format!(
            "jet must start with 'x:' or 't:', got '{s}'"
        )))
    }
}

/// All jets of one family and length over a finite field, in a fixed order.
///
/// The first stored coefficient is the most significant digit, so jets
/// sharing a prefix of length `k` occupy contiguous index blocks of size
/// `q^{len-k}`. In the tangent family the first digit runs over nonzero
/// elements only.
#[derive(Clone, Debug)]
pub struct JetSpace {
    field: Field,
    regime: Regime,
    len: usize,
}

impl JetSpace {
    pub fn new(field: &Field, regime: Regime, len: usize) -> Result<Self> {
        if len == 0 && matches!(regime, Regime::Tangent { .. }) {
            return Err(Error::ShortJet { need: 1, got: 0 });
        }
        Ok(Self {
            field: field.clone(),
            regime,
            len,
        })
    }

    pub fn regime(&self) -> Regime {
        self.regime
    }

    pub fn jet_len(&self) -> usize {
        self.len
    }

    pub fn size(&self) -> u128 {
        let q = self.field.order() as u128;
        match self.regime {
            Regime::Transversal => q.pow(self.len as u32),
            Regime::Tangent { .. } => (q - 1) * q.pow(self.len as u32 - 1),
        }
    }

    /// Fails if the space is larger than `cap`.
    pub fn check_cap(&self, cap: u128) -> Result<u64> {
        let size = self.size();
        if size > cap {
            return Err(Error::EnumerationCap { size, cap });
        }
        Ok(size as u64)
    }

    /// Block size of jets sharing their first `prefix` coefficients.
    pub fn block_size(&self, prefix: usize) -> u64 {
        (self.field.order() as u64).pow((self.len - prefix.min(self.len)) as u32)
    }

    pub fn jet_at(&self, mut index: u64) -> CurveJet {
        let q = self.field.order() as u64;
        let mut digits = vec![FieldElement::ZERO; self.len];
        for k in (0..self.len).rev() {
            let radix = if k == 0 && matches!(self.regime, Regime::Tangent { .. }) {
                q - 1
            } else {
                q
            };
            let d = index % radix;
            index /= radix;
            let value = if radix == q { d } else { d + 1 };
            digits[k] = self.field.element_at(value as u32).expect("digit below q");
        }
        CurveJet {
            regime: self.regime,
            coeffs: digits,
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = CurveJet> + '_ {
        (0..self.size() as u64).map(move |i| self.jet_at(i))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f4() -> Field {
        Field::new(2, 2, Some(&[1, 1, 1])).unwrap()
    }

    #[test]
    fn identical_jets_give_lower_bound() {
        let f = f4();
        let a = CurveJet::transversal(vec![f.one(), f.zero(), f.generator()]);
        assert_eq!(
            a.intersection_order(&a).unwrap(),
            IntersectionOrder::AtLeast(4)
        );
        let b = CurveJet::tangent(2, vec![f.one(), f.one()]).unwrap();
        assert_eq!(
            b.intersection_order(&b).unwrap(),
            IntersectionOrder::AtLeast(4)
        );
    }

    #[test]
    fn tangent_first_disagreement() {
        let f = f4();
        let a = CurveJet::tangent(2, vec![f.one(), f.zero()]).unwrap();
        let b = CurveJet::tangent(2, vec![f.one(), f.one()]).unwrap();
        assert_eq!(a.intersection_order(&b).unwrap(), IntersectionOrder::Exact(3));
    }

    #[test]
    fn transversal_matches_quotient_dimension() {
        // u = t vs u = t + t^5: dim k[[t]]/(t^5) = 5
        let f = f4();
        let mut alphas = vec![f.zero(); 6];
        alphas[0] = f.one();
        let a = CurveJet::transversal(alphas.clone());
        alphas[4] = f.one();
        let b = CurveJet::transversal(alphas);
        let diff = b
            .curve_series(&f)
            .unwrap()
            .sub(&a.curve_series(&f).unwrap())
            .unwrap();
        assert_eq!(diff.val(), 5);
        assert_eq!(a.intersection_order(&b).unwrap(), IntersectionOrder::Exact(5));
    }

    #[test]
    fn mismatched_families_rejected() {
        let f = f4();
        let a = CurveJet::transversal(vec![f.one()]);
        let b = CurveJet::tangent(2, vec![f.one()]).unwrap();
        let c = CurveJet::tangent(3, vec![f.one()]).unwrap();
        assert!(a.intersection_order(&b).is_err());
        assert!(b.intersection_order(&c).is_err());
    }

    #[test]
    fn tangent_constructor_errors() {
        let f = f4();
        assert_eq!(
            CurveJet::tangent(2, vec![f.zero(), f.one()]).unwrap_err(),
            Error::ZeroLeadingCoefficient
        );
        assert_eq!(
            CurveJet::tangent(2, vec![f.zero(), f.zero()]).unwrap_err(),
            Error::BranchComponent
        );
    }

    #[test]
    fn jet_space_is_a_bijection() {
        let f = f4();
        let space = JetSpace::new(&f, Regime::Tangent { r: 2 }, 3).unwrap();
        assert_eq!(space.size(), 48);
        let jets: std::collections::HashSet<_> = space.iter().collect();
        assert_eq!(jets.len(), 48);
        assert!(jets.iter().all(|j| !j.coeffs()[0].is_zero()));
        // prefix blocks are contiguous
        let b = space.block_size(1);
        for i in 0..space.size() as u64 {
            assert_eq!(space.jet_at(i).coeffs()[0], space.jet_at(i - i % b).coeffs()[0]);
        }
    }

    #[test]
    fn text_round_trip() {
        let f = f4();
        let j = CurveJet::tangent(3, vec![f.generator(), f.zero(), f.one()]).unwrap();
        assert_eq!(j.to_text(&f), "t:3:0,1,0,0,1,0");
        assert_eq!(CurveJet::from_text(&f, &j.to_text(&f)).unwrap(), j);
        let x = CurveJet::transversal(vec![f.one()]);
        assert_eq!(CurveJet::from_text(&f, "x:1,0").unwrap(), x);
        assert!(CurveJet::from_text(&f, "y:1").is_err());
    }
}
