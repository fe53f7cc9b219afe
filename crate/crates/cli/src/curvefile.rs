//! Curve germs given by an arbitrary equation `f(T, U) = 0`.
//!
//! ```text
//! # U = T + T^2 over F_4, written as T + T^2 - U (p = 2: -1 = 1)
//! term 1 0 1,0
//! term 2 0 1,0
//! term 0 1 1,0
//! ```
//!
//! `f` must vanish at the origin and be regular there. The germ is brought
//! to Weierstrass form by solving `f = 0` for `U` as a series in `T`
//! (`d = 1` and `df/dU(0) != 0`) or for `T` as a series in `U`
//! (`df/dT(0) != 0`); dividing `f` by the unit that relates it to
//! `-U + u(T)` or `-T + t(U)` gives the same coefficients.

use asram::cover::{CoverSpec, CurveJet, Regime};
use asram::ffield::{Field, FieldElement};
use asram::series::LaurentSeries;
use asram::Error;

use crate::error::{CliError, ParseError};

/// Depth searched for the first nonzero coefficient of `t(U)`.
const MAX_TANGENCY: i64 = 64;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurveFile {
    /// `(i, j, coordinates)` meaning `c T^i U^j`.
    pub terms: Vec<(u32, u32, Vec<u32>)>,
    /// Optional jet length; defaults to what the cover needs.
    pub len: Option<usize>,
}

impl CurveFile {
    pub fn parse(text: &str) -> Result<Self, ParseError> {
        let mut terms = Vec::new();
        let mut len = None;
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let body = raw.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            let toks: Vec<&str> = body.split_whitespace().collect();
            let bad = |what: &str, t: &str| ParseError::new(line, format!("bad {what} '{t}'"));
            match (toks[0], toks.len()) {
                ("term", 4) => {
                    let i = toks[1].parse().map_err(|_| bad("T exponent", toks[1]))?;
                    let j = toks[2].parse().map_err(|_| bad("U exponent", toks[2]))?;
                    let c = toks[3]
                        .split(',')
                        .map(|c| c.trim().parse().map_err(|_| bad("coordinate", c)))
                        .collect::<Result<Vec<u32>, _>>()?;
                    terms.push((i, j, c));
                }
                ("len", 2) => {
                    if len.is_some() {
                        return Err(ParseError::new(line, "duplicate 'len' line"));
                    }
                    len = Some(toks[1].parse().map_err(|_| bad("length", toks[1]))?);
                }
                (k, _) => {
                    return Err(ParseError::new(line, format!("malformed line starting '{k}'")))
                }
            }
        }
        if terms.is_empty() {
            return Err(ParseError::new(0, "no 'term' lines"));
        }
        Ok(Self { terms, len })
    }

    fn coefficients(&self, f: &Field) -> Result<Vec<(u32, u32, FieldElement)>, CliError> {
        self.terms
            .iter()
            .map(|(i, j, c)| Ok((*i, *j, f.from_coords(c)?)))
            .collect()
    }

    /// The Weierstrass jet of the curve in the family the cover uses.
    pub fn to_jet(&self, cover: &CoverSpec) -> Result<CurveJet, CliError> {
        let f = cover.field();
        let poly = self.coefficients(f)?;
        let coeff = |i: u32, j: u32| {
            poly.iter()
                .filter(|&&(a, b, _)| a == i && b == j)
                .fold(f.zero(), |acc, &(_, _, c)| f.add(acc, c))
        };
        if !coeff(0, 0).is_zero() {
            return Err(Error::Domain("curve does not pass through the origin".into()).into());
        }
        let c_u = coeff(0, 1);
        let c_t = coeff(1, 0);
        if cover.d() == 1 && !c_u.is_zero() {
            let len = self.len.unwrap_or(cover.required_jet_len(1)?);
            let u = solve(f, &poly, Solve::ForU, len as i64 + 1)?;
            let alphas = (1..=len as i64).map(|k| u.coeff(k)).collect::<Result<_, _>>()?;
            return Ok(CurveJet::transversal(alphas));
        }
        if c_t.is_zero() {
            return Err(Error::Domain(if c_u.is_zero() {
                "curve is singular at the origin".into()
            } else {
                "curve is tangent to U = 0; swap T and U in the cover".into()
            })
            .into());
        }
        let probe = solve(f, &poly, Solve::ForT, MAX_TANGENCY)?;
        if probe.is_zero() {
            return Err(Error::BranchComponent.into());
        }
        let r = probe.val() as u32;
        if cover.regime(r)? != (Regime::Tangent { r }) {
            return Err(Error::Domain("curve is not in a tangent family".into()).into());
        }
        let len = self.len.unwrap_or(cover.required_jet_len(r)?);
        let t = solve(f, &poly, Solve::ForT, r as i64 + len as i64)?;
        let betas = (r as i64..r as i64 + len as i64)
            .map(|k| t.coeff(k))
            .collect::<Result<_, _>>()?;
        Ok(CurveJet::tangent(r, betas)?)
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Solve {
    /// `U = u(T)`.
    ForU,
    /// `T = t(U)`.
    ForT,
}

/// Solves `f = 0` for the chosen variable modulo `x^prec`, `x` the other
/// variable, by the fixed point `y <- y - f(x, y) / c` with `c` the linear
/// coefficient of `y`; each round fixes one more coefficient.
fn solve(
    f: &Field,
    poly: &[(u32, u32, FieldElement)],
    which: Solve,
    prec: i64,
) -> Result<LaurentSeries, Error> {
    type Exp = fn(&(u32, u32, FieldElement)) -> u32;
    let (lin, own, other): (FieldElement, Exp, Exp) = match which {
            Solve::ForU => (
                poly.iter()
                    .filter(|t| t.0 == 0 && t.1 == 1)
                    .fold(f.zero(), |a, t| f.add(a, t.2)),
                |t| t.1,
                |t| t.0,
            ),
            Solve::ForT => (
                poly.iter()
                    .filter(|t| t.0 == 1 && t.1 == 0)
                    .fold(f.zero(), |a, t| f.add(a, t.2)),
                |t| t.0,
                |t| t.1,
            ),
        };
    let inv = f.inv(lin)?;
    let mut y = LaurentSeries::zero(f, prec);
    for _ in 0..prec {
        let mut val = LaurentSeries::zero(f, prec);
        for t in poly {
            let term = match own(t) {
                0 => LaurentSeries::monomial(f, t.2, other(t) as i64, prec),
                _ if y.is_zero() => continue,
                k => y.pow(k as i64)?.shift(other(t) as i64).scale(t.2),
            };
            val = val.add(&term.truncate(prec))?;
        }
        let next = y.sub(&val.scale(inv))?.truncate(prec);
        if next == y {
            break;
        }
        y = next;
    }
    Ok(y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use asram::series::BivariateLaurent;

    fn f4() -> Field {
        Field::new(2, 2, Some(&[1, 1, 1])).unwrap()
    }

    fn cover(d: u8, terms: &[(i64, i64)]) -> CoverSpec {
        let f = f4();
        let a = BivariateLaurent::new(&f, terms.iter().map(|&(i, j)| (i, j, f.one())), 20, 20)
            .unwrap();
        CoverSpec::normalize(a, d).unwrap()
    }

    #[test]
    fn already_normal_transversal() {
        let c = cover(1, &[(-3, 0)]);
        let cf = CurveFile::parse("term 1 0 1,0\nterm 2 0 1,0\nterm 0 1 1,0\n").unwrap();
        let jet = cf.to_jet(&c).unwrap();
        assert_eq!(jet.regime(), Regime::Transversal);
        let f = f4();
        assert_eq!(jet.coeffs(), &[f.one(), f.one(), f.zero()]);
    }

    #[test]
    fn unit_factor_is_removed() {
        // (1 + T)(U - T^2) = U + TU - T^2 - T^3 solves to U = T^2 exactly
        let c = cover(1, &[(-3, 0)]);
        let cf = CurveFile::parse("term 0 1 1,0\nterm 1 1 1,0\nterm 2 0 1,0\nterm 3 0 1,0\n").unwrap();
        let f = f4();
        assert_eq!(cf.to_jet(&c).unwrap().coeffs(), &[f.zero(), f.one(), f.zero()]);
    }

    #[test]
    fn tangent_order_is_detected() {
        // T - U^2 - T U: t = u^2 + t u => t = u^2 / (1 - u) = u^2 + u^3 + ...
        let c = cover(1, &[(-1, 0)]);
        let cf = CurveFile::parse("term 1 0 1,0\nterm 0 2 1,0\nterm 1 1 1,0\n").unwrap();
        let jet = cf.to_jet(&c).unwrap();
        assert_eq!(jet.regime(), Regime::Tangent { r: 2 });
        let f = f4();
        assert_eq!(jet.coeffs(), &[f.one(), f.one()]);
    }

    #[test]
    fn branch_component_rejected() {
        let c = cover(1, &[(-1, 0)]);
        let cf = CurveFile::parse("term 1 0 1,0\nterm 1 1 1,0\n").unwrap();
        assert!(matches!(
            cf.to_jet(&c),
            Err(CliError::Core(Error::BranchComponent))
        ));
    }

    #[test]
    fn singular_rejected() {
        let c = cover(1, &[(-1, 0)]);
        let cf = CurveFile::parse("term 2 0 1,0\nterm 0 2 1,0\n").unwrap();
        assert!(matches!(cf.to_jet(&c), Err(CliError::Core(Error::Domain(_)))));
    }
}
