//! Artin-Schreier covers of `Spec k[[T,U]]` branched along `T = 0` (and
//! `U = 0` when `d = 2`), and their restrictions to regular curve germs.

mod jet;
mod order;

pub use jet::{CurveJet, IntersectionOrder, JetSpace, Regime, DEFAULT_ENUMERATION_CAP};
pub use order::{jet_order_bound, sufficient_jet_order, OrderMode};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::ffield::{Field, FieldElement};
use crate::local::{as_reduce, ReducedForm};
use crate::series::{BivariateLaurent, LaurentSeries};

/// Upper bound on normalization steps before we assume a bug.
const MAX_NORMALIZE_STEPS: usize = 100_000;

/// The cover `x^p - x = a` together with its branch data.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoverSpec {
    a: BivariateLaurent,
    d: u8,
    m: u32,
    n: u32,
    normalized: bool,
}

/// `theta_{ij}`, the coefficient of `T^{i-m} U^{j-n}` in `a`, for
/// `0 <= i < m+n` and `0 <= j < rm+n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThetaMatrix {
    r: u32,
    rows: usize,
    cols: usize,
    values: Vec<FieldElement>,
}

impl ThetaMatrix {
    /// A matrix from row-major values.
    pub fn new(r: u32, rows: usize, cols: usize, values: Vec<FieldElement>) -> Result<Self> {
        if values.len() != rows * cols {
            return Err(Error::domain(format!(
                "{} values for a {rows}x{cols} matrix",
                values.len()
            )));
        }
        Ok(Self {
            r,
            rows,
            cols,
            values,
        })
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> FieldElement {
        assert!(i < self.rows && j < self.cols, "theta index out of range");
        self.values[i * self.cols + j]
    }
}

/// The jump of the cover along one curve.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JumpReport {
    pub h: u32,
    pub reduced: ReducedForm,
    pub jet: CurveJet,
}

impl CoverSpec {
    /// Wraps `a` as given, without normalizing.
    pub fn new(a: BivariateLaurent, d: u8) -> Result<Self> {
        validate(&a, d)?;
        let m = a.pole_t() as u32;
        let n = if d == 2 { a.pole_u() as u32 } else { 0 };
        if a.is_zero() || m == 0 {
            return Err(Error::Unramified);
        }
        Ok(Self {
            a,
            d,
            m,
            n,
            normalized: false,
        })
    }

    /// Replaces `a` by an equivalent `a + D^p - D` with minimal pole orders.
    ///
    /// While `p | n` and the `U^{-n}` row is a `p`-th power `b_0^p` in
    /// `k((T))`, subtract `(U^{-n/p} b_0)^p - U^{-n/p} b_0`; likewise for the
    /// `T^{-m}` row. When `p | m` the terms `theta_{0i}` below the pivot are
    /// then cleared, so that [`crate::asympt::pivot_index`] can rely on
    /// `theta_{0i} = 0` for `i < j`.
    ///
    /// A row counts as a `p`-th power when all of its certified coefficients
    /// sit at exponents divisible by `p`; at least `p` consecutive exponents
    /// from the row's leading term must be certified to decide.
    pub fn normalize(a: BivariateLaurent, d: u8) -> Result<Self> {
        validate(&a, d)?;
        let p = a.field().characteristic() as i64;
        let mut a = a;
        for _ in 0..MAX_NORMALIZE_STEPS {
            if a.is_zero() {
                return Err(Error::Unramified);
            }
            let m = a.pole_t();
            let n = if d == 2 { a.pole_u() } else { 0 };
            if m == 0 {
                return Err(Error::Unramified);
            }
            if n > 0 && n % p == 0 {
                let b = a.row_u(-n)?;
                if is_pth_power(&b)? {
                    let shift: Vec<_> = b
                        .terms()
                        .map(|(i, c)| (i / p, -n / p, a.field().neg(a.field().pth_root(c))))
                        .collect();
                    a = a.pshift(&shift)?;
                    continue;
                }
            }
            if m % p == 0 {
                let c = a.row_t(-m)?;
                if is_pth_power(&c)? {
                    let shift: Vec<_> = c
                        .terms()
                        .map(|(j, c)| (-m / p, j / p, a.field().neg(a.field().pth_root(c))))
                        .collect();
                    a = a.pshift(&shift)?;
                    continue;
                }
                // clear p-divisible exponents below the pivot
                let pivot = c.terms().find(|&(j, _)| j % p != 0).map(|(j, _)| j);
                let below: Vec<_> = c
                    .terms()
                    .take_while(|&(j, _)| Some(j) < pivot)
                    .map(|(j, c)| (-m / p, j / p, a.field().neg(a.field().pth_root(c))))
                    .collect();
                if !below.is_empty() {
                    a = a.pshift(&below)?;
                    continue;
                }
            }
            let mut cover = Self::new(a, d)?;
            cover.normalized = true;
            return Ok(cover);
        }
        Err(Error::Verification(
            "normalization did not terminate".into(),
        ))
    }

    pub fn field(&self) -> &Field {
        self.a.field()
    }

    pub fn a(&self) -> &BivariateLaurent {
        &self.a
    }

    /// Number of branch components.
    pub fn d(&self) -> u8 {
        self.d
    }

    /// Pole order along `T = 0`.
    pub fn m(&self) -> u32 {
        self.m
    }

    /// Pole order along `U = 0` (0 when `d = 1`).
    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    pub fn characteristic(&self) -> u32 {
        self.field().characteristic()
    }

    /// The jet family parametrizing `T_r`.
    pub fn regime(&self, r: u32) -> Result<Regime> {
        match (r, self.d) {
            (0, _) => Err(Error::domain("r must be at least 1")),
            (1, 1) => Ok(Regime::Transversal),
            _ => Ok(Regime::Tangent { r }),
        }
    }

    /// `rm + n`, the depth of the pole of `a` restricted to a curve in `T_r`.
    pub fn pole_depth(&self, r: u32) -> u32 {
        r * self.m + self.n
    }

    /// Jet length needed to restrict: `m` (transversal) or `rm + n` (tangent).
    pub fn required_jet_len(&self, r: u32) -> Result<usize> {
        Ok(match self.regime(r)? {
            Regime::Transversal => self.m as usize,
            Regime::Tangent { r } => self.pole_depth(r) as usize,
        })
    }

    pub fn jet_space(&self, r: u32) -> Result<JetSpace> {
        JetSpace::new(self.field(), self.regime(r)?, self.required_jet_len(r)?)
    }

    pub fn theta(&self, r: u32) -> Result<ThetaMatrix> {
        if r == 0 {
            return Err(Error::domain("r must be at least 1"));
        }
        let (m, n) = (self.m as i64, self.n as i64);
        let rows = (m + n) as usize;
        let cols = (r as i64 * m + n) as usize;
        let mut values = Vec::with_capacity(rows * cols);
        for i in 0..rows as i64 {
            for j in 0..cols as i64 {
                values.push(self.a.coeff(i - m, j - n).map_err(|_| {
                    Error::precision(format!(
                        "theta_{{{i},{j}}} for r={r} needs T^{} U^{}, outside the certified range",
                        i - m,
                        j - n
                    ))
                })?);
            }
        }
        Ok(ThetaMatrix {
            r,
            rows,
            cols,
            values,
        })
    }

    /// The image of `a` in the completed local ring of the curve, as a
    /// Laurent series in the curve's parameter, certified through all
    /// negative exponents.
    pub fn restrict(&self, jet: &CurveJet) -> Result<LaurentSeries> {
        let f = self.field();
        let r = jet.regime().first_exponent();
        let regime = self.regime(r)?;
        if jet.regime() != regime {
            return Err(Error::domain(format!(
                "jet family {:?} does not parametrize T_{r} for a cover with d={}",
                jet.regime(),
                self.d
            )));
        }
        let need = self.required_jet_len(r)?;
        if jet.len() < need {
            return Err(Error::ShortJet {
                need,
                got: jet.len(),
            });
        }
        let curve = jet.curve_series(f)?;
        let (m, n) = (self.m as i64, self.n as i64);
        let (pt, pu) = (self.a.prec_t(), self.a.prec_u());
        let mut acc = match regime {
            Regime::Tangent { r } => {
                // T -> t(u), U -> u; rows of fixed U-degree are series in T
                let r = r as i64;
                let cap = (r * pt - n).min(pu - r * m);
                let mut acc = LaurentSeries::zero(f, cap);
                for j in self.row_indices_u() {
                    let row = self.a.row_u(j)?;
                    acc = acc.add(&row.substitute(&curve)?.shift(j))?;
                }
                acc
            }
            Regime::Transversal => {
                // U -> u(t); rows of fixed T-degree are series in U
                let cap = pt.min(pu - m);
                let mut acc = LaurentSeries::zero(f, cap);
                for i in self.row_indices_t() {
                    let row = self.a.row_t(i)?;
                    acc = acc.add(&row.substitute(&curve)?.shift(i))?;
                }
                acc
            }
        };
        if acc.prec() < 0 {
            return Err(Error::precision(format!(
                "restriction known only mod {}^{}; the cover's certified range is too small for this curve",
                if r == 1 && self.d == 1 { "t" } else { "u" },
                acc.prec()
            )));
        }
        acc = acc.truncate(acc.prec());
        Ok(acc)
    }

    fn row_indices_u(&self) -> Vec<i64> {
        let mut js: Vec<i64> = self.a.terms().map(|(_, j, _)| j).collect();
        js.sort_unstable();
        js.dedup();
        js
    }

    fn row_indices_t(&self) -> Vec<i64> {
        let mut is: Vec<i64> = self.a.terms().map(|(i, _, _)| i).collect();
        is.dedup();
        is
    }

    /// `h_p(L/K)` along the curve given by `jet`.
    pub fn jump(&self, jet: &CurveJet) -> Result<JumpReport> {
        let reduced = as_reduce(&self.restrict(jet)?)?;
        Ok(JumpReport {
            h: reduced.jump(),
            reduced,
            jet: jet.clone(),
        })
    }

    /// Jumps of every jet in `space`, in index order.
    pub fn jump_table(&self, space: &JetSpace, cap: u128) -> Result<Vec<u32>> {
        let size = space.check_cap(cap)?;
        (0..size)
            .into_par_iter()
            .map(|i| Ok(self.jump(&space.jet_at(i))?.h))
            .collect()
    }
}

fn validate(a: &BivariateLaurent, d: u8) -> Result<()> {
    if d != 1 && d != 2 {
        return Err(Error::domain(format!(
            "number of branch components must be 1 or 2, got {d}"
        )));
    }
    if d == 1 && a.terms().any(|(_, j, _)| j < 0) {
        return Err(Error::domain("a cover with d=1 cannot have poles along U=0"));
    }
    Ok(())
}

/// Whether every certified coefficient sits at an exponent divisible by `p`.
fn is_pth_power(s: &LaurentSeries) -> Result<bool> {
    let p = s.field().characteristic() as i64;
    if s.prec() - s.val() < p {
        return Err(Error::precision(format!(
            "row known only on exponents {}..{}, cannot decide whether it is a p-th power",
            s.val(),
            s.prec()
        )));
    }
    Ok(s.terms().all(|(e, _)| e % p == 0))
}
