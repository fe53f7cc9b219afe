//! Polynomial description of the loci `{h <= s}` in jet space.
//!
//! Restricting `a` to a curve of `T_r` gives `beta_r^{-m} u^{-L} sum_i F_i u^i`
//! modulo `k[[u]]`, where `L = rm + n` (`t^{-m} sum_i F_i t^i` with `L = m`
//! for transversal curves) and the `F_i` are polynomials in the normalized
//! jet coordinates. Reducing modulo `d^p - d` collects the coefficients at
//! `u^{-p^nu l}` into
//!
//! `G_l = sum_nu (beta_r^{-m} F_{L - p^nu l})^{p^{-nu}}`,
//!
//! and the jump is the largest `l` (prime to `p`) with `G_l != 0`. Each
//! `G_l^{p^{N_l}}` becomes a polynomial `S_l` in the raw coefficients after
//! clearing a power of `X_0 = beta_r`.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;

use crate::cover::{CoverSpec, CurveJet, JetSpace, Regime, ThetaMatrix};
use crate::error::{Error, Result};
use crate::ffield::{Field, FieldElement};

/// A polynomial in `X_0, ..., X_{V-1}` over a finite field.
#[derive(Clone, PartialEq, Eq)]
pub struct MultiPoly {
    field: Field,
    nvars: usize,
    terms: BTreeMap<Vec<u32>, FieldElement>,
}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MultiPoly[{}]{{{}}}", self.nvars, self.to_text().trim_end())
    }
}

impl MultiPoly {
    /// Builds a polynomial from `(exponents, coefficient)` pairs; repeated
    /// exponent vectors are summed.
    pub fn new(
        field: &Field,
        nvars: usize,
        terms: impl IntoIterator<Item = (Vec<u32>, FieldElement)>,
    ) -> Result<Self> {
        let mut p = Self::zero(field, nvars);
        for (e, c) in terms {
            if e.len() != nvars {
                return Err(Error::domain(format!(
                    "exponent vector of length {} in a polynomial with {nvars} variables",
                    e.len()
                )));
            }
            if !field.contains(c) {
                return Err(Error::ForeignElement(c.index()));
            }
            p.bump(e, c);
        }
        Ok(p)
    }

    pub fn zero(field: &Field, nvars: usize) -> Self {
        Self {
            field: field.clone(),
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(field: &Field, nvars: usize, c: FieldElement) -> Self {
        let mut p = Self::zero(field, nvars);
        p.bump(vec![0; nvars], c);
        p
    }

    /// `X_k`.
    pub fn var(field: &Field, nvars: usize, k: usize) -> Self {
        assert!(k < nvars, "variable index out of range");
        let mut e = vec![0; nvars];
        e[k] = 1;
        let mut p = Self::zero(field, nvars);
        p.bump(e, field.one());
        p
    }

    fn bump(&mut self, e: Vec<u32>, c: FieldElement) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                let sum = self.field.add(*o.get(), c);
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in lexicographic order of exponent vectors.
    pub fn terms(&self) -> impl Iterator<Item = (&[u32], FieldElement)> + '_ {
        self.terms.iter().map(|(e, &c)| (e.as_slice(), c))
    }

    pub fn coeff(&self, e: &[u32]) -> FieldElement {
        self.terms.get(e).copied().unwrap_or_default()
    }

    /// Highest variable index that occurs, if any.
    pub fn max_var(&self) -> Option<usize> {
        self.terms
            .keys()
            .filter_map(|e| e.iter().rposition(|&k| k > 0))
            .max()
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.field != other.field {
            return Err(Error::MixedFields);
        }
        if self.nvars != other.nvars {
            return Err(Error::domain(format!(
                "polynomials in {} and {} variables",
                self.nvars, other.nvars
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = self.clone();
        for (e, &c) in &other.terms {
            out.bump(e.clone(), c);
        }
        Ok(out)
    }

    pub fn neg(&self) -> Self {
        Self {
            field: self.field.clone(),
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(e, &c)| (e.clone(), self.field.neg(c)))
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: FieldElement) -> Self {
        if c.is_zero() {
            return Self::zero(&self.field, self.nvars);
        }
        Self {
            field: self.field.clone(),
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(e, &x)| (e.clone(), self.field.mul(x, c)))
                .collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut acc: BTreeMap<Vec<u32>, FieldElement> = BTreeMap::new();
        for (e1, &c1) in &self.terms {
            for (e2, &c2) in &other.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                let slot = acc.entry(e).or_insert(FieldElement::ZERO);
                *slot = self.field.add(*slot, self.field.mul(c1, c2));
            }
        }
        acc.retain(|_, c| !c.is_zero());
        Ok(Self {
            field: self.field.clone(),
            nvars: self.nvars,
            terms: acc,
        })
    }

    pub fn pow(&self, mut k: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::constant(&self.field, self.nvars, self.field.one());
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base).expect("same ring");
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base).expect("same ring");
            }
        }
        acc
    }

    /// `self^{p^k}`: coefficients to the `p^k`, exponents times `p^k`.
    pub fn frobenius(&self, k: u32) -> Self {
        let q = self.field.characteristic().pow(k);
        Self {
            field: self.field.clone(),
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(e, &c)| {
                    (
                        e.iter().map(|&x| x * q).collect(),
                        self.field.frobenius(c, k),
                    )
                })
                .collect(),
        }
    }

    pub fn eval(&self, point: &[FieldElement]) -> Result<FieldElement> {
        if point.len() != self.nvars {
            return Err(Error::domain(format!(
                "evaluating a polynomial in {} variables at a point of length {}",
                self.nvars,
                point.len()
            )));
        }
        if let Some(c) = point.iter().find(|&&c| !self.field.contains(c)) {
            return Err(Error::ForeignElement(c.index()));
        }
        let f = &self.field;
        let mut acc = FieldElement::ZERO;
        for (e, &c) in &self.terms {
            let mut t = c;
            for (&x, &k) in point.iter().zip(e) {
                if k > 0 {
                    t = f.mul(t, f.pow(x, k as u64));
                }
            }
            acc = f.add(acc, t);
        }
        Ok(acc)
    }

    /// One line per term: `c : e_0 e_1 ... e_{V-1}`.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (e, &c) in &self.terms {
            out.push_str(&self.field.format_element(c));
            out.push_str(" :");
            for k in e {
                out.push(' ');
                out.push_str(&k.to_string());
            }
            out.push('\n');
        }
        out
    }

    pub fn from_text(field: &Field, nvars: usize, text: &str) -> Result<Self> {
        let mut terms = Vec::new();
        for line in text.lines().map(str::trim).filter(|l| !l.is_empty()) {
            let (c, e) = line
                .split_once(':')
                .ok_or_else(|| Error::domain(format!("malformed term line '{line}'")))?;
            let c = field.parse_element(c.trim())?;
            let e = e
                .split_whitespace()
                .map(|k| {
                    k.parse::<u32>()
                        .map_err(|_| Error::domain(format!("bad exponent '{k}'")))
                })
                .collect::<Result<Vec<_>>>()?;
            terms.push((e, c));
        }
        Self::new(field, nvars, terms)
    }
}

/// Truncated power series in `tau` with polynomial coefficients.
type TauSeries = Vec<MultiPoly>;

fn tau_mul(a: &TauSeries, b: &TauSeries, len: usize) -> Result<TauSeries> {
    let f = a[0].field();
    let nvars = a[0].nvars();
    let mut out = vec![MultiPoly::zero(f, nvars); len];
    for (i, x) in a.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
        for (j, y) in b.iter().enumerate().take(len - i.min(len)) {
            if i + j < len && !y.is_zero() {
                out[i + j] = out[i + j].add(&x.mul(y)?)?;
            }
        }
    }
    Ok(out)
}

/// `C(n, k) mod p` via Lucas, for `n >= 0`.
fn binom_mod_p(mut n: u64, mut k: u64, p: u64) -> u64 {
    let mut acc = 1;
    while k > 0 {
        let (ni, ki) = (n % p, k % p);
        if ki > ni {
            return 0;
        }
        // small binomial by direct product; ni < p
        let mut c = 1u64;
        for t in 0..ki {
            c = c * (ni - t) / (t + 1);
        }
        acc = acc * (c % p) % p;
        n /= p;
        k /= p;
    }
    acc
}

/// Generalized binomial `C(e, k)` in the prime field, `e` of either sign.
fn binom_signed(f: &Field, e: i64, k: u64) -> FieldElement {
    let p = f.characteristic() as u64;
    if e >= 0 {
        f.from_int(binom_mod_p(e as u64, k, p) as i64)
    } else {
        // C(-a, k) = (-1)^k C(a + k - 1, k)
        let c = binom_mod_p((-e) as u64 + k - 1, k, p) as i64;
        f.from_int(if k.is_multiple_of(2) { c } else { -c })
    }
}

/// `F_0, ..., F_{L-1}` for the jet family of `r`.
///
/// Tangent: `sum theta_ij X_0^i tau^{ri+j} (1 + sum_nu X_nu tau^nu)^{i-m}`
/// mod `tau^{rm+n}`. Transversal: `sum theta_ij tau^{i+j} (X_1 + X_2 tau +
/// ...)^j` mod `tau^m`. Variable slot `k` holds `X_k`; slot 0 is unused in
/// the transversal family.
pub fn compute_f(theta: &ThetaMatrix, cover: &CoverSpec, r: u32) -> Result<Vec<MultiPoly>> {
    if theta.r() != r {
        return Err(Error::domain(format!(
            "theta extracted for r={} used with r={r}",
            theta.r()
        )));
    }
    let f = cover.field();
    let m = cover.m() as usize;
    let regime = cover.regime(r)?;
    let len = match regime {
        Regime::Transversal => m,
        Regime::Tangent { .. } => cover.pole_depth(r) as usize,
    };
    let nvars = len;
    let zero = MultiPoly::zero(f, nvars);
    let one = MultiPoly::constant(f, nvars, f.one());
    let mut out = vec![zero.clone(); len];
    match regime {
        Regime::Tangent { r } => {
            let r = r as usize;
            // powers of S = sum_{nu >= 1} X_nu tau^nu
            let mut s = vec![zero.clone(); len];
            for (nu, slot) in s.iter_mut().enumerate().skip(1) {
                *slot = MultiPoly::var(f, nvars, nu);
            }
            let mut s_pows: Vec<TauSeries> = Vec::with_capacity(len);
            let mut cur = vec![zero.clone(); len];
            cur[0] = one.clone();
            for _ in 0..len {
                s_pows.push(cur.clone());
                cur = tau_mul(&cur, &s, len)?;
            }
            let x0 = MultiPoly::var(f, nvars, 0);
            for i in 0..theta.rows() {
                for j in 0..theta.cols() {
                    let th = theta.get(i, j);
                    let shift = r * i + j;
                    if th.is_zero() || shift >= len {
                        continue;
                    }
                    let lead = x0.pow(i as u64).scale(th);
                    let e = i as i64 - m as i64;
                    for (k, sk) in s_pows.iter().enumerate().take(len - shift) {
                        let b = binom_signed(f, e, k as u64);
                        if b.is_zero() {
                            continue;
                        }
                        let lead_b = lead.scale(b);
                        for (t, c) in sk.iter().enumerate().take(len - shift) {
                            if !c.is_zero() {
                                out[shift + t] = out[shift + t].add(&lead_b.mul(c)?)?;
                            }
                        }
                    }
                }
            }
        }
        Regime::Transversal => {
            // B = X_1 + X_2 tau + ...; X_nu only matters below tau^m
            let mut b = vec![zero.clone(); len];
            for nu in 1..len {
                b[nu - 1] = MultiPoly::var(f, nvars, nu);
            }
            let mut b_pow = vec![zero.clone(); len];
            b_pow[0] = one.clone();
            for j in 0..theta.cols().min(len) {
                for i in 0..theta.rows() {
                    let th = theta.get(i, j);
                    if th.is_zero() || i + j >= len {
                        continue;
                    }
                    for (t, c) in b_pow.iter().enumerate().take(len - i - j) {
                        out[i + j + t] = out[i + j + t].add(&c.scale(th))?;
                    }
                }
                b_pow = tau_mul(&b_pow, &b, len)?;
            }
        }
    }
    for (i, fi) in out.iter().enumerate() {
        if fi.max_var().is_some_and(|v| v > i) {
            return Err(Error::Verification(format!(
                "F_{i} involves X_{}",
                fi.max_var().unwrap_or(0)
            )));
        }
    }
    Ok(out)
}

/// `F_i` for one jet family, with the index bookkeeping for `G_l`.
#[derive(Clone, Debug)]
pub struct StrataSystem {
    field: Field,
    regime: Regime,
    r: u32,
    m: u32,
    n: u32,
    f: Vec<MultiPoly>,
}

impl StrataSystem {
    pub fn new(cover: &CoverSpec, r: u32) -> Result<Self> {
        let theta = cover.theta(r)?;
        let f = compute_f(&theta, cover, r)?;
        Ok(Self {
            field: cover.field().clone(),
            regime: cover.regime(r)?,
            r,
            m: cover.m(),
            n: cover.n(),
            f,
        })
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn regime(&self) -> Regime {
        self.regime
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// `L`: `rm + n`, or `m` for the transversal family.
    pub fn depth(&self) -> u32 {
        self.f.len() as u32
    }

    pub fn f(&self) -> &[MultiPoly] {
        &self.f
    }

    /// The admissible `l`: `1 <= l <= L`, `p` not dividing `l`.
    pub fn levels(&self) -> Vec<u32> {
        let p = self.field.characteristic();
        (1..=self.depth()).filter(|l| l % p != 0).collect()
    }

    /// `i(nu) = L - p^nu l` for `nu = 0..=N_l`.
    pub fn indices(&self, l: u32) -> Vec<usize> {
        let p = self.field.characteristic() as u64;
        let depth = self.depth() as u64;
        let mut out = Vec::new();
        let mut step = l as u64;
        while step <= depth {
            out.push((depth - step) as usize);
            step *= p;
        }
        out
    }

    /// `N_l = max{nu : L - p^nu l >= 0}`.
    pub fn n_l(&self, l: u32) -> u32 {
        self.indices(l).len() as u32 - 1
    }

    /// Shortest jet accepted by [`eval_g`].
    pub fn min_jet_len(&self) -> usize {
        match self.regime {
            Regime::Transversal => self.depth().saturating_sub(1) as usize,
            Regime::Tangent { .. } => self.depth() as usize,
        }
    }

    fn check_jet(&self, jet: &CurveJet) -> Result<()> {
        if jet.regime() != self.regime {
            return Err(Error::domain(format!(
                "jet of family {:?} evaluated on a system for {:?}",
                jet.regime(),
                self.regime
            )));
        }
        jet.check_field(&self.field)?;
        if jet.len() < self.min_jet_len() {
            return Err(Error::ShortJet {
                need: self.min_jet_len(),
                got: jet.len(),
            });
        }
        if let Regime::Tangent { .. } = self.regime {
            if jet.coeffs()[0].is_zero() {
                return Err(Error::ZeroLeadingCoefficient);
            }
        }
        Ok(())
    }

    /// Point at which the `F_i` are evaluated: `(beta_r, beta_{r+1}/beta_r,
    /// ...)`, or `(0, alpha_1, ..., alpha_{m-1})`.
    fn normalized_point(&self, jet: &CurveJet) -> Result<Vec<FieldElement>> {
        let len = self.depth() as usize;
        let c = jet.coeffs();
        Ok(match self.regime {
            Regime::Tangent { .. } => {
                let b0 = c[0];
                let mut pt = Vec::with_capacity(len);
                pt.push(b0);
                for &b in &c[1..len] {
                    pt.push(self.field.div(b, b0)?);
                }
                pt
            }
            Regime::Transversal => {
                let mut pt = vec![FieldElement::ZERO; len];
                pt[1..len].copy_from_slice(&c[..len.saturating_sub(1)]);
                pt
            }
        })
    }

    /// Point at which the cleared `S_l` are evaluated: the raw jet
    /// coefficients `(beta_r, ..., beta_{r+L-1})`, or `(0, alpha_1, ...)`.
    fn raw_point(&self, jet: &CurveJet) -> Vec<FieldElement> {
        let len = self.depth() as usize;
        let c = jet.coeffs();
        match self.regime {
            Regime::Tangent { .. } => c[..len].to_vec(),
            Regime::Transversal => {
                let mut pt = vec![FieldElement::ZERO; len];
                pt[1..len].copy_from_slice(&c[..len.saturating_sub(1)]);
                pt
            }
        }
    }
}

/// `G_l` at `jet` for every admissible `l`.
pub fn eval_g(system: &StrataSystem, jet: &CurveJet) -> Result<BTreeMap<u32, FieldElement>> {
    system.check_jet(jet)?;
    let f = &system.field;
    let pt = system.normalized_point(jet)?;
    let scale = match system.regime {
        Regime::Tangent { .. } => f.powi(pt[0], -(system.m as i64))?,
        Regime::Transversal => f.one(),
    };
    let values: Vec<FieldElement> = system
        .f
        .iter()
        .map(|fi| Ok(f.mul(scale, fi.eval(&pt)?)))
        .collect::<Result<_>>()?;
    Ok(system
        .levels()
        .into_iter()
        .map(|l| {
            let g = system
                .indices(l)
                .into_iter()
                .enumerate()
                .fold(FieldElement::ZERO, |acc, (nu, i)| {
                    f.add(acc, f.pth_root_iter(values[i], nu as u32))
                });
            (l, g)
        })
        .collect())
}

/// Largest `l` with `G_l != 0`, or 0.
pub fn top_level(g: &BTreeMap<u32, FieldElement>) -> u32 {
    g.iter()
        .rev()
        .find(|(_, c)| !c.is_zero())
        .map(|(&l, _)| l)
        .unwrap_or(0)
}

/// `S_l = X_0^N sum_nu (X_0^{-m} F_{i(nu)}(X_0, X_1/X_0, ...))^{p^{N_l - nu}}`
/// with `N` minimal, or `sum_nu F_{i(nu)}^{p^{N_l - nu}}` for transversal
/// jets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClearedPoly {
    pub l: u32,
    pub n_l: u32,
    /// Power of `X_0` used to clear denominators.
    pub clearing: u32,
    pub poly: MultiPoly,
}

/// Cleared polynomials for `s + 1 <= l <= L`, `p` not dividing `l`.
pub fn clear_strata_polys(system: &StrataSystem, s: u32) -> Result<Vec<ClearedPoly>> {
    if s >= system.depth().max(1) {
        return Err(Error::domain(format!(
            "s must lie in 0..{}, got {s}",
            system.depth()
        )));
    }
    let f = &system.field;
    let nvars = system.depth() as usize;
    let m = system.m as i64;
    let mut out = Vec::new();
    for l in system.levels().into_iter().filter(|&l| l > s) {
        let n_l = system.n_l(l);
        let idx = system.indices(l);
        let (clearing, poly) = match system.regime {
            Regime::Transversal => {
                let mut acc = MultiPoly::zero(f, nvars);
                for (nu, &i) in idx.iter().enumerate() {
                    acc = acc.add(&system.f[i].frobenius(n_l - nu as u32))?;
                }
                (0, acc)
            }
            Regime::Tangent { .. } => {
                // keys: X_0 exponent (possibly negative), then the rest
                let mut acc: BTreeMap<(i64, Vec<u32>), FieldElement> = BTreeMap::new();
                for (nu, &i) in idx.iter().enumerate() {
                    let k = n_l - nu as u32;
                    let q = (f.characteristic() as i64).pow(k);
                    for (e, c) in system.f[i].terms() {
                        let moved: i64 = e[1..].iter().map(|&x| x as i64).sum();
                        let x0 = (e[0] as i64 - moved - m) * q;
                        let rest: Vec<u32> = e[1..].iter().map(|&x| x * q as u32).collect();
                        let slot = acc.entry((x0, rest)).or_insert(FieldElement::ZERO);
                        *slot = f.add(*slot, f.frobenius(c, k));
                    }
                }
                acc.retain(|_, c| !c.is_zero());
                let low = acc.keys().map(|(x0, _)| *x0).min().unwrap_or(0);
                let clearing = (-low).max(0);
                let terms = acc.into_iter().map(|((x0, rest), c)| {
                    let mut e = Vec::with_capacity(nvars);
                    e.push((x0 + clearing) as u32);
                    e.extend(rest);
                    (e, c)
                });
                (clearing as u32, MultiPoly::new(f, nvars, terms)?)
            }
        };
        out.push(ClearedPoly {
            l,
            n_l,
            clearing,
            poly,
        });
    }
    Ok(out)
}

/// Whether every `S_l` in `cleared` vanishes at `jet`.
pub fn cleared_vanish(system: &StrataSystem, cleared: &[ClearedPoly], jet: &CurveJet) -> Result<bool> {
    Ok(cleared_top_level(system, cleared, jet)? == 0)
}

/// Largest `l` with `S_l(jet) != 0`, or 0.
pub fn cleared_top_level(
    system: &StrataSystem,
    cleared: &[ClearedPoly],
    jet: &CurveJet,
) -> Result<u32> {
    system.check_jet(jet)?;
    let pt = system.raw_point(jet);
    for c in cleared.iter().rev() {
        if !c.poly.eval(&pt)?.is_zero() {
            return Ok(c.l);
        }
    }
    Ok(0)
}

/// Whether the curve lies in the stratum `{h <= s}`, read off from `G_l`.
pub fn stratum_contains(system: &StrataSystem, s: u32, jet: &CurveJet) -> Result<bool> {
    Ok(eval_g(system, jet)?
        .into_iter()
        .all(|(l, g)| l <= s || g.is_zero()))
}

/// Membership counts of one stratum under the three descriptions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StratumCheck {
    pub s: u32,
    /// Jets with `jump <= s`.
    pub by_jump: u64,
    /// Jets where every cleared `S_l`, `l > s`, vanishes.
    pub by_cleared: u64,
    /// Jets accepted by [`stratum_contains`].
    pub by_contains: u64,
    /// Jets on which the three descriptions disagree.
    pub mismatches: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SemicontinuityReport {
    pub r: u32,
    pub jets: u64,
    /// Number of jets with each jump value.
    pub jump_counts: BTreeMap<u32, u64>,
    pub strata: Vec<StratumCheck>,
    /// Whether `stratum(s)` is contained in `stratum(s+1)` for every `s`.
    pub nested: bool,
    /// First jet where the descriptions disagree, if any.
    pub counterexample: Option<CurveJet>,
}

impl SemicontinuityReport {
    pub fn is_consistent(&self) -> bool {
        self.nested && self.counterexample.is_none()
    }
}

/// Per-jet values from the three computations.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct JetLevels {
    /// `h` from restriction and local reduction.
    pub jump: u32,
    /// Largest `l` with `G_l != 0`.
    pub g: u32,
    /// Largest `l` with `S_l != 0`.
    pub cleared: u32,
    /// Least `s` accepted by [`stratum_contains`].
    pub threshold: u32,
}

/// The three jump levels of every jet in `space`, in index order.
pub fn level_table(
    cover: &CoverSpec,
    system: &StrataSystem,
    space: &JetSpace,
    cap: u128,
) -> Result<Vec<JetLevels>> {
    let size = space.check_cap(cap)?;
    let cleared = clear_strata_polys(system, 0)?;
    let depth = system.depth();
    (0..size)
        .into_par_iter()
        .map(|idx| {
            let jet = space.jet_at(idx);
            let jump = cover.jump(&jet)?.h;
            let g = eval_g(system, &jet)?;
            let cleared = cleared_top_level(system, &cleared, &jet)?;
            let mut threshold = depth;
            while threshold > 0 && stratum_contains(system, threshold - 1, &jet)? {
                threshold -= 1;
            }
            Ok(JetLevels {
                jump,
                g: top_level(&g),
                cleared,
                threshold,
            })
        })
        .collect()
}

/// Checks `{h <= s} = {S_l = 0, l > s} = stratum(s)` for every `s` over all
/// jets rational over the cover's field.
pub fn verify_semicontinuity(cover: &CoverSpec, r: u32, cap: u128) -> Result<SemicontinuityReport> {
    let system = StrataSystem::new(cover, r)?;
    let space = cover.jet_space(r)?;
    let table = level_table(cover, &system, &space, cap)?;
    let depth = system.depth();
    let mut jump_counts = BTreeMap::new();
    for t in &table {
        *jump_counts.entry(t.jump).or_insert(0) += 1;
    }
    let mut strata = Vec::new();
    let mut nested = true;
    let mut prev: Option<Vec<bool>> = None;
    for s in 0..=depth {
        let mut check = StratumCheck {
            s,
            by_jump: 0,
            by_cleared: 0,
            by_contains: 0,
            mismatches: 0,
        };
        let mut members = Vec::with_capacity(table.len());
        for t in &table {
            let a = t.jump <= s;
            let b = t.cleared <= s;
            let c = t.threshold <= s;
            check.by_jump += a as u64;
            check.by_cleared += b as u64;
            check.by_contains += c as u64;
            check.mismatches += (a != b || a != c) as u64;
            members.push(c);
        }
        if let Some(prev) = &prev {
            nested &= prev.iter().zip(&members).all(|(&x, &y)| !x || y);
        }
        prev = Some(members);
        strata.push(check);
    }
    let counterexample = table
        .iter()
        .position(|t| t.jump != t.cleared || t.jump != t.threshold)
        .map(|i| space.jet_at(i as u64));
    Ok(SemicontinuityReport {
        r,
        jets: table.len() as u64,
        jump_counts,
        strata,
        nested,
        counterexample,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::BivariateLaurent;

    fn f4() -> Field {
        Field::new(2, 2, Some(&[1, 1, 1])).unwrap()
    }

    fn cover(f: &Field, terms: &[(i64, i64, FieldElement)], d: u8) -> CoverSpec {
        let a = BivariateLaurent::new(f, terms.iter().copied(), 20, 20).unwrap();
        CoverSpec::normalize(a, d).unwrap()
    }

    #[test]
    fn frobenius_of_sum() {
        let f = Field::prime(2).unwrap();
        let x = MultiPoly::var(&f, 2, 0).add(&MultiPoly::var(&f, 2, 1)).unwrap();
        let sq = x.pow(2);
        let expected = MultiPoly::var(&f, 2, 0)
            .pow(2)
            .add(&MultiPoly::var(&f, 2, 1).pow(2))
            .unwrap();
        assert_eq!(sq, expected);
        assert_eq!(x.frobenius(1), expected);
    }

    #[test]
    fn product_with_zero() {
        let f = f4();
        let x = MultiPoly::var(&f, 3, 1);
        assert!(x.mul(&MultiPoly::zero(&f, 3)).unwrap().is_zero());
    }

    #[test]
    fn coefficient_frobenius() {
        let f = f4();
        let g = f.generator();
        let p = MultiPoly::var(&f, 2, 1).scale(g).frobenius(1);
        assert_eq!(p.num_terms(), 1);
        assert_eq!(p.coeff(&[0, 2]), f.mul(g, g));
    }

    #[test]
    fn text_round_trip() {
        let f = f4();
        let g = f.generator();
        let p = MultiPoly::new(&f, 3, [(vec![1, 0, 2], g), (vec![0, 0, 0], f.one())]).unwrap();
        let text = p.to_text();
        assert_eq!(MultiPoly::from_text(&f, 3, &text).unwrap(), p);
    }

    #[test]
    fn lucas_binomials() {
        assert_eq!(binom_mod_p(4, 2, 2), 0);
        assert_eq!(binom_mod_p(5, 1, 2), 1);
        assert_eq!(binom_mod_p(6, 3, 3), 2);
        let f = Field::prime(5).unwrap();
        // C(-1, k) = (-1)^k
        assert_eq!(binom_signed(&f, -1, 3), f.from_int(-1));
        // C(-2, 2) = 3
        assert_eq!(binom_signed(&f, -2, 2), f.from_int(3));
    }

    #[test]
    fn f0_is_theta00() {
        let f = f4();
        let g = f.generator();
        let c = cover(&f, &[(-1, 0, g), (-1, 2, f.one())], 1);
        for r in 1..4 {
            let s = StrataSystem::new(&c, r).unwrap();
            assert_eq!(s.f()[0], MultiPoly::constant(&f, s.depth() as usize, g));
        }
    }

    #[test]
    fn all_zero_theta_gives_zero_f() {
        let f = f4();
        let c = cover(&f, &[(-1, 0, f.one())], 1);
        let th = c.theta(2).unwrap();
        let zero = ThetaMatrix::new(2, th.rows(), th.cols(), vec![f.zero(); th.rows() * th.cols()])
            .unwrap();
        let fs = compute_f(&zero, &c, 2).unwrap();
        assert!(fs.iter().all(MultiPoly::is_zero));
    }

    #[test]
    fn simple_pole_transversal() {
        let f = f4();
        let c = cover(&f, &[(-1, 0, f.one())], 1);
        let s = StrataSystem::new(&c, 1).unwrap();
        let jet = CurveJet::transversal(vec![f.generator()]);
        let g = eval_g(&s, &jet).unwrap();
        assert_eq!(g.into_iter().collect::<Vec<_>>(), vec![(1, f.one())]);
        assert!(!stratum_contains(&s, 0, &jet).unwrap());
        assert!(stratum_contains(&s, 1, &jet).unwrap());
    }

    #[test]
    fn g_matches_jump_for_random_jets() {
        use rand::SeedableRng;
        let f = f4();
        let c = cover(&f, &[(-1, 0, f.one()), (-1, 1, f.one())], 1);
        let s = StrataSystem::new(&c, 2).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let mut betas: Vec<_> = (0..2).map(|_| f.random_element(&mut rng)).collect();
            betas[0] = f.random_nonzero(&mut rng);
            let jet = CurveJet::tangent(2, betas).unwrap();
            let h = c.jump(&jet).unwrap().h;
            assert_eq!(top_level(&eval_g(&s, &jet).unwrap()), h, "{jet:?}");
        }
    }

    #[test]
    fn semicontinuity_simple_pole() {
        let f = f4();
        let c = cover(&f, &[(-1, 0, f.one())], 1);
        let rep = verify_semicontinuity(&c, 1, 1 << 20).unwrap();
        assert!(rep.is_consistent());
        assert_eq!(rep.strata[0].by_jump, 0);
        assert_eq!(rep.strata[1].by_jump, rep.jets);
    }

    #[test]
    fn semicontinuity_m2_r2() {
        let f = f4();
        let g = f.generator();
        let c = cover(&f, &[(-2, 1, f.one()), (-1, 0, g)], 1);
        assert_eq!(c.m(), 2);
        let rep = verify_semicontinuity(&c, 2, 1 << 20).unwrap();
        assert!(rep.is_consistent(), "{rep:?}");
        assert_eq!(rep.jump_counts.values().sum::<u64>(), rep.jets);
    }

    #[test]
    fn cleared_matches_g_on_tangent_points() {
        let f = f4();
        let g = f.generator();
        let c = cover(&f, &[(-1, -1, f.one()), (0, -1, g)], 2);
        let sys = StrataSystem::new(&c, 2).unwrap();
        let cleared = clear_strata_polys(&sys, 0).unwrap();
        let space = c.jet_space(2).unwrap();
        for jet in space.iter() {
            let gv = eval_g(&sys, &jet).unwrap();
            let pt = sys.raw_point(&jet);
            for cp in &cleared {
                assert_eq!(cp.poly.eval(&pt).unwrap().is_zero(), gv[&cp.l].is_zero());
            }
        }
    }
}
