//! Finite fields `F_{p^e}` given by an irreducible modulus over `F_p`.
//!
//! Elements are small integers packing their coordinates in the modulus
//! basis, `c_0 + c_1 p + ... + c_{e-1} p^{e-1}`. Multiplication goes
//! through discrete log tables built once per field, so a [`Field`] is
//! cheap to clone and share but only supports orders up to
//! [`MAX_FIELD_ORDER`].
//!
//! [`FieldElement`] values carry no reference to their field; every
//! operation takes the field as context. The checked entry points
//! ([`Field::arith`], [`Field::from_coords`], [`Field::parse_element`])
//! reject values that cannot belong to the field.

use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Largest supported field order.
pub const MAX_FIELD_ORDER: u64 = 1 << 20;

/// An element of some [`Field`], stored as its packed coordinate vector.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FieldElement(u32);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);
    pub const ONE: FieldElement = FieldElement(1);

    /// The packed coordinate index; also the element's position in
    /// [`Field::elements`].
    pub fn index(self) -> u32 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

struct Inner {
    p: u32,
    e: u32,
    q: u32,
    modulus: Vec<u32>,
    exp: Vec<u32>,
    log: Vec<u32>,
}

/// The field `F_p[X]/(modulus)`.
#[derive(Clone)]
pub struct Field(Arc<Inner>);

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.p == other.0.p && self.0.modulus == other.0.modulus)
    }
}

impl Eq for Field {}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}^{} mod {:?}", self.0.p, self.0.e, self.0.modulus)
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.e == 1 {
            write!(f, "F_{}", self.0.p)
        } else {
            write!(f, "F_{}^{}", self.0.p, self.0.e)
        }
    }
}

impl Field {
    /// Builds `F_{p^e}`. Without a modulus one is drawn with seed 0, see
    /// [`Field::with_seed`]. A supplied modulus is a low-to-high coefficient
    /// list of length `e + 1` and must be monic and irreducible.
    pub fn new(p: u32, e: u32, modulus: Option<&[u32]>) -> Result<Self> {
        match modulus {
            Some(m) => {
                check_params(p, e)?;
                if m.len() != e as usize + 1 {
                    return Err(Error::InvalidField(format!(
                        "modulus must have {} coefficients, got {}",
                        e + 1,
                        m.len()
                    )));
                }
                if let Some(&c) = m.iter().find(|&&c| c >= p) {
                    return Err(Error::InvalidField(format!(
                        "modulus coefficient {c} is not reduced mod {p}"
                    )));
                }
                if m[e as usize] != 1 {
                    return Err(Error::InvalidField("modulus must be monic".into()));
                }
                if !is_irreducible(m, p) {
                    return Err(Error::ReducibleModulus);
                }
                Ok(Self::build(p, e, m.to_vec()))
            }
            None => Self::with_seed(p, e, 0),
        }
    }

    /// Builds `F_{p^e}` with a modulus found by seeded retry over random
    /// monic polynomials. For `e = 1` the modulus is always `X`.
    pub fn with_seed(p: u32, e: u32, seed: u64) -> Result<Self> {
        check_params(p, e)?;
        if e == 1 {
            return Ok(Self::build(p, 1, vec![0, 1]));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        loop {
            let mut m: Vec<u32> = (0..e).map(|_| rng.gen_range(0..p)).collect();
            m.push(1);
            if is_irreducible(&m, p) {
                return Ok(Self::build(p, e, m));
            }
        }
    }

    /// The prime field `F_p`.
    pub fn prime(p: u32) -> Result<Self> {
        Self::with_seed(p, 1, 0)
    }

    fn build(p: u32, e: u32, modulus: Vec<u32>) -> Self {
        let q = p.pow(e);
        let mut inner = Inner {
            p,
            e,
            q,
            modulus,
            exp: Vec::new(),
            log: Vec::new(),
        };
        let g = primitive_element(&inner);
        let n = (q - 1) as usize;
        let mut exp = vec![0u32; 2 * n];
        let mut log = vec![0u32; q as usize];
        let mut x = 1u32;
        for (k, slot) in exp.iter_mut().take(n).enumerate() {
            *slot = x;
            log[x as usize] = k as u32;
            x = slow_mul(&inner, x, g);
        }
        for k in n..2 * n {
            exp[k] = exp[k - n];
        }
        inner.exp = exp;
        inner.log = log;
        Field(Arc::new(inner))
    }

    pub fn characteristic(&self) -> u32 {
        self.0.p
    }

    pub fn degree(&self) -> u32 {
        self.0.e
    }

    pub fn order(&self) -> u32 {
        self.0.q
    }

    pub fn modulus(&self) -> &[u32] {
        &self.0.modulus
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement::ZERO
    }

    pub fn one(&self) -> FieldElement {
        FieldElement::ONE
    }

    /// The class of `k` in the prime subfield.
    pub fn from_int(&self, k: i64) -> FieldElement {
        FieldElement(k.rem_euclid(self.0.p as i64) as u32)
    }

    /// The generator `X mod modulus`; equals 0 when `e = 1` and the modulus is `X`.
    pub fn generator(&self) -> FieldElement {
        if self.0.e == 1 {
            FieldElement((self.0.p - self.0.modulus[0]) % self.0.p)
        } else {
            FieldElement(self.0.p)
        }
    }

    pub fn contains(&self, x: FieldElement) -> bool {
        x.0 < self.0.q
    }

    pub fn from_coords(&self, coords: &[u32]) -> Result<FieldElement> {
        if coords.len() != self.0.e as usize {
            return Err(Error::InvalidField(format!(
                "expected {} coordinates, got {}",
                self.0.e,
                coords.len()
            )));
        }
        let mut v = 0u32;
        for &c in coords.iter().rev() {
            if c >= self.0.p {
                return Err(Error::InvalidField(format!(
                    "coordinate {c} is not reduced mod {}",
                    self.0.p
                )));
            }
            v = v * self.0.p + c;
        }
        Ok(FieldElement(v))
    }

    pub fn coords(&self, x: FieldElement) -> Vec<u32> {
        let mut v = x.0;
        (0..self.0.e)
            .map(|_| {
                let c = v % self.0.p;
                v /= self.0.p;
                c
            })
            .collect()
    }

    pub fn add(&self, x: FieldElement, y: FieldElement) -> FieldElement {
        if self.0.p == 2 {
            return FieldElement(x.0 ^ y.0);
        }
        let p = self.0.p;
        let (mut a, mut b) = (x.0, y.0);
        let mut out = 0u32;
        let mut place = 1u32;
        while a > 0 || b > 0 {
            out += ((a % p + b % p) % p) * place;
            a /= p;
            b /= p;
            place *= p;
        }
        FieldElement(out)
    }

    pub fn neg(&self, x: FieldElement) -> FieldElement {
        if self.0.p == 2 {
            return x;
        }
        let p = self.0.p;
        let mut a = x.0;
        let mut out = 0u32;
        let mut place = 1u32;
        while a > 0 {
            out += ((p - a % p) % p) * place;
            a /= p;
            place *= p;
        }
        FieldElement(out)
    }

    pub fn sub(&self, x: FieldElement, y: FieldElement) -> FieldElement {
        self.add(x, self.neg(y))
    }

    pub fn mul(&self, x: FieldElement, y: FieldElement) -> FieldElement {
        if x.0 == 0 || y.0 == 0 {
            return FieldElement::ZERO;
        }
        let l = self.0.log[x.0 as usize] + self.0.log[y.0 as usize];
        FieldElement(self.0.exp[l as usize])
    }

    pub fn inv(&self, x: FieldElement) -> Result<FieldElement> {
        if x.0 == 0 {
            return Err(Error::DivisionByZero);
        }
        let n = self.0.q - 1;
        let l = (n - self.0.log[x.0 as usize]) % n;
        Ok(FieldElement(self.0.exp[l as usize]))
    }

    pub fn div(&self, x: FieldElement, y: FieldElement) -> Result<FieldElement> {
        Ok(self.mul(x, self.inv(y)?))
    }

    /// Checked binary operation: both operands must lie in this field.
    pub fn arith(&self, op: ArithOp, x: FieldElement, y: FieldElement) -> Result<FieldElement> {
        for v in [x, y] {
            if !self.contains(v) {
                return Err(Error::ForeignElement(v.0));
            }
        }
        Ok(match op {
            ArithOp::Add => self.add(x, y),
            ArithOp::Sub => self.sub(x, y),
            ArithOp::Mul => self.mul(x, y),
            ArithOp::Div => self.div(x, y)?,
        })
    }

    /// `x^k` for `k >= 0`, with `0^0 = 1`.
    pub fn pow(&self, x: FieldElement, k: u64) -> FieldElement {
        if k == 0 {
            return FieldElement::ONE;
        }
        if x.0 == 0 {
            return FieldElement::ZERO;
        }
        let n = (self.0.q - 1) as u64;
        let l = (self.0.log[x.0 as usize] as u64 * (k % n)) % n;
        FieldElement(self.0.exp[l as usize])
    }

    /// `x^k` for any integer `k`; negative powers of zero fail.
    pub fn powi(&self, x: FieldElement, k: i64) -> Result<FieldElement> {
        if k >= 0 {
            Ok(self.pow(x, k as u64))
        } else {
            Ok(self.pow(self.inv(x)?, k.unsigned_abs()))
        }
    }

    /// `x^{p^k}`.
    pub fn frobenius(&self, x: FieldElement, k: u32) -> FieldElement {
        if x.0 == 0 || k.is_multiple_of(self.0.e) {
            return x;
        }
        let n = (self.0.q - 1) as u64;
        let pk = mod_pow(self.0.p as u64, k as u64, n);
        let l = (self.0.log[x.0 as usize] as u64 * pk) % n;
        FieldElement(self.0.exp[l as usize])
    }

    /// The unique `y` with `y^p = x`.
    pub fn pth_root(&self, x: FieldElement) -> FieldElement {
        self.frobenius(x, self.0.e - 1)
    }

    /// `y` with `y^{p^k} = x`.
    pub fn pth_root_iter(&self, x: FieldElement, k: u32) -> FieldElement {
        let k = k % self.0.e;
        self.frobenius(x, (self.0.e - k) % self.0.e)
    }

    /// All elements in index order, i.e. lexicographic in
    /// `(c_{e-1}, ..., c_0)`.
    pub fn elements(&self) -> impl ExactSizeIterator<Item = FieldElement> + Clone {
        (0..self.0.q).map(FieldElement)
    }

    pub fn nonzero_elements(&self) -> impl ExactSizeIterator<Item = FieldElement> + Clone {
        (1..self.0.q).map(FieldElement)
    }

    pub fn element_at(&self, index: u32) -> Result<FieldElement> {
        if index < self.0.q {
            Ok(FieldElement(index))
        } else {
            Err(Error::ForeignElement(index))
        }
    }

    pub fn random_element<R: Rng + ?Sized>(&self, rng: &mut R) -> FieldElement {
        FieldElement(rng.gen_range(0..self.0.q))
    }

    pub fn random_nonzero<R: Rng + ?Sized>(&self, rng: &mut R) -> FieldElement {
        FieldElement(rng.gen_range(1..self.0.q))
    }

    /// A reproducible element drawn from `seed`.
    pub fn random(&self, seed: u64) -> FieldElement {
        self.random_element(&mut ChaCha8Rng::seed_from_u64(seed))
    }

    /// Comma-separated coordinates, low to high.
    pub fn format_element(&self, x: FieldElement) -> String {
        self.coords(x)
            .iter()
            .map(|c| c.to_string())
            .collect::<Vec<_>>()
            .join(",")
    }

    pub fn parse_element(&self, s: &str) -> Result<FieldElement> {
        let coords = s
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<u32>()
                    .map_err(|_| Error::InvalidField(format!("bad coordinate '{t}'")))
            })
            .collect::<Result<Vec<_>>>()?;
        self.from_coords(&coords)
    }

    /// Parses a flat comma-separated coordinate list as consecutive groups of
    /// `e` coordinates.
    pub fn parse_element_list(&self, s: &str) -> Result<Vec<FieldElement>> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(Vec::new());
        }
        let coords = s
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<u32>()
                    .map_err(|_| Error::InvalidField(format!("bad coordinate '{t}'")))
            })
            .collect::<Result<Vec<_>>>()?;
        let e = self.0.e as usize;
        if coords.len() % e != 0 {
            return Err(Error::InvalidField(format!(
                "{} coordinates do not split into elements of {e}",
                coords.len()
            )));
        }
        coords.chunks(e).map(|c| self.from_coords(c)).collect()
    }

    pub fn format_element_list(&self, xs: &[FieldElement]) -> String {
        xs.iter()
            .map(|&x| self.format_element(x))
            .collect::<Vec<_>>()
            .join(",")
    }
}

fn check_params(p: u32, e: u32) -> Result<()> {
    if !is_prime(p as u64) {
        return Err(Error::NotPrime(p as u64));
    }
    if e == 0 {
        return Err(Error::InvalidField("extension degree must be at least 1".into()));
    }
    let q = (p as u64).checked_pow(e).unwrap_or(u64::MAX);
    if q > MAX_FIELD_ORDER {
        return Err(Error::InvalidField(format!(
            "field order {p}^{e} exceeds {MAX_FIELD_ORDER}"
        )));
    }
    Ok(())
}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn mod_pow(mut b: u64, mut k: u64, n: u64) -> u64 {
    if n == 1 {
        return 0;
    }
    let mut r = 1u64;
    b %= n;
    while k > 0 {
        if k & 1 == 1 {
            r = r * b % n;
        }
        b = b * b % n;
        k >>= 1;
    }
    r
}

fn slow_mul(inner: &Inner, x: u32, y: u32) -> u32 {
    let p = inner.p as u64;
    let e = inner.e as usize;
    let unpack = |mut v: u32| -> Vec<u64> {
        (0..e)
            .map(|_| {
                let c = (v % inner.p) as u64;
                v /= inner.p;
                c
            })
            .collect()
    };
    let a = unpack(x);
    let b = unpack(y);
    let mut prod = vec![0u64; 2 * e];
    for (i, &ai) in a.iter().enumerate() {
        for (j, &bj) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + ai * bj) % p;
        }
    }
    let m: Vec<u64> = inner.modulus.iter().map(|&c| c as u64).collect();
    for k in (e..2 * e).rev() {
        let c = prod[k];
        if c != 0 {
            for (i, &mi) in m.iter().enumerate().take(e) {
                let idx = k - e + i;
                prod[idx] = (prod[idx] + p - (c * mi) % p) % p;
            }
            prod[k] = 0;
        }
    }
    prod[..e]
        .iter()
        .rev()
        .fold(0u64, |acc, &c| acc * p + c) as u32
}

fn slow_pow(inner: &Inner, x: u32, mut k: u64) -> u32 {
    let mut r = 1u32;
    let mut b = x;
    while k > 0 {
        if k & 1 == 1 {
            r = slow_mul(inner, r, b);
        }
        b = slow_mul(inner, b, b);
        k >>= 1;
    }
    r
}

fn primitive_element(inner: &Inner) -> u32 {
    let n = (inner.q - 1) as u64;
    let factors = prime_factors(n);
    (1..inner.q)
        .find(|&g| factors.iter().all(|&l| slow_pow(inner, g, n / l) != 1))
        .expect("multiplicative group of a finite field is cyclic")
}

/// Rabin's test: `f | X^{p^e} - X` and `gcd(f, X^{p^{e/l}} - X) = 1` for
/// every prime `l | e`.
fn is_irreducible(f: &[u32], p: u32) -> bool {
    let p = p as u64;
    let f: Vec<u64> = f.iter().map(|&c| c as u64).collect();
    let e = f.len() - 1;
    if e == 1 {
        return true;
    }
    let x = vec![0, 1];
    let frob_iter = |k: usize| -> Vec<u64> {
        let mut h = x.clone();
        for _ in 0..k {
            h = fp_poly::pow_mod(&h, p, &f, p);
        }
        h
    };
    if fp_poly::sub(&frob_iter(e), &x, p) != Vec::<u64>::new() {
        return false;
    }
    prime_factors(e as u64).into_iter().all(|l| {
        let h = fp_poly::sub(&frob_iter(e / l as usize), &x, p);
        fp_poly::gcd(&f, &h, p).len() == 1
    })
}

/// Dense polynomials over `F_p`, low-to-high, trimmed.
mod fp_poly {
    fn trim(mut a: Vec<u64>) -> Vec<u64> {
        while a.last() == Some(&0) {
            a.pop();
        }
        a
    }

    fn inv(a: u64, p: u64) -> u64 {
        super::mod_pow(a, p - 2, p)
    }

    pub fn sub(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let n = a.len().max(b.len());
        let out = (0..n)
            .map(|i| {
                let x = a.get(i).copied().unwrap_or(0);
                let y = b.get(i).copied().unwrap_or(0);
                (x + p - y) % p
            })
            .collect();
        trim(out)
    }

    pub fn rem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
        let mut r = trim(a.to_vec());
        let dm = m.len() - 1;
        let lead_inv = inv(m[dm], p);
        while r.len() > dm {
            let dr = r.len() - 1;
            let c = r[dr] * lead_inv % p;
            for (i, &mi) in m.iter().enumerate() {
                let idx = dr - dm + i;
                r[idx] = (r[idx] + p - c * mi % p) % p;
            }
            r = trim(r);
        }
        r
    }

    fn mul_mod(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Vec<u64> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut prod = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x * y) % p;
            }
        }
        rem(&prod, m, p)
    }

    pub fn pow_mod(base: &[u64], mut k: u64, m: &[u64], p: u64) -> Vec<u64> {
        let mut r = vec![1u64];
        let mut b = rem(base, m, p);
        while k > 0 {
            if k & 1 == 1 {
                r = mul_mod(&r, &b, m, p);
            }
            b = mul_mod(&b, &b, m, p);
            k >>= 1;
        }
        r
    }

    pub fn gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let mut a = trim(a.to_vec());
        let mut b = trim(b.to_vec());
        while !b.is_empty() {
            let r = rem(&a, &b, p);
            a = b;
            b = r;
        }
        a
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f4() -> Field {
        Field::new(2, 2, Some(&[1, 1, 1])).unwrap()
    }

    #[test]
    fn prime_field_f2() {
        let f = Field::new(2, 1, None).unwrap();
        assert_eq!(f.order(), 2);
        assert_eq!(f.elements().collect::<Vec<_>>(), vec![FieldElement(0), FieldElement(1)]);
        assert_eq!(f.add(f.one(), f.one()), f.zero());
    }

    #[test]
    fn f4_generator_squares() {
        let f = f4();
        let g = f.generator();
        // g^2 = g + 1 from X^2 + X + 1
        assert_eq!(f.mul(g, g), f.add(g, f.one()));
        assert_eq!(f.frobenius(g, 1), f.mul(g, g));
    }

    #[test]
    fn f9_modulus_has_no_root() {
        // X^2 + 1 at 0, 1, 2 over F_3: 1, 2, 2
        for x in 0..3u32 {
            assert_ne!((x * x + 1) % 3, 0);
        }
        let f = Field::new(3, 2, Some(&[1, 0, 1])).unwrap();
        assert_eq!(f.order(), 9);
        for x in f.nonzero_elements() {
            assert_eq!(f.mul(f.div(f.one(), x).unwrap(), x), f.one());
        }
    }

    #[test]
    fn rejects_bad_parameters() {
        assert_eq!(Field::new(4, 1, None).unwrap_err(), Error::NotPrime(4));
        assert_eq!(
            Field::new(2, 2, Some(&[1, 0, 1])).unwrap_err(),
            Error::ReducibleModulus
        );
        // (X^2+X+1)(X^3+X+1) has no linear factor but is reducible
        assert_eq!(
            Field::new(2, 5, Some(&[1, 0, 0, 0, 1, 1])).unwrap_err(),
            Error::ReducibleModulus
        );
        assert!(Field::new(2, 0, None).is_err());
        assert!(Field::new(2, 30, None).is_err());
    }

    #[test]
    fn division_by_zero() {
        let f = f4();
        assert_eq!(f.div(f.one(), f.zero()), Err(Error::DivisionByZero));
        assert_eq!(
            f.arith(ArithOp::Add, FieldElement(7), f.one()),
            Err(Error::ForeignElement(7))
        );
    }

    #[test]
    fn f8_square_root_is_fourth_power() {
        let f = Field::with_seed(2, 3, 1).unwrap();
        for x in f.elements() {
            let y = f.pow(x, 4);
            assert_eq!(f.mul(y, y), x);
            assert_eq!(f.pth_root(x), y);
        }
    }

    #[test]
    fn seeded_construction_is_deterministic() {
        let a = Field::with_seed(3, 4, 17).unwrap();
        let b = Field::with_seed(3, 4, 17).unwrap();
        assert_eq!(a.modulus(), b.modulus());
        assert_eq!(a.random(5), b.random(5));
    }

    #[test]
    fn element_text_round_trip() {
        let f = Field::with_seed(2, 3, 0).unwrap();
        for x in f.elements() {
            assert_eq!(f.parse_element(&f.format_element(x)).unwrap(), x);
        }
        let xs: Vec<_> = f.elements().collect();
        assert_eq!(f.parse_element_list(&f.format_element_list(&xs)).unwrap(), xs);
        assert!(f.parse_element_list("1,0").is_err());
    }

    #[test]
    fn frobenius_is_additive_exhaustively() {
        for (p, e) in [(2, 3), (3, 2), (2, 6), (7, 2)] {
            let f = Field::with_seed(p, e, 0).unwrap();
            for x in f.elements() {
                for y in f.elements() {
                    assert_eq!(
                        f.frobenius(f.add(x, y), 1),
                        f.add(f.frobenius(x, 1), f.frobenius(y, 1))
                    );
                }
            }
        }
    }
}
