//! The cover description format.
//!
//! ```text
//! # x^p - x = T^-1 over F_4
//! p 2
//! e 2
//! modulus 1 1 1
//! d 1
//! term -1 0 1,0
//! prec 16 16
//! ```
//!
//! `modulus` lists the coefficients of the defining polynomial from the
//! constant term up. Each `term i j c` contributes `c T^i U^j`, with `c`
//! given by its comma-separated coordinates. `prec I J` states that
//! `T^m U^n a` is known modulo `(T^I, U^J)`. An optional `normalize no`
//! skips the reduction to minimal pole orders.

use asram::cover::CoverSpec;
use asram::ffield::Field;
use asram::series::BivariateLaurent;
use asram::Error;

use crate::error::ParseError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Term {
    pub i: i64,
    pub j: i64,
    /// Coordinates of the coefficient, low to high.
    pub coeff: Vec<u32>,
}

#[derive(Clone, Debug)]
pub struct CoverFile {
    pub p: u32,
    pub e: u32,
    pub modulus: Vec<u32>,
    pub d: u8,
    pub terms: Vec<Term>,
    pub prec: (i64, i64),
    pub normalize: Option<bool>,
    lines: Lines,
}

/// Source lines of each entry, for error messages.
#[derive(Clone, Debug, Default)]
struct Lines {
    p: usize,
    modulus: usize,
    d: usize,
    terms: Vec<usize>,
}

impl PartialEq for CoverFile {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p
            && self.e == other.e
            && self.modulus == other.modulus
            && self.d == other.d
            && self.terms == other.terms
            && self.prec == other.prec
            && self.normalize == other.normalize
    }
}

impl Eq for CoverFile {}

fn int<T: std::str::FromStr>(tok: &str, line: usize, what: &str) -> Result<T, ParseError> {
    tok.parse()
        .map_err(|_| ParseError::new(line, format!("bad {what} '{tok}'")))
}

fn coords(tok: &str, line: usize) -> Result<Vec<u32>, ParseError> {
    tok.split(',')
        .map(|c| int(c.trim(), line, "coordinate"))
        .collect()
}

fn set_once<T>(slot: &mut Option<T>, value: T, key: &str, line: usize) -> Result<(), ParseError> {
    if slot.is_some() {
        return Err(ParseError::new(line, format!("duplicate '{key}' line")));
    }
    *slot = Some(value);
    Ok(())
}

impl CoverFile {
    pub fn parse(text: &str) -> Result<Self, ParseError> {
        let mut p = None;
        let mut e = None;
        let mut modulus = None;
        let mut d = None;
        let mut prec = None;
        let mut normalize = None;
        let mut terms = Vec::new();
        let mut lines = Lines::default();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let body = raw.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            let toks: Vec<&str> = body.split_whitespace().collect();
            let args = &toks[1..];
            let arity = |n: usize| {
                if args.len() == n {
                    Ok(())
                } else {
                    Err(ParseError::new(
                        line,
                        format!("'{}' takes {n} argument(s), got {}", toks[0], args.len()),
                    ))
                }
            };
            match toks[0] {
                "p" => {
                    arity(1)?;
                    set_once(&mut p, int::<u32>(args[0], line, "characteristic")?, "p", line)?;
                    lines.p = line;
                }
                "e" => {
                    arity(1)?;
                    set_once(&mut e, int::<u32>(args[0], line, "degree")?, "e", line)?;
                }
                "modulus" => {
                    if args.is_empty() {
                        return Err(ParseError::new(line, "'modulus' needs coefficients"));
                    }
                    let cs = args
                        .iter()
                        .map(|t| int::<u32>(t, line, "modulus coefficient"))
                        .collect::<Result<Vec<_>, _>>()?;
                    set_once(&mut modulus, cs, "modulus", line)?;
                    lines.modulus = line;
                }
                "d" => {
                    arity(1)?;
                    let v = int::<u8>(args[0], line, "component count")?;
                    if v != 1 && v != 2 {
                        return Err(ParseError::new(line, format!("d must be 1 or 2, got {v}")));
                    }
                    set_once(&mut d, v, "d", line)?;
                    lines.d = line;
                }
                "term" => {
                    arity(3)?;
                    terms.push(Term {
                        i: int(args[0], line, "T exponent")?,
                        j: int(args[1], line, "U exponent")?,
                        coeff: coords(args[2], line)?,
                    });
                    lines.terms.push(line);
                }
                "prec" => {
                    arity(2)?;
                    let v = (int(args[0], line, "precision")?, int(args[1], line, "precision")?);
                    set_once(&mut prec, v, "prec", line)?;
                }
                "normalize" => {
                    arity(1)?;
                    let v = match args[0] {
                        "yes" => true,
                        "no" => false,
                        other => {
                            return Err(ParseError::new(
                                line,
                                format!("normalize takes yes or no, got '{other}'"),
                            ))
                        }
                    };
                    set_once(&mut normalize, v, "normalize", line)?;
                }
                other => return Err(ParseError::new(line, format!("unknown keyword '{other}'"))),
            }
        }
        let missing = |k: &str| ParseError::new(0, format!("missing '{k}' line"));
        let d = d.ok_or_else(|| missing("d"))?;
        if terms.is_empty() {
            return Err(missing("term"));
        }
        if d == 1 {
            if let Some(k) = terms.iter().position(|t| t.j < 0) {
                return Err(ParseError::new(
                    lines.terms[k],
                    "U exponent must be >= 0 when d = 1",
                ));
            }
        }
        Ok(Self {
            p: p.ok_or_else(|| missing("p"))?,
            e: e.ok_or_else(|| missing("e"))?,
            modulus: modulus.ok_or_else(|| missing("modulus"))?,
            d,
            terms,
            prec: prec.ok_or_else(|| missing("prec"))?,
            normalize,
            lines,
        })
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("p {}\ne {}\nmodulus", self.p, self.e);
        for c in &self.modulus {
            out.push_str(&format!(" {c}"));
        }
        out.push_str(&format!("\nd {}\n", self.d));
        for t in &self.terms {
            let c: Vec<String> = t.coeff.iter().map(u32::to_string).collect();
            out.push_str(&format!("term {} {} {}\n", t.i, t.j, c.join(",")));
        }
        out.push_str(&format!("prec {} {}\n", self.prec.0, self.prec.1));
        if let Some(n) = self.normalize {
            out.push_str(&format!("normalize {}\n", if n { "yes" } else { "no" }));
        }
        out
    }

    pub fn field(&self) -> Result<Field, ParseError> {
        Field::new(self.p, self.e, Some(&self.modulus)).map_err(|err| match err {
            Error::NotPrime(_) => ParseError::new(self.lines.p, err.to_string()),
            other => ParseError::new(self.lines.modulus, other.to_string()),
        })
    }

    /// The bivariate datum, before normalization.
    pub fn datum(&self) -> Result<BivariateLaurent, ParseError> {
        let f = self.field()?;
        let mut terms = Vec::with_capacity(self.terms.len());
        for (k, t) in self.terms.iter().enumerate() {
            let line = self.lines.terms.get(k).copied().unwrap_or(0);
            let c = f
                .from_coords(&t.coeff)
                .map_err(|e| ParseError::new(line, e.to_string()))?;
            terms.push((t.i, t.j, c));
        }
        BivariateLaurent::with_cleared_precision(&f, terms, self.prec.0, self.prec.1)
            .map_err(|e| ParseError::new(0, e.to_string()))
    }

    pub fn to_cover(&self) -> Result<CoverSpec, crate::CliError> {
        let a = self
            .datum()
            .map_err(|e| crate::CliError::parse("cover", e))?;
        let cover = if self.normalize.unwrap_or(true) {
            CoverSpec::normalize(a, self.d)?
        } else {
            CoverSpec::new(a, self.d)?
        };
        Ok(cover)
    }

    /// Line of the `d` entry, for diagnostics.
    pub fn d_line(&self) -> usize {
        self.lines.d
    }
}
