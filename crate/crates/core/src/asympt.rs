//! Generic jumps `h_r` and the slope `h_r / r`.
//!
//! For `r > max(1, j)`, `j` the pivot of the first row of `theta`, the
//! generic jump has a closed form:
//!
//! * `p` prime to `m` and to `rm + n - j`: `h_r = rm + n - j`;
//! * `p` prime to `m`, dividing `rm + n - j`: `h_r = rm + n - j - 1`;
//! * `p | m`: `h_r = rm + n - j`.
//!
//! Smaller `r` are measured by enumeration or sampling.

use num_rational::Ratio;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::cover::{CoverSpec, CurveJet, Regime};
use crate::error::{Error, Result};
use crate::ffield::FieldElement;

/// Which closed-form branch applies.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GenericCase {
    /// `p` divides neither `m` nor `rm + n - j`.
    Coprime,
    /// `p` does not divide `m` but divides `rm + n - j`.
    Drop,
    /// `p | m`.
    WildPole,
}

impl GenericCase {
    pub fn label(self) -> &'static str {
        match self {
            GenericCase::Coprime => "p!|m,p!|L-j",
            GenericCase::Drop => "p!|m,p|L-j",
            GenericCase::WildPole => "p|m",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenericReport {
    pub r: u32,
    pub h: u32,
    pub j: u32,
    pub case: GenericCase,
    /// A jet whose jump is `h`.
    pub witness: Option<CurveJet>,
    /// `h / r`.
    pub slope: Ratio<u32>,
    /// False when `h` was measured because `r <= max(1, j)`.
    pub closed_form: bool,
}

/// How to measure `h_r` where no closed form applies.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Measurement {
    /// Every jet over the cover's field.
    Exhaustive { cap: u128 },
    /// `trials` random jets.
    Sampled { trials: u64, seed: u64 },
    /// Exhaustive if the jet space fits under `cap`, sampled otherwise.
    Auto { cap: u128, trials: u64, seed: u64 },
}

/// The least `j` with `theta_{0j} != 0`; when `p | m` the least such `j`
/// with `j != n mod p`, and every earlier `theta_{0i}` must vanish.
pub fn pivot_index(cover: &CoverSpec) -> Result<u32> {
    let a = cover.a();
    let (m, n) = (cover.m() as i64, cover.n() as i64);
    let p = cover.characteristic() as i64;
    let wild = m % p == 0;
    let limit = a.prec_u() + n;
    for j in 0..limit.max(0) {
        let c = a.coeff(-m, j - n)?;
        if c.is_zero() {
            continue;
        }
        if !wild {
            return Ok(j as u32);
        }
        if (j - n) % p != 0 {
            return Ok(j as u32);
        }
        return Err(Error::Verification(format!(
            "theta_{{0,{j}}} != 0 below the pivot with p | m; the cover is not normalized"
        )));
    }
    Err(Error::precision(format!(
        "no pivot among the certified theta_{{0,j}}, j < {limit}"
    )))
}

fn case_for(cover: &CoverSpec, r: u32, j: u32) -> GenericCase {
    let p = cover.characteristic();
    if cover.m().is_multiple_of(p) {
        GenericCase::WildPole
    } else if (cover.pole_depth(r) as i64 - j as i64).rem_euclid(p as i64) == 0 {
        GenericCase::Drop
    } else {
        GenericCase::Coprime
    }
}

/// Whether the closed form covers `r`.
pub fn closed_form_applies(r: u32, j: u32) -> bool {
    r > j.max(1)
}

/// The closed-form generic jump, with a witness jet checked against
/// [`CoverSpec::jump`].
pub fn generic_jump(cover: &CoverSpec, r: u32) -> Result<GenericReport> {
    let j = pivot_index(cover)?;
    if !closed_form_applies(r, j) {
        return Err(Error::domain(format!(
            "closed form needs r > max(1, j) = {}; measure h_{r} instead",
            j.max(1)
        )));
    }
    let case = case_for(cover, r, j);
    let depth = cover.pole_depth(r);
    let h = match case {
        GenericCase::Drop => depth - j - 1,
        GenericCase::Coprime | GenericCase::WildPole => depth - j,
    };
    let witness = find_witness(cover, r, h)?;
    Ok(GenericReport {
        r,
        h,
        j,
        case,
        witness: Some(witness),
        slope: Ratio::new(h, r),
        closed_form: true,
    })
}

/// Searches `beta_r = 1`, `beta_{r+1} = c`, higher terms zero, then any
/// nonzero `beta_r`.
fn find_witness(cover: &CoverSpec, r: u32, h: u32) -> Result<CurveJet> {
    let f = cover.field();
    let len = cover.required_jet_len(r)?;
    let leads: Vec<FieldElement> = std::iter::once(f.one())
        .chain(f.nonzero_elements().filter(|&x| x != f.one()))
        .collect();
    for &b0 in &leads {
        for b1 in f.elements() {
            let mut betas = vec![f.zero(); len];
            betas[0] = b0;
            if len > 1 {
                betas[1] = b1;
            } else if !b1.is_zero() {
                continue;
            }
            let jet = CurveJet::tangent(r, betas)?;
            if cover.jump(&jet)?.h == h {
                return Ok(jet);
            }
        }
    }
    Err(Error::Verification(format!(
        "no witness jet attains the closed-form value h_{r} = {h}"
    )))
}

/// Largest jump seen and a jet attaining it.
pub fn measure_jump(cover: &CoverSpec, r: u32, how: Measurement) -> Result<(u32, CurveJet)> {
    let space = cover.jet_space(r)?;
    let how = match how {
        Measurement::Auto { cap, trials, seed } => {
            if space.size() <= cap {
                Measurement::Exhaustive { cap }
            } else {
                Measurement::Sampled { trials, seed }
            }
        }
        other => other,
    };
    match how {
        Measurement::Exhaustive { cap } => {
            let table = cover.jump_table(&space, cap)?;
            let (idx, &h) = table
                .iter()
                .enumerate()
                // first index among the maxima
                .max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(&a.0)))
                .ok_or_else(|| Error::domain("empty jet space"))?;
            Ok((h, space.jet_at(idx as u64)))
        }
        Measurement::Sampled { trials, seed } => {
            if trials == 0 {
                return Err(Error::domain("at least one trial is required"));
            }
            let jets = random_jets(cover, r, trials, seed)?;
            let hs: Vec<u32> = jets
                .par_iter()
                .map(|jet| Ok(cover.jump(jet)?.h))
                .collect::<Result<_>>()?;
            let (idx, &h) = hs
                .iter()
                .enumerate()
                .max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(&a.0)))
                .expect("trials > 0");
            Ok((h, jets[idx].clone()))
        }
        Measurement::Auto { .. } => unreachable!("resolved above"),
    }
}

/// `trials` jets of the required length drawn from a seeded generator,
/// leading coefficient nonzero in the tangent family.
pub fn random_jets(cover: &CoverSpec, r: u32, trials: u64, seed: u64) -> Result<Vec<CurveJet>> {
    let f = cover.field();
    let len = cover.required_jet_len(r)?;
    let regime = cover.regime(r)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..trials)
        .map(|_| {
            let mut cs: Vec<FieldElement> = (0..len).map(|_| f.random_element(&mut rng)).collect();
            match regime {
                Regime::Transversal => Ok(CurveJet::transversal(cs)),
                Regime::Tangent { r } => {
                    cs[0] = f.random_nonzero(&mut rng);
                    CurveJet::tangent(r, cs)
                }
            }
        })
        .collect()
}

/// Maximum jump over `trials` random jets: a lower bound for `h_r`.
pub fn generic_jump_sampled(cover: &CoverSpec, r: u32, trials: u64, seed: u64) -> Result<u32> {
    Ok(measure_jump(cover, r, Measurement::Sampled { trials, seed })?.0)
}

/// Closed form when it applies, measurement otherwise.
pub fn generic_or_measured(cover: &CoverSpec, r: u32, how: Measurement) -> Result<GenericReport> {
    let j = pivot_index(cover)?;
    if closed_form_applies(r, j) {
        return generic_jump(cover, r);
    }
    let (h, witness) = measure_jump(cover, r, how)?;
    Ok(GenericReport {
        r,
        h,
        j,
        case: case_for(cover, r, j),
        witness: Some(witness),
        slope: Ratio::new(h, r),
        closed_form: false,
    })
}

/// Whether `|h_r / r - m| <= (n + j + 1) / r`.
pub fn within_envelope(cover: &CoverSpec, report: &GenericReport) -> bool {
    let r = report.r as i64;
    let gap = Ratio::new(report.h as i64, r) - Ratio::from_integer(cover.m() as i64);
    let allowed = Ratio::new((cover.n() + report.j + 1) as i64, r);
    gap <= allowed && -gap <= allowed
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SlopeTable {
    pub j: u32,
    pub rows: Vec<GenericReport>,
    /// `lim h_r / r`, which is `m`.
    pub limit: u32,
}

/// `h_r` and `h_r / r` for `r = 1..=r_max`. Rows in the closed-form range
/// are checked against the envelope.
pub fn asymptotic_slope(cover: &CoverSpec, r_max: u32, small_r: Measurement) -> Result<SlopeTable> {
    let j = pivot_index(cover)?;
    let mut rows = Vec::with_capacity(r_max as usize);
    for r in 1..=r_max {
        let rep = generic_or_measured(cover, r, small_r)?;
        if rep.closed_form && !within_envelope(cover, &rep) {
            return Err(Error::Verification(format!(
                "h_{r} = {} leaves the envelope around {}",
                rep.h,
                cover.m()
            )));
        }
        rows.push(rep);
    }
    Ok(SlopeTable {
        j,
        rows,
        limit: cover.m(),
    })
}
