#![allow(dead_code)]

use asram::cover::{CoverSpec, CurveJet, Regime};
use asram::ffield::{Field, FieldElement};
use asram::series::BivariateLaurent;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn f4() -> Field {
    Field::new(2, 2, Some(&[1, 1, 1])).unwrap()
}

pub fn f9() -> Field {
    Field::new(3, 2, Some(&[2, 2, 1])).unwrap()
}

/// A cover from `(i, j, coefficient index)` triples, certified mod `(T^40, U^40)`.
pub fn cover_from(f: &Field, d: u8, terms: &[(i64, i64, u32)], normalize: bool) -> asram::Result<CoverSpec> {
    let terms = terms
        .iter()
        .map(|&(i, j, c)| (i, j, f.element_at(c % f.order()).unwrap()));
    let a = BivariateLaurent::with_cleared_precision(f, terms, 40, 40)?;
    if normalize {
        CoverSpec::normalize(a, d)
    } else {
        CoverSpec::new(a, d)
    }
}

/// A random ramified cover with at most three monomials and `m + n <= max_depth`.
pub fn random_cover(f: &Field, seed: u64, max_depth: u32) -> CoverSpec {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let d = rng.gen_range(1..=2u8);
        let k = rng.gen_range(1..=3usize);
        let mut terms = vec![(-rng.gen_range(1..=3i64), 0, 0u32)];
        for _ in 1..k {
            let j = if d == 2 { rng.gen_range(-2..=1i64) } else { rng.gen_range(0..=2i64) };
            terms.push((rng.gen_range(-3..=1i64), j, 0));
        }
        for t in &mut terms {
            t.2 = rng.gen_range(1..f.order());
        }
        if let Ok(c) = cover_from(f, d, &terms, true) {
            if c.m() + c.n() <= max_depth {
                return c;
            }
        }
    }
}

pub fn arb_cover(max_depth: u32) -> impl Strategy<Value = CoverSpec> {
    (any::<bool>(), any::<u64>()).prop_map(move |(big, seed)| {
        let f = if big { f9() } else { f4() };
        random_cover(&f, seed, max_depth)
    })
}

/// A random jet of the family used for `T_r`, with `extra` coefficients past
/// the required length.
pub fn random_jet(cover: &CoverSpec, r: u32, extra: usize, rng: &mut impl Rng) -> CurveJet {
    let f = cover.field();
    let len = cover.required_jet_len(r).unwrap() + extra;
    let mut cs: Vec<FieldElement> = (0..len).map(|_| f.random_element(rng)).collect();
    match cover.regime(r).unwrap() {
        Regime::Transversal => CurveJet::transversal(cs),
        Regime::Tangent { r } => {
            cs[0] = f.random_nonzero(rng);
            CurveJet::tangent(r, cs).unwrap()
        }
    }
}
