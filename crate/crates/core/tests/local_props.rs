use asram::ffield::{Field, FieldElement};
use asram::local::{as_jump, as_reduce};
use asram::series::LaurentSeries;
use proptest::prelude::*;

/// Every coefficient vector of length `len`, in enumeration order.
fn vectors(f: &Field, len: usize) -> Vec<Vec<FieldElement>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|v| {
                f.elements().map(move |c| {
                    let mut w = v.clone();
                    w.push(c);
                    w
                })
            })
            .collect();
    }
    out
}

/// `sum_k cs[k] t^{k - len}` known modulo `t^prec`.
fn polar(f: &Field, cs: &[FieldElement], prec: i64) -> LaurentSeries {
    LaurentSeries::new(f, -(cs.len() as i64), cs.to_vec(), prec).unwrap()
}

fn pshift(a: &LaurentSeries, d: &LaurentSeries) -> LaurentSeries {
    let p = a.field().characteristic() as i64;
    a.add(&d.pow(p).unwrap()).unwrap().sub(d).unwrap()
}

#[test]
fn pshift_invariance_is_exhaustive_over_small_fields() {
    let mut cases = 0u64;
    let grid = [
        (Field::new(2, 1, None).unwrap(), 6usize, 6usize),
        (Field::new(2, 2, None).unwrap(), 5, 3),
    ];
    for (f, depth, d_depth) in grid {
        let shifts: Vec<_> = vectors(&f, d_depth + 1)
            .into_iter()
            .map(|cs| polar(&f, &cs, 1))
            .collect();
        for cs in vectors(&f, depth) {
            let a = polar(&f, &cs, 1);
            let h = as_jump(&a).unwrap();
            let reduced = as_reduce(&a).unwrap();
            for d in &shifts {
                let b = pshift(&a, d);
                assert_eq!(as_jump(&b).unwrap(), h, "a = {a:?}, d = {d:?}");
                assert_eq!(as_reduce(&b).unwrap().terms().collect::<Vec<_>>(), reduced.terms().collect::<Vec<_>>());
                cases += 1;
            }
        }
    }
    assert!(cases >= 100_000, "only {cases} cases");
}

/// Among all shifts of `a` by `d^p - d` with `d` of pole order at most
/// `depth / p`, exactly one has no pole of order divisible by `p`, and it is
/// the reduced form; the least pole order reached is the jump.
#[test]
fn reduction_matches_brute_force_shift_search() {
    let f4 = Field::new(2, 2, None).unwrap();
    let f9 = Field::new(3, 2, None).unwrap();
    let mut inputs = vec![(f4.clone(), vec![f4.one(), f4.one(), f4.zero(), f4.zero()])];
    for cs in vectors(&f4, 4).into_iter().step_by(7) {
        inputs.push((f4.clone(), cs));
    }
    for cs in vectors(&f9, 3).into_iter().step_by(2) {
        inputs.push((f9.clone(), cs));
    }
    for (f, cs) in inputs {
        let p = f.characteristic() as usize;
        let a = polar(&f, &cs, 1);
        let reduced = as_reduce(&a).unwrap();
        let mut canonical = Vec::new();
        let mut least_pole = u32::MAX;
        for ds in vectors(&f, cs.len() / p) {
            let d = polar(&f, &ds, 1);
            let b = pshift(&a, &d).truncate(0);
            let pole = if b.is_zero() { 0 } else { (-b.val()).max(0) as u32 };
            least_pole = least_pole.min(pole);
            if b.terms().all(|(k, _)| k % p as i64 != 0) {
                canonical.push(b);
            }
        }
        assert_eq!(canonical.len(), 1, "a = {a:?}");
        let got: Vec<_> = reduced.terms().map(|(l, c)| (-(l as i64), c)).collect();
        let want: Vec<_> = canonical[0].terms().collect();
        assert_eq!(got.into_iter().rev().collect::<Vec<_>>(), want);
        assert_eq!(least_pole, reduced.jump());
    }
}

#[test]
fn worked_example_over_f2() {
    let f = Field::new(2, 1, None).unwrap();
    let one = f.one();
    let zero = f.zero();
    let a = polar(&f, &[one, one, zero, zero], 1);
    let r = as_reduce(&a).unwrap();
    assert_eq!(r.terms().collect::<Vec<_>>(), vec![(1, one), (3, one)]);
}

fn field() -> impl Strategy<Value = Field> {
    prop::sample::select(vec![(2u32, 1u32), (2, 2), (2, 3), (3, 1), (3, 2), (5, 1), (7, 1)])
        .prop_map(|(p, e)| Field::new(p, e, None).unwrap())
}

fn coeffs(f: &Field, raw: &[u32]) -> Vec<FieldElement> {
    raw.iter().map(|&i| f.element_at(i % f.order()).unwrap()).collect()
}

proptest! {
    #[test]
    fn integral_perturbation_is_invisible(
        f in field(),
        a_raw in prop::collection::vec(any::<u32>(), 1..10),
        z_raw in prop::collection::vec(any::<u32>(), 1..6),
    ) {
        let a = polar(&f, &coeffs(&f, &a_raw), 3);
        let z = LaurentSeries::new(&f, 0, coeffs(&f, &z_raw), 3).unwrap();
        let b = a.add(&z).unwrap();
        prop_assert_eq!(as_jump(&b).unwrap(), as_jump(&a).unwrap());
        prop_assert_eq!(as_reduce(&b).unwrap().terms().collect::<Vec<_>>(),
                        as_reduce(&a).unwrap().terms().collect::<Vec<_>>());
    }

    #[test]
    fn random_pshift_invariance(
        f in field(),
        a_raw in prop::collection::vec(any::<u32>(), 1..10),
        d_raw in prop::collection::vec(any::<u32>(), 1..5),
    ) {
        let a = polar(&f, &coeffs(&f, &a_raw), 2);
        let d = polar(&f, &coeffs(&f, &d_raw), 2);
        prop_assert_eq!(as_jump(&pshift(&a, &d)).unwrap(), as_jump(&a).unwrap());
    }

    #[test]
    fn monomial_jump_is_its_pole(f in field(), l in 1u32..40, c in 1u32..1000) {
        let p = f.characteristic();
        prop_assume!(l % p != 0);
        let c = f.element_at(1 + c % (f.order() - 1)).unwrap();
        let a = LaurentSeries::monomial(&f, c, -(l as i64), 1);
        prop_assert_eq!(as_jump(&a).unwrap(), l);
    }

    #[test]
    fn reduction_is_idempotent(f in field(), a_raw in prop::collection::vec(any::<u32>(), 1..12)) {
        let once = as_reduce(&polar(&f, &coeffs(&f, &a_raw), 1)).unwrap();
        let twice = as_reduce(&once.to_series()).unwrap();
        prop_assert_eq!(once.terms().collect::<Vec<_>>(), twice.terms().collect::<Vec<_>>());
        for (l, c) in once.terms() {
            prop_assert!(l % f.characteristic() != 0);
            prop_assert!(!c.is_zero());
        }
    }
}
