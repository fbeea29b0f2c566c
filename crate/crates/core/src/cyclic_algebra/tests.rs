use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::error::Error;
use crate::globalfield::{Place, RationalFn};
use crate::poly::Poly;
use crate::scalars::{CycScalar, Fe};

fn forms() -> (Arc<AlgebraDescriptor>, Arc<AlgebraDescriptor>) {
    (AlgebraDescriptor::new(2, 3, 1).unwrap(), AlgebraDescriptor::new(2, 3, 2).unwrap())
}

fn rf(d: &AlgebraDescriptor, coeffs: &[u32]) -> RationalFn {
    RationalFn::from_poly(Poly::new(d.base(), coeffs.iter().map(|&c| Fe(c)).collect()))
}

fn random_element(d: &Arc<AlgebraDescriptor>, rng: &mut ChaCha8Rng, with_poles: bool) -> AlgebraElement {
    let q = d.base().order();
    let n = d.n() as usize;
    let table = (0..n)
        .map(|_| {
            (0..n)
                .map(|_| {
                    let num: Vec<u32> = (0..3).map(|_| rng.gen_range(0..q)).collect();
                    let mut r = rf(d, &num);
                    if with_poles && rng.gen_bool(0.3) {
                        r = r.mul(&RationalFn::t_pow(d.base(), -1));
                    }
                    r
                })
                .collect()
        })
        .collect();
    AlgebraElement::new(d, table).unwrap()
}

/// X^n − a·t − b as a characteristic polynomial over F_q(t).
fn binomial(d: &AlgebraDescriptor, a: &RationalFn) -> CharPoly {
    let f = d.base();
    let mut coeffs = vec![RationalFn::zero(f); d.n() as usize + 1];
    coeffs[0] = a.mul(&RationalFn::t(f)).neg();
    coeffs[d.n() as usize] = RationalFn::one(f);
    CharPoly { coeffs }
}

#[test]
fn defining_relations() {
    let (d, _) = forms();
    let s = AlgebraElement::s(&d);
    for j in 0..3 {
        let a = AlgebraElement::d(&d, j);
        let ga = AlgebraElement::from_l(&d, d.g_pow(d.basis()[j], 1), 0);
        assert_eq!(alg_mul(&s, &a).unwrap(), alg_mul(&ga, &s).unwrap());
    }
    let s3 = alg_mul(&alg_mul(&s, &s).unwrap(), &s).unwrap();
    assert_eq!(s3, AlgebraElement::scalar(&d, &RationalFn::t(d.base())));
    let one = AlgebraElement::one(&d);
    assert_eq!(alg_mul(&one, &s).unwrap(), s);
    let (_, dd) = forms();
    let other = AlgebraDescriptor::new(2, 3, 2).unwrap();
    assert_eq!(
        alg_mul(&s, &AlgebraElement::s(&other)).unwrap_err(),
        Error::DescriptorMismatch
    );
    drop(dd);
}

#[test]
fn ring_axioms_on_random_triples() {
    let (d, _) = forms();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..100 {
        let x = random_element(&d, &mut rng, false);
        let y = random_element(&d, &mut rng, false);
        let z = random_element(&d, &mut rng, false);
        let left = x.mul(&y).unwrap().mul(&z).unwrap();
        let right = x.mul(&y.mul(&z).unwrap()).unwrap();
        assert_eq!(left, right);
        let dist = x.mul(&y.add(&z).unwrap()).unwrap();
        assert_eq!(dist, x.mul(&y).unwrap().add(&x.mul(&z).unwrap()).unwrap());
    }
}

#[test]
fn splitting_matrix_is_a_homomorphism() {
    let (d, _) = forms();
    let top = d.splitting_field().clone();
    let one = AlgebraElement::one(&d).splitting_matrix();
    for (r, row) in one.iter().enumerate() {
        for (c, e) in row.iter().enumerate() {
            assert_eq!(*e, if r == c { RationalFn::one(&top) } else { RationalFn::zero(&top) });
        }
    }
    let s = AlgebraElement::s(&d);
    assert_eq!(s.reduced_char_poly().unwrap().norm(), RationalFn::t(d.base()));
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..20 {
        let x = random_element(&d, &mut rng, true);
        let y = random_element(&d, &mut rng, true);
        let (mx, my) = (x.splitting_matrix(), y.splitting_matrix());
        let mxy = x.mul(&y).unwrap().splitting_matrix();
        for r in 0..3 {
            for c in 0..3 {
                let mut acc = RationalFn::zero(&top);
                for k in 0..3 {
                    acc = acc.add(&mx[r][k].mul(&my[k][c]));
                }
                assert_eq!(acc, mxy[r][c]);
            }
        }
        if !x.is_zero() {
            assert!(mx.iter().flatten().any(|e| !e.is_zero()));
        }
    }
}

#[test]
fn reduced_characteristic_polynomials() {
    let (d, _) = forms();
    let f = d.base().clone();
    let s = AlgebraElement::s(&d);
    assert_eq!(s.reduced_char_poly().unwrap(), binomial(&d, &RationalFn::one(&f)));
    assert_eq!(s.reduced_char_poly().unwrap().to_string(), "X^3 + (t)");
    let top = d.splitting_field();
    for b in top.elements().skip(1) {
        let bs = AlgebraElement::from_l(&d, b, 1);
        let nb = RationalFn::constant(&f, d.extension().restrict(top.pow(b, 7)).unwrap());
        assert_eq!(nb, RationalFn::constant(&f, d.norm(b)));
        assert_eq!(bs.reduced_char_poly().unwrap(), binomial(&d, &nb));
    }
    // Central x: (X − x)³.
    let x = rf(&d, &[1, 1]);
    let cp = AlgebraElement::scalar(&d, &x).reduced_char_poly().unwrap();
    let expect = [x.pow(3).unwrap().neg(), x.pow(2).unwrap().scale(f.from_int(3)), x.scale(f.from_int(-3)), RationalFn::one(&f)];
    assert_eq!(cp.coeffs, expect.to_vec());

    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..20 {
        let x = random_element(&d, &mut rng, true);
        let y = random_element(&d, &mut rng, false);
        let cp = x.reduced_char_poly().unwrap();
        // Cayley–Hamilton inside D.
        let mut acc = AlgebraElement::zero(&d);
        let mut pow = AlgebraElement::one(&d);
        for c in &cp.coeffs {
            acc = acc.add(&pow.scale(c)).unwrap();
            pow = pow.mul(&x).unwrap();
        }
        assert!(acc.is_zero());
        // Conjugation invariance in the form cp(xy) = cp(yx).
        assert_eq!(
            x.mul(&y).unwrap().reduced_char_poly().unwrap(),
            y.mul(&x).unwrap().reduced_char_poly().unwrap()
        );
    }
}

#[test]
fn integrality() {
    let (d, _) = forms();
    let f = d.base().clone();
    let s = AlgebraElement::s(&d);
    for place in ["t + 1", "t^2 + t + 1", "t^3 + t + 1"] {
        assert!(s.integral_at(&Place::parse(&f, place).unwrap()));
    }
    assert!(s.s0_test());
    let inv = RationalFn::new(Poly::one(&f), Poly::linear(&f, Fe::ONE));
    let x = AlgebraElement::d(&d, 1).scale(&inv);
    assert!(!x.integral_at(&Place::parse(&f, "t + 1").unwrap()));
    assert!(x.s0_test());
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    assert!(random_element(&d, &mut rng, false).s0_test());
}

#[test]
fn valuations() {
    let (d, _) = forms();
    let f = d.base().clone();
    assert_eq!(AlgebraElement::s(&d).w_valuation(), Some(1));
    assert_eq!(AlgebraElement::scalar(&d, &RationalFn::t(&f)).w_valuation(), Some(3));
    assert_eq!(AlgebraElement::d(&d, 1).w_valuation(), Some(0));
    assert_eq!(AlgebraElement::zero(&d).w_valuation(), None);
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..50 {
        let x = random_element(&d, &mut rng, true);
        let y = random_element(&d, &mut rng, true);
        if let (Some(a), Some(b)) = (x.w_valuation(), y.w_valuation()) {
            assert_eq!(x.mul(&y).unwrap().w_valuation(), Some(a + b));
        }
        if let Some(w) = x.w_valuation() {
            let jet = AlgebraJet::from_element(&x, AlgebraWindow::new(-6, 6).unwrap()).unwrap();
            assert_eq!(jet.w_valuation(), Some(w).filter(|&w| w < 6));
        }
    }

    let window = AlgebraWindow::from_t_window(3, 0, 4);
    let mut bad = 0;
    for _ in 0..1000 {
        let (x, y) = (random_jet(&d, window, &mut rng), random_jet(&d, window, &mut rng));
        let (Some(a), Some(b)) = (x.w_valuation(), y.w_valuation()) else { continue };
        if x.mul_lifts(&y).unwrap().w_valuation() != Some(a + b) {
            bad += 1;
        }
        let trunc = x.mul(&y).unwrap().w_valuation();
        if trunc != Some(a + b).filter(|&w| w < window.hi) {
            bad += 1;
        }
    }
    assert_eq!(bad, 0);
}

#[test]
fn jet_expansion_matches_global_product() {
    let (d, _) = forms();
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let w = AlgebraWindow::new(-3, 9).unwrap();
    for _ in 0..30 {
        let x = random_element(&d, &mut rng, true);
        let y = random_element(&d, &mut rng, false);
        let jx = AlgebraJet::from_element(&x, w).unwrap();
        let jy = AlgebraJet::from_element(&y, AlgebraWindow::new(0, 12).unwrap()).unwrap();
        let prod = jx.mul(&jy).unwrap();
        assert_eq!(prod.window(), w);
        assert_eq!(prod, AlgebraJet::from_element(&x.mul(&y).unwrap(), w).unwrap());
        let cp = x.reduced_char_poly().unwrap();
        if x.s0_test() {
            let jet = AlgebraJet::from_element(&x, AlgebraWindow::new(0, 6).unwrap()).unwrap();
            assert_eq!(jet.char_poly_jet().unwrap(), CharPolyJet::from_char_poly(&cp, 2).unwrap());
        }
    }
    let deep = AlgebraElement::s(&d).scale(&RationalFn::t_pow(d.base(), -2));
    assert!(matches!(
        AlgebraJet::from_element(&deep, AlgebraWindow::new(-3, 3).unwrap()),
        Err(Error::PoleTooDeep { .. })
    ));
}

#[test]
fn units_and_residues() {
    let (d, _) = forms();
    let s = AlgebraElement::s(&d);
    let r = residue_algebra_class(&s).unwrap();
    assert_eq!(r.window(), AlgebraWindow::new(0, 3).unwrap());
    let r3 = r.mul(&r).unwrap().mul(&r).unwrap();
    assert!(r3.is_zero() && !r.is_zero() && !r.is_unit());
    let d1 = residue_algebra_class(&AlgebraElement::d(&d, 1)).unwrap();
    assert_eq!(d1.coeff(0), d.basis()[1]);
    assert!(d1.coeffs()[1..].iter().all(|c| c.is_zero()));
    let bad = AlgebraElement::s(&d).scale(&RationalFn::t_pow(d.base(), -1));
    assert!(matches!(residue_algebra_class(&bad), Err(Error::Precondition(_))));

    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..40 {
        let x = random_element(&d, &mut rng, false);
        let res = residue_algebra_class(&x).unwrap();
        assert_eq!(x.w_valuation() == Some(0), res.is_unit());
        if res.is_unit() {
            let inv = res.inverse().unwrap();
            let one = AlgebraJet::from_element(&AlgebraElement::one(&d), res.window()).unwrap();
            assert_eq!(res.mul(&inv).unwrap(), one);
            assert_eq!(inv.mul(&res).unwrap(), one);
        }
    }
}

#[test]
fn matched_pairs() {
    let (d, dd) = forms();
    let f = d.base().clone();
    let p = matched_pair(&d, &dd, Fe::ONE).unwrap();
    assert_eq!(p.c, AlgebraElement::s(&d));
    assert_eq!(p.c_dot.reduced_char_poly().unwrap(), binomial(&dd, &RationalFn::one(&f)));
    let gen = d.splitting_field().primitive();
    let q = matched_pair(&d, &dd, gen).unwrap();
    assert_eq!(d.norm(gen), Fe::ONE);
    assert_eq!(q.c.reduced_char_poly().unwrap(), binomial(&d, &RationalFn::one(&f)));
    assert!(matches!(matched_pair(&d, &dd, Fe::ZERO), Err(Error::Invalid(_))));
    assert!(matches!(matched_pair(&d, &d, Fe::ONE), Err(Error::Precondition(_))));

    let t1 = rf(&d, &[1, 1]);
    let mut c = vec![RationalFn::zero(&f); 3];
    c[1] = t1;
    let l = matched_pair_l(&d, &dd, &c).unwrap();
    assert_eq!(l.c.component(0), l.c_dot.component(0));
    assert_eq!(l.provenance, Provenance::LCommon);

    let pairs = standard_pairs(&d, &dd).unwrap();
    assert_eq!(pairs.len(), 26);
    for p in &pairs {
        let cp = p.c.reduced_char_poly().unwrap();
        assert_eq!(cp, p.c_dot.reduced_char_poly().unwrap());
        assert!(cp.is_separable());
    }
    // A central element is not regular.
    let central = AlgebraElement::scalar(&d, &RationalFn::t(&f));
    assert!(!central.reduced_char_poly().unwrap().is_separable());
}

#[test]
fn invariant_tables() {
    let (d, _) = forms();
    let w3 = AlgebraWindow::from_t_window(3, 0, 1);
    let constant = invariant_fn(&d, &AlgRecipe::Constant, w3).unwrap();
    assert!(constant.values().iter().all(|v| *v == CycScalar::one(2)));
    let trace = invariant_fn(&d, &AlgRecipe::TraceCharacter { depth: 1 }, w3).unwrap();
    assert_eq!(trace.invariance_violations_exhaustive().unwrap(), 0);
    assert!(matches!(
        invariant_fn(&d, &AlgRecipe::TraceCharacter { depth: 2 }, w3),
        Err(Error::InsufficientDepth(_))
    ));

    let w6 = AlgebraWindow::from_t_window(3, 0, 2);
    let target = CharPolyJet::from_char_poly(&AlgebraElement::s(&d).reduced_char_poly().unwrap(), 2).unwrap();
    let recipes = [
        AlgRecipe::TraceCharacter { depth: 2 },
        AlgRecipe::CharPolyCoset { target },
        AlgRecipe::Valuation { value: 1 },
    ];
    let tables = invariant_fns(&d, &recipes, w6).unwrap();
    let s_jet = AlgebraJet::from_element(&AlgebraElement::s(&d), w6).unwrap();
    assert_eq!(tables[1].value_at(&s_jet).unwrap(), CycScalar::one(2));
    assert_eq!(tables[2].value_at(&s_jet).unwrap(), CycScalar::one(2));
    for t in &tables {
        assert_eq!(t.invariance_violations(200, 17).unwrap(), 0);
    }
    // A non-invariant table is caught.
    let delta = AlgebraTestFunction::delta(&d, w3, AlgebraJet::from_element(&AlgebraElement::s(&d), w3).unwrap().index()).unwrap();
    assert!(delta.invariance_violations_exhaustive().unwrap() > 0);
}

#[test]
fn transform_on_d() {
    let (d, _) = forms();
    assert_eq!(dual_exponent(&d, Pairing::ReducedTrace), 2);
    assert_eq!(dual_exponent(&d, Pairing::Dot), 2);
    let w3 = AlgebraWindow::from_t_window(3, 0, 1);
    let ind = invariant_fn(&d, &AlgRecipe::Constant, w3).unwrap();
    let ft = ind.fourier_d(Pairing::ReducedTrace).unwrap();
    assert_eq!(ft.window(), AlgebraWindow::new(-5, -2).unwrap());
    assert_eq!(ft, ind.fourier_d_direct(Pairing::ReducedTrace).unwrap());
    let c = CycScalar::power_of(2, 2, -3);
    for (i, v) in ft.values().iter().enumerate() {
        assert_eq!(*v, if i == 0 { c.clone() } else { CycScalar::zero(2) });
    }
    let zero = AlgebraTestFunction::zero(&d, w3).unwrap();
    assert!(zero.fourier_d(Pairing::ReducedTrace).unwrap().values().iter().all(CycScalar::is_zero));

    for pairing in [Pairing::ReducedTrace, Pairing::Dot] {
        for i in 0..ind.values().len() {
            let phi = AlgebraTestFunction::delta(&d, w3, i).unwrap();
            let back = phi.fourier_d(pairing).unwrap().fourier_d(pairing).unwrap();
            assert_eq!(back, phi.negate_argument());
        }
    }

    let w6 = AlgebraWindow::from_t_window(3, 0, 2);
    let trace = invariant_fn(&d, &AlgRecipe::TraceCharacter { depth: 2 }, w6).unwrap();
    let big = trace.fourier_d(Pairing::ReducedTrace).unwrap();
    assert_eq!(big.invariance_violations(200, 23).unwrap(), 0);
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..3 {
        let x = random_jet(&d, big.window(), &mut rng);
        assert_eq!(trace.fourier_d_at(Pairing::ReducedTrace, &x).unwrap(), big.value_at(&x).unwrap());
    }

    let d2 = AlgebraDescriptor::new(3, 2, 1).unwrap();
    let w = AlgebraWindow::from_t_window(2, 0, 1);
    let phi = invariant_fn(&d2, &AlgRecipe::Constant, w).unwrap();
    assert_eq!(phi.fourier_d(Pairing::ReducedTrace).unwrap_err(), Error::OddNu(1));
}

#[test]
fn theorem_a_at_low_level() {
    let (d, dd) = forms();
    let pairs = standard_pairs(&d, &dd).unwrap();
    let w3 = AlgebraWindow::from_t_window(3, 0, 1);
    let recipes = [AlgRecipe::Constant, AlgRecipe::TraceCharacter { depth: 1 }];
    let report = theorem_a_report(&recipes, &pairs, w3, 1, Pairing::ReducedTrace).unwrap();
    assert_eq!(report.rows.len(), 52);
    assert!(report.skipped.is_empty());
    assert!(report.all_equal());
}

#[test]
fn json_round_trip() {
    let (d, _) = forms();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let x = random_element(&d, &mut rng, true);
    assert_eq!(AlgebraElement::from_json(&x.to_json()).unwrap(), x);
    assert!(AlgebraElement::from_json("[]").is_err());
    assert!(AlgebraDescriptor::new(2, 4, 1).is_err());
    assert!(AlgebraDescriptor::new(2, 3, 3).is_err());
}
