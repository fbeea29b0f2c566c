use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

use super::*;
use crate::error::Error;
use crate::globalfield::{residue, Place, RationalFn};
use crate::parse::parse_univariate;
use crate::scalars::{field_of_order, psi, CycScalar, Fe, GaloisField};

fn place(field: &Arc<GaloisField>, s: &str) -> PlaceData {
    PlaceData::new(field, Place::parse(field, s).unwrap())
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Degree-2 place used for each small field.
fn quadratic(q: u32) -> &'static str {
    if q == 2 {
        "t^2 + t + 1"
    } else {
        "t^2 + 1"
    }
}

fn windows_up_to(total: u32) -> Vec<Window> {
    let mut out = Vec::new();
    for s in 0..=total {
        for n in 0..=s {
            out.push(Window::new(n, s - n));
        }
    }
    out
}

#[test]
fn jet_round_trip() {
    let f = field_of_order(3).unwrap();
    let pd = place(&f, "t");
    let w = Window::new(2, 2);
    for i in 0..81 {
        let j = JetVector::from_index(&pd, w, 1, i);
        let again = JetVector::alpha_encode(&pd, w, 1, j.alpha_decode().to_vec()).unwrap();
        assert_eq!(again.index(), i);
        let r = j.component(0);
        assert_eq!(JetVector::from_rational(&pd, w, &[r]).unwrap(), j);
    }
    let f2 = field_of_order(2).unwrap();
    let pd2 = place(&f2, "t");
    let all: std::collections::HashSet<_> = (0..4)
        .map(|i| JetVector::from_index(&pd2, Window::new(1, 1), 1, i).alpha_decode().to_vec())
        .collect();
    assert_eq!(all.len(), 4);
    assert_eq!(
        JetVector::alpha_encode(&pd2, Window::new(1, 1), 1, vec![Fe::ZERO; 3]).unwrap_err(),
        Error::LengthMismatch { expected: 2, got: 3 }
    );
}

#[test]
fn integrals() {
    let f = field_of_order(2).unwrap();
    let pd = place(&f, "t");
    let ind = LocalTestFunction::indicator(&pd, 1, Window::new(0, 1)).unwrap();
    assert_eq!(ind.integrate(), CycScalar::one(2));
    let d = LocalTestFunction::delta(&pd, 1, Window::new(0, 1), 1).unwrap();
    assert_eq!(d.integrate(), CycScalar::from_rational(2, rat(1, 2)));

    // ψ(r(x/t)) summed over O/tO.
    for q in [2, 3, 4] {
        let f = field_of_order(q).unwrap();
        let pd = place(&f, "t");
        let u = RationalFn::t_pow(&f, -1);
        let chi = LocalTestFunction::from_fn(&pd, 1, Window::new(0, 1), |x| {
            let r = residue(&x.component(0).mul(&u), pd.place()).unwrap();
            psi(&f, r.trace)
        })
        .unwrap();
        assert!(chi.integrate().is_zero());
    }
}

#[test]
fn level_moves() {
    let f = field_of_order(2).unwrap();
    let pd = place(&f, "t");
    let ind = LocalTestFunction::indicator(&pd, 1, Window::new(0, 1)).unwrap();
    let big = ind.extend_zero(2).unwrap();
    assert_eq!(big.integrate(), CycScalar::one(2));
    assert_eq!(big.refine(3).unwrap().integrate(), CycScalar::one(2));
    assert!(matches!(big.extend_zero(1), Err(Error::WindowShrink(_))));

    let z = LocalTestFunction::zero(&pd, 1, Window::new(0, 1)).unwrap();
    assert!(z.refine(2).unwrap().values().iter().all(CycScalar::is_zero));

    for w in windows_up_to(3).into_iter().filter(|w| w.pole <= 1 && w.depth <= 2) {
        let n = 1usize << w.len();
        for i in 0..n {
            let phi = LocalTestFunction::delta(&pd, 1, w, i).unwrap();
            for target in [Window::new(1, 2), Window::new(w.pole, 2), Window::new(1, w.depth)] {
                let up = phi.to_window(target).unwrap();
                assert_eq!(up.integrate(), phi.integrate());
                assert_eq!(up.restrict(w).unwrap(), phi);
                assert!(up.equivalent(&phi).unwrap());
            }
        }
    }
    let d = LocalTestFunction::delta(&pd, 1, Window::new(0, 2), 1).unwrap();
    assert!(matches!(d.restrict(Window::new(0, 1)), Err(Error::Precondition(_))));
}

#[test]
fn residues() {
    let f = field_of_order(2).unwrap();
    let t_inv = RationalFn::t_pow(&f, -1);
    let zero = Place::parse(&f, "t").unwrap();
    assert_eq!(residue(&t_inv, &zero).unwrap().value, Fe::ONE);
    assert_eq!(residue(&RationalFn::one(&f), &Place::Infinity).unwrap().value, Fe::ZERO);
    assert_eq!(residue(&RationalFn::t(&f), &Place::Infinity).unwrap().value, Fe::ZERO);
    let f3 = field_of_order(3).unwrap();
    let r = residue(&RationalFn::t_pow(&f3, -1), &Place::Infinity).unwrap();
    assert_eq!(r.value, f3.neg(Fe::ONE));

    let pi = parse_univariate(&f, "t^2 + t + 1", "t").unwrap();
    let g = RationalFn::new(crate::poly::Poly::one(&f), pi.clone());
    let total = [Place::Infinity, Place::Finite(pi)]
        .iter()
        .map(|p| residue(&g, p).unwrap().trace)
        .fold(Fe::ZERO, |a, b| f.add(a, b));
    assert_eq!(total, Fe::ZERO);

    let pd = PlaceData::new(&f, Place::Infinity);
    let shallow = JetVector::from_rational(&pd, Window::new(1, 1), &[RationalFn::t(&f)]).unwrap();
    assert!(matches!(shallow.residue(0), Err(Error::InsufficientDepth(_))));
    let deep = JetVector::from_rational(&pd, Window::new(0, 2), &[t_inv]).unwrap();
    assert_eq!(deep.residue(0).unwrap().value, Fe::ONE);
}

#[test]
fn pairing_matches_residues() {
    for q in [2, 3] {
        let f = field_of_order(q).unwrap();
        for s in ["t", "t + 1", quadratic(q), "inf"] {
            let pd = place(&f, s);
            let w = Window::new(1, 3);
            let (dual, _) = pd.gram(w).unwrap();
            let n = (q as usize).pow(pd.jet_dim(w) as u32);
            let m = (q as usize).pow(pd.jet_dim(dual) as u32);
            for i in (0..n).step_by(97) {
                for j in (0..m).step_by(89) {
                    let y = JetVector::from_index(&pd, w, 1, i);
                    let x = JetVector::from_index(&pd, dual, 1, j);
                    let prod = x.component(0).mul(&y.component(0));
                    let r = residue(&prod, pd.place()).unwrap().trace;
                    assert_eq!(x.pairing(&y).unwrap(), r, "{s} {i} {j}");
                }
            }
        }
    }
}

#[test]
fn transform_examples() {
    let f = field_of_order(2).unwrap();
    let pd = place(&f, "t");
    let ind = LocalTestFunction::indicator(&pd, 1, Window::new(0, 1))
        .unwrap()
        .extend_zero(1)
        .unwrap();
    let ft = ind.fourier1().unwrap();
    assert_eq!(ft.window(), Window::new(1, 1));
    assert!(ft.equivalent(&ind).unwrap());

    let d = LocalTestFunction::delta(&pd, 1, Window::new(0, 1), 0).unwrap();
    let fd = d.fourier1().unwrap();
    assert_eq!(fd.window(), Window::new(1, 0));
    assert!(fd.values().iter().all(|v| *v == CycScalar::from_rational(2, rat(1, 2))));

    let z = LocalTestFunction::zero(&pd, 2, Window::new(0, 1)).unwrap();
    assert!(z.fourier_multi().unwrap().values().iter().all(CycScalar::is_zero));

    let inf = PlaceData::new(&f, Place::Infinity);
    let bad = LocalTestFunction::indicator(&inf, 1, Window::new(1, 1)).unwrap();
    assert!(matches!(bad.fourier1(), Err(Error::NegativeDepth(_))));
    assert_eq!(
        PlaceData::with_nu(&f, Place::Infinity, 1).unwrap_err(),
        Error::OddNu(1)
    );
}

#[test]
fn inversion_on_delta_basis() {
    for q in [2, 3] {
        let f = field_of_order(q).unwrap();
        for s in ["t", quadratic(q)] {
            for nu in [0, 2] {
                let pd = PlaceData::with_nu(&f, Place::parse(&f, s).unwrap(), nu).unwrap();
                for w in windows_up_to(3).into_iter().filter(|w| w.depth as i64 >= nu) {
                    let n = (q as usize).pow(pd.jet_dim(w) as u32);
                    for i in 0..n {
                        let phi = LocalTestFunction::delta(&pd, 1, w, i).unwrap();
                        let back = phi.fourier1().unwrap().fourier1().unwrap();
                        assert_eq!(back, phi.negate_argument(), "q={q} {s} nu={nu} {w} {i}");
                    }
                }
            }
        }
    }
}

#[test]
fn transform_window_is_sharp() {
    let f = field_of_order(3).unwrap();
    for s in ["t", "inf"] {
        let pd = place(&f, s);
        let w = Window::new(1, 2);
        for i in [0, 4, 17, 26] {
            let phi = LocalTestFunction::delta(&pd, 1, w, i).unwrap();
            let small = phi.fourier1().unwrap();
            let big = phi.to_window(Window::new(2, 3)).unwrap().fourier_direct().unwrap();
            assert!(big.equivalent(&small).unwrap());
            assert_eq!(big.restrict(small.window()).unwrap(), small);
        }
    }
}

#[test]
fn multi_variable_transform() {
    let f = field_of_order(2).unwrap();
    let pd = place(&f, "t");
    let w = Window::new(0, 1);
    let a = LocalTestFunction::delta(&pd, 1, w, 1).unwrap();
    let b = LocalTestFunction::indicator(&pd, 1, w).unwrap();
    let prod = LocalTestFunction::from_fn(&pd, 2, w, |x| {
        let i = x.index();
        a.values()[i >> 1].clone() * b.values()[i & 1].clone()
    })
    .unwrap();
    let (fa, fb) = (a.fourier1().unwrap(), b.fourier1().unwrap());
    let fp = prod.fourier_multi().unwrap();
    let m = fa.values().len();
    for (i, v) in fp.values().iter().enumerate() {
        assert_eq!(*v, fa.values()[i / m].clone() * fb.values()[i % m].clone());
    }
    assert_eq!(fp, prod.fourier_direct().unwrap());
}

fn scalar(p: u32) -> impl Strategy<Value = CycScalar> {
    proptest::collection::vec(-4i64..5, (p as usize - 1).max(1)).prop_map(move |cs| {
        let raw: Vec<BigRational> = cs.into_iter().map(|c| rat(c, 1)).collect();
        crate::scalars::cyc_normalize(p, &raw)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn transform_and_integral_are_linear(
        u in proptest::collection::vec(scalar(3), 27),
        v in proptest::collection::vec(scalar(3), 27),
        c in scalar(3),
    ) {
        let f = field_of_order(3).unwrap();
        let pd = place(&f, "inf");
        let w = Window::new(1, 2);
        let a = LocalTestFunction::new(&pd, 1, w, u).unwrap();
        let b = LocalTestFunction::new(&pd, 1, w, v).unwrap();
        let comb = a.scale(&c).add(&b).unwrap();
        let lhs = comb.fourier1().unwrap();
        let rhs = a.fourier1().unwrap().scale(&c).add(&b.fourier1().unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
        prop_assert_eq!(comb.integrate(), &(&a.integrate() * &c) + &b.integrate());
        prop_assert_eq!(a.fourier1().unwrap(), a.fourier_direct().unwrap());
    }
}
