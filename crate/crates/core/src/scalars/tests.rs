use super::*;
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

fn r(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

#[test]
fn small_fields() {
    let f2 = make_field(2, 1).unwrap();
    assert_eq!(f2.elements().count(), 2);
    let f8 = make_field(2, 3).unwrap();
    assert_eq!(f8.order(), 8);
    let g = f8.primitive();
    let powers: std::collections::BTreeSet<_> = (0..7).map(|k| f8.pow(g, k)).collect();
    assert_eq!(powers.len(), 7);
    assert_eq!(f8.pow(g, 7), Fe::ONE);
    assert_eq!(f8.modulus(), &[1, 1, 0, 1]);
}

#[test]
fn f9_contains_f3() {
    let f9 = make_field(3, 2).unwrap();
    let ext = extension(&make_field(3, 1).unwrap(), 2).unwrap();
    let image: Vec<Fe> = (0..3).map(|c| ext.embed(Fe(c))).collect();
    for &a in &image {
        for &b in &image {
            assert!(image.contains(&f9.add(a, b)));
            assert!(image.contains(&f9.mul(a, b)));
        }
    }
}

#[test]
fn non_prime_rejected() {
    assert_eq!(make_field(4, 1).unwrap_err(), crate::Error::NotPrime(4));
    assert!(make_field(2, 3).unwrap().trace(Fe(3), 2).is_err());
}

#[test]
fn trace_examples() {
    let f4 = make_field(2, 2).unwrap();
    assert_eq!(f4.modulus(), &[1, 1, 1]);
    let x = f4.generator();
    assert_eq!(f4.trace(x, 1).unwrap(), Fe::ONE);
    assert_eq!(f4.trace(Fe::ZERO, 1).unwrap(), Fe::ZERO);
    for y in f4.elements() {
        assert_eq!(f4.trace(y, 2).unwrap(), y);
    }
}

#[test]
fn psi_examples() {
    let f2 = make_field(2, 1).unwrap();
    assert_eq!(psi(&f2, Fe(0)), CycScalar::one(2));
    assert_eq!(psi(&f2, Fe(1)), CycScalar::from_integer(2, -1));
    let f3 = make_field(3, 1).unwrap();
    let mut total = CycScalar::zero(3);
    let mut squares = CycScalar::zero(3);
    for x in f3.elements() {
        total += &psi(&f3, x);
        squares += &psi(&f3, f3.mul(x, x));
    }
    assert!(total.is_zero());
    assert_eq!(squares, cyc_normalize(3, &[r(1), r(2)]));
    assert_eq!(squares.to_string(), "1 + 2ζ");
}

#[test]
fn character_relations() {
    for q in [2u32, 3, 4, 5, 7, 8, 9, 16, 25, 27] {
        let f = field_of_order(q).unwrap();
        let p = f.characteristic();
        let mut total = CycScalar::zero(p);
        for x in f.elements() {
            total += &psi(&f, x);
        }
        assert!(total.is_zero(), "q={q}");
        if q <= 9 {
            for x in f.elements() {
                for y in f.elements() {
                    assert_eq!(psi(&f, f.add(x, y)), psi(&f, x) * psi(&f, y));
                }
            }
        }
    }
}

#[test]
fn trace_transitive() {
    for (p, e) in [(2u32, 4u32), (2, 6), (3, 4), (2, 2), (3, 2), (5, 2)] {
        let f = make_field(p, e).unwrap();
        for d in (1..=e).filter(|d| e % d == 0) {
            let sub = make_field(p, d).unwrap();
            for x in f.elements() {
                let via = sub.trace(f.trace(x, d).unwrap(), 1).unwrap();
                assert_eq!(via, f.trace(x, 1).unwrap());
                assert_eq!(via.0, f.absolute_trace(x));
            }
        }
    }
}

#[test]
fn field_axioms_exhaustive() {
    for q in [4u32, 8, 9] {
        let f = field_of_order(q).unwrap();
        for a in f.elements() {
            assert_eq!(f.add(a, f.neg(a)), Fe::ZERO);
            if !a.is_zero() {
                assert_eq!(f.mul(a, f.inv(a)), Fe::ONE);
            }
            for b in f.elements() {
                for c in f.elements() {
                    assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                }
            }
        }
    }
}

#[test]
fn norm_and_frobenius() {
    let base = make_field(2, 1).unwrap();
    let ext = extension(&base, 3).unwrap();
    let f8 = ext.top();
    for b in f8.elements().skip(1) {
        assert_eq!(ext.norm(b), Fe::ONE);
        assert_eq!(f8.pow(b, 7), Fe::ONE);
    }
    let f4 = make_field(2, 2).unwrap();
    let e42 = extension(&f4, 2).unwrap();
    for x in e42.top().elements() {
        assert_eq!(e42.frobenius(e42.frobenius(x, 1), 1), x);
        let t = e42.trace(x);
        assert_eq!(e42.embed(t), e42.top().add(x, e42.frobenius(x, 1)));
    }
}

#[test]
fn normalize_examples() {
    assert!(cyc_normalize(3, &[r(1), r(1), r(1)]).is_zero());
    let top = cyc_normalize(5, &[r(0), r(0), r(0), r(0), r(1)]);
    assert_eq!(top.coeffs(), &[r(-1), r(-1), r(-1), r(-1)]);
    let z = CycScalar::zeta_pow(5, 4);
    assert_eq!(z, top);
    assert_eq!(CycScalar::zeta_pow(3, 1) * CycScalar::zeta_pow(3, 2), CycScalar::one(3));
}

#[test]
fn serde_round_trip() {
    let x = cyc_normalize(3, &[BigRational::new(BigInt::from(-3), BigInt::from(4)), r(7)]);
    let js = serde_json::to_string(&x).unwrap();
    assert_eq!(js, r#"{"p":3,"coeffs":[["-3","4"],["7","1"]]}"#);
    let back: CycScalar = serde_json::from_str(&js).unwrap();
    assert_eq!(back, x);
}

fn raw_strategy(p: u32) -> impl Strategy<Value = Vec<BigRational>> {
    proptest::collection::vec((-20i64..20, 1i64..6), 0..=p as usize).prop_map(|v| {
        v.into_iter()
            .map(|(n, d)| BigRational::new(BigInt::from(n), BigInt::from(d)))
            .collect()
    })
}

proptest! {
    #[test]
    fn normalize_idempotent(raw in raw_strategy(5)) {
        let once = cyc_normalize(5, &raw);
        let twice = cyc_normalize(5, once.coeffs());
        prop_assert_eq!(once, twice);
    }

    #[test]
    fn multiplication_commutes_and_associates(
        a in raw_strategy(3), b in raw_strategy(3), c in raw_strategy(3)
    ) {
        let (a, b, c) = (cyc_normalize(3, &a), cyc_normalize(3, &b), cyc_normalize(3, &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!((&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &a * &b + &a * &c);
    }

    #[test]
    fn mul_zeta_matches_product(raw in raw_strategy(7), k in 0u32..14) {
        let a = cyc_normalize(7, &raw);
        prop_assert_eq!(a.mul_zeta(k), &a * &CycScalar::zeta_pow(7, k));
    }
}
