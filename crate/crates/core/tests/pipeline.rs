use harmonic_core::globalfield::{GlobalTestFunction, Place, DEFAULT_MAX_ENUM};
use harmonic_core::localfield::Window;
use harmonic_core::motivic::{class_add, euler_product, ConstructibleSet, MPoly, MotivicClass, Recipe};
use harmonic_core::scalars::{field_of_order, CycScalar};

#[test]
fn euler_coefficients_count_points() {
    // With a ≡ 1 on A¹ the coefficients count squarefree monic polynomials.
    let f = field_of_order(3).unwrap();
    let line = ConstructibleSet::affine(&f, 1);
    let s = euler_product(&line, &Recipe::one(&line), 4).unwrap();
    assert!(s.agree());
    let expected = [1, 3, 6, 18, 54];
    for (c, e) in s.lhs.iter().zip(expected) {
        assert_eq!(*c, CycScalar::from_integer(3, e));
    }
}

#[test]
fn classes_survive_serialization_and_sum() {
    let f = field_of_order(2).unwrap();
    let x = ConstructibleSet::parse(&f, &["x", "y"], &["x*y + 1"], &[]).unwrap();
    let h = MPoly::parse(&f, "x + y", &["x", "y"]).unwrap();
    let a = MotivicClass::generator(x, h).unwrap();
    let back = MotivicClass::from_json(&a.to_json()).unwrap();
    for d in 1..=3 {
        assert_eq!(back.specialize(d).unwrap(), a.specialize(d).unwrap());
        let double = class_add(&a, &back).unwrap();
        let v = a.specialize(d).unwrap();
        assert_eq!(double.specialize(d).unwrap(), &v + &v);
    }
}

#[test]
fn global_functions_survive_serialization() {
    let f = field_of_order(3).unwrap();
    let support = [
        (Place::parse(&f, "t").unwrap(), Window::new(1, 1)),
        (Place::Infinity, Window::new(1, 0)),
    ];
    for i in [0, 5, 26] {
        let phi = GlobalTestFunction::delta(&f, &support, 1, i).unwrap();
        let back = GlobalTestFunction::from_json(&phi.to_json()).unwrap();
        assert_eq!(back, phi);
        assert!(back.poisson_report(DEFAULT_MAX_ENUM).unwrap().equal);
    }
}
