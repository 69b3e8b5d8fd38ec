use hfock_core::bargmann::{bargmann_a, hermite_psi};
use hfock_core::expint::{e1, en_value};
use hfock_core::hfock::{EntireSeries, HormanderFock};
use hfock_core::lerch::phi;
use hfock_core::moments::{eta_closed_form, eta_table};
use hfock_core::{EntireSeries64, Error, HormanderFock64, C64};
use num_complex::Complex;

#[test]
fn f32_and_f64_agree() {
    for n in [0usize, 1, 2, 5, 10] {
        let a = eta_closed_form::<f64>(n).unwrap();
        let b = eta_closed_form::<f32>(n).unwrap();
        assert!(((b as f64) - a).abs() <= 1e-5 * a, "n={n}: {a} vs {b}");
    }
    assert!((e1(1.0f32).unwrap() - 0.219_383_93).abs() < 1e-6);
    assert!((en_value(3, 2.0f32).unwrap().value as f64 - en_value(3, 2.0f64).unwrap().value).abs() < 1e-6);

    let s32 = HormanderFock::<f32>::new().unwrap();
    let s64 = HormanderFock64::new().unwrap();
    let e32 = s32.eval_e(Complex::new(1.0f32, 0.5), 1e-6).unwrap();
    let e64 = s64.eval_e(C64::new(1.0, 0.5), 1e-12).unwrap();
    assert!(((e32.re as f64) - e64.re).abs() < 1e-4 * e64.norm());

    let h = hermite_psi::<f32>(10, 0.3).unwrap();
    assert_eq!(h.values.len(), 11);
    let a = bargmann_a(&s32, Complex::new(0.5f32, 0.0), 1.0, 1e-6).unwrap();
    assert!((a.re - 1.545_252_2).abs() < 1e-5);
    let p = phi(1, Complex::new(0.5f32, 0.0), 1e-6).unwrap();
    assert!((p.re - 2.0 * std::f32::consts::LN_2).abs() < 1e-5);
}

#[test]
fn reproducing_property_through_the_public_api() {
    let space = HormanderFock64::new().unwrap();
    let f: EntireSeries64 = EntireSeries::new(vec![C64::new(1.0, 0.0), C64::new(0.0, 2.0), C64::new(-0.5, 0.25)], "f").unwrap();
    let z = C64::new(0.7, -0.4);
    let (inner, direct) = space.reproducing_check(&f, z).unwrap();
    assert!((inner - direct).norm() < 1e-12);
}

#[test]
fn table_and_closed_form_agree() {
    let t = eta_table::<f64>(40, 1e-12).unwrap();
    for n in 0..=40 {
        let want = eta_closed_form::<f64>(n).unwrap();
        assert!((t.eta[n].unwrap() - want).abs() <= 1e-12 * want);
    }
}

#[test]
fn errors_are_typed() {
    match phi(1, C64::new(1.5, 0.0), 1e-12) {
        Err(Error::Domain(_)) => {}
        other => panic!("expected a domain error, got {other:?}"),
    }
}
