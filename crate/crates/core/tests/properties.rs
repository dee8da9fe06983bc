use proptest::prelude::*;

use risewell_core::exponent::{symanzik_rotate, Direction, EnergyValue, ExponentParam, Frame, SolverConfig, potential_value, pt_potential_value};
use risewell_core::mp::Ctx;
use risewell_core::oracles::{complex_log_gamma, gamma, quadratic_scattering};
use risewell_core::scattering::{scattering_function, unit_defect};
use risewell_core::series::FrobeniusSolution;
use risewell_core::exponent::{Branch, Sigma};

fn exponents() -> impl Strategy<Value = (i64, i64)> {
    prop_oneof![Just((5, 2)), Just((3, 1)), Just((11, 4)), Just((4, 1)), Just((7, 1)), Just((6, 1))]
}

proptest! {
    #[test]
    fn potential_is_odd(x in -8.0f64..8.0, (p, q) in exponents()) {
        let a = ExponentParam::new(p, q).unwrap();
        prop_assert_eq!(potential_value(&a, -x), -potential_value(&a, x));
        let v = pt_potential_value(&a, x);
        prop_assert_eq!(v.re, 0.0);
        prop_assert_eq!(v.im, potential_value(&a, x));
    }

    #[test]
    fn exponent_is_reduced(p in 1i64..40, q in 1i64..40, k in 1i64..5) {
        let a = ExponentParam::new(p, q);
        let b = ExponentParam::new(k * p, k * q);
        match (a, b) {
            (Ok(a), Ok(b)) => {
                prop_assert_eq!(a, b);
                prop_assert_eq!(a.nu_twice(2) - a.nu_twice(1), 4 * a.q() as i64);
            }
            (Err(_), Err(_)) => {}
            _ => prop_assert!(false, "normalization changed validity"),
        }
    }

    #[test]
    fn rotation_round_trip(re in -30.0f64..30.0, im in -10.0f64..10.0, (p, q) in exponents()) {
        let ctx = Ctx::with_digits(30);
        let a = ExponentParam::new(p, q).unwrap();
        let e = EnergyValue { value: ctx.complex(re, im), frame: Frame::Physical };
        let pt = symanzik_rotate(&a, &e, Direction::ToPt, &ctx).unwrap();
        prop_assert!((&pt.value.abs() - &e.value.abs()).abs().to_f64() < 1e-25 * (1.0 + e.value.abs_f64()));
        let back = symanzik_rotate(&a, &pt, Direction::ToPhysical, &ctx).unwrap();
        prop_assert_eq!(back.frame, Frame::Physical);
        prop_assert!((&back.value - &e.value).abs_f64() < 1e-25 * (1.0 + e.value.abs_f64()));
        prop_assert!(symanzik_rotate(&a, &pt, Direction::ToPt, &ctx).is_err());
    }

    #[test]
    fn gamma_recurrence(re in -6.0f64..8.0, im in 0.05f64..6.0) {
        let ctx = Ctx::with_digits(30);
        let z = ctx.complex(re, im);
        let z1 = &z + &ctx.cone();
        let lhs = gamma(&z1, &ctx).unwrap();
        let rhs = &z * &gamma(&z, &ctx).unwrap();
        prop_assert!((&lhs - &rhs).abs_f64() < 1e-22 * lhs.abs_f64());
        // log Gamma is the principal branch: its imaginary part matches arg Gamma mod 2 pi
        let lg = complex_log_gamma(&z, &ctx).unwrap();
        let back = lg.exp(&ctx);
        prop_assert!((&back - &gamma(&z, &ctx).unwrap()).abs_f64() < 1e-22 * back.abs_f64());
    }

    #[test]
    fn frobenius_recurrence_residual(re in -20.0f64..20.0, im in -5.0f64..5.0, (p, q) in exponents(), pt in any::<bool>(), i in 1usize..=2) {
        let ctx = Ctx::with_digits(30);
        let a = ExponentParam::new(p, q).unwrap();
        let branch = if pt { Branch::pt(Sigma::Plus) } else { Branch::physical(Sigma::Minus) };
        let mut s = FrobeniusSolution::new(&a, branch, i, &ctx.complex(re, im), &ctx).unwrap();
        s.extend_to(120).unwrap();
        prop_assert!(s.max_residual() < 1e-26);
    }

    #[test]
    fn quadratic_oracle_is_unitary(e in -12.0f64..14.0) {
        let ctx = Ctx::with_digits(30);
        let s = quadratic_scattering(&ctx.complex(e, 0.0), &ctx).unwrap().s;
        prop_assert!(unit_defect(&s) < 1e-25);
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 6, ..ProptestConfig::default() })]

    #[test]
    fn engine_is_unitary_on_the_axis(e in -5.0f64..15.0, (p, q) in prop_oneof![Just((3, 1)), Just((4, 1)), Just((5, 2))]) {
        let ctx = Ctx::with_digits(30);
        let cfg = SolverConfig::with_precision(30);
        let a = ExponentParam::new(p, q).unwrap();
        let r = scattering_function(&a, &ctx.complex(e, 0.0), &cfg, &ctx).unwrap();
        prop_assert!(r.unitarity_residual.unwrap() < 1e-15);
        prop_assert!(r.determinant_residual < 1e-10);
    }

    #[test]
    fn functional_equation_off_the_axis(re in -4.0f64..12.0, im in 0.1f64..1.5) {
        let ctx = Ctx::with_digits(30);
        let cfg = SolverConfig::with_precision(30);
        let a = ExponentParam::new(3, 1).unwrap();
        let e = ctx.complex(re, im);
        let s = scattering_function(&a, &e, &cfg, &ctx).unwrap().s;
        let t = scattering_function(&a, &e.conj(), &cfg, &ctx).unwrap().s;
        let prod = &s * &t.conj();
        prop_assert!((&prod - &ctx.cone()).abs_f64() < 1e-15);
    }
}
