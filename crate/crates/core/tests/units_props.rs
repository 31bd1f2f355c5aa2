use num_traits::ToPrimitive;
use proptest::prelude::*;

use normrec::numberfield::NumberField;
use normrec::units::{fundamental_unit_real_quadratic, unit_decompose, UnitSystem};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn decomposition_round_trip(w in -8i64..=8, neg in any::<bool>()) {
        let k = NumberField::new(&[-2, 0, 1]).unwrap();
        let sys = UnitSystem::new(&k, vec![k.from_ints(&[1, 1])]).unwrap();
        let zeta = if neg { -k.one() } else { k.one() };
        let u = sys.compose(&zeta, &[w]);
        let d = unit_decompose(&u, &sys).unwrap();
        prop_assert_eq!(&d.zeta, &zeta);
        prop_assert_eq!(&d.exponents, &vec![w]);
        prop_assert_eq!(unit_decompose(&u, &sys).unwrap(), d);
    }

    #[test]
    fn two_unit_round_trip(w1 in -5i64..=5, w2 in -5i64..=5, neg in any::<bool>()) {
        // Q(∛2): rank 1, so use the real cubic x³ − 3x − 1 (totally real, rank 2)
        let k = NumberField::new(&[-1, -3, 0, 1]).unwrap();
        let e1 = k.generator();
        let e2 = &k.generator() + &k.one();
        let sys = UnitSystem::new(&k, vec![e1, e2]).unwrap();
        let zeta = if neg { -k.one() } else { k.one() };
        let u = sys.compose(&zeta, &[w1, w2]);
        let d = unit_decompose(&u, &sys).unwrap();
        prop_assert_eq!(d.zeta, zeta);
        prop_assert_eq!(d.exponents, vec![w1, w2]);
    }
}

fn squarefree(d: i64) -> bool {
    (2..).take_while(|p| p * p <= d).all(|p| d % (p * p) != 0)
}

/// Exhaustive search for units `1 < (A + B√d)/2 < ε` over the half-integer
/// coordinates bounded by those of `ε`; units above 1 have `A, B > 0`.
#[test]
fn fundamental_units_are_minimal() {
    for d in (2i64..=60).filter(|&d| squarefree(d)) {
        let eps = fundamental_unit_real_quadratic(d).unwrap();
        let c = eps.coeffs();
        let ea = (&c[0] * num_rational::BigRational::from_integer(2.into())).to_integer().to_i64().unwrap();
        let eb = (&c[1] * num_rational::BigRational::from_integer(2.into())).to_integer().to_i64().unwrap();
        if ea as i128 * eb as i128 > 4_000_000 {
            continue;
        }
        let value = |a: i64, b: i64| (a as f64 + b as f64 * (d as f64).sqrt()) / 2.0;
        let ev = value(ea, eb);
        assert!(ev > 1.0);
        // ε itself must be a unit; this is an independent norm check
        let n = (ea as i128).pow(2) - d as i128 * (eb as i128).pow(2);
        assert_eq!(n.abs(), 4, "d = {d}");
        for a in 1..=ea {
            for b in 1..=eb {
                let n = (a as i128).pow(2) - d as i128 * (b as i128).pow(2);
                if n.abs() != 4 {
                    continue;
                }
                // half-integers are integers of the field only when d ≡ 1 mod 4 and A ≡ B mod 2
                let integral = if d % 4 == 1 { (a - b) % 2 == 0 } else { a % 2 == 0 && b % 2 == 0 };
                if integral {
                    let v = value(a, b);
                    assert!(!(v > 1.0 + 1e-9 && v < ev - 1e-9), "d = {d}: smaller unit ({a} + {b}√d)/2");
                }
            }
        }
    }
}
