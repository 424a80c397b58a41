use proptest::prelude::*;
use vertexcalc::quadratic::l_apply;
use vertexcalc::voa::{x_apply, y_apply};
use vertexcalc::{basis, FockVector, Rational};

fn basis_vector(max_weight: i64) -> impl Strategy<Value = FockVector> {
    let all = basis(max_weight);
    (0..all.len()).prop_map(move |i| FockVector::from_monomial(all[i].clone()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn modes_respect_grading(u in basis_vector(4), w in basis_vector(4), n in -6i64..6) {
        let out = y_apply(&u, &w, n);
        if !out.is_zero() {
            prop_assert_eq!(out.weight().unwrap(), u.weight().unwrap() + w.weight().unwrap() - n - 1);
        }
    }

    #[test]
    fn creation(v in basis_vector(5), n in 0i64..8) {
        let one = FockVector::vacuum();
        prop_assert!(y_apply(&v, &one, n).is_zero());
        prop_assert_eq!(y_apply(&v, &one, -1), v);
    }

    /// `Y(u,x)v = e^{x L(-1)} Y(v,-x)u`, with `L(-1)` from the normal-ordered quadratic.
    #[test]
    fn skew_symmetry(u in basis_vector(3), v in basis_vector(3), n in -4i64..6) {
        let top = u.weight().unwrap() + v.weight().unwrap() - 1;
        let mut rhs = FockVector::zero();
        for j in 0..=(top - n).max(0) {
            let mut term = y_apply(&v, &u, n + j);
            for _ in 0..j {
                term = l_apply(-1, &term);
            }
            let sign = if (n + j + 1) % 2 == 0 { Rational::one() } else { -Rational::one() };
            rhs.add_scaled(&term, &(sign / Rational::factorial(j as u32)));
        }
        prop_assert_eq!(y_apply(&u, &v, n), rhs);
    }

    #[test]
    fn x_modes_shift_by_weight(v in basis_vector(4), w in basis_vector(3), n in -5i64..5) {
        let k = v.weight().unwrap();
        prop_assert_eq!(x_apply(&v, &w, n), y_apply(&v, &w, n + k - 1));
    }

    #[test]
    fn bilinear(a in basis_vector(3), b in basis_vector(3), w in basis_vector(3), n in -4i64..4) {
        let c = Rational::new(3, 7);
        let mut sum = a.clone();
        sum.add_scaled(&b, &c);
        let mut expect = y_apply(&a, &w, n);
        expect.add_scaled(&y_apply(&b, &w, n), &c);
        prop_assert_eq!(y_apply(&sum, &w, n), expect);
    }
}
