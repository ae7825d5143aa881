use num_rational::BigRational;
use proptest::prelude::*;

use dualpair::identify::{identify_group, random_group_table, sequences_up_to};
use dualpair::linalg::Matrix;
use dualpair::ring::{Elem, Ring};
use dualpair::validate::root_tolerance_log2;

fn small_matrix(n: usize) -> impl Strategy<Value = Vec<(i64, i64)>> {
    prop::collection::vec((-9i64..=9, 1i64..=5), n * n)
}

fn to_matrix(n: usize, v: &[(i64, i64)]) -> Matrix {
    let r = Ring::rationals();
    Matrix::from_fn(&r, n, n, |i, j| {
        let (a, b) = v[i * n + j];
        Elem::Rat(BigRational::new(a.into(), b.into()))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn inverse_transpose_is_an_involution(v in small_matrix(3)) {
        let m = to_matrix(3, &v);
        if let Ok(t) = m.inverse_transpose() {
            prop_assert_eq!(t.inverse_transpose().unwrap(), m.clone());
            prop_assert!(m.mul(&t.transpose()).unwrap().is_identity());
        } else {
            prop_assert!(m.rank().unwrap() < 3);
        }
    }

    #[test]
    fn tables_identify(idx in 0usize..40, seed in any::<u64>()) {
        let seqs = sequences_up_to(24);
        let d = &seqs[idx % seqs.len()];
        let t = random_group_table(d, seed);
        let id = identify_group(&t).expect("group table");
        prop_assert_eq!(&id.d, d);
        prop_assert!(id.reconstructs(&t));
    }

    #[test]
    fn tolerance_separates_roots(n in 2u64..200) {
        let tol = root_tolerance_log2(n);
        prop_assert!(tol.is_finite());
        // half the distance between neighbouring n-th roots of unity
        prop_assert!(tol <= (std::f64::consts::PI / n as f64).sin().log2() + 1e-12);
    }
}
