//! Randomized invariants, exercised over arbitrary inputs rather than the
//! seeded suites in `acceptance.rs`.

use num_complex::Complex64;
use proptest::prelude::*;

use lcuwalk::stateprep::sqrt_conj;
use lcuwalk::walk::{build_walk, verify_block_encoding};
use lcuwalk::{rowtree, validate_hermitian, ComplexMatrix};

fn finite_component() -> impl Strategy<Value = f64> {
    prop_oneof![
        -10.0..10.0_f64,
        Just(0.0),
        Just(-1.0),
        Just(1.0),
        -1e-8..1e-8_f64,
    ]
}

proptest! {
    /// The branch convention must satisfy √(c)·(sqrt_conj(c))* = c for every
    /// complex number, including exact negative reals.
    #[test]
    fn sqrt_convention_reproduces_the_entry(re in finite_component(), im in finite_component()) {
        let c = Complex64::new(re, im);
        let fwd = lcuwalk::stateprep::sqrt_forward(c);
        let product = fwd * sqrt_conj(c).conj();
        let scale = c.norm().max(1.0);
        prop_assert!((product - c).norm() <= 1e-12 * scale);
    }

    /// Block encoding holds for arbitrary 4x4 Hermitian matrices, not just
    /// the seeded draws.
    #[test]
    fn block_encoding_for_arbitrary_hermitian(
        entries in proptest::collection::vec((finite_component(), finite_component()), 16),
    ) {
        let a = ComplexMatrix::from_fn(4, |i, j| {
            let (re, im) = entries[i * 4 + j];
            Complex64::new(re, im)
        });
        let sym = a.add(&a.adjoint()).scale(Complex64::new(0.5, 0.0));
        prop_assume!(sym.max_norm() > 1e-6);
        let h = validate_hermitian(&sym, 1e-12).unwrap();
        let w = build_walk(&rowtree::build(&h).unwrap()).unwrap();
        prop_assert!(verify_block_encoding(&w, &h) <= 1e-12);
    }

    /// Row trees stay internally consistent under arbitrary update sequences.
    #[test]
    fn rowtree_consistency_under_updates(
        updates in proptest::collection::vec(
            (0usize..4, 0usize..4, -5.0..5.0_f64, -5.0..5.0_f64),
            1..20,
        ),
    ) {
        let base = ComplexMatrix::identity(4);
        let h = validate_hermitian(&base, 1e-12).unwrap();
        let mut ds = rowtree::build(&h).unwrap();
        for (j, k, re, im) in updates {
            let v = if j == k {
                Complex64::new(re, 0.0)
            } else {
                Complex64::new(re, im)
            };
            let touched = rowtree::update_entry(&mut ds, j, k, v).unwrap();
            prop_assert_eq!(touched, 3); // log2(4) + 1
        }
        prop_assert!(rowtree::consistency_residual(&ds) <= 1e-12);
    }
}
