//! Property tests for the matrix layer.

use num_complex::Complex64;
use proptest::prelude::*;
use qslt::qmatrix::{hermitian_eigenvalues, kron, partial_trace};
use qslt::CMatrix;

fn entry() -> impl Strategy<Value = Complex64> {
    (-1.0..1.0f64, -1.0..1.0f64).prop_map(|(re, im)| Complex64::new(re, im))
}

fn matrix(dim: usize) -> impl Strategy<Value = CMatrix> {
    prop::collection::vec(entry(), dim * dim).prop_map(|v| CMatrix::from_row_major(v).unwrap())
}

fn any_matrix() -> impl Strategy<Value = CMatrix> {
    prop_oneof![matrix(1), matrix(2), matrix(4), matrix(8)]
}

fn hermitian(dim: usize) -> impl Strategy<Value = CMatrix> {
    matrix(dim).prop_map(|a| (&a + &a.dagger()).scale(0.5))
}

/// Determinant by partial-pivot LU; only used as an independent check.
fn det(a: &CMatrix) -> Complex64 {
    let n = a.dim();
    let mut m: Vec<Complex64> = a.as_slice().to_vec();
    let mut d = Complex64::new(1.0, 0.0);
    for k in 0..n {
        let pivot = (k..n)
            .max_by(|&i, &j| m[i * n + k].norm().total_cmp(&m[j * n + k].norm()))
            .unwrap();
        if m[pivot * n + k].norm() == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        if pivot != k {
            for c in 0..n {
                m.swap(k * n + c, pivot * n + c);
            }
            d = -d;
        }
        let p = m[k * n + k];
        d *= p;
        for r in k + 1..n {
            let f = m[r * n + k] / p;
            for c in k..n {
                let v = m[k * n + c];
                m[r * n + c] -= f * v;
            }
        }
    }
    d
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 128, ..ProptestConfig::default() })]

    #[test]
    fn dagger_is_an_involution(a in any_matrix()) {
        prop_assert_eq!(a.dagger().dagger(), a);
    }

    #[test]
    fn hs_norm_squared_is_spectral_sum(a in prop_oneof![matrix(2), matrix(4), matrix(8)]) {
        let gram = &a.dagger() * &a;
        let sum: f64 = hermitian_eigenvalues(&gram).unwrap().iter().sum();
        let hs2 = a.hs_norm().powi(2);
        prop_assert!((hs2 - sum).abs() <= 1e-10 * hs2.max(1.0), "{hs2} vs {sum}");
    }

    #[test]
    fn partial_trace_preserves_trace(a in prop_oneof![matrix(4), matrix(8)], which in 0usize..3) {
        let qubits = a.dim().trailing_zeros() as usize;
        let which = which % qubits;
        let reduced = partial_trace(&a, which).unwrap();
        prop_assert!((reduced.trace() - a.trace()).norm() < 1e-12);
    }

    #[test]
    fn kron_is_associative(a in matrix(2), b in matrix(2), c in matrix(2)) {
        let left = kron(&kron(&a, &b).unwrap(), &c).unwrap();
        let right = kron(&a, &kron(&b, &c).unwrap()).unwrap();
        prop_assert!(left.max_abs_diff(&right) < 1e-14);
    }

    #[test]
    fn kron_trace_is_multiplicative(a in matrix(2), b in matrix(4)) {
        let t = kron(&a, &b).unwrap().trace();
        prop_assert!((t - a.trace() * b.trace()).norm() < 1e-12);
    }

    #[test]
    fn eigenvalues_are_roots_of_the_characteristic_polynomial(
        a in prop_oneof![hermitian(1), hermitian(2), hermitian(4)]
    ) {
        let n = a.dim();
        for lambda in hermitian_eigenvalues(&a).unwrap() {
            let shifted = &a - &CMatrix::identity(n).unwrap().scale(lambda);
            prop_assert!(det(&shifted).norm() <= 1e-8, "λ = {lambda}");
        }
    }

    #[test]
    fn eigenvalues_are_invariant_under_unitary_conjugation(a in hermitian(4), i in 0usize..4, j in 0usize..4) {
        let u = kron(&CMatrix::pauli(i), &CMatrix::pauli(j)).unwrap();
        let mut before = hermitian_eigenvalues(&a).unwrap();
        let mut after = hermitian_eigenvalues(&a.conjugate_by(&u)).unwrap();
        before.sort_by(f64::total_cmp);
        after.sort_by(f64::total_cmp);
        for (x, y) in before.iter().zip(&after) {
            prop_assert!((x - y).abs() < 1e-10);
        }
    }
}

#[test]
fn lu_determinant_sanity() {
    let a = CMatrix::from_real_diagonal(&[2.0, 3.0, -1.0]).unwrap();
    assert!((det(&a) - Complex64::new(-6.0, 0.0)).norm() < 1e-15);
    assert!((det(&CMatrix::pauli(1)) + 1.0).norm() < 1e-15);
}
