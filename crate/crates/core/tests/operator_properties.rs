use fockpsi_core::linalg::{self, CVector};
use fockpsi_core::operators::{adjoint_on_kernel, apply, truncated_matrix, Image};
use fockpsi_core::sampling;
use fockpsi_core::{
    compute_moments, AffineMap, Complex64, KernelEvaluator, MultiIndex, Polynomial, WeightFunction, WeightSymbol,
};
use proptest::prelude::*;
use rand::Rng;

fn classical(n: usize) -> KernelEvaluator {
    let m = compute_moments(&WeightFunction::linear(1.0).unwrap(), 64, 1e-12).unwrap();
    KernelEvaluator::with_defaults(m, n).unwrap()
}

fn random_symbol(rng: &mut sampling::SampleRng, n: usize) -> WeightSymbol {
    match rng.gen_range(0..4) {
        0 => WeightSymbol::Zero,
        1 => WeightSymbol::Constant(sampling::complex_normal(rng)),
        2 => WeightSymbol::KernelMultiple {
            alpha: sampling::complex_normal(rng),
            center: sampling::point_in_ball(rng, n, 0.5),
        },
        _ => {
            let terms = (0..3).map(|_| {
                let e: Vec<u32> = (0..n).map(|_| rng.gen_range(0..2)).collect();
                (MultiIndex::new(e), sampling::complex_normal(rng) * 0.5)
            });
            WeightSymbol::Polynomial(Polynomial::from_terms(n, terms.collect::<Vec<_>>()).unwrap())
        }
    }
}

/// `M†` applied to the truncated `K_z` reproduces `conj(U(z)) K_{Γ(z)}` on the guard block.
#[test]
fn matrix_adjoint_acts_on_kernels() {
    let evs: Vec<KernelEvaluator> = (1..=2).map(classical).collect();
    let mut rng = sampling::rng(77);
    for trial in 0..50 {
        let ev = &evs[trial % 2];
        let n = ev.n();
        let u = random_symbol(&mut rng, n);
        let shift = if rng.gen::<bool>() { sampling::point_in_ball(&mut rng, n, 0.5) } else { CVector::zeros(n) };
        let g = AffineMap::new(sampling::contraction(&mut rng, n), shift).unwrap();
        let z = sampling::point_in_ball(&mut rng, n, 0.5);
        let t = truncated_matrix(&u, &g, ev, 14).unwrap();
        let lhs = t.matrix().adjoint() * t.kernel_vector(&z, ev).unwrap();
        let (scalar, point) = adjoint_on_kernel(&u, &g, &z, ev).unwrap();
        let rhs = t.kernel_vector(&point, ev).unwrap() * scalar;
        let block = t.block_len();
        let err = (0..block).map(|i| (lhs[i] - rhs[i]).norm()).fold(0.0, f64::max);
        assert!(err <= 1e-7, "trial {trial}: {err:e}");
        // The same identity evaluated as functions at a second point.
        let w = sampling::point_in_ball(&mut rng, n, 0.5);
        let basis_at_w = t.kernel_vector(&w, ev).unwrap();
        let f_w: Complex64 = (0..t.basis().len()).map(|i| lhs[i] * basis_at_w[i].conj()).sum();
        let exact = scalar * ev.kernel_eval(&point, &w).unwrap().value;
        assert!((f_w - exact).norm() <= 1e-7 * exact.norm().max(1.0), "trial {trial}");
    }
}

#[test]
fn linear_maps_preserve_degree_blocks_exactly() {
    let ev = classical(3);
    let mut rng = sampling::rng(8);
    let g = AffineMap::linear(sampling::contraction(&mut rng, 3)).unwrap();
    let t = truncated_matrix(&WeightSymbol::Constant(Complex64::new(0.3, 0.4)), &g, &ev, 6).unwrap();
    for (i, b) in t.index().iter().enumerate() {
        for (j, a) in t.index().iter().enumerate() {
            if a.degree() != b.degree() {
                assert_eq!(t.matrix()[(i, j)], Complex64::new(0.0, 0.0));
            }
        }
    }
    assert_eq!(t.basis().len(), 84);
}

#[test]
fn rotation_matrices_are_unitary_on_each_degree() {
    let ev = classical(2);
    let mut rng = sampling::rng(9);
    let g = AffineMap::linear(sampling::unitary(&mut rng, 2)).unwrap();
    let t = truncated_matrix(&WeightSymbol::one(), &g, &ev, 8).unwrap();
    assert!(linalg::unitary_residual(t.matrix()) < 1e-12);
}

fn small_poly(n: usize) -> impl Strategy<Value = Polynomial> {
    proptest::collection::vec(((0u32..3, 0u32..3), (-2.0f64..2.0, -2.0f64..2.0)), 0..5).prop_map(move |terms| {
        Polynomial::from_terms(
            n,
            terms.into_iter().map(|((a, b), (re, im))| (MultiIndex::new(vec![a, b]), Complex64::new(re, im))),
        )
        .unwrap()
    })
}

fn coefficient(x: f64) -> Complex64 {
    // Dyadic coefficients keep the comparison exact.
    Complex64::new((x * 8.0).round() / 8.0, 0.0)
}

proptest! {
    #[test]
    fn apply_is_linear(f in small_poly(2), h in small_poly(2), a in -2.0f64..2.0, b in -2.0f64..2.0) {
        let (a, b) = (coefficient(a), coefficient(b));
        let g = AffineMap::new(
            fockpsi_core::CMatrix::from_row_slice(2, 2, &[
                Complex64::new(0.5, 0.0), Complex64::new(0.25, 0.0),
                Complex64::new(0.0, -0.5), Complex64::new(0.125, 0.0),
            ]),
            CVector::from_vec(vec![Complex64::new(0.5, 0.0), Complex64::new(0.0, 0.25)]),
        ).unwrap();
        let u = WeightSymbol::Polynomial(Polynomial::variable(2, 0));
        let lhs = apply(&u, &g, &f.scale(a).add(&h.scale(b)), 12).unwrap();
        let (Image::Polynomial(fa), Image::Polynomial(ha)) =
            (apply(&u, &g, &f, 12).unwrap(), apply(&u, &g, &h, 12).unwrap()) else { unreachable!() };
        let Image::Polynomial(lhs) = lhs else { unreachable!() };
        prop_assert!(lhs.max_coefficient_distance(&fa.scale(a).add(&ha.scale(b))) <= 1e-12);
    }
}
