use num_complex::Complex64;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use hilbert_tomography::continuous::fock::displaced_number_amplitudes;
use hilbert_tomography::continuous::symplectic::{symplectic_tomogram, PositionGrid, SymplecticLabel, Wavefunction};
use hilbert_tomography::discrete::{reconstruct_discrete, DiscreteSetBundle};
use hilbert_tomography::generators::{generated_projector_set, FiducialOperator, UnitaryFamily};
use hilbert_tomography::io::{from_json_str, to_json_string};
use hilbert_tomography::operator_space::{hs_inner, norms};
use hilbert_tomography::random::{random_density, random_density_on_levels, random_hermitian};
use hilbert_tomography::spin::{spin_reconstruct, spin_tomogram, SphereQuadrature, SpinMode};
use hilbert_tomography::{Label, Operator};

fn operator(dim: usize) -> impl Strategy<Value = Operator> {
    prop::collection::vec((-10.0..10.0f64, -10.0..10.0f64), dim * dim).prop_map(move |v| {
        let entries: Vec<Complex64> = v.into_iter().map(|(re, im)| Complex64::new(re, im)).collect();
        Operator::from_row_slice(dim, &entries).unwrap()
    })
}

fn sized_operator() -> impl Strategy<Value = Operator> {
    (1usize..=6).prop_flat_map(operator)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn norms_are_ordered(a in sized_operator()) {
        let n = norms(&a).unwrap();
        let scale = n.trace_norm.max(1.0);
        prop_assert!(n.operator_norm <= n.hs_norm + 1e-12 * scale);
        prop_assert!(n.hs_norm <= n.trace_norm + 1e-12 * scale);
        prop_assert!((hs_inner(&a, &a).unwrap().re - n.hs_norm * n.hs_norm).abs() <= 1e-10 * scale * scale);
    }

    #[test]
    fn hs_inner_is_conjugate_symmetric(a in operator(3), b in operator(3)) {
        let ab = hs_inner(&a, &b).unwrap();
        let ba = hs_inner(&b, &a).unwrap();
        prop_assert!((ab - ba.conj()).norm() <= 1e-10 * (1.0 + ab.norm()));
    }

    #[test]
    fn discrete_round_trip_and_linearity(a in operator(4), b in operator(4), x in -3.0..3.0f64, y in -3.0..3.0f64) {
        let bundle = DiscreteSetBundle::new(4).unwrap();
        let back = reconstruct_discrete(&bundle, &bundle.tomogram(&a).unwrap()).unwrap();
        prop_assert!(back.max_abs_diff(&a) <= 1e-12 * a.max_abs().max(1.0));
        let combo = a.scale(Complex64::new(x, 0.0)).add(&b.scale(Complex64::new(0.0, y)));
        let t = bundle.tomogram(&combo).unwrap();
        let (ta, tb) = (bundle.tomogram(&a).unwrap(), bundle.tomogram(&b).unwrap());
        for k in 0..t.len() {
            let expected = ta.values[k] * x + tb.values[k] * Complex64::new(0.0, y);
            prop_assert!((t.values[k] - expected).norm() <= 1e-11 * (1.0 + expected.norm()));
        }
    }

    #[test]
    fn hermitian_operators_have_real_tomograms(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let h = random_hermitian(5, &mut rng);
        let bundle = DiscreteSetBundle::new(5).unwrap();
        prop_assert!(bundle.tomogram(&h).unwrap().is_real());
    }

    #[test]
    fn spin_reconstruction_is_exact(a in operator(2)) {
        let quad = SphereQuadrature::default();
        for mode in [SpinMode::KernelWeighted, SpinMode::ProjectorWeighted] {
            let back = spin_reconstruct(&quad, &spin_tomogram(&quad, &a, mode).unwrap(), mode).unwrap();
            prop_assert!(back.max_abs_diff(&a) <= 1e-12 * a.max_abs().max(1.0));
        }
    }

    #[test]
    fn operator_json_is_lossless(a in sized_operator(), scale in -300i32..300) {
        let a = a.scale(Complex64::new(10f64.powi(scale), 0.0));
        let back: Operator = from_json_str(&to_json_string(&a).unwrap()).unwrap();
        prop_assert_eq!(back, a);
    }

    #[test]
    fn generated_marginals_sum_to_one(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let t0 = FiducialOperator::new(random_hermitian(3, &mut rng)).unwrap();
        prop_assume!(t0.is_generic());
        let members = (0..3)
            .map(|k| {
                let h = random_hermitian(3, &mut rng);
                (Label::Index(k), Operator::new((h.matrix() * Complex64::new(0.0, 1.0)).exp()).unwrap())
            })
            .collect();
        let generated = generated_projector_set(&t0, &UnitaryFamily::new(members).unwrap()).unwrap();
        let rho = random_density(3, &mut rng);
        for s in generated.marginal_sums(&rho).unwrap() {
            prop_assert!((s - 1.0).abs() <= 1e-12);
        }
    }

    #[test]
    fn photon_tomograms_are_distributions(seed in any::<u64>(), r in 0.0..4.0f64, phi in 0.0..6.28f64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let rho = random_density_on_levels(12, 4, &mut rng);
        let amp = displaced_number_amplitudes(Complex64::from_polar(r, phi), 12, 160);
        let mut total = 0.0;
        for n in 0..160 {
            let v = amp.column(n);
            let t = (v.adjoint() * rho.matrix() * v)[(0, 0)].re;
            prop_assert!((-1e-14..=1.0 + 1e-12).contains(&t));
            total += t;
        }
        prop_assert!((total - 1.0).abs() <= 1e-10);
    }

    #[test]
    fn symplectic_tomograms_are_homogeneous(x in -3.0..3.0f64, mu in -2.0..2.0f64, nu in 0.2..2.0f64, lambda in 0.3..3.0f64) {
        // T(λX, λμ, λν) = T(X, μ, ν)/|λ|
        let psi = Wavefunction::number_state(PositionGrid::default(), 1).unwrap();
        let t = symplectic_tomogram(&psi, &SymplecticLabel::new(x, mu, nu).unwrap()).unwrap();
        let scaled = symplectic_tomogram(&psi, &SymplecticLabel::new(lambda * x, lambda * mu, lambda * nu).unwrap()).unwrap();
        prop_assert!((scaled - t / lambda).abs() <= 1e-8);
    }
}
