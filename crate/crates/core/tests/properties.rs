use num_complex::Complex64;
use proptest::prelude::*;
use wehrl_core::channels::HermitianOperator;
use wehrl_core::fock::{apply_ladder, coherent_vector, enumerate_basis, Direction, Ladder};
use wehrl_core::linalg::{inner, CMatrix};
use wehrl_core::majorization::{
    default_tolerance, karamata_gap, majorizes, ConcaveFn, SpectrumSequence, Verdict,
};
use wehrl_core::random::{random_density, random_state, random_unitary, sample_haar_state, stream};
use wehrl_core::rep::{symmetric_power, weight_generator, GroupElement};
use wehrl_core::wehrl::wehrl_integral_mc;

fn cdiff(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm()
}

fn mdiff(a: &CMatrix, b: &CMatrix) -> f64 {
    a.sub(b).unwrap().max_abs()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ladder_operators_are_adjoint(n in 1usize..=4, m in 0usize..=4, seed in any::<u64>()) {
        let mut rng = stream(seed, "adj", 0);
        let lo = enumerate_basis(n, m).unwrap();
        let hi = lo.at_level(m + 1).unwrap();
        let phi = random_state(&lo, &mut rng);
        let psi = random_state(&hi, &mut rng);
        let w = sample_haar_state(n, &mut rng);
        let up = apply_ladder(Ladder::Create, Direction::Vector(&w), &phi).unwrap();
        let down = apply_ladder(Ladder::Annihilate, Direction::Vector(&w), &psi).unwrap();
        prop_assert!(cdiff(up.inner(&psi).unwrap(), phi.inner(&down).unwrap()) < 1e-12);
    }

    #[test]
    fn coherent_overlap_is_power_of_inner_product(n in 1usize..=4, m in 0usize..=6, seed in any::<u64>()) {
        let mut rng = stream(seed, "overlap", 0);
        let s = enumerate_basis(n, m).unwrap();
        let u = sample_haar_state(n, &mut rng);
        let v = sample_haar_state(n, &mut rng);
        let lhs = coherent_vector(&s, &u).unwrap().inner(&coherent_vector(&s, &v).unwrap()).unwrap();
        prop_assert!(cdiff(lhs, inner(&u, &v).powi(m as i32)) < 1e-12);
    }

    #[test]
    fn symmetric_power_is_a_homomorphism(n in 1usize..=3, m in 0usize..=4, seed in any::<u64>()) {
        let mut rng = stream(seed, "hom", 0);
        let s = enumerate_basis(n, m).unwrap();
        let u = random_unitary(n, &mut rng);
        let v = random_unitary(n, &mut rng);
        let uv = u.matmul(&v).unwrap();
        let pi = |x: &CMatrix| symmetric_power(&s, &GroupElement::unitary(x.clone()).unwrap()).unwrap();
        prop_assert!(mdiff(&pi(&uv), &pi(&u).matmul(&pi(&v)).unwrap()) < 1e-11);
    }

    #[test]
    fn ladder_covariance(n in 1usize..=3, m in 0usize..=3, seed in any::<u64>()) {
        let mut rng = stream(seed, "cov", 0);
        let s = enumerate_basis(n, m).unwrap();
        let big = s.at_level(m + 1).unwrap();
        let u = random_unitary(n, &mut rng);
        let g = GroupElement::unitary(u.clone()).unwrap();
        let psi = random_state(&s, &mut rng);
        let w = sample_haar_state(n, &mut rng);
        let uw = u.mul_vec(&w).unwrap();
        let lhs = symmetric_power(&big, &g).unwrap()
            .mul_vec(apply_ladder(Ladder::Create, Direction::Vector(&w), &psi).unwrap().coeffs()).unwrap();
        let moved = wehrl_core::StateVector::new(s.clone(), symmetric_power(&s, &g).unwrap().mul_vec(psi.coeffs()).unwrap()).unwrap();
        let rhs = apply_ladder(Ladder::Create, Direction::Vector(&uw), &moved).unwrap();
        let err = lhs.iter().zip(rhs.coeffs()).map(|(a, b)| cdiff(*a, *b)).fold(0.0, f64::max);
        prop_assert!(err < 1e-11);
    }

    #[test]
    fn weight_generators_commute_like_matrix_units(n in 1usize..=3, m in 0usize..=3,
                                                   i in 0usize..3, j in 0usize..3, k in 0usize..3, l in 0usize..3) {
        prop_assume!(i < n && j < n && k < n && l < n);
        let s = enumerate_basis(n, m).unwrap();
        let e = |a, b| weight_generator(&s, a, b).unwrap();
        let lhs = e(i, j).matmul(&e(k, l)).unwrap().sub(&e(k, l).matmul(&e(i, j)).unwrap()).unwrap();
        let mut rhs = CMatrix::zeros(s.dim(), s.dim());
        if j == k {
            rhs.add_scaled(&e(i, l), 1.0).unwrap();
        }
        if l == i {
            rhs.add_scaled(&e(k, j), -1.0).unwrap();
        }
        prop_assert!(mdiff(&lhs, &rhs) < 1e-12);
    }

    /// Averaging over permutations can only flatten a vector.
    #[test]
    fn doubly_stochastic_images_are_majorized(y in proptest::collection::vec(0.0f64..1.0, 2..12),
                                              mix in proptest::collection::vec(0.0f64..1.0, 1..5),
                                              seed in any::<u64>()) {
        let n = y.len();
        let mut rng = stream(seed, "perm", 0);
        let total: f64 = mix.iter().sum::<f64>() + 1e-3;
        let mut image = vec![0.0; n];
        for &w in mix.iter().chain(std::iter::once(&1e-3)) {
            let mut perm: Vec<usize> = (0..n).collect();
            rand::seq::SliceRandom::shuffle(&mut perm[..], &mut rng);
            for (t, &p) in perm.iter().enumerate() {
                image[t] += w / total * y[p];
            }
        }
        let x = SpectrumSequence::from_values(y.clone());
        let z = SpectrumSequence::from_values(image);
        let r = majorizes(&x, &z, default_tolerance(x.total())).unwrap();
        prop_assert!(r.verdict != Verdict::No);
        for f in ConcaveFn::builtin() {
            let xs = x.scaled(1.0 / n as f64);
            let zs = z.scaled(1.0 / n as f64);
            prop_assert!(karamata_gap(&xs, &zs, &f).unwrap() >= -1e-12);
        }
    }

    /// Concave tables agree with majorization in the Karamata direction.
    #[test]
    fn karamata_holds_for_random_tables(slopes in proptest::collection::vec(-3.0f64..3.0, 1..8),
                                        y in proptest::collection::vec(0.0f64..1.0, 2..10)) {
        let mut slopes = slopes;
        slopes.sort_by(|a, b| b.total_cmp(a));
        let step = 1.0 / slopes.len() as f64;
        let mut points = vec![(0.0, 0.0)];
        for (t, s) in slopes.iter().enumerate() {
            let (x0, y0) = points[t];
            let x1 = if t + 1 == slopes.len() { 1.0 } else { x0 + step };
            points.push((x1, y0 + s * (x1 - x0)));
        }
        let f = ConcaveFn::table(points).unwrap();
        let n = y.len();
        let sum: f64 = y.iter().sum::<f64>().max(1e-9);
        let y: Vec<f64> = y.iter().map(|v| v / sum).collect();
        // the vector concentrated on the largest entry majorizes y
        let mut top = vec![0.0; n];
        top[0] = 1.0;
        let x = SpectrumSequence::from_values(top);
        let ys = SpectrumSequence::from_values(y);
        prop_assert!(karamata_gap(&x, &ys, &f).unwrap() >= -1e-12);
    }
}

#[test]
fn wehrl_integral_is_unitarily_invariant() {
    let f = ConcaveFn::Entropy;
    for (t, (n, m)) in [(2usize, 1usize), (2, 3), (3, 2)].into_iter().enumerate() {
        let mut rng = stream(31, "inv", t as u64);
        let s = enumerate_basis(n, m).unwrap();
        let rho = random_density(&s, &mut rng);
        let pu = symmetric_power(&s, &GroupElement::unitary(random_unitary(n, &mut rng)).unwrap()).unwrap();
        let moved = rho.conjugated(&pu).unwrap();
        let a = wehrl_integral_mc(&rho, &f, 20_000, 100 + t as u64).unwrap();
        let b = wehrl_integral_mc(&moved, &f, 20_000, 200 + t as u64).unwrap();
        let se = (a.stderr * a.stderr + b.stderr * b.stderr).sqrt();
        assert!((a.mean - b.mean).abs() <= 3.0 * se, "{a:?} {b:?}");
    }
}

#[test]
fn husimi_integrates_to_inverse_dimension() {
    let id = ConcaveFn::Affine { slope: 1.0, intercept: 0.0 };
    for (t, (n, m)) in [(2usize, 2usize), (3, 1), (3, 2)].into_iter().enumerate() {
        let s = enumerate_basis(n, m).unwrap();
        let rho = random_density(&s, &mut stream(32, "norm", t as u64));
        let est = wehrl_integral_mc(&rho, &id, 20_000, 300 + t as u64).unwrap();
        assert!((est.mean - 1.0 / s.dim() as f64).abs() <= 3.0 * est.stderr, "{est:?}");
    }
    let s = enumerate_basis(2, 1).unwrap();
    let u = [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)];
    let coh = HermitianOperator::pure(&coherent_vector(&s, &u).unwrap());
    let est = wehrl_integral_mc(&coh, &ConcaveFn::Entropy, 50_000, 7).unwrap();
    assert!((est.mean - 0.25).abs() <= 3.0 * est.stderr, "{est:?}");
}

#[test]
fn sphere_moments() {
    let samples = 100_000u64;
    let (n, m) = (3usize, 2usize);
    let v = sample_haar_state(n, &mut stream(33, "v", 0));
    let mut a = Vec::with_capacity(samples as usize);
    let mut b = Vec::with_capacity(samples as usize);
    for i in 0..samples {
        let u = sample_haar_state(n, &mut stream(33, "moments", i));
        a.push(u[0].norm_sqr());
        b.push(inner(&u, &v).norm_sqr().powi(m as i32));
    }
    let est = |xs: &[f64]| wehrl_core::wehrl::MonteCarloEstimate::from_samples(xs, 33).unwrap();
    let ea = est(&a);
    assert!((ea.mean - 1.0 / n as f64).abs() <= 3.0 * ea.stderr);
    let eb = est(&b);
    assert!((eb.mean - 1.0 / 6.0).abs() <= 3.0 * eb.stderr);
}
