use mu_corona::linalg::eigenvalues;
use mu_corona::measure::{make_measure, Atom, MeasureSpec, Preset};
use mu_corona::poly::CPoly;
use mu_corona::spaces::{
    cauchy_dual_transform, dmu_norm_sq, dmu_seminorm_sq, emu_norm_sq, gram_matrix, local_dirichlet, KernelApprox,
    LocalDirichletMethod, NormMode, Space,
};
use mu_corona::{Complex64 as C64, QuadConfig};
use nalgebra::DMatrix;
use proptest::prelude::*;

fn poly_strategy(max_degree: usize) -> impl Strategy<Value = CPoly> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 1..=max_degree + 1)
        .prop_map(|v| CPoly::new(v.into_iter().map(|(a, b)| C64::new(a, b)).collect()))
}

fn closed_disk_point() -> impl Strategy<Value = C64> {
    (0.0f64..=1.0, 0.0f64..std::f64::consts::TAU).prop_map(|(r, t)| C64::from_polar(r, t))
}

fn presets() -> Vec<MeasureSpec> {
    ["hardy", "dirichlet", "alpha:0.5", "alpha:0.9", "atom:1", "atom:0.3,-0.4,2"]
        .iter()
        .map(|p| make_measure(Preset::parse(p).unwrap()).unwrap())
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn shift_identity(g in poly_strategy(10), lambda in closed_disk_point()) {
        let cfg = QuadConfig::default();
        let b = LocalDirichletMethod::Boundary;
        let lhs = local_dirichlet(&g, lambda, b, &cfg).unwrap();
        let lg = g.backward_shift();
        let rhs = lg.eval(lambda).norm_sqr() + local_dirichlet(&lg, lambda, b, &cfg).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-10 * lhs.max(1e-300));
    }

    #[test]
    fn inner_product_is_sesquilinear(p in poly_strategy(6), q in poly_strategy(6), a in (-2.0f64..2.0, -2.0f64..2.0)) {
        let cfg = QuadConfig::default();
        let mu = make_measure(Preset::Atoms(vec![Atom::new(C64::new(0.0, 1.0), 0.7)])).unwrap();
        let g = gram_matrix(Space::Dmu, &mu, 6, &cfg).unwrap();
        let a = C64::new(a.0, a.1);
        let lhs = g.inner(&(&p.scale(a) + &q), &q);
        let rhs = a * g.inner(&p, &q) + g.inner(&q, &q);
        prop_assert!((lhs - rhs).norm() <= 1e-10 * (1.0 + rhs.norm()));
        prop_assert!((g.inner(&p, &q) - g.inner(&q, &p).conj()).norm() <= 1e-12 * (1.0 + g.inner(&p, &q).norm()));
    }
}

#[test]
fn u_and_measure_modes_agree() {
    let cfg = QuadConfig::default();
    let mut state = 1u64;
    let mut next = || {
        state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        ((state >> 11) as f64 / (1u64 << 53) as f64) * 2.0 - 1.0
    };
    for mu in presets() {
        for d in [1, 4, 7, 10] {
            let f = CPoly::new((0..=d).map(|_| C64::new(next(), next())).collect());
            let u = dmu_norm_sq(&f, &mu, NormMode::U, &cfg).unwrap();
            let m = dmu_norm_sq(&f, &mu, NormMode::Measure, &cfg).unwrap();
            assert!((u - m).abs() <= 1e-6 * m, "{}: U {u} vs measure {m}", mu.label);
        }
    }
}

#[test]
fn u_seminorm_dominates_v_seminorm() {
    // log x ≥ 1 − 1/x makes U ≥ V pointwise; the ratio stays bounded on the
    // test family (the reported constant is empirical).
    let cfg = QuadConfig::default();
    for mu in presets() {
        let mut worst: f64 = 1.0;
        for k in 1..=10 {
            let f = CPoly::monomial(k, C64::new(1.0, 0.0));
            let u = dmu_seminorm_sq(&f, &mu, NormMode::U, &cfg).unwrap();
            let v = dmu_seminorm_sq(&f, &mu, NormMode::V, &cfg).unwrap();
            assert!(u / v >= 1.0 - 1e-8, "{}: k={k} {u} < {v}", mu.label);
            worst = worst.max(u / v);
        }
        assert!(worst < 10.0, "{}: {worst}", mu.label);
    }
}

#[test]
fn adding_an_atom_never_decreases_the_norm() {
    let cfg = QuadConfig::default();
    let f = CPoly::new(vec![C64::new(0.3, 0.0), C64::new(0.0, 1.0), C64::new(-0.5, 0.2), C64::new(0.1, 0.1)]);
    for mu in presets() {
        let base = dmu_norm_sq(&f, &mu, NormMode::V, &cfg).unwrap();
        for atom in [Atom::new(C64::new(0.0, -1.0), 0.5), Atom::new(C64::new(0.2, 0.6), 1.0)] {
            let more = dmu_norm_sq(&f, &mu.with_atom(atom), NormMode::V, &cfg).unwrap();
            assert!(more >= base - 1e-12, "{}: {more} < {base}", mu.label);
        }
    }
}

#[test]
fn emu_sandwich_with_envelope_constants() {
    // V ≥ m(1 − |z|²)/4 gives emu ≤ max(1, 4/m)·H²; the sharp upper envelope
    // V ≤ 4m/(1 − |z|²) gives emu ≥ |f(0)|² + (1/4m)∫|f′|²(1 − |z|²)³ dA.
    let cfg = QuadConfig::default();
    for mu in presets() {
        let m = mu.total_mass();
        for k in 0..8usize {
            let f = CPoly::new((0..=k).map(|j| C64::new(1.0 / (1 + j) as f64, 0.5)).collect());
            let e = emu_norm_sq(&f, &mu, &cfg).unwrap();
            assert!(e <= (4.0 / m).max(1.0) * f.h2_norm_sq() * (1.0 + 1e-10), "{}", mu.label);
            // ∫|z^{j-1}|²(1 − |z|²)³ dA = 6/(j(j+1)(j+2)(j+3))
            let weighted: f64 = (1..=k)
                .map(|j| (j * j) as f64 * f.coeff(j).norm_sqr() * 6.0 / (j * (j + 1) * (j + 2) * (j + 3)) as f64)
                .sum();
            assert!(e >= f.coeff(0).norm_sqr() + weighted / (4.0 * m) - 1e-12, "{}", mu.label);
        }
    }
}

#[test]
fn truncated_kernels_are_positive() {
    let cfg = QuadConfig::default();
    let pts = [C64::new(0.1, 0.7), C64::new(-0.5, 0.2), C64::new(0.3, -0.3), C64::new(0.8, 0.1), C64::new(-0.2, -0.6)];
    for mu in presets() {
        for space in [Space::H2, Space::Dmu, Space::Emu, Space::EmuDual] {
            let k = KernelApprox::new(&gram_matrix(space, &mu, 20, &cfg).unwrap()).unwrap();
            let m = DMatrix::from_fn(5, 5, |i, j| k.eval(pts[j], pts[i]));
            assert!((&m - m.adjoint()).norm() <= 1e-10 * m.norm());
            let lo = eigenvalues(&m)[0];
            assert!(lo >= -1e-10 * m.norm(), "{} {space}: {lo}", mu.label);
        }
    }
}

#[test]
fn dual_transform_matches_gram_columns() {
    // (Uf)(λ) = Σ_n λ^n ⟨f, z^n⟩, truncated where |λ|^n is negligible.
    let cfg = QuadConfig::default();
    let f = CPoly::new(vec![C64::new(0.4, -0.2), C64::new(1.0, 0.3), C64::new(0.0, 0.8), C64::new(-0.6, 0.0)]);
    let lambda = C64::new(0.25, -0.3);
    for mu in presets() {
        let n = 60;
        let g = gram_matrix(Space::Dmu, &mu, n, &cfg).unwrap();
        let want: C64 =
            (0..=n).map(|k| g.inner(&f, &CPoly::monomial(k, C64::new(1.0, 0.0))) * lambda.powu(k as u32)).sum();
        let got = cauchy_dual_transform(&f, &mu, lambda, &cfg).unwrap();
        assert!((got - want).norm() <= 1e-10 * want.norm(), "{}: {got} vs {want}", mu.label);
    }
}

#[test]
fn grams_are_hermitian_positive_and_diagonal_for_radial_measures() {
    let cfg = QuadConfig::default();
    for mu in presets() {
        for space in [Space::Dmu, Space::Emu, Space::EmuDual] {
            let g = gram_matrix(space, &mu, 12, &cfg).unwrap();
            assert!(g.hermitian_defect <= 1e-12 && g.min_eigenvalue > 0.0, "{} {space}", mu.label);
        }
    }
    for name in ["hardy", "dirichlet", "alpha:0.3"] {
        let mu = make_measure(Preset::parse(name).unwrap()).unwrap();
        let g = gram_matrix(Space::EmuDual, &mu, 12, &cfg).unwrap();
        for j in 0..=12 {
            for k in 0..=12 {
                if j != k {
                    assert!(g.matrix[(j, k)].norm() <= 1e-10);
                }
            }
        }
    }
}
