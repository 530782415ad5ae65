use mu_corona::measure::{make_measure, MeasureSpec, Preset};
use mu_corona::multiplier::{
    carleson_constant, multiplier_certificate, multiplier_norm_lb, pick_positivity, shift_norm,
};
use mu_corona::poly::CPoly;
use mu_corona::spaces::Space;
use mu_corona::{Complex64 as C64, QuadConfig};

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn measure(name: &str) -> MeasureSpec {
    make_measure(Preset::parse(name).unwrap()).unwrap()
}

#[test]
fn norm_lower_bounds_grow_with_degree() {
    let cfg = QuadConfig::default();
    let phi = CPoly::new(vec![c(0.2, -0.1), c(0.0, 0.6), c(-0.3, 0.0), c(0.1, 0.1)]);
    for name in ["hardy", "alpha:0.5", "atom:0,-1"] {
        let mu = measure(name);
        let mut prev = 0.0;
        for n in (0..=12).step_by(2) {
            let v = multiplier_norm_lb(&phi, &mu, n, &cfg).unwrap();
            assert!(v >= prev - 1e-10, "{name}: N={n} {v} < {prev}");
            prev = v;
        }
    }
    let nu = measure("hardy");
    let mut prev = 0.0;
    for n in 0..=10 {
        let v = carleson_constant(&nu, &measure("atom:1"), n, &cfg).unwrap().constant;
        assert!(v >= prev - 1e-10);
        prev = v;
    }
}

#[test]
fn norm_dominates_point_values() {
    // M_φ* K_w = conj(φ(w)) K_w, so ‖M_φ‖ ≥ |φ(w)| for every w; the finite
    // section approaches this from below as N grows.
    let cfg = QuadConfig::default();
    let phi = CPoly::new(vec![c(0.1, 0.0), c(0.5, 0.2), c(0.0, -0.3)]);
    let grid: Vec<C64> = (0..12).map(|k| C64::from_polar(0.6, 0.5 * k as f64)).collect();
    let sup = grid.iter().map(|&w| phi.eval(w).norm()).fold(0.0, f64::max);
    for name in ["dirichlet", "hardy", "atom:1"] {
        let v = multiplier_norm_lb(&phi, &measure(name), 20, &cfg).unwrap();
        assert!(v >= sup - 1e-6, "{name}: {v} < {sup}");
    }
}

#[test]
fn dual_shift_contracts_for_every_preset() {
    let cfg = QuadConfig::default();
    for name in ["hardy", "dirichlet", "alpha:0.5", "alpha:0.9", "atom:1", "atom:0.5,0.5,3"] {
        for n in [0, 3, 9, 15] {
            let v = shift_norm(Space::EmuDual, &measure(name), n, &cfg).unwrap_or_else(|e| panic!("{name} N={n}: {e}"));
            assert!(v <= 1.0 + 1e-8, "{name} N={n}: {v}");
        }
    }
}

#[test]
fn atomic_measures_accept_bounded_multipliers() {
    let cfg = QuadConfig::default();
    let mu = measure("atom:1");
    let phi = CPoly::new(vec![c(0.5, 0.0), c(0.5, 0.0)]);
    let cert = multiplier_certificate(&phi, &mu, 16, 512, &cfg).unwrap();
    assert!((cert.sup_boundary - 1.0).abs() < 1e-15);
    assert!(cert.sup_boundary_upper >= cert.sup_boundary);
    assert!(cert.carleson.constant.is_finite() && cert.carleson.constant < 2.0);
}

#[test]
fn pick_matrix_for_contractive_symbols() {
    let cfg = QuadConfig::default();
    let pts = [c(0.1, 0.3), c(-0.35, 0.05), c(0.2, -0.4), c(0.45, 0.1), c(-0.1, -0.2)];
    let mu = measure("dirichlet");
    let r = pick_positivity(Space::EmuDual, &mu, 20, &CPoly::z(), &pts, &cfg).unwrap();
    assert!(r.min_eigenvalue >= -1e-6);
    // a non-contractive symbol fails the test
    let big = CPoly::constant(c(1.5, 0.0));
    let r = pick_positivity(Space::EmuDual, &mu, 20, &big, &pts, &cfg).unwrap();
    assert!(r.min_eigenvalue < 0.0);
}
