use unimod::codes::{builtin_code, gleason_substitution, weight_enumerator, BuiltinCode};
use unimod::lattices::{
    builtin_lattice, construction_a, cusp_component, density, enumerate_shells, is_rootless,
    root_count, theta_series, theta_series_by_frame, BuiltinLattice, DEFAULT_NODE_BUDGET,
};
use unimod::qseries::{eisenstein_series, ExactRational};

#[test]
fn leech_shells_and_theta() {
    let leech = builtin_lattice(BuiltinLattice::Leech).unwrap();
    assert!(leech.is_even() && leech.is_unimodular());
    assert!(is_rootless(&leech).unwrap());
    let theta = theta_series(&leech, 4).unwrap();
    assert_eq!(theta.integer_coeffs().unwrap(), vec![1.into(), 0.into(), 196560.into()]);
    let split = cusp_component(&theta, 24).unwrap();
    assert_eq!(
        split.delta_coefficient,
        Some(-ExactRational::new(65520.into(), 691.into()))
    );
}

#[test]
fn leech_norm_six_fits_default_budget() {
    let leech = builtin_lattice(BuiltinLattice::Leech).unwrap();
    let s = enumerate_shells(&leech, 6).unwrap();
    assert!(s.complete, "{} nodes", s.nodes);
    assert!(s.nodes <= DEFAULT_NODE_BUDGET);
    assert_eq!(s.counts[6], 16773120);
    // Θ_Leech = E₁₂ − (65520/691)Δ at q³ as well.
    let theta = unimod::lattices::theta_from_shells(&s, 24).unwrap();
    cusp_component(&theta, 24).unwrap();
}

#[test]
fn construction_a_lattices() {
    let e8 = construction_a(&builtin_code(BuiltinCode::Hamming8).unwrap()).unwrap();
    let s = enumerate_shells(&e8, 4).unwrap();
    assert_eq!((s.counts[2], s.counts[4]), (240, 2160));

    let d16 = construction_a(&builtin_code(BuiltinCode::D16plus).unwrap()).unwrap();
    assert!(d16.is_even() && d16.is_unimodular());
    assert_eq!(root_count(&d16).unwrap(), 480);

    // The Niemeier lattice with root system A₁²⁴: 48 roots ±2eᵢ/√2.
    let golay = builtin_code(BuiltinCode::Golay24).unwrap();
    let a1 = construction_a(&golay).unwrap();
    assert!(a1.is_even() && a1.is_unimodular());
    assert_eq!(root_count(&a1).unwrap(), 48);
}

#[test]
fn theta_equals_gleason_image_for_shipped_codes() {
    for which in [BuiltinCode::Hamming8, BuiltinCode::D16plus] {
        let code = builtin_code(which).unwrap();
        let lattice = construction_a(&code).unwrap();
        let theta = theta_series(&lattice, 10).unwrap();
        let gleason = gleason_substitution(&weight_enumerator(&code).unwrap(), 5).unwrap();
        assert_eq!(theta.order(), 5);
        assert!(theta.agrees_with(&gleason), "{}", which.name());
    }
}

#[test]
fn golay_lattice_theta_two_routes() {
    let code = builtin_code(BuiltinCode::Golay24).unwrap();
    let lattice = construction_a(&code).unwrap();
    let gleason = gleason_substitution(&weight_enumerator(&code).unwrap(), 5).unwrap();
    let enumerated = theta_series(&lattice, 6).unwrap();
    let by_frame = theta_series_by_frame(&lattice, 5).unwrap();
    assert!(enumerated.agrees_with(&by_frame));
    assert!(by_frame.agrees_with(&gleason));
    assert_eq!(by_frame.order(), 5);
}

#[test]
fn sixteen_dimensional_thetas_coincide() {
    let e8 = builtin_lattice(BuiltinLattice::E8).unwrap();
    let e8e8 = builtin_lattice(BuiltinLattice::E8E8).unwrap();
    let d16 = builtin_lattice(BuiltinLattice::D16plus).unwrap();
    let t8 = theta_series(&e8, 6).unwrap();
    let t16a = theta_series(&e8e8, 6).unwrap();
    let t16b = theta_series(&d16, 6).unwrap();
    assert!(t8.agrees_with(&eisenstein_series(4, 3).unwrap()));
    assert!(t16a.agrees_with(&t8.pow(2)));
    assert!(t16a.agrees_with(&t16b));
    assert!(t16b.agrees_with(&eisenstein_series(4, 3).unwrap().pow(2)));
    for t in [&t16a, &t16b] {
        assert!(cusp_component(t, 16).unwrap().cusp.is_zero());
    }
}

#[test]
fn lattice_densities_are_ordered() {
    let e8 = density(&builtin_lattice(BuiltinLattice::E8).unwrap()).unwrap();
    let leech = density(&builtin_lattice(BuiltinLattice::Leech).unwrap()).unwrap();
    assert!((e8 - 0.253669507901048).abs() < 1e-12);
    // π¹² / 12!
    assert!((leech - std::f64::consts::PI.powi(12) / 479001600.0).abs() < 1e-15);
}
