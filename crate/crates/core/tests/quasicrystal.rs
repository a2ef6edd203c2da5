use std::f64::consts::PI;
use unimod::quasicrystal::*;

fn spectrum(k: u32, lambda: f64) -> Vec<f64> {
    let w = fibonacci_word(k).unwrap();
    tridiag_eigenvalues(&fib_hamiltonian(&w, lambda).unwrap(), 1e-12).unwrap()
}

#[test]
fn free_chain_of_a_thousand_sites() {
    let n = 1000;
    let t = TridiagonalOperator::new(vec![0.0; n], vec![1.0; n - 1]).unwrap();
    let e = tridiag_eigenvalues(&t, 1e-12).unwrap();
    assert_eq!(e.len(), n);
    for (i, ev) in e.iter().enumerate() {
        let exact = 2.0 * (PI * (n - i) as f64 / (n + 1) as f64).cos();
        assert!((ev - exact).abs() < 1e-10);
    }
}

#[test]
fn widest_gaps_carry_golden_labels() {
    let e = spectrum(16, 1.0);
    assert_eq!(e.len(), 987);
    let gaps = gap_labels(&e, 0.05);
    assert!(gaps.len() >= 3);
    for g in &gaps[..3] {
        assert!(g.deviation < 0.01, "{g:?}");
    }
    let mut top: Vec<f64> = gaps[..2].iter().map(|g| g.ids).collect();
    top.sort_by(f64::total_cmp);
    assert!((top[0] - 0.382).abs() < 1e-3 && (top[1] - 0.618).abs() < 1e-3);
}

#[test]
fn unfolded_spacings() {
    let e = spectrum(16, 1.0);
    let h = spacing_histogram(&e, 30, DEFAULT_UNFOLDING_WINDOW).unwrap();
    assert!((h.mean - 1.0).abs() < 0.01);
    assert_eq!(h.counts.iter().sum::<usize>(), e.len() - 1);
    let big = spectrum(19, 1.0);
    assert_eq!(big.len(), 4181);
    let h = spacing_histogram(&big, 30, DEFAULT_UNFOLDING_WINDOW).unwrap();
    assert!(h.variance > 1.0, "{}", h.variance);
}

#[test]
fn band_measure_thins_with_word_order() {
    let measures: Vec<f64> = (10..=16)
        .map(|k| {
            let e = spectrum(k, 1.0);
            band_measure(&e, DEFAULT_BAND_FACTOR * mean_level_spacing(&e))
        })
        .collect();
    for w in measures.windows(2) {
        assert!(w[1] < w[0], "{measures:?}");
    }
}

#[test]
fn counts_bracket_every_spectrum() {
    for k in [8, 12, 15] {
        for lambda in [0.0, 0.5, 2.0] {
            let w = fibonacci_word(k).unwrap();
            let t = fib_hamiltonian(&w, lambda).unwrap();
            let (lo, hi) = t.spectral_bounds();
            assert_eq!(t.count_below(lo), 0);
            assert_eq!(t.count_below(hi), w.len());
            assert_eq!(tridiag_eigenvalues(&t, 1e-10).unwrap().len(), w.len());
        }
    }
}
