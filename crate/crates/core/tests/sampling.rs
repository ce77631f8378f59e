use cbqsdc_core::qcore::{born_distribution, make_bell, measure, tensor, Basis, BellIndex, Outcome};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use statrs::distribution::{ChiSquared, ContinuousCDF};

#[test]
fn swap_measurement_matches_born_rule() {
    let s = tensor(&make_bell(BellIndex::PHI_PLUS), &make_bell(BellIndex::PHI_MINUS));
    let table = born_distribution(&s, Basis::Bell, &[0, 2]).unwrap();
    for p in &table.probabilities {
        assert!((p - 0.25).abs() < 1e-12);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let n = 100_000;
    let mut counts = [0f64; 4];
    for _ in 0..n {
        let (rec, _) = measure(&s, Basis::Bell, &[0, 2], &mut rng).unwrap();
        let Outcome::Bell(b) = rec.outcome else { panic!() };
        counts[b.index()] += 1.0;
    }
    let expected = n as f64 / 4.0;
    let chi2: f64 = counts.iter().map(|c| (c - expected).powi(2) / expected).sum();
    let p = 1.0 - ChiSquared::new(3.0).unwrap().cdf(chi2);
    assert!(p > 0.001, "chi2 {chi2} p {p}");
    for c in counts {
        assert!((c / n as f64 - 0.25).abs() < 0.01);
    }
}
