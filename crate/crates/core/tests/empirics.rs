use proptest::prelude::*;
use rand::Rng;
use rand_distr::{StandardNormal, Uniform};
use symspec::empirics::{
    annulus_filter, bulk_rescale, edge_rescale, edge_unscale, haar_lemma_check, histogram,
    ks_distance, ks_distance_values, uniform_edges, EdgePoint, EmpiricalDistribution,
};
use symspec::ensembles::{derive_stream, EnsembleKind, EnsembleSpec};
use symspec::laws::exact::LawContext;
use symspec::spectra::{spectral_records_with, SpectralRecord, Solver};
use symspec::specfun::erf;
use symspec::C64;

fn uniforms(seed: u64, m: usize) -> Vec<f64> {
    let mut rng = derive_stream(seed, 0);
    let u = Uniform::new(0.0, 1.0).unwrap();
    (0..m).map(|_| rng.sample(u)).collect()
}

fn normal_cdf(x: f64) -> f64 {
    0.5 * (1.0 + erf(x / std::f64::consts::SQRT_2))
}

#[test]
fn uniform_histogram_is_flat() {
    let h = histogram(&uniforms(1, 1_000_000), &uniform_edges(0.0, 1.0, 10)).unwrap();
    for d in &h.densities {
        assert!((d - 1.0).abs() < 0.02, "{d}");
    }
    let mass: f64 = h.densities.iter().zip(h.edges.windows(2)).map(|(d, w)| d * (w[1] - w[0])).sum();
    assert!((mass - 1.0).abs() < 1e-12);
    assert_eq!(h.out_of_range, 0);
}

#[test]
fn ks_against_wrong_cdf() {
    let e = EmpiricalDistribution::new(uniforms(2, 10_000)).unwrap();
    let d = ks_distance(&e, |x: f64| x.clamp(0.0, 1.0).powi(2));
    assert!((d - 0.25).abs() < 0.02, "{d}");
}

#[test]
fn ks_own_cdf_at_large_sample() {
    let m = 100_000;
    let mut rng = derive_stream(3, 0);
    let xs: Vec<f64> = (0..m).map(|_| rng.sample(StandardNormal)).collect();
    let e = EmpiricalDistribution::new(xs).unwrap();
    let d = ks_distance(&e, normal_cdf);
    assert!(d <= 1.95 / (m as f64).sqrt(), "{d}");
    let vals: Vec<f64> = e.samples().iter().map(|&x| normal_cdf(x)).collect();
    let d2 = ks_distance_values(&e, &vals).unwrap();
    assert!((d - d2).abs() < 1e-12);
}

#[test]
fn kolmogorov_quantile_over_trials() {
    let m = 10_000;
    let mut ds: Vec<f64> = (0..200)
        .map(|trial| {
            let e = EmpiricalDistribution::new(uniforms(1000 + trial, m)).unwrap();
            ks_distance(&e, |x: f64| x.clamp(0.0, 1.0))
        })
        .collect();
    ds.sort_by(f64::total_cmp);
    let q99 = ds[197];
    assert!(q99 <= 1.63 / (m as f64).sqrt() * 1.25, "{q99}");
}

#[test]
fn annulus_count_matches_radial_cdf() {
    let n = 10;
    let matrices = 10_000;
    let spec = EnsembleSpec::new(EnsembleKind::AiGaussian, n, 11).unwrap();
    let recs: Vec<SpectralRecord<f64>> = (0..matrices)
        .flat_map(|k| spectral_records_with(&spec.matrix(k), k, Solver::Faer).unwrap())
        .collect();
    let a = annulus_filter(&recs, 0.0, 0.2).unwrap();
    let mass = LawContext::<f64>::new(n as u32).unwrap().radial_cdf(0.2).unwrap();
    let expected = (n * matrices as usize) as f64 * mass;
    let got = a.records.len() as f64;
    assert!((got / expected - 1.0).abs() < 0.05, "{got} vs {expected}");
}

#[test]
fn rescaled_boundary_point() {
    let rec = SpectralRecord {
        z: C64::new(1.0, 1.0),
        t: Some(4.0),
        residual: 0.0,
        matrix_index: 0,
        defective: false,
    };
    let e = edge_rescale(16, &[rec]);
    assert!(e.values[0].s.abs() < 1e-15);
    assert_eq!(e.values[0].sigma, 1.0);
    assert_eq!(bulk_rescale(16, &[rec]).values, vec![0.25]);
}

#[test]
fn haar_check_trivial_and_cubic() {
    let mut rng = derive_stream(4, 0);
    let c = haar_lemma_check(4, |_y: f64| 1.0, 1000, &mut rng).unwrap();
    assert!((c.mc - 1.0).abs() < 1e-12 && (c.quad - 1.0).abs() < 1e-10 && c.z_score == 0.0);
    let c = haar_lemma_check(2, |y: f64| y, 100_000, &mut rng).unwrap();
    assert!((c.quad - 2.0 / 3.0).abs() < 1e-12);
    assert!(c.z_score.abs() <= 3.0, "{c:?}");
    let c = haar_lemma_check(7, |y: f64| y.powi(3), 100_000, &mut rng).unwrap();
    assert!(c.z_score.abs() <= 3.0, "{c:?}");
    assert!(haar_lemma_check(1, |y: f64| y, 1000, &mut rng).is_err());
    assert!(haar_lemma_check(3, |y: f64| y, 10, &mut rng).is_err());
}

proptest! {
    #[test]
    fn ecdf_is_monotone_in_unit_range(xs in proptest::collection::vec(-10.0_f64..10.0, 1..60), probe in proptest::collection::vec(-12.0_f64..12.0, 2..20)) {
        let e = EmpiricalDistribution::new(xs).unwrap();
        let mut probe = probe;
        probe.sort_by(f64::total_cmp);
        let vals: Vec<f64> = probe.iter().map(|&x| e.ecdf(x)).collect();
        prop_assert!(vals.windows(2).all(|w| w[0] <= w[1]));
        prop_assert!(vals.iter().all(|&v| (0.0..=1.0).contains(&v)));
        prop_assert_eq!(e.ecdf(e.samples()[0] - 1.0), 0.0);
        prop_assert_eq!(e.ecdf(*e.samples().last().unwrap()), 1.0);
    }

    #[test]
    fn histogram_conserves_mass(xs in proptest::collection::vec(-2.0_f64..3.0, 1..200)) {
        let edges = uniform_edges(0.0, 1.0, 7);
        match histogram(&xs, &edges) {
            Ok(h) => prop_assert_eq!(h.counts.iter().sum::<u64>() + h.out_of_range, xs.len() as u64),
            Err(_) => prop_assert!(xs.iter().all(|&x| !(0.0..1.0).contains(&x))),
        }
    }

    #[test]
    fn merge_is_order_independent(a in proptest::collection::vec(-5.0_f64..5.0, 1..50), b in proptest::collection::vec(-5.0_f64..5.0, 1..50)) {
        let ea = EmpiricalDistribution::new(a.clone()).unwrap();
        let eb = EmpiricalDistribution::new(b.clone()).unwrap();
        let ab = ea.merge(&eb);
        prop_assert_eq!(&ab, &eb.merge(&ea));
        let mut all = a;
        all.extend(b);
        prop_assert_eq!(ab, EmpiricalDistribution::new(all).unwrap());
    }

    #[test]
    fn edge_rescale_inverts(r in 0.5_f64..1.8, theta in 0.0_f64..6.28, t in 0.0_f64..1e4, n in 2_usize..5000) {
        let rec = SpectralRecord { z: C64::from_polar(r, theta), t: Some(t), residual: 0.0, matrix_index: 0, defective: false };
        let p: EdgePoint<f64> = edge_rescale(n, &[rec]).values[0];
        let (r2, t2) = edge_unscale(n, p);
        prop_assert!((r2 - r).abs() <= 1e-12 * r);
        prop_assert!((t2 - t).abs() <= 1e-12 * t.max(1e-300));
    }

    #[test]
    fn ks_is_in_unit_interval(xs in proptest::collection::vec(-3.0_f64..3.0, 1..100)) {
        let e = EmpiricalDistribution::new(xs).unwrap();
        let d = ks_distance(&e, normal_cdf);
        prop_assert!((0.0..=1.0).contains(&d));
    }
}
