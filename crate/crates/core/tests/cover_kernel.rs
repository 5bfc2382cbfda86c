use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use dbmapper::cover::{
    coarse_fine_covers, data_spaced_breakpoints, data_spaced_cover, kerneled_resolution, morse_spaced_cover,
    validate_gomic,
};
use dbmapper::kernel::{build_kerneled_cover, check_sufficient_width};
use dbmapper::synthgen::{gen_three_component, SynthSpec};
use dbmapper::{DensityProfile, KernelShape, KernelSpec, LensMap, WidthScaler};

fn uniform_lens(n: usize, seed: u64) -> LensMap {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut v: Vec<f64> = (0..n).map(|_| rng.gen::<f64>() * 10.0).collect();
    v[0] = 0.0;
    v[1] = 10.0;
    LensMap::new(v).unwrap()
}

#[test]
fn morse_cover_first_interval() {
    let cover = morse_spaced_cover(0.0, 10.0, 5, 0.5).unwrap();
    let first = cover.intervals()[0];
    assert!((first.lo + 0.25).abs() < 1e-12 && (first.hi - 2.25).abs() < 1e-12);
    assert_eq!(cover.clipped(0).0, 0.0);
    for i in 1..3 {
        let (lo, hi) = cover.overlap(i).unwrap();
        assert!((hi - lo - 0.5).abs() < 1e-12);
        let frac = (hi - lo) / cover.intervals()[i].length();
        assert!((frac - 0.25 / 1.25).abs() < 1e-12);
    }
    assert!(validate_gomic(&cover, 0.0, 10.0).is_valid());
}

#[test]
fn data_spaced_breakpoints_on_ten_values() {
    assert_eq!(data_spaced_breakpoints(10, 3).unwrap(), vec![0, 3, 6, 9]);
}

#[test]
fn data_spaced_cover_balances_skewed_sample() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let mut v: Vec<f64> = (0..900).map(|_| rng.gen::<f64>()).collect();
    v.extend((0..100).map(|_| 1.0 + 9.0 * rng.gen::<f64>()));
    let lens = LensMap::new(v).unwrap();
    let cover = data_spaced_cover(&lens, 10, 0.3).unwrap();
    let mut sorted = lens.values().to_vec();
    sorted.sort_by(f64::total_cmp);
    let breaks = data_spaced_breakpoints(1000, 10).unwrap();
    for w in breaks.windows(2) {
        let (a, b) = (sorted[w[0]], sorted[w[1]]);
        let count = lens.values().iter().filter(|&&t| a <= t && t < b).count();
        assert!((99..=101).contains(&count), "{count}");
    }
    assert_eq!(cover.len(), 10);
}

#[test]
fn pullback_resolution_on_dense_data() {
    let lens = uniform_lens(10_000, 5);
    let cover = morse_spaced_cover(0.0, 10.0, 5, 0.5).unwrap();
    let ones = vec![1.0; lens.len()];
    let sets = build_kerneled_cover(&lens, &cover, &KernelSpec::square(), &ones).unwrap();
    let r = kerneled_resolution(&sets, &lens).unwrap();
    assert!((r - 2.5).abs() < 0.05, "{r}");

    let twos = vec![2.0; lens.len()];
    let wide = build_kerneled_cover(&lens, &cover, &KernelSpec::square(), &twos).unwrap();
    let r2 = kerneled_resolution(&wide, &lens).unwrap();
    assert!((r2 - 5.0).abs() < 0.05, "{r2}");

    let (coarse, fine) = coarse_fine_covers(&sets, &lens).unwrap();
    for i in 1..4 {
        let (orig, c, f) = (cover.intervals()[i], coarse.intervals()[i], fine.intervals()[i]);
        for iv in [c, f] {
            assert!((iv.lo - orig.lo).abs() < 0.05 && (iv.hi - orig.hi).abs() < 0.05);
        }
    }
}

#[test]
fn coarse_is_at_least_fine_on_variable_density() {
    let (cloud, lens) = gen_three_component(&SynthSpec::three_component(42)).unwrap();
    let profile = DensityProfile::compute(&cloud, &lens, 15).unwrap();
    let cover = morse_spaced_cover(lens.lo(), lens.hi(), 10, 0.5).unwrap();
    let c = profile.multipliers(&WidthScaler::new(1.5, 1.0).unwrap());
    let sets = build_kerneled_cover(&lens, &cover, &KernelSpec::square(), &c).unwrap();
    let (coarse, fine) = coarse_fine_covers(&sets, &lens).unwrap();
    assert!(coarse.resolution() > fine.resolution());

    // at c_max = 3 the sparse columns stretch sets across three intervals
    let c = profile.multipliers(&WidthScaler::default());
    let sets = build_kerneled_cover(&lens, &cover, &KernelSpec::square(), &c).unwrap();
    assert!(matches!(coarse_fine_covers(&sets, &lens), Err(dbmapper::Error::NonRegularCover(_))));
}

#[test]
fn gaussian_width_requires_c_at_least_one() {
    let spec = KernelSpec::gaussian(0.1).unwrap();
    let grid: Vec<(f64, f64)> = (0..100)
        .flat_map(|i| (0..100).map(move |j| (i as f64 / 100.0, 1.0 + 2.0 * j as f64 / 99.0)))
        .collect();
    assert!(check_sufficient_width(&spec, 1.0, &grid));
    let halved: Vec<(f64, f64)> = grid.iter().map(|&(d, _)| (d, 0.5)).collect();
    assert!(!check_sufficient_width(&spec, 1.0, &halved));
}

#[test]
fn kerneled_sets_contain_pullbacks_on_random_data() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let lens = uniform_lens(2000, 11);
    let c: Vec<f64> = (0..lens.len()).map(|_| 1.0 + 3.0 * rng.gen::<f64>()).collect();
    let cover = morse_spaced_cover(0.0, 10.0, 8, 0.4).unwrap();
    for shape in [KernelShape::Square, KernelShape::Gaussian] {
        let spec = KernelSpec::new(shape, 0.1).unwrap();
        let sets = build_kerneled_cover(&lens, &cover, &spec, &c).unwrap();
        for (set, iv) in sets.iter().zip(cover.intervals()) {
            for i in 0..lens.len() {
                if iv.contains(lens.get(i)) {
                    assert!(set.contains(i));
                }
            }
        }
    }
}

proptest! {
    #[test]
    fn widening_is_monotone(seed in 0u64..1000, scale in 1.0f64..3.0, n in 2usize..12, g in 0.1f64..0.9) {
        let lens = uniform_lens(300, seed);
        let cover = morse_spaced_cover(0.0, 10.0, n, g).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xabc);
        let c: Vec<f64> = (0..lens.len()).map(|_| 1.0 + rng.gen::<f64>()).collect();
        let c2: Vec<f64> = c.iter().map(|x| x * scale).collect();
        for shape in [KernelShape::Square, KernelShape::Gaussian] {
            let spec = KernelSpec::new(shape, 0.2).unwrap();
            let narrow = build_kerneled_cover(&lens, &cover, &spec, &c).unwrap();
            let wide = build_kerneled_cover(&lens, &cover, &spec, &c2).unwrap();
            for (a, b) in narrow.iter().zip(&wide) {
                prop_assert!(a.indices().all(|i| b.contains(i)));
            }
        }
    }

    #[test]
    fn morse_covers_are_gomic(lo in -50.0f64..50.0, span in 0.1f64..100.0, n in 1usize..40, g in 0.01f64..0.99) {
        let cover = morse_spaced_cover(lo, lo + span, n, g).unwrap();
        let report = validate_gomic(&cover, lo, lo + span);
        prop_assert!(report.is_valid(), "{:?}", report);
    }
}
