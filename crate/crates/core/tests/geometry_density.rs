use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use dbmapper::density::{smooth_density, window_weight, width_multiplier};
use dbmapper::geometry::{dist, hausdorff_estimate, knn, modulus_of_continuity, rips_edges};
use dbmapper::synthgen::{component_labels, gen_circle, gen_three_component, SynthSpec};
use dbmapper::{DensityProfile, LensMap, PointCloud, WidthScaler};

fn uniform(n: usize, dim: usize, seed: u64) -> PointCloud {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    PointCloud::new((0..n).map(|_| (0..dim).map(|_| rng.gen::<f64>()).collect()).collect()).unwrap()
}

fn brute_knn(cloud: &PointCloud, i: usize, k: usize) -> Vec<usize> {
    let mut others: Vec<(f64, usize)> = (0..cloud.len())
        .filter(|&j| j != i)
        .map(|j| (dist(cloud.point(i), cloud.point(j)), j))
        .collect();
    others.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    others.into_iter().take(k).map(|(_, j)| j).collect()
}

#[test]
fn knn_matches_sort_oracle() {
    let cloud = uniform(50, 2, 7);
    let g = knn(&cloud, 5).unwrap();
    for i in 0..cloud.len() {
        assert_eq!(g.neighbors(i), brute_knn(&cloud, i, 5).as_slice(), "point {i}");
    }
}

#[test]
fn knn_handles_duplicate_points() {
    let cloud = PointCloud::new(vec![vec![0.0], vec![0.0], vec![0.0], vec![1.0], vec![2.0]]).unwrap();
    let g = knn(&cloud, 2).unwrap();
    for i in 0..cloud.len() {
        assert_eq!(g.neighbors(i), brute_knn(&cloud, i, 2).as_slice());
    }
}

#[test]
fn hausdorff_matches_double_loop() {
    let (a, _) = gen_circle(200, 1.0, 0.05, 3).unwrap();
    let (b, _) = gen_circle(2000, 1.0, 0.0, 3).unwrap();
    let directed = |x: &PointCloud, y: &PointCloud| {
        x.iter()
            .map(|p| y.iter().map(|q| dist(p, q)).fold(f64::INFINITY, f64::min))
            .fold(0.0, f64::max)
    };
    let expected = directed(&a, &b).max(directed(&b, &a));
    assert_eq!(hausdorff_estimate(&a, &b).unwrap(), expected);
}

#[test]
fn modulus_matches_pair_scan() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let xs: Vec<f64> = (0..100).map(|_| rng.gen::<f64>() * 10.0).collect();
    let cloud = PointCloud::new(xs.iter().map(|&x| vec![x]).collect()).unwrap();
    let lens = LensMap::new(xs.clone()).unwrap();
    let mut expected: f64 = 0.0;
    for i in 0..100 {
        for j in 0..100 {
            if (xs[i] - xs[j]).abs() <= 0.3 {
                expected = expected.max((xs[i] - xs[j]).abs());
            }
        }
    }
    assert_eq!(modulus_of_continuity(&cloud, &lens, 0.3).unwrap(), expected);
}

#[test]
fn rips_edges_match_pair_scan() {
    let cloud = uniform(120, 2, 21);
    let mut expected = Vec::new();
    for i in 0..cloud.len() {
        for j in i + 1..cloud.len() {
            if dist(cloud.point(i), cloud.point(j)) <= 0.1 {
                expected.push((i, j));
            }
        }
    }
    assert_eq!(rips_edges(&cloud, 0.1), expected);
}

fn small_three(seed: u64) -> SynthSpec {
    let mut spec = SynthSpec::three_component(seed);
    for (c, n) in spec.components.iter_mut().zip([30, 20, 10]) {
        c.count = n;
    }
    spec
}

#[test]
fn raw_density_matches_neighbour_spread() {
    let (cloud, lens) = gen_three_component(&small_three(5)).unwrap();
    let profile = DensityProfile::compute(&cloud, &lens, 10).unwrap();
    for i in 0..cloud.len() {
        let vals: Vec<f64> = brute_knn(&cloud, i, 10).iter().map(|&j| lens.get(j)).collect();
        let spread = vals.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
            - vals.iter().cloned().fold(f64::INFINITY, f64::min);
        assert_eq!(profile.raw[i], spread);
    }
}

#[test]
fn smoothing_matches_dense_convolution() {
    let cloud = uniform(100, 3, 2);
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    let raw: Vec<f64> = (0..100).map(|_| rng.gen::<f64>()).collect();
    let widths: Vec<f64> = (0..3)
        .map(|d| {
            let (lo, hi) = cloud.axis_range(d);
            (hi - lo) / 10.0
        })
        .collect();
    let smoothed = smooth_density(&raw, &cloud).unwrap();
    for i in 0..100 {
        let (mut num, mut den) = (0.0, 0.0);
        for j in 0..100 {
            let mut w = 1.0;
            for d in 0..3 {
                let u = (cloud.point(i)[d] - cloud.point(j)[d]).abs() / widths[d];
                w *= if u < 1.0 { 0.5 * (1.0 + (std::f64::consts::PI * u).cos()) } else { 0.0 };
            }
            num += w * raw[j];
            den += w;
        }
        assert!((smoothed[i] - num / den).abs() < 1e-12);
        assert_eq!(window_weight(cloud.point(i), cloud.point(i), &widths), 1.0);
    }
}

#[test]
fn multiplier_is_monotone_and_bounded() {
    let profile = DensityProfile::from_parts(vec![], vec![0.5, 1.0, 1.5, 2.0, 4.0]);
    let scaler = WidthScaler::new(3.0, 2.0).unwrap();
    let mut prev = 1.0;
    for b in [0.0, 0.5, 1.0, 1.5, 2.0, 3.0, 10.0] {
        let c = width_multiplier(b, &profile, &scaler);
        assert!(c >= prev && c > 1.0 && c < 9.0);
        prev = c;
    }
    assert_eq!(width_multiplier(5.0, &profile, &WidthScaler::standard()), 1.0);
}

#[test]
fn dense_component_has_lowest_density_spread() {
    let spec = SynthSpec::three_component(42);
    let (cloud, lens) = gen_three_component(&spec).unwrap();
    let profile = DensityProfile::compute(&cloud, &lens, 15).unwrap();
    let labels = component_labels(&spec);
    let mean = |c: usize| {
        let v: Vec<f64> = labels.iter().zip(&profile.smoothed).filter(|(l, _)| **l == c).map(|(_, b)| *b).collect();
        v.iter().sum::<f64>() / v.len() as f64
    };
    assert!(mean(0) < mean(1) && mean(1) < mean(2));
}
