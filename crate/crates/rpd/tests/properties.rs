//! Cross-module invariants: order statistics against a sorting oracle,
//! scaling-distance/containment consistency, equivariances, metric
//! identities, and the 2D tightness trend against an exact hull oracle.

use proptest::prelude::*;

use rpd::baselines::auroc;
use rpd::descriptor::{score, ClassDescriptor, RpdModel};
use rpd::geometry::{ell_max, fit_rpd, CentralPointPolicy, DirectionSet, HPolytope, PointCloud};
use rpd::lp::enumerate_vertices;
use rpd::rng::{derive_seed, fill_standard_normal, rng_from_seed};

fn gaussian_cloud(n: usize, d: usize, seed: u64) -> PointCloud {
    let mut rng = rng_from_seed(seed);
    let mut data = vec![0.0; n * d];
    fill_standard_normal(&mut rng, &mut data);
    PointCloud::from_flat(d, data).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ell_max_matches_sorting(values in prop::collection::vec(-1e6f64..1e6, 1..40), ell_raw in 0usize..40) {
        let ell = 1 + ell_raw % values.len();
        let mut sorted = values.clone();
        sorted.sort_by(|a, b| b.total_cmp(a));
        prop_assert_eq!(ell_max(&values, ell).unwrap(), sorted[ell - 1]);
    }

    #[test]
    fn scaling_distance_agrees_with_containment(seed in 0u64..500) {
        let d = 2 + (seed % 3) as usize;
        let cloud = gaussian_cloud(12 + (seed % 20) as usize, d, derive_seed(seed, 1));
        let dirs = DirectionSet::sample(4 * d + 4, d, derive_seed(seed, 2)).unwrap();
        let p = fit_rpd(&cloud, &dirs, 1).unwrap();
        let center = cloud.mean();
        if !p.is_strictly_interior(&center).unwrap() {
            return Ok(());
        }
        let mut rng = rng_from_seed(derive_seed(seed, 3));
        let mut q = vec![0.0; d];
        for _ in 0..20 {
            fill_standard_normal(&mut rng, &mut q);
            for v in &mut q { *v *= 2.5; }
            let sd = p.scaling_distance_from(&center, &q).unwrap();
            let inside = p.contains(&q, 0.0).unwrap();
            if (sd - 1.0).abs() > 1e-9 {
                prop_assert_eq!(sd <= 1.0, inside);
            }
        }
    }

    #[test]
    fn translation_equivariance_of_offsets_and_distance(seed in 0u64..500) {
        let d = 2 + (seed % 3) as usize;
        let n = 10 + (seed % 15) as usize;
        let cloud = gaussian_cloud(n, d, derive_seed(seed, 1));
        let dirs = DirectionSet::sample(3 * d + 2, d, derive_seed(seed, 2)).unwrap();
        let mut rng = rng_from_seed(derive_seed(seed, 3));
        let mut t = vec![0.0; d];
        fill_standard_normal(&mut rng, &mut t);
        for v in &mut t { *v *= 3.0; }

        let p = fit_rpd(&cloud, &dirs, 1).unwrap();
        let shifted = fit_rpd(&cloud.translated(&t).unwrap(), &dirs, 1).unwrap();
        for ((y, b), b_shifted) in dirs.iter().zip(p.offsets()).zip(shifted.offsets()) {
            let expected = b + y.iter().zip(&t).map(|(yv, tv)| yv * tv).sum::<f64>();
            let scale = 1.0 + expected.abs();
            prop_assert!((b_shifted - expected).abs() <= 1e-12 * scale);
        }

        let center = cloud.mean();
        if p.is_strictly_interior(&center).unwrap() {
            let mut query = vec![0.0; d];
            fill_standard_normal(&mut rng, &mut query);
            let sd = p.scaling_distance_from(&center, &query).unwrap();
            let translated = p.translated(&t).unwrap();
            let center_t: Vec<f64> = center.iter().zip(&t).map(|(c, tv)| c + tv).collect();
            let query_t: Vec<f64> = query.iter().zip(&t).map(|(q, tv)| q + tv).collect();
            let sd_t = translated.scaling_distance_from(&center_t, &query_t).unwrap();
            prop_assert!((sd - sd_t).abs() <= 1e-12 * (1.0 + sd.abs()));
        }
    }

    #[test]
    fn auroc_invariant_under_monotone_transforms(
        scores in prop::collection::vec(-100f64..100.0, 2..50),
        flags in prop::collection::vec(any::<bool>(), 2..50),
    ) {
        let n = scores.len().min(flags.len());
        // Quantize so the transforms below cannot merge two distinct scores
        // through rounding; the steps also inject genuine ties.
        let scores: Vec<f64> = scores[..n].iter().map(|s| (s * 8.0).round() / 8.0).collect();
        let mut flags = flags[..n].to_vec();
        flags[0] = true;
        flags[n - 1] = false;
        let base = auroc(&scores, &flags).unwrap();
        let scaled: Vec<f64> = scores.iter().map(|s| 3.0 * s + 7.0).collect();
        prop_assert_eq!(base, auroc(&scaled, &flags).unwrap());
        let curved: Vec<f64> = scores.iter().map(|s| s + s * s * s / 3e4).collect();
        prop_assert_eq!(base, auroc(&curved, &flags).unwrap());
    }

    #[test]
    fn auroc_complement_sums_to_one(
        quantized in prop::collection::vec(0u8..12, 2..60),
        flags in prop::collection::vec(any::<bool>(), 2..60),
    ) {
        let n = quantized.len().min(flags.len());
        let scores: Vec<f64> = quantized[..n].iter().map(|&q| q as f64 / 4.0).collect();
        let mut flags = flags[..n].to_vec();
        flags[0] = true;
        flags[n - 1] = false;
        let forward = auroc(&scores, &flags).unwrap();
        let negated: Vec<f64> = scores.iter().map(|s| -s).collect();
        let backward = auroc(&negated, &flags).unwrap();
        prop_assert!((forward + backward - 1.0).abs() <= 1e-15);
    }
}

#[test]
fn direction_superset_shrinks_polytope() {
    for seed in 0..50u64 {
        let d = 2 + (seed % 3) as usize;
        let cloud = gaussian_cloud(25, d, derive_seed(seed, 10));
        let base = DirectionSet::sample(2 * d + 2, d, derive_seed(seed, 11)).unwrap();
        let extra = DirectionSet::sample(d + 3, d, derive_seed(seed, 12)).unwrap();
        let superset = base.extended(&extra).unwrap();
        let p = fit_rpd(&cloud, &base, 1).unwrap();
        let p_super = fit_rpd(&cloud, &superset, 1).unwrap();
        // Shared directions produce bitwise-identical offsets, so a point of
        // the larger-direction polytope satisfies the smaller system.
        assert_eq!(&p_super.offsets()[..base.len()], p.offsets());
        let mut rng = rng_from_seed(derive_seed(seed, 13));
        let mut q = vec![0.0; d];
        for _ in 0..50 {
            fill_standard_normal(&mut rng, &mut q);
            for v in &mut q {
                *v *= 2.0;
            }
            if p_super.contains(&q, 0.0).unwrap() {
                assert!(p.contains(&q, 0.0).unwrap());
            }
        }
    }
}

#[test]
fn rotation_equivariance_of_offsets() {
    for seed in 0..50u64 {
        let d = 2 + (seed % 4) as usize;
        let n = 15 + (seed % 10) as usize;
        let cloud = gaussian_cloud(n, d, derive_seed(seed, 20));
        let dirs = DirectionSet::sample(3 * d, d, derive_seed(seed, 21)).unwrap();
        let rotation = random_orthogonal(d, derive_seed(seed, 22));
        let rotated_cloud = PointCloud::from_rows(
            cloud.iter().map(|x| apply(&rotation, x)).collect(),
        )
        .unwrap();
        let rotated_dirs = DirectionSet::from_vectors(
            dirs.iter().map(|y| apply(&rotation, y)).collect(),
        )
        .unwrap();
        let p = fit_rpd(&cloud, &dirs, 2).unwrap();
        let p_rot = fit_rpd(&rotated_cloud, &rotated_dirs, 2).unwrap();
        for (a, b) in p.offsets().iter().zip(p_rot.offsets()) {
            assert!((a - b).abs() <= 1e-9, "offsets {a} vs {b}");
        }
    }
}

/// Orthonormal matrix from Gram-Schmidt on a Gaussian matrix, row-major.
fn random_orthogonal(d: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = rng_from_seed(seed);
    loop {
        let mut rows: Vec<Vec<f64>> = Vec::with_capacity(d);
        for _ in 0..d {
            let mut row = vec![0.0; d];
            fill_standard_normal(&mut rng, &mut row);
            rows.push(row);
        }
        let mut ok = true;
        for i in 0..d {
            for j in 0..i {
                let proj: f64 = rows[i].iter().zip(&rows[j]).map(|(a, b)| a * b).sum();
                let prev = rows[j].clone();
                for (v, p) in rows[i].iter_mut().zip(&prev) {
                    *v -= proj * p;
                }
            }
            let norm: f64 = rows[i].iter().map(|v| v * v).sum::<f64>().sqrt();
            if norm < 1e-6 {
                ok = false;
                break;
            }
            for v in rows[i].iter_mut() {
                *v /= norm;
            }
        }
        if ok {
            return rows;
        }
    }
}

fn apply(matrix: &[Vec<f64>], x: &[f64]) -> Vec<f64> {
    matrix
        .iter()
        .map(|row| row.iter().zip(x).map(|(a, b)| a * b).sum())
        .collect()
}

/// Exact 2D convex hull (monotone chain) returning its area.
fn hull_area_2d(points: &PointCloud) -> f64 {
    let mut pts: Vec<(f64, f64)> = points.iter().map(|p| (p[0], p[1])).collect();
    pts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    pts.dedup();
    let cross = |o: (f64, f64), a: (f64, f64), b: (f64, f64)| {
        (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0)
    };
    let mut lower: Vec<(f64, f64)> = Vec::new();
    for &p in &pts {
        while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], p) <= 0.0 {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<(f64, f64)> = Vec::new();
    for &p in pts.iter().rev() {
        while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], p) <= 0.0 {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    polygon_area(&lower)
}

fn polygon_area(vertices: &[(f64, f64)]) -> f64 {
    let n = vertices.len();
    let mut twice = 0.0;
    for i in 0..n {
        let (x1, y1) = vertices[i];
        let (x2, y2) = vertices[(i + 1) % n];
        twice += x1 * y2 - x2 * y1;
    }
    twice.abs() / 2.0
}

fn polytope_area_2d(p: &HPolytope) -> f64 {
    let vertices = enumerate_vertices(p, 4).unwrap();
    assert!(vertices.len() >= 3);
    let cx = vertices.iter().map(|v| v[0]).sum::<f64>() / vertices.len() as f64;
    let cy = vertices.iter().map(|v| v[1]).sum::<f64>() / vertices.len() as f64;
    let mut ordered: Vec<(f64, f64)> = vertices.iter().map(|v| (v[0], v[1])).collect();
    ordered.sort_by(|a, b| {
        (a.1 - cy)
            .atan2(a.0 - cx)
            .partial_cmp(&(b.1 - cy).atan2(b.0 - cx))
            .unwrap()
    });
    polygon_area(&ordered)
}

#[test]
fn two_d_tightness_improves_as_directions_double() {
    let cloud = gaussian_cloud(200, 2, 314159);
    let exact = hull_area_2d(&cloud);
    let mut medians = Vec::new();
    for (mi, m) in [8usize, 16, 32, 64, 128, 256, 512].into_iter().enumerate() {
        let mut excesses: Vec<f64> = (0..21u64)
            .map(|s| {
                let dirs =
                    DirectionSet::sample(m, 2, derive_seed(271828, (mi as u64) << 32 | s)).unwrap();
                let p = fit_rpd(&cloud, &dirs, 1).unwrap();
                polytope_area_2d(&p) - exact
            })
            .collect();
        excesses.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let median = excesses[excesses.len() / 2];
        assert!(median >= -1e-9, "outer approximation cannot be smaller");
        medians.push(median);
    }
    for pair in medians.windows(2) {
        assert!(
            pair[1] <= pair[0] + 1e-12,
            "median excess increased: {medians:?}"
        );
    }
}

#[test]
fn mirrored_instance_argmin_agreement() {
    // Two congruent clusters mirrored across the hyperplane x0 = 0, with a
    // mirror-symmetric shared direction set: the polytope score and the
    // centroid score provably agree on every training query.
    let d = 4;
    let n = 60;
    let half = 10.0;
    let mut rng = rng_from_seed(99);
    let mut rows_a = Vec::new();
    for _ in 0..n {
        let mut p = vec![0.0; d];
        fill_standard_normal(&mut rng, &mut p);
        p[0] -= half;
        rows_a.push(p);
    }
    let mirror = |p: &[f64]| {
        let mut q = p.to_vec();
        q[0] = -q[0];
        q
    };
    let rows_b: Vec<Vec<f64>> = rows_a.iter().map(|p| mirror(p)).collect();
    let cloud_a = PointCloud::from_rows(rows_a.clone()).unwrap();
    let cloud_b = PointCloud::from_rows(rows_b.clone()).unwrap();

    let base = DirectionSet::sample(20, d, 1234).unwrap();
    let mirrored = DirectionSet::from_vectors(base.iter().map(mirror).collect()).unwrap();
    let shared = base.extended(&mirrored).unwrap();

    let mut p_a = fit_rpd(&cloud_a, &shared, 1).unwrap();
    p_a.set_central_point(cloud_a.mean(), CentralPointPolicy::SampleMean)
        .unwrap();
    let mut p_b = fit_rpd(&cloud_b, &shared, 1).unwrap();
    p_b.set_central_point(cloud_b.mean(), CentralPointPolicy::SampleMean)
        .unwrap();
    let model = RpdModel::from_parts(
        d,
        shared.len(),
        1,
        0,
        true,
        vec![
            ClassDescriptor::new(0, n, p_a).unwrap(),
            ClassDescriptor::new(1, n, p_b).unwrap(),
        ],
    )
    .unwrap();

    let data = rpd::data::LabeledDataset::from_rows(
        rows_a
            .iter()
            .map(|p| (p.clone(), 0usize))
            .chain(rows_b.iter().map(|p| (p.clone(), 1usize)))
            .collect(),
    )
    .unwrap();
    let centroids = rpd::baselines::fit_centroids(&data).unwrap();
    for (point, label) in data.iter() {
        let rpd_argmin = score(&model, point).unwrap().argmin_label;
        let centroid_argmin = rpd::baselines::centroid_score(&centroids, point)
            .unwrap()
            .argmin_label;
        assert_eq!(rpd_argmin, centroid_argmin);
        assert_eq!(rpd_argmin, label);
    }
}
